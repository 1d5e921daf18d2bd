//! Uplink Monte-Carlo harness: sequential pilot training, per-column channel
//! denoising, L-MMSE detection and BER/MSE accumulation.
//!
//! Every random quantity is drawn from a substream keyed by its role and the
//! trial/user index, and all estimators within a trial see the same channel,
//! pilot noise, data bits and receiver noise. Results are therefore a pure
//! function of the configuration and independent of the worker count.

mod lmmse;
mod qam;

pub use lmmse::{lmmse_detect, ChannelMatrix, LmmseDetector};
pub use qam::{demap_symbols, map_bits, Constellation};

use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_complex::Complex;
use rand::Rng;
use rayon::prelude::*;
use serde::Deserialize;

use crate::channel::{observe_pilot, sample_scenario, synthesize_channel, PilotModel, ScenarioLabel};
use crate::denoiser::{beaches_denoise, oracle_mse_tau, soft_threshold, Variant};
use crate::error::{Error, Result};
use crate::fixedpoint::beaches_denoise_fixed;
use crate::numerics::{fft_unitary, ifft_unitary, mean_sq_error, ComplexVector, RngStream};

/// Data slots transmitted per channel realization.
pub const DEFAULT_SLOTS: usize = 100;

// substream roles
const KEY_CHANNEL: u64 = 1;
const KEY_PILOT: u64 = 2;
const KEY_BITS: u64 = 3;
const KEY_DATA_NOISE: u64 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Estimator {
    /// Raw pilot observation.
    Ml,
    BeachesExact,
    BeachesHw,
    BeachesFixedPoint,
    /// Soft-thresholding with the threshold that minimizes the true MSE.
    OracleMse,
    PerfectCsi,
}

impl Estimator {
    pub const ALL: [Estimator; 6] = [
        Estimator::Ml,
        Estimator::BeachesExact,
        Estimator::BeachesHw,
        Estimator::BeachesFixedPoint,
        Estimator::OracleMse,
        Estimator::PerfectCsi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Estimator::Ml => "ml",
            Estimator::BeachesExact => "beaches-exact",
            Estimator::BeachesHw => "beaches-hw",
            Estimator::BeachesFixedPoint => "beaches-fixedpoint",
            Estimator::OracleMse => "oracle-mse",
            Estimator::PerfectCsi => "perfect-csi",
        }
    }

    /// Channel estimate for one column from its pilot observation.
    pub fn estimate(self, y: &[Complex<f64>], h_true: &[Complex<f64>], e0: f64) -> Result<ComplexVector<f64>> {
        Ok(match self {
            Estimator::Ml => y.to_vec(),
            Estimator::BeachesExact => beaches_denoise(y, e0, Variant::Exact)?.h_star,
            Estimator::BeachesHw => beaches_denoise(y, e0, Variant::Hw)?.h_star,
            Estimator::BeachesFixedPoint => beaches_denoise_fixed(y, e0)?.result.h_star,
            Estimator::OracleMse => {
                let y_hat = fft_unitary(y)?;
                let tau = oracle_mse_tau(&y_hat, &fft_unitary(h_true)?)?.tau;
                ifft_unitary(&soft_threshold(&y_hat, tau)?)?
            }
            Estimator::PerfectCsi => h_true.to_vec(),
        })
    }
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Estimator::ALL.into_iter().find(|e| e.name() == s).ok_or_else(|| {
            let valid: Vec<_> = Estimator::ALL.iter().map(|e| e.name()).collect();
            Error::Config(format!("unknown estimator `{s}`; valid names: {}", valid.join(", ")))
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkConfig {
    pub b: usize,
    pub u: usize,
    pub constellation: Constellation,
    pub snr_db_grid: Vec<f64>,
    pub trials: usize,
    /// Total transmit power; pilot and data phases share it.
    pub rho2: f64,
    pub estimators: Vec<Estimator>,
    pub seed: u64,
    pub scenario: ScenarioLabel,
    pub slots: usize,
}

impl LinkConfig {
    pub fn validate(&self) -> Result<()> {
        if self.b == 0 || !self.b.is_power_of_two() {
            return Err(Error::Config(format!("B = {} must be a power of two", self.b)));
        }
        if self.u == 0 || self.u > self.b {
            return Err(Error::Config(format!("U = {} must lie in 1..={}", self.u, self.b)));
        }
        if self.trials == 0 || self.slots == 0 {
            return Err(Error::Config("trials and slots must be >= 1".into()));
        }
        if self.rho2 <= 0.0 || !self.rho2.is_finite() {
            return Err(Error::Config(format!("rho2 = {} must be > 0", self.rho2)));
        }
        if self.estimators.is_empty() {
            return Err(Error::Config("no estimators selected".into()));
        }
        if self.snr_db_grid.is_empty() || self.snr_db_grid.iter().any(|s| !s.is_finite()) {
            return Err(Error::Config("snr_db must be a non-empty list of finite values".into()));
        }
        Ok(())
    }

    /// Parses the JSON sweep description. Required keys: `B`, `U`,
    /// `constellation`, `snr_db`, `trials`, `estimators`, `seed`. Optional:
    /// `rho2` (1.0), `scenario` (`"los"`), `slots` (100).
    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            #[serde(rename = "B")]
            b: usize,
            #[serde(rename = "U")]
            u: usize,
            constellation: String,
            snr_db: Vec<f64>,
            trials: usize,
            estimators: Vec<String>,
            seed: u64,
            rho2: Option<f64>,
            scenario: Option<String>,
            slots: Option<usize>,
        }
        let raw: Raw = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let cfg = LinkConfig {
            b: raw.b,
            u: raw.u,
            constellation: raw.constellation.parse()?,
            snr_db_grid: raw.snr_db,
            trials: raw.trials,
            rho2: raw.rho2.unwrap_or(1.0),
            estimators: raw.estimators.iter().map(|s| s.parse()).collect::<Result<_>>()?,
            seed: raw.seed,
            scenario: raw.scenario.as_deref().unwrap_or("los").parse()?,
            slots: raw.slots.unwrap_or(DEFAULT_SLOTS),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Thermal noise variance for a per-receive-antenna SNR. With unit average
    /// channel gain per antenna and total power `ρ²`, SNR = `ρ²/N0`.
    pub fn noise_variance(&self, snr_db: f64) -> f64 {
        self.rho2 / 10f64.powf(snr_db / 10.0)
    }

    pub fn pilot_model(&self, snr_db: f64) -> PilotModel {
        PilotModel::new(self.noise_variance(snr_db), self.rho2).expect("validated config")
    }

    /// Per-user symbol energy, an equal split of `ρ²`.
    pub fn symbol_energy(&self) -> f64 {
        self.rho2 / self.u as f64
    }
}

/// Bit-error and MSE tallies. Merging is a sum, so the result does not depend
/// on how trials were partitioned, only on the merge order of the float sums;
/// the sweep always merges in trial order.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MetricAccumulator {
    pub bit_errors: u64,
    pub bits_total: u64,
    /// Σ over channel columns of `‖ĥ − h‖²/B`.
    pub mse_sum: f64,
    pub vectors_total: u64,
    pub trials: u64,
    trial_ber_sum: f64,
    trial_ber_sq: f64,
    trial_mse_sum: f64,
    trial_mse_sq: f64,
}

impl MetricAccumulator {
    /// Records one trial.
    pub fn record_trial(&mut self, bit_errors: u64, bits: u64, column_mses: &[f64]) {
        self.bit_errors += bit_errors;
        self.bits_total += bits;
        let mse_sum: f64 = column_mses.iter().sum();
        self.mse_sum += mse_sum;
        self.vectors_total += column_mses.len() as u64;
        self.trials += 1;
        let ber = if bits > 0 { bit_errors as f64 / bits as f64 } else { 0.0 };
        let mse = if column_mses.is_empty() { 0.0 } else { mse_sum / column_mses.len() as f64 };
        self.trial_ber_sum += ber;
        self.trial_ber_sq += ber * ber;
        self.trial_mse_sum += mse;
        self.trial_mse_sq += mse * mse;
    }

    pub fn merge(&mut self, other: &Self) {
        self.bit_errors += other.bit_errors;
        self.bits_total += other.bits_total;
        self.mse_sum += other.mse_sum;
        self.vectors_total += other.vectors_total;
        self.trials += other.trials;
        self.trial_ber_sum += other.trial_ber_sum;
        self.trial_ber_sq += other.trial_ber_sq;
        self.trial_mse_sum += other.trial_mse_sum;
        self.trial_mse_sq += other.trial_mse_sq;
    }

    pub fn ber(&self) -> f64 {
        if self.bits_total == 0 {
            0.0
        } else {
            self.bit_errors as f64 / self.bits_total as f64
        }
    }

    pub fn mse(&self) -> f64 {
        if self.vectors_total == 0 {
            0.0
        } else {
            self.mse_sum / self.vectors_total as f64
        }
    }

    /// Standard error of the BER, treating trials as the independent unit.
    pub fn ber_std_error(&self) -> f64 {
        std_error(self.trial_ber_sum, self.trial_ber_sq, self.trials)
    }

    pub fn mse_std_error(&self) -> f64 {
        std_error(self.trial_mse_sum, self.trial_mse_sq, self.trials)
    }
}

fn std_error(sum: f64, sq: f64, n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let n = n as f64;
    let mean = sum / n;
    let var = ((sq - n * mean * mean) / (n - 1.0)).max(0.0);
    (var / n).sqrt()
}

/// One row of sweep output.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub snr_db: f64,
    pub estimator: Estimator,
    pub metrics: MetricAccumulator,
}

impl SweepPoint {
    pub fn ber(&self) -> f64 {
        self.metrics.ber()
    }

    pub fn mse(&self) -> f64 {
        self.metrics.mse()
    }
}

/// Draws the `U` user channels of one trial.
pub fn draw_channel_matrix(cfg: &LinkConfig, trial: u64) -> ChannelMatrix<f64> {
    let stream = RngStream::new(cfg.seed, 0).keyed(&[KEY_CHANNEL, trial]);
    let cols = (0..cfg.u)
        .map(|u| synthesize_channel(&sample_scenario::<f64>(cfg.scenario, cfg.b, &stream.substream(u as u64))))
        .collect();
    ChannelMatrix::from_columns(cols).expect("equal-length columns")
}

fn pilot_stream(seed: u64, trial: u64, user: usize) -> RngStream {
    RngStream::new(seed, 0).keyed(&[KEY_PILOT, trial, user as u64])
}

/// Sequential pilot training: user `u` transmits `ρ` alone, giving
/// `y_u = h_u + e_u` with `e_u ~ CN(0, N0/ρ²)`, and each column is then
/// passed through the estimator.
pub fn run_training_phase(
    h: &ChannelMatrix<f64>,
    pilot: &PilotModel,
    estimator: Estimator,
    rng: &RngStream,
) -> Result<ChannelMatrix<f64>> {
    let cols = h
        .columns()
        .iter()
        .enumerate()
        .map(|(u, col)| {
            let y = observe_pilot(col, pilot, &rng.substream(u as u64));
            estimator.estimate(&y, col, pilot.e0())
        })
        .collect::<Result<Vec<_>>>()?;
    ChannelMatrix::from_columns(cols)
}

fn simulate_trial(cfg: &LinkConfig, snr_db: f64, trial: u64) -> Result<Vec<MetricAccumulator>> {
    let pilot = cfg.pilot_model(snr_db);
    let n0 = pilot.n0;
    let es = cfg.symbol_energy();
    let h = draw_channel_matrix(cfg, trial);

    let observations: Vec<ComplexVector<f64>> = h
        .columns()
        .iter()
        .enumerate()
        .map(|(u, col)| observe_pilot(col, &pilot, &pilot_stream(cfg.seed, trial, u)))
        .collect();

    // Data phase, shared by all estimators.
    let bits_per_slot = cfg.u * cfg.constellation.bits_per_symbol();
    let mut bit_rng = RngStream::new(cfg.seed, 0).keyed(&[KEY_BITS, trial]).rng();
    let bits: Vec<bool> = (0..bits_per_slot * cfg.slots).map(|_| bit_rng.random()).collect();
    let amp = es.sqrt();
    let symbols: Vec<Complex<f64>> = map_bits::<f64>(cfg.constellation, &bits)?.into_iter().map(|s| s * amp).collect();
    let noise: ComplexVector<f64> =
        RngStream::new(cfg.seed, 0).keyed(&[KEY_DATA_NOISE, trial]).cscg_vector(cfg.b * cfg.slots, n0);
    let received: Vec<ComplexVector<f64>> = symbols
        .chunks_exact(cfg.u)
        .zip(noise.chunks_exact(cfg.b))
        .map(|(s, n)| h.apply(s).into_iter().zip(n).map(|(a, b)| a + b).collect())
        .collect();

    cfg.estimators
        .iter()
        .map(|&est| {
            let cols = observations
                .iter()
                .zip(h.columns())
                .map(|(y, col)| est.estimate(y, col, pilot.e0()))
                .collect::<Result<Vec<_>>>()?;
            let column_mses: Vec<f64> = cols.iter().zip(h.columns()).map(|(a, b)| mean_sq_error(a, b)).collect();
            let h_est = ChannelMatrix::from_columns(cols)?;
            let detector = LmmseDetector::new(&h_est, n0, es)?;
            let mut errors = 0u64;
            for (r, slot_bits) in received.iter().zip(bits.chunks_exact(bits_per_slot)) {
                let s_hat: Vec<Complex<f64>> = detector.detect(r).into_iter().map(|z| z / amp).collect();
                let decided = demap_symbols(cfg.constellation, &s_hat);
                errors += decided.iter().zip(slot_bits).filter(|(a, b)| a != b).count() as u64;
            }
            let mut acc = MetricAccumulator::default();
            acc.record_trial(errors, bits.len() as u64, &column_mses);
            Ok(acc)
        })
        .collect()
}

/// Runs the full sweep. Output rows are ordered by SNR, then by the order of
/// `cfg.estimators`.
pub fn run_link_sweep(cfg: &LinkConfig) -> Result<Vec<SweepPoint>> {
    cfg.validate()?;
    let mut out = Vec::with_capacity(cfg.snr_db_grid.len() * cfg.estimators.len());
    for &snr_db in &cfg.snr_db_grid {
        let per_trial = (0..cfg.trials as u64)
            .into_par_iter()
            .map(|t| simulate_trial(cfg, snr_db, t))
            .collect::<Result<Vec<_>>>()?;
        for (i, &estimator) in cfg.estimators.iter().enumerate() {
            let mut metrics = MetricAccumulator::default();
            for trial in &per_trial {
                metrics.merge(&trial[i]);
            }
            out.push(SweepPoint { snr_db, estimator, metrics });
        }
    }
    Ok(out)
}

pub const SWEEP_CSV_HEADER: &str = "snr_db,estimator,ber,mse,trials,seed";

/// Renders sweep rows as CSV with the [`SWEEP_CSV_HEADER`] columns.
pub fn sweep_csv(points: &[SweepPoint], seed: u64) -> String {
    let mut s = String::new();
    writeln!(s, "{SWEEP_CSV_HEADER}").unwrap();
    for p in points {
        writeln!(s, "{:?},{},{:?},{:?},{},{}", p.snr_db, p.estimator, p.ber(), p.mse(), p.metrics.trials, seed)
            .unwrap();
    }
    s
}
