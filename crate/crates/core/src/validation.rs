//! Property suites behind `beaches validate`. Every check runs with fixed
//! seeds, so a suite's report is reproducible bit for bit.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rayon::prelude::*;

use crate::channel::{observe_pilot, sample_scenario, synthesize_channel, PilotModel, ScenarioLabel};
use crate::denoiser::{
    beaches_denoise, scan_optimal_tau, scan_optimal_tau_hw, soft_threshold, sure_value, unscale_sure, SortedMagnitudes,
    Variant,
};
use crate::error::{Error, Result};
use crate::fixedpoint::{
    beaches_denoise_fixed, fft_scaled_fixed, FixedVector, SaturationTally, ANTENNA, RECIPROCAL_TABLE,
};
use crate::linksim::{
    lmmse_detect, run_link_sweep, run_training_phase, ChannelMatrix, Constellation, Estimator, LinkConfig,
};
use crate::numerics::{dft_matrix_multiply, fft_unitary, ifft_unitary, mean_sq_error, norm_sqr, RngStream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Sure,
    Scan,
    Fft,
    Fixedpoint,
    Linksim,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Sure, Suite::Scan, Suite::Fft, Suite::Fixedpoint, Suite::Linksim];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Sure => "sure",
            Suite::Scan => "scan",
            Suite::Fft => "fft",
            Suite::Fixedpoint => "fixedpoint",
            Suite::Linksim => "linksim",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|suite| suite.name() == s).ok_or_else(|| {
            let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
            Error::Config(format!("unknown suite `{s}` (expected one of {})", names.join(", ")))
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl PropertyCheck {
    fn new(name: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        Self { name, passed, detail: detail.into() }
    }

    fn from_result(name: &'static str, r: Result<(bool, String)>) -> Self {
        match r {
            Ok((passed, detail)) => Self::new(name, passed, detail),
            Err(e) => Self::new(name, false, format!("error: {e}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<PropertyCheck>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{status} {}::{} ({})", self.suite, c.name, c.detail)?;
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        write!(f, "{}: {passed}/{} properties passed", self.suite, self.checks.len())
    }
}

pub fn run_suite(suite: Suite) -> SuiteReport {
    let checks = match suite {
        Suite::Sure => sure_suite(),
        Suite::Scan => scan_suite(),
        Suite::Fft => fft_suite(),
        Suite::Fixedpoint => fixedpoint_suite(),
        Suite::Linksim => linksim_suite(),
    };
    SuiteReport { suite, checks }
}

/// Beamspace vector with unit-modulus-steered on-grid paths: bin `m` holds
/// `√B·gain`, everything else is zero.
pub fn on_grid_beamspace(b: usize, paths: &[(usize, Complex<f64>)]) -> Vec<Complex<f64>> {
    let mut h_hat = vec![Complex::new(0.0, 0.0); b];
    for &(bin, gain) in paths {
        h_hat[bin % b] += gain * (b as f64).sqrt();
    }
    h_hat
}

fn magnitudes(y: &[Complex<f64>]) -> Vec<f64> {
    y.iter().map(|z| z.norm()).collect()
}

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

/// SURE and realized MSE at a fixed threshold over repeated noise draws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnbiasednessStats {
    pub mean_sure: f64,
    pub se_sure: f64,
    pub mean_mse: f64,
    pub se_mse: f64,
}

impl UnbiasednessStats {
    pub fn combined_se(&self) -> f64 {
        self.se_sure.hypot(self.se_mse)
    }

    pub fn gap(&self) -> f64 {
        (self.mean_sure - self.mean_mse).abs()
    }
}

/// Draws `ŷ = ĥ + ê` with `ê ~ CN(0, e0·I)` and records `SURE_τ(ŷ)` next to
/// the realized `‖η(ŷ, τ) − ĥ‖²/B`.
pub fn sure_vs_mse(h_hat: &[Complex<f64>], tau: f64, e0: f64, draws: usize, seed: u64) -> Result<UnbiasednessStats> {
    let b = h_hat.len();
    let pairs = (0..draws as u64)
        .into_par_iter()
        .map(|i| {
            let noise = RngStream::new(seed, i).cscg_vector::<f64>(b, e0);
            let y: Vec<_> = h_hat.iter().zip(&noise).map(|(h, e)| h + e).collect();
            let sure = sure_value(&magnitudes(&y), tau, e0)?;
            let mse = mean_sq_error(&soft_threshold(&y, tau)?, h_hat);
            Ok((sure, mse))
        })
        .collect::<Result<Vec<_>>>()?;
    let (sures, mses): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    let (mean_sure, se_sure) = mean_and_se(&sures);
    let (mean_mse, se_mse) = mean_and_se(&mses);
    Ok(UnbiasednessStats { mean_sure, se_sure, mean_mse, se_mse })
}

/// Median over trials of `|SURE_τ − MSE_τ|` when every beamspace entry of
/// `ĥ` is drawn i.i.d. as `Bernoulli(0.1)·CN(0, 1)` and `τ` is fixed.
pub fn median_sure_gap(b: usize, trials: usize, e0: f64, tau: f64, seed: u64) -> Result<f64> {
    let gaps = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let stream = RngStream::new(seed, t);
            let mut active = stream.substream(0).rng();
            let gains = stream.substream(1).cscg_vector::<f64>(b, 1.0);
            let h_hat: Vec<_> = gains
                .into_iter()
                .map(|g| if rand::Rng::random_bool(&mut active, 0.1) { g } else { Complex::new(0.0, 0.0) })
                .collect();
            let noise = stream.substream(2).cscg_vector::<f64>(b, e0);
            let y: Vec<_> = h_hat.iter().zip(&noise).map(|(h, e)| h + e).collect();
            let sure = sure_value(&magnitudes(&y), tau, e0)?;
            let mse = mean_sq_error(&soft_threshold(&y, tau)?, &h_hat);
            Ok((sure - mse).abs())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(median(gaps))
}

fn sure_suite() -> Vec<PropertyCheck> {
    let mut checks = Vec::new();

    let h_hat = on_grid_beamspace(
        64,
        &[
            (5, Complex::from_polar(1.0, 0.3)),
            (22, Complex::from_polar(0.6, -1.2)),
            (47, Complex::from_polar(0.3, 2.0)),
        ],
    );
    let tau = 0.5 * magnitudes(&h_hat).into_iter().fold(0.0, f64::max);
    checks.push(PropertyCheck::from_result(
        "unbiasedness",
        sure_vs_mse(&h_hat, tau, 0.1, 100_000, 0x5u64).map(|s| {
            (
                s.gap() < 3.0 * s.combined_se(),
                format!("|ΔSURE−MSE| = {:.3e}, 3σ = {:.3e}", s.gap(), 3.0 * s.combined_se()),
            )
        }),
    ));

    checks.push(PropertyCheck::from_result(
        "convergence",
        (|| {
            let small = median_sure_gap(64, 500, 0.1, 0.5, 0x6)?;
            let large = median_sure_gap(1024, 500, 0.1, 0.5, 0x7)?;
            let ratio = small / large;
            Ok((large < small && (2.0..=8.0).contains(&ratio), format!("median gap ratio B=64/1024 = {ratio:.2}")))
        })(),
    ));

    checks.push(PropertyCheck::from_result(
        "interval_form",
        (|| {
            let mut worst: f64 = 0.0;
            for i in 0..200u64 {
                let stream = RngStream::new(0x8, i);
                let b = 8 << (i % 5);
                let y = stream.cscg_vector::<f64>(b, 1.0);
                let mags = magnitudes(&y);
                let sorted = SortedMagnitudes::new(mags.clone())?;
                let e0 = 0.3;
                for state in sorted.intervals() {
                    let hi = state.upper.unwrap_or(state.lower + 1.0);
                    for f in [0.25, 0.5, 0.75] {
                        let t = state.lower + f * (hi - state.lower);
                        let direct = sure_value(&mags, t, e0)?;
                        worst = worst.max((state.sure(t, e0) - direct).abs() / direct.abs().max(e0));
                    }
                }
            }
            Ok((worst <= 1e-10, format!("max relative deviation {worst:.2e}")))
        })(),
    ));

    checks.push(PropertyCheck::from_result(
        "shrinkage_contract",
        (|| {
            let mut worst_mag: f64 = 0.0;
            let mut worst_phase: f64 = 0.0;
            for i in 0..100u64 {
                let y = RngStream::new(0x9, i).cscg_vector::<f64>(64, 1.0);
                let r = beaches_denoise(&y, 0.5, Variant::Exact)?;
                let y_hat = fft_unitary(&y)?;
                for (a, z) in r.h_hat_star.iter().zip(&y_hat) {
                    let want = (z.norm() - r.tau_star).max(0.0);
                    worst_mag = worst_mag.max((a.norm() - want).abs());
                    if a.norm() > 0.0 {
                        let d = (a.arg() - z.arg()).abs();
                        worst_phase = worst_phase.max(d.min(std::f64::consts::TAU - d));
                    }
                }
            }
            Ok((
                worst_mag <= 1e-12 && worst_phase <= 1e-12,
                format!("magnitude error {worst_mag:.1e}, phase error {worst_phase:.1e}"),
            ))
        })(),
    ));
    checks
}

/// Minimum of the direct SURE expression over `points` evenly spaced
/// thresholds in `[0, 1.01·max]`.
pub fn grid_minimum(mags: &[f64], e0: f64, points: usize) -> f64 {
    let b = mags.len() as f64;
    let hi = 1.01 * mags.iter().copied().fold(0.0, f64::max);
    (0..points)
        .map(|i| {
            let tau = hi * i as f64 / (points - 1) as f64;
            let mut v = e0;
            for &m in mags {
                if m <= tau {
                    v += (m * m - 2.0 * e0) / b;
                } else {
                    v += (tau * tau - e0 * tau / m) / b;
                }
            }
            v
        })
        .fold(f64::INFINITY, f64::min)
}

/// Random magnitudes mixing a few strong entries into a noise floor.
pub fn random_scan_instance(stream: &RngStream, b: usize) -> Vec<f64> {
    let noise = stream.substream(0).cscg_vector::<f64>(b, 1.0);
    let strong = stream.substream(1).cscg_vector::<f64>(b, 25.0);
    let mut pick = stream.substream(2).rng();
    noise
        .iter()
        .zip(&strong)
        .map(|(n, s)| if rand::Rng::random_bool(&mut pick, 0.05) { (n + s).norm() } else { n.norm() })
        .collect()
}

fn scan_suite() -> Vec<PropertyCheck> {
    let mut checks = Vec::new();
    checks.push(PropertyCheck::from_result(
        "scan_vs_grid",
        (|| {
            let failures = (0..1000u64)
                .into_par_iter()
                .map(|i| {
                    let stream = RngStream::new(0x10, i);
                    let b = 8 << (i % 7);
                    let e0 = 10f64.powf(-3.0 + 4.0 * rand::Rng::random::<f64>(&mut stream.substream(3).rng()));
                    let mags = random_scan_instance(&stream, b);
                    let best = scan_optimal_tau(&SortedMagnitudes::new(mags.clone())?, e0)?;
                    let grid = grid_minimum(&mags, e0, 10_000);
                    Ok(usize::from(best.objective > grid + 1e-9 * (grid.abs() + e0)))
                })
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .sum::<usize>();
            Ok((failures == 0, format!("{failures}/1000 instances above the grid minimum")))
        })(),
    ));

    checks.push(PropertyCheck::from_result(
        "monotone_in_e0",
        (|| {
            let mut violations = 0;
            for i in 0..200u64 {
                let stream = RngStream::new(0x11, i);
                let sorted = SortedMagnitudes::new(random_scan_instance(&stream, 64))?;
                let mut last = 0.0;
                for j in 0..20 {
                    let tau = scan_optimal_tau(&sorted, 0.01 * 1.4f64.powi(j))?.tau;
                    violations += usize::from(tau < last);
                    last = tau;
                }
            }
            Ok((violations == 0, format!("{violations} decreases")))
        })(),
    ));

    checks.push(PropertyCheck::from_result(
        "hw_gap",
        (|| {
            let n = 1000u64;
            let mut within = 0;
            let mut negative = 0;
            for i in 0..n {
                let (mags, e0) = hw_gap_instance(0x12, i, 256);
                let sorted = SortedMagnitudes::new(mags)?;
                let exact = scan_optimal_tau(&sorted, e0)?.objective;
                let hw = unscale_sure(scan_optimal_tau_hw(&sorted, e0)?.objective, 256, e0);
                let gap = hw - exact;
                negative += usize::from(gap < -1e-12 * (exact.abs() + e0));
                within += usize::from(gap <= 0.01 * (exact + e0));
            }
            let frac = within as f64 / n as f64;
            Ok((negative == 0 && frac >= 0.99, format!("{:.1}% within 1%, {negative} negative gaps", 100.0 * frac)))
        })(),
    ));
    checks
}

/// Beamspace magnitudes of a noisy synthetic channel with `E0` log-uniform
/// in `[10⁻², 1]`, alternating between the two scenario families.
pub fn hw_gap_instance(seed: u64, i: u64, b: usize) -> (Vec<f64>, f64) {
    let stream = RngStream::new(seed, i);
    let label = if i.is_multiple_of(2) { ScenarioLabel::LosLike } else { ScenarioLabel::NlosLike };
    let h = synthesize_channel(&sample_scenario::<f64>(label, b, &stream.substream(0)));
    let e0 = 10f64.powf(-2.0 + 2.0 * rand::Rng::random::<f64>(&mut stream.substream(1).rng()));
    let pilot = PilotModel::new(e0, 1.0).expect("positive noise");
    let y = observe_pilot(&h, &pilot, &stream.substream(2));
    let y_hat = fft_unitary(&y).expect("power-of-two length");
    (magnitudes(&y_hat), e0)
}

fn fft_suite() -> Vec<PropertyCheck> {
    let mut checks = Vec::new();
    let mut norm_dev: f64 = 0.0;
    let mut round_trip: f64 = 0.0;
    let mut oracle: f64 = 0.0;
    for i in 0..50u64 {
        let b = 2usize << (i % 8);
        let x = RngStream::new(0x20, i).cscg_vector::<f64>(b, 1.0);
        let (Ok(y), Ok(back)) = (fft_unitary(&x), fft_unitary(&x).and_then(|y| ifft_unitary(&y))) else {
            checks.push(PropertyCheck::new("fft", false, "transform rejected a power-of-two length"));
            return checks;
        };
        let scale = norm_sqr(&x).sqrt();
        norm_dev = norm_dev.max((norm_sqr(&y).sqrt() - scale).abs() / scale);
        round_trip = round_trip.max(back.iter().zip(&x).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) / scale);
        let reference = dft_matrix_multiply(&x, false);
        oracle = oracle.max(y.iter().zip(&reference).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) / scale);
    }
    checks.push(PropertyCheck::new("unitarity", norm_dev <= 1e-12, format!("max norm deviation {norm_dev:.1e}")));
    checks.push(PropertyCheck::new("round_trip", round_trip <= 1e-12, format!("max error {round_trip:.1e}")));
    checks.push(PropertyCheck::new("dft_matrix", oracle <= 1e-10, format!("max error {oracle:.1e}")));
    checks.push(PropertyCheck::new(
        "rejects_non_power_of_two",
        fft_unitary(&[Complex::new(1.0f64, 0.0); 12]).is_err(),
        "length 12",
    ));
    checks
}

fn fixedpoint_suite() -> Vec<PropertyCheck> {
    let mut checks = Vec::new();
    checks.push(PropertyCheck::new(
        "lut_monotone",
        RECIPROCAL_TABLE.windows(2).all(|w| w[1] <= w[0]),
        "nonincreasing over 512 cells",
    ));

    checks.push(PropertyCheck::from_result(
        "fft_accuracy",
        (|| {
            let mut worst: f64 = 0.0;
            for i in 0..100u64 {
                let b = 64;
                let x = RngStream::new(0x30, i).cscg_vector::<f64>(b, 1.0);
                let mut tally = SaturationTally::default();
                let xq = FixedVector::quantize(&x, ANTENNA, &mut tally);
                let y = fft_scaled_fixed(&xq, &mut tally)?.to_complex();
                let reference = fft_unitary(&xq.to_complex())?;
                for (a, r) in y.iter().zip(&reference) {
                    let r = r / (b as f64).sqrt();
                    worst = worst.max((a.re - r.re).abs()).max((a.im - r.im).abs());
                }
            }
            Ok((worst <= 2f64.powi(-7), format!("max error {:.2} LSB", worst * 256.0)))
        })(),
    ));

    checks.push(PropertyCheck::from_result(
        "gain_neutrality",
        (|| {
            // Sparse on-grid inputs with dyadic gains: the beamspace is exact,
            // so the scan selects τ = 0.
            let mut worst = 0.0f64;
            let mut nonzero_tau = 0;
            for i in 0..50u64 {
                let b = 64 << (i % 3);
                let mut pick = RngStream::new(0x31, i).rng();
                let paths: Vec<_> = (0..3)
                    .map(|_| {
                        let bin = rand::Rng::random_range(&mut pick, 0..b);
                        let re = rand::Rng::random_range(&mut pick, -16i32..16) as f64 / 32.0;
                        let im = rand::Rng::random_range(&mut pick, -16i32..16) as f64 / 32.0;
                        (bin, Complex::new(re, im))
                    })
                    .collect();
                let h = ifft_unitary(&on_grid_beamspace(b, &paths))?;
                let fixed = beaches_denoise_fixed(&h, 0.0)?;
                let float = beaches_denoise(&h, 0.0, Variant::Exact)?;
                nonzero_tau += usize::from(fixed.result.tau_star != 0.0);
                for (a, r) in fixed.result.h_star.iter().zip(&float.h_star) {
                    worst = worst.max((a.re - r.re).abs()).max((a.im - r.im).abs());
                }
            }
            Ok((
                nonzero_tau == 0 && worst <= 2.0 * 2f64.powi(-8),
                format!("max error {:.2} LSB, {nonzero_tau} with τ ≠ 0", worst * 256.0),
            ))
        })(),
    ));

    checks.push(PropertyCheck::from_result(
        "determinism",
        (|| {
            let y = RngStream::new(0x32, 0).cscg_vector::<f64>(256, 1.0);
            let a = beaches_denoise_fixed(&y, 0.1)?;
            let b = beaches_denoise_fixed(&y, 0.1)?;
            Ok((a.output == b.output, "repeated call".to_string()))
        })(),
    ));

    checks.push(PropertyCheck::from_result(
        "no_saturation",
        (|| {
            let mut events = 0;
            for i in 0..200u64 {
                let stream = RngStream::new(0x33, i);
                let label = if i.is_multiple_of(2) { ScenarioLabel::LosLike } else { ScenarioLabel::NlosLike };
                let h = synthesize_channel(&sample_scenario::<f64>(label, 128, &stream.substream(0)));
                let snr_db = -10.0 + (i % 5) as f64 * 10.0;
                let pilot = PilotModel::new(10f64.powf(-snr_db / 10.0), 1.0)?;
                let y = observe_pilot(&h, &pilot, &stream.substream(1));
                events += beaches_denoise_fixed(&y, pilot.e0())?.saturations.events;
            }
            Ok((events == 0, format!("{events} saturation events at SNR ≥ -10 dB")))
        })(),
    ));
    checks
}

/// Gauss-Jordan inverse with partial pivoting, row-major `n × n`.
fn invert(mut a: Vec<Complex<f64>>, n: usize) -> Option<Vec<Complex<f64>>> {
    let mut inv = vec![Complex::new(0.0, 0.0); n * n];
    for i in 0..n {
        inv[i * n + i] = Complex::new(1.0, 0.0);
    }
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i * n + col].norm().total_cmp(&a[j * n + col].norm()))?;
        if a[pivot * n + col].norm() == 0.0 {
            return None;
        }
        for k in 0..n {
            a.swap(col * n + k, pivot * n + k);
            inv.swap(col * n + k, pivot * n + k);
        }
        let p = a[col * n + col];
        for k in 0..n {
            a[col * n + k] /= p;
            inv[col * n + k] /= p;
        }
        for row in 0..n {
            if row != col {
                let f = a[row * n + col];
                for k in 0..n {
                    let (ak, ik) = (a[col * n + k], inv[col * n + k]);
                    a[row * n + k] -= f * ak;
                    inv[row * n + k] -= f * ik;
                }
            }
        }
    }
    Some(inv)
}

/// `(HᴴH + (n0/es)·I)⁻¹ Hᴴ r` through an explicit inverse.
pub fn lmmse_explicit(h: &ChannelMatrix<f64>, r: &[Complex<f64>], n0: f64, es: f64) -> Option<Vec<Complex<f64>>> {
    let u = h.cols();
    let mut gram = vec![Complex::new(0.0, 0.0); u * u];
    for i in 0..u {
        for j in 0..u {
            gram[i * u + j] = h.column(i).iter().zip(h.column(j)).map(|(a, b)| a.conj() * b).sum();
        }
        gram[i * u + i] += n0 / es;
    }
    let inv = invert(gram, u)?;
    let mf: Vec<Complex<f64>> = (0..u).map(|i| h.column(i).iter().zip(r).map(|(a, b)| a.conj() * b).sum()).collect();
    Some((0..u).map(|i| (0..u).map(|j| inv[i * u + j] * mf[j]).sum()).collect())
}

fn linksim_suite() -> Vec<PropertyCheck> {
    let mut checks = Vec::new();
    checks.push(PropertyCheck::from_result(
        "lmmse_oracle",
        (|| {
            let mut worst: f64 = 0.0;
            for i in 0..100u64 {
                let stream = RngStream::new(0x40, i);
                let (b, u) = (16usize << (i % 5), 1 + (i as usize % 16));
                let cols = (0..u).map(|c| stream.substream(c as u64).cscg_vector::<f64>(b, 1.0)).collect();
                let h = ChannelMatrix::from_columns(cols)?;
                let r = stream.substream(99).cscg_vector::<f64>(b, 1.0);
                let got = lmmse_detect(&h, &r, 0.1, 1.0)?;
                let want = lmmse_explicit(&h, &r, 0.1, 1.0).ok_or(Error::SingularSystem)?;
                let scale = norm_sqr(&want).sqrt();
                worst = worst.max(got.iter().zip(&want).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) / scale);
            }
            Ok((worst <= 1e-10, format!("max relative error {worst:.1e}")))
        })(),
    ));

    checks.push(PropertyCheck::from_result(
        "training_exact_cases",
        (|| {
            let cfg = small_config(vec![Estimator::PerfectCsi], 1);
            let h = crate::linksim::draw_channel_matrix(&cfg, 0);
            let noisy = PilotModel::new(1.0, 1.0)?;
            let perfect = run_training_phase(&h, &noisy, Estimator::PerfectCsi, &RngStream::new(0x41, 0))?;
            let noiseless = PilotModel::new(0.0, 1.0)?;
            let ml = run_training_phase(&h, &noiseless, Estimator::Ml, &RngStream::new(0x41, 1))?;
            Ok((perfect == h && ml == h, "perfect-csi and noiseless ml reproduce H".to_string()))
        })(),
    ));

    checks.push(PropertyCheck::from_result(
        "estimator_ordering",
        (|| {
            let mut cfg = small_config(
                vec![Estimator::Ml, Estimator::BeachesExact, Estimator::OracleMse, Estimator::PerfectCsi],
                200,
            );
            cfg.b = 128;
            cfg.u = 1;
            cfg.snr_db_grid = vec![0.0];
            let pts = run_link_sweep(&cfg)?;
            let get = |e: Estimator| pts.iter().find(|p| p.estimator == e).expect("estimator in sweep");
            let (ml, ex, or, pc) = (
                get(Estimator::Ml),
                get(Estimator::BeachesExact),
                get(Estimator::OracleMse),
                get(Estimator::PerfectCsi),
            );
            let se = |a: &crate::linksim::SweepPoint, b: &crate::linksim::SweepPoint| {
                a.metrics.mse_std_error().hypot(b.metrics.mse_std_error())
            };
            let ok = pc.mse() == 0.0 && or.mse() <= ex.mse() + 2.0 * se(or, ex) && ex.mse() <= ml.mse();
            Ok((ok, format!("mse ml {:.4} exact {:.4} oracle {:.4}", ml.mse(), ex.mse(), or.mse())))
        })(),
    ));

    checks.push(PropertyCheck::from_result(
        "ml_mse_is_e0",
        (|| {
            let cfg = small_config(vec![Estimator::Ml], 200);
            let pts = run_link_sweep(&cfg)?;
            let mut ok = true;
            let mut detail = String::new();
            for p in &pts {
                let e0 = cfg.pilot_model(p.snr_db).e0();
                ok &= (p.mse() - e0).abs() <= 4.0 * p.metrics.mse_std_error();
                detail += &format!("{} dB: {:.4}/{:.4} ", p.snr_db, p.mse(), e0);
            }
            Ok((ok, detail.trim_end().to_string()))
        })(),
    ));

    checks.push(PropertyCheck::from_result(
        "seed_determinism",
        (|| {
            let cfg = small_config(vec![Estimator::Ml, Estimator::BeachesHw], 20);
            let a = crate::linksim::sweep_csv(&run_link_sweep(&cfg)?, cfg.seed);
            let b = crate::linksim::sweep_csv(&run_link_sweep(&cfg)?, cfg.seed);
            Ok((a == b, "two identical sweeps".to_string()))
        })(),
    ));
    checks
}

fn small_config(estimators: Vec<Estimator>, trials: usize) -> LinkConfig {
    LinkConfig {
        b: 64,
        u: 4,
        constellation: Constellation::Qam16,
        snr_db_grid: vec![-10.0, 0.0, 10.0],
        trials,
        rho2: 1.0,
        estimators,
        seed: 0x42,
        scenario: ScenarioLabel::LosLike,
        slots: 20,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        let err = "bogus".parse::<Suite>().unwrap_err().to_string();
        assert!(err.contains("fixedpoint"), "{err}");
    }

    #[test]
    fn fft_suite_passes() {
        let report = run_suite(Suite::Fft);
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn explicit_inverse_inverts() {
        let a = vec![Complex::new(2.0, 0.0), Complex::new(1.0, 1.0), Complex::new(1.0, -1.0), Complex::new(3.0, 0.0)];
        let inv = invert(a.clone(), 2).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let v: Complex<f64> = (0..2).map(|k| a[i * 2 + k] * inv[k * 2 + j]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((v - want).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn grid_minimum_is_attained_by_scan() {
        let mags = [0.1, 0.4, 2.0, 3.0];
        let grid = grid_minimum(&mags, 0.2, 10_000);
        let best = scan_optimal_tau(&SortedMagnitudes::new(mags.to_vec()).unwrap(), 0.2).unwrap();
        assert!(best.objective <= grid + 1e-12);
        assert!(grid - best.objective < 1e-3);
    }
}
