//! Synthetic plane-wave channels for a uniform linear array and the noisy
//! pilot observation model.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{rng::fill_cscg, ComplexVector, RngStream};
use crate::scalar::Real;

/// One propagation path: complex gain and spatial frequency in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathComponent<T> {
    pub gain: Complex<T>,
    pub omega: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScenarioLabel {
    /// One dominant path plus two weak reflections.
    #[serde(rename = "LoS-like")]
    LosLike,
    /// Many comparable paths spread over all angles.
    #[serde(rename = "nLoS-like")]
    NlosLike,
}

impl fmt::Display for ScenarioLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScenarioLabel::LosLike => "LoS-like",
            ScenarioLabel::NlosLike => "nLoS-like",
        })
    }
}

impl FromStr for ScenarioLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "los" | "los-like" => Ok(ScenarioLabel::LosLike),
            "nlos" | "nlos-like" => Ok(ScenarioLabel::NlosLike),
            _ => Err(Error::Config(format!("unknown scenario `{s}` (expected los or nlos)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelScenario<T> {
    pub paths: Vec<PathComponent<T>>,
    pub b: usize,
    pub label: ScenarioLabel,
}

impl<T: Real> ChannelScenario<T> {
    pub fn new(paths: Vec<PathComponent<T>>, b: usize, label: ScenarioLabel) -> Result<Self> {
        if b == 0 {
            return Err(Error::dim("antenna count must be positive"));
        }
        if paths.is_empty() || paths.len() > b {
            return Err(Error::param(format!("path count {} outside 1..={b}", paths.len())));
        }
        let two_pi = T::of(TAU);
        for (i, p) in paths.iter().enumerate() {
            if !(p.omega >= T::zero() && p.omega < two_pi) {
                return Err(Error::param(format!("path {i}: omega {} outside [0, 2π)", p.omega)));
            }
            if !p.gain.re.is_finite() || !p.gain.im.is_finite() {
                return Err(Error::param(format!("path {i}: gain is not finite")));
            }
        }
        Ok(Self { paths, b, label })
    }

    pub fn to_record(&self) -> ScenarioRecord {
        ScenarioRecord {
            l: self.paths.len(),
            alpha: self.paths.iter().map(|p| [p.gain.re.as_f64(), p.gain.im.as_f64()]).collect(),
            omega: self.paths.iter().map(|p| p.omega.as_f64()).collect(),
            b: self.b,
            label: self.label,
        }
    }

    pub fn from_record(rec: &ScenarioRecord) -> Result<Self> {
        if rec.alpha.len() != rec.l || rec.omega.len() != rec.l {
            return Err(Error::Config(format!(
                "scenario declares L = {} but lists {} gains and {} frequencies",
                rec.l,
                rec.alpha.len(),
                rec.omega.len()
            )));
        }
        let paths = rec
            .alpha
            .iter()
            .zip(&rec.omega)
            .map(|(a, &w)| PathComponent { gain: Complex::new(T::of(a[0]), T::of(a[1])), omega: T::of(w) })
            .collect();
        Self::new(paths, rec.b, rec.label)
    }
}

/// Serialized scenario, used for regression fixtures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioRecord {
    #[serde(rename = "L")]
    pub l: usize,
    /// Gains as `[re, im]` pairs.
    pub alpha: Vec<[f64; 2]>,
    pub omega: Vec<f64>,
    #[serde(rename = "B")]
    pub b: usize,
    pub label: ScenarioLabel,
}

impl ScenarioRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("record serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("scenario record: {e}")))
    }
}

/// Array response `[e^{j·0·Ω}, …, e^{j(B−1)Ω}]`.
pub fn steering_vector<T: Real>(omega: T, b: usize) -> ComplexVector<T> {
    let w = omega.as_f64();
    (0..b)
        .map(|n| {
            let phase = (n as f64 * w) % TAU;
            Complex::new(T::of(phase.cos()), T::of(phase.sin()))
        })
        .collect()
}

/// `h = Σ_ℓ α_ℓ a(Ω_ℓ)`.
pub fn synthesize_channel<T: Real>(scenario: &ChannelScenario<T>) -> ComplexVector<T> {
    let mut h = vec![Complex::new(T::zero(), T::zero()); scenario.b];
    for p in &scenario.paths {
        for (hb, a) in h.iter_mut().zip(steering_vector(p.omega, scenario.b)) {
            *hb = *hb + p.gain * a;
        }
    }
    h
}

/// Draws a random scenario normalized so that `E[‖h‖²] = B`.
///
/// LoS-like: three paths, the two reflections 10 to 20 dB below the direct
/// path. nLoS-like: 8 to 16 paths with i.i.d. CN(0, 1/L) gains. Frequencies
/// are uniform on `[0, 2π)` and hence off the DFT grid almost surely.
pub fn sample_scenario<T: Real>(label: ScenarioLabel, b: usize, rng: &RngStream) -> ChannelScenario<T> {
    let mut r = rng.rng();
    let paths = match label {
        ScenarioLabel::LosLike => {
            let l = 3.min(b);
            let mut powers = vec![1.0];
            for _ in 1..l {
                let below_db: f64 = r.random_range(10.0..=20.0);
                powers.push(10f64.powf(-below_db / 10.0));
            }
            let total: f64 = powers.iter().sum();
            powers
                .into_iter()
                .map(|p| {
                    let phase: f64 = r.random_range(0.0..TAU);
                    let omega: f64 = r.random_range(0.0..TAU);
                    PathComponent {
                        gain: Complex::from_polar(T::of((p / total).sqrt()), T::of(phase)),
                        omega: T::of(omega),
                    }
                })
                .collect()
        }
        ScenarioLabel::NlosLike => {
            let l = r.random_range(8..=16usize).min(b);
            let gains: Vec<Complex<T>> = fill_cscg(&mut r, l, 1.0 / l as f64);
            gains.into_iter().map(|gain| PathComponent { gain, omega: T::of(r.random_range(0.0..TAU)) }).collect()
        }
    };
    ChannelScenario::new(paths, b, label).expect("sampler produces valid scenarios")
}

/// Pilot-phase noise model. One user transmits `ρ` at a time, so the
/// per-entry estimation error variance is `E0 = N0/ρ²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PilotModel {
    pub n0: f64,
    pub rho2: f64,
}

impl PilotModel {
    pub fn new(n0: f64, rho2: f64) -> Result<Self> {
        if n0 < 0.0 || !n0.is_finite() {
            return Err(Error::param(format!("N0 must be finite and >= 0, got {n0}")));
        }
        if rho2 <= 0.0 || !rho2.is_finite() {
            return Err(Error::param(format!("ρ² must be finite and > 0, got {rho2}")));
        }
        Ok(Self { n0, rho2 })
    }

    pub fn e0(&self) -> f64 {
        self.n0 / self.rho2
    }
}

/// `y = h + e`, `e ~ CN(0, E0·I)`.
pub fn observe_pilot<T: Real>(h: &[Complex<T>], pilot: &PilotModel, rng: &RngStream) -> ComplexVector<T> {
    let e: ComplexVector<T> = rng.cscg_vector(h.len(), pilot.e0());
    h.iter().zip(e).map(|(&a, b)| a + b).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{fft_unitary, norm_sqr};

    fn on_grid(m: usize, b: usize) -> f64 {
        TAU * m as f64 / b as f64
    }

    #[test]
    fn steering_examples() {
        for z in steering_vector(0.0f64, 4) {
            assert!((z - Complex::new(1.0, 0.0)).norm() < 1e-15);
        }
        let alt = steering_vector(std::f64::consts::PI, 4);
        for (n, z) in alt.iter().enumerate() {
            let expect = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert!((z - Complex::new(expect, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn steering_unit_magnitude() {
        for &w in &[0.1f64, 1.7, 3.3, 6.2] {
            for z in steering_vector(w, 512) {
                assert!((z.norm() - 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn on_grid_steering_is_one_bin() {
        let y = fft_unitary(&steering_vector(on_grid(3, 64), 64)).unwrap();
        for (k, z) in y.iter().enumerate() {
            let expect = if k == 3 { 8.0 } else { 0.0 };
            assert!((z.norm() - expect).abs() < 1e-12, "bin {k}");
        }
    }

    #[test]
    fn synthesis_examples() {
        let one = ChannelScenario::new(
            vec![PathComponent { gain: Complex::new(1.0, 0.0), omega: 0.0 }],
            8,
            ScenarioLabel::LosLike,
        )
        .unwrap();
        assert!(synthesize_channel(&one).iter().all(|z| (z - Complex::new(1.0, 0.0)).norm() < 1e-15));

        let g = Complex::new(0.3, -0.2);
        let cancel = ChannelScenario::new(
            vec![PathComponent { gain: g, omega: 1.3 }, PathComponent { gain: -g, omega: 1.3 }],
            16,
            ScenarioLabel::NlosLike,
        )
        .unwrap();
        assert!(synthesize_channel(&cancel).iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn on_grid_support_is_exact() {
        let b = 128;
        let bins = [7usize, 40, 99];
        let gains = [Complex::new(1.0, 0.5), Complex::new(-0.2, 0.1), Complex::new(0.0, -0.7)];
        let paths = bins.iter().zip(gains).map(|(&m, gain)| PathComponent { gain, omega: on_grid(m, b) }).collect();
        let s = ChannelScenario::new(paths, b, ScenarioLabel::LosLike).unwrap();
        let y = fft_unitary(&synthesize_channel(&s)).unwrap();
        for (k, z) in y.iter().enumerate() {
            match bins.iter().position(|&m| m == k) {
                Some(i) => assert!((z.norm() - (b as f64).sqrt() * gains[i].norm()).abs() < 1e-10),
                None => assert!(z.norm() < 1e-10, "bin {k} = {z}"),
            }
        }
    }

    #[test]
    fn scenario_validation() {
        let p = PathComponent { gain: Complex::new(1.0, 0.0), omega: TAU };
        assert!(ChannelScenario::new(vec![p], 4, ScenarioLabel::LosLike).is_err());
        assert!(ChannelScenario::<f64>::new(vec![], 4, ScenarioLabel::LosLike).is_err());
        let p = PathComponent { gain: Complex::new(1.0, 0.0), omega: 0.5 };
        assert!(ChannelScenario::new(vec![p; 5], 4, ScenarioLabel::LosLike).is_err());
    }

    #[test]
    fn los_sampler_shape_and_power() {
        let root = RngStream::new(42, 0);
        let mut total = 0.0;
        for t in 0..1000 {
            let s: ChannelScenario<f64> = sample_scenario(ScenarioLabel::LosLike, 128, &root.substream(t));
            assert_eq!(s.paths.len(), 3);
            let p: Vec<f64> = s.paths.iter().map(|p| p.gain.norm_sqr()).collect();
            assert!(p[0] / p.iter().sum::<f64>() > 0.8);
            for &weak in &p[1..] {
                let db = 10.0 * (p[0] / weak).log10();
                assert!((10.0 - 1e-9..=20.0 + 1e-9).contains(&db));
            }
            let g = norm_sqr(&synthesize_channel(&s)) / 128.0;
            assert!((0.2..=5.0).contains(&g), "{g}");
            total += g;
        }
        assert!((total / 1000.0 - 1.0).abs() < 0.05);
    }

    #[test]
    fn nlos_sampler_path_count() {
        let root = RngStream::new(43, 0);
        for t in 0..200 {
            let s: ChannelScenario<f64> = sample_scenario(ScenarioLabel::NlosLike, 128, &root.substream(t));
            assert!((8..=16).contains(&s.paths.len()));
        }
    }

    #[test]
    fn sampler_is_deterministic() {
        let r = RngStream::new(1, 1);
        let a: ChannelScenario<f64> = sample_scenario(ScenarioLabel::NlosLike, 64, &r);
        let b: ChannelScenario<f64> = sample_scenario(ScenarioLabel::NlosLike, 64, &r);
        assert_eq!(a, b);
    }

    #[test]
    fn record_round_trip() {
        let s: ChannelScenario<f64> = sample_scenario(ScenarioLabel::LosLike, 32, &RngStream::new(3, 3));
        let json = s.to_record().to_json();
        assert!(json.contains("\"L\": 3") && json.contains("\"LoS-like\""));
        let back = ChannelScenario::<f64>::from_record(&ScenarioRecord::from_json(&json).unwrap()).unwrap();
        assert_eq!(back, s);
        let bad = json.replace("\"L\": 3", "\"L\": 2");
        assert!(ChannelScenario::<f64>::from_record(&ScenarioRecord::from_json(&bad).unwrap()).is_err());
    }

    #[test]
    fn pilot_model() {
        let p = PilotModel::new(0.5, 2.0).unwrap();
        assert_eq!(p.e0(), 0.25);
        assert!(PilotModel::new(-1.0, 1.0).is_err());
        assert!(PilotModel::new(1.0, 0.0).is_err());
    }

    #[test]
    fn noiseless_pilot_is_exact() {
        let h = RngStream::new(5, 5).cscg_vector::<f64>(16, 1.0);
        let y = observe_pilot(&h, &PilotModel::new(0.0, 1.0).unwrap(), &RngStream::new(6, 6));
        assert_eq!(y, h);
    }

    #[test]
    fn pilot_noise_variance() {
        let h = vec![Complex::new(0.0, 0.0); 1 << 20];
        let y = observe_pilot(&h, &PilotModel::new(1.0, 1.0).unwrap(), &RngStream::new(7, 7));
        let v = norm_sqr(&y) / y.len() as f64;
        assert!((0.995..=1.005).contains(&v), "{v}");
    }

    #[test]
    fn beamspace_noise_statistics() {
        // Per-bin variance of F·e should equal E0 in every bin.
        let b = 16;
        let e0 = 0.4;
        let draws = 100_000;
        let pilot = PilotModel::new(e0, 1.0).unwrap();
        let h = RngStream::new(8, 0).cscg_vector::<f64>(b, 1.0);
        let h_hat = fft_unitary(&h).unwrap();
        let root = RngStream::new(8, 1);
        let mut var = vec![0.0; b];
        let mut cross = Complex::new(0.0, 0.0);
        for t in 0..draws {
            let y = observe_pilot(&h, &pilot, &root.substream(t));
            let y_hat = fft_unitary(&y).unwrap();
            let e: Vec<_> = y_hat.iter().zip(&h_hat).map(|(a, b)| a - b).collect();
            for (v, z) in var.iter_mut().zip(&e) {
                *v += z.norm_sqr();
            }
            cross += e[0] * e[1].conj();
        }
        for v in &var {
            // Exponential(E0) sample mean: standard error E0/√draws.
            let mean = v / draws as f64;
            assert!((mean - e0).abs() < 4.0 * e0 / (draws as f64).sqrt(), "{mean}");
        }
        let corr = cross.norm() / draws as f64;
        assert!(corr < 4.0 * e0 / (draws as f64).sqrt(), "{corr}");
    }
}
