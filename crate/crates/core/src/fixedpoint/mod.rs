//! Bit-accurate model of the streaming datapath: stage-scaled FFT, polar
//! conversion, SURE scan with a reciprocal look-up table, polar shrinkage and
//! an unscaled IFFT. Everything between input quantization and output
//! conversion is integer arithmetic.

mod cordic;
mod fft;
mod lut;
mod polar;
mod qformat;

pub use fft::{fft_scaled_fixed, ifft_unscaled_fixed};
pub use lut::{reciprocal_lut, LUT_SIZE, RECIPROCAL_TABLE};
pub use polar::{from_polar_fixed, to_polar_fixed, FixedPolar};
pub use qformat::{
    quantize, round_shift, QFormat, SaturationTally, ANTENNA, BEAMSPACE, E0_SCALED, PHASE, RECIPROCAL, SUM_RECIPROCALS,
    SUM_SQUARES, TWIDDLE,
};

use num_complex::Complex;

use crate::denoiser::DenoiseResult;
use crate::error::{Error, Result};
use crate::numerics::{check_finite, check_pow2};

/// Raw two's-complement pair; the format lives on the enclosing
/// [`FixedVector`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct FixedComplex {
    pub re: i64,
    pub im: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FixedVector {
    pub fmt: QFormat,
    pub data: Vec<FixedComplex>,
}

impl FixedVector {
    pub fn quantize(x: &[Complex<f64>], fmt: QFormat, tally: &mut SaturationTally) -> Self {
        let data =
            x.iter().map(|z| FixedComplex { re: quantize(z.re, fmt, tally), im: quantize(z.im, fmt, tally) }).collect();
        Self { fmt, data }
    }

    pub fn to_complex(&self) -> Vec<Complex<f64>> {
        self.data.iter().map(|z| Complex::new(self.fmt.to_f64(z.re), self.fmt.to_f64(z.im))).collect()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }
}

/// Fraction bits of the scan objective: E0/B (15) · τ (8) · V (2).
const OBJECTIVE_FRAC: u32 = E0_SCALED.frac_bits + BEAMSPACE.frac_bits + RECIPROCAL.frac_bits;

/// Outcome of the integer threshold scan, all in raw units.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixedScan {
    /// Threshold in [`BEAMSPACE`] format.
    pub tau: i64,
    /// `B`-scaled objective minus `E0`, at [`OBJECTIVE_FRAC`] fraction bits, of the
    /// stage-scaled beamspace.
    pub objective: i128,
}

/// Hardware scan over the sorted magnitudes: candidate `k` is the `k`-th
/// smallest magnitude, `S` and `V` update incrementally in their accumulator
/// formats, and the first strict minimum wins.
pub fn scan_fixed(mags: &[i64], e0_scaled: i64, tally: &mut SaturationTally) -> FixedScan {
    let mut sorted = mags.to_vec();
    sorted.sort_unstable();
    let b = sorted.len() as i128;
    let mut v: i64 = 0;
    for &m in &sorted {
        v = tally.saturate(v as i128 + reciprocal_lut(m) as i128, SUM_RECIPROCALS);
    }
    let mut s: i64 = 0;
    let e0 = e0_scaled as i128;
    let sq_up = OBJECTIVE_FRAC - SUM_SQUARES.frac_bits;
    let cnt_up = OBJECTIVE_FRAC - E0_SCALED.frac_bits;
    let mut best = FixedScan { tau: 0, objective: i128::MAX };
    for (i, &m) in sorted.iter().enumerate() {
        let k = i as i128 + 1;
        let tau = m as i128;
        let objective = ((s as i128) << sq_up) + (((b - k + 1) * tau * tau) << sq_up)
            - e0 * tau * v as i128
            - ((2 * e0 * (k - 1)) << cnt_up);
        if objective < best.objective {
            best = FixedScan { tau: m, objective };
        }
        s = tally.saturate(s as i128 + tau * tau, SUM_SQUARES);
        v = tally.saturate(v as i128 - reciprocal_lut(m) as i128, SUM_RECIPROCALS);
    }
    if sorted.is_empty() {
        best.objective = 0;
    }
    best
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedDenoiseOutput {
    /// Float view of the fixed-point results. `h_hat_star` and `tau_star` are
    /// rescaled to the unitary beamspace so they compare directly with the
    /// floating-point pipeline.
    pub result: DenoiseResult<f64>,
    /// Antenna-domain output in [`ANTENNA`] format.
    pub output: FixedVector,
    pub saturations: SaturationTally,
}

/// Runs the full datapath on `y` with noise variance `e0`.
pub fn beaches_denoise_fixed(y: &[Complex<f64>], e0: f64) -> Result<FixedDenoiseOutput> {
    check_pow2(y.len())?;
    check_finite(y)?;
    if !(e0.is_finite() && e0 >= 0.0) {
        return Err(Error::param(format!("e0 must be finite and nonnegative, got {e0}")));
    }
    let b = y.len();
    let mut tally = SaturationTally::default();

    let x = FixedVector::quantize(y, ANTENNA, &mut tally);
    let beams = fft_scaled_fixed(&x, &mut tally)?;
    let polar: Vec<FixedPolar> = beams.data.iter().map(|&z| to_polar_fixed(z, &mut tally)).collect();

    let e0_scaled = quantize(e0 / b as f64, E0_SCALED, &mut tally);
    let mags: Vec<i64> = polar.iter().map(|p| p.mag).collect();
    let scan = scan_fixed(&mags, e0_scaled, &mut tally);

    let shrunk = FixedVector {
        fmt: BEAMSPACE,
        data: polar
            .iter()
            .map(|p| {
                let mag = (p.mag - scan.tau).max(0);
                from_polar_fixed(FixedPolar { mag, phase: p.phase }, &mut tally)
            })
            .collect(),
    };
    let output = ifft_unscaled_fixed(&shrunk, &mut tally)?;

    let root_b = (b as f64).sqrt();
    let result = DenoiseResult {
        h_star: output.to_complex(),
        h_hat_star: shrunk.to_complex().into_iter().map(|z| z * root_b).collect(),
        tau_star: BEAMSPACE.to_f64(scan.tau) * root_b,
        sure_min: scan.objective as f64 * (-(OBJECTIVE_FRAC as f64)).exp2() + e0,
    };
    Ok(FixedDenoiseOutput { result, output, saturations: tally })
}
