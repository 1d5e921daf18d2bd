//! SURE-tuned soft-threshold denoising of channel vectors in the beamspace
//! domain.

mod oracle;
mod shrink;
mod sure;

pub use oracle::oracle_mse_tau;
pub use shrink::soft_threshold;
pub use sure::{
    scan_optimal_tau, scan_optimal_tau_hw, sure_value, unscale_sure, Intervals, SortedMagnitudes, SureScanState,
    ThresholdChoice, NEGLIGIBLE_ABSOLUTE, NEGLIGIBLE_RELATIVE,
};

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::numerics::{check_finite, check_pow2, fft_unitary, ifft_unitary, ComplexVector};
use crate::scalar::Real;

/// Which threshold search to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Clamped per-interval minimizer; finds the exact SURE minimum.
    Exact,
    /// Sorted magnitudes as the only candidates.
    Hw,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Exact => "exact",
            Variant::Hw => "hw",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Variant::Exact),
            "hw" => Ok(Variant::Hw),
            other => Err(Error::Config(format!("unknown variant `{other}` (expected exact or hw)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenoiseResult<T> {
    /// Denoised antenna-domain vector.
    pub h_star: ComplexVector<T>,
    /// Denoised beamspace vector.
    pub h_hat_star: ComplexVector<T>,
    pub tau_star: T,
    /// SURE at `tau_star`, in SURE units for both variants.
    pub sure_min: T,
}

/// Full denoising pipeline: beamspace transform, threshold search over the
/// sorted magnitudes, soft-thresholding, inverse transform.
pub fn beaches_denoise<T: Real>(y: &[Complex<T>], e0: T, variant: Variant) -> Result<DenoiseResult<T>> {
    check_pow2(y.len())?;
    check_finite(y)?;
    let y_hat = fft_unitary(y)?;
    let sorted = SortedMagnitudes::from_complex(&y_hat)?;
    let (tau_star, sure_min) = match variant {
        Variant::Exact => {
            let c = scan_optimal_tau(&sorted, e0)?;
            (c.tau, c.objective)
        }
        Variant::Hw => {
            let c = scan_optimal_tau_hw(&sorted, e0)?;
            (c.tau, unscale_sure(c.objective, y.len(), e0))
        }
    };
    let h_hat_star = soft_threshold(&y_hat, tau_star)?;
    let h_star = ifft_unitary(&h_hat_star)?;
    Ok(DenoiseResult { h_star, h_hat_star, tau_star, sure_min })
}
