//! Complex-vector primitives: the unitary DFT pair relating the antenna and
//! beamspace domains, circularly-symmetric Gaussian sampling, and CSV I/O.

mod fft;
mod io;
pub(crate) mod rng;

pub use fft::{dft_matrix_multiply, fft_unitary, ifft_unitary};
pub use io::{format_complex_csv, parse_complex_csv};
pub use rng::{draw_cscg, RngStream};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Entries of an antenna-domain or beamspace vector.
pub type ComplexVector<T> = Vec<Complex<T>>;

pub(crate) fn check_pow2(len: usize) -> Result<()> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::dim(format!("length {len} is not a positive power of two")));
    }
    Ok(())
}

pub(crate) fn check_finite<T: Real>(x: &[Complex<T>]) -> Result<()> {
    match x.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
        Some(i) => Err(Error::param(format!("entry {i} is not finite"))),
        None => Ok(()),
    }
}

/// Squared Euclidean norm.
pub fn norm_sqr<T: Real>(x: &[Complex<T>]) -> T {
    x.iter().map(|z| z.norm_sqr()).sum()
}

/// `‖a − b‖² / len`, the per-entry mean squared error.
pub fn mean_sq_error<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> T {
    assert_eq!(a.len(), b.len(), "mean_sq_error: length mismatch");
    let sum: T = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    sum / T::of_usize(a.len())
}
