use num_complex::Complex;

use crate::error::{Error, Result};
use crate::numerics::ComplexVector;
use crate::scalar::Real;

/// Complex soft-thresholding: shrinks each magnitude by `tau` toward zero
/// while keeping the phase. Entries at or below `tau` become zero.
pub fn soft_threshold<T: Real>(y_hat: &[Complex<T>], tau: T) -> Result<ComplexVector<T>> {
    if tau < T::zero() || !tau.is_finite() {
        return Err(Error::param(format!("threshold must be finite and >= 0, got {tau}")));
    }
    Ok(y_hat.iter().map(|&z| shrink_one(z, tau)).collect())
}

#[inline]
pub(crate) fn shrink_one<T: Real>(z: Complex<T>, tau: T) -> Complex<T> {
    let mag = z.norm();
    if mag > tau {
        z.scale((mag - tau) / mag)
    } else {
        Complex::new(T::zero(), T::zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn shrinks_magnitude_keeps_phase() {
        let out = soft_threshold(&[Complex::new(3.0, 4.0)], 2.0).unwrap();
        assert!((out[0] - Complex::new(1.8, 2.4)).norm() < 1e-15);
    }

    #[test]
    fn below_threshold_is_zeroed() {
        let out = soft_threshold(&[Complex::new(0.0, 0.5)], 1.0).unwrap();
        assert_eq!(out[0], Complex::new(0.0, 0.0));
    }

    #[test]
    fn zero_threshold_is_identity() {
        let y = vec![Complex::new(0.3, -1.2), Complex::new(0.0, 0.0), Complex::new(-7.0, 2.0)];
        assert_eq!(soft_threshold(&y, 0.0).unwrap(), y);
    }

    #[test]
    fn negative_threshold_rejected() {
        assert!(matches!(soft_threshold(&[Complex::new(1.0f64, 0.0)], -0.1), Err(Error::InvalidParameter(_))));
    }

    proptest! {
        #[test]
        fn shrinkage_contract(re in -10.0f64..10.0, im in -10.0f64..10.0, tau in 0.0f64..12.0) {
            let z = Complex::new(re, im);
            let out = shrink_one(z, tau);
            let expect = (z.norm() - tau).max(0.0);
            prop_assert!((out.norm() - expect).abs() <= 1e-12 * (1.0 + z.norm()));
            if out.norm() > 0.0 {
                let dphase = (out / z).arg();
                prop_assert!(dphase.abs() < 1e-12);
            }
        }
    }
}
