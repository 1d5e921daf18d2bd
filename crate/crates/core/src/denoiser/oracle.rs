use num_complex::Complex;

use super::sure::ThresholdChoice;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Threshold minimizing the true squared error against a known beamspace
/// vector. Not realizable in practice; it serves as the best-case baseline
/// for soft-threshold denoisers.
///
/// For an entry with magnitude `m > τ` the squared error of the shrunk value
/// is `τ² − 2τ(m − c) + |ŷ − ĥ|²` with `c = Re(conj(ŷ/m)·ĥ)`; below the
/// threshold it is `|ĥ|²`. The total is therefore piecewise quadratic with
/// breakpoints at the sorted magnitudes and is minimized interval by interval.
/// `objective` is the resulting per-entry MSE.
pub fn oracle_mse_tau<T: Real>(y_hat: &[Complex<T>], h_hat_true: &[Complex<T>]) -> Result<ThresholdChoice<T>> {
    if y_hat.len() != h_hat_true.len() {
        return Err(Error::dim(format!("observation has {} entries, reference has {}", y_hat.len(), h_hat_true.len())));
    }
    if y_hat.is_empty() {
        return Err(Error::dim("empty vectors"));
    }

    struct Entry<T> {
        mag: T,
        lin: T,
        residual: T,
        target: T,
    }
    let mut entries: Vec<Entry<T>> = y_hat
        .iter()
        .zip(h_hat_true)
        .map(|(&y, &h)| {
            let mag = y.norm();
            let corr = if mag > T::zero() { (y.conj() * h).re / mag } else { T::zero() };
            Entry { mag, lin: mag - corr, residual: (y - h).norm_sqr(), target: h.norm_sqr() }
        })
        .collect();
    entries.sort_unstable_by(|a, b| a.mag.partial_cmp(&b.mag).expect("finite magnitudes"));

    let b = entries.len();
    // suffix sums over entries above the threshold
    let mut lin_suffix = vec![T::zero(); b + 1];
    let mut res_suffix = vec![T::zero(); b + 1];
    for i in (0..b).rev() {
        lin_suffix[i] = lin_suffix[i + 1] + entries[i].lin;
        res_suffix[i] = res_suffix[i + 1] + entries[i].residual;
    }

    let bf = T::of_usize(b);
    let two = T::of(2.0);
    let mut below = T::zero();
    let mut best = ThresholdChoice { tau: T::zero(), objective: T::infinity() };
    for i in 0..=b {
        let lower = if i == 0 { T::zero() } else { entries[i - 1].mag };
        let (tau, err) = if i < b {
            let n = T::of_usize(b - i);
            let vertex = lin_suffix[i] / n;
            let tau = lower.max(entries[i].mag.min(vertex));
            (tau, below + n * tau * tau - two * tau * lin_suffix[i] + res_suffix[i])
        } else {
            (lower, below)
        };
        let mse = err / bf;
        if mse < best.objective {
            best = ThresholdChoice { tau, objective: mse };
        }
        if i < b {
            below = below + entries[i].target;
        }
    }
    Ok(best)
}
