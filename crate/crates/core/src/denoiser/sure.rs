//! Closed-form SURE for complex soft-thresholding and the sorted interval
//! scan that minimizes it exactly in `O(B)` after sorting.
//!
//! Between two consecutive sorted magnitudes the objective is a convex
//! quadratic in `τ`:
//!
//! ```text
//! SURE(τ, k) = S/B + (B-k+1)/B·τ² + E0 − (E0/B)·τ·V − (2E0/B)·(k−1)
//! S = Σ_{b<k} m_b²,   V = Σ_{b≥k} 1/m_b
//! ```
//!
//! so each interval is minimized by clamping the vertex
//! `E0·V / (2(B−k+1))` into the interval and the global minimum is the best
//! of those. Endpoints are evaluated on the interval's own quadratic, i.e. as
//! one-sided limits of the piecewise objective.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Relative cutoff below which a magnitude is treated as an exact zero.
pub const NEGLIGIBLE_RELATIVE: f64 = 1e-12;
/// Absolute cutoff used when every magnitude is zero.
pub const NEGLIGIBLE_ABSOLUTE: f64 = 1e-300;

/// Beamspace magnitudes sorted in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedMagnitudes<T> {
    values: Vec<T>,
    negligible: usize,
}

impl<T: Real> SortedMagnitudes<T> {
    pub fn new(mut values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::dim("magnitude vector is empty"));
        }
        if let Some(i) = values.iter().position(|v| *v < T::zero() || !v.is_finite()) {
            return Err(Error::param(format!("magnitude {i} is negative or not finite")));
        }
        values.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite"));
        let max = *values.last().unwrap();
        let cutoff = if max > T::zero() { max * T::of(NEGLIGIBLE_RELATIVE) } else { T::of(NEGLIGIBLE_ABSOLUTE) };
        let negligible = values.partition_point(|&v| v < cutoff);
        Ok(Self { values, negligible })
    }

    pub fn from_complex(y_hat: &[Complex<T>]) -> Result<Self> {
        Self::new(y_hat.iter().map(|z| z.norm()).collect())
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> T {
        *self.values.last().unwrap()
    }

    /// Number of leading magnitudes treated as zero. They never enter the
    /// reciprocal sum and always count as below the threshold.
    pub fn negligible(&self) -> usize {
        self.negligible
    }

    /// The scan intervals `k = negligible+1 ..= B+1` (1-based) with their
    /// running sums.
    pub fn intervals(&self) -> Intervals<'_, T> {
        let b = self.values.len();
        let mut suffix = vec![T::zero(); b + 1];
        for i in (self.negligible..b).rev() {
            suffix[i] = suffix[i + 1] + self.values[i].recip();
        }
        let s = self.values[..self.negligible].iter().map(|&v| v * v).sum();
        Intervals { mags: self, suffix, s, next: self.negligible }
    }
}

/// Running state of the scan at the start of interval `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SureScanState<T> {
    /// 1-based interval index; interval `k` spans `(m_{k−1}, m_k)`.
    pub k: usize,
    pub lower: T,
    /// `None` for the unbounded last interval.
    pub upper: Option<T>,
    /// Σ of squared magnitudes below the interval.
    pub s: T,
    /// Σ of reciprocal magnitudes above the interval.
    pub v: T,
    /// Entries above the interval, `B − k + 1`.
    pub above: usize,
    pub b: usize,
}

impl<T: Real> SureScanState<T> {
    /// The interval's quadratic, valid for `τ` inside the interval and equal to
    /// the one-sided limits at its endpoints.
    pub fn sure(&self, tau: T, e0: T) -> T {
        let b = T::of_usize(self.b);
        let below = T::of_usize(self.k - 1);
        self.s / b + T::of_usize(self.above) / b * tau * tau + e0 - e0 / b * tau * self.v - T::of(2.0) * e0 / b * below
    }

    /// `B·SURE − B·E0`, the argmin-equivalent objective without divisions.
    pub fn scaled_sure(&self, tau: T, e0: T) -> T {
        let below = T::of_usize(self.k - 1);
        self.s + T::of_usize(self.above) * tau * tau - e0 * tau * self.v - T::of(2.0) * e0 * below
    }

    /// Minimizer of the quadratic clamped to the closed interval.
    pub fn clamped_minimizer(&self, e0: T) -> T {
        match self.upper {
            Some(upper) => {
                let vertex = e0 * self.v / (T::of(2.0) * T::of_usize(self.above));
                self.lower.max(upper.min(vertex))
            }
            // V = 0 and nothing above: the quadratic is flat, take the left end.
            None => self.lower,
        }
    }
}

pub struct Intervals<'a, T> {
    mags: &'a SortedMagnitudes<T>,
    suffix: Vec<T>,
    s: T,
    next: usize,
}

impl<T: Real> Iterator for Intervals<'_, T> {
    type Item = SureScanState<T>;

    fn next(&mut self) -> Option<Self::Item> {
        let m = &self.mags.values;
        let b = m.len();
        let i = self.next;
        if i > b {
            return None;
        }
        let lower = if i == self.mags.negligible { T::zero() } else { m[i - 1] };
        let state =
            SureScanState { k: i + 1, lower, upper: m.get(i).copied(), s: self.s, v: self.suffix[i], above: b - i, b };
        if i < b {
            self.s = self.s + m[i] * m[i];
        }
        self.next += 1;
        Some(state)
    }
}

/// A selected threshold and the objective it attains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdChoice<T> {
    pub tau: T,
    pub objective: T,
}

fn check_e0<T: Real>(e0: T) -> Result<()> {
    if e0 < T::zero() || !e0.is_finite() {
        return Err(Error::param(format!("E0 must be finite and >= 0, got {e0}")));
    }
    Ok(())
}

/// Direct evaluation of SURE for soft-thresholding at `tau`.
///
/// SURE is undefined where `tau` equals a magnitude; such entries are counted
/// as above the threshold, which yields the limit from the left. Negligible
/// magnitudes always count as below.
pub fn sure_value<T: Real>(magnitudes: &[T], tau: T, e0: T) -> Result<T> {
    if tau < T::zero() || !tau.is_finite() {
        return Err(Error::param(format!("threshold must be finite and >= 0, got {tau}")));
    }
    check_e0(e0)?;
    if magnitudes.is_empty() {
        return Err(Error::dim("magnitude vector is empty"));
    }
    let max = magnitudes.iter().copied().fold(T::zero(), T::max);
    let cutoff = if max > T::zero() { max * T::of(NEGLIGIBLE_RELATIVE) } else { T::of(NEGLIGIBLE_ABSOLUTE) };
    let b = T::of_usize(magnitudes.len());
    let (mut below_sq, mut below_n, mut above_n, mut above_recip) = (T::zero(), T::zero(), T::zero(), T::zero());
    for &m in magnitudes {
        if m < tau || m < cutoff {
            below_sq = below_sq + m * m;
            below_n = below_n + T::one();
        } else {
            above_n = above_n + T::one();
            above_recip = above_recip + m.recip();
        }
    }
    Ok(below_sq / b + above_n * tau * tau / b + e0 - e0 / b * tau * above_recip - T::of(2.0) * e0 / b * below_n)
}

/// Exact SURE-optimal threshold over `τ ≥ 0`. Ties go to the smallest `τ`.
pub fn scan_optimal_tau<T: Real>(sorted: &SortedMagnitudes<T>, e0: T) -> Result<ThresholdChoice<T>> {
    check_e0(e0)?;
    let mut best = ThresholdChoice { tau: T::zero(), objective: T::infinity() };
    for state in sorted.intervals() {
        let tau = state.clamped_minimizer(e0);
        let sure = state.sure(tau, e0);
        if sure < best.objective {
            best = ThresholdChoice { tau, objective: sure };
        }
    }
    Ok(best)
}

/// Hardware-simplified scan: the only candidate in interval `k` is the sorted
/// magnitude `m_k` itself, and the objective is `B·SURE − B·E0`.
pub fn scan_optimal_tau_hw<T: Real>(sorted: &SortedMagnitudes<T>, e0: T) -> Result<ThresholdChoice<T>> {
    check_e0(e0)?;
    let mut best: Option<ThresholdChoice<T>> = None;
    let mut last = None;
    for state in sorted.intervals() {
        let Some(tau) = state.upper else {
            last = Some(state);
            break;
        };
        let objective = state.scaled_sure(tau, e0);
        if best.is_none_or(|b| objective < b.objective) {
            best = Some(ThresholdChoice { tau, objective });
        }
    }
    // Only reachable when every magnitude is negligible.
    Ok(best.unwrap_or_else(|| {
        let state = last.expect("the final interval always exists");
        ThresholdChoice { tau: T::zero(), objective: state.scaled_sure(T::zero(), e0) }
    }))
}

/// Converts a [`scan_optimal_tau_hw`] objective back to SURE units.
pub fn unscale_sure<T: Real>(scaled: T, b: usize, e0: T) -> T {
    scaled / T::of_usize(b) + e0
}
