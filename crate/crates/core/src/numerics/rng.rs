use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::ComplexVector;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Key for a reproducible random stream.
///
/// A stream is a pure function of `(seed, stream_id)`: every call to
/// [`RngStream::rng`] restarts the same sequence. Independent substreams for
/// trials, users and purposes are derived with [`RngStream::substream`], so
/// results never depend on the order in which work is scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    /// Fresh generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }

    /// Child stream keyed by `key`. Distinct keys give distinct streams.
    pub fn substream(&self, key: u64) -> Self {
        Self {
            seed: self.seed,
            stream_id: splitmix64(self.stream_id ^ splitmix64(key.wrapping_add(0x9e37_79b9_7f4a_7c15))),
        }
    }

    /// Child stream keyed by several counters, e.g. `(snr index, trial, user)`.
    pub fn keyed(&self, keys: &[u64]) -> Self {
        keys.iter().fold(*self, |s, &k| s.substream(k))
    }

    /// `n` i.i.d. CN(0, variance) samples. Panics on a negative variance; use
    /// [`draw_cscg`] for the checked form.
    pub fn cscg_vector<T: Real>(&self, n: usize, variance: f64) -> ComplexVector<T> {
        let mut rng = self.rng();
        fill_cscg(&mut rng, n, variance)
    }
}

pub(crate) fn fill_cscg<T: Real, R: Rng>(rng: &mut R, n: usize, variance: f64) -> ComplexVector<T> {
    assert!(variance >= 0.0, "negative variance");
    let sigma = (variance / 2.0).sqrt();
    (0..n)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex::new(T::of(sigma * re), T::of(sigma * im))
        })
        .collect()
}

/// Draws `n` circularly-symmetric complex Gaussian samples with the given
/// per-entry variance (real and imaginary parts each carry half).
pub fn draw_cscg<T: Real>(n: usize, variance: f64, rng: &RngStream) -> Result<ComplexVector<T>> {
    if variance < 0.0 || !variance.is_finite() {
        return Err(Error::param(format!("variance must be finite and >= 0, got {variance}")));
    }
    Ok(rng.cscg_vector(n, variance))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
