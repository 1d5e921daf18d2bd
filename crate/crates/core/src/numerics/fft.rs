use num_complex::Complex;

use super::{check_pow2, ComplexVector};
use crate::error::Result;
use crate::scalar::Real;

/// Unitary DFT, `ŷ[k] = B^{-1/2} Σ_n x[n] e^{-j2πkn/B}`.
pub fn fft_unitary<T: Real>(x: &[Complex<T>]) -> Result<ComplexVector<T>> {
    check_pow2(x.len())?;
    let mut buf = x.to_vec();
    radix2_in_place(&mut buf, false);
    scale(&mut buf, T::one() / T::of_usize(x.len()).sqrt());
    Ok(buf)
}

/// Inverse of [`fft_unitary`].
pub fn ifft_unitary<T: Real>(x: &[Complex<T>]) -> Result<ComplexVector<T>> {
    check_pow2(x.len())?;
    let mut buf = x.to_vec();
    radix2_in_place(&mut buf, true);
    scale(&mut buf, T::one() / T::of_usize(x.len()).sqrt());
    Ok(buf)
}

/// Direct `O(B²)` multiply by the normalized DFT matrix. Reference route for
/// checking the fast transform; works for any length.
pub fn dft_matrix_multiply<T: Real>(x: &[Complex<T>], inverse: bool) -> ComplexVector<T> {
    let n = x.len();
    let sign = if inverse { 1.0 } else { -1.0 };
    let norm = 1.0 / (n as f64).sqrt();
    (0..n)
        .map(|k| {
            let mut acc = Complex::new(0.0f64, 0.0);
            for (m, xm) in x.iter().enumerate() {
                // reduce k*m mod n first so the angle stays small and exact
                let phase = sign * 2.0 * std::f64::consts::PI * ((k * m) % n) as f64 / n as f64;
                let w = Complex::from_polar(1.0, phase);
                acc += w * Complex::new(xm.re.as_f64(), xm.im.as_f64());
            }
            Complex::new(T::of(acc.re * norm), T::of(acc.im * norm))
        })
        .collect()
}

fn scale<T: Real>(buf: &mut [Complex<T>], s: T) {
    for z in buf.iter_mut() {
        *z = z.scale(s);
    }
}

/// Iterative decimation-in-time radix-2 transform, unnormalized.
fn radix2_in_place<T: Real>(buf: &mut [Complex<T>], inverse: bool) {
    let n = buf.len();
    if n <= 1 {
        return;
    }
    bit_reverse_permute(buf);

    let sign = if inverse { 1.0 } else { -1.0 };
    // Twiddles for the largest stage; smaller stages stride through them.
    let half = n / 2;
    let twiddles: Vec<Complex<T>> = (0..half)
        .map(|k| {
            let angle = sign * 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            Complex::new(T::of(angle.cos()), T::of(angle.sin()))
        })
        .collect();

    let mut len = 2;
    while len <= n {
        let stride = n / len;
        for start in (0..n).step_by(len) {
            for j in 0..len / 2 {
                let w = twiddles[j * stride];
                let a = buf[start + j];
                let b = buf[start + j + len / 2] * w;
                buf[start + j] = a + b;
                buf[start + j + len / 2] = a - b;
            }
        }
        len <<= 1;
    }
}

fn bit_reverse_permute<T>(buf: &mut [T]) {
    let n = buf.len();
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if i < j {
            buf.swap(i, j);
        }
    }
}
