use num_complex::Complex;

use crate::error::{Error, Result};
use crate::numerics::ComplexVector;
use crate::scalar::Real;

/// `B × U` channel matrix stored by column, one column per user.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix<T> {
    columns: Vec<ComplexVector<T>>,
}

impl<T: Real> ChannelMatrix<T> {
    pub fn from_columns(columns: Vec<ComplexVector<T>>) -> Result<Self> {
        let Some(first) = columns.first() else {
            return Err(Error::dim("channel matrix needs at least one column"));
        };
        let b = first.len();
        if b == 0 || columns.iter().any(|c| c.len() != b) {
            return Err(Error::dim("channel matrix columns must share a nonzero length"));
        }
        Ok(Self { columns })
    }

    pub fn rows(&self) -> usize {
        self.columns[0].len()
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[ComplexVector<T>] {
        &self.columns
    }

    pub fn column(&self, u: usize) -> &[Complex<T>] {
        &self.columns[u]
    }

    /// `H·s`.
    pub fn apply(&self, s: &[Complex<T>]) -> ComplexVector<T> {
        assert_eq!(s.len(), self.cols());
        let mut out = vec![Complex::new(T::zero(), T::zero()); self.rows()];
        for (col, &su) in self.columns.iter().zip(s) {
            for (o, &h) in out.iter_mut().zip(col) {
                *o = *o + h * su;
            }
        }
        out
    }

    /// `Hᴴ·r`.
    pub fn adjoint_apply(&self, r: &[Complex<T>]) -> ComplexVector<T> {
        assert_eq!(r.len(), self.rows());
        self.columns
            .iter()
            .map(|col| col.iter().zip(r).fold(Complex::new(T::zero(), T::zero()), |acc, (h, x)| acc + h.conj() * x))
            .collect()
    }

    /// `HᴴH` as a dense row-major `U × U` matrix.
    pub fn gram(&self) -> Vec<Complex<T>> {
        let u = self.cols();
        let mut g = vec![Complex::new(T::zero(), T::zero()); u * u];
        for i in 0..u {
            for j in 0..=i {
                let v = self.columns[i]
                    .iter()
                    .zip(&self.columns[j])
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b);
                g[i * u + j] = v;
                g[j * u + i] = v.conj();
            }
        }
        g
    }
}

/// L-MMSE equalizer `(HᴴH + (N0/Es)·I)⁻¹ Hᴴ` with the regularized Gram matrix
/// factored once, so detecting many receive vectors costs one `U × U`
/// triangular solve pair each.
#[derive(Debug, Clone)]
pub struct LmmseDetector<'a, T> {
    h: &'a ChannelMatrix<T>,
    /// Lower Cholesky factor, row-major.
    chol: Vec<Complex<T>>,
}

impl<'a, T: Real> LmmseDetector<'a, T> {
    pub fn new(h: &'a ChannelMatrix<T>, n0: T, es: T) -> Result<Self> {
        if es <= T::zero() || !es.is_finite() {
            return Err(Error::param(format!("symbol energy must be > 0, got {es}")));
        }
        if n0 < T::zero() || !n0.is_finite() {
            return Err(Error::param(format!("N0 must be >= 0, got {n0}")));
        }
        let u = h.cols();
        let mut a = h.gram();
        let reg = n0 / es;
        for i in 0..u {
            a[i * u + i].re = a[i * u + i].re + reg;
        }
        let chol = cholesky(&a, u)?;
        Ok(Self { h, chol })
    }

    pub fn detect(&self, r: &[Complex<T>]) -> ComplexVector<T> {
        let z = self.h.adjoint_apply(r);
        cholesky_solve(&self.chol, self.h.cols(), z)
    }
}

/// Single-shot L-MMSE detection, `ŝ = (HᴴH + (N0/Es)·I)⁻¹ Hᴴ r`.
pub fn lmmse_detect<T: Real>(h: &ChannelMatrix<T>, r: &[Complex<T>], n0: T, es: T) -> Result<ComplexVector<T>> {
    if r.len() != h.rows() {
        return Err(Error::dim(format!("receive vector has {} entries, channel has {} rows", r.len(), h.rows())));
    }
    Ok(LmmseDetector::new(h, n0, es)?.detect(r))
}

fn cholesky<T: Real>(a: &[Complex<T>], n: usize) -> Result<Vec<Complex<T>>> {
    let scale = (0..n).map(|i| a[i * n + i].re.abs()).fold(T::zero(), T::max);
    let tiny = scale * T::epsilon() * T::of_usize(4 * n);
    let mut l = vec![Complex::new(T::zero(), T::zero()); n * n];
    for j in 0..n {
        let mut d = a[j * n + j].re;
        for k in 0..j {
            d = d - l[j * n + k].norm_sqr();
        }
        if d.is_nan() || d <= tiny {
            return Err(Error::SingularSystem);
        }
        let d = d.sqrt();
        l[j * n + j] = Complex::new(d, T::zero());
        for i in j + 1..n {
            let mut v = a[i * n + j];
            for k in 0..j {
                v = v - l[i * n + k] * l[j * n + k].conj();
            }
            l[i * n + j] = v / d;
        }
    }
    Ok(l)
}

fn cholesky_solve<T: Real>(l: &[Complex<T>], n: usize, mut x: Vec<Complex<T>>) -> Vec<Complex<T>> {
    for i in 0..n {
        let mut v = x[i];
        for k in 0..i {
            v = v - l[i * n + k] * x[k];
        }
        x[i] = v / l[i * n + i];
    }
    for i in (0..n).rev() {
        let mut v = x[i];
        for k in i + 1..n {
            v = v - l[k * n + i].conj() * x[k];
        }
        x[i] = v / l[i * n + i];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{fft_unitary, RngStream};

    type C = Complex<f64>;

    /// Gauss-Jordan inverse with partial pivoting; independent of the
    /// Cholesky path.
    fn invert(mut a: Vec<C>, n: usize) -> Vec<C> {
        let mut inv = vec![C::new(0.0, 0.0); n * n];
        for i in 0..n {
            inv[i * n + i] = C::new(1.0, 0.0);
        }
        for col in 0..n {
            let piv =
                (col..n).max_by(|&x, &y| a[x * n + col].norm().partial_cmp(&a[y * n + col].norm()).unwrap()).unwrap();
            for k in 0..n {
                a.swap(col * n + k, piv * n + k);
                inv.swap(col * n + k, piv * n + k);
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
        inv
    }

    fn explicit_lmmse(h: &ChannelMatrix<f64>, r: &[C], n0: f64, es: f64) -> Vec<C> {
        let u = h.cols();
        let mut g = vec![C::new(0.0, 0.0); u * u];
        for i in 0..u {
            for j in 0..u {
                g[i * u + j] = (0..h.rows()).map(|b| h.column(i)[b].conj() * h.column(j)[b]).sum();
            }
            g[i * u + i] += n0 / es;
        }
        let ginv = invert(g, u);
        let hr: Vec<C> = (0..u).map(|i| (0..h.rows()).map(|b| h.column(i)[b].conj() * r[b]).sum()).collect();
        (0..u).map(|i| (0..u).map(|j| ginv[i * u + j] * hr[j]).sum()).collect()
    }

    fn random_matrix(b: usize, u: usize, seed: u64) -> ChannelMatrix<f64> {
        let s = RngStream::new(seed, 0);
        ChannelMatrix::from_columns((0..u).map(|k| s.substream(k as u64).cscg_vector(b, 1.0)).collect()).unwrap()
    }

    fn rel_err(a: &[C], b: &[C]) -> f64 {
        let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
        let den: f64 = b.iter().map(|y| y.norm_sqr()).sum();
        (num / den).sqrt()
    }

    #[test]
    fn single_user_matched_filter() {
        let h = random_matrix(16, 1, 1);
        let r = RngStream::new(2, 0).cscg_vector::<f64>(16, 1.0);
        let s = lmmse_detect(&h, &r, 0.0, 1.0).unwrap();
        let hr: C = h.column(0).iter().zip(&r).map(|(a, b)| a.conj() * b).sum();
        let hh: f64 = h.column(0).iter().map(|z| z.norm_sqr()).sum();
        assert!((s[0] - hr / hh).norm() < 1e-12);
    }

    #[test]
    fn orthogonal_channel_recovers_symbols() {
        // Columns of the scaled DFT matrix are orthogonal with norm √B.
        let b = 16;
        let cols: Vec<Vec<C>> = (0..4)
            .map(|k| {
                let mut e = vec![C::new(0.0, 0.0); b];
                e[k * 3] = C::new((b as f64).sqrt(), 0.0);
                fft_unitary(&e).unwrap()
            })
            .collect();
        let h = ChannelMatrix::from_columns(cols).unwrap();
        let s = vec![C::new(1.0, -1.0), C::new(0.3, 0.0), C::new(-3.0, 1.0), C::new(0.0, 1.0)];
        let r = h.apply(&s);
        let est = lmmse_detect(&h, &r, 0.0, 1.0).unwrap();
        assert!(rel_err(&est, &s) < 1e-12);
    }

    #[test]
    fn matches_explicit_inverse_oracle() {
        for seed in 0..100u64 {
            let b = [8usize, 16, 64, 128, 256][seed as usize % 5];
            let u = 1 + (seed as usize * 7) % 16.min(b);
            let h = random_matrix(b, u, 100 + seed);
            let r = RngStream::new(200 + seed, 0).cscg_vector::<f64>(b, 2.0);
            let n0 = [0.1, 1.0, 0.01][seed as usize % 3];
            let fast = lmmse_detect(&h, &r, n0, 0.25).unwrap();
            let slow = explicit_lmmse(&h, &r, n0, 0.25);
            assert!(rel_err(&fast, &slow) < 1e-10, "seed {seed}");
        }
        let h = random_matrix(64, 4, 7);
        let r = RngStream::new(8, 0).cscg_vector::<f64>(64, 1.0);
        assert!(rel_err(&lmmse_detect(&h, &r, 0.1, 1.0).unwrap(), &explicit_lmmse(&h, &r, 0.1, 1.0)) < 1e-10);
    }

    #[test]
    fn rank_deficient_noiseless_is_singular() {
        let col = RngStream::new(3, 0).cscg_vector::<f64>(8, 1.0);
        let h = ChannelMatrix::from_columns(vec![col.clone(), col]).unwrap();
        let r = vec![C::new(1.0, 0.0); 8];
        assert!(matches!(lmmse_detect(&h, &r, 0.0, 1.0), Err(Error::SingularSystem)));
        // regularization fixes it
        assert!(lmmse_detect(&h, &r, 0.1, 1.0).is_ok());
    }

    #[test]
    fn dimension_checks() {
        assert!(ChannelMatrix::<f64>::from_columns(vec![]).is_err());
        assert!(ChannelMatrix::from_columns(vec![vec![C::new(1.0, 0.0); 4], vec![C::new(1.0, 0.0); 3]]).is_err());
        let h = random_matrix(8, 2, 1);
        assert!(lmmse_detect(&h, &[C::new(0.0, 0.0); 4], 0.1, 1.0).is_err());
        assert!(lmmse_detect(&h, &[C::new(0.0, 0.0); 8], 0.1, 0.0).is_err());
    }
}
