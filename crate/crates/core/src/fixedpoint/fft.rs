use super::cordic::{self, INV_GAIN, PI};
use super::qformat::{round_shift, QFormat, SaturationTally, ANTENNA, BEAMSPACE, TWIDDLE};
use super::{FixedComplex, FixedVector};
use crate::error::{Error, Result};

/// `e^{∓j2πk/n}` for `k < n/2` in [`TWIDDLE`] format.
fn twiddles(n: usize, inverse: bool) -> Vec<FixedComplex> {
    let shift = cordic::ANGLE_FRAC - TWIDDLE.frac_bits;
    (0..n / 2)
        .map(|k| {
            let angle = (2 * PI * k as i128 + n as i128 / 2) / n as i128;
            let angle = if inverse { angle } else { -angle };
            let (c, s) = cordic::rotate(INV_GAIN, angle);
            FixedComplex { re: round_shift(c, shift) as i64, im: round_shift(s, shift) as i64 }
        })
        .collect()
}

fn bit_reverse(data: &mut [FixedComplex]) {
    let n = data.len();
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if i < j {
            data.swap(i, j);
        }
    }
}

/// Radix-2 DIT butterflies on raw integers at a fixed number of fraction
/// bits. With `halve`, every stage output is divided by two with one
/// rounding per butterfly output.
fn radix2(data: &mut [FixedComplex], inverse: bool, halve: bool) {
    let n = data.len();
    if n < 2 {
        return;
    }
    bit_reverse(data);
    let tw = twiddles(n, inverse);
    let tf = TWIDDLE.frac_bits;
    let out_shift = tf + halve as u32;
    let mut len = 2;
    while len <= n {
        let stride = n / len;
        for start in (0..n).step_by(len) {
            for j in 0..len / 2 {
                let w = tw[j * stride];
                let a = data[start + j];
                let b = data[start + j + len / 2];
                // w·b at (frac + tf) fraction bits, exact
                let pr = w.re as i128 * b.re as i128 - w.im as i128 * b.im as i128;
                let pi = w.re as i128 * b.im as i128 + w.im as i128 * b.re as i128;
                let ar = (a.re as i128) << tf;
                let ai = (a.im as i128) << tf;
                data[start + j] = FixedComplex {
                    re: round_shift(ar + pr, out_shift) as i64,
                    im: round_shift(ai + pi, out_shift) as i64,
                };
                data[start + j + len / 2] = FixedComplex {
                    re: round_shift(ar - pr, out_shift) as i64,
                    im: round_shift(ai - pi, out_shift) as i64,
                };
            }
        }
        len <<= 1;
    }
}

fn check(x: &FixedVector, fmt: QFormat) -> Result<()> {
    let n = x.data.len();
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::dim(format!("length {n} is not a positive power of two")));
    }
    if x.fmt != fmt {
        return Err(Error::param(format!("expected {fmt} input, got {}", x.fmt)));
    }
    Ok(())
}

/// Forward FFT that halves after each of the `log₂B` stages (overall `1/B`,
/// i.e. `1/√B` times the unitary DFT). Takes [`ANTENNA`] input and returns
/// [`BEAMSPACE`] output.
pub fn fft_scaled_fixed(x: &FixedVector, tally: &mut SaturationTally) -> Result<FixedVector> {
    check(x, ANTENNA)?;
    let mut data = x.data.clone();
    radix2(&mut data, false, true);
    for z in &mut data {
        z.re = tally.saturate(z.re as i128, BEAMSPACE);
        z.im = tally.saturate(z.im as i128, BEAMSPACE);
    }
    Ok(FixedVector { fmt: BEAMSPACE, data })
}

/// Inverse FFT without stage scaling (gain `B` relative to the scaled forward
/// transform's inverse). Takes [`BEAMSPACE`] input and returns [`ANTENNA`]
/// output; intermediate values keep full integer width.
pub fn ifft_unscaled_fixed(x: &FixedVector, tally: &mut SaturationTally) -> Result<FixedVector> {
    check(x, BEAMSPACE)?;
    let mut data = x.data.clone();
    radix2(&mut data, true, false);
    for z in &mut data {
        z.re = tally.saturate(z.re as i128, ANTENNA);
        z.im = tally.saturate(z.im as i128, ANTENNA);
    }
    Ok(FixedVector { fmt: ANTENNA, data })
}
