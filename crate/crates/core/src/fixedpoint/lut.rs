use super::qformat::{BEAMSPACE, RECIPROCAL};

/// Table size; indexed by the nine magnitude bits of a nonnegative Q(10,8)
/// value.
pub const LUT_SIZE: usize = 512;

/// Entry `i` is `1 / ((i + ½)·2⁻⁸)` rounded to nearest in Q(12,2) and
/// saturated, so cell 0 holds the format maximum 511.75.
pub const RECIPROCAL_TABLE: [i64; LUT_SIZE] = build();

const fn build() -> [i64; LUT_SIZE] {
    // 1/((i+½)/256) in quarters = 2048 / (2i + 1)
    let numer = 1i64 << (BEAMSPACE.frac_bits + RECIPROCAL.frac_bits + 1);
    let max = RECIPROCAL.max_raw() as i64;
    let mut t = [0i64; LUT_SIZE];
    let mut i = 0;
    while i < LUT_SIZE {
        let d = 2 * i as i64 + 1;
        let q = numer / d;
        let r = numer % d;
        // d is odd, so there is never an exact tie
        let v = if 2 * r > d { q + 1 } else { q };
        t[i] = if v > max { max } else { v };
        i += 1;
    }
    t
}

/// Reciprocal of a nonnegative Q(10,8) magnitude as Q(12,2).
pub fn reciprocal_lut(mag_raw: i64) -> i64 {
    RECIPROCAL_TABLE[mag_raw.clamp(0, LUT_SIZE as i64 - 1) as usize]
}
