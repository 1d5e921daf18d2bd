use super::cordic::{self, ANGLE_FRAC, INV_GAIN, PI};
use super::qformat::{round_shift, SaturationTally, BEAMSPACE, PHASE};
use super::FixedComplex;

/// Polar form of a beamspace entry: magnitude in [`BEAMSPACE`] format and
/// phase in [`PHASE`] format (radians, `[−π, π)`).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FixedPolar {
    pub mag: i64,
    pub phase: i64,
}

fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Cartesian → polar with 10-bit accurate outputs: the exact magnitude and
/// angle rounded to nearest in their formats.
pub fn to_polar_fixed(z: FixedComplex, tally: &mut SaturationTally) -> FixedPolar {
    let n = (z.re as i128 * z.re as i128 + z.im as i128 * z.im as i128) as u128;
    let floor = isqrt(n);
    // nearest: compare n with (floor + ½)², i.e. 4n with (2·floor + 1)²
    let mag = if 4 * n >= (2 * floor + 1) * (2 * floor + 1) { floor + 1 } else { floor };
    let mag = tally.saturate(mag as i128, BEAMSPACE);

    let mut angle = cordic::atan2(z.re as i128, z.im as i128);
    if angle >= PI - (1i128 << (ANGLE_FRAC - PHASE.frac_bits - 1)) {
        // rounds to +π; the range is half-open, so wrap to −π
        angle -= 2 * PI;
    }
    let phase = tally.saturate(round_shift(angle, ANGLE_FRAC - PHASE.frac_bits), PHASE);
    FixedPolar { mag, phase }
}

/// Polar → Cartesian, rounding each component to [`BEAMSPACE`].
pub fn from_polar_fixed(p: FixedPolar, tally: &mut SaturationTally) -> FixedComplex {
    if p.mag == 0 {
        return FixedComplex::default();
    }
    const WORK: u32 = 44;
    let x0 = round_shift(p.mag as i128 * INV_GAIN, ANGLE_FRAC - WORK);
    let angle = (p.phase as i128) << (ANGLE_FRAC - PHASE.frac_bits);
    let (x, y) = cordic::rotate(x0, angle);
    FixedComplex {
        re: tally.saturate(round_shift(x, WORK), BEAMSPACE),
        im: tally.saturate(round_shift(y, WORK), BEAMSPACE),
    }
}
