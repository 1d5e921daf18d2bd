//! High-precision integer CORDIC used as a deterministic stand-in for exact
//! trigonometry. Angles are in units of 2⁻⁶⁰ rad.

pub(crate) const ANGLE_FRAC: u32 = 60;
pub(crate) const PI: i128 = 3_622_009_729_038_561_421;
pub(crate) const HALF_PI: i128 = 1_811_004_864_519_280_711;
/// Reciprocal CORDIC gain, `2⁶⁰ / Π√(1 + 2⁻²ⁱ)`.
pub(crate) const INV_GAIN: i128 = 700_114_967_507_363_238;

const ITERATIONS: usize = 61;

/// `atan(2⁻ⁱ)` for `i < 20`; beyond that `atan(2⁻ⁱ)` rounds to `2^(60−i)`.
const ATAN_HEAD: [i128; 20] = [
    905_502_432_259_640_355,
    534_549_298_976_576_474,
    282_441_168_888_798_124,
    143_371_547_418_228_444,
    71_963_988_336_308_046,
    36_017_075_762_092_179,
    18_012_932_708_689_205,
    9_007_016_009_513_623,
    4_503_576_721_087_964,
    2_251_796_950_380_271,
    1_125_899_548_928_887,
    562_949_908_682_076,
    281_474_971_118_251,
    140_737_487_656_277,
    70_368_744_090_283,
    35_184_372_077_909,
    17_592_186_043_051,
    8_796_093_022_037,
    4_398_046_511_083,
    2_199_023_255_549,
];

fn atan_pow2(i: usize) -> i128 {
    if i < ATAN_HEAD.len() {
        ATAN_HEAD[i]
    } else {
        1i128 << (ANGLE_FRAC as usize - i)
    }
}

/// Angle of `(x, y)` in `(−π, π]`; zero for the origin.
pub(crate) fn atan2(x: i128, y: i128) -> i128 {
    if x == 0 && y == 0 {
        return 0;
    }
    // Work at ~2^100 regardless of input scale so the shifts keep precision.
    let top = 128 - x.unsigned_abs().max(y.unsigned_abs()).leading_zeros();
    let (x, y) = if top < 100 { (x << (100 - top), y << (100 - top)) } else { (x, y) };
    let (mut x, mut y, mut z) = if x < 0 {
        if y >= 0 {
            (y, -x, HALF_PI)
        } else {
            (-y, x, -HALF_PI)
        }
    } else {
        (x, y, 0)
    };
    for i in 0..ITERATIONS {
        let (dx, dy) = (y >> i, x >> i);
        if y > 0 {
            x += dx;
            y -= dy;
            z += atan_pow2(i);
        } else {
            x -= dx;
            y += dy;
            z -= atan_pow2(i);
        }
    }
    z
}

/// Rotates `(x0 / K, 0)` by `angle`; pass `x0` already multiplied by
/// [`INV_GAIN`]` / 2⁶⁰` so the result has unit gain.
pub(crate) fn rotate(x0: i128, angle: i128) -> (i128, i128) {
    let (mut x, mut y, mut z) = if angle > HALF_PI {
        (0, x0, angle - HALF_PI)
    } else if angle < -HALF_PI {
        (0, -x0, angle + HALF_PI)
    } else {
        (x0, 0, angle)
    };
    for i in 0..ITERATIONS {
        let (dx, dy) = (y >> i, x >> i);
        if z >= 0 {
            x -= dx;
            y += dy;
            z -= atan_pow2(i);
        } else {
            x += dx;
            y -= dy;
            z += atan_pow2(i);
        }
    }
    (x, y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn to_rad(z: i128) -> f64 {
        z as f64 / (ANGLE_FRAC as f64).exp2()
    }

    #[test]
    fn angles_match_float_reference() {
        let s = 1i128 << 50;
        for k in 0..64 {
            let theta = -3.1 + k as f64 * 0.0985;
            let (x, y) = ((theta.cos() * s as f64) as i128, (theta.sin() * s as f64) as i128);
            assert!((to_rad(atan2(x, y)) - theta).abs() < 1e-12, "{theta}");
        }
        assert!((to_rad(atan2(-s, 0)) - std::f64::consts::PI).abs() < 1e-12);
        assert_eq!(atan2(0, 0), 0);
    }

    #[test]
    fn rotation_has_unit_gain() {
        let one = 1i128 << 60;
        for k in 0..64 {
            let theta = -3.1 + k as f64 * 0.0997;
            let angle = (theta * one as f64) as i128;
            let (x, y) = rotate(INV_GAIN, angle);
            assert!((x as f64 / one as f64 - theta.cos()).abs() < 1e-12, "{theta}");
            assert!((y as f64 / one as f64 - theta.sin()).abs() < 1e-12, "{theta}");
        }
    }
}
