use std::fmt;

/// Two's-complement (or unsigned) fixed-point format `Q(total, frac)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QFormat {
    pub total_bits: u32,
    pub frac_bits: u32,
    pub signed: bool,
}

impl QFormat {
    pub const fn signed(total_bits: u32, frac_bits: u32) -> Self {
        assert!(frac_bits <= total_bits && total_bits <= 64 && total_bits >= 1);
        Self { total_bits, frac_bits, signed: true }
    }

    pub const fn unsigned(total_bits: u32, frac_bits: u32) -> Self {
        assert!(frac_bits <= total_bits && total_bits <= 64 && total_bits >= 1);
        Self { total_bits, frac_bits, signed: false }
    }

    pub const fn min_raw(self) -> i128 {
        if self.signed {
            -(1i128 << (self.total_bits - 1))
        } else {
            0
        }
    }

    pub const fn max_raw(self) -> i128 {
        if self.signed {
            (1i128 << (self.total_bits - 1)) - 1
        } else {
            (1i128 << self.total_bits) - 1
        }
    }

    pub fn lsb(self) -> f64 {
        (-(self.frac_bits as f64)).exp2()
    }

    pub fn to_f64(self, raw: i64) -> f64 {
        raw as f64 * self.lsb()
    }

    pub fn min_value(self) -> f64 {
        self.min_raw() as f64 * self.lsb()
    }

    pub fn max_value(self) -> f64 {
        self.max_raw() as f64 * self.lsb()
    }
}

impl fmt::Display for QFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let u = if self.signed { "" } else { "U" };
        write!(f, "{u}Q({},{})", self.total_bits, self.frac_bits)
    }
}

/// Antenna-domain channel entries.
pub const ANTENNA: QFormat = QFormat::signed(16, 8);
/// Beamspace entries after the stage-scaled FFT, Cartesian and magnitude.
pub const BEAMSPACE: QFormat = QFormat::signed(10, 8);
/// Beamspace phase in radians.
pub const PHASE: QFormat = QFormat::signed(10, 7);
/// `E0/B` in the scaled beamspace.
pub const E0_SCALED: QFormat = QFormat::signed(16, 15);
/// Reciprocal look-up table entries.
pub const RECIPROCAL: QFormat = QFormat::signed(12, 2);
/// Running sum of squared magnitudes.
pub const SUM_SQUARES: QFormat = QFormat::signed(32, 16);
/// Running sum of reciprocals.
pub const SUM_RECIPROCALS: QFormat = QFormat::signed(24, 2);
/// FFT twiddle factors.
pub const TWIDDLE: QFormat = QFormat::signed(18, 16);

/// Counts values clamped to a format's range.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SaturationTally {
    pub events: u64,
}

impl SaturationTally {
    pub fn saturate(&mut self, raw: i128, fmt: QFormat) -> i64 {
        if raw > fmt.max_raw() {
            self.events += 1;
            fmt.max_raw() as i64
        } else if raw < fmt.min_raw() {
            self.events += 1;
            fmt.min_raw() as i64
        } else {
            raw as i64
        }
    }
}

/// Round-to-nearest-even quantization with saturation. Non-finite input is
/// treated as zero and counted.
pub fn quantize(x: f64, fmt: QFormat, tally: &mut SaturationTally) -> i64 {
    if !x.is_finite() {
        tally.events += 1;
        return 0;
    }
    let scaled = (x * (fmt.frac_bits as f64).exp2()).round_ties_even();
    // f64 → i128 casts saturate, so huge inputs still clamp correctly.
    tally.saturate(scaled as i128, fmt)
}

/// `v / 2^shift` rounded to nearest, ties to even.
pub fn round_shift(v: i128, shift: u32) -> i128 {
    if shift == 0 {
        return v;
    }
    let floor = v >> shift;
    let rem = v - (floor << shift);
    let half = 1i128 << (shift - 1);
    if rem > half || (rem == half && floor & 1 == 1) {
        floor + 1
    } else {
        floor
    }
}
