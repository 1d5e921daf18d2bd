use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Gray-labeled square constellations with unit average symbol energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Constellation {
    #[serde(rename = "QPSK")]
    Qpsk,
    #[serde(rename = "16QAM")]
    Qam16,
}

impl Constellation {
    pub fn bits_per_symbol(self) -> usize {
        match self {
            Constellation::Qpsk => 2,
            Constellation::Qam16 => 4,
        }
    }

    fn bits_per_axis(self) -> usize {
        self.bits_per_symbol() / 2
    }

    fn norm(self) -> f64 {
        match self {
            Constellation::Qpsk => 2f64.sqrt(),
            Constellation::Qam16 => 10f64.sqrt(),
        }
    }

    /// All points, indexed by their bit label read MSB first.
    pub fn points<T: Real>(self) -> Vec<Complex<T>> {
        let n = self.bits_per_symbol();
        (0..1usize << n)
            .map(|label| {
                let bits: Vec<bool> = (0..n).rev().map(|i| label >> i & 1 == 1).collect();
                self.map_symbol(&bits)
            })
            .collect()
    }

    fn map_symbol<T: Real>(self, bits: &[bool]) -> Complex<T> {
        let k = self.bits_per_axis();
        let re = axis_level(self, &bits[..k]);
        let im = axis_level(self, &bits[k..]);
        Complex::new(T::of(re / self.norm()), T::of(im / self.norm()))
    }
}

// Gray labels per axis: QPSK 0 → -1, 1 → +1; 16-QAM 00 → -3, 01 → -1, 11 → +1, 10 → +3.
fn axis_level(c: Constellation, bits: &[bool]) -> f64 {
    match (c, bits) {
        (Constellation::Qpsk, [b]) => {
            if *b {
                1.0
            } else {
                -1.0
            }
        }
        (Constellation::Qam16, [b0, b1]) => match (b0, b1) {
            (false, false) => -3.0,
            (false, true) => -1.0,
            (true, true) => 1.0,
            (true, false) => 3.0,
        },
        _ => unreachable!("bit group width matches constellation"),
    }
}

fn axis_bits(c: Constellation, x: f64, out: &mut Vec<bool>) {
    let x = x * c.norm();
    match c {
        Constellation::Qpsk => out.push(x >= 0.0),
        Constellation::Qam16 => {
            out.push(x >= 0.0);
            out.push(x.abs() < 2.0);
        }
    }
}

impl fmt::Display for Constellation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Constellation::Qpsk => "QPSK",
            Constellation::Qam16 => "16QAM",
        })
    }
}

impl FromStr for Constellation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().replace('-', "").as_str() {
            "QPSK" | "4QAM" => Ok(Constellation::Qpsk),
            "16QAM" | "QAM16" => Ok(Constellation::Qam16),
            _ => Err(Error::Config(format!("unknown constellation `{s}` (expected QPSK or 16QAM)"))),
        }
    }
}

/// Maps bits to unit-energy symbols. The bit count must be a multiple of
/// the bits per symbol.
pub fn map_bits<T: Real>(c: Constellation, bits: &[bool]) -> Result<Vec<Complex<T>>> {
    let k = c.bits_per_symbol();
    if !bits.len().is_multiple_of(k) {
        return Err(Error::dim(format!("{} bits is not a multiple of {k}", bits.len())));
    }
    Ok(bits.chunks_exact(k).map(|chunk| c.map_symbol(chunk)).collect())
}

/// Minimum-distance hard decisions, one bit group per symbol.
pub fn demap_symbols<T: Real>(c: Constellation, symbols: &[Complex<T>]) -> Vec<bool> {
    let mut out = Vec::with_capacity(symbols.len() * c.bits_per_symbol());
    for z in symbols {
        axis_bits(c, z.re.as_f64(), &mut out);
        axis_bits(c, z.im.as_f64(), &mut out);
    }
    out
}
