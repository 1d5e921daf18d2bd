use std::fmt::Write as _;

use num_complex::Complex;

use crate::error::{Error, Result};

/// Parses one complex entry per line as `re,im`. Blank lines are skipped.
pub fn parse_complex_csv(text: &str) -> Result<Vec<Complex<f64>>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse { line: idx + 1, message };
        let mut fields = line.split(',').map(str::trim);
        let (re, im) = match (fields.next(), fields.next(), fields.next()) {
            (Some(re), Some(im), None) => (re, im),
            _ => return Err(err(format!("expected `re,im`, got `{line}`"))),
        };
        let re: f64 = re.parse().map_err(|e| err(format!("bad real part `{re}`: {e}")))?;
        let im: f64 = im.parse().map_err(|e| err(format!("bad imaginary part `{im}`: {e}")))?;
        if !re.is_finite() || !im.is_finite() {
            return Err(err("non-finite value".into()));
        }
        out.push(Complex::new(re, im));
    }
    Ok(out)
}

/// Inverse of [`parse_complex_csv`]. Uses shortest round-trip float formatting,
/// so output is byte-stable and re-parses to identical values.
pub fn format_complex_csv(x: &[Complex<f64>]) -> String {
    let mut s = String::with_capacity(x.len() * 40);
    for z in x {
        writeln!(s, "{:?},{:?}", z.re, z.im).unwrap();
    }
    s
}
