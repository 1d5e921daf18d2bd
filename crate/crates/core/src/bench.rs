//! Wall-clock scaling of the denoiser.

use std::hint::black_box;
use std::time::Instant;

use crate::denoiser::{beaches_denoise, Variant};
use crate::error::{Error, Result};
use crate::numerics::{check_pow2, RngStream};

pub const BENCH_CSV_HEADER: &str = "B,median_ns_per_denoise";

/// Fewest timed calls per size.
pub const MIN_REPS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchPoint {
    pub b: usize,
    pub median_ns: f64,
}

/// Median time of `reps` back-to-back `beaches_denoise` calls on a fixed
/// random input for each size, after a short warm-up.
pub fn bench_denoise(sizes: &[usize], reps: usize, variant: Variant) -> Result<Vec<BenchPoint>> {
    if reps < MIN_REPS {
        return Err(Error::param(format!("need at least {MIN_REPS} repetitions, got {reps}")));
    }
    sizes
        .iter()
        .map(|&b| {
            check_pow2(b)?;
            let y = RngStream::new(0xbe7c, b as u64).cscg_vector::<f64>(b, 1.0);
            for _ in 0..reps.div_ceil(10) {
                black_box(beaches_denoise(black_box(&y), 0.1, variant)?);
            }
            let mut times = Vec::with_capacity(reps);
            for _ in 0..reps {
                let start = Instant::now();
                black_box(beaches_denoise(black_box(&y), 0.1, variant)?);
                times.push(start.elapsed().as_nanos() as f64);
            }
            times.sort_by(f64::total_cmp);
            let median = if reps % 2 == 1 { times[reps / 2] } else { 0.5 * (times[reps / 2 - 1] + times[reps / 2]) };
            Ok(BenchPoint { b, median_ns: median })
        })
        .collect()
}

/// Least-squares fit of `t = a·B·log₂B` through the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexityFit {
    pub a: f64,
    /// Coefficient of determination against the mean of the timings.
    pub r_squared: f64,
}

pub fn fit_b_log_b(points: &[BenchPoint]) -> Result<ComplexityFit> {
    if points.len() < 2 {
        return Err(Error::param("need at least two sizes to fit"));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.b as f64 * (p.b as f64).log2()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.median_ns).collect();
    let a = xs.iter().zip(&ys).map(|(x, y)| x * y).sum::<f64>() / xs.iter().map(|x| x * x).sum::<f64>();
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    let ss_res: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - a * x).powi(2)).sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - mean).powi(2)).sum();
    let r_squared = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    Ok(ComplexityFit { a, r_squared })
}

pub fn bench_csv(points: &[BenchPoint]) -> String {
    let mut out = format!("{BENCH_CSV_HEADER}\n");
    for p in points {
        out += &format!("{},{:.0}\n", p.b, p.median_ns);
    }
    out
}
