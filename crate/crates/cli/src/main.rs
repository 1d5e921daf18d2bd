use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use beaches::bench::{bench_csv, bench_denoise, fit_b_log_b, MIN_REPS};
use beaches::linksim::{run_link_sweep, sweep_csv, LinkConfig};
use beaches::numerics::{format_complex_csv, parse_complex_csv};
use beaches::validation::{run_suite, Suite};
use beaches::{beaches_denoise, Variant};

/// SURE-tuned beamspace denoising of massive-MIMO channel vectors.
#[derive(Debug, Parser)]
#[command(name = "beaches", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Denoise one antenna-domain vector given as `re,im` rows.
    Denoise(DenoiseArgs),
    /// Run a link-level Monte-Carlo sweep from a JSON config.
    Sweep(SweepArgs),
    /// Run a property suite with fixed seeds.
    Validate(ValidateArgs),
    /// Time the denoiser over a list of array sizes.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct DenoiseArgs {
    input: PathBuf,
    /// Per-entry noise variance.
    #[arg(long)]
    e0: f64,
    #[arg(long, default_value = "exact")]
    variant: Variant,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the config's seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    /// One of sure, scan, fft, fixedpoint, linksim, or `all`.
    suite: String,
    #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Comma-separated powers of two.
    #[arg(long, value_delimiter = ',', default_values_t = [256usize, 512, 1024, 2048, 4096, 8192])]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = MIN_REPS)]
    reps: usize,
    #[arg(long, default_value = "exact")]
    variant: Variant,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => io::stdout().lock().write_all(text.as_bytes()).context("writing stdout"),
    }
}

fn with_threads<R: Send>(threads: Option<u16>, f: impl FnOnce() -> R + Send) -> Result<R> {
    match threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n as usize).build()?;
            Ok(pool.install(f))
        }
        None => Ok(f()),
    }
}

fn cmd_denoise(args: &DenoiseArgs) -> Result<()> {
    let text = fs::read_to_string(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let y = parse_complex_csv(&text).with_context(|| format!("parsing {}", args.input.display()))?;
    let r = beaches_denoise(&y, args.e0, args.variant)?;
    let mut out = format_complex_csv(&r.h_star);
    out += &format!("tau_star={:?},sure_min={:?}\n", r.tau_star, r.sure_min);
    write_output(args.out.as_deref(), &out)
}

fn cmd_sweep(args: &SweepArgs) -> Result<()> {
    let text = fs::read_to_string(&args.config).with_context(|| format!("reading {}", args.config.display()))?;
    let mut cfg = LinkConfig::from_json(&text).with_context(|| format!("loading {}", args.config.display()))?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let points = with_threads(args.threads, || run_link_sweep(&cfg))??;
    write_output(args.out.as_deref(), &sweep_csv(&points, cfg.seed))
}

/// Returns whether every property passed.
fn cmd_validate(args: &ValidateArgs) -> Result<bool> {
    let suites = match args.suite.as_str() {
        "all" => Suite::ALL.to_vec(),
        name => vec![name.parse::<Suite>()?],
    };
    with_threads(args.threads, || {
        let mut ok = true;
        for suite in suites {
            let report = run_suite(suite);
            println!("{report}");
            ok &= report.passed();
        }
        ok
    })
}

fn cmd_bench(args: &BenchArgs) -> Result<()> {
    if args.sizes.is_empty() {
        bail!("no sizes given");
    }
    let points = bench_denoise(&args.sizes, args.reps, args.variant)?;
    write_output(args.out.as_deref(), &bench_csv(&points))?;
    if points.len() >= 2 {
        let fit = fit_b_log_b(&points)?;
        eprintln!("fit t = a·B·log2(B): a = {:.3} ns, R² = {:.4}", fit.a, fit.r_squared);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Denoise(a) => cmd_denoise(a).map(|()| true),
        Command::Sweep(a) => cmd_sweep(a).map(|()| true),
        Command::Validate(a) => cmd_validate(a),
        Command::Bench(a) => cmd_bench(a).map(|()| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
