//! `dp3`: drives the coefficient cache, the verification suites, the
//! monodromy computations and the numeric integrator.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use dp3_core::par::ExecMode;

#[derive(Parser, Debug)]
#[command(name = "dp3", version, about = "Vanishing solutions of degenerate Painleve III with a = +-i/2")]
struct Cli {
    /// Coefficient cache file [default: $DP3_CACHE_DIR/coeffs.dp3, else ./dp3-cache/coeffs.dp3]
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Worker threads; 1 runs everything sequentially
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Extend the coefficient cache to --max-m, printing per-step timings
    Coeffs {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        max_m: u64,
    },
    /// Print cached coefficients c_m as polynomials in c1
    Dump {
        /// Last index to print [default: all cached]
        #[arg(long)]
        max_m: Option<usize>,
        /// First index to print
        #[arg(long, default_value_t = 0)]
        from: usize,
    },
    /// Run parity, degree, column and fence suites over the cached range
    Verify {
        /// Restrict to c_0..c_max_m [default: all cached]
        #[arg(long)]
        max_m: Option<usize>,
        /// Extend the cache to 800 and check the fence at m = 793..800
        #[arg(long)]
        stretch: bool,
    },
    /// Generating functions: closed forms, series, hierarchy residuals, columns
    Genfun {
        /// Index n of A_n to print
        #[arg(long, default_value_t = 0)]
        n: usize,
        /// Series truncation order
        #[arg(long, default_value_t = 20)]
        order: usize,
        /// Compare column 0 or 1 of the cached coefficients instead; CSV to --out or stdout
        #[arg(long)]
        column: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the 2-adic content of c_m with the fence formulas; JSON report
    Fence {
        #[arg(long, default_value_t = 2)]
        from: usize,
        /// Last index [default: all cached]
        #[arg(long)]
        max_m: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monodromy data for a parameter c1~; JSON to --out or stdout
    Monodromy {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        c1: Complex64,
        #[arg(long, value_parser = parse_sign, allow_hyphen_values = true, default_value = "+1")]
        kappa: i8,
        #[arg(long, default_value_t = 0.5)]
        eps_b: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Roots of the rho-equations; CSV to --out or stdout
    Roots {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        which: u8,
        /// Search only the strip 0 < Re rho < 1/2
        #[arg(long)]
        strip: bool,
        /// Seeds per side of the search grid
        #[arg(long, default_value_t = 40)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate the equation from series-seeded data; CSV to --out or stdout
    Solve {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        opts: SolveArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate several c1~ values in parallel into --out (a directory) with a JSON manifest
    Batch {
        /// Repeat for every parameter value
        #[arg(long = "c1", value_parser = parse_complex, allow_hyphen_values = true, required = true)]
        c1s: Vec<Complex64>,
        #[arg(long, value_parser = parse_sign, allow_hyphen_values = true, default_value = "+1")]
        kappa: i8,
        #[arg(long, value_parser = parse_sign, allow_hyphen_values = true)]
        eps: Option<i8>,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<f64>,
        #[arg(long)]
        eps_b: Option<f64>,
        #[command(flatten)]
        opts: SolveArgs,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct ParamArgs {
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0,0")]
    pub c1: Complex64,
    #[arg(long, value_parser = parse_sign, allow_hyphen_values = true, default_value = "+1")]
    pub kappa: i8,
    /// Sign eps [default: +1, or the sign of --b]
    #[arg(long, value_parser = parse_sign, allow_hyphen_values = true)]
    pub eps: Option<i8>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    /// Product eps*b (> 0), alternative to --b [default: 0.5]
    #[arg(long)]
    pub eps_b: Option<f64>,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[arg(long, default_value_t = 1e-3)]
    pub tau0: f64,
    #[arg(long, default_value_t = 10.0)]
    pub tau_end: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Series order used for seeding
    #[arg(long, default_value_t = 40)]
    pub order: usize,
    /// Output spacing in tau
    #[arg(long, default_value_t = 0.01)]
    pub step: f64,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let (re, im) = s.split_once(',').ok_or_else(|| format!("expected RE,IM, got {s:?}"))?;
    let f = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    Ok(Complex64::new(f(re)?, f(im)?))
}

fn parse_sign(s: &str) -> Result<i8, String> {
    match s.trim() {
        "+1" | "1" | "+" => Ok(1),
        "-1" | "-" => Ok(-1),
        other => Err(format!("expected +1 or -1, got {other:?}")),
    }
}

/// Mathematical failures exit with 1, operational ones with 2.
#[derive(Debug)]
pub enum Outcome {
    Pass,
    Mismatch,
}

fn default_cache() -> PathBuf {
    let dir = std::env::var_os("DP3_CACHE_DIR").map(PathBuf::from).unwrap_or_else(|| PathBuf::from("dp3-cache"));
    dir.join("coeffs.dp3")
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    let mode = if cli.threads == Some(1) { ExecMode::Sequential } else { ExecMode::Parallel };
    let ctx = commands::Context { cache: cli.cache.unwrap_or_else(default_cache), mode };
    #[cfg(feature = "parallel")]
    if let Some(n) = cli.threads.filter(|n| *n > 1) {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build()?;
        return pool.install(|| commands::dispatch(&ctx, cli.cmd));
    }
    #[cfg(not(feature = "parallel"))]
    if cli.threads.is_some_and(|n| n > 1) {
        log::warn!("built without the parallel feature; --threads is ignored");
    }
    commands::dispatch(&ctx, cli.cmd)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Mismatch) => ExitCode::from(1),
        Err(e) => {
            let broken_pipe = |c: &(dyn std::error::Error + 'static)| {
                c.downcast_ref::<std::io::Error>().map(|io| io.kind())
                    .or_else(|| c.downcast_ref::<serde_json::Error>().and_then(|j| j.io_error_kind()))
                    == Some(std::io::ErrorKind::BrokenPipe)
            };
            if e.chain().any(broken_pipe) {
                return ExitCode::SUCCESS;
            }
            if let Some(commands::MathFailure(msg)) = e.downcast_ref() {
                eprintln!("FAIL: {msg}");
                return ExitCode::from(1);
            }
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
