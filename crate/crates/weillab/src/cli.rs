//! Argument parsing and command dispatch.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map};

use weillab_core::geometry::VarietySpec;
use weillab_core::positivity::{LocalFactor, DEFAULT_ORDER};
use weillab_core::DEFAULT_BUDGET;

use crate::error::{Error, Result};
use crate::json::{PositivityFile, VarietyFile};
use crate::pipeline::{self, PositivityOptions, RunConfig};
use crate::report::{Report, Verdict};
use crate::suite;

#[derive(Debug, Parser)]
#[command(name = "weillab", version, about = "Zeta functions over finite fields by point counting, with exact checks of their predicted structure")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Largest number of tuples enumerated for a single extension degree.
    #[arg(long, global = true, env = "WEILLAB_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,

    /// Worker threads for enumeration. Results never depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Print a flat table on standard output instead of the JSON report.
    #[arg(long, global = true, value_enum)]
    pub emit_table: Option<TableFormat>,

    /// Include wall-clock timings in the report (makes it nondeterministic).
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Tsv,
}

#[derive(Debug, Args)]
pub struct Fit {
    /// Largest extension degree m counted or summed.
    #[arg(long)]
    pub max_m: Option<u32>,

    /// Terms held out to validate the reconstruction.
    #[arg(long, default_value_t = weillab_core::DEFAULT_HOLDOUT)]
    pub holdout: usize,

    /// Relative tolerance for every floating-point comparison.
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Point counts N_1 .. N_max_m.
    Count {
        spec: PathBuf,
        #[arg(long)]
        max_m: Option<u32>,
    },
    /// Exact zeta function, plus the full battery of checks when the
    /// dimension is known.
    Zeta {
        spec: PathBuf,
        #[command(flatten)]
        fit: Fit,
        /// Dimension of the variety; overrides the file's `dim`.
        #[arg(long)]
        dim: Option<u32>,
    },
    /// Additive character sums of a polynomial and their L-function.
    Expsum {
        poly: PathBuf,
        #[command(flatten)]
        fit: Fit,
    },
    /// Coefficient positivity of tensor-power local factors.
    Positivity {
        /// Factor file; omit with --random.
        file: Option<PathBuf>,
        /// Generate this many random factors instead of reading a file.
        #[arg(long, conflicts_with = "file")]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        max_k: u32,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
    },
    /// Coefficients of the discriminant form and the Ramanujan bound.
    Tau {
        #[arg(long, default_value_t = 10_000)]
        max_n: usize,
        #[arg(long, default_value_t = 97)]
        check_primes_up_to: u64,
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// The built-in suite; hypothesis controls are expected to fail.
    VerifyAll,
}

impl Cli {
    fn config(&self) -> RunConfig {
        RunConfig {
            budget: self.budget,
            threads: self.threads.unwrap_or_else(default_threads).max(1),
            timings: self.timings,
            ..RunConfig::default()
        }
    }
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, usize::from)
}

fn load_spec(path: &Path) -> Result<VarietySpec> {
    VarietyFile::load(path)?.to_spec()
}

fn source(path: &Path) -> String {
    path.display().to_string()
}

/// Runs the parsed command and returns its report.
pub fn execute(cli: &Cli) -> Result<Report> {
    let base_cfg = cli.config();
    let report = match &cli.command {
        Command::Count { spec, max_m } => {
            let cfg = RunConfig { max_m: *max_m, ..base_cfg };
            cfg.validate()?;
            pipeline::count_report(&load_spec(spec)?, &source(spec), &cfg)
        }
        Command::Zeta { spec, fit, dim } => {
            let cfg = RunConfig { max_m: fit.max_m, holdout: fit.holdout, tolerance: fit.tolerance, dim: *dim, ..base_cfg };
            cfg.validate()?;
            pipeline::zeta_report(&load_spec(spec)?, &source(spec), &cfg)
        }
        Command::Expsum { poly, fit } => {
            let cfg = RunConfig { max_m: fit.max_m, holdout: fit.holdout, tolerance: fit.tolerance, ..base_cfg };
            cfg.validate()?;
            pipeline::expsum_report(&load_spec(poly)?, &source(poly), &cfg)?
        }
        Command::Positivity { file, random, seed, max_k, order } => {
            if *max_k == 0 || *order == 0 {
                return Err(Error::input("--max-k and --order must be at least 1"));
            }
            let opts = PositivityOptions { max_k: *max_k, order: *order, include_series: random.is_none() };
            let mut config = Map::new();
            config.insert("max_k".into(), json!(max_k));
            config.insert("order".into(), json!(order));
            let factors = match (file, random) {
                (Some(path), None) => {
                    config.insert("source".into(), json!(source(path)));
                    let pf = PositivityFile::load(path)?;
                    let base = weillab_core::PrimePower::new(pf.p, pf.a)?;
                    pf.factor_polys()?
                        .into_iter()
                        .map(|(poly, deg)| Ok(LocalFactor::new(poly, base.extend(deg), deg)?))
                        .collect::<Result<Vec<_>>>()?
                }
                (None, Some(n)) => {
                    config.insert("random".into(), json!(n));
                    config.insert("seed".into(), json!(seed));
                    let base = weillab_core::PrimePower::new(5, 1)?;
                    pipeline::random_factors(*n, *seed, base)
                }
                _ => return Err(Error::input("give a factor file or --random N")),
            };
            pipeline::positivity_report(&factors, &opts, config)
        }
        Command::Tau { max_n, check_primes_up_to, tolerance } => {
            pipeline::tau_report(*max_n, *check_primes_up_to, *tolerance)?
        }
        Command::VerifyAll => {
            base_cfg.validate()?;
            let cases = suite::run_all(&base_cfg);
            suite::summary(&cases, base_cfg.echo(None))
        }
    };
    Ok(report)
}

/// Parses `args`, runs, writes output and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { Verdict::Error.exit_code() } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return Verdict::Error.exit_code();
        }
    };
    for e in &report.errors {
        let _ = writeln!(stderr, "error: {e}");
    }
    if let Some(path) = &cli.out {
        if let Err(source) = std::fs::write(path, report.to_json()) {
            let _ = writeln!(stderr, "error: {}", Error::Write { path: path.clone(), source });
            return Verdict::Error.exit_code();
        }
    }
    let written = match (cli.emit_table, &cli.out) {
        (Some(TableFormat::Tsv), _) => stdout.write_all(report.table.to_tsv().as_bytes()),
        (None, None) => stdout.write_all(report.to_json().as_bytes()),
        (None, Some(_)) => Ok(()),
    };
    if written.is_err() {
        return Verdict::Error.exit_code();
    }
    let failed = report.failed_checks();
    if !failed.is_empty() {
        let _ = writeln!(stderr, "failed checks: {}", failed.join(", "));
    }
    report.verdict.exit_code()
}
