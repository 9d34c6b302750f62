//! The `qwitt` command line: calculators, presentation dumps, cohomology tables,
//! verification suites and golden-file management.

mod calc;
mod config;
mod golden;
mod runner;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use config::SuiteConfig;
pub use golden::{compute_all as compute_golden, update as update_golden, GoldenEntry, GoldenFile, GoldenOutcome};
pub use runner::{defaults, expand_suites, run_suites, Defaults, RunOptions, ALL_SUITES};

/// Exit codes: 0 success, 1 a check failed, 2 usage error, 3 inexact division (a bug signal).
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("inexact division: {0}")]
    Inexact(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Inexact(_) => 3,
            CliError::Io(_) | CliError::Failed(_) => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Json,
    Csv,
    Text,
}

#[derive(Parser, Debug)]
#[command(name = "qwitt", version, about = "Exact Witt, q-Witt and q-Hodge computations")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Random seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Random trials per case.
    #[arg(long, global = true)]
    trials: Option<usize>,
    #[arg(long, global = true, value_enum)]
    emit: Option<Emit>,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// JSON file with suite configuration; flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Record per-case runtimes (makes reports non-reproducible).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Arithmetic in W_m(R).
    Wittcalc(calc::WittcalcArgs),
    /// q-Witt vectors: presentations and the comparison map.
    Qwitt {
        #[command(subcommand)]
        command: calc::QwittCommand,
    },
    /// q-Hodge cohomology tables.
    Qhodge {
        #[command(subcommand)]
        command: calc::QhodgeCommand,
    },
    /// Verification suites on the cohomological model.
    Qdrw {
        #[command(subcommand)]
        command: QdrwCommand,
    },
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Recompute and compare the golden values.
    Golden(GoldenArgs),
}

#[derive(Subcommand, Debug)]
enum QdrwCommand {
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Default)]
struct VerifyArgs {
    /// Suite names (comma separated), or `all`.
    #[arg(long, value_delimiter = ',')]
    suite: Vec<String>,
    /// Truncation levels (comma separated).
    #[arg(long, value_delimiter = ',')]
    m: Option<Vec<u64>>,
    /// Coefficient ring; repeat for several.
    #[arg(long)]
    ring: Option<Vec<String>>,
    /// Numbers of polynomial variables (comma separated).
    #[arg(long, value_delimiter = ',')]
    vars: Option<Vec<usize>>,
    /// Bound on each exponent of a multidegree.
    #[arg(long)]
    maxdeg: Option<u32>,
    /// (q-1)-adic precision.
    #[arg(long)]
    prec_q: Option<u32>,
    /// p-adic precision.
    #[arg(long)]
    prec_p: Option<u32>,
}

#[derive(Args, Debug)]
struct GoldenArgs {
    #[arg(long, default_value = "golden/values.json")]
    path: PathBuf,
    /// Overwrite the file even if values changed.
    #[arg(long)]
    force: bool,
    /// Compare only; never write.
    #[arg(long)]
    check: bool,
}

/// Where command output goes.
pub(crate) struct Sink {
    out: Option<PathBuf>,
}

impl Sink {
    pub(crate) fn write(&self, text: &str) -> Result<(), CliError> {
        match &self.out {
            Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))
            }
        }
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    let jobs = cli.common.jobs;
    if jobs == Some(0) {
        return Err(CliError::Usage("--jobs must be positive".into()));
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        builder = builder.num_threads(j);
    }
    let pool = builder.build().map_err(|e| CliError::Io(e.to_string()))?;
    pool.install(|| execute(cli))
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    let common = cli.common;
    let sink = Sink { out: common.out.clone() };
    match cli.command {
        Command::Wittcalc(a) => calc::wittcalc(&a, common.emit.unwrap_or(Emit::Text), &sink),
        Command::Qwitt { command } => calc::qwitt(&command, common.emit.unwrap_or(Emit::Json), &sink),
        Command::Qhodge { command } => calc::qhodge(&command, common.emit.unwrap_or(Emit::Json), &sink),
        Command::Qdrw { command: QdrwCommand::Verify(a) } => {
            if let Some(bad) = a.suite.iter().find(|s| !crate::qdrwmodel::SUITES.contains(&s.as_str())) {
                return Err(CliError::Usage(format!("unknown qdrw suite {bad:?}")));
            }
            verify(a, &common, &sink)
        }
        Command::Verify(a) => verify(a, &common, &sink),
        Command::Golden(a) => golden(&a),
    }
}

fn verify(a: VerifyArgs, common: &Common, sink: &Sink) -> Result<i32, CliError> {
    let flags = SuiteConfig {
        suites: a.suite,
        ms: a.m,
        rings: a.ring,
        vars: a.vars,
        maxdeg: a.maxdeg,
        prec_q: a.prec_q,
        prec_p: a.prec_p,
        seed: common.seed.unwrap_or(1),
        trials: common.trials,
    };
    let cfg = match &common.config {
        Some(p) => SuiteConfig::load(p)?.overridden_by(flags, common.seed.is_some()),
        None => flags,
    };
    let opts = RunOptions { timings: common.timings, progress: common.out.is_some() };
    let report = run_suites(&cfg, opts)?;
    let text = match common.emit.unwrap_or(Emit::Json) {
        Emit::Json => report.to_json(),
        Emit::Csv => report.to_csv().map_err(|e| CliError::Io(e.to_string()))?,
        Emit::Text => report.to_text(),
    };
    sink.write(&text)?;
    Ok(if report.has_failures() { 1 } else { 0 })
}

fn golden(a: &GoldenArgs) -> Result<i32, CliError> {
    let o = update_golden(&a.path, a.force, a.check)?;
    for d in &o.diffs {
        println!("{d}");
    }
    for f in &o.oracle_failures {
        eprintln!("oracle disagreement: {f}");
    }
    if o.created && o.written {
        println!("created {}", a.path.display());
    } else if o.diffs.is_empty() {
        println!("no changes");
    } else if o.written {
        println!("updated {}", a.path.display());
    } else if o.oracle_failures.is_empty() {
        eprintln!("golden values changed; refusing to overwrite without --force");
    }
    Ok(if o.rejected() { 1 } else { 0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
        assert_eq!(CliError::Inexact("x".into()).exit_code(), 3);
        assert_eq!(CliError::Failed("x".into()).exit_code(), 1);
        assert_eq!(CliError::Io("x".into()).exit_code(), 1);
        assert_eq!(run(["qwitt", "--help"].map(std::ffi::OsString::from)), 0);
        assert_eq!(run(["qwitt", "verify", "--suite", "nope"].map(std::ffi::OsString::from)), 2);
    }
}
