//! Batch front end: graph files in, JSON reports out.
//!
//! Reports go to stdout (or `--out`) as pretty JSON and a one-line summary
//! goes to stderr. The process exit code classifies the outcome:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | every check passed |
//! | 1 | a check failed |
//! | 2 | bad input: unreadable file, malformed graph, bad flags |
//! | 3 | the graph is not sufficiently subdivided for `(k, n)` |
//! | 4 | the cell budget was exceeded |
//!
//! Nothing here is random, so equal inputs give byte-identical reports.

mod pipeline;
mod stabilize;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use crate::complex::{ComplexError, DEFAULT_CELL_BUDGET};
use crate::graph::{check_sufficiently_subdivided, Graph, GraphError, SubdivReport};
use crate::homology::{Coefficients, HomologyError};
use crate::morse::MorseError;
use crate::subdivision::SubdivisionError;

pub use pipeline::{cmd_pipeline, BettiComparison, PipelineReport};
pub use stabilize::{barycentric, cmd_stabilize, StabilizeReport, StabilizeRow};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INSUFFICIENT: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "NKCONFIG_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("graph is not ({k},{n})-sufficiently subdivided")]
    Insufficient { k: usize, n: usize, report: SubdivReport },
    #[error("cell budget of {budget} cells exceeded")]
    Budget { budget: usize },
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Insufficient { .. } => EXIT_INSUFFICIENT,
            CliError::Budget { .. } => EXIT_BUDGET,
            CliError::Internal(_) => EXIT_FAILED,
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<ComplexError> for CliError {
    fn from(e: ComplexError) -> Self {
        match e {
            ComplexError::BudgetExceeded { budget } => CliError::Budget { budget },
            ComplexError::InvalidParameters { .. } => CliError::Parse(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<SubdivisionError> for CliError {
    fn from(e: SubdivisionError) -> Self {
        match e {
            SubdivisionError::StaleLabel(_) | SubdivisionError::LabelCollision(_) => CliError::Parse(e.to_string()),
            SubdivisionError::Graph(g) => g.into(),
            SubdivisionError::Complex(c) => c.into(),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<HomologyError> for CliError {
    fn from(e: HomologyError) -> Self {
        match e {
            HomologyError::Complex(c) => c.into(),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<MorseError> for CliError {
    fn from(e: MorseError) -> Self {
        match e {
            MorseError::Insufficient { k, n, report } => CliError::Insufficient { k, n, report },
            MorseError::Complex(c) => c.into(),
            MorseError::Subdivision(s) => s.into(),
            MorseError::Graph(g) => g.into(),
            other => CliError::Internal(other.to_string()),
        }
    }
}

/// Everything a command needs. Invariants: `2 <= k <= n`, `budget > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub input: PathBuf,
    pub k: usize,
    pub n: usize,
    pub edge: Option<String>,
    pub field: Coefficients,
    pub budget: usize,
    pub levels: usize,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(input: impl Into<PathBuf>, k: usize, n: usize) -> Self {
        RunConfig {
            input: input.into(),
            k,
            n,
            edge: None,
            field: Coefficients::Rational,
            budget: DEFAULT_CELL_BUDGET,
            levels: 2,
            out: None,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.k < 2 || self.k > self.n {
            return Err(CliError::Parse(format!(
                "need 2 <= k <= n, got k={}, n={}",
                self.k, self.n
            )));
        }
        if self.budget == 0 {
            return Err(CliError::Parse("budget must be positive".into()));
        }
        Ok(())
    }

    pub fn load_graph(&self) -> Result<Graph, CliError> {
        let text = fs::read_to_string(&self.input)
            .map_err(|e| CliError::Parse(format!("{}: {e}", self.input.display())))?;
        let g = Graph::from_json(&text)?;
        g.ensure_connected()?;
        Ok(g)
    }
}

/// What a command produced: the JSON report, a human summary and the exit
/// code. Failed checks still carry a full report.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: serde_json::Value,
    pub summary: String,
    pub code: i32,
    /// Extra files to write next to the report: `(path, contents)`.
    pub attachments: Vec<(PathBuf, Vec<u8>)>,
}

impl Outcome {
    fn new(report: &impl Serialize, summary: String, ok: bool) -> Self {
        Outcome {
            report: serde_json::to_value(report).expect("reports serialize"),
            summary,
            code: if ok { EXIT_OK } else { EXIT_FAILED },
            attachments: Vec::new(),
        }
    }

    fn from_error(e: &CliError) -> Self {
        let report = match e {
            CliError::Insufficient { k, n, report } => serde_json::json!({
                "error": e.to_string(), "k": k, "n": n, "sufficiency": report,
            }),
            _ => serde_json::json!({ "error": e.to_string() }),
        };
        Outcome {
            report,
            summary: format!("error: {e}"),
            code: e.exit_code(),
            attachments: Vec::new(),
        }
    }
}

/// Checks the sufficiency conditions on the input graph.
pub fn cmd_check_subdiv(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    let g = cfg.load_graph()?;
    let report = check_sufficiently_subdivided(&g, cfg.k, cfg.n)?;
    let summary = if report.ok {
        format!("({},{})-sufficiently subdivided", cfg.k, cfg.n)
    } else {
        format!(
            "not ({},{})-sufficiently subdivided: {} violation(s)",
            cfg.k,
            cfg.n,
            report.violations.len()
        )
    };
    Ok(Outcome::new(&report, summary, report.ok))
}

/// Reads `NKCONFIG_THREADS` and sizes the global worker pool. Unset means
/// one worker per core.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Parse(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    // a pool built earlier in the process stays in place
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

#[derive(Debug, Parser)]
#[command(name = "nkconfig", version, about = "Discrete no-k-equal configuration spaces on graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a graph is sufficiently subdivided for (k, n).
    CheckSubdiv(CommonArgs),
    /// Subdivide one edge, build the matching and run every verifier.
    Pipeline {
        #[command(flatten)]
        common: CommonArgs,
        /// Edge to subdivide; defaults to the least edge label.
        #[arg(long)]
        edge: Option<String>,
        #[arg(long, default_value = "q")]
        field: Coefficients,
    },
    /// Betti numbers over iterated barycentric subdivisions B_0..B_levels.
    Stabilize {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 2)]
        levels: usize,
        #[arg(long, default_value = "q")]
        field: Coefficients,
    },
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Graph JSON: {"vertices": [...], "edges": [{"id", "ends": [u, v]}]}.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub n: usize,
    /// Abort once a complex would exceed this many cells.
    #[arg(long, default_value_t = DEFAULT_CELL_BUDGET)]
    pub budget: usize,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn config_of(common: CommonArgs) -> RunConfig {
    RunConfig {
        budget: common.budget,
        out: common.out,
        ..RunConfig::new(common.input, common.k, common.n)
    }
}

fn write_outcome(o: &Outcome, out: Option<&PathBuf>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let mut text = serde_json::to_string_pretty(&o.report).expect("reports serialize");
    text.push('\n');
    let written = match out {
        Some(p) => fs::write(p, &text).and_then(|_| {
            o.attachments
                .iter()
                .try_for_each(|(path, bytes)| fs::write(path, bytes))
        }),
        None => stdout.write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: cannot write report: {e}");
        return EXIT_PARSE;
    }
    let _ = writeln!(stderr, "{}", o.summary);
    o.code
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    if let Err(e) = configure_threads() {
        let _ = writeln!(stderr, "error: {e}");
        return e.exit_code();
    }
    let (cfg, result) = match cli.command {
        Command::CheckSubdiv(common) => {
            let cfg = config_of(common);
            let r = cmd_check_subdiv(&cfg);
            (cfg, r)
        }
        Command::Pipeline { common, edge, field } => {
            let cfg = RunConfig {
                edge,
                field,
                ..config_of(common)
            };
            let r = cmd_pipeline(&cfg);
            (cfg, r)
        }
        Command::Stabilize { common, levels, field } => {
            let cfg = RunConfig {
                levels,
                field,
                ..config_of(common)
            };
            let r = cmd_stabilize(&cfg);
            (cfg, r)
        }
    };
    let outcome = result.unwrap_or_else(|e| Outcome::from_error(&e));
    write_outcome(&outcome, cfg.out.as_ref(), stdout, stderr)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_invariants() {
        assert!(RunConfig::new("g.json", 2, 2).validate().is_ok());
        assert_eq!(RunConfig::new("g.json", 3, 2).validate().unwrap_err().exit_code(), EXIT_PARSE);
        assert_eq!(RunConfig::new("g.json", 1, 2).validate().unwrap_err().exit_code(), EXIT_PARSE);
        let mut c = RunConfig::new("g.json", 2, 2);
        c.budget = 0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn error_codes() {
        assert_eq!(CliError::from(ComplexError::BudgetExceeded { budget: 3 }).exit_code(), EXIT_BUDGET);
        assert_eq!(CliError::from(GraphError::Disconnected).exit_code(), EXIT_PARSE);
        assert_eq!(
            CliError::from(MorseError::Cyclic("x".into())).exit_code(),
            EXIT_FAILED
        );
    }

    #[test]
    fn bad_flags_exit_2() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(run(["nkconfig", "pipeline", "--k", "2"], &mut o, &mut e), EXIT_PARSE);
        assert_eq!(run(["nkconfig", "--help"], &mut o, &mut e), EXIT_OK);
    }
}
