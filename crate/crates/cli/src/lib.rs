//! The `tiling` command-line tool: reads problem files, runs the deciders
//! and checkers of `tiling-core`, and prints JSON verdicts.
//!
//! Exit codes: 0 YES (or a completed report), 1 NO, 2 UNKNOWN or budget
//! exhausted, 3 input error, 4 capacity exceeded.

mod commands;
mod json;
pub mod problem;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use problem::{parse_problem, ProblemFile};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_CAPACITY: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("JSON syntax error at line {line}, column {column}: {msg}")]
    Json {
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("schema error at {path}: {msg}")]
    Schema { path: String, msg: String },
    #[error("{path}: {msg}")]
    Io { path: PathBuf, msg: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] tiling_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use tiling_core::Error as E;
        match self {
            Self::Core(E::CapacityExceeded { .. }) => EXIT_CAPACITY,
            Self::Core(E::BudgetExceeded { .. }) => EXIT_UNKNOWN,
            _ => EXIT_INPUT,
        }
    }

    fn kind(&self) -> &'static str {
        match self.exit_code() {
            EXIT_CAPACITY => "capacity",
            EXIT_UNKNOWN => "budget",
            _ => "input",
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "tiling",
    version,
    about = "Decision procedures for tiling equations f * a = g"
)]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub(crate) struct GlobalOpts {
    /// Node budget for the multi-tiling search (overrides the problem file).
    #[arg(long, global = true)]
    budget_nodes: Option<u64>,
    /// Largest torus size tried by the multi-tiling search.
    #[arg(long, global = true)]
    max_q: Option<u64>,
    /// Largest box radius tried by the multi-tiling search.
    #[arg(long, global = true)]
    max_box: Option<u64>,
    /// Largest accepted l1 norm of f for the annihilator deciders.
    #[arg(long, global = true)]
    cap_n: Option<u64>,
    /// Size of the largest vanishing-sum enumeration the deciders may do.
    #[arg(long, global = true)]
    omega_cap: Option<usize>,
    /// Print an ASCII picture of a multi-tiling certificate to stderr.
    #[arg(long, global = true)]
    render: bool,
    /// Also write the JSON verdict to this file.
    #[arg(long, global = true, value_name = "PATH")]
    json_out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Is there a non-zero bounded integer a with f * a = 0?
    DecideZero { problem: PathBuf },
    /// Is there a non-constant bounded integer a with f * a = k for some integer k?
    DecideLevelshift { problem: PathBuf },
    /// Is there A in Z^2 with f * 1_A = g?
    DecideMultitile { problem: PathBuf },
    /// Re-check a verdict previously written by this tool.
    Verify {
        problem: PathBuf,
        certificate: PathBuf,
    },
    /// List the canonical minimal vanishing sums of k roots of unity.
    Omega {
        #[arg(long)]
        k: usize,
    },
    /// Test (tau_r f) * a = g for dilation factors r = 1 mod q.
    DilateCheck {
        problem: PathBuf,
        #[arg(long)]
        q: Option<u64>,
        /// Comma-separated dilation factors; defaults to 1+q, 1+2q, 1+3q.
        #[arg(long, value_delimiter = ',')]
        r: Vec<u64>,
        /// Number of ladder entries tried when --q is absent.
        #[arg(long, default_value_t = 4)]
        ladder_len: usize,
    },
    /// Split f along a primitive direction w and convolve each slice with the problem's a.
    Slice {
        problem: PathBuf,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_pair)]
        w: [i64; 2],
        /// Report only the slice through this point.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_pair)]
        x: Option<[i64; 2]>,
        #[arg(long)]
        q: Option<u64>,
    },
}

fn parse_pair(s: &str) -> Result<[i64; 2], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => {
            let a = a.parse().map_err(|_| format!("{a:?} is not an integer"))?;
            let b = b.parse().map_err(|_| format!("{b:?} is not an integer"))?;
            Ok([a, b])
        }
        _ => Err(format!("expected two comma-separated integers, got {s:?}")),
    }
}

/// The verdict of a subcommand before it is written out.
#[derive(Debug)]
pub(crate) struct Outcome {
    pub answer: Answer,
    pub certificate: serde_json::Value,
    pub budget: serde_json::Value,
    pub extra: Vec<(&'static str, serde_json::Value)>,
    pub render: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Answer {
    Yes,
    No,
    Unknown,
    /// A report with no yes/no content.
    Ok,
}

impl Answer {
    fn as_str(self) -> &'static str {
        match self {
            Self::Yes => "YES",
            Self::No => "NO",
            Self::Unknown => "UNKNOWN",
            Self::Ok => "OK",
        }
    }

    fn exit_code(self) -> i32 {
        match self {
            Self::Yes | Self::Ok => EXIT_YES,
            Self::No => EXIT_NO,
            Self::Unknown => EXIT_UNKNOWN,
        }
    }
}

/// Runs the tool on `args` (including the program name) with the process's
/// standard streams and returns the exit code.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with_output(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with_output<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_YES };
        }
    };
    let name = command_name(&cli.command);
    let start = std::time::Instant::now();
    let result = dispatch(&cli);
    let timing_ms = start.elapsed().as_millis() as u64;

    let (doc, code, render) = match result {
        Ok(o) => {
            let mut doc = serde_json::Map::new();
            doc.insert("command".into(), name.into());
            doc.insert("answer".into(), o.answer.as_str().into());
            doc.insert("certificate".into(), o.certificate);
            doc.insert("budget".into(), o.budget);
            for (k, v) in o.extra {
                doc.insert(k.into(), v);
            }
            doc.insert("timing_ms".into(), timing_ms.into());
            (doc, o.answer.exit_code(), o.render)
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            let mut doc = serde_json::Map::new();
            doc.insert("command".into(), name.into());
            doc.insert(
                "error".into(),
                serde_json::json!({"kind": e.kind(), "message": e.to_string()}),
            );
            doc.insert("timing_ms".into(), timing_ms.into());
            (doc, e.exit_code(), None)
        }
    };

    let text = serde_json::to_string_pretty(&serde_json::Value::Object(doc))
        .expect("JSON values serialize");
    if let Some(path) = &cli.opts.json_out {
        if let Err(e) = std::fs::write(path, format!("{text}\n")) {
            let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
            return EXIT_INPUT;
        }
    }
    let _ = writeln!(out, "{text}");
    if let (true, Some(picture)) = (cli.opts.render, render) {
        let _ = write!(err, "{picture}");
    }
    code
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::DecideZero { .. } => "decide-zero",
        Command::DecideLevelshift { .. } => "decide-levelshift",
        Command::DecideMultitile { .. } => "decide-multitile",
        Command::Verify { .. } => "verify",
        Command::Omega { .. } => "omega",
        Command::DilateCheck { .. } => "dilate-check",
        Command::Slice { .. } => "slice",
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    let opts = &cli.opts;
    match &cli.command {
        Command::DecideZero { problem } => commands::decide_zero(&load(problem)?, opts),
        Command::DecideLevelshift { problem } => commands::decide_levelshift(&load(problem)?, opts),
        Command::DecideMultitile { problem } => commands::decide_multitile(&load(problem)?, opts),
        Command::Verify {
            problem,
            certificate,
        } => {
            let p = load(problem)?;
            let cert = problem::parse_json(&read(certificate)?)?;
            commands::verify(&p, &cert, opts)
        }
        Command::Omega { k } => commands::omega(*k, opts),
        Command::DilateCheck {
            problem,
            q,
            r,
            ladder_len,
        } => commands::dilate_check(&load(problem)?, *q, r, *ladder_len),
        Command::Slice { problem, w, x, q } => commands::slice(&load(problem)?, *w, *x, *q),
    }
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.clone(),
        msg: e.to_string(),
    })
}

fn load(path: &PathBuf) -> Result<ProblemFile, CliError> {
    parse_problem(&read(path)?)
}
