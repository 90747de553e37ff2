//! Command-line front end.
//!
//! Exit codes: 0 success, 1 correctness violation (`check` only), 2 user or
//! input error, 3 I/O or parse error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::experiments::{self, RangeGrid, SweepKind, SweepSpec};
use crate::format::DiagramDoc;
use crate::model::InfluenceDiagram;
use crate::oracle;
use crate::query::{answer, Query};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Containment slack allowed by `check`.
pub const CHECK_SLACK: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "interval-id", version, about = "Interval inference on lower-bound influence diagrams")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a diagram file and list every violation.
    Validate { file: PathBuf },
    /// Interval marginal or posterior of a target node.
    Query {
        file: PathBuf,
        #[arg(long)]
        target: String,
        /// Observation `NODE=outcome`; repeatable.
        #[arg(long, value_name = "NODE=outcome")]
        evidence: Vec<String>,
        /// Decimal places in the printed table.
        #[arg(long, default_value_t = 4)]
        precision: usize,
    },
    /// Range-degradation sweep written as CSV.
    Sweep {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        out: PathBuf,
        /// Use the loosened conditional table instead of the exact one.
        #[arg(long)]
        bounded: bool,
        /// Comma-separated lower-bound levels for y1.
        #[arg(long, value_name = "LIST")]
        b_levels: Option<String>,
        /// Comma-separated R_y values, used at every level.
        #[arg(long, value_name = "LIST", conflicts_with = "step")]
        ranges: Option<String>,
        /// Step of the per-level R_y grid.
        #[arg(long)]
        step: Option<f64>,
    },
    /// Compare engine intervals with brute-force vertex enumeration.
    Check {
        file: PathBuf,
        #[arg(long)]
        target: String,
        #[arg(long, value_name = "NODE=outcome")]
        evidence: Vec<String>,
        #[arg(long, default_value_t = 4)]
        precision: usize,
        /// Maximum number of vertex assignments to enumerate.
        #[arg(long, default_value_t = oracle::DEFAULT_CAP)]
        cap: u128,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    Reversal,
    Removal,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match cli.command {
        Command::Validate { file } => cmd_validate(&file, out, err),
        Command::Query { file, target, evidence, precision } => {
            cmd_query(&file, &target, &evidence, precision, out, err)
        }
        Command::Sweep { kind, out: path, bounded, b_levels, ranges, step } => {
            cmd_sweep(kind, &path, bounded, b_levels.as_deref(), ranges.as_deref(), step, out, err)
        }
        Command::Check { file, target, evidence, precision, cap } => {
            cmd_check(&file, &target, &evidence, precision, cap, out, err)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) | Error::Parse(_) | Error::Csv(_) => EXIT_IO,
        _ => EXIT_USAGE,
    }
}

fn load_doc(path: &Path, err: &mut dyn Write) -> Result<DiagramDoc, i32> {
    DiagramDoc::load(path).map_err(|e| {
        let _ = writeln!(err, "error: {}: {e}", path.display());
        EXIT_IO
    })
}

fn load(path: &Path, err: &mut dyn Write) -> Result<InfluenceDiagram, i32> {
    let doc = load_doc(path, err)?;
    doc.into_diagram().map_err(|e| {
        let _ = writeln!(err, "error: {}: {e}", path.display());
        exit_code(&e)
    })
}

fn build_query(target: &str, evidence: &[String], err: &mut dyn Write) -> Result<Query, i32> {
    let mut q = Query::marginal(target);
    for e in evidence {
        match Query::parse_evidence(e) {
            Ok((n, o)) => q = q.given(n, o),
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return Err(EXIT_USAGE);
            }
        }
    }
    Ok(q)
}

/// Prints `-0.0000` as `0.0000`.
fn fixed(v: f64, precision: usize) -> String {
    let s = format!("{v:.precision$}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

pub fn cmd_validate(path: &Path, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let doc = match load_doc(path, err) {
        Ok(doc) => doc,
        Err(code) => return code,
    };
    let report = doc.validate();
    if report.is_empty() {
        let _ = writeln!(out, "OK");
        EXIT_OK
    } else {
        for v in &report.violations {
            let _ = writeln!(out, "{v}");
        }
        EXIT_USAGE
    }
}

pub fn cmd_query(
    path: &Path,
    target: &str,
    evidence: &[String],
    precision: usize,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let d = match load(path, err) {
        Ok(d) => d,
        Err(code) => return code,
    };
    let q = match build_query(target, evidence, err) {
        Ok(q) => q,
        Err(code) => return code,
    };
    match answer(&d, &q) {
        Ok(result) => {
            for (o, iv) in result.outcomes.iter().zip(&result.intervals) {
                let _ = writeln!(out, "{o} {} {}", fixed(iv.lo, precision), fixed(iv.hi, precision));
            }
            let _ = writeln!(out, "range {}", fixed(result.range, precision));
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| format!("`{t}` is not a number")))
        .collect()
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_sweep(
    kind: KindArg,
    path: &Path,
    bounded: bool,
    b_levels: Option<&str>,
    ranges: Option<&str>,
    step: Option<f64>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let kind = match kind {
        KindArg::Reversal => SweepKind::Reversal,
        KindArg::Removal => SweepKind::Removal,
    };
    let mut spec = SweepSpec::default_for(kind, bounded);
    if let Some(levels) = b_levels {
        match parse_list(levels) {
            Ok(v) => spec.b_y_grid = v,
            Err(e) => {
                let _ = writeln!(err, "error: --b-levels: {e}");
                return EXIT_USAGE;
            }
        }
    }
    if let Some(r) = ranges {
        match parse_list(r) {
            Ok(v) => spec.range_grid = RangeGrid::Fixed(v),
            Err(e) => {
                let _ = writeln!(err, "error: --ranges: {e}");
                return EXIT_USAGE;
            }
        }
    }
    if let Some(step) = step {
        spec.range_grid = RangeGrid::Stepped { step };
    }
    let output = match experiments::sweep(&spec) {
        Ok(o) => o,
        Err(e) => {
            let msg = match &e {
                Error::InvalidSweep(m) => m.clone(),
                other => other.to_string(),
            };
            let _ = writeln!(err, "{msg}");
            return exit_code(&e);
        }
    };
    for s in &output.skipped {
        let _ = writeln!(err, "skipped b_y={} r_y={}: {}", s.b_y, s.r_y, s.reason);
    }
    if let Err(e) = experiments::write_csv_file(&output.rows, path) {
        let _ = writeln!(err, "error: {}: {e}", path.display());
        return EXIT_IO;
    }
    let _ = writeln!(out, "{} rows", output.rows.len());
    EXIT_OK
}

pub fn cmd_check(
    path: &Path,
    target: &str,
    evidence: &[String],
    precision: usize,
    cap: u128,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let d = match load(path, err) {
        Ok(d) => d,
        Err(code) => return code,
    };
    let q = match build_query(target, evidence, err) {
        Ok(q) => q,
        Err(code) => return code,
    };
    let engine = match answer(&d, &q) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    let reference = match oracle::brute_force_interval_capped(&d, &q, cap) {
        Ok(r) => r,
        Err(Error::Capacity { combinations, cap }) => {
            let _ = writeln!(err, "error: {combinations} vertex combinations exceed the cap of {cap}");
            return EXIT_USAGE;
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    let mut contained = true;
    let _ = writeln!(out, "outcome engine_lo engine_hi oracle_lo oracle_hi slack_lo slack_hi");
    for ((o, e), r) in engine.outcomes.iter().zip(&engine.intervals).zip(&reference) {
        let slack_lo = r.lo - e.lo;
        let slack_hi = e.hi - r.hi;
        contained &= slack_lo >= -CHECK_SLACK && slack_hi >= -CHECK_SLACK;
        let p = precision;
        let _ = writeln!(
            out,
            "{o} {} {} {} {} {} {}",
            fixed(e.lo, p),
            fixed(e.hi, p),
            fixed(r.lo, p),
            fixed(r.hi, p),
            fixed(slack_lo, p),
            fixed(slack_hi, p)
        );
    }
    if contained {
        let _ = writeln!(out, "containment holds");
        EXIT_OK
    } else {
        let _ = writeln!(out, "CONTAINMENT VIOLATED");
        EXIT_VIOLATION
    }
}
