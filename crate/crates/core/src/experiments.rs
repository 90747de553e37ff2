//! Range-degradation sweeps on a binary `Y -> X` diagram.
//!
//! `Y` gets lower bounds `(level, 1 - level - R_y)`, so `R_y` is its range;
//! `X | Y` is either exact or loosened by a fixed slack. A reversal sweep
//! records the range of `Y | x1`; a removal sweep records the range of `X`.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{BoundVector, InfluenceDiagram, LowerBoundTable, OutcomeSpace, EPS_VALIDATE};
use crate::transforms::{remove_node, reverse_arc};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    Reversal,
    Removal,
}

impl SweepKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepKind::Reversal => "reversal",
            SweepKind::Removal => "removal",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConditionalSpec {
    /// `p(x1|y1)` and `p(x1|y2)`.
    Exact { x1_given_y1: f64, x1_given_y2: f64 },
    /// Lower bounds on `(x1, x2)` given `y1` and given `y2`.
    Bounded { given_y1: [f64; 2], given_y2: [f64; 2] },
}

impl ConditionalSpec {
    pub const DEFAULT_EXACT: ConditionalSpec = ConditionalSpec::Exact { x1_given_y1: 0.8, x1_given_y2: 0.3 };

    /// The default exact table with 0.1 removed from every entry.
    pub fn default_bounded() -> Self {
        ConditionalSpec::Bounded { given_y1: [0.7, 0.1], given_y2: [0.2, 0.6] }
    }

    pub fn mode(&self) -> &'static str {
        match self {
            ConditionalSpec::Exact { .. } => "exact",
            ConditionalSpec::Bounded { .. } => "bounded",
        }
    }

    fn rows(&self) -> [[f64; 2]; 2] {
        match *self {
            ConditionalSpec::Exact { x1_given_y1: a, x1_given_y2: b } => [[a, 1.0 - a], [b, 1.0 - b]],
            ConditionalSpec::Bounded { given_y1, given_y2 } => [given_y1, given_y2],
        }
    }

    /// `1 - sum_x min_y b(x|y)`, the slope of the exact removal line.
    pub fn removal_slope(&self) -> f64 {
        let [r1, r2] = self.rows();
        1.0 - (r1[0].min(r2[0]) + r1[1].min(r2[1]))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RangeGrid {
    /// The same `R_y` values at every level.
    Fixed(Vec<f64>),
    /// `0, step, 2 step, ...` up to `1 - 2 level` at each level.
    Stepped { step: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub kind: SweepKind,
    pub b_y_grid: Vec<f64>,
    pub range_grid: RangeGrid,
    pub conditional: ConditionalSpec,
}

impl SweepSpec {
    /// Levels `0, .1, .2, .3, .4`, ranges in steps of `.05`.
    pub fn default_for(kind: SweepKind, bounded: bool) -> Self {
        Self {
            kind,
            b_y_grid: vec![0.0, 0.1, 0.2, 0.3, 0.4],
            range_grid: RangeGrid::Stepped { step: 0.05 },
            conditional: if bounded { ConditionalSpec::default_bounded() } else { ConditionalSpec::DEFAULT_EXACT },
        }
    }

    /// `(b_y level, R_y)` pairs in emission order.
    pub fn grid_points(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        for &level in &self.b_y_grid {
            match &self.range_grid {
                RangeGrid::Fixed(values) => out.extend(values.iter().map(|&r| (level, r))),
                RangeGrid::Stepped { step } => {
                    let max = 1.0 - 2.0 * level;
                    let mut k = 0u32;
                    loop {
                        let r = f64::from(k) * step;
                        if r > max + 1e-12 {
                            break;
                        }
                        // snap to the nearest multiple of 1e-12 so grid values print cleanly
                        out.push((level, (r * 1e12).round() / 1e12));
                        k += 1;
                    }
                }
            }
        }
        out
    }

    fn check(&self) -> Result<()> {
        if self.b_y_grid.is_empty() {
            return Err(Error::InvalidSweep("empty sweep".into()));
        }
        match &self.range_grid {
            RangeGrid::Fixed(v) if v.is_empty() => return Err(Error::InvalidSweep("empty sweep".into())),
            RangeGrid::Fixed(v) if v.iter().any(|r| !(0.0..=1.0).contains(r)) => {
                return Err(Error::InvalidSweep("range grid values must lie in [0, 1]".into()))
            }
            RangeGrid::Stepped { step } if !(*step > 0.0 && *step <= 1.0) => {
                return Err(Error::InvalidSweep(format!("step {step} must lie in (0, 1]")))
            }
            _ => {}
        }
        if self.b_y_grid.iter().any(|b| !(0.0..=1.0).contains(b)) {
            return Err(Error::InvalidSweep("b_y levels must lie in [0, 1]".into()));
        }
        for row in self.conditional.rows() {
            BoundVector::new(row.to_vec()).map_err(|e| Error::InvalidSweep(format!("conditional table: {e}")))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub kind: SweepKind,
    pub b_y: f64,
    pub r_y: f64,
    pub output_range: f64,
    pub conditional_mode: &'static str,
}

/// A grid point that could not be evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct SkippedPoint {
    pub b_y: f64,
    pub r_y: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepOutput {
    pub rows: Vec<SweepRow>,
    pub skipped: Vec<SkippedPoint>,
}

/// The two-node binary diagram for one grid point.
pub fn two_node_diagram(level: f64, r_y: f64, conditional: &ConditionalSpec) -> Result<InfluenceDiagram> {
    let mut second = 1.0 - level - r_y;
    if (-EPS_VALIDATE..0.0).contains(&second) {
        second = 0.0;
    }
    let y_bounds = BoundVector::new(vec![level, second])?;
    let rows = conditional.rows();
    let x_entries = vec![BoundVector::new(rows[0].to_vec())?, BoundVector::new(rows[1].to_vec())?];
    InfluenceDiagram::new(vec![
        (OutcomeSpace::new("Y", ["y1", "y2"])?, LowerBoundTable::root("Y", y_bounds)),
        (
            OutcomeSpace::new("X", ["x1", "x2"])?,
            LowerBoundTable::new("X", vec!["Y".into()], vec![2], x_entries)?,
        ),
    ])
}

fn output_range(kind: SweepKind, d: &InfluenceDiagram) -> Result<f64> {
    match kind {
        SweepKind::Reversal => {
            let reversed = reverse_arc(d, "Y", "X")?;
            // Y's parents are now [X]; context 0 is x1
            Ok(reversed.table("Y")?.entries()[0].range())
        }
        SweepKind::Removal => Ok(remove_node(d, "Y")?.table("X")?.entries()[0].range()),
    }
}

fn run(spec: &SweepSpec) -> Result<SweepOutput> {
    spec.check()?;
    let mut out = SweepOutput::default();
    for (b_y, r_y) in spec.grid_points() {
        match two_node_diagram(b_y, r_y, &spec.conditional).and_then(|d| output_range(spec.kind, &d)) {
            Ok(output_range) => out.rows.push(SweepRow {
                kind: spec.kind,
                b_y,
                r_y,
                output_range,
                conditional_mode: spec.conditional.mode(),
            }),
            Err(e) => out.skipped.push(SkippedPoint { b_y, r_y, reason: e.to_string() }),
        }
    }
    Ok(out)
}

/// Range of `Y | x1` after reversing `Y -> X`, over the grid.
pub fn sweep_reversal(spec: &SweepSpec) -> Result<SweepOutput> {
    if spec.kind != SweepKind::Reversal {
        return Err(Error::InvalidSweep("sweep_reversal needs kind = reversal".into()));
    }
    run(spec)
}

/// Range of `X` after removing `Y`, over the grid.
pub fn sweep_removal(spec: &SweepSpec) -> Result<SweepOutput> {
    if spec.kind != SweepKind::Removal {
        return Err(Error::InvalidSweep("sweep_removal needs kind = removal".into()));
    }
    run(spec)
}

pub fn sweep(spec: &SweepSpec) -> Result<SweepOutput> {
    match spec.kind {
        SweepKind::Reversal => sweep_reversal(spec),
        SweepKind::Removal => sweep_removal(spec),
    }
}

pub const CSV_HEADER: [&str; 5] = ["kind", "b_y", "r_y", "output_range", "conditional_mode"];

/// Shortest decimal that round-trips the value rounded to 12 significant digits.
pub fn format_decimal(v: f64) -> String {
    let rounded: f64 = format!("{v:.11e}").parse().expect("formatted float parses");
    let rounded = if rounded == 0.0 { 0.0 } else { rounded };
    format!("{rounded}")
}

pub fn write_csv<W: Write>(rows: &[SweepRow], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.kind.as_str().to_string(),
            format_decimal(r.b_y),
            format_decimal(r.r_y),
            format_decimal(r.output_range),
            r.conditional_mode.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv_file(rows: &[SweepRow], path: impl AsRef<Path>) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_csv(rows, std::io::BufWriter::new(file))
}
