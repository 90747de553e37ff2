//! Bound kernels for marginalization and Bayes' rule, and the diagram
//! transformations built on them: node removal and arc reversal.
//!
//! Both kernels pick a pivot outcome `y_s` of the conditioning node. For the
//! marginal the pivot minimizes `b(x|y)` and receives the upper bound
//! `U(y_s)`; for the posterior it maximizes `U(x|y_i)` over `y_i != y`. Ties
//! go to the lowest outcome index. Because every outcome of a context has the
//! same interval width, the choice among tied pivots does not change the
//! result.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::model::{BoundVector, ConfigIter, InfluenceDiagram, LowerBoundTable};

fn check_family(cond: &[BoundVector], prior: &BoundVector) -> Result<usize> {
    if cond.len() != prior.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} conditional vectors for a conditioning node with {} outcomes",
            cond.len(),
            prior.len()
        )));
    }
    let nx = cond.first().map(BoundVector::len).unwrap_or(0);
    if nx == 0 {
        return Err(Error::DimensionMismatch("empty conditional family".into()));
    }
    if cond.iter().any(|c| c.len() != nx) {
        return Err(Error::DimensionMismatch("conditional vectors differ in length".into()));
    }
    Ok(nx)
}

/// Pivot for the marginal bound of outcome `x`: the first `y` minimizing `b(x|y)`.
pub fn marginal_pivot(cond: &[BoundVector], x: usize) -> usize {
    let mut best = 0;
    for (y, c) in cond.iter().enumerate().skip(1) {
        if c[x] < cond[best][x] {
            best = y;
        }
    }
    best
}

/// `b(x) = b(x|y_s) U(y_s) + sum_{y != y_s} b(x|y) b(y)` for an explicit pivot.
pub fn marginal_lower_bound_with_pivot(cond: &[BoundVector], prior: &BoundVector, x: usize, pivot: usize) -> f64 {
    let r = prior.range();
    let mut total = 0.0;
    for (y, c) in cond.iter().enumerate() {
        let weight = if y == pivot { prior[y] + r } else { prior[y] };
        total += c[x] * weight;
    }
    total
}

/// Sharp lower bounds on `p(x)` from bounds on `p(x|y)` (one vector per
/// outcome of `y`, in `y`'s outcome order) and on `p(y)`.
pub fn marginal_lower_bounds(cond: &[BoundVector], prior: &BoundVector) -> Result<BoundVector> {
    let nx = check_family(cond, prior)?;
    let lower = (0..nx)
        .map(|x| marginal_lower_bound_with_pivot(cond, prior, x, marginal_pivot(cond, x)))
        .collect();
    BoundVector::new(lower)
}

/// Pivot for the posterior bound of `y` given `x`: the first `y_i != y`
/// maximizing `U(x|y_i)`. `None` when `y` is the only outcome.
pub fn posterior_pivot(cond: &[BoundVector], x: usize, y: usize) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (yi, c) in cond.iter().enumerate() {
        if yi == y {
            continue;
        }
        let u = c.upper(x);
        if best.is_none_or(|(_, bu)| u > bu) {
            best = Some((yi, u));
        }
    }
    best.map(|(yi, _)| yi)
}

/// Lower bound on `p(y|x)` for an explicit pivot. A zero denominator forces a
/// zero numerator and yields the vacuous bound 0.
pub fn posterior_lower_bound_with_pivot(
    cond: &[BoundVector],
    prior: &BoundVector,
    x: usize,
    y: usize,
    pivot: Option<usize>,
) -> f64 {
    let numerator = cond[y][x] * prior[y];
    let r = prior.range();
    let mut denominator = numerator;
    for (yi, c) in cond.iter().enumerate() {
        if yi == y {
            continue;
        }
        let weight = if Some(yi) == pivot { prior[yi] + r } else { prior[yi] };
        denominator += c.upper(x) * weight;
    }
    if denominator > 0.0 {
        numerator / denominator
    } else {
        0.0
    }
}

/// Sharp lower bounds on `p(y|x)` for one observed outcome `x`.
pub fn posterior_lower_bounds(cond: &[BoundVector], prior: &BoundVector, x: usize) -> Result<BoundVector> {
    let nx = check_family(cond, prior)?;
    if x >= nx {
        return Err(Error::DimensionMismatch(format!("outcome index {x} out of range for {nx} outcomes")));
    }
    let lower = (0..prior.len())
        .map(|y| posterior_lower_bound_with_pivot(cond, prior, x, y, posterior_pivot(cond, x, y)))
        .collect();
    BoundVector::new(lower)
}

/// Predecessors of an arc's endpoints `Y -> X`, split three ways and each
/// sorted by declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionedPredecessors {
    /// Predecessors of `Y` only.
    pub v1: Vec<String>,
    /// Common predecessors.
    pub v2: Vec<String>,
    /// Predecessors of `X` only (excluding `Y`).
    pub v3: Vec<String>,
}

impl PartitionedPredecessors {
    pub fn compute(d: &InfluenceDiagram, y: &str, x: &str) -> Result<Self> {
        Ok(Self::from_parents(d.parents(y)?, d.parents(x)?, y, |id| d.position(id).unwrap_or(usize::MAX)))
    }

    pub(crate) fn from_parents(
        y_parents: &[String],
        x_parents: &[String],
        y: &str,
        position: impl Fn(&str) -> usize,
    ) -> Self {
        let mut v1: Vec<String> = y_parents.iter().filter(|p| !x_parents.contains(p)).cloned().collect();
        let mut v2: Vec<String> = y_parents.iter().filter(|p| x_parents.contains(p)).cloned().collect();
        let mut v3: Vec<String> =
            x_parents.iter().filter(|p| p.as_str() != y && !y_parents.contains(p)).cloned().collect();
        for v in [&mut v1, &mut v2, &mut v3] {
            v.sort_by_key(|id| position(id));
        }
        Self { v1, v2, v3 }
    }

    /// `V1 ++ V2 ++ V3`, the parent list shared by both endpoints afterwards.
    pub fn joined(&self) -> Vec<String> {
        self.v1.iter().chain(&self.v2).chain(&self.v3).cloned().collect()
    }
}

fn cards_of(d: &InfluenceDiagram, ids: &[String]) -> Result<Vec<usize>> {
    ids.iter().map(|p| Ok(d.space(p)?.len())).collect()
}

/// Applies the marginal kernel in every `(V1, V2, V3)` context, producing
/// `X`'s table once `Y` is summed out.
fn marginalized_table(d: &InfluenceDiagram, y: &str, x: &str, parts: &PartitionedPredecessors) -> Result<LowerBoundTable> {
    let ty = d.table(y)?;
    let tx = d.table(x)?;
    let ny = d.space(y)?.len();
    let parents = parts.joined();
    let cards = cards_of(d, &parents)?;
    let mut entries = Vec::new();
    for config in ConfigIter::new(&cards) {
        let assign: HashMap<&str, usize> = parents.iter().map(String::as_str).zip(config.iter().copied()).collect();
        let cond: Vec<BoundVector> =
            (0..ny).map(|k| tx.lookup(|p| if p == y { k } else { assign[p] }).clone()).collect();
        let prior = ty.lookup(|p| assign[p]);
        entries.push(marginal_lower_bounds(&cond, prior)?);
    }
    LowerBoundTable::new(x, parents, cards, entries)
}

/// Removes `y`, which must have exactly one successor `X`. `X` inherits
/// `y`'s predecessors and its bounds are recomputed by the marginal kernel.
pub fn remove_node(d: &InfluenceDiagram, y: &str) -> Result<InfluenceDiagram> {
    let children = d.children(y)?;
    let [x] = children.as_slice() else {
        return Err(Error::Precondition(format!(
            "`{y}` must have exactly one successor to be removed; it has [{}]",
            children.join(", ")
        )));
    };
    let x = x.to_string();
    let parts = PartitionedPredecessors::compute(d, y, &x)?;
    let new_x = marginalized_table(d, y, &x, &parts)?;
    d.with_tables(vec![new_x])?.without(y)
}

/// Reverses the arc `y -> x`. Afterwards both nodes have parents
/// `V1 ++ V2 ++ V3` and `y` additionally has `x` as its last parent. Both new
/// tables are computed from the original tables.
pub fn reverse_arc(d: &InfluenceDiagram, y: &str, x: &str) -> Result<InfluenceDiagram> {
    let tx = d.table(x)?;
    let ty = d.table(y)?;
    if !tx.has_parent(y) {
        return Err(Error::Precondition(format!("there is no arc `{y}` -> `{x}`")));
    }
    if let Some(path) = d.other_directed_path(y, x)? {
        return Err(Error::Precondition(format!(
            "cannot reverse `{y}` -> `{x}`: another directed path exists ({})",
            path.join(" -> ")
        )));
    }
    let parts = PartitionedPredecessors::compute(d, y, x)?;
    let new_x = marginalized_table(d, y, x, &parts)?;

    let ny = d.space(y)?.len();
    let nx = d.space(x)?.len();
    let shared = parts.joined();
    let shared_cards = cards_of(d, &shared)?;
    let mut entries = Vec::with_capacity(new_x.entries().len() * nx);
    for config in ConfigIter::new(&shared_cards) {
        let assign: HashMap<&str, usize> = shared.iter().map(String::as_str).zip(config.iter().copied()).collect();
        let cond: Vec<BoundVector> =
            (0..ny).map(|k| tx.lookup(|p| if p == y { k } else { assign[p] }).clone()).collect();
        let prior = ty.lookup(|p| assign[p]);
        for xo in 0..nx {
            entries.push(posterior_lower_bounds(&cond, prior, xo)?);
        }
    }
    let mut y_parents = shared;
    y_parents.push(x.to_string());
    let mut y_cards = shared_cards;
    y_cards.push(nx);
    let new_y = LowerBoundTable::new(y, y_parents, y_cards, entries)?;
    d.with_tables(vec![new_x, new_y])
}

/// One diagram transformation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Step {
    Remove { node: String },
    Reverse { from: String, to: String },
}

impl Step {
    pub fn apply(&self, d: &InfluenceDiagram) -> Result<InfluenceDiagram> {
        match self {
            Step::Remove { node } => remove_node(d, node),
            Step::Reverse { from, to } => reverse_arc(d, from, to),
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Remove { node } => write!(f, "remove({node})"),
            Step::Reverse { from, to } => write!(f, "reverse({from}->{to})"),
        }
    }
}
