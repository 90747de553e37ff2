//! Diagram data model: outcome spaces, lower-bound vectors and tables, and
//! the acyclic diagram that ties them together.
//!
//! Upper bounds and ranges are never stored. They are derived from the lower
//! bounds on demand: `U_i = 1 - sum_{j != i} b_j` and `R = 1 - sum_j b_j`.

use std::collections::HashSet;
use std::fmt;

use indexmap::IndexMap;

use crate::error::{Error, Result};

/// Absolute tolerance on the `sum(b) <= 1` check, admitting decimal inputs.
pub const EPS_VALIDATE: f64 = 1e-9;

/// Ordered outcome labels of one node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeSpace {
    id: String,
    outcomes: Vec<String>,
}

impl OutcomeSpace {
    pub fn new<S: Into<String>>(id: impl Into<String>, outcomes: impl IntoIterator<Item = S>) -> Result<Self> {
        let id = id.into();
        let outcomes: Vec<String> = outcomes.into_iter().map(Into::into).collect();
        if outcomes.len() < 2 {
            return Err(Error::InvalidDiagram(ValidationReport::single(Violation::TooFewOutcomes {
                node: id,
                count: outcomes.len(),
            })));
        }
        let mut seen = HashSet::new();
        for o in &outcomes {
            if !seen.insert(o.as_str()) {
                return Err(Error::InvalidDiagram(ValidationReport::single(Violation::DuplicateOutcome {
                    node: id,
                    outcome: o.clone(),
                })));
            }
        }
        Ok(Self { id, outcomes })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn index_of(&self, outcome: &str) -> Option<usize> {
        self.outcomes.iter().position(|o| o == outcome)
    }
}

/// Lower bounds `b(x_i)` over one outcome space in one conditioning context.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundVector(Vec<f64>);

impl BoundVector {
    /// Checks nonnegativity and `sum <= 1 + EPS_VALIDATE`.
    pub fn new(lower: Vec<f64>) -> Result<Self> {
        if let Some(msg) = bound_violation(&lower) {
            return Err(Error::InvalidBounds(msg));
        }
        Ok(Self(lower))
    }

    /// The vacuous vector: every lower bound zero.
    pub fn vacuous(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn lower(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `R = 1 - sum_j b_j`, clamped at zero so that inputs admitted by the
    /// validation tolerance still give `U_i >= b_i`.
    pub fn range(&self) -> f64 {
        (1.0 - self.0.iter().sum::<f64>()).max(0.0)
    }

    /// `U_i = 1 - sum_{j != i} b_j`, computed as `b_i + R` so that the range
    /// identity holds exactly.
    pub fn upper_bounds(&self) -> Vec<f64> {
        let r = self.range();
        self.0.iter().map(|b| b + r).collect()
    }

    pub fn upper(&self, i: usize) -> f64 {
        self.0[i] + self.range()
    }

    pub fn intervals(&self) -> Vec<ProbInterval> {
        let r = self.range();
        self.0
            .iter()
            .map(|&b| ProbInterval { lo: b.clamp(0.0, 1.0), hi: (b + r).clamp(0.0, 1.0) })
            .collect()
    }
}

impl std::ops::Index<usize> for BoundVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

pub(crate) fn bound_violation(lower: &[f64]) -> Option<String> {
    if lower.is_empty() {
        return Some("empty bound vector".into());
    }
    if let Some((i, v)) = lower.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Some(format!("entry {i} is not finite ({v})"));
    }
    if let Some((i, v)) = lower.iter().enumerate().find(|(_, v)| **v < 0.0) {
        return Some(format!("entry {i} is negative ({v})"));
    }
    let sum: f64 = lower.iter().sum();
    if sum > 1.0 + EPS_VALIDATE {
        return Some(format!("entries sum to {sum} > 1"));
    }
    None
}

/// Upper bounds of a bound vector (`U_i = 1 - sum_{j != i} b_j`).
pub fn upper_bounds(bv: &BoundVector) -> Vec<f64> {
    bv.upper_bounds()
}

/// Range of a bound vector (`1 - sum_j b_j`), the common interval width.
pub fn range(bv: &BoundVector) -> f64 {
    bv.range()
}

/// A closed probability interval `[lo, hi]` with `0 <= lo <= hi <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbInterval {
    pub lo: f64,
    pub hi: f64,
}

impl ProbInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
            return Err(Error::InvalidBounds(format!("[{lo}, {hi}] is not a probability interval")));
        }
        Ok(Self { lo, hi })
    }

    pub fn vacuous() -> Self {
        Self { lo: 0.0, hi: 1.0 }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, p: f64, slack: f64) -> bool {
        p >= self.lo - slack && p <= self.hi + slack
    }

    /// True if `other` lies inside `self` up to `slack`.
    pub fn encloses(&self, other: &ProbInterval, slack: f64) -> bool {
        other.lo >= self.lo - slack && other.hi <= self.hi + slack
    }
}

impl fmt::Display for ProbInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = f.precision().unwrap_or(4);
        write!(f, "[{:.p$}, {:.p$}]", self.lo, self.hi)
    }
}

/// One outcome index per parent, in the owning table's parent order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParentConfig(pub Vec<usize>);

impl ParentConfig {
    pub fn root() -> Self {
        Self(Vec::new())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }
}

/// Iterates the Cartesian product of `0..cards[k]` in row-major order
/// (last position varies fastest). An empty `cards` yields one empty tuple.
#[derive(Debug, Clone)]
pub struct ConfigIter {
    cards: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl ConfigIter {
    pub fn new(cards: &[usize]) -> Self {
        let next = if cards.contains(&0) { None } else { Some(vec![0; cards.len()]) };
        Self { cards: cards.to_vec(), next }
    }
}

impl Iterator for ConfigIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut k = succ.len();
        loop {
            if k == 0 {
                break;
            }
            k -= 1;
            succ[k] += 1;
            if succ[k] < self.cards[k] {
                self.next = Some(succ);
                break;
            }
            succ[k] = 0;
        }
        Some(current)
    }
}

pub(crate) fn config_count(cards: &[usize]) -> usize {
    cards.iter().product()
}

pub fn config_index(cards: &[usize], config: &[usize]) -> usize {
    config.iter().zip(cards).fold(0, |acc, (&i, &c)| acc * c + i)
}

/// Lower bounds for one node, one `BoundVector` per parent configuration.
///
/// Entries are stored densely in row-major order over the parent outcome
/// spaces, so entry `k` belongs to the `k`-th configuration of
/// [`ConfigIter`].
#[derive(Debug, Clone, PartialEq)]
pub struct LowerBoundTable {
    node: String,
    parents: Vec<String>,
    cards: Vec<usize>,
    entries: Vec<BoundVector>,
}

impl LowerBoundTable {
    /// `cards` are the parent outcome counts, in `parents` order.
    pub fn new(
        node: impl Into<String>,
        parents: Vec<String>,
        cards: Vec<usize>,
        entries: Vec<BoundVector>,
    ) -> Result<Self> {
        let node = node.into();
        if parents.len() != cards.len() {
            return Err(Error::DimensionMismatch(format!(
                "table for `{node}` lists {} parents but {} cardinalities",
                parents.len(),
                cards.len()
            )));
        }
        let expected = config_count(&cards);
        if entries.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "table for `{node}` has {} contexts, expected {expected}",
                entries.len()
            )));
        }
        if let Some(first) = entries.first() {
            if let Some(bad) = entries.iter().find(|e| e.len() != first.len()) {
                return Err(Error::DimensionMismatch(format!(
                    "table for `{node}` mixes vector lengths {} and {}",
                    first.len(),
                    bad.len()
                )));
            }
        }
        Ok(Self { node, parents, cards, entries })
    }

    pub fn root(node: impl Into<String>, bounds: BoundVector) -> Self {
        Self { node: node.into(), parents: Vec::new(), cards: Vec::new(), entries: vec![bounds] }
    }

    pub fn node(&self) -> &str {
        &self.node
    }

    pub fn parents(&self) -> &[String] {
        &self.parents
    }

    pub fn parent_cards(&self) -> &[usize] {
        &self.cards
    }

    pub fn entries(&self) -> &[BoundVector] {
        &self.entries
    }

    pub fn outcome_count(&self) -> usize {
        self.entries[0].len()
    }

    pub fn configs(&self) -> ConfigIter {
        ConfigIter::new(&self.cards)
    }

    pub fn get(&self, config: &ParentConfig) -> Option<&BoundVector> {
        if config.0.len() != self.cards.len() || config.0.iter().zip(&self.cards).any(|(i, c)| i >= c) {
            return None;
        }
        Some(&self.entries[config_index(&self.cards, &config.0)])
    }

    /// Looks up the context selected by `assign`, which maps a parent name to
    /// its outcome index.
    pub fn lookup(&self, assign: impl Fn(&str) -> usize) -> &BoundVector {
        let idx = self
            .parents
            .iter()
            .zip(&self.cards)
            .fold(0, |acc, (p, &c)| acc * c + assign(p));
        &self.entries[idx]
    }

    pub fn has_parent(&self, id: &str) -> bool {
        self.parents.iter().any(|p| p == id)
    }
}

/// A chance node: its outcome space and lower-bound table.
#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub space: OutcomeSpace,
    pub table: LowerBoundTable,
}

/// An acyclic diagram of chance nodes with lower-bound tables.
///
/// Construction checks every structural invariant, so a value of this type is
/// always valid. Transformations build new diagrams rather than mutating.
#[derive(Debug, Clone, PartialEq)]
pub struct InfluenceDiagram {
    nodes: IndexMap<String, Node>,
}

impl InfluenceDiagram {
    /// Nodes keep the given order, which is the declaration order used for
    /// every tie-break.
    pub fn new(nodes: Vec<(OutcomeSpace, LowerBoundTable)>) -> Result<Self> {
        let mut report = ValidationReport::default();
        let mut map = IndexMap::new();
        for (space, table) in nodes {
            if space.id() != table.node() {
                report.push(Violation::Structure(format!(
                    "outcome space `{}` paired with table for `{}`",
                    space.id(),
                    table.node()
                )));
                continue;
            }
            if map.contains_key(space.id()) {
                report.push(Violation::DuplicateNode(space.id().to_string()));
                continue;
            }
            map.insert(space.id().to_string(), Node { space, table });
        }
        for node in map.values() {
            let t = &node.table;
            if t.outcome_count() != node.space.len() {
                report.push(Violation::WrongLength {
                    node: t.node().to_string(),
                    context: String::new(),
                    expected: node.space.len(),
                    found: t.outcome_count(),
                });
            }
            let mut seen = HashSet::new();
            for (p, &c) in t.parents().iter().zip(t.parent_cards()) {
                if !seen.insert(p.as_str()) {
                    report.push(Violation::DuplicateParent { node: t.node().to_string(), parent: p.clone() });
                }
                match map.get(p) {
                    None => report.push(Violation::UnknownParent { node: t.node().to_string(), parent: p.clone() }),
                    Some(pn) if pn.space.len() != c => report.push(Violation::Structure(format!(
                        "table for `{}` assumes {c} outcomes for parent `{p}`, which has {}",
                        t.node(),
                        pn.space.len()
                    ))),
                    _ => {}
                }
            }
        }
        if report.is_empty() {
            if let Some(cycle) = find_cycle(&map) {
                report.push(Violation::Cycle(cycle));
            }
        }
        if report.is_empty() {
            Ok(Self { nodes: map })
        } else {
            Err(Error::InvalidDiagram(report))
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.nodes.keys().map(String::as_str)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &Node> {
        self.nodes.values()
    }

    pub fn node(&self, id: &str) -> Result<&Node> {
        self.nodes.get(id).ok_or_else(|| Error::UnknownNode(id.to_string()))
    }

    pub fn space(&self, id: &str) -> Result<&OutcomeSpace> {
        Ok(&self.node(id)?.space)
    }

    pub fn table(&self, id: &str) -> Result<&LowerBoundTable> {
        Ok(&self.node(id)?.table)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.nodes.contains_key(id)
    }

    /// Declaration position of a node.
    pub fn position(&self, id: &str) -> Option<usize> {
        self.nodes.get_index_of(id)
    }

    pub fn parents(&self, id: &str) -> Result<&[String]> {
        Ok(self.table(id)?.parents())
    }

    /// Successors of `id` in declaration order.
    pub fn children(&self, id: &str) -> Result<Vec<&str>> {
        self.node(id)?;
        Ok(self
            .nodes
            .values()
            .filter(|n| n.table.has_parent(id))
            .map(|n| n.space.id())
            .collect())
    }

    /// A topological order that prefers earlier-declared nodes.
    pub fn topological_order(&self) -> Vec<&str> {
        let parents: Vec<Vec<usize>> = self
            .nodes
            .values()
            .map(|n| n.table.parents().iter().filter_map(|p| self.nodes.get_index_of(p)).collect())
            .collect();
        topo_by_index(&parents)
            .expect("diagram is acyclic")
            .into_iter()
            .map(|i| self.nodes.get_index(i).unwrap().0.as_str())
            .collect()
    }

    /// A directed path from `from` to `to` that does not use the direct arc
    /// `from -> to`, if one exists.
    pub fn other_directed_path(&self, from: &str, to: &str) -> Result<Option<Vec<String>>> {
        self.node(from)?;
        self.node(to)?;
        // depth-first search starting from every child except `to`
        let mut prev: IndexMap<&str, &str> = IndexMap::new();
        let mut stack: Vec<&str> = Vec::new();
        for c in self.children(from)? {
            if c != to && !prev.contains_key(c) {
                prev.insert(c, from);
                stack.push(c);
            }
        }
        while let Some(n) = stack.pop() {
            if n == to {
                let mut path = vec![to.to_string()];
                let mut cur = to;
                while cur != from {
                    cur = prev[cur];
                    path.push(cur.to_string());
                }
                path.reverse();
                return Ok(Some(path));
            }
            for c in self.children(n)? {
                if !prev.contains_key(c) {
                    prev.insert(c, n);
                    stack.push(c);
                }
            }
        }
        Ok(None)
    }

    pub fn has_other_directed_path(&self, from: &str, to: &str) -> Result<bool> {
        Ok(self.other_directed_path(from, to)?.is_some())
    }

    /// Copy without `id`. Fails if another node still lists `id` as a parent.
    pub(crate) fn without(&self, id: &str) -> Result<Self> {
        let nodes = self
            .nodes
            .values()
            .filter(|n| n.space.id() != id)
            .map(|n| (n.space.clone(), n.table.clone()))
            .collect();
        Self::new(nodes)
    }

    /// Copy with the listed tables replaced, re-checking all invariants.
    pub(crate) fn with_tables(&self, replaced: Vec<LowerBoundTable>) -> Result<Self> {
        let mut replaced: IndexMap<String, LowerBoundTable> =
            replaced.into_iter().map(|t| (t.node().to_string(), t)).collect();
        let nodes = self
            .nodes
            .values()
            .map(|n| {
                let table = replaced.shift_remove(n.space.id()).unwrap_or_else(|| n.table.clone());
                (n.space.clone(), table)
            })
            .collect();
        Self::new(nodes)
    }

    /// True if every context of every node has range zero.
    pub fn is_exact(&self) -> bool {
        self.nodes().all(|n| n.table.entries().iter().all(|e| e.range() == 0.0))
    }
}

/// Kahn's algorithm, always taking the lowest ready index. Returns the
/// sorted prefix; it is shorter than `parents` iff there is a cycle.
fn kahn(parents: &[Vec<usize>]) -> Vec<usize> {
    let n = parents.len();
    let mut indeg: Vec<usize> = parents.iter().map(Vec::len).collect();
    let mut children = vec![Vec::new(); n];
    for (c, ps) in parents.iter().enumerate() {
        for &p in ps {
            children[p].push(c);
        }
    }
    let mut ready: std::collections::BTreeSet<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(i) = ready.pop_first() {
        order.push(i);
        for &c in &children[i] {
            indeg[c] -= 1;
            if indeg[c] == 0 {
                ready.insert(c);
            }
        }
    }
    order
}

pub(crate) fn topo_by_index(parents: &[Vec<usize>]) -> Option<Vec<usize>> {
    let order = kahn(parents);
    (order.len() == parents.len()).then_some(order)
}

fn find_cycle(nodes: &IndexMap<String, Node>) -> Option<Vec<String>> {
    let parents: Vec<Vec<usize>> = nodes
        .values()
        .map(|n| n.table.parents().iter().filter_map(|p| nodes.get_index_of(p)).collect())
        .collect();
    let sorted: HashSet<usize> = kahn(&parents).into_iter().collect();
    // every unsorted node has an unsorted parent, so walking parents must loop
    let start = (0..parents.len()).find(|i| !sorted.contains(i))?;
    let mut seen = vec![start];
    let mut cur = start;
    loop {
        cur = *parents[cur].iter().find(|p| !sorted.contains(p))?;
        if let Some(pos) = seen.iter().position(|&s| s == cur) {
            let mut cycle: Vec<String> =
                seen[pos..].iter().rev().map(|&i| nodes.get_index(i).unwrap().0.clone()).collect();
            cycle.push(cycle[0].clone());
            return Some(cycle);
        }
        seen.push(cur);
    }
}

/// One problem found while validating a diagram document.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    DuplicateNode(String),
    TooFewOutcomes { node: String, count: usize },
    DuplicateOutcome { node: String, outcome: String },
    BadOutcomeLabel { node: String, outcome: String },
    UnknownParent { node: String, parent: String },
    DuplicateParent { node: String, parent: String },
    Cycle(Vec<String>),
    MissingContext { node: String, context: String },
    ExtraContext { node: String, context: String },
    WrongLength { node: String, context: String, expected: usize, found: usize },
    NonFinite { node: String, context: String, index: usize },
    Negative { node: String, context: String, index: usize, value: f64 },
    SumExceedsOne { node: String, context: String, sum: f64 },
    Structure(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateNode(n) => write!(f, "duplicate node `{n}`"),
            Violation::TooFewOutcomes { node, count } => {
                write!(f, "node `{node}` has {count} outcome(s); at least 2 are required")
            }
            Violation::DuplicateOutcome { node, outcome } => {
                write!(f, "node `{node}` repeats outcome `{outcome}`")
            }
            Violation::BadOutcomeLabel { node, outcome } => {
                write!(f, "node `{node}` outcome `{outcome}` is empty or contains ','")
            }
            Violation::UnknownParent { node, parent } => {
                write!(f, "node `{node}` lists unknown parent `{parent}`")
            }
            Violation::DuplicateParent { node, parent } => {
                write!(f, "node `{node}` lists parent `{parent}` twice")
            }
            Violation::Cycle(path) => write!(f, "cycle: {}", path.join(" -> ")),
            Violation::MissingContext { node, context } => {
                write!(f, "node `{node}` is missing context \"{context}\"")
            }
            Violation::ExtraContext { node, context } => {
                write!(f, "node `{node}` has unexpected context \"{context}\"")
            }
            Violation::WrongLength { node, context, expected, found } => write!(
                f,
                "node `{node}` context \"{context}\" has {found} bounds, expected {expected}"
            ),
            Violation::NonFinite { node, context, index } => {
                write!(f, "node `{node}` context \"{context}\" entry {index} is not finite")
            }
            Violation::Negative { node, context, index, value } => {
                write!(f, "node `{node}` context \"{context}\" entry {index} is negative ({value})")
            }
            Violation::SumExceedsOne { node, context, sum } => {
                write!(f, "node `{node}` context \"{context}\" lower bounds sum to {sum} > 1")
            }
            Violation::Structure(msg) => f.write_str(msg),
        }
    }
}

/// All violations found in a diagram; empty iff the diagram is valid.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn single(v: Violation) -> Self {
        Self { violations: vec![v] }
    }

    pub fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}
