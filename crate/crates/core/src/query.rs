//! Interval queries: barren-node pruning, transformation planning, and
//! execution.
//!
//! A query `p(T | E = e)` is answered by transforming the diagram until only
//! the target and the evidence nodes remain and the target has no successors.
//! The target's parents are then all evidence nodes, and the target's bound
//! vector in the observed context is the answer.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::{BoundVector, InfluenceDiagram, ProbInterval};
use crate::transforms::{PartitionedPredecessors, Step};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub target: String,
    /// Observed `(node, outcome)` pairs.
    pub evidence: Vec<(String, String)>,
}

impl Query {
    pub fn marginal(target: impl Into<String>) -> Self {
        Self { target: target.into(), evidence: Vec::new() }
    }

    pub fn given(mut self, node: impl Into<String>, outcome: impl Into<String>) -> Self {
        self.evidence.push((node.into(), outcome.into()));
        self
    }

    /// Parses `NODE=outcome`.
    pub fn parse_evidence(s: &str) -> Result<(String, String)> {
        match s.split_once('=') {
            Some((n, o)) if !n.is_empty() && !o.is_empty() => Ok((n.trim().to_string(), o.trim().to_string())),
            _ => Err(Error::InvalidQuery(format!("evidence `{s}` is not of the form NODE=outcome"))),
        }
    }

    pub fn is_evidence(&self, id: &str) -> bool {
        self.evidence.iter().any(|(n, _)| n == id)
    }

    pub fn check(&self, d: &InfluenceDiagram) -> Result<()> {
        d.node(&self.target)?;
        for (i, (node, outcome)) in self.evidence.iter().enumerate() {
            let space = d.space(node)?;
            if space.index_of(outcome).is_none() {
                return Err(Error::UnknownOutcome { node: node.clone(), outcome: outcome.clone() });
            }
            if self.evidence[..i].iter().any(|(n, _)| n == node) {
                return Err(Error::InvalidQuery(format!("node `{node}` is observed twice")));
            }
        }
        if self.is_evidence(&self.target) {
            return Err(Error::InvalidQuery(format!("target `{}` is also an evidence node", self.target)));
        }
        Ok(())
    }

    /// Evidence as `(node, outcome index)`, in declaration order.
    fn resolved_evidence(&self, d: &InfluenceDiagram) -> Result<Vec<(String, usize)>> {
        let mut ev = self
            .evidence
            .iter()
            .map(|(n, o)| {
                let idx = d.space(n)?.index_of(o).ok_or_else(|| Error::UnknownOutcome {
                    node: n.clone(),
                    outcome: o.clone(),
                })?;
                Ok((n.clone(), idx))
            })
            .collect::<Result<Vec<_>>>()?;
        ev.sort_by_key(|(n, _)| d.position(n));
        Ok(ev)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryResult {
    pub target: String,
    pub outcomes: Vec<String>,
    pub intervals: Vec<ProbInterval>,
    pub range: f64,
    pub transform_log: Vec<Step>,
    /// The target's lower bounds in the observed context.
    pub bounds: BoundVector,
}

impl QueryResult {
    pub fn lower(&self) -> Vec<f64> {
        self.intervals.iter().map(|i| i.lo).collect()
    }

    pub fn upper(&self) -> Vec<f64> {
        self.intervals.iter().map(|i| i.hi).collect()
    }
}

/// Repeatedly deletes successor-free nodes that are neither the target nor
/// observed. These never influence the query, so no bounds change.
pub fn prune_barren(d: &InfluenceDiagram, q: &Query) -> Result<InfluenceDiagram> {
    q.check(d)?;
    let mut current = d.clone();
    loop {
        let barren = current
            .ids()
            .find(|id| *id != q.target && !q.is_evidence(id) && current.children(id).is_ok_and(|c| c.is_empty()))
            .map(str::to_string);
        match barren {
            Some(id) => current = current.without(&id)?,
            None => return Ok(current),
        }
    }
}

/// Parent lists and cardinalities only; enough to simulate transformations.
#[derive(Debug, Clone)]
struct Skeleton {
    ids: Vec<String>,
    cards: HashMap<String, usize>,
    parents: HashMap<String, Vec<String>>,
    position: HashMap<String, usize>,
}

impl Skeleton {
    fn of(d: &InfluenceDiagram) -> Self {
        let ids: Vec<String> = d.ids().map(str::to_string).collect();
        let cards = ids.iter().map(|id| (id.clone(), d.space(id).unwrap().len())).collect();
        let parents = ids.iter().map(|id| (id.clone(), d.parents(id).unwrap().to_vec())).collect();
        let position = ids.iter().enumerate().map(|(i, id)| (id.clone(), i)).collect();
        Self { ids, cards, parents, position }
    }

    fn children(&self, id: &str) -> Vec<&str> {
        self.ids
            .iter()
            .filter(|c| self.parents[c.as_str()].iter().any(|p| p == id))
            .map(String::as_str)
            .collect()
    }

    fn table_size(&self, node: &str, parents: &[String]) -> usize {
        parents.iter().map(|p| self.cards[p]).product::<usize>() * self.cards[node]
    }

    fn partition(&self, y: &str, x: &str) -> PartitionedPredecessors {
        PartitionedPredecessors::from_parents(&self.parents[y], &self.parents[x], y, |id| self.position[id])
    }

    fn step_cost(&self, step: &Step) -> usize {
        match step {
            Step::Remove { node } => {
                let x = self.children(node)[0];
                self.table_size(x, &self.partition(node, x).joined())
            }
            Step::Reverse { from, to } => {
                let shared = self.partition(from, to).joined();
                self.table_size(to, &shared) + self.table_size(from, &shared) * self.cards[to.as_str()]
            }
        }
    }

    fn apply(&mut self, step: &Step) {
        match step {
            Step::Remove { node } => {
                let x = self.children(node)[0].to_string();
                let joined = self.partition(node, &x).joined();
                self.parents.insert(x, joined);
                self.ids.retain(|id| id != node);
                self.parents.remove(node);
            }
            Step::Reverse { from, to } => {
                let joined = self.partition(from, to).joined();
                let mut y_parents = joined.clone();
                y_parents.push(to.clone());
                self.parents.insert(to.clone(), joined);
                self.parents.insert(from.clone(), y_parents);
            }
        }
    }

    /// Topological rank of every node, preferring declaration order.
    fn topo_rank(&self) -> HashMap<&str, usize> {
        let index: HashMap<&str, usize> = self.ids.iter().enumerate().map(|(i, id)| (id.as_str(), i)).collect();
        let parents: Vec<Vec<usize>> =
            self.ids.iter().map(|id| self.parents[id].iter().map(|p| index[p.as_str()]).collect()).collect();
        crate::model::topo_by_index(&parents)
            .expect("transformations preserve acyclicity")
            .into_iter()
            .enumerate()
            .map(|(rank, i)| (self.ids[i].as_str(), rank))
            .collect()
    }

    /// The topologically first child of `id`. No other directed path can
    /// reach it, so the arc to it is always reversible.
    fn first_child(&self, id: &str) -> Option<String> {
        let rank = self.topo_rank();
        self.children(id).into_iter().min_by_key(|c| rank[c]).map(str::to_string)
    }
}

/// Plans the removals and reversals that reduce the diagram to the target
/// plus evidence, with the target as a sink.
///
/// While unobserved non-target nodes remain, the cheapest removable one (by
/// size of the recomputed table, ties by declaration order) is removed. If
/// none has a single successor, the node whose next reversal is cheapest has
/// its arcs reversed, topologically first child first, until it has one
/// successor left. Finally the target's remaining arcs (all into evidence
/// nodes) are reversed the same way.
pub fn plan(d: &InfluenceDiagram, q: &Query) -> Result<Vec<Step>> {
    q.check(d)?;
    let mut sk = Skeleton::of(d);
    let mut steps = Vec::new();
    let is_goal = |id: &str| id == q.target || q.is_evidence(id);

    loop {
        let others: Vec<String> = sk.ids.iter().filter(|id| !is_goal(id)).cloned().collect();
        if others.is_empty() {
            break;
        }
        if let Some(id) = others.iter().find(|id| sk.children(id).is_empty()) {
            return Err(Error::Unplannable(format!("`{id}` is barren; prune the diagram first")));
        }
        let removal = others
            .iter()
            .filter(|id| sk.children(id).len() == 1)
            .map(|id| Step::Remove { node: id.clone() })
            .min_by_key(|s| sk.step_cost(s));
        if let Some(step) = removal {
            sk.apply(&step);
            steps.push(step);
            continue;
        }
        let node = others
            .iter()
            .min_by_key(|id| {
                let to = sk.first_child(id).expect("non-barren");
                sk.step_cost(&Step::Reverse { from: (*id).clone(), to })
            })
            .cloned()
            .expect("nonempty");
        while sk.children(&node).len() > 1 {
            let to = sk.first_child(&node).expect("has children");
            let step = Step::Reverse { from: node.clone(), to };
            sk.apply(&step);
            steps.push(step);
        }
    }

    while let Some(to) = sk.first_child(&q.target) {
        let step = Step::Reverse { from: q.target.clone(), to };
        sk.apply(&step);
        steps.push(step);
    }
    Ok(steps)
}

/// Interval marginal or posterior of the query target.
pub fn answer(d: &InfluenceDiagram, q: &Query) -> Result<QueryResult> {
    let pruned = prune_barren(d, q)?;
    let steps = plan(&pruned, q)?;
    let mut current = pruned;
    for step in &steps {
        current = step.apply(&current)?;
    }
    read_result(&current, q, steps)
}

/// Reads the target's bounds in the evidence context from a fully reduced
/// diagram.
pub(crate) fn read_result(reduced: &InfluenceDiagram, q: &Query, log: Vec<Step>) -> Result<QueryResult> {
    let evidence = q.resolved_evidence(reduced)?;
    let table = reduced.table(&q.target)?;
    if let Some(p) = table.parents().iter().find(|p| !evidence.iter().any(|(n, _)| n == *p)) {
        return Err(Error::Unplannable(format!("target `{}` still depends on unobserved `{p}`", q.target)));
    }
    let bounds = table.lookup(|p| evidence.iter().find(|(n, _)| n == p).map(|(_, i)| *i).unwrap()).clone();
    Ok(QueryResult {
        target: q.target.clone(),
        outcomes: reduced.space(&q.target)?.outcomes().to_vec(),
        intervals: bounds.intervals(),
        range: bounds.range(),
        transform_log: log,
        bounds,
    })
}

/// Replays a transformation log on an already pruned diagram.
pub fn replay(pruned: &InfluenceDiagram, q: &Query, log: &[Step]) -> Result<QueryResult> {
    let mut current = pruned.clone();
    for step in log {
        current = step.apply(&current)?;
    }
    read_result(&current, q, log.to_vec())
}
