//! Brute-force reference for interval queries.
//!
//! The credal set of one context is the polytope `{p : p >= b, sum p = 1}`,
//! whose extreme points put the whole slack `1 - sum b` on a single outcome.
//! Joint probabilities are multilinear in the per-context distributions, and
//! marginals and posteriors are linear or linear-fractional in each one, so
//! their extrema over the product of polytopes occur at vertex assignments.
//! Enumerating every assignment therefore gives the exact (sharp) query
//! intervals, at a cost exponential in the number of contexts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{config_index, BoundVector, InfluenceDiagram, ParentConfig, ProbInterval};
use crate::query::Query;

pub const DEFAULT_CAP: u128 = 10_000_000;

/// Vertices closer than this in every coordinate are merged.
const VERTEX_TOL: f64 = 1e-12;

/// The extreme points of one context's credal set: for each outcome `i`,
/// `p(x_i) = 1 - sum_{j != i} b_j` and `p(x_j) = b_j` otherwise. Identical
/// points are merged, so a zero-range vector yields one distribution.
pub fn vertex_distributions(bv: &BoundVector) -> Vec<Vec<f64>> {
    let b = bv.lower();
    let r = bv.range();
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(b.len());
    for i in 0..b.len() {
        let mut p = b.to_vec();
        p[i] += r;
        if !out.iter().any(|q| same_point(q, &p)) {
            out.push(p);
        }
    }
    out
}

fn same_point(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= VERTEX_TOL)
}

/// One vertex index per `(node, context)`, stored per node in declaration
/// order and per context in the table's row-major order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexAssignment {
    pub choices: Vec<Vec<usize>>,
}

impl VertexAssignment {
    /// Every context picks the same vertex index `i` (clamped to the number
    /// of distinct vertices of that context).
    pub fn uniform(d: &InfluenceDiagram, i: usize) -> Self {
        let choices = d
            .nodes()
            .map(|n| n.table.entries().iter().map(|e| i.min(vertex_distributions(e).len() - 1)).collect())
            .collect();
        Self { choices }
    }

    pub fn choice(&self, d: &InfluenceDiagram, node: &str, config: &ParentConfig) -> Option<usize> {
        let k = d.position(node)?;
        let t = d.table(node).ok()?;
        t.get(config)?;
        self.choices.get(k)?.get(config_index(t.parent_cards(), config.indices())).copied()
    }
}

/// A full joint table over all nodes, row-major in declaration order.
#[derive(Debug, Clone, PartialEq)]
pub struct Joint {
    pub nodes: Vec<String>,
    pub cards: Vec<usize>,
    pub probs: Vec<f64>,
}

impl Joint {
    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Exact `p(target | evidence)`; `None` if the evidence has probability zero.
    pub fn query(&self, d: &InfluenceDiagram, q: &Query) -> Result<Option<Vec<f64>>> {
        let plan = QueryCells::new(d, q)?;
        Ok(plan.evaluate(&self.probs))
    }
}

/// Per node, per joint cell: the context index and the node's outcome.
struct CellIndex {
    ctx: Vec<Vec<usize>>,
    outcome: Vec<Vec<usize>>,
    cells: usize,
}

impl CellIndex {
    fn new(d: &InfluenceDiagram) -> Self {
        let cards: Vec<usize> = d.nodes().map(|n| n.space.len()).collect();
        let cells: usize = cards.iter().product();
        let mut ctx = vec![Vec::with_capacity(cells); cards.len()];
        let mut outcome = vec![Vec::with_capacity(cells); cards.len()];
        let parent_pos: Vec<Vec<usize>> = d
            .nodes()
            .map(|n| n.table.parents().iter().map(|p| d.position(p).unwrap()).collect())
            .collect();
        let mut state = vec![0usize; cards.len()];
        for _ in 0..cells {
            for (k, n) in d.nodes().enumerate() {
                let config: Vec<usize> = parent_pos[k].iter().map(|&p| state[p]).collect();
                ctx[k].push(config_index(n.table.parent_cards(), &config));
                outcome[k].push(state[k]);
            }
            for k in (0..cards.len()).rev() {
                state[k] += 1;
                if state[k] < cards[k] {
                    break;
                }
                state[k] = 0;
            }
        }
        Self { ctx, outcome, cells }
    }

    /// `dists[node][context][outcome]`
    fn joint(&self, dists: &[&[f64]], offsets: &[usize], out: &mut [f64]) {
        for (cell, slot) in out.iter_mut().enumerate().take(self.cells) {
            let mut p = 1.0;
            for k in 0..offsets.len() {
                p *= dists[offsets[k] + self.ctx[k][cell]][self.outcome[k][cell]];
            }
            *slot = p;
        }
    }
}

/// Cells consistent with a query's evidence, with the target outcome of each.
struct QueryCells {
    cells: Vec<(usize, usize)>,
    outcomes: usize,
    conditional: bool,
}

impl QueryCells {
    fn new(d: &InfluenceDiagram, q: &Query) -> Result<Self> {
        q.check(d)?;
        let cards: Vec<usize> = d.nodes().map(|n| n.space.len()).collect();
        let t = d.position(&q.target).unwrap();
        let ev: Vec<(usize, usize)> = q
            .evidence
            .iter()
            .map(|(n, o)| (d.position(n).unwrap(), d.space(n).unwrap().index_of(o).unwrap()))
            .collect();
        let mut cells = Vec::new();
        let mut state = vec![0usize; cards.len()];
        let total: usize = cards.iter().product();
        for cell in 0..total {
            if ev.iter().all(|&(k, o)| state[k] == o) {
                cells.push((cell, state[t]));
            }
            for k in (0..cards.len()).rev() {
                state[k] += 1;
                if state[k] < cards[k] {
                    break;
                }
                state[k] = 0;
            }
        }
        Ok(Self { cells, outcomes: cards[t], conditional: !ev.is_empty() })
    }

    fn evaluate(&self, probs: &[f64]) -> Option<Vec<f64>> {
        let mut num = vec![0.0; self.outcomes];
        for &(cell, o) in &self.cells {
            num[o] += probs[cell];
        }
        if !self.conditional {
            return Some(num);
        }
        let pe: f64 = num.iter().sum();
        if pe <= 0.0 {
            return None;
        }
        Some(num.into_iter().map(|v| v / pe).collect())
    }
}

/// Multiplies the chosen per-context distributions into the joint table.
/// `dists[node][context]` is a distribution over that node's outcomes.
pub fn joint_from_distributions(d: &InfluenceDiagram, dists: &[Vec<Vec<f64>>]) -> Result<Joint> {
    if dists.len() != d.len() {
        return Err(Error::IncompleteAssignment(format!("{} nodes, {} distribution sets", d.len(), dists.len())));
    }
    let mut flat: Vec<&[f64]> = Vec::new();
    let mut offsets = Vec::with_capacity(d.len());
    for (n, per_ctx) in d.nodes().zip(dists) {
        if per_ctx.len() != n.table.entries().len() || per_ctx.iter().any(|p| p.len() != n.space.len()) {
            return Err(Error::IncompleteAssignment(format!("node `{}` is not fully covered", n.space.id())));
        }
        offsets.push(flat.len());
        flat.extend(per_ctx.iter().map(Vec::as_slice));
    }
    let index = CellIndex::new(d);
    let mut probs = vec![0.0; index.cells];
    index.joint(&flat, &offsets, &mut probs);
    Ok(Joint {
        nodes: d.ids().map(str::to_string).collect(),
        cards: d.nodes().map(|n| n.space.len()).collect(),
        probs,
    })
}

pub fn joint_from_assignment(d: &InfluenceDiagram, va: &VertexAssignment) -> Result<Joint> {
    if va.choices.len() != d.len() {
        return Err(Error::IncompleteAssignment(format!("{} nodes, {} choice lists", d.len(), va.choices.len())));
    }
    let mut dists = Vec::with_capacity(d.len());
    for (n, choices) in d.nodes().zip(&va.choices) {
        if choices.len() != n.table.entries().len() {
            return Err(Error::IncompleteAssignment(format!(
                "node `{}` has {} contexts but {} choices",
                n.space.id(),
                n.table.entries().len(),
                choices.len()
            )));
        }
        let mut per_ctx = Vec::with_capacity(choices.len());
        for (ctx, (&c, bv)) in choices.iter().zip(n.table.entries()).enumerate() {
            let verts = vertex_distributions(bv);
            let v = verts.get(c).ok_or_else(|| {
                Error::IncompleteAssignment(format!(
                    "node `{}` context {ctx} has {} vertices, choice {c}",
                    n.space.id(),
                    verts.len()
                ))
            })?;
            per_ctx.push(v.clone());
        }
        dists.push(per_ctx);
    }
    joint_from_distributions(d, &dists)
}

/// Number of vertex assignments of the diagram (saturating).
pub fn vertex_combinations(d: &InfluenceDiagram) -> u128 {
    d.nodes()
        .flat_map(|n| n.table.entries().iter())
        .fold(1u128, |acc, e| acc.saturating_mul(vertex_distributions(e).len() as u128))
}

/// Sharp intervals for one query by exhaustive vertex enumeration.
pub fn brute_force_interval(d: &InfluenceDiagram, q: &Query) -> Result<Vec<ProbInterval>> {
    brute_force_interval_capped(d, q, DEFAULT_CAP)
}

pub fn brute_force_interval_capped(d: &InfluenceDiagram, q: &Query, cap: u128) -> Result<Vec<ProbInterval>> {
    Ok(brute_force_batch(d, std::slice::from_ref(q), cap)?.remove(0))
}

#[derive(Clone)]
struct Extremes {
    lo: Vec<Vec<f64>>,
    hi: Vec<Vec<f64>>,
}

impl Extremes {
    fn new(queries: &[QueryCells]) -> Self {
        Self {
            lo: queries.iter().map(|q| vec![f64::INFINITY; q.outcomes]).collect(),
            hi: queries.iter().map(|q| vec![f64::NEG_INFINITY; q.outcomes]).collect(),
        }
    }

    fn merge(mut self, other: Self) -> Self {
        for (a, b) in self.lo.iter_mut().zip(other.lo) {
            for (x, y) in a.iter_mut().zip(b) {
                *x = x.min(y);
            }
        }
        for (a, b) in self.hi.iter_mut().zip(other.hi) {
            for (x, y) in a.iter_mut().zip(b) {
                *x = x.max(y);
            }
        }
        self
    }
}

/// Evaluates many queries over one enumeration of the vertex assignments.
///
/// Assignments under which a posterior's evidence has probability zero are
/// skipped for that query; if every assignment is skipped the query gets the
/// vacuous interval `[0, 1]` for each outcome.
pub fn brute_force_batch(d: &InfluenceDiagram, queries: &[Query], cap: u128) -> Result<Vec<Vec<ProbInterval>>> {
    let combos = vertex_combinations(d);
    if combos > cap {
        return Err(Error::Capacity { combinations: combos, cap });
    }
    let cells: Vec<QueryCells> = queries.iter().map(|q| QueryCells::new(d, q)).collect::<Result<_>>()?;
    let index = CellIndex::new(d);

    // every context's vertex set, flattened, with per-node offsets
    let mut verts: Vec<Vec<Vec<f64>>> = Vec::new();
    let mut offsets = Vec::with_capacity(d.len());
    for n in d.nodes() {
        offsets.push(verts.len());
        verts.extend(n.table.entries().iter().map(vertex_distributions));
    }
    let radix: Vec<usize> = verts.iter().map(Vec::len).collect();
    let total = combos as usize;

    const CHUNK: usize = 2048;
    let chunks = total.div_ceil(CHUNK);
    let extremes = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut acc = Extremes::new(&cells);
            let start = chunk * CHUNK;
            let end = (start + CHUNK).min(total);
            // decode `start` in mixed radix, last slot fastest
            let mut digits = vec![0usize; radix.len()];
            let mut rest = start;
            for s in (0..radix.len()).rev() {
                digits[s] = rest % radix[s];
                rest /= radix[s];
            }
            let mut probs = vec![0.0; index.cells];
            let mut chosen: Vec<&[f64]> = digits.iter().enumerate().map(|(s, &v)| verts[s][v].as_slice()).collect();
            for _ in start..end {
                index.joint(&chosen, &offsets, &mut probs);
                for (qi, qc) in cells.iter().enumerate() {
                    if let Some(vals) = qc.evaluate(&probs) {
                        for (o, v) in vals.into_iter().enumerate() {
                            acc.lo[qi][o] = acc.lo[qi][o].min(v);
                            acc.hi[qi][o] = acc.hi[qi][o].max(v);
                        }
                    }
                }
                for s in (0..radix.len()).rev() {
                    digits[s] += 1;
                    if digits[s] < radix[s] {
                        chosen[s] = verts[s][digits[s]].as_slice();
                        break;
                    }
                    digits[s] = 0;
                    chosen[s] = verts[s][0].as_slice();
                }
            }
            acc
        })
        .reduce(|| Extremes::new(&cells), Extremes::merge);

    Ok(extremes
        .lo
        .into_iter()
        .zip(extremes.hi)
        .map(|(lo, hi)| {
            lo.into_iter()
                .zip(hi)
                .map(|(l, h)| {
                    if l.is_finite() {
                        ProbInterval { lo: l.clamp(0.0, 1.0), hi: h.clamp(0.0, 1.0) }
                    } else {
                        ProbInterval::vacuous()
                    }
                })
                .collect()
        })
        .collect())
}

/// A point of the context's credal set: `b + R q` with `q` drawn from the
/// uniform distribution on the simplex (normalized exponential spacings).
/// Deterministic per seed.
pub fn sample_distribution(bv: &BoundVector, seed: u64) -> Vec<f64> {
    let r = bv.range();
    if r == 0.0 {
        return bv.lower().to_vec();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e: Vec<f64> = (0..bv.len()).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = e.iter().sum();
    bv.lower().iter().zip(&e).map(|(b, x)| b + r * x / total).collect()
}

/// One sampled distribution per `(node, context)`, laid out for
/// [`joint_from_distributions`].
pub fn sample_family(d: &InfluenceDiagram, seed: u64) -> Vec<Vec<Vec<f64>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    d.nodes()
        .map(|n| n.table.entries().iter().map(|e| sample_distribution(e, rng.gen())).collect())
        .collect()
}

/// Point-valued family for an exact diagram: each context's lower bounds.
pub fn point_family(d: &InfluenceDiagram) -> Vec<Vec<Vec<f64>>> {
    d.nodes().map(|n| n.table.entries().iter().map(|e| e.lower().to_vec()).collect()).collect()
}
