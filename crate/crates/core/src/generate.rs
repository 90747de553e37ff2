//! Seeded random diagrams for tests, examples and cross-checks.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::Exp1;

use crate::model::{config_count, BoundVector, InfluenceDiagram, LowerBoundTable, OutcomeSpace};

#[derive(Debug, Clone)]
pub struct RandomDiagramConfig {
    pub min_nodes: usize,
    pub max_nodes: usize,
    pub min_outcomes: usize,
    pub max_outcomes: usize,
    pub max_parents: usize,
    /// Chance that a context is point-valued (range zero).
    pub exact_chance: f64,
    /// Declare nodes in a random order rather than topologically.
    pub shuffle_declaration: bool,
}

impl Default for RandomDiagramConfig {
    fn default() -> Self {
        Self {
            min_nodes: 3,
            max_nodes: 5,
            min_outcomes: 2,
            max_outcomes: 3,
            max_parents: 2,
            exact_chance: 0.0,
            shuffle_declaration: true,
        }
    }
}

impl RandomDiagramConfig {
    pub fn exact(mut self) -> Self {
        self.exact_chance = 1.0;
        self
    }
}

/// A uniform point of the simplex.
pub fn random_distribution<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = e.iter().sum();
    e.into_iter().map(|x| x / total).collect()
}

/// Lower bounds under a random distribution: each entry is scaled by an
/// independent factor in `[0, 1]`, with some entries forced to zero.
pub fn random_bound_vector<R: Rng + ?Sized>(rng: &mut R, n: usize, exact: bool) -> BoundVector {
    let p = random_distribution(rng, n);
    if exact {
        return BoundVector::new(p).expect("simplex point");
    }
    let lower = p
        .into_iter()
        .map(|x| if rng.gen_bool(0.15) { 0.0 } else { x * rng.gen::<f64>() })
        .collect();
    BoundVector::new(lower).expect("scaled simplex point")
}

/// Node `k` is named `N{k}` with outcomes `n{k}_0, n{k}_1, ...`; parents are
/// drawn from lower-numbered nodes, so the numbering is topological.
pub fn random_diagram<R: Rng + ?Sized>(rng: &mut R, cfg: &RandomDiagramConfig) -> InfluenceDiagram {
    let n = rng.gen_range(cfg.min_nodes..=cfg.max_nodes);
    let cards: Vec<usize> = (0..n).map(|_| rng.gen_range(cfg.min_outcomes..=cfg.max_outcomes)).collect();
    let mut nodes = Vec::with_capacity(n);
    for k in 0..n {
        let id = format!("N{k}");
        let mut candidates: Vec<usize> = (0..k).collect();
        candidates.shuffle(rng);
        let count = rng.gen_range(0..=cfg.max_parents.min(k));
        let mut parents: Vec<usize> = candidates.into_iter().take(count).collect();
        parents.shuffle(rng);
        let parent_cards: Vec<usize> = parents.iter().map(|&p| cards[p]).collect();
        let entries = (0..config_count(&parent_cards))
            .map(|_| {
                let exact = rng.gen_bool(cfg.exact_chance);
                random_bound_vector(rng, cards[k], exact)
            })
            .collect();
        let space = OutcomeSpace::new(id.clone(), (0..cards[k]).map(|i| format!("n{k}_{i}"))).unwrap();
        let table = LowerBoundTable::new(
            id,
            parents.iter().map(|p| format!("N{p}")).collect(),
            parent_cards,
            entries,
        )
        .unwrap();
        nodes.push((space, table));
    }
    if cfg.shuffle_declaration {
        nodes.shuffle(rng);
    }
    InfluenceDiagram::new(nodes).expect("generated diagrams are valid")
}

/// `Y -> X` with the given outcome counts.
pub fn random_two_node<R: Rng + ?Sized>(rng: &mut R, ny: usize, nx: usize) -> InfluenceDiagram {
    let y = OutcomeSpace::new("Y", (1..=ny).map(|i| format!("y{i}"))).unwrap();
    let x = OutcomeSpace::new("X", (1..=nx).map(|i| format!("x{i}"))).unwrap();
    let ty = LowerBoundTable::root("Y", random_bound_vector(rng, ny, false));
    let entries = (0..ny).map(|_| random_bound_vector(rng, nx, false)).collect();
    let tx = LowerBoundTable::new("X", vec!["Y".into()], vec![ny], entries).unwrap();
    InfluenceDiagram::new(vec![(y, ty), (x, tx)]).unwrap()
}
