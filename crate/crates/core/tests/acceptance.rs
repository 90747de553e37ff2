//! Acceptance criteria. Each test prints one `PASS`/`FAIL` line; run with
//! `cargo test --test acceptance -- --nocapture --test-threads 1` to see them
//! in order.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use interval_influence::experiments::{sweep, ConditionalSpec, SweepKind, SweepSpec};
use interval_influence::generate::{random_bound_vector, random_diagram, random_two_node, RandomDiagramConfig};
use interval_influence::oracle::{
    brute_force_batch, brute_force_interval, joint_from_distributions, point_family, sample_family,
    vertex_combinations, DEFAULT_CAP,
};
use interval_influence::transforms::{
    marginal_lower_bound_with_pivot, marginal_pivot, posterior_lower_bound_with_pivot, posterior_pivot,
};
use interval_influence::{answer, remove_node, reverse_arc, BoundVector, InfluenceDiagram, Query};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(n: u32, name: &str, pass: bool, detail: String) {
    let status = if pass { "PASS" } else { "FAIL" };
    println!("criterion {n} [{name}]: {status}: {detail}");
    assert!(pass, "criterion {n} [{name}] failed: {detail}");
}

/// Every target, alone and given each single observation.
fn all_queries(d: &InfluenceDiagram) -> Vec<Query> {
    let mut out = Vec::new();
    for t in d.ids() {
        out.push(Query::marginal(t));
        for e in d.ids().filter(|e| *e != t) {
            for o in d.space(e).unwrap().outcomes() {
                out.push(Query::marginal(t).given(e, o.clone()));
            }
        }
    }
    out
}

#[derive(Default)]
struct Worst {
    value: f64,
    at: String,
}

impl Worst {
    fn note(&mut self, v: f64, at: impl FnOnce() -> String) {
        if v > self.value {
            self.value = v;
            self.at = at();
        }
    }
}

#[test]
fn criterion_1_worked_example_golden_values() {
    let start = Instant::now();
    let run = |args: &[&str]| {
        let o = Command::new(env!("CARGO_BIN_EXE_interval-id")).args(args).output().unwrap();
        assert_eq!(o.status.code(), Some(0));
        String::from_utf8(o.stdout).unwrap()
    };
    let marginal = run(&["query", common::TWO_NODE_PATH, "--target", "X"]);
    let posterior = run(&["query", common::TWO_NODE_PATH, "--target", "Y", "--evidence", "X=x1"]);
    let elapsed = start.elapsed();

    let mut problems = Vec::new();
    let expected_marginal = [("x1", "0.1300", "0.5200"), ("x2", "0.0700", "0.4600"), ("x3", "0.4100", "0.8000")];
    for (line, (o, lo, hi)) in marginal.lines().zip(expected_marginal) {
        if line != format!("{o} {lo} {hi}") {
            problems.push(format!("X: got `{line}`, want `{o} {lo} {hi}`"));
        }
    }
    let expected_posterior = [("y1", 0.2000, 0.8839), ("y2", 0.0392, 0.7231), ("y3", 0.0769, 0.7608)];
    for (line, (o, lo, hi)) in posterior.lines().zip(expected_posterior) {
        let f: Vec<&str> = line.split_whitespace().collect();
        let (glo, ghi): (f64, f64) = (f[1].parse().unwrap(), f[2].parse().unwrap());
        if f[0] != o || (glo - lo).abs() > 5e-5 || (ghi - hi).abs() > 5e-5 {
            problems.push(format!("Y|x1: got `{line}`, want {o} {lo} {hi} within 5e-5"));
        }
    }
    // the library values at full precision, for the record
    let lib = answer(&common::two_node(), &Query::marginal("Y").given("X", "x1")).unwrap();
    let ok = problems.is_empty() && elapsed < Duration::from_secs(1);
    report(
        1,
        "worked example golden values",
        ok,
        format!(
            "6 marginal endpoints exact to 4 places, 6 posterior endpoints within 5e-5 (lowers {:?}); {} mismatches; {:.0?} (< 1 s) {}",
            lib.lower(),
            problems.len(),
            elapsed,
            problems.join("; ")
        ),
    );
}

#[test]
fn criterion_2_two_node_sharpness() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2002);
    let (mut compared, mut lower_bad, mut upper_bad) = (0usize, 0usize, 0usize);
    let (mut worst_lo, mut worst_hi) = (Worst::default(), Worst::default());
    let diagrams = 200;
    for k in 0..diagrams {
        let (ny, nx) = (rng.gen_range(2..=4), rng.gen_range(2..=4));
        let d = random_two_node(&mut rng, ny, nx);
        let mut qs = vec![Query::marginal("X")];
        for x in d.space("X").unwrap().outcomes() {
            qs.push(Query::marginal("Y").given("X", x.clone()));
        }
        let oracle = brute_force_batch(&d, &qs, DEFAULT_CAP).unwrap();
        for (q, o) in qs.iter().zip(&oracle) {
            let r = answer(&d, q).unwrap();
            for (i, (e, x)) in r.intervals.iter().zip(o).enumerate() {
                compared += 1;
                let (dlo, dhi) = ((e.lo - x.lo).abs(), (e.hi - x.hi).abs());
                lower_bad += (dlo > 1e-9) as usize;
                upper_bad += (dhi > 1e-9) as usize;
                worst_lo.note(dlo, || format!("diagram {k} {q:?} outcome {i}: engine {e} oracle {x}"));
                worst_hi.note(dhi, || format!("diagram {k} {q:?} outcome {i}: engine {e} oracle {x}"));
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = lower_bad == 0 && upper_bad == 0 && elapsed < Duration::from_secs(30);
    report(
        2,
        "two-node sharpness",
        ok,
        format!(
            "{diagrams} diagrams, {compared} intervals; lower endpoints off by > 1e-9: {lower_bad} (max {:.3e}); \
             upper endpoints off by > 1e-9: {upper_bad} (max {:.3e} at {}); {:.1?} (< 30 s)",
            worst_lo.value, worst_hi.value, worst_hi.at, elapsed
        ),
    );
}

#[test]
fn criterion_3_multi_node_containment() {
    // diagrams whose vertex product exceeds this are redrawn
    const ENUMERABLE: u128 = 20_000;
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3003);
    let (mut diagrams, mut redrawn, mut intervals, mut samples_checked) = (0usize, 0usize, 0usize, 0usize);
    let (mut oracle_bad, mut sample_bad) = (0usize, 0usize);
    let mut worst = Worst::default();
    let mut sizes = [0usize; 6];
    while diagrams < 100 {
        let d = random_diagram(&mut rng, &RandomDiagramConfig::default());
        if vertex_combinations(&d) > ENUMERABLE {
            redrawn += 1;
            continue;
        }
        diagrams += 1;
        sizes[d.len()] += 1;
        let qs = all_queries(&d);
        let results: Vec<_> = qs.iter().map(|q| answer(&d, q).unwrap()).collect();
        let oracle = brute_force_batch(&d, &qs, ENUMERABLE).unwrap();
        for ((q, r), o) in qs.iter().zip(&results).zip(&oracle) {
            for (e, x) in r.intervals.iter().zip(o) {
                intervals += 1;
                let excess = (e.lo - x.lo).max(x.hi - e.hi);
                if excess > 1e-9 {
                    oracle_bad += 1;
                }
                worst.note(excess, || format!("{q:?}: engine {e} oracle {x}"));
            }
        }
        for _ in 0..1000 {
            let seed: u64 = rng.gen();
            let joint = joint_from_distributions(&d, &sample_family(&d, seed)).unwrap();
            for (q, r) in qs.iter().zip(&results) {
                if let Some(p) = joint.query(&d, q).unwrap() {
                    for (iv, v) in r.intervals.iter().zip(&p) {
                        samples_checked += 1;
                        sample_bad += !iv.contains(*v, 1e-9) as usize;
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = oracle_bad == 0 && sample_bad == 0 && elapsed < Duration::from_secs(300);
    report(
        3,
        "multi-node containment",
        ok,
        format!(
            "{diagrams} diagrams (3/4/5 nodes: {}/{}/{}; {redrawn} redrawn above {ENUMERABLE} vertex combinations), \
             {intervals} oracle intervals, {oracle_bad} not contained (largest excess {:.3e}); \
             {samples_checked} sampled values, {sample_bad} outside; {:.1?} (< 300 s)",
            sizes[3], sizes[4], sizes[5], worst.value, elapsed
        ),
    );
}

/// Compares every entry of `node`'s table in `after` with the oracle's
/// infimum of `p(node | parents)` in `before`.
fn compare_table(
    before: &InfluenceDiagram,
    after: &InfluenceDiagram,
    node: &str,
    label: &str,
    findings: &mut Vec<String>,
    worst: &mut Worst,
) -> usize {
    let table = after.table(node).unwrap();
    let mut checked = 0;
    for (config, bounds) in table.configs().zip(table.entries()) {
        let mut q = Query::marginal(node);
        for (p, &v) in table.parents().iter().zip(&config) {
            q = q.given(p.clone(), before.space(p).unwrap().outcomes()[v].clone());
        }
        let oracle = brute_force_interval(before, &q).unwrap();
        for (i, (b, o)) in bounds.lower().iter().zip(&oracle).enumerate() {
            checked += 1;
            let gap = (b - o.lo).abs();
            worst.note(gap, || format!("{label}, {q:?} outcome {i}: recomputed {b} oracle {}", o.lo));
            if gap > 1e-9 {
                findings.push(format!("{label}, {q:?} outcome {i}: recomputed {b} oracle {}", o.lo));
            }
        }
    }
    checked
}

#[test]
fn criterion_4_per_component_minimality() {
    let mut rng = ChaCha8Rng::seed_from_u64(4004);
    let cfg = RandomDiagramConfig { min_nodes: 3, max_nodes: 3, max_parents: 2, ..Default::default() };
    let (mut diagrams, mut removals, mut reversals, mut entries) = (0usize, 0usize, 0usize, 0usize);
    let mut findings = Vec::new();
    let mut worst = Worst::default();
    while diagrams < 25 {
        let d = random_diagram(&mut rng, &cfg);
        let ids: Vec<String> = d.ids().map(String::from).collect();
        let mut used = false;
        for y in &ids {
            if let Ok(after) = remove_node(&d, y) {
                let x = d.children(y).unwrap()[0].to_string();
                entries += compare_table(&d, &after, &x, &format!("remove({y})"), &mut findings, &mut worst);
                removals += 1;
                used = true;
            }
            for x in d.children(y).unwrap() {
                if let Ok(after) = reverse_arc(&d, y, x) {
                    let label = format!("reverse({y}->{x})");
                    entries += compare_table(&d, &after, x, &label, &mut findings, &mut worst);
                    entries += compare_table(&d, &after, y, &label, &mut findings, &mut worst);
                    reversals += 1;
                    used = true;
                }
            }
        }
        diagrams += used as usize;
    }
    let ok = findings.is_empty();
    report(
        4,
        "per-component minimality",
        ok,
        format!(
            "{diagrams} three-node diagrams, {removals} removals, {reversals} reversals, {entries} recomputed bounds; \
             {} differ from the oracle infimum by > 1e-9 (max {:.3e}{}){}",
            findings.len(),
            worst.value,
            if worst.at.is_empty() { String::new() } else { format!(" at {}", worst.at) },
            if findings.is_empty() { String::new() } else { format!("; findings: {}", findings.join(" | ")) }
        ),
    );
}

#[test]
fn criterion_5_point_degeneration() {
    let mut rng = ChaCha8Rng::seed_from_u64(5005);
    let (mut values, mut worst_range) = (0usize, 0.0f64);
    let mut worst = Worst::default();
    let diagrams = 60;
    for _ in 0..diagrams {
        let d = random_diagram(&mut rng, &RandomDiagramConfig::default().exact());
        let joint = joint_from_distributions(&d, &point_family(&d)).unwrap();
        for q in all_queries(&d) {
            let r = answer(&d, &q).unwrap();
            worst_range = worst_range.max(r.range);
            let exact = joint.query(&d, &q).unwrap().expect("positive evidence");
            for (iv, p) in r.intervals.iter().zip(&exact) {
                values += 1;
                worst.note((iv.lo - p).abs().max((iv.hi - p).abs()), || format!("{q:?}: engine {iv} exact {p}"));
            }
        }
    }
    let ok = worst.value <= 1e-12 && worst_range <= 1e-12;
    report(
        5,
        "point degeneration",
        ok,
        format!(
            "{diagrams} exact diagrams, {values} values; max deviation from joint enumeration {:.3e} (<= 1e-12); \
             max output range {worst_range:.3e} (zero within 1e-12)",
            worst.value
        ),
    );
}

#[test]
fn criterion_6_removal_linearity() {
    let (a, b) = (0.8, 0.3);
    let slope = 1.0 - (f64::min(a, b) + f64::min(1.0 - a, 1.0 - b));
    let spec = SweepSpec {
        conditional: ConditionalSpec::Exact { x1_given_y1: a, x1_given_y2: b },
        ..SweepSpec::default_for(SweepKind::Removal, false)
    };
    let out = sweep(&spec).unwrap();
    let mut worst = 0.0f64;
    let mut by_range: Vec<(f64, f64)> = Vec::new();
    let (mut shared, mut spread) = (0usize, 0.0f64);
    for row in &out.rows {
        worst = worst.max((row.output_range - row.r_y * slope).abs());
        match by_range.iter().find(|(r, _)| *r == row.r_y) {
            Some((_, rx)) => {
                shared += 1;
                spread = spread.max((rx - row.output_range).abs());
            }
            None => by_range.push((row.r_y, row.output_range)),
        }
    }
    let ok = worst <= 1e-12 && spread <= 1e-12 && shared > 0 && out.skipped.is_empty();
    report(
        6,
        "removal linearity",
        ok,
        format!(
            "{} grid points over {} levels, slope {slope}; max |R_x - slope R_y| {worst:.3e} (<= 1e-12); \
             {shared} points share R_y with a lower level, max R_x spread across levels {spread:.3e} (<= 1e-12)",
            out.rows.len(),
            spec.b_y_grid.len()
        ),
    );
}

#[test]
fn criterion_7_bounded_dominance() {
    let mut compared = 0;
    let mut violations = Vec::new();
    for kind in [SweepKind::Reversal, SweepKind::Removal] {
        let exact = sweep(&SweepSpec::default_for(kind, false)).unwrap().rows;
        let bounded = sweep(&SweepSpec::default_for(kind, true)).unwrap().rows;
        for e in &exact {
            if let Some(b) = bounded.iter().find(|b| b.b_y == e.b_y && b.r_y == e.r_y) {
                compared += 1;
                if b.output_range < e.output_range {
                    violations.push(format!("{kind:?} b_y={} r_y={}: {} < {}", e.b_y, e.r_y, b.output_range, e.output_range));
                }
            }
        }
    }
    let ok = violations.is_empty() && compared > 0;
    report(
        7,
        "bounded dominance",
        ok,
        format!("{compared} shared grid points (reversal and removal), {} violations {}", violations.len(), violations.join("; ")),
    );
}

fn bv(v: &[f64]) -> BoundVector {
    BoundVector::new(v.to_vec()).unwrap()
}

/// Conditional tables where some outcome's lower bound, or its upper bound,
/// is shared by several values of the conditioning variable.
fn tied_instances(rng: &mut ChaCha8Rng) -> Vec<(Vec<BoundVector>, BoundVector)> {
    let mut out = vec![
        (vec![bv(&[0.2, 0.3]), bv(&[0.2, 0.5]), bv(&[0.4, 0.1])], bv(&[0.1, 0.2, 0.3])),
        (vec![bv(&[0.1, 0.1, 0.1]), bv(&[0.1, 0.1, 0.1]), bv(&[0.1, 0.1, 0.1])], bv(&[0.2, 0.2, 0.2])),
        (vec![bv(&[0.0, 0.5]), bv(&[0.0, 0.5]), bv(&[0.3, 0.0])], bv(&[0.25, 0.25, 0.0])),
        // equal ranges make the U(x|y) tie too
        (vec![bv(&[0.3, 0.2, 0.1]), bv(&[0.3, 0.1, 0.2]), bv(&[0.5, 0.1, 0.0])], bv(&[0.1, 0.3, 0.2])),
    ];
    for _ in 0..200 {
        let (ny, nx) = (rng.gen_range(2..=4), rng.gen_range(2..=4));
        let mut cond: Vec<BoundVector> = (0..ny).map(|_| random_bound_vector(rng, nx, false)).collect();
        // copy a row, or permute one within the same sum, to force ties
        let (i, j) = (rng.gen_range(0..ny), rng.gen_range(0..ny));
        if rng.gen_bool(0.5) {
            cond[j] = cond[i].clone();
        } else {
            let mut v = cond[i].lower().to_vec();
            v.reverse();
            cond[j] = BoundVector::new(v).unwrap();
        }
        out.push((cond, random_bound_vector(rng, ny, false)));
    }
    out
}

#[test]
fn criterion_8_tie_break_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(8008);
    let (mut marginal_ties, mut posterior_ties) = (0usize, 0usize);
    let mut worst = Worst::default();
    for (k, (cond, prior)) in tied_instances(&mut rng).iter().enumerate() {
        let nx = cond[0].len();
        for x in 0..nx {
            let chosen = marginal_pivot(cond, x);
            let reference = marginal_lower_bound_with_pivot(cond, prior, x, chosen);
            for y in 0..cond.len() {
                if y != chosen && cond[y][x] == cond[chosen][x] {
                    marginal_ties += 1;
                    let v = marginal_lower_bound_with_pivot(cond, prior, x, y);
                    worst.note((v - reference).abs(), || format!("instance {k} marginal x={x} pivot {y}"));
                }
            }
            for y in 0..cond.len() {
                let Some(chosen) = posterior_pivot(cond, x, y) else { continue };
                let reference = posterior_lower_bound_with_pivot(cond, prior, x, y, Some(chosen));
                for yi in (0..cond.len()).filter(|&yi| yi != y && yi != chosen) {
                    if cond[yi].upper(x) == cond[chosen].upper(x) {
                        posterior_ties += 1;
                        let v = posterior_lower_bound_with_pivot(cond, prior, x, y, Some(yi));
                        worst.note((v - reference).abs(), || format!("instance {k} posterior x={x} y={y} pivot {yi}"));
                    }
                }
            }
        }
    }
    let ok = worst.value <= 1e-15 && marginal_ties > 0 && posterior_ties > 0;
    report(
        8,
        "tie-break invariance",
        ok,
        format!(
            "{marginal_ties} alternative marginal pivots, {posterior_ties} alternative posterior pivots; \
             max difference {:.3e} (<= 1e-15){}",
            worst.value,
            if worst.at.is_empty() { String::new() } else { format!(" at {}", worst.at) }
        ),
    );
}
