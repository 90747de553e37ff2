//! Random diagrams: answers, oracle containment, and sampled members of the
//! credal set all checked against each other.
//!
//!     cargo run --release --example random_diagrams -- 42

use interval_influence::generate::{random_diagram, RandomDiagramConfig};
use interval_influence::oracle::{brute_force_batch, joint_from_distributions, sample_family, vertex_combinations};
use interval_influence::{answer, Query};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> interval_influence::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = loop {
        let d = random_diagram(&mut rng, &RandomDiagramConfig { min_nodes: 4, ..Default::default() });
        if vertex_combinations(&d) <= 100_000 {
            break d;
        }
    };
    println!("{}", d.to_json());

    let queries: Vec<Query> = d.ids().map(Query::marginal).collect();
    let oracle = brute_force_batch(&d, &queries, 100_000)?;
    for (q, exact) in queries.iter().zip(&oracle) {
        let r = answer(&d, q)?;
        let widest = r.intervals.iter().zip(exact).map(|(e, x)| e.width() - x.width()).fold(0.0, f64::max);
        println!("{}: range {:.4}, widest excess over oracle {widest:.4}", q.target, r.range);
    }

    let mut outside = 0;
    for _ in 0..200 {
        let joint = joint_from_distributions(&d, &sample_family(&d, rng.gen()))?;
        for q in &queries {
            let r = answer(&d, q)?;
            let p = joint.query(&d, q)?.unwrap();
            outside += r.intervals.iter().zip(&p).filter(|(iv, v)| !iv.contains(**v, 1e-9)).count();
        }
    }
    println!("sampled values outside the engine intervals: {outside}");
    Ok(())
}
