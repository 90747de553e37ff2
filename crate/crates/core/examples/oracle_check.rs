//! Engine intervals next to the exact credal-set ranges found by vertex
//! enumeration. Lower endpoints agree; upper endpoints can be looser.

use interval_influence::oracle::{brute_force_interval, vertex_combinations};
use interval_influence::{answer, load_diagram, Query};

fn main() -> interval_influence::Result<()> {
    let d = load_diagram(concat!(env!("CARGO_MANIFEST_DIR"), "/data/two_node.json"))?;
    println!("{} vertex assignments", vertex_combinations(&d));
    for q in [Query::marginal("X"), Query::marginal("Y").given("X", "x1")] {
        let engine = answer(&d, &q)?;
        let exact = brute_force_interval(&d, &q)?;
        println!("{q:?}");
        for ((o, e), x) in engine.outcomes.iter().zip(&engine.intervals).zip(&exact) {
            println!("  {o} engine {e} oracle {x} contained {}", e.encloses(x, 1e-9));
        }
    }
    Ok(())
}
