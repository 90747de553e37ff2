//! Removing `Y` from `Y -> X` leaves the interval marginal of `X`.

use interval_influence::{load_diagram, marginal_lower_bounds, remove_node};

fn main() -> interval_influence::Result<()> {
    let d = load_diagram(concat!(env!("CARGO_MANIFEST_DIR"), "/data/two_node.json"))?;
    let x = d.space("X")?.clone();

    // the two-node formula directly on the tables
    let bounds = marginal_lower_bounds(d.table("X")?.entries(), &d.table("Y")?.entries()[0])?;
    println!("b(x) = {:?}", bounds.lower());

    // the same thing as a diagram transformation
    let reduced = remove_node(&d, "Y")?;
    let table = reduced.table("X")?;
    assert!(table.parents().is_empty());
    for (o, iv) in x.outcomes().iter().zip(table.entries()[0].intervals()) {
        println!("p({o}) in {iv}");
    }
    println!("range {:.4}", table.entries()[0].range());
    Ok(())
}
