//! Reversing `Y -> X` yields bounds on `p(y | x)` for every observed `x`.

use interval_influence::{load_diagram, reverse_arc, ParentConfig};

fn main() -> interval_influence::Result<()> {
    let d = load_diagram(concat!(env!("CARGO_MANIFEST_DIR"), "/data/two_node.json"))?;
    let reversed = reverse_arc(&d, "Y", "X")?;
    println!("Y now has parents {:?}, X has {:?}", reversed.parents("Y")?, reversed.parents("X")?);

    let ys = d.space("Y")?.outcomes();
    let table = reversed.table("Y")?;
    for (i, x) in d.space("X")?.outcomes().iter().enumerate() {
        let given = table.get(&ParentConfig(vec![i])).unwrap();
        let shown: Vec<String> = ys.iter().zip(given.intervals()).map(|(y, iv)| format!("{y} {iv}")).collect();
        println!("given {x}: {}", shown.join("  "));
    }

    // X's new root table is the marginal
    println!("p(X) lower bounds {:?}", reversed.table("X")?.entries()[0].lower());
    Ok(())
}
