#![allow(dead_code)]

use interval_influence::{BoundVector, InfluenceDiagram, LowerBoundTable, OutcomeSpace};

pub const TWO_NODE_PATH: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/two_node.json");

pub fn two_node() -> InfluenceDiagram {
    interval_influence::load_diagram(TWO_NODE_PATH).unwrap()
}

pub fn bv(v: &[f64]) -> BoundVector {
    BoundVector::new(v.to_vec()).unwrap()
}

pub fn assert_close(got: &[f64], want: &[f64], tol: f64) {
    assert_eq!(got.len(), want.len(), "got {got:?}, want {want:?}");
    for (g, w) in got.iter().zip(want) {
        assert!((g - w).abs() <= tol, "got {got:?}, want {want:?} (tol {tol})");
    }
}

/// Builds a diagram from `(id, outcomes, parents, entries)` rows; parent
/// outcome counts are looked up from earlier rows.
/// `(id, outcome count, parents, one bound vector per context)`
pub type Row<'a> = (&'a str, usize, &'a [&'a str], Vec<Vec<f64>>);

pub fn diagram(rows: &[Row]) -> InfluenceDiagram {
    let cards = |id: &str| rows.iter().find(|r| r.0 == id).unwrap().1;
    let nodes = rows
        .iter()
        .map(|(id, n, parents, entries)| {
            let space = OutcomeSpace::new(*id, (1..=*n).map(|i| format!("{}{i}", id.to_lowercase()))).unwrap();
            let table = LowerBoundTable::new(
                *id,
                parents.iter().map(|p| p.to_string()).collect(),
                parents.iter().map(|p| cards(p)).collect(),
                entries.iter().map(|e| bv(e)).collect(),
            )
            .unwrap();
            (space, table)
        })
        .collect();
    InfluenceDiagram::new(nodes).unwrap()
}
