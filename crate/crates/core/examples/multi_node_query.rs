//! Builds a small diagram in code, then asks a few queries and prints the
//! transformation plan behind each answer.

use interval_influence::{answer, BoundVector, InfluenceDiagram, LowerBoundTable, OutcomeSpace, Query};

fn bv(v: &[f64]) -> BoundVector {
    BoundVector::new(v.to_vec()).unwrap()
}

fn main() -> interval_influence::Result<()> {
    // Season -> Rain -> Wet <- Sprinkler <- Season
    let space = |id: &str, o: &[&str]| OutcomeSpace::new(id, o.iter().copied()).unwrap();
    let d = InfluenceDiagram::new(vec![
        (space("Season", &["dry", "wet"]), LowerBoundTable::root("Season", bv(&[0.5, 0.3]))),
        (
            space("Rain", &["yes", "no"]),
            LowerBoundTable::new("Rain", vec!["Season".into()], vec![2], vec![bv(&[0.1, 0.8]), bv(&[0.6, 0.2])])?,
        ),
        (
            space("Sprinkler", &["on", "off"]),
            LowerBoundTable::new("Sprinkler", vec!["Season".into()], vec![2], vec![bv(&[0.5, 0.3]), bv(&[0.0, 0.9])])?,
        ),
        (
            space("Wet", &["yes", "no"]),
            LowerBoundTable::new(
                "Wet",
                vec!["Rain".into(), "Sprinkler".into()],
                vec![2, 2],
                vec![bv(&[0.95, 0.0]), bv(&[0.8, 0.1]), bv(&[0.85, 0.05]), bv(&[0.0, 0.95])],
            )?,
        ),
    ])?;

    let queries = [
        Query::marginal("Wet"),
        Query::marginal("Rain").given("Wet", "yes"),
        Query::marginal("Season").given("Wet", "yes").given("Sprinkler", "off"),
    ];
    for q in &queries {
        let r = answer(&d, q)?;
        let plan: Vec<String> = r.transform_log.iter().map(ToString::to_string).collect();
        println!("{q:?}");
        println!("  plan: {}", plan.join(", "));
        for (o, iv) in r.outcomes.iter().zip(&r.intervals) {
            println!("  {o:>4} {iv}");
        }
        println!("  range {:.4}", r.range);
    }
    Ok(())
}
