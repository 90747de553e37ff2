mod common;

use common::{assert_close, bv, diagram, two_node};
use interval_influence::generate::{random_diagram, RandomDiagramConfig};
use interval_influence::oracle::{
    brute_force_interval, brute_force_interval_capped, joint_from_assignment, joint_from_distributions,
    point_family, vertex_combinations, vertex_distributions, VertexAssignment,
};
use interval_influence::{BoundVector, Error, ParentConfig, Query};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn single_root_joint_is_the_vertex() {
    let d = diagram(&[("A", 3, &[], vec![vec![0.2, 0.1, 0.4]])]);
    for i in 0..3 {
        let joint = joint_from_assignment(&d, &VertexAssignment { choices: vec![vec![i]] }).unwrap();
        assert_eq!(joint.probs, vertex_distributions(&bv(&[0.2, 0.1, 0.4]))[i]);
    }
}

#[test]
fn exact_diagrams_have_one_joint() {
    let d = diagram(&[("A", 2, &[], vec![vec![0.3, 0.7]]), ("B", 2, &["A"], vec![vec![0.9, 0.1], vec![0.4, 0.6]])]);
    assert_eq!(vertex_combinations(&d), 1);
    let joint = joint_from_assignment(&d, &VertexAssignment::uniform(&d, 2)).unwrap();
    assert_close(&joint.probs, &[0.27, 0.03, 0.28, 0.42], 1e-15);
    let iv = brute_force_interval(&d, &Query::marginal("A").given("B", "b1")).unwrap();
    assert!((iv[0].lo - 0.27 / 0.55).abs() < 1e-15 && iv[0].width() == 0.0);
}

#[test]
fn incomplete_assignments_are_rejected() {
    let d = two_node();
    let va = VertexAssignment { choices: vec![vec![0]] };
    assert!(matches!(joint_from_assignment(&d, &va), Err(Error::IncompleteAssignment(_))));
    let va = VertexAssignment { choices: vec![vec![0], vec![0, 0]] };
    assert!(matches!(joint_from_assignment(&d, &va), Err(Error::IncompleteAssignment(_))));
    let va = VertexAssignment { choices: vec![vec![7], vec![0, 0, 0]] };
    assert!(matches!(joint_from_assignment(&d, &va), Err(Error::IncompleteAssignment(_))));
}

#[test]
fn assignment_lookup_by_context() {
    let d = two_node();
    let va = VertexAssignment { choices: vec![vec![1], vec![0, 2, 0]] };
    assert_eq!(va.choice(&d, "X", &ParentConfig(vec![1])), Some(2));
    assert_eq!(va.choice(&d, "Y", &ParentConfig::root()), Some(1));
    assert_eq!(va.choice(&d, "X", &ParentConfig(vec![5])), None);
}

#[test]
fn cap_is_enforced() {
    let d = two_node();
    // Y has 3 vertices, X|y1 3, X|y2 3, X|y3 1
    assert_eq!(vertex_combinations(&d), 27);
    match brute_force_interval_capped(&d, &Query::marginal("X"), 26) {
        Err(Error::Capacity { combinations, cap }) => assert_eq!((combinations, cap), (27, 26)),
        other => panic!("expected capacity error, got {other:?}"),
    }
}

#[test]
fn impossible_evidence_gives_vacuous_intervals() {
    let d = diagram(&[("A", 2, &[], vec![vec![0.2, 0.3]]), ("B", 2, &["A"], vec![vec![0.0, 1.0], vec![0.0, 1.0]])]);
    let iv = brute_force_interval(&d, &Query::marginal("A").given("B", "b1")).unwrap();
    assert!(iv.iter().all(|i| i.lo == 0.0 && i.hi == 1.0));
}

#[test]
fn joints_of_random_diagrams_sum_to_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        let d = random_diagram(&mut rng, &RandomDiagramConfig::default());
        for i in 0..3 {
            let joint = joint_from_assignment(&d, &VertexAssignment::uniform(&d, i)).unwrap();
            assert!((joint.total() - 1.0).abs() < 1e-12);
        }
        let exact = random_diagram(&mut rng, &RandomDiagramConfig::default().exact());
        let joint = joint_from_distributions(&exact, &point_family(&exact)).unwrap();
        assert!((joint.total() - 1.0).abs() < 1e-12);
    }
}

fn bound_vector() -> impl Strategy<Value = BoundVector> {
    (2usize..=5).prop_flat_map(|n| {
        (prop::collection::vec(0.001f64..1.0, n), prop::collection::vec(0.0f64..=1.0, n)).prop_map(|(w, s)| {
            let total: f64 = w.iter().sum();
            BoundVector::new(w.iter().zip(&s).map(|(wi, si)| wi / total * si).collect()).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn vertices_are_valid_distributions(b in bound_vector()) {
        let verts = vertex_distributions(&b);
        prop_assert!(!verts.is_empty() && verts.len() <= b.len());
        for v in &verts {
            prop_assert!((v.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            for (p, l) in v.iter().zip(b.lower()) {
                prop_assert!(*p >= l - 1e-15);
            }
        }
    }

    #[test]
    fn upper_bound_is_attained_by_a_vertex(b in bound_vector()) {
        let verts = vertex_distributions(&b);
        for (i, u) in b.upper_bounds().iter().enumerate() {
            prop_assert!(verts.iter().any(|v| (v[i] - u).abs() < 1e-12));
        }
    }

    #[test]
    fn range_identity(b in bound_vector()) {
        let r = b.range();
        for (u, l) in b.upper_bounds().iter().zip(b.lower()) {
            prop_assert!((u - l - r).abs() < 1e-15);
        }
    }
}
