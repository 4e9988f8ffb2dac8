use liex::rational::{q, qf};
use liex::search::{connectivity_matrix, explore, find_connection, replay, Mode, SearchConfig, Stage};
use liex::AlgebraClass;

fn subalgebra(order: usize) -> SearchConfig {
    SearchConfig::new(order, &[Mode::Subalgebra])
}

#[test]
fn connections_run_both_ways() {
    let (a21, a33) = (AlgebraClass::A21A1, AlgebraClass::A33);
    let forward = find_connection(&a21.tensor(), &a33, &subalgebra(3)).unwrap();
    let backward = find_connection(&a33.tensor(), &a21, &subalgebra(2)).unwrap();
    assert!(forward.found() && backward.found());
    for w in forward.witnesses.iter().take(5) {
        assert!(replay(&a21.tensor(), w).unwrap());
    }
    for w in backward.witnesses.iter().take(5) {
        assert!(replay(&a33.tensor(), w).unwrap());
    }
}

#[test]
fn figure_edges() {
    let labels = [AlgebraClass::Sl2R, AlgebraClass::A21A1, AlgebraClass::A33];
    let g = connectivity_matrix(&labels, &subalgebra(3)).unwrap();
    assert!(g.found(&AlgebraClass::Sl2R, &AlgebraClass::A21A1));
    assert!(g.found(&AlgebraClass::Sl2R, &AlgebraClass::A33));
    assert!(g.found(&AlgebraClass::A21A1, &AlgebraClass::A33));
    assert!(g.found(&AlgebraClass::A33, &AlgebraClass::A21A1));
    let dot = g.to_dot();
    assert!(dot.contains("\"sl2R\" -> \"A3.3\""));
    let json = g.to_json();
    assert_eq!(json["edges"].as_array().unwrap().len(), 9);
}

#[test]
fn single_label_is_diagonal() {
    let g = connectivity_matrix(&[AlgebraClass::A31], &subalgebra(1)).unwrap();
    assert_eq!(g.edges.len(), 1);
    assert!(g.found(&AlgebraClass::A31, &AlgebraClass::A31));
}

#[test]
fn searches_are_deterministic() {
    let src = AlgebraClass::Sl2R.tensor();
    let config = SearchConfig::new(2, &Mode::ALL);
    let a = find_connection(&src, &AlgebraClass::A21A1, &config).unwrap();
    let b = find_connection(&src, &AlgebraClass::A21A1, &config).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.to_json(), b.to_json());
}

/// The order-3 subalgebra search from sl(2,R) reaches A3.2 through the
/// monoid {0, n, 1} with n² = 0.
#[test]
fn sl2_reaches_a32_at_order_three() {
    let src = AlgebraClass::Sl2R.tensor();
    let report = find_connection(&src, &AlgebraClass::A32, &subalgebra(3)).unwrap();
    let w = report
        .witnesses
        .iter()
        .find(|w| matches!(w.stage, Stage::Subalgebra { .. }))
        .expect("an A3.2 subalgebra");
    assert!(replay(&src, w).unwrap());
    assert_eq!(w.semigroup.to_one_based(), vec![vec![1, 1, 1], vec![1, 1, 2], vec![1, 2, 3]]);
}

#[test]
fn so3_reaches_no_listed_solvable_class() {
    let config = SearchConfig::new(3, &[Mode::Subalgebra, Mode::ZeroReduce]);
    let ex = explore(&AlgebraClass::So3.tensor(), &config).unwrap();
    let targets = [
        AlgebraClass::A32,
        AlgebraClass::A34(qf(1, 2)),
        AlgebraClass::A35(q(1)),
    ];
    assert!(ex.witnesses.iter().all(|w| !targets.contains(&w.class)));
    assert!(ex.space_size > 0);
}
