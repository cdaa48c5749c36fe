mod support;

use support::*;

#[test]
fn lattice_enumeration_matches_box_scan() {
    let points = lattice_vs_box(500, 7).unwrap();
    assert!(points > 500, "only {points} points enumerated");
}

#[test]
fn inertia_matches_characteristic_polynomial() {
    let singular = inertia_vs_charpoly(600, 11).unwrap();
    assert!(singular > 20, "only {singular} singular matrices drawn");
}

#[test]
fn series_ring_axioms() {
    ring_axioms(1000, 3).unwrap();
}

#[test]
fn cone_boundary_is_never_hit() {
    let checked = rho_boundary_never_attained(100, 40).unwrap();
    assert!(checked > 100);
}

#[test]
fn orderings_corpus_has_24_distinct_graphs() {
    let all = sigma237_orderings();
    assert_eq!(all.len(), 24);
    for (i, g) in all.iter().enumerate() {
        for h in &all[i + 1..] {
            assert_ne!(g.adjacency_rows(), h.adjacency_rows());
        }
    }
}
