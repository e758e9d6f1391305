use proptest::prelude::*;

use turan_core::constructions::{build_conjectured, build_g1, build_g2};
use turan_core::formulas::bet_value;
use turan_core::harness::sorted_size_vectors;
use turan_core::packing::{find_clique_packing, is_kkt_free};
use turan_core::solver::{
    exact_extremal, verify_point, ExtremalRecord, FormulaName, SearchBudget, Solver, SolverConfig, Status,
};
use turan_core::PartSizes;

fn budget() -> SearchBudget {
    SearchBudget::nodes(50_000_000)
}

fn all_size_vectors(max_total: usize) -> Vec<PartSizes> {
    (1..=max_total)
        .flat_map(|r| sorted_size_vectors(r, 1..=max_total, max_total))
        .map(|v| PartSizes::new(v).unwrap())
        .collect()
}

#[test]
fn bet_holds_without_size_conditions() {
    for ns in all_size_vectors(11) {
        for t in [3, 4] {
            let rec = verify_point(&ns, t, 1, &budget()).unwrap();
            assert_eq!(rec.exact_value, bet_value(&ns, t).ok().map(|f| f.value), "{ns} t={t}");
            assert_eq!(rec.status, Status::MatchesFormula { formula: FormulaName::Bet });
        }
    }
}

// The matching formula needs k-1 vertices in the smallest part for its star
// and enough vertices that a k-matching is possible at all.
#[test]
fn matching_formula_in_its_regime() {
    for ns in all_size_vectors(10).into_iter().filter(|ns| ns.r() >= 2) {
        for k in 1..=3 {
            let min = *ns.sizes().iter().min().unwrap();
            let rec = verify_point(&ns, 2, k, &budget()).unwrap();
            if min + 1 >= k && ns.total() > 2 * k {
                assert_eq!(rec.status, Status::MatchesFormula { formula: FormulaName::Matching }, "{ns} k={k}");
            }
        }
    }
}

#[test]
fn witnesses_are_sound_and_dominate_constructions() {
    for ns in all_size_vectors(9).into_iter().filter(|ns| ns.r() >= 3 && ns.r() <= 5) {
        for (t, k) in [(3, 1), (3, 2), (4, 2), (2, 3)] {
            let rec = exact_extremal(&ns, t, k, &budget()).unwrap();
            let exact = rec.exact_value.expect("small points finish");
            assert!(is_kkt_free(&rec.witness, k, t), "{ns} t={t} k={k}");
            assert_eq!(rec.witness.edge_count(), exact);
            assert_eq!(rec.witness.parts(), &ns);
            if let Ok(c) = build_conjectured(&ns, t, k, None) {
                assert!(exact >= c.graph.edge_count(), "{ns} t={t} k={k}");
            }
            if ns.r() == 4 && t == 3 {
                for c in [build_g1(&ns, k), build_g2(&ns, k)].into_iter().flatten() {
                    assert!(exact >= c.graph.edge_count());
                }
            }
        }
    }
}

#[test]
fn construction_seed_does_not_change_values() {
    let unseeded = Solver::new(SolverConfig {
        seed_with_constructions: false,
        ..Default::default()
    });
    for sizes in [[3, 3, 2, 2], [4, 2, 2, 1], [2, 2, 2, 2]] {
        let ns = PartSizes::new(sizes.to_vec()).unwrap();
        let seeded = exact_extremal(&ns, 3, 2, &budget()).unwrap();
        let c = build_conjectured(&ns, 3, 2, None).unwrap();
        let hinted = unseeded
            .exact_extremal(
                &ns,
                3,
                2,
                &SearchBudget {
                    initial_incumbent: Some(c.graph.edge_count()),
                    ..budget()
                },
            )
            .unwrap();
        let plain = unseeded.exact_extremal(&ns, 3, 2, &budget()).unwrap();
        assert_eq!(seeded.exact_value, plain.exact_value);
        assert_eq!(hinted.exact_value, plain.exact_value);
        assert!(seeded.nodes_explored <= plain.nodes_explored);
    }
}

#[test]
fn node_budget_is_deterministic() {
    let ns = PartSizes::new(vec![3, 3, 3, 3]).unwrap();
    let b = SearchBudget::nodes(200);
    let a = exact_extremal(&ns, 3, 2, &b).unwrap();
    let c = exact_extremal(&ns, 3, 2, &b).unwrap();
    assert_eq!(a.best_value, c.best_value);
    assert_eq!(a.witness, c.witness);
    assert_eq!(a.nodes_explored, c.nodes_explored);
}

#[test]
fn conjectured_graphs_are_free() {
    for ns in all_size_vectors(14).into_iter().filter(|ns| ns.r() >= 3 && ns.r() <= 6) {
        for t in 3..=ns.r().min(4) {
            for k in 1..=3 {
                if let Ok(c) = build_conjectured(&ns, t, k, None) {
                    assert!(is_kkt_free(&c.graph, k, t), "{ns} t={t} k={k}");
                }
            }
        }
    }
}

#[test]
fn g1_holds_k_minus_one_triangles() {
    for sizes in sorted_size_vectors(4, 1..=6, 24) {
        for k in 2..=4 {
            if sizes[1] + 1 < k || sizes[3] + 1 < k {
                continue;
            }
            let ns = PartSizes::new(sizes.clone()).unwrap();
            let g = build_g1(&ns, k).unwrap().graph;
            let w = find_clique_packing(&g, k - 1, 3).unwrap_or_else(|| panic!("{ns} k={k}"));
            assert!(w.verify(&g, k - 1, 3));
        }
    }
}

#[test]
fn record_json_round_trip() {
    let ns = PartSizes::new(vec![2, 2, 2, 2]).unwrap();
    let rec = verify_point(&ns, 3, 2, &budget()).unwrap();
    let back: ExtremalRecord = serde_json::from_str(&serde_json::to_string(&rec).unwrap()).unwrap();
    assert_eq!(back, rec);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn permuting_parts_keeps_the_value(sizes in prop::collection::vec(1usize..=3, 3..=4), t in 2usize..=3, k in 1usize..=2, rot in 0usize..4) {
        let ns = PartSizes::new(sizes.clone()).unwrap();
        let mut perm = sizes;
        let len = perm.len();
        perm.rotate_left(rot % len);
        perm.swap(0, 1);
        let pn = PartSizes::new(perm).unwrap();
        let a = exact_extremal(&ns, t, k, &budget()).unwrap();
        let b = exact_extremal(&pn, t, k, &budget()).unwrap();
        prop_assert_eq!(a.exact_value, b.exact_value);
    }
}
