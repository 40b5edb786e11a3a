//! Densest subhypergraph, copy counts and relabeling invariance against
//! brute-force oracles.

mod common;

use hyperspectra::hypercore::{automorphism_count, count_copies, max_density};
use hyperspectra::{Hypergraph, Limits};
use proptest::prelude::*;

fn arb_perm(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

fn small_patterns() -> Vec<Hypergraph> {
    vec![
        Hypergraph::single_edge(2).unwrap(),
        Hypergraph::complete(2, 3).unwrap(),
        Hypergraph::loose_path(2, 2).unwrap(),
        Hypergraph::loose_cycle(2, 4).unwrap(),
        Hypergraph::single_edge(3).unwrap(),
        Hypergraph::loose_path(3, 2).unwrap(),
        Hypergraph::new(3, 4, vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3]]).unwrap(),
    ]
}

proptest! {
    #[test]
    fn max_density_matches_subset_enumeration(g in common::arb_hypergraph(2..=4, 1, 9)) {
        let best = max_density(&g);
        prop_assert_eq!(&best.density, &common::brute_max_density(&g));
        // the witness attains the reported value
        let mut inside = vec![false; g.n()];
        for &v in &best.witness {
            inside[v] = true;
        }
        if !best.witness.is_empty() {
            let d = hyperspectra::Rational::new(g.edges_within(&inside) as i64, best.witness.len() as i64);
            prop_assert_eq!(d, best.density);
        }
    }

    #[test]
    fn copies_times_automorphisms_count_embeddings(
        idx in 0usize..7,
        host in common::arb_hypergraph(2..=3, 3, 7),
    ) {
        let limits = Limits::default();
        let pattern = &small_patterns()[idx];
        prop_assume!(pattern.s() == host.s() && pattern.n() <= host.n());
        let copies = count_copies(&host, pattern, &limits).unwrap();
        let aut = automorphism_count(pattern, &limits).unwrap();
        prop_assert_eq!(copies * aut, common::brute_embeddings(pattern, &host));
    }

    #[test]
    fn invariants_survive_relabeling(
        (g, perm) in common::arb_hypergraph(2..=3, 1, 8).prop_flat_map(|g| {
            let n = g.n();
            (Just(g), arb_perm(n))
        }),
    ) {
        let limits = Limits::default();
        let h = g.relabel(&perm).unwrap();
        prop_assert_eq!(h.edge_count(), g.edge_count());
        prop_assert_eq!(max_density(&h).density, max_density(&g).density);
        prop_assert_eq!(automorphism_count(&h, &limits).unwrap(), automorphism_count(&g, &limits).unwrap());
        prop_assert_eq!(h.is_strictly_balanced().ok(), g.is_strictly_balanced().ok());
        for pattern in small_patterns().iter().filter(|p| p.s() == g.s() && p.n() <= g.n()) {
            prop_assert_eq!(
                count_copies(&h, pattern, &limits).unwrap(),
                count_copies(&g, pattern, &limits).unwrap()
            );
        }
    }

    #[test]
    fn json_round_trip(g in common::arb_hypergraph(2..=4, 1, 8)) {
        let back = Hypergraph::from_json_value(&g.to_json_value()).unwrap();
        prop_assert_eq!(back, g);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn max_density_matches_enumeration_up_to_twelve_vertices(g in common::arb_hypergraph(3..=4, 10, 12)) {
        prop_assert_eq!(max_density(&g).density, common::brute_max_density(&g));
    }

    #[test]
    fn density_is_at_most_max_density(g in common::arb_hypergraph(2..=4, 1, 9)) {
        let best = max_density(&g).density;
        prop_assert!(g.density() <= best);
        if g.is_strictly_balanced().unwrap_or(false) {
            prop_assert_eq!(g.density(), best);
        }
    }

    #[test]
    fn induced_subhypergraphs(g in common::arb_hypergraph(2..=3, 1, 8), mask in 1u32..256) {
        prop_assert_eq!(&g.induced(&(0..g.n()).collect::<Vec<_>>()).unwrap(), &g);
        let w: Vec<usize> = (0..g.n()).filter(|&v| mask >> v & 1 == 1).collect();
        prop_assume!(!w.is_empty());
        let sub = g.induced(&w).unwrap();
        for e in sub.edges() {
            prop_assert!(g.has_edge(&e.iter().map(|&i| w[i]).collect::<Vec<_>>()));
        }
        let inside: Vec<bool> = (0..g.n()).map(|v| w.contains(&v)).collect();
        prop_assert_eq!(sub.edge_count(), g.edges_within(&inside));
    }

    #[test]
    fn distances_form_a_metric(g in common::arb_hypergraph(2..=3, 1, 8)) {
        let d = g.distance_matrix();
        let n = g.n();
        for x in 0..n {
            prop_assert_eq!(d[x][x], Some(0));
            for y in 0..n {
                prop_assert_eq!(d[x][y], d[y][x]);
                for z in 0..n {
                    if let (Some(a), Some(b)) = (d[x][y], d[y][z]) {
                        prop_assert!(d[x][z].is_some_and(|c| c <= a + b));
                    }
                }
            }
        }
    }
}
