//! Game solver against the unmemoized reference, plus structural laws.

mod common;

use hyperspectra::efgame::{solve, solve_reference, verify_strategy, MirrorStrategy, Winner};
use hyperspectra::{Hypergraph, Limits};
use proptest::prelude::*;

fn boards() -> impl Strategy<Value = (Hypergraph, Hypergraph)> {
    (2usize..=3).prop_flat_map(|s| (common::arb_hypergraph(s..=s, 1, 5), common::arb_hypergraph(s..=s, 1, 5)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn solve_matches_reference((g1, g2) in boards(), k in 0usize..=3) {
        prop_assert_eq!(solve(&g1, &g2, k, &Limits::default()).unwrap(), solve_reference(&g1, &g2, k));
    }

    #[test]
    fn winner_is_symmetric((g1, g2) in boards(), k in 0usize..=3) {
        let limits = Limits::default();
        prop_assert_eq!(solve(&g1, &g2, k, &limits).unwrap(), solve(&g2, &g1, k, &limits).unwrap());
    }

    #[test]
    fn spoiler_wins_persist_with_more_rounds((g1, g2) in boards(), k in 0usize..=2) {
        let limits = Limits::default();
        if solve(&g1, &g2, k, &limits).unwrap() == Winner::Spoiler {
            prop_assert_eq!(solve(&g1, &g2, k + 1, &limits).unwrap(), Winner::Spoiler);
        }
    }

    #[test]
    fn isomorphic_boards_are_duplicator_wins(
        (g, perm) in common::arb_hypergraph(2..=3, 1, 5).prop_flat_map(|g| {
            let n = g.n();
            (Just(g), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
        }),
        k in 0usize..=3,
    ) {
        let limits = Limits::default();
        let h = g.relabel(&perm).unwrap();
        prop_assert_eq!(solve(&g, &h, k, &limits).unwrap(), Winner::Duplicator);
        prop_assert!(verify_strategy(&g, &g, k, &MirrorStrategy, &limits).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn winning_strategies_imply_duplicator_wins((g1, g2) in boards(), k in 0usize..=3) {
        use hyperspectra::efgame::{ConstantStrategy, ExtensionStrategy, OptimalStrategy, Strategy};
        let limits = Limits::default();
        let optimal = OptimalStrategy::new(&limits);
        let strategies: [&dyn Strategy; 4] = [&MirrorStrategy, &ExtensionStrategy, &ConstantStrategy(0), &optimal];
        let winner = solve(&g1, &g2, k, &limits).unwrap();
        for strat in strategies {
            if verify_strategy(&g1, &g2, k, strat, &limits).unwrap() {
                prop_assert_eq!(winner, Winner::Duplicator);
            }
        }
        // the optimal strategy wins exactly when Duplicator does
        prop_assert_eq!(verify_strategy(&g1, &g2, k, &optimal, &limits).unwrap(), winner == Winner::Duplicator);
    }
}
