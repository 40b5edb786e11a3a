//! Formula evaluation against a textbook evaluator, and parse/print
//! round trips.

mod common;

use std::collections::HashMap;

use hyperspectra::folio::{evaluate, parse, Assignment};
use hyperspectra::Limits;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #[test]
    fn evaluate_matches_naive(
        g in common::arb_hypergraph(2..=3, 1, 5),
        seed in any::<u64>(),
        depth in 1usize..=3,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = common::random_sentence(&mut rng, g.s(), depth);
        prop_assert!(f.quantifier_depth() <= depth);
        let fast = evaluate(&g, &f, &Assignment::new(), Limits::default().eval_budget).unwrap();
        prop_assert_eq!(fast, common::naive_eval(&g, &f, &mut HashMap::new()));
    }

    #[test]
    fn evaluation_commutes_with_isomorphism(
        (g, perm) in common::arb_hypergraph(2..=3, 2, 5).prop_flat_map(|g| {
            let n = g.n();
            (Just(g), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
        }),
        seed in any::<u64>(),
        depth in 0usize..=2,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut scope = vec!["v0".to_string(), "v1".to_string()];
        let f = common::random_formula(&mut rng, g.s(), depth, &mut scope, &mut 8);
        let mut a = Assignment::new();
        for v in &scope {
            a.insert(v.clone(), rng.gen_range(0..g.n()));
        }
        let moved: Assignment = a.iter().map(|(v, &x)| (v.clone(), perm[x])).collect();
        let h = g.relabel(&perm).unwrap();
        let budget = Limits::default().eval_budget;
        prop_assert_eq!(evaluate(&g, &f, &a, budget).unwrap(), evaluate(&h, &f, &moved, budget).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn parse_inverts_print(s in 2usize..=4, seed in any::<u64>(), depth in 0usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = common::random_sentence(&mut rng, s, depth);
        let text = f.to_string();
        let back = parse(&text, s).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn free_variables_are_read_from_the_assignment(
        g in common::arb_hypergraph(2..=2, 2, 5),
        x in 0usize..5,
        y in 0usize..5,
    ) {
        prop_assume!(x < g.n() && y < g.n());
        let f = parse("(N x y)", 2).unwrap();
        let mut a = Assignment::new();
        a.insert("x".into(), x);
        a.insert("y".into(), y);
        let got = evaluate(&g, &f, &a, Limits::default().eval_budget).unwrap();
        prop_assert_eq!(got, g.has_edge(&[x, y]));
    }
}
