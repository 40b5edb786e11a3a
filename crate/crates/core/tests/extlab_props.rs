//! Pair classification, (K, T)-maximality and H_m membership against
//! direct enumeration.

mod common;

use hyperspectra::combinatorics::{for_each_combination, for_each_permutation};
use hyperspectra::extlab::{
    classify_pair, count_maximal_extensions, extensions, inverse_density_form, is_kt_maximal, m_decomposition, random_hm_member, strict_extensions,
    PairClass, RootedPair,
};
use hyperspectra::hypercore::max_density;
use hyperspectra::{Hypergraph, Limits, Rational};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arb_pair(max_n: usize) -> impl Strategy<Value = RootedPair> {
    common::arb_hypergraph(2..=3, 2, max_n)
        .prop_flat_map(|g| {
            let n = g.n();
            (Just(g), 0..n)
        })
        .prop_map(|(g, roots)| RootedPair::new(g, roots).unwrap())
}

fn arb_alpha() -> impl Strategy<Value = Rational> {
    (1i64..=12, 1i64..=6).prop_map(|(p, q)| Rational::new(p, q))
}

/// Edges of `G` inside `roots ∪ mask` that are not root edges.
fn rel_edges(pair: &RootedPair, mask: u64) -> usize {
    let l = pair.roots();
    pair.g()
        .edges()
        .iter()
        .filter(|e| e.iter().any(|&v| v >= l))
        .filter(|e| e.iter().all(|&v| v < l || mask >> (v - l) & 1 == 1))
        .count()
}

/// Classes whose definition holds, read directly off every intermediate K.
fn oracle_classes(pair: &RootedPair, alpha: &Rational) -> Vec<PairClass> {
    let v = pair.v_rel();
    let full = (1u64 << v) - 1;
    let e = rel_edges(pair, full);
    let f = |nv: usize, ne: usize| Rational::integer(nv as i64) - alpha * &Rational::integer(ne as i64);
    let k_over_h = |m: u64| f(m.count_ones() as usize, rel_edges(pair, m));
    let g_over_k = |m: u64| f(v - m.count_ones() as usize, e - rel_edges(pair, m));
    let mut out = Vec::new();
    if (1..=full).all(|m| k_over_h(m).is_positive()) {
        out.push(PairClass::Safe);
    }
    if (0..full).all(|m| g_over_k(m).is_negative()) {
        out.push(PairClass::Rigid);
    }
    if (1..full).all(|m| k_over_h(m).is_positive()) && g_over_k(0).is_zero() {
        out.push(PairClass::Neutral);
    }
    out
}

/// The docstring definition of (K, T)-maximality, by enumeration of every
/// injective placement.
fn brute_kt_maximal(host: &Hypergraph, gtilde: &[usize], htilde: &[usize], k: &RootedPair) -> bool {
    let (t, s) = (k.roots(), host.s());
    let kg = k.g();
    let mut maximal = true;
    for_each_combination(gtilde.len(), t, |idx| {
        let tt: Vec<usize> = idx.iter().map(|&i| gtilde[i]).collect();
        if tt.iter().all(|v| htilde.contains(v)) {
            return true;
        }
        let rest: Vec<usize> = gtilde.iter().copied().filter(|v| !tt.contains(v)).collect();
        let outside: Vec<usize> = (0..host.n()).filter(|v| !gtilde.contains(v)).collect();
        for_each_permutation(t, |perm| {
            let mut img: Vec<usize> = perm.iter().map(|&i| tt[i]).collect();
            place(host, kg, t, s, &outside, &rest, &mut img, &mut maximal);
            maximal
        });
        maximal
    });
    maximal
}

#[allow(clippy::too_many_arguments)]
fn place(host: &Hypergraph, kg: &Hypergraph, t: usize, s: usize, outside: &[usize], rest: &[usize], img: &mut Vec<usize>, maximal: &mut bool) {
    if !*maximal {
        return;
    }
    if img.len() == kg.n() {
        // strict: every s-set meeting a new vertex is an edge iff it is in K
        let mut strict = true;
        for_each_combination(kg.n(), s, |c| {
            if c.iter().any(|&v| v >= t) {
                let mapped: Vec<usize> = c.iter().map(|&v| img[v]).collect();
                strict = kg.has_edge(c) == host.has_edge(&mapped);
            }
            strict
        });
        if !strict {
            return;
        }
        let fresh = &img[t..];
        let pool: Vec<usize> = fresh.iter().chain(rest).copied().collect();
        let mut crossing = false;
        for_each_combination(pool.len(), s, |c| {
            let set: Vec<usize> = c.iter().map(|&i| pool[i]).collect();
            crossing = c.iter().any(|&i| i < fresh.len())
                && c.iter().any(|&i| i >= fresh.len())
                && host.has_edge(&set);
            !crossing
        });
        if !crossing {
            *maximal = false;
        }
        return;
    }
    for &c in outside {
        if !img.contains(&c) {
            img.push(c);
            place(host, kg, t, s, outside, rest, img, maximal);
            img.pop();
        }
    }
}

proptest! {
    #[test]
    fn classification_is_a_trichotomy(pair in arb_pair(7), alpha in arb_alpha()) {
        prop_assume!(pair.v_rel() >= 1);
        let got = classify_pair(&pair, &alpha, &Limits::default()).unwrap();
        let oracle = oracle_classes(&pair, &alpha);
        prop_assert!(oracle.len() <= 1, "classes overlap: {:?}", oracle);
        prop_assert_eq!(got.class, oracle.first().copied().unwrap_or(PairClass::None));
    }

    #[test]
    fn extensions_map_pair_edges_to_host_edges(
        host in common::arb_hypergraph(2..=2, 3, 7),
        pair_edges in proptest::collection::vec((0usize..4, 0usize..4), 1..4),
        strict in any::<bool>(),
    ) {
        let edges: Vec<Vec<usize>> = pair_edges.into_iter().filter(|(a, b)| a < b).map(|(a, b)| vec![a, b]).collect();
        let g = Hypergraph::new(2, 4, edges.clone()).unwrap();
        let pair = RootedPair::new(g, 1).unwrap();
        let found = extensions(&host, &[0], &pair, strict, &Limits::default()).unwrap();
        for img in &found {
            let full: Vec<usize> = std::iter::once(0).chain(img.iter().copied()).collect();
            for e in &edges {
                prop_assert!(host.has_edge(&[full[e[0]], full[e[1]]]));
            }
        }
    }

    #[test]
    fn kt_maximality_matches_enumeration(
        host in common::arb_hypergraph(2..=2, 4, 7),
        gsize in 2usize..=3,
        hsize in 1usize..=2,
        k_edges in proptest::collection::vec((0usize..3, 0usize..3), 1..4),
        t in 1usize..=2,
    ) {
        let gtilde: Vec<usize> = (0..gsize).collect();
        let htilde: Vec<usize> = (0..hsize.min(gsize)).collect();
        let edges: Vec<Vec<usize>> = k_edges
            .into_iter()
            .filter(|(a, b)| a < b && *b >= t)
            .map(|(a, b)| vec![a, b])
            .collect();
        let k = RootedPair::new(Hypergraph::new(2, 3, edges).unwrap(), t).unwrap();
        let got = is_kt_maximal(&host, &gtilde, &htilde, &k, &Limits::default()).unwrap();
        prop_assert_eq!(got, brute_kt_maximal(&host, &gtilde, &htilde, &k));
    }

    #[test]
    fn hm_members_meet_the_density_form(seed in any::<u64>(), s in 2usize..=4, m in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_hm_member(&mut rng, s, m, 20).unwrap();
        let limits = Limits::default();
        prop_assert!(m_decomposition(&g, m, &limits).unwrap().is_some());
        if g.edge_count() > 0 {
            let form = inverse_density_form(&g, m).unwrap();
            prop_assert!(form.is_admissible(m), "{:?} for rho_max {}", form, max_density(&g).density);
        }
    }
}

#[test]
fn kt_maximality_check_sees_both_outcomes() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let limits = Limits::default();
    let k = RootedPair::new(Hypergraph::new(2, 3, vec![vec![0, 2], vec![1, 2]]).unwrap(), 2).unwrap();
    let (mut yes, mut no) = (0, 0);
    for _ in 0..300 {
        let host = common::random_hypergraph(&mut rng, 2, 7, 0.4);
        let got = is_kt_maximal(&host, &[0, 1, 2], &[0], &k, &limits).unwrap();
        assert_eq!(got, brute_kt_maximal(&host, &[0, 1, 2], &[0], &k));
        if got {
            yes += 1;
        } else {
            no += 1;
        }
    }
    assert!(yes > 10 && no > 10, "{yes} maximal, {no} not");
}

fn alpha_grid() -> Vec<Rational> {
    let mut grid: Vec<Rational> = (1i64..=8).flat_map(|q| (1i64..=4 * q).map(move |p| Rational::new(p, q))).collect();
    grid.sort();
    grid.dedup();
    grid
}

fn rank(c: PairClass) -> u8 {
    match c {
        PairClass::Safe => 0,
        PairClass::Neutral => 1,
        PairClass::Rigid => 2,
        PairClass::None => unreachable!(),
    }
}

proptest! {
    #[test]
    fn classes_move_safe_neutral_rigid_as_alpha_grows(pair in arb_pair(6)) {
        prop_assume!(pair.v_rel() >= 1 && pair.e_rel() >= 1);
        let limits = Limits::default();
        let balance = Rational::new(pair.v_rel() as i64, pair.e_rel() as i64);
        let mut last = 0;
        for alpha in alpha_grid() {
            let c = classify_pair(&pair, &alpha, &limits).unwrap().class;
            if c == PairClass::None {
                continue;
            }
            prop_assert!(rank(c) >= last, "{:?} after rank {} at alpha {}", c, last, alpha);
            last = rank(c);
            if c == PairClass::Neutral {
                prop_assert_eq!(&alpha, &balance);
            }
        }
    }

    #[test]
    fn strict_extensions_follow_relabeling(
        (host, perm) in common::arb_hypergraph(2..=2, 4, 7).prop_flat_map(|g| {
            let n = g.n();
            (Just(g), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
        }),
        pair in arb_pair(4).prop_filter("two-uniform with roots", |p| p.g().s() == 2 && p.roots() >= 1),
    ) {
        let limits = Limits::default();
        let roots: Vec<usize> = (0..pair.roots()).collect();
        let found = strict_extensions(&host, &roots, &pair, &limits).unwrap();
        let moved_host = host.relabel(&perm).unwrap();
        let moved_roots: Vec<usize> = roots.iter().map(|&r| perm[r]).collect();
        let mut expected: Vec<Vec<usize>> = found.iter().map(|m| m.iter().map(|&v| perm[v]).collect()).collect();
        expected.sort();
        prop_assert_eq!(strict_extensions(&moved_host, &moved_roots, &pair, &limits).unwrap(), expected);
        // with an empty catalog every strict extension is maximal
        let count = count_maximal_extensions(&host, &roots, &pair, &Rational::new(3, 2), 0, &limits).unwrap();
        prop_assert_eq!(count as usize, found.len());
    }
}
