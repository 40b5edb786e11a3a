//! Independent oracles and generators shared by the integration tests.
//!
//! Nothing here calls into the search code it is used to check.

#![allow(dead_code)]

use std::collections::HashMap;

use hyperspectra::combinatorics::for_each_combination;
use hyperspectra::folio::Formula;
use hyperspectra::{Hypergraph, Rational};
use proptest::prelude::*;
use rand::Rng;

pub fn random_hypergraph<R: Rng + ?Sized>(rng: &mut R, s: usize, n: usize, p: f64) -> Hypergraph {
    let mut edges = Vec::new();
    for_each_combination(n, s, |c| {
        if rng.gen::<f64>() < p {
            edges.push(c.to_vec());
        }
        true
    });
    Hypergraph::new(s, n, edges).expect("valid edges")
}

/// Hypergraphs with `s` in `s_range` and `min_n..=max_n` vertices.
pub fn arb_hypergraph(s_range: std::ops::RangeInclusive<usize>, min_n: usize, max_n: usize) -> BoxedStrategy<Hypergraph> {
    (s_range, min_n..=max_n)
        .prop_flat_map(|(s, n)| {
            let mut slots = Vec::new();
            if n >= s {
                for_each_combination(n, s, |c| {
                    slots.push(c.to_vec());
                    true
                });
            }
            let len = slots.len();
            (Just(s), Just(n), Just(slots), proptest::collection::vec(any::<bool>(), len))
        })
        .prop_map(|(s, n, slots, keep)| {
            let edges = slots.into_iter().zip(keep).filter(|(_, k)| *k).map(|(e, _)| e);
            Hypergraph::new(s, n, edges).expect("valid edges")
        })
        .boxed()
}

/// `max e(S)/|S|` over every nonempty vertex subset.
pub fn brute_max_density(g: &Hypergraph) -> Rational {
    let n = g.n();
    let mut best = Rational::zero();
    for mask in 1u64..(1u64 << n) {
        let inside = g.edges().iter().filter(|e| e.iter().all(|&v| mask >> v & 1 == 1)).count();
        let d = Rational::new(inside as i64, mask.count_ones() as i64);
        if d > best {
            best = d;
        }
    }
    best
}

fn is_edge(g: &Hypergraph, vs: &[usize]) -> bool {
    let mut key = vs.to_vec();
    key.sort_unstable();
    key.dedup();
    key.len() == g.s() && g.edges().contains(&key)
}

/// Every injective map `pattern -> host` sending edges to edges.
pub fn brute_embeddings(pattern: &Hypergraph, host: &Hypergraph) -> u128 {
    fn rec(pattern: &Hypergraph, host: &Hypergraph, map: &mut Vec<usize>, count: &mut u128) {
        if map.len() == pattern.n() {
            let ok = pattern
                .edges()
                .iter()
                .all(|e| is_edge(host, &e.iter().map(|&v| map[v]).collect::<Vec<_>>()));
            *count += ok as u128;
            return;
        }
        for y in 0..host.n() {
            if !map.contains(&y) {
                map.push(y);
                rec(pattern, host, map, count);
                map.pop();
            }
        }
    }
    let mut count = 0;
    rec(pattern, host, &mut Vec::new(), &mut count);
    count
}

/// Textbook recursive evaluation over all assignments.
pub fn naive_eval(g: &Hypergraph, f: &Formula, env: &mut HashMap<String, usize>) -> bool {
    match f {
        Formula::Eq(a, b) => env[a] == env[b],
        Formula::Edge(vs) => is_edge(g, &vs.iter().map(|v| env[v]).collect::<Vec<_>>()),
        Formula::Not(x) => !naive_eval(g, x, env),
        Formula::And(xs) => xs.iter().all(|x| naive_eval(g, x, env)),
        Formula::Or(xs) => xs.iter().any(|x| naive_eval(g, x, env)),
        Formula::Implies(a, b) => !naive_eval(g, a, env) || naive_eval(g, b, env),
        Formula::Exists(v, body) | Formula::Forall(v, body) => {
            let saved = env.get(v).copied();
            let want = matches!(f, Formula::Exists(..));
            let mut result = !want;
            for x in 0..g.n() {
                env.insert(v.clone(), x);
                if naive_eval(g, body, env) == want {
                    result = want;
                    break;
                }
            }
            match saved {
                Some(x) => env.insert(v.clone(), x),
                None => env.remove(v),
            };
            result
        }
    }
}

fn var_name(i: usize) -> String {
    format!("v{i}")
}

/// Random formula of quantifier depth at most `depth` whose free
/// variables are among `scope`; `fuel` bounds the number of connectives.
pub fn random_formula<R: Rng + ?Sized>(
    rng: &mut R,
    s: usize,
    depth: usize,
    scope: &mut Vec<String>,
    fuel: &mut usize,
) -> Formula {
    let atom = |rng: &mut R, scope: &Vec<String>| {
        if rng.gen_bool(0.4) {
            let a = scope[rng.gen_range(0..scope.len())].clone();
            let b = scope[rng.gen_range(0..scope.len())].clone();
            Formula::Eq(a, b)
        } else {
            Formula::Edge((0..s).map(|_| scope[rng.gen_range(0..scope.len())].clone()).collect())
        }
    };
    let quantify = depth > 0 && (scope.is_empty() || rng.gen_bool(0.5));
    if *fuel == 0 && !quantify {
        return if scope.is_empty() { Formula::And(vec![]) } else { atom(rng, scope) };
    }
    *fuel = fuel.saturating_sub(1);
    if quantify {
        let v = var_name(scope.len() + rng.gen_range(0..2));
        let fresh = !scope.contains(&v);
        if fresh {
            scope.push(v.clone());
        }
        let body = random_formula(rng, s, depth - 1, scope, fuel);
        if fresh {
            scope.pop();
        }
        return if rng.gen_bool(0.5) {
            Formula::Exists(v, Box::new(body))
        } else {
            Formula::Forall(v, Box::new(body))
        };
    }
    if scope.is_empty() {
        return Formula::And(vec![]);
    }
    match rng.gen_range(0..6) {
        0 => Formula::Not(Box::new(random_formula(rng, s, depth, scope, fuel))),
        1 => Formula::And((0..rng.gen_range(1..=3)).map(|_| random_formula(rng, s, depth, scope, fuel)).collect()),
        2 => Formula::Or((0..rng.gen_range(1..=3)).map(|_| random_formula(rng, s, depth, scope, fuel)).collect()),
        3 => Formula::Implies(
            Box::new(random_formula(rng, s, depth, scope, fuel)),
            Box::new(random_formula(rng, s, depth, scope, fuel)),
        ),
        _ => atom(rng, scope),
    }
}

/// Random sentence of quantifier depth at most `depth`.
pub fn random_sentence<R: Rng + ?Sized>(rng: &mut R, s: usize, depth: usize) -> Formula {
    let v = var_name(0);
    let mut scope = vec![v.clone()];
    let body = random_formula(rng, s, depth.saturating_sub(1), &mut scope, &mut 8);
    if rng.gen_bool(0.5) {
        Formula::Exists(v, Box::new(body))
    } else {
        Formula::Forall(v, Box::new(body))
    }
}
