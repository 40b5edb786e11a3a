//! Exact calculators for the zero-one k-law bounds and their witness
//! hypergraphs.
//!
//! Every value is an exact rational except `prop1_lambda`, whose
//! exponential is a float.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{for_each_combination, subsets_of};
use crate::error::{Error, Result};
use crate::extlab::{is_strictly_balanced_pair, pair_density, RootedPair};
use crate::hypercore::{automorphisms, Hypergraph};
use crate::limits::Limits;
use crate::rational::{binomial, Rational};

/// Largest witness the constructors will build.
pub const CONSTRUCTION_CAP: usize = 10_000;

fn domain<T>(message: String) -> Result<T> {
    Err(Error::Domain(message))
}

fn binom(n: usize, k: usize) -> Rational {
    Rational::integer(binomial(n as u64, k as u64))
}

fn pow2(e: usize) -> Result<u64> {
    if e >= 63 {
        return domain(format!("2^{e} does not fit the supported range"));
    }
    Ok(1u64 << e)
}

/// How a reported value relates to the zero-one k-law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Meaning {
    /// The law holds when `1/alpha` exceeds the value.
    LawHoldsBelow,
    /// The law fails at the reported alpha.
    LawFailsAt,
    /// An interval of alpha on which the law holds outside a lattice.
    Interval,
    /// The reported point is a limit point of the spectrum.
    LimitPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub theorem: u8,
    pub params: BTreeMap<String, i64>,
    pub values: BTreeMap<String, Rational>,
    pub meaning: Meaning,
}

impl BoundReport {
    fn new(theorem: u8, meaning: Meaning, params: &[(&str, usize)]) -> Self {
        BoundReport {
            theorem,
            params: params.iter().map(|&(k, v)| (k.to_string(), v as i64)).collect(),
            values: BTreeMap::new(),
            meaning,
        }
    }

    fn with(mut self, key: &str, value: Rational) -> Self {
        self.values.insert(key.to_string(), value);
        self
    }
}

/// `C(k-1,s-1) - 1 - (s-1)/(k-1) + 2(1 + (s-1)/(k-1)) / (C(k-1,s-1) + 2)`.
pub fn thm6_threshold(s: usize, k: usize) -> Result<Rational> {
    if s < 3 || k < s + 1 {
        return domain(format!("need s >= 3 and k >= s + 1; got s={s}, k={k}"));
    }
    let c = binom(k - 1, s - 1);
    let r = Rational::new((s - 1) as i64, (k - 1) as i64);
    let corr = (Rational::one() + &r) * 2 / (&c + &Rational::integer(2));
    Ok(&c - &Rational::one() - &r + corr)
}

/// `C(k-1,s-1) - 1 - (s-1)/(k-1) - 2 / C(k-1,s-1)`.
pub fn thm7_threshold(s: usize, k: usize) -> Result<Rational> {
    if s < 3 || k < s + 2 {
        return domain(format!("need s >= 3 and k >= s + 2; got s={s}, k={k}"));
    }
    let c = binom(k - 1, s - 1);
    let r = Rational::new((s - 1) as i64, (k - 1) as i64);
    let corr = Rational::integer(2) / &c;
    Ok(&c - &Rational::one() - &r - corr)
}

/// A constructed hypergraph with its counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub graph: Hypergraph,
    pub vertices: usize,
    pub edges: usize,
    pub density: Rational,
}

impl Witness {
    fn new(graph: Hypergraph) -> Self {
        Witness {
            vertices: graph.n(),
            edges: graph.edge_count(),
            density: graph.density(),
            graph,
        }
    }
}

/// `|V(K)|` and `|E(K)|` of the density witness by closed form.
pub fn thm7_counts(s: usize, k: usize) -> Result<(BigInt, BigInt)> {
    thm7_threshold(s, k)?;
    let pairs = binomial(binomial((k - 2) as u64, (s - 1) as u64).to_u64().unwrap_or(u64::MAX), 2);
    let c = binomial((k - 1) as u64, (s - 1) as u64);
    let c2 = binomial((k - 2) as u64, (s - 1) as u64);
    let one = BigInt::from(1);
    let v = BigInt::from(k - 2) + &pairs * &c + &pairs * &c * (&c - &one);
    let e = &pairs * &c * (&c2 - BigInt::from(2)) + &pairs * &c * (&c - &one) * (&c - &one);
    Ok((v, e))
}

/// The density witness over `x_1..x_{k-2}`.
///
/// Vertex ids: `x_1..x_{k-2}` are `0..k-2`; then one vertex per
/// `({A,B}, C)` in lexicographic order; then one per `({A,B}, C, C')`,
/// `C' != C`, grouped under its `({A,B}, C)`.
#[allow(non_snake_case)]
pub fn construct_thm7_K(s: usize, k: usize) -> Result<Witness> {
    let (v, _) = thm7_counts(s, k)?;
    let v = v.to_usize().unwrap_or(usize::MAX);
    if v > CONSTRUCTION_CAP {
        return Err(Error::CapExceeded {
            what: "v(K) for the density witness",
            actual: v,
            cap: CONSTRUCTION_CAP,
        });
    }
    build_thm7_K(s, k)
}

/// The density witness without the size cap; `(s, k)` already checked.
#[allow(non_snake_case)]
fn build_thm7_K(s: usize, k: usize) -> Result<Witness> {
    let base: Vec<usize> = (0..k - 2).collect();
    let b_small = subsets_of(&base, s - 1);
    // C ranges over (s-1)-subsets of x_1..x_{k-1}; index k-2 is x_{k-1}
    let b_large = subsets_of(&(0..k - 1).collect::<Vec<_>>(), s - 1);
    let mut pairs = Vec::new();
    for_each_combination(b_small.len(), 2, |ab| {
        pairs.push((ab[0], ab[1]));
        true
    });
    let mid_count = pairs.len() * b_large.len();
    let mid = |p: usize, c: usize| k - 2 + p * b_large.len() + c;
    let mut next_top = k - 2 + mid_count;
    let mut edges = Vec::new();
    for (p, &(a, b)) in pairs.iter().enumerate() {
        for c in 0..b_large.len() {
            let xm = mid(p, c);
            for (i, set) in b_small.iter().enumerate() {
                if i != a && i != b {
                    let mut e = set.clone();
                    e.push(xm);
                    edges.push(e);
                }
            }
            for (c2, cset) in b_large.iter().enumerate() {
                if c2 == c {
                    continue;
                }
                let xt = next_top;
                next_top += 1;
                for set in &b_small {
                    if set != cset {
                        let mut e = set.clone();
                        e.push(xt);
                        edges.push(e);
                    }
                }
                for j in subsets_of(&base, s - 2) {
                    let mut with_mid = j.clone();
                    with_mid.push(k - 2);
                    if with_mid == *cset {
                        continue;
                    }
                    let mut e = j;
                    e.push(xm);
                    e.push(xt);
                    edges.push(e);
                }
            }
        }
    }
    Ok(Witness::new(Hypergraph::new(s, next_top, edges)?))
}

/// The interval `(s-1 - 1/2^{k-s+1}, s-1)`.
pub fn thm8_interval(s: usize, k: usize) -> Result<(Rational, Rational)> {
    if s < 2 || k + 1 < s {
        return domain(format!("need s >= 2 and k >= s - 1; got s={s}, k={k}"));
    }
    let top = Rational::integer(s as i64 - 1);
    let width = Rational::new(1, pow2(k + 1 - s)?);
    Ok((&top - &width, top))
}

/// Membership of `alpha` in `{s-1 - 1/(2^{k-s+1} + a/b) : a, b >= 1, a <= 2^{k-s+1}}`.
///
/// Writing `1/(s-1-alpha) - 2^{k-s+1}` in lowest terms `a/b`, a
/// representation with a small enough numerator exists iff the reduced
/// one has it.
pub fn q_k_membership(alpha: &Rational, s: usize, k: usize) -> Result<bool> {
    let (lo, hi) = thm8_interval(s, k)?;
    if *alpha <= lo || *alpha >= hi {
        return Ok(false);
    }
    let p = pow2(k + 1 - s)?;
    let rest = (&hi - alpha).recip() - Rational::integer(p);
    Ok(rest.is_positive() && *rest.numer() <= BigInt::from(p))
}

/// `s - 1 - 1/(2^{k-s+1} + a)`.
pub fn thm9_alpha(s: usize, k: usize, a: u64) -> Result<Rational> {
    if s < 3 || k < s + 4 {
        return domain(format!("need s >= 3 and k >= s + 4; got s={s}, k={k}"));
    }
    let max_a = pow2(k - s - 2)? + pow2(k - s - 3)? + 1;
    if a < 1 || a > max_a {
        return domain(format!("need 1 <= a <= {max_a}; got a={a}"));
    }
    let p = pow2(k + 1 - s)?;
    Ok(Rational::integer(s as i64 - 1) - Rational::integer(p + a).recip())
}

/// Lexicographically least `(a1, a2, a3)` with
/// `2 a1 + 2 a2 + 1 + a3 = 2^{k-s+1} + a`, `2 <= a1 <= 2^{k-s}`,
/// `1 <= a2 <= 2^{k-s-4}`, `1 <= a3 <= 2^{k-s-2}`, `a2 < a1`.
pub fn split_a(s: usize, k: usize, a: u64) -> Result<(u64, u64, u64)> {
    thm9_alpha(s, k, a)?;
    let target = pow2(k + 1 - s)? + a;
    let (a1_max, a2_max, a3_max) = (pow2(k - s)?, pow2(k - s - 4)?, pow2(k - s - 2)?);
    for a1 in 2..=a1_max {
        for a2 in 1..=a2_max.min(a1 - 1) {
            let used = 2 * a1 + 2 * a2 + 1;
            if used < target && (1..=a3_max).contains(&(target - used)) {
                return Ok((a1, a2, target - used));
            }
        }
    }
    Err(Error::NoSplit { s, k, a })
}

/// Two loose cycles of `2 a1` and `2 a2 + 1` edges joined by a loose path
/// of `a3` edges from `x_1` to `y_1`.
///
/// Vertex ids: the x-block `x_1..x_{2 a1 (s-1)}`, then the y-block
/// `y_1..y_{(2 a2 + 1)(s-1)}`, then `z_1..z_{a3 (s-1) - 1}`. With
/// `a3 = 1` the single connecting edge is `{x_1, z_1..z_{s-2}, y_1}`.
///
/// The triple is checked against the ranges for `(s, k)` but not against
/// the sum, so smaller analogs can be built.
#[allow(non_snake_case)]
pub fn construct_thm9_K(s: usize, k: usize, a1: usize, a2: usize, a3: usize) -> Result<Witness> {
    if s < 3 || k < s + 4 {
        return domain(format!("need s >= 3 and k >= s + 4; got s={s}, k={k}"));
    }
    let (a1_max, a2_max, a3_max) = (pow2(k - s)?, pow2(k - s - 4)?, pow2(k - s - 2)?);
    let ok = (2..=a1_max).contains(&(a1 as u64))
        && (1..=a2_max).contains(&(a2 as u64))
        && (1..=a3_max).contains(&(a3 as u64))
        && a2 < a1;
    if !ok {
        return domain(format!(
            "need 2 <= a1 <= {a1_max}, 1 <= a2 <= {a2_max}, 1 <= a3 <= {a3_max}, a2 < a1; got ({a1}, {a2}, {a3})"
        ));
    }
    let d = s - 1;
    let e_total = 2 * a1 + 2 * a2 + 1 + a3;
    let n = e_total * d - 1;
    if n > CONSTRUCTION_CAP {
        return Err(Error::CapExceeded {
            what: "v(K) for the cycle witness",
            actual: n,
            cap: CONSTRUCTION_CAP,
        });
    }
    let x = |i: usize| i - 1;
    let y = |i: usize| 2 * a1 * d + i - 1;
    let z = |i: usize| 2 * a1 * d + (2 * a2 + 1) * d + i - 1;
    let mut edges = Vec::new();
    let mut cycle = |len: usize, v: &dyn Fn(usize) -> usize| {
        for i in 1..len {
            edges.push(((i - 1) * d + 1..=i * d + 1).map(v).collect::<Vec<_>>());
        }
        let mut last: Vec<usize> = ((len - 1) * d + 1..=len * d).map(v).collect();
        last.push(v(1));
        edges.push(last);
    };
    cycle(2 * a1, &x);
    cycle(2 * a2 + 1, &y);
    if a3 == 1 {
        let mut e = vec![x(1), y(1)];
        e.extend((1..=d - 1).map(z));
        edges.push(e);
    } else {
        let mut first = vec![x(1)];
        first.extend((1..=d).map(z));
        edges.push(first);
        for i in 1..a3 - 1 {
            edges.push((i * d..=(i + 1) * d).map(z).collect());
        }
        let mut last: Vec<usize> = ((a3 - 1) * d..=a3 * d - 1).map(z).collect();
        last.push(y(1));
        edges.push(last);
    }
    Ok(Witness::new(Hypergraph::new(s, n, edges)?))
}

/// `alpha = 1/C(k-11,s-1) + (k-10) / (C(k-11,s-1) Sigma)` with
/// `Sigma = 4 (m^{m+1} - m)/(m - 1)` and `m = j (k - 10)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thm10Value {
    pub alpha: Rational,
    pub sigma: BigInt,
    pub m: u64,
}

pub fn thm10_alpha(s: usize, k: usize, j: u64) -> Result<Thm10Value> {
    if s < 2 || k < 11 + (s - 1) || j < 1 {
        return domain(format!("need s >= 2, k - 11 >= s - 1, j >= 1; got s={s}, k={k}, j={j}"));
    }
    let m = j * (k as u64 - 10);
    if m < 2 {
        return domain(format!("m = j(k - 10) = {m}; need m >= 2"));
    }
    if m > 4096 {
        return domain(format!("m = {m} too large for m^(m+1)"));
    }
    let mb = BigInt::from(m);
    let sigma = BigInt::from(4) * (num_traits::pow(mb.clone(), m as usize + 1) - &mb) / (&mb - BigInt::from(1));
    let c = binom(k - 11, s - 1);
    let alpha = c.recip() + Rational::integer(k as i64 - 10) / (&c * &Rational::integer(sigma.clone()));
    Ok(Thm10Value { alpha, sigma, m })
}

/// `max{ l : C(l, s-1) (l + 2) <= C(k, s) }` by direct search.
pub fn thm11_l(s: usize, k: usize) -> Result<usize> {
    if !((s == 2 && k >= 5) || (s >= 3 && k >= s + 2)) {
        return domain(format!("need s = 2, k >= 5 or s >= 3, k >= s + 2; got s={s}, k={k}"));
    }
    let cap = binomial(k as u64, s as u64);
    let fits = |l: usize| binomial(l as u64, (s - 1) as u64) * BigInt::from(l + 2) <= cap;
    let mut l = 1;
    while fits(l + 1) {
        l += 1;
    }
    Ok(l)
}

/// `floor(sqrt(k(k-1)/2 - 1)) - 1`, the closed form offered for `s = 2`.
pub fn thm11_l_closed_form_s2(k: usize) -> Result<usize> {
    if k < 3 {
        return domain(format!("need k >= 3; got k={k}"));
    }
    Ok((k * (k - 1) / 2 - 1).sqrt() - 1)
}

/// `floor(sqrt(k(k-1)/2 + 1)) - 1`, which solves `l (l + 2) <= C(k, 2)`
/// exactly.
pub fn thm11_l_exact_s2(k: usize) -> usize {
    (k * k.saturating_sub(1) / 2 + 1).sqrt() - 1
}

/// `(l + m) / ((l - t + m) C(l, s-1))` with `l = l(k)`, `t = k - l - 2`.
pub fn thm11_alpha(s: usize, k: usize, m: u64) -> Result<Rational> {
    let l = thm11_l(s, k)?;
    if m < 1 {
        return domain("need m >= 1".into());
    }
    if l + 2 >= k {
        return domain(format!("t = k - l - 2 is not positive for l = {l}, k = {k}"));
    }
    let t = k - l - 2;
    let num = Rational::integer(l as u64 + m);
    let den = Rational::integer(l as i64 - t as i64 + m as i64) * binom(l, s - 1);
    if den.is_zero() {
        return domain(format!("l - t + m = 0 for l = {l}, t = {t}, m = {m}"));
    }
    Ok(num / den)
}

/// Inputs to the limit of unextendable copies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prop1Value {
    pub a_h: u128,
    pub a1: u128,
    pub a2: u128,
    pub lambda: f64,
}

/// `(1/a(H)) exp(-a(H) / (a1 a2))` for the root part `H` of `pair`.
///
/// `a1` counts automorphisms of `H` extendable to `G`, `a2` those of `G`
/// fixing `V(H)` pointwise.
pub fn prop1_lambda(pair: &RootedPair, limits: &Limits) -> Result<Prop1Value> {
    let h = pair.h()?;
    let g = pair.g();
    let l = pair.roots();
    if h.edge_count() == 0 {
        return Err(Error::HypothesisViolated("H has no edges".into()));
    }
    if !h.is_strictly_balanced()? {
        return Err(Error::HypothesisViolated("H is not strictly balanced".into()));
    }
    if !is_strictly_balanced_pair(pair, limits)? {
        return Err(Error::HypothesisViolated("(G, H) is not a strictly balanced pair".into()));
    }
    if h.density() != pair_density(pair)? {
        return Err(Error::HypothesisViolated(format!(
            "rho(H) = {} differs from rho(G, H) = {}",
            h.density(),
            pair_density(pair)?
        )));
    }
    let a_h = automorphisms(&h, limits)?.len() as u128;
    let aut_g = automorphisms(g, limits)?;
    // H edges are the edges of G inside the roots, so automorphisms of G
    // preserving the roots restrict to automorphisms of H
    let mut restrictions: Vec<Vec<usize>> = aut_g
        .iter()
        .filter(|p| p[..l].iter().all(|&v| v < l))
        .map(|p| p[..l].to_vec())
        .collect();
    let a2 = aut_g.iter().filter(|p| (0..l).all(|v| p[v] == v)).count() as u128;
    restrictions.sort();
    restrictions.dedup();
    let a1 = restrictions.len() as u128;
    let lambda = (1.0 / a_h as f64) * (-(a_h as f64) / (a1 as f64 * a2 as f64)).exp();
    Ok(Prop1Value { a_h, a1, a2, lambda })
}

/// `1 - 1/(2^{k-1} + beta)` for the graph case.
pub fn thm2_alpha(k: usize, beta: &Rational) -> Result<Rational> {
    if k <= 3 || !beta.is_positive() {
        return domain(format!("need k > 3 and beta > 0; got k={k}, beta={beta}"));
    }
    Ok(Rational::one() - (Rational::integer(pow2(k - 1)?) + beta).recip())
}

/// Graph-case status of `alpha = 1 - 1/(2^{k-1} + beta)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Thm2Status {
    /// beta is a natural number up to `2^{k-1} - 2`: the law fails.
    LawFails,
    /// beta has numerator above `2^{k-1}`: the law holds.
    LawHolds,
    /// Neither case applies.
    Open,
}

pub fn thm2_status(k: usize, beta: &Rational) -> Result<Thm2Status> {
    thm2_alpha(k, beta)?;
    let p = BigInt::from(pow2(k - 1)?);
    if beta.is_integer() && *beta.numer() <= &p - BigInt::from(2) {
        return Ok(Thm2Status::LawFails);
    }
    if *beta.numer() > p {
        return Ok(Thm2Status::LawHolds);
    }
    Ok(Thm2Status::Open)
}

/// Report for the CLI: `aux` is `a` for the cycle witness, `j` for the
/// limit-point construction, `m` for the small-depth limit point.
pub fn report(theorem: u8, s: usize, k: usize, aux: Option<u64>) -> Result<BoundReport> {
    let need = |name: &str| aux.ok_or_else(|| Error::Domain(format!("this bound needs --{name}")));
    Ok(match theorem {
        6 => BoundReport::new(6, Meaning::LawHoldsBelow, &[("s", s), ("k", k)])
            .with("threshold", thm6_threshold(s, k)?),
        7 => {
            let mut r = BoundReport::new(7, Meaning::LawFailsAt, &[("s", s), ("k", k)])
                .with("threshold", thm7_threshold(s, k)?);
            let (v, e) = thm7_counts(s, k)?;
            if v <= BigInt::from(CONSTRUCTION_CAP) {
                let density = Rational::from(num_rational::BigRational::new(e.clone(), v.clone()));
                r = r.with("witness_density", density);
            }
            r.with("witness_vertices", Rational::integer(v)).with("witness_edges", Rational::integer(e))
        }
        8 => {
            let (lo, hi) = thm8_interval(s, k)?;
            BoundReport::new(8, Meaning::Interval, &[("s", s), ("k", k)])
                .with("alpha_low", lo)
                .with("alpha_high", hi)
        }
        9 => {
            let a = need("a")?;
            let alpha = thm9_alpha(s, k, a)?;
            let (a1, a2, a3) = split_a(s, k, a)?;
            let w = construct_thm9_K(s, k, a1 as usize, a2 as usize, a3 as usize)?;
            let mut r = BoundReport::new(9, Meaning::LawFailsAt, &[("s", s), ("k", k), ("a", a as usize)])
                .with("alpha", alpha)
                .with("witness_density", w.density);
            for (name, v) in [("a1", a1), ("a2", a2), ("a3", a3)] {
                r.params.insert(name.to_string(), v as i64);
            }
            r
        }
        10 => {
            let j = need("j")?;
            let v = thm10_alpha(s, k, j)?;
            let mut r = BoundReport::new(10, Meaning::LawFailsAt, &[("s", s), ("k", k), ("j", j as usize)])
                .with("alpha", v.alpha)
                .with("sigma", Rational::integer(v.sigma))
                .with("limit_point", binom(k - 11, s - 1).recip());
            r.params.insert("m".into(), v.m as i64);
            r
        }
        11 => {
            let l = thm11_l(s, k)?;
            let mut r = BoundReport::new(11, Meaning::LimitPoint, &[("s", s), ("k", k)])
                .with("limit_point", binom(l, s - 1).recip());
            r.params.insert("l".into(), l as i64);
            if let Some(m) = aux {
                r.params.insert("m".into(), m as i64);
                r = r.with("alpha", thm11_alpha(s, k, m)?);
            }
            r
        }
        other => return domain(format!("no calculator for theorem {other}; expected 6 to 11")),
    })
}
