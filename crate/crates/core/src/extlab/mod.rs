//! Pair calculus for rooted extensions: densities, `f_alpha`
//! classification, strict extensions, (K, T)-maximality, maximal-extension
//! counts, cyclic m-extensions and m-decompositions.

mod cyclic;
mod extend;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::hypercore::Hypergraph;
use crate::limits::Limits;
use crate::rational::Rational;

pub use cyclic::{
    cyclic_extensions, density_bound, inverse_density_form, is_cyclic_m_extension, m_decomposition,
    random_hm_member, CyclicCase, CyclicExtension, Decomposition, DecompositionStep,
    InverseDensityForm,
};
pub use extend::{
    count_maximal_extensions, extensions, is_kt_maximal, kr_catalog, strict_extensions,
};

/// A pair `(G, H)`: vertices `0..roots` of `g` are the root part `H`, whose
/// edges are listed explicitly in `h_edges` (a subset of the edges of `g`
/// inside the roots).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RootedPair {
    g: Hypergraph,
    roots: usize,
    h_edges: Vec<Vec<usize>>,
}

impl RootedPair {
    /// `H` is the subhypergraph induced on the roots.
    pub fn new(g: Hypergraph, roots: usize) -> Result<Self> {
        let h_edges = g
            .edges()
            .iter()
            .filter(|e| e.iter().all(|&v| v < roots))
            .cloned()
            .collect();
        RootedPair::with_h_edges(g, roots, h_edges)
    }

    pub fn with_h_edges(g: Hypergraph, roots: usize, h_edges: Vec<Vec<usize>>) -> Result<Self> {
        if roots > g.n() {
            return Err(Error::Domain(format!("{roots} roots but only {} vertices", g.n())));
        }
        let mut h = Vec::with_capacity(h_edges.len());
        for mut e in h_edges {
            e.sort_unstable();
            if !g.has_sorted_edge(&e) || e.iter().any(|&v| v >= roots) {
                return Err(Error::Domain(format!("H edge {e:?} is not an edge of G inside the roots")));
            }
            h.push(e);
        }
        h.sort();
        h.dedup();
        Ok(RootedPair { g, roots, h_edges: h })
    }

    /// Pair adding one vertex joined to all `s - 1` roots by a single edge.
    pub fn one_edge_extension(s: usize) -> Result<Self> {
        RootedPair::new(Hypergraph::single_edge(s)?, s - 1)
    }

    pub fn g(&self) -> &Hypergraph {
        &self.g
    }

    pub fn roots(&self) -> usize {
        self.roots
    }

    pub fn h_edges(&self) -> &[Vec<usize>] {
        &self.h_edges
    }

    /// The root part as a hypergraph on `0..roots`.
    pub fn h(&self) -> Result<Hypergraph> {
        Hypergraph::new(self.g.s(), self.roots.max(1), self.h_edges.clone())
    }

    /// `v(G, H)`.
    pub fn v_rel(&self) -> usize {
        self.g.n() - self.roots
    }

    /// `e(G, H)`.
    pub fn e_rel(&self) -> usize {
        self.g.edge_count() - self.h_edges.len()
    }

    pub(crate) fn is_h_edge(&self, sorted: &[usize]) -> bool {
        self.h_edges.binary_search_by(|e| e.as_slice().cmp(sorted)).is_ok()
    }

    /// Non-root edges of `G`.
    pub(crate) fn new_edges(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.g.edges().iter().filter(|e| !self.is_h_edge(e))
    }

    pub fn to_json_value(&self) -> Value {
        json!({"g": self.g.to_json_value(), "roots": self.roots, "h_edges": self.h_edges})
    }

    /// Reads `{"g": hypergraph, "roots": int, "h_edges": [[...]]}`;
    /// `h_edges` defaults to the edges induced on the roots.
    pub fn from_json_value(value: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Domain(format!("pair: {m}"));
        let obj = value.as_object().ok_or_else(|| bad("expected an object"))?;
        let g = Hypergraph::from_json_value(obj.get("g").ok_or_else(|| bad("missing key `g`"))?)?;
        let roots = obj
            .get("roots")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("`roots` must be a non-negative integer"))? as usize;
        match obj.get("h_edges") {
            None => RootedPair::new(g, roots),
            Some(v) => {
                let edges: Vec<Vec<usize>> = serde_json::from_value(v.clone())?;
                RootedPair::with_h_edges(g, roots, edges)
            }
        }
    }

    /// Roots plus every non-root vertex in `mask` (bit `i` is vertex
    /// `roots + i`).
    fn members(&self, mask: u64) -> Vec<bool> {
        let mut m = vec![false; self.g.n()];
        for (v, slot) in m.iter_mut().enumerate() {
            *slot = v < self.roots || mask >> (v - self.roots) & 1 == 1;
        }
        m
    }

    /// `e(K, H)` for `K` induced on the roots plus `mask`.
    fn e_rel_within(&self, mask: u64) -> usize {
        let m = self.members(mask);
        self.g.edges_within(&m) - self.h_edges.len()
    }

    fn check_cap(&self, limits: &Limits) -> Result<()> {
        if self.v_rel() > limits.pair_cap || self.v_rel() >= 64 {
            return Err(Error::CapExceeded {
                what: "v(G, H) for intermediate-subgraph enumeration",
                actual: self.v_rel(),
                cap: limits.pair_cap,
            });
        }
        Ok(())
    }

    fn vertices_of(&self, mask: u64) -> Vec<usize> {
        (0..self.g.n())
            .filter(|&v| v < self.roots || mask >> (v - self.roots) & 1 == 1)
            .collect()
    }
}

impl Serialize for RootedPair {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json_value().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RootedPair {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let value = Value::deserialize(deserializer)?;
        RootedPair::from_json_value(&value).map_err(serde::de::Error::custom)
    }
}

/// `rho(G, H) = e(G, H) / v(G, H)`.
pub fn pair_density(pair: &RootedPair) -> Result<Rational> {
    if pair.v_rel() == 0 {
        return Err(Error::DegeneratePair);
    }
    Ok(Rational::new(pair.e_rel() as i64, pair.v_rel() as i64))
}

/// `max rho(K, H)` over `H ⊂ K ⊆ G`, with `K` ranging over subhypergraphs
/// induced on the roots plus a nonempty set of other vertices.
pub fn pair_max_density(pair: &RootedPair, limits: &Limits) -> Result<Rational> {
    if pair.v_rel() == 0 {
        return Err(Error::DegeneratePair);
    }
    pair.check_cap(limits)?;
    let full = (1u64 << pair.v_rel()) - 1;
    let mut best = Rational::zero();
    for mask in 1..=full {
        let r = Rational::new(pair.e_rel_within(mask) as i64, mask.count_ones() as i64);
        if r > best {
            best = r;
        }
    }
    Ok(best)
}

/// `(G, H)` is strictly balanced: every proper intermediate `K` has
/// `rho(K, H) < rho(G, H)`.
pub fn is_strictly_balanced_pair(pair: &RootedPair, limits: &Limits) -> Result<bool> {
    let rho = pair_density(pair)?;
    pair.check_cap(limits)?;
    let full = (1u64 << pair.v_rel()) - 1;
    Ok((1..full).all(|mask| {
        Rational::new(pair.e_rel_within(mask) as i64, mask.count_ones() as i64) < rho
    }))
}

/// `f_alpha(G, H) = v(G, H) - alpha e(G, H)`.
pub fn f_alpha(pair: &RootedPair, alpha: &Rational) -> Rational {
    f_value(pair.v_rel(), pair.e_rel(), alpha)
}

fn f_value(v: usize, e: usize, alpha: &Rational) -> Rational {
    Rational::integer(v as i64) - alpha * &Rational::integer(e as i64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairClass {
    Safe,
    Rigid,
    Neutral,
    None,
}

/// Classification with the intermediate subhypergraph that decided it.
///
/// `witness` lists the vertices of that `K` and `value` is the deciding
/// `f_alpha` value: the minimum of `f(K, H)` for safe and neutral pairs,
/// the maximum of `f(G, K)` for rigid pairs, and a violating value
/// otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairClassification {
    pub class: PairClass,
    pub witness: Vec<usize>,
    pub value: Rational,
}

/// Safe if `f(K, H) > 0` for all `H ⊂ K ⊆ G`; rigid if `f(G, K) < 0` for
/// all `H ⊆ K ⊂ G`; neutral if `f(K, H) > 0` for all `H ⊂ K ⊂ G` and
/// `f(G, H) = 0`.
pub fn classify_pair(pair: &RootedPair, alpha: &Rational, limits: &Limits) -> Result<PairClassification> {
    pair.check_cap(limits)?;
    let v = pair.v_rel();
    let full = if v == 0 { 0 } else { (1u64 << v) - 1 };
    let e_full = pair.e_rel();
    // min f(K, H) over proper nonempty K, and over all nonempty K
    let mut min_proper: Option<(Rational, u64)> = None;
    // max f(G, K) over proper K (mask may be empty)
    let mut max_rest: Option<(Rational, u64)> = None;
    for mask in 0..full {
        let e_k = pair.e_rel_within(mask);
        let k_count = mask.count_ones() as usize;
        if mask != 0 {
            let f = f_value(k_count, e_k, alpha);
            if min_proper.as_ref().is_none_or(|(b, _)| f < *b) {
                min_proper = Some((f, mask));
            }
        }
        let g_over_k = f_value(v - k_count, e_full - e_k, alpha);
        if max_rest.as_ref().is_none_or(|(b, _)| g_over_k > *b) {
            max_rest = Some((g_over_k, mask));
        }
    }
    let f_full = f_value(v, e_full, alpha);
    let proper_positive = min_proper.as_ref().is_none_or(|(f, _)| f.is_positive());
    let classification = |class, value: Rational, mask: u64| PairClassification {
        class,
        witness: pair.vertices_of(mask),
        value,
    };
    if v == 0 {
        // no intermediate K exists: vacuously safe
        return Ok(classification(PairClass::Safe, f_full, 0));
    }
    if f_full.is_positive() && proper_positive {
        let (value, mask) = match min_proper {
            Some((f, m)) if f < f_full => (f, m),
            _ => (f_full.clone(), full),
        };
        return Ok(classification(PairClass::Safe, value, mask));
    }
    if let Some((value, mask)) = max_rest.clone().filter(|(f, _)| f.is_negative()) {
        return Ok(classification(PairClass::Rigid, value, mask));
    }
    if f_full.is_zero() && proper_positive {
        let (value, mask) = min_proper.unwrap_or((f_full, full));
        return Ok(classification(PairClass::Neutral, value, mask));
    }
    // report what broke
    let (value, mask) = if !proper_positive {
        min_proper.expect("a non-positive proper value was seen")
    } else if f_full.is_positive() || f_full.is_zero() {
        (f_full, full)
    } else {
        max_rest.expect("rigidity failed on some K")
    };
    Ok(classification(PairClass::None, value, mask))
}
