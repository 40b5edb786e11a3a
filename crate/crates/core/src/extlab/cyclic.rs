//! Cyclic m-extensions, the family `H_m` and m-decompositions.
//!
//! Three attachment shapes over a root set `H`:
//! - a loose path of `k` edges leaving root `x1`, closed by an edge through
//!   its last vertex, some earlier path vertices and fresh vertices;
//! - the same path closed by an edge through a second root `x2`;
//! - one edge through `2..=s-1` roots and fresh vertices.
//!
//! Paths have `1 <= k <= m - 1` edges, and the result must satisfy
//! `rho_max(G) < m / (m(s-1) - 1)`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::Signed;
use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::RootedPair;
use crate::error::{Error, Result};
use crate::hypercore::{max_density, Hypergraph};
use crate::limits::Limits;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CyclicCase {
    /// Path from `x1` closed onto its own vertices.
    ReturnPath,
    /// Path from `x1` closed through a second root `x2`.
    RootPath,
    /// Single edge through at least two roots.
    RootEdge,
}

/// One attachment, in host labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicExtension {
    pub case: CyclicCase,
    /// `[x1]`, `[x1, x2]`, or the roots of the single edge.
    pub roots: Vec<usize>,
    pub new_vertices: Vec<usize>,
    /// Path edges in order from `x1`, closing edge last.
    pub edges: Vec<Vec<usize>>,
}

/// `m / (m(s-1) - 1)`; `None` when the denominator is not positive, in
/// which case no density is excluded.
pub fn density_bound(s: usize, m: usize) -> Option<Rational> {
    let den = (m * (s - 1)) as i64 - 1;
    (den > 0).then(|| Rational::new(m as i64, den))
}

fn under_bound(rho: &Rational, s: usize, m: usize) -> bool {
    density_bound(s, m).is_none_or(|b| *rho < b)
}

type ShapeKey = (Vec<usize>, Vec<Vec<usize>>);

struct ShapeSearch<'a> {
    g: &'a Hypergraph,
    inc: &'a [Vec<usize>],
    in_h: Vec<bool>,
    m: usize,
    max_new: usize,
    steps: u64,
    budget: u64,
    found: BTreeMap<ShapeKey, CyclicExtension>,
}

impl<'a> ShapeSearch<'a> {
    fn new(g: &'a Hypergraph, inc: &'a [Vec<usize>], in_h: Vec<bool>, m: usize, max_new: usize, budget: u64) -> Self {
        ShapeSearch {
            g,
            inc,
            in_h,
            m,
            max_new,
            steps: 0,
            budget,
            found: BTreeMap::new(),
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > self.budget {
            return Err(Error::BudgetExceeded {
                what: "cyclic extension search steps",
                budget: self.budget,
            });
        }
        Ok(())
    }

    fn emit(&mut self, case: CyclicCase, roots: Vec<usize>, mut new_vertices: Vec<usize>, edges: Vec<Vec<usize>>) {
        if new_vertices.len() > self.max_new {
            return;
        }
        new_vertices.sort_unstable();
        let mut sorted = edges.clone();
        sorted.sort();
        self.found
            .entry((new_vertices.clone(), sorted))
            .or_insert(CyclicExtension {
                case,
                roots,
                new_vertices,
                edges,
            });
    }

    fn run(&mut self) -> Result<()> {
        let g = self.g;
        let s = g.s();
        for e in g.edges() {
            self.tick()?;
            let roots: Vec<usize> = e.iter().copied().filter(|&v| self.in_h[v]).collect();
            if roots.len() >= 2 && roots.len() < s {
                let new = e.iter().copied().filter(|&v| !self.in_h[v]).collect();
                self.emit(CyclicCase::RootEdge, roots, new, vec![e.clone()]);
            }
        }
        if self.m < 2 {
            return Ok(());
        }
        let mut on_path = vec![false; g.n()];
        for x1 in 0..g.n() {
            if !self.in_h[x1] {
                continue;
            }
            for &ei in &self.inc[x1] {
                let e = &g.edges()[ei];
                if e.iter().any(|&v| v != x1 && self.in_h[v]) {
                    continue;
                }
                let ys: Vec<usize> = e.iter().copied().filter(|&v| v != x1).collect();
                ys.iter().for_each(|&v| on_path[v] = true);
                let mut path = vec![ei];
                let mut y_list = ys.clone();
                self.grow(x1, x1, &mut path, &mut on_path, &mut y_list)?;
                ys.iter().for_each(|&v| on_path[v] = false);
            }
        }
        Ok(())
    }

    /// `entry` is the vertex through which the last path edge was entered.
    fn grow(
        &mut self,
        x1: usize,
        entry: usize,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        ys: &mut Vec<usize>,
    ) -> Result<()> {
        self.tick()?;
        let g = self.g;
        let last = &g.edges()[*path.last().expect("nonempty path")];
        let terminals: Vec<usize> = last.iter().copied().filter(|&v| v != entry).collect();
        let closers: BTreeSet<usize> = terminals
            .iter()
            .flat_map(|&t| self.inc[t].iter().copied())
            .filter(|ci| !path.contains(ci))
            .collect();
        for ci in closers {
            self.tick()?;
            let c = &g.edges()[ci];
            let roots: Vec<usize> = c.iter().copied().filter(|&v| self.in_h[v]).collect();
            if roots.contains(&x1) || roots.len() > 1 {
                continue;
            }
            let on_y = c.iter().filter(|&&v| on_path[v]).count();
            let (case, attach) = if roots.is_empty() {
                // the terminal plus at least one earlier path vertex
                if on_y < 2 {
                    continue;
                }
                (CyclicCase::ReturnPath, vec![x1])
            } else {
                (CyclicCase::RootPath, vec![x1, roots[0]])
            };
            let mut new = ys.clone();
            new.extend(c.iter().copied().filter(|&v| !self.in_h[v] && !on_path[v]));
            let mut edges: Vec<Vec<usize>> = path.iter().map(|&i| g.edges()[i].clone()).collect();
            edges.push(c.clone());
            self.emit(case, attach, new, edges);
        }
        if path.len() + 1 < self.m && ys.len() + g.s() - 1 <= self.max_new {
            for &t in &terminals {
                for &ei in &self.inc[t] {
                    let e = &g.edges()[ei];
                    if path.contains(&ei) || e.iter().any(|&v| v != t && (self.in_h[v] || on_path[v])) {
                        continue;
                    }
                    let fresh: Vec<usize> = e.iter().copied().filter(|&v| v != t).collect();
                    fresh.iter().for_each(|&v| on_path[v] = true);
                    ys.extend(&fresh);
                    path.push(ei);
                    self.grow(x1, t, path, on_path, ys)?;
                    path.pop();
                    ys.truncate(ys.len() - fresh.len());
                    fresh.iter().for_each(|&v| on_path[v] = false);
                }
            }
        }
        Ok(())
    }
}

/// `g` restricted to `vertices` (sorted) with the given edges, relabelled
/// to `0..vertices.len()`.
fn restrict<'e>(g: &Hypergraph, vertices: &[usize], edges: impl Iterator<Item = &'e Vec<usize>>) -> Result<Hypergraph> {
    let pos = |v: &usize| vertices.binary_search(v).expect("edge inside vertex set");
    let edges: Vec<Vec<usize>> = edges.map(|e| e.iter().map(pos).collect()).collect();
    Hypergraph::new(g.s(), vertices.len(), edges)
}

/// Every cyclic m-extension `G ⊆ host` of the hypergraph induced on
/// `h_vertices` with at most `max_new_vertices` new vertices, one per
/// distinct (vertex set, edge set), in sorted order.
pub fn cyclic_extensions(
    host: &Hypergraph,
    h_vertices: &[usize],
    m: usize,
    max_new_vertices: usize,
    limits: &Limits,
) -> Result<Vec<CyclicExtension>> {
    if m == 0 {
        return Err(Error::Domain("m must be at least 1".into()));
    }
    if h_vertices.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut in_h = vec![false; host.n()];
    for &v in h_vertices {
        if v >= host.n() {
            return Err(Error::VertexOutOfRange { vertex: v, n: host.n() });
        }
        in_h[v] = true;
    }
    let inc = host.incidence();
    let mut search = ShapeSearch::new(host, &inc, in_h.clone(), m, max_new_vertices, limits.eval_budget);
    search.run()?;
    let h_edges: Vec<&Vec<usize>> = host.edges().iter().filter(|e| e.iter().all(|&v| in_h[v])).collect();
    let mut out = Vec::new();
    for ext in search.found.into_values() {
        let mut vertices: Vec<usize> = (0..host.n()).filter(|&v| in_h[v]).collect();
        vertices.extend(&ext.new_vertices);
        vertices.sort_unstable();
        let g = restrict(host, &vertices, h_edges.iter().copied().chain(ext.edges.iter()))?;
        if under_bound(&max_density(&g).density, host.s(), m) {
            out.push(ext);
        }
    }
    Ok(out)
}

/// Whether `G` is a cyclic m-extension of `H` for the pair's `(G, H)`.
pub fn is_cyclic_m_extension(pair: &RootedPair, m: usize, limits: &Limits) -> Result<bool> {
    if m == 0 {
        return Err(Error::Domain("m must be at least 1".into()));
    }
    let g = pair.g();
    let l = pair.roots();
    if l == 0 || pair.v_rel() == 0 {
        return Ok(false);
    }
    let mut new_edges: Vec<Vec<usize>> = Vec::new();
    for e in g.edges() {
        if pair.is_h_edge(e) {
            continue;
        }
        if e.iter().all(|&v| v < l) {
            return Ok(false);
        }
        new_edges.push(e.clone());
    }
    new_edges.sort();
    let new_vertices: Vec<usize> = (l..g.n()).collect();
    let inc = g.incidence();
    let in_h = (0..g.n()).map(|v| v < l).collect();
    let mut search = ShapeSearch::new(g, &inc, in_h, m, pair.v_rel(), limits.eval_budget);
    search.run()?;
    if !search.found.contains_key(&(new_vertices, new_edges)) {
        return Ok(false);
    }
    Ok(under_bound(&max_density(g).density, g.s(), m))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionStep {
    pub extension: CyclicExtension,
    /// Remaining edges of `G` among the vertices reached after this step.
    pub augmentation: Vec<Vec<usize>>,
}

/// Chain from the single vertex `start` to all of `G`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub start: usize,
    pub steps: Vec<DecompositionStep>,
}

impl Decomposition {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// A shortest m-decomposition of `G`, or `None` when `G ∉ H_m`.
///
/// Since `rho_max` is monotone, membership reduces to the density bound on
/// `G` plus a chain of vertex sets each reached by one attachment shape
/// inside `G`; the chain is found by breadth-first search over vertex
/// subsets.
pub fn m_decomposition(g: &Hypergraph, m: usize, limits: &Limits) -> Result<Option<Decomposition>> {
    if m == 0 {
        return Err(Error::Domain("m must be at least 1".into()));
    }
    let n = g.n();
    if n > limits.decompose_cap || n > 31 {
        return Err(Error::CapExceeded {
            what: "v(G) for m-decomposition",
            actual: n,
            cap: limits.decompose_cap.min(31),
        });
    }
    if n == 1 {
        return Ok(Some(Decomposition {
            start: 0,
            steps: Vec::new(),
        }));
    }
    if !under_bound(&max_density(g).density, g.s(), m) {
        return Ok(None);
    }
    let full: u32 = (1u32 << n) - 1;
    let inc = g.incidence();
    let mut parent: HashMap<u32, Option<(u32, CyclicExtension)>> = HashMap::new();
    let mut queue = VecDeque::new();
    for x in 0..n {
        parent.insert(1 << x, None);
        queue.push_back(1u32 << x);
    }
    let mut spent = 0u64;
    while let Some(w) = queue.pop_front() {
        if w == full {
            break;
        }
        let in_h = (0..n).map(|v| w >> v & 1 == 1).collect();
        let mut search = ShapeSearch::new(g, &inc, in_h, m, n, limits.eval_budget - spent.min(limits.eval_budget));
        search.run()?;
        spent += search.steps;
        for ext in search.found.into_values() {
            let next = ext.new_vertices.iter().fold(w, |acc, &v| acc | 1 << v);
            if let std::collections::hash_map::Entry::Vacant(slot) = parent.entry(next) {
                slot.insert(Some((w, ext)));
                queue.push_back(next);
            }
        }
    }
    if !parent.contains_key(&full) {
        return Ok(None);
    }
    let mut chain = Vec::new();
    let mut cur = full;
    while let Some(Some((prev, ext))) = parent.get(&cur) {
        chain.push((*prev, cur, ext.clone()));
        cur = *prev;
    }
    chain.reverse();
    let within = |mask: u32| -> Vec<Vec<usize>> {
        g.edges()
            .iter()
            .filter(|e| e.iter().all(|&v| mask >> v & 1 == 1))
            .cloned()
            .collect()
    };
    let steps = chain
        .into_iter()
        .map(|(prev, next, extension)| {
            let before = within(prev);
            let augmentation = within(next)
                .into_iter()
                .filter(|e| !before.contains(e) && !extension.edges.contains(e))
                .collect();
            DecompositionStep {
                extension,
                augmentation,
            }
        })
        .collect();
    Ok(Some(Decomposition {
        start: cur.trailing_zeros() as usize,
        steps,
    }))
}

/// How `1 / rho_max(G)` sits relative to `s - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum InverseDensityForm {
    /// `1 / rho_max = s - 1`.
    Exact,
    /// `1 / rho_max = s - 1 - 1 / (m + a/b)` with `a/b` in lowest terms
    /// (`a` may be non-positive when the density bound is violated).
    Offset { a: BigInt, b: BigInt },
    /// `1 / rho_max > s - 1`.
    Above,
}

impl InverseDensityForm {
    /// `Exact`, or `Offset` with `1 <= a <= m`.
    pub fn is_admissible(&self, m: usize) -> bool {
        match self {
            InverseDensityForm::Exact => true,
            InverseDensityForm::Offset { a, .. } => a.is_positive() && *a <= BigInt::from(m),
            InverseDensityForm::Above => false,
        }
    }
}

pub fn inverse_density_form(g: &Hypergraph, m: usize) -> Result<InverseDensityForm> {
    let rho = max_density(g).density;
    if rho.is_zero() {
        return Err(Error::Domain("hypergraph has no edges".into()));
    }
    let s1 = Rational::integer(g.s() as i64 - 1);
    let gap = &s1 - &rho.recip();
    if gap.is_zero() {
        return Ok(InverseDensityForm::Exact);
    }
    if gap.is_negative() {
        return Ok(InverseDensityForm::Above);
    }
    let rest = gap.recip() - Rational::integer(m as i64);
    Ok(InverseDensityForm::Offset {
        a: rest.numer().clone(),
        b: rest.denom().clone(),
    })
}

/// A random member of `H_m` with at most `max_v` vertices, grown from a
/// single vertex by random attachments and edge augmentations that keep
/// the density bound.
pub fn random_hm_member<R: Rng + ?Sized>(rng: &mut R, s: usize, m: usize, max_v: usize) -> Result<Hypergraph> {
    if s < 2 || m == 0 || max_v == 0 {
        return Err(Error::Domain(format!("need s >= 2, m >= 1, max_v >= 1; got s={s}, m={m}, max_v={max_v}")));
    }
    let mut g = Hypergraph::edgeless(s, 1)?;
    let target = rng.gen_range(1..=max_v);
    for _ in 0..8 * max_v {
        if g.n() >= target {
            break;
        }
        let candidate = if rng.gen_bool(0.2) {
            random_augmentation(rng, &g)
        } else {
            random_attachment(rng, &g, m)
        };
        let Some(next) = candidate else { continue };
        if next.n() <= max_v && under_bound(&max_density(&next).density, s, m) {
            g = next;
        }
    }
    Ok(g)
}

fn random_augmentation<R: Rng + ?Sized>(rng: &mut R, g: &Hypergraph) -> Option<Hypergraph> {
    if g.n() < g.s() {
        return None;
    }
    let mut e = sample(rng, g.n(), g.s()).into_vec();
    e.sort_unstable();
    if g.has_sorted_edge(&e) {
        return None;
    }
    g.with_edges([e]).ok()
}

fn random_attachment<R: Rng + ?Sized>(rng: &mut R, g: &Hypergraph, m: usize) -> Option<Hypergraph> {
    let (s, n) = (g.s(), g.n());
    let case = rng.gen_range(0..3);
    if case == 2 {
        let top = (s - 1).min(n);
        if top < 2 {
            return None;
        }
        let l = rng.gen_range(2..=top);
        let mut e = sample(rng, n, l).into_vec();
        e.extend(n..n + s - l);
        return grow(g, n + s - l, vec![e]);
    }
    if m < 2 || (case == 1 && n < 2) {
        return None;
    }
    let k = rng.gen_range(1..=m - 1);
    let picked = sample(rng, n, 1 + usize::from(case == 1)).into_vec();
    let x1 = picked[0];
    let ys: Vec<usize> = (n..n + k * (s - 1)).collect();
    let mut edges = vec![std::iter::once(x1).chain(ys[..s - 1].iter().copied()).collect::<Vec<_>>()];
    for i in 1..k {
        edges.push(ys[i * (s - 1) - 1..=(i + 1) * (s - 1) - 1].to_vec());
    }
    // closing edge: last path vertex, optional second root, z's, u's
    let second = usize::from(case == 1);
    let max_l = s - 1 - second - usize::from(case == 0);
    let l = rng.gen_range(0..=max_l);
    let u_count = s - 1 - second - l;
    let pool = ys.len() - 1;
    if u_count > pool {
        return None;
    }
    let zs: Vec<usize> = (ys[ys.len() - 1] + 1..ys[ys.len() - 1] + 1 + l).collect();
    let mut closing = vec![*ys.last().expect("nonempty path")];
    if case == 1 {
        closing.push(picked[1]);
    }
    closing.extend(&zs);
    closing.extend(sample(rng, pool, u_count).into_iter().map(|i| ys[i]));
    closing.sort_unstable();
    if edges.iter().any(|e| {
        let mut e = e.clone();
        e.sort_unstable();
        e == closing
    }) {
        return None;
    }
    edges.push(closing);
    grow(g, n + ys.len() + l, edges)
}

fn grow(g: &Hypergraph, n: usize, edges: Vec<Vec<usize>>) -> Option<Hypergraph> {
    let all = g.edges().iter().cloned().chain(edges.into_iter().map(|mut e| {
        e.sort_unstable();
        e
    }));
    Hypergraph::new(g.s(), n, all.collect::<Vec<_>>()).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn limits() -> Limits {
        Limits::default()
    }

    /// Loose cycle rooted at a vertex lying in exactly one of its edges.
    fn cycle_from_non_junction(s: usize, len: usize) -> Hypergraph {
        let c = Hypergraph::loose_cycle(s, len).unwrap();
        let n = c.n();
        let perm: Vec<usize> = (0..n).map(|v| (v + n - 1) % n).collect();
        c.relabel(&perm).unwrap()
    }

    #[test]
    fn loose_cycle_is_a_cyclic_extension() {
        let l = limits();
        let c = cycle_from_non_junction(3, 3);
        assert_eq!(c.degrees()[0], 1);
        let pair = RootedPair::new(c, 1).unwrap();
        assert!(!is_cyclic_m_extension(&pair, 2, &l).unwrap());
        for m in 3..=5 {
            assert!(is_cyclic_m_extension(&pair, m, &l).unwrap());
        }
    }

    #[test]
    fn case_one_with_no_fresh_closing_vertices() {
        // s = 3, k = 2: closing edge {y4, y1, y2}
        let g = Hypergraph::new(3, 5, vec![vec![0, 1, 2], vec![2, 3, 4], vec![1, 2, 4]]).unwrap();
        let pair = RootedPair::new(g, 1).unwrap();
        assert_eq!(super::super::pair_density(&pair).unwrap(), Rational::new(3, 4));
        // rho_max(G) = 3/5 is not below m/(2m-1) for any m >= 3
        assert!(!is_cyclic_m_extension(&pair, 3, &limits()).unwrap());
    }

    #[test]
    fn single_edge_through_two_roots() {
        let pair = RootedPair::new(Hypergraph::single_edge(3).unwrap(), 2).unwrap();
        assert!(is_cyclic_m_extension(&pair, 1, &limits()).unwrap());
        let s2 = RootedPair::new(Hypergraph::single_edge(2).unwrap(), 1).unwrap();
        assert!(!is_cyclic_m_extension(&s2, 3, &limits()).unwrap());
    }

    #[test]
    fn dense_attachment_is_rejected() {
        // single edge through two roots of an already dense root part
        let k = Hypergraph::complete(3, 5).unwrap();
        let mut edges = k.edges().to_vec();
        edges.push(vec![0, 1, 5]);
        let g = Hypergraph::new(3, 6, edges).unwrap();
        let pair = RootedPair::new(g, 5).unwrap();
        assert!(!is_cyclic_m_extension(&pair, 3, &limits()).unwrap());
    }

    #[test]
    fn enumerates_attachments_in_a_host() {
        let c = cycle_from_non_junction(3, 3);
        let found = cyclic_extensions(&c, &[0], 3, 10, &limits()).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].case, CyclicCase::ReturnPath);
        assert_eq!(found[0].new_vertices, (1..6).collect::<Vec<_>>());
        assert!(cyclic_extensions(&c, &[0], 2, 10, &limits()).unwrap().is_empty());
    }

    #[test]
    fn decompositions() {
        let l = limits();
        let single = m_decomposition(&Hypergraph::edgeless(3, 1).unwrap(), 2, &l).unwrap().unwrap();
        assert!(single.is_empty());
        let c = Hypergraph::loose_cycle(3, 4).unwrap();
        assert_eq!(m_decomposition(&c, 4, &l).unwrap().unwrap().len(), 1);
        // two 3-cycles glued at a vertex lying in one edge of each
        let a = cycle_from_non_junction(3, 3);
        let shift = |v: usize| if v == 0 { 0 } else { v + 5 };
        let mut edges = a.edges().to_vec();
        edges.extend(a.edges().iter().map(|e| e.iter().map(|&v| shift(v)).collect::<Vec<_>>()));
        let bouquet = Hypergraph::new(3, 11, edges).unwrap();
        let d = m_decomposition(&bouquet, 3, &l).unwrap().unwrap();
        assert_eq!(d.len(), 2);
        assert!(m_decomposition(&Hypergraph::complete(3, 5).unwrap(), 3, &l).unwrap().is_none());
        assert!(m_decomposition(&Hypergraph::edgeless(3, 2).unwrap(), 3, &l).unwrap().is_none());
    }

    #[test]
    fn inverse_density_of_a_cycle() {
        let c = Hypergraph::loose_cycle(3, 4).unwrap();
        assert_eq!(inverse_density_form(&c, 4).unwrap(), InverseDensityForm::Exact);
    }

    #[test]
    fn random_members_decompose() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let l = limits();
        for _ in 0..10 {
            let g = random_hm_member(&mut rng, 3, 3, 12).unwrap();
            assert!(m_decomposition(&g, 3, &l).unwrap().is_some(), "{g:?}");
        }
    }
}
