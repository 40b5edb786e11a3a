//! Extensions of root tuples inside a host, (K, T)-maximality and the
//! maximal-extension count `N^r`.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

use super::{classify_pair, PairClass, RootedPair};
use crate::combinatorics::{for_each_combination, for_each_permutation};
use crate::error::{Error, Result};
use crate::hypercore::{Hypergraph, VertexMap};
use crate::limits::Limits;
use crate::rational::Rational;

/// Host with a cached neighbor table.
struct Host<'a> {
    g: &'a Hypergraph,
    nb: Vec<Vec<usize>>,
}

impl<'a> Host<'a> {
    fn new(g: &'a Hypergraph) -> Self {
        Host { g, nb: g.neighbors() }
    }
}

/// Backtracking over images of the non-root vertices of `pair`.
///
/// `img[0..roots]` is preset to the root tuple. Each new vertex must
/// satisfy `allowed`. Every non-H edge of `G` must map to a host edge; in
/// strict mode every other `s`-set touching a new vertex must map to a
/// non-edge. `f` sees the full image vector and returns `false` to stop.
struct Extender<'a, 'b> {
    host: &'b Host<'a>,
    pair: &'b RootedPair,
    strict: bool,
    allowed: &'b dyn Fn(usize) -> bool,
    img: Vec<usize>,
    used: Vec<bool>,
    anchor: Vec<Option<usize>>,
}

impl<'a, 'b> Extender<'a, 'b> {
    fn new(
        host: &'b Host<'a>,
        pair: &'b RootedPair,
        roots: &[usize],
        strict: bool,
        allowed: &'b dyn Fn(usize) -> bool,
    ) -> Self {
        let g = pair.g();
        let mut used = vec![false; host.g.n()];
        let mut img = vec![usize::MAX; g.n()];
        for (i, &r) in roots.iter().enumerate() {
            img[i] = r;
            used[r] = true;
        }
        let gnb = g.neighbors();
        let anchor = (0..g.n())
            .map(|j| {
                // an earlier vertex sharing a non-H edge with j
                gnb[j].iter().copied().find(|&w| {
                    w < j && pair.new_edges().any(|e| e.contains(&w) && e.contains(&j))
                })
            })
            .collect();
        Extender {
            host,
            pair,
            strict,
            allowed,
            img,
            used,
            anchor,
        }
    }

    fn consistent(&self, j: usize, key: &mut Vec<usize>) -> bool {
        let g = self.pair.g();
        let s = g.s();
        let mut ok = true;
        for_each_combination(j, s - 1, |others| {
            let mut pre: Vec<usize> = others.to_vec();
            pre.push(j);
            let in_g = g.has_sorted_edge(&pre);
            if in_g || self.strict {
                key.clear();
                key.extend(pre.iter().map(|&v| self.img[v]));
                key.sort_unstable();
                let in_host = self.host.g.has_sorted_edge(key);
                ok = in_g == in_host || (!self.strict && !in_g);
            }
            ok
        });
        ok
    }

    fn run(&mut self, j: usize, f: &mut dyn FnMut(&[usize]) -> bool, key: &mut Vec<usize>) -> bool {
        if j == self.img.len() {
            return f(&self.img);
        }
        let candidates: Vec<usize> = match self.anchor[j] {
            Some(w) => self.host.nb[self.img[w]].clone(),
            None => (0..self.host.g.n()).collect(),
        };
        for c in candidates {
            if self.used[c] || !(self.allowed)(c) {
                continue;
            }
            self.img[j] = c;
            self.used[c] = true;
            let go = !self.consistent(j, key) || self.run(j + 1, f, key);
            self.used[c] = false;
            self.img[j] = usize::MAX;
            if !go {
                return false;
            }
        }
        true
    }

    fn start(&mut self, f: &mut dyn FnMut(&[usize]) -> bool) {
        let mut key = Vec::with_capacity(self.pair.g().s());
        self.run(self.pair.roots(), f, &mut key);
    }
}

fn validate(host: &Hypergraph, roots: &[usize], pair: &RootedPair, limits: &Limits) -> Result<()> {
    if host.s() != pair.g().s() {
        return Err(Error::Domain("uniformity mismatch".into()));
    }
    if roots.len() != pair.roots() {
        return Err(Error::Domain(format!(
            "root tuple has {} vertices, pair expects {}",
            roots.len(),
            pair.roots()
        )));
    }
    let mut seen = HashSet::new();
    for &r in roots {
        if r >= host.n() {
            return Err(Error::VertexOutOfRange { vertex: r, n: host.n() });
        }
        if !seen.insert(r) {
            return Err(Error::Domain(format!("root tuple repeats vertex {r}")));
        }
    }
    if pair.v_rel() > limits.extension_cap {
        return Err(Error::CapExceeded {
            what: "v(G, H) for extension search",
            actual: pair.v_rel(),
            cap: limits.extension_cap,
        });
    }
    Ok(())
}

/// Images of the non-root vertices (in order) for every
/// `(G, (x_1..x_l))`-extension of `roots` in `host`. When `strict`, the
/// non-H edges of `G` correspond exactly to the host edges meeting the new
/// vertices; otherwise they need only be present.
pub fn extensions(
    host: &Hypergraph,
    roots: &[usize],
    pair: &RootedPair,
    strict: bool,
    limits: &Limits,
) -> Result<Vec<VertexMap>> {
    validate(host, roots, pair, limits)?;
    let h = Host::new(host);
    let mut out = Vec::new();
    let all = |_: usize| true;
    let mut ext = Extender::new(&h, pair, roots, strict, &all);
    ext.start(&mut |img| {
        out.push(img[pair.roots()..].to_vec());
        true
    });
    out.sort();
    Ok(out)
}

pub fn strict_extensions(
    host: &Hypergraph,
    roots: &[usize],
    pair: &RootedPair,
    limits: &Limits,
) -> Result<Vec<VertexMap>> {
    extensions(host, roots, pair, true, limits)
}

/// Whether `(G~, H~)` is (K, T)-maximal in `host`.
///
/// Fails when some `|V(T)|`-subset `T~` of `G~` not inside `H~`, taken in
/// some order as the root tuple, has a strict (K, T)-extension using only
/// vertices outside `G~` such that no host edge avoiding `T~` joins a new
/// vertex of that extension to `G~ \ T~`.
pub fn is_kt_maximal(
    host: &Hypergraph,
    gtilde: &[usize],
    htilde: &[usize],
    k_pair: &RootedPair,
    limits: &Limits,
) -> Result<bool> {
    let t = k_pair.roots();
    if t > gtilde.len() {
        return Err(Error::Domain(format!(
            "|V(T)| = {t} exceeds |V(G~)| = {}",
            gtilde.len()
        )));
    }
    if k_pair.v_rel() > limits.extension_cap {
        return Err(Error::CapExceeded {
            what: "v(K, T) for extension search",
            actual: k_pair.v_rel(),
            cap: limits.extension_cap,
        });
    }
    let h = Host::new(host);
    Ok(kt_maximal_with(&h, gtilde, htilde, k_pair))
}

fn kt_maximal_with(host: &Host<'_>, gtilde: &[usize], htilde: &[usize], k_pair: &RootedPair) -> bool {
    let t = k_pair.roots();
    let s = host.g.s();
    let mut in_g = vec![false; host.g.n()];
    for &v in gtilde {
        in_g[v] = true;
    }
    let outside = |v: usize| !in_g[v];
    let mut maximal = true;
    for_each_combination(gtilde.len(), t, |idx| {
        let tt: Vec<usize> = idx.iter().map(|&i| gtilde[i]).collect();
        if tt.iter().all(|v| htilde.contains(v)) {
            return true;
        }
        let rest: Vec<usize> = gtilde.iter().copied().filter(|v| !tt.contains(v)).collect();
        for_each_permutation(t, |perm| {
            let roots: Vec<usize> = perm.iter().map(|&i| tt[i]).collect();
            let mut ext = Extender::new(host, k_pair, &roots, true, &outside);
            ext.start(&mut |img| {
                let fresh = &img[t..];
                if crossing_edge(host.g, s, fresh, &rest) {
                    true
                } else {
                    maximal = false;
                    false
                }
            });
            maximal
        });
        maximal
    });
    maximal
}

/// Some host edge inside `fresh ∪ rest` meets both parts.
fn crossing_edge(host: &Hypergraph, s: usize, fresh: &[usize], rest: &[usize]) -> bool {
    let pool: Vec<usize> = fresh.iter().chain(rest).copied().collect();
    let split = fresh.len();
    let mut found = false;
    for_each_combination(pool.len(), s, |idx| {
        let touches_fresh = idx.iter().any(|&i| i < split);
        let touches_rest = idx.iter().any(|&i| i >= split);
        if touches_fresh && touches_rest {
            let mut key: Vec<usize> = idx.iter().map(|&i| pool[i]).collect();
            key.sort_unstable();
            found = host.has_sorted_edge(&key);
        }
        !found
    });
    found
}

type CatalogKey = (usize, usize, usize, Rational, usize);

fn catalog_memo() -> &'static Mutex<HashMap<CatalogKey, Arc<Vec<RootedPair>>>> {
    static MEMO: OnceLock<Mutex<HashMap<CatalogKey, Arc<Vec<RootedPair>>>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The finite part of `K_r`: every alpha-rigid or alpha-neutral pair
/// `(K, T)` with `1 <= |V(T)| <= max_roots` and `1 <= |V(K) \ V(T)| <= r`,
/// one representative per isomorphism class under permutations of roots
/// and of new vertices. Edges inside the roots are omitted since
/// extensions ignore them.
pub fn kr_catalog(
    s: usize,
    max_roots: usize,
    r: usize,
    alpha: &Rational,
    limits: &Limits,
) -> Result<Arc<Vec<RootedPair>>> {
    let key = (s, max_roots, r, alpha.clone(), limits.catalog_cap);
    if let Some(hit) = catalog_memo().lock().expect("catalog memo").get(&key) {
        return Ok(hit.clone());
    }
    let mut out = Vec::new();
    for t in 1..=max_roots {
        for j in 1..=r {
            catalog_level(s, t, j, alpha, limits, &mut out)?;
        }
    }
    let out = Arc::new(out);
    catalog_memo().lock().expect("catalog memo").insert(key, out.clone());
    Ok(out)
}

fn catalog_level(
    s: usize,
    t: usize,
    j: usize,
    alpha: &Rational,
    limits: &Limits,
    out: &mut Vec<RootedPair>,
) -> Result<()> {
    let n = t + j;
    let mut slots = Vec::new();
    for_each_combination(n, s, |c| {
        if c.iter().any(|&v| v >= t) {
            slots.push(c.to_vec());
        }
        true
    });
    if slots.len() > limits.catalog_cap {
        return Err(Error::CapExceeded {
            what: "edge slots for the rigid/neutral pair catalog",
            actual: slots.len(),
            cap: limits.catalog_cap,
        });
    }
    let mut seen = HashSet::new();
    for mask in 1u64..(1u64 << slots.len()) {
        let edges: Vec<Vec<usize>> = (0..slots.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| slots[i].clone())
            .collect();
        let canon = canonical(&edges, t, j);
        if !seen.insert(canon) {
            continue;
        }
        let pair = RootedPair::new(Hypergraph::new(s, n, edges)?, t)?;
        let class = classify_pair(&pair, alpha, limits)?.class;
        if matches!(class, PairClass::Rigid | PairClass::Neutral) {
            out.push(pair);
        }
    }
    Ok(())
}

fn canonical(edges: &[Vec<usize>], t: usize, j: usize) -> Vec<Vec<usize>> {
    let mut best: Option<Vec<Vec<usize>>> = None;
    for_each_permutation(t, |pr| {
        for_each_permutation(j, |pn| {
            let map = |v: usize| if v < t { pr[v] } else { t + pn[v - t] };
            let mut image: Vec<Vec<usize>> = edges
                .iter()
                .map(|e| {
                    let mut f: Vec<usize> = e.iter().map(|&v| map(v)).collect();
                    f.sort_unstable();
                    f
                })
                .collect();
            image.sort();
            if best.as_ref().is_none_or(|b| image < *b) {
                best = Some(image);
            }
            true
        });
        true
    });
    best.unwrap_or_default()
}

/// `N^r`: strict extensions of `roots` that are (K, T)-maximal for every
/// pair of the catalog `kr_catalog(s, v(G), r, alpha)`. The count is
/// meaningful when the pair is alpha-safe; that is not enforced.
pub fn count_maximal_extensions(
    host: &Hypergraph,
    roots: &[usize],
    pair: &RootedPair,
    alpha: &Rational,
    r: usize,
    limits: &Limits,
) -> Result<u64> {
    validate(host, roots, pair, limits)?;
    let catalog = kr_catalog(host.s(), pair.g().n(), r, alpha, limits)?;
    for k in catalog.iter() {
        if k.v_rel() > limits.extension_cap {
            return Err(Error::CapExceeded {
                what: "v(K, T) for extension search",
                actual: k.v_rel(),
                cap: limits.extension_cap,
            });
        }
    }
    let h = Host::new(host);
    let all = |_: usize| true;
    let mut ext = Extender::new(&h, pair, roots, true, &all);
    let mut count = 0u64;
    ext.start(&mut |img| {
        if catalog.iter().all(|k| kt_maximal_with(&h, img, roots, k)) {
            count += 1;
        }
        true
    });
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn limits() -> Limits {
        Limits::default()
    }

    #[test]
    fn strict_extension_examples() {
        let l = limits();
        let pair = RootedPair::one_edge_extension(3).unwrap();
        let k5 = Hypergraph::complete(3, 5).unwrap();
        assert_eq!(strict_extensions(&k5, &[1, 3], &pair, &l).unwrap().len(), 3);
        let empty = Hypergraph::edgeless(3, 5).unwrap();
        assert!(strict_extensions(&empty, &[0, 1], &pair, &l).unwrap().is_empty());
        let e = Hypergraph::single_edge(3).unwrap();
        assert_eq!(strict_extensions(&e, &[0, 1], &pair, &l).unwrap(), vec![vec![2]]);
    }

    #[test]
    fn strictness_rejects_extra_edges() {
        // the new vertex may not form an edge absent from G
        let g = Hypergraph::new(3, 4, vec![vec![0, 1, 3]]).unwrap();
        let pair = RootedPair::new(g, 3).unwrap();
        let host = Hypergraph::new(3, 5, vec![vec![0, 1, 3], vec![0, 2, 3], vec![0, 1, 4]]).unwrap();
        let strict = strict_extensions(&host, &[0, 1, 2], &pair, &limits()).unwrap();
        assert_eq!(strict, vec![vec![4]]);
        let loose = extensions(&host, &[0, 1, 2], &pair, false, &limits()).unwrap();
        assert_eq!(loose, vec![vec![3], vec![4]]);
    }

    #[test]
    fn maximality_examples() {
        let l = limits();
        let k = RootedPair::one_edge_extension(3).unwrap();
        // G~ = {0,1,2} isolated from everything else
        let host = Hypergraph::new(3, 7, vec![vec![0, 1, 2], vec![4, 5, 6]]).unwrap();
        assert!(is_kt_maximal(&host, &[0, 1, 2], &[0], &k, &l).unwrap());
        let k7 = Hypergraph::complete(3, 7).unwrap();
        assert!(!is_kt_maximal(&k7, &[0, 1, 2], &[0], &k, &l).unwrap());
    }

    #[test]
    fn empty_catalog_counts_all_strict_extensions() {
        let l = limits();
        let pair = RootedPair::one_edge_extension(3).unwrap();
        let e = Hypergraph::single_edge(3).unwrap();
        assert_eq!(count_maximal_extensions(&e, &[0, 1], &pair, &Rational::new(1, 3), 0, &l).unwrap(), 1);
    }

    #[test]
    fn catalog_contents() {
        // at alpha = 1/3 the only pairs with one new vertex and at most 3
        // roots that are not safe are the neutral triangle fan
        let cat = kr_catalog(3, 3, 1, &Rational::new(1, 3), &limits()).unwrap();
        assert_eq!(cat.len(), 1);
        assert_eq!(cat[0].roots(), 3);
        assert_eq!(cat[0].e_rel(), 3);
        let cat = kr_catalog(3, 3, 1, &Rational::one(), &limits()).unwrap();
        // every pair with at least one edge is rigid or neutral at alpha = 1
        assert!(cat.iter().all(|p| p.e_rel() >= 1));
    }
}
