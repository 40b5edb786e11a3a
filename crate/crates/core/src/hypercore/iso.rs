//! Backtracking embeddings, automorphisms and copy counts.

use super::Hypergraph;
use crate::combinatorics::{falling_factorial, for_each_combination};
use crate::error::{Error, Result};
use crate::limits::Limits;

/// Which maps count as embeddings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmbeddingMode {
    /// Edges of the pattern land on edges of the host.
    Subgraph,
    /// Additionally, non-edges land on non-edges.
    Induced,
}

struct Search<'a> {
    pattern: &'a Hypergraph,
    host: &'a Hypergraph,
    mode: EmbeddingMode,
    order: Vec<usize>,
    /// Pattern edges whose last-assigned vertex (in `order`) is the key.
    closing: Vec<Vec<usize>>,
    /// For each position, an earlier-assigned neighbor to draw candidates from.
    anchor: Vec<Option<usize>>,
    pattern_deg: Vec<usize>,
    host_deg: Vec<usize>,
    host_nb: Vec<Vec<usize>>,
    map: Vec<usize>,
    used: Vec<bool>,
}

const UNSET: usize = usize::MAX;

impl<'a> Search<'a> {
    fn new(pattern: &'a Hypergraph, host: &'a Hypergraph, mode: EmbeddingMode, vertices: &[usize]) -> Self {
        let nb = pattern.neighbors();
        let pattern_deg = pattern.degrees();
        // BFS order, restarting at the highest-degree unvisited vertex
        let mut order = Vec::with_capacity(vertices.len());
        let mut seen = vec![false; pattern.n()];
        let mut pool: Vec<usize> = vertices.to_vec();
        pool.sort_by_key(|&v| std::cmp::Reverse(pattern_deg[v]));
        for &start in &pool {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut head = order.len();
            order.push(start);
            while head < order.len() {
                let u = order[head];
                head += 1;
                for &w in &nb[u] {
                    if !seen[w] {
                        seen[w] = true;
                        order.push(w);
                    }
                }
            }
        }
        let mut pos = vec![usize::MAX; pattern.n()];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let mut closing = vec![Vec::new(); order.len()];
        for (ei, e) in pattern.edges().iter().enumerate() {
            let last = e.iter().map(|&v| pos[v]).max().unwrap_or(0);
            closing[last].push(ei);
        }
        let anchor = order
            .iter()
            .enumerate()
            .map(|(i, &v)| nb[v].iter().copied().find(|&w| pos[w] < i))
            .collect();
        Search {
            pattern,
            host,
            mode,
            order,
            closing,
            anchor,
            pattern_deg,
            host_deg: host.degrees(),
            host_nb: host.neighbors(),
            map: vec![UNSET; pattern.n()],
            used: vec![false; host.n()],
        }
    }

    fn consistent(&self, depth: usize, key: &mut Vec<usize>) -> bool {
        for &ei in &self.closing[depth] {
            key.clear();
            key.extend(self.pattern.edges()[ei].iter().map(|&v| self.map[v]));
            key.sort_unstable();
            if !self.host.has_sorted_edge(key) {
                return false;
            }
        }
        if self.mode == EmbeddingMode::Induced {
            let s = self.pattern.s();
            if depth + 1 < s {
                return true;
            }
            let u = self.order[depth];
            let earlier = &self.order[..depth];
            let mut ok = true;
            for_each_combination(earlier.len(), s - 1, |idx| {
                let mut pv: Vec<usize> = idx.iter().map(|&i| earlier[i]).collect();
                pv.push(u);
                pv.sort_unstable();
                let in_pattern = self.pattern.has_sorted_edge(&pv);
                if !in_pattern {
                    key.clear();
                    key.extend(pv.iter().map(|&v| self.map[v]));
                    key.sort_unstable();
                    if self.host.has_sorted_edge(key) {
                        ok = false;
                    }
                }
                ok
            });
            return ok;
        }
        true
    }

    fn run(&mut self, depth: usize, f: &mut dyn FnMut(&[usize]) -> bool, key: &mut Vec<usize>) -> bool {
        if depth == self.order.len() {
            return f(&self.map);
        }
        let u = self.order[depth];
        let candidates: Vec<usize> = match self.anchor[depth] {
            Some(w) => self.host_nb[self.map[w]].clone(),
            None => (0..self.host.n()).collect(),
        };
        for c in candidates {
            if self.used[c] || self.host_deg[c] < self.pattern_deg[u] {
                continue;
            }
            self.map[u] = c;
            self.used[c] = true;
            let go = !self.consistent(depth, key) || self.run(depth + 1, f, key);
            self.used[c] = false;
            self.map[u] = UNSET;
            if !go {
                return false;
            }
        }
        true
    }
}

/// Calls `f` with every injective map `pattern -> host` (indexed by
/// pattern vertex) that is an embedding in the given mode. Stops when `f`
/// returns `false`.
pub fn for_each_embedding(
    pattern: &Hypergraph,
    host: &Hypergraph,
    mode: EmbeddingMode,
    mut f: impl FnMut(&[usize]) -> bool,
) {
    if pattern.s() != host.s() || pattern.n() > host.n() {
        return;
    }
    let all: Vec<usize> = (0..pattern.n()).collect();
    let mut search = Search::new(pattern, host, mode, &all);
    let mut key = Vec::with_capacity(pattern.s());
    search.run(0, &mut f, &mut key);
}

/// Number of embeddings. In subgraph mode isolated pattern vertices are
/// counted by a falling factorial instead of enumerated.
pub fn count_embeddings(pattern: &Hypergraph, host: &Hypergraph, mode: EmbeddingMode) -> u128 {
    if pattern.s() != host.s() || pattern.n() > host.n() {
        return 0;
    }
    if mode == EmbeddingMode::Induced {
        let mut count = 0u128;
        for_each_embedding(pattern, host, mode, |_| {
            count += 1;
            true
        });
        return count;
    }
    let deg = pattern.degrees();
    let active: Vec<usize> = (0..pattern.n()).filter(|&v| deg[v] > 0).collect();
    let isolated = pattern.n() - active.len();
    let mut search = Search::new(pattern, host, mode, &active);
    let mut key = Vec::with_capacity(pattern.s());
    let mut count = 0u128;
    search.run(
        0,
        &mut |_| {
            count += 1;
            true
        },
        &mut key,
    );
    count * falling_factorial(host.n() - active.len(), isolated)
}

fn check_cap(g: &Hypergraph, limits: &Limits) -> Result<()> {
    if g.n() > limits.enum_cap {
        return Err(Error::CapExceeded {
            what: "vertices for isomorphism enumeration",
            actual: g.n(),
            cap: limits.enum_cap,
        });
    }
    Ok(())
}

/// Every automorphism as a vertex map.
pub fn automorphisms(g: &Hypergraph, limits: &Limits) -> Result<Vec<Vec<usize>>> {
    check_cap(g, limits)?;
    let mut out = Vec::new();
    for_each_embedding(g, g, EmbeddingMode::Subgraph, |m| {
        out.push(m.to_vec());
        true
    });
    Ok(out)
}

pub fn automorphism_count(g: &Hypergraph, limits: &Limits) -> Result<u128> {
    check_cap(g, limits)?;
    Ok(count_embeddings(g, g, EmbeddingMode::Subgraph))
}

/// Number of subhypergraphs of `host` isomorphic to `pattern`
/// (non-induced).
pub fn count_copies(host: &Hypergraph, pattern: &Hypergraph, limits: &Limits) -> Result<u128> {
    if host.s() != pattern.s() {
        return Err(Error::Domain("uniformity mismatch".into()));
    }
    let aut = automorphism_count(pattern, limits)?;
    Ok(count_embeddings(pattern, host, EmbeddingMode::Subgraph) / aut)
}
