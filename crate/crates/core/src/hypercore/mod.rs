//! The s-uniform hypergraph carrier and its exact structural measures.

mod flow;
mod iso;
mod json;

use std::collections::VecDeque;
use std::fmt;

use crate::combinatorics::for_each_combination;
use crate::error::{Error, Result};
use crate::rational::Rational;

pub use flow::{max_density, max_density_brute, DensestSubgraph};
pub use iso::{
    automorphism_count, automorphisms, count_copies, count_embeddings, for_each_embedding,
    EmbeddingMode,
};

/// A list of target vertex ids, one per source vertex.
pub type VertexMap = Vec<usize>;

/// An s-uniform hypergraph on vertices `0..n` with a canonical edge list:
/// every edge sorted ascending, edges sorted lexicographically, no duplicates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    s: usize,
    n: usize,
    edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// Builds a hypergraph, normalizing vertex order inside edges and
    /// dropping duplicate edges.
    pub fn new(s: usize, n: usize, edges: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        if s < 2 {
            return Err(Error::InvalidHypergraph(format!("uniformity s={s} must be at least 2")));
        }
        if n == 0 {
            return Err(Error::InvalidHypergraph("vertex count must be at least 1".into()));
        }
        let mut out = Vec::new();
        for (i, mut e) in edges.into_iter().enumerate() {
            e.sort_unstable();
            if e.len() != s {
                return Err(Error::InvalidHypergraph(format!(
                    "edge {i} has {} vertices, expected {s}",
                    e.len()
                )));
            }
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidHypergraph(format!("edge {i} repeats a vertex")));
            }
            if let Some(&v) = e.iter().find(|&&v| v >= n) {
                return Err(Error::InvalidHypergraph(format!(
                    "edge {i}: vertex {v} out of range for n={n}"
                )));
            }
            out.push(e);
        }
        out.sort();
        out.dedup();
        Ok(Hypergraph { s, n, edges: out })
    }

    pub fn edgeless(s: usize, n: usize) -> Result<Self> {
        Hypergraph::new(s, n, Vec::new())
    }

    pub fn single_edge(s: usize) -> Result<Self> {
        Hypergraph::new(s, s, vec![(0..s).collect()])
    }

    /// All `C(n, s)` edges.
    pub fn complete(s: usize, n: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for_each_combination(n, s, |c| {
            edges.push(c.to_vec());
            true
        });
        Hypergraph::new(s, n, edges)
    }

    /// Loose path with `len` edges: consecutive edges share exactly one
    /// vertex, `1 + len (s - 1)` vertices. Vertex 0 and the last vertex are
    /// the endpoints.
    pub fn loose_path(s: usize, len: usize) -> Result<Self> {
        let n = 1 + len * (s - 1);
        let edges = (0..len)
            .map(|i| (i * (s - 1)..i * (s - 1) + s).collect())
            .collect::<Vec<_>>();
        Hypergraph::new(s, n, edges)
    }

    /// Loose cycle with `len >= 2` edges on `len (s - 1)` vertices.
    pub fn loose_cycle(s: usize, len: usize) -> Result<Self> {
        if len < 2 {
            return Err(Error::Domain("a loose cycle needs at least 2 edges".into()));
        }
        let n = len * (s - 1);
        let edges = (0..len)
            .map(|i| (0..s).map(|j| (i * (s - 1) + j) % n).collect())
            .collect::<Vec<_>>();
        Hypergraph::new(s, n, edges)
    }

    /// Disjoint union; vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Hypergraph) -> Result<Self> {
        if self.s != other.s {
            return Err(Error::Domain("uniformity mismatch".into()));
        }
        let shift = self.n;
        let edges = self
            .edges
            .iter()
            .cloned()
            .chain(other.edges.iter().map(|e| e.iter().map(|v| v + shift).collect()));
        Hypergraph::new(self.s, self.n + other.n, edges)
    }

    /// Relabels vertices: vertex `v` becomes `perm[v]`. `perm` must be a
    /// permutation of `0..n`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.n];
        if perm.len() != self.n || perm.iter().any(|&p| p >= self.n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::Domain("relabel expects a permutation of the vertex set".into()));
        }
        let edges = self.edges.iter().map(|e| e.iter().map(|&v| perm[v]).collect());
        Hypergraph::new(self.s, self.n, edges)
    }

    /// Same vertex set with extra edges.
    pub fn with_edges(&self, extra: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        Hypergraph::new(self.s, self.n, self.edges.iter().cloned().chain(extra))
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    /// Membership test; `vertices` may be in any order. Repeated vertices
    /// never form an edge.
    pub fn has_edge(&self, vertices: &[usize]) -> bool {
        if vertices.len() != self.s {
            return false;
        }
        let mut key = vertices.to_vec();
        key.sort_unstable();
        if key.windows(2).any(|w| w[0] == w[1]) {
            return false;
        }
        self.edges.binary_search(&key).is_ok()
    }

    /// Membership test for an already sorted key.
    pub(crate) fn has_sorted_edge(&self, key: &[usize]) -> bool {
        self.edges.binary_search_by(|e| e.as_slice().cmp(key)).is_ok()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            for &v in e {
                deg[v] += 1;
            }
        }
        deg
    }

    /// Edge indices incident to each vertex.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n];
        for (i, e) in self.edges.iter().enumerate() {
            for &v in e {
                inc[v].push(i);
            }
        }
        inc
    }

    /// Sorted list of vertices sharing an edge with each vertex.
    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut nb = vec![Vec::new(); self.n];
        for e in &self.edges {
            for &u in e {
                for &w in e {
                    if u != w {
                        nb[u].push(w);
                    }
                }
            }
        }
        for list in &mut nb {
            list.sort_unstable();
            list.dedup();
        }
        nb
    }

    /// Number of edges entirely inside `set` (membership vector).
    pub fn edges_within(&self, set: &[bool]) -> usize {
        self.edges.iter().filter(|e| e.iter().all(|&v| set[v])).count()
    }

    /// `e(G) / v(G)`.
    pub fn density(&self) -> Rational {
        Rational::new(self.edges.len() as i64, self.n as i64)
    }

    /// Induced subhypergraph on `vertices`, relabeled in ascending order.
    pub fn induced(&self, vertices: &[usize]) -> Result<Hypergraph> {
        if vertices.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut w = vertices.to_vec();
        w.sort_unstable();
        w.dedup();
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in w.iter().enumerate() {
            if v >= self.n {
                return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
            }
            index[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| e.iter().all(|&v| index[v] != usize::MAX))
            .map(|e| e.iter().map(|&v| index[v]).collect());
        Hypergraph::new(self.s, w.len(), edges)
    }

    /// Deletes vertex `x` together with its incident edges.
    pub fn remove_vertex(&self, x: usize) -> Result<Hypergraph> {
        let rest: Vec<usize> = (0..self.n).filter(|&v| v != x).collect();
        self.induced(&rest)
    }

    /// Shortest-path distance, counting edges, under the "share an edge"
    /// adjacency. `None` when `y` is unreachable from `x`.
    pub fn distance(&self, x: usize, y: usize) -> Result<Option<usize>> {
        for v in [x, y] {
            if v >= self.n {
                return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
            }
        }
        Ok(self.distances_from(x)[y])
    }

    /// BFS distances from `x` to every vertex.
    pub fn distances_from(&self, x: usize) -> Vec<Option<usize>> {
        self.distances_avoiding(x, None)
    }

    /// BFS distances from `x` in the hypergraph with `avoid` (and its
    /// incident edges) deleted.
    pub fn distances_avoiding(&self, x: usize, avoid: Option<usize>) -> Vec<Option<usize>> {
        let inc = self.incidence();
        let mut dist = vec![None; self.n];
        if Some(x) == avoid {
            return dist;
        }
        dist[x] = Some(0);
        let mut queue = VecDeque::from([x]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or(0);
            for &ei in &inc[u] {
                let e = &self.edges[ei];
                if avoid.is_some_and(|a| e.contains(&a)) {
                    continue;
                }
                for &w in e {
                    if dist[w].is_none() {
                        dist[w] = Some(du + 1);
                        queue.push_back(w);
                    }
                }
            }
        }
        dist
    }

    /// All-pairs distances.
    pub fn distance_matrix(&self) -> Vec<Vec<Option<usize>>> {
        (0..self.n).map(|x| self.distances_from(x)).collect()
    }

    /// Strictly balanced: every proper nonempty vertex subset spans a
    /// strictly smaller density than the whole hypergraph.
    pub fn is_strictly_balanced(&self) -> Result<bool> {
        if self.edges.is_empty() {
            return Err(Error::Domain("strict balance needs at least one edge".into()));
        }
        let rho = self.density();
        for x in 0..self.n {
            if self.n == 1 {
                break;
            }
            let rest = self.remove_vertex(x)?;
            if max_density(&rest).density >= rho {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hypergraph(s={}, n={}, edges={:?})", self.s, self.n, self.edges)
    }
}
