//! Densest subhypergraph via parametric min-cut, plus the brute-force
//! subset enumeration it is checked against.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::Hypergraph;
use crate::rational::Rational;

/// Maximum density together with one vertex set achieving it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensestSubgraph {
    pub density: Rational,
    pub witness: Vec<usize>,
}

const INF: i64 = i64::MAX / 4;

struct Arc {
    to: usize,
    rev: usize,
    cap: i64,
}

/// Dinic's algorithm on an adjacency-list residual graph.
struct Dinic {
    graph: Vec<Vec<Arc>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Dinic {
    fn new(n: usize) -> Self {
        Dinic {
            graph: (0..n).map(|_| Vec::new()).collect(),
            level: vec![0; n],
            iter: vec![0; n],
        }
    }

    fn add_arc(&mut self, from: usize, to: usize, cap: i64) {
        let rev_from = self.graph[to].len();
        let rev_to = self.graph[from].len();
        self.graph[from].push(Arc { to, rev: rev_from, cap });
        self.graph[to].push(Arc { to: from, rev: rev_to, cap: 0 });
    }

    fn bfs(&mut self, source: usize) {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for a in &self.graph[u] {
                if a.cap > 0 && self.level[a.to] < 0 {
                    self.level[a.to] = self.level[u] + 1;
                    queue.push_back(a.to);
                }
            }
        }
    }

    fn dfs(&mut self, u: usize, sink: usize, pushed: i64) -> i64 {
        if u == sink {
            return pushed;
        }
        while self.iter[u] < self.graph[u].len() {
            let i = self.iter[u];
            let (to, cap) = (self.graph[u][i].to, self.graph[u][i].cap);
            if cap > 0 && self.level[u] < self.level[to] {
                let d = self.dfs(to, sink, pushed.min(cap));
                if d > 0 {
                    self.graph[u][i].cap -= d;
                    let rev = self.graph[u][i].rev;
                    self.graph[to][rev].cap += d;
                    return d;
                }
            }
            self.iter[u] += 1;
        }
        0
    }

    fn max_flow(&mut self, source: usize, sink: usize) -> i64 {
        let mut flow = 0;
        loop {
            self.bfs(source);
            if self.level[sink] < 0 {
                return flow;
            }
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(source, sink, INF);
                if f == 0 {
                    break;
                }
                flow += f;
            }
        }
    }

    /// Nodes reachable from `source` in the residual graph.
    fn source_side(&mut self, source: usize) -> Vec<bool> {
        self.bfs(source);
        self.level.iter().map(|&l| l >= 0).collect()
    }
}

/// Maximizes `q e(W) - p |W|` over vertex sets `W` (including the empty
/// set). Returns the optimum and a maximizing set.
fn best_excess(g: &Hypergraph, p: i64, q: i64) -> (i64, Vec<usize>) {
    let m = g.edge_count();
    let n = g.n();
    let source = 0;
    let sink = 1;
    let mut net = Dinic::new(2 + m + n);
    for (i, e) in g.edges().iter().enumerate() {
        net.add_arc(source, 2 + i, q);
        for &v in e {
            net.add_arc(2 + i, 2 + m + v, INF);
        }
    }
    for v in 0..n {
        net.add_arc(2 + m + v, sink, p);
    }
    let cut = net.max_flow(source, sink);
    let side = net.source_side(source);
    let witness = (0..n).filter(|&v| side[2 + m + v]).collect();
    (q * m as i64 - cut, witness)
}

fn small(x: &BigInt) -> i64 {
    x.to_i64().expect("density numerators stay within i64 at supported sizes")
}

/// `max_{W nonempty} e(G[W]) / |W|` computed exactly.
///
/// Binary search on the guess `g = p/q`; each probe is one min-cut on the
/// bipartite edge/vertex network. Distinct candidate densities have
/// denominators at most `n`, so they are at least `1/n^2` apart, which
/// bounds the search.
pub fn max_density(g: &Hypergraph) -> DensestSubgraph {
    if g.edge_count() == 0 {
        return DensestSubgraph {
            density: Rational::zero(),
            witness: vec![0],
        };
    }
    let n = g.n() as i64;
    let gap = Rational::new(1, n * n);
    let mut best: Vec<usize> = (0..g.n()).collect();
    let mut lo = g.density();
    // no vertex set is denser than `hi`
    let mut hi = Rational::integer(g.edge_count() as i64);
    while &hi - &lo >= gap {
        let mid = (&lo + &hi) / 2;
        let (value, witness) = best_excess(g, small(mid.numer()), small(mid.denom()));
        if value > 0 && !witness.is_empty() {
            let found = Rational::new(
                g.edges_within(&membership(g.n(), &witness)) as i64,
                witness.len() as i64,
            );
            lo = found;
            best = witness;
        } else {
            hi = mid;
        }
    }
    DensestSubgraph {
        density: lo,
        witness: best,
    }
}

fn membership(n: usize, set: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &v in set {
        m[v] = true;
    }
    m
}

/// Exhaustive subset enumeration; used as the oracle for [`max_density`].
///
/// Panics when `n > 24`.
pub fn max_density_brute(g: &Hypergraph) -> DensestSubgraph {
    assert!(g.n() <= 24, "brute-force densest subgraph limited to 24 vertices");
    let n = g.n();
    let masks: Vec<u32> = g
        .edges()
        .iter()
        .map(|e| e.iter().fold(0u32, |m, &v| m | 1 << v))
        .collect();
    let mut best_e = 0usize;
    let mut best_v = 1usize;
    let mut best_mask = 1u32;
    for mask in 1u32..(1u32 << n) {
        let e = masks.iter().filter(|&&em| em & mask == em).count();
        let v = mask.count_ones() as usize;
        if e * best_v > best_e * v {
            best_e = e;
            best_v = v;
            best_mask = mask;
        }
    }
    DensestSubgraph {
        density: Rational::new(best_e as i64, best_v as i64),
        witness: (0..n).filter(|&v| best_mask >> v & 1 == 1).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edgeless_has_zero_density_and_single_witness() {
        let g = Hypergraph::edgeless(3, 5).unwrap();
        let d = max_density(&g);
        assert_eq!(d.density, Rational::zero());
        assert_eq!(d.witness.len(), 1);
    }

    #[test]
    fn dense_part_is_found() {
        // K^3_4 (density 1) plus a pendant path
        let g = Hypergraph::new(
            3,
            8,
            vec![
                vec![0, 1, 2],
                vec![0, 1, 3],
                vec![0, 2, 3],
                vec![1, 2, 3],
                vec![3, 4, 5],
                vec![5, 6, 7],
            ],
        )
        .unwrap();
        let d = max_density(&g);
        assert_eq!(d.density, Rational::one());
        assert_eq!(d.witness, vec![0, 1, 2, 3]);
        assert_eq!(max_density_brute(&g).density, Rational::one());
    }

    #[test]
    fn witness_attains_reported_density() {
        let g = Hypergraph::loose_cycle(3, 3)
            .unwrap()
            .disjoint_union(&Hypergraph::single_edge(3).unwrap())
            .unwrap();
        let d = max_density(&g);
        assert_eq!(d.density, Rational::new(1, 2));
        let m = membership(g.n(), &d.witness);
        assert_eq!(
            Rational::new(g.edges_within(&m) as i64, d.witness.len() as i64),
            d.density
        );
    }
}
