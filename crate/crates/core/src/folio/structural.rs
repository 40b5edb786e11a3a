//! Direct combinatorial checks standing in for first-order sentences that
//! are too costly to model-check on large hosts.

use crate::combinatorics::{for_each_combination, subsets_of};
use crate::error::{Error, Result};
use crate::hypercore::Hypergraph;

/// For every `r` in `s-1..=level`, every `r`-set `Z` and every set `A` of
/// `(s-1)`-subsets of `Z`, some vertex outside `Z` forms an edge with
/// exactly the members of `A`. Vacuously true below level `s - 1`.
pub fn has_full_extension_property(g: &Hypergraph, level: usize) -> Result<bool> {
    let s = g.s();
    let n = g.n();
    for r in (s - 1)..=level.min(n) {
        let blocks = subsets_of(&(0..r).collect::<Vec<_>>(), s - 1);
        // 2^|blocks| patterns need that many distinct outside vertices
        if blocks.len() >= usize::BITS as usize - 1 || (1usize << blocks.len()) > n - r {
            return Ok(false);
        }
        let mut ok = true;
        let mut seen = vec![false; 1 << blocks.len()];
        let mut key = Vec::with_capacity(s);
        for_each_combination(n, r, |z| {
            seen.iter_mut().for_each(|b| *b = false);
            let mut missing = seen.len();
            for v in (0..n).filter(|v| !z.contains(v)) {
                let mut pattern = 0usize;
                for (bit, block) in blocks.iter().enumerate() {
                    key.clear();
                    key.extend(block.iter().map(|&i| z[i]));
                    key.push(v);
                    if g.has_edge(&key) {
                        pattern |= 1 << bit;
                    }
                }
                if !std::mem::replace(&mut seen[pattern], true) {
                    missing -= 1;
                    if missing == 0 {
                        break;
                    }
                }
            }
            ok = missing == 0;
            ok
        });
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Truth of the sentence built by `build_thm9_l(a1, a2, a3, s)`, decided
/// from distance tables instead of formula evaluation.
pub fn thm9_l_structural(g: &Hypergraph, a1: usize, a2: usize, a3: usize) -> Result<bool> {
    if a1 < 2 || a2 < 1 || a3 < 1 || a2 >= a1 {
        return Err(Error::Domain(format!(
            "need a1 >= 2, a2 >= 1, a3 >= 1, a2 < a1; got a1={a1}, a2={a2}, a3={a3}"
        )));
    }
    let n = g.n();
    let dist = g.distance_matrix();
    let at = |u: usize, v: usize, d: usize| dist[u][v] == Some(d);
    let cyc: Vec<bool> = (0..n).map(|x| on_short_cycle(g, &dist, x, a2)).collect();
    let q: Vec<bool> = (0..n).map(|x| (0..n).any(|w| at(x, w, a3) && cyc[w])).collect();
    let (lo, hi) = (a1 / 2, a1.div_ceil(2));
    for x1 in 0..n {
        for x2 in 0..n {
            if !at(x1, x2, a1) {
                continue;
            }
            let mids = (0..n).filter(|&y| at(x1, y, lo) && at(y, x2, hi));
            let (mut yes, mut no) = (false, false);
            for y in mids {
                if q[y] {
                    yes = true;
                } else {
                    no = true;
                }
            }
            if yes && no {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Semantics of `C_i(x1)`.
fn on_short_cycle(g: &Hypergraph, dist: &[Vec<Option<usize>>], x1: usize, i: usize) -> bool {
    let n = g.n();
    let (lo, hi) = (i.div_ceil(2), (i + 1).div_ceil(2));
    for x3 in 0..n {
        if dist[x1][x3] != Some(lo) {
            continue;
        }
        let avoiding = g.distances_avoiding(x1, Some(x3));
        for x2 in 0..n {
            if dist[x1][x2] == Some(i)
                && dist[x3][x2] == Some(hi)
                && avoiding[x2].is_some_and(|d| d <= i)
            {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extension_property_examples() {
        assert!(!has_full_extension_property(&Hypergraph::edgeless(3, 6).unwrap(), 2).unwrap());
        assert!(!has_full_extension_property(&Hypergraph::complete(3, 6).unwrap(), 2).unwrap());
        assert!(has_full_extension_property(&Hypergraph::edgeless(3, 6).unwrap(), 1).unwrap());
    }

    #[test]
    fn extension_property_on_a_star_of_patterns() {
        // s = 2, level 1: every vertex needs a neighbor and a non-neighbor
        let c5 = Hypergraph::loose_cycle(2, 5).unwrap();
        assert!(has_full_extension_property(&c5, 1).unwrap());
        assert!(!has_full_extension_property(&Hypergraph::complete(2, 5).unwrap(), 1).unwrap());
    }

    #[test]
    fn edgeless_fails_l() {
        let g = Hypergraph::edgeless(3, 10).unwrap();
        assert!(!thm9_l_structural(&g, 5, 1, 4).unwrap());
    }
}
