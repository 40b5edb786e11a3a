use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stats::{histogram, mean_variance, pearson, poisson_tv};
use super::with_jobs;
use crate::bounds::{prop1_lambda, Prop1Value};
use crate::error::{Error, Result};
use crate::extlab::{extensions, RootedPair};
use crate::hypercore::{automorphism_count, count_copies, for_each_embedding, EmbeddingMode, Hypergraph};
use crate::limits::Limits;
use crate::rational::Rational;
use crate::sampler::{p_from_alpha, sample_levels};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoissonFit {
    pub lambda: f64,
    pub tv: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternCounts {
    pub pattern: Hypergraph,
    pub automorphisms: u128,
    /// `(n)_v p^e / a`, the exact mean.
    pub expected_mean: f64,
    pub histogram: Vec<u64>,
    pub mean: f64,
    pub variance: f64,
    /// Against `n^v p^e / a`, which is `1/a` at `p = n^{-v/e}`.
    pub theoretical: PoissonFit,
    /// Against the sample mean; diagnostic only.
    pub fitted: PoissonFit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CopyCountReport {
    pub s: usize,
    pub n: usize,
    pub p: f64,
    pub trials: u64,
    pub seed: u64,
    pub patterns: Vec<PatternCounts>,
    /// Pearson correlation of the counts; `None` when a count is constant.
    pub correlation: Vec<Vec<Option<f64>>>,
}

fn falling_power(n: usize, v: usize) -> f64 {
    (0..v).map(|i| (n - i) as f64).product()
}

fn check_pattern(pattern: &Hypergraph) -> Result<()> {
    if pattern.edge_count() == 0 || !pattern.is_strictly_balanced()? {
        return Err(Error::HypothesisViolated(format!("pattern {pattern:?} is not strictly balanced")));
    }
    Ok(())
}

/// Copy counts of each pattern over `trials` samples of `G^s(n, p)`.
///
/// `p` defaults to `n^{-v/e}` of the first pattern. Trial `t` draws from
/// stream `t`, so all patterns are counted in the same hosts.
pub fn copy_count_distribution(
    patterns: &[Hypergraph],
    n: usize,
    p: Option<f64>,
    trials: u64,
    seed: u64,
    jobs: Option<usize>,
    limits: &Limits,
) -> Result<CopyCountReport> {
    let first = patterns.first().ok_or(Error::EmptySet)?;
    let s = first.s();
    for pat in patterns {
        if pat.s() != s {
            return Err(Error::Domain("patterns differ in uniformity".into()));
        }
        check_pattern(pat)?;
    }
    if trials == 0 {
        return Err(Error::Domain("need at least one trial".into()));
    }
    let p = match p {
        Some(p) => p,
        None => p_from_alpha(n, &first.density().recip())?,
    };
    let counts: Vec<Vec<u64>> = with_jobs(jobs, || {
        (0..trials)
            .into_par_iter()
            .map(|t| {
                let host = sample_levels(s, n, &[p], seed, t, limits)?.pop().expect("one level");
                patterns
                    .iter()
                    .map(|pat| count_copies(&host, pat, limits).map(|c| c as u64))
                    .collect::<Result<Vec<u64>>>()
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let mut per_pattern = Vec::new();
    let columns: Vec<Vec<u64>> = (0..patterns.len())
        .map(|i| counts.iter().map(|row| row[i]).collect())
        .collect();
    for (pat, xs) in patterns.iter().zip(&columns) {
        let aut = automorphism_count(pat, limits)?;
        let e = pat.edge_count() as i32;
        let v = pat.n();
        let lambda = (n as f64).powi(v as i32) * p.powi(e) / aut as f64;
        let (mean, variance) = mean_variance(xs);
        let hist = histogram(xs);
        per_pattern.push(PatternCounts {
            pattern: pat.clone(),
            automorphisms: aut,
            expected_mean: falling_power(n, v) * p.powi(e) / aut as f64,
            theoretical: PoissonFit {
                lambda,
                tv: poisson_tv(&hist, lambda),
            },
            fitted: PoissonFit {
                lambda: mean,
                tv: poisson_tv(&hist, mean),
            },
            histogram: hist,
            mean,
            variance,
        });
    }
    let correlation = columns
        .iter()
        .map(|a| columns.iter().map(|b| pearson(a, b)).collect())
        .collect();
    Ok(CopyCountReport {
        s,
        n,
        p,
        trials,
        seed,
        patterns: per_pattern,
        correlation,
    })
}

/// Copies of `H` (the root part of `pair`) in `host` that are the image of
/// the roots under no embedding of `G`.
///
/// A copy is an image vertex set with its image edge set; it counts as
/// extendable when some ordering of it onto the roots extends. With
/// `G = H` every copy extends, so the count is zero.
pub fn count_unextendable(host: &Hypergraph, pair: &RootedPair, limits: &Limits) -> Result<u64> {
    if pair.v_rel() == 0 {
        return Ok(0);
    }
    let h = pair.h()?;
    let mut extendable: HashMap<(Vec<usize>, Vec<Vec<usize>>), bool> = HashMap::new();
    let mut failure = None;
    for_each_embedding(&h, host, EmbeddingMode::Subgraph, |phi| {
        let mut verts = phi.to_vec();
        verts.sort_unstable();
        let mut edges: Vec<Vec<usize>> = h
            .edges()
            .iter()
            .map(|e| {
                let mut img: Vec<usize> = e.iter().map(|&x| phi[x]).collect();
                img.sort_unstable();
                img
            })
            .collect();
        edges.sort();
        let slot = extendable.entry((verts, edges)).or_insert(false);
        if *slot {
            return true;
        }
        match extensions(host, phi, pair, false, limits) {
            Ok(found) => {
                *slot = !found.is_empty();
                true
            }
            Err(e) => {
                failure = Some(e);
                false
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(extendable.values().filter(|&&ok| !ok).count() as u64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnextendableReport {
    pub n: usize,
    pub alpha: Rational,
    pub p: f64,
    pub trials: u64,
    pub seed: u64,
    pub constants: Prop1Value,
    pub histogram: Vec<u64>,
    pub mean: f64,
    pub fit: PoissonFit,
}

/// Unextendable copy counts at `p = n^{-v(H)/e(H)}` unless `p` is given.
pub fn unextendable_copy_count(
    pair: &RootedPair,
    n: usize,
    p: Option<f64>,
    trials: u64,
    seed: u64,
    jobs: Option<usize>,
    limits: &Limits,
) -> Result<UnextendableReport> {
    let constants = prop1_lambda(pair, limits)?;
    if trials == 0 {
        return Err(Error::Domain("need at least one trial".into()));
    }
    let alpha = pair.h()?.density().recip();
    let p = match p {
        Some(p) => p,
        None => p_from_alpha(n, &alpha)?,
    };
    let s = pair.g().s();
    let counts: Vec<u64> = with_jobs(jobs, || {
        (0..trials)
            .into_par_iter()
            .map(|t| {
                let host = sample_levels(s, n, &[p], seed, t, limits)?.pop().expect("one level");
                count_unextendable(&host, pair, limits)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let hist = histogram(&counts);
    let (mean, _) = mean_variance(&counts);
    Ok(UnextendableReport {
        n,
        alpha,
        p,
        trials,
        seed,
        fit: PoissonFit {
            lambda: constants.lambda,
            tv: poisson_tv(&hist, constants.lambda),
        },
        constants,
        histogram: hist,
        mean,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_edges() -> RootedPair {
        let g = Hypergraph::new(3, 6, vec![vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
        RootedPair::new(g, 3).unwrap()
    }

    #[test]
    fn unextendable_on_fixed_hosts() {
        let l = Limits::default();
        let pair = two_edges();
        let lone = Hypergraph::new(3, 5, vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(count_unextendable(&lone, &pair, &l).unwrap(), 1);
        let apart = Hypergraph::new(3, 6, vec![vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
        assert_eq!(count_unextendable(&apart, &pair, &l).unwrap(), 0);
        let touching = Hypergraph::new(3, 5, vec![vec![0, 1, 2], vec![2, 3, 4]]).unwrap();
        assert_eq!(count_unextendable(&touching, &pair, &l).unwrap(), 2);
        let trivial = RootedPair::new(Hypergraph::single_edge(3).unwrap(), 3).unwrap();
        assert_eq!(count_unextendable(&apart, &trivial, &l).unwrap(), 0);
    }

    #[test]
    fn zero_probability_gives_zero_counts() {
        let l = Limits::default();
        let tri = Hypergraph::complete(2, 3).unwrap();
        let r = copy_count_distribution(&[tri], 20, Some(0.0), 10, 1, None, &l).unwrap();
        assert_eq!(r.patterns[0].histogram, vec![10]);
        let u = unextendable_copy_count(&two_edges(), 12, Some(0.0), 10, 1, None, &l).unwrap();
        assert_eq!(u.histogram, vec![10]);
    }

    #[test]
    fn loose_pattern_is_rejected() {
        let l = Limits::default();
        let padded = Hypergraph::new(3, 4, vec![vec![0, 1, 2]]).unwrap();
        assert!(matches!(
            copy_count_distribution(&[padded], 20, None, 5, 1, None, &l),
            Err(Error::HypothesisViolated(_))
        ));
    }
}
