//! Seeded sampling of G^s(n, p).
//!
//! Every potential edge, taken in colex order, consumes exactly one uniform
//! from a ChaCha8 stream keyed by `seed` and selected by `trial_index`.
//! Thresholding the same uniforms at several probabilities yields nested
//! edge sets (monotone coupling).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial_u64, for_each_combination_colex};
use crate::error::{Error, Result};
use crate::hypercore::Hypergraph;
use crate::limits::Limits;
use crate::rational::Rational;

/// Edge probability, given directly or as `n^{-alpha}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeProb {
    P(f64),
    Alpha(Rational),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub s: usize,
    pub n: usize,
    pub prob: EdgeProb,
    pub seed: u64,
    pub trial_index: u64,
}

impl ModelParams {
    pub fn with_p(s: usize, n: usize, p: f64, seed: u64, trial_index: u64) -> Self {
        ModelParams {
            s,
            n,
            prob: EdgeProb::P(p),
            seed,
            trial_index,
        }
    }

    pub fn with_alpha(s: usize, n: usize, alpha: Rational, seed: u64, trial_index: u64) -> Self {
        ModelParams {
            s,
            n,
            prob: EdgeProb::Alpha(alpha),
            seed,
            trial_index,
        }
    }

    /// The resolved edge probability.
    pub fn p(&self) -> Result<f64> {
        match &self.prob {
            EdgeProb::P(p) => {
                if !(0.0..=1.0).contains(p) {
                    return Err(Error::Domain(format!("p = {p} outside [0, 1]")));
                }
                Ok(*p)
            }
            EdgeProb::Alpha(a) => p_from_alpha(self.n, a),
        }
    }
}

/// `n^{-alpha}` via `exp(-alpha ln n)`.
pub fn p_from_alpha(n: usize, alpha: &Rational) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain(format!("n = {n}: need n >= 2 for p = n^-alpha")));
    }
    if !alpha.is_positive() {
        return Err(Error::Domain(format!("alpha = {alpha} must be positive")));
    }
    Ok((-alpha.to_f64() * (n as f64).ln()).exp())
}

fn check_budget(s: usize, n: usize, limits: &Limits) -> Result<()> {
    if s < 2 || n < s {
        return Err(Error::Domain(format!("need n >= s >= 2, got s={s}, n={n}")));
    }
    match binomial_u64(n as u64, s as u64) {
        Some(c) if c <= limits.sample_budget => Ok(()),
        _ => Err(Error::BudgetExceeded {
            what: "potential edges C(n, s)",
            budget: limits.sample_budget,
        }),
    }
}

fn stream(seed: u64, trial_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial_index);
    rng
}

pub fn sample(params: &ModelParams, limits: &Limits) -> Result<Hypergraph> {
    let p = params.p()?;
    Ok(sample_levels(params.s, params.n, &[p], params.seed, params.trial_index, limits)?
        .pop()
        .expect("one level requested"))
}

/// One hypergraph per probability in `ps`, all drawn from the same
/// uniforms, so `ps[i] <= ps[j]` implies nested edge sets.
pub fn sample_levels(
    s: usize,
    n: usize,
    ps: &[f64],
    seed: u64,
    trial_index: u64,
    limits: &Limits,
) -> Result<Vec<Hypergraph>> {
    check_budget(s, n, limits)?;
    if let Some(p) = ps.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::Domain(format!("p = {p} outside [0, 1]")));
    }
    let mut rng = stream(seed, trial_index);
    let mut edges: Vec<Vec<Vec<usize>>> = vec![Vec::new(); ps.len()];
    for_each_combination_colex(n, s, |c| {
        let u: f64 = rng.gen();
        for (level, &p) in ps.iter().enumerate() {
            if u < p {
                edges[level].push(c.to_vec());
            }
        }
    });
    edges.into_iter().map(|e| Hypergraph::new(s, n, e)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn limits() -> Limits {
        Limits::default()
    }

    #[test]
    fn extremes() {
        let g = sample(&ModelParams::with_p(3, 10, 0.0, 1, 0), &limits()).unwrap();
        assert_eq!(g.edge_count(), 0);
        let g = sample(&ModelParams::with_p(3, 10, 1.0, 1, 0), &limits()).unwrap();
        assert_eq!(g.edge_count(), 120);
    }

    #[test]
    fn reproducible_and_trial_dependent() {
        let a = sample(&ModelParams::with_p(3, 20, 0.3, 9, 4), &limits()).unwrap();
        let b = sample(&ModelParams::with_p(3, 20, 0.3, 9, 4), &limits()).unwrap();
        let c = sample(&ModelParams::with_p(3, 20, 0.3, 9, 5), &limits()).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn alpha_conversion() {
        let close = |a: f64, b: f64| ((a - b) / b).abs() < 1e-12;
        assert!(close(p_from_alpha(100, &Rational::one()).unwrap(), 0.01));
        assert!(close(p_from_alpha(100, &Rational::new(1, 2)).unwrap(), 0.1));
        // 40^{-5/2} = 1 / (1600 sqrt 40)
        let oracle = 1.0 / (1600.0 * 40f64.sqrt());
        assert!(close(p_from_alpha(40, &Rational::new(5, 2)).unwrap(), oracle));
        assert!(p_from_alpha(1, &Rational::one()).is_err());
        assert!(p_from_alpha(10, &Rational::zero()).is_err());
    }

    #[test]
    fn budget_is_enforced() {
        let tight = Limits {
            sample_budget: 100,
            ..Limits::default()
        };
        assert!(matches!(
            sample(&ModelParams::with_p(3, 10, 0.5, 0, 0), &tight),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn levels_are_nested() {
        let gs = sample_levels(3, 15, &[0.05, 0.2, 0.6], 3, 1, &limits()).unwrap();
        for w in gs.windows(2) {
            assert!(w[0].edges().iter().all(|e| w[1].has_edge(e)));
        }
    }
}
