//! Monte Carlo experiments over `G^s(n, p)`.
//!
//! Trial `t` of the `i`-th entry of the n-list draws from the sampler
//! stream `i * trials + t`, so results depend only on the config and never
//! on scheduling. With coupling on, all grid points of a trial threshold
//! the same uniforms; without it each grid point gets its own block of
//! streams.

mod copies;
mod persist;
mod stats;

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use copies::{
    copy_count_distribution, count_unextendable, unextendable_copy_count, CopyCountReport, PatternCounts,
    PoissonFit, UnextendableReport,
};
pub use persist::{
    append_jsonl, read_jsonl, read_summary_csv, write_summary, write_summary_csv, JsonlHeader, SUMMARY_COLUMNS,
    TRIALS_SCHEMA,
};
pub use stats::{histogram, mean_variance, pearson, poisson_tv, wilson_interval, WILSON_Z};

use crate::error::{Error, Result};
use crate::folio::{evaluate_sentence, parse, Formula};
use crate::hypercore::{for_each_embedding, EmbeddingMode, Hypergraph};
use crate::limits::Limits;
use crate::rational::Rational;
use crate::sampler::{p_from_alpha, sample_levels};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BuiltinProperty {
    ContainsEdge,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PropertySpec {
    Builtin { id: BuiltinProperty },
    /// A first-order sentence in s-expression syntax.
    Formula { text: String },
    /// Contains a (not necessarily induced) copy of the pattern.
    Pattern { pattern: Hypergraph },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "values", rename_all = "snake_case")]
pub enum ProbGrid {
    /// `p = n^{-alpha}`.
    Alpha(Vec<Rational>),
    P(Vec<f64>),
}

impl ProbGrid {
    fn len(&self) -> usize {
        match self {
            ProbGrid::Alpha(v) => v.len(),
            ProbGrid::P(v) => v.len(),
        }
    }

    fn cells(&self, n: usize) -> Result<Vec<(Option<Rational>, f64)>> {
        match self {
            ProbGrid::Alpha(v) => v.iter().map(|a| Ok((Some(a.clone()), p_from_alpha(n, a)?))).collect(),
            ProbGrid::P(v) => v
                .iter()
                .map(|&p| {
                    if (0.0..=1.0).contains(&p) {
                        Ok((None, p))
                    } else {
                        Err(Error::Domain(format!("p = {p} outside [0, 1]")))
                    }
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub s: usize,
    pub ns: Vec<usize>,
    pub grid: ProbGrid,
    pub property: PropertySpec,
    pub trials: u64,
    pub seed: u64,
    #[serde(default = "default_true")]
    pub coupling: bool,
    /// Record wall-clock time per trial; makes records nondeterministic.
    #[serde(default)]
    pub timing: bool,
    /// Base path: records go to `.jsonl`, the summary to `.csv`.
    #[serde(skip)]
    pub output: Option<PathBuf>,
    /// Worker cap; does not affect results.
    #[serde(skip)]
    pub jobs: Option<usize>,
}

fn default_true() -> bool {
    true
}

impl ExperimentConfig {
    pub fn new(s: usize, ns: Vec<usize>, grid: ProbGrid, property: PropertySpec, trials: u64, seed: u64) -> Self {
        ExperimentConfig {
            s,
            ns,
            grid,
            property,
            trials,
            seed,
            coupling: true,
            timing: false,
            output: None,
            jobs: None,
        }
    }

    /// SHA-256 of the canonical JSON encoding, hex.
    pub fn digest(&self) -> Result<String> {
        let bytes = serde_json::to_vec(self)?;
        Ok(hex::encode(Sha256::digest(&bytes)))
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Domain("trials must be at least 1".into()));
        }
        if self.ns.is_empty() || self.grid.len() == 0 {
            return Err(Error::EmptySet);
        }
        if let ProbGrid::Alpha(v) = &self.grid {
            if let Some(a) = v.iter().find(|a| !a.is_positive()) {
                return Err(Error::Domain(format!("alpha = {a} must be positive")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Rational>,
    pub p: f64,
    /// Sampler stream index.
    pub trial_index: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<u64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub budget_exceeded: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_us: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub n: usize,
    pub alpha: Option<Rational>,
    pub p: f64,
    pub trials: u64,
    pub successes: u64,
    /// Successes over trials that finished within budget.
    pub estimate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub budget_exceeded: u64,
    pub config_digest: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub config_digest: String,
    /// n-major, grid-minor.
    pub reports: Vec<EstimateReport>,
    pub records: Vec<TrialRecord>,
}

enum Compiled {
    ContainsEdge,
    Formula(Formula),
    Pattern(Hypergraph),
}

impl Compiled {
    fn new(spec: &PropertySpec, s: usize) -> Result<Self> {
        Ok(match spec {
            PropertySpec::Builtin {
                id: BuiltinProperty::ContainsEdge,
            } => Compiled::ContainsEdge,
            PropertySpec::Formula { text } => {
                let f = parse(text, s)?;
                if !f.is_sentence() {
                    return Err(Error::Domain("property formula has free variables".into()));
                }
                Compiled::Formula(f)
            }
            PropertySpec::Pattern { pattern } => {
                if pattern.s() != s {
                    return Err(Error::Domain("pattern uniformity differs from the model".into()));
                }
                Compiled::Pattern(pattern.clone())
            }
        })
    }

    fn holds(&self, g: &Hypergraph, limits: &Limits) -> Result<bool> {
        match self {
            Compiled::ContainsEdge => Ok(g.edge_count() > 0),
            Compiled::Formula(f) => evaluate_sentence(g, f, limits.eval_budget),
            Compiled::Pattern(pat) => {
                let mut found = false;
                for_each_embedding(pat, g, EmbeddingMode::Subgraph, |_| {
                    found = true;
                    false
                });
                Ok(found)
            }
        }
    }
}

/// Runs `f` on a pool of at most `jobs` workers, or the global pool.
pub(crate) fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match jobs {
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        None => f(),
    }
}

fn outcome_record(
    n: usize,
    cell: &(Option<Rational>, f64),
    trial_index: u64,
    result: Result<bool>,
    elapsed_us: Option<u64>,
) -> Result<TrialRecord> {
    let (outcome, budget_exceeded) = match result {
        Ok(b) => (Some(b), false),
        Err(Error::BudgetExceeded { .. }) => (None, true),
        Err(e) => return Err(e),
    };
    Ok(TrialRecord {
        n,
        alpha: cell.0.clone(),
        p: cell.1,
        trial_index,
        outcome,
        count: None,
        budget_exceeded,
        elapsed_us,
    })
}

/// One trial at every grid point; coupled trials share one draw.
fn run_trial(
    cfg: &ExperimentConfig,
    prop: &Compiled,
    n: usize,
    n_index: usize,
    cells: &[(Option<Rational>, f64)],
    t: u64,
    limits: &Limits,
) -> Result<Vec<TrialRecord>> {
    let start = cfg.timing.then(std::time::Instant::now);
    let elapsed = |s: Option<std::time::Instant>| s.map(|s| s.elapsed().as_micros() as u64);
    if cfg.coupling {
        let stream = n_index as u64 * cfg.trials + t;
        let ps: Vec<f64> = cells.iter().map(|c| c.1).collect();
        return match sample_levels(cfg.s, n, &ps, cfg.seed, stream, limits) {
            Ok(graphs) => cells
                .iter()
                .zip(&graphs)
                .map(|(cell, g)| outcome_record(n, cell, stream, prop.holds(g, limits), elapsed(start)))
                .collect(),
            Err(Error::BudgetExceeded { what, budget }) => cells
                .iter()
                .map(|cell| {
                    let e = Error::BudgetExceeded { what, budget };
                    outcome_record(n, cell, stream, Err(e), elapsed(start))
                })
                .collect(),
            Err(e) => Err(e),
        };
    }
    cells
        .iter()
        .enumerate()
        .map(|(c, cell)| {
            let stream = ((n_index * cells.len() + c) as u64) * cfg.trials + t;
            let result = sample_levels(cfg.s, n, &[cell.1], cfg.seed, stream, limits)
                .and_then(|mut g| prop.holds(&g.pop().expect("one level"), limits));
            outcome_record(n, cell, stream, result, elapsed(start))
        })
        .collect()
}

fn summarize(
    n: usize,
    cell: &(Option<Rational>, f64),
    records: &[&TrialRecord],
    digest: &str,
) -> EstimateReport {
    let successes = records.iter().filter(|r| r.outcome == Some(true)).count() as u64;
    let exceeded = records.iter().filter(|r| r.budget_exceeded).count() as u64;
    let trials = records.len() as u64;
    let done = trials - exceeded;
    let (ci_lo, ci_hi) = wilson_interval(successes, done);
    EstimateReport {
        n,
        alpha: cell.0.clone(),
        p: cell.1,
        trials,
        successes,
        estimate: if done == 0 { 0.0 } else { successes as f64 / done as f64 },
        ci_lo,
        ci_hi,
        budget_exceeded: exceeded,
        config_digest: digest.to_string(),
    }
}

/// One estimate per `(n, grid point)`. Writes `.jsonl` and `.csv` files
/// next to `cfg.output` when set; JSONL records are appended.
pub fn sweep_alpha(cfg: &ExperimentConfig, limits: &Limits) -> Result<SweepResult> {
    cfg.validate()?;
    let prop = Compiled::new(&cfg.property, cfg.s)?;
    let digest = cfg.digest()?;
    let mut reports = Vec::new();
    let mut records = Vec::new();
    for (i, &n) in cfg.ns.iter().enumerate() {
        let cells = cfg.grid.cells(n)?;
        let per_trial: Vec<Vec<TrialRecord>> = with_jobs(cfg.jobs, || {
            (0..cfg.trials)
                .into_par_iter()
                .map(|t| run_trial(cfg, &prop, n, i, &cells, t, limits))
                .collect::<Result<Vec<_>>>()
        })?;
        for (c, cell) in cells.iter().enumerate() {
            let column: Vec<&TrialRecord> = per_trial.iter().map(|row| &row[c]).collect();
            reports.push(summarize(n, cell, &column, &digest));
        }
        for c in 0..cells.len() {
            records.extend(per_trial.iter().map(|row| row[c].clone()));
        }
    }
    let result = SweepResult {
        config_digest: digest,
        reports,
        records,
    };
    if let Some(base) = &cfg.output {
        persist(cfg, &result, base)?;
    }
    Ok(result)
}

/// The single-cell case of [`sweep_alpha`].
pub fn estimate_probability(cfg: &ExperimentConfig, limits: &Limits) -> Result<EstimateReport> {
    if cfg.ns.len() != 1 || cfg.grid.len() != 1 {
        return Err(Error::Domain("estimate_probability takes one n and one grid point".into()));
    }
    Ok(sweep_alpha(cfg, limits)?.reports.remove(0))
}

/// Appends records to `<base>.jsonl` and rewrites `<base>.csv`.
pub fn persist(cfg: &ExperimentConfig, result: &SweepResult, base: &Path) -> Result<()> {
    let header = JsonlHeader::for_config(cfg)?;
    append_jsonl(&base.with_extension("jsonl"), &header, &result.records)?;
    write_summary_csv(&base.with_extension("csv"), &result.reports)
}
