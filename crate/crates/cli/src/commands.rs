//! Subcommand arguments and handlers.

use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{ArgGroup, Args, CommandFactory, ValueEnum};
use serde_json::{json, Value};

use hyperspectra::bounds::{self, construct_thm7_K, construct_thm9_K, split_a};
use hyperspectra::efgame::{solve, verify_strategy, ExtensionStrategy, MirrorStrategy, OptimalStrategy, Strategy};
use hyperspectra::explab::{
    copy_count_distribution, count_unextendable, sweep_alpha, unextendable_copy_count, BuiltinProperty,
    ExperimentConfig, ProbGrid, PropertySpec, SUMMARY_COLUMNS, TRIALS_SCHEMA,
};
use hyperspectra::extlab::{
    classify_pair, count_maximal_extensions, cyclic_extensions, density_bound, extensions, f_alpha,
    inverse_density_form, is_strictly_balanced_pair, m_decomposition, pair_density, pair_max_density, RootedPair,
};
use hyperspectra::folio::{evaluate, parse, Assignment};
use hyperspectra::hypercore::{automorphism_count, count_copies, count_embeddings, max_density, EmbeddingMode};
use hyperspectra::sampler::{sample, ModelParams};
use hyperspectra::{Error, Hypergraph, Limits, Rational};

use crate::output::{round12, Report};
use crate::Cli;

pub enum Failure {
    Usage(clap::Error),
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Runtime(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn usage(kind: ErrorKind, message: impl std::fmt::Display) -> Failure {
    Failure::Usage(Cli::command().error(kind, message))
}

/// Rationals from the command line; decimal inputs are recorded by name.
#[derive(Default)]
struct Inputs {
    decimal: Vec<String>,
}

impl Inputs {
    fn rational(&mut self, name: &str, text: &str) -> Outcome<Rational> {
        let (r, flagged) = Rational::parse_flagged(text)
            .map_err(|_| usage(ErrorKind::ValueValidation, format!("--{name}: `{text}` is not a rational")))?;
        if flagged && !self.decimal.iter().any(|d| d == name) {
            self.decimal.push(name.to_string());
        }
        Ok(r)
    }

    fn finish(self, mut report: Report) -> Report {
        if !self.decimal.is_empty() {
            if let Value::Object(map) = &mut report.doc {
                map.insert("decimal_inputs".into(), json!(self.decimal));
            }
        }
        report
    }
}

fn read_graph(path: &Path) -> Outcome<Hypergraph> {
    Ok(Hypergraph::from_json_file(path)?)
}

fn read_pair(path: &Path) -> Outcome<RootedPair> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let value: Value = serde_json::from_str(&text).map_err(Error::from)?;
    Ok(RootedPair::from_json_value(&value)?)
}

fn vertex_list(name: &str, text: &str) -> Outcome<Vec<usize>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| usage(ErrorKind::ValueValidation, format!("--{name}: `{t}` is not a vertex id")))
        })
        .collect()
}

fn to_value<T: serde::Serialize>(x: &T) -> Outcome<Value> {
    Ok(serde_json::to_value(x).map_err(Error::from)?)
}

fn limits(cli: &Cli) -> Outcome<Limits> {
    let base = Limits::from_env()?;
    match &cli.global.budget {
        Some(text) => base
            .with_overrides(text)
            .map_err(|e| match e {
                Error::Domain(m) => usage(ErrorKind::ValueValidation, format!("--budget: {m}")),
                other => Failure::Runtime(other),
            }),
        None => Ok(base),
    }
}

fn edge_rows(g: &Hypergraph) -> (Vec<String>, Vec<Vec<String>>) {
    let header = (1..=g.s()).map(|i| format!("v{i}")).collect();
    let rows = g.edges().iter().map(|e| e.iter().map(|v| v.to_string()).collect()).collect();
    (header, rows)
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("prob").required(true).args(["p", "alpha"])))]
pub struct SampleArgs {
    #[arg(long)]
    pub s: usize,
    #[arg(long)]
    pub n: usize,
    /// Edge probability in [0, 1].
    #[arg(long)]
    pub p: Option<f64>,
    /// Use p = n^-alpha; "p/q" or a decimal.
    #[arg(long)]
    pub alpha: Option<String>,
    /// Sampler stream index.
    #[arg(long, default_value_t = 0)]
    pub trial: u64,
}

#[derive(Debug, Args)]
pub struct InArgs {
    /// Hypergraph JSON file.
    #[arg(long = "in")]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// Pair JSON file: {"g": hypergraph, "roots": int, "h_edges": [...]}.
    #[arg(long)]
    pub pair: PathBuf,
    #[arg(long)]
    pub alpha: String,
}

#[derive(Debug, Args)]
pub struct ExtendArgs {
    #[arg(long)]
    pub host: PathBuf,
    #[arg(long)]
    pub pair: PathBuf,
    /// Host vertices for the roots, comma separated, in root order.
    #[arg(long)]
    pub roots: String,
    /// Require non-edges of the pair to be non-edges of the host.
    #[arg(long)]
    pub strict: bool,
    /// With --r, also count (alpha, r)-maximal strict extensions.
    #[arg(long, requires = "r")]
    pub alpha: Option<String>,
    #[arg(long, requires = "alpha")]
    pub r: Option<usize>,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub m: usize,
    /// Also list cyclic m-extensions of the subhypergraph on these vertices.
    #[arg(long)]
    pub from: Option<String>,
    /// New-vertex budget for --from.
    #[arg(long, default_value_t = 8, requires = "from")]
    pub max_new: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyName {
    Mirror,
    Extension,
    Optimal,
}

#[derive(Debug, Args)]
pub struct GameArgs {
    #[arg(long)]
    pub g1: PathBuf,
    #[arg(long)]
    pub g2: PathBuf,
    /// Number of rounds.
    #[arg(long)]
    pub k: usize,
    /// Also check this Duplicator strategy against every Spoiler line.
    #[arg(long, value_enum)]
    pub strategy: Option<StrategyName>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Formula text, or a path to a .fol file.
    #[arg(long)]
    pub formula: String,
    /// Free-variable values, e.g. `x1=0,x2=3`.
    #[arg(long, default_value = "")]
    pub assign: String,
}

pub const BOUNDS_HELP: &str = "\
Required flags per theorem:
  6   --s S --k K          threshold, s >= 3, k >= s + 1
  7   --s S --k K          threshold and witness counts, s >= 3, k >= s + 2
  8   --s S --k K          interval (s-1 - 1/2^(k-s+1), s-1)
  9   --s S --k K --a A    alpha, split (a1, a2, a3) and witness, s >= 3, k >= s + 4
  10  --s S --k K --j J    alpha and Sigma, k - 11 >= s - 1, j(k - 10) >= 2
  11  --s S --k K [--m M]  l(k), limit point, and alpha when --m is given
Witness hypergraphs (7, 9) are written with --witness FILE.";

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("aux").args(["a", "j", "m"])))]
pub struct BoundsArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(6..=11))]
    pub theorem: u8,
    #[arg(long)]
    pub s: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub a: Option<u64>,
    #[arg(long)]
    pub j: Option<u64>,
    #[arg(long)]
    pub m: Option<u64>,
    /// Write the witness hypergraph (theorems 7 and 9) here.
    #[arg(long)]
    pub witness: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("grid").args(["alpha", "p"])))]
#[command(group(ArgGroup::new("property").args(["pattern", "formula", "builtin"])))]
pub struct SweepArgs {
    /// Experiment config JSON; replaces the model and property flags.
    #[arg(long, conflicts_with_all = ["s", "n", "grid", "property", "trials"])]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub s: Option<usize>,
    /// Comma-separated vertex counts.
    #[arg(long)]
    pub n: Option<String>,
    /// Comma-separated alpha values ("p/q" or decimals).
    #[arg(long)]
    pub alpha: Option<String>,
    /// Comma-separated edge probabilities.
    #[arg(long)]
    pub p: Option<String>,
    /// Property: contains a copy of this pattern.
    #[arg(long)]
    pub pattern: Option<PathBuf>,
    /// Property: satisfies this sentence (text or .fol path).
    #[arg(long)]
    pub formula: Option<String>,
    #[arg(long, value_enum)]
    pub builtin: Option<BuiltinName>,
    #[arg(long)]
    pub trials: Option<u64>,
    /// Draw every grid point independently.
    #[arg(long)]
    pub no_coupling: bool,
    /// Append raw records to BASE.jsonl and write BASE.csv.
    #[arg(long)]
    pub save: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BuiltinName {
    ContainsEdge,
}

#[derive(Debug, Args)]
pub struct PoissonArgs {
    /// Pattern hypergraph; repeat for joint counts.
    #[arg(long, required = true)]
    pub pattern: Vec<PathBuf>,
    #[arg(long)]
    pub n: usize,
    /// Defaults to n^(-v/e) of the first pattern.
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[arg(long)]
    pub host: PathBuf,
    #[arg(long)]
    pub pattern: PathBuf,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("target").required(true).args(["host", "n"])))]
pub struct UnextendableArgs {
    #[arg(long)]
    pub pair: PathBuf,
    /// Count in this fixed host instead of sampling.
    #[arg(long)]
    pub host: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Defaults to n^(-v(H)/e(H)).
    #[arg(long, conflicts_with = "host")]
    pub p: Option<f64>,
    #[arg(long, default_value_t = 1000, conflicts_with = "host")]
    pub trials: u64,
}

pub fn run(cli: &Cli) -> Outcome<Report> {
    use crate::Command::*;
    let limits = limits(cli)?;
    let mut inputs = Inputs::default();
    let report = match &cli.command {
        Sample(a) => sample_cmd(cli, a, &limits, &mut inputs)?,
        Density(a) => density_cmd(a)?,
        Balance(a) => balance_cmd(a)?,
        ClassifyPair(a) => classify_cmd(a, &limits, &mut inputs)?,
        Extend(a) => extend_cmd(a, &limits, &mut inputs)?,
        Decompose(a) => decompose_cmd(a, &limits)?,
        Game(a) => game_cmd(a, &limits)?,
        Eval(a) => eval_cmd(a, &limits)?,
        Bounds(a) => bounds_cmd(a)?,
        Sweep(a) => sweep_cmd(cli, a, &limits, &mut inputs)?,
        Poisson(a) => poisson_cmd(cli, a, &limits)?,
        CountCopies(a) => count_cmd(a, &limits)?,
        Unextendable(a) => unextendable_cmd(cli, a, &limits)?,
        SchemaDump => schema_dump(),
    };
    Ok(inputs.finish(report))
}

fn sample_cmd(cli: &Cli, a: &SampleArgs, limits: &Limits, inputs: &mut Inputs) -> Outcome<Report> {
    let seed = cli.global.seed;
    let params = match (&a.p, &a.alpha) {
        (Some(p), _) => ModelParams::with_p(a.s, a.n, *p, seed, a.trial),
        (None, Some(text)) => ModelParams::with_alpha(a.s, a.n, inputs.rational("alpha", text)?, seed, a.trial),
        (None, None) => unreachable!("clap requires --p or --alpha"),
    };
    let g = sample(&params, limits)?;
    let (header, rows) = edge_rows(&g);
    let alpha = match &params.prob {
        hyperspectra::sampler::EdgeProb::Alpha(x) => json!(x),
        _ => Value::Null,
    };
    Ok(Report::new(
        "hyperspectra.sample/1",
        json!({
            "s": a.s, "n": a.n, "p": params.p()?, "alpha": alpha,
            "seed": seed, "trial": a.trial, "hypergraph": g.to_json_value(),
        }),
    )
    .with_table(header, rows))
}

fn density_cmd(a: &InArgs) -> Outcome<Report> {
    let g = read_graph(&a.input)?;
    let best = max_density(&g);
    Ok(Report::new(
        "hyperspectra.density/1",
        json!({"rho": g.density(), "rho_max": best.density, "witness": best.witness}),
    ))
}

fn balance_cmd(a: &InArgs) -> Outcome<Report> {
    let g = read_graph(&a.input)?;
    let best = max_density(&g);
    let strictly = g.is_strictly_balanced()?;
    Ok(Report::new(
        "hyperspectra.balance/1",
        json!({
            "rho": g.density(), "rho_max": best.density,
            "balanced": g.density() == best.density, "strictly_balanced": strictly,
        }),
    ))
}

fn classify_cmd(a: &ClassifyArgs, limits: &Limits, inputs: &mut Inputs) -> Outcome<Report> {
    let alpha = inputs.rational("alpha", &a.alpha)?;
    let pair = read_pair(&a.pair)?;
    let c = classify_pair(&pair, &alpha, limits)?;
    let density = pair_density(&pair).ok();
    let max = pair_max_density(&pair, limits).ok();
    let strictly = is_strictly_balanced_pair(&pair, limits).ok();
    Ok(Report::new(
        "hyperspectra.classify-pair/1",
        json!({
            "alpha": alpha, "class": c.class, "witness": c.witness, "value": c.value,
            "f_alpha": f_alpha(&pair, &alpha), "v_rel": pair.v_rel(), "e_rel": pair.e_rel(),
            "rho": density, "rho_max": max, "strictly_balanced": strictly,
        }),
    ))
}

fn extend_cmd(a: &ExtendArgs, limits: &Limits, inputs: &mut Inputs) -> Outcome<Report> {
    let host = read_graph(&a.host)?;
    let pair = read_pair(&a.pair)?;
    let roots = vertex_list("roots", &a.roots)?;
    let found = extensions(&host, &roots, &pair, a.strict, limits)?;
    let mut doc = json!({"roots": roots, "strict": a.strict, "count": found.len(), "extensions": found});
    if let (Some(text), Some(r)) = (&a.alpha, a.r) {
        let alpha = inputs.rational("alpha", text)?;
        doc["maximal_count"] = json!(count_maximal_extensions(&host, &roots, &pair, &alpha, r, limits)?);
        doc["alpha"] = json!(alpha);
        doc["r"] = json!(r);
    }
    let header = (0..pair.v_rel()).map(|i| format!("u{}", i + 1)).collect();
    let rows = found.iter().map(|m| m.iter().map(|v| v.to_string()).collect()).collect();
    Ok(Report::new("hyperspectra.extend/1", doc).with_table(header, rows))
}

fn decompose_cmd(a: &DecomposeArgs, limits: &Limits) -> Outcome<Report> {
    let g = read_graph(&a.input)?;
    let decomposition = m_decomposition(&g, a.m, limits)?;
    let form = if g.edge_count() == 0 {
        Value::Null
    } else {
        to_value(&inverse_density_form(&g, a.m)?)?
    };
    let mut doc = json!({
        "m": a.m,
        "member": decomposition.is_some(),
        "decomposition": decomposition,
        "density_bound": density_bound(g.s(), a.m),
        "rho_max": max_density(&g).density,
        "inverse_density_form": form,
    });
    if let Some(from) = &a.from {
        let base = vertex_list("from", from)?;
        doc["cyclic_extensions"] = to_value(&cyclic_extensions(&g, &base, a.m, a.max_new, limits)?)?;
    }
    Ok(Report::new("hyperspectra.decompose/1", doc))
}

fn game_cmd(a: &GameArgs, limits: &Limits) -> Outcome<Report> {
    let g1 = read_graph(&a.g1)?;
    let g2 = read_graph(&a.g2)?;
    let winner = solve(&g1, &g2, a.k, limits)?;
    let mut doc = json!({"k": a.k, "winner": winner});
    if let Some(name) = a.strategy {
        let optimal;
        let strategy: &dyn Strategy = match name {
            StrategyName::Mirror => &MirrorStrategy,
            StrategyName::Extension => &ExtensionStrategy,
            StrategyName::Optimal => {
                optimal = OptimalStrategy::new(limits);
                &optimal
            }
        };
        doc["strategy"] = to_value(&name.to_possible_value().map(|v| v.get_name().to_string()))?;
        doc["strategy_wins"] = json!(verify_strategy(&g1, &g2, a.k, strategy, limits)?);
    }
    Ok(Report::new("hyperspectra.game/1", doc))
}

fn formula_text(arg: &str) -> Outcome<String> {
    let path = Path::new(arg);
    if !arg.trim_start().starts_with('(') && path.is_file() {
        return std::fs::read_to_string(path).map_err(|source| {
            Failure::Runtime(Error::Io {
                path: path.to_path_buf(),
                source,
            })
        });
    }
    Ok(arg.to_string())
}

fn eval_cmd(a: &EvalArgs, limits: &Limits) -> Outcome<Report> {
    let g = read_graph(&a.input)?;
    let f = parse(&formula_text(&a.formula)?, g.s())?;
    let mut assignment = Assignment::new();
    for item in a.assign.split(',').filter(|t| !t.trim().is_empty()) {
        let (var, value) = item
            .split_once('=')
            .ok_or_else(|| usage(ErrorKind::ValueValidation, format!("--assign: expected var=vertex, got `{item}`")))?;
        let v: usize = value
            .trim()
            .parse()
            .map_err(|_| usage(ErrorKind::ValueValidation, format!("--assign: `{value}` is not a vertex id")))?;
        assignment.insert(var.trim().to_string(), v);
    }
    let value = evaluate(&g, &f, &assignment, limits.eval_budget)?;
    Ok(Report::new(
        "hyperspectra.eval/1",
        json!({
            "value": value, "formula": f.to_string(),
            "quantifier_depth": f.quantifier_depth(), "sentence": f.is_sentence(),
        }),
    ))
}

fn bounds_cmd(a: &BoundsArgs) -> Outcome<Report> {
    let need = |flag: &str, present: bool| {
        if present {
            Ok(())
        } else {
            Err(usage(
                ErrorKind::MissingRequiredArgument,
                format!("theorem {} needs --{flag}", a.theorem),
            ))
        }
    };
    let aux = match a.theorem {
        9 => {
            need("a", a.a.is_some())?;
            a.a
        }
        10 => {
            need("j", a.j.is_some())?;
            a.j
        }
        11 => a.m,
        _ => None,
    };
    if matches!(a.theorem, 6..=8) && (a.a.is_some() || a.j.is_some() || a.m.is_some()) {
        return Err(usage(
            ErrorKind::ArgumentConflict,
            format!("theorem {} takes no --a, --j or --m", a.theorem),
        ));
    }
    if a.witness.is_some() && !matches!(a.theorem, 7 | 9) {
        return Err(usage(ErrorKind::ArgumentConflict, "--witness applies to theorems 7 and 9"));
    }
    let report = bounds::report(a.theorem, a.s, a.k, aux)?;
    let mut doc = json!({
        "theorem": report.theorem,
        "params": report.params,
        "meaning": report.meaning,
    });
    for (key, value) in &report.values {
        doc[key] = json!(value);
    }
    if let Some(path) = &a.witness {
        let w = if a.theorem == 7 {
            construct_thm7_K(a.s, a.k)?
        } else {
            let (a1, a2, a3) = split_a(a.s, a.k, a.a.expect("checked above"))?;
            construct_thm9_K(a.s, a.k, a1 as usize, a2 as usize, a3 as usize)?
        };
        let text = serde_json::to_string(&w.graph.to_json_value()).map_err(Error::from)?;
        std::fs::write(path, text + "\n").map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?;
        doc["witness"] = json!({
            "path": path.display().to_string(), "vertices": w.vertices,
            "edges": w.edges, "density": w.density,
        });
    }
    Ok(Report::new("hyperspectra.bounds/1", doc))
}

fn sweep_config(cli: &Cli, a: &SweepArgs, inputs: &mut Inputs) -> Outcome<ExperimentConfig> {
    if let Some(path) = &a.config {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?;
        let mut cfg: ExperimentConfig = serde_json::from_str(&text).map_err(Error::from)?;
        cfg.coupling &= !a.no_coupling;
        return Ok(cfg);
    }
    let missing = |flag: &str| usage(ErrorKind::MissingRequiredArgument, format!("sweep needs --{flag} or --config"));
    let s = a.s.ok_or_else(|| missing("s"))?;
    let ns = vertex_list("n", a.n.as_deref().ok_or_else(|| missing("n"))?)?;
    let grid = match (&a.alpha, &a.p) {
        (Some(text), _) => ProbGrid::Alpha(
            text.split(',')
                .map(|t| inputs.rational("alpha", t.trim()))
                .collect::<Outcome<_>>()?,
        ),
        (None, Some(text)) => ProbGrid::P(
            text.split(',')
                .map(|t| {
                    t.trim()
                        .parse()
                        .map_err(|_| usage(ErrorKind::ValueValidation, format!("--p: `{t}` is not a number")))
                })
                .collect::<Outcome<_>>()?,
        ),
        (None, None) => return Err(missing("alpha or --p")),
    };
    let property = match (&a.pattern, &a.formula, a.builtin) {
        (Some(path), _, _) => PropertySpec::Pattern {
            pattern: read_graph(path)?,
        },
        (None, Some(f), _) => PropertySpec::Formula { text: formula_text(f)? },
        (None, None, Some(BuiltinName::ContainsEdge)) => PropertySpec::Builtin {
            id: BuiltinProperty::ContainsEdge,
        },
        (None, None, None) => return Err(missing("pattern, --formula or --builtin")),
    };
    let mut cfg = ExperimentConfig::new(s, ns, grid, property, a.trials.unwrap_or(100), cli.global.seed);
    cfg.coupling = !a.no_coupling;
    Ok(cfg)
}

fn sweep_cmd(cli: &Cli, a: &SweepArgs, limits: &Limits, inputs: &mut Inputs) -> Outcome<Report> {
    let mut cfg = sweep_config(cli, a, inputs)?;
    cfg.output = a.save.clone();
    cfg.jobs = cli.global.jobs;
    let result = sweep_alpha(&cfg, limits)?;
    let mut rows = Vec::new();
    for r in &result.reports {
        rows.push(vec![
            r.n.to_string(),
            r.alpha.as_ref().map(|x| x.to_string()).unwrap_or_default(),
            round12(r.p).to_string(),
            r.trials.to_string(),
            r.successes.to_string(),
            round12(r.estimate).to_string(),
            round12(r.ci_lo).to_string(),
            round12(r.ci_hi).to_string(),
            r.budget_exceeded.to_string(),
        ]);
    }
    let reports: Vec<Value> = result
        .reports
        .iter()
        .map(|r| {
            json!({
                "n": r.n, "alpha": r.alpha, "p": r.p, "trials": r.trials, "successes": r.successes,
                "estimate": r.estimate, "ci_lo": r.ci_lo, "ci_hi": r.ci_hi,
                "budget_exceeded": r.budget_exceeded,
            })
        })
        .collect();
    Ok(Report::new(
        "hyperspectra.sweep/1",
        json!({"config_digest": result.config_digest, "config": cfg, "reports": reports}),
    )
    .with_table(SUMMARY_COLUMNS.iter().map(|c| c.to_string()).collect(), rows))
}

fn poisson_cmd(cli: &Cli, a: &PoissonArgs, limits: &Limits) -> Outcome<Report> {
    let patterns = a.pattern.iter().map(|p| read_graph(p)).collect::<Outcome<Vec<_>>>()?;
    let r = copy_count_distribution(&patterns, a.n, a.p, a.trials, cli.global.seed, cli.global.jobs, limits)?;
    let longest = r.patterns.iter().map(|p| p.histogram.len()).max().unwrap_or(0);
    let mut header = vec!["count".to_string()];
    header.extend((0..r.patterns.len()).map(|i| format!("pattern{i}")));
    let rows = (0..longest)
        .map(|k| {
            let mut row = vec![k.to_string()];
            row.extend(r.patterns.iter().map(|p| p.histogram.get(k).copied().unwrap_or(0).to_string()));
            row
        })
        .collect();
    Ok(Report::new("hyperspectra.poisson/1", to_value(&r)?).with_table(header, rows))
}

fn count_cmd(a: &CountArgs, limits: &Limits) -> Outcome<Report> {
    let host = read_graph(&a.host)?;
    let pattern = read_graph(&a.pattern)?;
    let copies = count_copies(&host, &pattern, limits)?;
    Ok(Report::new(
        "hyperspectra.count-copies/1",
        json!({
            "copies": copies.to_string(),
            "embeddings": count_embeddings(&pattern, &host, EmbeddingMode::Subgraph).to_string(),
            "automorphisms": automorphism_count(&pattern, limits)?.to_string(),
        }),
    ))
}

fn unextendable_cmd(cli: &Cli, a: &UnextendableArgs, limits: &Limits) -> Outcome<Report> {
    let pair = read_pair(&a.pair)?;
    if let Some(path) = &a.host {
        let host = read_graph(path)?;
        return Ok(Report::new(
            "hyperspectra.unextendable/1",
            json!({"count": count_unextendable(&host, &pair, limits)?}),
        ));
    }
    let n = a.n.expect("clap requires --host or --n");
    let r = unextendable_copy_count(&pair, n, a.p, a.trials, cli.global.seed, cli.global.jobs, limits)?;
    Ok(Report::new("hyperspectra.unextendable/1", to_value(&r)?))
}

fn schema_dump() -> Report {
    let rational = "string \"p/q\"";
    let hypergraph = json!({"s": "int", "n": "int", "edges": "[[int, ...], ...] sorted, deduplicated"});
    Report::new(
        "hyperspectra.schemas/1",
        json!({
            "conventions": {
                "rational": rational,
                "float": "number, 12 significant digits",
                "decimal_inputs": "names of flags given as decimals and converted exactly",
            },
            "inputs": {
                "hypergraph": hypergraph,
                "pair": {"g": "hypergraph", "roots": "int", "h_edges": "[[int, ...], ...] optional"},
                "experiment_config": {
                    "s": "int", "ns": "[int]",
                    "grid": {"kind": "alpha | p", "values": "[rational] | [float]"},
                    "property": {"kind": "builtin | formula | pattern", "id": "contains_edge", "text": "string", "pattern": "hypergraph"},
                    "trials": "int", "seed": "int", "coupling": "bool", "timing": "bool",
                },
            },
            "outputs": {
                "hyperspectra.sample/1": ["s", "n", "p", "alpha", "seed", "trial", "hypergraph"],
                "hyperspectra.density/1": ["rho", "rho_max", "witness"],
                "hyperspectra.balance/1": ["rho", "rho_max", "balanced", "strictly_balanced"],
                "hyperspectra.classify-pair/1": ["alpha", "class", "witness", "value", "f_alpha", "v_rel", "e_rel", "rho", "rho_max", "strictly_balanced"],
                "hyperspectra.extend/1": ["roots", "strict", "count", "extensions", "alpha", "r", "maximal_count"],
                "hyperspectra.decompose/1": ["m", "member", "decomposition", "density_bound", "rho_max", "inverse_density_form", "cyclic_extensions"],
                "hyperspectra.game/1": ["k", "winner", "strategy", "strategy_wins"],
                "hyperspectra.eval/1": ["value", "formula", "quantifier_depth", "sentence"],
                "hyperspectra.bounds/1": ["theorem", "params", "meaning", "threshold | alpha | alpha_low | alpha_high | sigma | limit_point | witness_*", "witness"],
                "hyperspectra.sweep/1": ["config_digest", "config", "reports"],
                "hyperspectra.poisson/1": ["s", "n", "p", "trials", "seed", "patterns", "correlation"],
                "hyperspectra.count-copies/1": ["copies", "embeddings", "automorphisms"],
                "hyperspectra.unextendable/1": ["count"],
            },
            "files": {
                "summary_csv": {"first_line": "# config_digest: <sha256 hex>", "columns": SUMMARY_COLUMNS},
                "trials_jsonl": {
                    "header": {"schema": TRIALS_SCHEMA, "config_digest": "sha256 hex of the canonical config JSON", "config": "experiment_config"},
                    "record": ["n", "alpha", "p", "trial_index", "outcome", "count", "budget_exceeded", "elapsed_us"],
                },
            },
        }),
    )
}
