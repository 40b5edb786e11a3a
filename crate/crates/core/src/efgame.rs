//! The k-round Ehrenfeucht game on two s-uniform boards.
//!
//! Each round Spoiler picks a vertex on either board and Duplicator answers
//! on the other. Duplicator wins if the chosen tuples induce isomorphic
//! substructures (same equalities, same edges). The condition is checked
//! after every round, so a mismatch ends the game at once.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::for_each_combination;
use crate::error::{Error, Result};
use crate::folio::{evaluate_sentence, Formula};
use crate::hypercore::{automorphisms, Hypergraph};
use crate::limits::Limits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Winner {
    Duplicator,
    Spoiler,
}

/// Board on which Spoiler moves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    First,
    Second,
}

#[derive(Debug, Clone)]
pub struct GamePosition<'a> {
    pub g1: &'a Hypergraph,
    pub g2: &'a Hypergraph,
    pub chosen1: Vec<usize>,
    pub chosen2: Vec<usize>,
    pub rounds_left: usize,
}

impl GamePosition<'_> {
    /// Board Spoiler moved on, then the opposite board and the matching
    /// chosen tuples.
    fn oriented(&self, side: Side) -> (&Hypergraph, &Hypergraph, &[usize], &[usize]) {
        match side {
            Side::First => (self.g1, self.g2, &self.chosen1, &self.chosen2),
            Side::Second => (self.g2, self.g1, &self.chosen2, &self.chosen1),
        }
    }
}

/// Duplicator's reply rule. Errors signal that no reply exists; the
/// verifier scores them as a loss.
pub trait Strategy: Sync {
    fn reply(&self, position: &GamePosition<'_>, side: Side, vertex: usize) -> Result<usize>;
}

/// Copies Spoiler's vertex id.
#[derive(Debug, Clone, Copy, Default)]
pub struct MirrorStrategy;

impl Strategy for MirrorStrategy {
    fn reply(&self, position: &GamePosition<'_>, side: Side, vertex: usize) -> Result<usize> {
        let (_, other, _, _) = position.oriented(side);
        if vertex < other.n() {
            Ok(vertex)
        } else {
            Err(Error::NoWitness)
        }
    }
}

/// Always answers the same vertex id.
#[derive(Debug, Clone, Copy)]
pub struct ConstantStrategy(pub usize);

impl Strategy for ConstantStrategy {
    fn reply(&self, position: &GamePosition<'_>, side: Side, _vertex: usize) -> Result<usize> {
        let (_, other, _, _) = position.oriented(side);
        if self.0 < other.n() {
            Ok(self.0)
        } else {
            Err(Error::NoWitness)
        }
    }
}

/// Answers the smallest vertex with the same equalities and the same edge
/// pattern towards the previously chosen vertices. Wins whenever both
/// boards have the full level `k - 1` extension property.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExtensionStrategy;

impl Strategy for ExtensionStrategy {
    fn reply(&self, position: &GamePosition<'_>, side: Side, vertex: usize) -> Result<usize> {
        let (here, other, mine, theirs) = position.oriented(side);
        let pairs = distinct_pairs(mine, theirs);
        (0..other.n())
            .find(|&w| consistent(here, other, &pairs, vertex, w))
            .ok_or(Error::NoWitness)
    }
}

/// Plays a move that keeps an optimal-play win, smallest id first, or any
/// locally consistent move when the position is lost.
#[derive(Debug, Clone)]
pub struct OptimalStrategy {
    limits: Limits,
}

impl OptimalStrategy {
    pub fn new(limits: &Limits) -> Self {
        OptimalStrategy { limits: *limits }
    }
}

impl Strategy for OptimalStrategy {
    fn reply(&self, position: &GamePosition<'_>, side: Side, vertex: usize) -> Result<usize> {
        let (here, other, mine, theirs) = position.oriented(side);
        let local = distinct_pairs(mine, theirs);
        let pairs = distinct_pairs(&position.chosen1, &position.chosen2);
        let visits = AtomicU64::new(0);
        let mut solver = Solver::new(position.g1, position.g2, &visits, self.limits.game_budget);
        let mut fallback = None;
        for w in 0..other.n() {
            if !consistent(here, other, &local, vertex, w) {
                continue;
            }
            fallback.get_or_insert(w);
            let next = match side {
                Side::First => extend_pairs(&pairs, vertex, w),
                Side::Second => extend_pairs(&pairs, w, vertex),
            };
            if solver.duplicator_wins(&next, position.rounds_left.saturating_sub(1))? {
                return Ok(w);
            }
        }
        fallback.ok_or(Error::NoWitness)
    }
}

fn flip(pairs: &[(usize, usize)]) -> Vec<(usize, usize)> {
    pairs.iter().map(|&(a, b)| (b, a)).collect()
}

/// Distinct chosen pairs, sorted. Assumes the tuples are consistent.
fn distinct_pairs(a: &[usize], b: &[usize]) -> Vec<(usize, usize)> {
    let mut pairs: Vec<(usize, usize)> = a.iter().copied().zip(b.iter().copied()).collect();
    pairs.sort_unstable();
    pairs.dedup();
    pairs
}

fn extend_pairs(pairs: &[(usize, usize)], x: usize, y: usize) -> Vec<(usize, usize)> {
    let mut next = pairs.to_vec();
    if let Err(at) = next.binary_search(&(x, y)) {
        next.insert(at, (x, y));
    }
    next
}

/// Whether adding `(x, y)` to the distinct pairs `pairs` (x on `g`, y on
/// `h`) keeps a partial isomorphism.
fn consistent(g: &Hypergraph, h: &Hypergraph, pairs: &[(usize, usize)], x: usize, y: usize) -> bool {
    for &(a, b) in pairs {
        if (a == x) != (b == y) {
            return false;
        }
        if a == x {
            return true;
        }
    }
    let s = g.s();
    let mut ok = true;
    let (mut kg, mut kh) = (Vec::with_capacity(s), Vec::with_capacity(s));
    for_each_combination(pairs.len(), s - 1, |idx| {
        kg.clear();
        kh.clear();
        kg.extend(idx.iter().map(|&i| pairs[i].0));
        kh.extend(idx.iter().map(|&i| pairs[i].1));
        kg.push(x);
        kh.push(y);
        ok = g.has_edge(&kg) == h.has_edge(&kh);
        ok
    });
    ok
}

fn check_size(g1: &Hypergraph, g2: &Hypergraph, k: usize, limits: &Limits) -> Result<()> {
    if g1.s() != g2.s() {
        return Err(Error::Domain("boards have different uniformity".into()));
    }
    let positions = ((g1.n() + 1) as f64).powi(k as i32) * ((g2.n() + 1) as f64).powi(k as i32);
    if positions > limits.game_budget as f64 {
        return Err(Error::BudgetExceeded {
            what: "game positions (v1+1)^k (v2+1)^k",
            budget: limits.game_budget,
        });
    }
    Ok(())
}

/// Memoized backward induction. Positions are keyed by the set of
/// distinct chosen pairs and the remaining rounds: order and repeats do
/// not affect the outcome.
struct Solver<'a> {
    g1: &'a Hypergraph,
    g2: &'a Hypergraph,
    memo: HashMap<(Vec<(usize, usize)>, usize), bool>,
    visits: &'a AtomicU64,
    budget: u64,
}

impl<'a> Solver<'a> {
    fn new(g1: &'a Hypergraph, g2: &'a Hypergraph, visits: &'a AtomicU64, budget: u64) -> Self {
        Solver {
            g1,
            g2,
            memo: HashMap::new(),
            visits,
            budget,
        }
    }

    fn duplicator_wins(&mut self, pairs: &[(usize, usize)], rounds: usize) -> Result<bool> {
        if rounds == 0 {
            return Ok(true);
        }
        let key = (pairs.to_vec(), rounds);
        if let Some(&hit) = self.memo.get(&key) {
            return Ok(hit);
        }
        if self.visits.fetch_add(1, Ordering::Relaxed) >= self.budget {
            return Err(Error::BudgetExceeded {
                what: "game positions",
                budget: self.budget,
            });
        }
        let mut win = true;
        'moves: for side in [Side::First, Side::Second] {
            let n = if side == Side::First { self.g1.n() } else { self.g2.n() };
            for v in 0..n {
                if !self.answerable(pairs, rounds, side, v)? {
                    win = false;
                    break 'moves;
                }
            }
        }
        self.memo.insert(key, win);
        Ok(win)
    }

    /// Some reply to Spoiler's `(side, v)` keeps a Duplicator win.
    fn answerable(&mut self, pairs: &[(usize, usize)], rounds: usize, side: Side, v: usize) -> Result<bool> {
        let (g1, g2) = (self.g1, self.g2);
        match side {
            Side::First => {
                for w in 0..g2.n() {
                    if consistent(g1, g2, pairs, v, w) && self.duplicator_wins(&extend_pairs(pairs, v, w), rounds - 1)? {
                        return Ok(true);
                    }
                }
            }
            Side::Second => {
                let flipped = flip(pairs);
                for w in 0..g1.n() {
                    if consistent(g2, g1, &flipped, v, w) && self.duplicator_wins(&extend_pairs(pairs, w, v), rounds - 1)? {
                        return Ok(true);
                    }
                }
            }
        }
        Ok(false)
    }
}

/// Orbit representatives of `Aut(g)`, or every vertex when the group is
/// too large to enumerate.
fn orbit_representatives(g: &Hypergraph, limits: &Limits) -> Vec<usize> {
    let Ok(auts) = automorphisms(g, limits) else {
        return (0..g.n()).collect();
    };
    (0..g.n())
        .filter(|&v| auts.iter().all(|p| p[v] >= v))
        .collect()
}

/// Winner of the k-round game under optimal play.
///
/// Spoiler's first move is taken up to automorphisms of its board; the
/// first-round moves are searched in parallel.
pub fn solve(g1: &Hypergraph, g2: &Hypergraph, k: usize, limits: &Limits) -> Result<Winner> {
    check_size(g1, g2, k, limits)?;
    if k == 0 {
        return Ok(Winner::Duplicator);
    }
    let mut moves: Vec<(Side, usize)> = orbit_representatives(g1, limits)
        .into_iter()
        .map(|v| (Side::First, v))
        .collect();
    moves.extend(orbit_representatives(g2, limits).into_iter().map(|v| (Side::Second, v)));
    let visits = AtomicU64::new(0);
    let outcomes: Vec<Result<bool>> = moves
        .par_iter()
        .map(|&(side, v)| Solver::new(g1, g2, &visits, limits.game_budget).answerable(&[], k, side, v))
        .collect();
    for o in outcomes {
        if !o? {
            return Ok(Winner::Spoiler);
        }
    }
    Ok(Winner::Duplicator)
}

/// Plain game-tree search without memo, symmetry reduction or early
/// termination; the isomorphism test runs only on complete plays.
pub fn solve_reference(g1: &Hypergraph, g2: &Hypergraph, k: usize) -> Winner {
    fn iso(g1: &Hypergraph, g2: &Hypergraph, a: &[usize], b: &[usize]) -> bool {
        let k = a.len();
        for i in 0..k {
            for j in 0..k {
                if (a[i] == a[j]) != (b[i] == b[j]) {
                    return false;
                }
            }
        }
        let mut ok = true;
        for_each_combination(k, g1.s(), |idx| {
            let ea: Vec<usize> = idx.iter().map(|&i| a[i]).collect();
            let eb: Vec<usize> = idx.iter().map(|&i| b[i]).collect();
            ok = g1.has_edge(&ea) == g2.has_edge(&eb);
            ok
        });
        ok
    }
    fn play(g1: &Hypergraph, g2: &Hypergraph, a: &mut Vec<usize>, b: &mut Vec<usize>, left: usize) -> bool {
        if left == 0 {
            return iso(g1, g2, a, b);
        }
        for x in 0..g1.n() {
            let mut answered = false;
            for y in 0..g2.n() {
                a.push(x);
                b.push(y);
                answered = play(g1, g2, a, b, left - 1);
                a.pop();
                b.pop();
                if answered {
                    break;
                }
            }
            if !answered {
                return false;
            }
        }
        for y in 0..g2.n() {
            let mut answered = false;
            for x in 0..g1.n() {
                a.push(x);
                b.push(y);
                answered = play(g1, g2, a, b, left - 1);
                a.pop();
                b.pop();
                if answered {
                    break;
                }
            }
            if !answered {
                return false;
            }
        }
        true
    }
    if play(g1, g2, &mut Vec::new(), &mut Vec::new(), k) {
        Winner::Duplicator
    } else {
        Winner::Spoiler
    }
}

/// Whether Duplicator following `strategy` beats every Spoiler line.
pub fn verify_strategy(
    g1: &Hypergraph,
    g2: &Hypergraph,
    k: usize,
    strategy: &dyn Strategy,
    limits: &Limits,
) -> Result<bool> {
    check_size(g1, g2, k, limits)?;
    if k == 0 {
        return Ok(true);
    }
    let visits = AtomicU64::new(0);
    let moves: Vec<(Side, usize)> = (0..g1.n())
        .map(|v| (Side::First, v))
        .chain((0..g2.n()).map(|v| (Side::Second, v)))
        .collect();
    let outcomes: Vec<Result<bool>> = moves
        .par_iter()
        .map(|&(side, v)| {
            let mut pos = GamePosition {
                g1,
                g2,
                chosen1: Vec::new(),
                chosen2: Vec::new(),
                rounds_left: k,
            };
            survives(&mut pos, side, v, strategy, &visits, limits.game_budget)
        })
        .collect();
    for o in outcomes {
        if !o? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn survives(
    pos: &mut GamePosition<'_>,
    side: Side,
    v: usize,
    strategy: &dyn Strategy,
    visits: &AtomicU64,
    budget: u64,
) -> Result<bool> {
    if visits.fetch_add(1, Ordering::Relaxed) >= budget {
        return Err(Error::BudgetExceeded {
            what: "strategy verification positions",
            budget,
        });
    }
    let w = match strategy.reply(pos, side, v) {
        Ok(w) => w,
        Err(Error::BudgetExceeded { what, budget }) => return Err(Error::BudgetExceeded { what, budget }),
        Err(_) => return Ok(false),
    };
    let (x, y) = match side {
        Side::First => (v, w),
        Side::Second => (w, v),
    };
    if y >= pos.g2.n() || x >= pos.g1.n() {
        return Ok(false);
    }
    let pairs = distinct_pairs(&pos.chosen1, &pos.chosen2);
    if !consistent(pos.g1, pos.g2, &pairs, x, y) {
        return Ok(false);
    }
    if pos.rounds_left == 1 {
        return Ok(true);
    }
    pos.chosen1.push(x);
    pos.chosen2.push(y);
    pos.rounds_left -= 1;
    let mut ok = true;
    'lines: for next_side in [Side::First, Side::Second] {
        let n = if next_side == Side::First { pos.g1.n() } else { pos.g2.n() };
        for u in 0..n {
            if !survives(pos, next_side, u, strategy, visits, budget)? {
                ok = false;
                break 'lines;
            }
        }
    }
    pos.rounds_left += 1;
    pos.chosen1.pop();
    pos.chosen2.pop();
    Ok(ok)
}

/// Outcome of comparing the solver with sentence truth values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgreementReport {
    pub winner: Winner,
    /// Indices of corpus sentences that separate the boards although
    /// Duplicator wins; nonempty only if the engine is wrong.
    pub counterexamples: Vec<usize>,
}

/// Checks that a Duplicator win implies agreement on every corpus
/// sentence of depth at most `k`.
pub fn agreement_check(
    g1: &Hypergraph,
    g2: &Hypergraph,
    k: usize,
    corpus: &[Formula],
    limits: &Limits,
) -> Result<AgreementReport> {
    if let Some(f) = corpus.iter().find(|f| f.quantifier_depth() > k || !f.is_sentence()) {
        return Err(Error::Domain(format!("corpus entry is not a sentence of depth <= {k}: {f}")));
    }
    let winner = solve(g1, g2, k, limits)?;
    let mut counterexamples = Vec::new();
    if winner == Winner::Duplicator {
        for (i, f) in corpus.iter().enumerate() {
            if evaluate_sentence(g1, f, limits.eval_budget)? != evaluate_sentence(g2, f, limits.eval_budget)? {
                counterexamples.push(i);
            }
        }
    }
    Ok(AgreementReport { winner, counterexamples })
}
