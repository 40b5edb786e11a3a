use crate::error::{Error, Result};

/// Environment variable that overrides the default caps.
///
/// Either a single integer (the vertex enumeration cap) or a comma
/// separated list of `key=value` pairs naming fields of [`Limits`].
pub const BUDGET_ENV: &str = "HYPERSPECTRA_BUDGET";

/// Enumeration caps and work budgets shared by every exhaustive search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Max pattern size for automorphism / isomorphism enumeration.
    pub enum_cap: usize,
    /// Max `v(G, H)` for intermediate-subgraph enumeration on pairs.
    pub pair_cap: usize,
    /// Max `v(G, H)` for extension searches.
    pub extension_cap: usize,
    /// Max vertices for m-decomposition.
    pub decompose_cap: usize,
    /// Max candidate edge slots when cataloguing rigid and neutral pairs.
    pub catalog_cap: usize,
    /// Node visits allowed in a single formula evaluation.
    pub eval_budget: u64,
    /// Positions allowed in a single game search.
    pub game_budget: u64,
    /// Potential edges `C(n, s)` allowed in a single sample.
    pub sample_budget: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            enum_cap: 12,
            pair_cap: 16,
            extension_cap: 8,
            decompose_cap: 20,
            catalog_cap: 16,
            eval_budget: 100_000_000,
            game_budget: 50_000_000,
            sample_budget: 10_000_000,
        }
    }
}

impl Limits {
    pub fn from_env() -> Result<Self> {
        match std::env::var(BUDGET_ENV) {
            Ok(text) => Limits::default()
                .with_overrides(&text)
                .map_err(|e| match e {
                    Error::Domain(m) => Error::Domain(format!("{BUDGET_ENV}: {m}")),
                    other => other,
                }),
            Err(_) => Ok(Limits::default()),
        }
    }

    pub fn with_overrides(mut self, text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(self);
        }
        if let Ok(cap) = text.parse::<usize>() {
            self.enum_cap = cap;
            return Ok(self);
        }
        for item in text.split(',') {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Domain(format!("expected key=value, got `{item}`")))?;
            let value = parse_count(value.trim())
                .ok_or_else(|| Error::Domain(format!("bad number in `{item}`")))?;
            match key.trim() {
                "enum_cap" => self.enum_cap = value as usize,
                "pair_cap" => self.pair_cap = value as usize,
                "extension_cap" => self.extension_cap = value as usize,
                "decompose_cap" => self.decompose_cap = value as usize,
                "catalog_cap" => self.catalog_cap = value as usize,
                "eval_budget" => self.eval_budget = value,
                "game_budget" => self.game_budget = value,
                "sample_budget" => self.sample_budget = value,
                other => return Err(Error::Domain(format!("unknown key `{other}`"))),
            }
        }
        Ok(self)
    }
}

/// A non-negative integer, also in integral scientific form such as `1e9`.
fn parse_count(text: &str) -> Option<u64> {
    if let Ok(v) = text.parse::<u64>() {
        return Some(v);
    }
    let x: f64 = text.parse().ok()?;
    (x >= 0.0 && x.fract() == 0.0 && x <= u64::MAX as f64).then_some(x as u64)
}
