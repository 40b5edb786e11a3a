//! `{"s": int, "n": int, "edges": [[int, ...], ...]}` with canonical edges.
//!
//! Reading is strict: edges must already be sorted and deduplicated, and
//! every violation names its position.

use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use super::Hypergraph;
use crate::error::{Error, Result};

fn bad(message: String) -> Error {
    Error::InvalidHypergraph(message)
}

fn uint(value: &Value, at: &str) -> Result<usize> {
    value
        .as_u64()
        .map(|v| v as usize)
        .ok_or_else(|| bad(format!("{at}: expected a non-negative integer, found {value}")))
}

impl Hypergraph {
    pub fn from_json_value(value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| bad("expected an object with keys s, n, edges".into()))?;
        for key in obj.keys() {
            if !matches!(key.as_str(), "s" | "n" | "edges") {
                return Err(bad(format!("unknown key `{key}`")));
            }
        }
        let field = |k: &str| obj.get(k).ok_or_else(|| bad(format!("missing key `{k}`")));
        let s = uint(field("s")?, "s")?;
        let n = uint(field("n")?, "n")?;
        let list = field("edges")?
            .as_array()
            .ok_or_else(|| bad("edges: expected an array".into()))?;
        let mut edges: Vec<Vec<usize>> = Vec::with_capacity(list.len());
        for (i, raw) in list.iter().enumerate() {
            let items = raw
                .as_array()
                .ok_or_else(|| bad(format!("edges[{i}]: expected an array")))?;
            if items.len() != s {
                return Err(bad(format!("edges[{i}]: has {} vertices, expected {s}", items.len())));
            }
            let mut e = Vec::with_capacity(s);
            for (j, v) in items.iter().enumerate() {
                let v = uint(v, &format!("edges[{i}][{j}]"))?;
                if v >= n {
                    return Err(bad(format!("edges[{i}][{j}]: vertex {v} out of range for n={n}")));
                }
                if e.last().is_some_and(|&p| p >= v) {
                    return Err(bad(format!("edges[{i}]: vertices not strictly ascending")));
                }
                e.push(v);
            }
            if let Some(prev) = edges.last() {
                if *prev == e {
                    return Err(bad(format!("edges[{i}]: duplicate of edges[{}]", i - 1)));
                }
                if *prev > e {
                    return Err(bad(format!("edges[{i}]: edge list not sorted")));
                }
            }
            edges.push(e);
        }
        Hypergraph::new(s, n, edges)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text)?;
        Hypergraph::from_json_value(&value)
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Hypergraph::from_json_str(&text)
    }

    pub fn to_json_value(&self) -> Value {
        json!({"s": self.s, "n": self.n, "edges": self.edges})
    }
}

impl Serialize for Hypergraph {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json_value().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Hypergraph {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let value = Value::deserialize(deserializer)?;
        Hypergraph::from_json_value(&value).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let g = Hypergraph::loose_cycle(3, 3).unwrap();
        let text = serde_json::to_string(&g).unwrap();
        assert_eq!(Hypergraph::from_json_str(&text).unwrap(), g);
        let back: Hypergraph = serde_json::from_str(&text).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn positional_errors() {
        let cases = [
            (r#"{"s":3,"n":4,"edges":[[0,2,1]]}"#, "edges[0]"),
            (r#"{"s":3,"n":4,"edges":[[0,1,2],[0,1,2]]}"#, "edges[1]: duplicate"),
            (r#"{"s":3,"n":4,"edges":[[0,1,3],[0,1,2]]}"#, "edges[1]: edge list not sorted"),
            (r#"{"s":3,"n":4,"edges":[[0,1]]}"#, "edges[0]: has 2"),
            (r#"{"s":3,"n":4,"edges":[[0,1,4]]}"#, "edges[0][2]"),
            (r#"{"s":3,"n":4,"edges":[[0,1,-2]]}"#, "edges[0][2]"),
            (r#"{"s":3,"edges":[]}"#, "missing key `n`"),
        ];
        for (text, needle) in cases {
            let err = Hypergraph::from_json_str(text).unwrap_err().to_string();
            assert!(err.contains(needle), "{text}: {err}");
        }
    }
}
