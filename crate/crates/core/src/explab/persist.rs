use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{EstimateReport, ExperimentConfig, TrialRecord};
use crate::error::{Error, Result};
use crate::rational::Rational;

pub const TRIALS_SCHEMA: &str = "hyperspectra.trials/1";

/// Column order of summary CSV files.
pub const SUMMARY_COLUMNS: [&str; 9] = [
    "n",
    "alpha",
    "p",
    "trials",
    "successes",
    "estimate",
    "ci_lo",
    "ci_hi",
    "budget_exceeded",
];

const DIGEST_PREFIX: &str = "# config_digest: ";

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// First line of every JSONL trial file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonlHeader {
    pub schema: String,
    pub config_digest: String,
    pub config: ExperimentConfig,
}

impl JsonlHeader {
    pub fn for_config(config: &ExperimentConfig) -> Result<Self> {
        Ok(JsonlHeader {
            schema: TRIALS_SCHEMA.to_string(),
            config_digest: config.digest()?,
            config: config.clone(),
        })
    }
}

/// Writes the header (when the file is new) and appends `records`.
///
/// An existing file must carry the same config digest.
pub fn append_jsonl(path: &Path, header: &JsonlHeader, records: &[TrialRecord]) -> Result<()> {
    let fresh = !path.exists() || std::fs::metadata(path).map_err(io_err(path))?.len() == 0;
    if !fresh {
        let (existing, _) = read_jsonl(path)?;
        if existing.config_digest != header.config_digest {
            return Err(Error::Domain(format!(
                "{} holds records for config {}, not {}",
                path.display(),
                existing.config_digest,
                header.config_digest
            )));
        }
    }
    let file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    if fresh {
        serde_json::to_writer(&mut w, header)?;
        w.write_all(b"\n").map_err(io_err(path))?;
    }
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n").map_err(io_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

pub fn read_jsonl(path: &Path) -> Result<(JsonlHeader, Vec<TrialRecord>)> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut lines = BufReader::new(file).lines();
    let first = lines
        .next()
        .ok_or_else(|| Error::Domain(format!("{} is empty", path.display())))?
        .map_err(io_err(path))?;
    let header: JsonlHeader = serde_json::from_str(&first)?;
    if header.schema != TRIALS_SCHEMA {
        return Err(Error::Domain(format!("unknown schema {:?} in {}", header.schema, path.display())));
    }
    let mut records = Vec::new();
    for line in lines {
        let line = line.map_err(io_err(path))?;
        if !line.trim().is_empty() {
            records.push(serde_json::from_str(&line)?);
        }
    }
    Ok((header, records))
}

pub fn write_summary_csv(path: &Path, reports: &[EstimateReport]) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut out = BufWriter::new(file);
    let digest = reports.first().map(|r| r.config_digest.as_str()).unwrap_or("");
    writeln!(out, "{DIGEST_PREFIX}{digest}").map_err(io_err(path))?;
    write_summary(&mut out, reports)?;
    out.flush().map_err(io_err(path))
}

/// Header row plus one row per report, no digest line.
pub fn write_summary<W: Write>(out: W, reports: &[EstimateReport]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUMMARY_COLUMNS)?;
    for r in reports {
        w.write_record([
            r.n.to_string(),
            r.alpha.as_ref().map(|a| a.to_string()).unwrap_or_default(),
            r.p.to_string(),
            r.trials.to_string(),
            r.successes.to_string(),
            r.estimate.to_string(),
            r.ci_lo.to_string(),
            r.ci_hi.to_string(),
            r.budget_exceeded.to_string(),
        ])?;
    }
    w.flush().map_err(|source| Error::Io {
        path: PathBuf::from("<summary>"),
        source,
    })
}

pub fn read_summary_csv(path: &Path) -> Result<Vec<EstimateReport>> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    let (first, rest) = text.split_once('\n').unwrap_or((&text, ""));
    let digest = first
        .strip_prefix(DIGEST_PREFIX)
        .ok_or_else(|| Error::Domain(format!("{} lacks a config digest line", path.display())))?
        .trim()
        .to_string();
    let mut reader = csv::Reader::from_reader(rest.as_bytes());
    let header = reader.headers()?.clone();
    if header.iter().ne(SUMMARY_COLUMNS) {
        return Err(Error::Domain(format!("unexpected CSV header in {}", path.display())));
    }
    let bad = |what: &str| Error::Domain(format!("bad {what} in {}", path.display()));
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row?;
        let num = |i: usize| row[i].parse::<f64>().map_err(|_| bad(SUMMARY_COLUMNS[i]));
        let int = |i: usize| row[i].parse::<u64>().map_err(|_| bad(SUMMARY_COLUMNS[i]));
        out.push(EstimateReport {
            n: int(0)? as usize,
            alpha: match &row[1] {
                "" => None,
                a => Some(a.parse::<Rational>()?),
            },
            p: num(2)?,
            trials: int(3)?,
            successes: int(4)?,
            estimate: num(5)?,
            ci_lo: num(6)?,
            ci_hi: num(7)?,
            budget_exceeded: int(8)?,
            config_digest: digest.clone(),
        });
    }
    Ok(out)
}
