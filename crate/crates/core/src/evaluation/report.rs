use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{EvalReport, Protocol};
use crate::error::{Error, Result};

/// Wall-clock measurements, kept out of the deterministic report payload.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub extraction_seconds: f64,
    pub query_seconds: f64,
    pub seconds_per_query: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceComparison {
    pub compared: usize,
    pub missing: Vec<String>,
    pub max_abs_difference: f64,
    pub reference_total: f64,
    pub our_total: f64,
}

#[derive(Debug, Serialize)]
struct CsvRow<'a> {
    query_id: &'a str,
    match_id: &'a str,
    score: String,
    distance: f64,
}

impl EvalReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Per-query rows `query_id,match_id,<error|hit>,distance`.
    pub fn to_csv(&self) -> Result<String> {
        let score_header = match self.protocol {
            Protocol::Irma => "error",
            Protocol::Holidays => "hit",
        };
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        w.write_record(["query_id", "match_id", score_header, "distance"])?;
        for q in &self.per_query {
            let score = match (q.error, q.hit) {
                (Some(e), _) => e.to_string(),
                (None, Some(h)) => u8::from(h).to_string(),
                (None, None) => String::new(),
            };
            w.serialize(CsvRow {
                query_id: &q.query_id,
                match_id: &q.match_id,
                score,
                distance: q.distance,
            })?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// One-line table in the layout `method | error (accuracy) | length | time`.
    pub fn summary(&self, timing: Option<&Timing>) -> String {
        let method = self.params_digest.split(';').find_map(|kv| kv.strip_prefix("method="));
        let mut s = String::new();
        let _ = writeln!(s, "protocol: {:?}, metric: {}, queries: {}", self.protocol, self.metric, self.query_count);
        let _ = writeln!(s, "{:<8} {:>22} {:>8} {:>10}", "Method", "Score", "Length", "Time");
        let score = match self.protocol {
            Protocol::Irma => format!(
                "{:.2} ({:.2}%)",
                self.total_error.unwrap_or(f64::NAN),
                100.0 * self.accuracy.unwrap_or(f64::NAN)
            ),
            Protocol::Holidays => format!("{:.2}%", 100.0 * self.true_retrieval_rate.unwrap_or(f64::NAN)),
        };
        let time = timing.map_or_else(|| "-".to_string(), |t| format!("{:.4}s", t.seconds_per_query));
        let _ = writeln!(
            s,
            "{:<8} {:>22} {:>8} {:>10}",
            method.unwrap_or("?").to_uppercase(),
            score,
            self.descriptor_length,
            time
        );
        for note in &self.notes {
            let _ = writeln!(s, "note: {note}");
        }
        s
    }

    pub fn write_all(&self, dir: &Path, timing: Option<&Timing>) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let write = |name: &str, body: String| {
            let path = dir.join(name);
            std::fs::write(&path, body).map_err(|e| Error::io(path, e))
        };
        write("report.json", self.to_json()?)?;
        write("per_query.csv", self.to_csv()?)?;
        write("summary.txt", self.summary(timing))?;
        if let Some(t) = timing {
            write("timing.json", serde_json::to_string_pretty(t)?)?;
        }
        Ok(())
    }
}

/// Compares per-query IRMA errors with the output of an external scorer,
/// given as `query_id,error` lines (`;` also accepted as separator).
pub fn compare_reference(report: &EvalReport, reference: &str) -> Result<ReferenceComparison> {
    let mut expected = std::collections::HashMap::new();
    for (n, line) in reference.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((id, err)) = line.split_once([',', ';', ' ', '\t']) else {
            return Err(Error::Format(format!("reference line {}: `{line}`", n + 1)));
        };
        let Ok(err) = err.trim().parse::<f64>() else {
            // header line
            if n == 0 {
                continue;
            }
            return Err(Error::Format(format!("reference line {}: `{line}`", n + 1)));
        };
        expected.insert(id.trim().to_string(), err);
    }

    let mut max_abs_difference: f64 = 0.0;
    let mut missing = Vec::new();
    let mut compared = 0;
    let mut reference_total = 0.0;
    let mut our_total = 0.0;
    for q in &report.per_query {
        let ours = q.error.unwrap_or(0.0);
        match expected.get(&q.query_id) {
            Some(theirs) => {
                compared += 1;
                reference_total += theirs;
                our_total += ours;
                max_abs_difference = max_abs_difference.max((ours - theirs).abs());
            }
            None => missing.push(q.query_id.clone()),
        }
    }
    Ok(ReferenceComparison {
        compared,
        missing,
        max_abs_difference,
        reference_total,
        our_total,
    })
}
