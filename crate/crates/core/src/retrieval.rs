//! Exact k-nearest-neighbour search over descriptors.
//!
//! Ties at equal distance are broken by ascending source id, so results do
//! not depend on insertion order.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::descriptor::Descriptor;
use crate::error::{Error, Result};

const CHI_SQUARE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    #[default]
    L1,
    L2,
    ChiSquare,
    Cosine,
}

impl Metric {
    pub const ALL: [Metric; 4] = [Metric::L1, Metric::L2, Metric::ChiSquare, Metric::Cosine];

    pub fn name(&self) -> &'static str {
        match self {
            Metric::L1 => "l1",
            Metric::L2 => "l2",
            Metric::ChiSquare => "chi2",
            Metric::Cosine => "cosine",
        }
    }

    /// Distance between equal-length slices. Callers check lengths.
    pub fn eval(&self, a: &[f64], b: &[f64]) -> f64 {
        debug_assert_eq!(a.len(), b.len());
        match self {
            Metric::L1 => a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum(),
            Metric::L2 => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt(),
            Metric::ChiSquare => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y) * (x - y) / (x + y + CHI_SQUARE_EPS))
                .sum(),
            Metric::Cosine => {
                let (mut ab, mut aa, mut bb) = (0.0, 0.0, 0.0);
                for (x, y) in a.iter().zip(b) {
                    ab += x * y;
                    aa += x * x;
                    bb += y * y;
                }
                match (aa == 0.0, bb == 0.0) {
                    (true, true) => 0.0,
                    (true, false) | (false, true) => 1.0,
                    _ => (1.0 - (ab / (aa * bb).sqrt()).clamp(-1.0, 1.0)).max(0.0),
                }
            }
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l1" | "manhattan" => Ok(Metric::L1),
            "l2" | "euclidean" => Ok(Metric::L2),
            "chi2" | "chi-square" | "chisquare" => Ok(Metric::ChiSquare),
            "cosine" => Ok(Metric::Cosine),
            _ => Err(Error::UnknownMetric(s.to_string())),
        }
    }
}

/// Distance between two descriptors under the named metric.
pub fn distance(a: &Descriptor, b: &Descriptor, metric: &str) -> Result<f64> {
    let metric: Metric = metric.parse()?;
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    Ok(metric.eval(&a.values, &b.values))
}

/// A descriptor with the id and label it is retrieved under.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexEntry {
    pub source_id: String,
    pub label: String,
    pub descriptor: Descriptor,
}

impl IndexEntry {
    pub fn new(source_id: impl Into<String>, label: impl Into<String>, descriptor: Descriptor) -> Self {
        let source_id = source_id.into();
        let descriptor = descriptor.with_source_id(source_id.clone());
        Self {
            source_id,
            label: label.into(),
            descriptor,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Neighbor {
    pub source_id: String,
    pub label: String,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryResult {
    pub k: usize,
    pub neighbors: Vec<Neighbor>,
}

impl QueryResult {
    pub fn first(&self) -> Option<&Neighbor> {
        self.neighbors.first()
    }
}

/// Immutable, homogeneous collection of labeled descriptors.
#[derive(Debug, Clone)]
pub struct DescriptorIndex {
    entries: Vec<IndexEntry>,
    params_digest: String,
    metric: Metric,
    dim: usize,
}

/// Builds an index; rejects empty input, mixed lengths or digests, and
/// duplicate ids.
pub fn build_index(entries: Vec<IndexEntry>, metric: Metric) -> Result<DescriptorIndex> {
    let first = entries.first().ok_or(Error::EmptyIndex)?;
    let dim = first.descriptor.len();
    let params_digest = first.descriptor.params_digest.clone();
    let mut seen = HashSet::with_capacity(entries.len());
    for e in &entries {
        if e.descriptor.len() != dim {
            return Err(Error::LengthMismatch {
                expected: dim,
                actual: e.descriptor.len(),
            });
        }
        if e.descriptor.params_digest != params_digest {
            return Err(Error::DigestMismatch {
                expected: params_digest,
                actual: e.descriptor.params_digest.clone(),
            });
        }
        if !seen.insert(e.source_id.as_str()) {
            return Err(Error::DuplicateId(e.source_id.clone()));
        }
    }
    Ok(DescriptorIndex {
        entries,
        params_digest,
        metric,
        dim,
    })
}

fn rank(a: &(f64, &IndexEntry), b: &(f64, &IndexEntry)) -> Ordering {
    a.0.total_cmp(&b.0)
        .then_with(|| a.1.source_id.cmp(&b.1.source_id))
}

impl DescriptorIndex {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn params_digest(&self) -> &str {
        &self.params_digest
    }

    pub fn entries(&self) -> &[IndexEntry] {
        &self.entries
    }

    pub fn contains(&self, source_id: &str) -> bool {
        self.entries.iter().any(|e| e.source_id == source_id)
    }

    /// Same entries under a different metric.
    pub fn with_metric(mut self, metric: Metric) -> Self {
        self.metric = metric;
        self
    }

    /// The `k` nearest entries to `query` by full scan.
    pub fn knn_query(&self, query: &Descriptor, k: usize) -> Result<QueryResult> {
        if query.len() != self.dim {
            return Err(Error::LengthMismatch {
                expected: self.dim,
                actual: query.len(),
            });
        }
        let mut scored: Vec<(f64, &IndexEntry)> = self
            .entries
            .iter()
            .map(|e| (self.metric.eval(&query.values, &e.descriptor.values), e))
            .collect();
        let k_eff = k.min(scored.len());
        if k_eff > 0 && k_eff < scored.len() {
            scored.select_nth_unstable_by(k_eff - 1, rank);
            scored.truncate(k_eff);
        }
        scored.sort_by(rank);
        scored.truncate(k_eff);
        Ok(QueryResult {
            k,
            neighbors: scored
                .into_iter()
                .map(|(distance, e)| Neighbor {
                    source_id: e.source_id.clone(),
                    label: e.label.clone(),
                    distance,
                })
                .collect(),
        })
    }

    /// Runs many queries in parallel; results keep the input order.
    pub fn knn_batch(&self, queries: &[Descriptor], k: usize) -> Result<Vec<QueryResult>> {
        queries.par_iter().map(|q| self.knn_query(q, k)).collect()
    }
}
