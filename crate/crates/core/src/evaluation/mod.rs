//! Scoring of first-match retrieval runs.

mod irma;
mod report;

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::retrieval::{DescriptorIndex, IndexEntry};

pub use irma::{
    irma_error, parse_irma_code, IrmaCode, IrmaErrorScheme, AXIS_LENGTHS, CODE_LENGTH, DEFAULT_BRANCHING,
    WILDCARD,
};
pub use report::{compare_reference, ReferenceComparison, Timing};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    Irma,
    Holidays,
}

impl std::str::FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "irma" => Ok(Protocol::Irma),
            "holidays" => Ok(Protocol::Holidays),
            other => Err(Error::InvalidParams(format!("unknown protocol `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryOutcome {
    pub query_id: String,
    pub match_id: String,
    pub distance: f64,
    /// IRMA protocol: hierarchical error of the first match.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<f64>,
    /// Holidays protocol: first match shares the query's category.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hit: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub protocol: Protocol,
    pub metric: String,
    pub params_digest: String,
    pub descriptor_length: usize,
    pub query_count: usize,
    pub per_query: Vec<QueryOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total_error: Option<f64>,
    /// `1 - total_error / query_count`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub accuracy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub true_retrieval_rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

fn check_labels(entries: &[IndexEntry]) -> Result<()> {
    match entries.iter().find(|e| e.label.trim().is_empty()) {
        Some(e) => Err(Error::MissingLabel(e.source_id.clone())),
        None => Ok(()),
    }
}

fn base_report(protocol: Protocol, index: &DescriptorIndex, per_query: Vec<QueryOutcome>) -> EvalReport {
    EvalReport {
        protocol,
        metric: index.metric().to_string(),
        params_digest: index.params_digest().to_string(),
        descriptor_length: index.dim(),
        query_count: per_query.len(),
        per_query,
        total_error: None,
        accuracy: None,
        true_retrieval_rate: None,
        notes: Vec::new(),
    }
}

/// First-match IRMA error with the default branching factors.
pub fn evaluate_irma(index: &DescriptorIndex, queries: &[IndexEntry]) -> Result<EvalReport> {
    evaluate_irma_with(index, queries, &IrmaErrorScheme::default())
}

pub fn evaluate_irma_with(
    index: &DescriptorIndex,
    queries: &[IndexEntry],
    scheme: &IrmaErrorScheme,
) -> Result<EvalReport> {
    check_labels(queries)?;
    check_labels(index.entries())?;
    let codes: HashMap<&str, IrmaCode> = index
        .entries()
        .iter()
        .map(|e| Ok((e.source_id.as_str(), parse_irma_code(&e.label)?)))
        .collect::<Result<_>>()?;

    let per_query = queries
        .par_iter()
        .map(|q| {
            let truth = parse_irma_code(&q.label)?;
            let result = index.knn_query(&q.descriptor, 1)?;
            let top = result.first().ok_or(Error::EmptyIndex)?;
            let predicted = &codes[top.source_id.as_str()];
            Ok(QueryOutcome {
                query_id: q.source_id.clone(),
                match_id: top.source_id.clone(),
                distance: top.distance,
                error: Some(scheme.error(&truth, predicted)),
                hit: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    // sequential fold keeps the total independent of thread scheduling
    let total: f64 = per_query.iter().filter_map(|q| q.error).sum();
    let mut report = base_report(Protocol::Irma, index, per_query);
    report.accuracy = Some(if report.query_count == 0 {
        1.0
    } else {
        1.0 - total / report.query_count as f64
    });
    report.total_error = Some(total);
    if scheme.uses_default_branching() {
        report.notes.push(format!(
            "IRMA error uses a uniform branching factor of {DEFAULT_BRANCHING} per position"
        ));
    }
    Ok(report)
}

/// Share of queries whose first match has the query's category label.
/// Query images must not be part of the index.
pub fn evaluate_holidays(index: &DescriptorIndex, queries: &[IndexEntry]) -> Result<EvalReport> {
    check_labels(queries)?;
    check_labels(index.entries())?;
    if let Some(q) = queries.iter().find(|q| index.contains(&q.source_id)) {
        return Err(Error::QueryInIndex(q.source_id.clone()));
    }
    let per_query = queries
        .par_iter()
        .map(|q| {
            let result = index.knn_query(&q.descriptor, 1)?;
            let top = result.first().ok_or(Error::EmptyIndex)?;
            Ok(QueryOutcome {
                query_id: q.source_id.clone(),
                match_id: top.source_id.clone(),
                distance: top.distance,
                error: None,
                hit: Some(top.label == q.label),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let hits = per_query.iter().filter(|q| q.hit == Some(true)).count();
    let mut report = base_report(Protocol::Holidays, index, per_query);
    report.true_retrieval_rate = Some(if report.query_count == 0 {
        0.0
    } else {
        hits as f64 / report.query_count as f64
    });
    Ok(report)
}

pub fn evaluate(protocol: Protocol, index: &DescriptorIndex, queries: &[IndexEntry]) -> Result<EvalReport> {
    match protocol {
        Protocol::Irma => evaluate_irma(index, queries),
        Protocol::Holidays => evaluate_holidays(index, queries),
    }
}
