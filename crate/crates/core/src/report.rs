//! The evaluation report: per-problem rows plus the aggregate metrics,
//! serialized as a versioned JSON document.

use serde::{Deserialize, Serialize};

use crate::label::{Answer, Label};
use crate::metrics::{MetricBlock, ProblemOutcome};
use crate::{compression::CompressorKind, dissimilarity::MeasureKind};
use crate::{Error, Result};

pub const REPORT_FORMAT_VERSION: u32 = 1;

/// The model a report was produced with.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelDescriptor {
    pub compressor: CompressorKind,
    pub measure: MeasureKind,
    pub theta: String,
    pub training_corpus: String,
}

/// One evaluated problem.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub id: String,
    pub score: f64,
    pub answer: Answer,
    pub truth: Label,
    pub out_of_range: bool,
}

/// A full evaluation run. Identical inputs yield identical reports except
/// for `generated_at_unix` and `duration_seconds`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub format_version: u32,
    pub tool_version: String,
    pub model: ModelDescriptor,
    pub corpus: String,
    pub problem_count: usize,
    pub generated_at_unix: u64,
    pub duration_seconds: f64,
    pub warnings: Vec<String>,
    /// Metric values rounded to six decimal places.
    pub metrics: MetricBlock,
    pub rows: Vec<ReportRow>,
}

impl EvaluationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn from_json(json: &str) -> Result<EvaluationReport> {
        serde_json::from_str(json)
            .map_err(|e| Error::InvalidArgument(format!("cannot parse report: {e}")))
    }

    /// Recompute the metric block from the rows; must reproduce the
    /// embedded block exactly (after the same rounding).
    pub fn recompute_metrics(&self) -> Result<MetricBlock> {
        let outcomes: Vec<ProblemOutcome> = self
            .rows
            .iter()
            .map(|r| ProblemOutcome {
                truth: r.truth,
                answer: r.answer,
                score: r.score,
            })
            .collect();
        Ok(MetricBlock::compute(&outcomes)?.rounded())
    }
}
