//! Problems, trained verifier models and Y/N decisions.
//!
//! A verifier model is just a compressor choice, a measure choice and a
//! calibrated threshold; scoring a problem reads nothing but that
//! problem's own documents.

use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::calibration::{self, LabeledScore, Threshold};
use crate::compression::{self, CompressorKind};
use crate::dissimilarity::{self, DissimilarityScore, MeasureKind};
use crate::label::{Answer, Label};
use crate::metrics::{MetricBlock, ProblemOutcome};
use crate::report::{EvaluationReport, ModelDescriptor, ReportRow, REPORT_FORMAT_VERSION};
use crate::{Error, Result};

/// A document: an identifier plus UTF-8 text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub text: String,
}

/// One verification case: a questioned document against the reference
/// documents of the claimed author, with an optional ground-truth label.
#[derive(Clone, Debug)]
pub struct Problem {
    pub id: String,
    pub unknown: Document,
    pub known: Vec<Document>,
    pub truth: Option<Label>,
}

/// Provenance of a trained model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelMetadata {
    pub training_corpus: String,
    pub trained_at_unix: u64,
}

/// The trained artifact: compressor, measure and threshold are fixed at
/// training time and immutable afterwards.
#[derive(Clone, Debug, PartialEq)]
pub struct VerifierModel {
    pub compressor: CompressorKind,
    pub measure: MeasureKind,
    pub theta: Threshold,
    pub metadata: ModelMetadata,
}

/// Current version of the serialized model format.
pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format_version: u32,
    compressor: CompressorKind,
    measure: MeasureKind,
    /// Decimal string with 17 significant digits so the exact f64
    /// round-trips through the file.
    theta: String,
    metadata: ModelMetadata,
}

/// Render θ with enough digits to round-trip the exact f64.
pub fn theta_to_string(theta: f64) -> String {
    format!("{theta:.16e}")
}

impl VerifierModel {
    pub fn to_json(&self) -> String {
        let file = ModelFile {
            format_version: MODEL_FORMAT_VERSION,
            compressor: self.compressor,
            measure: self.measure,
            theta: theta_to_string(self.theta.0),
            metadata: self.metadata.clone(),
        };
        serde_json::to_string_pretty(&file).expect("model serialization cannot fail")
    }

    pub fn from_json(json: &str) -> Result<VerifierModel> {
        let file: ModelFile = serde_json::from_str(json).map_err(|e| Error::ModelParse {
            reason: e.to_string(),
        })?;
        if file.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::ModelVersion {
                found: file.format_version,
                expected: MODEL_FORMAT_VERSION,
            });
        }
        let theta: f64 = file.theta.trim().parse().map_err(|_| Error::ModelParse {
            reason: format!("theta {:?} is not a number", file.theta),
        })?;
        if !theta.is_finite() {
            return Err(Error::ModelParse {
                reason: format!("theta {:?} is not finite", file.theta),
            });
        }
        Ok(VerifierModel {
            compressor: file.compressor,
            measure: file.measure,
            theta: Threshold(theta),
            metadata: file.metadata,
        })
    }

    pub fn descriptor(&self) -> ModelDescriptor {
        ModelDescriptor {
            compressor: self.compressor,
            measure: self.measure,
            theta: theta_to_string(self.theta.0),
            training_corpus: self.metadata.training_corpus.clone(),
        }
    }
}

/// The verdict for one problem.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Decision {
    pub problem_id: String,
    pub score: DissimilarityScore,
    pub answer: Label,
    /// Set when the score fell outside the measure's nominal range.
    pub out_of_range: bool,
}

/// Concatenate the known documents into the single reference document,
/// in ascending id order with no separator bytes, so the input order of
/// the knowns can never shift the compressed lengths.
pub fn concat_known(problem: &Problem) -> Document {
    let mut ordered: Vec<&Document> = problem.known.iter().collect();
    ordered.sort_by(|a, b| a.id.cmp(&b.id));
    let mut text = String::with_capacity(ordered.iter().map(|d| d.text.len()).sum());
    for doc in ordered {
        text.push_str(&doc.text);
    }
    Document {
        id: format!("{}-known", problem.id),
        text,
    }
}

fn nonempty(text: &str, what: &str, problem_id: &str) -> Result<()> {
    if text.is_empty() {
        return Err(Error::EmptyInput {
            context: format!("{what} of problem {problem_id} is empty"),
        });
    }
    Ok(())
}

/// Dissimilarity between the concatenated knowns and the questioned
/// document: the measure applied to `(C(known), C(unknown),
/// C(known ∥ unknown))`, in that concatenation order.
pub fn score_problem(model: &VerifierModel, problem: &Problem) -> Result<DissimilarityScore> {
    let known = concat_known(problem);
    nonempty(&known.text, "known text", &problem.id)?;
    nonempty(&problem.unknown.text, "unknown text", &problem.id)?;
    let (cx, cy, cxy) = compression::triple_lengths(
        model.compressor,
        known.text.as_bytes(),
        problem.unknown.text.as_bytes(),
    )?;
    Ok(dissimilarity::score(cx.0, cy.0, cxy.0, model.measure))
}

/// Accept the authorship iff the score falls strictly below θ; a score
/// equal to θ is rejected.
pub fn decide(model: &VerifierModel, problem: &Problem) -> Result<Decision> {
    let score = score_problem(model, problem)?;
    Ok(decision_from_score(model, &problem.id, score))
}

fn decision_from_score(
    model: &VerifierModel,
    problem_id: &str,
    score: DissimilarityScore,
) -> Decision {
    let answer = if score.value < model.theta.0 {
        Label::Y
    } else {
        Label::N
    };
    Decision {
        problem_id: problem_id.to_string(),
        out_of_range: !score.in_nominal_range(),
        score,
        answer,
    }
}

fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Training statistics reported next to the model.
#[derive(Clone, Debug)]
pub struct TrainingStats {
    pub y_count: usize,
    pub n_count: usize,
    /// Class counts actually fed into calibration (after balancing).
    pub calibrated_per_class: usize,
    /// AUC of the training scores; absent for a single-class corpus.
    pub training_auc: Option<f64>,
    pub far_at_theta: f64,
    pub frr_at_theta: f64,
}

/// A trained model plus its training statistics.
#[derive(Clone, Debug)]
pub struct TrainOutcome {
    pub model: VerifierModel,
    pub stats: TrainingStats,
}

/// Score every labeled problem, partition the scores by label, calibrate
/// θ at the equal error rate and assemble the model.
///
/// The corpus must be balanced; `balance_seed` enables seeded
/// downsampling of the larger class instead of failing.
pub fn train(
    compressor: CompressorKind,
    measure: MeasureKind,
    training_corpus: &[Problem],
    corpus_id: &str,
    balance_seed: Option<u64>,
) -> Result<TrainOutcome> {
    let model_for_scoring = VerifierModel {
        compressor,
        measure,
        theta: Threshold(f64::NAN),
        metadata: ModelMetadata {
            training_corpus: corpus_id.to_string(),
            trained_at_unix: 0,
        },
    };

    let labeled: Vec<LabeledScore> = training_corpus
        .par_iter()
        .map(|problem| {
            let truth = problem.truth.ok_or_else(|| Error::UnlabeledProblem {
                id: problem.id.clone(),
            })?;
            let score = score_problem(&model_for_scoring, problem)?;
            Ok(LabeledScore {
                score: score.value,
                label: truth,
            })
        })
        .collect::<Result<_>>()?;

    let (mut y_scores, mut n_scores) = calibration::partition_scores(&labeled);
    let (y_count, n_count) = (y_scores.len(), n_scores.len());

    if y_scores.len() != n_scores.len() {
        if let Some(seed) = balance_seed {
            let (y, n) = calibration::subsample_balance(y_scores, n_scores, seed);
            y_scores = y;
            n_scores = n;
        }
    }

    let theta = calibration::calibrate_eer(&y_scores, &n_scores)?;

    let outcomes: Vec<ProblemOutcome> = labeled
        .iter()
        .map(|ls| ProblemOutcome {
            truth: ls.label,
            answer: Answer::Unanswered, // answers are irrelevant for the training AUC
            score: ls.score,
        })
        .collect();
    let training_auc = match crate::metrics::roc_auc(&outcomes) {
        Ok(a) => Some(a),
        Err(Error::SingleClass) => None,
        Err(e) => return Err(e),
    };

    let stats = TrainingStats {
        y_count,
        n_count,
        calibrated_per_class: y_scores.len(),
        training_auc,
        far_at_theta: calibration::false_acceptance_rate(&n_scores, theta.0),
        frr_at_theta: calibration::false_rejection_rate(&y_scores, theta.0),
    };

    Ok(TrainOutcome {
        model: VerifierModel {
            compressor,
            measure,
            theta,
            metadata: ModelMetadata {
                training_corpus: corpus_id.to_string(),
                trained_at_unix: unix_now(),
            },
        },
        stats,
    })
}

/// Decide every labeled problem and aggregate the metric block into a
/// report. Problems are scored in parallel and reduced in id order, so
/// the report bytes never depend on the worker count.
pub fn evaluate(
    model: &VerifierModel,
    eval_corpus: &[Problem],
    corpus_id: &str,
) -> Result<EvaluationReport> {
    let started = Instant::now();

    let mut decisions: Vec<(Label, Decision)> = eval_corpus
        .par_iter()
        .map(|problem| {
            let truth = problem.truth.ok_or_else(|| Error::UnlabeledProblem {
                id: problem.id.clone(),
            })?;
            let decision = decide(model, problem)?;
            Ok((truth, decision))
        })
        .collect::<Result<_>>()?;
    decisions.sort_by(|a, b| a.1.problem_id.cmp(&b.1.problem_id));

    let outcomes: Vec<ProblemOutcome> = decisions
        .iter()
        .map(|(truth, d)| ProblemOutcome {
            truth: *truth,
            answer: d.answer.into(),
            score: d.score.value,
        })
        .collect();
    let metrics = MetricBlock::compute(&outcomes)?;

    let mut warnings = Vec::new();
    let out_of_range = decisions.iter().filter(|(_, d)| d.out_of_range).count();
    if out_of_range > 0 {
        warnings.push(format!(
            "{out_of_range} score(s) outside the measure's nominal range"
        ));
    }
    if metrics.auc.is_none() {
        warnings.push("single-class corpus: AUC and final score omitted".to_string());
    }

    let rows: Vec<ReportRow> = decisions
        .into_iter()
        .map(|(truth, d)| ReportRow {
            id: d.problem_id,
            score: d.score.value,
            answer: d.answer.into(),
            truth,
            out_of_range: d.out_of_range,
        })
        .collect();

    Ok(EvaluationReport {
        format_version: REPORT_FORMAT_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        model: model.descriptor(),
        corpus: corpus_id.to_string(),
        problem_count: rows.len(),
        generated_at_unix: unix_now(),
        duration_seconds: started.elapsed().as_secs_f64(),
        warnings,
        metrics: metrics.rounded(),
        rows,
    })
}
