//! Implementations behind the `cmav` subcommands: preprocess, train,
//! verify, evaluate and grid.
//!
//! Each function takes plain paths and options, does the work and returns
//! data; the binary is responsible for rendering. When a worker count is
//! given, the scoring fan-out runs on a dedicated pool of that size, and
//! results are always reduced in problem-id order so the output bytes do
//! not depend on parallelism.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::compression::CompressorKind;
use crate::corpus::{self, Deduplicated, RemovedDuplicate};
use crate::dissimilarity::MeasureKind;
use crate::label::Label;
use crate::metrics::{self, ProblemOutcome};
use crate::report::EvaluationReport;
use crate::verification::{self, Problem, TrainOutcome, VerifierModel};
use crate::{Answer, Error, Result};

fn with_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match jobs {
        None => f(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::InvalidArgument(format!("cannot build worker pool: {e}")))?
            .install(f),
    }
}

fn corpus_id(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content).map_err(|source| Error::Io {
        context: format!("writing {}", path.display()),
        source,
    })
}

fn load_model(path: &Path) -> Result<VerifierModel> {
    let json = fs::read_to_string(path).map_err(|e| Error::ModelParse {
        reason: format!("cannot read {}: {e}", path.display()),
    })?;
    VerifierModel::from_json(&json)
}

// ---------------------------------------------------------------------------
// preprocess

/// One removal, attributed to its problem directory.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DedupLogEntry {
    pub problem_id: String,
    #[serde(flatten)]
    pub removal: RemovedDuplicate,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DedupLog {
    pub format_version: u32,
    pub threshold: f64,
    pub removed: Vec<DedupLogEntry>,
}

#[derive(Debug)]
pub struct PreprocessSummary {
    pub problem_count: usize,
    pub removed: Vec<DedupLogEntry>,
    pub warnings: Vec<String>,
}

/// Clean every document, drop near-duplicate known documents within each
/// problem, and write the mirrored corpus plus `dedup_log.json` under
/// `output`.
///
/// Cleaning runs before duplicate detection so that a second pass over
/// the written corpus is a byte-identical no-op.
pub fn run_preprocess(
    input: &Path,
    output: &Path,
    dedup_threshold: f64,
) -> Result<PreprocessSummary> {
    let loaded = corpus::load_corpus(input)?;
    let mut warnings = loaded.warnings;
    let mut removed = Vec::new();

    let mut cleaned_problems = Vec::with_capacity(loaded.problems.len());
    for mut problem in loaded.problems {
        for doc in problem
            .known
            .iter_mut()
            .chain(std::iter::once(&mut problem.unknown))
        {
            doc.text = corpus::clean_text(doc.text.as_bytes());
            if doc.text.is_empty() {
                warnings.push(format!(
                    "document {}/{} is empty after cleaning",
                    problem.id, doc.id
                ));
            }
        }
        let Deduplicated {
            kept,
            removed: gone,
        } = corpus::deduplicate(&problem.known, dedup_threshold)?;
        problem.known = kept;
        removed.extend(gone.into_iter().map(|removal| DedupLogEntry {
            problem_id: problem.id.clone(),
            removal,
        }));
        cleaned_problems.push(problem);
    }

    corpus::write_corpus(output, &cleaned_problems)?;
    let log = DedupLog {
        format_version: 1,
        threshold: dedup_threshold,
        removed: removed.clone(),
    };
    write_file(
        &output.join("dedup_log.json"),
        &serde_json::to_string_pretty(&log).expect("log serialization cannot fail"),
    )?;

    Ok(PreprocessSummary {
        problem_count: cleaned_problems.len(),
        removed,
        warnings,
    })
}

// ---------------------------------------------------------------------------
// train

/// Calibrate a model on the labeled corpus at `corpus_path` and write it
/// to `model_out`.
pub fn run_train(
    corpus_path: &Path,
    compressor: CompressorKind,
    measure: MeasureKind,
    model_out: &Path,
    balance_seed: Option<u64>,
    jobs: Option<usize>,
) -> Result<TrainOutcome> {
    let loaded = corpus::load_corpus(corpus_path)?;
    let id = corpus_id(corpus_path);
    let outcome = with_pool(jobs, || {
        verification::train(compressor, measure, &loaded.problems, &id, balance_seed)
    })?;
    write_file(model_out, &outcome.model.to_json())?;
    Ok(outcome)
}

// ---------------------------------------------------------------------------
// verify

/// What `cmav verify` prints.
#[derive(Debug, Serialize, Deserialize)]
pub struct VerifyOutput {
    pub score: f64,
    pub theta: f64,
    pub answer: Label,
    pub out_of_range: bool,
}

/// Verify a single problem assembled from document files.
pub fn run_verify(
    model_path: &Path,
    known_paths: &[PathBuf],
    unknown_path: &Path,
    threshold_override: Option<f64>,
) -> Result<VerifyOutput> {
    let mut model = load_model(model_path)?;
    if let Some(theta) = threshold_override {
        model.theta = crate::calibration::Threshold(theta);
    }

    let read_doc = |path: &Path, id: String| -> Result<verification::Document> {
        let bytes = fs::read(path).map_err(|source| Error::UnreadableFile {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(verification::Document {
            id,
            text: String::from_utf8_lossy(&bytes).into_owned(),
        })
    };

    // ids number the knowns in argument order, so concatenation follows
    // the order given on the command line
    let mut known = Vec::with_capacity(known_paths.len());
    for (i, path) in known_paths.iter().enumerate() {
        known.push(read_doc(path, format!("known{i:04}"))?);
    }
    let problem = Problem {
        id: "cli".into(),
        unknown: read_doc(unknown_path, "unknown".into())?,
        known,
        truth: None,
    };

    let decision = verification::decide(&model, &problem)?;
    Ok(VerifyOutput {
        score: decision.score.value,
        theta: model.theta.0,
        answer: decision.answer,
        out_of_range: decision.out_of_range,
    })
}

// ---------------------------------------------------------------------------
// evaluate

/// Evaluate a model over the labeled corpus and write the JSON report.
pub fn run_evaluate(
    model_path: &Path,
    corpus_path: &Path,
    report_out: &Path,
    threshold_override: Option<f64>,
    jobs: Option<usize>,
) -> Result<EvaluationReport> {
    let mut model = load_model(model_path)?;
    if let Some(theta) = threshold_override {
        model.theta = crate::calibration::Threshold(theta);
    }
    let loaded = corpus::load_corpus(corpus_path)?;
    let id = corpus_id(corpus_path);
    let report = with_pool(jobs, || {
        verification::evaluate(&model, &loaded.problems, &id)
    })?;
    write_file(report_out, &report.to_json())?;
    Ok(report)
}

// ---------------------------------------------------------------------------
// grid

/// Measures covered by the compressor/measure grid.
pub const GRID_MEASURES: [MeasureKind; 3] = [MeasureKind::Ncd, MeasureKind::Cbc, MeasureKind::Clm];

#[derive(Clone, Debug, PartialEq)]
pub struct GridCell {
    pub corpus: String,
    pub compressor: CompressorKind,
    pub measure: MeasureKind,
    pub auc: f64,
}

#[derive(Debug)]
pub struct GridResult {
    /// One cell per (corpus, compressor, measure), corpora in argument
    /// order.
    pub cells: Vec<GridCell>,
    /// Per-(compressor, measure) mean AUC across the corpora.
    pub averages: Vec<(CompressorKind, MeasureKind, f64)>,
}

impl GridResult {
    /// Machine-readable form, averages appended under the corpus name
    /// `AVERAGE`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("corpus,compressor,measure,auc\n");
        for cell in &self.cells {
            out.push_str(&format!(
                "{},{},{},{:.6}\n",
                cell.corpus, cell.compressor, cell.measure, cell.auc
            ));
        }
        for (compressor, measure, auc) in &self.averages {
            out.push_str(&format!("AVERAGE,{compressor},{measure},{auc:.6}\n"));
        }
        out
    }
}

/// Training AUC for every (corpus, compressor, measure) combination.
///
/// Compressed lengths are computed once per (corpus, compressor) and
/// reused across the measures.
pub fn run_grid(corpus_paths: &[PathBuf], jobs: Option<usize>) -> Result<GridResult> {
    use rayon::prelude::*;

    let mut cells = Vec::new();
    for path in corpus_paths {
        let loaded = corpus::load_corpus(path)?;
        let name = corpus_id(path);
        let labeled: Vec<(&Problem, Label)> = loaded
            .problems
            .iter()
            .map(|p| {
                p.truth
                    .map(|t| (p, t))
                    .ok_or_else(|| Error::UnlabeledProblem { id: p.id.clone() })
            })
            .collect::<Result<_>>()?;

        for compressor in CompressorKind::ALL {
            let triples: Vec<(Label, (u64, u64, u64))> = with_pool(jobs, || {
                labeled
                    .par_iter()
                    .map(|(problem, truth)| {
                        let known = verification::concat_known(problem);
                        let (cx, cy, cxy) = crate::compression::triple_lengths(
                            compressor,
                            known.text.as_bytes(),
                            problem.unknown.text.as_bytes(),
                        )?;
                        Ok((*truth, (cx.0, cy.0, cxy.0)))
                    })
                    .collect::<Result<_>>()
            })?;

            for measure in GRID_MEASURES {
                let outcomes: Vec<ProblemOutcome> = triples
                    .iter()
                    .map(|(truth, (cx, cy, cxy))| ProblemOutcome {
                        truth: *truth,
                        answer: Answer::Unanswered,
                        score: crate::dissimilarity::score(*cx, *cy, *cxy, measure).value,
                    })
                    .collect();
                let auc = metrics::roc_auc(&outcomes)?;
                cells.push(GridCell {
                    corpus: name.clone(),
                    compressor,
                    measure,
                    auc,
                });
            }
        }
    }

    let corpus_count = corpus_paths.len() as f64;
    let mut averages = Vec::new();
    for compressor in CompressorKind::ALL {
        for measure in GRID_MEASURES {
            let sum: f64 = cells
                .iter()
                .filter(|c| c.compressor == compressor && c.measure == measure)
                .map(|c| c.auc)
                .sum();
            averages.push((compressor, measure, sum / corpus_count));
        }
    }

    Ok(GridResult { cells, averages })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_csv_shape() {
        let result = GridResult {
            cells: vec![GridCell {
                corpus: "c1".into(),
                compressor: CompressorKind::Ppm,
                measure: MeasureKind::Cbc,
                auc: 0.75,
            }],
            averages: vec![(CompressorKind::Ppm, MeasureKind::Cbc, 0.75)],
        };
        let csv = result.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "corpus,compressor,measure,auc");
        assert_eq!(lines[1], "c1,ppm,cbc,0.750000");
        assert_eq!(lines[2], "AVERAGE,ppm,cbc,0.750000");
    }
}
