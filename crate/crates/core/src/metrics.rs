//! Performance measures for verification runs: accuracy, the PAN variants
//! of recall/precision/F1, ROC-AUC, c@1 and the final score AUC·c@1.
//!
//! Lower dissimilarity means "more likely the same author", so the AUC
//! counts a (Y, N) problem pair as correctly ranked when the Y problem's
//! score is the smaller one; exact ties earn half credit.

use serde::{Deserialize, Serialize};

use crate::label::{Answer, Label};
use crate::{Error, Result};

/// One problem's contribution to the metrics.
#[derive(Clone, Copy, Debug)]
pub struct ProblemOutcome {
    pub truth: Label,
    pub answer: Answer,
    pub score: f64,
}

/// The aggregate metric block of an evaluation run.
///
/// `auc` and `final_score` are absent when the corpus contains only one
/// truth class.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricBlock {
    pub accuracy: f64,
    pub recall: f64,
    pub precision: f64,
    pub f1: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub auc: Option<f64>,
    pub c_at_1: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_score: Option<f64>,
}

fn check_nonempty(input: &[ProblemOutcome]) -> Result<()> {
    if input.is_empty() {
        return Err(Error::EmptyMetricInput);
    }
    Ok(())
}

fn correct_count(input: &[ProblemOutcome]) -> usize {
    input
        .iter()
        .filter(|o| o.answer.is_correct(o.truth))
        .count()
}

fn unanswered_count(input: &[ProblemOutcome]) -> usize {
    input.iter().filter(|o| !o.answer.is_answered()).count()
}

/// Correct answers divided by total problems.
pub fn accuracy(input: &[ProblemOutcome]) -> Result<f64> {
    check_nonempty(input)?;
    Ok(correct_count(input) as f64 / input.len() as f64)
}

/// The PAN competition's non-standard recall and precision:
/// recall = correct / total problems, precision = correct / answered
/// problems, F1 their harmonic mean. All three are 0 when nothing was
/// answered or nothing was correct.
pub fn pan_recall_precision_f1(input: &[ProblemOutcome]) -> Result<(f64, f64, f64)> {
    check_nonempty(input)?;
    let n = input.len();
    let n_c = correct_count(input);
    let answered = n - unanswered_count(input);
    let recall = n_c as f64 / n as f64;
    let precision = if answered == 0 {
        0.0
    } else {
        n_c as f64 / answered as f64
    };
    let f1 = if recall + precision == 0.0 {
        0.0
    } else {
        2.0 * recall * precision / (recall + precision)
    };
    Ok((recall, precision, f1))
}

/// Area under the ROC curve in its probability-of-correct-ranking form.
///
/// Computed from rank sums in O(n log n). Ranks of tied scores are
/// averaged, which makes every doubled rank an integer, so the whole
/// computation stays exact and matches the quadratic pairwise count
/// bit for bit.
pub fn roc_auc(input: &[ProblemOutcome]) -> Result<f64> {
    let mut combined: Vec<(f64, Label)> = input.iter().map(|o| (o.score, o.truth)).collect();
    let y_count = combined.iter().filter(|(_, l)| *l == Label::Y).count() as u64;
    let n_count = combined.len() as u64 - y_count;
    if y_count == 0 || n_count == 0 {
        return Err(Error::SingleClass);
    }

    combined.sort_by(|a, b| a.0.total_cmp(&b.0));

    // Sum of doubled average ranks over the Y problems: a tie group
    // occupying positions i+1..=j has average rank (i+1+j)/2, doubled
    // (i+1+j), an exact integer.
    let mut twice_rank_sum_y: u64 = 0;
    let mut i = 0;
    while i < combined.len() {
        let mut j = i + 1;
        while j < combined.len() && combined[j].0 == combined[i].0 {
            j += 1;
        }
        let twice_rank = (i + 1 + j) as u64;
        for item in &combined[i..j] {
            if item.1 == Label::Y {
                twice_rank_sum_y += twice_rank;
            }
        }
        i = j;
    }

    // Doubled Mann-Whitney U counting pairs with the Y score above the N
    // score (ties half). Correct ranking wants Y below N, so flip.
    let twice_u_above = twice_rank_sum_y - y_count * (y_count + 1);
    let twice_pairs = 2 * y_count * n_count;
    Ok((twice_pairs - twice_u_above) as f64 / twice_pairs as f64)
}

/// c@1 = (n_c + n_u * n_c / n) / n. Equals accuracy when every problem is
/// answered and 0 when none is.
pub fn c_at_1(input: &[ProblemOutcome]) -> Result<f64> {
    check_nonempty(input)?;
    let n = input.len() as f64;
    let n_c = correct_count(input) as f64;
    let n_u = unanswered_count(input) as f64;
    Ok((n_c + n_u * n_c / n) / n)
}

/// The PAN ranking measure: AUC · c@1.
pub fn final_score(input: &[ProblemOutcome]) -> Result<f64> {
    Ok(roc_auc(input)? * c_at_1(input)?)
}

impl MetricBlock {
    /// Compute every measure over the outcomes. A single-class corpus
    /// leaves `auc` and `final_score` unset rather than failing the run.
    pub fn compute(input: &[ProblemOutcome]) -> Result<MetricBlock> {
        check_nonempty(input)?;
        let (recall, precision, f1) = pan_recall_precision_f1(input)?;
        let accuracy = accuracy(input)?;
        let c_at_1 = c_at_1(input)?;
        let auc = match roc_auc(input) {
            Ok(a) => Some(a),
            Err(Error::SingleClass) => None,
            Err(e) => return Err(e),
        };
        let final_score = auc.map(|a| a * c_at_1);
        Ok(MetricBlock {
            accuracy,
            recall,
            precision,
            f1,
            auc,
            c_at_1,
            final_score,
        })
    }

    /// The block with every value rounded to six decimal places, the
    /// precision used in serialized reports.
    pub fn rounded(&self) -> MetricBlock {
        let r = |v: f64| (v * 1e6).round() / 1e6;
        MetricBlock {
            accuracy: r(self.accuracy),
            recall: r(self.recall),
            precision: r(self.precision),
            f1: r(self.f1),
            auc: self.auc.map(r),
            c_at_1: r(self.c_at_1),
            final_score: self.final_score.map(r),
        }
    }
}
