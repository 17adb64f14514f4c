//! Decision-threshold calibration at the equal error rate.
//!
//! [`calibrate_eer`] walks two sorted score lists toward the point where
//! the false acceptance rate and the false rejection rate meet, exactly as
//! the published procedure prescribes, including its midpoint formulas.
//! Its behavior under score values duplicated across both classes is
//! subtle, so [`eer_oracle`] provides an independent brute-force sweep for
//! cross-checking.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::label::Label;
use crate::{Error, Result};

/// The decision threshold θ. A score below θ accepts the authorship.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Threshold(pub f64);

/// A dissimilarity score paired with the ground truth of its problem.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LabeledScore {
    pub score: f64,
    pub label: Label,
}

/// Split labeled scores into the Y and N lists calibration consumes.
pub fn partition_scores(scores: &[LabeledScore]) -> (Vec<f64>, Vec<f64>) {
    let mut y = Vec::new();
    let mut n = Vec::new();
    for ls in scores {
        match ls.label {
            Label::Y => y.push(ls.score),
            Label::N => n.push(ls.score),
        }
    }
    (y, n)
}

/// Fraction of different-author scores accepted at `theta` (score < θ).
pub fn false_acceptance_rate(n_scores: &[f64], theta: f64) -> f64 {
    let hits = n_scores.iter().filter(|&&s| s < theta).count();
    hits as f64 / n_scores.len() as f64
}

/// Fraction of same-author scores rejected at `theta` (score >= θ).
pub fn false_rejection_rate(y_scores: &[f64], theta: f64) -> f64 {
    let hits = y_scores.iter().filter(|&&s| s >= theta).count();
    hits as f64 / y_scores.len() as f64
}

fn check_scores(y_scores: &[f64], n_scores: &[f64]) -> Result<()> {
    if y_scores.is_empty() {
        return Err(Error::EmptyScores { class: 'Y' });
    }
    if n_scores.is_empty() {
        return Err(Error::EmptyScores { class: 'N' });
    }
    if y_scores.iter().chain(n_scores).any(|s| !s.is_finite()) {
        return Err(Error::InvalidArgument(
            "calibration scores must be finite".into(),
        ));
    }
    Ok(())
}

fn sorted(scores: &[f64]) -> Vec<f64> {
    let mut v = scores.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Determine θ via the equal error rate.
///
/// Requires equally many Y and N scores. Both lists are sorted ascending;
/// an index walks up the Y list while another walks down the N list until
/// the lists cross, and θ is placed at the crossing:
///
/// * `Y[i] == N[j]` returns that shared value,
/// * `Y[i] > N[j]` returns the midpoint `(Y[i] + N[j]) / 2` when `i == 0`
///   and `(min(Y[i], N[j+1]) + max(Y[i-1], N[j])) / 2` otherwise,
/// * a walk that exhausts every index returns `(Y[l-1] + N[0]) / 2`.
pub fn calibrate_eer(y_scores: &[f64], n_scores: &[f64]) -> Result<Threshold> {
    check_scores(y_scores, n_scores)?;
    if y_scores.len() != n_scores.len() {
        return Err(Error::LengthMismatch {
            y_count: y_scores.len(),
            n_count: n_scores.len(),
        });
    }

    let y = sorted(y_scores);
    let n = sorted(n_scores);
    let len = y.len();
    let mut i: usize = 0;
    let mut j: i64 = len as i64 - 1;

    for _ in 0..len {
        let yi = y[i];
        let nj = n[j as usize];
        if yi < nj {
            i += 1;
            j -= 1;
            continue;
        }
        if yi == nj {
            return Ok(Threshold(yi));
        }
        // yi > nj
        let theta = if i == 0 {
            0.5 * (yi + nj)
        } else {
            0.5 * (yi.min(n[(j + 1) as usize]) + y[i - 1].max(nj))
        };
        return Ok(Threshold(theta));
    }

    // Every iteration advanced, so i == len and j == -1.
    debug_assert_eq!(i, len);
    Ok(Threshold(0.5 * (y[len - 1] + n[(j + 1) as usize])))
}

/// Brute-force EER sweep, kept independent of [`calibrate_eer`].
///
/// Evaluates every midpoint between adjacent values of the merged sorted
/// score list plus one point below the minimum and one above the maximum,
/// and returns the candidate minimizing `|FAR - FRR|`; ties break toward
/// smaller `FAR + FRR`, then toward smaller θ. Unequal class counts are
/// permitted here.
pub fn eer_oracle(y_scores: &[f64], n_scores: &[f64]) -> Result<Threshold> {
    check_scores(y_scores, n_scores)?;

    let mut merged: Vec<f64> = y_scores.iter().chain(n_scores).copied().collect();
    merged.sort_by(f64::total_cmp);

    let mut candidates = Vec::with_capacity(merged.len() + 1);
    candidates.push(merged[0] - 1.0);
    for pair in merged.windows(2) {
        candidates.push(0.5 * (pair[0] + pair[1]));
    }
    candidates.push(merged[merged.len() - 1] + 1.0);

    let mut best: Option<(f64, f64, f64)> = None; // (|FAR-FRR|, FAR+FRR, theta)
    for theta in candidates {
        let far = false_acceptance_rate(n_scores, theta);
        let frr = false_rejection_rate(y_scores, theta);
        let key = ((far - frr).abs(), far + frr, theta);
        let better = match best {
            None => true,
            Some(b) => key < b,
        };
        if better {
            best = Some(key);
        }
    }
    Ok(Threshold(best.expect("candidate list is non-empty").2))
}

/// Randomly downsample the larger class to the size of the smaller one.
///
/// The order of the surviving scores follows the shuffle; calibration
/// sorts internally, so this never affects θ beyond the sampling itself.
pub fn subsample_balance(
    y_scores: Vec<f64>,
    n_scores: Vec<f64>,
    seed: u64,
) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = y_scores.len().min(n_scores.len());
    let cut = |mut v: Vec<f64>, rng: &mut ChaCha8Rng| {
        v.shuffle(rng);
        v.truncate(target);
        v
    };
    let y = cut(y_scores, &mut rng);
    let n = cut(n_scores, &mut rng);
    (y, n)
}
