//! Ground-truth labels and verifier answers.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::Error;

/// Ground truth of a verification problem: written by the claimed author
/// (`Y`) or not (`N`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    Y,
    N,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Y => "Y",
            Label::N => "N",
        })
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "Y" | "y" => Ok(Label::Y),
            "N" | "n" => Ok(Label::N),
            other => Err(Error::InvalidArgument(format!(
                "expected Y or N, got {other:?}"
            ))),
        }
    }
}

/// What a verifier answered for one problem.
///
/// The compression verifier always answers Y or N; `Unanswered` exists so
/// the metric functions can also score systems that abstain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Answer {
    Y,
    N,
    #[serde(rename = "-")]
    Unanswered,
}

impl Answer {
    pub fn is_answered(self) -> bool {
        self != Answer::Unanswered
    }

    /// An unanswered problem is never correct.
    pub fn is_correct(self, truth: Label) -> bool {
        matches!((self, truth), (Answer::Y, Label::Y) | (Answer::N, Label::N))
    }
}

impl From<Label> for Answer {
    fn from(label: Label) -> Self {
        match label {
            Label::Y => Answer::Y,
            Label::N => Answer::N,
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::Y => "Y",
            Answer::N => "N",
            Answer::Unanswered => "-",
        })
    }
}
