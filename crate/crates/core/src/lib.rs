//! Intrinsic authorship verification with compression models.
//!
//! A verification problem pairs one questioned document with the reference
//! documents of a known author. The pipeline concatenates the references,
//! compresses the reference text, the questioned text and their
//! concatenation, turns the three compressed lengths into a dissimilarity
//! score, and accepts the authorship when the score falls below a threshold
//! calibrated to the equal error rate of a labeled training corpus.
//!
//! The crate is organized along that pipeline:
//!
//! * [`compression`] — deterministic compressed-length computation under
//!   five selectable compressors (PPM, deflate/gzip, bzip2, zip, LZW).
//! * [`dissimilarity`] — the NCD, CBC, CLM and CDM measures over a triple
//!   of compressed lengths.
//! * [`calibration`] — the equal-error-rate threshold sweep plus an
//!   independent brute-force oracle.
//! * [`verification`] — problems, trained verifier models, decisions.
//! * [`metrics`] — accuracy, PAN recall/precision/F1, ROC-AUC, c@1 and the
//!   final score AUC·c@1.
//! * [`corpus`] — PAN-style corpus loading, text cleaning, near-duplicate
//!   removal and train/eval splitting.
//! * [`cli`] — the subcommands wired up by the `cmav` binary.

pub mod calibration;
pub mod cli;
pub mod compression;
pub mod corpus;
pub mod dissimilarity;
mod error;
pub mod label;
pub mod metrics;
pub mod report;
pub mod verification;

pub use error::{Error, Result};
pub use label::{Answer, Label};
