//! Dissimilarity measures over compressed lengths.
//!
//! Every measure is a single rational expression of the triple
//! `(C(x), C(y), C(xy))`, where `C` is the compressed length of a byte
//! sequence and `xy` the raw concatenation. Conditional compression is
//! always approximated as `C(x|y) = C(xy) - C(y)`, so no compressor with
//! auxiliary-input support is needed.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::Error;

/// The four measures computable from `(C(x), C(y), C(xy))` alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureKind {
    /// Normalized Compression Distance.
    Ncd,
    /// Compression-based Cosine.
    Cbc,
    /// Chen-Li metric under the off-the-shelf-compressor approximation.
    Clm,
    /// Compression-based Dissimilarity Measure.
    Cdm,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 4] = [
        MeasureKind::Ncd,
        MeasureKind::Cbc,
        MeasureKind::Clm,
        MeasureKind::Cdm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MeasureKind::Ncd => "ncd",
            MeasureKind::Cbc => "cbc",
            MeasureKind::Clm => "clm",
            MeasureKind::Cdm => "cdm",
        }
    }

    /// Lower end of the nominal score range: 0.5 for CDM, 0 otherwise.
    pub fn nominal_min(self) -> f64 {
        match self {
            MeasureKind::Cdm => 0.5,
            _ => 0.0,
        }
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MeasureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "ncd" => Ok(MeasureKind::Ncd),
            "cbc" => Ok(MeasureKind::Cbc),
            "clm" => Ok(MeasureKind::Clm),
            "cdm" => Ok(MeasureKind::Cdm),
            other => Err(Error::InvalidArgument(format!(
                "unknown measure {other:?} (expected ncd, cbc, clm or cdm)"
            ))),
        }
    }
}

/// A dissimilarity value tagged with the measure that produced it.
///
/// Well-behaved compressors keep NCD/CBC/CLM in `[0, 1]` and CDM in
/// `[0.5, 1]`, but imperfect compression can step outside either bound.
/// Out-of-range values are representable and flagged downstream, never
/// clamped: clamping would corrupt rank-based metrics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DissimilarityScore {
    pub value: f64,
    pub measure: MeasureKind,
}

impl DissimilarityScore {
    /// True when the value lies inside the measure's nominal range.
    pub fn in_nominal_range(&self) -> bool {
        self.value >= self.measure.nominal_min() && self.value <= 1.0
    }
}

fn check_lengths(cx: u64, cy: u64) {
    assert!(cx >= 1 && cy >= 1, "compressed lengths must be >= 1");
}

/// Normalized Compression Distance: `(C(xy) - min) / max`.
pub fn ncd(cx: u64, cy: u64, cxy: u64) -> DissimilarityScore {
    check_lengths(cx, cy);
    let value = (cxy as f64 - cx.min(cy) as f64) / cx.max(cy) as f64;
    DissimilarityScore {
        value,
        measure: MeasureKind::Ncd,
    }
}

/// Compression-based Cosine: `1 - (C(x) + C(y) - C(xy)) / sqrt(C(x)C(y))`.
pub fn cbc(cx: u64, cy: u64, cxy: u64) -> DissimilarityScore {
    check_lengths(cx, cy);
    let value = 1.0 - (cx as f64 + cy as f64 - cxy as f64) / (cx as f64 * cy as f64).sqrt();
    DissimilarityScore {
        value,
        measure: MeasureKind::Cbc,
    }
}

/// Chen-Li metric: `1 - (C(x) - C(x|y)) / C(xy)` with
/// `C(x|y) = C(xy) - C(y)`.
pub fn clm(cx: u64, cy: u64, cxy: u64) -> DissimilarityScore {
    check_lengths(cx, cy);
    assert!(cxy >= 1, "C(xy) must be >= 1");
    let value = 1.0 - (cx as f64 - (cxy as f64 - cy as f64)) / cxy as f64;
    DissimilarityScore {
        value,
        measure: MeasureKind::Clm,
    }
}

/// Compression-based Dissimilarity Measure: `C(xy) / (C(x) + C(y))`.
pub fn cdm(cx: u64, cy: u64, cxy: u64) -> DissimilarityScore {
    check_lengths(cx, cy);
    let value = cxy as f64 / (cx as f64 + cy as f64);
    DissimilarityScore {
        value,
        measure: MeasureKind::Cdm,
    }
}

/// The order-preserving mapping `CLM = 2 - 1/CDM` between the two measures.
pub fn clm_from_cdm(cdm_value: f64) -> f64 {
    assert!(cdm_value > 0.0, "CDM value must be positive");
    2.0 - 1.0 / cdm_value
}

/// All four measures share the shape `1 - (C(x) + C(y) - C(xy)) / N` with a
/// measure-specific normalization term `N`; CDM is computed through its own
/// (algebraically equal) ratio form.
pub fn generalized(cx: u64, cy: u64, cxy: u64, measure: MeasureKind) -> DissimilarityScore {
    check_lengths(cx, cy);
    let value = match measure {
        MeasureKind::Ncd => 1.0 - (cx as f64 + cy as f64 - cxy as f64) / cx.max(cy) as f64,
        MeasureKind::Cbc => {
            1.0 - (cx as f64 + cy as f64 - cxy as f64) / (cx as f64 * cy as f64).sqrt()
        }
        MeasureKind::Clm => {
            assert!(cxy >= 1, "C(xy) must be >= 1");
            1.0 - (cx as f64 + cy as f64 - cxy as f64) / cxy as f64
        }
        MeasureKind::Cdm => cxy as f64 / (cx as f64 + cy as f64),
    };
    DissimilarityScore { value, measure }
}

/// Dispatch to the dedicated operation for `measure`.
pub fn score(cx: u64, cy: u64, cxy: u64, measure: MeasureKind) -> DissimilarityScore {
    match measure {
        MeasureKind::Ncd => ncd(cx, cy, cxy),
        MeasureKind::Cbc => cbc(cx, cy, cxy),
        MeasureKind::Clm => clm(cx, cy, cxy),
        MeasureKind::Cdm => cdm(cx, cy, cxy),
    }
}
