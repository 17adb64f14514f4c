//! C ABI over the cmav library.
//!
//! Conventions: every fallible function returns a [`CmavStatus`] and
//! writes its result through out-pointers; models are opaque handles
//! created and released by this library; strings returned through
//! out-pointers are NUL-terminated, allocated here, and must be released
//! with [`cmav_string_free`]. Passing a null pointer where data is
//! expected yields `CMAV_STATUS_NULL_POINTER` rather than undefined
//! behavior, except for the documented handle-free functions which accept
//! null as a no-op.

use std::ffi::{c_char, CStr, CString};

use cmav::calibration::{calibrate_eer, eer_oracle, Threshold};
use cmav::compression::{compressed_length, triple_lengths, CompressorKind};
use cmav::corpus::clean_text;
use cmav::dissimilarity::{score, MeasureKind};
use cmav::label::{Answer, Label};
use cmav::metrics::{roc_auc, ProblemOutcome};
use cmav::verification::{decide, Document, Problem, VerifierModel};
use cmav::Error;

/// Result of every fallible call in this ABI.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmavStatus {
    CmavStatusOk = 0,
    CmavStatusNullPointer = 1,
    CmavStatusEmptyInput = 2,
    CmavStatusInvalidArgument = 3,
    CmavStatusLengthMismatch = 4,
    CmavStatusSingleClass = 5,
    CmavStatusParseError = 6,
    CmavStatusInternalError = 7,
}

/// Compressor selector, matching the library's five algorithms.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmavCompressor {
    CmavCompressorPpm = 0,
    CmavCompressorDeflate = 1,
    CmavCompressorBzip2 = 2,
    CmavCompressorZip = 3,
    CmavCompressorLzw = 4,
}

/// Dissimilarity measure selector.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmavMeasure {
    CmavMeasureNcd = 0,
    CmavMeasureCbc = 1,
    CmavMeasureClm = 2,
    CmavMeasureCdm = 3,
}

/// A byte buffer passed across the ABI.
#[repr(C)]
pub struct CmavBuffer {
    pub data: *const u8,
    pub len: usize,
}

/// Opaque trained-model handle.
pub struct CmavModel(VerifierModel);

impl From<CmavCompressor> for CompressorKind {
    fn from(c: CmavCompressor) -> Self {
        match c {
            CmavCompressor::CmavCompressorPpm => CompressorKind::Ppm,
            CmavCompressor::CmavCompressorDeflate => CompressorKind::Deflate,
            CmavCompressor::CmavCompressorBzip2 => CompressorKind::Bzip2,
            CmavCompressor::CmavCompressorZip => CompressorKind::Zip,
            CmavCompressor::CmavCompressorLzw => CompressorKind::Lzw,
        }
    }
}

impl From<CmavMeasure> for MeasureKind {
    fn from(m: CmavMeasure) -> Self {
        match m {
            CmavMeasure::CmavMeasureNcd => MeasureKind::Ncd,
            CmavMeasure::CmavMeasureCbc => MeasureKind::Cbc,
            CmavMeasure::CmavMeasureClm => MeasureKind::Clm,
            CmavMeasure::CmavMeasureCdm => MeasureKind::Cdm,
        }
    }
}

fn status_of(err: &Error) -> CmavStatus {
    match err {
        Error::EmptyInput { .. } | Error::EmptyScores { .. } | Error::EmptyMetricInput => {
            CmavStatus::CmavStatusEmptyInput
        }
        Error::LengthMismatch { .. } => CmavStatus::CmavStatusLengthMismatch,
        Error::SingleClass => CmavStatus::CmavStatusSingleClass,
        Error::ModelParse { .. } | Error::ModelVersion { .. } => CmavStatus::CmavStatusParseError,
        Error::InvalidArgument(_) => CmavStatus::CmavStatusInvalidArgument,
        _ => CmavStatus::CmavStatusInternalError,
    }
}

unsafe fn slice_from<'a>(data: *const u8, len: usize) -> Option<&'a [u8]> {
    if data.is_null() {
        if len == 0 {
            Some(&[])
        } else {
            None
        }
    } else {
        Some(unsafe { std::slice::from_raw_parts(data, len) })
    }
}

unsafe fn f64_slice_from<'a>(data: *const f64, len: usize) -> Option<&'a [f64]> {
    if data.is_null() {
        if len == 0 {
            Some(&[])
        } else {
            None
        }
    } else {
        Some(unsafe { std::slice::from_raw_parts(data, len) })
    }
}

/// Library version as a static NUL-terminated string; never freed.
#[no_mangle]
pub extern "C" fn cmav_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Compressed length of `data` under `compressor`.
///
/// # Safety
/// `data` must point to `len` readable bytes and `out_length` to a
/// writable u64.
#[no_mangle]
pub unsafe extern "C" fn cmav_compressed_length(
    compressor: CmavCompressor,
    data: *const u8,
    len: usize,
    out_length: *mut u64,
) -> CmavStatus {
    if out_length.is_null() {
        return CmavStatus::CmavStatusNullPointer;
    }
    let Some(bytes) = (unsafe { slice_from(data, len) }) else {
        return CmavStatus::CmavStatusNullPointer;
    };
    match compressed_length(compressor.into(), bytes) {
        Ok(length) => {
            unsafe { *out_length = length.0 };
            CmavStatus::CmavStatusOk
        }
        Err(e) => status_of(&e),
    }
}

/// The triple (C(x), C(y), C(xy)) for the raw concatenation x followed
/// by y.
///
/// # Safety
/// `x`/`y` must point to `x_len`/`y_len` readable bytes; the three out
/// pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn cmav_triple_lengths(
    compressor: CmavCompressor,
    x: *const u8,
    x_len: usize,
    y: *const u8,
    y_len: usize,
    out_cx: *mut u64,
    out_cy: *mut u64,
    out_cxy: *mut u64,
) -> CmavStatus {
    if out_cx.is_null() || out_cy.is_null() || out_cxy.is_null() {
        return CmavStatus::CmavStatusNullPointer;
    }
    let (Some(xs), Some(ys)) = (unsafe { slice_from(x, x_len) }, unsafe {
        slice_from(y, y_len)
    }) else {
        return CmavStatus::CmavStatusNullPointer;
    };
    match triple_lengths(compressor.into(), xs, ys) {
        Ok((cx, cy, cxy)) => {
            unsafe {
                *out_cx = cx.0;
                *out_cy = cy.0;
                *out_cxy = cxy.0;
            }
            CmavStatus::CmavStatusOk
        }
        Err(e) => status_of(&e),
    }
}

/// Dissimilarity of a compressed-length triple under `measure`.
///
/// # Safety
/// `out_value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cmav_dissimilarity(
    measure: CmavMeasure,
    cx: u64,
    cy: u64,
    cxy: u64,
    out_value: *mut f64,
) -> CmavStatus {
    if out_value.is_null() {
        return CmavStatus::CmavStatusNullPointer;
    }
    if cx == 0 || cy == 0 || cxy == 0 {
        return CmavStatus::CmavStatusInvalidArgument;
    }
    let s = score(cx, cy, cxy, measure.into());
    unsafe { *out_value = s.value };
    CmavStatus::CmavStatusOk
}

/// Equal-error-rate threshold over two equally long score lists.
///
/// # Safety
/// `y_scores`/`n_scores` must point to `y_len`/`n_len` readable doubles
/// and `out_theta` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cmav_calibrate_eer(
    y_scores: *const f64,
    y_len: usize,
    n_scores: *const f64,
    n_len: usize,
    out_theta: *mut f64,
) -> CmavStatus {
    if out_theta.is_null() {
        return CmavStatus::CmavStatusNullPointer;
    }
    let (Some(y), Some(n)) = (unsafe { f64_slice_from(y_scores, y_len) }, unsafe {
        f64_slice_from(n_scores, n_len)
    }) else {
        return CmavStatus::CmavStatusNullPointer;
    };
    match calibrate_eer(y, n) {
        Ok(Threshold(theta)) => {
            unsafe { *out_theta = theta };
            CmavStatus::CmavStatusOk
        }
        Err(e) => status_of(&e),
    }
}

/// Brute-force EER sweep; class counts may differ.
///
/// # Safety
/// As for [`cmav_calibrate_eer`].
#[no_mangle]
pub unsafe extern "C" fn cmav_eer_oracle(
    y_scores: *const f64,
    y_len: usize,
    n_scores: *const f64,
    n_len: usize,
    out_theta: *mut f64,
) -> CmavStatus {
    if out_theta.is_null() {
        return CmavStatus::CmavStatusNullPointer;
    }
    let (Some(y), Some(n)) = (unsafe { f64_slice_from(y_scores, y_len) }, unsafe {
        f64_slice_from(n_scores, n_len)
    }) else {
        return CmavStatus::CmavStatusNullPointer;
    };
    match eer_oracle(y, n) {
        Ok(Threshold(theta)) => {
            unsafe { *out_theta = theta };
            CmavStatus::CmavStatusOk
        }
        Err(e) => status_of(&e),
    }
}

/// ROC-AUC of dissimilarity scores grouped by ground truth; lower scores
/// rank as same-author.
///
/// # Safety
/// As for [`cmav_calibrate_eer`], with `out_auc` writable.
#[no_mangle]
pub unsafe extern "C" fn cmav_roc_auc(
    y_scores: *const f64,
    y_len: usize,
    n_scores: *const f64,
    n_len: usize,
    out_auc: *mut f64,
) -> CmavStatus {
    if out_auc.is_null() {
        return CmavStatus::CmavStatusNullPointer;
    }
    let (Some(y), Some(n)) = (unsafe { f64_slice_from(y_scores, y_len) }, unsafe {
        f64_slice_from(n_scores, n_len)
    }) else {
        return CmavStatus::CmavStatusNullPointer;
    };
    let outcomes: Vec<ProblemOutcome> = y
        .iter()
        .map(|&s| (Label::Y, s))
        .chain(n.iter().map(|&s| (Label::N, s)))
        .map(|(truth, score)| ProblemOutcome {
            truth,
            answer: Answer::Unanswered,
            score,
        })
        .collect();
    match roc_auc(&outcomes) {
        Ok(auc) => {
            unsafe { *out_auc = auc };
            CmavStatus::CmavStatusOk
        }
        Err(e) => status_of(&e),
    }
}

/// Parse a model from its JSON form into a handle.
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out_model` writable.
/// The handle must be released with [`cmav_model_free`].
#[no_mangle]
pub unsafe extern "C" fn cmav_model_from_json(
    json: *const c_char,
    out_model: *mut *mut CmavModel,
) -> CmavStatus {
    if json.is_null() || out_model.is_null() {
        return CmavStatus::CmavStatusNullPointer;
    }
    let Ok(text) = (unsafe { CStr::from_ptr(json) }).to_str() else {
        return CmavStatus::CmavStatusParseError;
    };
    match VerifierModel::from_json(text) {
        Ok(model) => {
            unsafe { *out_model = Box::into_raw(Box::new(CmavModel(model))) };
            CmavStatus::CmavStatusOk
        }
        Err(e) => status_of(&e),
    }
}

/// Serialize a model handle back to JSON.
///
/// # Safety
/// `model` must be a live handle from this library; `out_json` must be
/// writable. The string must be released with [`cmav_string_free`].
#[no_mangle]
pub unsafe extern "C" fn cmav_model_to_json(
    model: *const CmavModel,
    out_json: *mut *mut c_char,
) -> CmavStatus {
    if model.is_null() || out_json.is_null() {
        return CmavStatus::CmavStatusNullPointer;
    }
    let json = unsafe { &(*model).0 }.to_json();
    match CString::new(json) {
        Ok(s) => {
            unsafe { *out_json = s.into_raw() };
            CmavStatus::CmavStatusOk
        }
        Err(_) => CmavStatus::CmavStatusInternalError,
    }
}

/// Threshold of a model handle.
///
/// # Safety
/// `model` must be a live handle and `out_theta` writable.
#[no_mangle]
pub unsafe extern "C" fn cmav_model_theta(
    model: *const CmavModel,
    out_theta: *mut f64,
) -> CmavStatus {
    if model.is_null() || out_theta.is_null() {
        return CmavStatus::CmavStatusNullPointer;
    }
    unsafe { *out_theta = (*model).0.theta.0 };
    CmavStatus::CmavStatusOk
}

/// Score and decide one problem with a model handle.
///
/// `known` points to `known_count` buffers concatenated in the order
/// given. On success, `out_score` gets the dissimilarity, `out_answer`
/// 'Y' or 'N', and `out_out_of_range` whether the score left the
/// measure's nominal range.
///
/// # Safety
/// All buffers must be readable for their stated lengths; out-pointers
/// must be writable; `model` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cmav_verify(
    model: *const CmavModel,
    known: *const CmavBuffer,
    known_count: usize,
    unknown: *const u8,
    unknown_len: usize,
    out_score: *mut f64,
    out_answer: *mut c_char,
    out_out_of_range: *mut bool,
) -> CmavStatus {
    if model.is_null()
        || known.is_null()
        || out_score.is_null()
        || out_answer.is_null()
        || out_out_of_range.is_null()
    {
        return CmavStatus::CmavStatusNullPointer;
    }
    let Some(unknown_bytes) = (unsafe { slice_from(unknown, unknown_len) }) else {
        return CmavStatus::CmavStatusNullPointer;
    };

    let buffers = unsafe { std::slice::from_raw_parts(known, known_count) };
    let mut known_docs = Vec::with_capacity(known_count);
    for (i, buffer) in buffers.iter().enumerate() {
        let Some(bytes) = (unsafe { slice_from(buffer.data, buffer.len) }) else {
            return CmavStatus::CmavStatusNullPointer;
        };
        known_docs.push(Document {
            id: format!("known{i:04}"),
            text: String::from_utf8_lossy(bytes).into_owned(),
        });
    }
    if known_docs.is_empty() {
        return CmavStatus::CmavStatusEmptyInput;
    }

    let problem = Problem {
        id: "ffi".into(),
        unknown: Document {
            id: "unknown".into(),
            text: String::from_utf8_lossy(unknown_bytes).into_owned(),
        },
        known: known_docs,
        truth: None,
    };
    match decide(unsafe { &(*model).0 }, &problem) {
        Ok(decision) => {
            unsafe {
                *out_score = decision.score.value;
                *out_answer = match decision.answer {
                    Label::Y => b'Y' as c_char,
                    Label::N => b'N' as c_char,
                };
                *out_out_of_range = decision.out_of_range;
            }
            CmavStatus::CmavStatusOk
        }
        Err(e) => status_of(&e),
    }
}

/// Noise-removal pipeline over raw bytes; the result is a single-line
/// string.
///
/// # Safety
/// `data` must point to `len` readable bytes; `out_text` must be
/// writable. The string must be released with [`cmav_string_free`].
#[no_mangle]
pub unsafe extern "C" fn cmav_clean_text(
    data: *const u8,
    len: usize,
    out_text: *mut *mut c_char,
) -> CmavStatus {
    if out_text.is_null() {
        return CmavStatus::CmavStatusNullPointer;
    }
    let Some(bytes) = (unsafe { slice_from(data, len) }) else {
        return CmavStatus::CmavStatusNullPointer;
    };
    let cleaned = clean_text(bytes);
    match CString::new(cleaned) {
        Ok(s) => {
            unsafe { *out_text = s.into_raw() };
            CmavStatus::CmavStatusOk
        }
        Err(_) => CmavStatus::CmavStatusInternalError,
    }
}

/// Release a model handle. Null is a no-op.
///
/// # Safety
/// `model` must be null or a handle returned by this library, not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn cmav_model_free(model: *mut CmavModel) {
    if !model.is_null() {
        drop(unsafe { Box::from_raw(model) });
    }
}

/// Release a string returned by this library. Null is a no-op.
///
/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cmav_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}
