//! Exercises the C ABI the way a foreign binding would: raw pointers,
//! status codes and manual handle lifecycle.

use std::ffi::{CStr, CString};
use std::ptr;

use cmav_ffi::*;

#[test]
fn version_is_a_static_string() {
    let v = unsafe { CStr::from_ptr(cmav_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn compressed_length_roundtrip_and_errors() {
    let data = b"the same phrase the same phrase the same phrase";
    let mut len_a = 0u64;
    let mut len_b = 0u64;
    let status = unsafe {
        cmav_compressed_length(
            CmavCompressor::CmavCompressorLzw,
            data.as_ptr(),
            data.len(),
            &mut len_a,
        )
    };
    assert_eq!(status, CmavStatus::CmavStatusOk);
    let status = unsafe {
        cmav_compressed_length(
            CmavCompressor::CmavCompressorLzw,
            data.as_ptr(),
            data.len(),
            &mut len_b,
        )
    };
    assert_eq!(status, CmavStatus::CmavStatusOk);
    assert_eq!(len_a, len_b);
    assert!(len_a >= 1);

    // empty input is a corpus defect
    let status = unsafe {
        cmav_compressed_length(
            CmavCompressor::CmavCompressorPpm,
            data.as_ptr(),
            0,
            &mut len_a,
        )
    };
    assert_eq!(status, CmavStatus::CmavStatusEmptyInput);

    // null out-pointer is caught
    let status = unsafe {
        cmav_compressed_length(
            CmavCompressor::CmavCompressorPpm,
            data.as_ptr(),
            data.len(),
            ptr::null_mut(),
        )
    };
    assert_eq!(status, CmavStatus::CmavStatusNullPointer);
}

#[test]
fn triple_lengths_match_single_calls() {
    let x = b"an author writes with settled habits of phrase";
    let y = b"a different hand shows different habits entirely";
    let (mut cx, mut cy, mut cxy) = (0u64, 0u64, 0u64);
    let status = unsafe {
        cmav_triple_lengths(
            CmavCompressor::CmavCompressorDeflate,
            x.as_ptr(),
            x.len(),
            y.as_ptr(),
            y.len(),
            &mut cx,
            &mut cy,
            &mut cxy,
        )
    };
    assert_eq!(status, CmavStatus::CmavStatusOk);

    let mut expect_cx = 0u64;
    unsafe {
        cmav_compressed_length(
            CmavCompressor::CmavCompressorDeflate,
            x.as_ptr(),
            x.len(),
            &mut expect_cx,
        )
    };
    assert_eq!(cx, expect_cx);
    assert!(cxy >= cx.max(cy));
}

#[test]
fn dissimilarity_values() {
    let mut value = 0.0f64;
    let status =
        unsafe { cmav_dissimilarity(CmavMeasure::CmavMeasureNcd, 100, 120, 130, &mut value) };
    assert_eq!(status, CmavStatus::CmavStatusOk);
    assert!((value - 0.25).abs() < 1e-12);

    let status = unsafe { cmav_dissimilarity(CmavMeasure::CmavMeasureCdm, 5, 5, 5, &mut value) };
    assert_eq!(status, CmavStatus::CmavStatusOk);
    assert_eq!(value, 0.5);

    let status = unsafe { cmav_dissimilarity(CmavMeasure::CmavMeasureNcd, 0, 5, 5, &mut value) };
    assert_eq!(status, CmavStatus::CmavStatusInvalidArgument);
}

#[test]
fn calibration_and_auc() {
    let y = [0.1f64, 0.2, 0.3];
    let n = [0.4f64, 0.5, 0.6];
    let mut theta = 0.0f64;
    let status =
        unsafe { cmav_calibrate_eer(y.as_ptr(), y.len(), n.as_ptr(), n.len(), &mut theta) };
    assert_eq!(status, CmavStatus::CmavStatusOk);
    assert_eq!(theta, 0.35);

    let mut oracle_theta = 0.0f64;
    let status =
        unsafe { cmav_eer_oracle(y.as_ptr(), y.len(), n.as_ptr(), n.len(), &mut oracle_theta) };
    assert_eq!(status, CmavStatus::CmavStatusOk);
    assert_eq!(oracle_theta, 0.35);

    // mismatched lengths only fail the strict calibration
    let short_n = [0.4f64];
    let status = unsafe {
        cmav_calibrate_eer(
            y.as_ptr(),
            y.len(),
            short_n.as_ptr(),
            short_n.len(),
            &mut theta,
        )
    };
    assert_eq!(status, CmavStatus::CmavStatusLengthMismatch);

    let mut auc = 0.0f64;
    let status = unsafe { cmav_roc_auc(y.as_ptr(), y.len(), n.as_ptr(), n.len(), &mut auc) };
    assert_eq!(status, CmavStatus::CmavStatusOk);
    assert_eq!(auc, 1.0);
}

#[test]
fn model_handle_lifecycle_and_verify() {
    // build a model by training through the library, then walk it across
    // the ABI boundary as JSON
    let text = "a craftsman returns to the same tools and the same turns of \
                phrase whenever the work grows familiar";
    let other = "entirely unrelated subject matter discussing compressor \
                 maintenance schedules and spare part inventories";
    let problems = vec![
        cmav::verification::Problem {
            id: "y1".into(),
            unknown: cmav::verification::Document {
                id: "unknown".into(),
                text: text.into(),
            },
            known: vec![cmav::verification::Document {
                id: "k1".into(),
                text: text.into(),
            }],
            truth: Some(cmav::label::Label::Y),
        },
        cmav::verification::Problem {
            id: "n1".into(),
            unknown: cmav::verification::Document {
                id: "unknown".into(),
                text: other.into(),
            },
            known: vec![cmav::verification::Document {
                id: "k1".into(),
                text: text.into(),
            }],
            truth: Some(cmav::label::Label::N),
        },
    ];
    let outcome = cmav::verification::train(
        cmav::compression::CompressorKind::Lzw,
        cmav::dissimilarity::MeasureKind::Cbc,
        &problems,
        "ffi-test",
        None,
    )
    .unwrap();
    let json = CString::new(outcome.model.to_json()).unwrap();

    let mut model: *mut CmavModel = ptr::null_mut();
    let status = unsafe { cmav_model_from_json(json.as_ptr(), &mut model) };
    assert_eq!(status, CmavStatus::CmavStatusOk);
    assert!(!model.is_null());

    let mut theta = 0.0f64;
    assert_eq!(
        unsafe { cmav_model_theta(model, &mut theta) },
        CmavStatus::CmavStatusOk
    );
    assert_eq!(theta, outcome.model.theta.0);

    // same-author problem through the ABI
    let known = [CmavBuffer {
        data: text.as_ptr(),
        len: text.len(),
    }];
    let mut score = 0.0f64;
    let mut answer: std::ffi::c_char = 0;
    let mut out_of_range = false;
    let status = unsafe {
        cmav_verify(
            model,
            known.as_ptr(),
            known.len(),
            text.as_ptr(),
            text.len(),
            &mut score,
            &mut answer,
            &mut out_of_range,
        )
    };
    assert_eq!(status, CmavStatus::CmavStatusOk);
    assert_eq!(answer as u8, b'Y');
    assert!(score < theta);

    // round-trip back to JSON
    let mut json_out: *mut std::ffi::c_char = ptr::null_mut();
    assert_eq!(
        unsafe { cmav_model_to_json(model, &mut json_out) },
        CmavStatus::CmavStatusOk
    );
    let round = unsafe { CStr::from_ptr(json_out) }.to_str().unwrap();
    let parsed = cmav::verification::VerifierModel::from_json(round).unwrap();
    assert_eq!(parsed, outcome.model);
    unsafe { cmav_string_free(json_out) };

    unsafe { cmav_model_free(model) };

    // garbage JSON is a parse error, not a crash
    let garbage = CString::new("{oops").unwrap();
    let mut bad: *mut CmavModel = ptr::null_mut();
    assert_eq!(
        unsafe { cmav_model_from_json(garbage.as_ptr(), &mut bad) },
        CmavStatus::CmavStatusParseError
    );
    assert!(bad.is_null());
}

#[test]
fn clean_text_over_the_boundary() {
    let raw = b"see <b>this</b> at http://x.y/z now";
    let mut out: *mut std::ffi::c_char = ptr::null_mut();
    let status = unsafe { cmav_clean_text(raw.as_ptr(), raw.len(), &mut out) };
    assert_eq!(status, CmavStatus::CmavStatusOk);
    let cleaned = unsafe { CStr::from_ptr(out) }.to_str().unwrap();
    assert_eq!(cleaned, "see this at now");
    unsafe { cmav_string_free(out) };
}

#[test]
fn header_was_generated() {
    let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("include")
        .join("cmav.h");
    let content = std::fs::read_to_string(header).expect("cbindgen header exists");
    for needle in [
        "cmav_compressed_length",
        "cmav_verify",
        "cmav_model_free",
        "CMAV_STATUS_OK",
        "} CmavBuffer;",
        "typedef struct CmavModel CmavModel;",
    ] {
        assert!(content.contains(needle), "header lacks {needle}");
    }
}
