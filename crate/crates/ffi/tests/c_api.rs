use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use fundcast::eval::{featurize, fit_model, labeled, temporal_split, HorizonConfig, PipelineConfig};
use fundcast::ingest::{generate_synthetic_corpus, GenConfig};
use fundcast::learn::TrainConfig;
use fundcast::topics::{synthetic_headlines, train_topic_classifier, TopicConfig};
use fundcast_ffi::*;

fn last_error() -> String {
    let p = fc_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn metrics_match_hand_count() {
    let labels = [1u8, 1, 0, 0, 1];
    let probs = [0.9, 0.4, 0.6, 0.1, 0.7];
    let mut m = FcMetrics::default();
    let s = unsafe { fc_compute_metrics(labels.as_ptr(), probs.as_ptr(), 5, 0.5, 1.0, &mut m) };
    assert_eq!(s, FcStatus::FC_OK);
    assert_eq!((m.true_positives, m.false_positives, m.true_negatives, m.false_negatives), (2, 1, 1, 1));
    assert!((m.precision - 2.0 / 3.0).abs() < 1e-12);
    assert!((m.recall - 2.0 / 3.0).abs() < 1e-12);
    assert!((m.f_beta - m.f1).abs() < 1e-12);
}

#[test]
fn metrics_reject_bad_input() {
    let mut m = FcMetrics::default();
    let s = unsafe { fc_compute_metrics(ptr::null(), ptr::null(), 3, 0.5, 0.1, &mut m) };
    assert_eq!(s, FcStatus::FC_ERR_NULL_ARGUMENT);
    let labels = [2u8];
    let probs = [0.5];
    let s = unsafe { fc_compute_metrics(labels.as_ptr(), probs.as_ptr(), 1, 0.5, 0.1, &mut m) };
    assert_eq!(s, FcStatus::FC_ERR_INVALID_ARGUMENT);
    assert!(last_error().contains("0 or 1"));
}

#[test]
fn text_scores() {
    let text = CString::new("The cat sat on the mat.").unwrap();
    let mut v = 0.0;
    assert_eq!(unsafe { fc_flesch_reading_ease(text.as_ptr(), &mut v) }, FcStatus::FC_OK);
    assert!((v - 116.145).abs() < 1e-9, "{v}");

    let happy = CString::new("What a great day!").unwrap();
    assert_eq!(unsafe { fc_sentiment_compound(happy.as_ptr(), &mut v) }, FcStatus::FC_OK);
    assert!(v > 0.5 && v <= 1.0);

    let empty = CString::new("...").unwrap();
    assert_eq!(unsafe { fc_flesch_reading_ease(empty.as_ptr(), &mut v) }, FcStatus::FC_ERR_UNDEFINED);
    assert!(!last_error().is_empty());
}

#[test]
fn error_clears_on_success() {
    let text = CString::new("fine").unwrap();
    let mut v = 0.0;
    unsafe { fc_sentiment_compound(ptr::null(), &mut v) };
    assert!(!fc_last_error().is_null());
    unsafe { fc_sentiment_compound(text.as_ptr(), &mut v) };
    assert!(fc_last_error().is_null());
}

#[test]
fn missing_model_is_io_error() {
    let path = CString::new("/nonexistent/model.json").unwrap();
    let mut handle = ptr::null_mut();
    assert_eq!(unsafe { fc_model_load(path.as_ptr(), &mut handle) }, FcStatus::FC_ERR_IO);
    assert!(handle.is_null());
    assert!(last_error().contains("No such file"));
    unsafe { fc_model_free(ptr::null_mut()) };
}

#[test]
fn model_round_trip_through_handle() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = GenConfig { companies: 300, ..GenConfig::default() };
    let synth = generate_synthetic_corpus(&cfg, 11).unwrap();
    let topics = train_topic_classifier(&synthetic_headlines(30, 11), &TopicConfig::default()).unwrap();
    let table = featurize(&synth.corpus, &synth.observations, &topics, 0.85).unwrap();
    let data = labeled(&table, &synth.corpus, &HorizonConfig::years(1)).unwrap();
    let split = temporal_split(&table.observations, 0.85).unwrap();
    let config = PipelineConfig {
        train: TrainConfig { tree_count: 30, ..TrainConfig::default() },
        ..PipelineConfig::default()
    };
    let model = fit_model(&data.subset(&split.train), &config).unwrap();
    let model_path = dir.path().join("model.json");
    let features_path = dir.path().join("features.csv");
    model.save(&model_path).unwrap();
    data.write_csv(&features_path).unwrap();
    let expected = model.predict_proba(&data.manifest, &data.rows).unwrap();

    let mp = CString::new(model_path.to_str().unwrap()).unwrap();
    let fp = CString::new(features_path.to_str().unwrap()).unwrap();
    let mut handle = ptr::null_mut();
    assert_eq!(unsafe { fc_model_load(mp.as_ptr(), &mut handle) }, FcStatus::FC_OK);
    assert_eq!(unsafe { fc_model_feature_count(handle) }, data.manifest.len());

    let mut n = 0usize;
    let s = unsafe { fc_model_predict_csv(handle, fp.as_ptr(), ptr::null_mut(), 0, &mut n) };
    assert_eq!(s, FcStatus::FC_OK);
    assert_eq!(n, data.len());

    let mut small = vec![0.0; 3];
    let s = unsafe { fc_model_predict_csv(handle, fp.as_ptr(), small.as_mut_ptr(), 3, &mut n) };
    assert_eq!(s, FcStatus::FC_ERR_BUFFER_TOO_SMALL);
    assert_eq!(small, vec![0.0; 3]);

    let mut probs = vec![0.0; n];
    let s = unsafe { fc_model_predict_csv(handle, fp.as_ptr(), probs.as_mut_ptr(), n, &mut n) };
    assert_eq!(s, FcStatus::FC_OK);
    assert_eq!(probs, expected);
    unsafe { fc_model_free(handle) };
}

#[test]
fn version_is_set() {
    let v = unsafe { CStr::from_ptr(fc_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_api_and_compiles() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/fundcast.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "fc_last_error",
        "fc_model_load",
        "fc_model_free",
        "fc_model_predict_csv",
        "fc_compute_metrics",
        "fc_flesch_reading_ease",
        "fc_sentiment_compound",
        "typedef struct FcModel FcModel",
    ] {
        assert!(text.contains(name), "header lacks {name}");
    }
    // Syntax check only; skipped where no C compiler is installed.
    let Ok(out) = Command::new("cc").args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c"]).arg(&header).output() else {
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
