//! C interface to the fundcast library.
//!
//! Every function returns an [`FcStatus`]; on failure the message is kept
//! per thread and read with [`fc_last_error`]. Models are opaque handles
//! released with [`fc_model_free`]. No function unwinds across the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use fundcast::eval::compute_metrics;
use fundcast::features::read_feature_csv;
use fundcast::learn::GbdtModel;
use fundcast::text::{flesch_reading_ease, sentiment_compound, tokenize, ReadabilityStats};
use fundcast::Error;

#[repr(C)]
#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FcStatus {
    FC_OK = 0,
    FC_ERR_NULL_ARGUMENT = 1,
    FC_ERR_INVALID_UTF8 = 2,
    FC_ERR_IO = 3,
    FC_ERR_PARSE = 4,
    FC_ERR_SCHEMA = 5,
    FC_ERR_INVALID_ARGUMENT = 6,
    FC_ERR_UNDEFINED = 7,
    FC_ERR_BUFFER_TOO_SMALL = 8,
    FC_ERR_PANIC = 9,
}

/// Trained model loaded from a JSON file.
pub struct FcModel {
    inner: GbdtModel,
}

/// Confusion counts and derived scores at one cutoff.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct FcMetrics {
    pub true_positives: usize,
    pub false_positives: usize,
    pub true_negatives: usize,
    pub false_negatives: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub f_beta: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> FcStatus {
    match e {
        Error::Io { .. } | Error::MissingTable(_) => FcStatus::FC_ERR_IO,
        Error::Parse { .. } => FcStatus::FC_ERR_PARSE,
        Error::Schema(_) => FcStatus::FC_ERR_SCHEMA,
        Error::Undefined(_) | Error::NotAWord(_) => FcStatus::FC_ERR_UNDEFINED,
        _ => FcStatus::FC_ERR_INVALID_ARGUMENT,
    }
}

fn describe(e: &Error) -> String {
    let mut s = e.to_string();
    let mut source = std::error::Error::source(e);
    while let Some(cause) = source {
        s.push_str(": ");
        s.push_str(&cause.to_string());
        source = cause.source();
    }
    s
}

struct Failure(FcStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), describe(&e))
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> FcStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FcStatus::FC_OK,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".to_string());
            FcStatus::FC_ERR_PANIC
        }
    }
}

fn null(name: &str) -> Failure {
    Failure(FcStatus::FC_ERR_NULL_ARGUMENT, format!("`{name}` is null"))
}

unsafe fn as_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(FcStatus::FC_ERR_INVALID_UTF8, format!("`{name}` is not UTF-8")))
}

/// Message for the last failed call on this thread, or NULL.
/// The pointer stays valid until the next fundcast call on the same thread.
#[no_mangle]
pub extern "C" fn fc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Loads a model file. On success `*out` owns a handle for `fc_model_free`.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fc_model_load(path: *const c_char, out: *mut *mut FcModel) -> FcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let path = PathBuf::from(as_str(path, "path")?);
        let inner = GbdtModel::load(&path)?;
        *out = Box::into_raw(Box::new(FcModel { inner }));
        Ok(())
    })
}

/// Releases a handle from `fc_model_load`. NULL is ignored.
///
/// # Safety
/// `model` must come from `fc_model_load` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn fc_model_free(model: *mut FcModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Number of feature columns the model expects.
///
/// # Safety
/// `model` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn fc_model_feature_count(model: *const FcModel) -> usize {
    model.as_ref().map_or(0, |m| m.inner.manifest.len())
}

/// Scores every row of a feature CSV. Writes the row count to `*out_len`;
/// probabilities go to `out` when `capacity` is large enough, otherwise
/// FC_ERR_BUFFER_TOO_SMALL is returned and nothing is written to `out`.
/// Pass `out = NULL` and `capacity = 0` to query the row count.
///
/// # Safety
/// `out` must have room for `capacity` doubles; `out_len` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fc_model_predict_csv(
    model: *const FcModel,
    features_path: *const c_char,
    out: *mut f64,
    capacity: usize,
    out_len: *mut usize,
) -> FcStatus {
    guard(|| {
        let model = &model.as_ref().ok_or_else(|| null("model"))?.inner;
        if out_len.is_null() {
            return Err(null("out_len"));
        }
        let path = as_str(features_path, "features_path")?;
        let (rows, _) = read_feature_csv(path, &model.manifest)?;
        let probs = model.predict_proba(&model.manifest, &rows)?;
        *out_len = probs.len();
        if out.is_null() && capacity == 0 {
            return Ok(());
        }
        if out.is_null() {
            return Err(null("out"));
        }
        if capacity < probs.len() {
            return Err(Failure(
                FcStatus::FC_ERR_BUFFER_TOO_SMALL,
                format!("{} rows, capacity {capacity}", probs.len()),
            ));
        }
        std::slice::from_raw_parts_mut(out, probs.len()).copy_from_slice(&probs);
        Ok(())
    })
}

/// Confusion counts and precision, recall, F1 and F-beta with positives at `p >= cutoff`.
/// Labels must be 0 or 1.
///
/// # Safety
/// `labels` and `probabilities` must each hold `n` elements; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fc_compute_metrics(
    labels: *const u8,
    probabilities: *const f64,
    n: usize,
    cutoff: f64,
    beta: f64,
    out: *mut FcMetrics,
) -> FcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if n > 0 && (labels.is_null() || probabilities.is_null()) {
            return Err(null("labels or probabilities"));
        }
        let (labels, probs) = if n == 0 {
            (&[][..], &[][..])
        } else {
            (std::slice::from_raw_parts(labels, n), std::slice::from_raw_parts(probabilities, n))
        };
        if labels.iter().any(|&l| l > 1) {
            return Err(Failure(FcStatus::FC_ERR_INVALID_ARGUMENT, "labels must be 0 or 1".into()));
        }
        if beta.is_nan() || beta <= 0.0 || !cutoff.is_finite() {
            return Err(Failure(FcStatus::FC_ERR_INVALID_ARGUMENT, "beta must be positive and cutoff finite".into()));
        }
        let m = compute_metrics(labels, probs, cutoff, beta);
        *out = FcMetrics {
            true_positives: m.true_positives,
            false_positives: m.false_positives,
            true_negatives: m.true_negatives,
            false_negatives: m.false_negatives,
            precision: m.precision,
            recall: m.recall,
            f1: m.f1,
            f_beta: m.f_beta,
        };
        Ok(())
    })
}

/// Flesch reading ease of `text`. FC_ERR_UNDEFINED when it has no words.
///
/// # Safety
/// `text` must be NUL-terminated; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fc_flesch_reading_ease(text: *const c_char, out: *mut f64) -> FcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = as_str(text, "text")?;
        *out = flesch_reading_ease(&ReadabilityStats::from_tokens(&tokenize(text)))?;
        Ok(())
    })
}

/// Lexicon sentiment compound score in [-1, 1].
///
/// # Safety
/// `text` must be NUL-terminated; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fc_sentiment_compound(text: *const c_char, out: *mut f64) -> FcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = sentiment_compound(as_str(text, "text")?).compound;
        Ok(())
    })
}
