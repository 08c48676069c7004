//! C ABI over the `symlogo` classifier.
//!
//! Models are opaque handles created by [`symlogo_model_load`] and released
//! with [`symlogo_model_free`]. Every fallible call returns a
//! [`SymlogoStatus`]; on failure [`symlogo_last_error`] describes the cause
//! for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

use symlogo::imaging::{FeatureExtractor, ImageBuffer};
use symlogo::{ClassificationOutcome, Error, TrainedModel};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymlogoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Io = 3,
    DataError = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

/// Result of classifying one sample.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SymlogoOutcome {
    pub predicted_class: u32,
    pub best_class: u32,
    pub best_cluster: u32,
    pub max_count: u32,
    /// Number of representatives scored, i.e. the length of the count array.
    pub num_counts: u32,
    pub tie: bool,
    pub out_of_coverage: bool,
}

/// Opaque trained model.
pub struct SymlogoModel {
    model: TrainedModel,
    extractor: FeatureExtractor,
    class_names: Vec<CString>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(err: &Error) -> SymlogoStatus {
    match err {
        Error::Io { .. } => SymlogoStatus::Io,
        _ if caused_by_io(err) => SymlogoStatus::Io,
        Error::InvalidArgument(_) | Error::InvalidImage(_) | Error::DimensionMismatch { .. } => {
            SymlogoStatus::InvalidArgument
        }
        _ => SymlogoStatus::DataError,
    }
}

fn caused_by_io(err: &Error) -> bool {
    let mut cur: Option<&(dyn std::error::Error + 'static)> = Some(err);
    while let Some(e) = cur {
        if e.is::<std::io::Error>() {
            return true;
        }
        cur = e.source();
    }
    false
}

/// Run `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (SymlogoStatus, String)>) -> SymlogoStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SymlogoStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SymlogoStatus::Panic
        }
    }
}

fn fail(err: Error) -> (SymlogoStatus, String) {
    (status_of(&err), err.to_string())
}

fn null(what: &str) -> (SymlogoStatus, String) {
    (SymlogoStatus::NullPointer, format!("{what} is null"))
}

unsafe fn path_arg(p: *const c_char, what: &str) -> Result<PathBuf, (SymlogoStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    let s = CStr::from_ptr(p).to_str().map_err(|_| {
        (
            SymlogoStatus::InvalidArgument,
            format!("{what} is not UTF-8"),
        )
    })?;
    Ok(PathBuf::from(s))
}

unsafe fn rgb_arg(
    pixels: *const u8,
    width: usize,
    height: usize,
) -> Result<ImageBuffer, (SymlogoStatus, String)> {
    if pixels.is_null() {
        return Err(null("pixels"));
    }
    let len = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(3))
        .ok_or_else(|| {
            (
                SymlogoStatus::InvalidArgument,
                "image too large".to_string(),
            )
        })?;
    let data = std::slice::from_raw_parts(pixels, len).to_vec();
    ImageBuffer::new(width, height, 3, data).map_err(fail)
}

unsafe fn write_outcome(
    outcome: &ClassificationOutcome,
    out: *mut SymlogoOutcome,
    counts: *mut u32,
    counts_len: usize,
) -> Result<(), (SymlogoStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = SymlogoOutcome {
        predicted_class: outcome.predicted_class as u32,
        best_class: outcome.best_representative.0 as u32,
        best_cluster: outcome.best_representative.1 as u32,
        max_count: outcome.max_count as u32,
        num_counts: outcome.acceptance_counts.len() as u32,
        tie: outcome.tie,
        out_of_coverage: outcome.out_of_coverage,
    };
    if !counts.is_null() {
        let n = outcome.acceptance_counts.len();
        if counts_len < n {
            return Err((
                SymlogoStatus::BufferTooSmall,
                format!("count buffer holds {counts_len}, need {n}"),
            ));
        }
        let dst = std::slice::from_raw_parts_mut(counts, n);
        for (d, &c) in dst.iter_mut().zip(&outcome.acceptance_counts) {
            *d = c as u32;
        }
    }
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next `symlogo_*` call on the same thread.
#[no_mangle]
pub extern "C" fn symlogo_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |s| s.as_ptr()))
}

/// Number of features produced by the default extractor (60).
#[no_mangle]
pub extern "C" fn symlogo_feature_dim() -> usize {
    FeatureExtractor::default().dim()
}

/// Extract raw (un-normalized) features from an interleaved RGB image.
///
/// # Safety
/// `pixels` must point to `width * height * 3` readable bytes and `out` to
/// `out_len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn symlogo_extract_features_rgb(
    pixels: *const u8,
    width: usize,
    height: usize,
    out: *mut f64,
    out_len: usize,
) -> SymlogoStatus {
    guard(|| {
        let img = rgb_arg(pixels, width, height)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let extractor = FeatureExtractor::default();
        if out_len < extractor.dim() {
            return Err((
                SymlogoStatus::BufferTooSmall,
                format!("feature buffer holds {out_len}, need {}", extractor.dim()),
            ));
        }
        let v = extractor.extract_image(&img).map_err(fail)?;
        std::slice::from_raw_parts_mut(out, v.len()).copy_from_slice(v.as_slice());
        Ok(())
    })
}

/// Load a model CSV and its `<stem>.normalizer.csv` sidecar.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn symlogo_model_load(
    path: *const c_char,
    out: *mut *mut SymlogoModel,
) -> SymlogoStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = std::ptr::null_mut();
        let path = path_arg(path, "path")?;
        let model = TrainedModel::load(&path).map_err(fail)?;
        let extractor = FeatureExtractor::default();
        if model.reference.dim() != extractor.dim() {
            return Err((
                SymlogoStatus::DataError,
                format!(
                    "model has {} features, extractor produces {}",
                    model.reference.dim(),
                    extractor.dim()
                ),
            ));
        }
        let class_names = model
            .reference
            .class_names()
            .iter()
            .map(|n| CString::new(n.replace('\0', " ")).expect("nul replaced"))
            .collect();
        *out = Box::into_raw(Box::new(SymlogoModel {
            model,
            extractor,
            class_names,
        }));
        Ok(())
    })
}

/// Release a model. NULL is ignored.
///
/// # Safety
/// `model` must come from [`symlogo_model_load`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn symlogo_model_free(model: *mut SymlogoModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// # Safety
/// `model` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn symlogo_model_num_classes(model: *const SymlogoModel) -> usize {
    model
        .as_ref()
        .map_or(0, |m| m.model.reference.num_classes())
}

/// Rows of the reference matrix (`k` times the number of classes).
///
/// # Safety
/// `model` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn symlogo_model_num_representatives(model: *const SymlogoModel) -> usize {
    model.as_ref().map_or(0, |m| m.model.reference.len())
}

/// # Safety
/// `model` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn symlogo_model_feature_dim(model: *const SymlogoModel) -> usize {
    model.as_ref().map_or(0, |m| m.model.reference.dim())
}

/// Class name owned by the model, or NULL when out of range.
///
/// # Safety
/// `model` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn symlogo_model_class_name(
    model: *const SymlogoModel,
    class: usize,
) -> *const c_char {
    model
        .as_ref()
        .and_then(|m| m.class_names.get(class))
        .map_or(std::ptr::null(), |s| s.as_ptr())
}

/// Classify a raw feature vector (normalized internally).
///
/// `counts` may be NULL; otherwise it receives one acceptance count per
/// representative and must hold at least that many entries.
///
/// # Safety
/// `features` must point to `len` doubles; `out` must be writable; `counts`
/// must be NULL or point to `counts_len` writable integers.
#[no_mangle]
pub unsafe extern "C" fn symlogo_classify_features(
    model: *const SymlogoModel,
    features: *const f64,
    len: usize,
    out: *mut SymlogoOutcome,
    counts: *mut u32,
    counts_len: usize,
) -> SymlogoStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        if features.is_null() {
            return Err(null("features"));
        }
        let raw = std::slice::from_raw_parts(features, len);
        let outcome = m.model.classify_raw(raw).map_err(fail)?;
        write_outcome(&outcome, out, counts, counts_len)
    })
}

/// Preprocess, extract and classify an interleaved RGB image.
///
/// # Safety
/// As [`symlogo_classify_features`]; `pixels` must hold `width * height * 3` bytes.
#[no_mangle]
pub unsafe extern "C" fn symlogo_classify_rgb(
    model: *const SymlogoModel,
    pixels: *const u8,
    width: usize,
    height: usize,
    out: *mut SymlogoOutcome,
    counts: *mut u32,
    counts_len: usize,
) -> SymlogoStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        let img = rgb_arg(pixels, width, height)?;
        let v = m.extractor.extract_image(&img).map_err(fail)?;
        let outcome = m.model.classify_raw(v.as_slice()).map_err(fail)?;
        write_outcome(&outcome, out, counts, counts_len)
    })
}

/// Classify a PNG or JPEG file.
///
/// # Safety
/// As [`symlogo_classify_features`]; `path` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn symlogo_classify_file(
    model: *const SymlogoModel,
    path: *const c_char,
    out: *mut SymlogoOutcome,
    counts: *mut u32,
    counts_len: usize,
) -> SymlogoStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        let path = path_arg(path, "path")?;
        let v = m.extractor.extract_path(&path).map_err(fail)?;
        let outcome = m.model.classify_raw(v.as_slice()).map_err(fail)?;
        write_outcome(&outcome, out, counts, counts_len)
    })
}
