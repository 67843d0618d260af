//! C ABI over `catclust`.
//!
//! Every fallible function returns a [`CcStatus`]; results come back through
//! out-pointers. Objects are opaque handles owned by the caller and released
//! with the matching `*_free` function. After a non-OK status,
//! [`cc_last_error_message`] describes the failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fs::File;
use std::io::BufReader;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use catclust::{
    average_silhouette, cluster_best_of, load_csv_with, pairwise_matrix, sweep, Algorithm, CategoricalDataset,
    ClusteringConfig, ClusteringResult, CsvOptions, DissimMatrix, Error, Measure, RestartSelection, SweepConfig,
    SweepResult,
};

/// Outcome of a call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Io = 3,
    Parse = 4,
    Config = 5,
    Internal = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CcMeasure {
    Lin = 0,
    Hamming = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CcAlgorithm {
    Kscc = 0,
    KsccPlus = 1,
    Kmodes = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CcSelection {
    Objective = 0,
    Silhouette = 1,
}

/// Opaque categorical dataset.
pub struct CcDataset(CategoricalDataset);

/// Opaque pairwise dissimilarity matrix.
pub struct CcMatrix(DissimMatrix);

/// Opaque clustering result.
pub struct CcClustering(ClusteringResult);

/// Opaque sweep result.
pub struct CcSweep(SweepResult);

impl From<CcMeasure> for Measure {
    fn from(m: CcMeasure) -> Self {
        match m {
            CcMeasure::Lin => Measure::InformationTheoretic,
            CcMeasure::Hamming => Measure::SimpleMatching,
        }
    }
}

impl From<CcAlgorithm> for Algorithm {
    fn from(a: CcAlgorithm) -> Self {
        match a {
            CcAlgorithm::Kscc => Algorithm::Kscc,
            CcAlgorithm::KsccPlus => Algorithm::KsccPlus,
            CcAlgorithm::Kmodes => Algorithm::Kmodes,
        }
    }
}

impl From<CcSelection> for RestartSelection {
    fn from(s: CcSelection) -> Self {
        match s {
            CcSelection::Objective => RestartSelection::Objective,
            CcSelection::Silhouette => RestartSelection::Silhouette,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

struct Failure(CcStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Io(_) => CcStatus::Io,
            Error::EmptyInput | Error::RaggedRow { .. } | Error::MissingValue { .. } | Error::Parse { .. } => {
                CcStatus::Parse
            }
            Error::Config(_) => CcStatus::Config,
            Error::Json(_) => CcStatus::Internal,
            _ => CcStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(CcStatus::NullPointer, format!("{what} is null"))
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure(CcStatus::InvalidArgument, message.into())
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CcStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CcStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(panic) => {
            let message = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal error: {message}"));
            CcStatus::Internal
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = value;
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn cc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Loads a categorical CSV file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cc_dataset_from_csv_path(
    path: *const c_char,
    has_header: bool,
    id_column: bool,
    out: *mut *mut CcDataset,
) -> CcStatus {
    guard(|| {
        if path.is_null() {
            return Err(null("path"));
        }
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|_| invalid("path is not valid UTF-8"))?;
        let file = File::open(path).map_err(|e| Failure(CcStatus::Io, format!("{path}: {e}")))?;
        let ds = load_csv_with(BufReader::new(file), CsvOptions { has_header, id_column })?;
        put(out, CcDataset(ds))
    })
}

/// Builds a dataset from an `n` x `m` row-major array of category codes.
///
/// # Safety
/// `codes` must point to `n * m` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cc_dataset_from_codes(
    codes: *const u32,
    n: usize,
    m: usize,
    out: *mut *mut CcDataset,
) -> CcStatus {
    guard(|| {
        if codes.is_null() {
            return Err(null("codes"));
        }
        if n == 0 || m == 0 {
            return Err(invalid("n and m must be positive"));
        }
        let len = n.checked_mul(m).ok_or_else(|| invalid("n * m overflows"))?;
        let codes = std::slice::from_raw_parts(codes, len);
        let ds = CategoricalDataset::from_code_rows(codes.chunks(m))?;
        put(out, CcDataset(ds))
    })
}

/// # Safety
/// `ds` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cc_dataset_free(ds: *mut CcDataset) {
    if !ds.is_null() {
        drop(Box::from_raw(ds));
    }
}

/// Number of objects, or 0 for NULL.
///
/// # Safety
/// `ds` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cc_dataset_n(ds: *const CcDataset) -> usize {
    ds.as_ref().map_or(0, |d| d.0.n())
}

/// Number of attributes, or 0 for NULL.
///
/// # Safety
/// `ds` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cc_dataset_m(ds: *const CcDataset) -> usize {
    ds.as_ref().map_or(0, |d| d.0.m())
}

/// Pairwise dissimilarities of all objects.
///
/// # Safety
/// `ds` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cc_matrix_compute(
    ds: *const CcDataset,
    measure: CcMeasure,
    out: *mut *mut CcMatrix,
) -> CcStatus {
    guard(|| {
        let ds = borrow(ds, "dataset")?;
        put(out, CcMatrix(pairwise_matrix(&ds.0, measure.into())))
    })
}

/// Matrix order, or 0 for NULL.
///
/// # Safety
/// `mat` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cc_matrix_order(mat: *const CcMatrix) -> usize {
    mat.as_ref().map_or(0, |m| m.0.order())
}

/// # Safety
/// `mat` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cc_matrix_get(mat: *const CcMatrix, i: usize, j: usize, out: *mut f64) -> CcStatus {
    guard(|| {
        let mat = borrow(mat, "matrix")?;
        let n = mat.0.order();
        if i >= n || j >= n {
            return Err(invalid(format!("({i}, {j}) is outside a matrix of order {n}")));
        }
        write(out, mat.0.get(i, j))
    })
}

/// Copies the row-major matrix into `buf`, which must hold `order^2` values.
///
/// # Safety
/// `mat` must be a live handle; `buf` must point to `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn cc_matrix_copy(mat: *const CcMatrix, buf: *mut f64, len: usize) -> CcStatus {
    guard(|| {
        let mat = borrow(mat, "matrix")?;
        if buf.is_null() {
            return Err(null("buffer"));
        }
        let values = mat.0.as_slice();
        if len < values.len() {
            return Err(invalid(format!("buffer holds {len} values, need {}", values.len())));
        }
        ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
        Ok(())
    })
}

/// # Safety
/// `mat` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cc_matrix_free(mat: *mut CcMatrix) {
    if !mat.is_null() {
        drop(Box::from_raw(mat));
    }
}

/// Best of `restarts` seeded runs with `k` clusters.
///
/// # Safety
/// `ds` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cc_cluster(
    ds: *const CcDataset,
    algorithm: CcAlgorithm,
    k: usize,
    restarts: usize,
    max_iters: usize,
    seed: u64,
    out: *mut *mut CcClustering,
) -> CcStatus {
    guard(|| {
        let ds = borrow(ds, "dataset")?;
        let cfg = ClusteringConfig {
            algorithm: algorithm.into(),
            k,
            max_iters,
            restarts,
            seed,
        };
        let result = cluster_best_of(&ds.0, &cfg)?;
        put(out, CcClustering(result))
    })
}

/// Number of labelled objects, or 0 for NULL.
///
/// # Safety
/// `res` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cc_clustering_len(res: *const CcClustering) -> usize {
    res.as_ref().map_or(0, |r| r.0.labels().len())
}

/// Copies the cluster labels into `buf`.
///
/// # Safety
/// `res` must be a live handle; `buf` must point to `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn cc_clustering_labels(res: *const CcClustering, buf: *mut usize, len: usize) -> CcStatus {
    guard(|| {
        let res = borrow(res, "clustering")?;
        if buf.is_null() {
            return Err(null("buffer"));
        }
        let labels = res.0.labels();
        if len < labels.len() {
            return Err(invalid(format!("buffer holds {len} labels, need {}", labels.len())));
        }
        ptr::copy_nonoverlapping(labels.as_ptr(), buf, labels.len());
        Ok(())
    })
}

/// # Safety
/// `res` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cc_clustering_objective(res: *const CcClustering, out: *mut f64) -> CcStatus {
    guard(|| write(out, borrow(res, "clustering")?.0.objective))
}

/// Assignment passes of the selected run, or 0 for NULL.
///
/// # Safety
/// `res` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cc_clustering_iterations(res: *const CcClustering) -> usize {
    res.as_ref().map_or(0, |r| r.0.iterations)
}

/// # Safety
/// `res` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cc_clustering_free(res: *mut CcClustering) {
    if !res.is_null() {
        drop(Box::from_raw(res));
    }
}

/// Mean silhouette of `labels` (values below `k`) over `mat`.
///
/// # Safety
/// `mat` must be a live handle; `labels` must point to `n` values;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cc_average_silhouette(
    mat: *const CcMatrix,
    labels: *const usize,
    n: usize,
    k: usize,
    out: *mut f64,
) -> CcStatus {
    guard(|| {
        let mat = borrow(mat, "matrix")?;
        if labels.is_null() {
            return Err(null("labels"));
        }
        let labels = std::slice::from_raw_parts(labels, n);
        write(out, average_silhouette(&mat.0, labels, k)?)
    })
}

/// Clusters for every `k` in `[k_min, k_max]` and picks the `k` with the
/// largest average silhouette.
///
/// # Safety
/// `ds` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cc_sweep(
    ds: *const CcDataset,
    algorithm: CcAlgorithm,
    k_min: usize,
    k_max: usize,
    restarts: usize,
    max_iters: usize,
    seed: u64,
    selection: CcSelection,
    out: *mut *mut CcSweep,
) -> CcStatus {
    guard(|| {
        let ds = borrow(ds, "dataset")?;
        let cfg = SweepConfig {
            algorithm: algorithm.into(),
            k_min,
            k_max,
            max_iters,
            restarts,
            seed,
            selection: selection.into(),
        };
        put(out, CcSweep(sweep(&ds.0, &cfg)?))
    })
}

/// Selected number of clusters, or 0 for NULL.
///
/// # Safety
/// `sw` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cc_sweep_k_opt(sw: *const CcSweep) -> usize {
    sw.as_ref().map_or(0, |s| s.0.k_opt)
}

/// Number of `k` values evaluated, or 0 for NULL.
///
/// # Safety
/// `sw` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cc_sweep_len(sw: *const CcSweep) -> usize {
    sw.as_ref().map_or(0, |s| s.0.entries.len())
}

/// The `index`-th evaluated `k` (increasing) and its average silhouette.
///
/// # Safety
/// `sw` must be a live handle; `k` and `avg_silhouette` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cc_sweep_entry(
    sw: *const CcSweep,
    index: usize,
    k: *mut usize,
    avg_silhouette: *mut f64,
) -> CcStatus {
    guard(|| {
        let sw = borrow(sw, "sweep")?;
        let e =
            sw.0.entries
                .get(index)
                .ok_or_else(|| invalid(format!("entry {index} of {}", sw.0.entries.len())))?;
        if avg_silhouette.is_null() {
            return Err(null("avg_silhouette"));
        }
        write(k, e.k)?;
        write(avg_silhouette, e.avg_silhouette)
    })
}

/// # Safety
/// `sw` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cc_sweep_free(sw: *mut CcSweep) {
    if !sw.is_null() {
        drop(Box::from_raw(sw));
    }
}
