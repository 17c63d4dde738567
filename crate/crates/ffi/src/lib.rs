//! C ABI for `eumirror`.
//!
//! Objects cross the boundary as opaque handles created by `eum_*_new` or
//! `eum_*_load` style functions and released with the matching `eum_*_free`.
//! Every fallible function returns an [`EumStatus`]; on failure the message
//! for the calling thread is available from [`eum_last_error`]. Output
//! arrays are caller-allocated and written row-major.
//!
//! # Safety
//!
//! Handles must come from this library and be freed at most once. Pointer
//! arguments must be null or valid for the stated number of elements.
//! Strings are NUL-terminated UTF-8. Null pointers are reported as
//! `EUM_STATUS_NULL_POINTER`, never dereferenced.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use libc::size_t;

use eumirror::dataset::{load_dataset, Dataset, Format, ParameterVector, SampleSet};
use eumirror::embedding::{cmds, realizability_diagnostics, select_dimension};
use eumirror::recovery::{recover_on_surface, recover_parameter};
use eumirror::transport::{distance_matrix, DistanceMatrix, Metric};
use eumirror::{MirrorEmbedding, MirrorError, MirrorSurface};
use nalgebra::DMatrix;

/// Result codes. `EUM_STATUS_OK` is zero; every other value is an error.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EumStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Io = 3,
    Parse = 4,
    InvalidData = 5,
    DimensionMismatch = 6,
    Degenerate = 7,
    Numerical = 8,
    OutsideHull = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

/// Format selector for [`eum_dataset_load`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EumFormat {
    /// Pick from the file extension.
    Auto = 0,
    Ndjson = 1,
    Csv = 2,
}

/// Labeled and unlabeled sample sets.
pub struct EumDataset {
    sets: Vec<SampleSet>,
}

pub struct EumDistanceMatrix {
    inner: DistanceMatrix,
}

pub struct EumEmbedding {
    inner: MirrorEmbedding,
}

/// Piecewise-linear mirror surface over a Delaunay triangulation.
pub struct EumSurface {
    inner: MirrorSurface,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Fail(EumStatus, String);

impl From<MirrorError> for Fail {
    fn from(e: MirrorError) -> Self {
        let status = match &e {
            MirrorError::Io { .. } => EumStatus::Io,
            MirrorError::Parse { .. } => EumStatus::Parse,
            MirrorError::InconsistentSampleDimension { .. }
            | MirrorError::InconsistentParameterDimension { .. }
            | MirrorError::UnequalSampleSizes { .. }
            | MirrorError::DimensionMismatch(_)
            | MirrorError::UnsupportedDimension(_) => EumStatus::DimensionMismatch,
            MirrorError::DuplicateParameters { .. }
            | MirrorError::DuplicateId(_)
            | MirrorError::NonFinite(_)
            | MirrorError::Empty(_)
            | MirrorError::InvalidDistanceMatrix(_) => EumStatus::InvalidData,
            MirrorError::EigenNonConvergence(_)
            | MirrorError::SvdNonConvergence
            | MirrorError::NoPositiveSpectrum
            | MirrorError::RankDeficient => EumStatus::Numerical,
            MirrorError::DegenerateInput(_) => EumStatus::Degenerate,
            MirrorError::OutsideSimplex { .. } => EumStatus::OutsideHull,
            MirrorError::InvalidConfig(_) => EumStatus::InvalidArgument,
        };
        Fail(status, e.to_string())
    }
}

fn fail(status: EumStatus, msg: impl Into<String>) -> Fail {
    Fail(status, msg.into())
}

/// Run `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> EumStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EumStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            EumStatus::Panic
        }
    }
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| fail(EumStatus::NullPointer, format!("{what} is null")))
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail(EumStatus::NullPointer, format!("{what} is null")));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn out_slice<'a>(p: *mut f64, len: usize, need: usize, what: &str) -> Result<&'a mut [f64], Fail> {
    if len < need {
        return Err(fail(EumStatus::BufferTooSmall, format!("{what} holds {len} values, {need} needed")));
    }
    if need == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(fail(EumStatus::NullPointer, format!("{what} is null")));
    }
    Ok(std::slice::from_raw_parts_mut(p, need))
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(fail(EumStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(EumStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(fail(EumStatus::NullPointer, format!("{what} is null")));
    }
    out.write(value);
    Ok(())
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

unsafe fn free<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next `eum_*` call on the same thread.
#[no_mangle]
pub extern "C" fn eum_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn eum_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Empty dataset to be filled with [`eum_dataset_push`].
#[no_mangle]
pub unsafe extern "C" fn eum_dataset_new(out: *mut *mut EumDataset) -> EumStatus {
    guard(|| put(out, boxed(EumDataset { sets: Vec::new() }), "out"))
}

/// Load an NDJSON or CSV dataset file.
#[no_mangle]
pub unsafe extern "C" fn eum_dataset_load(
    path: *const c_char,
    format: EumFormat,
    out: *mut *mut EumDataset,
) -> EumStatus {
    guard(|| {
        let path = c_str(path, "path")?;
        let format = match format {
            EumFormat::Ndjson => Format::Ndjson,
            EumFormat::Csv => Format::Csv,
            EumFormat::Auto => Format::from_path(path.as_ref())
                .ok_or_else(|| fail(EumStatus::InvalidArgument, format!("cannot tell the format of {path}")))?,
        };
        let ds = load_dataset(path, format)?;
        put(out, boxed(EumDataset { sets: ds.sets().cloned().collect() }), "out")
    })
}

/// Append a sample set of `n` rows by `q` columns (row-major).
/// `params` may be null for an unlabeled set, in which case `d` is ignored.
#[no_mangle]
pub unsafe extern "C" fn eum_dataset_push(
    ds: *mut EumDataset,
    id: *const c_char,
    params: *const f64,
    d: size_t,
    samples: *const f64,
    n: size_t,
    q: size_t,
) -> EumStatus {
    guard(|| {
        let ds = ds.as_mut().ok_or_else(|| fail(EumStatus::NullPointer, "dataset is null"))?;
        let id = c_str(id, "id")?;
        let params = if params.is_null() {
            None
        } else {
            Some(ParameterVector::new(slice(params, d, "params")?.to_vec())?)
        };
        let data = slice(samples, n * q, "samples")?.to_vec();
        let set = SampleSet::new(id, params, data, n, q)?;
        let mut sets = ds.sets.clone();
        sets.push(set);
        Dataset::from_sets(sets.clone())?;
        ds.sets = sets;
        Ok(())
    })
}

/// Number of sets, labeled and unlabeled.
#[no_mangle]
pub unsafe extern "C" fn eum_dataset_len(ds: *const EumDataset) -> size_t {
    ds.as_ref().map_or(0, |d| d.sets.len())
}

#[no_mangle]
pub unsafe extern "C" fn eum_dataset_free(ds: *mut EumDataset) {
    free(ds)
}

/// Exact Wasserstein-`p` distances between every pair of sets.
#[no_mangle]
pub unsafe extern "C" fn eum_distance_matrix(
    ds: *const EumDataset,
    p: f64,
    out: *mut *mut EumDistanceMatrix,
) -> EumStatus {
    guard(|| {
        let ds = handle(ds, "dataset")?;
        let inner = distance_matrix(&ds.sets, p)?;
        put(out, boxed(EumDistanceMatrix { inner }), "out")
    })
}

/// Wrap an externally computed `m x m` matrix (row-major). Set ids are
/// `"0"`, `"1"`, and so on.
#[no_mangle]
pub unsafe extern "C" fn eum_distance_matrix_from_values(
    values: *const f64,
    m: size_t,
    out: *mut *mut EumDistanceMatrix,
) -> EumStatus {
    guard(|| {
        let v = slice(values, m * m, "values")?;
        let ids = (0..m).map(|i| i.to_string()).collect();
        let inner = DistanceMatrix::new(ids, DMatrix::from_row_slice(m, m, v), Metric::External)?;
        put(out, boxed(EumDistanceMatrix { inner }), "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn eum_distance_matrix_size(dm: *const EumDistanceMatrix) -> size_t {
    dm.as_ref().map_or(0, |d| d.inner.len())
}

/// Copy all `m * m` entries row-major into `buf` of length `len`.
#[no_mangle]
pub unsafe extern "C" fn eum_distance_matrix_values(
    dm: *const EumDistanceMatrix,
    buf: *mut f64,
    len: size_t,
) -> EumStatus {
    guard(|| {
        let dm = &handle(dm, "distance matrix")?.inner;
        let m = dm.len();
        let out = out_slice(buf, len, m * m, "buf")?;
        for i in 0..m {
            for j in 0..m {
                out[i * m + j] = dm.get(i, j);
            }
        }
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn eum_distance_matrix_free(dm: *mut EumDistanceMatrix) {
    free(dm)
}

/// Number of eigenvalues of the doubly centered matrix below tolerance
/// and the dimension picked by the largest-gap rule.
#[no_mangle]
pub unsafe extern "C" fn eum_diagnose(
    dm: *const EumDistanceMatrix,
    count_negative: *mut size_t,
    selected_dim: *mut size_t,
) -> EumStatus {
    guard(|| {
        let report = realizability_diagnostics(&handle(dm, "distance matrix")?.inner)?;
        let c = select_dimension(&report.spectrum)?;
        put(count_negative, report.count_negative, "count_negative")?;
        put(selected_dim, c, "selected_dim")
    })
}

/// Classical MDS into `c` dimensions; `c = 0` picks the dimension automatically.
#[no_mangle]
pub unsafe extern "C" fn eum_embed(
    dm: *const EumDistanceMatrix,
    c: size_t,
    out: *mut *mut EumEmbedding,
) -> EumStatus {
    guard(|| {
        let dm = &handle(dm, "distance matrix")?.inner;
        let c = if c == 0 {
            select_dimension(&realizability_diagnostics(dm)?.spectrum)?
        } else {
            c
        };
        let inner = cmds(dm, c)?;
        put(out, boxed(EumEmbedding { inner }), "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn eum_embedding_rows(emb: *const EumEmbedding) -> size_t {
    emb.as_ref().map_or(0, |e| e.inner.m())
}

#[no_mangle]
pub unsafe extern "C" fn eum_embedding_dim(emb: *const EumEmbedding) -> size_t {
    emb.as_ref().map_or(0, |e| e.inner.c())
}

/// Copy the `m x c` coordinates row-major.
#[no_mangle]
pub unsafe extern "C" fn eum_embedding_coords(emb: *const EumEmbedding, buf: *mut f64, len: size_t) -> EumStatus {
    guard(|| {
        let e = &handle(emb, "embedding")?.inner;
        let (m, c) = (e.m(), e.c());
        let out = out_slice(buf, len, m * c, "buf")?;
        for i in 0..m {
            for k in 0..c {
                out[i * c + k] = e.coords[(i, k)];
            }
        }
        Ok(())
    })
}

/// Copy all `m` eigenvalues, descending.
#[no_mangle]
pub unsafe extern "C" fn eum_embedding_spectrum(emb: *const EumEmbedding, buf: *mut f64, len: size_t) -> EumStatus {
    guard(|| {
        let e = &handle(emb, "embedding")?.inner;
        out_slice(buf, len, e.spectrum.len(), "buf")?.copy_from_slice(&e.spectrum);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn eum_embedding_free(emb: *mut EumEmbedding) {
    free(emb)
}

/// Recover the parameter of the last embedding row from the first `m - 1`
/// rows, whose parameters are given row-major in `params` (`(m - 1) x d`).
/// `x_hat` receives `d` values.
#[no_mangle]
pub unsafe extern "C" fn eum_recover_last(
    emb: *const EumEmbedding,
    params: *const f64,
    d: size_t,
    x_hat: *mut f64,
    residual: *mut f64,
) -> EumStatus {
    guard(|| {
        let e = &handle(emb, "embedding")?.inner;
        if e.m() < 2 || d == 0 {
            return Err(fail(EumStatus::InvalidArgument, "need at least two rows and d >= 1"));
        }
        let rows = slice(params, (e.m() - 1) * d, "params")?;
        let params: Vec<ParameterVector> =
            rows.chunks(d).map(|r| ParameterVector::new(r.to_vec())).collect::<Result<_, _>>()?;
        let r = recover_parameter(e, &params)?;
        out_slice(x_hat, d, d, "x_hat")?.copy_from_slice(r.x_hat.as_slice());
        put(residual, r.residual, "residual")
    })
}

/// Interpolating surface through `m` parameter points (`m x d`, d in {1, 2})
/// with mirror values (`m x c`).
#[no_mangle]
pub unsafe extern "C" fn eum_surface_new(
    points: *const f64,
    m: size_t,
    d: size_t,
    values: *const f64,
    c: size_t,
    out: *mut *mut EumSurface,
) -> EumStatus {
    guard(|| {
        if d == 0 || c == 0 {
            return Err(fail(EumStatus::InvalidArgument, "d and c must be positive"));
        }
        let pts: Vec<Vec<f64>> = slice(points, m * d, "points")?.chunks(d).map(<[f64]>::to_vec).collect();
        let values = DMatrix::from_row_slice(m, c, slice(values, m * c, "values")?);
        let inner = MirrorSurface::new(&pts, values)?;
        put(out, boxed(EumSurface { inner }), "out")
    })
}

/// Evaluate the surface at `x` (length `d`) into `y` (length `c`).
/// Returns `EUM_STATUS_OUTSIDE_HULL` outside the convex hull of the points.
#[no_mangle]
pub unsafe extern "C" fn eum_surface_eval(
    s: *const EumSurface,
    x: *const f64,
    d: size_t,
    y: *mut f64,
    c: size_t,
) -> EumStatus {
    guard(|| {
        let s = &handle(s, "surface")?.inner;
        let (sd, sc) = (s.triangulation().dim(), s.c());
        if d != sd {
            return Err(fail(EumStatus::DimensionMismatch, format!("query of length {d} for d={sd}")));
        }
        let x = slice(x, d, "x")?;
        let out = out_slice(y, c, sc, "y")?;
        let v = s
            .interpolate(x)
            .ok_or_else(|| fail(EumStatus::OutsideHull, format!("{x:?} is outside the hull")))?;
        out.copy_from_slice(&v);
        Ok(())
    })
}

/// Parameter in the hull whose surface value is closest to `target`
/// (length `c`). `x_hat` receives `d` values.
#[no_mangle]
pub unsafe extern "C" fn eum_surface_recover(
    s: *const EumSurface,
    target: *const f64,
    c: size_t,
    x_hat: *mut f64,
    d: size_t,
    residual: *mut f64,
) -> EumStatus {
    guard(|| {
        let s = &handle(s, "surface")?.inner;
        if c != s.c() {
            return Err(fail(EumStatus::DimensionMismatch, format!("target of length {c} for c={}", s.c())));
        }
        let r = recover_on_surface(s, slice(target, c, "target")?)?;
        out_slice(x_hat, d, r.x_hat.dim(), "x_hat")?.copy_from_slice(r.x_hat.as_slice());
        put(residual, r.residual, "residual")
    })
}

/// Largest Jacobian spectral norm over the simplices.
#[no_mangle]
pub unsafe extern "C" fn eum_surface_lipschitz(s: *const EumSurface, out: *mut f64) -> EumStatus {
    guard(|| put(out, handle(s, "surface")?.inner.lipschitz_constant(), "out"))
}

#[no_mangle]
pub unsafe extern "C" fn eum_surface_free(s: *mut EumSurface) {
    free(s)
}
