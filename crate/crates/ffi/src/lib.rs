//! C ABI over `ree-core`.
//!
//! Objects are opaque handles created by `ree_*` constructors and released
//! with the matching `*_free`. Every fallible call returns a [`ReeStatus`];
//! on failure `ree_last_error_message` describes the error until the next
//! call on the same thread. Outputs are written through caller-owned pointers
//! only on success.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ree_core::boundopt::{closest_ppt_oracle, upper_bound_ree, BoundOptions, BoundResult, OracleResult};
use ree_core::extremal::{category_classify, condition_report, Category, CONDITION_TOL};
use ree_core::matkit::{ComplexMatrix, Party, C64};
use ree_core::measures::{concurrence, ppt_check, relative_entropy};
use ree_core::states::{make_family, DensityMatrix, FamilySpec};
use ree_core::Error;

/// A validated density matrix.
pub struct ReeState(DensityMatrix);

/// Result of the three-parameter bound.
pub struct ReeBound(BoundResult);

/// Result of the closest-PPT search.
pub struct ReeOracle(OracleResult);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReeStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Dimension = 3,
    NotAState = 4,
    NotPsd = 5,
    Singular = 6,
    Support = 7,
    NotConverged = 8,
    Io = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReeParty {
    A = 0,
    B = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReeFamily {
    /// `sqrt(p)|00> + sqrt(1-p)|11>`
    Pure = 0,
    /// `p|00><00| + (1-p)|11><11|`
    PureClosest = 1,
    /// Werner state with singlet fidelity `param`.
    Werner = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReeCategory {
    CategoryI = 0,
    CategoryIi = 1,
    ConstraintOnly = 2,
    None = 3,
}

/// Residual norms of the filtering and local-unitary conditions on one party.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ReeConditionSummary {
    pub filter_residual: f64,
    pub unitary_residual: f64,
    /// Frobenius norm of the reduction of `rho o g`.
    pub g_norm: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> ReeStatus {
    match e {
        Error::Dimension(_) => ReeStatus::Dimension,
        Error::Input(_) | Error::Parse { .. } => ReeStatus::InvalidInput,
        Error::NotPsd { .. } => ReeStatus::NotPsd,
        Error::Singular { .. } => ReeStatus::Singular,
        Error::NotAState { .. } => ReeStatus::NotAState,
        Error::Support(_) => ReeStatus::Support,
        Error::NotConverged { .. } => ReeStatus::NotConverged,
        Error::Io(_) => ReeStatus::Io,
    }
}

/// Runs `f`, mapping errors and panics to a status.
fn guard(f: impl FnOnce() -> Result<(), (ReeStatus, String)>) -> ReeStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ReeStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".to_string());
            ReeStatus::Panic
        }
    }
}

fn core<T>(r: ree_core::Result<T>) -> Result<T, (ReeStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (ReeStatus, String) {
    (ReeStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (ReeStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), (ReeStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn party(p: ReeParty) -> Party {
    match p {
        ReeParty::A => Party::A,
        ReeParty::B => Party::B,
    }
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next `ree_*` call on the same thread.
#[no_mangle]
pub extern "C" fn ree_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ree_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a state from row-major real and imaginary parts of length
/// `(dim_a * dim_b)^2`. `im` may be null for a real matrix.
///
/// # Safety
/// `re` (and `im` if non-null) must point to that many readable doubles;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ree_state_new(
    dim_a: usize,
    dim_b: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut ReeState,
) -> ReeStatus {
    guard(|| {
        if re.is_null() {
            return Err(null("re"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let n = dim_a
            .checked_mul(dim_b)
            .filter(|&n| n > 0 && n <= 64)
            .ok_or((ReeStatus::Dimension, format!("unsupported dims {dim_a}x{dim_b}")))?;
        let len = n * n;
        let re = std::slice::from_raw_parts(re, len);
        let data: Vec<C64> = if im.is_null() {
            re.iter().map(|&x| C64::new(x, 0.0)).collect()
        } else {
            let im = std::slice::from_raw_parts(im, len);
            re.iter().zip(im).map(|(&a, &b)| C64::new(a, b)).collect()
        };
        let m = core(ComplexMatrix::from_vec(n, n, data))?;
        let state = core(DensityMatrix::new(m, (dim_a, dim_b)))?;
        put(out, Box::into_raw(Box::new(ReeState(state))), "out")
    })
}

/// Two-qubit family member with a single parameter.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ree_state_family(family: ReeFamily, param: f64, out: *mut *mut ReeState) -> ReeStatus {
    guard(|| {
        let spec = match family {
            ReeFamily::Pure => FamilySpec::Pure { p: param },
            ReeFamily::PureClosest => FamilySpec::PureClosest { p: param },
            ReeFamily::Werner => FamilySpec::Werner { f: param },
        };
        let state = core(make_family(&spec))?;
        put(out, Box::into_raw(Box::new(ReeState(state))), "out")
    })
}

/// Bell-diagonal state with weights on `Phi+, Phi-, Psi+, Psi-`.
///
/// # Safety
/// `weights` must point to 4 readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ree_state_bell_diagonal(weights: *const f64, out: *mut *mut ReeState) -> ReeStatus {
    guard(|| {
        if weights.is_null() {
            return Err(null("weights"));
        }
        let w = std::slice::from_raw_parts(weights, 4);
        let spec = FamilySpec::BellDiagonal {
            weights: [w[0], w[1], w[2], w[3]],
        };
        let state = core(make_family(&spec))?;
        put(out, Box::into_raw(Box::new(ReeState(state))), "out")
    })
}

/// Isotropic state on `d (x) d` with fidelity `f`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ree_state_isotropic(d: usize, f: f64, out: *mut *mut ReeState) -> ReeStatus {
    guard(|| {
        let state = core(make_family(&FamilySpec::Isotropic { d, f }))?;
        put(out, Box::into_raw(Box::new(ReeState(state))), "out")
    })
}

/// # Safety
/// `state` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ree_state_free(state: *mut ReeState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ree_state_dims(state: *const ReeState, dim_a: *mut usize, dim_b: *mut usize) -> ReeStatus {
    guard(|| {
        let s = deref(state, "state")?;
        let (a, b) = s.0.dims();
        put(dim_a, a, "dim_a")?;
        put(dim_b, b, "dim_b")
    })
}

/// Copies the matrix into row-major `re` and `im`, each of length `len`,
/// which must equal `(dim_a * dim_b)^2`.
///
/// # Safety
/// `re` and `im` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn ree_state_matrix(state: *const ReeState, re: *mut f64, im: *mut f64, len: usize) -> ReeStatus {
    guard(|| {
        let s = deref(state, "state")?;
        if re.is_null() || im.is_null() {
            return Err(null("re/im"));
        }
        let data = s.0.matrix().as_slice();
        if len != data.len() {
            return Err((ReeStatus::Dimension, format!("buffer length {len}, need {}", data.len())));
        }
        let re = std::slice::from_raw_parts_mut(re, len);
        let im = std::slice::from_raw_parts_mut(im, len);
        for (k, z) in data.iter().enumerate() {
            re[k] = z.re;
            im[k] = z.im;
        }
        Ok(())
    })
}

/// `S(rho || sigma)` in nats; `+inf` when the supports are incompatible.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ree_relative_entropy(rho: *const ReeState, sigma: *const ReeState, nats: *mut f64) -> ReeStatus {
    guard(|| {
        let v = core(relative_entropy(&deref(rho, "rho")?.0, &deref(sigma, "sigma")?.0))?;
        put(nats, v.nats, "nats")
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ree_concurrence(rho: *const ReeState, out: *mut f64) -> ReeStatus {
    guard(|| {
        let c = core(concurrence(&deref(rho, "rho")?.0))?;
        put(out, c, "out")
    })
}

/// Smallest eigenvalue of the partial transpose on B.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ree_ppt_min_eigenvalue(rho: *const ReeState, out: *mut f64) -> ReeStatus {
    guard(|| {
        let c = core(ppt_check(&deref(rho, "rho")?.0))?;
        put(out, c.min_eigenvalue, "out")
    })
}

/// Three-parameter upper bound with default optimizer settings.
///
/// # Safety
/// `rho` must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ree_bound(rho: *const ReeState, out: *mut *mut ReeBound) -> ReeStatus {
    guard(|| {
        let b = core(upper_bound_ree(&deref(rho, "rho")?.0, &BoundOptions::default()))?;
        put(out, Box::into_raw(Box::new(ReeBound(b))), "out")
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ree_bound_value(bound: *const ReeBound, nats: *mut f64, bits: *mut f64) -> ReeStatus {
    guard(|| {
        let b = deref(bound, "bound")?;
        put(nats, b.0.value.nats, "nats")?;
        put(bits, b.0.value.bits, "bits")
    })
}

/// Optimal diagonal correlations in the canonical frame.
///
/// # Safety
/// `tau` must point to 3 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn ree_bound_tau(bound: *const ReeBound, tau: *mut f64) -> ReeStatus {
    guard(|| {
        let b = deref(bound, "bound")?;
        if tau.is_null() {
            return Err(null("tau"));
        }
        std::slice::from_raw_parts_mut(tau, 3).copy_from_slice(&b.0.tau_star);
        Ok(())
    })
}

/// New handle holding a copy of the minimizing state.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ree_bound_sigma(bound: *const ReeBound, out: *mut *mut ReeState) -> ReeStatus {
    guard(|| {
        let b = deref(bound, "bound")?;
        put(out, Box::into_raw(Box::new(ReeState(b.0.sigma_star.clone()))), "out")
    })
}

/// # Safety
/// `bound` must come from `ree_bound` and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ree_bound_free(bound: *mut ReeBound) {
    if !bound.is_null() {
        drop(Box::from_raw(bound));
    }
}

/// Multi-start closest-PPT search; deterministic for a fixed seed.
///
/// # Safety
/// `rho` must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ree_oracle(rho: *const ReeState, starts: usize, seed: u64, out: *mut *mut ReeOracle) -> ReeStatus {
    guard(|| {
        let o = core(closest_ppt_oracle(&deref(rho, "rho")?.0, starts, seed))?;
        put(out, Box::into_raw(Box::new(ReeOracle(o))), "out")
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ree_oracle_value(oracle: *const ReeOracle, nats: *mut f64, bits: *mut f64) -> ReeStatus {
    guard(|| {
        let o = deref(oracle, "oracle")?;
        put(nats, o.0.value.nats, "nats")?;
        put(bits, o.0.value.bits, "bits")
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ree_oracle_sigma(oracle: *const ReeOracle, out: *mut *mut ReeState) -> ReeStatus {
    guard(|| {
        let o = deref(oracle, "oracle")?;
        put(out, Box::into_raw(Box::new(ReeState(o.0.sigma_star.clone()))), "out")
    })
}

/// # Safety
/// `oracle` must come from `ree_oracle` and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ree_oracle_free(oracle: *mut ReeOracle) {
    if !oracle.is_null() {
        drop(Box::from_raw(oracle));
    }
}

/// Filtering and unitary condition residuals of `sigma` as a candidate
/// closest state of `rho`, on one party.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ree_conditions(
    rho: *const ReeState,
    sigma: *const ReeState,
    which: ReeParty,
    out: *mut ReeConditionSummary,
) -> ReeStatus {
    guard(|| {
        let r = core(condition_report(
            &deref(rho, "rho")?.0,
            &deref(sigma, "sigma")?.0,
            party(which),
            CONDITION_TOL,
        ))?;
        put(
            out,
            ReeConditionSummary {
                filter_residual: r.filter_residual,
                unitary_residual: r.unitary_residual,
                g_norm: r.g_norm,
            },
            "out",
        )
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ree_category(rho: *const ReeState, sigma: *const ReeState, out: *mut ReeCategory) -> ReeStatus {
    guard(|| {
        let c = core(category_classify(&deref(rho, "rho")?.0, &deref(sigma, "sigma")?.0))?;
        let c = match c {
            Category::CategoryI => ReeCategory::CategoryI,
            Category::CategoryIi => ReeCategory::CategoryIi,
            Category::ConstraintOnly => ReeCategory::ConstraintOnly,
            Category::None => ReeCategory::None,
        };
        put(out, c, "out")
    })
}
