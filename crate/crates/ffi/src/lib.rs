//! C ABI for `semiftvn`.
//!
//! Systems and polynomials are opaque handles created by `*_new` functions
//! and released with the matching `*_free`. Every fallible call returns a
//! [`SemiftvnStatus`]; on failure [`semiftvn_last_error_message`] describes
//! the error for the calling thread. Strings returned to the caller must be
//! released with [`semiftvn_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use semiftvn::ftvn::{check_axioms, lambda_properties, strong_commute, SemiFtvnSystem};
use semiftvn::hyperbolic::{HyperbolicPolynomial, EIG_TOL};
use semiftvn::lie::commute_rel;
use semiftvn::{registry, Error};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SemiftvnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    UnknownSystem = 3,
    UnknownGenerators = 4,
    DimensionMismatch = 5,
    BufferTooSmall = 6,
    ParseError = 7,
    SchemaError = 8,
    InvalidPolynomial = 9,
    NoConvergence = 10,
    RootCountMismatch = 11,
    NotPositiveDefinite = 12,
    OrbitUnavailable = 13,
    Other = 14,
    Panic = 15,
}

/// Opaque semi-FTvN system.
pub struct SemiftvnSystem {
    inner: SemiFtvnSystem,
}

/// Opaque hyperbolic polynomial.
pub struct SemiftvnPolynomial {
    inner: HyperbolicPolynomial,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SemiftvnStatus {
    match e {
        Error::UnknownSystem(_) => SemiftvnStatus::UnknownSystem,
        Error::UnknownGenerators(_) => SemiftvnStatus::UnknownGenerators,
        Error::DimensionMismatch { .. } => SemiftvnStatus::DimensionMismatch,
        Error::Parse(_) => SemiftvnStatus::ParseError,
        Error::Schema(_) => SemiftvnStatus::SchemaError,
        Error::InvalidPolynomial(_) => SemiftvnStatus::InvalidPolynomial,
        Error::NoConvergence { .. } => SemiftvnStatus::NoConvergence,
        Error::RootCountMismatch { .. } => SemiftvnStatus::RootCountMismatch,
        Error::NotPositiveDefinite(_) => SemiftvnStatus::NotPositiveDefinite,
        Error::OrbitUnavailable(_) => SemiftvnStatus::OrbitUnavailable,
        _ => SemiftvnStatus::Other,
    }
}

struct Failure(SemiftvnStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(SemiftvnStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, records its error message and converts panics to a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SemiftvnStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            SemiftvnStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SemiftvnStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        Failure(
            SemiftvnStatus::InvalidUtf8,
            format!("{what} is not valid UTF-8"),
        )
    })
}

unsafe fn read_slice<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

fn check_len(found: usize, expected: usize) -> Result<(), Failure> {
    if found != expected {
        return Err(Error::DimensionMismatch { expected, found }.into());
    }
    Ok(())
}

unsafe fn write_vec(v: &[f64], out: *mut f64, out_len: usize) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output buffer"));
    }
    if out_len < v.len() {
        return Err(Failure(
            SemiftvnStatus::BufferTooSmall,
            format!("output buffer holds {out_len} values, {} needed", v.len()),
        ));
    }
    ptr::copy_nonoverlapping(v.as_ptr(), out, v.len());
    Ok(())
}

unsafe fn system_ref<'a>(sys: *const SemiftvnSystem) -> Result<&'a SemiFtvnSystem, Failure> {
    sys.as_ref().map(|s| &s.inner).ok_or_else(|| null("system"))
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn semiftvn_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Creates a system from a registry name such as `rn_sort:4` or `sym_eja:3`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn semiftvn_system_new(
    name: *const c_char,
    out: *mut *mut SemiftvnSystem,
) -> SemiftvnStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = registry::system_by_name(read_str(name, "name")?)?;
        *out = Box::into_raw(Box::new(SemiftvnSystem { inner }));
        Ok(())
    })
}

/// # Safety
/// `sys` must come from [`semiftvn_system_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn semiftvn_system_free(sys: *mut SemiftvnSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// Dimensions of the domain `V` and the range `W`.
///
/// # Safety
/// `sys` must be a live handle; the output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn semiftvn_system_dims(
    sys: *const SemiftvnSystem,
    dim_v: *mut usize,
    dim_w: *mut usize,
) -> SemiftvnStatus {
    guard(|| {
        let s = system_ref(sys)?;
        if dim_v.is_null() || dim_w.is_null() {
            return Err(null("output"));
        }
        *dim_v = s.dim_v;
        *dim_w = s.dim_w;
        Ok(())
    })
}

/// Writes `λ(x)` into `out`, which must hold at least `dim_w` values.
///
/// # Safety
/// `x` must point to `len` values and `out` to `out_len` writable values.
#[no_mangle]
pub unsafe extern "C" fn semiftvn_lambda(
    sys: *const SemiftvnSystem,
    x: *const f64,
    len: usize,
    out: *mut f64,
    out_len: usize,
) -> SemiftvnStatus {
    guard(|| {
        let s = system_ref(sys)?;
        check_len(len, s.dim_v)?;
        let l = s.lambda(read_slice(x, len, "x")?)?;
        write_vec(&l, out, out_len)
    })
}

/// Strong commutativity of `x` and `y`: the gap `⟨λx,λy⟩ − ⟨x,y⟩` and
/// whether it is within tolerance.
///
/// # Safety
/// `x` and `y` must point to `len` values; the output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn semiftvn_strong_commute(
    sys: *const SemiftvnSystem,
    x: *const f64,
    y: *const f64,
    len: usize,
    tol: f64,
    commute: *mut bool,
    gap: *mut f64,
) -> SemiftvnStatus {
    guard(|| {
        let s = system_ref(sys)?;
        check_len(len, s.dim_v)?;
        if commute.is_null() || gap.is_null() {
            return Err(null("output"));
        }
        let (ok, g) = strong_commute(s, read_slice(x, len, "x")?, read_slice(y, len, "y")?, tol)?;
        *commute = ok;
        *gap = g;
        Ok(())
    })
}

/// Commutativity of `a` and `b` relative to a named generator set; a null
/// `generators` selects the system's automorphism generators.
///
/// # Safety
/// `a` and `b` must point to `len` values; `generators` must be null or a
/// NUL-terminated string; the output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn semiftvn_commute_rel(
    sys: *const SemiftvnSystem,
    generators: *const c_char,
    a: *const f64,
    b: *const f64,
    len: usize,
    tol: f64,
    commute: *mut bool,
    residual: *mut f64,
) -> SemiftvnStatus {
    guard(|| {
        let s = system_ref(sys)?;
        check_len(len, s.dim_v)?;
        if commute.is_null() || residual.is_null() {
            return Err(null("output"));
        }
        let name = if generators.is_null() {
            registry::default_generators(&s.name)?
        } else {
            read_str(generators, "generators")?.to_string()
        };
        let gens = registry::generators_by_name(&name)?;
        check_len(gens.dim, s.dim_v)?;
        let (ok, r) = commute_rel(
            read_slice(a, len, "a")?,
            read_slice(b, len, "b")?,
            &gens,
            s.metric_v(),
            tol,
        );
        *commute = ok;
        *residual = r;
        Ok(())
    })
}

/// Runs the axiom and eigenvalue-map property checks and returns the
/// reports as a JSON array in `*json_out`.
///
/// # Safety
/// `json_out` must be valid; the string must be released with
/// [`semiftvn_string_free`].
#[no_mangle]
pub unsafe extern "C" fn semiftvn_check_axioms(
    sys: *const SemiftvnSystem,
    samples: usize,
    seed: u64,
    tol: f64,
    json_out: *mut *mut c_char,
) -> SemiftvnStatus {
    guard(|| {
        let s = system_ref(sys)?;
        if json_out.is_null() {
            return Err(null("json_out"));
        }
        if tol.is_nan() || tol <= 0.0 || samples == 0 {
            return Err(Error::Parse("samples must be positive and tol > 0".into()).into());
        }
        let mut reports = check_axioms(s, samples, seed, tol)?.all();
        reports.extend(lambda_properties(s, samples, seed, tol)?.all());
        let text = serde_json::to_string(&reports)
            .map_err(|e| Failure(SemiftvnStatus::Other, e.to_string()))?;
        *json_out = CString::new(text)
            .map_err(|e| Failure(SemiftvnStatus::Other, e.to_string()))?
            .into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn semiftvn_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a polynomial from its JSON description.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn semiftvn_polynomial_from_json(
    json: *const c_char,
    out: *mut *mut SemiftvnPolynomial,
) -> SemiftvnStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = HyperbolicPolynomial::from_json(read_str(json, "json")?)?;
        *out = Box::into_raw(Box::new(SemiftvnPolynomial { inner }));
        Ok(())
    })
}

/// # Safety
/// `p` must come from [`semiftvn_polynomial_from_json`] and not be used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn semiftvn_polynomial_free(p: *mut SemiftvnPolynomial) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Dimension and degree of a polynomial.
///
/// # Safety
/// `p` must be a live handle; the output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn semiftvn_polynomial_shape(
    p: *const SemiftvnPolynomial,
    dim: *mut usize,
    degree: *mut usize,
) -> SemiftvnStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("polynomial"))?;
        if dim.is_null() || degree.is_null() {
            return Err(null("output"));
        }
        *dim = p.inner.dim;
        *degree = p.inner.degree;
        Ok(())
    })
}

/// Writes the eigenvalues of `x` in decreasing order; `out` must hold
/// `degree` values.
///
/// # Safety
/// `x` must point to `len` values and `out` to `out_len` writable values.
#[no_mangle]
pub unsafe extern "C" fn semiftvn_polynomial_eigmap(
    p: *const SemiftvnPolynomial,
    x: *const f64,
    len: usize,
    out: *mut f64,
    out_len: usize,
) -> SemiftvnStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("polynomial"))?;
        check_len(len, p.inner.dim)?;
        let l = p.inner.eigmap(read_slice(x, len, "x")?, EIG_TOL)?;
        write_vec(&l, out, out_len)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_mapping() {
        assert_eq!(
            status_of(&Error::UnknownSystem("x".into())),
            SemiftvnStatus::UnknownSystem
        );
        assert_eq!(status_of(&Error::DegenerateBasis), SemiftvnStatus::Other);
    }

    #[test]
    fn error_message_is_cleared_on_success() {
        let status = guard(|| Err(Failure(SemiftvnStatus::Other, "boom".into())));
        assert_eq!(status, SemiftvnStatus::Other);
        let msg = unsafe { CStr::from_ptr(semiftvn_last_error_message()) };
        assert_eq!(msg.to_str().unwrap(), "boom");
        assert_eq!(guard(|| Ok(())), SemiftvnStatus::Ok);
        let msg = unsafe { CStr::from_ptr(semiftvn_last_error_message()) };
        assert!(msg.to_bytes().is_empty());
    }

    #[test]
    fn panics_become_status() {
        assert_eq!(guard(|| panic!("inside")), SemiftvnStatus::Panic);
    }
}
