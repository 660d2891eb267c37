//! C ABI over the `recip` toolkit.
//!
//! Every fallible call returns a [`RecipStatus`]; on failure the message is available from
//! [`recip_last_error`] on the same thread. Handles are opaque and freed by their `_free`
//! function. Strings returned through `char **` are freed with [`recip_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use recip::census::{count_xyz_square, run_census, CensusConfig, CensusRecord};
use recip::disc_lab::disc_f_via_g;
use recip::galois::{classify, Budgets, G3Flag, SnCertificate};
use recip::poly::symmetrize;
use recip::{IntPoly, RecipError};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecipStatus {
    Ok = 0,
    NullPointer = 1,
    Parse = 2,
    Shape = 3,
    Domain = 4,
    Separability = 5,
    Resource = 6,
    Io = 7,
    Panic = 8,
}

/// Integer polynomial with ascending coefficients.
pub struct RecipPoly(IntPoly);

/// Result of a census run.
pub struct RecipCensus(CensusRecord);

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct RecipFlags {
    pub n: usize,
    pub g_irreducible: bool,
    /// 0 certified, 1 refuted, 2 undetermined.
    pub gg_full_sn: i32,
    pub in_g1: bool,
    pub in_g2: bool,
    /// 0 yes, 1 no, 2 not applicable, 3 undetermined.
    pub in_g3: i32,
    pub reducible_f: bool,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct RecipCensusCounts {
    pub total: u64,
    pub inseparable: u64,
    pub reducible_f: u64,
    pub g1: u64,
    pub g2: u64,
    pub g3: u64,
    pub gg_not_sn: u64,
    pub undetermined: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &RecipError) -> RecipStatus {
    match e {
        RecipError::Shape(_) => RecipStatus::Shape,
        RecipError::Domain(_) => RecipStatus::Domain,
        RecipError::Separability(_) => RecipStatus::Separability,
        RecipError::Resource(_) => RecipStatus::Resource,
        RecipError::Parse(_) => RecipStatus::Parse,
        RecipError::Io(_) => RecipStatus::Io,
    }
}

fn guard<F: FnOnce() -> Result<(), (RecipStatus, String)>>(f: F) -> RecipStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RecipStatus::Ok,
        Ok(Err((s, m))) => {
            set_error(m);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            RecipStatus::Panic
        }
    }
}

fn lift(e: RecipError) -> (RecipStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (RecipStatus, String) {
    (RecipStatus::NullPointer, format!("{what} is null"))
}

fn string_out(s: String, out: *mut *mut c_char) -> Result<(), (RecipStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    let c = CString::new(s).map_err(|e| (RecipStatus::Io, e.to_string()))?;
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Message of the last failed call on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn recip_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn recip_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `coeffs` must point to `len` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn recip_poly_new(coeffs: *const i64, len: usize, out: *mut *mut RecipPoly) -> RecipStatus {
    guard(|| {
        if out.is_null() || (coeffs.is_null() && len > 0) {
            return Err(null("argument"));
        }
        let c = if len == 0 { &[][..] } else { std::slice::from_raw_parts(coeffs, len) };
        *out = Box::into_raw(Box::new(RecipPoly(IntPoly::from_i64(c))));
        Ok(())
    })
}

/// Parses comma-separated ascending coefficients.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn recip_poly_parse(text: *const c_char, out: *mut *mut RecipPoly) -> RecipStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            return Err(null("argument"));
        }
        let s = CStr::from_ptr(text).to_str().map_err(|e| (RecipStatus::Parse, e.to_string()))?;
        let p: IntPoly = s.parse().map_err(lift)?;
        *out = Box::into_raw(Box::new(RecipPoly(p)));
        Ok(())
    })
}

/// # Safety
/// `poly` must come from [`recip_poly_new`] or [`recip_poly_parse`], or be null.
#[no_mangle]
pub unsafe extern "C" fn recip_poly_free(poly: *mut RecipPoly) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// Degree, or -1 for the zero polynomial.
///
/// # Safety
/// `poly` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn recip_poly_degree(poly: *const RecipPoly) -> i64 {
    poly.as_ref().and_then(|p| p.0.degree()).map_or(-1, |d| d as i64)
}

/// Discriminant of a reciprocal `f` computed through its symmetrized `g`, as a decimal string.
///
/// # Safety
/// `poly` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn recip_disc_f(poly: *const RecipPoly, out: *mut *mut c_char) -> RecipStatus {
    guard(|| {
        let p = poly.as_ref().ok_or_else(|| null("poly"))?;
        let pair = symmetrize(&p.0).map_err(lift)?;
        let d = disc_f_via_g(&pair).map_err(lift)?;
        string_out(d.to_string(), out)
    })
}

fn classify_poly(poly: *const RecipPoly, prime_budget: usize, fingerprint: bool) -> Result<recip::galois::GaloisFlags, (RecipStatus, String)> {
    let p = unsafe { poly.as_ref() }.ok_or_else(|| null("poly"))?;
    classify(
        &p.0,
        &Budgets {
            prime_budget,
            fingerprint,
        },
    )
    .map_err(lift)
}

/// # Safety
/// `poly` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn recip_classify(poly: *const RecipPoly, prime_budget: usize, out: *mut RecipFlags) -> RecipStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let f = classify_poly(poly, prime_budget, false)?;
        *out = RecipFlags {
            n: f.n,
            g_irreducible: f.g_irreducible,
            gg_full_sn: match f.gg_full_sn {
                SnCertificate::Certified => 0,
                SnCertificate::Refuted => 1,
                SnCertificate::Undetermined => 2,
            },
            in_g1: f.in_g1,
            in_g2: f.in_g2,
            in_g3: match f.in_g3 {
                G3Flag::Yes => 0,
                G3Flag::No => 1,
                G3Flag::NotApplicable => 2,
                G3Flag::Undetermined => 3,
            },
            reducible_f: f.reducible_f,
        };
        Ok(())
    })
}

/// Full flags, fingerprint included, as JSON.
///
/// # Safety
/// `poly` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn recip_classify_json(poly: *const RecipPoly, prime_budget: usize, out: *mut *mut c_char) -> RecipStatus {
    guard(|| {
        let f = classify_poly(poly, prime_budget, true)?;
        string_out(serde_json::to_string(&f).map_err(|e| (RecipStatus::Io, e.to_string()))?, out)
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn recip_count_xyz_square(h: u64, out: *mut u64) -> RecipStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = count_xyz_square(h);
        Ok(())
    })
}

/// Runs a census; `workers = 0` uses every core.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn recip_census_run(n: usize, h: u64, monic: bool, workers: usize, seed: u64, out: *mut *mut RecipCensus) -> RecipStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let mut cfg = CensusConfig::new(n, h, monic);
        if workers > 0 {
            cfg.workers = workers;
        }
        cfg.seed = seed;
        let rec = run_census(&cfg).map_err(lift)?;
        *out = Box::into_raw(Box::new(RecipCensus(rec)));
        Ok(())
    })
}

/// # Safety
/// `census` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn recip_census_counts(census: *const RecipCensus, out: *mut RecipCensusCounts) -> RecipStatus {
    guard(|| {
        let c = census.as_ref().ok_or_else(|| null("census"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let r = &c.0;
        *out = RecipCensusCounts {
            total: r.total,
            inseparable: r.inseparable,
            reducible_f: r.reducible_f,
            g1: r.g1,
            g2: r.g2,
            g3: r.g3,
            gg_not_sn: r.gg_not_sn,
            undetermined: r.undetermined,
        };
        Ok(())
    })
}

/// The census record as one JSON line.
///
/// # Safety
/// `census` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn recip_census_json(census: *const RecipCensus, out: *mut *mut c_char) -> RecipStatus {
    guard(|| {
        let c = census.as_ref().ok_or_else(|| null("census"))?;
        string_out(c.0.json_line(), out)
    })
}

/// # Safety
/// `census` must come from [`recip_census_run`] or be null.
#[no_mangle]
pub unsafe extern "C" fn recip_census_free(census: *mut RecipCensus) {
    if !census.is_null() {
        drop(Box::from_raw(census));
    }
}
