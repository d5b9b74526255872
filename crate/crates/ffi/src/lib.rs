//! C ABI for elastica.
//!
//! Objects cross the boundary as opaque handles created by `*_new` /
//! `*_from_*` functions and released with the matching `*_free`. Every
//! fallible call returns an [`ElasticaStatus`]; on failure a message is
//! available from [`elastica_last_error`] until the next call on the same
//! thread. Strings returned through `char **` out-parameters are owned by
//! the caller and must be released with [`elastica_string_free`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, c_double, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use elastica::battery::run_battery;
use elastica::elastic::{acoustic_matrix, rank_one_convexity, FormInput, QuadraticForm, StiffnessTensor};
use elastica::extremal::{extremality_audit, form_extremality, poly_extremality, ExtremalityVerdict};
use elastica::poly::perfect_square_check_seeded;
use elastica::{Error, HomoPoly, RunConfig};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElasticaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Contract = 4,
    Precondition = 5,
    Io = 6,
    Unsupported = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElasticaVerdict {
    ExtremalUpToTol = 0,
    NotExtremal = 1,
    Inconclusive = 2,
}

/// Homogeneous polynomial with rational coefficients.
pub struct ElasticaPoly(HomoPoly);
/// Quadratic form on 3x3 matrices.
pub struct ElasticaForm(QuadraticForm);
/// Stiffness tensor.
pub struct ElasticaTensor(StiffnessTensor);
/// Run configuration: seed, tolerances and budgets.
pub struct ElasticaConfig(RunConfig);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> ElasticaStatus {
    match e {
        Error::Contract(_) => ElasticaStatus::Contract,
        Error::Precondition(_) => ElasticaStatus::Precondition,
        Error::Parse { .. } => ElasticaStatus::Parse,
        Error::Unsupported(_) => ElasticaStatus::Unsupported,
        Error::Io(_) => ElasticaStatus::Io,
    }
}

struct Fail(ElasticaStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> ElasticaStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ElasticaStatus::Ok,
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            ElasticaStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(ElasticaStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(ElasticaStatus::InvalidUtf8, format!("{name} is not UTF-8")))
}

unsafe fn obj<'a, T>(p: *const T, name: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(ElasticaStatus::NullPointer, format!("{name} is null")))
}

unsafe fn out<T>(p: *mut T, name: &str, v: T) -> Result<(), Fail> {
    if p.is_null() {
        return Err(Fail(ElasticaStatus::NullPointer, format!("{name} is null")));
    }
    p.write(v);
    Ok(())
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s).expect("reports contain no nul bytes").into_raw()
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("reports are serializable")
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

fn verdict(v: ExtremalityVerdict) -> ElasticaVerdict {
    match v {
        ExtremalityVerdict::ExtremalUpToTol => ElasticaVerdict::ExtremalUpToTol,
        ExtremalityVerdict::NotExtremal => ElasticaVerdict::NotExtremal,
        ExtremalityVerdict::Inconclusive => ElasticaVerdict::Inconclusive,
    }
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn elastica_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn elastica_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[no_mangle]
pub unsafe extern "C" fn elastica_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// configuration

#[no_mangle]
pub extern "C" fn elastica_config_new() -> *mut ElasticaConfig {
    boxed(ElasticaConfig(RunConfig::default()))
}

/// Parses a full JSON run configuration.
#[no_mangle]
pub unsafe extern "C" fn elastica_config_from_json(json: *const c_char, out_cfg: *mut *mut ElasticaConfig) -> ElasticaStatus {
    guard(|| {
        let s = str_arg(json, "json")?;
        let cfg: RunConfig = serde_json::from_str(s).map_err(Error::from)?;
        out(out_cfg, "out_cfg", boxed(ElasticaConfig(cfg)))
    })
}

#[no_mangle]
pub unsafe extern "C" fn elastica_config_set_seed(cfg: *mut ElasticaConfig, seed: u64) -> ElasticaStatus {
    guard(|| {
        let c = cfg
            .as_mut()
            .ok_or_else(|| Fail(ElasticaStatus::NullPointer, "cfg is null".into()))?;
        c.0.seed = seed;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn elastica_config_to_json(cfg: *const ElasticaConfig, out_json: *mut *mut c_char) -> ElasticaStatus {
    guard(|| {
        let c = obj(cfg, "cfg")?;
        out(out_json, "out_json", c_string(json(&c.0)))
    })
}

#[no_mangle]
pub unsafe extern "C" fn elastica_config_free(cfg: *mut ElasticaConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

// polynomials

/// Parses text such as `y1^4*y2^2 - 3*y1^2*y2^2*y3^2` in `nvars` variables.
#[no_mangle]
pub unsafe extern "C" fn elastica_poly_parse(text: *const c_char, nvars: usize, out_poly: *mut *mut ElasticaPoly) -> ElasticaStatus {
    guard(|| {
        let p = HomoPoly::parse_text(str_arg(text, "text")?, nvars)?;
        out(out_poly, "out_poly", boxed(ElasticaPoly(p)))
    })
}

#[no_mangle]
pub unsafe extern "C" fn elastica_poly_from_json(json: *const c_char, out_poly: *mut *mut ElasticaPoly) -> ElasticaStatus {
    guard(|| {
        let p = HomoPoly::from_json_str(str_arg(json, "json")?)?;
        out(out_poly, "out_poly", boxed(ElasticaPoly(p)))
    })
}

#[no_mangle]
pub unsafe extern "C" fn elastica_poly_to_text(p: *const ElasticaPoly, out_text: *mut *mut c_char) -> ElasticaStatus {
    guard(|| out(out_text, "out_text", c_string(obj(p, "p")?.0.to_text())))
}

#[no_mangle]
pub unsafe extern "C" fn elastica_poly_nvars(p: *const ElasticaPoly, out_nvars: *mut usize) -> ElasticaStatus {
    guard(|| out(out_nvars, "out_nvars", obj(p, "p")?.0.nvars()))
}

/// Evaluates at `y[0..len]`; `len` must equal the number of variables.
#[no_mangle]
pub unsafe extern "C" fn elastica_poly_eval(
    p: *const ElasticaPoly,
    y: *const c_double,
    len: usize,
    out_value: *mut c_double,
) -> ElasticaStatus {
    guard(|| {
        let p = &obj(p, "p")?.0;
        if y.is_null() {
            return Err(Fail(ElasticaStatus::NullPointer, "y is null".into()));
        }
        if len != p.nvars() {
            return Err(Fail(
                ElasticaStatus::Contract,
                format!("expected {} coordinates, got {len}", p.nvars()),
            ));
        }
        out(out_value, "out_value", p.eval(std::slice::from_raw_parts(y, len)))
    })
}

#[no_mangle]
pub unsafe extern "C" fn elastica_poly_free(p: *mut ElasticaPoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

// tensors and forms

#[no_mangle]
pub unsafe extern "C" fn elastica_tensor_from_json(json: *const c_char, out_tensor: *mut *mut ElasticaTensor) -> ElasticaStatus {
    guard(|| {
        let t = StiffnessTensor::from_json_str(str_arg(json, "json")?)?;
        out(out_tensor, "out_tensor", boxed(ElasticaTensor(t)))
    })
}

#[no_mangle]
pub unsafe extern "C" fn elastica_tensor_free(t: *mut ElasticaTensor) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Accepts either a `{"gram": ...}` form or a tensor JSON.
#[no_mangle]
pub unsafe extern "C" fn elastica_form_from_json(json: *const c_char, out_form: *mut *mut ElasticaForm) -> ElasticaStatus {
    guard(|| {
        let f = FormInput::from_json_str(str_arg(json, "json")?)?.form();
        out(out_form, "out_form", boxed(ElasticaForm(f)))
    })
}

#[no_mangle]
pub unsafe extern "C" fn elastica_tensor_form(t: *const ElasticaTensor, out_form: *mut *mut ElasticaForm) -> ElasticaStatus {
    guard(|| {
        let f = obj(t, "t")?.0.form();
        out(out_form, "out_form", boxed(ElasticaForm(f)))
    })
}

#[no_mangle]
pub unsafe extern "C" fn elastica_form_free(f: *mut ElasticaForm) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Exact determinant of the acoustic tensor, a sextic in `y1, y2, y3`.
#[no_mangle]
pub unsafe extern "C" fn elastica_acoustic_det(f: *const ElasticaForm, out_poly: *mut *mut ElasticaPoly) -> ElasticaStatus {
    guard(|| {
        let det = acoustic_matrix(&obj(f, "f")?.0).det();
        out(out_poly, "out_poly", boxed(ElasticaPoly(det)))
    })
}

// analyses; `out_report` may be null when only the verdict is wanted

unsafe fn report(out_report: *mut *mut c_char, s: String) {
    if !out_report.is_null() {
        out_report.write(c_string(s));
    }
}

#[no_mangle]
pub unsafe extern "C" fn elastica_rank_one_convexity(
    f: *const ElasticaForm,
    cfg: *const ElasticaConfig,
    out_convex: *mut c_int,
    out_min_eigenvalue: *mut c_double,
) -> ElasticaStatus {
    guard(|| {
        let cfg = &obj(cfg, "cfg")?.0;
        let r = rank_one_convexity(&obj(f, "f")?.0.numeric(), cfg.tol.rank_one, &cfg.sphere_budget());
        out(out_convex, "out_convex", r.is_rank_one_convex() as c_int)?;
        out(out_min_eigenvalue, "out_min_eigenvalue", r.min_eigenvalue)
    })
}

#[no_mangle]
pub unsafe extern "C" fn elastica_poly_extremality(
    p: *const ElasticaPoly,
    cfg: *const ElasticaConfig,
    out_verdict: *mut ElasticaVerdict,
    out_report: *mut *mut c_char,
) -> ElasticaStatus {
    guard(|| {
        let r = poly_extremality(&obj(p, "p")?.0, &obj(cfg, "cfg")?.0)?;
        out(out_verdict, "out_verdict", verdict(r.verdict))?;
        report(out_report, json(&r));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn elastica_perfect_square(
    p: *const ElasticaPoly,
    cfg: *const ElasticaConfig,
    out_is_square: *mut c_int,
    out_report: *mut *mut c_char,
) -> ElasticaStatus {
    guard(|| {
        let cfg = &obj(cfg, "cfg")?.0;
        let r = perfect_square_check_seeded(&obj(p, "p")?.0, cfg.tol.perfect_square, cfg.seed, cfg.budget.square_starts)?;
        out(out_is_square, "out_is_square", r.is_square() as c_int)?;
        report(out_report, json(&r));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn elastica_form_extremality(
    f: *const ElasticaForm,
    cfg: *const ElasticaConfig,
    out_verdict: *mut ElasticaVerdict,
    out_report: *mut *mut c_char,
) -> ElasticaStatus {
    guard(|| {
        let r = form_extremality(&obj(f, "f")?.0, &obj(cfg, "cfg")?.0)?;
        out(out_verdict, "out_verdict", verdict(r.verdict))?;
        report(out_report, json(&r));
        Ok(())
    })
}

/// Full hypothesis audit of an orthotropic tensor, as JSON.
#[no_mangle]
pub unsafe extern "C" fn elastica_analyze(
    t: *const ElasticaTensor,
    cfg: *const ElasticaConfig,
    out_report: *mut *mut c_char,
) -> ElasticaStatus {
    guard(|| {
        let r = extremality_audit(&obj(t, "t")?.0, &obj(cfg, "cfg")?.0)?;
        out(out_report, "out_report", c_string(json(&r)))
    })
}

/// Runs the fixture battery; `out_all_passed` is 1 when every item passes.
#[no_mangle]
pub unsafe extern "C" fn elastica_verify_fixtures(
    cfg: *const ElasticaConfig,
    out_all_passed: *mut c_int,
    out_report: *mut *mut c_char,
) -> ElasticaStatus {
    guard(|| {
        let r = run_battery(&obj(cfg, "cfg")?.0);
        out(out_all_passed, "out_all_passed", r.all_passed() as c_int)?;
        report(out_report, json(&r));
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn last_error() -> String {
        unsafe { CStr::from_ptr(elastica_last_error()).to_string_lossy().into_owned() }
    }

    #[test]
    fn parse_error_sets_message() {
        let mut p = ptr::null_mut();
        let s = unsafe { elastica_poly_parse(c"y1^2 +".as_ptr(), 2, &mut p) };
        assert_eq!(s, ElasticaStatus::Parse);
        assert!(p.is_null());
        assert!(!last_error().is_empty());
    }

    #[test]
    fn null_arguments() {
        let mut p = ptr::null_mut();
        assert_eq!(unsafe { elastica_poly_parse(ptr::null(), 2, &mut p) }, ElasticaStatus::NullPointer);
        assert_eq!(
            unsafe { elastica_poly_parse(c"y1".as_ptr(), 1, ptr::null_mut()) },
            ElasticaStatus::NullPointer
        );
        unsafe { elastica_poly_free(ptr::null_mut()) };
    }

    #[test]
    fn eval_checks_length() {
        let mut p = ptr::null_mut();
        unsafe {
            assert_eq!(elastica_poly_parse(c"y1^2*y2".as_ptr(), 2, &mut p), ElasticaStatus::Ok);
            let y = [2.0, 3.0];
            let mut v = 0.0;
            assert_eq!(elastica_poly_eval(p, y.as_ptr(), 2, &mut v), ElasticaStatus::Ok);
            assert_eq!(v, 12.0);
            assert_eq!(elastica_poly_eval(p, y.as_ptr(), 1, &mut v), ElasticaStatus::Contract);
            elastica_poly_free(p);
        }
    }
}
