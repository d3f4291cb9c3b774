//! C ABI for the itcalc engine: opaque handles, integer status codes, and
//! JSON string results. Every returned string must be released with
//! `itcalc_string_free`; every handle with its matching `_free` function.

use itcalc::algebra::{parse_algebra, AlgebraRef};
use itcalc::cli::parse_module_expr;
use itcalc::error::Error;
use itcalc::itcore::{nakayama_family, phi, phi_dim, Registry};
use itcalc::relstruct::{ext_f_dim, RelStructure};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ItcalcStatus {
    ItcalcOk = 0,
    ItcalcErrNullArgument = 1,
    ItcalcErrInvalidUtf8 = 2,
    ItcalcErrParse = 3,
    ItcalcErrCompute = 4,
}

/// An immutable bound quiver algebra.
pub struct ItcalcAlgebra {
    algebra: AlgebraRef,
}

/// A relatively split exact structure `F = F_{add(A (+) G)}` over an algebra.
pub struct ItcalcStructure {
    f: RelStructure,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("NUL bytes stripped");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(e: Error) -> ItcalcStatus {
    set_last_error(&e.to_string());
    match e {
        Error::Parse { .. } | Error::InvalidPath(_) | Error::UnknownVertex(_) => {
            ItcalcStatus::ItcalcErrParse
        }
        _ => ItcalcStatus::ItcalcErrCompute,
    }
}

/// # Safety
/// `s` must be null or a valid NUL-terminated string.
unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, ItcalcStatus> {
    if s.is_null() {
        set_last_error("null string argument");
        return Err(ItcalcStatus::ItcalcErrNullArgument);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_last_error("string argument is not valid UTF-8");
        ItcalcStatus::ItcalcErrInvalidUtf8
    })
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, ItcalcStatus> {
    if p.is_null() {
        set_last_error("null handle argument");
        return Err(ItcalcStatus::ItcalcErrNullArgument);
    }
    Ok(&*p)
}

fn write_json(json: String, out: *mut *mut c_char) -> ItcalcStatus {
    let c = CString::new(json).expect("serde_json emits no NUL bytes");
    unsafe { *out = c.into_raw() };
    ItcalcStatus::ItcalcOk
}

/// Message describing the most recent failure on this thread, or null.
/// The pointer is valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn itcalc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parse an algebra description (the `.alg` text format).
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn itcalc_algebra_parse(
    text: *const c_char,
    out: *mut *mut ItcalcAlgebra,
) -> ItcalcStatus {
    if out.is_null() {
        set_last_error("null output argument");
        return ItcalcStatus::ItcalcErrNullArgument;
    }
    let text = match read_str(text) {
        Ok(t) => t,
        Err(s) => return s,
    };
    match parse_algebra(text) {
        Ok(algebra) => {
            *out = Box::into_raw(Box::new(ItcalcAlgebra { algebra }));
            ItcalcStatus::ItcalcOk
        }
        Err(e) => fail(e),
    }
}

/// # Safety
/// `a` must come from `itcalc_algebra_parse` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn itcalc_algebra_free(a: *mut ItcalcAlgebra) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Total k-dimension of the algebra, or 0 for a null handle.
///
/// # Safety
/// `a` must be null or a live algebra handle.
#[no_mangle]
pub unsafe extern "C" fn itcalc_algebra_dim(a: *const ItcalcAlgebra) -> usize {
    deref(a).map_or(0, |h| h.algebra.dim)
}

/// Build the structure `F_{add(A (+) G)}` from a generator expression
/// (`A` for the trivial case, otherwise e.g. `S(1)+P(2)/rad^1`).
///
/// # Safety
/// `a` must be a live algebra handle; `generator` a valid string; `out` a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn itcalc_structure_new(
    a: *const ItcalcAlgebra,
    generator: *const c_char,
    seed: u64,
    out: *mut *mut ItcalcStructure,
) -> ItcalcStatus {
    if out.is_null() {
        set_last_error("null output argument");
        return ItcalcStatus::ItcalcErrNullArgument;
    }
    let a = match deref(a) {
        Ok(a) => a,
        Err(s) => return s,
    };
    let generator = match read_str(generator) {
        Ok(g) => g,
        Err(s) => return s,
    };
    let mut rng = itcalc::rng_with_seed(seed);
    let build = parse_module_expr(&a.algebra, generator)
        .and_then(|g| RelStructure::new(a.algebra.clone(), &[g], &mut rng));
    match build {
        Ok(f) => {
            *out = Box::into_raw(Box::new(ItcalcStructure { f }));
            ItcalcStatus::ItcalcOk
        }
        Err(e) => fail(e),
    }
}

/// # Safety
/// `s` must come from `itcalc_structure_new` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn itcalc_structure_free(s: *mut ItcalcStructure) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

fn phi_json(r: &itcalc::itcore::PhiResult, registry_size: usize) -> String {
    serde_json::json!({
        "phi": r.value,
        "certified": r.certified,
        "rank_sequence": r.rank_sequence,
        "registry_size": registry_size,
    })
    .to_string()
}

/// Compute phi of a module given by an expression; the result is a JSON
/// object `{"phi", "certified", "rank_sequence", "registry_size"}`.
///
/// # Safety
/// `s` must be a live structure handle; `module` a valid string; `json_out`
/// a valid pointer. The returned string must be freed with
/// `itcalc_string_free`.
#[no_mangle]
pub unsafe extern "C" fn itcalc_phi(
    s: *const ItcalcStructure,
    module: *const c_char,
    seed: u64,
    horizon: usize,
    json_out: *mut *mut c_char,
) -> ItcalcStatus {
    if json_out.is_null() {
        set_last_error("null output argument");
        return ItcalcStatus::ItcalcErrNullArgument;
    }
    let s = match deref(s) {
        Ok(s) => s,
        Err(st) => return st,
    };
    let module = match read_str(module) {
        Ok(m) => m,
        Err(st) => return st,
    };
    let mut rng = itcalc::rng_with_seed(seed);
    let run = parse_module_expr(&s.f.algebra, module).and_then(|m| {
        let mut reg = Registry::new();
        let r = phi(&mut reg, &s.f, &m, horizon.max(1), &mut rng)?;
        Ok(phi_json(&r, reg.len()))
    });
    match run {
        Ok(json) => write_json(json, json_out),
        Err(e) => fail(e),
    }
}

/// Compute phi-dim over the full Nakayama family of indecomposables; the
/// result has the same shape as `itcalc_phi` with `phi_dim` in place of
/// `phi`.
///
/// # Safety
/// Same contract as `itcalc_phi`, without the module argument.
#[no_mangle]
pub unsafe extern "C" fn itcalc_phi_dim_nakayama(
    s: *const ItcalcStructure,
    seed: u64,
    horizon: usize,
    json_out: *mut *mut c_char,
) -> ItcalcStatus {
    if json_out.is_null() {
        set_last_error("null output argument");
        return ItcalcStatus::ItcalcErrNullArgument;
    }
    let s = match deref(s) {
        Ok(s) => s,
        Err(st) => return st,
    };
    let mut rng = itcalc::rng_with_seed(seed);
    let run = nakayama_family(&s.f).and_then(|fam| {
        let mut reg = Registry::new();
        let r = phi_dim(&mut reg, &s.f, &fam, horizon.max(1), &mut rng)?;
        Ok(serde_json::json!({
            "phi_dim": r.value,
            "certified": r.certified,
            "rank_sequence": r.rank_sequence,
            "registry_size": reg.len(),
        })
        .to_string())
    });
    match run {
        Ok(json) => write_json(json, json_out),
        Err(e) => fail(e),
    }
}

/// `dim Ext_F^degree(module, target)`, written to `out`.
///
/// # Safety
/// `s` must be a live structure handle; `module` and `target` valid
/// strings; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn itcalc_ext_dim(
    s: *const ItcalcStructure,
    module: *const c_char,
    target: *const c_char,
    degree: usize,
    out: *mut usize,
) -> ItcalcStatus {
    if out.is_null() {
        set_last_error("null output argument");
        return ItcalcStatus::ItcalcErrNullArgument;
    }
    let s = match deref(s) {
        Ok(s) => s,
        Err(st) => return st,
    };
    let (module, target) = match (read_str(module), read_str(target)) {
        (Ok(m), Ok(t)) => (m, t),
        (Err(st), _) | (_, Err(st)) => return st,
    };
    let run = parse_module_expr(&s.f.algebra, module).and_then(|m| {
        let n = parse_module_expr(&s.f.algebra, target)?;
        ext_f_dim(&s.f, &m, &n, degree)
    });
    match run {
        Ok(d) => {
            *out = d;
            ItcalcStatus::ItcalcOk
        }
        Err(e) => fail(e),
    }
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must be null or a string produced by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn itcalc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    const N3: &str = "field 2\nvertices 3\narrow 1: 1 -> 2\narrow 2: 2 -> 3\nrelation 1 2\n";

    unsafe fn parse(text: &str) -> *mut ItcalcAlgebra {
        let c = CString::new(text).unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(itcalc_algebra_parse(c.as_ptr(), &mut out), ItcalcStatus::ItcalcOk);
        out
    }

    #[test]
    fn phi_roundtrip_through_the_abi() {
        unsafe {
            let a = parse(N3);
            assert_eq!(itcalc_algebra_dim(a), 5);
            let gen = CString::new("A").unwrap();
            let mut s = ptr::null_mut();
            assert_eq!(
                itcalc_structure_new(a, gen.as_ptr(), itcalc::DEFAULT_SEED, &mut s),
                ItcalcStatus::ItcalcOk
            );
            let module = CString::new("S(1)+S(2)").unwrap();
            let mut json = ptr::null_mut();
            assert_eq!(
                itcalc_phi(s, module.as_ptr(), itcalc::DEFAULT_SEED, 50, &mut json),
                ItcalcStatus::ItcalcOk
            );
            let text = CStr::from_ptr(json).to_str().unwrap();
            let v: serde_json::Value = serde_json::from_str(text).unwrap();
            assert_eq!(v["phi"], 2);
            assert_eq!(v["certified"], true);
            itcalc_string_free(json);
            itcalc_structure_free(s);
            itcalc_algebra_free(a);
        }
    }

    #[test]
    fn nakayama_phi_dim_and_ext() {
        unsafe {
            let a = parse(N3);
            let gen = CString::new("A").unwrap();
            let mut s = ptr::null_mut();
            itcalc_structure_new(a, gen.as_ptr(), itcalc::DEFAULT_SEED, &mut s);
            let mut json = ptr::null_mut();
            assert_eq!(
                itcalc_phi_dim_nakayama(s, itcalc::DEFAULT_SEED, 50, &mut json),
                ItcalcStatus::ItcalcOk
            );
            let v: serde_json::Value =
                serde_json::from_str(CStr::from_ptr(json).to_str().unwrap()).unwrap();
            assert_eq!(v["phi_dim"], 2);
            itcalc_string_free(json);
            let (m, n) = (CString::new("S(1)").unwrap(), CString::new("S(3)").unwrap());
            let mut d = 0usize;
            assert_eq!(
                itcalc_ext_dim(s, m.as_ptr(), n.as_ptr(), 2, &mut d),
                ItcalcStatus::ItcalcOk
            );
            assert_eq!(d, 1);
            itcalc_structure_free(s);
            itcalc_algebra_free(a);
        }
    }

    #[test]
    fn errors_set_status_and_message() {
        unsafe {
            let c = CString::new("field 2\n").unwrap();
            let mut out = ptr::null_mut();
            assert_eq!(
                itcalc_algebra_parse(c.as_ptr(), &mut out),
                ItcalcStatus::ItcalcErrParse
            );
            assert!(!itcalc_last_error().is_null());
            assert_eq!(
                itcalc_algebra_parse(ptr::null(), &mut out),
                ItcalcStatus::ItcalcErrNullArgument
            );
            let a = parse(N3);
            let gen = CString::new("A").unwrap();
            let mut s = ptr::null_mut();
            itcalc_structure_new(a, gen.as_ptr(), itcalc::DEFAULT_SEED, &mut s);
            let bad = CString::new("S(9)").unwrap();
            let mut json = ptr::null_mut();
            assert_eq!(
                itcalc_phi(s, bad.as_ptr(), itcalc::DEFAULT_SEED, 50, &mut json),
                ItcalcStatus::ItcalcErrParse
            );
            itcalc_structure_free(s);
            itcalc_algebra_free(a);
        }
    }
}
