//! C interface to `thompson-core`.
//!
//! Maps and wreath elements are opaque heap handles owned by the caller and
//! released with the matching `_free` function. Strings returned through
//! out-parameters are owned by the caller and released with
//! [`thompson_string_free`]. Every function returns a [`ThompsonStatus`];
//! on failure [`thompson_last_error`] describes the problem.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use thompson_core::verify;
use thompson_core::{eval_word, PLMap, Word, WreathElement, WreathError};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThompsonStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Domain = 4,
    NotInWreathSubgroup = 5,
    CapExceeded = 6,
    Panic = 7,
}

/// Opaque handle to a piecewise-linear map.
pub struct ThompsonMap(PLMap);

/// Opaque handle to an element of Z wr Z.
pub struct ThompsonWreath(WreathElement);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Fail(ThompsonStatus, String);

type R<T> = Result<T, Fail>;

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> R<()>) -> ThompsonStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            ThompsonStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&msg);
            ThompsonStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(ThompsonStatus::NullPointer, format!("{what} is null"))
}

fn parse_err(e: impl std::fmt::Display) -> Fail {
    Fail(ThompsonStatus::Parse, e.to_string())
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> R<&'a str> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Fail(ThompsonStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn get<'a, T>(p: *const T, what: &str) -> R<&'a T> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> R<()> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> R<()> {
    if out.is_null() {
        return Err(null("out"));
    }
    let c = CString::new(s).map_err(|e| Fail(ThompsonStatus::Parse, e.to_string()))?;
    out.write(c.into_raw());
    Ok(())
}

unsafe fn put_map(out: *mut *mut ThompsonMap, m: PLMap) -> R<()> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(Box::into_raw(Box::new(ThompsonMap(m))));
    Ok(())
}

/// Message for the most recent failure on this thread, empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn thompson_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn thompson_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Map of a word such as `"x1 x0^-1 a^2 b"`.
///
/// # Safety
/// `word` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn thompson_map_from_word(
    word: *const c_char,
    out: *mut *mut ThompsonMap,
) -> ThompsonStatus {
    guard(|| {
        let w: Word = text(word, "word")?.parse().map_err(parse_err)?;
        put_map(out, eval_word(&w))
    })
}

/// Map from its `x:y x:y ...` breakpoint list.
///
/// # Safety
/// `src` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn thompson_map_parse(
    src: *const c_char,
    out: *mut *mut ThompsonMap,
) -> ThompsonStatus {
    guard(|| {
        let m: PLMap = text(src, "src")?.parse().map_err(parse_err)?;
        put_map(out, m)
    })
}

/// # Safety
/// `m` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn thompson_map_free(m: *mut ThompsonMap) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// `f` then `g`.
///
/// # Safety
/// `f`, `g` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn thompson_map_compose(
    f: *const ThompsonMap,
    g: *const ThompsonMap,
    out: *mut *mut ThompsonMap,
) -> ThompsonStatus {
    guard(|| {
        let (f, g) = (get(f, "f")?, get(g, "g")?);
        let fg =
            f.0.compose(&g.0)
                .map_err(|e| Fail(ThompsonStatus::Domain, e.to_string()))?;
        put_map(out, fg)
    })
}

/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn thompson_map_inverse(
    f: *const ThompsonMap,
    out: *mut *mut ThompsonMap,
) -> ThompsonStatus {
    guard(|| put_map(out, get(f, "f")?.0.inverse()))
}

/// # Safety
/// `f`, `g` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn thompson_map_equal(
    f: *const ThompsonMap,
    g: *const ThompsonMap,
    out: *mut bool,
) -> ThompsonStatus {
    guard(|| put(out, get(f, "f")?.0 == get(g, "g")?.0, "out"))
}

/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn thompson_map_is_identity(
    f: *const ThompsonMap,
    out: *mut bool,
) -> ThompsonStatus {
    guard(|| put(out, get(f, "f")?.0.is_identity(), "out"))
}

/// Image of the dyadic `x` (`"3/8"`, `"3/2^3"`, `"1"`), returned as text.
///
/// # Safety
/// `f` must be a live handle, `x` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn thompson_map_evaluate(
    f: *const ThompsonMap,
    x: *const c_char,
    out: *mut *mut c_char,
) -> ThompsonStatus {
    guard(|| {
        let f = get(f, "f")?;
        let x = text(x, "x")?.parse().map_err(parse_err)?;
        let y =
            f.0.evaluate(&x)
                .map_err(|e| Fail(ThompsonStatus::Domain, e.to_string()))?;
        put_string(out, y.to_string())
    })
}

/// Support as text, e.g. `"(1/2, 7/8)"`.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn thompson_map_support(
    f: *const ThompsonMap,
    out: *mut *mut c_char,
) -> ThompsonStatus {
    guard(|| put_string(out, get(f, "f")?.0.support().to_string()))
}

/// Exponents of the slopes at the two ends of the domain.
///
/// # Safety
/// `f` must be a live handle; `left` and `right` must be writable.
#[no_mangle]
pub unsafe extern "C" fn thompson_map_abelianize(
    f: *const ThompsonMap,
    left: *mut i64,
    right: *mut i64,
) -> ThompsonStatus {
    guard(|| {
        let (s, t) = get(f, "f")?.0.abelianize();
        put(left, s, "left")?;
        put(right, t, "right")
    })
}

/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn thompson_map_to_string(
    f: *const ThompsonMap,
    out: *mut *mut c_char,
) -> ThompsonStatus {
    guard(|| put_string(out, get(f, "f")?.0.to_string()))
}

/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn thompson_map_to_json(
    f: *const ThompsonMap,
    out: *mut *mut c_char,
) -> ThompsonStatus {
    guard(|| put_string(out, get(f, "f")?.0.to_json().to_string()))
}

/// Element from `"shift=m; coeffs={k:v, ...}"`.
///
/// # Safety
/// `src` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn thompson_wreath_parse(
    src: *const c_char,
    out: *mut *mut ThompsonWreath,
) -> ThompsonStatus {
    guard(|| {
        let u: WreathElement = text(src, "src")?.parse().map_err(parse_err)?;
        put(out, Box::into_raw(Box::new(ThompsonWreath(u))), "out")
    })
}

/// # Safety
/// `w` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn thompson_wreath_free(w: *mut ThompsonWreath) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// # Safety
/// `w` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn thompson_wreath_embed(
    w: *const ThompsonWreath,
    out: *mut *mut ThompsonMap,
) -> ThompsonStatus {
    guard(|| put_map(out, get(w, "w")?.0.embed()))
}

/// Returns `NotInWreathSubgroup` when `f` is not in the image of the embedding.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn thompson_wreath_decompose(
    f: *const ThompsonMap,
    out: *mut *mut ThompsonWreath,
) -> ThompsonStatus {
    guard(|| match WreathElement::decompose(&get(f, "f")?.0) {
        Ok(u) => put(out, Box::into_raw(Box::new(ThompsonWreath(u))), "out"),
        Err(e @ WreathError::NotInWreathSubgroup(_)) => {
            Err(Fail(ThompsonStatus::NotInWreathSubgroup, e.to_string()))
        }
        Err(e) => Err(parse_err(e)),
    })
}

/// # Safety
/// `w` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn thompson_wreath_to_string(
    w: *const ThompsonWreath,
    out: *mut *mut c_char,
) -> ThompsonStatus {
    guard(|| put_string(out, get(w, "w")?.0.to_string()))
}

/// Runs one check: `"lemma1"` and `"claim"` take Kmax, `"relations"` takes
/// Nmax, `"centralizer"` takes the ball radius. `out_json` may be null.
///
/// # Safety
/// `check` must be a NUL-terminated string; `pass` must be writable.
#[no_mangle]
pub unsafe extern "C" fn thompson_verify(
    check: *const c_char,
    param: u32,
    pass: *mut bool,
    out_json: *mut *mut c_char,
) -> ThompsonStatus {
    guard(|| {
        let cap = |e: verify::VerifyError| Fail(ThompsonStatus::CapExceeded, e.to_string());
        let report = match text(check, "check")? {
            "lemma1" => verify::verify_lemma1(param),
            "claim" => verify::verify_claim(param),
            "relations" => verify::verify_relations(param),
            "centralizer" => {
                verify::verify_x0_centralizer(param, verify::DEFAULT_RADIUS_CAP).map_err(cap)?
            }
            other => return Err(parse_err(format!("unknown check {other:?}"))),
        };
        put(pass, report.pass, "pass")?;
        if !out_json.is_null() {
            put_string(out_json, report.to_json().to_string())?;
        }
        Ok(())
    })
}
