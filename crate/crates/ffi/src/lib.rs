//! C interface to `tracegeo`.
//!
//! Every function returns a [`TgStatus`]. On failure the message is kept per
//! thread and can be read with [`tg_last_error_message`]. Strings handed out
//! by the library are released with [`tg_string_free`], groups with
//! [`tg_group_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tracegeo::exact::{format_rational, parse_rational, Q};
use tracegeo::group_spec::parse_group_spec;
use tracegeo::invariants::{k_by_pairs, k_min_orbit, k_report, k_richardson, GroupSpec};
use tracegeo::Error;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Domain = 4,
    Resource = 5,
    Numeric = 6,
    Diagnostics = 7,
    Io = 8,
    Panic = 9,
}

/// Method selector for [`tg_k`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TgKMethod {
    /// Rational datum if present, otherwise the pair enumeration.
    Default = 0,
    Pairs = 1,
    Richardson = 2,
    MinOrbit = 3,
}

/// Opaque parsed group specification.
pub struct TgGroup {
    spec: GroupSpec,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> TgStatus {
    match e {
        Error::Parse { .. } => TgStatus::Parse,
        Error::Domain(_) => TgStatus::Domain,
        Error::Resource(_) => TgStatus::Resource,
        Error::Numeric(_) => TgStatus::Numeric,
        Error::Diagnostics(_) => TgStatus::Diagnostics,
        Error::Io(_) => TgStatus::Io,
    }
}

enum Fail {
    Status(TgStatus, String),
    Core(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

fn guard(body: impl FnOnce() -> Result<(), Fail>) -> TgStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => TgStatus::Ok,
        Ok(Err(Fail::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Status(s, m))) => {
            set_error(m);
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            TgStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Status(TgStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::Status(TgStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn out_ptr<T>(p: *mut T, what: &str) -> Result<(), Fail> {
    if p.is_null() {
        Err(Fail::Status(TgStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

fn into_c(s: String) -> *mut c_char {
    CString::new(s).expect("no interior nul").into_raw()
}

fn q_to_f64(q: &Q) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

/// Message of the last failure on this thread, or null. Valid until the
/// next call into the library on the same thread; do not free.
#[no_mangle]
pub extern "C" fn tg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn tg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse a group specification such as `"A2xA1+T1@res=2"`.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tg_group_parse(text: *const c_char, out: *mut *mut TgGroup) -> TgStatus {
    guard(|| {
        out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let mut spec = parse_group_spec(read_str(text, "text")?)?;
        spec.resolve_relative()?;
        *out = Box::into_raw(Box::new(TgGroup { spec }));
        Ok(())
    })
}

/// Release a group. Null is ignored.
///
/// # Safety
/// `g` must come from [`tg_group_parse`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn tg_group_free(g: *mut TgGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// `k(G)` as a double and, if `out_text` is non-null, as an exact `"n/d"`
/// string to be freed with [`tg_string_free`].
///
/// # Safety
/// `g` must be a live group; `out` writable; `out_text` null or writable.
#[no_mangle]
pub unsafe extern "C" fn tg_k(
    g: *const TgGroup,
    method: TgKMethod,
    out: *mut f64,
    out_text: *mut *mut c_char,
) -> TgStatus {
    guard(|| {
        if g.is_null() {
            return Err(Fail::Status(TgStatus::NullPointer, "group is null".into()));
        }
        out_ptr(out, "out")?;
        let spec = &(*g).spec;
        let k = match method {
            TgKMethod::Default => k_report(spec)?.k,
            TgKMethod::Pairs => k_by_pairs(spec)?,
            TgKMethod::Richardson => k_richardson(spec)?,
            TgKMethod::MinOrbit => k_min_orbit(spec)?,
        };
        *out = q_to_f64(&k);
        if !out_text.is_null() {
            *out_text = into_c(format_rational(&k));
        }
        Ok(())
    })
}

/// All parabolic subsets of the group as JSON (same shape as the CLI).
///
/// # Safety
/// `g` must be a live group; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tg_parabolics_json(g: *const TgGroup, out: *mut *mut c_char) -> TgStatus {
    guard(|| {
        if g.is_null() {
            return Err(Fail::Status(TgStatus::NullPointer, "group is null".into()));
        }
        out_ptr(out, "out")?;
        let spec = &(*g).spec;
        let rs = spec.root_system()?;
        let all = tracegeo::parabolic::enumerate_parabolic_subsets(&rs)?;
        let roots = |set: &tracegeo::parabolic::RootSet| -> Vec<Vec<i64>> {
            set.iter().map(|i| rs.ambient_vector(i)).collect()
        };
        let rows: Vec<serde_json::Value> = all
            .iter()
            .map(|p| {
                let l = tracegeo::parabolic::levi_of(&rs, p);
                serde_json::json!({
                    "members": roots(p.members()),
                    "levi": roots(l.levi_roots()),
                    "dim_V": tracegeo::parabolic::dim_unipotent_radical(&rs, p),
                    "a_M_dim": l.a_m_dim(),
                })
            })
            .collect();
        *out = into_c(serde_json::Value::Array(rows).to_string());
        Ok(())
    })
}

/// Nilpotent orbits of `gl<n>` or a classical simple type (`"C3"`) as JSON.
///
/// # Safety
/// `ty` must be a nul-terminated string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tg_orbits_json(ty: *const c_char, out: *mut *mut c_char) -> TgStatus {
    use tracegeo::orbits::{list_orbits, orbit_dim, OrbitType};
    use tracegeo::root_datum::{Series, SimpleType};
    guard(|| {
        out_ptr(out, "out")?;
        let text = read_str(ty, "type")?.trim();
        let bad = || Error::Parse {
            offset: 0,
            message: format!("expected gl<n> or a type like C3, got {text:?}"),
        };
        let t = if let Some(n) = text.strip_prefix("gl") {
            OrbitType::Gl(n.parse().ok().filter(|&n| n > 0).ok_or_else(bad)?)
        } else {
            let mut cs = text.chars();
            let s = cs.next().and_then(Series::from_char).ok_or_else(bad)?;
            let r: usize = cs.as_str().parse().map_err(|_| bad())?;
            OrbitType::Simple(SimpleType::new(s, r)?)
        };
        let rows: Vec<serde_json::Value> = list_orbits(t)?
            .iter()
            .map(|l| serde_json::json!({"label": l.to_string(), "dim": orbit_dim(l), "very_even": l.very_even}))
            .collect();
        *out = into_c(serde_json::Value::Array(rows).to_string());
        Ok(())
    })
}

/// `|SL(n, Z/N)|` as a decimal string.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tg_sl_index(n: u32, level: u64, out: *mut *mut c_char) -> TgStatus {
    guard(|| {
        out_ptr(out, "out")?;
        *out = into_c(tracegeo::arithmetic::sl_index(n, level)?.value.to_string());
        Ok(())
    })
}

/// Discriminant of an `n x n` matrix given row-major as `"num/den"` strings.
/// Writes the exact value as a string and its archimedean absolute value.
///
/// # Safety
/// `entries` must hold `n * n` nul-terminated strings; outputs writable.
#[no_mangle]
pub unsafe extern "C" fn tg_discriminant(
    entries: *const *const c_char,
    n: usize,
    out_value: *mut *mut c_char,
    out_abs: *mut f64,
) -> TgStatus {
    guard(|| {
        if entries.is_null() {
            return Err(Fail::Status(TgStatus::NullPointer, "entries is null".into()));
        }
        out_ptr(out_value, "out_value")?;
        out_ptr(out_abs, "out_abs")?;
        let cells = n
            .checked_mul(n)
            .ok_or_else(|| Error::Resource("matrix too large".into()))?;
        let raw = std::slice::from_raw_parts(entries, cells);
        let mut rows = Vec::with_capacity(n);
        for r in 0..n {
            let mut row = Vec::with_capacity(n);
            for c in 0..n {
                row.push(read_str(raw[r * n + c], "entry")?.to_string());
            }
            rows.push(row);
        }
        let m = tracegeo::local_data::RationalMatrix::from_strings(&rows)?;
        let d = tracegeo::local_data::weyl_discriminant(&m)?;
        *out_value = into_c(format_rational(&d.value));
        *out_abs = q_to_f64(&d.abs_inf);
        Ok(())
    })
}

/// Finite part for `t^power e^{-lambda t}`; `power` is a rational string,
/// `t0 <= 0` keeps the default split point.
///
/// # Safety
/// `power` must be a nul-terminated string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tg_mellin_fp_exp(
    lambda: f64,
    power: *const c_char,
    order: u32,
    t0: f64,
    out: *mut f64,
) -> TgStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let p = parse_rational(read_str(power, "power")?)?;
        let (f, mut e) = tracegeo::mellin::exp_preset(lambda, p, order as usize)?;
        if t0 > 0.0 {
            e = e.with_t0(t0)?;
        }
        *out = tracegeo::mellin::fp_mellin(&f, &e)?;
        Ok(())
    })
}

/// Largest admissible beta.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tg_beta_max(c2: f64, c4: f64, cn: f64, k: f64, out: *mut f64) -> TgStatus {
    guard(|| {
        out_ptr(out, "out")?;
        *out = tracegeo::budget::beta_max(c2, c4, cn, k)?;
        Ok(())
    })
}

/// Smallest admissible lambda.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tg_lambda_min(k: f64, beta: f64, epsilon: f64, c_prime: f64, out: *mut f64) -> TgStatus {
    guard(|| {
        out_ptr(out, "out")?;
        *out = tracegeo::budget::lambda_min(k, beta, epsilon, c_prime)?;
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn last_error() -> String {
        let p = tg_last_error_message();
        assert!(!p.is_null());
        unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
    }

    fn take(s: *mut c_char) -> String {
        let v = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
        unsafe { tg_string_free(s) };
        v
    }

    #[test]
    fn group_round_trip() {
        let mut g = ptr::null_mut();
        let spec = CString::new("A3").unwrap();
        assert_eq!(unsafe { tg_group_parse(spec.as_ptr(), &mut g) }, TgStatus::Ok);
        let mut k = 0.0;
        let mut text = ptr::null_mut();
        assert_eq!(unsafe { tg_k(g, TgKMethod::Pairs, &mut k, &mut text) }, TgStatus::Ok);
        assert_eq!(k, 3.0);
        assert_eq!(take(text), "3/1");
        assert_eq!(unsafe { tg_k(g, TgKMethod::MinOrbit, &mut k, ptr::null_mut()) }, TgStatus::Ok);
        assert_eq!(k, 3.0);
        let mut json = ptr::null_mut();
        assert_eq!(unsafe { tg_parabolics_json(g, &mut json) }, TgStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 75);
        unsafe { tg_group_free(g) };
    }

    #[test]
    fn errors_have_codes_and_messages() {
        let mut g = ptr::null_mut();
        let spec = CString::new("Q7").unwrap();
        assert_eq!(unsafe { tg_group_parse(spec.as_ptr(), &mut g) }, TgStatus::Parse);
        assert!(g.is_null());
        assert!(last_error().contains("byte 0"));
        assert_eq!(unsafe { tg_group_parse(ptr::null(), &mut g) }, TgStatus::NullPointer);
        let mut x = 0.0;
        assert_eq!(unsafe { tg_k(ptr::null(), TgKMethod::Default, &mut x, ptr::null_mut()) }, TgStatus::NullPointer);
        let mut s = ptr::null_mut();
        assert_eq!(unsafe { tg_sl_index(2, 0, &mut s) }, TgStatus::Domain);
        let ty = CString::new("E6").unwrap();
        assert_eq!(unsafe { tg_orbits_json(ty.as_ptr(), &mut s) }, TgStatus::Domain);
        assert_eq!(unsafe { tg_sl_index(2, 3, &mut s) }, TgStatus::Ok);
        assert!(tg_last_error_message().is_null());
        assert_eq!(take(s), "24");
    }

    #[test]
    fn numerics() {
        let mut x = 0.0;
        let p = CString::new("0").unwrap();
        assert_eq!(unsafe { tg_mellin_fp_exp(3.0, p.as_ptr(), 12, 0.0, &mut x) }, TgStatus::Ok);
        assert!((x + 3f64.ln()).abs() < 1e-9);
        assert_eq!(unsafe { tg_beta_max(1.0, 1.0, 1.0, 3.0, &mut x) }, TgStatus::Ok);
        assert!((x - (13f64.sqrt() - 3.0) / 2.0).abs() < 1e-12);
        let beta = x;
        assert_eq!(unsafe { tg_lambda_min(3.0, beta, 0.01, 0.0, &mut x) }, TgStatus::Ok);
        assert!(x > 0.0);
        let cells: Vec<CString> = ["2", "0", "0", "1"].iter().map(|s| CString::new(*s).unwrap()).collect();
        let ptrs: Vec<*const c_char> = cells.iter().map(|c| c.as_ptr()).collect();
        let mut v = ptr::null_mut();
        assert_eq!(unsafe { tg_discriminant(ptrs.as_ptr(), 2, &mut v, &mut x) }, TgStatus::Ok);
        assert_eq!(take(v), "-1/2");
        assert_eq!(x, 0.5);
        let ty = CString::new("gl3").unwrap();
        assert_eq!(unsafe { tg_orbits_json(ty.as_ptr(), &mut v) }, TgStatus::Ok);
        assert!(take(v).contains("[2,1]"));
    }

    #[test]
    fn header_is_current() {
        let header = include_str!("../include/tracegeo.h");
        for name in [
            "tg_group_parse",
            "tg_group_free",
            "tg_k",
            "tg_sl_index",
            "tg_discriminant",
            "tg_mellin_fp_exp",
            "tg_beta_max",
            "tg_lambda_min",
            "tg_parabolics_json",
            "tg_orbits_json",
            "tg_last_error_message",
            "tg_string_free",
            "typedef struct TgGroup TgGroup",
            "TG_STATUS_PANIC",
        ] {
            assert!(header.contains(name), "header lacks {name}");
        }
    }
}
