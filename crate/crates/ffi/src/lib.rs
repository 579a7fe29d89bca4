//! C ABI over the bbp toolkit: opaque formula handles, status codes, and
//! newly-allocated C strings the caller frees with `bbp_string_free`.
//!
//! The generated header lands in `include/bbp_ffi.h` at build time.

use bbp::digits::{extract_bits_auto, extract_constant_auto};
use bbp::generators::{catalog, gen_degree1, gen_degree2, gen_family, FamilyId};
use bbp::pformula::{
    agreement_bits, eval_p, is_zero_relation, parse_document, serialize_scaled, serialize_zero,
    Document, ScaledFormula, ZeroRelation,
};
use libc::c_char;
use std::ffi::{CStr, CString};
use std::ptr;

/// Status codes returned by fallible calls.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BbpStatus {
    Ok = 0,
    InvalidArgument = 1,
    ParseError = 2,
    VerifyFailed = 3,
    NumericError = 4,
    NotFound = 5,
}

/// Opaque handle to a formula (a named identity or a zero relation).
pub struct BbpFormula {
    inner: Inner,
}

enum Inner {
    Scaled(ScaledFormula),
    Zero(ZeroRelation),
}

fn boxed(inner: Inner) -> *mut BbpFormula {
    Box::into_raw(Box::new(BbpFormula { inner }))
}

fn to_cstring(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// # Safety
/// `s` must be NUL-terminated and valid for reads.
unsafe fn read_str<'a>(s: *const c_char) -> Option<&'a str> {
    if s.is_null() {
        return None;
    }
    CStr::from_ptr(s).to_str().ok()
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn bbp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Number of catalog entries (identities first, then zero relations).
#[no_mangle]
pub extern "C" fn bbp_catalog_count() -> usize {
    let cat = catalog();
    cat.scaled.len() + cat.zeros.len()
}

/// Catalog entry by index; NULL when out of range. Free with
/// `bbp_formula_free`.
#[no_mangle]
pub extern "C" fn bbp_catalog_get(index: usize) -> *mut BbpFormula {
    let cat = catalog();
    if index < cat.scaled.len() {
        return boxed(Inner::Scaled(cat.scaled[index].clone()));
    }
    let zi = index - cat.scaled.len();
    if zi < cat.zeros.len() {
        return boxed(Inner::Zero(cat.zeros[zi].clone()));
    }
    ptr::null_mut()
}

/// Catalog entry by name; NULL when unknown.
///
/// # Safety
/// `name` must be a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn bbp_formula_by_name(name: *const c_char) -> *mut BbpFormula {
    let Some(name) = read_str(name) else {
        return ptr::null_mut();
    };
    let cat = catalog();
    if let Some(sf) = cat.find_scaled(name) {
        return boxed(Inner::Scaled(sf.clone()));
    }
    if let Some(z) = cat.find_zero(name) {
        return boxed(Inner::Zero(z.clone()));
    }
    ptr::null_mut()
}

/// Generate a family instance. `degree` 1 and 2 use the closed-form
/// left-hand sides; any other degree keeps the polylog sum. `p` must be odd.
///
/// # Safety
/// `family_slug` must be a valid NUL-terminated string; `out` must be a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bbp_generate(
    family_slug: *const c_char,
    degree: u32,
    p: u32,
    out: *mut *mut BbpFormula,
) -> BbpStatus {
    if out.is_null() {
        return BbpStatus::InvalidArgument;
    }
    *out = ptr::null_mut();
    let Some(slug) = read_str(family_slug) else {
        return BbpStatus::InvalidArgument;
    };
    let Ok(id) = FamilyId::from_slug(slug) else {
        return BbpStatus::NotFound;
    };
    let generated = match degree {
        1 => gen_degree1(id, p),
        2 => match id {
            FamilyId::ImSumA => gen_degree2(1, p),
            FamilyId::ImDiffA => gen_degree2(2, p),
            FamilyId::ImSumB => gen_degree2(3, p),
            FamilyId::ImDiffB => gen_degree2(4, p),
            _ => gen_family(id, 2, p),
        },
        s => gen_family(id, s, p),
    };
    match generated {
        Ok(sf) => {
            *out = boxed(Inner::Scaled(sf));
            BbpStatus::Ok
        }
        Err(_) => BbpStatus::InvalidArgument,
    }
}

/// Parse a formula document (the same JSON the CLI emits).
///
/// # Safety
/// `text` must be a valid NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bbp_formula_parse(
    text: *const c_char,
    out: *mut *mut BbpFormula,
) -> BbpStatus {
    if out.is_null() {
        return BbpStatus::InvalidArgument;
    }
    *out = ptr::null_mut();
    let Some(text) = read_str(text) else {
        return BbpStatus::InvalidArgument;
    };
    match parse_document(text) {
        Ok(Document::Scaled(sf)) => {
            *out = boxed(Inner::Scaled(sf));
            BbpStatus::Ok
        }
        Ok(Document::Formula(f)) => {
            *out = boxed(Inner::Zero(ZeroRelation {
                name: String::new(),
                formula: f,
            }));
            BbpStatus::Ok
        }
        Err(_) => BbpStatus::ParseError,
    }
}

/// Canonical document text for a formula. Free with `bbp_string_free`.
///
/// # Safety
/// `f` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn bbp_formula_serialize(f: *const BbpFormula) -> *mut c_char {
    let Some(f) = f.as_ref() else {
        return ptr::null_mut();
    };
    let text = match &f.inner {
        Inner::Scaled(sf) => serialize_scaled(sf),
        Inner::Zero(z) => serialize_zero(z),
    };
    to_cstring(text)
}

/// Formula name. Free with `bbp_string_free`.
///
/// # Safety
/// `f` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn bbp_formula_name(f: *const BbpFormula) -> *mut c_char {
    let Some(f) = f.as_ref() else {
        return ptr::null_mut();
    };
    let name = match &f.inner {
        Inner::Scaled(sf) => sf.name.clone(),
        Inner::Zero(z) => z.name.clone(),
    };
    to_cstring(name)
}

/// Decimal value of the formula's constant to `bits` precision. Free the
/// string with `bbp_string_free`.
///
/// # Safety
/// `f` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn bbp_eval_decimal(f: *const BbpFormula, bits: u32) -> *mut c_char {
    let Some(f) = f.as_ref() else {
        return ptr::null_mut();
    };
    let v = match &f.inner {
        Inner::Scaled(sf) => sf.eval_rhs(bits),
        Inner::Zero(z) => eval_p(&z.formula, bits),
    };
    let digits = (bits as u64 * 30103 / 100000) as u32 + 2;
    to_cstring(v.to_decimal_string(digits))
}

/// Verify an identity: left-hand side against the P-series. On success
/// writes the achieved agreement (in bits) through `agreement_out`.
///
/// # Safety
/// `f` must be a live handle; `agreement_out` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn bbp_verify(
    f: *const BbpFormula,
    bits: u32,
    agreement_out: *mut i64,
) -> BbpStatus {
    let Some(f) = f.as_ref() else {
        return BbpStatus::InvalidArgument;
    };
    let Inner::Scaled(sf) = &f.inner else {
        return BbpStatus::InvalidArgument;
    };
    let Ok(lhs) = sf.eval_lhs(bits) else {
        return BbpStatus::NumericError;
    };
    let rhs = sf.eval_rhs(bits);
    let agreement = agreement_bits(&lhs, &rhs);
    if !agreement_out.is_null() {
        *agreement_out = agreement;
    }
    if agreement >= bits as i64 - 16 {
        BbpStatus::Ok
    } else {
        BbpStatus::VerifyFailed
    }
}

/// Zero-relation check at the given precision. Writes the log2 bound of
/// |value| through `bound_out` when non-NULL (i64::MIN for exactly zero).
///
/// # Safety
/// `f` must be a live handle; `bound_out` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn bbp_zero_check(
    f: *const BbpFormula,
    bits: u32,
    bound_out: *mut i64,
) -> BbpStatus {
    let Some(f) = f.as_ref() else {
        return BbpStatus::InvalidArgument;
    };
    let formula = match &f.inner {
        Inner::Scaled(sf) => &sf.formula,
        Inner::Zero(z) => &z.formula,
    };
    let (pass, report) = is_zero_relation(formula, bits);
    if !bound_out.is_null() {
        *bound_out = report.value_bound_log2.unwrap_or(i64::MIN);
    }
    if pass {
        BbpStatus::Ok
    } else {
        BbpStatus::VerifyFailed
    }
}

/// Extract `n_hex` uppercase hex digits of the constant starting at bit
/// offset `t`. Free the string with `bbp_string_free`.
///
/// # Safety
/// `f` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn bbp_extract_digits(
    f: *const BbpFormula,
    t: u64,
    n_hex: u32,
) -> *mut c_char {
    let Some(f) = f.as_ref() else {
        return ptr::null_mut();
    };
    let run = match &f.inner {
        Inner::Scaled(sf) => extract_constant_auto(sf, t, n_hex),
        Inner::Zero(z) => extract_bits_auto(&z.formula, t, n_hex, &z.name),
    };
    match run {
        Ok(r) => to_cstring(r.hex_digits),
        Err(_) => ptr::null_mut(),
    }
}

/// Free a string returned by this library. NULL is a no-op.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn bbp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Free a formula handle. NULL is a no-op.
///
/// # Safety
/// `f` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn bbp_formula_free(f: *mut BbpFormula) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}
