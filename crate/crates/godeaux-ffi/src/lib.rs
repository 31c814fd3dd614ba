//! C ABI for the stratification library.
//!
//! A `GodeauxCase` is an opaque handle holding one torsion case and its
//! computed pipeline. Query functions return freshly allocated
//! NUL-terminated JSON strings through an out-parameter; release them with
//! `godeaux_string_free`. Every function returns a status code.
//!
//! # Safety
//!
//! All entry points are `unsafe` in the usual C-ABI sense: handles must come
//! from `godeaux_case_new` and must not be used after `godeaux_case_free`,
//! out-parameters must point to writable storage, and strings must be valid
//! NUL-terminated UTF-8. Null handles and null string arguments are tolerated
//! and reported as `InvalidArgument`.

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use godeaux_core::report::{
    cmd_ambient, cmd_equations, cmd_group_id, cmd_inertia, cmd_strata, Context, Format,
};

/// Status codes returned by every FFI entry point.
#[repr(C)]
pub enum GodeauxStatus {
    Ok = 0,
    /// Bad argument: unsupported torsion order, null pointer, parse failure.
    InvalidArgument = 1,
    /// Internal consistency failure.
    Internal = 2,
}

/// Opaque handle for one torsion case with its computed stratification.
pub struct GodeauxCase {
    ctx: Context,
}

fn emit(out: *mut *mut c_char, s: String) -> GodeauxStatus {
    if out.is_null() {
        return GodeauxStatus::InvalidArgument;
    }
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            GodeauxStatus::Ok
        }
        Err(_) => GodeauxStatus::Internal,
    }
}

/// Build the pipeline for torsion order `nu` (3, 4 or 5). On success the
/// handle is stored in `out`; release it with `godeaux_case_free`.
/// # Safety
///
/// `out` must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn godeaux_case_new(nu: u32, out: *mut *mut GodeauxCase) -> GodeauxStatus {
    if out.is_null() {
        return GodeauxStatus::InvalidArgument;
    }
    unsafe { *out = ptr::null_mut() };
    if !(3..=5).contains(&nu) {
        return GodeauxStatus::InvalidArgument;
    }
    match Context::build(nu) {
        Ok(ctx) => {
            let boxed = Box::new(GodeauxCase { ctx });
            unsafe { *out = Box::into_raw(boxed) };
            GodeauxStatus::Ok
        }
        Err(_) => GodeauxStatus::Internal,
    }
}

/// Release a case handle. A null pointer is a no-op.
/// # Safety
///
/// `case` must be null or a handle from `godeaux_case_new`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn godeaux_case_free(case: *mut GodeauxCase) {
    if !case.is_null() {
        drop(unsafe { Box::from_raw(case) });
    }
}

/// Release a string returned by any query function.
/// # Safety
///
/// `s` must be null or a string returned by a query function, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn godeaux_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Stratification table, collapsed components and Hasse diagram as JSON.
/// # Safety
///
/// `case` must be a live handle; `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn godeaux_case_strata_json(
    case: *const GodeauxCase,
    out: *mut *mut c_char,
) -> GodeauxStatus {
    let Some(case) = (unsafe { case.as_ref() }) else {
        return GodeauxStatus::InvalidArgument;
    };
    match cmd_strata(&case.ctx, Format::Json) {
        Ok(s) => emit(out, s),
        Err(_) => GodeauxStatus::Internal,
    }
}

/// Hasse diagram in DOT syntax.
/// # Safety
///
/// `case` must be a live handle; `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn godeaux_case_strata_dot(
    case: *const GodeauxCase,
    out: *mut *mut c_char,
) -> GodeauxStatus {
    let Some(case) = (unsafe { case.as_ref() }) else {
        return GodeauxStatus::InvalidArgument;
    };
    match cmd_strata(&case.ctx, Format::Dot) {
        Ok(s) => emit(out, s),
        Err(_) => GodeauxStatus::Internal,
    }
}

/// Inertia component decomposition as JSON.
/// # Safety
///
/// `case` must be a live handle; `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn godeaux_case_inertia_json(
    case: *const GodeauxCase,
    out: *mut *mut c_char,
) -> GodeauxStatus {
    let Some(case) = (unsafe { case.as_ref() }) else {
        return GodeauxStatus::InvalidArgument;
    };
    match cmd_inertia(&case.ctx, Format::Json) {
        Ok(s) => emit(out, s),
        Err(_) => GodeauxStatus::Internal,
    }
}

/// The modular equation system of one twist (a unit mod nu) as JSON.
/// # Safety
///
/// `case` must be a live handle; `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn godeaux_case_equations_json(
    case: *const GodeauxCase,
    twist: u32,
    out: *mut *mut c_char,
) -> GodeauxStatus {
    let Some(case) = (unsafe { case.as_ref() }) else {
        return GodeauxStatus::InvalidArgument;
    };
    if case.ctx.case.twist_exponent(twist).is_err() {
        return GodeauxStatus::InvalidArgument;
    }
    match cmd_equations(&case.ctx, twist, Format::Json) {
        Ok(s) => emit(out, s),
        Err(_) => GodeauxStatus::Internal,
    }
}

/// Orders, structure and generators of the ambient group as JSON.
/// # Safety
///
/// `case` must be a live handle; `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn godeaux_case_ambient_json(
    case: *const GodeauxCase,
    out: *mut *mut c_char,
) -> GodeauxStatus {
    let Some(case) = (unsafe { case.as_ref() }) else {
        return GodeauxStatus::InvalidArgument;
    };
    match cmd_ambient(&case.ctx, Format::Json) {
        Ok(s) => emit(out, s),
        Err(_) => GodeauxStatus::Internal,
    }
}

/// Identify the subgroup generated by semicolon-separated tuples such as
/// "(2,2,0,0);(0,0,0,1)", quotiented by the torsion group. JSON result.
/// # Safety
///
/// `case` must be a live handle, `generators` null or NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn godeaux_case_group_id_json(
    case: *const GodeauxCase,
    generators: *const c_char,
    out: *mut *mut c_char,
) -> GodeauxStatus {
    let Some(case) = (unsafe { case.as_ref() }) else {
        return GodeauxStatus::InvalidArgument;
    };
    if generators.is_null() {
        return GodeauxStatus::InvalidArgument;
    }
    let Ok(text) = (unsafe { CStr::from_ptr(generators) }).to_str() else {
        return GodeauxStatus::InvalidArgument;
    };
    if godeaux_core::report::parse_generators(&case.ctx.case, text).is_err() {
        return GodeauxStatus::InvalidArgument;
    }
    match cmd_group_id(&case.ctx, text, Format::Json) {
        Ok(s) => emit(out, s),
        Err(_) => GodeauxStatus::Internal,
    }
}
