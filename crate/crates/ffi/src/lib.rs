//! C interface. Objects are opaque handles released with the matching
//! `ng_*_free`; every fallible call returns an [`NgStatus`] and stores a
//! message readable through [`ng_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nilgrowth::ball::{ball_sizes, word_length, BfsOptions, GeneratingSet};
use nilgrowth::cc::cc_distance;
use nilgrowth::grading::RealPoint;
use nilgrowth::group::{Element, GroupSpec};
use nilgrowth::norm::{fmt_q, q};
use nilgrowth::shape::{LimitNorm, LimitShape};
use nilgrowth::volume::shape_volume_h3;
use nilgrowth::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Budget = 3,
    NonConvergence = 4,
    Unsupported = 5,
    NotFound = 6,
    Panic = 7,
}

pub struct NgGroup(GroupSpec);
pub struct NgGens(GeneratingSet);
pub struct NgShape(LimitShape);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> NgStatus {
    match e {
        Error::Budget(_) => NgStatus::Budget,
        Error::NonConvergence { .. } => NgStatus::NonConvergence,
        Error::Unsupported(_) => NgStatus::Unsupported,
        Error::NotFound(_) => NgStatus::NotFound,
        _ => NgStatus::InvalidInput,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (NgStatus, String)>) -> NgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NgStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            NgStatus::Panic
        }
    }
}

fn lib(e: Error) -> (NgStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (NgStatus, String) {
    (NgStatus::NullPointer, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, (NgStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (NgStatus::InvalidInput, format!("{what} is not UTF-8")))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, (NgStatus, String)> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, (NgStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ng_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Group from a preset name (`H3`, `H5`, `H3xZ`, `Z2`) or the text format.
///
/// # Safety
/// `spec` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ng_group_new(spec: *const c_char, out: *mut *mut NgGroup) -> NgStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let g: GroupSpec = str_arg(spec, "spec")?.parse().map_err(lib)?;
        *out = Box::into_raw(Box::new(NgGroup(g)));
        Ok(())
    })
}

/// # Safety
/// `g` must come from `ng_group_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ng_group_free(g: *mut NgGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Generating set: the standard one when `text` is null, otherwise one
/// element per line.
///
/// # Safety
/// `group` must be a live handle, `text` null or nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn ng_gens_new(group: *const NgGroup, text: *const c_char, out: *mut *mut NgGens) -> NgStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let g = &ref_arg(group, "group")?.0;
        let gs = if text.is_null() {
            GeneratingSet::standard(g)
        } else {
            GeneratingSet::parse(g, str_arg(text, "text")?).map_err(lib)?
        };
        *out = Box::into_raw(Box::new(NgGens(gs)));
        Ok(())
    })
}

/// # Safety
/// `s` must come from `ng_gens_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ng_gens_free(s: *mut NgGens) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Writes `|B(0)|, ..., |B(nmax)|` into `out`, which holds `nmax + 1` values.
///
/// # Safety
/// `gens` must be live and `out` must have room for `nmax + 1` values.
#[no_mangle]
pub unsafe extern "C" fn ng_ball_sizes(gens: *const NgGens, nmax: usize, out: *mut u64) -> NgStatus {
    guard(|| {
        let gs = &ref_arg(gens, "gens")?.0;
        if out.is_null() {
            return Err(null("out"));
        }
        let t = ball_sizes(gs, nmax, &BfsOptions::default()).map_err(lib)?;
        if t.truncated {
            return Err((NgStatus::Budget, format!("memory budget reached after radius {}", t.nmax())));
        }
        let dst = std::slice::from_raw_parts_mut(out, nmax + 1);
        for (d, r) in dst.iter_mut().zip(&t.rows) {
            *d = r.ball;
        }
        Ok(())
    })
}

/// Word length of the element with the given `m + c` coordinates, searched
/// up to `cap`; `NotFound` beyond.
///
/// # Safety
/// `coords` must point to `len` values.
#[no_mangle]
pub unsafe extern "C" fn ng_word_length(
    gens: *const NgGens,
    coords: *const i64,
    len: usize,
    cap: usize,
    out: *mut usize,
) -> NgStatus {
    guard(|| {
        let gs = &ref_arg(gens, "gens")?.0;
        let out = out_arg(out, "out")?;
        if coords.is_null() {
            return Err(null("coords"));
        }
        let v = std::slice::from_raw_parts(coords, len);
        let m = gs.group().m();
        if len != m + gs.group().c() {
            return Err((NgStatus::InvalidInput, format!("expected {} coordinates", m + gs.group().c())));
        }
        let e = Element::new(v[..m].to_vec(), v[m..].to_vec());
        match word_length(gs, &e, cap).map_err(lib)? {
            Some(n) => {
                *out = n;
                Ok(())
            }
            None => Err((NgStatus::NotFound, format!("word length exceeds {cap}"))),
        }
    })
}

/// Limit shape of a generating set.
///
/// # Safety
/// `gens` must be live and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ng_shape_new(gens: *const NgGens, out: *mut *mut NgShape) -> NgStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let s = LimitShape::from_generators(&ref_arg(gens, "gens")?.0).map_err(lib)?;
        *out = Box::into_raw(Box::new(NgShape(s)));
        Ok(())
    })
}

/// # Safety
/// `s` must come from `ng_shape_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ng_shape_free(s: *mut NgShape) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Limit distance to a point in exponential coordinates.
///
/// # Safety
/// `coords` must point to `len` values.
#[no_mangle]
pub unsafe extern "C" fn ng_cc_distance(shape: *const NgShape, coords: *const f64, len: usize, out: *mut f64) -> NgStatus {
    guard(|| {
        let s = &ref_arg(shape, "shape")?.0;
        let out = out_arg(out, "out")?;
        if coords.is_null() {
            return Err(null("coords"));
        }
        let v = std::slice::from_raw_parts(coords, len);
        let (m, c) = (s.group.m(), s.group.c());
        if len != m + c {
            return Err((NgStatus::InvalidInput, format!("expected {} coordinates", m + c)));
        }
        *out = cc_distance(s, &RealPoint::new(v[..m].to_vec(), v[m..].to_vec()));
        Ok(())
    })
}

/// Exact volume of a planar limit shape as a newly allocated `p/q` string,
/// released with `ng_string_free`.
///
/// # Safety
/// `shape` must be live and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ng_shape_volume(shape: *const NgShape, out: *mut *mut c_char) -> NgStatus {
    guard(|| {
        let s = &ref_arg(shape, "shape")?.0;
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let LimitNorm::Planar(p) = &s.norm else {
            return Err((NgStatus::Unsupported, "exact volumes exist for planar shapes only".into()));
        };
        let v = match s.group.c() {
            0 => p.area(),
            _ => shape_volume_h3(p).map_err(lib)? * q(s.group.bracket_coeff(0, 1, 0).abs()),
        };
        *out = CString::new(fmt_q(&v)).expect("ascii").into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ng_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
