//! C interface: opaque semigroup handles, status codes and a per-thread
//! last-error message.
//!
//! Every fallible function returns an [`InvsemiStatus`] and writes its
//! result through an out-pointer. Handles come from the `*_new`/`*_from_*`
//! constructors and are released with [`invsemi_semigroup_free`]; strings
//! returned to the caller are released with [`invsemi_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use invsemi::action::{EndoAction, EpsilonMap};
use invsemi::billhardt::find_transversal;
use invsemi::congruence::{enumerate_congruences, is_congruence};
use invsemi::io::{InstanceJson, InstanceSource};
use invsemi::morphism::ExtensionSolution;
use invsemi::products::{build_lsd, build_rsd};
use invsemi::trhull::{enumerate_hull, hull_of_extension};
use invsemi::verify::{run_suite, Bounds};
use invsemi::{fixtures, validate, Error, FiniteSemigroup, InverseSemigroup};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvsemiStatus {
    Ok = 0,
    NullPointer = 1,
    Malformed = 2,
    NotInverse = 3,
    OutOfRange = 4,
    TooLarge = 5,
    Invalid = 6,
    /// The call ran but a checked statement failed.
    Failed = 7,
    Panic = 8,
}

/// A validated finite inverse semigroup.
pub struct InvsemiSemigroup {
    inner: InverseSemigroup,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn status_of(e: &Error) -> InvsemiStatus {
    match e {
        Error::Malformed(_) | Error::DegreeMismatch { .. } => InvsemiStatus::Malformed,
        Error::NotAssociative { .. }
        | Error::NotRegular { .. }
        | Error::IdempotentsDontCommute { .. } => InvsemiStatus::NotInverse,
        Error::TooLarge { .. } => InvsemiStatus::TooLarge,
        _ => InvsemiStatus::Invalid,
    }
}

fn fail(e: Error) -> InvsemiStatus {
    set_error(e.to_string());
    status_of(&e)
}

fn guard(body: impl FnOnce() -> InvsemiStatus) -> InvsemiStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            InvsemiStatus::Panic
        }
    }
}

unsafe fn handle<'a>(s: *const InvsemiSemigroup) -> Option<&'a InverseSemigroup> {
    s.as_ref().map(|h| &h.inner)
}

unsafe fn give(out: *mut *mut InvsemiSemigroup, s: InverseSemigroup) -> InvsemiStatus {
    *out = Box::into_raw(Box::new(InvsemiSemigroup { inner: s }));
    InvsemiStatus::Ok
}

unsafe fn give_string(out: *mut *mut c_char, text: String) -> InvsemiStatus {
    match CString::new(text) {
        Ok(c) => {
            *out = c.into_raw();
            InvsemiStatus::Ok
        }
        Err(_) => {
            set_error("string contains a NUL byte");
            InvsemiStatus::Invalid
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, InvsemiStatus> {
    if p.is_null() {
        set_error("null string");
        return Err(InvsemiStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("string is not UTF-8");
        InvsemiStatus::Malformed
    })
}

/// The message of the last failed call on this thread, or NULL. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn invsemi_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds a semigroup from a row-major `order × order` table.
///
/// # Safety
/// `table` must point to `order * order` readable values and `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn invsemi_semigroup_from_table(
    table: *const u32,
    order: usize,
    out: *mut *mut InvsemiSemigroup,
) -> InvsemiStatus {
    guard(|| {
        if table.is_null() || out.is_null() {
            set_error("null argument");
            return InvsemiStatus::NullPointer;
        }
        let Some(len) = order.checked_mul(order) else {
            return fail(Error::Malformed("order overflows".into()));
        };
        let cells = std::slice::from_raw_parts(table, len);
        let rows: Vec<Vec<usize>> = cells
            .chunks(order.max(1))
            .map(|r| r.iter().map(|&x| x as usize).collect())
            .collect();
        match FiniteSemigroup::new(rows).and_then(validate) {
            Ok(s) => give(out, s),
            Err(e) => fail(e),
        }
    })
}

/// Builds a semigroup from instance JSON: a table object or a list of
/// partial bijections.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn invsemi_semigroup_from_json(
    json: *const c_char,
    out: *mut *mut InvsemiSemigroup,
) -> InvsemiStatus {
    guard(|| {
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        if out.is_null() {
            set_error("null argument");
            return InvsemiStatus::NullPointer;
        }
        let source: InstanceSource = match serde_json::from_str(text) {
            Ok(s) => s,
            Err(e) => return fail(Error::Malformed(e.to_string())),
        };
        match source.to_semigroup() {
            Ok(s) => give(out, s),
            Err(e) => fail(e),
        }
    })
}

/// A built-in fixture by name (`"b2"`, `"i2"`, `"chain3"`, …).
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn invsemi_semigroup_fixture(
    name: *const c_char,
    out: *mut *mut InvsemiSemigroup,
) -> InvsemiStatus {
    guard(|| {
        let name = match read_str(name) {
            Ok(t) => t,
            Err(s) => return s,
        };
        if out.is_null() {
            set_error("null argument");
            return InvsemiStatus::NullPointer;
        }
        match fixtures::by_name(name) {
            Some(s) => give(out, s),
            None => fail(Error::Invalid(format!("no fixture named {name}"))),
        }
    })
}

/// Releases a handle. NULL is ignored.
///
/// # Safety
/// `s` must be NULL or a handle returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn invsemi_semigroup_free(s: *mut InvsemiSemigroup) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Number of elements; 0 for NULL.
///
/// # Safety
/// `s` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn invsemi_semigroup_order(s: *const InvsemiSemigroup) -> usize {
    handle(s).map_or(0, InverseSemigroup::order)
}

/// # Safety
/// `s` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn invsemi_semigroup_mul(
    s: *const InvsemiSemigroup,
    a: usize,
    b: usize,
    out: *mut usize,
) -> InvsemiStatus {
    let (Some(s), false) = (handle(s), out.is_null()) else {
        set_error("null argument");
        return InvsemiStatus::NullPointer;
    };
    if a >= s.order() || b >= s.order() {
        set_error(format!("element out of range for order {}", s.order()));
        return InvsemiStatus::OutOfRange;
    }
    *out = s.mul(a, b);
    InvsemiStatus::Ok
}

/// # Safety
/// `s` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn invsemi_semigroup_inverse(
    s: *const InvsemiSemigroup,
    a: usize,
    out: *mut usize,
) -> InvsemiStatus {
    let (Some(s), false) = (handle(s), out.is_null()) else {
        set_error("null argument");
        return InvsemiStatus::NullPointer;
    };
    if a >= s.order() {
        set_error(format!("element out of range for order {}", s.order()));
        return InvsemiStatus::OutOfRange;
    }
    *out = s.inv(a);
    InvsemiStatus::Ok
}

/// The instance JSON of `s`, with inverses and idempotents.
///
/// # Safety
/// `s` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn invsemi_semigroup_to_json(
    s: *const InvsemiSemigroup,
    out: *mut *mut c_char,
) -> InvsemiStatus {
    guard(|| {
        let (Some(s), false) = (handle(s), out.is_null()) else {
            set_error("null argument");
            return InvsemiStatus::NullPointer;
        };
        let text =
            serde_json::to_string(&InstanceJson::from_semigroup(s)).expect("instances serialize");
        give_string(out, text)
    })
}

/// Number of congruences of `s`.
///
/// # Safety
/// `s` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn invsemi_congruence_count(
    s: *const InvsemiSemigroup,
    out: *mut usize,
) -> InvsemiStatus {
    guard(|| {
        let (Some(s), false) = (handle(s), out.is_null()) else {
            set_error("null argument");
            return InvsemiStatus::NullPointer;
        };
        match enumerate_congruences(s) {
            Ok(all) => {
                *out = all.len();
                InvsemiStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Class labels of the `index`-th congruence in sorted order, written to
/// `labels[0..order]`.
///
/// # Safety
/// `s` must be a live handle and `labels` must have room for `order`
/// values.
#[no_mangle]
pub unsafe extern "C" fn invsemi_congruence_labels(
    s: *const InvsemiSemigroup,
    index: usize,
    labels: *mut usize,
) -> InvsemiStatus {
    guard(|| {
        let (Some(s), false) = (handle(s), labels.is_null()) else {
            set_error("null argument");
            return InvsemiStatus::NullPointer;
        };
        let all = match enumerate_congruences(s) {
            Ok(a) => a,
            Err(e) => return fail(e),
        };
        let Some(theta) = all.get(index) else {
            set_error(format!("only {} congruences", all.len()));
            return InvsemiStatus::OutOfRange;
        };
        let dst = std::slice::from_raw_parts_mut(labels, s.order());
        dst.copy_from_slice(&theta.labels());
        InvsemiStatus::Ok
    })
}

/// `|Ω(S)|`, the order of the translational hull.
///
/// # Safety
/// `s` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn invsemi_hull_order(
    s: *const InvsemiSemigroup,
    out: *mut usize,
) -> InvsemiStatus {
    guard(|| {
        let (Some(s), false) = (handle(s), out.is_null()) else {
            set_error("null argument");
            return InvsemiStatus::NullPointer;
        };
        match enumerate_hull(s) {
            Ok(h) => {
                *out = h.order();
                InvsemiStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

unsafe fn read_action(
    k: &InverseSemigroup,
    t: &InverseSemigroup,
    act: *const u32,
) -> Result<EndoAction, InvsemiStatus> {
    if act.is_null() {
        set_error("null action");
        return Err(InvsemiStatus::NullPointer);
    }
    let cells = std::slice::from_raw_parts(act, t.order() * k.order());
    let rows: Vec<Vec<usize>> = cells
        .chunks(k.order())
        .map(|r| r.iter().map(|&x| x as usize).collect())
        .collect();
    EndoAction::validate(t.clone(), k.clone(), &rows).map_err(fail)
}

/// `K ⋊^λ T` for the action given row-major as `act[t * |K| + a] = t·a`.
///
/// # Safety
/// `k` and `t` must be live handles, `act` must hold `|T| * |K|` values and
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn invsemi_lsd(
    k: *const InvsemiSemigroup,
    t: *const InvsemiSemigroup,
    act: *const u32,
    out: *mut *mut InvsemiSemigroup,
) -> InvsemiStatus {
    guard(|| {
        let (Some(k), Some(t), false) = (handle(k), handle(t), out.is_null()) else {
            set_error("null argument");
            return InvsemiStatus::NullPointer;
        };
        let action = match read_action(k, t, act) {
            Ok(a) => a,
            Err(s) => return s,
        };
        match build_lsd(&action) {
            Ok(p) => give(out, p.semigroup),
            Err(e) => fail(e),
        }
    })
}

/// The full restricted semidirect product for an action and `ε: K → E(T)`.
/// Returns `FAILED` when (AFR) does not hold.
///
/// # Safety
/// As for [`invsemi_lsd`], and `eps` must hold `|K|` values.
#[no_mangle]
pub unsafe extern "C" fn invsemi_rsd(
    k: *const InvsemiSemigroup,
    t: *const InvsemiSemigroup,
    act: *const u32,
    eps: *const u32,
    out: *mut *mut InvsemiSemigroup,
) -> InvsemiStatus {
    guard(|| {
        let (Some(k), Some(t), false, false) = (handle(k), handle(t), eps.is_null(), out.is_null())
        else {
            set_error("null argument");
            return InvsemiStatus::NullPointer;
        };
        let action = match read_action(k, t, act) {
            Ok(a) => a,
            Err(s) => return s,
        };
        let map: Vec<usize> = std::slice::from_raw_parts(eps, k.order())
            .iter()
            .map(|&x| x as usize)
            .collect();
        let eps = match EpsilonMap::new(&action, map) {
            Ok(e) => e,
            Err(e) => return fail(e),
        };
        match build_rsd(&action, &eps) {
            Ok(p) => give(out, p.semigroup),
            Err(e @ Error::AfrViolated { .. }) => {
                set_error(e.to_string());
                InvsemiStatus::Failed
            }
            Err(e) => fail(e),
        }
    })
}

/// Searches for a (split) almost Billhardt transversal of `(S, θ)` with
/// `θ` given by class labels. On success writes the certificate JSON;
/// returns `FAILED` when none exists.
///
/// # Safety
/// `s` must be a live handle, `labels` must hold `order` values and `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn invsemi_billhardt_find(
    s: *const InvsemiSemigroup,
    labels: *const usize,
    split: bool,
    out: *mut *mut c_char,
) -> InvsemiStatus {
    guard(|| {
        let (Some(s), false, false) = (handle(s), labels.is_null(), out.is_null()) else {
            set_error("null argument");
            return InvsemiStatus::NullPointer;
        };
        let labels = std::slice::from_raw_parts(labels, s.order());
        let result = is_congruence(s, labels)
            .and_then(|theta| ExtensionSolution::new(s.clone(), theta))
            .and_then(|sol| hull_of_extension(&sol).map(|eh| (sol, eh)));
        let (sol, eh) = match result {
            Ok(x) => x,
            Err(e) => return fail(e),
        };
        match find_transversal(&eh, split) {
            Some(xi) => {
                let text =
                    serde_json::to_string(&xi.to_json(&sol)).expect("certificates serialize");
                give_string(out, text)
            }
            None => {
                set_error(if split {
                    "no split almost Billhardt transversal"
                } else {
                    "no almost Billhardt transversal"
                });
                InvsemiStatus::Failed
            }
        }
    })
}

/// Runs a verifier suite (`"thm-3.10"`, `"all"`, …) and writes the JSON
/// report. Returns `OK` when every check passes and `FAILED` otherwise; the
/// report is written in both cases.
///
/// # Safety
/// `suite` must be a NUL-terminated string and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn invsemi_verify(
    suite: *const c_char,
    max_order: usize,
    seed: u64,
    out: *mut *mut c_char,
) -> InvsemiStatus {
    guard(|| {
        let suite = match read_str(suite) {
            Ok(t) => t,
            Err(s) => return s,
        };
        if out.is_null() {
            set_error("null argument");
            return InvsemiStatus::NullPointer;
        }
        let bounds = Bounds {
            max_order,
            seed,
            ..Bounds::default()
        };
        let report = match run_suite(suite, &bounds) {
            Ok(r) => r,
            Err(e) => return fail(e),
        };
        let passed = report.passed();
        let status = give_string(
            out,
            serde_json::to_string(&report).expect("reports serialize"),
        );
        if status != InvsemiStatus::Ok {
            return status;
        }
        if passed {
            InvsemiStatus::Ok
        } else {
            set_error("a check failed");
            InvsemiStatus::Failed
        }
    })
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn invsemi_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
