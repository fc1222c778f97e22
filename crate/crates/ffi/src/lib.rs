//! C interface to boxlab.
//!
//! Boxes and reports are opaque heap handles released with the matching
//! `*_free` function. Every fallible call returns a `BoxlabStatus`; on failure
//! `boxlab_last_error` describes the most recent error on the calling thread.
//! Probability tables cross the boundary as row-major `double` arrays in
//! dictionary order (64 entries for three parties, 16 for two).

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use boxlab::bell::{chsh_max, chsh_value, ChshVariant};
use boxlab::classify::{classify_full, membership, ClassificationReport, HierarchyClass};
use boxlab::constructors::{
    ghz_box, noise_box, p_eps_alpha, p_eps_left, p_eps_right, pr_box, EpsParams,
    MeasurementAssignment, PrVariant,
};
use boxlab::format::{deserialize, serialize, AnyBox};
use boxlab::tensor::{no_signaling_check, Box2, Box3, ProbTable};
use boxlab::wiring::{wire_2to3, wire_3to2};
use boxlab::Error;

/// Opaque three-party box.
pub struct BoxlabBox3(Box3);

/// Opaque two-party box.
pub struct BoxlabBox2(Box2);

/// Opaque classification report.
pub struct BoxlabReport(ClassificationReport);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoxlabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    InvalidBox = 4,
    Unsupported = 5,
    Numerical = 6,
    Inconsistent = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoxlabClass {
    Fl = 0,
    Nsbl = 1,
    Tobl = 2,
    AtoblLeft = 3,
    AtoblRight = 4,
    AtoblUnion = 5,
    AtoblHull = 6,
    Bl = 7,
    Ns = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoxlabProtocol {
    /// Party 2 answers first and its output becomes party 3's input.
    TwoToThree = 0,
    /// Party 3 answers first and its output becomes party 2's input.
    ThreeToTwo = 1,
}

impl From<BoxlabClass> for HierarchyClass {
    fn from(c: BoxlabClass) -> Self {
        HierarchyClass::ALL[c as usize]
    }
}

impl From<HierarchyClass> for BoxlabClass {
    fn from(c: HierarchyClass) -> Self {
        use BoxlabClass::*;
        [Fl, Nsbl, Tobl, AtoblLeft, AtoblRight, AtoblUnion, AtoblHull, Bl, Ns]
            [HierarchyClass::ALL.iter().position(|x| *x == c).unwrap()]
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(BoxlabStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Parse(_) => BoxlabStatus::Parse,
            Error::NegativeProbability { .. } | Error::NotNormalized { .. } | Error::Shape(_) => {
                BoxlabStatus::InvalidBox
            }
            Error::BadWeights(_) | Error::InvalidParameter(_) => BoxlabStatus::InvalidArgument,
            Error::UnsupportedClass(_) => BoxlabStatus::Unsupported,
            Error::NumericalFailure(_) => BoxlabStatus::Numerical,
            Error::HierarchyInconsistency(_) => BoxlabStatus::Inconsistent,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(BoxlabStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> BoxlabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BoxlabStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            BoxlabStatus::Panic
        }
    }
}

unsafe fn get<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output handle"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = value;
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn boxlab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn boxlab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `b` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn boxlab_box3_free(b: *mut BoxlabBox3) {
    if !b.is_null() {
        drop(Box::from_raw(b));
    }
}

/// # Safety
/// `b` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn boxlab_box2_free(b: *mut BoxlabBox2) {
    if !b.is_null() {
        drop(Box::from_raw(b));
    }
}

/// # Safety
/// `r` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn boxlab_report_free(r: *mut BoxlabReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Validates 64 row-major probabilities into a box. Entries in `[-tol, 0)`
/// are clamped to zero.
///
/// # Safety
/// `values` must point to 64 readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn boxlab_box3_new(
    values: *const f64,
    tol: f64,
    out: *mut *mut BoxlabBox3,
) -> BoxlabStatus {
    guard(|| {
        let v = get(values, "values")?;
        let b = Box3::from_flat(std::slice::from_raw_parts(v, 64), tol)?;
        put(out, BoxlabBox3(b))
    })
}

/// Copies the 64 probabilities into `out`.
///
/// # Safety
/// `b` must be a live handle; `out` must have room for 64 doubles.
#[no_mangle]
pub unsafe extern "C" fn boxlab_box3_probabilities(b: *const BoxlabBox3, out: *mut f64) -> BoxlabStatus {
    guard(|| {
        let b = get(b, "box")?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        ptr::copy_nonoverlapping(b.0.flat().as_ptr(), out, 64);
        Ok(())
    })
}

/// # Safety
/// `values` must point to 16 readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn boxlab_box2_new(
    values: *const f64,
    tol: f64,
    out: *mut *mut BoxlabBox2,
) -> BoxlabStatus {
    guard(|| {
        let v = get(values, "values")?;
        let b = Box2::from_flat(std::slice::from_raw_parts(v, 16), tol)?;
        put(out, BoxlabBox2(b))
    })
}

/// # Safety
/// `b` must be a live handle; `out` must have room for 16 doubles.
#[no_mangle]
pub unsafe extern "C" fn boxlab_box2_probabilities(b: *const BoxlabBox2, out: *mut f64) -> BoxlabStatus {
    guard(|| {
        let b = get(b, "box")?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        ptr::copy_nonoverlapping(b.0.flat().as_ptr(), out, 16);
        Ok(())
    })
}

/// GHZ box with the default measurements.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn boxlab_ghz(out: *mut *mut BoxlabBox3) -> BoxlabStatus {
    guard(|| put(out, BoxlabBox3(ghz_box(&MeasurementAssignment::default()))))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn boxlab_noise(out: *mut *mut BoxlabBox3) -> BoxlabStatus {
    guard(|| put(out, BoxlabBox3(noise_box())))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn boxlab_peps_left(eps: f64, out: *mut *mut BoxlabBox3) -> BoxlabStatus {
    guard(|| put(out, BoxlabBox3(p_eps_left(&EpsParams::new(eps)?))))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn boxlab_peps_right(eps: f64, out: *mut *mut BoxlabBox3) -> BoxlabStatus {
    guard(|| put(out, BoxlabBox3(p_eps_right(&EpsParams::new(eps)?))))
}

/// `alpha * left + (1 - alpha) * right`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn boxlab_peps_alpha(eps: f64, alpha: f64, out: *mut *mut BoxlabBox3) -> BoxlabStatus {
    guard(|| put(out, BoxlabBox3(p_eps_alpha(&EpsParams::new(eps)?, alpha)?)))
}

/// PR box with `o xor o' = i i' xor a i xor b i' xor g`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn boxlab_pr(a: u8, b: u8, g: u8, out: *mut *mut BoxlabBox2) -> BoxlabStatus {
    guard(|| put(out, BoxlabBox2(pr_box(PrVariant::new(a, b, g)?))))
}

/// # Safety
/// `b` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn boxlab_wire(
    b: *const BoxlabBox3,
    protocol: BoxlabProtocol,
    out: *mut *mut BoxlabBox2,
) -> BoxlabStatus {
    guard(|| {
        let b = &get(b, "box")?.0;
        let q = match protocol {
            BoxlabProtocol::TwoToThree => wire_2to3(b),
            BoxlabProtocol::ThreeToTwo => wire_3to2(b),
        };
        put(out, BoxlabBox2(q))
    })
}

/// CHSH value under the canonical sign pattern `+,+,-,+`.
///
/// # Safety
/// `b` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn boxlab_chsh(b: *const BoxlabBox2, out: *mut f64) -> BoxlabStatus {
    guard(|| write(out, chsh_value(&get(b, "box")?.0, ChshVariant::CANONICAL)))
}

/// Largest CHSH value over the eight sign patterns.
///
/// # Safety
/// `b` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn boxlab_chsh_max(b: *const BoxlabBox2, out: *mut f64) -> BoxlabStatus {
    guard(|| write(out, chsh_max(&get(b, "box")?.0)))
}

/// # Safety
/// `b` must be a live handle; `is_ns` and `max_violation` must be writable.
#[no_mangle]
pub unsafe extern "C" fn boxlab_no_signaling(
    b: *const BoxlabBox3,
    tol: f64,
    is_ns: *mut bool,
    max_violation: *mut f64,
) -> BoxlabStatus {
    guard(|| {
        let r = no_signaling_check(&get(b, "box")?.0, tol);
        write(is_ns, r.is_ns)?;
        write(max_violation, r.max_violation)
    })
}

/// Certified membership test; `is_in` receives the verdict.
///
/// # Safety
/// `b` must be a live handle; `is_in` must be writable.
#[no_mangle]
pub unsafe extern "C" fn boxlab_membership(
    b: *const BoxlabBox3,
    class: BoxlabClass,
    tol: f64,
    is_in: *mut bool,
) -> BoxlabStatus {
    guard(|| {
        let r = membership(&get(b, "box")?.0, class.into(), tol)?;
        write(is_in, r.is_in())
    })
}

/// # Safety
/// `b` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn boxlab_classify(
    b: *const BoxlabBox3,
    tol: f64,
    out: *mut *mut BoxlabReport,
) -> BoxlabStatus {
    guard(|| put(out, BoxlabReport(classify_full(&get(b, "box")?.0, tol)?)))
}

/// # Safety
/// `r` must be a live handle; `is_in` must be writable.
#[no_mangle]
pub unsafe extern "C" fn boxlab_report_verdict(
    r: *const BoxlabReport,
    class: BoxlabClass,
    is_in: *mut bool,
) -> BoxlabStatus {
    guard(|| write(is_in, get(r, "report")?.0.is_in(class.into())))
}

/// Writes the smallest class containing the box; `found` is false when the
/// box is in no class (it signals outside the BL decomposition).
///
/// # Safety
/// `r` must be a live handle; `found` and `class` must be writable.
#[no_mangle]
pub unsafe extern "C" fn boxlab_report_finest_class(
    r: *const BoxlabReport,
    found: *mut bool,
    class: *mut BoxlabClass,
) -> BoxlabStatus {
    guard(|| {
        let finest = get(r, "report")?.0.finest_class;
        write(found, finest.is_some())?;
        if let Some(c) = finest {
            write(class, c.into())?;
        }
        Ok(())
    })
}

/// Full report as JSON, including certificates. Free with
/// `boxlab_string_free`.
///
/// # Safety
/// `r` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn boxlab_report_json(r: *const BoxlabReport, out: *mut *mut c_char) -> BoxlabStatus {
    guard(|| {
        let text = serde_json::to_string(&get(r, "report")?.0)
            .map_err(|e| Failure(BoxlabStatus::Numerical, e.to_string()))?;
        write(out, into_c_string(text))
    })
}

/// Box file text for a three-party box. Free with `boxlab_string_free`.
///
/// # Safety
/// `b` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn boxlab_box3_to_text(b: *const BoxlabBox3, out: *mut *mut c_char) -> BoxlabStatus {
    guard(|| write(out, into_c_string(serialize(&AnyBox::Three(get(b, "box")?.0.clone())))))
}

/// # Safety
/// `b` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn boxlab_box2_to_text(b: *const BoxlabBox2, out: *mut *mut c_char) -> BoxlabStatus {
    guard(|| write(out, into_c_string(serialize(&AnyBox::Two(get(b, "box")?.0.clone())))))
}

fn parse_text(text: *const c_char) -> Result<AnyBox, Failure> {
    if text.is_null() {
        return Err(null("text"));
    }
    let s = unsafe { CStr::from_ptr(text) }
        .to_str()
        .map_err(|e| Failure(BoxlabStatus::Parse, format!("text is not UTF-8: {e}")))?;
    Ok(deserialize(s)?)
}

/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn boxlab_box3_from_text(text: *const c_char, out: *mut *mut BoxlabBox3) -> BoxlabStatus {
    guard(|| put(out, BoxlabBox3(parse_text(text)?.into_box3()?)))
}

/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn boxlab_box2_from_text(text: *const c_char, out: *mut *mut BoxlabBox2) -> BoxlabStatus {
    guard(|| put(out, BoxlabBox2(parse_text(text)?.into_box2()?)))
}
