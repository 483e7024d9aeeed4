//! C ABI over `irjoint`.
//!
//! Objects are opaque handles created by `irj_*_new` and released with the
//! matching `irj_*_free`. Every fallible call returns an [`IrjStatus`] and
//! writes results through out-pointers; on failure the message is available
//! from [`irj_last_error`] on the same thread. Strings returned by the library
//! must be released with [`irj_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use irjoint::chain::{self, ChainSpec, SimulationMode};
use irjoint::tendon::{self, BuckleThreshold, TendonRoute};
use irjoint::{BendingDirection, Error, JointSpec, SectionSpec};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IrjStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Domain = 3,
    MomentOutOfRange = 4,
    LimitViolation = 5,
    DegenerateRoute = 6,
    TooFewSamples = 7,
    InsufficientSpan = 8,
    EmptyReport = 9,
    SpaceTooLarge = 10,
    Unit = 11,
    InvalidUtf8 = 12,
    Json = 13,
    Panic = 14,
}

impl From<&Error> for IrjStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidInput { .. } => IrjStatus::InvalidInput,
            Error::Domain { .. } => IrjStatus::Domain,
            Error::MomentOutOfRange { .. } => IrjStatus::MomentOutOfRange,
            Error::LimitViolation { .. } => IrjStatus::LimitViolation,
            Error::DegenerateRoute(_) => IrjStatus::DegenerateRoute,
            Error::TooFewSamples { .. } => IrjStatus::TooFewSamples,
            Error::InsufficientSpan(_) => IrjStatus::InsufficientSpan,
            Error::EmptyReport => IrjStatus::EmptyReport,
            Error::SpaceTooLarge { .. } => IrjStatus::SpaceTooLarge,
            Error::Unit(_) => IrjStatus::Unit,
        }
    }
}

/// Cross-section of an inflated beam.
pub struct IrjSection {
    inner: SectionSpec,
}

/// Joint: section plus length, wrinkle strain and moment-rotation law.
pub struct IrjJoint {
    inner: JointSpec,
}

/// Serial chain of joints with tendon routes.
pub struct IrjChain {
    inner: ChainSpec,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(IrjStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure((&e).into(), e.to_string())
    }
}

fn null() -> Failure {
    Failure(IrjStatus::NullPointer, "null pointer argument".into())
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> IrjStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => IrjStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            IrjStatus::Panic
        }
    }
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

unsafe fn get<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(null)
}

/// Message of the last failed call on this thread, or NULL. Free with
/// [`irj_string_free`].
#[no_mangle]
pub extern "C" fn irj_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |c| c.clone().into_raw()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn irj_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Moment scale factor of a band whose tensioned region spans `[theta0, theta2]`.
///
/// # Safety
/// `out` must be a valid pointer to a `double`.
#[no_mangle]
pub unsafe extern "C" fn irj_moment_scale_factor(theta0: f64, theta2: f64, out: *mut f64) -> IrjStatus {
    guard(|| put(out, irjoint::moment_scale_factor(theta0, theta2)?))
}

/// Soft/stiff plateau ratio of a band of width `delta_theta`.
///
/// # Safety
/// `out` must be a valid pointer to a `double`.
#[no_mangle]
pub unsafe extern "C" fn irj_stiffness_ratio(delta_theta: f64, out: *mut f64) -> IrjStatus {
    guard(|| put(out, irjoint::stiffness_ratio(delta_theta)?))
}

/// SI units throughout: m, Pa, rad.
///
/// # Safety
/// `out` must be a valid pointer; on success it receives a handle to free
/// with [`irj_section_free`].
#[no_mangle]
pub unsafe extern "C" fn irj_section_new(
    radius: f64,
    thickness: f64,
    pressure: f64,
    theta1: f64,
    theta2: f64,
    out: *mut *mut IrjSection,
) -> IrjStatus {
    guard(|| {
        let inner = SectionSpec::new(radius, thickness, pressure, theta1, theta2)?;
        put(out, Box::into_raw(Box::new(IrjSection { inner })))
    })
}

/// Band of width `delta_theta` centred on the neutral axis.
///
/// # Safety
/// As [`irj_section_new`].
#[no_mangle]
pub unsafe extern "C" fn irj_section_symmetric(
    radius: f64,
    thickness: f64,
    pressure: f64,
    delta_theta: f64,
    out: *mut *mut IrjSection,
) -> IrjStatus {
    guard(|| {
        let inner = SectionSpec::symmetric(radius, thickness, pressure, delta_theta)?;
        put(out, Box::into_raw(Box::new(IrjSection { inner })))
    })
}

/// # Safety
/// `section` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn irj_section_free(section: *mut IrjSection) {
    if !section.is_null() {
        drop(Box::from_raw(section));
    }
}

/// # Safety
/// `section` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn irj_section_max_moment(section: *const IrjSection, out: *mut f64) -> IrjStatus {
    guard(|| put(out, get(section)?.inner.max_restoring_moment()))
}

/// # Safety
/// `section` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn irj_section_onset_moment(section: *const IrjSection, out: *mut f64) -> IrjStatus {
    guard(|| put(out, get(section)?.inner.wrinkle_onset_moment()))
}

/// Wrinkle boundary and peak stress carrying `applied` N*m.
///
/// # Safety
/// `section` must be a live handle; `theta0` and `sigma_m` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn irj_section_solve(
    section: *const IrjSection,
    applied: f64,
    theta0: *mut f64,
    sigma_m: *mut f64,
) -> IrjStatus {
    guard(|| {
        if theta0.is_null() || sigma_m.is_null() {
            return Err(null());
        }
        let state = get(section)?.inner.solve_wrinkle_boundary(applied)?;
        put(theta0, state.theta0)?;
        put(sigma_m, state.sigma_m)
    })
}

/// Joint with the default moment-rotation law. The section is copied.
///
/// # Safety
/// `section` must be a live handle; `out` a valid pointer receiving a handle
/// to free with [`irj_joint_free`].
#[no_mangle]
pub unsafe extern "C" fn irj_joint_new(
    section: *const IrjSection,
    length: f64,
    wrinkle_strain: f64,
    mount_rotation: f64,
    out: *mut *mut IrjJoint,
) -> IrjStatus {
    guard(|| {
        let s = get(section)?.inner;
        let inner =
            JointSpec::with_default_law(s, length, wrinkle_strain, None)?.with_mount_rotation(mount_rotation)?;
        put(out, Box::into_raw(Box::new(IrjJoint { inner })))
    })
}

/// # Safety
/// `joint` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn irj_joint_free(joint: *mut IrjJoint) {
    if !joint.is_null() {
        drop(Box::from_raw(joint));
    }
}

/// # Safety
/// `joint` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn irj_joint_rotation_limit(joint: *const IrjJoint, out: *mut f64) -> IrjStatus {
    guard(|| put(out, get(joint)?.inner.rotation_limit()))
}

/// Plateau moment for deflection direction `psi` (rad from the soft plane).
///
/// # Safety
/// `joint` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn irj_joint_directional_max_moment(
    joint: *const IrjJoint,
    psi: f64,
    out: *mut f64,
) -> IrjStatus {
    guard(|| {
        put(
            out,
            get(joint)?.inner.directional_max_moment(BendingDirection::new(psi)),
        )
    })
}

/// # Safety
/// `joint` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn irj_joint_moment_curve(
    joint: *const IrjJoint,
    psi: f64,
    angle: f64,
    out: *mut f64,
) -> IrjStatus {
    guard(|| {
        let m = get(joint)?
            .inner
            .restoring_moment_curve(BendingDirection::new(psi), angle)?;
        put(out, m)
    })
}

/// Tension at which the joint buckles for a tendon between two plate anchors
/// (m, plate coordinates). `reachable` is false when the tendon exerts no
/// bending moment; `tension` and `direction` are then left untouched.
///
/// # Safety
/// `joint` must be a live handle; the out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn irj_buckle_threshold(
    joint: *const IrjJoint,
    top_x: f64,
    top_y: f64,
    bottom_x: f64,
    bottom_y: f64,
    reachable: *mut bool,
    tension: *mut f64,
    direction: *mut f64,
) -> IrjStatus {
    guard(|| {
        if tension.is_null() || direction.is_null() {
            return Err(null());
        }
        let j = &get(joint)?.inner;
        let route = TendonRoute::new([top_x, top_y], [bottom_x, bottom_y]);
        route.validate(j.section.radius)?;
        match tendon::buckle_threshold(j, &route)? {
            BuckleThreshold::Reachable {
                tension: t,
                direction: d,
            } => {
                put(reachable, true)?;
                put(tension, t)?;
                put(direction, d.psi())
            }
            BuckleThreshold::Unreachable => put(reachable, false),
        }
    })
}

/// Parses a chain from its JSON form (same schema as a `chains` entry of a
/// spec document).
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` a valid pointer receiving a
/// handle to free with [`irj_chain_free`].
#[no_mangle]
pub unsafe extern "C" fn irj_chain_from_json(json: *const c_char, out: *mut *mut IrjChain) -> IrjStatus {
    guard(|| {
        if json.is_null() {
            return Err(null());
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| Failure(IrjStatus::InvalidUtf8, e.to_string()))?;
        let inner: ChainSpec = serde_json::from_str(text).map_err(|e| Failure(IrjStatus::Json, e.to_string()))?;
        put(out, Box::into_raw(Box::new(IrjChain { inner })))
    })
}

/// # Safety
/// `chain` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn irj_chain_free(chain: *mut IrjChain) {
    if !chain.is_null() {
        drop(Box::from_raw(chain));
    }
}

/// # Safety
/// `chain` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn irj_chain_len(chain: *const IrjChain, out: *mut usize) -> IrjStatus {
    guard(|| put(out, get(chain)?.inner.len()))
}

/// Ramps tension to `max_tension` N and writes the sequence report as JSON.
/// `independent` evaluates thresholds in the undeformed chain only.
///
/// # Safety
/// `chain` must be a live handle; `out_json` a valid pointer receiving a
/// string to free with [`irj_string_free`].
#[no_mangle]
pub unsafe extern "C" fn irj_chain_simulate(
    chain: *const IrjChain,
    max_tension: f64,
    independent: bool,
    out_json: *mut *mut c_char,
) -> IrjStatus {
    guard(|| {
        let mode = if independent {
            SimulationMode::Independent
        } else {
            SimulationMode::Coupled
        };
        let report = chain::simulate_ramp(&get(chain)?.inner, max_tension, mode)?;
        let text = serde_json::to_string(&report).expect("reports serialize");
        put(out_json, CString::new(text).expect("JSON has no NUL").into_raw())
    })
}
