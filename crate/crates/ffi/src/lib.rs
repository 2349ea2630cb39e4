//! C ABI over the `hsem` library.
//!
//! Every fallible call returns an [`HsemStatus`] and writes results through
//! out-pointers. On failure the message is kept per thread and can be read
//! with [`hsem_last_error_message`]. Operators are opaque handles created by
//! [`hsem_operator_new`] and released with [`hsem_operator_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hsem::epstein::{c_n, epstein_z0_square, InteractionExponent};
use hsem::hsem::{apply_operator, build_operator, hadamard_gaussian, hsem_sum_with, GaussianField};
use hsem::oracle::brute_force_sum;
use hsem::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HsemStatus {
    Ok = 0,
    NullPointer = 1,
    /// Argument outside the supported domain.
    Domain = 2,
    /// Exponent on a pole of the requested quantity.
    Pole = 3,
    /// Order too high or too low, or the field is not smooth enough.
    Order = 4,
    /// A series that must converge does not, or failed to within its budget.
    Convergence = 5,
    /// The computation would exceed the lattice point cap.
    TooLarge = 6,
    /// A Rust panic was caught at the boundary.
    Panic = 7,
}

/// Pieces of one expansion evaluation.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HsemSumResult {
    pub value: f64,
    pub operator_term: f64,
    pub hadamard_term: f64,
    pub error_bound: f64,
}

/// Opaque operator handle.
pub struct HsemOperator(hsem::hsem::HsemOperator);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> HsemStatus {
    match err {
        Error::AtPole { .. } | Error::AtGammaPole { .. } | Error::PoleAtNonpositiveInteger(_) | Error::PoleAtOne => {
            HsemStatus::Pole
        }
        Error::OrderTooHigh { .. } | Error::OrderTooLow { .. } | Error::InsufficientSmoothness { .. } => {
            HsemStatus::Order
        }
        Error::NotConvergent { .. } | Error::ConvergenceFailure { .. } => HsemStatus::Convergence,
        Error::BallTooLarge { .. } => HsemStatus::TooLarge,
        Error::SingularBasis { .. } | Error::Domain(_) | Error::InvalidB(_) | Error::EpsilonTooLarge { .. } => {
            HsemStatus::Domain
        }
    }
}

/// Runs `f` behind a panic guard and records any error message.
fn guarded(f: impl FnOnce() -> Result<(), Failure>) -> HsemStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HsemStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_last_error(format!("{what} must not be null"));
            HsemStatus::NullPointer
        }
        Ok(Err(Failure::Lib(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_last_error("internal panic".into());
            HsemStatus::Panic
        }
    }
}

enum Failure {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self::Lib(e)
    }
}

/// Writes through `out` after checking it.
unsafe fn write<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    out.write(value);
    Ok(())
}

/// Message of the last failed call on this thread, or NULL if none failed.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn hsem_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hsem_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Epstein zeta Z_0(nu) of Z^2 with an absolute error bound.
///
/// # Safety
/// `out_value` and `out_error` must be valid for writes; `out_error` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn hsem_epstein_z0(nu: f64, out_value: *mut f64, out_error: *mut f64) -> HsemStatus {
    guarded(|| {
        let z = epstein_z0_square(InteractionExponent::new(nu)?)?;
        write(out_value, z.value, "out_value")?;
        if !out_error.is_null() {
            out_error.write(z.abs_error_bound);
        }
        Ok(())
    })
}

/// Moment sum C_n(nu) = sum' z1^{2n} / |z|^{nu+2n} over Z^2, continued in nu.
///
/// # Safety
/// As for [`hsem_epstein_z0`].
#[no_mangle]
pub unsafe extern "C" fn hsem_c_n(n: u32, nu: f64, out_value: *mut f64, out_error: *mut f64) -> HsemStatus {
    guarded(|| {
        let c = c_n(n as usize, InteractionExponent::new(nu)?)?;
        write(out_value, c.value, "out_value")?;
        if !out_error.is_null() {
            out_error.write(c.abs_error_bound);
        }
        Ok(())
    })
}

/// Builds the expansion operator of the given order on the lattice h Z^2.
///
/// # Safety
/// `out` must be valid for writes. The handle written there must be released
/// with [`hsem_operator_free`].
#[no_mangle]
pub unsafe extern "C" fn hsem_operator_new(
    order: u32,
    nu: f64,
    h: f64,
    out: *mut *mut HsemOperator,
) -> HsemStatus {
    guarded(|| {
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let op = build_operator(order as usize, InteractionExponent::new(nu)?, h)?;
        out.write(Box::into_raw(Box::new(HsemOperator(op))));
        Ok(())
    })
}

/// Releases an operator. NULL is accepted and ignored.
///
/// # Safety
/// `op` must come from [`hsem_operator_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn hsem_operator_free(op: *mut HsemOperator) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

/// Order of the operator, or 0 for NULL.
///
/// # Safety
/// `op` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hsem_operator_order(op: *const HsemOperator) -> u32 {
    op.as_ref().map_or(0, |o| o.0.order() as u32)
}

/// Coefficient of d1^{2p} d2^{2q}; Domain if p + q exceeds the order.
///
/// # Safety
/// `op` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hsem_operator_coeff(
    op: *const HsemOperator,
    p: u32,
    q: u32,
    out: *mut f64,
) -> HsemStatus {
    guarded(|| {
        let op = op.as_ref().ok_or(Failure::Null("op"))?;
        let c = op.0.coeff(p as usize, q as usize).ok_or_else(|| {
            Error::Domain(format!("p + q = {} exceeds the order {}", p + q, op.0.order()))
        })?;
        write(out, c, "out")
    })
}

/// Applies the operator to amplitude * exp(-|y - c|^2 / width^2) at (x, y).
///
/// # Safety
/// `op` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hsem_operator_apply_gaussian(
    op: *const HsemOperator,
    width: f64,
    center_x: f64,
    center_y: f64,
    amplitude: f64,
    x: f64,
    y: f64,
    out: *mut f64,
) -> HsemStatus {
    guarded(|| {
        let op = op.as_ref().ok_or(Failure::Null("op"))?;
        let field = gaussian(width, center_x, center_y, amplitude)?;
        write(out, apply_operator(&op.0, &field, [x, y])?, "out")
    })
}

fn gaussian(width: f64, cx: f64, cy: f64, amplitude: f64) -> Result<GaussianField, Error> {
    if width.is_nan() || width <= 0.0 {
        return Err(Error::Domain(format!("Gaussian width must be positive, got {width}")));
    }
    Ok(GaussianField::new(width)
        .with_center([cx, cy])
        .with_amplitude(amplitude))
}

/// Finite-part integral over u of exp(-|u|^2 / width^2) / |p - u|^nu, p = (x, y).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hsem_hadamard_gaussian(nu: f64, width: f64, x: f64, y: f64, out: *mut f64) -> HsemStatus {
    guarded(|| write(out, hadamard_gaussian(nu, width, [x, y])?, "out"))
}

/// Expansion of sum'_{y in h Z^2} exp(-|y|^2 / width^2) / |y - h s|^nu at the
/// site s = (site_x, site_y), using the operator's nu, order and spacing.
///
/// # Safety
/// `op` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hsem_sum_gaussian(
    op: *const HsemOperator,
    width: f64,
    site_x: i64,
    site_y: i64,
    out: *mut HsemSumResult,
) -> HsemStatus {
    guarded(|| {
        let op = op.as_ref().ok_or(Failure::Null("op"))?;
        let field = gaussian(width, 0.0, 0.0, 1.0)?;
        let s = hsem_sum_with(&op.0, &field, [site_x, site_y])?;
        write(
            out,
            HsemSumResult {
                value: s.value,
                operator_term: s.operator_term,
                hadamard_term: s.hadamard_term,
                error_bound: s.error_bound,
            },
            "out",
        )
    })
}

/// Direct sum'_{y in Z^2} exp(-|y|^2 / width^2) / |y - s|^nu truncated where
/// the certified tail drops below `tol`.
///
/// # Safety
/// `out_value` must be valid for writes; `out_tail_bound` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn hsem_brute_force_sum(
    nu: f64,
    width: f64,
    site_x: i64,
    site_y: i64,
    tol: f64,
    out_value: *mut f64,
    out_tail_bound: *mut f64,
) -> HsemStatus {
    guarded(|| {
        let field = gaussian(width, 0.0, 0.0, 1.0)?;
        let s = brute_force_sum(nu, &field, [site_x, site_y], tol)?;
        write(out_value, s.value, "out_value")?;
        if !out_tail_bound.is_null() {
            out_tail_bound.write(s.tail_bound);
        }
        Ok(())
    })
}
