//! C ABI over `qfilter`.
//!
//! States are opaque heap handles released with `qf_state_free`. Every
//! fallible call returns a `QfStatus`; on failure the message is available
//! from `qf_last_error_message` on the same thread until the next call.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use qfilter::qmat::{ComplexMatrix, C64};
use qfilter::{
    apply_filters, bell_state, concurrence, correlation_matrix, mutual_information,
    optimal_magnitude, optimal_orientation, pauli_channel_state, sweep, BellLabel, DensityMatrix,
    Error, FilterElement, PauliNoiseSpec, Strategy, UnitVector,
};

/// Opaque two-qubit (or single-qubit) density matrix.
pub struct QfState(DensityMatrix);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// The filters annihilated the state.
    Blocked = 3,
    /// Non-physical input or a numerical failure.
    Numerical = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QfNoise {
    BitFlip = 0,
    PhaseFlip = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QfStrategy {
    None = 0,
    Match = 1,
    Optimal = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QfBell {
    PhiPlus = 0,
    PhiMinus = 1,
    PsiPlus = 2,
    PsiMinus = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct QfSweepPoint {
    pub gamma_a: f64,
    pub gamma_b: f64,
    pub mutual_info_bits: f64,
    pub concurrence: f64,
    pub transmission: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(QfStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Blocked(_) => QfStatus::Blocked,
            Error::InvalidParameter(_)
            | Error::NotUnitVector(_)
            | Error::InvalidQubit(_)
            | Error::UnknownBellLabel(_)
            | Error::Dimension { .. }
            | Error::UnsupportedDimension(_) => QfStatus::InvalidArgument,
            _ => QfStatus::Numerical,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(QfStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> QfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            QfStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            QfStatus::Panic
        }
    }
}

unsafe fn state_ref<'a>(s: *const QfState) -> Result<&'a DensityMatrix, Failure> {
    s.as_ref().map(|s| &s.0).ok_or_else(|| null("state"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_state(out: *mut *mut QfState, rho: DensityMatrix) -> Result<(), Failure> {
    write_out(out, Box::into_raw(Box::new(QfState(rho))))
}

unsafe fn read_axis(axis: *const f64) -> Result<UnitVector, Failure> {
    if axis.is_null() {
        return Err(null("axis"));
    }
    let v = std::slice::from_raw_parts(axis, 3);
    Ok(UnitVector::new([v[0], v[1], v[2]])?)
}

fn noise_spec(noise: QfNoise, p: f64) -> Result<PauliNoiseSpec, Failure> {
    Ok(match noise {
        QfNoise::BitFlip => PauliNoiseSpec::bit_flip(p)?,
        QfNoise::PhaseFlip => PauliNoiseSpec::phase_flip(p)?,
    })
}

/// Message for the last failed call on this thread; empty after success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn qf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// One of the four Bell states.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qf_state_new_bell(label: QfBell, out: *mut *mut QfState) -> QfStatus {
    guard(|| {
        let l = match label {
            QfBell::PhiPlus => BellLabel::PhiPlus,
            QfBell::PhiMinus => BellLabel::PhiMinus,
            QfBell::PsiPlus => BellLabel::PsiPlus,
            QfBell::PsiMinus => BellLabel::PsiMinus,
        };
        write_state(out, bell_state(l))
    })
}

/// `phi+` after bit-flip or phase-flip noise of weight `p` on qubit A.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qf_state_new_pauli_noise(noise: QfNoise, p: f64, out: *mut *mut QfState) -> QfStatus {
    guard(|| write_state(out, pauli_channel_state(&noise_spec(noise, p)?)))
}

/// Builds a state from `2 * dim * dim` doubles, row-major, interleaved
/// `(re, im)`. `dim` must be 2 or 4. The matrix is validated.
///
/// # Safety
/// `entries` must point to `2 * dim * dim` readable doubles; `out` must be
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qf_state_from_matrix(dim: usize, entries: *const f64, out: *mut *mut QfState) -> QfStatus {
    guard(|| {
        if dim != 2 && dim != 4 {
            return Err(Error::UnsupportedDimension(dim).into());
        }
        if entries.is_null() {
            return Err(null("entries"));
        }
        let raw = std::slice::from_raw_parts(entries, 2 * dim * dim);
        let z: Vec<C64> = raw.chunks_exact(2).map(|c| C64::new(c[0], c[1])).collect();
        let rho = DensityMatrix::new(ComplexMatrix::new(dim, &z)?)?;
        write_state(out, rho)
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `state` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qf_state_free(state: *mut QfState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// # Safety
/// `state` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qf_state_dim(state: *const QfState, out: *mut usize) -> QfStatus {
    guard(|| write_out(out, state_ref(state)?.dim()))
}

/// Copies the matrix into `buf` in the layout of `qf_state_from_matrix`.
///
/// # Safety
/// `buf` must be writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn qf_state_get_matrix(state: *const QfState, buf: *mut f64, len: usize) -> QfStatus {
    guard(|| {
        let rho = state_ref(state)?;
        let n = 2 * rho.dim() * rho.dim();
        if buf.is_null() {
            return Err(null("buffer"));
        }
        if len < n {
            return Err(Failure(QfStatus::BufferTooSmall, format!("need {n} doubles, got {len}")));
        }
        let out = std::slice::from_raw_parts_mut(buf, n);
        for (pair, z) in out.chunks_exact_mut(2).zip(rho.matrix().entries()) {
            pair[0] = z.re;
            pair[1] = z.im;
        }
        Ok(())
    })
}

/// Quantum mutual information in bits.
///
/// # Safety
/// `state` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qf_state_mutual_information(state: *const QfState, out: *mut f64) -> QfStatus {
    guard(|| write_out(out, mutual_information(state_ref(state)?)?))
}

/// # Safety
/// `state` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qf_state_concurrence(state: *const QfState, out: *mut f64) -> QfStatus {
    guard(|| write_out(out, concurrence(state_ref(state)?)?))
}

/// Applies filters of strength `gamma_a`, `gamma_b` along the unit 3-vectors
/// `axis_a`, `axis_b`. Writes a new handle and the transmission probability.
///
/// # Safety
/// `axis_a` and `axis_b` must point to 3 doubles; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn qf_apply_filters(
    state: *const QfState,
    gamma_a: f64,
    axis_a: *const f64,
    gamma_b: f64,
    axis_b: *const f64,
    out_state: *mut *mut QfState,
    out_transmission: *mut f64,
) -> QfStatus {
    guard(|| {
        let rho = state_ref(state)?;
        let fa = FilterElement::new(gamma_a, read_axis(axis_a)?)?;
        let fb = FilterElement::new(gamma_b, read_axis(axis_b)?)?;
        if out_state.is_null() || out_transmission.is_null() {
            return Err(null("output pointer"));
        }
        let filtered = apply_filters(rho, &fa, &fb)?;
        write_out(out_transmission, filtered.transmission)?;
        write_state(out_state, filtered.state)
    })
}

/// Best qubit-B filter for a channel filter of strength `gamma_a` along the
/// unit vector `axis_a`. Writes the magnitude and the orientation (3 doubles).
///
/// # Safety
/// `axis_a` must point to 3 doubles; `out_orientation` must be writable for 3.
#[no_mangle]
pub unsafe extern "C" fn qf_optimal_filter(
    state: *const QfState,
    gamma_a: f64,
    axis_a: *const f64,
    out_magnitude: *mut f64,
    out_orientation: *mut f64,
) -> QfStatus {
    guard(|| {
        let rho = state_ref(state)?;
        let a = read_axis(axis_a)?;
        let t = correlation_matrix(rho)?;
        let b = optimal_orientation(&t, &a)?;
        let g = optimal_magnitude(&t, &a, gamma_a)?;
        if out_orientation.is_null() {
            return Err(null("orientation"));
        }
        write_out(out_magnitude, g)?;
        std::slice::from_raw_parts_mut(out_orientation, 3).copy_from_slice(b.as_array());
        Ok(())
    })
}

/// Sweeps `n` channel filter strengths from `grid`, writing `n` points.
///
/// # Safety
/// `grid` must hold `n` doubles and `out` room for `n` points.
#[no_mangle]
pub unsafe extern "C" fn qf_sweep(
    noise: QfNoise,
    p: f64,
    grid: *const f64,
    n: usize,
    strategy: QfStrategy,
    normalization: f64,
    out: *mut QfSweepPoint,
) -> QfStatus {
    guard(|| {
        if n == 0 {
            return Ok(());
        }
        if grid.is_null() || out.is_null() {
            return Err(null("grid or output"));
        }
        let strategy = match strategy {
            QfStrategy::None => Strategy::None,
            QfStrategy::Match => Strategy::Match,
            QfStrategy::Optimal => Strategy::Optimal,
        };
        let grid = std::slice::from_raw_parts(grid, n);
        let points = sweep(&noise_spec(noise, p)?, grid, strategy, normalization)?;
        let out = std::slice::from_raw_parts_mut(out, n);
        for (o, pt) in out.iter_mut().zip(points) {
            *o = QfSweepPoint {
                gamma_a: pt.gamma_a,
                gamma_b: pt.gamma_b,
                mutual_info_bits: pt.mutual_info,
                concurrence: pt.concurrence,
                transmission: pt.transmission,
            };
        }
        Ok(())
    })
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    #[test]
    fn bell_round_trip() {
        let mut s = ptr::null_mut();
        assert_eq!(unsafe { qf_state_new_bell(QfBell::PhiPlus, &mut s) }, QfStatus::Ok);
        let mut c = 0.0;
        assert_eq!(unsafe { qf_state_concurrence(s, &mut c) }, QfStatus::Ok);
        assert!((c - 1.0).abs() < 1e-12);
        unsafe { qf_state_free(s) };
    }

    #[test]
    fn null_handle_is_reported() {
        let mut c = 0.0;
        assert_eq!(unsafe { qf_state_concurrence(ptr::null(), &mut c) }, QfStatus::NullPointer);
        let msg = unsafe { std::ffi::CStr::from_ptr(qf_last_error_message()) };
        assert!(!msg.to_bytes().is_empty());
    }
}
