//! C ABI for `moran-spectral`.
//!
//! Objects cross the boundary as opaque handles created by `*_new`/`*_build`
//! and released by the matching `*_free`. Every function returns a
//! [`MoranStatus`]; on failure, [`moran_last_error`] describes the cause.

use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_bigint::BigInt;

use moran_spectral::convolution::{finite_convolution, rearranged_prefix};
use moran_spectral::fourier::{mu_hat, nu_hat};
use moran_spectral::spectra::{build_spectrum, q_function, SpectrumCandidate, Transform};
use moran_spectral::spectrality::{bernoulli_s, decide, Status};
use moran_spectral::ParamSeq;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoranStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    GuardFailed = 3,
    OutOfRange = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoranVerdict {
    Spectral = 0,
    NotSpectral = 1,
    Unknown = 3,
}

/// Opaque parameter sequences.
pub struct MoranParams(ParamSeq);

/// Opaque finite spectrum.
pub struct MoranSpectrum(SpectrumCandidate);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn guarded(f: impl FnOnce() -> Result<(), (MoranStatus, String)>) -> MoranStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            MoranStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            MoranStatus::Panic
        }
    }
}

fn null() -> (MoranStatus, String) {
    (MoranStatus::NullPointer, "null pointer argument".into())
}

unsafe fn slice<'a>(p: *const u64, len: usize) -> Result<&'a [u64], (MoranStatus, String)> {
    if len == 0 {
        Ok(&[])
    } else if p.is_null() {
        Err(null())
    } else {
        Ok(std::slice::from_raw_parts(p, len))
    }
}

unsafe fn params_ref<'a>(p: *const MoranParams) -> Result<&'a ParamSeq, (MoranStatus, String)> {
    p.as_ref().map(|x| &x.0).ok_or_else(null)
}

/// Creates parameter sequences from prefix and period arrays.
///
/// # Safety
/// Each non-empty array pointer must be valid for its length; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn moran_params_new(
    b_prefix: *const u64,
    b_prefix_len: usize,
    b_period: *const u64,
    b_period_len: usize,
    p_prefix: *const u64,
    p_prefix_len: usize,
    p_period: *const u64,
    p_period_len: usize,
    out: *mut *mut MoranParams,
) -> MoranStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null());
        }
        let seq = ParamSeq::new(
            slice(b_prefix, b_prefix_len)?.to_vec(),
            slice(b_period, b_period_len)?.to_vec(),
            slice(p_prefix, p_prefix_len)?.to_vec(),
            slice(p_period, p_period_len)?.to_vec(),
        )
        .map_err(|e| (MoranStatus::InvalidArgument, e.to_string()))?;
        *out = Box::into_raw(Box::new(MoranParams(seq)));
        Ok(())
    })
}

/// # Safety
/// `p` must come from [`moran_params_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn moran_params_free(p: *mut MoranParams) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `params` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn moran_decide(params: *const MoranParams, out: *mut MoranVerdict) -> MoranStatus {
    guarded(|| {
        let p = params_ref(params)?;
        let out = out.as_mut().ok_or_else(null)?;
        *out = match decide(p).status {
            Status::Spectral => MoranVerdict::Spectral,
            Status::NotSpectral => MoranVerdict::NotSpectral,
            Status::Unknown => MoranVerdict::Unknown,
        };
        Ok(())
    })
}

/// Writes the NUL-terminated TOML report into `buf`. `needed` receives the
/// size including the terminator, also when `buf` is too small.
///
/// # Safety
/// `buf` must be valid for `cap` bytes (or null with `cap == 0`).
#[no_mangle]
pub unsafe extern "C" fn moran_decide_report(
    params: *const MoranParams,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> MoranStatus {
    guarded(|| {
        let p = params_ref(params)?;
        write_string(&decide(p).report(p), buf, cap, needed)
    })
}

unsafe fn write_string(s: &str, buf: *mut c_char, cap: usize, needed: *mut usize) -> Result<(), (MoranStatus, String)> {
    let bytes = s.as_bytes();
    if let Some(n) = needed.as_mut() {
        *n = bytes.len() + 1;
    }
    if cap < bytes.len() + 1 || buf.is_null() {
        return Err((MoranStatus::BufferTooSmall, format!("need {} bytes", bytes.len() + 1)));
    }
    ptr::copy_nonoverlapping(bytes.as_ptr(), buf.cast::<u8>(), bytes.len());
    *buf.add(bytes.len()) = 0;
    Ok(())
}

/// `s_k` for `p_k ≡ 1`.
///
/// # Safety
/// `params` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn moran_bernoulli_s(params: *const MoranParams, k: usize, out: *mut i64) -> MoranStatus {
    guarded(|| {
        let p = params_ref(params)?;
        let out = out.as_mut().ok_or_else(null)?;
        *out = bernoulli_s(p, k).map_err(|e| (MoranStatus::InvalidArgument, e.to_string()))?.value;
        Ok(())
    })
}

unsafe fn transform_out(
    v: moran_spectral::fourier::BoundedValue,
    re: *mut f64,
    im: *mut f64,
    bound: *mut f64,
) -> Result<(), (MoranStatus, String)> {
    *re.as_mut().ok_or_else(null)? = v.value.re;
    *im.as_mut().ok_or_else(null)? = v.value.im;
    *bound.as_mut().ok_or_else(null)? = v.error_bound;
    Ok(())
}

/// Truncated `μ̂(t)` and its error bound.
///
/// # Safety
/// `params` must be a live handle; output pointers writable.
#[no_mangle]
pub unsafe extern "C" fn moran_mu_hat(
    params: *const MoranParams,
    t: f64,
    truncation: usize,
    re: *mut f64,
    im: *mut f64,
    bound: *mut f64,
) -> MoranStatus {
    guarded(|| {
        let p = params_ref(params)?;
        if truncation == 0 {
            return Err((MoranStatus::InvalidArgument, "truncation must be at least 1".into()));
        }
        transform_out(mu_hat(p, t, truncation), re, im, bound)
    })
}

/// Truncated `ν̂(t)` and its error bound.
///
/// # Safety
/// `params` must be a live handle; output pointers writable.
#[no_mangle]
pub unsafe extern "C" fn moran_nu_hat(
    params: *const MoranParams,
    t: f64,
    truncation: usize,
    re: *mut f64,
    im: *mut f64,
    bound: *mut f64,
) -> MoranStatus {
    guarded(|| {
        let p = params_ref(params)?;
        if truncation == 0 {
            return Err((MoranStatus::InvalidArgument, "truncation must be at least 1".into()));
        }
        transform_out(nu_hat(p, t, truncation), re, im, bound)
    })
}

/// Spectrum of the first `levels` rearranged factors.
///
/// # Safety
/// `params` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn moran_spectrum_build(
    params: *const MoranParams,
    levels: usize,
    out: *mut *mut MoranSpectrum,
) -> MoranStatus {
    guarded(|| {
        let p = params_ref(params)?;
        if out.is_null() {
            return Err(null());
        }
        let s = build_spectrum(p, levels).map_err(|e| (MoranStatus::GuardFailed, e.to_string()))?;
        *out = Box::into_raw(Box::new(MoranSpectrum(s)));
        Ok(())
    })
}

/// # Safety
/// `s` must come from [`moran_spectrum_build`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn moran_spectrum_free(s: *mut MoranSpectrum) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Number of points, or 0 for a null handle.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn moran_spectrum_len(s: *const MoranSpectrum) -> usize {
    s.as_ref().map_or(0, |x| x.0.len())
}

/// The `i`-th point (ascending) as `num / den`.
///
/// # Safety
/// `s` must be a live handle; output pointers writable.
#[no_mangle]
pub unsafe extern "C" fn moran_spectrum_point(
    s: *const MoranSpectrum,
    i: usize,
    num: *mut i64,
    den: *mut i64,
) -> MoranStatus {
    guarded(|| {
        let s = s.as_ref().ok_or_else(null)?;
        let x = s
            .0
            .realized()
            .get(i)
            .ok_or_else(|| (MoranStatus::OutOfRange, format!("index {i} of {}", s.0.len())))?;
        let conv = |v: &BigInt| {
            i64::try_from(v).map_err(|_| (MoranStatus::OutOfRange, format!("{v} does not fit in 64 bits")))
        };
        *num.as_mut().ok_or_else(null)? = conv(x.numer())?;
        *den.as_mut().ok_or_else(null)? = conv(x.denom())?;
        Ok(())
    })
}

/// `Q(t)` of the spectrum against the exact convolution of the first `levels`
/// rearranged factors.
///
/// # Safety
/// Handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn moran_q_convolution(
    s: *const MoranSpectrum,
    params: *const MoranParams,
    levels: usize,
    t: f64,
    out: *mut f64,
) -> MoranStatus {
    guarded(|| {
        let s = s.as_ref().ok_or_else(null)?;
        let p = params_ref(params)?;
        let out = out.as_mut().ok_or_else(null)?;
        if levels == 0 {
            return Err((MoranStatus::InvalidArgument, "levels must be at least 1".into()));
        }
        let nu = finite_convolution(&rearranged_prefix(p, levels).factors, levels);
        *out = q_function(&s.0, &Transform::empirical(&nu), t).value;
        Ok(())
    })
}

/// Copies the calling thread's last error message into `buf`.
///
/// # Safety
/// `buf` must be valid for `cap` bytes (or null with `cap == 0`).
#[no_mangle]
pub unsafe extern "C" fn moran_last_error(buf: *mut c_char, cap: usize, needed: *mut usize) -> MoranStatus {
    let msg = LAST_ERROR.with(|e| e.borrow().clone());
    match write_string(&msg, buf, cap, needed) {
        Ok(()) => MoranStatus::Ok,
        Err((s, _)) => s,
    }
}
