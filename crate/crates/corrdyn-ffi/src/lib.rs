//! C ABI for the corrdyn library.
//!
//! Conventions: every function returns a [`CorrdynStatus`]; results come out
//! through pointers. Correspondences are opaque handles created by the
//! `_new` functions and released by the matching `_free`. Complex numbers
//! cross the boundary as (re, im) double pairs; arrays of them are
//! interleaved re0, im0, re1, im1, ...
//!
//! The header is generated into `include/corrdyn.h` by the build script.

use std::ffi::CStr;
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use corrdyn::cifs;
use corrdyn::corr::{self, Cx, MatingCoords, PowerCorr};
use corrdyn::error::Error;
use corrdyn::orbit::{self, EscapeParams, OrbitStatus};
use corrdyn::parallel::WorkerPool;
use corrdyn::raster::{self, GridSpec};
use corrdyn::sturmian::{self, DiskVariant, Letter};

/// Status codes shared by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrdynStatus {
    Ok = 0,
    InvalidArgument = 1,
    NullPointer = 2,
    PoleInput = 3,
    RootFindingFailure = 4,
    NoValidRadius = 5,
    SeedNotRepelling = 6,
    OutsideKleinDisk = 7,
    BufferTooSmall = 8,
    IoError = 9,
    InternalError = 99,
}

fn status_of(err: &Error) -> CorrdynStatus {
    match err {
        Error::InvalidInput(_)
        | Error::Usage(_)
        | Error::BadFraction { .. }
        | Error::BadContinuedFraction(_)
        | Error::PrecisionOverflow(_) => CorrdynStatus::InvalidArgument,
        Error::PoleInput(_) => CorrdynStatus::PoleInput,
        Error::RootFindingFailure { .. } => CorrdynStatus::RootFindingFailure,
        Error::NoValidRadius { .. } => CorrdynStatus::NoValidRadius,
        Error::SeedNotRepelling { .. } => CorrdynStatus::SeedNotRepelling,
        Error::OutsideDisk(_) => CorrdynStatus::OutsideKleinDisk,
        Error::Io(_) => CorrdynStatus::IoError,
        _ => CorrdynStatus::InternalError,
    }
}

/// Orbit verdicts as stable integers.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrdynVerdict {
    Bounded = 0,
    Escaped = 1,
    BudgetExhausted = 2,
}

/// Fixed-point stability classes as stable integers.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrdynPointClass {
    Attracting = 0,
    Repelling = 1,
    Parabolic = 2,
    Superattracting = 3,
}

/// Opaque handle for the power correspondence (w-c)^q = z^p.
pub struct CorrdynPower {
    inner: PowerCorr,
}

/// Opaque handle for the mating correspondence F_a.
pub struct CorrdynMating {
    inner: corr::MatingCorr,
}

fn guard<F: FnOnce() -> CorrdynStatus>(f: F) -> CorrdynStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => CorrdynStatus::InternalError,
    }
}

unsafe fn write_branches(
    set: &corr::BranchSet,
    values: *mut f64,
    derivatives: *mut f64,
    capacity: usize,
    out_len: *mut usize,
) -> CorrdynStatus {
    let n = set.branches.len();
    if !out_len.is_null() {
        *out_len = n;
    }
    if n > capacity {
        return CorrdynStatus::BufferTooSmall;
    }
    if values.is_null() {
        return CorrdynStatus::NullPointer;
    }
    for (i, b) in set.branches.iter().enumerate() {
        *values.add(2 * i) = b.value.re;
        *values.add(2 * i + 1) = b.value.im;
        if !derivatives.is_null() {
            let d = b.derivative.unwrap_or(Cx::new(f64::NAN, f64::NAN));
            *derivatives.add(2 * i) = d.re;
            *derivatives.add(2 * i + 1) = d.im;
        }
    }
    CorrdynStatus::Ok
}

/// Create a power correspondence handle. Requires p > q >= 1.
///
/// # Safety
/// `out` must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn corrdyn_power_new(
    p: u32,
    q: u32,
    c_re: f64,
    c_im: f64,
    out: *mut *mut CorrdynPower,
) -> CorrdynStatus {
    if out.is_null() {
        return CorrdynStatus::NullPointer;
    }
    guard(|| match PowerCorr::new(p, q, Cx::new(c_re, c_im)) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(CorrdynPower { inner }));
            CorrdynStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Release a power correspondence handle. Null is a no-op.
///
/// # Safety
/// `handle` must come from `corrdyn_power_new` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn corrdyn_power_free(handle: *mut CorrdynPower) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Forward branch images of z: up to q (value, derivative) pairs.
/// Derivatives of collapsed critical branches come out as NaN.
///
/// # Safety
/// `handle` must be live; `values` (and `derivatives` if non-null) must hold
/// 2*capacity doubles; `out_len` one usize.
#[no_mangle]
pub unsafe extern "C" fn corrdyn_power_forward(
    handle: *const CorrdynPower,
    z_re: f64,
    z_im: f64,
    values: *mut f64,
    derivatives: *mut f64,
    capacity: usize,
    out_len: *mut usize,
) -> CorrdynStatus {
    if handle.is_null() {
        return CorrdynStatus::NullPointer;
    }
    guard(|| {
        let set = corr::power_forward(&(*handle).inner, Cx::new(z_re, z_im));
        write_branches(&set, values, derivatives, capacity, out_len)
    })
}

/// Backward branch images of w: up to p (value, derivative) pairs.
///
/// # Safety
/// As for [`corrdyn_power_forward`].
#[no_mangle]
pub unsafe extern "C" fn corrdyn_power_backward(
    handle: *const CorrdynPower,
    w_re: f64,
    w_im: f64,
    values: *mut f64,
    derivatives: *mut f64,
    capacity: usize,
    out_len: *mut usize,
) -> CorrdynStatus {
    if handle.is_null() {
        return CorrdynStatus::NullPointer;
    }
    guard(|| {
        let set = corr::power_backward(&(*handle).inner, Cx::new(w_re, w_im));
        write_branches(&set, values, derivatives, capacity, out_len)
    })
}

/// Escape radius max(2^(1/(β-1)), 2|c|).
///
/// # Safety
/// `handle` must be live.
#[no_mangle]
pub unsafe extern "C" fn corrdyn_power_escape_radius(handle: *const CorrdynPower) -> f64 {
    if handle.is_null() {
        return f64::NAN;
    }
    orbit::escape_radius(&(*handle).inner)
}

/// Filled-Julia membership verdict for z via the depth-limited orbit tree.
/// Pass radius = 0 for the sound default.
///
/// # Safety
/// `handle` live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn corrdyn_power_filled_verdict(
    handle: *const CorrdynPower,
    z_re: f64,
    z_im: f64,
    max_depth: u32,
    node_budget: u64,
    radius: f64,
    out: *mut CorrdynVerdict,
) -> CorrdynStatus {
    if handle.is_null() || out.is_null() {
        return CorrdynStatus::NullPointer;
    }
    if max_depth == 0 {
        return CorrdynStatus::InvalidArgument;
    }
    guard(|| {
        let corr = &(*handle).inner;
        let params = EscapeParams::clamped(corr, radius, max_depth, node_budget);
        let v = orbit::in_filled_julia(corr, Cx::new(z_re, z_im), &params);
        *out = match v.status {
            OrbitStatus::Bounded => CorrdynVerdict::Bounded,
            OrbitStatus::Escaped => CorrdynVerdict::Escaped,
            OrbitStatus::BudgetExhausted => CorrdynVerdict::BudgetExhausted,
        };
        CorrdynStatus::Ok
    })
}

/// Render the filled Julia set over a square-pixel window and write a binary
/// PPM (P6) file. Deterministic for a given configuration, including across
/// worker counts.
///
/// # Safety
/// `handle` live; `path` a NUL-terminated UTF-8 path.
#[no_mangle]
pub unsafe extern "C" fn corrdyn_power_render_filled_ppm(
    handle: *const CorrdynPower,
    center_re: f64,
    center_im: f64,
    width: f64,
    px: u32,
    py: u32,
    max_depth: u32,
    node_budget: u64,
    workers: usize,
    path: *const c_char,
) -> CorrdynStatus {
    if handle.is_null() || path.is_null() {
        return CorrdynStatus::NullPointer;
    }
    guard(|| {
        let Ok(path) = CStr::from_ptr(path).to_str() else {
            return CorrdynStatus::InvalidArgument;
        };
        let corr = &(*handle).inner;
        let grid = match GridSpec::new(Cx::new(center_re, center_im), width, px, py) {
            Ok(g) => g,
            Err(e) => return status_of(&e),
        };
        let params = EscapeParams::clamped(corr, 0.0, max_depth.max(1), node_budget);
        let pool = WorkerPool::new(workers.max(1));
        let raster = raster::render_filled_julia(corr, &grid, &params, &pool);
        match raster::write_ppm(&raster, raster::julia_palette, std::path::Path::new(path)) {
            Ok(()) => CorrdynStatus::Ok,
            Err(e) => status_of(&e),
        }
    })
}

/// Create a mating correspondence handle (a != 1); `covj_coordinates`
/// selects the conjugated J∘Cov coordinate system.
///
/// # Safety
/// `out` must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn corrdyn_mating_new(
    a_re: f64,
    a_im: f64,
    covj_coordinates: bool,
    out: *mut *mut CorrdynMating,
) -> CorrdynStatus {
    if out.is_null() {
        return CorrdynStatus::NullPointer;
    }
    let coords = if covj_coordinates {
        MatingCoords::CovJ
    } else {
        MatingCoords::Original
    };
    guard(|| match corr::MatingCorr::new(Cx::new(a_re, a_im), coords) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(CorrdynMating { inner }));
            CorrdynStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Release a mating handle. Null is a no-op.
///
/// # Safety
/// `handle` must come from `corrdyn_mating_new` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn corrdyn_mating_free(handle: *mut CorrdynMating) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// The two forward images of z under F_a. `branch_point` is set when the
/// images coincide (derivatives withheld as NaN there).
///
/// # Safety
/// `handle` live; `values` holds 4 doubles; `derivatives` null or 4 doubles;
/// `branch_point` null or one bool.
#[no_mangle]
pub unsafe extern "C" fn corrdyn_mating_forward(
    handle: *const CorrdynMating,
    z_re: f64,
    z_im: f64,
    values: *mut f64,
    derivatives: *mut f64,
    branch_point: *mut bool,
) -> CorrdynStatus {
    if handle.is_null() {
        return CorrdynStatus::NullPointer;
    }
    guard(|| match corr::mating_forward(&(*handle).inner, Cx::new(z_re, z_im)) {
        Ok(set) => {
            if !branch_point.is_null() {
                *branch_point = set.branch_point;
            }
            write_branches(&set, values, derivatives, 2, std::ptr::null_mut())
        }
        Err(e) => status_of(&e),
    })
}

/// The two backward images of w under F_a.
///
/// # Safety
/// As for [`corrdyn_mating_forward`].
#[no_mangle]
pub unsafe extern "C" fn corrdyn_mating_backward(
    handle: *const CorrdynMating,
    w_re: f64,
    w_im: f64,
    values: *mut f64,
    derivatives: *mut f64,
    branch_point: *mut bool,
) -> CorrdynStatus {
    if handle.is_null() {
        return CorrdynStatus::NullPointer;
    }
    guard(|| match corr::mating_backward(&(*handle).inner, Cx::new(w_re, w_im)) {
        Ok(set) => {
            if !branch_point.is_null() {
                *branch_point = set.branch_point;
            }
            write_branches(&set, values, derivatives, 2, std::ptr::null_mut())
        }
        Err(e) => status_of(&e),
    })
}

/// Fixed points of F_a with multipliers and stability classes. The parabolic
/// point P is always among them with multiplier 1.
///
/// # Safety
/// `handle` live; `points`/`multipliers` hold 2*capacity doubles; `classes`
/// capacity entries; `out_len` one usize.
#[no_mangle]
pub unsafe extern "C" fn corrdyn_mating_fixed_points(
    handle: *const CorrdynMating,
    points: *mut f64,
    multipliers: *mut f64,
    classes: *mut CorrdynPointClass,
    capacity: usize,
    out_len: *mut usize,
) -> CorrdynStatus {
    if handle.is_null() {
        return CorrdynStatus::NullPointer;
    }
    guard(|| match corr::mating_fixed_points(&(*handle).inner) {
        Ok(fps) => {
            if !out_len.is_null() {
                *out_len = fps.len();
            }
            if fps.len() > capacity {
                return CorrdynStatus::BufferTooSmall;
            }
            if points.is_null() || multipliers.is_null() || classes.is_null() {
                return CorrdynStatus::NullPointer;
            }
            for (i, f) in fps.iter().enumerate() {
                *points.add(2 * i) = f.point.re;
                *points.add(2 * i + 1) = f.point.im;
                *multipliers.add(2 * i) = f.multiplier.re;
                *multipliers.add(2 * i + 1) = f.multiplier.im;
                *classes.add(i) = match f.class {
                    corr::PointClass::Attracting => CorrdynPointClass::Attracting,
                    corr::PointClass::Repelling => CorrdynPointClass::Repelling,
                    corr::PointClass::Parabolic => CorrdynPointClass::Parabolic,
                    corr::PointClass::Superattracting => CorrdynPointClass::Superattracting,
                };
            }
            CorrdynStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Digits of the Sturmian word W_{p/q} (1 for α, 0 for β), canonical cyclic
/// representative.
///
/// # Safety
/// `digits` holds capacity bytes; `out_len` one usize.
#[no_mangle]
pub unsafe extern "C" fn corrdyn_sturmian_word(
    p: u64,
    q: u64,
    digits: *mut u8,
    capacity: usize,
    out_len: *mut usize,
) -> CorrdynStatus {
    guard(|| match sturmian::sturmian_word(p, q) {
        Ok(word) => {
            if !out_len.is_null() {
                *out_len = word.len();
            }
            if word.len() > capacity {
                return CorrdynStatus::BufferTooSmall;
            }
            if digits.is_null() {
                return CorrdynStatus::NullPointer;
            }
            for (i, l) in word.0.iter().enumerate() {
                *digits.add(i) = u8::from(*l == Letter::Alpha);
            }
            CorrdynStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// The Yoccoz disk for rotation number p/q: tangent to the imaginary axis
/// at 2πip/q. `classical` selects the polynomial inequality with degree `d`
/// and ray-cycle count `m`; otherwise the mating inequality is used.
///
/// # Safety
/// The three out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn corrdyn_yoccoz_disk(
    p: u64,
    q: u64,
    classical: bool,
    d: u32,
    m: u32,
    center_re: *mut f64,
    center_im: *mut f64,
    radius: *mut f64,
) -> CorrdynStatus {
    if center_re.is_null() || center_im.is_null() || radius.is_null() {
        return CorrdynStatus::NullPointer;
    }
    let variant = if classical {
        DiskVariant::Classical { d, m }
    } else {
        DiskVariant::Mating
    };
    guard(|| match sturmian::yoccoz_disk(p, q, variant) {
        Ok(disk) => {
            *center_re = disk.center.re;
            *center_im = disk.center.im;
            *radius = disk.radius;
            CorrdynStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Minkowski h of a continued-fraction literal such as "[1;1,2]" or
/// "[1;(1)]" (periodic tail in parentheses), as a double approximation.
///
/// # Safety
/// `cf_literal` NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn corrdyn_minkowski_h(
    cf_literal: *const c_char,
    precision_bits: u32,
    out: *mut f64,
) -> CorrdynStatus {
    if cf_literal.is_null() || out.is_null() {
        return CorrdynStatus::NullPointer;
    }
    guard(|| {
        let Ok(text) = CStr::from_ptr(cf_literal).to_str() else {
            return CorrdynStatus::InvalidArgument;
        };
        let cf = match corrdyn::cli::parse_cf(text) {
            Ok(cf) => cf,
            Err(e) => return status_of(&e),
        };
        match sturmian::minkowski_h(&cf, precision_bits) {
            Ok(h) => {
                *out = h.to_f64();
                CorrdynStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// CIFS construction and Moran upper bound at parameter c: fills the chosen
/// disk radius ρ, the uniform contraction r, and s* = log q / log(1/r).
///
/// # Safety
/// The three out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn corrdyn_cifs_dimension_bound(
    p: u32,
    q: u32,
    c_re: f64,
    c_im: f64,
    rho: *mut f64,
    contraction: *mut f64,
    s_star: *mut f64,
) -> CorrdynStatus {
    if rho.is_null() || contraction.is_null() || s_star.is_null() {
        return CorrdynStatus::NullPointer;
    }
    guard(|| {
        let exp = match corrdyn::corr::RationalExp::new(p, q) {
            Ok(e) => e,
            Err(e) => return status_of(&e),
        };
        match cifs::build_cifs(exp, Cx::new(c_re, c_im)) {
            Ok(data) => {
                *rho = data.outer.radius;
                *contraction = data.contraction;
                *s_star = cifs::hausdorff_upper_bound(&data);
                CorrdynStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_roundtrip_through_the_abi() {
        unsafe {
            let mut handle: *mut CorrdynPower = std::ptr::null_mut();
            assert_eq!(corrdyn_power_new(3, 2, 0.0, 0.0, &mut handle), CorrdynStatus::Ok);
            assert!((corrdyn_power_escape_radius(handle) - 4.0).abs() < 1e-12);

            let mut values = [0f64; 4];
            let mut derivs = [0f64; 4];
            let mut len = 0usize;
            let st = corrdyn_power_forward(
                handle, 1.0, 0.0, values.as_mut_ptr(), derivs.as_mut_ptr(), 2, &mut len,
            );
            assert_eq!(st, CorrdynStatus::Ok);
            assert_eq!(len, 2);
            let mut got: Vec<f64> = vec![values[0], values[2]];
            got.sort_by(f64::total_cmp);
            assert!((got[0] + 1.0).abs() < 1e-12 && (got[1] - 1.0).abs() < 1e-12);

            let mut verdict = CorrdynVerdict::BudgetExhausted;
            assert_eq!(
                corrdyn_power_filled_verdict(handle, 1.0, 0.0, 50, 1_000_000, 0.0, &mut verdict),
                CorrdynStatus::Ok
            );
            assert_eq!(verdict, CorrdynVerdict::Bounded);
            assert_eq!(
                corrdyn_power_filled_verdict(handle, 5.0, 0.0, 50, 1_000_000, 0.0, &mut verdict),
                CorrdynStatus::Ok
            );
            assert_eq!(verdict, CorrdynVerdict::Escaped);

            // Buffer too small reports the needed length.
            let mut tiny = [0f64; 2];
            let mut need = 0usize;
            assert_eq!(
                corrdyn_power_forward(
                    handle,
                    1.0,
                    0.0,
                    tiny.as_mut_ptr(),
                    std::ptr::null_mut(),
                    1,
                    &mut need
                ),
                CorrdynStatus::BufferTooSmall
            );
            assert_eq!(need, 2);
            corrdyn_power_free(handle);
        }
    }

    #[test]
    fn invalid_exponent_rejected() {
        unsafe {
            let mut handle: *mut CorrdynPower = std::ptr::null_mut();
            assert_eq!(
                corrdyn_power_new(2, 2, 0.0, 0.0, &mut handle),
                CorrdynStatus::InvalidArgument
            );
            assert!(handle.is_null());
        }
    }

    #[test]
    fn mating_through_the_abi() {
        unsafe {
            let mut handle: *mut CorrdynMating = std::ptr::null_mut();
            assert_eq!(corrdyn_mating_new(5.0, 0.0, false, &mut handle), CorrdynStatus::Ok);

            let mut values = [0f64; 4];
            let mut bp = false;
            assert_eq!(
                corrdyn_mating_forward(
                    handle,
                    0.0,
                    0.0,
                    values.as_mut_ptr(),
                    std::ptr::null_mut(),
                    &mut bp
                ),
                CorrdynStatus::Ok
            );
            let images = [(values[0], values[1]), (values[2], values[3])];
            assert!(images.iter().any(|(re, im)| re.abs() < 1e-12 && im.abs() < 1e-12));
            assert!(images
                .iter()
                .any(|(re, im)| (re - 3.0 / 7.0).abs() < 1e-12 && im.abs() < 1e-12));

            // Pole input reported.
            assert_eq!(
                corrdyn_mating_forward(
                    handle,
                    -1.0,
                    0.0,
                    values.as_mut_ptr(),
                    std::ptr::null_mut(),
                    &mut bp
                ),
                CorrdynStatus::PoleInput
            );

            let mut pts = [0f64; 8];
            let mut muls = [0f64; 8];
            let mut classes = [CorrdynPointClass::Attracting; 4];
            let mut len = 0usize;
            assert_eq!(
                corrdyn_mating_fixed_points(
                    handle,
                    pts.as_mut_ptr(),
                    muls.as_mut_ptr(),
                    classes.as_mut_ptr(),
                    4,
                    &mut len
                ),
                CorrdynStatus::Ok
            );
            assert_eq!(len, 3);
            let p_idx = (0..len)
                .find(|i| pts[2 * i].abs() < 1e-12 && pts[2 * i + 1].abs() < 1e-12)
                .expect("P present");
            assert!((muls[2 * p_idx] - 1.0).abs() <= 1e-9);
            assert_eq!(classes[p_idx], CorrdynPointClass::Parabolic);
            corrdyn_mating_free(handle);

            let mut bad: *mut CorrdynMating = std::ptr::null_mut();
            assert_eq!(
                corrdyn_mating_new(1.0, 0.0, false, &mut bad),
                CorrdynStatus::InvalidArgument
            );
        }
    }

    #[test]
    fn combinatorics_through_the_abi() {
        unsafe {
            let mut digits = [9u8; 8];
            let mut len = 0usize;
            assert_eq!(
                corrdyn_sturmian_word(2, 5, digits.as_mut_ptr(), 8, &mut len),
                CorrdynStatus::Ok
            );
            assert_eq!(&digits[..len], &[0, 0, 1, 0, 1]);

            let (mut cre, mut cim, mut r) = (0.0, 0.0, 0.0);
            assert_eq!(
                corrdyn_yoccoz_disk(1, 2, false, 0, 0, &mut cre, &mut cim, &mut r),
                CorrdynStatus::Ok
            );
            assert!((r - 3f64.ln() / 2.0).abs() <= 1e-15);
            assert_eq!(
                corrdyn_yoccoz_disk(2, 4, false, 0, 0, &mut cre, &mut cim, &mut r),
                CorrdynStatus::InvalidArgument
            );

            let literal = std::ffi::CString::new("[1;(1)]").unwrap();
            let mut h = 0.0f64;
            assert_eq!(corrdyn_minkowski_h(literal.as_ptr(), 128, &mut h), CorrdynStatus::Ok);
            assert!((h - 2.0 / 3.0).abs() < 1e-12);

            let (mut rho, mut contraction, mut s) = (0.0, 0.0, 0.0);
            assert_eq!(
                corrdyn_cifs_dimension_bound(5, 2, 0.05, 0.0, &mut rho, &mut contraction, &mut s),
                CorrdynStatus::Ok
            );
            assert!(s > 0.0 && s < 2.0);
            assert_eq!(
                corrdyn_cifs_dimension_bound(5, 2, 10.0, 0.0, &mut rho, &mut contraction, &mut s),
                CorrdynStatus::NoValidRadius
            );
        }
    }

    #[test]
    fn render_writes_ppm() {
        unsafe {
            let dir = std::env::temp_dir().join("corrdyn_ffi_test");
            std::fs::create_dir_all(&dir).unwrap();
            let path = dir.join("ffi_render.ppm");
            let cpath = std::ffi::CString::new(path.to_str().unwrap()).unwrap();
            let mut handle: *mut CorrdynPower = std::ptr::null_mut();
            assert_eq!(corrdyn_power_new(5, 2, 0.0, 0.0, &mut handle), CorrdynStatus::Ok);
            assert_eq!(
                corrdyn_power_render_filled_ppm(
                    handle,
                    0.0,
                    0.0,
                    3.0,
                    64,
                    64,
                    40,
                    1_000_000,
                    2,
                    cpath.as_ptr()
                ),
                CorrdynStatus::Ok
            );
            let bytes = std::fs::read(&path).unwrap();
            assert!(bytes.starts_with(b"P6\n64 64\n255\n"));
            assert_eq!(bytes.len(), 13 + 64 * 64 * 3);
            corrdyn_power_free(handle);
        }
    }
}
