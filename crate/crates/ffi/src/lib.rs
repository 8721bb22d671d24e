//! C ABI over the `halfwave` library.
//!
//! Objects are opaque handles created by `hw_*_new`/`hw_solve_*` and released
//! with the matching `hw_*_free`. Every fallible call returns an [`HwStatus`];
//! on failure a message is available from [`hw_last_error`] on the same thread.
//! Complex arrays are interleaved `(re, im)` doubles, row-major.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

use num_complex::Complex64;

use halfwave::evolution::{self, EvolutionConfig, RunStatus};
use halfwave::identities;
use halfwave::kernel;
use halfwave::solver::{self, ProfileResult, SeedProfile, SolverConfig};
use halfwave::spectral;
use halfwave::{io, Error, Field, Grid, Velocity, WaveParams};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    GridMismatch = 3,
    Supersonic = 4,
    InvalidExponent = 5,
    ZeroField = 6,
    TrivialLimit = 7,
    Divergence = 8,
    NotConverged = 9,
    ResolutionLoss = 10,
    Quadrature = 11,
    Io = 12,
    Format = 13,
    BlowUp = 14,
    Panic = 15,
    Internal = 16,
}

impl From<&Error> for HwStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidGrid(_) | Error::InvalidArgument(_) | Error::AxisOutOfRange { .. } | Error::Config(_) => {
                HwStatus::InvalidArgument
            }
            Error::NonFiniteSymbol { .. } => HwStatus::InvalidArgument,
            Error::GridMismatch(_) => HwStatus::GridMismatch,
            Error::Supersonic { .. } => HwStatus::Supersonic,
            Error::InvalidExponent { .. } => HwStatus::InvalidExponent,
            Error::ZeroField => HwStatus::ZeroField,
            Error::TrivialLimit { .. } => HwStatus::TrivialLimit,
            Error::Divergence { .. } => HwStatus::Divergence,
            Error::NotConverged { .. } => HwStatus::NotConverged,
            Error::ResolutionLoss { .. } => HwStatus::ResolutionLoss,
            Error::Quadrature(_) => HwStatus::Quadrature,
            Error::Io(_) => HwStatus::Io,
            Error::Format(_) | Error::Csv(_) | Error::Json(_) => HwStatus::Format,
            Error::TimeNotInTrajectory(_) => HwStatus::InvalidArgument,
        }
    }
}

struct Failure(HwStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(HwStatus::from(&e), e.to_string())
    }
}

type Outcome = Result<(), Failure>;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

// runs `f`, recording failures and turning panics into a status
fn guard<F: FnOnce() -> Outcome>(f: F) -> HwStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HwStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(panic) => {
            let message = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(&format!("internal panic: {message}"));
            HwStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(HwStatus::NullPointer, format!("{what} is null"))
}

unsafe fn reference<'a, T>(ptr: *const T, what: &str) -> Result<&'a T, Failure> {
    ptr.as_ref().ok_or_else(|| null(what))
}

unsafe fn out_ref<'a, T>(ptr: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    ptr.as_mut().ok_or_else(|| null(what))
}

unsafe fn doubles<'a>(ptr: *const f64, len: usize, what: &str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        Ok(&[])
    } else if ptr.is_null() {
        Err(null(what))
    } else {
        Ok(std::slice::from_raw_parts(ptr, len))
    }
}

unsafe fn path_from(ptr: *const c_char) -> Result<PathBuf, Failure> {
    if ptr.is_null() {
        return Err(null("path"));
    }
    let s = CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| Failure(HwStatus::InvalidArgument, "path is not valid UTF-8".into()))?;
    Ok(PathBuf::from(s))
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

/// Periodic grid `[-L, L)^d` with `n` points per axis.
pub struct HwGrid(Grid);

/// Complex samples on a grid.
pub struct HwField(Field);

/// A solved profile together with its diagnostics.
pub struct HwProfile(ProfileResult);

/// Seed of the profile iteration.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HwSeed {
    Gaussian = 0,
    ExplicitQ0 = 1,
    Random = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct HwSolverOptions {
    pub max_iters: usize,
    pub tol: f64,
    /// Stabilizing exponent; values <= 0 select `p / (p - 1)`.
    pub stabilizer: f64,
    /// In `(0, 1]`.
    pub damping: f64,
    pub seed: HwSeed,
    /// RNG seed for `HW_SEED_RANDOM`.
    pub random_seed: u64,
}

impl HwSolverOptions {
    fn to_config(self) -> SolverConfig {
        SolverConfig {
            max_iters: self.max_iters,
            tol: self.tol,
            stabilizer: (self.stabilizer > 0.0).then_some(self.stabilizer),
            damping: self.damping,
            seed: match self.seed {
                HwSeed::Gaussian => SeedProfile::Gaussian,
                HwSeed::ExplicitQ0 => SeedProfile::ExplicitQ0,
                HwSeed::Random => SeedProfile::Random(self.random_seed),
            },
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct HwProfileDiagnostics {
    pub el_residual: f64,
    pub t_v: f64,
    pub mass: f64,
    pub lp1_integral: f64,
    pub weinstein_value: f64,
    pub optimal_constant: f64,
    pub gamma: f64,
    pub boundary_fraction: f64,
    pub iters: usize,
    pub converged: bool,
    pub critical: bool,
    pub mass_leakage: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct HwIdentityReport {
    /// Entries beyond `dim` are zero.
    pub virial_residuals: [f64; 3],
    pub dim: usize,
    pub pohozaev_residual_1: f64,
    pub pohozaev_residual_2: f64,
    pub el_residual: f64,
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hw_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or an empty string.
///
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn hw_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn hw_solver_options_default() -> HwSolverOptions {
    let d = SolverConfig::default();
    HwSolverOptions { max_iters: d.max_iters, tol: d.tol, stabilizer: 0.0, damping: d.damping, seed: HwSeed::Gaussian, random_seed: 0 }
}

/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn hw_grid_new(dim: usize, n: usize, half_extent: f64, out: *mut *mut HwGrid) -> HwStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = boxed(HwGrid(Grid::new(dim, n, half_extent)?));
        Ok(())
    })
}

/// # Safety
/// `grid` must be null or a handle from `hw_grid_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hw_grid_free(grid: *mut HwGrid) {
    if !grid.is_null() {
        drop(Box::from_raw(grid));
    }
}

/// Number of samples `n^d`, or 0 for a null handle.
///
/// # Safety
/// `grid` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hw_grid_len(grid: *const HwGrid) -> usize {
    grid.as_ref().map_or(0, |g| g.0.len())
}

/// # Safety
/// `field` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hw_field_len(field: *const HwField) -> usize {
    field.as_ref().map_or(0, |f| f.0.values().len())
}

/// Field from `len` interleaved `(re, im)` pairs; `len` must equal `n^d`.
///
/// # Safety
/// `grid` must be live, `values` must point to `2 * len` doubles and `out` to
/// storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn hw_field_new(
    grid: *const HwGrid,
    values: *const f64,
    len: usize,
    out: *mut *mut HwField,
) -> HwStatus {
    guard(|| {
        let grid = reference(grid, "grid")?;
        let out = out_ref(out, "out")?;
        let raw = doubles(values, 2 * len, "values")?;
        let values = raw.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect();
        *out = boxed(HwField(Field::new(grid.0, values)?));
        Ok(())
    })
}

/// # Safety
/// `field` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hw_field_free(field: *mut HwField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Copies the samples into `out` as `len` interleaved pairs.
///
/// # Safety
/// `field` must be live and `out` must have room for `2 * len` doubles.
#[no_mangle]
pub unsafe extern "C" fn hw_field_values(field: *const HwField, out: *mut f64, len: usize) -> HwStatus {
    guard(|| {
        let field = reference(field, "field")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let values = field.0.values();
        if len != values.len() {
            return Err(Failure(
                HwStatus::InvalidArgument,
                format!("buffer holds {len} samples, field has {}", values.len()),
            ));
        }
        let dst = std::slice::from_raw_parts_mut(out, 2 * len);
        for (pair, z) in dst.chunks_exact_mut(2).zip(values) {
            pair[0] = z.re;
            pair[1] = z.im;
        }
        Ok(())
    })
}

/// Reads an `HWF1` field file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` valid for one handle.
#[no_mangle]
pub unsafe extern "C" fn hw_field_read(path: *const c_char, out: *mut *mut HwField) -> HwStatus {
    guard(|| {
        let path = path_from(path)?;
        let out = out_ref(out, "out")?;
        *out = boxed(HwField(io::read_field(&path)?));
        Ok(())
    })
}

/// # Safety
/// `field` must be live and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn hw_field_write(field: *const HwField, path: *const c_char) -> HwStatus {
    guard(|| {
        let field = reference(field, "field")?;
        io::write_field(&path_from(path)?, &field.0)?;
        Ok(())
    })
}

/// `M(u) = int |u|^2`.
///
/// # Safety
/// `field` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hw_field_mass(field: *const HwField, out: *mut f64) -> HwStatus {
    guard(|| {
        *out_ref(out, "out")? = reference(field, "field")?.0.mass();
        Ok(())
    })
}

/// `T_v(u)` for the velocity `v[0..dim]`.
///
/// # Safety
/// `field` must be live, `v` must point to `dim` doubles and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn hw_quadratic_form_t(field: *const HwField, v: *const f64, dim: usize, out: *mut f64) -> HwStatus {
    guard(|| {
        let field = reference(field, "field")?;
        let v = doubles(v, dim, "v")?;
        if dim != field.0.grid().dim() {
            return Err(Failure(HwStatus::GridMismatch, "velocity and field dimensions differ".into()));
        }
        *out_ref(out, "out")? = spectral::quadratic_form_t(&field.0, v);
        Ok(())
    })
}

/// Weinstein quotient of `field` for velocity `v` and power `p`.
///
/// # Safety
/// As for [`hw_quadratic_form_t`].
#[no_mangle]
pub unsafe extern "C" fn hw_weinstein(field: *const HwField, v: *const f64, dim: usize, p: f64, out: *mut f64) -> HwStatus {
    guard(|| {
        let field = reference(field, "field")?;
        let v = doubles(v, dim, "v")?;
        *out_ref(out, "out")? = solver::weinstein(&field.0, v, p)?;
        Ok(())
    })
}

fn velocity(v: &[f64]) -> Result<Velocity, Failure> {
    Ok(Velocity::new(v.to_vec())?)
}

/// Solves for the subcritical profile with `omega = 1` on `grid`.
///
/// Running out of iterations is not an error; check
/// `HwProfileDiagnostics::converged`.
///
/// # Safety
/// `grid` must be live, `v` must point to `dim` doubles, `options` may be null
/// (defaults) and `out` must be valid for one handle.
#[no_mangle]
pub unsafe extern "C" fn hw_solve_profile(
    grid: *const HwGrid,
    p: f64,
    v: *const f64,
    dim: usize,
    options: *const HwSolverOptions,
    out: *mut *mut HwProfile,
) -> HwStatus {
    guard(|| {
        let grid = reference(grid, "grid")?;
        let out = out_ref(out, "out")?;
        let opts = options.as_ref().copied().unwrap_or_else(|| hw_solver_options_default());
        let params = WaveParams::new(dim, p, velocity(doubles(v, dim, "v")?)?)?;
        *out = boxed(HwProfile(solver::solve_profile(&params, &grid.0, &opts.to_config())?));
        Ok(())
    })
}

/// Solves the energy-critical problem (`d >= 2`).
///
/// # Safety
/// As for [`hw_solve_profile`].
#[no_mangle]
pub unsafe extern "C" fn hw_solve_critical_profile(
    grid: *const HwGrid,
    v: *const f64,
    dim: usize,
    options: *const HwSolverOptions,
    out: *mut *mut HwProfile,
) -> HwStatus {
    guard(|| {
        let grid = reference(grid, "grid")?;
        let out = out_ref(out, "out")?;
        let opts = options.as_ref().copied().unwrap_or_else(|| hw_solver_options_default());
        let v = velocity(doubles(v, dim, "v")?)?;
        *out = boxed(HwProfile(solver::solve_critical_profile(dim, &v, &grid.0, &opts.to_config())?));
        Ok(())
    })
}

/// # Safety
/// `profile` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hw_profile_free(profile: *mut HwProfile) {
    if !profile.is_null() {
        drop(Box::from_raw(profile));
    }
}

/// # Safety
/// `profile` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hw_profile_diagnostics(profile: *const HwProfile, out: *mut HwProfileDiagnostics) -> HwStatus {
    guard(|| {
        let r = &reference(profile, "profile")?.0;
        *out_ref(out, "out")? = HwProfileDiagnostics {
            el_residual: r.el_residual,
            t_v: r.t_v,
            mass: r.mass,
            lp1_integral: r.lp1_integral,
            weinstein_value: r.weinstein_value,
            optimal_constant: r.optimal_constant,
            gamma: r.gamma,
            boundary_fraction: r.boundary_fraction,
            iters: r.iters,
            converged: r.converged,
            critical: r.kind == solver::ProfileKind::EnergyCritical,
            mass_leakage: r.mass_leakage,
        };
        Ok(())
    })
}

/// Copy of the profile samples as a new field handle.
///
/// # Safety
/// `profile` must be live and `out` valid for one handle.
#[no_mangle]
pub unsafe extern "C" fn hw_profile_field(profile: *const HwProfile, out: *mut *mut HwField) -> HwStatus {
    guard(|| {
        let r = &reference(profile, "profile")?.0;
        *out_ref(out, "out")? = boxed(HwField(r.profile.clone()));
        Ok(())
    })
}

/// Virial and Pohozaev residuals of `field` for power `p`, velocity `v` and
/// mass parameter `m` (the Riesz symbol is `xi_k / sqrt(|xi|^2 + m^2)`).
///
/// # Safety
/// `field` must be live, `v` must point to `dim` doubles and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn hw_identity_report(
    field: *const HwField,
    p: f64,
    v: *const f64,
    dim: usize,
    m: f64,
    out: *mut HwIdentityReport,
) -> HwStatus {
    guard(|| {
        let field = reference(field, "field")?;
        let params = WaveParams::new(dim, p, velocity(doubles(v, dim, "v")?)?)?.with_mass(m)?;
        let report = identities::identity_report(&field.0, &params)?;
        let mut virial = [0.0; 3];
        virial[..dim].copy_from_slice(&report.virial_residuals);
        *out_ref(out, "out")? = HwIdentityReport {
            virial_residuals: virial,
            dim,
            pohozaev_residual_1: report.pohozaev_residual_1,
            pohozaev_residual_2: report.pohozaev_residual_2,
            el_residual: report.el_residual,
        };
        Ok(())
    })
}

/// Resolvent kernel `G_v(x)` by quadrature.
///
/// # Safety
/// `x` and `v` must point to `dim` doubles; the outputs must be writable
/// (`error` may be null).
#[no_mangle]
pub unsafe extern "C" fn hw_kernel_eval(
    x: *const f64,
    v: *const f64,
    dim: usize,
    re: *mut f64,
    im: *mut f64,
    error: *mut f64,
) -> HwStatus {
    guard(|| {
        let sample = kernel::kernel_eval(doubles(x, dim, "x")?, doubles(v, dim, "v")?)?;
        *out_ref(re, "re")? = sample.value.re;
        *out_ref(im, "im")? = sample.value.im;
        if let Some(e) = error.as_mut() {
            *e = sample.quadrature_error;
        }
        Ok(())
    })
}

/// `(sqrt(-Lap) + i v.grad + 1)^{-1} field` as a new handle.
///
/// # Safety
/// `field` must be live, `v` must point to `dim` doubles and `out` be valid
/// for one handle.
#[no_mangle]
pub unsafe extern "C" fn hw_resolvent_apply(field: *const HwField, v: *const f64, dim: usize, out: *mut *mut HwField) -> HwStatus {
    guard(|| {
        let field = reference(field, "field")?;
        let v = doubles(v, dim, "v")?;
        *out_ref(out, "out")? = boxed(HwField(kernel::resolvent_apply(&field.0, v)?));
        Ok(())
    })
}

/// Strang-split evolution of `field` to time `final_time`; the final state is
/// returned as a new handle together with the relative mass and energy drifts.
/// Returns `HW_STATUS_BLOW_UP` (with the last finite state in `out`) when the
/// solution stops being finite.
///
/// # Safety
/// `field` must be live, `out` valid for one handle; the drift pointers may be null.
#[no_mangle]
pub unsafe extern "C" fn hw_evolve(
    field: *const HwField,
    p: f64,
    dt: f64,
    final_time: f64,
    out: *mut *mut HwField,
    mass_drift: *mut f64,
    energy_drift: *mut f64,
) -> HwStatus {
    guard(|| {
        let field = reference(field, "field")?;
        let out = out_ref(out, "out")?;
        let steps = (final_time / dt).round().max(1.0) as usize;
        let cfg = EvolutionConfig { record_stride: steps, ..EvolutionConfig::new(dt, final_time) };
        let traj = evolution::evolve(&field.0, p, &cfg)?;
        *out = boxed(HwField(traj.last().clone()));
        if let Some(m) = mass_drift.as_mut() {
            *m = traj.mass_drift();
        }
        if let Some(e) = energy_drift.as_mut() {
            *e = traj.energy_drift();
        }
        match traj.status {
            RunStatus::Completed => Ok(()),
            RunStatus::BlowUp { t } => Err(Failure(HwStatus::BlowUp, format!("solution blew up at t = {t}"))),
        }
    })
}

