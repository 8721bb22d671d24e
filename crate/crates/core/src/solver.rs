//! Traveling-wave profiles by Petviashvili iteration.
//!
//! The subcritical profile solves
//! `sqrt(-Lap) Q + i v.grad Q + Q - |Q|^{p-1} Q = 0`, i.e. `L_v Q = N(Q)` with
//! the multiplier `L_v = |xi| - v.xi + 1`. The update is
//!
//! ```text
//! Q_{n+1} = gamma_n^theta L_v^{-1} N(Q_n),
//! gamma_n = <Q_n, L_v Q_n> / <Q_n, N(Q_n)>,
//! ```
//!
//! with `theta = p / (p - 1)`. At a fixed point `gamma = 1`, so the limit
//! solves the equation with `omega = 1` and no further rescaling is needed.
//!
//! The energy-critical problem (`d >= 2`, `p = (d+1)/(d-1)`) has no mass term;
//! the zero mode of `|xi| - v.xi` vanishes, so that iteration runs on
//! mean-zero fields and the residual is measured after projecting out the mean.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fft::{self, Direction};
use crate::field::Field;
use crate::grid::Grid;
use crate::params::{critical_exponent, Velocity, WaveParams};
use crate::spectral::{self, profile_symbol};

/// Initial profile for the iteration.
#[derive(Debug, Clone, PartialEq)]
pub enum SeedProfile {
    /// `exp(-|x|^2 / 2) e^{i v.x}`, centered at the origin.
    Gaussian,
    /// `2 / (1 + |x|^2)`.
    ExplicitQ0,
    /// A caller-supplied field on the solve grid.
    Provided(Field),
    /// A few randomly placed, boosted gaussian bumps drawn from a seeded RNG.
    Random(u64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub max_iters: usize,
    /// Target for the relative Euler-Lagrange residual.
    pub tol: f64,
    /// Stabilizing exponent; `None` means `p / (p - 1)`.
    pub stabilizer: Option<f64>,
    pub seed: SeedProfile,
    /// Mixing weight of the new iterate, in `(0, 1]`.
    pub damping: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { max_iters: 2000, tol: 1e-10, stabilizer: None, seed: SeedProfile::Gaussian, damping: 1.0 }
    }
}

impl SolverConfig {
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_seed(mut self, seed: SeedProfile) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidArgument(format!("tolerance must be positive, got {}", self.tol)));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidArgument("max_iters must be at least 1".into()));
        }
        if let Some(theta) = self.stabilizer {
            if !(theta > 1.0 && theta.is_finite()) {
                return Err(Error::InvalidArgument(format!("stabilizer must exceed 1, got {theta}")));
            }
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::InvalidArgument(format!("damping must lie in (0, 1], got {}", self.damping)));
        }
        Ok(())
    }

    fn theta(&self, p: f64) -> f64 {
        self.stabilizer.unwrap_or(p / (p - 1.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    Subcritical,
    EnergyCritical,
}

#[derive(Debug, Clone)]
pub struct ProfileResult {
    pub profile: Field,
    pub params: WaveParams,
    pub kind: ProfileKind,
    pub el_residual: f64,
    pub t_v: f64,
    pub mass: f64,
    /// `int |Q|^{p+1} dx`
    pub lp1_integral: f64,
    pub weinstein_value: f64,
    pub optimal_constant: f64,
    /// Last value of the Rayleigh-type ratio; tends to 1 at the fixed point.
    pub gamma: f64,
    pub iters: usize,
    pub converged: bool,
    /// Share of the mass sitting in the outer tenth of the box.
    pub boundary_fraction: f64,
    /// Set for critical profiles whose mass is not confined to the box.
    pub mass_leakage: bool,
}

/// Seed field on `grid` for a given velocity.
pub fn seed_field(seed: &SeedProfile, grid: &Grid, v: &[f64]) -> Result<Field> {
    let field = match seed {
        SeedProfile::Gaussian => Field::from_fn(*grid, |x| {
            let r2: f64 = x.iter().map(|c| c * c).sum();
            let phase: f64 = x.iter().zip(v).map(|(a, b)| a * b).sum();
            Complex64::from_polar((-0.5 * r2).exp(), phase)
        }),
        SeedProfile::ExplicitQ0 => explicit_q0(grid),
        SeedProfile::Provided(f) => {
            if !f.grid().same_as(grid) {
                return Err(Error::GridMismatch("seed profile lives on a different grid".into()));
            }
            f.clone()
        }
        SeedProfile::Random(seed) => random_bumps(grid, *seed),
    };
    Ok(field)
}

fn random_bumps(grid: &Grid, seed: u64) -> Field {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = grid.dim();
    let count = rng.gen_range(1..=3);
    let bumps: Vec<(Vec<f64>, f64, f64, Vec<f64>, f64)> = (0..count)
        .map(|_| {
            let center: Vec<f64> = (0..dim).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let width = rng.gen_range(0.5..3.0);
            let amp = rng.gen_range(0.5..2.0);
            let boost: Vec<f64> = (0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let phase = rng.gen_range(0.0..2.0 * PI);
            (center, width, amp, boost, phase)
        })
        .collect();
    Field::from_fn(*grid, |x| {
        bumps
            .iter()
            .map(|(c, w, a, k, ph)| {
                let r2: f64 = x.iter().zip(c).map(|(xi, ci)| (xi - ci).powi(2)).sum();
                let kx: f64 = x.iter().zip(k).map(|(xi, ki)| xi * ki).sum();
                Complex64::from_polar(a * (-r2 / (2.0 * w * w)).exp(), kx + ph)
            })
            .sum()
    })
}

/// The explicit `d = 1`, `p = 2`, `v = 0` profile `2 / (1 + x^2)`, radially
/// extended as `2 / (1 + |x|^2)` on higher-dimensional grids.
pub fn explicit_q0(grid: &Grid) -> Field {
    Field::from_real_fn(*grid, |x| 2.0 / (1.0 + x.iter().map(|c| c * c).sum::<f64>()))
}

/// Max-norm error of `q` against `reference` relative to `max |reference|`,
/// after rolling the peak of `q` onto the origin and removing its phase there.
pub fn peak_aligned_error(q: &Field, reference: &Field) -> Result<f64> {
    q.ensure_same_grid(reference)?;
    let centered = q.centered_on_peak();
    let peak = centered.values()[centered.peak_index()];
    if peak.norm() == 0.0 {
        return Err(Error::ZeroField);
    }
    let aligned = centered.scale(peak.conj() / peak.norm());
    let err = aligned
        .values()
        .iter()
        .zip(reference.values())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    Ok(err / reference.max_abs())
}

/// Scale-invariant Weinstein quotient
/// `int |u|^{p+1} / (T_v(u)^{d(p-1)/2} M(u)^{(p+1)/2 - d(p-1)/2})`.
pub fn weinstein(u: &Field, v: &[f64], p: f64) -> Result<f64> {
    let dim = u.grid().dim();
    check_velocity(v, dim)?;
    if !(p > 1.0 && p < critical_exponent(dim)) {
        return Err(Error::InvalidExponent { p, dim });
    }
    if u.is_zero() {
        return Err(Error::ZeroField);
    }
    let t = spectral::quadratic_form_t(u, v);
    let m = u.mass();
    let a = dim as f64 * (p - 1.0) / 2.0;
    let b = (p + 1.0) / 2.0 - a;
    Ok(u.lq_integral(p + 1.0) / (t.powf(a) * m.powf(b)))
}

fn check_velocity(v: &[f64], dim: usize) -> Result<()> {
    if v.len() != dim {
        return Err(Error::InvalidArgument(format!(
            "velocity has {} components on a {dim}-dimensional grid",
            v.len()
        )));
    }
    let speed = v.iter().map(|c| c * c).sum::<f64>().sqrt();
    if speed >= 1.0 {
        return Err(Error::Supersonic { speed });
    }
    Ok(())
}

/// Raw state of a finished Petviashvili run.
#[derive(Debug, Clone)]
pub struct Iteration {
    pub field: Field,
    pub residual: f64,
    pub gamma: f64,
    pub iters: usize,
    pub converged: bool,
}

/// Fixed-point iteration `Q <- gamma^theta L^{-1} N(Q)` for an arbitrary
/// real multiplier `symbol`.
///
/// With `project_mean` the zero mode is removed from `N(Q)` before inversion
/// and from the residual. No admissibility checks are made on the symbol, so
/// this also drives the probe at `|v| >= 1`.
pub fn petviashvili(
    symbol: &[f64],
    p: f64,
    seed: Field,
    cfg: &SolverConfig,
    project_mean: bool,
) -> Result<Iteration> {
    cfg.validate()?;
    let grid = *seed.grid();
    if symbol.len() != grid.len() {
        return Err(Error::InvalidArgument("symbol length does not match grid".into()));
    }
    if seed.is_zero() {
        return Err(Error::TrivialLimit { iters: 0 });
    }
    let theta = cfg.theta(p);
    let initial_norm = seed.l2_norm();

    let mut q_raw = fft::forward(&grid, seed.values());
    if project_mean {
        q_raw[0] = Complex64::default();
    }
    let mut q = Field::new(grid, fft::inverse(&grid, &q_raw))?;
    let mut n_raw = fft::forward(&grid, spectral::power_nonlinearity(&q, p).values());
    if project_mean {
        n_raw[0] = Complex64::default();
    }

    let mut residual = relative_residual(symbol, &q_raw, &n_raw);
    let mut gamma = f64::NAN;
    for iter in 1..=cfg.max_iters {
        let lq: f64 = q_raw.iter().zip(symbol).map(|(z, s)| s * z.norm_sqr()).sum();
        let qn: f64 = q_raw.iter().zip(&n_raw).map(|(a, b)| (a.conj() * b).re).sum();
        gamma = lq / qn;
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::Divergence {
                iters: iter,
                reason: format!("stabilizing ratio {gamma} is not positive"),
            });
        }
        let factor = gamma.powf(theta);
        let mut next: Vec<Complex64> = n_raw
            .iter()
            .zip(symbol)
            .map(|(nz, s)| if *s == 0.0 { Complex64::default() } else { nz * (factor / s) })
            .collect();
        if cfg.damping < 1.0 {
            next.iter_mut()
                .zip(&q_raw)
                .for_each(|(a, b)| *a = *a * cfg.damping + b * (1.0 - cfg.damping));
        }
        q_raw = next;
        let mut values = q_raw.clone();
        fft::fft_nd(&grid, &mut values, Direction::Inverse);
        q = Field::new(grid, values)?;

        if !q.is_finite() {
            return Err(Error::Divergence { iters: iter, reason: "non-finite iterate".into() });
        }
        let norm = q.l2_norm();
        if norm < 1e-10 * initial_norm {
            return Err(Error::TrivialLimit { iters: iter });
        }
        if norm > 1e10 * initial_norm {
            return Err(Error::Divergence { iters: iter, reason: format!("norm grew to {norm:e}") });
        }

        n_raw = fft::forward(&grid, spectral::power_nonlinearity(&q, p).values());
        if project_mean {
            n_raw[0] = Complex64::default();
        }
        residual = relative_residual(symbol, &q_raw, &n_raw);
        if !residual.is_finite() {
            return Err(Error::Divergence { iters: iter, reason: "non-finite residual".into() });
        }
        if residual <= cfg.tol {
            return Ok(Iteration { field: q, residual, gamma, iters: iter, converged: true });
        }
    }
    Ok(Iteration { field: q, residual, gamma, iters: cfg.max_iters, converged: false })
}

// ||L q - n|| / ||q|| evaluated on raw FFT buffers (the Parseval factors cancel)
fn relative_residual(symbol: &[f64], q_raw: &[Complex64], n_raw: &[Complex64]) -> f64 {
    let num: f64 = q_raw
        .iter()
        .zip(n_raw)
        .zip(symbol)
        .map(|((q, n), s)| (q * s - n).norm_sqr())
        .sum();
    let den: f64 = q_raw.iter().map(|z| z.norm_sqr()).sum();
    (num / den).sqrt()
}

/// Relative residual `||L_v Q - |Q|^{p-1} Q|| / ||Q||` of the profile
/// equation with `L_v = sqrt(|xi|^2 + m^2) - v.xi + omega`.
pub fn el_residual(q: &Field, params: &WaveParams) -> Result<f64> {
    if q.is_zero() {
        return Err(Error::ZeroField);
    }
    let (v, m, omega) = (params.v(), params.mass, params.omega);
    let symbol: Vec<f64> =
        q.grid().modes().map(|mode| (mode.norm.powi(2) + m * m).sqrt() - mode.dot_odd(v) + omega).collect();
    let q_raw = fft::forward(q.grid(), q.values());
    let n_raw = fft::forward(q.grid(), spectral::power_nonlinearity(q, params.p).values());
    Ok(relative_residual(&symbol, &q_raw, &n_raw))
}

/// Solves for the subcritical profile `Q_v` with `omega = 1`, `m = 0`.
///
/// Non-convergence within `max_iters` is reported through
/// `ProfileResult::converged`; collapse and blow-up are errors.
pub fn solve_profile(params: &WaveParams, grid: &Grid, cfg: &SolverConfig) -> Result<ProfileResult> {
    params.validate()?;
    params.ensure_subcritical()?;
    if grid.dim() != params.dim {
        return Err(Error::GridMismatch(format!("grid is {}-d, parameters are {}-d", grid.dim(), params.dim)));
    }
    check_velocity(params.v(), params.dim)?;
    if params.omega != 1.0 || params.mass != 0.0 {
        return Err(Error::InvalidArgument(
            "the solver works with omega = 1 and m = 0; use rescale_profile for other frequencies".into(),
        ));
    }
    let v = params.v();
    let symbol = profile_symbol(grid, v, 1.0);
    let seed = seed_field(&cfg.seed, grid, v)?;
    let it = petviashvili(&symbol, params.p, seed, cfg, false)?;

    let q = it.field;
    let t_v = spectral::quadratic_form_t(&q, v);
    let mass = q.mass();
    let lp1 = q.lq_integral(params.p + 1.0);
    let w = weinstein(&q, v, params.p)?;
    let boundary_fraction = q.boundary_mass_fraction(0.9);
    Ok(ProfileResult {
        profile: q,
        params: params.clone(),
        kind: ProfileKind::Subcritical,
        el_residual: it.residual,
        t_v,
        mass,
        lp1_integral: lp1,
        weinstein_value: w,
        optimal_constant: w,
        gamma: it.gamma,
        iters: it.iters,
        converged: it.converged,
        boundary_fraction,
        mass_leakage: false,
    })
}

/// Boundary-mass share above which a critical profile is flagged as leaking.
pub const LEAKAGE_THRESHOLD: f64 = 1e-6;

/// Solves the energy-critical equation
/// `sqrt(-Lap) W + i v.grad W - |W|^{2/(d-1)} W = 0` for `d >= 2`.
///
/// Reports `T_v(W)`, `int |W|^{2d/(d-1)}` and `C = T_v(W)^{-1/(d-1)}`.
/// `W` need not be square integrable; `mass_leakage` flags profiles whose mass
/// reaches the box boundary, in which case only homogeneous quantities are
/// meaningful.
pub fn solve_critical_profile(
    dim: usize,
    velocity: &Velocity,
    grid: &Grid,
    cfg: &SolverConfig,
) -> Result<ProfileResult> {
    if dim < 2 {
        return Err(Error::InvalidArgument("the energy-critical problem needs d >= 2".into()));
    }
    if grid.dim() != dim || velocity.dim() != dim {
        return Err(Error::GridMismatch("grid, velocity and dimension disagree".into()));
    }
    let v = velocity.components();
    check_velocity(v, dim)?;
    let p = critical_exponent(dim);
    let symbol = profile_symbol(grid, v, 0.0);
    let seed = seed_field(&cfg.seed, grid, v)?;
    let it = petviashvili(&symbol, p, seed, cfg, true)?;

    let w = it.field;
    let t_v = spectral::quadratic_form_t(&w, v);
    let lp1 = w.lq_integral(p + 1.0);
    let d = dim as f64;
    let functional = lp1 / t_v.powf(d / (d - 1.0));
    let constant = t_v.powf(-1.0 / (d - 1.0));
    let boundary_fraction = w.boundary_mass_fraction(0.9);
    let params = WaveParams { dim, p, mass: 0.0, velocity: velocity.clone(), omega: 0.0 };
    Ok(ProfileResult {
        mass: w.mass(),
        profile: w,
        params,
        kind: ProfileKind::EnergyCritical,
        el_residual: it.residual,
        t_v,
        lp1_integral: lp1,
        weinstein_value: functional,
        optimal_constant: constant,
        gamma: it.gamma,
        iters: it.iters,
        converged: it.converged,
        boundary_fraction,
        mass_leakage: boundary_fraction > LEAKAGE_THRESHOLD,
    })
}

/// Numerical estimate of the optimal GNS constant: the functional value at
/// the converged optimizer.
pub fn optimal_constant(result: &ProfileResult) -> Result<f64> {
    if !result.converged {
        return Err(Error::NotConverged { residual: result.el_residual, iters: result.iters });
    }
    match result.kind {
        ProfileKind::Subcritical => weinstein(&result.profile, result.params.v(), result.params.p),
        ProfileKind::EnergyCritical => {
            let d = result.params.dim as f64;
            Ok(spectral::quadratic_form_t(&result.profile, result.params.v()).powf(-1.0 / (d - 1.0)))
        }
    }
}

/// `a Q(b x)` sampled exactly: the same samples on the dilated grid
/// `[-L/b, L/b)^d` with the same number of points.
pub fn rescale_profile(q: &Field, a: f64, b: f64) -> Result<Field> {
    if !(a > 0.0 && a.is_finite() && b > 0.0 && b.is_finite()) {
        return Err(Error::InvalidArgument(format!("rescaling needs a, b > 0, got a = {a}, b = {b}")));
    }
    let g = q.grid();
    let dilated = Grid::new(g.dim(), g.n(), g.half_extent() / b)?;
    q.relabel(dilated).map(|f| f.scale_real(a))
}

/// `a Q(b x)` resampled back onto the grid of `Q`.
///
/// `b` must be a power of two. Stretching (`b < 1`) refines the dilated
/// samples by spectral zero-padding and crops the central box; compressing
/// (`b > 1`) embeds the dilated box in zeros and truncates the spectrum.
/// A [`Error::ResolutionLoss`] is returned when the discarded share of the
/// field exceeds `tol`.
pub fn rescale_onto_grid(q: &Field, a: f64, b: f64, tol: f64) -> Result<Field> {
    let dilated = rescale_profile(q, a, b)?;
    let log2 = b.log2();
    if (log2 - log2.round()).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!("resampling needs b = 2^k, got {b}")));
    }
    let k = log2.round() as i32;
    if k == 0 {
        return Ok(dilated);
    }
    let factor = 1usize << k.unsigned_abs();
    let (out, lost) = if k < 0 {
        let (fine, lost_spec) = resample_spectral(&dilated, dilated.grid().n() * factor)?;
        let (cropped, lost_mass) = crop_center(&fine, q.grid().n())?;
        (cropped, lost_spec + lost_mass)
    } else {
        let (embedded, edge) = embed_center(&dilated, factor)?;
        let (coarse, lost_spec) = resample_spectral(&embedded, q.grid().n())?;
        (coarse, lost_spec + edge)
    };
    if lost > tol {
        return Err(Error::ResolutionLoss { lost, tol });
    }
    Ok(out)
}

/// Changes the number of points per axis on the same box by zero-padding or
/// truncating the spectrum. Returns the share of spectral energy discarded
/// (Nyquist bins included, which are not carried over).
pub fn resample_spectral(u: &Field, n_new: usize) -> Result<(Field, f64)> {
    let g = *u.grid();
    let target = Grid::new(g.dim(), n_new, g.half_extent())?;
    let raw = fft::forward(&g, u.values());
    let total: f64 = raw.iter().map(|z| z.norm_sqr()).sum();
    let ratio = (target.len() as f64) / (g.len() as f64);
    let keep = g.n().min(n_new) / 2;
    let mut out = vec![Complex64::default(); target.len()];
    let mut kept = 0.0;
    for (idx, z) in raw.iter().enumerate() {
        let m = g.unflatten(idx);
        let mut dest = [0usize; 3];
        let mut inside = true;
        for axis in 0..g.dim() {
            let s = g.signed_index(m[axis]);
            if s.unsigned_abs() as usize >= keep {
                inside = false;
                break;
            }
            dest[axis] = s.rem_euclid(n_new as i64) as usize;
        }
        if inside {
            out[target.flatten(&dest)] = z * ratio;
            kept += z.norm_sqr();
        }
    }
    fft::fft_nd(&target, &mut out, Direction::Inverse);
    let lost = if total > 0.0 { 1.0 - kept / total } else { 0.0 };
    Ok((Field::new(target, out)?, lost.max(0.0)))
}

// central n_new^d block of a field, on the correspondingly smaller box
fn crop_center(u: &Field, n_new: usize) -> Result<(Field, f64)> {
    let g = *u.grid();
    let target = Grid::new(g.dim(), n_new, g.half_extent() * n_new as f64 / g.n() as f64)?;
    let offset = (g.n() - n_new) / 2;
    let mut out = vec![Complex64::default(); target.len()];
    for (idx, slot) in out.iter_mut().enumerate() {
        let m = target.unflatten(idx);
        let mut src = [0usize; 3];
        for axis in 0..g.dim() {
            src[axis] = m[axis] + offset;
        }
        *slot = u.values()[g.flatten(&src)];
    }
    let total = u.mass();
    let f = Field::new(target, out)?;
    let lost = if total > 0.0 { 1.0 - f.mass() / total } else { 0.0 };
    Ok((f, lost.max(0.0)))
}

// zero-padded embedding of a field into a box `factor` times larger
fn embed_center(u: &Field, factor: usize) -> Result<(Field, f64)> {
    let g = *u.grid();
    let n_new = g.n() * factor;
    let target = Grid::new(g.dim(), n_new, g.half_extent() * factor as f64)?;
    let offset = (n_new - g.n()) / 2;
    let mut out = vec![Complex64::default(); target.len()];
    for (idx, z) in u.values().iter().enumerate() {
        let m = g.unflatten(idx);
        let mut dest = [0usize; 3];
        for axis in 0..g.dim() {
            dest[axis] = m[axis] + offset;
        }
        out[target.flatten(&dest)] = *z;
    }
    // mass near the old box edge would be cut off by the embedding
    let edge = u.boundary_mass_fraction(0.9);
    Ok((Field::new(target, out)?, edge))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q0_grid() -> Grid {
        Grid::new(1, 4096, 200.0 * PI).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::default().validate().is_ok());
        assert!(SolverConfig::default().with_tol(0.0).validate().is_err());
        assert!(SolverConfig::default().with_max_iters(0).validate().is_err());
        let c = SolverConfig { stabilizer: Some(1.0), ..Default::default() };
        assert!(c.validate().is_err());
        let c = SolverConfig { damping: 0.0, ..Default::default() };
        assert!(c.validate().is_err());
    }

    #[test]
    fn weinstein_rejects_bad_input() {
        let g = Grid::new(1, 64, 10.0).unwrap();
        assert!(matches!(weinstein(&Field::zeros(g), &[0.0], 2.0), Err(Error::ZeroField)));
        let u = explicit_q0(&g);
        assert!(matches!(weinstein(&u, &[1.0], 2.0), Err(Error::Supersonic { .. })));
        let g2 = Grid::new(2, 16, 10.0).unwrap();
        let u2 = explicit_q0(&g2);
        assert!(matches!(weinstein(&u2, &[0.0, 0.0], 3.0), Err(Error::InvalidExponent { .. })));
    }

    #[test]
    fn q0_is_a_fixed_point_of_the_update() {
        let g = q0_grid();
        let params = WaveParams::new(1, 2.0, Velocity::zero(1)).unwrap();
        let cfg = SolverConfig::default().with_seed(SeedProfile::ExplicitQ0).with_max_iters(1);
        let res = solve_profile(&params, &g, &cfg).unwrap();
        assert!((res.gamma - 1.0).abs() < 1e-4, "gamma = {}", res.gamma);
        let err = peak_aligned_error(&res.profile, &explicit_q0(&g)).unwrap();
        assert!(err < 1e-4, "one step moved Q0 by {err}");
    }

    #[test]
    fn zero_seed_is_trivial_limit() {
        let g = Grid::new(2, 16, 8.0).unwrap();
        let cfg = SolverConfig::default().with_seed(SeedProfile::Provided(Field::zeros(g)));
        let err = solve_critical_profile(2, &Velocity::zero(2), &g, &cfg).unwrap_err();
        assert!(matches!(err, Error::TrivialLimit { .. }));
    }

    #[test]
    fn solver_preconditions() {
        let g = Grid::new(1, 64, 10.0).unwrap();
        let fast = WaveParams::new(1, 3.0, Velocity::new(vec![1.2]).unwrap()).unwrap();
        assert!(matches!(solve_profile(&fast, &g, &SolverConfig::default()), Err(Error::Supersonic { .. })));
        let omega = WaveParams::new(1, 3.0, Velocity::zero(1)).unwrap().with_omega(2.0).unwrap();
        assert!(solve_profile(&omega, &g, &SolverConfig::default()).is_err());
        assert!(solve_critical_profile(1, &Velocity::zero(1), &g, &SolverConfig::default()).is_err());
    }

    #[test]
    fn non_convergence_is_reported_not_raised() {
        let g = Grid::new(1, 1024, 50.0).unwrap();
        let params = WaveParams::new(1, 3.0, Velocity::new(vec![0.5]).unwrap()).unwrap();
        let cfg = SolverConfig::default().with_max_iters(3);
        let res = solve_profile(&params, &g, &cfg).unwrap();
        assert!(!res.converged);
        assert_eq!(res.iters, 3);
        assert!(optimal_constant(&res).is_err());
    }

    #[test]
    fn identity_rescaling() {
        let g = Grid::new(1, 64, 10.0).unwrap();
        let u = explicit_q0(&g);
        let r = rescale_profile(&u, 1.0, 1.0).unwrap();
        assert_eq!(r, u);
        let r = rescale_onto_grid(&u, 1.0, 1.0, 1e-12).unwrap();
        assert_eq!(r, u);
    }

    #[test]
    fn resampling_round_trip() {
        let g = Grid::new(1, 256, 20.0).unwrap();
        let u = Field::from_real_fn(g, |x| (-x[0] * x[0]).exp());
        let stretched = rescale_onto_grid(&u, 1.0, 0.5, 1e-10).unwrap();
        let expected = Field::from_real_fn(g, |x| (-(0.5 * x[0]).powi(2)).exp());
        let err = stretched.sub(&expected).unwrap().max_abs();
        assert!(err < 1e-10, "stretch error {err}");
        let back = rescale_onto_grid(&stretched, 1.0, 2.0, 1e-10).unwrap();
        let err = back.sub(&u).unwrap().max_abs();
        assert!(err < 1e-10, "compress error {err}");
    }

    #[test]
    fn resolution_loss_is_flagged() {
        let g = Grid::new(1, 64, 20.0).unwrap();
        // occupies most of the box: stretching by 4 pushes mass out of it
        let u = Field::from_real_fn(g, |x| (-(x[0] / 8.0).powi(2)).exp());
        let err = rescale_onto_grid(&u, 1.0, 0.25, 1e-6).unwrap_err();
        assert!(matches!(err, Error::ResolutionLoss { .. }));
        assert!(rescale_onto_grid(&u, 1.0, 3.0, 1e-6).is_err());
    }
}
