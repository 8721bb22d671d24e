//! Split-step Fourier integration of `i u_t = sqrt(-Lap) u - |u|^{p-1} u`.
//!
//! The nonlinear substep `i u_t = -|u|^{p-1} u` keeps `|u|` fixed pointwise,
//! so it is solved exactly by the phase rotation `u e^{i dt |u|^{p-1}}`. The
//! linear substep is exact in Fourier space. Both conserve the discrete mass.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft::{self, Direction};
use crate::field::Field;
use crate::grid::Grid;
use crate::spectral;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// First order: linear step, then nonlinear step.
    Lie,
    /// Second order: half linear, nonlinear, half linear.
    Strang,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolutionConfig {
    pub dt: f64,
    pub final_time: f64,
    pub scheme: Scheme,
    /// Steps between recorded snapshots.
    pub record_stride: usize,
    /// `false` switches the nonlinear substep off (free evolution).
    pub nonlinear: bool,
    /// Amplitude beyond which the run is treated as blowing up.
    pub blowup_amplitude: f64,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            final_time: 5.0,
            scheme: Scheme::Strang,
            record_stride: 100,
            nonlinear: true,
            blowup_amplitude: 1e8,
        }
    }
}

impl EvolutionConfig {
    pub fn new(dt: f64, final_time: f64) -> Self {
        Self { dt, final_time, ..Self::default() }
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.record_stride = stride;
        self
    }

    pub fn linear(mut self) -> Self {
        self.nonlinear = false;
        self
    }

    pub fn validate(&self, grid: &Grid) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidArgument(format!("time step must be positive, got {}", self.dt)));
        }
        if !(self.final_time > 0.0 && self.final_time.is_finite()) {
            return Err(Error::InvalidArgument(format!("final time must be positive, got {}", self.final_time)));
        }
        if self.record_stride == 0 {
            return Err(Error::InvalidArgument("record stride must be at least 1".into()));
        }
        if !(self.blowup_amplitude > 0.0) {
            return Err(Error::InvalidArgument("blow-up amplitude must be positive".into()));
        }
        let phase = self.dt * grid.max_frequency();
        if phase > PI {
            log::warn!("dt * max|xi| = {phase:.3} exceeds pi; the fastest linear phase is under-resolved");
        }
        Ok(())
    }

    /// Number of steps, `round(T / dt)`.
    pub fn steps(&self) -> usize {
        (self.final_time / self.dt).round() as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Diagnostics {
    pub t: f64,
    pub mass: f64,
    pub energy: f64,
    /// Pulled-back `H^{1/2}` increment from the previous snapshot (0 for the first).
    pub defect: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum RunStatus {
    Completed,
    /// Values stopped being finite (or exceeded the amplitude cap) at time `t`;
    /// the trajectory ends with the last finite snapshot.
    BlowUp { t: f64 },
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub p: f64,
    pub snapshots: Vec<(f64, Field)>,
    pub diagnostics: Vec<Diagnostics>,
    pub status: RunStatus,
}

impl Trajectory {
    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.snapshots.iter().map(|(t, _)| *t)
    }

    pub fn last(&self) -> &Field {
        &self.snapshots.last().expect("trajectory always holds the initial datum").1
    }

    /// Snapshot recorded at `t`, up to rounding of the step count.
    pub fn at(&self, t: f64) -> Result<&Field> {
        let tol = 1e-9 * t.abs().max(1.0);
        self.snapshots
            .iter()
            .find(|(s, _)| (s - t).abs() <= tol)
            .map(|(_, f)| f)
            .ok_or(Error::TimeNotInTrajectory(t))
    }

    /// `max_t |M(u(t)) - M(u_0)| / M(u_0)`.
    pub fn mass_drift(&self) -> f64 {
        relative_drift(self.diagnostics.iter().map(|d| d.mass))
    }

    /// `max_t |E(u(t)) - E(u_0)| / |E(u_0)|`.
    pub fn energy_drift(&self) -> f64 {
        relative_drift(self.diagnostics.iter().map(|d| d.energy))
    }
}

fn relative_drift(mut values: impl Iterator<Item = f64>) -> f64 {
    let Some(first) = values.next() else { return 0.0 };
    let scale = if first == 0.0 { 1.0 } else { first.abs() };
    values.map(|x| (x - first).abs() / scale).fold(0.0, f64::max)
}

/// `E(u) = 1/2 <u, sqrt(-Lap) u> - int |u|^{p+1} / (p+1)`.
pub fn energy(u: &Field, p: f64) -> f64 {
    0.5 * spectral::spectral_quadratic(u, |m| m.norm) - u.lq_integral(p + 1.0) / (p + 1.0)
}

/// Direction of the free half-wave flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Propagation {
    /// `e^{-it sqrt(-Lap)}`
    Forward,
    /// `e^{+it sqrt(-Lap)}`, the pull-back.
    Backward,
}

pub fn free_propagate(u: &Field, t: f64, direction: Propagation) -> Field {
    let sign = match direction {
        Propagation::Forward => -1.0,
        Propagation::Backward => 1.0,
    };
    let m: Vec<Complex64> = u.grid().abs_frequencies().iter().map(|k| Complex64::from_polar(1.0, sign * t * k)).collect();
    spectral::apply_multiplier(u, &m)
}

/// `|| e^{i t2 |D|} u(t2) - e^{i t1 |D|} u(t1) ||_{H^{1/2}}`, the Cauchy
/// increment of the pulled-back flow between two recorded times.
pub fn scattering_defect(traj: &Trajectory, t1: f64, t2: f64) -> Result<f64> {
    if !(t1 < t2) {
        return Err(Error::InvalidArgument(format!("defect window needs t1 < t2, got [{t1}, {t2}]")));
    }
    pulled_back_increment(traj.at(t1)?, t1, traj.at(t2)?, t2)
}

fn pulled_back_increment(u1: &Field, t1: f64, u2: &Field, t2: f64) -> Result<f64> {
    u1.ensure_same_grid(u2)?;
    let grid = u1.grid();
    let a = fft::forward(grid, u1.values());
    let b = fft::forward(grid, u2.values());
    let diff: Vec<Complex64> = grid
        .abs_frequencies()
        .iter()
        .zip(a.iter().zip(&b))
        .map(|(k, (x, y))| y * Complex64::from_polar(1.0, t2 * k) - x * Complex64::from_polar(1.0, t1 * k))
        .collect();
    Ok(spectral::spectral_quadratic_raw(grid, &diff, |m| 1.0 + m.norm).sqrt())
}

/// `||u||_{H^{1/2}}` with the weight `1 + |xi|`.
pub fn h_half_norm(u: &Field) -> f64 {
    spectral::spectral_quadratic(u, |m| 1.0 + m.norm).sqrt()
}

pub fn evolve(u0: &Field, p: f64, cfg: &EvolutionConfig) -> Result<Trajectory> {
    let grid = *u0.grid();
    cfg.validate(&grid)?;
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::InvalidExponent { p, dim: grid.dim() });
    }
    if !u0.is_finite() {
        return Err(Error::InvalidArgument("initial datum is not finite".into()));
    }

    let freqs = grid.abs_frequencies();
    let linear_step = match cfg.scheme {
        Scheme::Lie => cfg.dt,
        Scheme::Strang => 0.5 * cfg.dt,
    };
    let propagator: Vec<Complex64> = freqs.iter().map(|k| Complex64::from_polar(1.0, -linear_step * k)).collect();

    let mut traj = Trajectory { p, snapshots: Vec::new(), diagnostics: Vec::new(), status: RunStatus::Completed };
    record(&mut traj, 0.0, u0.clone(), p)?;

    let steps = cfg.steps();
    let mut raw = fft::forward(&grid, u0.values());
    for step in 1..=steps {
        raw.iter_mut().zip(&propagator).for_each(|(z, m)| *z *= m);
        fft::fft_nd(&grid, &mut raw, Direction::Inverse);
        if cfg.nonlinear {
            let dt = cfg.dt;
            raw.iter_mut().for_each(|z| *z *= Complex64::from_polar(1.0, dt * z.norm().powf(p - 1.0)));
        }
        let t = step as f64 * cfg.dt;
        let blown = raw.iter().any(|z| !(z.re.is_finite() && z.im.is_finite()) || z.norm() > cfg.blowup_amplitude);
        if blown {
            log::warn!("evolution lost finiteness at t = {t}");
            traj.status = RunStatus::BlowUp { t };
            return Ok(traj);
        }
        if cfg.scheme == Scheme::Strang {
            fft::fft_nd(&grid, &mut raw, Direction::Forward);
            raw.iter_mut().zip(&propagator).for_each(|(z, m)| *z *= m);
            if step % cfg.record_stride == 0 || step == steps {
                let values = fft::inverse(&grid, &raw);
                record(&mut traj, t, Field::new(grid, values)?, p)?;
            }
        } else {
            if step % cfg.record_stride == 0 || step == steps {
                record(&mut traj, t, Field::new(grid, raw.clone())?, p)?;
            }
            fft::fft_nd(&grid, &mut raw, Direction::Forward);
        }
    }
    Ok(traj)
}

fn record(traj: &mut Trajectory, t: f64, u: Field, p: f64) -> Result<()> {
    let defect = match traj.snapshots.last() {
        Some((s, prev)) => pulled_back_increment(prev, *s, &u, t)?,
        None => 0.0,
    };
    traj.diagnostics.push(Diagnostics { t, mass: u.mass(), energy: energy(&u, p), defect });
    traj.snapshots.push((t, u));
    Ok(())
}

/// `sup_t ||u(t) - e^{i omega t} Q(. - v t)||_{L^2} / ||Q||_{L^2}` over the
/// recorded snapshots, with the translate computed spectrally.
pub fn persistence_error(traj: &Trajectory, profile: &Field, v: &[f64], omega: f64) -> Result<f64> {
    let norm = profile.l2_norm();
    if norm == 0.0 {
        return Err(Error::ZeroField);
    }
    let mut worst: f64 = 0.0;
    for (t, u) in &traj.snapshots {
        let shift: Vec<f64> = v.iter().map(|c| c * t).collect();
        let exact = spectral::translate(profile, &shift).scale(Complex64::from_polar(1.0, omega * t));
        worst = worst.max(u.sub(&exact)?.l2_norm() / norm);
    }
    Ok(worst)
}
