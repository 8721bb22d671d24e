//! Velocity sweeps toward `|v| -> 1` and the log-log fits of the scaling laws.
//!
//! Each row is an independent solve on its own grid. Profiles spread on the
//! scale `1` along the motion but develop structure on the scale `1 - |v|`,
//! so the grid keeps `L` fixed and shrinks the spacing in proportion to
//! `1 - |v|`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::identities;
use crate::params::{Velocity, WaveParams};
use crate::solver::{self, SolverConfig};
use crate::spectral;

/// Default cap on the speed; closer to 1 the symbol lower bound `1 - |v|`
/// makes the iteration too stiff for desk-scale grids.
pub const MAX_SPEED: f64 = 1.0 - 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub dim: usize,
    pub p: f64,
    /// Speeds along the first axis, each in `[0, 1)`.
    pub speeds: Vec<f64>,
    pub half_extent: f64,
    /// Grid spacing as a multiple of `1 - |v|`.
    pub spacing_factor: f64,
    pub max_n: usize,
    pub solver: SolverConfig,
    /// Rows whose residuals exceed this are flagged and left out of fits.
    pub gate: f64,
    pub jobs: usize,
}

impl SweepConfig {
    pub fn new(dim: usize, p: f64, speeds: Vec<f64>) -> Self {
        Self {
            dim,
            p,
            speeds,
            half_extent: 50.0,
            spacing_factor: 0.1,
            max_n: 1 << 20,
            solver: SolverConfig::default(),
            gate: 1e-3,
            jobs: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.speeds.is_empty() {
            return Err(Error::InvalidArgument("sweep needs at least one speed".into()));
        }
        if let Some(s) = self.speeds.iter().find(|s| !(**s >= 0.0 && **s < 1.0)) {
            return Err(Error::InvalidArgument(format!("sweep speeds must lie in [0, 1), got {s}")));
        }
        if self.speeds.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("sweep speeds must be strictly increasing".into()));
        }
        if !(self.half_extent > 0.0 && self.spacing_factor > 0.0) {
            return Err(Error::InvalidArgument("box size and spacing factor must be positive".into()));
        }
        if self.jobs == 0 {
            return Err(Error::InvalidArgument("jobs must be at least 1".into()));
        }
        WaveParams::new(self.dim, self.p, Velocity::zero(self.dim))?.ensure_subcritical()?;
        self.solver.validate()
    }

    /// Grid used for the row at `speed`: `L` fixed, `dx ~ spacing_factor (1 - |v|)`,
    /// `n` rounded up to a power of two and capped at `max_n`.
    pub fn grid_for(&self, speed: f64) -> Result<Grid> {
        let dx = self.spacing_factor * (1.0 - speed);
        let wanted = (2.0 * self.half_extent / dx).ceil().max(8.0) as usize;
        let n = wanted.next_power_of_two().min(self.max_n.next_power_of_two());
        Grid::new(self.dim, n, self.half_extent)
    }
}

/// Speeds with `1 - |v|` geometrically spaced from `hi` down to `lo`.
pub fn geometric_speeds(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![1.0 - hi];
    }
    let ratio = (lo / hi).powf(1.0 / (count - 1) as f64);
    (0..count).map(|k| 1.0 - hi * ratio.powi(k as i32)).collect()
}

/// One sweep row. Field names are the CSV header.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub speed: f64,
    pub one_minus_v: f64,
    pub c_v: f64,
    pub mass: f64,
    pub hhalf_sq: f64,
    pub t_v: f64,
    pub el_residual: f64,
    pub virial_residual: f64,
    pub pohozaev_residual_1: f64,
    pub pohozaev_residual_2: f64,
    pub iters: usize,
    pub n: usize,
    pub half_extent: f64,
    pub converged: bool,
    pub flagged: bool,
    pub error: String,
}

impl SweepRecord {
    fn failed(speed: f64, grid: Option<&Grid>, message: String) -> Self {
        Self {
            speed,
            one_minus_v: 1.0 - speed,
            c_v: f64::NAN,
            mass: f64::NAN,
            hhalf_sq: f64::NAN,
            t_v: f64::NAN,
            el_residual: f64::NAN,
            virial_residual: f64::NAN,
            pohozaev_residual_1: f64::NAN,
            pohozaev_residual_2: f64::NAN,
            iters: 0,
            n: grid.map_or(0, |g| g.n()),
            half_extent: grid.map_or(f64::NAN, |g| g.half_extent()),
            converged: false,
            flagged: true,
            error: message,
        }
    }

    pub fn usable(&self) -> bool {
        !self.flagged
    }
}

pub fn sweep_row(cfg: &SweepConfig, speed: f64) -> SweepRecord {
    let grid = match cfg.grid_for(speed) {
        Ok(g) => g,
        Err(e) => return SweepRecord::failed(speed, None, e.to_string()),
    };
    let run = || -> Result<SweepRecord> {
        let params = WaveParams::new(cfg.dim, cfg.p, Velocity::along_first_axis(cfg.dim, speed))?;
        let res = solver::solve_profile(&params, &grid, &cfg.solver)?;
        let report = identities::identity_report(&res.profile, &params)?;
        let hhalf_sq = spectral::spectral_quadratic(&res.profile, |m| m.norm);
        let worst = report.worst();
        let flagged = !res.converged || !(worst <= cfg.gate) || !res.weinstein_value.is_finite();
        Ok(SweepRecord {
            speed,
            one_minus_v: 1.0 - speed,
            c_v: res.optimal_constant,
            mass: res.mass,
            hhalf_sq,
            t_v: res.t_v,
            el_residual: res.el_residual,
            virial_residual: report.max_virial(),
            pohozaev_residual_1: report.pohozaev_residual_1,
            pohozaev_residual_2: report.pohozaev_residual_2,
            iters: res.iters,
            n: grid.n(),
            half_extent: grid.half_extent(),
            converged: res.converged,
            flagged,
            error: if flagged { format!("residual {worst:e} above gate") } else { String::new() },
        })
    };
    run().unwrap_or_else(|e| SweepRecord::failed(speed, Some(&grid), e.to_string()))
}

/// Runs every row on a pool of `cfg.jobs` threads; rows come back in input order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRecord>> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    Ok(pool.install(|| cfg.speeds.par_iter().map(|&s| sweep_row(cfg, s)).collect()))
}

/// Least-squares line with a 95% confidence half-width on the slope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub half_width: f64,
    pub points: usize,
}

pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    let n = xs.len();
    if n != ys.len() || n < 2 {
        return Err(Error::InvalidArgument(format!("line fit needs at least two points, got {n}")));
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("line fit needs distinct abscissae".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let half_width = if n > 2 {
        let sse: f64 = xs.iter().zip(ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
        let se = (sse / (nf - 2.0) / sxx).sqrt();
        let t = StudentsT::new(0.0, 1.0, nf - 2.0).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        t.inverse_cdf(0.975) * se
    } else {
        f64::NAN
    };
    Ok(LineFit { slope, intercept, half_width, points: n })
}

/// Fit of `log y` against `log(1 - |v|)` over the usable rows.
pub fn log_slope(records: &[SweepRecord], value: impl Fn(&SweepRecord) -> f64) -> Result<LineFit> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = records
        .iter()
        .filter(|r| r.usable() && value(r) > 0.0)
        .map(|r| (r.one_minus_v.ln(), value(r).ln()))
        .unzip();
    fit_line(&xs, &ys)
}

/// `H^{1/2}` norm squared of the rescaled wave `lambda^{1/(p-1)} Q(lambda x)` with
/// `lambda = (1 - |v|)^{(p-1)/(2p)}`.
pub fn small_wave_norm(record: &SweepRecord, dim: usize, p: f64) -> f64 {
    let lambda = record.one_minus_v.powf((p - 1.0) / (2.0 * p));
    let base = 2.0 / (p - 1.0) - dim as f64;
    lambda.powf(base) * record.mass + lambda.powf(base + 1.0) * record.hhalf_sq
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmallWaveFit {
    pub norms: Vec<f64>,
    pub exponent: f64,
    /// Geometric-mean constant `c` in `norm ~ c (1 - |v|)^exponent`.
    pub constant: f64,
    /// Largest relative deviation of `norm / (c (1 - |v|)^exponent)` from 1.
    pub max_deviation: f64,
    /// Norms strictly decrease as `|v|` grows.
    pub monotone: bool,
}

/// Small-wave norms along the sweep against `(1 - |v|)^{min((p+3)/(2p), 1/p)}`.
pub fn small_wave_fit(records: &[SweepRecord], dim: usize, p: f64) -> Result<SmallWaveFit> {
    let rows: Vec<&SweepRecord> = records.iter().filter(|r| r.usable()).collect();
    if rows.len() < 2 {
        return Err(Error::InvalidArgument("small-wave fit needs at least two usable rows".into()));
    }
    let exponent = ((p + 3.0) / (2.0 * p)).min(1.0 / p);
    let norms: Vec<f64> = rows.iter().map(|r| small_wave_norm(r, dim, p)).collect();
    let ratios: Vec<f64> = rows.iter().zip(&norms).map(|(r, h)| h / r.one_minus_v.powf(exponent)).collect();
    let constant = (ratios.iter().map(|r| r.ln()).sum::<f64>() / ratios.len() as f64).exp();
    let max_deviation = ratios.iter().map(|r| (r / constant - 1.0).abs()).fold(0.0, f64::max);
    let monotone = norms.windows(2).all(|w| w[1] < w[0]);
    Ok(SmallWaveFit { norms, exponent, constant, max_deviation, monotone })
}
