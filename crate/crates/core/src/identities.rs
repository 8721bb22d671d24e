//! Residuals of the virial and Pohozaev identities, and the classifier used
//! to look for traveling waves at `|v| >= 1`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::Grid;
use crate::params::WaveParams;
use crate::solver::{self, SolverConfig};
use crate::spectral;

/// All identity residuals of one field, each relative to `M(Q)` or `T_v(Q)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub virial_residuals: Vec<f64>,
    pub pohozaev_residual_1: f64,
    pub pohozaev_residual_2: f64,
    pub el_residual: f64,
}

impl IdentityReport {
    pub fn max_virial(&self) -> f64 {
        self.virial_residuals.iter().copied().fold(0.0, f64::max)
    }

    /// Largest of the virial and Pohozaev residuals.
    pub fn worst(&self) -> f64 {
        self.max_virial().max(self.pohozaev_residual_1).max(self.pohozaev_residual_2)
    }
}

/// `|int xi_k / sqrt(|xi|^2 + m^2) |Q^|^2 - v_k int |Q^|^2| / M(Q)` for the
/// 1-based axis `k`.
pub fn virial_residual(q: &Field, params: &WaveParams, axis: usize) -> Result<f64> {
    let dim = q.grid().dim();
    if axis == 0 || axis > dim {
        return Err(Error::AxisOutOfRange { axis, dim });
    }
    if params.dim != dim {
        return Err(Error::GridMismatch(format!("field is {dim}-d, parameters are {}-d", params.dim)));
    }
    if q.is_zero() {
        return Err(Error::ZeroField);
    }
    let m = params.mass;
    let lhs = spectral::spectral_quadratic(q, |mode| {
        let r = (mode.norm * mode.norm + m * m).sqrt();
        if r == 0.0 {
            0.0
        } else {
            mode.odd()[axis - 1] / r
        }
    });
    let mass = q.mass();
    Ok((lhs - params.v()[axis - 1] * mass).abs() / mass)
}

/// Relative residuals of `T_v + M - int|Q|^{p+1} = 0` (over `M`) and
/// `T_v - d (p-1)/(p+1) int|Q|^{p+1} = 0` (over `T_v`).
pub fn pohozaev_residuals(q: &Field, v: &[f64], p: f64) -> Result<(f64, f64)> {
    let dim = q.grid().dim();
    if v.len() != dim {
        return Err(Error::GridMismatch(format!("velocity has {} components on a {dim}-d grid", v.len())));
    }
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::InvalidExponent { p, dim });
    }
    if q.is_zero() {
        return Err(Error::ZeroField);
    }
    let t = spectral::quadratic_form_t(q, v);
    let m = q.mass();
    let lp1 = q.lq_integral(p + 1.0);
    let r1 = (t + m - lp1).abs() / m;
    let r2 = (t - dim as f64 * (p - 1.0) / (p + 1.0) * lp1).abs() / t.abs();
    Ok((r1, r2))
}

pub fn identity_report(q: &Field, params: &WaveParams) -> Result<IdentityReport> {
    let virial_residuals =
        (1..=q.grid().dim()).map(|k| virial_residual(q, params, k)).collect::<Result<Vec<_>>>()?;
    let (r1, r2) = pohozaev_residuals(q, params.v(), params.p)?;
    Ok(IdentityReport {
        virial_residuals,
        pohozaev_residual_1: r1,
        pohozaev_residual_2: r2,
        el_residual: solver::el_residual(q, params)?,
    })
}

/// How a Petviashvili run ended.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum ProbeOutcome {
    /// The iterates collapsed to zero.
    TrivialLimit { iters: usize },
    /// The iterates blew up, became non-finite, or the stabilizing ratio lost its sign.
    Divergence { iters: usize, reason: String },
    /// A nonzero fixed point was reached; at `|v| >= 1` this is a grid artifact.
    NonzeroFixedPoint { virial_residual: f64, el_residual: f64, iters: usize },
    /// The iteration budget ran out without reaching any of the above.
    NoConvergence { el_residual: f64, iters: usize },
}

impl ProbeOutcome {
    pub fn label(&self, supersonic: bool) -> &'static str {
        match self {
            Self::TrivialLimit { .. } => "trivial-limit",
            Self::Divergence { .. } => "divergence",
            Self::NonzeroFixedPoint { .. } if supersonic => "spurious-fixed-point",
            Self::NonzeroFixedPoint { .. } => "nonzero-profile",
            Self::NoConvergence { .. } => "no-convergence",
        }
    }

    /// A nonzero limit whose virial residual is below `gate`.
    pub fn is_nonzero_profile(&self, gate: f64) -> bool {
        matches!(self, Self::NonzeroFixedPoint { virial_residual, .. } if *virial_residual < gate)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub speed: f64,
    pub outcome: ProbeOutcome,
}

impl ProbeReport {
    pub fn label(&self) -> &'static str {
        self.outcome.label(self.speed >= 1.0)
    }
}

impl fmt::Display for ProbeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|v| = {}: {}", self.speed, self.label())?;
        match &self.outcome {
            ProbeOutcome::TrivialLimit { iters } => write!(f, " after {iters} iterations"),
            ProbeOutcome::Divergence { iters, reason } => write!(f, " after {iters} iterations ({reason})"),
            ProbeOutcome::NonzeroFixedPoint { virial_residual, .. } => {
                write!(f, ", virial residual {virial_residual:e}")
            }
            ProbeOutcome::NoConvergence { el_residual, .. } => write!(f, ", residual {el_residual:e}"),
        }
    }
}

/// Runs the profile iteration without the `|v| < 1` precondition and
/// classifies the result. Every outcome is a valid report.
///
/// Intended for `|v| >= 1`; any speed is accepted so that subsonic control
/// runs go through the same path.
pub fn nonexistence_probe(params: &WaveParams, grid: &Grid, cfg: &SolverConfig) -> Result<ProbeReport> {
    params.validate()?;
    if grid.dim() != params.dim {
        return Err(Error::GridMismatch(format!("grid is {}-d, parameters are {}-d", grid.dim(), params.dim)));
    }
    let speed = params.speed();
    let symbol = spectral::profile_symbol(grid, params.v(), 1.0);
    let seed = solver::seed_field(&cfg.seed, grid, params.v())?;
    let outcome = match solver::petviashvili(&symbol, params.p, seed, cfg, false) {
        Ok(it) if it.converged => {
            // the fixed point solves the equation with omega = 1 and m = 0
            let base = WaveParams { mass: 0.0, omega: 1.0, ..params.clone() };
            let virial = (1..=params.dim)
                .map(|k| virial_residual(&it.field, &base, k))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            ProbeOutcome::NonzeroFixedPoint { virial_residual: virial, el_residual: it.residual, iters: it.iters }
        }
        Ok(it) => ProbeOutcome::NoConvergence { el_residual: it.residual, iters: it.iters },
        Err(Error::TrivialLimit { iters }) => ProbeOutcome::TrivialLimit { iters },
        Err(Error::Divergence { iters, reason }) => ProbeOutcome::Divergence { iters, reason },
        Err(e) => return Err(e),
    };
    log::debug!("probe at |v| = {speed}: {}", outcome.label(speed >= 1.0));
    Ok(ProbeReport { speed, outcome })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Velocity;
    use num_complex::Complex64;

    #[test]
    fn even_real_field_has_no_virial_residual_at_rest() {
        let g = Grid::new(1, 256, 20.0).unwrap();
        let q = Field::from_real_fn(g, |x| (-x[0] * x[0]).exp() * (1.0 + x[0] * x[0]));
        for m in [0.0, 0.5, 2.0] {
            let params = WaveParams::new(1, 3.0, Velocity::zero(1)).unwrap().with_mass(m).unwrap();
            assert!(virial_residual(&q, &params, 1).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn plane_wave_virial_residual_is_the_mismatch() {
        let g = Grid::new(2, 16, 8.0).unwrap();
        let (k1, k2) = (3.0 * g.dxi(), -2.0 * g.dxi());
        let q = Field::from_fn(g, |x| Complex64::from_polar(1.0, k1 * x[0] + k2 * x[1]));
        let v = [0.3, 0.1];
        let params = WaveParams::new(2, 2.0, Velocity::new(v.to_vec()).unwrap()).unwrap();
        let norm = (k1 * k1 + k2 * k2).sqrt();
        let r1 = virial_residual(&q, &params, 1).unwrap();
        let r2 = virial_residual(&q, &params, 2).unwrap();
        assert!((r1 - (k1 / norm - v[0]).abs()).abs() < 1e-13);
        assert!((r2 - (k2 / norm - v[1]).abs()).abs() < 1e-13);
    }

    #[test]
    fn axis_is_checked() {
        let g = Grid::new(1, 16, 8.0).unwrap();
        let q = Field::from_real_fn(g, |x| (-x[0] * x[0]).exp());
        let params = WaveParams::new(1, 3.0, Velocity::zero(1)).unwrap();
        assert!(matches!(virial_residual(&q, &params, 0), Err(Error::AxisOutOfRange { .. })));
        assert!(matches!(virial_residual(&q, &params, 2), Err(Error::AxisOutOfRange { .. })));
    }

    #[test]
    fn random_field_fails_pohozaev() {
        let g = Grid::new(1, 512, 20.0).unwrap();
        let q = solver::seed_field(&solver::SeedProfile::Random(7), &g, &[0.0]).unwrap();
        let (r1, r2) = pohozaev_residuals(&q, &[0.0], 3.0).unwrap();
        assert!(r1 > 1e-2 || r2 > 1e-2, "r1 = {r1}, r2 = {r2}");
    }

    #[test]
    fn probe_labels() {
        let o = ProbeOutcome::NonzeroFixedPoint { virial_residual: 0.1, el_residual: 1e-12, iters: 5 };
        assert_eq!(o.label(true), "spurious-fixed-point");
        assert_eq!(o.label(false), "nonzero-profile");
        assert!(o.is_nonzero_profile(0.2));
        assert!(!o.is_nonzero_profile(1e-3));
    }
}
