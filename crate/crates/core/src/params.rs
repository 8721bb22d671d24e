use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::MAX_DIM;

/// Traveling speed vector `v` in `R^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Velocity(Vec<f64>);

impl Velocity {
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.is_empty() || components.len() > MAX_DIM {
            return Err(Error::InvalidArgument(format!(
                "velocity needs 1..={MAX_DIM} components, got {}",
                components.len()
            )));
        }
        if components.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("velocity components must be finite".into()));
        }
        Ok(Self(components))
    }

    pub fn zero(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    /// `speed * e_1`.
    pub fn along_first_axis(dim: usize, speed: f64) -> Self {
        let mut c = vec![0.0; dim];
        c[0] = speed;
        Self(c)
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn speed(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn is_subluminal(&self) -> bool {
        self.speed() < 1.0
    }
}

/// Energy-critical power `p_* = (d+1)/(d-1)`; infinite for `d = 1`.
pub fn critical_exponent(dim: usize) -> f64 {
    if dim <= 1 {
        f64::INFINITY
    } else {
        (dim as f64 + 1.0) / (dim as f64 - 1.0)
    }
}

/// Dimension, power, mass parameter, velocity and frequency of a profile problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveParams {
    pub dim: usize,
    pub p: f64,
    pub mass: f64,
    pub velocity: Velocity,
    pub omega: f64,
}

impl WaveParams {
    pub fn new(dim: usize, p: f64, velocity: Velocity) -> Result<Self> {
        let params = Self { dim, p, mass: 0.0, velocity, omega: 1.0 };
        params.validate()?;
        Ok(params)
    }

    pub fn with_mass(mut self, mass: f64) -> Result<Self> {
        self.mass = mass;
        self.validate()?;
        Ok(self)
    }

    pub fn with_omega(mut self, omega: f64) -> Result<Self> {
        self.omega = omega;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_DIM).contains(&self.dim) {
            return Err(Error::InvalidArgument(format!("unsupported dimension {}", self.dim)));
        }
        if self.velocity.dim() != self.dim {
            return Err(Error::InvalidArgument(format!(
                "velocity has {} components for dimension {}",
                self.velocity.dim(),
                self.dim
            )));
        }
        if !(self.p > 1.0 && self.p.is_finite()) {
            return Err(Error::InvalidExponent { p: self.p, dim: self.dim });
        }
        if !(self.mass >= 0.0 && self.mass.is_finite()) {
            return Err(Error::InvalidArgument(format!("mass parameter {} < 0", self.mass)));
        }
        if !self.omega.is_finite() {
            return Err(Error::InvalidArgument("omega must be finite".into()));
        }
        Ok(())
    }

    pub fn v(&self) -> &[f64] {
        self.velocity.components()
    }

    pub fn speed(&self) -> f64 {
        self.velocity.speed()
    }

    /// `1 < p < p_*`.
    pub fn is_subcritical(&self) -> bool {
        self.p > 1.0 && self.p < critical_exponent(self.dim)
    }

    pub fn ensure_subcritical(&self) -> Result<()> {
        if self.is_subcritical() {
            Ok(())
        } else {
            Err(Error::InvalidExponent { p: self.p, dim: self.dim })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn critical_exponents() {
        assert!(critical_exponent(1).is_infinite());
        assert_eq!(critical_exponent(2), 3.0);
        assert_eq!(critical_exponent(3), 2.0);
    }

    #[test]
    fn supersonic_params_are_recorded() {
        let p = WaveParams::new(1, 3.0, Velocity::new(vec![1.5]).unwrap()).unwrap();
        assert_eq!(p.speed(), 1.5);
        assert!(p.is_subcritical());
    }

    #[test]
    fn mismatched_velocity_rejected() {
        assert!(WaveParams::new(2, 2.0, Velocity::zero(1)).is_err());
        assert!(WaveParams::new(1, 1.0, Velocity::zero(1)).is_err());
        let p = WaveParams::new(3, 2.5, Velocity::zero(3)).unwrap();
        assert!(!p.is_subcritical());
    }
}
