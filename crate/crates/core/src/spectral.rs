//! Fourier multipliers, Riesz transforms, the tilted quadratic form and norms.
//!
//! Convention: `u_hat(xi) = int e^{-i xi.x} u(x) dx`, discretized as
//! `dx^d * sum_j u_j e^{-i xi.x_j}`. Plancherel then reads
//! `int |u|^2 dx = (2 pi)^{-d} int |u_hat|^2 dxi`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::{self, Direction};
use crate::field::Field;
use crate::grid::{Grid, Mode};

/// Frequency-space samples `u_hat(xi_k)` in FFT ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    grid: Grid,
    values: Vec<Complex64>,
}

impl Spectrum {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// `(2 pi)^{-d} sum |u_hat|^2 dxi^d`.
    pub fn mass(&self) -> f64 {
        let g = &self.grid;
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>() * g.frequency_cell()
            / (2.0 * PI).powi(g.dim() as i32)
    }
}

// (-1)^{sum of signed indices}: the phase e^{i xi.L} from the node offset x_0 = -L
fn lattice_sign(grid: &Grid, idx: usize) -> f64 {
    let m = grid.unflatten(idx);
    let parity: i64 = (0..grid.dim()).map(|a| grid.signed_index(m[a])).sum();
    if parity.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Continuous-convention Fourier transform of `u`.
pub fn transform(u: &Field) -> Spectrum {
    let grid = *u.grid();
    let mut values = fft::forward(&grid, u.values());
    let w = grid.cell_volume();
    for (idx, z) in values.iter_mut().enumerate() {
        *z *= w * lattice_sign(&grid, idx);
    }
    Spectrum { grid, values }
}

pub fn inverse_transform(s: &Spectrum) -> Field {
    let grid = s.grid;
    let w = 1.0 / grid.cell_volume();
    let mut values: Vec<Complex64> = s
        .values
        .iter()
        .enumerate()
        .map(|(idx, z)| z * w * lattice_sign(&grid, idx))
        .collect();
    fft::fft_nd(&grid, &mut values, Direction::Inverse);
    Field::new(grid, values).expect("length preserved by transform")
}

/// Evaluates a symbol on the lattice, rejecting non-finite values.
pub fn symbol_values<F, S>(grid: &Grid, sigma: F) -> Result<Vec<Complex64>>
where
    F: Fn(&Mode) -> S,
    S: Into<Complex64>,
{
    grid.modes()
        .map(|mode| {
            let s: Complex64 = sigma(&mode).into();
            if s.re.is_finite() && s.im.is_finite() {
                Ok(s)
            } else {
                Err(Error::NonFiniteSymbol { xi: mode.xi().to_vec() })
            }
        })
        .collect()
}

/// Multiplies the raw spectrum of `u` by precomputed symbol values.
pub fn apply_multiplier(u: &Field, multiplier: &[Complex64]) -> Field {
    let grid = *u.grid();
    let mut buf = fft::forward(&grid, u.values());
    buf.iter_mut().zip(multiplier).for_each(|(z, m)| *z *= m);
    fft::fft_nd(&grid, &mut buf, Direction::Inverse);
    Field::new(grid, buf).expect("length preserved by transform")
}

/// Real-valued multiplier variant of [`apply_multiplier`].
pub fn apply_real_multiplier(u: &Field, multiplier: &[f64]) -> Field {
    let grid = *u.grid();
    let mut buf = fft::forward(&grid, u.values());
    buf.iter_mut().zip(multiplier).for_each(|(z, m)| *z *= m);
    fft::fft_nd(&grid, &mut buf, Direction::Inverse);
    Field::new(grid, buf).expect("length preserved by transform")
}

/// `F^{-1}(sigma(xi) u_hat(xi))`.
pub fn apply_symbol<F, S>(u: &Field, sigma: F) -> Result<Field>
where
    F: Fn(&Mode) -> S,
    S: Into<Complex64>,
{
    let m = symbol_values(u.grid(), sigma)?;
    Ok(apply_multiplier(u, &m))
}

/// Symbol `|xi| - v.xi + omega` of the profile operator (massless case).
pub fn profile_symbol(grid: &Grid, v: &[f64], omega: f64) -> Vec<f64> {
    grid.modes().map(|m| m.norm - m.dot_odd(v) + omega).collect()
}

/// Riesz transform `R_k` with symbol `-i xi_k / sqrt(|xi|^2 + m^2)`.
///
/// `axis` is one-based. At `xi = 0` with `m = 0` the symbol is set to zero.
pub fn riesz(u: &Field, axis: usize, mass: f64) -> Result<Field> {
    let dim = u.grid().dim();
    if axis == 0 || axis > dim {
        return Err(Error::AxisOutOfRange { axis, dim });
    }
    if !(mass >= 0.0 && mass.is_finite()) {
        return Err(Error::InvalidArgument(format!("mass parameter must be >= 0, got {mass}")));
    }
    apply_symbol(u, |mode| {
        let denom = (mode.norm * mode.norm + mass * mass).sqrt();
        if denom == 0.0 {
            Complex64::default()
        } else {
            Complex64::new(0.0, -mode.odd[axis - 1] / denom)
        }
    })
}

/// `(2 pi)^{-d} sum_k weight(xi_k) |u_hat(xi_k)|^2 dxi^d`.
pub fn spectral_quadratic<F>(u: &Field, weight: F) -> f64
where
    F: Fn(&Mode) -> f64,
{
    let grid = u.grid();
    let raw = fft::forward(grid, u.values());
    spectral_quadratic_raw(grid, &raw, weight)
}

/// Same as [`spectral_quadratic`] on an already transformed raw FFT buffer.
pub fn spectral_quadratic_raw<F>(grid: &Grid, raw: &[Complex64], weight: F) -> f64
where
    F: Fn(&Mode) -> f64,
{
    // (2 pi)^{-d} dxi^d dx^{2d} = dx^d / n^d
    let scale = grid.cell_volume() / grid.len() as f64;
    raw.iter()
        .enumerate()
        .map(|(idx, z)| weight(&grid.mode(idx)) * z.norm_sqr())
        .sum::<f64>()
        * scale
}

/// `T_v(u) = (2 pi)^{-d} int (|xi| - v.xi) |u_hat|^2 dxi`.
///
/// Positivity and the norm equivalence with the homogeneous `H^{1/2}` norm
/// only hold for `|v| < 1`; larger speeds are evaluated but logged.
pub fn quadratic_form_t(u: &Field, v: &[f64]) -> f64 {
    let speed = v.iter().map(|c| c * c).sum::<f64>().sqrt();
    if speed >= 1.0 {
        log::warn!("T_v evaluated at |v| = {speed} >= 1; the form is indefinite");
    }
    spectral_quadratic(u, |m| m.norm - m.dot_odd(v))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Norms {
    /// `M(u) = ||u||_{L^2}^2`
    pub mass: f64,
    /// `||u||_{\dot H^{1/2}}^2`
    pub hom_half_sq: f64,
    /// `||u||_{H^{1/2}}^2 = M(u) + ||u||_{\dot H^{1/2}}^2`
    pub half_sq: f64,
    /// `int |u|^{p+1} dx`
    pub lp1_integral: f64,
}

pub fn norms(u: &Field, p: f64) -> Result<Norms> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::InvalidExponent { p, dim: u.grid().dim() });
    }
    let mass = u.mass();
    let hom_half_sq = spectral_quadratic(u, |m| m.norm);
    Ok(Norms { mass, hom_half_sq, half_sq: mass + hom_half_sq, lp1_integral: u.lq_integral(p + 1.0) })
}

/// Spectral translation `u(. - shift)` through the phase `e^{-i xi.shift}`.
pub fn translate(u: &Field, shift: &[f64]) -> Field {
    let m: Vec<Complex64> = u
        .grid()
        .modes()
        .map(|mode| Complex64::from_polar(1.0, -mode.dot_odd(shift)))
        .collect();
    apply_multiplier(u, &m)
}

/// Pointwise `|u|^{p-1} u`.
pub fn power_nonlinearity(u: &Field, p: f64) -> Field {
    u.map(|z| {
        let r = z.norm();
        if r == 0.0 {
            Complex64::default()
        } else {
            z * r.powf(p - 1.0)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane_wave(grid: Grid, k: &[i64]) -> Field {
        let kappa: Vec<f64> = k.iter().map(|&j| j as f64 * grid.dxi()).collect();
        Field::from_fn(grid, |x| {
            let phase: f64 = x.iter().zip(&kappa).map(|(a, b)| a * b).sum();
            Complex64::from_polar(1.0, phase)
        })
    }

    #[test]
    fn plane_wave_transform_is_concentrated() {
        let g = Grid::new(2, 16, 3.0).unwrap();
        let u = plane_wave(g, &[2, -3]);
        let s = transform(&u);
        let target = g.flatten(&[2, 16 - 3]);
        let expected = (2.0 * g.half_extent()).powi(2);
        for (idx, z) in s.values().iter().enumerate() {
            if idx == target {
                assert!((z - Complex64::new(expected, 0.0)).norm() < 1e-10 * expected);
            } else {
                assert!(z.norm() < 1e-10 * expected);
            }
        }
    }

    #[test]
    fn abs_symbol_on_plane_wave() {
        let g = Grid::new(1, 32, 5.0).unwrap();
        let u = plane_wave(g, &[3]);
        let w = apply_symbol(&u, |m| m.norm).unwrap();
        let kappa = 3.0 * g.dxi();
        for (a, b) in w.values().iter().zip(u.values()) {
            assert!((a - b * kappa).norm() < 1e-12);
        }
    }

    #[test]
    fn identity_symbol() {
        let g = Grid::new(1, 16, 2.0).unwrap();
        let u = Field::from_fn(g, |x| Complex64::new((-x[0] * x[0]).exp(), x[0].sin()));
        let w = apply_symbol(&u, |_| 1.0).unwrap();
        for (a, b) in w.values().iter().zip(u.values()) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn non_finite_symbol_is_rejected() {
        let g = Grid::new(1, 16, 2.0).unwrap();
        let u = Field::zeros(g);
        let err = apply_symbol(&u, |m| 1.0 / m.norm).unwrap_err();
        assert!(matches!(err, Error::NonFiniteSymbol { .. }));
    }

    #[test]
    fn riesz_axis_checked() {
        let g = Grid::new(2, 8, 1.0).unwrap();
        let u = Field::zeros(g);
        assert!(matches!(riesz(&u, 0, 0.0), Err(Error::AxisOutOfRange { .. })));
        assert!(matches!(riesz(&u, 3, 0.0), Err(Error::AxisOutOfRange { .. })));
        assert!(riesz(&u, 2, 0.0).is_ok());
    }

    #[test]
    fn riesz_vanishes_for_large_mass() {
        let g = Grid::new(1, 64, 10.0).unwrap();
        let u = Field::from_real_fn(g, |x| (-(x[0] - 1.0).powi(2)).exp());
        let a = riesz(&u, 1, 1e8).unwrap();
        assert!(a.l2_norm() < 1e-6 * u.l2_norm());
    }

    #[test]
    fn one_mode_quadratic_form() {
        let g = Grid::new(1, 64, 4.0).unwrap();
        let u = plane_wave(g, &[5]);
        let v = [0.3];
        let kappa = 5.0 * g.dxi();
        let expected = (kappa - 0.3 * kappa) * u.mass();
        assert!((quadratic_form_t(&u, &v) - expected).abs() < 1e-10 * expected);
    }

    #[test]
    fn zero_field_norms() {
        let g = Grid::new(1, 16, 1.0).unwrap();
        let n = norms(&Field::zeros(g), 2.0).unwrap();
        assert_eq!(n.mass, 0.0);
        assert_eq!(n.hom_half_sq, 0.0);
        assert_eq!(n.half_sq, 0.0);
        assert_eq!(n.lp1_integral, 0.0);
    }
}
