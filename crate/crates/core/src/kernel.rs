//! Resolvent kernel of `sqrt(-Lap) + i v.grad + 1` from its subordination
//! integral
//!
//! ```text
//! G_v(x) = c_d int_0^inf e^{-t} t / w(t)^{(d+1)/2} dt,
//! w(t) = (1 - |v|^2) t^2 + |x|^2 - 2 i t (v.x),
//! ```
//!
//! i.e. the Poisson kernel `c_d t / (t^2 + |x|^2)^{(d+1)/2}` continued to
//! `x - i t v` and averaged against `e^{-t}`. `Re w > 0`, so the principal
//! branch of the power is the continuous one.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::spectral;

/// Upper end of the `t`-integral; `e^{-t}` is below `1e-26` beyond it.
pub const T_MAX: f64 = 60.0;
/// Relative accuracy target of the adaptive quadrature.
pub const REL_TOL: f64 = 1e-10;
const MAX_DEPTH: usize = 60;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelSample {
    pub x: Vec<f64>,
    pub value: Complex64,
    pub quadrature_error: f64,
}

/// Normalizing constant `Gamma((d+1)/2) / pi^{(d+1)/2}` of the Poisson kernel.
pub fn poisson_constant(dim: usize) -> f64 {
    let h = (dim as f64 + 1.0) / 2.0;
    gamma(h) / PI.powf(h)
}

pub fn kernel_eval(x: &[f64], v: &[f64]) -> Result<KernelSample> {
    let dim = x.len();
    if dim == 0 || dim > crate::grid::MAX_DIM || v.len() != dim {
        return Err(Error::InvalidArgument(format!(
            "point and velocity must share a dimension in 1..=3, got {} and {}",
            dim,
            v.len()
        )));
    }
    let speed2: f64 = v.iter().map(|c| c * c).sum();
    if speed2 >= 1.0 {
        return Err(Error::Supersonic { speed: speed2.sqrt() });
    }
    let r2: f64 = x.iter().map(|c| c * c).sum();
    if r2 == 0.0 || !r2.is_finite() {
        return Err(Error::InvalidArgument("the kernel is singular at x = 0".into()));
    }
    let vx: f64 = x.iter().zip(v).map(|(a, b)| a * b).sum();
    let power = (dim as f64 + 1.0) / 2.0;
    let integrand = |t: f64| {
        let w = Complex64::new((1.0 - speed2) * t * t + r2, -2.0 * t * vx);
        (-t).exp() * t / w.powf(power)
    };
    // the integrand peaks near t ~ |x|; splitting there helps the adaptive rule
    let r = r2.sqrt();
    let mut breaks = vec![0.0];
    if r < T_MAX {
        breaks.push(r);
    }
    breaks.push(T_MAX);
    let mut value = Complex64::default();
    let mut error = 0.0;
    for pair in breaks.windows(2) {
        let (v, e) = adaptive_gk(&integrand, pair[0], pair[1], REL_TOL)?;
        value += v;
        error += e;
    }
    let c = poisson_constant(dim);
    Ok(KernelSample { x: x.to_vec(), value: value * c, quadrature_error: error * c })
}

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let s = f(center - dx) + f(center + dx);
        kronrod += s * WGK[j];
        // odd Kronrod nodes are the Gauss nodes
        if j % 2 == 1 {
            gauss += s * WG[j / 2];
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).norm())
}

/// Adaptive bisection with the 7/15-point Gauss-Kronrod pair; returns the
/// integral and the summed error estimate.
fn adaptive_gk<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, rel_tol: f64) -> Result<(Complex64, f64)> {
    let (whole, err) = gk15(f, a, b);
    // stack of pending intervals with their estimates
    let mut pending = vec![(a, b, whole, err, 0usize)];
    let mut total = Complex64::default();
    let mut total_err = 0.0;
    let scale = whole.norm().max(f64::MIN_POSITIVE);
    while let Some((lo, hi, est, e, depth)) = pending.pop() {
        let local_target = rel_tol * scale * (hi - lo) / (b - a);
        if e <= local_target.max(1e-300) {
            total += est;
            total_err += e;
            continue;
        }
        if depth >= MAX_DEPTH {
            return Err(Error::Quadrature(format!("no convergence on [{lo}, {hi}] after {depth} bisections")));
        }
        let mid = 0.5 * (lo + hi);
        let (l, le) = gk15(f, lo, mid);
        let (r, re) = gk15(f, mid, hi);
        pending.push((lo, mid, l, le, depth + 1));
        pending.push((mid, hi, r, re, depth + 1));
    }
    if !(total.re.is_finite() && total.im.is_finite()) {
        return Err(Error::Quadrature("non-finite integral".into()));
    }
    Ok((total, total_err))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayReport {
    pub radii: Vec<f64>,
    /// `|x|^{d+1} |G_v(x)|` at each radius, maximized over the sampled directions.
    pub scaled: Vec<f64>,
    /// `sup |x|^{d+1} |G_v(x)|` over the samples.
    pub constant: f64,
    /// `max / min` of `scaled`; 1 means perfectly `|x|^{-(d+1)}`.
    pub band_ratio: f64,
    /// Least-squares slope of `log |G_v|` against `log |x|`.
    pub slope: f64,
}

/// Samples `G_v` at `+-r e` for each radius, where `e` is the direction of
/// `v` (or the first axis when `v = 0`).
pub fn decay_check(v: &[f64], radii: &[f64]) -> Result<DecayReport> {
    let dim = v.len();
    if radii.len() < 2 {
        return Err(Error::InvalidArgument("decay check needs at least two radii".into()));
    }
    if let Some(r) = radii.iter().find(|r| !(**r >= 1.0 && r.is_finite())) {
        return Err(Error::InvalidArgument(format!("radii must be at least 1, got {r}")));
    }
    let speed = v.iter().map(|c| c * c).sum::<f64>().sqrt();
    let mut dir = vec![0.0; dim];
    if speed > 0.0 {
        dir.iter_mut().zip(v).for_each(|(d, c)| *d = c / speed);
    } else if dim > 0 {
        dir[0] = 1.0;
    }
    let exponent = dim as f64 + 1.0;
    let mut scaled = Vec::with_capacity(radii.len());
    let mut logs = Vec::with_capacity(radii.len());
    for &r in radii {
        let mut worst: f64 = 0.0;
        let mut mean = 0.0;
        for sign in [1.0, -1.0] {
            let x: Vec<f64> = dir.iter().map(|d| sign * r * d).collect();
            let g = kernel_eval(&x, v)?.value.norm();
            worst = worst.max(g);
            mean += 0.5 * g;
        }
        scaled.push(worst * r.powf(exponent));
        logs.push((r.ln(), mean.ln()));
    }
    let constant = scaled.iter().copied().fold(0.0, f64::max);
    let low = scaled.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(DecayReport {
        radii: radii.to_vec(),
        constant,
        band_ratio: constant / low,
        slope: least_squares_slope(&logs),
        scaled,
    })
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// `(sqrt(-Lap) + i v.grad + 1)^{-1} u`, the multiplier `1 / (|xi| - v.xi + 1)`.
pub fn resolvent_apply(u: &Field, v: &[f64]) -> Result<Field> {
    if v.len() != u.grid().dim() {
        return Err(Error::GridMismatch("velocity and grid dimensions differ".into()));
    }
    let speed = v.iter().map(|c| c * c).sum::<f64>().sqrt();
    if speed >= 1.0 {
        return Err(Error::Supersonic { speed });
    }
    let inverse: Vec<f64> = spectral::profile_symbol(u.grid(), v, 1.0).iter().map(|s| 1.0 / s).collect();
    Ok(spectral::apply_real_multiplier(u, &inverse))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants() {
        assert!((poisson_constant(1) - 1.0 / PI).abs() < 1e-15);
        assert!((poisson_constant(2) - 0.5 / PI).abs() < 1e-15);
        assert!((poisson_constant(3) - 1.0 / (PI * PI)).abs() < 1e-15);
    }

    #[test]
    fn rejects_origin_and_fast_speeds() {
        assert!(kernel_eval(&[0.0], &[0.0]).is_err());
        assert!(matches!(kernel_eval(&[1.0], &[1.0]), Err(Error::Supersonic { .. })));
        assert!(kernel_eval(&[1.0, 2.0], &[0.0]).is_err());
        assert!(decay_check(&[0.0], &[0.5, 10.0]).is_err());
    }

    #[test]
    fn gk_integrates_polynomials_exactly() {
        let (v, e) = gk15(&|t: f64| Complex64::new(t.powi(10), 0.0), 0.0, 1.0);
        assert!((v.re - 1.0 / 11.0).abs() < 1e-15);
        assert!(e < 1e-12);
    }

    #[test]
    fn rest_kernel_is_real_and_positive() {
        for x in [0.1, 1.0, 3.0, 50.0] {
            let s = kernel_eval(&[x], &[0.0]).unwrap();
            assert!(s.value.im.abs() <= 1e-12);
            assert!(s.value.re > 0.0);
            assert!(s.quadrature_error.is_finite());
        }
        let a = kernel_eval(&[1.0, 2.0], &[0.0, 0.0]).unwrap().value;
        let b = kernel_eval(&[-2.0, 1.0], &[0.0, 0.0]).unwrap().value;
        assert!((a - b).norm() < 1e-14);
    }
}
