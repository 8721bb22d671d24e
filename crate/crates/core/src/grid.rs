//! Uniform periodic tensor grids truncating `R^d` to the box `[-L, L)^d`.
//!
//! Samples are stored row-major: the last axis varies fastest. The dual
//! lattice uses the unshifted FFT ordering, with per-axis frequencies
//! `xi_j = (pi / L) * k_j` for `k_j` in `{-n/2, ..., n/2 - 1}`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    dim: usize,
    n: usize,
    half_extent: f64,
}

impl Grid {
    /// Builds a grid with `n` points per axis on `[-half_extent, half_extent)^dim`.
    pub fn new(dim: usize, n: usize, half_extent: f64) -> Result<Self> {
        if !(1..=MAX_DIM).contains(&dim) {
            return Err(Error::InvalidGrid(format!("unsupported dimension {dim}")));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "points per axis must be a power of two >= 8, got {n}"
            )));
        }
        if !(half_extent.is_finite() && half_extent > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "half extent must be positive and finite, got {half_extent}"
            )));
        }
        Ok(Self { dim, n, half_extent })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn half_extent(&self) -> f64 {
        self.half_extent
    }

    /// Total number of samples, `n^d`.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_extent / self.n as f64
    }

    /// Spacing of the dual lattice, `pi / L`.
    pub fn dxi(&self) -> f64 {
        PI / self.half_extent
    }

    /// Physical volume element `dx^d`.
    pub fn cell_volume(&self) -> f64 {
        self.dx().powi(self.dim as i32)
    }

    /// Frequency volume element `dxi^d`.
    pub fn frequency_cell(&self) -> f64 {
        self.dxi().powi(self.dim as i32)
    }

    /// Largest frequency magnitude along one axis (the Nyquist frequency).
    pub fn max_frequency(&self) -> f64 {
        self.dxi() * (self.n / 2) as f64
    }

    /// Node coordinate `x_j = -L + j dx` along one axis.
    pub fn node(&self, j: usize) -> f64 {
        -self.half_extent + j as f64 * self.dx()
    }

    /// Signed lattice index of FFT bin `k`: `k` for `k < n/2`, `k - n` otherwise.
    pub fn signed_index(&self, k: usize) -> i64 {
        if k < self.n / 2 {
            k as i64
        } else {
            k as i64 - self.n as i64
        }
    }

    /// Frequency of FFT bin `k` along one axis.
    pub fn frequency(&self, k: usize) -> f64 {
        self.signed_index(k) as f64 * self.dxi()
    }

    /// Frequency used by odd symbols: the Nyquist bin contributes zero.
    pub fn odd_frequency(&self, k: usize) -> f64 {
        if k == self.n / 2 {
            0.0
        } else {
            self.frequency(k)
        }
    }

    /// Splits a flat row-major index into per-axis indices.
    pub fn unflatten(&self, mut idx: usize) -> [usize; MAX_DIM] {
        let mut out = [0usize; MAX_DIM];
        for axis in (0..self.dim).rev() {
            out[axis] = idx % self.n;
            idx /= self.n;
        }
        out
    }

    pub fn flatten(&self, multi: &[usize]) -> usize {
        multi[..self.dim].iter().fold(0, |acc, &j| acc * self.n + j)
    }

    /// Physical position of a flat index.
    pub fn position(&self, idx: usize) -> [f64; MAX_DIM] {
        let m = self.unflatten(idx);
        let mut x = [0.0; MAX_DIM];
        for axis in 0..self.dim {
            x[axis] = self.node(m[axis]);
        }
        x
    }

    /// Lattice mode of a flat index in FFT ordering.
    pub fn mode(&self, idx: usize) -> Mode {
        let m = self.unflatten(idx);
        let mut xi = [0.0; MAX_DIM];
        let mut odd = [0.0; MAX_DIM];
        for axis in 0..self.dim {
            xi[axis] = self.frequency(m[axis]);
            odd[axis] = self.odd_frequency(m[axis]);
        }
        let norm = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
        Mode { dim: self.dim, xi, odd, norm }
    }

    /// All lattice modes in storage order.
    pub fn modes(&self) -> impl Iterator<Item = Mode> + '_ {
        (0..self.len()).map(move |idx| self.mode(idx))
    }

    /// `|xi|` for every mode, in storage order.
    pub fn abs_frequencies(&self) -> Vec<f64> {
        self.modes().map(|m| m.norm).collect()
    }

    /// True when `other` has the same dimension, resolution and extent.
    pub fn same_as(&self, other: &Grid) -> bool {
        self.dim == other.dim && self.n == other.n && self.half_extent == other.half_extent
    }
}

/// One point of the dual lattice.
///
/// `xi` carries the true lattice frequency; `odd` is the same vector with
/// Nyquist components zeroed, for use in odd symbols such as `v . xi`.
#[derive(Debug, Clone, Copy)]
pub struct Mode {
    pub dim: usize,
    pub xi: [f64; MAX_DIM],
    pub odd: [f64; MAX_DIM],
    pub norm: f64,
}

impl Mode {
    pub fn xi(&self) -> &[f64] {
        &self.xi[..self.dim]
    }

    pub fn odd(&self) -> &[f64] {
        &self.odd[..self.dim]
    }

    /// `v . xi` using the Nyquist-safe components.
    pub fn dot_odd(&self, v: &[f64]) -> f64 {
        self.odd().iter().zip(v).map(|(a, b)| a * b).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.norm == 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_of_small_grid() {
        let g = Grid::new(1, 8, PI).unwrap();
        assert!((g.dx() - PI / 4.0).abs() < 1e-15);
        let mut freqs: Vec<f64> = (0..8).map(|k| g.frequency(k)).collect();
        freqs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let expected: Vec<f64> = (-4..4).map(|k| k as f64).collect();
        for (a, b) in freqs.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn two_dimensional_grid() {
        let g = Grid::new(2, 16, 10.0).unwrap();
        assert_eq!(g.len(), 256);
        assert!((g.dxi() - PI / 10.0).abs() < 1e-15);
        assert!((g.dx() * g.dxi() - 2.0 * PI / 16.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(Grid::new(1, 7, 1.0), Err(Error::InvalidGrid(_))));
        assert!(Grid::new(1, 4, 1.0).is_err());
        assert!(Grid::new(1, 16, 0.0).is_err());
        assert!(Grid::new(1, 16, -3.0).is_err());
        assert!(Grid::new(4, 16, 1.0).is_err());
        assert!(Grid::new(0, 16, 1.0).is_err());
    }

    #[test]
    fn flatten_round_trip() {
        let g = Grid::new(3, 8, 1.0).unwrap();
        for idx in [0, 1, 9, 77, 511] {
            assert_eq!(g.flatten(&g.unflatten(idx)), idx);
        }
    }

    #[test]
    fn nyquist_is_zero_in_odd_frequency() {
        let g = Grid::new(1, 16, 2.0).unwrap();
        assert_eq!(g.odd_frequency(8), 0.0);
        assert!(g.frequency(8) < 0.0);
        assert_eq!(g.odd_frequency(3), g.frequency(3));
    }
}
