use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Grid, MAX_DIM};

/// Complex samples on a [`Grid`], row-major over axes.
///
/// Fields are values: operations return new fields and never mutate shared
/// state, so a `Field` can be handed to several threads at once.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid,
    values: Vec<Complex64>,
}

impl Field {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "field needs {} samples, got {}",
                grid.len(),
                values.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self { grid, values: vec![Complex64::default(); grid.len()] }
    }

    /// Samples `f` at every node.
    pub fn from_fn<F>(grid: Grid, f: F) -> Self
    where
        F: Fn(&[f64]) -> Complex64,
    {
        let values = (0..grid.len())
            .map(|idx| {
                let x = grid.position(idx);
                f(&x[..grid.dim()])
            })
            .collect();
        Self { grid, values }
    }

    pub fn from_real_fn<F>(grid: Grid, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64,
    {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn map<F>(&self, f: F) -> Field
    where
        F: Fn(Complex64) -> Complex64,
    {
        Field { grid: self.grid, values: self.values.iter().map(|&z| f(z)).collect() }
    }

    pub fn scale(&self, a: Complex64) -> Field {
        self.map(|z| z * a)
    }

    pub fn scale_real(&self, a: f64) -> Field {
        self.map(|z| z * a)
    }

    pub fn ensure_same_grid(&self, other: &Field) -> Result<()> {
        if self.grid.same_as(&other.grid) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!("{:?} vs {:?}", self.grid, other.grid)))
        }
    }

    pub fn add(&self, other: &Field) -> Result<Field> {
        self.ensure_same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(Field { grid: self.grid, values })
    }

    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.ensure_same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(Field { grid: self.grid, values })
    }

    /// `<u, w> = int conj(u) w dx`.
    pub fn inner(&self, other: &Field) -> Result<Complex64> {
        self.ensure_same_grid(other)?;
        let sum: Complex64 =
            self.values.iter().zip(&other.values).map(|(a, b)| a.conj() * b).sum();
        Ok(sum * self.grid.cell_volume())
    }

    /// `M(u) = int |u|^2 dx`.
    pub fn mass(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.cell_volume()
    }

    pub fn l2_norm(&self) -> f64 {
        self.mass().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `int |u|^q dx`.
    pub fn lq_integral(&self, q: f64) -> f64 {
        self.values.iter().map(|z| z.norm().powf(q)).sum::<f64>() * self.grid.cell_volume()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// Flat index of the sample with the largest modulus.
    pub fn peak_index(&self) -> usize {
        self.values
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (i, z)| if z.norm() > best.1 { (i, z.norm()) } else { best })
            .0
    }

    pub fn peak_position(&self) -> [f64; MAX_DIM] {
        self.grid.position(self.peak_index())
    }

    /// Circular shift by whole grid cells along every axis.
    pub fn roll(&self, shift: &[i64]) -> Field {
        let n = self.grid.n() as i64;
        let mut values = vec![Complex64::default(); self.values.len()];
        for (idx, &z) in self.values.iter().enumerate() {
            let m = self.grid.unflatten(idx);
            let mut target = [0usize; MAX_DIM];
            for axis in 0..self.grid.dim() {
                let s = shift.get(axis).copied().unwrap_or(0);
                target[axis] = (m[axis] as i64 + s).rem_euclid(n) as usize;
            }
            values[self.grid.flatten(&target)] = z;
        }
        Field { grid: self.grid, values }
    }

    /// Rolls the field so that its peak sits on the node closest to the origin.
    pub fn centered_on_peak(&self) -> Field {
        let peak = self.grid.unflatten(self.peak_index());
        let center = self.grid.n() / 2;
        let shift: Vec<i64> =
            (0..self.grid.dim()).map(|a| center as i64 - peak[a] as i64).collect();
        self.roll(&shift)
    }

    /// Fraction of the mass carried by nodes with `max_k |x_k| > frac * L`.
    pub fn boundary_mass_fraction(&self, frac: f64) -> f64 {
        let total: f64 = self.values.iter().map(|z| z.norm_sqr()).sum();
        if total == 0.0 {
            return 0.0;
        }
        let cut = frac * self.grid.half_extent();
        let outer: f64 = self
            .values
            .iter()
            .enumerate()
            .filter(|(idx, _)| {
                let x = self.grid.position(*idx);
                x[..self.grid.dim()].iter().any(|c| c.abs() > cut)
            })
            .map(|(_, z)| z.norm_sqr())
            .sum();
        outer / total
    }

    /// Same samples interpreted on another grid with identical `n` and `d`.
    pub fn relabel(&self, grid: Grid) -> Result<Field> {
        if grid.dim() != self.grid.dim() || grid.n() != self.grid.n() {
            return Err(Error::GridMismatch(format!(
                "cannot relabel {:?} as {:?}",
                self.grid, grid
            )));
        }
        Ok(Field { grid, values: self.values.clone() })
    }
}
