//! Raw multidimensional FFTs on row-major buffers.
//!
//! These are the unnormalized discrete transforms; the continuous Fourier
//! convention lives in [`crate::spectral`]. Plans are cached per thread.

use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::grid::Grid;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// In-place transform of `data` over every axis of `grid`.
///
/// The inverse includes the `1/n^d` factor, so `Inverse` undoes `Forward`.
pub fn fft_nd(grid: &Grid, data: &mut [Complex64], direction: Direction) {
    debug_assert_eq!(data.len(), grid.len());
    let n = grid.n();
    let plan = PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        match direction {
            Direction::Forward => p.plan_fft_forward(n),
            Direction::Inverse => p.plan_fft_inverse(n),
        }
    });
    let mut scratch = vec![Complex64::default(); plan.get_inplace_scratch_len()];

    // last axis is contiguous
    for row in data.chunks_exact_mut(n) {
        plan.process_with_scratch(row, &mut scratch);
    }

    if grid.dim() > 1 {
        let mut line = vec![Complex64::default(); n];
        let total = data.len();
        for axis in 0..grid.dim() - 1 {
            let stride = n.pow((grid.dim() - 1 - axis) as u32);
            let block = stride * n;
            for base in (0..total).step_by(block) {
                for offset in 0..stride {
                    let start = base + offset;
                    for (j, slot) in line.iter_mut().enumerate() {
                        *slot = data[start + j * stride];
                    }
                    plan.process_with_scratch(&mut line, &mut scratch);
                    for (j, value) in line.iter().enumerate() {
                        data[start + j * stride] = *value;
                    }
                }
            }
        }
    }

    if direction == Direction::Inverse {
        let scale = 1.0 / data.len() as f64;
        data.iter_mut().for_each(|z| *z *= scale);
    }
}

pub fn forward(grid: &Grid, data: &[Complex64]) -> Vec<Complex64> {
    let mut out = data.to_vec();
    fft_nd(grid, &mut out, Direction::Forward);
    out
}

pub fn inverse(grid: &Grid, data: &[Complex64]) -> Vec<Complex64> {
    let mut out = data.to_vec();
    fft_nd(grid, &mut out, Direction::Inverse);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    // naive DFT over all axes as an oracle
    fn dft(grid: &Grid, data: &[Complex64]) -> Vec<Complex64> {
        let n = grid.n() as f64;
        (0..grid.len())
            .map(|k| {
                let km = grid.unflatten(k);
                data.iter()
                    .enumerate()
                    .map(|(j, &u)| {
                        let jm = grid.unflatten(j);
                        let phase: f64 = (0..grid.dim())
                            .map(|a| (km[a] * jm[a]) as f64)
                            .sum::<f64>()
                            * -2.0
                            * std::f64::consts::PI
                            / n;
                        u * Complex64::from_polar(1.0, phase)
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn matches_naive_dft_in_two_dimensions() {
        let g = Grid::new(2, 8, 1.0).unwrap();
        let data: Vec<Complex64> = (0..g.len())
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        let fast = forward(&g, &data);
        let slow = dft(&g, &data);
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a - b).norm() < 1e-10);
        }
        let back = inverse(&g, &fast);
        for (a, b) in back.iter().zip(&data) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn matches_naive_dft_in_three_dimensions() {
        let g = Grid::new(3, 8, 1.0).unwrap();
        let data: Vec<Complex64> = (0..g.len())
            .map(|i| Complex64::new((i as f64 * 0.71).cos(), (i as f64 * 0.23).sin()))
            .collect();
        let fast = forward(&g, &data);
        let slow = dft(&g, &data);
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a - b).norm() < 1e-9);
        }
    }
}
