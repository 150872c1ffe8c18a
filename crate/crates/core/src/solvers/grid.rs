//! Uniform periodic grids and spectral kinetic propagation on them.

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// `points` equally spaced nodes `x_i = −L + i·h`, `h = 2L/points`, on each axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridAxes {
    points: usize,
    half_width: f64,
}

impl GridAxes {
    pub fn new(points: usize, half_width: f64) -> Result<Self> {
        if points < 8 || points % 2 != 0 {
            return Err(Error::Parameter(format!("grid needs an even number ≥ 8 of points, got {points}")));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::Parameter(format!("grid half width {half_width} must be positive")));
        }
        Ok(Self { points, half_width })
    }

    /// Default extent `L = 6 + 1.5·(2g)^{1/3}`.
    pub fn default_half_width(g: f64) -> f64 {
        6.0 + 1.5 * (2.0 * g).cbrt()
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.points as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.spacing()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.node(i)).collect()
    }

    /// Angular wave numbers in FFT order.
    pub fn wave_numbers(&self) -> Vec<f64> {
        let p = self.points as i64;
        let dk = PI / self.half_width;
        (0..p).map(|i| if i < p / 2 { i } else { i - p }).map(|i| i as f64 * dk).collect()
    }
}

/// Forward/inverse FFTs along every axis of a `dims`-dimensional cube.
pub(crate) struct CubeFft {
    points: usize,
    dims: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl CubeFft {
    pub fn new(points: usize, dims: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self { points, dims, forward: planner.plan_fft_forward(points), inverse: planner.plan_fft_inverse(points) }
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        for axis in 0..self.dims {
            self.along(axis, data, &self.forward);
        }
    }

    /// Inverse transform including the `1/points^dims` normalization.
    pub fn inverse(&self, data: &mut [Complex64]) {
        for axis in 0..self.dims {
            self.along(axis, data, &self.inverse);
        }
        let s = 1.0 / (self.points as f64).powi(self.dims as i32);
        data.par_iter_mut().with_min_len(4096).for_each(|z| *z *= s);
    }

    fn along(&self, axis: usize, data: &mut [Complex64], fft: &Arc<dyn Fft<f64>>) {
        let p = self.points;
        let stride = p.pow((self.dims - 1 - axis) as u32);
        if stride == 1 {
            data.par_chunks_mut(p * 64).for_each(|chunk| fft.process(chunk));
            return;
        }
        // Each slab of `p·stride` values holds `stride` interleaved lines.
        let mut lines = vec![Complex64::default(); p * stride];
        for slab in data.chunks_mut(p * stride) {
            for k in 0..p {
                for j in 0..stride {
                    lines[j * p + k] = slab[k * stride + j];
                }
            }
            lines.par_chunks_mut(p * 16.min(stride)).for_each(|chunk| fft.process(chunk));
            for k in 0..p {
                for j in 0..stride {
                    slab[k * stride + j] = lines[j * p + k];
                }
            }
        }
    }
}
