//! Two particles in the full anisotropic 3D trap.
//!
//! The center of mass separates with energy `½ + ε`. The relative motion
//! (reduced mass ½) is axially symmetric and lives on an `(x, ρ)` grid with
//! `ρ_j = (j + ½)h`, so the Coulomb point `x = ρ = 0` is never sampled. The
//! radial operator `−(1/ρ)∂_ρ(ρ ∂_ρ) + ε²ρ²/4` is discretized by finite
//! differences, symmetrized with `√ρ` and diagonalized once; the longitudinal
//! kinetic energy is spectral.
//!
//! The single-mode reference is solved on the same `x` grid with the
//! interaction averaged over the lowest discrete transverse mode, so both
//! energies share their longitudinal discretization error.

use nalgebra::{DMatrix, SymmetricEigen};
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

use super::grid::GridAxes;
use super::propagation::{relax, PropagationOptions, SplitStep};
use crate::error::{Error, Result};

/// Largest probability allowed in the outermost grid lines.
pub const FULL3D_EDGE_LIMIT: f64 = 1e-6;

/// Relative-coordinate grid: periodic in `x`, half-offset radial nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylindricalGrid {
    pub x: GridAxes,
    pub rho_points: usize,
    pub rho_extent: f64,
}

impl CylindricalGrid {
    pub fn new(x: GridAxes, rho_points: usize, rho_extent: f64) -> Result<Self> {
        if rho_points < 4 || !(rho_extent.is_finite() && rho_extent > 0.0) {
            return Err(Error::Parameter(format!(
                "radial grid needs ≥ 4 points and a positive extent, got {rho_points} on {rho_extent}"
            )));
        }
        Ok(Self { x, rho_points, rho_extent })
    }

    /// 512 × 32 points; `x` covers `√2 (6 + 1.5 (2g)^{1/3})` and `ρ` reaches
    /// `6 √(2/ε)`, six transverse relative widths.
    pub fn default_for(g: f64, eps: f64) -> Result<Self> {
        let x = GridAxes::new(512, std::f64::consts::SQRT_2 * GridAxes::default_half_width(g))?;
        Self::new(x, 32, 6.0 * (2.0 / eps).sqrt())
    }

    /// Same extents with twice the points in each direction.
    pub fn refined(&self) -> Result<Self> {
        Self::new(GridAxes::new(2 * self.x.points(), self.x.half_width())?, 2 * self.rho_points, self.rho_extent)
    }

    pub fn rho_spacing(&self) -> f64 {
        self.rho_extent / self.rho_points as f64
    }

    pub fn rho_nodes(&self) -> Vec<f64> {
        let h = self.rho_spacing();
        (0..self.rho_points).map(|j| (j as f64 + 0.5) * h).collect()
    }
}

/// Energies of the full-3D two-body problem and of its single-mode reduction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Full3dResult {
    /// `E = (½ + ε) + E_rel`, with the discrete transverse zero point
    /// replaced by its exact value `ε`.
    pub energy: f64,
    /// Single-mode energy on the same longitudinal grid, same convention.
    pub single_mode_energy: f64,
    /// Lowest eigenvalue of the discrete transverse operator (exact: `ε`).
    pub transverse_zero_point: f64,
}

impl Full3dResult {
    /// `|E − E_1D| / E` against the same-grid single-mode energy.
    pub fn delta_e(&self) -> f64 {
        (self.energy - self.single_mode_energy).abs() / self.energy
    }
}

/// Total ground energy of two interacting particles in the 3D trap.
pub fn full3d_two_body_energy(g: f64, eps: f64, grid: &CylindricalGrid) -> Result<f64> {
    Ok(full3d_two_body(g, eps, grid, &full3d_options())?.energy)
}

/// Final step 4e−4; the ⟨H⟩ estimate moves by < 1e−8 relative below it.
pub fn full3d_options() -> PropagationOptions {
    PropagationOptions { dtau: 4e-4, tol: 1e-9, schedule: vec![0.05, 0.01, 0.002], ..PropagationOptions::default() }
}

/// Full-3D energy together with the same-grid single-mode energy.
pub fn full3d_two_body(g: f64, eps: f64, grid: &CylindricalGrid, opts: &PropagationOptions) -> Result<Full3dResult> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::Parameter(format!("anisotropy ε = {eps} must be finite and positive")));
    }
    if !(g.is_finite() && g >= 0.0) {
        return Err(Error::Parameter(format!("coupling g = {g} must be finite and non-negative")));
    }
    let px = grid.x.points();
    let pr = grid.rho_points;
    let x = grid.x.nodes();
    let rho = grid.rho_nodes();
    let hr = grid.rho_spacing();

    // −(1/ρ)∂ρ(ρ∂ρ) with a natural condition on the axis and Dirichlet at
    // the outer edge, in the √ρ-symmetrized form, plus the transverse trap.
    let face = |j: usize| j as f64 * hr;
    let transverse = DMatrix::from_fn(pr, pr, |i, j| {
        if i == j {
            (face(i) + face(i + 1)) / (rho[i] * hr * hr) + 0.25 * eps * eps * rho[i] * rho[i]
        } else if j == i + 1 {
            -face(i + 1) / (hr * hr * (rho[i] * rho[j]).sqrt())
        } else if i == j + 1 {
            -face(j + 1) / (hr * hr * (rho[i] * rho[j]).sqrt())
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(transverse);
    let mut order: Vec<usize> = (0..pr).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let lambda: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let modes = DMatrix::from_fn(pr, pr, |j, m| eig.eigenvectors[(j, order[m])]);
    let zero_point = lambda[0];

    let k = grid.x.wave_numbers();
    let kinetic_x: Vec<f64> = k.iter().map(|k| k * k).collect();
    let hx = grid.x.spacing();

    let mut full = Cylindrical::new(grid, &x, &rho, g, modes.clone(), lambda.clone(), kinetic_x.clone());
    let e_rel = relax(&mut full, opts)?;
    full.check_edges()?;

    let ground: Vec<f64> = (0..pr).map(|j| modes[(j, 0)]).collect();
    let averaged: Vec<f64> = x
        .iter()
        .map(|&xi| 0.25 * xi * xi + ground.iter().zip(&rho).map(|(r0, r)| r0 * r0 * g / (xi * xi + r * r).sqrt()).sum::<f64>())
        .collect();
    let mut single = Line::new(px, hx, averaged, kinetic_x, &x);
    let e_rel_1d = relax(&mut single, opts)?;

    let com = 0.5 + eps;
    Ok(Full3dResult {
        energy: com + e_rel - zero_point + eps,
        single_mode_energy: com + e_rel_1d + eps,
        transverse_zero_point: zero_point,
    })
}

struct Cylindrical {
    px: usize,
    hx: f64,
    /// `ψ(x_i, ρ_j)` with `x` along columns.
    psi: DMatrix<f64>,
    potential: DMatrix<f64>,
    modes: DMatrix<f64>,
    lambda: Vec<f64>,
    kinetic_x: Vec<f64>,
    half_v: DMatrix<f64>,
    full_t: DMatrix<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Cylindrical {
    fn new(
        grid: &CylindricalGrid,
        x: &[f64],
        rho: &[f64],
        g: f64,
        modes: DMatrix<f64>,
        lambda: Vec<f64>,
        kinetic_x: Vec<f64>,
    ) -> Self {
        let (px, pr) = (grid.x.points(), grid.rho_points);
        let potential = DMatrix::from_fn(px, pr, |i, j| 0.25 * x[i] * x[i] + g / (x[i] * x[i] + rho[j] * rho[j]).sqrt());
        let psi = DMatrix::from_fn(px, pr, |i, j| (-0.25 * x[i] * x[i]).exp() * modes[(j, 0)]);
        let mut planner = FftPlanner::new();
        Self {
            px,
            hx: grid.x.spacing(),
            psi,
            potential,
            modes,
            lambda,
            kinetic_x,
            half_v: DMatrix::zeros(0, 0),
            full_t: DMatrix::zeros(0, 0),
            forward: planner.plan_fft_forward(px),
            inverse: planner.plan_fft_inverse(px),
        }
    }

    /// Coefficients in (k, transverse mode) space; column `m` is mode `m`.
    fn to_spectral(&self) -> Vec<Complex64> {
        let projected = &self.psi * &self.modes;
        let mut out: Vec<Complex64> = projected.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        out.chunks_exact_mut(self.px).for_each(|col| self.forward.process(col));
        out
    }

    fn from_spectral(&mut self, mut spec: Vec<Complex64>) {
        spec.chunks_exact_mut(self.px).for_each(|col| self.inverse.process(col));
        let scale = 1.0 / self.px as f64;
        let projected = DMatrix::from_iterator(self.px, self.modes.ncols(), spec.iter().map(|z| z.re * scale));
        self.psi = projected * self.modes.transpose();
    }

    fn check_edges(&self) -> Result<()> {
        let (px, pr) = self.psi.shape();
        let line_x = |i: usize| self.hx * self.psi.row(i).norm_squared();
        let outer_rho = self.hx * self.psi.column(pr - 1).norm_squared();
        let worst = line_x(0).max(line_x(px - 1)).max(outer_rho);
        if worst > FULL3D_EDGE_LIMIT {
            return Err(Error::Domain(format!("relative density {worst:.3e} at the grid boundary")));
        }
        Ok(())
    }
}

impl SplitStep for Cylindrical {
    fn set_step(&mut self, dtau: f64) {
        self.half_v = self.potential.map(|v| (-0.5 * dtau * v).exp());
        let pr = self.lambda.len();
        self.full_t = DMatrix::from_fn(self.px, pr, |i, m| (-dtau * (self.lambda[m] + self.kinetic_x[i])).exp());
    }

    fn step(&mut self) {
        self.psi.component_mul_assign(&self.half_v);
        let mut spec = self.to_spectral();
        spec.iter_mut().zip(self.full_t.iter()).for_each(|(z, f)| *z *= *f);
        self.from_spectral(spec);
        self.psi.component_mul_assign(&self.half_v);
    }

    fn normalize(&mut self) {
        let s = (self.hx * self.psi.norm_squared()).sqrt();
        self.psi /= s;
    }

    fn energy(&self) -> f64 {
        let v = self.hx * self.psi.iter().zip(self.potential.iter()).map(|(p, v)| p * p * v).sum::<f64>();
        let spec = self.to_spectral();
        let px = self.px;
        let (t, norm) = spec.iter().enumerate().fold((0.0, 0.0), |(t, s), (n, z)| {
            (t + z.norm_sqr() * (self.lambda[n / px] + self.kinetic_x[n % px]), s + z.norm_sqr())
        });
        v + t / norm
    }
}

/// One-dimensional relative problem `−∂²_x + v(x)`.
struct Line {
    hx: f64,
    psi: Vec<Complex64>,
    potential: Vec<f64>,
    kinetic: Vec<f64>,
    half_v: Vec<f64>,
    full_t: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Line {
    fn new(px: usize, hx: f64, potential: Vec<f64>, kinetic: Vec<f64>, x: &[f64]) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            hx,
            psi: x.iter().map(|xi| Complex64::new((-0.25 * xi * xi).exp(), 0.0)).collect(),
            potential,
            kinetic,
            half_v: Vec::new(),
            full_t: Vec::new(),
            forward: planner.plan_fft_forward(px),
            inverse: planner.plan_fft_inverse(px),
        }
    }
}

impl SplitStep for Line {
    fn set_step(&mut self, dtau: f64) {
        self.half_v = self.potential.iter().map(|v| (-0.5 * dtau * v).exp()).collect();
        self.full_t = self.kinetic.iter().map(|t| (-dtau * t).exp()).collect();
    }

    fn step(&mut self) {
        let n = self.psi.len() as f64;
        self.psi.iter_mut().zip(&self.half_v).for_each(|(z, f)| *z *= f);
        self.forward.process(&mut self.psi);
        self.psi.iter_mut().zip(&self.full_t).for_each(|(z, f)| *z *= f / n);
        self.inverse.process(&mut self.psi);
        self.psi.iter_mut().zip(&self.half_v).for_each(|(z, f)| *z = Complex64::new(z.re * f, 0.0));
    }

    fn normalize(&mut self) {
        let s = (self.hx * self.psi.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt();
        self.psi.iter_mut().for_each(|z| *z /= s);
    }

    fn energy(&self) -> f64 {
        let v: f64 = self.hx * self.psi.iter().zip(&self.potential).map(|(z, v)| z.norm_sqr() * v).sum::<f64>();
        let mut spec = self.psi.clone();
        self.forward.process(&mut spec);
        let (t, norm) =
            spec.iter().zip(&self.kinetic).fold((0.0, 0.0), |(t, s), (z, k)| (t + z.norm_sqr() * k, s + z.norm_sqr()));
        v + t / norm
    }
}
