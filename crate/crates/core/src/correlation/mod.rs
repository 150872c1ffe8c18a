//! One-body reduced density matrices, natural occupancies and linear entropy.

mod fermionized;
mod rdm;

pub use fermionized::{
    fermionic_one_body_matrix, fermionized_density, rdm_from_fermionized, rdm_from_fermionized_monte_carlo, FermionizedQuadrature,
    MonteCarloOptions, DEFAULT_EVALUATION_BUDGET,
};
pub use rdm::{rdm_from_ci, rdm_from_grid, RdmRepresentation, ReducedDensityMatrix};

use nalgebra::SymmetricEigen;

use crate::error::{Error, Result};
use crate::model::TrapParams;
use crate::solvers::ManyBodyState;

/// Eigenvalues below this are treated as an upstream error.
pub const NEGATIVE_OCCUPANCY_LIMIT: f64 = -1e-6;

/// Reports keep occupancies until their cumulative sum reaches `1 − this`.
pub const REPORT_OCCUPANCY_CUTOFF: f64 = 1e-6;
pub const REPORT_MAX_OCCUPANCIES: usize = 32;

/// Natural occupancies `λ_0 ≥ λ_1 ≥ …` (all of them).
pub fn natural_occupancies(rdm: &ReducedDensityMatrix) -> Result<Vec<f64>> {
    let eig = SymmetricEigen::new(rdm.weighted_matrix());
    let mut lambda: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    lambda.sort_by(|a, b| b.total_cmp(a));
    if let Some(&low) = lambda.last() {
        if low < NEGATIVE_OCCUPANCY_LIMIT {
            return Err(Error::Integrity(format!("density matrix has eigenvalue {low:.3e}")));
        }
    }
    Ok(lambda)
}

/// Purity `Σλ²`.
pub fn purity(occupancies: &[f64]) -> f64 {
    occupancies.iter().map(|l| l * l).sum()
}

/// Linear entropy `1 − Σλ²`.
pub fn linear_entropy(occupancies: &[f64]) -> f64 {
    1.0 - purity(occupancies)
}

/// Leading occupancies up to the report cutoff.
pub fn truncate_occupancies(occupancies: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    let mut sum = 0.0;
    for &l in occupancies.iter().take(REPORT_MAX_OCCUPANCIES) {
        out.push(l);
        sum += l;
        if sum >= 1.0 - REPORT_OCCUPANCY_CUTOFF {
            break;
        }
    }
    out
}

/// One-body density `n(x) = ρ(x, x)` with the weights that integrate it.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityProfile {
    pub nodes: Vec<f64>,
    pub values: Vec<f64>,
    pub weights: Vec<f64>,
}

impl DensityProfile {
    pub fn integral(&self) -> f64 {
        self.values.iter().zip(&self.weights).map(|(v, w)| v * w).sum()
    }

    /// `max |n(x) − n(−x)|` over node pairs mirrored about the center.
    pub fn max_asymmetry(&self) -> f64 {
        let m = self.nodes.len();
        (0..m)
            .filter_map(|i| {
                let j = self.mirror(i)?;
                Some((self.values[i] - self.values[j]).abs())
            })
            .fold(0.0, f64::max)
    }

    fn mirror(&self, i: usize) -> Option<usize> {
        let m = self.nodes.len();
        let x = self.nodes[i];
        let scale = self.nodes.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1.0);
        // Uniform grids are either symmetric or periodic with the last node missing.
        [m - 1 - i, (m - i) % m]
            .into_iter()
            .find(|&j| (self.nodes[j] + x).abs() <= 1e-12 * scale)
    }

    /// Positions of strict local maxima above `threshold · max n`.
    pub fn local_maxima(&self, threshold: f64) -> Vec<f64> {
        let peak = self.values.iter().copied().fold(0.0, f64::max);
        let v = &self.values;
        (1..v.len().saturating_sub(1))
            .filter(|&i| v[i] > v[i - 1] && v[i] >= v[i + 1] && v[i] > threshold * peak)
            .map(|i| self.nodes[i])
            .collect()
    }
}

/// Density of a state: from its fermionic partner when fermionized,
/// otherwise from `rdm`.
pub fn state_density(state: &ManyBodyState, rdm: &ReducedDensityMatrix, points: usize) -> Result<DensityProfile> {
    if state.is_fermionized() {
        fermionized_density(state, points)
    } else {
        Ok(density_profile(rdm, points))
    }
}

/// Density profile of a reduced density matrix.
///
/// Grid matrices use their own nodes; orbital matrices are sampled on
/// `points` uniform nodes over `[−L, L]` with `L` covering the basis.
pub fn density_profile(rdm: &ReducedDensityMatrix, points: usize) -> DensityProfile {
    rdm.density(points)
}

#[derive(Debug, Clone)]
pub struct CorrelationReport {
    pub params: TrapParams,
    pub energy: f64,
    /// Leading occupancies, descending.
    pub occupancies: Vec<f64>,
    pub linear_entropy: f64,
    pub density: DensityProfile,
}

impl CorrelationReport {
    pub fn new(state: &ManyBodyState, rdm: &ReducedDensityMatrix, density_points: usize) -> Result<Self> {
        let lambda = natural_occupancies(rdm)?;
        Ok(Self {
            params: *state.params(),
            energy: state.energy(),
            linear_entropy: linear_entropy(&lambda),
            occupancies: truncate_occupancies(&lambda),
            density: state_density(state, rdm, density_points)?,
        })
    }
}
