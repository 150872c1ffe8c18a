//! Parameter point to ground state, reduced density matrix and report.

use crate::basis::{antisymmetrized_coulomb_tensor, smooth_tensor, OrbitalBasis, TensorCache, TwoBodyTensor};
use crate::correlation::{
    rdm_from_ci, rdm_from_fermionized, rdm_from_fermionized_monte_carlo, rdm_from_grid, CorrelationReport,
    FermionizedQuadrature, MonteCarloOptions, ReducedDensityMatrix,
};
use crate::error::{Error, Result};
use crate::model::{Anisotropy, EffectivePotential, TrapParams};
use crate::solvers::{
    default_grid, full3d_options, full3d_two_body, imaginary_time_ground_state, solve_bosonic, solve_fermionized,
    CylindricalGrid, EigenOptions, GridAxes,
    ManyBodyState, PropagationOptions, Representation,
};

/// Samples of the exported density profile.
pub const DENSITY_POINTS: usize = 401;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    /// Configuration interaction; fermionized in the strict-1D limit.
    Ci,
    /// Imaginary-time propagation on a uniform grid (N = 2, 3, finite ε).
    Grid,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Ci => "ci",
            Method::Grid => "grid",
        }
    }
}

/// Overrides of the per-point defaults. `None` keeps the default.
#[derive(Debug, Clone, Default)]
pub struct SolveSettings {
    pub n_max: Option<usize>,
    pub grid_points: Option<usize>,
    pub quadrature: Option<FermionizedQuadrature>,
    pub monte_carlo: MonteCarloOptions,
    pub eigen: EigenOptions,
    pub propagation: Option<PropagationOptions>,
    pub cache: Option<TensorCache>,
}

/// Orbital count and basis frequency used when none is given.
///
/// Strict-1D states are built from fermion determinants, which need fewer
/// orbitals per particle than the bosonic expansion of the same density.
pub fn default_basis_shape(params: &TrapParams) -> (usize, f64) {
    match (params.anisotropy(), params.n_particles()) {
        (Anisotropy::StrictOneD, 2) => (40, 1.0),
        (Anisotropy::StrictOneD, 3) => (24, 0.6),
        (Anisotropy::StrictOneD, _) => (22, 0.6),
        (Anisotropy::Finite(_), 2) => (36, 1.0),
        (Anisotropy::Finite(_), 3) => (28, 1.0),
        (Anisotropy::Finite(_), _) => (20, 0.8),
    }
}

pub fn basis_for(params: &TrapParams, settings: &SolveSettings) -> Result<OrbitalBasis> {
    let (n_max, frequency) = default_basis_shape(params);
    OrbitalBasis::with_frequency(settings.n_max.unwrap_or(n_max), frequency)
}

pub fn grid_for(params: &TrapParams, settings: &SolveSettings) -> Result<GridAxes> {
    let axes = default_grid(params)?;
    match settings.grid_points {
        Some(points) => GridAxes::new(points, axes.half_width()),
        None => Ok(axes),
    }
}

fn tensor_for(params: &TrapParams, basis: &OrbitalBasis, cache: Option<&TensorCache>) -> Result<TwoBodyTensor> {
    match (params.anisotropy(), cache) {
        (Anisotropy::StrictOneD, Some(c)) => c.coulomb(basis),
        (Anisotropy::StrictOneD, None) => antisymmetrized_coulomb_tensor(basis),
        (Anisotropy::Finite(eps), Some(c)) => c.smooth(basis, &EffectivePotential::new(eps)?),
        (Anisotropy::Finite(eps), None) => smooth_tensor(basis, &EffectivePotential::new(eps)?),
    }
}

/// Ground state at one parameter point.
pub fn ground_state(params: &TrapParams, method: Method, settings: &SolveSettings) -> Result<ManyBodyState> {
    match method {
        Method::Ci => {
            let basis = basis_for(params, settings)?;
            let tensor = tensor_for(params, &basis, settings.cache.as_ref())?;
            if params.anisotropy().is_strict() {
                solve_fermionized(params, &basis, &tensor, &settings.eigen)
            } else {
                solve_bosonic(params, &basis, &tensor, &settings.eigen)
            }
        }
        Method::Grid => {
            if params.anisotropy().is_strict() {
                return Err(Error::Configuration("grid method needs a finite anisotropy".into()));
            }
            let opts = settings
                .propagation
                .clone()
                .unwrap_or_else(|| PropagationOptions::for_particles(params.n_particles()));
            imaginary_time_ground_state(params, grid_for(params, settings)?, &opts)
        }
    }
}

/// One-body reduced density matrix of any state. Fermionized states whose
/// quadrature would exceed its budget fall back to Monte Carlo sampling.
pub fn one_body_rdm(state: &ManyBodyState, settings: &SolveSettings) -> Result<ReducedDensityMatrix> {
    match state.representation() {
        Representation::Grid { .. } => rdm_from_grid(state),
        Representation::Ci { .. } if state.is_fermionized() => {
            let quad = settings.quadrature.unwrap_or_else(|| FermionizedQuadrature::for_particles(state.n_particles()));
            match rdm_from_fermionized(state, &quad) {
                Err(Error::Resource(_)) => rdm_from_fermionized_monte_carlo(state, &settings.monte_carlo),
                other => other,
            }
        }
        Representation::Ci { .. } => rdm_from_ci(state),
    }
}

/// Everything computed at one parameter point.
#[derive(Debug, Clone)]
pub struct PointResult {
    pub state: ManyBodyState,
    pub rdm: ReducedDensityMatrix,
    pub report: CorrelationReport,
}

pub fn solve_point(params: &TrapParams, method: Method, settings: &SolveSettings) -> Result<PointResult> {
    let state = ground_state(params, method, settings)?;
    let rdm = one_body_rdm(&state, settings)?;
    let report = CorrelationReport::new(&state, &rdm, DENSITY_POINTS)?;
    Ok(PointResult { state, rdm, report })
}

/// One row of the single-mode validation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleModeCheck {
    pub g: f64,
    pub eps: f64,
    pub e_3d: f64,
    /// Single-mode energy on the same longitudinal grid as `e_3d`.
    pub e_1d: f64,
    /// Bosonic CI energy of the quasi-1D model.
    pub e_1d_ci: f64,
    /// `|e_3d − e_1d| / e_3d`.
    pub delta_e: f64,
}

/// Full-3D versus single-mode energy of two particles.
pub fn single_mode_check(g: f64, eps: f64, grid: Option<CylindricalGrid>, settings: &SolveSettings) -> Result<SingleModeCheck> {
    let grid = match grid {
        Some(grid) => grid,
        None => CylindricalGrid::default_for(g, eps)?,
    };
    let full = full3d_two_body(g, eps, &grid, &full3d_options())?;
    let ci = ground_state(&TrapParams::quasi_1d(2, g, eps)?, Method::Ci, settings)?;
    Ok(SingleModeCheck {
        g,
        eps,
        e_3d: full.energy,
        e_1d: full.single_mode_energy,
        e_1d_ci: ci.energy(),
        delta_e: full.delta_e(),
    })
}
