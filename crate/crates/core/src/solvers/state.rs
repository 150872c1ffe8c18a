//! Ground-state containers.

use super::config_space::{ConfigurationSpace, Statistics};
use super::grid::GridAxes;
use crate::basis::OrbitalBasis;
use crate::error::{Error, Result};
use crate::model::TrapParams;

pub const NORM_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone)]
pub enum Representation {
    /// Configuration-interaction amplitudes over `space` built on `basis`.
    /// Antisymmetric spaces hold the fermionized wavefunction.
    Ci { space: ConfigurationSpace, basis: OrbitalBasis, amplitudes: Vec<f64> },
    /// Wavefunction sampled on the `N`-fold product of `axes`, row-major with
    /// the last particle fastest. Unit norm under `h^N Σ ψ²`.
    Grid { axes: GridAxes, amplitudes: Vec<f64> },
}

#[derive(Debug, Clone)]
pub struct ManyBodyState {
    representation: Representation,
    energy: f64,
    params: TrapParams,
}

impl ManyBodyState {
    pub fn new(representation: Representation, energy: f64, params: TrapParams) -> Result<Self> {
        let n = params.n_particles();
        match &representation {
            Representation::Ci { space, basis, amplitudes } => {
                if space.n_particles() != n || space.n_orbitals() != basis.n_max() || amplitudes.len() != space.dim() {
                    return Err(Error::Configuration("CI amplitudes do not match their space".into()));
                }
                if space.statistics() == Statistics::Antisymmetric && !params.anisotropy().is_strict() {
                    return Err(Error::Configuration("fermionized states belong to the strict-1D limit".into()));
                }
            }
            Representation::Grid { axes, amplitudes } => {
                if amplitudes.len() != axes.points().pow(n as u32) {
                    return Err(Error::Configuration("grid amplitudes do not match the axes".into()));
                }
            }
        }
        let state = Self { representation, energy, params };
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::Integrity(format!("state norm {norm} differs from 1")));
        }
        Ok(state)
    }

    pub fn representation(&self) -> &Representation {
        &self.representation
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn params(&self) -> &TrapParams {
        &self.params
    }

    pub fn n_particles(&self) -> usize {
        self.params.n_particles()
    }

    /// True when the amplitudes describe the fermionic partner `ψ_F`.
    pub fn is_fermionized(&self) -> bool {
        matches!(&self.representation, Representation::Ci { space, .. } if space.statistics() == Statistics::Antisymmetric)
    }

    pub fn norm(&self) -> f64 {
        match &self.representation {
            Representation::Ci { amplitudes, .. } => amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt(),
            Representation::Grid { axes, amplitudes } => {
                let w = axes.spacing().powi(self.params.n_particles() as i32);
                (w * amplitudes.iter().map(|a| a * a).sum::<f64>()).sqrt()
            }
        }
    }
}
