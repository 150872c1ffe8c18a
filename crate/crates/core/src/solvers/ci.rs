//! Configuration-interaction ground states.

use super::eigen::{ground_state_with, EigenOptions};
use super::hamiltonian::{build_bosonic_hamiltonian, build_fermionized_hamiltonian};
use super::state::{ManyBodyState, Representation};
use crate::basis::{OrbitalBasis, TwoBodyTensor};
use crate::error::{Error, Result};
use crate::model::TrapParams;

/// Bosonic quasi-1D ground state.
pub fn solve_bosonic(
    params: &TrapParams,
    basis: &OrbitalBasis,
    tensor: &TwoBodyTensor,
    opts: &EigenOptions,
) -> Result<ManyBodyState> {
    let h = build_bosonic_hamiltonian(params, basis, tensor)?;
    let pair = ground_state_with(&h.matrix, opts)?;
    let representation = Representation::Ci { space: h.space, basis: basis.clone(), amplitudes: pair.vector };
    ManyBodyState::new(representation, pair.energy, *params)
}

/// Strict-1D ground state through its fermionic partner.
pub fn solve_fermionized(
    params: &TrapParams,
    basis: &OrbitalBasis,
    tensor: &TwoBodyTensor,
    opts: &EigenOptions,
) -> Result<ManyBodyState> {
    if !params.anisotropy().is_strict() {
        return Err(Error::Configuration("fermionized solve applies to the strict-1D limit".into()));
    }
    let h = build_fermionized_hamiltonian(params.g(), basis, tensor, params.n_particles())?;
    let pair = ground_state_with(&h.matrix, opts)?;
    let representation = Representation::Ci { space: h.space, basis: basis.clone(), amplitudes: pair.vector };
    ManyBodyState::new(representation, pair.energy, *params)
}
