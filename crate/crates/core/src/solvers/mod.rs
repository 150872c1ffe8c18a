//! Many-body solvers.

mod ci;
mod config_space;
mod eigen;
mod full3d;
pub(crate) mod grid;
mod hamiltonian;
mod imaginary_time;
mod propagation;
mod state;

pub use ci::{solve_bosonic, solve_fermionized};
pub use config_space::{binomial, ConfigurationSpace, Statistics};
pub use eigen::{fix_sign, ground_state, ground_state_with, EigenOptions, Eigenpair, DEFAULT_DENSE_LIMIT, DEFAULT_TOLERANCE};
pub use full3d::{full3d_options, full3d_two_body, full3d_two_body_energy, CylindricalGrid, Full3dResult, FULL3D_EDGE_LIMIT};
pub use grid::GridAxes;
pub use hamiltonian::{build_bosonic_hamiltonian, build_fermionized_hamiltonian, Hamiltonian, SymmetricMatrix};
pub use imaginary_time::{default_grid, imaginary_time_ground_state, EDGE_DENSITY_LIMIT};
pub use propagation::{PropagationOptions, ENERGY_RISE_LIMIT};
pub use state::{ManyBodyState, Representation, NORM_TOLERANCE};
