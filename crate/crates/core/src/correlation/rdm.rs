use nalgebra::DMatrix;

use super::DensityProfile;
use crate::basis::OrbitalBasis;
use crate::error::{Error, Result};
use crate::solvers::{ManyBodyState, Representation, Statistics};

#[derive(Debug, Clone)]
pub enum RdmRepresentation {
    /// `ρ_mn` over the orbitals of `basis`.
    Orbital { basis: OrbitalBasis },
    /// Kernel samples `ρ(x_i, x_j)` with quadrature weights for the nodes.
    Grid { nodes: Vec<f64>, weights: Vec<f64> },
}

/// One-body reduced density matrix with unit trace.
#[derive(Debug, Clone)]
pub struct ReducedDensityMatrix {
    representation: RdmRepresentation,
    matrix: DMatrix<f64>,
    raw_trace: f64,
    standard_error: Option<f64>,
}

impl ReducedDensityMatrix {
    /// Symmetrizes and normalizes to unit trace, keeping the trace found.
    pub fn new(representation: RdmRepresentation, matrix: DMatrix<f64>, standard_error: Option<f64>) -> Result<Self> {
        let dim = match &representation {
            RdmRepresentation::Orbital { basis } => basis.n_max(),
            RdmRepresentation::Grid { nodes, weights } => {
                if nodes.len() != weights.len() {
                    return Err(Error::Parameter("grid nodes and weights differ in length".into()));
                }
                nodes.len()
            }
        };
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::Parameter(format!("{}×{} matrix for {dim} functions", matrix.nrows(), matrix.ncols())));
        }
        let mut rdm = Self { representation, matrix: (&matrix + matrix.transpose()) * 0.5, raw_trace: 1.0, standard_error };
        let trace = rdm.trace();
        if !(trace.is_finite() && trace > 0.0) {
            return Err(Error::Integrity(format!("density matrix trace {trace}")));
        }
        rdm.matrix /= trace;
        rdm.raw_trace = trace;
        Ok(rdm)
    }

    pub fn representation(&self) -> &RdmRepresentation {
        &self.representation
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Trace before normalization; a quadrature diagnostic for kernel samples.
    pub fn raw_trace(&self) -> f64 {
        self.raw_trace
    }

    /// Statistical error of a sampled kernel.
    pub fn standard_error(&self) -> Option<f64> {
        self.standard_error
    }

    pub fn trace(&self) -> f64 {
        match &self.representation {
            RdmRepresentation::Orbital { .. } => self.matrix.trace(),
            RdmRepresentation::Grid { weights, .. } => (0..self.dim()).map(|i| weights[i] * self.matrix[(i, i)]).sum(),
        }
    }

    pub fn max_asymmetry(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..i {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)]).abs());
            }
        }
        worst
    }

    /// Matrix whose eigenvalues are the natural occupancies
    /// (`W^{1/2} ρ W^{1/2}` for kernel samples).
    pub fn weighted_matrix(&self) -> DMatrix<f64> {
        match &self.representation {
            RdmRepresentation::Orbital { .. } => self.matrix.clone(),
            RdmRepresentation::Grid { weights, .. } => {
                let s: Vec<f64> = weights.iter().map(|w| w.sqrt()).collect();
                DMatrix::from_fn(self.dim(), self.dim(), |i, j| s[i] * self.matrix[(i, j)] * s[j])
            }
        }
    }

    /// `∬ ρ(x, x′)² dx dx′` evaluated directly on the kernel.
    pub fn kernel_purity(&self) -> f64 {
        match &self.representation {
            RdmRepresentation::Orbital { .. } => self.matrix.iter().map(|v| v * v).sum(),
            RdmRepresentation::Grid { weights, .. } => {
                let n = self.dim();
                let mut s = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        s += weights[i] * weights[j] * self.matrix[(i, j)].powi(2);
                    }
                }
                s
            }
        }
    }

    /// `ρ(x, x′)` for an orbital matrix; kernel samples are not interpolated.
    pub fn kernel(&self, x: f64, xp: f64) -> Result<f64> {
        match &self.representation {
            RdmRepresentation::Orbital { basis } => {
                let (a, b) = (basis.values(x), basis.values(xp));
                let n = basis.n_max();
                Ok((0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| a[i] * self.matrix[(i, j)] * b[j]).sum())
            }
            RdmRepresentation::Grid { .. } => {
                Err(Error::Configuration("kernel samples are only available at their nodes".into()))
            }
        }
    }

    /// Kernel `ρ(x_i, x_j)` on nodes of the representation: its own nodes for
    /// kernel samples, `points` uniform nodes covering the basis otherwise.
    pub fn kernel_samples(&self, points: usize) -> (Vec<f64>, DMatrix<f64>) {
        match &self.representation {
            RdmRepresentation::Orbital { basis } => {
                let (nodes, _) = orbital_nodes(basis, points);
                let n = basis.n_max();
                let phi = DMatrix::from_row_slice(nodes.len(), n, &basis.value_table(&nodes));
                let k = &phi * &self.matrix * phi.transpose();
                (nodes, k)
            }
            RdmRepresentation::Grid { nodes, .. } => (nodes.clone(), self.matrix.clone()),
        }
    }

    pub(super) fn density(&self, points: usize) -> DensityProfile {
        match &self.representation {
            RdmRepresentation::Orbital { basis } => {
                let (nodes, weights) = orbital_nodes(basis, points);
                let n = basis.n_max();
                let table = basis.value_table(&nodes);
                let values = (0..nodes.len())
                    .map(|p| {
                        let phi = &table[p * n..(p + 1) * n];
                        let mut s = 0.0;
                        for a in 0..n {
                            for b in 0..n {
                                s += phi[a] * self.matrix[(a, b)] * phi[b];
                            }
                        }
                        s
                    })
                    .collect();
                DensityProfile { nodes, values, weights }
            }
            RdmRepresentation::Grid { nodes, weights } => DensityProfile {
                nodes: nodes.clone(),
                values: (0..self.dim()).map(|i| self.matrix[(i, i)]).collect(),
                weights: weights.clone(),
            },
        }
    }
}

/// Uniform nodes three oscillator lengths past the outermost turning point,
/// with trapezoid weights.
fn orbital_nodes(basis: &OrbitalBasis, points: usize) -> (Vec<f64>, Vec<f64>) {
    let points = points.max(3);
    let half = basis.length() * ((2.0 * basis.n_max() as f64 + 1.0).sqrt() + 3.0);
    let h = 2.0 * half / (points - 1) as f64;
    let nodes = (0..points).map(|i| -half + i as f64 * h).collect();
    let mut weights = vec![h; points];
    weights[0] *= 0.5;
    weights[points - 1] *= 0.5;
    (nodes, weights)
}

/// `ρ_mn = ⟨a†_m a_n⟩ / N` from bosonic CI amplitudes.
pub fn rdm_from_ci(state: &ManyBodyState) -> Result<ReducedDensityMatrix> {
    let Representation::Ci { space, basis, amplitudes } = state.representation() else {
        return Err(Error::Configuration("orbital density matrix needs a CI state".into()));
    };
    if space.statistics() != Statistics::Symmetric {
        return Err(Error::Configuration(
            "fermionized states need rdm_from_fermionized; |ψ_F| has no orbital one-body matrix".into(),
        ));
    }
    let norb = space.n_orbitals();
    let unit = |o: usize| 1u128 << (space.key_bits() * o);
    let mut rho = DMatrix::zeros(norb, norb);
    for (c, &amp) in amplitudes.iter().enumerate() {
        if amp == 0.0 {
            continue;
        }
        let key = space.key(c);
        let occ = space.occupations(c);
        for n in (0..norb).filter(|&n| occ[n] > 0) {
            rho[(n, n)] += amp * amp * occ[n] as f64;
            for m in (0..norb).filter(|&m| m != n) {
                let target = space.index_of_key(key - unit(n) + unit(m)).expect("occupation key inside the space");
                rho[(m, n)] += amplitudes[target] * amp * (occ[n] as f64 * (occ[m] as f64 + 1.0)).sqrt();
            }
        }
    }
    rho /= space.n_particles() as f64;
    ReducedDensityMatrix::new(RdmRepresentation::Orbital { basis: basis.clone() }, rho, None)
}

/// `ρ(x, x′) = ∫ ψ(x, ·) ψ(x′, ·)` by the grid's own trapezoidal rule.
pub fn rdm_from_grid(state: &ManyBodyState) -> Result<ReducedDensityMatrix> {
    let Representation::Grid { axes, amplitudes } = state.representation() else {
        return Err(Error::Configuration("grid density matrix needs a grid state".into()));
    };
    let p = axes.points();
    let n = state.n_particles();
    let h = axes.spacing();
    let psi = DMatrix::from_row_slice(p, p.pow(n as u32 - 1), amplitudes);
    let rho = &psi * psi.transpose() * h.powi(n as i32 - 1);
    ReducedDensityMatrix::new(RdmRepresentation::Grid { nodes: axes.nodes(), weights: vec![h; p] }, rho, None)
}
