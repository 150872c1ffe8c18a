//! Oscillator single-particle basis, quadrature and two-body matrix elements.

mod cache;
mod ho;
mod moshinsky;
mod quadrature;
mod tensor;

pub use cache::{read_tensor, write_tensor, TensorCache, TensorKey, TENSOR_FORMAT_VERSION, TENSOR_MAGIC};
pub use ho::{ho_eigenfunction, unit_ho_values};
pub use moshinsky::{moshinsky_coefficients, MoshinskyTable, MoshinskyTerm};
pub use quadrature::{composite_legendre, GaussHermite, GaussLegendre};
pub use tensor::{
    antisymmetrized_coulomb_tensor, relative_coulomb_integrals, relative_integrals, smooth_tensor,
    TensorKind, TwoBodyTensor,
};

use crate::error::{Error, Result};

/// Extra Gauss–Hermite nodes beyond `2·n_max` required by [`OrbitalBasis`].
pub const MIN_QUADRATURE_MARGIN: usize = 16;
/// Margin used when no quadrature order is given.
pub const DEFAULT_QUADRATURE_MARGIN: usize = 32;

/// Truncated oscillator basis `φ_0 … φ_{n_max−1}` with oscillator length
/// `b = 1/√(mass·frequency)`, plus a Gauss–Hermite rule matched to it.
#[derive(Debug, Clone)]
pub struct OrbitalBasis {
    n_max: usize,
    mass: f64,
    frequency: f64,
    quadrature: GaussHermite,
}

impl OrbitalBasis {
    /// Unit mass and frequency with the default quadrature margin.
    pub fn new(n_max: usize) -> Result<Self> {
        Self::with_params(n_max, 1.0, 1.0, 2 * n_max + DEFAULT_QUADRATURE_MARGIN)
    }

    /// Unit mass, the given oscillator frequency, default quadrature.
    pub fn with_frequency(n_max: usize, frequency: f64) -> Result<Self> {
        Self::with_params(n_max, 1.0, frequency, 2 * n_max + DEFAULT_QUADRATURE_MARGIN)
    }

    pub fn with_params(n_max: usize, mass: f64, frequency: f64, quadrature_order: usize) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::Parameter("basis needs at least one orbital".into()));
        }
        if !(mass.is_finite() && mass > 0.0 && frequency.is_finite() && frequency > 0.0) {
            return Err(Error::Parameter(format!(
                "mass {mass} and frequency {frequency} must be positive"
            )));
        }
        if quadrature_order < 2 * n_max + MIN_QUADRATURE_MARGIN {
            return Err(Error::Parameter(format!(
                "quadrature order {quadrature_order} below 2·n_max + {MIN_QUADRATURE_MARGIN} = {}",
                2 * n_max + MIN_QUADRATURE_MARGIN
            )));
        }
        Ok(Self { n_max, mass, frequency, quadrature: GaussHermite::new(quadrature_order) })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn frequency(&self) -> f64 {
        self.frequency
    }

    pub fn quadrature_order(&self) -> usize {
        self.quadrature.order()
    }

    /// Oscillator length of the basis functions.
    pub fn length(&self) -> f64 {
        1.0 / (self.mass * self.frequency).sqrt()
    }

    /// Gauss–Hermite rule scaled to the basis length.
    pub fn quadrature(&self) -> (Vec<f64>, Vec<f64>) {
        let b = self.length();
        let nodes = self.quadrature.nodes.iter().map(|x| b * x).collect();
        let weights = self.quadrature.weights.iter().map(|w| b * w).collect();
        (nodes, weights)
    }

    /// `φ_n(x)` for every orbital, written into `out` (length `n_max`).
    pub fn values_into(&self, x: f64, out: &mut [f64]) {
        let b = self.length();
        unit_ho_values(x / b, out);
        let s = b.powf(-0.5);
        out.iter_mut().for_each(|v| *v *= s);
    }

    pub fn values(&self, x: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.n_max];
        self.values_into(x, &mut out);
        out
    }

    /// Row-major `points × n_max` table of orbital values.
    pub fn value_table(&self, points: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; points.len() * self.n_max];
        for (row, &x) in out.chunks_mut(self.n_max).zip(points) {
            self.values_into(x, row);
        }
        out
    }

    /// Matrix of the physical longitudinal one-body operator
    /// `−½ d²/dx² + ½ x²` in this basis (row-major `n_max × n_max`).
    ///
    /// Diagonal `n + ½` when the basis length is 1; otherwise it couples
    /// `n ↔ n ± 2`.
    pub fn one_body_matrix(&self) -> Vec<f64> {
        let n = self.n_max;
        let b2 = self.length().powi(2);
        let (kin, pot) = (0.25 / b2, 0.25 * b2);
        let mut h = vec![0.0; n * n];
        for m in 0..n {
            let mf = m as f64;
            h[m * n + m] = (kin + pot) * (2.0 * mf + 1.0);
            if m + 2 < n {
                let off = (pot - kin) * ((mf + 1.0) * (mf + 2.0)).sqrt();
                h[m * n + m + 2] = off;
                h[(m + 2) * n + m] = off;
            }
        }
        h
    }

    pub(crate) fn same_shape(&self, other: &OrbitalBasis) -> bool {
        self.n_max == other.n_max
            && self.mass == other.mass
            && self.frequency == other.frequency
            && self.quadrature_order() == other.quadrature_order()
    }
}
