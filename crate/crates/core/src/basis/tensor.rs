//! Two-body matrix elements `⟨ij|v|kl⟩ = ∬ φ_i(x₁)φ_j(x₂) v(x₁−x₂) φ_k(x₁)φ_l(x₂)`.
//!
//! Both kernels are evaluated through the center-of-mass/relative expansion:
//! the pair products are re-expanded exactly into `Φ_N(X)φ_K(r)` and only
//! one-dimensional relative integrals `∫ φ_K(r)φ_K'(r) v(√2 r) dr` remain.
//! By parity those integrals reduce to the half line, where the cusp of the
//! effective interaction and the `1/|r|` pole both sit at an endpoint and a
//! composite Gauss–Legendre rule converges spectrally.
//!
//! For the bare Coulomb kernel the individual elements diverge; only the
//! antisymmetrized combination `V_ijkl − V_ijlk` is formed, which keeps odd
//! relative channels where `φ_K(r)/r` is regular.

use rayon::prelude::*;

use super::moshinsky::MoshinskyTable;
use super::quadrature::composite_legendre;
use super::{unit_ho_values, OrbitalBasis};
use crate::error::Result;
use crate::model::EffectivePotential;

const NODES_PER_PANEL: usize = 16;
const TAIL_MARGIN: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TensorKind {
    /// Effective quasi-1D interaction at the given anisotropy.
    Smooth { eps: f64 },
    /// `V_ijkl − V_ijlk` for the kernel `1/|x₁−x₂|`.
    AntisymmetrizedCoulomb,
}

/// Dense four-index interaction tensor, row-major in `(i, j, k, l)`.
#[derive(Debug, Clone)]
pub struct TwoBodyTensor {
    kind: TensorKind,
    n_max: usize,
    basis: OrbitalBasis,
    elements: Vec<f64>,
}

impl TwoBodyTensor {
    pub(crate) fn from_parts(kind: TensorKind, basis: OrbitalBasis, elements: Vec<f64>) -> Self {
        let n_max = basis.n_max();
        debug_assert_eq!(elements.len(), n_max.pow(4));
        Self { kind, n_max, basis, elements }
    }

    pub fn kind(&self) -> TensorKind {
        self.kind
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn basis(&self) -> &OrbitalBasis {
        &self.basis
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let n = self.n_max;
        self.elements[((i * n + j) * n + k) * n + l]
    }

    pub fn elements(&self) -> &[f64] {
        &self.elements
    }
}

/// Relative-motion integrals `W[K][K'] = ∫ φ_K(r) φ_K'(r) kernel(√2|r|) dr`
/// for `K, K' ≤ k_max`, in the oscillator length of `basis`.
///
/// `parity_filter` selects which `(K, K')` pairs are integrated; the others
/// are exactly zero.
fn integrate_relative(
    basis: &OrbitalBasis,
    k_max: usize,
    panel_width: f64,
    kernel: impl Fn(f64) -> f64,
    parity_filter: impl Fn(usize, usize) -> bool,
) -> Vec<Vec<f64>> {
    let b = basis.length();
    let reach = ((2 * k_max + 1) as f64).sqrt() + TAIL_MARGIN;
    let panels = (reach / panel_width).ceil() as usize;
    let edges: Vec<f64> = (0..=panels).map(|p| p as f64 * reach / panels as f64).collect();
    let (nodes, weights) = composite_legendre(&edges, NODES_PER_PANEL);

    let dim = k_max + 1;
    let mut table = vec![0.0; nodes.len() * dim];
    let mut kern = Vec::with_capacity(nodes.len());
    for (p, &s) in nodes.iter().enumerate() {
        unit_ho_values(s, &mut table[p * dim..(p + 1) * dim]);
        kern.push(2.0 * weights[p] * kernel(std::f64::consts::SQRT_2 * b * s));
    }

    let mut w = vec![vec![0.0; dim]; dim];
    for a in 0..dim {
        for c in a..dim {
            if !parity_filter(a, c) {
                continue;
            }
            let s: f64 = (0..nodes.len()).map(|p| kern[p] * table[p * dim + a] * table[p * dim + c]).sum();
            w[a][c] = s;
            w[c][a] = s;
        }
    }
    w
}

/// Relative integrals of the effective interaction; zero for `K + K'` odd.
pub fn relative_integrals(basis: &OrbitalBasis, potential: &EffectivePotential, k_max: usize) -> Vec<Vec<f64>> {
    // The potential varies on the transverse length 1/√ε.
    let scale = 1.0 / (basis.length() * potential.anisotropy().sqrt());
    let width = 0.5f64.min(scale);
    integrate_relative(basis, k_max, width, |x| potential.eval(x), |a, c| (a + c) % 2 == 0)
}

/// Relative integrals of `1/|x₁−x₂|` restricted to odd `K, K'` (all other
/// entries are zero and the even-even ones do not exist).
pub fn relative_coulomb_integrals(basis: &OrbitalBasis, k_max: usize) -> Vec<Vec<f64>> {
    integrate_relative(basis, k_max, 0.5, |x| 1.0 / x, |a, c| a % 2 == 1 && c % 2 == 1)
}

/// Symmetry operations on index quadruples, with the sign they carry.
type Generator = fn([usize; 4]) -> ([usize; 4], f64);

const SMOOTH_GENERATORS: [Generator; 4] = [
    |[i, j, k, l]| ([j, i, l, k], 1.0),
    |[i, j, k, l]| ([k, l, i, j], 1.0),
    |[i, j, k, l]| ([k, j, i, l], 1.0),
    |[i, j, k, l]| ([i, l, k, j], 1.0),
];

const ANTISYMMETRIC_GENERATORS: [Generator; 3] = [
    |[i, j, k, l]| ([j, i, l, k], 1.0),
    |[i, j, k, l]| ([k, l, i, j], 1.0),
    |[i, j, k, l]| ([i, j, l, k], -1.0),
];

/// Orbit of `q` under the generators, each member with its sign relative to
/// `q`. The flag is false when some member is reached with both signs, in
/// which case the element is forced to zero.
fn orbit(q: [usize; 4], generators: &[Generator]) -> (Vec<([usize; 4], f64)>, bool) {
    let mut members = vec![(q, 1.0)];
    let mut frontier = 0;
    let mut consistent = true;
    while frontier < members.len() {
        let (cur, sign) = members[frontier];
        frontier += 1;
        for gen in generators {
            let (next, s) = gen(cur);
            let s = s * sign;
            match members.iter().find(|(m, _)| *m == next) {
                Some(&(_, existing)) => {
                    if existing != s {
                        consistent = false;
                    }
                }
                None => members.push((next, s)),
            }
        }
    }
    (members, consistent)
}

fn fill_by_symmetry(
    n: usize,
    generators: &[Generator],
    value: impl Fn([usize; 4]) -> f64 + Sync,
) -> Vec<f64> {
    let idx = |[i, j, k, l]: [usize; 4]| ((i * n + j) * n + k) * n + l;
    let mut seen = vec![false; n.pow(4)];
    let mut orbits = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let q = [i, j, k, l];
                    if seen[idx(q)] {
                        continue;
                    }
                    let (members, consistent) = orbit(q, generators);
                    for (m, _) in &members {
                        seen[idx(*m)] = true;
                    }
                    orbits.push((members, consistent));
                }
            }
        }
    }
    let values: Vec<f64> = orbits
        .par_iter()
        .map(|(members, consistent)| if *consistent { value(members[0].0) } else { 0.0 })
        .collect();
    let mut elements = vec![0.0; n.pow(4)];
    for ((members, _), v) in orbits.iter().zip(values) {
        for (m, s) in members {
            elements[idx(*m)] = s * v;
        }
    }
    elements
}

/// Matrix elements of the effective interaction (per unit coupling).
pub fn smooth_tensor(basis: &OrbitalBasis, potential: &EffectivePotential) -> Result<TwoBodyTensor> {
    let n = basis.n_max();
    let k_max = 2 * (n - 1);
    let rel = relative_integrals(basis, potential, k_max);
    let table = MoshinskyTable::new(n);
    let elements = fill_by_symmetry(n, &SMOOTH_GENERATORS, |[i, j, k, l]| {
        if (i + j + k + l) % 2 == 1 {
            return 0.0;
        }
        let (bra, ket) = (table.get(i, j), table.get(k, l));
        let top = (i + j).min(k + l);
        (0..=top).map(|c| bra[c] * ket[c] * rel[i + j - c][k + l - c]).sum()
    });
    Ok(TwoBodyTensor::from_parts(TensorKind::Smooth { eps: potential.anisotropy() }, basis.clone(), elements))
}

/// Antisymmetrized matrix elements of `1/|x₁−x₂|`.
pub fn antisymmetrized_coulomb_tensor(basis: &OrbitalBasis) -> Result<TwoBodyTensor> {
    let n = basis.n_max();
    if n < 2 {
        return Err(crate::error::Error::Parameter(
            "antisymmetrized tensor needs at least two orbitals".into(),
        ));
    }
    let k_max = 2 * (n - 1);
    let rel = relative_coulomb_integrals(basis, k_max);
    let table = MoshinskyTable::new(n);
    let elements = fill_by_symmetry(n, &ANTISYMMETRIC_GENERATORS, |[i, j, k, l]| {
        if (i + j) % 2 != (k + l) % 2 {
            return 0.0;
        }
        let (bra, ket) = (table.get(i, j), table.get(k, l));
        let top = (i + j).min(k + l);
        2.0 * (0..=top)
            .filter(|c| (k + l - c) % 2 == 1)
            .map(|c| bra[c] * ket[c] * rel[i + j - c][k + l - c])
            .sum::<f64>()
    });
    Ok(TwoBodyTensor::from_parts(TensorKind::AntisymmetrizedCoulomb, basis.clone(), elements))
}
