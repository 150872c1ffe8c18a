//! Bosonic density matrix of the strict-1D state from its fermionic partner.
//!
//! With `A(x, y) = Π_j sgn(y_j − x)`, the mapped boson satisfies
//! `ψ_B(x, y) ψ_B(x′, y) = G(x, y) G(x′, y)` for `G = ψ_F·A`: the sign
//! factors among the `y_j` cancel in the product. Sampling `x` at panel
//! edges keeps `A` constant inside every integration panel, so Gauss–Legendre
//! in `y` sees a smooth integrand and the kernel is a single weighted
//! product `ρ = G W Gᵀ`.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::rdm::{RdmRepresentation, ReducedDensityMatrix};
use super::DensityProfile;
use crate::basis::{composite_legendre, OrbitalBasis};
use crate::error::{Error, Result};
use crate::solvers::{ConfigurationSpace, ManyBodyState, Representation, Statistics};

/// Largest number of `ψ_F` evaluations `(panels + 1)·G^{N−1}` allowed by default.
pub const DEFAULT_EVALUATION_BUDGET: usize = 400_000_000;

/// The kernel extent leaves out at most this much of the density.
const TAIL_MASS: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FermionizedQuadrature {
    /// Uniform panels on `[−L, L]`; the kernel is sampled at their edges.
    pub panels: usize,
    /// Gauss–Legendre nodes per panel for each integrated coordinate.
    pub nodes_per_panel: usize,
    /// `L`; chosen from the density when absent.
    pub half_width: Option<f64>,
    pub budget: usize,
}

impl FermionizedQuadrature {
    pub fn for_particles(n: usize) -> Self {
        let (panels, nodes_per_panel) = match n {
            0..=2 => (64, 4),
            3 => (48, 3),
            _ => (48, 2),
        };
        Self { panels, nodes_per_panel, half_width: None, budget: DEFAULT_EVALUATION_BUDGET }
    }

    fn validate(&self) -> Result<()> {
        if self.panels < 4 || self.panels % 2 != 0 || self.nodes_per_panel == 0 {
            return Err(Error::Parameter(format!(
                "quadrature needs an even number ≥ 4 of panels and ≥ 1 node per panel, got {} × {}",
                self.panels, self.nodes_per_panel
            )));
        }
        if let Some(l) = self.half_width {
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::Parameter(format!("quadrature half width {l} must be positive")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloOptions {
    pub panels: usize,
    pub samples: usize,
    pub seed: u64,
    pub half_width: Option<f64>,
}

impl Default for MonteCarloOptions {
    fn default() -> Self {
        Self { panels: 32, samples: 20_000, seed: 0, half_width: None }
    }
}

/// One-body density of a fermionized state. `|ψ_F|² = ψ_F²`, so it is the
/// diagonal of `γ / N` and needs no quadrature.
pub fn fermionized_density(state: &ManyBodyState, points: usize) -> Result<DensityProfile> {
    let (_, basis, _) = fermionized_parts(state)?;
    let gamma = fermionic_one_body_matrix(state)?;
    let rdm = ReducedDensityMatrix::new(RdmRepresentation::Orbital { basis: basis.clone() }, gamma, None)?;
    Ok(rdm.density(points))
}

/// `γ_mn = ⟨c†_m c_n⟩` of a fermionized CI state (trace `N`).
pub fn fermionic_one_body_matrix(state: &ManyBodyState) -> Result<DMatrix<f64>> {
    let (space, _, amplitudes) = fermionized_parts(state)?;
    let norb = space.n_orbitals();
    let mut gamma = DMatrix::zeros(norb, norb);
    for (c, &amp) in amplitudes.iter().enumerate() {
        if amp == 0.0 {
            continue;
        }
        let mask = space.key(c);
        for n in (0..norb).filter(|&n| mask >> n & 1 == 1) {
            gamma[(n, n)] += amp * amp;
            let removed = mask & !(1u128 << n);
            for m in (0..norb).filter(|&m| removed >> m & 1 == 0 && m != n) {
                let target = space.index_of_key(removed | 1u128 << m).expect("occupation mask inside the space");
                let sign = parity_below(mask, n) * parity_below(removed, m);
                gamma[(m, n)] += sign * amplitudes[target] * amp;
            }
        }
    }
    Ok(gamma)
}

/// Bosonic one-body density matrix of `|ψ_F|` sampled on panel edges.
pub fn rdm_from_fermionized(state: &ManyBodyState, quad: &FermionizedQuadrature) -> Result<ReducedDensityMatrix> {
    quad.validate()?;
    let (space, basis, amplitudes) = fermionized_parts(state)?;
    let n = space.n_particles();
    let half = match quad.half_width {
        Some(l) => l,
        None => density_half_width(state)?,
    };
    let edges = uniform_edges(half, quad.panels);
    let a = edges.len();
    let (y, wy) = composite_legendre(&edges, quad.nodes_per_panel);
    let g = y.len();
    let evaluations = (a as f64) * (g as f64).powi(n as i32 - 1);
    if evaluations > quad.budget as f64 {
        return Err(Error::Resource(format!(
            "{evaluations:.3e} wavefunction evaluations exceed the budget {:.3e}; reduce panels or nodes per panel \
             (for example {} × {}) or use the Monte Carlo estimate",
            quad.budget as f64,
            quad.panels / 2,
            quad.nodes_per_panel
        )));
    }
    let norb = space.n_orbitals();
    let coeff = coefficient_tensor(space, amplitudes);
    let px = DMatrix::from_row_slice(a, norb, &basis.value_table(&edges));
    let pyt = DMatrix::from_column_slice(norb, g, &basis.value_table(&y));
    let t1 = &px * DMatrix::from_column_slice(norb, norb.pow(n as u32 - 1), &coeff);
    // sign[a][g] = sgn(y_g − x_a); node g lies in panel g / q.
    let q = quad.nodes_per_panel;
    let sign = DMatrix::from_fn(a, g, |i, j| if j / q >= i { 1.0 } else { -1.0 });

    let rho = match n {
        2 => {
            let f = &t1 * &pyt;
            let h = DMatrix::from_fn(a, g, |i, j| f[(i, j)] * sign[(i, j)] * wy[j].sqrt());
            &h * h.transpose()
        }
        _ => {
            let partials: Vec<DMatrix<f64>> = (0..g)
                .into_par_iter()
                .map(|g2| {
                    let t2 = contract_leading(&t1, pyt.column(g2).clone_owned(), norb);
                    let f = expand_remaining(&t2, &pyt, norb, n - 2);
                    let inner = g.pow(n as u32 - 2);
                    let h = DMatrix::from_fn(a, inner, |i, col| {
                        let mut s = sign[(i, g2)] * wy[g2];
                        let mut rest = col;
                        for _ in 0..n - 2 {
                            let gj = rest % g;
                            rest /= g;
                            s *= sign[(i, gj)] * wy[gj];
                        }
                        f[(i, col)] * s.abs().sqrt() * s.signum()
                    });
                    &h * h.transpose()
                })
                .collect();
            let mut rho = DMatrix::zeros(a, a);
            for part in &partials {
                rho += part;
            }
            rho
        }
    };
    let rho = DMatrix::from_fn(a, a, |i, j| 0.5 * (rho[(i, j)] + rho[(a - 1 - i, a - 1 - j)]));
    let weights = simpson_weights(&edges);
    ReducedDensityMatrix::new(RdmRepresentation::Grid { nodes: edges, weights }, rho, None)
}

/// Sampled estimate of the same kernel with uniform random `y`; the
/// standard error refers to the unnormalized trace, relative to its mean.
pub fn rdm_from_fermionized_monte_carlo(
    state: &ManyBodyState,
    opts: &MonteCarloOptions,
) -> Result<ReducedDensityMatrix> {
    if opts.samples < 2 {
        return Err(Error::Parameter("Monte Carlo estimate needs at least two samples".into()));
    }
    FermionizedQuadrature { panels: opts.panels, nodes_per_panel: 1, half_width: opts.half_width, budget: usize::MAX }
        .validate()?;
    let (space, basis, amplitudes) = fermionized_parts(state)?;
    let n = space.n_particles();
    let half = match opts.half_width {
        Some(l) => l,
        None => density_half_width(state)?,
    };
    let edges = uniform_edges(half, opts.panels);
    let weights = simpson_weights(&edges);
    let a = edges.len();
    let norb = space.n_orbitals();
    let coeff = coefficient_tensor(space, amplitudes);
    let px = DMatrix::from_row_slice(a, norb, &basis.value_table(&edges));
    let t1 = &px * DMatrix::from_column_slice(norb, norb.pow(n as u32 - 1), &coeff);
    let volume = (2.0 * half).powi(n as i32 - 1);

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut rho = DMatrix::zeros(a, a);
    let mut traces = Vec::with_capacity(opts.samples);
    let mut y = vec![0.0; n - 1];
    for _ in 0..opts.samples {
        y.iter_mut().for_each(|v| *v = rng.gen_range(-half..half));
        let mut kron = DVector::from_element(1, 1.0);
        for &yj in y.iter().rev() {
            let phi = DVector::from_vec(basis.values(yj));
            kron = kron.kronecker(&phi);
        }
        let f = &t1 * kron;
        let gvec = DVector::from_fn(a, |i, _| {
            let s: f64 = y.iter().map(|&yj| if yj > edges[i] { 1.0 } else { -1.0 }).product();
            f[i] * s
        });
        rho.ger(volume, &gvec, &gvec, 1.0);
        traces.push(volume * (0..a).map(|i| weights[i] * gvec[i] * gvec[i]).sum::<f64>());
    }
    let s = opts.samples as f64;
    rho /= s;
    let mean = traces.iter().sum::<f64>() / s;
    let var = traces.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (s - 1.0);
    let rel_error = (var / s).sqrt() / mean;
    ReducedDensityMatrix::new(RdmRepresentation::Grid { nodes: edges, weights }, rho, Some(rel_error))
}

fn fermionized_parts(state: &ManyBodyState) -> Result<(&ConfigurationSpace, &OrbitalBasis, &[f64])> {
    match state.representation() {
        Representation::Ci { space, basis, amplitudes } if space.statistics() == Statistics::Antisymmetric => {
            Ok((space, basis, amplitudes))
        }
        _ => Err(Error::Configuration("expected a fermionized CI state".into())),
    }
}

#[inline]
fn parity_below(mask: u128, p: usize) -> f64 {
    if (mask & ((1u128 << p) - 1)).count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Half width outside of which the density integrates to less than the
/// tail cutoff, rounded up to a multiple of 0.5.
fn density_half_width(state: &ManyBodyState) -> Result<f64> {
    let (space, basis, _) = fermionized_parts(state)?;
    let gamma = fermionic_one_body_matrix(state)?;
    let reach = basis.length() * ((2.0 * basis.n_max() as f64 + 1.0).sqrt() + 3.0);
    let step = 0.05;
    let steps = (reach / step).ceil() as usize;
    let norb = space.n_orbitals();
    let density = |x: f64| {
        let phi = basis.values(x);
        let mut s = 0.0;
        for i in 0..norb {
            for j in 0..norb {
                s += phi[i] * gamma[(i, j)] * phi[j];
            }
        }
        s
    };
    let values: Vec<f64> = (0..=steps).map(|k| density(k as f64 * step) + density(-(k as f64) * step)).collect();
    let total = n_particles_norm(&values, step);
    let mut tail = 0.0;
    let mut edge = 0;
    for k in (0..values.len()).rev() {
        tail += values[k] * step;
        if tail > TAIL_MASS * total {
            edge = k + 1;
            break;
        }
    }
    Ok((edge as f64 * step * 2.0).ceil().max(2.0) / 2.0)
}

fn n_particles_norm(values: &[f64], step: f64) -> f64 {
    values.iter().sum::<f64>() * step
}

fn uniform_edges(half: f64, panels: usize) -> Vec<f64> {
    (0..=panels).map(|k| -half + 2.0 * half * k as f64 / panels as f64).collect()
}

fn simpson_weights(edges: &[f64]) -> Vec<f64> {
    let m = edges.len() - 1;
    let h = edges[1] - edges[0];
    (0..=m)
        .map(|k| {
            let c = if k == 0 || k == m {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            c * h / 3.0
        })
        .collect()
}

/// Dense coefficients of `ψ_F = Σ C[n_1..n_N] φ_{n_1}(x_1)⋯φ_{n_N}(x_N)`,
/// first index fastest.
fn coefficient_tensor(space: &ConfigurationSpace, amplitudes: &[f64]) -> Vec<f64> {
    let n = space.n_particles();
    let norb = space.n_orbitals();
    let perms = permutations(n);
    let scale = 1.0 / (perms.len() as f64).sqrt();
    let mut c = vec![0.0; norb.pow(n as u32)];
    for (k, &amp) in amplitudes.iter().enumerate() {
        let orbs = space.config(k);
        for (perm, sign) in &perms {
            let idx = perm.iter().rev().fold(0usize, |acc, &p| acc * norb + orbs[p] as usize);
            c[idx] = sign * amp * scale;
        }
    }
    c
}

fn permutations(n: usize) -> Vec<(Vec<usize>, f64)> {
    if n == 1 {
        return vec![(vec![0], 1.0)];
    }
    let mut out = Vec::new();
    for (p, s) in permutations(n - 1) {
        // Inserting `n−1` at position `k` passes `n−1−k` larger slots.
        for k in 0..n {
            let mut q = p.clone();
            q.insert(k, n - 1);
            let sign = if (n - 1 - k) % 2 == 0 { s } else { -s };
            out.push((q, sign));
        }
    }
    out
}

/// Contracts the leading orbital index of `t` (`A × norb^k`, that index
/// fastest among columns) with `v`.
fn contract_leading(t: &DMatrix<f64>, v: DVector<f64>, norb: usize) -> DMatrix<f64> {
    let a = t.nrows();
    let rest = t.ncols() / norb;
    let mut out = DMatrix::zeros(a, rest);
    for r in 0..rest {
        out.set_column(r, &(t.columns(r * norb, norb) * &v));
    }
    out
}

/// Evaluates the `k` remaining orbital indices of `t` (`A × norb^k`) at all
/// quadrature nodes, giving `A × G^k` with the first node index fastest.
fn expand_remaining(t: &DMatrix<f64>, pyt: &DMatrix<f64>, norb: usize, k: usize) -> DMatrix<f64> {
    let a = t.nrows();
    let g = pyt.ncols();
    match k {
        1 => t * pyt,
        2 => {
            // Rows (a, n3), columns n4 → nodes for the last index first.
            let u = DMatrix::from_column_slice(a * norb, norb, t.as_slice()) * pyt;
            let u = DMatrix::from_column_slice(a, norb * g, u.as_slice());
            let mut out = DMatrix::zeros(a, g * g);
            for g4 in 0..g {
                let block = u.columns(g4 * norb, norb) * pyt;
                out.columns_mut(g4 * g, g).copy_from(&block);
            }
            out
        }
        _ => unreachable!("at most four particles"),
    }
}
