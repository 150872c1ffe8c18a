//! Second-quantized Hamiltonians in configuration space.

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::config_space::{ConfigurationSpace, Statistics};
use crate::basis::{OrbitalBasis, TensorKind, TwoBodyTensor};
use crate::error::{Error, Result};
use crate::model::TrapParams;

/// Real symmetric matrix in compressed sparse row form.
///
/// Built from the upper triangle and mirrored, so `H[r][c]` and `H[c][r]`
/// are the same stored number.
#[derive(Debug, Clone)]
pub struct SymmetricMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    values: Vec<f64>,
}

impl SymmetricMatrix {
    /// Assembles from per-row upper-triangle entries (`col ≥ row`).
    fn from_upper(dim: usize, upper: Vec<Vec<(usize, f64)>>) -> Self {
        let mut counts = vec![0usize; dim];
        for (r, row) in upper.iter().enumerate() {
            for &(c, _) in row {
                counts[r] += 1;
                if c != r {
                    counts[c] += 1;
                }
            }
        }
        let mut row_ptr = vec![0usize; dim + 1];
        for r in 0..dim {
            row_ptr[r + 1] = row_ptr[r] + counts[r];
        }
        let nnz = row_ptr[dim];
        let mut cols = vec![0usize; nnz];
        let mut values = vec![0.0; nnz];
        let mut fill = row_ptr[..dim].to_vec();
        // Lower-triangle entries of row c come from rows r < c, visited in
        // increasing r, so every row ends up sorted by column.
        for (r, row) in upper.iter().enumerate() {
            for &(c, v) in row {
                if c != r {
                    cols[fill[c]] = r;
                    values[fill[c]] = v;
                    fill[c] += 1;
                }
            }
        }
        for (r, row) in upper.iter().enumerate() {
            for &(c, v) in row {
                cols[fill[r]] = c;
                values[fill[r]] = v;
                fill[r] += 1;
            }
        }
        Self { dim, row_ptr, cols, values }
    }

    /// Dense symmetric matrix given row-major.
    pub fn from_dense(dim: usize, data: &[f64]) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::Parameter(format!("{} entries for a {dim}×{dim} matrix", data.len())));
        }
        for r in 0..dim {
            for c in 0..r {
                if data[r * dim + c] != data[c * dim + r] {
                    return Err(Error::Parameter(format!("matrix not symmetric at ({r}, {c})")));
                }
            }
        }
        let upper = (0..dim)
            .map(|r| (r..dim).filter(|&c| data[r * dim + c] != 0.0).map(|c| (c, data[r * dim + c])).collect())
            .collect();
        Ok(Self::from_upper(dim, upper))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.cols[span.clone()].iter().copied().zip(self.values[span].iter().copied())
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.cols[span.clone()].binary_search(&c) {
            Ok(k) => self.values[span.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|r| self.get(r, r)).collect()
    }

    /// `y = H x`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        y.par_iter_mut().enumerate().with_min_len(64).for_each(|(r, yr)| {
            *yr = self.row(r).map(|(c, v)| v * x[c]).sum();
        });
    }

    /// Largest absolute row sum; an upper bound on the spectral norm.
    pub fn norm_bound(&self) -> f64 {
        (0..self.dim).map(|r| self.row(r).map(|(_, v)| v.abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for r in 0..self.dim {
            for (c, v) in self.row(r) {
                m[(r, c)] = v;
            }
        }
        m
    }

    /// `max |H − Hᵀ|` over stored entries.
    pub fn max_asymmetry(&self) -> f64 {
        (0..self.dim)
            .flat_map(|r| self.row(r).map(move |(c, v)| (r, c, v)))
            .map(|(r, c, v)| (v - self.get(c, r)).abs())
            .fold(0.0, f64::max)
    }
}

/// A Hamiltonian together with the configuration space it acts on.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    pub space: ConfigurationSpace,
    pub matrix: SymmetricMatrix,
}

/// Quasi-1D bosonic Hamiltonian `Σ h + g Σ U_1D + Nε` over symmetric
/// configurations.
pub fn build_bosonic_hamiltonian(
    params: &TrapParams,
    basis: &OrbitalBasis,
    tensor: &TwoBodyTensor,
) -> Result<Hamiltonian> {
    let eps = params.epsilon()?;
    match tensor.kind() {
        TensorKind::Smooth { eps: t } if t == eps => {}
        kind => {
            return Err(Error::Configuration(format!(
                "bosonic Hamiltonian at ε = {eps} needs the smooth tensor of the same ε, got {kind:?}"
            )))
        }
    }
    check_basis(basis, tensor)?;
    let n = params.n_particles();
    let space = ConfigurationSpace::new(Statistics::Symmetric, basis.n_max(), n)?;
    let h1 = basis.one_body_matrix();
    let g = params.g();
    let shift = n as f64 * eps;
    let upper = (0..space.dim())
        .into_par_iter()
        .with_min_len(16)
        .map(|r| {
            let mut row = bosonic_row(&space, &h1, tensor, g, r);
            row.push((r, shift));
            merge_upper(r, row)
        })
        .collect();
    let matrix = SymmetricMatrix::from_upper(space.dim(), upper);
    Ok(Hamiltonian { space, matrix })
}

/// Strict-1D fermionized Hamiltonian `Σ h + (g/2) Σ 1/|x_i − x_j|` over
/// antisymmetric configurations, without any transverse shift.
pub fn build_fermionized_hamiltonian(
    g: f64,
    basis: &OrbitalBasis,
    tensor: &TwoBodyTensor,
    n_particles: usize,
) -> Result<Hamiltonian> {
    if !(g.is_finite() && g >= 0.0) {
        return Err(Error::Parameter(format!("coupling g = {g} must be finite and non-negative")));
    }
    if tensor.kind() != TensorKind::AntisymmetrizedCoulomb {
        return Err(Error::Configuration(format!(
            "fermionized Hamiltonian needs the antisymmetrized Coulomb tensor, got {:?}",
            tensor.kind()
        )));
    }
    check_basis(basis, tensor)?;
    if basis.n_max() < n_particles {
        return Err(Error::Parameter(format!(
            "{n_particles} fermions need at least {n_particles} orbitals, basis has {}",
            basis.n_max()
        )));
    }
    let space = ConfigurationSpace::new(Statistics::Antisymmetric, basis.n_max(), n_particles)?;
    let h1 = basis.one_body_matrix();
    let upper = (0..space.dim())
        .into_par_iter()
        .with_min_len(16)
        .map(|r| merge_upper(r, fermionic_row(&space, &h1, tensor, g, r)))
        .collect();
    let matrix = SymmetricMatrix::from_upper(space.dim(), upper);
    Ok(Hamiltonian { space, matrix })
}

fn check_basis(basis: &OrbitalBasis, tensor: &TwoBodyTensor) -> Result<()> {
    if basis.same_shape(tensor.basis()) {
        Ok(())
    } else {
        Err(Error::Configuration("tensor was built for a different orbital basis".into()))
    }
}

/// Keeps `col ≥ row`, sorts by column and sums duplicates in generation order.
fn merge_upper(r: usize, mut entries: Vec<(usize, f64)>) -> Vec<(usize, f64)> {
    entries.retain(|&(c, _)| c >= r);
    entries.sort_by_key(|&(c, _)| c);
    let mut out: Vec<(usize, f64)> = Vec::with_capacity(entries.len());
    for (c, v) in entries {
        match out.last_mut() {
            Some((lc, lv)) if *lc == c => *lv += v,
            _ => out.push((c, v)),
        }
    }
    out.retain(|&(_, v)| v != 0.0);
    out
}

/// Pair-symmetrized element for `a†_i a†_j a_l a_k` with `i ≤ j`, `k ≤ l`.
fn symmetric_pair_element(t: &TwoBodyTensor, i: usize, j: usize, k: usize, l: usize) -> f64 {
    match (i == j, k == l) {
        (false, false) => t.get(i, j, k, l) + t.get(i, j, l, k),
        (true, false) | (false, true) => t.get(i, j, k, l),
        (true, true) => 0.5 * t.get(i, j, k, l),
    }
}

fn bosonic_row(space: &ConfigurationSpace, h1: &[f64], t: &TwoBodyTensor, g: f64, r: usize) -> Vec<(usize, f64)> {
    let norb = space.n_orbitals();
    let bits = space.key_bits();
    let unit = |o: usize| 1u128 << (bits * o);
    let key = space.key(r);
    let occ: Vec<f64> = space.occupations(r).into_iter().map(f64::from).collect();
    let mut out = Vec::new();
    let mut push = |key: u128, v: f64| {
        let c = space.index_of_key(key).expect("occupation key inside the space");
        out.push((c, v));
    };

    for n in (0..norb).filter(|&n| occ[n] > 0.0) {
        for m in 0..norb {
            let h = h1[m * norb + n];
            if h == 0.0 {
                continue;
            }
            if m == n {
                push(key, h * occ[n]);
            } else {
                push(key - unit(n) + unit(m), h * (occ[n] * (occ[m] + 1.0)).sqrt());
            }
        }
    }

    if g == 0.0 {
        return out;
    }
    let mut rest = occ.clone();
    for k in 0..norb {
        for l in k..norb {
            let f1 = if k == l { occ[k] * (occ[k] - 1.0) } else { occ[k] * occ[l] };
            if f1 <= 0.0 {
                continue;
            }
            rest[k] -= 1.0;
            rest[l] -= 1.0;
            let removed = key - unit(k) - unit(l);
            for i in 0..norb {
                for j in i..norb {
                    if (i + j + k + l) % 2 != 0 {
                        continue;
                    }
                    let v = symmetric_pair_element(t, i, j, k, l);
                    if v == 0.0 {
                        continue;
                    }
                    let f2 = if i == j {
                        (rest[i] + 1.0) * (rest[i] + 2.0)
                    } else {
                        (rest[i] + 1.0) * (rest[j] + 1.0)
                    };
                    push(removed + unit(i) + unit(j), g * v * (f1 * f2).sqrt());
                }
            }
            rest[k] += 1.0;
            rest[l] += 1.0;
        }
    }
    out
}

/// Sign of moving an operator on orbital `p` past the occupied orbitals below it.
#[inline]
fn fermion_sign(mask: u128, p: usize) -> f64 {
    if (mask & ((1u128 << p) - 1)).count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn fermionic_row(space: &ConfigurationSpace, h1: &[f64], t: &TwoBodyTensor, g: f64, r: usize) -> Vec<(usize, f64)> {
    let norb = space.n_orbitals();
    let mask = space.key(r);
    let bit = |o: usize| 1u128 << o;
    let occupied: Vec<usize> = (0..norb).filter(|&o| mask & bit(o) != 0).collect();
    let mut out = Vec::new();
    let mut push = |key: u128, v: f64| {
        let c = space.index_of_key(key).expect("occupation mask inside the space");
        out.push((c, v));
    };

    for &n in &occupied {
        let after = mask & !bit(n);
        let s_n = fermion_sign(mask, n);
        for m in 0..norb {
            let h = h1[m * norb + n];
            if h == 0.0 {
                continue;
            }
            if m == n {
                push(mask, h);
            } else if after & bit(m) == 0 {
                push(after | bit(m), h * s_n * fermion_sign(after, m));
            }
        }
    }

    if g == 0.0 {
        return out;
    }
    for (a, &k) in occupied.iter().enumerate() {
        for &l in &occupied[a + 1..] {
            let m1 = mask & !bit(k);
            let s1 = fermion_sign(mask, k) * fermion_sign(m1, l);
            let rest = m1 & !bit(l);
            for i in (0..norb).filter(|&i| rest & bit(i) == 0) {
                for j in (i + 1..norb).filter(|&j| rest & bit(j) == 0) {
                    if (i + j + k + l) % 2 != 0 {
                        continue;
                    }
                    let v = t.get(i, j, k, l);
                    if v == 0.0 {
                        continue;
                    }
                    let with_j = rest | bit(j);
                    let s2 = fermion_sign(rest, j) * fermion_sign(with_j, i);
                    push(with_j | bit(i), g * v * s1 * s2);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{antisymmetrized_coulomb_tensor, smooth_tensor};
    use crate::model::EffectivePotential;

    #[test]
    fn dense_round_trip() {
        let data = [2.0, -1.0, 0.0, -1.0, 2.0, 0.5, 0.0, 0.5, 3.0];
        let m = SymmetricMatrix::from_dense(3, &data).unwrap();
        assert_eq!(m.nnz(), 7);
        let d = m.to_dense();
        for r in 0..3 {
            for c in 0..3 {
                assert_eq!(d[(r, c)], data[r * 3 + c]);
            }
        }
        let mut y = [0.0; 3];
        m.apply(&[1.0, 1.0, 1.0], &mut y);
        assert_eq!(y, [1.0, 1.5, 3.5]);
        assert!(SymmetricMatrix::from_dense(2, &[0.0, 1.0, 2.0, 0.0]).is_err());
    }

    #[test]
    fn bosonic_exactly_symmetric_with_shift() {
        let basis = OrbitalBasis::new(8).unwrap();
        let pot = EffectivePotential::new(30.0).unwrap();
        let tensor = smooth_tensor(&basis, &pot).unwrap();
        for n in 2..=3 {
            let params = TrapParams::quasi_1d(n, 1.5, 30.0).unwrap();
            let h = build_bosonic_hamiltonian(&params, &basis, &tensor).unwrap();
            assert_eq!(h.matrix.max_asymmetry(), 0.0);
            let zero = TrapParams::quasi_1d(n, 0.0, 30.0).unwrap();
            let h0 = build_bosonic_hamiltonian(&zero, &basis, &tensor).unwrap();
            assert_eq!(h0.matrix.get(0, 0), n as f64 * 0.5 + n as f64 * 30.0);
        }
    }

    #[test]
    fn bosonic_pair_diagonal_is_single_interaction() {
        let basis = OrbitalBasis::new(4).unwrap();
        let pot = EffectivePotential::new(5.0).unwrap();
        let tensor = smooth_tensor(&basis, &pot).unwrap();
        let params = TrapParams::quasi_1d(2, 1.0, 5.0).unwrap();
        let h = build_bosonic_hamiltonian(&params, &basis, &tensor).unwrap();
        let want = 1.0 + 10.0 + tensor.get(0, 0, 0, 0);
        assert!((h.matrix.get(0, 0) - want).abs() < 1e-14);
        // |0,1⟩: direct plus exchange.
        let c = h.space.index_of(&[0, 1]).unwrap();
        let want = 2.0 + 10.0 + tensor.get(0, 1, 0, 1) + tensor.get(0, 1, 1, 0);
        assert!((h.matrix.get(c, c) - want).abs() < 1e-14);
    }

    #[test]
    fn mismatched_tensor_rejected() {
        let basis = OrbitalBasis::new(4).unwrap();
        let tensor = smooth_tensor(&basis, &EffectivePotential::new(5.0).unwrap()).unwrap();
        let params = TrapParams::quasi_1d(2, 1.0, 6.0).unwrap();
        assert!(matches!(
            build_bosonic_hamiltonian(&params, &basis, &tensor),
            Err(Error::Configuration(_))
        ));
        let other = OrbitalBasis::new(5).unwrap();
        let params = TrapParams::quasi_1d(2, 1.0, 5.0).unwrap();
        assert!(build_bosonic_hamiltonian(&params, &other, &tensor).is_err());
        assert!(build_fermionized_hamiltonian(1.0, &basis, &tensor, 2).is_err());
        let strict = TrapParams::strict_1d(2, 1.0).unwrap();
        assert!(build_bosonic_hamiltonian(&strict, &basis, &tensor).is_err());
    }

    #[test]
    fn fermionic_diagonal_and_symmetry() {
        let basis = OrbitalBasis::new(8).unwrap();
        let tensor = antisymmetrized_coulomb_tensor(&basis).unwrap();
        let h = build_fermionized_hamiltonian(2.0, &basis, &tensor, 3).unwrap();
        assert_eq!(h.matrix.max_asymmetry(), 0.0);
        let c = h.space.index_of(&[0, 1, 2]).unwrap();
        let pairs = tensor.get(0, 1, 0, 1) + tensor.get(0, 2, 0, 2) + tensor.get(1, 2, 1, 2);
        assert!((h.matrix.get(c, c) - (4.5 + 2.0 * pairs)).abs() < 1e-12);
        assert!(build_fermionized_hamiltonian(1.0, &basis, &tensor, 9).is_err());
    }
}
