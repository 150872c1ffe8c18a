//! Occupation-number configurations for bosons and fermions.

use std::collections::HashMap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statistics {
    Symmetric,
    Antisymmetric,
}

/// Bits used per orbital in the lookup key of bosonic configurations.
const BOSON_KEY_BITS: usize = 3;

/// All configurations of `n_particles` in `n_orbitals` orbitals, in
/// lexicographic order of their sorted orbital lists.
#[derive(Debug, Clone)]
pub struct ConfigurationSpace {
    statistics: Statistics,
    n_orbitals: usize,
    n_particles: usize,
    /// Flattened `dim × n_particles` sorted orbital lists.
    orbitals: Vec<u8>,
    lookup: HashMap<u128, usize>,
}

impl ConfigurationSpace {
    pub fn new(statistics: Statistics, n_orbitals: usize, n_particles: usize) -> Result<Self> {
        if n_particles == 0 {
            return Err(Error::Parameter("configuration space needs at least one particle".into()));
        }
        let max_orbitals = match statistics {
            Statistics::Symmetric => 128 / BOSON_KEY_BITS,
            Statistics::Antisymmetric => 128,
        };
        if n_orbitals == 0 || n_orbitals > max_orbitals {
            return Err(Error::Parameter(format!(
                "{n_orbitals} orbitals outside supported range 1..={max_orbitals}"
            )));
        }
        if statistics == Statistics::Symmetric && n_particles >= 1 << BOSON_KEY_BITS {
            return Err(Error::Parameter(format!("{n_particles} bosons exceed the occupation key width")));
        }
        if statistics == Statistics::Antisymmetric && n_orbitals < n_particles {
            return Err(Error::Parameter(format!(
                "{n_particles} fermions do not fit into {n_orbitals} orbitals"
            )));
        }
        let mut orbitals = Vec::new();
        let mut current = Vec::with_capacity(n_particles);
        enumerate(statistics, n_orbitals, n_particles, 0, &mut current, &mut orbitals);
        let mut space = Self { statistics, n_orbitals, n_particles, orbitals, lookup: HashMap::new() };
        let lookup = (0..space.dim()).map(|c| (space.key_of(space.config(c)), c)).collect();
        space.lookup = lookup;
        Ok(space)
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn n_orbitals(&self) -> usize {
        self.n_orbitals
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn dim(&self) -> usize {
        self.orbitals.len() / self.n_particles
    }

    /// Sorted orbital list of configuration `c` (repeats allowed for bosons).
    pub fn config(&self, c: usize) -> &[u8] {
        &self.orbitals[c * self.n_particles..(c + 1) * self.n_particles]
    }

    /// Occupation numbers of configuration `c`.
    pub fn occupations(&self, c: usize) -> Vec<u8> {
        let mut occ = vec![0u8; self.n_orbitals];
        for &o in self.config(c) {
            occ[o as usize] += 1;
        }
        occ
    }

    /// Index of the configuration with the given occupation numbers.
    pub fn index_of_occupations(&self, occ: &[u8]) -> Option<usize> {
        self.lookup.get(&self.key_of_occupations(occ)).copied()
    }

    /// Index of the configuration with the given sorted orbital list.
    pub fn index_of(&self, orbitals: &[u8]) -> Option<usize> {
        self.lookup.get(&self.key_of(orbitals)).copied()
    }

    /// Index of the configuration with the given occupation key.
    pub(crate) fn index_of_key(&self, key: u128) -> Option<usize> {
        self.lookup.get(&key).copied()
    }

    /// Occupation key of configuration `c`: occupation of orbital `o` in
    /// bits `[o·w, (o+1)·w)` with `w = key_bits()`.
    pub(crate) fn key(&self, c: usize) -> u128 {
        self.key_of(self.config(c))
    }

    fn key_of(&self, orbitals: &[u8]) -> u128 {
        let bits = self.key_bits();
        orbitals.iter().fold(0u128, |k, &o| k + (1u128 << (bits * o as usize)))
    }

    fn key_of_occupations(&self, occ: &[u8]) -> u128 {
        let bits = self.key_bits();
        occ.iter().enumerate().fold(0u128, |k, (o, &n)| k | ((n as u128) << (bits * o)))
    }

    pub(crate) fn key_bits(&self) -> usize {
        match self.statistics {
            Statistics::Symmetric => BOSON_KEY_BITS,
            Statistics::Antisymmetric => 1,
        }
    }

    /// Total oscillator parity `(−1)^{Σ n}` of configuration `c`.
    pub fn parity(&self, c: usize) -> i32 {
        let s: usize = self.config(c).iter().map(|&o| o as usize).sum();
        if s % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

fn enumerate(
    statistics: Statistics,
    n_orbitals: usize,
    remaining: usize,
    start: usize,
    current: &mut Vec<u8>,
    out: &mut Vec<u8>,
) {
    if remaining == 0 {
        out.extend_from_slice(current);
        return;
    }
    for o in start..n_orbitals {
        current.push(o as u8);
        let next = match statistics {
            Statistics::Symmetric => o,
            Statistics::Antisymmetric => o + 1,
        };
        enumerate(statistics, n_orbitals, remaining - 1, next, current, out);
        current.pop();
    }
}

/// Binomial coefficient `C(n, k)`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, t| acc * (n - t) / (t + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        for n in 1..=12 {
            for p in 1..=4 {
                let s = ConfigurationSpace::new(Statistics::Symmetric, n, p).unwrap();
                assert_eq!(s.dim(), binomial(p + n - 1, p));
                if n >= p {
                    let a = ConfigurationSpace::new(Statistics::Antisymmetric, n, p).unwrap();
                    assert_eq!(a.dim(), binomial(n, p));
                }
            }
        }
    }

    #[test]
    fn lexicographic_and_indexed() {
        let s = ConfigurationSpace::new(Statistics::Symmetric, 3, 2).unwrap();
        let all: Vec<Vec<u8>> = (0..s.dim()).map(|c| s.config(c).to_vec()).collect();
        assert_eq!(all, vec![vec![0, 0], vec![0, 1], vec![0, 2], vec![1, 1], vec![1, 2], vec![2, 2]]);
        for c in 0..s.dim() {
            assert_eq!(s.index_of(s.config(c)), Some(c));
            assert_eq!(s.index_of_occupations(&s.occupations(c)), Some(c));
        }
        let f = ConfigurationSpace::new(Statistics::Antisymmetric, 4, 2).unwrap();
        assert_eq!(f.config(0), &[0, 1]);
        assert_eq!(f.config(f.dim() - 1), &[2, 3]);
    }

    #[test]
    fn rejects_overfull_fermions() {
        assert!(ConfigurationSpace::new(Statistics::Antisymmetric, 2, 3).is_err());
    }
}
