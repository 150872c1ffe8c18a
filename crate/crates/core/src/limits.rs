//! Analytic anchors for the entropy: the weak-coupling fermionized limit and
//! the harmonic strong-coupling limit of two particles.

use crate::basis::OrbitalBasis;
use crate::error::{Error, Result};
use crate::model::{Anisotropy, TrapParams};
use crate::pipeline::{solve_point, Method, SolveSettings};
use crate::solvers::{ConfigurationSpace, ManyBodyState, Representation, Statistics};

/// Largest entropy spread across anisotropies still counted as insensitive.
pub const SATURATION_THRESHOLD: f64 = 0.01;

/// Coupling at which the large-g entropies of N = 3, 4 are quoted.
pub const LARGE_COUPLING: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnchorKind {
    /// Strict-1D `g → 0⁺`: a single Slater determinant.
    TgZeroCoupling(usize),
    /// Two particles at `g → ∞`, harmonic about the classical separation.
    HarmonicLargeG,
    /// Numerical strict-1D value at [`LARGE_COUPLING`].
    LargeCoupling(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitAnchor {
    pub kind: AnchorKind,
    pub expected_entropy: f64,
    pub tolerance: f64,
}

impl LimitAnchor {
    pub fn tg(n: usize) -> Result<Self> {
        let expected_entropy = match n {
            2 => 0.36,
            3 => 0.51,
            4 => 0.60,
            _ => return Err(Error::Parameter(format!("no zero-coupling anchor for N = {n}"))),
        };
        Ok(Self { kind: AnchorKind::TgZeroCoupling(n), expected_entropy, tolerance: 0.01 })
    }

    pub fn harmonic() -> Self {
        Self { kind: AnchorKind::HarmonicLargeG, expected_entropy: harmonic_entropy_n2(), tolerance: 1e-4 }
    }

    pub fn large_coupling(n: usize) -> Result<Self> {
        let expected_entropy = match n {
            3 => 0.68,
            4 => 0.77,
            _ => return Err(Error::Parameter(format!("no large-coupling anchor for N = {n}"))),
        };
        Ok(Self { kind: AnchorKind::LargeCoupling(n), expected_entropy, tolerance: 0.02 })
    }

    pub fn deviation(&self, entropy: f64) -> f64 {
        (entropy - self.expected_entropy).abs()
    }

    pub fn accepts(&self, entropy: f64) -> bool {
        self.deviation(entropy) <= self.tolerance
    }
}

/// Fermionic partner of the strict-1D ground state at `g → 0⁺`: orbitals
/// `0..N` singly occupied, energy `N²/2`.
pub fn tg_state(n: usize, basis: &OrbitalBasis) -> Result<ManyBodyState> {
    if basis.n_max() < n {
        return Err(Error::Parameter(format!("{} orbitals cannot hold {n} fermions", basis.n_max())));
    }
    let space = ConfigurationSpace::new(Statistics::Antisymmetric, basis.n_max(), n)?;
    let orbitals: Vec<u8> = (0..n as u8).collect();
    let index = space.index_of(&orbitals).ok_or_else(|| Error::Integrity("lowest determinant missing".into()))?;
    let mut amplitudes = vec![0.0; space.dim()];
    amplitudes[index] = 1.0;
    let energy = (n * n) as f64 / 2.0;
    let representation = Representation::Ci { space, basis: basis.clone(), amplitudes };
    ManyBodyState::new(representation, energy, TrapParams::strict_1d(n, 0.0)?)
}

/// `1 − √(√3 − 3/2)`: two particles oscillating about their classical
/// separation with frequencies 1 (center of mass) and √3 (relative).
pub fn harmonic_entropy_n2() -> f64 {
    1.0 - (3f64.sqrt() - 1.5).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SaturationRow {
    pub g: f64,
    pub entropies: Vec<(Anisotropy, f64)>,
    /// Largest pairwise difference of the entropies in this row.
    pub spread: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SaturationReport {
    pub n_particles: usize,
    pub rows: Vec<SaturationRow>,
    /// Smallest `g` whose spread is below [`SATURATION_THRESHOLD`].
    pub saturated_from: Option<f64>,
}

/// Entropy across anisotropies at each coupling.
pub fn saturation_check(
    n: usize,
    g_values: &[f64],
    anisotropies: &[Anisotropy],
    settings: &SolveSettings,
) -> Result<SaturationReport> {
    let mut rows = Vec::with_capacity(g_values.len());
    for &g in g_values {
        let mut entropies = Vec::with_capacity(anisotropies.len());
        for &a in anisotropies {
            let point = solve_point(&TrapParams::new(n, g, a)?, Method::Ci, settings)?;
            entropies.push((a, point.report.linear_entropy));
        }
        let (lo, hi) = entropies.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, l)| (lo.min(l), hi.max(l)));
        rows.push(SaturationRow { g, entropies, spread: hi - lo });
    }
    let saturated_from = rows
        .iter()
        .filter(|r| r.spread < SATURATION_THRESHOLD)
        .map(|r| r.g)
        .min_by(f64::total_cmp);
    Ok(SaturationReport { n_particles: n, rows, saturated_from })
}
