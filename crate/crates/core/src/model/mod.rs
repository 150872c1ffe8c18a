//! Physical parameters of the trapped system and the transverse-averaged
//! interaction between two particles in the lowest transverse mode.
//!
//! Lengths are in units of the longitudinal oscillator length and energies
//! in units of the longitudinal trap quantum, so the only remaining controls
//! are the particle number, the coupling `g` and the anisotropy `ε = ω⊥/ωx`.

mod erfcx;

pub use erfcx::erfcx;

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};

/// Particle numbers the solvers are validated for.
pub const MIN_PARTICLES: usize = 2;
pub const MAX_PARTICLES: usize = 4;

/// Transverse confinement: finite anisotropy or the strictly 1D limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Anisotropy {
    Finite(f64),
    StrictOneD,
}

impl Anisotropy {
    pub fn finite(&self) -> Option<f64> {
        match *self {
            Anisotropy::Finite(eps) => Some(eps),
            Anisotropy::StrictOneD => None,
        }
    }

    pub fn is_strict(&self) -> bool {
        matches!(self, Anisotropy::StrictOneD)
    }

    /// Sort key placing the strict limit after every finite value.
    pub fn sort_key(&self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

impl fmt::Display for Anisotropy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Anisotropy::Finite(eps) => write!(f, "{eps}"),
            Anisotropy::StrictOneD => f.write_str("inf"),
        }
    }
}

/// Control parameters of one ground-state calculation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapParams {
    n_particles: usize,
    g: f64,
    anisotropy: Anisotropy,
}

impl TrapParams {
    pub fn new(n_particles: usize, g: f64, anisotropy: Anisotropy) -> Result<Self> {
        if !(MIN_PARTICLES..=MAX_PARTICLES).contains(&n_particles) {
            return Err(Error::Parameter(format!(
                "particle number {n_particles} outside supported range {MIN_PARTICLES}..={MAX_PARTICLES}"
            )));
        }
        if !(g.is_finite() && g >= 0.0) {
            return Err(Error::Parameter(format!("coupling g = {g} must be finite and non-negative")));
        }
        if let Anisotropy::Finite(eps) = anisotropy {
            check_anisotropy(eps)?;
        }
        Ok(Self { n_particles, g, anisotropy })
    }

    pub fn quasi_1d(n_particles: usize, g: f64, eps: f64) -> Result<Self> {
        Self::new(n_particles, g, Anisotropy::Finite(eps))
    }

    pub fn strict_1d(n_particles: usize, g: f64) -> Result<Self> {
        Self::new(n_particles, g, Anisotropy::StrictOneD)
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn anisotropy(&self) -> Anisotropy {
        self.anisotropy
    }

    /// Finite anisotropy, or a configuration error for the strict limit.
    pub fn epsilon(&self) -> Result<f64> {
        self.anisotropy.finite().ok_or_else(|| {
            Error::Configuration("operation requires a finite anisotropy".into())
        })
    }
}

fn check_anisotropy(eps: f64) -> Result<()> {
    if eps.is_finite() && eps > 0.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("anisotropy ε = {eps} must be finite and positive")))
    }
}

/// Normalized transverse ground state `φ(z) = (ε/π)^{1/4} exp(−εz²/2)`.
pub fn transverse_mode(z: f64, eps: f64) -> Result<f64> {
    check_anisotropy(eps)?;
    Ok((eps / PI).powf(0.25) * (-0.5 * eps * z * z).exp())
}

/// Interaction between two particles frozen in the transverse ground state,
/// per unit coupling, as a function of their longitudinal separation.
///
/// `U(x) = √(επ/2)·exp(εx²/2)·erfc(√(ε/2)|x|)`, evaluated through `erfcx`
/// so it stays finite for any separation. It is even, strictly decreasing
/// in `|x|`, bounded by `U(0) = √(επ/2)` and tends to `1/|x|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectivePotential {
    eps: f64,
    peak: f64,
    scale: f64,
}

impl EffectivePotential {
    pub fn new(eps: f64) -> Result<Self> {
        check_anisotropy(eps)?;
        Ok(Self { eps, peak: (eps * PI / 2.0).sqrt(), scale: (eps / 2.0).sqrt() })
    }

    pub fn anisotropy(&self) -> f64 {
        self.eps
    }

    /// Value at zero separation.
    pub fn peak(&self) -> f64 {
        self.peak
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.peak * erfcx(self.scale * x.abs())
    }
}

/// One-shot form of [`EffectivePotential::eval`].
pub fn effective_interaction(x: f64, eps: f64) -> Result<f64> {
    Ok(EffectivePotential::new(eps)?.eval(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_validation() {
        assert!(TrapParams::quasi_1d(1, 1.0, 30.0).is_err());
        assert!(TrapParams::quasi_1d(5, 1.0, 30.0).is_err());
        assert!(TrapParams::quasi_1d(2, -0.1, 30.0).is_err());
        assert!(TrapParams::quasi_1d(2, 1.0, 0.0).is_err());
        assert!(TrapParams::quasi_1d(2, 1.0, f64::INFINITY).is_err());
        let p = TrapParams::strict_1d(4, 0.0).unwrap();
        assert!(p.anisotropy().is_strict());
        assert!(p.epsilon().is_err());
    }

    #[test]
    fn transverse_mode_values() {
        let v = transverse_mode(0.0, 1.0).unwrap();
        assert!((v - (1.0 / PI).powf(0.25)).abs() < 1e-15);
        assert!((v - 0.7511255444649425).abs() < 1e-12);
        let v30 = transverse_mode(0.0, 30.0).unwrap();
        assert!((v30 - (30.0 / PI).powf(0.25)).abs() < 1e-14);
        assert!(transverse_mode(0.0, -1.0).is_err());
    }

    #[test]
    fn transverse_mode_normalized() {
        // trapezoid on a fine grid is spectrally accurate for a Gaussian
        let eps = 30.0;
        let h = 0.002;
        let sum: f64 = (-2000..=2000)
            .map(|i| transverse_mode(i as f64 * h, eps).unwrap().powi(2))
            .sum();
        assert!((sum * h - 1.0).abs() < 1e-12);
    }

    #[test]
    fn potential_at_origin() {
        let u = effective_interaction(0.0, 30.0).unwrap();
        assert!((u - (15.0 * PI).sqrt()).abs() < 1e-12);
        assert!((u - 6.8647).abs() < 1e-4);
    }

    #[test]
    fn potential_coulomb_tail() {
        let u = effective_interaction(10.0, 30.0).unwrap();
        assert!((u * 10.0 - 1.0).abs() < 1e-3);
        let far = effective_interaction(1e5, 30.0).unwrap();
        assert!(far.is_finite() && (far * 1e5 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_anisotropy() {
        assert!(effective_interaction(1.0, 0.0).is_err());
        assert!(EffectivePotential::new(f64::NAN).is_err());
    }
}
