//! Imaginary-time propagation of the quasi-1D Hamiltonian on a grid.

use rayon::prelude::*;
use rustfft::num_complex::Complex64;

use super::grid::{CubeFft, GridAxes};
use super::propagation::{relax, PropagationOptions, SplitStep};
use super::state::{ManyBodyState, Representation};
use crate::error::{Error, Result};
use crate::model::{EffectivePotential, TrapParams};

/// Largest one-body density allowed at the grid edge.
pub const EDGE_DENSITY_LIMIT: f64 = 1e-6;

/// Default grid: 384 points per axis for N=2, 96 for N=3, on
/// `[−L, L]` with `L = 6 + 1.5·(2g)^{1/3}`.
pub fn default_grid(params: &TrapParams) -> Result<GridAxes> {
    let points = match params.n_particles() {
        2 => 384,
        3 => 96,
        n => return Err(Error::Parameter(format!("grid propagation supports N = 2, 3, not {n}"))),
    };
    GridAxes::new(points, GridAxes::default_half_width(params.g()))
}

/// Ground state by split-operator imaginary-time propagation.
///
/// The energy is the expectation value of the full Hamiltonian with the
/// spectral kinetic term, evaluated every `check_interval`.
pub fn imaginary_time_ground_state(
    params: &TrapParams,
    axes: GridAxes,
    opts: &PropagationOptions,
) -> Result<ManyBodyState> {
    let eps = params.epsilon()?;
    let n = params.n_particles();
    if !(2..=3).contains(&n) {
        return Err(Error::Parameter(format!("grid propagation supports N = 2, 3, not {n}")));
    }
    let p = axes.points();
    let size = p.pow(n as u32);
    let x = axes.nodes();
    let h = axes.spacing();

    let pot = EffectivePotential::new(eps)?;
    // U(x_a − x_b) depends only on the index difference.
    let pair: Vec<f64> = (0..2 * p - 1).map(|d| params.g() * pot.eval((d as f64 - (p - 1) as f64) * h)).collect();
    let shift = n as f64 * eps;
    let potential: Vec<f64> = (0..size)
        .into_par_iter()
        .with_min_len(1024)
        .map(|idx| {
            let ix = digits(idx, p, n);
            let mut v = shift;
            for a in 0..n {
                v += 0.5 * x[ix[a]] * x[ix[a]];
                for b in a + 1..n {
                    v += pair[ix[a] + p - 1 - ix[b]];
                }
            }
            v
        })
        .collect();
    let k = axes.wave_numbers();
    let kinetic: Vec<f64> = (0..size)
        .into_par_iter()
        .with_min_len(1024)
        .map(|idx| digits(idx, p, n).iter().map(|&i| 0.5 * k[i] * k[i]).sum())
        .collect();

    let measure = h.powi(n as i32);
    let psi: Vec<Complex64> = (0..size)
        .map(|idx| {
            let r2: f64 = digits(idx, p, n).iter().map(|&i| x[i] * x[i]).sum();
            Complex64::new((-0.5 * r2).exp(), 0.0)
        })
        .collect();
    let mut prop = Cartesian {
        fft: CubeFft::new(p, n),
        psi,
        potential,
        kinetic,
        half_v: Vec::new(),
        full_t: Vec::new(),
        measure,
    };
    let energy = relax(&mut prop, opts)?;
    let psi = prop.psi;

    let amplitudes: Vec<f64> = psi.iter().map(|z| z.re).collect();
    check_edge(&amplitudes, p, n, h)?;
    let norm = (measure * amplitudes.iter().map(|a| a * a).sum::<f64>()).sqrt();
    let amplitudes = amplitudes.into_iter().map(|a| a / norm).collect();
    ManyBodyState::new(Representation::Grid { axes, amplitudes }, energy, *params)
}

pub(crate) fn digits(mut idx: usize, p: usize, n: usize) -> [usize; 3] {
    let mut out = [0usize; 3];
    for a in (0..n).rev() {
        out[a] = idx % p;
        idx /= p;
    }
    out
}

struct Cartesian {
    fft: CubeFft,
    psi: Vec<Complex64>,
    potential: Vec<f64>,
    kinetic: Vec<f64>,
    half_v: Vec<f64>,
    full_t: Vec<f64>,
    measure: f64,
}

impl SplitStep for Cartesian {
    fn set_step(&mut self, dtau: f64) {
        self.half_v = self.potential.iter().map(|v| (-0.5 * dtau * v).exp()).collect();
        self.full_t = self.kinetic.iter().map(|t| (-dtau * t).exp()).collect();
    }

    fn step(&mut self) {
        let psi = &mut self.psi;
        psi.par_iter_mut().zip(&self.half_v).with_min_len(4096).for_each(|(z, f)| *z *= f);
        self.fft.forward(psi);
        psi.par_iter_mut().zip(&self.full_t).with_min_len(4096).for_each(|(z, f)| *z *= f);
        self.fft.inverse(psi);
        psi.par_iter_mut().zip(&self.half_v).with_min_len(4096).for_each(|(z, f)| *z = Complex64::new(z.re * f, 0.0));
    }

    fn normalize(&mut self) {
        let s = (self.measure * self.psi.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt();
        self.psi.iter_mut().for_each(|z| *z /= s);
    }

    fn energy(&self) -> f64 {
        let v: f64 = self.psi.iter().zip(&self.potential).map(|(z, v)| z.norm_sqr() * v).sum::<f64>() * self.measure;
        let mut spec = self.psi.clone();
        self.fft.forward(&mut spec);
        let (t, norm) = spec
            .iter()
            .zip(&self.kinetic)
            .fold((0.0, 0.0), |(t, s), (z, k)| (t + z.norm_sqr() * k, s + z.norm_sqr()));
        v + t / norm
    }
}

/// One-body density at the first and last grid node must be negligible.
fn check_edge(psi: &[f64], p: usize, n: usize, h: f64) -> Result<()> {
    let rest = p.pow(n as u32 - 1);
    let w = h.powi(n as i32 - 1);
    let edge = |i: usize| w * psi[i * rest..(i + 1) * rest].iter().map(|a| a * a).sum::<f64>();
    let worst = edge(0).max(edge(p - 1));
    if worst > EDGE_DENSITY_LIMIT {
        return Err(Error::Domain(format!("edge density {worst:.3e} exceeds {EDGE_DENSITY_LIMIT:e}")));
    }
    Ok(())
}
