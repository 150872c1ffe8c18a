//! Harmonic-oscillator eigenfunctions by stable upward recurrence on the
//! normalized functions themselves.

use std::f64::consts::PI;

/// Fills `out[n] = ψ_n(x)` for unit mass and frequency, `n < out.len()`.
///
/// `ψ_{n+1} = √(2/(n+1))·x·ψ_n − √(n/(n+1))·ψ_{n−1}`, starting from the
/// Gaussian; raw Hermite polynomials are never formed.
pub fn unit_ho_values(x: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = PI.powf(-0.25) * (-0.5 * x * x).exp();
    if out.len() > 1 {
        out[1] = std::f64::consts::SQRT_2 * x * out[0];
    }
    for n in 1..out.len().saturating_sub(1) {
        let nf = n as f64;
        out[n + 1] = (2.0 / (nf + 1.0)).sqrt() * x * out[n] - (nf / (nf + 1.0)).sqrt() * out[n - 1];
    }
}

/// Single value of the unit oscillator function `ψ_n(x)`.
pub fn ho_eigenfunction(n: usize, x: f64) -> f64 {
    let mut buf = vec![0.0; n + 1];
    unit_ho_values(x, &mut buf);
    buf[n]
}
