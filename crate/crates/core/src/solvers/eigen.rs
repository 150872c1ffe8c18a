//! Lowest eigenpair of a real symmetric matrix.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::hamiltonian::SymmetricMatrix;
use crate::error::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Above this dimension the iterative solver is used.
pub const DEFAULT_DENSE_LIMIT: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenOptions {
    /// Residual tolerance relative to a bound on `‖H‖`.
    pub tolerance: f64,
    pub dense_limit: usize,
    pub krylov_dim: usize,
    pub max_restarts: usize,
    pub seed: u64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self { tolerance: DEFAULT_TOLERANCE, dense_limit: DEFAULT_DENSE_LIMIT, krylov_dim: 80, max_restarts: 200, seed: 0 }
    }
}

#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub energy: f64,
    pub vector: Vec<f64>,
    /// `‖Hv − Ev‖` of the returned pair.
    pub residual: f64,
}

/// Lowest eigenpair with the default options.
pub fn ground_state(h: &SymmetricMatrix, tol: f64) -> Result<Eigenpair> {
    ground_state_with(h, &EigenOptions { tolerance: tol, ..EigenOptions::default() })
}

pub fn ground_state_with(h: &SymmetricMatrix, opts: &EigenOptions) -> Result<Eigenpair> {
    if h.dim() == 0 {
        return Err(Error::Parameter("empty matrix".into()));
    }
    if !(0..h.dim()).all(|r| h.row(r).all(|(_, v)| v.is_finite())) {
        return Err(Error::Parameter("matrix has non-finite entries".into()));
    }
    let scale = h.norm_bound().max(f64::MIN_POSITIVE);
    let mut pair = if h.dim() <= opts.dense_limit {
        let mut pair = dense(h);
        pair.residual = residual(h, pair.energy, &pair.vector);
        if pair.residual > opts.tolerance * scale {
            // The dense QL iteration occasionally stops with a loose vector.
            pair = lanczos(h, opts, scale, Some(pair.vector))?;
        }
        pair
    } else {
        lanczos(h, opts, scale, None)?
    };
    fix_sign(&mut pair.vector);
    pair.residual = residual(h, pair.energy, &pair.vector);
    if pair.residual > opts.tolerance * scale {
        return Err(Error::Solver {
            message: format!("lowest eigenpair of a {}-dimensional matrix", h.dim()),
            residual: pair.residual,
        });
    }
    Ok(pair)
}

fn dense(h: &SymmetricMatrix) -> Eigenpair {
    let eig = SymmetricEigen::new(h.to_dense());
    let k = eig.eigenvalues.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).map(|(k, _)| k).unwrap_or(0);
    let mut vector: Vec<f64> = eig.eigenvectors.column(k).iter().copied().collect();
    normalize(&mut vector);
    Eigenpair { energy: eig.eigenvalues[k], vector, residual: f64::NAN }
}

/// Restarted Lanczos with full reorthogonalization; each cycle restarts
/// from the current lowest Ritz vector.
fn lanczos(h: &SymmetricMatrix, opts: &EigenOptions, scale: f64, start: Option<Vec<f64>>) -> Result<Eigenpair> {
    let n = h.dim();
    let m = opts.krylov_dim.clamp(2, n);
    let mut start = start.unwrap_or_else(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
    });
    normalize(&mut start);

    let mut best = Eigenpair { energy: f64::NAN, vector: start.clone(), residual: f64::INFINITY };
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut w = vec![0.0; n];
    for _ in 0..opts.max_restarts {
        basis.clear();
        basis.push(start.clone());
        let mut alpha = Vec::with_capacity(m);
        let mut beta: Vec<f64> = Vec::with_capacity(m);
        loop {
            let j = basis.len() - 1;
            h.apply(&basis[j], &mut w);
            let a = dot(&w, &basis[j]);
            alpha.push(a);
            // Two passes of classical Gram–Schmidt against the whole basis.
            for _ in 0..2 {
                for v in &basis {
                    let c = dot(&w, v);
                    axpy(-c, v, &mut w);
                }
            }
            let b = dot(&w, &w).sqrt();
            if basis.len() == m || b <= 1e-14 * scale {
                break;
            }
            beta.push(b);
            basis.push(w.iter().map(|x| x / b).collect());
        }
        let k = alpha.len();
        let mut t = DMatrix::zeros(k, k);
        for i in 0..k {
            t[(i, i)] = alpha[i];
            if i + 1 < k {
                t[(i, i + 1)] = beta[i];
                t[(i + 1, i)] = beta[i];
            }
        }
        let eig = SymmetricEigen::new(t);
        let low = eig.eigenvalues.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).map(|(i, _)| i).unwrap_or(0);
        let mut ritz = vec![0.0; n];
        for (i, v) in basis.iter().enumerate() {
            axpy(eig.eigenvectors[(i, low)], v, &mut ritz);
        }
        normalize(&mut ritz);
        let energy = eig.eigenvalues[low];
        let res = residual(h, energy, &ritz);
        if res < best.residual {
            best = Eigenpair { energy, vector: ritz.clone(), residual: res };
        }
        if res <= opts.tolerance * scale {
            return Ok(best);
        }
        start = ritz;
    }
    Err(Error::Solver {
        message: format!("Lanczos did not converge in {} restarts (dimension {n})", opts.max_restarts),
        residual: best.residual,
    })
}

fn residual(h: &SymmetricMatrix, energy: f64, v: &[f64]) -> f64 {
    let mut hv = vec![0.0; v.len()];
    h.apply(v, &mut hv);
    hv.iter().zip(v).map(|(a, b)| (a - energy * b).powi(2)).sum::<f64>().sqrt()
}

/// Makes the largest-magnitude component positive (first one on ties).
pub fn fix_sign(v: &mut [f64]) {
    let mut k = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[k].abs() {
            k = i;
        }
    }
    if v.get(k).is_some_and(|&x| x < 0.0) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += a * xi);
}

fn normalize(v: &mut [f64]) {
    let n = dot(v, v).sqrt();
    v.iter_mut().for_each(|x| *x /= n);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two() {
        let h = SymmetricMatrix::from_dense(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let p = ground_state(&h, 1e-12).unwrap();
        assert!((p.energy + 1.0).abs() < 1e-15);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((p.vector[0] - s).abs() < 1e-15 && (p.vector[1] + s).abs() < 1e-15);
    }

    #[test]
    fn lanczos_matches_dense() {
        let n = 300;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut data = vec![0.0; n * n];
        for r in 0..n {
            data[r * n + r] = r as f64 * 0.1 + rng.gen_range(0.0..1.0);
            for c in 0..r {
                if rng.gen_bool(0.05) {
                    let v = rng.gen_range(-0.5..0.5);
                    data[r * n + c] = v;
                    data[c * n + r] = v;
                }
            }
        }
        let h = SymmetricMatrix::from_dense(n, &data).unwrap();
        let d = ground_state_with(&h, &EigenOptions { dense_limit: n, ..Default::default() }).unwrap();
        let l = ground_state_with(&h, &EigenOptions { dense_limit: 10, ..Default::default() }).unwrap();
        assert!((d.energy - l.energy).abs() < 1e-10);
        let overlap: f64 = d.vector.iter().zip(&l.vector).map(|(a, b)| a * b).sum();
        assert!((overlap - 1.0).abs() < 1e-9);
    }

    #[test]
    fn budget_exhaustion_reports_residual() {
        let n = 200;
        let data: Vec<f64> = (0..n * n).map(|k| if k % (n + 1) == 0 { (k / n) as f64 } else { 0.0 }).collect();
        let mut data = data;
        for r in 1..n {
            data[r * n + r - 1] = 1.0;
            data[(r - 1) * n + r] = 1.0;
        }
        let h = SymmetricMatrix::from_dense(n, &data).unwrap();
        let opts = EigenOptions { dense_limit: 0, krylov_dim: 3, max_restarts: 2, ..Default::default() };
        match ground_state_with(&h, &opts) {
            Err(Error::Solver { residual, .. }) => assert!(residual.is_finite() && residual > 0.0),
            other => panic!("expected solver error, got {other:?}"),
        }
    }
}
