#![allow(dead_code)]
//! Reference computations that share no code with the library.

use std::f64::consts::PI;

/// Adaptive Simpson with Richardson correction; `tol` is absolute.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 50)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// `∫ f` over consecutive intervals between sorted break points.
pub fn integrate_pieces(f: &dyn Fn(f64) -> f64, breaks: &[f64], tol: f64) -> f64 {
    breaks.windows(2).map(|w| adaptive_simpson(f, w[0], w[1], tol)).sum()
}

pub fn phi0(x: f64) -> f64 {
    PI.powf(-0.25) * (-0.5 * x * x).exp()
}

pub fn phi1(x: f64) -> f64 {
    PI.powf(-0.25) * 2f64.sqrt() * x * (-0.5 * x * x).exp()
}

/// Transverse average of the Coulomb kernel written as a radial integral.
pub fn effective_interaction_integral(x: f64, eps: f64) -> f64 {
    let reach = (2.0 * 45.0 / eps).sqrt();
    let f = |r: f64| {
        let d = (x * x + r * r).sqrt();
        if d == 0.0 {
            eps
        } else {
            eps * r * (-0.5 * eps * r * r).exp() / d
        }
    };
    let mut breaks = vec![0.0];
    if x.abs() > 0.0 && x.abs() < reach {
        breaks.push(x.abs());
    }
    breaks.push(reach);
    integrate_pieces(&f, &breaks, 1e-14)
}

/// Lowest eigenvalue of a symmetric tridiagonal matrix by Sturm bisection.
pub fn tridiagonal_lowest(diag: &[f64], off: &[f64]) -> f64 {
    let (mut lo, mut hi) = diag.iter().zip(0..).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (d, i)| {
        let r = off.get(i).map_or(0.0, |v: &f64| v.abs()) + if i > 0 { off[i - 1].abs() } else { 0.0 };
        (lo.min(d - r), hi.max(d + r))
    });
    let below = |x: f64| {
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..diag.len() {
            let o = if i > 0 { off[i - 1] * off[i - 1] } else { 0.0 };
            q = diag[i] - x - if i > 0 { o / q } else { 0.0 };
            if q == 0.0 {
                q = 1e-300;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if below(mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Ground energy of two particles in the strict-1D limit: center of mass `½`
/// plus the odd relative channel of `−d²/dr² + r²/4 + g/|r|` on `r > 0`,
/// second-order differences at two spacings, Richardson extrapolated.
pub fn fermionized_pair_energy(g: f64) -> f64 {
    let reach = 14.0 + 2.0 * (2.0 * g).cbrt();
    let solve = |h: f64| {
        let m = (reach / h).round() as usize;
        let diag: Vec<f64> = (1..m).map(|j| {
            let r = j as f64 * h;
            2.0 / (h * h) + 0.25 * r * r + g / r
        }).collect();
        let off = vec![-1.0 / (h * h); m - 2];
        tridiagonal_lowest(&diag, &off)
    };
    let (coarse, fine) = (solve(0.004), solve(0.002));
    0.5 + fine + (fine - coarse) / 3.0
}

/// Eigenvalues of a dense symmetric matrix by cyclic Jacobi rotations.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        if off < 1e-26 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}
