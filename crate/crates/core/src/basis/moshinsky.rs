//! Center-of-mass / relative expansion of two-particle oscillator products.
//!
//! With `X = (x₁+x₂)/√2` and `r = (x₁−x₂)/√2`,
//! `φ_i(x₁)φ_j(x₂) = Σ_N M^{ij}_N Φ_N(X) φ_{i+j−N}(r)`,
//! where all functions share one oscillator length. The ladder operators
//! transform as `a₁† = (A†+b†)/√2`, `a₂† = (A†−b†)/√2`, which gives
//!
//! `M^{ij}_N = 2^{−(i+j)/2} √(N!K!/(i!j!)) Σ_{p+q=N} C(i,p) C(j,q) (−1)^{j−q}`
//!
//! with `K = i + j − N`. The alternating sum loses every digit for large
//! `i + j`, so the coefficients come from a three-term recurrence instead.

/// One term of the expansion: center-of-mass index, relative index, coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoshinskyTerm {
    pub com: usize,
    pub rel: usize,
    pub coefficient: f64,
}

/// Exact expansion of `φ_i(x₁)φ_j(x₂)`; only `N + K = i + j` terms appear.
/// Terms with a zero coefficient are kept so the result is indexed by `N`.
pub fn moshinsky_coefficients(i: usize, j: usize) -> Vec<MoshinskyTerm> {
    // The row is the eigenvector of n₁ − n₂ = A†b + b†A with eigenvalue i − j:
    // √((N+1)K) M_{N+1} + √(N(K+1)) M_{N−1} = (i − j) M_N.
    // Both ends are known in closed form; recurring inward from each end
    // follows the growing solution and stays stable.
    let total = i + j;
    let lambda = i as f64 - j as f64;
    let edge = (0.5 * (ln_factorial(total) - ln_factorial(i) - ln_factorial(j) - total as f64 * std::f64::consts::LN_2)).exp();
    let mut c = vec![0.0; total + 1];
    let half = total / 2;
    c[0] = if j % 2 == 0 { edge } else { -edge };
    for n in 0..half {
        let k = (total - n) as f64;
        let below = if n > 0 { (n as f64 * (k + 1.0)).sqrt() * c[n - 1] } else { 0.0 };
        c[n + 1] = (lambda * c[n] - below) / ((n as f64 + 1.0) * k).sqrt();
    }
    if total > half {
        c[total] = edge;
        for n in (half + 2..=total).rev() {
            let k = (total - n) as f64;
            let above = if n < total { ((n as f64 + 1.0) * k).sqrt() * c[n + 1] } else { 0.0 };
            c[n - 1] = (lambda * c[n] - above) / (n as f64 * (k + 1.0)).sqrt();
        }
    }
    c.into_iter()
        .enumerate()
        .map(|(com, coefficient)| MoshinskyTerm { com, rel: total - com, coefficient })
        .collect()
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Coefficient table `table[i][j][N]` for all `i, j < n_max`.
#[derive(Debug, Clone)]
pub struct MoshinskyTable {
    n_max: usize,
    coeffs: Vec<Vec<f64>>,
}

impl MoshinskyTable {
    pub fn new(n_max: usize) -> Self {
        let mut coeffs = Vec::with_capacity(n_max * n_max);
        for i in 0..n_max {
            for j in 0..n_max {
                coeffs.push(moshinsky_coefficients(i, j).into_iter().map(|t| t.coefficient).collect());
            }
        }
        Self { n_max, coeffs }
    }

    /// Coefficients indexed by the center-of-mass quantum number.
    pub fn get(&self, i: usize, j: usize) -> &[f64] {
        &self.coeffs[i * self.n_max + j]
    }
}
