//! Gaussian quadrature rules.

use nalgebra::{DMatrix, SymmetricEigen};

use super::ho::unit_ho_values;

/// Gauss–Hermite rule for `∫ f(x) dx` with `f` decaying like a Gaussian.
///
/// `weights` integrate `f(x)` directly (the classical weight `exp(−x²)` is
/// folded in), `gaussian_weights` are the classical ones for `∫ e^{−x²} p(x)`.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub gaussian_weights: Vec<f64>,
}

impl GaussHermite {
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Hermite order must be positive");
        // Golub-Welsch for starting values, then Newton on the normalized
        // oscillator function ψ_order, which has the same zeros as H_order.
        let mut jacobi = DMatrix::<f64>::zeros(order, order);
        for k in 1..order {
            let b = (k as f64 / 2.0).sqrt();
            jacobi[(k, k - 1)] = b;
            jacobi[(k - 1, k)] = b;
        }
        let mut roots: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
        roots.sort_by(f64::total_cmp);

        let mut nodes = Vec::with_capacity(order);
        let mut weights = Vec::with_capacity(order);
        let mut gaussian_weights = Vec::with_capacity(order);
        let mut buf = vec![0.0; order + 1];
        for &root in &roots {
            let mut x = root;
            for _ in 0..100 {
                unit_ho_values(x, &mut buf);
                let (f, fm1) = (buf[order], buf[order - 1]);
                let df = (2.0 * order as f64).sqrt() * fm1 - x * f;
                let step = f / df;
                x -= step;
                if step.abs() <= 1e-15 * x.abs().max(1.0) {
                    break;
                }
            }
            unit_ho_values(x, &mut buf);
            // Christoffel: w e^{x²} = 1 / Σ_{k<order} ψ_k(x)²
            let sum: f64 = buf[..order].iter().map(|v| v * v).sum();
            let w = 1.0 / sum;
            nodes.push(x);
            weights.push(w);
            gaussian_weights.push(w * (-x * x).exp());
        }
        // Exact reflection symmetry of the rule.
        for i in 0..order / 2 {
            let j = order - 1 - i;
            let x = 0.5 * (nodes[j] - nodes[i]);
            nodes[i] = -x;
            nodes[j] = x;
            let w = 0.5 * (weights[i] + weights[j]);
            weights[i] = w;
            weights[j] = w;
            let gw = 0.5 * (gaussian_weights[i] + gaussian_weights[j]);
            gaussian_weights[i] = gw;
            gaussian_weights[j] = gw;
        }
        if order % 2 == 1 {
            nodes[order / 2] = 0.0;
        }
        Self { nodes, weights, gaussian_weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre order must be positive");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..(n + 1) / 2 {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let step = p / d;
                x -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes and weights mapped onto `[a, b]`, appended to the given buffers.
    pub fn map_into(&self, a: f64, b: f64, nodes: &mut Vec<f64>, weights: &mut Vec<f64>) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for (&t, &w) in self.nodes.iter().zip(&self.weights) {
            nodes.push(mid + half * t);
            weights.push(half * w);
        }
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Gauss–Legendre rule over consecutive intervals given by
/// `edges`, with `order` nodes per interval.
pub fn composite_legendre(edges: &[f64], order: usize) -> (Vec<f64>, Vec<f64>) {
    let rule = GaussLegendre::new(order);
    let mut nodes = Vec::with_capacity(edges.len().saturating_sub(1) * order);
    let mut weights = Vec::with_capacity(nodes.capacity());
    for pair in edges.windows(2) {
        rule.map_into(pair[0], pair[1], &mut nodes, &mut weights);
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_moments() {
        let rule = GaussHermite::new(40);
        // ∫ x^{2k} e^{-x²} = Γ(k+1/2)
        let mut gamma = std::f64::consts::PI.sqrt();
        for k in 0..30 {
            let m: f64 = rule
                .nodes
                .iter()
                .zip(&rule.gaussian_weights)
                .map(|(&x, &w)| w * x.powi(2 * k))
                .sum();
            assert!(((m - gamma) / gamma).abs() < 1e-12, "moment {k}: {m} vs {gamma}");
            gamma *= k as f64 + 0.5;
        }
    }

    #[test]
    fn legendre_polynomials_exact() {
        let rule = GaussLegendre::new(12);
        for k in 0..24 {
            let m: f64 = rule.nodes.iter().zip(&rule.weights).map(|(&x, &w)| w * x.powi(k)).sum();
            let want = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
            assert!((m - want).abs() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn composite_integrates_kinked_function_exactly_at_breaks() {
        let (x, w) = composite_legendre(&[-2.0, 0.5, 3.0], 8);
        let s: f64 = x.iter().zip(&w).map(|(&x, &w)| w * (x - 0.5).abs().powi(3)).sum();
        let want = (2.5f64.powi(4) + 2.5f64.powi(4)) / 4.0;
        assert!((s - want).abs() < 1e-12);
    }
}
