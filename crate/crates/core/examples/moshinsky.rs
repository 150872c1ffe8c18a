//! Centre-of-mass and relative expansion of oscillator pairs.

use quasi1d::basis::moshinsky_coefficients;

fn main() {
    for (i, j) in [(0, 1), (1, 1), (2, 3)] {
        let terms = moshinsky_coefficients(i, j);
        println!("φ{i}φ{j}:");
        for t in &terms {
            println!("  {:+.8} Φ{}(X) φ{}(r)", t.coefficient, t.com, t.rel);
        }
        let norm: f64 = terms.iter().map(|t| t.coefficient * t.coefficient).sum();
        println!("  Σc² = {norm:.12}");
    }
}
