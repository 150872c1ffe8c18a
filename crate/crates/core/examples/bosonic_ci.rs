//! Configuration-interaction ground state of two or three bosons in a
//! quasi-1D trap, with the basis size varied to show convergence.

use quasi1d::basis::{smooth_tensor, OrbitalBasis};
use quasi1d::model::{EffectivePotential, TrapParams};
use quasi1d::solvers::{solve_bosonic, EigenOptions};

fn main() -> quasi1d::Result<()> {
    let (g, eps) = (2.0, 30.0);
    let potential = EffectivePotential::new(eps)?;
    for n in [2, 3] {
        let params = TrapParams::quasi_1d(n, g, eps)?;
        for n_max in [12, 18, 24] {
            let basis = OrbitalBasis::new(n_max)?;
            let tensor = smooth_tensor(&basis, &potential)?;
            let state = solve_bosonic(&params, &basis, &tensor, &EigenOptions::default())?;
            println!("N={n} n_max={n_max:>2}  E = {:.8}", state.energy());
        }
    }
    Ok(())
}
