//! Two particles in the full cylindrical trap against the single-mode
//! reduction on the same grid.

use quasi1d::pipeline::{single_mode_check, SolveSettings};

fn main() -> quasi1d::Result<()> {
    let settings = SolveSettings::default();
    println!("{:>4} {:>6} {:>16} {:>16} {:>10}", "g", "eps", "E_3d", "E_1d", "delta_e");
    for g in [1.0, 20.0] {
        for eps in [5.0, 30.0] {
            let c = single_mode_check(g, eps, None, &settings)?;
            println!("{g:>4} {eps:>6} {:>16.9} {:>16.9} {:>10.3e}", c.e_3d, c.e_1d, c.delta_e);
        }
    }
    Ok(())
}
