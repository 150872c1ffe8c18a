//! Strictly one-dimensional bosons through the Bose–Fermi mapping: the
//! energy climbs from the free-fermion value N²/2 toward the crystal.

use quasi1d::model::TrapParams;
use quasi1d::pipeline::{solve_point, Method, SolveSettings};

fn main() -> quasi1d::Result<()> {
    let settings = SolveSettings::default();
    for n in [2, 3] {
        println!("N={n}  (g=0 limit E = {})", (n * n) as f64 / 2.0);
        for g in [0.5, 2.0, 10.0, 50.0] {
            let r = solve_point(&TrapParams::strict_1d(n, g)?, Method::Ci, &settings)?;
            println!("  g={g:<5} E = {:.6}  L = {:.5}", r.report.energy, r.report.linear_entropy);
        }
    }
    Ok(())
}
