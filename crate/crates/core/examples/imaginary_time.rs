//! Split-step imaginary-time propagation on a grid, compared with CI.

use quasi1d::model::TrapParams;
use quasi1d::pipeline::{solve_point, Method, SolveSettings};

fn main() -> quasi1d::Result<()> {
    let settings = SolveSettings::default();
    for g in [1.0, 5.0] {
        let params = TrapParams::quasi_1d(2, g, 30.0)?;
        let grid = solve_point(&params, Method::Grid, &settings)?.report;
        let ci = solve_point(&params, Method::Ci, &settings)?.report;
        println!(
            "g={g}: grid E = {:.8} L = {:.6} | CI E = {:.8} L = {:.6} | rel. diff {:.1e}",
            grid.energy,
            grid.linear_entropy,
            ci.energy,
            ci.linear_entropy,
            ((grid.energy - ci.energy) / ci.energy).abs()
        );
    }
    Ok(())
}
