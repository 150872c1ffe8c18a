//! One-body densities split into N peaks as the coupling grows.

use quasi1d::model::TrapParams;
use quasi1d::pipeline::{solve_point, Method, SolveSettings};

fn main() -> quasi1d::Result<()> {
    let settings = SolveSettings::default();
    for g in [0.5, 2.0, 5.0] {
        let r = solve_point(&TrapParams::quasi_1d(3, g, 30.0)?, Method::Ci, &settings)?.report;
        let peaks: Vec<String> = r.density.local_maxima(1e-3).iter().map(|x| format!("{x:+.3}")).collect();
        println!("N=3 g={g:<3} ∫n = {:.6}  maxima at [{}]", r.density.integral(), peaks.join(", "));
    }
    let r = solve_point(&TrapParams::strict_1d(3, 5.0)?, Method::Ci, &settings)?.report;
    let peaks: Vec<String> = r.density.local_maxima(1e-3).iter().map(|x| format!("{x:+.3}")).collect();
    println!("N=3 g=5 strict 1D  maxima at [{}]", peaks.join(", "));
    Ok(())
}
