//! Natural occupancies and linear entropy across the crossover from weak
//! to strong coupling.

use quasi1d::model::TrapParams;
use quasi1d::pipeline::{solve_point, Method, SolveSettings};

fn main() -> quasi1d::Result<()> {
    let settings = SolveSettings::default();
    for g in [0.0, 0.5, 1.0, 2.0, 5.0, 20.0] {
        let r = solve_point(&TrapParams::quasi_1d(2, g, 30.0)?, Method::Ci, &settings)?.report;
        let lead: Vec<String> = r.occupancies.iter().take(4).map(|l| format!("{l:.4}")).collect();
        println!("g={g:<4} L = {:.5}  λ = [{}]", r.linear_entropy, lead.join(", "));
    }
    Ok(())
}
