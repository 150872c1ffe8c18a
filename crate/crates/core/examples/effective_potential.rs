//! Effective quasi-1D interaction against the bare Coulomb tail.

use quasi1d::model::EffectivePotential;

fn main() -> quasi1d::Result<()> {
    let eps = [5.0, 30.0, 100.0];
    let potentials: Vec<_> = eps.iter().map(|&e| EffectivePotential::new(e)).collect::<Result<_, _>>()?;
    println!("{:>6} {:>12} {:>12} {:>12} {:>12}", "x", "eps=5", "eps=30", "eps=100", "1/|x|");
    for i in 0..=20 {
        let x = 0.25 * i as f64;
        print!("{x:>6.2}");
        for u in &potentials {
            print!(" {:>12.6}", u.eval(x));
        }
        println!(" {:>12.6}", 1.0 / x);
    }
    for u in &potentials {
        println!("eps={:<5} peak U(0) = {:.6}", u.anisotropy(), u.peak());
    }
    Ok(())
}
