//! Interaction tensors written to disk once and reused.

use std::time::Instant;

use quasi1d::basis::{OrbitalBasis, TensorCache};
use quasi1d::model::EffectivePotential;

fn main() -> quasi1d::Result<()> {
    let dir = std::env::temp_dir().join("quasi1d-tensor-cache-example");
    let cache = TensorCache::new(&dir)?;
    let basis = OrbitalBasis::new(20)?;
    let potential = EffectivePotential::new(30.0)?;
    for pass in ["first", "second"] {
        let t = Instant::now();
        let tensor = cache.smooth(&basis, &potential)?;
        println!("{pass:<6} load: V0000 = {:.10}  in {:.1?}", tensor.get(0, 0, 0, 0), t.elapsed());
    }
    let t = Instant::now();
    let coulomb = cache.coulomb(&basis)?;
    println!("coulomb: Ṽ0101 = {:.10}  in {:.1?}", coulomb.get(0, 1, 0, 1), t.elapsed());
    println!("cache directory {}", dir.display());
    Ok(())
}
