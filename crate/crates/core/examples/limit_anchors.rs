//! Entropies in the two analytic limits: free fermions mapped back to
//! bosons, and the harmonic crystal of two particles.

use quasi1d::basis::OrbitalBasis;
use quasi1d::correlation::{linear_entropy, natural_occupancies, rdm_from_fermionized, FermionizedQuadrature};
use quasi1d::limits::{harmonic_entropy_n2, tg_state, LimitAnchor};

fn main() -> quasi1d::Result<()> {
    let basis = OrbitalBasis::new(8)?;
    for n in 2..=4 {
        let state = tg_state(n, &basis)?;
        let rdm = rdm_from_fermionized(&state, &FermionizedQuadrature::for_particles(n))?;
        let l = linear_entropy(&natural_occupancies(&rdm)?);
        let anchor = LimitAnchor::tg(n)?;
        println!("g→0⁺ N={n}: L = {l:.5}  anchor {:.2}  deviation {:+.4}", anchor.expected_entropy, anchor.deviation(l));
    }
    println!("g→∞ N=2 harmonic: L = {:.6}", harmonic_entropy_n2());
    Ok(())
}
