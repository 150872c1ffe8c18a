mod common;

use quasi1d::basis::{antisymmetrized_coulomb_tensor, smooth_tensor, OrbitalBasis};
use quasi1d::model::{EffectivePotential, TrapParams};
use quasi1d::pipeline::{ground_state as solve, Method, SolveSettings};
use quasi1d::solvers::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn bosonic(n: usize, g: f64, eps: f64, n_max: usize) -> ManyBodyState {
    let params = TrapParams::quasi_1d(n, g, eps).unwrap();
    let basis = OrbitalBasis::new(n_max).unwrap();
    let t = smooth_tensor(&basis, &EffectivePotential::new(eps).unwrap()).unwrap();
    solve_bosonic(&params, &basis, &t, &EigenOptions::default()).unwrap()
}

fn fermionized(n: usize, g: f64, n_max: usize, frequency: f64) -> ManyBodyState {
    let params = TrapParams::strict_1d(n, g).unwrap();
    let basis = OrbitalBasis::with_frequency(n_max, frequency).unwrap();
    let t = antisymmetrized_coulomb_tensor(&basis).unwrap();
    solve_fermionized(&params, &basis, &t, &EigenOptions::default()).unwrap()
}

fn amplitudes(s: &ManyBodyState) -> &[f64] {
    match s.representation() {
        Representation::Ci { amplitudes, .. } | Representation::Grid { amplitudes, .. } => amplitudes,
    }
}

#[test]
fn noninteracting_energies() {
    for (n, n_max) in [(2, 12), (3, 10), (4, 8)] {
        let s = bosonic(n, 0.0, 30.0, n_max);
        let exact = n as f64 / 2.0 + 30.0 * n as f64;
        assert!((s.energy() - exact).abs() < 1e-10 * exact, "N={n}: {}", s.energy());
        let f = fermionized(n, 0.0, n_max, 1.0);
        assert!((f.energy() - (n * n) as f64 / 2.0).abs() < 1e-10);
        let a = amplitudes(&f);
        assert!((a[0] - 1.0).abs() < 1e-12 && a[1..].iter().all(|v| v.abs() < 1e-12));
    }
}

#[test]
fn fermionized_pair_matches_relative_solve() {
    for g in [0.5, 1.0, 2.0, 5.0, 10.0] {
        let (n_max, frequency) = if g < 5.0 { (80, 1.4) } else { (40, 1.0) };
        let e = fermionized(2, g, n_max, frequency).energy();
        let oracle = common::fermionized_pair_energy(g);
        assert!(((e - oracle) / oracle).abs() < 1e-5, "g={g}: {e} vs {oracle}");
    }
}

#[test]
fn dense_random_matrices_match_jacobi() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for dim in [2, 17, 50] {
        let mut a = vec![vec![0.0; dim]; dim];
        for i in 0..dim {
            for j in 0..=i {
                let v: f64 = rng.gen_range(-1.0..1.0);
                a[i][j] = v;
                a[j][i] = v;
            }
        }
        let flat: Vec<f64> = a.iter().flatten().copied().collect();
        let h = SymmetricMatrix::from_dense(dim, &flat).unwrap();
        let pair = ground_state(&h, 1e-10).unwrap();
        let oracle = common::jacobi_eigenvalues(a)[0];
        assert!((pair.energy - oracle).abs() < 1e-10, "dim {dim}: {} vs {oracle}", pair.energy);
    }
    let h = SymmetricMatrix::from_dense(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
    let pair = ground_state(&h, 1e-12).unwrap();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    assert!((pair.energy + 1.0).abs() < 1e-14);
    assert!((pair.vector[0] - r).abs() < 1e-14 && (pair.vector[1] + r).abs() < 1e-14);
}

#[test]
fn energy_falls_with_basis_size() {
    for g in [1.0, 5.0] {
        let energies: Vec<f64> = [8, 10, 12, 14, 16].iter().map(|&m| bosonic(2, g, 30.0, m).energy()).collect();
        for w in energies.windows(2) {
            assert!(w[1] <= w[0] + 1e-12, "g={g}: {energies:?}");
        }
    }
}

#[test]
fn ground_states_are_even() {
    for s in [bosonic(3, 2.0, 30.0, 14), fermionized(3, 2.0, 14, 1.0)] {
        // ψ_F of N fermions carries the parity (−1)^{N(N−1)/2} of its lowest
        // determinant; the bosonic state |ψ_F| is even either way.
        let Representation::Ci { space, amplitudes, .. } = s.representation() else { unreachable!() };
        let n = space.n_particles();
        let expected = if s.is_fermionized() && (n * (n - 1) / 2) % 2 == 1 { -1 } else { 1 };
        for c in 0..space.dim() {
            if space.parity(c) != expected {
                assert!(amplitudes[c].abs() < 1e-12, "odd configuration {:?}", space.config(c));
            }
        }
    }
}

#[test]
fn repeated_solves_are_bit_identical() {
    let a = bosonic(3, 1.0, 30.0, 16);
    let b = bosonic(3, 1.0, 30.0, 16);
    assert_eq!(a.energy().to_bits(), b.energy().to_bits());
    assert!(amplitudes(&a).iter().zip(amplitudes(&b)).all(|(x, y)| x.to_bits() == y.to_bits()));
    let s1 = ConfigurationSpace::new(Statistics::Symmetric, 12, 4).unwrap();
    let s2 = ConfigurationSpace::new(Statistics::Symmetric, 12, 4).unwrap();
    assert!((0..s1.dim()).all(|c| s1.config(c) == s2.config(c)));
}

#[test]
fn lanczos_agrees_with_dense_on_bosonic_hamiltonian() {
    let params = TrapParams::quasi_1d(3, 2.0, 30.0).unwrap();
    let basis = OrbitalBasis::new(14).unwrap();
    let t = smooth_tensor(&basis, &EffectivePotential::new(30.0).unwrap()).unwrap();
    let h = build_bosonic_hamiltonian(&params, &basis, &t).unwrap();
    assert_eq!(h.matrix.max_asymmetry(), 0.0);
    let dense = ground_state_with(&h.matrix, &EigenOptions { dense_limit: usize::MAX, ..EigenOptions::default() }).unwrap();
    let sparse = ground_state_with(&h.matrix, &EigenOptions { dense_limit: 0, ..EigenOptions::default() }).unwrap();
    assert!((dense.energy - sparse.energy).abs() < 1e-9 * dense.energy.abs());
    let overlap: f64 = dense.vector.iter().zip(&sparse.vector).map(|(a, b)| a * b).sum();
    assert!((overlap - 1.0).abs() < 1e-9);
}

#[test]
fn three_particle_grid_matches_ci() {
    for g in [1.0, 2.0] {
        let params = TrapParams::quasi_1d(3, g, 30.0).unwrap();
        let ci = solve(&params, Method::Ci, &SolveSettings::default()).unwrap().energy();
        let grid = solve(&params, Method::Grid, &SolveSettings::default()).unwrap().energy();
        assert!(((ci - grid) / ci).abs() < 5e-4, "g={g}: {ci} vs {grid}");
    }
}

#[test]
fn grid_state_is_exchange_symmetric() {
    let params = TrapParams::quasi_1d(2, 5.0, 30.0).unwrap();
    let axes = GridAxes::new(128, GridAxes::default_half_width(5.0)).unwrap();
    let s = imaginary_time_ground_state(&params, axes, &PropagationOptions::for_particles(2)).unwrap();
    let Representation::Grid { amplitudes, .. } = s.representation() else { unreachable!() };
    let p = axes.points();
    let worst = (0..p).flat_map(|i| (0..p).map(move |j| (i, j))).map(|(i, j)| (amplitudes[i * p + j] - amplitudes[j * p + i]).abs()).fold(0.0, f64::max);
    assert!(worst < 1e-10, "{worst:e}");
}

#[test]
fn full3d_noninteracting_and_self_convergent() {
    for eps in [5.0, 30.0] {
        let grid = CylindricalGrid::default_for(0.0, eps).unwrap();
        let r = full3d_two_body(0.0, eps, &grid, &full3d_options()).unwrap();
        assert!((r.energy - (1.0 + 2.0 * eps)).abs() < 1e-8, "{}", r.energy);
        assert!(r.delta_e() < 1e-6);
    }
    let grid = CylindricalGrid::default_for(5.0, 30.0).unwrap();
    let coarse = full3d_two_body(5.0, 30.0, &grid, &full3d_options()).unwrap();
    let fine = full3d_two_body(5.0, 30.0, &grid.refined().unwrap(), &full3d_options()).unwrap();
    assert!(coarse.energy <= coarse.single_mode_energy && fine.energy <= fine.single_mode_energy);
    let change = (coarse.delta_e() - fine.delta_e()).abs() / fine.delta_e();
    assert!(change < 0.1, "{} vs {}", coarse.delta_e(), fine.delta_e());
}
