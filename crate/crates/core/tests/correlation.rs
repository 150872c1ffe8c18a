use nalgebra::SymmetricEigen;
use quasi1d::basis::OrbitalBasis;
use quasi1d::correlation::*;
use quasi1d::limits::tg_state;
use quasi1d::model::TrapParams;
use quasi1d::pipeline::{ground_state, one_body_rdm, Method, SolveSettings};
use quasi1d::solvers::{GridAxes, ManyBodyState, Representation};
use std::f64::consts::PI;

fn solve(params: TrapParams, method: Method) -> ManyBodyState {
    ground_state(&params, method, &SolveSettings::default()).unwrap()
}

fn assert_rdm_invariants(rdm: &ReducedDensityMatrix, label: &str) -> Vec<f64> {
    assert!((rdm.trace() - 1.0).abs() < 1e-8, "{label}: trace {}", rdm.trace());
    assert!(rdm.max_asymmetry() < 1e-10, "{label}: asymmetry {}", rdm.max_asymmetry());
    let lambda = natural_occupancies(rdm).unwrap();
    assert!(lambda.iter().all(|&l| l >= -1e-10 && l <= 1.0 + 1e-10), "{label}: {lambda:?}");
    assert!((lambda.iter().sum::<f64>() - 1.0).abs() < 1e-8, "{label}: Σλ");
    let from_kernel = 1.0 - rdm.kernel_purity();
    assert!((linear_entropy(&lambda) - from_kernel).abs() < 1e-6, "{label}: {} vs {from_kernel}", linear_entropy(&lambda));
    let profile = density_profile(rdm, 801);
    assert!((profile.integral() - 1.0).abs() < 1e-6, "{label}: ∫n = {}", profile.integral());
    assert!(profile.max_asymmetry() < 1e-8, "{label}: density asymmetry {}", profile.max_asymmetry());
    lambda
}

/// The same bosonic CI state sampled on a uniform grid, built here from the
/// configurations and orbital values.
fn ci_state_on_grid(state: &ManyBodyState, axes: GridAxes) -> ManyBodyState {
    let Representation::Ci { space, basis, amplitudes } = state.representation() else { unreachable!() };
    assert_eq!(space.n_particles(), 2);
    let x = axes.nodes();
    let phi: Vec<Vec<f64>> = x.iter().map(|&xi| basis.values(xi)).collect();
    let p = axes.points();
    let mut psi = vec![0.0; p * p];
    for c in 0..space.dim() {
        let (i, j) = (space.config(c)[0] as usize, space.config(c)[1] as usize);
        let a = amplitudes[c];
        for s in 0..p {
            for t in 0..p {
                psi[s * p + t] += a * if i == j {
                    phi[s][i] * phi[t][i]
                } else {
                    (phi[s][i] * phi[t][j] + phi[s][j] * phi[t][i]) / 2f64.sqrt()
                };
            }
        }
    }
    let h = axes.spacing();
    let norm = (h * h * psi.iter().map(|v| v * v).sum::<f64>()).sqrt();
    psi.iter_mut().for_each(|v| *v /= norm);
    ManyBodyState::new(Representation::Grid { axes, amplitudes: psi }, state.energy(), *state.params()).unwrap()
}

#[test]
fn noninteracting_matrices() {
    let s = solve(TrapParams::quasi_1d(3, 0.0, 30.0).unwrap(), Method::Ci);
    let rdm = rdm_from_ci(&s).unwrap();
    assert!((rdm.trace() - 1.0).abs() < 1e-12);
    assert!((rdm.matrix()[(0, 0)] - 1.0).abs() < 1e-12);
    let lambda = assert_rdm_invariants(&rdm, "g=0 CI");
    assert!((lambda[0] - 1.0).abs() < 1e-12 && linear_entropy(&lambda).abs() < 1e-12);

    let params = TrapParams::quasi_1d(2, 0.0, 30.0).unwrap();
    let axes = GridAxes::new(128, 7.0).unwrap();
    let grid = quasi1d::solvers::imaginary_time_ground_state(&params, axes, &Default::default()).unwrap();
    let rdm = rdm_from_grid(&grid).unwrap();
    assert_rdm_invariants(&rdm, "g=0 grid");
    let RdmRepresentation::Grid { nodes, .. } = rdm.representation() else { unreachable!() };
    let mut worst = 0.0f64;
    for (i, &x) in nodes.iter().enumerate() {
        for (j, &y) in nodes.iter().enumerate() {
            let exact = PI.powf(-0.5) * (-(x * x + y * y) / 2.0).exp();
            worst = worst.max((rdm.matrix()[(i, j)] - exact).abs());
        }
    }
    // Strang splitting leaves an O(dτ²) offset in the converged state.
    assert!(worst < 1e-5, "{worst:e}");
    let profile = density_profile(&rdm, 0);
    assert!(profile.values.iter().enumerate().all(|(i, v)| *v == rdm.matrix()[(i, i)]));
}

#[test]
fn orbital_and_grid_views_of_one_state_agree() {
    let s = solve(TrapParams::quasi_1d(2, 1.0, 30.0).unwrap(), Method::Ci);
    let orbital = natural_occupancies(&rdm_from_ci(&s).unwrap()).unwrap();
    let sampled = ci_state_on_grid(&s, GridAxes::new(256, 11.0).unwrap());
    let rdm = rdm_from_grid(&sampled).unwrap();
    let grid = assert_rdm_invariants(&rdm, "sampled CI");
    for l in 0..8 {
        assert!((orbital[l] - grid[l]).abs() < 1e-4, "λ_{l}: {} vs {}", orbital[l], grid[l]);
    }
}

#[test]
fn ci_kernel_matches_propagated_kernel() {
    let params = TrapParams::quasi_1d(2, 1.0, 30.0).unwrap();
    let ci = rdm_from_ci(&solve(params, Method::Ci)).unwrap();
    // The pair potential has a kink on the anti-diagonal; 512 points bring
    // the kernel error there below 1e−4.
    let fine = SolveSettings { grid_points: Some(512), ..SolveSettings::default() };
    let grid = rdm_from_grid(&ground_state(&params, Method::Grid, &fine).unwrap()).unwrap();
    assert_rdm_invariants(&grid, "grid N=2 g=1");
    let RdmRepresentation::Grid { nodes, .. } = grid.representation() else { unreachable!() };
    let mut worst = 0.0f64;
    for (i, &x) in nodes.iter().enumerate().step_by(4) {
        for (j, &y) in nodes.iter().enumerate().step_by(4) {
            worst = worst.max((grid.matrix()[(i, j)] - ci.kernel(x, y).unwrap()).abs());
        }
    }
    assert!(worst < 2e-4, "{worst:e}");
}

#[test]
fn coherence_falls_with_coupling() {
    let mut prev = f64::INFINITY;
    let mut corner = Vec::new();
    for g in [0.0, 1.0, 2.0, 5.0] {
        let rdm = rdm_from_ci(&solve(TrapParams::quasi_1d(2, g, 30.0).unwrap(), Method::Ci)).unwrap();
        let lambda = assert_rdm_invariants(&rdm, &format!("N=2 g={g}"));
        let p = purity(&lambda);
        assert!(p < prev, "purity at g={g}: {p} ≥ {prev}");
        prev = p;
        let k = |x: f64, y: f64| rdm.kernel(x, y).unwrap();
        corner.push(k(3.0, -3.0).abs() / (k(3.0, 3.0) * k(-3.0, -3.0)).sqrt());
    }
    // Off-diagonal coherence relative to the densities at both points.
    assert!(corner.windows(2).all(|w| w[1] < w[0]), "{corner:?}");
}

#[test]
fn three_body_density_peaks() {
    let quasi = rdm_from_ci(&solve(TrapParams::quasi_1d(3, 5.0, 30.0).unwrap(), Method::Ci)).unwrap();
    assert_rdm_invariants(&quasi, "N=3 g=5 ε=30");
    let peaks_quasi = density_profile(&quasi, 801).local_maxima(1e-3);
    assert_eq!(peaks_quasi.len(), 3, "{peaks_quasi:?}");

    let strict = one_body_rdm(&solve(TrapParams::strict_1d(3, 5.0).unwrap(), Method::Ci), &SolveSettings::default()).unwrap();
    assert_rdm_invariants(&strict, "N=3 g=5 strict");
    let peaks_strict = density_profile(&strict, 0).local_maxima(1e-3);
    assert_eq!(peaks_strict.len(), 3, "{peaks_strict:?}");
    assert!(peaks_strict[2] > peaks_quasi[2], "{peaks_strict:?} vs {peaks_quasi:?}");
}

#[test]
fn fermionized_kernel_converges_with_nodes() {
    let s = solve(TrapParams::strict_1d(2, 2.0).unwrap(), Method::Ci);
    let base = FermionizedQuadrature::for_particles(2);
    let doubled = FermionizedQuadrature { panels: 2 * base.panels, ..base };
    let l1 = linear_entropy(&assert_rdm_invariants(&rdm_from_fermionized(&s, &base).unwrap(), "N=2 g=2"));
    let l2 = linear_entropy(&natural_occupancies(&rdm_from_fermionized(&s, &doubled).unwrap()).unwrap());
    assert!((l1 - l2).abs() < 1e-4, "{l1} vs {l2}");
    assert!(rdm_from_ci(&s).is_err());
}

#[test]
fn occupancies_of_kernel_samples_use_weights() {
    // The plain sample matrix of a Gaussian kernel on a coarse grid is not
    // the Schmidt spectrum; the weighted one is.
    let s = tg_state(2, &OrbitalBasis::new(4).unwrap()).unwrap();
    let rdm = rdm_from_fermionized(&s, &FermionizedQuadrature::for_particles(2)).unwrap();
    let lambda = natural_occupancies(&rdm).unwrap();
    let plain = SymmetricEigen::new(rdm.matrix().clone()).eigenvalues;
    assert!((lambda.iter().sum::<f64>() - 1.0).abs() < 1e-8);
    assert!((plain.iter().sum::<f64>() - 1.0).abs() > 1e-3);
}

#[test]
fn budget_overrun_falls_back_to_sampling() {
    let s = tg_state(3, &OrbitalBasis::new(6).unwrap()).unwrap();
    let tight = FermionizedQuadrature { budget: 1000, ..FermionizedQuadrature::for_particles(3) };
    assert!(matches!(rdm_from_fermionized(&s, &tight), Err(quasi1d::Error::Resource(_))));
    let settings = SolveSettings { quadrature: Some(tight), ..SolveSettings::default() };
    let rdm = one_body_rdm(&s, &settings).unwrap();
    let se = rdm.standard_error().expect("sampled kernels carry an error estimate");
    assert!(se > 0.0 && se < 0.05, "{se}");
    let l = linear_entropy(&natural_occupancies(&rdm).unwrap());
    assert!((l - 0.51).abs() < 0.03, "{l}");
    let again = one_body_rdm(&s, &settings).unwrap();
    assert_eq!(rdm.matrix(), again.matrix());
}
