use approx::assert_abs_diff_eq;
use proptest::prelude::*;

use qslsim::boundstate::{bound_state_exists, find_bound_state, ohmic_critical_coupling, DEFAULT_ENERGY_TOL};
use qslsim::dynamics::{solve_amplitude, SimulationConfig};
use qslsim::quadrature::Quadrature;
use qslsim::SpectralDensity;

// Ohmic, γ = 7, ω_c = 1, N = 1, h = 1e-3; halving h moves it by 4e-8.
const STRONG_OHMIC_POPULATION_AT_10: f64 = 0.079_499_07;

#[test]
fn strong_ohmic_population_approaches_bound_state_weight() {
    let sd = SpectralDensity::ohmic(7.0, 1.0).unwrap();
    let traj = solve_amplitude(&SimulationConfig::new(1, sd, 10.0, 1e-3).unwrap()).unwrap();
    let pop = traj.population();
    assert_abs_diff_eq!(*pop.last().unwrap(), STRONG_OHMIC_POPULATION_AT_10, epsilon = 1e-6);

    // Residue of the bound-state pole: Z = 1 / (1 + N ∫ J / (ω − E)²).
    let energy = find_bound_state(&sd, 1, DEFAULT_ENERGY_TOL).unwrap().energy.unwrap();
    let weight = Quadrature::new(1e-10)
        .integrate_semi_infinite(|w| sd.density(w).unwrap() / (w - energy).powi(2), 0.0, 1.0)
        .unwrap()
        .value;
    let z2 = (1.0 + weight).powi(-2);
    let tail = &pop[8000..];
    let mean = tail.iter().sum::<f64>() / tail.len() as f64;
    assert!((mean - z2).abs() < 0.005, "mean {mean} vs Z² {z2}");
    assert!(tail.iter().all(|p| *p > 0.9 * z2));
}

#[test]
fn bound_energy_decreases_with_n() {
    for sd in [SpectralDensity::lorentzian(2.0, 1.0).unwrap(), SpectralDensity::ohmic(4.0, 1.0).unwrap()] {
        let energies: Vec<f64> = [2, 3, 5, 8, 10]
            .iter()
            .map(|&n| find_bound_state(&sd, n, DEFAULT_ENERGY_TOL).unwrap().energy.unwrap())
            .collect();
        assert!(energies.windows(2).all(|w| w[1] < w[0]), "{}: {energies:?}", sd.name());
    }
}

#[test]
fn no_bound_state_means_full_decay_toward_spectator_floor() {
    // Lorentzian at weak coupling, N = 1: no trapping, population keeps falling.
    let sd = SpectralDensity::lorentzian(0.05, 1.0).unwrap();
    let traj = solve_amplitude(&SimulationConfig::new(1, sd, 40.0, 1e-3).unwrap()).unwrap();
    let pop = traj.population();
    assert!(*pop.last().unwrap() < 0.5);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn existence_agrees_with_ohmic_critical_coupling(
        omega0 in 0.2..3.0f64,
        omega_c in 0.3..3.0f64,
        n in 1usize..=12,
        rel in prop_oneof![0.5..0.98f64, 1.02..2.0f64],
    ) {
        let critical = ohmic_critical_coupling(omega0, omega_c, n);
        let gamma = rel * critical;
        let sd = SpectralDensity::ohmic(gamma, omega_c).unwrap().with_omega0(omega0).unwrap();
        let (exists, _) = bound_state_exists(&sd, n).unwrap();
        prop_assert_eq!(exists, gamma > critical);
    }

    // Collective scaling: C₁ for N qubits is (N−1)/N + u/N where u is the
    // single-qubit amplitude at N-fold coupling.
    #[test]
    fn amplitude_obeys_collective_scaling(n in 2usize..=6, coupling in 0.05..1.5f64, ohmic in any::<bool>()) {
        let make = |c: f64| if ohmic {
            SpectralDensity::ohmic(c, 1.0).unwrap()
        } else {
            SpectralDensity::lorentzian(c, 1.0).unwrap()
        };
        let many = solve_amplitude(&SimulationConfig::new(n, make(coupling), 3.0, 2e-3).unwrap()).unwrap();
        let one = solve_amplitude(&SimulationConfig::new(1, make(n as f64 * coupling), 3.0, 2e-3).unwrap()).unwrap();
        let nf = n as f64;
        for (a, b) in many.c1().iter().zip(one.c1()) {
            prop_assert!((a - ((nf - 1.0) / nf + b / nf)).norm() < 1e-9);
        }
    }
}
