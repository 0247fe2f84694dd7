mod common;

use rand::Rng;

use ptdyn::dynamics::{evolve, fit_recurrence_time, uniform_grid};
use ptdyn::embedding::{
    build_h_tot, embedded_trajectory, entanglement_entropy_series, mutual_information_series, postselect_pt,
};
use ptdyn::models::recurrence_time;
use ptdyn::qcore::trace_distance;
use ptdyn::{Density, Spec, State};

#[test]
fn postselection_reproduces_non_unitary_evolution() {
    for a in [0.2, 0.5, 0.8] {
        let spec = Spec::pt(a).unwrap();
        let grid = uniform_grid(0.0, 2.0 * recurrence_time(a).unwrap(), 64);
        for k in 0..2 {
            let chi = State::basis(2, k);
            let rho0 = Density::pure(&chi);
            let worst = embedded_trajectory(a, &chi, &grid)
                .unwrap()
                .iter()
                .zip(&grid)
                .map(|(psi, &t)| trace_distance(&postselect_pt(psi).unwrap(), &evolve(&spec, &rho0, t).unwrap()).unwrap())
                .fold(0.0, f64::max);
            assert!(worst < 1e-9, "a = {a}, chi = {k}: {worst:e}");
        }
    }
}

#[test]
fn entropy_oscillates_at_half_the_recurrence_period() {
    let a = 0.5;
    let period = recurrence_time(a).unwrap();
    let grid = uniform_grid(0.0, 4.0 * period, 512);
    for k in 0..2 {
        let chi = State::basis(2, k);
        let s = fit_recurrence_time(&entanglement_entropy_series(a, &chi, &grid).unwrap()).unwrap().parameter;
        assert!((s / period - 0.5).abs() / 0.5 < 0.01, "entropy period {s}");
        assert!((s - 1.8138).abs() / 1.8138 < 0.01);
        let i = fit_recurrence_time(&mutual_information_series(a, &chi, &grid).unwrap()).unwrap().parameter;
        assert!((i - s).abs() / s < 0.01, "information period {i} vs {s}");
    }
}

#[test]
fn dilated_hamiltonian_is_hermitian() {
    let mut rng = ptdyn::rng::rng_from_seed(21);
    for _ in 0..50 {
        let a = rng.random_range(0.0..0.95);
        assert!(build_h_tot(a).unwrap().hermiticity_residual() < 1e-12);
    }
}
