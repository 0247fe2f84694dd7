mod common;

use std::f64::consts::PI;

use rand::Rng;

use ptdyn::dynamics::evolve;
use ptdyn::embedding::build_h_tot;
use ptdyn::models::build_hamiltonian;
use ptdyn::optics::{compile_single_qubit, compile_two_qubit, phase_aligned_residual, CompileOptions, DecompositionVariant};
use ptdyn::qcore::{mat_exp, trace_distance};
use ptdyn::rng::child_rng;
use ptdyn::{Complex, Density, Matrix, Spec, State};

fn random_unitary(rng: &mut impl Rng) -> Matrix {
    let k: Vec<f64> = (0..8).map(|_| rng.random_range(-PI..PI)).collect();
    common::unitary_from(2, &k)
}

#[test]
fn random_passive_targets_round_trip() {
    let options = CompileOptions { restarts: 50, ..CompileOptions::default() };
    let mut successes = 0;
    for i in 0..100 {
        let mut rng = child_rng(2024, i);
        let s = rng.random_range(0.3..1.0);
        let target = random_unitary(&mut rng).scale_real(s);
        let options = CompileOptions { seed: i, ..options.clone() };
        if let Ok(sol) = compile_single_qubit(&target, DecompositionVariant::Full12Param, &options) {
            if phase_aligned_residual(&sol.realize(), &target).0 < 1e-5 {
                successes += 1;
            }
        }
    }
    assert!(successes >= 95, "{successes}/100 targets compiled");
}

#[test]
fn compiled_circuit_reproduces_evolution() {
    let a = 0.5;
    let chi = State::basis(2, 0);
    let rho0 = Density::pure(&chi);
    for t in [0.4, 1.0, 2.5] {
        let passive = Spec::passive_pt(a).unwrap();
        let target = mat_exp(&build_hamiltonian(&passive).unwrap(), t).unwrap();
        let sol = compile_single_qubit(&target, DecompositionVariant::PTSimplified, &CompileOptions::default()).unwrap();
        let out = chi.apply(&sol.realize()).unwrap().normalized();
        let d = trace_distance(&Density::pure(&out), &evolve(&Spec::pt(a).unwrap(), &rho0, t).unwrap()).unwrap();
        assert!(d < 1e-5, "t = {t}: {d:e}");
    }
}

#[test]
fn dilated_evolution_compiles() {
    let h = build_h_tot(0.5).unwrap();
    for t in [0.3, 0.7, 1.5] {
        let target = mat_exp(&h, t).unwrap();
        let sol = compile_two_qubit(&target, &CompileOptions::default()).unwrap();
        assert!(sol.residual < 1e-6, "t = {t}: {:e}", sol.residual);
        let (r, phase) = phase_aligned_residual(&sol.realize(), &target);
        assert!(r < 1e-6);
        let aligned = target.scale(Complex::from_polar(1.0, phase));
        assert!(sol.realize().max_abs_diff(&aligned) < 1e-6);
    }
}
