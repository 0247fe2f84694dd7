mod common;

use std::f64::consts::PI;

use common::pure;
use proptest::prelude::*;
use ptdyn::dynamics::{
    default_grid, default_power_law_window, default_relaxation_window, distinguishability_series,
    fit_power_law_exponent, fit_recurrence_time, fit_relaxation_time, log_grid, uniform_grid, DEFAULT_POINTS,
};
use ptdyn::models::{recurrence_time, relaxation_time};
use ptdyn::{Density, Spec};

fn hv() -> (Density, Density) {
    (pure(&[1.0, 0.0], &[0.0, 0.0]), pure(&[0.0, 1.0], &[0.0, 0.0]))
}

fn diagonal_pair() -> (Density, Density) {
    (pure(&[1.0, 1.0], &[0.0, 0.0]), pure(&[1.0, -1.0], &[0.0, 0.0]))
}

fn circular_pair() -> (Density, Density) {
    (pure(&[1.0, 0.0], &[0.0, 1.0]), pure(&[1.0, 0.0], &[0.0, -1.0]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn unbroken_distinguishability_is_periodic(
        a in prop::sample::select(vec![0.2, 0.5, 0.8]),
        x in prop::collection::vec(-1.0..1.0f64, 8),
        t in 0.0..5.0f64,
    ) {
        let r1 = pure(&x[0..2], &x[2..4]);
        let r2 = pure(&x[4..6], &x[6..8]);
        let spec = Spec::pt(a).unwrap();
        let period = recurrence_time(a).unwrap();
        let s = distinguishability_series(&spec, &r1, &r2, &[t, t + period]).unwrap();
        prop_assert!((s.values()[0] - s.values()[1]).abs() < 1e-8);
    }
}

#[test]
fn recurrence_scaling_law() {
    let (h, v) = hv();
    for a in [0.5, 0.8, 0.9, 0.99] {
        let spec = Spec::pt(a).unwrap();
        let s = distinguishability_series(&spec, &h, &v, &default_grid(&spec, DEFAULT_POINTS)).unwrap();
        let t = fit_recurrence_time(&s).unwrap().parameter;
        assert!((t * (1.0 - a * a).sqrt() - PI).abs() / PI < 0.01, "a = {a}: T = {t}");
    }
}

#[test]
fn relaxation_scaling_law() {
    let (h, v) = hv();
    for a in [1.1, 1.25, 1.5, 2.0] {
        let spec = Spec::pt(a).unwrap();
        let s = distinguishability_series(&spec, &h, &v, &default_grid(&spec, DEFAULT_POINTS)).unwrap();
        let tau = fit_relaxation_time(&s, default_relaxation_window(&s)).unwrap().parameter;
        assert!((tau * (a * a - 1.0).sqrt() - 0.5).abs() / 0.5 < 0.02, "a = {a}: tau = {tau}");
        assert!((tau - relaxation_time(a).unwrap()).abs() / tau < 0.02);
    }
}

#[test]
fn exceptional_point_power_laws() {
    let grid = log_grid(0.1, 200.0, DEFAULT_POINTS);
    let cases = [
        (Spec::pt(1.0).unwrap(), hv(), -2.0),
        (Spec::time_reversal(1.0).unwrap(), diagonal_pair(), -2.0),
        (Spec::time_reversal(1.0).unwrap(), hv(), -1.0),
        (Spec::pt(1.0).unwrap(), circular_pair(), -1.0),
    ];
    for (spec, (r1, r2), expect) in cases {
        let s = distinguishability_series(&spec, &r1, &r2, &grid).unwrap();
        let slope = fit_power_law_exponent(&s, default_power_law_window()).unwrap().parameter;
        assert!((slope - expect).abs() < 0.05, "{}: slope {slope}", spec.family());
    }
}

#[test]
fn no_symmetry_never_recovers() {
    let (h, v) = hv();
    let spec = Spec::no_symmetry(0.5, 0.5).unwrap();
    let s = distinguishability_series(&spec, &h, &v, &uniform_grid(0.0, 10.0, 256)).unwrap();
    assert!(s.values().windows(2).all(|w| w[1] <= w[0] + 1e-12));
    assert!(s.values()[1..].iter().all(|&d| d < 1.0 - 1e-6));
}

#[test]
fn time_reversal_minima_depend_on_initial_pair() {
    let spec = Spec::time_reversal(0.5).unwrap();
    let grid = uniform_grid(0.0, recurrence_time(0.5).unwrap(), 1025);
    let min = |(r1, r2): (Density, Density)| {
        let s = distinguishability_series(&spec, &r1, &r2, &grid).unwrap();
        assert!((s.values()[1024] - s.values()[0]).abs() < 1e-8);
        s.values().iter().cloned().fold(f64::INFINITY, f64::min)
    };
    let (m_hv, m_diag) = (min(hv()), min(diagonal_pair()));
    assert!((m_hv - m_diag).abs() > 1e-3, "minima {m_hv} vs {m_diag}");
}
