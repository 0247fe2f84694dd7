mod common;

use rayon::prelude::*;

use ptdyn::dynamics::{evolve, uniform_grid};
use ptdyn::models::recurrence_time;
use ptdyn::qcore::trace_distance;
use ptdyn::rng::child_seed;
use ptdyn::tomography::{
    born_probabilities, mle_fit, simulate_counts, standard_bases, MleOptions, DEFAULT_SHOTS,
};
use ptdyn::{Density, Spec, State};

#[test]
fn reconstructed_distinguishability_tracks_exact_curve() {
    let a = 0.5;
    let spec = Spec::pt(a).unwrap();
    let bases = standard_bases(2).unwrap();
    let grid = uniform_grid(0.0, recurrence_time(a).unwrap(), 32);
    let (h, v) = (Density::pure(&State::basis(2, 0)), Density::pure(&State::basis(2, 1)));
    let states: Vec<(Density, Density, f64)> = grid
        .iter()
        .map(|&t| {
            let (x, y) = (evolve(&spec, &h, t).unwrap(), evolve(&spec, &v, t).unwrap());
            let d = trace_distance(&x, &y).unwrap();
            (x, y, d)
        })
        .collect();
    let reconstruct = |rho: &Density, seed: u64| {
        let p = born_probabilities(rho, &bases).unwrap();
        let rec = simulate_counts(&bases, &p, DEFAULT_SHOTS, seed).unwrap();
        let fit = mle_fit(&rec, &bases, &MleOptions::default()).unwrap();
        assert!(fit.log_likelihood.windows(2).all(|w| w[1] >= w[0]));
        // round trip through validation: the estimate is a physical state
        Density::new(*fit.state.matrix()).unwrap()
    };
    let errors: Vec<f64> = (0..100u64)
        .into_par_iter()
        .map(|seed| {
            states
                .iter()
                .enumerate()
                .map(|(k, (x, y, d))| {
                    let sx = child_seed(seed, 2 * k as u64);
                    let sy = child_seed(seed, 2 * k as u64 + 1);
                    let est = trace_distance(&reconstruct(x, sx), &reconstruct(y, sy)).unwrap();
                    (est - d).abs()
                })
                .sum::<f64>()
                / states.len() as f64
        })
        .collect();
    let mean = errors.iter().sum::<f64>() / errors.len() as f64;
    assert!(mean < 0.02, "mean absolute error {mean}");
}
