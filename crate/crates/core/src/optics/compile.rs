use std::f64::consts::PI;

use argmin::core::{CostFunction, Executor};
use argmin::solver::neldermead::NelderMead;
use num_complex::Complex;
use rand::Rng;
use rayon::prelude::*;

use super::{realize_unchecked, wrap_angle, AngleSolution, DecompositionVariant};
use crate::error::{Error, Result};
use crate::qcore::ComplexMatrix;
use crate::rng::child_rng;

type M = ComplexMatrix<f64>;

/// A compiled circuit counts as exact below this residual.
pub const SUCCESS_RESIDUAL: f64 = 1e-6;

/// Allowed excess of the target's spectral norm over 1.
pub const PASSIVE_TOL: f64 = 1e-9;

/// Allowed `max |U†U − I|` of a two-qubit target.
pub const UNITARY_TOL: f64 = 1e-9;

const RESTART_BATCH: usize = 8;
const INITIAL_STEP: f64 = 0.5;
const MAX_POLISH: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct CompileOptions {
    /// Number of random starting points.
    pub restarts: usize,
    /// Master seed; restart `i` draws from child stream `i`.
    pub seed: u64,
    /// Iteration cap of each simplex run.
    pub max_iters: u64,
    /// Spread of simplex objective values at convergence.
    pub tolerance: f64,
}

impl Default for CompileOptions {
    fn default() -> Self {
        Self { restarts: 50, seed: 0, max_iters: 5000, tolerance: 1e-10 }
    }
}

/// `min_φ ‖realized − e^{iφ} target‖_F` and the minimizing `φ = arg Tr[target† realized]`.
pub fn phase_aligned_residual(realized: &M, target: &M) -> (f64, f64) {
    let overlap = (target.adjoint() * *realized).trace();
    let phase = if overlap.norm() > 0.0 { overlap.arg() } else { 0.0 };
    let aligned = target.scale(Complex::from_polar(1.0, phase));
    ((*realized - aligned).frobenius_norm(), phase)
}

/// Angles for a passive 2×2 target in a single-qubit layout.
pub fn compile_single_qubit(target: &M, variant: DecompositionVariant, options: &CompileOptions) -> Result<AngleSolution> {
    if variant == DecompositionVariant::TwoQubit {
        return Err(Error::InvalidParameters("two-qubit layout requested for a 2x2 target".into()));
    }
    if target.dim() != 2 {
        return Err(Error::DimMismatch { expected: 2, found: target.dim() });
    }
    target.ensure_finite()?;
    let norm = target.spectral_norm();
    if norm > 1.0 + PASSIVE_TOL {
        return Err(Error::NotPassive { norm });
    }
    search(target, variant, options)
}

/// Angles for a 4×4 unitary in the two-qubit layout.
pub fn compile_two_qubit(target: &M, options: &CompileOptions) -> Result<AngleSolution> {
    if target.dim() != 4 {
        return Err(Error::DimMismatch { expected: 4, found: target.dim() });
    }
    target.ensure_finite()?;
    let deviation = target.unitarity_residual();
    if deviation > UNITARY_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    search(target, DecompositionVariant::TwoQubit, options)
}

struct Objective<'a> {
    target: &'a M,
    variant: DecompositionVariant,
}

impl CostFunction for Objective<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, p: &Self::Param) -> std::result::Result<f64, argmin::core::Error> {
        Ok(phase_aligned_residual(&realize_unchecked(self.variant, p), self.target).0)
    }
}

fn search(target: &M, variant: DecompositionVariant, options: &CompileOptions) -> Result<AngleSolution> {
    if options.restarts == 0 {
        return Err(Error::InvalidParameters("at least one restart is required".into()));
    }
    let objective = Objective { target, variant };
    let mut best: Option<(f64, Vec<f64>)> = None;
    for start in (0..options.restarts).step_by(RESTART_BATCH) {
        let end = (start + RESTART_BATCH).min(options.restarts);
        let batch = (start..end)
            .into_par_iter()
            .map(|i| {
                let mut rng = child_rng(options.seed, i as u64);
                let x0: Vec<f64> = (0..variant.num_params()).map(|_| rng.random_range(-PI..PI)).collect();
                local_search(&objective, x0, options)
            })
            .collect::<Result<Vec<_>>>()?;
        // first minimum in restart order keeps the result independent of scheduling
        for candidate in batch {
            if best.as_ref().is_none_or(|b| candidate.0 < b.0) {
                best = Some(candidate);
            }
        }
        if best.as_ref().is_some_and(|b| b.0 < SUCCESS_RESIDUAL) {
            break;
        }
    }
    let (_, params) = best.expect("at least one restart ran");
    let params: Vec<f64> = params.into_iter().map(wrap_angle).collect();
    let (residual, global_phase) = phase_aligned_residual(&realize_unchecked(variant, &params), target);
    let solution = AngleSolution { variant, params, residual, global_phase };
    if solution.is_success() {
        Ok(solution)
    } else {
        Err(Error::CompileFailed { best: Box::new(solution) })
    }
}

/// Simplex runs from `x0`, restarted around the incumbent while they keep improving.
fn local_search(objective: &Objective<'_>, x0: Vec<f64>, options: &CompileOptions) -> Result<(f64, Vec<f64>)> {
    let (mut f, mut x) = simplex_run(objective, x0, INITIAL_STEP, options)?;
    for _ in 0..MAX_POLISH {
        if f < 1e-13 {
            break;
        }
        let step = (10.0 * f).clamp(1e-9, INITIAL_STEP);
        let (g, y) = simplex_run(objective, x.clone(), step, options)?;
        if g >= 0.9 * f {
            if g < f {
                (f, x) = (g, y);
            }
            break;
        }
        (f, x) = (g, y);
    }
    Ok((f, x))
}

fn simplex_run(objective: &Objective<'_>, x0: Vec<f64>, step: f64, options: &CompileOptions) -> Result<(f64, Vec<f64>)> {
    let n = x0.len() as f64;
    let mut simplex = vec![x0.clone()];
    for k in 0..x0.len() {
        let mut v = x0.clone();
        v[k] += step;
        simplex.push(v);
    }
    // dimension-adaptive coefficients; the library caps contraction at 0.5
    let solver = NelderMead::new(simplex)
        .with_sd_tolerance(options.tolerance)
        .and_then(|s| s.with_alpha(1.0))
        .and_then(|s| s.with_gamma(1.0 + 2.0 / n))
        .and_then(|s| s.with_rho((0.75 - 0.5 / n).min(0.5)))
        .and_then(|s| s.with_sigma(1.0 - 1.0 / n))
        .map_err(|e| Error::InvalidParameters(format!("simplex setup: {e}")))?;
    let result = Executor::new(Objective { target: objective.target, variant: objective.variant }, solver)
        .configure(|state| state.max_iters(options.max_iters))
        .timer(false)
        .run()
        .map_err(|e| Error::InvalidParameters(format!("simplex search: {e}")))?;
    let state = result.state;
    let x = state.best_param.clone().unwrap_or(x0);
    Ok((state.best_cost, x))
}
