//! Simulated polarization (and path) tomography: Born-rule probabilities,
//! binomial photon counts, linear inversion and maximum-likelihood
//! reconstruction.
//!
//! Every basis is a two-outcome measurement `{Π, 1 − Π}` recorded as
//! `counts` clicks out of `shots` photons.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::qcore::{eigvalsh, ComplexMatrix, DensityMatrix, StateVector};
use crate::rng::child_rng;

type C = Complex<f64>;
type M = ComplexMatrix<f64>;

/// Photons per basis in the standard simulated experiment.
pub const DEFAULT_SHOTS: u64 = 18_000;

/// Rank-one projector with a label.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBasis {
    label: String,
    projector: M,
}

impl MeasurementBasis {
    pub fn new(label: impl Into<String>, projector: M) -> Result<Self> {
        let tr = projector.trace();
        let idem = (projector * projector).max_abs_diff(&projector);
        if projector.hermiticity_residual() > 1e-12 || idem > 1e-12 || (tr - C::new(1.0, 0.0)).norm() > 1e-12 {
            return Err(Error::InvalidMatrix("basis projector must be a rank-one orthogonal projector".into()));
        }
        Ok(Self { label: label.into(), projector })
    }

    pub fn from_state(label: impl Into<String>, psi: &StateVector<f64>) -> Result<Self> {
        let psi = psi.normalized();
        Self::new(label, M::outer(psi.amps(), psi.amps()))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn projector(&self) -> &M {
        &self.projector
    }
}

/// Click count of one basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountRecord {
    pub basis_label: String,
    pub counts: u64,
    pub shots: u64,
    pub seed: u64,
}

fn polarization_states() -> [(&'static str, [C; 2]); 4] {
    let r = 0.5f64.sqrt();
    [
        ("H", [C::new(1.0, 0.0), C::new(0.0, 0.0)]),
        ("V", [C::new(0.0, 0.0), C::new(1.0, 0.0)]),
        ("P+", [C::new(r, 0.0), C::new(r, 0.0)]),
        ("P-", [C::new(r, 0.0), C::new(0.0, -r)]),
    ]
}

fn path_states() -> [(&'static str, [C; 2]); 4] {
    let r = 0.5f64.sqrt();
    [
        ("u", [C::new(1.0, 0.0), C::new(0.0, 0.0)]),
        ("d", [C::new(0.0, 0.0), C::new(1.0, 0.0)]),
        ("S+", [C::new(r, 0.0), C::new(r, 0.0)]),
        ("S-", [C::new(r, 0.0), C::new(0.0, -r)]),
    ]
}

/// `{H, V, P+, P−}` for a qubit; `{u, d, S+, S−} ⊗ {H, V, P+, P−}` for path and polarization.
pub fn standard_bases(dim: usize) -> Result<Vec<MeasurementBasis>> {
    match dim {
        2 => polarization_states()
            .iter()
            .map(|(l, v)| MeasurementBasis::new(*l, M::outer(v, v)))
            .collect(),
        4 => {
            let mut out = Vec::with_capacity(16);
            for (pl, p) in path_states() {
                for (sl, s) in polarization_states() {
                    let v: Vec<C> = p.iter().flat_map(|a| s.iter().map(move |b| a * b)).collect();
                    out.push(MeasurementBasis::new(format!("{pl}{sl}"), M::outer(&v, &v))?);
                }
            }
            Ok(out)
        }
        _ => Err(Error::Unsupported(format!("no standard tomography bases for dimension {dim}"))),
    }
}

/// `Tr[ρ Π]` for every basis, clamped to `[0, 1]`.
pub fn born_probabilities(rho: &DensityMatrix<f64>, bases: &[MeasurementBasis]) -> Result<Vec<f64>> {
    bases
        .iter()
        .map(|b| {
            rho.matrix().ensure_same_dim(b.projector())?;
            Ok((*rho.matrix() * b.projector).trace().re.clamp(0.0, 1.0))
        })
        .collect()
}

/// Independent `Binomial(shots, p)` counts; basis `k` draws from child stream `k` of `seed`.
pub fn simulate_counts(
    bases: &[MeasurementBasis],
    probs: &[f64],
    shots: u64,
    seed: u64,
) -> Result<Vec<CountRecord>> {
    if bases.len() != probs.len() {
        return Err(Error::DimMismatch { expected: bases.len(), found: probs.len() });
    }
    if shots == 0 {
        return Err(Error::InvalidParameters("shots must be at least 1".into()));
    }
    if let Some(p) = probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::InvalidParameters(format!("probability {p} outside [0, 1]")));
    }
    bases
        .par_iter()
        .zip(probs)
        .enumerate()
        .map(|(k, (basis, &p))| {
            let dist = Binomial::new(shots, p).map_err(|e| Error::InvalidParameters(e.to_string()))?;
            let counts = dist.sample(&mut child_rng(seed, k as u64));
            Ok(CountRecord { basis_label: basis.label.clone(), counts, shots, seed })
        })
        .collect()
}

/// Counts as relative frequencies, checking that they line up with `bases`.
fn frequencies(records: &[CountRecord], bases: &[MeasurementBasis]) -> Result<(Vec<f64>, Vec<f64>)> {
    if records.len() != bases.len() {
        return Err(Error::DimMismatch { expected: bases.len(), found: records.len() });
    }
    let mut freqs = Vec::with_capacity(records.len());
    let mut weights = Vec::with_capacity(records.len());
    for (r, b) in records.iter().zip(bases) {
        if r.basis_label != b.label {
            return Err(Error::InvalidParameters(format!(
                "record label {:?} does not match basis {:?}",
                r.basis_label, b.label
            )));
        }
        if r.shots == 0 || r.counts > r.shots {
            return Err(Error::InvalidParameters(format!(
                "record {}: need 0 <= counts <= shots and shots >= 1, got {}/{}",
                r.basis_label, r.counts, r.shots
            )));
        }
        freqs.push(r.counts as f64 / r.shots as f64);
        weights.push(r.shots as f64);
    }
    Ok((freqs, weights))
}

/// Orthonormal Hermitian traceless basis (`Tr[GⱼGₖ] = δⱼₖ`).
fn traceless_basis(dim: usize) -> Vec<M> {
    let r = 0.5f64.sqrt();
    let mut out = Vec::with_capacity(dim * dim - 1);
    for j in 0..dim {
        for k in j + 1..dim {
            let mut s = M::zeros(dim);
            s[(j, k)] = C::new(r, 0.0);
            s[(k, j)] = C::new(r, 0.0);
            out.push(s);
            let mut a = M::zeros(dim);
            a[(j, k)] = C::new(0.0, -r);
            a[(k, j)] = C::new(0.0, r);
            out.push(a);
        }
    }
    for l in 1..dim {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let mut d = M::zeros(dim);
        for m in 0..l {
            d[(m, m)] = C::new(norm, 0.0);
        }
        d[(l, l)] = C::new(-(l as f64) * norm, 0.0);
        out.push(d);
    }
    out
}

/// Output of linear inversion; positivity is not enforced.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearEstimate {
    pub matrix: M,
    pub min_eigenvalue: f64,
}

impl LinearEstimate {
    pub fn is_positive(&self) -> bool {
        self.min_eigenvalue >= -1e-12
    }
}

/// Least-squares unit-trace Hermitian solution of `Tr[ρΠ] = counts/shots`.
pub fn linear_inversion(records: &[CountRecord], bases: &[MeasurementBasis]) -> Result<LinearEstimate> {
    let (freqs, _) = frequencies(records, bases)?;
    linear_inversion_frequencies(&freqs, bases)
}

/// [`linear_inversion`] on exact or estimated probabilities.
pub fn linear_inversion_frequencies(freqs: &[f64], bases: &[MeasurementBasis]) -> Result<LinearEstimate> {
    let dim = common_dim(bases)?;
    if freqs.len() != bases.len() {
        return Err(Error::DimMismatch { expected: bases.len(), found: freqs.len() });
    }
    let gens = traceless_basis(dim);
    let a = DMatrix::from_fn(bases.len(), gens.len(), |i, k| (*bases[i].projector() * gens[k]).trace().re);
    let b = DVector::from_iterator(
        bases.len(),
        freqs.iter().zip(bases).map(|(f, basis)| f - basis.projector().trace().re / dim as f64),
    );
    let svd = a.svd(true, true);
    let smax = svd.singular_values.max();
    if svd.rank(1e-10 * smax.max(1.0)) < gens.len() {
        return Err(Error::NotInformationallyComplete);
    }
    let r = svd.solve(&b, 1e-10 * smax).map_err(|e| Error::InvalidMatrix(e.to_string()))?;
    let mut rho = M::identity(dim).scale_real(1.0 / dim as f64);
    for (g, x) in gens.iter().zip(r.iter()) {
        rho = rho + g.scale_real(*x);
    }
    let rho = rho.hermitian_part();
    let min_eigenvalue = eigvalsh(&rho)[0];
    Ok(LinearEstimate { matrix: rho, min_eigenvalue })
}

fn common_dim(bases: &[MeasurementBasis]) -> Result<usize> {
    let first = bases.first().ok_or(Error::NotInformationallyComplete)?;
    let dim = first.projector.dim();
    for b in bases {
        first.projector.ensure_same_dim(&b.projector)?;
    }
    Ok(dim)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MleOptions {
    pub max_iter: usize,
    /// Stop once the per-photon log-likelihood gain of an iteration falls below this;
    /// zero runs until the likelihood stops improving numerically.
    pub tol: f64,
    /// Initial weight of the likelihood operator in `(1 + εR) ρ (1 + εR)`.
    pub dilution: f64,
    /// Smallest dilution tried before giving up on a likelihood decrease.
    pub min_dilution: f64,
    /// Accepted steps grow the dilution by 1.5 up to this cap.
    pub max_dilution: f64,
}

impl Default for MleOptions {
    fn default() -> Self {
        Self { max_iter: 10_000, tol: 1e-10, dilution: 0.1, min_dilution: 1e-12, max_dilution: 1e3 }
    }
}

/// Result of a maximum-likelihood run.
#[derive(Debug, Clone, PartialEq)]
pub struct MleFit {
    pub state: DensityMatrix<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Per-photon log-likelihood after each accepted iteration, starting from the initial state.
    pub log_likelihood: Vec<f64>,
}

/// Maximum-likelihood density matrix for the recorded counts.
pub fn mle_reconstruct(
    records: &[CountRecord],
    bases: &[MeasurementBasis],
    options: &MleOptions,
) -> Result<DensityMatrix<f64>> {
    mle_fit(records, bases, options).map(|f| f.state)
}

/// [`mle_reconstruct`] with its convergence history.
pub fn mle_fit(records: &[CountRecord], bases: &[MeasurementBasis], options: &MleOptions) -> Result<MleFit> {
    let (freqs, weights) = frequencies(records, bases)?;
    if records.iter().all(|r| r.counts == 0) {
        return Err(Error::MleFailed("all counts are zero".into()));
    }
    mle_fit_weighted(&freqs, &weights, bases, options)
}

/// Maximum-likelihood fit treating `freqs` as exact outcome frequencies of equally weighted bases.
pub fn mle_fit_frequencies(freqs: &[f64], bases: &[MeasurementBasis], options: &MleOptions) -> Result<MleFit> {
    if freqs.len() != bases.len() {
        return Err(Error::DimMismatch { expected: bases.len(), found: freqs.len() });
    }
    if let Some(f) = freqs.iter().find(|f| !(0.0..=1.0).contains(*f)) {
        return Err(Error::InvalidParameters(format!("frequency {f} outside [0, 1]")));
    }
    if freqs.iter().all(|&f| f == 0.0) {
        return Err(Error::MleFailed("all frequencies are zero".into()));
    }
    mle_fit_weighted(freqs, &vec![1.0; freqs.len()], bases, options)
}

fn mle_fit_weighted(freqs: &[f64], weights: &[f64], bases: &[MeasurementBasis], options: &MleOptions) -> Result<MleFit> {
    let dim = common_dim(bases)?;
    // completeness is required for a unique maximum
    linear_inversion_frequencies(freqs, bases)?;
    let total: f64 = weights.iter().sum();
    let ident = M::identity(dim);

    let log_likelihood = |rho: &M| -> f64 {
        let mut ll = 0.0;
        for ((b, &f), &w) in bases.iter().zip(freqs).zip(weights) {
            let p = (*rho * b.projector).trace().re;
            if f > 0.0 {
                ll += w * f * p.ln();
            }
            if f < 1.0 {
                ll += w * (1.0 - f) * (1.0 - p).ln();
            }
        }
        ll / total
    };
    let likelihood_operator = |rho: &M| -> M {
        let mut r = M::zeros(dim);
        for ((b, &f), &w) in bases.iter().zip(freqs).zip(weights) {
            let p = (*rho * b.projector).trace().re;
            let click = if f > 0.0 { f / p } else { 0.0 };
            let miss = if f < 1.0 { (1.0 - f) / (1.0 - p) } else { 0.0 };
            r = r + b.projector.scale_real(w * (click - miss)) + ident.scale_real(w * miss);
        }
        r.scale_real(1.0 / total)
    };

    let mut rho = ident.scale_real(1.0 / dim as f64);
    let mut ll = log_likelihood(&rho);
    let mut history = vec![ll];
    let mut eps = options.dilution;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < options.max_iter {
        let r = likelihood_operator(&rho);
        let step = ident + r.scale_real(eps);
        let next = step * rho * step;
        let next = next.scale_real(1.0 / next.trace().re).hermitian_part();
        let next_ll = log_likelihood(&next);
        // changes at rounding level are stalls, not decreases
        let slack = 8.0 * f64::EPSILON * ll.abs();
        if !next_ll.is_finite() || next_ll < ll - slack {
            eps *= 0.5;
            if eps < options.min_dilution {
                return Err(Error::MleFailed(format!(
                    "log-likelihood decreased at iteration {iterations} below dilution floor"
                )));
            }
            continue;
        }
        iterations += 1;
        eps = (eps * 1.5).min(options.max_dilution);
        let gain = next_ll - ll;
        if gain <= 0.0 {
            converged = true;
            break;
        }
        rho = next;
        ll = next_ll;
        history.push(ll);
        if gain < options.tol {
            converged = true;
            break;
        }
    }
    let state = DensityMatrix::normalized(rho)?;
    Ok(MleFit { state, iterations, converged, log_likelihood: history })
}

/// CSV with header `basis_label,counts,shots,seed`.
pub fn records_to_csv(records: &[CountRecord]) -> String {
    let mut out = String::from("basis_label,counts,shots,seed\n");
    for r in records {
        let _ = writeln!(out, "{},{},{},{}", r.basis_label, r.counts, r.shots, r.seed);
    }
    out
}

pub fn records_from_csv(text: &str) -> Result<Vec<CountRecord>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next().map(str::trim) {
        Some("basis_label,counts,shots,seed") => {}
        other => return Err(Error::InvalidParameters(format!("unexpected count header {other:?}"))),
    }
    lines
        .map(|line| {
            let cols: Vec<&str> = line.trim().split(',').collect();
            let num = |s: &str| {
                s.parse::<u64>()
                    .map_err(|_| Error::InvalidParameters(format!("bad integer {s:?} in {line:?}")))
            };
            match cols.as_slice() {
                [label, counts, shots, seed] => Ok(CountRecord {
                    basis_label: label.to_string(),
                    counts: num(counts)?,
                    shots: num(shots)?,
                    seed: num(seed)?,
                }),
                _ => Err(Error::InvalidParameters(format!("expected 4 columns in {line:?}"))),
            }
        })
        .collect()
}
