//! Normalized non-unitary evolution and the distinguishability of evolved states.

mod fit;

pub use fit::{
    default_power_law_window, default_relaxation_window, fit_power_law_exponent, fit_recurrence_time,
    fit_relaxation_time, FitResult, FOURIER_HARMONICS,
};

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::models::{build_hamiltonian, classify_regime, Family, HamiltonianSpec, RegimeKind};
use crate::qcore::{mat_exp, trace_distance, DensityMatrix};
use crate::scalar::Real;

/// Default number of samples in generated time grids.
pub const DEFAULT_POINTS: usize = 512;

/// Evolved traces at or below this are treated as annihilated.
pub const MIN_TRACE: f64 = 1e-300;

/// Ordered `(t, value)` samples.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    times: Vec<f64>,
    values: Vec<f64>,
    label: String,
}

impl TimeSeries {
    pub fn new(times: Vec<f64>, values: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::InvalidSeries(format!(
                "{} times but {} values",
                times.len(),
                values.len()
            )));
        }
        if times.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidSeries("non-finite time".into()));
        }
        if let Some(w) = times.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::InvalidSeries(format!("times not strictly increasing at {}", w[1])));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidSeries(format!("non-finite value {v}")));
        }
        Ok(Self { times, values, label: label.into() })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.times.iter().copied().zip(self.values.iter().copied())
    }

    /// `(first, last)` time.
    pub fn span(&self) -> Option<(f64, f64)> {
        Some((*self.times.first()?, *self.times.last()?))
    }

    /// Pointwise transform of the values, keeping the grid.
    pub fn map_values(&self, label: impl Into<String>, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.times.clone(), self.values.iter().map(|&v| f(v)).collect(), label)
    }
}

/// `n` uniformly spaced times on `[t0, t1]`.
pub fn uniform_grid(t0: f64, t1: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![t0],
        _ => (0..n).map(|k| t0 + (t1 - t0) * k as f64 / (n - 1) as f64).collect(),
    }
}

/// `n` logarithmically spaced times on `[t0, t1]`, `t0 > 0`.
pub fn log_grid(t0: f64, t1: f64, n: usize) -> Vec<f64> {
    let (l0, l1) = (t0.ln(), t1.ln());
    uniform_grid(l0, l1, n).into_iter().map(f64::exp).collect()
}

/// Grid suited to the regime of `spec`: four recurrence periods when
/// unbroken, `[0, 8τ]` when broken, logarithmic over `[0.1, 200]` at the
/// exceptional point. The no-symmetry family uses `[0, 10]`.
pub fn default_grid(spec: &HamiltonianSpec<f64>, points: usize) -> Vec<f64> {
    if spec.family() == Family::NoSymmetry {
        return uniform_grid(0.0, 10.0, points);
    }
    let a = spec.a();
    match classify_regime(a).kind {
        RegimeKind::Unbroken => uniform_grid(0.0, 4.0 * crate::models::recurrence_time(a).unwrap(), points),
        RegimeKind::Broken => uniform_grid(0.0, 8.0 * crate::models::relaxation_time(a).unwrap(), points),
        RegimeKind::ExceptionalPoint => log_grid(0.1, 200.0, points),
    }
}

/// `e^{−iHt} ρ₀ e^{iH†t}` divided by its trace.
///
/// The PT and passive-PT families give identical states: the latter only
/// adds a scalar decay that the normalization removes.
pub fn evolve<T: Real>(spec: &HamiltonianSpec<T>, rho0: &DensityMatrix<T>, t: T) -> Result<DensityMatrix<T>> {
    if !(t >= T::zero()) || !t.is_finite() {
        return Err(Error::InvalidParameters(format!("evolution time must be finite and >= 0, got {t}")));
    }
    let h = build_hamiltonian(spec)?;
    rho0.matrix().ensure_same_dim(&h)?;
    let u = mat_exp(&h, t)?;
    let m = u * *rho0.matrix() * u.adjoint();
    let tr = m.trace().re;
    if !(tr > T::lit(MIN_TRACE)) || !tr.is_finite() {
        return Err(Error::StateAnnihilated { t: t.as_f64() });
    }
    DensityMatrix::from_arithmetic(m.scale(Complex::new(T::one() / tr, T::zero())))
}

/// `D[ρ₁(t), ρ₂(t)]` at every grid point.
pub fn distinguishability_series(
    spec: &HamiltonianSpec<f64>,
    rho1: &DensityMatrix<f64>,
    rho2: &DensityMatrix<f64>,
    grid: &[f64],
) -> Result<TimeSeries> {
    let values = grid
        .par_iter()
        .map(|&t| trace_distance(&evolve(spec, rho1, t)?, &evolve(spec, rho2, t)?))
        .collect::<Result<Vec<f64>>>()?;
    TimeSeries::new(grid.to_vec(), values, format!("D[{}, a={}]", spec.family(), spec.a()))
}
