//! Hamiltonian families, the metric operator and the regime classifier.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::qcore::{eigvalsh, pauli, ComplexMatrix};
use crate::scalar::Real;

/// Half-width of the exceptional-point band on `a`.
pub const EP_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `σx + iaσz`, balanced gain and loss.
    PT,
    /// `σx + ia(σz − 1)`, loss only.
    PassivePT,
    /// `σx + iaσy`.
    TimeReversal,
    /// `σx + (c + ia)σz`.
    NoSymmetry,
    /// Hermitian two-qubit dilation of the PT family; see [`crate::embedding`].
    Embedded,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::PT => "pt",
            Family::PassivePT => "passive-pt",
            Family::TimeReversal => "t",
            Family::NoSymmetry => "nosym",
            Family::Embedded => "embedded",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pt" => Ok(Family::PT),
            "passive-pt" | "passive" | "eff" => Ok(Family::PassivePT),
            "t" | "time-reversal" | "tr" => Ok(Family::TimeReversal),
            "nosym" | "no-symmetry" | "none" => Ok(Family::NoSymmetry),
            "embedded" => Ok(Family::Embedded),
            other => Err(Error::InvalidParameters(format!("unknown Hamiltonian family '{other}'"))),
        }
    }
}

/// Which Hamiltonian is in play and its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HamiltonianSpec<T> {
    family: Family,
    a: T,
    c: T,
}

impl<T: Real> HamiltonianSpec<T> {
    /// `c` is ignored (stored as zero) unless the family is `NoSymmetry`.
    pub fn new(family: Family, a: T, c: T) -> Result<Self> {
        if !a.is_finite() || a < T::zero() {
            return Err(Error::InvalidParameters(format!("a must be finite and >= 0, got {a}")));
        }
        if !c.is_finite() {
            return Err(Error::InvalidParameters(format!("c must be finite, got {c}")));
        }
        let c = if family == Family::NoSymmetry { c } else { T::zero() };
        Ok(Self { family, a, c })
    }

    pub fn pt(a: T) -> Result<Self> {
        Self::new(Family::PT, a, T::zero())
    }

    pub fn passive_pt(a: T) -> Result<Self> {
        Self::new(Family::PassivePT, a, T::zero())
    }

    pub fn time_reversal(a: T) -> Result<Self> {
        Self::new(Family::TimeReversal, a, T::zero())
    }

    pub fn no_symmetry(a: T, c: T) -> Result<Self> {
        Self::new(Family::NoSymmetry, a, c)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn c(&self) -> T {
        self.c
    }
}

/// The 2×2 non-Hermitian Hamiltonian for `spec`.
pub fn build_hamiltonian<T: Real>(spec: &HamiltonianSpec<T>) -> Result<ComplexMatrix<T>> {
    let i_a = Complex::new(T::zero(), spec.a);
    let sx = pauli::sigma_x::<T>();
    let h = match spec.family {
        Family::PT => sx + pauli::sigma_z().scale(i_a),
        Family::PassivePT => sx + (pauli::sigma_z() - pauli::identity()).scale(i_a),
        Family::TimeReversal => sx + pauli::sigma_y().scale(i_a),
        Family::NoSymmetry => sx + pauli::sigma_z().scale(Complex::new(spec.c, spec.a)),
        Family::Embedded => return Err(Error::UnsupportedFamily(Family::Embedded.to_string())),
    };
    Ok(h)
}

fn check_metric_domain<T: Real>(a: T) -> Result<()> {
    if a.is_finite() && a >= T::zero() && a < T::one() {
        Ok(())
    } else {
        Err(Error::MetricUndefined { a: a.as_f64() })
    }
}

/// Metric operator `η = (1/√(1−a²)) [[1, −ia], [ia, 1]]` with `ηH_PT = H_PT†η`.
pub fn metric_eta<T: Real>(a: T) -> Result<ComplexMatrix<T>> {
    check_metric_domain(a)?;
    let s = T::one() / (T::one() - a * a).sqrt();
    let one = Complex::new(s, T::zero());
    Ok(ComplexMatrix::from_rows2([
        [one, Complex::new(T::zero(), -a * s)],
        [Complex::new(T::zero(), a * s), one],
    ]))
}

/// `Σⱼ 1/λⱼ` over the eigenvalues of the metric, from a numeric eigensolve.
pub fn normalization_c<T: Real>(a: T) -> Result<T> {
    let eta = metric_eta(a)?;
    Ok(eigvalsh(&eta).into_iter().fold(T::zero(), |acc, l| acc + T::one() / l))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeKind {
    Unbroken,
    ExceptionalPoint,
    Broken,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regime<T> {
    pub kind: RegimeKind,
    /// `ε = 1 − a`.
    pub epsilon: T,
}

pub fn classify_regime<T: Real>(a: T) -> Regime<T> {
    let epsilon = T::one() - a;
    let tol = T::lit(EP_TOLERANCE);
    let kind = if epsilon > tol {
        RegimeKind::Unbroken
    } else if epsilon < -tol {
        RegimeKind::Broken
    } else {
        RegimeKind::ExceptionalPoint
    };
    Regime { kind, epsilon }
}

/// Max entrywise modulus of `ηH − H†η`.
pub fn check_pseudo_hermiticity<T: Real>(h: &ComplexMatrix<T>, eta: &ComplexMatrix<T>) -> Result<T> {
    h.ensure_same_dim(eta)?;
    Ok((*eta * *h).max_abs_diff(&(h.adjoint() * *eta)))
}

/// Recurrence time `π/√(1−a²)` of the distinguishability in the unbroken regime.
pub fn recurrence_time<T: Real>(a: T) -> Option<T> {
    (a >= T::zero() && a < T::one()).then(|| T::PI() / (T::one() - a * a).sqrt())
}

/// Relaxation time `1/(2√(a²−1))` in the broken regime.
pub fn relaxation_time<T: Real>(a: T) -> Option<T> {
    (a > T::one()).then(|| T::one() / (T::lit(2.0) * (a * a - T::one()).sqrt()))
}
