use num_complex::Complex;

use super::eigen::eigh;
use super::matrix::ComplexMatrix;
use super::state::DensityMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Entropy cutoff: eigenvalues at or below this contribute nothing.
pub const ENTROPY_CUTOFF: f64 = 1e-12;

/// `½ Tr|ρ₁ − ρ₂|`, computed from the eigenvalues of the Hermitian difference.
pub fn trace_distance<T: Real>(rho1: &DensityMatrix<T>, rho2: &DensityMatrix<T>) -> Result<T> {
    rho1.matrix().ensure_same_dim(rho2.matrix())?;
    let diff = *rho1.matrix() - *rho2.matrix();
    let sum = eigh(&diff).0.iter().fold(T::zero(), |acc, v| acc + v.abs());
    Ok((sum * T::lit(0.5)).min(T::one()))
}

/// `−Σ λ log₂ λ`.
pub fn von_neumann_entropy<T: Real>(rho: &DensityMatrix<T>) -> T {
    let cutoff = T::lit(ENTROPY_CUTOFF);
    rho.eigenvalues()
        .into_iter()
        .filter(|&l| l > cutoff)
        .fold(T::zero(), |acc, l| acc - l * l.log2())
        .max(T::zero())
}

/// Uhlmann fidelity `(Tr √(√ρ σ √ρ))²`.
pub fn fidelity<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    rho.matrix().ensure_same_dim(sigma.matrix())?;
    let sqrt_rho = psd_sqrt(rho.matrix());
    let inner = sqrt_rho * *sigma.matrix() * sqrt_rho;
    let root_trace = eigh(&inner).0.iter().fold(T::zero(), |acc, v| acc + v.max(T::zero()).sqrt());
    Ok((root_trace * root_trace).min(T::one()))
}

fn psd_sqrt<T: Real>(m: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let (values, vectors) = eigh(m);
    let roots: Vec<Complex<T>> = values.iter().map(|v| Complex::new(v.max(T::zero()).sqrt(), T::zero())).collect();
    vectors * ComplexMatrix::diagonal(&roots) * vectors.adjoint()
}

/// Subsystem retained by [`partial_trace`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keep {
    /// Trace out the ancilla (left tensor factor).
    System,
    /// Trace out the system (right tensor factor).
    Ancilla,
}

/// Reduced state of a two-qubit density matrix ordered ancilla ⊗ system,
/// i.e. basis `|u,H⟩, |u,V⟩, |d,H⟩, |d,V⟩`.
pub fn partial_trace<T: Real>(rho: &DensityMatrix<T>, keep: Keep) -> Result<DensityMatrix<T>> {
    if rho.dim() != 4 {
        return Err(Error::DimMismatch { expected: 4, found: rho.dim() });
    }
    let m = rho.matrix();
    let zero = Complex::new(T::zero(), T::zero());
    let reduced = match keep {
        Keep::System => ComplexMatrix::from_fn(2, |j, k| (0..2).fold(zero, |acc, a| acc + m[(2 * a + j, 2 * a + k)])),
        Keep::Ancilla => ComplexMatrix::from_fn(2, |a, b| (0..2).fold(zero, |acc, j| acc + m[(2 * a + j, 2 * b + j)])),
    };
    DensityMatrix::from_arithmetic(reduced)
}
