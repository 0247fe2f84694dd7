use num_complex::Complex;

use super::eigen::eigh;
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Hermitian, positive-semidefinite, unit-trace matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix<T> {
    mat: ComplexMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates `mat` as-is.
    pub fn new(mat: ComplexMatrix<T>) -> Result<Self> {
        let tol = T::structural_tol();
        if !mat.is_finite() {
            return Err(Error::InvalidDensity("non-finite entry".into()));
        }
        let herm = mat.hermiticity_residual();
        if herm > tol {
            return Err(Error::InvalidDensity(format!("not Hermitian: residual {herm}")));
        }
        let tr = mat.trace();
        if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidDensity(format!("trace {tr} differs from 1")));
        }
        let min = eigh(&mat).0[0];
        if min < -tol {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min}")));
        }
        Ok(Self { mat })
    }

    /// Symmetrizes `(M + M†)/2` before validation; use for matrices produced
    /// by arithmetic that are Hermitian up to roundoff.
    pub fn from_arithmetic(mat: ComplexMatrix<T>) -> Result<Self> {
        Self::new(mat.hermitian_part())
    }

    /// Symmetrizes and divides by the trace, then validates.
    pub fn normalized(mat: ComplexMatrix<T>) -> Result<Self> {
        let tr = mat.trace().re;
        if !(tr > T::zero()) {
            return Err(Error::InvalidDensity(format!("trace {tr} is not positive")));
        }
        Self::from_arithmetic(mat.scale_real(T::one() / tr))
    }

    /// `|ψ⟩⟨ψ|` for a state normalized on the fly.
    pub fn pure(psi: &StateVector<T>) -> Self {
        let amps = psi.normalized().amps;
        Self { mat: ComplexMatrix::outer(&amps, &amps).hermitian_part() }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            mat: ComplexMatrix::identity(dim).scale_real(T::one() / T::from_usize(dim).unwrap()),
        }
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.mat
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    /// Eigenvalues ascending, with values in `[−tol, 0)` clipped to zero.
    pub fn eigenvalues(&self) -> Vec<T> {
        eigh(&self.mat).0.into_iter().map(|v| v.max(T::zero())).collect()
    }

    pub fn purity(&self) -> T {
        (self.mat * self.mat).trace().re
    }

    /// `UρU†`.
    pub fn conjugate_by(&self, u: &ComplexMatrix<T>) -> Result<Self> {
        self.mat.ensure_same_dim(u)?;
        Self::normalized(*u * self.mat * u.adjoint())
    }
}

/// Complex amplitude vector of dimension 2 or 4.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    amps: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    /// Accepts any nonzero finite vector of dimension 2 or 4 without normalizing.
    pub fn new(amps: Vec<Complex<T>>) -> Result<Self> {
        if amps.len() != 2 && amps.len() != 4 {
            return Err(Error::InvalidState(format!("unsupported dimension {}", amps.len())));
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState("non-finite amplitude".into()));
        }
        let s = Self { amps };
        if s.norm() == T::zero() {
            return Err(Error::InvalidState("zero vector".into()));
        }
        Ok(s)
    }

    /// Builds and normalizes.
    pub fn normalized_from(amps: Vec<Complex<T>>) -> Result<Self> {
        Self::new(amps).map(|s| s.normalized())
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::normalized_from(amps.iter().map(|&x| Complex::new(T::lit(x), T::zero())).collect())
    }

    /// Computational basis vector `|k⟩`.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!((dim == 2 || dim == 4) && k < dim);
        let mut amps = vec![Complex::new(T::zero(), T::zero()); dim];
        amps[k] = Complex::new(T::one(), T::zero());
        Self { amps }
    }

    #[inline]
    pub fn amps(&self) -> &[Complex<T>] {
        &self.amps
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm(&self) -> T {
        self.amps.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - T::one()).abs() <= T::structural_tol()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        Self { amps: self.amps.iter().map(|z| z / n).collect() }
    }

    pub fn apply(&self, m: &ComplexMatrix<T>) -> Result<Self> {
        if m.dim() != self.dim() {
            return Err(Error::DimMismatch { expected: self.dim(), found: m.dim() });
        }
        Ok(Self { amps: m.mul_vec(&self.amps) })
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.amps
            .iter()
            .zip(&other.amps)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type D = DensityMatrix<f64>;
    type M = ComplexMatrix<f64>;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn validation_rejects_each_violation() {
        let non_herm = M::from_rows2([[c(0.5, 0.0), c(0.1, 0.0)], [c(0.0, 0.0), c(0.5, 0.0)]]);
        assert!(matches!(D::new(non_herm), Err(Error::InvalidDensity(_))));
        let bad_trace = M::diagonal(&[c(0.6, 0.0), c(0.6, 0.0)]);
        assert!(D::new(bad_trace).is_err());
        let negative = M::diagonal(&[c(1.2, 0.0), c(-0.2, 0.0)]);
        assert!(D::new(negative).is_err());
    }

    #[test]
    fn tiny_negative_eigenvalues_are_clipped() {
        let m = M::diagonal(&[c(1.0 + 5e-11, 0.0), c(-5e-11, 0.0)]);
        let d = D::new(m).unwrap();
        assert_eq!(d.eigenvalues()[0], 0.0);
    }

    #[test]
    fn from_arithmetic_absorbs_roundoff() {
        let mut m = M::diagonal(&[c(0.5, 0.0), c(0.5, 0.0)]);
        m[(0, 1)] = c(0.1, 1e-11);
        m[(1, 0)] = c(0.1 + 3e-11, 0.0);
        assert!(D::from_arithmetic(m).is_ok());
    }

    #[test]
    fn state_vector_checks() {
        assert!(StateVector::<f64>::new(vec![c(0.0, 0.0); 3]).is_err());
        assert!(StateVector::<f64>::new(vec![c(0.0, 0.0); 2]).is_err());
        let s = StateVector::<f64>::from_real(&[3.0, 4.0]).unwrap();
        assert!(s.is_normalized());
        assert!((s.amps()[1].re - 0.8).abs() < 1e-15);
    }
}
