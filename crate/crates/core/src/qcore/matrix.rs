use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest supported dimension; storage is inline so matrices are `Copy`.
pub const MAX_DIM: usize = 4;

/// Dense square complex matrix of dimension 2 or 4, stored row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMatrix<T> {
    dim: usize,
    data: [Complex<T>; MAX_DIM * MAX_DIM],
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 4 {
        Ok(())
    } else {
        Err(Error::InvalidMatrix(format!("unsupported dimension {dim}, expected 2 or 4")))
    }
}

impl<T: Real> ComplexMatrix<T> {
    /// Zero matrix. Panics unless `dim` is 2 or 4.
    pub fn zeros(dim: usize) -> Self {
        assert!(dim == 2 || dim == 4, "ComplexMatrix dimension must be 2 or 4, got {dim}");
        Self {
            dim,
            data: [Complex::new(T::zero(), T::zero()); MAX_DIM * MAX_DIM],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    /// Builds a matrix from row-major entries; `entries.len()` must be `dim²`.
    pub fn from_row_major(dim: usize, entries: &[Complex<T>]) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries for dimension {dim}, got {}",
                dim * dim,
                entries.len()
            )));
        }
        let mut m = Self::zeros(dim);
        m.data[..dim * dim].copy_from_slice(entries);
        Ok(m)
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows2(rows: [[Complex<T>; 2]; 2]) -> Self {
        Self::from_fn(2, |i, j| rows[i][j])
    }

    pub fn from_rows4(rows: [[Complex<T>; 4]; 4]) -> Self {
        Self::from_fn(4, |i, j| rows[i][j])
    }

    pub fn diagonal(values: &[Complex<T>]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    /// Outer product `|u⟩⟨v|`.
    pub fn outer(u: &[Complex<T>], v: &[Complex<T>]) -> Self {
        assert_eq!(u.len(), v.len());
        Self::from_fn(u.len(), |i, j| u[i] * v[j].conj())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major view of the `dim²` live entries.
    #[inline]
    pub fn entries(&self) -> &[Complex<T>] {
        &self.data[..self.dim * self.dim]
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn ensure_finite(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidMatrix("non-finite entry".into()))
        }
    }

    pub fn ensure_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(Error::DimMismatch { expected: self.dim, found: other.dim })
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        let mut out = *self;
        for z in out.data[..self.dim * self.dim].iter_mut() {
            *z = f(*z);
        }
        out
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.map(|z| z * s)
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).fold(Complex::new(T::zero(), T::zero()), |acc, i| acc + self[(i, i)])
    }

    /// `(M + M†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let half = T::lit(0.5);
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * half)
    }

    /// Largest entrywise modulus of `M − M†`.
    pub fn hermiticity_residual(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.entries()
            .iter()
            .zip(other.entries())
            .fold(T::zero(), |m, (a, b)| m.max((*a - *b).norm()))
    }

    pub fn max_abs(&self) -> T {
        self.entries().iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    pub fn frobenius_norm(&self) -> T {
        self.entries()
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
            .sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> T {
        (0..self.dim)
            .map(|j| (0..self.dim).fold(T::zero(), |acc, i| acc + self[(i, j)].norm()))
            .fold(T::zero(), T::max)
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> T {
        let gram = self.adjoint() * *self;
        let (values, _) = super::eigen::eigh(&gram);
        values.iter().fold(T::zero(), |m, v| m.max(*v)).max(T::zero()).sqrt()
    }

    /// Max entrywise deviation of `M†M` from the identity.
    pub fn unitarity_residual(&self) -> T {
        (self.adjoint() * *self).max_abs_diff(&Self::identity(self.dim))
    }

    pub fn mul_vec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| (0..self.dim).fold(Complex::new(T::zero(), T::zero()), |acc, j| acc + self[(i, j)] * v[j]))
            .collect()
    }

    /// Kronecker product of two 2×2 matrices; `self` is the left (ancilla) factor.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        if self.dim != 2 || other.dim != 2 {
            return Err(Error::DimMismatch { expected: 2, found: self.dim.max(other.dim) });
        }
        Ok(Self::from_fn(4, |i, j| self[(i / 2, j / 2)] * other[(i % 2, j % 2)]))
    }

    /// `diag(upper, lower)` for the ancilla basis `{|u⟩, |d⟩}`.
    pub fn block_diag(upper: &Self, lower: &Self) -> Result<Self> {
        if upper.dim != 2 || lower.dim != 2 {
            return Err(Error::DimMismatch { expected: 2, found: upper.dim.max(lower.dim) });
        }
        Ok(Self::from_fn(4, |i, j| match (i / 2, j / 2) {
            (0, 0) => upper[(i, j)],
            (1, 1) => lower[(i - 2, j - 2)],
            _ => Complex::new(T::zero(), T::zero()),
        }))
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.dim;
        let mut a = *self;
        let mut inv = Self::identity(n);
        let scale = self.max_abs().max(T::min_positive_value());
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[(x, col)].norm().partial_cmp(&a[(y, col)].norm()).unwrap())
                .unwrap();
            if a[(pivot, col)].norm() <= scale * T::epsilon() {
                return Err(Error::InvalidMatrix("singular matrix".into()));
            }
            if pivot != col {
                for j in 0..n {
                    let tmp = a[(col, j)];
                    a[(col, j)] = a[(pivot, j)];
                    a[(pivot, j)] = tmp;
                    let tmp = inv[(col, j)];
                    inv[(col, j)] = inv[(pivot, j)];
                    inv[(pivot, j)] = tmp;
                }
            }
            let p = a[(col, col)].inv();
            for j in 0..n {
                a[(col, j)] = a[(col, j)] * p;
                inv[(col, j)] = inv[(col, j)] * p;
            }
            for i in 0..n {
                if i != col {
                    let f = a[(i, col)];
                    if f.norm() != T::zero() {
                        for j in 0..n {
                            a[(i, j)] = a[(i, j)] - f * a[(col, j)];
                            inv[(i, j)] = inv[(i, j)] - f * inv[(col, j)];
                        }
                    }
                }
            }
        }
        Ok(inv)
    }

    /// Converts to another scalar precision.
    pub fn cast<U: Real>(&self) -> ComplexMatrix<U> {
        ComplexMatrix::<U>::from_fn(self.dim, |i, j| {
            let z = self[(i, j)];
            Complex::new(U::lit(z.re.as_f64()), U::lit(z.im.as_f64()))
        })
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        debug_assert!(i < self.dim && j < self.dim);
        &self.data[i * self.dim + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        debug_assert!(i < self.dim && j < self.dim);
        &mut self.data[i * self.dim + j]
    }
}

impl<T: Real> Add for ComplexMatrix<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in add");
        let mut out = self;
        for (a, b) in out.data.iter_mut().zip(rhs.data.iter()) {
            *a = *a + *b;
        }
        out
    }
}

impl<T: Real> Sub for ComplexMatrix<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sub");
        let mut out = self;
        for (a, b) in out.data.iter_mut().zip(rhs.data.iter()) {
            *a = *a - *b;
        }
        out
    }
}

impl<T: Real> Neg for ComplexMatrix<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|z| -z)
    }
}

impl<T: Real> Mul for ComplexMatrix<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in mul");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] = out[(i, j)] + a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl<T: fmt::Debug> fmt::Debug for ComplexMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for row in self.data[..self.dim * self.dim].chunks(self.dim) {
            list.entry(&row);
        }
        list.finish()
    }
}

/// Pauli operators and the identity.
pub mod pauli {
    use super::*;

    fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
        Complex::new(T::lit(re), T::lit(im))
    }

    pub fn identity<T: Real>() -> ComplexMatrix<T> {
        ComplexMatrix::identity(2)
    }

    pub fn sigma_x<T: Real>() -> ComplexMatrix<T> {
        ComplexMatrix::from_rows2([[c(0., 0.), c(1., 0.)], [c(1., 0.), c(0., 0.)]])
    }

    pub fn sigma_y<T: Real>() -> ComplexMatrix<T> {
        ComplexMatrix::from_rows2([[c(0., 0.), c(0., -1.)], [c(0., 1.), c(0., 0.)]])
    }

    pub fn sigma_z<T: Real>() -> ComplexMatrix<T> {
        ComplexMatrix::from_rows2([[c(1., 0.), c(0., 0.)], [c(0., 0.), c(-1., 0.)]])
    }
}

#[cfg(test)]
mod tests {
    use super::pauli::*;
    use super::*;

    type M = ComplexMatrix<f64>;

    #[test]
    fn rejects_bad_dimensions() {
        let e = M::from_row_major(3, &[Complex::new(0.0, 0.0); 9]).unwrap_err();
        assert!(matches!(e, Error::InvalidMatrix(_)));
        let e = M::from_row_major(2, &[Complex::new(0.0, 0.0); 3]).unwrap_err();
        assert!(matches!(e, Error::InvalidMatrix(_)));
    }

    #[test]
    fn pauli_algebra() {
        let (x, y, z) = (sigma_x::<f64>(), sigma_y::<f64>(), sigma_z::<f64>());
        let i = Complex::new(0.0, 1.0);
        assert!((x * y).max_abs_diff(&z.scale(i)) < 1e-15);
        assert!((x * x).max_abs_diff(&M::identity(2)) < 1e-15);
        assert_eq!(y.hermiticity_residual(), 0.0);
    }

    #[test]
    fn kron_orders_left_factor_as_outer_index() {
        let k = sigma_x::<f64>().kron(&sigma_z()).unwrap();
        // ⟨u,H| σx⊗σz |d,H⟩ = 1, ⟨u,V| σx⊗σz |d,V⟩ = −1
        assert_eq!(k[(0, 2)], Complex::new(1.0, 0.0));
        assert_eq!(k[(1, 3)], Complex::new(-1.0, 0.0));
        assert_eq!(k[(0, 1)], Complex::new(0.0, 0.0));
    }

    #[test]
    fn inverse_round_trip() {
        let m = M::from_rows2([
            [Complex::new(1.0, 2.0), Complex::new(0.5, -1.0)],
            [Complex::new(-0.3, 0.0), Complex::new(2.0, 0.7)],
        ]);
        let inv = m.inverse().unwrap();
        assert!((m * inv).max_abs_diff(&M::identity(2)) < 1e-14);
        assert!(M::zeros(2).inverse().is_err());
    }

    #[test]
    fn spectral_norm_of_scaled_unitary() {
        let h = (sigma_x::<f64>() + sigma_z()).scale_real(0.5f64.sqrt());
        assert!((h.scale_real(0.3).spectral_norm() - 0.3).abs() < 1e-14);
    }
}
