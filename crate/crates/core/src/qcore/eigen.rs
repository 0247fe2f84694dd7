//! Small dense eigensolvers.
//!
//! `eigh` is a cyclic complex Jacobi sweep; for the 2×2 and 4×4 matrices used
//! here it converges in a handful of sweeps to full working precision. `eig2`
//! handles the general (non-normal) 2×2 case in closed form and reports the
//! eigenvector condition number, which is what the exponential uses to decide
//! whether diagonalization is trustworthy.

use num_complex::Complex;

use super::matrix::ComplexMatrix;
use crate::scalar::Real;

const MAX_SWEEPS: usize = 64;

/// Eigen-decomposition of the Hermitian part of `m`.
///
/// Returns eigenvalues in ascending order and a unitary matrix whose columns
/// are the corresponding eigenvectors.
pub fn eigh<T: Real>(m: &ComplexMatrix<T>) -> (Vec<T>, ComplexMatrix<T>) {
    let n = m.dim();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let zero = Complex::new(T::zero(), T::zero());

    for _ in 0..MAX_SWEEPS {
        let off: T = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .fold(T::zero(), |acc, (i, j)| acc + a[(i, j)].norm_sqr());
        let diag: T = (0..n).fold(T::zero(), |acc, i| acc + a[(i, i)].norm_sqr());
        if off <= T::epsilon() * T::epsilon() * (diag + off) || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let beta = apq.norm();
                if beta == T::zero() {
                    continue;
                }
                let phase = apq / beta;
                let alpha = a[(p, p)].re;
                let gamma = a[(q, q)].re;
                let theta = (gamma - alpha) / (T::lit(2.0) * beta);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                // J = D·R with D = diag(1, e^{-iφ}) on (p, q)
                let mut j = ComplexMatrix::identity(n);
                j[(p, p)] = Complex::new(c, T::zero());
                j[(p, q)] = Complex::new(s, T::zero());
                j[(q, p)] = -phase.conj() * s;
                j[(q, q)] = phase.conj() * c;
                a = j.adjoint() * a * j;
                a[(p, q)] = zero;
                a[(q, p)] = zero;
                v = v * j;
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(x, x)].re.partial_cmp(&a[(y, y)].re).unwrap());
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, |i, k| v[(i, order[k])]);
    (values, vectors)
}

/// Eigenvalues only, ascending.
pub fn eigvalsh<T: Real>(m: &ComplexMatrix<T>) -> Vec<T> {
    eigh(m).0
}

/// General eigen-decomposition of a 2×2 matrix.
#[derive(Debug, Clone, Copy)]
pub struct Eigen2<T> {
    pub values: [Complex<T>; 2],
    /// Columns are unit-norm eigenvectors.
    pub vectors: ComplexMatrix<T>,
    pub inverse: ComplexMatrix<T>,
    /// Frobenius condition number `‖V‖_F ‖V⁻¹‖_F`, an upper bound on κ₂.
    pub condition: T,
}

/// Returns `None` when the eigenvector matrix is numerically singular
/// (defective input such as a nilpotent Jordan block).
pub fn eig2<T: Real>(m: &ComplexMatrix<T>) -> Option<Eigen2<T>> {
    assert_eq!(m.dim(), 2, "eig2 requires a 2x2 matrix");
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let half = T::lit(0.5);
    let mean = (a + d) * half;
    let hd = (a - d) * half;
    let disc = (hd * hd + b * c).sqrt();
    let values = [mean + disc, mean - disc];

    let mut vectors = ComplexMatrix::zeros(2);
    for (k, lambda) in values.iter().enumerate() {
        // both (b, λ−a) and (λ−d, c) solve (M − λ)v = 0; pick the better scaled one
        let v1 = [b, *lambda - a];
        let v2 = [*lambda - d, c];
        let n1 = (v1[0].norm_sqr() + v1[1].norm_sqr()).sqrt();
        let n2 = (v2[0].norm_sqr() + v2[1].norm_sqr()).sqrt();
        let (v, n) = if n1 >= n2 { (v1, n1) } else { (v2, n2) };
        if n == T::zero() {
            // M is a multiple of the identity in this direction
            vectors[(k, k)] = Complex::new(T::one(), T::zero());
            continue;
        }
        vectors[(0, k)] = v[0] / n;
        vectors[(1, k)] = v[1] / n;
    }
    let inverse = vectors.inverse().ok()?;
    let condition = vectors.frobenius_norm() * inverse.frobenius_norm();
    if !condition.is_finite() {
        return None;
    }
    Some(Eigen2 { values, vectors, inverse, condition })
}
