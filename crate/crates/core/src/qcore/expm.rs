//! Propagators `e^{−iHt}` for small dense, possibly defective, generators.

use num_complex::Complex;

use super::eigen::{eig2, eigh};
use super::matrix::ComplexMatrix;
use crate::error::Result;
use crate::scalar::Real;

/// Eigenvector condition number above which diagonalization is abandoned.
pub const MAX_EIGEN_CONDITION: f64 = 1e6;

const MAX_TAYLOR_TERMS: usize = 60;

/// Which algorithm produced a propagator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpPath {
    /// Unitary diagonalization of a Hermitian generator.
    Hermitian,
    /// Diagonalization of a well-conditioned non-normal 2×2 generator.
    Eigen,
    /// Scaling and squaring with a truncated Taylor series.
    Taylor,
}

/// `e^{−iHt}`.
pub fn mat_exp<T: Real>(h: &ComplexMatrix<T>, t: T) -> Result<ComplexMatrix<T>> {
    mat_exp_with_path(h, t).map(|(u, _)| u)
}

/// Same as [`mat_exp`], also reporting which path was taken.
pub fn mat_exp_with_path<T: Real>(h: &ComplexMatrix<T>, t: T) -> Result<(ComplexMatrix<T>, ExpPath)> {
    h.ensure_finite()?;
    if !t.is_finite() {
        return Err(crate::Error::InvalidMatrix(format!("non-finite time {t}")));
    }
    let minus_i_t = Complex::new(T::zero(), -t);

    let scale = h.max_abs().max(T::one());
    if h.hermiticity_residual() <= T::lit(64.0) * T::epsilon() * scale {
        let (values, vectors) = eigh(h);
        let phases: Vec<Complex<T>> = values.iter().map(|&e| (minus_i_t * e).exp()).collect();
        let u = vectors * ComplexMatrix::diagonal(&phases) * vectors.adjoint();
        return Ok((u, ExpPath::Hermitian));
    }

    if h.dim() == 2 {
        if let Some(e) = eig2(h) {
            if e.condition < T::lit(MAX_EIGEN_CONDITION) {
                let phases: Vec<Complex<T>> = e.values.iter().map(|&l| (minus_i_t * l).exp()).collect();
                let u = e.vectors * ComplexMatrix::diagonal(&phases) * e.inverse;
                return Ok((u, ExpPath::Eigen));
            }
        }
    }

    Ok((expm_taylor(&h.scale(minus_i_t)), ExpPath::Taylor))
}

/// `e^{A}` by scaling and squaring with a Taylor series summed to working
/// precision. Exact in exact arithmetic for nilpotent `A`.
pub fn expm_taylor<T: Real>(a: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let norm = a.norm_1();
    let mut squarings = 0u32;
    if norm > T::lit(0.5) {
        squarings = (norm / T::lit(0.5)).log2().ceil().to_u32().unwrap_or(0);
    }
    let b = a.scale_real(T::lit(0.5).powi(squarings as i32));

    let mut sum = ComplexMatrix::identity(a.dim());
    let mut term = sum;
    for k in 1..=MAX_TAYLOR_TERMS {
        term = (term * b).scale_real(T::one() / T::from_usize(k).unwrap());
        sum = sum + term;
        if term.max_abs() <= T::epsilon() * T::lit(1e-2) * sum.max_abs() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::matrix::pauli::*;

    type M = ComplexMatrix<f64>;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    /// Independent oracle: plain Taylor series on the step `A/2^k`, with `k`
    /// increased until the squared-up result stops changing.
    fn oracle_exp(a: &M) -> M {
        let taylor20 = |b: &M| {
            let mut sum = M::identity(b.dim());
            let mut term = sum;
            for k in 1..=20 {
                term = (term * *b).scale_real(1.0 / k as f64);
                sum = sum + term;
            }
            sum
        };
        let mut prev: Option<M> = None;
        for k in 2..30 {
            let mut r = taylor20(&a.scale_real(0.5f64.powi(k)));
            for _ in 0..k {
                r = r * r;
            }
            if let Some(p) = prev {
                if p.max_abs_diff(&r) < 1e-15 {
                    return r;
                }
            }
            prev = Some(r);
        }
        prev.unwrap()
    }

    #[test]
    fn pauli_x_closed_form() {
        for &t in &[0.0, 0.3, 1.7, -2.2, 10.0] {
            let (u, path) = mat_exp_with_path(&sigma_x::<f64>(), t).unwrap();
            assert_eq!(path, ExpPath::Hermitian);
            let expect = M::from_rows2([[c(t.cos(), 0.0), c(0.0, -t.sin())], [c(0.0, -t.sin()), c(t.cos(), 0.0)]]);
            assert!(u.max_abs_diff(&expect) < 1e-14, "t = {t}");
        }
    }

    #[test]
    fn exceptional_point_truncates() {
        let h = sigma_x::<f64>() + sigma_z().scale(c(0.0, 1.0));
        for &t in &[0.5, 3.0, 50.0, 200.0] {
            let (u, path) = mat_exp_with_path(&h, t).unwrap();
            assert_eq!(path, ExpPath::Taylor);
            let expect = M::identity(2) - h.scale(c(0.0, t));
            let err = (u - expect).spectral_norm() / expect.spectral_norm();
            assert!(err < 1e-12, "t = {t}: relative error {err}");
        }
    }

    #[test]
    fn pt_unbroken_matches_taylor_oracle() {
        let h = sigma_x::<f64>() + sigma_z().scale(c(0.0, 0.5));
        let (u, path) = mat_exp_with_path(&h, 1.0).unwrap();
        assert_eq!(path, ExpPath::Eigen);
        let o = oracle_exp(&h.scale(c(0.0, -1.0)));
        let err = (u - o).spectral_norm() / o.spectral_norm();
        assert!(err < 1e-12, "relative error {err}");
    }

    #[test]
    fn taylor_and_eigen_paths_agree_in_broken_regime() {
        let h = sigma_x::<f64>() + sigma_z().scale(c(0.0, 1.5));
        let u = mat_exp(&h, 2.0).unwrap();
        let o = expm_taylor(&h.scale(c(0.0, -2.0)));
        assert!((u - o).spectral_norm() / o.spectral_norm() < 1e-12);
    }

    #[test]
    fn rejects_non_finite() {
        let mut h = sigma_x::<f64>();
        h[(0, 0)] = c(f64::NAN, 0.0);
        assert!(matches!(mat_exp(&h, 1.0), Err(crate::Error::InvalidMatrix(_))));
        assert!(mat_exp(&sigma_x::<f64>(), f64::INFINITY).is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let u = mat_exp(&sigma_x::<f32>(), 0.7f32).unwrap();
        assert!((u[(0, 0)].re - 0.7f32.cos()).abs() < 1e-6);
        assert!(u.unitarity_residual() < 1e-5);
    }
}
