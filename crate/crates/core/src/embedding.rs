//! Hermitian two-qubit dilation of the PT-symmetric qubit.
//!
//! The ancilla is the left tensor factor with basis `{|u⟩, |d⟩}`; `|u⟩`
//! plays the role of the post-selected ancilla state. Two-qubit amplitudes
//! are ordered `|u,H⟩, |u,V⟩, |d,H⟩, |d,V⟩`.

use num_complex::Complex;
use rayon::prelude::*;

use crate::dynamics::TimeSeries;
use crate::error::{Error, Result};
use crate::models::{build_hamiltonian, metric_eta, normalization_c, HamiltonianSpec};
use crate::qcore::{
    mat_exp, partial_trace, pauli, trace_distance, von_neumann_entropy, ComplexMatrix, DensityMatrix, Keep,
    StateVector,
};
use crate::scalar::Real;

/// Post-selection needs the `|u⟩` block norm above this.
pub const MIN_POSTSELECT_NORM: f64 = 1e-150;

/// Largest tolerated total-state entropy for a pure two-qubit state.
pub const PURE_ENTROPY_TOL: f64 = 1e-8;

/// Normalized two-qubit state of ancilla and system.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedState<T> {
    psi: StateVector<T>,
}

impl<T: Real> EmbeddedState<T> {
    pub fn new(psi: StateVector<T>) -> Result<Self> {
        if psi.dim() != 4 {
            return Err(Error::DimMismatch { expected: 4, found: psi.dim() });
        }
        if !psi.is_normalized() {
            return Err(Error::InvalidState(format!("embedded state norm {} is not 1", psi.norm())));
        }
        Ok(Self { psi })
    }

    pub fn state(&self) -> &StateVector<T> {
        &self.psi
    }

    pub fn density(&self) -> DensityMatrix<T> {
        DensityMatrix::pure(&self.psi)
    }

    /// Reduced state of the system qubit.
    pub fn system(&self) -> Result<DensityMatrix<T>> {
        partial_trace(&self.density(), Keep::System)
    }

    /// Reduced state of the ancilla qubit.
    pub fn ancilla(&self) -> Result<DensityMatrix<T>> {
        partial_trace(&self.density(), Keep::Ancilla)
    }
}

/// `1ᵃ⊗H_s + σᵃ_y⊗V_s` with `H_s = (H_PT η⁻¹ + η H_PT)/c` and
/// `V_s = i(H_PT − H_PT†)/c`.
pub fn build_h_tot<T: Real>(a: T) -> Result<ComplexMatrix<T>> {
    let eta = metric_eta(a)?;
    let c = normalization_c(a)?;
    let h_pt = build_hamiltonian(&HamiltonianSpec::pt(a)?)?;
    let inv_c = T::one() / c;
    let h_s = (h_pt * eta.inverse()? + eta * h_pt).scale_real(inv_c);
    let v_s = (h_pt - h_pt.adjoint()).scale(Complex::new(T::zero(), inv_c));
    let h_tot = pauli::identity::<T>().kron(&h_s)? + pauli::sigma_y::<T>().kron(&v_s)?;
    Ok(h_tot.hermitian_part())
}

/// `(|u⟩⊗χ + |d⟩⊗ηχ)` normalized.
pub fn embed_initial<T: Real>(chi: &StateVector<T>, a: T) -> Result<EmbeddedState<T>> {
    if chi.dim() != 2 {
        return Err(Error::DimMismatch { expected: 2, found: chi.dim() });
    }
    let eta = metric_eta(a)?;
    let chi = chi.normalized();
    let lower = eta.mul_vec(chi.amps());
    let amps: Vec<Complex<T>> = chi.amps().iter().chain(lower.iter()).copied().collect();
    EmbeddedState::new(StateVector::normalized_from(amps)?)
}

/// `e^{−iH_tot t}|ψ₀⟩`.
pub fn evolve_embedded<T: Real>(a: T, psi0: &EmbeddedState<T>, t: T) -> Result<EmbeddedState<T>> {
    let u = mat_exp(&build_h_tot(a)?, t)?;
    propagate(&u, psi0)
}

fn propagate<T: Real>(u: &ComplexMatrix<T>, psi0: &EmbeddedState<T>) -> Result<EmbeddedState<T>> {
    let psi = psi0.psi.apply(u)?;
    // unitary up to roundoff; renormalize so drift never accumulates
    EmbeddedState::new(psi.normalized())
}

/// System state conditioned on finding the ancilla in `|u⟩`.
pub fn postselect_pt<T: Real>(psi: &EmbeddedState<T>) -> Result<DensityMatrix<T>> {
    let upper = &psi.psi.amps()[..2];
    let norm = upper.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
    if !(norm > T::lit(MIN_POSTSELECT_NORM)) {
        return Err(Error::PostselectionImpossible { norm: norm.as_f64() });
    }
    Ok(DensityMatrix::pure(&StateVector::new(upper.to_vec())?))
}

/// Mixed-state post-selection: `Tr_a[(|u⟩⟨u|⊗1) ρ (|u⟩⟨u|⊗1)†]` normalized.
pub fn postselect_pt_mixed<T: Real>(rho_tot: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
    if rho_tot.dim() != 4 {
        return Err(Error::DimMismatch { expected: 4, found: rho_tot.dim() });
    }
    let up = ComplexMatrix::<T>::diagonal(&[Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::zero())]);
    let proj = up.kron(&pauli::identity())?;
    let projected = proj * *rho_tot.matrix() * proj.adjoint();
    let weight = projected.trace().re;
    if !(weight > T::lit(MIN_POSTSELECT_NORM * MIN_POSTSELECT_NORM)) {
        return Err(Error::PostselectionImpossible { norm: weight.max(T::zero()).sqrt().as_f64() });
    }
    let reduced = ComplexMatrix::from_fn(2, |j, k| projected[(j, k)]);
    DensityMatrix::normalized(reduced)
}

/// The dilated evolution at every grid point.
pub fn embedded_trajectory(a: f64, chi: &StateVector<f64>, grid: &[f64]) -> Result<Vec<EmbeddedState<f64>>> {
    let h = build_h_tot(a)?;
    let psi0 = embed_initial(chi, a)?;
    grid.par_iter()
        .map(|&t| propagate(&mat_exp(&h, t)?, &psi0))
        .collect()
}

/// System-ancilla entanglement entropy `Sˢ(t)` (base-2 logarithm).
pub fn entanglement_entropy_series(a: f64, chi: &StateVector<f64>, grid: &[f64]) -> Result<TimeSeries> {
    let values = embedded_trajectory(a, chi, grid)?
        .iter()
        .map(|s| s.system().map(|r| von_neumann_entropy(&r)))
        .collect::<Result<Vec<f64>>>()?;
    TimeSeries::new(grid.to_vec(), values, format!("S_s[a={a}]"))
}

/// Quantum mutual information `Sˢ + Sᵃ − Sᵗᵒᵗ` (base-2 logarithm).
pub fn mutual_information_series(a: f64, chi: &StateVector<f64>, grid: &[f64]) -> Result<TimeSeries> {
    let values = embedded_trajectory(a, chi, grid)?
        .iter()
        .map(mutual_information)
        .collect::<Result<Vec<f64>>>()?;
    TimeSeries::new(grid.to_vec(), values, format!("I[a={a}]"))
}

fn mutual_information(state: &EmbeddedState<f64>) -> Result<f64> {
    let s_sys = von_neumann_entropy(&state.system()?);
    let s_anc = von_neumann_entropy(&state.ancilla()?);
    let s_tot = von_neumann_entropy(&state.density());
    debug_assert!(s_tot < PURE_ENTROPY_TOL, "total state entropy {s_tot} for a pure state");
    Ok(s_sys + s_anc - s_tot)
}

/// Distinguishability of the post-selected states grown from `chi1` and `chi2`.
pub fn postselected_distinguishability_series(
    a: f64,
    chi1: &StateVector<f64>,
    chi2: &StateVector<f64>,
    grid: &[f64],
) -> Result<TimeSeries> {
    let first = embedded_trajectory(a, chi1, grid)?;
    let second = embedded_trajectory(a, chi2, grid)?;
    let values = first
        .iter()
        .zip(&second)
        .map(|(x, y)| trace_distance(&postselect_pt(x)?, &postselect_pt(y)?))
        .collect::<Result<Vec<f64>>>()?;
    TimeSeries::new(grid.to_vec(), values, format!("D_post[a={a}]"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{evolve, uniform_grid};

    type S = StateVector<f64>;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn hermitian_limit_decouples() {
        let h = build_h_tot(0.0).unwrap();
        let expect = pauli::identity::<f64>().kron(&pauli::sigma_x()).unwrap();
        assert!(h.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn coupling_at_half() {
        let a = 0.5;
        let h = build_h_tot(a).unwrap();
        assert!(h.hermiticity_residual() < 1e-12);
        let c_norm = normalization_c(a).unwrap();
        let h_pt = build_hamiltonian(&HamiltonianSpec::pt(a).unwrap()).unwrap();
        let v_s = (h_pt - h_pt.adjoint()).scale(c(0.0, 1.0 / c_norm));
        // H_PT − H_PT† = 2ia σz, so V_s = −(2a/c) σz
        let expect = pauli::sigma_z::<f64>().scale_real(-2.0 * a / c_norm);
        assert!(v_s.max_abs_diff(&expect) < 1e-15);
        assert!((2.0 * a / c_norm - 0.4330).abs() < 1e-4);
        assert!(matches!(build_h_tot(1.0), Err(Error::MetricUndefined { .. })));
    }

    #[test]
    fn embed_examples() {
        let psi = embed_initial(&S::basis(2, 0), 0.0).unwrap();
        let r = 0.5f64.sqrt();
        let expect = [c(r, 0.0), c(0.0, 0.0), c(r, 0.0), c(0.0, 0.0)];
        assert!(psi.state().amps().iter().zip(&expect).all(|(x, y)| (x - y).norm() < 1e-15));

        let psi = embed_initial(&S::basis(2, 0), 0.5).unwrap();
        let raw = [c(1.0, 0.0), c(0.0, 0.0), c(1.0 / 0.75f64.sqrt(), 0.0), c(0.0, 0.5 / 0.75f64.sqrt())];
        let n = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(psi.state().amps().iter().zip(&raw).all(|(x, y)| (x - y / n).norm() < 1e-15));
        assert!((psi.state().norm() - 1.0).abs() < 1e-12);
        assert!(embed_initial(&S::basis(2, 0), 1.2).is_err());
    }

    #[test]
    fn evolution_examples() {
        let psi0 = embed_initial(&S::basis(2, 1), 0.5).unwrap();
        let same = evolve_embedded(0.5, &psi0, 0.0).unwrap();
        assert!(same.state().amps().iter().zip(psi0.state().amps()).all(|(x, y)| (x - y).norm() < 1e-15));
        let u = mat_exp(&build_h_tot(0.5).unwrap(), 0.7).unwrap();
        let raw = psi0.state().apply(&u).unwrap();
        assert!((raw.norm() - 1.0).abs() < 1e-10);

        let p0 = embed_initial(&S::basis(2, 0), 0.0).unwrap();
        let anc0 = p0.ancilla().unwrap();
        for &t in &[0.4, 1.3, 5.0] {
            let anc = evolve_embedded(0.0, &p0, t).unwrap().ancilla().unwrap();
            assert!(anc.matrix().max_abs_diff(anc0.matrix()) < 1e-12);
        }
    }

    #[test]
    fn postselection_examples() {
        let uh = EmbeddedState::new(S::basis(4, 0)).unwrap();
        let rho = postselect_pt(&uh).unwrap();
        assert!(rho.matrix().max_abs_diff(DensityMatrix::pure(&S::basis(2, 0)).matrix()) < 1e-15);
        let dv = EmbeddedState::new(S::basis(4, 3)).unwrap();
        assert!(matches!(postselect_pt(&dv), Err(Error::PostselectionImpossible { .. })));
        assert!(matches!(postselect_pt_mixed(&dv.density()), Err(Error::PostselectionImpossible { .. })));
    }

    #[test]
    fn dilation_reproduces_direct_evolution() {
        let a = 0.5;
        let spec = HamiltonianSpec::pt(a).unwrap();
        let chi = S::basis(2, 0);
        let psi0 = embed_initial(&chi, a).unwrap();
        for &t in &[0.3, 1.1, 2.9] {
            let psi = evolve_embedded(a, &psi0, t).unwrap();
            let post = postselect_pt(&psi).unwrap();
            let mixed = postselect_pt_mixed(&psi.density()).unwrap();
            let direct = evolve(&spec, &DensityMatrix::pure(&chi), t).unwrap();
            assert!(trace_distance(&post, &direct).unwrap() < 1e-10, "t = {t}");
            assert!(trace_distance(&mixed, &direct).unwrap() < 1e-10, "t = {t}");
        }
    }

    #[test]
    fn entropy_and_information() {
        let grid = uniform_grid(0.0, 8.0, 40);
        let s0 = entanglement_entropy_series(0.0, &S::basis(2, 0), &grid).unwrap();
        let base = s0.values()[0];
        assert!(s0.values().iter().all(|s| (s - base).abs() < 1e-12));

        let s = entanglement_entropy_series(0.5, &S::basis(2, 0), &grid).unwrap();
        assert!(s.values().iter().all(|v| (0.0..=1.0).contains(v)));
        let i = mutual_information_series(0.5, &S::basis(2, 0), &grid).unwrap();
        for (si, ii) in s.values().iter().zip(i.values()) {
            assert!((ii - 2.0 * si).abs() < 1e-8);
        }
        let i0 = mutual_information_series(0.0, &S::basis(2, 1), &grid).unwrap();
        assert!(i0.values().iter().all(|v| (v - i0.values()[0]).abs() < 1e-12));
    }
}
