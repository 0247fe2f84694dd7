//! Simulation of parity-time-symmetric non-unitary qubit dynamics.
//!
//! The crate covers the whole chain from Hamiltonian construction to
//! observables: normalized non-unitary evolution and the distinguishability of
//! evolved states, critical-scaling extractors near the exceptional point, the
//! Hermitian two-qubit dilation with post-selection, synthesis of wave-plate
//! settings realizing a target operator, and simulated photon-counting
//! tomography.
//!
//! The linear-algebra core ([`qcore`]) and the Hamiltonian constructors
//! ([`models`]) are generic over [`Real`]; everything downstream runs in
//! `f64`, and the aliases below name the common concrete types.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod embedding;
mod error;
pub mod models;
pub mod optics;
pub mod qcore;
pub mod rng;
mod scalar;
pub mod tomography;

pub use error::{Error, Result};
pub use scalar::Real;

pub use num_complex::Complex;

pub type C64 = Complex<f64>;
pub type Matrix = qcore::ComplexMatrix<f64>;
pub type Density = qcore::DensityMatrix<f64>;
pub type State = qcore::StateVector<f64>;
pub type Spec = models::HamiltonianSpec<f64>;

pub type Matrix32 = qcore::ComplexMatrix<f32>;
pub type Density32 = qcore::DensityMatrix<f32>;
pub type State32 = qcore::StateVector<f32>;
