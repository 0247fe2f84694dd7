//! Complex linear algebra for qubit and two-qubit operators.

mod eigen;
mod expm;
mod matrix;
mod measures;
mod state;

pub use eigen::{eig2, eigh, eigvalsh, Eigen2};
pub use expm::{expm_taylor, mat_exp, mat_exp_with_path, ExpPath, MAX_EIGEN_CONDITION};
pub use matrix::{pauli, ComplexMatrix, MAX_DIM};
pub use measures::{fidelity, partial_trace, trace_distance, von_neumann_entropy, Keep, ENTROPY_CUTOFF};
pub use state::{DensityMatrix, StateVector};
