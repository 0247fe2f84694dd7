#![allow(dead_code)]

use ptdyn::{Complex, Density, Matrix, State, C64};

/// Row-major complex matrix from interleaved re/im pairs.
pub fn matrix_from(dim: usize, xs: &[f64]) -> Matrix {
    let entries: Vec<C64> = xs.chunks(2).take(dim * dim).map(|p| Complex::new(p[0], p[1])).collect();
    Matrix::from_row_major(dim, &entries).unwrap()
}

/// `G G† / Tr` for a Ginibre-like `G` built from `xs`.
pub fn density_from(dim: usize, xs: &[f64]) -> Density {
    let g = matrix_from(dim, xs);
    let m = g * g.adjoint() + Matrix::identity(dim).scale_real(1e-9);
    Density::normalized(m).unwrap()
}

/// Unitary `e^{-iK}` with `K` the Hermitian part of the matrix built from `xs`.
pub fn unitary_from(dim: usize, xs: &[f64]) -> Matrix {
    ptdyn::qcore::mat_exp(&matrix_from(dim, xs).hermitian_part(), 1.0).unwrap()
}

pub fn ket(re: &[f64], im: &[f64]) -> State {
    let amps = re.iter().zip(im).map(|(&r, &i)| Complex::new(r, i)).collect();
    State::normalized_from(amps).unwrap()
}

pub fn pure(re: &[f64], im: &[f64]) -> Density {
    Density::pure(&ket(re, im))
}
