mod common;

use common::{density_from, matrix_from, unitary_from};
use proptest::prelude::*;
use ptdyn::qcore::{mat_exp, partial_trace, trace_distance, von_neumann_entropy, Keep};
use ptdyn::{Density, Matrix};

fn entries(dim: usize, range: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-range..range, 2 * dim * dim)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn exponential_group_law(xs in entries(2, 2.0), t1 in 0.0..3.0f64, t2 in 0.0..3.0f64) {
        let h = matrix_from(2, &xs);
        let lhs = mat_exp(&h, t1 + t2).unwrap();
        let rhs = mat_exp(&h, t1).unwrap() * mat_exp(&h, t2).unwrap();
        let scale = lhs.max_abs().max(1.0);
        prop_assert!(lhs.max_abs_diff(&rhs) / scale < 1e-10);
    }

    #[test]
    fn hermitian_generators_give_unitaries(xs in entries(4, 2.0), t in -5.0..5.0f64) {
        let h = matrix_from(4, &xs).hermitian_part();
        prop_assert!(mat_exp(&h, t).unwrap().unitarity_residual() < 1e-10);
    }

    #[test]
    fn trace_distance_is_a_metric(a in entries(2, 1.0), b in entries(2, 1.0), c in entries(2, 1.0)) {
        let (r, s, u) = (density_from(2, &a), density_from(2, &b), density_from(2, &c));
        let d_rs = trace_distance(&r, &s).unwrap();
        prop_assert!((0.0..=1.0).contains(&d_rs));
        prop_assert!((d_rs - trace_distance(&s, &r).unwrap()).abs() < 1e-14);
        prop_assert!(trace_distance(&r, &r).unwrap() < 1e-12);
        prop_assert!(d_rs <= trace_distance(&r, &u).unwrap() + trace_distance(&u, &s).unwrap() + 1e-12);
    }

    #[test]
    fn trace_distance_is_unitarily_invariant(a in entries(4, 1.0), b in entries(4, 1.0), k in entries(4, 1.5)) {
        let (r, s) = (density_from(4, &a), density_from(4, &b));
        let u = unitary_from(4, &k);
        let d = trace_distance(&r, &s).unwrap();
        let du = trace_distance(&r.conjugate_by(&u).unwrap(), &s.conjugate_by(&u).unwrap()).unwrap();
        prop_assert!((d - du).abs() < 1e-10);
    }

    #[test]
    fn partial_trace_of_product(a in entries(2, 1.0), b in entries(2, 1.0), wa in 0.1..3.0f64) {
        let ga = matrix_from(2, &a);
        let gb = matrix_from(2, &b);
        let pa = (ga * ga.adjoint()).scale_real(wa);
        let pb = gb * gb.adjoint();
        let prod = pa.kron(&pb).unwrap();
        let tr = prod.trace().re;
        let rho = Density::normalized(prod).unwrap();
        let sys = partial_trace(&rho, Keep::System).unwrap();
        let expect = pb.scale_real(pa.trace().re / tr);
        prop_assert!(sys.matrix().max_abs_diff(&expect) < 1e-12);
        let anc = partial_trace(&rho, Keep::Ancilla).unwrap();
        prop_assert!(anc.matrix().max_abs_diff(&pa.scale_real(pb.trace().re / tr)) < 1e-12);
    }

    #[test]
    fn entropy_is_unitarily_invariant(a in entries(4, 1.0), k in entries(4, 1.5)) {
        let r = density_from(4, &a);
        let u = unitary_from(4, &k);
        let s = von_neumann_entropy(&r);
        prop_assert!((s - von_neumann_entropy(&r.conjugate_by(&u).unwrap())).abs() < 1e-10);
        prop_assert!((-1e-12..=2.0 + 1e-12).contains(&s));
    }
}

#[test]
fn maximally_mixed_has_maximal_entropy() {
    assert!((von_neumann_entropy(&Density::maximally_mixed(4)) - 2.0).abs() < 1e-12);
    assert!(Matrix::identity(2).unitarity_residual() == 0.0);
}
