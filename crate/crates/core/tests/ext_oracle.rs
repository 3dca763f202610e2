mod common;

use common::Augmented;
use galois_ext::fixtures;
use galois_ext::graded::{AlgebraPresentation, GradedAlgebra, GradedModule};
use galois_ext::homological::{Ext, Resolution};
use galois_ext::linalg::Field;

const Q: Field = Field::Rationals;
const N_MAX: usize = 4;

fn ext_dims(a: &GradedAlgebra, k: &GradedModule, d_max: i64) -> Ext {
    let res = Resolution::new(a, k, N_MAX + 1).unwrap();
    Ext::compute(&res, k, N_MAX, 0, d_max).unwrap()
}

fn compare_truncated(m: usize, field: Field) {
    let d_max = 3 * m;
    let a = AlgebraPresentation::truncated_polynomial(m).realize(field, d_max).unwrap();
    let k = a.degree_zero_module();
    let ext = ext_dims(&a, &k, d_max as i64);
    let bar = Augmented::truncated(m);
    for n in 0..=N_MAX {
        for d in 0..=d_max {
            assert_eq!(ext.dim(n, d as i64), Some(bar.tor(field, n, d)), "k[x]/(x^{m}), n = {n}, d = {d}");
        }
    }
}

#[test]
fn dual_numbers_match_bar_complex() {
    compare_truncated(2, Q);
}

#[test]
fn cubic_truncation_matches_bar_complex() {
    compare_truncated(3, Q);
}

#[test]
fn truncations_over_finite_fields() {
    compare_truncated(2, Field::prime(2).unwrap());
    compare_truncated(3, Field::prime(3).unwrap());
}

#[test]
fn group_algebra_matches_bar_complex() {
    let fx = fixtures::group_algebra(2, Q).unwrap();
    let k = fx.module("k").unwrap();
    let ext = ext_dims(fx.algebra(), k, 0);
    let bar = Augmented::group_z2();
    for n in 0..=N_MAX {
        assert_eq!(ext.dim(n, 0), Some(bar.tor(Q, n, 0)), "kZ_2, n = {n}");
    }
}

#[test]
fn oracle_sanity() {
    // Ext over k[x]/(x^2) is a polynomial ring on a class in (1, 1)
    let bar = Augmented::truncated(2);
    assert_eq!((0..4).map(|n| bar.tor(Q, n, n)).collect::<Vec<_>>(), vec![1, 1, 1, 1]);
    assert_eq!(bar.tor(Q, 2, 3), 0);
    assert_eq!(Augmented::group_z2().tor(Q, 1, 0), 0);
    assert_eq!(Augmented::group_z2().tor(Field::prime(2).unwrap(), 1, 0), 1);
}
