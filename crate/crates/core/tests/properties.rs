mod common;

use proptest::prelude::*;

use common::Augmented;
use galois_ext::fixtures;
use galois_ext::format::{parse_alg, write_alg};
use galois_ext::graded::{AlgebraPresentation, Arrow, Relation, RelationTerm};
use galois_ext::homological::{Ext, Resolution};
use galois_ext::hopf::HopfAlgebra;
use galois_ext::linalg::{Field, Matrix};

fn field() -> impl Strategy<Value = Field> {
    prop_oneof![
        Just(Field::Rationals),
        Just(Field::prime(3).unwrap()),
        Just(Field::prime(5).unwrap()),
        Just(Field::prime(7).unwrap()),
    ]
}

/// Random quivers with homogeneous quadratic relations.
fn presentation() -> impl Strategy<Value = AlgebraPresentation> {
    (1usize..=3, proptest::collection::vec((0usize..3, 0usize..3), 1..6)).prop_flat_map(|(nv, ends)| {
        let arrows: Vec<Arrow> = ends
            .iter()
            .enumerate()
            .map(|(i, &(s, t))| Arrow {
                name: format!("a{i}"),
                src: s % nv,
                tgt: t % nv,
                degree: 1,
            })
            .collect();
        let pairs: Vec<(usize, usize)> = (0..arrows.len())
            .flat_map(|i| (0..arrows.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| arrows[i].tgt == arrows[j].src)
            .collect();
        let term = (-5i64..=5, 1i64..=4, 0..pairs.len().max(1));
        let relations = if pairs.is_empty() {
            Just(Vec::new()).boxed()
        } else {
            proptest::collection::vec(proptest::collection::vec(term, 1..4), 0..3).boxed()
        };
        (Just(nv), Just(arrows), Just(pairs), relations)
    })
    .prop_map(|(nv, arrows, pairs, relations)| AlgebraPresentation {
        vertices: (0..nv).map(|v| format!("v{v}")).collect(),
        arrows,
        relations: relations
            .into_iter()
            .map(|terms| Relation {
                terms: terms
                    .into_iter()
                    .filter(|&(num, _, _)| num != 0)
                    .map(|(num, den, k)| RelationTerm {
                        num,
                        den,
                        path: vec![pairs[k].0, pairs[k].1],
                        vertex: None,
                    })
                    .collect(),
            })
            .filter(|r| !r.terms.is_empty())
            .collect(),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn alg_format_roundtrip(p in presentation()) {
        let text = write_alg(&p, None, None);
        let back = parse_alg(&text).unwrap();
        prop_assert_eq!(back.presentation, p);
        prop_assert!(back.hopf.is_none());
    }

    #[test]
    fn group_algebras_and_duals_are_hopf(n in 1usize..=5, f in field()) {
        let h = HopfAlgebra::cyclic_group(n, f);
        prop_assert!(h.verify_axioms().passed());
        prop_assert!(h.dual().verify_axioms().passed());
    }

    #[test]
    fn perturbed_antipode_fails(n in 2usize..=4, f in field(), i in 0usize..4, j in 0usize..4, c in 1i64..4) {
        let h = HopfAlgebra::cyclic_group(n, f);
        let (i, j) = (i % n, j % n);
        let mut s = h.antipode().clone();
        s.add_at(i, j, &f.int(c));
        prop_assume!(s != *h.antipode());
        let r = h.with_antipode(s).unwrap().verify_axioms();
        prop_assert!(!r.check("antipode").unwrap().passed);
    }

    #[test]
    fn group_algebra_is_galois(n in 1usize..=4) {
        let fx = fixtures::group_algebra(n, Field::Rationals).unwrap();
        let gd = fx.galois();
        prop_assert!(gd.galois_degrees().iter().all(|g| g.bijective()));
        prop_assert!(gd.verify_translation_identities().passed());
    }

    #[test]
    fn truncated_polynomial_ext_matches_bar_complex(m in 2usize..=4, f in field()) {
        let d_max = 2 * m + 2;
        let a = AlgebraPresentation::truncated_polynomial(m).realize(f, d_max).unwrap();
        let k = a.degree_zero_module();
        let res = Resolution::new(&a, &k, 4).unwrap();
        let ext = Ext::compute(&res, &k, 3, 0, d_max as i64).unwrap();
        let bar = Augmented::truncated(m);
        for n in 0..=3 {
            for d in 0..=d_max {
                prop_assert_eq!(ext.dim(n, d as i64), Some(bar.tor(f, n, d)));
            }
        }
    }

    #[test]
    fn identity_is_never_an_antipode_of_a_nontrivial_group(n in 3usize..=5) {
        let h = HopfAlgebra::cyclic_group(n, Field::Rationals);
        let r = h.with_antipode(Matrix::identity(Field::Rationals, n)).unwrap().verify_axioms();
        prop_assert!(!r.passed());
    }
}
