//! N-Koszulity from minimal resolutions, generation of Ext algebras in low
//! ext-degrees, and membership in `add(M)` via the trace ideal.

use serde::Serialize;

use super::resolution::Resolution;
use super::Result;
use crate::graded::{hom_graded, GradedAlgebra, GradedLinearMap, GradedModule};
use crate::linalg::{self, Echelon, Matrix, Scalar, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    True,
    False,
    /// the window is too small to decide
    Undetermined,
}

impl Verdict {
    pub fn is_true(self) -> bool {
        self == Verdict::True
    }

    pub fn is_false(self) -> bool {
        self == Verdict::False
    }
}

/// The single internal degree allowed for generators of `P_n` in an N-Koszul resolution.
pub fn delta(n: usize, big_n: usize) -> usize {
    if n % 2 == 0 {
        n / 2 * big_n
    } else {
        (n - 1) / 2 * big_n + 1
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KoszulCertificate {
    pub n_koszul: usize,
    pub n_max: usize,
    pub d_max: usize,
    pub verdict: Verdict,
    /// generator degrees of `P_n` visible in the window
    pub generator_degrees: Vec<Vec<usize>>,
    pub expected_degrees: Vec<usize>,
    /// first homological degree violating the pattern, or the first undecidable one
    pub witness: Option<usize>,
    /// hypotheses on the algebra that fail (generation in degree 1, relations in degree N)
    pub hypothesis_violations: Vec<String>,
}

/// Resolves `A_0` and compares generator degrees with `δ(n)`. Generators in
/// internal degrees above the truncation are invisible, so a homological degree
/// with `δ(n) > D_max` and no visible violation is undetermined.
pub fn is_n_koszul(a: &GradedAlgebra, big_n: usize, n_max: usize) -> Result<KoszulCertificate> {
    let res = Resolution::new(a, &a.degree_zero_module(), n_max)?;
    let top = a.top();
    let generator_degrees: Vec<Vec<usize>> = (0..=n_max).map(|n| res.generator_degrees(n)).collect();
    let expected_degrees: Vec<usize> = (0..=n_max).map(|n| delta(n, big_n)).collect();
    let mut hypothesis_violations = Vec::new();
    if n_max >= 1 && generator_degrees[1].iter().any(|&d| d != 1) {
        hypothesis_violations.push("not generated in degree 1".to_string());
    }
    if n_max >= 2 && generator_degrees[2].iter().any(|&d| d != big_n) {
        hypothesis_violations.push(format!("relations not concentrated in degree {big_n}"));
    }
    let mut verdict = Verdict::True;
    let mut witness = None;
    for n in 0..=n_max {
        if generator_degrees[n].iter().any(|&d| d != expected_degrees[n]) {
            verdict = Verdict::False;
            witness = Some(n);
            break;
        }
        if expected_degrees[n] > top && verdict == Verdict::True {
            verdict = Verdict::Undetermined;
            witness = Some(n);
        }
    }
    Ok(KoszulCertificate {
        n_koszul: big_n,
        n_max,
        d_max: top,
        verdict,
        generator_degrees,
        expected_degrees,
        witness,
        hypothesis_violations,
    })
}

/// Whether elements of degree `1..=cutoff` (with degree 0) generate `e` in every degree `<= n_max`.
pub fn generated_in_ext_degrees(e: &GradedAlgebra, cutoff: usize, n_max: usize) -> bool {
    let field = e.field();
    let n_max = n_max.min(e.top());
    let mut spans: Vec<Subspace> = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        if n <= cutoff {
            spans.push(Subspace::full(field, e.dim(n)));
            continue;
        }
        let mut ech = Echelon::new(field, e.dim(n));
        'outer: for i in 1..=cutoff {
            for x in 0..e.dim(i) {
                let xv = e.basis_vector(i, x);
                for y in spans[n - i].basis() {
                    ech.insert(e.mul(i, &xv, n - i, y).expect("in range"));
                    if ech.is_full() {
                        break 'outer;
                    }
                }
            }
        }
        let s = Subspace::from_echelon(ech);
        if s.dim() < e.dim(n) {
            return false;
        }
        spans.push(s);
    }
    true
}

/// Outcome of the trace-ideal test for `X ∈ add(M)`.
#[derive(Clone, Debug)]
pub struct AddMembership {
    pub member: bool,
    /// `id_X = Σ c · g ∘ f` with `f: X -> M(s)`, `g: M(s) -> X`
    pub witness: Vec<(Scalar, GradedLinearMap, GradedLinearMap)>,
    pub trace_ideal_dim: usize,
    pub end_dim: usize,
}

/// `X ∈ add(M)` iff `id_X` lies in the span of composites `X -> M(s) -> X`
/// over the given degree shifts.
pub fn add_membership(x: &GradedModule, m: &GradedModule, ring: &GradedAlgebra, shifts: &[i64]) -> AddMembership {
    let field = ring.field();
    let id = GradedLinearMap::identity(field, x.dims());
    let len = id.flat_len();
    let mut composites: Vec<(GradedLinearMap, GradedLinearMap)> = Vec::new();
    for &s in shifts {
        let to_m = hom_graded(x, m, ring, s);
        let from_m = hom_graded(m, x, ring, -s);
        for f in &to_m.basis {
            for g in &from_m.basis {
                composites.push((f.clone(), g.clone()));
            }
        }
    }
    let end_dim = hom_graded(x, x, ring, 0).dim();
    let flat: Vec<_> = composites.iter().map(|(f, g)| g.compose(f).flatten()).collect();
    let trace = Subspace::span(field, len, flat.iter().cloned()).expect("shape");
    let mut witness = Vec::new();
    let mut member = false;
    if !flat.is_empty() {
        let sys = Matrix::from_cols(field, len, &flat).expect("shape");
        if let Ok(Some(c)) = linalg::solve(&sys, &id.flatten()) {
            member = true;
            for (coef, (f, g)) in c.into_iter().zip(composites) {
                if !coef.is_zero() {
                    witness.push((coef, f, g));
                }
            }
        }
    } else if len == 0 {
        member = true;
    }
    AddMembership {
        member,
        witness,
        trace_ideal_dim: trace.dim(),
        end_dim,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::AlgebraPresentation;
    use crate::linalg::Field;

    const Q: Field = Field::Rationals;

    #[test]
    fn delta_values() {
        assert_eq!((0..5).map(|n| delta(n, 2)).collect::<Vec<_>>(), vec![0, 1, 2, 3, 4]);
        assert_eq!((0..5).map(|n| delta(n, 3)).collect::<Vec<_>>(), vec![0, 1, 3, 4, 6]);
    }

    #[test]
    fn polynomial_is_koszul() {
        let r = AlgebraPresentation::polynomial(&["x", "y"]).realize(Q, 5).unwrap();
        let c = is_n_koszul(&r, 2, 4).unwrap();
        assert_eq!(c.verdict, Verdict::True);
        assert!(c.hypothesis_violations.is_empty());
    }

    #[test]
    fn cubic_is_three_koszul() {
        let r = AlgebraPresentation::truncated_polynomial(3).realize(Q, 7).unwrap();
        let three = is_n_koszul(&r, 3, 4).unwrap();
        assert_eq!(three.verdict, Verdict::True);
        assert_eq!(three.generator_degrees[2..], [vec![3], vec![4], vec![6]]);
        let two = is_n_koszul(&r, 2, 4).unwrap();
        assert_eq!(two.verdict, Verdict::False);
        assert_eq!(two.witness, Some(2));
        let small = AlgebraPresentation::truncated_polynomial(3).realize(Q, 5).unwrap();
        assert_eq!(is_n_koszul(&small, 3, 4).unwrap().verdict, Verdict::Undetermined);
    }

    #[test]
    fn trivial_generation() {
        let r = AlgebraPresentation::polynomial(&["x", "y"]).realize(Q, 4).unwrap();
        assert!(generated_in_ext_degrees(&r, 1, 4));
        let c = AlgebraPresentation::truncated_polynomial(3).realize(Q, 4).unwrap();
        assert!(generated_in_ext_degrees(&c, 4, 4));
    }

    #[test]
    fn cubic_ext_generation() {
        let r = AlgebraPresentation::truncated_polynomial(3).realize(Q, 7).unwrap();
        let res = Resolution::new(&r, &r.degree_zero_module(), 5).unwrap();
        let e = super::super::ExtAlgebra::new(&res, 4, 0, 7).unwrap();
        let (alg, _) = e.ext_degree_algebra().unwrap();
        assert!(generated_in_ext_degrees(&alg, 2, 4));
        assert!(!generated_in_ext_degrees(&alg, 1, 4));
    }

    #[test]
    fn add_membership_over_group_algebra() {
        let h = crate::hopf::HopfAlgebra::cyclic_group(2, Q);
        let a = h.as_algebra();
        let reg = a.regular_module();
        let triv = GradedModule::from_fn(Q, vec![1], &a, |_, _, _| Matrix::from_i64(Q, &[vec![1]])).unwrap();
        let sign = GradedModule::from_fn(Q, vec![1], &a, |_, _, b| {
            Matrix::from_i64(Q, &[vec![if b == 0 { 1 } else { -1 }]])
        })
        .unwrap();
        assert!(add_membership(&reg, &reg, &a, &[0]).member);
        let k = add_membership(&reg, &triv, &a, &[0]);
        assert!(!k.member);
        let both = triv.direct_sum(&sign);
        let w = add_membership(&reg, &both, &a, &[0]);
        assert!(w.member);
        let mut sum = GradedLinearMap::zero(Q, 0, reg.dims(), reg.dims());
        for (c, f, g) in &w.witness {
            sum.add_scaled(c, &g.compose(f));
        }
        assert!(sum.is_identity());
    }
}
