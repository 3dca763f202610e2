//! The three equivalent conditions: `M ⊗_B A ∈ add(M)`, `End_B(M)/End_A(M)`
//! Galois over `H*`, and `E/D` Galois over `H*` with `E = Ext_B(M, M)`.

use serde::Serialize;

use super::thm1::induced;
use super::{galois, module, require_hopf, ReportBuilder, Result, VerificationReport};
use crate::comodule::{comodule_from_module, galois_degrees, ComoduleAlgebra, Coinvariants, GaloisData, GaloisDegree, HAction};
use crate::fixtures::Fixture;
use crate::graded::{hom_graded, GradedAlgebra, GradedLinearMap, GradedModule};
use crate::homological::{add_membership, GaloisExt};
use crate::linalg::{self, Matrix, Vector};

/// An algebra with an `H`-action viewed as an `H*`-comodule algebra over its invariants.
pub(crate) struct GaloisCandidate {
    pub ca: ComoduleAlgebra,
    pub coinvariants: Coinvariants,
    pub degrees: Vec<GaloisDegree>,
}

impl GaloisCandidate {
    pub fn new(e: &GradedAlgebra, action: &HAction) -> Result<GaloisCandidate> {
        let ca = comodule_from_module(e, action)?;
        let coinvariants = ca.coinvariants()?;
        let degrees = galois_degrees(&ca, &coinvariants);
        Ok(GaloisCandidate { ca, coinvariants, degrees })
    }

    pub fn is_galois(&self) -> bool {
        self.degrees.iter().all(GaloisDegree::bijective)
    }

    pub fn failing_degrees(&self) -> Vec<usize> {
        self.degrees.iter().filter(|g| !g.bijective()).map(|g| g.degree).collect()
    }
}

/// `End_B(M)`, all degree shifts together, as an ungraded algebra under
/// composition with the action `(h·f)(m) = Σ f(m X^{Sh}) Y^{Sh}`.
pub(crate) fn end_b(gd: &GaloisData, m: &GradedModule) -> Result<(GradedAlgebra, HAction)> {
    let field = gd.field();
    let b = &gd.b;
    let mb = m.restrict(&b.algebra, &b.emb);
    let top = m.dims().len() as i64;
    let basis: Vec<GradedLinearMap> = (-top..=top)
        .flat_map(|s| hom_graded(&mb, &mb, &b.algebra, s).basis)
        .collect();
    let n = basis.len();
    // coordinates with respect to the whole basis, shifts kept apart
    let coords = |f: &GradedLinearMap| -> Vector {
        let mut out = field.zeros(n);
        let idx: Vec<usize> = (0..n).filter(|&i| basis[i].shift() == f.shift()).collect();
        if idx.is_empty() || f.is_zero() {
            return out;
        }
        let cols: Vec<Vector> = idx.iter().map(|&i| basis[i].flatten()).collect();
        let sys = Matrix::from_cols(field, cols[0].len(), &cols).expect("shape");
        let c = linalg::solve(&sys, &f.flatten()).expect("field").expect("closed under composition");
        for (k, &i) in idx.iter().enumerate() {
            out[i] = c[k].clone();
        }
        out
    };
    let mut mult = Matrix::zeros(field, n, n * n);
    for a in 0..n {
        for c in 0..n {
            let v = coords(&basis[a].compose(&basis[c]));
            for (r, x) in v.into_iter().enumerate() {
                mult.set(r, a * n + c, x);
            }
        }
    }
    let unit = coords(&GradedLinearMap::identity(field, m.dims()));
    let alg = GradedAlgebra::concentrated(field, &mult, unit)?;
    let hopf = gd.hopf().clone();
    let mats = vec![(0..hopf.dim())
        .map(|q| {
            let cols: Vec<Vector> = basis.iter().map(|f| coords(&gd.act_on_map(m, m, f, &hopf.basis(q)))).collect();
            Matrix::from_cols(field, n, &cols).expect("shape")
        })
        .collect()];
    Ok((alg, HAction { hopf, mats }))
}

/// `E = Ext_B(M, M)` graded by ext-degree with its `H`-action.
pub(crate) fn ext_candidate(gd: &GaloisData, m: &GradedModule, n_max: usize) -> Result<(GradedAlgebra, HAction)> {
    let ge = GaloisExt::compute(gd, m, n_max)?;
    let (e, action, _) = ge.ext_degree_algebra()?;
    Ok((e, action))
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
pub struct Thm3Verdicts {
    pub add: bool,
    pub end: bool,
    pub ext: bool,
}

impl Thm3Verdicts {
    pub fn agree(&self) -> bool {
        self.add == self.end && self.end == self.ext
    }
}

pub fn verify_thm3(fx: &Fixture, module_name: &str, n_max: usize) -> Result<VerificationReport> {
    let mut rb = ReportBuilder::new("thm3", fx, Some(module_name), n_max);
    require_hopf(&mut rb, fx, true, false);
    let gd = galois(fx)?;
    let m = module(fx, module_name)?;
    let a = gd.algebra();
    let top = a.top() as i64;

    let induced = induced(gd, m);
    let shifts: Vec<i64> = (-top..=top).collect();
    let add = add_membership(&induced.module, m, a, &shifts);
    rb.data("add_trace_ideal", (add.trace_ideal_dim, add.end_dim));

    let (end, end_action) = end_b(gd, m)?;
    let end_c = GaloisCandidate::new(&end, &end_action)?;
    rb.data("end_b_dim", end.dim(0));
    rb.data("end_a_dim", end_c.coinvariants.algebra.dim(0));
    rb.data("end_galois", &end_c.degrees);

    let (e, e_action) = ext_candidate(gd, m, n_max)?;
    let e_c = GaloisCandidate::new(&e, &e_action)?;
    rb.data("ext_b_dims", e.dims());
    rb.data("ext_a_dims", e_c.coinvariants.algebra.dims());
    rb.data("ext_galois", &e_c.degrees);

    let v = Thm3Verdicts {
        add: add.member,
        end: end_c.is_galois(),
        ext: e_c.is_galois(),
    };
    rb.data("verdicts", v);
    rb.check(
        "verdicts agree",
        v.agree(),
        (!v.agree()).then(|| format!("add(M): {}, End Galois: {}, Ext Galois: {}", v.add, v.end, v.ext)),
    );
    Ok(rb.finish())
}

/// Verdicts stored in a thm3 report.
pub fn thm3_verdicts(r: &VerificationReport) -> Option<Thm3Verdicts> {
    let v = r.data.get("verdicts")?;
    Some(Thm3Verdicts {
        add: v.get("add")?.as_bool()?,
        end: v.get("end")?.as_bool()?,
        ext: v.get("ext")?.as_bool()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::Field;

    const Q: Field = Field::Rationals;

    fn run(name: &str) -> (VerificationReport, Thm3Verdicts) {
        let fx = fixtures::group_algebra(2, Q).unwrap();
        let r = verify_thm3(&fx, name, 2).unwrap();
        let v = thm3_verdicts(&r).unwrap();
        (r, v)
    }

    #[test]
    fn regular_module_all_true() {
        let (r, v) = run("A");
        assert!(r.passed(), "{}", r.to_json());
        assert!(v.add && v.end && v.ext);
    }

    #[test]
    fn trivial_module_all_false() {
        let (r, v) = run("k");
        assert!(r.passed(), "{}", r.to_json());
        assert!(!v.add && !v.end && !v.ext);
    }

    #[test]
    fn split_module_all_true() {
        let (r, v) = run("k+sgn");
        assert!(r.passed(), "{}", r.to_json());
        assert!(v.add && v.end && v.ext);
    }
}
