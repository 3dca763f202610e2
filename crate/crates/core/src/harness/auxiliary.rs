//! Auxiliary statements: degree-0 Galois property of `E/D`, the endomorphism
//! description of Galois extensions, and the `ξ`-map on resolutions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::thm1::{induced, phi};
use super::thm3::{ext_candidate, GaloisCandidate};
use super::{galois, module, require_hopf, ReportBuilder, Result, VerificationReport};
use crate::comodule::HAction;
use crate::fixtures::Fixture;
use crate::graded::{hom_graded, GradedLinearMap};
use crate::homological::{add_membership, Resolution};
use crate::linalg::{Field, Matrix, Subspace};

const SEED: u64 = 0x1e44_a2;

/// Builds `E = Ext_B(M, M)` over `D = Ext_A(M, M)`; a failure of the graded
/// Galois property is recorded as a violated hypothesis.
fn ext_algebra(rb: &mut ReportBuilder, fx: &Fixture, module_name: &str, n_max: usize) -> Result<(GaloisCandidate, HAction)> {
    let gd = galois(fx)?;
    let m = module(fx, module_name)?;
    let (e, action) = ext_candidate(gd, m, n_max)?;
    let c = GaloisCandidate::new(&e, &action)?;
    rb.data("e_dims", e.dims());
    rb.data("d_dims", c.coinvariants.algebra.dims());
    if !c.is_galois() {
        rb.hypothesis(format!("E/D is not graded Galois in degrees {:?}", c.failing_degrees()));
    }
    Ok((c, action))
}

/// The degree-0 part of a graded Galois `E/D` is Galois, checked on `E_0` alone.
pub fn verify_lem1(fx: &Fixture, module_name: &str, n_max: usize) -> Result<VerificationReport> {
    let mut rb = ReportBuilder::new("lem1", fx, Some(module_name), n_max);
    require_hopf(&mut rb, fx, true, false);
    let (c, action) = ext_algebra(&mut rb, fx, module_name, n_max)?;
    if !c.is_galois() {
        return Ok(rb.finish());
    }
    let e0 = c.ca.algebra().truncate(0);
    let a0 = HAction {
        hopf: action.hopf.clone(),
        mats: vec![action.mats[0].clone()],
    };
    let c0 = GaloisCandidate::new(&e0, &a0)?;
    rb.data("degree_zero", &c0.degrees);
    rb.check("degree-0 Galois map bijective", c0.is_galois(), None);
    let agrees = c0.coinvariants.algebra.dim(0) == c.coinvariants.algebra.dim(0);
    rb.check("degree-0 coinvariants match D_0", agrees, None);
    Ok(rb.finish())
}

/// (a) `E # H -> End(E_D)` bijective in every degree; (b) `E_D` is a summand of a
/// finite graded free `D`-module.
pub fn verify_lem4_ii(fx: &Fixture, module_name: &str, n_max: usize) -> Result<VerificationReport> {
    let mut rb = ReportBuilder::new("lem4", fx, Some(module_name), n_max);
    require_hopf(&mut rb, fx, true, false);
    let (c, action) = ext_algebra(&mut rb, fx, module_name, n_max)?;
    let e = c.ca.algebra();
    let d_alg = &c.coinvariants.algebra;
    let field = e.field();
    let k = action.hopf.dim();
    let ed = e.regular_module().restrict(d_alg, &c.coinvariants.emb);
    let top = e.top() as i64;
    let mut failures = Vec::new();
    let mut rows = Vec::new();
    for s in -top..=top {
        let hom = hom_graded(&ed, &ed, d_alg, s);
        let src = if s >= 0 { e.dim(s as usize) * k } else { 0 };
        let mut cols = Vec::new();
        for x in 0..src / k.max(1) {
            let xv = e.basis_vector(s as usize, x);
            for q in 0..k {
                let blocks = (0..=e.top())
                    .map(|j| {
                        let tj = j as i64 + s;
                        if tj > top {
                            return Matrix::zeros(field, 0, e.dim(j));
                        }
                        e.left_mul_matrix(s as usize, &xv, j).dot(&action.mats[j][q])
                    })
                    .collect();
                let f = GradedLinearMap::new(s, e.dims().to_vec(), e.dims().to_vec(), blocks);
                match hom.coordinates(field, &f) {
                    Some(v) => cols.push(v),
                    None => failures.push(format!("shift {s}: image not D-linear")),
                }
            }
        }
        let rank = if cols.is_empty() { 0 } else { Matrix::from_cols(field, hom.dim(), &cols)?.rank() };
        if src != hom.dim() || rank != src {
            failures.push(format!("shift {s}: {src} -> {} of rank {rank}", hom.dim()));
        }
        rows.push(serde_json::json!({"shift": s, "smash": src, "end": hom.dim(), "rank": rank}));
    }
    rb.data("end_map", rows);
    rb.check(
        "E#H to End(E_D) bijective",
        failures.is_empty(),
        (!failures.is_empty()).then(|| failures.join("; ")),
    );
    let shifts: Vec<i64> = (-top..=top).collect();
    let proj = add_membership(&ed, &d_alg.regular_module(), d_alg, &shifts);
    rb.check("E_D finitely generated projective", proj.member, None);
    Ok(rb.finish())
}

fn random_combination(rng: &mut ChaCha8Rng, field: Field, basis: &[GradedLinearMap]) -> GradedLinearMap {
    let mut out = GradedLinearMap::zero(field, basis[0].shift(), basis[0].src_dims(), basis[0].tgt_dims());
    for f in basis {
        out.add_scaled(&field.int(rng.gen_range(-3..=3)), f);
    }
    out
}

/// `ξ: Hom_B(P_n, N) -> Hom_A(P_n, N ⊗_B A)`, `ξ(f)(p) = Σ f(p X^t) ⊗ Y^t`, on the
/// minimal resolution `P` of `M = N`: bijective, compatible with the differential,
/// right linear over `End_A(P_n)` and left linear over `End_B(N) # H` acting by
/// `(g # h)·f = h·(g ∘ f)`.
pub fn verify_lem2(fx: &Fixture, module_name: &str, n_max: usize, samples: usize) -> Result<VerificationReport> {
    let mut rb = ReportBuilder::new("lem2", fx, Some(module_name), n_max);
    let gd = galois(fx)?;
    let m = module(fx, module_name)?;
    let a = gd.algebra();
    let b = &gd.b;
    let hopf = gd.hopf();
    let field = gd.field();
    let t = hopf.right_integral().map_err(crate::comodule::ComoduleError::from)?.vector;
    let na = induced(gd, m);
    let mb = m.restrict(&b.algebra, &b.emb);
    let res = Resolution::new(a, m, n_max + 1)?;
    let top = a.top() as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let ends_n: Vec<_> = (-top..=top)
        .map(|s| hom_graded(&mb, &mb, &b.algebra, s))
        .filter(|h| h.dim() > 0)
        .collect();

    let (mut bij, mut linear, mut diff, mut right, mut left) = (vec![], vec![], vec![], vec![], vec![]);
    let mut sizes = Vec::new();
    let mut triples = 0usize;
    for n in 0..=n_max {
        let pn = res.p(n);
        let pb = pn.restrict(&b.algebra, &b.emb);
        let ends_p: Vec<_> = (-top..=top).map(|s| hom_graded(pn, pn, a, s)).filter(|h| h.dim() > 0).collect();
        for d in 0..=top {
            let hb = hom_graded(&pb, &mb, &b.algebra, -d);
            let ha = hom_graded(pn, &na.module, a, -d);
            if hb.dim() == 0 && ha.dim() == 0 {
                continue;
            }
            let xi = |f: &GradedLinearMap| gd.xi(pn, &na, f, &t);
            let images: Vec<GradedLinearMap> = hb.basis.iter().map(xi).collect();
            if images.iter().any(|g| !g.is_module_map(pn, &na.module, a)) {
                linear.push(format!("({n},{d})"));
            }
            let len = GradedLinearMap::zero(field, -d, pn.dims(), na.module.dims()).flat_len();
            let span = Subspace::span(field, len, images.iter().map(GradedLinearMap::flatten))?;
            if hb.dim() != ha.dim() || span.dim() != ha.dim() {
                bij.push(format!("({n},{d}): {} -> {} of rank {}", hb.dim(), ha.dim(), span.dim()));
            }
            sizes.push(serde_json::json!({"n": n, "d": d, "hom_b": hb.dim(), "hom_a": ha.dim()}));
            // ξ(f ∘ ∂) = ξ(f) ∘ ∂ with ∂: P_{n+1} -> P_n
            let dn = &res.diff[n + 1];
            for (f, xf) in hb.basis.iter().zip(&images) {
                if gd.xi(res.p(n + 1), &na, &f.compose(dn), &t) != xf.compose(dn) {
                    diff.push(format!("({n},{d})"));
                    break;
                }
            }
            if hb.dim() == 0 {
                continue;
            }
            for _ in 0..samples {
                let f = random_combination(&mut rng, field, &hb.basis);
                let xf = xi(&f);
                if !ends_p.is_empty() {
                    let i = rng.gen_range(0..ends_p.len());
                    let g = random_combination(&mut rng, field, &ends_p[i].basis);
                    if xi(&f.compose(&g)) != xf.compose(&g) && right.len() < 4 {
                        right.push(format!("({n},{d}) shift {}", g.shift()));
                    }
                }
                let i = rng.gen_range(0..ends_n.len());
                let g = random_combination(&mut rng, field, &ends_n[i].basis);
                let q = rng.gen_range(0..hopf.dim());
                let h = hopf.basis(q);
                let lhs = xi(&gd.act_on_map(pn, m, &g.compose(&f), &h));
                let rhs = phi(gd, &na, m, &na, &g, &h).compose(&xf);
                if lhs != rhs && left.len() < 4 {
                    left.push(format!("({n},{d}) g shift {}, h = {}", g.shift(), hopf.names()[q]));
                }
                triples += 1;
            }
        }
    }
    rb.data("cells", sizes);
    rb.data("sampled_triples", triples);
    let mut report = |name: &str, w: Vec<String>| {
        rb.check(name, w.is_empty(), (!w.is_empty()).then(|| w.join(", ")));
    };
    report("xi bijective", bij);
    report("xi lands in A-linear maps", linear);
    report("xi compatible with differentials", diff);
    report("xi right linear over End_A(P)", right);
    report("xi left linear over End_B(N)#H", left);
    Ok(rb.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const Q: Field = Field::Rationals;

    #[test]
    fn lem2_group_algebra() {
        let fx = fixtures::group_algebra(2, Q).unwrap();
        let r = verify_lem2(&fx, "A", 2, 20).unwrap();
        assert!(r.passed(), "{}", r.to_json());
    }

    #[test]
    fn lem2_quiver() {
        let fx = fixtures::paper_quiver(Q, 3).unwrap();
        let r = verify_lem2(&fx, "A0", 2, 10).unwrap();
        assert!(r.passed(), "{}", r.to_json());
    }

    #[test]
    fn lem1_and_lem4_positive() {
        let fx = fixtures::group_algebra(2, Q).unwrap();
        for name in ["A", "k+sgn"] {
            let r = verify_lem1(&fx, name, 2).unwrap();
            assert!(r.passed(), "{}", r.to_json());
            let r = verify_lem4_ii(&fx, name, 2).unwrap();
            assert!(r.passed(), "{}", r.to_json());
        }
    }

    #[test]
    fn non_galois_is_gated() {
        let fx = fixtures::group_algebra(2, Q).unwrap();
        let r = verify_lem1(&fx, "k", 1).unwrap();
        assert_eq!(r.status(), super::super::Status::HypothesisFailure);
        let r = verify_lem4_ii(&fx, "k", 1).unwrap();
        assert!(!r.check("E#H to End(E_D) bijective").unwrap().passed);
    }
}
