//! `Ext_A(M ⊗_B A, M ⊗_B A) ≅ Ext_B(M, M) # H`.

use serde::Serialize;

use super::{galois, module, require_hopf, ReportBuilder, Result, VerificationReport};
use crate::comodule::GaloisData;
use crate::fixtures::Fixture;
use crate::graded::{hom_graded, tensor_over_sub_unchecked, GradedLinearMap, GradedModule, TensorOverSub};
use crate::homological::{complex::HomComplex, Ext, Resolution};
use crate::linalg::{Matrix, Scalar, Subspace, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Dims,
    Map,
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "dims" => Ok(Mode::Dims),
            "map" => Ok(Mode::Map),
            _ => Err(format!("unknown mode {s}")),
        }
    }
}

/// `M ⊗_B A` for an `A`-module `M`.
pub(crate) fn induced(gd: &GaloisData, m: &GradedModule) -> TensorOverSub {
    let b = &gd.b;
    tensor_over_sub_unchecked(&m.restrict(&b.algebra, &b.emb), &b.algebra, gd.algebra(), &b.emb)
}

/// `φ(f ⊗ h)(p ⊗ a) = Σ f(p) X^h ⊗ Y^h a` for a `B`-linear `f: P -> M`.
pub(crate) fn phi(
    gd: &GaloisData,
    src: &TensorOverSub,
    m: &GradedModule,
    tgt: &TensorOverSub,
    f: &GradedLinearMap,
    h: &[Scalar],
) -> GradedLinearMap {
    let a = gd.algebra();
    let field = gd.field();
    let terms = gd.translation_of(h);
    let shift = f.shift();
    let tdims = tgt.module.dims().to_vec();
    let blocks = (0..src.module.dims().len())
        .map(|e| {
            let te = e as i64 + shift;
            let rows = if te >= 0 && (te as usize) < tdims.len() { tdims[te as usize] } else { 0 };
            let cols: Vec<Vector> = (0..src.module.dim(e))
                .map(|k| {
                    let mut out = field.zeros(rows);
                    if rows == 0 {
                        return out;
                    }
                    let (i, p, j, r) = src.basis_tensor(e, k);
                    let Some(fi) = f.target_degree(i) else { return out };
                    let fp = f.block(i).col(p);
                    let ar = a.basis_vector(j, r);
                    for t in &terms {
                        let v = m.act_vec(fi, &fp, 0, &a.basis_vector(0, t.left));
                        let ya = a.mul(0, &a.basis_vector(0, t.right), j, &ar).expect("in window");
                        if let Some(s) = tgt.simple(fi, &v, j, &ya) {
                            crate::linalg::axpy(&mut out, &t.coeff, &s);
                        }
                    }
                    out
                })
                .collect();
            Matrix::from_cols(field, rows, &cols).expect("shape")
        })
        .collect();
    GradedLinearMap::new(shift, src.module.dims().to_vec(), tdims, blocks)
}

/// `f ⊗ id: P ⊗_B A -> Q ⊗_B A` for a `B`-linear `f`.
pub(crate) fn tensor_with_identity(
    gd: &GaloisData,
    src: &TensorOverSub,
    tgt: &TensorOverSub,
    f: &GradedLinearMap,
) -> GradedLinearMap {
    let a = gd.algebra();
    let field = gd.field();
    let shift = f.shift();
    let tdims = tgt.module.dims().to_vec();
    let blocks = (0..src.module.dims().len())
        .map(|e| {
            let te = e as i64 + shift;
            let rows = if te >= 0 && (te as usize) < tdims.len() { tdims[te as usize] } else { 0 };
            let cols: Vec<Vector> = (0..src.module.dim(e))
                .map(|k| {
                    let (i, p, j, r) = src.basis_tensor(e, k);
                    match f.target_degree(i) {
                        Some(fi) if rows > 0 => tgt
                            .simple(fi, &f.block(i).col(p), j, &a.basis_vector(j, r))
                            .unwrap_or_else(|| field.zeros(rows)),
                        _ => field.zeros(rows),
                    }
                })
                .collect();
            Matrix::from_cols(field, rows, &cols).expect("shape")
        })
        .collect();
    GradedLinearMap::new(shift, src.module.dims().to_vec(), tdims, blocks)
}

#[derive(Serialize)]
struct CellComparison {
    n: usize,
    d: i64,
    lhs: usize,
    rhs: usize,
}

pub fn verify_thm1(fx: &Fixture, module_name: &str, n_max: usize, mode: Mode) -> Result<VerificationReport> {
    let mut rb = ReportBuilder::new("thm1", fx, Some(module_name), n_max);
    rb.mode(match mode {
        Mode::Dims => "dims",
        Mode::Map => "map",
    });
    require_hopf(&mut rb, fx, false, false);
    let gd = galois(fx)?;
    let m = module(fx, module_name)?;
    let a = gd.algebra();
    let b = &gd.b;
    let top = a.top() as i64;
    let hdim = gd.hopf().dim() as usize;
    let xa = induced(gd, m);

    // dimension comparison
    let res_x = Resolution::new(a, &xa.module, n_max + 1)?;
    let lhs = Ext::compute(&res_x, &xa.module, n_max, 0, top)?;
    let mb = m.restrict(&b.algebra, &b.emb);
    let res_b = Resolution::new(&b.algebra, &mb, n_max + 1)?;
    let rhs = Ext::compute(&res_b, &mb, n_max, 0, top)?;
    let mut cells = Vec::new();
    let mut mismatch = None;
    for n in 0..=n_max {
        for d in 0..=top {
            if let (Some(l), Some(r)) = (lhs.dim(n, d), rhs.dim(n, d)) {
                if l != r * hdim && mismatch.is_none() {
                    mismatch = Some(format!("({n},{d}): {l} vs {r}·{hdim}"));
                }
                cells.push(CellComparison { n, d, lhs: l, rhs: r * hdim });
            }
        }
    }
    rb.check("bidegree dimensions agree", mismatch.is_none(), mismatch);
    rb.data("cells", &cells);
    rb.data("lhs_table", lhs.table());
    rb.data("ext_b_table", rhs.table());

    if mode == Mode::Map {
        hom_level_map(&mut rb, gd, m, &xa);
        chain_level_map(&mut rb, gd, m, &xa, n_max)?;
    }
    Ok(rb.finish())
}

/// On `Hom_B(M, M) # H -> End_A(M ⊗_B A)`: module maps, bijective per degree, multiplicative.
fn hom_level_map(rb: &mut ReportBuilder, gd: &GaloisData, m: &GradedModule, xa: &TensorOverSub) {
    let a = gd.algebra();
    let b = &gd.b;
    let h = gd.hopf();
    let field = gd.field();
    let top = a.top() as i64;
    let mb = m.restrict(&b.algebra, &b.emb);
    let mut basis: Vec<(i64, GradedLinearMap, usize)> = Vec::new();
    let mut all_linear = true;
    let mut bijective = true;
    let mut witness = None;
    for s in -top..=top {
        let hom_b = hom_graded(&mb, &mb, &b.algebra, s);
        let hom_a = hom_graded(&xa.module, &xa.module, a, s);
        let mut images = Vec::new();
        for f in &hom_b.basis {
            for q in 0..h.dim() {
                let img = phi(gd, xa, m, xa, f, &h.basis(q));
                if !img.is_module_map(&xa.module, &xa.module, a) {
                    all_linear = false;
                }
                images.push(img.flatten());
                basis.push((s, f.clone(), q));
            }
        }
        let len = GradedLinearMap::zero(field, s, xa.module.dims(), xa.module.dims()).flat_len();
        let span = Subspace::span(field, len, images.iter().cloned()).expect("shape");
        if images.len() != hom_a.dim() || span.dim() != hom_a.dim() {
            bijective = false;
            witness.get_or_insert(format!("shift {s}: {} images of rank {} vs Hom_A dim {}", images.len(), span.dim(), hom_a.dim()));
        }
    }
    rb.check("phi lands in A-linear maps", all_linear, None);
    rb.check("phi bijective on Hom", bijective, witness);
    // multiplicativity on all basis pairs; endomorphisms of right modules
    // compose left to right, `f · f' = f' ∘ f`
    let smash_phi = |f: &GradedLinearMap, hv: &[Scalar]| phi(gd, xa, m, xa, f, hv);
    let mut pairs = 0usize;
    let mut failure = None;
    for (s1, f1, q1) in &basis {
        for (s2, f2, q2) in &basis {
            if (s1 + s2).abs() > top {
                continue;
            }
            pairs += 1;
            let lhs = smash_phi(f2, &h.basis(*q2)).compose(&smash_phi(f1, &h.basis(*q1)));
            let mut rhs = GradedLinearMap::zero(field, s1 + s2, xa.module.dims(), xa.module.dims());
            for (c, p1, p2) in h.coproduct_terms(&h.basis(*q1)) {
                let acted = gd.act_on_map(m, m, f2, &h.basis(p1));
                let g = acted.compose(f1);
                let hh = h.mul(&h.basis(p2), &h.basis(*q2));
                rhs.add_scaled(&c, &smash_phi(&g, &hh));
            }
            if lhs != rhs && failure.is_none() {
                failure = Some(format!("{}#{} · {}#{}", f1.shift(), h.names()[*q1], f2.shift(), h.names()[*q2]));
            }
        }
    }
    rb.data("multiplicative_pairs", pairs);
    rb.check("phi multiplicative", failure.is_none(), failure);
}

/// On cochains `Hom_B(P_n, M) ⊗ H -> Hom_A(P_n ⊗_B A, M ⊗_B A)`.
fn chain_level_map(
    rb: &mut ReportBuilder,
    gd: &GaloisData,
    m: &GradedModule,
    xa: &TensorOverSub,
    n_max: usize,
) -> Result<()> {
    let a = gd.algebra();
    let b = &gd.b;
    let h = gd.hopf();
    let field = gd.field();
    let top = a.top() as i64;
    let t = m.highest_degree().unwrap_or(0) as i64;
    let res = Resolution::new(a, m, n_max + 1)?;
    let pa: Vec<TensorOverSub> = (0..=n_max + 1).map(|n| induced(gd, res.p(n))).collect();
    let da: Vec<GradedLinearMap> = (1..=n_max + 1)
        .map(|n| tensor_with_identity(gd, &pa[n], &pa[n - 1], &res.diff[n]))
        .collect();
    let mut bijective = true;
    let mut compatible = true;
    let mut witness_bij = None;
    let mut witness_diff = None;
    for d in 0..=top {
        if top > 0 && d + t > top {
            continue;
        }
        let hc = HomComplex::new(&res, m, Some((&b.algebra, &b.emb)), n_max, d)?;
        let hom_a: Vec<_> = (0..=n_max + 1).map(|n| hom_graded(&pa[n].module, &xa.module, a, -d)).collect();
        for n in 0..=n_max {
            let mut cols = Vec::new();
            let mut ok = true;
            for f in &hc.spaces[n].basis {
                for q in 0..h.dim() {
                    let img = phi(gd, &pa[n], m, xa, f, &h.basis(q));
                    match hom_a[n].coordinates(field, &img) {
                        Some(c) => cols.push(c),
                        None => ok = false,
                    }
                    // differential compatibility: φ(f ∘ d) = φ(f) ∘ (d ⊗ id)
                    let lhs = phi(gd, &pa[n + 1], m, xa, &f.compose(&res.diff[n + 1]), &h.basis(q));
                    let rhs = img.compose(&da[n]);
                    if lhs != rhs {
                        compatible = false;
                        witness_diff.get_or_insert(format!("({n},{d}) basis map, h = {}", h.names()[q]));
                    }
                }
            }
            let square = cols.len() == hom_a[n].dim();
            let full = ok && square && (cols.is_empty() || Matrix::from_cols(field, hom_a[n].dim(), &cols)?.rank() == cols.len());
            if !full {
                bijective = false;
                witness_bij.get_or_insert(format!("({n},{d}): {} cochains ⊗ H vs {}", cols.len(), hom_a[n].dim()));
            }
        }
    }
    rb.check("phi bijective on cochains", bijective, witness_bij);
    rb.check("phi compatible with differentials", compatible, witness_diff);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::Field;

    #[test]
    fn group_algebra_map_mode() {
        let fx = fixtures::group_algebra(2, Field::Rationals).unwrap();
        let r = verify_thm1(&fx, "A", 2, Mode::Map).unwrap();
        assert!(r.passed(), "{}", r.to_json());
        assert_eq!(r.data["multiplicative_pairs"], 64);
    }
}
