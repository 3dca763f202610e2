//! `Ext_B(M, M) ≅ Ext_A(M, M) # H*` for a Hopf module `M`, and the invariant
//! description `Ext_A(M, N) = Ext_B(M, N)^H`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{galois, module, require_hopf, ReportBuilder, Result, VerificationReport};
use crate::comodule::GaloisData;
use crate::fixtures::Fixture;
use crate::graded::{hom_graded, GradedLinearMap, GradedModule};
use crate::homological::{ExtAlgebra, ExtElement, GaloisExt};
use crate::hopf::HopfAlgebra;
use crate::linalg::{self, Field, Matrix, Scalar, Subspace, Vector};

const SEED: u64 = 0x5eed_c0de;

/// `Ext` class with the given coordinates in cell `(n, d)`.
pub(crate) fn combine(ext: &ExtAlgebra, n: usize, d: i64, coords: &[Scalar]) -> ExtElement {
    let cell = ext.ext.cell(n, d).expect("certified cell");
    let field = ext.ext.field();
    let mut cocycle = GradedLinearMap::zero(field, -d, ext.ext.res.free[n].gens.dims(), ext.ext.target.dims());
    for (c, r) in coords.iter().zip(&cell.reps) {
        cocycle.add_scaled(c, r);
    }
    ExtElement { n, d, cocycle }
}

/// Right `H`-comodule structure making `M` a Hopf module, for the modules that carry one.
/// Rows of each block are indexed by `m * dim H + q`.
pub(crate) fn hopf_module_coaction(fx: &Fixture, name: &str) -> Option<Vec<Matrix>> {
    let ca = &fx.ca;
    let m = fx.module(name)?;
    let n = ca.hopf().dim();
    let field = ca.field();
    match name {
        "A" => Some((0..=ca.top()).map(|d| ca.coaction(d).clone()).collect()),
        "A0" => Some(
            m.dims()
                .iter()
                .enumerate()
                .map(|(d, &k)| if d == 0 { ca.coaction(0).clone() } else { Matrix::zeros(field, k * n, k) })
                .collect(),
        ),
        _ => None,
    }
}

/// Coassociativity, counit and `ρ(m a) = Σ m_0 a_0 ⊗ m_1 a_1`; the first failure is returned.
pub(crate) fn check_hopf_module(fx: &Fixture, m: &GradedModule, rho: &[Matrix]) -> Option<String> {
    let ca = &fx.ca;
    let a = ca.algebra();
    let h = ca.hopf();
    let n = h.dim();
    let field = ca.field();
    for d in 0..m.dims().len() {
        for k in 0..m.dim(d) {
            let x = field.unit_vector(m.dim(d), k);
            let terms = terms(&rho[d], n, &x);
            let mut counit = field.zeros(m.dim(d));
            for (c, i, q) in &terms {
                counit[*i] += &(c * &h.counit()[*q]);
            }
            if counit != x {
                return Some(format!("counit fails on basis {k} of degree {d}"));
            }
            // (ρ ⊗ id)ρ against (id ⊗ Δ)ρ in coordinates (i, q, p)
            let mut left = field.zeros(m.dim(d) * n * n);
            let mut right = field.zeros(m.dim(d) * n * n);
            for (c, i, q) in &terms {
                for (c2, i2, q2) in self::terms(&rho[d], n, &field.unit_vector(m.dim(d), *i)) {
                    left[(i2 * n + q2) * n + q] += &(c * &c2);
                }
                for (c2, q1, q2) in h.coproduct_terms(&h.basis(*q)) {
                    right[(i * n + q1) * n + q2] += &(c * &c2);
                }
            }
            if left != right {
                return Some(format!("coassociativity fails on basis {k} of degree {d}"));
            }
            for j in 0..=a.top() {
                let Some(dj) = (d + j < m.dims().len()).then_some(d + j) else { continue };
                for b in 0..a.dim(j) {
                    let mb = m.action(d, j, b).col(k);
                    let lhs = rho[dj].apply(&mb);
                    let mut rhs = field.zeros(m.dim(dj) * n);
                    for (c, i, q) in &terms {
                        for (c2, r, p) in ca.coaction_terms(j, &a.basis_vector(j, b)) {
                            let v = m.act_vec(d, &field.unit_vector(m.dim(d), *i), j, &a.basis_vector(j, r));
                            let hq = h.mul(&h.basis(*q), &h.basis(p));
                            let coef = c * &c2;
                            for (s, vs) in v.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                                for (t, ht) in hq.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                                    rhs[s * n + t] += &(&coef * &(vs * ht));
                                }
                            }
                        }
                    }
                    if lhs != rhs {
                        return Some(format!("compatibility fails on m = basis {k} of degree {d}, a = basis {b} of degree {j}"));
                    }
                }
            }
        }
    }
    None
}

fn terms(rho: &Matrix, n: usize, x: &[Scalar]) -> Vec<(Scalar, usize, usize)> {
    rho.apply(x)
        .into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (c, k / n, k % n))
        .collect()
}

/// `λ_α(m) = Σ m_0 α(m_1)`, the left `H*`-action on a Hopf module.
pub(crate) fn lambda(field: Field, m: &GradedModule, rho: &[Matrix], n: usize, alpha: &[Scalar]) -> GradedLinearMap {
    let blocks = (0..m.dims().len())
        .map(|d| {
            let k = m.dim(d);
            let mut out = Matrix::zeros(field, k, k);
            for col in 0..k {
                for (c, i, q) in terms(&rho[d], n, &field.unit_vector(k, col)) {
                    out.add_at(i, col, &(&c * &alpha[q]));
                }
            }
            out
        })
        .collect();
    GradedLinearMap::new(0, m.dims().to_vec(), m.dims().to_vec(), blocks)
}

/// `Ext_A(M, M) = Ext_B(M, M)^H` cell by cell, the cochain version of it,
/// `Hom_A = (Hom_B)^H` and the module-algebra law for the action on `Hom_B`.
pub fn verify_invariants_identity(fx: &Fixture, module_name: &str, n_max: usize, samples: usize) -> Result<VerificationReport> {
    let mut rb = ReportBuilder::new("invariants", fx, Some(module_name), n_max);
    require_hopf(&mut rb, fx, true, false);
    let gd = galois(fx)?;
    let m = module(fx, module_name)?;
    let hopf = gd.hopf();

    let tr = gd.verify_translation_identities();
    let failed: Vec<_> = tr.checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
    rb.check(
        "translation identities",
        failed.is_empty(),
        (!failed.is_empty()).then(|| failed.join(", ")),
    );

    let (hom_ok, hom_detail) = hom_invariants(gd, m);
    rb.check("Hom_A equals invariants of Hom_B", hom_ok, hom_detail);

    let (law_ok, law_detail, tried) = module_algebra_law(gd, m, samples);
    rb.data("module_algebra_samples", tried);
    rb.check("module-algebra law on Hom_B", law_ok, law_detail);

    if !rb_ok_hypotheses(fx) {
        return Ok(rb.finish());
    }
    let ge = GaloisExt::compute(gd, m, n_max)?;
    let mut rows = Vec::new();
    let mut bad: BTreeMap<&str, Vec<String>> = BTreeMap::new();
    for (&(n, d), c) in &ge.cells {
        let inv = c.invariants(hopf);
        let img = c.restriction_image();
        let tag = format!("({n},{d})");
        let flags = [
            ("cochain", c.cochain_invariants_match),
            ("differential", c.differential_compatible),
            ("transport", c.transport_bijective),
            ("invariants", inv == img),
            ("injective", c.restriction.rank() == c.restriction.cols()),
        ];
        for (k, ok) in flags {
            if !ok {
                bad.entry(k).or_default().push(tag.clone());
            }
        }
        rows.push(serde_json::json!({
            "n": n, "d": d,
            "ext_b": c.restriction.rows(),
            "invariants": inv.dim(),
            "ext_a": c.restriction.cols(),
        }));
    }
    rb.data("cells", rows);
    let mut named = |key: &str, name: &str| {
        let w = bad.get(key);
        rb.check(name, w.is_none(), w.map(|v| format!("cells {}", v.join(" "))));
    };
    named("cochain", "cochain invariants equal Hom_A(P_n, M)");
    named("differential", "action commutes with differentials");
    named("transport", "action transported to minimal resolution");
    named("invariants", "Ext_A equals Ext_B invariants");
    named("injective", "restriction injective");
    Ok(rb.finish())
}

fn rb_ok_hypotheses(fx: &Fixture) -> bool {
    fx.hopf().is_semisimple().unwrap_or(false)
}

fn hom_invariants(gd: &GaloisData, m: &GradedModule) -> (bool, Option<String>) {
    let field = gd.field();
    let a = gd.algebra();
    let b = &gd.b;
    let mb = m.restrict(&b.algebra, &b.emb);
    let hopf = gd.hopf();
    let top = m.dims().len() as i64;
    for s in -top..=top {
        let hom_a = hom_graded(m, m, a, s);
        let hom_b = hom_graded(&mb, &mb, &b.algebra, s);
        let len = GradedLinearMap::zero(field, s, m.dims(), m.dims()).flat_len();
        let sa = Subspace::span(field, len, hom_a.basis.iter().map(GradedLinearMap::flatten)).expect("shape");
        let dim_b = hom_b.dim();
        let mut stacked = Matrix::zeros(field, 0, dim_b);
        for q in 0..hopf.dim() {
            let Some(act) = gd.action_matrix_on(m, m, &hom_b.basis, q) else {
                return (false, Some(format!("Hom_B not stable under H at shift {s}")));
            };
            stacked = stacked.vstack(&act.sub(&Matrix::identity(field, dim_b).scaled(&hopf.counit()[q])).expect("square"));
        }
        let inv = linalg::kernel(&stacked).expect("field");
        let flat: Vec<Vector> = inv
            .basis()
            .iter()
            .map(|c| {
                let mut v = field.zeros(len);
                for (ci, f) in c.iter().zip(&hom_b.basis) {
                    linalg::axpy(&mut v, ci, &f.flatten());
                }
                v
            })
            .collect();
        let si = Subspace::span(field, len, flat).expect("shape");
        if si != sa {
            return (false, Some(format!("shift {s}: invariants {} vs Hom_A {}", si.dim(), sa.dim())));
        }
    }
    (true, None)
}

fn random_combination(rng: &mut ChaCha8Rng, field: Field, basis: &[GradedLinearMap]) -> GradedLinearMap {
    let mut out = GradedLinearMap::zero(field, basis[0].shift(), basis[0].src_dims(), basis[0].tgt_dims());
    for f in basis {
        out.add_scaled(&field.int(rng.gen_range(-3..=3)), f);
    }
    out
}

/// `h·(f ∘ g) = Σ (h_1·f) ∘ (h_2·g)` on random `B`-linear endomorphisms and random `h`.
fn module_algebra_law(gd: &GaloisData, m: &GradedModule, samples: usize) -> (bool, Option<String>, usize) {
    let field = gd.field();
    let b = &gd.b;
    let mb = m.restrict(&b.algebra, &b.emb);
    let hopf = gd.hopf();
    let top = m.dims().len() as i64;
    let spaces: Vec<_> = (-top..=top)
        .map(|s| hom_graded(&mb, &mb, &b.algebra, s))
        .filter(|h| h.dim() > 0)
        .collect();
    if spaces.is_empty() {
        return (true, None, 0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for t in 0..samples {
        let (i, j) = (rng.gen_range(0..spaces.len()), rng.gen_range(0..spaces.len()));
        let f = random_combination(&mut rng, field, &spaces[i].basis);
        let g = random_combination(&mut rng, field, &spaces[j].basis);
        let h: Vector = (0..hopf.dim()).map(|_| field.int(rng.gen_range(-3..=3))).collect();
        let lhs = gd.act_on_map(m, m, &f.compose(&g), &h);
        let mut rhs = GradedLinearMap::zero(field, lhs.shift(), lhs.src_dims(), lhs.tgt_dims());
        for (c, i, j) in hopf.coproduct_terms(&h) {
            let hf = gd.act_on_map(m, m, &f, &hopf.basis(i));
            let hg = gd.act_on_map(m, m, &g, &hopf.basis(j));
            rhs.add_scaled(&c, &hf.compose(&hg));
        }
        if lhs != rhs {
            return (false, Some(format!("sample {t}")), t + 1);
        }
    }
    (true, None, samples)
}

/// Data needed to evaluate `Ψ(x # α) = res(x) ∘ λ_α`.
struct SmashIso<'a> {
    ge: &'a GaloisExt,
    dual: HopfAlgebra,
    /// class of `λ_q` in `Ext_B^{0,0}` for the dual basis
    lambdas: Vec<ExtElement>,
    /// `Ψ` on each cell, columns ordered `(i, q) -> i * dim H + q`
    psi: BTreeMap<(usize, i64), Matrix>,
}

impl SmashIso<'_> {
    fn psi_coords(&self, n: usize, d: i64, x: &[Scalar], alpha: &[Scalar]) -> Vector {
        let p = &self.psi[&(n, d)];
        let k = alpha.len();
        let mut v = vec![self.ge.field().zero(); p.cols()];
        for (i, xi) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (q, aq) in alpha.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                v[i * k + q] = xi * aq;
            }
        }
        p.apply(&v)
    }

    /// `α·y = Σ λ_{α_1} ∘ y ∘ λ_{S α_2}`, in `Ext_A` coordinates.
    fn act(&self, n: usize, d: i64, alpha: &[Scalar], y: &[Scalar]) -> Result<Option<Vector>> {
        let ge = self.ge;
        let field = ge.field();
        let cell = &ge.cells[&(n, d)];
        let ry = combine(&ge.ext_b, n, d, &cell.restriction.apply(y));
        let mut acc = field.zeros(cell.restriction.rows());
        for (c, i, j) in self.dual.coproduct_terms(alpha) {
            let s = self.dual.s(&self.dual.basis(j));
            let right = self.lambda_class(&s);
            let inner = ge.ext_b.mul(&ry, &right)?.expect("same cell");
            let inner = combine(&ge.ext_b, n, d, &inner);
            let outer = ge.ext_b.mul(&self.lambdas[i], &inner)?.expect("same cell");
            linalg::axpy(&mut acc, &c, &outer);
        }
        Ok(linalg::solve(&cell.restriction, &acc)?)
    }

    fn lambda_class(&self, alpha: &[Scalar]) -> ExtElement {
        let field = self.ge.field();
        let first = &self.lambdas[0];
        let mut cocycle = GradedLinearMap::zero(field, 0, first.cocycle.src_dims(), first.cocycle.tgt_dims());
        for (c, l) in alpha.iter().zip(&self.lambdas) {
            cocycle.add_scaled(c, &l.cocycle);
        }
        ExtElement { n: 0, d: 0, cocycle }
    }
}

/// `Ext_B(M, M) ≅ Ext_A(M, M) # H*` via `Ψ(x # α) = res(x) ∘ λ_α`, with products
/// in composition order. Checked cell by cell for bijectivity and on sampled
/// pairs of basis elements for multiplicativity.
pub fn verify_cor1(fx: &Fixture, module_name: &str, n_max: usize, samples: usize) -> Result<VerificationReport> {
    let mut rb = ReportBuilder::new("cor1", fx, Some(module_name), n_max);
    require_hopf(&mut rb, fx, true, true);
    let gd = galois(fx)?;
    let m = module(fx, module_name)?;
    let field = gd.field();
    let hopf = gd.hopf();
    let k = hopf.dim();
    match hopf_module_coaction(fx, module_name) {
        None => rb.hypothesis(format!("{module_name} carries no Hopf module structure")),
        Some(rho) => {
            if let Some(w) = check_hopf_module(fx, m, &rho) {
                rb.hypothesis(format!("{module_name} is not a Hopf module: {w}"));
            }
        }
    }
    let Some(rho) = hopf_module_coaction(fx, module_name).filter(|_| rb_ok_hypotheses(fx)) else {
        return Ok(rb.finish());
    };
    if !hopf.is_cosemisimple().unwrap_or(false) {
        return Ok(rb.finish());
    }
    let ge = GaloisExt::compute(gd, m, n_max)?;
    let mb_unit = ge.ext_b.unit().expect("unit");
    let lambdas: Vec<ExtElement> = (0..k)
        .map(|q| {
            let l = lambda(field, m, &rho, k, &field.unit_vector(k, q));
            ExtElement {
                n: 0,
                d: 0,
                cocycle: l.compose(&mb_unit.cocycle),
            }
        })
        .collect();
    let lin = (0..k).all(|q| {
        lambda(field, m, &rho, k, &field.unit_vector(k, q)).is_module_map(
            &m.restrict(&gd.b.algebra, &gd.b.emb),
            &m.restrict(&gd.b.algebra, &gd.b.emb),
            &gd.b.algebra,
        )
    });
    rb.check("lambda is B-linear", lin, None);

    let mut psi = BTreeMap::new();
    let mut dims = Vec::new();
    let mut dim_fail = Vec::new();
    let mut bij_fail = Vec::new();
    for (&(n, d), c) in &ge.cells {
        let (rows, cols_a) = (c.restriction.rows(), c.restriction.cols());
        dims.push(serde_json::json!({"n": n, "d": d, "ext_b": rows, "ext_a": cols_a, "smash": cols_a * k}));
        if rows != cols_a * k {
            dim_fail.push(format!("({n},{d}): {rows} vs {cols_a}x{k}"));
        }
        let mut cols = Vec::with_capacity(cols_a * k);
        for i in 0..cols_a {
            let rx = combine(&ge.ext_b, n, d, &c.restriction.col(i));
            for l in &lambdas {
                cols.push(ge.ext_b.mul(&rx, l)?.expect("same cell"));
            }
        }
        let p = Matrix::from_cols(field, rows, &cols)?;
        if p.rows() != p.cols() || p.rank() != p.rows() {
            bij_fail.push(format!("({n},{d})"));
        }
        psi.insert((n, d), p);
    }
    rb.data("cells", dims);
    rb.check(
        "dimensions match dim Ext_A times dim H",
        dim_fail.is_empty(),
        (!dim_fail.is_empty()).then(|| dim_fail.join(", ")),
    );
    rb.check(
        "psi bijective in every cell",
        bij_fail.is_empty(),
        (!bij_fail.is_empty()).then(|| bij_fail.join(", ")),
    );

    let iso = SmashIso {
        ge: &ge,
        dual: hopf.dual(),
        lambdas,
        psi,
    };
    // the H*-action must preserve the image of Ext_A
    let mut closed = true;
    'cells: for &(n, d) in ge.cells.keys() {
        let dim_a = ge.cells[&(n, d)].restriction.cols();
        for q in 0..k {
            for i in 0..dim_a {
                if iso.act(n, d, &field.unit_vector(k, q), &field.unit_vector(dim_a, i))?.is_none() {
                    closed = false;
                    rb.check("H* preserves Ext_A", false, Some(format!("cell ({n},{d}), basis {i}, α_{q}")));
                    break 'cells;
                }
            }
        }
    }
    if closed {
        rb.check("H* preserves Ext_A", true, None);
    }

    let (ok, detail, count) = if closed { smash_multiplicativity(&iso, samples)? } else { (false, None, 0) };
    rb.data("multiplicative_pairs", count);
    rb.check("psi multiplicative", ok && count > 0, detail);
    Ok(rb.finish())
}

fn smash_multiplicativity(iso: &SmashIso, samples: usize) -> Result<(bool, Option<String>, usize)> {
    let ge = iso.ge;
    let field = ge.field();
    let k = iso.dual.dim();
    let basis: Vec<(usize, i64, usize, usize)> = ge
        .cells
        .iter()
        .flat_map(|(&(n, d), c)| (0..c.restriction.cols()).flat_map(move |i| (0..k).map(move |q| (n, d, i, q))))
        .collect();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for (s, x) in basis.iter().enumerate() {
        for (t, y) in basis.iter().enumerate() {
            if ge.cells.contains_key(&(x.0 + y.0, x.1 + y.1)) {
                pairs.push((s, t));
            }
        }
    }
    if pairs.len() > samples {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        for i in 0..samples {
            let j = rng.gen_range(i..pairs.len());
            pairs.swap(i, j);
        }
        pairs.truncate(samples);
    }
    for &(s, t) in &pairs {
        let (n, d, i, q) = basis[s];
        let (n2, d2, j, p) = basis[t];
        let (nt, dt) = (n + n2, d + d2);
        let dim_a = |n, d| ge.cells[&(n, d)].restriction.cols();
        let x = field.unit_vector(dim_a(n, d), i);
        let y = field.unit_vector(dim_a(n2, d2), j);
        let alpha = field.unit_vector(k, q);
        let beta = field.unit_vector(k, p);
        let left = combine(&ge.ext_b, n, d, &iso.psi_coords(n, d, &x, &alpha));
        let right = combine(&ge.ext_b, n2, d2, &iso.psi_coords(n2, d2, &y, &beta));
        let lhs = ge.ext_b.mul(&left, &right)?.expect("certified");
        let mut rhs = field.zeros(lhs.len());
        let xa = combine(&ge.ext_a, n, d, &x);
        for (c, q1, q2) in iso.dual.coproduct_terms(&alpha) {
            let ay = iso.act(n2, d2, &field.unit_vector(k, q1), &y)?.expect("closed");
            let prod = ge.ext_a.mul(&xa, &combine(&ge.ext_a, n2, d2, &ay))?.expect("certified");
            let gamma = iso.dual.mul(&field.unit_vector(k, q2), &beta);
            linalg::axpy(&mut rhs, &c, &iso.psi_coords(nt, dt, &prod, &gamma));
        }
        if lhs != rhs {
            return Ok((false, Some(format!("x{i}#α{q} in ({n},{d}) times x{j}#α{p} in ({n2},{d2})")), pairs.len()));
        }
    }
    Ok((true, None, pairs.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const Q: Field = Field::Rationals;

    #[test]
    fn group_algebra_smash() {
        let fx = fixtures::group_algebra(2, Q).unwrap();
        let r = verify_cor1(&fx, "A", 1, 200).unwrap();
        assert!(r.passed(), "{}", r.to_json());
        let r = verify_invariants_identity(&fx, "A", 1, 100).unwrap();
        assert!(r.passed(), "{}", r.to_json());
    }

    #[test]
    fn non_hopf_module_is_a_hypothesis_failure() {
        let fx = fixtures::group_algebra(2, Q).unwrap();
        let r = verify_cor1(&fx, "k", 1, 10).unwrap();
        assert_eq!(r.status(), super::super::Status::HypothesisFailure);
    }

    #[test]
    fn quiver_smash() {
        let fx = fixtures::paper_quiver(Q, 3).unwrap();
        let r = verify_cor1(&fx, "A0", 2, 400).unwrap();
        assert!(r.passed(), "{}", r.to_json());
    }
}
