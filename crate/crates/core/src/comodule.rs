//! Comodule algebras, coinvariants and Hopf–Galois data.
//!
//! A coaction is stored per degree as a matrix `A_d -> A_d ⊗ H` with row
//! index `a * dim H + h`. Translation elements `Σ X^h ⊗ Y^h = β^{-1}(1 ⊗ h)`
//! live in degree 0 of `A ⊗_B A` and are kept both as quotient vectors and
//! as explicit lists of simple tensors.

use serde::Serialize;
use thiserror::Error;

use crate::graded::{
    tensor_over_sub_unchecked, AlgebraError, GradedAlgebra, GradedLinearMap, GradedModule, TensorOverSub,
};
use crate::hopf::{HopfAlgebra, HopfError};
use crate::linalg::{self, axpy, kernel, kron_vec, scale, Field, LinalgError, Matrix, Scalar, Subspace, Vector};
use crate::par;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ComoduleError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Hopf(#[from] HopfError),
    #[error("coaction is not coassociative at degree {degree}, basis {index}")]
    NotCoassociative { degree: usize, index: usize },
    #[error("coaction is not counital at degree {degree}, basis {index}")]
    NotCounital { degree: usize, index: usize },
    #[error("coaction is not multiplicative: {0}")]
    NotMultiplicative(String),
    #[error("coinvariants are not closed under multiplication: {0}")]
    CoinvariantsNotClosed(String),
    #[error("Galois map not bijective in degree {degree}: dim A⊗_B A = {tensor_dim}, dim A⊗H = {target_dim}, rank {rank}")]
    NotGalois {
        degree: usize,
        tensor_dim: usize,
        target_dim: usize,
        rank: usize,
    },
    #[error("H-action fails: {0}")]
    BadAction(String),
    #[error("map is not linear over the coinvariants")]
    NotBLinear,
    #[error("shape mismatch: {0}")]
    Shape(String),
}

pub type Result<T> = std::result::Result<T, ComoduleError>;

// ---------------------------------------------------------------------------
// comodule algebras

#[derive(Clone, Debug)]
pub struct ComoduleAlgebra {
    algebra: GradedAlgebra,
    hopf: HopfAlgebra,
    coaction: Vec<Matrix>,
}

impl ComoduleAlgebra {
    /// Accepts the data after checking coassociativity, counitality and multiplicativity.
    pub fn new(algebra: GradedAlgebra, hopf: HopfAlgebra, coaction: Vec<Matrix>) -> Result<Self> {
        let ca = ComoduleAlgebra::new_unchecked(algebra, hopf, coaction)?;
        ca.check()?;
        Ok(ca)
    }

    pub fn new_unchecked(algebra: GradedAlgebra, hopf: HopfAlgebra, coaction: Vec<Matrix>) -> Result<Self> {
        let n = hopf.dim();
        if coaction.len() != algebra.top() + 1 {
            return Err(ComoduleError::Shape("one coaction matrix per degree".into()));
        }
        for (d, m) in coaction.iter().enumerate() {
            if m.rows() != algebra.dim(d) * n || m.cols() != algebra.dim(d) {
                return Err(ComoduleError::Shape(format!("coaction in degree {d}")));
            }
        }
        Ok(ComoduleAlgebra {
            algebra,
            hopf,
            coaction,
        })
    }

    /// `H` coacting on itself by `Δ`, concentrated in degree 0.
    pub fn regular(hopf: &HopfAlgebra) -> ComoduleAlgebra {
        ComoduleAlgebra::new(hopf.as_algebra(), hopf.clone(), vec![hopf.comult().clone()]).expect("Δ is a coaction")
    }

    /// `a -> a ⊗ 1`.
    pub fn trivial(algebra: &GradedAlgebra, hopf: &HopfAlgebra) -> ComoduleAlgebra {
        let coaction = (0..=algebra.top())
            .map(|d| Matrix::identity(algebra.field(), algebra.dim(d)).kron(&Matrix::from_cols(algebra.field(), hopf.dim(), &[hopf.unit().clone()]).unwrap()))
            .collect();
        ComoduleAlgebra::new(algebra.clone(), hopf.clone(), coaction).expect("trivial coaction")
    }

    pub fn algebra(&self) -> &GradedAlgebra {
        &self.algebra
    }

    pub fn hopf(&self) -> &HopfAlgebra {
        &self.hopf
    }

    pub fn field(&self) -> Field {
        self.algebra.field()
    }

    pub fn top(&self) -> usize {
        self.algebra.top()
    }

    pub fn coaction(&self, d: usize) -> &Matrix {
        &self.coaction[d]
    }

    /// `ρ(x)` as a list `(coefficient, basis of A_d, basis of H)`.
    pub fn coaction_terms(&self, d: usize, x: &[Scalar]) -> Vec<(Scalar, usize, usize)> {
        let n = self.hopf.dim();
        self.coaction[d]
            .apply(x)
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (c, k / n, k % n))
            .collect()
    }

    pub fn check(&self) -> Result<()> {
        let alg = &self.algebra;
        let h = &self.hopf;
        let n = h.dim();
        let f = self.field();
        for d in 0..=alg.top() {
            let m = alg.dim(d);
            for k in 0..m {
                let x = alg.basis_vector(d, k);
                let rho = self.coaction[d].apply(&x);
                // (ρ ⊗ id)ρ vs (id ⊗ Δ)ρ in A_d ⊗ H ⊗ H, index (a n + p) n + q
                let mut left = f.zeros(m * n * n);
                let mut right = f.zeros(m * n * n);
                for a in 0..m {
                    for p in 0..n {
                        let c = &rho[a * n + p];
                        if c.is_zero() {
                            continue;
                        }
                        let ra = self.coaction[d].col(a);
                        for (i, y) in ra.iter().enumerate() {
                            if !y.is_zero() {
                                let idx = i * n + p;
                                left[idx] = &left[idx] + &(c * y);
                            }
                        }
                        let dp = h.comult().col(p);
                        for (i, y) in dp.iter().enumerate() {
                            if !y.is_zero() {
                                let idx = a * n * n + i;
                                right[idx] = &right[idx] + &(c * y);
                            }
                        }
                    }
                }
                if left != right {
                    return Err(ComoduleError::NotCoassociative { degree: d, index: k });
                }
                let mut counit = f.zeros(m);
                for a in 0..m {
                    for p in 0..n {
                        counit[a] = &counit[a] + &(&rho[a * n + p] * &h.counit()[p]);
                    }
                }
                if counit != x {
                    return Err(ComoduleError::NotCounital { degree: d, index: k });
                }
            }
        }
        if self.coaction[0].apply(alg.unit()) != kron_vec(alg.unit(), h.unit()) {
            return Err(ComoduleError::NotMultiplicative("unit".into()));
        }
        let top = alg.top();
        let pairs: Vec<(usize, usize)> = (0..=top).flat_map(|i| (0..=top - i).map(move |j| (i, j))).collect();
        let bad = par::map_slice(&pairs, |&(i, j)| {
            for a in 0..alg.dim(i) {
                let x = alg.basis_vector(i, a);
                let rx = self.coaction_terms(i, &x);
                for b in 0..alg.dim(j) {
                    let y = alg.basis_vector(j, b);
                    let lhs = self.coaction[i + j].apply(&alg.mul(i, &x, j, &y).unwrap());
                    let mut rhs = f.zeros(alg.dim(i + j) * n);
                    for (c1, a1, p1) in &rx {
                        for (c2, b2, p2) in self.coaction_terms(j, &y) {
                            let ab = alg.mul(i, &alg.basis_vector(i, *a1), j, &alg.basis_vector(j, b2)).unwrap();
                            let hk = h.mul(&h.basis(*p1), &h.basis(p2));
                            axpy(&mut rhs, &(c1 * &c2), &kron_vec(&ab, &hk));
                        }
                    }
                    if lhs != rhs {
                        return Some(format!("degrees ({i},{j}) basis ({a},{b})"));
                    }
                }
            }
            None
        });
        if let Some(msg) = bad.into_iter().flatten().next() {
            return Err(ComoduleError::NotMultiplicative(msg));
        }
        Ok(())
    }

    /// Degreewise kernel of `ρ - (· ⊗ 1)`, with induced multiplication and inclusion.
    pub fn coinvariants(&self) -> Result<Coinvariants> {
        let alg = &self.algebra;
        let f = self.field();
        let one = Matrix::from_cols(f, self.hopf.dim(), &[self.hopf.unit().clone()])?;
        let parts: Vec<Subspace> = (0..=alg.top())
            .map(|d| {
                let triv = Matrix::identity(f, alg.dim(d)).kron(&one);
                kernel(&self.coaction[d].sub(&triv)?)
            })
            .collect::<std::result::Result<_, _>>()?;
        let (algebra, emb) = alg
            .subalgebra(&parts)
            .map_err(|e| ComoduleError::CoinvariantsNotClosed(e.to_string()))?;
        Ok(Coinvariants { algebra, emb })
    }
}

#[derive(Clone, Debug)]
pub struct Coinvariants {
    pub algebra: GradedAlgebra,
    pub emb: GradedLinearMap,
}

// ---------------------------------------------------------------------------
// Galois data

/// A degree-0 simple tensor `coefficient * e_a ⊗ e_b` with `e_a, e_b ∈ A_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslationTerm {
    pub coeff: Scalar,
    pub left: usize,
    pub right: usize,
}

#[derive(Clone, Debug)]
pub struct GaloisData {
    pub ca: ComoduleAlgebra,
    pub b: Coinvariants,
    /// `A ⊗_B A` as a right `A`-module
    pub aba: TensorOverSub,
    /// `β_d : (A ⊗_B A)_d -> A_d ⊗ H`
    pub beta: Vec<Matrix>,
    pub beta_inv: Vec<Matrix>,
    /// `β^{-1}(1 ⊗ h)` for each basis `h`, in quotient coordinates of degree 0
    pub translation: Vec<Vector>,
    pub translation_terms: Vec<Vec<TranslationTerm>>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct GaloisDegree {
    pub degree: usize,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
}

impl GaloisDegree {
    pub fn bijective(&self) -> bool {
        self.source_dim == self.target_dim && self.rank == self.source_dim
    }
}

/// `A ⊗_B M` style helper: the module `A` restricted to `B`, tensored over `B` with `A`.
fn a_tensor_b_a(ca: &ComoduleAlgebra, b: &Coinvariants) -> TensorOverSub {
    let a = ca.algebra();
    let m = a.regular_module().restrict(&b.algebra, &b.emb);
    tensor_over_sub_unchecked(&m, &b.algebra, a, &b.emb)
}

/// Matrix of `β` in degree `d` on the quotient basis of `(A ⊗_B A)_d`.
fn beta_matrix(ca: &ComoduleAlgebra, aba: &TensorOverSub, d: usize) -> Matrix {
    let a = ca.algebra();
    let f = ca.field();
    let n = ca.hopf().dim();
    let cols: Vec<Vector> = (0..aba.module.dim(d))
        .map(|k| {
            let (i, x, j, y) = aba.basis_tensor(d, k);
            let ex = a.basis_vector(i, x);
            let mut out = f.zeros(a.dim(d) * n);
            for (c, p, q) in ca.coaction_terms(j, &a.basis_vector(j, y)) {
                let prod = a.mul(i, &ex, j, &a.basis_vector(j, p)).unwrap();
                axpy(&mut out, &c, &kron_vec(&prod, &ca.hopf().basis(q)));
            }
            out
        })
        .collect();
    Matrix::from_cols(f, a.dim(d) * n, &cols).expect("shape")
}

/// Per-degree rank report of the canonical map, without requiring bijectivity.
pub fn galois_degrees(ca: &ComoduleAlgebra, b: &Coinvariants) -> Vec<GaloisDegree> {
    let aba = a_tensor_b_a(ca, b);
    (0..=ca.top())
        .map(|d| {
            let m = beta_matrix(ca, &aba, d);
            GaloisDegree {
                degree: d,
                source_dim: m.cols(),
                target_dim: m.rows(),
                rank: m.rank(),
            }
        })
        .collect()
}

pub fn galois_map(ca: &ComoduleAlgebra, b: &Coinvariants) -> Result<GaloisData> {
    let a = ca.algebra();
    let n = ca.hopf().dim();
    let aba = a_tensor_b_a(ca, b);
    let betas: Vec<Matrix> = par::map_range(ca.top() + 1, |d| beta_matrix(ca, &aba, d));
    let mut beta_inv = Vec::with_capacity(betas.len());
    for (d, m) in betas.iter().enumerate() {
        let rank = m.rank();
        if m.rows() != m.cols() || rank != m.rows() {
            return Err(ComoduleError::NotGalois {
                degree: d,
                tensor_dim: m.cols(),
                target_dim: m.rows(),
                rank,
            });
        }
        beta_inv.push(m.inverse()?);
    }
    let mut translation = Vec::with_capacity(n);
    let mut translation_terms = Vec::with_capacity(n);
    for q in 0..n {
        let target = kron_vec(a.unit(), &ca.hopf().basis(q));
        let v = beta_inv[0].apply(&target);
        let terms = (0..v.len())
            .filter(|&k| !v[k].is_zero())
            .map(|k| {
                let (i, x, j, y) = aba.basis_tensor(0, k);
                debug_assert!(i == 0 && j == 0);
                TranslationTerm {
                    coeff: v[k].clone(),
                    left: x,
                    right: y,
                }
            })
            .collect();
        translation.push(v);
        translation_terms.push(terms);
    }
    Ok(GaloisData {
        ca: ca.clone(),
        b: b.clone(),
        aba,
        beta: betas,
        beta_inv,
        translation,
        translation_terms,
    })
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: String,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TranslationReport {
    pub checks: Vec<IdentityCheck>,
}

impl TranslationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl GaloisData {
    pub fn field(&self) -> Field {
        self.ca.field()
    }

    pub fn algebra(&self) -> &GradedAlgebra {
        self.ca.algebra()
    }

    pub fn hopf(&self) -> &HopfAlgebra {
        self.ca.hopf()
    }

    /// Simple tensors of `Σ X^h ⊗ Y^h` for an arbitrary `h`, by linearity.
    pub fn translation_of(&self, h: &[Scalar]) -> Vec<TranslationTerm> {
        let mut out: Vec<TranslationTerm> = Vec::new();
        for (q, c) in h.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for t in &self.translation_terms[q] {
                let coeff = c * &t.coeff;
                match out.iter_mut().find(|o| o.left == t.left && o.right == t.right) {
                    Some(o) => o.coeff = &o.coeff + &coeff,
                    None => out.push(TranslationTerm {
                        coeff,
                        left: t.left,
                        right: t.right,
                    }),
                }
            }
        }
        out.retain(|t| !t.coeff.is_zero());
        out
    }

    pub fn galois_degrees(&self) -> Vec<GaloisDegree> {
        self.beta
            .iter()
            .enumerate()
            .map(|(d, m)| GaloisDegree {
                degree: d,
                source_dim: m.cols(),
                target_dim: m.rows(),
                rank: m.rows(),
            })
            .collect()
    }

    /// `β(Σ X^h ⊗ Y^h) = 1 ⊗ h`, `Σ X^h Y^h = ε(h) 1`, and the three-fold identity
    /// `Σ X^t X^{Sh} ⊗ Y^{Sh} ⊗ Y^t = Σ X^t ⊗ X^h ⊗ Y^h Y^t` in `A ⊗_B A ⊗_B A`
    /// with `t` a right integral.
    pub fn verify_translation_identities(&self) -> TranslationReport {
        let a = self.algebra();
        let h = self.hopf();
        let n = h.dim();
        let f = self.field();
        let mut checks = Vec::new();
        let mut beta_fail = None;
        let mut mult_fail = None;
        for q in 0..n {
            let img = self.beta[0].apply(&self.translation[q]);
            if img != kron_vec(a.unit(), &h.basis(q)) && beta_fail.is_none() {
                beta_fail = Some(h.names()[q].clone());
            }
            let mut sum = f.zeros(a.dim(0));
            for t in &self.translation_terms[q] {
                let p = a.mul(0, &a.basis_vector(0, t.left), 0, &a.basis_vector(0, t.right)).unwrap();
                axpy(&mut sum, &t.coeff, &p);
            }
            if sum != scale(a.unit(), &h.counit()[q]) && mult_fail.is_none() {
                mult_fail = Some(h.names()[q].clone());
            }
        }
        checks.push(IdentityCheck {
            name: "beta of translation".into(),
            passed: beta_fail.is_none(),
            witness: beta_fail,
        });
        checks.push(IdentityCheck {
            name: "translation product".into(),
            passed: mult_fail.is_none(),
            witness: mult_fail,
        });
        let three = match h.right_integral() {
            Ok(t) => self.three_fold_failure(&t.vector),
            Err(e) => Some(e.to_string()),
        };
        checks.push(IdentityCheck {
            name: "three-fold identity".into(),
            passed: three.is_none(),
            witness: three,
        });
        TranslationReport { checks }
    }

    fn three_fold_failure(&self, t: &[Scalar]) -> Option<String> {
        let a0 = self.algebra().truncate(0);
        let f = self.field();
        let b0 = self.b.algebra.truncate(0);
        let emb0 = GradedLinearMap::new(0, b0.dims().to_vec(), a0.dims().to_vec(), vec![self.b.emb.block(0).clone()]);
        let aba0 = tensor_over_sub_unchecked(&a0.regular_module().restrict(&b0, &emb0), &b0, &a0, &emb0);
        let triple = tensor_over_sub_unchecked(&aba0.module.restrict(&b0, &emb0), &b0, &a0, &emb0);
        let e = |i: usize| a0.basis_vector(0, i);
        let pair = |x: &Vector, y: &Vector| aba0.simple(0, x, 0, y).unwrap();
        let tt = self.translation_of(t);
        let h = self.hopf();
        for q in 0..h.dim() {
            let sh = h.s(&h.basis(q));
            let ts = self.translation_of(&sh);
            let th = &self.translation_terms[q];
            let mut lhs = f.zeros(triple.module.dim(0));
            let mut rhs = f.zeros(triple.module.dim(0));
            for x in &tt {
                for y in &ts {
                    let xx = a0.mul(0, &e(x.left), 0, &e(y.left)).unwrap();
                    let p = pair(&xx, &e(y.right));
                    axpy(&mut lhs, &(&x.coeff * &y.coeff), &triple.simple(0, &p, 0, &e(x.right)).unwrap());
                }
                for y in th {
                    let yy = a0.mul(0, &e(y.right), 0, &e(x.right)).unwrap();
                    let p = pair(&e(x.left), &e(y.left));
                    axpy(&mut rhs, &(&x.coeff * &y.coeff), &triple.simple(0, &p, 0, &yy).unwrap());
                }
            }
            if lhs != rhs {
                return Some(h.names()[q].clone());
            }
        }
        None
    }

    /// The `H`-action `(h·f)(m) = Σ f(m X^{Sh}) Y^{Sh}` on a graded map `f: M -> N`
    /// between `A`-modules (only the degree-0 action of `A` is used).
    pub fn act_on_map(&self, m: &GradedModule, n: &GradedModule, f: &GradedLinearMap, h: &[Scalar]) -> GradedLinearMap {
        let sh = self.hopf().s(h);
        self.translation_sandwich(m, n, f, &self.translation_of(&sh))
    }

    fn translation_sandwich(
        &self,
        m: &GradedModule,
        n: &GradedModule,
        f: &GradedLinearMap,
        terms: &[TranslationTerm],
    ) -> GradedLinearMap {
        let a = self.algebra();
        let field = self.field();
        let mut out = GradedLinearMap::zero(field, f.shift(), f.src_dims(), f.tgt_dims());
        for t in terms {
            let x = a.basis_vector(0, t.left);
            let y = a.basis_vector(0, t.right);
            let blocks: Vec<Matrix> = (0..f.src_dims().len())
                .map(|d| match f.target_degree(d) {
                    Some(e) => n.action_matrix(e, 0, &y).dot(f.block(d)).dot(&m.action_matrix(d, 0, &x)),
                    None => f.block(d).clone(),
                })
                .collect();
            let term = GradedLinearMap::new(f.shift(), f.src_dims().to_vec(), f.tgt_dims().to_vec(), blocks);
            out.add_scaled(&t.coeff, &term);
        }
        out
    }

    /// Matrix of the action of basis element `q` on a space of maps with the given basis,
    /// in the coordinates of that basis; `None` if the space is not stable.
    pub fn action_matrix_on(
        &self,
        m: &GradedModule,
        n: &GradedModule,
        basis: &[GradedLinearMap],
        q: usize,
    ) -> Option<Matrix> {
        let field = self.field();
        if basis.is_empty() {
            return Some(Matrix::zeros(field, 0, 0));
        }
        let flat: Vec<Vector> = basis.iter().map(GradedLinearMap::flatten).collect();
        let sys = Matrix::from_cols(field, flat[0].len(), &flat).ok()?;
        let h = self.hopf().basis(q);
        let images: Vec<Vector> = basis.iter().map(|f| self.act_on_map(m, n, f, &h).flatten()).collect();
        let coords = linalg::solve_many(&sys, &images).ok()?;
        let cols: Option<Vec<Vector>> = coords.into_iter().collect();
        Matrix::from_cols(field, basis.len(), &cols?).ok()
    }

    /// `ξ(f)(p) = Σ f(p X^t) ⊗_B Y^t` for `f: P -> Q` with `t = ` right integral;
    /// the result maps `P` into `Q ⊗_B A` (given as `qa`).
    pub fn xi(&self, p: &GradedModule, qa: &TensorOverSub, f: &GradedLinearMap, t: &[Scalar]) -> GradedLinearMap {
        let a = self.algebra();
        let field = self.field();
        let tgt = qa.module.dims().to_vec();
        let mut out = GradedLinearMap::zero(field, f.shift(), f.src_dims(), &tgt);
        for term in self.translation_of(t) {
            let x = a.basis_vector(0, term.left);
            let y = a.basis_vector(0, term.right);
            let blocks: Vec<Matrix> = (0..f.src_dims().len())
                .map(|d| match f.target_degree(d) {
                    Some(e) => qa.simple_matrix(e, 0, &y).dot(f.block(d)).dot(&p.action_matrix(d, 0, &x)),
                    None => Matrix::zeros(field, 0, f.src_dims()[d]),
                })
                .collect();
            let piece = GradedLinearMap::new(f.shift(), f.src_dims().to_vec(), tgt.clone(), blocks);
            out.add_scaled(&term.coeff, &piece);
        }
        out
    }

    /// `M ⊗_B A ≅ M ⊗ H`: forward `m ⊗ a -> Σ m a_0 ⊗ a_1`, inverse `m ⊗ h -> Σ m X^h ⊗ Y^h`.
    pub fn hopf_module_iso(&self, m: &GradedModule) -> HopfModuleIso {
        let a = self.algebra();
        let field = self.field();
        let h = self.hopf();
        let n = h.dim();
        let mb = m.restrict(&self.b.algebra, &self.b.emb);
        let t = tensor_over_sub_unchecked(&mb, &self.b.algebra, a, &self.b.emb);
        let top = a.top();
        let mut forward = Vec::with_capacity(top + 1);
        let mut inverse = Vec::with_capacity(top + 1);
        for d in 0..=top {
            let cols: Vec<Vector> = (0..t.module.dim(d))
                .map(|k| {
                    let (i, x, j, y) = t.basis_tensor(d, k);
                    let mx = field.unit_vector(m.dim(i), x);
                    let mut out = field.zeros(m.dim(d) * n);
                    for (c, p, q) in self.ca.coaction_terms(j, &a.basis_vector(j, y)) {
                        let v = m.act_vec(i, &mx, j, &a.basis_vector(j, p));
                        axpy(&mut out, &c, &kron_vec(&v, &h.basis(q)));
                    }
                    out
                })
                .collect();
            forward.push(Matrix::from_cols(field, m.dim(d) * n, &cols).expect("shape"));
            let mut inv = Matrix::zeros(field, t.module.dim(d), m.dim(d) * n);
            for x in 0..m.dim(d) {
                for q in 0..n {
                    let mut col = field.zeros(t.module.dim(d));
                    for term in &self.translation_terms[q] {
                        let mx = m.act_vec(d, &field.unit_vector(m.dim(d), x), 0, &a.basis_vector(0, term.left));
                        let s = t.simple(d, &mx, 0, &a.basis_vector(0, term.right)).unwrap();
                        axpy(&mut col, &term.coeff, &s);
                    }
                    for (r, c) in col.into_iter().enumerate() {
                        inv.set(r, x * n + q, c);
                    }
                }
            }
            inverse.push(inv);
        }
        HopfModuleIso {
            tensor: t,
            forward,
            inverse,
        }
    }
}

#[derive(Clone, Debug)]
pub struct HopfModuleIso {
    pub tensor: TensorOverSub,
    pub forward: Vec<Matrix>,
    pub inverse: Vec<Matrix>,
}

impl HopfModuleIso {
    pub fn roundtrips(&self) -> bool {
        self.forward
            .iter()
            .zip(&self.inverse)
            .all(|(f, g)| f.dot(g).is_identity() && g.dot(f).is_identity())
    }
}

// ---------------------------------------------------------------------------
// module algebras, smash products, duality

/// A left action of a Hopf algebra on a graded algebra, degree by degree:
/// `mats[d][q]` is the action of basis element `q` on `R_d`.
#[derive(Clone, Debug)]
pub struct HAction {
    pub hopf: HopfAlgebra,
    pub mats: Vec<Vec<Matrix>>,
}

impl HAction {
    pub fn trivial(r: &GradedAlgebra, hopf: &HopfAlgebra) -> HAction {
        let mats = (0..=r.top())
            .map(|d| {
                (0..hopf.dim())
                    .map(|q| Matrix::identity(r.field(), r.dim(d)).scaled(&hopf.counit()[q]))
                    .collect()
            })
            .collect();
        HAction {
            hopf: hopf.clone(),
            mats,
        }
    }

    pub fn act(&self, d: usize, h: &[Scalar]) -> Matrix {
        let dim = self.mats[d].first().map_or(0, Matrix::rows);
        let mut m = Matrix::zeros(self.hopf.field(), dim, dim);
        for (q, c) in h.iter().enumerate() {
            if !c.is_zero() {
                m.add_scaled(c, &self.mats[d][q]);
            }
        }
        m
    }

    /// Module axioms and the module-algebra law `h·(rs) = Σ (h_1·r)(h_2·s)`, `h·1 = ε(h) 1`.
    pub fn check(&self, r: &GradedAlgebra) -> Result<()> {
        let h = &self.hopf;
        let n = h.dim();
        let top = r.top();
        for d in 0..=top {
            if !self.act(d, h.unit()).is_identity() {
                return Err(ComoduleError::BadAction(format!("unit acts nontrivially in degree {d}")));
            }
            for p in 0..n {
                for q in 0..n {
                    let pq = h.mul(&h.basis(p), &h.basis(q));
                    if self.act(d, &pq) != self.mats[d][p].dot(&self.mats[d][q]) {
                        return Err(ComoduleError::BadAction(format!("not a module in degree {d}")));
                    }
                }
            }
        }
        for q in 0..n {
            let lhs = self.mats[0][q].apply(r.unit());
            if lhs != scale(r.unit(), &h.counit()[q]) {
                return Err(ComoduleError::BadAction("h·1 != ε(h)1".into()));
            }
        }
        for i in 0..=top {
            for j in 0..=top - i {
                for q in 0..n {
                    let terms = h.coproduct_terms(&h.basis(q));
                    for a in 0..r.dim(i) {
                        for b in 0..r.dim(j) {
                            let x = r.basis_vector(i, a);
                            let y = r.basis_vector(j, b);
                            let lhs = self.mats[i + j][q].apply(&r.mul(i, &x, j, &y).unwrap());
                            let mut rhs = r.field().zeros(r.dim(i + j));
                            for (c, p1, p2) in &terms {
                                let hx = self.mats[i][*p1].apply(&x);
                                let hy = self.mats[j][*p2].apply(&y);
                                axpy(&mut rhs, c, &r.mul(i, &hx, j, &hy).unwrap());
                            }
                            if lhs != rhs {
                                return Err(ComoduleError::BadAction(format!(
                                    "module-algebra law fails at degrees ({i},{j})"
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Invariants `{x : h·x = ε(h) x}` per degree.
    pub fn invariants(&self) -> Vec<Subspace> {
        let h = &self.hopf;
        self.mats
            .iter()
            .map(|row| {
                let dim = row.first().map_or(0, Matrix::rows);
                let f = h.field();
                let mut stacked = Matrix::zeros(f, 0, dim);
                for (q, m) in row.iter().enumerate() {
                    let shifted = m.sub(&Matrix::identity(f, dim).scaled(&h.counit()[q])).expect("square");
                    stacked = stacked.vstack(&shifted);
                }
                kernel(&stacked).expect("field")
            })
            .collect()
    }
}

/// `R # H` on `R ⊗ H` (index `r * dim H + h`) with `(r#h)(r'#h') = Σ r(h_1·r') # h_2 h'`.
pub fn smash_product(r: &GradedAlgebra, action: &HAction) -> Result<GradedAlgebra> {
    action.check(r)?;
    let h = &action.hopf;
    let n = h.dim();
    let dims: Vec<usize> = r.dims().iter().map(|&d| d * n).collect();
    let unit = kron_vec(r.unit(), h.unit());
    let labels: Vec<Vec<String>> = (0..=r.top())
        .map(|d| {
            r.labels(d)
                .iter()
                .flat_map(|a| h.names().iter().map(move |q| format!("{a}#{q}")))
                .collect()
        })
        .collect();
    let alg = GradedAlgebra::from_products(r.field(), dims, unit, |i, x, j, y| {
        let (a, p) = (x / n, x % n);
        let (b, q) = (y / n, y % n);
        let mut out = r.field().zeros(r.dim(i + j) * n);
        let eb = r.basis_vector(j, b);
        for (c, p1, p2) in h.coproduct_terms(&h.basis(p)) {
            let hb = action.mats[j][p1].apply(&eb);
            let prod = r.mul(i, &r.basis_vector(i, a), j, &hb).unwrap();
            let hh = h.mul(&h.basis(p2), &h.basis(q));
            axpy(&mut out, &c, &kron_vec(&prod, &hh));
        }
        out
    })?
    .with_labels(labels);
    Ok(alg)
}

/// The coaction `id ⊗ Δ` making `R # H` an `H`-comodule algebra.
pub fn smash_coaction(r: &GradedAlgebra, hopf: &HopfAlgebra) -> Vec<Matrix> {
    (0..=r.top())
        .map(|d| {
            // row (a n + p) n + q is the coefficient of (a # p) ⊗ q
            Matrix::identity(r.field(), r.dim(d)).kron(hopf.comult())
        })
        .collect()
}

/// An algebra with a left `H`-action as a comodule algebra over `H*`:
/// `ρ(x) = Σ_i (h_i·x) ⊗ h^i`.
pub fn comodule_from_module(e: &GradedAlgebra, action: &HAction) -> Result<ComoduleAlgebra> {
    action.check(e)?;
    let h = &action.hopf;
    let n = h.dim();
    let f = e.field();
    let coaction = (0..=e.top())
        .map(|d| {
            let m = e.dim(d);
            let mut rho = Matrix::zeros(f, m * n, m);
            for x in 0..m {
                for i in 0..n {
                    let hx = action.mats[d][i].col(x);
                    for (a, c) in hx.into_iter().enumerate() {
                        rho.set(a * n + i, x, c);
                    }
                }
            }
            rho
        })
        .collect();
    ComoduleAlgebra::new(e.clone(), h.dual(), coaction)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::AlgebraPresentation;

    const Q: Field = Field::Rationals;

    fn kz2_galois() -> GaloisData {
        let h = HopfAlgebra::cyclic_group(2, Q);
        let ca = ComoduleAlgebra::regular(&h);
        let b = ca.coinvariants().unwrap();
        galois_map(&ca, &b).unwrap()
    }

    #[test]
    fn group_algebra_is_galois_over_field() {
        let gd = kz2_galois();
        assert_eq!(gd.b.algebra.dims(), &[1]);
        assert_eq!(gd.beta[0].rows(), 4);
        // X^g ⊗ Y^g = g ⊗ g
        assert_eq!(
            gd.translation_terms[1],
            vec![TranslationTerm {
                coeff: Q.one(),
                left: 1,
                right: 1
            }]
        );
        assert!(gd.verify_translation_identities().passed());
    }

    #[test]
    fn trivial_coaction_is_not_galois() {
        let h = HopfAlgebra::cyclic_group(2, Q);
        let ca = ComoduleAlgebra::trivial(&h.as_algebra(), &h);
        let b = ca.coinvariants().unwrap();
        assert_eq!(b.algebra.dims(), &[2]);
        match galois_map(&ca, &b) {
            Err(ComoduleError::NotGalois { tensor_dim, target_dim, .. }) => assert_eq!((tensor_dim, target_dim), (2, 4)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn corrupted_translation_detected() {
        let mut gd = kz2_galois();
        gd.translation.swap(0, 1);
        gd.translation_terms.swap(0, 1);
        let r = gd.verify_translation_identities();
        let c = r.checks.iter().find(|c| c.name == "beta of translation").unwrap();
        assert!(!c.passed);
        assert_eq!(c.witness.as_deref(), Some("1"));
    }

    #[test]
    fn action_on_maps_kz2() {
        let gd = kz2_galois();
        let a = gd.algebra().regular_module();
        let k = GradedLinearMap::new(0, vec![2], vec![2], vec![Matrix::from_i64(Q, &[vec![1, 2], vec![3, 4]])]);
        let g = vec![Q.zero(), Q.one()];
        let gf = gd.act_on_map(&a, &a, &k, &g);
        // (g·f)(m) = f(m g) g
        let r = a.action_matrix(0, 0, &g);
        assert_eq!(gf.block(0), &r.dot(k.block(0)).dot(&r));
        let unit = gd.act_on_map(&a, &a, &k, &[Q.one(), Q.zero()]);
        assert_eq!(unit, k);
    }

    #[test]
    fn hopf_module_iso_roundtrips() {
        let gd = kz2_galois();
        let iso = gd.hopf_module_iso(&gd.algebra().regular_module());
        assert!(iso.roundtrips());
        assert_eq!(iso.forward[0].rows(), 4);
    }

    #[test]
    fn smash_with_trivial_algebra_is_hopf() {
        let h = HopfAlgebra::cyclic_group(2, Q);
        let k = AlgebraPresentation {
            vertices: vec!["v".into()],
            ..Default::default()
        }
        .realize(Q, 0)
        .unwrap();
        let s = smash_product(&k, &HAction::trivial(&k, &h)).unwrap();
        assert_eq!(s.dims(), &[2]);
        s.check_axioms().unwrap();
        assert!(s.is_commutative());
    }

    fn sign_action_on_dual_numbers(field: Field) -> (GradedAlgebra, HAction) {
        let r = AlgebraPresentation::truncated_polynomial(2).realize(field, 1).unwrap();
        let h = HopfAlgebra::cyclic_group(2, field);
        let mats = vec![
            vec![Matrix::identity(field, 1), Matrix::identity(field, 1)],
            vec![Matrix::identity(field, 1), Matrix::identity(field, 1).scaled(&field.int(-1))],
        ];
        (r, HAction { hopf: h, mats })
    }

    #[test]
    fn comodule_from_sign_action() {
        let (r, act) = sign_action_on_dual_numbers(Q);
        act.check(&r).unwrap();
        let ca = comodule_from_module(&r, &act).unwrap();
        let b = ca.coinvariants().unwrap();
        assert_eq!(b.algebra.dims(), &[1, 0]);
        let inv = act.invariants();
        assert_eq!(inv.iter().map(Subspace::dim).collect::<Vec<_>>(), vec![1, 0]);
    }

    #[test]
    fn smash_of_dual_numbers_is_galois() {
        let (r, act) = sign_action_on_dual_numbers(Q);
        let s = smash_product(&r, &act).unwrap();
        s.check_axioms().unwrap();
        let ca = ComoduleAlgebra::new(s, act.hopf.clone(), smash_coaction(&r, &act.hopf)).unwrap();
        let b = ca.coinvariants().unwrap();
        assert_eq!(b.algebra.dims(), r.dims());
        let gd = galois_map(&ca, &b).unwrap();
        assert!(gd.verify_translation_identities().passed());
    }

    #[test]
    fn bad_action_rejected() {
        let (r, mut act) = sign_action_on_dual_numbers(Q);
        act.mats[1][1] = Matrix::identity(Q, 1).scaled(&Q.int(2));
        assert!(matches!(act.check(&r), Err(ComoduleError::BadAction(_))));
    }
}
