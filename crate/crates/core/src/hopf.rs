//! Hopf algebras given by explicit structure matrices.
//!
//! A finite-dimensional [`HopfAlgebra`] stores multiplication as an `n x n^2`
//! matrix (column `a * n + b` is `e_a e_b`), comultiplication as `n^2 x n`
//! (row `a * n + b` is the coefficient of `e_a ⊗ e_b`), the counit as a row
//! and the antipode as a square matrix. [`GradedHopf`] carries the same data
//! on a truncated graded algebra; axiom checks for both share one code path,
//! the ungraded case being the graded one with a single degree.

use serde::Serialize;
use thiserror::Error;

use crate::graded::{AlgebraError, GradedAlgebra, PathRef, RealizedPresentation};
use crate::linalg::{self, dot, kron_vec, Field, LinalgError, Matrix, Scalar, Vector};
use crate::par;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HopfError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("{what}: expected {expected}, got {got}")]
    Shape {
        what: &'static str,
        expected: String,
        got: String,
    },
    #[error("integral space has dimension {0}, expected 1")]
    IntegralDimension(usize),
    #[error("missing image for generator {0}")]
    MissingGenerator(String),
}

pub type Result<T> = std::result::Result<T, HopfError>;

fn shape_err(what: &'static str, er: usize, ec: usize, m: &Matrix) -> HopfError {
    HopfError::Shape {
        what,
        expected: format!("{er}x{ec}"),
        got: format!("{}x{}", m.rows(), m.cols()),
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct AxiomCheck {
    pub axiom: String,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct HopfReport {
    pub checks: Vec<AxiomCheck>,
    pub commutative: bool,
    pub cocommutative: bool,
    pub antipode_bijective: bool,
}

impl HopfReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, axiom: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct IntegralElement {
    #[serde(serialize_with = "crate::linalg::serialize_vector")]
    pub vector: Vector,
    pub side: Side,
}

// ---------------------------------------------------------------------------
// finite-dimensional Hopf algebras

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HopfAlgebra {
    field: Field,
    names: Vec<String>,
    mult: Matrix,
    unit: Vector,
    comult: Matrix,
    counit: Vector,
    antipode: Matrix,
}

impl HopfAlgebra {
    pub fn new(
        names: Vec<String>,
        mult: Matrix,
        unit: Vector,
        comult: Matrix,
        counit: Vector,
        antipode: Matrix,
    ) -> Result<Self> {
        let n = names.len();
        let field = mult.field();
        if mult.rows() != n || mult.cols() != n * n {
            return Err(shape_err("multiplication", n, n * n, &mult));
        }
        if comult.rows() != n * n || comult.cols() != n {
            return Err(shape_err("comultiplication", n * n, n, &comult));
        }
        if antipode.rows() != n || antipode.cols() != n {
            return Err(shape_err("antipode", n, n, &antipode));
        }
        for (what, len) in [("unit", unit.len()), ("counit", counit.len())] {
            if len != n {
                return Err(HopfError::Shape {
                    what,
                    expected: n.to_string(),
                    got: len.to_string(),
                });
            }
        }
        for m in [&comult, &antipode] {
            if m.field() != field {
                return Err(LinalgError::FieldMismatch(field, m.field()).into());
            }
        }
        Ok(HopfAlgebra {
            field,
            names,
            mult,
            unit,
            comult,
            counit,
            antipode,
        })
    }

    /// Group algebra of the cyclic group of order `n`, basis `1, g, ..., g^{n-1}`.
    pub fn cyclic_group(n: usize, field: Field) -> HopfAlgebra {
        assert!(n >= 1);
        let names = (0..n)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "g".to_string(),
                _ => format!("g^{i}"),
            })
            .collect();
        let mut mult = Matrix::zeros(field, n, n * n);
        let mut comult = Matrix::zeros(field, n * n, n);
        let mut antipode = Matrix::zeros(field, n, n);
        for a in 0..n {
            for b in 0..n {
                mult.set((a + b) % n, a * n + b, field.one());
            }
            comult.set(a * n + a, a, field.one());
            antipode.set((n - a) % n, a, field.one());
        }
        let counit = vec![field.one(); n];
        HopfAlgebra::new(names, mult, field.unit_vector(n, 0), comult, counit, antipode)
            .expect("cyclic group shapes")
    }

    /// The one-dimensional Hopf algebra `k`.
    pub fn trivial(field: Field) -> HopfAlgebra {
        HopfAlgebra::cyclic_group(1, field)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn mult(&self) -> &Matrix {
        &self.mult
    }

    pub fn unit(&self) -> &Vector {
        &self.unit
    }

    pub fn comult(&self) -> &Matrix {
        &self.comult
    }

    pub fn counit(&self) -> &Vector {
        &self.counit
    }

    pub fn antipode(&self) -> &Matrix {
        &self.antipode
    }

    pub fn basis(&self, i: usize) -> Vector {
        self.field.unit_vector(self.dim(), i)
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        self.mult.apply(&kron_vec(x, y))
    }

    pub fn comul(&self, x: &[Scalar]) -> Vector {
        self.comult.apply(x)
    }

    pub fn eps(&self, x: &[Scalar]) -> Scalar {
        dot(&self.counit, x)
    }

    pub fn s(&self, x: &[Scalar]) -> Vector {
        self.antipode.apply(x)
    }

    /// Inverse of the antipode (it is bijective for every accepted Hopf algebra).
    pub fn antipode_inverse(&self) -> Result<Matrix> {
        Ok(self.antipode.inverse()?)
    }

    /// Sweedler components of `Δ(x)` as `(coefficient, left index, right index)`.
    pub fn coproduct_terms(&self, x: &[Scalar]) -> Vec<(Scalar, usize, usize)> {
        let n = self.dim();
        self.comul(x)
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (c, k / n, k % n))
            .collect()
    }

    pub fn as_algebra(&self) -> GradedAlgebra {
        GradedAlgebra::concentrated(self.field, &self.mult, self.unit.clone()).expect("shape")
    }

    pub fn to_graded(&self) -> GradedHopf {
        GradedHopf {
            algebra: self.as_algebra().with_labels(vec![self.names.clone()]),
            comult: vec![self.comult.clone()],
            counit: self.counit.clone(),
            antipode: vec![self.antipode.clone()],
        }
    }

    pub fn verify_axioms(&self) -> HopfReport {
        self.to_graded().verify_axioms()
    }

    /// Dual Hopf algebra on the dual basis, all structure maps transposed.
    pub fn dual(&self) -> HopfAlgebra {
        let names = self
            .names
            .iter()
            .map(|s| match s.strip_suffix('*') {
                Some(base) => base.to_string(),
                None => format!("{s}*"),
            })
            .collect();
        HopfAlgebra::new(
            names,
            self.comult.transpose(),
            self.counit.clone(),
            self.mult.transpose(),
            self.unit.clone(),
            self.antipode.transpose(),
        )
        .expect("transposed shapes")
    }

    fn integral(&self, side: Side) -> Result<IntegralElement> {
        let n = self.dim();
        let f = self.field;
        let mut rows: Vec<Vector> = Vec::new();
        for x in 0..n {
            // matrix of t -> t x (right) or t -> x t (left), minus ε(x) id
            let mut m = Matrix::zeros(f, n, n);
            for a in 0..n {
                let col = match side {
                    Side::Right => self.mult.col(a * n + x),
                    Side::Left => self.mult.col(x * n + a),
                };
                for (r, c) in col.into_iter().enumerate() {
                    m.set(r, a, c);
                }
            }
            let e = &self.counit[x];
            for i in 0..n {
                let v = m.get(i, i) - e;
                m.set(i, i, v);
            }
            rows.extend((0..n).map(|i| m.row(i).to_vec()));
        }
        let sys = Matrix::from_rows(f, n, &rows)?;
        let ker = linalg::kernel(&sys)?;
        if ker.dim() != 1 {
            return Err(HopfError::IntegralDimension(ker.dim()));
        }
        // canonical echelon basis already has leading coordinate 1
        Ok(IntegralElement {
            vector: ker.basis()[0].clone(),
            side,
        })
    }

    /// Nonzero `t` with `t x = ε(x) t` for all `x`, normalized to leading coordinate 1.
    pub fn right_integral(&self) -> Result<IntegralElement> {
        self.integral(Side::Right)
    }

    pub fn left_integral(&self) -> Result<IntegralElement> {
        self.integral(Side::Left)
    }

    /// Maschke-type criterion `ε(t) != 0`.
    pub fn is_semisimple(&self) -> Result<bool> {
        let t = self.right_integral()?;
        Ok(!self.eps(&t.vector).is_zero())
    }

    pub fn is_cosemisimple(&self) -> Result<bool> {
        self.dual().is_semisimple()
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|a| (0..n).all(|b| self.mult.col(a * n + b) == self.mult.col(b * n + a)))
    }

    pub fn is_cocommutative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|x| (0..n).all(|a| (0..n).all(|b| self.comult.get(a * n + b, x) == self.comult.get(b * n + a, x))))
    }

    /// A copy with the antipode replaced, for perturbation experiments.
    pub fn with_antipode(&self, antipode: Matrix) -> Result<HopfAlgebra> {
        HopfAlgebra::new(
            self.names.clone(),
            self.mult.clone(),
            self.unit.clone(),
            self.comult.clone(),
            self.counit.clone(),
            antipode,
        )
    }
}

// ---------------------------------------------------------------------------
// tensor layouts for graded checks

/// Offsets of the blocks `A_i ⊗ A_{d-i}` inside `(A ⊗ A)_d`.
#[derive(Clone, Debug)]
pub struct PairLayout {
    pub offsets: Vec<usize>,
    pub total: usize,
}

impl PairLayout {
    pub fn new(dims: &[usize], d: usize) -> Self {
        let mut offsets = Vec::with_capacity(d + 1);
        let mut total = 0;
        for i in 0..=d {
            offsets.push(total);
            total += dims[i] * dims[d - i];
        }
        PairLayout { offsets, total }
    }

    pub fn index(&self, dims: &[usize], d: usize, i: usize, a: usize, b: usize) -> usize {
        self.offsets[i] + a * dims[d - i] + b
    }
}

/// Offsets of blocks `A_p ⊗ A_q ⊗ A_{d-p-q}` inside `(A ⊗ A ⊗ A)_d`.
#[derive(Clone, Debug)]
struct TripleLayout {
    offsets: Vec<Vec<usize>>,
    total: usize,
}

impl TripleLayout {
    fn new(dims: &[usize], d: usize) -> Self {
        let mut offsets = vec![Vec::new(); d + 1];
        let mut total = 0;
        for p in 0..=d {
            for q in 0..=d - p {
                offsets[p].push(total);
                total += dims[p] * dims[q] * dims[d - p - q];
            }
        }
        TripleLayout { offsets, total }
    }

    fn index(&self, dims: &[usize], d: usize, (p, a): (usize, usize), (q, b): (usize, usize), c: usize) -> usize {
        let r = d - p - q;
        self.offsets[p][q] + (a * dims[q] + b) * dims[r] + c
    }
}

// ---------------------------------------------------------------------------
// graded Hopf algebras

/// A graded Hopf algebra truncated at the top degree of its algebra:
/// `comult[d]` maps `A_d` into `(A ⊗ A)_d` in [`PairLayout`] coordinates,
/// the counit lives on `A_0` and the antipode preserves degree.
#[derive(Clone, Debug)]
pub struct GradedHopf {
    algebra: GradedAlgebra,
    comult: Vec<Matrix>,
    counit: Vector,
    antipode: Vec<Matrix>,
}

/// Images of the presentation generators under `Δ`, `ε`, `S`.
/// Tensors are given as `(coefficient, left path, right path)` terms.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GeneratorImages {
    pub comult: Vec<(PathRef, Vec<(Scalar, PathRef, PathRef)>)>,
    pub counit: Vec<(PathRef, Scalar)>,
    pub antipode: Vec<(PathRef, Vec<(Scalar, PathRef)>)>,
}

impl GradedHopf {
    pub fn new(algebra: GradedAlgebra, comult: Vec<Matrix>, counit: Vector, antipode: Vec<Matrix>) -> Result<Self> {
        let dims = algebra.dims().to_vec();
        for d in 0..dims.len() {
            let pl = PairLayout::new(&dims, d);
            if comult[d].rows() != pl.total || comult[d].cols() != dims[d] {
                return Err(shape_err("graded comultiplication", pl.total, dims[d], &comult[d]));
            }
            if antipode[d].rows() != dims[d] || antipode[d].cols() != dims[d] {
                return Err(shape_err("graded antipode", dims[d], dims[d], &antipode[d]));
            }
        }
        if counit.len() != dims[0] {
            return Err(HopfError::Shape {
                what: "counit",
                expected: dims[0].to_string(),
                got: counit.len().to_string(),
            });
        }
        Ok(GradedHopf {
            algebra,
            comult,
            counit,
            antipode,
        })
    }

    /// Extends generator images multiplicatively (`Δ`, `ε`) and anti-multiplicatively (`S`)
    /// over the path basis of a realized presentation.
    pub fn from_generators(rp: &RealizedPresentation, images: &GeneratorImages) -> Result<Self> {
        let alg = &rp.algebra;
        let field = alg.field();
        let dims = alg.dims().to_vec();
        let top = alg.top();
        let elem = |p: &PathRef| -> Result<(usize, Vector)> {
            rp.path_element(p)
                .ok_or_else(|| HopfError::MissingGenerator(format!("{p:?} outside the window")))
        };
        let pair_elem = |terms: &[(Scalar, PathRef, PathRef)]| -> Result<Option<(usize, Vector)>> {
            let mut acc: Option<(usize, Vector)> = None;
            for (c, l, r) in terms {
                let (dl, vl) = elem(l)?;
                let (dr, vr) = elem(r)?;
                let d = dl + dr;
                let pl = PairLayout::new(&dims, d);
                let acc = acc.get_or_insert_with(|| (d, field.zeros(pl.total)));
                if acc.0 != d {
                    return Err(HopfError::MissingGenerator("inhomogeneous coproduct".into()));
                }
                let t = kron_vec(&vl, &vr);
                for (k, x) in t.into_iter().enumerate() {
                    if !x.is_zero() {
                        let idx = pl.offsets[dl] + k;
                        acc.1[idx] = &acc.1[idx] + &(c * &x);
                    }
                }
            }
            Ok(acc)
        };
        let lookup_comult = |g: &PathRef| -> Result<(usize, Vector)> {
            let (_, terms) = images
                .comult
                .iter()
                .find(|(p, _)| p == g)
                .ok_or_else(|| HopfError::MissingGenerator(format!("Δ of {g:?}")))?;
            let (d, _) = elem(g)?;
            Ok(pair_elem(terms)?.unwrap_or_else(|| (d, field.zeros(PairLayout::new(&dims, d).total))))
        };
        let lookup_antipode = |g: &PathRef| -> Result<(usize, Vector)> {
            let (_, terms) = images
                .antipode
                .iter()
                .find(|(p, _)| p == g)
                .ok_or_else(|| HopfError::MissingGenerator(format!("S of {g:?}")))?;
            let (d, _) = elem(g)?;
            let mut acc = field.zeros(dims[d]);
            for (c, p) in terms {
                let (dp, v) = elem(p)?;
                if dp != d {
                    return Err(HopfError::MissingGenerator("antipode changes degree".into()));
                }
                linalg::axpy(&mut acc, c, &v);
            }
            Ok((d, acc))
        };
        let lookup_counit = |g: &PathRef| -> Result<Scalar> {
            images
                .counit
                .iter()
                .find(|(p, _)| p == g)
                .map(|(_, c)| c.clone())
                .ok_or_else(|| HopfError::MissingGenerator(format!("ε of {g:?}")))
        };
        let mut comult = Vec::with_capacity(top + 1);
        let mut antipode = Vec::with_capacity(top + 1);
        for d in 0..=top {
            let pl = PairLayout::new(&dims, d);
            let mut dcols = Vec::with_capacity(dims[d]);
            let mut scols = Vec::with_capacity(dims[d]);
            for k in 0..dims[d] {
                match rp.basis_path(d, k) {
                    v @ PathRef::Vertex(_) => {
                        dcols.push(lookup_comult(&v)?.1);
                        scols.push(lookup_antipode(&v)?.1);
                    }
                    PathRef::Arrows(arrows) => {
                        let mut cur = lookup_comult(&PathRef::Arrows(vec![arrows[0]]))?;
                        let mut sc = lookup_antipode(&PathRef::Arrows(vec![arrows[0]]))?;
                        for &a in &arrows[1..] {
                            let g = PathRef::Arrows(vec![a]);
                            let next = lookup_comult(&g)?;
                            cur = (cur.0 + next.0, pair_mul(alg, cur.0, &cur.1, next.0, &next.1));
                            let s_next = lookup_antipode(&g)?;
                            let prod = alg.mul(s_next.0, &s_next.1, sc.0, &sc.1).expect("within window");
                            sc = (sc.0 + s_next.0, prod);
                        }
                        debug_assert_eq!(cur.1.len(), pl.total);
                        dcols.push(cur.1);
                        scols.push(sc.1);
                    }
                }
            }
            comult.push(Matrix::from_cols(field, pl.total, &dcols)?);
            antipode.push(Matrix::from_cols(field, dims[d], &scols)?);
        }
        let mut counit = field.zeros(dims[0]);
        for (k, c) in counit.iter_mut().enumerate() {
            *c = lookup_counit(&rp.basis_path(0, k))?;
        }
        GradedHopf::new(alg.clone(), comult, counit, antipode)
    }

    pub fn algebra(&self) -> &GradedAlgebra {
        &self.algebra
    }

    pub fn field(&self) -> Field {
        self.algebra.field()
    }

    pub fn comult(&self, d: usize) -> &Matrix {
        &self.comult[d]
    }

    pub fn counit(&self) -> &Vector {
        &self.counit
    }

    pub fn antipode(&self, d: usize) -> &Matrix {
        &self.antipode[d]
    }

    pub fn with_antipode(&self, antipode: Vec<Matrix>) -> Result<GradedHopf> {
        GradedHopf::new(self.algebra.clone(), self.comult.clone(), self.counit.clone(), antipode)
    }

    /// The degree-0 Hopf subalgebra.
    pub fn degree_zero(&self) -> Result<HopfAlgebra> {
        let a0 = &self.algebra;
        let n = a0.dim(0);
        let f = self.field();
        let mut mult = Matrix::zeros(f, n, n * n);
        for a in 0..n {
            for b in 0..n {
                let col = a0.rmul(0, 0, b).col(a);
                for (r, c) in col.into_iter().enumerate() {
                    mult.set(r, a * n + b, c);
                }
            }
        }
        HopfAlgebra::new(
            a0.labels(0).to_vec(),
            mult,
            a0.unit().clone(),
            self.comult[0].clone(),
            self.counit.clone(),
            self.antipode[0].clone(),
        )
    }

    /// `(id ⊗ p) Δ` restricted to degree `d`: the coaction `A_d -> A_d ⊗ A_0`.
    pub fn coaction_to_degree_zero(&self, d: usize) -> Matrix {
        let dims = self.algebra.dims();
        let pl = PairLayout::new(dims, d);
        let rows: Vec<usize> = (0..dims[d] * dims[0]).map(|k| pl.offsets[d] + k).collect();
        let m = &self.comult[d];
        let mut out = Matrix::zeros(self.field(), rows.len(), m.cols());
        for (i, &r) in rows.iter().enumerate() {
            for c in 0..m.cols() {
                out.set(i, c, m.get(r, c).clone());
            }
        }
        out
    }

    fn label(&self, d: usize, k: usize) -> String {
        self.algebra.labels(d)[k].clone()
    }

    pub fn verify_axioms(&self) -> HopfReport {
        let alg = &self.algebra;
        let mut checks = Vec::new();
        let push = |checks: &mut Vec<AxiomCheck>, axiom: &str, witness: Option<String>| {
            checks.push(AxiomCheck {
                axiom: axiom.to_string(),
                passed: witness.is_none(),
                witness,
            });
        };
        push(
            &mut checks,
            "associativity",
            alg.check_associativity().err().map(|e| e.to_string()),
        );
        push(&mut checks, "unit", alg.check_unit().err().map(|e| e.to_string()));
        push(&mut checks, "coassociativity", self.first_failure(|d, k| self.coassoc_at(d, k)));
        push(&mut checks, "counit", self.first_failure(|d, k| self.counit_at(d, k)));
        push(&mut checks, "comultiplication multiplicative", self.comult_multiplicative());
        push(&mut checks, "counit multiplicative", self.counit_multiplicative());
        push(&mut checks, "antipode", self.first_failure(|d, k| self.antipode_at(d, k)));
        let antipode_bijective = self.antipode.iter().all(|s| s.rank() == s.rows());
        push(
            &mut checks,
            "antipode bijective",
            (!antipode_bijective).then(|| "rank deficient".to_string()),
        );
        HopfReport {
            checks,
            commutative: alg.is_commutative(),
            cocommutative: self.is_cocommutative(),
            antipode_bijective,
        }
    }

    fn first_failure<F>(&self, ok: F) -> Option<String>
    where
        F: Fn(usize, usize) -> bool + Sync + Send,
    {
        let dims = self.algebra.dims();
        let cells: Vec<(usize, usize)> = (0..dims.len()).flat_map(|d| (0..dims[d]).map(move |k| (d, k))).collect();
        let results = par::map_slice(&cells, |&(d, k)| ok(d, k));
        cells
            .iter()
            .zip(results)
            .find(|(_, good)| !good)
            .map(|(&(d, k), _)| self.label(d, k))
    }

    fn coassoc_at(&self, d: usize, k: usize) -> bool {
        let dims = self.algebra.dims();
        let f = self.field();
        let pl = PairLayout::new(dims, d);
        let tl = TripleLayout::new(dims, d);
        let x = self.comult[d].col(k);
        let mut left = f.zeros(tl.total);
        let mut right = f.zeros(tl.total);
        for i in 0..=d {
            let j = d - i;
            for a in 0..dims[i] {
                for b in 0..dims[j] {
                    let c = &x[pl.index(dims, d, i, a, b)];
                    if c.is_zero() {
                        continue;
                    }
                    // (Δ ⊗ id): split e_a in degree i
                    let da = self.comult[i].col(a);
                    let pli = PairLayout::new(dims, i);
                    for p in 0..=i {
                        for a1 in 0..dims[p] {
                            for a2 in 0..dims[i - p] {
                                let y = &da[pli.index(dims, i, p, a1, a2)];
                                if !y.is_zero() {
                                    let idx = tl.index(dims, d, (p, a1), (i - p, a2), b);
                                    left[idx] = &left[idx] + &(c * y);
                                }
                            }
                        }
                    }
                    // (id ⊗ Δ): split e_b in degree j
                    let db = self.comult[j].col(b);
                    let plj = PairLayout::new(dims, j);
                    for q in 0..=j {
                        for b1 in 0..dims[q] {
                            for b2 in 0..dims[j - q] {
                                let y = &db[plj.index(dims, j, q, b1, b2)];
                                if !y.is_zero() {
                                    let idx = tl.index(dims, d, (i, a), (q, b1), b2);
                                    right[idx] = &right[idx] + &(c * y);
                                }
                            }
                        }
                    }
                }
            }
        }
        left == right
    }

    fn counit_at(&self, d: usize, k: usize) -> bool {
        let dims = self.algebra.dims();
        let f = self.field();
        let pl = PairLayout::new(dims, d);
        let x = self.comult[d].col(k);
        let mut left = f.zeros(dims[d]);
        let mut right = f.zeros(dims[d]);
        for a in 0..dims[0] {
            for b in 0..dims[d] {
                // (ε ⊗ id): block (0, d)
                let c = &x[pl.index(dims, d, 0, a, b)];
                left[b] = &left[b] + &(c * &self.counit[a]);
                // (id ⊗ ε): block (d, 0)
                let c = &x[pl.index(dims, d, d, b, a)];
                right[b] = &right[b] + &(c * &self.counit[a]);
            }
        }
        let e = f.unit_vector(dims[d], k);
        left == e && right == e
    }

    fn antipode_at(&self, d: usize, k: usize) -> bool {
        let alg = &self.algebra;
        let dims = alg.dims();
        let f = self.field();
        let pl = PairLayout::new(dims, d);
        let x = self.comult[d].col(k);
        let mut left = f.zeros(dims[d]);
        let mut right = f.zeros(dims[d]);
        for i in 0..=d {
            let j = d - i;
            for a in 0..dims[i] {
                for b in 0..dims[j] {
                    let c = &x[pl.index(dims, d, i, a, b)];
                    if c.is_zero() {
                        continue;
                    }
                    let sa = self.antipode[i].col(a);
                    let eb = alg.basis_vector(j, b);
                    linalg::axpy(&mut left, c, &alg.mul(i, &sa, j, &eb).unwrap());
                    let ea = alg.basis_vector(i, a);
                    let sb = self.antipode[j].col(b);
                    linalg::axpy(&mut right, c, &alg.mul(i, &ea, j, &sb).unwrap());
                }
            }
        }
        let expected = if d == 0 {
            linalg::scale(alg.unit(), &self.counit[k])
        } else {
            f.zeros(dims[d])
        };
        left == expected && right == expected
    }

    fn comult_multiplicative(&self) -> Option<String> {
        let alg = &self.algebra;
        let dims = alg.dims();
        let top = alg.top();
        // Δ(1) = 1 ⊗ 1
        let unit_img = self.comult[0].apply(alg.unit());
        if unit_img != kron_vec(alg.unit(), alg.unit()) {
            return Some("unit".into());
        }
        let pairs: Vec<(usize, usize)> = (0..=top).flat_map(|i| (0..=top - i).map(move |j| (i, j))).collect();
        let results = par::map_slice(&pairs, |&(i, j)| {
            for a in 0..dims[i] {
                for b in 0..dims[j] {
                    let ab = alg.mul(i, &alg.basis_vector(i, a), j, &alg.basis_vector(j, b)).unwrap();
                    let lhs = self.comult[i + j].apply(&ab);
                    let rhs = pair_mul(alg, i, &self.comult[i].col(a), j, &self.comult[j].col(b));
                    if lhs != rhs {
                        return Some(format!("{} * {}", self.label(i, a), self.label(j, b)));
                    }
                }
            }
            None
        });
        results.into_iter().flatten().next()
    }

    fn counit_multiplicative(&self) -> Option<String> {
        let alg = &self.algebra;
        if dot(&self.counit, alg.unit()) != self.field().one() {
            return Some("unit".into());
        }
        let n = alg.dim(0);
        for a in 0..n {
            for b in 0..n {
                let ab = alg.mul(0, &alg.basis_vector(0, a), 0, &alg.basis_vector(0, b)).unwrap();
                if dot(&self.counit, &ab) != &self.counit[a] * &self.counit[b] {
                    return Some(format!("{} * {}", self.label(0, a), self.label(0, b)));
                }
            }
        }
        None
    }

    pub fn is_cocommutative(&self) -> bool {
        let dims = self.algebra.dims();
        (0..dims.len()).all(|d| {
            let pl = PairLayout::new(dims, d);
            (0..dims[d]).all(|k| {
                let x = self.comult[d].col(k);
                (0..=d).all(|i| {
                    (0..dims[i]).all(|a| {
                        (0..dims[d - i]).all(|b| x[pl.index(dims, d, i, a, b)] == x[pl.index(dims, d, d - i, b, a)])
                    })
                })
            })
        })
    }
}

/// Product in `A ⊗ A` of homogeneous elements of total degrees `d1`, `d2`.
pub fn pair_mul(alg: &GradedAlgebra, d1: usize, x: &[Scalar], d2: usize, y: &[Scalar]) -> Vector {
    let dims = alg.dims();
    let f = alg.field();
    let d = d1 + d2;
    let pl = PairLayout::new(dims, d);
    let p1 = PairLayout::new(dims, d1);
    let p2 = PairLayout::new(dims, d2);
    let mut out = f.zeros(pl.total);
    for i1 in 0..=d1 {
        let j1 = d1 - i1;
        for i2 in 0..=d2 {
            let j2 = d2 - i2;
            for a1 in 0..dims[i1] {
                for b1 in 0..dims[j1] {
                    let c1 = &x[p1.index(dims, d1, i1, a1, b1)];
                    if c1.is_zero() {
                        continue;
                    }
                    for a2 in 0..dims[i2] {
                        let left = alg.rmul(i1, i2, a2).col(a1);
                        if linalg::is_zero_vec(&left) {
                            continue;
                        }
                        for b2 in 0..dims[j2] {
                            let c2 = &y[p2.index(dims, d2, i2, a2, b2)];
                            if c2.is_zero() {
                                continue;
                            }
                            let right = alg.rmul(j1, j2, b2).col(b1);
                            let c = c1 * c2;
                            let i = i1 + i2;
                            let off = pl.offsets[i];
                            let w = dims[d - i];
                            for (p, u) in left.iter().enumerate() {
                                if u.is_zero() {
                                    continue;
                                }
                                let cu = &c * u;
                                for (q, v) in right.iter().enumerate() {
                                    if !v.is_zero() {
                                        let idx = off + p * w + q;
                                        out[idx] = &out[idx] + &(&cu * v);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rationals;

    #[test]
    fn cyclic_groups_are_hopf() {
        for n in 1..=4 {
            let h = HopfAlgebra::cyclic_group(n, Q);
            let r = h.verify_axioms();
            assert!(r.passed(), "{r:?}");
            assert!(r.commutative && r.cocommutative);
        }
    }

    #[test]
    fn kz2_integral_and_semisimplicity() {
        let h = HopfAlgebra::cyclic_group(2, Q);
        let t = h.right_integral().unwrap();
        assert_eq!(t.vector, vec![Q.one(), Q.one()]);
        assert_eq!(h.eps(&t.vector), Q.int(2));
        assert!(h.is_semisimple().unwrap());
        assert!(h.is_cosemisimple().unwrap());
        let f2 = Field::prime(2).unwrap();
        let h2 = HopfAlgebra::cyclic_group(2, f2);
        assert!(h2.verify_axioms().passed());
        assert!(!h2.is_semisimple().unwrap());
        // functions on a finite group form a product of copies of the field
        assert!(h2.is_cosemisimple().unwrap());
        assert!(HopfAlgebra::trivial(Q).is_semisimple().unwrap());
        assert_eq!(HopfAlgebra::trivial(Q).right_integral().unwrap().vector, vec![Q.one()]);
    }

    #[test]
    fn dual_of_kz2() {
        let h = HopfAlgebra::cyclic_group(2, Q);
        let d = h.dual();
        let r = d.verify_axioms();
        assert!(r.passed() && r.commutative && r.cocommutative);
        assert_eq!(d.dual(), h);
        // the integral of the dual is the delta function at the identity
        assert_eq!(d.right_integral().unwrap().vector, vec![Q.one(), Q.zero()]);
    }

    #[test]
    fn dual_of_cyclic_three_passes() {
        let h = HopfAlgebra::cyclic_group(3, Q);
        assert!(h.dual().verify_axioms().passed());
        assert_eq!(h.dual().dim(), 3);
    }

    #[test]
    fn broken_antipode_detected() {
        let h = HopfAlgebra::cyclic_group(3, Q);
        let r = h.with_antipode(Matrix::identity(Q, 3)).unwrap().verify_axioms();
        let c = r.check("antipode").unwrap();
        assert!(!c.passed);
        assert_eq!(c.witness.as_deref(), Some("g"));
    }

    #[test]
    fn shape_errors() {
        let h = HopfAlgebra::cyclic_group(2, Q);
        let bad = h.with_antipode(Matrix::identity(Q, 3));
        assert!(matches!(bad, Err(HopfError::Shape { .. })));
    }
}
