//! Nonnegatively graded algebras and right modules given by structure constants,
//! truncated at a top internal degree.
//!
//! Every object records its truncation `top`; nothing is ever read above it.
//! Multiplication is stored as right-multiplication operators: for a basis
//! element `b` of `A_j`, `rmul[i][j][b]` is the matrix of `x -> x b` from `A_i`
//! to `A_{i+j}`. Modules store their action the same way, so the regular
//! module of an algebra is literally the algebra's own data.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::linalg::{
    self, axpy, is_zero_vec, kron_vec, quotient, Echelon, Field, LinalgError, Matrix, QuotientSpace,
    Scalar, Subspace, Vector,
};
use crate::par;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("associativity fails in degrees ({0}, {1}, {2}) at basis ({3}, {4}, {5})")]
    NotAssociative(usize, usize, usize, usize, usize, usize),
    #[error("unit axiom fails at degree {degree}, basis element {index}")]
    UnitFails { degree: usize, index: usize },
    #[error("module axiom fails: {0}")]
    ModuleAxiom(String),
    #[error("truncation mismatch: {0} vs {1}")]
    TopMismatch(usize, usize),
    #[error("map is not multiplicative: {0}")]
    NotMultiplicative(String),
    #[error("relation {index} is not homogeneous")]
    NonHomogeneous { index: usize },
    #[error("relation {index} contains an ill-composed path: {detail}")]
    IllComposed { index: usize, detail: String },
    #[error("presentation error: {0}")]
    Presentation(String),
    #[error("invalid structure data: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, AlgebraError>;

/// Per-degree dimensions `0..=top`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedVectorSpace {
    pub dims: Vec<usize>,
}

impl GradedVectorSpace {
    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn total(&self) -> usize {
        self.dims.iter().sum()
    }
}

fn dim_at(dims: &[usize], d: i64) -> usize {
    if d < 0 {
        0
    } else {
        dims.get(d as usize).copied().unwrap_or(0)
    }
}

// ---------------------------------------------------------------------------
// algebras

#[derive(Clone)]
pub struct GradedAlgebra {
    field: Field,
    dims: Vec<usize>,
    unit: Vector,
    rmul: Vec<Vec<Vec<Matrix>>>,
    generators: Vec<(usize, Vector)>,
    labels: Vec<Vec<String>>,
}

impl fmt::Debug for GradedAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedAlgebra over {} with dims {:?}", self.field, self.dims)
    }
}

impl GradedAlgebra {
    /// Builds an algebra from a bilinear product on basis elements:
    /// `product(i, a, j, b)` is the coordinate vector of `e^i_a * e^j_b` in degree `i + j`.
    pub fn from_products<F>(field: Field, dims: Vec<usize>, unit: Vector, product: F) -> Result<Self>
    where
        F: Fn(usize, usize, usize, usize) -> Vector + Sync + Send,
    {
        if dims.is_empty() {
            return Err(AlgebraError::Invalid("no degrees".into()));
        }
        if unit.len() != dims[0] {
            return Err(AlgebraError::Invalid("unit must live in degree 0".into()));
        }
        let top = dims.len() - 1;
        let rmul: Vec<Vec<Vec<Matrix>>> = par::map_range(top + 1, |i| {
            (0..=top - i)
                .map(|j| {
                    (0..dims[j])
                        .map(|b| {
                            let cols: Vec<Vector> =
                                (0..dims[i]).map(|a| product(i, a, j, b)).collect();
                            Matrix::from_cols(field, dims[i + j], &cols)
                        })
                        .collect::<std::result::Result<Vec<_>, _>>()
                })
                .collect::<std::result::Result<Vec<_>, _>>()
        })
        .into_iter()
        .collect::<std::result::Result<Vec<_>, _>>()?;
        let labels = dims
            .iter()
            .enumerate()
            .map(|(d, &n)| (0..n).map(|i| format!("b{d}_{i}")).collect())
            .collect();
        let mut alg = GradedAlgebra {
            field,
            dims,
            unit,
            rmul,
            generators: Vec::new(),
            labels,
        };
        alg.generators = alg.compute_generators();
        Ok(alg)
    }

    /// An ungraded algebra viewed as concentrated in degree 0 (`top = 0`).
    /// `mult` is `n x n^2`, column `a * n + b` holding `e_a e_b`.
    pub fn concentrated(field: Field, mult: &Matrix, unit: Vector) -> Result<Self> {
        let n = unit.len();
        if mult.rows() != n || mult.cols() != n * n {
            return Err(AlgebraError::Invalid("multiplication tensor shape".into()));
        }
        GradedAlgebra::from_products(field, vec![n], unit, |_, a, _, b| mult.col(a * n + b))
    }

    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Self {
        assert_eq!(labels.len(), self.dims.len());
        self.labels = labels;
        self
    }

    pub fn labels(&self, d: usize) -> &[String] {
        &self.labels[d]
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, d: usize) -> usize {
        self.dims.get(d).copied().unwrap_or(0)
    }

    pub fn space(&self) -> GradedVectorSpace {
        GradedVectorSpace {
            dims: self.dims.clone(),
        }
    }

    pub fn unit(&self) -> &Vector {
        &self.unit
    }

    pub fn rmul(&self, i: usize, j: usize, b: usize) -> &Matrix {
        &self.rmul[i][j][b]
    }

    /// Right multiplication by a homogeneous element `y` of degree `j`, as a map `A_i -> A_{i+j}`.
    pub fn right_mul_matrix(&self, i: usize, j: usize, y: &[Scalar]) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.dim(i + j), self.dim(i));
        for (b, c) in y.iter().enumerate() {
            if !c.is_zero() {
                m.add_scaled(c, &self.rmul[i][j][b]);
            }
        }
        m
    }

    /// Left multiplication by `x` of degree `i`, as a map `A_j -> A_{i+j}`.
    pub fn left_mul_matrix(&self, i: usize, x: &[Scalar], j: usize) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim(j)).map(|b| self.rmul[i][j][b].apply(x)).collect();
        Matrix::from_cols(self.field, self.dim(i + j), &cols).expect("shape")
    }

    /// Product of homogeneous elements; `None` above the truncation.
    pub fn mul(&self, i: usize, x: &[Scalar], j: usize, y: &[Scalar]) -> Option<Vector> {
        if i + j > self.top() {
            return None;
        }
        let mut out = self.field.zeros(self.dim(i + j));
        for (b, c) in y.iter().enumerate() {
            if !c.is_zero() {
                let v = self.rmul[i][j][b].apply(x);
                axpy(&mut out, c, &v);
            }
        }
        Some(out)
    }

    pub fn basis_vector(&self, d: usize, i: usize) -> Vector {
        self.field.unit_vector(self.dim(d), i)
    }

    /// Homogeneous algebra generators: all of `A_0` plus, in each positive
    /// degree, a basis of a complement to the decomposable elements.
    pub fn generators(&self) -> &[(usize, Vector)] {
        &self.generators
    }

    fn decomposables(&self, d: usize) -> Subspace {
        let mut ech = Echelon::new(self.field, self.dim(d));
        'outer: for i in 1..d {
            for a in 0..self.dim(i) {
                let x = self.basis_vector(i, a);
                for b in 0..self.dim(d - i) {
                    ech.insert(self.rmul[i][d - i][b].apply(&x));
                    if ech.is_full() {
                        break 'outer;
                    }
                }
            }
        }
        Subspace::from_echelon(ech)
    }

    fn compute_generators(&self) -> Vec<(usize, Vector)> {
        let mut gens: Vec<(usize, Vector)> =
            (0..self.dim(0)).map(|a| (0, self.basis_vector(0, a))).collect();
        for d in 1..=self.top() {
            let dec = self.decomposables(d);
            let q = quotient(self.dim(d), &dec).expect("ambient");
            for &k in q.kept() {
                gens.push((d, self.basis_vector(d, k)));
            }
        }
        gens
    }

    /// Positive-degree generators only.
    pub fn positive_generators(&self) -> impl Iterator<Item = &(usize, Vector)> {
        self.generators.iter().filter(|(d, _)| *d > 0)
    }

    pub fn check_unit(&self) -> Result<()> {
        for d in 0..=self.top() {
            let l = self.left_mul_matrix(0, &self.unit, d);
            let r = self.right_mul_matrix(d, 0, &self.unit);
            for i in 0..self.dim(d) {
                let e = self.basis_vector(d, i);
                if l.apply(&e) != e || r.apply(&e) != e {
                    return Err(AlgebraError::UnitFails { degree: d, index: i });
                }
            }
        }
        Ok(())
    }

    /// Associativity on all basis triples within the truncation.
    pub fn check_associativity(&self) -> Result<()> {
        let top = self.top();
        let mut triples = Vec::new();
        for i in 0..=top {
            for j in 0..=top - i {
                for k in 0..=top - i - j {
                    triples.push((i, j, k));
                }
            }
        }
        let results = par::map_slice(&triples, |&(i, j, k)| {
            for b in 0..self.dim(j) {
                for c in 0..self.dim(k) {
                    let bc = self.rmul[j][k][c].apply(&self.basis_vector(j, b));
                    let r_bc = self.right_mul_matrix(i, j + k, &bc);
                    let rb_then_rc = self.rmul[i + j][k][c].dot(&self.rmul[i][j][b]);
                    if r_bc != rb_then_rc {
                        for a in 0..self.dim(i) {
                            let e = self.basis_vector(i, a);
                            if r_bc.apply(&e) != rb_then_rc.apply(&e) {
                                return Err(AlgebraError::NotAssociative(i, j, k, a, b, c));
                            }
                        }
                    }
                }
            }
            Ok(())
        });
        results.into_iter().collect()
    }

    pub fn check_axioms(&self) -> Result<()> {
        self.check_unit()?;
        self.check_associativity()
    }

    pub fn is_commutative(&self) -> bool {
        let top = self.top();
        for i in 0..=top {
            for j in i..=top - i {
                for a in 0..self.dim(i) {
                    let x = self.basis_vector(i, a);
                    for b in 0..self.dim(j) {
                        let y = self.basis_vector(j, b);
                        if self.mul(i, &x, j, &y) != self.mul(j, &y, i, &x) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Degrees `(i, j)` with `i + j <= top` where `A_i A_j != A_{i+j}`.
    pub fn product_surjectivity_failures(&self) -> Vec<(usize, usize)> {
        let mut fails = Vec::new();
        let top = self.top();
        for i in 0..=top {
            for j in 0..=top - i {
                let mut ech = Echelon::new(self.field, self.dim(i + j));
                for a in 0..self.dim(i) {
                    let x = self.basis_vector(i, a);
                    for b in 0..self.dim(j) {
                        ech.insert(self.rmul[i][j][b].apply(&x));
                    }
                }
                if ech.rank() != self.dim(i + j) {
                    fails.push((i, j));
                }
            }
        }
        fails
    }

    /// The degree-0 part as an algebra with the same truncation, and its inclusion.
    pub fn degree_zero(&self) -> (GradedAlgebra, GradedLinearMap) {
        let mut dims = vec![0; self.top() + 1];
        dims[0] = self.dim(0);
        let a0 = GradedAlgebra::from_products(self.field, dims.clone(), self.unit.clone(), |_, a, _, b| {
            self.rmul[0][0][b].apply(&self.basis_vector(0, a))
        })
        .expect("degree zero part");
        let mut blocks = vec![Matrix::identity(self.field, self.dim(0))];
        for d in 1..=self.top() {
            blocks.push(Matrix::zeros(self.field, self.dim(d), 0));
        }
        let emb = GradedLinearMap::new(0, dims, self.dims.clone(), blocks);
        (a0, emb)
    }

    /// Degree-0 part as an ungraded algebra (`top = 0`).
    pub fn degree_zero_ungraded(&self) -> GradedAlgebra {
        GradedAlgebra::from_products(self.field, vec![self.dim(0)], self.unit.clone(), |_, a, _, b| {
            self.rmul[0][0][b].apply(&self.basis_vector(0, a))
        })
        .expect("degree zero part")
    }

    pub fn truncate(&self, top: usize) -> GradedAlgebra {
        let top = top.min(self.top());
        let mut a = self.clone();
        a.dims.truncate(top + 1);
        a.rmul.truncate(top + 1);
        for (i, row) in a.rmul.iter_mut().enumerate() {
            row.truncate(top - i + 1);
        }
        a.labels.truncate(top + 1);
        a.generators.retain(|(d, _)| *d <= top);
        a
    }

    /// Opposite algebra (left modules are right modules over it).
    pub fn opposite(&self) -> GradedAlgebra {
        GradedAlgebra::from_products(self.field, self.dims.clone(), self.unit.clone(), |i, a, j, b| {
            self.rmul[j][i][a].apply(&self.basis_vector(j, b))
        })
        .expect("opposite")
        .with_labels(self.labels.clone())
    }

    /// The regular right module.
    pub fn regular_module(&self) -> GradedModule {
        GradedModule {
            field: self.field,
            dims: self.dims.clone(),
            act: self.rmul.clone(),
        }
    }

    /// `A_0 = A / A_{>=1}` as a right `A`-module via the projection.
    pub fn degree_zero_module(&self) -> GradedModule {
        let mut dims = vec![0; self.top() + 1];
        dims[0] = self.dim(0);
        GradedModule::from_fn(self.field, dims, self, |d, j, b| {
            if d == 0 && j == 0 {
                self.rmul[0][0][b].clone()
            } else {
                Matrix::zeros(self.field, 0, 0)
            }
        })
        .expect("degree zero module")
    }

    /// Checks that a degree-preserving linear map `self -> other` is a unital algebra map.
    pub fn check_algebra_map(&self, other: &GradedAlgebra, f: &GradedLinearMap) -> Result<()> {
        if self.top() != other.top() {
            return Err(AlgebraError::TopMismatch(self.top(), other.top()));
        }
        if f.block(0).apply(&self.unit) != other.unit {
            return Err(AlgebraError::NotMultiplicative("unit not preserved".into()));
        }
        let top = self.top();
        for i in 0..=top {
            for j in 0..=top - i {
                for a in 0..self.dim(i) {
                    let x = self.basis_vector(i, a);
                    let fx = f.block(i).apply(&x);
                    for b in 0..self.dim(j) {
                        let y = self.basis_vector(j, b);
                        let lhs = f.block(i + j).apply(&self.mul(i, &x, j, &y).unwrap());
                        let rhs = other.mul(i, &fx, j, &f.block(j).apply(&y)).unwrap();
                        if lhs != rhs {
                            return Err(AlgebraError::NotMultiplicative(format!(
                                "degrees ({i},{j}) basis ({a},{b})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The subalgebra spanned by given per-degree subspaces, with its inclusion.
    /// Fails if the subspaces are not closed under multiplication or miss the unit.
    pub fn subalgebra(&self, parts: &[Subspace]) -> Result<(GradedAlgebra, GradedLinearMap)> {
        let top = self.top();
        if parts.len() != top + 1 {
            return Err(AlgebraError::Invalid("one subspace per degree".into()));
        }
        let dims: Vec<usize> = parts.iter().map(Subspace::dim).collect();
        let unit = parts[0]
            .coordinates(&self.unit)
            .ok_or_else(|| AlgebraError::NotMultiplicative("unit not in subalgebra".into()))?;
        let failure = std::sync::Mutex::new(None);
        let sub = GradedAlgebra::from_products(self.field, dims.clone(), unit, |i, a, j, b| {
            let x = &parts[i].basis()[a];
            let y = &parts[j].basis()[b];
            let p = self.mul(i, x, j, y).expect("within top");
            match parts[i + j].coordinates(&p) {
                Some(c) => c,
                None => {
                    *failure.lock().unwrap() = Some(format!("product of degrees ({i},{j}) leaves subspace"));
                    self.field.zeros(dims[i + j])
                }
            }
        })?;
        if let Some(msg) = failure.into_inner().unwrap() {
            return Err(AlgebraError::NotMultiplicative(msg));
        }
        let blocks = (0..=top).map(|d| parts[d].basis_matrix()).collect();
        let emb = GradedLinearMap::new(0, dims, self.dims.clone(), blocks);
        Ok((sub, emb))
    }
}

// ---------------------------------------------------------------------------
// modules

#[derive(Clone)]
pub struct GradedModule {
    field: Field,
    dims: Vec<usize>,
    act: Vec<Vec<Vec<Matrix>>>,
}

impl fmt::Debug for GradedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedModule over {} with dims {:?}", self.field, self.dims)
    }
}

impl GradedModule {
    /// `action(d, j, b)` is the matrix `M_d -> M_{d+j}` of the right action of basis `b` of `R_j`.
    pub fn from_fn<F>(field: Field, dims: Vec<usize>, ring: &GradedAlgebra, action: F) -> Result<Self>
    where
        F: Fn(usize, usize, usize) -> Matrix + Sync + Send,
    {
        let top = ring.top();
        if dims.len() != top + 1 {
            return Err(AlgebraError::TopMismatch(dims.len().saturating_sub(1), top));
        }
        let act: Vec<Vec<Vec<Matrix>>> = par::map_range(top + 1, |d| {
            (0..=top - d)
                .map(|j| {
                    (0..ring.dim(j))
                        .map(|b| {
                            let m = action(d, j, b);
                            if m.rows() == dims[d + j] && m.cols() == dims[d] {
                                m
                            } else if m.rows() == 0 && m.cols() == 0 {
                                Matrix::zeros(field, dims[d + j], dims[d])
                            } else {
                                panic!("action matrix shape at ({d},{j},{b})")
                            }
                        })
                        .collect()
                })
                .collect()
        });
        Ok(GradedModule { field, dims, act })
    }

    pub fn zero(ring: &GradedAlgebra) -> GradedModule {
        GradedModule::from_fn(ring.field(), vec![0; ring.top() + 1], ring, |_, _, _| {
            Matrix::zeros(ring.field(), 0, 0)
        })
        .expect("zero module")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, d: usize) -> usize {
        self.dims.get(d).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn lowest_degree(&self) -> Option<usize> {
        self.dims.iter().position(|&n| n > 0)
    }

    pub fn highest_degree(&self) -> Option<usize> {
        self.dims.iter().rposition(|&n| n > 0)
    }

    pub fn action(&self, d: usize, j: usize, b: usize) -> &Matrix {
        &self.act[d][j][b]
    }

    /// Right action of a homogeneous ring element `r` of degree `j` on `M_d`.
    pub fn action_matrix(&self, d: usize, j: usize, r: &[Scalar]) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.dim(d + j), self.dim(d));
        if d + j > self.top() {
            return m;
        }
        for (b, c) in r.iter().enumerate() {
            if !c.is_zero() {
                m.add_scaled(c, &self.act[d][j][b]);
            }
        }
        m
    }

    pub fn act_vec(&self, d: usize, m: &[Scalar], j: usize, r: &[Scalar]) -> Vector {
        self.action_matrix(d, j, r).apply(m)
    }

    /// Module axioms against the ring: unit acts as identity and
    /// `(m a) g = m (a g)` for basis `a` and generators `g`.
    pub fn check_axioms(&self, ring: &GradedAlgebra) -> Result<()> {
        if self.top() != ring.top() {
            return Err(AlgebraError::TopMismatch(self.top(), ring.top()));
        }
        let top = self.top();
        for d in 0..=top {
            if !self.action_matrix(d, 0, ring.unit()).is_identity() {
                return Err(AlgebraError::ModuleAxiom(format!("unit does not act as identity in degree {d}")));
            }
        }
        let checks: Vec<(usize, usize)> = (0..=top)
            .flat_map(|d| (0..=top - d).map(move |j| (d, j)))
            .collect();
        let results = par::map_slice(&checks, |&(d, j)| {
            for (k, g) in ring.generators() {
                let k = *k;
                if d + j + k > top {
                    continue;
                }
                let g_act = self.action_matrix(d + j, k, g);
                for a in 0..ring.dim(j) {
                    let lhs = g_act.dot(&self.act[d][j][a]);
                    let ag = ring.mul(j, &ring.basis_vector(j, a), k, g).unwrap();
                    let rhs = self.action_matrix(d, j + k, &ag);
                    if lhs != rhs {
                        return Err(AlgebraError::ModuleAxiom(format!(
                            "associativity at module degree {d}, ring degrees ({j},{k})"
                        )));
                    }
                }
            }
            Ok(())
        });
        results.into_iter().collect()
    }

    /// Restriction of scalars along a degree-preserving algebra map `sub -> ring`.
    pub fn restrict(&self, sub: &GradedAlgebra, emb: &GradedLinearMap) -> GradedModule {
        let act = (0..=self.top())
            .map(|d| {
                (0..=self.top() - d)
                    .map(|j| {
                        (0..sub.dim(j))
                            .map(|b| self.action_matrix(d, j, &emb.block(j).col(b)))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        GradedModule {
            field: self.field,
            dims: self.dims.clone(),
            act,
        }
    }

    /// Degree shift `M(-s)`: the degree-`d` piece of the result is `M_{d-s}`.
    pub fn shift_up(&self, s: usize) -> GradedModule {
        let top = self.top();
        let mut dims = vec![0; top + 1];
        for d in s..=top {
            dims[d] = self.dims[d - s];
        }
        let act = (0..=top)
            .map(|d| {
                (0..=top - d)
                    .map(|j| {
                        let count = self.act.first().and_then(|r| r.get(j)).map_or(0, Vec::len);
                        (0..count)
                            .map(|b| {
                                if d >= s {
                                    self.act[d - s][j][b].clone()
                                } else {
                                    Matrix::zeros(self.field, dims[d + j], 0)
                                }
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        GradedModule {
            field: self.field,
            dims,
            act,
        }
    }

    pub fn direct_sum(&self, other: &GradedModule) -> GradedModule {
        assert_eq!(self.top(), other.top());
        let top = self.top();
        let dims: Vec<usize> = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let act = (0..=top)
            .map(|d| {
                (0..=top - d)
                    .map(|j| {
                        (0..self.act[d][j].len())
                            .map(|b| block_diag(&self.act[d][j][b], &other.act[d][j][b]))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        GradedModule {
            field: self.field,
            dims,
            act,
        }
    }

    pub fn direct_power(&self, n: usize, ring: &GradedAlgebra) -> GradedModule {
        let mut acc = GradedModule::zero(ring);
        for _ in 0..n {
            acc = acc.direct_sum(self);
        }
        acc
    }

    /// Submodule given by per-degree subspaces (closure under the action is checked).
    pub fn submodule(&self, parts: &[Subspace], ring: &GradedAlgebra) -> Result<GradedModule> {
        let dims: Vec<usize> = parts.iter().map(Subspace::dim).collect();
        let bad = std::sync::Mutex::new(None);
        let m = GradedModule::from_fn(self.field, dims.clone(), ring, |d, j, b| {
            let cols: Vec<Vector> = parts[d]
                .basis()
                .iter()
                .map(|v| {
                    let w = self.act[d][j][b].apply(v);
                    parts[d + j].coordinates(&w).unwrap_or_else(|| {
                        *bad.lock().unwrap() = Some(format!("not closed at degree {d}"));
                        self.field.zeros(dims[d + j])
                    })
                })
                .collect();
            Matrix::from_cols(self.field, dims[d + j], &cols).expect("shape")
        })?;
        if let Some(msg) = bad.into_inner().unwrap() {
            return Err(AlgebraError::ModuleAxiom(msg));
        }
        Ok(m)
    }

    /// Quotient module by per-degree submodule subspaces, with projection data.
    pub fn quotient_module(
        &self,
        parts: &[Subspace],
        ring: &GradedAlgebra,
    ) -> Result<(GradedModule, Vec<QuotientSpace>)> {
        let qs: Vec<QuotientSpace> = parts
            .iter()
            .enumerate()
            .map(|(d, s)| quotient(self.dim(d), s))
            .collect::<std::result::Result<_, _>>()?;
        let dims: Vec<usize> = qs.iter().map(QuotientSpace::dim).collect();
        let m = GradedModule::from_fn(self.field, dims, ring, |d, j, b| {
            qs[d + j].projection().dot(&self.act[d][j][b]).dot(qs[d].section())
        })?;
        Ok((m, qs))
    }
}

fn block_diag(a: &Matrix, b: &Matrix) -> Matrix {
    let mut m = Matrix::zeros(a.field(), a.rows() + b.rows(), a.cols() + b.cols());
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            m.set(r, c, a.get(r, c).clone());
        }
    }
    for r in 0..b.rows() {
        for c in 0..b.cols() {
            m.set(a.rows() + r, a.cols() + c, b.get(r, c).clone());
        }
    }
    m
}

// ---------------------------------------------------------------------------
// graded linear maps

/// A homogeneous linear map of degree `shift`: `blocks[d]` maps source degree `d`
/// to target degree `d + shift` (an empty block when that is outside the window).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedLinearMap {
    shift: i64,
    src: Vec<usize>,
    tgt: Vec<usize>,
    blocks: Vec<Matrix>,
}

impl GradedLinearMap {
    pub fn new(shift: i64, src: Vec<usize>, tgt: Vec<usize>, blocks: Vec<Matrix>) -> Self {
        assert_eq!(blocks.len(), src.len());
        for (d, b) in blocks.iter().enumerate() {
            assert_eq!(b.cols(), src[d], "block {d} columns");
            assert_eq!(b.rows(), dim_at(&tgt, d as i64 + shift), "block {d} rows");
        }
        GradedLinearMap {
            shift,
            src,
            tgt,
            blocks,
        }
    }

    pub fn zero(field: Field, shift: i64, src: &[usize], tgt: &[usize]) -> Self {
        let blocks = (0..src.len())
            .map(|d| Matrix::zeros(field, dim_at(tgt, d as i64 + shift), src[d]))
            .collect();
        GradedLinearMap::new(shift, src.to_vec(), tgt.to_vec(), blocks)
    }

    pub fn identity(field: Field, dims: &[usize]) -> Self {
        let blocks = dims.iter().map(|&n| Matrix::identity(field, n)).collect();
        GradedLinearMap::new(0, dims.to_vec(), dims.to_vec(), blocks)
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn src_dims(&self) -> &[usize] {
        &self.src
    }

    pub fn tgt_dims(&self) -> &[usize] {
        &self.tgt
    }

    pub fn block(&self, d: usize) -> &Matrix {
        &self.blocks[d]
    }

    pub fn blocks(&self) -> &[Matrix] {
        &self.blocks
    }

    pub fn field(&self) -> Field {
        self.blocks.first().map_or(Field::Rationals, Matrix::field)
    }

    pub fn target_degree(&self, d: usize) -> Option<usize> {
        let t = d as i64 + self.shift;
        (t >= 0 && (t as usize) < self.tgt.len()).then_some(t as usize)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GradedLinearMap) -> GradedLinearMap {
        assert_eq!(other.tgt, self.src, "composable dims");
        let shift = self.shift + other.shift;
        let field = self.field();
        let blocks = (0..other.src.len())
            .map(|d| match other.target_degree(d) {
                Some(e) => self.blocks[e].dot(&other.blocks[d]),
                None => Matrix::zeros(field, dim_at(&self.tgt, d as i64 + shift), other.src[d]),
            })
            .collect();
        GradedLinearMap::new(shift, other.src.clone(), self.tgt.clone(), blocks)
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(Matrix::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.shift == 0 && self.blocks.iter().all(Matrix::is_identity)
    }

    pub fn add(&self, other: &GradedLinearMap) -> GradedLinearMap {
        assert_eq!(self.shift, other.shift);
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.add(b).expect("shapes"))
            .collect();
        GradedLinearMap::new(self.shift, self.src.clone(), self.tgt.clone(), blocks)
    }

    pub fn scaled(&self, c: &Scalar) -> GradedLinearMap {
        let blocks = self.blocks.iter().map(|b| b.scaled(c)).collect();
        GradedLinearMap::new(self.shift, self.src.clone(), self.tgt.clone(), blocks)
    }

    pub fn add_scaled(&mut self, c: &Scalar, other: &GradedLinearMap) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            a.add_scaled(c, b);
        }
    }

    /// All entries concatenated block by block (row-major); the coordinate
    /// system in which spaces of maps are compared.
    pub fn flatten(&self) -> Vector {
        self.blocks.iter().flat_map(|b| b.data().iter().cloned()).collect()
    }

    pub fn flat_len(&self) -> usize {
        self.blocks.iter().map(|b| b.rows() * b.cols()).sum()
    }

    pub fn unflatten(field: Field, shift: i64, src: &[usize], tgt: &[usize], v: &[Scalar]) -> Self {
        let mut off = 0;
        let blocks = (0..src.len())
            .map(|d| {
                let r = dim_at(tgt, d as i64 + shift);
                let c = src[d];
                let m = Matrix::new(field, r, c, v[off..off + r * c].to_vec()).expect("shape");
                off += r * c;
                m
            })
            .collect();
        GradedLinearMap::new(shift, src.to_vec(), tgt.to_vec(), blocks)
    }

    /// Whether the map commutes with the action of every generator of `ring`
    /// (only conditions visible inside the window are tested).
    pub fn is_module_map(&self, m: &GradedModule, n: &GradedModule, ring: &GradedAlgebra) -> bool {
        let top = m.top();
        for d in 0..=top {
            for (j, g) in ring.generators() {
                let j = *j;
                if d + j > top {
                    continue;
                }
                let t = d as i64 + j as i64 + self.shift;
                if t < 0 {
                    continue;
                }
                if t as usize > top {
                    continue;
                }
                let lhs = self.blocks[d + j].dot(&m.action_matrix(d, j, g));
                let rhs = match self.target_degree(d) {
                    Some(e) => n.action_matrix(e, j, g).dot(&self.blocks[d]),
                    None => Matrix::zeros(self.field(), lhs.rows(), lhs.cols()),
                };
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }
}

// ---------------------------------------------------------------------------
// Hom spaces

/// Homogeneous module maps of one degree, found by solving the linearity conditions.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub shift: i64,
    pub basis: Vec<GradedLinearMap>,
    /// Some linearity condition was not imposed because it left the window.
    pub truncated: bool,
    src: Vec<usize>,
    tgt: Vec<usize>,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Span of the basis inside the flattened coordinates of all graded maps of this degree.
    pub fn subspace(&self, field: Field) -> Subspace {
        let len = GradedLinearMap::zero(field, self.shift, &self.src, &self.tgt).flat_len();
        Subspace::span(field, len, self.basis.iter().map(GradedLinearMap::flatten)).expect("shape")
    }

    pub fn coordinates(&self, field: Field, f: &GradedLinearMap) -> Option<Vector> {
        let cols: Vec<Vector> = self.basis.iter().map(GradedLinearMap::flatten).collect();
        let len = f.flat_len();
        let m = Matrix::from_cols(field, len, &cols).ok()?;
        linalg::solve(&m, &f.flatten()).ok().flatten()
    }
}

/// Layout of unknown blocks for maps of a fixed degree.
struct MapLayout {
    offsets: Vec<Option<usize>>,
    len: usize,
}

impl MapLayout {
    fn new(shift: i64, src: &[usize], tgt: &[usize]) -> Self {
        let mut offsets = Vec::with_capacity(src.len());
        let mut len = 0;
        for d in 0..src.len() {
            let r = dim_at(tgt, d as i64 + shift);
            if r > 0 && src[d] > 0 {
                offsets.push(Some(len));
                len += r * src[d];
            } else {
                offsets.push(None);
            }
        }
        MapLayout { offsets, len }
    }
}

/// `ring`-linear maps `m -> n` raising degree by `shift`.
pub fn hom_graded(m: &GradedModule, n: &GradedModule, ring: &GradedAlgebra, shift: i64) -> HomSpace {
    let field = m.field();
    let top = m.top();
    let layout = MapLayout::new(shift, m.dims(), n.dims());
    let mut ech = Echelon::new(field, layout.len);
    let mut truncated = false;
    if layout.len > 0 {
        for d in 0..=top {
            for (j, g) in ring.generators() {
                let j = *j;
                if d + j > top {
                    continue;
                }
                let t_lo = d as i64 + shift;
                let t_hi = t_lo + j as i64;
                if t_hi < 0 {
                    continue;
                }
                if t_hi as usize > top {
                    if layout.offsets[d].is_some() {
                        truncated = true;
                    }
                    continue;
                }
                let t_hi = t_hi as usize;
                // F_{d+j} * act_M(d, g) - act_N(d+shift, g) * F_d = 0
                let am = m.action_matrix(d, j, g);
                let an = if t_lo >= 0 {
                    Some(n.action_matrix(t_lo as usize, j, g))
                } else {
                    None
                };
                let rows_out = n.dim(t_hi);
                let cols_out = m.dim(d);
                let hi_off = layout.offsets[d + j];
                let lo_off = layout.offsets[d];
                if hi_off.is_none() && (lo_off.is_none() || an.is_none()) {
                    continue;
                }
                let hi_cols = m.dim(d + j);
                let lo_rows = if t_lo >= 0 { n.dim(t_lo as usize) } else { 0 };
                for r in 0..rows_out {
                    for c in 0..cols_out {
                        let mut row = field.zeros(layout.len);
                        if let Some(off) = hi_off {
                            for k in 0..hi_cols {
                                let x = am.get(k, c);
                                if !x.is_zero() {
                                    row[off + r * hi_cols + k] = x.clone();
                                }
                            }
                        }
                        if let (Some(off), Some(an)) = (lo_off, an.as_ref()) {
                            for k in 0..lo_rows {
                                let x = an.get(r, k);
                                if !x.is_zero() {
                                    let idx = off + k * cols_out + c;
                                    row[idx] = &row[idx] - x;
                                }
                            }
                        }
                        if !is_zero_vec(&row) {
                            ech.insert(row);
                            if ech.is_full() {
                                break;
                            }
                        }
                    }
                }
            }
        }
    }
    let eqs = Matrix::from_rows(field, layout.len, ech.rows()).expect("shape");
    let ker = linalg::kernel(&eqs).expect("field");
    let basis = ker
        .basis()
        .iter()
        .map(|v| {
            let blocks = (0..=top)
                .map(|d| {
                    let r = dim_at(n.dims(), d as i64 + shift);
                    let c = m.dim(d);
                    match layout.offsets[d] {
                        Some(off) => {
                            Matrix::new(field, r, c, v[off..off + r * c].to_vec()).expect("shape")
                        }
                        None => Matrix::zeros(field, r, c),
                    }
                })
                .collect();
            GradedLinearMap::new(shift, m.dims().to_vec(), n.dims().to_vec(), blocks)
        })
        .collect();
    HomSpace {
        shift,
        basis,
        truncated,
        src: m.dims().to_vec(),
        tgt: n.dims().to_vec(),
    }
}

// ---------------------------------------------------------------------------
// tensor over a subalgebra

/// `M ⊗_B A` realized degreewise as a quotient of `⊕ M_i ⊗ A_{d-i}`.
#[derive(Clone, Debug)]
pub struct TensorOverSub {
    /// right `A`-module structure on the quotient
    pub module: GradedModule,
    offsets: Vec<Vec<usize>>,
    quotients: Vec<QuotientSpace>,
    m_dims: Vec<usize>,
    a_dims: Vec<usize>,
}

impl TensorOverSub {
    pub fn ambient_dim(&self, d: usize) -> usize {
        self.quotients[d].ambient()
    }

    pub fn quotient(&self, d: usize) -> &QuotientSpace {
        &self.quotients[d]
    }

    /// Class of `m ⊗ a` for `m ∈ M_i`, `a ∈ A_j`; `None` above the window.
    pub fn simple(&self, i: usize, m: &[Scalar], j: usize, a: &[Scalar]) -> Option<Vector> {
        let d = i + j;
        if d >= self.quotients.len() {
            return None;
        }
        let q = &self.quotients[d];
        let field = self.module.field();
        let mut amb = field.zeros(q.ambient());
        let off = self.offsets[d][i];
        let t = kron_vec(m, a);
        for (k, x) in t.into_iter().enumerate() {
            if !x.is_zero() {
                amb[off + k] = x;
            }
        }
        Some(q.project(&amb))
    }

    /// Matrix of `m -> m ⊗ a` from `M_i` into degree `i + j`.
    pub fn simple_matrix(&self, i: usize, j: usize, a: &[Scalar]) -> Matrix {
        let field = self.module.field();
        let cols: Vec<Vector> = (0..self.m_dims[i])
            .map(|k| {
                self.simple(i, &field.unit_vector(self.m_dims[i], k), j, a)
                    .expect("inside window")
            })
            .collect();
        Matrix::from_cols(field, self.module.dim(i + j), &cols).expect("shape")
    }

    /// The simple tensor `(i, m-index, j, a-index)` represented by a quotient basis element.
    pub fn basis_tensor(&self, d: usize, k: usize) -> (usize, usize, usize, usize) {
        let idx = self.quotients[d].kept()[k];
        let i = self.offsets[d].iter().rposition(|&o| o <= idx).expect("offset");
        // skip empty blocks sharing an offset
        let mut i = i;
        while self.m_dims[i] * self.a_dims[d - i] == 0 {
            i -= 1;
        }
        let rel = idx - self.offsets[d][i];
        let j = d - i;
        (i, rel / self.a_dims[j], j, rel % self.a_dims[j])
    }
}

/// `M ⊗_B A` for a right `B`-module `M` and an algebra map `emb: B -> A`.
pub fn tensor_over_sub(
    m: &GradedModule,
    b: &GradedAlgebra,
    a: &GradedAlgebra,
    emb: &GradedLinearMap,
) -> Result<TensorOverSub> {
    if m.top() != a.top() || b.top() != a.top() {
        return Err(AlgebraError::TopMismatch(m.top(), a.top()));
    }
    b.check_algebra_map(a, emb)?;
    Ok(tensor_over_sub_unchecked(m, b, a, emb))
}

pub(crate) fn tensor_over_sub_unchecked(
    m: &GradedModule,
    b: &GradedAlgebra,
    a: &GradedAlgebra,
    emb: &GradedLinearMap,
) -> TensorOverSub {
    let field = a.field();
    let top = a.top();
    let m_dims = m.dims().to_vec();
    let a_dims = a.dims().to_vec();
    let offsets: Vec<Vec<usize>> = (0..=top)
        .map(|d| {
            let mut acc = 0;
            (0..=d)
                .map(|i| {
                    let o = acc;
                    acc += m_dims[i] * a_dims[d - i];
                    o
                })
                .collect()
        })
        .collect();
    let ambient: Vec<usize> = (0..=top)
        .map(|d| (0..=d).map(|i| m_dims[i] * a_dims[d - i]).sum())
        .collect();
    // images of B generators in A, with left multiplication matrices
    let quotients: Vec<QuotientSpace> = par::map_range(top + 1, |d| {
        let mut ech = Echelon::new(field, ambient[d]);
        for (k, g) in b.generators() {
            let k = *k;
            if k > d {
                continue;
            }
            let eg = emb.block(k).apply(g);
            for i in 0..=d - k {
                let j = d - k - i;
                if m_dims[i] == 0 || a_dims[j] == 0 {
                    continue;
                }
                let mg = m.action_matrix(i, k, g);
                let left = a.left_mul_matrix(k, &eg, j);
                for mi in 0..m_dims[i] {
                    let mv = mg.col(mi);
                    for aj in 0..a_dims[j] {
                        let mut row = field.zeros(ambient[d]);
                        // (m g) ⊗ a
                        let off1 = offsets[d][i + k];
                        for (p, x) in mv.iter().enumerate() {
                            if !x.is_zero() {
                                row[off1 + p * a_dims[j] + aj] = x.clone();
                            }
                        }
                        // - m ⊗ (g a)
                        let off2 = offsets[d][i];
                        for q in 0..a_dims[k + j] {
                            let x = left.get(q, aj);
                            if !x.is_zero() {
                                let idx = off2 + mi * a_dims[k + j] + q;
                                row[idx] = &row[idx] - x;
                            }
                        }
                        if !is_zero_vec(&row) {
                            ech.insert(row);
                        }
                    }
                }
            }
        }
        quotient(ambient[d], &Subspace::from_echelon(ech)).expect("ambient")
    });
    let mut t = TensorOverSub {
        module: GradedModule {
            field,
            dims: vec![0; top + 1],
            act: Vec::new(),
        },
        offsets,
        quotients,
        m_dims,
        a_dims,
    };
    let dims: Vec<usize> = t.quotients.iter().map(QuotientSpace::dim).collect();
    let module = GradedModule::from_fn(field, dims.clone(), a, |d, j, r| {
        let e = d + j;
        let cols: Vec<Vector> = (0..dims[d])
            .map(|k| {
                let (i, mi, jj, aj) = t.basis_tensor(d, k);
                let ar = a.rmul(jj, j, r).col(aj);
                t.simple(i, &field.unit_vector(t.m_dims[i], mi), jj + j, &ar).unwrap()
            })
            .collect();
        Matrix::from_cols(field, dims[e], &cols).expect("shape")
    })
    .expect("tensor module");
    t.module = module;
    t
}

// ---------------------------------------------------------------------------
// presentations

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Arrow {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
    pub degree: usize,
}

/// A signed combination of paths; each path is a sequence of arrow indices read left to right.
/// An empty path stands for the vertex given in `vertex`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationTerm {
    pub num: i64,
    pub den: i64,
    pub path: Vec<usize>,
    pub vertex: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub terms: Vec<RelationTerm>,
}

/// Quiver with homogeneous relations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Default)]
pub struct AlgebraPresentation {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
    pub relations: Vec<Relation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Path {
    src: usize,
    tgt: usize,
    arrows: Vec<usize>,
}

/// A realized presentation together with its path bookkeeping.
#[derive(Clone, Debug)]
pub struct RealizedPresentation {
    pub algebra: GradedAlgebra,
    arrows: Vec<Arrow>,
    paths: Vec<Vec<Path>>,
    index: Vec<HashMap<Path, usize>>,
    quotients: Vec<QuotientSpace>,
}

/// A path in the quiver: a vertex (empty path) or a nonempty arrow sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathRef {
    Vertex(usize),
    Arrows(Vec<usize>),
}

impl RealizedPresentation {
    /// The path represented by basis element `k` of degree `d`.
    pub fn basis_path(&self, d: usize, k: usize) -> PathRef {
        let p = &self.paths[d][self.quotients[d].kept()[k]];
        if p.arrows.is_empty() {
            PathRef::Vertex(p.src)
        } else {
            PathRef::Arrows(p.arrows.clone())
        }
    }

    /// Degree and coordinates of a path's class; `None` above the window or if not composable.
    pub fn path_element(&self, path: &PathRef) -> Option<(usize, Vector)> {
        let field = self.algebra.field();
        let p = match path {
            PathRef::Vertex(v) => Path {
                src: *v,
                tgt: *v,
                arrows: vec![],
            },
            PathRef::Arrows(arrows) => {
                let first = self.arrows.get(*arrows.first()?)?;
                let mut tgt = first.tgt;
                for &a in &arrows[1..] {
                    let arrow = self.arrows.get(a)?;
                    if arrow.src != tgt {
                        return Some((self.path_degree(arrows), field.zeros(self.algebra.dim(self.path_degree(arrows)))));
                    }
                    tgt = arrow.tgt;
                }
                Path {
                    src: first.src,
                    tgt,
                    arrows: arrows.clone(),
                }
            }
        };
        let d = self.path_degree(&p.arrows);
        if d > self.algebra.top() {
            return None;
        }
        let idx = *self.index[d].get(&p)?;
        Some((d, self.quotients[d].projection().col(idx)))
    }

    fn path_degree(&self, arrows: &[usize]) -> usize {
        arrows.iter().map(|&a| self.arrows[a].degree).sum()
    }
}

impl AlgebraPresentation {
    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    fn path_name(&self, p: &Path) -> String {
        if p.arrows.is_empty() {
            format!("e_{}", self.vertices[p.src])
        } else {
            p.arrows.iter().map(|&a| self.arrows[a].name.as_str()).collect::<Vec<_>>().join("*")
        }
    }

    fn term_path(&self, rel: usize, t: &RelationTerm) -> Result<Path> {
        if t.path.is_empty() {
            let v = t.vertex.ok_or_else(|| AlgebraError::IllComposed {
                index: rel,
                detail: "empty path without vertex".into(),
            })?;
            return Ok(Path {
                src: v,
                tgt: v,
                arrows: vec![],
            });
        }
        for w in t.path.windows(2) {
            if self.arrows[w[0]].tgt != self.arrows[w[1]].src {
                return Err(AlgebraError::IllComposed {
                    index: rel,
                    detail: format!("{} then {}", self.arrows[w[0]].name, self.arrows[w[1]].name),
                });
            }
        }
        Ok(Path {
            src: self.arrows[t.path[0]].src,
            tgt: self.arrows[*t.path.last().unwrap()].tgt,
            arrows: t.path.clone(),
        })
    }

    fn path_degree(&self, p: &Path) -> usize {
        p.arrows.iter().map(|&a| self.arrows[a].degree).sum()
    }

    /// Realizes `kQ/I` degreewise up to internal degree `top`.
    pub fn realize(&self, field: Field, top: usize) -> Result<GradedAlgebra> {
        Ok(self.realize_full(field, top)?.algebra)
    }

    /// Like [`realize`](Self::realize), keeping the path bookkeeping needed to
    /// evaluate arbitrary paths in the quotient.
    pub fn realize_full(&self, field: Field, top: usize) -> Result<RealizedPresentation> {
        if self.vertices.is_empty() {
            return Err(AlgebraError::Presentation("no vertices".into()));
        }
        for a in &self.arrows {
            if a.degree == 0 {
                return Err(AlgebraError::Presentation(format!("arrow {} has degree 0", a.name)));
            }
            if a.src >= self.vertices.len() || a.tgt >= self.vertices.len() {
                return Err(AlgebraError::Presentation(format!("arrow {} has unknown endpoint", a.name)));
            }
        }
        // validate relations
        let mut rels: Vec<(usize, usize, usize, Vec<(Scalar, Path)>)> = Vec::new();
        for (ri, r) in self.relations.iter().enumerate() {
            let mut terms = Vec::new();
            let mut shape = None;
            for t in &r.terms {
                if t.den == 0 {
                    return Err(AlgebraError::Presentation(format!("relation {ri}: zero denominator")));
                }
                let p = self.term_path(ri, t)?;
                let deg = self.path_degree(&p);
                let s = (p.src, p.tgt, deg);
                match shape {
                    None => shape = Some(s),
                    Some(prev) if prev.2 != deg => return Err(AlgebraError::NonHomogeneous { index: ri }),
                    Some(prev) if prev != s => {
                        return Err(AlgebraError::IllComposed {
                            index: ri,
                            detail: "terms have different endpoints".into(),
                        })
                    }
                    _ => {}
                }
                terms.push((field.frac(t.num, t.den), p));
            }
            if let Some((s, t, deg)) = shape {
                rels.push((s, t, deg, terms));
            }
        }
        // enumerate paths by degree
        let mut paths: Vec<Vec<Path>> = vec![Vec::new(); top + 1];
        for v in 0..self.vertices.len() {
            paths[0].push(Path {
                src: v,
                tgt: v,
                arrows: vec![],
            });
        }
        for d in 1..=top {
            let mut cur = Vec::new();
            for (ai, a) in self.arrows.iter().enumerate() {
                if a.degree > d {
                    continue;
                }
                let prev_deg = d - a.degree;
                for p in &paths[prev_deg] {
                    if p.tgt == a.src {
                        let mut arrows = p.arrows.clone();
                        arrows.push(ai);
                        cur.push(Path {
                            src: p.src,
                            tgt: a.tgt,
                            arrows,
                        });
                    }
                }
            }
            cur.sort_by(|x, y| x.arrows.cmp(&y.arrows));
            paths[d] = cur;
        }
        let index: Vec<HashMap<Path, usize>> = paths
            .iter()
            .map(|ps| ps.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect())
            .collect();
        let concat = |p: &Path, q: &Path| -> Option<Path> {
            if p.tgt != q.src {
                return None;
            }
            if p.arrows.is_empty() {
                return Some(q.clone());
            }
            if q.arrows.is_empty() {
                return Some(p.clone());
            }
            let mut arrows = p.arrows.clone();
            arrows.extend(&q.arrows);
            Some(Path {
                src: p.src,
                tgt: q.tgt,
                arrows,
            })
        };
        // ideal generated by the relations, degree by degree
        let quotients: Vec<QuotientSpace> = par::map_range(top + 1, |d| {
            let n = paths[d].len();
            let mut ech = Echelon::new(field, n);
            for (s, t, deg, terms) in &rels {
                if *deg > d {
                    continue;
                }
                for i in 0..=d - deg {
                    let k = d - deg - i;
                    for u in paths[i].iter().filter(|u| u.tgt == *s) {
                        for w in paths[k].iter().filter(|w| w.src == *t) {
                            let mut row = field.zeros(n);
                            for (c, p) in terms {
                                let up = concat(u, p).expect("composable");
                                let upw = concat(&up, w).expect("composable");
                                let idx = index[d][&upw];
                                row[idx] = &row[idx] + c;
                            }
                            ech.insert(row);
                        }
                    }
                }
            }
            quotient(n, &Subspace::from_echelon(ech)).expect("ambient")
        });
        let dims: Vec<usize> = quotients.iter().map(QuotientSpace::dim).collect();
        let labels: Vec<Vec<String>> = quotients
            .iter()
            .enumerate()
            .map(|(d, q)| q.kept().iter().map(|&k| self.path_name(&paths[d][k])).collect())
            .collect();
        let unit = field.int(1);
        let unit_vec: Vector = (0..dims[0]).map(|_| unit.clone()).collect();
        // every vertex path survives in degree 0 (relations are never in degree 0 unless given)
        let unit_vec = if dims[0] == self.vertices.len() {
            unit_vec
        } else {
            let mut amb = field.zeros(paths[0].len());
            for x in amb.iter_mut() {
                *x = field.one();
            }
            quotients[0].project(&amb)
        };
        let alg = GradedAlgebra::from_products(field, dims, unit_vec, |i, a, j, b| {
            let p = &paths[i][quotients[i].kept()[a]];
            let q = &paths[j][quotients[j].kept()[b]];
            let d = i + j;
            match concat(p, q) {
                Some(pq) => quotients[d].projection().col(index[d][&pq]),
                None => field.zeros(quotients[d].dim()),
            }
        })?
        .with_labels(labels);
        Ok(RealizedPresentation {
            algebra: alg,
            arrows: self.arrows.clone(),
            paths,
            index,
            quotients,
        })
    }

    /// Polynomial ring `k[x_1..x_n]` on generators of degree 1.
    pub fn polynomial(vars: &[&str]) -> AlgebraPresentation {
        let mut p = AlgebraPresentation {
            vertices: vec!["0".into()],
            ..Default::default()
        };
        for v in vars {
            p.arrows.push(Arrow {
                name: (*v).into(),
                src: 0,
                tgt: 0,
                degree: 1,
            });
        }
        for i in 0..vars.len() {
            for j in i + 1..vars.len() {
                p.relations.push(Relation {
                    terms: vec![
                        RelationTerm {
                            num: 1,
                            den: 1,
                            path: vec![i, j],
                            vertex: None,
                        },
                        RelationTerm {
                            num: -1,
                            den: 1,
                            path: vec![j, i],
                            vertex: None,
                        },
                    ],
                });
            }
        }
        p
    }

    /// Truncated polynomial ring `k[x]/(x^n)` with `x` in degree 1.
    pub fn truncated_polynomial(n: usize) -> AlgebraPresentation {
        AlgebraPresentation {
            vertices: vec!["0".into()],
            arrows: vec![Arrow {
                name: "x".into(),
                src: 0,
                tgt: 0,
                degree: 1,
            }],
            relations: vec![Relation {
                terms: vec![RelationTerm {
                    num: 1,
                    den: 1,
                    path: vec![0; n],
                    vertex: None,
                }],
            }],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rationals;

    fn paper_quiver() -> AlgebraPresentation {
        let arrow = |name: &str, src, tgt| Arrow {
            name: name.into(),
            src,
            tgt,
            degree: 1,
        };
        let term = |num, path: Vec<usize>| RelationTerm {
            num,
            den: 1,
            path,
            vertex: None,
        };
        AlgebraPresentation {
            vertices: vec!["0".into(), "1".into()],
            arrows: vec![arrow("x0", 0, 1), arrow("y0", 0, 1), arrow("x1", 1, 0), arrow("y1", 1, 0)],
            relations: vec![
                Relation {
                    terms: vec![term(1, vec![0, 3]), term(-1, vec![1, 2])],
                },
                Relation {
                    terms: vec![term(1, vec![2, 1]), term(-1, vec![3, 0])],
                },
            ],
        }
    }

    #[test]
    fn polynomial_ring_dims() {
        let a = AlgebraPresentation::polynomial(&["x", "y"]).realize(Q, 5).unwrap();
        assert_eq!(a.dims(), &[1, 2, 3, 4, 5, 6]);
        a.check_axioms().unwrap();
        assert!(a.is_commutative());
    }

    #[test]
    fn paper_quiver_dims() {
        let a = paper_quiver().realize(Q, 5).unwrap();
        assert_eq!(a.dims(), &[2, 4, 6, 8, 10, 12]);
        a.check_axioms().unwrap();
        assert!(a.product_surjectivity_failures().is_empty());
    }

    #[test]
    fn point_algebra() {
        let p = AlgebraPresentation {
            vertices: vec!["v".into()],
            ..Default::default()
        };
        assert_eq!(p.realize(Q, 3).unwrap().dims(), &[1, 0, 0, 0]);
    }

    #[test]
    fn relations_shrink_dims() {
        let mut p = AlgebraPresentation::polynomial(&["x", "y"]);
        let before = p.realize(Q, 4).unwrap().dims().to_vec();
        p.relations.push(Relation {
            terms: vec![RelationTerm {
                num: 1,
                den: 1,
                path: vec![0, 0],
                vertex: None,
            }],
        });
        let after = p.realize(Q, 4).unwrap().dims().to_vec();
        assert!(after.iter().zip(&before).all(|(a, b)| a <= b));
        assert_eq!(after, vec![1, 2, 2, 2, 2]);
    }

    #[test]
    fn bad_relations_rejected() {
        let mut p = paper_quiver();
        p.relations.push(Relation {
            terms: vec![RelationTerm {
                num: 1,
                den: 1,
                path: vec![0, 1],
                vertex: None,
            }],
        });
        assert!(matches!(p.realize(Q, 3), Err(AlgebraError::IllComposed { .. })));
        let mut p = AlgebraPresentation::polynomial(&["x", "y"]);
        p.relations.push(Relation {
            terms: vec![
                RelationTerm {
                    num: 1,
                    den: 1,
                    path: vec![0, 0],
                    vertex: None,
                },
                RelationTerm {
                    num: 1,
                    den: 1,
                    path: vec![1],
                    vertex: None,
                },
            ],
        });
        assert!(matches!(p.realize(Q, 3), Err(AlgebraError::NonHomogeneous { .. })));
    }

    #[test]
    fn tensor_over_self_is_identity_dims() {
        let a = AlgebraPresentation::polynomial(&["x", "y"]).realize(Q, 4).unwrap();
        let m = a.degree_zero_module();
        let id = GradedLinearMap::identity(Q, a.dims());
        let t = tensor_over_sub(&m, &a, &a, &id).unwrap();
        assert_eq!(t.module.dims(), m.dims());
        let r = a.regular_module();
        let t = tensor_over_sub(&r, &a, &a, &id).unwrap();
        assert_eq!(t.module.dims(), a.dims());
        t.module.check_axioms(&a).unwrap();
    }

    #[test]
    fn tensor_over_ground_field() {
        let a = paper_quiver().realize(Q, 3).unwrap();
        let k = AlgebraPresentation {
            vertices: vec!["v".into()],
            ..Default::default()
        }
        .realize(Q, 3)
        .unwrap();
        let mut blocks = vec![Matrix::from_cols(Q, 2, &[a.unit().clone()]).unwrap()];
        for d in 1..=3 {
            blocks.push(Matrix::zeros(Q, a.dim(d), 0));
        }
        let emb = GradedLinearMap::new(0, k.dims().to_vec(), a.dims().to_vec(), blocks);
        let t = tensor_over_sub(&k.regular_module(), &k, &a, &emb).unwrap();
        assert_eq!(t.module.dims(), a.dims());
    }

    #[test]
    fn hom_regular_degree_zero() {
        let a = AlgebraPresentation::polynomial(&["x", "y"]).realize(Q, 3).unwrap();
        let h = hom_graded(&a.regular_module(), &a.regular_module(), &a, 0);
        assert_eq!(h.dim(), 1);
        let k = AlgebraPresentation {
            vertices: vec!["v".into()],
            ..Default::default()
        }
        .realize(Q, 2)
        .unwrap();
        assert_eq!(hom_graded(&k.regular_module(), &k.regular_module(), &k, 0).dim(), 1);
    }

    #[test]
    fn hom_composition_closed() {
        let a = paper_quiver().realize(Q, 2).unwrap();
        let m = a.regular_module();
        let n = a.degree_zero_module();
        let h1 = hom_graded(&m, &m, &a, 1);
        let h2 = hom_graded(&m, &n, &a, -1);
        let h3 = hom_graded(&m, &n, &a, 0);
        let target = h3.subspace(Q);
        for g in &h2.basis {
            for f in &h1.basis {
                let c = g.compose(f);
                assert!(target.contains(&c.flatten()).unwrap());
            }
        }
    }

    #[test]
    fn opposite_is_involution() {
        let a = paper_quiver().realize(Q, 2).unwrap();
        let oo = a.opposite().opposite();
        for i in 0..=2 {
            for j in 0..=2 - i {
                for b in 0..a.dim(j) {
                    assert_eq!(a.rmul(i, j, b), oo.rmul(i, j, b));
                }
            }
        }
    }
}
