//! Minimal graded projective resolutions over algebras with semisimple degree-0 part.
//!
//! Projectives are realized as `V ⊗_{R_0} R` for a graded `R_0`-module `V`
//! of generators. Maps out of such a projective are determined by an
//! `R_0`-linear map on `V`, which is how chain maps and lifts are stored.

use serde::Serialize;

use super::{HomologicalError, Result};
use crate::graded::{tensor_over_sub_unchecked, GradedAlgebra, GradedLinearMap, GradedModule, TensorOverSub};
use crate::linalg::{self, Echelon, Field, Matrix, Subspace, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Semisimplicity {
    Semisimple,
    NotSemisimple,
    /// positive characteristic with a degenerate trace form
    Undetermined,
}

/// Semisimplicity of `R_0` from the trace form `(a, b) -> tr(x -> x a b)`.
/// A nondegenerate form rules out a radical in any characteristic; in
/// characteristic 0 the form's radical is exactly the Jacobson radical.
pub fn degree_zero_semisimplicity(r: &GradedAlgebra) -> Semisimplicity {
    let n = r.dim(0);
    let f = r.field();
    let mut gram = Matrix::zeros(f, n, n);
    for a in 0..n {
        for b in 0..n {
            let ab = r.mul(0, &r.basis_vector(0, a), 0, &r.basis_vector(0, b)).unwrap();
            let m = r.right_mul_matrix(0, 0, &ab);
            let mut tr = f.zero();
            for i in 0..n {
                tr = &tr + m.get(i, i);
            }
            gram.set(a, b, tr);
        }
    }
    if gram.rank() == n {
        Semisimplicity::Semisimple
    } else if f.characteristic() == 0 {
        Semisimplicity::NotSemisimple
    } else {
        Semisimplicity::Undetermined
    }
}

/// Solves `Σ_t L_t X R_t = C` for each constraint, returning one solution `X` (`rows x cols`).
pub(crate) fn solve_linear_matrix_system(
    field: Field,
    rows: usize,
    cols: usize,
    constraints: &[(Vec<(Matrix, Matrix)>, Matrix)],
) -> Option<Matrix> {
    let unknowns = rows * cols;
    if unknowns == 0 {
        return Some(Matrix::zeros(field, rows, cols));
    }
    let mut eq_rows: Vec<Vector> = Vec::new();
    let mut rhs: Vector = Vec::new();
    for (terms, c) in constraints {
        for p in 0..c.rows() {
            for q in 0..c.cols() {
                let mut row = field.zeros(unknowns);
                for (l, r) in terms {
                    for a in 0..rows {
                        let la = l.get(p, a);
                        if la.is_zero() {
                            continue;
                        }
                        for b in 0..cols {
                            let rb = r.get(b, q);
                            if !rb.is_zero() {
                                let idx = a * cols + b;
                                row[idx] = &row[idx] + &(la * rb);
                            }
                        }
                    }
                }
                eq_rows.push(row);
                rhs.push(c.get(p, q).clone());
            }
        }
    }
    let m = Matrix::from_rows(field, unknowns, &eq_rows).ok()?;
    let x = linalg::solve(&m, &rhs).ok()??;
    Matrix::new(field, rows, cols, x).ok()
}

/// An `R_0`-linear solution `H` of `D H = C` where `V` and `P` carry `R_0`-actions.
pub(crate) fn equivariant_solve(
    r0: &GradedAlgebra,
    v_act: &[Matrix],
    p_act: &[Matrix],
    d: &Matrix,
    c: &Matrix,
) -> Option<Matrix> {
    let field = r0.field();
    let rows = d.cols();
    let cols = c.cols();
    let mut constraints = vec![(vec![(d.clone(), Matrix::identity(field, cols))], c.clone())];
    for (va, pa) in v_act.iter().zip(p_act) {
        constraints.push((
            vec![
                (pa.clone(), Matrix::identity(field, cols)),
                (Matrix::identity(field, rows).scaled(&field.int(-1)), va.clone()),
            ],
            Matrix::zeros(field, rows, cols),
        ));
    }
    solve_linear_matrix_system(field, rows, cols, &constraints)
}

/// A projective `V ⊗_{R_0} R` with its generator module.
#[derive(Clone, Debug)]
pub struct FreeModule {
    pub gens: GradedModule,
    pub tensor: TensorOverSub,
}

impl FreeModule {
    pub fn module(&self) -> &GradedModule {
        &self.tensor.module
    }

    /// Multiset of generator degrees.
    pub fn generator_degrees(&self) -> Vec<usize> {
        self.gens
            .dims()
            .iter()
            .enumerate()
            .flat_map(|(d, &n)| std::iter::repeat(d).take(n))
            .collect()
    }

    /// Matrix of `v -> v ⊗ 1` from `V_i` into the projective.
    pub fn generator_inclusion(&self, i: usize, unit: &[crate::linalg::Scalar]) -> Matrix {
        self.tensor.simple_matrix(i, 0, unit)
    }

    /// The `R`-linear map determined by `h[i]: V_i -> N_{i + shift}`.
    pub fn extend(&self, ring: &GradedAlgebra, target: &GradedModule, h: &[Matrix], shift: i64) -> GradedLinearMap {
        let field = ring.field();
        let src = self.module().dims().to_vec();
        let tgt = target.dims().to_vec();
        let blocks = (0..src.len())
            .map(|e| {
                let t = e as i64 + shift;
                let rows = if t >= 0 && (t as usize) < tgt.len() { tgt[t as usize] } else { 0 };
                let cols: Vec<Vector> = (0..src[e])
                    .map(|k| {
                        let (i, v, j, r) = self.tensor.basis_tensor(e, k);
                        let ti = i as i64 + shift;
                        if rows == 0 || ti < 0 {
                            return field.zeros(rows);
                        }
                        let hv = h[i].col(v);
                        target.act_vec(ti as usize, &hv, j, &ring.basis_vector(j, r))
                    })
                    .collect();
                Matrix::from_cols(field, rows, &cols).expect("shape")
            })
            .collect();
        GradedLinearMap::new(shift, src, tgt, blocks)
    }

    /// Restriction of an `R`-linear map out of the projective to the generators.
    pub fn restrict_to_generators(&self, f: &GradedLinearMap, unit: &[crate::linalg::Scalar]) -> Vec<Matrix> {
        (0..self.gens.dims().len())
            .map(|i| match f.target_degree(i) {
                Some(_) => f.block(i).dot(&self.generator_inclusion(i, unit)),
                None => Matrix::zeros(f.field(), 0, self.gens.dim(i)),
            })
            .collect()
    }
}

/// A minimal graded projective resolution `... -> P_1 -> P_0 -> M`, computed
/// exactly in internal degrees up to the algebra's truncation.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub ring: GradedAlgebra,
    pub r0: GradedAlgebra,
    pub r0_emb: GradedLinearMap,
    pub module: GradedModule,
    pub free: Vec<FreeModule>,
    /// `diff[0]: P_0 -> M`, `diff[n]: P_n -> P_{n-1}`
    pub diff: Vec<GradedLinearMap>,
}

impl Resolution {
    pub fn new(ring: &GradedAlgebra, module: &GradedModule, n_max: usize) -> Result<Resolution> {
        match degree_zero_semisimplicity(ring) {
            Semisimplicity::Semisimple => {}
            s => return Err(HomologicalError::DegreeZeroNotSemisimple(s)),
        }
        Resolution::new_assuming_semisimple(ring, module, n_max)
    }

    /// Skips the trace-form test (for callers that certified `R_0` by other means).
    pub fn new_assuming_semisimple(ring: &GradedAlgebra, module: &GradedModule, n_max: usize) -> Result<Resolution> {
        if module.top() != ring.top() {
            return Err(HomologicalError::Window(format!(
                "module top {} vs ring top {}",
                module.top(),
                ring.top()
            )));
        }
        let field = ring.field();
        let top = ring.top();
        let (r0, r0_emb) = ring.degree_zero();
        let mut free = Vec::with_capacity(n_max + 1);
        let mut diff = Vec::with_capacity(n_max + 1);
        // current syzygy: a submodule of `target`, given by basis matrices
        let mut target = module.clone();
        let mut kbasis: Vec<Matrix> = (0..=top).map(|d| Matrix::identity(field, module.dim(d))).collect();
        for _ in 0..=n_max {
            let kmod = submodule_in_basis(&target, &kbasis, ring);
            let (gens, sections) = top_space(ring, &r0, &kmod)?;
            let tensor = tensor_over_sub_unchecked(&gens, &r0, ring, &r0_emb);
            let fm = FreeModule { gens, tensor };
            let onto_k = fm.extend(ring, &kmod, &sections, 0);
            let blocks: Vec<Matrix> = (0..=top).map(|d| kbasis[d].dot(onto_k.block(d))).collect();
            let dn = GradedLinearMap::new(0, fm.module().dims().to_vec(), target.dims().to_vec(), blocks);
            let next: Vec<Matrix> = (0..=top)
                .map(|d| {
                    let ker = linalg::kernel(dn.block(d)).expect("field");
                    let m = ker.basis_matrix();
                    if m.cols() == 0 {
                        Matrix::zeros(field, fm.module().dim(d), 0)
                    } else {
                        m
                    }
                })
                .collect();
            target = fm.module().clone();
            kbasis = next;
            free.push(fm);
            diff.push(dn);
        }
        Ok(Resolution {
            ring: ring.clone(),
            r0,
            r0_emb,
            module: module.clone(),
            free,
            diff,
        })
    }

    pub fn n_max(&self) -> usize {
        self.free.len() - 1
    }

    pub fn top(&self) -> usize {
        self.ring.top()
    }

    pub fn generator_degrees(&self, n: usize) -> Vec<usize> {
        self.free[n].generator_degrees()
    }

    pub fn p(&self, n: usize) -> &GradedModule {
        self.free[n].module()
    }

    /// Action matrices of the `R_0` basis on `V_n` in degree `i`.
    pub(crate) fn gen_r0_action(&self, n: usize, i: usize) -> Vec<Matrix> {
        (0..self.r0.dim(0)).map(|g| self.free[n].gens.action(i, 0, g).clone()).collect()
    }

    /// `d ∘ d = 0` and `ε ∘ d_1 = 0`.
    pub fn is_complex(&self) -> bool {
        (1..self.diff.len()).all(|n| self.diff[n - 1].compose(&self.diff[n]).is_zero())
    }

    /// Exactness at `M` (surjectivity of `ε`) and at each `P_n` with `n < n_max`, degreewise.
    pub fn is_exact(&self) -> bool {
        for d in 0..=self.top() {
            if self.diff[0].block(d).rank() != self.module.dim(d) {
                return false;
            }
            for n in 0..self.n_max() {
                let ker = linalg::kernel(self.diff[n].block(d)).expect("field").dim();
                let im = self.diff[n + 1].block(d).rank();
                if ker != im {
                    return false;
                }
            }
        }
        true
    }

    /// Every differential lands in `P_{n-1} R_{>=1}` (graded Nakayama minimality).
    pub fn is_minimal(&self) -> bool {
        for n in 1..self.diff.len() {
            let p = self.p(n - 1);
            for d in 0..=self.top() {
                let dec = decomposables(&self.ring, p, d);
                for c in self.diff[n].block(d).columns() {
                    if !dec.contains(&c).expect("shape") {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// `(N R_{>=1})_d`.
pub(crate) fn decomposables(ring: &GradedAlgebra, m: &GradedModule, d: usize) -> Subspace {
    let field = ring.field();
    let mut ech = Echelon::new(field, m.dim(d));
    for i in 0..d {
        for k in 0..m.dim(i) {
            let v = field.unit_vector(m.dim(i), k);
            for b in 0..ring.dim(d - i) {
                ech.insert(m.action(i, d - i, b).apply(&v));
                if ech.is_full() {
                    return Subspace::from_echelon(ech);
                }
            }
        }
    }
    Subspace::from_echelon(ech)
}

/// Submodule of `target` spanned by the independent columns of `basis[d]`,
/// in the coordinates of those columns.
fn submodule_in_basis(target: &GradedModule, basis: &[Matrix], ring: &GradedAlgebra) -> GradedModule {
    let field = ring.field();
    let dims: Vec<usize> = basis.iter().map(Matrix::cols).collect();
    GradedModule::from_fn(field, dims.clone(), ring, |d, j, b| {
        let imgs: Vec<Vector> = basis[d]
            .columns()
            .iter()
            .map(|v| target.action(d, j, b).apply(v))
            .collect();
        if imgs.is_empty() || dims[d + j] == 0 {
            return Matrix::zeros(field, dims[d + j], dims[d]);
        }
        let sols = linalg::solve_many(&basis[d + j], &imgs).expect("field");
        let cols: Vec<Vector> = sols.into_iter().map(|s| s.expect("submodule is closed")).collect();
        Matrix::from_cols(field, dims[d + j], &cols).expect("shape")
    })
    .expect("submodule")
}

/// Generators `K / K R_{>=1}` as an `R_0`-module, with `R_0`-linear sections into `K`.
fn top_space(ring: &GradedAlgebra, r0: &GradedAlgebra, k: &GradedModule) -> Result<(GradedModule, Vec<Matrix>)> {
    let field = ring.field();
    let top = ring.top();
    let n0 = r0.dim(0);
    let mut quotients = Vec::with_capacity(top + 1);
    for d in 0..=top {
        let dec = decomposables(ring, k, d);
        quotients.push(linalg::quotient(k.dim(d), &dec)?);
    }
    let mut dims = vec![0; top + 1];
    for d in 0..=top {
        dims[d] = quotients[d].dim();
    }
    let acts: Vec<Vec<Matrix>> = (0..=top)
        .map(|d| {
            (0..n0)
                .map(|g| {
                    quotients[d]
                        .projection()
                        .dot(k.action(d, 0, g))
                        .dot(quotients[d].section())
                })
                .collect()
        })
        .collect();
    let gens = GradedModule::from_fn(field, dims.clone(), r0, |d, j, g| {
        if j == 0 {
            acts[d][g].clone()
        } else {
            Matrix::zeros(field, 0, 0)
        }
    })?;
    let mut sections = Vec::with_capacity(top + 1);
    for d in 0..=top {
        let k_act: Vec<Matrix> = (0..n0).map(|g| k.action(d, 0, g).clone()).collect();
        let s = equivariant_solve(
            r0,
            &acts[d],
            &k_act,
            quotients[d].projection(),
            &Matrix::identity(field, dims[d]),
        )
        .ok_or(HomologicalError::NoEquivariantSection(d))?;
        sections.push(s);
    }
    Ok((gens, sections))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::AlgebraPresentation;

    const Q: Field = Field::Rationals;

    #[test]
    fn koszul_complex_of_polynomial_ring() {
        let r = AlgebraPresentation::polynomial(&["x", "y"]).realize(Q, 5).unwrap();
        let res = Resolution::new(&r, &r.degree_zero_module(), 3).unwrap();
        assert_eq!(res.generator_degrees(0), vec![0]);
        assert_eq!(res.generator_degrees(1), vec![1, 1]);
        assert_eq!(res.generator_degrees(2), vec![2]);
        assert!(res.generator_degrees(3).is_empty());
        assert!(res.is_complex() && res.is_exact() && res.is_minimal());
    }

    #[test]
    fn truncated_cubic_periodic_pattern() {
        let r = AlgebraPresentation::truncated_polynomial(3).realize(Q, 7).unwrap();
        let res = Resolution::new(&r, &r.degree_zero_module(), 4).unwrap();
        let degs: Vec<Vec<usize>> = (0..=4).map(|n| res.generator_degrees(n)).collect();
        assert_eq!(degs, vec![vec![0], vec![1], vec![3], vec![4], vec![6]]);
        assert!(res.is_complex() && res.is_exact() && res.is_minimal());
    }

    #[test]
    fn semisimplicity_of_degree_zero() {
        let kz2 = crate::hopf::HopfAlgebra::cyclic_group(2, Q).as_algebra();
        assert_eq!(degree_zero_semisimplicity(&kz2), Semisimplicity::Semisimple);
        let f2 = Field::prime(2).unwrap();
        let kz2 = crate::hopf::HopfAlgebra::cyclic_group(2, f2).as_algebra();
        assert_eq!(degree_zero_semisimplicity(&kz2), Semisimplicity::Undetermined);
        let dual = AlgebraPresentation::truncated_polynomial(2).realize(Q, 1).unwrap();
        // ungraded dual numbers: put x in degree 0 via the concentrated constructor
        let mult = Matrix::from_i64(Q, &[vec![1, 0, 0, 0], vec![0, 1, 1, 0]]);
        let ungraded = GradedAlgebra::concentrated(Q, &mult, vec![Q.one(), Q.zero()]).unwrap();
        assert_eq!(degree_zero_semisimplicity(&ungraded), Semisimplicity::NotSemisimple);
        assert_eq!(degree_zero_semisimplicity(&dual), Semisimplicity::Semisimple);
        assert!(Resolution::new(&ungraded, &ungraded.regular_module(), 1).is_err());
    }

    #[test]
    fn group_algebra_modules_are_projective() {
        let kz2 = crate::hopf::HopfAlgebra::cyclic_group(2, Q).as_algebra();
        let res = Resolution::new(&kz2, &kz2.regular_module(), 2).unwrap();
        assert_eq!(res.generator_degrees(0).len(), 2);
        assert!(res.generator_degrees(1).is_empty());
    }
}
