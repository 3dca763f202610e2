//! Bigraded Ext via minimal resolutions, with Yoneda products by chain-map lifting.
//!
//! A class in `Ext^n(M, N)` of internal degree `d` is represented by a cocycle
//! on generators, an `R_0`-linear map `V_n -> N` lowering degree by `d`.
//! Classes are reduced against coboundaries with deterministic echelon choices.

use std::collections::BTreeMap;

use serde::Serialize;

use super::resolution::Resolution;
use super::{HomologicalError, Result};
use crate::graded::{hom_graded, GradedAlgebra, GradedLinearMap, GradedModule};
use crate::linalg::{self, Echelon, Field, Matrix, Subspace, Vector};
use crate::par;

/// One bidegree of Ext, or a record that it lies outside the certified window.
#[derive(Clone, Debug)]
pub struct ExtCell {
    pub n: usize,
    pub d: i64,
    pub certified: bool,
    /// cocycle representatives of a basis
    pub reps: Vec<GradedLinearMap>,
    boundaries: Subspace,
    solver: Option<Matrix>,
}

impl ExtCell {
    pub fn dim(&self) -> Option<usize> {
        self.certified.then_some(self.reps.len())
    }

    /// Coordinates of a cocycle in the basis of classes.
    pub fn coordinates(&self, cocycle: &GradedLinearMap) -> Option<Vector> {
        if self.reps.is_empty() {
            return Some(Vec::new());
        }
        let sys = self.solver.as_ref()?;
        let sol = linalg::solve(sys, &cocycle.flatten()).ok()??;
        Some(sol[..self.reps.len()].to_vec())
    }

    pub fn boundaries(&self) -> &Subspace {
        &self.boundaries
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ExtTable {
    pub n_max: usize,
    pub d_min: i64,
    pub d_max: i64,
    /// `dims[n][d - d_min]`, `None` outside the certified window
    pub dims: Vec<Vec<Option<usize>>>,
}

impl ExtTable {
    pub fn get(&self, n: usize, d: i64) -> Option<usize> {
        self.dims.get(n)?.get((d - self.d_min) as usize).copied().flatten()
    }

    /// Total dimension of `Ext^n` over certified internal degrees.
    pub fn ext_degree_total(&self, n: usize) -> usize {
        self.dims[n].iter().flatten().sum()
    }
}

/// `Ext^n_R(M, N)` for `n <= n_max`, internal degrees `d_min..=d_max`.
#[derive(Clone, Debug)]
pub struct Ext {
    pub res: Resolution,
    pub target: GradedModule,
    pub n_max: usize,
    pub cells: BTreeMap<(usize, i64), ExtCell>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtElement {
    pub n: usize,
    pub d: i64,
    pub cocycle: GradedLinearMap,
}

impl Ext {
    /// `res` must reach homological degree `n_max + 1`.
    pub fn compute(res: &Resolution, target: &GradedModule, n_max: usize, d_min: i64, d_max: i64) -> Result<Ext> {
        if res.n_max() < n_max + 1 {
            return Err(HomologicalError::Window(format!(
                "resolution reaches {} but Ext^{} needs {}",
                res.n_max(),
                n_max,
                n_max + 1
            )));
        }
        let field = res.ring.field();
        let top = res.top() as i64;
        let t = target.highest_degree().map_or(0, |t| t as i64);
        let ungraded = top == 0;
        let n_r0 = target.restrict(&res.r0, &res.r0_emb);
        let keys: Vec<(usize, i64)> = (0..=n_max).flat_map(|n| (d_min..=d_max).map(move |d| (n, d))).collect();
        let cells = par::map_slice(&keys, |&(n, d)| {
            let certified = ungraded || d + t <= top;
            if !certified {
                return ExtCell {
                    n,
                    d,
                    certified,
                    reps: Vec::new(),
                    boundaries: Subspace::zero(field, 0),
                    solver: None,
                };
            }
            compute_cell(res, target, &n_r0, n, d)
        });
        Ok(Ext {
            res: res.clone(),
            target: target.clone(),
            n_max,
            cells: keys.into_iter().zip(cells).collect(),
        })
    }

    pub fn field(&self) -> Field {
        self.res.ring.field()
    }

    pub fn cell(&self, n: usize, d: i64) -> Option<&ExtCell> {
        self.cells.get(&(n, d))
    }

    pub fn dim(&self, n: usize, d: i64) -> Option<usize> {
        self.cell(n, d)?.dim()
    }

    pub fn table(&self) -> ExtTable {
        let d_min = self.cells.keys().map(|k| k.1).min().unwrap_or(0);
        let d_max = self.cells.keys().map(|k| k.1).max().unwrap_or(0);
        let dims = (0..=self.n_max)
            .map(|n| (d_min..=d_max).map(|d| self.dim(n, d)).collect())
            .collect();
        ExtTable {
            n_max: self.n_max,
            d_min,
            d_max,
            dims,
        }
    }

    pub fn element(&self, n: usize, d: i64, i: usize) -> ExtElement {
        ExtElement {
            n,
            d,
            cocycle: self.cells[&(n, d)].reps[i].clone(),
        }
    }

    /// All certified basis elements.
    pub fn basis(&self) -> Vec<ExtElement> {
        self.cells
            .values()
            .filter(|c| c.certified)
            .flat_map(|c| {
                c.reps.iter().map(move |r| ExtElement {
                    n: c.n,
                    d: c.d,
                    cocycle: r.clone(),
                })
            })
            .collect()
    }

    pub fn coordinates(&self, x: &ExtElement) -> Option<Vector> {
        self.cell(x.n, x.d)?.coordinates(&x.cocycle)
    }

    /// Extension of a generator cocycle `V_n -> N` to the projective `P_n`.
    pub fn extend(&self, x: &ExtElement) -> GradedLinearMap {
        self.res.free[x.n].extend(&self.res.ring, &self.target, x.cocycle.blocks(), -x.d)
    }
}

fn compute_cell(res: &Resolution, target: &GradedModule, n_r0: &GradedModule, n: usize, d: i64) -> ExtCell {
    let field = res.ring.field();
    let cochains = |k: usize| hom_graded(&res.free[k].gens, n_r0, &res.r0, -d);
    let w = cochains(n);
    let delta = |k: usize, f: &GradedLinearMap| -> Vector {
        let full = res.free[k].extend(&res.ring, target, f.blocks(), -d);
        let comp = full.compose(&res.diff[k + 1]);
        let blocks = res.free[k + 1].restrict_to_generators(&comp, res.ring.unit());
        GradedLinearMap::new(-d, res.free[k + 1].gens.dims().to_vec(), target.dims().to_vec(), blocks).flatten()
    };
    let flat_len = GradedLinearMap::zero(field, -d, res.free[n].gens.dims(), target.dims()).flat_len();
    // cocycles
    let images: Vec<Vector> = w.basis.iter().map(|f| delta(n, f)).collect();
    let out_len = GradedLinearMap::zero(field, -d, res.free[n + 1].gens.dims(), target.dims()).flat_len();
    let cocycles: Vec<Vector> = if w.basis.is_empty() {
        Vec::new()
    } else {
        let m = Matrix::from_cols(field, out_len, &images).expect("shape");
        let ker = linalg::kernel(&m).expect("field");
        ker.basis()
            .iter()
            .map(|c| {
                let mut v = field.zeros(flat_len);
                for (coef, f) in c.iter().zip(&w.basis) {
                    if !coef.is_zero() {
                        linalg::axpy(&mut v, coef, &f.flatten());
                    }
                }
                v
            })
            .collect()
    };
    // coboundaries
    let boundaries = if n == 0 {
        Subspace::zero(field, flat_len)
    } else {
        let prev = cochains(n - 1);
        Subspace::span(field, flat_len, prev.basis.iter().map(|f| delta(n - 1, f))).expect("shape")
    };
    let mut ech = Echelon::new(field, flat_len);
    for b in boundaries.basis() {
        ech.insert(b.clone());
    }
    let mut reps_flat = Vec::new();
    for z in cocycles {
        if ech.insert(z.clone()) {
            reps_flat.push(z);
        }
    }
    let src = res.free[n].gens.dims().to_vec();
    let reps: Vec<GradedLinearMap> = reps_flat
        .iter()
        .map(|v| GradedLinearMap::unflatten(field, -d, &src, target.dims(), v))
        .collect();
    let solver = if reps_flat.is_empty() {
        None
    } else {
        let mut cols = reps_flat.clone();
        cols.extend(boundaries.basis().iter().cloned());
        Some(Matrix::from_cols(field, flat_len, &cols).expect("shape"))
    };
    ExtCell {
        n,
        d,
        certified: true,
        reps,
        boundaries,
        solver,
    }
}

/// Lifts a cocycle `y: V^L_m -> M` (internal degree `e`) to chain maps
/// `G_k: P^L_{m+k} -> P^M_k` for `k <= depth`.
pub fn lift_chain_map(
    res_l: &Resolution,
    res_m: &Resolution,
    y: &ExtElement,
    depth: usize,
) -> Result<Vec<GradedLinearMap>> {
    super::complex::lift_into(res_l, res_m, y, depth)
}

/// Yoneda product `x · y` for `x ∈ Ext(M, N)` and `y ∈ Ext(L, M)`, as a cocycle for `Ext(L, N)`.
pub fn yoneda_product(x_space: &Ext, x: &ExtElement, res_l: &Resolution, y: &ExtElement) -> Result<ExtElement> {
    let lifts = lift_chain_map(res_l, &x_space.res, y, x.n)?;
    let fx = x_space.extend(x);
    let comp = fx.compose(&lifts[x.n]);
    let blocks = res_l.free[x.n + y.n].restrict_to_generators(&comp, res_l.ring.unit());
    let src = res_l.free[x.n + y.n].gens.dims().to_vec();
    let cocycle = GradedLinearMap::new(-(x.d + y.d), src, x_space.target.dims().to_vec(), blocks);
    Ok(ExtElement {
        n: x.n + y.n,
        d: x.d + y.d,
        cocycle,
    })
}

/// Where each bidegree sits inside the ext-degree grading.
#[derive(Clone, Debug)]
pub struct ExtDegreeLayout {
    /// offset of cell `(n, d)` inside ext-degree `n`
    pub offsets: BTreeMap<(usize, i64), usize>,
    /// `(d, index in cell)` for each basis element of ext-degree `n`
    pub basis: Vec<Vec<(i64, usize)>>,
}

/// `Ext_R(M, M)` with its Yoneda product.
#[derive(Clone, Debug)]
pub struct ExtAlgebra {
    pub ext: Ext,
}

impl ExtAlgebra {
    pub fn new(res: &Resolution, n_max: usize, d_min: i64, d_max: i64) -> Result<ExtAlgebra> {
        Ok(ExtAlgebra {
            ext: Ext::compute(res, &res.module, n_max, d_min, d_max)?,
        })
    }

    /// Product in coordinates; `None` if the target bidegree is outside the window.
    pub fn mul(&self, x: &ExtElement, y: &ExtElement) -> Result<Option<Vector>> {
        let n = x.n + y.n;
        let d = x.d + y.d;
        match self.ext.cell(n, d) {
            Some(c) if c.certified => {}
            _ => return Ok(None),
        }
        let p = yoneda_product(&self.ext, x, &self.ext.res, y)?;
        Ok(self.ext.coordinates(&p))
    }

    pub fn unit(&self) -> Option<ExtElement> {
        let f = self.ext.field();
        let res = &self.ext.res;
        let blocks = (0..=res.top())
            .map(|i| {
                let eps = res.diff[0].block(i).dot(&res.free[0].generator_inclusion(i, res.ring.unit()));
                if eps.rows() == 0 {
                    Matrix::zeros(f, 0, res.free[0].gens.dim(i))
                } else {
                    eps
                }
            })
            .collect();
        Some(ExtElement {
            n: 0,
            d: 0,
            cocycle: GradedLinearMap::new(0, res.free[0].gens.dims().to_vec(), res.module.dims().to_vec(), blocks),
        })
    }

    /// The algebra graded by ext-degree alone, summing the certified internal degrees.
    /// Errors if a product of basis classes lands in an uncertified bidegree.
    pub fn ext_degree_algebra(&self) -> Result<(GradedAlgebra, ExtDegreeLayout)> {
        let field = self.ext.field();
        let ext = &self.ext;
        let n_max = ext.n_max;
        let mut offsets = BTreeMap::new();
        let mut basis: Vec<Vec<(i64, usize)>> = vec![Vec::new(); n_max + 1];
        for (&(n, d), c) in &ext.cells {
            if c.certified {
                offsets.insert((n, d), basis[n].len());
                basis[n].extend((0..c.reps.len()).map(|i| (d, i)));
            }
        }
        let dims: Vec<usize> = basis.iter().map(Vec::len).collect();
        let jobs: Vec<(usize, usize, usize, usize)> = (0..=n_max)
            .flat_map(|i| (0..=n_max - i).map(move |j| (i, j)))
            .flat_map(|(i, j)| {
                let (da, db) = (dims[i], dims[j]);
                (0..da).flat_map(move |a| (0..db).map(move |b| (i, a, j, b)))
            })
            .collect();
        let products = par::map_slice(&jobs, |&(i, a, j, b)| -> Result<Vector> {
            let (d, ia) = basis[i][a];
            let (e, ib) = basis[j][b];
            let coords = self.mul(&ext.element(i, d, ia), &ext.element(j, e, ib))?.ok_or_else(|| {
                HomologicalError::Window(format!("product lands in uncertified bidegree ({}, {})", i + j, d + e))
            })?;
            let mut out = field.zeros(dims[i + j]);
            if !coords.is_empty() {
                let off = offsets[&(i + j, d + e)];
                for (k, c) in coords.into_iter().enumerate() {
                    out[off + k] = c;
                }
            }
            Ok(out)
        });
        let mut table = BTreeMap::new();
        for (job, p) in jobs.into_iter().zip(products) {
            table.insert(job, p?);
        }
        let unit_coords = ext.coordinates(&self.unit().expect("unit")).expect("unit is a cocycle");
        let mut unit = field.zeros(dims[0]);
        if let Some(&off) = offsets.get(&(0, 0)) {
            for (k, c) in unit_coords.into_iter().enumerate() {
                unit[off + k] = c;
            }
        }
        let alg = GradedAlgebra::from_products(field, dims, unit, |i, a, j, b| table[&(i, a, j, b)].clone())?;
        Ok((alg, ExtDegreeLayout { offsets, basis }))
    }

    /// Structure constants `e_i e_j` for basis elements of the given bidegrees.
    pub fn mult_table(&self, a: (usize, i64), b: (usize, i64)) -> Result<Option<Vec<Vec<Vector>>>> {
        let ca = match self.ext.cell(a.0, a.1) {
            Some(c) if c.certified => c,
            _ => return Ok(None),
        };
        let cb = match self.ext.cell(b.0, b.1) {
            Some(c) if c.certified => c,
            _ => return Ok(None),
        };
        let mut out = Vec::with_capacity(ca.reps.len());
        for i in 0..ca.reps.len() {
            let mut row = Vec::with_capacity(cb.reps.len());
            for j in 0..cb.reps.len() {
                match self.mul(&self.ext.element(a.0, a.1, i), &self.ext.element(b.0, b.1, j))? {
                    Some(v) => row.push(v),
                    None => return Ok(None),
                }
            }
            out.push(row);
        }
        Ok(Some(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::AlgebraPresentation;

    const Q: Field = Field::Rationals;

    fn ext_of_k(p: AlgebraPresentation, top: usize, n_max: usize) -> ExtAlgebra {
        let r = p.realize(Q, top).unwrap();
        let res = Resolution::new(&r, &r.degree_zero_module(), n_max + 1).unwrap();
        ExtAlgebra::new(&res, n_max, 0, top as i64).unwrap()
    }

    #[test]
    fn dual_numbers() {
        let e = ext_of_k(AlgebraPresentation::truncated_polynomial(2), 5, 4);
        for n in 0..=4 {
            for d in 0..=5 {
                let expected = usize::from(n as i64 == d);
                assert_eq!(e.ext.dim(n, d), Some(expected), "({n},{d})");
            }
        }
        // generator powers span
        let x = e.ext.element(1, 1, 0);
        let mut p = x.clone();
        for n in 2..=4 {
            let v = e.mul(&p, &x).unwrap().unwrap();
            assert!(!crate::linalg::is_zero_vec(&v));
            p = yoneda_product(&e.ext, &p, &e.ext.res, &x).unwrap();
            assert_eq!(p.n, n);
        }
    }

    #[test]
    fn exterior_algebra_signs() {
        let e = ext_of_k(AlgebraPresentation::polynomial(&["x", "y"]), 4, 2);
        assert_eq!(e.ext.dim(0, 0), Some(1));
        assert_eq!(e.ext.dim(1, 1), Some(2));
        assert_eq!(e.ext.dim(2, 2), Some(1));
        assert_eq!(e.ext.dim(2, 3), Some(0));
        let a = e.ext.element(1, 1, 0);
        let b = e.ext.element(1, 1, 1);
        let ab = e.mul(&a, &b).unwrap().unwrap();
        let ba = e.mul(&b, &a).unwrap().unwrap();
        assert!(!crate::linalg::is_zero_vec(&ab));
        assert_eq!(ab, crate::linalg::scale(&ba, &Q.int(-1)));
        assert!(crate::linalg::is_zero_vec(&e.mul(&a, &a).unwrap().unwrap()));
    }

    #[test]
    fn unit_acts_trivially() {
        let e = ext_of_k(AlgebraPresentation::polynomial(&["x", "y"]), 3, 2);
        let u = e.unit().unwrap();
        assert_eq!(e.ext.coordinates(&u), Some(vec![Q.one()]));
        for x in e.ext.basis() {
            let coords = e.ext.coordinates(&x).unwrap();
            if let Some(v) = e.mul(&u, &x).unwrap() {
                assert_eq!(v, coords);
            }
            if let Some(v) = e.mul(&x, &u).unwrap() {
                assert_eq!(v, coords);
            }
        }
    }

    #[test]
    fn cubic_ext_dims() {
        let e = ext_of_k(AlgebraPresentation::truncated_polynomial(3), 7, 4);
        let expect = [(0, 0), (1, 1), (2, 3), (3, 4), (4, 6)];
        for (n, d) in expect {
            assert_eq!(e.ext.dim(n, d), Some(1));
        }
        assert_eq!(e.ext.table().ext_degree_total(2), 1);
    }

    #[test]
    fn quiver_ext_over_both_algebras() {
        let fx = crate::fixtures::paper_quiver(Q, 3).unwrap();
        let a = fx.algebra();
        let a0 = fx.module("A0").unwrap();
        let res_a = Resolution::new(a, a0, 3).unwrap();
        let ea = ExtAlgebra::new(&res_a, 2, 0, 3).unwrap();
        let b = &fx.galois().b;
        let a0_b = a0.restrict(&b.algebra, &b.emb);
        let res_b = Resolution::new(&b.algebra, &a0_b, 3).unwrap();
        let eb = ExtAlgebra::new(&res_b, 2, 0, 3).unwrap();
        for (n, want_a, want_b) in [(0, 2, 4), (1, 4, 8), (2, 2, 4)] {
            assert_eq!(ea.ext.dim(n, n as i64), Some(want_a));
            assert_eq!(eb.ext.dim(n, n as i64), Some(want_b));
            assert_eq!(ea.ext.table().ext_degree_total(n), want_a);
            assert_eq!(eb.ext.table().ext_degree_total(n), want_b);
        }
    }
}
