//! Cochain complexes in coordinates, Hom complexes out of resolutions, and
//! chain-map lifting into arbitrary complexes of projectives.

use super::ext::ExtElement;
use super::resolution::{equivariant_solve, Resolution};
use super::{HomologicalError, Result};
use crate::comodule::GaloisData;
use crate::graded::{hom_graded, GradedAlgebra, GradedLinearMap, GradedModule, HomSpace};
use crate::linalg::{self, Echelon, Field, Matrix, Subspace, Vector};

/// `C^0 -> C^1 -> ...` with `diffs[n]: C^n -> C^{n+1}`.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    pub field: Field,
    pub dims: Vec<usize>,
    pub diffs: Vec<Matrix>,
}

/// `H^n` with chosen cocycle representatives.
#[derive(Clone, Debug)]
pub struct Cohomology {
    pub reps: Vec<Vector>,
    pub cocycles: Subspace,
    pub boundaries: Subspace,
    solver: Option<Matrix>,
}

impl Cohomology {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Class of a cocycle; `None` if `z` is not a cocycle.
    pub fn coordinates(&self, z: &[linalg::Scalar]) -> Option<Vector> {
        if !self.cocycles.contains(z).ok()? {
            return None;
        }
        if self.reps.is_empty() {
            return Some(Vec::new());
        }
        let sol = linalg::solve(self.solver.as_ref()?, z).ok()??;
        Some(sol[..self.reps.len()].to_vec())
    }

    /// Matrix of the map induced by a cochain map `t: C^n -> C'^n` into `target`.
    pub fn induced(&self, t: &Matrix, target: &Cohomology) -> Option<Matrix> {
        let field = t.field();
        let cols: Option<Vec<Vector>> = self.reps.iter().map(|r| target.coordinates(&t.apply(r))).collect();
        Matrix::from_cols(field, target.dim(), &cols?).ok()
    }
}

impl CochainComplex {
    pub fn is_complex(&self) -> bool {
        self.diffs.windows(2).all(|w| w[1].dot(&w[0]).is_zero())
    }

    /// Needs `diffs[n]`; boundaries come from `diffs[n - 1]`.
    pub fn cohomology(&self, n: usize) -> Cohomology {
        let field = self.field;
        let dim = self.dims[n];
        let cocycles = linalg::kernel(&self.diffs[n]).expect("field");
        let boundaries = if n == 0 {
            Subspace::zero(field, dim)
        } else {
            linalg::image(&self.diffs[n - 1])
        };
        let mut ech = Echelon::new(field, dim);
        for b in boundaries.basis() {
            ech.insert(b.clone());
        }
        let reps: Vec<Vector> = cocycles.basis().iter().filter(|z| ech.insert((*z).clone())).cloned().collect();
        let solver = (!reps.is_empty()).then(|| {
            let mut cols = reps.clone();
            cols.extend(boundaries.basis().iter().cloned());
            Matrix::from_cols(field, dim, &cols).expect("shape")
        });
        Cohomology {
            reps,
            cocycles,
            boundaries,
            solver,
        }
    }

    /// Whether `t[n]` commutes with the differentials for every available `n`.
    pub fn commutes(&self, t: &[Matrix]) -> bool {
        (0..self.diffs.len().min(t.len().saturating_sub(1))).all(|n| self.diffs[n].dot(&t[n]) == t[n + 1].dot(&self.diffs[n]))
    }
}

/// A complex of projectives `P_k` with `diffs[0]: P_0 -> M` and `diffs[k]: P_k -> P_{k-1}`.
pub trait ChainTarget {
    fn module(&self, k: usize) -> &GradedModule;
    fn diff(&self, k: usize) -> &GradedLinearMap;
    fn len(&self) -> usize;
}

impl ChainTarget for Resolution {
    fn module(&self, k: usize) -> &GradedModule {
        self.p(k)
    }
    fn diff(&self, k: usize) -> &GradedLinearMap {
        &self.diff[k]
    }
    fn len(&self) -> usize {
        self.free.len()
    }
}

/// A resolution viewed over a subalgebra.
#[derive(Clone, Debug)]
pub struct RestrictedComplex {
    pub modules: Vec<GradedModule>,
    pub base: GradedModule,
    pub diffs: Vec<GradedLinearMap>,
}

impl RestrictedComplex {
    pub fn new(res: &Resolution, sub: &GradedAlgebra, emb: &GradedLinearMap) -> Self {
        RestrictedComplex {
            modules: res.free.iter().map(|f| f.module().restrict(sub, emb)).collect(),
            base: res.module.restrict(sub, emb),
            diffs: res.diff.clone(),
        }
    }
}

impl ChainTarget for RestrictedComplex {
    fn module(&self, k: usize) -> &GradedModule {
        &self.modules[k]
    }
    fn diff(&self, k: usize) -> &GradedLinearMap {
        &self.diffs[k]
    }
    fn len(&self) -> usize {
        self.modules.len()
    }
}

/// Lifts a cocycle `y: V^L_m -> M` (internal degree `y.d`) to maps
/// `G_k: P^L_{m+k} -> T_k` with `ε G_0 = y` and `d G_k = G_{k-1} d`.
pub fn lift_into<T: ChainTarget + ?Sized>(
    res_l: &Resolution,
    target: &T,
    y: &ExtElement,
    depth: usize,
) -> Result<Vec<GradedLinearMap>> {
    let ring = &res_l.ring;
    let field = ring.field();
    let top = ring.top();
    let e = y.d;
    let m = y.n;
    if res_l.n_max() < m + depth || target.len() <= depth {
        return Err(HomologicalError::Window("resolution too short for lifting".into()));
    }
    let mut maps: Vec<GradedLinearMap> = Vec::with_capacity(depth + 1);
    for k in 0..=depth {
        let src = &res_l.free[m + k];
        let rhs: Vec<Matrix> = if k == 0 {
            y.cocycle.blocks().to_vec()
        } else {
            let comp = maps[k - 1].compose(&res_l.diff[m + k]);
            src.restrict_to_generators(&comp, ring.unit())
        };
        let tk = target.module(k);
        let mut h = Vec::with_capacity(top + 1);
        for i in 0..=top {
            let t = i as i64 - e;
            let vdim = src.gens.dim(i);
            if t < 0 || t as usize > top {
                h.push(Matrix::zeros(field, 0, vdim));
                continue;
            }
            let t = t as usize;
            let p_act: Vec<Matrix> = (0..res_l.r0.dim(0)).map(|g| tk.action(t, 0, g).clone()).collect();
            let v_act = res_l.gen_r0_action(m + k, i);
            let sol = equivariant_solve(&res_l.r0, &v_act, &p_act, target.diff(k).block(t), &rhs[i])
                .ok_or(HomologicalError::LiftFailed { degree: k, internal: i })?;
            h.push(sol);
        }
        maps.push(src.extend(ring, tk, &h, -e));
    }
    Ok(maps)
}

/// Lift of the identity of `M` from a resolution over a subalgebra into the
/// restriction of a resolution over the big algebra.
pub fn comparison_map(res_sub: &Resolution, target: &RestrictedComplex, depth: usize) -> Result<Vec<GradedLinearMap>> {
    let field = res_sub.ring.field();
    let top = res_sub.top();
    let blocks: Vec<Matrix> = (0..=top)
        .map(|i| {
            let inc = res_sub.free[0].generator_inclusion(i, res_sub.ring.unit());
            let eps = res_sub.diff[0].block(i).dot(&inc);
            if eps.rows() == 0 {
                Matrix::zeros(field, 0, res_sub.free[0].gens.dim(i))
            } else {
                eps
            }
        })
        .collect();
    let id = ExtElement {
        n: 0,
        d: 0,
        cocycle: GradedLinearMap::new(0, res_sub.free[0].gens.dims().to_vec(), res_sub.module.dims().to_vec(), blocks),
    };
    lift_into(res_sub, target, &id, depth)
}

/// `Hom_R(P_n, N)` lowering degree by `d`, for `n <= n_max + 1`, where `R` is
/// the resolution's ring or a subalgebra of it.
#[derive(Clone, Debug)]
pub struct HomComplex {
    pub d: i64,
    pub spaces: Vec<HomSpace>,
    pub complex: CochainComplex,
    pub target: GradedModule,
}

impl HomComplex {
    pub fn new(
        res: &Resolution,
        target: &GradedModule,
        sub: Option<(&GradedAlgebra, &GradedLinearMap)>,
        n_max: usize,
        d: i64,
    ) -> Result<HomComplex> {
        if res.n_max() < n_max + 1 {
            return Err(HomologicalError::Window("Hom complex needs one more resolution step".into()));
        }
        let field = res.ring.field();
        let spaces: Vec<HomSpace> = crate::par::map_range(n_max + 2, |n| match sub {
            Some((b, emb)) => hom_graded(&res.p(n).restrict(b, emb), &target.restrict(b, emb), b, -d),
            None => hom_graded(res.p(n), target, &res.ring, -d),
        });
        let mut diffs = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let cols: Option<Vec<Vector>> = spaces[n]
                .basis
                .iter()
                .map(|f| spaces[n + 1].coordinates(field, &f.compose(&res.diff[n + 1])))
                .collect();
            let cols = cols.ok_or_else(|| HomologicalError::Window(format!("cochain image leaves Hom space at {n}")))?;
            diffs.push(Matrix::from_cols(field, spaces[n + 1].dim(), &cols)?);
        }
        let dims = spaces.iter().map(HomSpace::dim).collect();
        Ok(HomComplex {
            d,
            spaces,
            complex: CochainComplex { field, dims, diffs },
            target: target.clone(),
        })
    }

    pub fn cochain(&self, n: usize, coords: &[linalg::Scalar]) -> GradedLinearMap {
        let sp = &self.spaces[n];
        let mut it = sp.basis.iter().zip(coords);
        let (f0, c0) = it.next().expect("nonempty Hom space");
        let mut out = f0.scaled(c0);
        for (f, c) in it {
            out.add_scaled(c, f);
        }
        out
    }

    pub fn coordinates(&self, n: usize, f: &GradedLinearMap) -> Option<Vector> {
        self.spaces[n].coordinates(self.complex.field, f)
    }

    /// Matrices of the Galois action of each `H`-basis element on `C^n`,
    /// for a resolution of an `A`-module mapping into an `A`-module.
    pub fn galois_action(&self, gd: &GaloisData, res: &Resolution, n: usize) -> Option<Vec<Matrix>> {
        (0..gd.hopf().dim())
            .map(|q| gd.action_matrix_on(res.p(n), &self.target, &self.spaces[n].basis, q))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::AlgebraPresentation;

    const Q: Field = Field::Rationals;

    #[test]
    fn hom_complex_matches_ext() {
        let r = AlgebraPresentation::polynomial(&["x", "y"]).realize(Q, 3).unwrap();
        let k = r.degree_zero_module();
        let res = Resolution::new(&r, &k, 3).unwrap();
        let ext = super::super::Ext::compute(&res, &k, 2, 0, 3).unwrap();
        for d in 0..=3 {
            let hc = HomComplex::new(&res, &k, None, 2, d).unwrap();
            assert!(hc.complex.is_complex());
            for n in 0..=2 {
                assert_eq!(Some(hc.complex.cohomology(n).dim()), ext.dim(n, d), "({n},{d})");
            }
        }
    }

    #[test]
    fn comparison_over_coinvariants() {
        let fx = crate::fixtures::paper_quiver(Q, 3).unwrap();
        let a0 = fx.module("A0").unwrap();
        let b = &fx.galois().b;
        let res_a = Resolution::new(fx.algebra(), a0, 3).unwrap();
        let res_b = Resolution::new(&b.algebra, &a0.restrict(&b.algebra, &b.emb), 3).unwrap();
        let rc = RestrictedComplex::new(&res_a, &b.algebra, &b.emb);
        let g = comparison_map(&res_b, &rc, 3).unwrap();
        for k in 1..=3 {
            assert_eq!(rc.diffs[k].compose(&g[k]), g[k - 1].compose(&res_b.diff[k]));
        }
        assert_eq!(rc.diffs[0].compose(&g[0]), res_b.diff[0]);
    }
}
