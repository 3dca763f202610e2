//! Ext over the coinvariants together with its Galois `H`-action, the
//! restriction from Ext over the big algebra, and the invariant comparison.
//!
//! The action is computed on cochains `Hom_B(P_n, N)` for a resolution `P`
//! over `A` and transported to the minimal resolution over `B` through the
//! comparison map lifting the identity of `M`.

use std::collections::BTreeMap;

use super::complex::{comparison_map, Cohomology, HomComplex, RestrictedComplex};
use super::ext::{ExtAlgebra, ExtDegreeLayout, ExtElement};
use super::resolution::Resolution;
use super::{HomologicalError, Result};
use crate::comodule::{GaloisData, HAction};
use crate::graded::{hom_graded, GradedAlgebra, GradedLinearMap, GradedModule};
use crate::linalg::{self, Field, Matrix, Subspace, Vector};
use crate::par;

/// One certified bidegree of `Ext_B(M, M)` with everything attached to it.
#[derive(Clone, Debug)]
pub struct GaloisCell {
    pub n: usize,
    pub d: i64,
    /// matrices of the `H` basis acting on the `Ext_B` cell
    pub action: Vec<Matrix>,
    /// `Ext_A` cell to `Ext_B` cell
    pub restriction: Matrix,
    /// cochain level: `Hom_A(P_n, M)` equals the invariants of `Hom_B(P_n, M)`
    pub cochain_invariants_match: bool,
    /// the action commutes with the differential of `Hom_B(P, M)`
    pub differential_compatible: bool,
    /// cohomology of `Hom_B(P, M)` maps isomorphically onto the `Ext_B` cell
    pub transport_bijective: bool,
}

impl GaloisCell {
    pub fn invariants(&self, hopf: &crate::hopf::HopfAlgebra) -> Subspace {
        let f = hopf.field();
        let dim = self.restriction.rows();
        let mut stacked = Matrix::zeros(f, 0, dim);
        for (q, m) in self.action.iter().enumerate() {
            let shifted = m.sub(&Matrix::identity(f, dim).scaled(&hopf.counit()[q])).expect("square");
            stacked = stacked.vstack(&shifted);
        }
        linalg::kernel(&stacked).expect("field")
    }

    pub fn restriction_image(&self) -> Subspace {
        linalg::image(&self.restriction)
    }
}

#[derive(Clone, Debug)]
pub struct GaloisExt {
    pub gd: GaloisData,
    pub module: GradedModule,
    pub n_max: usize,
    pub ext_a: ExtAlgebra,
    pub ext_b: ExtAlgebra,
    pub comparison: Vec<GradedLinearMap>,
    pub cells: BTreeMap<(usize, i64), GaloisCell>,
}

impl GaloisExt {
    /// `module` is an `A`-module; Ext is computed for `n <= n_max` and internal
    /// degrees `0..=top` (all of them when the algebra is ungraded).
    pub fn compute(gd: &GaloisData, module: &GradedModule, n_max: usize) -> Result<GaloisExt> {
        let a = gd.algebra();
        let b = &gd.b;
        let top = a.top() as i64;
        let res_a = Resolution::new(a, module, n_max + 1)?;
        let mb = module.restrict(&b.algebra, &b.emb);
        let res_b = Resolution::new(&b.algebra, &mb, n_max + 1)?;
        let ext_a = ExtAlgebra::new(&res_a, n_max, 0, top)?;
        let ext_b = ExtAlgebra::new(&res_b, n_max, 0, top)?;
        let restricted = RestrictedComplex::new(&res_a, &b.algebra, &b.emb);
        let comparison = comparison_map(&res_b, &restricted, n_max + 1)?;
        let ds: Vec<i64> = (0..=top)
            .filter(|&d| (0..=n_max).any(|n| ext_b.ext.cell(n, d).is_some_and(|c| c.certified)))
            .collect();
        let per_d: Vec<Result<Vec<GaloisCell>>> = par::map_slice(&ds, |&d| {
            cells_for_degree(gd, module, &res_a, &ext_a, &ext_b, &comparison, n_max, d)
        });
        let mut cells = BTreeMap::new();
        for r in per_d {
            for c in r? {
                cells.insert((c.n, c.d), c);
            }
        }
        Ok(GaloisExt {
            gd: gd.clone(),
            module: module.clone(),
            n_max,
            ext_a,
            ext_b,
            comparison,
            cells,
        })
    }

    pub fn field(&self) -> Field {
        self.gd.field()
    }

    /// Image of an `Ext_A` class in `Ext_B`, as a cocycle on the `B`-generators.
    pub fn restrict_element(&self, x: &ExtElement) -> ExtElement {
        let ext = &self.ext_a.ext;
        let full = ext.extend(x);
        let comp = full.compose(&self.comparison[x.n]);
        let res_b = &self.ext_b.ext.res;
        let blocks = res_b.free[x.n].restrict_to_generators(&comp, res_b.ring.unit());
        ExtElement {
            n: x.n,
            d: x.d,
            cocycle: GradedLinearMap::new(-x.d, res_b.free[x.n].gens.dims().to_vec(), ext.target.dims().to_vec(), blocks),
        }
    }

    /// `Ext_B(M, M)` graded by ext-degree, with its `H`-action.
    pub fn ext_degree_algebra(&self) -> Result<(GradedAlgebra, HAction, ExtDegreeLayout)> {
        let field = self.field();
        let hopf = self.gd.hopf().clone();
        let (alg, layout) = self.ext_b.ext_degree_algebra()?;
        let mats = (0..=self.n_max)
            .map(|n| {
                (0..hopf.dim())
                    .map(|q| {
                        let dim = alg.dim(n);
                        let mut m = Matrix::zeros(field, dim, dim);
                        for (&(_, d), c) in self.cells.range((n, i64::MIN)..=(n, i64::MAX)) {
                            let off = layout.offsets[&(n, d)];
                            let a = &c.action[q];
                            for r in 0..a.rows() {
                                for s in 0..a.cols() {
                                    m.set(off + r, off + s, a.get(r, s).clone());
                                }
                            }
                        }
                        m
                    })
                    .collect()
            })
            .collect();
        Ok((alg, HAction { hopf, mats }, layout))
    }
}

#[allow(clippy::too_many_arguments)]
fn cells_for_degree(
    gd: &GaloisData,
    module: &GradedModule,
    res_a: &Resolution,
    ext_a: &ExtAlgebra,
    ext_b: &ExtAlgebra,
    comparison: &[GradedLinearMap],
    n_max: usize,
    d: i64,
) -> Result<Vec<GaloisCell>> {
    let field = gd.field();
    let b = &gd.b;
    let hc = HomComplex::new(res_a, module, Some((&b.algebra, &b.emb)), n_max, d)?;
    let actions: Vec<Vec<Matrix>> = (0..=n_max + 1)
        .map(|n| hc.galois_action(gd, res_a, n))
        .collect::<Option<_>>()
        .ok_or_else(|| HomologicalError::Window(format!("Hom_B cochains not stable under H in degree {d}")))?;
    let hopf = gd.hopf();
    let compatible = (0..hopf.dim()).all(|q| {
        let t: Vec<Matrix> = actions.iter().map(|row| row[q].clone()).collect();
        hc.complex.commutes(&t)
    });
    let res_b = &ext_b.ext.res;
    let mut out = Vec::new();
    for n in 0..=n_max {
        let Some(cell_b) = ext_b.ext.cell(n, d).filter(|c| c.certified) else {
            continue;
        };
        let coh: Cohomology = hc.complex.cohomology(n);
        // transport H(Hom_B(P, M)) -> Ext_B computed from the minimal B-resolution
        let to_b = |f: &GradedLinearMap| -> Option<Vector> {
            let comp = f.compose(&comparison[n]);
            let blocks = res_b.free[n].restrict_to_generators(&comp, res_b.ring.unit());
            let cocycle = GradedLinearMap::new(-d, res_b.free[n].gens.dims().to_vec(), module.dims().to_vec(), blocks);
            cell_b.coordinates(&cocycle)
        };
        let dim_b = cell_b.reps.len();
        let cols: Option<Vec<Vector>> = coh.reps.iter().map(|r| to_b(&hc.cochain(n, r))).collect();
        let cols = cols.ok_or(HomologicalError::Window(format!("transport failed at ({n},{d})")))?;
        let transport = Matrix::from_cols(field, dim_b, &cols)?;
        let bijective = coh.dim() == dim_b && transport.rank() == dim_b;
        let action: Vec<Matrix> = if bijective && dim_b > 0 {
            let inv = transport.inverse()?;
            actions[n]
                .iter()
                .map(|a| {
                    let induced = coh.induced(a, &coh).expect("action preserves cocycles");
                    transport.dot(&induced).dot(&inv)
                })
                .collect()
        } else {
            (0..hopf.dim()).map(|_| Matrix::zeros(field, dim_b, dim_b)).collect()
        };
        // cochain-level invariants against Hom_A
        let hom_a = hom_graded(res_a.p(n), module, gd.algebra(), -d);
        let dim_c = hc.spaces[n].dim();
        let a_in_b: Option<Vec<Vector>> = hom_a.basis.iter().map(|f| hc.coordinates(n, f)).collect();
        let cochain_match = match a_in_b {
            Some(vs) => {
                let sa = Subspace::span(field, dim_c, vs)?;
                let mut stacked = Matrix::zeros(field, 0, dim_c);
                for (q, m) in actions[n].iter().enumerate() {
                    stacked = stacked.vstack(&m.sub(&Matrix::identity(field, dim_c).scaled(&hopf.counit()[q]))?);
                }
                let inv = linalg::kernel(&stacked)?;
                inv == sa
            }
            None => false,
        };
        let cell_a = ext_a.ext.cell(n, d).filter(|c| c.certified);
        let restriction = match cell_a {
            Some(ca) => {
                let cols: Option<Vec<Vector>> = ca
                    .reps
                    .iter()
                    .map(|r| {
                        let full = ext_a.ext.extend(&ExtElement {
                            n,
                            d,
                            cocycle: r.clone(),
                        });
                        to_b(&full)
                    })
                    .collect();
                let cols = cols.ok_or(HomologicalError::Window(format!("restriction failed at ({n},{d})")))?;
                Matrix::from_cols(field, dim_b, &cols)?
            }
            None => Matrix::zeros(field, dim_b, 0),
        };
        out.push(GaloisCell {
            n,
            d,
            action,
            restriction,
            cochain_invariants_match: cochain_match,
            differential_compatible: compatible,
            transport_bijective: bijective,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const Q: Field = Field::Rationals;

    #[test]
    fn group_algebra_regular_module() {
        let fx = fixtures::group_algebra(2, Q).unwrap();
        let a = fx.module("A").unwrap();
        let ge = GaloisExt::compute(fx.galois(), a, 1).unwrap();
        let c = &ge.cells[&(0, 0)];
        assert_eq!(c.restriction.rows(), 4);
        assert!(c.transport_bijective && c.differential_compatible && c.cochain_invariants_match);
        let inv = c.invariants(fx.hopf());
        assert_eq!(inv.dim(), 2);
        assert_eq!(inv, c.restriction_image());
        assert_eq!(ge.cells[&(1, 0)].restriction.rows(), 0);
    }

    #[test]
    fn quiver_invariants_are_ext_over_a() {
        let fx = fixtures::paper_quiver(Q, 3).unwrap();
        let ge = GaloisExt::compute(fx.galois(), fx.module("A0").unwrap(), 2).unwrap();
        for n in 0..=2usize {
            let c = &ge.cells[&(n, n as i64)];
            assert!(c.transport_bijective && c.differential_compatible && c.cochain_invariants_match);
            assert_eq!(c.invariants(fx.hopf()), c.restriction_image());
            assert_eq!(c.restriction.rank(), c.restriction.cols());
        }
        let (e, action, _) = ge.ext_degree_algebra().unwrap();
        assert_eq!(e.dims(), &[4, 8, 4]);
        action.check(&e).unwrap();
    }
}
