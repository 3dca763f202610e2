//! Canonical examples used by tests, benches and the command line.

use thiserror::Error;

use crate::comodule::{
    galois_map, smash_coaction, smash_product, ComoduleAlgebra, ComoduleError, GaloisData, HAction,
};
use crate::graded::{
    AlgebraError, AlgebraPresentation, Arrow, GradedAlgebra, GradedModule, PathRef, Relation, RelationTerm,
};
use crate::format::AlgFile;
use crate::hopf::{GeneratorImages, GradedHopf, HopfAlgebra, HopfError, HopfReport};
use crate::linalg::{Field, Matrix, Scalar};

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("{0}")]
    Format(String),
    #[error(transparent)]
    Hopf(#[from] HopfError),
    #[error(transparent)]
    Comodule(#[from] ComoduleError),
    #[error("Hopf axioms fail: {0}")]
    Axioms(String),
}

pub type Result<T> = std::result::Result<T, FixtureError>;

pub struct Fixture {
    pub id: String,
    pub ca: ComoduleAlgebra,
    pub galois: Option<GaloisData>,
    pub modules: Vec<(String, GradedModule)>,
    pub notes: Vec<String>,
    /// the full graded Hopf structure, when the algebra itself is Hopf
    pub graded_hopf: Option<GradedHopf>,
}

impl Fixture {
    pub fn module(&self, name: &str) -> Option<&GradedModule> {
        self.modules.iter().find(|(n, _)| n == name).map(|(_, m)| m)
    }

    pub fn galois(&self) -> &GaloisData {
        self.galois.as_ref().expect("fixture is Galois")
    }

    pub fn algebra(&self) -> &GradedAlgebra {
        self.ca.algebra()
    }

    pub fn hopf(&self) -> &HopfAlgebra {
        self.ca.hopf()
    }
}

fn char_two_note(field: Field, notes: &mut Vec<String>) {
    if field.characteristic() == 2 {
        notes.push("characteristic 2: kZ_2 is not semisimple, semisimplicity hypotheses fail".into());
    }
}

/// The point algebra `k` with the given truncation.
pub fn ground_field(field: Field, top: usize) -> GradedAlgebra {
    AlgebraPresentation {
        vertices: vec!["v".into()],
        ..Default::default()
    }
    .realize(field, top)
    .expect("point algebra")
}

/// `A = H = k[Z_n]`, coacting on itself by `Δ`; `B = k`.
pub fn group_algebra(n: usize, field: Field) -> Result<Fixture> {
    let h = HopfAlgebra::cyclic_group(n, field);
    let ca = ComoduleAlgebra::regular(&h);
    let b = ca.coinvariants()?;
    let gd = galois_map(&ca, &b)?;
    let mut notes = Vec::new();
    if n % field.characteristic().max(1) as usize == 0 && field.characteristic() != 0 {
        notes.push("characteristic divides the group order: H is not semisimple".into());
    }
    let a = ca.algebra();
    let eps = h.counit().clone();
    let trivial = GradedModule::from_fn(field, vec![1], a, |_, _, b| {
        Matrix::new(field, 1, 1, vec![eps[b].clone()]).expect("1x1")
    })?;
    let mut modules = vec![("A".into(), a.regular_module()), ("k".into(), trivial.clone())];
    if n == 2 {
        let sign = GradedModule::from_fn(field, vec![1], a, |_, _, b| {
            Matrix::new(field, 1, 1, vec![if b == 0 { field.one() } else { field.int(-1) }]).expect("1x1")
        })?;
        modules.push(("k+sgn".into(), trivial.direct_sum(&sign)));
    }
    Ok(Fixture {
        id: format!("group-algebra-{n}"),
        modules,
        ca,
        galois: Some(gd),
        notes,
        graded_hopf: None,
    })
}

/// `kZ_2` acting on a graded algebra by `(-1)^degree`.
pub fn parity_action(r: &GradedAlgebra) -> HAction {
    let field = r.field();
    let h = HopfAlgebra::cyclic_group(2, field);
    let mats = (0..=r.top())
        .map(|d| {
            let id = Matrix::identity(field, r.dim(d));
            let sign = if d % 2 == 0 { field.one() } else { field.int(-1) };
            vec![id.clone(), id.scaled(&sign)]
        })
        .collect();
    HAction { hopf: h, mats }
}

/// `A = B_0 # H` with coaction `id ⊗ Δ`; the coinvariants recover `B_0`.
pub fn smash(b0: &GradedAlgebra, action: &HAction, id: &str) -> Result<Fixture> {
    let a = smash_product(b0, action)?;
    let ca = ComoduleAlgebra::new(a, action.hopf.clone(), smash_coaction(b0, &action.hopf))?;
    let b = ca.coinvariants()?;
    let gd = galois_map(&ca, &b)?;
    let mut notes = Vec::new();
    char_two_note(b0.field(), &mut notes);
    Ok(Fixture {
        id: id.to_string(),
        modules: vec![
            ("A".into(), ca.algebra().regular_module()),
            ("A0".into(), ca.algebra().degree_zero_module()),
        ],
        ca,
        galois: Some(gd),
        notes,
        graded_hopf: None,
    })
}

/// `k[x]/(x^3) # kZ_2` with `x -> -x`.
pub fn truncated_cubic_smash(field: Field, top: usize) -> Result<Fixture> {
    let b0 = AlgebraPresentation::truncated_polynomial(3).realize(field, top)?;
    smash(&b0, &parity_action(&b0), "cubic-smash")
}

/// `k[x, y] # kZ_2` with the sign action, truncated.
pub fn polynomial_smash(field: Field, top: usize) -> Result<Fixture> {
    let b0 = AlgebraPresentation::polynomial(&["x", "y"]).realize(field, top)?;
    smash(&b0, &parity_action(&b0), "polynomial-smash")
}

/// Two vertices, arrows `x0, y0: 0 -> 1` and `x1, y1: 1 -> 0`,
/// relations `x0 y1 - y0 x1` and `x1 y0 - y1 x0`.
pub fn quiver_presentation() -> AlgebraPresentation {
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

/// Coproduct, counit and antipode of the quiver Hopf algebra on its generators.
pub fn quiver_hopf_images(field: Field) -> GeneratorImages {
    let e0 = PathRef::Vertex(0);
    let e1 = PathRef::Vertex(1);
    let arrow = |i: usize| PathRef::Arrows(vec![i]);
    let one = field.one();
    let t = |l: &PathRef, r: &PathRef| (one.clone(), l.clone(), r.clone());
    let mut comult = vec![
        (e0.clone(), vec![t(&e0, &e0), t(&e1, &e1)]),
        (e1.clone(), vec![t(&e1, &e0), t(&e0, &e1)]),
    ];
    // arrows come in pairs (u0, u1) = (x0, x1) and (y0, y1)
    for (u0, u1) in [(0, 2), (1, 3)] {
        let (a0, a1) = (arrow(u0), arrow(u1));
        comult.push((a0.clone(), vec![t(&e0, &a0), t(&e1, &a1), t(&a0, &e0), t(&a1, &e1)]));
        comult.push((a1.clone(), vec![t(&e1, &a0), t(&a1, &e0), t(&e0, &a1), t(&a0, &e1)]));
    }
    let mut counit = vec![(e0.clone(), field.one()), (e1.clone(), field.zero())];
    counit.extend((0..4).map(|i| (arrow(i), field.zero())));
    let minus = field.int(-1);
    let antipode = vec![
        (e0.clone(), vec![(one.clone(), e0.clone())]),
        (e1.clone(), vec![(one.clone(), e1.clone())]),
        (arrow(0), vec![(minus.clone(), arrow(2))]),
        (arrow(1), vec![(minus.clone(), arrow(3))]),
        (arrow(2), vec![(minus.clone(), arrow(0))]),
        (arrow(3), vec![(minus, arrow(1))]),
    ];
    GeneratorImages {
        comult,
        counit,
        antipode,
    }
}

/// The quiver Hopf algebra with its generator tables, before any verification.
pub fn quiver_graded_hopf(field: Field, top: usize, images: &GeneratorImages) -> Result<GradedHopf> {
    let rp = quiver_presentation().realize_full(field, top)?;
    Ok(GradedHopf::from_generators(&rp, images)?)
}

/// The quiver example: `A = kQ/I` with its Hopf structure, `H = A_0`,
/// coaction `(id ⊗ p) Δ` with `p` the projection onto degree 0.
pub fn paper_quiver(field: Field, top: usize) -> Result<Fixture> {
    let gh = quiver_graded_hopf(field, top, &quiver_hopf_images(field))?;
    let mut notes = vec!["arrow directions x0, y0: 0 -> 1 and x1, y1: 1 -> 0".to_string()];
    char_two_note(field, &mut notes);
    degree_zero_fixture("quiver", gh, notes)
}

/// `A` coacted on by `H = A_0` through `(id ⊗ p) Δ`, after checking the axioms.
fn degree_zero_fixture(id: &str, gh: GradedHopf, notes: Vec<String>) -> Result<Fixture> {
    let report: HopfReport = gh.verify_axioms();
    if !report.passed() {
        let msg = report
            .failures()
            .map(|c| format!("{} ({})", c.axiom, c.witness.clone().unwrap_or_default()))
            .collect::<Vec<_>>()
            .join(", ");
        return Err(FixtureError::Axioms(msg));
    }
    let h = gh.degree_zero()?;
    let top = gh.algebra().top();
    let coaction = (0..=top).map(|d| gh.coaction_to_degree_zero(d)).collect();
    let ca = ComoduleAlgebra::new(gh.algebra().clone(), h, coaction)?;
    let b = ca.coinvariants()?;
    let gd = galois_map(&ca, &b)?;
    Ok(Fixture {
        id: id.into(),
        modules: vec![
            ("A".into(), ca.algebra().regular_module()),
            ("A0".into(), ca.algebra().degree_zero_module()),
        ],
        ca,
        galois: Some(gd),
        notes,
        graded_hopf: Some(gh),
    })
}

/// A fixture from a parsed `.alg` file carrying Hopf sections and a `degree-zero` coaction.
pub fn from_alg(id: &str, file: &AlgFile, field: Field, top: usize) -> Result<Fixture> {
    let hopf = file
        .hopf
        .as_ref()
        .ok_or_else(|| FixtureError::Format("missing [coproduct]/[counit]/[antipode] sections".into()))?;
    if file.coaction.is_none() {
        return Err(FixtureError::Format("missing [coaction] section".into()));
    }
    let images = hopf.images(field).map_err(FixtureError::Format)?;
    let rp = file.presentation.realize_full(field, top)?;
    let gh = GradedHopf::from_generators(&rp, &images)?;
    let mut notes = Vec::new();
    char_two_note(field, &mut notes);
    degree_zero_fixture(id, gh, notes)
}

/// `e_0 - e_1` in degree-0 coordinates of the quiver algebra.
pub fn quiver_group_like(field: Field) -> Vec<Scalar> {
    vec![field.one(), field.int(-1)]
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rationals;

    #[test]
    fn quiver_fixture_structure() {
        let fx = paper_quiver(Q, 3).unwrap();
        assert_eq!(fx.algebra().dims(), &[2, 4, 6, 8]);
        let gh = fx.graded_hopf.as_ref().unwrap();
        let r = gh.verify_axioms();
        assert!(r.passed(), "{r:?}");
        assert!(r.cocommutative);
        assert_eq!(gh.counit(), &vec![Q.one(), Q.zero()]);
        let b = &fx.galois().b.algebra;
        assert_eq!(b.dims(), &[1, 2, 3, 4]);
        assert!(b.is_commutative());
        assert!(fx.hopf().is_semisimple().unwrap());
        assert!(fx.hopf().is_cosemisimple().unwrap());
    }

    #[test]
    fn group_like_element() {
        let fx = paper_quiver(Q, 1).unwrap();
        let h = fx.hopf();
        let g = quiver_group_like(Q);
        assert_eq!(h.comul(&g), crate::linalg::kron_vec(&g, &g));
        assert_eq!(h.mul(&g, &g), h.unit().clone());
    }

    #[test]
    fn flipped_antipode_witness() {
        let mut images = quiver_hopf_images(Q);
        images.antipode[2].1[0].0 = Q.one();
        let gh = quiver_graded_hopf(Q, 2, &images).unwrap();
        let r = gh.verify_axioms();
        let c = r.check("antipode").unwrap();
        assert!(!c.passed);
        assert_eq!(c.witness.as_deref(), Some("x0"));
        assert!(paper_quiver(Q, 2).is_ok());
    }

    #[test]
    fn smash_fixtures() {
        let fx = truncated_cubic_smash(Q, 4).unwrap();
        assert_eq!(fx.algebra().dims(), &[2, 2, 2, 0, 0]);
        assert_eq!(fx.galois().b.algebra.dims(), &[1, 1, 1, 0, 0]);
        assert!(fx.galois().verify_translation_identities().passed());
        let fx = polynomial_smash(Q, 3).unwrap();
        assert_eq!(fx.galois().b.algebra.dims(), &[1, 2, 3, 4]);
    }

    #[test]
    fn group_fixtures() {
        let fx = group_algebra(2, Q).unwrap();
        assert_eq!(fx.algebra().dims(), &[2]);
        assert_eq!(fx.galois().b.algebra.dims(), &[1]);
        assert!(group_algebra(1, Q).unwrap().galois.is_some());
        let f2 = Field::prime(2).unwrap();
        let fx = group_algebra(2, f2).unwrap();
        assert!(!fx.hopf().is_semisimple().unwrap());
        assert_eq!(fx.notes.len(), 1);
    }
}
