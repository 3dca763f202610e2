//! Minimal resolutions, bigraded Ext, Hom complexes and Koszulity tests.

use thiserror::Error;

use crate::comodule::ComoduleError;
use crate::graded::AlgebraError;
use crate::linalg::LinalgError;

pub mod complex;
pub mod ext;
pub mod galois_ext;
pub mod koszul;
pub mod resolution;

pub use koszul::{add_membership, generated_in_ext_degrees, is_n_koszul, AddMembership, KoszulCertificate, Verdict};
pub use galois_ext::{GaloisCell, GaloisExt};
pub use ext::{Ext, ExtAlgebra, ExtCell, ExtDegreeLayout, ExtElement, ExtTable};
pub use resolution::{degree_zero_semisimplicity, FreeModule, Resolution, Semisimplicity};

#[derive(Debug, Error)]
pub enum HomologicalError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Comodule(#[from] ComoduleError),
    #[error("degree-zero part is not certified semisimple ({0:?})")]
    DegreeZeroNotSemisimple(Semisimplicity),
    #[error("outside the computed window: {0}")]
    Window(String),
    #[error("no equivariant section of the generator space in degree {0}")]
    NoEquivariantSection(usize),
    #[error("chain map lift failed at homological degree {degree}, internal degree {internal}")]
    LiftFailed { degree: usize, internal: usize },
}

pub type Result<T> = std::result::Result<T, HomologicalError>;
