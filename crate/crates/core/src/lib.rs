pub mod constructions;
pub mod decomposition;
pub mod error;
pub mod field;
pub mod homology;
pub mod koszulity;
pub mod linalg;
mod par;
pub mod presentation;
pub mod rewrite;

pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};
pub use presentation::{
    parse_algebra, parse_module, AlgebraPresentation, Generator, ModuleGenerator, ModulePresentation, Polynomial,
    Word,
};
