//! Graded free modules, minimal resolutions, Betti tables, submodules and
//! Yoneda products.

mod betti;
mod checks;
mod free;
mod resolution;
mod submodule;
mod yoneda;

pub use betti::{BettiRecord, BettiTable, ExtParts, Window};
pub use checks::{certify, euler_check, Certificate, EulerCheck, ExactnessFailure};
pub use free::{slice_images, Element, FreeModule, Slice};
pub use resolution::{
    minimal_resolution, resolve, resolve_with, Homogeneous, Resolution, ResolutionLimits, Subquotient,
};
pub use submodule::{kernel_of, present_degreewise, syzygy_module, DegreewiseModule, QuotientModule};
pub use yoneda::{
    ext_generated_in_degree0, generators_of_degree, product_rank, yoneda_product, ChainMap, ExtElement, GenerationReport,
    GenerationRow, Lifter,
};
