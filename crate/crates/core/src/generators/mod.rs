//! Finite windows of substitution subshifts and lattice models, and the
//! return sets of their cylinders.

mod configuration;
mod realize;
mod returns;
mod substitution;

pub use configuration::{Configuration, Symbol};
pub use substitution::{parse_word, BlockSubstitution, WordSubstitution};
pub use returns::{
    nested_return_sets, occurrence_patches, occurrence_window, repetitivity_evidence, return_set, PatchAgreement,
    RepetitivityEvidence, ReturnSet,
};
pub use realize::{product_action, realize, GeneratorSpec, RealizeOptions, Realization, Schedule};
