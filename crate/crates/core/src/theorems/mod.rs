//! Expansion theorems for spinor products and one-range addition theorems
//! for displaced scalar and spinor orbitals.

mod expansion;
mod linearize;
mod sampling;
mod translation;

pub use expansion::{
    check_identity, evaluate_terms, expansion_terms, expansion_terms_for, expansion_terms_literal, same_kind,
    term_list_difference, verify_expansion_identity, IdentityCheck, LambdaRange, ProductTerm,
};
pub use linearize::{linearize_product, linearize_product_by_projection, linearize_product_with, product_value};
pub use sampling::{sample_points, OrbitalSampler};
pub use translation::{
    fourier_consistency, has_unconverged, spinor_fourier_consistency, translate_scalars, translate_spinor,
    translation_coefficients, translation_coefficients_with, ConvergenceReport, LevelReport, TranslatedSpinor,
    TranslationOptions, UNCONVERGED_FLAG,
};
