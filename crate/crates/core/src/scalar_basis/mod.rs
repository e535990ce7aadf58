//! Scalar building blocks: the ψ^α exponential-type families with their barred
//! duals, Slater-type orbitals, position/momentum evaluation, Gram matrices
//! and projection onto the complete set.

mod eval;
mod gram;
mod projection;
mod radial;
mod types;

pub use eval::{chi_sto, eval_scalar, hankel_rule_for, momentum_radial_with};
pub use gram::{
    basis_qns, biorthogonality_matrix, biorthogonality_matrix_with, gram_matrix, gram_matrix_with,
    identity_deviation, OneCenterRule, WeightMode,
};
pub use projection::{
    project, project_levels, project_with, ExpansionTable, GridProjector, ProjectionOptions, QuadratureInfo,
    TableEntry, CONVERGENCE_TOLERANCE,
};
pub use radial::{orbital_radial, radial_eto, radial_sto, RadialBasis};
pub use types::{EvaluationPoint, FamilyKind, RadialFamily, ScalarOrbital, ScalarQN, Space, ALLOWED_ALPHAS};
