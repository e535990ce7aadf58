//! Deterministic quadrature rules: scaled Gauss–Laguerre radial rules, product
//! angular rules, a composite Hankel-transform rule and a two-centre integrator.

mod gauss;
mod grid;
mod hankel;
mod rules;
mod sum;
mod two_center;

pub use gauss::{gauss_laguerre, gauss_legendre, ReferenceRule};
pub use grid::{integrate, integrate_many, spherical_grid, GridPoint, REDUCTION_CHUNK};
pub use hankel::HankelRule;
pub use rules::{build_angular_rule, build_radial_rule, radial_integral, AngularRule, RadialRule};
pub use sum::{CompensatedSum, ComplexSum};
pub use two_center::{
    two_center_grid, two_center_integral, RefinementPolicy, TwoCenterRule, TwoCenterValue, COINCIDENT,
    DEFAULT_TWO_CENTER_DEGREE, DEFAULT_TWO_CENTER_NODES,
};
