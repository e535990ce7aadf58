//! Scalar special functions: factorials, Laguerre polynomials, spherical harmonics,
//! spherical Bessel functions and angular-momentum coupling coefficients.

mod bessel;
mod coupling;
pub mod exact;
mod factorial;
mod half_integer;
mod harmonics;
mod laguerre;

pub use bessel::spherical_bessel;
pub use coupling::{clebsch_gordan, clebsch_gordan_int, gaunt};
pub use exact::{clebsch_gordan_exact, ExactCoefficient};
pub use factorial::{factorial, log_factorial, log_gamma_int};
pub use half_integer::HalfInteger;
pub use harmonics::{lm_index, spherical_harmonic, spherical_harmonics_upto, AngularPair};
pub use laguerre::{laguerre, laguerre_sequence};
