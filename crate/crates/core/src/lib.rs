//! Complete orthonormal exponential-type orbital bases, Slater-type orbitals,
//! their 2(2s+1)-component spinor extensions, and numerically verified
//! expansion and one-range addition theorems.

pub mod error;
pub mod quadrature;
pub mod scalar_basis;
pub mod spinor_basis;
pub mod specfun;
pub mod theorems;

pub use error::{Error, Result};
pub use specfun::{AngularPair, HalfInteger};
