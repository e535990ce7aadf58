//! Benchmark fixtures shared by the criterion benches in `benches/`.

use spinorbasis::scalar_basis::RadialFamily;
use spinorbasis::spinor_basis::{assemble_spinor, Sign, SpinorOrbital, SpinorQN};

/// The s = 1/2, n = 1, l = 0, t = +1, m_j = 1/2 spinor with α = 0, ζ = 1.
pub fn ground_spinor() -> SpinorOrbital {
    let qn = SpinorQN::from_twice(1, 1, 0, Sign::Plus, 1).expect("valid quantum numbers");
    assemble_spinor(qn, RadialFamily::eto(0, 1.0).expect("valid family"), false).expect("spinor assembles")
}

/// An s = 3/2 spinor with several non-zero components.
pub fn excited_spinor() -> SpinorOrbital {
    let qn = SpinorQN::from_twice(3, 3, 2, Sign::Minus, 1).expect("valid quantum numbers");
    assemble_spinor(qn, RadialFamily::eto(1, 1.3).expect("valid family"), false).expect("spinor assembles")
}
