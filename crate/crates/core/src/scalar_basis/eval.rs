use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::HankelRule;
use crate::specfun::spherical_harmonic;

use super::radial::{orbital_radial, radial_degree};
use super::types::{EvaluationPoint, RadialFamily, ScalarOrbital, ScalarQN, Space};

/// (−i)^l.
pub(crate) fn minus_i_pow(l: u32) -> Complex64 {
    match l % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// Hankel rule adequate for the orbital's radial factor at momentum `k`.
pub fn hankel_rule_for(orb: &ScalarOrbital, k: f64) -> HankelRule {
    HankelRule::new(k, orb.family().zeta(), f64::from(radial_degree(orb).max(2)))
}

/// Momentum-space radial factor (−i)^l √(2/π) ∫ R(r) j_l(kr) r² dr, using `rule`.
pub fn momentum_radial_with(orb: &ScalarOrbital, rule: &HankelRule) -> Complex64 {
    let pos = orb.in_space(Space::Position);
    let l = orb.qn().l();
    let integral = rule.transform(|r| orbital_radial(&pos, r).unwrap_or(0.0), l);
    minus_i_pow(l) * (2.0 / PI).sqrt() * integral
}

/// Orbital value at a point, in whichever representation the orbital lives in.
///
/// Momentum-space values use the convention (2π)^{−3/2} ∫ e^{−ik·r} f(r) d³r.
pub fn eval_scalar(orb: &ScalarOrbital, pt: &EvaluationPoint) -> Result<Complex64> {
    if orb.space() != pt.space {
        return Err(Error::Usage(format!(
            "orbital lives in {:?} space but the point is in {:?} space",
            orb.space(),
            pt.space
        )));
    }
    let qn = orb.qn();
    let angular = spherical_harmonic(qn.l(), qn.m(), pt.dir)?;
    match pt.space {
        Space::Position => Ok(angular * orbital_radial(orb, pt.radius)?),
        Space::Momentum => {
            let rule = hankel_rule_for(orb, pt.radius);
            Ok(angular * momentum_radial_with(orb, &rule))
        }
    }
}

/// Normalised Slater-type orbital χ_{nlm}(ζ) at a point (momentum space via
/// the same Hankel transform).
pub fn chi_sto(n: u32, l: u32, m: i32, zeta: f64, pt: &EvaluationPoint) -> Result<Complex64> {
    let qn = ScalarQN::new(n, l, m)?;
    let orb = ScalarOrbital::new(RadialFamily::sto(zeta)?, qn, false, pt.space)?;
    eval_scalar(&orb, pt)
}
