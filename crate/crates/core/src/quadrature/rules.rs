use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::specfun::AngularPair;

use super::gauss::{gauss_laguerre, gauss_legendre};
use super::sum::CompensatedSum;

/// Scaled Gauss–Laguerre rule for ∫₀^∞ f(r) dr with f decaying like e^{-scale·r}.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialRule {
    pub node_count: usize,
    pub scale: f64,
    /// (radius, weight) pairs; the exponential factor is already divided out.
    pub nodes: Vec<(f64, f64)>,
}

pub fn build_radial_rule(node_count: usize, scale: f64) -> Result<RadialRule> {
    if node_count == 0 {
        return Err(Error::Usage("radial rule needs at least one node".into()));
    }
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::Domain(format!("radial scale must be positive, got {scale}")));
    }
    let reference = gauss_laguerre(node_count)?;
    let nodes = reference
        .nodes
        .iter()
        .zip(&reference.weights)
        .map(|(&x, &w)| (x / scale, w / scale))
        .collect();
    Ok(RadialRule { node_count, scale, nodes })
}

/// Applies the radial rule to `f`. A non-finite sample is reported with its node.
pub fn radial_integral<F: Fn(f64) -> f64>(f: F, rule: &RadialRule) -> Result<f64> {
    let mut acc = CompensatedSum::new();
    for (index, &(r, w)) in rule.nodes.iter().enumerate() {
        let v = f(r);
        if !v.is_finite() {
            return Err(Error::NonFinite { index, radius: r });
        }
        acc.add(w * v);
    }
    Ok(acc.value())
}

/// Product rule on the unit sphere: Gauss–Legendre in cos θ times the
/// trapezoid rule in φ, exact for spherical polynomials up to `degree`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularRule {
    pub degree: usize,
    pub nodes: Vec<(AngularPair, f64)>,
}

impl AngularRule {
    pub fn theta_count(degree: usize) -> usize {
        (degree + 1).div_ceil(2) + 1
    }

    pub fn phi_count(degree: usize) -> usize {
        degree + 1
    }
}

pub fn build_angular_rule(degree: usize) -> AngularRule {
    let n_theta = AngularRule::theta_count(degree);
    let n_phi = AngularRule::phi_count(degree);
    let legendre = gauss_legendre(n_theta);
    let dphi = 2.0 * PI / n_phi as f64;
    let mut nodes = Vec::with_capacity(n_theta * n_phi);
    for (&x, &wx) in legendre.nodes.iter().zip(&legendre.weights) {
        let theta = x.clamp(-1.0, 1.0).acos();
        for k in 0..n_phi {
            let dir = AngularPair::new(theta, k as f64 * dphi).expect("angles are in range by construction");
            nodes.push((dir, wx * dphi));
        }
    }
    AngularRule { degree, nodes }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radial_rule_integrates_gamma_moments() {
        let rule = build_radial_rule(60, 1.7).unwrap();
        for p in 0..10 {
            let v = radial_integral(|r| r.powi(p) * (-1.7 * r).exp(), &rule).unwrap();
            let exact = crate::specfun::factorial(p as u32) / 1.7f64.powi(p + 1);
            assert!((v - exact).abs() <= 1e-13 * exact, "p = {p}");
        }
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        let rule = build_radial_rule(10, 1.0).unwrap();
        let err = radial_integral(|r| if r > 5.0 { f64::NAN } else { 1.0 }, &rule).unwrap_err();
        assert!(matches!(err, Error::NonFinite { .. }));
    }

    #[test]
    fn angular_rule_total_area() {
        let rule = build_angular_rule(12);
        let area: f64 = rule.nodes.iter().map(|(_, w)| w).sum();
        assert!((area - 4.0 * PI).abs() < 1e-13);
        assert_eq!(rule.nodes.len(), 8 * 13);
    }
}
