//! Two-centre integrals ∫ f(x) d³x where f carries exponential cusps at the
//! origin and at a displaced point y.
//!
//! The grid is spherical about the origin, with the polar axis along y and the
//! polar angle traded for s = |x − y|. Then d³x = (r s / |y|) dr ds dφ, and the
//! radial range is split at r = |y| so each piece is smooth: [0, |y|] uses
//! Gauss–Legendre, [|y|, ∞) a Gauss–Laguerre rule shifted to start at |y|.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;

use super::gauss::{gauss_laguerre, gauss_legendre};
use super::grid::{integrate, spherical_grid, GridPoint};
use super::rules::{build_angular_rule, build_radial_rule, AngularRule, RadialRule};

/// Node-doubling schedule: level ℓ uses 2^ℓ times the base node counts in
/// every dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefinementPolicy {
    /// Stop when |last − previous| ≤ threshold · |last|.
    pub threshold: f64,
    pub max_level: u32,
    /// Absolute change accepted as converged for values at the roundoff floor.
    pub absolute_floor: f64,
}

impl Default for RefinementPolicy {
    fn default() -> Self {
        Self { threshold: 1e-9, max_level: 4, absolute_floor: 1e-14 }
    }
}

impl RefinementPolicy {
    pub fn converged(&self, last: f64, change: f64) -> bool {
        change <= self.threshold * last.abs() || change <= self.absolute_floor
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoCenterRule {
    pub radial: RadialRule,
    pub angular: AngularRule,
    pub refinement_policy: RefinementPolicy,
}

pub const DEFAULT_TWO_CENTER_NODES: usize = 48;
pub const DEFAULT_TWO_CENTER_DEGREE: usize = 32;

impl TwoCenterRule {
    pub fn new(node_count: usize, scale: f64, degree: usize) -> Result<Self> {
        Ok(Self {
            radial: build_radial_rule(node_count, scale)?,
            angular: build_angular_rule(degree),
            refinement_policy: RefinementPolicy::default(),
        })
    }

    /// Default-sized rule for an integrand whose decay rates sum to `scale`.
    pub fn with_scale(scale: f64) -> Result<Self> {
        Self::new(DEFAULT_TWO_CENTER_NODES, scale, DEFAULT_TWO_CENTER_DEGREE)
    }

    pub fn with_policy(mut self, policy: RefinementPolicy) -> Self {
        self.refinement_policy = policy;
        self
    }
}

/// Orthonormal frame (e1, e2, ŷ) with ŷ along the displacement.
fn frame(y: [f64; 3], dist: f64) -> [[f64; 3]; 3] {
    let z = [y[0] / dist, y[1] / dist, y[2] / dist];
    let a = if z[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let d = a[0] * z[0] + a[1] * z[1] + a[2] * z[2];
    let mut e1 = [a[0] - d * z[0], a[1] - d * z[1], a[2] - d * z[2]];
    let n1 = (e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]).sqrt();
    e1.iter_mut().for_each(|c| *c /= n1);
    let e2 = [z[1] * e1[2] - z[2] * e1[1], z[2] * e1[0] - z[0] * e1[2], z[0] * e1[1] - z[1] * e1[0]];
    [e1, e2, z]
}

/// Below this separation the two centres are treated as coincident.
pub const COINCIDENT: f64 = 1e-12;

/// Grid at refinement `level` for centres at the origin and at `displacement`.
pub fn two_center_grid(rule: &TwoCenterRule, displacement: [f64; 3], level: u32) -> Result<Vec<GridPoint>> {
    let factor = 1usize << level;
    let dist = displacement.iter().map(|c| c * c).sum::<f64>().sqrt();
    if dist < COINCIDENT {
        let radial = build_radial_rule(rule.radial.node_count * factor, rule.radial.scale)?;
        let angular = build_angular_rule((rule.angular.degree + 1) * factor - 1);
        return Ok(spherical_grid(&radial, &angular));
    }
    let n_outer = rule.radial.node_count * factor;
    let n_inner = (rule.radial.node_count / 2).max(8) * factor;
    let n_s = (rule.angular.degree / 2 + 2) * factor;
    let n_phi = (rule.angular.degree + 1) * factor;

    let [e1, e2, ez] = frame(displacement, dist);
    let s_rule = gauss_legendre(n_s);
    let inner = gauss_legendre(n_inner);
    let outer = gauss_laguerre(n_outer)?;
    let scale = rule.radial.scale;
    let dphi = 2.0 * PI / n_phi as f64;
    let trig: Vec<(f64, f64)> = (0..n_phi).map(|k| (k as f64 * dphi).sin_cos()).collect();

    let mut radial_nodes: Vec<(f64, f64)> = Vec::with_capacity(n_inner + n_outer);
    for (&x, &w) in inner.nodes.iter().zip(&inner.weights) {
        radial_nodes.push((0.5 * dist * (x + 1.0), 0.5 * dist * w));
    }
    for (&x, &w) in outer.nodes.iter().zip(&outer.weights) {
        radial_nodes.push((dist + x / scale, w / scale));
    }

    let mut points = Vec::with_capacity(radial_nodes.len() * n_s * n_phi);
    for &(r, wr) in &radial_nodes {
        let (lo, hi) = ((dist - r).abs(), dist + r);
        let half = 0.5 * (hi - lo);
        for (&x, &wx) in s_rule.nodes.iter().zip(&s_rule.weights) {
            let s = lo + half * (x + 1.0);
            let ws = half * wx;
            let cos_t = ((r * r + dist * dist - s * s) / (2.0 * r * dist)).clamp(-1.0, 1.0);
            let sin_t = (1.0 - cos_t * cos_t).sqrt();
            let weight = wr * ws * dphi * r * s / dist;
            for &(sp, cp) in &trig {
                let (a, b, c) = (r * sin_t * cp, r * sin_t * sp, r * cos_t);
                points.push(GridPoint {
                    position: [
                        a * e1[0] + b * e2[0] + c * ez[0],
                        a * e1[1] + b * e2[1] + c * ez[1],
                        a * e1[2] + b * e2[2] + c * ez[2],
                    ],
                    weight,
                });
            }
        }
    }
    Ok(points)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoCenterValue {
    pub value: Complex64,
    /// |last − previous| plus a roundoff allowance 16 ε Σ|w f|.
    pub error_estimate: f64,
    pub level: u32,
    pub converged: bool,
}

/// Integrates `f` over all space, refining until the policy is satisfied.
/// Non-convergence is reported through `converged = false`, not as an error.
pub fn two_center_integral<F>(f: F, displacement: [f64; 3], rule: &TwoCenterRule) -> Result<TwoCenterValue>
where
    F: Fn([f64; 3]) -> Complex64 + Sync,
{
    let policy = rule.refinement_policy;
    let (mut previous, _) = integrate(&two_center_grid(rule, displacement, 0)?, &f);
    let mut level = 0;
    loop {
        level += 1;
        let (value, abs_sum) = integrate(&two_center_grid(rule, displacement, level)?, &f);
        let change = (value - previous).norm();
        let converged = policy.converged(value.norm(), change);
        if converged || level >= policy.max_level {
            return Ok(TwoCenterValue {
                value,
                error_estimate: change + 16.0 * f64::EPSILON * abs_sum,
                level,
                converged,
            });
        }
        previous = value;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn overlap_1s(zeta: f64, r: f64) -> f64 {
        let t = zeta * r;
        (-t).exp() * (1.0 + t + t * t / 3.0)
    }

    #[test]
    fn one_s_overlap_closed_form() {
        for &zeta in &[0.5, 1.0, 2.0] {
            for &dist in &[0.5, 1.0, 2.0, 4.0] {
                let rule = TwoCenterRule::with_scale(2.0 * zeta).unwrap();
                let norm = zeta.powi(3) / PI;
                let y = [0.0, 0.0, dist];
                let f = |p: [f64; 3]| {
                    let ra = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
                    let rb = (p[0] * p[0] + p[1] * p[1] + (p[2] - dist).powi(2)).sqrt();
                    Complex64::new(norm * (-zeta * (ra + rb)).exp(), 0.0)
                };
                let v = two_center_integral(f, y, &rule).unwrap();
                let exact = overlap_1s(zeta, dist);
                let err = (v.value.re - exact).abs();
                assert!(err < 1e-12, "zeta {zeta}, R {dist}: err {err}");
                assert!(err <= v.error_estimate, "estimate {} below error {err}", v.error_estimate);
            }
        }
    }

    #[test]
    fn off_axis_displacement_matches_axis() {
        let rule = TwoCenterRule::with_scale(2.0).unwrap();
        let y = [0.6, -0.8, 1.0];
        let dist = (2.0f64).sqrt();
        let f = |p: [f64; 3]| {
            let ra = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            let rb = ((p[0] - y[0]).powi(2) + (p[1] - y[1]).powi(2) + (p[2] - y[2]).powi(2)).sqrt();
            Complex64::new((-(ra + rb)).exp() / PI, 0.0)
        };
        let v = two_center_integral(f, y, &rule).unwrap();
        assert!((v.value.re - overlap_1s(1.0, dist)).abs() < 1e-12);
    }
}
