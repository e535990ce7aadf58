//! One-centre linearization of scalar orbital products onto an ETO set.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quadrature::{build_angular_rule, build_radial_rule, radial_integral, spherical_grid};
use crate::scalar_basis::{
    orbital_radial, project_with, ExpansionTable, GridProjector, OneCenterRule, ProjectionOptions, QuadratureInfo,
    RadialFamily, ScalarOrbital, ScalarQN, Space,
};
use crate::specfun::{gaunt, spherical_harmonic, AngularPair};

use super::expansion::ProductTerm;

fn term_orbitals(term: &ProductTerm) -> Result<(ScalarOrbital, ScalarOrbital)> {
    let left = ScalarOrbital::new(term.left_family, term.left_qn, term.left_barred, Space::Position)?;
    let right =
        ScalarOrbital::new(term.right_family, term.right_qn, term.right_barred, Space::Position)?;
    Ok((left, right))
}

/// weight · conj(k_left(x)) · k_right(x) evaluated directly.
pub fn product_value(term: &ProductTerm, x: [f64; 3]) -> Result<Complex64> {
    let (left, right) = term_orbitals(term)?;
    let (r, dir) = AngularPair::from_cartesian(x);
    let yl = spherical_harmonic(left.qn().l(), left.qn().m(), dir)?;
    let yr = spherical_harmonic(right.qn().l(), right.qn().m(), dir)?;
    Ok(term.weight * (orbital_radial(&left, r)? * yl).conj() * (orbital_radial(&right, r)? * yr))
}

/// Exponent of r in barred-R_NL · R · R′ · r² near the origin; must be ≥ 0
/// for the Gauss–Laguerre rule to be exact.
fn origin_power(target: RadialFamily, big_l: u32, left: &ScalarOrbital, right: &ScalarOrbital) -> i64 {
    let lowest = |o: &ScalarOrbital| -> i64 {
        let l = i64::from(o.qn().l());
        match (o.family().is_eto(), o.barred()) {
            (true, false) => l,
            (true, true) => l - i64::from(o.family().alpha()),
            (false, _) => i64::from(o.qn().n()) - 1,
        }
    };
    i64::from(big_l) - i64::from(target.alpha()) + lowest(left) + lowest(right) + 2
}

/// c_NLM = weight · (−1)^m Gaunt(l, −m; l′, m′ | L, M) · ∫ barred-R_NL R R′ r² dr,
/// with M = m′ − m; the radial integral uses Gauss–Laguerre at scale ζ″ + ζ + ζ′.
/// The residual ‖product − Σ c k‖_w is evaluated on the default one-centre rule.
pub fn linearize_product(term: &ProductTerm, target: RadialFamily, n_max: u32, l_max: u32) -> Result<ExpansionTable> {
    linearize_product_with(term, target, n_max, l_max, OneCenterRule::default())
}

pub fn linearize_product_with(
    term: &ProductTerm,
    target: RadialFamily,
    n_max: u32,
    l_max: u32,
    rule: OneCenterRule,
) -> Result<ExpansionTable> {
    let projector = GridProjector::new(target, n_max, l_max)?;
    let (left, right) = term_orbitals(term)?;
    let scale = target.zeta() + left.family().zeta() + right.family().zeta();
    let radial_rule = build_radial_rule(rule.radial_nodes, scale)?;
    let (l, m) = (left.qn().l(), left.qn().m());
    let (lp, mp) = (right.qn().l(), right.qn().m());
    let big_m = mp - m;
    let phase = if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };

    let coefficients: Result<Vec<(ScalarQN, Complex64)>> = projector
        .qns()
        .par_iter()
        .map(|&q| {
            let angular = if q.m() == big_m { phase * gaunt(l, -m, lp, mp, q.l(), big_m) } else { 0.0 };
            if angular == 0.0 {
                return Ok((q, Complex64::new(0.0, 0.0)));
            }
            if origin_power(target, q.l(), &left, &right) < 0 {
                return Err(Error::Domain(format!("radial integrand for {q} is singular at the origin")));
            }
            let dual = ScalarOrbital::new(target, ScalarQN::new(q.n(), q.l(), 0)?, true, left.space())?;
            let radial = radial_integral(
                |r| {
                    let value = || -> Result<f64> {
                        Ok(orbital_radial(&dual, r)? * orbital_radial(&left, r)? * orbital_radial(&right, r)?)
                    };
                    value().unwrap_or(f64::NAN) * r * r
                },
                &radial_rule,
            )?;
            Ok((q, term.weight * angular * radial))
        })
        .collect();

    let coefficients = coefficients?;
    let info = QuadratureInfo { node_count: rule.radial_nodes, scale, degree: rule.degree, refinement_levels: 0 };
    let mut table = ExpansionTable::new(target, n_max, projector.qns().iter().map(|q| q.l()).max().unwrap_or(0), &coefficients, info);
    let grid = spherical_grid(&build_radial_rule(rule.radial_nodes, scale)?, &build_angular_rule(rule.degree));
    let f = |x: [f64; 3]| product_value(term, x).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
    let values: Vec<Complex64> = coefficients.iter().map(|(_, c)| *c).collect();
    table.residual_l2w = projector.residuals(&grid, &f, &values, &[n_max])[0];
    Ok(table)
}

/// The same coefficients by brute-force projection of the product on a 3D grid.
pub fn linearize_product_by_projection(
    term: &ProductTerm,
    target: RadialFamily,
    n_max: u32,
    l_max: u32,
    rule: OneCenterRule,
) -> Result<ExpansionTable> {
    let (left, right) = term_orbitals(term)?;
    let opts = ProjectionOptions {
        rule,
        decay: Some(left.family().zeta() + right.family().zeta()),
        check_convergence: false,
    };
    let f = |x: [f64; 3]| product_value(term, x).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
    project_with(&f, target, n_max, l_max, &opts)
}
