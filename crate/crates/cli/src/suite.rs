//! The invariant suite behind `verify`: one or more checks per acceptance
//! property, each reporting the measured worst case against its tolerance.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use spinorbasis::quadrature::{
    build_angular_rule, build_radial_rule, integrate, spherical_grid, two_center_integral, TwoCenterRule,
};
use spinorbasis::scalar_basis::{
    biorthogonality_matrix, eval_scalar, gram_matrix, identity_deviation, EvaluationPoint, OneCenterRule,
    RadialFamily, ScalarOrbital, ScalarQN, Space, WeightMode, ALLOWED_ALPHAS,
};
use spinorbasis::specfun::{AngularPair, HalfInteger};
use spinorbasis::spinor_basis::{assemble_spinor, eval_spinor, spinor_coefficient, Sign, SpinorOrbital, SpinorQN};
use spinorbasis::theorems::{
    check_identity, expansion_terms_for, expansion_terms_literal, has_unconverged, linearize_product_by_projection,
    linearize_product_with, sample_points, spinor_fourier_consistency, term_list_difference, translate_spinor,
    LambdaRange, OrbitalSampler, ProductTerm, TranslatedSpinor, TranslationOptions,
};
use spinorbasis::Result;

/// Outcome of one invariant check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    /// Acceptance property the check belongs to (1–8).
    pub criterion: u32,
    pub name: String,
    pub passed: bool,
    /// A quadrature refinement budget ran out somewhere in the check.
    pub not_converged: bool,
    /// Worst measured value (compared against `tolerance`).
    pub measured: f64,
    pub tolerance: f64,
    pub summary: String,
    pub detail: Value,
}

impl Check {
    fn new(criterion: u32, name: &str, measured: f64, tolerance: f64, summary: String, detail: Value) -> Self {
        Self {
            criterion,
            name: name.into(),
            passed: measured <= tolerance,
            not_converged: false,
            measured,
            tolerance,
            summary,
            detail,
        }
    }

    fn failed(criterion: u32, name: &str, error: &spinorbasis::Error) -> Self {
        Self {
            criterion,
            name: name.into(),
            passed: false,
            not_converged: false,
            measured: f64::NAN,
            tolerance: f64::NAN,
            summary: format!("error: {error}"),
            detail: Value::Null,
        }
    }
}

/// Suite scope: `quick` shrinks every range to smoke-test size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteOptions {
    pub seed: u64,
    pub quick: bool,
}

/// Sub-seeds so each sample set is independent of the others.
fn sub_seed(seed: u64, tag: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(tag)
}

fn eto(alpha: i32, zeta: f64) -> RadialFamily {
    RadialFamily::eto(alpha, zeta).expect("suite families are valid")
}

fn guard(criterion: u32, name: &str, run: impl FnOnce() -> Result<Check>) -> Check {
    run().unwrap_or_else(|e| Check::failed(criterion, name, &e))
}

fn gram_families(opts: SuiteOptions) -> (Vec<RadialFamily>, u32) {
    let (alphas, zetas, n_max): (&[i32], &[f64], u32) =
        if opts.quick { (&[1, 0], &[1.0], 3) } else { (&ALLOWED_ALPHAS, &[0.5, 1.0, 2.7], 6) };
    let fams = alphas.iter().flat_map(|&a| zetas.iter().map(move |&z| eto(a, z))).collect();
    (fams, n_max)
}

/// Property 1: weighted Gram matrices equal the identity.
pub fn orthonormality(opts: SuiteOptions) -> Check {
    guard(1, "gram_identity", || {
        let (fams, n_max) = gram_families(opts);
        let mut worst = 0.0f64;
        let mut rows = Vec::new();
        for fam in fams {
            let dev = identity_deviation(&gram_matrix(fam, WeightMode::FamilyWeight, n_max)?);
            worst = worst.max(dev);
            rows.push(json!({"alpha": fam.alpha(), "zeta": fam.zeta(), "deviation": dev}));
        }
        Ok(Check::new(
            1,
            "gram_identity",
            worst,
            1e-10,
            format!("max |G - I| = {worst:.3e} over {} families, n <= {n_max}", rows.len()),
            json!({"n_max": n_max, "families": rows}),
        ))
    })
}

/// Property 2: barred duals are biorthonormal to the basis.
pub fn biorthonormality(opts: SuiteOptions) -> Check {
    guard(2, "biorthonormality", || {
        let (fams, n_max) = gram_families(opts);
        let mut worst = 0.0f64;
        let mut rows = Vec::new();
        for fam in fams {
            let dev = identity_deviation(&biorthogonality_matrix(fam, n_max)?);
            worst = worst.max(dev);
            rows.push(json!({"alpha": fam.alpha(), "zeta": fam.zeta(), "deviation": dev}));
        }
        Ok(Check::new(
            2,
            "biorthonormality",
            worst,
            1e-10,
            format!("max |<barred k|k> - I| = {worst:.3e} over {} families, n <= {n_max}", rows.len()),
            json!({"n_max": n_max, "families": rows}),
        ))
    })
}

/// Property 3a: Σ_λ a² = 1 for every valid (s, l, j = l + t·s, m_j).
pub fn cg_sum_rule(opts: SuiteOptions) -> Check {
    let spins: &[i32] = if opts.quick { &[1, 3] } else { &[1, 3, 5] };
    let l_max = if opts.quick { 2 } else { 4 };
    let mut worst = 0.0f64;
    let mut groups = 0usize;
    for &s2 in spins {
        let s = HalfInteger::from_twice(s2);
        for l in 0..=l_max {
            for t in [1, -1] {
                let j2 = 2 * l as i32 + t * s2;
                if j2 < 1 {
                    continue;
                }
                let j = HalfInteger::from_twice(j2);
                for mj2 in (-j2..=j2).step_by(2) {
                    let sum: f64 = (0..=s2)
                        .map(|lam| spinor_coefficient(l, s, j, HalfInteger::from_twice(mj2), lam).powi(2))
                        .sum();
                    worst = worst.max((sum - 1.0).abs());
                    groups += 1;
                }
            }
        }
    }
    Check::new(
        3,
        "cg_sum_rule",
        worst,
        1e-12,
        format!("max |sum a^2 - 1| = {worst:.3e} over {groups} (s, l, j, m_j) groups"),
        json!({"spins_twice": spins, "l_max": l_max, "groups": groups}),
    )
}

/// ∫ K†K dV_w on a one-centre grid that is exact for these integrands.
fn spinor_norm(orb: &SpinorOrbital) -> Result<f64> {
    let fam = orb.family;
    let grid = spherical_grid(&build_radial_rule(80, 2.0 * fam.zeta())?, &build_angular_rule(16));
    let (value, _) = integrate(&grid, |x| {
        let pt = EvaluationPoint::from_cartesian(Space::Position, x);
        let w = if fam.is_eto() { fam.weight(pt.radius) } else { 1.0 };
        let v = eval_spinor(orb, &pt).unwrap_or_default();
        Complex64::new(w * v.iter().map(|c| c.norm_sqr()).sum::<f64>(), 0.0)
    });
    Ok(value.re)
}

/// Property 3b: assembled spinors have unit weighted norm.
pub fn spinor_norms(opts: SuiteOptions) -> Check {
    guard(3, "spinor_norms", || {
        let spins: &[i32] = if opts.quick { &[1] } else { &[1, 3] };
        let n_max = if opts.quick { 2 } else { 3 };
        let fams = [eto(0, 1.0), eto(1, 1.0), eto(-2, 0.7), RadialFamily::sto(1.3)?];
        let mut cases = Vec::new();
        for &s2 in spins {
            for q in SpinorQN::enumerate(HalfInteger::from_twice(s2), n_max) {
                for fam in fams {
                    cases.push(assemble_spinor(q, fam, false)?);
                }
            }
        }
        let norms: Vec<f64> = cases.par_iter().map(|o| spinor_norm(o)).collect::<Result<_>>()?;
        let worst = norms.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
        Ok(Check::new(
            3,
            "spinor_norms",
            worst,
            1e-10,
            format!("max |norm - 1| = {worst:.3e} over {} spinors (s <= {}/2, n <= {n_max})", cases.len(), spins[spins.len() - 1]),
            json!({"spinors": cases.len(), "n_max": n_max}),
        ))
    })
}

fn identity_sampler(spinors: &[SpinorOrbital], points: Vec<EvaluationPoint>) -> Result<OrbitalSampler> {
    let l_max = spinors.iter().map(|o| o.qn.l().max(o.qn.l_prime())).max().unwrap_or(0);
    let mut sampler = OrbitalSampler::new(points, l_max)?;
    for o in spinors {
        sampler.prepare(o)?;
    }
    Ok(sampler)
}

/// Property 4: K_a†K_b equals its term expansion at random points in both
/// spaces, and the written-out block formula reproduces the term lists.
pub fn expansion_identity(opts: SuiteOptions) -> Vec<Check> {
    let spins: &[i32] = if opts.quick { &[1] } else { &[1, 3] };
    let n_max = if opts.quick { 2 } else { 3 };
    let (n_pos, n_mom) = if opts.quick { (20, 10) } else { (100, 50) };
    let fams = [eto(0, 1.0), eto(1, 1.0), RadialFamily::sto(1.0).expect("valid exponent")];
    let run = || -> Result<Vec<Check>> {
        let positions = sample_points(sub_seed(opts.seed, 1), n_pos, Space::Position, 8.0);
        let momenta = sample_points(sub_seed(opts.seed, 2), n_mom, Space::Momentum, 6.0);
        let mut worst = 0.0f64;
        let mut worst_literal = 0.0f64;
        let mut pairs = 0usize;
        let mut all_integer_mismatches = 0usize;
        let mut nonnegative = true;
        for &s2 in spins {
            let qns = SpinorQN::enumerate(HalfInteger::from_twice(s2), n_max);
            for fam in fams {
                let spinors: Vec<SpinorOrbital> =
                    qns.iter().map(|&q| assemble_spinor(q, fam, false)).collect::<Result<_>>()?;
                let samplers =
                    [identity_sampler(&spinors, positions.clone())?, identity_sampler(&spinors, momenta.clone())?];
                let per_a: Vec<(f64, f64, usize, bool)> = spinors
                    .par_iter()
                    .map(|a| -> Result<(f64, f64, usize, bool)> {
                        let (mut w, mut wl, mut mism, mut nonneg) = (0.0f64, 0.0f64, 0usize, true);
                        for b in &spinors {
                            let terms = expansion_terms_for(a, b)?;
                            for sampler in &samplers {
                                let check = check_identity(a, b, &terms, sampler);
                                w = w.max(check.max_scaled);
                                nonneg &= check.self_product_nonnegative != Some(false);
                            }
                            if fam == fams[0] {
                                let even = expansion_terms_literal(a.qn, b.qn, fam, fam, LambdaRange::EvenBlocks)?;
                                wl = wl.max(term_list_difference(&terms, &even));
                                let every =
                                    expansion_terms_literal(a.qn, b.qn, fam, fam, LambdaRange::AllIntegers)?;
                                mism += usize::from(term_list_difference(&terms, &every) > 1e-12);
                            }
                        }
                        Ok((w, wl, mism, nonneg))
                    })
                    .collect::<Result<_>>()?;
                for (w, wl, m, nn) in per_a {
                    worst = worst.max(w);
                    worst_literal = worst_literal.max(wl);
                    all_integer_mismatches += m;
                    nonnegative &= nn;
                }
                pairs += spinors.len() * spinors.len();
            }
        }
        let mut identity = Check::new(
            4,
            "expansion_identity",
            worst,
            1e-12,
            format!(
                "max |K†K' - sum terms| / (1 + |K†K'|) = {worst:.3e} over {pairs} pairs at {n_pos} position + {n_mom} momentum points"
            ),
            json!({"pairs": pairs, "position_points": positions, "momentum_points": momenta}),
        );
        if !nonnegative {
            identity.passed = false;
            identity.summary.push_str("; a self-product was not real non-negative");
        }
        let literal = Check::new(
            4,
            "block_formula",
            worst_literal,
            1e-14,
            format!(
                "written-out formula over block labels matches term lists to {worst_literal:.1e}; summing over all integer labels disagrees on {all_integer_mismatches} pairs"
            ),
            json!({"all_integer_label_mismatches": all_integer_mismatches}),
        );
        Ok(vec![identity, literal])
    };
    run().unwrap_or_else(|e| vec![Check::failed(4, "expansion_identity", &e)])
}

/// The translation benchmark shared by properties 5 and 8.
pub struct TranslationRun {
    pub displacement: f64,
    pub translated: TranslatedSpinor,
    pub fourier: Vec<f64>,
}

/// s = 1/2, n = 1, l = 0, t = +1, m_j = 1/2 spinor (α = 0, ζ = 1).
pub fn benchmark_spinor() -> Result<SpinorOrbital> {
    assemble_spinor(SpinorQN::from_twice(1, 1, 0, Sign::Plus, 1)?, eto(0, 1.0), false)
}

pub fn translation_runs(opts: SuiteOptions) -> Result<Vec<TranslationRun>> {
    let distances: &[f64] = if opts.quick { &[1.0] } else { &[0.5, 1.0, 2.0] };
    let levels: &[u32] = if opts.quick { &[2, 8] } else { &[2, 4, 6, 8] };
    let spinor = benchmark_spinor()?;
    let samples = sample_points(sub_seed(opts.seed, 3), if opts.quick { 10 } else { 40 }, Space::Position, 6.0);
    let k_points = sample_points(sub_seed(opts.seed, 4), if opts.quick { 8 } else { 20 }, Space::Momentum, 4.0);
    let l_max = levels[levels.len() - 1] - 1;
    distances
        .iter()
        .map(|&d| {
            let translated = translate_spinor(
                &spinor,
                [0.0, 0.0, d],
                eto(0, 1.0),
                levels,
                l_max,
                &samples,
                &TranslationOptions::default(),
            )?;
            let fourier = spinor_fourier_consistency(&spinor, &translated, &k_points)?;
            Ok(TranslationRun { displacement: d, translated, fourier })
        })
        .collect()
}

/// Property 5: weighted-L² residual non-increasing over n_max with a total
/// drop of at least 3.
pub fn translation_monotonicity(runs: &[TranslationRun]) -> Check {
    let mut worst_ratio = 0.0f64;
    let mut monotone = true;
    let mut not_converged = false;
    let mut rows = Vec::new();
    for run in runs {
        let levels = &run.translated.report.levels;
        let residuals: Vec<f64> = levels.iter().map(|l| l.residual_l2w).collect();
        monotone &= residuals.windows(2).all(|w| w[1] <= w[0]);
        let ratio = residuals[residuals.len() - 1] / residuals[0];
        worst_ratio = worst_ratio.max(ratio);
        not_converged |= has_unconverged(&run.translated.tables.concat());
        rows.push(json!({"displacement": run.displacement, "report": run.translated.report}));
    }
    let mut check = Check::new(
        5,
        "translation_residual",
        worst_ratio,
        1.0 / 3.0,
        format!(
            "residual(last)/residual(first) <= {worst_ratio:.3} over {} displacements; non-increasing: {monotone}",
            runs.len()
        ),
        Value::Array(rows),
    );
    check.passed &= monotone && !runs.is_empty();
    check.not_converged = not_converged;
    check
}

/// Property 5 (second half): zero displacement reproduces the delta table.
pub fn translation_delta(opts: SuiteOptions) -> Check {
    guard(5, "translation_delta", || {
        let mut worst = 0.0f64;
        let mut cases = 0;
        let spinors = if opts.quick {
            vec![benchmark_spinor()?]
        } else {
            vec![
                benchmark_spinor()?,
                assemble_spinor(SpinorQN::from_twice(1, 2, 1, Sign::Minus, -1)?, eto(1, 1.3), false)?,
                assemble_spinor(SpinorQN::from_twice(3, 3, 2, Sign::Plus, 3)?, eto(-2, 0.8), false)?,
            ]
        };
        let mut not_converged = false;
        for spinor in spinors {
            let n = spinor.qn.n();
            let tr = translate_spinor(&spinor, [0.0; 3], spinor.family, &[n], n - 1, &[], &TranslationOptions::default())?;
            not_converged |= has_unconverged(&tr.tables.concat());
            for (i, c) in spinor.components.iter().enumerate() {
                for e in &tr.tables[i][0].entries {
                    let hit = !c.is_zero() && (e.n, e.l, e.m) == (n, c.orbital_l, c.m);
                    worst = worst.max((e.value() - if hit { 1.0 } else { 0.0 }).norm());
                }
            }
            cases += 1;
        }
        let mut check = Check::new(
            5,
            "translation_delta",
            worst,
            1e-10,
            format!("zero displacement: max |V - delta| = {worst:.3e} over {cases} spinors"),
            Value::Null,
        );
        check.not_converged = not_converged;
        Ok(check)
    })
}

fn benchmark_terms() -> Result<Vec<ProductTerm>> {
    let fam = eto(0, 1.0);
    let labels = [(1, 0, Sign::Plus, 1), (2, 0, Sign::Plus, 1), (2, 1, Sign::Plus, 3), (2, 1, Sign::Minus, -1)];
    let spinors: Vec<SpinorOrbital> = labels
        .iter()
        .map(|&(n, l, t, mj2)| assemble_spinor(SpinorQN::from_twice(1, n, l, t, mj2)?, fam, false))
        .collect::<Result<_>>()?;
    let mut terms: Vec<ProductTerm> = Vec::new();
    for a in &spinors {
        for b in &spinors {
            for t in expansion_terms_for(a, b)? {
                if !terms.iter().any(|u| u.left_qn == t.left_qn && u.right_qn == t.right_qn) {
                    terms.push(t);
                }
            }
        }
    }
    Ok(terms)
}

/// Property 6: Gaunt-reduced linearization equals brute-force 3D projection.
pub fn cross_method(opts: SuiteOptions) -> Check {
    guard(6, "linearization_cross_check", || {
        let mut terms = benchmark_terms()?;
        if opts.quick {
            terms.truncate(3);
        }
        let targets = [eto(0, 2.0), eto(1, 1.5)];
        let rule = OneCenterRule { radial_nodes: 80, degree: 24 };
        let jobs: Vec<(ProductTerm, RadialFamily)> =
            terms.iter().flat_map(|&t| targets.iter().map(move |&f| (t, f))).collect();
        let devs: Vec<f64> = jobs
            .par_iter()
            .map(|(term, target)| -> Result<f64> {
                let gaunt = linearize_product_with(term, *target, 5, 4, rule)?;
                let brute = linearize_product_by_projection(term, *target, 5, 4, rule)?;
                let peak = gaunt.max_abs().max(f64::MIN_POSITIVE);
                Ok(gaunt
                    .entries
                    .iter()
                    .zip(&brute.entries)
                    .map(|(a, b)| (a.value() - b.value()).norm() / peak)
                    .fold(0.0, f64::max))
            })
            .collect::<Result<_>>()?;
        let worst = devs.iter().copied().fold(0.0, f64::max);
        Ok(Check::new(
            6,
            "linearization_cross_check",
            worst,
            1e-10,
            format!("max relative |Gaunt - projection| = {worst:.3e} over {} term/target pairs", jobs.len()),
            json!({"terms": terms.len(), "targets": targets}),
        ))
    })
}

fn overlap_1s(zeta: f64, r: f64) -> f64 {
    let t = zeta * r;
    (-t).exp() * (1.0 + t + t * t / 3.0)
}

/// Property 7a: two-centre 1s–1s overlap at ζ = 1, R = 2.
pub fn closed_form_overlap() -> Check {
    guard(7, "two_center_overlap", || {
        let zeta: f64 = 1.0;
        let dist = 2.0;
        let norm = zeta.powi(3) / PI;
        let f = |p: [f64; 3]| {
            let ra = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            let rb = (p[0] * p[0] + p[1] * p[1] + (p[2] - dist).powi(2)).sqrt();
            Complex64::new(norm * (-zeta * (ra + rb)).exp(), 0.0)
        };
        let v = two_center_integral(f, [0.0, 0.0, dist], &TwoCenterRule::with_scale(2.0 * zeta)?)?;
        let exact = (-2.0f64).exp() * 13.0 / 3.0;
        debug_assert!((exact - overlap_1s(zeta, dist)).abs() < 1e-15);
        let err = (v.value.re - exact).abs() + v.value.im.abs();
        let mut check = Check::new(
            7,
            "two_center_overlap",
            err,
            1e-9,
            format!("S(1s,1s; R=2) = {:.15} vs e^-2 * 13/3 = {exact:.15}", v.value.re),
            json!({"value": v.value.re, "exact": exact, "error_estimate": v.error_estimate, "level": v.level}),
        );
        check.not_converged = !v.converged;
        Ok(check)
    })
}

/// Property 7b: numerical momentum transform of the 1s Slater orbital.
pub fn closed_form_momentum(opts: SuiteOptions) -> Check {
    guard(7, "momentum_one_s", || {
        let mut worst = 0.0f64;
        let zetas = [0.5, 1.0, 2.7];
        let count = if opts.quick { 20 } else { 100 };
        let mut samples = 0;
        for zeta in zetas {
            let orb =
                ScalarOrbital::new(RadialFamily::sto(zeta)?, ScalarQN::new(1, 0, 0)?, false, Space::Momentum)?;
            let mut ks: Vec<f64> = sample_points(sub_seed(opts.seed, 5), count, Space::Momentum, 20.0 * zeta)
                .iter()
                .map(|p| p.radius)
                .collect();
            ks.extend([0.0, 20.0 * zeta]);
            for k in ks {
                let pt = EvaluationPoint::new(Space::Momentum, k, AngularPair::new(0.4, 1.0)?)?;
                let got = eval_scalar(&orb, &pt)?;
                let exact = 2.0 * 2f64.sqrt() / PI * zeta.powf(2.5) / (k * k + zeta * zeta).powi(2);
                worst = worst.max((got.norm() - exact).abs() / exact);
                samples += 1;
            }
        }
        Ok(Check::new(
            7,
            "momentum_one_s",
            worst,
            1e-10,
            format!("max relative error {worst:.3e} over {samples} momenta with k <= 20 zeta"),
            json!({"zetas": zetas}),
        ))
    })
}

/// Property 8: momentum-space deviation on the scale of the position-space
/// pointwise error at every truncation level.
pub fn representation_independence(runs: &[TranslationRun]) -> Check {
    let mut worst = 0.0f64;
    let mut rows = Vec::new();
    for run in runs {
        for (level, dev) in run.translated.report.levels.iter().zip(&run.fourier) {
            let ratio = (dev / level.max_pointwise).max(level.max_pointwise / dev);
            worst = worst.max(if ratio.is_finite() { ratio } else { f64::INFINITY });
            rows.push(json!({
                "displacement": run.displacement,
                "nmax": level.nmax,
                "position_max_pointwise": level.max_pointwise,
                "momentum_max_deviation": dev,
            }));
        }
    }
    let mut check = Check::new(
        8,
        "fourier_consistency",
        worst,
        100.0,
        format!("momentum/position deviation ratio within [1/{worst:.2}, {worst:.2}] at every level"),
        Value::Array(rows),
    );
    check.passed &= !runs.is_empty();
    check
}

/// Runs every check in order.
pub fn run_all(opts: SuiteOptions) -> Vec<Check> {
    let mut checks = vec![orthonormality(opts), biorthonormality(opts), cg_sum_rule(opts), spinor_norms(opts)];
    checks.extend(expansion_identity(opts));
    match translation_runs(opts) {
        Ok(runs) => {
            checks.push(translation_monotonicity(&runs));
            checks.push(translation_delta(opts));
            checks.push(cross_method(opts));
            checks.push(closed_form_overlap());
            checks.push(closed_form_momentum(opts));
            checks.push(representation_independence(&runs));
        }
        Err(e) => {
            checks.push(Check::failed(5, "translation_residual", &e));
            checks.push(translation_delta(opts));
            checks.push(cross_method(opts));
            checks.push(closed_form_overlap());
            checks.push(closed_form_momentum(opts));
            checks.push(Check::failed(8, "fourier_consistency", &e));
        }
    }
    checks
}
