//! One-range translation of scalar and spinor orbitals: re-expansion of
//! k(ζ, x − y) over an ETO set centred at the origin.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{two_center_grid, RefinementPolicy, TwoCenterRule};
use crate::scalar_basis::{
    eval_scalar, orbital_radial, EvaluationPoint, ExpansionTable, GridProjector, QuadratureInfo, RadialFamily,
    ScalarOrbital, ScalarQN, Space,
};
use crate::specfun::{spherical_harmonic, AngularPair};
use crate::spinor_basis::{eval_spinor, SpinorOrbital};

/// Prefix of the flag attached to tables whose entries did not settle within
/// the refinement budget.
pub const UNCONVERGED_FLAG: &str = "unconverged";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TranslationOptions {
    /// Base Gauss–Laguerre node count outside |x| = |y| (half as many inside).
    pub node_count: usize,
    /// Base angular degree of the two-centre grid.
    pub degree: usize,
    /// Per-entry refinement: stop when every coefficient moves by at most
    /// threshold × max|c| between consecutive levels.
    pub policy: RefinementPolicy,
}

impl Default for TranslationOptions {
    fn default() -> Self {
        Self { node_count: 48, degree: 32, policy: RefinementPolicy::default() }
    }
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// x ↦ k(x − y) for a position-space scalar orbital.
fn displaced(orb: ScalarOrbital, y: [f64; 3]) -> impl Fn([f64; 3]) -> Complex64 + Sync {
    move |x| {
        let (r, dir) = AngularPair::from_cartesian(sub(x, y));
        let radial = orbital_radial(&orb, r).unwrap_or(f64::NAN);
        let angular = spherical_harmonic(orb.qn().l(), orb.qn().m(), dir).unwrap_or(Complex64::new(f64::NAN, 0.0));
        angular * radial
    }
}

fn sorted_levels(levels: &[u32]) -> Result<Vec<u32>> {
    let mut levels = levels.to_vec();
    levels.sort_unstable();
    levels.dedup();
    if levels.is_empty() || levels[0] == 0 {
        return Err(Error::Usage("truncation levels must be non-empty and at least 1".into()));
    }
    Ok(levels)
}

/// Translation tables for several orbitals sharing one displacement and one
/// set of grids. Returns, per orbital, one table per truncation level.
pub fn translate_scalars(
    orbitals: &[ScalarOrbital],
    y: [f64; 3],
    target: RadialFamily,
    levels: &[u32],
    l_max: u32,
    opts: &TranslationOptions,
) -> Result<Vec<Vec<ExpansionTable>>> {
    let levels = sorted_levels(levels)?;
    let n_top = *levels.last().expect("levels non-empty");
    if orbitals.is_empty() {
        return Ok(Vec::new());
    }
    if let Some(o) = orbitals.iter().find(|o| o.space() != Space::Position) {
        return Err(Error::Usage(format!("translation needs a position-space orbital, got {}", o.qn())));
    }
    if y.iter().any(|c| !c.is_finite()) {
        return Err(Error::Domain("displacement must be finite".into()));
    }
    let projector = GridProjector::new(target, n_top, l_max)?;
    let decay = orbitals.iter().map(|o| o.family().zeta()).fold(f64::INFINITY, f64::min);
    let scale = target.zeta() + decay;
    let policy = opts.policy;
    let rule = TwoCenterRule::new(opts.node_count, scale, opts.degree)?.with_policy(policy);
    let functions: Vec<_> = orbitals.iter().map(|&o| displaced(o, y)).collect();

    let mut previous: Option<Vec<Vec<Complex64>>> = None;
    let mut flags: Vec<Vec<String>> = vec![Vec::new(); orbitals.len()];
    let mut level = 0;
    let (grid, coefficients) = loop {
        let grid = two_center_grid(&rule, y, level)?;
        let current: Vec<Vec<Complex64>> = functions.iter().map(|f| projector.coefficients(&grid, f).0).collect();
        for c in &current {
            if let Some(bad) = c.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
                return Err(Error::NonFinite { index: bad, radius: f64::NAN });
            }
        }
        let mut settled = false;
        if let Some(prev) = &previous {
            settled = true;
            for (i, (cur, old)) in current.iter().zip(prev).enumerate() {
                let peak = cur.iter().map(|v| v.norm()).fold(0.0, f64::max);
                let moving: Vec<(ScalarQN, f64)> = projector
                    .qns()
                    .iter()
                    .zip(cur.iter().zip(old))
                    .map(|(q, (a, b))| (*q, (a - b).norm()))
                    .filter(|&(_, change)| change > policy.threshold * peak && change > policy.absolute_floor)
                    .collect();
                if !moving.is_empty() {
                    settled = false;
                    if level >= policy.max_level {
                        flags[i] = moving
                            .iter()
                            .map(|(q, change)| format!("{UNCONVERGED_FLAG}: entry {q} changed by {change:.3e} at level {level}"))
                            .collect();
                    }
                }
            }
        }
        if previous.is_none() && level >= policy.max_level {
            // No second grid to compare against: accuracy is unknown.
            for f in &mut flags {
                f.push(format!("{UNCONVERGED_FLAG}: refinement budget 0 leaves no error estimate"));
            }
        }
        if settled || level >= policy.max_level {
            break (grid, current);
        }
        previous = Some(current);
        level += 1;
    };

    let info = QuadratureInfo { node_count: opts.node_count, scale, degree: opts.degree, refinement_levels: level };
    let l_top = projector.qns().iter().map(|q| q.l()).max().unwrap_or(0);
    let mut out = Vec::with_capacity(orbitals.len());
    for ((f, coeffs), flags) in functions.iter().zip(coefficients).zip(flags) {
        let residuals = projector.residuals(&grid, f, &coeffs, &levels);
        let pairs: Vec<(ScalarQN, Complex64)> = projector.qns().iter().copied().zip(coeffs).collect();
        let full = ExpansionTable::new(target, n_top, l_top, &pairs, info);
        out.push(
            levels
                .iter()
                .zip(residuals)
                .map(|(&n, res)| {
                    let mut t = full.truncate(n, l_max);
                    t.residual_l2w = res;
                    t.flags = flags.clone();
                    t
                })
                .collect(),
        );
    }
    Ok(out)
}

/// V_NLM = ⟨barred k_NLM(ζ′) | k(ζ, x − y)⟩ for all n ≤ n_max, l ≤ l_max.
pub fn translation_coefficients(
    orb: &ScalarOrbital,
    y: [f64; 3],
    target: RadialFamily,
    n_max: u32,
    l_max: u32,
) -> Result<ExpansionTable> {
    translation_coefficients_with(orb, y, target, n_max, l_max, &TranslationOptions::default())
}

pub fn translation_coefficients_with(
    orb: &ScalarOrbital,
    y: [f64; 3],
    target: RadialFamily,
    n_max: u32,
    l_max: u32,
    opts: &TranslationOptions,
) -> Result<ExpansionTable> {
    let mut tables = translate_scalars(std::slice::from_ref(orb), y, target, &[n_max], l_max, opts)?;
    Ok(tables.remove(0).remove(0))
}

/// True when any table carries the non-convergence flag.
pub fn has_unconverged(tables: &[ExpansionTable]) -> bool {
    tables.iter().any(|t| t.flags.iter().any(|f| f.starts_with(UNCONVERGED_FLAG)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelReport {
    pub nmax: u32,
    pub residual_l2w: f64,
    pub max_pointwise: f64,
}

/// Per-truncation convergence of a translated spinor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub case: String,
    pub levels: Vec<LevelReport>,
    pub samples: Vec<EvaluationPoint>,
    pub flags: Vec<String>,
}

/// A translated spinor: `tables[i][k]` is component i at truncation level k.
/// The spinor coefficient of component i is applied unchanged on top.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranslatedSpinor {
    pub displacement: [f64; 3],
    pub levels: Vec<u32>,
    pub tables: Vec<Vec<ExpansionTable>>,
    pub report: ConvergenceReport,
}

fn zero_table(target: RadialFamily, n_max: u32, l_max: u32, template: &ExpansionTable) -> Result<ExpansionTable> {
    let l_max = l_max.min(n_max - 1);
    let pairs: Vec<(ScalarQN, Complex64)> =
        ScalarQN::enumerate(n_max, l_max).into_iter().map(|q| (q, Complex64::new(0.0, 0.0))).collect();
    Ok(ExpansionTable::new(target, n_max, l_max, &pairs, template.quadrature))
}

/// Translates every component of `orb` by `y` and compares the reassembled
/// truncated spinor with the directly displaced spinor at `samples`.
pub fn translate_spinor(
    orb: &SpinorOrbital,
    y: [f64; 3],
    target: RadialFamily,
    levels: &[u32],
    l_max: u32,
    samples: &[EvaluationPoint],
    opts: &TranslationOptions,
) -> Result<TranslatedSpinor> {
    let levels = sorted_levels(levels)?;
    if samples.iter().any(|p| p.space != Space::Position) {
        return Err(Error::Usage("spinor translation samples must be position-space points".into()));
    }
    let active: Vec<usize> = (0..orb.component_count()).filter(|&i| !orb.components[i].is_zero()).collect();
    let scalars: Vec<ScalarOrbital> = active
        .iter()
        .map(|&i| orb.scalar_orbital(i, Space::Position).expect("non-zero component has an orbital"))
        .collect();
    let translated = translate_scalars(&scalars, y, target, &levels, l_max, opts)?;

    let template = translated[0][0].clone();
    let mut tables = Vec::with_capacity(orb.component_count());
    let mut next = translated.into_iter();
    for i in 0..orb.component_count() {
        if active.contains(&i) {
            tables.push(next.next().expect("one table set per active component"));
        } else {
            tables.push(levels.iter().map(|&n| zero_table(target, n, l_max, &template)).collect::<Result<_>>()?);
        }
    }

    let direct: Vec<Vec<Complex64>> = samples
        .iter()
        .map(|p| eval_spinor(orb, &EvaluationPoint::from_cartesian(Space::Position, sub(p.cartesian(), y))))
        .collect::<Result<_>>()?;
    let mut report_levels = Vec::with_capacity(levels.len());
    for (k, &n) in levels.iter().enumerate() {
        let mut residual_sq = 0.0;
        for &i in &active {
            residual_sq += orb.weight(i).norm_sqr() * tables[i][k].residual_l2w.powi(2);
        }
        let mut worst = 0.0f64;
        for (p, exact) in samples.iter().zip(&direct) {
            for &i in &active {
                let approx = orb.weight(i) * tables[i][k].synthesize(p)?;
                worst = worst.max((exact[i] - approx).norm());
            }
        }
        report_levels.push(LevelReport { nmax: n, residual_l2w: residual_sq.sqrt(), max_pointwise: worst });
    }
    let mut flags: Vec<String> = tables.iter().flat_map(|t| t.last().map(|t| t.flags.clone()).unwrap_or_default()).collect();
    flags.dedup();
    let case = format!(
        "spinor {} {} barred={} y=[{}, {}, {}] target {}",
        orb.qn, orb.family, orb.barred, y[0], y[1], y[2], target
    );
    Ok(TranslatedSpinor {
        displacement: y,
        levels,
        tables,
        report: ConvergenceReport { case, levels: report_levels, samples: samples.to_vec(), flags },
    })
}

fn phase(k: &EvaluationPoint, y: [f64; 3]) -> Complex64 {
    let kv = k.cartesian();
    let dot = kv[0] * y[0] + kv[1] * y[1] + kv[2] * y[2];
    Complex64::from_polar(1.0, -dot)
}

/// max over momentum points of |Σ c φ_ν(k) − e^{−ik·y} φ_orb(k)|, one value per table.
pub fn fourier_consistency(
    tables: &[ExpansionTable],
    orb: &ScalarOrbital,
    y: [f64; 3],
    k_points: &[EvaluationPoint],
) -> Result<Vec<f64>> {
    if k_points.iter().any(|p| p.space != Space::Momentum) {
        return Err(Error::Usage("fourier consistency needs momentum-space points".into()));
    }
    let momentum = orb.in_space(Space::Momentum);
    let exact: Vec<Complex64> =
        k_points.iter().map(|k| Ok(phase(k, y) * eval_scalar(&momentum, k)?)).collect::<Result<_>>()?;
    tables
        .iter()
        .map(|t| {
            let mut worst = 0.0f64;
            for (k, e) in k_points.iter().zip(&exact) {
                worst = worst.max((t.synthesize(k)? - e).norm());
            }
            Ok(worst)
        })
        .collect()
}

/// Spinor version of [`fourier_consistency`]: per level, the largest weighted
/// component deviation over all momentum points.
pub fn spinor_fourier_consistency(
    orb: &SpinorOrbital,
    translated: &TranslatedSpinor,
    k_points: &[EvaluationPoint],
) -> Result<Vec<f64>> {
    let mut out = vec![0.0f64; translated.levels.len()];
    for (i, tables) in translated.tables.iter().enumerate() {
        let Some(scalar) = orb.scalar_orbital(i, Space::Position) else {
            continue;
        };
        let w = orb.weight(i).norm();
        for (slot, dev) in out.iter_mut().zip(fourier_consistency(tables, &scalar, translated.displacement, k_points)?) {
            *slot = slot.max(w * dev);
        }
    }
    Ok(out)
}
