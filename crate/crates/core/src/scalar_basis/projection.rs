//! Projection of arbitrary functions onto a complete ETO set through the barred
//! duals, and the resulting coefficient tables.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{
    build_angular_rule, build_radial_rule, spherical_grid, CompensatedSum, ComplexSum, GridPoint, HankelRule,
    REDUCTION_CHUNK,
};
use crate::specfun::{lm_index, spherical_harmonics_upto, AngularPair};

use super::eval::minus_i_pow;
use super::gram::OneCenterRule;
use super::radial::RadialBasis;
use super::types::{EvaluationPoint, RadialFamily, ScalarQN, Space};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableEntry {
    pub n: u32,
    pub l: u32,
    pub m: i32,
    pub re: f64,
    pub im: f64,
}

impl TableEntry {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn qn(&self) -> ScalarQN {
        ScalarQN::new(self.n, self.l, self.m).expect("table entries hold valid quantum numbers")
    }
}

/// Quadrature used to produce a table, recorded for reproducibility.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureInfo {
    pub node_count: usize,
    pub scale: f64,
    pub degree: usize,
    pub refinement_levels: u32,
}

/// Expansion coefficients over all (n, l, m) with n ≤ nmax, l ≤ min(lmax, n − 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionTable {
    #[serde(rename = "family")]
    pub target_family: RadialFamily,
    pub nmax: u32,
    pub lmax: u32,
    /// Canonical (n, l, m) order.
    pub entries: Vec<TableEntry>,
    /// Weighted-L² norm of f − Σ c ψ.
    pub residual_l2w: f64,
    #[serde(default)]
    pub flags: Vec<String>,
    pub quadrature: QuadratureInfo,
}

impl ExpansionTable {
    pub fn new(
        target_family: RadialFamily,
        nmax: u32,
        lmax: u32,
        coefficients: &[(ScalarQN, Complex64)],
        quadrature: QuadratureInfo,
    ) -> Self {
        let entries = coefficients
            .iter()
            .map(|(q, c)| TableEntry { n: q.n(), l: q.l(), m: q.m(), re: c.re, im: c.im })
            .collect();
        Self { target_family, nmax, lmax, entries, residual_l2w: 0.0, flags: Vec::new(), quadrature }
    }

    pub fn coefficient(&self, n: u32, l: u32, m: i32) -> Complex64 {
        self.entries
            .iter()
            .find(|e| e.n == n && e.l == l && e.m == m)
            .map_or(Complex64::new(0.0, 0.0), TableEntry::value)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|e| e.value().norm()).fold(0.0, f64::max)
    }

    /// Keeps entries with n ≤ nmax and l ≤ lmax. The residual is not
    /// recomputed; callers that need it set it afterwards.
    pub fn truncate(&self, nmax: u32, lmax: u32) -> Self {
        let lmax = lmax.min(nmax.saturating_sub(1));
        Self {
            nmax,
            lmax,
            entries: self.entries.iter().copied().filter(|e| e.n <= nmax && e.l <= lmax).collect(),
            ..self.clone()
        }
    }

    /// Σ c_ν k_ν at a point, in position or momentum space.
    pub fn synthesize(&self, pt: &EvaluationPoint) -> Result<Complex64> {
        if self.entries.is_empty() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let basis = RadialBasis::new(self.target_family, self.nmax, self.lmax, false)?;
        let mut ys = Vec::new();
        spherical_harmonics_upto(basis.l_max(), pt.dir, &mut ys);
        let radial: Vec<Complex64> = match pt.space {
            Space::Position => {
                let (mut out, mut scratch) = (Vec::new(), Vec::new());
                basis.values(pt.radius, &mut out, &mut scratch);
                out.into_iter().map(|v| Complex64::new(v, 0.0)).collect()
            }
            Space::Momentum => momentum_radials(&basis, self.target_family, pt.radius),
        };
        let mut acc = ComplexSum::new();
        for e in &self.entries {
            acc.add(e.value() * radial[basis.index(e.n, e.l)] * ys[lm_index(e.l, e.m)]);
        }
        Ok(acc.value())
    }
}

/// (−i)^l √(2/π) ∫ R_{nl}(r) j_l(kr) r² dr for every radial slot of `basis`.
pub(crate) fn momentum_radials(basis: &RadialBasis, family: RadialFamily, k: f64) -> Vec<Complex64> {
    let rule = HankelRule::new(k, family.zeta(), f64::from(basis.n_max() + 1));
    let mut values = vec![Complex64::new(0.0, 0.0); basis.len()];
    let (mut out, mut scratch) = (Vec::new(), Vec::new());
    let mut sums = vec![CompensatedSum::new(); basis.len()];
    let mut bessel = Vec::with_capacity(basis.l_max() as usize + 1);
    for &(r, w) in &rule.nodes {
        basis.values(r, &mut out, &mut scratch);
        bessel.clear();
        for l in 0..=basis.l_max() {
            bessel.push(crate::specfun::spherical_bessel(l, k * r));
        }
        for l in 0..=basis.l_max() {
            for n in (l + 1)..=basis.n_max() {
                let i = basis.index(n, l);
                sums[i].add(w * out[i] * bessel[l as usize] * r * r);
            }
        }
    }
    for l in 0..=basis.l_max() {
        for n in (l + 1)..=basis.n_max() {
            let i = basis.index(n, l);
            values[i] = minus_i_pow(l) * (2.0 / PI).sqrt() * sums[i].value();
        }
    }
    values
}

/// Projects functions sampled on an arbitrary weighted point set onto the
/// barred duals of an ETO family.
#[derive(Debug, Clone)]
pub struct GridProjector {
    family: RadialFamily,
    qns: Vec<ScalarQN>,
    barred: RadialBasis,
    plain: RadialBasis,
    l_max: u32,
}

struct PointBasis {
    r: f64,
    ys: Vec<Complex64>,
    barred: Vec<f64>,
    plain: Vec<f64>,
    scratch: Vec<f64>,
}

impl PointBasis {
    fn new() -> Self {
        Self { r: 0.0, ys: Vec::new(), barred: Vec::new(), plain: Vec::new(), scratch: Vec::new() }
    }
}

impl GridProjector {
    pub fn new(family: RadialFamily, n_max: u32, l_max: u32) -> Result<Self> {
        if !family.is_eto() {
            return Err(Error::Usage("projection targets must be ETO families".into()));
        }
        let barred = RadialBasis::new(family, n_max, l_max, true)?;
        let plain = RadialBasis::new(family, n_max, l_max, false)?;
        let l_max = barred.l_max();
        Ok(Self { family, qns: ScalarQN::enumerate(n_max, l_max), barred, plain, l_max })
    }

    pub fn qns(&self) -> &[ScalarQN] {
        &self.qns
    }

    pub fn family(&self) -> RadialFamily {
        self.family
    }

    fn fill(&self, x: [f64; 3], pb: &mut PointBasis, with_barred: bool, with_plain: bool) {
        let (r, dir) = AngularPair::from_cartesian(x);
        pb.r = r;
        spherical_harmonics_upto(self.l_max, dir, &mut pb.ys);
        if with_barred {
            self.barred.values(r, &mut pb.barred, &mut pb.scratch);
        }
        if with_plain {
            self.plain.values(r, &mut pb.plain, &mut pb.scratch);
        }
    }

    /// c_ν = Σ_p w_p conj(barred k_ν(x_p)) f(x_p), with Σ_p |w_p barred k_ν f| per slot.
    pub fn coefficients<F>(&self, points: &[GridPoint], f: &F) -> (Vec<Complex64>, Vec<f64>)
    where
        F: Fn([f64; 3]) -> Complex64 + Sync,
    {
        let width = self.qns.len();
        let slots: Vec<(usize, usize)> =
            self.qns.iter().map(|q| (self.barred.index(q.n(), q.l()), lm_index(q.l(), q.m()))).collect();
        let partials: Vec<(Vec<ComplexSum>, Vec<CompensatedSum>)> = points
            .par_chunks(REDUCTION_CHUNK)
            .map(|chunk| {
                let mut acc = vec![ComplexSum::new(); width];
                let mut abs = vec![CompensatedSum::new(); width];
                let mut pb = PointBasis::new();
                for p in chunk {
                    let fv = f(p.position) * p.weight;
                    if fv == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    self.fill(p.position, &mut pb, true, false);
                    for (k, &(ri, yi)) in slots.iter().enumerate() {
                        let v = pb.ys[yi].conj() * (pb.barred[ri] * fv);
                        acc[k].add(v);
                        abs[k].add(v.norm());
                    }
                }
                (acc, abs)
            })
            .collect();
        let mut acc = vec![ComplexSum::new(); width];
        let mut abs = vec![CompensatedSum::new(); width];
        for (a, b) in &partials {
            for k in 0..width {
                acc[k].merge(&a[k]);
                abs[k].merge(&b[k]);
            }
        }
        (acc.iter().map(ComplexSum::value).collect(), abs.iter().map(CompensatedSum::value).collect())
    }

    /// Weighted-L² residual ‖f − Σ_{n ≤ N} c k‖_w on the point set for every
    /// truncation N in `levels` (ascending); `coeffs` aligned with [`Self::qns`].
    pub fn residuals<F>(&self, points: &[GridPoint], f: &F, coeffs: &[Complex64], levels: &[u32]) -> Vec<f64>
    where
        F: Fn([f64; 3]) -> Complex64 + Sync,
    {
        let slots: Vec<(u32, usize, usize)> = self
            .qns
            .iter()
            .map(|q| (q.n(), self.plain.index(q.n(), q.l()), lm_index(q.l(), q.m())))
            .collect();
        let partials: Vec<Vec<CompensatedSum>> = points
            .par_chunks(REDUCTION_CHUNK)
            .map(|chunk| {
                let mut acc = vec![CompensatedSum::new(); levels.len()];
                let mut pb = PointBasis::new();
                for p in chunk {
                    self.fill(p.position, &mut pb, false, true);
                    let fv = f(p.position);
                    let w = p.weight * self.family.weight(pb.r);
                    let mut synth = Complex64::new(0.0, 0.0);
                    let mut k = 0;
                    for (li, &level) in levels.iter().enumerate() {
                        while k < slots.len() && slots[k].0 <= level {
                            let (_, ri, yi) = slots[k];
                            synth += coeffs[k] * pb.ys[yi] * pb.plain[ri];
                            k += 1;
                        }
                        acc[li].add(w * (fv - synth).norm_sqr());
                    }
                }
                acc
            })
            .collect();
        let mut acc = vec![CompensatedSum::new(); levels.len()];
        for part in &partials {
            for (a, b) in acc.iter_mut().zip(part) {
                a.merge(b);
            }
        }
        acc.iter().map(|a| a.value().max(0.0).sqrt()).collect()
    }
}

/// Options for one-centre projection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectionOptions {
    pub rule: OneCenterRule,
    /// Exponential decay rate of f; the radial scale is ζ_target + decay.
    /// Defaults to the target family's ζ.
    pub decay: Option<f64>,
    /// Recompute with half the radial nodes and flag entries that move.
    pub check_convergence: bool,
}

impl Default for ProjectionOptions {
    fn default() -> Self {
        Self { rule: OneCenterRule::default(), decay: None, check_convergence: true }
    }
}

/// Relative change (to the largest coefficient) above which an entry is flagged.
pub const CONVERGENCE_TOLERANCE: f64 = 1e-9;

/// Projects f onto the barred duals of `family` (centred at the origin).
pub fn project<F>(f: F, family: RadialFamily, n_max: u32, l_max: u32) -> Result<ExpansionTable>
where
    F: Fn([f64; 3]) -> Complex64 + Sync,
{
    project_with(&f, family, n_max, l_max, &ProjectionOptions::default())
}

pub fn project_with<F>(
    f: &F,
    family: RadialFamily,
    n_max: u32,
    l_max: u32,
    opts: &ProjectionOptions,
) -> Result<ExpansionTable>
where
    F: Fn([f64; 3]) -> Complex64 + Sync,
{
    let mut tables = project_levels(f, family, &[n_max], l_max, opts)?;
    Ok(tables.pop().expect("one level requested"))
}

/// Projects once at the largest level and reports one table per truncation
/// level (coefficients do not depend on the truncation), each with its own
/// weighted-L² residual.
pub fn project_levels<F>(
    f: &F,
    family: RadialFamily,
    levels: &[u32],
    l_max: u32,
    opts: &ProjectionOptions,
) -> Result<Vec<ExpansionTable>>
where
    F: Fn([f64; 3]) -> Complex64 + Sync,
{
    let mut levels = levels.to_vec();
    levels.sort_unstable();
    levels.dedup();
    let n_top = *levels.last().ok_or_else(|| Error::Usage("no truncation levels given".into()))?;
    let projector = GridProjector::new(family, n_top, l_max)?;
    let decay = opts.decay.unwrap_or(family.zeta());
    if !(decay.is_finite() && decay > 0.0) {
        return Err(Error::Domain(format!("decay rate must be positive, got {decay}")));
    }
    let scale = family.zeta() + decay;
    let angular = build_angular_rule(opts.rule.degree);
    let grid = spherical_grid(&build_radial_rule(opts.rule.radial_nodes, scale)?, &angular);
    let (coeffs, _) = projector.coefficients(&grid, f);

    let mut flags = Vec::new();
    if let Some(bad) = coeffs.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::NonFinite { index: bad, radius: f64::NAN });
    }
    if opts.check_convergence {
        let coarse_grid = spherical_grid(&build_radial_rule((opts.rule.radial_nodes / 2).max(1), scale)?, &angular);
        let (coarse, _) = projector.coefficients(&coarse_grid, f);
        let peak = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        for ((q, c), c0) in projector.qns().iter().zip(&coeffs).zip(&coarse) {
            let change = (c - c0).norm();
            if change > CONVERGENCE_TOLERANCE * peak && change > 1e-14 {
                flags.push(format!("entry {q}: change {change:.3e} between radial rules"));
            }
        }
    }

    let residuals = projector.residuals(&grid, f, &coeffs, &levels);
    let info = QuadratureInfo { node_count: opts.rule.radial_nodes, scale, degree: opts.rule.degree, refinement_levels: 0 };
    let pairs: Vec<(ScalarQN, Complex64)> = projector.qns().iter().copied().zip(coeffs).collect();
    let full = ExpansionTable::new(family, n_top, projector.l_max, &pairs, info);
    Ok(levels
        .iter()
        .zip(residuals)
        .map(|(&n, res)| {
            let mut t = full.truncate(n, l_max);
            t.residual_l2w = res;
            t.flags = flags.clone();
            t
        })
        .collect())
}
