//! Expansion of spinor products K_a† K_b into sums of scalar orbital products.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar_basis::{EvaluationPoint, FamilyKind, RadialFamily, ScalarQN};
use crate::spinor_basis::{assemble_spinor, check_compatible, spinor_coefficient, SpinorOrbital, SpinorQN};

use super::sampling::OrbitalSampler;

/// weight · conj(k_left) · k_right.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProductTerm {
    pub weight: Complex64,
    pub left_qn: ScalarQN,
    pub right_qn: ScalarQN,
    pub left_family: RadialFamily,
    pub right_family: RadialFamily,
    #[serde(default)]
    pub left_barred: bool,
    #[serde(default)]
    pub right_barred: bool,
}

fn check_families(fam_a: RadialFamily, fam_b: RadialFamily) -> Result<()> {
    if fam_a.kind() != fam_b.kind() {
        return Err(Error::Usage(format!("mixed family kinds: {fam_a} and {fam_b}")));
    }
    Ok(())
}

fn canonicalize(mut terms: Vec<ProductTerm>) -> Vec<ProductTerm> {
    terms.sort_by(|a, b| (a.left_qn, a.right_qn).cmp(&(b.left_qn, b.right_qn)));
    let mut merged: Vec<ProductTerm> = Vec::with_capacity(terms.len());
    for t in terms {
        match merged.last_mut() {
            Some(last) if last.left_qn == t.left_qn && last.right_qn == t.right_qn => last.weight += t.weight,
            _ => merged.push(t),
        }
    }
    merged.retain(|t| t.weight != Complex64::new(0.0, 0.0));
    merged
}

/// Term list of K_a† K_b read off the two assembled component lists: every
/// slot contributes conj(N_a c_a) N_b c_b · conj(k_a) k_b.
pub fn expansion_terms_for(a: &SpinorOrbital, b: &SpinorOrbital) -> Result<Vec<ProductTerm>> {
    check_compatible(a, b)?;
    check_families(a.family, b.family)?;
    let mut terms = Vec::new();
    for (i, (ca, cb)) in a.components.iter().zip(&b.components).enumerate() {
        if ca.is_zero() || cb.is_zero() {
            continue;
        }
        terms.push(ProductTerm {
            weight: a.weight(i).conj() * b.weight(i),
            left_qn: ScalarQN::new(a.qn.n(), ca.orbital_l, ca.m)?,
            right_qn: ScalarQN::new(b.qn.n(), cb.orbital_l, cb.m)?,
            left_family: a.family,
            right_family: b.family,
            left_barred: a.barred,
            right_barred: b.barred,
        });
    }
    Ok(canonicalize(terms))
}

/// [`expansion_terms_for`] on freshly assembled (unbarred) spinors.
pub fn expansion_terms(qa: SpinorQN, qb: SpinorQN, fam_a: RadialFamily, fam_b: RadialFamily) -> Result<Vec<ProductTerm>> {
    check_families(fam_a, fam_b)?;
    expansion_terms_for(&assemble_spinor(qa, fam_a, false)?, &assemble_spinor(qb, fam_b, false)?)
}

/// Which λ labels the block sum runs over in the written-out product formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LambdaRange {
    /// λ = 0, 2, …, 2s − 1 (one label per block).
    EvenBlocks,
    /// λ = 0, 1, …, 2s − 1.
    AllIntegers,
}

/// Written-out block formula: for each λ in `range`,
/// η_t η_t′ [a(λ)a′(λ) k*_{l m(λ)} k′_{l m′(λ)} + a(λ+1)a′(λ+1) k*k′]
/// on the upper orbitals, plus
/// [A(2s−λ)A′(2s−λ) k*_{l′ m(λ)} k′_{l′ m′(λ)} + A(2s−λ−1)A′(2s−λ−1) k*k′]
/// on the lower orbitals, all times N_a N_b.
pub fn expansion_terms_literal(
    qa: SpinorQN,
    qb: SpinorQN,
    fam_a: RadialFamily,
    fam_b: RadialFamily,
    range: LambdaRange,
) -> Result<Vec<ProductTerm>> {
    check_families(fam_a, fam_b)?;
    if qa.s() != qb.s() {
        return Err(Error::Usage(format!("spins differ: {} vs {}", qa.s(), qb.s())));
    }
    let (ka, kb) = (assemble_spinor(qa, fam_a, false)?, assemble_spinor(qb, fam_b, false)?);
    let norm = ka.norm * kb.norm;
    let s = qa.s();
    let s2 = s.twice();
    let step = match range {
        LambdaRange::EvenBlocks => 2,
        LambdaRange::AllIntegers => 1,
    };
    let a = |q: &SpinorQN, l: u32, lam: i32| spinor_coefficient(l, q.s(), q.j(), q.m_j(), lam);
    let make = |w: f64, la: u32, ma: i32, lb: u32, mb: i32| -> Option<ProductTerm> {
        let left = ScalarQN::new(qa.n(), la, ma).ok()?;
        let right = ScalarQN::new(qb.n(), lb, mb).ok()?;
        (w != 0.0).then_some(ProductTerm {
            weight: Complex64::new(norm * w, 0.0),
            left_qn: left,
            right_qn: right,
            left_family: fam_a,
            right_family: fam_b,
            left_barred: false,
            right_barred: false,
        })
    };
    let eta = qa.eta() * qb.eta();
    let (la, lb, lpa, lpb) = (qa.l(), qb.l(), qa.l_prime(), qb.l_prime());
    let mut terms = Vec::new();
    let mut lambda = 0;
    while lambda < s2 {
        for lam in [lambda, lambda + 1] {
            let upper = eta * a(&qa, la, lam) * a(&qb, lb, lam);
            terms.extend(make(upper, la, qa.m_of(lam), lb, qb.m_of(lam)));
            let lower = a(&qa, lpa, s2 - lam) * a(&qb, lpb, s2 - lam);
            terms.extend(make(lower, lpa, qa.m_of(lam), lpb, qb.m_of(lam)));
        }
        lambda += step;
    }
    Ok(canonicalize(terms))
}

/// Largest weight difference between two canonical term lists (terms missing
/// from one side count with their full weight).
pub fn term_list_difference(a: &[ProductTerm], b: &[ProductTerm]) -> f64 {
    let mut worst = 0.0f64;
    for t in a {
        let other = b.iter().find(|u| u.left_qn == t.left_qn && u.right_qn == t.right_qn);
        worst = worst.max((t.weight - other.map_or(Complex64::new(0.0, 0.0), |u| u.weight)).norm());
    }
    for u in b {
        if !a.iter().any(|t| t.left_qn == u.left_qn && t.right_qn == u.right_qn) {
            worst = worst.max(u.weight.norm());
        }
    }
    worst
}

/// Σ terms at sample point `p` using cached scalar values.
pub fn evaluate_terms(terms: &[ProductTerm], sampler: &OrbitalSampler, p: usize) -> Complex64 {
    terms
        .iter()
        .map(|t| {
            let left = sampler.scalar(t.left_family, t.left_qn, t.left_barred, p);
            let right = sampler.scalar(t.right_family, t.right_qn, t.right_barred, p);
            t.weight * left.conj() * right
        })
        .sum()
}

/// Outcome of checking K_a†K_b = Σ terms on a point set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    /// max |K_a†K_b − Σ terms|.
    pub max_abs: f64,
    /// max |K_a†K_b − Σ terms| / (1 + |K_a†K_b|).
    pub max_scaled: f64,
    /// True when K_a = K_b and every contraction was real and non-negative.
    pub self_product_nonnegative: Option<bool>,
}

/// Checks the identity for two prepared spinors against `terms`.
pub fn check_identity(
    a: &SpinorOrbital,
    b: &SpinorOrbital,
    terms: &[ProductTerm],
    sampler: &OrbitalSampler,
) -> IdentityCheck {
    let same = a == b;
    let mut check = IdentityCheck { max_abs: 0.0, max_scaled: 0.0, self_product_nonnegative: same.then_some(true) };
    for p in 0..sampler.points().len() {
        let va = sampler.spinor(a, p);
        let vb = sampler.spinor(b, p);
        let contraction: Complex64 = va.iter().zip(&vb).map(|(x, y)| x.conj() * y).sum();
        let dev = (contraction - evaluate_terms(terms, sampler, p)).norm();
        check.max_abs = check.max_abs.max(dev);
        check.max_scaled = check.max_scaled.max(dev / (1.0 + contraction.norm()));
        if same && (contraction.im != 0.0 || contraction.re < 0.0) {
            check.self_product_nonnegative = Some(false);
        }
    }
    check
}

/// Evaluates K_a†K_b and its term expansion at `points` (all in one space).
pub fn verify_expansion_identity(
    qa: SpinorQN,
    qb: SpinorQN,
    fam_a: RadialFamily,
    fam_b: RadialFamily,
    points: &[EvaluationPoint],
) -> Result<IdentityCheck> {
    let a = assemble_spinor(qa, fam_a, false)?;
    let b = assemble_spinor(qb, fam_b, false)?;
    let terms = expansion_terms_for(&a, &b)?;
    let l_max = a.qn.l_prime().max(b.qn.l_prime()).max(a.qn.l()).max(b.qn.l());
    let mut sampler = OrbitalSampler::new(points.to_vec(), l_max)?;
    sampler.prepare(&a)?;
    sampler.prepare(&b)?;
    Ok(check_identity(&a, &b, &terms, &sampler))
}

/// True when both families are the same kind (ETO or STO), as the product
/// formulas require.
pub fn same_kind(fam_a: RadialFamily, fam_b: RadialFamily) -> bool {
    matches!(
        (fam_a.kind(), fam_b.kind()),
        (FamilyKind::EtoAlpha, FamilyKind::EtoAlpha) | (FamilyKind::Sto, FamilyKind::Sto)
    )
}
