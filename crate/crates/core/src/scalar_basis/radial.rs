//! Radial factors of the ψ^α exponential-type family and of Slater-type orbitals.

use crate::error::{Error, Result};
use crate::specfun::{laguerre, laguerre_sequence, log_factorial};

use super::types::{FamilyKind, RadialFamily, ScalarOrbital, ScalarQN};

fn check_eto(alpha: i32, n: u32, l: u32, zeta: f64) -> Result<()> {
    RadialFamily::eto(alpha, zeta)?;
    ScalarQN::new(n, l, 0)?;
    Ok(())
}

/// ln N^α_{nl} with N² = (2ζ)³ (n−l−1)! / Γ(n+l+2−α).
pub(crate) fn eto_log_norm(alpha: i32, n: u32, l: u32, zeta: f64) -> f64 {
    let gamma_arg = (n + l + 1) as i32 - alpha;
    0.5 * (3.0 * (2.0 * zeta).ln() + log_factorial(n - l - 1) - log_factorial(gamma_arg as u32))
}

/// N (2ζr)^{l−shift} e^{−ζr} L_{n−l−1}^{2l+2−α}(2ζr); `shift` = α gives the
/// barred dual w_α R without forming a 0 · ∞ product at the origin.
fn eto_shifted(alpha: i32, n: u32, l: u32, zeta: f64, r: f64, shift: i32) -> f64 {
    let x = 2.0 * zeta * r;
    let beta = f64::from(2 * l as i32 + 2 - alpha);
    let poly = laguerre(n - l - 1, beta, x);
    eto_log_norm(alpha, n, l, zeta).exp() * x.powi(l as i32 - shift) * (-zeta * r).exp() * poly
}

/// Radial factor R^α_{nl}(ζ, r) of the ψ^α family.
pub fn radial_eto(alpha: i32, n: u32, l: u32, zeta: f64, r: f64) -> Result<f64> {
    check_eto(alpha, n, l, zeta)?;
    if !(r.is_finite() && r >= 0.0) {
        return Err(Error::Domain(format!("radius must be finite and non-negative, got {r}")));
    }
    Ok(eto_shifted(alpha, n, l, zeta, r, 0))
}

/// Radial factor of the normalised Slater function [(2ζ)^{2n+1}/(2n)!]^{1/2} r^{n−1} e^{−ζr}.
pub fn radial_sto(n: u32, zeta: f64, r: f64) -> f64 {
    let log_norm = 0.5 * (f64::from(2 * n + 1) * (2.0 * zeta).ln() - log_factorial(2 * n));
    (log_norm - zeta * r).exp() * r.powi(n as i32 - 1)
}

/// Radial factor of an orbital in position space, including the barred weight.
pub fn orbital_radial(orb: &ScalarOrbital, r: f64) -> Result<f64> {
    let fam = orb.family();
    let qn = orb.qn();
    match fam.kind() {
        FamilyKind::Sto => Ok(radial_sto(qn.n(), fam.zeta(), r)),
        FamilyKind::EtoAlpha => {
            let shift = if orb.barred() { fam.alpha() } else { 0 };
            if r == 0.0 && (qn.l() as i32) < shift {
                return Err(Error::PoleAtOrigin(format!(
                    "barred ETO (alpha = {}, l = {}) diverges at r = 0",
                    fam.alpha(),
                    qn.l()
                )));
            }
            Ok(eto_shifted(fam.alpha(), qn.n(), qn.l(), fam.zeta(), r, shift))
        }
    }
}

/// Highest power of r in the orbital's radial factor times r² (for quadrature sizing).
pub(crate) fn radial_degree(orb: &ScalarOrbital) -> i32 {
    let shift = if orb.barred() { orb.family().alpha() } else { 0 };
    orb.qn().n() as i32 + 1 - shift
}

/// All ETO radial factors R_{nl} (or their barred duals) with n ≤ n_max,
/// l ≤ l_max at one radius, for batch evaluation.
#[derive(Debug, Clone)]
pub struct RadialBasis {
    family: RadialFamily,
    n_max: u32,
    l_max: u32,
    barred: bool,
    norms: Vec<f64>,
    offsets: Vec<usize>,
}

impl RadialBasis {
    pub fn new(family: RadialFamily, n_max: u32, l_max: u32, barred: bool) -> Result<Self> {
        if !family.is_eto() {
            return Err(Error::Usage("radial basis tables are defined for ETO families".into()));
        }
        if n_max == 0 {
            return Err(Error::Domain("n_max must be at least 1".into()));
        }
        let l_max = l_max.min(n_max - 1);
        let mut offsets = Vec::with_capacity(l_max as usize + 2);
        let mut norms = Vec::new();
        for l in 0..=l_max {
            offsets.push(norms.len());
            for n in (l + 1)..=n_max {
                norms.push(eto_log_norm(family.alpha(), n, l, family.zeta()).exp());
            }
        }
        offsets.push(norms.len());
        Ok(Self { family, n_max, l_max, barred, norms, offsets })
    }

    pub fn len(&self) -> usize {
        self.norms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.norms.is_empty()
    }

    pub fn family(&self) -> RadialFamily {
        self.family
    }

    pub fn barred(&self) -> bool {
        self.barred
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn l_max(&self) -> u32 {
        self.l_max
    }

    /// Slot of (n, l) in the output of [`RadialBasis::values`] (grouped by l, then n).
    pub fn index(&self, n: u32, l: u32) -> usize {
        self.offsets[l as usize] + (n - l - 1) as usize
    }

    /// Writes every radial value at `r` into `out` (resized to `len()`).
    pub fn values(&self, r: f64, out: &mut Vec<f64>, scratch: &mut Vec<f64>) {
        out.clear();
        out.resize(self.len(), 0.0);
        let alpha = self.family.alpha();
        let zeta = self.family.zeta();
        let x = 2.0 * zeta * r;
        let shift = if self.barred { alpha } else { 0 };
        let decay = (-zeta * r).exp();
        for l in 0..=self.l_max {
            let beta = f64::from(2 * l as i32 + 2 - alpha);
            laguerre_sequence(self.n_max - l - 1, beta, x, scratch);
            let pref = x.powi(l as i32 - shift) * decay;
            let base = self.offsets[l as usize];
            for (q, &poly) in scratch.iter().enumerate() {
                out[base + q] = self.norms[base + q] * pref * poly;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn batch_matches_single() {
        let fam = RadialFamily::eto(-1, 1.3).unwrap();
        for barred in [false, true] {
            let basis = RadialBasis::new(fam, 6, 4, barred).unwrap();
            let (mut out, mut scratch) = (Vec::new(), Vec::new());
            basis.values(2.2, &mut out, &mut scratch);
            for n in 1..=6u32 {
                for l in 0..n.min(5) {
                    let orb = ScalarOrbital::new(fam, ScalarQN::new(n, l, 0).unwrap(), barred, super::super::Space::Position).unwrap();
                    let direct = orbital_radial(&orb, 2.2).unwrap();
                    let v = out[basis.index(n, l)];
                    assert!((v - direct).abs() <= 1e-14 * direct.abs().max(1e-300), "n {n} l {l}");
                }
            }
        }
    }

    #[test]
    fn barred_alpha_one_s_has_pole() {
        let fam = RadialFamily::eto(1, 1.0).unwrap();
        let orb = ScalarOrbital::new(fam, ScalarQN::new(2, 0, 0).unwrap(), true, super::super::Space::Position).unwrap();
        assert!(matches!(orbital_radial(&orb, 0.0), Err(Error::PoleAtOrigin(_))));
        assert!(orbital_radial(&orb, 1e-3).unwrap().is_finite());
    }
}
