use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar_basis::{
    eval_scalar, hankel_rule_for, momentum_radial_with, orbital_radial, EvaluationPoint, RadialFamily, ScalarOrbital,
    ScalarQN, Space,
};
use crate::specfun::{clebsch_gordan, spherical_harmonic, HalfInteger};

use super::qn::{Sign, SpinorQN};

/// a^{ls}_{j m_j}(λ) = ⟨l, m_j − s + λ; s, s − λ | j m_j⟩; zero for λ outside [0, 2s].
pub fn spinor_coefficient(l: u32, s: HalfInteger, j: HalfInteger, m_j: HalfInteger, lambda: i32) -> f64 {
    if lambda < 0 || lambda > s.twice() {
        return 0.0;
    }
    let lam = HalfInteger::from_int(lambda);
    let m_l = m_j - s + lam;
    let m_s = s - lam;
    clebsch_gordan(HalfInteger::from_int(l as i32), m_l, s, m_s, j, m_j)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Block {
    #[serde(rename = "UPPER")]
    Upper,
    #[serde(rename = "LOWER")]
    Lower,
}

/// One of the 2(2s+1) spinor slots: a coefficient on the scalar orbital
/// (n, orbital_l, m).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComponentWeight {
    pub lambda: u32,
    pub block: Block,
    pub coefficient: Complex64,
    pub orbital_l: u32,
    pub m: i32,
}

impl ComponentWeight {
    pub fn is_zero(&self) -> bool {
        self.coefficient == Complex64::new(0.0, 0.0)
    }
}

/// An assembled 2(2s+1)-component spinor orbital.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorOrbital {
    pub qn: SpinorQN,
    pub family: RadialFamily,
    pub barred: bool,
    /// Global factor making ∫ K†K dV_w = 1.
    pub norm: f64,
    pub components: Vec<ComponentWeight>,
}

/// Builds the component list: the upper half carries η_t (−1)^λ a^{ls}(λ) on
/// (n, l, m(λ)) for λ = 0..=2s; the lower half, block pairs (λ, λ+1) in
/// descending block order, carries −i a^{l′s}(2s − λ) on (n, l′, m(λ)).
/// A slot whose scalar orbital does not exist has coefficient exactly zero.
pub fn assemble_spinor(qn: SpinorQN, family: RadialFamily, barred: bool) -> Result<SpinorOrbital> {
    if barred && !family.is_eto() {
        return Err(Error::Unsupported("barred spinors are defined only for ETO families".into()));
    }
    let s2 = qn.s().twice();
    let (n, l, lp) = (qn.n(), qn.l(), qn.l_prime());
    let exists = |orbital_l: u32, m: i32| ScalarQN::exists(n, i64::from(orbital_l), i64::from(m));
    let mut components = Vec::with_capacity(qn.component_count());

    for lambda in 0..=s2 {
        let m = qn.m_of(lambda);
        let sign = if lambda % 2 == 0 { 1.0 } else { -1.0 };
        let a = spinor_coefficient(l, qn.s(), qn.j(), qn.m_j(), lambda);
        let coefficient = if exists(l, m) { Complex64::new(qn.eta() * sign * a, 0.0) } else { Complex64::new(0.0, 0.0) };
        components.push(ComponentWeight { lambda: lambda as u32, block: Block::Upper, coefficient, orbital_l: l, m });
    }
    let mut block = s2 - 1;
    while block >= 0 {
        for lambda in [block, block + 1] {
            let m = qn.m_of(lambda);
            let a = spinor_coefficient(lp, qn.s(), qn.j(), qn.m_j(), s2 - lambda);
            let coefficient = if exists(lp, m) { Complex64::new(0.0, -a) } else { Complex64::new(0.0, 0.0) };
            components.push(ComponentWeight { lambda: lambda as u32, block: Block::Lower, coefficient, orbital_l: lp, m });
        }
        block -= 2;
    }
    for c in components.iter_mut() {
        if c.coefficient.norm() == 0.0 {
            c.coefficient = Complex64::new(0.0, 0.0);
        }
    }
    let total: f64 = components.iter().map(|c| c.coefficient.norm_sqr()).sum();
    if total == 0.0 {
        return Err(Error::Domain(format!("spinor {qn} has no non-vanishing component")));
    }
    Ok(SpinorOrbital { qn, family, barred, norm: 1.0 / total.sqrt(), components })
}

impl SpinorOrbital {
    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    /// Scalar orbital behind component `i`, or None for a vanishing slot.
    pub fn scalar_orbital(&self, i: usize, space: Space) -> Option<ScalarOrbital> {
        let c = &self.components[i];
        if c.is_zero() {
            return None;
        }
        let qn = ScalarQN::new(self.qn.n(), c.orbital_l, c.m).ok()?;
        ScalarOrbital::new(self.family, qn, self.barred, space).ok()
    }

    /// norm × coefficient for component `i`.
    pub fn weight(&self, i: usize) -> Complex64 {
        self.components[i].coefficient * self.norm
    }

    /// The same spinor with barred scalar factors.
    pub fn as_barred(&self, barred: bool) -> Result<SpinorOrbital> {
        if barred && !self.family.is_eto() {
            return Err(Error::Unsupported("barred spinors are defined only for ETO families".into()));
        }
        Ok(SpinorOrbital { barred, ..self.clone() })
    }
}

/// Radial factors of the two scalar blocks at one point (computed once each).
fn block_radials(orb: &SpinorOrbital, pt: &EvaluationPoint) -> Result<[Option<Complex64>; 2]> {
    let mut out = [None, None];
    for (slot, block) in [Block::Upper, Block::Lower].into_iter().enumerate() {
        let Some(c) = orb.components.iter().find(|c| c.block == block && !c.is_zero()) else {
            continue;
        };
        let qn = ScalarQN::new(orb.qn.n(), c.orbital_l, c.m)?;
        let scalar = ScalarOrbital::new(orb.family, qn, orb.barred, pt.space)?;
        out[slot] = Some(match pt.space {
            Space::Position => Complex64::new(orbital_radial(&scalar, pt.radius)?, 0.0),
            Space::Momentum => momentum_radial_with(&scalar, &hankel_rule_for(&scalar, pt.radius)),
        });
    }
    Ok(out)
}

/// All 2(2s+1) component values norm · coefficient · k_{n l m}(pt).
pub fn eval_spinor(orb: &SpinorOrbital, pt: &EvaluationPoint) -> Result<Vec<Complex64>> {
    let radials = block_radials(orb, pt)?;
    let mut out = Vec::with_capacity(orb.components.len());
    for c in &orb.components {
        if c.is_zero() {
            out.push(Complex64::new(0.0, 0.0));
            continue;
        }
        let radial = radials[if c.block == Block::Upper { 0 } else { 1 }].expect("non-zero block has a radial factor");
        out.push(c.coefficient * orb.norm * radial * spherical_harmonic(c.orbital_l, c.m, pt.dir)?);
    }
    Ok(out)
}

/// Slow reference evaluation through [`eval_scalar`] per component.
pub fn eval_spinor_by_components(orb: &SpinorOrbital, pt: &EvaluationPoint) -> Result<Vec<Complex64>> {
    (0..orb.components.len())
        .map(|i| match orb.scalar_orbital(i, pt.space) {
            Some(s) => Ok(orb.weight(i) * eval_scalar(&s, pt)?),
            None => Ok(Complex64::new(0.0, 0.0)),
        })
        .collect()
}

/// K_a† K_b at a point: Σ_i conj(a_i) b_i.
pub fn contract(a: &SpinorOrbital, b: &SpinorOrbital, pt: &EvaluationPoint) -> Result<Complex64> {
    check_compatible(a, b)?;
    let va = eval_spinor(a, pt)?;
    let vb = eval_spinor(b, pt)?;
    Ok(va.iter().zip(&vb).map(|(x, y)| x.conj() * y).sum())
}

pub(crate) fn check_compatible(a: &SpinorOrbital, b: &SpinorOrbital) -> Result<()> {
    if a.qn.s() != b.qn.s() {
        return Err(Error::Usage(format!("spins differ: {} vs {}", a.qn.s(), b.qn.s())));
    }
    Ok(())
}

/// Canonical JSON interchange form of a spinor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinorDescriptor {
    pub s2: i32,
    pub n: u32,
    pub l: u32,
    pub j2: i32,
    pub mj2: i32,
    pub t: i32,
    pub family: RadialFamily,
    pub barred: bool,
    pub norm: f64,
    pub components: Vec<ComponentDescriptor>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComponentDescriptor {
    pub lambda: u32,
    pub block: Block,
    pub coeff_re: f64,
    pub coeff_im: f64,
    pub l: u32,
    pub m: i32,
}

impl From<&SpinorOrbital> for SpinorDescriptor {
    fn from(o: &SpinorOrbital) -> Self {
        Self {
            s2: o.qn.s().twice(),
            n: o.qn.n(),
            l: o.qn.l(),
            j2: o.qn.j().twice(),
            mj2: o.qn.m_j().twice(),
            t: o.qn.t().value(),
            family: o.family,
            barred: o.barred,
            norm: o.norm,
            components: o
                .components
                .iter()
                .map(|c| ComponentDescriptor {
                    lambda: c.lambda,
                    block: c.block,
                    coeff_re: c.coefficient.re,
                    coeff_im: c.coefficient.im,
                    l: c.orbital_l,
                    m: c.m,
                })
                .collect(),
        }
    }
}

/// Tolerance for accepting externally supplied coefficients against reassembly.
pub const DESCRIPTOR_TOLERANCE: f64 = 1e-12;

impl TryFrom<SpinorDescriptor> for SpinorOrbital {
    type Error = Error;
    fn try_from(d: SpinorDescriptor) -> Result<Self> {
        let qn = SpinorQN::new(
            HalfInteger::from_twice(d.s2),
            d.n,
            d.l,
            HalfInteger::from_twice(d.j2),
            HalfInteger::from_twice(d.mj2),
            Sign::try_from(d.t)?,
        )?;
        let reference = assemble_spinor(qn, d.family, d.barred)?;
        if d.components.len() != reference.components.len() {
            return Err(Error::Domain(format!(
                "descriptor has {} components, expected {}",
                d.components.len(),
                reference.components.len()
            )));
        }
        let mut components = Vec::with_capacity(d.components.len());
        for (c, r) in d.components.iter().zip(&reference.components) {
            let coefficient = Complex64::new(c.coeff_re, c.coeff_im);
            if c.lambda != r.lambda
                || c.block != r.block
                || c.l != r.orbital_l
                || c.m != r.m
                || (coefficient - r.coefficient).norm() > DESCRIPTOR_TOLERANCE
            {
                return Err(Error::Domain(format!("component {c:?} disagrees with the assembled spinor {qn}")));
            }
            components.push(ComponentWeight { lambda: c.lambda, block: c.block, coefficient, orbital_l: c.l, m: c.m });
        }
        if (d.norm - reference.norm).abs() > DESCRIPTOR_TOLERANCE {
            return Err(Error::Domain(format!("norm {} disagrees with {}", d.norm, reference.norm)));
        }
        Ok(SpinorOrbital { qn, family: d.family, barred: d.barred, norm: d.norm, components })
    }
}

impl Serialize for SpinorOrbital {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SpinorDescriptor::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SpinorOrbital {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let d = SpinorDescriptor::deserialize(deserializer)?;
        SpinorOrbital::try_from(d).map_err(serde::de::Error::custom)
    }
}
