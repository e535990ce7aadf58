use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::AngularPair;

/// Scalar quantum numbers (n, l, m) with 0 ≤ l ≤ n − 1 and |m| ≤ l.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawQN", into = "RawQN")]
pub struct ScalarQN {
    n: u32,
    l: u32,
    m: i32,
}

#[derive(Serialize, Deserialize)]
struct RawQN {
    n: u32,
    l: u32,
    m: i32,
}

impl TryFrom<RawQN> for ScalarQN {
    type Error = Error;
    fn try_from(raw: RawQN) -> Result<Self> {
        ScalarQN::new(raw.n, raw.l, raw.m)
    }
}

impl From<ScalarQN> for RawQN {
    fn from(qn: ScalarQN) -> Self {
        RawQN { n: qn.n, l: qn.l, m: qn.m }
    }
}

impl ScalarQN {
    pub fn new(n: u32, l: u32, m: i32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("principal quantum number n must be at least 1".into()));
        }
        if l >= n {
            return Err(Error::Domain(format!("l = {l} must be below n = {n}")));
        }
        if m.unsigned_abs() > l {
            return Err(Error::Domain(format!("|m| = {} exceeds l = {l}", m.unsigned_abs())));
        }
        Ok(Self { n, l, m })
    }

    /// Whether (n, l, m) would be valid, without constructing it.
    pub fn exists(n: u32, l: i64, m: i64) -> bool {
        n >= 1 && l >= 0 && (l as u64) < u64::from(n) && m.abs() <= l
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn m(&self) -> i32 {
        self.m
    }

    /// Every (n, l, m) with n ≤ n_max and l ≤ l_max, in canonical (n, l, m) order.
    pub fn enumerate(n_max: u32, l_max: u32) -> Vec<ScalarQN> {
        let mut out = Vec::new();
        for n in 1..=n_max {
            for l in 0..n.min(l_max + 1) {
                for m in -(l as i32)..=(l as i32) {
                    out.push(ScalarQN { n, l, m });
                }
            }
        }
        out
    }
}

impl std::fmt::Display for ScalarQN {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.n, self.l, self.m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyKind {
    #[serde(rename = "ETO_ALPHA")]
    EtoAlpha,
    #[serde(rename = "STO")]
    Sto,
}

/// A radial family: the ψ^α exponential-type set (complete and orthonormal
/// under w_α(r) = (2ζr)^{−α}) or Slater-type orbitals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFamily", into = "RawFamily")]
pub struct RadialFamily {
    kind: FamilyKind,
    alpha: i32,
    zeta: f64,
}

#[derive(Serialize, Deserialize)]
struct RawFamily {
    kind: FamilyKind,
    #[serde(default)]
    alpha: i32,
    zeta: f64,
}

impl TryFrom<RawFamily> for RadialFamily {
    type Error = Error;
    fn try_from(raw: RawFamily) -> Result<Self> {
        match raw.kind {
            FamilyKind::EtoAlpha => RadialFamily::eto(raw.alpha, raw.zeta),
            FamilyKind::Sto => RadialFamily::sto(raw.zeta),
        }
    }
}

impl From<RadialFamily> for RawFamily {
    fn from(f: RadialFamily) -> Self {
        RawFamily { kind: f.kind, alpha: f.alpha, zeta: f.zeta }
    }
}

pub const ALLOWED_ALPHAS: [i32; 4] = [1, 0, -1, -2];

fn check_zeta(zeta: f64) -> Result<()> {
    if zeta.is_finite() && zeta > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("orbital exponent must be positive and finite, got {zeta}")))
    }
}

impl RadialFamily {
    pub fn eto(alpha: i32, zeta: f64) -> Result<Self> {
        if !ALLOWED_ALPHAS.contains(&alpha) {
            return Err(Error::Domain(format!("alpha = {alpha} not in {{1, 0, -1, -2}}")));
        }
        check_zeta(zeta)?;
        Ok(Self { kind: FamilyKind::EtoAlpha, alpha, zeta })
    }

    pub fn sto(zeta: f64) -> Result<Self> {
        check_zeta(zeta)?;
        Ok(Self { kind: FamilyKind::Sto, alpha: 0, zeta })
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    /// α for ETO families; 0 for STO.
    pub fn alpha(&self) -> i32 {
        self.alpha
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    pub fn is_eto(&self) -> bool {
        self.kind == FamilyKind::EtoAlpha
    }

    /// Same family with a different exponent.
    pub fn with_zeta(&self, zeta: f64) -> Result<Self> {
        check_zeta(zeta)?;
        Ok(Self { zeta, ..*self })
    }

    /// Family weight w(r): (2ζr)^{−α} for ETO, 1 for STO.
    pub fn weight(&self, r: f64) -> f64 {
        match self.alpha {
            0 => 1.0,
            a => (2.0 * self.zeta * r).powi(-a),
        }
    }
}

impl std::fmt::Display for RadialFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.kind {
            FamilyKind::EtoAlpha => write!(f, "ETO(alpha={}, zeta={})", self.alpha, self.zeta),
            FamilyKind::Sto => write!(f, "STO(zeta={})", self.zeta),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Space {
    #[serde(rename = "POSITION")]
    Position,
    #[serde(rename = "MOMENTUM")]
    Momentum,
}

/// A single scalar basis function: family, quantum numbers, barred dual flag
/// and representation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawOrbital", into = "RawOrbital")]
pub struct ScalarOrbital {
    family: RadialFamily,
    qn: ScalarQN,
    barred: bool,
    space: Space,
}

#[derive(Serialize, Deserialize)]
struct RawOrbital {
    family: RadialFamily,
    qn: ScalarQN,
    #[serde(default)]
    barred: bool,
    space: Space,
}

impl TryFrom<RawOrbital> for ScalarOrbital {
    type Error = Error;
    fn try_from(raw: RawOrbital) -> Result<Self> {
        ScalarOrbital::new(raw.family, raw.qn, raw.barred, raw.space)
    }
}

impl From<ScalarOrbital> for RawOrbital {
    fn from(o: ScalarOrbital) -> Self {
        RawOrbital { family: o.family, qn: o.qn, barred: o.barred, space: o.space }
    }
}

impl ScalarOrbital {
    pub fn new(family: RadialFamily, qn: ScalarQN, barred: bool, space: Space) -> Result<Self> {
        if barred && !family.is_eto() {
            return Err(Error::Unsupported("barred duals exist only for ETO families".into()));
        }
        Ok(Self { family, qn, barred, space })
    }

    pub fn position(family: RadialFamily, qn: ScalarQN) -> Self {
        Self { family, qn, barred: false, space: Space::Position }
    }

    pub fn family(&self) -> RadialFamily {
        self.family
    }

    pub fn qn(&self) -> ScalarQN {
        self.qn
    }

    pub fn barred(&self) -> bool {
        self.barred
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn in_space(&self, space: Space) -> Self {
        Self { space, ..*self }
    }

    pub fn as_barred(&self, barred: bool) -> Result<Self> {
        Self::new(self.family, self.qn, barred, self.space)
    }
}

/// A point in position (r, θ, φ) or momentum (k, θ_k, φ_k) space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvaluationPoint {
    pub space: Space,
    pub radius: f64,
    pub dir: AngularPair,
}

impl EvaluationPoint {
    pub fn new(space: Space, radius: f64, dir: AngularPair) -> Result<Self> {
        if !(radius.is_finite() && radius >= 0.0) {
            return Err(Error::Domain(format!("radius must be finite and non-negative, got {radius}")));
        }
        Ok(Self { space, radius, dir })
    }

    pub fn from_cartesian(space: Space, p: [f64; 3]) -> Self {
        let (radius, dir) = AngularPair::from_cartesian(p);
        Self { space, radius, dir }
    }

    pub fn cartesian(&self) -> [f64; 3] {
        let u = self.dir.unit_vector();
        [self.radius * u[0], self.radius * u[1], self.radius * u[2]]
    }
}
