use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::HalfInteger;

/// The sign t ∈ {+1, −1} fixing j = l + t·s and l′ = l + t.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i32", into = "i32")]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn value(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.value())
    }
}

impl TryFrom<i32> for Sign {
    type Error = Error;
    fn try_from(v: i32) -> Result<Self> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(Error::Domain(format!("t must be +1 or -1, got {v}"))),
        }
    }
}

impl From<Sign> for i32 {
    fn from(s: Sign) -> i32 {
        s.value()
    }
}

/// Spinor quantum numbers (s, n, l, j, m_j, t) with j = l + t·s.
///
/// Only n ≥ l + 1 is required: when the lower-block orbital (n, l′) does not
/// exist its components vanish and the norm factor absorbs the loss.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinorQN {
    s: HalfInteger,
    n: u32,
    l: u32,
    j: HalfInteger,
    m_j: HalfInteger,
    t: Sign,
}

impl SpinorQN {
    pub fn new(s: HalfInteger, n: u32, l: u32, j: HalfInteger, m_j: HalfInteger, t: Sign) -> Result<Self> {
        if !s.is_half_odd() || s.twice() < 1 {
            return Err(Error::Domain(format!("spin s = {s} must be half-integral and at least 1/2")));
        }
        let expected_j = HalfInteger::from_int(l as i32) + HalfInteger::from_twice(t.value() * s.twice());
        if j != expected_j {
            return Err(Error::Domain(format!("j = {j} must equal l + t*s = {expected_j}")));
        }
        if j.twice() < 1 {
            return Err(Error::Domain(format!("j = l + t*s = {j} must be at least 1/2")));
        }
        if !m_j.is_half_odd() || m_j.abs() > j {
            return Err(Error::Domain(format!("m_j = {m_j} must be half-integral with |m_j| <= j = {j}")));
        }
        if n < l + 1 {
            return Err(Error::Domain(format!("n = {n} must exceed l = {l}")));
        }
        Ok(Self { s, n, l, j, m_j, t })
    }

    /// Constructor from doubled spin and projection; j follows from l, t and s.
    pub fn from_twice(s2: i32, n: u32, l: u32, t: Sign, mj2: i32) -> Result<Self> {
        let s = HalfInteger::from_twice(s2);
        let j = HalfInteger::from_int(l as i32) + HalfInteger::from_twice(t.value() * s2);
        Self::new(s, n, l, j, HalfInteger::from_twice(mj2), t)
    }

    pub fn s(&self) -> HalfInteger {
        self.s
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn j(&self) -> HalfInteger {
        self.j
    }

    pub fn m_j(&self) -> HalfInteger {
        self.m_j
    }

    pub fn t(&self) -> Sign {
        self.t
    }

    /// η_t = t.
    pub fn eta(&self) -> f64 {
        self.t.as_f64()
    }

    /// l′ = l + t, the orbital momentum of the lower block.
    pub fn l_prime(&self) -> u32 {
        (self.l as i32 + self.t.value()) as u32
    }

    /// Number of components 2(2s + 1).
    pub fn component_count(&self) -> usize {
        2 * (self.s.twice() as usize + 1)
    }

    /// m(λ) = m_j − s + λ as an integer.
    pub fn m_of(&self, lambda: i32) -> i32 {
        (self.m_j.twice() - self.s.twice()) / 2 + lambda
    }

    /// Every valid spinor label with n ≤ n_max for the given spin.
    pub fn enumerate(s: HalfInteger, n_max: u32) -> Vec<SpinorQN> {
        let mut out = Vec::new();
        for n in 1..=n_max {
            for l in 0..n {
                for t in [Sign::Plus, Sign::Minus] {
                    let j2 = 2 * l as i32 + t.value() * s.twice();
                    if j2 < 1 {
                        continue;
                    }
                    for mj2 in (-j2..=j2).step_by(2) {
                        if let Ok(qn) = SpinorQN::from_twice(s.twice(), n, l, t, mj2) {
                            out.push(qn);
                        }
                    }
                }
            }
        }
        out
    }
}

impl std::fmt::Display for SpinorQN {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "(s={}, n={}, l={}, j={}, m_j={}, t={:+})",
            self.s,
            self.n,
            self.l,
            self.j,
            self.m_j,
            self.t.value()
        )
    }
}
