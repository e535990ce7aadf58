//! Seeded sample points and a per-point cache of scalar orbital values.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar_basis::{
    hankel_rule_for, momentum_radial_with, orbital_radial, EvaluationPoint, RadialFamily, ScalarOrbital, ScalarQN,
    Space,
};
use crate::specfun::{lm_index, spherical_harmonics_upto, AngularPair};
use crate::spinor_basis::{Block, SpinorOrbital};

/// Reproducible pseudo-random points: radius uniform in (0, max_radius],
/// direction uniform on the sphere.
pub fn sample_points(seed: u64, count: usize, space: Space, max_radius: f64) -> Vec<EvaluationPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let radius = max_radius * (1.0 - rng.random::<f64>());
            let cos_t: f64 = 1.0 - 2.0 * rng.random::<f64>();
            let phi = 2.0 * PI * rng.random::<f64>();
            let dir = AngularPair::new(cos_t.clamp(-1.0, 1.0).acos(), phi.min(2.0 * PI - 1e-15))
                .expect("sampled angles are in range");
            EvaluationPoint { space, radius, dir }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct RadialKey {
    family: (u8, i32, u64),
    n: u32,
    l: u32,
    barred: bool,
}

impl RadialKey {
    fn new(family: RadialFamily, n: u32, l: u32, barred: bool) -> Self {
        let kind = if family.is_eto() { 0 } else { 1 };
        Self { family: (kind, family.alpha(), family.zeta().to_bits()), n, l, barred }
    }
}

/// Scalar orbital values at a fixed point set, computed once per radial
/// factor (n, l) and family and reused across every spinor that needs them.
#[derive(Debug, Clone)]
pub struct OrbitalSampler {
    points: Vec<EvaluationPoint>,
    space: Space,
    l_max: u32,
    harmonics: Vec<Vec<Complex64>>,
    radial: HashMap<RadialKey, Vec<Complex64>>,
}

impl OrbitalSampler {
    pub fn new(points: Vec<EvaluationPoint>, l_max: u32) -> Result<Self> {
        let space = points.first().map_or(Space::Position, |p| p.space);
        if points.iter().any(|p| p.space != space) {
            return Err(Error::Usage("sample points mix position and momentum space".into()));
        }
        let harmonics = points
            .iter()
            .map(|p| {
                let mut ys = Vec::new();
                spherical_harmonics_upto(l_max, p.dir, &mut ys);
                ys
            })
            .collect();
        Ok(Self { points, space, l_max, harmonics, radial: HashMap::new() })
    }

    pub fn points(&self) -> &[EvaluationPoint] {
        &self.points
    }

    pub fn space(&self) -> Space {
        self.space
    }

    fn ensure_radial(&mut self, family: RadialFamily, n: u32, l: u32, barred: bool) -> Result<()> {
        let key = RadialKey::new(family, n, l, barred);
        if self.radial.contains_key(&key) {
            return Ok(());
        }
        let orb = ScalarOrbital::new(family, ScalarQN::new(n, l, 0)?, barred, self.space)?;
        let values: Result<Vec<Complex64>> = self
            .points
            .par_iter()
            .map(|p| match self.space {
                Space::Position => Ok(Complex64::new(orbital_radial(&orb, p.radius)?, 0.0)),
                Space::Momentum => Ok(momentum_radial_with(&orb, &hankel_rule_for(&orb, p.radius))),
            })
            .collect();
        self.radial.insert(key, values?);
        Ok(())
    }

    /// Makes the radial factors of both blocks of `orb` available.
    pub fn prepare(&mut self, orb: &SpinorOrbital) -> Result<()> {
        for c in orb.components.iter().filter(|c| !c.is_zero()) {
            if c.orbital_l > self.l_max {
                return Err(Error::Usage(format!("sampler built for l <= {}, needs {}", self.l_max, c.orbital_l)));
            }
            self.ensure_radial(orb.family, orb.qn.n(), c.orbital_l, orb.barred)?;
        }
        Ok(())
    }

    pub fn prepare_scalar(&mut self, family: RadialFamily, qn: ScalarQN, barred: bool) -> Result<()> {
        if qn.l() > self.l_max {
            return Err(Error::Usage(format!("sampler built for l <= {}, needs {}", self.l_max, qn.l())));
        }
        self.ensure_radial(family, qn.n(), qn.l(), barred)
    }

    /// Value of the scalar orbital at point `p`; the radial factor must have
    /// been prepared.
    pub fn scalar(&self, family: RadialFamily, qn: ScalarQN, barred: bool, p: usize) -> Complex64 {
        let key = RadialKey::new(family, qn.n(), qn.l(), barred);
        let radial = self.radial.get(&key).expect("radial factor prepared before use")[p];
        radial * self.harmonics[p][lm_index(qn.l(), qn.m())]
    }

    /// All component values of a prepared spinor at point `p`.
    pub fn spinor(&self, orb: &SpinorOrbital, p: usize) -> Vec<Complex64> {
        orb.components
            .iter()
            .map(|c| {
                if c.is_zero() {
                    return Complex64::new(0.0, 0.0);
                }
                let key = RadialKey::new(orb.family, orb.qn.n(), c.orbital_l, orb.barred);
                let radial = self.radial.get(&key).expect("spinor prepared before use")[p];
                debug_assert!(matches!(c.block, Block::Upper | Block::Lower));
                c.coefficient * orb.norm * radial * self.harmonics[p][lm_index(c.orbital_l, c.m)]
            })
            .collect()
    }
}
