use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A direction on the unit sphere: polar angle in [0, π], azimuth in [0, 2π).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngularPair {
    theta: f64,
    phi: f64,
}

impl AngularPair {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::Domain(format!("theta = {theta} outside [0, pi]")));
        }
        if !(0.0..TAU).contains(&phi) {
            return Err(Error::Domain(format!("phi = {phi} outside [0, 2pi)")));
        }
        Ok(Self { theta, phi })
    }

    /// Like [`AngularPair::new`] but reduces `phi` modulo 2π first.
    pub fn wrapped(theta: f64, phi: f64) -> Result<Self> {
        let mut phi = phi.rem_euclid(TAU);
        if phi >= TAU {
            phi = 0.0;
        }
        Self::new(theta, phi)
    }

    /// Radius and direction of a Cartesian point; the origin maps to θ = 0.
    pub fn from_cartesian(p: [f64; 3]) -> (f64, Self) {
        let rho2 = p[0] * p[0] + p[1] * p[1];
        let r = (rho2 + p[2] * p[2]).sqrt();
        if r == 0.0 {
            return (0.0, Self { theta: 0.0, phi: 0.0 });
        }
        let theta = rho2.sqrt().atan2(p[2]);
        let mut phi = p[1].atan2(p[0]);
        if phi < 0.0 {
            phi += TAU;
        }
        if phi >= TAU {
            phi = 0.0;
        }
        (r, Self { theta, phi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn unit_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }
}

/// Flat index of (l, m) in arrays holding every harmonic with degree ≤ l_max.
#[inline]
pub fn lm_index(l: u32, m: i32) -> usize {
    let l = l as i64;
    (l * l + l + i64::from(m)) as usize
}

/// Fully normalised associated Legendre values P̄_l^m(cos θ) for l = m..=l_max,
/// including the Condon–Shortley phase, so that Y_l^m = P̄_l^m e^{imφ}.
fn normalized_legendre_column(m: u32, l_max: u32, cos_t: f64, sin_t: f64, out: &mut Vec<f64>) {
    out.clear();
    let mut pmm = 1.0 / (4.0 * PI).sqrt();
    for k in 1..=m {
        let kf = f64::from(k);
        pmm *= -((2.0 * kf + 1.0) / (2.0 * kf)).sqrt() * sin_t;
    }
    out.push(pmm);
    if l_max == m {
        return;
    }
    let mf = f64::from(m);
    out.push((2.0 * mf + 3.0).sqrt() * cos_t * pmm);
    for l in (m + 2)..=l_max {
        let lf = f64::from(l);
        let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
        let lm1 = lf - 1.0;
        let b = ((lm1 * lm1 - mf * mf) / (4.0 * lm1 * lm1 - 1.0)).sqrt();
        let idx = (l - m) as usize;
        let next = a * (cos_t * out[idx - 1] - b * out[idx - 2]);
        out.push(next);
    }
}

/// Complex spherical harmonic Y_l^m with the Condon–Shortley phase.
pub fn spherical_harmonic(l: u32, m: i32, dir: AngularPair) -> Result<Complex64> {
    if m.unsigned_abs() > l {
        return Err(Error::Domain(format!("|m| = {} exceeds l = {l}", m.abs())));
    }
    let (sin_t, cos_t) = dir.theta.sin_cos();
    let mut col = Vec::with_capacity((l + 1) as usize);
    let am = m.unsigned_abs();
    normalized_legendre_column(am, l, cos_t, sin_t, &mut col);
    let p = col[(l - am) as usize];
    let y = Complex64::from_polar(p, f64::from(am as i32) * dir.phi);
    if m >= 0 {
        Ok(y)
    } else if am % 2 == 0 {
        Ok(y.conj())
    } else {
        Ok(-y.conj())
    }
}

/// Every Y_l^m with l ≤ l_max, laid out by [`lm_index`].
pub fn spherical_harmonics_upto(l_max: u32, dir: AngularPair, out: &mut Vec<Complex64>) {
    let n = ((l_max + 1) * (l_max + 1)) as usize;
    out.clear();
    out.resize(n, Complex64::new(0.0, 0.0));
    let (sin_t, cos_t) = dir.theta.sin_cos();
    let mut col = Vec::with_capacity((l_max + 1) as usize);
    for m in 0..=l_max {
        let phase = Complex64::from_polar(1.0, f64::from(m) * dir.phi);
        normalized_legendre_column(m, l_max, cos_t, sin_t, &mut col);
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        for l in m..=l_max {
            let y = phase * col[(l - m) as usize];
            let mi = m as i32;
            out[lm_index(l, mi)] = y;
            if m > 0 {
                out[lm_index(l, -mi)] = y.conj() * sign;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dir(theta: f64, phi: f64) -> AngularPair {
        AngularPair::new(theta, phi).unwrap()
    }

    #[test]
    fn constant_and_dipole() {
        let y00 = spherical_harmonic(0, 0, dir(1.1, 2.0)).unwrap();
        assert!((y00.re - 0.282_094_791_8).abs() < 1e-10);
        assert_eq!(y00.im, 0.0);
        let y10 = spherical_harmonic(1, 0, dir(0.0, 0.0)).unwrap();
        assert!((y10.re - 0.488_602_511_9).abs() < 1e-10);
    }

    #[test]
    fn explicit_low_order_forms() {
        let d = dir(0.7, 1.3);
        let (st, ct) = d.theta.sin_cos();
        let y11 = spherical_harmonic(1, 1, d).unwrap();
        let expect = Complex64::from_polar(-(3.0 / (8.0 * PI)).sqrt() * st, d.phi);
        assert!((y11 - expect).norm() < 1e-15);
        let y20 = spherical_harmonic(2, 0, d).unwrap();
        let expect = (5.0 / (16.0 * PI)).sqrt() * (3.0 * ct * ct - 1.0);
        assert!((y20.re - expect).abs() < 1e-15);
        let y2m2 = spherical_harmonic(2, -2, d).unwrap();
        let expect = Complex64::from_polar((15.0 / (32.0 * PI)).sqrt() * st * st, -2.0 * d.phi);
        assert!((y2m2 - expect).norm() < 1e-15);
    }

    #[test]
    fn rejects_out_of_range_m() {
        assert!(matches!(
            spherical_harmonic(1, 2, dir(0.3, 0.3)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn batch_matches_single() {
        let d = dir(2.1, 4.4);
        let mut all = Vec::new();
        spherical_harmonics_upto(6, d, &mut all);
        for l in 0..=6u32 {
            for m in -(l as i32)..=(l as i32) {
                let single = spherical_harmonic(l, m, d).unwrap();
                assert!((all[lm_index(l, m)] - single).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn angle_validation_and_wrapping() {
        assert!(AngularPair::new(-0.1, 0.0).is_err());
        assert!(AngularPair::new(0.1, TAU).is_err());
        let w = AngularPair::wrapped(0.5, 0.75 + TAU).unwrap();
        assert_eq!(w.phi(), 0.75);
        let (r, d) = AngularPair::from_cartesian([0.0, -2.0, 0.0]);
        assert_eq!(r, 2.0);
        assert!((d.theta() - PI / 2.0).abs() < 1e-15);
        assert!((d.phi() - 1.5 * PI).abs() < 1e-15);
    }
}
