//! Exact-rational Clebsch–Gordan coefficients.
//!
//! A CG coefficient is sign · sqrt(q) with q rational. This module evaluates the
//! Racah sum in big-integer arithmetic, independently of the floating-point path,
//! and is used to tabulate residuals and to check the production routine.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::coupling::coupling;
use super::HalfInteger;

/// sign · sqrt(square), exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactCoefficient {
    pub sign: i8,
    pub square: BigRational,
}

impl ExactCoefficient {
    pub fn zero() -> Self {
        Self {
            sign: 0,
            square: BigRational::zero(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.sign == 0 {
            return 0.0;
        }
        let sq = ratio_to_f64(&self.square);
        f64::from(self.sign) * sq.sqrt()
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    // Scale numerator to keep ~60 significant bits before dividing.
    let num = r.numer();
    let den = r.denom();
    let shift = den.bits() as i64 - num.bits() as i64 + 64;
    let scaled: BigInt = if shift >= 0 {
        (num << shift as usize) / den
    } else {
        num / (den << (-shift) as usize)
    };
    scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-shift as i32)
}

fn big_factorial(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    acc
}

/// Exact ⟨j1 m1; j2 m2 | J M⟩.
pub fn clebsch_gordan_exact(
    j1: HalfInteger,
    m1: HalfInteger,
    j2: HalfInteger,
    m2: HalfInteger,
    j: HalfInteger,
    m: HalfInteger,
) -> ExactCoefficient {
    let Some(cp) = coupling(j1, m1, j2, m2, j, m) else {
        return ExactCoefficient::zero();
    };
    let [a, b, c] = cp.prefactor_args;
    let mut num = BigInt::from(cp.twice_j + 1) * big_factorial(a) * big_factorial(b) * big_factorial(c);
    for arg in cp.projection_args {
        num *= big_factorial(arg);
    }
    let pref = BigRational::new(num, big_factorial(cp.prefactor_den));

    let mut sum = BigRational::zero();
    for k in cp.k_min..=cp.k_max {
        let ki = i64::from(k);
        let mut den = big_factorial(k);
        for (base, sign) in cp.denominator {
            den *= big_factorial((base + sign * ki) as u32);
        }
        let term = BigRational::new(BigInt::one(), den);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if sum.is_zero() {
        return ExactCoefficient::zero();
    }
    let sign = if sum.is_negative() { -1 } else { 1 };
    ExactCoefficient {
        sign,
        square: pref * &sum * &sum,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_thirds() {
        let h = HalfInteger::from_twice;
        let v = clebsch_gordan_exact(h(2), h(0), h(1), h(1), h(3), h(1));
        assert_eq!(v.sign, 1);
        assert_eq!(v.square, BigRational::new(2.into(), 3.into()));
        assert!((v.to_f64() - (2.0f64 / 3.0).sqrt()).abs() < 1e-16);
    }

    #[test]
    fn zero_when_invalid() {
        let h = HalfInteger::from_twice;
        assert_eq!(clebsch_gordan_exact(h(2), h(2), h(1), h(1), h(1), h(3)).sign, 0);
    }
}
