use std::f64::consts::PI;

use super::factorial::log_factorial;
use super::HalfInteger;
use crate::quadrature::CompensatedSum;

/// Twice-valued arguments of a ⟨j1 m1; j2 m2 | J M⟩ coefficient that passed every
/// selection rule, with the Racah-sum factorial arguments precomputed.
pub(crate) struct Coupling {
    pub prefactor_args: [u32; 3],
    pub prefactor_den: u32,
    pub twice_j: u32,
    pub projection_args: [u32; 6],
    pub k_min: u32,
    pub k_max: u32,
    pub denominator: [(i64, i64); 5],
}

fn halve(twice: i32) -> Option<u32> {
    if twice < 0 || twice % 2 != 0 {
        None
    } else {
        Some((twice / 2) as u32)
    }
}

/// Applies every selection rule; `None` means the coefficient is exactly zero.
pub(crate) fn coupling(
    j1: HalfInteger,
    m1: HalfInteger,
    j2: HalfInteger,
    m2: HalfInteger,
    j: HalfInteger,
    m: HalfInteger,
) -> Option<Coupling> {
    let (tj1, tm1, tj2, tm2, tj, tm) = (j1.twice(), m1.twice(), j2.twice(), m2.twice(), j.twice(), m.twice());
    if tj1 < 0 || tj2 < 0 || tj < 0 || tm1 + tm2 != tm {
        return None;
    }
    if tm1.abs() > tj1 || tm2.abs() > tj2 || tm.abs() > tj {
        return None;
    }
    // j + m integral for each pair, j1 + j2 + J integral, triangle.
    let a = halve(tj + tj1 - tj2)?;
    let b = halve(tj - tj1 + tj2)?;
    let c = halve(tj1 + tj2 - tj)?;
    let total = halve(tj1 + tj2 + tj)?;
    let projection_args = [
        halve(tj + tm)?,
        halve(tj - tm)?,
        halve(tj1 - tm1)?,
        halve(tj1 + tm1)?,
        halve(tj2 - tm2)?,
        halve(tj2 + tm2)?,
    ];
    // Racah sum denominators: k!, (c-k)!, (j1-m1-k)!, (j2+m2-k)!, (J-j2+m1+k)!, (J-j1-m2+k)!
    let d3 = i64::from(projection_args[2]);
    let d4 = i64::from(projection_args[5]);
    let d5 = i64::from((tj - tj2 + tm1) / 2);
    let d6 = i64::from((tj - tj1 - tm2) / 2);
    let k_min = 0i64.max(-d5).max(-d6);
    let k_max = i64::from(c).min(d3).min(d4);
    if k_min > k_max {
        return None;
    }
    Some(Coupling {
        prefactor_args: [a, b, c],
        prefactor_den: total + 1,
        twice_j: tj as u32,
        projection_args,
        k_min: k_min as u32,
        k_max: k_max as u32,
        denominator: [(i64::from(c), -1), (d3, -1), (d4, -1), (d5, 1), (d6, 1)],
    })
}

/// Clebsch–Gordan coefficient ⟨l m_l; s m_s | j m_j⟩ (Condon–Shortley convention).
///
/// Evaluated from the Racah closed-form sum in log-factorials with compensated
/// summation. Any invalid coupling yields exactly 0.0.
pub fn clebsch_gordan(
    l: HalfInteger,
    m_l: HalfInteger,
    s: HalfInteger,
    m_s: HalfInteger,
    j: HalfInteger,
    m_j: HalfInteger,
) -> f64 {
    let Some(cp) = coupling(l, m_l, s, m_s, j, m_j) else {
        return 0.0;
    };
    let [a, b, c] = cp.prefactor_args;
    let mut log_pref = f64::from(cp.twice_j + 1).ln() + log_factorial(a) + log_factorial(b) + log_factorial(c)
        - log_factorial(cp.prefactor_den);
    for arg in cp.projection_args {
        log_pref += log_factorial(arg);
    }
    let log_pref = 0.5 * log_pref;
    let mut sum = CompensatedSum::new();
    for k in cp.k_min..=cp.k_max {
        let ki = i64::from(k);
        let mut log_den = log_factorial(k);
        for (base, sign) in cp.denominator {
            log_den += log_factorial((base + sign * ki) as u32);
        }
        let term = (log_pref - log_den).exp();
        sum.add(if k % 2 == 0 { term } else { -term });
    }
    sum.value()
}

/// Integer-argument convenience wrapper around [`clebsch_gordan`].
pub fn clebsch_gordan_int(l1: i32, m1: i32, l2: i32, m2: i32, l: i32, m: i32) -> f64 {
    clebsch_gordan(l1.into(), m1.into(), l2.into(), m2.into(), l.into(), m.into())
}

/// Gaunt coefficient ∫ Y_{l1}^{m1} Y_{l2}^{m2} conj(Y_L^M) dΩ.
pub fn gaunt(l1: u32, m1: i32, l2: u32, m2: i32, big_l: u32, big_m: i32) -> f64 {
    if big_m != m1 + m2 || (l1 + l2 + big_l) % 2 == 1 {
        return 0.0;
    }
    if m1.unsigned_abs() > l1 || m2.unsigned_abs() > l2 || big_m.unsigned_abs() > big_l {
        return 0.0;
    }
    if big_l > l1 + l2 || big_l < l1.abs_diff(l2) {
        return 0.0;
    }
    let (l1i, l2i, li) = (l1 as i32, l2 as i32, big_l as i32);
    let pref = (f64::from((2 * l1 + 1) * (2 * l2 + 1)) / (4.0 * PI * f64::from(2 * big_l + 1))).sqrt();
    pref * clebsch_gordan_int(l1i, 0, l2i, 0, li, 0) * clebsch_gordan_int(l1i, m1, l2i, m2, li, big_m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(t: i32) -> HalfInteger {
        HalfInteger::from_twice(t)
    }

    #[test]
    fn spin_zero_and_stretched() {
        for l in 0..5 {
            for m in -l..=l {
                assert!((clebsch_gordan_int(l, m, 0, 0, l, m) - 1.0).abs() < 1e-14);
            }
        }
        for l2 in 0..8 {
            for s2 in [1, 3, 5] {
                let v = clebsch_gordan(h(l2), h(l2), h(s2), h(s2), h(l2 + s2), h(l2 + s2));
                assert!((v - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn known_half_integer_value() {
        let v = clebsch_gordan(h(2), h(0), h(1), h(1), h(3), h(1));
        assert!((v - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        // ⟨1 1; 1/2 -1/2 | 1/2 1/2⟩ = sqrt(2/3), ⟨1 0; 1/2 1/2 | 1/2 1/2⟩ = -sqrt(1/3)
        let v = clebsch_gordan(h(2), h(2), h(1), h(-1), h(1), h(1));
        assert!((v - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        let v = clebsch_gordan(h(2), h(0), h(1), h(1), h(1), h(1));
        assert!((v + (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn invalid_couplings_are_exact_zero() {
        assert_eq!(clebsch_gordan(h(2), h(0), h(1), h(1), h(3), h(3)), 0.0);
        assert_eq!(clebsch_gordan(h(2), h(4), h(1), h(1), h(5), h(5)), 0.0);
        assert_eq!(clebsch_gordan(h(2), h(0), h(1), h(1), h(7), h(1)), 0.0);
        // integral j with half-integral m
        assert_eq!(clebsch_gordan(h(2), h(1), h(1), h(0), h(3), h(1)), 0.0);
    }

    #[test]
    fn gaunt_selection_rules() {
        assert!((gaunt(0, 0, 0, 0, 0, 0) - 1.0 / (4.0 * PI).sqrt()).abs() < 1e-15);
        assert_eq!(gaunt(1, 0, 1, 0, 1, 0), 0.0);
        assert_eq!(gaunt(1, 1, 1, 0, 2, 0), 0.0);
        assert_eq!(gaunt(1, 0, 1, 0, 3, 0), 0.0);
    }
}
