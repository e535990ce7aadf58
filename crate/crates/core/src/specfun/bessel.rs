/// Spherical Bessel function of the first kind j_l(x).
///
/// Power series while x² ≤ 2l + 3 (terms shrink geometrically, no cancellation),
/// upward recurrence from j_0 and j_1 for x ≥ l, and otherwise Miller's downward
/// recurrence normalised against whichever of j_0, j_1 is larger in magnitude.
pub fn spherical_bessel(l: u32, x: f64) -> f64 {
    if x < 0.0 {
        let v = spherical_bessel(l, -x);
        return if l % 2 == 0 { v } else { -v };
    }
    if x == 0.0 {
        return if l == 0 { 1.0 } else { 0.0 };
    }
    let lf = f64::from(l);
    if x * x <= 2.0 * lf + 3.0 {
        return series(l, x);
    }
    let (s, c) = x.sin_cos();
    let j0 = s / x;
    if l == 0 {
        return j0;
    }
    let j1 = s / (x * x) - c / x;
    if x >= lf {
        let mut prev = j0;
        let mut cur = j1;
        for k in 1..l {
            let next = f64::from(2 * k + 1) / x * cur - prev;
            prev = cur;
            cur = next;
        }
        return cur;
    }
    miller(l, x, j0, j1)
}

fn series(l: u32, x: f64) -> f64 {
    // x^l / (2l+1)!!
    let mut lead = 1.0;
    for k in 1..=l {
        lead *= x / f64::from(2 * k + 1);
    }
    let half_x2 = -0.5 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200u32 {
        term *= half_x2 / (f64::from(k) * f64::from(2 * l + 2 * k + 1));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    lead * sum
}

fn miller(l: u32, x: f64, j0: f64, j1: f64) -> f64 {
    let start = l + 32 + (40.0 * f64::from(l)).sqrt() as u32;
    let mut next = 0.0f64;
    let mut cur = 1e-300f64;
    let mut at_l = 0.0;
    let mut at_1 = 0.0;
    for k in (1..=start).rev() {
        // cur = f_k, next = f_{k+1}
        if k == l {
            at_l = cur;
        }
        if k == 1 {
            at_1 = cur;
        }
        let prev = f64::from(2 * k + 1) / x * cur - next;
        next = cur;
        cur = prev;
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            at_l *= 1e-250;
            at_1 *= 1e-250;
        }
    }
    let at_0 = cur;
    if j0.abs() >= j1.abs() {
        at_l * (j0 / at_0)
    } else {
        at_l * (j1 / at_1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        assert!((spherical_bessel(0, 1.0) - 0.841_470_984_8).abs() < 1e-10);
        assert_eq!(spherical_bessel(0, 0.0), 1.0);
        assert_eq!(spherical_bessel(3, 0.0), 0.0);
        for &x in &[0.3, 1.7, 2.5, 6.0, 13.0, 40.0] {
            let (s, c) = f64::sin_cos(x);
            let j2 = (3.0 / (x * x) - 1.0) * s / x - 3.0 * c / (x * x);
            assert!((spherical_bessel(2, x) - j2).abs() < 1e-14, "x = {x}");
        }
    }

    #[test]
    fn branches_agree_at_boundaries() {
        // series / Miller boundary and Miller / upward boundary for l = 10
        for &x in &[4.79, 4.8, 4.81, 9.99, 10.0, 10.01] {
            let a = spherical_bessel(10, x);
            let b = miller(10, x, x.sin() / x, x.sin() / (x * x) - x.cos() / x);
            assert!((a - b).abs() <= 1e-13 * b.abs(), "x = {x}: {a} vs {b}");
        }
    }

    #[test]
    fn odd_parity() {
        assert_eq!(spherical_bessel(3, -2.5), -spherical_bessel(3, 2.5));
    }
}
