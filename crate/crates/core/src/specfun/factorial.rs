use std::sync::OnceLock;

use crate::quadrature::CompensatedSum;

const TABLE_SIZE: usize = 513;

fn table() -> &'static [f64; TABLE_SIZE] {
    static TABLE: OnceLock<[f64; TABLE_SIZE]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out = [0.0; TABLE_SIZE];
        let mut acc = CompensatedSum::new();
        for (n, slot) in out.iter_mut().enumerate().skip(2) {
            acc.add((n as f64).ln());
            *slot = acc.value();
        }
        out
    })
}

/// ln(n!), cached for n ≤ 512 and from the Stirling series above that.
pub fn log_factorial(n: u32) -> f64 {
    let n = n as usize;
    if n < TABLE_SIZE {
        return table()[n];
    }
    // ln Γ(x) for x = n + 1 > 513; four correction terms are far below 1 ulp here.
    let x = n as f64 + 1.0;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + series
}

/// n! as a float; overflows to infinity past 170!.
pub fn factorial(n: u32) -> f64 {
    if n <= 20 {
        (1..=u64::from(n)).product::<u64>() as f64
    } else {
        log_factorial(n).exp()
    }
}

/// ln Γ(n) for a positive integer argument.
pub fn log_gamma_int(n: u32) -> f64 {
    debug_assert!(n >= 1);
    log_factorial(n - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(log_factorial(0), 0.0);
        assert_eq!(log_factorial(1), 0.0);
        assert_eq!(factorial(5), 120.0);
    }

    #[test]
    fn ten_factorial_matches_integer_oracle() {
        let exact = (1..=10u64).product::<u64>() as f64;
        let expected = exact.ln();
        assert!((log_factorial(10) - expected).abs() <= 1e-14 * expected);
        assert!((log_factorial(10) - 15.104_412_573_075_516).abs() < 1e-13);
    }

    #[test]
    fn table_and_series_join_smoothly() {
        // ln(513!) - ln(512!) = ln 513
        let step = log_factorial(513) - log_factorial(512);
        assert!((step - 513f64.ln()).abs() < 1e-11);
        let step = log_factorial(1001) - log_factorial(1000);
        assert!((step - 1001f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn agrees_with_exact_product_up_to_170() {
        let mut acc = 1.0f64;
        for n in 1..=170u32 {
            acc *= f64::from(n);
            let rel = (log_factorial(n) - acc.ln()).abs() / acc.ln().max(1.0);
            assert!(rel < 1e-14, "n = {n}: rel {rel}");
        }
    }
}
