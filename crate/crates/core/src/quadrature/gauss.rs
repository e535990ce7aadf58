//! Reference Gauss–Legendre and Gauss–Laguerre rules, cached per node count.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Nodes and weights of a one-dimensional reference rule.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

type Cache = Mutex<HashMap<usize, Arc<ReferenceRule>>>;

fn cached(cache: &'static OnceLock<Cache>, n: usize, build: impl FnOnce() -> Result<ReferenceRule>) -> Result<Arc<ReferenceRule>> {
    let map = cache.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = map.lock().expect("rule cache poisoned").get(&n) {
        return Ok(Arc::clone(rule));
    }
    let rule = Arc::new(build()?);
    map.lock().expect("rule cache poisoned").insert(n, Arc::clone(&rule));
    Ok(rule)
}

/// Gauss–Legendre rule on [-1, 1], nodes ascending.
pub fn gauss_legendre(n: usize) -> Arc<ReferenceRule> {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    cached(&CACHE, n, || Ok(build_legendre(n))).expect("Legendre construction cannot fail")
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn build_legendre(n: usize) -> ReferenceRule {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_and_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_and_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    ReferenceRule { nodes, weights }
}

/// Gauss–Laguerre rule for ∫₀^∞ f(x) dx with the e^{-x} factor divided out of the
/// weights, i.e. weights are w_i e^{x_i}. Nodes ascending.
pub fn gauss_laguerre(n: usize) -> Result<Arc<ReferenceRule>> {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    cached(&CACHE, n, || build_laguerre(n))
}

/// Returns (L_n(x), L_{n-1}(x)) up to a common positive factor.
fn laguerre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut prev = 1.0;
    let mut cur = 1.0 - x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
        if cur.abs() > 1e200 {
            cur *= 1e-200;
            prev *= 1e-200;
        }
    }
    (cur, prev)
}

/// ln(Σ_{k<n} L_k(x)² e^{-x}), accumulated in log space.
fn log_christoffel_sum(n: usize, x: f64) -> f64 {
    let mut log_scale = -0.5 * x;
    let mut prev = 1.0f64;
    let mut cur = 1.0 - x;
    // running log-sum-exp of 2 ln|L_k| - x
    let mut acc_max = 2.0 * log_scale;
    let mut acc = 1.0f64;
    let push = |v: f64, log_scale: f64, acc_max: &mut f64, acc: &mut f64| {
        if v == 0.0 {
            return;
        }
        let t = 2.0 * (v.abs().ln() + log_scale);
        if t > *acc_max {
            *acc = *acc * (*acc_max - t).exp() + 1.0;
            *acc_max = t;
        } else {
            *acc += (t - *acc_max).exp();
        }
    };
    if n >= 2 {
        push(cur, log_scale, &mut acc_max, &mut acc);
    }
    for k in 1..n.saturating_sub(1) {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
        if cur.abs() > 1e100 || (cur.abs() < 1e-100 && prev.abs() < 1e-100) {
            let f = cur.abs().max(prev.abs());
            cur /= f;
            prev /= f;
            log_scale += f.ln();
        }
        push(cur, log_scale, &mut acc_max, &mut acc);
    }
    acc_max + acc.ln()
}

fn build_laguerre(n: usize) -> Result<ReferenceRule> {
    if n == 0 {
        return Err(Error::Construction("Gauss-Laguerre rule needs at least one node".into()));
    }
    let jacobi = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            2.0 * i as f64 + 1.0
        } else if i.abs_diff(j) == 1 {
            i.max(j) as f64
        } else {
            0.0
        }
    });
    let eigen = SymmetricEigen::try_new(jacobi, 1e-15, 10_000 * n).ok_or_else(|| {
        Error::Construction(format!("tridiagonal eigenvalue iteration did not converge for n = {n}"))
    })?;
    let mut nodes: Vec<f64> = eigen.eigenvalues.iter().copied().collect();
    nodes.sort_by(|a, b| a.total_cmp(b));

    let nf = n as f64;
    for x in nodes.iter_mut() {
        // Newton polish on L_n; L_n' = n (L_n - L_{n-1}) / x
        for _ in 0..20 {
            let (ln, lnm1) = laguerre_pair(n, *x);
            let dx = ln * *x / (nf * (ln - lnm1));
            if !dx.is_finite() {
                break;
            }
            *x -= dx;
            if dx.abs() <= 4.0 * f64::EPSILON * x.abs() {
                break;
            }
        }
        if !x.is_finite() || *x <= 0.0 {
            return Err(Error::Construction(format!("Newton refinement diverged for n = {n}")));
        }
    }
    // w_i = 1 / Σ L_k(x_i)², so w_i e^{x_i} = 1 / Σ (L_k(x_i) e^{-x_i/2})²
    let weights = nodes.iter().map(|&x| (-log_christoffel_sum(n, x)).exp()).collect();
    Ok(ReferenceRule { nodes, weights })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials() {
        let rule = gauss_legendre(7);
        for k in 0..14u32 {
            let v: f64 = rule.nodes.iter().zip(&rule.weights).map(|(x, w)| w * x.powi(k as i32)).sum();
            let exact = if k % 2 == 1 { 0.0 } else { 2.0 / f64::from(k + 1) };
            assert!((v - exact).abs() < 1e-15, "k = {k}");
        }
    }

    #[test]
    fn laguerre_single_node() {
        let rule = gauss_laguerre(1).unwrap();
        assert!((rule.nodes[0] - 1.0).abs() < 1e-15);
        // w e^{x} with w = 1, x = 1
        assert!((rule.weights[0] - std::f64::consts::E).abs() < 1e-14);
    }

    #[test]
    fn laguerre_weights_sum() {
        for n in [5, 40, 200] {
            let rule = gauss_laguerre(n).unwrap();
            let s: f64 = rule.nodes.iter().zip(&rule.weights).map(|(x, w)| w * (-x).exp()).sum();
            assert!((s - 1.0).abs() < 1e-13, "n = {n}: {s}");
        }
    }

    #[test]
    fn large_rules_stay_finite() {
        let rule = gauss_laguerre(400).unwrap();
        assert!(rule.weights.iter().all(|w| w.is_finite() && *w > 0.0));
        assert!(rule.nodes.windows(2).all(|p| p[0] < p[1]));
    }
}
