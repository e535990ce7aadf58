//! Composite Gauss–Legendre rule for spherical Hankel transforms
//! ∫₀^∞ f(r) j_l(kr) r² dr of exponentially decaying radial functions.

use crate::specfun::spherical_bessel;

use super::gauss::gauss_legendre;
use super::sum::CompensatedSum;

const NODES_PER_PANEL: usize = 20;
/// Envelope ratio below which the tail is dropped (≈ e^{-46}).
const LOG_TAIL: f64 = 46.0;

/// Quadrature nodes on [0, r_max] resolving both the decay e^{-decay·r}
/// and the oscillation of j_l(kr).
#[derive(Debug, Clone, PartialEq)]
pub struct HankelRule {
    pub k: f64,
    pub r_max: f64,
    /// (radius, weight) pairs.
    pub nodes: Vec<(f64, f64)>,
}

/// Smallest r past the peak of r^power e^{-decay r} at which the envelope has
/// dropped by e^{-LOG_TAIL} relative to the peak.
fn cutoff(decay: f64, power: f64) -> f64 {
    let peak = power.max(0.0);
    let log_env = |x: f64| if x > 0.0 { peak * x.ln() - x } else { 0.0 };
    let log_peak = if peak > 0.0 { log_env(peak) } else { 0.0 };
    let mut x = peak.max(1.0);
    while log_env(x) - log_peak > -LOG_TAIL {
        x += 1.0;
    }
    x / decay
}

impl HankelRule {
    pub fn new(k: f64, decay: f64, power: f64) -> Self {
        assert!(decay > 0.0 && decay.is_finite(), "decay must be positive");
        let k = k.abs();
        let r_max = cutoff(decay, power);
        let mut width = 1.0 / decay;
        if k > 0.0 {
            width = width.min(2.5 / k);
        }
        let panels = (r_max / width).ceil().max(1.0) as usize;
        let h = r_max / panels as f64;
        let legendre = gauss_legendre(NODES_PER_PANEL);
        let mut nodes = Vec::with_capacity(panels * NODES_PER_PANEL);
        for p in 0..panels {
            let a = p as f64 * h;
            for (&x, &w) in legendre.nodes.iter().zip(&legendre.weights) {
                nodes.push((a + 0.5 * h * (x + 1.0), 0.5 * h * w));
            }
        }
        Self { k, r_max, nodes }
    }

    /// ∫₀^∞ f(r) j_l(kr) r² dr.
    pub fn transform<F: Fn(f64) -> f64>(&self, f: F, l: u32) -> f64 {
        let mut acc = CompensatedSum::new();
        for &(r, w) in &self.nodes {
            acc.add(w * f(r) * spherical_bessel(l, self.k * r) * r * r);
        }
        acc.value()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transform_of_exponential() {
        // ∫ e^{-ar} j_0(kr) r² dr = 2a / (a² + k²)²
        for &(a, k) in &[(1.0, 0.0), (1.0, 0.5), (2.0, 7.0), (0.5, 10.0), (1.0, 20.0)] {
            let rule = HankelRule::new(k, a, 2.0);
            let v = rule.transform(|r| (-a * r).exp(), 0);
            let exact = 2.0 * a / (a * a + k * k).powi(2);
            assert!((v - exact).abs() <= 1e-12 * exact, "a = {a}, k = {k}: {v} vs {exact}");
        }
    }

    #[test]
    fn transform_of_p_type() {
        // ∫ r e^{-ar} j_1(kr) r² dr = 8 a k / (a² + k²)³
        for &(a, k) in &[(1.0, 0.3), (1.5, 4.0), (1.0, 20.0)] {
            let rule = HankelRule::new(k, a, 3.0);
            let v = rule.transform(|r| r * (-a * r).exp(), 1);
            let exact = 8.0 * a * k / (a * a + k * k).powi(3);
            assert!((v - exact).abs() <= 1e-11 * exact, "a = {a}, k = {k}");
        }
    }
}
