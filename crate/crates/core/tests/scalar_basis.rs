//! Scalar basis: closed-form oracles, orthonormality and projection.

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use spinorbasis::scalar_basis::*;
use spinorbasis::specfun::{spherical_harmonic, AngularPair};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn pos(r: f64, theta: f64, phi: f64) -> EvaluationPoint {
    EvaluationPoint::new(Space::Position, r, AngularPair::new(theta, phi).unwrap()).unwrap()
}

fn mom(k: f64, theta: f64, phi: f64) -> EvaluationPoint {
    EvaluationPoint::new(Space::Momentum, k, AngularPair::new(theta, phi).unwrap()).unwrap()
}

/// Exact power-series coefficients of L_q^β(x) = Σ_k c_k x^k.
fn laguerre_coefficients(q: u32, beta: f64) -> Vec<f64> {
    let mut out = Vec::new();
    for k in 0..=q {
        // (−1)^k binom(q+β, q−k) / k!
        let mut binom = 1.0;
        for i in 0..(q - k) {
            binom *= (f64::from(k) + beta + 1.0 + f64::from(i)) / f64::from(i + 1);
        }
        let kfact: f64 = (1..=k).map(f64::from).product();
        out.push(if k % 2 == 0 { 1.0 } else { -1.0 } * binom / kfact);
    }
    out
}

fn gamma_int(p: u32) -> f64 {
    (1..p).map(f64::from).product()
}

/// ∫ R_{nl} R_{n'l} (2ζr)^{weight_power} r² dr by exact term-by-term Γ integrals.
fn exact_overlap(alpha: i32, weight_power: i32, n1: u32, n2: u32, l: u32, zeta: f64) -> f64 {
    let norm = |n: u32| {
        let num = (2.0 * zeta).powi(3) * gamma_int(n - l);
        (num / gamma_int((n as i32 + l as i32 + 2 - alpha) as u32)).sqrt()
    };
    let beta = f64::from(2 * l as i32 + 2 - alpha);
    let a = laguerre_coefficients(n1 - l - 1, beta);
    let b = laguerre_coefficients(n2 - l - 1, beta);
    let mut total = 0.0;
    // x = 2ζr: ∫ x^{2l+i+j+w} e^{−x} x² dx / (2ζ)³
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            let p = 2 * l as i32 + i as i32 + j as i32 + weight_power + 2;
            total += ai * bj * gamma_int((p + 1) as u32);
        }
    }
    norm(n1) * norm(n2) * total / (2.0 * zeta).powi(3)
}

fn exact_weighted_overlap(alpha: i32, n1: u32, n2: u32, l: u32, zeta: f64) -> f64 {
    exact_overlap(alpha, -alpha, n1, n2, l, zeta)
}

#[test]
fn one_s_eto_matches_textbook_function() {
    for &zeta in &[0.5, 1.0, 2.7] {
        let v = radial_eto(0, 1, 0, zeta, 0.0).unwrap();
        assert!((v - 2.0 * zeta.powf(1.5)).abs() < 1e-14 * v);
        let orb = ScalarOrbital::position(RadialFamily::eto(0, zeta).unwrap(), ScalarQN::new(1, 0, 0).unwrap());
        let at0 = eval_scalar(&orb, &pos(0.0, 0.0, 0.0)).unwrap();
        assert!((at0.re - (zeta.powi(3) / PI).sqrt()).abs() < 1e-14);
    }
}

#[test]
fn two_s_radial_nodes() {
    // L_1^β(x) = 1 + β − x with β = 2 − α: node at 2ζr = 3 − α
    for &zeta in &[0.5, 1.0, 2.0] {
        for alpha in ALLOWED_ALPHAS {
            let r = f64::from(3 - alpha) / (2.0 * zeta);
            let v = radial_eto(alpha, 2, 0, zeta, r).unwrap();
            assert!(v.abs() < 1e-14, "alpha {alpha}: {v}");
        }
        assert!(radial_eto(-1, 2, 0, zeta, 2.0 / zeta).unwrap().abs() < 1e-14);
        assert!(radial_eto(1, 2, 0, zeta, 1.0 / zeta).unwrap().abs() < 1e-14);
    }
}

#[test]
fn radial_norms_match_exact_gamma_integrals() {
    for alpha in ALLOWED_ALPHAS {
        for n in 1..=5 {
            for l in 0..n {
                let exact = exact_weighted_overlap(alpha, n, n, l, 1.3);
                assert!((exact - 1.0).abs() < 1e-12, "oracle: alpha {alpha} n {n} l {l}: {exact}");
                let g = gram_matrix(RadialFamily::eto(alpha, 1.3).unwrap(), WeightMode::FamilyWeight, n).unwrap();
                let idx = basis_qns(n).iter().position(|q| q.n() == n && q.l() == l && q.m() == 0).unwrap();
                assert!((g[(idx, idx)].re - exact).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn plain_overlaps_of_weighted_families_match_exact_integrals() {
    for alpha in [1, -1, -2] {
        let fam = RadialFamily::eto(alpha, 0.8).unwrap();
        let g = gram_matrix(fam, WeightMode::PlainL2, 4).unwrap();
        let qns = basis_qns(4);
        let mut largest_off_diagonal = 0.0f64;
        for (i, a) in qns.iter().enumerate() {
            for (j, b) in qns.iter().enumerate() {
                let expected = if a.l() == b.l() && a.m() == b.m() {
                    exact_overlap(alpha, 0, a.n(), b.n(), a.l(), 0.8)
                } else {
                    0.0
                };
                if i != j {
                    largest_off_diagonal = largest_off_diagonal.max(expected.abs());
                }
                assert!((g[(i, j)] - c(expected)).norm() < 1e-11 * (1.0 + expected.abs()), "alpha {alpha} {a} {b}");
            }
        }
        // without the family weight these sets are not orthonormal
        assert!(largest_off_diagonal > 0.1);
    }
}

#[test]
fn gram_identity_for_eto_families() {
    for alpha in [0, 1] {
        let g = gram_matrix(RadialFamily::eto(alpha, 1.0).unwrap(), WeightMode::FamilyWeight, 4).unwrap();
        assert!(identity_deviation(&g) < 1e-12, "alpha {alpha}: {}", identity_deviation(&g));
    }
}

#[test]
fn sto_gram_is_normalized_but_not_orthogonal() {
    let g = gram_matrix(RadialFamily::sto(1.0).unwrap(), WeightMode::PlainL2, 3).unwrap();
    let qns = basis_qns(3);
    for i in 0..qns.len() {
        assert!((g[(i, i)].re - 1.0).abs() < 1e-12);
    }
    let i1 = qns.iter().position(|q| (q.n(), q.l()) == (1, 0)).unwrap();
    let i2 = qns.iter().position(|q| (q.n(), q.l()) == (2, 0)).unwrap();
    // (n + n')! / sqrt((2n)! (2n')!) for equal exponents
    let exact = 6.0 / (2.0f64 * 24.0).sqrt();
    assert!((g[(i1, i2)].re - exact).abs() < 1e-12);
    assert!((exact - 3f64.sqrt() / 2.0).abs() < 1e-15);
}

#[test]
fn biorthonormality_across_families() {
    for alpha in ALLOWED_ALPHAS {
        for &zeta in &[0.5, 1.0, 2.7] {
            let b = biorthogonality_matrix(RadialFamily::eto(alpha, zeta).unwrap(), 6).unwrap();
            assert!(identity_deviation(&b) < 1e-12, "alpha {alpha} zeta {zeta}: {}", identity_deviation(&b));
        }
    }
}

#[test]
fn barred_alpha_zero_equals_unbarred() {
    let fam = RadialFamily::eto(0, 1.4).unwrap();
    for q in basis_qns(3) {
        let a = ScalarOrbital::position(fam, q);
        let b = a.as_barred(true).unwrap();
        for &r in &[0.0, 0.3, 2.0, 7.5] {
            let p = pos(r, 1.1, 4.0);
            assert_eq!(eval_scalar(&a, &p).unwrap(), eval_scalar(&b, &p).unwrap());
        }
    }
}

#[test]
fn eto_one_s_coincides_with_slater_one_s() {
    for &zeta in &[0.5, 1.0, 2.7] {
        let orb = ScalarOrbital::position(RadialFamily::eto(0, zeta).unwrap(), ScalarQN::new(1, 0, 0).unwrap());
        for i in 0..=200 {
            let r = f64::from(i) * 0.1 / zeta;
            let p = pos(r, 0.7, 2.0);
            let a = eval_scalar(&orb, &p).unwrap();
            let b = chi_sto(1, 0, 0, zeta, &p).unwrap();
            assert!((a - b).norm() <= 1e-13 * b.norm().max(1e-300), "r {r}");
        }
    }
}

#[test]
fn slater_values_and_errors() {
    let v = chi_sto(1, 0, 0, 1.7, &pos(0.0, 0.0, 0.0)).unwrap();
    assert!((v.re - (1.7f64.powi(3) / PI).sqrt()).abs() < 1e-14);
    assert!(chi_sto(2, 2, 0, 1.0, &pos(1.0, 0.0, 0.0)).is_err());
}

#[test]
fn space_mismatch_is_a_usage_error() {
    let orb = ScalarOrbital::position(RadialFamily::sto(1.0).unwrap(), ScalarQN::new(1, 0, 0).unwrap());
    assert!(matches!(eval_scalar(&orb, &mom(1.0, 0.0, 0.0)), Err(spinorbasis::Error::Usage(_))));
}

#[test]
fn barred_pole_is_reported_not_infinite() {
    let orb = ScalarOrbital::position(RadialFamily::eto(1, 1.0).unwrap(), ScalarQN::new(1, 0, 0).unwrap())
        .as_barred(true)
        .unwrap();
    assert!(matches!(eval_scalar(&orb, &pos(0.0, 0.0, 0.0)), Err(spinorbasis::Error::PoleAtOrigin(_))));
}

#[test]
fn momentum_one_s_slater_closed_form() {
    for &zeta in &[0.5, 1.0, 2.0] {
        for i in 0..=40 {
            let k = zeta * f64::from(i) * 0.5;
            let v = chi_sto(1, 0, 0, zeta, &mom(k, 0.4, 1.0)).unwrap();
            let exact = 2.0 * 2f64.sqrt() / PI * zeta.powf(2.5) / (k * k + zeta * zeta).powi(2);
            assert!((v.norm() - exact).abs() <= 1e-10 * exact, "zeta {zeta} k {k}: {} vs {exact}", v.norm());
        }
    }
}

#[test]
fn momentum_two_p_slater_closed_form() {
    // χ_{21m}: radial transform ∝ k / (k² + ζ²)³ with phase (−i)
    let zeta = 1.3;
    for &k in &[0.1, 1.0, 5.0, 20.0] {
        let v = chi_sto(2, 1, 0, zeta, &mom(k, 0.0, 0.0)).unwrap();
        let norm = ((2.0 * zeta).powi(5) / 24.0).sqrt();
        let radial = norm * 8.0 * zeta * k / (zeta * zeta + k * k).powi(3);
        let exact = Complex64::new(0.0, -1.0) * (2.0 / PI).sqrt() * radial * (3.0 / (4.0 * PI)).sqrt();
        assert!((v - exact).norm() <= 1e-10 * exact.norm(), "k {k}");
    }
}

/// Momentum radial factors of `orbs` on the nodes of ∫₀^K … k² dk with
/// k = K u² (composite Gauss–Legendre in u); the neglected tail is O(K^{-5}).
fn momentum_samples(orbs: &[ScalarOrbital], zeta: f64) -> (Vec<f64>, Vec<Vec<Complex64>>) {
    let k_max = 150.0 * zeta;
    let rule = spinorbasis::quadrature::gauss_legendre(16);
    let panels = 24;
    let mut weights = Vec::new();
    let mut values = vec![Vec::new(); orbs.len()];
    for p in 0..panels {
        let (u0, h) = (f64::from(p) / f64::from(panels), 1.0 / f64::from(panels));
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            let u = u0 + 0.5 * h * (x + 1.0);
            let k = k_max * u * u;
            weights.push(0.5 * h * w * 2.0 * k_max * u * k * k);
            for (o, v) in orbs.iter().zip(values.iter_mut()) {
                v.push(momentum_radial_with(o, &hankel_rule_for(o, k)));
            }
        }
    }
    (weights, values)
}

#[test]
fn parseval_for_lambda_functions() {
    let zeta = 1.0;
    let fam = RadialFamily::eto(0, zeta).unwrap();
    let qns: Vec<ScalarQN> = basis_qns(3).into_iter().filter(|q| q.m() == 0).collect();
    let orbs: Vec<ScalarOrbital> =
        qns.iter().map(|q| ScalarOrbital::position(fam, *q).in_space(Space::Momentum)).collect();
    let (weights, values) = momentum_samples(&orbs, zeta);
    for (a, qa) in qns.iter().enumerate() {
        for (b, qb) in qns.iter().enumerate() {
            if qa.l() != qb.l() {
                continue;
            }
            let v: f64 = weights.iter().zip(&values[a]).zip(&values[b]).map(|((w, x), y)| w * (x.conj() * y).re).sum();
            let expected = if a == b { 1.0 } else { 0.0 };
            assert!((v - expected).abs() < 1e-8, "{qa} {qb}: {v}");
        }
    }
}

#[test]
fn projection_of_basis_member_is_a_delta() {
    let fam = RadialFamily::eto(1, 1.2).unwrap();
    let target = ScalarOrbital::position(fam, ScalarQN::new(3, 1, -1).unwrap());
    let f = |x: [f64; 3]| eval_scalar(&target, &EvaluationPoint::from_cartesian(Space::Position, x)).unwrap();
    let t = project(f, fam, 4, 3).unwrap();
    for e in &t.entries {
        let expected = if (e.n, e.l, e.m) == (3, 1, -1) { c(1.0) } else { c(0.0) };
        assert!((e.value() - expected).norm() < 1e-10, "{:?}", e);
    }
    assert!(t.flags.is_empty(), "{:?}", t.flags);
    assert!(t.residual_l2w < 1e-8);
}

#[test]
fn projection_of_zero_is_zero() {
    let fam = RadialFamily::eto(0, 1.0).unwrap();
    let t = project(|_| c(0.0), fam, 3, 2).unwrap();
    assert!(t.entries.iter().all(|e| e.re == 0.0 && e.im == 0.0));
    assert_eq!(t.residual_l2w, 0.0);
}

#[test]
fn slater_projection_residual_strictly_decreases() {
    // Same exponent would make the expansion exact at n = 1, so the target uses ζ' ≠ ζ.
    let fam = RadialFamily::eto(0, 1.6).unwrap();
    let f = |x: [f64; 3]| chi_sto(1, 0, 0, 1.0, &EvaluationPoint::from_cartesian(Space::Position, x)).unwrap();
    let opts = ProjectionOptions { decay: Some(1.0), ..Default::default() };
    let levels = [1, 2, 3, 4, 6, 8];
    let tables = project_levels(&f, fam, &levels, 0, &opts).unwrap();
    for w in tables.windows(2) {
        assert!(w[1].residual_l2w < w[0].residual_l2w, "{} !< {}", w[1].residual_l2w, w[0].residual_l2w);
    }
    // partial sums converge: coefficients shrink
    let last = &tables[tables.len() - 1];
    assert!(last.coefficient(8, 0, 0).norm() < last.coefficient(1, 0, 0).norm());
}

#[test]
fn same_exponent_slater_projection_is_exact() {
    let fam = RadialFamily::eto(0, 1.0).unwrap();
    let f = |x: [f64; 3]| chi_sto(1, 0, 0, 1.0, &EvaluationPoint::from_cartesian(Space::Position, x)).unwrap();
    let t = project(f, fam, 3, 1).unwrap();
    assert!((t.coefficient(1, 0, 0) - c(1.0)).norm() < 1e-12);
    assert!(t.residual_l2w < 1e-8);
}

#[test]
fn project_after_synthesize_is_identity() {
    let fam = RadialFamily::eto(-1, 0.9).unwrap();
    let base = project(|_| c(0.0), fam, 3, 2).unwrap();
    let mut table = base.clone();
    for (i, e) in table.entries.iter_mut().enumerate() {
        e.re = (i as f64 * 0.37).sin();
        e.im = (i as f64 * 0.91).cos() * 0.5;
    }
    let synth = table.clone();
    let f = move |x: [f64; 3]| synth.synthesize(&EvaluationPoint::from_cartesian(Space::Position, x)).unwrap();
    let opts = ProjectionOptions { rule: OneCenterRule { radial_nodes: 60, degree: 16 }, ..Default::default() };
    let back = project_with(&f, fam, 3, 2, &opts).unwrap();
    for (a, b) in table.entries.iter().zip(&back.entries) {
        assert!((a.value() - b.value()).norm() < 1e-10);
    }
}

#[test]
fn momentum_transform_is_linear() {
    let fam = RadialFamily::eto(0, 1.1).unwrap();
    let qns = [(1, 0, 0), (2, 1, 1), (3, 2, -2), (3, 1, 0), (2, 0, 0)];
    let coeffs = [c(0.3), Complex64::new(0.0, 1.2), c(-0.7), Complex64::new(0.5, -0.5), c(2.0)];
    let pairs: Vec<(ScalarQN, Complex64)> =
        qns.iter().map(|&(n, l, m)| ScalarQN::new(n, l, m).unwrap()).zip(coeffs).collect();
    let info = QuadratureInfo { node_count: 0, scale: 1.0, degree: 0, refinement_levels: 0 };
    let table = ExpansionTable::new(fam, 3, 2, &pairs, info);
    for &(k, th, ph) in &[(0.3, 0.2, 0.1), (1.7, 2.0, 5.0), (6.0, 1.0, 3.0)] {
        let p = mom(k, th, ph);
        let combined = table.synthesize(&p).unwrap();
        let separate: Complex64 = pairs
            .iter()
            .map(|(q, cf)| cf * eval_scalar(&ScalarOrbital::position(fam, *q).in_space(Space::Momentum), &p).unwrap())
            .sum();
        assert!((combined - separate).norm() < 1e-12 * (1.0 + separate.norm()));
    }
}

#[test]
fn family_and_table_json_round_trip() {
    let fam = RadialFamily::eto(-1, 2.5).unwrap();
    let s = serde_json::to_string(&fam).unwrap();
    assert_eq!(serde_json::from_str::<RadialFamily>(&s).unwrap(), fam);
    assert!(serde_json::from_str::<RadialFamily>(r#"{"kind":"ETO_ALPHA","alpha":3,"zeta":1.0}"#).is_err());
    assert!(serde_json::from_str::<ScalarQN>(r#"{"n":1,"l":1,"m":0}"#).is_err());
    let t = project(|_| c(0.0), fam, 2, 1).unwrap();
    let back: ExpansionTable = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
    assert_eq!(back, t);
}

#[test]
fn spherical_factor_uses_shared_convention() {
    let orb = ScalarOrbital::position(RadialFamily::sto(1.0).unwrap(), ScalarQN::new(3, 2, -1).unwrap());
    let dir = AngularPair::new(0.8, 2.2).unwrap();
    let p = EvaluationPoint::new(Space::Position, 1.5, dir).unwrap();
    let expected = spherical_harmonic(2, -1, dir).unwrap() * radial_sto(3, 1.0, 1.5);
    assert!((eval_scalar(&orb, &p).unwrap() - expected).norm() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn biorthonormal_for_random_exponents(alpha_idx in 0usize..4, zeta in 0.3f64..4.0, n_max in 1u32..5) {
        let fam = RadialFamily::eto(ALLOWED_ALPHAS[alpha_idx], zeta).unwrap();
        let rule = OneCenterRule { radial_nodes: 60, degree: 12 };
        let b = biorthogonality_matrix_with(fam, n_max, rule).unwrap();
        prop_assert!(identity_deviation(&b) < 1e-11);
    }

    #[test]
    fn qn_validity_is_exact(n in 0u32..8, l in 0u32..8, m in -8i32..8) {
        let ok = n >= 1 && l < n && m.unsigned_abs() <= l;
        prop_assert_eq!(ScalarQN::new(n, l, m).is_ok(), ok);
    }

    #[test]
    fn eval_is_periodic_in_phi(r in 0.0f64..10.0, theta in 0.0f64..PI, phi in 0.0f64..6.28) {
        let orb = ScalarOrbital::position(RadialFamily::eto(-1, 1.0).unwrap(), ScalarQN::new(3, 2, 2).unwrap());
        let a = EvaluationPoint::new(Space::Position, r, AngularPair::new(theta, phi).unwrap()).unwrap();
        let b = EvaluationPoint::new(Space::Position, r, AngularPair::wrapped(theta, phi + 2.0 * PI).unwrap()).unwrap();
        let (va, vb) = (eval_scalar(&orb, &a).unwrap(), eval_scalar(&orb, &b).unwrap());
        prop_assert!((va - vb).norm() <= 1e-12 * (1.0 + va.norm()));
    }
}
