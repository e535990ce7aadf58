use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::quadrature::{build_angular_rule, build_radial_rule, CompensatedSum, ComplexSum};
use crate::specfun::{lm_index, spherical_harmonics_upto};

use super::radial::orbital_radial;
use super::types::{RadialFamily, ScalarOrbital, ScalarQN};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WeightMode {
    /// ⟨k_ν| w_α |k_μ⟩ with the family weight.
    #[serde(rename = "FAMILY_WEIGHT")]
    FamilyWeight,
    /// Plain L² overlap.
    #[serde(rename = "PLAIN_L2")]
    PlainL2,
}

/// Quadrature sizes for one-centre overlap matrices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OneCenterRule {
    pub radial_nodes: usize,
    pub degree: usize,
}

impl Default for OneCenterRule {
    fn default() -> Self {
        Self { radial_nodes: 200, degree: 96 }
    }
}

/// Basis ordering used by every matrix in this module: canonical (n, l, m).
pub fn basis_qns(n_max: u32) -> Vec<ScalarQN> {
    ScalarQN::enumerate(n_max, n_max.saturating_sub(1))
}

/// Overlap matrix ⟨bra_ν|ket_μ⟩ over all (n, l, m) with n ≤ n_max, computed as
/// (radial quadrature) × (angular quadrature); `radial_factor(qn, r)` gives the
/// bra-side radial product weight.
fn overlap_matrix(
    n_max: u32,
    zeta_sum: f64,
    rule: OneCenterRule,
    bra: impl Fn(&ScalarQN, f64) -> Result<f64>,
    ket: impl Fn(&ScalarQN, f64) -> Result<f64>,
) -> Result<DMatrix<Complex64>> {
    let qns = basis_qns(n_max);
    let radial = build_radial_rule(rule.radial_nodes, zeta_sum)?;
    let angular = build_angular_rule(rule.degree);
    let l_max = n_max - 1;

    // Radial integrals over (n, l) pairs, indexed by the first qn with that pair.
    let radial_pairs: Vec<ScalarQN> = qns.iter().copied().filter(|q| q.m() == 0).collect();
    let mut bra_vals = vec![vec![0.0; radial.nodes.len()]; radial_pairs.len()];
    let mut ket_vals = bra_vals.clone();
    for (p, qn) in radial_pairs.iter().enumerate() {
        for (i, &(r, _)) in radial.nodes.iter().enumerate() {
            bra_vals[p][i] = bra(qn, r)?;
            ket_vals[p][i] = ket(qn, r)?;
        }
    }
    let np = radial_pairs.len();
    let mut radial_mat = vec![0.0; np * np];
    for a in 0..np {
        for b in 0..np {
            let mut acc = CompensatedSum::new();
            for (i, &(r, w)) in radial.nodes.iter().enumerate() {
                acc.add(w * r * r * bra_vals[a][i] * ket_vals[b][i]);
            }
            radial_mat[a * np + b] = acc.value();
        }
    }

    // Angular overlaps over (l, m) pairs.
    let n_lm = lm_index(l_max, l_max as i32) + 1;
    let mut ang = vec![ComplexSum::new(); n_lm * n_lm];
    let mut ys = Vec::new();
    for (dir, w) in &angular.nodes {
        spherical_harmonics_upto(l_max, *dir, &mut ys);
        for a in 0..n_lm {
            let ya = ys[a].conj() * *w;
            for b in 0..n_lm {
                ang[a * n_lm + b].add(ya * ys[b]);
            }
        }
    }

    let pair_index = |q: &ScalarQN| radial_pairs.iter().position(|p| p.n() == q.n() && p.l() == q.l()).unwrap();
    let idx: Vec<(usize, usize)> = qns.iter().map(|q| (pair_index(q), lm_index(q.l(), q.m()))).collect();
    let dim = qns.len();
    Ok(DMatrix::from_fn(dim, dim, |i, j| {
        let (pa, la) = idx[i];
        let (pb, lb) = idx[j];
        ang[la * n_lm + lb].value() * radial_mat[pa * np + pb]
    }))
}

/// Gram matrix of a family over all (n, l, m) with n ≤ n_max.
pub fn gram_matrix(family: RadialFamily, mode: WeightMode, n_max: u32) -> Result<DMatrix<Complex64>> {
    gram_matrix_with(family, mode, n_max, OneCenterRule::default())
}

pub fn gram_matrix_with(
    family: RadialFamily,
    mode: WeightMode,
    n_max: u32,
    rule: OneCenterRule,
) -> Result<DMatrix<Complex64>> {
    let plain = |qn: &ScalarQN, r: f64| orbital_radial(&ScalarOrbital::position(family, *qn), r);
    let weighted = |qn: &ScalarQN, r: f64| Ok(family.weight(r) * plain(qn, r)?);
    match mode {
        WeightMode::FamilyWeight => overlap_matrix(n_max, 2.0 * family.zeta(), rule, weighted, plain),
        WeightMode::PlainL2 => overlap_matrix(n_max, 2.0 * family.zeta(), rule, plain, plain),
    }
}

/// Plain-L² overlaps ⟨barred k_ν | k_μ⟩ between the barred duals and the basis.
pub fn biorthogonality_matrix(family: RadialFamily, n_max: u32) -> Result<DMatrix<Complex64>> {
    biorthogonality_matrix_with(family, n_max, OneCenterRule::default())
}

pub fn biorthogonality_matrix_with(family: RadialFamily, n_max: u32, rule: OneCenterRule) -> Result<DMatrix<Complex64>> {
    let barred = |qn: &ScalarQN, r: f64| orbital_radial(&ScalarOrbital::position(family, *qn).as_barred(true)?, r);
    let plain = |qn: &ScalarQN, r: f64| orbital_radial(&ScalarOrbital::position(family, *qn), r);
    overlap_matrix(n_max, 2.0 * family.zeta(), rule, barred, plain)
}

/// max |G − I| over all entries.
pub fn identity_deviation(m: &DMatrix<Complex64>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((m[(i, j)] - target).norm());
        }
    }
    worst
}
