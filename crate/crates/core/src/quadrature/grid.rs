//! Three-dimensional point sets built from the one-dimensional rules, and a
//! deterministic parallel reduction over them.

use num_complex::Complex64;
use rayon::prelude::*;

use super::rules::{AngularRule, RadialRule};
use super::sum::{CompensatedSum, ComplexSum};

/// Fixed work-unit size: the reduction tree depends only on the point count,
/// never on the number of worker threads.
pub const REDUCTION_CHUNK: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub position: [f64; 3],
    pub weight: f64,
}

/// Product grid radial × angular centred at the origin.
pub fn spherical_grid(radial: &RadialRule, angular: &AngularRule) -> Vec<GridPoint> {
    let mut points = Vec::with_capacity(radial.nodes.len() * angular.nodes.len());
    for &(r, wr) in &radial.nodes {
        for (dir, wa) in &angular.nodes {
            let u = dir.unit_vector();
            points.push(GridPoint { position: [r * u[0], r * u[1], r * u[2]], weight: wr * r * r * wa });
        }
    }
    points
}

/// Σ w f over the grid together with Σ |w f| (the roundoff scale).
pub fn integrate<F>(points: &[GridPoint], f: F) -> (Complex64, f64)
where
    F: Fn([f64; 3]) -> Complex64 + Sync,
{
    let partials: Vec<(ComplexSum, CompensatedSum)> = points
        .par_chunks(REDUCTION_CHUNK)
        .map(|chunk| {
            let mut acc = ComplexSum::new();
            let mut abs = CompensatedSum::new();
            for p in chunk {
                let v = f(p.position) * p.weight;
                acc.add(v);
                abs.add(v.norm());
            }
            (acc, abs)
        })
        .collect();
    let mut acc = ComplexSum::new();
    let mut abs = CompensatedSum::new();
    for (a, b) in &partials {
        acc.merge(a);
        abs.merge(b);
    }
    (acc.value(), abs.value())
}

/// Vector-valued variant: `f` writes `width` values per point into the provided
/// buffer; returns the weighted sums per slot and the per-slot absolute sums.
pub fn integrate_many<F>(points: &[GridPoint], width: usize, f: F) -> (Vec<Complex64>, Vec<f64>)
where
    F: Fn([f64; 3], &mut [Complex64]) + Sync,
{
    let partials: Vec<(Vec<ComplexSum>, Vec<CompensatedSum>)> = points
        .par_chunks(REDUCTION_CHUNK)
        .map(|chunk| {
            let mut acc = vec![ComplexSum::new(); width];
            let mut abs = vec![CompensatedSum::new(); width];
            let mut buf = vec![Complex64::new(0.0, 0.0); width];
            for p in chunk {
                buf.iter_mut().for_each(|b| *b = Complex64::new(0.0, 0.0));
                f(p.position, &mut buf);
                for ((a, s), v) in acc.iter_mut().zip(abs.iter_mut()).zip(&buf) {
                    let wv = v * p.weight;
                    a.add(wv);
                    s.add(wv.norm());
                }
            }
            (acc, abs)
        })
        .collect();
    let mut acc = vec![ComplexSum::new(); width];
    let mut abs = vec![CompensatedSum::new(); width];
    for (a, b) in &partials {
        for i in 0..width {
            acc[i].merge(&a[i]);
            abs[i].merge(&b[i]);
        }
    }
    (acc.iter().map(ComplexSum::value).collect(), abs.iter().map(CompensatedSum::value).collect())
}
