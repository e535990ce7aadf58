use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use spinorbasis::quadrature::RefinementPolicy;
use spinorbasis::scalar_basis::{gram_matrix, OneCenterRule, RadialFamily, Space, WeightMode};
use spinorbasis::specfun::{clebsch_gordan_exact, gaunt, HalfInteger};
use spinorbasis::spinor_basis::eval_spinor;
use spinorbasis::theorems::{
    expansion_terms_for, linearize_product_with, sample_points, translate_spinor, OrbitalSampler, TranslationOptions,
};
use spinorbasis_bench::{excited_spinor, ground_spinor};

fn coupling(c: &mut Criterion) {
    let mut g = c.benchmark_group("coupling");
    g.bench_function("gaunt l<=6 sweep", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for l1 in 0..=6u32 {
                for l2 in 0..=6u32 {
                    for big_l in (l1.abs_diff(l2)..=l1 + l2).step_by(2) {
                        acc += gaunt(l1, 0, l2, 0, big_l, 0);
                    }
                }
            }
            black_box(acc)
        })
    });
    g.bench_function("exact clebsch-gordan j=9/2", |b| {
        let h = HalfInteger::from_twice;
        b.iter(|| black_box(clebsch_gordan_exact(h(8), h(2), h(1), h(-1), h(9), h(1))))
    });
    g.finish();
}

fn gram(c: &mut Criterion) {
    let fam = RadialFamily::eto(-1, 1.0).unwrap();
    c.bench_function("gram n_max=6", |b| b.iter(|| black_box(gram_matrix(fam, WeightMode::FamilyWeight, 6).unwrap())));
}

fn spinors(c: &mut Criterion) {
    let orb = excited_spinor();
    let points = sample_points(1, 100, Space::Position, 6.0);
    let mut g = c.benchmark_group("spinor");
    g.bench_function("eval 100 points", |b| {
        b.iter(|| {
            for p in &points {
                black_box(eval_spinor(&orb, p).unwrap());
            }
        })
    });
    g.bench_function("sampler prepare+eval 100 points", |b| {
        b.iter(|| {
            let mut sampler = OrbitalSampler::new(points.clone(), 3).unwrap();
            sampler.prepare(&orb).unwrap();
            for k in 0..points.len() {
                black_box(sampler.spinor(&orb, k));
            }
        })
    });
    g.finish();
}

fn linearize(c: &mut Criterion) {
    let orb = excited_spinor();
    let terms = expansion_terms_for(&orb, &orb).unwrap();
    let target = RadialFamily::eto(0, 2.6).unwrap();
    let rule = OneCenterRule { radial_nodes: 80, degree: 24 };
    c.bench_function("linearize product n_max=5", |b| {
        b.iter(|| black_box(linearize_product_with(&terms[0], target, 5, 4, rule).unwrap()))
    });
}

fn translate(c: &mut Criterion) {
    let orb = ground_spinor();
    let target = RadialFamily::eto(0, 1.0).unwrap();
    let opts = TranslationOptions { policy: RefinementPolicy { max_level: 1, ..RefinementPolicy::default() }, ..Default::default() };
    let mut g = c.benchmark_group("translate");
    g.sample_size(10);
    g.bench_function("s=1/2 |y|=1 n_max=4", |b| {
        b.iter(|| black_box(translate_spinor(&orb, [0.0, 0.0, 1.0], target, &[4], 3, &[], &opts).unwrap()))
    });
    g.finish();
}

criterion_group!(benches, coupling, gram, spinors, linearize, translate);
criterion_main!(benches);
