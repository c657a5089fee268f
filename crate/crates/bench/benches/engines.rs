// Copyright 2026 The ncfree Authors
// SPDX-License-Identifier: Apache-2.0

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ncfree::convolution::{Convolver, MeasureSpec, Strategy};
use ncfree::cumulants::{free_cumulants_from_moments, free_cumulants_via_mobius, MomentSequence};
use ncfree::enumeration::{count_k_divisible, iter_k_equal, iter_nc};
use ncfree::measures::NamedLaw;
use ncfree::rational::ratio;

fn enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate");
    for n in [8, 10, 12] {
        g.bench_with_input(BenchmarkId::new("nc", n), &n, |b, &n| b.iter(|| iter_nc(n).unwrap().count()));
    }
    g.bench_function("k-equal/3x4", |b| b.iter(|| iter_k_equal(3, 4).unwrap().count()));
    g.bench_function("count/k-divisible/5x40", |b| b.iter(|| count_k_divisible(black_box(5), black_box(40))));
    g.finish();
}

fn kreweras(c: &mut Criterion) {
    let lattice: Vec<_> = iter_nc(9).unwrap().collect();
    c.bench_function("kreweras/nc9", |b| b.iter(|| lattice.iter().map(|p| p.kreweras().len()).sum::<usize>()));
}

fn cumulants(c: &mut Criterion) {
    let m = MomentSequence::new((1..=9).map(|i| ratio(i * i, 3)).collect()).unwrap();
    let mut g = c.benchmark_group("moments-to-cumulants");
    g.bench_function("recursion/9", |b| b.iter(|| free_cumulants_from_moments(black_box(&m))));
    g.bench_function("mobius/9", |b| b.iter(|| free_cumulants_via_mobius(black_box(&m)).unwrap()));
    g.finish();
}

fn convolution(c: &mut Criterion) {
    let law = NamedLaw::two_point(ratio(0, 1), ratio(3, 2)).unwrap();
    let order = 4;
    let spec = law.spec(order).unwrap();
    let mut g = c.benchmark_group("boxtimes");
    for k in [2usize, 3] {
        let specs: Vec<MeasureSpec> = vec![spec.clone(); k];
        for strategy in [Strategy::Direct, Strategy::Iterated] {
            let id = BenchmarkId::new(strategy.to_string(), k);
            g.bench_with_input(id, &specs, |b, specs| {
                b.iter(|| Convolver::default().boxtimes_k(specs, order, strategy).unwrap())
            });
        }
    }
    let warm = Convolver::default();
    g.bench_function("powers/cached/k32", |b| b.iter(|| warm.boxtimes_powers(&spec, 32, order).unwrap()));
    g.finish();
}

criterion_group!(benches, enumeration, kreweras, cumulants, convolution);
criterion_main!(benches);
