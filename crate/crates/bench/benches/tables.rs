//! Exact-arithmetic paths: operator caches, `d_c` on monomials, 𝒥-set scans.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use rumin_core::{q_exponent, GroupFamily, JsetScan, RuminCalculus, StratifiedLieAlgebra};

fn builtin(f: GroupFamily) -> StratifiedLieAlgebra {
    StratifiedLieAlgebra::builtin(f)
}

fn operator_cache(c: &mut Criterion) {
    let mut group = c.benchmark_group("calculus_new");
    for f in [GroupFamily::Heisenberg(1), GroupFamily::Heisenberg(2), GroupFamily::Engel] {
        let g = builtin(f);
        group.bench_function(f.to_string(), |b| b.iter(|| RuminCalculus::new(black_box(&g))));
    }
    group.finish();
}

fn dc_monomials(c: &mut Criterion) {
    let mut group = c.benchmark_group("dc_monomials_h4");
    for f in [GroupFamily::Heisenberg(2), GroupFamily::Engel] {
        let calc = RuminCalculus::new(&builtin(f));
        let monos: Vec<_> = (0..calc.dim()).flat_map(|k| calc.rumin_monomials(k, 4)).collect();
        group.bench_function(f.to_string(), |b| {
            b.iter(|| {
                for (_, _, a) in &monos {
                    black_box(calc.dc(a).unwrap());
                }
            })
        });
    }
    group.finish();
}

fn scans(c: &mut Criterion) {
    let mut group = c.benchmark_group("jset_scan_d4");
    group.sample_size(10);
    for f in [GroupFamily::Heisenberg(2), GroupFamily::Heisenberg(3), GroupFamily::Engel] {
        let calc = RuminCalculus::new(&builtin(f));
        group.bench_function(f.to_string(), |b| b.iter(|| JsetScan::run(&calc, 4).unwrap()));
    }
    group.finish();
    let calc = RuminCalculus::new(&builtin(GroupFamily::Engel));
    c.bench_function("exponents_engel", |b| b.iter(|| q_exponent(&calc).unwrap()));
}

criterion_group!(benches, operator_cache, dc_monomials, scans);
criterion_main!(benches);
