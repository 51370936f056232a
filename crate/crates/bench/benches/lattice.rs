use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use ringlat::fixtures;
use ringlat::poset::{antichain_profile, SupportPoset};
use ringlat::splitter::splitter_suite;
use ringlat::Limits;
use ringlat_bench::{extension, trees, EXTENSIONS};

fn enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate_interval");
    for &name in EXTENSIONS {
        let spec = fixtures::extension_spec(name).unwrap();
        g.bench_function(name, |b| b.iter(|| black_box(spec.build(Limits::default()).unwrap().len())));
    }
    g.finish();
}

fn antichains(c: &mut Criterion) {
    let mut g = c.benchmark_group("antichain_profile");
    for n in [8, 16, 32] {
        let inputs = trees(n, 16);
        g.bench_with_input(BenchmarkId::new("random trees", n), &inputs, |b, ts| {
            b.iter(|| ts.iter().map(|t| antichain_profile(t).predicted_size).sum::<u128>())
        });
    }
    let wide = SupportPoset::antichain(20);
    g.bench_function("antichain of 20", |b| b.iter(|| antichain_profile(black_box(&wide)).predicted_size));
    g.finish();
}

fn splitters(c: &mut Criterion) {
    let mut g = c.benchmark_group("splitter_suite");
    g.sample_size(10);
    for &name in EXTENSIONS {
        let e = extension(name);
        g.bench_function(name, |b| b.iter(|| splitter_suite(&e, Limits::default()).unwrap().evaluations()));
    }
    g.finish();
}

criterion_group!(benches, enumeration, antichains, splitters);
criterion_main!(benches);
