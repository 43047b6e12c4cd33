use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use skein_torus::cli::{run_suite, VerifyOptions};
use skein_torus::exec::Strategy;

fn suite(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    for (name, strategy) in [("sequential", Strategy::Sequential), ("parallel", Strategy::Parallel)] {
        let opts = VerifyOptions { strategy, ..VerifyOptions::default() };
        group.bench_function(name, |b| b.iter(|| black_box(run_suite(&opts).unwrap())));
    }
    group.finish();
}

criterion_group!(benches, suite);
criterion_main!(benches);
