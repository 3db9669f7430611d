use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use quadwalk::classifier::classify_with;
use quadwalk::enumerator::enumerate_with;
use quadwalk::exactalg::Rat;
use quadwalk::model::{Model, StepSet};
use quadwalk::par::{self, Exec};
use quadwalk::sigmadist::MatrixOptions;

fn grid() -> Vec<Model> {
    let vals = [Rat::new(1, 1), Rat::new(4, 3), Rat::new(3, 2), Rat::new(2, 1), Rat::new(3, 1)];
    let mut out = Vec::new();
    for set in StepSet::ALL {
        for a in &vals {
            for b in &vals {
                out.push(Model::unit(set, a.clone(), b.clone()));
            }
        }
    }
    out
}

fn bench_enumerate(c: &mut Criterion) {
    let m = Model::unit(StepSet::S5, Rat::from(2), Rat::new(3, 2));
    let mut g = c.benchmark_group("enumerate_n30");
    g.sample_size(10);
    for (name, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
        g.bench_function(name, |b| b.iter(|| black_box(enumerate_with(&m, 30, exec))));
    }
    g.finish();
}

fn bench_classify_grid(c: &mut Criterion) {
    let models = grid();
    let mut g = c.benchmark_group("classify_grid");
    g.sample_size(10);
    for (name, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
        let opts = MatrixOptions { exec: Exec::Sequential, ..MatrixOptions::default() };
        g.bench_function(name, |b| {
            b.iter(|| black_box(par::map_with(exec, &models, |m| classify_with(m, &opts).map(|c| c.verdict))))
        });
    }
    g.finish();
}

fn bench_matrix_entries(c: &mut Criterion) {
    let curve = quadwalk::curve::Curve::new(&Model::unit(StepSet::S5, Rat::from(3), Rat::from(2)));
    let mut g = c.benchmark_group("direct_matrices");
    g.sample_size(10);
    for (name, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
        g.bench_function(name, |b| b.iter(|| black_box(quadwalk::sigmadist::direct_matrices(&curve, 5, exec))));
    }
    g.finish();
}

criterion_group!(benches, bench_enumerate, bench_classify_grid, bench_matrix_entries);
criterion_main!(benches);
