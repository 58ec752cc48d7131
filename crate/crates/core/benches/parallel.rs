use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use maxmult::dyadic::WindowFamily;
use maxmult::lab::{CorpusSpec, GridSpec};
use maxmult::norms::{sigma_norm, SpaceTag};
use maxmult::operators::{maximal_operator, square_function, TGrid};
use maxmult::par;
use maxmult::symbols::window_symbol;

const MODES: [(&str, bool); 2] = [("parallel", false), ("sequential", true)];

fn operators(c: &mut Criterion) {
    let grid = GridSpec::with_nyquist(1, 4096, 1.0).grid().unwrap();
    let f = CorpusSpec::for_nyquist(1.0).build(&grid).unwrap().remove(0);
    let m = window_symbol();
    let tg = TGrid::default();
    let mut g = c.benchmark_group("operators");
    g.sample_size(10);
    for (mode, seq) in MODES {
        par::set_sequential(seq);
        g.bench_function(BenchmarkId::new("maximal", mode), |b| {
            b.iter(|| maximal_operator(&m, &f, &tg).unwrap())
        });
        g.bench_function(BenchmarkId::new("square_function", mode), |b| {
            b.iter(|| square_function(&m, &f, &tg).unwrap())
        });
    }
    par::set_sequential(false);
    g.finish();
}

fn norms(c: &mut Criterion) {
    let grid = GridSpec::with_nyquist(1, 8192, 2.0).grid().unwrap();
    let w = WindowFamily::new(-20, 20).unwrap();
    let m = window_symbol();
    let mut g = c.benchmark_group("sigma_norm");
    g.sample_size(10);
    for (mode, seq) in MODES {
        par::set_sequential(seq);
        for (name, space) in [
            ("sobolev", SpaceTag::SobolevL2 { s: 1.0 }),
            ("besov", SpaceTag::BesovDiag { p: 4.0, s: 1.0 }),
        ] {
            g.bench_function(BenchmarkId::new(name, mode), |b| {
                b.iter(|| sigma_norm(&m, space, 0.0, &w, &grid).unwrap())
            });
        }
    }
    par::set_sequential(false);
    g.finish();
}

criterion_group!(benches, operators, norms);
criterion_main!(benches);
