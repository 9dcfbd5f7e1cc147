use std::hint::black_box;

use clasper_core::braid::{bing_braid, random_commutator, random_pure_braid};
use clasper_core::clasper::random::{random_clasper, random_marking};
use clasper_core::clasper::zip;
use clasper_core::diagram::{space_dimension, Relation, Skeleton, StuSign};
use clasper_core::knot::random::random_knot;
use clasper_core::knot::{a2_invariant, conway_polynomial};
use clasper_core::magnus::{free_mu_table, mu_table};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn braids(c: &mut Criterion) {
    let mut g = c.benchmark_group("bing_mu");
    for k in 1..=3 {
        let b = bing_braid(k).unwrap();
        g.bench_with_input(BenchmarkId::new("free_mu_table", k), &b, |bch, b| {
            bch.iter(|| free_mu_table(black_box(b), k + 1).unwrap())
        });
    }
    g.finish();

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let u = random_pure_braid(&mut rng, 4, 3);
    let w = u.compose(&random_commutator(&mut rng, 4, 3)).unwrap();
    c.bench_function("mu_table/word_route", |bch| bch.iter(|| mu_table(black_box(&w), 3).unwrap()));
    c.bench_function("mu_table/series_route", |bch| bch.iter(|| free_mu_table(black_box(&w), 3).unwrap()));
}

fn diagrams(c: &mut Criterion) {
    let s = Skeleton::circle();
    let mut g = c.benchmark_group("space_dimension");
    g.sample_size(10);
    for k in 2..=4 {
        g.bench_with_input(BenchmarkId::new("jacobi", k), &k, |bch, &k| {
            bch.iter(|| space_dimension(&s, k, &[Relation::OneT, Relation::As, Relation::Ihx, Relation::Stu], StuSign::Standard))
        });
        g.bench_with_input(BenchmarkId::new("chord", k), &k, |bch, &k| {
            bch.iter(|| space_dimension(&s, k, &[Relation::OneT, Relation::FourT], StuSign::Standard))
        });
    }
    g.finish();
}

fn knots(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let ds: Vec<_> = (0..8).map(|_| random_knot(&mut rng, 4, 12)).collect();
    c.bench_function("knot/conway", |bch| bch.iter(|| ds.iter().map(|d| conway_polynomial(d).unwrap().0.len()).sum::<usize>()));
    c.bench_function("knot/a2_gauss", |bch| bch.iter(|| ds.iter().map(|d| a2_invariant(d).unwrap()).sum::<i64>()));
}

fn claspers(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cases: Vec<_> = (0..50)
        .map(|_| {
            let g = random_clasper(&mut rng, 12);
            let m = random_marking(&mut rng, &g);
            (g, m)
        })
        .collect();
    c.bench_function("zip/50_instances", |bch| {
        bch.iter(|| cases.iter().map(|(g, m)| zip(g, m).unwrap().steps).sum::<usize>())
    });
}

criterion_group!(benches, braids, diagrams, knots, claspers);
criterion_main!(benches);
