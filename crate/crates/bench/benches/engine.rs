use criterion::{black_box, criterion_group, criterion_main, Criterion};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crk_core::catalog::{self, Family};
use crk_core::engine::{self, DEFAULT_ENUMERATION_LIMIT};
use crk_core::{BitVector, RowSpace};

fn bench_kernel(c: &mut Criterion) {
    let mut rng = StdRng::seed_from_u64(7);
    let width = 1024;
    let vectors: Vec<BitVector> = (0..256)
        .map(|_| {
            BitVector::from_ones(width, (0..width).filter(|_| rng.gen::<bool>())).unwrap()
        })
        .collect();
    c.bench_function("rowspace_insert_256x1024", |b| {
        b.iter(|| {
            let mut space = RowSpace::new(width).unwrap();
            for v in &vectors {
                space.insert(black_box(v)).unwrap();
            }
            black_box(space.rank())
        })
    });
}

fn bench_charrank(c: &mut Criterion) {
    let record = catalog::build(Family::Dold { m: 2, n: 3 }).unwrap();
    let eta = record.bundle("eta").unwrap().profile.clone();
    c.bench_function("charrank_dold_2_3_eta", |b| {
        b.iter(|| black_box(engine::charrank(black_box(&eta))))
    });
}

fn bench_ucharrank(c: &mut Criterion) {
    let rp8 = catalog::build(Family::Rp { n: 8 }).unwrap();
    c.bench_function("ucharrank_rp8", |b| {
        b.iter(|| {
            engine::ucharrank_formal(&rp8.algebra, &[], DEFAULT_ENUMERATION_LIMIT).unwrap()
        })
    });
    let dold = catalog::build(Family::Dold { m: 2, n: 3 }).unwrap();
    c.bench_function("ucharrank_dold_2_3", |b| {
        b.iter(|| {
            engine::ucharrank_formal(&dold.algebra, &dold.constraints, DEFAULT_ENUMERATION_LIMIT)
                .unwrap()
        })
    });
}

fn bench_cup_length(c: &mut Criterion) {
    let dold = catalog::build(Family::Dold { m: 4, n: 4 }).unwrap();
    c.bench_function("cup_length_dold_4_4", |b| {
        b.iter(|| black_box(engine::cup_length(&dold.algebra)))
    });
}

criterion_group!(
    benches,
    bench_kernel,
    bench_charrank,
    bench_ucharrank,
    bench_cup_length
);
criterion_main!(benches);
