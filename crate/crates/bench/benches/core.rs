use afweak_bench::finite;
use afweak_core::closure::{close, enumerate_small_biclosed, WindowSet};
use afweak_core::fan::classify;
use afweak_core::finite::join_finite;
use afweak_core::lattice::{iota, join_a, join_c, oracle_join, threshold_closure};
use afweak_core::sample::random_triple;
use afweak_core::{AffineType, Family};
use criterion::{black_box, criterion_group, criterion_main, Criterion};
use rand::rngs::StdRng;
use rand::SeedableRng;

fn joins(c: &mut Criterion) {
    let a3 = AffineType::a(4);
    let pair = [finite(a3, &[0, 1]), finite(a3, &[2, 3])];
    c.bench_function("join_a worked Ã3", |b| b.iter(|| join_a(black_box(&pair)).unwrap()));
    c.bench_function("oracle join worked Ã3", |b| b.iter(|| oracle_join(black_box(&pair)).unwrap()));
    let rels = [iota(&pair[0]).unwrap(), iota(&pair[1]).unwrap()];
    c.bench_function("threshold_closure M=4", |b| b.iter(|| threshold_closure(black_box(&rels)).unwrap()));

    let mut rng = StdRng::seed_from_u64(1);
    let c2 = AffineType::c(2);
    let pairs: Vec<_> = (0..16).map(|_| [random_triple(&mut rng, c2, 4), random_triple(&mut rng, c2, 4)]).collect();
    c.bench_function("join_c random C̃2 x16", |b| {
        b.iter(|| {
            for p in &pairs {
                join_c(black_box(p)).unwrap();
            }
        })
    });
    c.bench_function("join_finite B3", |b| {
        b.iter(|| join_finite(Family::B, 3, black_box("624351"), black_box("365214")).unwrap())
    });
}

fn windows(c: &mut Criterion) {
    let a3 = AffineType::a(4);
    let t = finite(a3, &[0, 1, 2, 3, 0]);
    let w = t.window(12);
    c.bench_function("classify Ã3 H=12", |b| b.iter(|| classify(black_box(&w)).unwrap()));
    let seeds = WindowSet::from_predicate(a3, 12, |r| r.delta_height() == 0 && r.i == 0);
    c.bench_function("close Ã3 H=12", |b| b.iter(|| close(black_box(&seeds))));
    c.bench_function("enumerate finite biclosed D̃3 size<=4", |b| {
        b.iter(|| enumerate_small_biclosed(black_box(AffineType::d(3)), 8, 4))
    });
}

criterion_group!(benches, joins, windows);
criterion_main!(benches);
