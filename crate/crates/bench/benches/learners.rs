use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;
use umtlab_core::learner::{mle, KgScoreboard, PlausibleTracker};
use umtlab_core::models::{gen_cn, gen_kg, kg_prior, CnParams, KgParams};
use umtlab_core::rng::stream;

fn kg(c: &mut Criterion) {
    let inst = gen_kg(1, KgParams { n: 10, r: 7, p: 0.5, alpha: 0.5 }).unwrap();
    let samples = inst.mu.sampler().sample_n(&mut stream(1, "bench/samples"), 64);
    c.bench_function("kg scoreboard update x64 (r=7, n=10)", |b| {
        b.iter_batched(
            || KgScoreboard::new(&inst.family, &inst.plausible).unwrap(),
            |mut board| {
                for &x in &samples {
                    board.update(x);
                }
                board
            },
            BatchSize::LargeInput,
        )
    });
    let mut board = KgScoreboard::new(&inst.family, &inst.plausible).unwrap();
    samples.iter().for_each(|&x| board.update(x));
    c.bench_function("kg top scorer (r=7, n=10)", |b| b.iter(|| black_box(&board).top_scorer()));

    let small = gen_kg(1, KgParams { n: 6, r: 5, p: 0.5, alpha: 0.5 }).unwrap();
    let rho = kg_prior(&small.plausible, 6).unwrap();
    let samples = small.mu.sampler().sample_n(&mut stream(1, "bench/samples"), 32);
    c.bench_function("generic mle x32 (r=5, n=6)", |b| {
        b.iter(|| mle(black_box(&samples), &rho, &small.family).unwrap())
    });
}

fn cn(c: &mut Criterion) {
    let params = CnParams { t_size: 10_000, p_size: 100_000, alpha: 0.3, family_size: 10_000 };
    let inst = gen_cn(1, params).unwrap();
    let sampler = inst.mu.sampler();
    let holdout = sampler.sample_n(&mut stream(1, "bench/holdout"), 200);
    let samples = sampler.sample_n(&mut stream(1, "bench/samples"), 16);
    c.bench_function("cn tracker update x16 (|Θ|=1e4)", |b| {
        b.iter_batched(
            || PlausibleTracker::new(&inst.family, &holdout).unwrap(),
            |mut tracker| {
                for &x in &samples {
                    tracker.update(x, &inst.sensical, &inst.family);
                }
                tracker.avg_error()
            },
            BatchSize::LargeInput,
        )
    });
}

criterion_group!(benches, kg, cn);
criterion_main!(benches);
