use criterion::{black_box, criterion_group, criterion_main, Criterion};
use pmas_bench::{load, CANNON, TRAINS};
use pmas_core::encoder::Semantics;
use pmas_core::engine::{breach, preimage, BreachOptions};
use pmas_core::logic::{euf_sat_cube, Budget};
use pmas_core::mcmt::emit_mcmt;
use pmas_core::model::parse_pmas;

fn euf(c: &mut Criterion) {
    let (_, ab, _) = load(CANNON, Semantics::Interleaved);
    c.bench_function("euf/cannon-guards", |b| {
        b.iter(|| {
            for r in &ab.rules {
                black_box(euf_sat_cube(&ab.sig, &r.guard).unwrap());
            }
        })
    });
}

fn pre(c: &mut Criterion) {
    let (_, ab, g) = load(CANNON, Semantics::Interleaved);
    c.bench_function("preimage/cannon-goal-all-rules", |b| {
        b.iter(|| {
            for r in &ab.rules {
                for cube in &g.cubes {
                    black_box(preimage(&ab.sig, r, cube, &mut Budget::unlimited()).unwrap());
                }
            }
        })
    });
}

fn reach(c: &mut Criterion) {
    let mut group = c.benchmark_group("breach");
    group.sample_size(10);
    for (name, src) in [("cannon", CANNON), ("trains", TRAINS)] {
        for sem in [Semantics::Interleaved, Semantics::Concurrent] {
            let (_, ab, g) = load(src, sem);
            group.bench_function(format!("{name}/{sem}"), |b| {
                b.iter(|| black_box(breach(&ab, &g, &BreachOptions::default()).unwrap()))
            });
        }
    }
    group.finish();
}

fn front_end(c: &mut Criterion) {
    c.bench_function("parse/cannon", |b| b.iter(|| black_box(parse_pmas(CANNON).unwrap())));
    let (_, ab, g) = load(CANNON, Semantics::Interleaved);
    c.bench_function("emit-mcmt/cannon", |b| b.iter(|| black_box(emit_mcmt(&ab, &g).unwrap())));
}

criterion_group!(benches, euf, pre, reach, front_end);
criterion_main!(benches);
