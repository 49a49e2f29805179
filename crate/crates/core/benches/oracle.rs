//! Sequential versus rayon-parallel bounded oracles on a fixed batch of
//! random models. Build with `--no-default-features` to see the parallel
//! strategy fall back to a plain loop.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use ropacity::automata::Nfa;
use ropacity::exec::Strategy;
use ropacity::generate::{random_model, random_nfa, rng, ModelParams};
use ropacity::transforms::{oracle_verify_rlbo, LanguageSpec};
use ropacity::verify::oracle_verify_rcso;
use ropacity::OpenDes;

const MODELS: usize = 16;

fn models() -> Vec<OpenDes> {
    let params = ModelParams {
        max_states: 6,
        max_inputs: 3,
        ..Default::default()
    };
    let mut r = rng(0xbe4c);
    (0..MODELS).map(|_| random_model(&mut r, &params)).collect()
}

fn strategies() -> [(&'static str, Strategy); 2] {
    [("sequential", Strategy::Sequential), ("parallel", Strategy::Parallel)]
}

fn rcso(c: &mut Criterion) {
    let models = models();
    let mut group = c.benchmark_group("oracle_rcso");
    for k in [4, 6] {
        for (name, strategy) in strategies() {
            group.bench_with_input(BenchmarkId::new(name, k), &k, |b, &k| {
                b.iter(|| {
                    for m in &models {
                        black_box(oracle_verify_rcso(m, m.secret(), k, strategy).unwrap());
                    }
                })
            });
        }
    }
    group.finish();
}

fn rlbo(c: &mut Criterion) {
    let models = models();
    let specs: Vec<(LanguageSpec, LanguageSpec)> = models
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let spec = |seed: u64| -> Nfa { random_nfa(&mut rng(seed), m.alphabet().outputs(), 3, false) };
            (LanguageSpec::Output(spec(2 * i as u64)), LanguageSpec::Output(spec(2 * i as u64 + 1)))
        })
        .collect();
    let mut group = c.benchmark_group("oracle_rlbo");
    for (name, strategy) in strategies() {
        group.bench_function(BenchmarkId::new(name, 5), |b| {
            b.iter(|| {
                for (m, (os, ons)) in models.iter().zip(&specs) {
                    black_box(oracle_verify_rlbo(m, os, ons, 5, strategy).unwrap());
                }
            })
        });
    }
    group.finish();
}

criterion_group!(benches, rcso, rlbo);
criterion_main!(benches);
