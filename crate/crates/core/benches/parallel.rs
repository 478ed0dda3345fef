//! Parallel versus sequential on the data-parallel hot spots: monomial
//! enumeration, coefficient verification and batched instance evaluation.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use polyform::algebra::find_prime_in_dyadic_interval;
use polyform::circuits::{sum_of_products_circuit, verify_circuit};
use polyform::formulations::{formulate, Instance, Params, Problem};
use polyform::par;
use polyform::pipeline::{run_pipeline, PipelineConfig};
use polyform::reference as oracle;
use polyform::solvers::ProblemInstance;

fn both<R>(c: &mut Criterion, group: &str, mut f: impl FnMut() -> R) {
    let mut g = c.benchmark_group(group);
    g.sample_size(10);
    g.bench_function(BenchmarkId::from_parameter("parallel"), |b| {
        b.iter(|| black_box(f()))
    });
    g.bench_function(BenchmarkId::from_parameter("sequential"), |b| {
        b.iter(|| par::sequential(|| black_box(f())))
    });
    g.finish();
}

fn formulate_bench(c: &mut Criterion) {
    let kpath = Params::new(10, 2).with("k", 4).unwrap();
    both(c, "formulate/k-path n=10 k=4", || {
        formulate(Problem::KPath, &kpath).unwrap()
    });
    let ham = Params::new(8, 2);
    both(c, "formulate/ham-path n=8", || {
        formulate(Problem::HamPath, &ham).unwrap()
    });
}

fn verify_bench(c: &mut Criterion) {
    let out = formulate(Problem::HamPath, &Params::new(6, 3)).unwrap();
    let p = find_prime_in_dyadic_interval(20).unwrap();
    let target = out.poly.reduce_mod(p);
    let circuit = sum_of_products_circuit(&target);
    both(c, "verify/ham-path n=6", || {
        verify_circuit(&circuit, &target, out.delta(), p).unwrap()
    });
}

fn pipeline_bench(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let instances: Vec<Instance> = (0..500)
        .map(|_| ProblemInstance::Graph(oracle::random_graph(&mut rng, 6, 0.35, true)).into())
        .collect();
    let params = Params::new(6, 3);
    both(c, "pipeline/ham-path 500 graphs", || {
        run_pipeline(
            Problem::HamPath,
            &params,
            &instances,
            &PipelineConfig::default(),
        )
        .unwrap()
    });
}

criterion_group!(benches, formulate_bench, verify_bench, pipeline_bench);
criterion_main!(benches);
