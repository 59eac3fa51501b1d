use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ekr_core::baranyai::scan_intervals_exhaustive;
use ekr_core::ekr::max_intersecting_with;
use ekr_core::katona::q_bruteforce_with;
use ekr_core::transposition::center_map_with;
use ekr_core::{enumerate_matchings, star_family, Edge, Execution, Params, SearchBudget};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn compatibility(c: &mut Criterion) {
    let p = Params::new(4, 2).unwrap();
    let a = enumerate_matchings(p).into_iter().next().unwrap();
    let mut group = c.benchmark_group("q_bruteforce_n4");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| q_bruteforce_with(&a, p, 8, exec).unwrap())
        });
    }
    group.finish();
}

fn goodness(c: &mut Criterion) {
    let mut group = c.benchmark_group("intervals_n4");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| scan_intervals_exhaustive(4, 3, 8, exec).unwrap())
        });
    }
    group.finish();
}

fn centers(c: &mut Criterion) {
    let p = Params::new(4, 2).unwrap();
    let family = star_family(p, Edge::new(7, 8).unwrap()).unwrap();
    let mut group = c.benchmark_group("center_map_4_2");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| center_map_with(&family, p, 8, exec).unwrap())
        });
    }
    group.finish();
}

fn search(c: &mut Criterion) {
    let p = Params::new(4, 2).unwrap();
    let budget = SearchBudget { enumerate_all_maximum: true, ..SearchBudget::default() };
    let mut group = c.benchmark_group("max_clique_4_2");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| max_intersecting_with(p, budget, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, compatibility, goodness, centers, search);
criterion_main!(benches);
