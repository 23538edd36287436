use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use subfactor_angles::census::census;
use subfactor_angles::group::{named_group, Caps, Subgroup};
use subfactor_angles::verify::{run_suites, standard_corpus, Suite, VerifyOptions};
use subfactor_angles::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn bench_census(c: &mut Criterion) {
    let mut group = c.benchmark_group("census");
    group.sample_size(10);
    for family in ["symmetric(4)", "dihedral(12)", "direct_product(cyclic(2),quaternion(8))"] {
        let g = named_group(&family.parse().unwrap(), Caps::default()).unwrap().into_arc();
        let base = Subgroup::trivial(&g);
        for (label, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(label, family), &exec, |b, &exec| {
                b.iter(|| census(&g, &base, Caps::default(), exec).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_verify(c: &mut Criterion) {
    let corpus = standard_corpus(Caps::default()).unwrap();
    let small: Vec<_> = corpus.into_iter().filter(|e| e.group.order() <= 12).collect();
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    for suite in [Suite::Angles, Suite::Landau] {
        for (label, exec) in MODES {
            let opts = VerifyOptions { exec, rep_choices: 10, abstract_samples: 100, ..VerifyOptions::default() };
            group.bench_function(BenchmarkId::new(label, suite), |b| b.iter(|| run_suites(&small, &[suite], &opts).unwrap()));
        }
    }
    group.finish();
}

criterion_group!(benches, bench_census, bench_verify);
criterion_main!(benches);
