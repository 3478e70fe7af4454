use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use cornerlab::gjfun::check_subadditive_with;
use cornerlab::hull::{CornerPolyhedron, EnumCaps};
use cornerlab::model::PureInstance;
use cornerlab::par::Exec;
use cornerlab::rational::q;
use cornerlab::selftest::random_symmetric_functions;

fn enumeration(c: &mut Criterion) {
    let inst = PureInstance::rational(
        &[q(5, 11), q(3, 13)],
        &[vec![q(1, 11), q(2, 13)], vec![q(3, 11), q(5, 13)], vec![q(7, 11), q(1, 13)], vec![q(2, 11), q(9, 13)]],
    )
    .unwrap();
    let mut group = c.benchmark_group("enumerate");
    group.sample_size(10);
    for exec in [Exec::Sequential, Exec::Parallel] {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &exec, |b, &exec| {
            b.iter(|| CornerPolyhedron::compute(&inst, EnumCaps::default(), exec).unwrap())
        });
    }
    group.finish();
}

fn subadditivity(c: &mut Criterion) {
    let fs: Vec<_> = random_symmetric_functions(40, 3).into_iter().map(|(f, _)| f.refine(&[q(1, 97), q(50, 97)])).collect();
    let mut group = c.benchmark_group("subadditivity");
    for exec in [Exec::Sequential, Exec::Parallel] {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &exec, |b, &exec| {
            b.iter(|| fs.iter().filter(|f| check_subadditive_with(f, exec).holds).count())
        });
    }
    group.finish();
}

criterion_group!(benches, enumeration, subadditivity);
criterion_main!(benches);
