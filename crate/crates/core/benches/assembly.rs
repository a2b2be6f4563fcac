use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nccurl::assembly::{assemble, FeSpace, ModelParams};
use nccurl::exec::Execution;
use nccurl::mesh::generate_box_mesh;
use nccurl::solver::{solve_cg, CgOptions};
use nccurl::Vec3;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn load(x: &Vec3) -> Vec3 {
    Vec3::new(x.y * x.z, x.x.sin(), 1.0)
}

fn bench_space(c: &mut Criterion) {
    let mesh = generate_box_mesh(4).unwrap();
    let mut group = c.benchmark_group("fe_space");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| FeSpace::new(black_box(mesh.clone()), exec).unwrap())
        });
    }
    group.finish();
}

fn bench_assembly(c: &mut Criterion) {
    let mut group = c.benchmark_group("assemble");
    group.sample_size(10);
    for n in [2, 4] {
        let space = FeSpace::new(generate_box_mesh(n).unwrap(), Execution::default()).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &space, |b, s| {
                b.iter(|| assemble(s, &ModelParams::default(), &load, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_solve(c: &mut Criterion) {
    let space = FeSpace::new(generate_box_mesh(4).unwrap(), Execution::default()).unwrap();
    let sys = assemble(&space, &ModelParams::default(), &load, Execution::default()).unwrap();
    let mut group = c.benchmark_group("cg");
    group.sample_size(10);
    for (name, exec) in MODES {
        let opts = CgOptions {
            exec,
            ..CgOptions::default()
        };
        group.bench_function(name, |b| {
            b.iter(|| solve_cg(&sys.matrix, black_box(&sys.rhs), &opts).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_space, bench_assembly, bench_solve);
criterion_main!(benches);
