use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hsgn_bench::planted;
use hsgn_core::hop::build_hop_table;
use hsgn_core::reconstruct::{reconstruct_iterative, Threshold};
use hsgn_core::solver::{sgn_step, snmf_step, init_factors, LaplacianPieces, SgnConfig};

fn hop_table(c: &mut Criterion) {
    let mut group = c.benchmark_group("hop_table");
    for &n in &[100usize, 400] {
        let (g, _) = planted(4, n / 4, 8.0, 1);
        for r in [2usize, 3] {
            group.bench_with_input(BenchmarkId::new(format!("r{r}"), n), &g, |b, g| {
                b.iter(|| build_hop_table(g, r).unwrap())
            });
        }
    }
    group.finish();
}

fn reconstruction(c: &mut Criterion) {
    let (g, _) = planted(4, 100, 8.0, 2);
    c.bench_function("reconstruct_r2_d3_n400", |b| {
        b.iter(|| reconstruct_iterative(&g, 2, Threshold::Finite(2.0), 3).unwrap())
    });
}

fn updates(c: &mut Criterion) {
    let mut group = c.benchmark_group("update_step");
    for &n in &[400usize, 2000] {
        let (g, _) = planted(4, n / 4, 8.0, 3);
        let cfg = SgnConfig { k: 4, ..Default::default() };
        let lap = LaplacianPieces::from_adjacency(&g);
        let f = init_factors(n, 4, 0);
        group.bench_with_input(BenchmarkId::new("sgn", n), &n, |b, _| {
            b.iter(|| sgn_step(&g, &f, &cfg, &lap).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("snmf", n), &n, |b, _| b.iter(|| snmf_step(&g, &f.x).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, hop_table, reconstruction, updates);
criterion_main!(benches);
