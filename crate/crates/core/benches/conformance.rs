use std::fmt::Write;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pyts_core::frontend::{Project, ProjectOptions};
use pyts_core::par::Exec;

const TYPES: [&str; 5] = ["int", "float", "str", "bool", "bytes"];

/// `protocols` protocols and `classes` classes, each with a few methods
/// drawn from a small signature pool so that some pairs conform.
fn corpus(protocols: usize, classes: usize) -> String {
    let mut src = String::from("from typing import Protocol\n\n");
    for p in 0..protocols {
        let _ = writeln!(src, "class P{p}(Protocol):");
        for m in 0..3 {
            let t = TYPES[(p + m) % TYPES.len()];
            let _ = writeln!(src, "    def m{}(self, x: {t}) -> {t}: ...", (p + m) % 7);
        }
        src.push('\n');
    }
    for c in 0..classes {
        let _ = writeln!(src, "class C{c}:");
        for m in 0..5 {
            let t = TYPES[(c * 3 + m) % TYPES.len()];
            let _ = writeln!(src, "    def m{}(self, x: {t}) -> {t}: ...", (c + m) % 7);
        }
        src.push('\n');
    }
    src
}

fn load(src: &str, exec: Exec) -> Project {
    let opts = ProjectOptions { exec, ..Default::default() };
    Project::from_sources(&[("bench.py".into(), src.into())], opts).unwrap()
}

fn relations(c: &mut Criterion) {
    let mut group = c.benchmark_group("relations");
    group.sample_size(20);
    for size in [10, 40, 120] {
        let src = corpus(size / 2, size);
        for (label, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
            let project = load(&src, exec);
            group.bench_with_input(BenchmarkId::new(label, size), &project, |b, p| b.iter(|| p.relations()));
        }
    }
    group.finish();
}

fn parsing(c: &mut Criterion) {
    let mut group = c.benchmark_group("load");
    group.sample_size(20);
    let files: Vec<(String, String)> = (0..32).map(|i| (format!("m{i}.py"), corpus(4, 12).replace("class ", &format!("class M{i}")))).collect();
    for (label, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
        group.bench_function(label, |b| {
            b.iter(|| {
                let opts = ProjectOptions { exec, ..Default::default() };
                Project::from_sources(&files, opts).unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, relations, parsing);
criterion_main!(benches);
