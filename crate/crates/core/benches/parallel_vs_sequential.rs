use charcalc::asymptotics::{dominance_report_with, CharacterTable, GeometricSide, SideClass};
use charcalc::characters::orthogonality_integral_with;
use charcalc::parallel::Execution;
use charcalc::rational::q;
use charcalc::rootdata::build_root_datum;
use charcalc::{Complex64, Family, LatticeKind, TorusElement, Weight};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn orthogonality(c: &mut Criterion) {
    let d = build_root_datum(Family::B, 2, LatticeKind::Integral).unwrap();
    let lam = Weight::from_ints(&[2, 1]);
    let mut group = c.benchmark_group("orthogonality_b2");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, 24), &exec, |b, &exec| {
            b.iter(|| orthogonality_integral_with(&d, &lam, &lam, 24, exec).unwrap())
        });
    }
    group.finish();
}

fn side() -> GeometricSide {
    let d = build_root_datum(Family::B, 3, LatticeKind::Integral).unwrap();
    let t = |xs: [(i64, i64); 3]| TorusElement::new(xs.iter().map(|&(n, m)| q(n, m)).collect());
    let classes = vec![
        SideClass { gamma: TorusElement::identity(3), coeff: Complex64::new(1.0, 0.0) },
        SideClass { gamma: t([(1, 2), (1, 2), (0, 1)]), coeff: Complex64::new(40.0, -3.0) },
        SideClass { gamma: t([(1, 3), (1, 4), (1, 6)]), coeff: Complex64::new(-7.0, 2.0) },
        SideClass { gamma: t([(0, 1), (0, 1), (1, 2)]), coeff: Complex64::new(120.0, 0.0) },
    ];
    GeometricSide::new(d, classes, 0).unwrap()
}

fn dominance(c: &mut Criterion) {
    let side = side();
    let dir = Weight::from_ints(&[3, 2, 1]);
    let mut group = c.benchmark_group("dominance_b3");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, 200), &exec, |b, &exec| {
            b.iter(|| dominance_report_with(&side, &dir, 200, exec).unwrap())
        });
    }
    group.finish();
}

fn character_table(c: &mut Criterion) {
    let side = side();
    let classes: Vec<TorusElement> = side.classes().iter().map(|c| c.gamma.clone()).collect();
    let mut group = c.benchmark_group("character_table_b3");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, 12), &exec, |b, &exec| {
            b.iter(|| CharacterTable::with_execution(side.datum(), &classes, 12, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, orthogonality, dominance, character_table);
criterion_main!(benches);
