use criterion::{black_box, criterion_group, criterion_main, Criterion};

use lame_core::atlas::{atlas_entries, table1_rows};
use lame_core::belyi::{closed_form_fixtures, newton_solve, NewtonOptions};
use lame_core::counting::{dahmen_ordinary, lattice_oracle};
use lame_core::dessin::{enumerate_dessins, passport_for, Form, TriangleGroup, DEFAULT_DEGREE_CAP};
use lame_core::monodromy::profile_for_entry;
use lame_core::rational::rat;
use lame_core::AtlasFamily;

fn atlas(c: &mut Criterion) {
    c.bench_function("table1_rows", |b| b.iter(|| table1_rows().unwrap()));
}

fn closure(c: &mut Criterion) {
    let entry = atlas_entries().unwrap().into_iter().find(|e| e.family == AtlasFamily::Icosahedral).unwrap();
    c.bench_function("icosahedral_profile", |b| b.iter(|| profile_for_entry(black_box(&entry)).unwrap()));
}

fn counting(c: &mut Criterion) {
    c.bench_function("dahmen_ordinary_6_12", |b| b.iter(|| dahmen_ordinary(black_box(6), black_box(12)).unwrap()));
    c.bench_function("lattice_oracle_6_12", |b| b.iter(|| lattice_oracle(black_box(6), black_box(12), false).unwrap()));
}

fn dessins(c: &mut Criterion) {
    let passports = passport_for(rat(5, 6), TriangleGroup::new(4).unwrap(), Form::Algebraic).unwrap();
    c.bench_function("dessins_5_6_octahedral", |b| {
        b.iter(|| passports.iter().map(|p| enumerate_dessins(p, DEFAULT_DEGREE_CAP).unwrap().len()).sum::<usize>())
    });
}

fn newton(c: &mut Criterion) {
    let (_, passport, exact) = closed_form_fixtures().pop().unwrap();
    let start = exact.with_unknowns(&exact.unknowns().iter().map(|z| z * 1.01).collect::<Vec<_>>());
    c.bench_function("newton_quartic", |b| {
        b.iter(|| newton_solve(&passport, &start, NewtonOptions::default()).unwrap())
    });
}

criterion_group!(benches, atlas, closure, counting, dessins, newton);
criterion_main!(benches);
