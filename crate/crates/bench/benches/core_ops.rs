//! Benchmarks for the hot paths: exhaustive flag enumeration, variety
//! point counting, relative position, and insertion/extraction.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use dlspringer::combinatorics::{all_perms, rs_extract, rs_insert, Partition, Perm};
use dlspringer::flag_geometry::{
    flags, relative_position, translate_flag, Flag, VarietyKind, VarietySpec, DEFAULT_FLAG_BUDGET,
};
use dlspringer::gf::make_field;
use dlspringer::linalg::Mat;
use dlspringer::normal_forms::weyr_matrix;

fn flag_enumeration(c: &mut Criterion) {
    let field = make_field(2, 1, 2).unwrap();
    c.bench_function("enumerate flags n=4 over GF(4)", |b| {
        b.iter(|| {
            let mut count = 0u64;
            for f in flags(4, &field, DEFAULT_FLAG_BUDGET).unwrap() {
                black_box(&f);
                count += 1;
            }
            count
        })
    });
}

fn variety_count(c: &mut Criterion) {
    let field = make_field(2, 1, 2).unwrap();
    let spec = VarietySpec {
        n: 4,
        field: field.clone(),
        kind: VarietyKind::DeligneLusztig("2,1,4,3".parse::<Perm>().unwrap()),
    };
    c.bench_function("count variety points n=4 over GF(4)", |b| {
        b.iter(|| spec.count_points(black_box(DEFAULT_FLAG_BUDGET)).unwrap())
    });

    let shape: Partition = "2,2".parse().unwrap();
    let int_spec = VarietySpec {
        n: 4,
        field: field.clone(),
        kind: VarietyKind::Intersection(
            weyr_matrix(&shape, &field),
            "2,1,4,3".parse::<Perm>().unwrap(),
        ),
    };
    c.bench_function("count intersection points n=4 over GF(4)", |b| {
        b.iter(|| int_spec.count_points(black_box(DEFAULT_FLAG_BUDGET)).unwrap())
    });
}

fn relpos(c: &mut Criterion) {
    let field = make_field(2, 1, 2).unwrap();
    let e = Flag::standard(4, field.clone());
    // the anti-diagonal translate realizes the longest relative position,
    // so every column of the answer costs a rank computation
    let g = Mat::from_fn(4, 4, field.clone(), |i, j| {
        if i + j == 3 {
            field.one()
        } else {
            field.zero()
        }
    });
    let moved = translate_flag(&g, &e).unwrap();
    c.bench_function("relative position n=4", |b| {
        b.iter(|| relative_position(black_box(&e), black_box(&moved)).unwrap())
    });
}

fn insertion_roundtrip(c: &mut Criterion) {
    let perms = all_perms(6).unwrap();
    c.bench_function("insertion and extraction over all of S_6", |b| {
        b.iter(|| {
            for w in &perms {
                let (p, q) = rs_insert(black_box(w));
                black_box(rs_extract(&p, &q).unwrap());
            }
        })
    });
}

criterion_group!(benches, flag_enumeration, variety_count, relpos, insertion_roundtrip);
criterion_main!(benches);
