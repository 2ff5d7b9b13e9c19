//! Microbenchmarks for the three hot paths: Hecke multiplication, building a
//! module complex with exact boundary ranks, and a bar differential rank.

use criterion::{criterion_group, criterion_main, Criterion};
use hhl_core::bar::BarContext;
use hhl_core::complexes::{build_d_complex, WeylType};
use hhl_core::coxeter::all_elements;
use hhl_core::hecke::HeckeElement;
use hhl_core::homology::{homology_report, rank_exact};
use hhl_core::scalar::ScalarConfig;

fn hecke_mul(c: &mut Criterion) {
    let cfg = ScalarConfig::rational("1/3").unwrap();
    let elems = all_elements(4);
    // two mid-length elements whose product already has a wide support
    let a = HeckeElement::t_of(elems[200].clone(), &cfg);
    let b = HeckeElement::t_of(elems[300].clone(), &cfg);
    let ab = a.mul(&b);
    c.bench_function("hecke: square a spread-out element of H(B_4)", |bch| {
        bch.iter(|| ab.mul(&ab))
    });
}

fn module_complex(c: &mut Criterion) {
    let cfg = ScalarConfig::rational("1/3").unwrap();
    c.bench_function("complexes: build Dpm(3) and take homology", |bch| {
        bch.iter(|| {
            let dpm = build_d_complex(3, WeylType::B, &cfg).unwrap();
            homology_report(&dpm).unwrap()
        })
    });
}

fn bar_differential(c: &mut Criterion) {
    let cfg = ScalarConfig::rational("-1").unwrap();
    let ctx = BarContext::new(2, &cfg);
    c.bench_function("bar: rank of d_2 over H(B_2)", |bch| {
        bch.iter(|| rank_exact(&ctx.differential(2)))
    });
}

criterion_group!(benches, hecke_mul, module_complex, bar_differential);
criterion_main!(benches);
