use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use cubical_cli::{Emit, Session};
use cubical_core::cofib;
use cubical_core::gen::{Config, Gen};
use cubical_core::nbe::nbe_tm;
use cubical_core::{Cofib, Context, Dim, Term, TypeExpr};

fn generated(c: &mut Criterion) {
    let mut g = Gen::new(11, Config::full());
    let mut samples: Vec<(Context, TypeExpr, Term)> = Vec::new();
    let mut round = 0;
    while samples.len() < 50 {
        let ctx = g.context(round % 4, round % 3, 2);
        let ty = g.ty(&ctx, 3);
        if let Some(t) = g.term(&ctx, &ty, 1 + round % 5) {
            samples.push((ctx, ty, t));
        }
        round += 1;
    }
    c.bench_function("nbe/generated-50", |b| {
        b.iter(|| {
            for (ctx, ty, t) in &samples {
                black_box(nbe_tm(ctx, ty, t).unwrap());
            }
        })
    });

    let kan: Vec<_> = (0..50).map(|_| g.kan_instance(3, 2)).collect();
    c.bench_function("nbe/kan-50", |b| {
        b.iter(|| {
            for k in &kan {
                black_box(nbe_tm(&k.ctx, &k.ty, &k.term).unwrap());
            }
        })
    });
}

fn entailment(c: &mut Criterion) {
    let ctx = (0..3).fold(Context::new(), |c, _| c.push_dim());
    let (i, j, k) = (Dim::Var(2), Dim::Var(1), Dim::Var(0));
    let hyp = Cofib::and(
        Cofib::or(Cofib::eq(i, j), Cofib::eq(k, Dim::One)),
        Cofib::forall(Cofib::or(
            Cofib::eq(Dim::Var(0), Dim::Zero),
            // `j` under the binder.
            Cofib::eq(Dim::Var(2), Dim::Zero),
        )),
    );
    let goal = Cofib::or(
        Cofib::and(Cofib::eq(i, Dim::Zero), Cofib::eq(j, Dim::Zero)),
        Cofib::eq(i, j),
    );
    c.bench_function("cofib/entails", |b| {
        b.iter(|| black_box(cofib::entails(&ctx, &hyp, &goal)))
    });
}

const FILE: &str = include_str!("../../cli/tests/data/glue.ctt");

fn elaboration(c: &mut Criterion) {
    c.bench_function("check/glue.ctt", |b| {
        b.iter(|| {
            let mut s = Session::new();
            s.load(black_box(FILE)).unwrap();
            black_box(s.normalize("coe-glue", Emit::Nf).unwrap())
        })
    });
}

criterion_group!(benches, generated, entailment, elaboration);
criterion_main!(benches);
