use cubical_core::gen::{Config, Gen};
use cubical_core::nbe::{nbe_tm, nbe_ty};
use cubical_core::normal::Embed;

#[test]
fn nbe_is_idempotent_on_generated_terms() {
    let mut g = Gen::new(1, Config::full());
    let mut checked = 0;
    for round in 0..300 {
        let dims = round % 4;
        let ctx = g.context(dims, round % 3, 2);
        let ty = g.ty(&ctx, 3);
        let Some(t) = g.term(&ctx, &ty, 4) else {
            continue;
        };
        let nf = nbe_tm(&ctx, &ty, &t).unwrap_or_else(|e| panic!("round {round}: {e}\n{t}"));
        let ty_nf = nbe_ty(&ctx, &ty).unwrap();
        let ty2 = Embed::ty(ctx.len(), &ty_nf);
        let again = nbe_tm(&ctx, &ty2, &Embed::nf(ctx.len(), &nf))
            .unwrap_or_else(|e| panic!("round {round}: {e}\n{nf}"));
        assert_eq!(nf.to_string(), again.to_string(), "round {round}: term {t}");
        checked += 1;
    }
    assert!(checked > 200, "{checked}");
}

#[test]
fn kan_boundaries_hold_on_generated_instances() {
    let mut g = Gen::new(2, Config::full());
    for round in 0..200 {
        let k = g.kan_instance(3, 2);
        let got = nbe_tm(&k.ctx, &k.ty, &k.term)
            .unwrap_or_else(|e| panic!("round {round}: {e}\n{}", k.term));
        let want = nbe_tm(&k.ctx, &k.ty, &k.expected).unwrap();
        assert_eq!(
            got.to_string(),
            want.to_string(),
            "round {round}: {}",
            k.term
        );
    }
}
