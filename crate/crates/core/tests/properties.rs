use cubical_core::check::equal_tm;
use cubical_core::cofib::{entails, left_invert};
use cubical_core::gen::{Config, Gen};
use cubical_core::nbe::nbe_tm;
use cubical_core::normal::Embed;
use cubical_core::syntax::{instantiate_dim, partial_boundary, subst_dim, subst_dims};
use cubical_core::{Binding, Cofib, Context, Dim, Term, TypeExpr};
use proptest::prelude::*;

const VARS: usize = 3;

fn dims() -> Context {
    (0..VARS).fold(Context::new(), |c, _| c.push_dim())
}

fn dim() -> impl Strategy<Value = Dim> {
    prop_oneof![
        Just(Dim::Zero),
        Just(Dim::One),
        (0..VARS).prop_map(Dim::Var),
    ]
}

fn cofib() -> impl Strategy<Value = Cofib> {
    let leaf = (dim(), dim()).prop_map(|(r, s)| Cofib::eq(r, s));
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Cofib::and(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Cofib::or(a, b)),
        ]
    })
}

/// A context, type and term drawn from the random generator.
fn generated(dims: usize, vars: usize, seed: u64) -> Option<(Context, TypeExpr, Term)> {
    let mut g = Gen::new(seed, Config::full());
    let ctx = g.context(dims, vars, 2);
    let ty = g.ty(&ctx, 2);
    let t = g.term(&ctx, &ty, 3)?;
    Some((ctx, ty, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn entailment_is_reflexive(phi in cofib()) {
        prop_assert!(entails(&dims(), &phi, &phi));
    }

    #[test]
    fn entailment_is_transitive(a in cofib(), b in cofib(), c in cofib()) {
        let ctx = dims();
        if entails(&ctx, &a, &b) && entails(&ctx, &b, &c) {
            prop_assert!(entails(&ctx, &a, &c));
        }
    }

    #[test]
    fn entailment_respects_connectives(a in cofib(), b in cofib()) {
        let ctx = dims();
        prop_assert!(entails(&ctx, &Cofib::and(a.clone(), b.clone()), &a));
        prop_assert!(entails(&ctx, &a, &Cofib::or(a.clone(), b.clone())));
        prop_assert!(entails(&ctx, &Cofib::bot(), &a));
        prop_assert!(entails(&ctx, &a, &Cofib::top()));
    }

    #[test]
    fn left_inversion_covers_and_satisfies(phi in cofib()) {
        let ctx = dims();
        let branches = left_invert(&ctx, &phi);
        let mut cover = Vec::new();
        for (subst, _) in &branches {
            prop_assert!(entails(&ctx, &Cofib::top(), &subst_dims(&phi, subst)));
            cover.push(Cofib::all(subst.iter().map(|&(i, r)| Cofib::eq(Dim::Var(i), r))));
        }
        prop_assert!(entails(&ctx, &phi, &Cofib::any(cover)));
    }

    #[test]
    fn boundary_commutes_with_substitution(i in 0..VARS, r in dim()) {
        let d = subst_dim(&partial_boundary(Dim::Var(i)), i, r);
        prop_assert_eq!(d, partial_boundary(r));
    }

    #[test]
    fn identity_substitution(seed in any::<u64>(), i in 0..2usize) {
        if let Some((_, ty, t)) = generated(2, 1, seed) {
            prop_assert_eq!(subst_dim(&t, i, Dim::Var(i)), t);
            prop_assert_eq!(subst_dim(&ty, i, Dim::Var(i)), ty);
        }
    }

    #[test]
    fn constant_substitutions_compose(seed in any::<u64>(), a in 0..2u8, b in 0..2u8) {
        let c = |x: u8| if x == 0 { Dim::Zero } else { Dim::One };
        if let Some((ctx, _, t)) = generated(2, 0, seed) {
            let idx = |l: usize| ctx.len() - 1 - l;
            let (i, j) = (idx(0), idx(1));
            let seq = subst_dim(&subst_dim(&t, i, c(a)), j, c(b));
            let par = subst_dims(&t, &[(i, c(a)), (j, c(b))]);
            prop_assert_eq!(seq, par);
        }
    }

    #[test]
    fn instantiating_a_shift_is_the_identity(seed in any::<u64>(), r in 0..2u8) {
        let r = if r == 0 { Dim::Zero } else { Dim::One };
        if let Some((_, ty, t)) = generated(1, 1, seed) {
            prop_assert_eq!(instantiate_dim(&t.shift(1), r), t.clone());
            prop_assert_eq!(instantiate_dim(&ty.shift(1), r), ty);
            prop_assert_eq!(t.shift(1).instantiate(&Term::Base), t);
        }
    }

    /// Normalizing and then restricting a dimension agrees with restricting
    /// and then normalizing.
    #[test]
    fn normalization_is_stable_under_restriction(seed in any::<u64>(), r in 0..2u8) {
        let r = if r == 0 { Dim::Zero } else { Dim::One };
        if let Some((ctx, ty, t)) = generated(2, 0, seed) {
            prop_assume!(ctx.bindings().iter().all(|b| matches!(b, Binding::Dim)));
            let nf = Embed::nf(ctx.len(), &nbe_tm(&ctx, &ty, &t).unwrap());
            let i = ctx.len() - 1;
            let (ty, t, nf) = (subst_dim(&ty, i, r), subst_dim(&t, i, r), subst_dim(&nf, i, r));
            prop_assert!(equal_tm(&ctx, &ty, &t, &nf).unwrap());
        }
    }
}
