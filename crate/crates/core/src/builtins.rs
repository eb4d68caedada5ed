//! Encodings of contractibility, fibers and equivalences.
//!
//! ```text
//! isContr C     = Σ (c : C). Π (y : C). Path C c y
//! Fiber f b     = Σ (a : A). Path B (f a) b
//! Equiv A B     = Σ (f : A → B). Π (b : B). isContr (Fiber f b)
//! ```

use std::sync::Arc;

use crate::domain::{do_app, Clo, PathTy, TyValue, Value};
use crate::syntax::{partial_boundary, Cofib, Dim, Term, TypeExpr};

fn const_path(ty: TyValue, a: Value, b: Value) -> TyValue {
    TyValue::Path(Arc::new(PathTy {
        line: Clo::constant(ty),
        ep0: a,
        ep1: b,
    }))
}

pub fn is_contr_ty(c: TyValue) -> TyValue {
    let inner = c.clone();
    TyValue::Sigma(
        Arc::new(c),
        Clo::new(move |_, center: Value| {
            let c = inner.clone();
            Ok(TyValue::Pi(
                Arc::new(c.clone()),
                Clo::new(move |_, y| Ok(const_path(c.clone(), center.clone(), y))),
            ))
        }),
    )
}

pub fn fiber_ty(a: TyValue, b: TyValue, f: Value, y: Value) -> TyValue {
    TyValue::Sigma(
        Arc::new(a),
        Clo::new(move |ctx, x| {
            let fx = do_app(ctx, &f, x)?;
            Ok(const_path(b.clone(), fx, y.clone()))
        }),
    )
}

pub fn equiv_ty(a: TyValue, b: TyValue) -> TyValue {
    let fun = TyValue::Pi(Arc::new(a.clone()), Clo::constant(b.clone()));
    TyValue::Sigma(
        Arc::new(fun),
        Clo::new(move |_, f: Value| {
            let (a, b) = (a.clone(), b.clone());
            Ok(TyValue::Pi(
                Arc::new(b.clone()),
                Clo::new(move |_, y| Ok(is_contr_ty(fiber_ty(a.clone(), b.clone(), f.clone(), y)))),
            ))
        }),
    )
}

/// The identity equivalence on `a` (a type in the ambient context).
///
/// The contraction sends a fiber element `y` to the path
/// `<i> (hcom^{1→0} [∂i] (k. T), <j> hcom^{1→j} [∂i] (k. T))` where the tube
/// `T` is `[k = 1 ↪ b | i = 0 ↪ b | i = 1 ↪ y.2 @ k]`.
pub fn id_equiv(a: &TypeExpr) -> Term {
    let v = Term::Var;
    let d = Dim::Var;
    let tube = |i: usize, y: usize, b: usize| {
        Term::System(vec![
            (Cofib::eq(d(0), Dim::One), v(b)),
            (Cofib::eq(d(i), Dim::Zero), v(b)),
            (Cofib::eq(d(i), Dim::One), Term::papp(Term::snd(v(y)), d(0))),
        ])
    };
    // Under b, y, i.
    let first = Term::hcom(
        a.shift(3),
        Dim::One,
        Dim::Zero,
        partial_boundary(d(0)),
        tube(1, 2, 3),
    );
    // Under b, y, i, j.
    let second = Term::plam(Term::hcom(
        a.shift(4),
        Dim::One,
        d(0),
        partial_boundary(d(1)),
        tube(2, 3, 4),
    ));
    let contraction = Term::lam(Term::plam(Term::pair(first, second)));
    let center = Term::pair(v(0), Term::plam(v(1)));
    Term::pair(Term::lam(v(0)), Term::lam(Term::pair(center, contraction)))
}
