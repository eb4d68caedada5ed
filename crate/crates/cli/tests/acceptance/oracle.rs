//! Reference implementations that share no code with the kernel.

use cubical_core::{Cofib, Dim, Term, TypeExpr};

/// A point of the interval under a substitution: an endpoint or one of a
/// supply of pairwise distinct symbols.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Point {
    Zero,
    One,
    Sym(usize),
}

/// Truth of a cofibration with de Bruijn index `k` bound to `env[len - 1 - k]`.
/// A `∀` is checked at both endpoints, at every symbol in use and at one
/// symbol that is not.
pub fn holds(phi: &Cofib, env: &mut Vec<Point>) -> bool {
    match phi {
        Cofib::Eq(r, s) => point(*r, env) == point(*s, env),
        Cofib::And(a, b) => holds(a, env) && holds(b, env),
        Cofib::Or(a, b) => holds(a, env) || holds(b, env),
        Cofib::Forall(body) => {
            let mut candidates = vec![Point::Zero, Point::One];
            let mut next = 0;
            for p in env.iter() {
                if let Point::Sym(n) = p {
                    if !candidates.contains(p) {
                        candidates.push(*p);
                    }
                    next = next.max(n + 1);
                }
            }
            candidates.push(Point::Sym(next));
            candidates.into_iter().all(|p| {
                env.push(p);
                let ok = holds(body, env);
                env.pop();
                ok
            })
        }
    }
}

fn point(r: Dim, env: &[Point]) -> Point {
    match r {
        Dim::Zero => Point::Zero,
        Dim::One => Point::One,
        Dim::Var(k) => env[env.len() - 1 - k],
    }
}

/// Every substitution of `vars` variables into the endpoints and `vars`
/// distinct symbols.
pub fn assignments(vars: usize) -> Vec<Vec<Point>> {
    let values: Vec<Point> = [Point::Zero, Point::One]
        .into_iter()
        .chain((0..vars).map(Point::Sym))
        .collect();
    let mut out = vec![Vec::new()];
    for _ in 0..vars {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |v| {
                    let mut next = prefix.clone();
                    next.push(*v);
                    next
                })
            })
            .collect();
    }
    out
}

/// `hyp` entails `goal` when every substitution satisfying `hyp` satisfies
/// `goal`.
pub fn entails(vars: usize, hyp: &Cofib, goal: &Cofib) -> bool {
    assignments(vars)
        .into_iter()
        .all(|mut env| !holds(hyp, &mut env) || holds(goal, &mut env))
}

/// Simple types of the Π/Σ fragment.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Ty {
    Base,
    Arrow(Box<Ty>, Box<Ty>),
    Prod(Box<Ty>, Box<Ty>),
}

impl Ty {
    /// Forgets the (vacuous) dependency of codomains in the Π/Σ fragment.
    pub fn of(t: &TypeExpr) -> Ty {
        match t {
            TypeExpr::S1 => Ty::Base,
            TypeExpr::Pi { dom, cod } => Ty::Arrow(Box::new(Ty::of(dom)), Box::new(Ty::of(cod))),
            TypeExpr::Sigma { dom, cod } => Ty::Prod(Box::new(Ty::of(dom)), Box::new(Ty::of(cod))),
            other => panic!("outside the Π/Σ fragment: {other}"),
        }
    }
}

/// λ-terms with pairs, in de Bruijn notation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Lam {
    Var(usize),
    Abs(Box<Lam>),
    App(Box<Lam>, Box<Lam>),
    Pair(Box<Lam>, Box<Lam>),
    Fst(Box<Lam>),
    Snd(Box<Lam>),
}

use Lam::*;

impl Lam {
    pub fn of(t: &Term) -> Lam {
        match t {
            Term::Var(k) => Var(*k),
            Term::Lam(b) => Abs(Box::new(Lam::of(b))),
            Term::App(f, a) => App(Box::new(Lam::of(f)), Box::new(Lam::of(a))),
            Term::Pair(a, b) => Pair(Box::new(Lam::of(a)), Box::new(Lam::of(b))),
            Term::Fst(p) => Fst(Box::new(Lam::of(p))),
            Term::Snd(p) => Snd(Box::new(Lam::of(p))),
            other => panic!("outside the Π/Σ fragment: {other}"),
        }
    }
}

/// Adds `d` to every index at or above `cutoff`.
fn shift(t: &Lam, d: isize, cutoff: usize) -> Lam {
    match t {
        Var(k) if *k >= cutoff => Var((*k as isize + d) as usize),
        Var(k) => Var(*k),
        Abs(b) => Abs(Box::new(shift(b, d, cutoff + 1))),
        App(f, a) => App(Box::new(shift(f, d, cutoff)), Box::new(shift(a, d, cutoff))),
        Pair(a, b) => Pair(Box::new(shift(a, d, cutoff)), Box::new(shift(b, d, cutoff))),
        Fst(p) => Fst(Box::new(shift(p, d, cutoff))),
        Snd(p) => Snd(Box::new(shift(p, d, cutoff))),
    }
}

/// Replaces index `j` by `s`.
fn subst(t: &Lam, j: usize, s: &Lam) -> Lam {
    match t {
        Var(k) if *k == j => s.clone(),
        Var(k) => Var(*k),
        Abs(b) => Abs(Box::new(subst(b, j + 1, &shift(s, 1, 0)))),
        App(f, a) => App(Box::new(subst(f, j, s)), Box::new(subst(a, j, s))),
        Pair(a, b) => Pair(Box::new(subst(a, j, s)), Box::new(subst(b, j, s))),
        Fst(p) => Fst(Box::new(subst(p, j, s))),
        Snd(p) => Snd(Box::new(subst(p, j, s))),
    }
}

fn beta(body: &Lam, arg: &Lam) -> Lam {
    shift(&subst(body, 0, &shift(arg, 1, 0)), -1, 0)
}

/// β-normal form by repeated substitution.
pub fn normalize(t: &Lam) -> Lam {
    match t {
        Var(k) => Var(*k),
        Abs(b) => Abs(Box::new(normalize(b))),
        App(f, a) => match normalize(f) {
            Abs(b) => normalize(&beta(&b, a)),
            f => App(Box::new(f), Box::new(normalize(a))),
        },
        Pair(a, b) => Pair(Box::new(normalize(a)), Box::new(normalize(b))),
        Fst(p) => match normalize(p) {
            Pair(a, _) => *a,
            p => Fst(Box::new(p)),
        },
        Snd(p) => match normalize(p) {
            Pair(_, b) => *b,
            p => Snd(Box::new(p)),
        },
    }
}

/// η-long form of a β-normal term; `ctx[0]` is the innermost variable.
pub fn eta_long(ctx: &mut Vec<Ty>, t: Lam, ty: &Ty) -> Lam {
    match ty {
        Ty::Arrow(a, b) => {
            let body = match t {
                Abs(body) => *body,
                ne => App(Box::new(shift(&ne, 1, 0)), Box::new(Var(0))),
            };
            ctx.insert(0, (**a).clone());
            let body = eta_long(ctx, body, b);
            ctx.remove(0);
            Abs(Box::new(body))
        }
        Ty::Prod(a, b) => {
            let (x, y) = match t {
                Pair(x, y) => (*x, *y),
                ne => (Fst(Box::new(ne.clone())), Snd(Box::new(ne))),
            };
            Pair(Box::new(eta_long(ctx, x, a)), Box::new(eta_long(ctx, y, b)))
        }
        Ty::Base => neutral(ctx, t).0,
    }
}

fn neutral(ctx: &mut Vec<Ty>, t: Lam) -> (Lam, Ty) {
    match t {
        Var(k) => (Var(k), ctx[k].clone()),
        App(f, a) => match neutral(ctx, *f) {
            (f, Ty::Arrow(dom, cod)) => (App(Box::new(f), Box::new(eta_long(ctx, *a, &dom))), *cod),
            (f, ty) => panic!("applying {f:?} of type {ty:?}"),
        },
        Fst(p) => match neutral(ctx, *p) {
            (p, Ty::Prod(a, _)) => (Fst(Box::new(p)), *a),
            (p, ty) => panic!("projecting {p:?} of type {ty:?}"),
        },
        Snd(p) => match neutral(ctx, *p) {
            (p, Ty::Prod(_, b)) => (Snd(Box::new(p)), *b),
            (p, ty) => panic!("projecting {p:?} of type {ty:?}"),
        },
        other => panic!("not β-normal: {other:?}"),
    }
}

/// Checks the oracles on cases whose answers are known by hand.
pub fn self_check() -> Result<(), String> {
    // ∀k. k = 0 ∨ k = 1 fails at a fresh point.
    let phi = Cofib::forall(Cofib::or(
        Cofib::eq(Dim::Var(0), Dim::Zero),
        Cofib::eq(Dim::Var(0), Dim::One),
    ));
    if holds(&phi, &mut vec![]) {
        return Err("the oracle accepts ∀k. k = 0 ∨ k = 1".into());
    }
    // ∀k. i = 0 holds exactly when i = 0.
    let phi = Cofib::forall(Cofib::eq(Dim::Var(1), Dim::Zero));
    if !entails(1, &Cofib::eq(Dim::Var(0), Dim::Zero), &phi) {
        return Err("the oracle rejects i = 0 ⊢ ∀k. i = 0".into());
    }
    let ty = Ty::Arrow(
        Box::new(Ty::Prod(Box::new(Ty::Base), Box::new(Ty::Base))),
        Box::new(Ty::Base),
    );
    let f = eta_long(&mut vec![ty.clone()], Var(0), &ty);
    let want = Abs(Box::new(App(
        Box::new(Var(1)),
        Box::new(Pair(
            Box::new(Fst(Box::new(Var(0)))),
            Box::new(Snd(Box::new(Var(0)))),
        )),
    )));
    if f != want {
        return Err(format!("η-expansion of a variable gave {f:?}"));
    }
    let redex = App(
        Box::new(Abs(Box::new(Abs(Box::new(Var(1)))))),
        Box::new(Var(3)),
    );
    if normalize(&redex) != Abs(Box::new(Var(4))) {
        return Err(format!("β-reduction gave {:?}", normalize(&redex)));
    }
    Ok(())
}
