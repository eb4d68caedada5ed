//! Evaluation, reflection, reification and the circle eliminator.

use std::cell::RefCell;
use std::sync::Arc;

use crate::builtins::equiv_ty;
use crate::cofib::{self, canonical_clauses};
use crate::domain::{
    absurd, debug_systems, do_app, do_fst, do_papp, do_snd, do_unglue, mk_cut, whnf, whnf_ty, Clo,
    Ctx, Cut, Englue, Env, EnvEntry, Frame, GlueTy, Neutral, PathTy, Thunk, TyValue, Value,
};
use crate::error::{Error, Result};
use crate::kan::{do_coe, do_com, do_hcom};
use crate::normal::{Ne, NeSpine, Nf, NfSys, NfTy};
use crate::syntax::{partial_boundary, Binding, Cofib, Context, Dim, Term, TypeExpr};

pub fn eval_dim(env: &Env, r: Dim) -> Result<Dim> {
    env.dim(r)
}

/// Evaluates a cofibration to a quantifier-free one over levels.
pub fn eval_cof(ctx: &Ctx, env: &Env, phi: &Cofib) -> Result<Cofib> {
    let failure = RefCell::new(None);
    let out = cofib::resolve(phi, ctx.size(), &|i| match env.dim(Dim::Var(i)) {
        Ok(d) => d,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            Dim::Zero
        }
    });
    match failure.into_inner() {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

fn eval_branches<T>(ctx: &Ctx, env: &Env, branches: &[(Cofib, T)]) -> Result<Vec<(Cofib, usize)>> {
    branches
        .iter()
        .enumerate()
        .map(|(k, (phi, _))| Ok((eval_cof(ctx, env, phi)?, k)))
        .collect()
}

fn selected<T>(ctx: &Ctx, env: &Env, branches: &[(Cofib, T)]) -> Result<Vec<usize>> {
    Ok(eval_branches(ctx, env, branches)?
        .into_iter()
        .filter(|(phi, _)| ctx.entails(phi))
        .map(|(_, k)| k)
        .collect())
}

/// Evaluates the first entailed branch of a term system. When `check` is
/// given and debug checking is on, every entailed branch is evaluated and
/// the reifications at that type are compared.
pub fn eval_system(
    ctx: &Ctx,
    env: &Env,
    branches: &[(Cofib, Term)],
    check: Option<&TyValue>,
) -> Result<Value> {
    let hits = selected(ctx, env, branches)?;
    let first = *hits.first().ok_or(Error::SystemCoverage)?;
    let v = eval(ctx, env, &branches[first].1)?;
    if let (Some(ty), true) = (check, debug_systems() && hits.len() > 1) {
        let expected = reify(ctx, ty, &v)?;
        for &k in &hits[1..] {
            let other = reify(ctx, ty, &eval(ctx, env, &branches[k].1)?)?;
            if other != expected {
                return Err(Error::Domain(format!(
                    "overlapping system branches disagree: {expected} vs {other}"
                )));
            }
        }
    }
    Ok(v)
}

fn eval_ty_system(ctx: &Ctx, env: &Env, branches: &[(Cofib, TypeExpr)]) -> Result<TyValue> {
    let hits = selected(ctx, env, branches)?;
    let first = *hits.first().ok_or(Error::SystemCoverage)?;
    let ty = eval_ty(ctx, env, &branches[first].1)?;
    if debug_systems() && hits.len() > 1 {
        let expected = reify_ty(ctx, &ty)?;
        for &k in &hits[1..] {
            let other = reify_ty(ctx, &eval_ty(ctx, env, &branches[k].1)?)?;
            if other != expected {
                return Err(Error::Domain(format!(
                    "overlapping type system branches disagree: {expected} vs {other}"
                )));
            }
        }
    }
    Ok(ty)
}

pub fn eval(ctx: &Ctx, env: &Env, t: &Term) -> Result<Value> {
    match t {
        Term::Var(i) => env.value(*i),
        Term::Lam(body) => {
            let (env, body) = (env.clone(), body.clone());
            Ok(Value::Lam(Clo::new(move |ctx, x| {
                eval(ctx, &env.push_val(x), &body)
            })))
        }
        Term::App(f, a) => {
            let f = eval(ctx, env, f)?;
            let a = eval(ctx, env, a)?;
            do_app(ctx, &f, a)
        }
        Term::Pair(a, b) => Ok(Value::Pair(Arc::new((
            eval(ctx, env, a)?,
            eval(ctx, env, b)?,
        )))),
        Term::Fst(p) => do_fst(ctx, &eval(ctx, env, p)?),
        Term::Snd(p) => do_snd(ctx, &eval(ctx, env, p)?),
        Term::PLam(body) => {
            let (env, body) = (env.clone(), body.clone());
            Ok(Value::PLam(Clo::new(move |ctx, r| {
                eval(ctx, &env.push_dim(r), &body)
            })))
        }
        Term::PApp(p, r) => do_papp(ctx, &eval(ctx, env, p)?, eval_dim(env, *r)?),
        Term::Englue {
            phi,
            partial,
            total,
        } => {
            let phi = eval_cof(ctx, env, phi)?;
            if ctx.entails(&phi) {
                return eval(ctx, env, partial);
            }
            let (env2, partial) = (env.clone(), partial.clone());
            Ok(Value::Englue(Arc::new(Englue {
                phi,
                partial: Clo::new(move |ctx, ()| eval(ctx, &env2, &partial)),
                total: eval(ctx, env, total)?,
            })))
        }
        Term::Unglue { ty, arg } => match eval_ty(ctx, env, ty)? {
            TyValue::Glue(g) => do_unglue(ctx, &g, &eval(ctx, env, arg)?),
            _ => Err(Error::Domain(
                "unglue annotated with a non-glue type".into(),
            )),
        },
        Term::Base => Ok(Value::Base),
        Term::Loop(r) => {
            let r = eval_dim(env, *r)?;
            Ok(mk_loop(ctx, r))
        }
        Term::IndS1 {
            motive,
            base,
            loop_case,
            scrut,
        } => {
            let motive = {
                let (env, motive) = (env.clone(), motive.clone());
                Clo::new(move |ctx, x| eval_ty(ctx, &env.push_val(x), &motive))
            };
            let loop_case = {
                let (env, l) = (env.clone(), loop_case.clone());
                Clo::new(move |ctx, i| eval(ctx, &env.push_dim(i), &l))
            };
            let base = eval(ctx, env, base)?;
            let scrut = eval(ctx, env, scrut)?;
            do_ind_s1(ctx, &motive, &base, &loop_case, &scrut)
        }
        Term::HCom {
            ty,
            r,
            s,
            phi,
            tube,
        } => {
            let ty = eval_ty(ctx, env, ty)?;
            let r = eval_dim(env, *r)?;
            let s = eval_dim(env, *s)?;
            let phi = eval_cof(ctx, env, phi)?;
            let tube = {
                let (env, tube, ty) = (env.clone(), tube.clone(), ty.clone());
                Clo::new(move |ctx, i| {
                    let env = env.push_dim(i);
                    match &*tube {
                        Term::System(bs) => eval_system(ctx, &env, bs, Some(&ty)),
                        other => eval(ctx, &env, other),
                    }
                })
            };
            do_hcom(ctx, &ty, r, s, &phi, tube)
        }
        Term::Coe { line, r, s, arg } => {
            let line = {
                let (env, line) = (env.clone(), line.clone());
                Clo::new(move |ctx, i| eval_ty(ctx, &env.push_dim(i), &line))
            };
            let r = eval_dim(env, *r)?;
            let s = eval_dim(env, *s)?;
            do_coe(ctx, &line, r, s, eval(ctx, env, arg)?)
        }
        Term::System(bs) => eval_system(ctx, env, bs, None),
        Term::Abort => Err(Error::Domain("evaluated an empty system".into())),
    }
}

fn mk_loop(ctx: &Ctx, r: Dim) -> Value {
    if ctx.entails(&partial_boundary(r)) {
        Value::Base
    } else {
        Value::Loop(r)
    }
}

pub fn eval_ty(ctx: &Ctx, env: &Env, t: &TypeExpr) -> Result<TyValue> {
    match t {
        TypeExpr::Path { line, ep0, ep1 } => {
            let ep0 = eval(ctx, env, ep0)?;
            let ep1 = eval(ctx, env, ep1)?;
            let (env, line) = (env.clone(), line.clone());
            Ok(TyValue::Path(Arc::new(PathTy {
                line: Clo::new(move |ctx, i| eval_ty(ctx, &env.push_dim(i), &line)),
                ep0,
                ep1,
            })))
        }
        TypeExpr::Pi { dom, cod } | TypeExpr::Sigma { dom, cod } => {
            let a = Arc::new(eval_ty(ctx, env, dom)?);
            let (env, cod2) = (env.clone(), cod.clone());
            let b = Clo::new(move |ctx, x| eval_ty(ctx, &env.push_val(x), &cod2));
            Ok(match t {
                TypeExpr::Pi { .. } => TyValue::Pi(a, b),
                _ => TyValue::Sigma(a, b),
            })
        }
        TypeExpr::Glue {
            phi,
            base,
            partial_ty,
            equiv,
        } => {
            let phi = eval_cof(ctx, env, phi)?;
            let base = eval_ty(ctx, env, base)?;
            let partial_ty = {
                let (env, a) = (env.clone(), partial_ty.clone());
                Clo::new(move |ctx, ()| eval_ty(ctx, &env, &a))
            };
            let equiv = {
                let (env, f) = (env.clone(), equiv.clone());
                Clo::new(move |ctx, ()| eval(ctx, &env, &f))
            };
            Ok(TyValue::Glue(Arc::new(GlueTy {
                phi,
                base,
                partial_ty,
                equiv,
            })))
        }
        TypeExpr::S1 => Ok(TyValue::S1),
        TypeExpr::System(bs) => eval_ty_system(ctx, env, bs),
        TypeExpr::Abort => Err(Error::Domain("evaluated an empty type system".into())),
    }
}

/// Turns a stabilized neutral into a value, η-expanding at every type
/// except the circle.
pub fn reflect(
    ctx: &Ctx,
    ty: &TyValue,
    phi: Cofib,
    ne: Neutral,
    partial: Thunk<Value>,
) -> Result<Value> {
    match whnf_ty(ctx, ty)? {
        TyValue::Pi(dom, cod) => Ok(Value::Lam(Clo::new(move |ctx, x: Value| {
            let ty = cod.apply(ctx, x.clone())?;
            let ne = ne.push(Frame::App {
                arg: x.clone(),
                dom: (*dom).clone(),
            });
            let partial = partial.clone();
            let partial = Clo::new(move |ctx, ()| do_app(ctx, &partial.force(ctx)?, x.clone()));
            reflect(ctx, &ty, phi.clone(), ne, partial)
        }))),
        TyValue::Sigma(dom, cod) => {
            let p1 = partial.clone();
            let first = reflect(
                ctx,
                &dom,
                phi.clone(),
                ne.push(Frame::Fst),
                Clo::new(move |ctx, ()| do_fst(ctx, &p1.force(ctx)?)),
            )?;
            let ty = cod.apply(ctx, first.clone())?;
            let second = reflect(
                ctx,
                &ty,
                phi,
                ne.push(Frame::Snd),
                Clo::new(move |ctx, ()| do_snd(ctx, &partial.force(ctx)?)),
            )?;
            Ok(Value::Pair(Arc::new((first, second))))
        }
        TyValue::Path(p) => Ok(Value::PLam(Clo::new(move |ctx, r| {
            if ctx.equal_dims(r, Dim::Zero) {
                return whnf(ctx, &p.ep0);
            }
            if ctx.equal_dims(r, Dim::One) {
                return whnf(ctx, &p.ep1);
            }
            let ty = p.line.apply(ctx, r)?;
            let wide = Cofib::join(phi.clone(), partial_boundary(r));
            let (phi, partial, p) = (phi.clone(), partial.clone(), p.clone());
            let partial = Clo::new(move |ctx: &Ctx, ()| {
                if ctx.entails(&phi) {
                    do_papp(ctx, &partial.force(ctx)?, r)
                } else if ctx.equal_dims(r, Dim::Zero) {
                    Ok(p.ep0.clone())
                } else if ctx.equal_dims(r, Dim::One) {
                    Ok(p.ep1.clone())
                } else {
                    Err(Error::SystemCoverage)
                }
            });
            reflect(ctx, &ty, wide, ne.push(Frame::PApp(r)), partial)
        }))),
        TyValue::Glue(g) => reflect_glue(ctx, g, phi, ne, partial),
        TyValue::S1 => mk_cut(ctx, TyValue::S1, phi, ne, partial),
    }
}

fn reflect_glue(
    ctx: &Ctx,
    g: Arc<GlueTy>,
    phi: Cofib,
    ne: Neutral,
    partial: Thunk<Value>,
) -> Result<Value> {
    // The neutral seen at the partial type, meaningful under g.phi.
    let as_partial: Thunk<Value> = {
        let (g, phi, ne, partial) = (g.clone(), phi.clone(), ne.clone(), partial.clone());
        Clo::new(move |ctx, ()| {
            let a = g.partial_ty.force(ctx)?;
            reflect(ctx, &a, phi.clone(), ne.clone(), partial.clone())
        })
    };
    let total_partial = {
        let (g, phi, as_partial) = (g.clone(), phi.clone(), as_partial.clone());
        Clo::new(move |ctx: &Ctx, ()| {
            if ctx.entails(&phi) {
                do_unglue(ctx, &g, &partial.force(ctx)?)
            } else {
                let f = do_fst(ctx, &g.equiv.force(ctx)?)?;
                do_app(ctx, &f, as_partial.force(ctx)?)
            }
        })
    };
    let wide = Cofib::join(phi, g.phi.clone());
    let total = reflect(
        ctx,
        &g.base,
        wide,
        ne.push(Frame::Unglue(g.clone())),
        total_partial,
    )?;
    Ok(Value::Englue(Arc::new(Englue {
        phi: g.phi.clone(),
        partial: as_partial,
        total,
    })))
}

/// A variable reflected at instability `0 = 1`.
pub fn reflect_var(ctx: &Ctx, ty: &TyValue, level: usize) -> Result<Value> {
    reflect(ctx, ty, Cofib::bot(), Neutral::var(level), absurd())
}

pub fn do_ind_s1(
    ctx: &Ctx,
    motive: &Clo<Value, TyValue>,
    base: &Value,
    loop_case: &Clo<Dim, Value>,
    x: &Value,
) -> Result<Value> {
    match whnf(ctx, x)? {
        Value::Base => whnf(ctx, base),
        Value::Loop(r) => loop_case.apply(ctx, r),
        Value::FHCom(h) => {
            let line = {
                let (h, motive) = (h.clone(), motive.clone());
                Clo::new(move |ctx, i| {
                    let filler = do_hcom(ctx, &TyValue::S1, h.r, i, &h.phi, h.tube.clone())?;
                    motive.apply(ctx, filler)
                })
            };
            let tube = {
                let (h, motive, base, loop_case) =
                    (h.clone(), motive.clone(), base.clone(), loop_case.clone());
                Clo::new(move |ctx, i| {
                    do_ind_s1(ctx, &motive, &base, &loop_case, &h.tube.apply(ctx, i)?)
                })
            };
            do_com(ctx, &line, h.r, h.s, &h.phi, tube)
        }
        Value::Cut(c) => {
            let ty = motive.apply(ctx, Value::Cut(c.clone()))?;
            let ne = c.ne.push(Frame::Ind {
                motive: motive.clone(),
                base: base.clone(),
                loop_case: loop_case.clone(),
            });
            let partial = {
                let (motive, base, loop_case, c) =
                    (motive.clone(), base.clone(), loop_case.clone(), c.clone());
                Clo::new(move |ctx, ()| {
                    do_ind_s1(ctx, &motive, &base, &loop_case, &c.partial.force(ctx)?)
                })
            };
            reflect(ctx, &ty, c.phi.clone(), ne, partial)
        }
        other => Err(Error::Domain(format!(
            "circle induction on {}",
            crate::domain::describe(&other)
        ))),
    }
}

/// Evaluates `f` in every clause of the canonical DNF of `phi`.
fn reify_sys<T>(ctx: &Ctx, phi: &Cofib, f: impl Fn(&Ctx) -> Result<T>) -> Result<NfSys<T>> {
    canonical_clauses(ctx.congruence(), phi)
        .into_iter()
        .filter_map(|clause| ctx.assume(&clause).map(|c| (clause, c)))
        .map(|(clause, branch)| Ok((cofib::from_clauses(&[clause]), f(&branch)?)))
        .collect()
}

pub fn reify(ctx: &Ctx, ty: &TyValue, v: &Value) -> Result<Nf> {
    match whnf_ty(ctx, ty)? {
        TyValue::Pi(dom, cod) => {
            let (inner, x) = ctx.fresh();
            let Dim::Var(level) = x else { unreachable!() };
            let xv = reflect_var(&inner, &dom, level)?;
            let ty = cod.apply(&inner, xv.clone())?;
            let body = do_app(&inner, v, xv)?;
            Ok(Nf::Lam(Box::new(reify(&inner, &ty, &body)?)))
        }
        TyValue::Sigma(dom, cod) => {
            let a = do_fst(ctx, v)?;
            let b = do_snd(ctx, v)?;
            let ty = cod.apply(ctx, a.clone())?;
            Ok(Nf::Pair(
                Box::new(reify(ctx, &dom, &a)?),
                Box::new(reify(ctx, &ty, &b)?),
            ))
        }
        TyValue::Path(p) => {
            let (inner, j) = ctx.fresh();
            let ty = p.line.apply(&inner, j)?;
            let body = do_papp(&inner, v, j)?;
            Ok(Nf::PLam(Box::new(reify(&inner, &ty, &body)?)))
        }
        TyValue::Glue(g) => {
            let partial = reify_sys(ctx, &g.phi, |branch| {
                let a = g.partial_ty.force(branch)?;
                reify(branch, &a, &whnf(branch, v)?)
            })?;
            let total = do_unglue(ctx, &g, v)?;
            Ok(Nf::Englue {
                phi: ctx.canon_cofib(&g.phi),
                partial,
                total: Box::new(reify(ctx, &g.base, &total)?),
            })
        }
        TyValue::S1 => reify_s1(ctx, v),
    }
}

fn reify_s1(ctx: &Ctx, v: &Value) -> Result<Nf> {
    match whnf(ctx, v)? {
        Value::Base => Ok(Nf::Base),
        Value::Loop(r) => Ok(Nf::Loop(ctx.canon_dim(r))),
        Value::FHCom(h) => {
            let (inner, i) = ctx.fresh();
            let domain = Cofib::or(Cofib::eq(i, h.r), h.phi.clone());
            let tube = reify_sys(&inner, &domain, |branch| {
                reify_s1(branch, &h.tube.apply(branch, i)?)
            })?;
            Ok(Nf::FHCom {
                r: ctx.canon_dim(h.r),
                s: ctx.canon_dim(h.s),
                phi: ctx.canon_cofib(&h.phi),
                tube,
            })
        }
        Value::Cut(c) => reify_cut(ctx, &c),
        other => Err(Error::Domain(format!(
            "reifying {} at the circle",
            crate::domain::describe(&other)
        ))),
    }
}

fn reify_cut(ctx: &Ctx, c: &Cut) -> Result<Nf> {
    let partial = reify_sys(ctx, &c.phi, |branch| {
        reify_s1(branch, &c.partial.force(branch)?)
    })?;
    Ok(Nf::Lift {
        phi: ctx.canon_cofib(&c.phi),
        ne: Box::new(reify_ne(ctx, &c.ne)?),
        partial,
    })
}

pub fn reify_ne(ctx: &Ctx, ne: &Neutral) -> Result<Ne> {
    let mut phi = Cofib::bot();
    let mut out = Ne {
        phi: ctx.canon_cofib(&phi),
        spine: NeSpine::Var(ne.head),
    };
    for frame in &ne.frames {
        let prev = Box::new(out);
        let spine = match frame {
            Frame::App { arg, dom } => NeSpine::App(prev, Box::new(reify(ctx, dom, arg)?)),
            Frame::Fst => NeSpine::Fst(prev),
            Frame::Snd => NeSpine::Snd(prev),
            Frame::PApp(r) => {
                phi = Cofib::join(phi, partial_boundary(*r));
                NeSpine::PApp(prev, ctx.canon_dim(*r))
            }
            Frame::Unglue(g) => {
                phi = Cofib::join(phi, g.phi.clone());
                NeSpine::Unglue(Box::new(reify_glue(ctx, g)?), prev)
            }
            Frame::Ind {
                motive,
                base,
                loop_case,
            } => {
                let (inner, x) = ctx.fresh();
                let Dim::Var(level) = x else { unreachable!() };
                let xv = reflect_var(&inner, &TyValue::S1, level)?;
                let motive_nf = reify_ty(&inner, &motive.apply(&inner, xv)?)?;
                let base_nf = reify(ctx, &motive.apply(ctx, Value::Base)?, base)?;
                let (inner, j) = ctx.fresh();
                let loop_ty = motive.apply(&inner, Value::Loop(j))?;
                let loop_nf = reify(&inner, &loop_ty, &loop_case.apply(&inner, j)?)?;
                NeSpine::Ind {
                    motive: Box::new(motive_nf),
                    base: Box::new(base_nf),
                    loop_case: Box::new(loop_nf),
                    scrut: prev,
                }
            }
        };
        out = Ne {
            phi: ctx.canon_cofib(&phi),
            spine,
        };
    }
    Ok(out)
}

/// Reifies a glue type without unfolding it, even where its cofibration
/// holds.
pub fn reify_glue(ctx: &Ctx, g: &GlueTy) -> Result<NfTy> {
    let partial_ty = reify_sys(ctx, &g.phi, |branch| {
        reify_ty(branch, &g.partial_ty.force(branch)?)
    })?;
    let equiv = reify_sys(ctx, &g.phi, |branch| {
        let a = g.partial_ty.force(branch)?;
        let ty = equiv_ty(a, g.base.clone());
        reify(branch, &ty, &g.equiv.force(branch)?)
    })?;
    Ok(NfTy::Glue {
        phi: ctx.canon_cofib(&g.phi),
        base: Box::new(reify_ty(ctx, &g.base)?),
        partial_ty,
        equiv,
    })
}

pub fn reify_ty(ctx: &Ctx, ty: &TyValue) -> Result<NfTy> {
    match whnf_ty(ctx, ty)? {
        TyValue::S1 => Ok(NfTy::S1),
        TyValue::Pi(dom, cod) | TyValue::Sigma(dom, cod) => {
            let dom_nf = reify_ty(ctx, &dom)?;
            let (inner, x) = ctx.fresh();
            let Dim::Var(level) = x else { unreachable!() };
            let xv = reflect_var(&inner, &dom, level)?;
            let cod_nf = reify_ty(&inner, &cod.apply(&inner, xv)?)?;
            Ok(match whnf_ty(ctx, ty)? {
                TyValue::Pi(..) => NfTy::Pi(Box::new(dom_nf), Box::new(cod_nf)),
                _ => NfTy::Sigma(Box::new(dom_nf), Box::new(cod_nf)),
            })
        }
        TyValue::Path(p) => {
            let (inner, j) = ctx.fresh();
            let line = reify_ty(&inner, &p.line.apply(&inner, j)?)?;
            let ep0 = reify(ctx, &p.line.apply(ctx, Dim::Zero)?, &p.ep0)?;
            let ep1 = reify(ctx, &p.line.apply(ctx, Dim::One)?, &p.ep1)?;
            Ok(NfTy::Path {
                line: Box::new(line),
                ep0: Box::new(ep0),
                ep1: Box::new(ep1),
            })
        }
        TyValue::Glue(g) => reify_glue(ctx, &g),
    }
}

/// The semantic context and environment of an atomic context, with every
/// term variable reflected at instability `0 = 1`.
pub fn init_env(ctx: &Context) -> Result<(Ctx, Env)> {
    let mut env = Env::new();
    let full = Ctx::with(ctx.len(), ctx.congruence().clone());
    for (level, binding) in ctx.bindings().iter().enumerate() {
        let prefix = Ctx::with(level, ctx.congruence().clone());
        let entry = match binding {
            Binding::Dim => EnvEntry::Dim(Dim::Var(level)),
            Binding::Term(ty) => {
                let ty = eval_ty(&prefix, &env, ty)?;
                EnvEntry::Val(reflect_var(&full, &ty, level)?)
            }
        };
        env = env.push(entry);
    }
    Ok((full, env))
}

pub fn nbe_ty(ctx: &Context, ty: &TypeExpr) -> Result<NfTy> {
    let (sem, env) = init_env(ctx)?;
    reify_ty(&sem, &eval_ty(&sem, &env, ty)?)
}

pub fn nbe_tm(ctx: &Context, ty: &TypeExpr, t: &Term) -> Result<Nf> {
    let (sem, env) = init_env(ctx)?;
    let ty = eval_ty(&sem, &env, ty)?;
    reify(&sem, &ty, &eval(&sem, &env, t)?)
}
