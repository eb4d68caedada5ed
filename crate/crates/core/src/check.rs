//! Bidirectional elaboration of surface terms into core syntax.
//!
//! A [`Scope`] pairs the names in scope with the semantic context and
//! environment used to evaluate elaborated terms. Systems and other partial
//! elements are elaborated once per consistent branch of their cofibration,
//! so every body is checked in a context where that cofibration holds.

use std::sync::Arc;

use crate::builtins::{equiv_ty, id_equiv};
use crate::cofib::{self, canonical_clauses, Clause};
use crate::domain::{do_app, do_fst, whnf_ty, Ctx, Env, GlueTy, TyValue, Value};
use crate::error::{Error, Result};
use crate::nbe::{eval, eval_cof, eval_ty, reflect_var, reify, reify_glue, reify_ty};
use crate::normal::{nf_cod, nf_dom, nf_equal, nf_is_pi, nf_ty_equal, Embed, NfTy};
use crate::surface::{SCofib, SDim, SKind, SSystem, STerm, Span};
use crate::syntax::{Cofib, Context, Dim, Term, TypeExpr};

/// An elaboration error with the source range it arose from.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{error}")]
pub struct CheckError {
    pub span: Span,
    pub error: Error,
}

impl CheckError {
    pub fn new(span: Span, error: Error) -> CheckError {
        CheckError { span, error }
    }
}

type CResult<T> = std::result::Result<T, CheckError>;

trait At<T> {
    fn at(self, span: Span) -> CResult<T>;
}

impl<T> At<T> for Result<T> {
    fn at(self, span: Span) -> CResult<T> {
        self.map_err(|e| CheckError::new(span, e))
    }
}

/// A checked top-level definition.
#[derive(Clone, Debug)]
pub struct Def {
    pub term: Term,
    pub ty: TyValue,
    pub ty_expr: TypeExpr,
    depth: usize,
}

#[derive(Clone, Debug)]
enum Name {
    Level(usize),
    Def(Arc<Def>),
}

#[derive(Clone, Debug)]
enum Kind {
    Dim,
    Term(TyValue),
}

#[derive(Clone, Debug, Default)]
pub struct Scope {
    names: Vec<(String, Name)>,
    kinds: Vec<Kind>,
    ctx: Ctx,
    env: Env,
}

impl Scope {
    pub fn new() -> Scope {
        Scope::default()
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn env(&self) -> &Env {
        &self.env
    }

    pub fn size(&self) -> usize {
        self.ctx.size()
    }

    /// Names of the context entries, outermost first.
    pub fn entry_names(&self) -> Vec<String> {
        let mut out = vec![String::new(); self.kinds.len()];
        for (name, n) in &self.names {
            if let Name::Level(l) = n {
                out[*l] = name.clone();
            }
        }
        out
    }

    /// The syntactic context of this scope.
    pub fn context(&self) -> Result<Context> {
        let mut ctx = Context::new();
        for (level, kind) in self.kinds.iter().enumerate() {
            ctx = match kind {
                Kind::Dim => ctx.push_dim(),
                Kind::Term(ty) => {
                    let prefix = Ctx::with(level, self.ctx.congruence().clone());
                    ctx.push_term(Embed::ty(level, &reify_ty(&prefix, ty)?))
                }
            };
        }
        Ok(ctx.with_congruence(self.ctx.congruence().clone()))
    }

    pub fn lookup_def(&self, name: &str) -> Option<Arc<Def>> {
        self.names.iter().rev().find_map(|(n, d)| match d {
            Name::Def(def) if n == name => Some(def.clone()),
            _ => None,
        })
    }

    fn lookup(&self, name: &str) -> Option<&Name> {
        self.names
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, d)| d)
    }

    fn with_ctx(&self, ctx: Ctx) -> Scope {
        Scope {
            ctx,
            ..self.clone()
        }
    }

    pub fn bind_dim(&self, name: &str) -> (Scope, Dim) {
        let (ctx, d) = self.ctx.fresh();
        let mut sc = self.clone();
        sc.names.push((name.to_string(), Name::Level(self.size())));
        sc.kinds.push(Kind::Dim);
        sc.env = self.env.push_dim(d);
        sc.ctx = ctx;
        (sc, d)
    }

    pub fn bind_var(&self, name: &str, ty: TyValue) -> Result<(Scope, Value)> {
        let level = self.size();
        let (ctx, _) = self.ctx.fresh();
        let v = reflect_var(&ctx, &ty, level)?;
        let mut sc = self.clone();
        sc.names.push((name.to_string(), Name::Level(level)));
        sc.kinds.push(Kind::Term(ty));
        sc.env = self.env.push_val(v.clone());
        sc.ctx = ctx;
        Ok((sc, v))
    }

    pub fn eval(&self, t: &Term) -> Result<Value> {
        eval(&self.ctx, &self.env, t)
    }

    pub fn eval_ty(&self, t: &TypeExpr) -> Result<TyValue> {
        eval_ty(&self.ctx, &self.env, t)
    }

    fn quote_cof(&self, phi: &Cofib) -> Cofib {
        Embed::cofib(self.size(), phi)
    }

    /// The consistent branches of `phi`, each with the clause (in index
    /// form) that selects it.
    fn branches(&self, phi: &Cofib) -> Vec<(Cofib, Scope)> {
        canonical_clauses(self.ctx.congruence(), phi)
            .into_iter()
            .filter_map(|clause: Clause| {
                let ctx = self.ctx.assume(&clause)?;
                let cof = self.quote_cof(&cofib::from_clauses(&[clause]));
                Some((cof, self.with_ctx(ctx)))
            })
            .collect()
    }

    /// Scopes obtained by assuming a cofibration, one per branch of its
    /// left inversion.
    pub fn assume(&self, phi: &SCofib, span: Span) -> CResult<Vec<Scope>> {
        let (_, sem) = self.cofib(phi).at(span)?;
        Ok(self.branches(&sem).into_iter().map(|(_, sc)| sc).collect())
    }

    pub fn declare_dim(&self, name: &str) -> Scope {
        self.bind_dim(name).0
    }

    pub fn declare_var(&self, name: &str, ty: &STerm) -> CResult<Scope> {
        let t = self.check_ty(ty)?;
        let v = self.eval_ty(&t).at(ty.span)?;
        Ok(self.bind_var(name, v).at(ty.span)?.0)
    }

    /// Checks a definition and adds it to the scope.
    pub fn define(
        &self,
        name: &str,
        ty: Option<&STerm>,
        body: &STerm,
    ) -> CResult<(Scope, Arc<Def>)> {
        let (term, ty) = match ty {
            Some(t) => {
                let te = self.check_ty(t)?;
                let tv = self.eval_ty(&te).at(t.span)?;
                (self.check(body, &tv)?, tv)
            }
            None => self.infer(body)?,
        };
        let ty_expr = self.quote_ty(&ty).at(body.span)?;
        let def = Arc::new(Def {
            term,
            ty,
            ty_expr,
            depth: self.size(),
        });
        let mut sc = self.clone();
        sc.names.push((name.to_string(), Name::Def(def.clone())));
        Ok((sc, def))
    }

    /// The definition's term, valid in this scope.
    pub fn def_term(&self, def: &Def) -> Term {
        def.term.shift(self.size() - def.depth)
    }

    pub fn quote_ty(&self, ty: &TyValue) -> Result<TypeExpr> {
        Ok(Embed::ty(self.size(), &reify_ty(&self.ctx, ty)?))
    }

    fn show_ty(&self, ty: &TyValue) -> String {
        match reify_ty(&self.ctx, ty) {
            Ok(nf) => nf.to_string(),
            Err(e) => format!("<{e}>"),
        }
    }

    /// Renders a cofibration over levels with the names in scope.
    fn show_cofib(&self, phi: &Cofib) -> String {
        let names = self.entry_names();
        let dim = |d: &Dim| match d {
            Dim::Var(l) => names.get(*l).cloned().unwrap_or_else(|| format!("#{l}")),
            c => c.to_string(),
        };
        let clauses = canonical_clauses(&cofib::Congruence::new(), phi);
        if clauses.is_empty() {
            return "0 = 1".to_string();
        }
        clauses
            .iter()
            .map(|c| {
                if c.is_empty() {
                    "1 = 1".to_string()
                } else {
                    c.iter()
                        .map(|(a, b)| format!("{} = {}", dim(a), dim(b)))
                        .collect::<Vec<_>>()
                        .join(" /\\ ")
                }
            })
            .collect::<Vec<_>>()
            .join(" \\/ ")
    }

    /// The equations assumed in this scope, for display.
    pub fn show_branch(&self) -> String {
        let pairs = self.ctx.congruence().pairs();
        if pairs.is_empty() {
            return "1 = 1".to_string();
        }
        let phi = Cofib::all(pairs.into_iter().map(|(a, b)| Cofib::eq(a, b)));
        self.show_cofib(&phi)
    }

    fn dim(&self, d: &SDim, bound: &[String]) -> Result<Dim> {
        match d {
            SDim::Zero => Ok(Dim::Zero),
            SDim::One => Ok(Dim::One),
            SDim::Name(n) => {
                if let Some(p) = bound.iter().rposition(|b| b == n) {
                    return Ok(Dim::Var(bound.len() - 1 - p));
                }
                match self.lookup(n) {
                    Some(Name::Level(l)) if matches!(self.kinds[*l], Kind::Dim) => {
                        Ok(Dim::Var(self.size() - 1 - l + bound.len()))
                    }
                    Some(_) => Err(Error::Type(format!("`{n}` is not a dimension"))),
                    None => Err(Error::Unbound(n.clone())),
                }
            }
        }
    }

    /// Elaborates a dimension, returning the index form and its value.
    pub fn check_dim(&self, d: &SDim) -> Result<(Dim, Dim)> {
        let idx = self.dim(d, &[])?;
        Ok((idx, self.env.dim(idx)?))
    }

    fn cofib_idx(&self, phi: &SCofib, bound: &mut Vec<String>) -> Result<Cofib> {
        Ok(match phi {
            SCofib::Eq(r, s) => Cofib::eq(self.dim(r, bound)?, self.dim(s, bound)?),
            SCofib::And(a, b) => Cofib::and(self.cofib_idx(a, bound)?, self.cofib_idx(b, bound)?),
            SCofib::Or(a, b) => Cofib::or(self.cofib_idx(a, bound)?, self.cofib_idx(b, bound)?),
            SCofib::Forall(x, body) => {
                bound.push(x.clone());
                let body = self.cofib_idx(body, bound);
                bound.pop();
                Cofib::forall(body?)
            }
        })
    }

    /// Elaborates a cofibration, returning the index form and its value.
    pub fn cofib(&self, phi: &SCofib) -> Result<(Cofib, Cofib)> {
        let idx = self.cofib_idx(phi, &mut Vec::new())?;
        let sem = eval_cof(&self.ctx, &self.env, &idx)?;
        Ok((idx, sem))
    }

    fn mismatch(&self, span: Span, expected: &TyValue, what: &str) -> CheckError {
        CheckError::new(
            span,
            Error::Type(format!("expected {}, found {what}", self.show_ty(expected))),
        )
    }

    fn expect_equal_ty(&self, span: Span, expected: &TyValue, got: &TyValue) -> CResult<()> {
        if convert_ty(&self.ctx, expected, got).at(span)? {
            Ok(())
        } else {
            Err(CheckError::new(
                span,
                Error::Type(format!(
                    "expected {}, found {}",
                    self.show_ty(expected),
                    self.show_ty(got)
                )),
            ))
        }
    }

    /// Elaborates `f` once per branch of `hyp`.
    fn under<T>(&self, hyp: &Cofib, f: impl Fn(&Scope) -> CResult<T>) -> CResult<Vec<(Cofib, T)>> {
        self.branches(hyp)
            .into_iter()
            .map(|(cof, sc)| Ok((cof, f(&sc)?)))
            .collect()
    }

    /// Checks `s` at `ty` in every branch of `hyp`. Surface systems are
    /// checked for coverage of `hyp` and for agreement on overlaps.
    pub fn check_under(
        &self,
        hyp: &Cofib,
        s: &STerm,
        ty: &dyn Fn(&Scope) -> Result<TyValue>,
    ) -> CResult<Term> {
        if let SKind::System(bs) = &s.kind {
            return self.check_system(hyp, bs, s.span, ty);
        }
        let parts = self.under(hyp, |sc| sc.check(s, &ty(sc).at(s.span)?))?;
        Ok(collapse(parts))
    }

    pub fn check_system(
        &self,
        hyp: &Cofib,
        bs: &SSystem,
        span: Span,
        ty: &dyn Fn(&Scope) -> Result<TyValue>,
    ) -> CResult<Term> {
        let cofs = bs
            .iter()
            .map(|(c, body)| self.cofib(c).at(body.span))
            .collect::<CResult<Vec<_>>>()?;
        let union = Cofib::any(cofs.iter().map(|(_, sem)| sem.clone()));
        if !self.ctx.congruence().entails(hyp, &union) {
            return Err(CheckError::new(
                span,
                Error::Coverage(format!("system does not cover {}", self.show_cofib(hyp))),
            ));
        }
        let mut out = Vec::new();
        for ((idx, sem), (_, body)) in cofs.iter().zip(bs) {
            let local = Cofib::and(hyp.clone(), sem.clone());
            let t = self.check_under(&local, body, ty)?;
            out.push((idx.clone(), t, sem.clone(), body.span));
        }
        for i in 0..out.len() {
            for j in i + 1..out.len() {
                let overlap =
                    Cofib::and(hyp.clone(), Cofib::and(out[i].2.clone(), out[j].2.clone()));
                for (_, sc) in self.branches(&overlap) {
                    let span = out[j].3;
                    let a = sc.eval(&out[i].1).at(span)?;
                    let b = sc.eval(&out[j].1).at(span)?;
                    let ty = ty(&sc).at(span)?;
                    if !convert(&sc.ctx, &ty, &a, &b).at(span)? {
                        return Err(CheckError::new(
                            span,
                            Error::Boundary {
                                branch: sc.show_branch(),
                                message: "overlapping branches disagree".into(),
                            },
                        ));
                    }
                }
            }
        }
        Ok(Term::System(
            out.into_iter().map(|(c, t, _, _)| (c, t)).collect(),
        ))
    }

    fn boundary(
        &self,
        span: Span,
        branch: String,
        ty: &TyValue,
        got: &Value,
        want: &Value,
    ) -> CResult<()> {
        if convert(&self.ctx, ty, got, want).at(span)? {
            return Ok(());
        }
        let show = |v: &Value| match reify(&self.ctx, ty, v) {
            Ok(n) => n.to_string(),
            Err(e) => format!("<{e}>"),
        };
        Err(CheckError::new(
            span,
            Error::Boundary {
                branch,
                message: format!("expected {}, found {}", show(want), show(got)),
            },
        ))
    }

    pub fn check(&self, s: &STerm, ty: &TyValue) -> CResult<Term> {
        let span = s.span;
        match &s.kind {
            SKind::Lam(x, body) => match whnf_ty(&self.ctx, ty).at(span)? {
                TyValue::Pi(dom, cod) => {
                    let (sc, v) = self.bind_var(x, (*dom).clone()).at(span)?;
                    let cty = cod.apply(&sc.ctx, v).at(span)?;
                    Ok(Term::lam(sc.check(body, &cty)?))
                }
                _ => Err(self.mismatch(span, ty, "a lambda")),
            },
            SKind::Pair(a, b) => match whnf_ty(&self.ctx, ty).at(span)? {
                TyValue::Sigma(dom, cod) => {
                    let ta = self.check(a, &dom)?;
                    let va = self.eval(&ta).at(a.span)?;
                    let bty = cod.apply(&self.ctx, va).at(span)?;
                    Ok(Term::pair(ta, self.check(b, &bty)?))
                }
                _ => Err(self.mismatch(span, ty, "a pair")),
            },
            SKind::PLam(i, body) => match whnf_ty(&self.ctx, ty).at(span)? {
                TyValue::Path(p) => {
                    let (sc, j) = self.bind_dim(i);
                    let lty = p.line.apply(&sc.ctx, j).at(span)?;
                    let t = sc.check(body, &lty)?;
                    for (r, want) in [(Dim::Zero, &p.ep0), (Dim::One, &p.ep1)] {
                        let got = eval(&self.ctx, &self.env.push_dim(r), &t).at(span)?;
                        let ety = p.line.apply(&self.ctx, r).at(span)?;
                        self.boundary(span, format!("{i} = {r}"), &ety, &got, want)?;
                    }
                    Ok(Term::plam(t))
                }
                _ => Err(self.mismatch(span, ty, "a path abstraction")),
            },
            SKind::Glue { partial, total } => {
                let g = match ty {
                    TyValue::Glue(g) => g.clone(),
                    _ => match whnf_ty(&self.ctx, ty).at(span)? {
                        TyValue::Glue(g) => g,
                        _ => return Err(self.mismatch(span, ty, "a glue element")),
                    },
                };
                self.check_englue(span, &g, partial, total)
            }
            SKind::System(bs) => self.check_system(&Cofib::top(), bs, span, &|_| Ok(ty.clone())),
            _ => {
                let (t, got) = self.infer(s)?;
                self.expect_equal_ty(span, ty, &got)?;
                Ok(t)
            }
        }
    }

    fn check_englue(
        &self,
        span: Span,
        g: &GlueTy,
        partial: &SSystem,
        total: &STerm,
    ) -> CResult<Term> {
        let tb = self.check(total, &g.base)?;
        let g2 = g.clone();
        let tp = self.check_system(&g.phi, partial, span, &move |sc: &Scope| {
            g2.partial_ty.force(&sc.ctx)
        })?;
        let vb = self.eval(&tb).at(span)?;
        for (_, sc) in self.branches(&g.phi) {
            let a = sc.eval(&tp).at(span)?;
            let f = do_fst(&sc.ctx, &g.equiv.force(&sc.ctx).at(span)?).at(span)?;
            let fa = do_app(&sc.ctx, &f, a).at(span)?;
            sc.boundary(span, sc.show_branch(), &g.base, &vb, &fa)?;
        }
        Ok(Term::englue(self.quote_cof(&g.phi), tp, tb))
    }

    pub fn infer(&self, s: &STerm) -> CResult<(Term, TyValue)> {
        let span = s.span;
        match &s.kind {
            SKind::Var(x) => match self.lookup(x) {
                Some(Name::Level(l)) => match &self.kinds[*l] {
                    Kind::Term(ty) => Ok((Term::Var(self.size() - 1 - l), ty.clone())),
                    Kind::Dim => Err(CheckError::new(
                        span,
                        Error::Type(format!("dimension `{x}` used as a term")),
                    )),
                },
                Some(Name::Def(def)) => Ok((self.def_term(def), def.ty.clone())),
                None => Err(CheckError::new(span, Error::Unbound(x.clone()))),
            },
            SKind::App(f, a) => {
                let (tf, fty) = self.infer(f)?;
                match whnf_ty(&self.ctx, &fty).at(span)? {
                    TyValue::Pi(dom, cod) => {
                        let ta = self.check(a, &dom)?;
                        let va = self.eval(&ta).at(a.span)?;
                        let ty = cod.apply(&self.ctx, va).at(span)?;
                        Ok((Term::app(tf, ta), ty))
                    }
                    _ => Err(self.type_error(f.span, "applied a non-function", &fty)),
                }
            }
            SKind::Fst(p) | SKind::Snd(p) => {
                let (tp, pty) = self.infer(p)?;
                match whnf_ty(&self.ctx, &pty).at(span)? {
                    TyValue::Sigma(dom, cod) => {
                        if matches!(s.kind, SKind::Fst(_)) {
                            Ok((Term::fst(tp), (*dom).clone()))
                        } else {
                            let first = do_fst(&self.ctx, &self.eval(&tp).at(span)?).at(span)?;
                            let ty = cod.apply(&self.ctx, first).at(span)?;
                            Ok((Term::snd(tp), ty))
                        }
                    }
                    _ => Err(self.type_error(p.span, "projected from a non-pair", &pty)),
                }
            }
            SKind::PApp(p, r) => {
                let (tp, pty) = self.infer(p)?;
                let (ri, rv) = self.check_dim(r).at(span)?;
                match whnf_ty(&self.ctx, &pty).at(span)? {
                    TyValue::Path(path) => {
                        let ty = path.line.apply(&self.ctx, rv).at(span)?;
                        Ok((Term::papp(tp, ri), ty))
                    }
                    _ => Err(self.type_error(p.span, "applied a non-path to a dimension", &pty)),
                }
            }
            SKind::Unglue(e) => {
                let (te, ety) = self.infer(e)?;
                let g = match &ety {
                    TyValue::Glue(g) => g.clone(),
                    _ => match whnf_ty(&self.ctx, &ety).at(span)? {
                        TyValue::Glue(g) => g,
                        _ => {
                            return Err(self.type_error(e.span, "unglued a non-glue element", &ety))
                        }
                    },
                };
                let annot = Embed::ty(self.size(), &reify_glue(&self.ctx, &g).at(span)?);
                Ok((Term::unglue(annot, te), g.base.clone()))
            }
            SKind::Base => Ok((Term::Base, TyValue::S1)),
            SKind::Loop(r) => {
                let (ri, _) = self.check_dim(r).at(span)?;
                Ok((Term::Loop(ri), TyValue::S1))
            }
            SKind::HCom {
                r,
                s: s_dim,
                phi,
                ty,
                binder,
                tube,
            } => {
                let tty = self.check_ty(ty)?;
                let vty = self.eval_ty(&tty).at(ty.span)?;
                let (ri, rv) = self.check_dim(r).at(span)?;
                let (si, _) = self.check_dim(s_dim).at(span)?;
                let (phi_i, phi_v) = self.cofib(phi).at(span)?;
                let (sc, i) = self.bind_dim(binder);
                let hyp = Cofib::or(Cofib::eq(i, rv), phi_v);
                let vty2 = vty.clone();
                let tt = sc.check_under(&hyp, tube, &move |_| Ok(vty2.clone()))?;
                Ok((Term::hcom(tty, ri, si, phi_i, tt), vty))
            }
            SKind::Coe {
                binder,
                line,
                r,
                s: s_dim,
                arg,
            } => {
                let (sc, _) = self.bind_dim(binder);
                let tl = sc.check_ty(line)?;
                let (ri, rv) = self.check_dim(r).at(span)?;
                let (si, sv) = self.check_dim(s_dim).at(span)?;
                let at = |d: Dim| eval_ty(&self.ctx, &self.env.push_dim(d), &tl).at(span);
                let ta = self.check(arg, &at(rv)?)?;
                Ok((Term::coe(tl.clone(), ri, si, ta), at(sv)?))
            }
            SKind::IndS1 {
                var,
                motive,
                base,
                dim,
                loop_case,
                scrut,
            } => {
                let ts = self.check(scrut, &TyValue::S1)?;
                let (scx, _) = self.bind_var(var, TyValue::S1).at(span)?;
                let tm = scx.check_ty(motive)?;
                let motive_at =
                    |ctx: &Ctx, v: Value| eval_ty(ctx, &self.env.push_val(v), &tm).at(span);
                let base_ty = motive_at(&self.ctx, Value::Base)?;
                let tb = self.check(base, &base_ty)?;
                let vb = self.eval(&tb).at(base.span)?;
                let (sci, j) = self.bind_dim(dim);
                let loop_ty = motive_at(&sci.ctx, Value::Loop(j))?;
                let tl = sci.check(loop_case, &loop_ty)?;
                for r in [Dim::Zero, Dim::One] {
                    let got = eval(&self.ctx, &self.env.push_dim(r), &tl).at(loop_case.span)?;
                    self.boundary(loop_case.span, format!("{dim} = {r}"), &base_ty, &got, &vb)?;
                }
                let ty = motive_at(&self.ctx, self.eval(&ts).at(span)?)?;
                Ok((Term::ind_s1(tm, tb, tl, ts), ty))
            }
            SKind::Ann(e, t) => {
                let tt = self.check_ty(t)?;
                let vt = self.eval_ty(&tt).at(t.span)?;
                Ok((self.check(e, &vt)?, vt))
            }
            SKind::IdEquiv(a) => {
                let ta = self.check_ty(a)?;
                let va = self.eval_ty(&ta).at(a.span)?;
                Ok((id_equiv(&ta), equiv_ty(va.clone(), va)))
            }
            SKind::Lam(..)
            | SKind::Pair(..)
            | SKind::PLam(..)
            | SKind::Glue { .. }
            | SKind::System(_) => Err(CheckError::new(
                span,
                Error::Type("cannot infer a type here; add an annotation `(e : A)`".into()),
            )),
            SKind::S1
            | SKind::Path { .. }
            | SKind::Pi { .. }
            | SKind::Sigma { .. }
            | SKind::GlueTy { .. } => Err(CheckError::new(
                span,
                Error::Type("a type is not a term".into()),
            )),
        }
    }

    fn type_error(&self, span: Span, what: &str, ty: &TyValue) -> CheckError {
        CheckError::new(
            span,
            Error::Type(format!("{what} of type {}", self.show_ty(ty))),
        )
    }

    pub fn check_ty(&self, s: &STerm) -> CResult<TypeExpr> {
        let span = s.span;
        match &s.kind {
            SKind::S1 => Ok(TypeExpr::S1),
            SKind::Pi { name, dom, cod } | SKind::Sigma { name, dom, cod } => {
                let a = self.check_ty(dom)?;
                let va = self.eval_ty(&a).at(dom.span)?;
                let (sc, _) = self.bind_var(name.as_deref().unwrap_or("_"), va).at(span)?;
                let b = sc.check_ty(cod)?;
                Ok(match s.kind {
                    SKind::Pi { .. } => TypeExpr::pi(a, b),
                    _ => TypeExpr::sigma(a, b),
                })
            }
            SKind::Path {
                binder,
                line,
                ep0,
                ep1,
            } => {
                let tl = match binder {
                    Some(i) => self.bind_dim(i).0.check_ty(line)?,
                    None => self.check_ty(line)?.shift(1),
                };
                let at = |d: Dim| eval_ty(&self.ctx, &self.env.push_dim(d), &tl).at(span);
                let t0 = self.check(ep0, &at(Dim::Zero)?)?;
                let t1 = self.check(ep1, &at(Dim::One)?)?;
                Ok(TypeExpr::path(tl.clone(), t0, t1))
            }
            SKind::GlueTy { branches, base } => self.check_glue_ty(branches, base),
            SKind::System(bs) => self.check_ty_system(&Cofib::top(), bs, span),
            _ => Err(CheckError::new(span, Error::Type("expected a type".into()))),
        }
    }

    fn check_ty_under(&self, hyp: &Cofib, s: &STerm) -> CResult<TypeExpr> {
        if let SKind::System(bs) = &s.kind {
            return self.check_ty_system(hyp, bs, s.span);
        }
        Ok(collapse_ty(self.under(hyp, |sc| sc.check_ty(s))?))
    }

    fn check_ty_system(&self, hyp: &Cofib, bs: &SSystem, span: Span) -> CResult<TypeExpr> {
        let cofs = bs
            .iter()
            .map(|(c, body)| self.cofib(c).at(body.span))
            .collect::<CResult<Vec<_>>>()?;
        let union = Cofib::any(cofs.iter().map(|(_, sem)| sem.clone()));
        if !self.ctx.congruence().entails(hyp, &union) {
            return Err(CheckError::new(
                span,
                Error::Coverage(format!(
                    "type system does not cover {}",
                    self.show_cofib(hyp)
                )),
            ));
        }
        let mut out = Vec::new();
        for ((idx, sem), (_, body)) in cofs.iter().zip(bs) {
            let t = self.check_ty_under(&Cofib::and(hyp.clone(), sem.clone()), body)?;
            out.push((idx.clone(), t, sem.clone(), body.span));
        }
        for i in 0..out.len() {
            for j in i + 1..out.len() {
                let overlap =
                    Cofib::and(hyp.clone(), Cofib::and(out[i].2.clone(), out[j].2.clone()));
                for (_, sc) in self.branches(&overlap) {
                    let span = out[j].3;
                    let a = sc.eval_ty(&out[i].1).at(span)?;
                    let b = sc.eval_ty(&out[j].1).at(span)?;
                    if !convert_ty(&sc.ctx, &a, &b).at(span)? {
                        return Err(CheckError::new(
                            span,
                            Error::Boundary {
                                branch: sc.show_branch(),
                                message: "overlapping type branches disagree".into(),
                            },
                        ));
                    }
                }
            }
        }
        Ok(TypeExpr::System(
            out.into_iter().map(|(c, t, _, _)| (c, t)).collect(),
        ))
    }

    fn check_glue_ty(
        &self,
        branches: &[(SCofib, STerm, STerm)],
        base: &STerm,
    ) -> CResult<TypeExpr> {
        let tb = self.check_ty(base)?;
        let vb = self.eval_ty(&tb).at(base.span)?;
        let mut parts = Vec::new();
        for (c, a, f) in branches {
            let (idx, sem) = self.cofib(c).at(a.span)?;
            let pieces = self.under(&sem, |sc| {
                let ta = sc.check_ty(a)?;
                let va = sc.eval_ty(&ta).at(a.span)?;
                let tf = sc.check(f, &equiv_ty(va, vb.clone()))?;
                Ok((ta, tf))
            })?;
            let ta = collapse_ty(
                pieces
                    .iter()
                    .map(|(c, (a, _))| (c.clone(), a.clone()))
                    .collect(),
            );
            let tf = collapse(pieces.into_iter().map(|(c, (_, f))| (c, f)).collect());
            parts.push((idx, sem, ta, tf, a.span));
        }
        for i in 0..parts.len() {
            for j in i + 1..parts.len() {
                let overlap = Cofib::and(parts[i].1.clone(), parts[j].1.clone());
                for (_, sc) in self.branches(&overlap) {
                    let span = parts[j].4;
                    let a = sc.eval_ty(&parts[i].2).at(span)?;
                    let b = sc.eval_ty(&parts[j].2).at(span)?;
                    let mismatch = |message: &str| {
                        CheckError::new(
                            span,
                            Error::Boundary {
                                branch: sc.show_branch(),
                                message: message.into(),
                            },
                        )
                    };
                    if !convert_ty(&sc.ctx, &a, &b).at(span)? {
                        return Err(mismatch("overlapping glue types disagree"));
                    }
                    let fi = sc.eval(&parts[i].3).at(span)?;
                    let fj = sc.eval(&parts[j].3).at(span)?;
                    if !convert(&sc.ctx, &equiv_ty(a, vb.clone()), &fi, &fj).at(span)? {
                        return Err(mismatch("overlapping equivalences disagree"));
                    }
                }
            }
        }
        let phi = Cofib::any(parts.iter().map(|p| p.0.clone()));
        let (partial_ty, equiv) = match parts.len() {
            0 => (TypeExpr::Abort, Term::Abort),
            1 => {
                let p = parts.pop().expect("one part");
                (p.2, p.3)
            }
            _ => (
                TypeExpr::System(parts.iter().map(|p| (p.0.clone(), p.2.clone())).collect()),
                Term::System(parts.iter().map(|p| (p.0.clone(), p.3.clone())).collect()),
            ),
        };
        Ok(TypeExpr::glue(phi, tb, partial_ty, equiv))
    }
}

fn collapse(parts: Vec<(Cofib, Term)>) -> Term {
    match parts.first() {
        None => Term::Abort,
        Some((_, t)) if parts.iter().all(|(_, u)| u == t) => t.clone(),
        _ => Term::System(parts),
    }
}

fn collapse_ty(parts: Vec<(Cofib, TypeExpr)>) -> TypeExpr {
    match parts.first() {
        None => TypeExpr::Abort,
        Some((_, t)) if parts.iter().all(|(_, u)| u == t) => t.clone(),
        _ => TypeExpr::System(parts),
    }
}

/// Judgmental equality of two values at a type.
pub fn convert(ctx: &Ctx, ty: &TyValue, a: &Value, b: &Value) -> Result<bool> {
    Ok(nf_equal(ctx, &reify(ctx, ty, a)?, &reify(ctx, ty, b)?))
}

pub fn convert_ty(ctx: &Ctx, a: &TyValue, b: &TyValue) -> Result<bool> {
    Ok(nf_ty_equal(ctx, &reify_ty(ctx, a)?, &reify_ty(ctx, b)?))
}

/// Judgmental equality of two core terms at a core type.
pub fn equal_tm(ctx: &Context, ty: &TypeExpr, a: &Term, b: &Term) -> Result<bool> {
    let (sem, env) = crate::nbe::init_env(ctx)?;
    let ty = eval_ty(&sem, &env, ty)?;
    convert(&sem, &ty, &eval(&sem, &env, a)?, &eval(&sem, &env, b)?)
}

pub fn equal_ty(ctx: &Context, a: &TypeExpr, b: &TypeExpr) -> Result<bool> {
    let (sem, env) = crate::nbe::init_env(ctx)?;
    convert_ty(&sem, &eval_ty(&sem, &env, a)?, &eval_ty(&sem, &env, b)?)
}

/// Domain and codomain pairs of two Π types, when the types are equal.
/// Glue types whose cofibration holds are unwrapped first.
pub type PiComponents = ((NfTy, NfTy), (NfTy, NfTy));

pub fn injective_pi(ctx: &Context, a: &TypeExpr, b: &TypeExpr) -> Result<Option<PiComponents>> {
    let (sem, env) = crate::nbe::init_env(ctx)?;
    let na = reify_ty(&sem, &eval_ty(&sem, &env, a)?)?;
    let nb = reify_ty(&sem, &eval_ty(&sem, &env, b)?)?;
    if !nf_is_pi(&sem, &na) || !nf_is_pi(&sem, &nb) {
        return Err(Error::NotAPi);
    }
    if !nf_ty_equal(&sem, &na, &nb) {
        return Ok(None);
    }
    let doms = (nf_dom(&sem, &na)?.clone(), nf_dom(&sem, &nb)?.clone());
    let cods = (nf_cod(&sem, &na)?.clone(), nf_cod(&sem, &nb)?.clone());
    Ok(Some((doms, cods)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(kind: SKind) -> STerm {
        STerm::synth(kind)
    }

    fn b(kind: SKind) -> Box<STerm> {
        Box::new(t(kind))
    }

    fn name(n: &str) -> SDim {
        SDim::Name(n.into())
    }

    fn circle_path(ep0: SKind, ep1: SKind) -> STerm {
        t(SKind::Path {
            binder: None,
            line: b(SKind::S1),
            ep0: b(ep0),
            ep1: b(ep1),
        })
    }

    fn eval_checked(sc: &Scope, s: &STerm) -> TypeExpr {
        sc.check_ty(s).unwrap()
    }

    #[test]
    fn loop_is_a_path_from_base_to_base() {
        let sc = Scope::new();
        let ty = sc
            .eval_ty(&eval_checked(&sc, &circle_path(SKind::Base, SKind::Base)))
            .unwrap();
        let body = t(SKind::PLam("i".into(), b(SKind::Loop(name("i")))));
        let term = sc.check(&body, &ty).unwrap();
        assert_eq!(term, Term::plam(Term::Loop(Dim::Var(0))));
    }

    #[test]
    fn mismatched_endpoint_is_a_boundary_error() {
        let sc = Scope::new().declare_dim("j");
        let ty_s = circle_path(SKind::Base, SKind::Loop(name("j")));
        let ty = sc.eval_ty(&eval_checked(&sc, &ty_s)).unwrap();
        let body = t(SKind::PLam("i".into(), b(SKind::Base)));
        let err = sc.check(&body, &ty).unwrap_err();
        assert!(matches!(err.error, Error::Boundary { .. }), "{err:?}");
    }

    #[test]
    fn infers_a_variable() {
        let sc = Scope::new().declare_var("x", &t(SKind::S1)).unwrap();
        let (term, ty) = sc.infer(&t(SKind::Var("x".into()))).unwrap();
        assert_eq!(term, Term::Var(0));
        assert!(matches!(ty, TyValue::S1));
    }

    #[test]
    fn unbound_names_are_reported() {
        let err = Scope::new()
            .infer(&t(SKind::Var("nope".into())))
            .unwrap_err();
        assert_eq!(err.error, Error::Unbound("nope".into()));
    }

    #[test]
    fn degenerate_hcom_equals_its_cap() {
        let ctx = Context::new();
        let bot = Cofib::bot();
        let hcom = Term::hcom(TypeExpr::S1, Dim::Zero, Dim::Zero, bot, Term::Base);
        assert!(equal_tm(&ctx, &TypeExpr::S1, &Term::Base, &hcom).unwrap());
    }

    #[test]
    fn functions_are_eta_equal() {
        let arrow = TypeExpr::arrow(TypeExpr::S1, TypeExpr::S1);
        let ctx = Context::new().push_term(arrow.clone());
        let expanded = Term::lam(Term::app(Term::Var(1), Term::Var(0)));
        assert!(equal_tm(&ctx, &arrow, &Term::Var(0), &expanded).unwrap());
    }

    #[test]
    fn base_differs_from_a_generic_loop() {
        let ctx = Context::new().push_dim();
        let l = Term::Loop(Dim::Var(0));
        assert!(!equal_tm(&ctx, &TypeExpr::S1, &Term::Base, &l).unwrap());
    }

    #[test]
    fn injectivity_needs_pi_types() {
        let ctx = Context::new();
        let pi = TypeExpr::arrow(TypeExpr::S1, TypeExpr::S1);
        let sigma = TypeExpr::product(TypeExpr::S1, TypeExpr::S1);
        assert_eq!(injective_pi(&ctx, &pi, &sigma), Err(Error::NotAPi));
        let comps = injective_pi(&ctx, &pi, &pi).unwrap().unwrap();
        assert_eq!(comps.0 .0, comps.0 .1);
    }

    #[test]
    fn systems_must_cover_their_hypothesis() {
        let sc = Scope::new().declare_dim("i");
        let sys = t(SKind::System(vec![(
            SCofib::Eq(name("i"), SDim::Zero),
            t(SKind::Base),
        )]));
        let err = sc.check(&sys, &TyValue::S1).unwrap_err();
        assert!(matches!(err.error, Error::Coverage(_)), "{err:?}");
    }

    #[test]
    fn overlapping_branches_must_agree() {
        let sc = Scope::new().declare_dim("i").declare_dim("j");
        let sys = t(SKind::System(vec![
            (SCofib::Eq(name("i"), SDim::Zero), t(SKind::Base)),
            (SCofib::Eq(SDim::One, SDim::One), t(SKind::Loop(name("j")))),
        ]));
        let err = sc.check(&sys, &TyValue::S1).unwrap_err();
        assert!(matches!(err.error, Error::Boundary { .. }), "{err:?}");
    }

    #[test]
    fn assumptions_split_into_branches() {
        let sc = Scope::new().declare_dim("i");
        let phi = SCofib::Or(
            Box::new(SCofib::Eq(name("i"), SDim::Zero)),
            Box::new(SCofib::Eq(name("i"), SDim::One)),
        );
        let branches = sc.assume(&phi, Span::default()).unwrap();
        assert_eq!(branches.len(), 2);
        let (_, i) = branches[0].check_dim(&name("i")).unwrap();
        assert!(branches[0].ctx().canon_dim(i).is_const());
    }
}
