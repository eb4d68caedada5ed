//! Core syntax: dimensions, cofibrations, types, terms and atomic contexts.
//!
//! Binders are nameless. Inside a [`Term`] or [`TypeExpr`], variables are de
//! Bruijn *indices* into a single context that mixes dimension and term
//! bindings. The semantic domain and the normal forms use de Bruijn *levels*
//! over the same context, which is why [`Dim`] and [`Cofib`] are shared
//! between the two worlds: the interpretation of `Dim::Var` depends on where
//! the value lives.

use std::fmt;
use std::sync::Arc;

use crate::cofib::Congruence;
use crate::error::{Error, ScopeProblem};

/// A point of the interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dim {
    Zero,
    One,
    Var(usize),
}

impl Dim {
    pub fn is_const(self) -> bool {
        matches!(self, Dim::Zero | Dim::One)
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dim::Zero => write!(f, "0"),
            Dim::One => write!(f, "1"),
            Dim::Var(k) => write!(f, "#{k}"),
        }
    }
}

/// Cofibrations: equations between dimensions closed under `∧`, `∨` and `∀`.
///
/// `Forall` binds one dimension variable (index 0 of its body). Semantic
/// cofibrations (over levels) never contain `Forall`; it is eliminated on
/// evaluation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Cofib {
    Eq(Dim, Dim),
    And(Box<Cofib>, Box<Cofib>),
    Or(Box<Cofib>, Box<Cofib>),
    Forall(Box<Cofib>),
}

impl Cofib {
    pub fn eq(r: Dim, s: Dim) -> Cofib {
        Cofib::Eq(r, s)
    }

    /// `0 = 1`
    pub fn bot() -> Cofib {
        Cofib::Eq(Dim::Zero, Dim::One)
    }

    /// `1 = 1`
    pub fn top() -> Cofib {
        Cofib::Eq(Dim::One, Dim::One)
    }

    pub fn and(a: Cofib, b: Cofib) -> Cofib {
        Cofib::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Cofib, b: Cofib) -> Cofib {
        Cofib::Or(Box::new(a), Box::new(b))
    }

    pub fn forall(body: Cofib) -> Cofib {
        Cofib::Forall(Box::new(body))
    }

    /// Disjunction that drops syntactic `0 = 1` operands.
    pub fn join(a: Cofib, b: Cofib) -> Cofib {
        if a.is_syntactic_bot() {
            b
        } else if b.is_syntactic_bot() {
            a
        } else {
            Cofib::or(a, b)
        }
    }

    pub fn is_syntactic_bot(&self) -> bool {
        matches!(
            self,
            Cofib::Eq(Dim::Zero, Dim::One) | Cofib::Eq(Dim::One, Dim::Zero)
        )
    }

    pub fn any(items: impl IntoIterator<Item = Cofib>) -> Cofib {
        let mut items = items.into_iter();
        match items.next() {
            None => Cofib::bot(),
            Some(first) => items.fold(first, Cofib::or),
        }
    }

    pub fn all(items: impl IntoIterator<Item = Cofib>) -> Cofib {
        let mut items = items.into_iter();
        match items.next() {
            None => Cofib::top(),
            Some(first) => items.fold(first, Cofib::and),
        }
    }

    /// Nesting depth; atoms have depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Cofib::Eq(..) => 1,
            Cofib::And(a, b) | Cofib::Or(a, b) => 1 + a.depth().max(b.depth()),
            Cofib::Forall(a) => 1 + a.depth(),
        }
    }

    pub fn contains_forall(&self) -> bool {
        match self {
            Cofib::Eq(..) => false,
            Cofib::And(a, b) | Cofib::Or(a, b) => a.contains_forall() || b.contains_forall(),
            Cofib::Forall(_) => true,
        }
    }

    /// Applies `f` to every dimension, passing the number of `∀` binders
    /// crossed so far.
    pub fn map_dims(&self, depth: usize, f: &mut impl FnMut(Dim, usize) -> Dim) -> Cofib {
        match self {
            Cofib::Eq(r, s) => Cofib::Eq(f(*r, depth), f(*s, depth)),
            Cofib::And(a, b) => Cofib::and(a.map_dims(depth, f), b.map_dims(depth, f)),
            Cofib::Or(a, b) => Cofib::or(a.map_dims(depth, f), b.map_dims(depth, f)),
            Cofib::Forall(a) => Cofib::forall(a.map_dims(depth + 1, f)),
        }
    }
}

/// `∂r`, the boundary of a dimension: `(r = 0) ∨ (r = 1)`.
pub fn partial_boundary(r: Dim) -> Cofib {
    Cofib::or(Cofib::Eq(r, Dim::Zero), Cofib::Eq(r, Dim::One))
}

impl fmt::Display for Cofib {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cofib::Eq(r, s) => write!(f, "(= {r} {s})"),
            Cofib::And(a, b) => write!(f, "(and {a} {b})"),
            Cofib::Or(a, b) => write!(f, "(or {a} {b})"),
            Cofib::Forall(a) => write!(f, "(forall {a})"),
        }
    }
}

/// Types of the closed signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeExpr {
    /// `line` binds a dimension.
    Path {
        line: Arc<TypeExpr>,
        ep0: Arc<Term>,
        ep1: Arc<Term>,
    },
    /// `cod` binds a term variable of type `dom`.
    Pi {
        dom: Arc<TypeExpr>,
        cod: Arc<TypeExpr>,
    },
    Sigma {
        dom: Arc<TypeExpr>,
        cod: Arc<TypeExpr>,
    },
    /// `partial_ty` and `equiv` are only meaningful under `phi`; `equiv`
    /// inhabits `Equiv(partial_ty, base)`.
    Glue {
        phi: Cofib,
        base: Arc<TypeExpr>,
        partial_ty: Arc<TypeExpr>,
        equiv: Arc<Term>,
    },
    S1,
    System(Vec<(Cofib, TypeExpr)>),
    Abort,
}

/// Terms of the closed signature.
///
/// `Englue` and `Unglue` carry annotations filled in by the elaborator
/// (the glue cofibration, resp. the whole glue type) so that evaluation
/// never needs to consult a typing context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Var(usize),
    Lam(Arc<Term>),
    App(Arc<Term>, Arc<Term>),
    Pair(Arc<Term>, Arc<Term>),
    Fst(Arc<Term>),
    Snd(Arc<Term>),
    /// Binds a dimension.
    PLam(Arc<Term>),
    PApp(Arc<Term>, Dim),
    Englue {
        phi: Cofib,
        partial: Arc<Term>,
        total: Arc<Term>,
    },
    Unglue {
        ty: Arc<TypeExpr>,
        arg: Arc<Term>,
    },
    Base,
    Loop(Dim),
    /// `motive` binds a term variable of type `S1`, `loop_case` a dimension.
    IndS1 {
        motive: Arc<TypeExpr>,
        base: Arc<Term>,
        loop_case: Arc<Term>,
        scrut: Arc<Term>,
    },
    /// `tube` binds a dimension and is defined on `i = r ∨ phi`.
    HCom {
        ty: Arc<TypeExpr>,
        r: Dim,
        s: Dim,
        phi: Cofib,
        tube: Arc<Term>,
    },
    /// `line` binds a dimension.
    Coe {
        line: Arc<TypeExpr>,
        r: Dim,
        s: Dim,
        arg: Arc<Term>,
    },
    System(Vec<(Cofib, Term)>),
    Abort,
}

impl Term {
    pub fn lam(body: Term) -> Term {
        Term::Lam(Arc::new(body))
    }
    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Arc::new(f), Arc::new(a))
    }
    pub fn pair(a: Term, b: Term) -> Term {
        Term::Pair(Arc::new(a), Arc::new(b))
    }
    pub fn fst(p: Term) -> Term {
        Term::Fst(Arc::new(p))
    }
    pub fn snd(p: Term) -> Term {
        Term::Snd(Arc::new(p))
    }
    pub fn plam(body: Term) -> Term {
        Term::PLam(Arc::new(body))
    }
    pub fn papp(p: Term, r: Dim) -> Term {
        Term::PApp(Arc::new(p), r)
    }
    pub fn coe(line: TypeExpr, r: Dim, s: Dim, arg: Term) -> Term {
        Term::Coe {
            line: Arc::new(line),
            r,
            s,
            arg: Arc::new(arg),
        }
    }
    pub fn hcom(ty: TypeExpr, r: Dim, s: Dim, phi: Cofib, tube: Term) -> Term {
        Term::HCom {
            ty: Arc::new(ty),
            r,
            s,
            phi,
            tube: Arc::new(tube),
        }
    }
    pub fn ind_s1(motive: TypeExpr, base: Term, loop_case: Term, scrut: Term) -> Term {
        Term::IndS1 {
            motive: Arc::new(motive),
            base: Arc::new(base),
            loop_case: Arc::new(loop_case),
            scrut: Arc::new(scrut),
        }
    }
    pub fn englue(phi: Cofib, partial: Term, total: Term) -> Term {
        Term::Englue {
            phi,
            partial: Arc::new(partial),
            total: Arc::new(total),
        }
    }
    pub fn unglue(ty: TypeExpr, arg: Term) -> Term {
        Term::Unglue {
            ty: Arc::new(ty),
            arg: Arc::new(arg),
        }
    }
}

impl TypeExpr {
    pub fn pi(dom: TypeExpr, cod: TypeExpr) -> TypeExpr {
        TypeExpr::Pi {
            dom: Arc::new(dom),
            cod: Arc::new(cod),
        }
    }
    pub fn sigma(dom: TypeExpr, cod: TypeExpr) -> TypeExpr {
        TypeExpr::Sigma {
            dom: Arc::new(dom),
            cod: Arc::new(cod),
        }
    }
    /// Non-dependent function type; weakens `cod` past the binder.
    pub fn arrow(dom: TypeExpr, cod: TypeExpr) -> TypeExpr {
        let cod = cod.shift(1);
        TypeExpr::pi(dom, cod)
    }
    pub fn product(dom: TypeExpr, cod: TypeExpr) -> TypeExpr {
        let cod = cod.shift(1);
        TypeExpr::sigma(dom, cod)
    }
    pub fn path(line: TypeExpr, ep0: Term, ep1: Term) -> TypeExpr {
        TypeExpr::Path {
            line: Arc::new(line),
            ep0: Arc::new(ep0),
            ep1: Arc::new(ep1),
        }
    }
    /// Path over a constant line; weakens `ty` past the dimension binder.
    pub fn const_path(ty: TypeExpr, ep0: Term, ep1: Term) -> TypeExpr {
        TypeExpr::path(ty.shift(1), ep0, ep1)
    }
    pub fn glue(phi: Cofib, base: TypeExpr, partial_ty: TypeExpr, equiv: Term) -> TypeExpr {
        TypeExpr::Glue {
            phi,
            base: Arc::new(base),
            partial_ty: Arc::new(partial_ty),
            equiv: Arc::new(equiv),
        }
    }
}

/// How a traversal rewrites free variables. Both callbacks receive the free
/// index with the local binder depth already subtracted and return an
/// image relative to the outside of the traversed term.
pub(crate) trait VarAction {
    fn var(&self, free: usize) -> usize;
    fn dim(&self, free: usize) -> Dim;
}

fn act_dim(d: Dim, depth: usize, act: &impl VarAction) -> Dim {
    match d {
        Dim::Var(k) if k >= depth => match act.dim(k - depth) {
            Dim::Var(j) => Dim::Var(j + depth),
            c => c,
        },
        other => other,
    }
}

fn act_cofib(phi: &Cofib, depth: usize, act: &impl VarAction) -> Cofib {
    phi.map_dims(0, &mut |d, extra| act_dim(d, depth + extra, act))
}

fn act_system<T>(
    branches: &[(Cofib, T)],
    depth: usize,
    act: &impl VarAction,
    body: impl Fn(&T, usize) -> T,
) -> Vec<(Cofib, T)> {
    branches
        .iter()
        .map(|(phi, t)| (act_cofib(phi, depth, act), body(t, depth)))
        .collect()
}

impl TypeExpr {
    pub(crate) fn act(&self, depth: usize, act: &impl VarAction) -> TypeExpr {
        match self {
            TypeExpr::Path { line, ep0, ep1 } => TypeExpr::Path {
                line: Arc::new(line.act(depth + 1, act)),
                ep0: Arc::new(ep0.act(depth, act)),
                ep1: Arc::new(ep1.act(depth, act)),
            },
            TypeExpr::Pi { dom, cod } => TypeExpr::Pi {
                dom: Arc::new(dom.act(depth, act)),
                cod: Arc::new(cod.act(depth + 1, act)),
            },
            TypeExpr::Sigma { dom, cod } => TypeExpr::Sigma {
                dom: Arc::new(dom.act(depth, act)),
                cod: Arc::new(cod.act(depth + 1, act)),
            },
            TypeExpr::Glue {
                phi,
                base,
                partial_ty,
                equiv,
            } => TypeExpr::Glue {
                phi: act_cofib(phi, depth, act),
                base: Arc::new(base.act(depth, act)),
                partial_ty: Arc::new(partial_ty.act(depth, act)),
                equiv: Arc::new(equiv.act(depth, act)),
            },
            TypeExpr::S1 => TypeExpr::S1,
            TypeExpr::System(branches) => {
                TypeExpr::System(act_system(branches, depth, act, |t, d| t.act(d, act)))
            }
            TypeExpr::Abort => TypeExpr::Abort,
        }
    }

    /// Weakens every free index by `k`.
    pub fn shift(&self, k: usize) -> TypeExpr {
        if k == 0 {
            return self.clone();
        }
        self.act(0, &Shift(k))
    }
}

impl Term {
    pub(crate) fn act(&self, depth: usize, act: &impl VarAction) -> Term {
        let rec = |t: &Arc<Term>, d: usize| Arc::new(t.act(d, act));
        match self {
            Term::Var(k) if *k >= depth => Term::Var(act.var(k - depth) + depth),
            Term::Var(k) => Term::Var(*k),
            Term::Lam(b) => Term::Lam(rec(b, depth + 1)),
            Term::App(f, a) => Term::App(rec(f, depth), rec(a, depth)),
            Term::Pair(a, b) => Term::Pair(rec(a, depth), rec(b, depth)),
            Term::Fst(p) => Term::Fst(rec(p, depth)),
            Term::Snd(p) => Term::Snd(rec(p, depth)),
            Term::PLam(b) => Term::PLam(rec(b, depth + 1)),
            Term::PApp(p, r) => Term::PApp(rec(p, depth), act_dim(*r, depth, act)),
            Term::Englue {
                phi,
                partial,
                total,
            } => Term::Englue {
                phi: act_cofib(phi, depth, act),
                partial: rec(partial, depth),
                total: rec(total, depth),
            },
            Term::Unglue { ty, arg } => Term::Unglue {
                ty: Arc::new(ty.act(depth, act)),
                arg: rec(arg, depth),
            },
            Term::Base => Term::Base,
            Term::Loop(r) => Term::Loop(act_dim(*r, depth, act)),
            Term::IndS1 {
                motive,
                base,
                loop_case,
                scrut,
            } => Term::IndS1 {
                motive: Arc::new(motive.act(depth + 1, act)),
                base: rec(base, depth),
                loop_case: rec(loop_case, depth + 1),
                scrut: rec(scrut, depth),
            },
            Term::HCom {
                ty,
                r,
                s,
                phi,
                tube,
            } => Term::HCom {
                ty: Arc::new(ty.act(depth, act)),
                r: act_dim(*r, depth, act),
                s: act_dim(*s, depth, act),
                phi: act_cofib(phi, depth, act),
                tube: rec(tube, depth + 1),
            },
            Term::Coe { line, r, s, arg } => Term::Coe {
                line: Arc::new(line.act(depth + 1, act)),
                r: act_dim(*r, depth, act),
                s: act_dim(*s, depth, act),
                arg: rec(arg, depth),
            },
            Term::System(branches) => {
                Term::System(act_system(branches, depth, act, |t, d| t.act(d, act)))
            }
            Term::Abort => Term::Abort,
        }
    }

    /// Weakens every free index by `k`.
    pub fn shift(&self, k: usize) -> Term {
        if k == 0 {
            return self.clone();
        }
        self.act(0, &Shift(k))
    }
}

struct Shift(usize);

impl VarAction for Shift {
    fn var(&self, free: usize) -> usize {
        free + self.0
    }
    fn dim(&self, free: usize) -> Dim {
        Dim::Var(free + self.0)
    }
}

/// An endomorphic dimension substitution: free dimension index `i` is sent
/// to `map[i]` when present, every other variable is left alone. Replacement
/// dimensions are interpreted in the same context as the term.
pub struct DimSubst<'a> {
    pub map: &'a [(usize, Dim)],
}

impl VarAction for DimSubst<'_> {
    fn var(&self, free: usize) -> usize {
        free
    }
    fn dim(&self, free: usize) -> Dim {
        self.map
            .iter()
            .find(|(i, _)| *i == free)
            .map(|(_, d)| *d)
            .unwrap_or(Dim::Var(free))
    }
}

/// Instantiates the innermost binder (index 0) with a dimension and lowers
/// the remaining indices by one.
struct InstantiateDim(Dim);

impl VarAction for InstantiateDim {
    fn var(&self, free: usize) -> usize {
        debug_assert!(free > 0, "term variable in dimension slot");
        free - 1
    }
    fn dim(&self, free: usize) -> Dim {
        if free == 0 {
            self.0
        } else {
            Dim::Var(free - 1)
        }
    }
}

/// A piece of syntax that dimension substitutions act on.
pub trait Syntax: Sized {
    #[doc(hidden)]
    fn act_with(&self, act: &DimSubst<'_>) -> Self;
    #[doc(hidden)]
    fn instantiate_with(&self, r: Dim) -> Self;
}

impl Syntax for Term {
    fn act_with(&self, act: &DimSubst<'_>) -> Self {
        self.act(0, act)
    }
    fn instantiate_with(&self, r: Dim) -> Self {
        self.act(0, &InstantiateDim(r))
    }
}

impl Syntax for TypeExpr {
    fn act_with(&self, act: &DimSubst<'_>) -> Self {
        self.act(0, act)
    }
    fn instantiate_with(&self, r: Dim) -> Self {
        self.act(0, &InstantiateDim(r))
    }
}

impl Syntax for Cofib {
    fn act_with(&self, act: &DimSubst<'_>) -> Self {
        act_cofib(self, 0, act)
    }
    fn instantiate_with(&self, r: Dim) -> Self {
        act_cofib(self, 0, &InstantiateDim(r))
    }
}

/// Replaces the free dimension index `i` by `r`, keeping the context fixed.
pub fn subst_dim<T: Syntax>(t: &T, i: usize, r: Dim) -> T {
    t.act_with(&DimSubst { map: &[(i, r)] })
}

/// Applies several replacements simultaneously.
pub fn subst_dims<T: Syntax>(t: &T, map: &[(usize, Dim)]) -> T {
    t.act_with(&DimSubst { map })
}

/// Instantiates the body of a dimension binder at `r` (given in the outer
/// context).
pub fn instantiate_dim<T: Syntax>(body: &T, r: Dim) -> T {
    body.instantiate_with(r)
}

struct SubstTerm<'a> {
    with: &'a Term,
}

impl Term {
    /// Instantiates the body of a term binder (index 0) with `arg`.
    pub fn instantiate(&self, arg: &Term) -> Term {
        self.subst_top(0, &SubstTerm { with: arg })
    }

    fn subst_top(&self, depth: usize, s: &SubstTerm<'_>) -> Term {
        match self {
            Term::Var(k) if *k == depth => s.with.shift(depth),
            Term::Var(k) if *k > depth => Term::Var(k - 1),
            _ => self.map_children_subst(depth, s),
        }
    }

    fn map_children_subst(&self, depth: usize, s: &SubstTerm<'_>) -> Term {
        // Dimensions are untouched except for the binder removal.
        let lower = Lower { cut: depth };
        let rec = |t: &Arc<Term>, d: usize| Arc::new(t.subst_top(d, s));
        let ty = |t: &TypeExpr, d: usize| t.subst_top_ty(d, s);
        let dim = |r: Dim, d: usize| lower_dim(r, d);
        match self {
            Term::Var(k) => Term::Var(*k),
            Term::Lam(b) => Term::Lam(rec(b, depth + 1)),
            Term::App(f, a) => Term::App(rec(f, depth), rec(a, depth)),
            Term::Pair(a, b) => Term::Pair(rec(a, depth), rec(b, depth)),
            Term::Fst(p) => Term::Fst(rec(p, depth)),
            Term::Snd(p) => Term::Snd(rec(p, depth)),
            Term::PLam(b) => Term::PLam(rec(b, depth + 1)),
            Term::PApp(p, r) => Term::PApp(rec(p, depth), dim(*r, depth)),
            Term::Englue {
                phi,
                partial,
                total,
            } => Term::Englue {
                phi: lower.cofib(phi),
                partial: rec(partial, depth),
                total: rec(total, depth),
            },
            Term::Unglue { ty: t, arg } => Term::Unglue {
                ty: Arc::new(ty(t, depth)),
                arg: rec(arg, depth),
            },
            Term::Base => Term::Base,
            Term::Loop(r) => Term::Loop(dim(*r, depth)),
            Term::IndS1 {
                motive,
                base,
                loop_case,
                scrut,
            } => Term::IndS1 {
                motive: Arc::new(ty(motive, depth + 1)),
                base: rec(base, depth),
                loop_case: rec(loop_case, depth + 1),
                scrut: rec(scrut, depth),
            },
            Term::HCom {
                ty: t,
                r,
                s: s_,
                phi,
                tube,
            } => Term::HCom {
                ty: Arc::new(ty(t, depth)),
                r: dim(*r, depth),
                s: dim(*s_, depth),
                phi: lower.cofib(phi),
                tube: rec(tube, depth + 1),
            },
            Term::Coe {
                line,
                r,
                s: s_,
                arg,
            } => Term::Coe {
                line: Arc::new(ty(line, depth + 1)),
                r: dim(*r, depth),
                s: dim(*s_, depth),
                arg: rec(arg, depth),
            },
            Term::System(bs) => Term::System(
                bs.iter()
                    .map(|(phi, t)| (lower.cofib(phi), t.subst_top(depth, s)))
                    .collect(),
            ),
            Term::Abort => Term::Abort,
        }
    }
}

impl TypeExpr {
    /// Instantiates the body of a term binder (index 0) with `arg`.
    pub fn instantiate(&self, arg: &Term) -> TypeExpr {
        self.subst_top_ty(0, &SubstTerm { with: arg })
    }

    fn subst_top_ty(&self, depth: usize, s: &SubstTerm<'_>) -> TypeExpr {
        let lower = Lower { cut: depth };
        match self {
            TypeExpr::Path { line, ep0, ep1 } => TypeExpr::Path {
                line: Arc::new(line.subst_top_ty(depth + 1, s)),
                ep0: Arc::new(ep0.subst_top(depth, s)),
                ep1: Arc::new(ep1.subst_top(depth, s)),
            },
            TypeExpr::Pi { dom, cod } => TypeExpr::Pi {
                dom: Arc::new(dom.subst_top_ty(depth, s)),
                cod: Arc::new(cod.subst_top_ty(depth + 1, s)),
            },
            TypeExpr::Sigma { dom, cod } => TypeExpr::Sigma {
                dom: Arc::new(dom.subst_top_ty(depth, s)),
                cod: Arc::new(cod.subst_top_ty(depth + 1, s)),
            },
            TypeExpr::Glue {
                phi,
                base,
                partial_ty,
                equiv,
            } => TypeExpr::Glue {
                phi: lower.cofib(phi),
                base: Arc::new(base.subst_top_ty(depth, s)),
                partial_ty: Arc::new(partial_ty.subst_top_ty(depth, s)),
                equiv: Arc::new(equiv.subst_top(depth, s)),
            },
            TypeExpr::S1 => TypeExpr::S1,
            TypeExpr::System(bs) => TypeExpr::System(
                bs.iter()
                    .map(|(phi, t)| (lower.cofib(phi), t.subst_top_ty(depth, s)))
                    .collect(),
            ),
            TypeExpr::Abort => TypeExpr::Abort,
        }
    }
}

/// Removal of a term binder at index `cut` as seen by dimensions.
struct Lower {
    cut: usize,
}

impl Lower {
    fn cofib(&self, phi: &Cofib) -> Cofib {
        phi.map_dims(0, &mut |d, extra| lower_dim(d, self.cut + extra))
    }
}

fn lower_dim(r: Dim, cut: usize) -> Dim {
    match r {
        Dim::Var(k) if k > cut => Dim::Var(k - 1),
        Dim::Var(k) => {
            debug_assert!(k != cut, "dimension variable refers to a term binder");
            Dim::Var(k)
        }
        c => c,
    }
}

/// One entry of an atomic context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Binding {
    Dim,
    Term(TypeExpr),
}

fn write_branches<T: fmt::Display>(f: &mut fmt::Formatter<'_>, bs: &[(Cofib, T)]) -> fmt::Result {
    write!(f, "[")?;
    for (k, (phi, t)) in bs.iter().enumerate() {
        if k > 0 {
            write!(f, " | ")?;
        }
        write!(f, "{phi} -> {t}")?;
    }
    write!(f, "]")
}

impl fmt::Display for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeExpr::S1 => write!(f, "S1"),
            TypeExpr::Path { line, ep0, ep1 } => write!(f, "(Path {line} {ep0} {ep1})"),
            TypeExpr::Pi { dom, cod } => write!(f, "(Pi {dom} {cod})"),
            TypeExpr::Sigma { dom, cod } => write!(f, "(Sigma {dom} {cod})"),
            TypeExpr::Glue {
                phi,
                base,
                partial_ty,
                equiv,
            } => write!(f, "(Glue {phi} {base} {partial_ty} {equiv})"),
            TypeExpr::System(bs) => write_branches(f, bs),
            TypeExpr::Abort => write!(f, "[]"),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(k) => write!(f, "#{k}"),
            Term::Lam(b) => write!(f, "(lam {b})"),
            Term::App(a, b) => write!(f, "(app {a} {b})"),
            Term::Pair(a, b) => write!(f, "(pair {a} {b})"),
            Term::Fst(p) => write!(f, "(fst {p})"),
            Term::Snd(p) => write!(f, "(snd {p})"),
            Term::PLam(b) => write!(f, "(plam {b})"),
            Term::PApp(p, r) => write!(f, "(papp {p} {r})"),
            Term::Englue {
                phi,
                partial,
                total,
            } => write!(f, "(glue {phi} {partial} {total})"),
            Term::Unglue { ty, arg } => write!(f, "(unglue {ty} {arg})"),
            Term::Base => write!(f, "base"),
            Term::Loop(r) => write!(f, "(loop {r})"),
            Term::IndS1 {
                motive,
                base,
                loop_case,
                scrut,
            } => write!(f, "(ind {motive} {base} {loop_case} {scrut})"),
            Term::HCom {
                ty,
                r,
                s,
                phi,
                tube,
            } => write!(f, "(hcom {ty} {r} {s} {phi} {tube})"),
            Term::Coe { line, r, s, arg } => write!(f, "(coe {line} {r} {s} {arg})"),
            Term::System(bs) => write_branches(f, bs),
            Term::Abort => write!(f, "[]"),
        }
    }
}

/// An atomic context: a telescope of dimension and term bindings together
/// with the dimension identifications produced by left inversion.
#[derive(Clone, Debug, Default)]
pub struct Context {
    bindings: Vec<Binding>,
    cong: Congruence,
}

impl Context {
    pub fn new() -> Context {
        Context::default()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn bindings(&self) -> &[Binding] {
        &self.bindings
    }

    pub fn congruence(&self) -> &Congruence {
        &self.cong
    }

    pub fn with_congruence(mut self, cong: Congruence) -> Context {
        self.cong = cong;
        self
    }

    pub fn push_dim(mut self) -> Context {
        self.bindings.push(Binding::Dim);
        self
    }

    pub fn push_term(mut self, ty: TypeExpr) -> Context {
        self.bindings.push(Binding::Term(ty));
        self
    }

    /// Binding referred to by a de Bruijn index.
    pub fn lookup(&self, index: usize) -> Option<&Binding> {
        let len = self.bindings.len();
        (index < len).then(|| &self.bindings[len - 1 - index])
    }

    pub fn level_of(&self, index: usize) -> usize {
        self.bindings.len() - 1 - index
    }

    /// Converts an index-based dimension to a level.
    pub fn dim_to_level(&self, r: Dim) -> Dim {
        match r {
            Dim::Var(i) => Dim::Var(self.level_of(i)),
            c => c,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Sort {
    Dim,
    Term,
}

/// Checks that every index is bound and used at the right sort.
pub fn scope_check(ctx: &Context, t: &Term) -> Result<(), Error> {
    let sorts: Vec<Sort> = ctx
        .bindings()
        .iter()
        .map(|b| match b {
            Binding::Dim => Sort::Dim,
            Binding::Term(_) => Sort::Term,
        })
        .collect();
    ScopeWalk { sorts }.term(t)
}

/// Checks the scoping of a type expression.
pub fn scope_check_ty(ctx: &Context, t: &TypeExpr) -> Result<(), Error> {
    let sorts: Vec<Sort> = ctx
        .bindings()
        .iter()
        .map(|b| match b {
            Binding::Dim => Sort::Dim,
            Binding::Term(_) => Sort::Term,
        })
        .collect();
    ScopeWalk { sorts }.ty(t)
}

struct ScopeWalk {
    sorts: Vec<Sort>,
}

impl ScopeWalk {
    fn expect(&self, index: usize, sort: Sort) -> Result<(), Error> {
        let len = self.sorts.len();
        if index >= len {
            return Err(Error::Scope {
                index,
                problem: ScopeProblem::OutOfRange,
            });
        }
        if self.sorts[len - 1 - index] != sort {
            return Err(Error::Scope {
                index,
                problem: ScopeProblem::KindMismatch,
            });
        }
        Ok(())
    }

    fn dim(&self, r: Dim) -> Result<(), Error> {
        match r {
            Dim::Var(i) => self.expect(i, Sort::Dim),
            _ => Ok(()),
        }
    }

    fn cofib(&mut self, phi: &Cofib) -> Result<(), Error> {
        match phi {
            Cofib::Eq(r, s) => {
                self.dim(*r)?;
                self.dim(*s)
            }
            Cofib::And(a, b) | Cofib::Or(a, b) => {
                self.cofib(a)?;
                self.cofib(b)
            }
            Cofib::Forall(a) => self.under(Sort::Dim, |w| w.cofib(a)),
        }
    }

    fn under<R>(&mut self, sort: Sort, f: impl FnOnce(&mut Self) -> R) -> R {
        self.sorts.push(sort);
        let out = f(self);
        self.sorts.pop();
        out
    }

    fn ty(&mut self, t: &TypeExpr) -> Result<(), Error> {
        match t {
            TypeExpr::Path { line, ep0, ep1 } => {
                self.under(Sort::Dim, |w| w.ty(line))?;
                self.term(ep0)?;
                self.term(ep1)
            }
            TypeExpr::Pi { dom, cod } | TypeExpr::Sigma { dom, cod } => {
                self.ty(dom)?;
                self.under(Sort::Term, |w| w.ty(cod))
            }
            TypeExpr::Glue {
                phi,
                base,
                partial_ty,
                equiv,
            } => {
                self.cofib(phi)?;
                self.ty(base)?;
                self.ty(partial_ty)?;
                self.term(equiv)
            }
            TypeExpr::S1 | TypeExpr::Abort => Ok(()),
            TypeExpr::System(bs) => {
                for (phi, t) in bs {
                    self.cofib(phi)?;
                    self.ty(t)?;
                }
                Ok(())
            }
        }
    }

    fn term(&mut self, t: &Term) -> Result<(), Error> {
        match t {
            Term::Var(i) => self.expect(*i, Sort::Term),
            Term::Lam(b) => self.under(Sort::Term, |w| w.term(b)),
            Term::App(a, b) | Term::Pair(a, b) => {
                self.term(a)?;
                self.term(b)
            }
            Term::Fst(p) | Term::Snd(p) => self.term(p),
            Term::PLam(b) => self.under(Sort::Dim, |w| w.term(b)),
            Term::PApp(p, r) => {
                self.term(p)?;
                self.dim(*r)
            }
            Term::Englue {
                phi,
                partial,
                total,
            } => {
                self.cofib(phi)?;
                self.term(partial)?;
                self.term(total)
            }
            Term::Unglue { ty, arg } => {
                self.ty(ty)?;
                self.term(arg)
            }
            Term::Base | Term::Abort => Ok(()),
            Term::Loop(r) => self.dim(*r),
            Term::IndS1 {
                motive,
                base,
                loop_case,
                scrut,
            } => {
                self.under(Sort::Term, |w| w.ty(motive))?;
                self.term(base)?;
                self.under(Sort::Dim, |w| w.term(loop_case))?;
                self.term(scrut)
            }
            Term::HCom {
                ty,
                r,
                s,
                phi,
                tube,
            } => {
                self.ty(ty)?;
                self.dim(*r)?;
                self.dim(*s)?;
                self.cofib(phi)?;
                self.under(Sort::Dim, |w| w.term(tube))
            }
            Term::Coe { line, r, s, arg } => {
                self.under(Sort::Dim, |w| w.ty(line))?;
                self.dim(*r)?;
                self.dim(*s)?;
                self.term(arg)
            }
            Term::System(bs) => {
                for (phi, t) in bs {
                    self.cofib(phi)?;
                    self.term(t)?;
                }
                Ok(())
            }
        }
    }
}
