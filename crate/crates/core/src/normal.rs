//! Normal and neutral forms.
//!
//! Normal forms refer to variables by de Bruijn *level*: a binder in a form
//! living in a context of size `n` introduces level `n`. Dimensions and
//! cofibrations inside normal forms are canonical relative to the congruence
//! of the context they were produced in, so two forms denote the same
//! element exactly when they are syntactically equal.

use std::fmt;

use crate::cofib::{self, canonical_clauses};
use crate::domain::Ctx;
use crate::error::{Error, Result};
use crate::syntax::{partial_boundary, Cofib, Dim, Term, TypeExpr};

/// A system in normal form: canonical clauses with their bodies.
pub type NfSys<T> = Vec<(Cofib, T)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NfTy {
    S1,
    /// `line` binds a dimension.
    Path {
        line: Box<NfTy>,
        ep0: Box<Nf>,
        ep1: Box<Nf>,
    },
    /// The codomain binds a variable.
    Pi(Box<NfTy>, Box<NfTy>),
    Sigma(Box<NfTy>, Box<NfTy>),
    Glue {
        phi: Cofib,
        base: Box<NfTy>,
        partial_ty: NfSys<NfTy>,
        equiv: NfSys<Nf>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Nf {
    Base,
    Loop(Dim),
    /// The tube binds a dimension and is a system over `i = r ∨ phi`.
    FHCom {
        r: Dim,
        s: Dim,
        phi: Cofib,
        tube: NfSys<Nf>,
    },
    Lam(Box<Nf>),
    Pair(Box<Nf>, Box<Nf>),
    PLam(Box<Nf>),
    Englue {
        phi: Cofib,
        partial: NfSys<Nf>,
        total: Box<Nf>,
    },
    /// A neutral at the circle with its value on its instability.
    Lift {
        phi: Cofib,
        ne: Box<Ne>,
        partial: NfSys<Nf>,
    },
}

/// A neutral together with its locus of instability.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ne {
    pub phi: Cofib,
    pub spine: NeSpine,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NeSpine {
    Var(usize),
    App(Box<Ne>, Box<Nf>),
    Fst(Box<Ne>),
    Snd(Box<Ne>),
    PApp(Box<Ne>, Dim),
    /// The annotation is the glue type being eliminated.
    Unglue(Box<NfTy>, Box<Ne>),
    /// `motive` binds a variable, `loop_case` a dimension.
    Ind {
        motive: Box<NfTy>,
        base: Box<Nf>,
        loop_case: Box<Nf>,
        scrut: Box<Ne>,
    },
}

fn write_sys<T: fmt::Display>(f: &mut fmt::Formatter<'_>, sys: &NfSys<T>) -> fmt::Result {
    write!(f, "(sys")?;
    for (phi, t) in sys {
        write!(f, " ({phi} {t})")?;
    }
    write!(f, ")")
}

impl fmt::Display for NfTy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NfTy::S1 => write!(f, "s1"),
            NfTy::Path { line, ep0, ep1 } => write!(f, "(path {line} {ep0} {ep1})"),
            NfTy::Pi(a, b) => write!(f, "(pi {a} {b})"),
            NfTy::Sigma(a, b) => write!(f, "(sg {a} {b})"),
            NfTy::Glue {
                phi,
                base,
                partial_ty,
                equiv,
            } => {
                write!(f, "(glue {phi} {base} ")?;
                write_sys(f, partial_ty)?;
                write!(f, " ")?;
                write_sys(f, equiv)?;
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for Nf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nf::Base => write!(f, "base"),
            Nf::Loop(r) => write!(f, "(loop {r})"),
            Nf::FHCom { r, s, phi, tube } => {
                write!(f, "(fhcom {r} {s} {phi} ")?;
                write_sys(f, tube)?;
                write!(f, ")")
            }
            Nf::Lam(b) => write!(f, "(lam {b})"),
            Nf::Pair(a, b) => write!(f, "(pair {a} {b})"),
            Nf::PLam(b) => write!(f, "(plam {b})"),
            Nf::Englue {
                phi,
                partial,
                total,
            } => {
                write!(f, "(englue {phi} ")?;
                write_sys(f, partial)?;
                write!(f, " {total})")
            }
            Nf::Lift { phi, ne, partial } => {
                write!(f, "(lift {phi} {ne} ")?;
                write_sys(f, partial)?;
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for Ne {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.spine {
            NeSpine::Var(k) => write!(f, "(var #{k})"),
            NeSpine::App(n, a) => write!(f, "(app {n} {a})"),
            NeSpine::Fst(n) => write!(f, "(fst {n})"),
            NeSpine::Snd(n) => write!(f, "(snd {n})"),
            NeSpine::PApp(n, r) => write!(f, "(papp {n} {r})"),
            NeSpine::Unglue(g, n) => write!(f, "(unglue {g} {n})"),
            NeSpine::Ind {
                motive,
                base,
                loop_case,
                scrut,
            } => write!(f, "(ind {motive} {base} {loop_case} {scrut})"),
        }
    }
}

/// Number of constructors, used as the termination measure of the
/// boundary rewrites.
pub trait Size {
    fn size(&self) -> usize;
}

fn sys_size<T: Size>(sys: &NfSys<T>) -> usize {
    sys.iter().map(|(_, t)| t.size()).sum::<usize>()
}

impl Size for NfTy {
    fn size(&self) -> usize {
        1 + match self {
            NfTy::S1 => 0,
            NfTy::Path { line, ep0, ep1 } => line.size() + ep0.size() + ep1.size(),
            NfTy::Pi(a, b) | NfTy::Sigma(a, b) => a.size() + b.size(),
            NfTy::Glue {
                base,
                partial_ty,
                equiv,
                ..
            } => base.size() + sys_size(partial_ty) + sys_size(equiv),
        }
    }
}

impl Size for Nf {
    fn size(&self) -> usize {
        1 + match self {
            Nf::Base | Nf::Loop(_) => 0,
            Nf::FHCom { tube, .. } => sys_size(tube),
            Nf::Lam(b) | Nf::PLam(b) => b.size(),
            Nf::Pair(a, b) => a.size() + b.size(),
            Nf::Englue { partial, total, .. } => sys_size(partial) + total.size(),
            Nf::Lift { ne, partial, .. } => ne.size() + sys_size(partial),
        }
    }
}

impl Size for Ne {
    fn size(&self) -> usize {
        1 + match &self.spine {
            NeSpine::Var(_) => 0,
            NeSpine::App(n, a) => n.size() + a.size(),
            NeSpine::Fst(n) | NeSpine::Snd(n) | NeSpine::PApp(n, _) => n.size(),
            NeSpine::Unglue(g, n) => g.size() + n.size(),
            NeSpine::Ind {
                motive,
                base,
                loop_case,
                scrut,
            } => motive.size() + base.size() + loop_case.size() + scrut.size(),
        }
    }
}

/// Renames levels in a form: `at` becomes `to`, higher levels move down by
/// one. Used to instantiate the binder of a form that lives one level
/// above the current context.
struct Instantiate {
    at: usize,
    to: Dim,
}

impl Instantiate {
    fn dim(&self, r: Dim) -> Dim {
        match r {
            Dim::Var(k) if k == self.at => self.to,
            Dim::Var(k) if k > self.at => Dim::Var(k - 1),
            other => other,
        }
    }

    fn level(&self, k: usize) -> usize {
        debug_assert!(k != self.at, "instantiated a dimension binder with a term");
        if k > self.at {
            k - 1
        } else {
            k
        }
    }

    fn cofib(&self, phi: &Cofib) -> Cofib {
        phi.map_dims(0, &mut |d, _| self.dim(d))
    }

    fn sys<T>(&self, sys: &NfSys<T>, f: impl Fn(&T) -> T) -> NfSys<T> {
        sys.iter().map(|(c, t)| (self.cofib(c), f(t))).collect()
    }

    fn ty(&self, t: &NfTy) -> NfTy {
        match t {
            NfTy::S1 => NfTy::S1,
            NfTy::Path { line, ep0, ep1 } => NfTy::Path {
                line: Box::new(self.ty(line)),
                ep0: Box::new(self.nf(ep0)),
                ep1: Box::new(self.nf(ep1)),
            },
            NfTy::Pi(a, b) => NfTy::Pi(Box::new(self.ty(a)), Box::new(self.ty(b))),
            NfTy::Sigma(a, b) => NfTy::Sigma(Box::new(self.ty(a)), Box::new(self.ty(b))),
            NfTy::Glue {
                phi,
                base,
                partial_ty,
                equiv,
            } => NfTy::Glue {
                phi: self.cofib(phi),
                base: Box::new(self.ty(base)),
                partial_ty: self.sys(partial_ty, |t| self.ty(t)),
                equiv: self.sys(equiv, |t| self.nf(t)),
            },
        }
    }

    fn nf(&self, n: &Nf) -> Nf {
        match n {
            Nf::Base => Nf::Base,
            Nf::Loop(r) => Nf::Loop(self.dim(*r)),
            Nf::FHCom { r, s, phi, tube } => Nf::FHCom {
                r: self.dim(*r),
                s: self.dim(*s),
                phi: self.cofib(phi),
                tube: self.sys(tube, |t| self.nf(t)),
            },
            Nf::Lam(b) => Nf::Lam(Box::new(self.nf(b))),
            Nf::Pair(a, b) => Nf::Pair(Box::new(self.nf(a)), Box::new(self.nf(b))),
            Nf::PLam(b) => Nf::PLam(Box::new(self.nf(b))),
            Nf::Englue {
                phi,
                partial,
                total,
            } => Nf::Englue {
                phi: self.cofib(phi),
                partial: self.sys(partial, |t| self.nf(t)),
                total: Box::new(self.nf(total)),
            },
            Nf::Lift { phi, ne, partial } => Nf::Lift {
                phi: self.cofib(phi),
                ne: Box::new(self.ne(ne)),
                partial: self.sys(partial, |t| self.nf(t)),
            },
        }
    }

    fn ne(&self, n: &Ne) -> Ne {
        let spine = match &n.spine {
            NeSpine::Var(k) => NeSpine::Var(self.level(*k)),
            NeSpine::App(m, a) => NeSpine::App(Box::new(self.ne(m)), Box::new(self.nf(a))),
            NeSpine::Fst(m) => NeSpine::Fst(Box::new(self.ne(m))),
            NeSpine::Snd(m) => NeSpine::Snd(Box::new(self.ne(m))),
            NeSpine::PApp(m, r) => NeSpine::PApp(Box::new(self.ne(m)), self.dim(*r)),
            NeSpine::Unglue(g, m) => NeSpine::Unglue(Box::new(self.ty(g)), Box::new(self.ne(m))),
            NeSpine::Ind {
                motive,
                base,
                loop_case,
                scrut,
            } => NeSpine::Ind {
                motive: Box::new(self.ty(motive)),
                base: Box::new(self.nf(base)),
                loop_case: Box::new(self.nf(loop_case)),
                scrut: Box::new(self.ne(scrut)),
            },
        };
        Ne {
            phi: self.cofib(&n.phi),
            spine,
        }
    }
}

/// Restricts a system to a (possibly stronger) context: one clause per
/// canonical clause of `phi`, each body taken from an old clause that holds
/// there.
fn renorm_sys<T>(ctx: &Ctx, phi: &Cofib, old: &NfSys<T>, f: impl Fn(&Ctx, &T) -> T) -> NfSys<T> {
    canonical_clauses(ctx.congruence(), phi)
        .into_iter()
        .filter_map(|clause| {
            let branch = ctx.assume(&clause)?;
            let (_, body) = old.iter().find(|(c, _)| branch.entails(c))?;
            Some((cofib::from_clauses(&[clause]), f(&branch, body)))
        })
        .collect()
}

fn pick<'a, T>(ctx: &Ctx, sys: &'a NfSys<T>) -> Option<&'a T> {
    sys.iter().find(|(c, _)| ctx.entails(c)).map(|(_, t)| t)
}

fn level_of(ctx: &Ctx) -> usize {
    ctx.size()
}

/// Applies the boundary rewrites (loop at an endpoint, lift and englue under
/// their cofibration, fhcom at its cap or tube, glue under its cofibration)
/// relative to `ctx`, and re-canonicalizes dimensions, cofibrations and
/// systems. Each rewrite replaces a node by a strict subterm, so this
/// terminates; the result is a fixed point.
pub fn boundary_normalize(ctx: &Ctx, n: &Nf) -> Nf {
    match n {
        Nf::Base => Nf::Base,
        Nf::Loop(r) => {
            let r = ctx.canon_dim(*r);
            if ctx.entails(&partial_boundary(r)) {
                Nf::Base
            } else {
                Nf::Loop(r)
            }
        }
        Nf::FHCom { r, s, phi, tube } => {
            if ctx.equal_dims(*r, *s) || ctx.entails(phi) {
                let inst = Instantiate {
                    at: level_of(ctx),
                    to: *s,
                };
                let cap = inst.sys(tube, |t| inst.nf(t));
                return match pick(ctx, &cap) {
                    Some(body) => boundary_normalize(ctx, body),
                    None => n.clone(),
                };
            }
            let (inner, i) = ctx.fresh();
            let domain = Cofib::or(Cofib::eq(i, ctx.canon_dim(*r)), phi.clone());
            Nf::FHCom {
                r: ctx.canon_dim(*r),
                s: ctx.canon_dim(*s),
                phi: ctx.canon_cofib(phi),
                tube: renorm_sys(&inner, &domain, tube, boundary_normalize),
            }
        }
        Nf::Lam(b) => Nf::Lam(Box::new(boundary_normalize(&ctx.fresh().0, b))),
        Nf::PLam(b) => Nf::PLam(Box::new(boundary_normalize(&ctx.fresh().0, b))),
        Nf::Pair(a, b) => Nf::Pair(
            Box::new(boundary_normalize(ctx, a)),
            Box::new(boundary_normalize(ctx, b)),
        ),
        Nf::Englue {
            phi,
            partial,
            total,
        } => {
            if ctx.entails(phi) {
                return match pick(ctx, partial) {
                    Some(body) => boundary_normalize(ctx, body),
                    None => n.clone(),
                };
            }
            Nf::Englue {
                phi: ctx.canon_cofib(phi),
                partial: renorm_sys(ctx, phi, partial, boundary_normalize),
                total: Box::new(boundary_normalize(ctx, total)),
            }
        }
        Nf::Lift { phi, ne, partial } => {
            if ctx.entails(phi) {
                return match pick(ctx, partial) {
                    Some(body) => boundary_normalize(ctx, body),
                    None => n.clone(),
                };
            }
            Nf::Lift {
                phi: ctx.canon_cofib(phi),
                ne: Box::new(boundary_normalize_ne(ctx, ne)),
                partial: renorm_sys(ctx, phi, partial, boundary_normalize),
            }
        }
    }
}

pub fn boundary_normalize_ty(ctx: &Ctx, t: &NfTy) -> NfTy {
    match t {
        NfTy::S1 => NfTy::S1,
        NfTy::Path { line, ep0, ep1 } => NfTy::Path {
            line: Box::new(boundary_normalize_ty(&ctx.fresh().0, line)),
            ep0: Box::new(boundary_normalize(ctx, ep0)),
            ep1: Box::new(boundary_normalize(ctx, ep1)),
        },
        NfTy::Pi(a, b) => NfTy::Pi(
            Box::new(boundary_normalize_ty(ctx, a)),
            Box::new(boundary_normalize_ty(&ctx.fresh().0, b)),
        ),
        NfTy::Sigma(a, b) => NfTy::Sigma(
            Box::new(boundary_normalize_ty(ctx, a)),
            Box::new(boundary_normalize_ty(&ctx.fresh().0, b)),
        ),
        NfTy::Glue {
            phi,
            base,
            partial_ty,
            equiv,
        } => {
            if ctx.entails(phi) {
                return match pick(ctx, partial_ty) {
                    Some(a) => boundary_normalize_ty(ctx, a),
                    None => t.clone(),
                };
            }
            glue_renormalized(ctx, phi, base, partial_ty, equiv)
        }
    }
}

fn glue_renormalized(
    ctx: &Ctx,
    phi: &Cofib,
    base: &NfTy,
    partial_ty: &NfSys<NfTy>,
    equiv: &NfSys<Nf>,
) -> NfTy {
    NfTy::Glue {
        phi: ctx.canon_cofib(phi),
        base: Box::new(boundary_normalize_ty(ctx, base)),
        partial_ty: renorm_sys(ctx, phi, partial_ty, boundary_normalize_ty),
        equiv: renorm_sys(ctx, phi, equiv, boundary_normalize),
    }
}

pub fn boundary_normalize_ne(ctx: &Ctx, n: &Ne) -> Ne {
    let spine = match &n.spine {
        NeSpine::Var(k) => NeSpine::Var(*k),
        NeSpine::App(m, a) => NeSpine::App(
            Box::new(boundary_normalize_ne(ctx, m)),
            Box::new(boundary_normalize(ctx, a)),
        ),
        NeSpine::Fst(m) => NeSpine::Fst(Box::new(boundary_normalize_ne(ctx, m))),
        NeSpine::Snd(m) => NeSpine::Snd(Box::new(boundary_normalize_ne(ctx, m))),
        NeSpine::PApp(m, r) => {
            NeSpine::PApp(Box::new(boundary_normalize_ne(ctx, m)), ctx.canon_dim(*r))
        }
        NeSpine::Unglue(g, m) => {
            // The annotation is kept as a glue type even where it would unfold.
            let g = match &**g {
                NfTy::Glue {
                    phi,
                    base,
                    partial_ty,
                    equiv,
                } => glue_renormalized(ctx, phi, base, partial_ty, equiv),
                other => boundary_normalize_ty(ctx, other),
            };
            NeSpine::Unglue(Box::new(g), Box::new(boundary_normalize_ne(ctx, m)))
        }
        NeSpine::Ind {
            motive,
            base,
            loop_case,
            scrut,
        } => NeSpine::Ind {
            motive: Box::new(boundary_normalize_ty(&ctx.fresh().0, motive)),
            base: Box::new(boundary_normalize(ctx, base)),
            loop_case: Box::new(boundary_normalize(&ctx.fresh().0, loop_case)),
            scrut: Box::new(boundary_normalize_ne(ctx, scrut)),
        },
    };
    Ne {
        phi: ctx.canon_cofib(&n.phi),
        spine,
    }
}

/// Equality of normal forms in `ctx`. Both sides are first restricted to
/// `ctx`; systems are then compared clause by clause, each clause body
/// living in the context strengthened by its clause, which is exactly the
/// comparison along the left inversion of the system's cofibration.
pub fn nf_equal(ctx: &Ctx, a: &Nf, b: &Nf) -> bool {
    boundary_normalize(ctx, a) == boundary_normalize(ctx, b)
}

pub fn nf_ty_equal(ctx: &Ctx, a: &NfTy, b: &NfTy) -> bool {
    boundary_normalize_ty(ctx, a) == boundary_normalize_ty(ctx, b)
}

pub fn ne_equal(ctx: &Ctx, a: &Ne, b: &Ne) -> bool {
    boundary_normalize_ne(ctx, a) == boundary_normalize_ne(ctx, b)
}

fn unwrap_glue<'a>(ctx: &Ctx, t: &'a NfTy) -> &'a NfTy {
    match t {
        NfTy::Glue {
            phi, partial_ty, ..
        } if ctx.entails(phi) => match pick(ctx, partial_ty) {
            Some(a) => unwrap_glue(ctx, a),
            None => t,
        },
        _ => t,
    }
}

pub fn nf_is_pi(ctx: &Ctx, t: &NfTy) -> bool {
    matches!(unwrap_glue(ctx, t), NfTy::Pi(..))
}

pub fn nf_dom<'a>(ctx: &Ctx, t: &'a NfTy) -> Result<&'a NfTy> {
    match unwrap_glue(ctx, t) {
        NfTy::Pi(a, _) => Ok(a),
        _ => Err(Error::NotAPi),
    }
}

/// The codomain, binding level `ctx.size()`.
pub fn nf_cod<'a>(ctx: &Ctx, t: &'a NfTy) -> Result<&'a NfTy> {
    match unwrap_glue(ctx, t) {
        NfTy::Pi(_, b) => Ok(b),
        _ => Err(Error::NotAPi),
    }
}

/// Converts normal forms to core syntax in a context of `n` entries.
pub struct Embed;

impl Embed {
    pub fn dim(n: usize, r: Dim) -> Dim {
        match r {
            Dim::Var(k) => {
                debug_assert!(k < n, "level {k} escapes a context of size {n}");
                Dim::Var(n - 1 - k)
            }
            c => c,
        }
    }

    pub fn cofib(n: usize, phi: &Cofib) -> Cofib {
        phi.map_dims(0, &mut |d, _| Embed::dim(n, d))
    }

    fn sys(n: usize, sys: &NfSys<Nf>) -> Term {
        Term::System(
            sys.iter()
                .map(|(c, t)| (Embed::cofib(n, c), Embed::nf(n, t)))
                .collect(),
        )
    }

    pub fn ty(n: usize, t: &NfTy) -> TypeExpr {
        match t {
            NfTy::S1 => TypeExpr::S1,
            NfTy::Path { line, ep0, ep1 } => {
                TypeExpr::path(Embed::ty(n + 1, line), Embed::nf(n, ep0), Embed::nf(n, ep1))
            }
            NfTy::Pi(a, b) => TypeExpr::pi(Embed::ty(n, a), Embed::ty(n + 1, b)),
            NfTy::Sigma(a, b) => TypeExpr::sigma(Embed::ty(n, a), Embed::ty(n + 1, b)),
            NfTy::Glue {
                phi,
                base,
                partial_ty,
                equiv,
            } => TypeExpr::glue(
                Embed::cofib(n, phi),
                Embed::ty(n, base),
                TypeExpr::System(
                    partial_ty
                        .iter()
                        .map(|(c, t)| (Embed::cofib(n, c), Embed::ty(n, t)))
                        .collect(),
                ),
                Embed::sys(n, equiv),
            ),
        }
    }

    pub fn nf(n: usize, t: &Nf) -> Term {
        match t {
            Nf::Base => Term::Base,
            Nf::Loop(r) => Term::Loop(Embed::dim(n, *r)),
            Nf::FHCom { r, s, phi, tube } => Term::hcom(
                TypeExpr::S1,
                Embed::dim(n, *r),
                Embed::dim(n, *s),
                Embed::cofib(n, phi),
                Embed::sys(n + 1, tube),
            ),
            Nf::Lam(b) => Term::lam(Embed::nf(n + 1, b)),
            Nf::Pair(a, b) => Term::pair(Embed::nf(n, a), Embed::nf(n, b)),
            Nf::PLam(b) => Term::plam(Embed::nf(n + 1, b)),
            Nf::Englue {
                phi,
                partial,
                total,
            } => Term::englue(
                Embed::cofib(n, phi),
                Embed::sys(n, partial),
                Embed::nf(n, total),
            ),
            Nf::Lift { ne, .. } => Embed::ne(n, ne),
        }
    }

    pub fn ne(n: usize, t: &Ne) -> Term {
        match &t.spine {
            NeSpine::Var(k) => {
                debug_assert!(*k < n, "level {k} escapes a context of size {n}");
                Term::Var(n - 1 - k)
            }
            NeSpine::App(m, a) => Term::app(Embed::ne(n, m), Embed::nf(n, a)),
            NeSpine::Fst(m) => Term::fst(Embed::ne(n, m)),
            NeSpine::Snd(m) => Term::snd(Embed::ne(n, m)),
            NeSpine::PApp(m, r) => Term::papp(Embed::ne(n, m), Embed::dim(n, *r)),
            NeSpine::Unglue(g, m) => Term::unglue(Embed::ty(n, g), Embed::ne(n, m)),
            NeSpine::Ind {
                motive,
                base,
                loop_case,
                scrut,
            } => Term::ind_s1(
                Embed::ty(n + 1, motive),
                Embed::nf(n, base),
                Embed::nf(n + 1, loop_case),
                Embed::ne(n, scrut),
            ),
        }
    }
}

/// Recomputes the instability of a neutral from its spine.
pub fn spine_instability(n: &Ne) -> Cofib {
    match &n.spine {
        NeSpine::Var(_) => Cofib::bot(),
        NeSpine::App(m, _) | NeSpine::Fst(m) | NeSpine::Snd(m) => spine_instability(m),
        NeSpine::Ind { scrut, .. } => spine_instability(scrut),
        NeSpine::PApp(m, r) => Cofib::join(spine_instability(m), partial_boundary(*r)),
        NeSpine::Unglue(g, m) => {
            let glue_phi = match &**g {
                NfTy::Glue { phi, .. } => phi.clone(),
                _ => Cofib::bot(),
            };
            Cofib::join(spine_instability(m), glue_phi)
        }
    }
}

/// Scans a normal form for instability violations: a neutral whose stored
/// cofibration differs from the one recomputed from its spine, or any
/// boundary node (neutral, lift, englue, glue, fhcom, loop) sitting in a
/// context where its boundary holds.
pub fn audit_nf(ctx: &Ctx, n: &Nf, out: &mut Vec<String>) {
    match n {
        Nf::Base => {}
        Nf::Loop(r) => {
            if ctx.entails(&partial_boundary(*r)) {
                out.push(format!("loop {r} at an endpoint"));
            }
        }
        Nf::FHCom { r, s, phi, tube } => {
            if ctx.equal_dims(*r, *s) || ctx.entails(phi) {
                out.push(format!("fhcom {r} {s} {phi} under its boundary"));
            }
            let inner = ctx.fresh().0;
            audit_sys(&inner, tube, out, audit_nf);
        }
        Nf::Lam(b) | Nf::PLam(b) => audit_nf(&ctx.fresh().0, b, out),
        Nf::Pair(a, b) => {
            audit_nf(ctx, a, out);
            audit_nf(ctx, b, out);
        }
        Nf::Englue {
            phi,
            partial,
            total,
        } => {
            if ctx.entails(phi) {
                out.push(format!("englue under entailed {phi}"));
            }
            audit_sys(ctx, partial, out, audit_nf);
            audit_nf(ctx, total, out);
        }
        Nf::Lift { phi, ne, partial } => {
            if ctx.entails(phi) {
                out.push(format!("lift under entailed {phi}"));
            }
            if !equivalent(ctx, phi, &ne.phi) {
                out.push(format!(
                    "lift cofibration {phi} differs from its neutral's {}",
                    ne.phi
                ));
            }
            audit_ne(ctx, ne, out);
            audit_sys(ctx, partial, out, audit_nf);
        }
    }
}

pub fn audit_ty(ctx: &Ctx, t: &NfTy, out: &mut Vec<String>) {
    match t {
        NfTy::S1 => {}
        NfTy::Path { line, ep0, ep1 } => {
            audit_ty(&ctx.fresh().0, line, out);
            audit_nf(ctx, ep0, out);
            audit_nf(ctx, ep1, out);
        }
        NfTy::Pi(a, b) | NfTy::Sigma(a, b) => {
            audit_ty(ctx, a, out);
            audit_ty(&ctx.fresh().0, b, out);
        }
        NfTy::Glue {
            phi,
            base,
            partial_ty,
            equiv,
        } => {
            if ctx.entails(phi) {
                out.push(format!("glue type under entailed {phi}"));
            }
            audit_ty(ctx, base, out);
            audit_sys(ctx, partial_ty, out, audit_ty);
            audit_sys(ctx, equiv, out, audit_nf);
        }
    }
}

pub fn audit_ne(ctx: &Ctx, n: &Ne, out: &mut Vec<String>) {
    let recomputed = spine_instability(n);
    if !equivalent(ctx, &recomputed, &n.phi) {
        out.push(format!(
            "neutral {n} stores {} but its spine gives {recomputed}",
            n.phi
        ));
    }
    if ctx.entails(&n.phi) {
        out.push(format!(
            "neutral {n} exists under its instability {}",
            n.phi
        ));
    }
    match &n.spine {
        NeSpine::Var(_) => {}
        NeSpine::App(m, a) => {
            audit_ne(ctx, m, out);
            audit_nf(ctx, a, out);
        }
        NeSpine::Fst(m) | NeSpine::Snd(m) | NeSpine::PApp(m, _) => audit_ne(ctx, m, out),
        NeSpine::Unglue(g, m) => {
            if let NfTy::Glue {
                base,
                partial_ty,
                equiv,
                ..
            } = &**g
            {
                audit_ty(ctx, base, out);
                audit_sys(ctx, partial_ty, out, audit_ty);
                audit_sys(ctx, equiv, out, audit_nf);
            }
            audit_ne(ctx, m, out);
        }
        NeSpine::Ind {
            motive,
            base,
            loop_case,
            scrut,
        } => {
            audit_ty(&ctx.fresh().0, motive, out);
            audit_nf(ctx, base, out);
            audit_nf(&ctx.fresh().0, loop_case, out);
            audit_ne(ctx, scrut, out);
        }
    }
}

fn audit_sys<T>(
    ctx: &Ctx,
    sys: &NfSys<T>,
    out: &mut Vec<String>,
    f: impl Fn(&Ctx, &T, &mut Vec<String>),
) {
    for (clause, body) in sys {
        for branch in ctx.restrict(clause) {
            f(&branch, body, out);
        }
    }
}

fn equivalent(ctx: &Ctx, a: &Cofib, b: &Cofib) -> bool {
    let cong = ctx.congruence();
    cong.entails(a, b) && cong.entails(b, a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var_ne(k: usize) -> Ne {
        Ne {
            phi: Cofib::bot(),
            spine: NeSpine::Var(k),
        }
    }

    #[test]
    fn loop_at_endpoint_rewrites() {
        let (ctx, i) = Ctx::new().fresh();
        let ctx = ctx.assume(&[(i, Dim::Zero)]).unwrap();
        assert_eq!(boundary_normalize(&ctx, &Nf::Loop(i)), Nf::Base);
    }

    #[test]
    fn lift_at_bottom_is_unchanged() {
        let ctx = Ctx::new().fresh().0;
        let lift = Nf::Lift {
            phi: Cofib::bot(),
            ne: Box::new(var_ne(0)),
            partial: vec![],
        };
        assert_eq!(boundary_normalize(&ctx, &lift), lift);
    }

    #[test]
    fn glue_under_entailed_cofibration_rewrites() {
        let ctx = Ctx::new();
        let g = NfTy::Glue {
            phi: Cofib::top(),
            base: Box::new(NfTy::S1),
            partial_ty: vec![(
                Cofib::top(),
                NfTy::Pi(Box::new(NfTy::S1), Box::new(NfTy::S1)),
            )],
            equiv: vec![],
        };
        assert_eq!(
            boundary_normalize_ty(&ctx, &g),
            NfTy::Pi(Box::new(NfTy::S1), Box::new(NfTy::S1))
        );
        assert!(nf_is_pi(&ctx, &g));
        assert_eq!(nf_dom(&ctx, &g).unwrap(), &NfTy::S1);
    }

    #[test]
    fn pi_discrimination() {
        let ctx = Ctx::new();
        let pi = NfTy::Pi(Box::new(NfTy::S1), Box::new(NfTy::S1));
        let sg = NfTy::Sigma(Box::new(NfTy::S1), Box::new(NfTy::S1));
        assert!(nf_is_pi(&ctx, &pi));
        assert!(!nf_is_pi(&ctx, &sg));
        assert_eq!(nf_dom(&ctx, &sg), Err(Error::NotAPi));
    }

    #[test]
    fn equality_along_boundary_branches() {
        // Under ∂i, loop i and base agree in each inverted branch.
        let (ctx, i) = Ctx::new().fresh();
        for branch in ctx.restrict(&partial_boundary(i)) {
            assert!(nf_equal(&branch, &Nf::Loop(i), &Nf::Base));
        }
        assert!(!nf_equal(&ctx, &Nf::Loop(i), &Nf::Base));
    }

    #[test]
    fn fhcom_under_cap_instantiates_tube() {
        let (ctx, i) = Ctx::new().fresh();
        // fhcom i i 0=1 [#1 = i ↪ loop #1], inside a context of size 1
        let fh = Nf::FHCom {
            r: i,
            s: i,
            phi: Cofib::bot(),
            tube: vec![(Cofib::eq(Dim::Var(1), i), Nf::Loop(Dim::Var(1)))],
        };
        assert_eq!(boundary_normalize(&ctx, &fh), Nf::Loop(i));
    }

    #[test]
    fn serialization() {
        let nf = Nf::Lam(Box::new(Nf::Lift {
            phi: Cofib::bot(),
            ne: Box::new(Ne {
                phi: Cofib::bot(),
                spine: NeSpine::App(Box::new(var_ne(0)), Box::new(Nf::Loop(Dim::Var(1)))),
            }),
            partial: vec![],
        }));
        assert_eq!(
            nf.to_string(),
            "(lam (lift (= 0 1) (app (var #0) (loop #1)) (sys)))"
        );
    }
}
