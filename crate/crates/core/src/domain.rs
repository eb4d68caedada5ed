//! Semantic values for normalization by evaluation.
//!
//! Values live in a semantic context [`Ctx`]: a number of dimension/term
//! levels together with a congruence of dimension identifications. Values
//! never get substituted; a value built in some context stays valid in every
//! extension or strengthening of it, and the boundary conditions that a
//! stronger congruence may trigger (a `loop` at an endpoint, a cut whose
//! instability became true, ...) are discharged by [`whnf`] whenever a value
//! is inspected.
//!
//! Closures receive the context they are invoked in.

use std::fmt;
use std::sync::atomic::{AtomicU8, Ordering};
use std::sync::{Arc, Mutex};

use crate::cofib::{self, Congruence};
use crate::error::{Error, Result};
use crate::syntax::{partial_boundary, Cofib, Dim};

/// A semantic context: `size` levels and the congruence accumulated by left
/// inversion.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Ctx {
    size: usize,
    cong: Congruence,
}

impl Ctx {
    pub fn new() -> Ctx {
        Ctx::default()
    }

    pub fn with(size: usize, cong: Congruence) -> Ctx {
        Ctx { size, cong }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn congruence(&self) -> &Congruence {
        &self.cong
    }

    /// Adds one level, returning it as a dimension.
    pub fn fresh(&self) -> (Ctx, Dim) {
        let ctx = Ctx {
            size: self.size + 1,
            cong: self.cong.clone(),
        };
        (ctx, Dim::Var(self.size))
    }

    pub fn entails(&self, phi: &Cofib) -> bool {
        self.cong.holds(phi)
    }

    pub fn equal_dims(&self, r: Dim, s: Dim) -> bool {
        self.cong.equal(r, s)
    }

    /// The consistent branches of `phi` in this context.
    pub fn restrict(&self, phi: &Cofib) -> Vec<Ctx> {
        self.cong
            .restrict(phi)
            .into_iter()
            .map(|cong| Ctx {
                size: self.size,
                cong,
            })
            .collect()
    }

    /// Strengthens the context by a conjunction of equations, if consistent.
    pub fn assume(&self, clause: &[(Dim, Dim)]) -> Option<Ctx> {
        let cong = self.cong.with_eqs(clause);
        cong.is_consistent().then_some(Ctx {
            size: self.size,
            cong,
        })
    }

    pub fn canon_dim(&self, r: Dim) -> Dim {
        self.cong.find(r)
    }

    pub fn canon_cofib(&self, phi: &Cofib) -> Cofib {
        cofib::canonical(&self.cong, phi)
    }
}

type CloFn<A, B> = dyn Fn(&Ctx, A) -> Result<B> + Send + Sync;

/// A closure over the semantic domain.
pub struct Clo<A, B>(Arc<CloFn<A, B>>);

impl<A, B> Clo<A, B> {
    pub fn new(f: impl Fn(&Ctx, A) -> Result<B> + Send + Sync + 'static) -> Clo<A, B> {
        Clo(Arc::new(f))
    }

    pub fn apply(&self, ctx: &Ctx, a: A) -> Result<B> {
        (self.0)(ctx, a)
    }
}

impl<A: Copy + PartialEq + Send + 'static, B: Clone + Send + 'static> Clo<A, B> {
    /// A closure remembering its results. Closures are pure in the context
    /// and argument, so a hit is always sound.
    pub fn memo(f: impl Fn(&Ctx, A) -> Result<B> + Send + Sync + 'static) -> Clo<A, B> {
        let cache: Mutex<Vec<(Ctx, A, B)>> = Mutex::new(Vec::new());
        Clo::new(move |ctx, a| {
            if let Some((_, _, b)) = lock(&cache).iter().find(|(c, x, _)| *x == a && c == ctx) {
                return Ok(b.clone());
            }
            let b = f(ctx, a)?;
            let mut entries = lock(&cache);
            if entries.len() >= MEMO_ENTRIES {
                entries.remove(0);
            }
            entries.push((ctx.clone(), a, b.clone()));
            Ok(b)
        })
    }
}

const MEMO_ENTRIES: usize = 8;

fn lock<T>(m: &Mutex<T>) -> std::sync::MutexGuard<'_, T> {
    m.lock().unwrap_or_else(|e| e.into_inner())
}

impl<B: Clone + Send + Sync + 'static, A> Clo<A, B> {
    pub fn constant(b: B) -> Clo<A, B> {
        Clo::new(move |_, _| Ok(b.clone()))
    }
}

impl<A, B> Clone for Clo<A, B> {
    fn clone(&self) -> Self {
        Clo(self.0.clone())
    }
}

impl<A, B> fmt::Debug for Clo<A, B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<closure>")
    }
}

/// A suspended value, only meaningful in contexts satisfying some
/// cofibration.
pub type Thunk<T> = Clo<(), T>;

impl<T> Clo<(), T> {
    pub fn force(&self, ctx: &Ctx) -> Result<T> {
        self.apply(ctx, ())
    }
}

/// A thunk that must never be forced: the partial element over `0 = 1`.
pub fn absurd<T>() -> Thunk<T> {
    Clo::new(|_, _| Err(Error::Domain("forced a partial element over 0 = 1".into())))
}

#[derive(Clone, Debug)]
pub enum TyValue {
    Path(Arc<PathTy>),
    Pi(Arc<TyValue>, Clo<Value, TyValue>),
    Sigma(Arc<TyValue>, Clo<Value, TyValue>),
    Glue(Arc<GlueTy>),
    S1,
}

#[derive(Clone, Debug)]
pub struct PathTy {
    pub line: Clo<Dim, TyValue>,
    pub ep0: Value,
    pub ep1: Value,
}

#[derive(Clone, Debug)]
pub struct GlueTy {
    pub phi: Cofib,
    pub base: TyValue,
    pub partial_ty: Thunk<TyValue>,
    pub equiv: Thunk<Value>,
}

#[derive(Clone, Debug)]
pub enum Value {
    Lam(Clo<Value, Value>),
    Pair(Arc<(Value, Value)>),
    /// Endpoints are recovered by applying the body at `0` and `1`.
    PLam(Clo<Dim, Value>),
    Englue(Arc<Englue>),
    Base,
    Loop(Dim),
    FHCom(Arc<FHCom>),
    Cut(Arc<Cut>),
}

#[derive(Clone, Debug)]
pub struct Englue {
    pub phi: Cofib,
    pub partial: Thunk<Value>,
    pub total: Value,
}

/// A formal composition cell in the circle.
#[derive(Clone, Debug)]
pub struct FHCom {
    pub r: Dim,
    pub s: Dim,
    pub phi: Cofib,
    /// Defined on `i = r ∨ phi`.
    pub tube: Clo<Dim, Value>,
}

/// A stabilized neutral: a stuck spine together with its locus of
/// instability and the value it takes there.
#[derive(Clone, Debug)]
pub struct Cut {
    pub ty: TyValue,
    pub ne: Neutral,
    pub phi: Cofib,
    pub partial: Thunk<Value>,
}

#[derive(Clone, Debug)]
pub struct Neutral {
    pub head: usize,
    pub frames: Vec<Frame>,
}

#[derive(Clone, Debug)]
pub enum Frame {
    App {
        arg: Value,
        dom: TyValue,
    },
    Fst,
    Snd,
    PApp(Dim),
    Unglue(Arc<GlueTy>),
    Ind {
        motive: Clo<Value, TyValue>,
        base: Value,
        loop_case: Clo<Dim, Value>,
    },
}

impl Neutral {
    pub fn var(level: usize) -> Neutral {
        Neutral {
            head: level,
            frames: Vec::new(),
        }
    }

    pub fn push(&self, frame: Frame) -> Neutral {
        let mut frames = self.frames.clone();
        frames.push(frame);
        Neutral {
            head: self.head,
            frames,
        }
    }

    /// The instability recomputed from the spine: `0 = 1` at the head,
    /// joined with `∂r` at each path application and with the glue
    /// cofibration at each unglue.
    pub fn instability(&self) -> Cofib {
        self.frames.iter().fold(Cofib::bot(), |acc, f| match f {
            Frame::PApp(r) => Cofib::join(acc, partial_boundary(*r)),
            Frame::Unglue(g) => Cofib::join(acc, g.phi.clone()),
            _ => acc,
        })
    }
}

#[derive(Clone, Debug)]
pub enum EnvEntry {
    Dim(Dim),
    Val(Value),
}

/// Values for the free indices of a term, innermost last.
#[derive(Clone, Debug, Default)]
pub struct Env {
    entries: Arc<Vec<EnvEntry>>,
}

impl Env {
    pub fn new() -> Env {
        Env::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[EnvEntry] {
        &self.entries
    }

    pub fn push(&self, entry: EnvEntry) -> Env {
        let mut entries = (*self.entries).clone();
        entries.push(entry);
        Env {
            entries: Arc::new(entries),
        }
    }

    pub fn push_val(&self, v: Value) -> Env {
        self.push(EnvEntry::Val(v))
    }

    pub fn push_dim(&self, r: Dim) -> Env {
        self.push(EnvEntry::Dim(r))
    }

    fn get(&self, index: usize) -> Result<&EnvEntry> {
        let len = self.entries.len();
        if index >= len {
            return Err(Error::Domain(format!("index {index} out of environment")));
        }
        Ok(&self.entries[len - 1 - index])
    }

    pub fn value(&self, index: usize) -> Result<Value> {
        match self.get(index)? {
            EnvEntry::Val(v) => Ok(v.clone()),
            EnvEntry::Dim(_) => Err(Error::Domain(format!("index {index} is a dimension"))),
        }
    }

    pub fn dim(&self, d: Dim) -> Result<Dim> {
        match d {
            Dim::Var(i) => match self.get(i)? {
                EnvEntry::Dim(r) => Ok(*r),
                EnvEntry::Val(_) => Err(Error::Domain(format!("index {i} is a term"))),
            },
            c => Ok(c),
        }
    }
}

/// Discharges boundary conditions that hold in `ctx`: loops at endpoints,
/// composition cells at their cap or tube, and glue values or cuts whose
/// cofibration is entailed.
pub fn whnf(ctx: &Ctx, v: &Value) -> Result<Value> {
    let mut v = v.clone();
    loop {
        v = match &v {
            Value::Loop(r) if ctx.entails(&partial_boundary(*r)) => return Ok(Value::Base),
            Value::FHCom(h) if ctx.equal_dims(h.r, h.s) || ctx.entails(&h.phi) => {
                h.tube.apply(ctx, h.s)?
            }
            Value::Englue(e) if ctx.entails(&e.phi) => e.partial.force(ctx)?,
            Value::Cut(c) if ctx.entails(&c.phi) => c.partial.force(ctx)?,
            _ => return Ok(v),
        };
    }
}

/// Unfolds glue types whose cofibration is entailed.
pub fn whnf_ty(ctx: &Ctx, ty: &TyValue) -> Result<TyValue> {
    let mut ty = ty.clone();
    loop {
        ty = match &ty {
            TyValue::Glue(g) if ctx.entails(&g.phi) => g.partial_ty.force(ctx)?,
            _ => return Ok(ty),
        };
    }
}

/// Builds a stabilized neutral, or returns its partial value when the
/// instability already holds.
pub fn mk_cut(
    ctx: &Ctx,
    ty: TyValue,
    phi: Cofib,
    ne: Neutral,
    partial: Thunk<Value>,
) -> Result<Value> {
    if ctx.entails(&phi) {
        let v = partial.force(ctx)?;
        return whnf(ctx, &v);
    }
    Ok(Value::Cut(Arc::new(Cut {
        ty,
        ne,
        phi,
        partial,
    })))
}

fn head_mismatch(what: &str, v: &Value) -> Error {
    Error::Domain(format!("{what} applied to {}", describe(v)))
}

pub fn describe(v: &Value) -> &'static str {
    match v {
        Value::Lam(_) => "a lambda",
        Value::Pair(_) => "a pair",
        Value::PLam(_) => "a path abstraction",
        Value::Englue(_) => "a glue element",
        Value::Base => "base",
        Value::Loop(_) => "a loop",
        Value::FHCom(_) => "a composition cell",
        Value::Cut(_) => "a neutral",
    }
}

pub fn do_app(ctx: &Ctx, f: &Value, a: Value) -> Result<Value> {
    match whnf(ctx, f)? {
        Value::Lam(c) => c.apply(ctx, a),
        other => Err(head_mismatch("application", &other)),
    }
}

pub fn do_fst(ctx: &Ctx, p: &Value) -> Result<Value> {
    match whnf(ctx, p)? {
        Value::Pair(ab) => Ok(ab.0.clone()),
        other => Err(head_mismatch("first projection", &other)),
    }
}

pub fn do_snd(ctx: &Ctx, p: &Value) -> Result<Value> {
    match whnf(ctx, p)? {
        Value::Pair(ab) => Ok(ab.1.clone()),
        other => Err(head_mismatch("second projection", &other)),
    }
}

pub fn do_papp(ctx: &Ctx, p: &Value, r: Dim) -> Result<Value> {
    match whnf(ctx, p)? {
        Value::PLam(body) => body.apply(ctx, r),
        other => Err(head_mismatch("path application", &other)),
    }
}

/// `unglue` at the glue type `g`. Where `g.phi` holds the argument is an
/// element of the partial type and the equivalence is applied.
pub fn do_unglue(ctx: &Ctx, g: &GlueTy, v: &Value) -> Result<Value> {
    if ctx.entails(&g.phi) {
        let f = do_fst(ctx, &g.equiv.force(ctx)?)?;
        return do_app(ctx, &f, v.clone());
    }
    match whnf(ctx, v)? {
        Value::Englue(e) => Ok(e.total.clone()),
        other => Err(head_mismatch("unglue", &other)),
    }
}

/// Index of the first branch whose cofibration holds.
pub fn select_branch<'a, T>(ctx: &Ctx, branches: &'a [(Cofib, T)]) -> Result<&'a T> {
    branches
        .iter()
        .find(|(phi, _)| ctx.entails(phi))
        .map(|(_, t)| t)
        .ok_or(Error::SystemCoverage)
}

const DEBUG_UNSET: u8 = 0;
const DEBUG_OFF: u8 = 1;
const DEBUG_ON: u8 = 2;
static DEBUG_SYSTEMS: AtomicU8 = AtomicU8::new(DEBUG_UNSET);

/// Whether overlapping system branches are cross-checked during
/// evaluation. Defaults to the `CUBICAL_DEBUG_SYSTEMS` environment variable.
pub fn debug_systems() -> bool {
    match DEBUG_SYSTEMS.load(Ordering::Relaxed) {
        DEBUG_ON => true,
        DEBUG_OFF => false,
        _ => {
            let on = std::env::var("CUBICAL_DEBUG_SYSTEMS").is_ok_and(|v| v == "1");
            DEBUG_SYSTEMS.store(if on { DEBUG_ON } else { DEBUG_OFF }, Ordering::Relaxed);
            on
        }
    }
}

pub fn set_debug_systems(on: bool) {
    DEBUG_SYSTEMS.store(if on { DEBUG_ON } else { DEBUG_OFF }, Ordering::Relaxed);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_thunk() -> Thunk<Value> {
        Clo::constant(Value::Base)
    }

    #[test]
    fn cut_at_bottom_stays_neutral() {
        let ctx = Ctx::new().fresh().0;
        let v = mk_cut(&ctx, TyValue::S1, Cofib::bot(), Neutral::var(0), absurd()).unwrap();
        assert!(matches!(v, Value::Cut(_)));
    }

    #[test]
    fn cut_under_entailed_instability_is_forced() {
        let (ctx, i) = Ctx::new().fresh();
        let ctx = ctx.assume(&[(i, Dim::Zero)]).unwrap();
        let ne = Neutral::var(0).push(Frame::PApp(i));
        let v = mk_cut(&ctx, TyValue::S1, partial_boundary(i), ne, base_thunk()).unwrap();
        assert!(matches!(v, Value::Base));
        let top = mk_cut(
            &ctx,
            TyValue::S1,
            Cofib::top(),
            Neutral::var(0),
            base_thunk(),
        )
        .unwrap();
        assert!(matches!(top, Value::Base));
    }

    #[test]
    fn stale_values_are_discharged_by_whnf() {
        let (ctx, i) = Ctx::new().fresh();
        let lp = Value::Loop(i);
        assert!(matches!(whnf(&ctx, &lp).unwrap(), Value::Loop(_)));
        let at_one = ctx.assume(&[(i, Dim::One)]).unwrap();
        assert!(matches!(whnf(&at_one, &lp).unwrap(), Value::Base));
    }

    #[test]
    fn eliminators_on_introductions() {
        let ctx = Ctx::new();
        let id = Value::Lam(Clo::new(|_, x| Ok(x)));
        assert!(matches!(
            do_app(&ctx, &id, Value::Base).unwrap(),
            Value::Base
        ));
        let p = Value::Pair(Arc::new((Value::Base, Value::Loop(Dim::Zero))));
        assert!(matches!(do_fst(&ctx, &p).unwrap(), Value::Base));
        assert!(do_fst(&ctx, &Value::Base).is_err());
    }

    #[test]
    fn instability_recomputation() {
        let ne = Neutral::var(0)
            .push(Frame::PApp(Dim::Var(1)))
            .push(Frame::Fst);
        assert_eq!(ne.instability(), partial_boundary(Dim::Var(1)));
        assert_eq!(Neutral::var(0).instability(), Cofib::bot());
    }

    #[test]
    fn system_selection() {
        let (ctx, i) = Ctx::new().fresh();
        let ctx = ctx.assume(&[(i, Dim::Zero)]).unwrap();
        let sys = vec![(Cofib::eq(i, Dim::Zero), 1), (Cofib::eq(i, Dim::One), 2)];
        assert_eq!(*select_branch(&ctx, &sys).unwrap(), 1);
        let none: Vec<(Cofib, i32)> = vec![(Cofib::eq(i, Dim::One), 2)];
        assert_eq!(select_branch(&ctx, &none), Err(Error::SystemCoverage));
    }
}
