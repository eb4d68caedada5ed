//! Random generation of well-typed contexts, types and terms, for property
//! tests and benchmarks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::builtins::id_equiv;
use crate::check::{equal_tm, equal_ty};
use crate::cofib;
use crate::syntax::{instantiate_dim, Binding, Cofib, Context, Dim, Term, TypeExpr};

/// Which constructs the generator may use.
#[derive(Clone, Copy, Debug)]
pub struct Config {
    /// Dimension binders, paths, loops and Kan operations.
    pub cubical: bool,
    pub glue: bool,
    /// `base`, `loop` and circle induction; without it the circle is an
    /// opaque type inhabited only by variables.
    pub circle_intro: bool,
    /// β-redexes.
    pub redexes: bool,
}

impl Config {
    pub fn full() -> Config {
        Config {
            cubical: true,
            glue: true,
            circle_intro: true,
            redexes: true,
        }
    }

    /// Π, Σ and variables of circle type only.
    pub fn ordinary() -> Config {
        Config {
            cubical: false,
            glue: false,
            circle_intro: false,
            redexes: true,
        }
    }
}

/// A Kan operation whose boundary condition holds in its context, together
/// with the term it must reduce to.
#[derive(Clone, Debug)]
pub struct KanInstance {
    pub ctx: Context,
    pub ty: TypeExpr,
    pub term: Term,
    pub expected: Term,
}

pub struct Gen {
    rng: ChaCha8Rng,
    pub config: Config,
}

#[derive(Clone, Copy)]
enum Shape {
    Var,
    Redex,
    Intro,
    HCom,
    Coe,
    Ind,
}

impl Gen {
    pub fn new(seed: u64, config: Config) -> Gen {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            config,
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn dims(ctx: &Context) -> Vec<usize> {
        (0..ctx.len())
            .filter(|&i| matches!(ctx.lookup(i), Some(Binding::Dim)))
            .collect()
    }

    fn vars(ctx: &Context) -> Vec<(usize, TypeExpr)> {
        (0..ctx.len())
            .filter_map(|i| match ctx.lookup(i) {
                Some(Binding::Term(ty)) => Some((i, ty.shift(i + 1))),
                _ => None,
            })
            .collect()
    }

    pub fn dim(&mut self, ctx: &Context) -> Dim {
        let dims = Gen::dims(ctx);
        let k = self.rng.gen_range(0..dims.len() + 2);
        match k {
            0 => Dim::Zero,
            1 => Dim::One,
            _ => Dim::Var(dims[k - 2]),
        }
    }

    /// A dimension that is a variable whenever the context has one.
    fn var_dim(&mut self, ctx: &Context) -> Dim {
        match Gen::dims(ctx).choose(&mut self.rng) {
            Some(&i) if self.rng.gen_bool(0.8) => Dim::Var(i),
            _ => self.dim(ctx),
        }
    }

    pub fn cofib(&mut self, ctx: &Context, depth: usize) -> Cofib {
        let leaf = depth == 0 || self.rng.gen_bool(0.5);
        if leaf {
            let r = self.var_dim(ctx);
            let s = self.dim(ctx);
            return Cofib::eq(r, s);
        }
        match self.rng.gen_range(0..2) {
            0 => Cofib::and(self.cofib(ctx, depth - 1), self.cofib(ctx, depth - 1)),
            _ => Cofib::or(self.cofib(ctx, depth - 1), self.cofib(ctx, depth - 1)),
        }
    }

    /// A context with the given number of dimensions and term variables in
    /// random order, possibly with some dimensions identified.
    pub fn context(&mut self, dims: usize, vars: usize, depth: usize) -> Context {
        let mut kinds: Vec<bool> = std::iter::repeat_n(true, dims)
            .chain(std::iter::repeat_n(false, vars))
            .collect();
        kinds.shuffle(&mut self.rng);
        let mut ctx = Context::new();
        for is_dim in kinds {
            ctx = if is_dim {
                ctx.push_dim()
            } else {
                let ty = self.var_ty(&ctx, depth);
                ctx.push_term(ty)
            };
        }
        ctx
    }

    /// Identifies dimensions of `ctx` by a random consistent clause.
    pub fn restrict(&mut self, ctx: Context) -> Context {
        let phi = self.cofib(&ctx, 1);
        let branches: Vec<_> = cofib::to_dnf(&ctx, &phi)
            .into_iter()
            .filter(|b| b.is_consistent())
            .collect();
        match branches.choose(&mut self.rng) {
            Some(b) => ctx.with_congruence(b.clone()),
            None => ctx,
        }
    }

    /// A type for a context variable: like [`Gen::ty`], but path types may
    /// have unrelated endpoints.
    pub fn var_ty(&mut self, ctx: &Context, depth: usize) -> TypeExpr {
        if self.config.cubical && depth > 0 && self.rng.gen_bool(0.25) {
            let a = self.ty(ctx, depth - 1);
            let e0 = self.term_or_var(ctx, &a, depth - 1);
            let e1 = self.term_or_var(ctx, &a, depth - 1);
            if let (Some(e0), Some(e1)) = (e0, e1) {
                return TypeExpr::const_path(a, e0, e1);
            }
        }
        self.ty(ctx, depth)
    }

    fn term_or_var(&mut self, ctx: &Context, ty: &TypeExpr, depth: usize) -> Option<Term> {
        (0..4).find_map(|_| self.term(ctx, ty, depth))
    }

    /// A type all of whose generated path types are inhabited by reflexivity.
    pub fn ty(&mut self, ctx: &Context, depth: usize) -> TypeExpr {
        let mut formers = vec![0, 1, 2];
        if self.config.cubical {
            formers.push(3);
        }
        if self.config.glue {
            formers.push(4);
        }
        if depth == 0 {
            return TypeExpr::S1;
        }
        match *formers.choose(&mut self.rng).expect("nonempty") {
            0 => TypeExpr::S1,
            1 | 2 => {
                let dom = self.ty(ctx, depth - 1);
                let inner = ctx.clone().push_term(dom.clone());
                let cod = if self.config.cubical && self.rng.gen_bool(0.3) && dom == TypeExpr::S1 {
                    TypeExpr::const_path(TypeExpr::S1, Term::Var(0), Term::Var(0))
                } else {
                    self.ty(&inner, depth - 1)
                };
                if self.rng.gen_bool(0.5) {
                    TypeExpr::pi(dom, cod)
                } else {
                    TypeExpr::sigma(dom, cod)
                }
            }
            3 => {
                let a = self.ty(ctx, depth - 1);
                match self.term_or_var(ctx, &a, depth - 1) {
                    Some(e) => TypeExpr::const_path(a, e.clone(), e),
                    None => a,
                }
            }
            _ => {
                let b = self.ty(ctx, depth - 1);
                let phi = self.cofib(ctx, 1);
                TypeExpr::glue(phi, b.clone(), b.clone(), id_equiv(&b))
            }
        }
    }

    /// Unfolds type systems and glue types whose cofibration holds.
    fn resolve(ctx: &Context, ty: &TypeExpr) -> TypeExpr {
        match ty {
            TypeExpr::System(bs) => bs
                .iter()
                .find(|(phi, _)| cofib::entails(ctx, &Cofib::top(), phi))
                .map(|(_, a)| Gen::resolve(ctx, a))
                .unwrap_or_else(|| ty.clone()),
            TypeExpr::Glue {
                phi, partial_ty, ..
            } if cofib::entails(ctx, &Cofib::top(), phi) => Gen::resolve(ctx, partial_ty),
            _ => ty.clone(),
        }
    }

    fn same_ty(ctx: &Context, a: &TypeExpr, b: &TypeExpr) -> bool {
        a == b || equal_ty(ctx, a, b).unwrap_or(false)
    }

    /// A term of type `ty`, or `None` when the generator found no
    /// inhabitant (only possible for path types with distinct endpoints).
    pub fn term(&mut self, ctx: &Context, ty: &TypeExpr, depth: usize) -> Option<Term> {
        let ty = Gen::resolve(ctx, ty);
        let mut shapes = vec![Shape::Var, Shape::Intro];
        if depth > 0 {
            if self.config.redexes {
                shapes.push(Shape::Redex);
            }
            if self.config.cubical {
                shapes.push(Shape::HCom);
                shapes.push(Shape::Coe);
            }
            if self.config.circle_intro {
                shapes.push(Shape::Ind);
            }
        }
        shapes.shuffle(&mut self.rng);
        let shape = shapes[0];
        let first = self.term_shape(ctx, &ty, depth, shape);
        if first.is_some() {
            return first;
        }
        self.term_shape(ctx, &ty, depth, Shape::Intro)
            .or_else(|| self.term_shape(ctx, &ty, depth, Shape::Var))
    }

    fn term_shape(
        &mut self,
        ctx: &Context,
        ty: &TypeExpr,
        depth: usize,
        shape: Shape,
    ) -> Option<Term> {
        let d = depth.saturating_sub(1);
        // Kan operations at types containing glue multiply the cost of every nested
        // Kan operation, so their subterms stay shallow.
        let kan_d = if has_glue(ty) { d.min(1) } else { d };
        match shape {
            Shape::Var => self.neutral(ctx, ty, d),
            Shape::Intro => self.intro(ctx, ty, depth),
            Shape::Redex => {
                if self.rng.gen_bool(0.5) {
                    let dom = self.ty(ctx, 1);
                    let arg = self.term(ctx, &dom, d)?;
                    let inner = ctx.clone().push_term(dom);
                    let body = self.term(&inner, &ty.shift(1), d)?;
                    Some(Term::app(Term::lam(body), arg))
                } else {
                    let other = self.ty(ctx, 1);
                    let a = self.term(ctx, ty, d)?;
                    let b = self.term(ctx, &other, d)?;
                    Some(Term::fst(Term::pair(a, b)))
                }
            }
            Shape::HCom => {
                let r = self.dim(ctx);
                let s = self.dim(ctx);
                let phi = self.cofib(ctx, 1);
                let inner = ctx.clone().push_dim();
                let body = self.term(&inner, &ty.shift(1), kan_d)?;
                let domain = Cofib::or(Cofib::eq(Dim::Var(0), shift_dim(r)), shift_cof(&phi));
                Some(Term::hcom(
                    ty.clone(),
                    r,
                    s,
                    phi,
                    Term::System(vec![(domain, body)]),
                ))
            }
            Shape::Coe => {
                let r = self.dim(ctx);
                let s = self.dim(ctx);
                let a = self.term(ctx, ty, kan_d)?;
                Some(Term::coe(ty.shift(1), r, s, a))
            }
            Shape::Ind => {
                let scrut = self.term(ctx, &TypeExpr::S1, kan_d)?;
                let base = self.term(ctx, ty, kan_d)?;
                let motive = ty.shift(1);
                let loop_case =
                    if *ty == TypeExpr::S1 && base == Term::Base && self.rng.gen_bool(0.7) {
                        Term::Loop(Dim::Var(0))
                    } else {
                        base.shift(1)
                    };
                Some(Term::ind_s1(motive, base, loop_case, scrut))
            }
        }
    }

    fn intro(&mut self, ctx: &Context, ty: &TypeExpr, depth: usize) -> Option<Term> {
        let d = depth.saturating_sub(1);
        match ty {
            TypeExpr::S1 => {
                if !self.config.circle_intro {
                    return self.neutral(ctx, ty, d);
                }
                if self.config.cubical && self.rng.gen_bool(0.5) {
                    Some(Term::Loop(self.var_dim(ctx)))
                } else {
                    Some(Term::Base)
                }
            }
            TypeExpr::Pi { dom, cod } => {
                let inner = ctx.clone().push_term((**dom).clone());
                Some(Term::lam(self.term(&inner, cod, d)?))
            }
            TypeExpr::Sigma { dom, cod } => {
                let a = self.term(ctx, dom, d)?;
                let b = self.term(ctx, &cod.instantiate(&a), d)?;
                Some(Term::pair(a, b))
            }
            TypeExpr::Path { line, ep0, ep1 } => {
                let line: &TypeExpr = line;
                let constant = *line == instantiate_dim(line, Dim::Zero).shift(1);
                if !constant || !Gen::same_tm(ctx, &instantiate_dim(line, Dim::Zero), ep0, ep1) {
                    return self.neutral(ctx, ty, d);
                }
                let base = instantiate_dim(line, Dim::Zero);
                let e = ep0.shift(1);
                let body = if base == TypeExpr::S1
                    && Gen::same_tm(ctx, &base, ep0, &Term::Base)
                    && self.rng.gen_bool(0.5)
                {
                    Term::Loop(Dim::Var(0))
                } else if self.rng.gen_bool(0.5) {
                    // A composite whose tube is constant on the boundary.
                    let tube = Term::System(vec![(
                        Cofib::or(
                            Cofib::eq(Dim::Var(0), Dim::Zero),
                            Cofib::or(
                                Cofib::eq(Dim::Var(1), Dim::Zero),
                                Cofib::eq(Dim::Var(1), Dim::One),
                            ),
                        ),
                        ep0.shift(2),
                    )]);
                    Term::hcom(
                        base.shift(1),
                        Dim::Zero,
                        Dim::One,
                        crate::syntax::partial_boundary(Dim::Var(0)),
                        tube,
                    )
                } else {
                    e
                };
                Some(Term::plam(body))
            }
            TypeExpr::Glue {
                phi,
                base,
                partial_ty,
                equiv,
            } if **partial_ty == **base && **equiv == id_equiv(base) => {
                let b = self.term(ctx, base, d)?;
                Some(Term::englue(phi.clone(), b.clone(), b))
            }
            _ => self.neutral(ctx, ty, d),
        }
    }

    fn same_tm(ctx: &Context, ty: &TypeExpr, a: &Term, b: &Term) -> bool {
        a == b || equal_tm(ctx, ty, a, b).unwrap_or(false)
    }

    /// A variable followed by up to three eliminations, whose type is `ty`.
    fn neutral(&mut self, ctx: &Context, ty: &TypeExpr, depth: usize) -> Option<Term> {
        let mut vars = Gen::vars(ctx);
        vars.shuffle(&mut self.rng);
        for (i, var_ty) in vars {
            let mut t = Term::Var(i);
            let mut t_ty = var_ty;
            for _ in 0..4 {
                if Gen::same_ty(ctx, &t_ty, ty) {
                    return Some(t);
                }
                match self.eliminate(ctx, &t, &t_ty, depth) {
                    Some((u, u_ty)) => {
                        t = u;
                        t_ty = u_ty;
                    }
                    None => break,
                }
            }
        }
        None
    }

    fn eliminate(
        &mut self,
        ctx: &Context,
        t: &Term,
        ty: &TypeExpr,
        depth: usize,
    ) -> Option<(Term, TypeExpr)> {
        match Gen::resolve(ctx, ty) {
            TypeExpr::Pi { dom, cod } => {
                if depth == 0 {
                    return None;
                }
                let a = self.term(ctx, &dom, depth.min(2) - 1)?;
                Some((Term::app(t.clone(), a.clone()), cod.instantiate(&a)))
            }
            TypeExpr::Sigma { dom, cod } => {
                if self.rng.gen_bool(0.5) {
                    Some((Term::fst(t.clone()), (*dom).clone()))
                } else {
                    let fst = Term::fst(t.clone());
                    Some((Term::snd(t.clone()), cod.instantiate(&fst)))
                }
            }
            TypeExpr::Path { line, .. } => {
                let r = self.var_dim(ctx);
                Some((Term::papp(t.clone(), r), instantiate_dim(&line, r)))
            }
            glue @ TypeExpr::Glue { .. } => {
                let TypeExpr::Glue { base, .. } = &glue else {
                    unreachable!()
                };
                let base = (**base).clone();
                Some((Term::unglue(glue, t.clone()), base))
            }
            _ => None,
        }
    }

    /// A Kan operation whose boundary holds: `hcom` with `r = s ∨ φ`
    /// entailed or `coe` with `r = s` entailed, over a random line.
    pub fn kan_instance(&mut self, max_dims: usize, depth: usize) -> KanInstance {
        loop {
            let dims = self.rng.gen_range(1..=max_dims);
            let vars = self.rng.gen_range(0..=2);
            let mut ctx = self.context(dims, vars, 1);
            if self.rng.gen_bool(0.5) {
                ctx = self.restrict(ctx);
            }
            if let Some(inst) = self.try_kan(&ctx, depth) {
                return inst;
            }
        }
    }

    fn entailed_pair(&mut self, ctx: &Context) -> (Dim, Dim) {
        let r = self.dim(ctx);
        for _ in 0..8 {
            let s = self.dim(ctx);
            if cofib::entails(ctx, &Cofib::top(), &Cofib::eq(r, s)) {
                return (r, s);
            }
        }
        (r, r)
    }

    fn try_kan(&mut self, ctx: &Context, depth: usize) -> Option<KanInstance> {
        if self.rng.gen_bool(0.5) {
            // hcom
            let ty = self.ty(ctx, depth);
            let (r, s, phi) = loop {
                let r = self.dim(ctx);
                let s = self.dim(ctx);
                let phi = if self.rng.gen_bool(0.3) {
                    let (a, b) = self.entailed_pair(ctx);
                    Cofib::or(Cofib::eq(a, b), self.cofib(ctx, 1))
                } else {
                    self.cofib(ctx, 2)
                };
                let boundary = Cofib::or(Cofib::eq(r, s), phi.clone());
                if cofib::entails(ctx, &Cofib::top(), &boundary) {
                    break (r, s, phi);
                }
            };
            let inner = ctx.clone().push_dim();
            let body = self.term(&inner, &ty.shift(1), depth)?;
            let domain = Cofib::or(Cofib::eq(Dim::Var(0), shift_dim(r)), shift_cof(&phi));
            let term = Term::hcom(
                ty.clone(),
                r,
                s,
                phi,
                Term::System(vec![(domain, body.clone())]),
            );
            let expected = crate::syntax::instantiate_dim(&body, s);
            Some(KanInstance {
                ctx: ctx.clone(),
                ty,
                term,
                expected,
            })
        } else {
            let inner = ctx.clone().push_dim();
            let line = self.line(&inner, depth);
            let (r, s) = self.entailed_pair(ctx);
            let src = instantiate_dim(&line, r);
            let arg = self.term(ctx, &src, depth)?;
            Some(KanInstance {
                ctx: ctx.clone(),
                ty: instantiate_dim(&line, s),
                term: Term::coe(line, r, s, arg.clone()),
                expected: arg,
            })
        }
    }

    /// A type in a context whose last entry is the line's dimension, biased
    /// towards mentioning that dimension.
    fn line(&mut self, ctx: &Context, depth: usize) -> TypeExpr {
        match self.rng.gen_range(0..4) {
            0 if self.config.glue => {
                let b = self.ty(ctx, depth.saturating_sub(1));
                let phi = Cofib::or(Cofib::eq(Dim::Var(0), self.dim(ctx)), self.cofib(ctx, 1));
                TypeExpr::glue(phi, b.clone(), b.clone(), id_equiv(&b))
            }
            1 => TypeExpr::const_path(
                TypeExpr::S1,
                Term::Loop(Dim::Var(0)),
                Term::Loop(Dim::Var(0)),
            ),
            _ => self.ty(ctx, depth),
        }
    }
}

fn has_glue(ty: &TypeExpr) -> bool {
    match ty {
        TypeExpr::Glue { .. } => true,
        TypeExpr::Path { line, .. } => has_glue(line),
        TypeExpr::Pi { dom, cod } | TypeExpr::Sigma { dom, cod } => has_glue(dom) || has_glue(cod),
        TypeExpr::System(bs) => bs.iter().any(|(_, a)| has_glue(a)),
        TypeExpr::S1 | TypeExpr::Abort => false,
    }
}

fn shift_dim(r: Dim) -> Dim {
    match r {
        Dim::Var(k) => Dim::Var(k + 1),
        c => c,
    }
}

fn shift_cof(phi: &Cofib) -> Cofib {
    phi.map_dims(0, &mut |d, bound| match d {
        Dim::Var(k) if k >= bound => Dim::Var(k + 1),
        c => c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nbe::nbe_tm;

    #[test]
    fn generated_terms_normalize() {
        let mut g = Gen::new(7, Config::full());
        let mut produced = 0;
        for _ in 0..40 {
            let ctx = g.context(2, 2, 2);
            let ty = g.ty(&ctx, 3);
            if let Some(t) = g.term(&ctx, &ty, 3) {
                crate::syntax::scope_check_ty(&ctx, &ty).unwrap();
                if let Err(e) = crate::syntax::scope_check(&ctx, &t) {
                    panic!(
                        "{e}: {:?}\nTERM {}",
                        ctx.bindings()
                            .iter()
                            .map(|b| matches!(b, Binding::Dim))
                            .collect::<Vec<_>>(),
                        t
                    );
                }
                nbe_tm(&ctx, &ty, &t).unwrap();
                produced += 1;
            }
        }
        assert!(produced > 30);
    }

    #[test]
    fn kan_instances_normalize() {
        let mut g = Gen::new(11, Config::full());
        for _ in 0..20 {
            let k = g.kan_instance(3, 2);
            nbe_tm(&k.ctx, &k.ty, &k.term).unwrap();
        }
    }
}
