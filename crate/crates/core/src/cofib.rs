//! Decision procedures for cofibrations.
//!
//! A [`Congruence`] is a partition of the interval constants and the
//! dimension variables of a context (by de Bruijn level). Every class has a
//! canonical representative: constants win over variables and lower levels
//! win over higher ones.
//!
//! Cofibrations handled by the semantic side are over levels and never
//! contain `∀`: quantifiers are eliminated as soon as a syntactic cofibration
//! is resolved (see [`resolve`]). Since truth of a cofibration at a generic
//! point distributes over `∨`, `∀i.ψ` is the disjunction of those DNF clauses
//! of `ψ` in which `i` is not identified with anything else, with the trivial
//! `i = i` equations removed.

use crate::syntax::{Binding, Cofib, Context, Dim};

/// Union-find over `0`, `1` and dimension levels, kept fully compressed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Congruence {
    reps: Vec<Dim>,
    inconsistent: bool,
}

impl Congruence {
    pub fn new() -> Congruence {
        Congruence::default()
    }

    pub fn is_consistent(&self) -> bool {
        !self.inconsistent
    }

    pub fn find(&self, d: Dim) -> Dim {
        match d {
            Dim::Var(k) if k < self.reps.len() => self.reps[k],
            other => other,
        }
    }

    /// Identifies `a` and `b`. Returns `false` once the congruence has
    /// become inconsistent.
    pub fn merge(&mut self, a: Dim, b: Dim) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return !self.inconsistent;
        }
        let (new, old) = if ra < rb { (ra, rb) } else { (rb, ra) };
        let Dim::Var(old_level) = old else {
            self.inconsistent = true;
            return false;
        };
        if self.reps.len() <= old_level {
            let start = self.reps.len();
            self.reps.extend((start..=old_level).map(Dim::Var));
        }
        for rep in self.reps.iter_mut() {
            if *rep == old {
                *rep = new;
            }
        }
        !self.inconsistent
    }

    pub fn with_eqs(&self, eqs: &[(Dim, Dim)]) -> Congruence {
        let mut out = self.clone();
        for &(a, b) in eqs {
            out.merge(a, b);
        }
        out
    }

    /// Whether `a` and `b` are identified. Everything is identified in an
    /// inconsistent congruence.
    pub fn equal(&self, a: Dim, b: Dim) -> bool {
        self.inconsistent || self.find(a) == self.find(b)
    }

    /// The non-trivial `(member, representative)` pairs, ordered by member.
    pub fn pairs(&self) -> Vec<(Dim, Dim)> {
        self.reps
            .iter()
            .enumerate()
            .filter(|(k, rep)| **rep != Dim::Var(*k))
            .map(|(k, rep)| (Dim::Var(k), *rep))
            .collect()
    }

    /// Whether the class of `d` contains anything besides `d`.
    fn is_singleton(&self, d: Dim) -> bool {
        let rep = self.find(d);
        rep == d
            && self
                .reps
                .iter()
                .enumerate()
                .all(|(k, r)| *r != d || Dim::Var(k) == d)
    }

    /// Truth of a quantifier-free cofibration at the generic point described
    /// by this congruence.
    pub fn holds(&self, phi: &Cofib) -> bool {
        match phi {
            Cofib::Eq(r, s) => self.equal(*r, *s),
            Cofib::And(a, b) => self.holds(a) && self.holds(b),
            Cofib::Or(a, b) => self.holds(a) || self.holds(b),
            Cofib::Forall(_) => panic!("quantifier in a resolved cofibration"),
        }
    }

    /// Whether every consistent branch of `hyp` satisfies `goal`.
    pub fn entails(&self, hyp: &Cofib, goal: &Cofib) -> bool {
        dnf(hyp).iter().all(|clause| {
            let branch = self.with_eqs(clause);
            !branch.is_consistent() || branch.holds(goal)
        })
    }

    /// The consistent strengthenings of this congruence by the clauses of
    /// `phi`, in canonical clause order.
    pub fn restrict(&self, phi: &Cofib) -> Vec<Congruence> {
        canonical_clauses(self, phi)
            .into_iter()
            .map(|clause| self.with_eqs(&clause))
            .collect()
    }
}

/// A conjunction of dimension equations.
pub type Clause = Vec<(Dim, Dim)>;

/// Disjunctive normal form of a quantifier-free cofibration.
pub fn dnf(phi: &Cofib) -> Vec<Clause> {
    match phi {
        Cofib::Eq(r, s) => vec![vec![(*r, *s)]],
        Cofib::Or(a, b) => {
            let mut out = dnf(a);
            out.extend(dnf(b));
            out
        }
        Cofib::And(a, b) => product(&dnf(a), &dnf(b)),
        Cofib::Forall(_) => panic!("quantifier in a resolved cofibration"),
    }
}

/// Rebuilds a cofibration from clauses: `0 = 1` for no clauses, `1 = 1` for
/// an empty clause.
pub fn from_clauses(clauses: &[Clause]) -> Cofib {
    Cofib::any(
        clauses
            .iter()
            .map(|c| Cofib::all(c.iter().map(|&(a, b)| Cofib::Eq(a, b)))),
    )
}

/// Eliminates `∀v` from a quantifier-free body.
pub fn eliminate_forall(v: Dim, body: &Cofib) -> Cofib {
    let kept: Vec<Clause> = dnf(body)
        .into_iter()
        .filter_map(|clause| drop_bound(v, clause))
        .collect();
    from_clauses(&kept)
}

/// Resolves a syntactic cofibration into a quantifier-free one over levels.
///
/// `lookup` interprets free indices; bound variables of `∀` are given the
/// levels `fresh`, `fresh + 1`, ... which must not occur in the image of
/// `lookup`.
pub fn resolve(phi: &Cofib, fresh: usize, lookup: &dyn Fn(usize) -> Dim) -> Cofib {
    if !phi.contains_forall() {
        return resolve_free(phi, lookup);
    }
    from_clauses(&resolve_dnf(phi, fresh, lookup))
}

fn resolve_free(phi: &Cofib, lookup: &dyn Fn(usize) -> Dim) -> Cofib {
    phi.map_dims(0, &mut |d, _| match d {
        Dim::Var(i) => lookup(i),
        c => c,
    })
}

/// Like [`resolve`], producing clauses directly.
pub fn resolve_dnf(phi: &Cofib, fresh: usize, lookup: &dyn Fn(usize) -> Dim) -> Vec<Clause> {
    resolve_at(phi, fresh, 0, lookup)
}

fn resolve_at(
    phi: &Cofib,
    fresh: usize,
    depth: usize,
    lookup: &dyn Fn(usize) -> Dim,
) -> Vec<Clause> {
    let dim = |d: Dim| match d {
        Dim::Var(i) if i < depth => Dim::Var(fresh + depth - 1 - i),
        Dim::Var(i) => lookup(i - depth),
        c => c,
    };
    match phi {
        Cofib::Eq(r, s) => vec![vec![(dim(*r), dim(*s))]],
        Cofib::Or(a, b) => {
            let mut out = resolve_at(a, fresh, depth, lookup);
            out.extend(resolve_at(b, fresh, depth, lookup));
            out
        }
        Cofib::And(a, b) => {
            let left = resolve_at(a, fresh, depth, lookup);
            let right = resolve_at(b, fresh, depth, lookup);
            product(&left, &right)
        }
        Cofib::Forall(body) => {
            let v = Dim::Var(fresh + depth);
            resolve_at(body, fresh, depth + 1, lookup)
                .into_iter()
                .filter_map(|clause| drop_bound(v, clause))
                .collect()
        }
    }
}

fn product(left: &[Clause], right: &[Clause]) -> Vec<Clause> {
    let mut out = Vec::with_capacity(left.len() * right.len());
    for l in left {
        for r in right {
            let mut c = l.clone();
            c.extend(r.iter().copied());
            out.push(c);
        }
    }
    out
}

/// The clause with `∀v` applied: `None` when `v` is identified with
/// anything else (or the clause is contradictory), otherwise the clause
/// without its trivial `v = v` equations.
fn drop_bound(v: Dim, clause: Clause) -> Option<Clause> {
    let local = Congruence::new().with_eqs(&clause);
    if !local.is_consistent() || !local.is_singleton(v) {
        return None;
    }
    Some(
        clause
            .into_iter()
            .filter(|&(a, b)| a != v && b != v)
            .collect(),
    )
}

/// Irredundant DNF of `phi` relative to `base`: dimensions are replaced by
/// their representatives, each clause is closed under congruence and listed
/// as `(member, representative)` pairs, inconsistent and subsumed clauses are
/// dropped, and the clauses are sorted. Equivalent cofibrations get equal
/// clause lists.
pub fn canonical_clauses(base: &Congruence, phi: &Cofib) -> Vec<Clause> {
    if !base.is_consistent() {
        return vec![Vec::new()];
    }
    let mut closed: Vec<(Clause, Congruence)> = Vec::new();
    for clause in dnf(phi) {
        let local = Congruence::new().with_eqs(
            &clause
                .iter()
                .map(|&(a, b)| (base.find(a), base.find(b)))
                .collect::<Vec<_>>(),
        );
        if local.is_consistent() {
            closed.push((local.pairs(), local));
        }
    }
    closed.sort_by(|a, b| a.0.cmp(&b.0));
    closed.dedup_by(|a, b| a.0 == b.0);
    let keep: Vec<Clause> = closed
        .iter()
        .enumerate()
        .filter(|(i, (_, c))| {
            !closed
                .iter()
                .enumerate()
                .any(|(j, (d, _))| *i != j && d.iter().all(|&(a, b)| c.equal(a, b)))
        })
        .map(|(_, (clause, _))| clause.clone())
        .collect();
    keep
}

/// Canonical representative of `phi` relative to `base`.
pub fn canonical(base: &Congruence, phi: &Cofib) -> Cofib {
    from_clauses(&canonical_clauses(base, phi))
}

fn context_lookup(ctx: &Context) -> impl Fn(usize) -> Dim + '_ {
    move |i| Dim::Var(ctx.level_of(i))
}

fn context_resolve(ctx: &Context, phi: &Cofib) -> Cofib {
    resolve(phi, ctx.len(), &context_lookup(ctx))
}

/// One disjunct of a DNF: the context congruence strengthened by a clause.
/// Inconsistent branches are kept and flagged.
pub type Branch = Congruence;

/// DNF of a syntactic cofibration in `ctx`, quantifiers eliminated.
pub fn to_dnf(ctx: &Context, phi: &Cofib) -> Vec<Branch> {
    resolve_dnf(phi, ctx.len(), &context_lookup(ctx))
        .into_iter()
        .map(|clause| ctx.congruence().with_eqs(&clause))
        .collect()
}

/// `ctx, hyp ⊨ goal` for syntactic cofibrations.
pub fn entails(ctx: &Context, hyp: &Cofib, goal: &Cofib) -> bool {
    let goal = context_resolve(ctx, goal);
    to_dnf(ctx, hyp)
        .iter()
        .all(|b| !b.is_consistent() || b.holds(&goal))
}

/// Substitution produced by left inversion: `(index, replacement)` pairs in
/// the index space of the context.
pub type InversionSubst = Vec<(usize, Dim)>;

/// Left inversion of a hypothesis: one result per consistent disjunct.
/// Each substitution sends every dimension variable to the representative of
/// its class.
pub fn left_invert(ctx: &Context, phi: &Cofib) -> Vec<(InversionSubst, Context)> {
    let n = ctx.len();
    let to_index = |d: Dim| match d {
        Dim::Var(l) => Dim::Var(n - 1 - l),
        c => c,
    };
    to_dnf(ctx, phi)
        .into_iter()
        .filter(|b| b.is_consistent())
        .map(|branch| {
            let subst = (0..n)
                .filter(|&l| matches!(ctx.bindings()[l], Binding::Dim))
                .filter_map(|l| {
                    let rep = branch.find(Dim::Var(l));
                    (rep != Dim::Var(l)).then(|| (n - 1 - l, to_index(rep)))
                })
                .collect();
            (subst, ctx.clone().with_congruence(branch))
        })
        .collect()
}
