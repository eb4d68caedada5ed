//! A checked sequence of declarations, with queries against it.
//!
//! An `assume` splits the session into one scope per branch of the
//! assumed cofibration; later declarations are checked in every branch.

use std::collections::HashSet;
use std::sync::Arc;

use cubical_core::check::{convert, convert_ty, CheckError, Def, Scope};
use cubical_core::domain::TyValue;
use cubical_core::nbe::{reify, reify_ty};
use cubical_core::normal::{Embed, Nf};
use cubical_core::surface::{Names, SCofib, SDim, Span};
use cubical_core::Error;

use crate::parse::{self, line_col, Decl, ParseError};
use crate::print;

#[derive(Debug, thiserror::Error)]
pub enum SessionError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("{line}:{column}: {error}")]
    Check {
        line: usize,
        column: usize,
        error: Error,
    },
    #[error("unknown definition `{0}`")]
    Unknown(String),
    #[error(transparent)]
    Eval(#[from] Error),
}

impl SessionError {
    fn at(src: &str, span: Span, error: Error) -> SessionError {
        let (line, column) = line_col(src, span.start);
        SessionError::Check {
            line,
            column,
            error,
        }
    }

    fn check(src: &str, e: CheckError) -> SessionError {
        SessionError::at(src, e.span, e.error)
    }

    /// Process exit code for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            SessionError::Parse(_) => 3,
            _ => 2,
        }
    }
}

type SResult<T> = Result<T, SessionError>;

/// Output format of normal forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Emit {
    /// The normal-form serialization.
    Nf,
    /// Surface syntax that parses and checks again.
    Surface,
}

#[derive(Clone, Debug)]
pub struct Session {
    branches: Vec<Scope>,
    declared: HashSet<String>,
}

impl Default for Session {
    fn default() -> Session {
        Session::new()
    }
}

impl Session {
    pub fn new() -> Session {
        Session {
            branches: vec![Scope::new()],
            declared: HashSet::new(),
        }
    }

    pub fn branches(&self) -> &[Scope] {
        &self.branches
    }

    /// Parses and checks a whole file.
    pub fn load(&mut self, src: &str) -> SResult<()> {
        for d in parse::parse_file(src)? {
            self.declare(src, &d)?;
        }
        Ok(())
    }

    fn fresh_name(&mut self, src: &str, name: &str, span: Span) -> SResult<()> {
        if !self.declared.insert(name.to_string()) {
            return Err(SessionError::at(
                src,
                span,
                Error::Type(format!("`{name}` is already declared")),
            ));
        }
        Ok(())
    }

    pub fn declare(&mut self, src: &str, d: &Decl) -> SResult<()> {
        let mut next = Vec::new();
        match d {
            Decl::Def {
                name,
                span,
                ty,
                body,
            } => {
                self.fresh_name(src, name, *span)?;
                for sc in &self.branches {
                    let (sc, _) = sc
                        .define(name, ty.as_ref(), body)
                        .map_err(|e| SessionError::check(src, e))?;
                    next.push(sc);
                }
            }
            Decl::Var { name, span, ty } => {
                self.fresh_name(src, name, *span)?;
                for sc in &self.branches {
                    next.push(
                        sc.declare_var(name, ty)
                            .map_err(|e| SessionError::check(src, e))?,
                    );
                }
            }
            Decl::Dim { names, span } => {
                for n in names {
                    self.fresh_name(src, n, *span)?;
                }
                for sc in &self.branches {
                    next.push(names.iter().fold(sc.clone(), |sc, n| sc.declare_dim(n)));
                }
            }
            Decl::Assume { phi, span } => {
                for sc in &self.branches {
                    next.extend(
                        sc.assume(phi, *span)
                            .map_err(|e| SessionError::check(src, e))?,
                    );
                }
                if next.is_empty() {
                    return Err(SessionError::at(
                        src,
                        *span,
                        Error::Coverage("the assumption is unsatisfiable".into()),
                    ));
                }
            }
        }
        self.branches = next;
        Ok(())
    }

    fn def(sc: &Scope, name: &str) -> SResult<Arc<Def>> {
        sc.lookup_def(name)
            .ok_or_else(|| SessionError::Unknown(name.to_string()))
    }

    /// Normal forms of a definition, one per branch, labelled by the
    /// branch's equations.
    pub fn normalize(&self, name: &str, emit: Emit) -> SResult<Vec<(String, String)>> {
        self.branches
            .iter()
            .map(|sc| {
                let def = Session::def(sc, name)?;
                let nf = def_nf(sc, &def)?;
                Ok((sc.show_branch(), render(sc, &nf, emit)))
            })
            .collect()
    }

    /// Judgmental equality of two definitions in every branch. Definitions
    /// at different types are distinct.
    pub fn equal(&self, a: &str, b: &str) -> SResult<bool> {
        for sc in &self.branches {
            let (da, db) = (Session::def(sc, a)?, Session::def(sc, b)?);
            let run = || -> cubical_core::Result<bool> {
                if !convert_ty(sc.ctx(), &da.ty, &db.ty)? {
                    return Ok(false);
                }
                let va = sc.eval(&sc.def_term(&da))?;
                let vb = sc.eval(&sc.def_term(&db))?;
                convert(sc.ctx(), &da.ty, &va, &vb)
            };
            if !run()? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Infers the type of an expression, returning it with the normal form,
    /// per branch.
    pub fn infer(&self, src: &str, emit: Emit) -> SResult<Vec<(String, String, String)>> {
        let e = parse::parse_expr(src)?;
        self.branches
            .iter()
            .map(|sc| {
                let (t, ty) = sc.infer(&e).map_err(|err| SessionError::check(src, err))?;
                let run = || -> cubical_core::Result<(Nf, String)> {
                    let nf = reify(sc.ctx(), &ty, &sc.eval(&t)?)?;
                    Ok((nf, render_ty(sc, &ty, emit)?))
                };
                let (nf, ty) = run().map_err(|err| SessionError::at(src, e.span, err))?;
                Ok((sc.show_branch(), ty, render(sc, &nf, emit)))
            })
            .collect()
    }

    /// Whether `hyp` entails `goal` in every branch. Dimension names that
    /// are not in scope are bound as fresh dimensions.
    pub fn entails(&self, hyp: &SCofib, goal: &SCofib) -> SResult<bool> {
        for sc in &self.branches {
            let mut sc = sc.clone();
            let mut free = Vec::new();
            for phi in [hyp, goal] {
                free_dims(phi, &mut Vec::new(), &mut free);
            }
            for n in free {
                if sc.check_dim(&SDim::Name(n.clone())).is_err() {
                    sc = sc.declare_dim(&n);
                }
            }
            let (_, h) = sc.cofib(hyp)?;
            let (_, g) = sc.cofib(goal)?;
            if !sc.ctx().congruence().entails(&h, &g) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn def_nf(sc: &Scope, def: &Def) -> cubical_core::Result<Nf> {
    let v = sc.eval(&sc.def_term(def))?;
    reify(sc.ctx(), &def.ty, &v)
}

fn render(sc: &Scope, nf: &Nf, emit: Emit) -> String {
    match emit {
        Emit::Nf => nf.to_string(),
        Emit::Surface => print::term(&Names::new(sc.entry_names()).term(&Embed::nf(sc.size(), nf))),
    }
}

fn render_ty(sc: &Scope, ty: &TyValue, emit: Emit) -> cubical_core::Result<String> {
    let nf = reify_ty(sc.ctx(), ty)?;
    Ok(match emit {
        Emit::Nf => nf.to_string(),
        Emit::Surface => print::term(&Names::new(sc.entry_names()).ty(&Embed::ty(sc.size(), &nf))),
    })
}

fn free_dims(phi: &SCofib, bound: &mut Vec<String>, out: &mut Vec<String>) {
    match phi {
        SCofib::Eq(r, s) => {
            for d in [r, s] {
                if let SDim::Name(n) = d {
                    if !bound.contains(n) && !out.contains(n) {
                        out.push(n.clone());
                    }
                }
            }
        }
        SCofib::And(a, b) | SCofib::Or(a, b) => {
            free_dims(a, bound, out);
            free_dims(b, bound, out);
        }
        SCofib::Forall(i, body) => {
            bound.push(i.clone());
            free_dims(body, bound, out);
            bound.pop();
        }
    }
}
