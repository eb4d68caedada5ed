//! Named surface syntax, produced by the parser and consumed by the
//! elaborator, plus the inverse translation from core syntax.

use crate::syntax::{Cofib, Dim, Term, TypeExpr};

/// Byte range in the source text.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Span {
        Span { start, end }
    }

    pub fn join(self, other: Span) -> Span {
        Span {
            start: self.start.min(other.start),
            end: self.end.max(other.end),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SDim {
    Zero,
    One,
    Name(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SCofib {
    Eq(SDim, SDim),
    And(Box<SCofib>, Box<SCofib>),
    Or(Box<SCofib>, Box<SCofib>),
    Forall(String, Box<SCofib>),
}

pub type SSystem = Vec<(SCofib, STerm)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct STerm {
    pub span: Span,
    pub kind: SKind,
}

/// Surface expressions. Types and terms share one syntactic category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SKind {
    Var(String),
    Lam(String, Box<STerm>),
    App(Box<STerm>, Box<STerm>),
    Pair(Box<STerm>, Box<STerm>),
    Fst(Box<STerm>),
    Snd(Box<STerm>),
    PLam(String, Box<STerm>),
    PApp(Box<STerm>, SDim),
    Base,
    Loop(SDim),
    S1,
    /// `binder` is `None` for a non-dependent line.
    Path {
        binder: Option<String>,
        line: Box<STerm>,
        ep0: Box<STerm>,
        ep1: Box<STerm>,
    },
    Pi {
        name: Option<String>,
        dom: Box<STerm>,
        cod: Box<STerm>,
    },
    Sigma {
        name: Option<String>,
        dom: Box<STerm>,
        cod: Box<STerm>,
    },
    /// `Glue [φ -> (A, f) | ...] B`
    GlueTy {
        branches: Vec<(SCofib, STerm, STerm)>,
        base: Box<STerm>,
    },
    /// `glue [φ -> a | ...] b`
    Glue {
        partial: SSystem,
        total: Box<STerm>,
    },
    Unglue(Box<STerm>),
    HCom {
        r: SDim,
        s: SDim,
        phi: SCofib,
        ty: Box<STerm>,
        binder: String,
        tube: Box<STerm>,
    },
    Coe {
        binder: String,
        line: Box<STerm>,
        r: SDim,
        s: SDim,
        arg: Box<STerm>,
    },
    IndS1 {
        var: String,
        motive: Box<STerm>,
        base: Box<STerm>,
        dim: String,
        loop_case: Box<STerm>,
        scrut: Box<STerm>,
    },
    System(SSystem),
    Ann(Box<STerm>, Box<STerm>),
    IdEquiv(Box<STerm>),
}

impl STerm {
    pub fn new(span: Span, kind: SKind) -> STerm {
        STerm { span, kind }
    }

    /// A term without source position, for generated syntax.
    pub fn synth(kind: SKind) -> STerm {
        STerm {
            span: Span::default(),
            kind,
        }
    }
}

/// Names for the entries of a context, used when turning core syntax back
/// into surface syntax.
#[derive(Clone, Debug, Default)]
pub struct Names {
    names: Vec<String>,
}

impl Names {
    pub fn new(names: Vec<String>) -> Names {
        Names { names }
    }

    /// The first unused name from a short list, then numbered variants.
    fn fresh(&self, prefix: &str) -> String {
        let plain: &[&str] = match prefix {
            "x" => &["x", "y", "z", "w"],
            _ => &["i", "j", "k", "l"],
        };
        let numbered = (1..).map(|k| format!("{}{k}", plain[0]));
        plain
            .iter()
            .map(|s| s.to_string())
            .chain(numbered)
            .find(|c| !self.names.contains(c))
            .expect("infinitely many candidates")
    }

    fn bind(&self, prefix: &str) -> (Names, String) {
        let name = self.fresh(prefix);
        let mut names = self.names.clone();
        names.push(name.clone());
        (Names { names }, name)
    }

    fn lookup(&self, index: usize) -> String {
        let len = self.names.len();
        if index < len {
            self.names[len - 1 - index].clone()
        } else {
            format!("?{index}")
        }
    }

    fn dim(&self, r: Dim) -> SDim {
        match r {
            Dim::Zero => SDim::Zero,
            Dim::One => SDim::One,
            Dim::Var(i) => SDim::Name(self.lookup(i)),
        }
    }

    fn cofib(&self, phi: &Cofib) -> SCofib {
        match phi {
            Cofib::Eq(r, s) => SCofib::Eq(self.dim(*r), self.dim(*s)),
            Cofib::And(a, b) => SCofib::And(Box::new(self.cofib(a)), Box::new(self.cofib(b))),
            Cofib::Or(a, b) => SCofib::Or(Box::new(self.cofib(a)), Box::new(self.cofib(b))),
            Cofib::Forall(a) => {
                let (inner, name) = self.bind("i");
                SCofib::Forall(name, Box::new(inner.cofib(a)))
            }
        }
    }

    fn system(&self, branches: &[(Cofib, Term)]) -> SSystem {
        branches
            .iter()
            .map(|(c, t)| (self.cofib(c), self.term(t)))
            .collect()
    }

    fn as_system(&self, t: &Term) -> SSystem {
        match t {
            Term::System(bs) => self.system(bs),
            Term::Abort => Vec::new(),
            other => vec![(SCofib::Eq(SDim::One, SDim::One), self.term(other))],
        }
    }

    /// Surface form of a core term whose free indices are named by `self`.
    pub fn term(&self, t: &Term) -> STerm {
        let b = |t: STerm| Box::new(t);
        STerm::synth(match t {
            Term::Var(i) => SKind::Var(self.lookup(*i)),
            Term::Lam(body) => {
                let (inner, x) = self.bind("x");
                SKind::Lam(x, b(inner.term(body)))
            }
            Term::App(f, a) => SKind::App(b(self.term(f)), b(self.term(a))),
            Term::Pair(x, y) => SKind::Pair(b(self.term(x)), b(self.term(y))),
            Term::Fst(p) => SKind::Fst(b(self.term(p))),
            Term::Snd(p) => SKind::Snd(b(self.term(p))),
            Term::PLam(body) => {
                let (inner, i) = self.bind("i");
                SKind::PLam(i, b(inner.term(body)))
            }
            Term::PApp(p, r) => SKind::PApp(b(self.term(p)), self.dim(*r)),
            Term::Englue { partial, total, .. } => SKind::Glue {
                partial: self.as_system(partial),
                total: b(self.term(total)),
            },
            Term::Unglue { arg, .. } => SKind::Unglue(b(self.term(arg))),
            Term::Base => SKind::Base,
            Term::Loop(r) => SKind::Loop(self.dim(*r)),
            Term::IndS1 {
                motive,
                base,
                loop_case,
                scrut,
            } => {
                let (inner_x, x) = self.bind("x");
                let (inner_i, i) = self.bind("i");
                SKind::IndS1 {
                    var: x,
                    motive: b(inner_x.ty(motive)),
                    base: b(self.term(base)),
                    dim: i,
                    loop_case: b(inner_i.term(loop_case)),
                    scrut: b(self.term(scrut)),
                }
            }
            Term::HCom {
                ty,
                r,
                s,
                phi,
                tube,
            } => {
                let (inner, i) = self.bind("i");
                SKind::HCom {
                    r: self.dim(*r),
                    s: self.dim(*s),
                    phi: self.cofib(phi),
                    ty: b(self.ty(ty)),
                    binder: i,
                    tube: b(inner.term(tube)),
                }
            }
            Term::Coe { line, r, s, arg } => {
                let (inner, i) = self.bind("i");
                SKind::Coe {
                    binder: i,
                    line: b(inner.ty(line)),
                    r: self.dim(*r),
                    s: self.dim(*s),
                    arg: b(self.term(arg)),
                }
            }
            Term::System(bs) => SKind::System(self.system(bs)),
            Term::Abort => SKind::System(Vec::new()),
        })
    }

    /// Surface form of a core type.
    pub fn ty(&self, t: &TypeExpr) -> STerm {
        let b = |t: STerm| Box::new(t);
        STerm::synth(match t {
            TypeExpr::S1 => SKind::S1,
            TypeExpr::Path { line, ep0, ep1 } => {
                let (inner, i) = self.bind("i");
                SKind::Path {
                    binder: Some(i),
                    line: b(inner.ty(line)),
                    ep0: b(self.term(ep0)),
                    ep1: b(self.term(ep1)),
                }
            }
            TypeExpr::Pi { dom, cod } => {
                let (inner, x) = self.bind("x");
                SKind::Pi {
                    name: Some(x),
                    dom: b(self.ty(dom)),
                    cod: b(inner.ty(cod)),
                }
            }
            TypeExpr::Sigma { dom, cod } => {
                let (inner, x) = self.bind("x");
                SKind::Sigma {
                    name: Some(x),
                    dom: b(self.ty(dom)),
                    cod: b(inner.ty(cod)),
                }
            }
            TypeExpr::Glue {
                phi,
                base,
                partial_ty,
                equiv,
            } => {
                let branches = match (&**partial_ty, &**equiv) {
                    (TypeExpr::System(tys), Term::System(fs))
                        if tys.len() == fs.len()
                            && tys.iter().zip(fs).all(|((c, _), (d, _))| c == d) =>
                    {
                        tys.iter()
                            .zip(fs)
                            .map(|((c, a), (_, f))| (self.cofib(c), self.ty(a), self.term(f)))
                            .collect()
                    }
                    (a, f) => vec![(self.cofib(phi), self.ty(a), self.term(f))],
                };
                SKind::GlueTy {
                    branches,
                    base: b(self.ty(base)),
                }
            }
            TypeExpr::System(bs) => SKind::System(
                bs.iter()
                    .map(|(c, a)| (self.cofib(c), self.ty(a)))
                    .collect(),
            ),
            TypeExpr::Abort => SKind::System(Vec::new()),
        })
    }
}
