//! Lexer and recursive-descent parser for `.ctt` files.

use cubical_core::surface::{SCofib, SDim, SKind, STerm, Span};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// 1-based line and column of a byte offset.
pub fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.chars().rev().take_while(|&c| c != '\n').count() + 1;
    (line, column)
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Zero,
    One,
    Backslash,
    Arrow,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LAngle,
    RAngle,
    Comma,
    Dot,
    Proj1,
    Proj2,
    At,
    Colon,
    Define,
    Star,
    Equals,
    And,
    Or,
    Bar,
    Turnstile,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Eof => "end of input".into(),
            other => format!("`{}`", other.text()),
        }
    }

    fn text(&self) -> &'static str {
        match self {
            Tok::Zero => "0",
            Tok::One => "1",
            Tok::Backslash => "\\",
            Tok::Arrow => "->",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::LAngle => "<",
            Tok::RAngle => ">",
            Tok::Comma => ",",
            Tok::Dot => ".",
            Tok::Proj1 => ".1",
            Tok::Proj2 => ".2",
            Tok::At => "@",
            Tok::Colon => ":",
            Tok::Define => ":=",
            Tok::Star => "*",
            Tok::Equals => "=",
            Tok::And => "/\\",
            Tok::Or => "\\/",
            Tok::Bar => "|",
            Tok::Turnstile => "|-",
            Tok::Ident(_) | Tok::Eof => "",
        }
    }
}

const KEYWORDS: &[&str] = &[
    "def", "var", "dim", "assume", "base", "loop", "S1", "Path", "Glue", "glue", "unglue", "hcom",
    "coe", "ind-S1", "id-equiv", "forall",
];

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn lex(src: &str) -> Result<Vec<(Tok, Span)>, ParseError> {
    let err = |at: usize, message: String| {
        let (line, column) = line_col(src, at);
        ParseError {
            line,
            column,
            message,
        }
    };
    let bytes: Vec<(usize, char)> = src.char_indices().collect();
    let peek = |k: usize| bytes.get(k).map(|&(_, c)| c);
    let mut out = Vec::new();
    let mut k = 0;
    while k < bytes.len() {
        let (start, c) = bytes[k];
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        if c == '-' && peek(k + 1) == Some('-') {
            while k < bytes.len() && bytes[k].1 != '\n' {
                k += 1;
            }
            continue;
        }
        let (tok, len) = if is_ident_start(c) {
            let mut j = k + 1;
            loop {
                match peek(j) {
                    Some(d) if is_ident_char(d) => j += 1,
                    // `-` joins identifiers such as `ind-S1` when a letter follows.
                    Some('-') if peek(j + 1).is_some_and(is_ident_start) => j += 2,
                    _ => break,
                }
            }
            let end = bytes.get(j).map_or(src.len(), |&(i, _)| i);
            (Tok::Ident(src[start..end].to_string()), j - k)
        } else {
            let two = (c, peek(k + 1));
            match two {
                ('-', Some('>')) => (Tok::Arrow, 2),
                (':', Some('=')) => (Tok::Define, 2),
                ('/', Some('\\')) => (Tok::And, 2),
                ('\\', Some('/')) => (Tok::Or, 2),
                ('|', Some('-')) => (Tok::Turnstile, 2),
                ('.', Some('1')) => (Tok::Proj1, 2),
                ('.', Some('2')) => (Tok::Proj2, 2),
                ('0', _) => (Tok::Zero, 1),
                ('1', _) => (Tok::One, 1),
                ('\\', _) | ('λ', _) => (Tok::Backslash, 1),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                ('[', _) => (Tok::LBracket, 1),
                (']', _) => (Tok::RBracket, 1),
                ('<', _) => (Tok::LAngle, 1),
                ('>', _) => (Tok::RAngle, 1),
                (',', _) => (Tok::Comma, 1),
                ('.', _) => (Tok::Dot, 1),
                ('@', _) => (Tok::At, 1),
                (':', _) => (Tok::Colon, 1),
                ('*', _) => (Tok::Star, 1),
                ('=', _) => (Tok::Equals, 1),
                ('|', _) => (Tok::Bar, 1),
                _ => return Err(err(start, format!("unexpected character `{c}`"))),
            }
        };
        let end = bytes.get(k + len).map_or(src.len(), |&(i, _)| i);
        out.push((tok, Span::new(start, end)));
        k += len;
    }
    out.push((Tok::Eof, Span::new(src.len(), src.len())));
    Ok(out)
}

/// A top-level declaration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decl {
    /// `def name : A := e` or `def name := e`
    Def {
        name: String,
        span: Span,
        ty: Option<STerm>,
        body: STerm,
    },
    /// `var x : A`
    Var { name: String, span: Span, ty: STerm },
    /// `dim i j`
    Dim { names: Vec<String>, span: Span },
    /// `assume phi`
    Assume { phi: SCofib, span: Span },
}

impl Decl {
    pub fn span(&self) -> Span {
        match self {
            Decl::Def { span, .. }
            | Decl::Var { span, .. }
            | Decl::Dim { span, .. }
            | Decl::Assume { span, .. } => *span,
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> PResult<Parser<'a>> {
        Ok(Parser {
            src,
            toks: lex(src)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn last_end(&self) -> usize {
        self.toks[self.pos.saturating_sub(1)].1.end
    }

    fn since(&self, start: usize) -> Span {
        Span::new(start, self.last_end().max(start))
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: String) -> PResult<T> {
        let (line, column) = line_col(self.src, self.span().start);
        Err(ParseError {
            line,
            column,
            message,
        })
    }

    fn unexpected<T>(&self, wanted: &str) -> PResult<T> {
        self.error(format!(
            "expected {wanted}, found {}",
            self.peek().describe()
        ))
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> PResult<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.unexpected(&format!("`{}`", t.text()))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn name(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            _ => self.unexpected("a name"),
        }
    }

    fn decls(&mut self) -> PResult<Vec<Decl>> {
        let mut out = Vec::new();
        while *self.peek() != Tok::Eof {
            out.push(self.decl()?);
        }
        Ok(out)
    }

    fn decl(&mut self) -> PResult<Decl> {
        let start = self.span().start;
        let kw = match self.peek() {
            Tok::Ident(s) => s.clone(),
            _ => return self.unexpected("a declaration"),
        };
        self.bump();
        match kw.as_str() {
            "def" => {
                let name = self.name()?;
                let ty = if self.eat(&Tok::Colon) {
                    Some(self.expr()?)
                } else {
                    None
                };
                self.expect(Tok::Define)?;
                let body = self.expr()?;
                Ok(Decl::Def {
                    name,
                    span: self.since(start),
                    ty,
                    body,
                })
            }
            "var" => {
                let name = self.name()?;
                self.expect(Tok::Colon)?;
                let ty = self.expr()?;
                Ok(Decl::Var {
                    name,
                    span: self.since(start),
                    ty,
                })
            }
            "dim" => {
                let mut names = vec![self.name()?];
                while matches!(self.peek(), Tok::Ident(s) if !KEYWORDS.contains(&s.as_str())) {
                    names.push(self.name()?);
                }
                Ok(Decl::Dim {
                    names,
                    span: self.since(start),
                })
            }
            "assume" => {
                let phi = self.cofib()?;
                Ok(Decl::Assume {
                    phi,
                    span: self.since(start),
                })
            }
            _ => {
                self.pos -= 1;
                self.unexpected("`def`, `var`, `dim` or `assume`")
            }
        }
    }

    fn dim(&mut self) -> PResult<SDim> {
        match self.peek() {
            Tok::Zero => {
                self.bump();
                Ok(SDim::Zero)
            }
            Tok::One => {
                self.bump();
                Ok(SDim::One)
            }
            Tok::Ident(_) => Ok(SDim::Name(self.name()?)),
            _ => self.unexpected("a dimension"),
        }
    }

    fn cofib(&mut self) -> PResult<SCofib> {
        let a = self.conj()?;
        if self.eat(&Tok::Or) {
            Ok(SCofib::Or(Box::new(a), Box::new(self.cofib()?)))
        } else {
            Ok(a)
        }
    }

    fn conj(&mut self) -> PResult<SCofib> {
        let a = self.cofib_atom()?;
        if self.eat(&Tok::And) {
            Ok(SCofib::And(Box::new(a), Box::new(self.conj()?)))
        } else {
            Ok(a)
        }
    }

    fn cofib_atom(&mut self) -> PResult<SCofib> {
        if self.is_keyword("forall") {
            self.bump();
            let i = self.name()?;
            self.expect(Tok::Dot)?;
            return Ok(SCofib::Forall(i, Box::new(self.cofib()?)));
        }
        if self.eat(&Tok::LParen) {
            let phi = self.cofib()?;
            self.expect(Tok::RParen)?;
            return Ok(phi);
        }
        let r = self.dim()?;
        self.expect(Tok::Equals)?;
        Ok(SCofib::Eq(r, self.dim()?))
    }

    /// `[ phi -> e | ... ]`, with the body parsed by `body`.
    fn system<T>(
        &mut self,
        mut body: impl FnMut(&mut Self) -> PResult<T>,
    ) -> PResult<Vec<(SCofib, T)>> {
        self.expect(Tok::LBracket)?;
        let mut out = Vec::new();
        if self.eat(&Tok::RBracket) {
            return Ok(out);
        }
        loop {
            let phi = self.cofib()?;
            self.expect(Tok::Arrow)?;
            out.push((phi, body(self)?));
            if self.eat(&Tok::RBracket) {
                return Ok(out);
            }
            if !self.eat(&Tok::Bar) {
                return self.unexpected("`|` or `]`");
            }
        }
    }

    /// `(x. e)`
    fn binder(&mut self) -> PResult<(String, STerm)> {
        self.expect(Tok::LParen)?;
        let x = self.name()?;
        self.expect(Tok::Dot)?;
        let e = self.expr()?;
        self.expect(Tok::RParen)?;
        Ok((x, e))
    }

    fn expr(&mut self) -> PResult<STerm> {
        let start = self.span().start;
        match self.peek() {
            Tok::Backslash => {
                self.bump();
                let mut names = vec![self.name()?];
                while *self.peek() != Tok::Arrow {
                    names.push(self.name()?);
                }
                self.bump();
                let mut body = self.expr()?;
                let span = self.since(start);
                for x in names.into_iter().rev() {
                    body = STerm::new(span, SKind::Lam(x, Box::new(body)));
                }
                Ok(body)
            }
            Tok::LAngle => {
                self.bump();
                let i = self.name()?;
                self.expect(Tok::RAngle)?;
                let body = self.expr()?;
                Ok(STerm::new(
                    self.since(start),
                    SKind::PLam(i, Box::new(body)),
                ))
            }
            _ => {
                let a = self.prod()?;
                if self.eat(&Tok::Arrow) {
                    let cod = self.expr()?;
                    let (name, dom) = split_binder(a);
                    Ok(STerm::new(
                        self.since(start),
                        SKind::Pi {
                            name,
                            dom: Box::new(dom),
                            cod: Box::new(cod),
                        },
                    ))
                } else {
                    Ok(a)
                }
            }
        }
    }

    fn prod(&mut self) -> PResult<STerm> {
        let start = self.span().start;
        let a = self.app()?;
        if self.eat(&Tok::Star) {
            let cod = self.prod()?;
            let (name, dom) = split_binder(a);
            Ok(STerm::new(
                self.since(start),
                SKind::Sigma {
                    name,
                    dom: Box::new(dom),
                    cod: Box::new(cod),
                },
            ))
        } else {
            Ok(a)
        }
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::LParen | Tok::LBracket => true,
            Tok::Ident(s) => !matches!(s.as_str(), "def" | "var" | "dim" | "assume" | "forall"),
            _ => false,
        }
    }

    fn app(&mut self) -> PResult<STerm> {
        let start = self.span().start;
        let mut head = match self.keyword_form()? {
            Some(t) => t,
            None => self.postfix()?,
        };
        while self.starts_atom() {
            let arg = self.postfix()?;
            head = STerm::new(self.since(start), SKind::App(Box::new(head), Box::new(arg)));
        }
        Ok(head)
    }

    /// Constructs introduced by a keyword and taking a fixed number of
    /// arguments.
    fn keyword_form(&mut self) -> PResult<Option<STerm>> {
        let start = self.span().start;
        let kw = match self.peek() {
            Tok::Ident(s) => s.clone(),
            _ => return Ok(None),
        };
        let b = Box::new;
        let kind = match kw.as_str() {
            "loop" => {
                self.bump();
                SKind::Loop(self.dim()?)
            }
            "unglue" => {
                self.bump();
                SKind::Unglue(b(self.postfix()?))
            }
            "id-equiv" => {
                self.bump();
                SKind::IdEquiv(b(self.postfix()?))
            }
            "Path" => {
                self.bump();
                let (binder, line) = if *self.peek() == Tok::LParen
                    && matches!(self.peek_at(1), Tok::Ident(_))
                    && *self.peek_at(2) == Tok::Dot
                {
                    let (i, line) = self.binder()?;
                    (Some(i), line)
                } else {
                    (None, self.postfix()?)
                };
                let ep0 = self.postfix()?;
                let ep1 = self.postfix()?;
                SKind::Path {
                    binder,
                    line: b(line),
                    ep0: b(ep0),
                    ep1: b(ep1),
                }
            }
            "Glue" => {
                self.bump();
                let branches = self
                    .system(|p| {
                        p.expect(Tok::LParen)?;
                        let a = p.expr()?;
                        p.expect(Tok::Comma)?;
                        let f = p.expr()?;
                        p.expect(Tok::RParen)?;
                        Ok((a, f))
                    })?
                    .into_iter()
                    .map(|(phi, (a, f))| (phi, a, f))
                    .collect();
                SKind::GlueTy {
                    branches,
                    base: b(self.postfix()?),
                }
            }
            "glue" => {
                self.bump();
                let partial = self.system(|p| p.expr())?;
                SKind::Glue {
                    partial,
                    total: b(self.postfix()?),
                }
            }
            "hcom" => {
                self.bump();
                let r = self.dim()?;
                let s = self.dim()?;
                self.expect(Tok::LBracket)?;
                let phi = self.cofib()?;
                self.expect(Tok::RBracket)?;
                let ty = self.postfix()?;
                let (binder, tube) = self.binder()?;
                SKind::HCom {
                    r,
                    s,
                    phi,
                    ty: b(ty),
                    binder,
                    tube: b(tube),
                }
            }
            "coe" => {
                self.bump();
                let (binder, line) = self.binder()?;
                let r = self.dim()?;
                let s = self.dim()?;
                SKind::Coe {
                    binder,
                    line: b(line),
                    r,
                    s,
                    arg: b(self.postfix()?),
                }
            }
            "ind-S1" => {
                self.bump();
                let (var, motive) = self.binder()?;
                let base = self.postfix()?;
                let (dim, loop_case) = self.binder()?;
                let scrut = self.postfix()?;
                SKind::IndS1 {
                    var,
                    motive: b(motive),
                    base: b(base),
                    dim,
                    loop_case: b(loop_case),
                    scrut: b(scrut),
                }
            }
            _ => return Ok(None),
        };
        Ok(Some(STerm::new(self.since(start), kind)))
    }

    fn postfix(&mut self) -> PResult<STerm> {
        let start = self.span().start;
        let mut e = self.atom()?;
        loop {
            let kind = match self.peek() {
                Tok::Proj1 => {
                    self.bump();
                    SKind::Fst(Box::new(e))
                }
                Tok::Proj2 => {
                    self.bump();
                    SKind::Snd(Box::new(e))
                }
                Tok::At => {
                    self.bump();
                    SKind::PApp(Box::new(e), self.dim()?)
                }
                _ => return Ok(e),
            };
            e = STerm::new(self.since(start), kind);
        }
    }

    fn atom(&mut self) -> PResult<STerm> {
        let start = self.span().start;
        match self.peek().clone() {
            Tok::Ident(s) => {
                let kind = match s.as_str() {
                    "base" => SKind::Base,
                    "S1" => SKind::S1,
                    // Keyword forms would swallow the arguments after them.
                    "loop" | "unglue" | "id-equiv" | "Path" | "Glue" | "glue" | "hcom" | "coe"
                    | "ind-S1" => {
                        return self.error(format!("parenthesize `{s}` in argument position"));
                    }
                    _ if KEYWORDS.contains(&s.as_str()) => return self.unexpected("an expression"),
                    _ => SKind::Var(s.clone()),
                };
                self.bump();
                Ok(STerm::new(self.since(start), kind))
            }
            Tok::LBracket => {
                let sys = self.system(|p| p.expr())?;
                Ok(STerm::new(self.since(start), SKind::System(sys)))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                let kind = match self.peek() {
                    Tok::RParen => {
                        self.bump();
                        return Ok(STerm::new(self.since(start), e.kind));
                    }
                    Tok::Comma => {
                        self.bump();
                        let second = self.expr()?;
                        SKind::Pair(Box::new(e), Box::new(second))
                    }
                    Tok::Colon => {
                        self.bump();
                        let ty = self.expr()?;
                        SKind::Ann(Box::new(e), Box::new(ty))
                    }
                    _ => return self.unexpected("`)`, `,` or `:`"),
                };
                self.expect(Tok::RParen)?;
                Ok(STerm::new(self.since(start), kind))
            }
            _ => self.unexpected("an expression"),
        }
    }

    fn finish<T>(&mut self, t: T) -> PResult<T> {
        if *self.peek() == Tok::Eof {
            Ok(t)
        } else {
            self.unexpected("end of input")
        }
    }
}

/// Splits a dependent binder `(x : A)` off the left of `->` or `*`.
fn split_binder(t: STerm) -> (Option<String>, STerm) {
    match t.kind {
        SKind::Ann(e, ty) => match e.kind {
            SKind::Var(x) => (Some(x), *ty),
            kind => (
                None,
                STerm::new(t.span, SKind::Ann(Box::new(STerm::new(e.span, kind)), ty)),
            ),
        },
        kind => (None, STerm::new(t.span, kind)),
    }
}

pub fn parse_file(src: &str) -> Result<Vec<Decl>, ParseError> {
    let mut p = Parser::new(src)?;
    p.decls()
}

pub fn parse_expr(src: &str) -> Result<STerm, ParseError> {
    let mut p = Parser::new(src)?;
    let e = p.expr()?;
    p.finish(e)
}

pub fn parse_cofib(src: &str) -> Result<SCofib, ParseError> {
    let mut p = Parser::new(src)?;
    let phi = p.cofib()?;
    p.finish(phi)
}

/// `HYP |- GOAL`, as used by the REPL's `:cof`.
pub fn parse_sequent(src: &str) -> Result<(SCofib, SCofib), ParseError> {
    let mut p = Parser::new(src)?;
    let hyp = p.cofib()?;
    p.expect(Tok::Turnstile)?;
    let goal = p.cofib()?;
    p.finish((hyp, goal))
}

pub fn parse_decl(src: &str) -> Result<Decl, ParseError> {
    let mut p = Parser::new(src)?;
    let d = p.decl()?;
    p.finish(d)
}

pub fn is_decl(src: &str) -> bool {
    matches!(
        src.split_whitespace().next(),
        Some("def" | "var" | "dim" | "assume")
    )
}
