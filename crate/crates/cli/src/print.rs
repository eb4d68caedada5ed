//! Printing surface syntax in a form the parser reads back.

use std::fmt::Write;

use cubical_core::surface::{SCofib, SDim, SKind, STerm};

/// Binding strength of a position.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    /// Binders and arrows, which extend as far right as possible.
    Top,
    /// The right of `*`.
    Prod,
    /// The head of an application.
    App,
    /// Arguments and operands of postfix operators.
    Arg,
}

pub fn dim(r: &SDim) -> String {
    match r {
        SDim::Zero => "0".into(),
        SDim::One => "1".into(),
        SDim::Name(n) => n.clone(),
    }
}

pub fn cofib(phi: &SCofib) -> String {
    let mut out = String::new();
    write_cofib(&mut out, phi, 0);
    out
}

fn write_cofib(out: &mut String, phi: &SCofib, prec: u8) {
    let (level, open) = match phi {
        SCofib::Or(..) | SCofib::Forall(..) => (0, prec > 0),
        SCofib::And(..) => (1, prec > 1),
        SCofib::Eq(..) => (2, false),
    };
    if open {
        out.push('(');
    }
    match phi {
        SCofib::Eq(r, s) => {
            let _ = write!(out, "{} = {}", dim(r), dim(s));
        }
        SCofib::And(a, b) => {
            write_cofib(out, a, level + 1);
            out.push_str(" /\\ ");
            write_cofib(out, b, level);
        }
        SCofib::Or(a, b) => {
            write_cofib(out, a, level + 1);
            out.push_str(" \\/ ");
            write_cofib(out, b, level);
        }
        SCofib::Forall(i, body) => {
            let _ = write!(out, "forall {i}. ");
            write_cofib(out, body, 0);
        }
    }
    if open {
        out.push(')');
    }
}

pub fn term(t: &STerm) -> String {
    let mut out = String::new();
    write(&mut out, t, Prec::Top);
    out
}

fn level(t: &STerm) -> Prec {
    match &t.kind {
        SKind::Lam(..) | SKind::PLam(..) | SKind::Pi { .. } => Prec::Top,
        SKind::Sigma { .. } => Prec::Prod,
        SKind::App(..)
        | SKind::Loop(_)
        | SKind::Unglue(_)
        | SKind::IdEquiv(_)
        | SKind::Path { .. }
        | SKind::GlueTy { .. }
        | SKind::Glue { .. }
        | SKind::HCom { .. }
        | SKind::Coe { .. }
        | SKind::IndS1 { .. } => Prec::App,
        _ => Prec::Arg,
    }
}

fn system<T>(out: &mut String, bs: &[(SCofib, T)], mut body: impl FnMut(&mut String, &T)) {
    out.push('[');
    for (k, (phi, b)) in bs.iter().enumerate() {
        if k > 0 {
            out.push_str(" | ");
        }
        write_cofib(out, phi, 0);
        out.push_str(" -> ");
        body(out, b);
    }
    out.push(']');
}

fn binder(out: &mut String, x: &str, body: &STerm) {
    let _ = write!(out, "({x}. ");
    write(out, body, Prec::Top);
    out.push(')');
}

fn write(out: &mut String, t: &STerm, prec: Prec) {
    let open = level(t) < prec;
    if open {
        out.push('(');
    }
    match &t.kind {
        SKind::Var(x) => out.push_str(x),
        SKind::Lam(x, body) => {
            let _ = write!(out, "\\{x} -> ");
            write(out, body, Prec::Top);
        }
        SKind::App(f, a) => {
            write(out, f, Prec::App);
            out.push(' ');
            write(out, a, Prec::Arg);
        }
        SKind::Pair(a, b) => {
            out.push('(');
            write(out, a, Prec::Top);
            out.push_str(" , ");
            write(out, b, Prec::Top);
            out.push(')');
        }
        SKind::Fst(p) => {
            write(out, p, Prec::Arg);
            out.push_str(" .1");
        }
        SKind::Snd(p) => {
            write(out, p, Prec::Arg);
            out.push_str(" .2");
        }
        SKind::PLam(i, body) => {
            let _ = write!(out, "<{i}> ");
            write(out, body, Prec::Top);
        }
        SKind::PApp(p, r) => {
            write(out, p, Prec::Arg);
            let _ = write!(out, " @ {}", dim(r));
        }
        SKind::Base => out.push_str("base"),
        SKind::Loop(r) => {
            let _ = write!(out, "loop {}", dim(r));
        }
        SKind::S1 => out.push_str("S1"),
        SKind::Path {
            binder: b,
            line,
            ep0,
            ep1,
        } => {
            out.push_str("Path ");
            match b {
                Some(i) => binder(out, i, line),
                None => write(out, line, Prec::Arg),
            }
            out.push(' ');
            write(out, ep0, Prec::Arg);
            out.push(' ');
            write(out, ep1, Prec::Arg);
        }
        SKind::Pi { name, dom, cod } | SKind::Sigma { name, dom, cod } => {
            let pi = matches!(t.kind, SKind::Pi { .. });
            match name {
                Some(x) => {
                    let _ = write!(out, "({x} : ");
                    write(out, dom, Prec::Top);
                    out.push(')');
                }
                None => write(out, dom, Prec::App),
            }
            if pi {
                out.push_str(" -> ");
                write(out, cod, Prec::Top);
            } else {
                out.push_str(" * ");
                write(out, cod, Prec::Prod);
            }
        }
        SKind::GlueTy { branches, base } => {
            out.push_str("Glue [");
            for (k, (phi, a, f)) in branches.iter().enumerate() {
                if k > 0 {
                    out.push_str(" | ");
                }
                write_cofib(out, phi, 0);
                out.push_str(" -> (");
                write(out, a, Prec::Top);
                out.push_str(" , ");
                write(out, f, Prec::Top);
                out.push(')');
            }
            out.push_str("] ");
            write(out, base, Prec::Arg);
        }
        SKind::Glue { partial, total } => {
            out.push_str("glue ");
            system(out, partial, |out, e| write(out, e, Prec::Top));
            out.push(' ');
            write(out, total, Prec::Arg);
        }
        SKind::Unglue(e) => {
            out.push_str("unglue ");
            write(out, e, Prec::Arg);
        }
        SKind::HCom {
            r,
            s,
            phi,
            ty,
            binder: i,
            tube,
        } => {
            let _ = write!(out, "hcom {} {} [", dim(r), dim(s));
            write_cofib(out, phi, 0);
            out.push_str("] ");
            write(out, ty, Prec::Arg);
            out.push(' ');
            binder(out, i, tube);
        }
        SKind::Coe {
            binder: i,
            line,
            r,
            s,
            arg,
        } => {
            out.push_str("coe ");
            binder(out, i, line);
            let _ = write!(out, " {} {} ", dim(r), dim(s));
            write(out, arg, Prec::Arg);
        }
        SKind::IndS1 {
            var,
            motive,
            base,
            dim: i,
            loop_case,
            scrut,
        } => {
            out.push_str("ind-S1 ");
            binder(out, var, motive);
            out.push(' ');
            write(out, base, Prec::Arg);
            out.push(' ');
            binder(out, i, loop_case);
            out.push(' ');
            write(out, scrut, Prec::Arg);
        }
        SKind::System(bs) => system(out, bs, |out, e| write(out, e, Prec::Top)),
        SKind::Ann(e, ty) => {
            out.push('(');
            write(out, e, Prec::Top);
            out.push_str(" : ");
            write(out, ty, Prec::Top);
            out.push(')');
        }
        SKind::IdEquiv(a) => {
            out.push_str("id-equiv ");
            write(out, a, Prec::Arg);
        }
    }
    if open {
        out.push(')');
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_cofib, parse_expr};

    fn round_trip(src: &str) {
        let once = term(&parse_expr(src).unwrap());
        let twice = term(&parse_expr(&once).unwrap());
        assert_eq!(once, twice, "from {src}");
    }

    #[test]
    fn prints_what_it_parses() {
        for src in [
            "\\f -> \\x -> f x",
            "f (g x) y",
            "(\\x -> x) base",
            "f (x .1) @ i",
            "(f x) .2",
            "<i> loop i",
            "(x : S1) -> (y : S1) * Path S1 x y",
            "((x : S1) -> S1) * S1",
            "S1 -> S1 -> S1",
            "(S1 -> S1) -> S1",
            "hcom 0 1 [i = 0 \\/ i = 1] S1 (j. [j = 0 -> base | i = 0 \\/ i = 1 -> loop j])",
            "coe (i. Path S1 base base) 0 1 (<j> base)",
            "ind-S1 (x. S1) base (i. loop i) (f x)",
            "Glue [i = 0 -> (S1 , id-equiv S1)] S1",
            "glue [i = 0 -> base] (unglue x)",
            "f (loop i) (unglue (g y))",
            "(base : S1)",
        ] {
            round_trip(src);
        }
    }

    #[test]
    fn cofibrations_round_trip() {
        for src in [
            "i = 0 \\/ j = 1 /\\ i = j",
            "(i = 0 \\/ j = 1) /\\ i = j",
            "(forall k. k = i) \\/ i = 1",
        ] {
            let phi = parse_cofib(src).unwrap();
            assert_eq!(parse_cofib(&cofib(&phi)).unwrap(), phi);
        }
    }
}
