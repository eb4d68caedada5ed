//! Line-oriented interactive loop.

use std::io::{self, BufRead, Write};

use crate::parse;
use crate::session::{Emit, Session, SessionError};

const HELP: &str = "\
commands:
  def/var/dim/assume ...   add a declaration
  :t EXPR                  type of an expression
  :nf EXPR                 normal form (also the default for a bare expression)
  :eq NAME1 NAME2          judgmental equality of two definitions
  :cof HYP |- GOAL         cofibration entailment
  :q                       quit";

/// Runs the loop until end of input or `:q`.
pub fn run(input: impl BufRead, mut out: impl Write, prompt: bool) -> io::Result<()> {
    let mut session = Session::new();
    if prompt {
        write!(out, "> ")?;
        out.flush()?;
    }
    for line in input.lines() {
        let line = line?;
        let line = line.trim();
        if line == ":q" || line == ":quit" {
            break;
        }
        if !line.is_empty() {
            match command(&mut session, line) {
                Ok(text) => {
                    if !text.is_empty() {
                        writeln!(out, "{text}")?;
                    }
                }
                Err(e) => writeln!(out, "error: {e}")?,
            }
        }
        if prompt {
            write!(out, "> ")?;
            out.flush()?;
        }
    }
    Ok(())
}

fn labelled(session: &Session, rows: Vec<(String, String)>) -> String {
    if session.branches().len() == 1 {
        return rows.into_iter().map(|(_, s)| s).collect();
    }
    rows.into_iter()
        .map(|(b, s)| format!("[{b}] {s}"))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Executes one line, returning the text to show.
pub fn command(session: &mut Session, line: &str) -> Result<String, SessionError> {
    let (head, rest) = match line.split_once(char::is_whitespace) {
        Some((h, r)) => (h, r.trim()),
        None => (line, ""),
    };
    match head {
        ":help" | ":h" => Ok(HELP.to_string()),
        ":t" => {
            let rows = session.infer(rest, Emit::Surface)?;
            Ok(labelled(
                session,
                rows.into_iter().map(|(b, ty, _)| (b, ty)).collect(),
            ))
        }
        ":nf" => {
            let rows = session.infer(rest, Emit::Surface)?;
            Ok(labelled(
                session,
                rows.into_iter().map(|(b, _, nf)| (b, nf)).collect(),
            ))
        }
        ":eq" => {
            let names: Vec<&str> = rest.split_whitespace().collect();
            let [a, b] = names[..] else {
                return Err(SessionError::Unknown(
                    ":eq takes two definition names".into(),
                ));
            };
            Ok(if session.equal(a, b)? {
                "EQUAL"
            } else {
                "DISTINCT"
            }
            .to_string())
        }
        ":cof" => {
            let (hyp, goal) = parse::parse_sequent(rest)?;
            Ok(if session.entails(&hyp, &goal)? {
                "ENTAILED"
            } else {
                "NOT ENTAILED"
            }
            .to_string())
        }
        _ if head.starts_with(':') => Err(SessionError::Unknown(format!("command {head}"))),
        _ if parse::is_decl(line) => {
            let d = parse::parse_decl(line)?;
            session.declare(line, &d)?;
            Ok(String::new())
        }
        _ => command(session, &format!(":nf {line}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn transcript(input: &str) -> String {
        let mut out = Vec::new();
        run(input.as_bytes(), &mut out, false).unwrap();
        String::from_utf8(out).unwrap()
    }

    #[test]
    fn answers_queries() {
        let out = transcript(
            "var f : S1 -> S1\n\
             :t f\n\
             :nf f\n\
             def a := (base : S1)\n\
             def b : S1 := hcom 0 0 [0 = 1] S1 (i. [i = 0 -> base])\n\
             :eq a b\n\
             :cof i = 0 |- i = 0 \\/ i = 1\n\
             :q\n\
             :t base\n",
        );
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines, ["(x : S1) -> S1", "\\x -> f x", "EQUAL", "ENTAILED"]);
    }

    #[test]
    fn reports_errors_and_keeps_going() {
        let out = transcript(":t nope\n:nf (base\n:t loop 0\n");
        let lines: Vec<&str> = out.lines().collect();
        assert!(lines[0].starts_with("error:"), "{out}");
        assert!(lines[1].starts_with("error: parse error"), "{out}");
        assert_eq!(lines[2], "S1");
    }

    #[test]
    fn assumptions_split_the_session() {
        let out = transcript("dim i\nassume i = 0 \\/ i = 1\n:nf loop i\n");
        assert_eq!(out.lines().count(), 2, "{out}");
    }
}
