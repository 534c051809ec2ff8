//! S-expression surface syntax for formulas.
//!
//! ```text
//! (exists x F) (forall x F) (existsSO X F) (existsSO X m F)
//! (and F ...) (or F ...) (not F) (implies F G) (iff F G) true false
//! (= t t) (< t t) (letter a t) (in X t ...) (plus t t t) (times t t t)
//! (bit t t) (settimes X Y Z)
//! (Q lang (x ...) F ...) (Q1 lang m (X ...) F ...) (Qstar lang m (X ...) F ...)
//! ```
//! Terms are `min`, `max`, variable names and `(const c)`.

use std::fmt;

use thiserror::Error;

use crate::algebra::Languages;
use crate::logic::{Formula, InstanceOrder, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxErrorKind {
    #[error("{0}")]
    Malformed(String),
    #[error("unknown language '{0}'")]
    UnknownLanguage(String),
    #[error("language {lang} takes {expected} argument formulas, found {found}")]
    ArityMismatch {
        lang: String,
        expected: usize,
        found: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {kind}")]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub kind: SyntaxErrorKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    col: usize,
}

#[derive(Debug, Clone)]
enum Sexp {
    Atom(String, Pos),
    List(Vec<Sexp>, Pos),
}

impl Sexp {
    fn pos(&self) -> Pos {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) => *p,
        }
    }
}

fn malformed(pos: Pos, msg: impl Into<String>) -> SyntaxError {
    SyntaxError {
        line: pos.line,
        col: pos.col,
        kind: SyntaxErrorKind::Malformed(msg.into()),
    }
}

fn read(text: &str) -> Result<Vec<Sexp>, SyntaxError> {
    let mut stack: Vec<(Vec<Sexp>, Pos)> = vec![(Vec::new(), Pos { line: 1, col: 1 })];
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1, 1);
    while let Some(c) = chars.next() {
        let here = Pos { line, col };
        if c == '\n' {
            line += 1;
            col = 1;
            continue;
        }
        col += 1;
        match c {
            ';' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    chars.next();
                }
            }
            '(' => stack.push((Vec::new(), here)),
            ')' => {
                if stack.len() == 1 {
                    return Err(malformed(here, "unexpected ')'"));
                }
                let (items, start) = stack.pop().unwrap();
                stack.last_mut().unwrap().0.push(Sexp::List(items, start));
            }
            c if c.is_whitespace() => {}
            c => {
                let mut atom = String::from(c);
                while let Some(&d) = chars.peek() {
                    if d.is_whitespace() || d == '(' || d == ')' || d == ';' {
                        break;
                    }
                    atom.push(d);
                    chars.next();
                    col += 1;
                }
                stack.last_mut().unwrap().0.push(Sexp::Atom(atom, here));
            }
        }
    }
    if stack.len() > 1 {
        let (_, start) = stack.pop().unwrap();
        return Err(malformed(start, "unclosed '('"));
    }
    Ok(stack.pop().unwrap().0)
}

const RESERVED: [&str; 4] = ["min", "max", "true", "false"];

struct Parser<'l> {
    langs: Option<&'l Languages>,
}

impl Parser<'_> {
    fn name(&self, s: &Sexp, what: &str) -> Result<String, SyntaxError> {
        match s {
            Sexp::Atom(a, p) => {
                if RESERVED.contains(&a.as_str()) || a.chars().next().is_some_and(|c| c.is_ascii_digit()) {
                    Err(malformed(*p, format!("'{a}' cannot be used as a {what}")))
                } else {
                    Ok(a.clone())
                }
            }
            Sexp::List(_, p) => Err(malformed(*p, format!("expected a {what}, found a list"))),
        }
    }

    fn number(&self, s: &Sexp) -> Result<usize, SyntaxError> {
        match s {
            Sexp::Atom(a, p) => a
                .parse()
                .ok()
                .filter(|&m| m >= 1)
                .ok_or_else(|| malformed(*p, format!("expected a positive arity, found '{a}'"))),
            Sexp::List(_, p) => Err(malformed(*p, "expected a positive arity, found a list")),
        }
    }

    fn term(&self, s: &Sexp) -> Result<Term, SyntaxError> {
        match s {
            Sexp::Atom(a, _) if a == "min" => Ok(Term::Min),
            Sexp::Atom(a, _) if a == "max" => Ok(Term::Max),
            Sexp::Atom(..) => Ok(Term::Var(self.name(s, "variable")?)),
            Sexp::List(items, p) => match items.as_slice() {
                [Sexp::Atom(head, _), c] if head == "const" => Ok(Term::Const(self.name(c, "constant")?)),
                _ => Err(malformed(*p, "expected a term")),
            },
        }
    }

    fn names(&self, s: &Sexp, what: &str) -> Result<Vec<String>, SyntaxError> {
        match s {
            Sexp::List(items, p) => {
                if items.is_empty() {
                    return Err(malformed(*p, format!("empty {what} list")));
                }
                items.iter().map(|i| self.name(i, what)).collect()
            }
            Sexp::Atom(_, p) => Err(malformed(*p, format!("expected a parenthesised {what} list"))),
        }
    }

    fn language(&self, s: &Sexp, found: usize) -> Result<String, SyntaxError> {
        let lang = self.name(s, "language name")?;
        if let Some(langs) = self.langs {
            let p = s.pos();
            let spec = langs.get(&lang).ok_or(SyntaxError {
                line: p.line,
                col: p.col,
                kind: SyntaxErrorKind::UnknownLanguage(lang.clone()),
            })?;
            let expected = spec.alphabet().len() - 1;
            if expected != found {
                return Err(SyntaxError {
                    line: p.line,
                    col: p.col,
                    kind: SyntaxErrorKind::ArityMismatch { lang, expected, found },
                });
            }
        }
        Ok(lang)
    }

    fn formula(&self, s: &Sexp) -> Result<Formula, SyntaxError> {
        let (items, pos) = match s {
            Sexp::Atom(a, _) if a == "true" => return Ok(Formula::True),
            Sexp::Atom(a, _) if a == "false" => return Ok(Formula::False),
            Sexp::Atom(a, p) => return Err(malformed(*p, format!("expected a formula, found '{a}'"))),
            Sexp::List(items, p) => (items, *p),
        };
        let Some(Sexp::Atom(head, _)) = items.first() else {
            return Err(malformed(pos, "expected an operator"));
        };
        let rest = &items[1..];
        let want = |n: usize| {
            if rest.len() == n {
                Ok(())
            } else {
                Err(malformed(
                    pos,
                    format!("'{head}' takes {n} operands, found {}", rest.len()),
                ))
            }
        };
        let sub = |i: usize| self.formula(&rest[i]);
        let term = |i: usize| self.term(&rest[i]);
        Ok(match head.as_str() {
            "and" | "or" => {
                let fs = rest.iter().map(|r| self.formula(r)).collect::<Result<_, _>>()?;
                if head == "and" {
                    Formula::And(fs)
                } else {
                    Formula::Or(fs)
                }
            }
            "not" => {
                want(1)?;
                Formula::Not(Box::new(sub(0)?))
            }
            "implies" | "iff" => {
                want(2)?;
                let (a, b) = (Box::new(sub(0)?), Box::new(sub(1)?));
                if head == "implies" {
                    Formula::Implies(a, b)
                } else {
                    Formula::Iff(a, b)
                }
            }
            "exists" | "forall" => {
                want(2)?;
                let v = self.name(&rest[0], "variable")?;
                let body = Box::new(sub(1)?);
                if head == "exists" {
                    Formula::Exists(v, body)
                } else {
                    Formula::Forall(v, body)
                }
            }
            "existsSO" => {
                let (arity, body) = match rest.len() {
                    2 => (1, 1),
                    3 => (self.number(&rest[1])?, 2),
                    _ => {
                        return Err(malformed(
                            pos,
                            "'existsSO' takes a variable, an optional arity and a body",
                        ))
                    }
                };
                Formula::ExistsSo {
                    var: self.name(&rest[0], "variable")?,
                    arity,
                    body: Box::new(sub(body)?),
                }
            }
            "=" | "<" | "bit" => {
                want(2)?;
                let (a, b) = (term(0)?, term(1)?);
                match head.as_str() {
                    "=" => Formula::Eq(a, b),
                    "<" => Formula::Lt(a, b),
                    _ => Formula::Bit(a, b),
                }
            }
            "plus" | "times" => {
                want(3)?;
                let (a, b, c) = (term(0)?, term(1)?, term(2)?);
                if head == "plus" {
                    Formula::Plus(a, b, c)
                } else {
                    Formula::Times(a, b, c)
                }
            }
            "letter" => {
                want(2)?;
                let c = match &rest[0] {
                    Sexp::Atom(a, _) if a.chars().count() == 1 => a.chars().next().unwrap(),
                    other => return Err(malformed(other.pos(), "expected a single letter")),
                };
                Formula::Letter(c, term(1)?)
            }
            "in" => {
                if rest.len() < 2 {
                    return Err(malformed(pos, "'in' takes a variable and at least one term"));
                }
                Formula::In(
                    self.name(&rest[0], "variable")?,
                    rest[1..].iter().map(|t| self.term(t)).collect::<Result<_, _>>()?,
                )
            }
            "settimes" => {
                want(3)?;
                Formula::SetTimes(
                    self.name(&rest[0], "variable")?,
                    self.name(&rest[1], "variable")?,
                    self.name(&rest[2], "variable")?,
                )
            }
            "Q" => {
                if rest.len() < 2 {
                    return Err(malformed(pos, "'Q' takes a language and a variable list"));
                }
                let args: Vec<Formula> = rest[2..].iter().map(|r| self.formula(r)).collect::<Result<_, _>>()?;
                Formula::Lind {
                    lang: self.language(&rest[0], args.len())?,
                    vars: self.names(&rest[1], "variable")?,
                    args,
                }
            }
            "Q1" | "Qstar" => {
                if rest.len() < 3 {
                    return Err(malformed(
                        pos,
                        format!("'{head}' takes a language, an arity and a variable list"),
                    ));
                }
                let args: Vec<Formula> = rest[3..].iter().map(|r| self.formula(r)).collect::<Result<_, _>>()?;
                Formula::LindSo {
                    lang: self.language(&rest[0], args.len())?,
                    order: if head == "Q1" {
                        InstanceOrder::Interleaved
                    } else {
                        InstanceOrder::Concatenated
                    },
                    arity: self.number(&rest[1])?,
                    vars: self.names(&rest[2], "variable")?,
                    args,
                }
            }
            other => return Err(malformed(items[0].pos(), format!("unknown operator '{other}'"))),
        })
    }
}

fn single(text: &str) -> Result<Sexp, SyntaxError> {
    let mut items = read(text)?;
    match items.len() {
        1 => Ok(items.pop().unwrap()),
        0 => Err(malformed(Pos { line: 1, col: 1 }, "empty input")),
        _ => Err(malformed(items[1].pos(), "trailing input after formula")),
    }
}

/// Parses one formula, resolving language names and argument counts against
/// `langs`.
pub fn parse_formula(text: &str, langs: &Languages) -> Result<Formula, SyntaxError> {
    Parser { langs: Some(langs) }.formula(&single(text)?)
}

/// Parses one formula without checking language references.
pub fn parse_formula_unresolved(text: &str) -> Result<Formula, SyntaxError> {
    Parser { langs: None }.formula(&single(text)?)
}

fn write_list(f: &mut fmt::Formatter<'_>, head: &str, items: &[Formula]) -> fmt::Result {
    write!(f, "({head}")?;
    for i in items {
        write!(f, " {i}")?;
    }
    write!(f, ")")
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Eq(a, b) => write!(f, "(= {a} {b})"),
            Formula::Lt(a, b) => write!(f, "(< {a} {b})"),
            Formula::Bit(a, b) => write!(f, "(bit {a} {b})"),
            Formula::Letter(c, t) => write!(f, "(letter {c} {t})"),
            Formula::In(x, ts) => {
                write!(f, "(in {x}")?;
                for t in ts {
                    write!(f, " {t}")?;
                }
                write!(f, ")")
            }
            Formula::Plus(a, b, c) => write!(f, "(plus {a} {b} {c})"),
            Formula::Times(a, b, c) => write!(f, "(times {a} {b} {c})"),
            Formula::SetTimes(x, y, z) => write!(f, "(settimes {x} {y} {z})"),
            Formula::Not(a) => write!(f, "(not {a})"),
            Formula::And(fs) => write_list(f, "and", fs),
            Formula::Or(fs) => write_list(f, "or", fs),
            Formula::Implies(a, b) => write!(f, "(implies {a} {b})"),
            Formula::Iff(a, b) => write!(f, "(iff {a} {b})"),
            Formula::Exists(v, b) => write!(f, "(exists {v} {b})"),
            Formula::Forall(v, b) => write!(f, "(forall {v} {b})"),
            Formula::ExistsSo { var, arity: 1, body } => write!(f, "(existsSO {var} {body})"),
            Formula::ExistsSo { var, arity, body } => write!(f, "(existsSO {var} {arity} {body})"),
            Formula::Lind { lang, vars, args } => {
                write!(f, "(Q {lang} ({})", vars.join(" "))?;
                for a in args {
                    write!(f, " {a}")?;
                }
                write!(f, ")")
            }
            Formula::LindSo {
                lang,
                order,
                arity,
                vars,
                args,
            } => {
                write!(f, "({} {lang} {arity} ({})", order.keyword(), vars.join(" "))?;
                for a in args {
                    write!(f, " {a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::random::FormulaGen;

    fn langs() -> Languages {
        Languages::with_builtins()
    }

    #[test]
    fn examples() {
        let f = parse_formula("(Q Lexists (x) (letter a x))", &langs()).unwrap();
        assert!(matches!(&f, Formula::Lind { vars, .. } if vars.len() == 1));
        let g = parse_formula("(Qstar Maj 1 (X) (exists x (in X x)))", &langs()).unwrap();
        assert!(matches!(
            g,
            Formula::LindSo {
                order: InstanceOrder::Concatenated,
                arity: 1,
                ..
            }
        ));
        let err = parse_formula("(Q Lexists (x))", &langs()).unwrap_err();
        assert_eq!(
            err.kind,
            SyntaxErrorKind::ArityMismatch {
                lang: "Lexists".into(),
                expected: 1,
                found: 0
            }
        );
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_formula("(and\n  (letter a x)\n  (frob x))", &langs()).unwrap_err();
        assert_eq!((err.line, err.col), (3, 4));
        let err = parse_formula("(exists x", &langs()).unwrap_err();
        assert_eq!((err.line, err.col), (1, 1));
        let err = parse_formula("(Q Nope (x) true)", &langs()).unwrap_err();
        assert_eq!(err.kind, SyntaxErrorKind::UnknownLanguage("Nope".into()));
        assert_eq!(err.col, 4);
        assert!(parse_formula("true false", &langs()).is_err());
        assert!(parse_formula(")", &langs()).is_err());
        assert!(parse_formula("(exists min true)", &langs()).is_err());
    }

    #[test]
    fn comments_and_extensions() {
        let f = parse_formula(
            "; leading comment\n(existsSO Y 2 (and (in Y (const c1) max) (settimes A B C) (iff true false)))",
            &langs(),
        )
        .unwrap();
        assert_eq!(
            f.to_string(),
            "(existsSO Y 2 (and (in Y (const c1) max) (settimes A B C) (iff true false)))"
        );
    }

    #[test]
    fn round_trip_random() {
        let mut gen = FormulaGen::new(11, &['a', 'b']).with_relations(&["X"]).with_depth(5);
        for _ in 0..300 {
            let f = gen.formula(&["x"]);
            assert_eq!(parse_formula_unresolved(&f.to_string()).unwrap(), f);
        }
    }
}
