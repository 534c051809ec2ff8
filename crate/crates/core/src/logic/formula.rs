use std::collections::BTreeSet;
use std::fmt;

/// First-order terms: variables, the order endpoints, and named constants.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Min,
    Max,
    Const(String),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Term {
        Term::Const(name.into())
    }
}

/// How k-tuples of relations are serialised into instance codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InstanceOrder {
    /// Bits of all variables at tuple 0, then at tuple 1, ... (`Q1`).
    Interleaved,
    /// All bits of the first variable, then of the second, ... (`Qstar`).
    Concatenated,
}

impl InstanceOrder {
    pub fn keyword(self) -> &'static str {
        match self {
            InstanceOrder::Interleaved => "Q1",
            InstanceOrder::Concatenated => "Qstar",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Eq(Term, Term),
    Lt(Term, Term),
    Letter(char, Term),
    /// `X(t1, ..., tm)` for a second-order variable `X`.
    In(String, Vec<Term>),
    Plus(Term, Term, Term),
    Times(Term, Term, Term),
    Bit(Term, Term),
    /// `value(X) * value(Y) = value(Z)` for monadic `X`, `Y`, `Z`, each read as
    /// a binary number with position 0 most significant.
    SetTimes(String, String, String),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
    ExistsSo {
        var: String,
        arity: usize,
        body: Box<Formula>,
    },
    /// First-order Lindström quantifier over the tuple `vars`.
    Lind {
        lang: String,
        vars: Vec<String>,
        args: Vec<Formula>,
    },
    /// Second-order Lindström quantifier over relations of a common arity.
    LindSo {
        lang: String,
        order: InstanceOrder,
        arity: usize,
        vars: Vec<String>,
        args: Vec<Formula>,
    },
}

pub fn not(f: Formula) -> Formula {
    Formula::Not(Box::new(f))
}

pub fn and(fs: impl IntoIterator<Item = Formula>) -> Formula {
    Formula::And(fs.into_iter().collect())
}

pub fn or(fs: impl IntoIterator<Item = Formula>) -> Formula {
    Formula::Or(fs.into_iter().collect())
}

pub fn implies(a: Formula, b: Formula) -> Formula {
    Formula::Implies(Box::new(a), Box::new(b))
}

pub fn iff(a: Formula, b: Formula) -> Formula {
    Formula::Iff(Box::new(a), Box::new(b))
}

pub fn exists(var: impl Into<String>, body: Formula) -> Formula {
    Formula::Exists(var.into(), Box::new(body))
}

pub fn forall(var: impl Into<String>, body: Formula) -> Formula {
    Formula::Forall(var.into(), Box::new(body))
}

pub fn exists_so(var: impl Into<String>, arity: usize, body: Formula) -> Formula {
    Formula::ExistsSo {
        var: var.into(),
        arity,
        body: Box::new(body),
    }
}

pub fn letter(c: char, t: Term) -> Formula {
    Formula::Letter(c, t)
}

pub fn member(var: impl Into<String>, terms: Vec<Term>) -> Formula {
    Formula::In(var.into(), terms)
}

pub fn eq(a: Term, b: Term) -> Formula {
    Formula::Eq(a, b)
}

pub fn lt(a: Term, b: Term) -> Formula {
    Formula::Lt(a, b)
}

pub fn plus(a: Term, b: Term, c: Term) -> Formula {
    Formula::Plus(a, b, c)
}

pub fn times(a: Term, b: Term, c: Term) -> Formula {
    Formula::Times(a, b, c)
}

pub fn bit(a: Term, b: Term) -> Formula {
    Formula::Bit(a, b)
}

/// Free variables of a formula, split by order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FreeVars {
    pub first_order: BTreeSet<String>,
    /// Second-order variables with the arity of their first occurrence.
    pub second_order: Vec<(String, usize)>,
}

impl Formula {
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Not(f) => vec![f],
            Formula::And(fs) | Formula::Or(fs) => fs.iter().collect(),
            Formula::Implies(a, b) | Formula::Iff(a, b) => vec![a, b],
            Formula::Exists(_, b) | Formula::Forall(_, b) => vec![b],
            Formula::ExistsSo { body, .. } => vec![body],
            Formula::Lind { args, .. } | Formula::LindSo { args, .. } => args.iter().collect(),
            _ => Vec::new(),
        }
    }

    /// Rebuilds the node with each child replaced by `f(child)`.
    pub fn map_children(&self, f: &mut impl FnMut(&Formula) -> Formula) -> Formula {
        match self {
            Formula::Not(a) => Formula::Not(Box::new(f(a))),
            Formula::And(fs) => Formula::And(fs.iter().map(&mut *f).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(&mut *f).collect()),
            Formula::Implies(a, b) => Formula::Implies(Box::new(f(a)), Box::new(f(b))),
            Formula::Iff(a, b) => Formula::Iff(Box::new(f(a)), Box::new(f(b))),
            Formula::Exists(v, b) => Formula::Exists(v.clone(), Box::new(f(b))),
            Formula::Forall(v, b) => Formula::Forall(v.clone(), Box::new(f(b))),
            Formula::ExistsSo { var, arity, body } => Formula::ExistsSo {
                var: var.clone(),
                arity: *arity,
                body: Box::new(f(body)),
            },
            Formula::Lind { lang, vars, args } => Formula::Lind {
                lang: lang.clone(),
                vars: vars.clone(),
                args: args.iter().map(&mut *f).collect(),
            },
            Formula::LindSo {
                lang,
                order,
                arity,
                vars,
                args,
            } => Formula::LindSo {
                lang: lang.clone(),
                order: *order,
                arity: *arity,
                vars: vars.clone(),
                args: args.iter().map(&mut *f).collect(),
            },
            leaf => leaf.clone(),
        }
    }

    /// Top-down rewrite: where `f` returns `Some`, that replaces the node and
    /// the traversal does not descend further.
    pub fn rewrite(&self, f: &mut impl FnMut(&Formula) -> Option<Formula>) -> Formula {
        if let Some(g) = f(self) {
            return g;
        }
        self.map_children(&mut |c| c.rewrite(f))
    }

    /// Terms occurring directly in an atom.
    pub fn atom_terms(&self) -> Vec<&Term> {
        match self {
            Formula::Eq(a, b) | Formula::Lt(a, b) | Formula::Bit(a, b) => vec![a, b],
            Formula::Letter(_, t) => vec![t],
            Formula::In(_, ts) => ts.iter().collect(),
            Formula::Plus(a, b, c) | Formula::Times(a, b, c) => vec![a, b, c],
            _ => Vec::new(),
        }
    }

    pub fn is_atom(&self) -> bool {
        matches!(
            self,
            Formula::True
                | Formula::False
                | Formula::Eq(..)
                | Formula::Lt(..)
                | Formula::Letter(..)
                | Formula::In(..)
                | Formula::Plus(..)
                | Formula::Times(..)
                | Formula::Bit(..)
                | Formula::SetTimes(..)
        )
    }

    /// Visits every node, parents before children.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        for c in self.children() {
            c.walk(f);
        }
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.walk(&mut |_| n += 1);
        n
    }

    pub fn free_vars(&self) -> FreeVars {
        let mut out = FreeVars::default();
        let mut fo_bound = Vec::new();
        let mut so_bound = Vec::new();
        collect_free(self, &mut fo_bound, &mut so_bound, &mut out);
        out
    }

    pub fn is_sentence(&self) -> bool {
        let fv = self.free_vars();
        fv.first_order.is_empty() && fv.second_order.is_empty()
    }

    /// Every variable, constant and language name occurring anywhere.
    pub fn names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            for t in f.atom_terms() {
                if let Term::Var(v) | Term::Const(v) = t {
                    out.insert(v.clone());
                }
            }
            match f {
                Formula::In(x, _) => {
                    out.insert(x.clone());
                }
                Formula::SetTimes(x, y, z) => {
                    out.extend([x.clone(), y.clone(), z.clone()]);
                }
                Formula::Exists(v, _) | Formula::Forall(v, _) => {
                    out.insert(v.clone());
                }
                Formula::ExistsSo { var, .. } => {
                    out.insert(var.clone());
                }
                Formula::Lind { lang, vars, .. } | Formula::LindSo { lang, vars, .. } => {
                    out.insert(lang.clone());
                    out.extend(vars.iter().cloned());
                }
                _ => {}
            }
        });
        out
    }

    pub fn letters(&self) -> BTreeSet<char> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            if let Formula::Letter(c, _) = f {
                out.insert(*c);
            }
        });
        out
    }

    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            for t in f.atom_terms() {
                if let Term::Const(c) = t {
                    out.insert(c.clone());
                }
            }
        });
        out
    }
}

fn collect_free(f: &Formula, fo_bound: &mut Vec<String>, so_bound: &mut Vec<String>, out: &mut FreeVars) {
    for t in f.atom_terms() {
        if let Term::Var(v) = t {
            if !fo_bound.contains(v) {
                out.first_order.insert(v.clone());
            }
        }
    }
    let note_so = |name: &String, arity: usize, out: &mut FreeVars| {
        if !so_bound.contains(name) && !out.second_order.iter().any(|(n, _)| n == name) {
            out.second_order.push((name.clone(), arity));
        }
    };
    match f {
        Formula::In(x, ts) => note_so(x, ts.len(), out),
        Formula::SetTimes(x, y, z) => {
            for v in [x, y, z] {
                note_so(v, 1, out);
            }
        }
        Formula::Exists(v, b) | Formula::Forall(v, b) => {
            fo_bound.push(v.clone());
            collect_free(b, fo_bound, so_bound, out);
            fo_bound.pop();
        }
        Formula::ExistsSo { var, body, .. } => {
            so_bound.push(var.clone());
            collect_free(body, fo_bound, so_bound, out);
            so_bound.pop();
        }
        Formula::Lind { vars, args, .. } => {
            let depth = fo_bound.len();
            fo_bound.extend(vars.iter().cloned());
            for a in args {
                collect_free(a, fo_bound, so_bound, out);
            }
            fo_bound.truncate(depth);
        }
        Formula::LindSo { vars, args, .. } => {
            let depth = so_bound.len();
            so_bound.extend(vars.iter().cloned());
            for a in args {
                collect_free(a, fo_bound, so_bound, out);
            }
            so_bound.truncate(depth);
        }
        other => {
            for c in other.children() {
                collect_free(c, fo_bound, so_bound, out);
            }
        }
    }
}

/// Generates variable names that do not clash with a given set.
#[derive(Debug, Clone)]
pub struct Fresh {
    taken: BTreeSet<String>,
    counter: usize,
}

impl Fresh {
    pub fn new(taken: BTreeSet<String>) -> Self {
        Fresh { taken, counter: 0 }
    }

    pub fn avoiding(fs: &[&Formula]) -> Self {
        let mut taken = BTreeSet::new();
        for f in fs {
            taken.extend(f.names());
        }
        Fresh::new(taken)
    }

    pub fn reserve(&mut self, name: &str) {
        self.taken.insert(name.to_string());
    }

    /// A name starting with `base` followed by a number.
    pub fn next(&mut self, base: &str) -> String {
        loop {
            self.counter += 1;
            let name = format!("{base}{}", self.counter);
            if self.taken.insert(name.clone()) {
                return name;
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Min => write!(f, "min"),
            Term::Max => write!(f, "max"),
            Term::Const(c) => write!(f, "(const {c})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_variables() {
        let f = Formula::LindSo {
            lang: "Maj".into(),
            order: InstanceOrder::Concatenated,
            arity: 1,
            vars: vec!["X".into()],
            args: vec![and([
                exists("x", member("X", vec![Term::var("x")])),
                member("Y", vec![Term::var("y")]),
            ])],
        };
        let fv = f.free_vars();
        assert_eq!(fv.first_order, ["y".to_string()].into_iter().collect());
        assert_eq!(fv.second_order, vec![("Y".to_string(), 1)]);
        assert!(!f.is_sentence());
    }

    #[test]
    fn fresh_names_avoid_existing() {
        let f = exists("t1", eq(Term::var("t1"), Term::var("t2")));
        let mut fresh = Fresh::avoiding(&[&f]);
        assert_eq!(fresh.next("t"), "t3");
        assert_eq!(fresh.next("t"), "t4");
    }

    #[test]
    fn rewrite_replaces_atoms() {
        let f = and([letter('a', Term::Min), not(letter('b', Term::Max))]);
        let g = f.rewrite(&mut |node| match node {
            Formula::Letter(_, _) => Some(Formula::True),
            _ => None,
        });
        assert_eq!(g, and([Formula::True, not(Formula::True)]));
    }
}
