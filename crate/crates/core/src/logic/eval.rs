use crate::algebra::{LanguageSpec, Languages};

use super::formula::{Formula, InstanceOrder, Term};
use super::instance::code_position;
use super::structure::{Assignment, Structure};
use super::LogicError;

/// Default bound on the number of instances a single quantifier may visit.
pub const DEFAULT_INSTANCE_CAP: u64 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalOptions {
    pub instance_cap: u64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            instance_cap: DEFAULT_INSTANCE_CAP,
        }
    }
}

/// Evaluates with the default options.
pub fn eval(
    langs: &Languages,
    structure: &Structure,
    assignment: &Assignment,
    formula: &Formula,
) -> Result<bool, LogicError> {
    Evaluator::new(langs).eval(structure, assignment, formula)
}

/// The word a Lindström node tests for membership, with the default options.
pub fn induced_word(
    langs: &Languages,
    structure: &Structure,
    assignment: &Assignment,
    node: &Formula,
) -> Result<Vec<usize>, LogicError> {
    Evaluator::new(langs).induced_word(structure, assignment, node)
}

/// Compiles formulas against a structure into slot-addressed nodes; all
/// static errors surface at compile time so the evaluation loop cannot fail.
#[derive(Debug, Clone, Copy)]
pub struct Evaluator<'l> {
    langs: &'l Languages,
    options: EvalOptions,
}

#[derive(Debug, Clone, Copy)]
enum T {
    Slot(usize),
    Val(usize),
}

#[derive(Debug)]
enum Node<'l> {
    Bool(bool),
    Eq(T, T),
    Lt(T, T),
    Letter(usize, T),
    In(usize, Vec<T>),
    Plus(T, T, T),
    Times(T, T, T),
    Bit(T, T),
    SetTimes(usize, usize, usize),
    Not(Box<Node<'l>>),
    And(Vec<Node<'l>>),
    Or(Vec<Node<'l>>),
    Implies(Box<Node<'l>>, Box<Node<'l>>),
    Iff(Box<Node<'l>>, Box<Node<'l>>),
    Exists(usize, Box<Node<'l>>),
    Forall(usize, Box<Node<'l>>),
    ExistsSo {
        slot: usize,
        tuples: usize,
        body: Box<Node<'l>>,
    },
    Lind {
        spec: &'l LanguageSpec,
        slots: Vec<usize>,
        args: Vec<Node<'l>>,
    },
    LindSo {
        spec: &'l LanguageSpec,
        order: InstanceOrder,
        slots: Vec<usize>,
        tuples: usize,
        args: Vec<Node<'l>>,
    },
}

#[derive(Debug, Clone, Copy)]
enum Binding {
    Fo(usize),
    So(usize, usize),
}

struct Compiler<'l, 's> {
    langs: &'l Languages,
    cap: u64,
    structure: &'s Structure,
    scope: Vec<(String, Binding)>,
    fo_slots: usize,
    so_sizes: Vec<usize>,
}

struct Env<'s> {
    n: usize,
    letters: &'s [usize],
    fo: Vec<usize>,
    so: Vec<Vec<bool>>,
}

fn checked_pow(base: usize, exp: usize) -> Option<u128> {
    (base as u128).checked_pow(exp as u32)
}

impl<'l, 's> Compiler<'l, 's> {
    fn lookup(&self, name: &str) -> Option<Binding> {
        self.scope.iter().rev().find(|(n, _)| n == name).map(|(_, b)| *b)
    }

    fn fo_slot(&mut self) -> usize {
        self.fo_slots += 1;
        self.fo_slots - 1
    }

    fn so_slot(&mut self, tuples: usize) -> usize {
        self.so_sizes.push(tuples);
        self.so_sizes.len() - 1
    }

    fn nonempty(&self) -> Result<(), LogicError> {
        if self.structure.size() == 0 {
            Err(LogicError::EmptyDomain)
        } else {
            Ok(())
        }
    }

    fn term(&self, t: &Term) -> Result<T, LogicError> {
        match t {
            Term::Var(v) => match self.lookup(v) {
                Some(Binding::Fo(s)) => Ok(T::Slot(s)),
                _ => Err(LogicError::UnboundVariable(v.clone())),
            },
            Term::Min => {
                self.nonempty()?;
                Ok(T::Val(0))
            }
            Term::Max => {
                self.nonempty()?;
                Ok(T::Val(self.structure.size() - 1))
            }
            Term::Const(c) => self
                .structure
                .constant(c)
                .map(T::Val)
                .ok_or_else(|| LogicError::UnknownConstant(c.clone())),
        }
    }

    fn so_var(&self, name: &str, arity: usize) -> Result<usize, LogicError> {
        match self.lookup(name) {
            Some(Binding::So(slot, a)) if a == arity => Ok(slot),
            Some(Binding::So(_, a)) => Err(LogicError::RelationArity {
                var: name.to_string(),
                expected: a,
                found: arity,
            }),
            _ => Err(LogicError::UnboundVariable(name.to_string())),
        }
    }

    fn check_cap(&self, needed: Option<u128>, describe: impl FnOnce() -> String) -> Result<(), LogicError> {
        match needed {
            Some(v) if v <= self.cap as u128 => Ok(()),
            _ => Err(LogicError::InstanceCapExceeded {
                needed: describe(),
                cap: self.cap,
            }),
        }
    }

    fn language(&self, name: &str, found: usize) -> Result<&'l LanguageSpec, LogicError> {
        let spec = self
            .langs
            .get(name)
            .ok_or_else(|| LogicError::UnknownLanguage(name.to_string()))?;
        let expected = spec.alphabet().len() - 1;
        if expected != found {
            return Err(LogicError::ArityMismatch {
                lang: name.to_string(),
                expected,
                found,
            });
        }
        Ok(spec)
    }

    fn distinct(vars: &[String]) -> Result<(), LogicError> {
        if vars.is_empty() {
            return Err(LogicError::EmptyTuple);
        }
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(LogicError::DuplicateBoundVariable(v.clone()));
            }
        }
        Ok(())
    }

    fn compile(&mut self, f: &Formula) -> Result<Node<'l>, LogicError> {
        let n = self.structure.size();
        Ok(match f {
            Formula::True => Node::Bool(true),
            Formula::False => Node::Bool(false),
            Formula::Eq(a, b) => Node::Eq(self.term(a)?, self.term(b)?),
            Formula::Lt(a, b) => Node::Lt(self.term(a)?, self.term(b)?),
            Formula::Letter(c, t) => {
                let a = self
                    .structure
                    .alphabet()
                    .index_of(*c)
                    .ok_or(LogicError::UnknownLetter(*c))?;
                Node::Letter(a, self.term(t)?)
            }
            Formula::In(x, ts) => {
                let slot = self.so_var(x, ts.len())?;
                let ts = ts.iter().map(|t| self.term(t)).collect::<Result<_, _>>()?;
                Node::In(slot, ts)
            }
            Formula::Plus(a, b, c) => Node::Plus(self.term(a)?, self.term(b)?, self.term(c)?),
            Formula::Times(a, b, c) => Node::Times(self.term(a)?, self.term(b)?, self.term(c)?),
            Formula::Bit(a, b) => Node::Bit(self.term(a)?, self.term(b)?),
            Formula::SetTimes(x, y, z) => {
                if n > 64 {
                    return Err(LogicError::SetArithmeticDomain(n));
                }
                Node::SetTimes(self.so_var(x, 1)?, self.so_var(y, 1)?, self.so_var(z, 1)?)
            }
            Formula::Not(a) => Node::Not(Box::new(self.compile(a)?)),
            Formula::And(fs) => Node::And(fs.iter().map(|g| self.compile(g)).collect::<Result<_, _>>()?),
            Formula::Or(fs) => Node::Or(fs.iter().map(|g| self.compile(g)).collect::<Result<_, _>>()?),
            Formula::Implies(a, b) => Node::Implies(Box::new(self.compile(a)?), Box::new(self.compile(b)?)),
            Formula::Iff(a, b) => Node::Iff(Box::new(self.compile(a)?), Box::new(self.compile(b)?)),
            Formula::Exists(v, body) | Formula::Forall(v, body) => {
                self.nonempty()?;
                let slot = self.fo_slot();
                self.scope.push((v.clone(), Binding::Fo(slot)));
                let body = self.compile(body);
                self.scope.pop();
                let body = Box::new(body?);
                if matches!(f, Formula::Exists(..)) {
                    Node::Exists(slot, body)
                } else {
                    Node::Forall(slot, body)
                }
            }
            Formula::ExistsSo { var, arity, body } => {
                self.nonempty()?;
                let tuples = checked_pow(n, *arity);
                self.check_cap(tuples.and_then(|t| 1u128.checked_shl(t.min(128) as u32)), || {
                    format!("2^({n}^{arity})")
                })?;
                let tuples = tuples.unwrap() as usize;
                let slot = self.so_slot(tuples);
                self.scope.push((var.clone(), Binding::So(slot, *arity)));
                let body = self.compile(body);
                self.scope.pop();
                Node::ExistsSo {
                    slot,
                    tuples,
                    body: Box::new(body?),
                }
            }
            Formula::Lind { lang, vars, args } => {
                self.nonempty()?;
                Self::distinct(vars)?;
                let spec = self.language(lang, args.len())?;
                let k = vars.len();
                self.check_cap(checked_pow(n, k), || format!("{n}^{k}"))?;
                let depth = self.scope.len();
                let mut slots = Vec::with_capacity(k);
                for v in vars {
                    let s = self.fo_slot();
                    slots.push(s);
                    self.scope.push((v.clone(), Binding::Fo(s)));
                }
                let args: Result<Vec<_>, _> = args.iter().map(|a| self.compile(a)).collect();
                self.scope.truncate(depth);
                Node::Lind {
                    spec,
                    slots,
                    args: args?,
                }
            }
            Formula::LindSo {
                lang,
                order,
                arity,
                vars,
                args,
            } => {
                self.nonempty()?;
                Self::distinct(vars)?;
                let spec = self.language(lang, args.len())?;
                let k = vars.len();
                let tuples = checked_pow(n, *arity);
                let bits = tuples.and_then(|t| t.checked_mul(k as u128));
                self.check_cap(bits.and_then(|b| 1u128.checked_shl(b.min(128) as u32)), || {
                    format!("2^({k}*{n}^{arity})")
                })?;
                let tuples = tuples.unwrap() as usize;
                let depth = self.scope.len();
                let mut slots = Vec::with_capacity(k);
                for v in vars {
                    let s = self.so_slot(tuples);
                    slots.push(s);
                    self.scope.push((v.clone(), Binding::So(s, *arity)));
                }
                let args: Result<Vec<_>, _> = args.iter().map(|a| self.compile(a)).collect();
                self.scope.truncate(depth);
                Node::LindSo {
                    spec,
                    order: *order,
                    slots,
                    tuples,
                    args: args?,
                }
            }
        })
    }
}

impl Env<'_> {
    #[inline]
    fn t(&self, t: T) -> usize {
        match t {
            T::Slot(s) => self.fo[s],
            T::Val(v) => v,
        }
    }

    fn set_value(&self, slot: usize) -> u128 {
        self.so[slot].iter().fold(0u128, |acc, &b| (acc << 1) | b as u128)
    }

    fn ev(&mut self, node: &Node) -> bool {
        match node {
            Node::Bool(b) => *b,
            Node::Eq(a, b) => self.t(*a) == self.t(*b),
            Node::Lt(a, b) => self.t(*a) < self.t(*b),
            Node::Letter(c, t) => self.letters[self.t(*t)] == *c,
            Node::In(slot, ts) => {
                let idx = ts.iter().fold(0usize, |acc, &t| acc * self.n + self.t(t));
                self.so[*slot][idx]
            }
            Node::Plus(a, b, c) => self.t(*a) + self.t(*b) == self.t(*c),
            Node::Times(a, b, c) => self.t(*a) * self.t(*b) == self.t(*c),
            Node::Bit(a, j) => {
                let j = self.t(*j);
                j < usize::BITS as usize && (self.t(*a) >> j) & 1 == 1
            }
            Node::SetTimes(x, y, z) => self.set_value(*x) * self.set_value(*y) == self.set_value(*z),
            Node::Not(a) => !self.ev(a),
            Node::And(fs) => fs.iter().all(|g| self.ev(g)),
            Node::Or(fs) => fs.iter().any(|g| self.ev(g)),
            Node::Implies(a, b) => !self.ev(a) || self.ev(b),
            Node::Iff(a, b) => self.ev(a) == self.ev(b),
            Node::Exists(slot, body) => (0..self.n).any(|v| {
                self.fo[*slot] = v;
                self.ev(body)
            }),
            Node::Forall(slot, body) => (0..self.n).all(|v| {
                self.fo[*slot] = v;
                self.ev(body)
            }),
            Node::ExistsSo { slot, tuples, body } => {
                let total = 1u64 << tuples;
                self.so[*slot].iter_mut().for_each(|b| *b = false);
                for r in 0..total {
                    if r > 0 {
                        self.advance(&[*slot], *tuples, InstanceOrder::Concatenated, r);
                    }
                    if self.ev(body) {
                        return true;
                    }
                }
                false
            }
            Node::Lind { spec, .. } | Node::LindSo { spec, .. } => {
                let mut acceptor = spec.acceptor();
                self.drive(node, &mut |letter| {
                    acceptor.push(letter);
                    acceptor.decided().is_none()
                });
                acceptor.accepts()
            }
        }
    }

    /// Moves the relations in `slots` from instance `r - 1` to instance `r`.
    fn advance(&mut self, slots: &[usize], tuples: usize, order: InstanceOrder, r: u64) {
        let k = slots.len();
        let bits = k * tuples;
        let mut changed = r ^ (r - 1);
        while changed != 0 {
            let b = changed.trailing_zeros() as usize;
            changed &= changed - 1;
            let p = bits - 1 - b;
            let (i, j) = match order {
                InstanceOrder::Interleaved => (p % k, p / k),
                InstanceOrder::Concatenated => (p / tuples, p % tuples),
            };
            debug_assert_eq!(code_position(order, i, j, k, tuples), p);
            self.so[slots[i]][j] = (r >> b) & 1 == 1;
        }
    }

    fn first_match(&mut self, args: &[Node]) -> usize {
        args.iter().position(|a| self.ev(a)).unwrap_or(args.len())
    }

    /// Feeds the node's induced word to `sink` until it returns `false`.
    fn drive(&mut self, node: &Node, sink: &mut dyn FnMut(usize) -> bool) {
        match node {
            Node::Lind { slots, args, .. } => {
                let k = slots.len();
                for &s in slots {
                    self.fo[s] = 0;
                }
                loop {
                    let letter = self.first_match(args);
                    if !sink(letter) {
                        return;
                    }
                    // odometer over k-tuples, last variable fastest
                    let mut i = k;
                    loop {
                        if i == 0 {
                            return;
                        }
                        i -= 1;
                        self.fo[slots[i]] += 1;
                        if self.fo[slots[i]] < self.n {
                            break;
                        }
                        self.fo[slots[i]] = 0;
                    }
                }
            }
            Node::LindSo {
                order,
                slots,
                tuples,
                args,
                ..
            } => {
                for &s in slots {
                    self.so[s].iter_mut().for_each(|b| *b = false);
                }
                let total = 1u64 << (slots.len() * tuples);
                for r in 0..total {
                    if r > 0 {
                        self.advance(slots, *tuples, *order, r);
                    }
                    let letter = self.first_match(args);
                    if !sink(letter) {
                        return;
                    }
                }
            }
            _ => unreachable!("drive called on a non-quantifier node"),
        }
    }
}

struct Program<'l, 's> {
    root: Node<'l>,
    env: Env<'s>,
}

impl<'l> Evaluator<'l> {
    pub fn new(langs: &'l Languages) -> Self {
        Evaluator {
            langs,
            options: EvalOptions::default(),
        }
    }

    pub fn with_options(langs: &'l Languages, options: EvalOptions) -> Self {
        Evaluator { langs, options }
    }

    pub fn languages(&self) -> &'l Languages {
        self.langs
    }

    pub fn options(&self) -> EvalOptions {
        self.options
    }

    fn compile<'s>(
        &self,
        structure: &'s Structure,
        assignment: &Assignment,
        formula: &Formula,
    ) -> Result<Program<'l, 's>, LogicError> {
        let n = structure.size();
        let mut c = Compiler {
            langs: self.langs,
            cap: self.options.instance_cap,
            structure,
            scope: Vec::new(),
            fo_slots: 0,
            so_sizes: Vec::new(),
        };
        let mut fo_init = Vec::new();
        let mut so_init = Vec::new();
        for (name, &v) in &assignment.first_order {
            if v < n {
                let s = c.fo_slot();
                fo_init.push((s, v));
                c.scope.push((name.clone(), Binding::Fo(s)));
            }
        }
        for (name, rel) in &assignment.second_order {
            if rel.domain() == n {
                let s = c.so_slot(rel.bits().len());
                so_init.push((s, rel.bits().to_vec()));
                c.scope.push((name.clone(), Binding::So(s, rel.arity())));
            }
        }
        let root = c.compile(formula)?;
        let mut env = Env {
            n,
            letters: structure.letters(),
            fo: vec![0; c.fo_slots],
            so: c.so_sizes.iter().map(|&t| vec![false; t]).collect(),
        };
        for (s, v) in fo_init {
            env.fo[s] = v;
        }
        for (s, bits) in so_init {
            env.so[s] = bits;
        }
        Ok(Program { root, env })
    }

    pub fn eval(&self, structure: &Structure, assignment: &Assignment, formula: &Formula) -> Result<bool, LogicError> {
        let mut p = self.compile(structure, assignment, formula)?;
        Ok(p.env.ev(&p.root))
    }

    /// The word over the quantifier language's alphabet that `node` tests.
    pub fn induced_word(
        &self,
        structure: &Structure,
        assignment: &Assignment,
        node: &Formula,
    ) -> Result<Vec<usize>, LogicError> {
        if !matches!(node, Formula::Lind { .. } | Formula::LindSo { .. }) {
            return Err(LogicError::NotLindstromNode);
        }
        let mut p = self.compile(structure, assignment, node)?;
        let mut word = Vec::new();
        p.env.drive(&p.root, &mut |letter| {
            word.push(letter);
            true
        });
        Ok(word)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::logic::formula::*;

    fn langs() -> Languages {
        Languages::with_builtins()
    }

    fn ab(text: &str) -> Structure {
        Structure::from_string(&Alphabet::parse("a,b").unwrap(), text).unwrap()
    }

    fn x() -> Term {
        Term::var("x")
    }

    fn lind(lang: &str, vars: &[&str], args: Vec<Formula>) -> Formula {
        Formula::Lind {
            lang: lang.into(),
            vars: vars.iter().map(|v| v.to_string()).collect(),
            args,
        }
    }

    fn lind_so(lang: &str, order: InstanceOrder, vars: &[&str], args: Vec<Formula>) -> Formula {
        Formula::LindSo {
            lang: lang.into(),
            order,
            arity: 1,
            vars: vars.iter().map(|v| v.to_string()).collect(),
            args,
        }
    }

    fn ev(s: &Structure, f: &Formula) -> bool {
        eval(&langs(), s, &Assignment::new(), f).unwrap()
    }

    #[test]
    fn lexists_behaves_as_exists() {
        let f = lind("Lexists", &["x"], vec![letter('a', x())]);
        assert!(ev(&ab("bab"), &f));
        assert!(!ev(&ab("bbb"), &f));
        let w = induced_word(&langs(), &ab("bab"), &Assignment::new(), &f).unwrap();
        assert_eq!(Alphabet::parse("1,0").unwrap().decode(&w), "010");
    }

    #[test]
    fn second_order_examples() {
        let body = implies(
            exists("x", member("X", vec![x()])),
            exists("x", and([member("X", vec![x()]), letter('a', x())])),
        );
        let f = lind_so("Lforall", InstanceOrder::Interleaved, &["X"], vec![body]);
        assert!(ev(&ab("aa"), &f));
        assert!(!ev(&ab("ab"), &f));

        let f = lind_so(
            "Maj",
            InstanceOrder::Concatenated,
            &["X"],
            vec![exists("x", member("X", vec![x()]))],
        );
        assert!(ev(&ab("aaa"), &f));
    }

    #[test]
    fn induced_word_shapes() {
        let f = lind_so(
            "Lexists",
            InstanceOrder::Interleaved,
            &["X"],
            vec![member("X", vec![Term::Min])],
        );
        let w = induced_word(&langs(), &ab("ab"), &Assignment::new(), &f).unwrap();
        assert_eq!(w.len(), 4);
        let f = lind("Lexists", &["x", "y"], vec![lt(x(), Term::var("y"))]);
        let w = induced_word(&langs(), &ab("abb"), &Assignment::new(), &f).unwrap();
        // (0,0),(0,1),(0,2),(1,0),...: x<y holds at (0,1),(0,2),(1,2)
        assert_eq!(Alphabet::parse("1,0").unwrap().decode(&w), "011001000");
    }

    #[test]
    fn static_errors() {
        let l = langs();
        let e = eval(&l, &ab("a"), &Assignment::new(), &letter('a', x()));
        assert_eq!(e, Err(LogicError::UnboundVariable("x".into())));
        let e = eval(&l, &ab(""), &Assignment::new(), &exists("x", Formula::True));
        assert_eq!(e, Err(LogicError::EmptyDomain));
        let e = eval(&l, &ab(""), &Assignment::new(), &eq(Term::Min, Term::Min));
        assert_eq!(e, Err(LogicError::EmptyDomain));
        assert_eq!(eval(&l, &ab(""), &Assignment::new(), &Formula::True), Ok(true));
        let e = eval(&l, &ab("a"), &Assignment::new(), &lind("Lexists", &["x"], vec![]));
        assert!(matches!(
            e,
            Err(LogicError::ArityMismatch {
                expected: 1,
                found: 0,
                ..
            })
        ));
        let big = lind_so("Lexists", InstanceOrder::Interleaved, &["X", "Y"], vec![Formula::True]);
        let s = ab("aaaaaaaaaaaaa");
        let e = Evaluator::with_options(&l, EvalOptions { instance_cap: 1 << 20 }).eval(&s, &Assignment::new(), &big);
        assert!(matches!(e, Err(LogicError::InstanceCapExceeded { .. })));
        let e = eval(&l, &ab("a"), &Assignment::new(), &letter('z', Term::Min));
        assert_eq!(e, Err(LogicError::UnknownLetter('z')));
        let dup = lind("Lexists", &["x", "x"], vec![Formula::True]);
        assert!(matches!(
            eval(&l, &ab("a"), &Assignment::new(), &dup),
            Err(LogicError::DuplicateBoundVariable(_))
        ));
    }

    #[test]
    fn free_variables_come_from_assignment() {
        let l = langs();
        let f = lind(
            "Lexists",
            &["x"],
            vec![and([lt(Term::var("y"), x()), letter('a', x())])],
        );
        let s = ab("aba");
        assert!(eval(&l, &s, &Assignment::new().set("y", 1), &f).unwrap());
        assert!(!eval(&l, &s, &Assignment::new().set("y", 2), &f).unwrap());
    }

    #[test]
    fn arithmetic_atoms() {
        let l = langs();
        let s = ab("aaaaaa");
        let a = Assignment::new().set("x", 2).set("y", 3).set("z", 5).set("w", 6 % 6);
        let t = |v: &str| Term::var(v);
        assert!(eval(&l, &s, &a, &plus(t("x"), t("y"), t("z"))).unwrap());
        assert!(!eval(&l, &s, &a, &times(t("x"), t("y"), t("z"))).unwrap());
        assert!(eval(&l, &s, &a, &bit(t("z"), t("w"))).unwrap());
        assert!(!eval(&l, &s, &a, &bit(t("x"), t("w"))).unwrap());
        // 3 + 3 = 6 lies outside {0..5}
        assert!(!eval(&l, &s, &a, &exists("u", plus(t("y"), t("y"), t("u")))).unwrap());
    }
}
