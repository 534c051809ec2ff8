//! Binary words `w` against unary words `1^n` with `bin(n) = 1w`.
//!
//! Forward, sets over the positions of `w` become numbers below `2^|w|`
//! read most significant bit first. Backward, numbers below `n` become sets
//! over the positions of `bin(n)`.

use std::collections::BTreeMap;

use crate::algebra::{LanguageSpec, Languages};
use crate::alphabet::Alphabet;
use crate::logic::{
    and, bit, exists, exists_so, forall, iff, implies, letter, lt, member, not, or, plus, Formula, Fresh,
    InstanceOrder, Structure, Term,
};

use super::arith::{size_bit, succ};
use super::{
    require_neutral_last, StructureMapper, StructureSpace, TranslateError, TranslateParams, Translated, Translation,
};

/// `n` in binary, most significant bit first, without leading zeros.
pub fn binary_of(n: usize) -> String {
    format!("{n:b}")
}

/// `tally(L) = {1^n : bin(n) ∈ 1L}` for a language over the letters 1 and 0.
#[derive(Debug, Clone)]
pub struct TallyLanguage {
    spec: LanguageSpec,
}

impl TallyLanguage {
    pub fn describe(&self) -> String {
        format!(
            "tally({}) = {{1^n : bin(n) = 1w, w in {}}}",
            self.spec.name(),
            self.spec.name()
        )
    }

    /// Whether `1^n` belongs to the tally language. The empty word is never
    /// a member of `L` here, so `n <= 1` is rejected.
    pub fn member(&self, n: usize) -> Result<bool, TranslateError> {
        if n <= 1 {
            return Ok(false);
        }
        Ok(self.spec.member_text(&binary_of(n)[1..])?)
    }
}

pub fn tally_of(spec: &LanguageSpec) -> Result<TallyLanguage, TranslateError> {
    let a = spec.alphabet();
    if a.len() != 2 || !a.contains('0') || !a.contains('1') {
        return Err(TranslateError::FragmentViolation(format!(
            "tally needs a language over the letters 1 and 0, {} uses ({a})",
            spec.name()
        )));
    }
    Ok(TallyLanguage { spec: spec.clone() })
}

fn binary_alphabet() -> Alphabet {
    Alphabet::parse("1,0").expect("binary alphabet")
}

/// `1^n ↦ bin(n)` over (1,0).
#[derive(Debug, Clone, Copy, Default)]
pub struct UnaryToBinary;

impl StructureMapper for UnaryToBinary {
    fn describe(&self) -> String {
        "1^n to bin(n)".into()
    }

    fn map(&self, s: &Structure) -> Result<Structure, TranslateError> {
        if s.size() == 0 {
            return Err(TranslateError::BadStructure("bin(0) is undefined".into()));
        }
        Ok(Structure::from_string(&binary_alphabet(), &binary_of(s.size()))?)
    }
}

/// `w ↦ 1^n` with `bin(n) = 1w`.
#[derive(Debug, Clone, Copy, Default)]
pub struct BinaryToUnary;

impl StructureMapper for BinaryToUnary {
    fn describe(&self) -> String {
        "w to 1^n with bin(n) = 1w".into()
    }

    fn map(&self, s: &Structure) -> Result<Structure, TranslateError> {
        let text = format!("1{}", s.text());
        if text.len() > 24 {
            return Err(TranslateError::CapExceeded(format!("unary word for 1{}", s.text())));
        }
        let n = usize::from_str_radix(&text, 2)
            .map_err(|_| TranslateError::BadStructure(format!("'{}' is not a binary word", s.text())))?;
        Ok(Structure::from_string(&Alphabet::parse("1")?, &"1".repeat(n))?)
    }
}

/// A number given by its bits at word positions, most significant first.
#[derive(Debug, Clone)]
pub(crate) enum Bits {
    Set(String),
    Zero,
    Ones,
    /// The positions carrying a letter.
    Letter(char),
    /// `bin(n) - 1` on a word `bin(n)` over (1,0).
    Pred,
}

impl Bits {
    pub(crate) fn at(&self, z: Term, fresh: &mut Fresh) -> Formula {
        match self {
            Bits::Set(x) => member(x.clone(), vec![z]),
            Bits::Zero => Formula::False,
            Bits::Ones => Formula::True,
            Bits::Letter(c) => letter(*c, z),
            Bits::Pred => {
                let u = fresh.next("u");
                iff(
                    letter('1', z.clone()),
                    exists(u.clone(), and([lt(z, Term::var(u.clone())), letter('1', Term::var(u))])),
                )
            }
        }
    }
}

pub(crate) fn bits_eq(a: &Bits, b: &Bits, fresh: &mut Fresh) -> Formula {
    let z = fresh.next("z");
    let zv = Term::var(z.clone());
    forall(z, iff(a.at(zv.clone(), fresh), b.at(zv, fresh)))
}

pub(crate) fn bits_lt(a: &Bits, b: &Bits, fresh: &mut Fresh) -> Formula {
    let z = fresh.next("z");
    let u = fresh.next("u");
    let (zv, uv) = (Term::var(z.clone()), Term::var(u.clone()));
    let agree_before = forall(
        u,
        implies(
            lt(uv.clone(), zv.clone()),
            iff(a.at(uv.clone(), fresh), b.at(uv, fresh)),
        ),
    );
    exists(z, and([not(a.at(zv.clone(), fresh)), b.at(zv, fresh), agree_before]))
}

/// A carry leaves position `u` towards the positions before `above`.
fn carry_from(a: &Bits, b: &Bits, above: Option<&Term>, fresh: &mut Fresh) -> Formula {
    let u = fresh.next("u");
    let v = fresh.next("v");
    let (uv, vv) = (Term::var(u.clone()), Term::var(v.clone()));
    let between = match above {
        Some(z) => and([lt(z.clone(), vv.clone()), lt(vv.clone(), uv.clone())]),
        None => lt(vv.clone(), uv.clone()),
    };
    let mut parts = Vec::new();
    if let Some(z) = above {
        parts.push(lt(z.clone(), uv.clone()));
    }
    parts.push(a.at(uv.clone(), fresh));
    parts.push(b.at(uv, fresh));
    parts.push(forall(
        v,
        implies(between, or([a.at(vv.clone(), fresh), b.at(vv, fresh)])),
    ));
    exists(u, and(parts))
}

/// `a + b = c` by carry lookahead, with no carry out of the first position.
pub(crate) fn bits_plus(a: &Bits, b: &Bits, c: &Bits, fresh: &mut Fresh) -> Formula {
    let z = fresh.next("z");
    let zv = Term::var(z.clone());
    let carry = carry_from(a, b, Some(&zv), fresh);
    let sum = forall(
        z,
        iff(
            c.at(zv.clone(), fresh),
            iff(a.at(zv.clone(), fresh), iff(b.at(zv, fresh), carry)),
        ),
    );
    let overflow = carry_from(a, b, None, fresh);
    and([sum, not(overflow)])
}

/// `value(X) < value(Y)` for set variables read most significant first.
pub fn set_lt(x: &str, y: &str) -> Formula {
    let mut fresh = Fresh::new([x, y].iter().map(|s| s.to_string()).collect());
    bits_lt(&Bits::Set(x.into()), &Bits::Set(y.into()), &mut fresh)
}

/// `value(X) + value(Y) = value(Z)` for set variables read most significant first.
pub fn set_plus(x: &str, y: &str, z: &str) -> Formula {
    let mut fresh = Fresh::new([x, y, z].iter().map(|s| s.to_string()).collect());
    bits_plus(
        &Bits::Set(x.into()),
        &Bits::Set(y.into()),
        &Bits::Set(z.into()),
        &mut fresh,
    )
}

fn check_fragment(f: &Formula, name: &str) -> Result<(), TranslateError> {
    let v = crate::logic::fragment_check(f, name)?;
    if v.ok {
        Ok(())
    } else {
        Err(TranslateError::FragmentViolation(v.diagnostic.unwrap_or_default()))
    }
}

fn check_languages(f: &Formula, langs: &Languages) -> Result<(), TranslateError> {
    let mut result = Ok(());
    f.walk(&mut |g| {
        if let Formula::Lind { lang, .. } | Formula::LindSo { lang, .. } = g {
            if result.is_ok() {
                result = require_neutral_last(langs, lang);
            }
        }
    });
    result
}

struct Forward {
    fresh: Fresh,
    mv: String,
    m1: String,
    sets: BTreeMap<String, String>,
}

impl Forward {
    fn term(&self, t: &Term) -> Result<Term, TranslateError> {
        match t {
            Term::Max => Ok(Term::var(self.m1.clone())),
            Term::Const(c) => Err(TranslateError::FragmentViolation(format!("constant {c}"))),
            other => Ok(other.clone()),
        }
    }

    fn number(&self, x: &str) -> Result<Term, TranslateError> {
        self.sets
            .get(x)
            .map(|v| Term::var(v.clone()))
            .ok_or_else(|| TranslateError::FragmentViolation(format!("free relation variable {x}")))
    }

    /// Bit of `value` holding position `t` of `w`.
    fn bit_at(&mut self, t: Term, value: Option<Term>) -> Formula {
        let j = self.fresh.next("j");
        let jv = Term::var(j.clone());
        let b = match value {
            Some(v) => bit(v, jv.clone()),
            None => size_bit(jv.clone(), &mut self.fresh),
        };
        exists(j, and([plus(t, jv, Term::var(self.m1.clone())), b]))
    }

    fn chi(&mut self, y: &str) -> Formula {
        let i = self.fresh.next("i");
        let iv = Term::var(i.clone());
        forall(
            i,
            implies(bit(Term::var(y), iv.clone()), lt(iv, Term::var(self.mv.clone()))),
        )
    }

    fn bind(&mut self, sets: &[String]) -> (Vec<String>, Vec<Option<String>>) {
        let numbers: Vec<String> = sets.iter().map(|_| self.fresh.next("y")).collect();
        let saved = sets
            .iter()
            .zip(&numbers)
            .map(|(s, y)| self.sets.insert(s.clone(), y.clone()))
            .collect();
        (numbers, saved)
    }

    fn unbind(&mut self, sets: &[String], saved: Vec<Option<String>>) {
        for (s, old) in sets.iter().zip(saved) {
            match old {
                Some(o) => self.sets.insert(s.clone(), o),
                None => self.sets.remove(s),
            };
        }
    }

    fn formula(&mut self, f: &Formula) -> Result<Formula, TranslateError> {
        Ok(match f {
            Formula::True | Formula::False => f.clone(),
            Formula::Eq(a, b) => Formula::Eq(self.term(a)?, self.term(b)?),
            Formula::Lt(a, b) => Formula::Lt(self.term(a)?, self.term(b)?),
            Formula::Bit(a, b) => Formula::Bit(self.term(a)?, self.term(b)?),
            Formula::Plus(a, b, c) => Formula::Plus(self.term(a)?, self.term(b)?, self.term(c)?),
            Formula::Times(a, b, c) => Formula::Times(self.term(a)?, self.term(b)?, self.term(c)?),
            Formula::Letter(c, t) => {
                let t = self.term(t)?;
                match c {
                    '1' => self.bit_at(t, None),
                    '0' => not(self.bit_at(t, None)),
                    other => {
                        return Err(TranslateError::FragmentViolation(format!(
                            "letter {other} outside the alphabet (1,0)"
                        )))
                    }
                }
            }
            Formula::In(x, ts) => {
                let [t] = ts.as_slice() else {
                    return Err(TranslateError::NonMonadicNode(x.clone()));
                };
                let (t, y) = (self.term(t)?, self.number(x)?);
                self.bit_at(t, Some(y))
            }
            Formula::SetTimes(x, y, z) => Formula::Times(self.number(x)?, self.number(y)?, self.number(z)?),
            Formula::Not(a) => not(self.formula(a)?),
            Formula::And(fs) => and(fs.iter().map(|g| self.formula(g)).collect::<Result<Vec<_>, _>>()?),
            Formula::Or(fs) => or(fs.iter().map(|g| self.formula(g)).collect::<Result<Vec<_>, _>>()?),
            Formula::Implies(a, b) => implies(self.formula(a)?, self.formula(b)?),
            Formula::Iff(a, b) => iff(self.formula(a)?, self.formula(b)?),
            Formula::Exists(v, b) => {
                let bound = lt(Term::var(v.clone()), Term::var(self.mv.clone()));
                exists(v.clone(), and([bound, self.formula(b)?]))
            }
            Formula::Forall(v, b) => {
                let bound = lt(Term::var(v.clone()), Term::var(self.mv.clone()));
                forall(v.clone(), implies(bound, self.formula(b)?))
            }
            Formula::ExistsSo { var, arity, body } => {
                if *arity != 1 {
                    return Err(TranslateError::NonMonadicNode(var.clone()));
                }
                let names = std::slice::from_ref(var);
                let (ys, saved) = self.bind(names);
                let body = self.formula(body);
                self.unbind(names, saved);
                let chi = self.chi(&ys[0]);
                exists(ys[0].clone(), and([chi, body?]))
            }
            Formula::LindSo {
                lang,
                order: InstanceOrder::Concatenated,
                arity: 1,
                vars,
                args,
            } => {
                let (ys, saved) = self.bind(vars);
                let args: Result<Vec<Formula>, _> = args.iter().map(|a| self.formula(a)).collect();
                self.unbind(vars, saved);
                let guards: Vec<Formula> = ys.iter().map(|y| self.chi(y)).collect();
                Formula::Lind {
                    lang: lang.clone(),
                    vars: ys,
                    args: args?
                        .into_iter()
                        .map(|a| {
                            let mut parts = guards.clone();
                            parts.push(a);
                            and(parts)
                        })
                        .collect(),
                }
            }
            other => return Err(TranslateError::FragmentViolation(format!("unsupported node {other}"))),
        })
    }
}

/// Translates a sentence over binary words into one over unary words with
/// `w ⊨ φ` iff `1^n ⊨ φ*` for `bin(n) = 1w`. Needs `|w| >= 1`.
pub fn tally_fwd(f: &Formula, langs: &Languages) -> Result<Formula, TranslateError> {
    check_fragment(f, "SOM(Qstar,+,x)")?;
    check_languages(f, langs)?;
    let mut fresh = Fresh::avoiding(&[f]);
    let mv = fresh.next("mv");
    let m1 = fresh.next("m");
    let mut fw = Forward {
        fresh,
        mv: mv.clone(),
        m1: m1.clone(),
        sets: BTreeMap::new(),
    };
    let body = fw.formula(f)?;
    let fresh = &mut fw.fresh;
    let u = fresh.next("u");
    let top = and([
        size_bit(Term::var(mv.clone()), fresh),
        forall(
            u.clone(),
            implies(
                lt(Term::var(mv.clone()), Term::var(u.clone())),
                not(size_bit(Term::var(u), fresh)),
            ),
        ),
    ]);
    let pred = succ(Term::var(m1.clone()), Term::var(mv.clone()), fresh);
    Ok(exists(mv, and([top, exists(m1, and([pred, body]))])))
}

struct Backward {
    fresh: Fresh,
    sets: BTreeMap<String, String>,
}

impl Backward {
    fn bits(&self, t: &Term) -> Result<Bits, TranslateError> {
        match t {
            Term::Min => Ok(Bits::Zero),
            Term::Max => Ok(Bits::Pred),
            Term::Var(v) => self
                .sets
                .get(v)
                .map(|s| Bits::Set(s.clone()))
                .ok_or_else(|| TranslateError::FragmentViolation(format!("free variable {v}"))),
            Term::Const(c) => Err(TranslateError::FragmentViolation(format!("constant {c}"))),
        }
    }

    fn delta(&mut self, x: &str) -> Formula {
        bits_lt(&Bits::Set(x.into()), &Bits::Letter('1'), &mut self.fresh)
    }

    fn bind(&mut self, vars: &[String]) -> (Vec<String>, Vec<Option<String>>) {
        let sets: Vec<String> = vars.iter().map(|_| self.fresh.next("X")).collect();
        let saved = vars
            .iter()
            .zip(&sets)
            .map(|(v, s)| self.sets.insert(v.clone(), s.clone()))
            .collect();
        (sets, saved)
    }

    fn unbind(&mut self, vars: &[String], saved: Vec<Option<String>>) {
        for (v, old) in vars.iter().zip(saved) {
            match old {
                Some(o) => self.sets.insert(v.clone(), o),
                None => self.sets.remove(v),
            };
        }
    }

    /// A set variable holding the value of `t`, with any witness needed.
    fn as_set(&mut self, t: &Term) -> Result<(String, Option<Formula>), TranslateError> {
        match self.bits(t)? {
            Bits::Set(s) => Ok((s, None)),
            other => {
                let s = self.fresh.next("S");
                let def = bits_eq(&Bits::Set(s.clone()), &other, &mut self.fresh);
                Ok((s, Some(def)))
            }
        }
    }

    fn formula(&mut self, f: &Formula) -> Result<Formula, TranslateError> {
        Ok(match f {
            Formula::True | Formula::False => f.clone(),
            Formula::Eq(a, b) => {
                let (a, b) = (self.bits(a)?, self.bits(b)?);
                bits_eq(&a, &b, &mut self.fresh)
            }
            Formula::Lt(a, b) => {
                let (a, b) = (self.bits(a)?, self.bits(b)?);
                bits_lt(&a, &b, &mut self.fresh)
            }
            Formula::Plus(a, b, c) => {
                let (a, b, c) = (self.bits(a)?, self.bits(b)?, self.bits(c)?);
                bits_plus(&a, &b, &c, &mut self.fresh)
            }
            Formula::Times(a, b, c) => {
                let mut defs = Vec::new();
                let mut names = Vec::new();
                for t in [a, b, c] {
                    let (s, def) = self.as_set(t)?;
                    names.push(s.clone());
                    defs.push((s, def));
                }
                let mut out = Formula::SetTimes(names[0].clone(), names[1].clone(), names[2].clone());
                for (s, def) in defs.into_iter().rev() {
                    if let Some(d) = def {
                        out = exists_so(s, 1, and([d, out]));
                    }
                }
                out
            }
            Formula::Letter(c, t) => {
                self.bits(t)?;
                if *c == '1' {
                    Formula::True
                } else {
                    Formula::False
                }
            }
            Formula::Not(a) => not(self.formula(a)?),
            Formula::And(fs) => and(fs.iter().map(|g| self.formula(g)).collect::<Result<Vec<_>, _>>()?),
            Formula::Or(fs) => or(fs.iter().map(|g| self.formula(g)).collect::<Result<Vec<_>, _>>()?),
            Formula::Implies(a, b) => implies(self.formula(a)?, self.formula(b)?),
            Formula::Iff(a, b) => iff(self.formula(a)?, self.formula(b)?),
            Formula::Exists(v, b) | Formula::Forall(v, b) => {
                let names = std::slice::from_ref(v);
                let (xs, saved) = self.bind(names);
                let body = self.formula(b);
                self.unbind(names, saved);
                let delta = self.delta(&xs[0]);
                if matches!(f, Formula::Exists(..)) {
                    exists_so(xs[0].clone(), 1, and([delta, body?]))
                } else {
                    not(exists_so(xs[0].clone(), 1, and([delta, not(body?)])))
                }
            }
            Formula::Lind { lang, vars, args } => {
                let (xs, saved) = self.bind(vars);
                let args: Result<Vec<Formula>, _> = args.iter().map(|a| self.formula(a)).collect();
                self.unbind(vars, saved);
                let guards: Vec<Formula> = xs.iter().map(|x| self.delta(x)).collect();
                Formula::LindSo {
                    lang: lang.clone(),
                    order: InstanceOrder::Concatenated,
                    arity: 1,
                    vars: xs,
                    args: args?
                        .into_iter()
                        .map(|a| {
                            let mut parts = guards.clone();
                            parts.push(a);
                            and(parts)
                        })
                        .collect(),
                }
            }
            Formula::Bit(..) => return Err(TranslateError::FragmentViolation("bit has no backward rule".into())),
            other => return Err(TranslateError::FragmentViolation(format!("unsupported node {other}"))),
        })
    }
}

/// Translates a sentence over unary words into one over binary words with
/// `bin(n) ⊨ φ'` iff `1^n ⊨ φ`. Products become set-arithmetic atoms.
pub fn tally_bwd(f: &Formula, langs: &Languages) -> Result<Formula, TranslateError> {
    check_fragment(f, "FO(Q,+,x)")?;
    check_languages(f, langs)?;
    let mut bw = Backward {
        fresh: Fresh::avoiding(&[f]),
        sets: BTreeMap::new(),
    };
    bw.formula(f)
}

pub(super) struct TallyFwd;

impl Translation for TallyFwd {
    fn name(&self) -> &'static str {
        "tally-fwd"
    }

    fn summary(&self) -> &'static str {
        "SOM(Qstar) over binary words to FO(Q,+,x) over unary words"
    }

    fn translate(
        &self,
        source: &Formula,
        langs: &Languages,
        params: &TranslateParams,
    ) -> Result<Translated, TranslateError> {
        Ok(Translated {
            target: tally_fwd(source, langs)?,
            space: StructureSpace::strings(binary_alphabet(), 1, params.max_n.unwrap_or(4)),
            mapper: Box::new(BinaryToUnary),
            reversed: false,
            notes: Vec::new(),
        })
    }
}

pub(super) struct TallyBwd;

impl Translation for TallyBwd {
    fn name(&self) -> &'static str {
        "tally-bwd"
    }

    fn summary(&self) -> &'static str {
        "FO(Q,+,x) over unary words to SOM(Qstar) over binary words"
    }

    fn translate(
        &self,
        source: &Formula,
        langs: &Languages,
        params: &TranslateParams,
    ) -> Result<Translated, TranslateError> {
        Ok(Translated {
            target: tally_bwd(source, langs)?,
            space: StructureSpace::unary(1, params.max_n.unwrap_or(16)),
            mapper: Box::new(UnaryToBinary),
            reversed: false,
            notes: Vec::new(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin;
    use crate::logic::{Assignment, Evaluator, Relation};
    use crate::translate::{check_equivalence, CheckOptions};

    fn code(bits: usize, width: usize) -> Relation {
        let members: Vec<usize> = (0..width).filter(|p| (bits >> (width - 1 - p)) & 1 == 1).collect();
        Relation::unary(width, &members)
    }

    #[test]
    fn tally_examples() {
        let t = tally_of(&builtin("Lexists").unwrap()).unwrap();
        assert!(t.member(5).unwrap());
        assert!(t.member(3).unwrap());
        assert!(!t.member(4).unwrap());
        assert!(!t.member(1).unwrap());
        assert_eq!(binary_of(6), "110");
        assert!(tally_of(&builtin("MajPad").unwrap()).is_err());
    }

    #[test]
    fn set_arithmetic_matches_integers() {
        let langs = Languages::empty();
        let ev = Evaluator::new(&langs);
        let lt_f = set_lt("X", "Y");
        let plus_f = set_plus("X", "Y", "Z");
        for width in 1..=3 {
            let s = Structure::from_string(&binary_alphabet(), &"1".repeat(width)).unwrap();
            let top = 1 << width;
            for x in 0..top {
                for y in 0..top {
                    let a = Assignment::new()
                        .set_relation("X", code(x, width))
                        .set_relation("Y", code(y, width));
                    assert_eq!(ev.eval(&s, &a, &lt_f).unwrap(), x < y);
                    for z in 0..top {
                        let a = a.clone().set_relation("Z", code(z, width));
                        assert_eq!(ev.eval(&s, &a, &plus_f).unwrap(), x + y == z, "{x}+{y}={z}");
                    }
                }
            }
        }
    }

    #[test]
    fn predecessor_bits() {
        let langs = Languages::empty();
        let ev = Evaluator::new(&langs);
        let f = bits_eq(&Bits::Set("X".into()), &Bits::Pred, &mut Fresh::new(Default::default()));
        for n in 1..40usize {
            let text = binary_of(n);
            let s = Structure::from_string(&binary_alphabet(), &text).unwrap();
            let a = Assignment::new().set_relation("X", code(n - 1, text.len()));
            assert!(ev.eval(&s, &a, &f).unwrap(), "n={n}");
        }
    }

    #[test]
    fn forward_example() {
        let langs = Languages::with_builtins();
        let ev = Evaluator::new(&langs);
        let f = exists("x", letter('1', Term::var("x")));
        let g = tally_fwd(&f, &langs).unwrap();
        let unary = BinaryToUnary
            .map(&Structure::from_string(&binary_alphabet(), "10").unwrap())
            .unwrap();
        assert_eq!(unary.size(), 6);
        assert!(ev.eval(&unary, &Assignment::new(), &g).unwrap());
        let r = check_equivalence(
            &ev,
            &f,
            &g,
            &StructureSpace::strings(binary_alphabet(), 1, 4),
            &BinaryToUnary,
            CheckOptions::default(),
        )
        .unwrap();
        assert!(r.is_equivalent(), "{r}");
    }

    #[test]
    fn backward_example() {
        let langs = Languages::with_builtins();
        let ev = Evaluator::new(&langs);
        let f = exists("x", exists("y", lt(Term::var("x"), Term::var("y"))));
        let g = tally_bwd(&f, &langs).unwrap();
        let r = check_equivalence(
            &ev,
            &f,
            &g,
            &StructureSpace::unary(1, 16),
            &UnaryToBinary,
            CheckOptions::default(),
        )
        .unwrap();
        assert!(r.is_equivalent(), "{r}");
        let bad = exists("x", bit(Term::var("x"), Term::Min));
        assert!(matches!(
            tally_bwd(&bad, &langs),
            Err(TranslateError::FragmentViolation(_))
        ));
    }
}
