//! Words of length `n` as structures over constants with domain `2^n`:
//! constant `ci` is the number whose `n` bits, most significant first, mark
//! the positions carrying the `i`-th letter.

use std::collections::BTreeMap;

use crate::algebra::Languages;
use crate::alphabet::Alphabet;
use crate::logic::{
    and, bit, exists, exists_so, forall, iff, implies, not, or, plus, Formula, Fresh, InstanceOrder, Structure, Term,
};

use super::arith::top_bit;
use super::tally::{bits_eq, bits_lt, Bits};
use super::{StructureMapper, StructureSpace, TranslateError, TranslateParams, Translated, Translation};

pub const DEFAULT_EXPONENT_CAP: usize = 5;

/// `A ↦ A*`.
#[derive(Debug, Clone)]
pub struct ExpMapper {
    alphabet: Alphabet,
    names: Vec<String>,
    cap: usize,
}

impl ExpMapper {
    pub fn new(alphabet: Alphabet, names: Vec<String>, cap: usize) -> Result<Self, TranslateError> {
        if names.len() != alphabet.len() {
            return Err(TranslateError::NonConstantSignature(format!(
                "{} constants for {} letters",
                names.len(),
                alphabet.len()
            )));
        }
        Ok(ExpMapper { alphabet, names, cap })
    }
}

impl StructureMapper for ExpMapper {
    fn describe(&self) -> String {
        format!(
            "word over {} to constants {} on 2^n elements",
            self.alphabet,
            self.names.join(",")
        )
    }

    fn map(&self, s: &Structure) -> Result<Structure, TranslateError> {
        let n = s.size();
        if n > self.cap {
            return Err(TranslateError::ExponentCapExceeded { n, cap: self.cap });
        }
        let mut values = vec![0usize; self.names.len()];
        for (x, &a) in s.letters().iter().enumerate() {
            let c = self.alphabet.letter(a);
            let i = self
                .alphabet
                .index_of(c)
                .ok_or_else(|| TranslateError::BadStructure(format!("letter {c}")))?;
            values[i] |= 1 << (n - 1 - x);
        }
        Ok(Structure::with_constants(
            1 << n,
            self.names.iter().cloned().zip(values),
        ))
    }
}

struct Forward<'a> {
    alphabet: &'a Alphabet,
    names: &'a [String],
    fresh: Fresh,
    last: String,
    sets: BTreeMap<String, String>,
}

impl Forward<'_> {
    fn term(&self, t: &Term) -> Result<Term, TranslateError> {
        match t {
            Term::Max => Ok(Term::var(self.last.clone())),
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

    fn bit_at(&mut self, t: Term, value: Term) -> Formula {
        let p = self.fresh.next("p");
        let pv = Term::var(p.clone());
        exists(
            p,
            and([plus(t, pv.clone(), Term::var(self.last.clone())), bit(value, pv)]),
        )
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
                let i = self.alphabet.index_of(*c).ok_or_else(|| {
                    TranslateError::FragmentViolation(format!("letter {c} outside {}", self.alphabet))
                })?;
                let t = self.term(t)?;
                self.bit_at(t, Term::Const(self.names[i].clone()))
            }
            Formula::In(x, ts) => {
                let [t] = ts.as_slice() else {
                    return Err(TranslateError::NonMonadicNode(x.clone()));
                };
                let (t, v) = (self.term(t)?, self.number(x)?);
                self.bit_at(t, v)
            }
            Formula::SetTimes(x, y, z) => Formula::Times(self.number(x)?, self.number(y)?, self.number(z)?),
            Formula::Not(a) => not(self.formula(a)?),
            Formula::And(fs) => and(fs.iter().map(|g| self.formula(g)).collect::<Result<Vec<_>, _>>()?),
            Formula::Or(fs) => or(fs.iter().map(|g| self.formula(g)).collect::<Result<Vec<_>, _>>()?),
            Formula::Implies(a, b) => implies(self.formula(a)?, self.formula(b)?),
            Formula::Iff(a, b) => iff(self.formula(a)?, self.formula(b)?),
            Formula::Exists(v, b) => exists(v.clone(), and([bit(Term::Max, Term::var(v.clone())), self.formula(b)?])),
            Formula::Forall(v, b) => forall(
                v.clone(),
                implies(bit(Term::Max, Term::var(v.clone())), self.formula(b)?),
            ),
            Formula::ExistsSo { var, arity, body } => {
                if *arity != 1 {
                    return Err(TranslateError::NonMonadicNode(var.clone()));
                }
                let x = self.fresh.next("x");
                let old = self.sets.insert(var.clone(), x.clone());
                let body = self.formula(body);
                restore(&mut self.sets, var, old);
                exists(x, body?)
            }
            Formula::LindSo {
                lang,
                order: InstanceOrder::Concatenated,
                arity: 1,
                vars,
                args,
            } => {
                let xs: Vec<String> = vars.iter().map(|_| self.fresh.next("x")).collect();
                let olds: Vec<_> = vars
                    .iter()
                    .zip(&xs)
                    .map(|(v, x)| self.sets.insert(v.clone(), x.clone()))
                    .collect();
                let args: Result<Vec<Formula>, _> = args.iter().map(|a| self.formula(a)).collect();
                for (v, old) in vars.iter().zip(olds) {
                    restore(&mut self.sets, v, old);
                }
                Formula::Lind {
                    lang: lang.clone(),
                    vars: xs,
                    args: args?,
                }
            }
            other => return Err(TranslateError::FragmentViolation(format!("unsupported node {other}"))),
        })
    }
}

fn restore(map: &mut BTreeMap<String, String>, key: &str, old: Option<String>) {
    match old {
        Some(o) => map.insert(key.to_string(), o),
        None => map.remove(key),
    };
}

/// Translates a sentence over words on `alphabet` into one over the
/// constants `names` with `A ⊨ φ` iff `A* ⊨ φ*`. Sets become numbers below
/// `2^n`, positions the numbers below `n`.
pub fn exp_translate(f: &Formula, alphabet: &Alphabet, names: &[String]) -> Result<Formula, TranslateError> {
    let v = crate::logic::fragment_check(f, "SOM(Qstar,+,x)")?;
    if !v.ok {
        return Err(TranslateError::FragmentViolation(v.diagnostic.unwrap_or_default()));
    }
    if names.len() != alphabet.len() {
        return Err(TranslateError::NonConstantSignature(format!(
            "{} constants for {} letters",
            names.len(),
            alphabet.len()
        )));
    }
    let mut fresh = Fresh::avoiding(&[f]);
    for n in names {
        fresh.reserve(n);
    }
    let last = fresh.next("N");
    let mut fw = Forward {
        alphabet,
        names,
        fresh,
        last: last.clone(),
        sets: BTreeMap::new(),
    };
    let body = fw.formula(f)?;
    let top = top_bit(Term::Max, Term::var(last.clone()), &mut fw.fresh);
    Ok(exists(last, and([top, body])))
}

struct Reverse<'a> {
    alphabet: &'a Alphabet,
    names: &'a [String],
    fresh: Fresh,
    sets: BTreeMap<String, String>,
}

impl Reverse<'_> {
    fn bits(&self, t: &Term) -> Result<Bits, TranslateError> {
        match t {
            Term::Min => Ok(Bits::Zero),
            Term::Max => Ok(Bits::Ones),
            Term::Const(c) => {
                let i = self
                    .names
                    .iter()
                    .position(|n| n == c)
                    .ok_or_else(|| TranslateError::NonConstantSignature(format!("undeclared constant {c}")))?;
                Ok(Bits::Letter(self.alphabet.letter(i)))
            }
            Term::Var(v) => self
                .sets
                .get(v)
                .map(|s| Bits::Set(s.clone()))
                .ok_or_else(|| TranslateError::FragmentViolation(format!("free variable {v}"))),
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
            Formula::Not(a) => not(self.formula(a)?),
            Formula::And(fs) => and(fs.iter().map(|g| self.formula(g)).collect::<Result<Vec<_>, _>>()?),
            Formula::Or(fs) => or(fs.iter().map(|g| self.formula(g)).collect::<Result<Vec<_>, _>>()?),
            Formula::Implies(a, b) => implies(self.formula(a)?, self.formula(b)?),
            Formula::Iff(a, b) => iff(self.formula(a)?, self.formula(b)?),
            Formula::Exists(v, b) | Formula::Forall(v, b) => {
                let x = self.fresh.next("X");
                let old = self.sets.insert(v.clone(), x.clone());
                let body = self.formula(b);
                restore(&mut self.sets, v, old);
                if matches!(f, Formula::Exists(..)) {
                    exists_so(x, 1, body?)
                } else {
                    not(exists_so(x, 1, not(body?)))
                }
            }
            Formula::Lind { lang, vars, args } => {
                let xs: Vec<String> = vars.iter().map(|_| self.fresh.next("X")).collect();
                let olds: Vec<_> = vars
                    .iter()
                    .zip(&xs)
                    .map(|(v, x)| self.sets.insert(v.clone(), x.clone()))
                    .collect();
                let args: Result<Vec<Formula>, _> = args.iter().map(|a| self.formula(a)).collect();
                for (v, old) in vars.iter().zip(olds) {
                    restore(&mut self.sets, v, old);
                }
                Formula::LindSo {
                    lang: lang.clone(),
                    order: InstanceOrder::Concatenated,
                    arity: 1,
                    vars: xs,
                    args: args?,
                }
            }
            Formula::Letter(c, _) => return Err(TranslateError::NonConstantSignature(format!("letter {c}"))),
            other => {
                return Err(TranslateError::FragmentViolation(format!(
                    "only order, equality and quantifiers translate back, found {other}"
                )))
            }
        })
    }
}

/// Translates `θ` over the constants `names` into `θ'` over words on
/// `alphabet` with `A ⊨ θ'` iff `A* ⊨ θ`. Elements become sets of
/// positions, constant `ci` the positions of the `i`-th letter.
pub fn exp_reverse(theta: &Formula, alphabet: &Alphabet, names: &[String]) -> Result<Formula, TranslateError> {
    if names.len() != alphabet.len() {
        return Err(TranslateError::NonConstantSignature(format!(
            "{} constants for {} letters",
            names.len(),
            alphabet.len()
        )));
    }
    let mut r = Reverse {
        alphabet,
        names,
        fresh: Fresh::avoiding(&[theta]),
        sets: BTreeMap::new(),
    };
    r.formula(theta)
}

fn constant_names(params: &TranslateParams) -> Vec<String> {
    if params.constants.is_empty() {
        (1..=params.alphabet.len()).map(|i| format!("c{i}")).collect()
    } else {
        params.constants.clone()
    }
}

fn translated(target: Formula, params: &TranslateParams, reversed: bool) -> Result<Translated, TranslateError> {
    let names = constant_names(params);
    let max_n = params.max_n.unwrap_or(4);
    if max_n > params.exponent_cap {
        return Err(TranslateError::ExponentCapExceeded {
            n: max_n,
            cap: params.exponent_cap,
        });
    }
    Ok(Translated {
        target,
        space: StructureSpace::strings(params.alphabet.clone(), 1, max_n),
        mapper: Box::new(ExpMapper::new(params.alphabet.clone(), names, params.exponent_cap)?),
        reversed,
        notes: Vec::new(),
    })
}

pub(super) struct ExpFwd;

impl Translation for ExpFwd {
    fn name(&self) -> &'static str {
        "exp-fwd"
    }

    fn summary(&self) -> &'static str {
        "SOM(Qstar) over words to FO(Q,+,x) over constants on 2^n elements"
    }

    fn translate(
        &self,
        source: &Formula,
        _: &Languages,
        params: &TranslateParams,
    ) -> Result<Translated, TranslateError> {
        let target = exp_translate(source, &params.alphabet, &constant_names(params))?;
        translated(target, params, false)
    }
}

pub(super) struct ExpRev;

impl Translation for ExpRev {
    fn name(&self) -> &'static str {
        "exp-rev"
    }

    fn summary(&self) -> &'static str {
        "order formulas over constants on 2^n elements back to SOM(Qstar) over words"
    }

    fn translate(
        &self,
        source: &Formula,
        _: &Languages,
        params: &TranslateParams,
    ) -> Result<Translated, TranslateError> {
        let target = exp_reverse(source, &params.alphabet, &constant_names(params))?;
        translated(target, params, true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{letter, lt, Assignment, Evaluator};
    use crate::translate::{check_equivalence, CheckOptions};

    fn ab() -> Alphabet {
        Alphabet::parse("a,b").unwrap()
    }

    fn names() -> Vec<String> {
        vec!["c1".into(), "c2".into()]
    }

    #[test]
    fn encoding_example() {
        let m = ExpMapper::new(ab(), names(), 5).unwrap();
        let s = m.map(&Structure::from_string(&ab(), "ab").unwrap()).unwrap();
        assert_eq!(s.size(), 4);
        assert_eq!(s.constant("c1"), Some(2));
        assert_eq!(s.constant("c2"), Some(1));
        let long = Structure::from_string(&ab(), "abababa").unwrap();
        assert_eq!(m.map(&long), Err(TranslateError::ExponentCapExceeded { n: 7, cap: 5 }));
    }

    #[test]
    fn partition_survives() {
        let langs = Languages::empty();
        let ev = Evaluator::new(&langs);
        let x = Term::var("x");
        let f = forall("x", or([letter('a', x.clone()), letter('b', x)]));
        let g = exp_translate(&f, &ab(), &names()).unwrap();
        let m = ExpMapper::new(ab(), names(), 5).unwrap();
        for w in ab().words_up_to(1, 4) {
            let s = m.map(&Structure::from_word(ab(), w)).unwrap();
            assert!(ev.eval(&s, &Assignment::new(), &g).unwrap());
        }
    }

    #[test]
    fn reverse_equal_constants() {
        let langs = Languages::empty();
        let ev = Evaluator::new(&langs);
        let theta = Formula::Eq(Term::constant("c1"), Term::constant("c2"));
        let back = exp_reverse(&theta, &ab(), &names()).unwrap();
        let m = ExpMapper::new(ab(), names(), 5).unwrap();
        for w in ab().words_up_to(1, 4) {
            let s = Structure::from_word(ab(), w);
            assert!(!ev.eval(&s, &Assignment::new(), &back).unwrap());
        }
        let theta = exists(
            "x",
            and([
                lt(Term::constant("c1"), Term::var("x")),
                lt(Term::var("x"), Term::constant("c2")),
            ]),
        );
        let back = exp_reverse(&theta, &ab(), &names()).unwrap();
        let r = check_equivalence(
            &ev,
            &back,
            &theta,
            &StructureSpace::strings(ab(), 1, 4),
            &m,
            CheckOptions::default(),
        )
        .unwrap();
        assert!(r.is_equivalent(), "{r}");
    }
}
