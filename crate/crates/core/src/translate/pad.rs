//! Padding a word of length `n` to length `n^k` so that `k`-ary relations
//! over the word become sets over the padded word.

use crate::algebra::Languages;
use crate::alphabet::Alphabet;
use crate::logic::{
    and, exists, forall, implies, letter, lt, member, not, or, plus, times, Formula, Fresh, InstanceOrder, Structure,
    Term,
};

use super::arith::{one, succ};
use super::{StructureMapper, StructureSpace, TranslateError, TranslateParams, Translated, Translation};

/// A base alphabet extended by a pad letter, for exponent `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaddedSignature {
    base: Alphabet,
    pad: char,
    k: usize,
    padded: Alphabet,
}

impl PaddedSignature {
    pub fn new(base: Alphabet, pad: char, k: usize) -> Result<Self, TranslateError> {
        if base.contains(pad) {
            return Err(TranslateError::PadLetterInAlphabet(pad));
        }
        if k == 0 {
            return Err(TranslateError::FragmentViolation(
                "padding exponent must be at least 1".into(),
            ));
        }
        let padded = base.with_letter(pad)?;
        Ok(PaddedSignature { base, pad, k, padded })
    }

    pub fn base(&self) -> &Alphabet {
        &self.base
    }

    pub fn pad(&self) -> char {
        self.pad
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// The base alphabet with the pad letter last.
    pub fn padded(&self) -> &Alphabet {
        &self.padded
    }
}

/// `w` followed by `|w|^k - |w|` pad letters.
pub fn pad_string(w: &str, k: usize, pad: char) -> String {
    let n = w.chars().count();
    let mut out = w.to_string();
    out.extend(std::iter::repeat_n(pad, n.pow(k as u32) - n));
    out
}

#[derive(Debug, Clone)]
pub struct PadMapper {
    sig: PaddedSignature,
}

impl PadMapper {
    pub fn new(sig: PaddedSignature) -> Self {
        PadMapper { sig }
    }
}

impl StructureMapper for PadMapper {
    fn describe(&self) -> String {
        format!("pad with '{}' to length n^{}", self.sig.pad, self.sig.k)
    }

    fn map(&self, s: &Structure) -> Result<Structure, TranslateError> {
        let text = pad_string(&s.text(), self.sig.k, self.sig.pad);
        Ok(Structure::from_string(&self.sig.padded, &text)?)
    }
}

struct Ctx<'a> {
    pad: char,
    vars: &'a [String],
    mx: String,
    fresh: Fresh,
}

impl Ctx<'_> {
    fn is_pad(&self, t: Term) -> Formula {
        letter(self.pad, t)
    }

    fn term(&self, t: &Term) -> Result<Term, TranslateError> {
        match t {
            Term::Max => Ok(Term::var(self.mx.clone())),
            Term::Const(c) => Err(TranslateError::FragmentViolation(format!(
                "constant {c} in a string formula"
            ))),
            other => Ok(other.clone()),
        }
    }

    fn first_pad(&mut self, w: &str) -> Formula {
        let u = self.fresh.next("u");
        and([
            self.is_pad(Term::var(w)),
            forall(
                u.clone(),
                implies(lt(Term::var(u.clone()), Term::var(w)), not(self.is_pad(Term::var(u)))),
            ),
        ])
    }

    fn no_pad(&mut self) -> Formula {
        let u = self.fresh.next("u");
        not(exists(u.clone(), self.is_pad(Term::var(u))))
    }

    /// `z = ((x1·W + x2)·W + ...) + xk`.
    fn horner(&mut self, acc: Term, rest: &[Term], z: &Term, w: &Term) -> Formula {
        let Some((next, tail)) = rest.split_first() else {
            return Formula::Eq(z.clone(), acc);
        };
        let p = self.fresh.next("p");
        let pv = Term::var(p.clone());
        let step = if tail.is_empty() {
            plus(pv.clone(), next.clone(), z.clone())
        } else {
            let h = self.fresh.next("h");
            let hv = Term::var(h.clone());
            let inner = self.horner(hv.clone(), tail, z, w);
            exists(h, and([plus(pv.clone(), next.clone(), hv), inner]))
        };
        exists(p, and([times(acc, w.clone(), pv), step]))
    }

    fn formula(&mut self, f: &Formula) -> Result<Formula, TranslateError> {
        Ok(match f {
            Formula::True | Formula::False => f.clone(),
            Formula::Eq(a, b) => Formula::Eq(self.term(a)?, self.term(b)?),
            Formula::Lt(a, b) => Formula::Lt(self.term(a)?, self.term(b)?),
            Formula::Bit(a, b) => Formula::Bit(self.term(a)?, self.term(b)?),
            Formula::Plus(a, b, c) => Formula::Plus(self.term(a)?, self.term(b)?, self.term(c)?),
            Formula::Times(a, b, c) => Formula::Times(self.term(a)?, self.term(b)?, self.term(c)?),
            Formula::Letter(c, t) => Formula::Letter(*c, self.term(t)?),
            Formula::In(x, ts) => {
                let Some(i) = self.vars.iter().position(|v| v == x) else {
                    return Err(TranslateError::FragmentViolation(format!("free relation variable {x}")));
                };
                let ts: Vec<Term> = ts.iter().map(|t| self.term(t)).collect::<Result<_, _>>()?;
                let z = self.fresh.next("z");
                let zv = Term::var(z.clone());
                let w = self.fresh.next("W");
                let wv = Term::var(w.clone());
                let first = self.first_pad(&w);
                let position = self.horner(ts[0].clone(), &ts[1..], &zv, &wv);
                let unpadded = and([self.no_pad(), Formula::Eq(zv.clone(), ts[ts.len() - 1].clone())]);
                exists(
                    z,
                    and([
                        member(self.vars[i].clone(), vec![zv]),
                        or([exists(w, and([first, position])), unpadded]),
                    ]),
                )
            }
            Formula::Not(a) => not(self.formula(a)?),
            Formula::And(fs) => and(fs.iter().map(|g| self.formula(g)).collect::<Result<Vec<_>, _>>()?),
            Formula::Or(fs) => or(fs.iter().map(|g| self.formula(g)).collect::<Result<Vec<_>, _>>()?),
            Formula::Implies(a, b) => implies(self.formula(a)?, self.formula(b)?),
            Formula::Iff(a, b) => crate::logic::iff(self.formula(a)?, self.formula(b)?),
            Formula::Exists(v, b) => exists(
                v.clone(),
                and([not(self.is_pad(Term::var(v.clone()))), self.formula(b)?]),
            ),
            Formula::Forall(v, b) => forall(
                v.clone(),
                implies(not(self.is_pad(Term::var(v.clone()))), self.formula(b)?),
            ),
            other => {
                return Err(TranslateError::FragmentViolation(format!(
                    "argument formulas must be first-order, found {other}"
                )))
            }
        })
    }
}

fn pow(q: Term, w: &Term, e: usize, fresh: &mut Fresh) -> Formula {
    match e {
        0 => one(q, fresh),
        1 => Formula::Eq(q, w.clone()),
        _ => {
            let r = fresh.next("r");
            let rv = Term::var(r.clone());
            let inner = pow(rv.clone(), w, e - 1, fresh);
            exists(r, and([inner, times(rv, w.clone(), q)]))
        }
    }
}

fn chi_with(sig: &PaddedSignature, fresh: &mut Fresh) -> Formula {
    let pad = sig.pad;
    let k = sig.k;
    let is_pad = |t: Term| letter(pad, t);
    let (u, v) = (fresh.next("u"), fresh.next("v"));
    let suffix = forall(
        u.clone(),
        forall(
            v.clone(),
            implies(
                and([lt(Term::var(u.clone()), Term::var(v.clone())), is_pad(Term::var(u))]),
                is_pad(Term::var(v)),
            ),
        ),
    );
    let w = fresh.next("W");
    let wv = Term::var(w.clone());
    let u2 = fresh.next("u");
    let first = and([
        is_pad(wv.clone()),
        forall(
            u2.clone(),
            implies(lt(Term::var(u2.clone()), wv.clone()), not(is_pad(Term::var(u2)))),
        ),
    ]);
    // max = (W-1)·W^(k-1) + W^(k-1) - 1
    let (q, w1, p, q1) = (fresh.next("q"), fresh.next("w"), fresh.next("p"), fresh.next("q"));
    let (qv, w1v, pv, q1v) = (
        Term::var(q.clone()),
        Term::var(w1.clone()),
        Term::var(p.clone()),
        Term::var(q1.clone()),
    );
    let power = pow(qv.clone(), &wv, k - 1, fresh);
    let w_pred = succ(w1v.clone(), wv.clone(), fresh);
    let q_pred = succ(q1v.clone(), qv.clone(), fresh);
    let size = exists(
        q,
        and([
            power,
            exists(
                w1,
                and([
                    w_pred,
                    exists(
                        p,
                        and([
                            times(w1v, qv, pv.clone()),
                            exists(q1, and([q_pred, plus(pv, q1v, Term::Max)])),
                        ]),
                    ),
                ]),
            ),
        ]),
    );
    let u3 = fresh.next("u");
    let any_pad = exists(u3.clone(), is_pad(Term::var(u3)));
    let unpadded_ok = if k == 1 {
        Formula::True
    } else {
        Formula::Eq(Term::Max, Term::Min)
    };
    and([
        suffix,
        not(is_pad(Term::Min)),
        or([
            and([any_pad.clone(), exists(w, and([first, size]))]),
            and([not(any_pad), unpadded_ok]),
        ]),
    ])
}

/// Holds exactly on words `v ♯^(|v|^k - |v|)` with `v` nonempty and free of `♯`.
pub fn pad_chi(sig: &PaddedSignature) -> Formula {
    chi_with(sig, &mut Fresh::new(Default::default()))
}

/// Translates a sentence `Qstar_L X1..Xr [φ1..]` whose relations have arity
/// `k` into `φ* ∧ χ` over the padded signature, with `w ⊨ φ` iff
/// `pad(w) ⊨ φ* ∧ χ`. Each `k`-tuple becomes the position of its base-`n`
/// expansion; first-order quantifiers range over the unpadded prefix.
pub fn pad_translate(f: &Formula, base: &Alphabet, pad: char) -> Result<(Formula, PaddedSignature), TranslateError> {
    let Formula::LindSo {
        lang,
        order: InstanceOrder::Concatenated,
        arity,
        vars,
        args,
    } = f
    else {
        return Err(TranslateError::FragmentViolation(
            "expected an outermost Qstar quantifier".into(),
        ));
    };
    let verdict = crate::logic::fragment_check(f, "Qstar-FO(+,x)")?;
    if !verdict.ok {
        return Err(TranslateError::FragmentViolation(
            verdict.diagnostic.unwrap_or_default(),
        ));
    }
    let sig = PaddedSignature::new(base.clone(), pad, *arity)?;
    let mut fresh = Fresh::avoiding(&[f]);
    let mx = fresh.next("mx");
    let mut ctx = Ctx {
        pad,
        vars,
        mx: mx.clone(),
        fresh,
    };
    let args = args
        .iter()
        .map(|a| {
            let body = ctx.formula(a)?;
            let u = ctx.fresh.next("u");
            let mv = Term::var(mx.clone());
            let last_real = and([
                not(ctx.is_pad(mv.clone())),
                forall(
                    u.clone(),
                    implies(lt(mv, Term::var(u.clone())), ctx.is_pad(Term::var(u))),
                ),
            ]);
            Ok(exists(mx.clone(), and([last_real, body])))
        })
        .collect::<Result<Vec<_>, TranslateError>>()?;
    let chi = chi_with(&sig, &mut ctx.fresh);
    let node = Formula::LindSo {
        lang: lang.clone(),
        order: InstanceOrder::Concatenated,
        arity: 1,
        vars: vars.clone(),
        args,
    };
    Ok((and([node, chi]), sig))
}

pub(super) struct Pad;

impl Translation for Pad {
    fn name(&self) -> &'static str {
        "pad"
    }

    fn summary(&self) -> &'static str {
        "Qstar over k-ary relations to Qstar over sets of the word padded to length n^k"
    }

    fn translate(
        &self,
        source: &Formula,
        _: &Languages,
        params: &TranslateParams,
    ) -> Result<Translated, TranslateError> {
        let (target, sig) = pad_translate(source, &params.alphabet, params.pad)?;
        Ok(Translated {
            target,
            space: StructureSpace::strings(params.alphabet.clone(), 1, params.max_n.unwrap_or(3)),
            mapper: Box::new(PadMapper::new(sig)),
            reversed: false,
            notes: Vec::new(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{Assignment, Evaluator};
    use crate::translate::{check_equivalence, CheckOptions};

    fn padded_shape(text: &str, k: usize, pad: char) -> bool {
        let real = text.chars().take_while(|&c| c != pad).count();
        real > 0 && pad_string(&text[..real], k, pad) == text
    }

    #[test]
    fn pad_string_examples() {
        assert_eq!(pad_string("ab", 2, '#'), "ab##");
        assert_eq!(pad_string("abc", 1, '#'), "abc");
        assert_eq!(pad_string("a", 3, '#'), "a");
    }

    #[test]
    fn chi_accepts_exactly_padded_words() {
        let langs = Languages::empty();
        let ev = Evaluator::new(&langs);
        for k in 1..=2 {
            let sig = PaddedSignature::new(Alphabet::parse("a,b").unwrap(), '#', k).unwrap();
            let chi = pad_chi(&sig);
            for w in sig.padded().words_up_to(1, 6) {
                let s = Structure::from_word(sig.padded().clone(), w);
                let text = s.text();
                assert_eq!(
                    ev.eval(&s, &Assignment::new(), &chi).unwrap(),
                    padded_shape(&text, k, '#'),
                    "k={k} {text}"
                );
            }
        }
    }

    #[test]
    fn binary_relation_sentence() {
        let langs = Languages::with_builtins();
        let ev = Evaluator::new(&langs);
        let (x, y) = (Term::var("x"), Term::var("y"));
        let f = Formula::LindSo {
            lang: "Lmod2".into(),
            order: InstanceOrder::Concatenated,
            arity: 2,
            vars: vec!["R".into()],
            args: vec![exists(
                "x",
                exists(
                    "y",
                    and([
                        member("R", vec![x.clone(), y.clone()]),
                        letter('a', x.clone()),
                        lt(y, Term::Max),
                    ]),
                ),
            )],
        };
        let ab = Alphabet::parse("a,b").unwrap();
        let (g, sig) = pad_translate(&f, &ab, '#').unwrap();
        let r = check_equivalence(
            &ev,
            &f,
            &g,
            &StructureSpace::strings(ab, 1, 3),
            &PadMapper::new(sig),
            CheckOptions::default(),
        )
        .unwrap();
        assert!(r.is_equivalent(), "{r}");
    }

    #[test]
    fn pad_letter_must_be_new() {
        assert_eq!(
            PaddedSignature::new(Alphabet::parse("a,#").unwrap(), '#', 2),
            Err(TranslateError::PadLetterInAlphabet('#'))
        );
    }
}
