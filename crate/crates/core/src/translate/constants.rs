//! Structures over constants `c1..cs` as words over the alphabet of subsets
//! of `{c1..cs}`: position `b` carries the set of constants naming `b`.

use crate::algebra::Languages;
use crate::alphabet::Alphabet;
use crate::logic::{and, exists, letter, not, or, Formula, Fresh, Structure, Term};

use super::{
    try_map_children, StructureMapper, StructureSpace, TranslateError, TranslateParams, Translated, Translation,
};

/// Letter of the subset with bitmask `mask` (bit `i` for the `i`-th constant).
fn subset_letter(mask: usize) -> char {
    char::from_digit(mask as u32, 16).expect("at most four constants")
}

/// Letters `0, 1, ..` for the subsets of `s <= 4` constants, by bitmask.
pub fn subset_alphabet(s: usize) -> Result<Alphabet, TranslateError> {
    if s > 4 {
        return Err(TranslateError::CapExceeded(format!(
            "{s} constants need more than 16 subset letters"
        )));
    }
    Ok(Alphabet::new((0..1usize << s).map(subset_letter))?)
}

/// `A ↦ w_A`.
#[derive(Debug, Clone)]
pub struct ConstToString {
    names: Vec<String>,
    alphabet: Alphabet,
}

impl ConstToString {
    pub fn new(names: Vec<String>) -> Result<Self, TranslateError> {
        let alphabet = subset_alphabet(names.len())?;
        Ok(ConstToString { names, alphabet })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }
}

pub type ConstMapper = ConstToString;

impl StructureMapper for ConstToString {
    fn describe(&self) -> String {
        format!("constants {} to subset words", self.names.join(","))
    }

    fn map(&self, s: &Structure) -> Result<Structure, TranslateError> {
        let mut word = vec![0usize; s.size()];
        for (i, name) in self.names.iter().enumerate() {
            let v = s
                .constant(name)
                .ok_or_else(|| TranslateError::BadStructure(format!("constant {name} is not interpreted")))?;
            word[v] |= 1 << i;
        }
        Ok(Structure::from_word(self.alphabet.clone(), word))
    }
}

struct Rewrite<'a> {
    names: &'a [String],
    fresh: Fresh,
}

impl Rewrite<'_> {
    fn index(&self, c: &str) -> Result<usize, TranslateError> {
        self.names
            .iter()
            .position(|n| n == c)
            .ok_or_else(|| TranslateError::NonConstantSignature(format!("undeclared constant {c}")))
    }

    /// `⋁_{S ∋ ci, cj..} P_S(t)`.
    fn holds(&self, members: &[usize], t: Term) -> Formula {
        or((0..1usize << self.names.len())
            .filter(|mask| members.iter().all(|i| mask >> i & 1 == 1))
            .map(|mask| letter(subset_letter(mask), t.clone())))
    }

    fn atom(&mut self, f: &Formula) -> Result<Formula, TranslateError> {
        if let Formula::Eq(a, b) = f {
            match (a, b) {
                (Term::Const(x), Term::Const(y)) => {
                    let members = [self.index(x)?, self.index(y)?];
                    let v = self.fresh.next("y");
                    let body = self.holds(&members, Term::var(v.clone()));
                    return Ok(exists(v, body));
                }
                (Term::Const(c), t) | (t, Term::Const(c)) => {
                    let i = self.index(c)?;
                    return Ok(self.holds(&[i], t.clone()));
                }
                _ => {}
            }
        }
        let mut consts: Vec<String> = f
            .atom_terms()
            .into_iter()
            .filter_map(|t| match t {
                Term::Const(c) => Some(c.clone()),
                _ => None,
            })
            .collect();
        consts.sort();
        consts.dedup();
        let witnesses: Vec<(String, String)> = consts.iter().map(|c| (c.clone(), self.fresh.next("y"))).collect();
        let swap = |t: &Term| match t {
            Term::Const(c) => Term::var(witnesses.iter().find(|(n, _)| n == c).unwrap().1.clone()),
            other => other.clone(),
        };
        let mut out = match f {
            Formula::Eq(a, b) => Formula::Eq(swap(a), swap(b)),
            Formula::Lt(a, b) => Formula::Lt(swap(a), swap(b)),
            Formula::Bit(a, b) => Formula::Bit(swap(a), swap(b)),
            Formula::Plus(a, b, c) => Formula::Plus(swap(a), swap(b), swap(c)),
            Formula::Times(a, b, c) => Formula::Times(swap(a), swap(b), swap(c)),
            Formula::In(x, ts) => Formula::In(x.clone(), ts.iter().map(swap).collect()),
            other => other.clone(),
        };
        for (c, y) in witnesses.iter().rev() {
            let is_c = self.holds(&[self.index(c)?], Term::var(y.clone()));
            out = exists(y.clone(), and([is_c, out]));
        }
        Ok(out)
    }

    fn formula(&mut self, f: &Formula) -> Result<Formula, TranslateError> {
        match f {
            Formula::Letter(c, _) => Err(TranslateError::NonConstantSignature(format!("letter {c}"))),
            g if g.is_atom() => self.atom(g),
            g => try_map_children(g, &mut |c| self.formula(c)),
        }
    }
}

/// Rewrites a formula over the constants `names` into one over subset words
/// with `A ⊨ φ` iff `w_A ⊨ φ'`.
pub fn const_rewrite(f: &Formula, names: &[String]) -> Result<Formula, TranslateError> {
    subset_alphabet(names.len())?;
    let mut r = Rewrite {
        names,
        fresh: Fresh::avoiding(&[f]),
    };
    r.formula(f)
}

/// Rewrites a formula over subset words into one over the constants:
/// `P_S(t)` becomes `⋀_{ci ∈ S} ci = t ∧ ⋀_{cj ∉ S} cj ≠ t`.
pub fn const_unrewrite(f: &Formula, names: &[String]) -> Result<Formula, TranslateError> {
    let s = names.len();
    subset_alphabet(s)?;
    Ok(f.rewrite(&mut |g| match g {
        Formula::Letter(c, t) => {
            let mask = c.to_digit(16).filter(|&m| (m as usize) < 1 << s);
            Some(match mask {
                None => Formula::False,
                Some(m) => and(names.iter().enumerate().map(|(i, name)| {
                    let eq = Formula::Eq(Term::Const(name.clone()), t.clone());
                    if (m >> i) & 1 == 1 {
                        eq
                    } else {
                        not(eq)
                    }
                })),
            })
        }
        _ => None,
    }))
}

fn declared_names(f: &Formula, params: &TranslateParams) -> Vec<String> {
    if !params.constants.is_empty() {
        return params.constants.clone();
    }
    f.constants().into_iter().collect()
}

fn space(names: &[String], params: &TranslateParams) -> StructureSpace {
    StructureSpace::constants(names.to_vec(), 1, params.max_n.unwrap_or(5))
}

pub(super) struct ConstRewrite;

impl Translation for ConstRewrite {
    fn name(&self) -> &'static str {
        "const-rewrite"
    }

    fn summary(&self) -> &'static str {
        "formulas over constants to formulas over words of constant subsets"
    }

    fn translate(
        &self,
        source: &Formula,
        _: &Languages,
        params: &TranslateParams,
    ) -> Result<Translated, TranslateError> {
        let names = declared_names(source, params);
        Ok(Translated {
            target: const_rewrite(source, &names)?,
            space: space(&names, params),
            mapper: Box::new(ConstToString::new(names)?),
            reversed: false,
            notes: Vec::new(),
        })
    }
}

pub(super) struct ConstUnrewrite;

impl Translation for ConstUnrewrite {
    fn name(&self) -> &'static str {
        "const-unrewrite"
    }

    fn summary(&self) -> &'static str {
        "formulas over words of constant subsets back to formulas over constants"
    }

    fn translate(
        &self,
        source: &Formula,
        _: &Languages,
        params: &TranslateParams,
    ) -> Result<Translated, TranslateError> {
        let names = if params.constants.is_empty() {
            let top = source
                .letters()
                .iter()
                .filter_map(|c| c.to_digit(16))
                .max()
                .unwrap_or(1);
            let s = (u32::BITS - top.leading_zeros()).max(1) as usize;
            (1..=s).map(|i| format!("c{i}")).collect()
        } else {
            params.constants.clone()
        };
        Ok(Translated {
            target: const_unrewrite(source, &names)?,
            space: space(&names, params),
            mapper: Box::new(ConstToString::new(names)?),
            reversed: true,
            notes: Vec::new(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{forall, lt, Assignment, Evaluator};
    use crate::translate::{check_equivalence, CheckOptions};

    fn names(s: usize) -> Vec<String> {
        (1..=s).map(|i| format!("c{i}")).collect()
    }

    #[test]
    fn encoding_example() {
        let m = ConstToString::new(names(1)).unwrap();
        let a = Structure::with_constants(4, [("c1".to_string(), 2)]);
        assert_eq!(m.map(&a).unwrap().text(), "0010");
        let m = ConstToString::new(names(2)).unwrap();
        let a = Structure::with_constants(3, [("c1".to_string(), 1), ("c2".to_string(), 1)]);
        assert_eq!(m.map(&a).unwrap().text(), "030");
    }

    #[test]
    fn equal_constants() {
        let langs = Languages::empty();
        let ev = Evaluator::new(&langs);
        let f = Formula::Eq(Term::constant("c1"), Term::constant("c2"));
        let g = const_rewrite(&f, &names(2)).unwrap();
        let m = ConstToString::new(names(2)).unwrap();
        let a = Structure::with_constants(3, [("c1".to_string(), 0), ("c2".to_string(), 0)]);
        assert!(ev.eval(&m.map(&a).unwrap(), &Assignment::new(), &g).unwrap());
        let space = StructureSpace::constants(names(2), 1, 5);
        let r = check_equivalence(&ev, &f, &g, &space, &m, CheckOptions::default()).unwrap();
        assert!(r.is_equivalent(), "{r}");
    }

    #[test]
    fn order_with_witnesses_both_directions() {
        let langs = Languages::empty();
        let ev = Evaluator::new(&langs);
        let x = Term::var("x");
        let f = forall(
            "x",
            or([
                lt(x.clone(), Term::constant("c1")),
                lt(Term::constant("c2"), x.clone()),
                Formula::Eq(x.clone(), Term::constant("c2")),
            ]),
        );
        let m = ConstToString::new(names(2)).unwrap();
        let space = StructureSpace::constants(names(2), 1, 5);
        let g = const_rewrite(&f, &names(2)).unwrap();
        let r = check_equivalence(&ev, &f, &g, &space, &m, CheckOptions::default()).unwrap();
        assert!(r.is_equivalent(), "{r}");
        let theta = exists("x", and([letter('3', x.clone()), lt(Term::Min, x)]));
        let back = const_unrewrite(&theta, &names(2)).unwrap();
        let r = check_equivalence(&ev, &back, &theta, &space, &m, CheckOptions::default()).unwrap();
        assert!(r.is_equivalent(), "{r}");
    }

    #[test]
    fn letters_rejected() {
        let f = letter('a', Term::Min);
        assert!(matches!(
            const_rewrite(&f, &names(1)),
            Err(TranslateError::NonConstantSignature(_))
        ));
    }
}
