//! Replacing `k` relation variables of arity `m` by one relation of arity
//! `m + ⌊log k⌋ + 1` whose leading coordinates tag the variable index.

use crate::algebra::Languages;
use crate::logic::{and, exists, forall, implies, member, or, Formula, Fresh, InstanceOrder, Term};

use super::arith::one;
use super::{
    require_neutral_last, substitute, Identity, StructureSpace, TranslateError, TranslateParams, Translated,
    Translation,
};

fn tag_width(k: usize) -> usize {
    (usize::BITS - k.leading_zeros()) as usize
}

/// Arity of the single relation replacing `k` relations of arity `m`.
pub fn collapsed_arity(m: usize, k: usize) -> usize {
    m + tag_width(k)
}

/// Rewrites `Qstar_L X1..Xk [φ1..]` into a quantifier over one relation
/// `B`. Relations whose tuples all carry the binary tag of some index
/// `1..=k` (digits read as `min` and the element 1) stand for the tuple
/// `(X1..Xk)`; every other relation yields the neutral letter of `L`. The
/// result agrees with the source on structures with at least two elements.
pub fn arity_collapse(f: &Formula, langs: &Languages) -> Result<Formula, TranslateError> {
    let Formula::LindSo {
        lang,
        order: InstanceOrder::Concatenated,
        arity: m,
        vars,
        args,
    } = f
    else {
        return Err(TranslateError::FragmentViolation(
            "expected an outermost Qstar quantifier".into(),
        ));
    };
    require_neutral_last(langs, lang)?;
    let k = vars.len();
    let width = tag_width(k);
    let mut fresh = Fresh::avoiding(&[f]);
    let b = fresh.next("B");
    let tags: Vec<String> = (0..width).map(|_| fresh.next("t")).collect();
    let xs: Vec<String> = (0..*m).map(|_| fresh.next("x")).collect();
    let digit = |i: usize, d: usize| (i >> (width - 1 - d)) & 1 == 1;
    let tag_formula = |i: usize, fresh: &mut Fresh| {
        and((0..width).map(|d| {
            let t = Term::var(tags[d].clone());
            if digit(i, d) {
                one(t, fresh)
            } else {
                Formula::Eq(t, Term::Min)
            }
        }))
    };
    let mut tuple: Vec<Term> = tags.iter().map(|t| Term::var(t.clone())).collect();
    tuple.extend(xs.iter().map(|x| Term::var(x.clone())));
    let well_tagged = or((1..=k).map(|i| tag_formula(i, &mut fresh)));
    let mut guard = implies(member(b.clone(), tuple), well_tagged);
    for v in tags.iter().chain(&xs).rev() {
        guard = forall(v.clone(), guard);
    }
    let o = fresh.next("o");
    let o_is_one = one(Term::var(o.clone()), &mut fresh);
    let args = args
        .iter()
        .map(|a| {
            let body = substitute(a, vars, &mut |i, ts| {
                let mut terms: Vec<Term> = (0..width)
                    .map(|d| {
                        if digit(i + 1, d) {
                            Term::var(o.clone())
                        } else {
                            Term::Min
                        }
                    })
                    .collect();
                terms.extend(ts.iter().cloned());
                Ok(exists(o.clone(), and([o_is_one.clone(), member(b.clone(), terms)])))
            })?;
            Ok(and([guard.clone(), body]))
        })
        .collect::<Result<_, TranslateError>>()?;
    Ok(Formula::LindSo {
        lang: lang.clone(),
        order: InstanceOrder::Concatenated,
        arity: m + width,
        vars: vec![b],
        args,
    })
}

/// Structures are unchanged by the collapse.
pub type CollapseMapper = Identity;

pub(super) struct ArityCollapse;

impl Translation for ArityCollapse {
    fn name(&self) -> &'static str {
        "arity-collapse"
    }

    fn summary(&self) -> &'static str {
        "one outer Qstar node over k relations to one node over a single tagged relation"
    }

    fn translate(
        &self,
        source: &Formula,
        langs: &Languages,
        params: &TranslateParams,
    ) -> Result<Translated, TranslateError> {
        let target = arity_collapse(source, langs)?;
        Ok(Translated {
            target,
            space: StructureSpace::strings(params.alphabet.clone(), 2, params.max_n.unwrap_or(3).max(2)),
            mapper: Box::new(Identity),
            reversed: false,
            notes: vec!["n = 1 excluded: tags need two distinct elements".into()],
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::logic::{instance_unrank, Evaluator, Relation};
    use crate::translate::{check_equivalence, CheckOptions};

    fn x() -> Term {
        Term::var("x")
    }

    fn langs() -> Languages {
        Languages::with_builtins()
    }

    #[test]
    fn arity_formula() {
        assert_eq!(collapsed_arity(1, 1), 2);
        assert_eq!(collapsed_arity(1, 2), 3);
        assert_eq!(collapsed_arity(1, 3), 3);
        assert_eq!(collapsed_arity(2, 4), 5);
    }

    #[test]
    fn single_variable_gets_tag_one() {
        let f = Formula::LindSo {
            lang: "Lexists".into(),
            order: InstanceOrder::Concatenated,
            arity: 1,
            vars: vec!["X".into()],
            args: vec![member("X", vec![Term::Min])],
        };
        let g = arity_collapse(&f, &langs()).unwrap();
        let Formula::LindSo { arity, vars, .. } = &g else {
            panic!()
        };
        assert_eq!((*arity, vars.len()), (2, 1));
        let langs = langs();
        let ev = Evaluator::new(&langs);
        let space = StructureSpace::strings(Alphabet::parse("a,b").unwrap(), 2, 3);
        let r = check_equivalence(&ev, &f, &g, &space, &Identity, CheckOptions::default()).unwrap();
        assert!(r.is_equivalent(), "{r}");
    }

    /// Original instance pairs embed injectively into the well-tagged codes.
    #[test]
    fn codes_embed_injectively() {
        let n = 2;
        let mut codes = std::collections::BTreeSet::new();
        for rank in 0..16 {
            let sets = instance_unrank(rank, 2, n, InstanceOrder::Concatenated).unwrap();
            let mut rel = Relation::empty(3, n);
            for (i, set) in sets.iter().enumerate() {
                let tag = i + 1;
                for (x, &present) in set.iter().enumerate() {
                    if present {
                        rel.insert(&[(tag >> 1) & 1, tag & 1, x]);
                    }
                }
            }
            codes.insert(rel.bits().to_vec());
        }
        assert_eq!(codes.len(), 16);
    }

    #[test]
    fn two_variables_small_domain() {
        let f = Formula::LindSo {
            lang: "MajPad".into(),
            order: InstanceOrder::Concatenated,
            arity: 1,
            vars: vec!["X".into(), "Y".into()],
            args: vec![
                exists("x", and([member("X", vec![x()]), member("Y", vec![x()])])),
                member("Y", vec![Term::Max]),
            ],
        };
        let g = arity_collapse(&f, &langs()).unwrap();
        let langs = langs();
        let ev = Evaluator::new(&langs);
        let space = StructureSpace::strings(Alphabet::parse("a").unwrap(), 2, 2);
        let r = check_equivalence(&ev, &f, &g, &space, &Identity, CheckOptions::default()).unwrap();
        assert!(r.is_equivalent(), "{r}");
    }

    #[test]
    fn requires_neutral_letter() {
        let f = Formula::LindSo {
            lang: "Maj".into(),
            order: InstanceOrder::Concatenated,
            arity: 1,
            vars: vec!["X".into()],
            args: vec![Formula::True],
        };
        assert_eq!(
            arity_collapse(&f, &langs()),
            Err(TranslateError::NoNeutralLetter("Maj".into()))
        );
    }
}
