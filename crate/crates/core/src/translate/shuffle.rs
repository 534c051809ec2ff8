//! Rewriting between the concatenated and interleaved instance orders.
//!
//! With `n = max + 1` and `k` monadic variables, code position `p` belongs to
//! variable `p mod k` at element `p div k` in the interleaved order and to
//! variable `p div n` at element `p mod n` in the concatenated order. The
//! substituted formulas compute this bijection from `max` with `+` only,
//! writing `max = k·q + ρ` for `ρ < k`.

use crate::algebra::Languages;
use crate::logic::{and, exists, member, or, Formula, Fresh, InstanceOrder, Term};

use super::arith::lin;
use super::{
    substitute, try_map_children, Identity, StructureSpace, TranslateError, TranslateParams, Translated, Translation,
};

fn repeat(t: &Term, times: usize, extra: &Term) -> Vec<Term> {
    let mut v = vec![t.clone(); times];
    v.push(extra.clone());
    v
}

/// Concatenated variable `i` at element `t`, read from interleaved variables `b`.
fn from_interleaved(i: usize, t: &Term, b: &[String], fresh: &mut Fresh) -> Formula {
    let k = b.len();
    or((0..k).map(|rho| {
        let q = fresh.next("q");
        let qv = Term::var(q.clone());
        let wrap = usize::from(rho == k - 1);
        let r = (rho + 1) % k;
        let max_split = lin(Term::Max, &vec![qv.clone(); k], rho, fresh);
        let cases = or((0..k).map(|low| {
            let a = fresh.next("a");
            let y = fresh.next("y");
            let (av, yv) = (Term::var(a.clone()), Term::var(y.clone()));
            let d = (i * r + low) / k;
            let e = (i * r + low) % k;
            let split = lin(t.clone(), &vec![av.clone(); k], low, fresh);
            let locate = lin(yv.clone(), &repeat(&qv, i, &av), i * wrap + d, fresh);
            exists(
                a,
                and([split, exists(y, and([locate, member(b[e].clone(), vec![yv])]))]),
            )
        }));
        exists(q, and([max_split, cases]))
    }))
}

/// Interleaved variable `i` at element `t`, read from concatenated variables `a`.
fn from_concatenated(i: usize, t: &Term, a: &[String], fresh: &mut Fresh) -> Formula {
    let k = a.len();
    or((0..k).map(|rho| {
        let q = fresh.next("q");
        let qv = Term::var(q.clone());
        let wrap = usize::from(rho == k - 1);
        let r = (rho + 1) % k;
        let max_split = lin(Term::Max, &vec![qv.clone(); k], rho, fresh);
        let cases = or((0..k).map(|c| {
            let shift = i as isize - (c * r) as isize;
            let e = shift.rem_euclid(k as isize) as usize;
            let d = ((e as isize - shift) / k as isize) as usize;
            let lo = fresh.next("a");
            let y = fresh.next("y");
            let (lv, yv) = (Term::var(lo.clone()), Term::var(y.clone()));
            let locate = lin(t.clone(), &repeat(&qv, c, &lv), c * wrap + d, fresh);
            let split = lin(yv.clone(), &vec![lv.clone(); k], e, fresh);
            exists(lo, exists(y, and([locate, split, member(a[c].clone(), vec![yv])])))
        }));
        exists(q, and([max_split, cases]))
    }))
}

fn convert(f: &Formula, from: InstanceOrder, fresh: &mut Fresh) -> Result<Formula, TranslateError> {
    let Formula::LindSo {
        lang,
        order,
        arity,
        vars,
        args,
    } = f
    else {
        return try_map_children(f, &mut |c| convert(c, from, fresh));
    };
    let args: Vec<Formula> = args.iter().map(|a| convert(a, from, fresh)).collect::<Result<_, _>>()?;
    if *order != from {
        return Ok(Formula::LindSo {
            lang: lang.clone(),
            order: *order,
            arity: *arity,
            vars: vars.clone(),
            args,
        });
    }
    if *arity != 1 {
        return Err(TranslateError::NonMonadicNode(lang.clone()));
    }
    let to = match from {
        InstanceOrder::Concatenated => InstanceOrder::Interleaved,
        InstanceOrder::Interleaved => InstanceOrder::Concatenated,
    };
    if vars.len() == 1 {
        return Ok(Formula::LindSo {
            lang: lang.clone(),
            order: to,
            arity: 1,
            vars: vars.clone(),
            args,
        });
    }
    let base = if to == InstanceOrder::Interleaved { "B" } else { "A" };
    let new_vars: Vec<String> = vars.iter().map(|_| fresh.next(base)).collect();
    let args = args
        .iter()
        .map(|a| {
            substitute(a, vars, &mut |i, ts| {
                let [t] = ts else {
                    return Err(TranslateError::NonMonadicNode(lang.clone()));
                };
                Ok(match from {
                    InstanceOrder::Concatenated => from_interleaved(i, t, &new_vars, fresh),
                    InstanceOrder::Interleaved => from_concatenated(i, t, &new_vars, fresh),
                })
            })
        })
        .collect::<Result<_, _>>()?;
    Ok(Formula::LindSo {
        lang: lang.clone(),
        order: to,
        arity: 1,
        vars: new_vars,
        args,
    })
}

/// Rewrites every monadic `Qstar` node into an equivalent `Q1` node.
pub fn q_star_to_q1(f: &Formula) -> Result<Formula, TranslateError> {
    convert(f, InstanceOrder::Concatenated, &mut Fresh::avoiding(&[f]))
}

/// Rewrites every monadic `Q1` node into an equivalent `Qstar` node.
pub fn q1_to_q_star(f: &Formula) -> Result<Formula, TranslateError> {
    convert(f, InstanceOrder::Interleaved, &mut Fresh::avoiding(&[f]))
}

fn shuffle_translated(target: Formula, params: &TranslateParams) -> Translated {
    Translated {
        target,
        space: StructureSpace::strings(params.alphabet.clone(), 1, params.max_n.unwrap_or(3)),
        mapper: Box::new(Identity),
        reversed: false,
        notes: Vec::new(),
    }
}

pub(super) struct QStarToQ1;

impl Translation for QStarToQ1 {
    fn name(&self) -> &'static str {
        "qstar-to-q1"
    }

    fn summary(&self) -> &'static str {
        "monadic Qstar nodes to Q1 nodes with + in the arguments"
    }

    fn translate(
        &self,
        source: &Formula,
        _: &Languages,
        params: &TranslateParams,
    ) -> Result<Translated, TranslateError> {
        Ok(shuffle_translated(q_star_to_q1(source)?, params))
    }
}

pub(super) struct Q1ToQStar;

impl Translation for Q1ToQStar {
    fn name(&self) -> &'static str {
        "q1-to-qstar"
    }

    fn summary(&self) -> &'static str {
        "monadic Q1 nodes to Qstar nodes with + in the arguments"
    }

    fn translate(
        &self,
        source: &Formula,
        _: &Languages,
        params: &TranslateParams,
    ) -> Result<Translated, TranslateError> {
        Ok(shuffle_translated(q1_to_q_star(source)?, params))
    }
}
