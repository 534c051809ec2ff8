//! First-order definitions of small arithmetic facts used by the
//! translations. Bound variables come from a shared [`Fresh`] generator.

use crate::logic::{and, bit, exists, forall, implies, lt, not, or, plus, Formula, Fresh, Term};

/// `v = u + 1`.
pub fn succ(u: Term, v: Term, fresh: &mut Fresh) -> Formula {
    let w = fresh.next("w");
    and([
        lt(u.clone(), v.clone()),
        not(exists(
            w.clone(),
            and([lt(u, Term::var(w.clone())), lt(Term::var(w), v)]),
        )),
    ])
}

/// `v = c`, by a successor chain from `min`.
pub fn num(c: usize, v: Term, fresh: &mut Fresh) -> Formula {
    if c == 0 {
        return Formula::Eq(v, Term::Min);
    }
    let u = fresh.next("u");
    let prev = num(c - 1, Term::var(u.clone()), fresh);
    let step = succ(Term::var(u.clone()), v, fresh);
    exists(u, and([prev, step]))
}

/// `v = 1`.
pub fn one(v: Term, fresh: &mut Fresh) -> Formula {
    let z = fresh.next("z");
    and([
        lt(Term::Min, v.clone()),
        forall(
            z.clone(),
            implies(lt(Term::var(z.clone()), v), Formula::Eq(Term::var(z), Term::Min)),
        ),
    ])
}

/// `target = s_1 + ... + s_r + c`. Partial sums never exceed the target,
/// so every witness stays inside the domain when the target does.
pub fn lin(target: Term, summands: &[Term], c: usize, fresh: &mut Fresh) -> Formula {
    if c > 0 {
        let k = fresh.next("k");
        let mut all = summands.to_vec();
        all.push(Term::var(k.clone()));
        let constant = num(c, Term::var(k.clone()), fresh);
        let sum = lin(target, &all, 0, fresh);
        return exists(k, and([constant, sum]));
    }
    match summands {
        [] => Formula::Eq(target, Term::Min),
        [s] => Formula::Eq(target, s.clone()),
        [a, b] => plus(a.clone(), b.clone(), target),
        [a, b, rest @ ..] => {
            let t = fresh.next("t");
            let mut tail = vec![Term::var(t.clone())];
            tail.extend(rest.iter().cloned());
            let head = plus(a.clone(), b.clone(), Term::var(t.clone()));
            let body = lin(target, &tail, 0, fresh);
            exists(t, and([head, body]))
        }
    }
}

/// `j` is the position of the highest set bit of `x`.
pub fn top_bit(x: Term, j: Term, fresh: &mut Fresh) -> Formula {
    let u = fresh.next("u");
    and([
        bit(x.clone(), j.clone()),
        forall(
            u.clone(),
            implies(lt(j, Term::var(u.clone())), not(bit(x, Term::var(u)))),
        ),
    ])
}

/// Bit `j` of `max + 1`, that is of the domain size.
pub fn size_bit(j: Term, fresh: &mut Fresh) -> Formula {
    let i = fresh.next("i");
    let i2 = fresh.next("i");
    let below = |i: &str| lt(Term::var(i), j.clone());
    or([
        and([
            forall(i.clone(), implies(below(&i), bit(Term::Max, Term::var(i.clone())))),
            not(bit(Term::Max, j.clone())),
        ]),
        and([
            exists(
                i2.clone(),
                and([below(&i2), not(bit(Term::Max, Term::var(i2.clone())))]),
            ),
            bit(Term::Max, j),
        ]),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Languages;
    use crate::logic::{eval, Assignment, Structure};

    fn holds(n: usize, a: Assignment, f: &Formula) -> bool {
        let s = Structure::with_constants(n, []);
        eval(&Languages::empty(), &s, &a, f).unwrap()
    }

    #[test]
    fn lin_matches_arithmetic() {
        let mut fresh = Fresh::new(Default::default());
        let f = lin(
            Term::var("x"),
            &[Term::var("a"), Term::var("a"), Term::var("b")],
            2,
            &mut fresh,
        );
        for n in 1..8 {
            for x in 0..n {
                for a in 0..n {
                    for b in 0..n {
                        let asg = Assignment::new().set("x", x).set("a", a).set("b", b);
                        assert_eq!(holds(n, asg, &f), x == 2 * a + b + 2, "n={n} x={x} a={a} b={b}");
                    }
                }
            }
        }
    }

    #[test]
    fn constants_and_bits() {
        let mut fresh = Fresh::new(Default::default());
        let three = num(3, Term::var("v"), &mut fresh);
        let unit = one(Term::var("v"), &mut fresh);
        let top = top_bit(Term::Max, Term::var("v"), &mut fresh);
        let sb = size_bit(Term::var("v"), &mut fresh);
        for n in 1..20 {
            for v in 0..n {
                let a = || Assignment::new().set("v", v);
                assert_eq!(holds(n, a(), &three), v == 3);
                assert_eq!(holds(n, a(), &unit), v == 1);
                assert_eq!(
                    holds(n, a(), &top),
                    v == (usize::BITS - 1 - (n - 1).max(1).leading_zeros()) as usize && n > 1
                );
                assert_eq!(holds(n, a(), &sb), (n >> v) & 1 == 1, "n={n} v={v}");
            }
        }
    }
}
