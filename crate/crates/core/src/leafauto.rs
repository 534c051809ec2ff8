//! Finite leaf automata: computation trees, leaf strings and acceptance
//! relative to a leaf language.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::algebra::{language_member, AlgebraError, LanguageSpec};
use crate::alphabet::{Alphabet, AlphabetError};
use crate::logic::{and, exists, forall, implies, letter, lt, member, not, or, Formula, InstanceOrder, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LeafError {
    #[error("leaf automaton has no states")]
    NoStates,
    #[error("state '{0}' occurs twice")]
    DuplicateState(String),
    #[error("unknown state '{0}'")]
    UnknownState(String),
    #[error("no transition for state '{0}' on letter '{1}'")]
    MissingTransition(String, char),
    #[error("transition for state '{0}' on letter '{1}' has no successors")]
    EmptySuccessors(String, char),
    #[error("leaf string has {required} symbols, more than the cap {cap}")]
    CapExceeded { required: BigUint, cap: u64 },
    #[error("leaf traversal exceeded the cap of {cap} leaves")]
    TraversalCapExceeded { cap: u64 },
    #[error("leaf value '{0}' is not a letter of the leaf language")]
    LeafLetter(char),
    #[error("leaf language {0} has no neutral letter in last position")]
    NoNeutralLetter(String),
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// `M = (Q, Σ, δ, s, Γ, β)` with `δ(q, a)` an ordered nonempty sequence of
/// successor states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafAutomaton {
    states: Vec<String>,
    input: Alphabet,
    leaf: Alphabet,
    start: usize,
    delta: Vec<Vec<usize>>,
    beta: Vec<usize>,
}

impl LeafAutomaton {
    /// `delta[q][a]` lists the successors of state `q` on input letter `a`;
    /// `beta[q]` is a leaf letter index.
    pub fn new(
        states: Vec<String>,
        input: Alphabet,
        leaf: Alphabet,
        start: usize,
        delta: Vec<Vec<Vec<usize>>>,
        beta: Vec<usize>,
    ) -> Result<Self, LeafError> {
        let q = states.len();
        if q == 0 {
            return Err(LeafError::NoStates);
        }
        for (i, s) in states.iter().enumerate() {
            if states[..i].contains(s) {
                return Err(LeafError::DuplicateState(s.clone()));
            }
        }
        if start >= q {
            return Err(LeafError::UnknownState(format!("#{start}")));
        }
        if delta.len() != q || beta.len() != q {
            return Err(LeafError::UnknownState("transition table shape".into()));
        }
        let mut flat = Vec::with_capacity(q * input.len());
        for (from, row) in delta.into_iter().enumerate() {
            if row.len() != input.len() {
                let missing = input.letters().get(row.len()).copied().unwrap_or('?');
                return Err(LeafError::MissingTransition(states[from].clone(), missing));
            }
            for (a, succ) in row.into_iter().enumerate() {
                if succ.is_empty() {
                    return Err(LeafError::EmptySuccessors(states[from].clone(), input.letter(a)));
                }
                if let Some(&bad) = succ.iter().find(|&&t| t >= q) {
                    return Err(LeafError::UnknownState(format!("#{bad}")));
                }
                flat.push(succ);
            }
        }
        if let Some(&b) = beta.iter().find(|&&b| b >= leaf.len()) {
            return Err(LeafError::LeafLetter(
                char::from_digit(b as u32 % 36, 36).unwrap_or('?'),
            ));
        }
        Ok(LeafAutomaton {
            states,
            input,
            leaf,
            start,
            delta: flat,
            beta,
        })
    }

    /// Builds an automaton from named states, `(state, letter, successors)`
    /// triples and `(state, leaf letter)` pairs.
    pub fn from_named(
        states: &[&str],
        input: Alphabet,
        leaf: Alphabet,
        start: &str,
        delta: &[(&str, char, &[&str])],
        beta: &[(&str, char)],
    ) -> Result<Self, LeafError> {
        let names: Vec<String> = states.iter().map(|s| s.to_string()).collect();
        let idx = |s: &str| {
            names
                .iter()
                .position(|n| n == s)
                .ok_or_else(|| LeafError::UnknownState(s.to_string()))
        };
        let mut table: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); input.len()]; names.len()];
        for &(q, a, succ) in delta {
            let ai = input
                .index_of(a)
                .ok_or_else(|| AlphabetError::UnknownLetter(a, input.to_string()))?;
            table[idx(q)?][ai] = succ.iter().map(|s| idx(s)).collect::<Result<_, _>>()?;
        }
        for (qi, row) in table.iter().enumerate() {
            if let Some(a) = row.iter().position(Vec::is_empty) {
                return Err(LeafError::MissingTransition(names[qi].clone(), input.letter(a)));
            }
        }
        let mut values = vec![usize::MAX; names.len()];
        for &(q, c) in beta {
            values[idx(q)?] = leaf
                .index_of(c)
                .ok_or_else(|| AlphabetError::UnknownLetter(c, leaf.to_string()))?;
        }
        if let Some(q) = values.iter().position(|&v| v == usize::MAX) {
            return Err(LeafError::UnknownState(format!("{} has no leaf value", names[q])));
        }
        let start = idx(start)?;
        LeafAutomaton::new(names, input, leaf, start, table, values)
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn input(&self) -> &Alphabet {
        &self.input
    }

    pub fn leaf(&self) -> &Alphabet {
        &self.leaf
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn successors(&self, q: usize, a: usize) -> &[usize] {
        &self.delta[q * self.input.len() + a]
    }

    pub fn beta(&self, q: usize) -> usize {
        self.beta[q]
    }

    pub fn max_branching(&self) -> usize {
        self.delta.iter().map(Vec::len).max().unwrap_or(1)
    }
}

/// Number of leaves of the computation tree, folded right to left over
/// per-state counts.
pub fn leaf_count(m: &LeafAutomaton, word: &[usize]) -> BigUint {
    let q = m.states.len();
    let mut counts = vec![BigUint::one(); q];
    for &a in word.iter().rev() {
        counts = (0..q)
            .map(|s| {
                m.successors(s, a)
                    .iter()
                    .fold(BigUint::zero(), |acc, &t| acc + &counts[t])
            })
            .collect();
    }
    counts.swap_remove(m.start)
}

fn check_cap(m: &LeafAutomaton, word: &[usize], cap: u64) -> Result<(), LeafError> {
    let count = leaf_count(m, word);
    if count > BigUint::from(cap) {
        return Err(LeafError::CapExceeded { required: count, cap });
    }
    Ok(())
}

/// The leaf string, built level by level. For the empty input it is `β(s)`.
pub fn leaf_string(m: &LeafAutomaton, word: &[usize], cap: u64) -> Result<Vec<usize>, LeafError> {
    check_cap(m, word, cap)?;
    let mut level = vec![m.start];
    for &a in word {
        level = level.iter().flat_map(|&q| m.successors(q, a).iter().copied()).collect();
    }
    Ok(level.into_iter().map(|q| m.beta(q)).collect())
}

/// Depth-first traversal feeding leaf letters to `sink` until it returns
/// `false`. Returns the number of leaves visited.
pub fn leaf_stream(m: &LeafAutomaton, word: &[usize], sink: &mut dyn FnMut(usize) -> bool) -> u64 {
    // frame: (state, depth, next child)
    let mut stack: Vec<(usize, usize, usize)> = vec![(m.start, 0, 0)];
    let mut visited = 0u64;
    while let Some(top) = stack.last_mut() {
        let (q, depth, child) = *top;
        if depth == word.len() {
            stack.pop();
            visited += 1;
            if !sink(m.beta(q)) {
                break;
            }
            continue;
        }
        let succ = m.successors(q, word[depth]);
        if child == succ.len() {
            stack.pop();
            continue;
        }
        top.2 += 1;
        stack.push((succ[child], depth + 1, 0));
    }
    visited
}

fn leaf_letter_map(m: &LeafAutomaton, spec: &LanguageSpec) -> Result<Vec<usize>, LeafError> {
    m.leaf
        .letters()
        .iter()
        .map(|&c| spec.alphabet().index_of(c).ok_or(LeafError::LeafLetter(c)))
        .collect()
}

/// `w ∈ Leaf(A)` iff the leaf string lies in the leaf language. Streaming
/// bodies consume the traversal directly and stop once the verdict is fixed;
/// `cap` then bounds the number of leaves visited. Other bodies need the
/// materialised string, whose length `cap` bounds.
pub fn leaffa_member(m: &LeafAutomaton, spec: &LanguageSpec, word: &[usize], cap: u64) -> Result<bool, LeafError> {
    let map = leaf_letter_map(m, spec)?;
    if spec.is_streaming() {
        let mut acceptor = spec.acceptor();
        let mut over = false;
        let mut seen = 0u64;
        leaf_stream(m, word, &mut |leaf| {
            seen += 1;
            if seen > cap {
                over = true;
                return false;
            }
            acceptor.push(map[leaf]);
            acceptor.decided().is_none()
        });
        if over {
            return Err(LeafError::TraversalCapExceeded { cap });
        }
        return Ok(acceptor.accepts());
    }
    let leaves = leaf_string(m, word, cap)?;
    let mapped: Vec<usize> = leaves.into_iter().map(|l| map[l]).collect();
    Ok(language_member(spec, &mapped)?)
}

fn bits_for(count: usize) -> usize {
    let mut b = 0;
    while (1usize << b) < count {
        b += 1;
    }
    b
}

fn code(vars: &[String], x: &Term, value: usize) -> Formula {
    let w = vars.len();
    and(vars.iter().enumerate().map(|(i, v)| {
        let atom = member(v.clone(), vec![x.clone()]);
        if (value >> (w - 1 - i)) & 1 == 1 {
            atom
        } else {
            not(atom)
        }
    }))
}

fn succ(y: &Term, x: &Term) -> Formula {
    and([
        lt(y.clone(), x.clone()),
        not(exists(
            "z_",
            and([lt(y.clone(), Term::var("z_")), lt(Term::var("z_"), x.clone())]),
        )),
    ])
}

/// A `Q1` sentence over the input alphabet that holds exactly on the words
/// the automaton accepts relative to `spec`.
///
/// Each position carries the binary code of the branch taken there followed
/// by the code of the state reached, so instances ordered by rank list the
/// leaves left to right. Instances that do not describe a path emit the
/// neutral letter, which must be the last letter of `spec`. The sentence
/// needs a nonempty input.
pub fn leaf_sentence(m: &LeafAutomaton, spec: &LanguageSpec) -> Result<Formula, LeafError> {
    let s = spec.alphabet().len();
    if spec.declared_neutral() != Some(s - 1) {
        return Err(LeafError::NoNeutralLetter(spec.name().to_string()));
    }
    let map = leaf_letter_map(m, spec)?;
    let choice_bits = bits_for(m.max_branching());
    let state_bits = bits_for(m.states.len()).max(1);
    let choices: Vec<String> = (1..=choice_bits).map(|i| format!("C{i}")).collect();
    let states: Vec<String> = (1..=state_bits).map(|i| format!("S{i}")).collect();
    let x = Term::var("x");
    let y = Term::var("y");
    let trans = |q: usize, x: &Term| -> Formula {
        or((0..m.input.len()).map(|a| {
            and([
                letter(m.input.letter(a), x.clone()),
                or(m.successors(q, a)
                    .iter()
                    .enumerate()
                    .map(|(c, &t)| and([code(&choices, x, c), code(&states, x, t)]))),
            ])
        }))
    };
    let valid = forall(
        "x",
        and([
            implies(Formula::Eq(x.clone(), Term::Min), trans(m.start, &x)),
            implies(
                not(Formula::Eq(x.clone(), Term::Min)),
                exists(
                    "y",
                    and([
                        or((0..m.states.len()).map(|q| and([code(&states, &y, q), trans(q, &x)]))),
                        succ(&y, &x),
                    ]),
                ),
            ),
        ]),
    );
    let args = (0..s - 1)
        .map(|i| {
            let ends = (0..m.states.len())
                .filter(|&q| map[m.beta(q)] == i)
                .map(|q| code(&states, &Term::Max, q));
            and([valid.clone(), or(ends)])
        })
        .collect();
    let mut vars = choices.clone();
    vars.extend(states.iter().cloned());
    Ok(Formula::LindSo {
        lang: spec.name().to_string(),
        order: InstanceOrder::Interleaved,
        arity: 1,
        vars,
        args,
    })
}

/// Leaf counts that fit in `u64`, for callers sizing buffers.
pub fn leaf_count_u64(m: &LeafAutomaton, word: &[usize]) -> Option<u64> {
    leaf_count(m, word).to_u64()
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn doubling() -> LeafAutomaton {
        LeafAutomaton::from_named(
            &["q"],
            Alphabet::parse("a").unwrap(),
            Alphabet::parse("x").unwrap(),
            "q",
            &[("q", 'a', &["q", "q"])],
            &[("q", 'x')],
        )
        .unwrap()
    }

    /// δ(p,a) = p q, δ(q,a) = q, β(p) = 0, β(q) = 1.
    pub fn pq() -> LeafAutomaton {
        LeafAutomaton::from_named(
            &["p", "q"],
            Alphabet::parse("a").unwrap(),
            Alphabet::parse("1,0").unwrap(),
            "p",
            &[("p", 'a', &["p", "q"]), ("q", 'a', &["q"])],
            &[("p", '0'), ("q", '1')],
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::algebra::{builtin, Languages};
    use crate::logic::{eval, Assignment, Structure};

    fn a(n: usize) -> Vec<usize> {
        vec![0; n]
    }

    #[test]
    fn leaf_string_examples() {
        let m = doubling();
        assert_eq!(m.leaf().decode(&leaf_string(&m, &a(3), 1 << 10).unwrap()), "xxxxxxxx");
        assert_eq!(leaf_count(&m, &a(10)), BigUint::from(1024u32));
        let m = pq();
        assert_eq!(m.leaf().decode(&leaf_string(&m, &a(2), 100).unwrap()), "011");
        assert_eq!(leaf_count(&m, &a(2)), BigUint::from(3u32));
        assert_eq!(m.leaf().decode(&leaf_string(&m, &[], 100).unwrap()), "0");
    }

    #[test]
    fn cap_reports_exact_length() {
        let err = leaf_string(&doubling(), &a(70), 1000).unwrap_err();
        match err {
            LeafError::CapExceeded { required, .. } => {
                assert_eq!(required, BigUint::one() << 70usize)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn stream_matches_materialised() {
        for m in [doubling(), pq()] {
            for n in 0..8 {
                let full = leaf_string(&m, &a(n), 1 << 16).unwrap();
                let mut streamed = Vec::new();
                let visited = leaf_stream(&m, &a(n), &mut |l| {
                    streamed.push(l);
                    true
                });
                assert_eq!(streamed, full);
                assert_eq!(visited as usize, full.len());
            }
        }
    }

    #[test]
    fn membership() {
        let lexists = builtin("Lexists").unwrap();
        assert!(leaffa_member(&pq(), &lexists, &a(2), 100).unwrap());
        let maj = builtin("Maj").unwrap();
        let ones = LeafAutomaton::from_named(
            &["q"],
            Alphabet::parse("a,b").unwrap(),
            Alphabet::parse("1").unwrap(),
            "q",
            &[("q", 'a', &["q", "q"]), ("q", 'b', &["q", "q"])],
            &[("q", '1')],
        )
        .unwrap();
        for w in ones.input().words_up_to(0, 4) {
            assert!(leaffa_member(&ones, &maj, &w, 1 << 10).unwrap());
        }
        assert!(matches!(
            leaffa_member(&doubling(), &lexists, &a(1), 10),
            Err(LeafError::LeafLetter('x'))
        ));
    }

    #[test]
    fn sentence_matches_automaton() {
        let langs = Languages::with_builtins();
        let spec = builtin("Lmod2").unwrap();
        let m = pq();
        let phi = leaf_sentence(&m, &spec).unwrap();
        for n in 1..=6 {
            let s = Structure::from_word(m.input().clone(), a(n));
            let direct = leaffa_member(&m, &spec, &a(n), 1 << 20).unwrap();
            assert_eq!(eval(&langs, &s, &Assignment::new(), &phi).unwrap(), direct, "n={n}");
        }
    }
}
