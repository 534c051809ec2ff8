use crate::alphabet::Alphabet;

use super::AlgebraError;

/// A complete deterministic automaton over an ordered alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    states: Vec<String>,
    alphabet: Alphabet,
    delta: Vec<usize>,
    start: usize,
    finals: Vec<bool>,
    absorbing: Vec<bool>,
}

impl Dfa {
    /// `delta[q][a]` is the successor of state `q` on letter index `a`.
    pub fn new(
        states: Vec<String>,
        alphabet: Alphabet,
        delta: Vec<Vec<usize>>,
        start: usize,
        finals: &[usize],
    ) -> Result<Self, AlgebraError> {
        let q = states.len();
        if q == 0 {
            return Err(AlgebraError::InvalidDfa("no states".into()));
        }
        for (i, s) in states.iter().enumerate() {
            if states[..i].contains(s) {
                return Err(AlgebraError::InvalidDfa(format!("duplicate state '{s}'")));
            }
        }
        if delta.len() != q {
            return Err(AlgebraError::InvalidDfa(format!(
                "transition table has {} rows for {q} states",
                delta.len()
            )));
        }
        let mut flat = Vec::with_capacity(q * alphabet.len());
        for (from, row) in delta.iter().enumerate() {
            if row.len() != alphabet.len() {
                return Err(AlgebraError::InvalidDfa(format!(
                    "state '{}' lacks a transition for some letter",
                    states[from]
                )));
            }
            for &to in row {
                if to >= q {
                    return Err(AlgebraError::InvalidDfa(format!("target {to} out of range")));
                }
                flat.push(to);
            }
        }
        if start >= q {
            return Err(AlgebraError::InvalidDfa("start state out of range".into()));
        }
        let mut final_flags = vec![false; q];
        for &f in finals {
            if f >= q {
                return Err(AlgebraError::InvalidDfa("final state out of range".into()));
            }
            final_flags[f] = true;
        }
        let s = alphabet.len();
        let absorbing = (0..q)
            .map(|from| flat[from * s..(from + 1) * s].iter().all(|&to| to == from))
            .collect();
        Ok(Dfa {
            states,
            alphabet,
            delta: flat,
            start,
            finals: final_flags,
            absorbing,
        })
    }

    /// Convenience constructor from `(from, letter, to)` triples by name.
    pub fn from_triples(
        states: &[&str],
        alphabet: Alphabet,
        start: &str,
        finals: &[&str],
        transitions: &[(&str, char, &str)],
    ) -> Result<Self, AlgebraError> {
        let names: Vec<String> = states.iter().map(|s| s.to_string()).collect();
        let idx = |s: &str| {
            names
                .iter()
                .position(|n| n == s)
                .ok_or_else(|| AlgebraError::InvalidDfa(format!("unknown state '{s}'")))
        };
        let mut delta = vec![vec![usize::MAX; alphabet.len()]; names.len()];
        for &(from, letter, to) in transitions {
            let a = alphabet
                .index_of(letter)
                .ok_or_else(|| AlgebraError::InvalidDfa(format!("unknown letter '{letter}'")))?;
            delta[idx(from)?][a] = idx(to)?;
        }
        if let Some((q, _)) = delta.iter().enumerate().find(|(_, row)| row.contains(&usize::MAX)) {
            return Err(AlgebraError::InvalidDfa(format!(
                "state '{}' lacks a transition for some letter",
                names[q]
            )));
        }
        let finals = finals.iter().map(|f| idx(f)).collect::<Result<Vec<_>, _>>()?;
        let start = idx(start)?;
        Dfa::new(names, alphabet, delta, start, &finals)
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn is_final(&self, q: usize) -> bool {
        self.finals[q]
    }

    pub fn finals(&self) -> impl Iterator<Item = usize> + '_ {
        self.finals.iter().enumerate().filter_map(|(q, &f)| f.then_some(q))
    }

    /// True when every letter loops on `q`.
    pub fn is_absorbing(&self, q: usize) -> bool {
        self.absorbing[q]
    }

    #[inline]
    pub fn step(&self, q: usize, letter: usize) -> usize {
        self.delta[q * self.alphabet.len() + letter]
    }

    pub fn run_from(&self, q: usize, word: &[usize]) -> usize {
        word.iter().fold(q, |q, &a| self.step(q, a))
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        self.finals[self.run_from(self.start, word)]
    }

    /// Same automaton with an extra letter appended to the alphabet that
    /// loops on every state.
    pub fn with_skip_letter(&self, letter: char) -> Result<Self, AlgebraError> {
        let alphabet = self.alphabet.with_letter(letter)?;
        let s = self.alphabet.len();
        let delta = (0..self.states.len())
            .map(|q| {
                let mut row: Vec<usize> = self.delta[q * s..(q + 1) * s].to_vec();
                row.push(q);
                row
            })
            .collect();
        let finals: Vec<usize> = self.finals().collect();
        Dfa::new(self.states.clone(), alphabet, delta, self.start, &finals)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exists_automaton() {
        let alphabet = Alphabet::parse("1,0").unwrap();
        let d = Dfa::from_triples(
            &["q0", "q1"],
            alphabet.clone(),
            "q0",
            &["q1"],
            &[
                ("q0", '0', "q0"),
                ("q0", '1', "q1"),
                ("q1", '0', "q1"),
                ("q1", '1', "q1"),
            ],
        )
        .unwrap();
        assert!(d.accepts(&alphabet.encode("001").unwrap()));
        assert!(!d.accepts(&alphabet.encode("000").unwrap()));
        assert!(!d.accepts(&[]));
    }

    #[test]
    fn partial_transition_rejected() {
        let err = Dfa::from_triples(&["q0"], Alphabet::parse("ab").unwrap(), "q0", &[], &[("q0", 'a', "q0")]);
        assert!(matches!(err, Err(AlgebraError::InvalidDfa(_))));
    }
}
