use std::collections::BTreeSet;

use super::magma::{check_associative, groupoid_reachable, Magma};
use super::AlgebraError;

/// The language of words over the elements of a magma that some bracketing
/// multiplies into the accept set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordProblem {
    magma: Magma,
    accept: BTreeSet<usize>,
    associative: bool,
}

impl WordProblem {
    /// Checks associativity eagerly; evaluation dispatches on the result.
    pub fn new(magma: Magma, accept: BTreeSet<usize>) -> Result<Self, AlgebraError> {
        if let Some(&x) = accept.iter().find(|&&x| x >= magma.order()) {
            return Err(AlgebraError::EntryOutOfRange {
                value: x,
                order: magma.order(),
            });
        }
        let associative = check_associative(&magma);
        Ok(WordProblem {
            magma,
            accept,
            associative,
        })
    }

    pub fn magma(&self) -> &Magma {
        &self.magma
    }

    pub fn accept(&self) -> &BTreeSet<usize> {
        &self.accept
    }

    pub fn is_associative(&self) -> bool {
        self.associative
    }

    pub fn accepts_element(&self, x: usize) -> bool {
        self.accept.contains(&x)
    }
}

/// Left fold of the table over `word`, starting from the identity.
pub fn monoid_word_eval(wp: &WordProblem, word: &[usize]) -> Result<usize, AlgebraError> {
    if !wp.associative {
        return Err(AlgebraError::NotAssociative);
    }
    wp.magma.check_word(word)?;
    let m = &wp.magma;
    Ok(word.iter().fold(m.identity(), |acc, &x| m.mul(acc, x)))
}

/// Membership in `W(accept, magma)`. The empty word is a member exactly when
/// the identity is accepted.
pub fn word_problem_member(wp: &WordProblem, word: &[usize]) -> Result<bool, AlgebraError> {
    if word.is_empty() {
        return Ok(wp.accepts_element(wp.magma.identity()));
    }
    if wp.associative {
        let x = monoid_word_eval(wp, word)?;
        return Ok(wp.accepts_element(x));
    }
    let reachable = groupoid_reachable(&wp.magma, word)?;
    Ok(reachable.iter().any(|x| wp.accept.contains(x)))
}

#[cfg(test)]
mod tests {
    use super::super::magma::fixtures::{g4, z2};
    use super::*;

    fn accept(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    #[test]
    fn z2_fold() {
        let wp = WordProblem::new(z2(), accept(&[0])).unwrap();
        assert!(wp.is_associative());
        assert_eq!(monoid_word_eval(&wp, &[1, 1]).unwrap(), 0);
        assert_eq!(monoid_word_eval(&wp, &[1, 0, 1, 1]).unwrap(), 1);
        assert_eq!(monoid_word_eval(&wp, &[]).unwrap(), 0);
        assert!(word_problem_member(&wp, &[1, 1]).unwrap());
        assert!(!word_problem_member(&wp, &[1, 0]).unwrap());
    }

    #[test]
    fn g4_membership() {
        let wp = WordProblem::new(g4(), accept(&[0])).unwrap();
        assert!(!wp.is_associative());
        assert_eq!(monoid_word_eval(&wp, &[1]).unwrap_err(), AlgebraError::NotAssociative);
        assert!(word_problem_member(&wp, &[1, 1, 1]).unwrap());
        assert!(word_problem_member(&wp, &[]).unwrap());
        assert!(!word_problem_member(&wp, &[1, 1]).unwrap());
    }

    #[test]
    fn associative_reachable_is_singleton() {
        let wp = WordProblem::new(z2(), accept(&[0])).unwrap();
        for word in crate::alphabet::Alphabet::new("01".chars()).unwrap().words_up_to(1, 6) {
            let reach = groupoid_reachable(wp.magma(), &word).unwrap();
            assert_eq!(reach.len(), 1);
            assert_eq!(*reach.iter().next().unwrap(), monoid_word_eval(&wp, &word).unwrap());
        }
    }
}
