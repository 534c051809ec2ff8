use std::collections::BTreeMap;
use std::fmt;

use crate::alphabet::{Alphabet, AlphabetError};

/// A finite structure with domain `{0..n-1}`: a word over an ordered
/// alphabet (one letter per position), optionally with named constants.
///
/// Constant-signature structures use an empty alphabet and carry no letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Structure {
    alphabet: Alphabet,
    size: usize,
    letters: Vec<usize>,
    constants: BTreeMap<String, usize>,
}

impl Structure {
    pub fn from_word(alphabet: Alphabet, word: Vec<usize>) -> Self {
        assert!(word.iter().all(|&a| a < alphabet.len()), "letter out of range");
        Structure {
            alphabet,
            size: word.len(),
            letters: word,
            constants: BTreeMap::new(),
        }
    }

    pub fn from_string(alphabet: &Alphabet, text: &str) -> Result<Self, AlphabetError> {
        let word = alphabet.encode(text)?;
        Ok(Structure::from_word(alphabet.clone(), word))
    }

    /// A structure over a pure constant signature.
    pub fn with_constants(size: usize, constants: impl IntoIterator<Item = (String, usize)>) -> Self {
        let constants: BTreeMap<String, usize> = constants.into_iter().collect();
        assert!(constants.values().all(|&v| v < size), "constant outside the domain");
        Structure {
            alphabet: Alphabet::default(),
            size,
            letters: Vec::new(),
            constants,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn has_letters(&self) -> bool {
        !self.alphabet.is_empty()
    }

    pub fn letter_at(&self, pos: usize) -> usize {
        self.letters[pos]
    }

    pub fn constants(&self) -> &BTreeMap<String, usize> {
        &self.constants
    }

    pub fn constant(&self, name: &str) -> Option<usize> {
        self.constants.get(name).copied()
    }

    pub fn text(&self) -> String {
        self.alphabet.decode(&self.letters)
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.has_letters() {
            write!(f, "n={}", self.size)?;
        } else if self.size == 0 {
            write!(f, "ε")?;
        } else {
            write!(f, "{}", self.text())?;
        }
        for (name, v) in &self.constants {
            write!(f, ";{name}={v}")?;
        }
        Ok(())
    }
}

/// A relation of fixed arity over `{0..n-1}`, stored as one flag per tuple in
/// lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    arity: usize,
    domain: usize,
    bits: Vec<bool>,
}

impl Relation {
    pub fn empty(arity: usize, domain: usize) -> Self {
        Relation {
            arity,
            domain,
            bits: vec![false; domain.pow(arity as u32)],
        }
    }

    pub fn from_bits(arity: usize, domain: usize, bits: Vec<bool>) -> Self {
        assert_eq!(bits.len(), domain.pow(arity as u32), "wrong number of tuples");
        Relation { arity, domain, bits }
    }

    /// A unary relation from its member positions.
    pub fn unary(domain: usize, members: &[usize]) -> Self {
        let mut r = Relation::empty(1, domain);
        for &x in members {
            r.bits[x] = true;
        }
        r
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn tuple_index(&self, tuple: &[usize]) -> usize {
        tuple.iter().fold(0, |acc, &x| acc * self.domain + x)
    }

    pub fn contains(&self, tuple: &[usize]) -> bool {
        self.bits[self.tuple_index(tuple)]
    }

    pub fn insert(&mut self, tuple: &[usize]) {
        let i = self.tuple_index(tuple);
        self.bits[i] = true;
    }

    pub fn tuples(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        self.bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| {
            let mut t = vec![0; self.arity];
            let mut r = i;
            for slot in t.iter_mut().rev() {
                *slot = r % self.domain;
                r /= self.domain;
            }
            t
        })
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self
            .tuples()
            .map(|t| {
                if t.len() == 1 {
                    t[0].to_string()
                } else {
                    format!("({})", t.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
                }
            })
            .collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

/// Values for free variables.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    pub first_order: BTreeMap<String, usize>,
    pub second_order: BTreeMap<String, Relation>,
}

impl Assignment {
    pub fn new() -> Self {
        Assignment::default()
    }

    pub fn is_empty(&self) -> bool {
        self.first_order.is_empty() && self.second_order.is_empty()
    }

    pub fn set(mut self, var: impl Into<String>, value: usize) -> Self {
        self.first_order.insert(var.into(), value);
        self
    }

    pub fn set_relation(mut self, var: impl Into<String>, rel: Relation) -> Self {
        self.second_order.insert(var.into(), rel);
        self
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "-");
        }
        let mut parts: Vec<String> = self.first_order.iter().map(|(k, v)| format!("{k}={v}")).collect();
        parts.extend(self.second_order.iter().map(|(k, r)| format!("{k}={r}")));
        write!(f, "{}", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn string_readout() {
        let ab = Alphabet::parse("a,b").unwrap();
        let s = Structure::from_string(&ab, "ab").unwrap();
        assert_eq!(s.size(), 2);
        assert_eq!(s.letters(), &[0, 1]);
        let s = Structure::from_string(&ab, "ba").unwrap();
        assert_eq!(s.letters(), &[1, 0]);
        let e = Structure::from_string(&Alphabet::parse("1,0").unwrap(), "").unwrap();
        assert_eq!(e.size(), 0);
        assert_eq!(e.to_string(), "ε");
        assert!(Structure::from_string(&ab, "abc").is_err());
    }

    #[test]
    fn relation_tuples_round_trip() {
        let mut r = Relation::empty(2, 3);
        r.insert(&[2, 1]);
        r.insert(&[0, 2]);
        assert!(r.contains(&[2, 1]));
        assert_eq!(r.tuples().collect::<Vec<_>>(), vec![vec![0, 2], vec![2, 1]]);
        assert_eq!(r.to_string(), "{(0,2),(2,1)}");
    }

    #[test]
    fn constant_structure_display() {
        let s = Structure::with_constants(4, [("c1".to_string(), 2)]);
        assert_eq!(s.to_string(), "n=4;c1=2");
    }
}
