//! Ordered alphabets and words over them.
//!
//! Every alphabet carries an explicit linear order: letter `i` is the
//! `i`-th symbol of the sequence it was built from. Words are stored as
//! sequences of letter indices.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlphabetError {
    #[error("letter '{0}' occurs twice in alphabet")]
    DuplicateLetter(char),
    #[error("letter '{0}' is not in the alphabet {1}")]
    UnknownLetter(char, String),
}

/// A finite, ordered alphabet of single-character letters.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Alphabet {
    letters: Vec<char>,
}

impl Alphabet {
    pub fn new(letters: impl IntoIterator<Item = char>) -> Result<Self, AlphabetError> {
        let letters: Vec<char> = letters.into_iter().collect();
        for (i, c) in letters.iter().enumerate() {
            if letters[..i].contains(c) {
                return Err(AlphabetError::DuplicateLetter(*c));
            }
        }
        Ok(Alphabet { letters })
    }

    /// Parses `"a,b,c"` or `"abc"`.
    pub fn parse(text: &str) -> Result<Self, AlphabetError> {
        if text.contains(',') {
            Alphabet::new(text.split(',').filter_map(|t| t.trim().chars().next()))
        } else {
            Alphabet::new(text.chars().filter(|c| !c.is_whitespace()))
        }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[char] {
        &self.letters
    }

    pub fn letter(&self, index: usize) -> char {
        self.letters[index]
    }

    pub fn index_of(&self, letter: char) -> Option<usize> {
        self.letters.iter().position(|&c| c == letter)
    }

    pub fn contains(&self, letter: char) -> bool {
        self.letters.contains(&letter)
    }

    /// Appends a letter at the end of the order.
    pub fn with_letter(&self, letter: char) -> Result<Self, AlphabetError> {
        let mut letters = self.letters.clone();
        letters.push(letter);
        Alphabet::new(letters)
    }

    pub fn encode(&self, text: &str) -> Result<Vec<usize>, AlphabetError> {
        text.chars()
            .map(|c| {
                self.index_of(c)
                    .ok_or_else(|| AlphabetError::UnknownLetter(c, self.to_string()))
            })
            .collect()
    }

    pub fn decode(&self, word: &[usize]) -> String {
        word.iter().map(|&i| self.letters[i]).collect()
    }

    /// All words of exactly `len` letters, in lexicographic order of the
    /// alphabet's own order.
    pub fn words_of_length(&self, len: usize) -> Words {
        Words::new(self.len(), len)
    }

    /// All words with `min_len <= |w| <= max_len`, shortest first.
    pub fn words_up_to(&self, min_len: usize, max_len: usize) -> impl Iterator<Item = Vec<usize>> {
        let size = self.len();
        (min_len..=max_len).flat_map(move |len| Words::new(size, len))
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Odometer over `size^len` words.
pub struct Words {
    size: usize,
    current: Option<Vec<usize>>,
}

impl Words {
    fn new(size: usize, len: usize) -> Self {
        let current = if size == 0 && len > 0 { None } else { Some(vec![0; len]) };
        Words { size, current }
    }
}

impl Iterator for Words {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let cur = self.current.as_mut().unwrap();
        let mut i = cur.len();
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < self.size {
                break;
            }
            cur[i] = 0;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_explicit() {
        let a = Alphabet::parse("1,0").unwrap();
        assert_eq!(a.index_of('1'), Some(0));
        assert_eq!(a.encode("010").unwrap(), vec![1, 0, 1]);
        assert_eq!(a.decode(&[0, 0, 1]), "110");
    }

    #[test]
    fn duplicate_rejected() {
        assert_eq!(Alphabet::parse("aba").unwrap_err(), AlphabetError::DuplicateLetter('a'));
    }

    #[test]
    fn word_enumeration() {
        let a = Alphabet::parse("ab").unwrap();
        let words: Vec<String> = a.words_up_to(0, 2).map(|w| a.decode(&w)).collect();
        assert_eq!(words, vec!["", "a", "b", "aa", "ab", "ba", "bb"]);
        assert_eq!(Alphabet::default().words_of_length(0).count(), 1);
        assert_eq!(Alphabet::default().words_of_length(2).count(), 0);
    }
}
