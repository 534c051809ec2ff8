use std::collections::BTreeSet;

use super::AlgebraError;

/// Default word-length cap for [`brute_force_bracketings`]; the number of
/// bracketings grows with the Catalan numbers.
pub const DEFAULT_BRACKETING_CAP: usize = 12;

/// A finite multiplication table with an identity element.
///
/// The table is not required to be associative. Row operand is on the left:
/// `mul(x, y)` is the entry in row `x`, column `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Magma {
    name: String,
    elements: Vec<String>,
    table: Vec<usize>,
    identity: usize,
}

impl Magma {
    pub fn new(
        name: impl Into<String>,
        elements: Vec<String>,
        table: Vec<Vec<usize>>,
        identity: usize,
    ) -> Result<Self, AlgebraError> {
        let g = elements.len();
        if g == 0 {
            return Err(AlgebraError::NoElements);
        }
        for (i, e) in elements.iter().enumerate() {
            if elements[..i].contains(e) {
                return Err(AlgebraError::DuplicateElement(e.clone()));
            }
        }
        if table.len() != g {
            return Err(AlgebraError::TableShape {
                expected: g,
                found: table.len(),
            });
        }
        let mut flat = Vec::with_capacity(g * g);
        for row in &table {
            if row.len() != g {
                return Err(AlgebraError::TableShape {
                    expected: g,
                    found: row.len(),
                });
            }
            for &v in row {
                if v >= g {
                    return Err(AlgebraError::EntryOutOfRange { value: v, order: g });
                }
                flat.push(v);
            }
        }
        if identity >= g {
            return Err(AlgebraError::EntryOutOfRange {
                value: identity,
                order: g,
            });
        }
        let magma = Magma {
            name: name.into(),
            elements,
            table: flat,
            identity,
        };
        for x in 0..g {
            if magma.mul(identity, x) != x || magma.mul(x, identity) != x {
                return Err(AlgebraError::IdentityLaw(magma.elements[x].clone()));
            }
        }
        Ok(magma)
    }

    /// Builds a magma from element names and a table of names.
    pub fn from_names(
        name: impl Into<String>,
        elements: &[&str],
        rows: &[&[&str]],
        identity: &str,
    ) -> Result<Self, AlgebraError> {
        let elements: Vec<String> = elements.iter().map(|s| s.to_string()).collect();
        let lookup = |s: &str| {
            elements
                .iter()
                .position(|e| e == s)
                .ok_or_else(|| AlgebraError::UnknownElement(s.to_string()))
        };
        let table = rows
            .iter()
            .map(|row| row.iter().map(|s| lookup(s)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let identity = lookup(identity)?;
        Magma::new(name, elements, table, identity)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn element_name(&self, x: usize) -> &str {
        &self.elements[x]
    }

    pub fn element_index(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.elements.len() + y]
    }

    pub fn row(&self, x: usize) -> &[usize] {
        let g = self.order();
        &self.table[x * g..(x + 1) * g]
    }

    /// First triple `(x, y, z)` with `(xy)z != x(yz)`, if any.
    pub fn associativity_witness(&self) -> Option<(usize, usize, usize)> {
        let g = self.order();
        for x in 0..g {
            for y in 0..g {
                let xy = self.mul(x, y);
                for z in 0..g {
                    if self.mul(xy, z) != self.mul(x, self.mul(y, z)) {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    pub(crate) fn check_word(&self, word: &[usize]) -> Result<(), AlgebraError> {
        match word.iter().find(|&&x| x >= self.order()) {
            Some(&x) => Err(AlgebraError::LetterOutOfRange(x)),
            None => Ok(()),
        }
    }
}

pub fn check_associative(m: &Magma) -> bool {
    m.associativity_witness().is_none()
}

/// Element sets as bitmasks over the magma's elements.
#[derive(Clone, PartialEq, Eq)]
struct ElementBits(Vec<u64>);

impl ElementBits {
    fn empty(g: usize) -> Self {
        ElementBits(vec![0; g.div_ceil(64)])
    }

    fn insert(&mut self, x: usize) {
        self.0[x >> 6] |= 1 << (x & 63);
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &bits)| {
            let mut bits = bits;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let t = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + t)
            })
        })
    }
}

/// Every element some bracketing of `word` multiplies out to.
///
/// Interval dynamic programming over `R[i][j]`, the set reachable by the
/// factor `word[i..=j]`.
pub fn groupoid_reachable(m: &Magma, word: &[usize]) -> Result<BTreeSet<usize>, AlgebraError> {
    if word.is_empty() {
        return Err(AlgebraError::EmptyWord);
    }
    m.check_word(word)?;
    let n = word.len();
    let g = m.order();
    // cells[i * n + j] holds R[i][j]
    let mut cells = vec![ElementBits::empty(g); n * n];
    for (i, &x) in word.iter().enumerate() {
        cells[i * n + i].insert(x);
    }
    for span in 1..n {
        for i in 0..n - span {
            let j = i + span;
            let mut acc = ElementBits::empty(g);
            for k in i..j {
                let left = &cells[i * n + k];
                let right = &cells[(k + 1) * n + j];
                for x in left.iter() {
                    let row = m.row(x);
                    for y in right.iter() {
                        acc.insert(row[y]);
                    }
                }
            }
            cells[i * n + j] = acc;
        }
    }
    Ok(cells[n - 1].iter().collect())
}

const MUL: u8 = u8::MAX;

/// Enumerates every full binary bracketing of a word and evaluates each one
/// separately. Bracketings are kept as postfix programs, cached per length.
#[derive(Debug, Clone)]
pub struct BracketingOracle {
    cap: usize,
    programs: Vec<Option<Vec<Vec<u8>>>>,
}

impl BracketingOracle {
    pub fn new(cap: usize) -> Self {
        BracketingOracle {
            cap: cap.min(MUL as usize - 1),
            programs: Vec::new(),
        }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    fn shapes(lo: usize, hi: usize) -> Vec<Vec<u8>> {
        if hi - lo == 1 {
            return vec![vec![lo as u8]];
        }
        let mut out = Vec::new();
        for split in lo + 1..hi {
            let lefts = Self::shapes(lo, split);
            let rights = Self::shapes(split, hi);
            for l in &lefts {
                for r in &rights {
                    let mut p = Vec::with_capacity(l.len() + r.len() + 1);
                    p.extend_from_slice(l);
                    p.extend_from_slice(r);
                    p.push(MUL);
                    out.push(p);
                }
            }
        }
        out
    }

    /// Number of bracketings of a word of the given length.
    pub fn count(&mut self, len: usize) -> Result<usize, AlgebraError> {
        Ok(self.programs_for(len)?.len())
    }

    fn programs_for(&mut self, len: usize) -> Result<&[Vec<u8>], AlgebraError> {
        if len == 0 {
            return Err(AlgebraError::EmptyWord);
        }
        if len > self.cap {
            return Err(AlgebraError::CapExceeded { len, cap: self.cap });
        }
        if self.programs.len() <= len {
            self.programs.resize(len + 1, None);
        }
        if self.programs[len].is_none() {
            self.programs[len] = Some(Self::shapes(0, len));
        }
        Ok(self.programs[len].as_deref().unwrap())
    }

    pub fn evaluate(&mut self, m: &Magma, word: &[usize]) -> Result<BTreeSet<usize>, AlgebraError> {
        m.check_word(word)?;
        let programs = self.programs_for(word.len())?;
        let mut results = vec![false; m.order()];
        let mut stack = Vec::with_capacity(word.len());
        let mut hits = 0;
        for program in programs {
            stack.clear();
            for &op in program {
                if op == MUL {
                    let y = stack.pop().unwrap();
                    let x = stack.pop().unwrap();
                    stack.push(m.mul(x, y));
                } else {
                    stack.push(word[op as usize]);
                }
            }
            if !results[stack[0]] {
                results[stack[0]] = true;
                hits += 1;
                if hits == results.len() {
                    break;
                }
            }
        }
        Ok(results
            .iter()
            .enumerate()
            .filter_map(|(x, &hit)| hit.then_some(x))
            .collect())
    }
}

/// Independent oracle for [`groupoid_reachable`]: the set of values of all
/// bracketings, found by explicit enumeration.
pub fn brute_force_bracketings(m: &Magma, word: &[usize], cap: usize) -> Result<BTreeSet<usize>, AlgebraError> {
    BracketingOracle::new(cap).evaluate(m, word)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::Magma;

    pub fn g4() -> Magma {
        Magma::from_names(
            "G4",
            &["e", "a", "b", "c"],
            &[
                &["e", "a", "b", "c"],
                &["a", "b", "c", "a"],
                &["b", "e", "a", "b"],
                &["c", "c", "b", "e"],
            ],
            "e",
        )
        .unwrap()
    }

    pub fn z2() -> Magma {
        Magma::from_names("Z2", &["0", "1"], &[&["0", "1"], &["1", "0"]], "0").unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::{g4, z2};
    use super::*;

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    #[test]
    fn associativity() {
        assert!(check_associative(&z2()));
        let g = g4();
        assert!(!check_associative(&g));
        let (a, e, c) = (1, 0, 3);
        // (a·a)·a = e but a·(a·a) = c
        assert_eq!(g.mul(g.mul(a, a), a), e);
        assert_eq!(g.mul(a, g.mul(a, a)), c);
        let trivial = Magma::new("1", vec!["e".into()], vec![vec![0]], 0).unwrap();
        assert!(check_associative(&trivial));
    }

    #[test]
    fn identity_law_enforced() {
        let err = Magma::from_names("bad", &["e", "a"], &[&["e", "a"], &["e", "a"]], "e");
        assert_eq!(err.unwrap_err(), AlgebraError::IdentityLaw("a".into()));
    }

    #[test]
    fn reachable_sets_for_g4() {
        let g = g4();
        let (e, a, b, c) = (0, 1, 2, 3);
        assert_eq!(groupoid_reachable(&g, &[a]).unwrap(), set(&[a]));
        assert_eq!(groupoid_reachable(&g, &[a, a]).unwrap(), set(&[b]));
        assert_eq!(groupoid_reachable(&g, &[a, a, a]).unwrap(), set(&[e, c]));
        assert_eq!(groupoid_reachable(&g, &[a, a, a, a]).unwrap(), set(&[a, c]));
        assert_eq!(groupoid_reachable(&g, &[]).unwrap_err(), AlgebraError::EmptyWord);
    }

    #[test]
    fn brute_force_examples() {
        let g = g4();
        let (e, a, b, c) = (0, 1, 2, 3);
        assert_eq!(brute_force_bracketings(&g, &[a, a], 12).unwrap(), set(&[b]));
        assert_eq!(brute_force_bracketings(&g, &[a, a, a], 12).unwrap(), set(&[e, c]));
        assert_eq!(brute_force_bracketings(&z2(), &[1, 1, 1], 12).unwrap(), set(&[1]));
        assert_eq!(
            brute_force_bracketings(&g, &[a; 13], 12).unwrap_err(),
            AlgebraError::CapExceeded { len: 13, cap: 12 }
        );
    }

    #[test]
    fn catalan_counts() {
        let mut oracle = BracketingOracle::new(12);
        let counts: Vec<usize> = (1..=8).map(|l| oracle.count(l).unwrap()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 14, 42, 132, 429]);
    }

    #[test]
    fn dp_matches_enumeration_on_g4() {
        let g = g4();
        let mut oracle = BracketingOracle::new(12);
        for len in 1..=6 {
            for word in crate::alphabet::Alphabet::new("eabc".chars())
                .unwrap()
                .words_of_length(len)
            {
                assert_eq!(
                    groupoid_reachable(&g, &word).unwrap(),
                    oracle.evaluate(&g, &word).unwrap()
                );
            }
        }
    }
}
