use crate::alphabet::Alphabet;

use super::AlgebraError;

const MAX_NONTERMINALS: usize = 64;

/// Right-hand side of a CNF production.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CfgRule {
    Pair(usize, usize),
    Terminal(usize),
}

/// A grammar in Chomsky normal form. Membership of the empty word is carried
/// by a flag rather than by an ε-production.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cfg {
    nonterminals: Vec<String>,
    terminals: Alphabet,
    rules: Vec<(usize, CfgRule)>,
    start: usize,
    epsilon: bool,
    // left child -> (head, right child)
    by_left: Vec<Vec<(usize, usize)>>,
    // terminal -> bitmask of heads
    by_terminal: Vec<u64>,
}

impl Cfg {
    pub fn new(
        nonterminals: Vec<String>,
        terminals: Alphabet,
        rules: Vec<(usize, CfgRule)>,
        start: usize,
        epsilon: bool,
    ) -> Result<Self, AlgebraError> {
        let v = nonterminals.len();
        if v == 0 {
            return Err(AlgebraError::NotCnf("no nonterminals".into()));
        }
        if v > MAX_NONTERMINALS {
            return Err(AlgebraError::TooManyNonterminals(v, MAX_NONTERMINALS));
        }
        for (i, s) in nonterminals.iter().enumerate() {
            if nonterminals[..i].contains(s) {
                return Err(AlgebraError::NotCnf(format!("duplicate nonterminal '{s}'")));
            }
        }
        if start >= v {
            return Err(AlgebraError::NotCnf("start symbol out of range".into()));
        }
        let mut by_left = vec![Vec::new(); v];
        let mut by_terminal = vec![0u64; terminals.len()];
        for &(head, rhs) in &rules {
            if head >= v {
                return Err(AlgebraError::NotCnf(format!("head {head} out of range")));
            }
            match rhs {
                CfgRule::Pair(b, c) => {
                    if b >= v || c >= v {
                        return Err(AlgebraError::NotCnf(
                            "binary production refers to an unknown nonterminal".into(),
                        ));
                    }
                    if !by_left[b].contains(&(head, c)) {
                        by_left[b].push((head, c));
                    }
                }
                CfgRule::Terminal(a) => {
                    if a >= terminals.len() {
                        return Err(AlgebraError::NotCnf(
                            "terminal production uses a letter outside the alphabet".into(),
                        ));
                    }
                    by_terminal[a] |= 1 << head;
                }
            }
        }
        Ok(Cfg {
            nonterminals,
            terminals,
            rules,
            start,
            epsilon,
            by_left,
            by_terminal,
        })
    }

    /// Builds a grammar from rules written as `("S", &["L", "R"])` or
    /// `("L", &["("])`; a single-symbol right side is a terminal. The first
    /// head is the start symbol.
    pub fn from_named(terminals: Alphabet, epsilon: bool, rules: &[(&str, &[&str])]) -> Result<Self, AlgebraError> {
        let mut names: Vec<String> = Vec::new();
        for (head, rhs) in rules {
            if !names.iter().any(|n| n == head) {
                names.push(head.to_string());
            }
            if rhs.len() == 2 {
                for sym in rhs.iter() {
                    if !names.iter().any(|n| n == sym) {
                        names.push(sym.to_string());
                    }
                }
            }
        }
        let idx = |s: &str| names.iter().position(|n| n == s).unwrap();
        let mut out = Vec::new();
        for (head, rhs) in rules {
            let rule = match rhs.len() {
                2 => CfgRule::Pair(idx(rhs[0]), idx(rhs[1])),
                1 => {
                    let mut chars = rhs[0].chars();
                    let c = chars.next().unwrap_or(' ');
                    if chars.next().is_some() {
                        return Err(AlgebraError::NotCnf(format!(
                            "terminal '{}' is not a single letter",
                            rhs[0]
                        )));
                    }
                    let a = terminals
                        .index_of(c)
                        .ok_or_else(|| AlgebraError::NotCnf(format!("terminal '{c}' not in alphabet")))?;
                    CfgRule::Terminal(a)
                }
                _ => {
                    return Err(AlgebraError::NotCnf(format!(
                        "production for '{head}' has {} symbols",
                        rhs.len()
                    )))
                }
            };
            out.push((idx(head), rule));
        }
        let start = idx(rules.first().map(|r| r.0).unwrap_or(""));
        Cfg::new(names, terminals, out, start, epsilon)
    }

    pub fn nonterminals(&self) -> &[String] {
        &self.nonterminals
    }

    pub fn terminals(&self) -> &Alphabet {
        &self.terminals
    }

    pub fn rules(&self) -> &[(usize, CfgRule)] {
        &self.rules
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn epsilon_in_language(&self) -> bool {
        self.epsilon
    }

    /// Heads `A` with `A -> a`, as a bitmask.
    pub(crate) fn terminal_heads(&self, a: usize) -> u64 {
        self.by_terminal[a]
    }

    /// Heads of `A -> B C` for `B` in `left` and `C` in `right`, as a bitmask.
    pub(crate) fn combine(&self, left: u64, right: u64) -> u64 {
        let mut out = 0u64;
        let mut bits = left;
        while bits != 0 {
            let b = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            for &(head, c) in &self.by_left[b] {
                if right >> c & 1 == 1 {
                    out |= 1 << head;
                }
            }
        }
        out
    }

    /// The grammar of `L` with a fresh letter inserted anywhere, any number of
    /// times; the new letter is appended last to the alphabet.
    pub fn with_neutral_letter(&self, letter: char) -> Result<Self, AlgebraError> {
        let terminals = self.terminals.with_letter(letter)?;
        let pad = terminals.len() - 1;
        let mut names = self.nonterminals.clone();
        let fresh = |names: &Vec<String>, base: &str| {
            let mut name = base.to_string();
            while names.contains(&name) {
                name.push('\'');
            }
            name
        };
        let e = names.len();
        names.push(fresh(&names, "E#"));
        let mut rules = self.rules.clone();
        rules.push((e, CfgRule::Terminal(pad)));
        for a in 0..self.nonterminals.len() {
            rules.push((a, CfgRule::Pair(e, a)));
            rules.push((a, CfgRule::Pair(a, e)));
        }
        let mut start = self.start;
        if self.epsilon {
            let s0 = names.len();
            names.push(fresh(&names, "S0"));
            let f = names.len();
            names.push(fresh(&names, "F#"));
            let copies: Vec<(usize, CfgRule)> = rules
                .iter()
                .filter(|(h, _)| *h == self.start)
                .map(|&(_, r)| (s0, r))
                .collect();
            rules.extend(copies);
            rules.push((s0, CfgRule::Terminal(pad)));
            rules.push((s0, CfgRule::Pair(f, f)));
            rules.push((f, CfgRule::Terminal(pad)));
            rules.push((f, CfgRule::Pair(f, f)));
            start = s0;
        }
        Cfg::new(names, terminals, rules, start, self.epsilon)
    }
}

/// CYK membership; the empty word is decided by the grammar's flag.
pub fn cyk_member(g: &Cfg, word: &[usize]) -> bool {
    let n = word.len();
    if n == 0 {
        return g.epsilon;
    }
    if word.iter().any(|&a| a >= g.terminals.len()) {
        return false;
    }
    // cell (i, len) at i * n + (len - 1): heads deriving word[i..i+len]
    let mut table = vec![0u64; n * n];
    for (i, &a) in word.iter().enumerate() {
        table[i * n] = g.terminal_heads(a);
    }
    for len in 2..=n {
        for i in 0..=n - len {
            let mut acc = 0u64;
            for left_len in 1..len {
                let left = table[i * n + left_len - 1];
                if left == 0 {
                    continue;
                }
                let right = table[(i + left_len) * n + (len - left_len) - 1];
                if right == 0 {
                    continue;
                }
                acc |= g.combine(left, right);
            }
            table[i * n + len - 1] = acc;
        }
    }
    table[n - 1] >> g.start & 1 == 1
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn parens() -> Cfg {
        Cfg::from_named(
            Alphabet::new("()".chars()).unwrap(),
            false,
            &[
                ("S", &["L", "R"]),
                ("S", &["L", "T"]),
                ("S", &["S", "S"]),
                ("T", &["S", "R"]),
                ("L", &["("]),
                ("R", &[")"]),
            ],
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::parens;
    use super::*;

    fn balanced(word: &str) -> bool {
        let mut depth = 0i32;
        for c in word.chars() {
            depth += if c == '(' { 1 } else { -1 };
            if depth < 0 {
                return false;
            }
        }
        depth == 0
    }

    #[test]
    fn cyk_examples() {
        let g = parens();
        let enc = |s: &str| g.terminals().encode(s).unwrap();
        assert!(cyk_member(&g, &enc("(())")));
        assert!(!cyk_member(&g, &enc(")(")));
        assert!(cyk_member(&g, &enc("()()")));
        assert!(!cyk_member(&g, &enc("((")));
        assert!(!cyk_member(&g, &[]));
    }

    #[test]
    fn cyk_agrees_with_counter() {
        let g = parens();
        for w in g.terminals().words_up_to(1, 10) {
            let text = g.terminals().decode(&w);
            assert_eq!(cyk_member(&g, &w), balanced(&text), "{text}");
        }
    }

    #[test]
    fn padding_inserts_neutral_letter() {
        let g = parens().with_neutral_letter('#').unwrap();
        let enc = |s: &str| g.terminals().encode(s).unwrap();
        assert!(cyk_member(&g, &enc("#(#)#")));
        assert!(cyk_member(&g, &enc("(##)()")));
        assert!(!cyk_member(&g, &enc("#")));
        assert!(!cyk_member(&g, &enc("(#(")));
    }

    #[test]
    fn non_cnf_rejected() {
        let err = Cfg::from_named(Alphabet::new("ab".chars()).unwrap(), false, &[("S", &["A", "B", "C"])]);
        assert!(matches!(err, Err(AlgebraError::NotCnf(_))));
    }
}
