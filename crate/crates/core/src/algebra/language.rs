use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::alphabet::Alphabet;

use super::cfg::{cyk_member, Cfg};
use super::dfa::Dfa;
use super::magma::Magma;
use super::word_problem::{word_problem_member, WordProblem};
use super::AlgebraError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LanguageBody {
    Dfa(Dfa),
    Cfg(Cfg),
    /// `letter_to_element[a]` is the magma element standing for letter `a`.
    WordProblem {
        problem: WordProblem,
        letter_to_element: Vec<usize>,
    },
}

/// A named language over an explicitly ordered alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LanguageSpec {
    name: String,
    alphabet: Alphabet,
    body: LanguageBody,
    declared_neutral: Option<usize>,
    /// Letter adjoined by `pad` to a grammar; neutral by construction, so
    /// acceptors may drop it.
    padded: Option<usize>,
}

impl LanguageSpec {
    pub fn new(
        name: impl Into<String>,
        alphabet: Alphabet,
        body: LanguageBody,
        declared_neutral: Option<char>,
    ) -> Result<Self, AlgebraError> {
        let name = name.into();
        match &body {
            LanguageBody::Dfa(d) if d.alphabet() != &alphabet => {
                return Err(AlgebraError::InvalidLanguage(format!(
                    "{name}: automaton alphabet {} differs from {alphabet}",
                    d.alphabet()
                )))
            }
            LanguageBody::Cfg(g) if g.terminals() != &alphabet => {
                return Err(AlgebraError::InvalidLanguage(format!(
                    "{name}: grammar alphabet {} differs from {alphabet}",
                    g.terminals()
                )))
            }
            LanguageBody::WordProblem {
                problem,
                letter_to_element,
            } => {
                let order = problem.magma().order();
                let distinct: BTreeSet<_> = letter_to_element.iter().collect();
                if letter_to_element.len() != alphabet.len()
                    || order != alphabet.len()
                    || distinct.len() != order
                    || letter_to_element.iter().any(|&x| x >= order)
                {
                    return Err(AlgebraError::InvalidLanguage(format!(
                        "{name}: letters must map bijectively onto the {order} magma elements"
                    )));
                }
            }
            _ => {}
        }
        if alphabet.is_empty() {
            return Err(AlgebraError::InvalidLanguage(format!("{name}: empty alphabet")));
        }
        let declared_neutral = match declared_neutral {
            Some(c) => Some(alphabet.index_of(c).ok_or_else(|| {
                AlgebraError::InvalidLanguage(format!("{name}: neutral letter '{c}' not in alphabet"))
            })?),
            None => None,
        };
        Ok(LanguageSpec {
            name,
            alphabet,
            body,
            declared_neutral,
            padded: None,
        })
    }

    pub fn from_dfa(name: impl Into<String>, d: Dfa, neutral: Option<char>) -> Result<Self, AlgebraError> {
        let alphabet = d.alphabet().clone();
        LanguageSpec::new(name, alphabet, LanguageBody::Dfa(d), neutral)
    }

    pub fn from_cfg(name: impl Into<String>, g: Cfg, neutral: Option<char>) -> Result<Self, AlgebraError> {
        let alphabet = g.terminals().clone();
        LanguageSpec::new(name, alphabet, LanguageBody::Cfg(g), neutral)
    }

    /// Letter `i` of the alphabet stands for element `i` of the magma.
    pub fn from_word_problem(
        name: impl Into<String>,
        problem: WordProblem,
        alphabet: Alphabet,
        neutral: Option<char>,
    ) -> Result<Self, AlgebraError> {
        let letter_to_element = (0..alphabet.len()).collect();
        LanguageSpec::new(
            name,
            alphabet,
            LanguageBody::WordProblem {
                problem,
                letter_to_element,
            },
            neutral,
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn body(&self) -> &LanguageBody {
        &self.body
    }

    /// Index of the declared neutral letter, if any.
    pub fn declared_neutral(&self) -> Option<usize> {
        self.declared_neutral
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// True when the body can test words letter by letter in constant memory.
    pub fn is_streaming(&self) -> bool {
        match &self.body {
            LanguageBody::Dfa(_) => true,
            LanguageBody::Cfg(_) => false,
            LanguageBody::WordProblem { problem, .. } => problem.is_associative(),
        }
    }

    pub fn acceptor(&self) -> Box<dyn Acceptor + '_> {
        match &self.body {
            LanguageBody::Dfa(d) => Box::new(DfaAcceptor {
                dfa: d,
                state: d.start(),
            }),
            LanguageBody::WordProblem {
                problem,
                letter_to_element,
            } if problem.is_associative() => Box::new(FoldAcceptor {
                magma: problem.magma(),
                problem,
                map: letter_to_element,
                acc: problem.magma().identity(),
            }),
            _ => Box::new(BufferAcceptor {
                spec: self,
                word: Vec::new(),
            }),
        }
    }

    pub fn member(&self, word: &[usize]) -> Result<bool, AlgebraError> {
        language_member(self, word)
    }

    pub fn member_text(&self, text: &str) -> Result<bool, AlgebraError> {
        let word = self.alphabet.encode(text)?;
        language_member(self, &word)
    }

    /// Same language with a fresh letter appended last to the alphabet and
    /// declared neutral.
    pub fn pad(&self, letter: char) -> Result<Self, AlgebraError> {
        let name = format!("pad({})", self.name);
        let body = match &self.body {
            LanguageBody::Dfa(d) => LanguageBody::Dfa(d.with_skip_letter(letter)?),
            LanguageBody::Cfg(g) => LanguageBody::Cfg(g.with_neutral_letter(letter)?),
            LanguageBody::WordProblem {
                problem,
                letter_to_element,
            } => {
                let (problem, fresh) = adjoin_pseudo_identity(problem)?;
                let mut map = letter_to_element.clone();
                map.push(fresh);
                LanguageBody::WordProblem {
                    problem,
                    letter_to_element: map,
                }
            }
        };
        let alphabet = self.alphabet.with_letter(letter)?;
        let mut spec = LanguageSpec::new(name, alphabet, body, Some(letter))?;
        if matches!(spec.body, LanguageBody::Cfg(_)) {
            spec.padded = spec.declared_neutral;
        }
        Ok(spec)
    }
}

/// Adds an element `n` that acts as the identity on every element except the
/// identity `e` itself, where `e·n = n·e = n·n = n`; `n` is accepted iff `e` is.
fn adjoin_pseudo_identity(wp: &WordProblem) -> Result<(WordProblem, usize), AlgebraError> {
    let m = wp.magma();
    let g = m.order();
    let e = m.identity();
    let n = g;
    let mut table: Vec<Vec<usize>> = (0..g).map(|x| m.row(x).to_vec()).collect();
    for (x, row) in table.iter_mut().enumerate() {
        row.push(if x == e { n } else { x });
    }
    table.push((0..=g).map(|y| if y == e || y == n { n } else { y }).collect());
    let mut elements = m.elements().to_vec();
    let mut fresh = "#".to_string();
    while elements.contains(&fresh) {
        fresh.push('#');
    }
    elements.push(fresh);
    let magma = Magma::new(m.name(), elements, table, e)?;
    let mut accept = wp.accept().clone();
    if accept.contains(&e) {
        accept.insert(n);
    }
    Ok((WordProblem::new(magma, accept)?, n))
}

/// Incremental membership test, fed one letter index at a time.
pub trait Acceptor {
    fn push(&mut self, letter: usize);
    fn accepts(&self) -> bool;

    /// `Some(verdict)` once no continuation can change the answer.
    fn decided(&self) -> Option<bool> {
        None
    }
}

struct DfaAcceptor<'a> {
    dfa: &'a Dfa,
    state: usize,
}

impl Acceptor for DfaAcceptor<'_> {
    fn push(&mut self, letter: usize) {
        self.state = self.dfa.step(self.state, letter);
    }

    fn accepts(&self) -> bool {
        self.dfa.is_final(self.state)
    }

    fn decided(&self) -> Option<bool> {
        self.dfa.is_absorbing(self.state).then(|| self.dfa.is_final(self.state))
    }
}

struct FoldAcceptor<'a> {
    magma: &'a Magma,
    problem: &'a WordProblem,
    map: &'a [usize],
    acc: usize,
}

impl Acceptor for FoldAcceptor<'_> {
    fn push(&mut self, letter: usize) {
        self.acc = self.magma.mul(self.acc, self.map[letter]);
    }

    fn accepts(&self) -> bool {
        self.problem.accepts_element(self.acc)
    }
}

struct BufferAcceptor<'a> {
    spec: &'a LanguageSpec,
    word: Vec<usize>,
}

impl Acceptor for BufferAcceptor<'_> {
    fn push(&mut self, letter: usize) {
        if Some(letter) != self.spec.padded {
            self.word.push(letter);
        }
    }

    fn accepts(&self) -> bool {
        language_member(self.spec, &self.word).unwrap_or(false)
    }
}

/// Membership of a word of letter indices.
pub fn language_member(spec: &LanguageSpec, word: &[usize]) -> Result<bool, AlgebraError> {
    if let Some(&a) = word.iter().find(|&&a| a >= spec.alphabet.len()) {
        return Err(AlgebraError::LetterOutOfRange(a));
    }
    match &spec.body {
        LanguageBody::Dfa(d) => Ok(d.accepts(word)),
        LanguageBody::Cfg(g) => Ok(cyk_member(g, word)),
        LanguageBody::WordProblem {
            problem,
            letter_to_element,
        } => {
            let image: Vec<usize> = word.iter().map(|&a| letter_to_element[a]).collect();
            word_problem_member(problem, &image)
        }
    }
}

/// Tests `uv ∈ L ⟺ uev ∈ L` for every `u`, `v` with `|uv| <= max_len`.
/// A `false` answer is a genuine counterexample; `true` only covers the range.
pub fn is_neutral_letter_bounded(spec: &LanguageSpec, letter: usize, max_len: usize) -> Result<bool, AlgebraError> {
    if letter >= spec.alphabet.len() {
        return Err(AlgebraError::LetterOutOfRange(letter));
    }
    let mut memo: HashMap<Vec<usize>, bool> = HashMap::new();
    let mut member = |w: &[usize]| -> Result<bool, AlgebraError> {
        if let Some(&b) = memo.get(w) {
            return Ok(b);
        }
        let b = language_member(spec, w)?;
        memo.insert(w.to_vec(), b);
        Ok(b)
    };
    for w in spec.alphabet.words_up_to(0, max_len) {
        let base = member(&w)?;
        for cut in 0..=w.len() {
            let mut inserted = Vec::with_capacity(w.len() + 1);
            inserted.extend_from_slice(&w[..cut]);
            inserted.push(letter);
            inserted.extend_from_slice(&w[cut..]);
            if member(&inserted)? != base {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// True when membership depends only on letter counts, for all words of
/// length at most `max_len`.
pub fn is_symmetric_bounded(spec: &LanguageSpec, max_len: usize) -> Result<bool, AlgebraError> {
    let s = spec.alphabet.len();
    for len in 0..=max_len {
        let mut verdicts: HashMap<Vec<usize>, bool> = HashMap::new();
        for w in spec.alphabet.words_of_length(len) {
            let mut counts = vec![0usize; s];
            for &a in &w {
                counts[a] += 1;
            }
            let b = language_member(spec, &w)?;
            match verdicts.get(&counts) {
                Some(&seen) if seen != b => return Ok(false),
                Some(_) => {}
                None => {
                    verdicts.insert(counts, b);
                }
            }
        }
    }
    Ok(true)
}

fn binary() -> Alphabet {
    Alphabet::parse("1,0").expect("distinct letters")
}

/// `L_mod p`: words over (1,0) whose number of 1s is divisible by `p`.
pub fn lmod(p: usize) -> LanguageSpec {
    assert!(p >= 1, "modulus must be positive");
    let delta = (0..p).map(|q| vec![(q + 1) % p, q]).collect();
    let states = (0..p).map(|q| format!("r{q}")).collect();
    let d = Dfa::new(states, binary(), delta, 0, &[0]).expect("well-formed automaton");
    LanguageSpec::from_dfa(format!("Lmod{p}"), d, Some('0')).expect("valid spec")
}

fn lexists() -> LanguageSpec {
    let d = Dfa::new(
        vec!["q0".into(), "q1".into()],
        binary(),
        vec![vec![1, 0], vec![1, 1]],
        0,
        &[1],
    )
    .expect("well-formed automaton");
    LanguageSpec::from_dfa("Lexists", d, Some('0')).expect("valid spec")
}

fn lforall() -> LanguageSpec {
    let d = Dfa::new(
        vec!["ok".into(), "dead".into()],
        binary(),
        vec![vec![0, 1], vec![1, 1]],
        0,
        &[0],
    )
    .expect("well-formed automaton");
    LanguageSpec::from_dfa("Lforall", d, Some('1')).expect("valid spec")
}

fn majority() -> LanguageSpec {
    // M: more 1s than 0s; B: nonempty, equally many of each
    let g = Cfg::from_named(
        binary(),
        false,
        &[
            ("M", &["1"]),
            ("M", &["M", "M"]),
            ("M", &["B", "M"]),
            ("M", &["M", "B"]),
            ("B", &["Z", "O"]),
            ("B", &["O", "Z"]),
            ("B", &["B", "B"]),
            ("B", &["Z", "C"]),
            ("B", &["O", "D"]),
            ("C", &["B", "O"]),
            ("D", &["B", "Z"]),
            ("Z", &["0"]),
            ("O", &["1"]),
        ],
    )
    .expect("grammar is in CNF");
    LanguageSpec::from_cfg("Maj", g, None).expect("valid spec")
}

/// Built-in languages by name: `Lexists`, `Lforall`, `Lmod2`, `Maj`, and
/// `MajPad` (majority with a neutral `#`). All use the alphabet order (1,0).
pub fn builtin(name: &str) -> Option<LanguageSpec> {
    match name {
        "Lexists" => Some(lexists()),
        "Lforall" => Some(lforall()),
        "Lmod2" => Some(lmod(2)),
        "Maj" => Some(majority()),
        "MajPad" => Some(majority().pad('#').expect("'#' is fresh").with_name("MajPad")),
        _ => None,
    }
}

pub const BUILTIN_NAMES: [&str; 5] = ["Lexists", "Lforall", "Lmod2", "Maj", "MajPad"];

/// Languages addressable by name from formulas.
#[derive(Debug, Clone, Default)]
pub struct Languages {
    map: BTreeMap<String, LanguageSpec>,
}

impl Languages {
    pub fn empty() -> Self {
        Languages::default()
    }

    pub fn with_builtins() -> Self {
        let mut langs = Languages::default();
        for name in BUILTIN_NAMES {
            langs.insert(builtin(name).expect("builtin exists"));
        }
        langs
    }

    /// Registers a language, replacing any previous one of the same name.
    pub fn insert(&mut self, spec: LanguageSpec) -> Option<LanguageSpec> {
        self.map.insert(spec.name().to_string(), spec)
    }

    pub fn get(&self, name: &str) -> Option<&LanguageSpec> {
        self.map.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.map.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.map.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = &LanguageSpec> {
        self.map.values()
    }
}

#[cfg(test)]
mod tests {
    use super::super::magma::fixtures::{g4, z2};
    use super::*;

    fn spec(name: &str) -> LanguageSpec {
        builtin(name).unwrap()
    }

    #[test]
    fn builtin_examples() {
        assert!(spec("Maj").member_text("110").unwrap());
        assert!(spec("Lforall").member_text("111").unwrap());
        assert!(!spec("Lexists").member_text("000").unwrap());
        assert!(!spec("Maj").member_text("10").unwrap());
        assert!(spec("Lmod2").member_text("0110").unwrap());
    }

    #[test]
    fn majority_grammar_counts() {
        let maj = spec("Maj");
        for w in maj.alphabet().words_up_to(0, 10) {
            let ones = w.iter().filter(|&&a| a == 0).count();
            assert_eq!(maj.member(&w).unwrap(), 2 * ones > w.len(), "{:?}", w);
        }
    }

    #[test]
    fn unknown_letter_rejected() {
        assert!(matches!(
            spec("Maj").member_text("12"),
            Err(AlgebraError::LetterOutOfAlphabet(_))
        ));
    }

    #[test]
    fn neutrality() {
        let lexists = spec("Lexists");
        assert!(!is_neutral_letter_bounded(&lexists, 0, 6).unwrap());
        assert!(is_neutral_letter_bounded(&lexists, 1, 6).unwrap());
        assert!(is_neutral_letter_bounded(&spec("Lforall"), 0, 6).unwrap());
        let padded = lexists.pad('#').unwrap();
        assert_eq!(padded.declared_neutral(), Some(2));
        assert!(is_neutral_letter_bounded(&padded, 2, 6).unwrap());
        let majpad = spec("MajPad");
        assert!(is_neutral_letter_bounded(&majpad, 2, 6).unwrap());
        assert!(!is_neutral_letter_bounded(&spec("Maj"), 1, 4).unwrap());
    }

    #[test]
    fn symmetry() {
        assert!(is_symmetric_bounded(&spec("Maj"), 6).unwrap());
        assert!(is_symmetric_bounded(&spec("Lmod2"), 6).unwrap());
        let starts_with_one = Dfa::new(
            vec!["s".into(), "yes".into(), "no".into()],
            binary(),
            vec![vec![1, 2], vec![1, 1], vec![2, 2]],
            0,
            &[1],
        )
        .unwrap();
        let l = LanguageSpec::from_dfa("Lexists'", starts_with_one, None).unwrap();
        assert!(!is_symmetric_bounded(&l, 4).unwrap());
    }

    #[test]
    fn word_problem_spec_and_padding() {
        let wp = WordProblem::new(z2(), [0].into_iter().collect()).unwrap();
        let l = LanguageSpec::from_word_problem("Z2", wp, Alphabet::parse("0,1").unwrap(), None).unwrap();
        assert!(l.member_text("11").unwrap());
        assert!(!l.member_text("10").unwrap());
        let p = l.pad('#').unwrap();
        assert!(is_neutral_letter_bounded(&p, 2, 6).unwrap());

        let wp = WordProblem::new(g4(), [0].into_iter().collect()).unwrap();
        let l = LanguageSpec::from_word_problem("G4", wp, Alphabet::parse("eabc").unwrap(), None).unwrap();
        assert!(l.member_text("aaa").unwrap());
        let p = l.pad('#').unwrap();
        assert!(is_neutral_letter_bounded(&p, 4, 5).unwrap());
    }

    #[test]
    fn acceptors_agree_with_member() {
        for name in BUILTIN_NAMES {
            let l = spec(name);
            for w in l.alphabet().words_up_to(0, 6) {
                let mut acc = l.acceptor();
                for &a in &w {
                    acc.push(a);
                }
                assert_eq!(acc.accepts(), l.member(&w).unwrap(), "{name}");
            }
        }
    }

    #[test]
    fn bijection_enforced() {
        let wp = WordProblem::new(z2(), [0].into_iter().collect()).unwrap();
        let err = LanguageSpec::new(
            "bad",
            Alphabet::parse("ab").unwrap(),
            LanguageBody::WordProblem {
                problem: wp,
                letter_to_element: vec![0, 0],
            },
            None,
        );
        assert!(matches!(err, Err(AlgebraError::InvalidLanguage(_))));
    }

    #[test]
    fn padded_grammar_acceptor_skips_pad() {
        let maj = spec("MajPad");
        for w in maj.alphabet().words_up_to(0, 7) {
            let mut acc = maj.acceptor();
            w.iter().for_each(|&a| acc.push(a));
            assert_eq!(acc.accepts(), language_member(&maj, &w).unwrap(), "{w:?}");
        }
    }
}
