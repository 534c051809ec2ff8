//! Fast paths compared against their brute-force oracles, selectable by name.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::algebra::{
    cfg_to_groupoid, cyk_member, groupoid_reachable, language_member, regular_to_monoid, word_problem_member,
    AlgebraError, BracketingOracle, Magma, DEFAULT_BRACKETING_CAP,
};
use crate::alphabet::{Alphabet, AlphabetError};
use crate::leafauto::{leaf_count, leaf_stream, leaf_string, LeafError};
use crate::logic::{
    instance_rank, instance_unrank, EvalOptions, Evaluator, Formula, InstanceOrder, LogicError, Structure,
    DEFAULT_INSTANCE_CAP,
};
use crate::toolbox::Toolbox;
use crate::translate::{all_assignments, CheckOptions, TranslateError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("unknown oracle '{0}'")]
    UnknownOracle(String),
    #[error("oracle {oracle} needs {what}")]
    MissingInput { oracle: &'static str, what: &'static str },
    #[error("no {kind} named '{name}'")]
    UnknownObject { kind: &'static str, name: String },
    #[error("{0}")]
    Cap(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Leaf(#[from] LeafError),
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
    #[error(transparent)]
    Translate(#[from] TranslateError),
}

/// Inputs an oracle may read; each oracle names what it needs.
pub struct OracleRequest<'a> {
    pub toolbox: &'a Toolbox,
    /// Name of the algebra, grammar, DFA or leaf automaton under test.
    pub object: Option<String>,
    pub formula: Option<Formula>,
    pub alphabet: Alphabet,
    /// Longest word tried; for `instance-rank` the bound on `n·k`.
    pub max_len: usize,
    /// Largest structure, for formula oracles.
    pub max_n: usize,
    pub leaf_cap: u64,
    pub instance_cap: u64,
}

impl<'a> OracleRequest<'a> {
    pub fn new(toolbox: &'a Toolbox) -> Self {
        OracleRequest {
            toolbox,
            object: None,
            formula: None,
            alphabet: Alphabet::parse("a,b").expect("default alphabet"),
            max_len: 6,
            max_n: 4,
            leaf_cap: 1 << 16,
            instance_cap: DEFAULT_INSTANCE_CAP,
        }
    }

    fn object(&self, oracle: &'static str, what: &'static str) -> Result<&str, OracleError> {
        self.object.as_deref().ok_or(OracleError::MissingInput { oracle, what })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleOutcome {
    Agree {
        cases: u64,
    },
    Disagree {
        witness: String,
        fast: String,
        oracle: String,
    },
}

impl OracleOutcome {
    pub fn agrees(&self) -> bool {
        matches!(self, OracleOutcome::Agree { .. })
    }
}

impl fmt::Display for OracleOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleOutcome::Agree { cases } => write!(f, "agree\ncases: {cases}"),
            OracleOutcome::Disagree { witness, fast, oracle } => {
                write!(f, "disagree\nwitness: {witness}\nfast: {fast}\noracle: {oracle}")
            }
        }
    }
}

pub trait Oracle {
    fn name(&self) -> &'static str;

    fn summary(&self) -> &'static str;

    fn run(&self, request: &OracleRequest) -> Result<OracleOutcome, OracleError>;
}

/// Oracles selectable by name.
pub struct OracleRegistry {
    entries: Vec<Box<dyn Oracle>>,
}

impl OracleRegistry {
    pub fn empty() -> Self {
        OracleRegistry { entries: Vec::new() }
    }

    pub fn with_builtins() -> Self {
        let mut r = OracleRegistry::empty();
        r.register(Box::new(GroupoidReachable));
        r.register(Box::new(CfgGroupoid));
        r.register(Box::new(TransitionMonoid));
        r.register(Box::new(LeafStream));
        r.register(Box::new(LindstromWord));
        r.register(Box::new(InstanceRank));
        r
    }

    /// Replaces any oracle of the same name.
    pub fn register(&mut self, o: Box<dyn Oracle>) {
        self.entries.retain(|e| e.name() != o.name());
        self.entries.push(o);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Oracle, OracleError> {
        self.entries
            .iter()
            .find(|e| e.name() == name)
            .map(|e| e.as_ref())
            .ok_or_else(|| OracleError::UnknownOracle(name.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Oracle> + '_ {
        self.entries.iter().map(|e| e.as_ref())
    }
}

fn element_set(m: &Magma, xs: &BTreeSet<usize>) -> String {
    let names: Vec<&str> = xs.iter().map(|&x| m.element_name(x)).collect();
    format!("{{{}}}", names.join(","))
}

fn element_word(m: &Magma, w: &[usize]) -> String {
    let names: Vec<&str> = w.iter().map(|&x| m.element_name(x)).collect();
    names.join(" ")
}

fn show_word(alphabet: &Alphabet, w: &[usize]) -> String {
    if w.is_empty() {
        "ε".into()
    } else {
        alphabet.decode(w)
    }
}

/// Compares the interval DP with enumeration of all bracketings on every
/// word of length `1..=max_len`.
pub fn check_groupoid(m: &Magma, max_len: usize) -> Result<OracleOutcome, OracleError> {
    if max_len > DEFAULT_BRACKETING_CAP {
        return Err(OracleError::Cap(format!(
            "words of length {max_len} exceed the bracketing cap {DEFAULT_BRACKETING_CAP}"
        )));
    }
    let letters = Alphabet::new((0..m.order()).map(|i| char::from_u32(0xE000 + i as u32).unwrap()))?;
    let mut oracle = BracketingOracle::new(DEFAULT_BRACKETING_CAP);
    let mut cases = 0;
    for w in letters.words_up_to(1, max_len) {
        let fast = groupoid_reachable(m, &w)?;
        let slow = oracle.evaluate(m, &w)?;
        cases += 1;
        if fast != slow {
            return Ok(OracleOutcome::Disagree {
                witness: element_word(m, &w),
                fast: element_set(m, &fast),
                oracle: element_set(m, &slow),
            });
        }
    }
    Ok(OracleOutcome::Agree { cases })
}

/// Compares membership through the powerset groupoid with CYK on every word
/// of length `0..=max_len`.
pub fn check_cfg(g: &crate::algebra::Cfg, max_len: usize) -> Result<OracleOutcome, OracleError> {
    let (wp, hom) = cfg_to_groupoid(g)?;
    let mut cases = 0;
    for w in g.terminals().words_up_to(0, max_len) {
        let image: Vec<usize> = w.iter().map(|&a| hom[a]).collect();
        let fast = word_problem_member(&wp, &image)?;
        let slow = cyk_member(g, &w);
        cases += 1;
        if fast != slow {
            return Ok(OracleOutcome::Disagree {
                witness: show_word(g.terminals(), &w),
                fast: fast.to_string(),
                oracle: slow.to_string(),
            });
        }
    }
    Ok(OracleOutcome::Agree { cases })
}

/// Compares membership through the transition monoid with running the DFA
/// on every word of length `0..=max_len`.
pub fn check_dfa(d: &crate::algebra::Dfa, max_len: usize) -> Result<OracleOutcome, OracleError> {
    let (wp, hom) = regular_to_monoid(d)?;
    let mut cases = 0;
    for w in d.alphabet().words_up_to(0, max_len) {
        let image: Vec<usize> = w.iter().map(|&a| hom[a]).collect();
        let fast = word_problem_member(&wp, &image)?;
        let slow = d.accepts(&w);
        cases += 1;
        if fast != slow {
            return Ok(OracleOutcome::Disagree {
                witness: show_word(d.alphabet(), &w),
                fast: fast.to_string(),
                oracle: slow.to_string(),
            });
        }
    }
    Ok(OracleOutcome::Agree { cases })
}

/// Compares the streamed leaf string and the leaf count with the
/// materialized leaf string, for inputs whose leaf count is within `cap`.
pub fn check_leaf(m: &crate::leafauto::LeafAutomaton, max_len: usize, cap: u64) -> Result<OracleOutcome, OracleError> {
    let mut cases = 0;
    for w in m.input().words_up_to(0, max_len) {
        let count = leaf_count(m, &w);
        if count > cap.into() {
            continue;
        }
        let materialized = leaf_string(m, &w, cap)?;
        let mut streamed = Vec::new();
        leaf_stream(m, &w, &mut |x| {
            streamed.push(x);
            true
        });
        cases += 1;
        if streamed != materialized || count != materialized.len().into() {
            return Ok(OracleOutcome::Disagree {
                witness: show_word(m.input(), &w),
                fast: format!("{} ({count} leaves)", m.leaf().decode(&streamed)),
                oracle: m.leaf().decode(&materialized),
            });
        }
    }
    Ok(OracleOutcome::Agree { cases })
}

/// Compares the evaluation of every Lindström node of `f` with membership
/// of its induced word, on all structures over `alphabet` of size
/// `1..=max_n` and all assignments of the node's free variables.
pub fn check_lindstrom(
    evaluator: &Evaluator,
    f: &Formula,
    alphabet: &Alphabet,
    max_n: usize,
) -> Result<OracleOutcome, OracleError> {
    let mut nodes: Vec<&Formula> = Vec::new();
    f.walk(&mut |g| {
        if matches!(g, Formula::Lind { .. } | Formula::LindSo { .. }) {
            nodes.push(g);
        }
    });
    let langs = evaluator.languages();
    let mut cases = 0;
    for w in alphabet.words_up_to(1, max_n) {
        let s = Structure::from_word(alphabet.clone(), w);
        for node in &nodes {
            let (Formula::Lind { lang, .. } | Formula::LindSo { lang, .. }) = node else {
                unreachable!()
            };
            let spec = langs
                .get(lang)
                .ok_or_else(|| LogicError::UnknownLanguage(lang.clone()))?;
            let fv = node.free_vars();
            let fo: Vec<String> = fv.first_order.into_iter().collect();
            for a in all_assignments(&fo, &fv.second_order, s.size(), CheckOptions::default())? {
                let fast = evaluator.eval(&s, &a, node)?;
                let word = evaluator.induced_word(&s, &a, node)?;
                let slow = language_member(spec, &word)?;
                cases += 1;
                if fast != slow {
                    return Ok(OracleOutcome::Disagree {
                        witness: format!("{s} {a} {node}"),
                        fast: fast.to_string(),
                        oracle: format!("{slow} (word {})", show_word(spec.alphabet(), &word)),
                    });
                }
            }
        }
    }
    Ok(OracleOutcome::Agree { cases })
}

/// Checks `rank ∘ unrank = id` on every rank for all `n·k <= max_bits`,
/// under both orders. Both sides have `2^(n·k)` elements, so this makes the
/// pair mutually inverse bijections.
pub fn check_instance_rank(max_bits: usize) -> Result<OracleOutcome, OracleError> {
    if max_bits > 24 {
        return Err(OracleError::Cap(format!("{max_bits} code bits exceed the limit 24")));
    }
    let mut cases = 0;
    for order in [InstanceOrder::Interleaved, InstanceOrder::Concatenated] {
        for k in 1..=max_bits {
            for n in 1..=max_bits / k {
                for rank in 0..1u64 << (n * k) {
                    let sets = instance_unrank(rank, k, n, order)?;
                    let back = instance_rank(&sets, order)?;
                    cases += 1;
                    if back != rank {
                        return Ok(OracleOutcome::Disagree {
                            witness: format!("{order:?} k={k} n={n} rank={rank}"),
                            fast: back.to_string(),
                            oracle: rank.to_string(),
                        });
                    }
                }
            }
        }
    }
    Ok(OracleOutcome::Agree { cases })
}

struct GroupoidReachable;

impl Oracle for GroupoidReachable {
    fn name(&self) -> &'static str {
        "groupoid-reachable"
    }

    fn summary(&self) -> &'static str {
        "interval DP against all bracketings"
    }

    fn run(&self, r: &OracleRequest) -> Result<OracleOutcome, OracleError> {
        let name = r.object(self.name(), "an algebra")?;
        let alg = r.toolbox.algebra(name).ok_or_else(|| OracleError::UnknownObject {
            kind: "algebra",
            name: name.to_string(),
        })?;
        check_groupoid(alg.problem.magma(), r.max_len)
    }
}

struct CfgGroupoid;

impl Oracle for CfgGroupoid {
    fn name(&self) -> &'static str {
        "cfg-groupoid"
    }

    fn summary(&self) -> &'static str {
        "powerset groupoid membership against CYK"
    }

    fn run(&self, r: &OracleRequest) -> Result<OracleOutcome, OracleError> {
        let name = r.object(self.name(), "a grammar")?;
        let g = r.toolbox.grammar(name).ok_or_else(|| OracleError::UnknownObject {
            kind: "grammar",
            name: name.to_string(),
        })?;
        check_cfg(g, r.max_len)
    }
}

struct TransitionMonoid;

impl Oracle for TransitionMonoid {
    fn name(&self) -> &'static str {
        "transition-monoid"
    }

    fn summary(&self) -> &'static str {
        "transition monoid membership against running the DFA"
    }

    fn run(&self, r: &OracleRequest) -> Result<OracleOutcome, OracleError> {
        let name = r.object(self.name(), "a DFA")?;
        let d = r.toolbox.dfa(name).ok_or_else(|| OracleError::UnknownObject {
            kind: "dfa",
            name: name.to_string(),
        })?;
        check_dfa(d, r.max_len)
    }
}

struct LeafStream;

impl Oracle for LeafStream {
    fn name(&self) -> &'static str {
        "leaf-stream"
    }

    fn summary(&self) -> &'static str {
        "streamed leaf strings and leaf counts against materialized trees"
    }

    fn run(&self, r: &OracleRequest) -> Result<OracleOutcome, OracleError> {
        let name = r.object(self.name(), "a leaf automaton")?;
        let m = r
            .toolbox
            .leaf_automaton(name)
            .ok_or_else(|| OracleError::UnknownObject {
                kind: "leaf automaton",
                name: name.to_string(),
            })?;
        check_leaf(m, r.max_len, r.leaf_cap)
    }
}

struct LindstromWord;

impl Oracle for LindstromWord {
    fn name(&self) -> &'static str {
        "lindstrom-word"
    }

    fn summary(&self) -> &'static str {
        "Lindström node evaluation against membership of the induced word"
    }

    fn run(&self, r: &OracleRequest) -> Result<OracleOutcome, OracleError> {
        let f = r.formula.as_ref().ok_or(OracleError::MissingInput {
            oracle: self.name(),
            what: "a formula",
        })?;
        let ev = Evaluator::with_options(
            r.toolbox.languages(),
            EvalOptions {
                instance_cap: r.instance_cap,
            },
        );
        check_lindstrom(&ev, f, &r.alphabet, r.max_n)
    }
}

struct InstanceRank;

impl Oracle for InstanceRank {
    fn name(&self) -> &'static str {
        "instance-rank"
    }

    fn summary(&self) -> &'static str {
        "instance rank and unrank as mutually inverse bijections"
    }

    fn run(&self, r: &OracleRequest) -> Result<OracleOutcome, OracleError> {
        check_instance_rank(r.max_len)
    }
}
