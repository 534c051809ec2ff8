//! Finite groupoids and monoids, their word problems, and the
//! constructions tying them to regular and context-free languages.

mod cfg;
mod constructions;
mod dfa;
mod language;
mod magma;
mod word_problem;

use thiserror::Error;

pub use cfg::{cyk_member, Cfg, CfgRule};
pub use constructions::{cfg_to_groupoid, regular_to_monoid, MAX_POWERSET_NONTERMINALS};
pub use dfa::Dfa;
pub use language::{
    builtin, is_neutral_letter_bounded, is_symmetric_bounded, language_member, lmod, Acceptor, LanguageBody,
    LanguageSpec, Languages, BUILTIN_NAMES,
};
pub use magma::{
    brute_force_bracketings, check_associative, groupoid_reachable, BracketingOracle, Magma, DEFAULT_BRACKETING_CAP,
};
pub use word_problem::{monoid_word_eval, word_problem_member, WordProblem};

use crate::alphabet::AlphabetError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("magma has no elements")]
    NoElements,
    #[error("element name '{0}' occurs twice")]
    DuplicateElement(String),
    #[error("unknown element '{0}'")]
    UnknownElement(String),
    #[error("table must be {expected}x{expected}, found a row of length {found}")]
    TableShape { expected: usize, found: usize },
    #[error("table entry {value} out of range [0, {order})")]
    EntryOutOfRange { value: usize, order: usize },
    #[error("identity law fails at element '{0}'")]
    IdentityLaw(String),
    #[error("word problem requires an associative table")]
    NotAssociative,
    #[error("the empty word has no bracketing")]
    EmptyWord,
    #[error("word length {len} exceeds the bracketing cap {cap}")]
    CapExceeded { len: usize, cap: usize },
    #[error("letter index {0} out of range")]
    LetterOutOfRange(usize),
    #[error(transparent)]
    LetterOutOfAlphabet(#[from] AlphabetError),
    #[error("grammar is not in Chomsky normal form: {0}")]
    NotCnf(String),
    #[error("invalid automaton: {0}")]
    InvalidDfa(String),
    #[error("invalid language: {0}")]
    InvalidLanguage(String),
    #[error("{0} nonterminals exceed the supported maximum of {1}")]
    TooManyNonterminals(usize, usize),
}
