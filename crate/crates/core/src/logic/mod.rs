//! First-order and monadic second-order logic over string structures with
//! first- and second-order Lindström quantifiers.

mod define;
mod eval;
mod formula;
mod fragment;
mod instance;
pub mod random;
mod structure;

use thiserror::Error;

use crate::algebra::AlgebraError;

pub use define::define_language;
pub use eval::{eval, induced_word, EvalOptions, Evaluator, DEFAULT_INSTANCE_CAP};
pub use formula::{
    and, bit, eq, exists, exists_so, forall, iff, implies, letter, lt, member, not, or, plus, times, Formula, FreeVars,
    Fresh, InstanceOrder, Term,
};
pub use fragment::{fragment_check, Fragment, FragmentVerdict, FRAGMENT_NAMES};
pub use instance::{code_position, instance_rank, instance_unrank};
pub use structure::{Assignment, Relation, Structure};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("unbound variable '{0}'")]
    UnboundVariable(String),
    #[error("unknown language '{0}'")]
    UnknownLanguage(String),
    #[error("language {lang} needs {expected} argument formulas, found {found}")]
    ArityMismatch {
        lang: String,
        expected: usize,
        found: usize,
    },
    #[error("relation variable '{var}' has arity {expected}, used with {found} terms")]
    RelationArity { var: String, expected: usize, found: usize },
    #[error("letter '{0}' is not in the structure's alphabet")]
    UnknownLetter(char),
    #[error("constant '{0}' is not interpreted by the structure")]
    UnknownConstant(String),
    #[error("empty domain: quantifiers, min and max need n >= 1")]
    EmptyDomain,
    #[error("{needed} instances exceed the instance cap {cap}")]
    InstanceCapExceeded { needed: String, cap: u64 },
    #[error("rank {rank} out of range [0, 2^{bits})")]
    RankOutOfRange { rank: u64, bits: usize },
    #[error("variable '{0}' is bound twice in one quantifier tuple")]
    DuplicateBoundVariable(String),
    #[error("quantifier tuple is empty")]
    EmptyTuple,
    #[error("unknown fragment '{0}'")]
    UnknownFragment(String),
    #[error("formula is not a Lindström quantifier node")]
    NotLindstromNode,
    #[error("set arithmetic needs domain size <= 64, found {0}")]
    SetArithmeticDomain(usize),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
