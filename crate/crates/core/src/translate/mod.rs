//! Formula translations between logics, each with a structure mapper and a
//! validation range checked by [`check_equivalence`].

pub mod arith;
mod check;
mod collapse;
mod constants;
mod exponential;
mod pad;
mod shuffle;
mod tally;

use thiserror::Error;

use crate::algebra::{AlgebraError, Languages};
use crate::alphabet::{Alphabet, AlphabetError};
use crate::logic::{Evaluator, Formula, LogicError, Term};

pub use check::{
    all_assignments, check_equivalence, max_quantifier_width, CheckOptions, Identity, StructureMapper, StructureSpace,
    TranslationReport, Verdict,
};
pub use collapse::{arity_collapse, collapsed_arity, CollapseMapper};
pub use constants::{const_rewrite, const_unrewrite, subset_alphabet, ConstMapper, ConstToString};
pub use exponential::{exp_reverse, exp_translate, ExpMapper, DEFAULT_EXPONENT_CAP};
pub use pad::{pad_chi, pad_string, pad_translate, PadMapper, PaddedSignature};
pub use shuffle::{q1_to_q_star, q_star_to_q1};
pub use tally::{
    binary_of, set_lt, set_plus, tally_bwd, tally_fwd, tally_of, BinaryToUnary, TallyLanguage, UnaryToBinary,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("quantifier over {0} binds relations of arity above 1")]
    NonMonadicNode(String),
    #[error("formula is outside the translation's fragment: {0}")]
    FragmentViolation(String),
    #[error("language {0} has no neutral letter in last position")]
    NoNeutralLetter(String),
    #[error("unknown language '{0}'")]
    UnknownLanguage(String),
    #[error("formula uses symbols outside a pure constant signature: {0}")]
    NonConstantSignature(String),
    #[error("exponential encoding of a structure of size {n} exceeds the exponent cap {cap}")]
    ExponentCapExceeded { n: usize, cap: usize },
    #[error("pad letter '{0}' already belongs to the alphabet")]
    PadLetterInAlphabet(char),
    #[error("the mapper {0} only carries sentences")]
    OpenFormula(String),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("unknown translation '{0}'")]
    UnknownTranslation(String),
    #[error("invalid structure for mapper: {0}")]
    BadStructure(String),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
}

/// Knobs shared by the registered translations; each reads what it needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslateParams {
    /// Alphabet of the source string signature.
    pub alphabet: Alphabet,
    /// Padding exponent.
    pub k: usize,
    pub pad: char,
    /// Constant names, for translations over constant signatures. Empty
    /// means the constants of the formula, or `c1..` by alphabet size.
    pub constants: Vec<String>,
    /// Largest structure of the validation range; `None` picks the
    /// translation's default.
    pub max_n: Option<usize>,
    pub exponent_cap: usize,
}

impl Default for TranslateParams {
    fn default() -> Self {
        TranslateParams {
            alphabet: Alphabet::parse("a,b").expect("default alphabet"),
            k: 2,
            pad: '#',
            constants: Vec::new(),
            max_n: None,
            exponent_cap: DEFAULT_EXPONENT_CAP,
        }
    }
}

/// A translated formula with the structures and mapper its contract is
/// checked on.
pub struct Translated {
    pub target: Formula,
    pub space: StructureSpace,
    pub mapper: Box<dyn StructureMapper>,
    /// When set, the target is evaluated on the space and the source on the
    /// mapped structures.
    pub reversed: bool,
    pub notes: Vec<String>,
}

impl Translated {
    pub fn validate(
        &self,
        evaluator: &Evaluator,
        source: &Formula,
        options: CheckOptions,
    ) -> Result<TranslationReport, TranslateError> {
        let (left, right) = if self.reversed {
            (&self.target, source)
        } else {
            (source, &self.target)
        };
        let mut report = check_equivalence(evaluator, left, right, &self.space, self.mapper.as_ref(), options)?;
        report.source = source.clone();
        report.target = self.target.clone();
        if self.reversed {
            report
                .notes
                .push("checked as target on the range against source on mapped structures".into());
        }
        report.notes.extend(self.notes.iter().cloned());
        Ok(report)
    }
}

pub trait Translation {
    fn name(&self) -> &'static str;

    fn summary(&self) -> &'static str;

    fn translate(
        &self,
        source: &Formula,
        langs: &Languages,
        params: &TranslateParams,
    ) -> Result<Translated, TranslateError>;
}

/// Translations selectable by name.
pub struct TranslationRegistry {
    entries: Vec<Box<dyn Translation>>,
}

impl TranslationRegistry {
    pub fn empty() -> Self {
        TranslationRegistry { entries: Vec::new() }
    }

    pub fn with_builtins() -> Self {
        let mut r = TranslationRegistry::empty();
        r.register(Box::new(shuffle::QStarToQ1));
        r.register(Box::new(shuffle::Q1ToQStar));
        r.register(Box::new(collapse::ArityCollapse));
        r.register(Box::new(pad::Pad));
        r.register(Box::new(tally::TallyFwd));
        r.register(Box::new(tally::TallyBwd));
        r.register(Box::new(constants::ConstRewrite));
        r.register(Box::new(constants::ConstUnrewrite));
        r.register(Box::new(exponential::ExpFwd));
        r.register(Box::new(exponential::ExpRev));
        r
    }

    /// Replaces any translation of the same name.
    pub fn register(&mut self, t: Box<dyn Translation>) {
        self.entries.retain(|e| e.name() != t.name());
        self.entries.push(t);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Translation, TranslateError> {
        self.entries
            .iter()
            .find(|e| e.name() == name)
            .map(|e| e.as_ref())
            .ok_or_else(|| TranslateError::UnknownTranslation(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.iter().map(|e| e.name())
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Translation> + '_ {
        self.entries.iter().map(|e| e.as_ref())
    }
}

type Replacement<'a> = dyn FnMut(usize, &[Term]) -> Result<Formula, TranslateError> + 'a;

/// Replaces atoms `X(t̄)` for `X` in `names` by `repl(index, t̄)`, leaving
/// occurrences under a rebinding of the same name untouched.
pub(crate) fn substitute(f: &Formula, names: &[String], repl: &mut Replacement) -> Result<Formula, TranslateError> {
    let shadowed = |bound: &[String]| -> Vec<String> {
        names
            .iter()
            .map(|n| if bound.contains(n) { String::new() } else { n.clone() })
            .collect()
    };
    Ok(match f {
        Formula::In(x, ts) => match names.iter().position(|n| n == x) {
            Some(i) => repl(i, ts)?,
            None => f.clone(),
        },
        Formula::SetTimes(x, y, z) => {
            if [x, y, z].iter().any(|v| names.contains(v)) {
                return Err(TranslateError::FragmentViolation(
                    "set arithmetic over a rewritten relation variable".into(),
                ));
            }
            f.clone()
        }
        Formula::ExistsSo { var, arity, body } => Formula::ExistsSo {
            var: var.clone(),
            arity: *arity,
            body: Box::new(substitute(body, &shadowed(std::slice::from_ref(var)), repl)?),
        },
        Formula::LindSo {
            lang,
            order,
            arity,
            vars,
            args,
        } => {
            let inner = shadowed(vars);
            Formula::LindSo {
                lang: lang.clone(),
                order: *order,
                arity: *arity,
                vars: vars.clone(),
                args: args
                    .iter()
                    .map(|a| substitute(a, &inner, repl))
                    .collect::<Result<_, _>>()?,
            }
        }
        other => try_map_children(other, &mut |c| substitute(c, names, repl))?,
    })
}

/// Looks up a language and checks that its last letter is declared neutral
/// and passes the bounded neutrality test.
pub(crate) fn require_neutral_last(langs: &Languages, name: &str) -> Result<(), TranslateError> {
    let spec = langs
        .get(name)
        .ok_or_else(|| TranslateError::UnknownLanguage(name.to_string()))?;
    let last = spec.alphabet().len() - 1;
    if spec.declared_neutral() != Some(last)
        || !crate::algebra::is_neutral_letter_bounded(spec, last, NEUTRAL_CHECK_LEN)?
    {
        return Err(TranslateError::NoNeutralLetter(name.to_string()));
    }
    Ok(())
}

/// Word length up to which neutrality is tested before translating.
pub const NEUTRAL_CHECK_LEN: usize = 6;

/// `map_children` with a fallible callback; the first error wins.
pub(crate) fn try_map_children(
    f: &Formula,
    g: &mut dyn FnMut(&Formula) -> Result<Formula, TranslateError>,
) -> Result<Formula, TranslateError> {
    let mut err = None;
    let out = f.map_children(&mut |c| match g(c) {
        Ok(h) => h,
        Err(e) => {
            err.get_or_insert(e);
            Formula::False
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}
