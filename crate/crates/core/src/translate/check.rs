use std::fmt;

use crate::alphabet::Alphabet;
use crate::logic::{Assignment, Evaluator, Formula, Relation, Structure};

use super::TranslateError;

/// The structures a check ranges over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructureSpace {
    /// Every word over `alphabet` with length in `min_len..=max_len`.
    Strings {
        alphabet: Alphabet,
        min_len: usize,
        max_len: usize,
    },
    /// Every interpretation of the named constants over domains of size
    /// `min_n..=max_n`.
    Constants {
        names: Vec<String>,
        min_n: usize,
        max_n: usize,
    },
}

impl StructureSpace {
    pub fn strings(alphabet: Alphabet, min_len: usize, max_len: usize) -> Self {
        StructureSpace::Strings {
            alphabet,
            min_len,
            max_len,
        }
    }

    /// Words `1^n` for `n` in `min_n..=max_n`.
    pub fn unary(min_n: usize, max_n: usize) -> Self {
        StructureSpace::strings(Alphabet::parse("1").expect("unary alphabet"), min_n, max_n)
    }

    pub fn constants(names: Vec<String>, min_n: usize, max_n: usize) -> Self {
        StructureSpace::Constants { names, min_n, max_n }
    }

    pub fn max_n(&self) -> usize {
        match self {
            StructureSpace::Strings { max_len, .. } => *max_len,
            StructureSpace::Constants { max_n, .. } => *max_n,
        }
    }

    pub fn min_n(&self) -> usize {
        match self {
            StructureSpace::Strings { min_len, .. } => *min_len,
            StructureSpace::Constants { min_n, .. } => *min_n,
        }
    }

    pub fn with_range(&self, min_n: usize, max_n: usize) -> Self {
        match self.clone() {
            StructureSpace::Strings { alphabet, .. } => StructureSpace::strings(alphabet, min_n, max_n),
            StructureSpace::Constants { names, .. } => StructureSpace::constants(names, min_n, max_n),
        }
    }

    /// Structures in order of size, then word or constant values.
    pub fn structures(&self) -> Box<dyn Iterator<Item = Structure> + '_> {
        match self {
            StructureSpace::Strings {
                alphabet,
                min_len,
                max_len,
            } => Box::new(
                alphabet
                    .words_up_to(*min_len, *max_len)
                    .map(move |w| Structure::from_word(alphabet.clone(), w)),
            ),
            StructureSpace::Constants { names, min_n, max_n } => Box::new((*min_n..=*max_n).flat_map(move |n| {
                let total = n.pow(names.len() as u32);
                (0..total).map(move |mut code| {
                    let mut values = vec![0; names.len()];
                    for v in values.iter_mut().rev() {
                        *v = code % n;
                        code /= n;
                    }
                    Structure::with_constants(n, names.iter().cloned().zip(values))
                })
            })),
        }
    }
}

impl fmt::Display for StructureSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructureSpace::Strings {
                alphabet,
                min_len,
                max_len,
            } => write!(f, "strings over {alphabet} of length {min_len}..={max_len}"),
            StructureSpace::Constants { names, min_n, max_n } => {
                write!(
                    f,
                    "structures with constants {} and n in {min_n}..={max_n}",
                    names.join(",")
                )
            }
        }
    }
}

/// Sends a structure of the checked space to the structure the other
/// formula is evaluated on.
pub trait StructureMapper {
    fn describe(&self) -> String;

    fn map(&self, structure: &Structure) -> Result<Structure, TranslateError>;

    /// Carries an assignment across; mappers that only handle sentences
    /// reject nonempty assignments.
    fn map_assignment(&self, _structure: &Structure, assignment: &Assignment) -> Result<Assignment, TranslateError> {
        if assignment.is_empty() {
            Ok(assignment.clone())
        } else {
            Err(TranslateError::OpenFormula(self.describe()))
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Identity;

impl StructureMapper for Identity {
    fn describe(&self) -> String {
        "identity".into()
    }

    fn map(&self, structure: &Structure) -> Result<Structure, TranslateError> {
        Ok(structure.clone())
    }

    fn map_assignment(&self, _: &Structure, assignment: &Assignment) -> Result<Assignment, TranslateError> {
        Ok(assignment.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Equivalent,
    /// `left` is the value on the unmapped structure.
    Counterexample {
        structure: Structure,
        assignment: Assignment,
        left: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationReport {
    pub source: Formula,
    pub target: Formula,
    pub mapper: String,
    pub space: String,
    pub max_n: usize,
    pub max_k: usize,
    pub structures: usize,
    pub notes: Vec<String>,
    pub verdict: Verdict,
}

impl TranslationReport {
    pub fn is_equivalent(&self) -> bool {
        self.verdict == Verdict::Equivalent
    }

    pub fn verdict_line(&self) -> String {
        match &self.verdict {
            Verdict::Equivalent => "verdict: equivalent".into(),
            Verdict::Counterexample {
                structure, assignment, ..
            } => format!("verdict: counterexample {structure} {assignment}"),
        }
    }
}

impl fmt::Display for TranslationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "source: {}", self.source)?;
        writeln!(f, "target: {}", self.target)?;
        writeln!(f, "mapper: {}", self.mapper)?;
        writeln!(f, "range: {} (max n {}, max k {})", self.space, self.max_n, self.max_k)?;
        writeln!(f, "structures checked: {}", self.structures)?;
        for note in &self.notes {
            writeln!(f, "note: {note}")?;
        }
        if let Verdict::Counterexample { left, .. } = &self.verdict {
            writeln!(f, "left side {left}, right side {}", !left)?;
        }
        write!(f, "{}", self.verdict_line())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    /// Largest arity of a free relation variable enumerated over.
    pub max_relation_arity: usize,
    /// Bound on assignments tried per structure.
    pub assignment_cap: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            max_relation_arity: 1,
            assignment_cap: 1 << 16,
        }
    }
}

/// Every assignment of the free variables over a domain of size `n`, in rank order.
pub fn all_assignments(
    free_fo: &[String],
    free_so: &[(String, usize)],
    n: usize,
    options: CheckOptions,
) -> Result<Vec<Assignment>, TranslateError> {
    let mut total: u128 = 1;
    for _ in free_fo {
        total *= n as u128;
    }
    for (name, arity) in free_so {
        if *arity > options.max_relation_arity {
            return Err(TranslateError::CapExceeded(format!(
                "free relation {name} has arity {arity} above {}",
                options.max_relation_arity
            )));
        }
        let tuples = (n as u128).pow(*arity as u32);
        if tuples >= 64 {
            return Err(TranslateError::CapExceeded(format!(
                "relation {name} over {tuples} tuples"
            )));
        }
        total = total.saturating_mul(1u128 << tuples);
    }
    if total > options.assignment_cap as u128 {
        return Err(TranslateError::CapExceeded(format!(
            "{total} assignments exceed the cap {}",
            options.assignment_cap
        )));
    }
    let mut out = vec![Assignment::new()];
    for v in free_fo {
        out = out
            .into_iter()
            .flat_map(|a| (0..n).map(move |x| a.clone().set(v.clone(), x)))
            .collect();
    }
    for (name, arity) in free_so {
        let tuples = n.pow(*arity as u32);
        out = out
            .into_iter()
            .flat_map(|a| {
                (0..1u64 << tuples).map(move |mask| {
                    let bits = (0..tuples).map(|t| (mask >> (tuples - 1 - t)) & 1 == 1).collect();
                    a.clone()
                        .set_relation(name.clone(), Relation::from_bits(*arity, n, bits))
                })
            })
            .collect();
    }
    Ok(out)
}

/// Tests `A ⊨ left ⟺ mapper(A) ⊨ right` for every structure of `space` and
/// every assignment to the free variables of `left`, stopping at the first
/// counterexample.
pub fn check_equivalence(
    evaluator: &Evaluator,
    left: &Formula,
    right: &Formula,
    space: &StructureSpace,
    mapper: &dyn StructureMapper,
    options: CheckOptions,
) -> Result<TranslationReport, TranslateError> {
    let fv = left.free_vars();
    let free_fo: Vec<String> = fv.first_order.into_iter().collect();
    let mut checked = 0;
    let mut verdict = Verdict::Equivalent;
    'outer: for s in space.structures() {
        checked += 1;
        let mapped = mapper.map(&s)?;
        for a in all_assignments(&free_fo, &fv.second_order, s.size(), options)? {
            let l = evaluator.eval(&s, &a, left)?;
            let r = evaluator.eval(&mapped, &mapper.map_assignment(&s, &a)?, right)?;
            if l != r {
                verdict = Verdict::Counterexample {
                    structure: s,
                    assignment: a,
                    left: l,
                };
                break 'outer;
            }
        }
    }
    Ok(TranslationReport {
        source: left.clone(),
        target: right.clone(),
        mapper: mapper.describe(),
        space: space.to_string(),
        max_n: space.max_n(),
        max_k: max_quantifier_width(left).max(max_quantifier_width(right)),
        structures: checked,
        notes: Vec::new(),
        verdict,
    })
}

/// Largest number of variables bound by one Lindström node.
pub fn max_quantifier_width(f: &Formula) -> usize {
    let mut k = 0;
    f.walk(&mut |g| {
        if let Formula::Lind { vars, .. } | Formula::LindSo { vars, .. } = g {
            k = k.max(vars.len());
        }
    });
    k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Languages;
    use crate::logic::{exists, forall, letter, member, Term};

    #[test]
    fn reflexive_and_counterexample() {
        let langs = Languages::with_builtins();
        let ev = Evaluator::new(&langs);
        let ab = Alphabet::parse("a,b").unwrap();
        let space = StructureSpace::strings(ab, 1, 2);
        let some_a = exists("x", letter('a', Term::var("x")));
        let all_a = forall("x", letter('a', Term::var("x")));
        let r = check_equivalence(&ev, &some_a, &some_a, &space, &Identity, CheckOptions::default()).unwrap();
        assert_eq!(r.verdict_line(), "verdict: equivalent");
        let r = check_equivalence(&ev, &some_a, &all_a, &space, &Identity, CheckOptions::default()).unwrap();
        assert_eq!(r.verdict_line(), "verdict: counterexample ab -");
        if let Verdict::Counterexample {
            structure,
            assignment,
            left,
        } = &r.verdict
        {
            assert_eq!(ev.eval(structure, assignment, &some_a).unwrap(), *left);
            assert_ne!(ev.eval(structure, assignment, &all_a).unwrap(), *left);
        }
    }

    #[test]
    fn open_formulas_enumerate_assignments() {
        let langs = Languages::with_builtins();
        let ev = Evaluator::new(&langs);
        let space = StructureSpace::strings(Alphabet::parse("a,b").unwrap(), 1, 2);
        let f = member("X", vec![Term::var("x")]);
        let g = exists(
            "y",
            crate::logic::and([
                crate::logic::eq(Term::var("y"), Term::var("x")),
                member("X", vec![Term::var("y")]),
            ]),
        );
        let r = check_equivalence(&ev, &f, &g, &space, &Identity, CheckOptions::default()).unwrap();
        assert!(r.is_equivalent());
        let h = member("X", vec![Term::Min]);
        let r = check_equivalence(&ev, &f, &h, &space, &Identity, CheckOptions::default()).unwrap();
        assert_eq!(r.verdict_line(), "verdict: counterexample aa x=1,X={1}");
    }

    #[test]
    fn constant_space_size() {
        let space = StructureSpace::constants(vec!["c1".into(), "c2".into()], 1, 3);
        assert_eq!(space.structures().count(), 1 + 4 + 9);
    }
}
