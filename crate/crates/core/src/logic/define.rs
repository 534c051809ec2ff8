use crate::alphabet::Alphabet;

use super::eval::Evaluator;
use super::formula::Formula;
use super::structure::{Assignment, Structure};
use super::LogicError;

/// Words of length at most `max_n` satisfying `sentence`, shortest first and
/// then in the alphabet's lexicographic order.
///
/// The empty word is included only when the sentence evaluates to true on
/// the empty structure; sentences that need a nonempty domain never define it.
pub fn define_language(
    evaluator: &Evaluator,
    sentence: &Formula,
    alphabet: &Alphabet,
    max_n: usize,
) -> Result<Vec<String>, LogicError> {
    let none = Assignment::new();
    let mut out = Vec::new();
    let empty = Structure::from_word(alphabet.clone(), Vec::new());
    if let Ok(true) = evaluator.eval(&empty, &none, sentence) {
        out.push(String::new());
    }
    for word in alphabet.words_up_to(1, max_n) {
        let s = Structure::from_word(alphabet.clone(), word);
        if evaluator.eval(&s, &none, sentence)? {
            out.push(s.text());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Languages;
    use crate::logic::formula::*;

    #[test]
    fn examples() {
        let langs = Languages::with_builtins();
        let ev = Evaluator::new(&langs);
        let ab = Alphabet::parse("a,b").unwrap();
        let x = || Term::var("x");
        let contains_a = exists("x", letter('a', x()));
        assert_eq!(
            define_language(&ev, &contains_a, &ab, 2).unwrap(),
            vec!["a", "aa", "ab", "ba"]
        );
        let even_a = Formula::Lind {
            lang: "Lmod2".into(),
            vars: vec!["x".into()],
            args: vec![letter('a', x())],
        };
        assert_eq!(define_language(&ev, &even_a, &ab, 2).unwrap(), vec!["b", "aa", "bb"]);
        assert!(define_language(&ev, &Formula::False, &ab, 3).unwrap().is_empty());
        assert_eq!(
            define_language(&ev, &Formula::True, &ab, 1).unwrap(),
            vec!["", "a", "b"]
        );
    }
}
