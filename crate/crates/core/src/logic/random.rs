//! Seeded generator of small first-order formulas for property tests.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::formula::{Formula, Term};

#[derive(Debug, Clone)]
pub struct FormulaGen {
    rng: ChaCha8Rng,
    letters: Vec<char>,
    relations: Vec<String>,
    max_depth: usize,
    quantifiers: bool,
}

impl FormulaGen {
    pub fn new(seed: u64, letters: &[char]) -> Self {
        FormulaGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            letters: letters.to_vec(),
            relations: Vec::new(),
            max_depth: 3,
            quantifiers: true,
        }
    }

    /// Monadic relation variables that atoms may mention.
    pub fn with_relations(mut self, names: &[&str]) -> Self {
        self.relations = names.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn with_depth(mut self, depth: usize) -> Self {
        self.max_depth = depth;
        self
    }

    pub fn without_quantifiers(mut self) -> Self {
        self.quantifiers = false;
        self
    }

    /// A formula whose free first-order variables are among `free`.
    pub fn formula(&mut self, free: &[&str]) -> Formula {
        let mut scope: Vec<String> = free.iter().map(|s| s.to_string()).collect();
        let depth = self.max_depth;
        self.node(&mut scope, depth)
    }

    fn term(&mut self, scope: &[String]) -> Term {
        let roll = self.rng.gen_range(0..10);
        if scope.is_empty() || roll == 0 {
            if self.rng.gen_bool(0.5) {
                Term::Min
            } else {
                Term::Max
            }
        } else {
            Term::Var(scope.choose(&mut self.rng).unwrap().clone())
        }
    }

    fn atom(&mut self, scope: &[String]) -> Formula {
        let kinds = if self.relations.is_empty() { 5 } else { 7 };
        match self.rng.gen_range(0..kinds) {
            0 | 1 if !self.letters.is_empty() => {
                let c = *self.letters.choose(&mut self.rng).unwrap();
                Formula::Letter(c, self.term(scope))
            }
            0..=2 => Formula::Lt(self.term(scope), self.term(scope)),
            3 => Formula::Eq(self.term(scope), self.term(scope)),
            4 => {
                if self.rng.gen_bool(0.5) {
                    Formula::True
                } else {
                    Formula::Lt(self.term(scope), self.term(scope))
                }
            }
            _ => {
                let r = self.relations.choose(&mut self.rng).unwrap().clone();
                Formula::In(r, vec![self.term(scope)])
            }
        }
    }

    fn node(&mut self, scope: &mut Vec<String>, depth: usize) -> Formula {
        if depth == 0 || self.rng.gen_range(0..10) < 3 {
            return self.atom(scope);
        }
        let choices = if self.quantifiers { 5 } else { 3 };
        match self.rng.gen_range(0..choices) {
            0 => Formula::Not(Box::new(self.node(scope, depth - 1))),
            1 => Formula::And(vec![self.node(scope, depth - 1), self.node(scope, depth - 1)]),
            2 => Formula::Or(vec![self.node(scope, depth - 1), self.node(scope, depth - 1)]),
            q => {
                let v = format!("v{}", scope.len());
                scope.push(v.clone());
                let body = Box::new(self.node(scope, depth - 1));
                scope.pop();
                if q == 3 {
                    Formula::Exists(v, body)
                } else {
                    Formula::Forall(v, body)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed() {
        let a: Vec<Formula> = {
            let mut g = FormulaGen::new(7, &['a', 'b']);
            (0..20).map(|_| g.formula(&["x"])).collect()
        };
        let b: Vec<Formula> = {
            let mut g = FormulaGen::new(7, &['a', 'b']);
            (0..20).map(|_| g.formula(&["x"])).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn free_variables_stay_in_scope() {
        let mut g = FormulaGen::new(1, &['a']).with_relations(&["X"]);
        for _ in 0..200 {
            let f = g.formula(&["x"]);
            let fv = f.free_vars();
            assert!(fv.first_order.iter().all(|v| v == "x"));
            assert!(fv.second_order.iter().all(|(n, a)| n == "X" && *a == 1));
        }
    }
}
