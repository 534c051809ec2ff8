use std::collections::hash_map::Entry;
use std::collections::{BTreeSet, HashMap, VecDeque};

use super::cfg::Cfg;
use super::dfa::Dfa;
use super::magma::Magma;
use super::word_problem::WordProblem;
use super::AlgebraError;

/// Upper bound on grammar size for [`cfg_to_groupoid`].
pub const MAX_POWERSET_NONTERMINALS: usize = 16;

/// Hard bound on the number of subsets the closure may visit.
const MAX_POWERSET_ELEMENTS: usize = 1 << 10;

fn subset_name(g: &Cfg, mask: u64) -> String {
    let names: Vec<&str> = (0..g.nonterminals().len())
        .filter(|&a| mask >> a & 1 == 1)
        .map(|a| g.nonterminals()[a].as_str())
        .collect();
    format!("{{{}}}", names.join(","))
}

/// Powerset groupoid of a CNF grammar.
///
/// Elements are the sets of nonterminals reachable from the letter images
/// `h(a) = {A : A -> a}` under `X·Y = {C : C -> A B, A ∈ X, B ∈ Y}`, plus a
/// fresh identity `id` at index 0. A set is accepting when it contains the
/// start symbol; `id` is accepting exactly when ε is in the language.
pub fn cfg_to_groupoid(g: &Cfg) -> Result<(WordProblem, Vec<usize>), AlgebraError> {
    let v = g.nonterminals().len();
    if v > MAX_POWERSET_NONTERMINALS {
        return Err(AlgebraError::TooManyNonterminals(v, MAX_POWERSET_NONTERMINALS));
    }
    // index 0 is the identity; subsets start at 1
    let mut masks: Vec<u64> = Vec::new();
    let mut index: HashMap<u64, usize> = HashMap::new();
    let mut hom = Vec::with_capacity(g.terminals().len());
    for a in 0..g.terminals().len() {
        let m = g.terminal_heads(a);
        let i = *index.entry(m).or_insert_with(|| {
            masks.push(m);
            masks.len()
        });
        hom.push(i);
    }
    // close under multiplication; every new product is paired with all known sets
    let mut done = 0;
    while done < masks.len() {
        let x = masks[done];
        done += 1;
        let known = masks[..done].to_vec();
        for y in known {
            for m in [g.combine(x, y), g.combine(y, x)] {
                if let Entry::Vacant(slot) = index.entry(m) {
                    if masks.len() >= MAX_POWERSET_ELEMENTS {
                        return Err(AlgebraError::TooManyNonterminals(v, MAX_POWERSET_NONTERMINALS));
                    }
                    masks.push(m);
                    slot.insert(masks.len());
                }
            }
        }
    }
    let order = masks.len() + 1;
    let mut table = vec![vec![0usize; order]; order];
    for (x, row) in table.iter_mut().enumerate() {
        for (y, cell) in row.iter_mut().enumerate() {
            *cell = if x == 0 {
                y
            } else if y == 0 {
                x
            } else {
                index[&g.combine(masks[x - 1], masks[y - 1])]
            };
        }
    }
    let mut elements = vec!["id".to_string()];
    elements.extend(masks.iter().map(|&m| subset_name(g, m)));
    let magma = Magma::new("powerset", elements, table, 0)?;
    let mut accept = BTreeSet::new();
    if g.epsilon_in_language() {
        accept.insert(0);
    }
    for (i, &m) in masks.iter().enumerate() {
        if m >> g.start() & 1 == 1 {
            accept.insert(i + 1);
        }
    }
    Ok((WordProblem::new(magma, accept)?, hom))
}

/// Transition monoid of a DFA. Element 0 is the identity map `id`; the others
/// are the distinct maps induced by nonempty words, in breadth-first order.
/// `x·y` applies `x` first. A map is accepting when it sends the start state
/// to a final state.
pub fn regular_to_monoid(d: &Dfa) -> Result<(WordProblem, Vec<usize>), AlgebraError> {
    let q = d.state_count();
    let identity: Vec<usize> = (0..q).collect();
    let mut maps: Vec<Vec<usize>> = vec![identity.clone()];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    index.insert(identity, 0);
    let letter_maps: Vec<Vec<usize>> = (0..d.alphabet().len())
        .map(|a| (0..q).map(|s| d.step(s, a)).collect())
        .collect();
    let mut hom = Vec::with_capacity(letter_maps.len());
    let mut queue = VecDeque::new();
    for f in &letter_maps {
        let i = match index.get(f) {
            Some(&i) => i,
            None => {
                maps.push(f.clone());
                index.insert(f.clone(), maps.len() - 1);
                queue.push_back(maps.len() - 1);
                maps.len() - 1
            }
        };
        hom.push(i);
    }
    while let Some(i) = queue.pop_front() {
        for f in &letter_maps {
            let composed: Vec<usize> = maps[i].iter().map(|&s| f[s]).collect();
            if let Entry::Vacant(slot) = index.entry(composed.clone()) {
                maps.push(composed);
                slot.insert(maps.len() - 1);
                queue.push_back(maps.len() - 1);
            }
        }
    }
    let order = maps.len();
    let table: Vec<Vec<usize>> = (0..order)
        .map(|x| {
            (0..order)
                .map(|y| {
                    let composed: Vec<usize> = maps[x].iter().map(|&s| maps[y][s]).collect();
                    index[&composed]
                })
                .collect()
        })
        .collect();
    let elements: Vec<String> = (0..order)
        .map(|i| if i == 0 { "id".to_string() } else { format!("t{i}") })
        .collect();
    let magma = Magma::new("transition", elements, table, 0)?;
    let accept = (0..order).filter(|&i| d.is_final(maps[i][d.start()])).collect();
    Ok((WordProblem::new(magma, accept)?, hom))
}

#[cfg(test)]
mod tests {
    use super::super::cfg::{cyk_member, fixtures::parens};
    use super::super::word_problem::word_problem_member;
    use super::*;
    use crate::alphabet::Alphabet;

    fn lexists() -> Dfa {
        Dfa::from_triples(
            &["q0", "q1"],
            Alphabet::parse("1,0").unwrap(),
            "q0",
            &["q1"],
            &[
                ("q0", '0', "q0"),
                ("q0", '1', "q1"),
                ("q1", '0', "q1"),
                ("q1", '1', "q1"),
            ],
        )
        .unwrap()
    }

    #[test]
    fn parens_groupoid() {
        let g = parens();
        let (wp, h) = cfg_to_groupoid(&g).unwrap();
        let member = |s: &str| {
            let w: Vec<usize> = g.terminals().encode(s).unwrap().iter().map(|&a| h[a]).collect();
            word_problem_member(&wp, &w).unwrap()
        };
        assert!(member("()"));
        assert!(!member("(("));
        assert!(member("()()"));
        let lr = wp.magma().mul(h[0], h[1]);
        assert_eq!(wp.magma().element_name(lr), "{S}");
        assert!(wp.magma().order() <= (1 << g.nonterminals().len()) + 1);
    }

    #[test]
    fn parens_groupoid_matches_cyk() {
        let g = parens();
        let (wp, h) = cfg_to_groupoid(&g).unwrap();
        for w in g.terminals().words_up_to(1, 10) {
            let image: Vec<usize> = w.iter().map(|&a| h[a]).collect();
            assert_eq!(word_problem_member(&wp, &image).unwrap(), cyk_member(&g, &w));
        }
    }

    #[test]
    fn lexists_monoid() {
        let d = lexists();
        let (wp, h) = regular_to_monoid(&d).unwrap();
        assert_eq!(wp.magma().order(), 2);
        assert!(wp.is_associative());
        let run = |s: &str| {
            let w: Vec<usize> = d.alphabet().encode(s).unwrap().iter().map(|&a| h[a]).collect();
            word_problem_member(&wp, &w).unwrap()
        };
        assert!(run("001"));
        assert!(!run("000"));
        assert!(!run(""));
    }

    #[test]
    fn monoid_matches_dfa() {
        let d = lexists();
        let (wp, h) = regular_to_monoid(&d).unwrap();
        for w in d.alphabet().words_up_to(0, 10) {
            let image: Vec<usize> = w.iter().map(|&a| h[a]).collect();
            assert_eq!(word_problem_member(&wp, &image).unwrap(), d.accepts(&w));
        }
    }
}
