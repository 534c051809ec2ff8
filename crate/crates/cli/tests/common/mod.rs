//! Shared by the golden, corpus and acceptance tests.
#![allow(dead_code)]

use std::fs;
use std::path::PathBuf;
use std::process::Command;

use lindstrom_core::algebra::Languages;
use lindstrom_core::syntax::parse_formula;

#[rustfmt::skip]
pub const CASES: &[(&str, &[&str])] = &[
    // eval
    ("eval_true", &["eval", "--structure", "ab", "--alphabet", "a,b", "--formula", "(exists x (letter a x))"]),
    ("eval_false", &["eval", "--structure", "bb", "--formula", "(exists x (letter a x))"]),
    ("eval_formula_file", &["eval", "--structure", "ba", "--formula-file", "some_a.sexp"]),
    ("eval_assignment", &["eval", "--structure", "aab", "--formula", "(and (in X x) (letter b x))", "--assign", "x=2,X={0,2}"]),
    ("eval_constants", &["eval", "--structure", "n=4;c1=1;c2=3", "--formula", "(< (const c1) (const c2))"]),
    ("eval_lindstrom", &["eval", "--structure", "aab", "--formula", "(Q Maj (x) (letter a x))"]),
    ("eval_toolbox_language", &["--toolbox", ".", "eval", "--structure", "aabb", "--formula", "(Q anbn (x) (letter a x))"]),
    ("eval_syntax_error", &["eval", "--structure", "ab", "--formula", "(exists x\n  (frob x))"]),
    ("eval_unbalanced", &["eval", "--structure", "ab", "--formula", "(exists x"]),
    ("eval_unknown_language", &["eval", "--structure", "ab", "--formula", "(Q Nope (x) true)"]),
    ("eval_arity_mismatch", &["eval", "--structure", "ab", "--formula", "(Q Lexists (x))"]),
    ("eval_unbound_variable", &["eval", "--structure", "ab", "--formula", "(letter a x)"]),
    ("eval_bad_structure", &["eval", "--structure", "ac", "--formula", "true"]),
    ("eval_bad_assignment", &["eval", "--structure", "ab", "--formula", "(letter a x)", "--assign", "x=5"]),
    ("eval_missing_formula", &["eval", "--structure", "ab"]),
    ("eval_both_formulas", &["eval", "--structure", "ab", "--formula", "true", "--formula-file", "some_a.sexp"]),
    ("eval_missing_file", &["eval", "--structure", "ab", "--formula-file", "nope.sexp"]),
    ("eval_instance_cap", &["--instance-cap", "16", "eval", "--structure", "aaa", "--formula", "(Qstar Lexists 1 (X Y) (in X min))"]),
    // enumerate
    ("enumerate_parity", &["enumerate", "--formula", "(Q Lmod2 (x) (letter a x))", "--max-n", "3"]),
    ("enumerate_empty_word", &["enumerate", "--formula", "(forall x (letter a x))", "--max-n", "2"]),
    ("enumerate_open", &["enumerate", "--formula", "(letter a x)"]),
    // translate
    ("translate_list", &["translate", "list"]),
    ("translate_q1_to_qstar", &["translate", "q1-to-qstar", "--formula", "(Q1 Lexists 1 (X) (in X min))", "--max-n", "3"]),
    ("translate_collapse", &["translate", "arity-collapse", "--formula", "(Qstar Lexists 1 (X) (in X max))"]),
    ("translate_tally_bwd", &["translate", "tally-bwd", "--formula", "(exists x (exists y (< x y)))", "--max-n", "8"]),
    ("translate_const_rewrite", &["translate", "const-rewrite", "--formula", "(< (const c1) (const c2))", "--max-n", "3"]),
    ("translate_exp_fwd", &["translate", "exp-fwd", "--formula", "(exists x (letter a x))", "--max-n", "3"]),
    ("translate_unknown", &["translate", "nope", "--formula", "true"]),
    ("translate_fragment", &["translate", "arity-collapse", "--formula", "(exists x true)"]),
    ("translate_no_neutral", &["translate", "arity-collapse", "--formula", "(Qstar Maj 1 (X) (in X min))"]),
    ("translate_pad_letter", &["translate", "pad", "--pad", "a", "--formula", "(Qstar Lexists 1 (X) (in X min))"]),
    ("translate_exponent_cap", &["translate", "exp-fwd", "--formula", "true", "--max-n", "7"]),
    // equiv
    ("equiv_qstar_to_q1", &["equiv", "--translation", "qstar-to-q1", "--formula", "(Qstar Maj 1 (X) (exists x (in X x)))", "--max-n", "3"]),
    ("equiv_against_equivalent", &["equiv", "--formula", "(exists x (letter a x))", "--against", "(not (forall x (letter b x)))"]),
    ("equiv_counterexample", &["equiv", "--formula", "(exists x (letter a x))", "--against", "(letter a min)"]),
    ("equiv_open_counterexample", &["equiv", "--formula", "(in X x)", "--against", "(in X min)", "--max-n", "2"]),
    ("equiv_missing_mode", &["equiv", "--formula", "true"]),
    // leaffa
    ("leaffa_member", &["leaffa", "--automaton", "pq.leaf", "--language", "Lexists", "--input", "aa", "--show-leaves"]),
    ("leaffa_nonmember", &["leaffa", "--automaton", "pq.leaf", "--language", "Lforall", "--input", "aa"]),
    ("leaffa_empty_input", &["leaffa", "--automaton", "pq.leaf", "--language", "Lexists", "--input", "ε"]),
    ("leaffa_sentence", &["leaffa", "--automaton", "doubling.leaf", "--language", "MajPad", "--sentence"]),
    ("leaffa_leaf_cap", &["--leaf-cap", "4", "leaffa", "--automaton", "doubling.leaf", "--language", "Lmod2", "--input", "aaa", "--show-leaves"]),
    ("leaffa_unknown_automaton", &["leaffa", "--automaton", "nope", "--language", "Lexists", "--input", "a"]),
    ("leaffa_bad_input", &["leaffa", "--automaton", "pq.leaf", "--language", "Lexists", "--input", "ab"]),
    ("leaffa_no_neutral", &["leaffa", "--automaton", "pq.leaf", "--language", "Maj", "--sentence"]),
    // algebra-check
    ("algebra_check_g4", &["algebra-check", "g4.alg", "--word", "aaa"]),
    ("algebra_check_z2", &["algebra-check", "z2.alg", "--word", "1 0 1 1"]),
    ("algebra_check_dfa", &["algebra-check", "starts1.dfa", "--word", "001"]),
    ("algebra_check_cfg", &["algebra-check", "parens.cfg", "--word", "()()"]),
    ("algebra_check_leaf", &["algebra-check", "pq.leaf", "--word", "aaa"]),
    ("algebra_check_toolbox_name", &["--toolbox", ".", "algebra-check", "anbn"]),
    ("algebra_check_identity_law", &["algebra-check", "broken/no_identity.alg"]),
    ("algebra_check_format_error", &["algebra-check", "broken/bad_entry.alg"]),
    ("algebra_check_partial_dfa", &["algebra-check", "broken/partial.dfa"]),
    ("algebra_check_not_cnf", &["algebra-check", "broken/long_rule.cfg"]),
    ("algebra_check_missing_file", &["algebra-check", "missing.alg"]),
    ("algebra_check_unknown_name", &["algebra-check", "Lexists"]),
    ("algebra_check_broken_toolbox", &["--toolbox", "broken", "algebra-check", "g4.alg"]),
    // oracle
    ("oracle_list", &["oracle", "list"]),
    ("oracle_groupoid", &["oracle", "groupoid-reachable", "--algebra", "g4.alg", "--max-len", "6"]),
    ("oracle_cfg", &["oracle", "cfg-groupoid", "--grammar", "anbn.cfg", "--max-len", "8"]),
    ("oracle_dfa", &["oracle", "transition-monoid", "--dfa", "starts1.dfa", "--max-len", "8"]),
    ("oracle_leaf", &["oracle", "leaf-stream", "--automaton", "pq.leaf", "--max-len", "8"]),
    ("oracle_lindstrom", &["oracle", "lindstrom-word", "--formula", "(forall x (Q Lmod2 (y) (and (< y x) (letter a y))))", "--max-n", "4"]),
    ("oracle_lindstrom_random", &["--seed", "7", "oracle", "lindstrom-word", "--random", "8", "--max-n", "3"]),
    ("oracle_rank", &["oracle", "instance-rank", "--max-len", "8"]),
    ("oracle_unknown", &["oracle", "nope"]),
    ("oracle_missing_object", &["oracle", "groupoid-reachable"]),
    ("oracle_wrong_kind", &["oracle", "cfg-groupoid", "--grammar", "g4.alg"]),
    ("oracle_bracketing_cap", &["oracle", "groupoid-reachable", "--algebra", "g4.alg", "--max-len", "13"]),
    ("oracle_random_misuse", &["oracle", "instance-rank", "--random", "3"]),
    // usage
    ("usage_no_subcommand", &[]),
    ("usage_unknown_flag", &["eval", "--frob"]),
    ("usage_bad_number", &["enumerate", "--formula", "true", "--max-n", "many"]),
];

pub fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests")
}

pub fn render(args: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_lindstrom"))
        .args(args)
        .current_dir(dir().join("fixtures"))
        .output()
        .expect("binary runs");
    let quoted: Vec<String> = args
        .iter()
        .map(|a| {
            if a.is_empty() || a.contains(|c: char| c.is_whitespace() || "()'{};#".contains(c)) {
                format!("'{}'", a.replace('\n', "\\n"))
            } else {
                a.to_string()
            }
        })
        .collect();
    format!(
        "$ lindstrom {}\n--- stdout\n{}--- stderr\n{}--- status\n{}\n",
        quoted.join(" "),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr),
        out.status.code().unwrap_or(-1)
    )
}

/// Mismatches between each case and its golden file. With `update` the
/// files are rewritten instead.
pub fn golden_failures(update: bool) -> Vec<String> {
    let golden = dir().join("golden");
    fs::create_dir_all(&golden).unwrap();
    let mut failures = Vec::new();
    for (name, args) in CASES {
        let actual = render(args);
        let path = golden.join(format!("{name}.txt"));
        if update {
            fs::write(&path, &actual).unwrap();
            continue;
        }
        match fs::read_to_string(&path) {
            Ok(expected) if expected == actual => {}
            Ok(expected) => failures.push(format!("{name}: expected\n{expected}\nfound\n{actual}")),
            Err(_) => failures.push(format!("{name}: missing {}", path.display())),
        }
    }
    failures
}

/// Subcommands and exit statuses no golden case exercises.
pub fn coverage_gaps() -> Vec<String> {
    let mut gaps = Vec::new();
    for sub in [
        "eval",
        "enumerate",
        "translate",
        "equiv",
        "leaffa",
        "algebra-check",
        "oracle",
    ] {
        if !CASES.iter().any(|(_, a)| a.contains(&sub)) {
            gaps.push(format!("subcommand {sub}"));
        }
    }
    let golden = dir().join("golden");
    for status in ["0", "1", "2"] {
        let seen = CASES.iter().any(|(name, _)| {
            fs::read_to_string(golden.join(format!("{name}.txt")))
                .map(|t| t.ends_with(&format!("--- status\n{status}\n")))
                .unwrap_or(false)
        });
        if !seen {
            gaps.push(format!("status {status}"));
        }
    }
    gaps
}

/// Parses, prints and reparses every corpus line; returns the number of
/// formulas or the first mismatch.
pub fn corpus_round_trip() -> Result<usize, String> {
    let text = fs::read_to_string(dir().join("fixtures/formulas.txt")).map_err(|e| e.to_string())?;
    let langs = Languages::with_builtins();
    let mut count = 0;
    for line in text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with(';'))
    {
        let f = parse_formula(line, &langs).map_err(|e| format!("{line}: {e}"))?;
        let printed = f.to_string();
        if printed != line {
            return Err(format!("{line} printed as {printed}"));
        }
        if parse_formula(&printed, &langs).map_err(|e| format!("{printed}: {e}"))? != f {
            return Err(format!("{line} does not reparse to itself"));
        }
        count += 1;
    }
    Ok(count)
}
