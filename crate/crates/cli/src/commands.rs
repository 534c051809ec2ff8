use std::fmt::Write as _;

use anyhow::{anyhow, bail, Result};
use lindstrom_core::algebra::{cfg_to_groupoid, groupoid_reachable, regular_to_monoid, word_problem_member};
use lindstrom_core::alphabet::Alphabet;
use lindstrom_core::leafauto::{leaf_sentence, leaf_string, leaffa_member};
use lindstrom_core::logic::random::FormulaGen;
use lindstrom_core::logic::{define_language, Assignment, EvalOptions, Evaluator, Formula};
use lindstrom_core::oracle::{OracleOutcome, OracleRegistry, OracleRequest};
use lindstrom_core::syntax::parse_formula;
use lindstrom_core::toolbox::{load_toolbox, Toolbox};
use lindstrom_core::translate::{
    check_equivalence, CheckOptions, Identity, StructureSpace, TranslateParams, TranslationRegistry,
};

use crate::inputs::{load_formula, parse_assignment, parse_structure, resolve_object};
use crate::{Cli, Command, FormulaArg, TranslateOpts};

pub struct Output {
    pub text: String,
    pub status: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, status: 0 }
    }
}

fn alphabet(text: &str) -> Result<Alphabet> {
    let a = Alphabet::parse(text).map_err(|e| anyhow!("alphabet: {e}"))?;
    if a.is_empty() {
        bail!("alphabet: no letters in '{text}'");
    }
    Ok(a)
}

fn formula(arg: &FormulaArg, tb: &Toolbox) -> Result<Formula> {
    load_formula(arg.formula.as_deref(), arg.formula_file.as_deref(), tb)
}

fn params(alphabet_text: &str, max_n: Option<usize>, opts: &TranslateOpts) -> Result<TranslateParams> {
    Ok(TranslateParams {
        alphabet: alphabet(alphabet_text)?,
        k: opts.k,
        pad: opts.pad,
        constants: opts
            .constants
            .as_deref()
            .map(|c| {
                c.split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect()
            })
            .unwrap_or_default(),
        max_n,
        exponent_cap: opts.exponent_cap,
    })
}

pub fn run(cli: Cli) -> Result<Output> {
    let mut tb = load_toolbox(&cli.global.toolbox)?;
    let options = EvalOptions {
        instance_cap: cli.global.instance_cap,
    };
    match cli.command {
        Command::Eval {
            formula: f,
            alphabet: a,
            structure,
            assign,
        } => {
            let f = formula(&f, &tb)?;
            let s = parse_structure(&structure, &alphabet(&a)?)?;
            let assignment = match assign {
                Some(text) => parse_assignment(&text, s.size())?,
                None => Assignment::new(),
            };
            let ev = Evaluator::with_options(tb.languages(), options);
            Ok(Output::ok(format!("{}\n", ev.eval(&s, &assignment, &f)?)))
        }
        Command::Enumerate {
            formula: f,
            alphabet: a,
            max_n,
        } => {
            let f = formula(&f, &tb)?;
            if !f.is_sentence() {
                bail!("enumerate needs a sentence; free variables: {}", free_list(&f));
            }
            let ev = Evaluator::with_options(tb.languages(), options);
            let mut text = String::new();
            for w in define_language(&ev, &f, &alphabet(&a)?, max_n)? {
                writeln!(text, "{}", if w.is_empty() { "ε" } else { &w })?;
            }
            Ok(Output::ok(text))
        }
        Command::Translate {
            translation,
            formula: f,
            alphabet: a,
            max_n,
            opts,
        } => {
            let registry = TranslationRegistry::with_builtins();
            if translation == "list" {
                let mut text = String::new();
                for t in registry.iter() {
                    writeln!(text, "{:<16} {}", t.name(), t.summary())?;
                }
                return Ok(Output::ok(text));
            }
            let t = registry.get(&translation)?;
            let f = formula(&f, &tb)?;
            let p = params(&a, max_n, &opts)?;
            let translated = t.translate(&f, tb.languages(), &p)?;
            let ev = Evaluator::with_options(tb.languages(), options);
            let report = translated.validate(&ev, &f, CheckOptions::default())?;
            Ok(Output {
                text: format!("{}\n{report}\n", translated.target),
                status: if report.is_equivalent() { 0 } else { 1 },
            })
        }
        Command::Equiv {
            formula: f,
            translation,
            against,
            alphabet: a,
            max_n,
            opts,
        } => {
            let f = formula(&f, &tb)?;
            let ev = Evaluator::with_options(tb.languages(), options);
            let report = match (translation, against) {
                (Some(name), None) => {
                    let registry = TranslationRegistry::with_builtins();
                    let p = params(&a, max_n, &opts)?;
                    let translated = registry.get(&name)?.translate(&f, tb.languages(), &p)?;
                    translated.validate(&ev, &f, CheckOptions::default())?
                }
                (None, Some(g)) => {
                    let g = parse_formula(&g, tb.languages()).map_err(|e| anyhow!("against: {e}"))?;
                    let space = StructureSpace::strings(alphabet(&a)?, 1, max_n.unwrap_or(3));
                    check_equivalence(&ev, &f, &g, &space, &Identity, CheckOptions::default())?
                }
                _ => bail!("equiv needs --translation or --against"),
            };
            Ok(Output {
                text: format!("{}\n", report.verdict_line()),
                status: if report.is_equivalent() { 0 } else { 1 },
            })
        }
        Command::Leaffa {
            automaton,
            language,
            input,
            show_leaves,
            sentence,
        } => {
            let name = resolve_object(&mut tb, &automaton)?;
            let lang = resolve_object(&mut tb, &language)?;
            let m = tb
                .leaf_automaton(&name)
                .ok_or_else(|| anyhow!("no leaf automaton named '{name}'"))?;
            let spec = tb
                .languages()
                .get(&lang)
                .ok_or_else(|| anyhow!("unknown language '{lang}'"))?;
            if sentence {
                return Ok(Output::ok(format!("{}\n", leaf_sentence(m, spec)?)));
            }
            let input = input.unwrap_or_default();
            let w = m
                .input()
                .encode(if input == "ε" { "" } else { &input })
                .map_err(|e| anyhow!("input: {e}"))?;
            let mut text = String::new();
            if show_leaves {
                let leaves = leaf_string(m, &w, cli.global.leaf_cap)?;
                writeln!(text, "leaves: {}", m.leaf().decode(&leaves))?;
            }
            writeln!(text, "{}", leaffa_member(m, spec, &w, cli.global.leaf_cap)?)?;
            Ok(Output::ok(text))
        }
        Command::AlgebraCheck { object, word } => {
            let name = resolve_object(&mut tb, &object)?;
            algebra_check(&tb, &name, word.as_deref())
        }
        Command::Oracle {
            name,
            algebra,
            grammar,
            dfa,
            automaton,
            formula: f,
            random,
            alphabet: a,
            max_len,
            max_n,
        } => {
            let registry = OracleRegistry::with_builtins();
            if name == "list" {
                let mut text = String::new();
                for o in registry.iter() {
                    writeln!(text, "{:<20} {}", o.name(), o.summary())?;
                }
                return Ok(Output::ok(text));
            }
            let oracle = registry.get(&name)?;
            let objects: Vec<String> = [algebra, grammar, dfa, automaton].into_iter().flatten().collect();
            if objects.len() > 1 {
                bail!("give at most one of --algebra, --grammar, --dfa, --automaton");
            }
            let object = objects.first().map(|o| resolve_object(&mut tb, o)).transpose()?;
            let formula_given = f.formula.is_some() || f.formula_file.is_some();
            let parsed = if formula_given { Some(formula(&f, &tb)?) } else { None };
            let mut request = OracleRequest::new(&tb);
            request.object = object;
            request.alphabet = alphabet(&a)?;
            request.max_len = max_len;
            request.max_n = max_n;
            request.leaf_cap = cli.global.leaf_cap;
            request.instance_cap = cli.global.instance_cap;
            let outcome = match random {
                None => {
                    request.formula = parsed;
                    oracle.run(&request)?
                }
                Some(count) => {
                    if oracle.name() != "lindstrom-word" {
                        bail!("--random applies to the lindstrom-word oracle only");
                    }
                    if parsed.is_some() {
                        bail!("give either --random or a formula, not both");
                    }
                    random_suite(oracle, &mut request, count, cli.global.seed)?
                }
            };
            Ok(Output {
                text: format!("{outcome}\n"),
                status: if outcome.agrees() { 0 } else { 1 },
            })
        }
    }
}

fn free_list(f: &Formula) -> String {
    let fv = f.free_vars();
    let mut names: Vec<String> = fv.first_order.into_iter().collect();
    names.extend(fv.second_order.into_iter().map(|(n, _)| n));
    names.join(", ")
}

const RANDOM_LANGUAGES: [&str; 4] = ["Lexists", "Lforall", "Lmod2", "Maj"];

/// Seeded Lindström nodes `(Q L (x) φ)` with random first-order arguments.
fn random_suite(
    oracle: &dyn lindstrom_core::oracle::Oracle,
    request: &mut OracleRequest,
    count: usize,
    seed: u64,
) -> Result<OracleOutcome> {
    let letters = request.alphabet.letters().to_vec();
    let mut cases = 0;
    for i in 0..count {
        let mut gen = FormulaGen::new(seed.wrapping_add(i as u64), &letters).with_depth(2);
        request.formula = Some(Formula::Lind {
            lang: RANDOM_LANGUAGES[i % RANDOM_LANGUAGES.len()].to_string(),
            vars: vec!["x".into()],
            args: vec![gen.formula(&["x"])],
        });
        match oracle.run(request)? {
            OracleOutcome::Agree { cases: c } => cases += c,
            disagree => return Ok(disagree),
        }
    }
    Ok(OracleOutcome::Agree { cases })
}

fn algebra_check(tb: &Toolbox, name: &str, word: Option<&str>) -> Result<Output> {
    let mut text = String::new();
    if let Some(alg) = tb.algebra(name) {
        let m = alg.problem.magma();
        writeln!(text, "algebra: {name}")?;
        writeln!(text, "elements: {}", m.elements().join(" "))?;
        writeln!(text, "identity: {}", m.element_name(m.identity()))?;
        writeln!(text, "associative: {}", alg.associative)?;
        if let Some((x, y, z)) = m.associativity_witness() {
            let n = |e| m.element_name(e);
            writeln!(
                text,
                "associativity fails: ({0}{1}){2} = {3}, {0}({1}{2}) = {4}",
                n(x),
                n(y),
                n(z),
                n(m.mul(m.mul(x, y), z)),
                n(m.mul(x, m.mul(y, z)))
            )?;
        }
        let accept: Vec<&str> = alg.problem.accept().iter().map(|&x| m.element_name(x)).collect();
        writeln!(text, "accept: {}", accept.join(" "))?;
        if let Some(w) = word {
            let tokens: Vec<&str> =
                if w.contains(char::is_whitespace) || m.elements().iter().any(|e| e.chars().count() > 1) {
                    w.split_whitespace().collect()
                } else {
                    w.char_indices().map(|(i, c)| &w[i..i + c.len_utf8()]).collect()
                };
            let word: Vec<usize> = tokens
                .iter()
                .map(|t| m.element_index(t).ok_or_else(|| anyhow!("word: unknown element '{t}'")))
                .collect::<Result<_>>()?;
            if !word.is_empty() {
                let reach: Vec<&str> = groupoid_reachable(m, &word)?
                    .into_iter()
                    .map(|x| m.element_name(x))
                    .collect();
                writeln!(text, "reachable: {{{}}}", reach.join(","))?;
            }
            writeln!(text, "member: {}", word_problem_member(&alg.problem, &word)?)?;
        }
    } else if let Some(d) = tb.dfa(name) {
        let (wp, _) = regular_to_monoid(d)?;
        writeln!(text, "dfa: {name}")?;
        writeln!(text, "states: {}", d.states().join(" "))?;
        writeln!(text, "alphabet: {}", d.alphabet())?;
        writeln!(text, "transition monoid: {} elements", wp.magma().order())?;
        if let Some(w) = word {
            let w = d
                .alphabet()
                .encode(if w == "ε" { "" } else { w })
                .map_err(|e| anyhow!("word: {e}"))?;
            writeln!(text, "member: {}", d.accepts(&w))?;
        }
    } else if let Some(g) = tb.grammar(name) {
        let (wp, _) = cfg_to_groupoid(g)?;
        writeln!(text, "grammar: {name}")?;
        writeln!(text, "nonterminals: {}", g.nonterminals().join(" "))?;
        writeln!(text, "terminals: {}", g.terminals())?;
        writeln!(text, "powerset groupoid: {} elements", wp.magma().order())?;
        writeln!(text, "associative: {}", wp.is_associative())?;
        if let Some(w) = word {
            let w = g
                .terminals()
                .encode(if w == "ε" { "" } else { w })
                .map_err(|e| anyhow!("word: {e}"))?;
            writeln!(text, "member: {}", lindstrom_core::algebra::cyk_member(g, &w))?;
        }
    } else if let Some(m) = tb.leaf_automaton(name) {
        writeln!(text, "leaf automaton: {name}")?;
        writeln!(text, "states: {}", m.states().join(" "))?;
        writeln!(text, "input: {}", m.input())?;
        writeln!(text, "leaf: {}", m.leaf())?;
        writeln!(text, "max branching: {}", m.max_branching())?;
        if let Some(w) = word {
            let w = m
                .input()
                .encode(if w == "ε" { "" } else { w })
                .map_err(|e| anyhow!("word: {e}"))?;
            writeln!(text, "leaf count: {}", lindstrom_core::leafauto::leaf_count(m, &w))?;
        }
    } else {
        bail!("no algebra, dfa, grammar or leaf automaton named '{name}'");
    }
    writeln!(text, "invariants: ok")?;
    Ok(Output::ok(text))
}
