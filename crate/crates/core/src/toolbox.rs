//! Named languages, algebras and leaf automata loaded from text files.
//!
//! One file per object; the file stem is its name. Lines are `key: value`,
//! blank lines and lines starting with `;` are skipped.
//!
//! * `.alg`: `elements:`, `identity:`, `table:` followed by one row per
//!   element, `accept:`. When every element name is a single character the
//!   word problem is also registered as a language over those characters.
//! * `.dfa`: `states:`, `alphabet:`, `start:`, `finals:`, `trans: q a q'`.
//! * `.cfg`: `start:`, `epsilon:`, productions `S -> L R` and `L -> '('`.
//!   An `alphabet:` line fixes the terminal order, otherwise terminals are
//!   ordered by first occurrence.
//! * `.leaf`: `states:`, `input:`, `leaf:`, `start:`, `beta: q x`,
//!   `delta: q a -> q1 q2`.
//!
//! `.alg`, `.dfa` and `.cfg` files accept an optional `neutral: x` line
//! declaring a neutral letter of the language.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::algebra::{check_associative, Cfg, Dfa, LanguageSpec, Languages, Magma, WordProblem};
use crate::alphabet::Alphabet;
use crate::leafauto::LeafAutomaton;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ToolboxError {
    #[error("{file}:{line}: {message}")]
    Format { file: String, line: usize, message: String },
    #[error("{file}: invariant violated: {message}")]
    Invariant { file: String, message: String },
    #[error("{file}: {message}")]
    Io { file: String, message: String },
    #[error("name '{0}' is defined twice")]
    Duplicate(String),
    #[error("unsupported file extension: {0}")]
    UnknownKind(String),
}

/// A parsed algebra file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraFile {
    pub problem: WordProblem,
    pub associative: bool,
    pub neutral: Option<char>,
}

#[derive(Debug, Clone, Default)]
pub struct Toolbox {
    languages: Languages,
    algebras: BTreeMap<String, AlgebraFile>,
    automata: BTreeMap<String, Dfa>,
    grammars: BTreeMap<String, Cfg>,
    leaf_automata: BTreeMap<String, LeafAutomaton>,
    search_paths: Vec<PathBuf>,
}

impl Toolbox {
    /// Only the built-in languages.
    pub fn builtins() -> Self {
        Toolbox {
            languages: Languages::with_builtins(),
            ..Toolbox::default()
        }
    }

    pub fn languages(&self) -> &Languages {
        &self.languages
    }

    pub fn algebra(&self, name: &str) -> Option<&AlgebraFile> {
        self.algebras.get(name)
    }

    pub fn dfa(&self, name: &str) -> Option<&Dfa> {
        self.automata.get(name)
    }

    pub fn grammar(&self, name: &str) -> Option<&Cfg> {
        self.grammars.get(name)
    }

    pub fn leaf_automaton(&self, name: &str) -> Option<&LeafAutomaton> {
        self.leaf_automata.get(name)
    }

    pub fn search_paths(&self) -> &[PathBuf] {
        &self.search_paths
    }

    /// Every registered name, with its kind.
    pub fn entries(&self) -> Vec<(String, &'static str)> {
        let mut out: Vec<(String, &'static str)> = Vec::new();
        out.extend(self.languages.names().map(|n| (n.to_string(), "language")));
        out.extend(self.algebras.keys().map(|n| (n.clone(), "algebra")));
        out.extend(self.automata.keys().map(|n| (n.clone(), "dfa")));
        out.extend(self.grammars.keys().map(|n| (n.clone(), "grammar")));
        out.extend(self.leaf_automata.keys().map(|n| (n.clone(), "leaf automaton")));
        out.sort();
        out
    }

    fn add_language(&mut self, spec: LanguageSpec) -> Result<(), ToolboxError> {
        if self.languages.contains(spec.name()) {
            return Err(ToolboxError::Duplicate(spec.name().to_string()));
        }
        self.languages.insert(spec);
        Ok(())
    }

    /// Loads one file, dispatching on its extension.
    pub fn load_file(&mut self, path: &Path) -> Result<(), ToolboxError> {
        let file = path.display().to_string();
        let text = fs::read_to_string(path).map_err(|e| ToolboxError::Io {
            file: file.clone(),
            message: e.to_string(),
        })?;
        let name = path
            .file_stem()
            .and_then(|s| s.to_str())
            .ok_or_else(|| ToolboxError::Io {
                file: file.clone(),
                message: "file name is not valid UTF-8".into(),
            })?
            .to_string();
        let ext = path.extension().and_then(|s| s.to_str()).unwrap_or("");
        self.load_text(&name, ext, &text, &file)
    }

    /// Loads `text` as an object of kind `ext` (`alg`, `dfa`, `cfg`, `leaf`).
    pub fn load_text(&mut self, name: &str, ext: &str, text: &str, file: &str) -> Result<(), ToolboxError> {
        let invariant = |message: String| ToolboxError::Invariant {
            file: file.to_string(),
            message,
        };
        match ext {
            "alg" => {
                let alg = parse_algebra(name, text, file)?;
                let elements = alg.problem.magma().elements();
                if elements.iter().all(|e| e.chars().count() == 1) {
                    let alphabet = Alphabet::new(elements.iter().filter_map(|e| e.chars().next()))
                        .map_err(|e| invariant(e.to_string()))?;
                    let spec = LanguageSpec::from_word_problem(name, alg.problem.clone(), alphabet, alg.neutral)
                        .map_err(|e| invariant(e.to_string()))?;
                    self.add_language(spec)?;
                }
                if self.algebras.insert(name.to_string(), alg).is_some() {
                    return Err(ToolboxError::Duplicate(name.to_string()));
                }
            }
            "dfa" => {
                let (d, neutral) = parse_dfa(text, file)?;
                let spec = LanguageSpec::from_dfa(name, d.clone(), neutral).map_err(|e| invariant(e.to_string()))?;
                self.add_language(spec)?;
                self.automata.insert(name.to_string(), d);
            }
            "cfg" => {
                let (g, neutral) = parse_cfg(text, file)?;
                let spec = LanguageSpec::from_cfg(name, g.clone(), neutral).map_err(|e| invariant(e.to_string()))?;
                self.add_language(spec)?;
                self.grammars.insert(name.to_string(), g);
            }
            "leaf" => {
                let m = parse_leaf(text, file)?;
                if self.leaf_automata.insert(name.to_string(), m).is_some() {
                    return Err(ToolboxError::Duplicate(name.to_string()));
                }
            }
            other => return Err(ToolboxError::UnknownKind(format!("{file} ({other})"))),
        }
        Ok(())
    }
}

const KINDS: [&str; 4] = ["alg", "dfa", "cfg", "leaf"];

/// Built-ins plus every file under `paths`. Directories contribute their
/// files with a known extension, in name order.
pub fn load_toolbox(paths: &[PathBuf]) -> Result<Toolbox, ToolboxError> {
    let mut tb = Toolbox::builtins();
    for path in paths {
        if path.is_dir() {
            let entries = fs::read_dir(path).map_err(|e| ToolboxError::Io {
                file: path.display().to_string(),
                message: e.to_string(),
            })?;
            let mut files: Vec<PathBuf> = entries
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| {
                    p.is_file()
                        && p.extension()
                            .and_then(|s| s.to_str())
                            .is_some_and(|e| KINDS.contains(&e))
                })
                .collect();
            files.sort();
            for f in files {
                tb.load_file(&f)?;
            }
        } else {
            tb.load_file(path)?;
        }
        tb.search_paths.push(path.clone());
    }
    Ok(tb)
}

struct Lines<'a> {
    file: &'a str,
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str, file: &'a str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with(';'))
            .collect();
        Lines { file, lines, pos: 0 }
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        let l = self.lines.get(self.pos).copied();
        self.pos += 1;
        l
    }

    fn err(&self, line: usize, message: impl Into<String>) -> ToolboxError {
        ToolboxError::Format {
            file: self.file.to_string(),
            line,
            message: message.into(),
        }
    }

    fn last_line(&self) -> usize {
        self.lines.last().map_or(1, |l| l.0)
    }
}

fn split_key(line: &str) -> Option<(&str, &str)> {
    let (k, v) = line.split_once(':')?;
    let k = k.trim();
    if k.is_empty() || k.contains(char::is_whitespace) {
        return None;
    }
    Some((k, v.trim()))
}

fn single_char(lines: &Lines, line: usize, token: &str) -> Result<char, ToolboxError> {
    let mut cs = token.chars();
    match (cs.next(), cs.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(lines.err(line, format!("expected a single letter, found '{token}'"))),
    }
}

fn letters(lines: &Lines, line: usize, value: &str) -> Result<Alphabet, ToolboxError> {
    let tokens: Vec<&str> = value
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .collect();
    let cs = tokens
        .iter()
        .map(|t| single_char(lines, line, t))
        .collect::<Result<Vec<_>, _>>()?;
    Alphabet::new(cs).map_err(|e| lines.err(line, e.to_string()))
}

fn bool_value(lines: &Lines, line: usize, value: &str) -> Result<bool, ToolboxError> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(lines.err(line, format!("expected true or false, found '{other}'"))),
    }
}

fn required<T>(lines: &Lines, v: Option<T>, key: &str) -> Result<T, ToolboxError> {
    v.ok_or_else(|| lines.err(lines.last_line(), format!("missing '{key}:' line")))
}

fn set_once<'a>(
    lines: &Lines,
    line: usize,
    slot: &mut Option<&'a str>,
    key: &str,
    value: &'a str,
) -> Result<(), ToolboxError> {
    if slot.replace(value).is_some() {
        return Err(lines.err(line, format!("'{key}:' given twice")));
    }
    Ok(())
}

/// Parses the `.alg` format. Identity law is checked; associativity is
/// recorded, not required.
pub fn parse_algebra(name: &str, text: &str, file: &str) -> Result<AlgebraFile, ToolboxError> {
    let mut lines = Lines::new(text, file);
    let (mut elements, mut identity, mut accept, mut neutral) = (None, None, None, None);
    let mut rows: Option<Vec<(usize, Vec<&str>)>> = None;
    while let Some((no, line)) = lines.next() {
        let (key, value) =
            split_key(line).ok_or_else(|| lines.err(no, format!("expected 'key: value', found '{line}'")))?;
        match key {
            "elements" => set_once(&lines, no, &mut elements, key, value)?,
            "identity" => set_once(&lines, no, &mut identity, key, value)?,
            "accept" => set_once(&lines, no, &mut accept, key, value)?,
            "neutral" => set_once(&lines, no, &mut neutral, key, value)?,
            "table" => {
                let g = elements
                    .ok_or_else(|| lines.err(no, "'table:' must follow 'elements:'"))?
                    .split_whitespace()
                    .count();
                let mut table = Vec::with_capacity(g);
                for _ in 0..g {
                    let (rno, row) = lines
                        .next()
                        .ok_or_else(|| lines.err(no, format!("table needs {g} rows")))?;
                    table.push((rno, row.split_whitespace().collect()));
                }
                rows = Some(table);
            }
            other => return Err(lines.err(no, format!("unknown key '{other}'"))),
        }
    }
    let elements: Vec<String> = required(&lines, elements, "elements")?
        .split_whitespace()
        .map(str::to_string)
        .collect();
    let lookup = |no: usize, s: &str| {
        elements
            .iter()
            .position(|e| e == s)
            .ok_or_else(|| lines.err(no, format!("unknown element '{s}'")))
    };
    let rows = required(&lines, rows, "table")?;
    let mut table = Vec::with_capacity(rows.len());
    for (no, row) in &rows {
        if row.len() != elements.len() {
            return Err(lines.err(
                *no,
                format!("row has {} entries, expected {}", row.len(), elements.len()),
            ));
        }
        table.push(row.iter().map(|s| lookup(*no, s)).collect::<Result<Vec<_>, _>>()?);
    }
    let identity = lookup(lines.last_line(), required(&lines, identity, "identity")?)?;
    let accept: BTreeSet<usize> = accept
        .unwrap_or("")
        .split_whitespace()
        .map(|s| lookup(lines.last_line(), s))
        .collect::<Result<_, _>>()?;
    let neutral = neutral.map(|v| single_char(&lines, lines.last_line(), v)).transpose()?;
    let invariant = |e: crate::algebra::AlgebraError| ToolboxError::Invariant {
        file: file.to_string(),
        message: e.to_string(),
    };
    let magma = Magma::new(name, elements, table, identity).map_err(invariant)?;
    let associative = check_associative(&magma);
    let problem = WordProblem::new(magma, accept).map_err(invariant)?;
    Ok(AlgebraFile {
        problem,
        associative,
        neutral,
    })
}

/// Parses the `.dfa` format.
pub fn parse_dfa(text: &str, file: &str) -> Result<(Dfa, Option<char>), ToolboxError> {
    let mut lines = Lines::new(text, file);
    let (mut states, mut alphabet, mut start, mut finals, mut neutral) = (None, None, None, None, None);
    let mut trans: Vec<(usize, &str)> = Vec::new();
    while let Some((no, line)) = lines.next() {
        let (key, value) =
            split_key(line).ok_or_else(|| lines.err(no, format!("expected 'key: value', found '{line}'")))?;
        match key {
            "states" => set_once(&lines, no, &mut states, key, value)?,
            "alphabet" => set_once(&lines, no, &mut alphabet, key, value)?,
            "start" => set_once(&lines, no, &mut start, key, value)?,
            "finals" => set_once(&lines, no, &mut finals, key, value)?,
            "neutral" => set_once(&lines, no, &mut neutral, key, value)?,
            "trans" => trans.push((no, value)),
            other => return Err(lines.err(no, format!("unknown key '{other}'"))),
        }
    }
    let states: Vec<&str> = required(&lines, states, "states")?.split_whitespace().collect();
    let alpha_line = lines.last_line();
    let alphabet = letters(&lines, alpha_line, required(&lines, alphabet, "alphabet")?)?;
    let start = required(&lines, start, "start")?;
    let finals: Vec<&str> = finals.unwrap_or("").split_whitespace().collect();
    let mut triples = Vec::new();
    for (no, t) in &trans {
        let parts: Vec<&str> = t.split_whitespace().collect();
        let [from, a, to] = parts.as_slice() else {
            return Err(lines.err(*no, format!("expected 'trans: q a q2', found '{t}'")));
        };
        for s in [from, to] {
            if !states.contains(s) {
                return Err(lines.err(*no, format!("unknown state '{s}'")));
            }
        }
        let c = single_char(&lines, *no, a)?;
        if !alphabet.contains(c) {
            return Err(lines.err(*no, format!("letter '{c}' not in the alphabet")));
        }
        triples.push((*from, c, *to));
    }
    let neutral = neutral.map(|v| single_char(&lines, lines.last_line(), v)).transpose()?;
    let d = Dfa::from_triples(&states, alphabet, start, &finals, &triples).map_err(|e| ToolboxError::Invariant {
        file: file.to_string(),
        message: e.to_string(),
    })?;
    Ok((d, neutral))
}

/// Parses the `.cfg` format; the grammar must be in Chomsky normal form.
pub fn parse_cfg(text: &str, file: &str) -> Result<(Cfg, Option<char>), ToolboxError> {
    let mut lines = Lines::new(text, file);
    let (mut start, mut epsilon, mut alphabet, mut neutral) = (None, None, None, None);
    let mut rules: Vec<(usize, String, Vec<String>, bool)> = Vec::new();
    while let Some((no, line)) = lines.next() {
        if let Some((head, rhs)) = line.split_once("->") {
            let head = head.trim();
            if head.is_empty() || head.contains(char::is_whitespace) {
                return Err(lines.err(no, format!("bad production head '{head}'")));
            }
            let rhs = rhs.trim();
            if let Some(t) = rhs.strip_prefix('\'').and_then(|r| r.strip_suffix('\'')) {
                single_char(&lines, no, t)?;
                rules.push((no, head.to_string(), vec![t.to_string()], true));
            } else {
                let syms: Vec<String> = rhs.split_whitespace().map(str::to_string).collect();
                if syms.len() != 2 {
                    return Err(lines.err(no, format!("production '{line}' is not in Chomsky normal form")));
                }
                rules.push((no, head.to_string(), syms, false));
            }
            continue;
        }
        let (key, value) = split_key(line)
            .ok_or_else(|| lines.err(no, format!("expected a production or 'key: value', found '{line}'")))?;
        match key {
            "start" => set_once(&lines, no, &mut start, key, value)?,
            "epsilon" => set_once(&lines, no, &mut epsilon, key, value)?,
            "alphabet" => set_once(&lines, no, &mut alphabet, key, value)?,
            "neutral" => set_once(&lines, no, &mut neutral, key, value)?,
            other => return Err(lines.err(no, format!("unknown key '{other}'"))),
        }
    }
    let start = required(&lines, start, "start")?;
    let epsilon = bool_value(&lines, lines.last_line(), epsilon.unwrap_or("false"))?;
    let terminals = match alphabet {
        Some(v) => letters(&lines, lines.last_line(), v)?,
        None => {
            let mut seen: Vec<char> = Vec::new();
            for (_, _, rhs, terminal) in &rules {
                if *terminal {
                    let c = rhs[0].chars().next().unwrap();
                    if !seen.contains(&c) {
                        seen.push(c);
                    }
                }
            }
            Alphabet::new(seen).map_err(|e| lines.err(1, e.to_string()))?
        }
    };
    for (no, _, rhs, terminal) in &rules {
        if *terminal && !terminals.contains(rhs[0].chars().next().unwrap()) {
            return Err(lines.err(*no, format!("terminal '{}' not in the alphabet", rhs[0])));
        }
    }
    if !rules.iter().any(|r| r.1 == start) {
        return Err(lines.err(lines.last_line(), format!("start symbol '{start}' has no productions")));
    }
    // start-symbol productions first: the first head is taken as start
    let mut ordered: Vec<(&str, Vec<&str>)> = Vec::new();
    for pass in [true, false] {
        for (_, head, rhs, _) in &rules {
            if (head == start) == pass {
                ordered.push((head, rhs.iter().map(String::as_str).collect()));
            }
        }
    }
    let refs: Vec<(&str, &[&str])> = ordered.iter().map(|(h, r)| (*h, r.as_slice())).collect();
    let neutral = neutral.map(|v| single_char(&lines, lines.last_line(), v)).transpose()?;
    let g = Cfg::from_named(terminals, epsilon, &refs).map_err(|e| ToolboxError::Invariant {
        file: file.to_string(),
        message: e.to_string(),
    })?;
    Ok((g, neutral))
}

/// Parses the `.leaf` format.
pub fn parse_leaf(text: &str, file: &str) -> Result<LeafAutomaton, ToolboxError> {
    let mut lines = Lines::new(text, file);
    let (mut states, mut input, mut leaf, mut start) = (None, None, None, None);
    let mut delta: Vec<(usize, &str)> = Vec::new();
    let mut beta: Vec<(usize, &str)> = Vec::new();
    while let Some((no, line)) = lines.next() {
        let (key, value) =
            split_key(line).ok_or_else(|| lines.err(no, format!("expected 'key: value', found '{line}'")))?;
        match key {
            "states" => set_once(&lines, no, &mut states, key, value)?,
            "input" => set_once(&lines, no, &mut input, key, value)?,
            "leaf" => set_once(&lines, no, &mut leaf, key, value)?,
            "start" => set_once(&lines, no, &mut start, key, value)?,
            "delta" => delta.push((no, value)),
            "beta" => beta.push((no, value)),
            other => return Err(lines.err(no, format!("unknown key '{other}'"))),
        }
    }
    let states: Vec<&str> = required(&lines, states, "states")?.split_whitespace().collect();
    let input = letters(&lines, lines.last_line(), required(&lines, input, "input")?)?;
    let leaf = letters(&lines, lines.last_line(), required(&lines, leaf, "leaf")?)?;
    let start = required(&lines, start, "start")?;
    let mut trans: Vec<(&str, char, Vec<&str>)> = Vec::new();
    for (no, d) in &delta {
        let (lhs, rhs) = d
            .split_once("->")
            .ok_or_else(|| lines.err(*no, format!("expected 'delta: q a -> q1 q2', found '{d}'")))?;
        let parts: Vec<&str> = lhs.split_whitespace().collect();
        let [q, a] = parts.as_slice() else {
            return Err(lines.err(*no, format!("expected 'q a' before '->', found '{}'", lhs.trim())));
        };
        trans.push((q, single_char(&lines, *no, a)?, rhs.split_whitespace().collect()));
    }
    let mut betas: Vec<(&str, char)> = Vec::new();
    for (no, b) in &beta {
        let parts: Vec<&str> = b.split_whitespace().collect();
        let [q, x] = parts.as_slice() else {
            return Err(lines.err(*no, format!("expected 'beta: q x', found '{b}'")));
        };
        betas.push((q, single_char(&lines, *no, x)?));
    }
    let trans_refs: Vec<(&str, char, &[&str])> = trans.iter().map(|(q, a, s)| (*q, *a, s.as_slice())).collect();
    LeafAutomaton::from_named(&states, input, leaf, start, &trans_refs, &betas).map_err(|e| ToolboxError::Invariant {
        file: file.to_string(),
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const G4: &str = "elements: e a b c\nidentity: e\ntable:\ne a b c\na b c a\nb e a b\nc c b e\naccept: e b\n";

    #[test]
    fn g4_loads_non_associative() {
        let alg = parse_algebra("g4", G4, "g4.alg").unwrap();
        assert!(!alg.associative);
        assert_eq!(alg.problem.magma().order(), 4);
        let mut tb = Toolbox::builtins();
        tb.load_text("g4", "alg", G4, "g4.alg").unwrap();
        assert!(tb.languages().contains("g4"));
        assert!(tb.languages().contains("Lexists"));
    }

    #[test]
    fn identity_law_violation() {
        let text = "elements: e a\nidentity: e\ntable:\ne a\ne e\naccept: e\n";
        let err = parse_algebra("bad", text, "bad.alg").unwrap_err();
        assert!(matches!(err, ToolboxError::Invariant { .. }), "{err}");
    }

    #[test]
    fn format_errors_carry_lines() {
        let text = "elements: e a\nidentity: e\ntable:\ne a\na x\n";
        assert_eq!(
            parse_algebra("bad", text, "bad.alg").unwrap_err().to_string(),
            "bad.alg:5: unknown element 'x'"
        );
        let dfa = "states: q0 q1\nalphabet: 0 1\nstart: q0\nfinals: q1\ntrans: q0 0 q0\ntrans q0 1 q1\n";
        assert_eq!(
            parse_dfa(dfa, "d.dfa").unwrap_err().to_string(),
            "d.dfa:6: expected 'key: value', found 'trans q0 1 q1'"
        );
    }

    #[test]
    fn dfa_and_cfg() {
        let dfa = "states: q0 q1\nalphabet: 0 1\nstart: q0\nfinals: q1\ntrans: q0 0 q0\ntrans: q0 1 q1\ntrans: q1 0 q1\ntrans: q1 1 q1\n";
        let (d, _) = parse_dfa(dfa, "d.dfa").unwrap();
        let w = d.alphabet().encode("001").unwrap();
        assert!(d.accepts(&w));
        let cfg = "start: S\nepsilon: false\nS -> L R\nS -> L T\nS -> S S\nT -> S R\nL -> '('\nR -> ')'\n";
        let (g, _) = parse_cfg(cfg, "p.cfg").unwrap();
        assert_eq!(g.terminals().letters(), &['(', ')']);
        assert!(crate::algebra::cyk_member(&g, &g.terminals().encode("(())").unwrap()));
        let bad = "start: S\nS -> A B C\n";
        assert!(matches!(
            parse_cfg(bad, "b.cfg"),
            Err(ToolboxError::Format { line: 2, .. })
        ));
    }

    #[test]
    fn leaf_format() {
        let text =
            "states: p q\ninput: a\nleaf: 0 1\nstart: p\ndelta: p a -> p q\ndelta: q a -> q\nbeta: p 0\nbeta: q 1\n";
        let m = parse_leaf(text, "m.leaf").unwrap();
        let w = m.input().encode("aa").unwrap();
        let s = crate::leafauto::leaf_string(&m, &w, 100).unwrap();
        assert_eq!(m.leaf().decode(&s), "011");
        let missing = "states: p\ninput: a\nleaf: 0\nstart: p\nbeta: p 0\n";
        assert!(matches!(
            parse_leaf(missing, "m.leaf"),
            Err(ToolboxError::Invariant { .. })
        ));
    }

    #[test]
    fn empty_paths_give_builtins() {
        let tb = load_toolbox(&[]).unwrap();
        let names: Vec<&str> = tb.languages().names().collect();
        assert_eq!(names.len(), crate::algebra::BUILTIN_NAMES.len());
    }
}
