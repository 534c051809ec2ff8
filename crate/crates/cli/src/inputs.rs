//! Parsing of command-line values: structures, assignments, formulas and
//! toolbox object references.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use lindstrom_core::alphabet::Alphabet;
use lindstrom_core::logic::{Assignment, Formula, Relation, Structure};
use lindstrom_core::syntax::parse_formula;
use lindstrom_core::toolbox::Toolbox;

/// `ab`, `ε` or `n=4;c1=2;c2=0`. This is the form structures are
/// printed in, so witnesses can be fed back.
pub fn parse_structure(text: &str, alphabet: &Alphabet) -> Result<Structure> {
    let mut parts = text.split(';');
    let head = parts.next().unwrap_or("").trim();
    let mut constants = Vec::new();
    for part in parts.flat_map(|p| p.split(',')) {
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| anyhow!("structure: expected name=value, found '{part}'"))?;
        let value: usize = value
            .trim()
            .parse()
            .with_context(|| format!("structure: bad value for constant {}", name.trim()))?;
        constants.push((name.trim().to_string(), value));
    }
    let size = if let Some(n) = head.strip_prefix("n=") {
        Some(
            n.parse::<usize>()
                .with_context(|| format!("structure: bad size '{n}'"))?,
        )
    } else {
        None
    };
    if let Some(n) = size {
        if let Some((name, v)) = constants.iter().find(|(_, v)| *v >= n) {
            bail!("structure: constant {name}={v} outside a domain of size {n}");
        }
        return Ok(Structure::with_constants(n, constants));
    }
    if !constants.is_empty() {
        bail!("structure: constants need a size, as in n=4;c1=2");
    }
    let word = if head == "ε" { "" } else { head };
    Structure::from_string(alphabet, word).map_err(|e| anyhow!("structure: {e}"))
}

fn split_top(text: &str) -> Vec<&str> {
    let (mut depth, mut start, mut out) = (0i32, 0, Vec::new());
    for (i, c) in text.char_indices() {
        match c {
            '{' | '(' => depth += 1,
            '}' | ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&text[start..]);
    out.into_iter().map(str::trim).filter(|s| !s.is_empty()).collect()
}

/// `x=1,X={0,2},R={(0,1)}` over a domain of size `n`; `-` is empty.
pub fn parse_assignment(text: &str, n: usize) -> Result<Assignment> {
    let mut a = Assignment::new();
    if text.trim() == "-" {
        return Ok(a);
    }
    for item in split_top(text) {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| anyhow!("assignment: expected name=value, found '{item}'"))?;
        let (name, value) = (name.trim(), value.trim());
        if let Some(inner) = value.strip_prefix('{').and_then(|v| v.strip_suffix('}')) {
            let tuples: Vec<Vec<usize>> = split_top(inner)
                .into_iter()
                .map(|t| {
                    let t = t.trim_start_matches('(').trim_end_matches(')');
                    t.split(',')
                        .map(|x| {
                            x.trim()
                                .parse::<usize>()
                                .map_err(|_| anyhow!("assignment: bad element '{x}' in {name}"))
                        })
                        .collect()
                })
                .collect::<Result<_>>()?;
            let arity = tuples.first().map_or(1, Vec::len);
            let mut rel = Relation::empty(arity, n);
            for t in &tuples {
                if t.len() != arity || t.iter().any(|&x| x >= n) {
                    bail!("assignment: tuple {t:?} of {name} does not fit arity {arity} over {n} elements");
                }
                rel.insert(t);
            }
            a = a.set_relation(name, rel);
        } else {
            let v: usize = value
                .parse()
                .map_err(|_| anyhow!("assignment: bad value '{value}' for {name}"))?;
            if v >= n {
                bail!("assignment: {name}={v} outside a domain of size {n}");
            }
            a = a.set(name, v);
        }
    }
    Ok(a)
}

/// The formula given inline or in a file, parsed against the toolbox.
pub fn load_formula(inline: Option<&str>, file: Option<&Path>, tb: &Toolbox) -> Result<Formula> {
    let (text, origin) = match (inline, file) {
        (Some(t), None) => (t.to_string(), "formula".to_string()),
        (None, Some(p)) => (
            fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?,
            p.display().to_string(),
        ),
        (Some(_), Some(_)) => bail!("give either --formula or --formula-file, not both"),
        (None, None) => bail!("missing --formula or --formula-file"),
    };
    parse_formula(&text, tb.languages()).map_err(|e| anyhow!("{origin}: {e}"))
}

/// Names an object of the toolbox. A value naming an existing file with a
/// toolbox extension is loaded first, under its file stem.
pub fn resolve_object(tb: &mut Toolbox, value: &str) -> Result<String> {
    let path = Path::new(value);
    let ext = path.extension().and_then(|e| e.to_str());
    if matches!(ext, Some("alg" | "dfa" | "cfg" | "leaf")) {
        let stem = path
            .file_stem()
            .and_then(|s| s.to_str())
            .ok_or_else(|| anyhow!("bad file name {value}"))?
            .to_string();
        if !tb.entries().iter().any(|(n, _)| *n == stem) {
            tb.load_file(path)?;
        }
        return Ok(stem);
    }
    Ok(value.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structures_round_trip() {
        let ab = Alphabet::parse("a,b").unwrap();
        for text in ["ab", "ε", "n=4;c1=2", "n=3;c1=0;c2=1"] {
            assert_eq!(parse_structure(text, &ab).unwrap().to_string(), text);
        }
        assert!(parse_structure("ac", &ab).is_err());
        assert!(parse_structure("n=2;c1=2", &ab).is_err());
    }

    #[test]
    fn assignments_round_trip() {
        for text in ["x=1,X={1}", "-", "X={},y=0", "R={(0,1),(1,1)}"] {
            let a = parse_assignment(text, 2).unwrap();
            let back = parse_assignment(&a.to_string(), 2).unwrap();
            assert_eq!(a, back);
        }
        assert!(parse_assignment("x=3", 2).is_err());
    }
}
