use std::fmt;

use super::formula::{Formula, InstanceOrder};
use super::LogicError;

/// Syntactic classes of formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fragment {
    /// First-order logic, optionally with `+`, `×` and `bit`.
    Fo { arith: bool },
    /// Boolean combinations of order, equality and letter atoms.
    QfreeNoArith,
    /// One outer first-order Lindström node over first-order arguments.
    QFo { arith: bool },
    /// First-order logic with nested first-order Lindström quantifiers.
    FoQ { arith: bool },
    /// One outer second-order Lindström node of the given ordering over
    /// first-order arguments; its relations may have any arity.
    SoQFo { order: InstanceOrder, arith: bool },
    /// Monadic second-order logic, with nested monadic second-order
    /// Lindström quantifiers of the given ordering when present.
    Som { order: Option<InstanceOrder>, arith: bool },
}

pub const FRAGMENT_NAMES: [&str; 17] = [
    "FO",
    "FO(+,x)",
    "qfree-no-arith",
    "Q-FO",
    "Q-FO(+,x)",
    "FO(Q)",
    "FO(Q,+,x)",
    "Q1-FO",
    "Q1-FO(+,x)",
    "Qstar-FO",
    "Qstar-FO(+,x)",
    "SOM",
    "SOM(+,x)",
    "SOM(Q1)",
    "SOM(Q1,+,x)",
    "SOM(Qstar)",
    "SOM(Qstar,+,x)",
];

impl Fragment {
    pub fn parse(name: &str) -> Result<Fragment, LogicError> {
        let norm: String = name
            .replace('×', "x")
            .replace('¹', "1")
            .replace('*', "star")
            .replace("Q_L", "Q")
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect();
        use InstanceOrder::*;
        Ok(match norm.as_str() {
            "FO" => Fragment::Fo { arith: false },
            "FO(+,x)" => Fragment::Fo { arith: true },
            "qfree-no-arith" => Fragment::QfreeNoArith,
            "Q-FO" => Fragment::QFo { arith: false },
            "Q-FO(+,x)" => Fragment::QFo { arith: true },
            "FO(Q)" => Fragment::FoQ { arith: false },
            "FO(Q,+,x)" => Fragment::FoQ { arith: true },
            "Q1-FO" => Fragment::SoQFo {
                order: Interleaved,
                arith: false,
            },
            "Q1-FO(+,x)" => Fragment::SoQFo {
                order: Interleaved,
                arith: true,
            },
            "Qstar-FO" => Fragment::SoQFo {
                order: Concatenated,
                arith: false,
            },
            "Qstar-FO(+,x)" => Fragment::SoQFo {
                order: Concatenated,
                arith: true,
            },
            "SOM" => Fragment::Som {
                order: None,
                arith: false,
            },
            "SOM(+,x)" => Fragment::Som {
                order: None,
                arith: true,
            },
            "SOM(Q1)" => Fragment::Som {
                order: Some(Interleaved),
                arith: false,
            },
            "SOM(Q1,+,x)" => Fragment::Som {
                order: Some(Interleaved),
                arith: true,
            },
            "SOM(Qstar)" => Fragment::Som {
                order: Some(Concatenated),
                arith: false,
            },
            "SOM(Qstar,+,x)" => Fragment::Som {
                order: Some(Concatenated),
                arith: true,
            },
            _ => return Err(LogicError::UnknownFragment(name.to_string())),
        })
    }
}

/// Outcome of a fragment check; `diagnostic` names the first offending node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FragmentVerdict {
    pub ok: bool,
    pub diagnostic: Option<String>,
}

impl fmt::Display for FragmentVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.diagnostic {
            None => write!(f, "{}", self.ok),
            Some(d) => write!(f, "{}: {d}", self.ok),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Allow {
    fo_quant: bool,
    so_quant: bool,
    lind_fo: bool,
    lind_so: Option<InstanceOrder>,
    arith: bool,
    set_arith: bool,
}

fn describe(f: &Formula) -> &'static str {
    match f {
        Formula::Plus(..) => "arithmetic atom plus",
        Formula::Times(..) => "arithmetic atom times",
        Formula::Bit(..) => "arithmetic atom bit",
        Formula::SetTimes(..) => "set arithmetic atom",
        Formula::Exists(..) | Formula::Forall(..) => "first-order quantifier",
        Formula::ExistsSo { .. } => "second-order quantifier",
        Formula::Lind { .. } => "first-order Lindström quantifier",
        Formula::LindSo {
            order: InstanceOrder::Interleaved,
            ..
        } => "Q1 quantifier",
        Formula::LindSo { .. } => "Qstar quantifier",
        _ => "node",
    }
}

fn check_body(f: &Formula, allow: Allow) -> Result<(), String> {
    let ok = match f {
        Formula::Plus(..) | Formula::Times(..) | Formula::Bit(..) => allow.arith,
        Formula::SetTimes(..) => allow.set_arith,
        Formula::Exists(..) | Formula::Forall(..) => allow.fo_quant,
        Formula::ExistsSo { arity, .. } => {
            if allow.so_quant && *arity != 1 {
                return Err(format!("second-order quantifier of arity {arity} is not monadic"));
            }
            allow.so_quant
        }
        Formula::Lind { .. } => allow.lind_fo,
        Formula::LindSo { order, arity, .. } => {
            if allow.lind_so == Some(*order) && *arity != 1 {
                return Err(format!("{} binds relations of arity {arity}", describe(f)));
            }
            allow.lind_so == Some(*order)
        }
        _ => true,
    };
    if !ok {
        return Err(format!("{} not allowed", describe(f)));
    }
    for c in f.children() {
        check_body(c, allow)?;
    }
    Ok(())
}

const FO_ONLY: Allow = Allow {
    fo_quant: true,
    so_quant: false,
    lind_fo: false,
    lind_so: None,
    arith: false,
    set_arith: false,
};

/// Checks a formula against a fragment by name (see [`FRAGMENT_NAMES`]).
pub fn fragment_check(f: &Formula, name: &str) -> Result<FragmentVerdict, LogicError> {
    let fragment = Fragment::parse(name)?;
    let result = check_fragment(f, fragment);
    Ok(FragmentVerdict {
        ok: result.is_ok(),
        diagnostic: result.err(),
    })
}

pub(crate) fn check_fragment(f: &Formula, fragment: Fragment) -> Result<(), String> {
    match fragment {
        Fragment::Fo { arith } => check_body(f, Allow { arith, ..FO_ONLY }),
        Fragment::QfreeNoArith => check_body(
            f,
            Allow {
                fo_quant: false,
                ..FO_ONLY
            },
        ),
        Fragment::FoQ { arith } => check_body(
            f,
            Allow {
                arith,
                lind_fo: true,
                ..FO_ONLY
            },
        ),
        Fragment::QFo { arith } => match f {
            Formula::Lind { args, .. } => args.iter().try_for_each(|a| check_body(a, Allow { arith, ..FO_ONLY })),
            other => Err(format!(
                "expected an outermost first-order Lindström quantifier, found {}",
                describe(other)
            )),
        },
        Fragment::SoQFo { order, arith } => match f {
            Formula::LindSo { order: o, args, .. } if *o == order => {
                args.iter().try_for_each(|a| check_body(a, Allow { arith, ..FO_ONLY }))
            }
            other => Err(format!(
                "expected an outermost {} quantifier, found {}",
                order.keyword(),
                describe(other)
            )),
        },
        Fragment::Som { order, arith } => check_body(
            f,
            Allow {
                fo_quant: true,
                so_quant: true,
                lind_fo: false,
                lind_so: order,
                arith,
                set_arith: true,
            },
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::formula::*;

    fn x() -> Term {
        Term::var("x")
    }

    fn q1(args: Vec<Formula>) -> Formula {
        Formula::LindSo {
            lang: "L".into(),
            order: InstanceOrder::Interleaved,
            arity: 1,
            vars: vec!["X".into()],
            args,
        }
    }

    #[test]
    fn examples() {
        let f = q1(vec![exists("x", member("X", vec![x()]))]);
        assert!(fragment_check(&f, "Q1-FO").unwrap().ok);
        assert!(fragment_check(&f, "Q¹-FO").unwrap().ok);
        let g = exists_so("Y", 1, q1(vec![member("Y", vec![Term::Min])]));
        let v = fragment_check(&g, "Q1-FO").unwrap();
        assert!(!v.ok);
        assert!(v.diagnostic.unwrap().contains("second-order quantifier"));
        let h = and([lt(x(), Term::var("y")), plus(x(), Term::var("y"), Term::var("z"))]);
        assert!(!fragment_check(&h, "qfree-no-arith").unwrap().ok);
        assert!(fragment_check(&h, "FO(+,x)").unwrap().ok);
        assert!(fragment_check(&h, "FO(+,×)").unwrap().ok);
    }

    #[test]
    fn som_nesting() {
        let f = exists_so("Y", 1, q1(vec![q1(vec![member("Y", vec![Term::Min])])]));
        assert!(fragment_check(&f, "SOM(Q1)").unwrap().ok);
        assert!(!fragment_check(&f, "SOM(Qstar)").unwrap().ok);
        assert!(!fragment_check(&f, "SOM").unwrap().ok);
    }

    #[test]
    fn unknown_fragment() {
        assert_eq!(
            fragment_check(&Formula::True, "HO"),
            Err(LogicError::UnknownFragment("HO".into()))
        );
    }

    #[test]
    fn all_names_parse() {
        for name in FRAGMENT_NAMES {
            Fragment::parse(name).unwrap();
        }
    }
}
