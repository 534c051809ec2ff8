//! `lindstrom`: evaluate, enumerate, translate and cross-check formulas with
//! generalized quantifiers.
//!
//! Exit status 0 on success or agreement, 1 on a counterexample or
//! disagreement, 2 on usage, format or evaluation errors.

mod commands;
mod inputs;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lindstrom_core::logic::DEFAULT_INSTANCE_CAP;
use lindstrom_core::translate::DEFAULT_EXPONENT_CAP;

#[derive(Parser, Debug)]
#[command(
    name = "lindstrom",
    version,
    about = "Generalized quantifiers over string structures"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Directory or file of languages, algebras and automata to load (repeatable).
    #[arg(long, global = true)]
    toolbox: Vec<PathBuf>,
    /// Largest number of quantifier instances a second-order node may enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_INSTANCE_CAP)]
    instance_cap: u64,
    /// Largest leaf string materialized or leaves traversed.
    #[arg(long, global = true, default_value_t = 1 << 16)]
    leaf_cap: u64,
    /// Seed for random formula suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug, Clone)]
struct FormulaArg {
    /// Formula in s-expression syntax.
    #[arg(long)]
    formula: Option<String>,
    /// File holding one formula.
    #[arg(long)]
    formula_file: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct TranslateOpts {
    /// Padding exponent for `pad`.
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Padding letter for `pad`.
    #[arg(long, default_value_t = '#')]
    pad: char,
    /// Comma-separated constant names for constant signatures.
    #[arg(long)]
    constants: Option<String>,
    /// Exponent cap for the exponential encoding.
    #[arg(long, default_value_t = DEFAULT_EXPONENT_CAP)]
    exponent_cap: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a formula on one structure; prints true or false.
    Eval {
        #[command(flatten)]
        formula: FormulaArg,
        #[arg(long, default_value = "a,b")]
        alphabet: String,
        /// A word, `ε`, or `n=N;c1=V;..` for constant structures.
        #[arg(long)]
        structure: String,
        /// Values of free variables, as `x=1,X={0,2}`.
        #[arg(long)]
        assign: Option<String>,
    },
    /// List the words up to length max-n satisfying a sentence.
    Enumerate {
        #[command(flatten)]
        formula: FormulaArg,
        #[arg(long, default_value = "a,b")]
        alphabet: String,
        #[arg(long, default_value_t = 4)]
        max_n: usize,
    },
    /// Translate a formula and check the result on the translation's range.
    Translate {
        /// Translation name; `list` prints the available ones.
        translation: String,
        #[command(flatten)]
        formula: FormulaArg,
        #[arg(long, default_value = "a,b")]
        alphabet: String,
        #[arg(long)]
        max_n: Option<usize>,
        #[command(flatten)]
        opts: TranslateOpts,
    },
    /// Print the verdict of an equivalence check.
    Equiv {
        #[command(flatten)]
        formula: FormulaArg,
        /// Check the formula against its image under this translation.
        #[arg(long, conflicts_with = "against")]
        translation: Option<String>,
        /// Check the formula against this formula on the same structures.
        #[arg(long)]
        against: Option<String>,
        #[arg(long, default_value = "a,b")]
        alphabet: String,
        #[arg(long)]
        max_n: Option<usize>,
        #[command(flatten)]
        opts: TranslateOpts,
    },
    /// Decide membership of an input in Leaf^FA(L).
    Leaffa {
        /// Leaf automaton name or `.leaf` file.
        #[arg(long)]
        automaton: String,
        /// Leaf language.
        #[arg(long)]
        language: String,
        /// Input word; `ε` for the empty word.
        #[arg(long, required_unless_present = "sentence")]
        input: Option<String>,
        /// Also print the leaf string.
        #[arg(long)]
        show_leaves: bool,
        /// Print the equivalent sentence instead of deciding an input.
        #[arg(long)]
        sentence: bool,
    },
    /// Load an algebra, DFA, grammar or leaf automaton and report its invariants.
    AlgebraCheck {
        /// Object name or file.
        object: String,
        /// Word to evaluate; element names separated by spaces for algebras.
        #[arg(long)]
        word: Option<String>,
    },
    /// Compare a fast path with its brute-force oracle.
    Oracle {
        /// Oracle name; `list` prints the available ones.
        name: String,
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long)]
        grammar: Option<String>,
        #[arg(long)]
        dfa: Option<String>,
        #[arg(long)]
        automaton: Option<String>,
        #[command(flatten)]
        formula: FormulaArg,
        /// Check this many seeded random Lindström nodes.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value = "a,b")]
        alphabet: String,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        #[arg(long, default_value_t = 4)]
        max_n: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.status)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
