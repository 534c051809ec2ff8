//! Generalized quantifiers over string structures, groupoid word problems,
//! leaf automata and formula translations between logics.

pub mod algebra;
pub mod alphabet;
pub mod leafauto;
pub mod logic;
pub mod oracle;
pub mod syntax;
pub mod toolbox;
pub mod translate;
