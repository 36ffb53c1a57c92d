//! Extension existence for propositional default theories via strong
//! backdoors into tractable CNF classes (Horn, Krom, monotone, ID).
//!
//! The pipeline is [`detect::detect_backdoor`] followed by
//! [`eval::evaluate_backdoor`]; [`brute`] enumerates extensions directly
//! and serves as the reference answer.

pub mod brute;
pub mod check;
pub mod cli;
pub mod cnf;
pub mod detect;
pub mod entail;
pub mod eval;
pub mod format;
pub mod gen;
pub mod theory;

pub use cnf::{Choice, Clause, ExtLit, Formula, FormulaClass, Lit, ThreefoldAssignment, Var};
pub use theory::{DefaultRule, DefaultTheory, ExtensionCandidate, ReductTheory};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("theory has {rules} rules, above the enumeration limit of {limit}")]
    TooManyRules { rules: usize, limit: usize },
    #[error("{what} is not a {class} formula set")]
    NotInClass { class: FormulaClass, what: String },
    #[error("the given set is not a strong {class} backdoor")]
    NotABackdoor { class: FormulaClass },
    #[error("no incidence structure for class {0}")]
    UnsupportedClass(FormulaClass),
    #[error("theory contains tautological clauses")]
    TautologicalClause,
    #[error("no backdoor of size at most {k}, and {rules} rules exceed the enumeration limit of {limit}")]
    OverBudget { k: usize, rules: usize, limit: usize },
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
}
