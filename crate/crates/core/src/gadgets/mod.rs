//! 3-CNF formulas, the hardness gadget, and the worked-example corpus.

mod cnf;
mod corpus;
mod np_hard;

use thiserror::Error;

use crate::slicer::SliceError;

pub use cnf::{brute_force_sat, canonical_formulas, Cnf3, Literal, MAX_BRUTE_FORCE_VARS};
pub use corpus::{
    antichain_example, branch_example, delete_symbols, example_corpus, loop_example, np_hard_n1,
    Expectation, Fixture, Outcome, ANTICHAIN_PATH, ANTICHAIN_SCHEMA, BRANCH_SCHEMA, LOOP_NO_H,
    LOOP_PATH, LOOP_REDUCED, LOOP_SCHEMA,
};
pub use np_hard::{
    gen_3sat, literal_function, literal_predicate, round_trip, GadgetInstance, PathType,
    RoundTripReport, GADGET_LABEL, GADGET_VAR,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GadgetError {
    #[error("malformed formula: {0}")]
    Malformed(String),
    #[error("DIMACS line {line}: {message}")]
    Dimacs { line: usize, message: String },
    #[error("{vars} variables exceed the brute-force limit of {limit}")]
    TooManyVariables { vars: usize, limit: usize },
    #[error(transparent)]
    Slice(#[from] SliceError),
}
