//! Abstract syntax of structured schemas, linearity, quotients and the path alphabet.

mod letter;
mod quotient;
mod schema;
mod table;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::symbol::Symbol;

pub use letter::{Letter, Path};
pub use quotient::{
    ancestor_map, enumerate_quotients, is_quotient, retain_sites, QuotientLattice,
    MAX_LATTICE_SITES,
};
pub use schema::{Schema, SiteId};
pub use table::{alphabet, check_linear, LinearityReport, SymbolTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("schema is not linear; repeated: {}", join(.0))]
    NotLinear(BTreeSet<Symbol>),
    #[error("symbol `{name}` used with arity {found}, previously {expected}")]
    ArityConflict {
        name: Symbol,
        expected: usize,
        found: usize,
    },
    #[error("name `{name}` used both as {first} and as {second}")]
    NameClash {
        name: Symbol,
        first: &'static str,
        second: &'static str,
    },
    #[error("unknown site {0}")]
    UnknownSite(SiteId),
    #[error("quotient lattice has {sites} optional sites, limit is {limit}")]
    LatticeTooLarge { sites: usize, limit: usize },
}

fn join(set: &BTreeSet<Symbol>) -> String {
    set.iter()
        .map(Symbol::as_str)
        .collect::<Vec<_>>()
        .join(", ")
}
