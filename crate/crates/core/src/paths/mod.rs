//! Paths through a schema: validity, continuation sets, enumeration,
//! projection onto quotients and l-reductions.

mod cursor;
mod reduce;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::model::{is_quotient, Letter, Path, Schema};
use crate::symbol::Symbol;

pub use cursor::{
    enumerate_paths, validate_path, EnumeratedPath, PathCursor, PathEnumerator, PathStatus,
};
pub use reduce::{is_l_reducible, simple_l_reductions, Reduction, ReductionKind};

pub(crate) use reduce::Aligner;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PathError {
    #[error("not a path: letter {position} (`{letter}`) cannot follow its prefix")]
    Invalid { position: usize, letter: String },
    #[error("schema is not a quotient of the original")]
    NotAQuotient,
}

/// Validates `path` against `schema`, turning an invalid word into an error.
pub fn require_path(schema: &Schema, path: &[Letter]) -> Result<PathStatus, PathError> {
    match validate_path(schema, path) {
        PathStatus::Invalid { position } => Err(PathError::Invalid {
            position,
            letter: path[position - 1].to_string(),
        }),
        ok => Ok(ok),
    }
}

/// The exact set of letters that extend the path prefix `prefix`.
pub fn next_letters(schema: &Schema, prefix: &Path) -> Result<Vec<Letter>, PathError> {
    require_path(schema, prefix)?;
    let mut cursor = PathCursor::new(schema);
    for l in prefix {
        cursor.advance(l);
    }
    Ok(cursor.next_letters())
}

/// Projection of a path of `schema` onto its quotient `quotient`.
pub fn project(schema: &Schema, quotient: &Schema, path: &Path) -> Result<Path, PathError> {
    if is_quotient(quotient, schema).is_none() {
        return Err(PathError::NotAQuotient);
    }
    require_path(schema, path)?;
    Ok(project_onto(quotient, path))
}

/// Keeps the letters whose symbol occurs in `quotient`, without checks.
pub fn project_onto(quotient: &Schema, path: &[Letter]) -> Path {
    let keep: BTreeSet<Symbol> = quotient.head_symbols();
    path.iter()
        .filter(|l| keep.contains(l.name()))
        .cloned()
        .collect()
}
