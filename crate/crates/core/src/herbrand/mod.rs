//! Symbolic execution over the Herbrand domain.
//!
//! Functions build terms, predicates are uninterpreted, and execution always
//! starts from the natural state `e`. A finite path is realisable under some
//! Herbrand interpretation exactly when no predicate term along it is forced
//! both ways, which is what [`is_executable`] and [`are_compatible`] decide.

mod consequence;
mod state;
mod term;

pub use consequence::{
    consequence_set, consequences_of, Clash, Consequence, ConsequenceSet, PredTerm,
};
pub use state::{run_letters, run_schema, HerbrandState};
pub use term::{TermId, TermNode, TermStore};

use crate::model::{Path, Schema};
use crate::paths::{require_path, PathError};
use crate::symbol::Var;

/// State after running the assignments of `path` from `start`.
pub fn run_predicate_free(store: &TermStore, path: &Path, start: HerbrandState) -> HerbrandState {
    run_letters(store, path.iter(), start)
}

/// Term held by `var` after `path` runs from the natural state.
pub fn final_term(
    store: &TermStore,
    schema: &Schema,
    path: &Path,
    var: &Var,
) -> Result<TermId, PathError> {
    require_path(schema, path)?;
    Ok(run_predicate_free(store, path, HerbrandState::natural()).get(store, var))
}

/// Consequences of `path`, one per predicate letter, in path order.
pub fn consequences(
    store: &TermStore,
    schema: &Schema,
    path: &Path,
) -> Result<Vec<Consequence>, PathError> {
    require_path(schema, path)?;
    Ok(consequences_of(store, path))
}

/// Outcome of a feasibility check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    Consistent,
    Clash(Clash),
}

impl Feasibility {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Feasibility::Consistent)
    }
}

/// Whether `path` is a prefix of the path some interpretation drives `schema` along.
pub fn is_executable(
    store: &TermStore,
    schema: &Schema,
    path: &Path,
) -> Result<Feasibility, PathError> {
    require_path(schema, path)?;
    Ok(match consequence_set(store, path) {
        Ok(_) => Feasibility::Consistent,
        Err(c) => Feasibility::Clash(c),
    })
}

/// Whether one interpretation drives `schema` along `path` and `other_schema`
/// along `other_path`. Clash indices in the witness refer to `other_path`.
pub fn are_compatible(
    store: &TermStore,
    schema: &Schema,
    path: &Path,
    other_schema: &Schema,
    other_path: &Path,
) -> Result<Feasibility, PathError> {
    require_path(schema, path)?;
    require_path(other_schema, other_path)?;
    let mut set = match consequence_set(store, path) {
        Ok(set) => set,
        Err(c) => return Ok(Feasibility::Clash(c)),
    };
    for (i, c) in consequences_indexed(store, other_path) {
        if let Err(mut clash) = set.insert(c.term, c.branch, i) {
            clash.first = None;
            return Ok(Feasibility::Clash(clash));
        }
    }
    Ok(Feasibility::Consistent)
}

fn consequences_indexed(store: &TermStore, path: &Path) -> Vec<(usize, Consequence)> {
    let pred_positions = path
        .iter()
        .enumerate()
        .filter(|(_, l)| l.is_pred())
        .map(|(i, _)| i);
    pred_positions.zip(consequences_of(store, path)).collect()
}
