use std::collections::BTreeMap;

use super::term::{TermId, TermStore};
use crate::model::{Letter, Schema};
use crate::symbol::{Symbol, Var};

/// A Herbrand state. Variables missing from the map hold themselves, so the
/// empty state is the natural state `e`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HerbrandState {
    bindings: BTreeMap<Var, TermId>,
}

impl HerbrandState {
    /// The natural state: every variable maps to its own leaf.
    pub fn natural() -> Self {
        Self::default()
    }

    pub fn get(&self, store: &TermStore, var: &Var) -> TermId {
        match self.bindings.get(var) {
            Some(&t) => t,
            None => store.var(var),
        }
    }

    pub fn set(&mut self, var: Var, term: TermId) {
        self.bindings.insert(var, term);
    }

    pub fn eval_args(&self, store: &TermStore, args: &[Var]) -> Vec<TermId> {
        args.iter().map(|a| self.get(store, a)).collect()
    }

    /// Executes `y := f(x...)` in place.
    pub fn assign(&mut self, store: &TermStore, target: &Var, func: &Symbol, args: &[Var]) {
        let vals = self.eval_args(store, args);
        let t = store.app(func, &vals);
        self.set(target.clone(), t);
    }

    /// Applies one path letter; predicate and label letters leave the state alone.
    pub fn apply(&mut self, store: &TermStore, letter: &Letter) {
        if let Letter::Assign { target, func, args } = letter {
            self.assign(store, target, func, args);
        }
    }

    /// Explicit bindings, i.e. the variables that differ from the natural state
    /// or were assigned at least once.
    pub fn bindings(&self) -> &BTreeMap<Var, TermId> {
        &self.bindings
    }

    /// Canonical comparison that treats an explicit `v ↦ v` like an absent binding.
    pub fn same_as(&self, other: &HerbrandState, store: &TermStore) -> bool {
        let keys = self.bindings.keys().chain(other.bindings.keys());
        keys.into_iter()
            .all(|k| self.get(store, k) == other.get(store, k))
    }
}

/// Runs the predicate-free schema extracted from a word: assignments execute,
/// predicate letters and labels are skipped.
pub fn run_letters<'a>(
    store: &TermStore,
    letters: impl IntoIterator<Item = &'a Letter>,
    start: HerbrandState,
) -> HerbrandState {
    let mut state = start;
    for l in letters {
        state.apply(store, l);
    }
    state
}

/// Runs a predicate-free schema. Returns `None` if the schema has an `if` or `while`.
pub fn run_schema(
    store: &TermStore,
    schema: &Schema,
    start: HerbrandState,
) -> Option<HerbrandState> {
    let mut state = start;
    for item in schema.items() {
        match item {
            Schema::Assign {
                target, func, args, ..
            } => state.assign(store, target, func, args),
            Schema::Label { .. } => {}
            _ => return None,
        }
    }
    Some(state)
}
