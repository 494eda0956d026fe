//! Slicing criteria, the path-faithful and general dynamic slice checkers,
//! their definitional oracles, and searches over the quotient lattice.

mod check;
mod search;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::herbrand::{
    consequence_set, run_predicate_free, ConsequenceSet, HerbrandState, TermId, TermStore,
};
use crate::model::{check_linear, is_quotient, Letter, ModelError, Path, Schema};
use crate::paths::{require_path, PathError};
use crate::symbol::{Symbol, Var};

pub use check::{check_ds, check_pfds, check_pfds_definitional, compatible_maximal_paths};
pub use search::{
    default_budget, find_slices, SearchGoal, SearchReport, SliceMode, BUDGET_ENV, DEFAULT_BUDGET,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SliceError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error("label `{0}` does not occur in the schema")]
    LabelMissing(Symbol),
    #[error("label `{0}` does not occur in the quotient")]
    LabelNotInQuotient(Symbol),
    #[error("candidate is not a quotient of the criterion schema")]
    NotAQuotient,
    #[error("criterion path is not executable: {0} is forced both ways")]
    NotExecutable(String),
}

/// A dynamic slicing criterion `(ρl, V)` on a linear schema.
///
/// The criterion owns the term store that every check against it interns
/// into, together with the consequences of `ρ` and the final terms of `V`.
#[derive(Debug)]
pub struct SliceCriterion {
    schema: Schema,
    path: Path,
    label: Symbol,
    vars: BTreeSet<Var>,
    store: TermStore,
    consequences: ConsequenceSet,
    terms: BTreeMap<Var, TermId>,
}

impl SliceCriterion {
    /// `path` is `ρ`, with or without the trailing label letter.
    pub fn new(
        schema: Schema,
        path: Path,
        label: &str,
        vars: impl IntoIterator<Item = Var>,
    ) -> Result<Self, SliceError> {
        let report = check_linear(&schema);
        if !report.is_linear() {
            return Err(ModelError::NotLinear(report.repeated).into());
        }
        let label = Symbol::new(label);
        if !schema.contains_label(label.as_str()) {
            return Err(SliceError::LabelMissing(label));
        }
        let schema = schema.numbered();
        let mut path = path;
        if path.last().is_some_and(|l| l.is_label(label.as_str())) {
            path.pop();
        }
        require_path(&schema, &path.with(Letter::Label(label.clone())))?;
        let store = TermStore::new();
        let consequences = consequence_set(&store, &path)
            .map_err(|c| SliceError::NotExecutable(c.term.render(&store)))?;
        let vars: BTreeSet<Var> = vars.into_iter().collect();
        let state = run_predicate_free(&store, &path, HerbrandState::natural());
        let terms = vars
            .iter()
            .map(|v| (v.clone(), state.get(&store, v)))
            .collect();
        Ok(SliceCriterion {
            schema,
            path,
            label,
            vars,
            store,
            consequences,
            terms,
        })
    }

    /// End-slice convenience: appends `label <label>;` to the schema when it
    /// does not already contain the label.
    pub fn end_slice(
        schema: Schema,
        path: Path,
        label: &str,
        vars: impl IntoIterator<Item = Var>,
    ) -> Result<Self, SliceError> {
        let schema = if schema.contains_label(label) {
            schema
        } else {
            schema.then(Schema::label(label))
        };
        SliceCriterion::new(schema, path, label, vars)
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    /// The criterion path `ρ`, without the label letter.
    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn label(&self) -> &Symbol {
        &self.label
    }

    pub fn label_letter(&self) -> Letter {
        Letter::Label(self.label.clone())
    }

    pub fn vars(&self) -> &BTreeSet<Var> {
        &self.vars
    }

    pub fn store(&self) -> &TermStore {
        &self.store
    }

    pub fn consequences(&self) -> &ConsequenceSet {
        &self.consequences
    }

    /// Final terms of the criterion variables after `ρ`.
    pub fn terms(&self) -> &BTreeMap<Var, TermId> {
        &self.terms
    }

    /// Checks that `quotient` is a quotient of the criterion schema containing the label.
    pub fn admit(&self, quotient: &Schema) -> Result<(), SliceError> {
        if !quotient.contains_label(self.label.as_str()) {
            return Err(SliceError::LabelNotInQuotient(self.label.clone()));
        }
        if is_quotient(quotient, &self.schema).is_none() {
            return Err(SliceError::NotAQuotient);
        }
        Ok(())
    }

    /// First criterion variable whose term after `state` differs from its term after `ρ`.
    pub(crate) fn first_mismatch(&self, state: &HerbrandState) -> Option<Witness> {
        self.terms.iter().find_map(|(v, &expected)| {
            let found = state.get(&self.store, v);
            (found != expected).then(|| Witness::Mismatch {
                var: v.clone(),
                expected: self.store.render(expected),
                found: self.store.render(found),
            })
        })
    }
}

/// Why a candidate was rejected. Terms are rendered so witnesses stand alone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// A criterion variable ends with a different term.
    Mismatch {
        var: Var,
        expected: String,
        found: String,
    },
    /// A consequence of the projected path that is not a consequence of `ρ`;
    /// `position` is the 0-based letter index in the projected path.
    Consequence {
        consequence: String,
        position: usize,
    },
    /// A maximal compatible path through the quotient that refutes it.
    Path { path: Path, terminal: bool },
}

impl Witness {
    pub fn kind(&self) -> &'static str {
        match self {
            Witness::Mismatch { .. } => "mismatch",
            Witness::Consequence { .. } => "consequence",
            Witness::Path { .. } => "path",
        }
    }

    pub fn detail(&self) -> String {
        match self {
            Witness::Mismatch {
                var,
                expected,
                found,
            } => format!("{var}:{expected}!={found}"),
            Witness::Consequence { consequence, .. } => consequence.clone(),
            Witness::Path { path, .. } => path.to_string(),
        }
    }
}

/// Outcome of a slice check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceVerdict {
    pub accepted: bool,
    pub witness: Option<Witness>,
    /// For accepted general slices, the distinct prefixes `ρ′` (without the
    /// label letter) that the compatible paths were matched with.
    pub evidence: Vec<Path>,
}

impl SliceVerdict {
    pub(crate) fn accept(evidence: Vec<Path>) -> Self {
        SliceVerdict {
            accepted: true,
            witness: None,
            evidence,
        }
    }

    pub(crate) fn reject(witness: Witness) -> Self {
        SliceVerdict {
            accepted: false,
            witness: Some(witness),
            evidence: Vec::new(),
        }
    }

    /// `ACCEPT` or `REJECT kind=<kind> detail=<detail>`.
    pub fn machine_line(&self) -> String {
        match &self.witness {
            None => "ACCEPT".to_string(),
            Some(w) => format!("REJECT kind={} detail={}", w.kind(), w.detail()),
        }
    }

    /// The machine line followed by a readable witness dump.
    pub fn human_report(&self) -> String {
        let mut out = self.machine_line();
        out.push('\n');
        match &self.witness {
            None => {
                for p in &self.evidence {
                    let _ = writeln!(out, "  matched prefix: {p}");
                }
            }
            Some(Witness::Mismatch {
                var,
                expected,
                found,
            }) => {
                let _ = writeln!(out, "  variable {var}: criterion path gives {expected}");
                let _ = writeln!(out, "  variable {var}: quotient gives {found}");
            }
            Some(Witness::Consequence {
                consequence,
                position,
            }) => {
                let _ = writeln!(
                    out,
                    "  projected path forces {consequence} at letter {position}, which the criterion path does not"
                );
            }
            Some(Witness::Path { path, terminal }) => {
                let kind = if *terminal {
                    "terminal"
                } else {
                    "length-capped"
                };
                let _ = writeln!(out, "  {kind} compatible path without a matching prefix:");
                let _ = writeln!(out, "  {path}");
            }
        }
        out
    }
}
