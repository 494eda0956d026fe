use std::collections::HashMap;

use super::state::HerbrandState;
use super::term::{TermId, TermStore};
use crate::model::Letter;
use crate::symbol::Symbol;

/// A predicate symbol applied to a vector of terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PredTerm {
    pub pred: Symbol,
    pub args: Box<[TermId]>,
}

impl PredTerm {
    pub fn render(&self, store: &TermStore) -> String {
        format!("{}({})", self.pred, store.render_args(&self.args))
    }
}

/// A branch decision `p(t...) = Z` forced along a path.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Consequence {
    pub term: PredTerm,
    pub branch: bool,
}

impl Consequence {
    /// `p(t1,...,tk)=T` or `=F`.
    pub fn render(&self, store: &TermStore) -> String {
        format!(
            "{}={}",
            self.term.render(store),
            if self.branch { "T" } else { "F" }
        )
    }
}

/// A predicate term forced both ways.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clash {
    pub term: PredTerm,
    /// 0-based letter index of the earlier occurrence, when known.
    pub first: Option<usize>,
    /// 0-based letter index of the contradicting occurrence.
    pub second: usize,
}

/// A set of consequences keyed by predicate term.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConsequenceSet {
    map: HashMap<PredTerm, (bool, usize)>,
}

impl ConsequenceSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn forced(&self, term: &PredTerm) -> Option<bool> {
        self.map.get(term).map(|&(b, _)| b)
    }

    /// Records `term = branch` seen at letter `index`. Returns the clash if the
    /// term is already forced the other way.
    pub fn insert(&mut self, term: PredTerm, branch: bool, index: usize) -> Result<(), Clash> {
        match self.map.get(&term) {
            Some(&(b, first)) if b != branch => Err(Clash {
                term,
                first: Some(first),
                second: index,
            }),
            Some(_) => Ok(()),
            None => {
                self.map.insert(term, (branch, index));
                Ok(())
            }
        }
    }

    pub fn contains(&self, c: &Consequence) -> bool {
        self.forced(&c.term) == Some(c.branch)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PredTerm, bool)> {
        self.map.iter().map(|(k, &(b, _))| (k, b))
    }
}

/// One consequence per predicate letter of `letters`, in order, each
/// evaluated in the state reached by the preceding assignments from `e`.
pub fn consequences_of(store: &TermStore, letters: &[Letter]) -> Vec<Consequence> {
    let mut state = HerbrandState::natural();
    let mut out = Vec::new();
    for l in letters {
        match l {
            Letter::Pred { pred, args, branch } => out.push(Consequence {
                term: PredTerm {
                    pred: pred.clone(),
                    args: state.eval_args(store, args).into(),
                },
                branch: *branch,
            }),
            other => state.apply(store, other),
        }
    }
    out
}

/// Builds the consequence set of a word, failing on the first clash.
pub fn consequence_set(store: &TermStore, letters: &[Letter]) -> Result<ConsequenceSet, Clash> {
    let mut set = ConsequenceSet::new();
    let mut state = HerbrandState::natural();
    for (i, l) in letters.iter().enumerate() {
        match l {
            Letter::Pred { pred, args, branch } => {
                let term = PredTerm {
                    pred: pred.clone(),
                    args: state.eval_args(store, args).into(),
                };
                set.insert(term, *branch, i)?;
            }
            other => state.apply(store, other),
        }
    }
    Ok(set)
}
