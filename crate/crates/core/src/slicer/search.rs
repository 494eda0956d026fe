use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::model::{QuotientLattice, Schema, SiteId};
use crate::symbol::Symbol;

use super::check::{ds, pfds};
use super::{SliceCriterion, SliceError};

/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "SCHLICE_BUDGET";

/// Default limit on the number of deletable sites a search will enumerate.
pub const DEFAULT_BUDGET: usize = 24;

/// The site budget from the environment, or the default.
pub fn default_budget() -> usize {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SliceMode {
    /// Path-faithful dynamic slices.
    Pfds,
    /// General dynamic slices.
    Ds,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchGoal {
    /// Is there an accepted quotient other than the schema itself?
    ExistsNonTrivial,
    /// Every accepted quotient that has no accepted proper quotient.
    AllMinimal,
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub mode: SliceMode,
    pub goal: SearchGoal,
    /// The non-trivial witness, or the minimal antichain sorted by retained symbols.
    pub found: Vec<Schema>,
    /// Number of quotients checked.
    pub checked: usize,
    /// Number of deletable sites in the searched lattice.
    pub optional_sites: usize,
}

impl SearchReport {
    /// For existence searches: whether a non-trivial slice was found.
    pub fn exists(&self) -> bool {
        !self.found.is_empty()
    }

    /// Retained symbols of each found quotient, sorted.
    pub fn symbol_sets(&self) -> Vec<BTreeSet<Symbol>> {
        self.found.iter().map(Schema::head_symbols).collect()
    }
}

/// Searches the quotients of the criterion schema for slices.
///
/// Sites whose deletion can never give an accepted quotient are fixed: the
/// criterion label and every function symbol occurring in a final criterion
/// term, together with their enclosing statements. `budget` caps the number
/// of remaining deletable sites and defaults to [`default_budget`].
///
/// Existence checks quotients largest first and stops at the first accepted
/// one; in general mode a path-faithful pass runs first, since any
/// path-faithful slice is also a dynamic slice. Minimal search goes smallest
/// first, level by level, skipping every quotient that retains an already
/// accepted one; what is accepted is then minimal, and the accepted set is an
/// antichain.
pub fn find_slices(
    c: &SliceCriterion,
    mode: SliceMode,
    goal: SearchGoal,
    budget: Option<usize>,
) -> Result<SearchReport, SliceError> {
    let lattice = QuotientLattice::new(
        c.schema(),
        &mandatory_sites(c),
        budget.unwrap_or_else(default_budget),
    )?;
    let pfds_accepts = |mask: u64| pfds(c, &lattice.build(mask)).accepted;
    let ds_accepts = |mask: u64| ds(c, &lattice.build(mask)).accepted;
    // Path-faithful slices are dynamic slices, and the path-faithful check is
    // much cheaper, so general search tries it first.
    let accepts = |mask: u64| match mode {
        SliceMode::Pfds => pfds_accepts(mask),
        SliceMode::Ds => pfds_accepts(mask) || ds_accepts(mask),
    };
    let optional_sites = lattice.optional().len();
    let full = lattice.full_mask();
    let (masks, checked) = match goal {
        SearchGoal::ExistsNonTrivial => {
            let candidates: Vec<u64> = lattice
                .masks_descending()
                .into_iter()
                .filter(|&m| m != full)
                .collect();
            let first = |check: &(dyn Fn(u64) -> bool + Sync)| {
                let hit = candidates.par_iter().copied().find_first(|&m| check(m));
                let checked = match hit {
                    Some(m) => {
                        candidates
                            .iter()
                            .position(|&x| x == m)
                            .expect("hit is a candidate")
                            + 1
                    }
                    None => candidates.len(),
                };
                (hit, checked)
            };
            let (mut hit, mut checked) = first(&pfds_accepts);
            if hit.is_none() && mode == SliceMode::Ds {
                let (h, n) = first(&ds_accepts);
                hit = h;
                checked += n;
            }
            (hit.into_iter().collect::<Vec<_>>(), checked)
        }
        SearchGoal::AllMinimal => {
            let all = lattice.masks_ascending();
            let mut minimal: Vec<u64> = Vec::new();
            let mut checked = 0;
            for level in all.chunk_by(|a, b| a.count_ones() == b.count_ones()) {
                let todo: Vec<u64> = level
                    .iter()
                    .copied()
                    .filter(|&m| !minimal.iter().any(|&a| m & a == a))
                    .collect();
                checked += todo.len();
                let accepted: Vec<u64> = todo.into_par_iter().filter(|&m| accepts(m)).collect();
                minimal.extend(accepted);
            }
            (minimal, checked)
        }
    };
    let mut found: Vec<Schema> = masks.into_iter().map(|m| lattice.build(m)).collect();
    found.sort_by_cached_key(Schema::head_symbols);
    Ok(SearchReport {
        mode,
        goal,
        found,
        checked,
        optional_sites,
    })
}

fn mandatory_sites(c: &SliceCriterion) -> BTreeSet<SiteId> {
    let mut needed: BTreeSet<Symbol> = c
        .terms()
        .values()
        .flat_map(|&t| c.store().functions(t))
        .collect();
    needed.insert(c.label().clone());
    c.schema()
        .statements()
        .into_iter()
        .filter(|s| matches!(s, Schema::Assign { .. } | Schema::Label { .. }))
        .filter(|s| s.head().is_some_and(|h| needed.contains(h)))
        .filter_map(Schema::site)
        .collect()
}
