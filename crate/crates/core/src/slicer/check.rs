use std::collections::HashMap;

use crate::herbrand::{consequences_of, run_predicate_free, HerbrandState, PredTerm};
use crate::model::{Letter, Path, Schema};
use crate::paths::{project_onto, Aligner, PathCursor};

use super::{SliceCriterion, SliceError, SliceVerdict, Witness};

/// Polynomial path-faithful check: the projected path must give every
/// criterion variable its original term, and each of its consequences must
/// already be a consequence of `ρ`.
pub fn check_pfds(c: &SliceCriterion, quotient: &Schema) -> Result<SliceVerdict, SliceError> {
    c.admit(quotient)?;
    Ok(pfds(c, quotient))
}

pub(crate) fn pfds(c: &SliceCriterion, quotient: &Schema) -> SliceVerdict {
    let proj = project_onto(quotient, c.path());
    let state = run_predicate_free(c.store(), &proj, HerbrandState::natural());
    if let Some(w) = c.first_mismatch(&state) {
        return SliceVerdict::reject(w);
    }
    let positions = proj
        .iter()
        .enumerate()
        .filter(|(_, l)| l.is_pred())
        .map(|(i, _)| i);
    for (position, cons) in positions.zip(consequences_of(c.store(), &proj)) {
        if !c.consequences().contains(&cons) {
            return SliceVerdict::reject(Witness::Consequence {
                consequence: cons.render(c.store()),
                position,
            });
        }
    }
    SliceVerdict::accept(Vec::new())
}

/// Path-faithful check straight from the definition: matching final terms,
/// and every maximal path through the quotient compatible with `ρ` starts
/// with the projected path. `cap` bounds the explored path length and is
/// raised to `|proj(ρ)l|` if smaller.
pub fn check_pfds_definitional(
    c: &SliceCriterion,
    quotient: &Schema,
    cap: usize,
) -> Result<SliceVerdict, SliceError> {
    c.admit(quotient)?;
    Ok(pfds_definitional(c, quotient, cap))
}

pub(crate) fn pfds_definitional(c: &SliceCriterion, quotient: &Schema, cap: usize) -> SliceVerdict {
    let proj = project_onto(quotient, c.path());
    let state = run_predicate_free(c.store(), &proj, HerbrandState::natural());
    if let Some(w) = c.first_mismatch(&state) {
        return SliceVerdict::reject(w);
    }
    if proj.is_empty() {
        return SliceVerdict::accept(Vec::new());
    }
    let cap = cap.max(proj.len() + 1);
    let mut walk = Walk::new(c, quotient, cap);
    walk.run(
        (),
        &mut |_, tau, _| {
            let k = tau.len() - 1;
            if tau[k] != proj[k] {
                Flow::Stop
            } else if tau.len() == proj.len() {
                Flow::Prune
            } else {
                Flow::Continue
            }
        },
        &mut |_, _, _| Flow::Stop,
    );
    match walk.stopped_at.take() {
        None => SliceVerdict::accept(Vec::new()),
        Some(prefix) => SliceVerdict::reject(walk.extend_maximal(&prefix)),
    }
}

/// Every maximal path through `quotient` compatible with `ρ`, cut at `cap`
/// letters, depth first with true branches first. The flag marks terminal paths.
pub fn compatible_maximal_paths(
    quotient: &Schema,
    c: &SliceCriterion,
    cap: usize,
) -> std::vec::IntoIter<(Path, bool)> {
    let mut out = Vec::new();
    Walk::new(c, quotient, cap).run(
        (),
        &mut |_, _, _| Flow::Continue,
        &mut |_, tau, terminal| {
            out.push((Path::from(tau.to_vec()), terminal));
            Flow::Continue
        },
    );
    out.into_iter()
}

/// General dynamic slice check. Every compatible path through the quotient,
/// explored up to `|proj(ρ)l|` letters, must have a prefix `ρ′l` such that
/// `proj(ρ)` is l-reducible to `ρ′` and the criterion variables end with the
/// same terms after `ρ′` as after `ρ`.
///
/// Each explored path carries its alignment against `proj(ρ)l`. A path that
/// stops aligning has no such prefix in any extension and refutes the slice;
/// a path whose alignment completes at a label letter is settled there.
pub fn check_ds(c: &SliceCriterion, quotient: &Schema) -> Result<SliceVerdict, SliceError> {
    c.admit(quotient)?;
    Ok(ds(c, quotient))
}

pub(crate) fn ds(c: &SliceCriterion, quotient: &Schema) -> SliceVerdict {
    let target = project_onto(quotient, c.path()).with(c.label_letter());
    let aligner = Aligner::new(quotient, &target, Some(c.label().as_str()))
        .expect("projection of a path is a path through the quotient");
    let end = target.len();
    let mut evidence: Vec<Path> = Vec::new();
    let mut mismatch: Option<Witness> = None;
    let mut walk = Walk::new(c, quotient, end);
    walk.run(
        0usize,
        &mut |i, tau, state| {
            let letter = tau.last().expect("called after a letter");
            let Some((next, _)) = aligner.step(*i, letter) else {
                return Flow::Stop;
            };
            *i = next;
            if next == end && letter.is_label(c.label().as_str()) {
                if let Some(w) = c.first_mismatch(state) {
                    mismatch = Some(w);
                    return Flow::Stop;
                }
                let rho_prime: Path = tau[..tau.len() - 1].iter().cloned().collect();
                if !evidence.contains(&rho_prime) {
                    evidence.push(rho_prime);
                }
                return Flow::Prune;
            }
            Flow::Continue
        },
        &mut |_, _, _| Flow::Stop,
    );
    match (mismatch, walk.stopped_at.take()) {
        (Some(w), _) => SliceVerdict::reject(w),
        (None, Some(prefix)) => SliceVerdict::reject(walk.extend_maximal(&prefix)),
        (None, None) => SliceVerdict::accept(evidence),
    }
}

pub(crate) enum Flow {
    Continue,
    /// The current path is settled; no extension needs exploring.
    Prune,
    /// Abandon the whole exploration.
    Stop,
}

/// Depth-first exploration of the paths through a quotient that are
/// compatible with the criterion path. At a predicate whose term is already
/// forced, by `ρ` or by the path so far, only the forced branch is taken;
/// otherwise both branches are explored, true first.
struct Walk<'a, 'q> {
    c: &'a SliceCriterion,
    quotient: &'q Schema,
    cap: usize,
    tau: Vec<Letter>,
    /// Consequences of the current path that `ρ` leaves open.
    extra: HashMap<PredTerm, bool>,
    /// The path at which a callback stopped the exploration.
    stopped_at: Option<Vec<Letter>>,
}

type OnLetter<'f, W> = dyn FnMut(&mut W, &[Letter], &HerbrandState) -> Flow + 'f;
type OnLeaf<'f, W> = dyn FnMut(&W, &[Letter], bool) -> Flow + 'f;

impl<'a, 'q> Walk<'a, 'q> {
    fn new(c: &'a SliceCriterion, quotient: &'q Schema, cap: usize) -> Self {
        Walk {
            c,
            quotient,
            cap,
            tau: Vec::new(),
            extra: HashMap::new(),
            stopped_at: None,
        }
    }

    fn stops(&mut self, flow: Flow) -> bool {
        let stop = matches!(flow, Flow::Stop);
        if stop && self.stopped_at.is_none() {
            self.stopped_at = Some(self.tau.clone());
        }
        stop
    }

    fn forced(&self, term: &PredTerm) -> Option<bool> {
        self.c
            .consequences()
            .forced(term)
            .or_else(|| self.extra.get(term).copied())
    }

    fn pred_term(&self, stmt: &Schema, state: &HerbrandState) -> Option<PredTerm> {
        match stmt {
            Schema::If { pred, args, .. } | Schema::While { pred, args, .. } => Some(PredTerm {
                pred: pred.clone(),
                args: state.eval_args(self.c.store(), args).into(),
            }),
            _ => None,
        }
    }

    fn run<W: Clone>(
        &mut self,
        init: W,
        on_letter: &mut OnLetter<'_, W>,
        on_leaf: &mut OnLeaf<'_, W>,
    ) {
        let cursor = PathCursor::new(self.quotient);
        self.go(cursor, HerbrandState::natural(), init, on_letter, on_leaf);
    }

    /// Returns true when the exploration was stopped.
    fn go<W: Clone>(
        &mut self,
        mut cursor: PathCursor<'q>,
        mut state: HerbrandState,
        mut w: W,
        on_letter: &mut OnLetter<'_, W>,
        on_leaf: &mut OnLeaf<'_, W>,
    ) -> bool {
        let base = self.tau.len();
        let stopped = loop {
            if cursor.is_terminal() || self.tau.len() >= self.cap {
                break self.stops(on_leaf(&w, &self.tau, cursor.is_terminal()));
            }
            let stmt = cursor.next_statement().expect("non-terminal cursor");
            let branch = match self.pred_term(stmt, &state) {
                None => true,
                Some(term) => match self.forced(&term) {
                    Some(b) => b,
                    None => break self.fork(term, &cursor, &state, &w, on_letter, on_leaf),
                },
            };
            let letter = cursor.step(branch).expect("non-terminal cursor");
            state.apply(self.c.store(), &letter);
            self.tau.push(letter);
            match on_letter(&mut w, &self.tau, &state) {
                Flow::Continue => {}
                flow => break self.stops(flow),
            }
        };
        self.tau.truncate(base);
        stopped
    }

    fn fork<W: Clone>(
        &mut self,
        term: PredTerm,
        cursor: &PathCursor<'q>,
        state: &HerbrandState,
        w: &W,
        on_letter: &mut OnLetter<'_, W>,
        on_leaf: &mut OnLeaf<'_, W>,
    ) -> bool {
        for branch in [true, false] {
            let mut cur = cursor.clone();
            let letter = cur.step(branch).expect("predicate statement");
            self.extra.insert(term.clone(), branch);
            self.tau.push(letter);
            let mut w = w.clone();
            let stopped = match on_letter(&mut w, &self.tau, state) {
                Flow::Continue => self.go(cur, state.clone(), w, on_letter, on_leaf),
                flow => self.stops(flow),
            };
            self.tau.pop();
            self.extra.remove(&term);
            if stopped {
                return true;
            }
        }
        false
    }

    /// Extends a compatible prefix to a maximal path (terminal, or `cap`
    /// letters long), taking the true branch wherever the choice is free.
    fn extend_maximal(&self, prefix: &[Letter]) -> Witness {
        let mut cursor = PathCursor::new(self.quotient);
        let mut state = HerbrandState::natural();
        let mut extra: HashMap<PredTerm, bool> = HashMap::new();
        let mut path = Vec::with_capacity(self.cap);
        let cap = self.cap.max(prefix.len());
        while !cursor.is_terminal() && path.len() < cap {
            let stmt = cursor.next_statement().expect("non-terminal cursor");
            let term = self.pred_term(stmt, &state);
            let letter = match prefix.get(path.len()) {
                Some(l) => {
                    cursor.advance(l);
                    l.clone()
                }
                None => {
                    let branch = term.as_ref().map_or(true, |t| {
                        self.c
                            .consequences()
                            .forced(t)
                            .or_else(|| extra.get(t).copied())
                            .unwrap_or(true)
                    });
                    cursor.step(branch).expect("non-terminal cursor")
                }
            };
            if let (Some(t), Some(b)) = (term, letter.branch()) {
                extra.entry(t).or_insert(b);
            }
            state.apply(self.c.store(), &letter);
            path.push(letter);
        }
        Witness::Path {
            terminal: cursor.is_terminal(),
            path: path.into(),
        }
    }
}
