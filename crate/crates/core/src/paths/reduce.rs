//! Simple l-reductions and the polynomial reducibility test.
//!
//! A simple reduction either deletes the last traversal of a loop body,
//! `⟨p,T⟩σ⟨p,F⟩ → ⟨p,F⟩`, or swaps an `if` branch whose other arm is `skip`,
//! `⟨p,Z⟩σ → ⟨p,¬Z⟩`. With a label `l`, the loop body or branch must not
//! contain `l`, so reductions never remove an occurrence of it.
//!
//! Reducibility is decided by a single left-to-right alignment of the target
//! against the source. Where the two words first differ the target must show
//! the flipped letter of the source's predicate, and only one rewrite can
//! produce it: a branch swap jumps over the rest of the swapped branch, and a
//! loop exit jumps over every remaining iteration of that loop activation
//! (removing them last-first). Because only the last iteration of a loop can be
//! deleted by one simple reduction, a loop exit absorbs all trailing iterations
//! at once rather than one at a time.

use std::collections::HashMap;
use std::fmt;

use crate::model::{Letter, Path, Schema};
use crate::symbol::Symbol;

use super::cursor::heights;
use super::{require_path, PathError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ReductionKind {
    While,
    If,
}

impl fmt::Display for ReductionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReductionKind::While => "while",
            ReductionKind::If => "if",
        })
    }
}

/// One simple reduction: the rewritten path, the 0-based position of the
/// rewritten predicate letter and the segment that was replaced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub path: Path,
    pub position: usize,
    pub kind: ReductionKind,
    pub removed: Path,
}

impl Reduction {
    /// `<position> <kind> <removed segment>` record.
    pub fn record(&self) -> String {
        format!("{} {} {}", self.position, self.kind, self.removed)
    }
}

/// How the aligner consumed source letters for one target letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Move {
    Match,
    /// Branch swap; the swapped branch ends before `end`.
    Flip {
        end: usize,
    },
    /// Loop exit; iterations start at `starts`, the exit test is at `exit`.
    Absorb {
        starts: Vec<usize>,
        exit: usize,
    },
}

/// A source word with the segment structure needed to rewrite it.
pub(crate) struct Aligner<'w> {
    word: &'w [Letter],
    heights: Vec<usize>,
    nodes: HashMap<Symbol, Node>,
}

#[derive(Clone, Copy)]
enum Node {
    /// `if`: whether the then- and else-parts are `skip` and whether they contain the label.
    If {
        then_skip: bool,
        else_skip: bool,
        then_label: bool,
        else_label: bool,
    },
    While {
        body_label: bool,
    },
}

impl<'w> Aligner<'w> {
    /// `None` if `word` is not a path through `schema`.
    pub(crate) fn new(schema: &Schema, word: &'w [Letter], label: Option<&str>) -> Option<Self> {
        let heights = heights(schema, word)?;
        let has = |s: &Schema| label.is_some_and(|l| s.contains_label(l));
        let mut nodes = HashMap::new();
        for stmt in schema.statements() {
            match stmt {
                Schema::If {
                    pred,
                    then_part,
                    else_part,
                    ..
                } => {
                    nodes.insert(
                        pred.clone(),
                        Node::If {
                            then_skip: then_part.is_skip(),
                            else_skip: else_part.is_skip(),
                            then_label: has(then_part),
                            else_label: has(else_part),
                        },
                    );
                }
                Schema::While { pred, body, .. } => {
                    nodes.insert(
                        pred.clone(),
                        Node::While {
                            body_label: has(body),
                        },
                    );
                }
                _ => {}
            }
        }
        Some(Aligner {
            word,
            heights,
            nodes,
        })
    }

    /// End of the branch or loop-body traversal entered at predicate letter `i`:
    /// the first index whose statement lies outside it. `None` if the word
    /// stops inside the traversal.
    fn part_end(&self, i: usize) -> Option<usize> {
        let threshold = match self.nodes.get(self.word[i].name())? {
            Node::If { .. } => self.heights[i] - 1,
            Node::While { .. } => self.heights[i],
        };
        (i + 1..=self.word.len()).find(|&j| self.heights[j] <= threshold)
    }

    /// End of the swappable branch entered at `i`, if the swap is a simple reduction.
    fn flip_end(&self, i: usize) -> Option<usize> {
        let branch = self.word[i].branch()?;
        let Node::If {
            then_skip,
            else_skip,
            then_label,
            else_label,
        } = *self.nodes.get(self.word[i].name())?
        else {
            return None;
        };
        let (other_skip, this_label) = if branch {
            (else_skip, then_label)
        } else {
            (then_skip, else_label)
        };
        if !other_skip || this_label {
            return None;
        }
        self.part_end(i)
    }

    /// Starts of the remaining iterations of the loop activation at `i` and the
    /// index of its exit test, if they can all be deleted.
    fn loop_tail(&self, i: usize) -> Option<(Vec<usize>, usize)> {
        if self.word[i].branch() != Some(true) {
            return None;
        }
        let Node::While { body_label: false } = *self.nodes.get(self.word[i].name())? else {
            return None;
        };
        let mut starts = vec![i];
        let mut j = i;
        loop {
            let e = self.part_end(j)?;
            match self.word.get(e)?.branch()? {
                true => {
                    starts.push(e);
                    j = e;
                }
                false => return Some((starts, e)),
            }
        }
    }

    /// Consumes source letters starting at `i` to produce target letter `t`.
    /// Returns the next source index.
    pub(crate) fn step(&self, i: usize, t: &Letter) -> Option<(usize, Move)> {
        let w = self.word.get(i)?;
        if w == t {
            return Some((i + 1, Move::Match));
        }
        if w.flipped().as_ref() != Some(t) {
            return None;
        }
        if let Some(end) = self.flip_end(i) {
            return Some((end, Move::Flip { end }));
        }
        let (starts, exit) = self.loop_tail(i)?;
        Some((exit + 1, Move::Absorb { starts, exit }))
    }

    /// Source index after aligning all of `target`, with the moves used.
    pub(crate) fn align(&self, target: &[Letter]) -> Option<(usize, Vec<Move>)> {
        let mut i = 0;
        let mut moves = Vec::with_capacity(target.len());
        for t in target {
            let (next, mv) = self.step(i, t)?;
            moves.push(mv);
            i = next;
        }
        Some((i, moves))
    }

    fn single_reductions(&self) -> Vec<Reduction> {
        let w = self.word;
        let mut out = Vec::new();
        for i in 0..w.len() {
            if let Some(end) = self.flip_end(i) {
                let mut path: Path = w[..i].iter().cloned().collect();
                path.push(w[i].flipped().expect("predicate letter"));
                path = path.concat(&w[end..].iter().cloned().collect());
                out.push(Reduction {
                    path,
                    position: i,
                    kind: ReductionKind::If,
                    removed: w[i..end].iter().cloned().collect(),
                });
            }
            let last_iteration = w[i].branch() == Some(true)
                && matches!(
                    self.nodes.get(w[i].name()),
                    Some(Node::While { body_label: false })
                );
            if last_iteration {
                if let Some(e) = self.part_end(i) {
                    if w.get(e).and_then(Letter::branch) == Some(false) {
                        out.push(Reduction {
                            path: w[..i].iter().chain(&w[e..]).cloned().collect(),
                            position: i,
                            kind: ReductionKind::While,
                            removed: w[i..e].iter().cloned().collect(),
                        });
                    }
                }
            }
        }
        out
    }
}

/// Every path obtained from `path` by one simple reduction, leftmost first.
/// `label` restricts to l-reductions.
pub fn simple_l_reductions(
    schema: &Schema,
    path: &Path,
    label: Option<&str>,
) -> Result<Vec<Reduction>, PathError> {
    require_path(schema, path)?;
    let aligner = Aligner::new(schema, path, label).expect("validated path");
    Ok(aligner.single_reductions())
}

/// Decides whether `source` reduces to `target` by zero or more simple
/// reductions. On success returns a witness sequence, each reduction applied
/// to the result of the previous one.
pub fn is_l_reducible(
    schema: &Schema,
    source: &Path,
    target: &Path,
    label: Option<&str>,
) -> Result<Option<Vec<Reduction>>, PathError> {
    require_path(schema, source)?;
    require_path(schema, target)?;
    let aligner = Aligner::new(schema, source, label).expect("validated path");
    let Some((end, moves)) = aligner.align(target) else {
        return Ok(None);
    };
    if end != source.len() {
        return Ok(None);
    }
    Ok(Some(witness(source, target, &moves)))
}

/// Replays alignment moves as a sequence of simple reductions. Before the
/// move for target letter `k` the current word is `target[..k] ++ source[i..]`.
fn witness(source: &[Letter], target: &[Letter], moves: &[Move]) -> Vec<Reduction> {
    let mut out = Vec::new();
    let mut i = 0;
    for (k, mv) in moves.iter().enumerate() {
        let current = |from: usize| -> Vec<Letter> {
            target[..k].iter().chain(&source[from..]).cloned().collect()
        };
        match mv {
            Move::Match => i += 1,
            Move::Flip { end } => {
                let mut path: Vec<Letter> = target[..k].to_vec();
                path.push(target[k].clone());
                path.extend_from_slice(&source[*end..]);
                out.push(Reduction {
                    path: path.into(),
                    position: k,
                    kind: ReductionKind::If,
                    removed: source[i..*end].iter().cloned().collect(),
                });
                i = *end;
            }
            Move::Absorb { starts, exit } => {
                let mut word = current(i);
                // Delete iterations last-first; each is then the final one.
                for m in (0..starts.len()).rev() {
                    let s = starts[m];
                    let e = starts.get(m + 1).copied().unwrap_or(*exit);
                    let position = k + (s - i);
                    let removed: Path = source[s..e].iter().cloned().collect();
                    word.drain(position..position + (e - s));
                    out.push(Reduction {
                        path: word.clone().into(),
                        position,
                        kind: ReductionKind::While,
                        removed,
                    });
                }
                i = exit + 1;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_path, schema_from_str};

    const LOOP_NO_H: &str =
        "while p(w) { w := g(w); v := f(u); if q(w,t) { u := h(u); } } label end;";

    #[test]
    fn single_loop_reduction() {
        let s = schema_from_str("while p(w) { skip; }").unwrap();
        let rho = parse_path("p:T p:F", &s).unwrap();
        let red = simple_l_reductions(&s, &rho, None).unwrap();
        assert_eq!(red.len(), 1);
        assert_eq!(red[0].path.to_string(), "p:F");
        assert_eq!((red[0].position, red[0].kind), (0, ReductionKind::While));
        assert_eq!(red[0].record(), "0 while p:T");
    }

    #[test]
    fn no_removable_segment() {
        let s = schema_from_str("u := h(); if p(w) { v := f(u); } else { v := g(); }").unwrap();
        let rho = parse_path("h p:T f", &s).unwrap();
        assert!(simple_l_reductions(&s, &rho, None).unwrap().is_empty());
    }

    #[test]
    fn worked_branch_swap() {
        let s = schema_from_str(LOOP_NO_H).unwrap();
        let proj = parse_path("p:T g f q:T h p:T g f q:T h p:F @end", &s).unwrap();
        let target = parse_path("p:T g f q:T h p:T g f q:F p:F @end", &s).unwrap();
        let red = simple_l_reductions(&s, &proj, Some("end")).unwrap();
        assert!(red.iter().any(|r| r.path == target));
        let w = is_l_reducible(&s, &proj, &target, Some("end"))
            .unwrap()
            .unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].record(), "8 if q:T h");
        assert_eq!(w[0].path, target);
    }

    #[test]
    fn reflexive_and_never_lengthening() {
        let s = schema_from_str("while p(w) { skip; }").unwrap();
        let long = parse_path("p:T p:F", &s).unwrap();
        let short = parse_path("p:F", &s).unwrap();
        assert_eq!(
            is_l_reducible(&s, &long, &long, None).unwrap(),
            Some(vec![])
        );
        assert!(is_l_reducible(&s, &short, &long, None).unwrap().is_none());
        assert!(is_l_reducible(&s, &long, &short, None).unwrap().is_some());
    }

    #[test]
    fn several_trailing_iterations() {
        let s = schema_from_str("while p(w) { w := g(w); } label end;").unwrap();
        let src = parse_path("p:T g p:T g p:T g p:F @end", &s).unwrap();
        let dst = parse_path("p:T g p:F @end", &s).unwrap();
        let w = is_l_reducible(&s, &src, &dst, Some("end"))
            .unwrap()
            .unwrap();
        let records: Vec<String> = w.iter().map(Reduction::record).collect();
        assert_eq!(records, ["4 while p:T g", "2 while p:T g"]);
        assert_eq!(w.last().unwrap().path, dst);
    }

    #[test]
    fn label_blocks_reduction() {
        let s = schema_from_str("while p(w) { label l; }").unwrap();
        let rho = parse_path("p:T @l p:F", &s).unwrap();
        assert!(simple_l_reductions(&s, &rho, Some("l")).unwrap().is_empty());
        assert_eq!(simple_l_reductions(&s, &rho, None).unwrap().len(), 1);
    }
}
