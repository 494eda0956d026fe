use std::collections::VecDeque;

use crate::model::{Letter, Path, Schema};

/// Letter emitted by an assignment or label statement.
pub(crate) fn statement_letter(stmt: &Schema) -> Option<Letter> {
    match stmt {
        Schema::Assign {
            target, func, args, ..
        } => Some(Letter::Assign {
            target: target.clone(),
            func: func.clone(),
            args: args.clone(),
        }),
        Schema::Label { name, .. } => Some(Letter::Label(name.clone())),
        _ => None,
    }
}

fn pred_letter(stmt: &Schema, branch: bool) -> Option<Letter> {
    match stmt {
        Schema::If { pred, args, .. } | Schema::While { pred, args, .. } => Some(Letter::Pred {
            pred: pred.clone(),
            args: args.clone(),
            branch,
        }),
        _ => None,
    }
}

/// A position inside a schema: the continuation still to run, as a stack of
/// statements with the next one on top.
///
/// The stack is kept normalised so that its top is always a letter-producing
/// statement (label, assignment, `if` or `while`), or the stack is empty and
/// the cursor is terminal. Its length is the nesting height of the next
/// statement, which is what segment bookkeeping for reductions relies on.
#[derive(Clone, Debug)]
pub struct PathCursor<'a> {
    stack: Vec<&'a Schema>,
    consumed: usize,
}

impl<'a> PathCursor<'a> {
    pub fn new(schema: &'a Schema) -> Self {
        let mut c = PathCursor {
            stack: vec![schema],
            consumed: 0,
        };
        c.normalise();
        c
    }

    fn normalise(&mut self) {
        while let Some(top) = self.stack.last() {
            match top {
                Schema::Skip => {
                    self.stack.pop();
                }
                Schema::Seq(items) => {
                    self.stack.pop();
                    self.stack.extend(items.iter().rev());
                }
                _ => break,
            }
        }
    }

    pub fn is_terminal(&self) -> bool {
        self.stack.is_empty()
    }

    /// Letters consumed so far.
    pub fn consumed(&self) -> usize {
        self.consumed
    }

    /// Stack height of the next statement; zero when terminal.
    pub fn height(&self) -> usize {
        self.stack.len()
    }

    /// Every legal next letter: nothing, one label or assignment letter, or a
    /// `T`/`F` pair for a predicate (true branch first).
    pub fn next_letters(&self) -> Vec<Letter> {
        match self.stack.last() {
            None => Vec::new(),
            Some(top) => match statement_letter(top) {
                Some(l) => vec![l],
                None => vec![
                    pred_letter(top, true).expect("normalised top is a statement"),
                    pred_letter(top, false).expect("normalised top is a statement"),
                ],
            },
        }
    }

    /// The statement producing the next letter.
    pub fn next_statement(&self) -> Option<&'a Schema> {
        self.stack.last().copied()
    }

    /// Whether the next statement is an `if` or `while` test.
    pub fn at_predicate(&self) -> bool {
        matches!(
            self.stack.last(),
            Some(Schema::If { .. } | Schema::While { .. })
        )
    }

    /// Consumes `letter` if it is a legal next letter.
    pub fn advance(&mut self, letter: &Letter) -> bool {
        let Some(top) = self.stack.last().copied() else {
            return false;
        };
        match (top, letter) {
            (Schema::Assign { func, .. }, Letter::Assign { func: f, .. }) if func == f => {
                self.stack.pop();
            }
            (Schema::Label { name, .. }, Letter::Label(n)) if name == n => {
                self.stack.pop();
            }
            (
                Schema::If {
                    pred,
                    then_part,
                    else_part,
                    ..
                },
                Letter::Pred {
                    pred: p, branch, ..
                },
            ) if pred == p => {
                self.stack.pop();
                self.stack.push(if *branch { then_part } else { else_part });
            }
            (
                Schema::While { pred, body, .. },
                Letter::Pred {
                    pred: p, branch, ..
                },
            ) if pred == p => {
                if *branch {
                    self.stack.push(body);
                } else {
                    self.stack.pop();
                }
            }
            _ => return false,
        }
        self.consumed += 1;
        self.normalise();
        true
    }

    /// Takes the branch `branch` at a predicate, or the forced letter otherwise.
    pub fn step(&mut self, branch: bool) -> Option<Letter> {
        let top = *self.stack.last()?;
        let letter = statement_letter(top).or_else(|| pred_letter(top, branch))?;
        self.advance(&letter);
        Some(letter)
    }
}

/// Classification of a word against the paths of a schema.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathStatus {
    /// A strict prefix of some terminating path.
    Prefix,
    /// A terminating path.
    Terminal,
    /// Not a path; `position` is the 1-based index of the first bad letter.
    Invalid { position: usize },
}

pub fn validate_path(schema: &Schema, path: &[Letter]) -> PathStatus {
    let mut cursor = PathCursor::new(schema);
    for (i, l) in path.iter().enumerate() {
        if !cursor.advance(l) {
            return PathStatus::Invalid { position: i + 1 };
        }
    }
    if cursor.is_terminal() {
        PathStatus::Terminal
    } else {
        PathStatus::Prefix
    }
}

/// Runs a cursor along `path`, recording the height before every letter and
/// after the last one. `None` if the word is not a path.
pub(crate) fn heights(schema: &Schema, path: &[Letter]) -> Option<Vec<usize>> {
    let mut cursor = PathCursor::new(schema);
    let mut out = Vec::with_capacity(path.len() + 1);
    for l in path {
        out.push(cursor.height());
        if !cursor.advance(l) {
            return None;
        }
    }
    out.push(cursor.height());
    Some(out)
}

/// A path produced by [`enumerate_paths`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumeratedPath {
    pub path: Path,
    pub terminal: bool,
}

/// Breadth-first enumeration of every path of length at most `max_len`,
/// shortest first, true branches before false ones.
pub struct PathEnumerator<'a> {
    queue: VecDeque<(PathCursor<'a>, Path)>,
    max_len: usize,
}

pub fn enumerate_paths(schema: &Schema, max_len: usize) -> PathEnumerator<'_> {
    PathEnumerator {
        queue: VecDeque::from([(PathCursor::new(schema), Path::new())]),
        max_len,
    }
}

impl Iterator for PathEnumerator<'_> {
    type Item = EnumeratedPath;

    fn next(&mut self) -> Option<EnumeratedPath> {
        let (cursor, path) = self.queue.pop_front()?;
        if path.len() < self.max_len {
            for l in cursor.next_letters() {
                let mut c = cursor.clone();
                c.advance(&l);
                self.queue.push_back((c, path.with(l)));
            }
        }
        Some(EnumeratedPath {
            terminal: cursor.is_terminal(),
            path,
        })
    }
}
