use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use crate::symbol::{Symbol, Var};

/// An element of the path alphabet of a schema.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Assign {
        target: Var,
        func: Symbol,
        args: Arc<[Var]>,
    },
    Pred {
        pred: Symbol,
        args: Arc<[Var]>,
        branch: bool,
    },
    Label(Symbol),
}

impl Letter {
    /// The function symbol, predicate symbol or label the letter is named by.
    pub fn name(&self) -> &Symbol {
        match self {
            Letter::Assign { func, .. } => func,
            Letter::Pred { pred, .. } => pred,
            Letter::Label(name) => name,
        }
    }

    pub fn is_pred(&self) -> bool {
        matches!(self, Letter::Pred { .. })
    }

    pub fn is_label(&self, label: &str) -> bool {
        matches!(self, Letter::Label(name) if name == label)
    }

    pub fn branch(&self) -> Option<bool> {
        match self {
            Letter::Pred { branch, .. } => Some(*branch),
            _ => None,
        }
    }

    /// The same predicate letter taking the opposite branch.
    pub fn flipped(&self) -> Option<Letter> {
        match self {
            Letter::Pred { pred, args, branch } => Some(Letter::Pred {
                pred: pred.clone(),
                args: args.clone(),
                branch: !branch,
            }),
            _ => None,
        }
    }
}

/// Abbreviated token form: `f`, `p:T`, `p:F`, `@L`.
impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Assign { func, .. } => write!(f, "{func}"),
            Letter::Pred { pred, branch, .. } => {
                write!(f, "{pred}:{}", if *branch { "T" } else { "F" })
            }
            Letter::Label(name) => write!(f, "@{name}"),
        }
    }
}

/// A finite word over the path alphabet.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path(Vec<Letter>);

impl Path {
    pub fn new() -> Self {
        Path(Vec::new())
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    pub fn pop(&mut self) -> Option<Letter> {
        self.0.pop()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    /// A copy followed by one more letter.
    pub fn with(&self, letter: Letter) -> Path {
        let mut out = self.clone();
        out.push(letter);
        out
    }

    pub fn prefix(&self, len: usize) -> Path {
        Path(self.0[..len].to_vec())
    }

    pub fn concat(&self, other: &Path) -> Path {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Path(v)
    }

    pub fn is_prefix_of(&self, other: &Path) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn count_label(&self, label: &str) -> usize {
        self.0.iter().filter(|l| l.is_label(label)).count()
    }
}

impl Deref for Path {
    type Target = [Letter];

    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

impl From<Vec<Letter>> for Path {
    fn from(v: Vec<Letter>) -> Self {
        Path(v)
    }
}

impl FromIterator<Letter> for Path {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Path(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Path {
    type Item = &'a Letter;
    type IntoIter = std::slice::Iter<'a, Letter>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Space-separated tokens; the empty path prints as the empty string.
impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}
