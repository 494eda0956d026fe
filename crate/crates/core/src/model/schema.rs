use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::symbol::{Symbol, Var};

/// Stable address of a statement node, assigned in preorder when the
/// original schema is numbered. Quotients keep the ids of retained nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SiteId(pub u32);

impl fmt::Display for SiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A structured schema. `Seq` is kept canonical by [`Schema::seq`]: it never
/// nests, never holds `Skip`, and always has at least two items.
///
/// Equality is structural and ignores site ids.
#[derive(Clone, Debug)]
pub enum Schema {
    Skip,
    Label {
        site: SiteId,
        name: Symbol,
    },
    Assign {
        site: SiteId,
        target: Var,
        func: Symbol,
        args: Arc<[Var]>,
    },
    Seq(Vec<Schema>),
    If {
        site: SiteId,
        pred: Symbol,
        args: Arc<[Var]>,
        then_part: Box<Schema>,
        else_part: Box<Schema>,
    },
    While {
        site: SiteId,
        pred: Symbol,
        args: Arc<[Var]>,
        body: Box<Schema>,
    },
}

const UNNUMBERED: SiteId = SiteId(u32::MAX);

fn var_list(args: &[&str]) -> Arc<[Var]> {
    args.iter().map(|a| Symbol::new(a)).collect()
}

impl Schema {
    pub fn skip() -> Self {
        Schema::Skip
    }

    pub fn label(name: &str) -> Self {
        Schema::Label {
            site: UNNUMBERED,
            name: Symbol::new(name),
        }
    }

    pub fn assign(target: &str, func: &str, args: &[&str]) -> Self {
        Schema::Assign {
            site: UNNUMBERED,
            target: Symbol::new(target),
            func: Symbol::new(func),
            args: var_list(args),
        }
    }

    pub fn if_else(pred: &str, args: &[&str], then_part: Schema, else_part: Schema) -> Self {
        Schema::If {
            site: UNNUMBERED,
            pred: Symbol::new(pred),
            args: var_list(args),
            then_part: Box::new(then_part),
            else_part: Box::new(else_part),
        }
    }

    pub fn if_then(pred: &str, args: &[&str], then_part: Schema) -> Self {
        Schema::if_else(pred, args, then_part, Schema::Skip)
    }

    pub fn while_loop(pred: &str, args: &[&str], body: Schema) -> Self {
        Schema::While {
            site: UNNUMBERED,
            pred: Symbol::new(pred),
            args: var_list(args),
            body: Box::new(body),
        }
    }

    /// Canonical sequence: flattens nested sequences and drops `Skip`.
    pub fn seq(items: impl IntoIterator<Item = Schema>) -> Self {
        let mut flat = Vec::new();
        for item in items {
            match item {
                Schema::Skip => {}
                Schema::Seq(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => Schema::Skip,
            1 => flat.pop().unwrap(),
            _ => Schema::Seq(flat),
        }
    }

    /// Reassigns site ids in preorder starting from zero.
    pub fn numbered(mut self) -> Self {
        let mut next = 0;
        self.renumber(&mut next);
        self
    }

    fn renumber(&mut self, next: &mut u32) {
        let mut fresh = || {
            let id = SiteId(*next);
            *next += 1;
            id
        };
        match self {
            Schema::Skip => {}
            Schema::Label { site, .. } | Schema::Assign { site, .. } => *site = fresh(),
            Schema::Seq(items) => {
                for item in items {
                    item.renumber(next);
                }
            }
            Schema::If {
                site,
                then_part,
                else_part,
                ..
            } => {
                *site = fresh();
                then_part.renumber(next);
                else_part.renumber(next);
            }
            Schema::While { site, body, .. } => {
                *site = fresh();
                body.renumber(next);
            }
        }
    }

    pub fn is_skip(&self) -> bool {
        matches!(self, Schema::Skip)
    }

    pub fn site(&self) -> Option<SiteId> {
        match self {
            Schema::Skip | Schema::Seq(_) => None,
            Schema::Label { site, .. }
            | Schema::Assign { site, .. }
            | Schema::If { site, .. }
            | Schema::While { site, .. } => Some(*site),
        }
    }

    /// The function symbol, predicate symbol or label name heading a statement.
    pub fn head(&self) -> Option<&Symbol> {
        match self {
            Schema::Skip | Schema::Seq(_) => None,
            Schema::Label { name, .. } => Some(name),
            Schema::Assign { func, .. } => Some(func),
            Schema::If { pred, .. } | Schema::While { pred, .. } => Some(pred),
        }
    }

    /// Items of a sequence, or the node itself as a one-element slice.
    pub fn items(&self) -> &[Schema] {
        match self {
            Schema::Skip => &[],
            Schema::Seq(items) => items,
            other => std::slice::from_ref(other),
        }
    }

    /// Statement nodes (everything but `Skip` and `Seq`) in preorder.
    pub fn statements(&self) -> Vec<&Schema> {
        let mut out = Vec::new();
        self.collect_statements(&mut out);
        out
    }

    fn collect_statements<'a>(&'a self, out: &mut Vec<&'a Schema>) {
        match self {
            Schema::Skip => {}
            Schema::Seq(items) => items.iter().for_each(|i| i.collect_statements(out)),
            Schema::Label { .. } | Schema::Assign { .. } => out.push(self),
            Schema::If {
                then_part,
                else_part,
                ..
            } => {
                out.push(self);
                then_part.collect_statements(out);
                else_part.collect_statements(out);
            }
            Schema::While { body, .. } => {
                out.push(self);
                body.collect_statements(out);
            }
        }
    }

    /// Every head symbol (functions, predicates, labels) occurring in the schema.
    pub fn head_symbols(&self) -> BTreeSet<Symbol> {
        self.statements()
            .into_iter()
            .filter_map(|s| s.head().cloned())
            .collect()
    }

    pub fn contains_label(&self, label: &str) -> bool {
        self.statements()
            .into_iter()
            .any(|s| matches!(s, Schema::Label { name, .. } if name == label))
    }

    pub fn sites(&self) -> Vec<SiteId> {
        self.statements().iter().filter_map(|s| s.site()).collect()
    }

    /// Number of statement nodes.
    pub fn size(&self) -> usize {
        self.statements().len()
    }

    pub fn is_canonical(&self) -> bool {
        match self {
            Schema::Skip | Schema::Label { .. } | Schema::Assign { .. } => true,
            Schema::Seq(items) => {
                items.len() >= 2
                    && items
                        .iter()
                        .all(|i| !matches!(i, Schema::Seq(_) | Schema::Skip) && i.is_canonical())
            }
            Schema::If {
                then_part,
                else_part,
                ..
            } => then_part.is_canonical() && else_part.is_canonical(),
            Schema::While { body, .. } => body.is_canonical(),
        }
    }

    /// Appends a statement at the end of the schema, keeping canonical form.
    pub fn then(self, next: Schema) -> Schema {
        Schema::seq([self, next])
    }
}

impl PartialEq for Schema {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Schema::Skip, Schema::Skip) => true,
            (Schema::Label { name: a, .. }, Schema::Label { name: b, .. }) => a == b,
            (
                Schema::Assign {
                    target: t1,
                    func: f1,
                    args: a1,
                    ..
                },
                Schema::Assign {
                    target: t2,
                    func: f2,
                    args: a2,
                    ..
                },
            ) => t1 == t2 && f1 == f2 && a1 == a2,
            (Schema::Seq(a), Schema::Seq(b)) => a == b,
            (
                Schema::If {
                    pred: p1,
                    args: a1,
                    then_part: t1,
                    else_part: e1,
                    ..
                },
                Schema::If {
                    pred: p2,
                    args: a2,
                    then_part: t2,
                    else_part: e2,
                    ..
                },
            ) => p1 == p2 && a1 == a2 && t1 == t2 && e1 == e2,
            (
                Schema::While {
                    pred: p1,
                    args: a1,
                    body: b1,
                    ..
                },
                Schema::While {
                    pred: p2,
                    args: a2,
                    body: b2,
                    ..
                },
            ) => p1 == p2 && a1 == a2 && b1 == b2,
            _ => false,
        }
    }
}

impl Eq for Schema {}
