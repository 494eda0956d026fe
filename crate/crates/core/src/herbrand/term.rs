//! Hash-consed Herbrand terms.
//!
//! Structurally equal terms are interned to the same [`TermId`], so term
//! equality is an integer comparison and terms built by loops share their
//! common subterms.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;
use std::sync::RwLock;

use crate::symbol::Symbol;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermId(u32);

impl TermId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TermNode {
    Var(Symbol),
    App(Symbol, Box<[TermId]>),
}

#[derive(Default)]
struct Inner {
    nodes: Vec<TermNode>,
    index: HashMap<TermNode, TermId>,
}

/// Append-only deduplicating store. Interning is safe from several threads;
/// the same structure always yields the same id.
#[derive(Default)]
pub struct TermStore {
    inner: RwLock<Inner>,
}

impl std::fmt::Debug for TermStore {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "TermStore({} terms)", self.len())
    }
}

impl TermStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&self, node: TermNode) -> TermId {
        if let Some(&id) = self.inner.read().unwrap().index.get(&node) {
            return id;
        }
        let mut inner = self.inner.write().unwrap();
        // Another writer may have won the race between the two locks.
        if let Some(&id) = inner.index.get(&node) {
            return id;
        }
        let id = TermId(u32::try_from(inner.nodes.len()).expect("term store overflow"));
        inner.nodes.push(node.clone());
        inner.index.insert(node, id);
        id
    }

    pub fn var(&self, name: &Symbol) -> TermId {
        self.intern(TermNode::Var(name.clone()))
    }

    pub fn app(&self, func: &Symbol, args: &[TermId]) -> TermId {
        self.intern(TermNode::App(func.clone(), args.into()))
    }

    pub fn node(&self, id: TermId) -> TermNode {
        self.inner.read().unwrap().nodes[id.index()].clone()
    }

    pub fn len(&self) -> usize {
        self.inner.read().unwrap().nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Fully parenthesised prefix form, e.g. `f(g(),v)`.
    pub fn render(&self, id: TermId) -> String {
        let inner = self.inner.read().unwrap();
        let mut out = String::new();
        render_into(&inner.nodes, id, &mut out);
        out
    }

    pub fn render_args(&self, args: &[TermId]) -> String {
        let inner = self.inner.read().unwrap();
        let mut out = String::new();
        for (i, a) in args.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            render_into(&inner.nodes, *a, &mut out);
        }
        out
    }

    /// Function symbols occurring anywhere in the term.
    pub fn functions(&self, id: TermId) -> BTreeSet<Symbol> {
        let inner = self.inner.read().unwrap();
        let mut seen = HashSet::new();
        let mut stack = vec![id];
        let mut out = BTreeSet::new();
        while let Some(t) = stack.pop() {
            if !seen.insert(t) {
                continue;
            }
            if let TermNode::App(f, args) = &inner.nodes[t.index()] {
                out.insert(f.clone());
                stack.extend(args.iter().copied());
            }
        }
        out
    }

    /// Height of the term tree; a leaf has depth 1.
    pub fn depth(&self, id: TermId) -> usize {
        let inner = self.inner.read().unwrap();
        let mut memo: HashMap<TermId, usize> = HashMap::new();
        depth_of(&inner.nodes, id, &mut memo)
    }

    /// Number of occurrences of `func` along the deepest chain of `func`
    /// applications, counted over the shared DAG.
    pub fn nesting_of(&self, id: TermId, func: &Symbol) -> usize {
        let inner = self.inner.read().unwrap();
        let mut memo: HashMap<TermId, usize> = HashMap::new();
        nesting(&inner.nodes, id, func, &mut memo)
    }
}

fn render_into(nodes: &[TermNode], id: TermId, out: &mut String) {
    match &nodes[id.index()] {
        TermNode::Var(v) => out.push_str(v.as_str()),
        TermNode::App(f, args) => {
            let _ = write!(out, "{f}(");
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                render_into(nodes, *a, out);
            }
            out.push(')');
        }
    }
}

fn depth_of(nodes: &[TermNode], id: TermId, memo: &mut HashMap<TermId, usize>) -> usize {
    if let Some(&d) = memo.get(&id) {
        return d;
    }
    // Children always have smaller ids than their parents, so iterate upwards
    // instead of recursing on deep chains.
    let mut order = vec![id];
    let mut seen = HashSet::from([id]);
    let mut i = 0;
    while i < order.len() {
        if let TermNode::App(_, args) = &nodes[order[i].index()] {
            for a in args.iter() {
                if !memo.contains_key(a) && seen.insert(*a) {
                    order.push(*a);
                }
            }
        }
        i += 1;
    }
    order.sort();
    for t in order {
        let d = match &nodes[t.index()] {
            TermNode::Var(_) => 1,
            TermNode::App(_, args) => 1 + args.iter().map(|a| memo[a]).max().unwrap_or(0),
        };
        memo.insert(t, d);
    }
    memo[&id]
}

fn nesting(
    nodes: &[TermNode],
    id: TermId,
    func: &Symbol,
    memo: &mut HashMap<TermId, usize>,
) -> usize {
    let mut order = vec![id];
    let mut i = 0;
    let mut seen = HashSet::from([id]);
    while i < order.len() {
        if let TermNode::App(_, args) = &nodes[order[i].index()] {
            for a in args.iter() {
                if seen.insert(*a) {
                    order.push(*a);
                }
            }
        }
        i += 1;
    }
    order.sort();
    for t in order {
        let n = match &nodes[t.index()] {
            TermNode::Var(_) => 0,
            TermNode::App(f, args) => {
                let below = args.iter().map(|a| memo[a]).max().unwrap_or(0);
                below + usize::from(f == func)
            }
        };
        memo.insert(t, n);
    }
    memo[&id]
}
