use std::collections::{BTreeMap, BTreeSet};

use super::letter::Letter;
use super::schema::Schema;
use super::ModelError;
use crate::symbol::Symbol;

/// Symbols used by a schema, with arities inferred from use.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymbolTable {
    pub functions: BTreeMap<Symbol, usize>,
    pub predicates: BTreeMap<Symbol, usize>,
    pub variables: BTreeSet<Symbol>,
    pub labels: BTreeSet<Symbol>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Space {
    Function,
    Predicate,
    Variable,
    Label,
}

impl Space {
    fn describe(self) -> &'static str {
        match self {
            Space::Function => "function",
            Space::Predicate => "predicate",
            Space::Variable => "variable",
            Space::Label => "label",
        }
    }
}

impl SymbolTable {
    /// Collects every symbol of `schema`, checking arity agreement and that the
    /// four name spaces stay disjoint.
    pub fn infer(schema: &Schema) -> Result<Self, ModelError> {
        let mut table = SymbolTable::default();
        let mut spaces: BTreeMap<Symbol, Space> = BTreeMap::new();
        let mut claim = |name: &Symbol, space: Space| -> Result<(), ModelError> {
            match spaces.get(name) {
                Some(&existing) if existing != space => Err(ModelError::NameClash {
                    name: name.clone(),
                    first: existing.describe(),
                    second: space.describe(),
                }),
                _ => {
                    spaces.insert(name.clone(), space);
                    Ok(())
                }
            }
        };
        for stmt in schema.statements() {
            match stmt {
                Schema::Label { name, .. } => {
                    claim(name, Space::Label)?;
                    table.labels.insert(name.clone());
                }
                Schema::Assign {
                    target, func, args, ..
                } => {
                    claim(func, Space::Function)?;
                    claim(target, Space::Variable)?;
                    table.variables.insert(target.clone());
                    for a in args.iter() {
                        claim(a, Space::Variable)?;
                        table.variables.insert(a.clone());
                    }
                    record_arity(&mut table.functions, func, args.len())?;
                }
                Schema::If { pred, args, .. } | Schema::While { pred, args, .. } => {
                    claim(pred, Space::Predicate)?;
                    for a in args.iter() {
                        claim(a, Space::Variable)?;
                        table.variables.insert(a.clone());
                    }
                    record_arity(&mut table.predicates, pred, args.len())?;
                }
                Schema::Skip | Schema::Seq(_) => {}
            }
        }
        Ok(table)
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.functions
            .get(name)
            .or_else(|| self.predicates.get(name))
            .copied()
    }
}

fn record_arity(
    map: &mut BTreeMap<Symbol, usize>,
    name: &Symbol,
    arity: usize,
) -> Result<(), ModelError> {
    match map.get(name) {
        Some(&known) if known != arity => Err(ModelError::ArityConflict {
            name: name.clone(),
            expected: known,
            found: arity,
        }),
        _ => {
            map.insert(name.clone(), arity);
            Ok(())
        }
    }
}

/// Result of a linearity check: the symbols and labels occurring more than once.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearityReport {
    pub repeated: BTreeSet<Symbol>,
}

impl LinearityReport {
    pub fn is_linear(&self) -> bool {
        self.repeated.is_empty()
    }
}

pub fn check_linear(schema: &Schema) -> LinearityReport {
    let mut seen = BTreeSet::new();
    let mut repeated = BTreeSet::new();
    for head in schema.statements().into_iter().filter_map(Schema::head) {
        if !seen.insert(head.clone()) {
            repeated.insert(head.clone());
        }
    }
    LinearityReport { repeated }
}

/// The letters of a linear schema: one per assignment and label, two per predicate.
pub fn alphabet(schema: &Schema) -> Result<BTreeSet<Letter>, ModelError> {
    let report = check_linear(schema);
    if !report.is_linear() {
        return Err(ModelError::NotLinear(report.repeated));
    }
    let mut out = BTreeSet::new();
    for stmt in schema.statements() {
        match stmt {
            Schema::Label { name, .. } => {
                out.insert(Letter::Label(name.clone()));
            }
            Schema::Assign {
                target, func, args, ..
            } => {
                out.insert(Letter::Assign {
                    target: target.clone(),
                    func: func.clone(),
                    args: args.clone(),
                });
            }
            Schema::If { pred, args, .. } | Schema::While { pred, args, .. } => {
                for branch in [true, false] {
                    out.insert(Letter::Pred {
                        pred: pred.clone(),
                        args: args.clone(),
                        branch,
                    });
                }
            }
            Schema::Skip | Schema::Seq(_) => {}
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn branch_example() -> Schema {
        Schema::seq([
            Schema::assign("u", "h", &[]),
            Schema::if_else(
                "p",
                &["w"],
                Schema::assign("v", "f", &["u"]),
                Schema::assign("v", "g", &[]),
            ),
        ])
        .numbered()
    }

    #[test]
    fn branch_is_linear() {
        assert!(check_linear(&branch_example()).is_linear());
        assert!(check_linear(&Schema::Skip).is_linear());
    }

    #[test]
    fn repeated_function_reported() {
        let s = Schema::seq([
            Schema::assign("v", "f", &["u"]),
            Schema::assign("v", "f", &["u"]),
        ]);
        let r = check_linear(&s);
        assert_eq!(r.repeated, BTreeSet::from([Symbol::new("f")]));
    }

    #[test]
    fn branch_alphabet() {
        let names: Vec<String> = alphabet(&branch_example())
            .unwrap()
            .iter()
            .map(|l| l.to_string())
            .collect();
        let mut names = names;
        names.sort();
        assert_eq!(names, ["f", "g", "h", "p:F", "p:T"]);
        assert!(alphabet(&Schema::Skip).unwrap().is_empty());
        let w = Schema::while_loop("q", &["y"], Schema::Skip);
        let names: BTreeSet<String> = alphabet(&w)
            .unwrap()
            .iter()
            .map(|l| l.to_string())
            .collect();
        assert_eq!(
            names,
            BTreeSet::from(["q:T".to_string(), "q:F".to_string()])
        );
    }

    #[test]
    fn alphabet_rejects_nonlinear() {
        let s = Schema::seq([
            Schema::assign("v", "f", &["u"]),
            Schema::assign("w", "f", &["u"]),
        ]);
        assert!(matches!(alphabet(&s), Err(ModelError::NotLinear(_))));
    }

    #[test]
    fn infer_detects_conflicts() {
        let s = Schema::seq([
            Schema::assign("v", "f", &["u"]),
            Schema::assign("w", "f", &[]),
        ]);
        assert!(matches!(
            SymbolTable::infer(&s),
            Err(ModelError::ArityConflict { .. })
        ));
        let s = Schema::seq([Schema::assign("v", "f", &["u"]), Schema::label("v")]);
        assert!(matches!(
            SymbolTable::infer(&s),
            Err(ModelError::NameClash { .. })
        ));
        let t = SymbolTable::infer(&branch_example()).unwrap();
        assert_eq!(t.arity("f"), Some(1));
        assert_eq!(t.arity("g"), Some(0));
        assert_eq!(t.arity("p"), Some(1));
        assert_eq!(t.variables.len(), 3);
    }
}
