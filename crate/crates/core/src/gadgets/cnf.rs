use std::collections::BTreeSet;
use std::fmt;

use super::GadgetError;

/// Largest variable count the truth-table oracle accepts.
pub const MAX_BRUTE_FORCE_VARS: usize = 20;

/// A literal over variables numbered from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal {
            var,
            positive: true,
        }
    }

    pub fn neg(var: usize) -> Self {
        Literal {
            var,
            positive: false,
        }
    }

    pub fn eval(self, valuation: &[bool]) -> bool {
        valuation[self.var - 1] == self.positive
    }

    fn dimacs(self) -> i64 {
        let v = self.var as i64;
        if self.positive {
            v
        } else {
            -v
        }
    }
}

/// A 3-CNF formula. Literals may repeat within a clause.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cnf3 {
    vars: usize,
    clauses: Vec<[Literal; 3]>,
}

impl Cnf3 {
    pub fn new(vars: usize, clauses: Vec<[Literal; 3]>) -> Result<Self, GadgetError> {
        if vars == 0 {
            return Err(GadgetError::Malformed(
                "a formula needs at least one variable".into(),
            ));
        }
        for c in &clauses {
            if let Some(l) = c.iter().find(|l| l.var == 0 || l.var > vars) {
                return Err(GadgetError::Malformed(format!(
                    "literal {} outside variables 1..={vars}",
                    l.dimacs()
                )));
            }
        }
        Ok(Cnf3 { vars, clauses })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn clauses(&self) -> &[[Literal; 3]] {
        &self.clauses
    }

    pub fn eval(&self, valuation: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|l| l.eval(valuation)))
    }

    /// Parses simplified DIMACS: `c` comment lines, a `p cnf <n> <m>` header,
    /// then clauses of three non-zero literals each terminated by `0`.
    pub fn parse_dimacs(text: &str) -> Result<Self, GadgetError> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut pending: Vec<(i64, usize)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            let err = |message: String| GadgetError::Dimacs {
                line: line_no,
                message,
            };
            if line.starts_with('p') {
                let parts: Vec<&str> = line.split_whitespace().collect();
                match parts.as_slice() {
                    ["p", "cnf", n, m] => {
                        let n = n
                            .parse()
                            .map_err(|_| err(format!("bad variable count `{n}`")))?;
                        let m = m
                            .parse()
                            .map_err(|_| err(format!("bad clause count `{m}`")))?;
                        header = Some((n, m));
                    }
                    _ => return Err(err("expected `p cnf <vars> <clauses>`".into())),
                }
                continue;
            }
            if header.is_none() {
                return Err(err("clause before the `p cnf` header".into()));
            }
            for tok in line.split_whitespace() {
                let v: i64 = tok
                    .parse()
                    .map_err(|_| err(format!("bad literal `{tok}`")))?;
                if v != 0 {
                    pending.push((v, line_no));
                    continue;
                }
                if pending.len() != 3 {
                    return Err(err(format!(
                        "clause has {} literals, expected 3",
                        pending.len()
                    )));
                }
                let lits: Vec<Literal> = pending
                    .drain(..)
                    .map(|(v, _)| Literal {
                        var: v.unsigned_abs() as usize,
                        positive: v > 0,
                    })
                    .collect();
                clauses.push([lits[0], lits[1], lits[2]]);
            }
        }
        let Some((n, m)) = header else {
            return Err(GadgetError::Dimacs {
                line: 0,
                message: "missing `p cnf` header".into(),
            });
        };
        if let Some(&(_, line)) = pending.first() {
            return Err(GadgetError::Dimacs {
                line,
                message: "unterminated clause".into(),
            });
        }
        if clauses.len() != m {
            return Err(GadgetError::Dimacs {
                line: 0,
                message: format!("header announces {m} clauses, found {}", clauses.len()),
            });
        }
        Cnf3::new(n, clauses)
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.vars, self.clauses.len());
        for c in &self.clauses {
            out.push_str(&format!(
                "{} {} {} 0\n",
                c[0].dimacs(),
                c[1].dimacs(),
                c[2].dimacs()
            ));
        }
        out
    }
}

/// `(x1 ∨ ¬x2 ∨ x3) ∧ ...`
impl fmt::Display for Cnf3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clauses.is_empty() {
            return f.write_str("true");
        }
        for (i, c) in self.clauses.iter().enumerate() {
            if i > 0 {
                f.write_str(" ∧ ")?;
            }
            f.write_str("(")?;
            for (j, l) in c.iter().enumerate() {
                if j > 0 {
                    f.write_str(" ∨ ")?;
                }
                write!(f, "{}x{}", if l.positive { "" } else { "¬" }, l.var)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Truth-table decision. Returns the first satisfying valuation in binary
/// counting order (variable 1 is the lowest bit), or `None`.
pub fn brute_force_sat(cnf: &Cnf3) -> Result<Option<Vec<bool>>, GadgetError> {
    let n = cnf.vars();
    if n > MAX_BRUTE_FORCE_VARS {
        return Err(GadgetError::TooManyVariables {
            vars: n,
            limit: MAX_BRUTE_FORCE_VARS,
        });
    }
    for bits in 0u32..(1 << n) {
        let valuation: Vec<bool> = (0..n).map(|i| bits & (1 << i) != 0).collect();
        if cnf.eval(&valuation) {
            return Ok(Some(valuation));
        }
    }
    Ok(None)
}

/// Every formula over exactly `vars` variables with `clauses` distinct
/// clauses, one representative per class under renaming and negating
/// variables. Clauses are literal multisets; representatives are the
/// lexicographically least images, in sorted order.
pub fn canonical_formulas(vars: usize, clauses: usize) -> Vec<Cnf3> {
    let lits: Vec<Literal> = (1..=vars)
        .flat_map(|v| [Literal::pos(v), Literal::neg(v)])
        .collect();
    let mut all_clauses = Vec::new();
    for a in 0..lits.len() {
        for b in a..lits.len() {
            for c in b..lits.len() {
                all_clauses.push([lits[a], lits[b], lits[c]]);
            }
        }
    }
    let symmetries = symmetries(vars);
    let mut seen: BTreeSet<Vec<[Literal; 3]>> = BTreeSet::new();
    let mut pick = Vec::with_capacity(clauses);
    choose(&all_clauses, clauses, 0, &mut pick, &mut |chosen| {
        let used: BTreeSet<usize> = chosen.iter().flatten().map(|l| l.var).collect();
        if used.len() != vars {
            return;
        }
        let best = symmetries
            .iter()
            .map(|(perm, flip)| {
                let mut image: Vec<[Literal; 3]> = chosen
                    .iter()
                    .map(|c| {
                        let mut c = c.map(|l| Literal {
                            var: perm[l.var - 1],
                            positive: l.positive != flip[l.var - 1],
                        });
                        c.sort();
                        c
                    })
                    .collect();
                image.sort();
                image
            })
            .min()
            .expect("identity symmetry");
        seen.insert(best);
    });
    seen.into_iter()
        .map(|c| Cnf3 { vars, clauses: c })
        .collect()
}

fn symmetries(vars: usize) -> Vec<(Vec<usize>, Vec<bool>)> {
    let mut perms: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..vars {
        let mut next = Vec::new();
        for p in &perms {
            for v in (1..=vars).filter(|v| !p.contains(v)) {
                let mut q = p.clone();
                q.push(v);
                next.push(q);
            }
        }
        perms = next;
    }
    let flips: Vec<Vec<bool>> = (0..1u32 << vars)
        .map(|bits| (0..vars).map(|i| bits & (1 << i) != 0).collect())
        .collect();
    perms
        .iter()
        .flat_map(|p| flips.iter().map(move |f| (p.clone(), f.clone())))
        .collect()
}

fn choose<T: Copy>(
    items: &[T],
    k: usize,
    from: usize,
    pick: &mut Vec<T>,
    visit: &mut impl FnMut(&[T]),
) {
    if pick.len() == k {
        visit(pick);
        return;
    }
    for i in from..items.len() {
        pick.push(items[i]);
        choose(items, k, i + 1, pick, visit);
        pick.pop();
    }
}
