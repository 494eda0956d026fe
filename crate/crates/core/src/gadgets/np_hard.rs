//! The 3SAT hardness gadget: a single loop whose body offers one guarded
//! assignment per literal, and a terminating path whose loop iterations make
//! any non-trivial slice choose one literal per variable consistently with
//! every clause.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Range;

use crate::model::{retain_sites, Path, Schema};
use crate::paths::PathCursor;
use crate::slicer::{check_pfds, find_slices, SearchGoal, SliceCriterion, SliceError, SliceMode};
use crate::symbol::Symbol;
use crate::syntax::CriterionSpec;

use super::cnf::{brute_force_sat, Cnf3};
use super::GadgetError;

/// Criterion label appended after the loop.
pub const GADGET_LABEL: &str = "end";
/// Criterion variable.
pub const GADGET_VAR: &str = "v";

/// Name of the assignment for literal `θ_i` (`positive`) or `¬θ_i`; the
/// primed symbols of the construction carry a `p` suffix.
pub fn literal_function(i: usize, positive: bool) -> String {
    if positive {
        format!("g_{i}")
    } else {
        format!("g_{i}p")
    }
}

/// Name of the predicate guarding [`literal_function`].
pub fn literal_predicate(i: usize, positive: bool) -> String {
    if positive {
        format!("q_{i}")
    } else {
        format!("q_{i}p")
    }
}

/// The kind of one loop iteration of the gadget path. Variables and clauses
/// are numbered from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PathType {
    /// Set-up iterations 1–3 that fix the terms reachable through `b`.
    Init(u8),
    /// `g_good` then the test.
    Good,
    /// `g_good`, `g_reset`, `g_i`, test.
    Positive(usize),
    /// `g_good`, `g_reset`, `g_i'`, test.
    Negative(usize),
    /// `g_good`, `g_link`, `g_i'`, test.
    Link(usize),
    /// Three iterations per ordered pair `i ≠ j`; `primed` uses `g_j'` in the third.
    Pair {
        i: usize,
        j: usize,
        step: u8,
        primed: bool,
    },
    /// `g_bad`, `g_reset`, the clause's literal functions, test.
    Clause(usize),
}

impl fmt::Display for PathType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathType::Init(k) => write!(f, "0.{k}"),
            PathType::Good => write!(f, "1"),
            PathType::Positive(i) => write!(f, "2[{i}]"),
            PathType::Negative(i) => write!(f, "2'[{i}]"),
            PathType::Link(i) => write!(f, "3[{i}]"),
            PathType::Pair { i, j, step, primed } => {
                let p = if *primed { "'" } else { "" };
                write!(f, "4{p}.{step}[{i},{j}]")
            }
            PathType::Clause(k) => write!(f, "5[{k}]"),
        }
    }
}

/// A generated gadget: schema, criterion path and iteration bookkeeping.
#[derive(Clone, Debug)]
pub struct GadgetInstance {
    pub cnf: Cnf3,
    /// The gadget loop followed by `label end;`.
    pub schema: Schema,
    /// The terminating criterion path, without the label letter.
    pub path: Path,
    /// Each loop iteration with the letter range it occupies in `path`.
    pub iterations: Vec<(PathType, Range<usize>)>,
}

impl GadgetInstance {
    /// Number of times the path enters the loop body.
    pub fn loop_entries(&self) -> usize {
        self.iterations.len()
    }

    /// The end-slice criterion `(ρ end, {v})`.
    pub fn criterion(&self) -> Result<SliceCriterion, SliceError> {
        SliceCriterion::new(
            self.schema.clone(),
            self.path.clone(),
            GADGET_LABEL,
            [Symbol::new(GADGET_VAR)],
        )
    }

    pub fn criterion_spec(&self) -> CriterionSpec {
        CriterionSpec {
            label: Some(Symbol::new(GADGET_LABEL)),
            vars: BTreeSet::from([Symbol::new(GADGET_VAR)]),
        }
    }

    /// The quotient keeping `q_i`/`g_i` when `valuation[i-1]` holds and
    /// `q_i'`/`g_i'` otherwise, and everything else.
    pub fn valuation_quotient(&self, valuation: &[bool]) -> Schema {
        let dropped: BTreeSet<String> = valuation
            .iter()
            .enumerate()
            .map(|(k, &b)| literal_predicate(k + 1, !b))
            .collect();
        let gone: BTreeSet<_> = self
            .schema
            .statements()
            .into_iter()
            .filter(|s| s.head().is_some_and(|h| dropped.contains(h.as_str())))
            .filter_map(Schema::site)
            .collect();
        retain_sites(&self.schema, &|s| !gone.contains(&s))
    }
}

fn gadget_schema(n: usize) -> Schema {
    let guarded = |pred: &str, target: &str, func: &str, args: &[&str]| {
        Schema::if_then(pred, &["v"], Schema::assign(target, func, args))
    };
    let mut body = vec![
        Schema::assign("v", "H", &["v"]),
        guarded("q_good", "x", "g_good", &[]),
        guarded("q_bad", "x", "g_bad", &[]),
        guarded("q_link", "b", "g_link", &["x"]),
        guarded("q_reset", "b", "g_reset", &[]),
        guarded("Q_linkreset", "v", "F_linkreset", &["b", "v"]),
    ];
    for i in 1..=n {
        for positive in [true, false] {
            body.push(guarded(
                &literal_predicate(i, positive),
                "x",
                &literal_function(i, positive),
                &["b"],
            ));
        }
    }
    body.push(Schema::if_then(
        "Q_test",
        &["v"],
        Schema::if_then("q_test", &["x"], Schema::assign("v", "F_test", &["v"])),
    ));
    Schema::seq([
        Schema::while_loop("p", &["v"], Schema::seq(body)),
        Schema::label(GADGET_LABEL),
    ])
    .numbered()
}

/// Function symbols each iteration passes through, besides `H`.
fn iteration_plan(cnf: &Cnf3) -> Vec<(PathType, Vec<String>)> {
    let n = cnf.vars();
    let s = |names: &[&str]| names.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let with = |mut v: Vec<String>, extra: &[String]| {
        v.extend_from_slice(extra);
        v
    };
    let mut plan = vec![
        (PathType::Init(1), s(&["g_good", "g_link", "F_linkreset"])),
        (PathType::Init(2), s(&["g_reset", "F_linkreset"])),
        (PathType::Init(3), s(&["g_bad", "g_link", "F_linkreset"])),
        (PathType::Good, s(&["g_good", "F_test"])),
    ];
    for i in 1..=n {
        let g = literal_function(i, true);
        plan.push((
            PathType::Positive(i),
            with(s(&["g_good", "g_reset", "F_test"]), &[g]),
        ));
    }
    for i in 1..=n {
        let g = literal_function(i, false);
        plan.push((
            PathType::Negative(i),
            with(s(&["g_good", "g_reset", "F_test"]), &[g]),
        ));
    }
    for i in 1..=n {
        let g = literal_function(i, false);
        plan.push((
            PathType::Link(i),
            with(s(&["g_good", "g_link", "F_test"]), &[g]),
        ));
    }
    for primed in [false, true] {
        for i in 1..=n {
            for j in (1..=n).filter(|&j| j != i) {
                let pair = |step| PathType::Pair { i, j, step, primed };
                let gi = literal_function(i, true);
                let gi_neg = literal_function(i, false);
                let gj = literal_function(j, !primed);
                plan.push((pair(1), with(s(&["g_good", "g_reset"]), &[gi])));
                plan.push((pair(2), with(s(&["g_link"]), &[gi_neg])));
                plan.push((pair(3), with(s(&["g_reset", "F_test"]), &[gj])));
            }
        }
    }
    for (k, clause) in cnf.clauses().iter().enumerate() {
        let lits: Vec<String> = clause
            .iter()
            .map(|l| literal_function(l.var, l.positive))
            .collect();
        plan.push((
            PathType::Clause(k + 1),
            with(s(&["g_bad", "g_reset", "F_test"]), &lits),
        ));
    }
    plan
}

/// Builds the gadget schema and its criterion path for `cnf`.
///
/// Every iteration enters the body with `⟨p,T⟩`, runs `v := H(v)`, and takes
/// each `if` exactly when its then-part assigns through one of the
/// iteration's function symbols; `Q_test` and `q_test` are taken exactly when
/// the iteration passes `F_test`. The path leaves with `⟨p,F⟩`.
pub fn gen_3sat(cnf: &Cnf3) -> GadgetInstance {
    let schema = gadget_schema(cnf.vars());
    let plan = iteration_plan(cnf);
    let mut cursor = PathCursor::new(&schema);
    let mut path = Path::new();
    let mut iterations = Vec::with_capacity(plan.len());
    for (kind, funcs) in plan {
        let start = path.len();
        path.push(cursor.step(true).expect("loop test"));
        while !matches!(cursor.next_statement(), Some(Schema::While { .. })) {
            let stmt = cursor
                .next_statement()
                .expect("loop body ends at the loop test");
            let branch = match stmt {
                Schema::If { then_part, .. } => then_part
                    .statements()
                    .iter()
                    .filter_map(|s| match s {
                        Schema::Assign { func, .. } => Some(func),
                        _ => None,
                    })
                    .any(|f| funcs.iter().any(|g| g == f.as_str())),
                _ => true,
            };
            path.push(cursor.step(branch).expect("statement"));
        }
        iterations.push((kind, start..path.len()));
    }
    path.push(cursor.step(false).expect("loop exit"));
    GadgetInstance {
        cnf: cnf.clone(),
        schema,
        path,
        iterations,
    }
}

/// Outcome of comparing slice existence on a gadget with the SAT oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundTripReport {
    pub satisfying: Option<Vec<bool>>,
    pub pfds_exists: bool,
    pub ds_exists: bool,
    /// Whether the quotient built from the satisfying valuation passed the
    /// path-faithful check; `None` when unsatisfiable.
    pub valuation_slice_accepted: Option<bool>,
    pub loop_entries: usize,
}

impl RoundTripReport {
    pub fn sat(&self) -> bool {
        self.satisfying.is_some()
    }

    /// Both searches agree with the oracle and the valuation quotient, if any, passed.
    pub fn agrees(&self) -> bool {
        self.pfds_exists == self.sat()
            && self.ds_exists == self.sat()
            && self.valuation_slice_accepted != Some(false)
    }
}

/// Generates the gadget for `cnf` and compares non-trivial slice existence,
/// in both modes, with brute-force satisfiability.
pub fn round_trip(cnf: &Cnf3, budget: Option<usize>) -> Result<RoundTripReport, GadgetError> {
    let satisfying = brute_force_sat(cnf)?;
    let inst = gen_3sat(cnf);
    let c = inst.criterion()?;
    let pfds = find_slices(&c, SliceMode::Pfds, SearchGoal::ExistsNonTrivial, budget)?;
    let ds = find_slices(&c, SliceMode::Ds, SearchGoal::ExistsNonTrivial, budget)?;
    let valuation_slice_accepted = match &satisfying {
        Some(v) => Some(check_pfds(&c, &inst.valuation_quotient(v))?.accepted),
        None => None,
    };
    Ok(RoundTripReport {
        satisfying,
        pfds_exists: pfds.exists(),
        ds_exists: ds.exists(),
        valuation_slice_accepted,
        loop_entries: inst.loop_entries(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::Literal;
    use crate::paths::{validate_path, PathStatus};

    fn cnf(n: usize, clauses: Vec<[Literal; 3]>) -> Cnf3 {
        Cnf3::new(n, clauses).unwrap()
    }

    #[test]
    fn loop_entry_count() {
        for n in 1..=3 {
            let f = cnf(n, vec![[Literal::pos(1); 3]; 2]);
            let inst = gen_3sat(&f);
            assert_eq!(inst.loop_entries(), 4 + 3 * n + 6 * n * (n - 1) + 2);
            let full = inst
                .path
                .with(crate::model::Letter::Label(Symbol::new(GADGET_LABEL)));
            assert_eq!(validate_path(&inst.schema, &full), PathStatus::Terminal);
        }
    }

    #[test]
    fn criterion_is_executable() {
        let f = cnf(2, vec![[Literal::pos(1), Literal::neg(2), Literal::pos(2)]]);
        assert!(gen_3sat(&f).criterion().is_ok());
    }

    #[test]
    fn one_variable_round_trips() {
        let sat = cnf(1, vec![[Literal::pos(1); 3]]);
        let r = round_trip(&sat, None).unwrap();
        assert!(r.sat() && r.agrees(), "{r:?}");
        let unsat = cnf(1, vec![[Literal::pos(1); 3], [Literal::neg(1); 3]]);
        let r = round_trip(&unsat, None).unwrap();
        assert!(!r.sat() && r.agrees(), "{r:?}");
    }

    #[test]
    fn type_names() {
        assert_eq!(PathType::Init(2).to_string(), "0.2");
        assert_eq!(PathType::Negative(3).to_string(), "2'[3]");
        let p = PathType::Pair {
            i: 1,
            j: 2,
            step: 3,
            primed: true,
        };
        assert_eq!(p.to_string(), "4'.3[1,2]");
    }
}
