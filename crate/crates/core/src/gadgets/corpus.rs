//! The worked examples as fixtures with their expected results.

use crate::herbrand::final_term;
use crate::model::{Path, Schema};
use crate::paths::{validate_path, PathStatus};
use crate::slicer::{
    check_ds, check_pfds, find_slices, SearchGoal, SliceCriterion, SliceError, SliceMode,
};
use crate::symbol::{Symbol, Var};
use crate::syntax::{parse_path, schema_from_str};

use super::cnf::{Cnf3, Literal};
use super::np_hard::{gen_3sat, GADGET_LABEL};

pub const BRANCH_SCHEMA: &str = "u := h(); if p(w) { v := f(u); } else { v := g(); }";

pub const LOOP_SCHEMA: &str =
    "while p(w) { w := g(w); v := f(u); if q(w,t) { u := h(u); } t := H(t); } label end;";
pub const LOOP_PATH: &str = "p:T g f q:T h H p:T g f q:T h H p:F";
/// The loop example with `t := H(t)` deleted.
pub const LOOP_NO_H: &str =
    "while p(w) { w := g(w); v := f(u); if q(w,t) { u := h(u); } } label end;";
/// The path the projected criterion path reduces to in [`LOOP_NO_H`].
pub const LOOP_REDUCED: &str = "p:T g f q:T h p:T g f q:F p:F";

pub const ANTICHAIN_SCHEMA: &str = "while P(v) { \
    if Q(v) { \
        if q(v) { x := g_good(); v := G_good(x,v); } else { x := g_bad(); v := G_bad(x,v); } \
        if s_1(v) { x := g_1(); } \
        if s_2(v) { x := g_2(); } \
        if t(x) { v := H(v); } \
    } \
    v := J(v); \
} label end;";
/// Five loop entries: `g_good`; `g_good, g_1`; `g_good, g_2`; `g_bad, g_1, g_2`; `⟨Q,F⟩`.
pub const ANTICHAIN_PATH: &str = "\
    P:T Q:T q:T g_good G_good s_1:F s_2:F t:T H J \
    P:T Q:T q:T g_good G_good s_1:T g_1 s_2:F t:T H J \
    P:T Q:T q:T g_good G_good s_1:F s_2:T g_2 t:T H J \
    P:T Q:T q:F g_bad G_bad s_1:T g_1 s_2:T g_2 t:T H J \
    P:T Q:F J \
    P:F";

/// Deletes statements headed by the given symbols, with their subtrees.
pub fn delete_symbols(schema: &Schema, symbols: &[&str]) -> Schema {
    let gone: Vec<_> = schema
        .statements()
        .into_iter()
        .filter(|s| s.head().is_some_and(|h| symbols.contains(&h.as_str())))
        .filter_map(Schema::site)
        .collect();
    crate::model::retain_sites(schema, &|s| !gone.contains(&s))
}

/// An expected verdict of one checker on one quotient.
#[derive(Clone, Debug)]
pub struct Expectation {
    pub name: String,
    pub quotient: Schema,
    pub mode: SliceMode,
    pub accepted: bool,
    /// Expected `kind=` of a rejection.
    pub kind: Option<&'static str>,
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub schema: Schema,
    /// The criterion path first, then any further paths of interest; a
    /// missing trailing label letter is implied.
    pub paths: Vec<Path>,
    pub vars: Vec<Var>,
    /// Expected final terms after the criterion path.
    pub terms: Vec<(Var, String)>,
    pub verdicts: Vec<Expectation>,
    /// Expected answer to the non-trivial existence search, per mode.
    pub existence: Vec<(SliceMode, bool)>,
    /// Lower bound on the size of the minimal path-faithful antichain.
    pub min_antichain: Option<usize>,
}

/// One line of a corpus run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub fixture: &'static str,
    pub check: String,
    pub expected: String,
    pub actual: String,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.expected == self.actual
    }

    /// `PASS|FAIL <fixture> <check> expected=<..> actual=<..>`
    pub fn line(&self) -> String {
        format!(
            "{} {} {} expected={} actual={}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.fixture,
            self.check,
            self.expected,
            self.actual
        )
    }
}

fn mode_name(m: SliceMode) -> &'static str {
    match m {
        SliceMode::Pfds => "pfds",
        SliceMode::Ds => "ds",
    }
}

impl Fixture {
    /// The end-slice criterion on the first path.
    pub fn criterion(&self) -> Result<SliceCriterion, SliceError> {
        SliceCriterion::end_slice(
            self.schema.clone(),
            self.paths[0].clone(),
            GADGET_LABEL,
            self.vars.iter().cloned(),
        )
    }

    /// Runs every expectation of the fixture.
    pub fn evaluate(&self) -> Result<Vec<Outcome>, SliceError> {
        let mut out = Vec::new();
        let mut push = |check: String, expected: String, actual: String| {
            out.push(Outcome {
                fixture: self.name,
                check,
                expected,
                actual,
            })
        };
        let label = crate::model::Letter::Label(Symbol::new(GADGET_LABEL));
        for (k, p) in self.paths.iter().enumerate() {
            let full = if self.schema.contains_label(GADGET_LABEL) && p.last() != Some(&label) {
                p.with(label.clone())
            } else {
                p.clone()
            };
            let status = match validate_path(&self.schema, &full) {
                PathStatus::Terminal => "terminal".to_string(),
                PathStatus::Prefix => "prefix".to_string(),
                PathStatus::Invalid { position } => format!("invalid@{position}"),
            };
            push(format!("path{k}"), "terminal".into(), status);
        }
        let c = self.criterion()?;
        for (v, expected) in &self.terms {
            let t = final_term(c.store(), c.schema(), c.path(), v)?;
            push(format!("term:{v}"), expected.clone(), c.store().render(t));
        }
        for e in &self.verdicts {
            let verdict = match e.mode {
                SliceMode::Pfds => check_pfds(&c, &e.quotient)?,
                SliceMode::Ds => check_ds(&c, &e.quotient)?,
            };
            let show = |accepted: bool, kind: Option<&str>| match (accepted, kind) {
                (true, _) => "ACCEPT".to_string(),
                (false, Some(k)) => format!("REJECT:{k}"),
                (false, None) => "REJECT".to_string(),
            };
            let actual_kind = verdict.witness.as_ref().map(|w| w.kind());
            push(
                format!("{}:{}", mode_name(e.mode), e.name),
                show(e.accepted, e.kind),
                show(verdict.accepted, e.kind.and(actual_kind)),
            );
        }
        for &(mode, expected) in &self.existence {
            let r = find_slices(&c, mode, SearchGoal::ExistsNonTrivial, None)?;
            push(
                format!("exists:{}", mode_name(mode)),
                expected.to_string(),
                r.exists().to_string(),
            );
        }
        if let Some(min) = self.min_antichain {
            let r = find_slices(&c, SliceMode::Pfds, SearchGoal::AllMinimal, None)?;
            let sets: Vec<String> = r
                .symbol_sets()
                .iter()
                .map(|s| s.iter().map(Symbol::as_str).collect::<Vec<_>>().join(","))
                .collect();
            push(
                "minimal:pfds".into(),
                format!(">={min}"),
                if sets.len() >= min {
                    format!(">={min}")
                } else {
                    sets.len().to_string()
                },
            );
        }
        Ok(out)
    }
}

fn parse(text: &str) -> Schema {
    schema_from_str(text).expect("fixture schema parses")
}

fn path(text: &str, s: &Schema) -> Path {
    parse_path(text, s).expect("fixture path parses")
}

fn expect(
    name: &str,
    quotient: Schema,
    mode: SliceMode,
    accepted: bool,
    kind: Option<&'static str>,
) -> Expectation {
    Expectation {
        name: name.to_string(),
        quotient,
        mode,
        accepted,
        kind,
    }
}

pub fn branch_example() -> Fixture {
    let schema = parse(BRANCH_SCHEMA);
    let with_label = parse(&format!("{BRANCH_SCHEMA} label end;"));
    Fixture {
        name: "branch",
        paths: vec![path("h p:T f", &schema), path("h p:F g", &schema)],
        vars: vec![Symbol::new("v")],
        terms: vec![
            (Symbol::new("v"), "f(h())".into()),
            (Symbol::new("u"), "h()".into()),
        ],
        verdicts: vec![
            expect("self", with_label.clone(), SliceMode::Pfds, true, None),
            expect(
                "no-g",
                delete_symbols(&with_label, &["g"]),
                SliceMode::Pfds,
                true,
                None,
            ),
            expect(
                "no-h",
                delete_symbols(&with_label, &["h"]),
                SliceMode::Pfds,
                false,
                Some("mismatch"),
            ),
        ],
        existence: vec![(SliceMode::Pfds, true)],
        min_antichain: None,
        schema,
    }
}

pub fn loop_example() -> Fixture {
    let schema = parse(LOOP_SCHEMA);
    let no_h = parse(LOOP_NO_H);
    Fixture {
        name: "loop",
        paths: vec![path(LOOP_PATH, &schema)],
        vars: vec![Symbol::new("v")],
        terms: vec![
            (Symbol::new("v"), "f(h(u))".into()),
            (Symbol::new("u"), "h(h(u))".into()),
        ],
        verdicts: vec![
            expect("self", schema.clone(), SliceMode::Pfds, true, None),
            expect("self", schema.clone(), SliceMode::Ds, true, None),
            expect(
                "no-H",
                no_h.clone(),
                SliceMode::Pfds,
                false,
                Some("consequence"),
            ),
            expect("no-H", no_h, SliceMode::Ds, true, None),
            expect(
                "no-f",
                delete_symbols(&schema, &["f"]),
                SliceMode::Ds,
                false,
                Some("mismatch"),
            ),
        ],
        existence: vec![(SliceMode::Pfds, false), (SliceMode::Ds, true)],
        min_antichain: None,
        schema,
    }
}

pub fn antichain_example() -> Fixture {
    let schema = parse(ANTICHAIN_SCHEMA);
    let s1 = delete_symbols(&schema, &["s_2"]);
    let s2 = delete_symbols(&schema, &["s_1"]);
    let neither = delete_symbols(&schema, &["s_1", "s_2"]);
    Fixture {
        name: "antichain",
        paths: vec![path(ANTICHAIN_PATH, &schema)],
        vars: vec![Symbol::new("v")],
        terms: vec![],
        verdicts: vec![
            expect("S1", s1.clone(), SliceMode::Pfds, true, None),
            expect("S2", s2.clone(), SliceMode::Pfds, true, None),
            expect("S1", s1, SliceMode::Ds, true, None),
            expect("S2", s2, SliceMode::Ds, true, None),
            expect("no-s1-s2", neither.clone(), SliceMode::Pfds, false, None),
            expect("no-s1-s2", neither, SliceMode::Ds, false, None),
        ],
        existence: vec![(SliceMode::Pfds, true), (SliceMode::Ds, true)],
        min_antichain: Some(2),
        schema,
    }
}

/// The hardness gadget for the one-variable formula `θ1 ∨ θ1 ∨ θ1`.
pub fn np_hard_n1() -> Fixture {
    let cnf = Cnf3::new(1, vec![[Literal::pos(1); 3]]).expect("well-formed");
    let inst = gen_3sat(&cnf);
    let witness = inst.valuation_quotient(&[true]);
    let wrong = inst.valuation_quotient(&[false]);
    Fixture {
        name: "np-hard-n1",
        paths: vec![inst
            .path
            .with(crate::model::Letter::Label(Symbol::new(GADGET_LABEL)))],
        vars: vec![Symbol::new("v")],
        terms: vec![],
        verdicts: vec![
            expect(
                "valuation-true",
                witness.clone(),
                SliceMode::Pfds,
                true,
                None,
            ),
            expect("valuation-true", witness, SliceMode::Ds, true, None),
            expect(
                "valuation-false",
                wrong,
                SliceMode::Pfds,
                false,
                Some("consequence"),
            ),
        ],
        existence: vec![(SliceMode::Pfds, true), (SliceMode::Ds, true)],
        min_antichain: None,
        schema: inst.schema,
    }
}

/// Every worked-example fixture.
pub fn example_corpus() -> Vec<Fixture> {
    vec![
        branch_example(),
        loop_example(),
        antichain_example(),
        np_hard_n1(),
    ]
}
