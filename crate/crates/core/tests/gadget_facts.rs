//! Structural facts about generated gadget paths, checked by string-level
//! evaluation independent of the term store.

use std::collections::BTreeMap;

use schlice::gadgets::{canonical_formulas, gen_3sat, literal_function, Cnf3, GadgetInstance};
use schlice::paths::{validate_path, PathStatus};
use schlice::random::{random_cnf, rng};
use schlice::{Letter, Symbol};

fn instances() -> Vec<Cnf3> {
    let mut out = Vec::new();
    for n in 1..=2 {
        for m in 1..=2 {
            out.extend(canonical_formulas(n, m));
        }
    }
    let mut r = rng(11);
    out.extend((0..5).map(|_| random_cnf(&mut r, 3, 4)));
    out
}

/// Runs the path on strings; calls `visit` with the environment before each letter.
fn walk(
    inst: &GadgetInstance,
    mut visit: impl FnMut(&BTreeMap<String, String>, &Letter),
) -> BTreeMap<String, String> {
    let mut env: BTreeMap<String, String> = BTreeMap::new();
    for l in inst.path.iter() {
        visit(&env, l);
        if let Letter::Assign { target, func, args } = l {
            let vals: Vec<String> = args
                .iter()
                .map(|a| {
                    env.get(a.as_str())
                        .cloned()
                        .unwrap_or_else(|| a.to_string())
                })
                .collect();
            env.insert(target.to_string(), format!("{func}({})", vals.join(",")));
        }
    }
    env
}

fn literal_symbols(n: usize) -> Vec<String> {
    (1..=n)
        .flat_map(|i| [literal_function(i, true), literal_function(i, false)])
        .collect()
}

fn mentions(term: &str, func: &str) -> bool {
    term.match_indices(&format!("{func}("))
        .any(|(i, _)| i == 0 || !term[..i].ends_with(|c: char| c.is_alphanumeric() || c == '_'))
}

#[test]
fn path_is_terminal_with_the_label() {
    for f in instances() {
        let inst = gen_3sat(&f);
        let full = inst.path.with(Letter::Label(Symbol::new("end")));
        assert_eq!(
            validate_path(&inst.schema, &full),
            PathStatus::Terminal,
            "{f}"
        );
        inst.criterion().unwrap_or_else(|e| panic!("{f}: {e}"));
        let n = f.vars();
        assert_eq!(
            inst.loop_entries(),
            4 + 3 * n + 6 * n * (n - 1) + f.clauses().len()
        );
    }
}

#[test]
fn fact_a_every_v_and_b_assignment_is_used() {
    for f in instances() {
        let inst = gen_3sat(&f);
        for func in ["H", "F_linkreset", "F_test", "g_link", "g_reset"] {
            assert!(
                inst.path
                    .iter()
                    .any(|l| matches!(l, Letter::Assign { func: g, .. } if g.as_str() == func)),
                "{f}: {func} missing"
            );
        }
    }
}

#[test]
fn loop_entries_equal_h_nesting_depth() {
    for f in instances() {
        let inst = gen_3sat(&f);
        let env = walk(&inst, |_, _| {});
        let v = &env["v"];
        let depth = v
            .match_indices("H(")
            .filter(|(i, _)| *i == 0 || !v[..*i].ends_with('_'))
            .count();
        assert_eq!(depth, inst.loop_entries(), "{f}");
    }
}

#[test]
fn fact_c_no_bad_test_terms() {
    for f in instances() {
        let inst = gen_3sat(&f);
        let mut forbidden = vec!["g_bad()".to_string()];
        for i in 1..=f.vars() {
            forbidden.push(format!(
                "{}(g_link({}(g_reset())))",
                literal_function(i, false),
                literal_function(i, true)
            ));
        }
        walk(&inst, |env, l| {
            if let Letter::Pred { pred, args, .. } = l {
                if pred.as_str() == "q_test" {
                    let x = env
                        .get(args[0].as_str())
                        .cloned()
                        .unwrap_or_else(|| args[0].to_string());
                    assert!(!forbidden.contains(&x), "{f}: q_test({x})");
                }
            }
        });
    }
}

#[test]
fn fact_d_v_never_mentions_literal_functions() {
    for f in instances() {
        let inst = gen_3sat(&f);
        let lits = literal_symbols(f.vars());
        let check = |env: &BTreeMap<String, String>| {
            if let Some(v) = env.get("v") {
                for g in &lits {
                    assert!(!mentions(v, g), "{f}: v = {v} mentions {g}");
                }
            }
        };
        let end = walk(&inst, |env, _| check(env));
        check(&end);
    }
}
