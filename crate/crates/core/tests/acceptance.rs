//! Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned below.
//! Expected values are computed by oracles written here, independently of
//! the library code under test.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use rand::Rng;

use schlice::gadgets::{
    brute_force_sat, canonical_formulas, delete_symbols, example_corpus, round_trip, Cnf3,
    ANTICHAIN_PATH, ANTICHAIN_SCHEMA, BRANCH_SCHEMA, LOOP_NO_H, LOOP_PATH, LOOP_REDUCED,
    LOOP_SCHEMA,
};
use schlice::herbrand::{final_term, TermStore};
use schlice::model::retain_sites;
use schlice::paths::{
    enumerate_paths, is_l_reducible, next_letters, simple_l_reductions, validate_path, PathCursor,
    PathStatus, Reduction,
};
use schlice::random::{
    random_cnf, random_criterion, random_schema, rng, RandomCriterion, RANDOM_LABEL,
};
use schlice::slicer::{
    check_ds, check_pfds, check_pfds_definitional, find_slices, SearchGoal, SliceCriterion,
    SliceMode,
};
use schlice::syntax::{parse_path, schema_from_str};
use schlice::{Letter, Path, Schema, SiteId, Symbol};

const C1_MAX: Duration = Duration::from_secs(1);
const C2_MAX: Duration = Duration::from_secs(10);
const C3_MAX: Duration = Duration::from_secs(5);
const C4_MAX: Duration = Duration::from_secs(60);
const C5_MAX: Duration = Duration::from_secs(600);
const C5_MIN_EXHAUSTIVE: usize = 200;
const C5_RANDOM: usize = 50;
const C5_MAX_DISAGREEMENTS: usize = 0;
const C6_RANDOM: usize = 500;
const C6_MAX_STATEMENTS: usize = 11; // plus the label: at most 12 nodes
const C6_MAX_PATH: usize = 20;
const C6_MAX_DISAGREEMENTS: usize = 0;
const C7_PAIRS: usize = 1000;
const C7_BFS_MAX_LEN: usize = 12;
const C7_MAX_PATH: usize = 20;
const C8_ENUM_LEN: usize = 10;
const C8_MAX_VIOLATIONS: usize = 0;
const C9_ITERATIONS: [usize; 3] = [10, 100, 1000];
const C9_MAX_EXPONENT: f64 = 2.5;
const C9_MAX: Duration = Duration::from_secs(120);
const SEED: u64 = 20_24;

type Outcome = Result<String, String>;

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("branch semantics", c1),
        ("loop PFDS uniqueness", c2),
        ("loop DS strictness gap", c3),
        ("antichain non-unique minima", c4),
        ("3SAT round trip", c5),
        ("checker/oracle equivalence", c6),
        ("reduction suite", c7),
        ("determinism and prefix closure", c8),
        ("PFDS scaling", c9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = run();
        let elapsed = t.elapsed();
        match outcome {
            Ok(msg) => println!("PASS criterion {} ({name}): {msg} [{elapsed:.2?}]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {msg} [{elapsed:.2?}]", i + 1)
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Instant, max: Duration) -> Result<(), String> {
    let e = t.elapsed();
    ensure(e < max, || format!("took {e:.2?}, limit {max:?}"))
}

fn parse(text: &str) -> Schema {
    schema_from_str(text).expect("fixture parses")
}

fn path(text: &str, s: &Schema) -> Path {
    parse_path(text, s).expect("fixture path parses")
}

fn end_criterion(schema: &Schema, rho: &str, vars: &[&str]) -> SliceCriterion {
    let p = path(rho, schema);
    SliceCriterion::end_slice(
        schema.clone(),
        p,
        "end",
        vars.iter().map(|v| Symbol::new(v)),
    )
    .expect("criterion is valid")
}

/// Evaluates a path by string substitution, starting from the natural state.
fn string_eval(letters: &[Letter]) -> BTreeMap<String, String> {
    let mut env: BTreeMap<String, String> = BTreeMap::new();
    for l in letters {
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

/// Every (site, parent site) pair, by direct structural recursion.
fn site_parents(s: &Schema, parent: Option<SiteId>, out: &mut Vec<(SiteId, Option<SiteId>)>) {
    match s {
        Schema::Skip => {}
        Schema::Label { site, .. } | Schema::Assign { site, .. } => out.push((*site, parent)),
        Schema::Seq(items) => items.iter().for_each(|i| site_parents(i, parent, out)),
        Schema::If {
            site,
            then_part,
            else_part,
            ..
        } => {
            out.push((*site, parent));
            site_parents(then_part, Some(*site), out);
            site_parents(else_part, Some(*site), out);
        }
        Schema::While { site, body, .. } => {
            out.push((*site, parent));
            site_parents(body, Some(*site), out);
        }
    }
}

/// Brute-force quotient enumeration: every site subset closed under parents
/// that keeps the label. Independent of the lattice code.
fn all_quotients(schema: &Schema, label: &str) -> Vec<Schema> {
    let mut sites = Vec::new();
    site_parents(schema, None, &mut sites);
    let label_site = schema
        .statements()
        .into_iter()
        .find(|s| matches!(s, Schema::Label { name, .. } if name.as_str() == label))
        .and_then(Schema::site)
        .expect("label present");
    let index: BTreeMap<SiteId, usize> = sites
        .iter()
        .enumerate()
        .map(|(i, (s, _))| (*s, i))
        .collect();
    assert!(sites.len() <= 24, "brute force over {} sites", sites.len());
    let mut out = Vec::new();
    for mask in 0u32..(1 << sites.len()) {
        let kept = |s: SiteId| mask & (1 << index[&s]) != 0;
        if !kept(label_site) {
            continue;
        }
        let closed = sites
            .iter()
            .all(|(s, p)| !kept(*s) || p.is_none_or(|p| kept(p)));
        if closed {
            out.push(retain_sites(schema, &|s| kept(s)));
        }
    }
    out
}

fn symbols(s: &Schema) -> BTreeSet<Symbol> {
    s.head_symbols()
}

fn c1() -> Outcome {
    let t = Instant::now();
    let s = parse(BRANCH_SCHEMA);
    let p = path("h p:T f", &s);
    let store = TermStore::new();
    let v = final_term(&store, &s, &p, &Symbol::new("v")).map_err(|e| e.to_string())?;
    let got = store.render(v);
    let oracle = string_eval(&p)["v"].clone();
    ensure(got == "f(h())", || format!("v = {got}, expected f(h())"))?;
    ensure(oracle == got, || {
        format!("string evaluator gives {oracle}, library {got}")
    })?;
    within(t, C1_MAX)?;
    Ok(format!("v = {got}"))
}

fn c2() -> Outcome {
    let t = Instant::now();
    let s = parse(LOOP_SCHEMA);
    let c = end_criterion(&s, LOOP_PATH, &["v"]);
    let quotients = all_quotients(c.schema(), "end");
    // while{g, f, if{h}, H} with the label kept: 1 + 2·2·3·2.
    ensure(quotients.len() == 25, || {
        format!("{} quotients, expected 25", quotients.len())
    })?;
    let mut accepted = Vec::new();
    for q in &quotients {
        if check_pfds(&c, q).map_err(|e| e.to_string())?.accepted {
            accepted.push(q.clone());
        }
    }
    ensure(accepted.len() == 1 && accepted[0] == *c.schema(), || {
        format!(
            "accepted {:?}",
            accepted.iter().map(symbols).collect::<Vec<_>>()
        )
    })?;
    within(t, C2_MAX)?;
    Ok(format!("{} quotients, only S accepted", quotients.len()))
}

fn c3() -> Outcome {
    let t = Instant::now();
    let s = parse(LOOP_SCHEMA);
    let c = end_criterion(&s, LOOP_PATH, &["v"]);
    let no_h = parse(LOOP_NO_H);
    let verdict = check_ds(&c, &no_h).map_err(|e| e.to_string())?;
    ensure(verdict.accepted, || {
        format!("rejected: {}", verdict.machine_line())
    })?;
    let reduced = path(LOOP_REDUCED, &no_h);
    ensure(verdict.evidence.contains(&reduced), || {
        format!(
            "evidence {:?} lacks {LOOP_REDUCED}",
            verdict
                .evidence
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
        )
    })?;
    let v = string_eval(&reduced)["v"].clone();
    ensure(v == "f(h(u))", || format!("v = {v} after the reduced path"))?;
    let store = TermStore::new();
    let lib = store
        .render(final_term(&store, &no_h, &reduced, &Symbol::new("v")).map_err(|e| e.to_string())?);
    ensure(lib == v, || format!("library gives {lib}"))?;
    within(t, C3_MAX)?;
    Ok(format!("accepted via {LOOP_REDUCED}, v = {v}"))
}

fn c4() -> Outcome {
    let t = Instant::now();
    let s = parse(ANTICHAIN_SCHEMA);
    let c = end_criterion(&s, ANTICHAIN_PATH, &["v"]);
    let report = find_slices(&c, SliceMode::Pfds, SearchGoal::AllMinimal, None)
        .map_err(|e| e.to_string())?;
    let found: Vec<BTreeSet<Symbol>> = report.symbol_sets();
    let s1 = symbols(&delete_symbols(c.schema(), &["s_2"]));
    let s2 = symbols(&delete_symbols(c.schema(), &["s_1"]));
    ensure(found.len() >= 2, || {
        format!("antichain of size {}", found.len())
    })?;
    ensure(found.contains(&s1) && found.contains(&s2), || {
        "S1 or S2 missing".into()
    })?;
    // Oracle: definitional check over every quotient, then minimal elements.
    let accepted: Vec<BTreeSet<Symbol>> = all_quotients(c.schema(), "end")
        .iter()
        .filter(|q| {
            check_pfds_definitional(&c, q, 0)
                .map(|v| v.accepted)
                .unwrap_or(false)
        })
        .map(symbols)
        .collect();
    let mut minimal: Vec<BTreeSet<Symbol>> = accepted
        .iter()
        .filter(|a| !accepted.iter().any(|b| b != *a && b.is_subset(a)))
        .cloned()
        .collect();
    minimal.sort();
    let mut sorted = found.clone();
    sorted.sort();
    ensure(sorted == minimal, || {
        format!(
            "search gives {} minima, oracle {}",
            sorted.len(),
            minimal.len()
        )
    })?;
    let neither = delete_symbols(c.schema(), &["s_1", "s_2"]);
    for (mode, verdict) in [
        ("pfds", check_pfds(&c, &neither)),
        ("ds", check_ds(&c, &neither)),
    ] {
        let v = verdict.map_err(|e| e.to_string())?;
        ensure(!v.accepted, || {
            format!("{mode} accepts the quotient without both s-ifs")
        })?;
    }
    within(t, C4_MAX)?;
    Ok(format!(
        "{} minimal slices including S1 and S2; deleting both rejected",
        found.len()
    ))
}

fn c5() -> Outcome {
    let t = Instant::now();
    let mut formulas: Vec<Cnf3> = Vec::new();
    for n in 1..=3 {
        for m in 1..=4 {
            formulas.extend(canonical_formulas(n, m));
        }
    }
    let exhaustive = formulas.len();
    ensure(exhaustive >= C5_MIN_EXHAUSTIVE, || {
        format!("only {exhaustive} canonical instances")
    })?;
    let mut r = rng(SEED);
    for _ in 0..C5_RANDOM {
        let n = r.gen_range(3..=4);
        let m = r.gen_range(5..=8);
        formulas.push(random_cnf(&mut r, n, m));
    }
    let mut disagreements = Vec::new();
    let mut unsat = 0;
    for f in &formulas {
        // Second oracle: clause order reversed, evaluated directly.
        let sat = (0..1u32 << f.vars()).any(|bits| {
            f.clauses().iter().rev().all(|c| {
                c.iter()
                    .any(|l| ((bits >> (l.var - 1)) & 1 == 1) == l.positive)
            })
        });
        let brute = brute_force_sat(f).map_err(|e| e.to_string())?;
        if brute.is_some() != sat {
            return Err(format!("SAT oracles disagree on {f}"));
        }
        unsat += usize::from(!sat);
        let rep = round_trip(f, None).map_err(|e| format!("{f}: {e}"))?;
        if rep.pfds_exists != sat
            || rep.ds_exists != sat
            || rep.valuation_slice_accepted == Some(false)
        {
            disagreements.push(format!("{f}: {rep:?}"));
        }
    }
    ensure(disagreements.len() <= C5_MAX_DISAGREEMENTS, || {
        format!(
            "{} disagreements, first {}",
            disagreements.len(),
            disagreements[0]
        )
    })?;
    within(t, C5_MAX)?;
    Ok(format!(
        "{exhaustive} canonical + {C5_RANDOM} random instances ({unsat} unsatisfiable), 0 disagreements"
    ))
}

fn c6_population() -> Vec<RandomCriterion> {
    let mut r = rng(SEED + 6);
    (0..C6_RANDOM)
        .map(|_| random_criterion(&mut r, C6_MAX_STATEMENTS, C6_MAX_PATH))
        .collect()
}

/// Compares the two path-faithful checkers on every quotient; returns the
/// number of checks.
fn compare_checkers(
    c: &SliceCriterion,
    label: &str,
    disagreements: &mut Vec<String>,
) -> Result<usize, String> {
    let quotients = all_quotients(c.schema(), label);
    for q in &quotients {
        let fast = check_pfds(c, q).map_err(|e| e.to_string())?.accepted;
        let slow = check_pfds_definitional(c, q, 0)
            .map_err(|e| e.to_string())?
            .accepted;
        if fast != slow {
            disagreements.push(format!(
                "{} on {}",
                c.path(),
                schlice::syntax::print_schema(q)
            ));
        }
    }
    Ok(quotients.len())
}

fn c6() -> Outcome {
    let mut disagreements = Vec::new();
    let mut corpus_checks = 0;
    for f in example_corpus() {
        let c = f.criterion().map_err(|e| e.to_string())?;
        corpus_checks += compare_checkers(&c, "end", &mut disagreements)?;
    }
    let mut random_checks = 0;
    for rc in c6_population() {
        let c = SliceCriterion::new(rc.schema, rc.path, RANDOM_LABEL, rc.vars)
            .map_err(|e| e.to_string())?;
        random_checks += compare_checkers(&c, RANDOM_LABEL, &mut disagreements)?;
    }
    ensure(disagreements.len() <= C6_MAX_DISAGREEMENTS, || {
        format!(
            "{} disagreements, first {}",
            disagreements.len(),
            disagreements[0]
        )
    })?;
    Ok(format!(
        "{corpus_checks} corpus + {random_checks} random quotient checks, 0 disagreements"
    ))
}

/// A random walk that ignores feasibility, stopping at a random length.
/// True branches are favoured so that loops complete several iterations.
fn random_walk(r: &mut impl Rng, s: &Schema, max_len: usize) -> Path {
    let mut cursor = PathCursor::new(s);
    let mut p = Path::new();
    let stop = r.gen_range(max_len / 2..=max_len);
    while p.len() < stop {
        match cursor.step(r.gen_bool(0.65)) {
            Some(l) => p.push(l),
            None => break,
        }
    }
    p
}

fn replays(
    s: &Schema,
    source: &Path,
    target: &Path,
    chain: &[Reduction],
    label: Option<&str>,
) -> bool {
    let mut current = source.clone();
    for step in chain {
        let options = simple_l_reductions(s, &current, label).unwrap_or_default();
        if !options.iter().any(|o| o.path == step.path) {
            return false;
        }
        current = step.path.clone();
    }
    current == *target
}

fn c7() -> Outcome {
    let mut r = rng(SEED + 7);
    let (mut closure_checks, mut bfs_pairs, mut positive, mut negative) = (0, 0, 0, 0);
    for pair in 0..C7_PAIRS {
        let s = random_schema(&mut r, C6_MAX_STATEMENTS);
        let rho = random_walk(&mut r, &s, C7_MAX_PATH);
        let label = if pair % 2 == 0 {
            Some(RANDOM_LABEL)
        } else {
            None
        };
        let status = validate_path(&s, &rho);
        let reductions = simple_l_reductions(&s, &rho, label).map_err(|e| e.to_string())?;
        for red in &reductions {
            closure_checks += 1;
            let st = validate_path(&s, &red.path);
            ensure(!matches!(st, PathStatus::Invalid { .. }), || {
                format!("reduct {} of {rho} is not a path", red.path)
            })?;
            ensure(
                (st == PathStatus::Terminal) == (status == PathStatus::Terminal),
                || format!("terminality changed: {rho} -> {}", red.path),
            )?;
            ensure(red.path.len() <= rho.len(), || {
                format!("{} lengthens {rho}", red.record())
            })?;
            ensure(
                red.path.count_label(RANDOM_LABEL) == rho.count_label(RANDOM_LABEL),
                || format!("label count changed: {rho} -> {}", red.path),
            )?;
        }
        if rho.len() > C7_BFS_MAX_LEN {
            continue;
        }
        bfs_pairs += 1;
        // BFS closure under single reductions.
        let mut reach: BTreeSet<Path> = BTreeSet::from([rho.clone()]);
        let mut frontier = vec![rho.clone()];
        while let Some(p) = frontier.pop() {
            for red in simple_l_reductions(&s, &p, label).map_err(|e| e.to_string())? {
                if reach.insert(red.path.clone()) {
                    frontier.push(red.path);
                }
            }
        }
        let mut targets: BTreeSet<Path> = reach.clone();
        targets.extend(enumerate_paths(&s, rho.len()).take(300).map(|e| e.path));
        for tgt in &targets {
            let got = is_l_reducible(&s, &rho, tgt, label).map_err(|e| e.to_string())?;
            let expected = reach.contains(tgt);
            if expected {
                positive += 1;
            } else {
                negative += 1;
            }
            ensure(got.is_some() == expected, || {
                format!(
                    "is_l_reducible({rho} -> {tgt}) = {}, BFS says {expected}",
                    got.is_some()
                )
            })?;
            if let Some(chain) = got {
                ensure(replays(&s, &rho, tgt, &chain, label), || {
                    format!("witness for {rho} -> {tgt} does not replay")
                })?;
                ensure(tgt.len() <= rho.len(), || {
                    format!("{tgt} longer than {rho}")
                })?;
                ensure(
                    tgt.count_label(RANDOM_LABEL) == rho.count_label(RANDOM_LABEL),
                    || format!("{rho} -> {tgt} changes the label count"),
                )?;
            }
        }
    }
    Ok(format!(
        "{C7_PAIRS} pairs, {closure_checks} closure checks; {bfs_pairs} pairs against BFS: {positive} reducible and {negative} unreachable targets"
    ))
}

fn letter_set_ok(letters: &[Letter]) -> bool {
    match letters {
        [] => true,
        [one] => !one.is_pred(),
        [Letter::Pred {
            pred: a,
            args: x,
            branch: true,
        }, Letter::Pred {
            pred: b,
            args: y,
            branch: false,
        }] => a == b && x == y,
        _ => false,
    }
}

fn c8() -> Outcome {
    let mut violations = Vec::new();
    let mut prefixes = 0;
    for rc in c6_population() {
        let mut words: Vec<Path> = enumerate_paths(&rc.schema, C8_ENUM_LEN)
            .map(|e| e.path)
            .collect();
        words.push(rc.path.clone());
        for w in words {
            for k in 0..=w.len() {
                let pre = w.prefix(k);
                prefixes += 1;
                if matches!(validate_path(&rc.schema, &pre), PathStatus::Invalid { .. }) {
                    violations.push(format!("prefix {pre} invalid"));
                    continue;
                }
                match next_letters(&rc.schema, &pre) {
                    Ok(ls) if letter_set_ok(&ls) => {}
                    Ok(ls) => violations.push(format!("after {pre}: {} letters", ls.len())),
                    Err(e) => violations.push(e.to_string()),
                }
            }
        }
    }
    ensure(violations.len() <= C8_MAX_VIOLATIONS, || {
        format!("{} violations, first {}", violations.len(), violations[0])
    })?;
    Ok(format!("{prefixes} prefixes, 0 violations"))
}

fn c9() -> Outcome {
    let t = Instant::now();
    let s = parse(LOOP_SCHEMA);
    let mut points = Vec::new();
    for k in C9_ITERATIONS {
        let rho = format!("{}p:F", "p:T g f q:T h H ".repeat(k));
        let c = end_criterion(&s, &rho, &["v"]);
        let reps = if k < 1000 { 20 } else { 5 };
        let mut best = Duration::MAX;
        for _ in 0..reps {
            let start = Instant::now();
            let v = check_pfds(&c, c.schema()).map_err(|e| e.to_string())?;
            best = best.min(start.elapsed());
            ensure(v.accepted, || format!("S rejected for k={k}"))?;
        }
        points.push(((c.path().len() + 1) as f64, best.as_secs_f64()));
    }
    // Least-squares slope of log time against log length.
    let n = points.len() as f64;
    let (xs, ys): (Vec<f64>, Vec<f64>) = points.iter().map(|(l, t)| (l.ln(), t.ln())).unzip();
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let slope = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - mx) * (y - my))
        .sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    ensure(slope < C9_MAX_EXPONENT, || {
        format!("fit exponent {slope:.2}")
    })?;
    within(t, C9_MAX)?;
    let times: Vec<String> = points
        .iter()
        .map(|(l, t)| format!("{l}:{:.2?}", Duration::from_secs_f64(*t)))
        .collect();
    Ok(format!(
        "fit exponent {slope:.2} over lengths {}",
        times.join(" ")
    ))
}
