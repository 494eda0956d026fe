//! Property tests over seeded random linear schemas and criteria.

use std::collections::BTreeSet;

use proptest::prelude::*;

use schlice::herbrand::{
    are_compatible, consequences, is_executable, run_predicate_free, HerbrandState, TermStore,
};
use schlice::model::{check_linear, is_quotient, retain_sites, QuotientLattice};
use schlice::paths::{
    enumerate_paths, is_l_reducible, next_letters, project, simple_l_reductions, validate_path,
    PathCursor, PathStatus,
};
use schlice::random::{random_criterion, random_schema, rng, RandomCriterion, RANDOM_LABEL};
use schlice::slicer::{check_ds, check_pfds, check_pfds_definitional, SliceCriterion};
use schlice::syntax::{parse_path, print_schema, schema_from_str};
use schlice::{Letter, Path, Schema, SiteId};

fn is_invalid(st: &PathStatus) -> bool {
    matches!(st, PathStatus::Invalid { .. })
}

fn criterion(seed: u64) -> RandomCriterion {
    random_criterion(&mut rng(seed), 11, 20)
}

fn slice_criterion(rc: &RandomCriterion) -> SliceCriterion {
    SliceCriterion::new(
        rc.schema.clone(),
        rc.path.clone(),
        RANDOM_LABEL,
        rc.vars.clone(),
    )
    .unwrap()
}

fn label_site(s: &Schema) -> SiteId {
    s.statements()
        .into_iter()
        .find(|x| matches!(x, Schema::Label { .. }))
        .and_then(Schema::site)
        .unwrap()
}

fn quotients(s: &Schema) -> Vec<Schema> {
    let lattice = QuotientLattice::new(s, &BTreeSet::from([label_site(s)]), 24).unwrap();
    lattice
        .masks_descending()
        .into_iter()
        .map(|m| lattice.build(m))
        .collect()
}

/// Number of quotients by structural recursion: a statement is either
/// deleted or kept with any quotient of each of its parts.
fn count_quotients(s: &Schema) -> usize {
    match s {
        Schema::Skip => 1,
        Schema::Label { .. } | Schema::Assign { .. } => 2,
        Schema::Seq(items) => items.iter().map(count_quotients).product(),
        Schema::If {
            then_part,
            else_part,
            ..
        } => 1 + count_quotients(then_part) * count_quotients(else_part),
        Schema::While { body, .. } => 1 + count_quotients(body),
    }
}

/// Walks the schema with random branches, ignoring feasibility.
fn walk(seed: u64, s: &Schema, max: usize) -> Path {
    use rand::Rng;
    let mut r = rng(seed);
    let mut c = PathCursor::new(s);
    let mut p = Path::new();
    while p.len() < max {
        match c.step(r.gen_bool(0.6)) {
            Some(l) => p.push(l),
            None => break,
        }
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn generated_schemas_are_linear(seed in any::<u64>()) {
        let s = random_schema(&mut rng(seed), 11);
        prop_assert!(check_linear(&s).is_linear());
        prop_assert!(s.statements().len() <= 12);
    }

    #[test]
    fn schema_text_round_trips(seed in any::<u64>()) {
        let s = random_schema(&mut rng(seed), 11);
        let text = print_schema(&s);
        let back = schema_from_str(&text).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(print_schema(&back), text);
    }

    #[test]
    fn path_text_round_trips(seed in any::<u64>()) {
        let s = random_schema(&mut rng(seed), 11);
        let p = walk(seed, &s, 20);
        prop_assert_eq!(parse_path(&p.to_string(), &s).unwrap(), p);
    }

    #[test]
    fn lattice_yields_exactly_the_quotients(seed in any::<u64>()) {
        let s = random_schema(&mut rng(seed), 11);
        let all = QuotientLattice::new(&s, &BTreeSet::new(), 24).unwrap();
        let masks = all.masks_descending();
        prop_assert_eq!(masks.len(), count_quotients(&s));
        prop_assert_eq!(masks[0], all.full_mask());
        let mut seen = BTreeSet::new();
        for m in masks {
            let q = all.build(m);
            let deleted = is_quotient(&q, &s);
            prop_assert!(deleted.is_some());
            prop_assert!(seen.insert(print_schema(&q)));
        }
    }

    #[test]
    fn deletion_is_a_quotient_and_transitive(seed in any::<u64>(), pick in any::<u64>()) {
        let s = random_schema(&mut rng(seed), 11);
        let sites = s.sites();
        let a = sites[(pick as usize) % sites.len()];
        let b = sites[(pick as usize / 7) % sites.len()];
        let q1 = retain_sites(&s, &|x| x != a);
        let q2 = retain_sites(&q1, &|x| x != b);
        prop_assert!(is_quotient(&q1, &s).is_some());
        prop_assert!(is_quotient(&q2, &q1).is_some());
        prop_assert!(is_quotient(&q2, &s).is_some());
    }

    #[test]
    fn next_letters_are_deterministic(seed in any::<u64>()) {
        let s = random_schema(&mut rng(seed), 11);
        let p = walk(seed, &s, 20);
        for k in 0..=p.len() {
            let ls = next_letters(&s, &p.prefix(k)).unwrap();
            let ok = match ls.as_slice() {
                [] => k == p.len(),
                [one] => !one.is_pred(),
                [Letter::Pred { pred: a, branch: true, .. }, Letter::Pred { pred: b, branch: false, .. }] => a == b,
                _ => false,
            };
            prop_assert!(ok, "after {}: {:?}", p.prefix(k), ls);
            if k < p.len() {
                prop_assert!(ls.contains(&p[k]));
            }
        }
    }

    #[test]
    fn prefixes_of_paths_are_paths(seed in any::<u64>()) {
        let s = random_schema(&mut rng(seed), 11);
        for e in enumerate_paths(&s, 8) {
            for k in 0..=e.path.len() {
                let st = validate_path(&s, &e.path.prefix(k));
                prop_assert!(!is_invalid(&st));
            }
            prop_assert_eq!(validate_path(&s, &e.path) == PathStatus::Terminal, e.terminal);
        }
    }

    #[test]
    fn state_composes_over_concatenation(seed in any::<u64>(), cut in any::<usize>()) {
        let s = random_schema(&mut rng(seed), 11);
        let p = walk(seed, &s, 20);
        let k = cut % (p.len() + 1);
        let (a, b) = (p.prefix(k), Path::from_iter(p[k..].iter().cloned()));
        let store = TermStore::new();
        let whole = run_predicate_free(&store, &p, HerbrandState::natural());
        let parts = run_predicate_free(&store, &b, run_predicate_free(&store, &a, HerbrandState::natural()));
        prop_assert!(whole.same_as(&parts, &store));
        prop_assert_eq!(p.prefix(k).concat(&b), p);
    }

    #[test]
    fn consequences_grow_with_prefixes(seed in any::<u64>()) {
        let s = random_schema(&mut rng(seed), 11);
        let p = walk(seed, &s, 20);
        let store = TermStore::new();
        let all = consequences(&store, &s, &p).unwrap();
        let executable = is_executable(&store, &s, &p).unwrap().is_consistent();
        for k in 0..=p.len() {
            let pre = consequences(&store, &s, &p.prefix(k)).unwrap();
            prop_assert_eq!(&all[..pre.len()], &pre[..]);
            if executable {
                prop_assert!(is_executable(&store, &s, &p.prefix(k)).unwrap().is_consistent());
            }
        }
    }

    #[test]
    fn self_compatibility_is_executability(seed in any::<u64>()) {
        let s = random_schema(&mut rng(seed), 11);
        let p = walk(seed, &s, 20);
        let store = TermStore::new();
        let exe = is_executable(&store, &s, &p).unwrap().is_consistent();
        prop_assert_eq!(are_compatible(&store, &s, &p, &s, &p).unwrap().is_consistent(), exe);
    }

    #[test]
    fn projection_is_a_path_of_the_quotient(seed in any::<u64>()) {
        let rc = criterion(seed);
        let full = rc.path.with(Letter::Label(schlice::Symbol::new(RANDOM_LABEL)));
        for q in quotients(&rc.schema).into_iter().take(64) {
            let proj = project(&rc.schema, &q, &full).unwrap();
            prop_assert!(!is_invalid(&validate_path(&q, &proj)), "{} in {}", proj, print_schema(&q));
            prop_assert!(proj.len() <= full.len());
        }
    }

    #[test]
    fn reductions_stay_in_the_schema(seed in any::<u64>()) {
        let s = random_schema(&mut rng(seed), 11);
        let p = walk(seed, &s, 20);
        let terminal = validate_path(&s, &p) == PathStatus::Terminal;
        for r in simple_l_reductions(&s, &p, Some(RANDOM_LABEL)).unwrap() {
            let st = validate_path(&s, &r.path);
            prop_assert!(!is_invalid(&st));
            prop_assert_eq!(st == PathStatus::Terminal, terminal);
            prop_assert!(r.path.len() <= p.len());
            prop_assert_eq!(r.path.count_label(RANDOM_LABEL), p.count_label(RANDOM_LABEL));
            let chain = is_l_reducible(&s, &p, &r.path, Some(RANDOM_LABEL)).unwrap();
            prop_assert!(chain.is_some());
        }
        prop_assert_eq!(is_l_reducible(&s, &p, &p, Some(RANDOM_LABEL)).unwrap(), Some(Vec::new()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn checkers_agree_and_pfds_implies_ds(seed in any::<u64>()) {
        let rc = criterion(seed);
        let c = slice_criterion(&rc);
        prop_assert!(check_pfds(&c, c.schema()).unwrap().accepted);
        prop_assert!(check_ds(&c, c.schema()).unwrap().accepted);
        for q in quotients(c.schema()) {
            let fast = check_pfds(&c, &q).unwrap();
            let slow = check_pfds_definitional(&c, &q, 0).unwrap();
            prop_assert_eq!(fast.accepted, slow.accepted, "{}", print_schema(&q));
            if fast.accepted {
                prop_assert!(check_ds(&c, &q).unwrap().accepted, "{}", print_schema(&q));
            }
        }
    }
}
