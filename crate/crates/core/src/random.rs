//! Seeded generators for linear schemas, executable criterion paths and
//! 3-CNF formulas.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use crate::gadgets::{Cnf3, Literal};
use crate::herbrand::{ConsequenceSet, HerbrandState, PredTerm, TermStore};
use crate::model::{Letter, Path, Schema};
use crate::paths::PathCursor;
use crate::symbol::{Symbol, Var};

/// Label used by generated criteria.
pub const RANDOM_LABEL: &str = "l";
const VARS: [&str; 4] = ["u", "v", "w", "x"];

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

struct Gen<'r, R> {
    rng: &'r mut R,
    budget: usize,
    next: usize,
}

impl<R: Rng> Gen<'_, R> {
    fn fresh(&mut self, prefix: &str) -> String {
        self.next += 1;
        format!("{prefix}{}", self.next)
    }

    fn args(&mut self, max: usize) -> Vec<&'static str> {
        let k = self.rng.gen_range(0..=max);
        (0..k)
            .map(|_| *VARS.choose(self.rng).expect("non-empty"))
            .collect()
    }

    fn block(&mut self, depth: usize) -> Schema {
        let mut items = Vec::new();
        while self.budget > 0 && (items.is_empty() || self.rng.gen_bool(0.6)) {
            items.push(self.statement(depth));
        }
        Schema::seq(items)
    }

    fn statement(&mut self, depth: usize) -> Schema {
        self.budget -= 1;
        let roll = if depth >= 2 {
            0
        } else {
            self.rng.gen_range(0..10)
        };
        match roll {
            0..=5 => {
                let f = self.fresh("f");
                let target = *VARS.choose(self.rng).expect("non-empty");
                let args = self.args(2);
                Schema::assign(target, &f, &args)
            }
            6..=8 => {
                let p = self.fresh("p");
                let args = self.args(2);
                let then_part = self.block(depth + 1);
                let else_part = if self.rng.gen_bool(0.5) && self.budget > 0 {
                    self.block(depth + 1)
                } else {
                    Schema::skip()
                };
                Schema::if_else(&p, &args, then_part, else_part)
            }
            _ => {
                let p = self.fresh("p");
                let args = self.args(2);
                let body = self.block(depth + 1);
                Schema::while_loop(&p, &args, body)
            }
        }
    }
}

/// A random linear schema with at most `max_statements` statements besides
/// one `label l;`, placed at a random top-level position.
pub fn random_schema(rng: &mut impl Rng, max_statements: usize) -> Schema {
    let mut g = Gen {
        rng,
        budget: max_statements.max(1),
        next: 0,
    };
    let mut items = g.block(0).items().to_vec();
    let at = g.rng.gen_range(0..=items.len());
    items.insert(at, Schema::label(RANDOM_LABEL));
    Schema::seq(items).numbered()
}

/// A generated end-of-path criterion.
#[derive(Clone, Debug)]
pub struct RandomCriterion {
    pub schema: Schema,
    /// An executable path reaching `label l`, without the label letter.
    pub path: Path,
    pub vars: Vec<Var>,
}

/// Walks `schema` with random branch choices, never contradicting an
/// earlier consequence, until the label is next. Gives up after `max_len`
/// letters or at the end of the schema.
pub fn random_executable_path(rng: &mut impl Rng, schema: &Schema, max_len: usize) -> Option<Path> {
    let store = TermStore::new();
    let mut cursor = PathCursor::new(schema);
    let mut state = HerbrandState::natural();
    let mut seen = ConsequenceSet::new();
    let mut path = Path::new();
    let label = Letter::Label(Symbol::new(RANDOM_LABEL));
    while path.len() <= max_len {
        let stmt = cursor.next_statement()?;
        if matches!(stmt, Schema::Label { .. }) && rng.gen_bool(0.7) {
            return Some(path);
        }
        let letter = match stmt {
            Schema::If { pred, args, .. } | Schema::While { pred, args, .. } => {
                let term = PredTerm {
                    pred: pred.clone(),
                    args: state.eval_args(&store, args).into(),
                };
                let branch = seen.forced(&term).unwrap_or_else(|| rng.gen_bool(0.5));
                seen.insert(term, branch, path.len()).ok()?;
                cursor.step(branch)?
            }
            _ => cursor.step(true)?,
        };
        if letter == label {
            path.push(letter);
            continue;
        }
        state.apply(&store, &letter);
        path.push(letter);
    }
    None
}

/// Draws schemas until one has an executable path to the label.
pub fn random_criterion(
    rng: &mut impl Rng,
    max_statements: usize,
    max_len: usize,
) -> RandomCriterion {
    loop {
        let schema = random_schema(rng, max_statements);
        if let Some(path) = random_executable_path(rng, &schema, max_len) {
            let k = rng.gen_range(1..=2);
            let mut vars: Vec<Var> = VARS
                .choose_multiple(rng, k)
                .map(|v| Symbol::new(v))
                .collect();
            vars.sort();
            return RandomCriterion { schema, path, vars };
        }
    }
}

/// A uniformly random 3-CNF with `vars` variables and `clauses` clauses.
pub fn random_cnf(rng: &mut impl Rng, vars: usize, clauses: usize) -> Cnf3 {
    let clauses = (0..clauses)
        .map(|_| {
            [(); 3].map(|_| Literal {
                var: rng.gen_range(1..=vars),
                positive: rng.gen_bool(0.5),
            })
        })
        .collect();
    Cnf3::new(vars, clauses).expect("literals drawn in range")
}
