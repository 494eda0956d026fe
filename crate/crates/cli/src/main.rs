//! `schlice`: batch front end for schema parsing, path semantics, slice
//! checking, slice search and the 3SAT gadget.

use std::fs;
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use schlice::gadgets::{example_corpus, gen_3sat, round_trip, Cnf3, RoundTripReport, GADGET_LABEL};
use schlice::herbrand::{consequences, final_term, is_executable, Feasibility, TermStore};
use schlice::model::check_linear;
use schlice::paths::{enumerate_paths, project, validate_path, PathStatus};
use schlice::random::{random_cnf, rng};
use schlice::slicer::{check_ds, check_pfds, find_slices, SearchGoal, SliceCriterion, SliceMode};
use schlice::syntax::{parse_path, parse_schema, print_schema, CriterionSpec};
use schlice::{Path, Schema, Symbol};

#[derive(Parser, Debug)]
#[command(
    name = "schlice",
    version,
    about = "Dynamic slicing of linear program schemas"
)]
struct Cli {
    /// Output style.
    #[arg(long, value_enum, global = true, default_value_t = Format::Human)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Machine,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a schema and report linearity.
    Check {
        #[arg(long)]
        schema: PathBuf,
    },
    /// List the paths of a schema up to a length.
    Paths {
        #[arg(long)]
        schema: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        /// Only print terminating paths.
        #[arg(long)]
        terminal_only: bool,
    },
    /// Final terms and consequences of a path.
    Exec {
        #[arg(long)]
        schema: PathBuf,
        #[command(flatten)]
        path: PathArgs,
        /// Comma-separated variables to print; all assigned ones by default.
        #[arg(long, value_delimiter = ',')]
        vars: Vec<String>,
    },
    /// Project a path onto a quotient.
    Project {
        #[arg(long)]
        schema: PathBuf,
        #[arg(long)]
        quotient: PathBuf,
        #[command(flatten)]
        path: PathArgs,
    },
    /// Check a path-faithful dynamic slice.
    CheckPfds(CheckArgs),
    /// Check a general dynamic slice.
    CheckDs(CheckArgs),
    /// Search the quotient lattice for slices.
    FindSlices {
        #[command(flatten)]
        criterion: CriterionArgs,
        #[arg(long, value_enum, default_value_t = Mode::Pfds)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = Want::Exists)]
        want: Want,
    },
    /// Emit the hardness gadget for a DIMACS formula.
    #[command(name = "gen-3sat")]
    Gen3sat {
        #[arg(long)]
        cnf: PathBuf,
        /// Write `<out>.schema`, `<out>.path` and `<out>.criterion` instead of printing.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare slice existence on gadgets with brute-force satisfiability.
    RoundTrip {
        /// DIMACS files to check.
        #[arg(long)]
        cnf: Vec<PathBuf>,
        /// Additionally check this many random formulas.
        #[arg(long, default_value_t = 0)]
        random: usize,
        #[arg(long, default_value_t = 3)]
        vars: usize,
        #[arg(long, default_value_t = 4)]
        clauses: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the worked-example fixtures.
    Corpus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Pfds,
    Ds,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Want {
    Exists,
    Minimal,
}

#[derive(Args, Debug)]
struct PathArgs {
    /// Path tokens, or a file holding them.
    #[arg(long)]
    path: Option<String>,
    /// File holding path tokens; an inline `--path` wins.
    #[arg(long)]
    path_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CriterionArgs {
    #[arg(long)]
    schema: PathBuf,
    #[command(flatten)]
    path: PathArgs,
    /// Comma-separated criterion variables.
    #[arg(long, value_delimiter = ',')]
    vars: Vec<String>,
    /// Criterion label; appended to the schema when absent from it.
    #[arg(long)]
    label: Option<String>,
    /// `.criterion` sidecar supplying `label=` and `vars=`; flags win.
    #[arg(long)]
    criterion: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[command(flatten)]
    criterion: CriterionArgs,
    #[arg(long)]
    quotient: PathBuf,
}

fn read(path: &FsPath) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_schema(path: &FsPath) -> Result<Schema> {
    let parsed = parse_schema(&read(path)?).with_context(|| format!("{}", path.display()))?;
    Ok(parsed.schema)
}

impl PathArgs {
    fn text(&self) -> Result<String> {
        match (&self.path, &self.path_file) {
            (Some(p), file) => {
                if file.is_some() {
                    eprintln!("warning: both --path and --path-file given; using --path");
                }
                let as_file = FsPath::new(p);
                if as_file.is_file() {
                    read(as_file)
                } else {
                    Ok(p.clone())
                }
            }
            (None, Some(f)) => read(f),
            (None, None) => bail!("a criterion path is required (--path or --path-file)"),
        }
    }

    fn load(&self, schema: &Schema) -> Result<Path> {
        Ok(parse_path(&self.text()?, schema)?)
    }
}

impl CriterionArgs {
    fn label_and_vars(&self) -> Result<(String, Vec<String>)> {
        let side = match &self.criterion {
            Some(f) => CriterionSpec::parse(&read(f)?)?,
            None => CriterionSpec::default(),
        };
        let label = self
            .label
            .clone()
            .or_else(|| side.label.as_ref().map(|l| l.as_str().to_string()))
            .unwrap_or_else(|| GADGET_LABEL.to_string());
        let vars = if self.vars.is_empty() {
            side.vars.iter().map(|v| v.as_str().to_string()).collect()
        } else {
            self.vars.clone()
        };
        if vars.is_empty() {
            bail!("criterion variables are required (--vars or a criterion file)");
        }
        Ok((label, vars))
    }

    /// The criterion, with the label appended to the schema when missing.
    fn build(&self) -> Result<(SliceCriterion, bool)> {
        let (label, vars) = self.label_and_vars()?;
        let schema = load_schema(&self.schema)?;
        let appended = !schema.contains_label(&label);
        let extended = if appended {
            schema.then(Schema::label(&label))
        } else {
            schema
        };
        let path = self.path.load(&extended)?;
        let c =
            SliceCriterion::end_slice(extended, path, &label, vars.iter().map(|v| Symbol::new(v)))?;
        Ok((c, appended))
    }
}

fn load_quotient(path: &FsPath, c: &SliceCriterion, appended: bool) -> Result<Schema> {
    let q = load_schema(path)?;
    Ok(if appended && !q.contains_label(c.label().as_str()) {
        q.then(Schema::label(c.label().as_str()))
    } else {
        q
    })
}

fn symbol_line(symbols: &std::collections::BTreeSet<Symbol>) -> String {
    let names: Vec<&str> = symbols.iter().map(Symbol::as_str).collect();
    format!("{{{}}}", names.join(","))
}

fn report_line(r: &RoundTripReport) -> String {
    let valuation = match (&r.satisfying, r.valuation_slice_accepted) {
        (Some(v), Some(ok)) => {
            let bits: String = v.iter().map(|&b| if b { '1' } else { '0' }).collect();
            format!("{bits}:{}", if ok { "accepted" } else { "rejected" })
        }
        _ => "-".to_string(),
    };
    format!(
        "{} sat={} pfds={} ds={} valuation={} entries={}",
        if r.agrees() { "AGREE" } else { "DISAGREE" },
        r.sat(),
        r.pfds_exists,
        r.ds_exists,
        valuation,
        r.loop_entries
    )
}

/// Runs a subcommand; `Ok(true)` is a positive verdict.
fn run(cli: Cli) -> Result<bool> {
    let machine = cli.format == Format::Machine;
    match cli.command {
        Command::Check { schema } => {
            let s = load_schema(&schema)?;
            let report = check_linear(&s);
            if report.is_linear() {
                println!("LINEAR statements={}", s.statements().len());
            } else {
                println!("NONLINEAR repeated={}", symbol_line(&report.repeated));
            }
            if !machine {
                print!("{}", print_schema(&s));
            }
            Ok(report.is_linear())
        }
        Command::Paths {
            schema,
            max_len,
            terminal_only,
        } => {
            let s = load_schema(&schema)?;
            for e in enumerate_paths(&s, max_len) {
                if terminal_only && !e.terminal {
                    continue;
                }
                let kind = if e.terminal { "terminal" } else { "prefix" };
                println!("{kind} {}", e.path);
            }
            Ok(true)
        }
        Command::Exec { schema, path, vars } => {
            let s = load_schema(&schema)?;
            let p = path.load(&s)?;
            let status = validate_path(&s, &p);
            let store = TermStore::new();
            let vars: Vec<Symbol> = if vars.is_empty() {
                let mut assigned: Vec<Symbol> = p
                    .iter()
                    .filter_map(|l| match l {
                        schlice::Letter::Assign { target, .. } => Some(target.clone()),
                        _ => None,
                    })
                    .collect();
                assigned.sort();
                assigned.dedup();
                assigned
            } else {
                vars.iter().map(|v| Symbol::new(v)).collect()
            };
            for v in &vars {
                let t = final_term(&store, &s, &p, v)?;
                println!("{v} = {}", store.render(t));
            }
            for c in consequences(&store, &s, &p)? {
                println!("consequence {}", c.render(&store));
            }
            let feasible = is_executable(&store, &s, &p)?;
            let kind = match status {
                PathStatus::Terminal => "terminal",
                _ => "prefix",
            };
            match &feasible {
                Feasibility::Consistent => println!("EXECUTABLE {kind}"),
                Feasibility::Clash(c) => {
                    println!(
                        "NOT-EXECUTABLE clash={} at={}",
                        c.term.render(&store),
                        c.second
                    )
                }
            }
            Ok(feasible.is_consistent())
        }
        Command::Project {
            schema,
            quotient,
            path,
        } => {
            let s = load_schema(&schema)?;
            let q = load_schema(&quotient)?;
            let p = path.load(&s)?;
            println!("{}", project(&s, &q, &p)?);
            Ok(true)
        }
        Command::CheckPfds(args) => check(args, SliceMode::Pfds, machine),
        Command::CheckDs(args) => check(args, SliceMode::Ds, machine),
        Command::FindSlices {
            criterion,
            mode,
            want,
        } => {
            let (c, _) = criterion.build()?;
            let mode = match mode {
                Mode::Pfds => SliceMode::Pfds,
                Mode::Ds => SliceMode::Ds,
            };
            let goal = match want {
                Want::Exists => SearchGoal::ExistsNonTrivial,
                Want::Minimal => SearchGoal::AllMinimal,
            };
            let r = find_slices(&c, mode, goal, None)?;
            match goal {
                SearchGoal::ExistsNonTrivial => println!("EXISTS {}", r.exists()),
                SearchGoal::AllMinimal => println!("MINIMAL {}", r.found.len()),
            }
            for set in r.symbol_sets() {
                println!("{}", symbol_line(&set));
            }
            if !machine {
                println!(
                    "# {} quotients checked, {} deletable sites",
                    r.checked, r.optional_sites
                );
            }
            Ok(r.exists())
        }
        Command::Gen3sat { cnf, out } => {
            let f = Cnf3::parse_dimacs(&read(&cnf)?)?;
            let inst = gen_3sat(&f);
            let schema = print_schema(&inst.schema);
            let path = format!("{}\n", inst.path);
            let spec = inst.criterion_spec().to_string();
            match out {
                Some(prefix) => {
                    let with = |ext: &str| {
                        let mut p = prefix.clone().into_os_string();
                        p.push(ext);
                        PathBuf::from(p)
                    };
                    for (ext, text) in [
                        (".schema", &schema),
                        (".path", &path),
                        (".criterion", &spec),
                    ] {
                        let target = with(ext);
                        fs::write(&target, text)
                            .with_context(|| format!("cannot write {}", target.display()))?;
                    }
                    println!(
                        "entries={} letters={}",
                        inst.loop_entries(),
                        inst.path.len()
                    );
                }
                None => {
                    println!("# schema\n{schema}# path\n{path}# criterion\n{spec}");
                }
            }
            Ok(true)
        }
        Command::RoundTrip {
            cnf,
            random,
            vars,
            clauses,
            seed,
        } => {
            let mut formulas = Vec::new();
            for f in &cnf {
                formulas.push((f.display().to_string(), Cnf3::parse_dimacs(&read(f)?)?));
            }
            let mut r = rng(seed);
            for k in 0..random {
                formulas.push((format!("random#{k}"), random_cnf(&mut r, vars, clauses)));
            }
            if formulas.is_empty() {
                bail!("nothing to check: give --cnf files or --random N");
            }
            let mut all = true;
            for (name, f) in formulas {
                let report = round_trip(&f, None)?;
                all &= report.agrees();
                if machine {
                    println!("{} {name}", report_line(&report));
                } else {
                    println!("{name}: {f}\n  {}", report_line(&report));
                }
            }
            Ok(all)
        }
        Command::Corpus => {
            let mut all = true;
            for fixture in example_corpus() {
                for o in fixture.evaluate()? {
                    all &= o.passed();
                    println!("{}", o.line());
                }
            }
            Ok(all)
        }
    }
}

fn check(args: CheckArgs, mode: SliceMode, machine: bool) -> Result<bool> {
    let (c, appended) = args.criterion.build()?;
    let q = load_quotient(&args.quotient, &c, appended)?;
    let verdict = match mode {
        SliceMode::Pfds => check_pfds(&c, &q)?,
        SliceMode::Ds => check_ds(&c, &q)?,
    };
    if machine {
        println!("{}", verdict.machine_line());
    } else {
        print!("{}", verdict.human_report());
    }
    Ok(verdict.accepted)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
