//! `dmt`: satisfiability, validity, model checking and knowledge-base
//! entailment for modal logic with defeasible modalities.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dmt_core::engine::{default_max_depth, Engine, EngineError, EntailmentVerdict, KnowledgeBase};
use dmt_core::semantics::{ModelEnumerator, ModelSignature};
use dmt_core::syntax::ParseError;
use dmt_core::tableau::{Limits, TableauError, Verdict};
use dmt_core::{parse_formula, parse_statement, Formula, PreferentialModel, Prover, Statement};
use thiserror::Error;

/// Largest world count accepted by `oracle-sat`.
const ORACLE_WORLD_CAP: usize = 4;

#[derive(Parser)]
#[command(
    name = "dmt",
    version,
    about = "Decision tools for modal logic with defeasible modalities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide satisfiability with the tableau.
    Sat {
        #[command(flatten)]
        input: FormulaArg,
        /// Write the satisfying model as JSON.
        #[arg(long, value_name = "FILE")]
        model_out: Option<PathBuf>,
        /// Print every rule application to standard error.
        #[arg(long)]
        trace: bool,
    },
    /// Decide validity with the tableau.
    Valid {
        #[command(flatten)]
        input: FormulaArg,
        /// Write the countermodel as JSON.
        #[arg(long, value_name = "FILE")]
        countermodel_out: Option<PathBuf>,
        /// Print every rule application to standard error.
        #[arg(long)]
        trace: bool,
    },
    /// Evaluate a formula or a conditional `a |~ b` on a model file.
    Check {
        /// Model in JSON form.
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        /// Formula or conditional, inline or as @FILE.
        #[arg(value_name = "STATEMENT", allow_hyphen_values = true)]
        statement: String,
        /// Evaluate at one world.
        #[arg(long, value_name = "WORLD", conflicts_with = "global")]
        at: Option<String>,
        /// Require truth at every world (the default for formulas).
        #[arg(long)]
        global: bool,
    },
    /// Decide whether a knowledge base globally entails a formula.
    Entails {
        /// Knowledge base: one formula per line.
        #[arg(long, value_name = "FILE")]
        kb: PathBuf,
        #[command(flatten)]
        input: FormulaArg,
        /// Deepest box closure to try [default: modal depth + 2].
        #[arg(long, value_name = "N")]
        max_depth: Option<usize>,
        /// Write the countermodel as JSON.
        #[arg(long, value_name = "FILE")]
        countermodel_out: Option<PathBuf>,
    },
    /// Search every model up to a world bound.
    OracleSat {
        #[command(flatten)]
        input: FormulaArg,
        #[arg(long, value_name = "N")]
        max_worlds: usize,
    },
}

#[derive(Args)]
struct FormulaArg {
    /// Formula, inline or as @FILE.
    #[arg(value_name = "FORMULA", allow_hyphen_values = true)]
    formula: String,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{source_name}:{error}")]
    Parse {
        source_name: String,
        error: ParseError,
    },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Resource(TableauError),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Resource(_) => 3,
            _ => 2,
        }
    }
}

impl From<TableauError> for CliError {
    fn from(e: TableauError) -> Self {
        match e {
            TableauError::ResourceExhausted { .. } => CliError::Resource(e),
            TableauError::InvariantViolation(_) => CliError::Usage(format!("internal error: {e}")),
        }
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::Tableau(t) => t.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

/// Verdict line plus exit code.
struct Outcome {
    line: String,
    code: u8,
}

impl Outcome {
    fn new(code: u8, line: impl Into<String>) -> Self {
        Outcome {
            line: line.into(),
            code,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(outcome) => {
            println!("{}", outcome.line);
            ExitCode::from(outcome.code)
        }
        Err(CliError::Resource(e)) => {
            println!("UNKNOWN ({e})");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Sat {
            input,
            model_out,
            trace,
        } => {
            let f = read_formula(&input.formula)?;
            let verdict = decide(&prover()?, &f, trace)?;
            Ok(match verdict {
                Verdict::Closed(_) => Outcome::new(1, "UNSAT"),
                Verdict::Open(open) => {
                    let world = open.root_world();
                    emit_model(&open.model, model_out.as_deref())?;
                    Outcome::new(
                        0,
                        format!("SAT (at {world}, {} worlds)", open.model.world_count()),
                    )
                }
            })
        }
        Command::Valid {
            input,
            countermodel_out,
            trace,
        } => {
            let f = read_formula(&input.formula)?;
            let verdict = decide(&prover()?, &Formula::not(f.clone()), trace)?;
            Ok(match verdict {
                Verdict::Closed(_) => Outcome::new(0, "VALID"),
                Verdict::Open(open) => {
                    let world = open.root_world();
                    if !matches!(open.model.holds_at(&world, &f), Ok(false)) {
                        return Err(CliError::Usage(
                            "internal error: countermodel does not falsify".into(),
                        ));
                    }
                    emit_model(&open.model, countermodel_out.as_deref())?;
                    Outcome::new(
                        1,
                        format!(
                            "INVALID (fails at {world}, {} worlds)",
                            open.model.world_count()
                        ),
                    )
                }
            })
        }
        Command::Check {
            model,
            statement,
            at,
            global: _,
        } => {
            let text = read_input(&statement)?;
            let m =
                PreferentialModel::from_json(&read_file(&model)?).map_err(|e| CliError::Io {
                    path: model.display().to_string(),
                    message: e.to_string(),
                })?;
            let statement = parse_statement(&text).map_err(|error| CliError::Parse {
                source_name: source_name(&statement),
                error,
            })?;
            check(&m, &statement, at.as_deref())
        }
        Command::Entails {
            kb,
            input,
            max_depth,
            countermodel_out,
        } => {
            let f = read_formula(&input.formula)?;
            let base = KnowledgeBase::parse(&read_file(&kb)?).map_err(|error| CliError::Parse {
                source_name: kb.display().to_string(),
                error,
            })?;
            let depth = max_depth.unwrap_or_else(|| default_max_depth(&f));
            let engine = Engine::new(prover()?);
            Ok(match engine.global_entails(&base, &f, depth)? {
                EntailmentVerdict::Entailed { depth } => {
                    Outcome::new(0, format!("ENTAILED (depth {depth})"))
                }
                EntailmentVerdict::NotEntailed {
                    countermodel,
                    witness,
                } => {
                    emit_model(&countermodel, countermodel_out.as_deref())?;
                    Outcome::new(
                        1,
                        format!(
                            "NOT-ENTAILED (fails at {witness}, {} worlds)",
                            countermodel.world_count()
                        ),
                    )
                }
                EntailmentVerdict::Unknown { depth } => {
                    Outcome::new(3, format!("UNKNOWN (no verdict up to depth {depth})"))
                }
            })
        }
        Command::OracleSat { input, max_worlds } => {
            let f = read_formula(&input.formula)?;
            oracle_sat(&f, max_worlds)
        }
    }
}

fn check(
    m: &PreferentialModel,
    statement: &Statement,
    at: Option<&str>,
) -> Result<Outcome, CliError> {
    match (statement, at) {
        (Statement::Conditional(_), Some(_)) => Err(CliError::Usage(
            "a conditional holds or fails in the whole model; --at does not apply".into(),
        )),
        (Statement::Conditional(c), None) => Ok(if m.holds_conditional(c) {
            Outcome::new(0, "HOLDS (conditional)")
        } else {
            let best = m.min_preferred(&m.extension(&c.antecedent));
            let failing = best.intersection(&m.extension(&c.consequent).complement());
            Outcome::new(
                1,
                format!("FAILS (conditional): {}", m.names(&failing).join(", ")),
            )
        }),
        (Statement::Plain(f), Some(world)) => {
            let holds = m
                .holds_at(world, f)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(if holds {
                Outcome::new(0, format!("HOLDS (at {world})"))
            } else {
                Outcome::new(1, format!("FAILS (at {world})"))
            })
        }
        (Statement::Plain(f), None) => {
            let failing = m.extension(f).complement();
            Ok(if failing.is_empty() {
                Outcome::new(0, "HOLDS (globally)")
            } else {
                Outcome::new(
                    1,
                    format!("FAILS (globally): {}", m.names(&failing).join(", ")),
                )
            })
        }
    }
}

fn oracle_sat(f: &Formula, max_worlds: usize) -> Result<Outcome, CliError> {
    if max_worlds == 0 || max_worlds > ORACLE_WORLD_CAP {
        return Err(CliError::Usage(format!(
            "--max-worlds must be between 1 and {ORACLE_WORLD_CAP}"
        )));
    }
    let sig = ModelSignature::covering([f], max_worlds);
    let models = ModelEnumerator::with_cap(&sig, ORACLE_WORLD_CAP)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    for m in models {
        if let Some(w) = m.extension(f).iter().next() {
            let line = format!("SAT (at {}, {} worlds)", m.world_name(w), m.world_count());
            print_model(&m)?;
            return Ok(Outcome::new(0, line));
        }
    }
    Ok(Outcome::new(
        1,
        format!("UNSAT (no model with at most {max_worlds} worlds)"),
    ))
}

fn decide(prover: &Prover, f: &Formula, trace: bool) -> Result<Verdict, CliError> {
    if !trace {
        return Ok(prover.decide(f)?);
    }
    let (verdict, stats, lines) = prover.decide_traced(f)?;
    let mut err = io::stderr().lock();
    for line in lines {
        let _ = writeln!(err, "{line}");
    }
    let _ = writeln!(
        err,
        "{} rule applications, {} branches, {} labels",
        stats.rule_applications, stats.branches, stats.labels
    );
    Ok(verdict)
}

/// Writes the model to `path`, or prints it after the verdict line when no
/// path is given.
fn emit_model(m: &PreferentialModel, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, m.to_json() + "\n").map_err(|e| CliError::Io {
            path: p.display().to_string(),
            message: e.to_string(),
        }),
        None => print_model(m),
    }
}

fn print_model(m: &PreferentialModel) -> Result<(), CliError> {
    // The verdict line must come first, so the model goes to stderr.
    let _ = writeln!(io::stderr().lock(), "{}", m.to_json());
    Ok(())
}

fn prover() -> Result<Prover, CliError> {
    let mut limits = Limits::default();
    if let Some(n) = env_limit("DMT_MAX_RULE_APPS")? {
        limits.max_rule_applications = n;
    }
    if let Some(n) = env_limit("DMT_MAX_LABELS")? {
        limits.max_labels = n;
    }
    Ok(Prover::new(limits))
}

fn env_limit(name: &str) -> Result<Option<usize>, CliError> {
    match std::env::var(name) {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| {
            CliError::Usage(format!("{name} must be a non-negative integer, got {v:?}"))
        }),
        Err(_) => Ok(None),
    }
}

fn read_formula(arg: &str) -> Result<Formula, CliError> {
    let text = read_input(arg)?;
    parse_formula(&text).map_err(|error| CliError::Parse {
        source_name: source_name(arg),
        error,
    })
}

fn source_name(arg: &str) -> String {
    match arg.strip_prefix('@') {
        Some(path) => path.to_string(),
        None => "<formula>".to_string(),
    }
}

fn read_input(arg: &str) -> Result<String, CliError> {
    match arg.strip_prefix('@') {
        Some(path) => read_file(Path::new(path)),
        None => Ok(arg.to_string()),
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}
