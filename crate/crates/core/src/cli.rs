//! The `sociable` command line.
//!
//! Exit status is 0 for an affirmative verdict (compatible, refines, safe,
//! well-formed), 1 for a negative one and 2 for usage or input errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::compose::{compose, ComposeError};
use crate::model::{Domain, Space};
use crate::refine::refines;
use crate::safety::{self, well_formed, Mode};
use crate::syntax::{parse_expr, Direction, ModuleAst, TypeAst};
use crate::{Error, Library};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "sociable",
    version,
    about = "Compose, refine and check sociable interfaces written in .si files"
)]
struct Cli {
    /// Print a JSON verdict object instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compose two interfaces and print the composite.
    Compose {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// The two modules to compose.
        #[arg(short = 'm', long = "module", required = true)]
        modules: Vec<String>,
        /// Write the composite here instead of standard output.
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Check that the first module refines the second.
    Refine {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Refining module, then refined module.
        #[arg(short = 'm', long = "module", required = true)]
        modules: Vec<String>,
    },
    /// Check an invariant of one module.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(short = 'm', long = "module", required = true)]
        module: String,
        /// Boolean expression over the module's variables.
        #[arg(long)]
        invariant: String,
        #[arg(long, value_enum)]
        mode: CliMode,
    },
    /// Report validation errors and dead actions of one module.
    Wf {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(short = 'm', long = "module", required = true)]
        module: String,
    },
    /// List the modules of the given files.
    Info {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CliMode {
    Pessimistic,
    Optimistic,
}

impl From<CliMode> for Mode {
    fn from(m: CliMode) -> Self {
        match m {
            CliMode::Pessimistic => Mode::Pessimistic,
            CliMode::Optimistic => Mode::Optimistic,
        }
    }
}

#[derive(Debug, Serialize)]
struct Stats {
    nodes: usize,
    iterations: usize,
    time_ms: u64,
}

/// The machine-readable form of every verdict.
#[derive(Debug, Serialize)]
struct JsonVerdict {
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<String>>,
    stats: Stats,
    extras: Value,
}

/// What a subcommand produced, before rendering.
struct Outcome {
    verdict: &'static str,
    code: i32,
    /// Text-mode body lines after the verdict line.
    body: Vec<String>,
    witness: Option<Vec<String>>,
    nodes: usize,
    iterations: usize,
    extras: Value,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Input(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

/// Runs the command line `args` (program name first), writing to `out`
/// and `err`, and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let started = Instant::now();
    let result = match &cli.command {
        Command::Compose {
            files,
            modules,
            output,
        } => run_compose(files, modules, output.as_ref()),
        Command::Refine { files, modules } => run_refine(files, modules),
        Command::Check {
            files,
            module,
            invariant,
            mode,
        } => run_check(files, module, invariant, (*mode).into()),
        Command::Wf { files, module } => run_wf(files, module),
        Command::Info { files } => run_info(files),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
        Err(Failure::Input(e)) => {
            let _ = writeln!(err, "{e}");
            return EXIT_USAGE;
        }
    };
    let written = if cli.json {
        let v = JsonVerdict {
            verdict: outcome.verdict,
            witness: outcome.witness,
            stats: Stats {
                nodes: outcome.nodes,
                iterations: outcome.iterations,
                time_ms: started.elapsed().as_millis() as u64,
            },
            extras: outcome.extras,
        };
        let text = serde_json::to_string_pretty(&v).expect("plain data serializes");
        writeln!(out, "{text}")
    } else {
        let mut text = format!("{}\n", outcome.verdict);
        for line in &outcome.body {
            text.push_str(line);
            text.push('\n');
        }
        write!(out, "{text}")
    };
    if written.is_err() {
        return EXIT_USAGE;
    }
    outcome.code
}

fn two<'a>(modules: &'a [String], what: &str) -> Result<(&'a str, &'a str), Failure> {
    match modules {
        [a, b] => Ok((a, b)),
        _ => Err(Failure::Usage(format!(
            "{what} needs exactly two -m options, got {}",
            modules.len()
        ))),
    }
}

fn count(n: u128) -> Value {
    json!(u64::try_from(n).unwrap_or(u64::MAX))
}

fn run_compose(
    files: &[PathBuf],
    modules: &[String],
    output: Option<&PathBuf>,
) -> Result<Outcome, Failure> {
    let (a, b) = two(modules, "compose")?;
    if a == b {
        return Err(Failure::Usage(format!("cannot compose `{a}` with itself")));
    }
    let lib = Library::from_files(files)?;
    let p = lib.interface(a)?;
    let q = lib.interface(b)?;
    let mut space = Space::new();
    match compose(&mut space, &p, &q) {
        Ok(c) => {
            let ids = &c.symbolic.ids;
            let compatible = space.count_states(c.compatible, ids);
            let joint = space.count_states(c.symbolic.state_domain, ids);
            let source = c.interface.to_source();
            let mut body = vec![format!(
                "// {compatible} of {joint} joint states are compatible"
            )];
            let mut extras = json!({
                "left": a,
                "right": b,
                "composite_name": c.interface.name,
                "compatible_states": count(compatible),
                "joint_states": count(joint),
            });
            match output {
                Some(path) => {
                    std::fs::write(path, &source).map_err(|source| {
                        Failure::Input(Error::Io {
                            path: path.clone(),
                            source,
                        })
                    })?;
                    body.push(format!("// composite written to {}", path.display()));
                    extras["output"] = json!(path.display().to_string());
                }
                None => {
                    body.extend(source.lines().map(str::to_string));
                    extras["composite"] = json!(source);
                }
            }
            Ok(Outcome {
                verdict: "COMPATIBLE",
                code: EXIT_OK,
                body,
                witness: None,
                nodes: space.manager().node_count(),
                iterations: c.iterations,
                extras,
            })
        }
        Err(ComposeError::Incompatible { witness, .. }) => {
            let lines = witness.trace.lines();
            Ok(Outcome {
                verdict: "INCOMPATIBLE",
                code: EXIT_NEGATIVE,
                body: lines.clone(),
                witness: Some(lines),
                nodes: space.manager().node_count(),
                iterations: witness.iterations,
                extras: json!({
                    "left": a,
                    "right": b,
                    "emitter": witness.rejection.emitter,
                    "listener": witness.rejection.listener,
                    "action": witness.rejection.action,
                    "witness_length": witness.length(),
                }),
            })
        }
        Err(ComposeError::NoCommonInit { .. }) => Ok(Outcome {
            verdict: "INCOMPATIBLE",
            code: EXIT_NEGATIVE,
            body: vec![format!(
                "no common initial state: {a} and {b} start from different globals"
            )],
            witness: Some(Vec::new()),
            nodes: space.manager().node_count(),
            iterations: 0,
            extras: json!({ "left": a, "right": b, "witness_length": 0 }),
        }),
        Err(e) => Err(Failure::Usage(e.to_string())),
    }
}

fn run_refine(files: &[PathBuf], modules: &[String]) -> Result<Outcome, Failure> {
    let (a, b) = two(modules, "refine")?;
    let lib = Library::from_files(files)?;
    let p = lib.interface(a)?;
    let q = lib.interface(b)?;
    let mut space = Space::new();
    let v = refines(&mut space, &p, &q);
    let (verdict, code) = if v.refines {
        ("REFINES", EXIT_OK)
    } else {
        ("DOES-NOT-REFINE", EXIT_NEGATIVE)
    };
    let mut body = Vec::new();
    let mut extras = json!({ "left": a, "right": b });
    if let Some(viol) = &v.violation {
        let action = viol
            .action
            .as_ref()
            .map(|a| format!(" on `{a}`"))
            .unwrap_or_default();
        body.push(format!("violated: {}{action}", viol.condition));
        body.push(viol.message.clone());
        extras["condition"] = json!(viol.condition.to_string());
        extras["action"] = json!(viol.action);
        extras["message"] = json!(viol.message);
    }
    if let Some(rel) = &v.relation {
        let size = space.count_states(rel.set, &rel.game.ids);
        extras["related_triples"] = count(size);
    }
    Ok(Outcome {
        verdict,
        code,
        body,
        witness: None,
        nodes: space.manager().node_count(),
        iterations: v.iterations(),
        extras,
    })
}

fn run_check(
    files: &[PathBuf],
    module: &str,
    invariant: &str,
    mode: Mode,
) -> Result<Outcome, Failure> {
    let lib = Library::from_files(files)?;
    let iface = lib.interface(module)?;
    let phi = parse_expr(invariant).map_err(|e| Failure::Usage(format!("--invariant: {e}")))?;
    let mut space = Space::new();
    let report =
        safety::check(&mut space, &iface, &phi, mode).map_err(|e| Failure::Input(e.into()))?;
    let states = crate::model::state_count(&iface.vars);
    let region = match mode {
        Mode::Pessimistic => "reachable",
        Mode::Optimistic => "winning",
    };
    let mut body = vec![format!(
        "{region} states: {} of {states}",
        report.region_states
    )];
    let witness = report.witness.as_ref().map(|t| t.lines());
    if let Some(lines) = &witness {
        body.extend(lines.iter().cloned());
    }
    let (verdict, code) = if report.safe {
        ("SAFE", EXIT_OK)
    } else {
        ("UNSAFE", EXIT_NEGATIVE)
    };
    Ok(Outcome {
        verdict,
        code,
        body,
        witness,
        nodes: space.manager().node_count(),
        iterations: report.iterations,
        extras: json!({
            "module": module,
            "mode": mode.to_string(),
            "invariant": invariant,
            "region": region,
            "region_states": count(report.region_states),
            "states": count(states),
        }),
    })
}

fn run_wf(files: &[PathBuf], module: &str) -> Result<Outcome, Failure> {
    let lib = Library::from_files(files)?;
    let ast = lib.module(module)?;
    let wf = well_formed(ast);
    let lines: Vec<String> = wf.diagnostics.iter().map(|d| d.to_string()).collect();
    let (verdict, code) = if wf.ok {
        ("WELL-FORMED", EXIT_OK)
    } else {
        ("ILL-FORMED", EXIT_NEGATIVE)
    };
    Ok(Outcome {
        verdict,
        code,
        body: lines.clone(),
        witness: None,
        nodes: 0,
        iterations: 0,
        extras: json!({ "module": module, "diagnostics": lines }),
    })
}

fn domain_of(ty: &TypeAst) -> Domain {
    match *ty {
        TypeAst::Bool => Domain::Bool,
        TypeAst::Range(lo, hi) => Domain::Range { lo, hi },
    }
}

fn summarize(m: &ModuleAst) -> (Vec<String>, Value) {
    let mut lines = Vec::new();
    let locals: Vec<String> = m
        .decls
        .iter()
        .filter(|d| !d.global)
        .map(|d| format!("{}: {}", d.name.text, domain_of(&d.ty)))
        .collect();
    let globals: Vec<String> = m
        .decls
        .iter()
        .filter(|d| d.global)
        .map(|d| format!("{}: {}", d.name.text, domain_of(&d.ty)))
        .collect();
    let states = m
        .decls
        .iter()
        .map(|d| {
            let dom = domain_of(&d.ty);
            if dom.lo() > dom.hi() {
                0
            } else {
                dom.size() as u128
            }
        })
        .fold(1u128, |a, n| a.saturating_mul(n));
    let mut actions: Vec<(String, usize, usize, bool, bool)> = Vec::new();
    for b in &m.actions {
        let idx = match actions.iter().position(|a| a.0 == b.name.text) {
            Some(i) => i,
            None => {
                actions.push((b.name.text.clone(), 0, 0, false, false));
                actions.len() - 1
            }
        };
        let entry = &mut actions[idx];
        match b.direction {
            Direction::Output => {
                entry.1 += b.commands.len();
                entry.3 = true;
            }
            Direction::Input => {
                entry.2 += b.commands.len();
                entry.4 = true;
            }
        }
    }
    let plural = |n: usize| if n == 1 { "" } else { "s" };
    lines.push(format!(
        "module {}: {} local{}, {} global{}, {states} states",
        m.name.text,
        locals.len(),
        plural(locals.len()),
        globals.len(),
        plural(globals.len()),
    ));
    for l in &locals {
        lines.push(format!("  var {l}"));
    }
    for g in &globals {
        lines.push(format!("  global var {g}"));
    }
    let mut action_json = Vec::new();
    for (name, outs, ins, emits, listens) in &actions {
        let mut parts = Vec::new();
        if *emits {
            parts.push(format!("output ({outs} command{})", plural(*outs)));
        }
        if *listens {
            parts.push(format!("input ({ins} command{})", plural(*ins)));
        }
        lines.push(format!("  action {name}: {}", parts.join(", ")));
        action_json.push(json!({
            "name": name,
            "output_commands": if *emits { json!(outs) } else { Value::Null },
            "input_commands": if *listens { json!(ins) } else { Value::Null },
        }));
    }
    let value = json!({
        "name": m.name.text,
        "locals": locals,
        "globals": globals,
        "actions": action_json,
        "states": count(states),
    });
    (lines, value)
}

fn run_info(files: &[PathBuf]) -> Result<Outcome, Failure> {
    let lib = Library::from_files(files)?;
    let mut body = Vec::new();
    let mut modules = Vec::new();
    for m in &lib.modules {
        let (lines, value) = summarize(m);
        body.extend(lines);
        modules.push(value);
    }
    Ok(Outcome {
        verdict: "OK",
        code: EXIT_OK,
        body,
        witness: None,
        nodes: 0,
        iterations: 0,
        extras: json!({ "modules": modules }),
    })
}
