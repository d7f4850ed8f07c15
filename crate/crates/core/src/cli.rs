//! Command-line front end over program, circuit and state files.
//!
//! Exit codes: 0 on success, 1 when a verification or equivalence check
//! fails, 2 on unreadable or invalid input.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

use crate::gate_compiler::{circuit_unitary, compile_circuit, Circuit, CompileError, CompileOptions};
use crate::graph_model::{
    parse_dynamic_graph, serialize_dynamic_graph, DynamicGraph, ParseError, Period, RationalAngle,
};
use crate::numerics::{phase_distance, ComplexMatrix, StateVector, C64};
use crate::rewrite_optimizer::{optimize, OptimizerConfig, RuleId, UnknownRule};
use crate::tolerance;
use crate::walk_engine::{evolve_state, total_unitary};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Outcome of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandResult {
    pub exit_code: i32,
    /// Human-readable report.
    pub summary: String,
    /// Machine-readable payload.
    pub json: Option<Value>,
}

impl CommandResult {
    fn new(exit_code: i32, summary: String, json: Value) -> Self {
        Self { exit_code, summary, json: Some(json) }
    }
}

/// Input errors; all map to exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Program { path: PathBuf, source: ParseError },
    #[error("{path}: {source}")]
    Circuit { path: PathBuf, source: CompileError },
    #[error("invalid state: {0}")]
    State(String),
    #[error(transparent)]
    Rule(#[from] UnknownRule),
    #[error("programs act on {a} and {b} vertices")]
    SizeMismatch { a: usize, b: usize },
}

impl From<CliError> for CommandResult {
    fn from(e: CliError) -> Self {
        CommandResult::new(EXIT_INPUT, format!("error: {e}"), json!({ "error": e.to_string() }))
    }
}

#[derive(Debug, Parser)]
#[command(name = "dqwalk", version, about = "Simulate, compile and optimize dynamic quantum walks")]
pub struct Cli {
    /// Print the JSON payload instead of the text report.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve a basis state or amplitude file through a program.
    Simulate {
        program: PathBuf,
        /// Basis label such as `010` or `|010>`, a vertex index, or a JSON file of amplitudes.
        #[arg(long)]
        state: String,
    },
    /// Print the program's total unitary as CSV.
    Unitary {
        program: PathBuf,
        /// Write the CSV to this file instead of standard output.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Shorten a program with the verified rewrite rules.
    Optimize {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Comma-separated rule ids to enable; all rules when omitted.
        #[arg(long, value_delimiter = ',')]
        passes: Option<Vec<String>>,
        #[arg(long = "max-iter")]
        max_iter: Option<usize>,
        /// Write the rewrite report as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Compile a circuit file into a program.
    Compile {
        circuit: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Fuse adjacent H gates on distinct qubits into one hypercube layer.
        #[arg(long = "parallel-h")]
        parallel_h: bool,
        /// Compile each H as loops, matching, loops.
        #[arg(long = "sequential-h", conflicts_with = "parallel_h")]
        sequential_h: bool,
    },
    /// Compare two programs up to global phase.
    Equiv { a: PathBuf, b: PathBuf },
    /// Report graph count, total time, norms and periods.
    Stats { program: PathBuf },
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli.command),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            CommandResult { exit_code: code, summary: e.to_string(), json: None }
        }
    }
}

/// Runs one parsed command.
pub fn execute(command: &Command) -> CommandResult {
    match command {
        Command::Simulate { program, state } => cmd_simulate(program, state),
        Command::Unitary { program, csv } => cmd_unitary(program, csv.as_deref()),
        Command::Optimize { input, output, passes, max_iter, report } => {
            cmd_optimize(input, output, passes.as_deref(), *max_iter, report.as_deref())
        }
        Command::Compile { circuit, output, parallel_h, sequential_h } => {
            let opts = CompileOptions { parallel_hadamards: *parallel_h, sequential_hadamards: *sequential_h };
            cmd_compile(circuit, output, opts)
        }
        Command::Equiv { a, b } => cmd_equiv(a, b),
        Command::Stats { program } => cmd_stats(program),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn load_program(path: &Path) -> Result<DynamicGraph, CliError> {
    parse_dynamic_graph(&read(path)?).map_err(|source| CliError::Program { path: path.to_path_buf(), source })
}

/// Magnitudes below this print as `0`.
pub const DISPLAY_ZERO: f64 = 1e-14;

/// Formats `x` with 12 significant digits.
pub fn format_real(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x.abs() < DISPLAY_ZERO {
        return "0".to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    let magnitude = rounded.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    format!("{rounded:.decimals$}")
}

/// `re±im i` with 12 significant digits per part.
pub fn format_complex(z: C64) -> String {
    let im = format_real(z.im);
    let (sign, im) = match im.strip_prefix('-') {
        Some(rest) => ('-', rest.to_string()),
        None => ('+', im),
    };
    format!("{}{sign}{im}i", format_real(z.re))
}

/// Exact and decimal forms, e.g. `21π/4 ≈ 16.4934`.
pub fn format_time(t: RationalAngle) -> String {
    format!("{t} ≈ {:.4}", t.radians())
}

fn basis_label(index: usize, n: usize) -> String {
    if n.is_power_of_two() && n > 1 {
        let bits = n.trailing_zeros() as usize;
        format!("|{index:0bits$b}⟩")
    } else {
        format!("|{index}⟩")
    }
}

/// Parses a basis label, a vertex index, or an amplitude file.
pub fn parse_state(spec: &str, n: usize) -> Result<StateVector, CliError> {
    let path = Path::new(spec);
    if path.is_file() {
        return parse_amplitudes(&read(path)?, n);
    }
    let label = spec.trim().trim_start_matches('|').trim_end_matches(['>', '⟩']);
    let bits = n.trailing_zeros() as usize;
    let index = if n.is_power_of_two() && label.len() == bits && label.chars().all(|c| c == '0' || c == '1') {
        usize::from_str_radix(label, 2).ok()
    } else {
        label.parse::<usize>().ok()
    };
    match index {
        Some(i) if i < n => Ok(StateVector::basis(n, i)),
        _ => Err(CliError::State(format!("`{spec}` is neither a file, a {bits}-bit label nor an index below {n}"))),
    }
}

/// Amplitudes as a JSON array whose entries are numbers or `[re, im]` pairs.
pub fn parse_amplitudes(text: &str, n: usize) -> Result<StateVector, CliError> {
    let values: Vec<Value> = serde_json::from_str(text).map_err(|e| CliError::State(e.to_string()))?;
    if values.len() != n {
        return Err(CliError::State(format!("{} amplitudes for {n} vertices", values.len())));
    }
    let amps = values
        .iter()
        .enumerate()
        .map(|(k, v)| {
            amplitude(v).ok_or_else(|| CliError::State(format!("amplitude {k} must be a number or [re, im]")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let psi = StateVector::new(amps);
    if (psi.norm() - 1.0).abs() > tolerance::EQUIVALENCE {
        return Err(CliError::State(format!("state norm is {}, expected 1", format_real(psi.norm()))));
    }
    Ok(psi)
}

fn amplitude(v: &Value) -> Option<C64> {
    match v {
        Value::Number(x) => Some(C64::new(x.as_f64()?, 0.0)),
        Value::Array(p) if p.len() == 2 => Some(C64::new(p[0].as_f64()?, p[1].as_f64()?)),
        _ => None,
    }
}

pub fn cmd_simulate(program: &Path, state: &str) -> CommandResult {
    let go = || -> Result<CommandResult, CliError> {
        let dg = load_program(program)?;
        let n = dg.n_vertices();
        let psi0 = parse_state(state, n)?;
        let psi = evolve_state(&dg, &psi0).expect("state matches program size");
        let norm = psi.norm();
        let norm_ok = (norm - 1.0).abs() < tolerance::EQUIVALENCE;
        let mut lines = Vec::new();
        for (k, z) in psi.amplitudes().iter().enumerate() {
            lines.push(format!("{}  {}", basis_label(k, n), format_complex(*z)));
        }
        lines.push(format!("norm {} ({})", format_real(norm), if norm_ok { "ok" } else { "FAILED" }));
        let amplitudes: Vec<[f64; 2]> = psi.amplitudes().iter().map(|z| [z.re, z.im]).collect();
        let payload = json!({ "amplitudes": amplitudes, "norm": norm, "norm_ok": norm_ok });
        Ok(CommandResult::new(if norm_ok { EXIT_OK } else { EXIT_VERIFY }, lines.join("\n"), payload))
    };
    go().unwrap_or_else(Into::into)
}

/// Row-major CSV with one `re±im i` cell per entry.
pub fn unitary_csv(u: &ComplexMatrix) -> String {
    let mut out = String::new();
    for r in 0..u.dim() {
        let cells: Vec<String> = u.row(r).iter().map(|z| format_complex(*z)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn cmd_unitary(program: &Path, csv: Option<&Path>) -> CommandResult {
    let go = || -> Result<CommandResult, CliError> {
        let dg = load_program(program)?;
        let u = total_unitary(&dg);
        let text = unitary_csv(&u);
        let unitary = u.is_unitary();
        let summary = match csv {
            Some(path) => {
                write(path, &text)?;
                format!("wrote {}×{} unitary to {}", u.dim(), u.dim(), path.display())
            }
            None => text.trim_end().to_string(),
        };
        let payload = json!({ "dim": u.dim(), "unitary_check": unitary });
        Ok(CommandResult::new(if unitary { EXIT_OK } else { EXIT_VERIFY }, summary, payload))
    };
    go().unwrap_or_else(Into::into)
}

pub fn cmd_optimize(
    input: &Path,
    output: &Path,
    passes: Option<&[String]>,
    max_iter: Option<usize>,
    report_path: Option<&Path>,
) -> CommandResult {
    let go = || -> Result<CommandResult, CliError> {
        let dg = load_program(input)?;
        let mut config = OptimizerConfig { max_iterations: max_iter, ..Default::default() };
        if let Some(list) = passes {
            config.passes = list
                .iter()
                .filter(|s| !s.trim().is_empty())
                .map(|s| s.parse::<RuleId>())
                .collect::<Result<BTreeSet<_>, _>>()?;
        }
        let (out, report) = optimize(&dg, &config);
        write(output, &serialize_dynamic_graph(&out))?;
        if let Some(path) = report_path {
            write(path, &report.to_json())?;
        }
        let verified = report.diagnostics.is_empty() && report.final_distance < tolerance::EQUIVALENCE;
        let mut lines = vec![
            format!("before: {} graphs, {}", report.count_before, format_time(report.time_before)),
            format!("after:  {} graphs, {}", report.count_after, format_time(report.time_after)),
        ];
        for s in &report.steps {
            lines.push(format!(
                "  {} [{}..={}] saved {} graphs {:+}",
                s.rule, s.start, s.end, s.time_saved, s.graph_delta
            ));
        }
        lines.extend(report.diagnostics.iter().map(|d| format!("  {d}")));
        lines.push(format!("equivalence distance {:.3e}", report.final_distance));
        let payload = serde_json::to_value(&report).expect("reports always serialize");
        Ok(CommandResult::new(if verified { EXIT_OK } else { EXIT_VERIFY }, lines.join("\n"), payload))
    };
    go().unwrap_or_else(Into::into)
}

pub fn cmd_compile(circuit: &Path, output: &Path, opts: CompileOptions) -> CommandResult {
    let go = || -> Result<CommandResult, CliError> {
        let bad = |source: CompileError| CliError::Circuit { path: circuit.to_path_buf(), source };
        let c = Circuit::from_json(&read(circuit)?).map_err(|e| bad(e.into()))?;
        let dg = compile_circuit(&c, opts).map_err(bad)?;
        let distance = phase_distance(&total_unitary(&dg), &circuit_unitary(&c)).expect("same dimension");
        let payload = json!({
            "graphs": dg.len(),
            "total_time": dg.total_time(),
            "distance": distance,
        });
        if distance >= tolerance::EQUIVALENCE {
            let summary = format!("verification failed: distance {distance:.3e}; nothing written");
            return Ok(CommandResult::new(EXIT_VERIFY, summary, payload));
        }
        write(output, &serialize_dynamic_graph(&dg))?;
        let summary = format!(
            "{} graphs, {}, distance {distance:.3e}; wrote {}",
            dg.len(),
            format_time(dg.total_time()),
            output.display()
        );
        Ok(CommandResult::new(EXIT_OK, summary, payload))
    };
    go().unwrap_or_else(Into::into)
}

pub fn cmd_equiv(a: &Path, b: &Path) -> CommandResult {
    let go = || -> Result<CommandResult, CliError> {
        let (da, db) = (load_program(a)?, load_program(b)?);
        if da.n_vertices() != db.n_vertices() {
            return Err(CliError::SizeMismatch { a: da.n_vertices(), b: db.n_vertices() });
        }
        let distance = phase_distance(&total_unitary(&da), &total_unitary(&db)).expect("same dimension");
        let equivalent = distance < tolerance::EQUIVALENCE;
        let summary = format!("distance {distance:.3e}: {}", if equivalent { "equivalent" } else { "not equivalent" });
        let payload = json!({ "distance": distance, "equivalent": equivalent });
        Ok(CommandResult::new(if equivalent { EXIT_OK } else { EXIT_VERIFY }, summary, payload))
    };
    go().unwrap_or_else(Into::into)
}

fn period_text(p: Period) -> String {
    match p {
        Period::Finite(t) => t.to_string(),
        Period::Infinite => "none".to_string(),
    }
}

pub fn cmd_stats(program: &Path) -> CommandResult {
    let go = || -> Result<CommandResult, CliError> {
        let dg = load_program(program)?;
        let total = dg.total_time();
        let mut lines = vec![
            format!("vertices: {}", dg.n_vertices()),
            format!("graphs: {}", dg.len()),
            format!("total time: {}", format_time(total)),
        ];
        let mut steps = Vec::new();
        for (k, s) in dg.steps().iter().enumerate() {
            let norm = s.graph.spectral_norm();
            let period = s.graph.period();
            lines.push(format!(
                "  G{}: {} edges, {} loops, t = {}, norm {:.6}, period {}",
                k + 1,
                s.graph.edges().len(),
                s.graph.loops().len(),
                s.duration,
                norm,
                period_text(period)
            ));
            steps.push(json!({
                "edges": s.graph.edges().len(),
                "loops": s.graph.loops().len(),
                "time": s.duration,
                "norm": norm,
                "period": match period { Period::Finite(t) => json!(t), Period::Infinite => Value::Null },
            }));
        }
        let payload = json!({
            "n_vertices": dg.n_vertices(),
            "graphs": dg.len(),
            "total_time": total,
            "total_time_decimal": total.radians(),
            "steps": steps,
        });
        Ok(CommandResult::new(EXIT_OK, lines.join("\n"), payload))
    };
    go().unwrap_or_else(Into::into)
}
