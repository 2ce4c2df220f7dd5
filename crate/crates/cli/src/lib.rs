// Copyright 2026 The QLUE Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.

//! The `qlue` command-line surface.
//!
//! [`run_cli`] is the whole program: it parses `argv`, writes the
//! human-readable report (or JSON with `--json`) to `out`, diagnostics to
//! `err`, and returns the process exit code. `main` is a thin wrapper, so
//! tests drive the real code path with captured streams.
//!
//! Exit codes: 0 success, 1 usage error, 2 input validation failure,
//! 3 numerical failure (non-convergence). Every failure prints a single
//! line starting with `error[usage]:`, `error[input]:` or `error[numeric]:`.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;
use serde::Deserialize;
use serde_json::json;

use qlue::audit::{self, StateSetDocument};
use qlue::equiv::{
    self, CounterexampleOutcome, CounterexampleParams, OneSidedOutcome, TwoSidedOutcome,
};
use qlue::linalg::{CMatrix, LinalgError};
use qlue::state::{Side, StateError, StateVector};

#[derive(Parser, Debug)]
#[command(
    name = "qlue",
    version,
    about = "Local-unitary relation analysis for bipartite pure quantum states",
    disable_help_subcommand = true
)]
struct Cli {
    /// Equality tolerance for all checks.
    #[arg(long, global = true, default_value_t = qlue::DEFAULT_TOL)]
    tol: f64,

    /// Emit JSON instead of the human-readable report.
    #[arg(long, global = true)]
    json: bool,

    /// Seed for test-data generation; echoed into reports for reproducibility.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Schmidt coefficients of each state in a document.
    Schmidt(DocArgs),
    /// Entanglement entropy (bits) of each state in a document.
    Entropy(DocArgs),
    /// Inner product between two named states.
    Overlap(PairArgs),
    /// Decide and construct a local-unitary witness between two states.
    Witness(WitnessArgs),
    /// Filter operator mapping the maximally entangled state to a state.
    Filter(FilterArgs),
    /// Best achievable one-sided overlap and its optimizer.
    MaxOverlap(MaxOverlapArgs),
    /// Closed-form 2x2 one-sided analysis for a|00>+b|11> vs b*|00>-a*|11>.
    Counterexample(CounterexampleArgs),
    /// Commutation gap between filter-first and filter-last application.
    Gap(InputArg),
    /// Classify a state set and fill the pairwise witness matrix.
    Audit(InputArg),
    /// Compose filter and two-sided witness; compare both orders.
    ChainCheck(PairArgs),
}

#[derive(Args, Debug)]
struct InputArg {
    /// Path to the JSON input document.
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args, Debug)]
struct DocArgs {
    #[arg(long)]
    input: PathBuf,

    /// Restrict to a single named state.
    #[arg(long)]
    state: Option<String>,
}

#[derive(Args, Debug)]
struct PairArgs {
    #[arg(long)]
    input: PathBuf,

    /// Name of the source state.
    #[arg(long)]
    from: String,

    /// Name of the target state.
    #[arg(long)]
    to: String,
}

#[derive(Args, Debug)]
struct WitnessArgs {
    #[command(flatten)]
    pair: PairArgs,

    /// Look for psi_to = e^{i theta} (U (x) I) psi_from (requires --side).
    #[arg(long)]
    one_sided: bool,

    /// Look for psi_to = e^{i theta} (V (x) W) psi_from.
    #[arg(long)]
    two_sided: bool,

    /// Which subsystem the one-sided unitary acts on.
    #[arg(long, value_enum)]
    side: Option<SideArg>,
}

#[derive(Args, Debug)]
struct FilterArgs {
    #[arg(long)]
    input: PathBuf,

    /// Defaults to the first state in the document.
    #[arg(long)]
    state: Option<String>,
}

#[derive(Args, Debug)]
struct MaxOverlapArgs {
    #[command(flatten)]
    pair: PairArgs,

    #[arg(long, value_enum, default_value_t = SideArg::A)]
    side: SideArg,
}

#[derive(Args, Debug)]
struct CounterexampleArgs {
    /// Amplitude a as "re,im".
    #[arg(long, value_parser = parse_complex)]
    a: C64Arg,

    /// Amplitude b as "re,im".
    #[arg(long, value_parser = parse_complex)]
    b: C64Arg,
}

#[derive(Clone, Copy, Debug)]
struct C64Arg(C64);

fn parse_complex(s: &str) -> Result<C64Arg, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected \"re,im\", got \"{s}\""));
    }
    let re: f64 = parts[0].trim().parse().map_err(|e| format!("bad real part: {e}"))?;
    let im: f64 = parts[1].trim().parse().map_err(|e| format!("bad imaginary part: {e}"))?;
    Ok(C64Arg(C64::new(re, im)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SideArg {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::A => Side::A,
            SideArg::B => Side::B,
        }
    }
}

enum CliError {
    Usage(String),
    Input(String),
    Numeric(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }

    fn prefix(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "error[usage]",
            CliError::Input(_) => "error[input]",
            CliError::Numeric(_) => "error[numeric]",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Input(m) | CliError::Numeric(m) => m,
        }
    }
}

fn classify_linalg(e: &LinalgError) -> CliError {
    match e {
        LinalgError::NonConvergence { .. } => CliError::Numeric(e.to_string()),
        LinalgError::NonFinite => CliError::Input(e.to_string()),
        _ => CliError::Numeric(e.to_string()),
    }
}

impl From<LinalgError> for CliError {
    fn from(e: LinalgError) -> Self {
        classify_linalg(&e)
    }
}

impl From<StateError> for CliError {
    fn from(e: StateError) -> Self {
        match e {
            StateError::Linalg(ref inner) => classify_linalg(inner),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<equiv::EquivError> for CliError {
    fn from(e: equiv::EquivError) -> Self {
        match e {
            equiv::EquivError::Linalg(ref inner) => classify_linalg(inner),
            equiv::EquivError::State(inner) => inner.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<audit::AuditError> for CliError {
    fn from(e: audit::AuditError) -> Self {
        CliError::Input(e.to_string())
    }
}

/// Runs the CLI against explicit arguments and streams.
///
/// `argv[0]` is the program name, as in `std::env::args`.
pub fn run_cli(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = writeln!(err, "error[usage]: {e}");
                    1
                }
            };
        }
    };

    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        let _ = writeln!(err, "error[usage]: --tol must be a positive finite number");
        return 1;
    }

    match dispatch(&cli) {
        Ok(rendered) => {
            let _ = write!(out, "{rendered}");
            0
        }
        Err(e) => {
            let _ = writeln!(err, "{}: {}", e.prefix(), e.message());
            e.exit_code()
        }
    }
}

/// Render context shared by all subcommands.
struct Ctx {
    tol: f64,
    json: bool,
    seed: Option<u64>,
}

impl Ctx {
    fn envelope(&self, command: &str, mut payload: serde_json::Value) -> String {
        let obj = payload.as_object_mut().expect("payload is an object");
        obj.insert("command".to_string(), json!(command));
        obj.insert("tol".to_string(), json!(self.tol));
        if let Some(seed) = self.seed {
            obj.insert("seed".to_string(), json!(seed));
        }
        let mut s = serde_json::to_string_pretty(&payload).expect("serializable");
        s.push('\n');
        s
    }

    fn header(&self, text: &mut String) {
        if let Some(seed) = self.seed {
            let _ = writeln!(text, "seed: {seed}");
        }
    }
}

fn dispatch(cli: &Cli) -> Result<String, CliError> {
    let ctx = Ctx { tol: cli.tol, json: cli.json, seed: cli.seed };
    match &cli.command {
        Command::Schmidt(args) => cmd_schmidt(&ctx, args),
        Command::Entropy(args) => cmd_entropy(&ctx, args),
        Command::Overlap(args) => cmd_overlap(&ctx, args),
        Command::Witness(args) => cmd_witness(&ctx, args),
        Command::Filter(args) => cmd_filter(&ctx, args),
        Command::MaxOverlap(args) => cmd_max_overlap(&ctx, args),
        Command::Counterexample(args) => cmd_counterexample(&ctx, args),
        Command::Gap(args) => cmd_gap(&ctx, args),
        Command::Audit(args) => cmd_audit(&ctx, args),
        Command::ChainCheck(args) => cmd_chain_check(&ctx, args),
    }
}

fn load_document(path: &Path, tol: f64) -> Result<StateSetDocument, CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    Ok(audit::parse_document(&bytes, tol)?)
}

fn lookup<'d>(doc: &'d StateSetDocument, name: &str) -> Result<&'d StateVector, CliError> {
    doc.get(name).ok_or_else(|| {
        let known: Vec<&str> = doc.names().collect();
        CliError::Input(format!("state '{name}' not found; document has {known:?}"))
    })
}

fn fmt_c(z: C64) -> String {
    format!("{:.6}{:+.6}i", z.re, z.im)
}

fn matrix_json(m: &CMatrix) -> serde_json::Value {
    let rows: Vec<Vec<[f64; 2]>> = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect();
    json!(rows)
}

fn write_matrix(text: &mut String, m: &CMatrix, indent: &str) {
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| fmt_c(m[(i, j)])).collect();
        let _ = writeln!(text, "{indent}[ {} ]", row.join("  "));
    }
}

fn selected_states<'d>(
    doc: &'d StateSetDocument,
    filter: &'d Option<String>,
) -> Result<Vec<(&'d str, &'d StateVector)>, CliError> {
    match filter {
        Some(name) => Ok(vec![(name.as_str(), lookup(doc, name)?)]),
        None => Ok(doc.states().iter().map(|(n, s)| (n.as_str(), s)).collect()),
    }
}

fn cmd_schmidt(ctx: &Ctx, args: &DocArgs) -> Result<String, CliError> {
    let doc = load_document(&args.input, ctx.tol)?;
    let states = selected_states(&doc, &args.state)?;

    let mut entries = Vec::new();
    let mut text = String::new();
    ctx.header(&mut text);
    for (name, psi) in states {
        let s = psi.schmidt(ctx.tol).map_err(CliError::from)?;
        entries.push(json!({
            "name": name,
            "coefficients": s.coefficients,
            "left_basis": matrix_json(&s.left_basis),
            "right_basis": matrix_json(&s.right_basis),
        }));
        let coeffs: Vec<String> = s.coefficients.iter().map(|c| format!("{c:.6}")).collect();
        let _ = writeln!(text, "state {name}: schmidt coefficients [{}]", coeffs.join(", "));
    }
    if ctx.json {
        let (da, db) = doc.dims();
        return Ok(ctx.envelope("schmidt", json!({"dims": [da, db], "states": entries})));
    }
    Ok(text)
}

fn cmd_entropy(ctx: &Ctx, args: &DocArgs) -> Result<String, CliError> {
    let doc = load_document(&args.input, ctx.tol)?;
    let states = selected_states(&doc, &args.state)?;

    let mut entries = Vec::new();
    let mut text = String::new();
    ctx.header(&mut text);
    for (name, psi) in states {
        let entropy = psi.entanglement_entropy().map_err(CliError::from)?;
        entries.push(json!({"name": name, "entropy_bits": entropy}));
        let _ = writeln!(text, "state {name}: entanglement entropy {entropy:.6} bits");
    }
    if ctx.json {
        let (da, db) = doc.dims();
        return Ok(ctx.envelope("entropy", json!({"dims": [da, db], "states": entries})));
    }
    Ok(text)
}

fn cmd_overlap(ctx: &Ctx, args: &PairArgs) -> Result<String, CliError> {
    let doc = load_document(&args.input, ctx.tol)?;
    let from = lookup(&doc, &args.from)?;
    let to = lookup(&doc, &args.to)?;
    let o = from.overlap(to).map_err(CliError::from)?;
    if ctx.json {
        return Ok(ctx.envelope(
            "overlap",
            json!({
                "from": args.from,
                "to": args.to,
                "overlap": [o.re, o.im],
                "magnitude": o.norm(),
            }),
        ));
    }
    let mut text = String::new();
    ctx.header(&mut text);
    let _ = writeln!(text, "<{}|{}> = {}  (magnitude {:.6})", args.from, args.to, fmt_c(o), o.norm());
    Ok(text)
}

fn cmd_witness(ctx: &Ctx, args: &WitnessArgs) -> Result<String, CliError> {
    if args.one_sided == args.two_sided {
        return Err(CliError::Usage(
            "exactly one of --one-sided or --two-sided is required".to_string(),
        ));
    }
    if args.one_sided && args.side.is_none() {
        return Err(CliError::Usage("--one-sided requires --side A|B".to_string()));
    }
    let doc = load_document(&args.pair.input, ctx.tol)?;
    let from = lookup(&doc, &args.pair.from)?;
    let to = lookup(&doc, &args.pair.to)?;

    if args.one_sided {
        let side: Side = args.side.unwrap().into();
        let outcome = equiv::one_sided_witness(from, to, side, ctx.tol)?;
        return Ok(render_one_sided(ctx, args, side, &outcome));
    }
    let outcome = equiv::two_sided_witness(from, to, ctx.tol)?;
    Ok(render_two_sided(ctx, args, &outcome))
}

fn render_one_sided(ctx: &Ctx, args: &WitnessArgs, side: Side, outcome: &OneSidedOutcome) -> String {
    match outcome {
        OneSidedOutcome::Witness(w) => {
            if ctx.json {
                return ctx.envelope(
                    "witness",
                    json!({
                        "kind": "one-sided",
                        "side": side.to_string(),
                        "from": args.pair.from,
                        "to": args.pair.to,
                        "found": true,
                        "unitary": matrix_json(&w.unitary),
                        "residual": w.residual,
                        "phase": w.phase,
                    }),
                );
            }
            let mut text = String::new();
            ctx.header(&mut text);
            let _ = writeln!(
                text,
                "WITNESS (one-sided, side {side}): {} -> {}",
                args.pair.from, args.pair.to
            );
            let _ = writeln!(text, "phase: {:.6} rad, residual: {:.3e}", w.phase, w.residual);
            let _ = writeln!(text, "U =");
            write_matrix(&mut text, &w.unitary, "  ");
            text
        }
        OneSidedOutcome::NoWitness { reduced_state_gap } => {
            if ctx.json {
                return ctx.envelope(
                    "witness",
                    json!({
                        "kind": "one-sided",
                        "side": side.to_string(),
                        "from": args.pair.from,
                        "to": args.pair.to,
                        "found": false,
                        "reduced_state_gap": reduced_state_gap,
                    }),
                );
            }
            let mut text = String::new();
            ctx.header(&mut text);
            let _ = writeln!(text, "NO WITNESS (one-sided, side {side}): {} -> {}", args.pair.from, args.pair.to);
            let _ = writeln!(text, "reduced-state gap on the untouched side: {reduced_state_gap:.6}");
            text
        }
    }
}

fn render_two_sided(ctx: &Ctx, args: &WitnessArgs, outcome: &TwoSidedOutcome) -> String {
    match outcome {
        TwoSidedOutcome::Witness(w) => {
            if ctx.json {
                return ctx.envelope(
                    "witness",
                    json!({
                        "kind": "two-sided",
                        "from": args.pair.from,
                        "to": args.pair.to,
                        "found": true,
                        "unitary_a": matrix_json(&w.unitary_a),
                        "unitary_b": matrix_json(&w.unitary_b),
                        "residual": w.residual,
                        "phase": w.phase,
                    }),
                );
            }
            let mut text = String::new();
            ctx.header(&mut text);
            let _ = writeln!(text, "WITNESS (two-sided): {} -> {}", args.pair.from, args.pair.to);
            let _ = writeln!(text, "phase: {:.6} rad, residual: {:.3e}", w.phase, w.residual);
            let _ = writeln!(text, "V (side A) =");
            write_matrix(&mut text, &w.unitary_a, "  ");
            let _ = writeln!(text, "W (side B) =");
            write_matrix(&mut text, &w.unitary_b, "  ");
            text
        }
        TwoSidedOutcome::NoWitness { spectrum_gap, spectrum_first, spectrum_second } => {
            if ctx.json {
                return ctx.envelope(
                    "witness",
                    json!({
                        "kind": "two-sided",
                        "from": args.pair.from,
                        "to": args.pair.to,
                        "found": false,
                        "spectrum_gap": spectrum_gap,
                        "spectrum_from": spectrum_first,
                        "spectrum_to": spectrum_second,
                    }),
                );
            }
            let mut text = String::new();
            ctx.header(&mut text);
            let _ = writeln!(text, "NO WITNESS (two-sided): {} -> {}", args.pair.from, args.pair.to);
            let _ = writeln!(text, "schmidt spectra differ by {spectrum_gap:.6}");
            let _ = writeln!(text, "spectrum({}) = {:?}", args.pair.from, spectrum_first);
            let _ = writeln!(text, "spectrum({}) = {:?}", args.pair.to, spectrum_second);
            text
        }
    }
}

fn cmd_filter(ctx: &Ctx, args: &FilterArgs) -> Result<String, CliError> {
    let doc = load_document(&args.input, ctx.tol)?;
    let (name, psi) = match &args.state {
        Some(name) => (name.as_str(), lookup(&doc, name)?),
        None => {
            let (n, s) = &doc.states()[0];
            (n.as_str(), s)
        }
    };
    let filter = equiv::filter_from_max_entangled(psi, ctx.tol)?;
    if ctx.json {
        return Ok(ctx.envelope(
            "filter",
            json!({
                "state": name,
                "matrix": matrix_json(&filter.matrix),
                "success_probability": filter.success_probability,
            }),
        ));
    }
    let mut text = String::new();
    ctx.header(&mut text);
    let _ = writeln!(text, "filter for state {name} (success probability {:.6}):", filter.success_probability);
    let _ = writeln!(text, "M =");
    write_matrix(&mut text, &filter.matrix, "  ");
    Ok(text)
}

fn cmd_max_overlap(ctx: &Ctx, args: &MaxOverlapArgs) -> Result<String, CliError> {
    let doc = load_document(&args.pair.input, ctx.tol)?;
    let from = lookup(&doc, &args.pair.from)?;
    let to = lookup(&doc, &args.pair.to)?;
    let side: Side = args.side.into();
    let result = equiv::max_overlap_one_sided(from, to, side)?;
    if ctx.json {
        return Ok(ctx.envelope(
            "max-overlap",
            json!({
                "from": args.pair.from,
                "to": args.pair.to,
                "side": side.to_string(),
                "value": result.value,
                "optimizer": matrix_json(&result.optimizer),
            }),
        ));
    }
    let mut text = String::new();
    ctx.header(&mut text);
    let _ = writeln!(
        text,
        "max one-sided overlap (side {side}) {} -> {}: {:.6}",
        args.pair.from, args.pair.to, result.value
    );
    let _ = writeln!(text, "optimizer U =");
    write_matrix(&mut text, &result.optimizer, "  ");
    Ok(text)
}

fn cmd_counterexample(ctx: &Ctx, args: &CounterexampleArgs) -> Result<String, CliError> {
    let raw_a = args.a.0;
    let raw_b = args.b.0;
    // Accept slightly off-normalized command-line values; the pair is only
    // defined up to joint scale.
    let norm = (raw_a.norm_sqr() + raw_b.norm_sqr()).sqrt();
    if norm < 1e-12 {
        return Err(CliError::Input("a and b must not both be zero".to_string()));
    }
    let renormalized = (norm - 1.0).abs() > 1e-12;
    let a = raw_a / norm;
    let b = raw_b / norm;
    let params = CounterexampleParams::new(a, b, ctx.tol)?;
    let outcome = equiv::solve_one_sided_2x2(&params, ctx.tol)?;

    match outcome {
        CounterexampleOutcome::Solution { unitary, residual } => {
            if ctx.json {
                return Ok(ctx.envelope(
                    "counterexample",
                    json!({
                        "a": [a.re, a.im],
                        "b": [b.re, b.im],
                        "renormalized": renormalized,
                        "outcome": "solution",
                        "alpha": [unitary.alpha.re, unitary.alpha.im],
                        "beta": [unitary.beta.re, unitary.beta.im],
                        "lambda": [unitary.lambda.re, unitary.lambda.im],
                        "unitary": matrix_json(&unitary.matrix()),
                        "residual": residual,
                    }),
                ));
            }
            let mut text = String::new();
            ctx.header(&mut text);
            let _ = writeln!(text, "SOLUTION: |a| = |b|, one-sided unitary exists");
            let _ = writeln!(
                text,
                "alpha = {}, beta = {}, lambda = {}",
                fmt_c(unitary.alpha),
                fmt_c(unitary.beta),
                fmt_c(unitary.lambda)
            );
            let _ = writeln!(text, "residual: {residual:.3e}");
            let _ = writeln!(text, "U =");
            write_matrix(&mut text, &unitary.matrix(), "  ");
            Ok(text)
        }
        CounterexampleOutcome::Inconsistent(report) => {
            if ctx.json {
                return Ok(ctx.envelope(
                    "counterexample",
                    json!({
                        "a": [a.re, a.im],
                        "b": [b.re, b.im],
                        "renormalized": renormalized,
                        "outcome": "inconsistent",
                        "modulus_for_component00": report.modulus_for_component00,
                        "modulus_for_component11": report.modulus_for_component11,
                    }),
                ));
            }
            let mut text = String::new();
            ctx.header(&mut text);
            let _ = writeln!(text, "INCONSISTENT: no one-sided unitary exists for |a| != |b|");
            let _ = writeln!(
                text,
                "matching the |00> amplitude needs |alpha| = {:.6}, matching |11> needs |alpha| = {:.6}",
                report.modulus_for_component00, report.modulus_for_component11
            );
            Ok(text)
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GapDocument {
    dims: [usize; 2],
    m: Vec<Vec<[f64; 2]>>,
    v: Vec<Vec<[f64; 2]>>,
    w: Vec<Vec<[f64; 2]>>,
    state: Vec<[f64; 2]>,
}

fn matrix_from_rows(rows: &[Vec<[f64; 2]>], expect: usize, name: &str) -> Result<CMatrix, CliError> {
    if rows.len() != expect || rows.iter().any(|r| r.len() != expect) {
        return Err(CliError::Input(format!("operator '{name}' must be {expect}x{expect}")));
    }
    let data: Vec<C64> = rows.iter().flatten().map(|&[re, im]| C64::new(re, im)).collect();
    Ok(CMatrix::from_vec(expect, expect, data))
}

fn cmd_gap(ctx: &Ctx, args: &InputArg) -> Result<String, CliError> {
    let bytes = std::fs::read(&args.input)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", args.input.display())))?;
    let doc: GapDocument = serde_json::from_slice(&bytes)
        .map_err(|e| CliError::Input(format!("gap document: {e}")))?;
    let [da, db] = doc.dims;
    if da == 0 || db == 0 {
        return Err(CliError::Input("dims must both be at least 1".to_string()));
    }
    let m = matrix_from_rows(&doc.m, da, "m")?;
    let v = matrix_from_rows(&doc.v, da, "v")?;
    let w = matrix_from_rows(&doc.w, db, "w")?;
    if doc.state.len() != da * db {
        return Err(CliError::Input(format!(
            "state has {} amplitudes, expected {}",
            doc.state.len(),
            da * db
        )));
    }
    let amps: Vec<C64> = doc.state.iter().map(|&[re, im]| C64::new(re, im)).collect();
    let phi = StateVector::new(da, db, amps, ctx.tol).map_err(CliError::from)?;
    let gap = equiv::commutation_gap(&m, &v, &w, &phi)?;
    if ctx.json {
        return Ok(ctx.envelope("gap", json!({"dims": [da, db], "value": gap})));
    }
    let mut text = String::new();
    ctx.header(&mut text);
    let _ = writeln!(text, "commutation gap: {gap:.6}");
    Ok(text)
}

fn cmd_audit(ctx: &Ctx, args: &InputArg) -> Result<String, CliError> {
    let doc = load_document(&args.input, ctx.tol)?;
    let report = audit::audit(&doc, ctx.tol);
    if ctx.json {
        return Ok(ctx.envelope("audit", json!({"report": report})));
    }
    let mut text = String::new();
    ctx.header(&mut text);
    let _ = writeln!(text, "classification: {}", report.classification);
    let _ = writeln!(
        text,
        "orthogonal: {} (max off-diagonal overlap {:.3e})",
        yes_no(report.orthogonal),
        report.max_offdiagonal_overlap
    );
    let _ = writeln!(text, "equally entangled: {}", yes_no(report.equally_entangled));
    let _ = writeln!(text, "equal entropies: {}", yes_no(report.equal_entropies));
    let _ = writeln!(text, "maximally entangled: {}", yes_no(report.maximally_entangled));
    let _ = writeln!(text, "states:");
    for s in &report.states {
        let coeffs: Vec<String> = s.schmidt_coefficients.iter().map(|c| format!("{c:.6}")).collect();
        match &s.error {
            None => {
                let _ = writeln!(
                    text,
                    "  {}: coefficients [{}], entropy {:.6} bits",
                    s.name,
                    coeffs.join(", "),
                    s.entropy_bits
                );
            }
            Some(e) => {
                let _ = writeln!(text, "  {}: error: {e}", s.name);
            }
        }
    }
    let _ = writeln!(text, "pairs (from -> to):");
    for p in &report.pairs {
        if p.from == p.to {
            continue;
        }
        match &p.error {
            None => {
                let _ = writeln!(
                    text,
                    "  {} -> {}: one-sided A {}, one-sided B {}, two-sided {}, max overlap A {:.6} B {:.6}",
                    p.from,
                    p.to,
                    yes_no(p.one_sided_a),
                    yes_no(p.one_sided_b),
                    yes_no(p.two_sided),
                    p.max_overlap_a,
                    p.max_overlap_b
                );
            }
            Some(e) => {
                let _ = writeln!(text, "  {} -> {}: error: {e}", p.from, p.to);
            }
        }
    }
    Ok(text)
}

fn cmd_chain_check(ctx: &Ctx, args: &PairArgs) -> Result<String, CliError> {
    let doc = load_document(&args.input, ctx.tol)?;
    let from = lookup(&doc, &args.from)?;
    let to = lookup(&doc, &args.to)?;
    let report = equiv::relation_chain_check(from, to, ctx.tol)?;
    if ctx.json {
        return Ok(ctx.envelope(
            "chain-check",
            json!({
                "from": args.from,
                "to": args.to,
                "success_probability": report.filter.success_probability,
                "filter_first_residual": report.filter_first_residual,
                "filter_last_residual": report.filter_last_residual,
                "filter_last_holds": report.filter_last_holds,
            }),
        ));
    }
    let mut text = String::new();
    ctx.header(&mut text);
    let _ = writeln!(text, "chain check {} -> {}:", args.from, args.to);
    let _ = writeln!(
        text,
        "filter-first order (rotations after filter): residual {:.3e}",
        report.filter_first_residual
    );
    let _ = writeln!(
        text,
        "filter-last order (rotations before filter): residual {:.3e}",
        report.filter_last_residual
    );
    let _ = writeln!(text, "filter-last order holds: {}", yes_no(report.filter_last_holds));
    let _ = writeln!(text, "filter success probability: {:.6}", report.filter.success_probability);
    Ok(text)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
