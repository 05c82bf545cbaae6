// SPDX-License-Identifier: Apache-2.0

//! `gf2rev`: synthesis, simulation, verification and resource estimation
//! for reversible GF(2^m) inversion and elliptic-curve point addition.
//!
//! Exit status: 0 when everything checks out, 1 on a verification
//! mismatch, 2 on bad usage or configuration.

mod trace;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use gf2rev::blocks::{
    build_conditional_xor, build_controlled_shift, build_cyclic_shift, build_decrement,
    build_degree, build_increment, build_mul_accumulate, build_swap, ShiftDirection,
};
use gf2rev::circuit::{parse_netlist, to_netlist};
use gf2rev::circuit::{BasisState, Circuit};
use gf2rev::config::{load_curve, load_field};
use gf2rev::curve::{CurvePoint, CurveSpec};
use gf2rev::ecgroup::{Backend, FixedPointParams, GroupAdder};
use gf2rev::naive::{
    build_euclid_iteration, build_naive_long_division, run_naive_inversion_traced,
};
use gf2rev::optimized::{
    budget_breakdown, estimate_costs, opt_layout, qubit_budget, run_synchronized, OptParams,
};
use gf2rev::{BinaryPolynomial, FieldSpec};

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Parser)]
#[command(
    name = "gf2rev",
    version,
    about = "Reversible GF(2^m) inversion and point-addition circuits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a circuit block and emit its netlist.
    Synth(SynthArgs),
    /// Simulate a netlist on one basis state.
    Run(RunArgs),
    /// Check a construction against its classical oracle.
    Verify(verify::VerifyArgs),
    /// Qubit budget and gate estimates of the synchronized inverter.
    Estimate(EstimateArgs),
    /// Step-by-step tableau of the synchronized inverter or of one division.
    Trace(trace::TraceArgs),
    /// Run the naive long-division circuit on one pair.
    NaiveDiv(NaiveDivArgs),
    /// Invert one element with the naive Euclid circuit.
    NaiveInvert(InvertArgs),
    /// Invert elements with the synchronized Euclid machine.
    OptInvert(OptInvertArgs),
    /// Add a fixed point to a point with the reversible group operation.
    EcAdd(EcAddArgs),
}

/// Field selection: a config file, or the standard modulus for `--m`.
#[derive(Args, Clone)]
pub struct FieldArgs {
    #[arg(long, conflicts_with = "m")]
    pub field: Option<PathBuf>,
    #[arg(long)]
    pub m: Option<usize>,
}

impl FieldArgs {
    pub fn resolve(&self) -> Result<FieldSpec> {
        match (&self.field, self.m) {
            (Some(path), _) => Ok(load_field(path)?),
            (None, Some(m)) => Ok(FieldSpec::standard(m)?),
            (None, None) => bail!("give --field <file> or --m <degree>"),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Block {
    Swap,
    Shiftl,
    Shiftr,
    Cshift,
    Inc,
    Dec,
    Deg,
    Cxor,
    Mulacc,
    NaiveDiv,
    EuclidIter,
}

#[derive(Args)]
struct SynthArgs {
    block: Block,
    /// Field degree (deg, cxor, mulacc, naive-div, euclid-iter).
    #[arg(long)]
    m: Option<usize>,
    /// Register width (shifts, inc, dec, cshift).
    #[arg(long)]
    n: Option<usize>,
    /// Shift-amount register width (cshift).
    #[arg(long)]
    k: Option<usize>,
    /// Field config for mulacc; overrides --m.
    #[arg(long)]
    field: Option<PathBuf>,
    /// Write the netlist here and the resource report to stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    netlist: PathBuf,
    /// Initial register value, `NAME=BITS` with the most significant bit first.
    #[arg(long = "set", value_name = "NAME=BITS")]
    set: Vec<String>,
    /// Run the inverse circuit.
    #[arg(long)]
    inverse: bool,
}

#[derive(Args)]
struct EstimateArgs {
    /// Field degrees, repeatable.
    #[arg(long, required = true)]
    m: Vec<usize>,
    /// Halting-counter width; defaults to the one implied by the cycle budget.
    #[arg(long)]
    h: Option<usize>,
    #[arg(long)]
    cycles: Option<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct NaiveDivArgs {
    #[arg(long)]
    m: usize,
    /// Divisor.
    #[arg(long = "a")]
    divisor: String,
    /// Dividend.
    #[arg(long = "b")]
    dividend: String,
}

#[derive(Args)]
struct InvertArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    element: String,
}

#[derive(Args)]
struct OptInvertArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Comma-separated elements, or `all`.
    #[arg(long, default_value = "all")]
    inputs: String,
    #[arg(long)]
    cycles: Option<usize>,
}

#[derive(Args)]
struct EcAddArgs {
    #[arg(long)]
    curve: PathBuf,
    /// Fixed point `x,y`.
    #[arg(long)]
    fixed: String,
    /// Point `x,y` to add to; omit with --all-generic.
    #[arg(long, required_unless_present = "all_generic")]
    point: Option<String>,
    #[arg(long, default_value = "opt")]
    backend: String,
    /// Add the fixed point to every point where the construction applies.
    #[arg(long)]
    all_generic: bool,
}

pub fn poly(s: &str) -> Result<BinaryPolynomial> {
    s.parse().with_context(|| format!("bad polynomial {s:?}"))
}

pub fn point(s: &str) -> Result<CurvePoint> {
    if matches!(s.trim(), "O" | "inf" | "infinity") {
        return Ok(CurvePoint::Infinity);
    }
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| anyhow!("point {s:?} is not of the form x,y"))?;
    Ok(CurvePoint::affine(poly(x.trim())?, poly(y.trim())?))
}

pub fn point_json(p: &CurvePoint) -> Value {
    match p.coords() {
        Some((x, y)) => json!({ "x": x.to_string(), "y": y.to_string() }),
        None => json!("O"),
    }
}

pub fn print_json<T: serde::Serialize + ?Sized>(v: &T) -> Result<()> {
    emit(&format!("{}\n", serde_json::to_string_pretty(v)?))
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
pub fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn need(v: Option<usize>, flag: &str) -> Result<usize> {
    v.ok_or_else(|| anyhow!("this block needs --{flag}"))
}

fn synth(args: &SynthArgs) -> Result<()> {
    let circuit: Circuit = match args.block {
        Block::Swap => build_swap(),
        Block::Shiftl => build_cyclic_shift(need(args.n, "n")?, ShiftDirection::Left)?,
        Block::Shiftr => build_cyclic_shift(need(args.n, "n")?, ShiftDirection::Right)?,
        Block::Cshift => build_controlled_shift(need(args.n, "n")?, need(args.k, "k")?)?,
        Block::Inc => build_increment(need(args.n, "n")?)?,
        Block::Dec => build_decrement(need(args.n, "n")?)?,
        Block::Deg => build_degree(need(args.m, "m")?)?,
        Block::Cxor => build_conditional_xor(need(args.m, "m")?)?,
        Block::Mulacc => {
            let field = FieldArgs {
                field: args.field.clone(),
                m: args.m,
            }
            .resolve()?;
            build_mul_accumulate(&field)
        }
        Block::NaiveDiv => build_naive_long_division(need(args.m, "m")?)?,
        Block::EuclidIter => build_euclid_iteration(need(args.m, "m")?)?,
    };
    let text = to_netlist(&circuit);
    let report = serde_json::to_string_pretty(&circuit.report())?;
    match &args.output {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
            emit(&format!("{report}\n"))?;
        }
        None => {
            emit(&text)?;
            eprintln!("{report}");
        }
    }
    Ok(())
}

fn run_netlist(args: &RunArgs) -> Result<()> {
    let text = std::fs::read_to_string(&args.netlist)
        .with_context(|| format!("reading {}", args.netlist.display()))?;
    let mut circuit = parse_netlist(&text)?;
    if args.inverse {
        circuit = circuit.inverse();
    }
    let layout = circuit.layout().clone();
    let mut state = BasisState::for_layout(&layout);
    for item in &args.set {
        let (name, bits) = item
            .split_once('=')
            .ok_or_else(|| anyhow!("--set expects NAME=BITS, got {item:?}"))?;
        let reg = layout
            .register(name)
            .ok_or_else(|| anyhow!("no register {name:?} in the netlist"))?;
        state.write_poly(reg, &poly(bits)?)?;
    }
    let out = circuit.apply(&state)?;
    let regs: serde_json::Map<String, Value> = layout
        .registers()
        .iter()
        .map(|r| {
            let bits: String = out
                .read_bits(r)
                .iter()
                .rev()
                .map(|&b| if b { '1' } else { '0' })
                .collect();
            (r.name.clone(), json!(bits))
        })
        .collect();
    print_json(&json!({ "gates": circuit.len(), "registers": regs }))
}

fn estimate(args: &EstimateArgs) -> Result<()> {
    let mut rows = Vec::new();
    for &m in &args.m {
        let pr = OptParams::new(
            m,
            args.cycles.unwrap_or_else(|| OptParams::default_cycles(m)),
        )?;
        let h = args.h.unwrap_or(pr.h_width);
        let mut layout_pr = pr;
        layout_pr.h_width = h;
        let terms = budget_breakdown(m, h);
        let costs = estimate_costs(&pr);
        rows.push(json!({
            "m": m,
            "cycles": pr.cycles,
            "h": h,
            "formula": qubit_budget(m, h),
            "formula_without_h": qubit_budget(m, 0),
            "layout": opt_layout(&layout_pr).width(),
            "terms": terms.iter().map(|t| json!({ "term": t.name, "qubits": t.qubits })).collect::<Vec<_>>(),
            "estimated_gates_per_round": costs.per_round,
            "estimated_gates_total": costs.total,
        }));
    }
    if args.json {
        return print_json(&rows);
    }
    let mut table = format!(
        "{:>4} {:>8} {:>4} {:>8} {:>4} {:>4} {:>8} {:>8} {:>7} {:>8} {:>12}\n",
        "m",
        "A,B,a,b",
        "q",
        "degrees",
        "f,c",
        "H",
        "formula",
        "w/o H",
        "layout",
        "cycles",
        "est. gates"
    );
    for r in &rows {
        let n = |k: &str| r[k].as_u64().unwrap_or(0);
        let t = |i: usize| r["terms"][i]["qubits"].as_u64().unwrap_or(0);
        table += &format!(
            "{:>4} {:>8} {:>4} {:>8} {:>4} {:>4} {:>8} {:>8} {:>7} {:>8} {:>12}\n",
            n("m"),
            t(0),
            t(1),
            t(2),
            t(3),
            t(4),
            n("formula"),
            n("formula_without_h"),
            n("layout"),
            n("cycles"),
            n("estimated_gates_total"),
        );
    }
    emit(&table)
}

fn naive_div(args: &NaiveDivArgs) -> Result<bool> {
    let c = build_naive_long_division(args.m)?;
    let l = c.layout().clone();
    let (a, b) = (poly(&args.divisor)?, poly(&args.dividend)?);
    if a.is_zero() {
        bail!("divisor must be nonzero");
    }
    let mut s = BasisState::for_layout(&l);
    s.write_poly(l.reg("A"), &a)?;
    s.write_poly(l.reg("B"), &b)?;
    let out = c.apply(&s)?;
    let (q, r) = (out.read_poly(l.reg("q")), out.read_poly(l.reg("B")));
    let (eq, er) = b.divmod(&a)?;
    let ok = q == eq && r == er && out.read(l.reg("i")) == 0 && out.read(l.reg("anc")) == 0;
    print_json(&json!({
        "a": a.to_string(), "b": b.to_string(), "q": q.to_string(), "r": r.to_string(),
        "oracle_match": ok, "width": c.width(), "gates": c.len(),
    }))?;
    Ok(ok)
}

fn naive_invert(args: &InvertArgs) -> Result<bool> {
    let field = args.field.resolve()?;
    let c = field.element(poly(&args.element)?)?;
    let run = run_naive_inversion_traced(&c, &field)?;
    let ok = run.inverse == field.invert(&c)?;
    print_json(&json!({
        "input": c.to_string(),
        "inverse": run.inverse.to_string(),
        "oracle_match": ok,
        "iterations": run.iterations,
        "width": run.width,
        "gates_per_iteration": run.gates_per_iteration,
        "trace": run.trace,
    }))?;
    Ok(ok)
}

fn opt_invert(args: &OptInvertArgs) -> Result<bool> {
    let field = args.field.resolve()?;
    let inputs: Vec<BinaryPolynomial> = if args.inputs.trim() == "all" {
        field.nonzero_elements().collect()
    } else {
        args.inputs
            .split(',')
            .map(|s| Ok(field.element(poly(s.trim())?)?))
            .collect::<Result<_>>()?
    };
    let report = run_synchronized(
        &inputs,
        &field,
        args.cycles
            .unwrap_or_else(|| OptParams::default_cycles(field.m())),
    )?;
    let mut ok = true;
    let outcomes: Vec<Value> = report
        .outcomes
        .iter()
        .map(|o| {
            let expected = field.invert(&o.input).ok();
            let matched = o.fidelity_loss || o.inverse == expected;
            ok &= matched;
            json!({
                "input": o.input.to_string(),
                "inverse": o.inverse.as_ref().map(|v| v.to_string()),
                "h": o.h,
                "iterations": o.iterations,
                "fidelity_loss": o.fidelity_loss,
                "oracle_match": matched,
            })
        })
        .collect();
    print_json(&json!({
        "m": report.m, "cycles": report.cycles, "h_width": report.h_width, "width": report.width,
        "schedule_len": report.schedule_len, "outcomes": outcomes,
    }))?;
    Ok(ok)
}

fn ec_add(args: &EcAddArgs) -> Result<bool> {
    let curve: CurveSpec = load_curve(&args.curve)?;
    let backend: Backend = args.backend.parse()?;
    let (ax, ay) = match point(&args.fixed)? {
        CurvePoint::Affine { x, y } => (x, y),
        CurvePoint::Infinity => bail!("the fixed point must be affine"),
    };
    let adder = GroupAdder::new(FixedPointParams::new(curve.clone(), ax, ay)?, backend)?;
    let targets = match &args.point {
        Some(p) if !args.all_generic => vec![point(p)?],
        _ => curve
            .points()
            .into_iter()
            .filter(|s| adder.check_generic(s).is_ok())
            .collect(),
    };
    let mut ok = true;
    let mut results = Vec::new();
    for s in &targets {
        let got = adder.add(s)?;
        let expected = curve.add(s, &adder.params.point())?;
        ok &= got == expected;
        results.push(json!({ "point": point_json(s), "sum": point_json(&got), "oracle_match": got == expected }));
    }
    print_json(&json!({
        "fixed": point_json(&adder.params.point()),
        "plan": adder.plan,
        "resources": adder.resources()?,
        "results": results,
    }))?;
    Ok(ok)
}

fn dispatch(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Synth(a) => synth(a).map(|_| true),
        Command::Run(a) => run_netlist(a).map(|_| true),
        Command::Verify(a) => verify::run(a),
        Command::Estimate(a) => estimate(a).map(|_| true),
        Command::Trace(a) => trace::run(a).map(|_| true),
        Command::NaiveDiv(a) => naive_div(a),
        Command::NaiveInvert(a) => naive_invert(a),
        Command::OptInvert(a) => opt_invert(a),
        Command::EcAdd(a) => ec_add(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
