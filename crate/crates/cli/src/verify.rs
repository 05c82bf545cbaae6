// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, ValueEnum};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use serde_json::{json, Map, Value};

use gf2rev::blocks::{
    build_conditional_xor, build_controlled_shift, build_cyclic_shift, build_decrement,
    build_degree, build_increment, build_mul_accumulate, build_swap, ceil_log2, ShiftDirection,
};
use gf2rev::circuit::{BasisState, Circuit};
use gf2rev::config::load_curve;
use gf2rev::curve::CurvePoint;
use gf2rev::ecgroup::{Backend, FixedPointParams, GroupAdder};
use gf2rev::naive::{build_euclid_iteration, build_naive_long_division, run_naive_inversion};
use gf2rev::optimized::{check_quotient_bound, run_synchronized, OptParams};
use gf2rev::{BinaryPolynomial, FieldSpec};

use crate::{point, point_json, print_json, FieldArgs, DEFAULT_SEED};

const EXHAUSTIVE_LIMIT: u64 = 1 << 20;
const MAX_COUNTEREXAMPLES: usize = 10;

#[derive(Clone, Copy, ValueEnum)]
pub enum Target {
    Blocks,
    NaiveDiv,
    NaiveInvert,
    OptInvert,
    EcAdd,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum BackendChoice {
    Naive,
    Opt,
    Both,
}

#[derive(Args)]
pub struct VerifyArgs {
    target: Target,
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    curve: Option<PathBuf>,
    /// Check every case (the default).
    #[arg(long, conflicts_with = "sample")]
    exhaustive: bool,
    /// Check this many seeded-random cases instead.
    #[arg(long)]
    sample: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value = "both")]
    backend: BackendChoice,
    /// ec-add: restrict to one fixed point `x,y`.
    #[arg(long)]
    fixed: Option<String>,
    /// ec-add: every generic point (the default scope).
    #[arg(long)]
    all_generic: bool,
}

impl VerifyArgs {
    fn backends(&self) -> Vec<Backend> {
        match self.backend {
            BackendChoice::Naive => vec![Backend::Naive],
            BackendChoice::Opt => vec![Backend::Optimized],
            BackendChoice::Both => vec![Backend::Naive, Backend::Optimized],
        }
    }

    fn scope(&self) -> String {
        match self.sample {
            Some(n) => format!("sample:{n}"),
            None => "exhaustive".into(),
        }
    }
}

struct Tally {
    checked: u64,
    counterexamples: Vec<Value>,
    mismatches: u64,
    extra: Map<String, Value>,
}

impl Tally {
    fn new() -> Self {
        Self {
            checked: 0,
            counterexamples: Vec::new(),
            mismatches: 0,
            extra: Map::new(),
        }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> Value) {
        self.checked += 1;
        if !ok {
            self.mismatches += 1;
            if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
                self.counterexamples.push(detail());
            }
        }
    }
}

fn guard_exhaustive(states: u64) -> Result<()> {
    if states > EXHAUSTIVE_LIMIT {
        bail!("scope too large: {states} cases exceed the exhaustive limit of {EXHAUSTIVE_LIMIT}; use --sample");
    }
    Ok(())
}

fn random_nonzero(field: &FieldSpec, rng: &mut StdRng) -> BinaryPolynomial {
    field.from_u64(rng.gen_range(1..field.order()))
}

fn elements(
    args: &VerifyArgs,
    field: &FieldSpec,
    rng: &mut StdRng,
) -> Result<Vec<BinaryPolynomial>> {
    match args.sample {
        Some(n) => Ok((0..n).map(|_| random_nonzero(field, rng)).collect()),
        None => {
            guard_exhaustive(field.order() - 1)?;
            Ok(field.nonzero_elements().collect())
        }
    }
}

fn naive_div(args: &VerifyArgs, t: &mut Tally, rng: &mut StdRng) -> Result<()> {
    let m = args.field.resolve()?.m();
    let c = build_naive_long_division(m)?;
    let l = c.layout().clone();
    let top = 1u64 << (m + 1);
    let pairs: Vec<(u64, u64)> = match args.sample {
        Some(n) => (0..n)
            .map(|_| (rng.gen_range(1..top), rng.gen_range(0..top)))
            .collect(),
        None => {
            guard_exhaustive((top - 1) * top)?;
            (1..top)
                .flat_map(|a| (0..top).map(move |b| (a, b)))
                .collect()
        }
    };
    let mut cases: Vec<(BinaryPolynomial, BinaryPolynomial)> = pairs
        .into_iter()
        .map(|(a, b)| (BinaryPolynomial::from_u64(a), BinaryPolynomial::from_u64(b)))
        .collect();
    if m >= 4 {
        cases.push(("101".parse()?, "10101".parse()?));
    }
    for (a, b) in cases {
        let mut s = BasisState::for_layout(&l);
        s.write_poly(l.reg("A"), &a)?;
        s.write_poly(l.reg("B"), &b)?;
        let out = c.apply(&s)?;
        let (q, r) = b.divmod(&a)?;
        let (gq, gr) = (out.read_poly(l.reg("q")), out.read_poly(l.reg("B")));
        let clean = out.read(l.reg("i")) == 0
            && out.read(l.reg("anc")) == 0
            && out.read_poly(l.reg("A")) == a;
        t.record(gq == q && gr == r && clean, || {
            json!({ "a": a.to_string(), "b": b.to_string(), "q": gq.to_string(), "r": gr.to_string() })
        });
    }
    Ok(())
}

fn naive_invert(args: &VerifyArgs, t: &mut Tally, rng: &mut StdRng) -> Result<()> {
    let field = args.field.resolve()?;
    for c in elements(args, &field, rng)? {
        let got = run_naive_inversion(&c, &field)?;
        let want = field.invert(&c)?;
        t.record(
            got == want,
            || json!({ "input": c.to_string(), "got": got.to_string(), "want": want.to_string() }),
        );
    }
    Ok(())
}

fn opt_invert(args: &VerifyArgs, t: &mut Tally, rng: &mut StdRng) -> Result<()> {
    let field = args.field.resolve()?;
    let inputs = elements(args, &field, rng)?;
    let report = run_synchronized(&inputs, &field, OptParams::default_cycles(field.m()))?;
    let mut dropped = 0u64;
    for o in &report.outcomes {
        if o.fidelity_loss {
            dropped += 1;
            continue;
        }
        let want = field.invert(&o.input)?;
        t.record(o.inverse.as_ref() == Some(&want), || {
            json!({ "input": o.input.to_string(), "got": o.inverse.as_ref().map(|v| v.to_string()), "want": want.to_string() })
        });
    }
    let qb = check_quotient_bound(&field, Some(&inputs))?;
    t.extra.insert("dropped".into(), json!(dropped));
    t.extra
        .insert("schedule_len".into(), json!(report.schedule_len));
    t.extra.insert("width".into(), json!(report.width));
    t.extra.insert("quotient_bits".into(), json!(qb.q_bits));
    t.extra
        .insert("quotient_overflow_fraction".into(), json!(qb.fraction));
    t.extra
        .insert("quotient_overflow_bound".into(), json!(qb.bound));
    if qb.fraction > qb.bound {
        t.mismatches += 1;
        t.counterexamples
            .push(json!({ "quotient_overflow_fraction": qb.fraction, "bound": qb.bound }));
    }
    Ok(())
}

fn ec_add(args: &VerifyArgs, t: &mut Tally, rng: &mut StdRng) -> Result<()> {
    let Some(path) = &args.curve else {
        bail!("ec-add needs --curve <file>")
    };
    let curve = load_curve(path)?;
    let points = curve.points();
    let fixed: Vec<CurvePoint> = match &args.fixed {
        Some(s) => vec![point(s)?],
        None => points.clone(),
    };
    let mut cases = Vec::new();
    for a in &fixed {
        let Some((x, y)) = a.coords() else {
            bail!("the fixed point must be affine")
        };
        let params = FixedPointParams::new(curve.clone(), x.clone(), y.clone())?;
        for backend in args.backends() {
            cases.push(GroupAdder::new(params.clone(), backend)?);
        }
    }
    let mut pairs: Vec<(usize, &CurvePoint)> = Vec::new();
    for (i, adder) in cases.iter().enumerate() {
        pairs.extend(
            points
                .iter()
                .filter(|s| adder.check_generic(s).is_ok())
                .map(|s| (i, s)),
        );
    }
    if let Some(n) = args.sample {
        pairs = pairs
            .choose_multiple(rng, n.min(pairs.len()))
            .copied()
            .collect();
    } else {
        guard_exhaustive(pairs.len() as u64)?;
    }
    for (i, s) in pairs {
        let adder = &cases[i];
        let a = adder.params.point();
        let want = curve.add(s, &a)?;
        let got = adder.add(s);
        let ok = got.as_ref() == Ok(&want);
        t.record(ok, || {
            json!({
                "backend": adder.backend, "fixed": point_json(&a), "point": point_json(s),
                "got": got.as_ref().map(point_json).unwrap_or_else(|e| json!(e.to_string())),
                "want": point_json(&want),
            })
        });
    }
    t.extra.insert("curve_points".into(), json!(points.len()));
    Ok(())
}

fn random_state(width: usize, rng: &mut StdRng) -> BasisState {
    let mut s = BasisState::zeros(width);
    for w in 0..width {
        s.set(w, rng.gen());
    }
    s
}

fn blocks(args: &VerifyArgs, t: &mut Tally, rng: &mut StdRng) -> Result<()> {
    let m = args.field.m.unwrap_or(8);
    let field = args.field.resolve().or_else(|_| FieldSpec::standard(m))?;
    let l = ceil_log2(m);
    let circuits: Vec<(String, Circuit)> = vec![
        ("swap".into(), build_swap()),
        (
            format!("shiftl {m}"),
            build_cyclic_shift(m, ShiftDirection::Left)?,
        ),
        (
            format!("shiftr {m}"),
            build_cyclic_shift(m, ShiftDirection::Right)?,
        ),
        (
            format!("cshift {m} {l}"),
            build_controlled_shift(m, l.max(1))?,
        ),
        (format!("inc {m}"), build_increment(m)?),
        (format!("dec {m}"), build_decrement(m)?),
        (format!("deg {m}"), build_degree(m)?),
        (format!("cxor {m}"), build_conditional_xor(m)?),
        (format!("mulacc {m}"), build_mul_accumulate(&field)),
        (format!("naive-div {m}"), build_naive_long_division(m)?),
        (format!("euclid-iter {m}"), build_euclid_iteration(m)?),
    ];
    let samples = args.sample.unwrap_or(1000);
    for (name, c) in &circuits {
        let inv = c.inverse();
        if c.width() <= 12 {
            let ok = c.check_permutation()?;
            t.record(ok, || json!({ "block": name, "check": "permutation" }));
            for i in 0..1u64 << c.width() {
                let s = BasisState::from_index(c.width(), i);
                let ok = inv.apply(&c.apply(&s)?)? == s;
                t.record(ok, || json!({ "block": name, "state": i }));
            }
        } else {
            for _ in 0..samples {
                let s = random_state(c.width(), rng);
                let ok = inv.apply(&c.apply(&s)?)? == s;
                t.record(ok, || json!({ "block": name, "check": "round trip" }));
            }
        }
    }
    let swap = build_swap().report();
    t.record(
        swap.cnot == 3 && swap.gates == 3,
        || json!({ "block": "swap", "check": "3 CNOT" }),
    );
    let shift = build_cyclic_shift(m, ShiftDirection::Left)?.report();
    t.record(
        shift.swap == m - 1 && shift.gates == m - 1,
        || json!({ "block": "shiftl", "check": "n-1 SWAP" }),
    );
    let inc = build_increment(m)?;
    t.record(
        inc.width() == m + 1,
        || json!({ "block": "inc", "check": "one ancilla" }),
    );
    let deg = build_degree(m)?;
    t.record(
        deg.width() == m + l + 1,
        || json!({ "block": "deg", "check": "log m + 1 extra wires" }),
    );
    t.extra.insert("blocks".into(), json!(circuits.len()));
    Ok(())
}

pub fn run(args: &VerifyArgs) -> Result<bool> {
    let mut rng = StdRng::seed_from_u64(args.seed);
    let mut t = Tally::new();
    let name = match args.target {
        Target::Blocks => {
            blocks(args, &mut t, &mut rng)?;
            "blocks"
        }
        Target::NaiveDiv => {
            naive_div(args, &mut t, &mut rng)?;
            "naive-div"
        }
        Target::NaiveInvert => {
            naive_invert(args, &mut t, &mut rng)?;
            "naive-invert"
        }
        Target::OptInvert => {
            opt_invert(args, &mut t, &mut rng)?;
            "opt-invert"
        }
        Target::EcAdd => {
            ec_add(args, &mut t, &mut rng)?;
            "ec-add"
        }
    };
    let pass = t.mismatches == 0;
    let mut report = Map::new();
    report.insert("target".into(), json!(name));
    report.insert("scope".into(), json!(args.scope()));
    report.insert("seed".into(), json!(args.seed));
    report.insert("checked".into(), json!(t.checked));
    report.insert("mismatches".into(), json!(t.mismatches));
    report.insert("pass".into(), json!(pass));
    report.insert("counterexamples".into(), json!(t.counterexamples));
    report.extend(t.extra);
    print_json(&Value::Object(report))?;
    Ok(pass)
}
