// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;

use gf2rev::optimized::{advance_counter, division_trace, step, OptParams, OptState, ROUND};

use crate::{poly, FieldArgs};

#[derive(Args)]
pub struct TraceArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Element to invert; the whole synchronized run is traced.
    #[arg(long, conflicts_with = "divisor")]
    element: Option<String>,
    /// Divisor remainder `A` for a single division trace.
    #[arg(long, requires = "dividend")]
    divisor: Option<String>,
    /// Dividend remainder `B`.
    #[arg(long)]
    dividend: Option<String>,
    /// Coefficient paired with the divisor.
    #[arg(long = "a", default_value = "1")]
    coeff_a: String,
    /// Coefficient paired with the dividend.
    #[arg(long = "b", default_value = "0")]
    coeff_b: String,
    #[arg(long)]
    cycles: Option<usize>,
    /// Keep printing rounds after the input has halted.
    #[arg(long)]
    full: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn bits(v: u64, n: usize) -> String {
    (0..n)
        .rev()
        .map(|i| if (v >> i) & 1 == 1 { '1' } else { '0' })
        .collect()
}

fn inversion_table(args: &TraceArgs, element: &str) -> Result<String> {
    let field = args.field.resolve()?;
    let c = field.element(poly(element)?)?;
    let pr = OptParams::new(
        field.m(),
        args.cycles
            .unwrap_or_else(|| OptParams::default_cycles(field.m())),
    )?;
    let m = pr.m;
    let mut st = OptState::initial(&c, &field, &pr)?;
    let mut out = String::new();
    writeln!(
        out,
        "# C = {c}, f = {}, m = {m}, cycles = {}",
        field.modulus(),
        pr.cycles
    )?;
    writeln!(
        out,
        "{:>5} {:>2} {:>5} {:>w$} {:>w$} {:>4} {:>4} {:>4} {:>4} {:>qw$} {:>1} {:>1} {:>5}",
        "round",
        "op",
        "fired",
        "U",
        "V",
        "degA",
        "degB",
        "sa",
        "sb",
        "q",
        "f",
        "c",
        "h",
        w = m,
        qw = pr.q_width
    )?;
    let row = |out: &mut String, r: usize, op: &str, fired: &str, st: &OptState| {
        writeln!(
            out,
            "{:>5} {:>2} {:>5} {} {} {:>4} {:>4} {:>4} {:>4} {} {:>1} {:>1} {:>5}",
            r,
            op,
            fired,
            bits(st.u, m),
            bits(st.v, m),
            st.deg_big_a,
            st.p,
            st.size_a,
            st.size_b,
            bits(st.q, pr.q_width),
            u8::from(st.f),
            st.c,
            st.h
        )
    };
    row(&mut out, 0, "--", "-", &st)?;
    let mut halted_at = None;
    for r in 0..pr.cycles {
        for op in ROUND {
            let fired = step(op, &mut st, &pr)?;
            advance_counter(&mut st);
            row(
                &mut out,
                r,
                op.name(),
                if fired { "yes" } else { "no" },
                &st,
            )?;
        }
        if st.halted() && halted_at.is_none() {
            halted_at = Some(r);
            if !args.full {
                break;
            }
        }
    }
    match halted_at {
        Some(r) if st.p == 0 => {
            let inv = st.dividend_pair(m).0;
            writeln!(out, "# halted in round {r}; inverse = {inv}")?;
        }
        _ => writeln!(out, "# did not halt within {} rounds", pr.cycles)?,
    }
    Ok(out)
}

fn division_table(args: &TraceArgs, divisor: &str, dividend: &str) -> Result<String> {
    let m = match (args.field.m, &args.field.field) {
        (Some(m), _) => m,
        (None, Some(_)) => args.field.resolve()?.m(),
        (None, None) => bail!("give --m or --field"),
    };
    let (big_a, big_b) = (poly(divisor)?, poly(dividend)?);
    let (a, b) = (poly(&args.coeff_a)?, poly(&args.coeff_b)?);
    let steps = division_trace(&a, &big_a, &b, &big_b, m)?;
    let mut out = String::new();
    writeln!(out, "# ({b}, {big_b}) divided by ({a}, {big_a}), m = {m}")?;
    writeln!(
        out,
        "{:>4} {:>w$} {:>8} {:>9}",
        "step",
        "register",
        "q",
        "remainder",
        w = m.max(8)
    )?;
    for (i, s) in steps.iter().enumerate() {
        writeln!(
            out,
            "{:>4} {:>w$} {:>8} {:>9}",
            i + 1,
            s.register,
            s.q.to_string(),
            s.remainder.to_string(),
            w = m.max(8)
        )?;
    }
    Ok(out)
}

pub fn run(args: &TraceArgs) -> Result<()> {
    let text = match (&args.element, &args.divisor, &args.dividend) {
        (Some(e), _, _) => inversion_table(args, e)?,
        (None, Some(d), Some(n)) => division_table(args, d, n)?,
        _ => bail!("give --element, or --divisor and --dividend"),
    };
    match &args.output {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => crate::emit(&text)?,
    }
    Ok(())
}
