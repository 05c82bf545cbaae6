// SPDX-License-Identifier: Apache-2.0

//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::collections::HashSet;
use std::process::ExitCode;

use gf2rev::blocks::{
    build_conditional_xor, build_controlled_shift, build_cyclic_shift, build_decrement,
    build_degree, build_increment, build_mul_accumulate, build_swap, ceil_log2, ShiftDirection,
};
use gf2rev::circuit::{BasisState, Circuit};
use gf2rev::curve::CurveSpec;
use gf2rev::ecgroup::{Backend, FixedPointParams, GroupAdder};
use gf2rev::naive::{
    build_euclid_iteration, build_naive_long_division, run_naive_inversion_traced,
};
use gf2rev::optimized::{
    budget_breakdown, check_quotient_bound, opt_layout, qubit_budget, trace_synchronized, OptParams,
};
use gf2rev::{BinaryPolynomial, FieldSpec};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const SEED: u64 = 0x5eed;
/// Every criterion except the quotient bound tolerates zero mismatches.
const ALLOWED_MISMATCHES: usize = 0;
const RANDOM_STATES: usize = 1000;
const EXHAUSTIVE_WIDTH: usize = 12;
const DIVISION_SAMPLES: usize = 1000;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn p(s: &str) -> BinaryPolynomial {
    s.parse().unwrap()
}

fn deg(x: &BinaryPolynomial) -> i64 {
    x.checked_degree().map_or(-1, |d| d as i64)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn tally(mismatches: usize, checked: usize, first: Option<String>) -> Outcome {
    if mismatches > ALLOWED_MISMATCHES {
        Err(format!(
            "{mismatches} mismatches in {checked} cases, first: {}",
            first.unwrap_or_default()
        ))
    } else {
        Ok(format!("{checked} cases, {mismatches} mismatches"))
    }
}

fn inversion() -> Outcome {
    let (mut checked, mut bad, mut first) = (0, 0, None);
    for m in 2..=8 {
        let field = FieldSpec::standard(m).map_err(|e| e.to_string())?;
        let pr = OptParams::with_default_cycles(m).map_err(|e| e.to_string())?;
        for c in field.nonzero_elements() {
            let want = field.invert(&c).map_err(|e| e.to_string())?;
            let naive = run_naive_inversion_traced(&c, &field).map(|r| r.inverse);
            let opt = trace_synchronized(&c, &field, pr.cycles).map(|t| t.outcome.inverse);
            for (name, ok) in [
                ("naive", naive.as_ref() == Ok(&want)),
                ("opt", opt.as_ref() == Ok(&Some(want.clone()))),
            ] {
                checked += 1;
                if !ok {
                    bad += 1;
                    first.get_or_insert(format!("{name} m={m} C={c}"));
                }
            }
        }
    }
    tally(bad, checked, first)
}

fn long_division() -> Outcome {
    let mut rng = StdRng::seed_from_u64(SEED);
    let (mut checked, mut bad, mut first) = (0, 0, None);
    let mut run = |c: &Circuit, a: &BinaryPolynomial, b: &BinaryPolynomial| -> Result<(), String> {
        let l = c.layout();
        let mut s = BasisState::for_layout(l);
        s.write_poly(l.reg("A"), a).map_err(|e| e.to_string())?;
        s.write_poly(l.reg("B"), b).map_err(|e| e.to_string())?;
        let out = c.apply(&s).map_err(|e| e.to_string())?;
        let (q, r) = b.divmod(a).map_err(|e| e.to_string())?;
        checked += 1;
        let clean = out.read(l.reg("i")) == 0
            && out.read(l.reg("anc")) == 0
            && &out.read_poly(l.reg("A")) == a;
        if out.read_poly(l.reg("q")) != q || out.read_poly(l.reg("B")) != r || !clean {
            bad += 1;
            first.get_or_insert(format!("m={} {b} / {a}", c.layout().reg("A").width - 1));
        }
        Ok(())
    };
    for m in 2..=4 {
        let c = build_naive_long_division(m).map_err(|e| e.to_string())?;
        for a in 1..1u64 << (m + 1) {
            for b in 0..1u64 << (m + 1) {
                run(
                    &c,
                    &BinaryPolynomial::from_u64(a),
                    &BinaryPolynomial::from_u64(b),
                )?;
            }
        }
    }
    for m in [8usize, 16] {
        let c = build_naive_long_division(m).map_err(|e| e.to_string())?;
        for _ in 0..DIVISION_SAMPLES {
            let a = BinaryPolynomial::from_u64(rng.gen_range(1..1u64 << (m + 1)));
            let b = BinaryPolynomial::from_u64(rng.gen_range(0..1u64 << (m + 1)));
            run(&c, &a, &b)?;
        }
    }
    let c = build_naive_long_division(4).map_err(|e| e.to_string())?;
    let l = c.layout().clone();
    let mut s = BasisState::for_layout(&l);
    s.write_poly(l.reg("A"), &p("101"))
        .map_err(|e| e.to_string())?;
    s.write_poly(l.reg("B"), &p("10101"))
        .map_err(|e| e.to_string())?;
    let out = c.apply(&s).map_err(|e| e.to_string())?;
    ensure(
        out.read_poly(l.reg("B")) == p("1") && out.read_poly(l.reg("q")) == p("100"),
        || "10101 / 101 did not give q = 100, r = 1".into(),
    )?;
    tally(bad, checked, first).map(|s| format!("{s}; 10101 / 101 = 100 rem 1"))
}

fn gate_counts() -> Outcome {
    let swap = build_swap().report();
    ensure(swap.cnot == 3 && swap.gates == 3, || {
        format!("swap has {} gates", swap.gates)
    })?;
    for n in 2..=32 {
        let r = build_cyclic_shift(n, ShiftDirection::Left)
            .map_err(|e| e.to_string())?
            .report();
        ensure(r.swap == n - 1 && r.gates == n - 1, || {
            format!("shift({n}) has {} gates", r.gates)
        })?;
    }
    for w in 1..=16 {
        let c = build_increment(w).map_err(|e| e.to_string())?;
        ensure(
            c.width() == w + 1 && c.layout().reg("anc").width == 1,
            || format!("increment({w}) width {}", c.width()),
        )?;
    }
    for m in 2..=32 {
        let c = build_degree(m).map_err(|e| e.to_string())?;
        ensure(c.width() - m == ceil_log2(m) + 1, || {
            format!("degree({m}) uses {} extra wires", c.width() - m)
        })?;
    }
    Ok("swap 3 CNOT, shift n-1 SWAP (n <= 32), increment 1 ancilla, degree log m + 1 extra (m <= 32)".into())
}

fn qubit_budget_check() -> Outcome {
    let mut rows = Vec::new();
    for m in [4usize, 8, 16] {
        let pr = OptParams::with_default_cycles(m).map_err(|e| e.to_string())?;
        let l = ceil_log2(m);
        let h = pr.h_width;
        let formula = 2 * m + 7 * l + 7 + h;
        let layout = opt_layout(&pr);
        let width = |names: &[&str]| names.iter().map(|n| layout.reg(n).width).sum::<usize>();
        let measured = [
            width(&["U", "V"]),
            width(&["q"]),
            width(&[
                "degA", "degB", "dega", "degb", "degA_anc", "degB_anc", "dega_anc", "degb_anc",
            ]),
            width(&["f", "c"]),
            width(&["h"]),
        ];
        let expected = [2 * m, 3 * l, 4 * l + 4, 3, h];
        let items: Vec<usize> = budget_breakdown(m, h).iter().map(|i| i.qubits).collect();
        ensure(
            layout.width() == formula && qubit_budget(m, h) == formula,
            || format!("m={m}: layout {} formula {formula}", layout.width()),
        )?;
        ensure(measured == expected && items == expected, || {
            format!("m={m}: terms {measured:?} != {expected:?}")
        })?;
        rows.push(format!("m={m}: {} + H = {formula}", formula - h));
    }
    Ok(rows.join(", "))
}

fn invariants() -> Outcome {
    let (mut checked, mut bad, mut first) = (0, 0, None);
    for m in 2..=8 {
        let field = FieldSpec::standard(m).map_err(|e| e.to_string())?;
        let cycles = OptParams::default_cycles(m);
        for c in field.nonzero_elements() {
            let naive = run_naive_inversion_traced(&c, &field)
                .map_err(|e| e.to_string())?
                .trace;
            let opt: Vec<_> = trace_synchronized(&c, &field, cycles)
                .map_err(|e| e.to_string())?
                .boundaries
                .into_iter()
                .map(|b| b.pairs)
                .collect();
            for pairs in naive.iter().filter(|x| !x.big_a.is_one()).chain(&opt) {
                checked += 1;
                let claim = deg(&pairs.a) + deg(&pairs.big_b) == m as i64;
                let cor = deg(&pairs.a) + deg(&pairs.big_a) <= m as i64
                    && deg(&pairs.b) + deg(&pairs.big_b) <= m as i64;
                if !(claim && cor && pairs.check_invariants(m).is_ok()) {
                    bad += 1;
                    first.get_or_insert(format!("m={m} C={c} {pairs:?}"));
                }
            }
        }
    }
    tally(bad, checked, first)
}

fn synchronization() -> Outcome {
    let mut notes = Vec::new();
    for m in [4usize, 8] {
        let field = FieldSpec::standard(m).map_err(|e| e.to_string())?;
        let pr = OptParams::with_default_cycles(m).map_err(|e| e.to_string())?;
        let layout = opt_layout(&pr);
        let mut schedule = None;
        let mut finals = HashSet::new();
        for c in field.nonzero_elements() {
            let t = trace_synchronized(&c, &field, pr.cycles).map_err(|e| e.to_string())?;
            let ops: Vec<_> = t.slots.iter().map(|s| (s.round, s.op)).collect();
            match &schedule {
                None => schedule = Some(ops),
                Some(s) => ensure(s == &ops, || format!("m={m}: schedule differs for C={c}"))?,
            }
            let fin = t
                .outcome
                .final_state
                .ok_or(format!("m={m} C={c}: no final state"))?;
            ensure(fin.halted() && t.outcome.inverse.is_some(), || {
                format!("m={m} C={c}: not halted in {} rounds", pr.cycles)
            })?;
            ensure(finals.insert(fin.to_basis(&layout, &pr)), || {
                format!("m={m}: final state collision at C={c}")
            })?;
        }
        notes.push(format!(
            "m={m}: {} inputs, {} rounds, injective",
            finals.len(),
            pr.cycles
        ));
    }
    Ok(notes.join("; "))
}

fn quotient_bound() -> Outcome {
    let field = FieldSpec::standard(16).map_err(|e| e.to_string())?;
    let qb = check_quotient_bound(&field, None).map_err(|e| e.to_string())?;
    let bound = 12.0 / 16.0;
    let msg = format!(
        "m=16: {} of {} inputs need more than {} quotient bits, fraction {:.6} (bound {bound})",
        qb.flagged, qb.inputs, qb.q_bits, qb.fraction
    );
    if qb.fraction <= bound {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn group_operation() -> Outcome {
    let field = FieldSpec::standard(4).map_err(|e| e.to_string())?;
    let curves = [
        CurveSpec::non_supersingular(field.clone(), p("1000"), p("1001"))
            .map_err(|e| e.to_string())?,
        CurveSpec::supersingular(field.clone(), p("110"), p("11"), p("101"))
            .map_err(|e| e.to_string())?,
    ];
    let (mut checked, mut bad, mut first) = (0, 0, None);
    for curve in &curves {
        for a in curve.points() {
            let (x, y) = a.coords().expect("affine");
            let params = FixedPointParams::new(curve.clone(), x.clone(), y.clone())
                .map_err(|e| e.to_string())?;
            for backend in [Backend::Naive, Backend::Optimized] {
                let adder = GroupAdder::new(params.clone(), backend).map_err(|e| e.to_string())?;
                for s in curve.points() {
                    if adder.check_generic(&s).is_err() {
                        continue;
                    }
                    checked += 1;
                    let want = curve.add(&s, &a).map_err(|e| e.to_string())?;
                    if adder.add(&s).as_ref() != Ok(&want) {
                        bad += 1;
                        first.get_or_insert(format!("{backend:?} {s} + {a}"));
                    }
                }
            }
        }
    }
    tally(bad, checked, first)
}

fn reversibility() -> Outcome {
    let mut rng = StdRng::seed_from_u64(SEED);
    let f4 = FieldSpec::standard(4).map_err(|e| e.to_string())?;
    let f8 = FieldSpec::standard(8).map_err(|e| e.to_string())?;
    let e = |r: gf2rev::Result<Circuit>| r.map_err(|e| e.to_string());
    let circuits: Vec<(&str, Circuit)> = vec![
        ("swap", build_swap()),
        ("shiftl 8", e(build_cyclic_shift(8, ShiftDirection::Left))?),
        (
            "shiftr 24",
            e(build_cyclic_shift(24, ShiftDirection::Right))?,
        ),
        ("cshift 8 3", e(build_controlled_shift(8, 3))?),
        ("cshift 16 4", e(build_controlled_shift(16, 4))?),
        ("inc 8", e(build_increment(8))?),
        ("dec 16", e(build_decrement(16))?),
        ("deg 4", e(build_degree(4))?),
        ("deg 16", e(build_degree(16))?),
        ("cxor 5", e(build_conditional_xor(5))?),
        ("cxor 16", e(build_conditional_xor(16))?),
        ("mulacc 4", build_mul_accumulate(&f4)),
        ("mulacc 8", build_mul_accumulate(&f8)),
        ("division 2", e(build_naive_long_division(2))?),
        ("division 8", e(build_naive_long_division(8))?),
        ("iteration 4", e(build_euclid_iteration(4))?),
        ("iteration 8", e(build_euclid_iteration(8))?),
    ];
    let (mut states, mut exhaustive) = (0usize, 0usize);
    for (name, c) in &circuits {
        let round_trip = c.compose(&c.inverse()).map_err(|e| e.to_string())?;
        for _ in 0..RANDOM_STATES {
            let mut s = BasisState::zeros(c.width());
            for w in 0..c.width() {
                s.set(w, rng.gen());
            }
            ensure(
                round_trip.apply(&s).map_err(|e| e.to_string())? == s,
                || format!("{name}: random state not restored"),
            )?;
            states += 1;
        }
        if c.width() <= EXHAUSTIVE_WIDTH {
            for i in 0..1u64 << c.width() {
                let s = BasisState::from_index(c.width(), i);
                ensure(
                    round_trip.apply(&s).map_err(|e| e.to_string())? == s,
                    || format!("{name}: state {i} not restored"),
                )?;
            }
            exhaustive += 1;
        }
    }

    let curve = CurveSpec::non_supersingular(f4.clone(), p("1000"), p("1001"))
        .map_err(|e| e.to_string())?;
    let a = curve.points().remove(0);
    let (x, y) = a.coords().expect("affine");
    let adder = GroupAdder::new(
        FixedPointParams::new(curve.clone(), x.clone(), y.clone()).map_err(|e| e.to_string())?,
        Backend::Optimized,
    )
    .map_err(|e| e.to_string())?;
    for s in curve
        .points()
        .into_iter()
        .filter(|s| adder.check_generic(s).is_ok())
    {
        let (sx, sy) = s.coords().expect("affine");
        let layout = adder.layout().clone();
        let mut st = BasisState::for_layout(&layout);
        st.write_poly(layout.reg("X"), sx)
            .map_err(|e| e.to_string())?;
        st.write_poly(layout.reg("Y"), sy)
            .map_err(|e| e.to_string())?;
        let start = st.clone();
        adder
            .run_registers(&mut st, false)
            .map_err(|e| e.to_string())?;
        adder
            .run_registers(&mut st, true)
            .map_err(|e| e.to_string())?;
        ensure(st == start, || format!("group operation on {s} not undone"))?;
    }
    Ok(format!(
        "{} circuits, {states} random states, {exhaustive} exhaustive, group operation undone",
        circuits.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (
            "oracle equivalence, inversion (m 2..=8, both backends)",
            inversion,
        ),
        ("oracle equivalence, long division", long_division),
        ("structural gate counts", gate_counts),
        ("qubit budget", qubit_budget_check),
        ("degree invariants at iteration boundaries", invariants),
        ("synchronization", synchronization),
        ("quotient bound", quotient_bound),
        ("group operation end to end", group_operation),
        ("reversibility", reversibility),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
