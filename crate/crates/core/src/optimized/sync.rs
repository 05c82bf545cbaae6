// SPDX-License-Identifier: Apache-2.0

//! Lockstep simulation of many inputs under the shared round schedule.

use rayon::prelude::*;
use serde::Serialize;

use super::ops::{advance_counter, step, Op, ROUND};
use super::packing::{gap_is_zero, pack};
use super::{qubit_budget, OptParams, OptState};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::naive::EuclideanPairs;
use crate::poly::{extended_euclid, BinaryPolynomial};

/// One slot of the global schedule as seen by one input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlotRecord {
    pub round: usize,
    pub op: Op,
    pub fired: bool,
    pub f: bool,
    pub c: u8,
    pub h: u64,
}

/// State of the pairs right after a swap, i.e. at the start of an iteration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Boundary {
    pub pairs: EuclideanPairs,
    pub q: u64,
    pub gaps_clear: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SyncOutcome {
    pub input: BinaryPolynomial,
    /// `None` when the input was dropped for quotient overflow.
    pub inverse: Option<BinaryPolynomial>,
    pub h: u64,
    pub fidelity_loss: bool,
    pub iterations: usize,
    #[serde(skip)]
    pub final_state: Option<OptState>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SyncTrace {
    pub outcome: SyncOutcome,
    pub boundaries: Vec<Boundary>,
    pub slots: Vec<SlotRecord>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SyncReport {
    pub m: usize,
    pub cycles: usize,
    pub h_width: usize,
    pub width: usize,
    /// Scheduled operation slots per input, the same for every input.
    pub schedule_len: usize,
    pub outcomes: Vec<SyncOutcome>,
}

fn drive(
    input: &BinaryPolynomial,
    field: &FieldSpec,
    pr: &OptParams,
    record: bool,
) -> Result<SyncTrace> {
    let m = pr.m;
    let mut st = OptState::initial(input, field, pr)?;
    let mut boundaries = Vec::new();
    let mut slots = Vec::new();
    for r in 0..pr.cycles {
        for op in ROUND {
            let fired = match step(op, &mut st, pr) {
                Ok(fired) => fired,
                Err(Error::QuotientOverflow { .. }) => {
                    let outcome = SyncOutcome {
                        input: input.clone(),
                        inverse: None,
                        h: 0,
                        fidelity_loss: true,
                        iterations: boundaries.len(),
                        final_state: None,
                    };
                    return Ok(SyncTrace {
                        outcome,
                        boundaries,
                        slots,
                    });
                }
                Err(e) => return Err(e),
            };
            if fired && op == Op::SwapOrHalt && st.f {
                let (a, big_a) = st.divisor_pair(m);
                let (b, big_b) = st.dividend_pair(m);
                boundaries.push(Boundary {
                    pairs: EuclideanPairs { a, big_a, b, big_b },
                    q: st.q,
                    gaps_clear: gap_is_zero(st.u, st.size_a as usize, st.deg_big_a as usize, m)
                        && gap_is_zero(st.v, st.size_b as usize, st.p as usize, m),
                });
            }
            advance_counter(&mut st);
            if record {
                slots.push(SlotRecord {
                    round: r,
                    op,
                    fired,
                    f: st.f,
                    c: st.c,
                    h: st.h,
                });
            }
        }
    }
    let inverse = (st.halted() && st.p == 0).then(|| st.dividend_pair(m).0);
    let outcome = SyncOutcome {
        input: input.clone(),
        inverse,
        h: st.h,
        fidelity_loss: false,
        iterations: boundaries.len(),
        final_state: Some(st),
    };
    Ok(SyncTrace {
        outcome,
        boundaries,
        slots,
    })
}

/// Runs every input through `cycles` global rounds in parallel.
///
/// Inputs whose quotient outgrows the quotient register are reported with
/// `fidelity_loss` set. Any other input still running at the end yields
/// `CycleBudgetExceeded`.
pub fn run_synchronized(
    inputs: &[BinaryPolynomial],
    field: &FieldSpec,
    cycles: usize,
) -> Result<SyncReport> {
    let pr = OptParams::new(field.m(), cycles)?;
    let outcomes: Vec<SyncOutcome> = inputs
        .par_iter()
        .map(|c| drive(c, field, &pr, false).map(|t| t.outcome))
        .collect::<Result<_>>()?;
    let pending = outcomes
        .iter()
        .filter(|o| !o.fidelity_loss && o.inverse.is_none())
        .count();
    if pending > 0 {
        return Err(Error::CycleBudgetExceeded { pending, cycles });
    }
    Ok(SyncReport {
        m: pr.m,
        cycles,
        h_width: pr.h_width,
        width: qubit_budget(pr.m, pr.h_width),
        schedule_len: cycles * ROUND.len(),
        outcomes,
    })
}

/// Single-input run keeping every slot and iteration boundary.
pub fn trace_synchronized(
    input: &BinaryPolynomial,
    field: &FieldSpec,
    cycles: usize,
) -> Result<SyncTrace> {
    let pr = OptParams::new(field.m(), cycles)?;
    drive(input, field, &pr, true)
}

/// State after one division step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivisionStep {
    pub q: BinaryPolynomial,
    /// Explicit remainder slots read as a polynomial.
    pub remainder: BinaryPolynomial,
    /// The dividend register, most significant slot first.
    pub register: String,
}

/// Runs the division operation alone on `(b, B) / (a, A)` until its last
/// step, recording each state.
pub fn division_trace(
    a: &BinaryPolynomial,
    big_a: &BinaryPolynomial,
    b: &BinaryPolynomial,
    big_b: &BinaryPolynomial,
    m: usize,
) -> Result<Vec<DivisionStep>> {
    let pr = OptParams::with_default_cycles(m)?;
    let size = |k: &BinaryPolynomial| k.checked_degree().map_or(0, |d| d as u64 + 1);
    let (da, db) = (big_a.degree()?, big_b.degree()?);
    if da >= db {
        return Err(Error::BadParameter(
            "divisor degree must be below the dividend degree".into(),
        ));
    }
    let mut st = OptState {
        u: pack(a, big_a, m)?,
        v: pack(b, big_b, m)?,
        q: 0,
        deg_big_a: da as u64,
        p: db as u64,
        size_a: size(a),
        size_b: size(b),
        f: true,
        c: Op::Divide.index(),
        h: 0,
    };
    let mut out = Vec::new();
    loop {
        step(Op::Divide, &mut st, &pr)?;
        let p = st.p as usize;
        let remainder =
            BinaryPolynomial::from_coeffs((0..p).map(|t| (st.v >> (m - p + t)) & 1 == 1));
        out.push(DivisionStep {
            q: BinaryPolynomial::from_u64(st.q),
            remainder,
            register: (0..m)
                .rev()
                .map(|i| if (st.v >> i) & 1 == 1 { '1' } else { '0' })
                .collect(),
        });
        if st.f {
            return Ok(out);
        }
    }
}

/// Fraction of inputs whose Euclid run needs a quotient wider than the
/// `3⌈log2 m⌉`-bit register.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuotientBound {
    pub m: usize,
    pub q_bits: usize,
    pub inputs: usize,
    pub flagged: usize,
    pub fraction: f64,
    /// `12/m`.
    pub bound: f64,
    pub max_quotient_bits: usize,
}

/// Bits needed by each quotient of the Euclid run on `C`, up to the
/// division that leaves remainder 1.
pub fn quotient_bits(c: &BinaryPolynomial, field: &FieldSpec) -> Result<Vec<usize>> {
    let trace = extended_euclid(field.modulus(), c)?.trace;
    trace[..trace.len() - 1]
        .windows(2)
        .map(|w| Ok(w[0].r.div_floor(&w[1].r)?.degree()? + 1))
        .collect()
}

/// Exhaustive over all nonzero elements when `sample` is `None`.
pub fn check_quotient_bound(
    field: &FieldSpec,
    sample: Option<&[BinaryPolynomial]>,
) -> Result<QuotientBound> {
    let pr = OptParams::with_default_cycles(field.m())?;
    let inputs: Vec<BinaryPolynomial> = match sample {
        Some(s) => s.to_vec(),
        None => field.nonzero_elements().collect(),
    };
    let widest: Vec<usize> = inputs
        .par_iter()
        .map(|c| Ok(quotient_bits(c, field)?.into_iter().max().unwrap_or(0)))
        .collect::<Result<_>>()?;
    let flagged = widest.iter().filter(|&&w| w > pr.q_width).count();
    Ok(QuotientBound {
        m: pr.m,
        q_bits: pr.q_width,
        inputs: inputs.len(),
        flagged,
        fraction: if inputs.is_empty() {
            0.0
        } else {
            flagged as f64 / inputs.len() as f64
        },
        bound: 12.0 / pr.m as f64,
        max_quotient_bits: widest.into_iter().max().unwrap_or(0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> BinaryPolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn long_division_example() {
        let steps = division_trace(&p("1"), &p("101"), &p("0"), &p("10101"), 4).unwrap();
        assert_eq!(steps.len(), 3);
        let last = steps.last().unwrap();
        assert_eq!(last.q, p("100"));
        assert_eq!(last.remainder, p("1"));
        assert_eq!(
            steps.iter().map(|s| s.q.to_string()).collect::<Vec<_>>(),
            ["1", "10", "100"]
        );
    }

    #[test]
    fn gf16_inverses() {
        let field = FieldSpec::standard(4).unwrap();
        let inputs: Vec<_> = field.nonzero_elements().collect();
        let report = run_synchronized(&inputs, &field, OptParams::default_cycles(4)).unwrap();
        for o in &report.outcomes {
            assert!(!o.fidelity_loss);
            assert_eq!(
                o.inverse.as_ref().unwrap(),
                &field.invert(&o.input).unwrap()
            );
        }
        assert_eq!(report.width, 29 + report.h_width);
    }

    #[test]
    fn unit_input_halts_at_once() {
        let field = FieldSpec::standard(4).unwrap();
        let report = run_synchronized(&[p("1")], &field, 40).unwrap();
        assert_eq!(report.outcomes[0].inverse, Some(p("1")));
        assert_eq!(report.outcomes[0].h, 40);
        assert_eq!(report.outcomes[0].iterations, 0);
    }

    #[test]
    fn budget_too_small() {
        let field = FieldSpec::standard(4).unwrap();
        let inputs: Vec<_> = field.nonzero_elements().collect();
        assert!(matches!(
            run_synchronized(&inputs, &field, 2),
            Err(Error::CycleBudgetExceeded { cycles: 2, .. })
        ));
    }

    #[test]
    fn quotient_bound_small_fields() {
        let field = FieldSpec::standard(4).unwrap();
        let qb = check_quotient_bound(&field, None).unwrap();
        assert_eq!((qb.inputs, qb.flagged, qb.q_bits), (15, 0, 6));
        assert!(qb.fraction <= qb.bound);
        assert_eq!(quotient_bits(&p("1"), &field).unwrap(), Vec::<usize>::new());
    }
}
