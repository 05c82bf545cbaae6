// SPDX-License-Identifier: Apache-2.0

//! The four scheduled operations, the boundary detector and the counter.
//!
//! Every operation `o` acts on a state as
//!
//! ```text
//! if c == o: f ^= first(x); f ^= last(x); x ← body(x, f)
//! ```
//!
//! where `first` and `last` read only the data, and `body` is invertible
//! for each fixed `f`. [`unstep`] runs the same thing backwards.

use serde::Serialize;

use super::{OptParams, OptState};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Op {
    /// One quotient bit: read it, conditionally subtract, shift.
    Divide,
    /// Shift leading zeros off the remainder and absorb its leading 1.
    Normalize,
    /// `b ← b + q·a`, consuming the quotient.
    Update,
    /// Swap the pairs, or count a halted round once the remainder is 1.
    SwapOrHalt,
}

/// Slot order within one global round.
pub const ROUND: [Op; 4] = [Op::SwapOrHalt, Op::Divide, Op::Normalize, Op::Update];

impl Op {
    pub fn index(self) -> u8 {
        match self {
            Op::Divide => 0,
            Op::Normalize => 1,
            Op::Update => 2,
            Op::SwapOrHalt => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Op::Divide => "o1",
            Op::Normalize => "o2",
            Op::Update => "o3",
            Op::SwapOrHalt => "o4",
        }
    }
}

/// Sub-steps of [`Op::Divide`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    /// Top bit of the remainder becomes the next quotient bit.
    A,
    /// Conditional XOR of the divisor.
    B,
    /// Shift the remainder up by one slot.
    C,
}

fn inconsistent(what: &str) -> Error {
    Error::BadParameter(format!("inconsistent machine state: {what}"))
}

fn bit(w: u64, i: usize) -> bool {
    (w >> i) & 1 == 1
}

fn region_mask(lo: usize, hi: usize) -> u64 {
    ((1u64 << (hi - lo + 1)) - 1) << lo
}

/// Slots `lo..=hi` move up by one, `hi` wraps to `lo`.
fn rot_up(w: &mut u64, lo: usize, hi: usize) {
    let n = hi - lo + 1;
    let mask = region_mask(lo, hi);
    let seg = (*w & mask) >> lo;
    let seg = ((seg << 1) | (seg >> (n - 1))) & ((1u64 << n) - 1);
    *w = (*w & !mask) | (seg << lo);
}

fn rot_down(w: &mut u64, lo: usize, hi: usize) {
    let n = hi - lo + 1;
    let mask = region_mask(lo, hi);
    let seg = (*w & mask) >> lo;
    let seg = ((seg >> 1) | ((seg & 1) << (n - 1))) & ((1u64 << n) - 1);
    *w = (*w & !mask) | (seg << lo);
}

/// The top `d` slots of an `m`-wide word.
fn top_mask(d: usize, m: usize) -> u64 {
    if d == 0 {
        0
    } else {
        region_mask(m - d, m - 1)
    }
}

fn swap_ok(st: &OptState) -> bool {
    st.p != 0 && st.deg_big_a != 0
}

fn first(op: Op, st: &OptState) -> bool {
    match op {
        Op::Divide => st.q == 0,
        Op::Normalize => st.p == st.deg_big_a,
        Op::Update => {
            let da = st.size_a.saturating_sub(1);
            st.size_b <= da && (st.size_b == 0 || bit(st.v, 0))
        }
        Op::SwapOrHalt => swap_ok(st) || st.h == 0,
    }
}

fn last(op: Op, st: &OptState, pr: &OptParams) -> bool {
    match op {
        Op::Divide => st.q != 0 && st.p == st.deg_big_a + 1,
        Op::Normalize => bit(st.v, pr.m - 1),
        Op::Update => st.size_b >= st.size_a.saturating_sub(1) && st.q == 1,
        Op::SwapOrHalt => swap_ok(st),
    }
}

/// `f ^= first(x) ^ last(x)` for the given operation.
pub fn detect_boundaries(op: Op, st: &mut OptState, pr: &OptParams) {
    st.f ^= first(op, st);
    st.f ^= last(op, st, pr);
}

/// `c ← (c + f) mod 4`.
pub fn advance_counter(st: &mut OptState) {
    st.c = (st.c + u8::from(st.f)) & 3;
}

pub fn retreat_counter(st: &mut OptState) {
    st.c = (st.c + 4 - u8::from(st.f)) & 3;
}

/// One sub-step of the division step. `first_step` is whether the quotient
/// register was zero before phase A: the leading quotient bit is implicit
/// and no shift follows it.
pub fn o1_phase(st: &mut OptState, pr: &OptParams, phase: Phase, first_step: bool) -> Result<()> {
    let m = pr.m;
    let da = st.deg_big_a as usize;
    match phase {
        Phase::A => {
            if first_step {
                st.q ^= 1;
            } else {
                if bit(st.q, pr.q_width - 1) {
                    return Err(Error::QuotientOverflow { bits: pr.q_width });
                }
                st.q <<= 1;
                st.q ^= (st.v >> (m - 1)) & 1;
                st.v ^= (st.q & 1) << (m - 1);
            }
        }
        Phase::B => {
            if da > m || (!first_step && da >= m) {
                return Err(inconsistent("divisor degree out of range"));
            }
            if st.q & 1 == 1 {
                let a_low = st.u & top_mask(da, m);
                st.v ^= if first_step { a_low } else { a_low >> 1 };
            }
        }
        Phase::C => {
            if !first_step {
                let p = st.p as usize;
                if p == 0 || p > m {
                    return Err(inconsistent("remainder size out of range"));
                }
                rot_up(&mut st.v, m - p, m - 1);
                st.p -= 1;
            }
        }
    }
    Ok(())
}

fn o1_unphase(st: &mut OptState, pr: &OptParams, phase: Phase, first_step: bool) -> Result<()> {
    let m = pr.m;
    match phase {
        Phase::A => {
            if first_step {
                st.q ^= 1;
            } else {
                st.v ^= (st.q & 1) << (m - 1);
                st.q ^= (st.v >> (m - 1)) & 1;
                st.q >>= 1;
            }
            Ok(())
        }
        Phase::B => o1_phase(st, pr, Phase::B, first_step),
        Phase::C => {
            if !first_step {
                let p = st.p as usize + 1;
                if p > m {
                    return Err(inconsistent("remainder size out of range"));
                }
                st.p += 1;
                rot_down(&mut st.v, m - p, m - 1);
            }
            Ok(())
        }
    }
}

fn body(op: Op, st: &mut OptState, pr: &OptParams) -> Result<()> {
    let m = pr.m;
    match op {
        Op::Divide => {
            let first_step = st.q == 0;
            for phase in [Phase::A, Phase::B, Phase::C] {
                o1_phase(st, pr, phase, first_step)?;
            }
        }
        Op::Normalize => {
            let p = st.p as usize;
            if p == 0 || p > m {
                return Err(inconsistent("nothing left to normalize"));
            }
            if st.f {
                st.v ^= 1 << (m - 1);
            }
            rot_up(&mut st.v, m - p, m - 1);
            st.p -= 1;
        }
        Op::Update => {
            let (s, sa) = (st.size_b as usize, st.size_a as usize);
            if sa == 0 || sa > m || s >= m {
                return Err(inconsistent("coefficient sizes out of range"));
            }
            let da = sa - 1;
            rot_up(&mut st.v, 0, s);
            st.size_b += 1;
            if s >= da {
                if st.q & 1 == 1 {
                    st.v ^= st.u & ((1 << sa) - 1);
                }
                st.q ^= st.v & 1;
                st.q = (st.q >> 1) | ((st.q & 1) << (pr.q_width - 1));
            }
        }
        Op::SwapOrHalt => {
            if swap_ok(st) {
                std::mem::swap(&mut st.u, &mut st.v);
                std::mem::swap(&mut st.deg_big_a, &mut st.p);
                std::mem::swap(&mut st.size_a, &mut st.size_b);
            } else {
                st.h = (st.h + 1) & ((1 << pr.h_width) - 1);
            }
        }
    }
    Ok(())
}

fn unbody(op: Op, st: &mut OptState, pr: &OptParams) -> Result<()> {
    let m = pr.m;
    match op {
        Op::Divide => {
            let first_step = st.q == 1;
            for phase in [Phase::C, Phase::B, Phase::A] {
                o1_unphase(st, pr, phase, first_step)?;
            }
        }
        Op::Normalize => {
            let p = st.p as usize + 1;
            if p > m {
                return Err(inconsistent("remainder size out of range"));
            }
            st.p += 1;
            rot_down(&mut st.v, m - p, m - 1);
            if st.f {
                st.v ^= 1 << (m - 1);
            }
        }
        Op::Update => {
            let (s, sa) = (st.size_b as usize, st.size_a as usize);
            if sa == 0 || sa > m || s == 0 || s > m {
                return Err(inconsistent("coefficient sizes out of range"));
            }
            let da = sa - 1;
            if s > da {
                let qw = pr.q_width;
                st.q = ((st.q << 1) | (st.q >> (qw - 1))) & ((1 << qw) - 1);
                st.q ^= st.v & 1;
                if st.q & 1 == 1 {
                    st.v ^= st.u & ((1 << sa) - 1);
                }
            }
            st.size_b -= 1;
            rot_down(&mut st.v, 0, s - 1);
        }
        Op::SwapOrHalt => {
            if swap_ok(st) {
                std::mem::swap(&mut st.u, &mut st.v);
                std::mem::swap(&mut st.deg_big_a, &mut st.p);
                std::mem::swap(&mut st.size_a, &mut st.size_b);
            } else {
                st.h = st.h.wrapping_sub(1) & ((1 << pr.h_width) - 1);
            }
        }
    }
    Ok(())
}

/// `o'`: the operation gated on `c`. Returns whether it fired.
pub fn step(op: Op, st: &mut OptState, pr: &OptParams) -> Result<bool> {
    if st.c != op.index() {
        return Ok(false);
    }
    detect_boundaries(op, st, pr);
    body(op, st, pr)?;
    Ok(true)
}

/// Inverse of [`step`].
pub fn unstep(op: Op, st: &mut OptState, pr: &OptParams) -> Result<bool> {
    if st.c != op.index() {
        return Ok(false);
    }
    unbody(op, st, pr)?;
    detect_boundaries(op, st, pr);
    Ok(true)
}

/// One global round: each operation of [`ROUND`] followed by the counter advance.
pub fn round(st: &mut OptState, pr: &OptParams) -> Result<()> {
    for op in ROUND {
        step(op, st, pr)?;
        advance_counter(st);
    }
    Ok(())
}

pub fn unround(st: &mut OptState, pr: &OptParams) -> Result<()> {
    for op in ROUND.iter().rev() {
        retreat_counter(st);
        unstep(*op, st, pr)?;
    }
    Ok(())
}
