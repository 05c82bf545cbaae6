// SPDX-License-Identifier: Apache-2.0

//! Synchronized extended Euclid with register sharing.
//!
//! Each Euclidean pair lives in one `m`-wire register: the remainder at the
//! high-order end with its leading 1 implicit, the coefficient at the low
//! end stored leading-coefficient-first. Four degree registers track the
//! boundaries. The computation is a fixed global schedule of four
//! operations, each gated on a 2-bit counter and driven by a flag bit, so
//! every input sees exactly the same sequence of steps.

mod budget;
mod ops;
mod packing;
mod sync;

pub use budget::{
    budget_breakdown, estimate_costs, opt_layout, qubit_budget, BudgetItem, CostEstimate,
};
pub use ops::{
    advance_counter, detect_boundaries, o1_phase, retreat_counter, round, step, unround, unstep,
    Op, Phase, ROUND,
};
pub use packing::{pack, unpack};
pub use sync::{
    check_quotient_bound, division_trace, quotient_bits, run_synchronized, trace_synchronized,
    Boundary, DivisionStep, QuotientBound, SlotRecord, SyncOutcome, SyncReport, SyncTrace,
};

use serde::Serialize;

use crate::blocks::ceil_log2;
use crate::circuit::{BasisState, Layout};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::poly::BinaryPolynomial;

/// Register sizes for a given field degree and cycle budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OptParams {
    pub m: usize,
    /// `⌈log2 m⌉`.
    pub logm: usize,
    /// Quotient register width, `3⌈log2 m⌉`.
    pub q_width: usize,
    /// Number of global rounds.
    pub cycles: usize,
    /// Halting counter width.
    pub h_width: usize,
}

impl OptParams {
    pub fn new(m: usize, cycles: usize) -> Result<Self> {
        if !(2..=48).contains(&m) {
            return Err(Error::BadParameter(format!(
                "m must lie in 2..=48, got {m}"
            )));
        }
        let logm = ceil_log2(m);
        let h_width = ceil_log2(cycles + 1).max(1);
        if h_width > 63 {
            return Err(Error::BadParameter(format!(
                "cycle budget {cycles} too large"
            )));
        }
        Ok(Self {
            m,
            logm,
            q_width: 3 * logm,
            cycles,
            h_width,
        })
    }

    /// `2m(2m+2)` rounds.
    pub fn default_cycles(m: usize) -> usize {
        2 * m * (2 * m + 2)
    }

    pub fn with_default_cycles(m: usize) -> Result<Self> {
        Self::new(m, Self::default_cycles(m))
    }

    /// Width of each degree register including its ancilla.
    pub fn deg_width(&self) -> usize {
        self.logm + 1
    }
}

/// Per-input machine state.
///
/// `u` holds the divisor pair `(a, A)` and `v` the dividend pair `(b, B)`.
/// `deg_big_a` is `deg A`; `p` is the number of explicit remainder slots
/// in `v` (equal to `deg B` between iterations). `size_a` and `size_b`
/// are coefficient sizes, `deg + 1`, with 0 for the zero polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct OptState {
    pub u: u64,
    pub v: u64,
    pub q: u64,
    pub deg_big_a: u64,
    pub p: u64,
    pub size_a: u64,
    pub size_b: u64,
    pub f: bool,
    pub c: u8,
    pub h: u64,
}

impl OptState {
    /// `(0, f)` in `u`, `(1, C)` in `v`, positioned just before a swap:
    /// counter on the swap/halt operation, flag set.
    pub fn initial(c: &BinaryPolynomial, field: &FieldSpec, params: &OptParams) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::ZeroElement);
        }
        if !field.contains(c) {
            return Err(Error::BadParameter(format!(
                "{c} is not an element of the field"
            )));
        }
        if field.m() != params.m {
            return Err(Error::BadParameter(
                "field and parameters disagree on m".into(),
            ));
        }
        let m = params.m;
        let u = pack(&BinaryPolynomial::zero(), field.modulus(), m)?;
        let v = pack(&BinaryPolynomial::one(), c, m)?;
        Ok(Self {
            u,
            v,
            q: 0,
            deg_big_a: m as u64,
            p: c.degree()? as u64,
            size_a: 0,
            size_b: 1,
            f: true,
            c: Op::SwapOrHalt.index(),
            h: 0,
        })
    }

    /// `(a, A)` from `u`.
    pub fn divisor_pair(&self, m: usize) -> (BinaryPolynomial, BinaryPolynomial) {
        unpack(self.u, self.size_a as usize, self.deg_big_a as usize, m)
    }

    /// `(b, B)` from `v`; meaningful between iterations.
    pub fn dividend_pair(&self, m: usize) -> (BinaryPolynomial, BinaryPolynomial) {
        unpack(self.v, self.size_b as usize, self.p as usize, m)
    }

    pub fn halted(&self) -> bool {
        self.h != 0
    }

    pub fn to_basis(&self, layout: &Layout, params: &OptParams) -> BasisState {
        let mut s = BasisState::for_layout(layout);
        let l = params.logm;
        s.write(layout.reg("U"), self.u);
        s.write(layout.reg("V"), self.v);
        s.write(layout.reg("q"), self.q);
        for (name, val) in [
            ("degA", self.deg_big_a),
            ("degB", self.p),
            ("dega", self.size_a),
            ("degb", self.size_b),
        ] {
            s.write(layout.reg(name), val & ((1 << l) - 1));
            s.write(layout.reg(&format!("{name}_anc")), val >> l);
        }
        s.write(layout.reg("f"), u64::from(self.f));
        s.write(layout.reg("c"), u64::from(self.c));
        s.write(layout.reg("h"), self.h);
        s
    }

    pub fn from_basis(s: &BasisState, layout: &Layout, params: &OptParams) -> Self {
        let l = params.logm;
        let deg = |name: &str| {
            s.read(layout.reg(name)) | (s.read(layout.reg(&format!("{name}_anc"))) << l)
        };
        Self {
            u: s.read(layout.reg("U")),
            v: s.read(layout.reg("V")),
            q: s.read(layout.reg("q")),
            deg_big_a: deg("degA"),
            p: deg("degB"),
            size_a: deg("dega"),
            size_b: deg("degb"),
            f: s.read(layout.reg("f")) == 1,
            c: s.read(layout.reg("c")) as u8,
            h: s.read(layout.reg("h")),
        }
    }
}
