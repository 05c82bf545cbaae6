// SPDX-License-Identifier: Apache-2.0

//! Reversible long division and the Euclidean iteration built from it,
//! without synchronization: the number of iterations depends on the input.
//!
//! All polynomial registers are `m + 1` wires wide so that the modulus
//! (degree `m`) and a full-length quotient (dividing by `1`) both fit.

use serde::Serialize;

use crate::blocks::{
    ceil_log2, emit_controlled_shift, emit_cyclic_shift, emit_increment, ShiftDirection,
};
use crate::circuit::{BasisState, Circuit, Control, Layout, Wire};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::poly::BinaryPolynomial;

/// Register widths: polynomial registers and the shift counter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NaiveWidths {
    pub poly: usize,
    pub counter: usize,
}

impl NaiveWidths {
    pub fn new(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::BadParameter(format!(
                "m must be at least 2, got {m}"
            )));
        }
        Ok(Self {
            poly: m + 1,
            counter: ceil_log2(m + 1),
        })
    }
}

fn counter_equals(counter: &[Wire], v: usize) -> Vec<Control> {
    counter
        .iter()
        .enumerate()
        .map(|(j, &w)| Control {
            wire: w,
            on: (v >> j) & 1 == 1,
        })
        .collect()
}

/// Leading-zero count of `a` into `counter`, one controlled increment per
/// all-zero top prefix.
fn emit_leading_zeros(c: &mut Circuit, a: &[Wire], counter: &[Wire], anc: Wire) {
    let n = a.len();
    for j in (1..n).rev() {
        let controls: Vec<Control> = a[j..].iter().map(|&w| Control::zero(w)).collect();
        emit_increment(c, counter, anc, &controls);
    }
}

/// `|A⟩|B⟩|0⟩ → |A⟩|B mod A⟩|⌊B/A⌋⟩` for `A != 0`; `counter` and `anc`
/// start and end at zero.
pub fn emit_long_division(
    c: &mut Circuit,
    a: &[Wire],
    b: &[Wire],
    q: &[Wire],
    counter: &[Wire],
    anc: Wire,
) {
    let n = a.len();
    let top = n - 1;
    let mut lz = Circuit::new(c.layout().clone());
    emit_leading_zeros(&mut lz, a, counter, anc);
    for g in lz.gates() {
        c.push(g.clone());
    }

    emit_controlled_shift(c, a, counter, ShiftDirection::Left, &[]);

    let mut right = Circuit::new(Layout::new().with("x", n));
    emit_cyclic_shift(
        &mut right,
        &(0..n).collect::<Vec<_>>(),
        ShiftDirection::Right,
    );

    // At step s with counter value v the shifted divisor has degree top - s
    // and the quotient bit is v - s.
    for s in 0..n {
        for v in s..n {
            let eq = counter_equals(counter, v);
            let mut flip = eq.clone();
            flip.push(Control::one(b[top - s]));
            c.mcx(&flip, q[v - s]);
            for j in 0..n {
                let mut ctl = eq.clone();
                ctl.push(Control::one(q[v - s]));
                ctl.push(Control::one(a[j]));
                c.mcx(&ctl, b[j]);
            }
        }
        for v in s + 1..n {
            c.append_mapped(&right, a, &counter_equals(counter, v));
        }
    }

    for g in lz.inverse().gates() {
        c.push(g.clone());
    }
}

/// Long division over registers `A`, `B`, `q` (each `m + 1` wires), the
/// shift counter `i` and one ancilla.
pub fn build_naive_long_division(m: usize) -> Result<Circuit> {
    let w = NaiveWidths::new(m)?;
    let layout = Layout::new()
        .with("A", w.poly)
        .with("B", w.poly)
        .with("q", w.poly)
        .with("i", w.counter)
        .with("anc", 1);
    let mut c = Circuit::new(layout);
    let l = c.layout().clone();
    emit_long_division(
        &mut c,
        &l.reg("A").wires(),
        &l.reg("B").wires(),
        &l.reg("q").wires(),
        &l.reg("i").wires(),
        l.reg("anc").wire(0),
    );
    Ok(c)
}

/// One Euclidean step `(a,A)(b,B) → (b+qa, B+qA)(a,A)` with `q = ⌊B/A⌋`:
/// divide, run the division backwards on the coefficients to fold `q` into
/// `b` and clear it, then swap the pairs.
pub fn build_euclid_iteration(m: usize) -> Result<Circuit> {
    let w = NaiveWidths::new(m)?;
    let layout = Layout::new()
        .with("a", w.poly)
        .with("A", w.poly)
        .with("b", w.poly)
        .with("B", w.poly)
        .with("q", w.poly)
        .with("i", w.counter)
        .with("anc", 1);
    let mut c = Circuit::new(layout);
    let l = c.layout().clone();
    let (a, big_a, b, big_b) = (
        l.reg("a").wires(),
        l.reg("A").wires(),
        l.reg("b").wires(),
        l.reg("B").wires(),
    );
    let (q, i, anc) = (l.reg("q").wires(), l.reg("i").wires(), l.reg("anc").wire(0));

    emit_long_division(&mut c, &big_a, &big_b, &q, &i, anc);

    let mut div = Circuit::new(l.clone());
    emit_long_division(&mut div, &a, &b, &q, &i, anc);
    for g in div.inverse().gates() {
        c.push(g.clone());
    }

    for j in 0..w.poly {
        c.swap(a[j], b[j]);
        c.swap(big_a[j], big_b[j]);
    }
    Ok(c)
}

/// Euclidean pairs `(a, A)` and `(b, B)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EuclideanPairs {
    pub a: BinaryPolynomial,
    #[serde(rename = "A")]
    pub big_a: BinaryPolynomial,
    pub b: BinaryPolynomial,
    #[serde(rename = "B")]
    pub big_b: BinaryPolynomial,
}

impl EuclideanPairs {
    /// `(1, C)(0, f)`.
    pub fn initial(c: &BinaryPolynomial, field: &FieldSpec) -> Self {
        Self {
            a: BinaryPolynomial::one(),
            big_a: c.clone(),
            b: BinaryPolynomial::zero(),
            big_b: field.modulus().clone(),
        }
    }

    /// Classical reference step.
    pub fn step(&self) -> Result<Self> {
        let (q, r) = self.big_b.divmod(&self.big_a)?;
        Ok(Self {
            a: &self.b + &(&q * &self.a),
            big_a: r,
            b: self.a.clone(),
            big_b: self.big_a.clone(),
        })
    }

    /// `deg A < deg B`, `deg a > deg b` and `deg a + deg B = m`, with the
    /// zero polynomial below every degree.
    pub fn check_invariants(&self, m: usize) -> Result<()> {
        let deg = |p: &BinaryPolynomial| p.checked_degree().map_or(-1, |d| d as i64);
        if deg(&self.big_a) >= deg(&self.big_b) {
            return Err(Error::BadParameter(format!("deg A >= deg B in {self:?}")));
        }
        if deg(&self.a) <= deg(&self.b) {
            return Err(Error::BadParameter(format!("deg a <= deg b in {self:?}")));
        }
        if !self.a.is_zero() && !self.big_b.is_zero() && deg(&self.a) + deg(&self.big_b) != m as i64
        {
            return Err(Error::BadParameter(format!(
                "deg a + deg B != {m} in {self:?}"
            )));
        }
        Ok(())
    }

    fn write(&self, layout: &Layout, state: &mut BasisState) -> Result<()> {
        state.write_poly(layout.reg("a"), &self.a)?;
        state.write_poly(layout.reg("A"), &self.big_a)?;
        state.write_poly(layout.reg("b"), &self.b)?;
        state.write_poly(layout.reg("B"), &self.big_b)
    }

    fn read(layout: &Layout, state: &BasisState) -> Self {
        Self {
            a: state.read_poly(layout.reg("a")),
            big_a: state.read_poly(layout.reg("A")),
            b: state.read_poly(layout.reg("b")),
            big_b: state.read_poly(layout.reg("B")),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NaiveRun {
    pub inverse: BinaryPolynomial,
    pub iterations: usize,
    pub width: usize,
    pub gates_per_iteration: usize,
    /// Pair states before the first iteration and after each one.
    pub trace: Vec<EuclideanPairs>,
}

/// Drives the iteration circuit on a single input until `A = 1`; `a` then
/// holds `C^{-1}`. The circuit is simulated gate by gate each iteration and
/// the scratch registers are checked to return to zero.
pub fn run_naive_inversion_traced(c: &BinaryPolynomial, field: &FieldSpec) -> Result<NaiveRun> {
    if c.is_zero() {
        return Err(Error::ZeroElement);
    }
    if !field.contains(c) {
        return Err(Error::BadParameter(format!(
            "{c} is not an element of the field"
        )));
    }
    let m = field.m();
    let circuit = build_euclid_iteration(m)?;
    let layout = circuit.layout().clone();
    let mut pairs = EuclideanPairs::initial(c, field);
    let mut trace = vec![pairs.clone()];
    while !pairs.big_a.is_one() {
        if pairs.big_a.is_zero() || trace.len() > 2 * m + 2 {
            return Err(Error::BadParameter(format!(
                "{c} is not invertible modulo {}",
                field.modulus()
            )));
        }
        let mut state = BasisState::for_layout(&layout);
        pairs.write(&layout, &mut state)?;
        circuit.apply_in_place(&mut state)?;
        for scratch in ["q", "i", "anc"] {
            if state.read(layout.reg(scratch)) != 0 {
                return Err(Error::BadParameter(format!(
                    "scratch register {scratch} left dirty"
                )));
            }
        }
        pairs = EuclideanPairs::read(&layout, &state);
        trace.push(pairs.clone());
    }
    Ok(NaiveRun {
        inverse: pairs.a.clone(),
        iterations: trace.len() - 1,
        width: circuit.width(),
        gates_per_iteration: circuit.len(),
        trace,
    })
}

pub fn run_naive_inversion(c: &BinaryPolynomial, field: &FieldSpec) -> Result<BinaryPolynomial> {
    Ok(run_naive_inversion_traced(c, field)?.inverse)
}
