// SPDX-License-Identifier: Apache-2.0

//! Building-block circuits: SWAP, cyclic and controlled shifts, ±1
//! counters, the degree circuit, conditional XOR and a GF(2^m)
//! multiply-accumulate.
//!
//! Each `build_*` returns a standalone circuit over named registers. The
//! `emit_*` helpers append the same construction onto caller-chosen wires
//! of a larger circuit.

use crate::circuit::{Circuit, Control, Layout, Wire};
use crate::error::{Error, Result};
use crate::field::FieldSpec;

/// `⌈log2 n⌉` for `n >= 1`.
pub fn ceil_log2(n: usize) -> usize {
    assert!(n >= 1);
    (usize::BITS - (n - 1).leading_zeros()) as usize
}

/// Field degree plus the register width used for degrees and counters.
///
/// The degree register is `⌈log2 m⌉` wires; values up to `m - 1` fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockSpec {
    pub m: usize,
    pub logm: usize,
}

impl BlockSpec {
    pub fn new(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::BadParameter(format!(
                "m must be at least 2, got {m}"
            )));
        }
        Ok(Self {
            m,
            logm: ceil_log2(m),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftDirection {
    /// Towards the high-order end: bit `i` moves to `i + 1`, the top bit wraps to 0.
    Left,
    Right,
}

/// SWAP as three CNOTs.
pub fn emit_swap_cnots(c: &mut Circuit, a: Wire, b: Wire) {
    c.cnot(a, b);
    c.cnot(b, a);
    c.cnot(a, b);
}

pub fn build_swap() -> Circuit {
    let mut c = Circuit::new(Layout::new().with("x", 2));
    emit_swap_cnots(&mut c, 0, 1);
    c
}

/// Rotation by one position using `n - 1` adjacent SWAPs. `wires[0]` is the
/// least significant bit.
pub fn emit_cyclic_shift(c: &mut Circuit, wires: &[Wire], dir: ShiftDirection) {
    let n = wires.len();
    if n < 2 {
        return;
    }
    match dir {
        ShiftDirection::Left => {
            for i in (0..n - 1).rev() {
                c.swap(wires[i], wires[i + 1]);
            }
        }
        ShiftDirection::Right => {
            for i in 0..n - 1 {
                c.swap(wires[i], wires[i + 1]);
            }
        }
    }
}

pub fn build_cyclic_shift(n: usize, dir: ShiftDirection) -> Result<Circuit> {
    if n < 2 {
        return Err(Error::BadParameter(format!(
            "shift width must be at least 2, got {n}"
        )));
    }
    let mut c = Circuit::new(Layout::new().with("x", n));
    emit_cyclic_shift(&mut c, &(0..n).collect::<Vec<_>>(), dir);
    Ok(c)
}

/// Rotates `data` by the value held in `amount`: for each bit `j` of the
/// amount, `2^j` single-position shifts controlled on that bit, plus any
/// `extra` controls.
pub fn emit_controlled_shift(
    c: &mut Circuit,
    data: &[Wire],
    amount: &[Wire],
    dir: ShiftDirection,
    extra: &[Control],
) {
    let n = data.len();
    let mut one = Circuit::new(Layout::new().with("x", n));
    emit_cyclic_shift(&mut one, &(0..n).collect::<Vec<_>>(), dir);
    for (j, &bit) in amount.iter().enumerate() {
        let mut controls = vec![Control::one(bit)];
        controls.extend_from_slice(extra);
        for _ in 0..1usize << j {
            c.append_mapped(&one, data, &controls);
        }
    }
}

/// `|θ⟩|s⟩ → |θ ⋘ s⟩|s⟩` over an `n`-wire data register and `k`-wire amount.
pub fn build_controlled_shift(n: usize, k: usize) -> Result<Circuit> {
    if n < 2 || k < 1 {
        return Err(Error::BadParameter(format!(
            "controlled shift needs n >= 2, k >= 1 (got {n}, {k})"
        )));
    }
    let layout = Layout::new().with("theta", n).with("s", k);
    let mut c = Circuit::new(layout);
    let data = c.layout().reg("theta").wires();
    let amount = c.layout().reg("s").wires();
    emit_controlled_shift(&mut c, &data, &amount, ShiftDirection::Left, &[]);
    Ok(c)
}

/// `+1` on `reg` with `anc` as an extra most significant bit, under
/// `extra` controls. Each bit flips when all lower bits are 1, top bit first.
pub fn emit_increment(c: &mut Circuit, reg: &[Wire], anc: Wire, extra: &[Control]) {
    let mut bits = reg.to_vec();
    bits.push(anc);
    for i in (0..bits.len()).rev() {
        let mut controls: Vec<Control> = bits[..i].iter().map(|&w| Control::one(w)).collect();
        controls.extend_from_slice(extra);
        c.mcx(&controls, bits[i]);
    }
}

/// `-1`, the increment run backwards.
pub fn emit_decrement(c: &mut Circuit, reg: &[Wire], anc: Wire, extra: &[Control]) {
    let mut tmp = Circuit::new(c.layout().clone());
    emit_increment(&mut tmp, reg, anc, extra);
    for g in tmp.inverse().gates() {
        c.push(g.clone());
    }
}

/// `|k⟩|0⟩ → |k+1⟩|0⟩` for `k ≤ 2^w - 2` using one ancilla, which
/// becomes the most significant result bit.
pub fn build_increment(w: usize) -> Result<Circuit> {
    if w < 1 {
        return Err(Error::BadParameter(
            "increment width must be at least 1".into(),
        ));
    }
    let mut c = Circuit::new(Layout::new().with("k", w).with("anc", 1));
    let reg = c.layout().reg("k").wires();
    emit_increment(&mut c, &reg, w, &[]);
    Ok(c)
}

/// `|k⟩|0⟩ → |k-1⟩|0⟩` for `1 ≤ k ≤ 2^w - 1`.
pub fn build_decrement(w: usize) -> Result<Circuit> {
    Ok(build_increment(w)?.inverse())
}

/// Writes `value` into `reg` (assumed zero) with NOT gates.
pub fn emit_constant(c: &mut Circuit, reg: &[Wire], value: u64) {
    for (i, &w) in reg.iter().enumerate() {
        if i < 64 && (value >> i) & 1 == 1 {
            c.not(w);
        }
    }
}

/// Degree of the polynomial on `poly` into `deg` (zero on entry).
///
/// The register starts at `len - 1`; for each `j = len-1 .. 1` a decrement
/// fires when bits `poly[len-1..=j]` are all zero (0-controls).
pub fn emit_degree(c: &mut Circuit, poly: &[Wire], deg: &[Wire], anc: Wire) {
    let len = poly.len();
    emit_constant(c, deg, len as u64 - 1);
    for j in (1..len).rev() {
        let controls: Vec<Control> = poly[j..].iter().map(|&w| Control::zero(w)).collect();
        emit_decrement(c, deg, anc, &controls);
    }
}

/// Degree circuit over registers `A` (m), `deg` (⌈log2 m⌉) and `anc` (1).
/// On the zero polynomial the register reads 0.
pub fn build_degree(m: usize) -> Result<Circuit> {
    let spec = BlockSpec::new(m)?;
    let layout = Layout::new()
        .with("A", m)
        .with("deg", spec.logm)
        .with("anc", 1);
    let mut c = Circuit::new(layout);
    let a = c.layout().reg("A").wires();
    let deg = c.layout().reg("deg").wires();
    let anc = c.layout().reg("anc").wire(0);
    emit_degree(&mut c, &a, &deg, anc);
    Ok(c)
}

/// `B ← B ⊕ A` when `ctl` is 1, one Toffoli per bit.
pub fn emit_conditional_xor(c: &mut Circuit, ctl: Wire, a: &[Wire], b: &[Wire]) {
    for (&x, &y) in a.iter().zip(b) {
        c.toffoli(ctl, x, y);
    }
}

pub fn build_conditional_xor(m: usize) -> Result<Circuit> {
    if m < 1 {
        return Err(Error::BadParameter("width must be at least 1".into()));
    }
    let mut c = Circuit::new(Layout::new().with("ctl", 1).with("A", m).with("B", m));
    let a = c.layout().reg("A").wires();
    let b = c.layout().reg("B").wires();
    emit_conditional_xor(&mut c, 0, &a, &b);
    Ok(c)
}

/// `t ← t·z mod f`: rotate left, then fold the wrapped top bit into the
/// positions where `f` has a 1 (the constant term is the rotated bit itself).
pub fn emit_times_z(c: &mut Circuit, field: &FieldSpec, t: &[Wire]) {
    emit_cyclic_shift(c, t, ShiftDirection::Left);
    for j in 1..field.m() {
        if field.modulus().bit(j) {
            c.cnot(t[0], t[j]);
        }
    }
}

/// `t ← t ⊕ x·y mod f` on three `m`-wire registers, with no ancillas.
///
/// Horner evaluation from the top bit of `x`; `t` is first multiplied by
/// `z^{-m}` so its initial value comes back unscaled.
pub fn emit_mul_accumulate(c: &mut Circuit, field: &FieldSpec, x: &[Wire], y: &[Wire], t: &[Wire]) {
    let m = field.m();
    let mut times_z = Circuit::new(c.layout().clone());
    emit_times_z(&mut times_z, field, t);
    for _ in 0..m {
        for g in times_z.inverse().gates() {
            c.push(g.clone());
        }
    }
    for i in (0..m).rev() {
        for g in times_z.gates() {
            c.push(g.clone());
        }
        for j in 0..m {
            c.toffoli(x[i], y[j], t[j]);
        }
    }
}

/// `|x⟩|y⟩|t⟩ → |x⟩|y⟩|t ⊕ x·y mod f⟩`.
pub fn build_mul_accumulate(field: &FieldSpec) -> Circuit {
    let m = field.m();
    let mut c = Circuit::new(Layout::new().with("x", m).with("y", m).with("t", m));
    let (x, y, t) = (
        c.layout().reg("x").wires(),
        c.layout().reg("y").wires(),
        c.layout().reg("t").wires(),
    );
    emit_mul_accumulate(&mut c, field, &x, &y, &t);
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::BasisState;
    use crate::poly::BinaryPolynomial;
    use rand::{Rng, SeedableRng};

    fn run(c: &Circuit, inputs: &[(&str, u64)]) -> BasisState {
        let mut s = BasisState::for_layout(c.layout());
        for (name, v) in inputs {
            s.write(c.layout().reg(name), *v);
        }
        c.apply(&s).unwrap()
    }

    fn read(c: &Circuit, s: &BasisState, name: &str) -> u64 {
        s.read(c.layout().reg(name))
    }

    #[test]
    fn ceil_log2_values() {
        let got: Vec<usize> = [1, 2, 3, 4, 5, 8, 9, 16, 17]
            .iter()
            .map(|&n| ceil_log2(n))
            .collect();
        assert_eq!(got, vec![0, 1, 2, 2, 3, 3, 4, 4, 5]);
    }

    #[test]
    fn swap_block() {
        let c = build_swap();
        assert_eq!(run(&c, &[("x", 0b01)]).to_index(), 0b10);
        assert_eq!(run(&c, &[("x", 0b00)]).to_index(), 0b00);
        assert_eq!(run(&c, &[("x", 0b11)]).to_index(), 0b11);
        let r = c.report();
        assert_eq!((r.cnot, r.gates, r.width), (3, 3, 2));
    }

    #[test]
    fn cyclic_shift_block() {
        let c = build_cyclic_shift(4, ShiftDirection::Left).unwrap();
        assert_eq!(read(&c, &run(&c, &[("x", 0b1011)]), "x"), 0b0111);
        let r = c.report();
        assert_eq!((r.swap, r.gates, r.width), (3, 3, 4));
        let right = build_cyclic_shift(4, ShiftDirection::Right).unwrap();
        assert_eq!(read(&right, &run(&right, &[("x", 0b0111)]), "x"), 0b1011);
        for n in 2..=9 {
            let c = build_cyclic_shift(n, ShiftDirection::Left).unwrap();
            let mut s = BasisState::from_index(n, 0b1011 & ((1 << n) - 1));
            let start = s.clone();
            for _ in 0..n {
                s = c.apply(&s).unwrap();
            }
            assert_eq!(s, start);
            assert_eq!(c.report().swap, n - 1);
        }
        assert!(build_cyclic_shift(1, ShiftDirection::Left).is_err());
    }

    #[test]
    fn controlled_shift_block() {
        let c = build_controlled_shift(4, 2).unwrap();
        assert_eq!(
            read(&c, &run(&c, &[("theta", 0b0001), ("s", 2)]), "theta"),
            0b0100
        );
        for theta in 0..16 {
            assert_eq!(
                read(&c, &run(&c, &[("theta", theta), ("s", 0)]), "theta"),
                theta
            );
            for s in 0..4u64 {
                let out = read(&c, &run(&c, &[("theta", theta), ("s", s)]), "theta");
                let expect = ((theta << s) | (theta >> (4 - s))) & 0xf;
                assert_eq!(out, expect);
            }
        }
        assert_eq!(c.width(), 6);
    }

    #[test]
    fn increment_and_decrement() {
        let inc = build_increment(3).unwrap();
        let out = run(&inc, &[("k", 3)]);
        assert_eq!((read(&inc, &out, "k"), read(&inc, &out, "anc")), (4, 0));
        assert_eq!(read(&inc, &run(&inc, &[("k", 0)]), "k"), 1);
        assert_eq!(inc.layout().reg("anc").width, 1);

        let dec = build_decrement(3).unwrap();
        let out = run(&dec, &[("k", 4)]);
        assert_eq!((read(&dec, &out, "k"), read(&dec, &out, "anc")), (3, 0));
        for w in 1..=5 {
            let inc = build_increment(w).unwrap();
            let dec = build_decrement(w).unwrap();
            for k in 0..(1u64 << w) - 1 {
                let up = run(&inc, &[("k", k)]);
                assert_eq!(up.to_index(), k + 1);
                assert_eq!(dec.apply(&up).unwrap().to_index(), k);
            }
        }
    }

    #[test]
    fn degree_block_exhaustive() {
        for m in 2..=8 {
            let c = build_degree(m).unwrap();
            assert_eq!(c.width(), m + ceil_log2(m) + 1);
            for a in 1..(1u64 << m) {
                let out = run(&c, &[("A", a)]);
                let expect = BinaryPolynomial::from_u64(a).degree().unwrap() as u64;
                assert_eq!(read(&c, &out, "deg"), expect, "m={m} A={a:b}");
                assert_eq!(read(&c, &out, "anc"), 0);
                assert_eq!(read(&c, &out, "A"), a);
            }
        }
        let c = build_degree(5).unwrap();
        assert_eq!(read(&c, &run(&c, &[("A", 0b10101)]), "deg"), 4);
        assert_eq!(read(&c, &run(&c, &[("A", 0b00001)]), "deg"), 0);
        assert_eq!(read(&c, &run(&c, &[("A", 0)]), "deg"), 0);
    }

    #[test]
    fn degree_block_is_a_permutation() {
        let c = build_degree(4).unwrap();
        assert!(c.check_permutation().unwrap());
    }

    #[test]
    fn conditional_xor_block() {
        let c = build_conditional_xor(3).unwrap();
        assert_eq!(
            read(&c, &run(&c, &[("ctl", 0), ("A", 0b101), ("B", 0b111)]), "B"),
            0b111
        );
        assert_eq!(
            read(&c, &run(&c, &[("ctl", 1), ("A", 0b101), ("B", 0b101)]), "B"),
            0
        );
        assert_eq!(
            read(&c, &run(&c, &[("ctl", 1), ("A", 0b101), ("B", 0b111)]), "B"),
            0b010
        );
        assert_eq!(c.report().controls_histogram.get(&2), Some(&3));
    }

    #[test]
    fn mul_accumulate_examples() {
        let f = FieldSpec::standard(4).unwrap();
        let c = build_mul_accumulate(&f);
        assert_eq!(read(&c, &run(&c, &[("x", 1), ("y", 0b1011)]), "t"), 0b1011);
        assert_eq!(read(&c, &run(&c, &[("x", 0b1011), ("y", 0)]), "t"), 0);
        assert_eq!(read(&c, &run(&c, &[("x", 0b10), ("y", 0b1001)]), "t"), 1);
    }

    #[test]
    fn mul_accumulate_exhaustive() {
        for m in 2..=4 {
            let f = FieldSpec::standard(m).unwrap();
            let c = build_mul_accumulate(&f);
            for x in 0..1u64 << m {
                for y in 0..1u64 << m {
                    for t in [0, 1, (1 << m) - 1] {
                        let out = run(&c, &[("x", x), ("y", y), ("t", t)]);
                        let prod = f.mul(
                            &BinaryPolynomial::from_u64(x),
                            &BinaryPolynomial::from_u64(y),
                        );
                        assert_eq!(read(&c, &out, "t"), t ^ prod.to_u64().unwrap());
                        assert_eq!((read(&c, &out, "x"), read(&c, &out, "y")), (x, y));
                    }
                }
            }
        }
    }

    #[test]
    fn blocks_reverse_on_random_states() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for m in [5usize, 8, 16] {
            let f = FieldSpec::standard(m).unwrap();
            let circuits = vec![
                build_swap(),
                build_cyclic_shift(m, ShiftDirection::Left).unwrap(),
                build_controlled_shift(m, ceil_log2(m)).unwrap(),
                build_increment(ceil_log2(m)).unwrap(),
                build_decrement(ceil_log2(m)).unwrap(),
                build_degree(m).unwrap(),
                build_conditional_xor(m).unwrap(),
                build_mul_accumulate(&f),
            ];
            for c in circuits {
                let inv = c.inverse();
                for _ in 0..200 {
                    let bits: Vec<bool> = (0..c.width()).map(|_| rng.gen()).collect();
                    let mut s = BasisState::zeros(c.width());
                    for (i, b) in bits.iter().enumerate() {
                        s.set(i, *b);
                    }
                    assert_eq!(inv.apply(&c.apply(&s).unwrap()).unwrap(), s);
                }
            }
        }
    }
}
