// SPDX-License-Identifier: Apache-2.0

//! Reversible gate IR, basis-state simulator and resource accounting.
//!
//! A [`Circuit`] is an ordered list of [`Gate`]s over a [`Layout`] of named
//! registers. Wires are addressed by a flat index; bit `i` of a register is
//! wire `offset + i`, and bit 0 is the least significant.

mod netlist;

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeMap;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::BinaryPolynomial;

pub use netlist::{parse_netlist, to_netlist};

pub type Wire = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Register {
    pub name: String,
    pub width: usize,
    pub offset: usize,
}

impl Register {
    pub fn wire(&self, i: usize) -> Wire {
        assert!(
            i < self.width,
            "bit {i} out of range for {}[{}]",
            self.name,
            self.width
        );
        self.offset + i
    }

    pub fn wires(&self) -> Vec<Wire> {
        (self.offset..self.offset + self.width).collect()
    }
}

/// Ordered register name → width map.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Layout {
    registers: Vec<Register>,
    width: usize,
}

impl Layout {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builder form of [`Layout::add`]; panics on a duplicate name.
    pub fn with(mut self, name: &str, width: usize) -> Self {
        self.add(name, width).expect("duplicate register name");
        self
    }

    pub fn add(&mut self, name: &str, width: usize) -> Result<&Register> {
        if self.register(name).is_some() {
            return Err(Error::LayoutMismatch(format!(
                "register {name:?} declared twice"
            )));
        }
        self.registers.push(Register {
            name: name.to_string(),
            width,
            offset: self.width,
        });
        self.width += width;
        Ok(self.registers.last().expect("just pushed"))
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn register(&self, name: &str) -> Option<&Register> {
        self.registers.iter().find(|r| r.name == name)
    }

    /// Panicking lookup for builder code that owns the layout.
    pub fn reg(&self, name: &str) -> &Register {
        self.register(name)
            .unwrap_or_else(|| panic!("no register named {name:?}"))
    }

    pub fn wire(&self, name: &str, i: usize) -> Result<Wire> {
        let r = self
            .register(name)
            .ok_or_else(|| Error::LayoutMismatch(format!("no register named {name:?}")))?;
        if i >= r.width {
            return Err(Error::LayoutMismatch(format!(
                "{name}[{i}] out of range (width {})",
                r.width
            )));
        }
        Ok(r.offset + i)
    }

    /// `(register name, bit index)` for a flat wire.
    pub fn locate(&self, w: Wire) -> Option<(&str, usize)> {
        self.registers
            .iter()
            .find(|r| w >= r.offset && w < r.offset + r.width)
            .map(|r| (r.name.as_str(), w - r.offset))
    }

    /// True when every register of `other` exists here with the same width.
    pub fn contains_layout(&self, other: &Layout) -> bool {
        other
            .registers
            .iter()
            .all(|r| self.register(&r.name).is_some_and(|s| s.width == r.width))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Control {
    pub wire: Wire,
    /// `true` fires on |1⟩, `false` is a 0-control.
    pub on: bool,
}

impl Control {
    pub fn one(wire: Wire) -> Self {
        Self { wire, on: true }
    }

    pub fn zero(wire: Wire) -> Self {
        Self { wire, on: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum GateKind {
    Not,
    ControlledNot,
    Swap,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Gate {
    Not(Wire),
    /// Multi-controlled NOT with per-control polarity; at least one control.
    Cnot {
        controls: Vec<Control>,
        target: Wire,
    },
    Swap(Wire, Wire),
}

impl Gate {
    pub fn kind(&self) -> GateKind {
        match self {
            Gate::Not(_) => GateKind::Not,
            Gate::Cnot { .. } => GateKind::ControlledNot,
            Gate::Swap(..) => GateKind::Swap,
        }
    }

    pub fn wires(&self) -> Vec<Wire> {
        match self {
            Gate::Not(t) => vec![*t],
            Gate::Cnot { controls, target } => {
                let mut w: Vec<Wire> = controls.iter().map(|c| c.wire).collect();
                w.push(*target);
                w
            }
            Gate::Swap(a, b) => vec![*a, *b],
        }
    }

    fn validate(&self, width: usize) -> Result<()> {
        let wires = self.wires();
        if let Some(w) = wires.iter().find(|&&w| w >= width) {
            return Err(Error::LayoutMismatch(format!(
                "wire {w} outside layout of width {width}"
            )));
        }
        let mut sorted = wires.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != wires.len() {
            return Err(Error::LayoutMismatch(format!(
                "gate {self:?} uses a wire twice"
            )));
        }
        if let Gate::Cnot { controls, .. } = self {
            if controls.is_empty() {
                return Err(Error::LayoutMismatch(
                    "controlled NOT without controls".into(),
                ));
            }
        }
        Ok(())
    }

    fn remap(&self, map: &[Wire]) -> Gate {
        match self {
            Gate::Not(t) => Gate::Not(map[*t]),
            Gate::Cnot { controls, target } => Gate::Cnot {
                controls: controls
                    .iter()
                    .map(|c| Control {
                        wire: map[c.wire],
                        on: c.on,
                    })
                    .collect(),
                target: map[*target],
            },
            Gate::Swap(a, b) => Gate::Swap(map[*a], map[*b]),
        }
    }

    /// The same gate with extra controls. A controlled SWAP is emitted as
    /// CNOT, controlled-CNOT, CNOT.
    fn controlled(&self, extra: &[Control]) -> Vec<Gate> {
        if extra.is_empty() {
            return vec![self.clone()];
        }
        match self {
            Gate::Not(t) => vec![Gate::Cnot {
                controls: extra.to_vec(),
                target: *t,
            }],
            Gate::Cnot { controls, target } => {
                let mut c = controls.clone();
                c.extend_from_slice(extra);
                vec![Gate::Cnot {
                    controls: c,
                    target: *target,
                }]
            }
            Gate::Swap(a, b) => {
                let mut c = vec![Control::one(*a)];
                c.extend_from_slice(extra);
                vec![
                    Gate::Cnot {
                        controls: vec![Control::one(*b)],
                        target: *a,
                    },
                    Gate::Cnot {
                        controls: c,
                        target: *b,
                    },
                    Gate::Cnot {
                        controls: vec![Control::one(*b)],
                        target: *a,
                    },
                ]
            }
        }
    }

    fn apply(&self, bits: &mut [bool]) {
        match self {
            Gate::Not(t) => bits[*t] ^= true,
            Gate::Cnot { controls, target } => {
                if controls.iter().all(|c| bits[c.wire] == c.on) {
                    bits[*target] ^= true;
                }
            }
            Gate::Swap(a, b) => bits.swap(*a, *b),
        }
    }
}

/// One bit per wire.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisState {
    bits: Vec<bool>,
}

impl BasisState {
    pub fn zeros(width: usize) -> Self {
        Self {
            bits: vec![false; width],
        }
    }

    pub fn for_layout(layout: &Layout) -> Self {
        Self::zeros(layout.width())
    }

    /// Wire `i` takes bit `i` of `index`.
    pub fn from_index(width: usize, index: u64) -> Self {
        Self {
            bits: (0..width)
                .map(|i| i < 64 && (index >> i) & 1 == 1)
                .collect(),
        }
    }

    pub fn to_index(&self) -> u64 {
        assert!(self.bits.len() <= 64, "state too wide for an index");
        self.bits
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &b)| acc | (u64::from(b) << i))
    }

    pub fn width(&self) -> usize {
        self.bits.len()
    }

    pub fn get(&self, w: Wire) -> bool {
        self.bits[w]
    }

    pub fn set(&mut self, w: Wire, v: bool) {
        self.bits[w] = v;
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Register value, bit 0 least significant. Registers wider than 64
    /// wires are truncated.
    pub fn read(&self, reg: &Register) -> u64 {
        (0..reg.width.min(64)).fold(0, |acc, i| {
            acc | (u64::from(self.bits[reg.offset + i]) << i)
        })
    }

    pub fn write(&mut self, reg: &Register, value: u64) {
        for i in 0..reg.width {
            self.bits[reg.offset + i] = i < 64 && (value >> i) & 1 == 1;
        }
    }

    pub fn read_bits(&self, reg: &Register) -> Vec<bool> {
        self.bits[reg.offset..reg.offset + reg.width].to_vec()
    }

    pub fn write_bits(&mut self, reg: &Register, bits: &[bool]) {
        for i in 0..reg.width {
            self.bits[reg.offset + i] = bits.get(i).copied().unwrap_or(false);
        }
    }

    pub fn read_poly(&self, reg: &Register) -> BinaryPolynomial {
        BinaryPolynomial::from_coeffs(self.read_bits(reg))
    }

    /// Fails when `p` does not fit the register.
    pub fn write_poly(&mut self, reg: &Register, p: &BinaryPolynomial) -> Result<()> {
        if p.bit_len() > reg.width {
            return Err(Error::BadParameter(format!(
                "{p} does not fit register {} of width {}",
                reg.name, reg.width
            )));
        }
        self.write_bits(reg, &p.bits(reg.width));
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Circuit {
    layout: Layout,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(layout: Layout) -> Self {
        Self {
            layout,
            gates: Vec::new(),
        }
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn width(&self) -> usize {
        self.layout.width()
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn try_push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.layout.width())?;
        self.gates.push(gate);
        Ok(())
    }

    /// Appends a gate; panics if the gate is malformed for this layout.
    pub fn push(&mut self, gate: Gate) {
        if let Err(e) = self.try_push(gate) {
            panic!("invalid gate: {e}");
        }
    }

    pub fn not(&mut self, t: Wire) {
        self.push(Gate::Not(t));
    }

    pub fn cnot(&mut self, c: Wire, t: Wire) {
        self.push(Gate::Cnot {
            controls: vec![Control::one(c)],
            target: t,
        });
    }

    pub fn toffoli(&mut self, c1: Wire, c2: Wire, t: Wire) {
        self.push(Gate::Cnot {
            controls: vec![Control::one(c1), Control::one(c2)],
            target: t,
        });
    }

    /// NOT on `t` under `controls`; plain NOT when there are none.
    pub fn mcx(&mut self, controls: &[Control], t: Wire) {
        if controls.is_empty() {
            self.not(t);
        } else {
            self.push(Gate::Cnot {
                controls: controls.to_vec(),
                target: t,
            });
        }
    }

    pub fn swap(&mut self, a: Wire, b: Wire) {
        self.push(Gate::Swap(a, b));
    }

    /// Appends `sub`'s gates, sending `sub` wire `i` to `map[i]`, each gate
    /// additionally conditioned on `extra`.
    pub fn append_mapped(&mut self, sub: &Circuit, map: &[Wire], extra: &[Control]) {
        assert_eq!(
            map.len(),
            sub.width(),
            "wire map must cover the sub-circuit layout"
        );
        for g in &sub.gates {
            for h in g.remap(map).controlled(extra) {
                self.push(h);
            }
        }
    }

    /// Appends `sub` by register name: every register of `sub` must exist
    /// here with the same width.
    pub fn append_by_name(&mut self, sub: &Circuit) -> Result<()> {
        let map = self.name_map(sub.layout())?;
        for g in &sub.gates {
            self.try_push(g.remap(&map))?;
        }
        Ok(())
    }

    fn name_map(&self, sub: &Layout) -> Result<Vec<Wire>> {
        if !self.layout.contains_layout(sub) {
            return Err(Error::LayoutMismatch(
                "registers missing or of different width".into(),
            ));
        }
        let mut map = vec![0; sub.width()];
        for r in sub.registers() {
            let target = self.layout.reg(&r.name);
            for i in 0..r.width {
                map[r.offset + i] = target.offset + i;
            }
        }
        Ok(map)
    }

    /// Gate order reversed; every gate is self-inverse.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            layout: self.layout.clone(),
            gates: self.gates.iter().rev().cloned().collect(),
        }
    }

    /// `first` followed by `second`, on `first`'s layout.
    pub fn compose(&self, second: &Circuit) -> Result<Circuit> {
        let mut out = self.clone();
        out.append_by_name(second)?;
        Ok(out)
    }

    pub fn apply_in_place(&self, state: &mut BasisState) -> Result<()> {
        if state.width() != self.width() {
            return Err(Error::LayoutMismatch(format!(
                "state has {} wires, circuit has {}",
                state.width(),
                self.width()
            )));
        }
        for g in &self.gates {
            g.apply(&mut state.bits);
        }
        Ok(())
    }

    pub fn apply(&self, state: &BasisState) -> Result<BasisState> {
        let mut out = state.clone();
        self.apply_in_place(&mut out)?;
        Ok(out)
    }

    pub fn report(&self) -> ResourceReport {
        let mut r = ResourceReport {
            width: self.width(),
            ..Default::default()
        };
        let mut level = vec![0usize; self.width()];
        for g in &self.gates {
            match g {
                Gate::Not(_) => r.not += 1,
                Gate::Cnot { controls, .. } => {
                    r.cnot += 1;
                    *r.controls_histogram.entry(controls.len()).or_default() += 1;
                }
                Gate::Swap(..) => r.swap += 1,
            }
            let wires = g.wires();
            let l = wires.iter().map(|&w| level[w]).max().unwrap_or(0) + 1;
            for w in wires {
                level[w] = l;
            }
            r.depth = r.depth.max(l);
        }
        r.gates = self.gates.len();
        r
    }

    /// Exhaustively checks that the induced map on basis states is a bijection.
    pub fn check_permutation(&self) -> Result<bool> {
        const LIMIT: usize = 20;
        let width = self.width();
        if width > LIMIT {
            return Err(Error::WidthTooLarge {
                width,
                limit: LIMIT,
            });
        }
        let n = 1usize << width;
        let mut seen = vec![false; n];
        for i in 0..n as u64 {
            let out = self.apply(&BasisState::from_index(width, i))?.to_index() as usize;
            if std::mem::replace(&mut seen[out], true) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn apply(circuit: &Circuit, state: &BasisState) -> Result<BasisState> {
    circuit.apply(state)
}

pub fn inverse(circuit: &Circuit) -> Circuit {
    circuit.inverse()
}

pub fn compose(first: &Circuit, second: &Circuit) -> Result<Circuit> {
    first.compose(second)
}

pub fn report(circuit: &Circuit) -> ResourceReport {
    circuit.report()
}

pub fn check_permutation(circuit: &Circuit) -> Result<bool> {
    circuit.check_permutation()
}

/// Width, gate counts and greedy-layering depth of a circuit.
///
/// `controls_histogram` maps control arity to the number of controlled
/// NOTs with that many controls.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ResourceReport {
    pub width: usize,
    pub gates: usize,
    pub not: usize,
    pub cnot: usize,
    pub swap: usize,
    pub depth: usize,
    pub controls_histogram: BTreeMap<usize, usize>,
}

impl ResourceReport {
    /// Adds counts of two sequential pieces (depth is not additive and is
    /// taken as the sum, an upper bound).
    pub fn combine(&self, other: &ResourceReport) -> ResourceReport {
        let mut h = self.controls_histogram.clone();
        for (k, v) in &other.controls_histogram {
            *h.entry(*k).or_default() += v;
        }
        ResourceReport {
            width: self.width.max(other.width),
            gates: self.gates + other.gates,
            not: self.not + other.not,
            cnot: self.cnot + other.cnot,
            swap: self.swap + other.swap,
            depth: self.depth + other.depth,
            controls_histogram: h,
        }
    }
}

impl Serialize for ResourceReport {
    /// Flat object; the histogram becomes `cnot_controls_<k>` keys.
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(None)?;
        map.serialize_entry("width", &self.width)?;
        map.serialize_entry("gates", &self.gates)?;
        map.serialize_entry("not", &self.not)?;
        map.serialize_entry("cnot", &self.cnot)?;
        map.serialize_entry("swap", &self.swap)?;
        map.serialize_entry("depth", &self.depth)?;
        for (k, v) in &self.controls_histogram {
            map.serialize_entry(&format!("cnot_controls_{k}"), v)?;
        }
        map.end()
    }
}

impl fmt::Display for ResourceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "width={} gates={} not={} cnot={} swap={} depth={}",
            self.width, self.gates, self.not, self.cnot, self.swap, self.depth
        )
    }
}
