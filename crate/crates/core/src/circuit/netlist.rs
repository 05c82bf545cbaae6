// SPDX-License-Identifier: Apache-2.0

//! Text netlist format.
//!
//! ```text
//! REG A 4
//! REG q 2
//! NOT A[0]
//! CNOT +A[1] -A[2] > q[0]
//! SWAP A[0] A[3]
//! ```
//!
//! `+` marks a 1-control, `-` a 0-control; the target follows `>`.
//! Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;

use super::{Circuit, Control, Gate, Layout, Wire};
use crate::error::{Error, Result};

fn wire_name(layout: &Layout, w: Wire) -> String {
    let (name, i) = layout.locate(w).expect("gate wires lie inside the layout");
    format!("{name}[{i}]")
}

pub fn to_netlist(circuit: &Circuit) -> String {
    let layout = circuit.layout();
    let mut out = String::new();
    for r in layout.registers() {
        writeln!(out, "REG {} {}", r.name, r.width).expect("writing to a String");
    }
    for g in circuit.gates() {
        let line = match g {
            Gate::Not(t) => format!("NOT {}", wire_name(layout, *t)),
            Gate::Cnot { controls, target } => {
                let mut s = String::from("CNOT");
                for c in controls {
                    s.push(' ');
                    s.push(if c.on { '+' } else { '-' });
                    s.push_str(&wire_name(layout, c.wire));
                }
                s.push_str(" > ");
                s.push_str(&wire_name(layout, *target));
                s
            }
            Gate::Swap(a, b) => format!("SWAP {} {}", wire_name(layout, *a), wire_name(layout, *b)),
        };
        out.push_str(&line);
        out.push('\n');
    }
    out
}

fn parse_wire(layout: &Layout, tok: &str, line: usize) -> Result<Wire> {
    let err = || Error::Parse(format!("line {line}: bad wire {tok:?}"));
    let (name, rest) = tok.split_once('[').ok_or_else(err)?;
    let idx: usize = rest
        .strip_suffix(']')
        .ok_or_else(err)?
        .parse()
        .map_err(|_| err())?;
    layout
        .wire(name, idx)
        .map_err(|e| Error::Parse(format!("line {line}: {e}")))
}

pub fn parse_netlist(text: &str) -> Result<Circuit> {
    let mut layout = Layout::new();
    let mut gate_lines = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks[0] == "REG" {
            if !gate_lines.is_empty() {
                return Err(Error::Parse(format!(
                    "line {}: REG after first gate",
                    n + 1
                )));
            }
            let [_, name, width] = toks[..] else {
                return Err(Error::Parse(format!(
                    "line {}: expected REG name width",
                    n + 1
                )));
            };
            let width: usize = width
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad width {width:?}", n + 1)))?;
            layout
                .add(name, width)
                .map_err(|e| Error::Parse(format!("line {}: {e}", n + 1)))?;
        } else {
            gate_lines.push((n + 1, toks));
        }
    }
    let mut circuit = Circuit::new(layout);
    for (line, toks) in gate_lines {
        let layout = circuit.layout();
        let gate = match toks[0] {
            "NOT" if toks.len() == 2 => Gate::Not(parse_wire(layout, toks[1], line)?),
            "SWAP" if toks.len() == 3 => Gate::Swap(
                parse_wire(layout, toks[1], line)?,
                parse_wire(layout, toks[2], line)?,
            ),
            "CNOT" => {
                let arrow = toks
                    .iter()
                    .position(|&t| t == ">")
                    .filter(|&p| p + 2 == toks.len())
                    .ok_or_else(|| {
                        Error::Parse(format!("line {line}: CNOT needs `> target` at the end"))
                    })?;
                let mut controls = Vec::new();
                for tok in &toks[1..arrow] {
                    let (on, w) = match tok.split_at(1) {
                        ("+", w) => (true, w),
                        ("-", w) => (false, w),
                        _ => {
                            return Err(Error::Parse(format!(
                                "line {line}: control {tok:?} needs + or -"
                            )))
                        }
                    };
                    controls.push(Control {
                        wire: parse_wire(layout, w, line)?,
                        on,
                    });
                }
                Gate::Cnot {
                    controls,
                    target: parse_wire(layout, toks[arrow + 1], line)?,
                }
            }
            other => return Err(Error::Parse(format!("line {line}: unknown gate {other:?}"))),
        };
        circuit
            .try_push(gate)
            .map_err(|e| Error::Parse(format!("line {line}: {e}")))?;
    }
    Ok(circuit)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let layout = Layout::new().with("A", 3).with("q", 2);
        let mut c = Circuit::new(layout);
        c.not(0);
        c.mcx(&[Control::one(1), Control::zero(2)], 3);
        c.swap(0, 4);
        let text = to_netlist(&c);
        assert_eq!(
            text,
            "REG A 3\nREG q 2\nNOT A[0]\nCNOT +A[1] -A[2] > q[0]\nSWAP A[0] q[1]\n"
        );
        assert_eq!(parse_netlist(&text).unwrap(), c);
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_netlist("REG A 2\nNOT B[0]").is_err());
        assert!(parse_netlist("REG A 2\nNOT A[2]").is_err());
        assert!(parse_netlist("REG A 2\nCNOT A[0] > A[1]").is_err());
        assert!(parse_netlist("REG A 2\nCNOT +A[0] > A[0]").is_err());
        assert!(parse_netlist("REG A 2\nCNOT +A[0] A[1]").is_err());
        assert!(parse_netlist("REG A 2\nFOO A[0]").is_err());
        assert!(parse_netlist("REG A 2\nREG A 3").is_err());
    }
}
