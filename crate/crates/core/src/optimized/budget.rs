// SPDX-License-Identifier: Apache-2.0

//! Qubit accounting and gate-count estimates for the synchronized inverter.

use serde::Serialize;

use super::OptParams;
use crate::blocks::ceil_log2;
use crate::circuit::Layout;

/// `2m + 7⌈log2 m⌉ + 7 + H`.
pub fn qubit_budget(m: usize, h: usize) -> usize {
    2 * m + 7 * ceil_log2(m) + 7 + h
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BudgetItem {
    pub name: &'static str,
    pub qubits: usize,
}

/// The budget split by role; the items sum to [`qubit_budget`].
pub fn budget_breakdown(m: usize, h: usize) -> Vec<BudgetItem> {
    let l = ceil_log2(m);
    vec![
        BudgetItem {
            name: "A,B,a,b",
            qubits: 2 * m,
        },
        BudgetItem {
            name: "q",
            qubits: 3 * l,
        },
        BudgetItem {
            name: "degrees",
            qubits: 4 * l + 4,
        },
        BudgetItem {
            name: "f,c",
            qubits: 3,
        },
        BudgetItem {
            name: "h",
            qubits: h,
        },
    ]
}

/// Wire-level layout of the machine state.
pub fn opt_layout(pr: &OptParams) -> Layout {
    let mut layout = Layout::new()
        .with("U", pr.m)
        .with("V", pr.m)
        .with("q", pr.q_width);
    for name in ["degA", "degB", "dega", "degb"] {
        layout = layout.with(name, pr.logm);
    }
    for name in ["degA", "degB", "dega", "degb"] {
        layout = layout.with(&format!("{name}_anc"), 1);
    }
    layout.with("f", 1).with("c", 2).with("h", pr.h_width)
}

/// Estimated gate counts per scheduled operation, one round, and the whole
/// run. Boundary-dependent gates are counted once per possible boundary
/// value, each carrying the extra control pattern that selects it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CostEstimate {
    pub o1: usize,
    pub o2: usize,
    pub o3: usize,
    pub o4: usize,
    pub ac: usize,
    pub per_round: usize,
    pub cycles: usize,
    pub total: usize,
}

pub fn estimate_costs(pr: &OptParams) -> CostEstimate {
    let m = pr.m;
    let dw = pr.deg_width();
    let eq_test = 2 * dw + 1;
    let inc = dw + 1;
    let rotations = 3 * m * (m - 1) / 2;
    let o1 = 1 + (2 * inc + eq_test) + (3 * (pr.q_width - 1) + 2) + m * (m + 1) + rotations + inc;
    let o2 = eq_test + 1 + 1 + rotations + inc;
    let o3 = 2 * eq_test + rotations + m * (m + 1) / 2 + 3 * (pr.q_width - 1) + 1 + inc;
    let o4 = 2 + 3 * (m + 2 * dw) + pr.h_width + 1;
    let ac = 2 * ROUND_LEN;
    let per_round = o1 + o2 + o3 + o4 + ac;
    CostEstimate {
        o1,
        o2,
        o3,
        o4,
        ac,
        per_round,
        cycles: pr.cycles,
        total: per_round * pr.cycles,
    }
}

const ROUND_LEN: usize = 4;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_values() {
        assert_eq!(qubit_budget(16, 0), 67);
        assert_eq!(qubit_budget(4, 0), 29);
        for m in [2, 4, 5, 8, 16, 31] {
            let sum: usize = budget_breakdown(m, 9).iter().map(|i| i.qubits).sum();
            assert_eq!(sum, qubit_budget(m, 9));
        }
    }

    #[test]
    fn layout_matches_formula() {
        for m in [4, 8, 16] {
            let pr = OptParams::with_default_cycles(m).unwrap();
            assert_eq!(opt_layout(&pr).width(), qubit_budget(m, pr.h_width));
        }
    }

    #[test]
    fn estimates_grow_quadratically_per_round() {
        let a = estimate_costs(&OptParams::new(8, 1).unwrap()).per_round;
        let b = estimate_costs(&OptParams::new(16, 1).unwrap()).per_round;
        assert!(b > 3 * a && b < 5 * a);
    }
}
