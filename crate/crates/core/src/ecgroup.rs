// SPDX-License-Identifier: Apache-2.0

//! `|S⟩ → |S + A⟩` for a fixed, classically known point `A = (α, β)`,
//! assembled from constant additions, a squaring, and a division and a
//! multiplication that each uncompute one operand.
//!
//! The division `x, y ⟺ x, y/x` runs as
//! `x,y → 1/x,y → 1/x,y,y/x → x,y,y/x → x,0,y/x` (inversions and
//! multiply-accumulates); the multiplication is the same thing backwards.
//! Multiplications, squaring and constants are gate-level circuits on the
//! registers `X`, `Y`, `T`. The inversion `X ← X^{-1}` is carried out by
//! the chosen Euclid backend.

use std::collections::HashMap;
use std::sync::Mutex;

use serde::Serialize;

use crate::blocks::emit_mul_accumulate;
use crate::circuit::{BasisState, Circuit, Layout, ResourceReport};
use crate::curve::{CurveKind, CurvePoint, CurveSpec};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::naive::{run_naive_inversion, NaiveWidths};
use crate::optimized::{qubit_budget, run_synchronized, OptParams};
use crate::poly::BinaryPolynomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Naive,
    Optimized,
}

impl std::str::FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "naive" => Ok(Self::Naive),
            "opt" | "optimized" => Ok(Self::Optimized),
            other => Err(Error::Parse(format!("unknown backend {other:?}"))),
        }
    }
}

impl Backend {
    /// Wires used by the inverter, including its input/output register.
    pub fn inverter_width(self, m: usize) -> Result<usize> {
        Ok(match self {
            Backend::Naive => {
                let w = NaiveWidths::new(m)?;
                5 * w.poly + w.counter + 1
            }
            Backend::Optimized => {
                let pr = OptParams::with_default_cycles(m)?;
                qubit_budget(m, pr.h_width)
            }
        })
    }

    pub fn invert(self, c: &BinaryPolynomial, field: &FieldSpec) -> Result<BinaryPolynomial> {
        match self {
            Backend::Naive => run_naive_inversion(c, field),
            Backend::Optimized => {
                let report = run_synchronized(
                    std::slice::from_ref(c),
                    field,
                    OptParams::default_cycles(field.m()),
                )?;
                let o = &report.outcomes[0];
                o.inverse.clone().ok_or(Error::QuotientOverflow {
                    bits: 3 * crate::blocks::ceil_log2(field.m()),
                })
            }
        }
    }
}

/// The fixed point `A = (α, β)` on a curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedPointParams {
    pub curve: CurveSpec,
    pub alpha: BinaryPolynomial,
    pub beta: BinaryPolynomial,
}

impl FixedPointParams {
    pub fn new(curve: CurveSpec, alpha: BinaryPolynomial, beta: BinaryPolynomial) -> Result<Self> {
        if !curve.is_on_curve(&CurvePoint::affine(alpha.clone(), beta.clone())) {
            return Err(Error::PointNotOnCurve);
        }
        Ok(Self { curve, alpha, beta })
    }

    pub fn point(&self) -> CurvePoint {
        CurvePoint::affine(self.alpha.clone(), self.beta.clone())
    }
}

/// One reversible step on the `(x, y)` registers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum GroupStep {
    /// `x ^= kx`, `y ^= ky`.
    AddConstants {
        x: BinaryPolynomial,
        y: BinaryPolynomial,
    },
    /// `x, y ⟺ x, y/x`.
    Divide,
    /// `x ^= y² (+ y) + k`.
    SquareFold {
        with_linear: bool,
        constant: BinaryPolynomial,
    },
    /// `x, y ⟺ x, x·y`.
    Multiply,
    /// `y ^= x + k`.
    FoldXIntoY { constant: BinaryPolynomial },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupStepPlan {
    pub kind: CurveKind,
    pub steps: Vec<GroupStep>,
}

/// The step list for `S → S + A`.
///
/// Non-supersingular, with `λ = (y+β)/(x+α) = (x'+y'+β)/(x'+α)`:
/// `x,y → x+α,y+β → x+α,λ → x'+α,λ → x'+α,x'+y'+β → x',x'+y'+β → x',y'`.
///
/// Supersingular, with `λ = (y+β)/(x+α) = (y'+c+β)/(x'+α)`:
/// `x,y → x+α,y+β → x+α,λ → x'+α,λ → x'+α,y'+c+β → x',y'`.
pub fn plan_group_add(params: &FixedPointParams) -> Result<GroupStepPlan> {
    let curve = &params.curve;
    if !curve.is_on_curve(&params.point()) {
        return Err(Error::PointNotOnCurve);
    }
    let (alpha, beta) = (&params.alpha, &params.beta);
    let zero = BinaryPolynomial::zero();
    let steps = match curve.kind {
        CurveKind::NonSupersingular => vec![
            GroupStep::AddConstants {
                x: alpha.clone(),
                y: beta.clone(),
            },
            GroupStep::Divide,
            GroupStep::SquareFold {
                with_linear: true,
                constant: alpha + &curve.a,
            },
            GroupStep::Multiply,
            GroupStep::AddConstants {
                x: alpha.clone(),
                y: zero,
            },
            GroupStep::FoldXIntoY {
                constant: beta.clone(),
            },
        ],
        CurveKind::Supersingular => vec![
            GroupStep::AddConstants {
                x: alpha.clone(),
                y: beta.clone(),
            },
            GroupStep::Divide,
            GroupStep::SquareFold {
                with_linear: false,
                constant: alpha.clone(),
            },
            GroupStep::Multiply,
            GroupStep::AddConstants {
                x: alpha.clone(),
                y: &curve.c_or_zero() + beta,
            },
        ],
    };
    Ok(GroupStepPlan {
        kind: curve.kind,
        steps,
    })
}

/// `λ ↦ λ²` as an `m × m` matrix over GF(2): column `j` is `z^{2j} mod f`.
pub fn squaring_matrix(field: &FieldSpec) -> Vec<Vec<bool>> {
    let m = field.m();
    let cols: Vec<BinaryPolynomial> = (0..m)
        .map(|j| field.reduce(&BinaryPolynomial::monomial(2 * j)))
        .collect();
    (0..m)
        .map(|i| cols.iter().map(|c| c.bit(i)).collect())
        .collect()
}

/// Contribution `λ² (+ λ) + k` folded into `x` by [`GroupStep::SquareFold`].
pub fn squaring_step(
    lambda: &BinaryPolynomial,
    with_linear: bool,
    constant: &BinaryPolynomial,
    field: &FieldSpec,
) -> BinaryPolynomial {
    let mut out = &field.square(lambda) + constant;
    if with_linear {
        out += lambda;
    }
    out
}

enum Action {
    Gates(Circuit),
    Invert,
}

/// Compiled plan plus the inversion backend.
pub struct GroupAdder {
    pub params: FixedPointParams,
    pub plan: GroupStepPlan,
    pub backend: Backend,
    layout: Layout,
    actions: Vec<(usize, Action)>,
    inverses: Mutex<HashMap<BinaryPolynomial, BinaryPolynomial>>,
}

fn data_layout(m: usize) -> Layout {
    Layout::new().with("X", m).with("Y", m).with("T", m)
}

fn division_actions(field: &FieldSpec, layout: &Layout) -> Vec<Action> {
    let (x, y, t) = (
        layout.reg("X").wires(),
        layout.reg("Y").wires(),
        layout.reg("T").wires(),
    );
    let mut into_t = Circuit::new(layout.clone());
    emit_mul_accumulate(&mut into_t, field, &x, &y, &t);
    let mut into_y = Circuit::new(layout.clone());
    emit_mul_accumulate(&mut into_y, field, &x, &t, &y);
    let mut swap = Circuit::new(layout.clone());
    for (a, b) in y.iter().zip(&t) {
        swap.swap(*a, *b);
    }
    vec![
        Action::Invert,
        Action::Gates(into_t),
        Action::Invert,
        Action::Gates(into_y),
        Action::Gates(swap),
    ]
}

fn compile(step: &GroupStep, field: &FieldSpec, layout: &Layout) -> Vec<Action> {
    let m = field.m();
    let (x, y) = (layout.reg("X").wires(), layout.reg("Y").wires());
    let nots = |c: &mut Circuit, wires: &[usize], k: &BinaryPolynomial| {
        for (i, &w) in wires.iter().enumerate() {
            if k.bit(i) {
                c.not(w);
            }
        }
    };
    match step {
        GroupStep::AddConstants { x: kx, y: ky } => {
            let mut c = Circuit::new(layout.clone());
            nots(&mut c, &x, kx);
            nots(&mut c, &y, ky);
            vec![Action::Gates(c)]
        }
        GroupStep::Divide => division_actions(field, layout),
        GroupStep::Multiply => division_actions(field, layout)
            .into_iter()
            .rev()
            .map(|a| match a {
                Action::Gates(c) => Action::Gates(c.inverse()),
                Action::Invert => Action::Invert,
            })
            .collect(),
        GroupStep::SquareFold {
            with_linear,
            constant,
        } => {
            let mut c = Circuit::new(layout.clone());
            let sq = squaring_matrix(field);
            for i in 0..m {
                for j in 0..m {
                    if sq[i][j] ^ (*with_linear && i == j) {
                        c.cnot(y[j], x[i]);
                    }
                }
            }
            nots(&mut c, &x, constant);
            vec![Action::Gates(c)]
        }
        GroupStep::FoldXIntoY { constant } => {
            let mut c = Circuit::new(layout.clone());
            for i in 0..m {
                c.cnot(x[i], y[i]);
            }
            nots(&mut c, &y, constant);
            vec![Action::Gates(c)]
        }
    }
}

/// Resource summary of the assembled group operation.
#[derive(Debug, Clone, Serialize)]
pub struct GroupResources {
    pub backend: Backend,
    /// Inverter width plus the two extra `m`-wire registers `Y` and `T`.
    pub width: usize,
    pub inverter_width: usize,
    pub inversions: usize,
    /// Gate-level parts: multiplications, squaring and constants.
    pub gates: ResourceReport,
}

impl GroupAdder {
    pub fn new(params: FixedPointParams, backend: Backend) -> Result<Self> {
        let plan = plan_group_add(&params)?;
        let field = params.curve.field.clone();
        let layout = data_layout(field.m());
        let mut actions = Vec::new();
        for (i, step) in plan.steps.iter().enumerate() {
            actions.extend(compile(step, &field, &layout).into_iter().map(|a| (i, a)));
        }
        Ok(Self {
            params,
            plan,
            backend,
            layout,
            actions,
            inverses: Mutex::new(HashMap::new()),
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.params.curve.field
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    fn invert_register(&self, state: &mut BasisState) -> Result<()> {
        let reg = self.layout.reg("X");
        let x = state.read_poly(reg);
        if x.is_zero() {
            return Err(Error::NonGenericInput(
                "division by zero inside the group operation".into(),
            ));
        }
        let cached = self
            .inverses
            .lock()
            .expect("inverse cache poisoned")
            .get(&x)
            .cloned();
        let inv = match cached {
            Some(v) => v,
            None => {
                let v = self.backend.invert(&x, self.field())?;
                self.inverses
                    .lock()
                    .expect("inverse cache poisoned")
                    .insert(x, v.clone());
                v
            }
        };
        state.write_poly(reg, &inv)
    }

    /// Runs the plan on a raw register state; `reverse` runs it backwards.
    pub fn run_registers(&self, state: &mut BasisState, reverse: bool) -> Result<()> {
        let mut apply = |a: &Action| -> Result<()> {
            match a {
                Action::Gates(c) if reverse => c.inverse().apply_in_place(state),
                Action::Gates(c) => c.apply_in_place(state),
                Action::Invert => self.invert_register(state),
            }
        };
        if reverse {
            self.actions.iter().rev().try_for_each(|(_, a)| apply(a))
        } else {
            self.actions.iter().try_for_each(|(_, a)| apply(a))
        }
    }

    /// Register values after each plan step, starting from `(x, y)`.
    pub fn step_values(
        &self,
        x: &BinaryPolynomial,
        y: &BinaryPolynomial,
    ) -> Result<Vec<(BinaryPolynomial, BinaryPolynomial)>> {
        let mut state = self.load(x, y)?;
        let mut out = vec![(x.clone(), y.clone())];
        for i in 0..self.plan.steps.len() {
            for (_, a) in self.actions.iter().filter(|(s, _)| *s == i) {
                match a {
                    Action::Gates(c) => c.apply_in_place(&mut state)?,
                    Action::Invert => self.invert_register(&mut state)?,
                }
            }
            out.push((
                state.read_poly(self.layout.reg("X")),
                state.read_poly(self.layout.reg("Y")),
            ));
        }
        Ok(out)
    }

    fn load(&self, x: &BinaryPolynomial, y: &BinaryPolynomial) -> Result<BasisState> {
        let mut state = BasisState::for_layout(&self.layout);
        state.write_poly(self.layout.reg("X"), x)?;
        state.write_poly(self.layout.reg("Y"), y)?;
        Ok(state)
    }

    /// Classical pre-check: `S` affine, `x ≠ α`, and `x(S + A) ≠ α`.
    pub fn check_generic(&self, s: &CurvePoint) -> Result<()> {
        let curve = &self.params.curve;
        if !curve.is_on_curve(s) {
            return Err(Error::PointNotOnCurve);
        }
        let a = self.params.point();
        if !curve.is_generic_pair(s, &a) {
            return Err(Error::NonGenericInput(format!(
                "{s} and {a} share an x-coordinate or one is O"
            )));
        }
        let sum = curve.add(s, &a)?;
        if !curve.is_generic_pair(&sum, &a) {
            return Err(Error::NonGenericInput(format!(
                "{s} + {a} = {sum} shares the x-coordinate of {a}"
            )));
        }
        Ok(())
    }

    /// `S + A`, with the scratch register checked to return to zero.
    pub fn add(&self, s: &CurvePoint) -> Result<CurvePoint> {
        self.check_generic(s)?;
        let (x, y) = s.coords().expect("generic points are affine");
        let mut state = self.load(x, y)?;
        self.run_registers(&mut state, false)?;
        if state.read_poly(self.layout.reg("T")) != BinaryPolynomial::zero() {
            return Err(Error::BadParameter("scratch register not restored".into()));
        }
        Ok(CurvePoint::affine(
            state.read_poly(self.layout.reg("X")),
            state.read_poly(self.layout.reg("Y")),
        ))
    }

    pub fn resources(&self) -> Result<GroupResources> {
        let m = self.field().m();
        let inverter_width = self.backend.inverter_width(m)?;
        let mut gates = Circuit::new(self.layout.clone()).report();
        let mut inversions = 0;
        for (_, a) in &self.actions {
            match a {
                Action::Gates(c) => gates = gates.combine(&c.report()),
                Action::Invert => inversions += 1,
            }
        }
        Ok(GroupResources {
            backend: self.backend,
            width: inverter_width + 2 * m,
            inverter_width,
            inversions,
            gates,
        })
    }
}

pub fn simulate_group_add(
    s: &CurvePoint,
    params: &FixedPointParams,
    backend: Backend,
) -> Result<CurvePoint> {
    GroupAdder::new(params.clone(), backend)?.add(s)
}
