// SPDX-License-Identifier: Apache-2.0

//! Elliptic curves over GF(2^m) and the classical point-addition oracle.
//!
//! Two families are supported:
//! - non-supersingular: `y^2 + xy = x^3 + a x^2 + b`, `b != 0`
//! - supersingular: `y^2 + cy = x^3 + a x + b`, `c != 0`

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::poly::BinaryPolynomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    NonSupersingular,
    Supersingular,
}

impl std::str::FromStr for CurveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s
            .trim()
            .to_ascii_lowercase()
            .replace(['-', '_'], "")
            .as_str()
        {
            "nonsupersingular" | "case1" => Ok(Self::NonSupersingular),
            "supersingular" | "case2" => Ok(Self::Supersingular),
            other => Err(Error::Parse(format!("unknown curve kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveSpec {
    pub field: FieldSpec,
    pub kind: CurveKind,
    pub a: BinaryPolynomial,
    pub b: BinaryPolynomial,
    pub c: Option<BinaryPolynomial>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CurvePoint {
    Infinity,
    Affine {
        x: BinaryPolynomial,
        y: BinaryPolynomial,
    },
}

impl CurvePoint {
    pub fn affine(x: BinaryPolynomial, y: BinaryPolynomial) -> Self {
        Self::Affine { x, y }
    }

    pub fn coords(&self) -> Option<(&BinaryPolynomial, &BinaryPolynomial)> {
        match self {
            Self::Infinity => None,
            Self::Affine { x, y } => Some((x, y)),
        }
    }
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Infinity => f.write_str("O"),
            Self::Affine { x, y } => write!(f, "({x},{y})"),
        }
    }
}

impl CurveSpec {
    pub fn non_supersingular(
        field: FieldSpec,
        a: BinaryPolynomial,
        b: BinaryPolynomial,
    ) -> Result<Self> {
        let spec = Self {
            field,
            kind: CurveKind::NonSupersingular,
            a,
            b,
            c: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn supersingular(
        field: FieldSpec,
        a: BinaryPolynomial,
        b: BinaryPolynomial,
        c: BinaryPolynomial,
    ) -> Result<Self> {
        let spec = Self {
            field,
            kind: CurveKind::Supersingular,
            a,
            b,
            c: Some(c),
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("a", Some(&self.a)),
            ("b", Some(&self.b)),
            ("c", self.c.as_ref()),
        ] {
            if let Some(v) = v {
                if !self.field.contains(v) {
                    return Err(Error::InvalidCurve(format!(
                        "{name} = {v} is not a field element"
                    )));
                }
            }
        }
        match self.kind {
            CurveKind::NonSupersingular => {
                if self.b.is_zero() {
                    return Err(Error::InvalidCurve(
                        "non-supersingular curve needs b != 0".into(),
                    ));
                }
                if self.c.is_some() {
                    return Err(Error::InvalidCurve(
                        "c is only defined for supersingular curves".into(),
                    ));
                }
            }
            CurveKind::Supersingular => match &self.c {
                Some(c) if !c.is_zero() => {}
                _ => {
                    return Err(Error::InvalidCurve(
                        "supersingular curve needs c != 0".into(),
                    ))
                }
            },
        }
        Ok(())
    }

    /// `c` for supersingular curves, zero otherwise.
    pub fn c_or_zero(&self) -> BinaryPolynomial {
        self.c.clone().unwrap_or_default()
    }

    pub fn is_on_curve(&self, p: &CurvePoint) -> bool {
        let Some((x, y)) = p.coords() else {
            return true;
        };
        let f = &self.field;
        if !f.contains(x) || !f.contains(y) {
            return false;
        }
        let x2 = f.square(x);
        let x3 = f.mul(&x2, x);
        match self.kind {
            CurveKind::NonSupersingular => {
                let lhs = &f.square(y) + &f.mul(x, y);
                let rhs = &(&x3 + &f.mul(&self.a, &x2)) + &self.b;
                lhs == rhs
            }
            CurveKind::Supersingular => {
                let lhs = &f.square(y) + &f.mul(&self.c_or_zero(), y);
                let rhs = &(&x3 + &f.mul(&self.a, x)) + &self.b;
                lhs == rhs
            }
        }
    }

    pub fn negate(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => {
                let y = match self.kind {
                    CurveKind::NonSupersingular => x + y,
                    CurveKind::Supersingular => y + &self.c_or_zero(),
                };
                CurvePoint::Affine { x: x.clone(), y }
            }
        }
    }

    /// Every affine point, by exhaustive search over `GF(2^m)^2`.
    pub fn points(&self) -> Vec<CurvePoint> {
        let mut out = Vec::new();
        for x in self.field.elements() {
            for y in self.field.elements() {
                let pt = CurvePoint::affine(x.clone(), y);
                if self.is_on_curve(&pt) {
                    out.push(pt);
                }
            }
        }
        out
    }

    /// True when `P + R` is given by the generic chord formulas: both affine,
    /// distinct, and not negatives of each other.
    pub fn is_generic_pair(&self, p: &CurvePoint, r: &CurvePoint) -> bool {
        match (p.coords(), r.coords()) {
            (Some((x1, _)), Some((x2, _))) => x1 != x2,
            _ => false,
        }
    }

    /// Group addition of distinct points (doubling is out of scope).
    pub fn add(&self, p: &CurvePoint, r: &CurvePoint) -> Result<CurvePoint> {
        if !self.is_on_curve(p) || !self.is_on_curve(r) {
            return Err(Error::PointNotOnCurve);
        }
        let (x1, y1, x2, y2) = match (p, r) {
            (CurvePoint::Infinity, _) => return Ok(r.clone()),
            (_, CurvePoint::Infinity) => return Ok(p.clone()),
            (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => {
                (x1, y1, x2, y2)
            }
        };
        if p == r {
            return Err(Error::Doubling);
        }
        if *r == self.negate(p) {
            return Ok(CurvePoint::Infinity);
        }
        let f = &self.field;
        let lambda = f.div(&(y1 + y2), &(x1 + x2))?;
        let l2 = f.square(&lambda);
        let (x3, y3) = match self.kind {
            CurveKind::NonSupersingular => {
                let x3 = &(&(&(&l2 + &lambda) + x1) + x2) + &self.a;
                let y3 = &(&f.mul(&lambda, &(x1 + &x3)) + &x3) + y1;
                (x3, y3)
            }
            CurveKind::Supersingular => {
                let x3 = &(&l2 + x1) + x2;
                let y3 = &(&f.mul(&lambda, &(x1 + &x3)) + y1) + &self.c_or_zero();
                (x3, y3)
            }
        };
        Ok(CurvePoint::affine(x3, y3))
    }
}

pub fn ec_add(p: &CurvePoint, r: &CurvePoint, curve: &CurveSpec) -> Result<CurvePoint> {
    curve.add(p, r)
}

/// Every valid curve of both families over `field`.
pub fn all_curves(field: &FieldSpec) -> Vec<CurveSpec> {
    let mut out = Vec::new();
    for a in field.elements() {
        for b in field.elements() {
            if let Ok(c) = CurveSpec::non_supersingular(field.clone(), a.clone(), b.clone()) {
                out.push(c);
            }
            for c in field.nonzero_elements() {
                out.push(
                    CurveSpec::supersingular(field.clone(), a.clone(), b.clone(), c)
                        .expect("c != 0"),
                );
            }
        }
    }
    out
}
