// SPDX-License-Identifier: Apache-2.0

//! Arithmetic in GF(2^m) = GF(2)[z] / (f).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{extended_euclid, BinaryPolynomial};

/// Field degree and irreducible modulus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldSpec {
    m: usize,
    modulus: BinaryPolynomial,
}

/// Exhaustive trial division by every polynomial of degree `1..=deg/2`.
pub fn is_irreducible(p: &BinaryPolynomial) -> bool {
    let Some(d) = p.checked_degree() else {
        return false;
    };
    if d == 0 {
        return false;
    }
    let half = d / 2;
    for divisor in 2u64..(1u64 << (half + 1)) {
        let divisor = BinaryPolynomial::from_u64(divisor);
        if p.rem(&divisor).expect("nonzero divisor").is_zero() {
            return false;
        }
    }
    true
}

impl FieldSpec {
    pub fn new(m: usize, modulus: BinaryPolynomial) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidField("m must be positive".into()));
        }
        if modulus.checked_degree() != Some(m) {
            return Err(Error::InvalidField(format!(
                "modulus {modulus} does not have degree {m}"
            )));
        }
        if m > 48 {
            return Err(Error::InvalidField(format!(
                "m = {m} is beyond the trial-division limit"
            )));
        }
        if !is_irreducible(&modulus) {
            return Err(Error::InvalidField(format!(
                "modulus {modulus} is reducible"
            )));
        }
        Ok(Self { m, modulus })
    }

    /// The numerically smallest irreducible polynomial of degree `m`.
    pub fn standard(m: usize) -> Result<Self> {
        if !(1..=32).contains(&m) {
            return Err(Error::InvalidField(format!(
                "no standard modulus for m = {m}"
            )));
        }
        let lo = 1u64 << m;
        (lo..lo << 1)
            .map(BinaryPolynomial::from_u64)
            .find(is_irreducible)
            .map(|modulus| Self { m, modulus })
            .ok_or_else(|| Error::InvalidField(format!("no irreducible polynomial of degree {m}")))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn modulus(&self) -> &BinaryPolynomial {
        &self.modulus
    }

    /// Number of field elements, `2^m`.
    pub fn order(&self) -> u64 {
        1u64 << self.m
    }

    pub fn contains(&self, x: &BinaryPolynomial) -> bool {
        x.bit_len() <= self.m
    }

    /// Checks that `x` is a reduced field element.
    pub fn element(&self, x: BinaryPolynomial) -> Result<BinaryPolynomial> {
        if self.contains(&x) {
            Ok(x)
        } else {
            Err(Error::InvalidField(format!(
                "{x} has degree >= m = {}",
                self.m
            )))
        }
    }

    pub fn from_u64(&self, v: u64) -> BinaryPolynomial {
        self.reduce(&BinaryPolynomial::from_u64(v))
    }

    pub fn reduce(&self, x: &BinaryPolynomial) -> BinaryPolynomial {
        x.rem(&self.modulus).expect("modulus is nonzero")
    }

    pub fn add(&self, x: &BinaryPolynomial, y: &BinaryPolynomial) -> BinaryPolynomial {
        x + y
    }

    pub fn mul(&self, x: &BinaryPolynomial, y: &BinaryPolynomial) -> BinaryPolynomial {
        self.reduce(&(x * y))
    }

    pub fn square(&self, x: &BinaryPolynomial) -> BinaryPolynomial {
        self.mul(x, x)
    }

    /// `C^{-1} mod f`, read off the Bézout coefficient of `C` in `gcd(C, f) = 1`.
    pub fn invert(&self, c: &BinaryPolynomial) -> Result<BinaryPolynomial> {
        let c = self.reduce(c);
        if c.is_zero() {
            return Err(Error::ZeroElement);
        }
        let res = extended_euclid(&c, &self.modulus)?;
        debug_assert!(res.gcd.is_one());
        Ok(self.reduce(&res.k))
    }

    pub fn div(&self, x: &BinaryPolynomial, y: &BinaryPolynomial) -> Result<BinaryPolynomial> {
        if self.reduce(y).is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.mul(x, &self.invert(y)?))
    }

    /// All field elements in numeric order, zero first.
    pub fn elements(&self) -> impl Iterator<Item = BinaryPolynomial> {
        (0..self.order()).map(BinaryPolynomial::from_u64)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = BinaryPolynomial> {
        (1..self.order()).map(BinaryPolynomial::from_u64)
    }
}

pub fn field_invert(c: &BinaryPolynomial, field: &FieldSpec) -> Result<BinaryPolynomial> {
    field.invert(c)
}

pub fn field_mul(
    x: &BinaryPolynomial,
    y: &BinaryPolynomial,
    field: &FieldSpec,
) -> BinaryPolynomial {
    field.mul(x, y)
}

pub fn field_div(
    x: &BinaryPolynomial,
    y: &BinaryPolynomial,
    field: &FieldSpec,
) -> Result<BinaryPolynomial> {
    field.div(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> BinaryPolynomial {
        s.parse().unwrap()
    }

    fn gf16() -> FieldSpec {
        FieldSpec::new(4, p("10011")).unwrap()
    }

    #[test]
    fn rejects_bad_moduli() {
        assert!(FieldSpec::new(4, p("10101")).is_err());
        assert!(FieldSpec::new(5, p("10011")).is_err());
        assert!(FieldSpec::new(4, p("10001")).is_err());
    }

    #[test]
    fn standard_moduli() {
        assert_eq!(FieldSpec::standard(2).unwrap().modulus(), &p("111"));
        assert_eq!(FieldSpec::standard(3).unwrap().modulus(), &p("1011"));
        assert_eq!(FieldSpec::standard(4).unwrap().modulus(), &p("10011"));
        assert_eq!(FieldSpec::standard(8).unwrap().modulus(), &p("100011011"));
    }

    #[test]
    fn invert_examples() {
        let f = gf16();
        assert_eq!(f.invert(&p("1")).unwrap(), p("1"));
        assert_eq!(f.invert(&p("10")).unwrap(), p("1001"));
        assert_eq!(f.invert(&p("0")), Err(Error::ZeroElement));
        assert_eq!(f.mul(&p("1001"), &p("10")), p("1"));
    }

    #[test]
    fn inverse_is_unique_by_search() {
        let f = gf16();
        let hits: Vec<_> = f
            .nonzero_elements()
            .filter(|k| f.mul(&p("10"), k).is_one())
            .collect();
        assert_eq!(hits, vec![p("1001")]);
    }

    #[test]
    fn inversion_exhaustive_small_fields() {
        for m in 2..=8 {
            let f = FieldSpec::standard(m).unwrap();
            for c in f.nonzero_elements() {
                let inv = f.invert(&c).unwrap();
                assert!(f.mul(&c, &inv).is_one(), "m={m} c={c}");
                assert!(inv.bit_len() <= m);
                assert_eq!(f.invert(&inv).unwrap(), c);
            }
        }
    }

    #[test]
    fn mul_div_identities() {
        let f = gf16();
        for x in f.nonzero_elements() {
            assert_eq!(f.mul(&x, &BinaryPolynomial::one()), x);
            assert!(f.div(&x, &x).unwrap().is_one());
        }
        assert_eq!(f.div(&p("1"), &p("0")), Err(Error::DivisionByZero));
    }
}
