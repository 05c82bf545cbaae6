// SPDX-License-Identifier: Apache-2.0

//! Polynomials over GF(2), stored as little-endian bit vectors.
//!
//! Bit `i` holds the coefficient of `z^i`. Values are kept canonical: the
//! limb vector never ends in a zero limb, so the zero polynomial is the
//! empty vector. Text form is MSB-first, so `"10101"` is `z^4 + z^2 + 1`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const LIMB_BITS: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct BinaryPolynomial {
    limbs: Vec<u64>,
}

impl BinaryPolynomial {
    pub fn zero() -> Self {
        Self { limbs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_u64(1)
    }

    /// `z^k`.
    pub fn monomial(k: usize) -> Self {
        let mut p = Self::zero();
        p.set_bit(k, true);
        p
    }

    pub fn from_u64(v: u64) -> Self {
        let mut p = Self { limbs: vec![v] };
        p.normalize();
        p
    }

    /// Low 64 coefficients, or `None` if the degree is 64 or more.
    pub fn to_u64(&self) -> Option<u64> {
        match self.limbs.len() {
            0 => Some(0),
            1 => Some(self.limbs[0]),
            _ => None,
        }
    }

    /// Builds a polynomial from coefficients listed lowest degree first.
    pub fn from_coeffs<I: IntoIterator<Item = bool>>(coeffs: I) -> Self {
        let mut p = Self::zero();
        for (i, c) in coeffs.into_iter().enumerate() {
            if c {
                p.set_bit(i, true);
            }
        }
        p
    }

    fn normalize(&mut self) {
        while self.limbs.last() == Some(&0) {
            self.limbs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.limbs.len() == 1 && self.limbs[0] == 1
    }

    pub fn bit(&self, i: usize) -> bool {
        self.limbs
            .get(i / LIMB_BITS)
            .is_some_and(|l| (l >> (i % LIMB_BITS)) & 1 == 1)
    }

    pub fn set_bit(&mut self, i: usize, value: bool) {
        let limb = i / LIMB_BITS;
        if value {
            if self.limbs.len() <= limb {
                self.limbs.resize(limb + 1, 0);
            }
            self.limbs[limb] |= 1 << (i % LIMB_BITS);
        } else if limb < self.limbs.len() {
            self.limbs[limb] &= !(1 << (i % LIMB_BITS));
            self.normalize();
        }
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn checked_degree(&self) -> Option<usize> {
        let top = *self.limbs.last()?;
        Some((self.limbs.len() - 1) * LIMB_BITS + (LIMB_BITS - 1 - top.leading_zeros() as usize))
    }

    /// Index of the highest set coefficient.
    pub fn degree(&self) -> Result<usize> {
        self.checked_degree().ok_or(Error::ZeroPolynomial)
    }

    /// Number of significant bits: `degree + 1`, or 0 for zero.
    pub fn bit_len(&self) -> usize {
        self.checked_degree().map_or(0, |d| d + 1)
    }

    pub fn shl(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let words = k / LIMB_BITS;
        let bits = k % LIMB_BITS;
        let mut limbs = vec![0u64; words];
        let mut carry = 0u64;
        for &l in &self.limbs {
            limbs.push((l << bits) | carry);
            carry = if bits == 0 {
                0
            } else {
                l >> (LIMB_BITS - bits)
            };
        }
        limbs.push(carry);
        let mut p = Self { limbs };
        p.normalize();
        p
    }

    /// Carry-less product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut acc = Self::zero();
        for i in 0..other.bit_len() {
            if other.bit(i) {
                acc += &self.shl(i);
            }
        }
        acc
    }

    /// Long division: returns `(q, r)` with `self = q * divisor + r` and
    /// `deg r < deg divisor`.
    pub fn divmod(&self, divisor: &Self) -> Result<(Self, Self)> {
        let dd = divisor.degree().map_err(|_| Error::DivisionByZero)?;
        let mut q = Self::zero();
        let mut r = self.clone();
        while let Some(dr) = r.checked_degree() {
            if dr < dd {
                break;
            }
            let s = dr - dd;
            q.set_bit(s, true);
            r += &divisor.shl(s);
        }
        Ok((q, r))
    }

    pub fn div_floor(&self, divisor: &Self) -> Result<Self> {
        Ok(self.divmod(divisor)?.0)
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.divmod(divisor)?.1)
    }

    /// Coefficients lowest degree first, padded or truncated to `len`.
    pub fn bits(&self, len: usize) -> Vec<bool> {
        (0..len).map(|i| self.bit(i)).collect()
    }
}

impl AddAssign<&BinaryPolynomial> for BinaryPolynomial {
    fn add_assign(&mut self, rhs: &BinaryPolynomial) {
        if self.limbs.len() < rhs.limbs.len() {
            self.limbs.resize(rhs.limbs.len(), 0);
        }
        for (a, b) in self.limbs.iter_mut().zip(&rhs.limbs) {
            *a ^= b;
        }
        self.normalize();
    }
}

impl Add for &BinaryPolynomial {
    type Output = BinaryPolynomial;

    fn add(self, rhs: &BinaryPolynomial) -> BinaryPolynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for BinaryPolynomial {
    type Output = BinaryPolynomial;

    fn add(mut self, rhs: BinaryPolynomial) -> BinaryPolynomial {
        self += &rhs;
        self
    }
}

impl Mul for &BinaryPolynomial {
    type Output = BinaryPolynomial;

    fn mul(self, rhs: &BinaryPolynomial) -> BinaryPolynomial {
        BinaryPolynomial::mul(self, rhs)
    }
}

impl Mul for BinaryPolynomial {
    type Output = BinaryPolynomial;

    fn mul(self, rhs: BinaryPolynomial) -> BinaryPolynomial {
        BinaryPolynomial::mul(&self, &rhs)
    }
}

/// Coefficient-wise XOR.
pub fn poly_add(a: &BinaryPolynomial, b: &BinaryPolynomial) -> BinaryPolynomial {
    a + b
}

pub fn poly_mul(a: &BinaryPolynomial, b: &BinaryPolynomial) -> BinaryPolynomial {
    a * b
}

pub fn poly_divmod(
    b: &BinaryPolynomial,
    a: &BinaryPolynomial,
) -> Result<(BinaryPolynomial, BinaryPolynomial)> {
    b.divmod(a)
}

impl fmt::Display for BinaryPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.checked_degree() {
            None => f.write_str("0"),
            Some(d) => {
                let s: String = (0..=d)
                    .rev()
                    .map(|i| if self.bit(i) { '1' } else { '0' })
                    .collect();
                f.write_str(&s)
            }
        }
    }
}

impl fmt::Debug for BinaryPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryPolynomial({self})")
    }
}

impl FromStr for BinaryPolynomial {
    type Err = Error;

    /// Parses an MSB-first bit string. Underscores are ignored.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty bit string".into()));
        }
        let mut p = Self::zero();
        let digits: Vec<char> = s.chars().filter(|&c| c != '_').collect();
        for (i, c) in digits.iter().rev().enumerate() {
            match c {
                '0' => {}
                '1' => p.set_bit(i, true),
                other => return Err(Error::Parse(format!("invalid bit {other:?} in {s:?}"))),
            }
        }
        Ok(p)
    }
}

impl Serialize for BinaryPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BinaryPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One row of the extended Euclid trace: `r = k * r0 + k' * r1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EuclidRow {
    pub r: BinaryPolynomial,
    pub k: BinaryPolynomial,
    pub k_prime: BinaryPolynomial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EuclidResult {
    pub gcd: BinaryPolynomial,
    pub k: BinaryPolynomial,
    pub k_prime: BinaryPolynomial,
    /// Remainder sequence `r_0 = A, r_1 = B, ...` with Bézout coefficients,
    /// ending at the last nonzero remainder.
    pub trace: Vec<EuclidRow>,
}

/// Extended Euclid: returns `g = gcd(A, B)` with `g = k*A + k'*B`.
///
/// The loop stops when the next remainder is zero; `k, k'` are the
/// coefficients of the last nonzero remainder.
pub fn extended_euclid(a: &BinaryPolynomial, b: &BinaryPolynomial) -> Result<EuclidResult> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::BothZero);
    }
    let mut trace = vec![
        EuclidRow {
            r: a.clone(),
            k: BinaryPolynomial::one(),
            k_prime: BinaryPolynomial::zero(),
        },
        EuclidRow {
            r: b.clone(),
            k: BinaryPolynomial::zero(),
            k_prime: BinaryPolynomial::one(),
        },
    ];
    if b.is_zero() {
        trace.pop();
        let row = trace[0].clone();
        return Ok(EuclidResult {
            gcd: row.r,
            k: row.k,
            k_prime: row.k_prime,
            trace,
        });
    }
    loop {
        let n = trace.len();
        let (prev, cur) = (&trace[n - 2], &trace[n - 1]);
        let (q, r) = prev.r.divmod(&cur.r)?;
        if r.is_zero() {
            break;
        }
        let k = &prev.k + &(&q * &cur.k);
        let k_prime = &prev.k_prime + &(&q * &cur.k_prime);
        trace.push(EuclidRow { r, k, k_prime });
    }
    let last = trace.last().expect("trace is nonempty").clone();
    Ok(EuclidResult {
        gcd: last.r,
        k: last.k,
        k_prime: last.k_prime,
        trace,
    })
}
