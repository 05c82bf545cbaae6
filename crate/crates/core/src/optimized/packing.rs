// SPDX-License-Identifier: Apache-2.0

//! Two polynomials in one register, packed in opposite directions.
//!
//! For a remainder `R` of degree `p` and a coefficient `k` of size `s`
//! (`deg k + 1`, or 0 when `k = 0`):
//!
//! ```text
//! slot:   0        s-1   s ... m-p-1   m-p        m-1
//!         k_{s-1} ... k_0   0 ... 0    R_0 ...  R_{p-1}   (R_p = 1 implicit)
//! ```

use crate::error::{Error, Result};
use crate::poly::BinaryPolynomial;

fn size(k: &BinaryPolynomial) -> usize {
    k.checked_degree().map_or(0, |d| d + 1)
}

/// Packs `(coeff, rem)` into an `m`-bit word. Needs `rem != 0` and
/// `size(coeff) + deg(rem) ≤ m`.
pub fn pack(coeff: &BinaryPolynomial, rem: &BinaryPolynomial, m: usize) -> Result<u64> {
    let p = rem.checked_degree().ok_or(Error::ZeroPolynomial)?;
    let s = size(coeff);
    if s + p > m {
        return Err(Error::Overflow {
            coeff: s.saturating_sub(1),
            rem: p,
            m,
        });
    }
    let mut word = 0u64;
    for t in 0..p {
        if rem.bit(t) {
            word |= 1 << (m - p + t);
        }
    }
    for t in 0..s {
        if coeff.bit(s - 1 - t) {
            word |= 1 << t;
        }
    }
    Ok(word)
}

/// Left inverse of [`pack`] given the coefficient size and remainder degree.
pub fn unpack(word: u64, s: usize, p: usize, m: usize) -> (BinaryPolynomial, BinaryPolynomial) {
    let coeff = BinaryPolynomial::from_coeffs((0..s).map(|d| (word >> (s - 1 - d)) & 1 == 1));
    let mut rem = BinaryPolynomial::monomial(p);
    for t in 0..p.min(m) {
        if (word >> (m - p + t)) & 1 == 1 {
            rem.set_bit(t, true);
        }
    }
    (coeff, rem)
}

/// True when the slots between the two parts are all zero.
pub(crate) fn gap_is_zero(word: u64, s: usize, p: usize, m: usize) -> bool {
    (s..m.saturating_sub(p)).all(|i| (word >> i) & 1 == 0)
}
