// SPDX-License-Identifier: Apache-2.0

pub mod blocks;
pub mod circuit;
pub mod config;
pub mod curve;
pub mod ecgroup;
pub mod error;
pub mod field;
pub mod naive;
pub mod optimized;
pub mod poly;

pub use error::{Error, Result};
pub use field::FieldSpec;
pub use poly::BinaryPolynomial;
