// SPDX-License-Identifier: Apache-2.0

//! Key-value config files for fields and curves.
//!
//! One `key = value` pair per line, `#` starts a comment. Keys: `m`,
//! `modulus`, and for curves `kind`, `a`, `b`, `c`. Polynomial values are
//! MSB-first bit strings.
//!
//! ```text
//! m = 4
//! modulus = 10011
//! kind = nonsupersingular
//! a = 1000
//! b = 1001
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use crate::curve::{CurveKind, CurveSpec};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::poly::BinaryPolynomial;

fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .or_else(|| line.split_once(':'))
            .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", n + 1)))?;
        let v = v.trim().trim_matches('"');
        out.insert(k.trim().to_ascii_lowercase(), v.to_string());
    }
    Ok(out)
}

fn poly(map: &BTreeMap<String, String>, key: &str) -> Result<BinaryPolynomial> {
    map.get(key)
        .ok_or_else(|| Error::Parse(format!("missing key {key:?}")))?
        .parse()
}

fn field_from(map: &BTreeMap<String, String>) -> Result<FieldSpec> {
    let m: usize = match map.get("m") {
        Some(v) => v
            .parse()
            .map_err(|_| Error::Parse(format!("m = {v:?} is not an integer")))?,
        None => return Err(Error::Parse("missing key \"m\"".into())),
    };
    match map.get("modulus") {
        Some(_) => FieldSpec::new(m, poly(map, "modulus")?),
        None => FieldSpec::standard(m),
    }
}

/// Parses a field description. A missing `modulus` selects the standard one.
pub fn parse_field(text: &str) -> Result<FieldSpec> {
    field_from(&parse_pairs(text)?)
}

pub fn parse_curve(text: &str) -> Result<CurveSpec> {
    let map = parse_pairs(text)?;
    let field = field_from(&map)?;
    let kind: CurveKind = map
        .get("kind")
        .ok_or_else(|| Error::Parse("missing key \"kind\"".into()))?
        .parse()?;
    let a = poly(&map, "a")?;
    let b = poly(&map, "b")?;
    match kind {
        CurveKind::NonSupersingular => CurveSpec::non_supersingular(field, a, b),
        CurveKind::Supersingular => CurveSpec::supersingular(field, a, b, poly(&map, "c")?),
    }
}

pub fn load_field(path: impl AsRef<Path>) -> Result<FieldSpec> {
    parse_field(&read(path.as_ref())?)
}

pub fn load_curve(path: impl AsRef<Path>) -> Result<CurveSpec> {
    parse_curve(&read(path.as_ref())?)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Renders a curve back into the config format.
pub fn render_curve(curve: &CurveSpec) -> String {
    let kind = match curve.kind {
        CurveKind::NonSupersingular => "nonsupersingular",
        CurveKind::Supersingular => "supersingular",
    };
    let mut s = format!(
        "m = {}\nmodulus = {}\nkind = {kind}\na = {}\nb = {}\n",
        curve.field.m(),
        curve.field.modulus(),
        curve.a,
        curve.b
    );
    if let Some(c) = &curve.c {
        s.push_str(&format!("c = {c}\n"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_curve_file() {
        let text = "# test curve\nm = 4\nmodulus = 10011\nkind = supersingular\na = 0\nb = 1\nc = 1 # trailing\n";
        let curve = parse_curve(text).unwrap();
        assert_eq!(curve.kind, CurveKind::Supersingular);
        assert_eq!(curve.c.as_ref().unwrap().to_string(), "1");
        assert_eq!(parse_curve(&render_curve(&curve)).unwrap(), curve);
    }

    #[test]
    fn field_defaults_to_standard_modulus() {
        assert_eq!(
            parse_field("m = 8").unwrap(),
            FieldSpec::standard(8).unwrap()
        );
    }

    #[test]
    fn reports_errors() {
        assert!(parse_field("modulus = 10011").is_err());
        assert!(parse_field("m = 4\nmodulus = 10101").is_err());
        assert!(parse_curve("m = 4\nkind = supersingular\na = 0\nb = 1").is_err());
        assert!(parse_curve("m = 4\nkind = nonsupersingular\na = 0\nb = 0").is_err());
        assert!(parse_field("m 4").is_err());
    }
}
