//! Shared helpers for the line-oriented file formats.

use crate::error::{Error, Result};
use crate::field::FieldSpec;

/// Non-empty lines with `#` comments stripped, paired with 1-based numbers.
pub(crate) fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect()
}

/// Parses a `field Q` / `field Fp <p>` directive.
pub(crate) fn parse_field_line(lineno: usize, line: &str) -> Result<FieldSpec> {
    let rest = line
        .strip_prefix("field")
        .map(str::trim)
        .ok_or_else(|| Error::parse(lineno, format!("expected `field`, found `{line}`")))?;
    let mut toks = rest.split_whitespace();
    let spec = match (toks.next(), toks.next(), toks.next()) {
        (Some("Q"), None, None) => FieldSpec::Rationals,
        (Some("Fp"), Some(p), None) => {
            let p: u64 = p
                .parse()
                .map_err(|_| Error::parse(lineno, format!("bad modulus `{p}`")))?;
            FieldSpec::PrimeField(p)
        }
        _ => return Err(Error::parse(lineno, format!("bad field directive `{line}`"))),
    };
    spec.validate().map_err(|e| Error::parse(lineno, e.to_string()))
}
