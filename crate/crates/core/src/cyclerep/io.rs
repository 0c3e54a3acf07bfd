use std::collections::BTreeMap;

use crate::card::Card;
use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec, PrimeField, Rationals};
use crate::matrix::Matrix;
use crate::text::{content_lines, parse_field_line};

use super::CycleRep;

/// A cycle over whichever field its file names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyCycleRep {
    Rational(CycleRep<Rationals>),
    Prime(CycleRep<PrimeField>),
}

impl AnyCycleRep {
    pub fn parse(text: &str) -> Result<Self> {
        let lines = content_lines(text);
        let spec = match lines.get(1) {
            Some((l, line)) => parse_field_line(*l, line)?,
            None => return Err(Error::parse(lines.first().map_or(1, |l| l.0), "missing field directive")),
        };
        match spec {
            FieldSpec::Rationals => CycleRep::parse_with(&Rationals, text).map(AnyCycleRep::Rational),
            FieldSpec::PrimeField(p) => {
                CycleRep::parse_with(&PrimeField::new(p)?, text).map(AnyCycleRep::Prime)
            }
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            AnyCycleRep::Rational(u) => u.to_text(),
            AnyCycleRep::Prime(u) => u.to_text(),
        }
    }

    pub fn field_spec(&self) -> FieldSpec {
        match self {
            AnyCycleRep::Rational(_) => FieldSpec::Rationals,
            AnyCycleRep::Prime(u) => u.field().spec(),
        }
    }
}

impl<F: Field> CycleRep<F> {
    pub fn to_text(&self) -> String {
        let mut s = String::from("cyclerep v1\n");
        s.push_str(&format!("field {}\n", self.field.spec()));
        s.push_str(&format!("n {}\n", self.n()));
        let dims: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        s.push_str(&format!("dims {}\n", dims.join(" ")));
        for (k, m) in self.maps.iter().enumerate() {
            s.push_str(&format!("map {k}\n"));
            if m.cols() > 0 {
                s.push_str(&m.to_text());
            }
        }
        if !self.saturated.is_empty() {
            let parts: Vec<String> = self
                .saturated
                .iter()
                .map(|(b, c)| match c {
                    Card::Finite(c) => format!("{b}:{c}"),
                    Card::Aleph0 => format!("{b}:inf"),
                })
                .collect();
            s.push_str(&format!("saturated {}\n", parts.join(" ")));
        }
        s
    }

    /// Parses a `cyclerep v1` file whose field directive must match `field`.
    pub fn parse_with(field: &F, text: &str) -> Result<Self> {
        let lines = content_lines(text);
        let mut it = lines.iter().copied().peekable();
        let last_line = lines.last().map_or(1, |l| l.0);

        match it.next() {
            Some((_, "cyclerep v1")) => {}
            Some((l, other)) => {
                return Err(Error::parse(l, format!("expected `cyclerep v1`, found `{other}`")))
            }
            None => return Err(Error::parse(1, "empty file")),
        }
        let (l, line) = it.next().ok_or_else(|| Error::parse(last_line, "missing field"))?;
        let spec = parse_field_line(l, line)?;
        if spec != field.spec() {
            return Err(Error::parse(
                l,
                format!("file field {spec} does not match {}", field.spec()),
            ));
        }
        let (l, line) = it.next().ok_or_else(|| Error::parse(last_line, "missing n"))?;
        let n: usize = line
            .strip_prefix("n ")
            .and_then(|s| s.trim().parse().ok())
            .filter(|&n| n >= 1)
            .ok_or_else(|| Error::parse(l, format!("expected `n <int ≥ 1>`, found `{line}`")))?;
        let (l, line) = it.next().ok_or_else(|| Error::parse(last_line, "missing dims"))?;
        let dims: Vec<usize> = line
            .strip_prefix("dims")
            .ok_or_else(|| Error::parse(l, format!("expected `dims`, found `{line}`")))?
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::parse(l, format!("bad dimension `{t}`"))))
            .collect::<Result<_>>()?;
        if dims.len() != n {
            return Err(Error::parse(l, format!("expected {n} dimensions, found {}", dims.len())));
        }

        let mut maps: Vec<Option<Matrix<F>>> = vec![None; n];
        let mut saturated = BTreeMap::new();
        let mut seen_saturated = false;
        while let Some((l, line)) = it.next() {
            if let Some(rest) = line.strip_prefix("map") {
                let k: usize = rest
                    .trim()
                    .parse()
                    .ok()
                    .filter(|&k| k < n)
                    .ok_or_else(|| Error::parse(l, format!("expected `map <k>` with k < {n}")))?;
                if maps[k].is_some() {
                    return Err(Error::parse(l, format!("duplicate map {k}")));
                }
                let (rows, cols) = (dims[(k + 1) % n], dims[k]);
                let count = if cols == 0 { 0 } else { rows };
                let mut body = Vec::with_capacity(count);
                for _ in 0..count {
                    let row = it
                        .next()
                        .ok_or_else(|| Error::parse(l, format!("map {k} needs {rows} rows")))?;
                    body.push(row);
                }
                maps[k] = Some(if cols == 0 {
                    Matrix::zeros(field, rows, 0)
                } else {
                    Matrix::parse_rows(field, cols, body)?
                });
            } else if let Some(rest) = line.strip_prefix("saturated") {
                if seen_saturated {
                    return Err(Error::parse(l, "duplicate saturated directive"));
                }
                seen_saturated = true;
                for tok in rest.split_whitespace() {
                    let (b, c) = tok
                        .split_once(':')
                        .ok_or_else(|| Error::parse(l, format!("expected <k>:<mult>, found `{tok}`")))?;
                    let b: usize = b
                        .parse()
                        .ok()
                        .filter(|&b| b < n)
                        .ok_or_else(|| Error::parse(l, format!("bad base `{b}`")))?;
                    let c: Card = match c {
                        "inf" => Card::Aleph0,
                        _ => c.parse().map_err(|e: String| Error::parse(l, e))?,
                    };
                    if saturated.insert(b, c).is_some() {
                        return Err(Error::parse(l, format!("duplicate saturated base {b}")));
                    }
                }
            } else {
                return Err(Error::parse(l, format!("unexpected line `{line}`")));
            }
        }
        let maps = maps
            .into_iter()
            .enumerate()
            .map(|(k, m)| {
                m.or_else(|| {
                    let (rows, cols) = (dims[(k + 1) % n], dims[k]);
                    (rows * cols == 0).then(|| Matrix::zeros(field, rows, cols))
                })
                .ok_or_else(|| Error::parse(last_line, format!("missing map {k}")))
            })
            .collect::<Result<Vec<_>>>()?;
        CycleRep::new(field, dims, maps, saturated)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const REP_A: &str = "cyclerep v1\nfield Q\nn 2\ndims 1 1\nmap 0\n1\nmap 1\n0\n";

    #[test]
    fn round_trip() {
        let u = CycleRep::parse_with(&Rationals, REP_A).unwrap();
        assert_eq!(u.to_text(), REP_A);
        let any = AnyCycleRep::parse(REP_A).unwrap();
        assert_eq!(any.to_text(), REP_A);

        let text = "cyclerep v1\nfield Fp 5\nn 2\ndims 0 2\nmap 0\nmap 1\nsaturated 0:2 1:inf\n";
        let v = CycleRep::parse_with(&PrimeField::new(5).unwrap(), text).unwrap();
        assert_eq!(v.dims(), &[0, 2]);
        assert_eq!(v.saturated().get(&1), Some(&Card::Aleph0));
        assert_eq!(v.to_text(), text);
    }

    #[test]
    fn comments_and_errors() {
        let with_comments = "# header\ncyclerep v1 # tag\nfield Q\nn 2\ndims 1 1\nmap 0\n1/2\nmap 1\n0\n";
        let u = CycleRep::parse_with(&Rationals, with_comments).unwrap();
        assert_eq!(u.map(0).get(0, 0), &Rationals.parse_elem("1/2").unwrap());

        let bad_entry = "cyclerep v1\nfield Fp 3\nn 1\ndims 1\nmap 0\n4\n";
        match AnyCycleRep::parse(bad_entry) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 6),
            other => panic!("unexpected {other:?}"),
        }
        let bad_field = "cyclerep v1\nfield Fp 4\nn 1\ndims 0\nmap 0\n";
        assert!(matches!(AnyCycleRep::parse(bad_field), Err(Error::Parse { line: 2, .. })));
        let short = "cyclerep v1\nfield Q\nn 2\ndims 1 1\nmap 0\n";
        assert!(matches!(AnyCycleRep::parse(short), Err(Error::Parse { line: 5, .. })));
    }
}
