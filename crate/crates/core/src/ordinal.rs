//! Ordinals below ε₀ in Cantor normal form.
//!
//! An ordinal is a strictly decreasing list of terms `ω^e·c`. The derived
//! ordering on the term list (exponent first, then coefficient, shorter
//! prefix first) is exactly the ordinal ordering.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ordinal {
    terms: Vec<(Ordinal, u64)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrdinalKind {
    Zero,
    Successor(Ordinal),
    Limit,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn finite(n: u64) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            Ordinal {
                terms: vec![(Self::zero(), n)],
            }
        }
    }

    pub fn omega() -> Self {
        Self::omega_pow(Self::finite(1))
    }

    /// `ω^e`.
    pub fn omega_pow(e: Ordinal) -> Self {
        Self::term(e, 1)
    }

    /// `ω^e·c`; zero when `c = 0`.
    pub fn term(e: Ordinal, c: u64) -> Self {
        if c == 0 {
            Self::zero()
        } else {
            Ordinal { terms: vec![(e, c)] }
        }
    }

    /// Builds from terms; exponents must be strictly decreasing and
    /// coefficients positive.
    pub fn from_terms(terms: Vec<(Ordinal, u64)>) -> Result<Self> {
        let bad = |msg: &str| Error::Parse {
            line: 0,
            msg: msg.to_string(),
        };
        if terms.iter().any(|(_, c)| *c == 0) {
            return Err(bad("zero coefficient in Cantor normal form"));
        }
        if terms.windows(2).any(|w| w[0].0 <= w[1].0) {
            return Err(bad("exponents must be strictly decreasing"));
        }
        Ok(Ordinal { terms })
    }

    pub fn terms(&self) -> &[(Ordinal, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_finite(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(e, c)] if e.is_zero() => Some(*c),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.as_finite().is_some()
    }

    pub fn add(&self, other: &Ordinal) -> Ordinal {
        let Some((lead, lead_c)) = other.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<(Ordinal, u64)> =
            self.terms.iter().take_while(|(e, _)| e > lead).cloned().collect();
        let merged = self
            .terms
            .iter()
            .find(|(e, _)| e == lead)
            .map_or(0, |(_, c)| *c);
        terms.push((lead.clone(), merged + lead_c));
        terms.extend(other.terms[1..].iter().cloned());
        Ordinal { terms }
    }

    pub fn succ(&self) -> Ordinal {
        self.add(&Self::finite(1))
    }

    pub fn classify(&self) -> OrdinalKind {
        match self.terms.last() {
            None => OrdinalKind::Zero,
            Some((e, c)) if e.is_zero() => {
                let mut terms = self.terms.clone();
                if *c == 1 {
                    terms.pop();
                } else {
                    terms.last_mut().expect("nonempty").1 -= 1;
                }
                OrdinalKind::Successor(Ordinal { terms })
            }
            Some(_) => OrdinalKind::Limit,
        }
    }

    pub fn is_limit(&self) -> bool {
        self.classify() == OrdinalKind::Limit
    }

    /// Splits `a ≥ ω` as `δ + l` with `δ` a limit and `l` finite.
    pub fn limit_split(&self) -> Result<(Ordinal, u64)> {
        if self.is_finite() {
            return Err(Error::FiniteOrdinal(self.to_string()));
        }
        let mut terms = self.terms.clone();
        let l = match terms.last() {
            Some((e, c)) if e.is_zero() => {
                let c = *c;
                terms.pop();
                c
            }
            _ => 0,
        };
        Ok((Ordinal { terms }, l))
    }

    /// Finite tail `l` of `δ + l`; the whole value for finite ordinals.
    pub fn finite_tail(&self) -> u64 {
        match self.terms.last() {
            Some((e, c)) if e.is_zero() => *c,
            _ => 0,
        }
    }

    /// The canonical fundamental sequence `δ[m]` of a limit ordinal.
    pub fn fundamental_sequence(&self, m: u64) -> Result<Ordinal> {
        if !self.is_limit() {
            return Err(Error::NotLimit(self.to_string()));
        }
        let mut prefix = self.terms.clone();
        let (e, c) = prefix.pop().expect("limit is nonzero");
        if c > 1 {
            prefix.push((e.clone(), c - 1));
        }
        let gamma = Ordinal { terms: prefix };
        let tail = match e.classify() {
            OrdinalKind::Successor(pred) => Self::term(pred, m),
            OrdinalKind::Limit => Self::omega_pow(e.fundamental_sequence(m)?),
            OrdinalKind::Zero => unreachable!("limit has a positive last exponent"),
        };
        Ok(gamma.add(&tail))
    }

    fn fmt_exponent(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let simple = self.is_finite() || matches!(self.terms.as_slice(), [(_, 1)]);
        if simple {
            write!(f, "{self}")
        } else {
            write!(f, "({self})")
        }
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::finite(n)
    }
}

impl From<usize> for Ordinal {
    fn from(n: usize) -> Self {
        Ordinal::finite(n as u64)
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            if e.is_zero() {
                write!(f, "{c}")?;
                continue;
            }
            write!(f, "w")?;
            if e.as_finite() != Some(1) {
                write!(f, "^")?;
                e.fmt_exponent(f)?;
            }
            if *c != 1 {
                write!(f, "*{c}")?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, msg: &str) -> String {
        format!("{msg} at offset {}", self.pos)
    }

    fn number(&mut self) -> std::result::Result<u64, String> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .expect("ascii")
            .parse()
            .map_err(|_| self.err("number too large"))
    }

    fn ordinal(&mut self) -> std::result::Result<Ordinal, String> {
        let mut terms = vec![self.term()?];
        while self.eat(b'+') {
            terms.push(self.term()?);
        }
        let terms: Vec<_> = terms.into_iter().filter(|(_, c)| *c > 0).collect();
        if terms.windows(2).any(|w| w[0].0 <= w[1].0) {
            return Err("terms are not in Cantor normal form".into());
        }
        Ok(Ordinal { terms })
    }

    fn term(&mut self) -> std::result::Result<(Ordinal, u64), String> {
        if !self.eat(b'w') {
            return Ok((Ordinal::zero(), self.number()?));
        }
        let exponent = if self.eat(b'^') {
            self.exponent()?
        } else {
            Ordinal::finite(1)
        };
        let coeff = if self.eat(b'*') { self.number()? } else { 1 };
        if coeff == 0 {
            return Err(self.err("zero coefficient"));
        }
        Ok((exponent, coeff))
    }

    fn exponent(&mut self) -> std::result::Result<Ordinal, String> {
        if self.eat(b'(') {
            let e = self.ordinal()?;
            if !self.eat(b')') {
                return Err(self.err("expected `)`"));
            }
            Ok(e)
        } else if self.eat(b'w') {
            let inner = if self.eat(b'^') {
                self.exponent()?
            } else {
                Ordinal::finite(1)
            };
            Ok(Ordinal::omega_pow(inner))
        } else {
            Ok(Ordinal::finite(self.number()?))
        }
    }
}

impl FromStr for Ordinal {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = Parser {
            s: compact.as_bytes(),
            pos: 0,
        };
        let o = p.ordinal().map_err(|e| format!("bad ordinal `{s}`: {e}"))?;
        if p.pos != p.s.len() {
            return Err(format!("bad ordinal `{s}`: trailing input"));
        }
        Ok(o)
    }
}

/// An ordinal or the value ∞, which exceeds every ordinal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OrdinalOrInfinity {
    Ordinal(Ordinal),
    Infinity,
}

impl OrdinalOrInfinity {
    pub fn finite(n: usize) -> Self {
        OrdinalOrInfinity::Ordinal(Ordinal::from(n))
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, OrdinalOrInfinity::Infinity)
    }
}

impl From<Ordinal> for OrdinalOrInfinity {
    fn from(o: Ordinal) -> Self {
        OrdinalOrInfinity::Ordinal(o)
    }
}

impl fmt::Display for OrdinalOrInfinity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrdinalOrInfinity::Ordinal(o) => write!(f, "{o}"),
            OrdinalOrInfinity::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for OrdinalOrInfinity {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s.trim() == "inf" {
            Ok(OrdinalOrInfinity::Infinity)
        } else {
            s.parse().map(OrdinalOrInfinity::Ordinal)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn addition_examples() {
        assert_eq!(Ordinal::finite(1).add(&Ordinal::omega()), Ordinal::omega());
        assert_eq!(Ordinal::omega().add(&Ordinal::finite(1)), o("w+1"));
        assert!(Ordinal::omega() < o("w+1"));
        assert_eq!(o("w*2+3").add(&o("w^2")), o("w^2"));
        assert_eq!(o("w*2+3").add(&o("w+1")), o("w*3+1"));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(Ordinal::zero().classify(), OrdinalKind::Zero);
        assert_eq!(o("w+4").classify(), OrdinalKind::Successor(o("w+3")));
        assert_eq!(o("w^2").classify(), OrdinalKind::Limit);
        assert_eq!(o("1").classify(), OrdinalKind::Successor(Ordinal::zero()));
    }

    #[test]
    fn limit_split_examples() {
        assert_eq!(o("w").limit_split().unwrap(), (o("w"), 0));
        assert_eq!(o("w*2+5").limit_split().unwrap(), (o("w*2"), 5));
        assert_eq!(o("w^w+1").limit_split().unwrap(), (o("w^w"), 1));
        assert!(o("7").limit_split().is_err());
    }

    #[test]
    fn fundamental_sequence_examples() {
        let w = Ordinal::omega();
        for m in 0..5 {
            assert_eq!(w.fundamental_sequence(m).unwrap(), Ordinal::finite(m));
        }
        assert_eq!(o("w^2").fundamental_sequence(3).unwrap(), o("w*3"));
        assert_eq!(o("w^2+w").fundamental_sequence(2).unwrap(), o("w^2+2"));
        assert_eq!(o("w^w").fundamental_sequence(2).unwrap(), o("w^2"));
        assert_eq!(o("w*3").fundamental_sequence(4).unwrap(), o("w*2+4"));
        assert!(o("w+1").fundamental_sequence(0).is_err());
    }

    #[test]
    fn text_round_trip() {
        for s in ["0", "7", "w", "w*2+3", "w^w+1", "w^(w+1)*2+w^3", "w^w^2", "w^(w*2)"] {
            assert_eq!(o(s).to_string(), s);
        }
        assert_eq!(
            o("w^w+1"),
            Ordinal::omega_pow(Ordinal::omega()).add(&Ordinal::finite(1))
        );
        assert!("1+w".parse::<Ordinal>().is_err());
        assert!("w*0".parse::<Ordinal>().is_err());
        assert_eq!("inf".parse::<OrdinalOrInfinity>(), Ok(OrdinalOrInfinity::Infinity));
        assert!(OrdinalOrInfinity::Infinity > OrdinalOrInfinity::Ordinal(o("w^w^w")));
    }
}
