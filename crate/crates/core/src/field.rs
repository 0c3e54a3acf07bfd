//! Ground fields: the rationals and prime fields.
//!
//! A [`Field`] is a small value that knows how to do arithmetic on its
//! elements. Rationals carry no data; a prime field carries its modulus.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// Runtime description of a ground field, as found in files and on the
/// command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    PrimeField(u64),
}

impl FieldSpec {
    pub fn validate(self) -> Result<Self> {
        if let FieldSpec::PrimeField(p) = self {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
        }
        Ok(self)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(p) => write!(f, "Fp {p}"),
        }
    }
}

/// Parses the command-line spelling `Q` or `Fp:<p>`.
impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        let p = s
            .strip_prefix("Fp:")
            .or_else(|| s.strip_prefix("Fp "))
            .ok_or_else(|| Error::Parse {
                line: 0,
                msg: format!("unknown field `{s}` (expected Q or Fp:<p>)"),
            })?;
        let p: u64 = p.trim().parse().map_err(|_| Error::Parse {
            line: 0,
            msg: format!("bad modulus `{p}`"),
        })?;
        FieldSpec::PrimeField(p).validate()
    }
}

/// Deterministic primality test for 64-bit moduli.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if p % small == 0 {
            return p == small;
        }
    }
    let mut d = p - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, p);
        if x == 1 || x == p - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, p);
            if x == p - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Exact field arithmetic. Implementors are cheap to clone.
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Send + Sync;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn parse_elem(&self, s: &str) -> std::result::Result<Self::Elem, String>;
    fn format_elem(&self, a: &Self::Elem) -> String;
    /// A random element; for infinite fields, drawn from a small range.
    fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|ib| self.mul(a, &ib))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
}

/// The field ℚ with arbitrary-precision entries.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }

    fn parse_elem(&self, s: &str) -> std::result::Result<BigRational, String> {
        let bad = || format!("bad rational `{s}`");
        match s.split_once('/') {
            None => s
                .parse::<BigInt>()
                .map(BigRational::from_integer)
                .map_err(|_| bad()),
            Some((a, b)) => {
                let a: BigInt = a.parse().map_err(|_| bad())?;
                let b: BigInt = b.parse().map_err(|_| bad())?;
                if b.is_zero() {
                    return Err(format!("zero denominator in `{s}`"));
                }
                Ok(BigRational::new(a, b))
            }
        }
    }

    fn format_elem(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            // BigRational keeps a positive denominator in lowest terms.
            debug_assert!(a.denom().is_positive());
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        self.from_i64(rng.gen_range(-3..=3))
    }
}

/// The prime field 𝔽_p, elements stored as canonical residues `0..p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(PrimeField { p })
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn spec(&self) -> FieldSpec {
        FieldSpec::PrimeField(self.p)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, v: i64) -> u64 {
        (v as i128).rem_euclid(self.p as i128) as u64
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + self.p as u128 - *b as u128) % self.p as u128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.p)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(pow_mod(*a, self.p - 2, self.p))
        }
    }

    fn parse_elem(&self, s: &str) -> std::result::Result<u64, String> {
        let v: u64 = s.parse().map_err(|_| format!("bad residue `{s}`"))?;
        if v >= self.p {
            return Err(format!("residue {v} is not canonical mod {}", self.p));
        }
        Ok(v)
    }

    fn format_elem(&self, a: &u64) -> String {
        a.to_string()
    }

    fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..60).filter(|&p| is_prime(p)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_007 * 3));
        assert!(PrimeField::new(4).is_err());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.from_i64(-1), 6);
        assert_eq!(f.mul(&3, &5), 1);
        assert_eq!(f.inv(&3), Some(5));
        assert_eq!(f.inv(&0), None);
        assert_eq!(f.sub(&2, &5), 4);
        assert!(f.parse_elem("7").is_err());
    }

    #[test]
    fn rational_text() {
        let q = Rationals;
        let x = q.parse_elem("4/6").unwrap();
        assert_eq!(q.format_elem(&x), "2/3");
        assert_eq!(q.format_elem(&q.parse_elem("-3/1").unwrap()), "-3");
        assert_eq!(q.format_elem(&q.parse_elem("1/-2").unwrap()), "-1/2");
        assert!(q.parse_elem("1/0").is_err());
    }

    #[test]
    fn field_spec_parsing() {
        assert_eq!("Q".parse::<FieldSpec>().unwrap(), FieldSpec::Rationals);
        assert_eq!(
            "Fp:5".parse::<FieldSpec>().unwrap(),
            FieldSpec::PrimeField(5)
        );
        assert!("Fp:6".parse::<FieldSpec>().is_err());
    }
}
