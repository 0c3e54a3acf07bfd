use std::fmt;
use std::ops::Add;
use std::str::FromStr;

/// A countable cardinal: a natural number or ℵ₀.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Card {
    Finite(u64),
    Aleph0,
}

impl Card {
    pub const ZERO: Card = Card::Finite(0);

    pub fn is_zero(self) -> bool {
        self == Card::ZERO
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Card::Finite(c) => Some(c),
            Card::Aleph0 => None,
        }
    }
}

impl From<u64> for Card {
    fn from(c: u64) -> Self {
        Card::Finite(c)
    }
}

impl From<usize> for Card {
    fn from(c: usize) -> Self {
        Card::Finite(c as u64)
    }
}

impl Add for Card {
    type Output = Card;
    fn add(self, rhs: Card) -> Card {
        match (self, rhs) {
            (Card::Finite(a), Card::Finite(b)) => a.checked_add(b).map_or(Card::Aleph0, Card::Finite),
            _ => Card::Aleph0,
        }
    }
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Card::Finite(c) => write!(f, "{c}"),
            Card::Aleph0 => write!(f, "aleph0"),
        }
    }
}

/// Accepts a decimal count, `aleph0`, or `inf`.
impl FromStr for Card {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "aleph0" | "inf" => Ok(Card::Aleph0),
            _ => s
                .parse::<u64>()
                .map(Card::Finite)
                .map_err(|_| format!("bad cardinal `{s}`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_and_sum() {
        assert!(Card::Aleph0 > Card::Finite(u64::MAX));
        assert_eq!(Card::Finite(2) + Card::Finite(3), Card::Finite(5));
        assert_eq!(Card::Finite(2) + Card::Aleph0, Card::Aleph0);
        assert_eq!("inf".parse::<Card>(), Ok(Card::Aleph0));
        assert_eq!(Card::Aleph0.to_string(), "aleph0");
    }
}
