use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The prime field `F_q`, `q ∈ {2, 3, 5}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Field {
    q: u8,
}

impl Field {
    pub const SUPPORTED: [u32; 3] = [2, 3, 5];

    pub fn new(q: u32) -> Result<Self> {
        if Self::SUPPORTED.contains(&q) {
            Ok(Field { q: q as u8 })
        } else {
            Err(Error::UnsupportedField(q))
        }
    }

    pub fn q(self) -> u8 {
        self.q
    }

    pub fn reduce(self, x: u32) -> u8 {
        (x % self.q as u32) as u8
    }

    pub fn add(self, a: u8, b: u8) -> u8 {
        self.reduce(a as u32 + b as u32)
    }

    pub fn sub(self, a: u8, b: u8) -> u8 {
        self.reduce(a as u32 + self.q as u32 - b as u32)
    }

    pub fn neg(self, a: u8) -> u8 {
        self.sub(0, a)
    }

    pub fn mul(self, a: u8, b: u8) -> u8 {
        self.reduce(a as u32 * b as u32)
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(self, a: u8) -> u8 {
        assert!(!a.is_multiple_of(self.q), "zero has no inverse");
        (1..self.q)
            .find(|&b| self.mul(a, b) == 1)
            .expect("prime field")
    }

    pub fn elements(self) -> impl Iterator<Item = u8> {
        0..self.q
    }

    pub fn units(self) -> impl Iterator<Item = u8> {
        1..self.q
    }
}

impl TryFrom<u32> for Field {
    type Error = Error;

    fn try_from(q: u32) -> Result<Self> {
        Field::new(q)
    }
}

impl From<Field> for u32 {
    fn from(f: Field) -> u32 {
        f.q as u32
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn only_small_primes() {
        assert!(Field::new(4).is_err());
        assert!(Field::new(7).is_err());
        assert_eq!(Field::new(5).unwrap().q(), 5);
    }

    #[test]
    fn inverses() {
        for q in Field::SUPPORTED {
            let f = Field::new(q).unwrap();
            for a in f.units() {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), 0);
            }
        }
    }
}
