//! Prime field arithmetic with byte-sized scalars.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A field scalar, always stored reduced into `0..q`.
pub type Scalar = u8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("field order {0} is not a prime below 256")]
    NotPrime(u32),
}

/// The prime field F_q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Field {
    q: u8,
}

fn is_prime(q: u32) -> bool {
    q >= 2 && (2..q).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

fn inverse_tables() -> &'static Vec<[u8; 256]> {
    static TABLES: OnceLock<Vec<[u8; 256]>> = OnceLock::new();
    TABLES.get_or_init(|| {
        let mut tables = vec![[0u8; 256]; 256];
        for q in 2u32..256 {
            if !is_prime(q) {
                continue;
            }
            for a in 1..q {
                let inv = (1..q).find(|b| a * b % q == 1).unwrap();
                tables[q as usize][a as usize] = inv as u8;
            }
        }
        tables
    })
}

impl Field {
    pub const F2: Field = Field { q: 2 };

    pub fn new(q: u32) -> Result<Field, FieldError> {
        if q < 256 && is_prime(q) {
            Ok(Field { q: q as u8 })
        } else {
            Err(FieldError::NotPrime(q))
        }
    }

    #[inline]
    pub fn q(self) -> u32 {
        self.q as u32
    }

    #[inline]
    pub fn is_binary(self) -> bool {
        self.q == 2
    }

    #[inline]
    pub fn add(self, a: Scalar, b: Scalar) -> Scalar {
        let s = a as u16 + b as u16;
        let q = self.q as u16;
        (if s >= q { s - q } else { s }) as u8
    }

    #[inline]
    pub fn sub(self, a: Scalar, b: Scalar) -> Scalar {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn neg(self, a: Scalar) -> Scalar {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(self, a: Scalar, b: Scalar) -> Scalar {
        ((a as u16 * b as u16) % self.q as u16) as u8
    }

    /// Multiplicative inverse. Panics on zero.
    #[inline]
    pub fn inv(self, a: Scalar) -> Scalar {
        assert!(a != 0, "inverse of zero");
        if self.q == 2 {
            return 1;
        }
        inverse_tables()[self.q as usize][a as usize]
    }

    #[inline]
    pub fn div(self, a: Scalar, b: Scalar) -> Scalar {
        self.mul(a, self.inv(b))
    }

    /// Reduces an arbitrary integer into the field.
    pub fn from_i64(self, v: i64) -> Scalar {
        v.rem_euclid(self.q as i64) as u8
    }

    /// The representative of `a` in `(-q/2, q/2]`, handy for printing signs.
    pub fn to_signed(self, a: Scalar) -> i64 {
        let a = a as i64;
        let q = self.q as i64;
        if a > q / 2 {
            a - q
        } else {
            a
        }
    }
}

impl Default for Field {
    fn default() -> Self {
        Field::F2
    }
}

impl TryFrom<u32> for Field {
    type Error = FieldError;
    fn try_from(q: u32) -> Result<Self, Self::Error> {
        Field::new(q)
    }
}

impl From<Field> for u32 {
    fn from(f: Field) -> u32 {
        f.q()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composites() {
        assert!(Field::new(4).is_err());
        assert!(Field::new(1).is_err());
        assert!(Field::new(257).is_err());
        assert!(Field::new(251).is_ok());
    }

    #[test]
    fn inverses_multiply_to_one() {
        for q in [2u32, 3, 5, 7, 251] {
            let f = Field::new(q).unwrap();
            for a in 1..q {
                assert_eq!(f.mul(a as u8, f.inv(a as u8)), 1);
            }
        }
    }

    #[test]
    fn signed_reduction() {
        let f = Field::new(5).unwrap();
        assert_eq!(f.from_i64(-1), 4);
        assert_eq!(f.to_signed(4), -1);
        assert_eq!(f.sub(1, 3), 3);
    }
}
