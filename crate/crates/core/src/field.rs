//! Prime fields `F_q` with `q < 2^16`.

use crate::stream::ByteStream;
use crate::{Error, Result};

/// A prime field `F_q`. Elements are `u16` values in `0..q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Field {
    q: u16,
}

fn is_prime(q: u32) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= q {
        if q % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub const GF2: Field = Field { q: 2 };

    pub fn new(q: u32) -> Result<Self> {
        if q >= 1 << 16 || !is_prime(q) {
            return Err(Error::InvalidModulus(q));
        }
        Ok(Field { q: q as u16 })
    }

    #[inline]
    pub fn q(&self) -> u16 {
        self.q
    }

    #[inline]
    pub fn is_binary(&self) -> bool {
        self.q == 2
    }

    /// Bytes per element in the canonical dense encoding (q > 2).
    #[inline]
    pub fn element_bytes(&self) -> usize {
        if self.q < 256 {
            1
        } else {
            2
        }
    }

    pub fn check(&self, v: u32) -> Result<u16> {
        if v < self.q as u32 {
            Ok(v as u16)
        } else {
            Err(Error::UnreducedElement { value: v, q: self.q })
        }
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        let s = a as u32 + b as u32;
        let q = self.q as u32;
        (if s >= q { s - q } else { s }) as u16
    }

    #[inline]
    pub fn sub(&self, a: u16, b: u16) -> u16 {
        if a >= b {
            a - b
        } else {
            (a as u32 + self.q as u32 - b as u32) as u16
        }
    }

    #[inline]
    pub fn neg(&self, a: u16) -> u16 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        ((a as u32 * b as u32) % self.q as u32) as u16
    }

    /// Multiplicative inverse by Fermat; `a` must be nonzero.
    pub fn inv(&self, a: u16) -> u16 {
        debug_assert!(a != 0);
        let mut result = 1u32;
        let mut base = a as u32;
        let mut e = self.q as u32 - 2;
        let q = self.q as u32;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % q;
            }
            base = base * base % q;
            e >>= 1;
        }
        result as u16
    }

    /// Draws a uniform element: one byte (q < 256) or two little-endian bytes,
    /// rejecting values at or above the largest multiple of `q` in range.
    pub fn sample<S: ByteStream + ?Sized>(&self, stream: &mut S) -> u16 {
        let q = self.q as u32;
        if self.q < 256 {
            let limit = 256 - 256 % q;
            loop {
                let b = stream.next_byte() as u32;
                if b < limit {
                    return (b % q) as u16;
                }
            }
        } else {
            let limit = 65536 - 65536 % q;
            loop {
                let mut buf = [0u8; 2];
                stream.fill(&mut buf);
                let v = u16::from_le_bytes(buf) as u32;
                if v < limit {
                    return (v % q) as u16;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composites_and_large_moduli() {
        assert!(Field::new(2).is_ok());
        assert!(Field::new(65521).is_ok());
        assert_eq!(Field::new(4), Err(Error::InvalidModulus(4)));
        assert_eq!(Field::new(1), Err(Error::InvalidModulus(1)));
        assert_eq!(Field::new(65537), Err(Error::InvalidModulus(65537)));
    }

    #[test]
    fn inverse_round_trips() {
        for q in [2u32, 3, 5, 7, 251, 257, 65521] {
            let f = Field::new(q).unwrap();
            for a in 1..q.min(300) {
                let a = a as u16;
                assert_eq!(f.mul(a, f.inv(a)), 1, "q={q} a={a}");
            }
        }
    }

    #[test]
    fn arithmetic_stays_reduced() {
        let f = Field::new(65521).unwrap();
        let a = 65520;
        assert_eq!(f.add(a, a), 65519);
        assert_eq!(f.sub(0, 1), 65520);
        assert_eq!(f.neg(1), 65520);
        assert_eq!(f.mul(a, a), 1);
    }
}
