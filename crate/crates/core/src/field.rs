//! Arithmetic in `GF(2^s)` for small `s`.
//!
//! Elements are the integers `0..2^s` read as polynomials over `GF(2)`;
//! addition is XOR and multiplication is carry-less multiplication reduced
//! by a fixed irreducible polynomial. The default reduction polynomial for
//! each degree is the numerically smallest irreducible one, so every build
//! evaluates labels identically.

use crate::error::{Error, Result};

/// Largest supported extension degree.
pub const MAX_BITS: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BinaryField {
    bits: u32,
    poly: u32,
}

impl BinaryField {
    /// The field of order `t` (a power of two, `2 ≤ t ≤ 2^16`).
    pub fn new(order: u32) -> Result<Self> {
        let bits = Self::bits_for(order)?;
        let poly = (1u32 << bits..1u32 << (bits + 1))
            .find(|&p| is_irreducible(p))
            .expect("an irreducible polynomial exists in every degree");
        Ok(Self { bits, poly })
    }

    /// The field of order `t` with an explicit reduction polynomial.
    pub fn with_poly(order: u32, poly: u32) -> Result<Self> {
        let bits = Self::bits_for(order)?;
        if degree(poly) != Some(bits) || !is_irreducible(poly) {
            return Err(Error::InvalidParameter(format!(
                "{poly:#x} is not an irreducible polynomial of degree {bits}"
            )));
        }
        Ok(Self { bits, poly })
    }

    fn bits_for(order: u32) -> Result<u32> {
        if order < 2 || !order.is_power_of_two() || order.trailing_zeros() > MAX_BITS {
            return Err(Error::InvalidParameter(format!(
                "field order must be a power of two in [2, 2^{MAX_BITS}], got {order}"
            )));
        }
        Ok(order.trailing_zeros())
    }

    pub fn order(&self) -> u32 {
        1 << self.bits
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Reduction polynomial including its leading term.
    pub fn poly(&self) -> u32 {
        self.poly
    }

    /// `t=<order> poly=<hex>`.
    pub fn spec_line(&self) -> String {
        format!("t={} poly={:#x}", self.order(), self.poly)
    }

    pub fn check(&self, a: u32) -> Result<u32> {
        if a < self.order() {
            Ok(a)
        } else {
            Err(Error::InvalidElement {
                element: a,
                order: self.order(),
            })
        }
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        a ^ b
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let mut product: u64 = 0;
        let (a, mut b) = (a as u64, b);
        let mut shift = 0;
        while b != 0 {
            if b & 1 == 1 {
                product ^= a << shift;
            }
            b >>= 1;
            shift += 1;
        }
        reduce(product, self.poly as u64, self.bits)
    }

    pub fn pow(&self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.pow(a, self.order() as u64 - 2))
    }

    /// Evaluates the polynomial whose `i`-th coefficient is bit `i` of
    /// `label` (bits `0..n`) at the point `a`, by Horner's rule.
    pub fn eval_label(&self, label: u64, n: u32, a: u32) -> Result<u32> {
        self.check(a)?;
        Ok(self.eval_unchecked(label, n, a))
    }

    pub(crate) fn eval_unchecked(&self, label: u64, n: u32, a: u32) -> u32 {
        (0..n)
            .rev()
            .fold(0, |acc, i| self.mul(acc, a) ^ ((label >> i) & 1) as u32)
    }
}

fn degree(p: u32) -> Option<u32> {
    (p != 0).then(|| 31 - p.leading_zeros())
}

fn reduce(mut v: u64, poly: u64, bits: u32) -> u32 {
    for i in (bits..64).rev() {
        if v >> i & 1 == 1 {
            v ^= poly << (i - bits);
        }
    }
    v as u32
}

/// Remainder of carry-less division.
fn poly_mod(mut a: u32, b: u32) -> u32 {
    let db = degree(b).expect("nonzero divisor");
    while let Some(da) = degree(a) {
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

/// Trial division by every polynomial of degree `1..=deg/2`.
pub fn is_irreducible(p: u32) -> bool {
    let Some(d) = degree(p) else { return false };
    if d == 0 {
        return false;
    }
    (2u32..1 << (d / 2 + 1)).all(|q| poly_mod(p, q) != 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_polynomials_are_least_irreducible() {
        let expected = [
            (2, 0b10),
            (4, 0b111),
            (8, 0b1011),
            (16, 0x13),
            (32, 0x25),
            (64, 0x43),
            (128, 0x83),
            (256, 0x11b),
        ];
        for (t, poly) in expected {
            assert_eq!(BinaryField::new(t).unwrap().poly(), poly, "t={t}");
        }
        assert_eq!(BinaryField::new(16).unwrap().spec_line(), "t=16 poly=0x13");
    }

    #[test]
    fn rejects_bad_orders() {
        for t in [0, 1, 3, 12, 1 << 17] {
            assert!(BinaryField::new(t).is_err(), "t={t}");
        }
        assert!(BinaryField::with_poly(4, 0b101).is_err());
        assert!(BinaryField::with_poly(4, 0b111).is_ok());
    }

    #[test]
    fn gf4_table() {
        // z² = z + 1 with elements 0, 1, z=2, z+1=3
        let f = BinaryField::new(4).unwrap();
        let table = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]];
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(f.mul(a, b), table[a as usize][b as usize], "{a}*{b}");
            }
        }
    }

    #[test]
    fn eval_examples() {
        let f = BinaryField::new(4).unwrap();
        // 1 + z evaluated at every point of GF(4)
        let got: Vec<u32> = (0..4).map(|a| f.eval_label(0b11, 2, a).unwrap()).collect();
        assert_eq!(got, vec![1, 0, 3, 2]);
        assert_eq!(f.eval_label(0b101, 3, 0).unwrap(), 1);
        assert_eq!(f.eval_label(0, 5, 3).unwrap(), 0);
        assert!(f.eval_label(1, 1, 4).is_err());
        // 1 + z² at z: z² + 1 = z
        assert_eq!(f.eval_label(0b101, 3, 2).unwrap(), 2);
    }

    #[test]
    fn inverses() {
        let f = BinaryField::new(256).unwrap();
        assert_eq!(f.inv(0), None);
        for a in 1..256 {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
    }
}
