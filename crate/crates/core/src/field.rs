//! The arithmetic interface shared by every coefficient domain.
//!
//! Elements carry their own ambient-field context (the prime `p`, the
//! non-residue of an extension, the radicand `d`), so constants are produced
//! from an existing element rather than from a type-level singleton.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

pub trait FieldElement:
    Clone
    + PartialEq
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_int_like(&self, n: i64) -> Self;
    fn is_zero(&self) -> bool;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn square(&self) -> Self {
        self.clone() * self.clone()
    }

    fn pow_u64(&self, mut e: u64) -> Self {
        let mut acc = self.one_like();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    fn checked_div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.clone() * i)
    }
}

/// Finite fields: enumerable, with a known order and quadratic character.
pub trait FiniteField: FieldElement {
    /// Number of elements `q`.
    fn order(&self) -> u64;
    fn characteristic(&self) -> u64;
    /// Every element of the ambient field, in a fixed deterministic order.
    fn elements(&self) -> Vec<Self>;

    fn is_square(&self) -> bool {
        if self.is_zero() {
            return true;
        }
        let q = self.order();
        if q.is_multiple_of(2) {
            return true;
        }
        self.pow_u64((q - 1) / 2) == self.one_like()
    }

    /// Quadratic character: 0, 1 or -1.
    fn quadratic_character(&self) -> i32 {
        if self.is_zero() {
            0
        } else if self.is_square() {
            1
        } else {
            -1
        }
    }

    fn frobenius(&self) -> Self {
        self.pow_u64(self.characteristic())
    }
}
