//! Prime fields `F_p` and quadratic extensions `F(ω)`, `ω² = t`.
//!
//! `F_{p²}` is [`Fp2Elem`]; applying the construction twice gives `F_{p⁴}`,
//! which the base-change consistency checks use.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::arith::{is_prime, mul_mod, pow_mod};
use crate::field::{FieldElement, FiniteField};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FiniteFieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("quadratic extensions of characteristic 2 are not supported")]
    CharacteristicTwo,
    #[error("no quadratic non-residue found in base field of order {0}")]
    NoNonResidue(u64),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpElem {
    value: u64,
    p: u64,
}

impl FpElem {
    /// Reduces `value` modulo `p`. `p` is assumed prime (checked in debug builds).
    pub fn new(value: u64, p: u64) -> Self {
        debug_assert!((2..(1 << 32)).contains(&p));
        FpElem {
            value: value % p,
            p,
        }
    }

    pub fn from_i64(value: i64, p: u64) -> Self {
        FpElem::new(value.rem_euclid(p as i64) as u64, p)
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixed moduli {} and {}", self.p, other.p);
    }
}

impl fmt::Debug for FpElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.p)
    }
}

impl fmt::Display for FpElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for FpElem {
    type Output = FpElem;
    fn add(self, rhs: FpElem) -> FpElem {
        self.check(&rhs);
        FpElem {
            value: (self.value + rhs.value) % self.p,
            p: self.p,
        }
    }
}

impl Sub for FpElem {
    type Output = FpElem;
    fn sub(self, rhs: FpElem) -> FpElem {
        self.check(&rhs);
        FpElem {
            value: (self.value + self.p - rhs.value) % self.p,
            p: self.p,
        }
    }
}

impl Mul for FpElem {
    type Output = FpElem;
    fn mul(self, rhs: FpElem) -> FpElem {
        self.check(&rhs);
        FpElem {
            value: mul_mod(self.value, rhs.value, self.p),
            p: self.p,
        }
    }
}

impl Neg for FpElem {
    type Output = FpElem;
    fn neg(self) -> FpElem {
        FpElem {
            value: (self.p - self.value) % self.p,
            p: self.p,
        }
    }
}

impl FieldElement for FpElem {
    fn zero_like(&self) -> Self {
        FpElem {
            value: 0,
            p: self.p,
        }
    }
    fn one_like(&self) -> Self {
        FpElem {
            value: 1 % self.p,
            p: self.p,
        }
    }
    fn from_int_like(&self, n: i64) -> Self {
        FpElem::from_i64(n, self.p)
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    fn inv(&self) -> Option<Self> {
        if self.value == 0 {
            None
        } else {
            Some(FpElem {
                value: pow_mod(self.value, self.p - 2, self.p),
                p: self.p,
            })
        }
    }
}

impl FiniteField for FpElem {
    fn order(&self) -> u64 {
        self.p
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn elements(&self) -> Vec<Self> {
        (0..self.p)
            .map(|v| FpElem {
                value: v,
                p: self.p,
            })
            .collect()
    }
}

/// `u + v·ω` with `ω² = t`, `t` a non-square in the base field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadExt<F> {
    u: F,
    v: F,
    t: F,
}

pub type Fp2Elem = QuadExt<FpElem>;
pub type Fp4Elem = QuadExt<Fp2Elem>;

/// Descriptor of a quadratic extension: the base non-residue `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadExtField<F> {
    t: F,
}

pub type Fp2Field = QuadExtField<FpElem>;

impl<F: FiniteField> QuadExtField<F> {
    /// Extension of the field containing `base_sample`, using the first
    /// non-square in the base field's enumeration order.
    pub fn over(base_sample: &F) -> Result<Self, FiniteFieldError> {
        if base_sample.characteristic() == 2 {
            return Err(FiniteFieldError::CharacteristicTwo);
        }
        base_sample
            .elements()
            .into_iter()
            .find(|e| !e.is_square())
            .map(|t| QuadExtField { t })
            .ok_or(FiniteFieldError::NoNonResidue(base_sample.order()))
    }

    pub fn non_residue(&self) -> &F {
        &self.t
    }

    pub fn elem(&self, u: F, v: F) -> QuadExt<F> {
        QuadExt {
            u,
            v,
            t: self.t.clone(),
        }
    }

    pub fn embed(&self, u: F) -> QuadExt<F> {
        let z = u.zero_like();
        self.elem(u, z)
    }

    /// The generator `ω`.
    pub fn omega(&self) -> QuadExt<F> {
        self.elem(self.t.zero_like(), self.t.one_like())
    }

    pub fn zero(&self) -> QuadExt<F> {
        self.embed(self.t.zero_like())
    }
}

impl Fp2Field {
    pub fn characteristic(&self) -> u64 {
        self.t.modulus()
    }

    pub fn from_ints(&self, u: i64, v: i64) -> Fp2Elem {
        let p = self.characteristic();
        self.elem(FpElem::from_i64(u, p), FpElem::from_i64(v, p))
    }
}

/// `F_{p²}` with the smallest positive quadratic non-residue as `t`.
pub fn fp2_construct(p: u64) -> Result<Fp2Field, FiniteFieldError> {
    if !is_prime(p) {
        return Err(FiniteFieldError::NotPrime(p));
    }
    QuadExtField::over(&FpElem::new(0, p))
}

impl<F> QuadExt<F> {
    pub fn u(&self) -> &F {
        &self.u
    }
    pub fn v(&self) -> &F {
        &self.v
    }
    pub fn non_residue(&self) -> &F {
        &self.t
    }
}

impl<F: FieldElement> QuadExt<F> {
    pub fn conjugate(&self) -> Self {
        QuadExt {
            u: self.u.clone(),
            v: -self.v.clone(),
            t: self.t.clone(),
        }
    }

    pub fn norm(&self) -> F {
        self.u.square() - self.t.clone() * self.v.square()
    }

    pub fn in_base(&self) -> bool {
        self.v.is_zero()
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.t, other.t, "mixed quadratic extensions");
    }
}

impl<F: fmt::Debug> fmt::Debug for QuadExt<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) + ({:?})ω", self.u, self.v)
    }
}

impl<F: FieldElement> Add for QuadExt<F> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.check(&rhs);
        QuadExt {
            u: self.u + rhs.u,
            v: self.v + rhs.v,
            t: self.t,
        }
    }
}

impl<F: FieldElement> Sub for QuadExt<F> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.check(&rhs);
        QuadExt {
            u: self.u - rhs.u,
            v: self.v - rhs.v,
            t: self.t,
        }
    }
}

impl<F: FieldElement> Mul for QuadExt<F> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.check(&rhs);
        let u = self.u.clone() * rhs.u.clone() + self.t.clone() * self.v.clone() * rhs.v.clone();
        let v = self.u * rhs.v + self.v * rhs.u;
        QuadExt { u, v, t: self.t }
    }
}

impl<F: FieldElement> Neg for QuadExt<F> {
    type Output = Self;
    fn neg(self) -> Self {
        QuadExt {
            u: -self.u,
            v: -self.v,
            t: self.t,
        }
    }
}

impl<F: FieldElement> FieldElement for QuadExt<F> {
    fn zero_like(&self) -> Self {
        QuadExt {
            u: self.u.zero_like(),
            v: self.u.zero_like(),
            t: self.t.clone(),
        }
    }
    fn one_like(&self) -> Self {
        QuadExt {
            u: self.u.one_like(),
            v: self.u.zero_like(),
            t: self.t.clone(),
        }
    }
    fn from_int_like(&self, n: i64) -> Self {
        QuadExt {
            u: self.u.from_int_like(n),
            v: self.u.zero_like(),
            t: self.t.clone(),
        }
    }
    fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }
    fn inv(&self) -> Option<Self> {
        let n = self.norm().inv()?;
        let c = self.conjugate();
        Some(QuadExt {
            u: c.u * n.clone(),
            v: c.v * n,
            t: self.t.clone(),
        })
    }
}

impl<F: FiniteField> FiniteField for QuadExt<F> {
    fn order(&self) -> u64 {
        let q = self.u.order();
        q * q
    }
    fn characteristic(&self) -> u64 {
        self.u.characteristic()
    }
    fn elements(&self) -> Vec<Self> {
        let base = self.u.elements();
        let mut out = Vec::with_capacity(base.len() * base.len());
        for v in &base {
            for u in &base {
                out.push(QuadExt {
                    u: u.clone(),
                    v: v.clone(),
                    t: self.t.clone(),
                });
            }
        }
        out
    }
}

/// Square root modulo an odd prime by Tonelli–Shanks, normalized to the
/// smaller of the two roots. For `p = 2` every element is its own root.
pub fn sqrt_mod_p(a: FpElem) -> Option<FpElem> {
    let p = a.modulus();
    if a.is_zero() || p == 2 {
        return Some(a);
    }
    if !a.is_square() {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)?;
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a.value, q, p);
    let mut r = pow_mod(a.value, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(FpElem::new(r.min(p - r), p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(v: u64, p: u64) -> FpElem {
        FpElem::new(v, p)
    }

    #[test]
    fn smallest_non_residue() {
        assert_eq!(fp2_construct(3).unwrap().non_residue().value(), 2);
        assert_eq!(fp2_construct(5).unwrap().non_residue().value(), 2);
        assert_eq!(fp2_construct(7).unwrap().non_residue().value(), 3);
        assert_eq!(fp2_construct(2), Err(FiniteFieldError::CharacteristicTwo));
        assert_eq!(fp2_construct(9), Err(FiniteFieldError::NotPrime(9)));
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(sqrt_mod_p(fp(1, 11)), Some(fp(1, 11)));
        assert_eq!(sqrt_mod_p(fp(2, 7)), Some(fp(3, 7)));
        assert_eq!(sqrt_mod_p(fp(13, 17)), Some(fp(8, 17)));
        assert_eq!(sqrt_mod_p(fp(3, 7)), None);
    }

    #[test]
    fn sqrt_exists_iff_residue() {
        for p in crate::arith::primes_between(3, 97) {
            for a in 0..p {
                let r = sqrt_mod_p(fp(a, p));
                let euler = a == 0 || pow_mod(a, (p - 1) / 2, p) == 1;
                assert_eq!(r.is_some(), euler, "a={a} p={p}");
                if let Some(r) = r {
                    assert_eq!((r * r).value(), a);
                    assert!(r.value() <= p - r.value() || r.value() == 0);
                }
            }
        }
    }

    #[test]
    fn fp2_exhaustive_axioms() {
        for p in [3u64, 5, 7] {
            let k = fp2_construct(p).unwrap();
            let els = k.zero().elements();
            for x in &els {
                for y in &els {
                    assert_eq!(x.clone() * y.clone(), y.clone() * x.clone());
                    for z in els.iter().step_by(3) {
                        assert_eq!(
                            (x.clone() * y.clone()) * z.clone(),
                            x.clone() * (y.clone() * z.clone())
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn fp2_inverses_exhaustive() {
        for p in [3u64, 5, 7, 11, 13] {
            let k = fp2_construct(p).unwrap();
            for x in k.zero().elements() {
                match x.inv() {
                    None => assert!(x.is_zero()),
                    Some(i) => assert_eq!(x * i, k.embed(fp(1, p))),
                }
            }
        }
    }

    #[test]
    fn frobenius_is_order_two_and_fixes_base() {
        for p in [3u64, 5, 7] {
            let k = fp2_construct(p).unwrap();
            let mut fixed = 0;
            for x in k.zero().elements() {
                let fx = x.frobenius();
                assert_eq!(fx.frobenius(), x);
                assert_eq!(fx, x.conjugate());
                if fx == x {
                    assert!(x.in_base());
                    fixed += 1;
                }
            }
            assert_eq!(fixed, p);
        }
    }

    #[test]
    fn fp4_tower_is_a_field() {
        let k2 = fp2_construct(3).unwrap();
        let k4 = QuadExtField::over(&k2.zero()).unwrap();
        let els = k4.zero().elements();
        assert_eq!(els.len(), 81);
        let nonsq = els.iter().filter(|e| !e.is_square()).count();
        assert_eq!(nonsq, 40);
        for x in els.iter().filter(|e| !e.is_zero()) {
            assert_eq!(x.clone() * x.inv().unwrap(), x.one_like());
        }
    }
}
