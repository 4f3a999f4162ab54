//! Long-Weierstrass elliptic curves over any [`FieldElement`] domain.
//!
//! `y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6`

pub mod reduce;
pub mod torsion;

use std::fmt;

use thiserror::Error;

pub use reduce::{
    count_points_elliptic, reduce_at, torsion_bound, NumberFieldElement, Reduction, ReductionError,
    ResidueCount, ResidueCurve, ResiduePoint, TorsionBound, DEFAULT_BOUND_PRIMES,
};
pub use torsion::{
    generated_group, search_points, torsion_certify, SearchBudget, TorsionCertificate,
};

use crate::arith::factorize;
use crate::field::FieldElement;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EllError {
    #[error("the Weierstrass model is singular")]
    Singular,
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("the prime 2 is not used for torsion bounds")]
    PrimeTwo,
    #[error(
        "need good reduction at two or more odd primes of distinct characteristic; usable: {0:?}"
    )]
    InsufficientPrimes(Vec<u64>),
    #[error("{0:?} is not one of the 26 torsion groups over quadratic fields")]
    NotATorsionGroup((u32, u32)),
    #[error("points do not generate a finite group of order at most {0}")]
    NotTorsion(u32),
}

#[derive(Clone, PartialEq)]
pub struct EllCurve<F> {
    a1: F,
    a2: F,
    a3: F,
    a4: F,
    a6: F,
    b2: F,
    b4: F,
    b6: F,
    b8: F,
    disc: F,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum EllPoint<F> {
    Infinity,
    Affine(F, F),
}

impl<F: fmt::Display> fmt::Display for EllPoint<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EllPoint::Infinity => f.write_str("O"),
            EllPoint::Affine(x, y) => write!(f, "({x}, {y})"),
        }
    }
}

impl<F: fmt::Debug> fmt::Debug for EllPoint<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EllPoint::Infinity => f.write_str("O"),
            EllPoint::Affine(x, y) => write!(f, "({x:?}, {y:?})"),
        }
    }
}

impl<F> EllPoint<F> {
    pub fn is_infinity(&self) -> bool {
        matches!(self, EllPoint::Infinity)
    }

    pub fn x(&self) -> Option<&F> {
        match self {
            EllPoint::Infinity => None,
            EllPoint::Affine(x, _) => Some(x),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointOrder {
    Finite(u32),
    OverCap,
}

/// Largest order of a group in the quadratic-field list (`ℤ/2 ⊕ ℤ/12`).
pub const DEFAULT_ORDER_CAP: u32 = 24;

impl<F: FieldElement> EllCurve<F> {
    /// A nonsingular curve; [`EllError::Singular`] when the discriminant vanishes.
    pub fn new(a1: F, a2: F, a3: F, a4: F, a6: F) -> Result<Self, EllError> {
        let e = Self::from_coeffs_unchecked(a1, a2, a3, a4, a6);
        if e.disc.is_zero() {
            Err(EllError::Singular)
        } else {
            Ok(e)
        }
    }

    /// Builds the model without the nonsingularity check.
    pub fn from_coeffs_unchecked(a1: F, a2: F, a3: F, a4: F, a6: F) -> Self {
        let two = a1.from_int_like(2);
        let four = a1.from_int_like(4);
        let b2 = a1.square() + four.clone() * a2.clone();
        let b4 = two * a4.clone() + a1.clone() * a3.clone();
        let b6 = a3.square() + four.clone() * a6.clone();
        let b8 = a1.square() * a6.clone() + four * a2.clone() * a6.clone()
            - a1.clone() * a3.clone() * a4.clone()
            + a2.clone() * a3.square()
            - a4.square();
        let disc = -(b2.square() * b8.clone())
            - a1.from_int_like(8) * b4.square() * b4.clone()
            - a1.from_int_like(27) * b6.square()
            + a1.from_int_like(9) * b2.clone() * b4.clone() * b6.clone();
        EllCurve {
            a1,
            a2,
            a3,
            a4,
            a6,
            b2,
            b4,
            b6,
            b8,
            disc,
        }
    }

    /// `y² = x³ + a·x + b`.
    pub fn short(a: F, b: F) -> Result<Self, EllError> {
        let z = a.zero_like();
        Self::new(z.clone(), z.clone(), z, a, b)
    }

    pub fn a_invariants(&self) -> [&F; 5] {
        [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6]
    }

    pub fn b_invariants(&self) -> [&F; 4] {
        [&self.b2, &self.b4, &self.b6, &self.b8]
    }

    pub fn discriminant(&self) -> &F {
        &self.disc
    }

    pub fn is_singular(&self) -> bool {
        self.disc.is_zero()
    }

    pub fn point(&self, x: F, y: F) -> Result<EllPoint<F>, EllError> {
        let p = EllPoint::Affine(x, y);
        if self.contains(&p) {
            Ok(p)
        } else {
            Err(EllError::NotOnCurve)
        }
    }

    pub fn contains(&self, p: &EllPoint<F>) -> bool {
        match p {
            EllPoint::Infinity => true,
            EllPoint::Affine(x, y) => {
                let lhs = y.square()
                    + self.a1.clone() * x.clone() * y.clone()
                    + self.a3.clone() * y.clone();
                lhs == self.rhs(x)
            }
        }
    }

    /// `x³ + a2·x² + a4·x + a6`.
    pub fn rhs(&self, x: &F) -> F {
        ((x.clone() + self.a2.clone()) * x.clone() + self.a4.clone()) * x.clone() + self.a6.clone()
    }

    /// `a1·x + a3`, the linear coefficient of `y`.
    pub fn h(&self, x: &F) -> F {
        self.a1.clone() * x.clone() + self.a3.clone()
    }

    /// Coefficients (ascending) of `h(x)² + 4·rhs(x) = 4x³ + b2·x² + 2b4·x + b6`.
    pub fn y_discriminant_poly(&self) -> Vec<F> {
        let two = self.a1.from_int_like(2);
        vec![
            self.b6.clone(),
            two * self.b4.clone(),
            self.b2.clone(),
            self.a1.from_int_like(4),
        ]
    }

    pub fn negate(&self, p: &EllPoint<F>) -> EllPoint<F> {
        match p {
            EllPoint::Infinity => EllPoint::Infinity,
            EllPoint::Affine(x, y) => EllPoint::Affine(x.clone(), -y.clone() - self.h(x)),
        }
    }

    /// Chord-tangent addition. Inputs are assumed to lie on the curve.
    pub fn add(&self, p: &EllPoint<F>, q: &EllPoint<F>) -> EllPoint<F> {
        let (x1, y1, x2, y2) = match (p, q) {
            (EllPoint::Infinity, _) => return q.clone(),
            (_, EllPoint::Infinity) => return p.clone(),
            (EllPoint::Affine(x1, y1), EllPoint::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let (lambda, nu) = if x1 == x2 {
            let denom = y1.clone() + y2.clone() + self.h(x2);
            if denom.is_zero() {
                return EllPoint::Infinity;
            }
            // tangent: denom = 2y1 + a1x1 + a3
            let three = x1.from_int_like(3);
            let two = x1.from_int_like(2);
            let num =
                three * x1.square() + two.clone() * self.a2.clone() * x1.clone() + self.a4.clone()
                    - self.a1.clone() * y1.clone();
            let nu_num =
                -(x1.square() * x1.clone()) + self.a4.clone() * x1.clone() + two * self.a6.clone()
                    - self.a3.clone() * y1.clone();
            let inv = denom.inv().expect("nonzero");
            (num * inv.clone(), nu_num * inv)
        } else {
            let inv = (x2.clone() - x1.clone()).inv().expect("distinct x");
            let lambda = (y2.clone() - y1.clone()) * inv.clone();
            let nu = (y1.clone() * x2.clone() - y2.clone() * x1.clone()) * inv;
            (lambda, nu)
        };
        let x3 = lambda.square() + self.a1.clone() * lambda.clone()
            - self.a2.clone()
            - x1.clone()
            - x2.clone();
        let y3 = -(lambda + self.a1.clone()) * x3.clone() - nu - self.a3.clone();
        EllPoint::Affine(x3, y3)
    }

    pub fn checked_add(&self, p: &EllPoint<F>, q: &EllPoint<F>) -> Result<EllPoint<F>, EllError> {
        if self.is_singular() {
            return Err(EllError::Singular);
        }
        if !self.contains(p) || !self.contains(q) {
            return Err(EllError::NotOnCurve);
        }
        Ok(self.add(p, q))
    }

    pub fn double(&self, p: &EllPoint<F>) -> EllPoint<F> {
        self.add(p, p)
    }

    /// `n·P` by double-and-add; negative `n` multiplies `−P`.
    pub fn scalar_mul(&self, n: i64, p: &EllPoint<F>) -> EllPoint<F> {
        let base = if n < 0 { self.negate(p) } else { p.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = EllPoint::Infinity;
        let mut run = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &run);
            }
            run = self.double(&run);
            k >>= 1;
        }
        acc
    }

    /// Smallest `n ≤ cap` with `n·P = O`, certified by `n·P = O` and
    /// `(n/q)·P ≠ O` for each prime `q | n`.
    pub fn point_order(&self, p: &EllPoint<F>, cap: u32) -> Result<PointOrder, EllError> {
        if !self.contains(p) {
            return Err(EllError::NotOnCurve);
        }
        let mut multiple = p.clone();
        for n in 1..=cap {
            if multiple.is_infinity() {
                let certified = self.scalar_mul(n as i64, p).is_infinity()
                    && factorize(n as u64)
                        .iter()
                        .all(|&(q, _)| !self.scalar_mul((n as u64 / q) as i64, p).is_infinity());
                assert!(certified, "order certification disagrees with iteration");
                return Ok(PointOrder::Finite(n));
            }
            multiple = self.add(&multiple, p);
        }
        Ok(PointOrder::OverCap)
    }
}

impl<F: FieldElement + fmt::Display> fmt::Display for EllCurve<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}, {}, {}, {}]",
            self.a1, self.a2, self.a3, self.a4, self.a6
        )
    }
}

impl<F: FieldElement> fmt::Debug for EllCurve<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "EllCurve[{:?}, {:?}, {:?}, {:?}, {:?}]",
            self.a1, self.a2, self.a3, self.a4, self.a6
        )
    }
}

/// `ℤ/m ⊕ ℤ/n` with `m | n`; only the 26 groups that occur over quadratic fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorsionGroup {
    m: u32,
    n: u32,
}

pub const ALL_GROUPS: [(u32, u32); 26] = [
    (1, 1),
    (1, 2),
    (1, 3),
    (1, 4),
    (1, 5),
    (1, 6),
    (1, 7),
    (1, 8),
    (1, 9),
    (1, 10),
    (1, 11),
    (1, 12),
    (1, 13),
    (1, 14),
    (1, 15),
    (1, 16),
    (1, 18),
    (2, 2),
    (2, 4),
    (2, 6),
    (2, 8),
    (2, 10),
    (2, 12),
    (3, 3),
    (3, 6),
    (4, 4),
];

impl TorsionGroup {
    pub fn new(m: u32, n: u32) -> Result<Self, EllError> {
        if ALL_GROUPS.contains(&(m, n)) {
            Ok(TorsionGroup { m, n })
        } else {
            Err(EllError::NotATorsionGroup((m, n)))
        }
    }

    pub fn cyclic(n: u32) -> Result<Self, EllError> {
        Self::new(1, n)
    }

    pub fn all() -> Vec<TorsionGroup> {
        ALL_GROUPS
            .iter()
            .map(|&(m, n)| TorsionGroup { m, n })
            .collect()
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.m * self.n
    }

    /// Parses `"11"` or `"2x12"`.
    pub fn parse(spec: &str) -> Result<Self, String> {
        let s = spec.trim().to_ascii_lowercase();
        let (m, n) = match s.split_once('x') {
            Some((m, n)) => (m.trim().parse::<u32>(), n.trim().parse::<u32>()),
            None => (Ok(1), s.parse::<u32>()),
        };
        match (m, n) {
            (Ok(m), Ok(n)) => Self::new(m, n).map_err(|e| e.to_string()),
            _ => Err(format!(
                "cannot parse group spec {spec:?}; use \"n\" or \"mxn\""
            )),
        }
    }

    /// Shell-style spec, inverse of [`TorsionGroup::parse`].
    pub fn spec(&self) -> String {
        if self.m == 1 {
            self.n.to_string()
        } else {
            format!("{}x{}", self.m, self.n)
        }
    }
}

impl serde::Serialize for TorsionGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        (self.m, self.n).serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for TorsionGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let (m, n) = <(u32, u32)>::deserialize(d)?;
        TorsionGroup::new(m, n).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for TorsionGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 1 {
            write!(f, "Z/{}", self.n)
        } else {
            write!(f, "Z/{} x Z/{}", self.m, self.n)
        }
    }
}
