//! Exact arithmetic in `ℚ` and `ℚ(√d)`, discriminants, the Kronecker symbol,
//! prime splitting and residue-field reduction contexts.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::arith::is_prime;
use crate::ffield::{fp2_construct, sqrt_mod_p, FiniteFieldError, Fp2Elem, Fp2Field, FpElem};
use crate::field::FieldElement;

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rat = BigRational;

/// Largest `|n|` accepted by [`squarefree_reduce`].
pub const FACTOR_BUDGET: u64 = 1_000_000_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QFieldError {
    #[error("zero has no squarefree part")]
    Zero,
    #[error("|{0}| exceeds the trial-division budget {FACTOR_BUDGET}")]
    BudgetExceeded(i64),
    #[error("{0} is not squarefree")]
    NotSquarefree(i64),
    #[error("d = {0} does not define a quadratic field")]
    Excluded(i64),
    #[error("Kronecker symbol with modulus 0")]
    ZeroModulus,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("elements of Q(√{0}) and Q(√{1}) cannot be combined")]
    FieldMismatch(i64, i64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse rational {0:?}")]
    BadRational(String),
    #[error(transparent)]
    Residue(#[from] FiniteFieldError),
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `"p/q"` or `"p"`; no decimal points.
pub fn parse_rat(s: &str) -> Result<Rat, QFieldError> {
    let bad = || QFieldError::BadRational(s.to_string());
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| bad())?;
    let d = BigInt::from_str(d).map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(n, d))
}

pub fn format_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `p`-adic valuation of a nonzero rational; `None` for zero.
pub fn rat_valuation(r: &Rat, p: u64) -> Option<i64> {
    if Zero::is_zero(r) {
        return None;
    }
    let p = BigInt::from(p);
    let count = |x: &BigInt| {
        let mut x = x.clone();
        let mut v = 0i64;
        while (&x % &p).is_zero() {
            x /= &p;
            v += 1;
        }
        v
    };
    Some(count(r.numer()) - count(r.denom()))
}

/// Image in `F_p` of a rational whose denominator is prime to `p`.
pub fn rat_mod_p(r: &Rat, p: u64) -> Option<FpElem> {
    let pb = BigInt::from(p);
    let den = r.denom().mod_floor(&pb).to_u64()?;
    if den == 0 {
        return None;
    }
    let num = r.numer().mod_floor(&pb).to_u64()?;
    let den_inv = FpElem::new(den, p).inv()?;
    Some(FpElem::new(num, p) * den_inv)
}

/// Exact square root of a rational, if it is a square.
pub fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| Rat::new(n, d))
}

impl FieldElement for Rat {
    fn zero_like(&self) -> Self {
        Rat::zero()
    }
    fn one_like(&self) -> Self {
        Rat::one()
    }
    fn from_int_like(&self, n: i64) -> Self {
        rat_int(n)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
}

/// `n = c²·d` with `d` squarefree and of the same sign as `n`.
pub fn squarefree_reduce(n: i64) -> Result<(i64, u64), QFieldError> {
    if n == 0 {
        return Err(QFieldError::Zero);
    }
    if n.unsigned_abs() > FACTOR_BUDGET {
        return Err(QFieldError::BudgetExceeded(n));
    }
    let mut m = n.unsigned_abs();
    let (mut core, mut c) = (1u64, 1u64);
    let mut f = 2u64;
    while f * f <= m {
        let mut e = 0;
        while m.is_multiple_of(f) {
            m /= f;
            e += 1;
        }
        c *= f.pow(e / 2);
        if e % 2 == 1 {
            core *= f;
        }
        f += if f == 2 { 1 } else { 2 };
    }
    core *= m;
    Ok((n.signum() * core as i64, c))
}

pub fn is_squarefree(d: i64) -> bool {
    d != 0 && matches!(squarefree_reduce(d), Ok((_, 1)))
}

pub fn field_discriminant(d: i64) -> Result<i64, QFieldError> {
    if d == 0 || d == 1 {
        return Err(QFieldError::Excluded(d));
    }
    if !is_squarefree(d) {
        return Err(QFieldError::NotSquarefree(d));
    }
    Ok(if d.rem_euclid(4) == 1 { d } else { 4 * d })
}

/// The Kronecker symbol `(a/n)`.
pub fn kronecker(a: i64, n: i64) -> Result<i32, QFieldError> {
    if n == 0 {
        return Err(QFieldError::ZeroModulus);
    }
    let mut a = a as i128;
    let mut n = n as i128;
    let mut result = 1i32;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let mut twos = 0;
    while n % 2 == 0 {
        n /= 2;
        twos += 1;
    }
    if twos > 0 {
        if a % 2 == 0 {
            return Ok(0);
        }
        // (a/2) = 1 for a ≡ ±1 (mod 8), -1 for a ≡ ±3
        if twos % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            result = -result;
        }
    }
    // Jacobi symbol (a/n), n odd positive
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    Ok(if n == 1 { result } else { 0 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SplitType {
    Split,
    Inert,
    Ramified,
}

impl fmt::Display for SplitType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SplitType::Split => "split",
            SplitType::Inert => "inert",
            SplitType::Ramified => "ramified",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadField {
    d: i64,
    disc: i64,
}

impl QuadField {
    pub fn new(d: i64) -> Result<Self, QFieldError> {
        let disc = field_discriminant(d)?;
        Ok(QuadField { d, disc })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn elem(&self, a: Rat, b: Rat) -> QuadElem {
        QuadElem { a, b, field: *self }
    }

    pub fn from_ints(&self, a: i64, b: i64) -> QuadElem {
        self.elem(rat_int(a), rat_int(b))
    }

    pub fn from_rat(&self, a: Rat) -> QuadElem {
        self.elem(a, Rat::zero())
    }

    pub fn sqrt_d(&self) -> QuadElem {
        self.from_ints(0, 1)
    }

    pub fn zero(&self) -> QuadElem {
        self.from_ints(0, 0)
    }

    pub fn one(&self) -> QuadElem {
        self.from_ints(1, 0)
    }
}

impl fmt::Display for QuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(√{})", self.d)
    }
}

pub fn splitting_type(k: &QuadField, p: u64) -> SplitType {
    splitting_type_of(k.d, p)
}

/// Splitting of `p` in `ℚ(√d)`; `d` must already be squarefree.
pub fn splitting_type_of(d: i64, p: u64) -> SplitType {
    if p == 2 {
        return match d.rem_euclid(8) {
            1 => SplitType::Split,
            5 => SplitType::Inert,
            _ => SplitType::Ramified,
        };
    }
    match kronecker(d, p as i64).expect("p is nonzero") {
        0 => SplitType::Ramified,
        1 => SplitType::Split,
        _ => SplitType::Inert,
    }
}

/// `a + b√d`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadElem {
    a: Rat,
    b: Rat,
    field: QuadField,
}

impl QuadElem {
    pub fn a(&self) -> &Rat {
        &self.a
    }
    pub fn b(&self) -> &Rat {
        &self.b
    }
    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn conjugate(&self) -> QuadElem {
        QuadElem {
            a: self.a.clone(),
            b: -self.b.clone(),
            field: self.field,
        }
    }

    pub fn norm(&self) -> Rat {
        &self.a * &self.a - rat_int(self.field.d) * &self.b * &self.b
    }

    pub fn trace(&self) -> Rat {
        &self.a + &self.a
    }

    pub fn is_rational(&self) -> bool {
        Zero::is_zero(&self.b)
    }

    fn compatible(&self, other: &QuadElem) -> Result<(), QFieldError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(QFieldError::FieldMismatch(self.field.d, other.field.d))
        }
    }

    pub fn try_add(&self, other: &QuadElem) -> Result<QuadElem, QFieldError> {
        self.compatible(other)?;
        Ok(QuadElem {
            a: &self.a + &other.a,
            b: &self.b + &other.b,
            field: self.field,
        })
    }

    pub fn try_sub(&self, other: &QuadElem) -> Result<QuadElem, QFieldError> {
        self.compatible(other)?;
        Ok(QuadElem {
            a: &self.a - &other.a,
            b: &self.b - &other.b,
            field: self.field,
        })
    }

    pub fn try_mul(&self, other: &QuadElem) -> Result<QuadElem, QFieldError> {
        self.compatible(other)?;
        let d = rat_int(self.field.d);
        Ok(QuadElem {
            a: &self.a * &other.a + d * &self.b * &other.b,
            b: &self.a * &other.b + &self.b * &other.a,
            field: self.field,
        })
    }

    pub fn try_div(&self, other: &QuadElem) -> Result<QuadElem, QFieldError> {
        self.compatible(other)?;
        let inv = FieldElement::inv(other).ok_or(QFieldError::DivisionByZero)?;
        self.try_mul(&inv)
    }

    pub fn scale(&self, r: &Rat) -> QuadElem {
        QuadElem {
            a: &self.a * r,
            b: &self.b * r,
            field: self.field,
        }
    }

    /// Square root inside `ℚ(√d)`, if one exists.
    pub fn sqrt(&self) -> Option<QuadElem> {
        let k = self.field;
        let d = rat_int(k.d);
        if Zero::is_zero(&self.b) {
            if let Some(r) = rat_sqrt(&self.a) {
                return Some(k.from_rat(r));
            }
            // a = c²·d
            return rat_sqrt(&(&self.a / &d)).map(|c| k.elem(Rat::zero(), c));
        }
        // (x + y√d)² = a + b√d  ⇒  x² = (a ± √N)/2, N = a² − d b²
        let n = rat_sqrt(&self.norm())?;
        let two = rat_int(2);
        for cand in [(&self.a + &n) / &two, (&self.a - &n) / &two] {
            if let Some(x) = rat_sqrt(&cand) {
                if !Zero::is_zero(&x) {
                    let y = &self.b / (&two * &x);
                    let r = k.elem(x, y);
                    if r.clone() * r.clone() == *self {
                        return Some(r);
                    }
                }
            }
        }
        None
    }

    /// Minimal `p`-adic valuation over the two rational components.
    pub fn component_valuation(&self, p: u64) -> Option<i64> {
        match (rat_valuation(&self.a, p), rat_valuation(&self.b, p)) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        }
    }
}

impl fmt::Debug for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = format_rat(&self.a);
        if Zero::is_zero(&self.b) {
            return f.write_str(&a);
        }
        let b = format_rat(&self.b.abs());
        let sign = if self.b.is_negative() { "-" } else { "+" };
        if Zero::is_zero(&self.a) {
            let lead = if self.b.is_negative() { "-" } else { "" };
            write!(f, "{lead}({b})√{}", self.field.d)
        } else {
            write!(f, "{a} {sign} ({b})√{}", self.field.d)
        }
    }
}

impl Add for QuadElem {
    type Output = QuadElem;
    fn add(self, rhs: QuadElem) -> QuadElem {
        self.try_add(&rhs).expect("field mismatch")
    }
}

impl Sub for QuadElem {
    type Output = QuadElem;
    fn sub(self, rhs: QuadElem) -> QuadElem {
        self.try_sub(&rhs).expect("field mismatch")
    }
}

impl Mul for QuadElem {
    type Output = QuadElem;
    fn mul(self, rhs: QuadElem) -> QuadElem {
        self.try_mul(&rhs).expect("field mismatch")
    }
}

impl Neg for QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem {
            a: -self.a,
            b: -self.b,
            field: self.field,
        }
    }
}

impl FieldElement for QuadElem {
    fn zero_like(&self) -> Self {
        self.field.zero()
    }
    fn one_like(&self) -> Self {
        self.field.one()
    }
    fn from_int_like(&self, n: i64) -> Self {
        self.field.from_ints(n, 0)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.a) && Zero::is_zero(&self.b)
    }
    fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if Zero::is_zero(&n) {
            return None;
        }
        let c = self.conjugate();
        Some(QuadElem {
            a: c.a / &n,
            b: c.b / &n,
            field: self.field,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct QuadElemJson {
    a: String,
    b: String,
    d: i64,
}

impl Serialize for QuadElem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        QuadElemJson {
            a: format_rat(&self.a),
            b: format_rat(&self.b),
            d: self.field.d,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadElem {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = QuadElemJson::deserialize(de)?;
        let field = QuadField::new(j.d).map_err(D::Error::custom)?;
        let a = parse_rat(&j.a).map_err(D::Error::custom)?;
        let b = parse_rat(&j.b).map_err(D::Error::custom)?;
        Ok(field.elem(a, b))
    }
}

/// The field over which curves are considered: `ℚ` itself or a quadratic field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseField {
    Rationals,
    Quadratic(QuadField),
}

impl BaseField {
    pub fn quadratic(d: i64) -> Result<Self, QFieldError> {
        QuadField::new(d).map(BaseField::Quadratic)
    }

    /// Radicand, with `1` standing for `ℚ`.
    pub fn d(&self) -> i64 {
        match self {
            BaseField::Rationals => 1,
            BaseField::Quadratic(k) => k.d(),
        }
    }

    /// Residue degree of a prime above `p`: 2 when inert, else 1.
    pub fn residue_degree(&self, p: u64) -> u32 {
        match self {
            BaseField::Quadratic(k) if splitting_type(k, p) == SplitType::Inert => 2,
            _ => 1,
        }
    }

    pub fn context(&self, p: u64) -> Result<ReductionContext, QFieldError> {
        match self {
            BaseField::Rationals => ReductionContext::rational(p),
            BaseField::Quadratic(k) => reduction_context(k, p),
        }
    }
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseField::Rationals => f.write_str("Q"),
            BaseField::Quadratic(k) => write!(f, "{k}"),
        }
    }
}

/// Where the residue field of a prime above `p` lives, and the image of `√d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResidueTarget {
    Fp { sqrt_d: FpElem },
    Fp2 { field: Fp2Field, sqrt_d: Fp2Elem },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionContext {
    pub p: u64,
    /// For `ℚ` every prime is recorded as `Split` (residue degree 1).
    pub split_type: SplitType,
    pub target: ResidueTarget,
}

impl ReductionContext {
    /// Reduction of `ℚ` at `p`; the `√d` slot is unused and set to 0.
    pub fn rational(p: u64) -> Result<Self, QFieldError> {
        if !is_prime(p) {
            return Err(QFieldError::NotPrime(p));
        }
        Ok(ReductionContext {
            p,
            split_type: SplitType::Split,
            target: ResidueTarget::Fp {
                sqrt_d: FpElem::new(0, p),
            },
        })
    }

    pub fn residue_degree(&self) -> u32 {
        match self.target {
            ResidueTarget::Fp { .. } => 1,
            ResidueTarget::Fp2 { .. } => 2,
        }
    }

    /// Residue field size.
    pub fn q(&self) -> u64 {
        self.p.pow(self.residue_degree())
    }

    pub fn reduce_rat_fp(&self, r: &Rat) -> Option<FpElem> {
        rat_mod_p(r, self.p)
    }

    /// Image of `a + b√d` in `F_p`; `None` if a component is not `p`-integral
    /// or the target is `F_{p²}`.
    pub fn reduce_fp(&self, x: &QuadElem) -> Option<FpElem> {
        match &self.target {
            ResidueTarget::Fp { sqrt_d } => {
                Some(rat_mod_p(&x.a, self.p)? + rat_mod_p(&x.b, self.p)? * *sqrt_d)
            }
            ResidueTarget::Fp2 { .. } => None,
        }
    }

    pub fn reduce_fp2(&self, x: &QuadElem) -> Option<Fp2Elem> {
        match &self.target {
            ResidueTarget::Fp2 { field, sqrt_d } => {
                let a = field.embed(rat_mod_p(&x.a, self.p)?);
                let b = field.embed(rat_mod_p(&x.b, self.p)?);
                Some(a + b * sqrt_d.clone())
            }
            ResidueTarget::Fp { .. } => None,
        }
    }
}

pub fn reduction_context(k: &QuadField, p: u64) -> Result<ReductionContext, QFieldError> {
    if !is_prime(p) {
        return Err(QFieldError::NotPrime(p));
    }
    let split_type = splitting_type(k, p);
    let d_mod = FpElem::from_i64(k.d, p);
    let target = match split_type {
        SplitType::Split | SplitType::Ramified => ResidueTarget::Fp {
            sqrt_d: sqrt_mod_p(d_mod).expect("d is a square mod a split or ramified prime"),
        },
        SplitType::Inert => {
            let field = fp2_construct(p)?;
            // d = t·c² for the extension's non-residue t, so √d = c·ω
            let ratio = d_mod * field.non_residue().inv().expect("t is nonzero");
            let c = sqrt_mod_p(ratio).expect("d/t is a square when both are non-squares");
            let sqrt_d = field.embed(c) * field.omega();
            ResidueTarget::Fp2 { field, sqrt_d }
        }
    };
    Ok(ReductionContext {
        p,
        split_type,
        target,
    })
}

/// Sign of a big integer as an `i32`, for small helpers.
pub fn bigint_sign(n: &BigInt) -> i32 {
    match n.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}
