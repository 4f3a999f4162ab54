//! Reduction of curves over `ℚ` or `ℚ(√d)` at an odd prime, residue point
//! counts, and the prime-to-p torsion bound.

use std::fmt;

use thiserror::Error;

use super::{EllCurve, EllError, EllPoint};
use crate::arith::prime_to_p_gcd;
use crate::ffield::{Fp2Elem, FpElem};
use crate::field::{FieldElement, FiniteField};
use crate::qfield::{
    rat_mod_p, rat_valuation, BaseField, QFieldError, QuadElem, Rat, ReductionContext, SplitType,
};

/// Odd primes tried when no explicit prime list is given.
pub const DEFAULT_BOUND_PRIMES: [u64; 24] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// Elements of a global field (`ℚ` or `ℚ(√d)`) that can be reduced at primes.
pub trait NumberFieldElement: FieldElement + fmt::Display {
    fn base_field(&self) -> BaseField;
    /// Minimal `p`-adic valuation of the rational components; `None` for zero.
    fn min_valuation(&self, p: u64) -> Option<i64>;
    fn scale(&self, r: &Rat) -> Self;
    fn reduce_fp(&self, ctx: &ReductionContext) -> Option<FpElem>;
    fn reduce_fp2(&self, ctx: &ReductionContext) -> Option<Fp2Elem>;
    /// Image in `F_ℓ` under the embedding sending `√d` to `sqrt_d`.
    fn image_mod(&self, ell: u64, sqrt_d: u64) -> Option<u64>;
    /// `(u + v√d)/w`; the `v` part is dropped over `ℚ`.
    fn from_box(&self, u: i64, v: i64, w: i64) -> Self;
    fn sqrt(&self) -> Option<Self>;
}

impl NumberFieldElement for Rat {
    fn base_field(&self) -> BaseField {
        BaseField::Rationals
    }
    fn min_valuation(&self, p: u64) -> Option<i64> {
        rat_valuation(self, p)
    }
    fn scale(&self, r: &Rat) -> Self {
        self * r
    }
    fn reduce_fp(&self, ctx: &ReductionContext) -> Option<FpElem> {
        rat_mod_p(self, ctx.p)
    }
    fn reduce_fp2(&self, _ctx: &ReductionContext) -> Option<Fp2Elem> {
        None
    }
    fn image_mod(&self, ell: u64, _sqrt_d: u64) -> Option<u64> {
        rat_mod_p(self, ell).map(|x| x.value())
    }
    fn from_box(&self, u: i64, _v: i64, w: i64) -> Self {
        Rat::new(u.into(), w.into())
    }
    fn sqrt(&self) -> Option<Self> {
        crate::qfield::rat_sqrt(self)
    }
}

impl NumberFieldElement for QuadElem {
    fn base_field(&self) -> BaseField {
        BaseField::Quadratic(self.field())
    }
    fn min_valuation(&self, p: u64) -> Option<i64> {
        self.component_valuation(p)
    }
    fn scale(&self, r: &Rat) -> Self {
        QuadElem::scale(self, r)
    }
    fn reduce_fp(&self, ctx: &ReductionContext) -> Option<FpElem> {
        ctx.reduce_fp(self)
    }
    fn reduce_fp2(&self, ctx: &ReductionContext) -> Option<Fp2Elem> {
        ctx.reduce_fp2(self)
    }
    fn image_mod(&self, ell: u64, sqrt_d: u64) -> Option<u64> {
        let a = rat_mod_p(self.a(), ell)?;
        let b = rat_mod_p(self.b(), ell)?;
        Some((a + b * FpElem::new(sqrt_d, ell)).value())
    }
    fn from_box(&self, u: i64, v: i64, w: i64) -> Self {
        let k = self.field();
        k.elem(Rat::new(u.into(), w.into()), Rat::new(v.into(), w.into()))
    }
    fn sqrt(&self) -> Option<Self> {
        QuadElem::sqrt(self)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReductionError {
    #[error("reduction at 2 is not used")]
    PrimeTwo,
    #[error("bad reduction at {p}: {reason}")]
    BadReduction { p: u64, reason: String },
    #[error(transparent)]
    Context(#[from] QFieldError),
}

#[derive(Clone, Debug, PartialEq)]
pub enum ResidueCurve {
    Fp(EllCurve<FpElem>),
    Fp2(EllCurve<Fp2Elem>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum ResiduePoint {
    Fp(EllPoint<FpElem>),
    Fp2(EllPoint<Fp2Elem>),
}

impl ResidueCurve {
    pub fn count_points(&self) -> u64 {
        match self {
            ResidueCurve::Fp(e) => count_points_elliptic(e).expect("good reduction"),
            ResidueCurve::Fp2(e) => count_points_elliptic(e).expect("good reduction"),
        }
    }

    pub fn add(&self, p: &ResiduePoint, q: &ResiduePoint) -> Option<ResiduePoint> {
        match (self, p, q) {
            (ResidueCurve::Fp(e), ResiduePoint::Fp(a), ResiduePoint::Fp(b)) => {
                Some(ResiduePoint::Fp(e.add(a, b)))
            }
            (ResidueCurve::Fp2(e), ResiduePoint::Fp2(a), ResiduePoint::Fp2(b)) => {
                Some(ResiduePoint::Fp2(e.add(a, b)))
            }
            _ => None,
        }
    }

    pub fn contains(&self, p: &ResiduePoint) -> bool {
        match (self, p) {
            (ResidueCurve::Fp(e), ResiduePoint::Fp(a)) => e.contains(a),
            (ResidueCurve::Fp2(e), ResiduePoint::Fp2(a)) => e.contains(a),
            _ => false,
        }
    }
}

/// A good reduction: the residue curve of the model rescaled by `x ↦ p^{2k}x`,
/// `y ↦ p^{3k}y`, where `k = scale_exp` clears `p` from all denominators.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub ctx: ReductionContext,
    pub scale_exp: u32,
    pub curve: ResidueCurve,
}

impl Reduction {
    pub fn q(&self) -> u64 {
        self.ctx.q()
    }

    /// Image of an affine point with `p`-integral rescaled coordinates, or
    /// `O`. Points whose coordinates keep `p` in a denominator return `None`.
    pub fn reduce_point<F: NumberFieldElement>(&self, pt: &EllPoint<F>) -> Option<ResiduePoint> {
        let p = self.ctx.p;
        match pt {
            EllPoint::Infinity => Some(match self.curve {
                ResidueCurve::Fp(_) => ResiduePoint::Fp(EllPoint::Infinity),
                ResidueCurve::Fp2(_) => ResiduePoint::Fp2(EllPoint::Infinity),
            }),
            EllPoint::Affine(x, y) => {
                let s2 = Rat::from_integer(num_bigint::BigInt::from(p).pow(2 * self.scale_exp));
                let s3 = Rat::from_integer(num_bigint::BigInt::from(p).pow(3 * self.scale_exp));
                let (x, y) = (x.scale(&s2), y.scale(&s3));
                match self.curve {
                    ResidueCurve::Fp(_) => Some(ResiduePoint::Fp(EllPoint::Affine(
                        x.reduce_fp(&self.ctx)?,
                        y.reduce_fp(&self.ctx)?,
                    ))),
                    ResidueCurve::Fp2(_) => Some(ResiduePoint::Fp2(EllPoint::Affine(
                        x.reduce_fp2(&self.ctx)?,
                        y.reduce_fp2(&self.ctx)?,
                    ))),
                }
            }
        }
    }
}

/// Reduces `e` through `ctx` after the smallest `p`-power rescaling that makes
/// every coefficient `p`-integral.
pub fn reduce_at<F: NumberFieldElement>(
    e: &EllCurve<F>,
    ctx: &ReductionContext,
) -> Result<Reduction, ReductionError> {
    let p = ctx.p;
    if p == 2 {
        return Err(ReductionError::PrimeTwo);
    }
    let weights = [1i64, 2, 3, 4, 6];
    let mut k = 0i64;
    for (a, w) in e.a_invariants().iter().zip(weights) {
        if let Some(v) = a.min_valuation(p) {
            if v < 0 {
                k = k.max((-v + w - 1) / w);
            }
        }
    }
    let scaled: Vec<F> = e
        .a_invariants()
        .iter()
        .zip(weights)
        .map(|(a, w)| {
            let factor = Rat::from_integer(num_bigint::BigInt::from(p).pow((w * k) as u32));
            a.scale(&factor)
        })
        .collect();
    let bad = |reason: &str| ReductionError::BadReduction {
        p,
        reason: reason.to_string(),
    };
    let curve = if ctx.residue_degree() == 1 {
        let c: Option<Vec<FpElem>> = scaled.iter().map(|a| a.reduce_fp(ctx)).collect();
        let c = c.ok_or_else(|| bad("coefficient not p-integral after rescaling"))?;
        let r = EllCurve::from_coeffs_unchecked(c[0], c[1], c[2], c[3], c[4]);
        if r.is_singular() {
            return Err(bad("reduced discriminant vanishes"));
        }
        ResidueCurve::Fp(r)
    } else {
        let c: Option<Vec<Fp2Elem>> = scaled.iter().map(|a| a.reduce_fp2(ctx)).collect();
        let c = c.ok_or_else(|| bad("coefficient not p-integral after rescaling"))?;
        let mut it = c.into_iter();
        let mut next = || it.next().expect("five coefficients");
        let r = EllCurve::from_coeffs_unchecked(next(), next(), next(), next(), next());
        if r.is_singular() {
            return Err(bad("reduced discriminant vanishes"));
        }
        ResidueCurve::Fp2(r)
    };
    Ok(Reduction {
        ctx: ctx.clone(),
        scale_exp: k as u32,
        curve,
    })
}

/// `#E(F_q)` by enumeration, including the point at infinity.
pub fn count_points_elliptic<F: FiniteField>(e: &EllCurve<F>) -> Result<u64, EllError> {
    if e.is_singular() {
        return Err(EllError::Singular);
    }
    let sample = e.a_invariants()[0].clone();
    let elements = sample.elements();
    if sample.characteristic() == 2 {
        let mut n = 1u64;
        for x in &elements {
            for y in &elements {
                if e.contains(&EllPoint::Affine(x.clone(), y.clone())) {
                    n += 1;
                }
            }
        }
        return Ok(n);
    }
    // (2y + h)² = h² + 4·rhs
    let poly = e.y_discriminant_poly();
    let mut n = 1u64;
    for x in &elements {
        let mut v = x.zero_like();
        for c in poly.iter().rev() {
            v = v * x.clone() + c.clone();
        }
        n += (1 + v.quadratic_character()) as u64;
    }
    Ok(n)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueCount {
    pub p: u64,
    pub split_type: SplitType,
    pub q: u64,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionBound {
    /// `|E(K)_tors|` divides this.
    pub bound: u64,
    pub counts: Vec<ResidueCount>,
    /// Primes skipped for bad reduction, with the reason.
    pub skipped: Vec<(u64, String)>,
}

/// Bound on `|E(K)_tors|` from good reductions at the given odd primes.
pub fn torsion_bound<F: NumberFieldElement>(
    e: &EllCurve<F>,
    primes: &[u64],
) -> Result<TorsionBound, EllError> {
    if primes.contains(&2) {
        return Err(EllError::PrimeTwo);
    }
    let base = e.a_invariants()[0].base_field();
    let mut counts = Vec::new();
    let mut skipped = Vec::new();
    for &p in primes {
        let ctx = match base.context(p) {
            Ok(c) => c,
            Err(err) => {
                skipped.push((p, err.to_string()));
                continue;
            }
        };
        match reduce_at(e, &ctx) {
            Ok(red) => counts.push(ResidueCount {
                p,
                split_type: ctx.split_type,
                q: ctx.q(),
                count: red.curve.count_points(),
            }),
            Err(err) => skipped.push((p, err.to_string())),
        }
    }
    let pairs: Vec<(u64, u64)> = counts.iter().map(|c| (c.p, c.count)).collect();
    let bound = prime_to_p_gcd(&pairs)
        .ok_or_else(|| EllError::InsufficientPrimes(counts.iter().map(|c| c.p).collect()))?;
    Ok(TorsionBound {
        bound,
        counts,
        skipped,
    })
}
