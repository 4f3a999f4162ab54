//! Genus-2 curves `y² = f(x)`: point counts over `F_p`, `F_{p²}` (and `F_{p⁴}`),
//! the zeta numerator, Jacobian orders and a gcd bound for Jacobian torsion
//! over a quadratic field.

use serde::Serialize;
use thiserror::Error;

use crate::arith::{is_prime, prime_to_p_gcd};
use crate::ffield::{fp2_construct, FiniteFieldError, Fp2Elem, FpElem, QuadExtField};
use crate::field::FiniteField;
use crate::poly::IntPoly;
use crate::qfield::{BaseField, SplitType};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Genus2Error {
    #[error("degree {0} is not 5 or 6")]
    Degree(usize),
    #[error("{0} is not an odd prime")]
    BadPrime(u64),
    #[error("f is singular modulo {0}")]
    Singular(u64),
    #[error("extension degree {0} is not supported")]
    Extension(u32),
    #[error("counts ({n1}, {n2}) over q = {q} give a non-integral c2")]
    NonIntegral { n1: u64, n2: u64, q: u64 },
    #[error("Weil bound violated over q = {q}: c1 = {c1}, c2 = {c2}")]
    Weil { q: u64, c1: i64, c2: i64 },
    #[error("need good reduction at two distinct odd primes, have {0:?}")]
    InsufficientPrimes(Vec<u64>),
    #[error(transparent)]
    Field(#[from] FiniteFieldError),
}

/// A squarefree integer model of degree 5 or 6 with good reduction at `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperCurve {
    f: IntPoly,
    p: u64,
}

impl HyperCurve {
    pub fn new(f: IntPoly, p: u64) -> Result<Self, Genus2Error> {
        if !(5..=6).contains(&f.degree()) {
            return Err(Genus2Error::Degree(f.degree()));
        }
        if p == 2 || !is_prime(p) {
            return Err(Genus2Error::BadPrime(p));
        }
        if !f.squarefree_mod(p) {
            return Err(Genus2Error::Singular(p));
        }
        Ok(HyperCurve { f, p })
    }

    pub fn f(&self) -> &IntPoly {
        &self.f
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

/// Projective points on the smooth model of `y² = f(x)` over the field of
/// `sample`: one point at infinity for odd degree, `1 + χ(lead)` for even.
pub fn count_points_over<F: FiniteField>(f: &IntPoly, sample: &F) -> u64 {
    let coeffs: Vec<F> = f
        .coeffs()
        .iter()
        .map(|&c| sample.from_int_like(c))
        .collect();
    let mut total: i64 = 0;
    for x in sample.elements() {
        let mut acc = sample.zero_like();
        for c in coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        total += 1 + acc.quadratic_character() as i64;
    }
    let lead = coeffs.last().expect("nonzero polynomial");
    let infinity = if f.degree() % 2 == 1 {
        1
    } else {
        1 + lead.quadratic_character() as i64
    };
    (total + infinity) as u64
}

/// `#C(F_{p^ext})` for `ext ∈ {1, 2, 4}`.
pub fn count_hyper_points(c: &HyperCurve, ext: u32) -> Result<u64, Genus2Error> {
    let p = c.p;
    match ext {
        1 => Ok(count_points_over(&c.f, &FpElem::new(0, p))),
        2 => {
            let k = fp2_construct(p)?;
            Ok(count_points_over(&c.f, &k.zero()))
        }
        4 => {
            let k = fp2_construct(p)?;
            let k4 = QuadExtField::<Fp2Elem>::over(&k.zero())?;
            Ok(count_points_over(&c.f, &k4.zero()))
        }
        e => Err(Genus2Error::Extension(e)),
    }
}

/// `P(T) = 1 + c1·T + c2·T² + q·c1·T³ + q²·T⁴`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ZetaNumerator {
    pub q: u64,
    pub c1: i64,
    pub c2: i64,
}

impl ZetaNumerator {
    pub fn eval(&self, t: i64) -> i64 {
        let q = self.q as i64;
        1 + self.c1 * t + self.c2 * t * t + q * self.c1 * t * t * t + q * q * t * t * t * t
    }

    /// `|J(F_q)|`.
    pub fn jacobian_order(&self) -> u64 {
        self.eval(1) as u64
    }

    /// `|J(F_{q²})| = P(1)·P(−1)`.
    pub fn jacobian_order_ext(&self) -> u64 {
        (self.eval(1) * self.eval(-1)) as u64
    }

    pub fn within_weil_bounds(&self) -> bool {
        let q = self.q as f64;
        let lo = (q.sqrt() - 1.0).powi(4) - 1e-6;
        let hi = (q.sqrt() + 1.0).powi(4) + 1e-6;
        let in_range = |v: i64| (v as f64) >= lo && (v as f64) <= hi;
        (self.c1 * self.c1) as u64 <= 16 * self.q
            && self.c2.unsigned_abs() <= 6 * self.q
            && in_range(self.eval(1))
            && in_range(self.eval(-1))
    }
}

pub fn zeta_from_counts(n1: u64, n2: u64, q: u64) -> Result<ZetaNumerator, Genus2Error> {
    let c1 = n1 as i64 - (q as i64 + 1);
    let s1 = -c1;
    let s2 = (q * q + 1) as i64 - n2 as i64;
    let twice = s1 * s1 - s2;
    if twice % 2 != 0 {
        return Err(Genus2Error::NonIntegral { n1, n2, q });
    }
    let z = ZetaNumerator {
        q,
        c1,
        c2: twice / 2,
    };
    if !z.within_weil_bounds() {
        return Err(Genus2Error::Weil { q, c1, c2: z.c2 });
    }
    Ok(z)
}

pub fn zeta(c: &HyperCurve) -> Result<ZetaNumerator, Genus2Error> {
    zeta_from_counts(count_hyper_points(c, 1)?, count_hyper_points(c, 2)?, c.p)
}

/// Zeta numerator of the base change to `F_{p²}`, from counts over `F_{p²}`
/// and `F_{p⁴}`.
pub fn zeta_base_change(c: &HyperCurve) -> Result<ZetaNumerator, Genus2Error> {
    zeta_from_counts(
        count_hyper_points(c, 2)?,
        count_hyper_points(c, 4)?,
        c.p * c.p,
    )
}

pub fn jacobian_order(c: &HyperCurve) -> Result<u64, Genus2Error> {
    Ok(zeta(c)?.jacobian_order())
}

pub fn jacobian_order_ext(c: &HyperCurve) -> Result<u64, Genus2Error> {
    Ok(zeta(c)?.jacobian_order_ext())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JacobianCount {
    pub p: u64,
    pub split_type: SplitType,
    /// Size of the residue field used.
    pub q: u64,
    pub order: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JacobianBound {
    pub bound: u64,
    pub counts: Vec<JacobianCount>,
    pub skipped: Vec<u64>,
}

/// Bound `B` with `|J(K)_tors|` dividing `B`, from the prime-to-`p` parts of
/// `|J(F_p)|` (split, ramified) or `|J(F_{p²})|` (inert).
pub fn jacobian_torsion_gcd_bound(
    f: &IntPoly,
    base: BaseField,
    primes: &[u64],
) -> Result<JacobianBound, Genus2Error> {
    let mut counts = Vec::new();
    let mut skipped = Vec::new();
    for &p in primes {
        if p == 2 || !is_prime(p) {
            return Err(Genus2Error::BadPrime(p));
        }
        let c = match HyperCurve::new(f.clone(), p) {
            Ok(c) => c,
            Err(Genus2Error::Singular(_)) => {
                skipped.push(p);
                continue;
            }
            Err(e) => return Err(e),
        };
        let split_type = match base {
            BaseField::Rationals => SplitType::Split,
            BaseField::Quadratic(k) => crate::qfield::splitting_type(&k, p),
        };
        let z = zeta(&c)?;
        let (q, order) = match split_type {
            SplitType::Inert => (p * p, z.jacobian_order_ext()),
            _ => (p, z.jacobian_order()),
        };
        counts.push(JacobianCount {
            p,
            split_type,
            q,
            order,
        });
    }
    let pairs: Vec<(u64, u64)> = counts.iter().map(|c| (c.p, c.order)).collect();
    match prime_to_p_gcd(&pairs) {
        Some(bound) => Ok(JacobianBound {
            bound,
            counts,
            skipped,
        }),
        None => Err(Genus2Error::InsufficientPrimes(
            counts.iter().map(|c| c.p).collect(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldElement;

    fn x1_13() -> IntPoly {
        IntPoly::from_descending(&[1, -2, 1, -2, 6, -4, 1])
    }

    fn x1_18() -> IntPoly {
        IntPoly::from_descending(&[1, 2, 5, 10, 10, 4, 1])
    }

    fn brute(f: &IntPoly, p: u64) -> u64 {
        let mut n = 0;
        for x in 0..p {
            let v = f.eval(&FpElem::new(x, p));
            for y in 0..p {
                if FpElem::new(y, p).square() == v {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn x1_13_small_primes() {
        let c = HyperCurve::new(x1_13(), 3).unwrap();
        assert_eq!(jacobian_order(&c).unwrap(), 19);
        assert_eq!(jacobian_order_ext(&c).unwrap(), 57);
        let c = HyperCurve::new(x1_13(), 17).unwrap();
        assert_eq!(jacobian_order(&c).unwrap(), 228);
    }

    #[test]
    fn affine_counts_match_enumeration() {
        for p in [3u64, 5, 7, 11] {
            for f in [x1_13(), x1_18()] {
                let Ok(c) = HyperCurve::new(f.clone(), p) else {
                    continue;
                };
                let n = count_hyper_points(&c, 1).unwrap();
                let lead = FpElem::from_i64(f.leading(), p);
                let inf = 1 + lead.quadratic_character() as i64;
                assert_eq!(n as i64, brute(&f, p) as i64 + inf);
            }
        }
    }

    #[test]
    fn quintic_has_one_point_at_infinity() {
        let f = IntPoly::from_descending(&[1, 2, 0, 2, -1, 0]);
        let c = HyperCurve::new(f.clone(), 3).unwrap();
        assert_eq!(count_hyper_points(&c, 1).unwrap(), brute(&f, 3) + 1);
    }

    #[test]
    fn rejects_singular_and_wrong_degree() {
        let f = IntPoly::from_descending(&[1, 0, 0, 0, 0, 0]);
        assert_eq!(HyperCurve::new(f, 7), Err(Genus2Error::Singular(7)));
        assert_eq!(
            HyperCurve::new(IntPoly::new(&[1, 0, 0, 1]), 7),
            Err(Genus2Error::Degree(3))
        );
        assert_eq!(HyperCurve::new(x1_13(), 13), Err(Genus2Error::Singular(13)));
    }

    #[test]
    fn symmetric_counts() {
        let z = zeta_from_counts(6, 50, 7).unwrap();
        assert_eq!((z.c1, z.c2), (-2, 2));
        let z = zeta_from_counts(8, 50, 7).unwrap();
        assert_eq!((z.c1, z.c2), (0, 0));
        assert_eq!(z.jacobian_order(), 50);
        assert!(zeta_from_counts(8, 51, 7).is_err());
    }

    #[test]
    fn elliptic_bridge() {
        // y² = x³ + 1 over F5 has 6 points
        assert_eq!(
            count_points_over(&IntPoly::new(&[1, 0, 0, 1]), &FpElem::new(0, 5)),
            6
        );
    }

    #[test]
    fn gcd_bound_needs_two_primes() {
        let err = jacobian_torsion_gcd_bound(&x1_13(), BaseField::Rationals, &[3, 13]).unwrap_err();
        assert_eq!(err, Genus2Error::InsufficientPrimes(vec![3]));
        let b = jacobian_torsion_gcd_bound(&x1_13(), BaseField::Rationals, &[3, 5, 13]).unwrap();
        assert_eq!(b.bound, 19);
        assert_eq!(b.skipped, vec![13]);
    }
}
