//! The bit-vector ordering ψ of quadratic fields and the density of fields
//! excluded from `ℤ/18ℤ` by Kenku–Momose.
//!
//! `ψ(ℚ(√d)) = Σ αᵢ 2ⁱ` where `α₀` is the exponent of `−1` in `d` and `αᵢ`
//! (`i ≥ 1`) that of the `i`-th prime.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::factorize;
use crate::modcurves::{kenku_momose_conditions_of, KmCondition};

const SIEVE_LIMIT: usize = 2_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DensityError {
    #[error("{0} is not a squarefree integer other than 0 and 1")]
    InvalidD(BigInt),
    #[error("ψ index must be positive")]
    ZeroIndex,
    #[error("prime beyond the sieve limit {SIEVE_LIMIT}")]
    TooLarge,
}

fn primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut composite = vec![false; SIEVE_LIMIT + 1];
        let mut out = Vec::new();
        for i in 2..=SIEVE_LIMIT {
            if !composite[i] {
                out.push(i as u64);
                let mut j = i * i;
                while j <= SIEVE_LIMIT {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        out
    })
}

/// Prime factors of `|d|` with exponents, by trial division over the sieve.
fn factor_big(n: &BigUint) -> Result<Vec<(u64, u32)>, DensityError> {
    if let Some(small) = n.to_u64() {
        return Ok(factorize(small));
    }
    let mut rest = n.clone();
    let mut out = Vec::new();
    for &p in primes() {
        if let Some(small) = rest.to_u64() {
            out.extend(factorize(small));
            return Ok(out);
        }
        let bp = BigUint::from(p);
        let mut e = 0;
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    Err(DensityError::TooLarge)
}

/// `ψ(ℚ(√d))`.
pub fn psi(d: &BigInt) -> Result<BigUint, DensityError> {
    let invalid = || DensityError::InvalidD(d.clone());
    if d.is_zero() || d.is_one() {
        return Err(invalid());
    }
    let mut n = BigUint::zero();
    if d.sign() == Sign::Minus {
        n.set_bit(0, true);
    }
    for (p, e) in factor_big(d.magnitude())? {
        if e > 1 {
            return Err(invalid());
        }
        if p > SIEVE_LIMIT as u64 {
            return Err(DensityError::TooLarge);
        }
        let idx = primes().binary_search(&p).expect("sieved prime");
        n.set_bit(idx as u64 + 1, true);
    }
    Ok(n)
}

pub fn psi_i64(d: i64) -> Result<BigUint, DensityError> {
    psi(&BigInt::from(d))
}

/// The squarefree `d` with `ψ(ℚ(√d)) = n`.
pub fn psi_inverse(n: &BigUint) -> Result<BigInt, DensityError> {
    if n.is_zero() {
        return Err(DensityError::ZeroIndex);
    }
    let mut d = BigInt::one();
    if n.bit(0) {
        d = -d;
    }
    for i in 1..n.bits() {
        if n.bit(i) {
            let p = primes().get(i as usize - 1).ok_or(DensityError::TooLarge)?;
            d *= *p;
        }
    }
    Ok(d)
}

pub fn psi_inverse_u64(n: u64) -> Result<BigInt, DensityError> {
    psi_inverse(&BigUint::from(n))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityScan {
    pub t: u64,
    /// Fields with `ψ ≤ t` satisfying some Kenku–Momose condition.
    #[serde(rename = "N_t")]
    pub n_t: u64,
    #[serde(rename = "A_t")]
    pub a_t: u64,
    pub ratio: f64,
    pub frac_i: f64,
    pub frac_ii: f64,
    pub frac_iii: f64,
    /// Fields satisfying both (i) and (ii).
    pub overlap_i_ii: u64,
}

#[derive(Clone, Copy, Debug, Default)]
struct Tally {
    any: u64,
    i: u64,
    ii: u64,
    iii: u64,
    both: u64,
}

impl Tally {
    fn merge(self, o: Tally) -> Tally {
        Tally {
            any: self.any + o.any,
            i: self.i + o.i,
            ii: self.ii + o.ii,
            iii: self.iii + o.iii,
            both: self.both + o.both,
        }
    }
}

fn tally_range(lo: u64, hi: u64) -> Result<Tally, DensityError> {
    let mut t = Tally::default();
    for n in lo..=hi {
        let d = psi_inverse_u64(n)?.to_i64().ok_or(DensityError::TooLarge)?;
        let c = kenku_momose_conditions_of(d);
        let has = |x| c.contains(&x);
        t.any += !c.is_empty() as u64;
        t.i += has(KmCondition::I) as u64;
        t.ii += has(KmCondition::II) as u64;
        t.iii += has(KmCondition::III) as u64;
        t.both += (has(KmCondition::I) && has(KmCondition::II)) as u64;
    }
    Ok(t)
}

/// Kenku–Momose counts over the first `t` fields in ψ order.
pub fn density_scan(t: u64) -> Result<DensityScan, DensityError> {
    if t == 0 {
        return Err(DensityError::ZeroIndex);
    }
    let chunks = std::thread::available_parallelism()
        .map(|n| n.get() as u64)
        .unwrap_or(1)
        .min(t);
    let step = t.div_ceil(chunks);
    let tally = std::thread::scope(|s| {
        let handles: Vec<_> = (0..chunks)
            .map(|c| {
                let lo = 1 + c * step;
                let hi = ((c + 1) * step).min(t);
                s.spawn(move || {
                    if lo > hi {
                        Ok(Tally::default())
                    } else {
                        tally_range(lo, hi)
                    }
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("scan thread"))
            .try_fold(Tally::default(), |acc, r| r.map(|x| acc.merge(x)))
    })?;
    let f = |x: u64| x as f64 / t as f64;
    Ok(DensityScan {
        t,
        n_t: tally.any,
        a_t: t,
        ratio: f(tally.any),
        frac_i: f(tally.i),
        frac_ii: f(tally.ii),
        frac_iii: f(tally.iii),
        overlap_i_ii: tally.both,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(psi_i64(-1).unwrap(), BigUint::from(1u32));
        assert_eq!(psi_i64(-30).unwrap(), BigUint::from(15u32));
        assert_eq!(psi_i64(33).unwrap(), BigUint::from(36u32));
        assert_eq!(psi_inverse_u64(6).unwrap(), BigInt::from(6));
        assert_eq!(psi_inverse_u64(36).unwrap(), BigInt::from(33));
    }

    #[test]
    fn rejects_invalid() {
        assert!(psi_i64(0).is_err());
        assert!(psi_i64(1).is_err());
        assert!(psi_i64(12).is_err());
        assert_eq!(psi_inverse_u64(0), Err(DensityError::ZeroIndex));
    }

    #[test]
    fn large_prime_index() {
        let d = BigInt::from(99991);
        assert_eq!(psi_inverse(&psi(&d).unwrap()).unwrap(), d);
    }

    #[test]
    fn coverage_is_an_initial_segment() {
        for t in [1u64, 7, 100, 1024] {
            let got: std::collections::BTreeSet<BigInt> =
                (1..=t).map(|n| psi_inverse_u64(n).unwrap()).collect();
            assert_eq!(got.len() as u64, t);
            let slots = 64 - t.leading_zeros();
            for d in &got {
                let n = psi(d).unwrap();
                assert!(n.bits() <= slots as u64 && n <= BigUint::from(t));
            }
        }
    }

    #[test]
    fn scan_of_one() {
        let s = density_scan(1).unwrap();
        assert_eq!(s.a_t, 1);
        assert_eq!(psi_inverse_u64(1).unwrap(), BigInt::from(-1));
    }
}
