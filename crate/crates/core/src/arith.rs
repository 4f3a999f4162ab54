//! Small-integer helpers: primality, factorization, valuations and the
//! prime-to-p gcd combination shared by the elliptic and Jacobian bounds.

use std::collections::BTreeSet;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut f = 3u64;
    while f * f <= n {
        if n.is_multiple_of(f) {
            return false;
        }
        f += 2;
    }
    true
}

/// Primes in `[lo, hi]`, ascending.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}

/// Prime factorization by trial division, ascending primes with exponents.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut f = 2u64;
    while f * f <= n {
        if n.is_multiple_of(f) {
            let mut e = 0;
            while n.is_multiple_of(f) {
                n /= f;
                e += 1;
            }
            out.push((f, e));
        }
        f += if f == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn valuation(mut n: u64, p: u64) -> u32 {
    debug_assert!(p >= 2 && n != 0);
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Combines residue-field group orders into a bound on a global torsion order.
///
/// Each entry `(p, n)` says the prime-to-`p` part of the torsion order divides
/// `n`. The result is `prod_l l^e(l)` where `e(l)` is the minimum of `v_l(n)`
/// over the entries whose characteristic differs from `l`. Returns `None` when
/// fewer than two distinct characteristics are present, since the `p`-part is
/// then uncontrolled.
pub fn prime_to_p_gcd(counts: &[(u64, u64)]) -> Option<u64> {
    let chars: BTreeSet<u64> = counts.iter().map(|&(p, _)| p).collect();
    if chars.len() < 2 || counts.iter().any(|&(_, n)| n == 0) {
        return None;
    }
    let ells: BTreeSet<u64> = counts
        .iter()
        .flat_map(|&(_, n)| factorize(n).into_iter().map(|(l, _)| l))
        .collect();
    let mut bound = 1u64;
    for l in ells {
        let e = counts
            .iter()
            .filter(|&&(p, _)| p != l)
            .map(|&(_, n)| valuation(n, l))
            .min()
            .unwrap_or(0);
        bound *= l.pow(e);
    }
    Some(bound)
}

/// Human-readable factorization, e.g. `2^6·3^2·19·61`.
pub fn format_factored(n: u64) -> String {
    if n == 1 {
        return "1".to_string();
    }
    factorize(n)
        .into_iter()
        .map(|(p, e)| {
            if e == 1 {
                p.to_string()
            } else {
                format!("{p}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join("·")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        assert_eq!(
            primes_between(1, 30),
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
        );
        assert!(!is_prime(1));
        assert!(is_prime(2209 / 47));
    }

    #[test]
    fn factorization_roundtrip() {
        for n in 1..2000u64 {
            let prod: u64 = factorize(n).iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(prod, n);
        }
        assert_eq!(format_factored(2u64.pow(6) * 9 * 19 * 61), "2^6·3^2·19·61");
    }

    #[test]
    fn gcd_combination_drops_own_characteristic() {
        // 57 = 3·19 at p = 3, 2^8·7^2·19^2 at p = 47
        assert_eq!(prime_to_p_gcd(&[(3, 57), (47, 4_528_384)]), Some(19));
        assert_eq!(prime_to_p_gcd(&[(3, 57), (5, 361)]), Some(19));
        assert_eq!(prime_to_p_gcd(&[(3, 57)]), None);
        assert_eq!(prime_to_p_gcd(&[(3, 57), (3, 19)]), None);
    }
}
