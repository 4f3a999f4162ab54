//! Integer polynomials: evaluation in any coefficient domain, products and
//! the discriminant used for good-reduction decisions.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::ffield::FpElem;
use crate::field::FieldElement;

/// Coefficients in ascending degree order, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<i64>,
}

impl IntPoly {
    pub fn new(coeffs: &[i64]) -> Self {
        let mut coeffs = coeffs.to_vec();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    /// From coefficients listed highest degree first, as printed in equations.
    pub fn from_descending(coeffs: &[i64]) -> Self {
        let mut c = coeffs.to_vec();
        c.reverse();
        IntPoly::new(&c)
    }

    pub fn x() -> Self {
        IntPoly::new(&[0, 1])
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> i64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn eval<F: FieldElement>(&self, x: &F) -> F {
        let mut acc = x.zero_like();
        for &c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + x.from_int_like(c);
        }
        acc
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::new(&[]);
        }
        let mut out = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(&out)
    }

    pub fn product<'a>(factors: impl IntoIterator<Item = &'a IntPoly>) -> IntPoly {
        factors
            .into_iter()
            .fold(IntPoly::new(&[1]), |acc, f| acc.mul(f))
    }

    pub fn derivative(&self) -> IntPoly {
        let c: Vec<i64> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| i as i64 * c)
            .collect();
        IntPoly::new(&c)
    }

    pub fn reduce_mod(&self, p: u64) -> Vec<FpElem> {
        self.coeffs
            .iter()
            .map(|&c| FpElem::from_i64(c, p))
            .collect()
    }

    /// Rational roots, found among `±(divisor of a_0)/(divisor of a_n)`.
    pub fn rational_roots(&self) -> Vec<crate::qfield::Rat> {
        use crate::qfield::{rat, Rat};
        if self.is_zero() {
            return Vec::new();
        }
        let mut roots = Vec::new();
        let shift = self.coeffs.iter().take_while(|&&c| c == 0).count();
        if shift > 0 {
            roots.push(Rat::zero());
        }
        let trimmed = IntPoly::new(&self.coeffs[shift..]);
        let divisors = |n: i64| -> Vec<i64> {
            let n = n.abs();
            (1..=n).filter(|k| n % k == 0).collect()
        };
        let mut cands = Vec::new();
        for num in divisors(trimmed.coeffs[0]) {
            for den in divisors(trimmed.leading()) {
                cands.push(rat(num, den));
                cands.push(rat(-num, den));
            }
        }
        cands.sort();
        cands.dedup();
        for c in cands {
            if num_traits::Zero::is_zero(&trimmed.eval(&c)) {
                roots.push(c);
            }
        }
        roots.sort();
        roots
    }

    /// `disc(f) = (−1)^{n(n−1)/2} · Res(f, f') / a_n`.
    pub fn discriminant(&self) -> BigInt {
        let n = self.degree();
        if n == 0 {
            return BigInt::zero();
        }
        let res = resultant(&self.coeffs, &self.derivative().coeffs);
        let sign = if (n * (n - 1) / 2) % 2 == 1 {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        sign * res / BigInt::from(self.leading())
    }

    /// Good reduction of `y² = f(x)` at an odd prime: the degree survives and
    /// `disc(f) ≢ 0 (mod p)`.
    pub fn squarefree_mod(&self, p: u64) -> bool {
        if self.leading().rem_euclid(p as i64) == 0 {
            return false;
        }
        let d = self.discriminant() % BigInt::from(p);
        !d.is_zero()
    }
}

/// Sylvester-matrix resultant, evaluated with fraction-free elimination.
fn resultant(f: &[i64], g: &[i64]) -> BigInt {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for row in 0..n {
        for (i, &c) in f.iter().rev().enumerate() {
            mat[row][row + i] = BigInt::from(c);
        }
    }
    for row in 0..m {
        for (i, &c) in g.iter().rev().enumerate() {
            mat[n + row][row + i] = BigInt::from(c);
        }
    }
    bareiss_det(mat)
}

fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.unsigned_abs();
            match (i, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => f.write_str("x")?,
                (1, _) => write!(f, "{a}x")?,
                (_, 1) => write!(f, "x^{i}")?,
                _ => write!(f, "{a}x^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// Absolute value of a discriminant as `u64`, when it fits.
pub fn disc_abs_u64(d: &BigInt) -> Option<u64> {
    d.abs().to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::rat_int;

    #[test]
    fn discriminant_small_cases() {
        // x² + bx + c → b² − 4c
        assert_eq!(IntPoly::new(&[3, 5, 1]).discriminant(), BigInt::from(13));
        // x³ + ax + b → −4a³ − 27b²
        assert_eq!(
            IntPoly::new(&[1, 0, 0, 1]).discriminant(),
            BigInt::from(-27)
        );
        assert_eq!(
            IntPoly::new(&[0, 0, 0, 0, 0, 1]).discriminant(),
            BigInt::from(0)
        );
        // (x−1)(x−2)(x−3): product of squared differences = 4
        let f = IntPoly::new(&[-1, 1])
            .mul(&IntPoly::new(&[-2, 1]))
            .mul(&IntPoly::new(&[-3, 1]));
        assert_eq!(f.discriminant(), BigInt::from(4));
    }

    #[test]
    fn eval_and_roots() {
        let f = IntPoly::from_descending(&[1, -4, 1, 1]);
        assert_eq!(f.eval(&rat_int(2)), rat_int(-5));
        let g = IntPoly::product(&[IntPoly::x(), IntPoly::new(&[-1, 2]), IntPoly::new(&[1, 1])]);
        let roots: Vec<String> = g.rational_roots().iter().map(|r| r.to_string()).collect();
        assert_eq!(roots, vec!["-1", "0", "1/2"]);
        assert_eq!(g.to_string(), "2x^3 + x^2 - x");
    }
}
