//! Reference values for the `X₁(13)` Jacobian and the fixture curves, checked
//! against fresh computations.

use serde::{Deserialize, Serialize};

use super::fixtures::{verify_fixtures, Fixture, FixtureReport};
use crate::ellcurve::reduce::DEFAULT_BOUND_PRIMES;
use crate::genus2::{jacobian_torsion_gcd_bound, zeta, HyperCurve};
use crate::modcurves::{record, CurveId, FactKind, Ledger};
use crate::qfield::{BaseField, QuadField};

/// `(p, ext, expected)`: `|J₁(13)(F_{p^ext})|`.
pub const X1_13_JACOBIAN_ORDERS: [(u64, u32, u64); 9] = [
    (3, 1, 19),
    (3, 2, 3 * 19),
    (5, 2, 19 * 19),
    (11, 2, 7 * 7 * 19 * 19),
    (17, 1, 4 * 3 * 19),
    (17, 2, 64 * 9 * 7 * 19),
    (29, 2, 64 * 9 * 19 * 61),
    (41, 2, 64 * 7 * 7 * 7 * 7 * 19),
    (47, 2, 256 * 49 * 19 * 19),
];

/// `(d, primes, expected)` for the gcd bound on `|J₁(13)(K)_tors|`.
pub const X1_13_GCD_BOUNDS: [(i64, [u64; 2], u64); 2] = [(5, [3, 47], 19), (-7, [3, 5], 19)];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenCheck {
    pub label: String,
    pub expected: u64,
    pub computed: Option<u64>,
    pub pass: bool,
}

fn check(label: String, expected: u64, computed: Option<u64>) -> GoldenCheck {
    GoldenCheck {
        label,
        expected,
        computed,
        pass: computed == Some(expected),
    }
}

pub fn jacobian_golden_checks() -> Vec<GoldenCheck> {
    let f = record(CurveId::X1_13)
        .hyperelliptic_poly()
        .expect("genus 2")
        .clone();
    X1_13_JACOBIAN_ORDERS
        .iter()
        .map(|&(p, ext, expected)| {
            let label = if ext == 1 {
                format!("|J1(13)(F_{p})|")
            } else {
                format!("|J1(13)(F_{p}^{ext})|")
            };
            let computed = HyperCurve::new(f.clone(), p)
                .and_then(|c| zeta(&c))
                .ok()
                .map(|z| {
                    if ext == 1 {
                        z.jacobian_order()
                    } else {
                        z.jacobian_order_ext()
                    }
                });
            check(label, expected, computed)
        })
        .collect()
}

pub fn gcd_bound_checks() -> Vec<GoldenCheck> {
    let f = record(CurveId::X1_13)
        .hyperelliptic_poly()
        .expect("genus 2")
        .clone();
    X1_13_GCD_BOUNDS
        .iter()
        .map(|&(d, primes, expected)| {
            let base = BaseField::Quadratic(QuadField::new(d).expect("squarefree"));
            let computed = jacobian_torsion_gcd_bound(&f, base, &primes)
                .ok()
                .map(|b| b.bound);
            check(
                format!("B(X1(13), Q(√{d}), {primes:?})"),
                expected,
                computed,
            )
        })
        .collect()
}

/// Ledger statements about Jacobian torsion over `ℚ` that a computed bound contradicts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inconsistency {
    pub curve: CurveId,
    pub stated: u64,
    pub computed_bound: u64,
    pub citation: String,
}

pub fn ledger_inconsistencies(ledger: &Ledger) -> Vec<Inconsistency> {
    let mut out = Vec::new();
    for id in [CurveId::X1_13, CurveId::X1_16, CurveId::X1_18] {
        let rec = record(id);
        let f = rec.hyperelliptic_poly().expect("genus 2");
        let Ok(b) = jacobian_torsion_gcd_bound(f, BaseField::Rationals, &DEFAULT_BOUND_PRIMES)
        else {
            continue;
        };
        for fact in ledger.facts(id, 1) {
            if let FactKind::JacobianTorsion(n) = fact.kind {
                if b.bound % n != 0 {
                    out.push(Inconsistency {
                        curve: id,
                        stated: n,
                        computed_bound: b.bound,
                        citation: fact.citation.clone(),
                    });
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub fixtures: Vec<FixtureReport>,
    pub jacobian_orders: Vec<GoldenCheck>,
    pub gcd_bounds: Vec<GoldenCheck>,
    /// Flagged, not failed.
    pub inconsistencies: Vec<Inconsistency>,
}

impl VerificationReport {
    pub fn run(fixtures: &[Fixture], ledger: &Ledger) -> Self {
        VerificationReport {
            fixtures: verify_fixtures(fixtures, ledger),
            jacobian_orders: jacobian_golden_checks(),
            gcd_bounds: gcd_bound_checks(),
            inconsistencies: ledger_inconsistencies(ledger),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.fixtures.iter().all(|f| f.pass)
            && self.jacobian_orders.iter().all(|c| c.pass)
            && self.gcd_bounds.iter().all(|c| c.pass)
    }
}
