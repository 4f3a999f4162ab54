//! Explicit curves with large torsion, and their verification.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ellcurve::torsion::torsion_certify;
use crate::ellcurve::{EllCurve, EllPoint, PointOrder, TorsionGroup, DEFAULT_ORDER_CAP};
use crate::modcurves::{FactEntry, FactKind, Ledger};
use crate::qfield::{QuadElem, QuadField, Rat};

const DEFAULT_FIXTURES: &str = include_str!("../../data/fixtures.json");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixturePoint {
    pub x: QuadElem,
    pub y: QuadElem,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fixture {
    pub name: String,
    pub d: i64,
    pub a1: QuadElem,
    pub a2: QuadElem,
    pub a3: QuadElem,
    pub a4: QuadElem,
    pub a6: QuadElem,
    pub points: Vec<FixturePoint>,
    pub claimed_group: TorsionGroup,
    /// The sentence the curve was taken from.
    pub quote: String,
    /// Points exactly as printed, when `points` holds a correction.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub printed_points: Vec<FixturePoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correction: Option<String>,
}

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("cannot read fixtures {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed fixture file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("fixture {name}: {reason}")]
    Malformed { name: String, reason: String },
}

impl Fixture {
    pub fn field(&self) -> QuadField {
        self.a1.field()
    }

    fn coeffs(&self) -> [&QuadElem; 5] {
        [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6]
    }

    pub fn curve(&self) -> Result<EllCurve<QuadElem>, FixtureError> {
        let [a1, a2, a3, a4, a6] = self.coeffs().map(|c| c.clone());
        EllCurve::new(a1, a2, a3, a4, a6).map_err(|e| FixtureError::Malformed {
            name: self.name.clone(),
            reason: e.to_string(),
        })
    }

    /// The first listed point, as printed.
    pub fn point_string(&self) -> String {
        self.points
            .first()
            .map(|p| format!("({}, {})", p.x, p.y))
            .unwrap_or_default()
    }

    fn validate(&self) -> Result<(), FixtureError> {
        let bad = |reason: String| FixtureError::Malformed {
            name: self.name.clone(),
            reason,
        };
        if self.coeffs().iter().any(|c| c.field().d() != self.d) {
            return Err(bad(format!("coefficients not all in Q(√{})", self.d)));
        }
        if self.points.is_empty() {
            return Err(bad("no points".into()));
        }
        for p in &self.points {
            if p.x.field() != p.y.field() {
                return Err(bad("point coordinates lie in different fields".into()));
            }
        }
        Ok(())
    }
}

pub fn parse_fixtures(text: &str) -> Result<Vec<Fixture>, FixtureError> {
    let fixtures: Vec<Fixture> = serde_json::from_str(text)?;
    for f in &fixtures {
        f.validate()?;
    }
    Ok(fixtures)
}

pub fn load_fixtures(path: &Path) -> Result<Vec<Fixture>, FixtureError> {
    let text = std::fs::read_to_string(path).map_err(|source| FixtureError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_fixtures(&text)
}

/// The shipped fixture curves.
pub fn builtin_fixtures() -> Vec<Fixture> {
    parse_fixtures(DEFAULT_FIXTURES).expect("shipped fixtures parse")
}

/// `c0 + c1·s + c2·t + c3·st` with `s² = d1`, `t² = d2`.
#[derive(Clone, Debug, PartialEq)]
struct Biquad {
    d1: i64,
    d2: i64,
    c: [Rat; 4],
}

impl Biquad {
    fn from_s(x: &QuadElem, d2: i64) -> Self {
        let z = Rat::from_integer(0.into());
        Biquad {
            d1: x.field().d(),
            d2,
            c: [x.a().clone(), x.b().clone(), z.clone(), z],
        }
    }

    fn from_t(x: &QuadElem, d1: i64) -> Self {
        let z = Rat::from_integer(0.into());
        Biquad {
            d1,
            d2: x.field().d(),
            c: [x.a().clone(), z.clone(), x.b().clone(), z],
        }
    }

    fn add(&self, o: &Biquad) -> Biquad {
        let mut c = self.c.clone();
        for (ci, oi) in c.iter_mut().zip(&o.c) {
            *ci += oi;
        }
        Biquad { c, ..*self }
    }

    fn mul(&self, o: &Biquad) -> Biquad {
        let (a, b) = (&self.c, &o.c);
        let d1 = Rat::from_integer(self.d1.into());
        let d2 = Rat::from_integer(self.d2.into());
        let c0 =
            &a[0] * &b[0] + &d1 * &a[1] * &b[1] + &d2 * &a[2] * &b[2] + &d1 * &d2 * &a[3] * &b[3];
        let c1 = &a[0] * &b[1] + &a[1] * &b[0] + &d2 * (&a[2] * &b[3] + &a[3] * &b[2]);
        let c2 = &a[0] * &b[2] + &a[2] * &b[0] + &d1 * (&a[1] * &b[3] + &a[3] * &b[1]);
        let c3 = &a[0] * &b[3] + &a[3] * &b[0] + &a[1] * &b[2] + &a[2] * &b[1];
        Biquad {
            c: [c0, c1, c2, c3],
            ..*self
        }
    }

    fn is_zero(&self) -> bool {
        self.c.iter().all(num_traits::Zero::is_zero)
    }
}

/// Whether `(x, y)` with coordinates in `ℚ(√d2)` lies on a curve over `ℚ(√d1)`,
/// computed in the compositum.
fn on_curve_in_compositum(coeffs: [&QuadElem; 5], x: &QuadElem, y: &QuadElem) -> bool {
    let d1 = coeffs[0].field().d();
    let d2 = x.field().d();
    let [a1, a2, a3, a4, a6] = coeffs.map(|c| Biquad::from_s(c, d2));
    let (x, y) = (Biquad::from_t(x, d1), Biquad::from_t(y, d1));
    let neg = |b: &Biquad| Biquad {
        c: b.c.clone().map(|c| -c),
        ..*b
    };
    let x2 = x.mul(&x);
    let lhs = y.mul(&y).add(&a1.mul(&x).mul(&y)).add(&a3.mul(&y));
    let rhs = x2.mul(&x).add(&a2.mul(&x2)).add(&a4.mul(&x)).add(&a6);
    lhs.add(&neg(&rhs)).is_zero()
}

/// Outcome of testing both readings of a point printed over another field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReadingCheck {
    pub printed_d: i64,
    pub curve_d: i64,
    /// The coordinates taken literally, in the compositum.
    pub printed_reading_on_curve: bool,
    /// The same rational parts with `√printed_d` replaced by `√curve_d`.
    pub curve_reading_on_curve: bool,
    /// The radicand of the reading kept, if any holds.
    pub chosen: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureReport {
    pub name: String,
    pub d: i64,
    pub claimed: TorsionGroup,
    pub on_curve: bool,
    /// Certified order of each listed point; `None` past the order cap.
    pub orders: Vec<Option<u32>>,
    pub generated: Option<TorsionGroup>,
    /// `|E(K)_tors|` divides this.
    pub torsion_upper_bound: Option<u64>,
    /// The listed points generate all of `E(K)_tors`.
    pub torsion_exact: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reading: Option<ReadingCheck>,
    /// Whether the printed points lie on the curve, when a correction is used.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub printed_on_curve: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correction: Option<String>,
    /// Imported statements about curves with this group over this field.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub imported: Vec<FactEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub pass: bool,
}

/// Points moved into the curve's field, resolving a printed radicand that
/// differs from the curve's by testing both readings.
pub fn resolve_points(f: &Fixture) -> (Vec<FixturePoint>, Option<ReadingCheck>, bool) {
    let k = f.field();
    let mut check = None;
    let mut ok = true;
    let mut out = Vec::new();
    for p in &f.points {
        if p.x.field() == k {
            out.push(p.clone());
            continue;
        }
        let printed_d = p.x.field().d();
        let printed = on_curve_in_compositum(f.coeffs(), &p.x, &p.y);
        let moved = FixturePoint {
            x: k.elem(p.x.a().clone(), p.x.b().clone()),
            y: k.elem(p.y.a().clone(), p.y.b().clone()),
        };
        let curve_reading = f
            .curve()
            .map(|e| e.contains(&EllPoint::Affine(moved.x.clone(), moved.y.clone())))
            .unwrap_or(false);
        let chosen = if curve_reading {
            Some(k.d())
        } else if printed {
            Some(printed_d)
        } else {
            None
        };
        check = Some(ReadingCheck {
            printed_d,
            curve_d: k.d(),
            printed_reading_on_curve: printed,
            curve_reading_on_curve: curve_reading,
            chosen,
        });
        if curve_reading {
            out.push(moved);
        } else {
            // a compositum point cannot be certified over K
            ok = false;
        }
    }
    (out, check, ok)
}

pub fn verify_fixture(f: &Fixture, ledger: &Ledger) -> FixtureReport {
    let imported: Vec<FactEntry> = ledger
        .group_facts(f.claimed_group, f.d)
        .into_iter()
        .filter(|e| matches!(e.kind, FactKind::CurvesHaveRankZero))
        .cloned()
        .collect();
    let mut report = FixtureReport {
        name: f.name.clone(),
        d: f.d,
        claimed: f.claimed_group,
        on_curve: false,
        orders: Vec::new(),
        generated: None,
        torsion_upper_bound: None,
        torsion_exact: false,
        reading: None,
        printed_on_curve: None,
        correction: f.correction.clone(),
        imported,
        error: None,
        pass: false,
    };
    let e = match f.curve() {
        Ok(e) => e,
        Err(err) => {
            report.error = Some(err.to_string());
            return report;
        }
    };
    if !f.printed_points.is_empty() {
        let printed = f.printed_points.iter().all(|p| {
            p.x.field() == f.field() && e.contains(&EllPoint::Affine(p.x.clone(), p.y.clone()))
        });
        report.printed_on_curve = Some(printed);
    }
    let (points, reading, resolved) = resolve_points(f);
    report.reading = reading;
    let points: Vec<EllPoint<QuadElem>> = points
        .into_iter()
        .map(|p| EllPoint::Affine(p.x, p.y))
        .collect();
    report.on_curve = resolved && points.iter().all(|p| e.contains(p));
    if !report.on_curve {
        report.error = Some("listed point is not on the curve".into());
        return report;
    }
    for p in &points {
        report
            .orders
            .push(match e.point_order(p, DEFAULT_ORDER_CAP) {
                Ok(PointOrder::Finite(n)) => Some(n),
                _ => None,
            });
    }
    match torsion_certify(&e, &points, None) {
        Ok(cert) => {
            report.generated = Some(cert.lower);
            report.torsion_upper_bound = Some(cert.upper_order);
            report.torsion_exact = cert.exact();
        }
        Err(err) => report.error = Some(err.to_string()),
    }
    let orders_ok = match f.claimed_group.m() {
        1 => report.orders == vec![Some(f.claimed_group.n())],
        _ => report
            .orders
            .iter()
            .all(|o| o.is_some_and(|n| f.claimed_group.n().is_multiple_of(n))),
    };
    report.pass = orders_ok && report.generated == Some(f.claimed_group);
    report
}

pub fn verify_fixtures(fixtures: &[Fixture], ledger: &Ledger) -> Vec<FixtureReport> {
    let names: BTreeSet<&str> = fixtures.iter().map(|f| f.name.as_str()).collect();
    debug_assert_eq!(names.len(), fixtures.len(), "fixture names are unique");
    fixtures.iter().map(|f| verify_fixture(f, ledger)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_fixtures_parse() {
        let fx = builtin_fixtures();
        assert_eq!(fx.len(), 11);
        assert!(fx.iter().all(|f| !f.quote.is_empty()));
    }

    #[test]
    fn biquadratic_product() {
        // (√2 + √3)² = 5 + 2√6
        let k2 = QuadField::new(2).unwrap();
        let s = Biquad::from_s(&k2.from_ints(0, 1), 3);
        let t = Biquad::from_t(&QuadField::new(3).unwrap().from_ints(0, 1), 2);
        let u = s.add(&t);
        let sq = u.mul(&u);
        assert_eq!(sq.c, [5, 0, 0, 2].map(|n: i64| Rat::from_integer(n.into())));
    }

    #[test]
    fn thirteen_torsion_point_reads_over_sqrt17() {
        let f = builtin_fixtures()
            .into_iter()
            .find(|f| f.name == "order13")
            .unwrap();
        let r = verify_fixture(&f, &Ledger::builtin());
        let reading = r.reading.clone().unwrap();
        assert!(!reading.printed_reading_on_curve);
        assert!(reading.curve_reading_on_curve);
        assert_eq!(reading.chosen, Some(17));
        assert_eq!(r.orders, vec![Some(13)]);
        assert!(r.pass);
    }

    #[test]
    fn malformed_fixture_rejected() {
        let bad = r#"[{"name":"x","d":5,"a1":{"a":"0","b":"0","d":5},"a2":{"a":"0","b":"0","d":-1},
            "a3":{"a":"0","b":"0","d":5},"a4":{"a":"1","b":"0","d":5},"a6":{"a":"0","b":"0","d":5},
            "points":[{"x":{"a":"0","b":"0","d":5},"y":{"a":"0","b":"0","d":5}}],
            "claimed_group":[1,2],"quote":"q"}]"#;
        assert!(matches!(
            parse_fixtures(bad),
            Err(FixtureError::Malformed { .. })
        ));
        assert!(matches!(parse_fixtures("{"), Err(FixtureError::Parse(_))));
    }

    #[test]
    fn corrected_fifteen_torsion_point() {
        let f = builtin_fixtures()
            .into_iter()
            .find(|f| f.name == "order15b")
            .unwrap();
        let r = verify_fixture(&f, &Ledger::builtin());
        assert_eq!(r.printed_on_curve, Some(false));
        assert_eq!(r.orders, vec![Some(15)]);
        assert!(r.pass);
    }
}
