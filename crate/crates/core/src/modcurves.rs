//! The modular curves `X₁(m,n)` whose noncuspidal points give torsion groups
//! new over quadratic fields, their cusps, and the facts ledger of imported
//! rank and torsion statements.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ellcurve::{
    search_points, EllCurve, EllPoint, NumberFieldElement, PointOrder, SearchBudget, TorsionGroup,
    DEFAULT_ORDER_CAP,
};
use crate::field::FieldElement;
use crate::poly::IntPoly;
use crate::qfield::{
    rat, rat_int, splitting_type_of, squarefree_reduce, QuadField, Rat, SplitType,
};
use num_traits::ToPrimitive;

/// Environment variable naming an alternative ledger file.
pub const LEDGER_ENV: &str = "QUADTORS_LEDGER";

const DEFAULT_LEDGER: &str = include_str!("../data/ledger.jsonl");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CurveId {
    #[serde(rename = "X1_11")]
    X1_11,
    #[serde(rename = "X1_13")]
    X1_13,
    #[serde(rename = "X1_14")]
    X1_14,
    #[serde(rename = "X1_15")]
    X1_15,
    #[serde(rename = "X1_16")]
    X1_16,
    #[serde(rename = "X1_18")]
    X1_18,
    #[serde(rename = "X1_2_10")]
    X1_2_10,
    #[serde(rename = "X1_2_12")]
    X1_2_12,
}

impl CurveId {
    pub const ALL: [CurveId; 8] = [
        CurveId::X1_11,
        CurveId::X1_13,
        CurveId::X1_14,
        CurveId::X1_15,
        CurveId::X1_16,
        CurveId::X1_18,
        CurveId::X1_2_10,
        CurveId::X1_2_12,
    ];

    pub fn level(&self) -> (u32, u32) {
        match self {
            CurveId::X1_11 => (1, 11),
            CurveId::X1_13 => (1, 13),
            CurveId::X1_14 => (1, 14),
            CurveId::X1_15 => (1, 15),
            CurveId::X1_16 => (1, 16),
            CurveId::X1_18 => (1, 18),
            CurveId::X1_2_10 => (2, 10),
            CurveId::X1_2_12 => (2, 12),
        }
    }

    pub fn group(&self) -> TorsionGroup {
        let (m, n) = self.level();
        TorsionGroup::new(m, n).expect("cataloged level")
    }

    pub fn for_group(g: TorsionGroup) -> Option<CurveId> {
        CurveId::ALL.into_iter().find(|c| c.group() == g)
    }

    pub fn name(&self) -> &'static str {
        match self {
            CurveId::X1_11 => "X1_11",
            CurveId::X1_13 => "X1_13",
            CurveId::X1_14 => "X1_14",
            CurveId::X1_15 => "X1_15",
            CurveId::X1_16 => "X1_16",
            CurveId::X1_18 => "X1_18",
            CurveId::X1_2_10 => "X1_2_10",
            CurveId::X1_2_12 => "X1_2_12",
        }
    }
}

impl fmt::Display for CurveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.level() {
            (1, n) => write!(f, "X1({n})"),
            (m, n) => write!(f, "X1({m},{n})"),
        }
    }
}

impl FromStr for CurveId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let norm: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_uppercase();
        CurveId::ALL
            .into_iter()
            .find(|c| c.name().replace('_', "") == norm)
            .ok_or_else(|| format!("unknown curve {s:?}; expected one of X1_11, X1_13, X1_14, X1_15, X1_16, X1_18, X1_2_10, X1_2_12"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Model {
    /// Integer `[a1, a2, a3, a4, a6]`.
    Elliptic([i64; 5]),
    /// `y² = f(x)`.
    Hyperelliptic(IntPoly),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularCurveRecord {
    pub id: CurveId,
    pub genus: u32,
    pub model: Model,
    /// The model as printed in the source tables.
    pub printed_equation: &'static str,
    /// Factors of the cusp polynomial, as printed.
    pub cusp_factors: Vec<IntPoly>,
    /// Indices into `cusp_factors` whose printed form is doubtful.
    pub suspect_factors: Vec<usize>,
    /// Rational roots `num/den` of the cusp polynomial with no rational point above them.
    pub unlifted_cusps: Vec<(i64, i64)>,
    pub note: Option<&'static str>,
}

impl ModularCurveRecord {
    pub fn classifies(&self) -> TorsionGroup {
        self.id.group()
    }

    pub fn cusp_poly(&self) -> IntPoly {
        IntPoly::product(&self.cusp_factors)
    }

    pub fn equation(&self) -> String {
        match &self.model {
            Model::Elliptic(a) => weierstrass_string(a),
            Model::Hyperelliptic(f) => format!("y^2 = {f}"),
        }
    }

    pub fn elliptic_model<F: FieldElement>(&self, sample: &F) -> Option<EllCurve<F>> {
        match &self.model {
            Model::Elliptic(a) => {
                let c = |i: usize| sample.from_int_like(a[i]);
                EllCurve::new(c(0), c(1), c(2), c(3), c(4)).ok()
            }
            Model::Hyperelliptic(_) => None,
        }
    }

    pub fn hyperelliptic_poly(&self) -> Option<&IntPoly> {
        match &self.model {
            Model::Hyperelliptic(f) => Some(f),
            Model::Elliptic(_) => None,
        }
    }
}

fn weierstrass_string(a: &[i64; 5]) -> String {
    let term = |c: i64, mono: &str, first: bool| -> String {
        if c == 0 {
            return String::new();
        }
        let sign = match (c < 0, first) {
            (true, true) => "-".to_string(),
            (true, false) => " - ".to_string(),
            (false, true) => String::new(),
            (false, false) => " + ".to_string(),
        };
        let mag = c.unsigned_abs();
        match (mag, mono) {
            (_, "") => format!("{sign}{mag}"),
            (1, m) => format!("{sign}{m}"),
            (k, m) => format!("{sign}{k}{m}"),
        }
    };
    let mut lhs = "y^2".to_string();
    lhs += &term(a[0], "xy", false);
    lhs += &term(a[2], "y", false);
    let mut rhs = "x^3".to_string();
    rhs += &term(a[1], "x^2", false);
    rhs += &term(a[3], "x", false);
    rhs += &term(a[4], "", false);
    format!("{lhs} = {rhs}")
}

fn lin(c0: i64, c1: i64) -> IntPoly {
    IntPoly::new(&[c0, c1])
}

fn desc(c: &[i64]) -> IntPoly {
    IntPoly::from_descending(c)
}

/// The eight cataloged curves.
pub fn catalog() -> Vec<ModularCurveRecord> {
    vec![
        ModularCurveRecord {
            id: CurveId::X1_11,
            genus: 1,
            model: Model::Elliptic([0, -1, -1, 0, 0]),
            printed_equation: "y^2 - y = x^3 - x",
            cusp_factors: vec![IntPoly::x(), lin(-1, 1), desc(&[1, -18, 35, -16, -2, 1])],
            suspect_factors: vec![],
            unlifted_cusps: vec![],
            note: Some(
                "the printed model y^2 - y = x^3 - x has conductor 37 and trivial torsion; \
                 the model used is y^2 - y = x^3 - x^2, whose torsion points all have x in {0, 1}",
            ),
        },
        ModularCurveRecord {
            id: CurveId::X1_13,
            genus: 2,
            model: Model::Hyperelliptic(desc(&[1, -2, 1, -2, 6, -4, 1])),
            printed_equation: "y^2 = x^6 - 2x^5 + x^4 - 2x^3 + 6x^2 - 4x + 1",
            cusp_factors: vec![IntPoly::x(), lin(-1, 1), desc(&[1, -4, 1, 1])],
            suspect_factors: vec![],
            unlifted_cusps: vec![],
            note: None,
        },
        ModularCurveRecord {
            id: CurveId::X1_14,
            genus: 1,
            model: Model::Elliptic([1, 0, 1, -1, 0]),
            printed_equation: "y^2 + xy + y = x^3 - x",
            cusp_factors: vec![IntPoly::x(), lin(-1, 1), lin(1, 1), desc(&[1, -9, -1, 1]), desc(&[1, -2, -1, 1])],
            suspect_factors: vec![],
            unlifted_cusps: vec![],
            note: None,
        },
        ModularCurveRecord {
            id: CurveId::X1_15,
            genus: 1,
            model: Model::Elliptic([1, 1, 1, 0, 0]),
            printed_equation: "y^2 + xy + y = x^3 + x^2",
            // the last factor is printed as x^4 - 7x^2 - 6x^2 + 2x + 1
            cusp_factors: vec![IntPoly::x(), lin(1, 1), desc(&[1, 3, 4, 2, 1]), desc(&[1, 0, -7 - 6, 2, 1])],
            suspect_factors: vec![3],
            unlifted_cusps: vec![],
            note: Some("the quartic cusp factor is printed with two x^2 terms and is stored with them combined"),
        },
        ModularCurveRecord {
            id: CurveId::X1_16,
            genus: 2,
            model: Model::Hyperelliptic(IntPoly::product(&[IntPoly::x(), desc(&[1, 0, 1]), desc(&[1, 2, -1])])),
            printed_equation: "y^2 = x(x^2 + 1)(x^2 + 2x - 1)",
            cusp_factors: vec![IntPoly::x(), lin(-1, 1), lin(1, 1), desc(&[1, -2, -1]), desc(&[1, 2, -1])],
            suspect_factors: vec![],
            unlifted_cusps: vec![],
            note: None,
        },
        ModularCurveRecord {
            id: CurveId::X1_18,
            genus: 2,
            model: Model::Hyperelliptic(desc(&[1, 2, 5, 10, 10, 4, 1])),
            printed_equation: "y^2 = x^6 + 2x^5 + 5x^4 + 10x^3 + 10x^2 + 4x + 1",
            cusp_factors: vec![IntPoly::x(), lin(1, 1), desc(&[1, 1, 1]), desc(&[1, -3, -1])],
            suspect_factors: vec![],
            unlifted_cusps: vec![],
            note: None,
        },
        ModularCurveRecord {
            id: CurveId::X1_2_10,
            genus: 1,
            model: Model::Elliptic([0, 1, 0, -1, 0]),
            printed_equation: "y^2 = x^3 + x^2 - x",
            cusp_factors: vec![IntPoly::x(), lin(-1, 1), lin(1, 1), desc(&[1, 1, -1]), desc(&[1, -4, -1])],
            suspect_factors: vec![],
            unlifted_cusps: vec![],
            note: None,
        },
        ModularCurveRecord {
            id: CurveId::X1_2_12,
            genus: 1,
            model: Model::Elliptic([0, -1, 0, 1, 0]),
            printed_equation: "y^2 = x^3 - x^2 + x",
            cusp_factors: vec![
                IntPoly::x(),
                lin(-1, 1),
                lin(-1, 2),
                desc(&[2, -1, 1]),
                desc(&[3, -3, -1]),
                desc(&[6, -6, -1]),
            ],
            suspect_factors: vec![2, 3, 4, 5],
            unlifted_cusps: vec![(1, 2)],
            note: Some(
                "the printed cusp factors after x(x - 1) do not fit this model: x = 1/2 lifts only over \
                 Q(√6) and to a point of infinite order, and the quadratic factors have no points over \
                 their splitting fields; the torsion points x = 2 ± √3 over Q(√3) are missed",
            ),
        },
    ]
}

pub fn record(id: CurveId) -> ModularCurveRecord {
    catalog()
        .into_iter()
        .find(|r| r.id == id)
        .expect("every id is cataloged")
}

/// `x` is a root of the cusp polynomial.
pub fn is_cusp<F: FieldElement>(rec: &ModularCurveRecord, x: &F) -> bool {
    rec.cusp_factors.iter().any(|f| f.eval(x).is_zero())
}

/// What a root of one cusp factor gives on a genus-1 model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "order", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CuspFactorStatus {
    /// A torsion point over the root's field, as a cusp should be.
    Torsion(u32),
    NonTorsion,
    /// No point above the root over the root's field.
    NoPoint,
    /// Degree above 2, or too large to test.
    Unchecked,
}

/// Tests each linear or quadratic cusp factor of a genus-1 record: a root
/// `x₀` should lift to a torsion point over `ℚ(x₀)` or, for rational `x₀`,
/// over `ℚ(x₀, y₀)`.
pub fn cusp_factor_check(rec: &ModularCurveRecord) -> Vec<CuspFactorStatus> {
    rec.cusp_factors
        .iter()
        .map(|f| check_factor(rec, f))
        .collect()
}

fn to_small(r: &Rat) -> Option<i64> {
    let n = r.numer().to_i64()?;
    let d = r.denom().to_i64()?;
    n.checked_mul(d)
}

fn lift_status<F: NumberFieldElement>(e: &EllCurve<F>, x: F) -> Option<CuspFactorStatus> {
    let disc = e.h(&x).square() + e.rhs(&x) * x.from_int_like(4);
    let root = NumberFieldElement::sqrt(&disc)?;
    let two_inv = x.from_int_like(2).inv()?;
    let y = (root - e.h(&x)) * two_inv;
    Some(
        match e.point_order(&EllPoint::Affine(x, y), DEFAULT_ORDER_CAP) {
            Ok(PointOrder::Finite(n)) => CuspFactorStatus::Torsion(n),
            _ => CuspFactorStatus::NonTorsion,
        },
    )
}

fn check_factor(rec: &ModularCurveRecord, f: &IntPoly) -> CuspFactorStatus {
    let over = |d: i64, a: Rat, b: Rat| -> CuspFactorStatus {
        let Ok(k) = QuadField::new(d) else {
            return CuspFactorStatus::Unchecked;
        };
        let e = rec.elliptic_model(&k.zero()).expect("genus 1");
        lift_status(&e, k.elem(a, b)).unwrap_or(CuspFactorStatus::NoPoint)
    };
    let Model::Elliptic(_) = rec.model else {
        return CuspFactorStatus::Unchecked;
    };
    match f.coeffs() {
        [c0, c1] => {
            let x = rat(-c0, *c1);
            let e = rec.elliptic_model(&x).expect("genus 1");
            if let Some(s) = lift_status(&e, x.clone()) {
                return s;
            }
            let disc = e.h(&x).square() + e.rhs(&x) * rat_int(4);
            match to_small(&disc).and_then(|n| squarefree_reduce(n).ok()) {
                Some((d, _)) => over(d, x, rat_int(0)),
                None => CuspFactorStatus::Unchecked,
            }
        }
        [c, b, a] => {
            let disc = b * b - 4 * a * c;
            let Ok((d, sq)) = squarefree_reduce(disc) else {
                return CuspFactorStatus::Unchecked;
            };
            if d == 1 {
                return CuspFactorStatus::Unchecked;
            }
            over(d, rat(-b, 2 * a), rat(sq as i64, 2 * a))
        }
        _ => CuspFactorStatus::Unchecked,
    }
}

/// Cusp test for points of an elliptic model, where the origin is a cusp.
pub fn is_cusp_point<F: FieldElement>(rec: &ModularCurveRecord, p: &EllPoint<F>) -> bool {
    match p {
        EllPoint::Infinity => true,
        EllPoint::Affine(x, _) => is_cusp(rec, x),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "tag", content = "order", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PointTag {
    Torsion(u32),
    Nontorsion,
    /// Genus-2 hit, not analyzed further.
    Raw,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchHit<F> {
    pub x: F,
    pub y: F,
    pub tag: PointTag,
}

/// Box-search points on the model over the field of `sample` that are not cusps.
pub fn noncuspidal_search<F: NumberFieldElement>(
    rec: &ModularCurveRecord,
    sample: &F,
    budget: SearchBudget,
) -> Vec<SearchHit<F>> {
    match &rec.model {
        Model::Elliptic(_) => {
            let e = rec.elliptic_model(sample).expect("nonsingular model");
            e.search(budget)
                .into_iter()
                .filter(|p| !is_cusp_point(rec, p))
                .map(|p| {
                    let tag = match e
                        .point_order(&p, DEFAULT_ORDER_CAP)
                        .expect("point on curve")
                    {
                        PointOrder::Finite(n) => PointTag::Torsion(n),
                        PointOrder::OverCap => PointTag::Nontorsion,
                    };
                    let EllPoint::Affine(x, y) = p else {
                        unreachable!()
                    };
                    SearchHit { x, y, tag }
                })
                .collect()
        }
        Model::Hyperelliptic(f) => {
            let four_f: Vec<F> = f
                .coeffs()
                .iter()
                .map(|&c| sample.from_int_like(4 * c))
                .collect();
            search_points(sample, &[], &four_f, budget)
                .into_iter()
                .filter(|(x, _)| !is_cusp(rec, x))
                .map(|(x, y)| SearchHit {
                    x,
                    y,
                    tag: PointTag::Raw,
                })
                .collect()
        }
    }
}

/// Conditions ruling out `ℤ/18ℤ` over a quadratic field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum KmCondition {
    /// 3 is inert.
    I,
    /// 3 splits and 2 does not split.
    II,
    /// 5 or 7 ramifies.
    III,
}

impl fmt::Display for KmCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KmCondition::I => "I",
            KmCondition::II => "II",
            KmCondition::III => "III",
        })
    }
}

/// Every satisfied condition, in order.
pub fn kenku_momose_conditions(k: &QuadField) -> Vec<KmCondition> {
    kenku_momose_conditions_of(k.d())
}

/// As [`kenku_momose_conditions`], for a squarefree `d` that skips validation.
pub fn kenku_momose_conditions_of(d: i64) -> Vec<KmCondition> {
    let split = |p| splitting_type_of(d, p);
    let mut out = Vec::new();
    let s3 = split(3);
    if s3 == SplitType::Inert {
        out.push(KmCondition::I);
    }
    if s3 == SplitType::Split && split(2) != SplitType::Split {
        out.push(KmCondition::II);
    }
    if split(5) == SplitType::Ramified || split(7) == SplitType::Ramified {
        out.push(KmCondition::III);
    }
    out
}

/// First satisfied condition; `None` means the criterion is silent.
pub fn kenku_momose_z18(k: &QuadField) -> Option<KmCondition> {
    kenku_momose_conditions(k).into_iter().next()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FactKind {
    /// Rank of the curve, or of its Jacobian in genus 2, is zero.
    RankZero,
    RankPositive(Option<u32>),
    /// Torsion of the curve (or Jacobian) over the field.
    TorsionGroup(TorsionGroup),
    /// Order of the torsion subgroup of the Jacobian.
    JacobianTorsion(u64),
    /// Order of the rational cuspidal subgroup of the Jacobian.
    CuspidalOrder(u64),
    /// Every torsion point of the curve over the field is a cusp.
    TorsionAllCuspidal,
    NoNoncuspidalPoints,
    /// The group does not occur over the field.
    DoesNotAppear,
    /// The group occurs only over the listed fields.
    AppearsOnlyOver(Vec<i64>),
    /// The group occurs for infinitely many curves over every field.
    AppearsEverywhere,
    /// Number of curves with the group, up to isomorphism.
    CurveCount(u32),
    /// Name of an explicit fixture curve.
    AppearsWitness(String),
    /// All curves with the group over the field have rank zero.
    CurvesHaveRankZero,
    /// No statement is available.
    Gap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactEntry {
    #[serde(default)]
    pub curve: Option<CurveId>,
    #[serde(default)]
    pub group: Option<TorsionGroup>,
    /// Radicand; `1` is `ℚ`, absent means every quadratic field.
    #[serde(default)]
    pub d: Option<i64>,
    /// Fields excluded from a statement about every quadratic field.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub except: Vec<i64>,
    #[serde(flatten)]
    pub kind: FactKind,
    pub citation: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub suspect: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl FactEntry {
    pub fn applies_to(&self, d: i64) -> bool {
        match self.d {
            Some(x) => x == d,
            None => d != 1 && !self.except.contains(&d),
        }
    }

    /// The torsion group this fact is about.
    pub fn subject_group(&self) -> Option<TorsionGroup> {
        self.group.or(self.curve.map(|c| c.group()))
    }

    pub fn is_rank(&self) -> bool {
        matches!(self.kind, FactKind::RankZero | FactKind::RankPositive(_))
    }
}

impl fmt::Display for FactEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let subject = match (self.curve, self.group) {
            (Some(c), _) => c.to_string(),
            (None, Some(g)) => g.to_string(),
            (None, None) => "-".to_string(),
        };
        let field = match self.d {
            Some(1) => "Q".to_string(),
            Some(d) => format!("Q(√{d})"),
            None => "all K".to_string(),
        };
        let kind = serde_json::to_value(&self.kind).ok();
        let kind = kind
            .as_ref()
            .and_then(|v| v.get("kind"))
            .and_then(|k| k.as_str())
            .unwrap_or("?")
            .to_string();
        write!(f, "{subject} over {field}: {kind} \"{}\"", self.citation)?;
        if self.suspect {
            f.write_str(" [suspect]")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum LedgerError {
    #[error("cannot read ledger {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("ledger line {line}: {source}")]
    Parse {
        line: usize,
        source: serde_json::Error,
    },
    #[error("ledger line {0}: empty citation")]
    EmptyCitation(usize),
}

/// Imported facts, one per line of a JSON-lines file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ledger {
    entries: Vec<FactEntry>,
}

impl Ledger {
    pub fn parse(text: &str) -> Result<Self, LedgerError> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let e: FactEntry = serde_json::from_str(line).map_err(|source| LedgerError::Parse {
                line: i + 1,
                source,
            })?;
            if e.citation.trim().is_empty() {
                return Err(LedgerError::EmptyCitation(i + 1));
            }
            entries.push(e);
        }
        Ok(Ledger { entries })
    }

    pub fn load(path: &Path) -> Result<Self, LedgerError> {
        let text = std::fs::read_to_string(path).map_err(|source| LedgerError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    /// The shipped ledger.
    pub fn builtin() -> Self {
        Self::parse(DEFAULT_LEDGER).expect("shipped ledger parses")
    }

    /// An explicit path, else the environment override, else the shipped ledger.
    pub fn resolve(path: Option<&Path>) -> Result<Self, LedgerError> {
        match path {
            Some(p) => Self::load(p),
            None => match std::env::var_os(LEDGER_ENV) {
                Some(p) => Self::load(Path::new(&p)),
                None => Ok(Self::builtin()),
            },
        }
    }

    pub fn entries(&self) -> &[FactEntry] {
        &self.entries
    }

    /// Facts about `curve` that apply to `ℚ(√d)`.
    pub fn facts(&self, curve: CurveId, d: i64) -> Vec<&FactEntry> {
        self.entries
            .iter()
            .filter(|e| e.curve == Some(curve) && e.applies_to(d))
            .collect()
    }

    /// Facts about the group `g` (by its curve or directly) that apply to `ℚ(√d)`.
    pub fn group_facts(&self, g: TorsionGroup, d: i64) -> Vec<&FactEntry> {
        self.entries
            .iter()
            .filter(|e| e.subject_group() == Some(g) && e.applies_to(d))
            .collect()
    }

    /// The rank fact for `(curve, d)`, else the first fact recorded for exactly that field.
    pub fn fact_lookup(&self, curve: CurveId, d: i64) -> Option<&FactEntry> {
        let exact: Vec<&FactEntry> = self
            .entries
            .iter()
            .filter(|e| e.curve == Some(curve) && e.d == Some(d))
            .collect();
        exact
            .iter()
            .find(|e| e.is_rank())
            .or(exact.first())
            .copied()
    }
}

impl Default for Ledger {
    fn default() -> Self {
        Self::builtin()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::{rat_int, Rat};

    fn km(d: i64) -> Option<KmCondition> {
        kenku_momose_z18(&QuadField::new(d).unwrap())
    }

    #[test]
    fn catalog_shape() {
        let c = catalog();
        assert_eq!(c.len(), 8);
        for r in &c {
            let elliptic = matches!(r.model, Model::Elliptic(_));
            assert_eq!(elliptic, r.genus == 1);
            if let Model::Hyperelliptic(f) = &r.model {
                assert!((5..=6).contains(&f.degree()));
            }
        }
        assert_eq!(record(CurveId::X1_11).printed_equation, "y^2 - y = x^3 - x");
        assert_eq!(record(CurveId::X1_13).genus, 2);
        assert_eq!(
            record(CurveId::X1_2_12).cusp_poly(),
            IntPoly::product(&[
                IntPoly::x(),
                lin(-1, 1),
                lin(-1, 2),
                desc(&[2, -1, 1]),
                desc(&[3, -3, -1]),
                desc(&[6, -6, -1])
            ])
        );
        assert_eq!(record(CurveId::X1_14).equation(), "y^2 + xy + y = x^3 - x");
    }

    #[test]
    fn cusp_predicate() {
        assert!(is_cusp(&record(CurveId::X1_11), &rat_int(0)));
        assert!(!is_cusp(&record(CurveId::X1_13), &rat_int(2)));
        assert!(is_cusp(&record(CurveId::X1_15), &rat_int(-1)));
        assert!(is_cusp(
            &record(CurveId::X1_2_12),
            &Rat::new(1.into(), 2.into())
        ));
    }

    #[test]
    fn rational_linear_cusps_lift() {
        for r in catalog() {
            for f in r.cusp_factors.iter().filter(|f| f.degree() == 1) {
                for x in f.rational_roots() {
                    let lifts = match &r.model {
                        Model::Elliptic(_) => {
                            let e = r.elliptic_model(&x).unwrap();
                            let disc = e.y_discriminant_poly();
                            let v = disc
                                .iter()
                                .rev()
                                .fold(rat_int(0), |acc, c| acc * x.clone() + c.clone());
                            crate::qfield::rat_sqrt(&v).is_some()
                        }
                        Model::Hyperelliptic(f) => crate::qfield::rat_sqrt(&f.eval(&x)).is_some(),
                    };
                    let documented = r
                        .unlifted_cusps
                        .iter()
                        .any(|&(a, b)| x == Rat::new(a.into(), b.into()));
                    assert!(lifts != documented, "{} cusp x = {x}", r.id);
                }
            }
        }
    }

    #[test]
    fn kenku_momose_examples() {
        assert_eq!(km(2), Some(KmCondition::I));
        assert_eq!(km(13), Some(KmCondition::II));
        assert_eq!(km(33), None);
        assert_eq!(km(-15), Some(KmCondition::III));
        assert_eq!(
            kenku_momose_conditions(&QuadField::new(-7).unwrap()),
            vec![KmCondition::I, KmCondition::III]
        );
    }

    #[test]
    fn conditions_one_and_two_disjoint() {
        for d in -1000i64..=1000 {
            let Ok(k) = QuadField::new(d) else { continue };
            let c = kenku_momose_conditions(&k);
            assert!(
                !(c.contains(&KmCondition::I) && c.contains(&KmCondition::II)),
                "d = {d}"
            );
        }
    }

    #[test]
    fn ledger_lookups() {
        let l = Ledger::builtin();
        assert!(l.entries().iter().all(|e| !e.citation.is_empty()));
        let f = l.fact_lookup(CurveId::X1_11, -7).unwrap();
        assert_eq!(f.kind, FactKind::RankPositive(Some(1)));
        assert_eq!(
            l.fact_lookup(CurveId::X1_11, -1).unwrap().kind,
            FactKind::RankZero
        );
        assert_eq!(
            l.fact_lookup(CurveId::X1_2_10, 5).unwrap().kind,
            FactKind::RankZero
        );
        assert!(l.fact_lookup(CurveId::X1_14, 101).is_none());
    }

    #[test]
    fn ledger_rejects_bad_lines() {
        assert!(matches!(
            Ledger::parse("{nope"),
            Err(LedgerError::Parse { line: 1, .. })
        ));
        let empty = r#"{"curve":"X1_11","d":5,"kind":"RANK_ZERO","citation":" "}"#;
        assert!(matches!(
            Ledger::parse(empty),
            Err(LedgerError::EmptyCitation(1))
        ));
    }

    #[test]
    fn fact_json_shape() {
        let e: FactEntry = serde_json::from_str(
            r#"{"curve":"X1_2_10","d":-2,"kind":"RANK_POSITIVE","value":1,"citation":"rank 1"}"#,
        )
        .unwrap();
        assert_eq!(e.kind, FactKind::RankPositive(Some(1)));
        let back = serde_json::to_string(&e).unwrap();
        assert_eq!(serde_json::from_str::<FactEntry>(&back).unwrap(), e);
    }

    #[test]
    fn curve_id_parsing() {
        assert_eq!("X1_13".parse::<CurveId>().unwrap(), CurveId::X1_13);
        assert_eq!("x1(2,10)".parse::<CurveId>().unwrap(), CurveId::X1_2_10);
        assert!("X1_17".parse::<CurveId>().is_err());
    }

    #[test]
    fn cusp_factors_against_models() {
        use CuspFactorStatus::*;
        let two_ten = cusp_factor_check(&record(CurveId::X1_2_10));
        assert_eq!(
            two_ten,
            vec![Torsion(2), Torsion(3), Torsion(6), Torsion(2), Torsion(6)]
        );
        let rec = record(CurveId::X1_2_12);
        let checks = cusp_factor_check(&rec);
        assert!(matches!(checks[0], Torsion(_)) && matches!(checks[1], Torsion(_)));
        assert_eq!(&checks[2..], &[NonTorsion, NoPoint, NoPoint, NoPoint]);
        assert_eq!(rec.suspect_factors, vec![2, 3, 4, 5]);
    }
}
