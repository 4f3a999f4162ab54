//! Per-field torsion classification with evidence trails.
//!
//! [`Classifier::classify`] gathers evidence (computations over `K` and
//! imported ledger facts) and hands it to the pure function [`decide`], so a
//! stored status can be replayed.

pub mod fixtures;
pub mod golden;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ellcurve::reduce::DEFAULT_BOUND_PRIMES;
use crate::ellcurve::torsion::{torsion_certify, SearchBudget};
use crate::ellcurve::{EllError, EllPoint, TorsionGroup};
use crate::genus2::{jacobian_torsion_gcd_bound, Genus2Error};
use crate::modcurves::{
    is_cusp_point, kenku_momose_z18, noncuspidal_search, record, CurveId, FactEntry, FactKind,
    KmCondition, Ledger, ModularCurveRecord,
};
use crate::qfield::{
    field_discriminant, is_squarefree, BaseField, QFieldError, QuadElem, QuadField,
};
use fixtures::{builtin_fixtures, verify_fixture, Fixture};

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Field(#[from] QFieldError),
    #[error(transparent)]
    Curve(#[from] EllError),
    #[error(transparent)]
    Jacobian(#[from] Genus2Error),
    #[error("{0} has no cataloged modular curve")]
    NotCataloged(TorsionGroup),
    #[error("no field with |Δ| ≤ {0} was shown to have the group")]
    Exhausted(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(
    tag = "reason",
    content = "detail",
    rename_all = "SCREAMING_SNAKE_CASE"
)]
pub enum ImpossibleReason {
    KenkuMomose(KmCondition),
    /// Imported: the group does not occur over the field.
    DoesNotAppear,
    /// Imported: the group occurs only over the listed fields.
    OnlyOver(Vec<i64>),
    /// Rank zero and every torsion point of the curve over `K` is a cusp.
    RankZeroAllCuspidal {
        computed: bool,
    },
    /// Rank zero and the torsion bound for `J(K)` equals the rational cuspidal
    /// order, so `J(K) = J(ℚ)` and every `K`-point is rational, hence a cusp.
    JacobianEqualsCuspidal {
        bound: u64,
    },
    /// Imported: no noncuspidal points over the field.
    NoNoncuspidalPoints,
}

impl fmt::Display for ImpossibleReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ImpossibleReason::KenkuMomose(c) => write!(f, "Kenku-Momose {c}"),
            ImpossibleReason::DoesNotAppear => f.write_str("does not appear (imported)"),
            ImpossibleReason::OnlyOver(ds) => write!(f, "occurs only over d in {ds:?} (imported)"),
            ImpossibleReason::RankZeroAllCuspidal { computed: true } => {
                f.write_str("rank 0, all torsion cuspidal (computed)")
            }
            ImpossibleReason::RankZeroAllCuspidal { computed: false } => {
                f.write_str("rank 0, all torsion cuspidal (imported)")
            }
            ImpossibleReason::JacobianEqualsCuspidal { bound } => {
                write!(f, "rank 0, |J(K)_tors| divides {bound} = cuspidal order")
            }
            ImpossibleReason::NoNoncuspidalPoints => {
                f.write_str("no noncuspidal points (imported)")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    AppearsInfinitely,
    /// `count` only when pinned by the ledger.
    AppearsFinitely {
        count: Option<u32>,
        lower_bound: u32,
    },
    Impossible {
        reason: ImpossibleReason,
    },
    Unknown,
}

impl Verdict {
    pub fn appears(&self) -> bool {
        matches!(
            self,
            Verdict::AppearsInfinitely | Verdict::AppearsFinitely { .. }
        )
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::AppearsInfinitely => f.write_str("APPEARS_INFINITELY"),
            Verdict::AppearsFinitely { count: Some(n), .. } => write!(f, "APPEARS_FINITELY({n})"),
            Verdict::AppearsFinitely {
                count: None,
                lower_bound,
            } => write!(f, "APPEARS_FINITELY(>={lower_bound})"),
            Verdict::Impossible { reason } => write!(f, "IMPOSSIBLE({reason})"),
            Verdict::Unknown => f.write_str("UNKNOWN"),
        }
    }
}

/// One step of a classification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum Evidence {
    Fact {
        fact: FactEntry,
    },
    KenkuMomose {
        condition: KmCondition,
    },
    /// Torsion of the elliptic model over `K`.
    TorsionCertificate {
        lower: TorsionGroup,
        upper_order: u64,
        exact: bool,
        cuspidal: usize,
        noncuspidal: Vec<String>,
    },
    /// A search point past the order cap.
    NontorsionPoint {
        point: String,
    },
    /// `|J(ℚ(√field))_tors|` divides `bound` (`field = 1` is `ℚ`).
    JacobianBound {
        field: i64,
        bound: u64,
        primes: Vec<u64>,
    },
    /// A verified fixture curve with the group over `K`.
    Witness {
        fixture: String,
        group: TorsionGroup,
        point: String,
    },
    /// Genus-2 box-search points that are not cusps.
    SearchHits {
        count: usize,
        points: Vec<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationStatus {
    pub field: i64,
    pub group: TorsionGroup,
    #[serde(flatten)]
    pub verdict: Verdict,
    pub evidence: Vec<Evidence>,
}

impl ClassificationStatus {
    /// Re-derives the verdict from the stored evidence.
    pub fn replay(&self) -> Verdict {
        decide(self.group, self.field, &self.evidence)
    }
}

fn facts(ev: &[Evidence]) -> impl Iterator<Item = &FactEntry> {
    ev.iter().filter_map(|e| match e {
        Evidence::Fact { fact } => Some(fact),
        _ => None,
    })
}

fn has_fact(ev: &[Evidence], d: i64, pred: impl Fn(&FactKind) -> bool) -> bool {
    facts(ev).any(|f| f.applies_to(d) && pred(&f.kind))
}

/// The verdict implied by `evidence` for `group` over `ℚ(√d)`.
pub fn decide(group: TorsionGroup, d: i64, evidence: &[Evidence]) -> Verdict {
    if has_fact(evidence, d, |k| matches!(k, FactKind::DoesNotAppear)) {
        return Verdict::Impossible {
            reason: ImpossibleReason::DoesNotAppear,
        };
    }
    if let Some(list) = facts(evidence).find_map(|f| match &f.kind {
        FactKind::AppearsOnlyOver(l) if f.applies_to(d) && !l.contains(&d) => Some(l.clone()),
        _ => None,
    }) {
        return Verdict::Impossible {
            reason: ImpossibleReason::OnlyOver(list),
        };
    }
    if has_fact(evidence, d, |k| matches!(k, FactKind::AppearsEverywhere)) {
        return Verdict::AppearsInfinitely;
    }
    if let Some(c) = evidence.iter().find_map(|e| match e {
        Evidence::KenkuMomose { condition } => Some(*condition),
        _ => None,
    }) {
        return Verdict::Impossible {
            reason: ImpossibleReason::KenkuMomose(c),
        };
    }
    let Some(curve) = CurveId::for_group(group) else {
        return Verdict::Unknown;
    };
    let rank_zero = has_fact(evidence, d, |k| matches!(k, FactKind::RankZero));
    let witnessed = evidence
        .iter()
        .any(|e| matches!(e, Evidence::Witness { .. }));
    let count = facts(evidence).find_map(|f| match f.kind {
        FactKind::CurveCount(n) if f.applies_to(d) => Some(n),
        _ => None,
    });
    let finitely = || Verdict::AppearsFinitely {
        count,
        lower_bound: count.unwrap_or(1).max(1),
    };

    if record(curve).genus == 2 {
        // Faltings: finitely many points, so never infinitely many curves
        if witnessed {
            return finitely();
        }
        if rank_zero {
            let cusp_order = facts(evidence).find_map(|f| match f.kind {
                FactKind::CuspidalOrder(n) if f.d == Some(1) => Some(n),
                _ => None,
            });
            let bound_at = |field: i64| {
                evidence.iter().find_map(|e| match e {
                    Evidence::JacobianBound {
                        field: f, bound, ..
                    } if *f == field => Some(*bound),
                    _ => None,
                })
            };
            if let (Some(c), Some(bk), Some(bq)) = (cusp_order, bound_at(d), bound_at(1)) {
                if bk == c && bq == c {
                    return Verdict::Impossible {
                        reason: ImpossibleReason::JacobianEqualsCuspidal { bound: bk },
                    };
                }
            }
        }
        if has_fact(evidence, d, |k| matches!(k, FactKind::NoNoncuspidalPoints)) {
            return Verdict::Impossible {
                reason: ImpossibleReason::NoNoncuspidalPoints,
            };
        }
        return Verdict::Unknown;
    }

    let positive = evidence
        .iter()
        .any(|e| matches!(e, Evidence::NontorsionPoint { .. }))
        || has_fact(evidence, d, |k| matches!(k, FactKind::RankPositive(_)));
    if positive {
        return Verdict::AppearsInfinitely;
    }
    if !rank_zero {
        return Verdict::Unknown;
    }
    let cert = evidence.iter().find_map(|e| match e {
        Evidence::TorsionCertificate {
            exact, noncuspidal, ..
        } => Some((*exact, noncuspidal.len())),
        _ => None,
    });
    // a point off the printed cusp polynomial is only a candidate noncusp:
    // an imported all-cuspidal statement outranks it
    let all_cuspidal = has_fact(evidence, d, |k| matches!(k, FactKind::TorsionAllCuspidal));
    match cert {
        Some((_, n)) if n > 0 && !all_cuspidal => finitely(),
        _ if witnessed => finitely(),
        Some((true, 0)) => Verdict::Impossible {
            reason: ImpossibleReason::RankZeroAllCuspidal { computed: true },
        },
        _ if all_cuspidal => Verdict::Impossible {
            reason: ImpossibleReason::RankZeroAllCuspidal { computed: false },
        },
        _ => Verdict::Unknown,
    }
}

/// Rank information for a genus-1 modular curve over `K`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rank", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RankStatus {
    Positive {
        witness: Option<String>,
        fact: Option<FactEntry>,
    },
    Zero {
        fact: FactEntry,
    },
    Unknown,
}

/// Group-valued fact and search budget shared by every query.
#[derive(Clone, Debug)]
pub struct Classifier {
    pub ledger: Ledger,
    pub fixtures: Vec<Fixture>,
    pub budget: SearchBudget,
}

impl Default for Classifier {
    fn default() -> Self {
        Classifier::new(Ledger::builtin())
    }
}

fn format_point(p: &EllPoint<QuadElem>) -> String {
    p.to_string()
}

impl Classifier {
    pub fn new(ledger: Ledger) -> Self {
        Classifier {
            ledger,
            fixtures: builtin_fixtures(),
            budget: SearchBudget::default(),
        }
    }

    pub fn with_budget(mut self, budget: SearchBudget) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_fixtures(mut self, fixtures: Vec<Fixture>) -> Self {
        self.fixtures = fixtures;
        self
    }

    fn witnesses(&self, g: TorsionGroup, d: i64) -> Vec<Evidence> {
        self.fixtures
            .iter()
            .filter(|f| f.claimed_group == g && f.d == d)
            .filter(|f| verify_fixture(f, &self.ledger).pass)
            .map(|f| Evidence::Witness {
                fixture: f.name.clone(),
                group: g,
                point: f.point_string(),
            })
            .collect()
    }

    pub fn rank_status(&self, rec: &ModularCurveRecord, k: &QuadField) -> RankStatus {
        let sample = k.zero();
        let witness = noncuspidal_search(rec, &sample, self.budget)
            .into_iter()
            .find(|h| h.tag == crate::modcurves::PointTag::Nontorsion)
            .map(|h| format!("({}, {})", h.x, h.y));
        let facts = self.ledger.facts(rec.id, k.d());
        let positive = facts
            .iter()
            .find(|f| matches!(f.kind, FactKind::RankPositive(_)))
            .map(|f| (*f).clone());
        if witness.is_some() || positive.is_some() {
            return RankStatus::Positive {
                witness,
                fact: positive,
            };
        }
        match facts.iter().find(|f| matches!(f.kind, FactKind::RankZero)) {
            Some(f) => RankStatus::Zero { fact: (*f).clone() },
            None => RankStatus::Unknown,
        }
    }

    pub fn classify(
        &self,
        k: &QuadField,
        g: TorsionGroup,
    ) -> Result<ClassificationStatus, ClassifyError> {
        let d = k.d();
        let mut evidence: Vec<Evidence> = self
            .ledger
            .group_facts(g, d)
            .into_iter()
            .map(|f| Evidence::Fact { fact: f.clone() })
            .collect();
        let done = |evidence: Vec<Evidence>| {
            let verdict = decide(g, d, &evidence);
            Ok(ClassificationStatus {
                field: d,
                group: g,
                verdict,
                evidence,
            })
        };
        let Some(curve) = CurveId::for_group(g) else {
            return done(evidence);
        };
        if has_fact(&evidence, d, |k| matches!(k, FactKind::DoesNotAppear)) {
            return done(evidence);
        }
        let rec = record(curve);
        if curve == CurveId::X1_18 {
            if let Some(c) = kenku_momose_z18(k) {
                evidence.push(Evidence::KenkuMomose { condition: c });
                return done(evidence);
            }
        }
        evidence.extend(self.witnesses(g, d));
        let sample = k.zero();
        if rec.genus == 2 {
            self.genus2_evidence(&rec, k, &mut evidence)?;
            let hits = noncuspidal_search(&rec, &sample, self.budget);
            evidence.push(Evidence::SearchHits {
                count: hits.len(),
                points: hits.iter().map(|h| format!("({}, {})", h.x, h.y)).collect(),
            });
            return done(evidence);
        }
        let e = rec.elliptic_model(&sample).ok_or(EllError::Singular)?;
        let cert = torsion_certify(&e, &[], Some(self.budget))?;
        let (cusps, noncusps): (Vec<_>, Vec<_>) =
            cert.elements.iter().partition(|p| is_cusp_point(&rec, p));
        evidence.push(Evidence::TorsionCertificate {
            lower: cert.lower,
            upper_order: cert.upper_order,
            exact: cert.exact(),
            cuspidal: cusps.len(),
            noncuspidal: noncusps.into_iter().map(format_point).collect(),
        });
        for p in cert.non_torsion.iter().take(1) {
            evidence.push(Evidence::NontorsionPoint {
                point: format_point(p),
            });
        }
        done(evidence)
    }

    /// Jacobian bounds over `K` and `ℚ`, plus the rational cuspidal facts, when
    /// a rank-zero fact makes them usable.
    fn genus2_evidence(
        &self,
        rec: &ModularCurveRecord,
        k: &QuadField,
        evidence: &mut Vec<Evidence>,
    ) -> Result<(), ClassifyError> {
        if !has_fact(evidence, k.d(), |f| matches!(f, FactKind::RankZero)) {
            return Ok(());
        }
        for f in self.ledger.facts(rec.id, 1) {
            if matches!(f.kind, FactKind::CuspidalOrder(_)) {
                evidence.push(Evidence::Fact { fact: f.clone() });
            }
        }
        let poly = rec.hyperelliptic_poly().expect("genus-2 model");
        for (field, base) in [(k.d(), BaseField::Quadratic(*k)), (1, BaseField::Rationals)] {
            let b = jacobian_torsion_gcd_bound(poly, base, &DEFAULT_BOUND_PRIMES)?;
            evidence.push(Evidence::JacobianBound {
                field,
                bound: b.bound,
                primes: b.counts.iter().map(|c| c.p).collect(),
            });
        }
        Ok(())
    }

    pub fn smallest_field(
        &self,
        g: TorsionGroup,
        max_abs_disc: u64,
    ) -> Result<SmallestField, ClassifyError> {
        if CurveId::for_group(g).is_none() {
            return Err(ClassifyError::NotCataloged(g));
        }
        let mut scanned = Vec::new();
        let mut unknown = Vec::new();
        for d in fields_by_discriminant(max_abs_disc) {
            let status = self.classify(&QuadField::new(d)?, g)?;
            if status.verdict.appears() {
                return Ok(SmallestField {
                    d,
                    conditional: !unknown.is_empty(),
                    unknown,
                    scanned,
                    status,
                });
            }
            if status.verdict == Verdict::Unknown {
                unknown.push(d);
            }
            scanned.push(ScannedField {
                d,
                verdict: status.verdict,
            });
        }
        Err(ClassifyError::Exhausted(max_abs_disc))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScannedField {
    pub d: i64,
    #[serde(flatten)]
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmallestField {
    pub d: i64,
    /// Some smaller field was left `UNKNOWN`.
    pub conditional: bool,
    pub unknown: Vec<i64>,
    /// Fields before `d`, in scan order.
    pub scanned: Vec<ScannedField>,
    pub status: ClassificationStatus,
}

/// Squarefree `d ∉ {0, 1}` with `|Δ| ≤ max`, by ascending `|Δ|`, positive `d` first on ties.
pub fn fields_by_discriminant(max_abs_disc: u64) -> Vec<i64> {
    let bound = max_abs_disc as i64;
    let mut out: Vec<(i64, bool, i64)> = (-bound..=bound)
        .filter(|&d| d != 0 && d != 1 && is_squarefree(d))
        .filter_map(|d| {
            let disc = field_discriminant(d).ok()?.abs();
            (disc <= bound).then_some((disc, d < 0, d))
        })
        .collect();
    out.sort();
    out.into_iter().map(|(_, _, d)| d).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn status(d: i64, g: &str) -> ClassificationStatus {
        Classifier::default()
            .with_budget(SearchBudget::small())
            .classify(&QuadField::new(d).unwrap(), TorsionGroup::parse(g).unwrap())
            .unwrap()
    }

    #[test]
    fn field_order() {
        assert_eq!(
            fields_by_discriminant(13),
            vec![-3, -1, 5, -7, 2, -2, -11, 3, 13]
        );
    }

    #[test]
    fn mazur_group_everywhere() {
        let s = status(101, "2x8");
        assert_eq!(s.verdict, Verdict::AppearsInfinitely);
        assert_eq!(s.replay(), s.verdict);
    }

    #[test]
    fn cyclotomic_groups() {
        assert_eq!(status(-3, "3x3").verdict, Verdict::Unknown);
        assert!(matches!(
            status(5, "4x4").verdict,
            Verdict::Impossible {
                reason: ImpossibleReason::OnlyOver(_)
            }
        ));
    }

    #[test]
    fn kenku_momose_excludes_eighteen() {
        let s = status(2, "18");
        assert_eq!(
            s.verdict,
            Verdict::Impossible {
                reason: ImpossibleReason::KenkuMomose(KmCondition::I)
            }
        );
    }

    #[test]
    fn eleven_over_minus_seven_is_infinite() {
        assert_eq!(status(-7, "11").verdict, Verdict::AppearsInfinitely);
    }

    #[test]
    fn status_json_roundtrip() {
        let s = status(-7, "14");
        let j = serde_json::to_string(&s).unwrap();
        let back: ClassificationStatus = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.replay(), s.verdict);
    }
}
