//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process exits nonzero if any fails.

use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use quadtors::arith::is_prime;
use quadtors::classify::fixtures::{builtin_fixtures, resolve_points, verify_fixtures};
use quadtors::classify::golden::{
    gcd_bound_checks, jacobian_golden_checks, ledger_inconsistencies,
};
use quadtors::classify::Classifier;
use quadtors::density::{density_scan, psi, psi_inverse};
use quadtors::ellcurve::reduce::count_points_elliptic;
use quadtors::ellcurve::torsion::{torsion_certify, SearchBudget};
use quadtors::ellcurve::{EllCurve, EllPoint, TorsionGroup};
use quadtors::ffield::FpElem;
use quadtors::genus2::{zeta, zeta_base_change, HyperCurve};
use quadtors::modcurves::{
    is_cusp_point, kenku_momose_conditions_of, kenku_momose_z18, record, CurveId, KmCondition,
    Ledger,
};
use quadtors::qfield::{is_squarefree, rat_int, splitting_type, QuadElem, QuadField, SplitType};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let took = start.elapsed();
    o.detail = format!("{} [{:.2}s]", o.detail, took.as_secs_f64());
    if let Some(limit) = limit {
        if took > limit {
            o.pass = false;
            o.detail = format!("{} exceeds {}s", o.detail, limit.as_secs());
        }
    }
    o
}

fn criterion_1() -> Outcome {
    let checks = jacobian_golden_checks();
    let bad: Vec<_> = checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| format!("{}={:?}", c.label, c.computed))
        .collect();
    outcome(
        checks.len() == 9 && bad.is_empty(),
        format!(
            "{}/9 Jacobian orders; mismatches {bad:?}",
            checks.len() - bad.len()
        ),
    )
}

fn criterion_2() -> Outcome {
    let checks = gcd_bound_checks();
    let bounds_ok = checks.len() == 2 && checks.iter().all(|c| c.pass);
    let flagged = ledger_inconsistencies(&Ledger::builtin())
        .into_iter()
        .any(|i| i.curve == CurveId::X1_13 && i.stated == 21 && i.computed_bound == 19);
    let got: Vec<_> = checks
        .iter()
        .map(|c| format!("{}={:?}", c.label, c.computed))
        .collect();
    outcome(
        bounds_ok && flagged,
        format!("{got:?}; stated 21 flagged: {flagged}"),
    )
}

fn criterion_3() -> Outcome {
    let fixtures = builtin_fixtures();
    let reports = verify_fixtures(&fixtures, &Ledger::builtin());
    let mut problems = Vec::new();
    for r in &reports {
        if !(r.pass && r.on_curve && r.torsion_exact && r.generated == Some(r.claimed)) {
            problems.push(format!("{}: {:?}", r.name, r.error));
        }
    }
    let mut claimed: Vec<String> = reports.iter().map(|r| r.claimed.spec()).collect();
    claimed.sort();
    claimed.dedup();
    let expected = ["11", "13", "14", "15", "16", "18", "2x10", "2x12"];
    if claimed != expected {
        problems.push(format!("groups covered {claimed:?}"));
    }
    let reading = reports.iter().find_map(|r| r.reading.clone());
    match &reading {
        Some(c)
            if c.chosen == Some(17) && !c.printed_reading_on_curve && c.curve_reading_on_curve => {}
        other => problems.push(format!("thirteen-torsion reading {other:?}")),
    }
    outcome(
        problems.is_empty(),
        format!("{} fixtures certified; √-7 reading on curve: false, √17 reading: true; problems {problems:?}", reports.len()),
    )
}

fn x11_check<F: quadtors::ellcurve::reduce::NumberFieldElement>(
    sample: &F,
    label: &str,
) -> Result<(), String> {
    let rec = record(CurveId::X1_11);
    let e = rec.elliptic_model(sample).ok_or("no elliptic model")?;
    let cert = torsion_certify(&e, &[], Some(SearchBudget::small()))
        .map_err(|err| format!("{label}: {err}"))?;
    if cert.lower != TorsionGroup::cyclic(5).unwrap() || !cert.exact() {
        return Err(format!(
            "{label}: lower {} upper {}",
            cert.lower, cert.upper_order
        ));
    }
    let zero = sample.zero_like();
    let one = sample.one_like();
    for p in &cert.elements {
        if let Some(x) = p.x() {
            if !(*x == zero || *x == one) || !is_cusp_point(&rec, p) {
                return Err(format!("{label}: torsion point with x = {x}"));
            }
        }
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    let mut errs = Vec::new();
    if let Err(e) = x11_check(&rat_int(0), "Q") {
        errs.push(e);
    }
    for d in [-1, -3, 5, -7] {
        let k = QuadField::new(d).unwrap();
        if let Err(e) = x11_check(&k.zero(), &format!("Q(√{d})")) {
            errs.push(e);
        }
    }
    outcome(
        errs.is_empty(),
        format!("Z/5, all x in {{0,1}} over Q, Q(√-1), Q(√-3), Q(√5), Q(√-7); errors {errs:?}"),
    )
}

fn criterion_5() -> Outcome {
    use KmCondition::*;
    let grouped: [(i64, &[KmCondition]); 9] = [
        (2, &[I]),
        (-19, &[I]),
        (-31, &[I]),
        (17, &[I]),
        (21, &[I, II]),
        (-11, &[II]),
        (13, &[II]),
        (-7, &[III]),
        (-15, &[III]),
    ];
    let mut mismatches = Vec::new();
    for (d, classes) in grouped {
        let got = kenku_momose_z18(&QuadField::new(d).unwrap());
        if !got.is_some_and(|c| classes.contains(&c)) {
            mismatches.push(format!("{d}: expected {classes:?}, got {got:?}"));
        }
    }
    for d in [-2, 3, 23, 6, -6, 33] {
        let got = kenku_momose_z18(&QuadField::new(d).unwrap());
        if got.is_some() {
            mismatches.push(format!("{d}: expected NONE, got {got:?}"));
        }
    }
    outcome(mismatches.is_empty(), format!("mismatches {mismatches:?}"))
}

fn criterion_7() -> Outcome {
    let mut problems = Vec::new();
    for n in 1..=100_000u64 {
        let n = BigUint::from(n);
        let d = psi_inverse(&n).unwrap();
        if psi(&d).unwrap() != n {
            problems.push(format!("psi(psi_inverse({n})) != {n}"));
            break;
        }
    }
    for d in -100_000i64..=100_000 {
        if d == 0 || d == 1 || !is_squarefree(d) {
            continue;
        }
        let b = BigInt::from(d);
        if psi_inverse(&psi(&b).unwrap()).unwrap() != b {
            problems.push(format!("psi_inverse(psi({d})) != {d}"));
            break;
        }
    }
    let s = density_scan(1 << 14).unwrap();
    if s.ratio < 55.0 / 64.0 - 0.02 {
        problems.push(format!("ratio {:.4}", s.ratio));
    }
    if !(0.23..=0.27).contains(&s.frac_i) {
        problems.push(format!("frac_i {:.4}", s.frac_i));
    }
    if !(0.17..=0.21).contains(&s.frac_ii) {
        problems.push(format!("frac_ii {:.4} outside [0.17, 0.21]", s.frac_ii));
    }
    if s.overlap_i_ii != 0 {
        problems.push(format!("{} fields satisfy (i) and (ii)", s.overlap_i_ii));
    }
    outcome(
        problems.is_empty(),
        format!(
            "t=2^14 ratio {:.4} frac_i {:.4} frac_ii {:.4} frac_iii {:.4}; problems {problems:?}",
            s.ratio, s.frac_i, s.frac_ii, s.frac_iii
        ),
    )
}

fn criterion_6() -> Outcome {
    let c = Classifier::new(Ledger::builtin());
    let expected: [(&str, i64); 7] = [
        ("11", -7),
        ("15", 5),
        ("16", -15),
        ("2x10", -2),
        ("2x12", 13),
        ("13", 17),
        ("18", 33),
    ];
    let mut got = Vec::new();
    let mut pass = true;
    for (g, d) in expected {
        let group = TorsionGroup::parse(g).unwrap();
        match c.smallest_field(group, 200) {
            Ok(s) => {
                let cond_ok = !s.conditional || g == "2x10";
                pass &= s.d == d && cond_ok;
                let mark = if s.conditional {
                    format!(" conditional on {:?}", s.unknown)
                } else {
                    String::new()
                };
                got.push(format!("{g}->{}{mark}", s.d));
            }
            Err(e) => {
                pass = false;
                got.push(format!("{g}: {e}"));
            }
        }
    }
    outcome(pass, got.join(", "))
}

fn hasse(rng: &mut StdRng) -> Result<usize, String> {
    let primes: Vec<u64> = (5..400).filter(|&p| is_prime(p)).collect();
    let mut done = 0;
    while done < 100 {
        let p = primes[rng.gen_range(0..primes.len())];
        let c: Vec<FpElem> = (0..5)
            .map(|_| FpElem::from_i64(rng.gen_range(-50..=50), p))
            .collect();
        let Ok(e) = EllCurve::new(c[0], c[1], c[2], c[3], c[4]) else {
            continue;
        };
        let n = count_points_elliptic(&e).map_err(|e| e.to_string())?;
        let trace = p as i64 + 1 - n as i64;
        if trace * trace > 4 * p as i64 {
            return Err(format!("p={p} count {n}"));
        }
        done += 1;
    }
    Ok(done)
}

fn weil_and_base_change() -> Result<(usize, usize), String> {
    let mut zetas = 0;
    let mut changes = 0;
    for id in [CurveId::X1_13, CurveId::X1_16, CurveId::X1_18] {
        let f = record(id).hyperelliptic_poly().unwrap().clone();
        for p in (3..60).filter(|&p| is_prime(p)) {
            let Ok(c) = HyperCurve::new(f.clone(), p) else {
                continue;
            };
            let z = zeta(&c).map_err(|e| e.to_string())?;
            if !z.within_weil_bounds() || z.eval(1) <= 0 {
                return Err(format!("{} p={p}: {z:?}", id.name()));
            }
            zetas += 1;
            if p <= 5 && id != CurveId::X1_16 {
                let q = zeta_base_change(&c).map_err(|e| e.to_string())?;
                if !q.within_weil_bounds() || q.eval(1) <= 0 {
                    return Err(format!("{} p={p}^2: {q:?}", id.name()));
                }
                zetas += 1;
                if q.eval(1) != z.eval(1) * z.eval(-1) {
                    return Err(format!(
                        "{} p={p}: Q(1)={} P(1)P(-1)={}",
                        id.name(),
                        q.eval(1),
                        z.eval(1) * z.eval(-1)
                    ));
                }
                changes += 1;
            }
        }
    }
    Ok((zetas, changes))
}

fn associativity(rng: &mut StdRng) -> Result<usize, String> {
    let mut triples = 0;
    for f in builtin_fixtures() {
        let e = f.curve().map_err(|e| e.to_string())?;
        let mut pool: Vec<EllPoint<QuadElem>> = resolve_points(&f)
            .0
            .iter()
            .filter_map(|p| e.point(p.x.clone(), p.y.clone()).ok())
            .collect();
        pool.extend(
            e.search(SearchBudget {
                max_u: 6,
                max_v: 3,
                max_w: 4,
            })
            .into_iter()
            .take(6),
        );
        if pool.is_empty() {
            return Err(format!("{}: no points", f.name));
        }
        let pick = |rng: &mut StdRng| {
            let p = &pool[rng.gen_range(0..pool.len())];
            e.scalar_mul(rng.gen_range(-3..=3), p)
        };
        for _ in 0..200 {
            let (a, b, c) = (pick(rng), pick(rng), pick(rng));
            let left = e.add(&e.add(&a, &b), &c);
            let right = e.add(&a, &e.add(&b, &c));
            if left != right || !e.contains(&left) {
                return Err(format!("{}: ({a:?}+{b:?})+{c:?}", f.name));
            }
            triples += 1;
        }
    }
    Ok(triples)
}

/// Splitting read off the factorization of the minimal polynomial of the ring generator mod `p`.
fn split_by_factoring(d: i64, p: u64) -> SplitType {
    let p = p as i64;
    // x² − d, or x² − x − (d − 1)/4 when d ≡ 1 mod 4
    let (b, c) = if d.rem_euclid(4) == 1 {
        (-1, -(d - 1) / 4)
    } else {
        (0, -d)
    };
    match (0..p)
        .filter(|x| (x * x + b * x + c).rem_euclid(p) == 0)
        .count()
    {
        0 => SplitType::Inert,
        1 => SplitType::Ramified,
        _ => SplitType::Split,
    }
}

fn splitting() -> Result<usize, String> {
    let mut cases = 0;
    for d in (-50..=50).filter(|&d| d != 0 && d != 1 && is_squarefree(d)) {
        let k = QuadField::new(d).unwrap();
        for p in (2..=100).filter(|&p| is_prime(p)) {
            let (got, want) = (splitting_type(&k, p), split_by_factoring(d, p));
            if got != want {
                return Err(format!("d={d} p={p}: {got:?} vs {want:?}"));
            }
            cases += 1;
        }
    }
    Ok(cases)
}

fn km_exclusive() -> Result<usize, String> {
    let mut n = 0;
    for d in (-1000..=1000).filter(|&d| d != 0 && d != 1 && is_squarefree(d)) {
        let c = kenku_momose_conditions_of(d);
        if c.contains(&KmCondition::I) && c.contains(&KmCondition::II) {
            return Err(format!("d={d} satisfies (i) and (ii)"));
        }
        n += 1;
    }
    Ok(n)
}

fn criterion_8() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let results = [
        hasse(&mut rng).map(|n| format!("Hasse {n}")),
        weil_and_base_change().map(|(z, b)| format!("Weil {z} zetas, base change {b}")),
        associativity(&mut rng).map(|n| format!("associativity {n} triples")),
        splitting().map(|n| format!("splitting {n} cases")),
        km_exclusive().map(|n| format!("(i)/(ii) exclusive on {n} fields")),
    ];
    let pass = results.iter().all(|r| r.is_ok());
    let parts: Vec<String> = results
        .into_iter()
        .map(|r| r.unwrap_or_else(|e| format!("FAILED {e}")))
        .collect();
    outcome(pass, parts.join("; "))
}

type Criterion = (&'static str, Option<u64>, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 Jacobian-order goldens", Some(30), criterion_1),
        ("2 torsion gcd bounds", None, criterion_2),
        ("3 fixture verification", Some(10), criterion_3),
        ("4 X1(11) torsion is cuspidal", None, criterion_4),
        ("5 Kenku-Momose table", None, criterion_5),
        ("6 smallest fields", Some(120), criterion_6),
        ("7 psi and density", Some(60), criterion_7),
        ("8 property suites", None, criterion_8),
    ];
    let mut failed = 0;
    for (name, limit, run) in criteria {
        let o = timed(limit.map(Duration::from_secs), run);
        failed += !o.pass as u32;
        println!(
            "{} criterion {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
