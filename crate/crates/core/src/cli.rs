//! Command-line front end. [`run`] is the whole program minus process I/O.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::classify::fixtures::{builtin_fixtures, load_fixtures, verify_fixtures, FixtureReport};
use crate::classify::golden::VerificationReport;
use crate::classify::{ClassificationStatus, Classifier, Evidence, SmallestField};
use crate::density::{density_scan, psi_inverse_u64};
use crate::ellcurve::torsion::SearchBudget;
use crate::ellcurve::TorsionGroup;
use crate::genus2::{count_hyper_points, zeta, zeta_base_change, HyperCurve};
use crate::modcurves::{record, CurveId, Ledger};
use crate::qfield::{squarefree_reduce, QuadField};

#[derive(Debug, Parser)]
#[command(
    name = "quadtors",
    about = "Torsion of elliptic curves over quadratic fields",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Print JSON instead of a table.
    #[arg(long, global = true)]
    pub json: bool,
    /// Facts ledger (JSON lines); overrides `QUADTORS_LEDGER`.
    #[arg(long, global = true)]
    pub ledger: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct BudgetArgs {
    /// Search box bound on `|u|` in `x = (u + v√d)/w`.
    #[arg(long, default_value_t = SearchBudget::default().max_u)]
    pub max_u: i64,
    #[arg(long, default_value_t = SearchBudget::default().max_v)]
    pub max_v: i64,
    #[arg(long, default_value_t = SearchBudget::default().max_w)]
    pub max_w: i64,
}

impl From<BudgetArgs> for SearchBudget {
    fn from(b: BudgetArgs) -> Self {
        SearchBudget {
            max_u: b.max_u,
            max_v: b.max_v,
            max_w: b.max_w,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify one torsion group over Q(√d).
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        /// "n" for Z/n, "mxn" for Z/m x Z/n.
        #[arg(long)]
        group: String,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Smallest |Δ| field over which the group is shown to occur.
    Smallest {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 100)]
        max_disc: u64,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Point count and Jacobian order of a genus-2 modular curve over F_{p^ext}.
    JacobianOrder {
        #[arg(long)]
        curve: String,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        ext: u32,
    },
    /// Verify torsion of curves given in a fixture file.
    Torsion {
        #[arg(long)]
        curve_file: PathBuf,
    },
    /// Kenku-Momose density over the first t fields in ψ order.
    Density {
        #[arg(long)]
        t: u64,
    },
    /// Check fixture curves and the X1(13) Jacobian reference values.
    VerifyPaper {
        /// Fixture file to use instead of the shipped one.
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
}

/// Exit code and the text for stdout and stderr.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, stderr: String) -> Self {
        Output {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn usage(msg: impl std::fmt::Display) -> Output {
    Output::fail(2, format!("error: {msg}\n"))
}

fn compute(msg: impl std::fmt::Display) -> Output {
    Output::fail(1, format!("error: {msg}\n"))
}

/// The radicand after removing square factors, with a warning if it changed.
fn field_arg(d: i64, warnings: &mut String) -> Result<QuadField, Output> {
    let (core, c) = squarefree_reduce(d).map_err(usage)?;
    if c != 1 {
        let _ = writeln!(
            warnings,
            "warning: d = {d} reduced to its squarefree part {core}"
        );
    }
    QuadField::new(core).map_err(usage)
}

pub fn run<I, S>(argv: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Output::ok(text)
            } else {
                Output::fail(code, text)
            };
        }
    };
    let ledger = match Ledger::resolve(cli.ledger.as_deref()) {
        Ok(l) => l,
        Err(e) => return usage(e),
    };
    let mut warnings = String::new();
    let mut out = dispatch(&cli, ledger, &mut warnings);
    out.stderr = warnings + &out.stderr;
    out
}

fn dispatch(cli: &Cli, ledger: Ledger, warnings: &mut String) -> Output {
    match &cli.command {
        Command::Classify { d, group, budget } => {
            let k = match field_arg(*d, warnings) {
                Ok(k) => k,
                Err(o) => return o,
            };
            let g = match TorsionGroup::parse(group) {
                Ok(g) => g,
                Err(e) => return usage(e),
            };
            let c = Classifier::new(ledger).with_budget((*budget).into());
            match c.classify(&k, g) {
                Ok(s) if cli.json => Output::ok(json(&s)),
                Ok(s) => Output::ok(status_table(&s)),
                Err(e) => compute(e),
            }
        }
        Command::Smallest {
            group,
            max_disc,
            budget,
        } => {
            let g = match TorsionGroup::parse(group) {
                Ok(g) => g,
                Err(e) => return usage(e),
            };
            if CurveId::for_group(g).is_none() {
                return usage(format!("{g} has no cataloged modular curve"));
            }
            let c = Classifier::new(ledger).with_budget((*budget).into());
            match c.smallest_field(g, *max_disc) {
                Ok(s) if cli.json => Output::ok(json(&s)),
                Ok(s) => Output::ok(smallest_table(&s)),
                Err(e) => compute(e),
            }
        }
        Command::JacobianOrder { curve, p, ext } => jacobian_order(cli.json, curve, *p, *ext),
        Command::Torsion { curve_file } => match load_fixtures(curve_file) {
            Ok(fx) => {
                let reports = verify_fixtures(&fx, &ledger);
                let text = if cli.json {
                    json(&reports)
                } else {
                    fixture_table(&reports)
                };
                let code = if reports.iter().all(|r| r.pass) { 0 } else { 1 };
                Output {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            }
            Err(e) => compute(e),
        },
        Command::Density { t } => match density_scan(*t) {
            Ok(s) if cli.json => Output::ok(json(&s)),
            Ok(s) => {
                let mut o = String::new();
                let _ = writeln!(o, "t        {}", s.t);
                let _ = writeln!(o, "N_t      {}", s.n_t);
                let _ = writeln!(o, "A_t      {}", s.a_t);
                let _ = writeln!(o, "ratio    {:.6}", s.ratio);
                let _ = writeln!(o, "frac_i   {:.6}", s.frac_i);
                let _ = writeln!(o, "frac_ii  {:.6}", s.frac_ii);
                let _ = writeln!(o, "frac_iii {:.6}", s.frac_iii);
                if s.t == 1 {
                    let d = psi_inverse_u64(1).expect("ψ⁻¹(1)");
                    let _ = writeln!(o, "field    Q(√{d})");
                }
                Output::ok(o)
            }
            Err(e) => usage(e),
        },
        Command::VerifyPaper { fixtures } => {
            let fx = match fixtures {
                Some(p) => match load_fixtures(p) {
                    Ok(f) => f,
                    Err(e) => return compute(e),
                },
                None => builtin_fixtures(),
            };
            let report = VerificationReport::run(&fx, &ledger);
            let text = if cli.json {
                json(&report)
            } else {
                verification_table(&report)
            };
            let code = if report.all_pass() { 0 } else { 1 };
            Output {
                code,
                stdout: text,
                stderr: String::new(),
            }
        }
    }
}

#[derive(Serialize)]
struct JacobianOrderOut {
    curve: CurveId,
    p: u64,
    ext: u32,
    count: u64,
    c1: i64,
    c2: i64,
    jacobian_order: u64,
}

fn jacobian_order(as_json: bool, curve: &str, p: u64, ext: u32) -> Output {
    let id: CurveId = match curve.parse() {
        Ok(c) => c,
        Err(e) => return usage(e),
    };
    let rec = record(id);
    let Some(f) = rec.hyperelliptic_poly() else {
        return usage(format!(
            "{id} is not a genus-2 curve; expected X1_13, X1_16 or X1_18"
        ));
    };
    if !matches!(ext, 1 | 2 | 4) {
        return usage(format!(
            "extension degree {ext} not supported; use 1, 2 or 4"
        ));
    }
    let result = HyperCurve::new(f.clone(), p).and_then(|c| {
        let count = count_hyper_points(&c, ext)?;
        let (z, order) = match ext {
            1 => {
                let z = zeta(&c)?;
                (z, z.jacobian_order())
            }
            2 => {
                let z = zeta(&c)?;
                (z, z.jacobian_order_ext())
            }
            _ => {
                let z = zeta_base_change(&c)?;
                (z, z.jacobian_order_ext())
            }
        };
        Ok(JacobianOrderOut {
            curve: id,
            p,
            ext,
            count,
            c1: z.c1,
            c2: z.c2,
            jacobian_order: order,
        })
    });
    match result {
        Ok(r) if as_json => Output::ok(json(&r)),
        Ok(r) => Output::ok(format!(
            "curve {}  p {}  ext {}\n#C = {}  c1 = {}  c2 = {}\n|J| = {} = {}\n",
            r.curve,
            r.p,
            r.ext,
            r.count,
            r.c1,
            r.c2,
            r.jacobian_order,
            crate::arith::format_factored(r.jacobian_order)
        )),
        Err(e) => compute(e),
    }
}

fn evidence_line(e: &Evidence) -> String {
    match e {
        Evidence::Fact { fact } => format!("fact      {fact}"),
        Evidence::KenkuMomose { condition } => format!("kenku-momose condition {condition} holds"),
        Evidence::TorsionCertificate { lower, upper_order, exact, cuspidal, noncuspidal } => format!(
            "torsion   generated {lower}, order divides {upper_order}{}; {cuspidal} cuspidal, {} noncuspidal",
            if *exact { " (exact)" } else { "" },
            noncuspidal.len()
        ),
        Evidence::NontorsionPoint { point } => format!("point     {point} has infinite order"),
        Evidence::JacobianBound { field, bound, .. } => {
            let k = if *field == 1 { "Q".to_string() } else { format!("Q(√{field})") };
            format!("jacobian  |J({k})_tors| divides {bound}")
        }
        Evidence::Witness { fixture, group, point } => format!("witness   {fixture}: {point} gives {group}"),
        Evidence::SearchHits { count, .. } => format!("search    {count} noncuspidal points in box"),
    }
}

fn status_table(s: &ClassificationStatus) -> String {
    let mut o = String::new();
    let _ = writeln!(o, "field     Q(√{})", s.field);
    let _ = writeln!(o, "group     {}", s.group);
    let _ = writeln!(o, "verdict   {}", s.verdict);
    for e in &s.evidence {
        let _ = writeln!(o, "  {}", evidence_line(e));
    }
    o
}

fn smallest_table(s: &SmallestField) -> String {
    let mut o = String::new();
    let _ = writeln!(
        o,
        "smallest  Q(√{}){}",
        s.d,
        if s.conditional { "  (conditional)" } else { "" }
    );
    for f in &s.scanned {
        let _ = writeln!(o, "  d = {:>4}  {}", f.d, f.verdict);
    }
    if s.conditional {
        let _ = writeln!(o, "  unresolved: {:?}", s.unknown);
    }
    o + &status_table(&s.status)
}

fn fixture_table(reports: &[FixtureReport]) -> String {
    let mut o = String::new();
    let _ = writeln!(
        o,
        "{:<10} {:>5} {:<13} {:<8} {:<12} {:<6}",
        "curve", "d", "claimed", "on-curve", "orders", "result"
    );
    for r in reports {
        let orders: Vec<String> = r
            .orders
            .iter()
            .map(|n| n.map_or("inf".to_string(), |n| n.to_string()))
            .collect();
        let _ = writeln!(
            o,
            "{:<10} {:>5} {:<13} {:<8} {:<12} {}",
            r.name,
            r.d,
            r.claimed.to_string(),
            r.on_curve,
            orders.join(","),
            if r.pass { "PASS" } else { "FAIL" }
        );
        if let Some(c) = &r.reading {
            let _ = writeln!(
                o,
                "  reading: printed √{} on curve: {}; √{} on curve: {}; kept {:?}",
                c.printed_d,
                c.printed_reading_on_curve,
                c.curve_d,
                c.curve_reading_on_curve,
                c.chosen
            );
        }
        if let (Some(false), Some(c)) = (r.printed_on_curve, &r.correction) {
            let _ = writeln!(o, "  printed point rejected, using correction: {c}");
        }
        for f in &r.imported {
            let _ = writeln!(o, "  imported: {f}");
        }
        if let Some(e) = &r.error {
            let _ = writeln!(o, "  error: {e}");
        }
    }
    o
}

fn verification_table(r: &VerificationReport) -> String {
    let mut o = fixture_table(&r.fixtures);
    o.push('\n');
    for c in r.jacobian_orders.iter().chain(&r.gcd_bounds) {
        let computed = c.computed.map_or("error".to_string(), |n| n.to_string());
        let _ = writeln!(
            o,
            "{:<30} expected {:>8}  computed {:>8}  {}",
            c.label,
            c.expected,
            computed,
            if c.pass { "PASS" } else { "FAIL" }
        );
    }
    for i in &r.inconsistencies {
        let _ = writeln!(
            o,
            "flag: {} stated |J(Q)_tors| = {} but the computed bound is {}: \"{}\"",
            i.curve, i.stated, i.computed_bound, i.citation
        );
    }
    o
}
