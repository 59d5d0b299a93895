use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

use qorient::fgl::{self, cartier_check, cp_image, f_chi_closed, f_chi_from_log, fgl_inverse, log_chi, verify_fgl};
use qorient::lambda::{self, adams, lambda_k_closed, lambda_t, newton_adams_from_lambda, QExpandable};
use qorient::mobius::Mobius;
use qorient::multi::BiSeries;
use qorient::qcomb::{discriminant, euler_phi, poch_inf_product, poch_inf_sum, q_expand, q_fact, q_int, TqSeries};
use qorient::report::VerificationReport;
use qorient::scalar::{cyclotomic, Scalar};
use qorient::series::{QSeries, Series};
use qorient::varieties::{diagram_check, parse_catalog, products_of_projective_spaces, Variety};

use crate::expr::{eval_str, parse_expr};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "qorient", version, about = "Exact computations with the q-deformed orientation of complex cobordism")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Total-degree or T-order for formal-group targets.
    #[arg(long, global = true, default_value_t = 10)]
    pub order: usize,
    /// Order in the formal parameter t.
    #[arg(long = "t-order", global = true, default_value_t = 6)]
    pub t_order: usize,
    /// Order in q for q-series.
    #[arg(long = "q-order", global = true, default_value_t = 30)]
    pub q_order: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the coefficient table of a named series.
    Expand {
        #[arg(value_enum)]
        target: Target,
        /// Argument of lambda_t, as a scalar expression.
        #[arg(long, default_value = "1/(1-q)")]
        of: String,
    },
    /// Run a verification suite; exit status 1 if any check fails.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Catalog file for the diagram suite (lines `name n1 n2 ...`).
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    /// Evaluate a scalar expression to its canonical form.
    Eval { expr: String },
    /// Check the commutative diagram for CP^n1 x ... x CP^nr.
    Diagram {
        factors: Vec<u32>,
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    /// Print a small table of named values for n = 0..=order.
    Table {
        #[arg(value_enum)]
        kind: TableKind,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Target {
    LogChi,
    ExpChi,
    FChi,
    Drinfeld,
    FglInverse,
    EulerPhi,
    Discriminant,
    Pochhammer,
    LambdaT,
    ThomClass,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Lemma21,
    FglAxioms,
    /// Compares exp(log X + log Y) with the printed closed form of the law.
    LogLaw,
    Mishchenko,
    Adams,
    PochhammerIdentity,
    LambdaK,
    Cartier,
    Exercise32,
    Diagram,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    CpImage,
    QInt,
    QFact,
    Cyclotomic,
    LambdaK,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Degree {
    One(usize),
    Two(usize, usize),
}

impl Degree {
    fn to_json(&self) -> Value {
        match self {
            Degree::One(d) => json!(d),
            Degree::Two(i, j) => json!([i, j]),
        }
    }
}

/// A coefficient table, ascending degree; bivariate tables by total degree then `(i, j)`.
#[derive(Clone, Debug)]
pub struct Table {
    pub target: String,
    pub orders: BTreeMap<&'static str, usize>,
    pub rows: Vec<(Degree, String)>,
}

impl Table {
    pub fn to_json(&self) -> Value {
        let coefficients: Vec<Value> =
            self.rows.iter().map(|(d, v)| json!({"degree": d.to_json(), "value": v})).collect();
        json!({"target": self.target, "orders": self.orders, "coefficients": coefficients})
    }

    pub fn to_plain(&self) -> String {
        let orders: Vec<String> = self.orders.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let mut s = format!("{} ({})\n", self.target, orders.join(", "));
        for (d, v) in &self.rows {
            let deg = match d {
                Degree::One(k) => k.to_string(),
                Degree::Two(i, j) => format!("{i},{j}"),
            };
            s.push_str(&format!("{deg:>6}  {v}\n"));
        }
        s
    }
}

fn rational_str(r: &BigRational) -> String {
    Scalar::from_rational(r.clone()).to_string()
}

fn univariate<C: qorient::series::Coeff>(f: &Series<C>, show: impl Fn(&C) -> String) -> Vec<(Degree, String)> {
    (0..=f.order()).map(|k| (Degree::One(k), show(&f.coeff(k)))).collect()
}

fn bivariate(f: &BiSeries<Scalar>) -> Vec<(Degree, String)> {
    f.terms_by_degree().into_iter().map(|((i, j), c)| (Degree::Two(i, j), c.to_string())).collect()
}

/// Nonzero `t^k q^m` entries, by total degree then `(k, m)`.
fn tq_rows(w: &TqSeries, q_order: usize) -> Vec<(Degree, String)> {
    let mut rows = Vec::new();
    for d in 0..=(w.order() + q_order) {
        for k in 0..=d.min(w.order()) {
            let m = d - k;
            if m > q_order {
                continue;
            }
            let c = w.coeff(k).coeff(m);
            if !c.is_zero() {
                rows.push((Degree::Two(k, m), rational_str(&c)));
            }
        }
    }
    rows
}

fn orders(pairs: &[(&'static str, usize)]) -> BTreeMap<&'static str, usize> {
    pairs.iter().copied().collect()
}

pub fn expand(cli: &Cli, target: Target, of: &str) -> Result<Table, String> {
    let (n, nt, nq) = (cli.order, cli.t_order, cli.q_order);
    let name = target.to_possible_value().expect("no skipped variants").get_name().to_string();
    let scalar = |c: &Scalar| c.to_string();
    let (ord, rows) = match target {
        Target::LogChi => (orders(&[("order", n)]), univariate(&log_chi(n), scalar)),
        Target::ExpChi => (orders(&[("order", n)]), univariate(&fgl::exp_chi(n), scalar)),
        Target::FChi => (orders(&[("order", n)]), bivariate(&f_chi_closed(n).series)),
        Target::Drinfeld => (orders(&[("order", n)]), bivariate(&fgl::drinfeld_form(n).rescaled.series)),
        Target::FglInverse => {
            let inv = fgl_inverse(&f_chi_closed(n), n).map_err(|e| e.to_string())?;
            (orders(&[("order", n)]), univariate(&inv, scalar))
        }
        Target::EulerPhi => (orders(&[("q_order", nq)]), univariate(&euler_phi(nq), rational_str)),
        Target::Discriminant => {
            if nq == 0 {
                return Err("discriminant needs --q-order at least 1".into());
            }
            (orders(&[("q_order", nq)]), univariate(&discriminant(nq), rational_str))
        }
        Target::Pochhammer => (orders(&[("t_order", nt), ("q_order", nq)]), tq_rows(&poch_inf_product(nt, nq), nq)),
        Target::LambdaT => {
            let a = eval_str(of)?;
            let a = QExpandable::new(a, nq).map_err(|e| e.to_string())?;
            let w = lambda_t(&a, nt, nq).map_err(|e| e.to_string())?;
            (orders(&[("t_order", nt), ("q_order", nq)]), tq_rows(w.body(), nq))
        }
        Target::ThomClass => {
            let t = lambda::thom_class(nq).map_err(|e| e.to_string())?;
            (orders(&[("q_order", nq)]), univariate(&t.value, rational_str))
        }
    };
    Ok(Table { target: name, orders: ord, rows })
}

fn expect(report: &mut VerificationReport, name: String, passed: bool, detail: Option<String>) {
    report.push(name, &[], passed, detail);
}

fn compare_q(a: &QSeries, b: &QSeries) -> Option<String> {
    let n = a.order().min(b.order());
    (0..=n).find(|&k| a.coeff(k) != b.coeff(k)).map(|k| format!("first difference at q^{k}"))
}

pub fn verify(cli: &Cli, suite: Suite, catalog: Option<&PathBuf>) -> Result<VerificationReport, String> {
    let (n, nt, nq) = (cli.order, cli.t_order, cli.q_order);
    let mut r = VerificationReport::new();
    let one_minus_q = Scalar::q_poly(&[1, -1]);
    let geometric = one_minus_q.inv().expect("nonzero");
    match suite {
        Suite::Lemma21 => {
            let (q, qi) = (Mobius::q_matrix(), Mobius::q_inv_matrix());
            let target = Mobius::scalar(one_minus_q.clone()).expect("invertible");
            expect(&mut r, "[Q][Q^-1] = (1-q) I".into(), q.mul(&qi) == target, None);
            expect(&mut r, "[Q^-1][Q] = (1-q) I".into(), qi.mul(&q) == target, None);
            expect(&mut r, "det [Q] = 1 - q".into(), q.det() == one_minus_q, Some(q.det().to_string()));
            expect(&mut r, "det [Q^-1] = 1 - q".into(), qi.det() == one_minus_q, Some(qi.det().to_string()));
        }
        Suite::FglAxioms => {
            let closed = f_chi_closed(n);
            for c in verify_fgl(&closed, n).checks {
                r.push(format!("closed form: {}", c.name), &c.order, c.passed, c.detail);
            }
            let bad = closed.series.terms_by_degree().into_iter().find(|(_, c)| !c.in_z_q());
            r.push("closed form: coefficients in Z[q]", &[n], bad.is_none(), bad.map(|(d, c)| format!("{d:?}: {c}")));
            for c in verify_fgl(&f_chi_from_log(n), n).checks {
                r.push(format!("exp(log X + log Y): {}", c.name), &c.order, c.passed, c.detail);
            }
        }
        Suite::LogLaw => {
            let diff = f_chi_from_log(n).series.first_difference(&f_chi_closed(n).series);
            r.push(
                "exp(log X + log Y) = (X + Y + (1+q)XY)/(1 + qXY)",
                &[n],
                diff.is_none(),
                diff.map(|(i, j)| format!("first difference at X^{i} Y^{j}")),
            );
            let alt = fgl::FormalGroupLaw::from_closed(fgl::f_chi_log_closed_form(), n).map_err(|e| e.to_string())?;
            let diff = f_chi_from_log(n).series.first_difference(&alt.series);
            r.push(
                "exp(log X + log Y) = (X + Y - (1+q)XY)/(1 - qXY)",
                &[n],
                diff.is_none(),
                diff.map(|(i, j)| format!("first difference at X^{i} Y^{j}")),
            );
        }
        Suite::Mishchenko => {
            let l = log_chi(n + 1);
            for k in 0..=n as u64 {
                let v = cp_image(k);
                expect(&mut r, format!("CP^{k} -> [{}]_q", k + 1), v == q_int(k + 1), Some(v.to_string()));
                let q1 = v.eval_q1().map_err(|e| e.to_string())?;
                expect(
                    &mut r,
                    format!("CP^{k} at q = 1 is {}", k + 1),
                    q1 == BigRational::from_integer((k as i64 + 1).into()),
                    None,
                );
            }
            for k in 1..=n as u64 + 1 {
                let c = l.coeff(k as usize);
                let want = fgl::log_coefficient(k);
                expect(&mut r, format!("[T^{k}] log = [{k}]_q/{k}"), c == want, Some(c.to_string()));
            }
        }
        Suite::Adams => {
            for k in 1..=n as u32 {
                let got = adams(&geometric, k).map_err(|e| e.to_string())?;
                let want = (Scalar::one() - Scalar::q_pow(k as i64)).inv().expect("nonzero");
                expect(&mut r, format!("psi^{k} (1-q)^-1 = (1-q^{k})^-1"), got == want, Some(got.to_string()));
            }
            let a = QExpandable::new(geometric.clone(), nq).map_err(|e| e.to_string())?;
            let w = lambda_t(&a, nt, nq).map_err(|e| e.to_string())?;
            for (i, psi) in newton_adams_from_lambda(&w, nt).iter().enumerate() {
                let k = i as u32 + 1;
                let want =
                    q_expand(&adams(&geometric, k).map_err(|e| e.to_string())?, nq).map_err(|e| e.to_string())?;
                let diff = compare_q(psi, &want);
                r.push(format!("Newton psi^{k} from lambda_t"), &[nt, nq], diff.is_none(), diff);
            }
        }
        Suite::PochhammerIdentity => {
            let prod = poch_inf_product(nt, nq);
            let sum = poch_inf_sum(nt, nq);
            let a = QExpandable::new(geometric.clone(), nq).map_err(|e| e.to_string())?;
            let lam = lambda_t(&a, nt, nq).map_err(|e| e.to_string())?.at_minus_t();
            r.push("sum form = product form", &[nt, nq], sum == prod, None);
            r.push("lambda_{-t}((1-q)^-1) = product form", &[nt, nq], lam.body() == &prod, None);
        }
        Suite::LambdaK => {
            for k in 1..=nt as u64 {
                let rep = lambda_k_closed(k, nq).map_err(|e| e.to_string())?;
                r.push(format!("k={k}: t^k coefficient = e_k oracle"), &[nq], rep.witt_matches, None);
                r.push(format!("k={k}: exponent binom(k,2) matches"), &[nq], rep.binomial_matches, None);
                r.push(format!("k={k}: printed exponent k(k+1)/2 rejected"), &[nq], !rep.printed_matches, None);
            }
        }
        Suite::Cartier => {
            let c = cartier_check(nt, n);
            for chk in c.report.checks {
                let expected = chk.name == fgl::CARTIER_DERIVED;
                let name = if expected { format!("holds: {}", chk.name) } else { format!("rejected: {}", chk.name) };
                r.push(name, &chk.order, chk.passed == expected, chk.detail);
            }
            r.push("exactly one candidate holds", &[nt, n], c.passing.len() == 1, Some(c.passing.join("; ")));
        }
        Suite::Exercise32 => {
            let (rep, cands) = lambda::exercise32(nq.max(2)).map_err(|e| e.to_string())?;
            for chk in rep.checks {
                if chk.name == lambda::EX32_DIRECT {
                    r.push(
                        format!("does not realise the discriminant: {}", chk.name),
                        &chk.order,
                        !chk.passed,
                        chk.detail,
                    );
                } else {
                    r.push(chk.name, &chk.order, chk.passed, chk.detail);
                }
            }
            let vanishes =
                cands.iter().find(|(name, _)| *name == lambda::EX32_DIRECT).is_some_and(|(_, c)| c.is_zero());
            r.push("(a) vanishes identically", &[nq], vanishes, None);
        }
        Suite::Diagram => {
            let list = match catalog {
                Some(path) => load_catalog(path)?,
                None => products_of_projective_spaces(3, 4),
            };
            for v in list {
                for c in diagram_check(&v).checks {
                    r.push(format!("{}: {}", v.label(), c.name), &c.order, c.passed, c.detail);
                }
            }
        }
    }
    Ok(r)
}

fn load_catalog(path: &PathBuf) -> Result<Vec<Variety>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_catalog(&text).map_err(|e| e.to_string())
}

pub fn table(cli: &Cli, kind: TableKind) -> Result<Table, String> {
    let n = cli.order;
    let mut rows = Vec::new();
    for k in 0..=n as u64 {
        let v = match kind {
            TableKind::CpImage => cp_image(k).to_string(),
            TableKind::QInt => q_int(k).to_string(),
            TableKind::QFact => q_fact(k).to_string(),
            TableKind::Cyclotomic if k == 0 => continue,
            TableKind::Cyclotomic => cyclotomic(k).to_string(),
            TableKind::LambdaK if k == 0 => continue,
            TableKind::LambdaK => lambda_k_closed(k, cli.q_order).map_err(|e| e.to_string())?.binomial.to_string(),
        };
        rows.push((Degree::One(k as usize), v));
    }
    let name = kind.to_possible_value().expect("no skipped variants").get_name().to_string();
    Ok(Table { target: name, orders: orders(&[("order", n)]), rows })
}

fn report_json(name: &str, r: &VerificationReport) -> Value {
    json!({"suite": name, "passed": r.all_passed(), "checks": r.checks})
}

fn report_plain(name: &str, r: &VerificationReport) -> String {
    let ok = r.checks.iter().filter(|c| c.passed).count();
    format!("{r}{name}: {ok}/{} checks passed\n", r.checks.len())
}

fn emit_report(cli: &Cli, name: &str, r: &VerificationReport, out: &mut dyn Write) -> i32 {
    let text = match cli.format {
        Format::Json => format!("{}\n", report_json(name, r)),
        Format::Plain => report_plain(name, r),
    };
    let _ = out.write_all(text.as_bytes());
    exit_code(std::slice::from_ref(r))
}

/// 0 when every check of every report passed, 1 otherwise.
pub fn exit_code(reports: &[VerificationReport]) -> i32 {
    if reports.iter().all(VerificationReport::all_passed) {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    let usage = |err: &mut dyn Write, msg: String| {
        let _ = writeln!(err, "error: {msg}");
        EXIT_USAGE
    };
    match &cli.command {
        Command::Expand { target, of } => match expand(&cli, *target, of) {
            Ok(t) => {
                let text = match cli.format {
                    Format::Json => format!("{}\n", t.to_json()),
                    Format::Plain => t.to_plain(),
                };
                let _ = out.write_all(text.as_bytes());
                EXIT_OK
            }
            Err(m) => usage(err, m),
        },
        Command::Verify { suite, catalog } => match verify(&cli, *suite, catalog.as_ref()) {
            Ok(r) => {
                let name = suite.to_possible_value().expect("no skipped variants").get_name().to_string();
                emit_report(&cli, &name, &r, out)
            }
            Err(m) => usage(err, m),
        },
        Command::Eval { expr } => {
            let parsed = match parse_expr(expr) {
                Ok(p) => p,
                Err(e) => return usage(err, e.to_string()),
            };
            match parsed.eval() {
                Ok(v) => {
                    let text = match cli.format {
                        Format::Json => format!("{}\n", json!({"expr": expr, "value": v.to_string()})),
                        Format::Plain => format!("{v}\n"),
                    };
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                Err(e) => usage(err, e.to_string()),
            }
        }
        Command::Diagram { factors, catalog } => {
            let list = match catalog {
                Some(p) => match load_catalog(p) {
                    Ok(l) => l,
                    Err(m) => return usage(err, m),
                },
                None => vec![Variety::product(factors)],
            };
            let mut r = VerificationReport::new();
            for v in &list {
                for c in diagram_check(v).checks {
                    r.push(format!("{}: {}", v.label(), c.name), &c.order, c.passed, c.detail);
                }
                if cli.format == Format::Plain {
                    let (h, _, _) = qorient::varieties::diagram_routes(v);
                    let _ = writeln!(out, "{} -> {h}", v.label());
                }
            }
            emit_report(&cli, "diagram", &r, out)
        }
        Command::Table { kind } => match table(&cli, *kind) {
            Ok(t) => {
                let text = match cli.format {
                    Format::Json => format!("{}\n", t.to_json()),
                    Format::Plain => t.to_plain(),
                };
                let _ = out.write_all(text.as_bytes());
                EXIT_OK
            }
            Err(m) => usage(err, m),
        },
    }
}
