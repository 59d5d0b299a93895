//! Acceptance suite: one PASS/FAIL line per criterion, exact comparisons only.
//!
//! Randomised checks draw from `ChaCha8Rng::seed_from_u64(SEED)`.
//!
//! One criterion is known to be unattainable: the law `exp(log X + log Y)` built
//! from `log = sum [k]_q T^k / k` is `(X + Y - (1+q)XY)/(1 - qXY)`, which is not
//! the printed closed form. That line prints FAIL. The process exits nonzero if
//! any other criterion fails, or if the known failure stops looking exactly as
//! documented.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qorient::fgl::{
    cartier_check, cp_image, drinfeld_form, exp_chi, f_chi_closed, f_chi_from_log, f_chi_log_closed_form, log_chi,
    specialize_q0, verify_fgl, FormalGroupLaw, CARTIER_DERIVED,
};
use qorient::lambda::{
    adams, exercise32, lambda_k_closed, lambda_t, newton_adams_from_lambda, thom_class, witt_add, ExponentVariant,
    QExpandable, EX32_DIRECT, EX32_SHIFT,
};
use qorient::mobius::Mobius;
use qorient::multi::BiPoly;
use qorient::qcomb::{discriminant, euler_phi, poch_inf_product, poch_inf_sum, q_expand};
use qorient::scalar::{is_cromulent, Scalar};
use qorient::series::{QSeries, Series};
use qorient::varieties::{diagram_check, euler_specialize, hodge, products_of_projective_spaces, yz_to_q, Variety};

const SEED: u64 = 0x5EED_0001;
const RANDOM_CASES: usize = 50;

/// Criteria expected to fail, with the reason printed next to them.
const KNOWN_FAILURES: &[(usize, &str)] = &[(
    3,
    "exp(log X + log Y) = (X + Y - (1+q)XY)/(1 - qXY) for the pinned logarithm; the printed closed form differs at XY",
)];

struct Outcome {
    passed: bool,
    notes: Vec<String>,
    /// Whether a known failure looks exactly as documented.
    pinned: bool,
}

impl Outcome {
    fn new() -> Self {
        Outcome { passed: true, notes: Vec::new(), pinned: true }
    }

    fn check(&mut self, label: &str, ok: bool) {
        if !ok {
            self.passed = false;
            self.notes.push(format!("failed: {label}"));
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

fn q_geometric() -> Scalar {
    Scalar::q_poly(&[1, -1]).inv().unwrap()
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `1 + q + ... + q^(k-1)` from `(1 - q^k)/(1 - q)`, independent of the library's helper.
fn q_number(k: u64) -> Scalar {
    (Scalar::one() - Scalar::q_pow(k as i64)).checked_div(&Scalar::q_poly(&[1, -1])).unwrap()
}

fn c1_mobius_pair() -> Outcome {
    let mut o = Outcome::new();
    let (q, qi) = (Mobius::q_matrix(), Mobius::q_inv_matrix());
    let one_minus_q = Scalar::q_poly(&[1, -1]);
    let target = Mobius::new(one_minus_q.clone(), Scalar::zero(), Scalar::zero(), one_minus_q.clone()).unwrap();
    o.check("[Q][Q^-1] = (1-q) I", q.mul(&qi) == target);
    o.check("[Q^-1][Q] = (1-q) I", qi.mul(&q) == target);
    o.check("det [Q] = 1 - q", q.det() == one_minus_q);
    o.check("det [Q^-1] = 1 - q", qi.det() == one_minus_q);
    o
}

fn c2_log_exp() -> Outcome {
    let mut o = Outcome::new();
    let n = 20;
    let (l, e) = (log_chi(n), exp_chi(n));
    let t = Series::variable('T', n);
    o.check("exp(log T) = T", e.compose(&l).unwrap() == t);
    o.check("log(exp T) = T", l.compose(&e).unwrap() == t);
    for k in 1..=n as u64 {
        let want = q_number(k).scale(&BigRational::new(1.into(), BigInt::from(k)));
        o.check(&format!("[T^{k}] log = [{k}]_q/{k}"), l.coeff(k as usize) == want);
    }
    o.check("exp = reverse(log)", l.reverse().unwrap() == e);
    o
}

fn c3_law() -> Outcome {
    let mut o = Outcome::new();
    let n = 12;
    let closed = f_chi_closed(n);
    let from_log = f_chi_from_log(n);
    let diff = from_log.series.first_difference(&closed.series);
    o.check("exp(log X + log Y) equals the closed form", diff.is_none());
    if let Some((i, j)) = diff {
        o.note(format!("first difference at X^{i} Y^{j}"));
    }
    let report = verify_fgl(&closed, n);
    o.check("closed form: unit", report.passed("unit"));
    o.check("closed form: commutativity", report.passed("commutativity"));
    o.check("closed form: associativity", report.passed("associativity"));
    o.check("closed form: every coefficient in Z[q]", closed.series.terms_by_degree().iter().all(|(_, c)| c.in_z_q()));
    // q = 0 on the closed rational form: (X + Y + XY)/1, compared as functions
    let at_zero = f_chi_closed_form_at_q0();
    let mult = BiPoly::from_terms([((1, 0), Scalar::one()), ((0, 1), Scalar::one()), ((1, 1), Scalar::one())]);
    o.check("closed form at q = 0 is X + Y + XY", at_zero.0.sub(&mult.mul(&at_zero.1)).is_zero());
    o.check(
        "closed series at q = 0 is X + Y + XY",
        specialize_q0(&closed.series).unwrap() == mult.to_series(('X', 'Y'), n),
    );

    // pin the failure: the log law is the other closed form, and is itself a law
    let alt = FormalGroupLaw::from_closed(f_chi_log_closed_form(), n).unwrap();
    o.pinned = diff == Some((1, 1))
        && from_log.series == alt.series
        && verify_fgl(&from_log, n).all_passed()
        && *from_log.coeff(1, 1) == -Scalar::q_poly(&[1, 1]);
    o
}

fn f_chi_closed_form_at_q0() -> (BiPoly<Scalar>, BiPoly<Scalar>) {
    let f = qorient::fgl::f_chi_closed_form();
    let at0 = |c: &Scalar| c.specialize_q0().unwrap();
    (f.num.map(at0), f.den.map(at0))
}

fn c4_orientation() -> Outcome {
    let mut o = Outcome::new();
    for n in 0..=10u64 {
        let v = cp_image(n);
        o.check(&format!("CP^{n} -> 1 + ... + q^{n}"), v == Scalar::q_poly(&vec![1; n as usize + 1]));
        o.check(&format!("CP^{n} at q = 1"), v.eval_q1().unwrap() == int(n as i64 + 1));
    }
    o
}

fn c5_drinfeld() -> Outcome {
    let mut o = Outcome::new();
    let d = drinfeld_form(10);
    let expected = FormalGroupLaw::from_closed(
        qorient::fgl::ClosedForm {
            num: BiPoly::from_terms([
                ((1, 0), Scalar::one()),
                ((0, 1), Scalar::one()),
                ((1, 1), Scalar::s_pow(-1) + Scalar::s()),
            ]),
            den: BiPoly::from_terms([((0, 0), Scalar::one()), ((1, 1), Scalar::one())]),
        },
        10,
    )
    .unwrap();
    o.check("rescaled law equals the closed form", d.rescaled.series == expected.series);
    o.check("rescaled law passes the axioms", verify_fgl(&d.rescaled, 10).all_passed());
    o.check("library report", d.report.all_passed());
    o
}

fn c6_cartier() -> Outcome {
    let mut o = Outcome::new();
    let r = cartier_check(6, 8);
    o.check("exactly one candidate", r.passing.len() == 1);
    o.check("the derived exponent (1-q)^-1", r.passing == [CARTIER_DERIVED]);
    for c in &r.report.checks {
        o.note(format!("{}: {}", c.name, if c.passed { "holds" } else { "fails" }));
    }
    o
}

fn c7_cromulent() -> Outcome {
    let mut o = Outcome::new();
    for k in 1..=20u64 {
        let a = q_number(k).inv().unwrap();
        o.check(&format!("1/[{k}]_q cromulent"), is_cromulent(&a).unwrap());
        o.check(&format!("1/[{k}]_q at q = 0"), a.eval_q0().unwrap() == int(1));
        o.check(&format!("1/[{k}]_q at q = 1"), a.eval_q1().unwrap() == BigRational::new(1.into(), BigInt::from(k)));
    }
    o.check("1/(1-q) is not cromulent", !is_cromulent(&q_geometric()).unwrap());
    o
}

fn c8_pochhammer() -> Outcome {
    let mut o = Outcome::new();
    let (nt, nq) = (8, 30);
    let prod = poch_inf_product(nt, nq);
    o.check("sum form = product form", poch_inf_sum(nt, nq) == prod);
    let lam = lambda_t(&QExpandable::new(q_geometric(), nq).unwrap(), nt, nq).unwrap().at_minus_t();
    o.check("lambda route = product form", lam.body() == &prod);
    let mut printed_failures = 0;
    for k in 1..=8u64 {
        let r = lambda_k_closed(k, nq).unwrap();
        o.check(&format!("k={k}: binom(k,2) variant selected"), r.selected() == Some(ExponentVariant::Binomial));
        if !r.printed_matches {
            printed_failures += 1;
        }
    }
    o.check("printed k(k+1)/2 variant fails for every k", printed_failures == 8);
    o.note("selected exponent: binom(k,2) for k = 1..8");
    o
}

fn random_virtual(rng: &mut ChaCha8Rng) -> Vec<i64> {
    (0..=6).map(|_| rng.gen_range(-3..=3)).collect()
}

fn c9_adams() -> Outcome {
    let mut o = Outcome::new();
    for k in 1..=10u32 {
        let want = Scalar::one().checked_div(&(Scalar::one() - Scalar::q_pow(k as i64))).unwrap();
        o.check(&format!("psi^{k}"), adams(&q_geometric(), k).unwrap() == want);
    }
    let w = lambda_t(&QExpandable::new(q_geometric(), 30).unwrap(), 10, 30).unwrap();
    for (i, psi) in newton_adams_from_lambda(&w, 10).iter().enumerate() {
        let k = i as u32 + 1;
        let want = q_expand(&adams(&q_geometric(), k).unwrap(), 30).unwrap();
        o.check(&format!("Newton psi^{k} to q^30"), psi == &want);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    for _ in 0..RANDOM_CASES {
        let (a, b) = (random_virtual(&mut rng), random_virtual(&mut rng));
        let sum: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let l = |v: &[i64]| lambda_t(&QExpandable::from_multiplicities(v, 20), 6, 20).unwrap();
        o.check("lambda_t additive", witt_add(&l(&a), &l(&b)).body() == l(&sum).body());
    }
    o
}

/// `q prod_{n>=1} (1 - q^n)^24` with machine integers.
fn brute_discriminant(order: usize) -> Vec<i64> {
    let mut c = vec![0i64; order + 1];
    c[0] = 1;
    for n in 1..=order {
        for _ in 0..24 {
            for d in (n..=order).rev() {
                c[d] -= c[d - n];
            }
        }
    }
    let mut out = vec![0i64; order + 1];
    out[1..].copy_from_slice(&c[..order]);
    out
}

fn brute_phi(order: usize) -> Vec<i64> {
    let mut c = vec![0i64; order + 1];
    c[0] = 1;
    for n in 1..=order {
        for d in (n..=order).rev() {
            c[d] -= c[d - n];
        }
    }
    c
}

fn as_ints(f: &QSeries) -> Vec<i64> {
    (0..=f.order()).map(|k| i64::try_from(f.coeff(k).to_integer()).unwrap()).collect()
}

fn c10_thom_discriminant() -> Outcome {
    let mut o = Outcome::new();
    let thom = thom_class(30).unwrap();
    o.check("thom_class(30) = euler_phi(30)", thom.value == euler_phi(30));
    o.check("literal t = 1 reading vanishes", thom.literal.is_zero());

    let phi = brute_phi(30);
    o.check("euler_phi = naive product", as_ints(&euler_phi(30)) == phi);
    let pentagonal: Vec<(usize, i64)> = (-5i64..=5)
        .map(|k| ((k * (3 * k - 1) / 2) as usize, if k % 2 == 0 { 1 } else { -1 }))
        .filter(|(p, _)| *p <= 30)
        .collect();
    for (n, &c) in phi.iter().enumerate() {
        let want = pentagonal.iter().find(|(p, _)| *p == n).map_or(0, |(_, s)| *s);
        o.check(&format!("pentagonal pattern at q^{n}"), c == want);
    }

    let oracle = brute_discriminant(12);
    o.check("discriminant(12) = oracle", as_ints(&discriminant(12)) == oracle);
    o.check("oracle q^2..q^6", oracle[2..=6] == [-24, 252, -1472, 4830, -6048]);
    o.note(format!("oracle q^2..q^6 = {:?}", &oracle[2..=6]));

    let (report, _) = exercise32(12).unwrap();
    o.check("exercise (b) matches the discriminant", report.passed(EX32_SHIFT));
    o.check("exercise (a) does not", !report.passed(EX32_DIRECT));
    o
}

fn c11_diagram() -> Outcome {
    let mut o = Outcome::new();
    let all = products_of_projective_spaces(3, 4);
    o.check("125 varieties", all.len() == 125);
    for v in &all {
        o.check(&format!("diagram {}", v.label()), diagram_check(v).all_passed());
        let h = hodge(v);
        let e = euler_specialize(&h, v.dim());
        o.check(
            &format!("Euler consistency {}", v.label()),
            e.ok && yz_to_q(&h).unwrap().eval_q1().unwrap() == int(e.chi),
        );
    }
    for a in all.iter().step_by(7) {
        for b in all.iter().step_by(11) {
            o.check("Hodge multiplicativity", hodge(&a.times(b)) == hodge(a).mul(&hodge(b)));
        }
    }
    o.check("point", diagram_check(&Variety::point()).all_passed());
    o
}

fn rand_poly(rng: &mut ChaCha8Rng, max_deg: usize) -> Scalar {
    let d = rng.gen_range(0..=max_deg);
    Scalar::q_poly(&(0..=d).map(|_| rng.gen_range(-3..=3)).collect::<Vec<i64>>())
}

fn rand_series(rng: &mut ChaCha8Rng, order: usize) -> Series<Scalar> {
    Series::new('T', order, (0..=order).map(|_| rand_poly(rng, 2)).collect())
}

fn c12_properties() -> Outcome {
    let mut o = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let n = 6;

    let mut ring = 0;
    for _ in 0..RANDOM_CASES {
        let (a, b, c) = (rand_series(&mut rng, n), rand_series(&mut rng, n), rand_series(&mut rng, n));
        let ok = &(&a + &b) + &c == &a + &(&b + &c)
            && &a * &b == &b * &a
            && &(&a * &b) * &c == &a * &(&b * &c)
            && &a * &(&b + &c) == &(&a * &b) + &(&a * &c)
            && (&a + &(-&a)).is_zero()
            && &a * &Series::one('T', n) == a;
        ring += ok as usize;
    }
    o.check("series ring axioms", ring == RANDOM_CASES);

    let mut rev = 0;
    for _ in 0..RANDOM_CASES {
        let mut f = rand_series(&mut rng, n);
        let mut c = f.coeffs().to_vec();
        c.resize(n + 1, Scalar::zero());
        c[0] = Scalar::zero();
        // a unit linear term keeps every coefficient of the reverse a Laurent polynomial
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        c[1] = Scalar::q_pow(rng.gen_range(-2..=2)).scale(&int(sign));
        f = Series::new('T', n, c);
        let g = f.reverse().unwrap();
        let t = Series::variable('T', n);
        rev += (f.compose(&g).unwrap() == t && g.compose(&f).unwrap() == t) as usize;
    }
    o.check("reversion round trips", rev == RANDOM_CASES);

    let mut hom = 0;
    let mut tried = 0;
    while hom < RANDOM_CASES && tried < 20 * RANDOM_CASES {
        tried += 1;
        let mut m = || {
            let e: Vec<i64> = (0..4).map(|_| rng.gen_range(-3..=3)).collect();
            Mobius::from_ints(e[0], e[1], e[2], e[3]).ok()
        };
        let (Some(a), Some(b)) = (m(), m()) else { continue };
        let mut f = rand_series(&mut rng, n);
        f = f.shift_up(1).truncate(n);
        let (Ok(inner), Ok(ab)) = (b.apply(&f), a.mul(&b).apply(&f)) else { continue };
        let Ok(outer) = a.apply(&inner) else { continue };
        if outer == ab {
            hom += 1;
        } else {
            o.check("Mobius action homomorphism", false);
            break;
        }
    }
    o.check("Mobius action homomorphism on 50 instances", hom == RANDOM_CASES);

    let mut newton = 0;
    for _ in 0..RANDOM_CASES {
        let a = random_virtual(&mut rng);
        let w = lambda_t(&QExpandable::from_multiplicities(&a, 20), 6, 20).unwrap();
        let ok = newton_adams_from_lambda(&w, 6).iter().enumerate().all(|(i, psi)| {
            let want = q_expand(&adams(&Scalar::q_poly(&a), i as u32 + 1).unwrap(), 20).unwrap();
            psi == &want
        });
        newton += ok as usize;
    }
    o.check("lambda/psi Newton consistency", newton == RANDOM_CASES);
    o.note(format!("seed {SEED:#x}, {RANDOM_CASES} instances per property"));
    o
}

type Criterion = (usize, &'static str, fn() -> Outcome, Option<Duration>);

fn main() {
    let criteria: [Criterion; 12] = [
        (1, "Mobius pair [Q], [Q^-1] multiply to (1-q) I", c1_mobius_pair, None),
        (2, "log/exp inverse, log coefficients, reversion", c2_log_exp, Some(Duration::from_secs(5))),
        (3, "formal group law from log vs closed form", c3_law, Some(Duration::from_secs(30))),
        (4, "orientation images of CP^n", c4_orientation, None),
        (5, "half-integral rescaled law", c5_drinfeld, None),
        (6, "Cartier identity exponent", c6_cartier, None),
        (7, "cromulent inverses of q-integers", c7_cromulent, None),
        (8, "Pochhammer sum/product/lambda routes", c8_pochhammer, None),
        (9, "Adams operations and Newton extraction", c9_adams, None),
        (10, "Thom class, Euler function, discriminant", c10_thom_discriminant, Some(Duration::from_secs(10))),
        (11, "Hodge / sl2 / orientation diagram", c11_diagram, Some(Duration::from_secs(10))),
        (12, "randomised property suites", c12_properties, None),
    ];
    let mut unexpected = Vec::new();
    let mut passed = 0;
    for (id, title, f, limit) in criteria {
        let start = Instant::now();
        let mut out = f();
        let elapsed = start.elapsed();
        if let Some(l) = limit {
            if elapsed > l {
                out.passed = false;
                out.notes.push(format!("runtime {elapsed:.2?} exceeds {l:?}"));
            }
        }
        let status = if out.passed { "PASS" } else { "FAIL" };
        println!("criterion {id:>2}: {status}  {title}  ({elapsed:.2?})");
        for n in &out.notes {
            println!("    {n}");
        }
        let known = KNOWN_FAILURES.iter().find(|(k, _)| *k == id);
        match (out.passed, known) {
            (true, None) => passed += 1,
            (false, Some((_, why))) if out.pinned => println!("    known failure: {why}"),
            (false, Some(_)) => unexpected.push(format!("criterion {id} fails differently than documented")),
            (true, Some(_)) => unexpected.push(format!("criterion {id} now passes; update KNOWN_FAILURES")),
            (false, None) => unexpected.push(format!("criterion {id} failed")),
        }
    }
    println!("{passed}/12 criteria pass; {} known failure(s)", KNOWN_FAILURES.len());
    if !unexpected.is_empty() {
        for u in &unexpected {
            eprintln!("{u}");
        }
        std::process::exit(1);
    }
}
