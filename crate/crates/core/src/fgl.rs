//! The formal group law `F(X, Y) = (X + Y + (1+q)XY)/(1 + qXY)` over `Z[q]`: its
//! logarithm and exponential, two independent constructions of the law, the
//! axiom checks, the rescaled half-integral form, the formal inverse, the
//! orientation images of projective spaces, and the Cartier-character identity.

use num_rational::BigRational;
use thiserror::Error;

use crate::mobius::{Mobius, MobiusError};
use crate::multi::{BiPoly, BiSeries, TriSeries};
use crate::qcomb::q_int;
use crate::report::VerificationReport;
use crate::scalar::{Scalar, ScalarError};
use crate::series::{Series, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FglError {
    #[error("law does not satisfy the unit axiom: {0}")]
    NotUnital(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Mobius(#[from] MobiusError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

pub const XY: (char, char) = ('X', 'Y');

/// A law given as an exact quotient of bivariate polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedForm {
    pub num: BiPoly<Scalar>,
    pub den: BiPoly<Scalar>,
}

impl ClosedForm {
    pub fn expand(&self, order: usize) -> Result<BiSeries<Scalar>, FglError> {
        Ok(self.num.to_series(XY, order).div(&self.den.to_series(XY, order))?)
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> ClosedForm {
        ClosedForm { num: self.num.map(&f), den: self.den.map(&f) }
    }

    /// Equality as rational functions: `n1 d2 = n2 d1`.
    pub fn same_function(&self, other: &ClosedForm) -> bool {
        self.num.mul(&other.den).sub(&other.num.mul(&self.den)).is_zero()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FormalGroupLaw {
    pub series: BiSeries<Scalar>,
    pub closed: Option<ClosedForm>,
}

impl FormalGroupLaw {
    pub fn from_closed(closed: ClosedForm, order: usize) -> Result<Self, FglError> {
        Ok(FormalGroupLaw { series: closed.expand(order)?, closed: Some(closed) })
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }

    pub fn coeff(&self, i: usize, j: usize) -> &Scalar {
        self.series.coeff(i, j)
    }
}

fn one_minus_q() -> Scalar {
    Scalar::q_poly(&[1, -1])
}

fn mono(i: usize, j: usize, c: Scalar) -> ((usize, usize), Scalar) {
    ((i, j), c)
}

/// `log(T) = |Q|^{-1} log [Q](T)` with `|Q| = 1 - q`.
pub fn log_chi(order: usize) -> Series<Scalar> {
    let t = Series::variable('T', order);
    let q_of_t = Mobius::q_matrix().apply(&t).expect("[Q](T) has constant term 1");
    let inv = one_minus_q().inv().expect("1 - q is nonzero");
    q_of_t.log1().expect("[Q](0) = 1").scale(&inv)
}

/// `exp(T) = [Q^{-1}](exp(|Q| T))`.
pub fn exp_chi(order: usize) -> Series<Scalar> {
    let e = Series::monomial('T', one_minus_q(), 1, order).exp0().expect("zero constant term");
    Mobius::q_inv_matrix().apply(&e).expect("exp(|Q|T) - q has constant term 1 - q")
}

/// The closed form `(X + Y + (1+q)XY) / (1 + qXY)`.
pub fn f_chi_closed_form() -> ClosedForm {
    ClosedForm {
        num: BiPoly::from_terms([
            mono(1, 0, Scalar::one()),
            mono(0, 1, Scalar::one()),
            mono(1, 1, Scalar::q_poly(&[1, 1])),
        ]),
        den: BiPoly::from_terms([mono(0, 0, Scalar::one()), mono(1, 1, Scalar::q())]),
    }
}

/// The law expanded from its closed form to total degree `order`.
pub fn f_chi_closed(order: usize) -> FormalGroupLaw {
    FormalGroupLaw::from_closed(f_chi_closed_form(), order).expect("1 + qXY is invertible")
}

/// The law as `exp(log X + log Y)`, without reference to the closed form.
pub fn f_chi_from_log(order: usize) -> FormalGroupLaw {
    let l = log_chi(order);
    let sum = &BiSeries::from_x(&l, XY, order) + &BiSeries::from_y(&l, XY, order);
    let series = sum.compose_into(&exp_chi(order)).expect("log has zero constant term");
    FormalGroupLaw { series, closed: None }
}

/// `(X + Y - (1+q)XY) / (1 - qXY)`, the law actually produced by `exp(log X + log Y)`:
/// `[Q](F) = [Q](X)[Q](Y)` with `[Q](T) = (1 - qT)/(1 - T)`. Its sign conjugate
/// `-F(-X, -Y)` has numerator `X + Y + (1+q)XY` but denominator `1 - qXY`.
pub fn f_chi_log_closed_form() -> ClosedForm {
    ClosedForm {
        num: BiPoly::from_terms([
            mono(1, 0, Scalar::one()),
            mono(0, 1, Scalar::one()),
            mono(1, 1, -Scalar::q_poly(&[1, 1])),
        ]),
        den: BiPoly::from_terms([mono(0, 0, Scalar::one()), mono(1, 1, -Scalar::q())]),
    }
}

/// `-F(-X, -Y)`.
pub fn negation_conjugate(law: &BiSeries<Scalar>) -> BiSeries<Scalar> {
    BiSeries::from_fn(law.vars(), law.order(), |i, j| {
        let c = law.coeff(i, j);
        if (i + j) % 2 == 0 {
            -c
        } else {
            c.clone()
        }
    })
}

/// `X + Y + XY`.
pub fn multiplicative_law(order: usize) -> FormalGroupLaw {
    let closed = ClosedForm {
        num: BiPoly::from_terms([mono(1, 0, Scalar::one()), mono(0, 1, Scalar::one()), mono(1, 1, Scalar::one())]),
        den: BiPoly::from_terms([mono(0, 0, Scalar::one())]),
    };
    FormalGroupLaw::from_closed(closed, order).expect("denominator one")
}

fn describe_xy((i, j): (usize, usize)) -> String {
    format!("first difference at total degree {} (X^{i} Y^{j})", i + j)
}

fn describe_xyz((i, j, k): (usize, usize, usize)) -> String {
    format!("first difference at total degree {} (X^{i} Y^{j} Z^{k})", i + j + k)
}

/// Unit, commutativity and associativity of `law`, each to total degree `order`.
pub fn verify_fgl(law: &FormalGroupLaw, order: usize) -> VerificationReport {
    let f = law.series.truncate(order);
    let n = f.order();
    let mut report = VerificationReport::new();

    let unit_fail = (0..=n).flat_map(|d| [(d, 0), (0, d)]).find(|&(i, j)| {
        let expected = if i + j == 1 { Scalar::one() } else { Scalar::zero() };
        f.coeff(i, j) != &expected
    });
    report.push("unit", &[n], unit_fail.is_none(), unit_fail.map(describe_xy));

    let comm = f.first_difference(&f.swap());
    report.push("commutativity", &[n], comm.is_none(), comm.map(describe_xy));

    let x = TriSeries::variable(0, n);
    let z = TriSeries::variable(2, n);
    let assoc = f
        .substitute(&TriSeries::embed(&f, (0, 1)), &z)
        .and_then(|lhs| Ok((lhs, f.substitute(&x, &TriSeries::embed(&f, (1, 2)))?)));
    match assoc {
        Ok((lhs, rhs)) => {
            let diff = lhs.first_difference(&rhs);
            report.push("associativity", &[n], diff.is_none(), diff.map(describe_xyz));
        }
        Err(e) => report.push("associativity", &[n], false, Some(e.to_string())),
    }
    report
}

/// `(n + 1) [T^(n+1)] log(T)`: the image of `CP^n`, the polynomial `1 + q + ... + q^n`.
pub fn cp_image(n: u64) -> Scalar {
    let l = log_chi(n as usize + 1);
    l.coeff(n as usize + 1).scale(&BigRational::from_integer((n + 1).into()))
}

/// The formal inverse `i(T)` with `F(T, i(T)) = 0`, solved one degree at a time.
pub fn fgl_inverse(law: &FormalGroupLaw, order: usize) -> Result<Series<Scalar>, FglError> {
    let f = law.series.truncate(order);
    let n = f.order();
    if n >= 1 && (f.coeff(1, 0) != &Scalar::one() || f.coeff(0, 1) != &Scalar::one() || !f.coeff(0, 0).is_zero()) {
        return Err(FglError::NotUnital("linear part must be X + Y".into()));
    }
    let t = Series::variable('T', n);
    let mut coeffs = vec![Scalar::zero()];
    for m in 1..=n {
        let partial = Series::new('T', m, coeffs.clone());
        let value = f.truncate(m).eval_on(&t.truncate(m), &partial)?;
        // [T^m] F(T, i) is linear in the unknown i_m with coefficient F_{0,1} = 1
        coeffs.push(-value.coeff(m));
    }
    Ok(Series::new('T', n, coeffs))
}

/// The law rescaled by `q^{1/2}`, computed in two ways.
#[derive(Clone, Debug)]
pub struct DrinfeldForm {
    /// `s F(X/s, Y/s)` with `s^2 = q`, from the expanded law.
    pub rescaled: FormalGroupLaw,
    /// `(X + Y + (s^{-1} + s)XY) / (1 + XY)`, expanded from the closed form.
    pub closed: FormalGroupLaw,
    pub report: VerificationReport,
}

pub fn drinfeld_closed_form() -> ClosedForm {
    ClosedForm {
        num: BiPoly::from_terms([
            mono(1, 0, Scalar::one()),
            mono(0, 1, Scalar::one()),
            mono(1, 1, Scalar::s_pow(-1) + Scalar::s()),
        ]),
        den: BiPoly::from_terms([mono(0, 0, Scalar::one()), mono(1, 1, Scalar::one())]),
    }
}

pub fn drinfeld_form(order: usize) -> DrinfeldForm {
    let base = f_chi_closed(order).series;
    let series = BiSeries::from_fn(XY, order, |i, j| base.coeff(i, j) * &Scalar::s_pow(1 - (i + j) as i64));
    let rescaled = FormalGroupLaw { series, closed: None };
    let closed = FormalGroupLaw::from_closed(drinfeld_closed_form(), order).expect("1 + XY is invertible");
    let mut report = VerificationReport::new();
    let diff = rescaled.series.first_difference(&closed.series);
    report.push("rescaled equals closed form", &[order], diff.is_none(), diff.map(describe_xy));
    for c in verify_fgl(&rescaled, order).checks {
        report.push(format!("rescaled law {}", c.name), &c.order, c.passed, c.detail);
    }
    DrinfeldForm { rescaled, closed, report }
}

type TSeries = Series<Series<Scalar>>;

fn first_difference_2d(a: &TSeries, b: &TSeries) -> Option<(usize, usize)> {
    let nt = a.order().min(b.order());
    for k in 0..=nt {
        let (x, y) = (a.coeff(k), b.coeff(k));
        let len = x.coeffs().len().max(y.coeffs().len());
        if let Some(m) = (0..len).find(|&m| x.coeff(m) != y.coeff(m)) {
            return Some((k, m));
        }
    }
    None
}

/// Which exponent makes `exp_G(t log(T)) = 1 - [Q](T)^{-c t}` hold.
#[derive(Clone, Debug)]
pub struct CartierReport {
    pub report: VerificationReport,
    /// Names of the passing (reading, exponent) combinations.
    pub passing: Vec<String>,
}

pub const CARTIER_DERIVED: &str = "1 - exp(-u), c = (1 - q)^-1";
pub const CARTIER_PRINTED: &str = "1 - exp(-u), c = 1 - q";
pub const CARTIER_ALT_DERIVED: &str = "exp(u) - 1, c = (1 - q)^-1";
pub const CARTIER_ALT_PRINTED: &str = "exp(u) - 1, c = 1 - q";

/// Left side `exp_G(t log T)` for `exp_G(u) = 1 - e^{-u}` (`negative = true`) or
/// `e^u - 1`, built from powers of the logarithm.
pub fn cartier_lhs(t_order: usize, big_t_order: usize, negative: bool) -> TSeries {
    let l = log_chi(big_t_order);
    let mut out = vec![Series::zero('T', big_t_order)];
    let mut power = Series::one('T', big_t_order);
    let mut fact = BigRational::from_integer(1.into());
    for k in 1..=t_order {
        power = &power * &l;
        fact *= BigRational::from_integer((k as i64).into());
        let mut term = power.scale_rational(&fact.recip());
        if negative && k % 2 == 0 {
            term = -&term;
        }
        out.push(term);
    }
    Series::new('t', t_order, out)
}

/// Right side `1 - [Q](T)^{-c t}` via the bivariate formal power.
pub fn cartier_rhs(t_order: usize, big_t_order: usize, c: &Scalar) -> TSeries {
    let q_of_t = Mobius::q_matrix().apply(&Series::variable('T', big_t_order)).expect("[Q](T) has constant term 1");
    let p = q_of_t.pow_bivariate(&-c, 't', t_order).expect("[Q](0) = 1");
    let one: TSeries = Series::constant('t', Series::one('T', big_t_order), t_order);
    &one - &p
}

pub fn cartier_check(t_order: usize, big_t_order: usize) -> CartierReport {
    let derived = one_minus_q().inv().expect("1 - q is nonzero");
    let printed = one_minus_q();
    let mut report = VerificationReport::new();
    let mut passing = Vec::new();
    let orders = [t_order, big_t_order];
    for (name, negative, c) in [
        (CARTIER_DERIVED, true, &derived),
        (CARTIER_PRINTED, true, &printed),
        (CARTIER_ALT_DERIVED, false, &derived),
        (CARTIER_ALT_PRINTED, false, &printed),
    ] {
        let lhs = cartier_lhs(t_order, big_t_order, negative);
        let rhs = cartier_rhs(t_order, big_t_order, c);
        let diff = first_difference_2d(&lhs, &rhs);
        if diff.is_none() {
            passing.push(name.to_string());
        }
        report.push(name, &orders, diff.is_none(), diff.map(|(k, m)| format!("first difference at t^{k} T^{m}")));
    }
    CartierReport { report, passing }
}

/// `[k]_q / k`, the expected logarithm coefficient.
pub fn log_coefficient(k: u64) -> Scalar {
    q_int(k).scale(&BigRational::new(1.into(), (k as i64).into()))
}

/// Specialises every coefficient of a law at `q = 0`.
pub fn specialize_q0(law: &BiSeries<Scalar>) -> Result<BiSeries<Scalar>, FglError> {
    let mut err = None;
    let out = BiSeries::from_fn(law.vars(), law.order(), |i, j| match law.coeff(i, j).specialize_q0() {
        Ok(v) => v,
        Err(e) => {
            err.get_or_insert(e);
            Scalar::zero()
        }
    });
    match err {
        Some(e) => Err(e.into()),
        None => Ok(out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_low_coefficients() {
        let l = log_chi(5);
        assert_eq!(l.coeff(1), Scalar::one());
        assert_eq!(l.coeff(2).to_string(), "(1 + q)/2");
        assert_eq!(l.coeff(5), log_coefficient(5));
        assert!(l.coeff(0).is_zero());
    }

    #[test]
    fn exp_inverts_log() {
        let e = exp_chi(8);
        assert_eq!(e.coeff(1), Scalar::one());
        assert_eq!(e.compose(&log_chi(8)).unwrap(), Series::variable('T', 8));
        assert_eq!(log_chi(8).reverse().unwrap(), e);
    }

    #[test]
    fn closed_law_coefficients() {
        let f = f_chi_closed(6);
        assert_eq!(f.coeff(1, 1), &Scalar::q_poly(&[1, 1]));
        assert_eq!(f.coeff(1, 0), &Scalar::one());
        assert_eq!(f.coeff(0, 1), &Scalar::one());
        assert!(f.coeff(0, 0).is_zero());
        assert_eq!(f.coeff(2, 1), &-Scalar::q());
        for ((_, _), c) in f.series.terms_by_degree() {
            assert!(c.in_z_q());
        }
    }

    #[test]
    fn from_log_is_the_conjugate_law() {
        let a = f_chi_from_log(7);
        let closed = f_chi_closed(7).series;
        // exp(log X + log Y) differs from the printed closed form already in the XY term
        assert_eq!(a.series.first_difference(&closed), Some((1, 1)));
        assert_eq!(a.coeff(1, 1), &-Scalar::q_poly(&[1, 1]));
        let direct = FormalGroupLaw::from_closed(f_chi_log_closed_form(), 7).unwrap();
        assert_eq!(a.series, direct.series);
        assert!(verify_fgl(&a, 7).all_passed());
        // after X -> -X only the sign of qXY in the denominator still disagrees
        let flipped = negation_conjugate(&a.series);
        assert_eq!(flipped.first_difference(&closed), Some((1, 2)));
        assert_eq!(flipped.coeff(2, 1), &Scalar::q());
    }

    #[test]
    fn q_zero_specialisations() {
        let closed = specialize_q0(&f_chi_closed(7).series).unwrap();
        assert_eq!(closed, multiplicative_law(7).series);
        // X + Y - XY, the law of -log(1 - T)
        let from_log = specialize_q0(&f_chi_from_log(7).series).unwrap();
        assert_eq!(from_log, negation_conjugate(&multiplicative_law(7).series));
    }

    #[test]
    fn axioms_hold_for_known_laws() {
        assert!(verify_fgl(&f_chi_closed(6), 6).all_passed());
        assert!(verify_fgl(&multiplicative_law(6), 6).all_passed());
    }

    #[test]
    fn non_law_fails_associativity_at_degree_four() {
        // X + Y + X^2 Y^2: the two bracketings differ by 2XYZ^2 - 2X^2YZ in degree 4
        let closed = ClosedForm {
            num: BiPoly::from_terms([mono(1, 0, Scalar::one()), mono(0, 1, Scalar::one()), mono(2, 2, Scalar::one())]),
            den: BiPoly::from_terms([mono(0, 0, Scalar::one())]),
        };
        let law = FormalGroupLaw::from_closed(closed, 6).unwrap();
        let r = verify_fgl(&law, 6);
        assert!(r.passed("unit"));
        assert!(r.passed("commutativity"));
        let assoc = r.get("associativity").unwrap();
        assert!(!assoc.passed);
        assert!(assoc.detail.as_deref().unwrap().contains("total degree 4"));
    }

    #[test]
    fn cp_images_are_q_integers() {
        assert_eq!(cp_image(0), Scalar::one());
        assert_eq!(cp_image(2), Scalar::q_poly(&[1, 1, 1]));
        for n in 0..=6u64 {
            assert_eq!(cp_image(n).eval_q1().unwrap(), BigRational::from_integer((n + 1).into()));
        }
    }

    #[test]
    fn inverses() {
        let n = 8;
        let m = fgl_inverse(&multiplicative_law(n), n).unwrap();
        let alt: Vec<Scalar> = (0..=n as i64)
            .map(|k| if k == 0 { Scalar::zero() } else { Scalar::from_int(if k % 2 == 1 { -1 } else { 1 }) })
            .collect();
        assert_eq!(m, Series::new('T', n, alt));
        // -T / (1 + (1+q)T)
        let chi = fgl_inverse(&f_chi_closed(n), n).unwrap();
        let t = Series::variable('T', n);
        let den = &Series::one('T', n) + &t.scale(&Scalar::q_poly(&[1, 1]));
        assert_eq!(chi, (-&t).div(&den).unwrap());
        assert!(chi.coeff(0).is_zero());
        let back = f_chi_closed(n).series.eval_on(&t, &chi).unwrap();
        assert!(back.is_zero());
    }

    #[test]
    fn drinfeld_small() {
        let d = drinfeld_form(5);
        assert!(d.report.all_passed(), "{}", d.report);
        assert_eq!(d.rescaled.coeff(1, 1), &(Scalar::s_pow(-1) + Scalar::s()));
        assert_eq!(d.rescaled.coeff(1, 0), &Scalar::one());
    }

    #[test]
    fn cartier_picks_inverse_determinant() {
        let r = cartier_check(3, 4);
        assert_eq!(r.passing, vec![CARTIER_DERIVED.to_string()]);
        let printed = r.report.get(CARTIER_PRINTED).unwrap();
        assert_eq!(printed.detail.as_deref(), Some("first difference at t^1 T^1"));
    }

    #[test]
    fn cartier_t_linear_slice() {
        let c = Scalar::q_poly(&[2, -3]);
        let rhs = cartier_rhs(2, 5, &c);
        let q_of_t = Mobius::q_matrix().apply(&Series::variable('T', 5)).unwrap();
        assert_eq!(rhs.coeff(1), q_of_t.log1().unwrap().scale(&c));
    }
}
