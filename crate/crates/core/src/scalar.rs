//! The universal coefficient field: rational functions in `s` over the rationals,
//! with `q := s^2`.
//!
//! Every ring the construction touches (`Z[q]`, `Z[q, 1/q]`, the cromulent ring,
//! `Q(q)`, `Q(s)`) is realised as a subset of this one field and recognised by a
//! membership predicate instead of by a separate type.
//!
//! Canonical form: `num / den` where
//! - `den` has valuation zero (any power of `s` is moved into `num`),
//! - `den` is monic,
//! - `gcd(num, den) = 1`.
//!
//! Because the form is unique, derived `PartialEq` is mathematical equality.
//! The integrality tests below read the numerator of this form: with a monic
//! denominator, "numerator in `Z[q]`" means every numerator coefficient is an
//! integer.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::poly::{poly_divrem, poly_gcd, LaurentPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("element involves odd powers of s and does not live in q: {0}")]
    NotInQ(String),
    #[error("pole at q = {at}: {value}")]
    Pole { at: i64, value: String },
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Scalar {
    num: LaurentPoly,
    den: LaurentPoly,
}

/// Subring membership flags, computed on demand by [`Scalar::membership`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct RingMembership {
    pub in_z_q: bool,
    pub in_z_q_laurent: bool,
    pub in_q_q: bool,
    pub in_cromulent: bool,
    pub in_q_s: bool,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { num: LaurentPoly::zero(), den: LaurentPoly::one() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat(n))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_rational(BigRational::from_integer(n))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::from_poly(LaurentPoly::constant(r))
    }

    /// A Laurent polynomial in `s` (denominator one).
    pub fn from_poly(num: LaurentPoly) -> Self {
        Scalar { num, den: LaurentPoly::one() }
    }

    pub fn s() -> Self {
        Self::s_pow(1)
    }

    pub fn q() -> Self {
        Self::s_pow(2)
    }

    pub fn s_pow(e: i64) -> Self {
        Self::from_poly(LaurentPoly::monomial(rat(1), e))
    }

    pub fn q_pow(e: i64) -> Self {
        Self::s_pow(2 * e)
    }

    /// The polynomial `sum coeffs[i] * q^i`.
    pub fn q_poly(coeffs: &[i64]) -> Self {
        let mut s = vec![0i64; coeffs.len().saturating_mul(2)];
        for (i, &c) in coeffs.iter().enumerate() {
            s[2 * i] = c;
        }
        Self::from_poly(LaurentPoly::from_int_coeffs(0, &s))
    }

    /// Builds and canonicalises `num / den`.
    pub fn ratio(num: LaurentPoly, den: LaurentPoly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let dval = den.valuation().unwrap();
        let nval = num.valuation().unwrap() - dval;
        let mut n = num.stripped_coeffs().to_vec();
        let mut d = den.stripped_coeffs().to_vec();
        if d.len() > 1 {
            let g = poly_gcd(&n, &d);
            if g.len() > 1 {
                n = poly_divrem(&n, &g).0;
                d = poly_divrem(&d, &g).0;
            }
        }
        let lc = d.last().unwrap().clone();
        if !lc.is_one() {
            let inv = lc.recip();
            for c in n.iter_mut().chain(d.iter_mut()) {
                *c = &*c * &inv;
            }
        }
        Ok(Scalar { num: LaurentPoly::from_coeffs(nval, n), den: LaurentPoly::from_coeffs(0, d) })
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the denominator is one.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The value as a rational number, if the element is constant.
    pub fn as_rational(&self) -> Option<BigRational> {
        if !self.den.is_one() {
            return None;
        }
        match self.num.valuation() {
            None => Some(BigRational::zero()),
            Some(0) if self.num.degree() == Some(0) => Some(self.num.coeff(0)),
            _ => None,
        }
    }

    /// The value as a machine integer, if the element is an integer constant.
    pub fn as_i64(&self) -> Option<i64> {
        self.as_rational().filter(BigRational::is_integer).and_then(|r| r.to_integer().to_i64())
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ScalarError> {
        if other.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Self::ratio(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        Self::one().checked_div(self)
    }

    pub fn pow(&self, e: i64) -> Result<Self, ScalarError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        let mut sq = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &sq;
            }
            k >>= 1;
            if k > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Scalar { num: self.num.scale(r), den: self.den.clone() }.fix_zero()
    }

    fn fix_zero(self) -> Self {
        if self.num.is_zero() {
            Self::zero()
        } else {
            self
        }
    }

    /// True iff every power of `s` in the canonical form is even.
    pub fn lives_in_q(&self) -> bool {
        self.num.all_exponents_even() && self.den.all_exponents_even()
    }

    fn require_q(&self) -> Result<(), ScalarError> {
        if self.lives_in_q() {
            Ok(())
        } else {
            Err(ScalarError::NotInQ(self.to_string()))
        }
    }

    /// Substitutes `s -> s^k`. On elements living in `q` this is `q -> q^k`.
    pub fn inflate_s(&self, k: u32) -> Self {
        // s -> s^k maps coprime pairs to coprime pairs and keeps the
        // denominator monic with nonzero constant term.
        Scalar { num: self.num.inflate(k), den: self.den.inflate(k) }
    }

    /// Substitutes `s -> -s`, the other square root of `q`.
    pub fn flip_s(&self) -> Self {
        let flip = |p: &LaurentPoly| {
            let mut out = LaurentPoly::zero();
            for (e, c) in p.terms() {
                let c = if e % 2 == 0 { c.clone() } else { -c.clone() };
                out = out.add(&LaurentPoly::monomial(c, e));
            }
            out
        };
        Self::ratio(flip(&self.num), flip(&self.den)).expect("flip keeps the denominator nonzero")
    }

    pub fn membership(&self) -> RingMembership {
        let in_q = self.lives_in_q();
        let poly = self.den.is_one();
        let integral = self.num.has_integer_coeffs();
        let nonneg = self.num.valuation().is_none_or(|v| v >= 0);
        RingMembership {
            in_z_q: in_q && poly && integral && nonneg,
            in_z_q_laurent: in_q && poly && integral,
            in_q_q: in_q && poly && nonneg,
            in_cromulent: is_cromulent(self).unwrap_or(false),
            in_q_s: true,
        }
    }

    pub fn in_z_q(&self) -> bool {
        self.lives_in_q()
            && self.den.is_one()
            && self.num.has_integer_coeffs()
            && self.num.valuation().is_none_or(|v| v >= 0)
    }

    /// Evaluation at `q = 0` (equivalently `s = 0`).
    pub fn eval_q0(&self) -> Result<BigRational, ScalarError> {
        self.require_q()?;
        match self.num.valuation() {
            None => Ok(BigRational::zero()),
            Some(v) if v < 0 => Err(ScalarError::Pole { at: 0, value: self.to_string() }),
            Some(_) => Ok(self.num.coeff(0) / self.den.coeff(0)),
        }
    }

    /// Evaluation at `q = 1` (through `s = 1`).
    pub fn eval_q1(&self) -> Result<BigRational, ScalarError> {
        self.require_q()?;
        let one = BigRational::one();
        let d = self.den.eval(&one).expect("denominator is a polynomial");
        if d.is_zero() {
            return Err(ScalarError::Pole { at: 1, value: self.to_string() });
        }
        Ok(self.num.eval(&one).expect("s = 1 is never a pole of a Laurent polynomial") / d)
    }

    /// The scalar obtained by setting `q = 0`.
    pub fn specialize_q0(&self) -> Result<Self, ScalarError> {
        self.eval_q0().map(Self::from_rational)
    }

    /// Numerator and denominator as ordinary polynomials in `q` (low degree first),
    /// together with the `q`-valuation of the numerator.
    pub(crate) fn q_parts(&self) -> Result<(i64, Vec<BigRational>, Vec<BigRational>), ScalarError> {
        self.require_q()?;
        let halve = |p: &LaurentPoly| -> Vec<BigRational> { p.stripped_coeffs().iter().step_by(2).cloned().collect() };
        let val = self.num.valuation().unwrap_or(0) / 2;
        Ok((val, halve(&self.num), halve(&self.den)))
    }

    fn add_ref(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            let num = self.num.add(&other.num);
            if self.den.is_one() {
                return Scalar { num, den: self.den.clone() }.fix_zero();
            }
            return Self::ratio(num, self.den.clone()).expect("nonzero denominator");
        }
        Self::ratio(self.num.mul(&other.den).add(&other.num.mul(&self.den)), self.den.mul(&other.den))
            .expect("nonzero denominator")
    }

    fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return Scalar { num: self.num.mul(&other.num), den: LaurentPoly::one() };
        }
        Self::ratio(self.num.mul(&other.num), self.den.mul(&other.den)).expect("nonzero denominator")
    }

    fn neg_ref(&self) -> Self {
        Scalar { num: self.num.neg(), den: self.den.clone() }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $imp:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                self.$imp(rhs)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$imp(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$imp(rhs)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$imp(&rhs)
            }
        }
    };
}

impl Scalar {
    fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::from_rational(r)
    }
}

/// Coefficients of the `d`-th cyclotomic polynomial in `q`, low degree first.
fn cyclotomic_coeffs(d: u64, memo: &mut HashMap<u64, Vec<BigRational>>) -> Vec<BigRational> {
    if let Some(c) = memo.get(&d) {
        return c.clone();
    }
    let mut num = vec![BigRational::zero(); d as usize + 1];
    num[0] = -BigRational::one();
    num[d as usize] = BigRational::one();
    for e in (1..d).filter(|e| d.is_multiple_of(*e)) {
        let phi_e = cyclotomic_coeffs(e, memo);
        let (quot, rem) = poly_divrem(&num, &phi_e);
        debug_assert!(rem.is_empty());
        num = quot;
    }
    memo.insert(d, num.clone());
    num
}

fn q_coeffs_to_scalar(c: &[BigRational]) -> Scalar {
    let mut s = vec![BigRational::zero(); c.len() * 2];
    for (i, x) in c.iter().enumerate() {
        s[2 * i] = x.clone();
    }
    Scalar::from_poly(LaurentPoly::from_coeffs(0, s))
}

/// The cyclotomic polynomial `Phi_d(q)` for `d >= 1`.
pub fn cyclotomic(d: u64) -> Scalar {
    assert!(d >= 1, "cyclotomic index must be positive");
    q_coeffs_to_scalar(&cyclotomic_coeffs(d, &mut HashMap::new()))
}

fn totient(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Decides membership in `Z[q][[k]_q^{-1} | k >= 1]`.
///
/// Since `[k]_q` is the product of `Phi_d` over the divisors `d > 1` of `k`,
/// the ring is `Z[q]` with every `Phi_d`, `d >= 2`, inverted. An element is in
/// it iff its numerator is in `Z[q]` and its monic denominator is a product of
/// such cyclotomic polynomials. Candidate indices are all `d` with
/// `phi(d) <= deg`, which are bounded by `2 * deg^2` as `phi(d) >= sqrt(d / 2)`.
pub fn is_cromulent(a: &Scalar) -> Result<bool, ScalarError> {
    let (val, num, den) = a.q_parts()?;
    if a.is_zero() {
        return Ok(true);
    }
    if val < 0 || !num.iter().all(BigRational::is_integer) {
        return Ok(false);
    }
    let mut rest = den;
    let mut memo = HashMap::new();
    let deg0 = rest.len() as u64 - 1;
    let bound = 2 * deg0 * deg0 + 1;
    let mut d = 2;
    while rest.len() > 1 && d <= bound {
        if totient(d) < rest.len() as u64 {
            let phi = cyclotomic_coeffs(d, &mut memo);
            loop {
                let (quot, rem) = poly_divrem(&rest, &phi);
                if !rem.is_empty() {
                    break;
                }
                rest = quot;
            }
        }
        d += 1;
    }
    Ok(rest.len() == 1 && rest[0].is_one())
}

type IntTerms = Vec<(i64, BigInt)>;

/// Integer-normalised numerator and denominator: both multiplied by the least
/// positive rational that makes every coefficient an integer with overall gcd one.
fn integer_parts(a: &Scalar) -> (IntTerms, IntTerms) {
    let l = a.num.denominator_lcm().lcm(&a.den.denominator_lcm());
    let lr = BigRational::from_integer(l);
    let n = a.num.scale(&lr);
    let d = a.den.scale(&lr);
    let g = n.integer_content().gcd(&d.integer_content());
    let to_ints =
        |p: &LaurentPoly| -> Vec<(i64, BigInt)> { p.terms().map(|(e, c)| (e, c.to_integer() / &g)).collect() };
    (to_ints(&n), to_ints(&d))
}

fn format_terms(terms: &[(i64, BigInt)], in_q: bool) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let (var, div) = if in_q { ("q", 2) } else { ("s", 1) };
    let mut out = String::new();
    for (i, (e, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let e = e / div;
        let power = match e {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{e}"),
        };
        if power.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&power);
        } else {
            out.push_str(&format!("{mag}*{power}"));
        }
    }
    out
}

impl fmt::Display for Scalar {
    /// Ascending sums of `c*q^k` terms (or `c*s^k` when odd powers of `s` occur),
    /// with integer coefficients, e.g. `(1 + q + q^2)/(1 + q)` or `(1 + q)/2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let in_q = self.lives_in_q();
        let (n, d) = integer_parts(self);
        let ns = format_terms(&n, in_q);
        if d.len() == 1 && d[0].0 == 0 && d[0].1.is_one() {
            return f.write_str(&ns);
        }
        let ns = if n.len() > 1 { format!("({ns})") } else { ns };
        let ds = format_terms(&d, in_q);
        let ds = if d.len() > 1 { format!("({ds})") } else { ds };
        write!(f, "{ns}/{ds}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_minus_q() -> Scalar {
        Scalar::q_poly(&[1, -1])
    }

    fn q_int(k: usize) -> Scalar {
        Scalar::q_poly(&vec![1; k])
    }

    #[test]
    fn inverse_pair_multiplies_to_one() {
        let a = one_minus_q().inv().unwrap();
        assert_eq!(&a * &one_minus_q(), Scalar::one());
    }

    #[test]
    fn polynomial_division_normalises() {
        let a = Scalar::q_poly(&[1, 0, -1]).checked_div(&one_minus_q()).unwrap();
        assert_eq!(a, Scalar::q_poly(&[1, 1]));
        assert!(a.is_polynomial());
    }

    #[test]
    fn product_of_q_integers_is_not_q_int_six() {
        // (1+q)(1+q+q^2) = 1 + 2q + 2q^2 + q^3
        let p = &q_int(2) * &q_int(3);
        assert_eq!(p, Scalar::q_poly(&[1, 2, 2, 1]));
        assert_ne!(p, q_int(6));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(Scalar::one().checked_div(&Scalar::zero()), Err(ScalarError::DivisionByZero));
        assert_eq!(Scalar::zero().inv(), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn canonical_denominator_is_monic_with_unit_constant_term() {
        // 1 / (2q - 2q^2) = (1/2 q^-1) / (1 - q) -> monic: (-1/2 q^-1) / (q - 1)
        let a = Scalar::q_poly(&[0, 2, -2]).inv().unwrap();
        assert_eq!(a.denominator().leading_coeff().unwrap(), &BigRational::one());
        assert_eq!(a.denominator().valuation(), Some(0));
        assert_eq!(a.numerator().valuation(), Some(-2));
    }

    #[test]
    fn cyclotomic_small_cases() {
        assert_eq!(cyclotomic(1), Scalar::q_poly(&[-1, 1]));
        assert_eq!(cyclotomic(2), Scalar::q_poly(&[1, 1]));
        assert_eq!(cyclotomic(6), Scalar::q_poly(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), Scalar::q_poly(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn cyclotomic_products_give_q_integers() {
        for k in 1..=30u64 {
            let prod = (2..=k).filter(|d| k % d == 0).fold(Scalar::one(), |acc, d| &acc * &cyclotomic(d));
            assert_eq!(prod, q_int(k as usize), "k = {k}");
        }
    }

    #[test]
    fn cromulence_examples() {
        assert!(is_cromulent(&q_int(2).inv().unwrap()).unwrap());
        assert!(!is_cromulent(&one_minus_q().inv().unwrap()).unwrap());
        assert!(is_cromulent(&q_int(6).inv().unwrap()).unwrap());
        // Phi_6 alone: degree 2 but index 6
        assert!(is_cromulent(&cyclotomic(6).inv().unwrap()).unwrap());
        // non-integral numerator
        assert!(!is_cromulent(&Scalar::from_rational(BigRational::new(1.into(), 2.into()))).unwrap());
        // not a cyclotomic denominator
        assert!(!is_cromulent(&Scalar::q_poly(&[1, 2]).inv().unwrap()).unwrap());
        assert!(is_cromulent(&Scalar::s()).is_err());
    }

    #[test]
    fn evaluations() {
        assert_eq!(q_int(5).eval_q0().unwrap(), BigRational::one());
        assert_eq!(q_int(2).inv().unwrap().eval_q0().unwrap(), BigRational::one());
        assert_eq!(one_minus_q().inv().unwrap().eval_q0().unwrap(), BigRational::one());
        for k in 1..=10 {
            assert_eq!(q_int(k).eval_q1().unwrap(), rat(k as i64));
        }
        assert_eq!(q_int(3).inv().unwrap().eval_q1().unwrap(), BigRational::new(1.into(), 3.into()));
        assert!(matches!(one_minus_q().inv().unwrap().eval_q1(), Err(ScalarError::Pole { at: 1, .. })));
        assert!(matches!(Scalar::q_pow(-1).eval_q0(), Err(ScalarError::Pole { at: 0, .. })));
    }

    #[test]
    fn membership_tower() {
        let m = q_int(3).membership();
        assert!(m.in_z_q && m.in_z_q_laurent && m.in_q_q && m.in_cromulent && m.in_q_s);
        let m = Scalar::q_pow(-1).membership();
        assert!(!m.in_z_q && m.in_z_q_laurent && !m.in_cromulent);
        let m = (Scalar::s() + Scalar::s_pow(-1)).membership();
        assert!(!m.in_z_q_laurent && m.in_q_s);
    }

    #[test]
    fn display_forms() {
        assert_eq!(Scalar::q_poly(&[1, 2, 1]).to_string(), "1 + 2*q + q^2");
        let half = Scalar::q_poly(&[1, 1]).scale(&BigRational::new(1.into(), 2.into()));
        assert_eq!(half.to_string(), "(1 + q)/2");
        let r = q_int(3).checked_div(&Scalar::q_poly(&[1, 1])).unwrap();
        assert_eq!(r.to_string(), "(1 + q + q^2)/(1 + q)");
        assert_eq!(one_minus_q().inv().unwrap().to_string(), "-1/(-1 + q)");
        assert_eq!((Scalar::s_pow(-1) + Scalar::s()).to_string(), "s^-1 + s");
        assert_eq!(Scalar::q_poly(&[0, 0, -3]).to_string(), "-3*q^2");
        assert_eq!(Scalar::zero().to_string(), "0");
    }

    #[test]
    fn inflate_is_adams_substitution() {
        let a = one_minus_q().inv().unwrap().inflate_s(3);
        assert_eq!(a, Scalar::q_poly(&[1, 0, 0, -1]).inv().unwrap());
    }
}
