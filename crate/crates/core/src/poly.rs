//! Dense Laurent polynomials in one variable with exact rational coefficients.
//!
//! A `LaurentPoly` stores `coeffs[i]` as the coefficient of `x^(val + i)`. The
//! vector is kept trimmed: the first and last entries are nonzero, and the zero
//! polynomial has no coefficients at all. Two equal polynomials therefore have
//! identical representations.

use std::cmp::max;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    val: i64,
    coeffs: Vec<BigRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { val: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: BigRational, exp: i64) -> Self {
        Self::from_coeffs(exp, vec![c])
    }

    /// Builds `sum coeffs[i] * x^(val + i)`, trimming zeros at both ends.
    pub fn from_coeffs(val: i64, coeffs: Vec<BigRational>) -> Self {
        let mut p = LaurentPoly { val, coeffs };
        p.trim();
        p
    }

    pub fn from_int_coeffs(val: i64, coeffs: &[i64]) -> Self {
        Self::from_coeffs(val, coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        let lead_zeros = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros > 0 {
            self.coeffs.drain(..lead_zeros);
            self.val += lead_zeros as i64;
        }
        if self.coeffs.is_empty() {
            self.val = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.val == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.val)
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn degree(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.val + self.coeffs.len() as i64 - 1)
    }

    pub fn coeff(&self, exp: i64) -> BigRational {
        let i = exp - self.val;
        if i < 0 {
            return BigRational::zero();
        }
        self.coeffs.get(i as usize).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn leading_coeff(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    /// Nonzero terms `(exponent, coefficient)` in ascending order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(i, c)| (self.val + i as i64, c))
    }

    /// Coefficients from the valuation upward, i.e. the polynomial `self / x^val`.
    pub(crate) fn stripped_coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn all_exponents_even(&self) -> bool {
        self.terms().all(|(e, _)| e % 2 == 0)
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(BigRational::is_integer)
    }

    pub fn shift(&self, by: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        LaurentPoly { val: self.val + by, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        LaurentPoly { val: self.val, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    pub fn neg(&self) -> Self {
        LaurentPoly { val: self.val, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let lo = self.val.min(other.val);
        let hi = max(self.degree().unwrap(), other.degree().unwrap());
        let mut out = vec![BigRational::zero(); (hi - lo + 1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[(self.val - lo) as usize + i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[(other.val - lo) as usize + i] += c;
        }
        Self::from_coeffs(lo, out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        // clear denominators once so the convolution runs over integers
        let (la, lb) = (self.denominator_lcm(), other.denominator_lcm());
        let a = scaled_numerators(&self.coeffs, &la);
        let b = scaled_numerators(&other.coeffs, &lb);
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        let den = la * lb;
        let coeffs = out
            .into_iter()
            .map(|c| if den.is_one() { BigRational::from_integer(c) } else { BigRational::new(c, den.clone()) })
            .collect();
        Self::from_coeffs(self.val + other.val, coeffs)
    }

    /// Substitutes `x -> x^k` for `k >= 1`.
    pub fn inflate(&self, k: u32) -> Self {
        assert!(k >= 1);
        if k == 1 || self.is_zero() {
            return self.clone();
        }
        let k = k as usize;
        let mut out = vec![BigRational::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * k] = c.clone();
        }
        Self::from_coeffs(self.val * k as i64, out)
    }

    /// Evaluates at a rational point; `None` if `x = 0` and the valuation is negative.
    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if x.is_zero() {
            return if self.val < 0 { None } else { Some(self.coeff(0)) };
        }
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        Some(acc * pow_rational(x, self.val))
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Gcd of the numerators, assuming all coefficients are integers.
    pub fn integer_content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()))
    }

    /// Exact division by a polynomial with nonzero constant term. Returns `None` when
    /// the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        assert_eq!(divisor.val, 0, "divisor must have a nonzero constant term");
        let (q, r) = poly_divrem(&self.coeffs, &divisor.coeffs);
        r.is_empty().then(|| Self::from_coeffs(self.val, q))
    }
}

fn scaled_numerators(coeffs: &[BigRational], l: &BigInt) -> Vec<BigInt> {
    coeffs.iter().map(|c| c.numer() * (l / c.denom())).collect()
}

pub(crate) fn pow_rational(x: &BigRational, e: i64) -> BigRational {
    let p = num_traits::pow(x.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

fn trim_high(v: &mut Vec<BigRational>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

/// Euclidean division of ordinary polynomials stored low-degree first.
/// Both outputs are trimmed; a zero remainder is the empty vector.
pub(crate) fn poly_divrem(num: &[BigRational], den: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = num.to_vec();
    trim_high(&mut r);
    let mut d = den.to_vec();
    trim_high(&mut d);
    assert!(!d.is_empty(), "polynomial division by zero");
    if r.len() < d.len() {
        return (Vec::new(), r);
    }
    let lead_inv = d.last().unwrap().recip();
    let mut q = vec![BigRational::zero(); r.len() - d.len() + 1];
    for k in (0..q.len()).rev() {
        let c = &r[k + d.len() - 1] * &lead_inv;
        if c.is_zero() {
            continue;
        }
        for (j, dj) in d.iter().enumerate() {
            if !dj.is_zero() {
                r[k + j] -= &c * dj;
            }
        }
        q[k] = c;
    }
    trim_high(&mut q);
    trim_high(&mut r);
    (q, r)
}

/// Monic gcd of two ordinary polynomials (low-degree first). `gcd(0, 0) = 0`.
pub(crate) fn poly_gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim_high(&mut a);
    trim_high(&mut b);
    while !b.is_empty() {
        let (_, r) = poly_divrem(&a, &b);
        a = b;
        b = make_monic(r);
    }
    make_monic(a)
}

fn make_monic(mut p: Vec<BigRational>) -> Vec<BigRational> {
    if let Some(lc) = p.last().cloned() {
        if !lc.is_one() {
            let inv = lc.recip();
            for c in p.iter_mut() {
                *c = &*c * &inv;
            }
        }
    }
    p
}
