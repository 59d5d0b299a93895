//! Truncated formal power series in one variable.
//!
//! A [`Series`] knows the degree up to which its coefficients are correct
//! (`order`); every operation computes the order of its result from the orders
//! of its inputs and never reports coefficients beyond it. Series are generic
//! over a [`Coeff`] ring so the same code serves `Q(s)[[T]]`, `Q[[q]]` and
//! nested rings such as `Q[[q]][[t]]`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::scalar::Scalar;

/// Order of a series whose coefficients are exact in every degree (a polynomial).
pub const EXACT: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("constant term is not invertible")]
    NonInvertibleConstant,
    #[error("{0}: constant term must be zero")]
    NonzeroConstant(&'static str),
    #[error("{0}: constant term must be one")]
    ConstantNotOne(&'static str),
    #[error("reversion needs an invertible linear coefficient")]
    NonInvertibleLinear,
    #[error("{0} of an exact polynomial is an infinite series; truncate first")]
    NeedsFiniteOrder(&'static str),
}

/// The coefficient rings series are built over.
pub trait Coeff: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    /// Multiplicative inverse, when it exists.
    fn inverse(&self) -> Option<Self>;
    fn from_int(n: i64) -> Self;
    fn scaled(&self, r: &BigRational) -> Self;
}

impl Coeff for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(n.into())
    }
    fn scaled(&self, r: &BigRational) -> Self {
        self * r
    }
}

impl Coeff for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn is_one(&self) -> bool {
        Scalar::is_one(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        self.inv().ok()
    }
    fn from_int(n: i64) -> Self {
        Scalar::from_int(n)
    }
    fn scaled(&self, r: &BigRational) -> Self {
        self.scale(r)
    }
}

fn min_order(a: usize, b: usize) -> usize {
    a.min(b)
}

/// Number of storable coefficients for a given order.
fn capacity(order: usize) -> usize {
    order.saturating_add(1)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Series<C> {
    var: Option<char>,
    order: usize,
    coeffs: Vec<C>,
}

impl<C: Coeff> Series<C> {
    /// Builds a series from coefficients `c_0, c_1, ...`; entries beyond `order`
    /// are dropped and trailing zeros trimmed.
    pub fn new(var: char, order: usize, coeffs: Vec<C>) -> Self {
        Self::from_parts(Some(var), order, coeffs)
    }

    fn from_parts(var: Option<char>, order: usize, mut coeffs: Vec<C>) -> Self {
        coeffs.truncate(capacity(order));
        while coeffs.last().is_some_and(Coeff::is_zero) {
            coeffs.pop();
        }
        Series { var, order, coeffs }
    }

    pub fn zero(var: char, order: usize) -> Self {
        Self::new(var, order, Vec::new())
    }

    pub fn one(var: char, order: usize) -> Self {
        Self::constant(var, C::one(), order)
    }

    pub fn constant(var: char, c: C, order: usize) -> Self {
        Self::new(var, order, vec![c])
    }

    /// `c * var^k`.
    pub fn monomial(var: char, c: C, k: usize, order: usize) -> Self {
        let mut v = vec![C::zero(); k + 1];
        v[k] = c;
        Self::new(var, order, v)
    }

    /// The generator `var` itself.
    pub fn variable(var: char, order: usize) -> Self {
        Self::monomial(var, C::one(), 1, order)
    }

    pub fn var(&self) -> Option<char> {
        self.var
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_exact(&self) -> bool {
        self.order == EXACT
    }

    /// Stored coefficients; degrees past the slice end (up to `order`) are zero.
    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).cloned().unwrap_or_else(C::zero)
    }

    pub fn coeff_ref(&self, k: usize) -> Option<&C> {
        self.coeffs.get(k)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn constant_term(&self) -> C {
        self.coeff(0)
    }

    /// Lowers the truncation order (never raises it).
    pub fn truncate(&self, order: usize) -> Self {
        Self::from_parts(self.var, min_order(order, self.order), self.coeffs.clone())
    }

    /// Replaces the variable name.
    pub fn rename(&self, var: char) -> Self {
        Series { var: Some(var), ..self.clone() }
    }

    fn join_var(&self, other: &Self) -> Option<char> {
        match (self.var, other.var) {
            (Some(a), Some(b)) => {
                assert_eq!(a, b, "series in different variables");
                Some(a)
            }
            (a, b) => a.or(b),
        }
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Series<D> {
        Series::from_parts(self.var, self.order, self.coeffs.iter().map(f).collect())
    }

    fn add_ref(&self, other: &Self) -> Self {
        let var = self.join_var(other);
        let order = min_order(self.order, other.order);
        let len = self.coeffs.len().max(other.coeffs.len()).min(capacity(order));
        let out = (0..len)
            .map(|k| match (self.coeffs.get(k), other.coeffs.get(k)) {
                (Some(a), Some(b)) => a.plus(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => C::zero(),
            })
            .collect();
        Self::from_parts(var, order, out)
    }

    fn neg_ref(&self) -> Self {
        Series { var: self.var, order: self.order, coeffs: self.coeffs.iter().map(C::negated).collect() }
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }

    fn mul_ref(&self, other: &Self) -> Self {
        let var = self.join_var(other);
        let order = min_order(self.order, other.order);
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::from_parts(var, order, Vec::new());
        }
        let len = (self.coeffs.len() + other.coeffs.len() - 1).min(capacity(order));
        let mut out = vec![C::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    out[i + j] = out[i + j].plus(&a.times(b));
                }
            }
        }
        Self::from_parts(var, order, out)
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &C) -> Self {
        Self::from_parts(self.var, self.order, self.coeffs.iter().map(|x| x.times(c)).collect())
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        Self::from_parts(self.var, self.order, self.coeffs.iter().map(|x| x.scaled(r)).collect())
    }

    /// Multiplies by `var^k`; the order grows by `k` as well.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut v = vec![C::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Self::from_parts(self.var, self.order.saturating_add(k), v)
    }

    /// Substitutes `var -> c * var`.
    pub fn dilate(&self, c: &C) -> Self {
        let mut p = C::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a.times(&p));
            p = p.times(c);
        }
        Self::from_parts(self.var, self.order, out)
    }

    /// Multiplicative inverse; the constant term must be invertible.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let inv0 = self.constant_term().inverse().ok_or(SeriesError::NonInvertibleConstant)?;
        if self.order == EXACT {
            if self.coeffs.len() == 1 {
                return Ok(Self::from_parts(self.var, EXACT, vec![inv0]));
            }
            return Err(SeriesError::NeedsFiniteOrder("inverse"));
        }
        let n = self.order;
        let mut h: Vec<C> = Vec::with_capacity(n + 1);
        h.push(inv0.clone());
        for m in 1..=n {
            let mut acc = C::zero();
            for k in 1..=m.min(self.coeffs.len().saturating_sub(1)) {
                acc = acc.plus(&self.coeffs[k].times(&h[m - k]));
            }
            h.push(acc.times(&inv0).negated());
        }
        Ok(Self::from_parts(self.var, n, h))
    }

    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        if other.order == EXACT && self.order == EXACT && other.coeffs.len() > 1 {
            return Err(SeriesError::NeedsFiniteOrder("division"));
        }
        let order = min_order(self.order, other.order);
        Ok(self.mul_ref(&other.truncate(order).inverse()?))
    }

    /// Formal derivative; an order-`N` series yields order `N - 1`.
    /// Order-zero inputs carry no information about the derivative and give
    /// an empty series of order zero.
    pub fn derivative(&self) -> Self {
        let order = if self.order == EXACT { EXACT } else { self.order.saturating_sub(1) };
        let out = self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c.times(&C::from_int(k as i64))).collect();
        if self.order == 0 {
            return Self::from_parts(self.var, 0, Vec::new());
        }
        Self::from_parts(self.var, order, out)
    }

    /// Formal antiderivative with zero constant term; order grows by one.
    pub fn integral(&self) -> Self {
        let mut out = vec![C::zero()];
        for (k, c) in self.coeffs.iter().enumerate() {
            out.push(c.scaled(&BigRational::new(1.into(), (k as i64 + 1).into())));
        }
        Self::from_parts(self.var, self.order.saturating_add(1), out)
    }

    /// `self(inner(T))`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self, SeriesError> {
        if !inner.constant_term().is_zero() {
            return Err(SeriesError::NonzeroConstant("compose"));
        }
        let var = self.join_var(inner);
        let order = min_order(self.order, inner.order);
        let inner = inner.truncate(order);
        let mut acc = Self::from_parts(var, order, Vec::new());
        for c in self.coeffs.iter().take(capacity(order)).rev() {
            acc = acc.mul_ref(&inner).add_ref(&Self::from_parts(var, order, vec![c.clone()]));
        }
        Ok(acc)
    }

    /// Compositional inverse by Lagrange inversion: the coefficient of `T^n`
    /// in the reverse is `[T^(n-1)] (T / f)^n / n`, produced one degree at a time.
    pub fn reverse(&self) -> Result<Self, SeriesError> {
        if !self.constant_term().is_zero() {
            return Err(SeriesError::NonzeroConstant("reverse"));
        }
        if self.order == EXACT {
            return Err(SeriesError::NeedsFiniteOrder("reverse"));
        }
        let lin = self.coeff(1);
        if lin.inverse().is_none() {
            return Err(SeriesError::NonInvertibleLinear);
        }
        let n = self.order;
        if n == 0 {
            return Ok(Self::from_parts(self.var, 0, Vec::new()));
        }
        // f / T, valid to degree n - 1
        let quotient = Self::from_parts(self.var, n - 1, self.coeffs.iter().skip(1).cloned().collect());
        let h = quotient.inverse()?;
        let mut out = vec![C::zero()];
        let mut power = h.clone();
        for k in 1..=n {
            if k > 1 {
                power = power.mul_ref(&h);
            }
            out.push(power.coeff(k - 1).scaled(&BigRational::new(1.into(), (k as i64).into())));
        }
        Ok(Self::from_parts(self.var, n, out))
    }

    /// Formal logarithm of a series with constant term one.
    pub fn log1(&self) -> Result<Self, SeriesError> {
        if !self.constant_term().is_one() {
            return Err(SeriesError::ConstantNotOne("log1"));
        }
        if self.order == EXACT && self.coeffs.len() > 1 {
            return Err(SeriesError::NeedsFiniteOrder("log1"));
        }
        if self.order == 0 || self.coeffs.len() <= 1 {
            return Ok(Self::from_parts(self.var, self.order, Vec::new()));
        }
        Ok(self.derivative().div(&self.truncate(self.order - 1))?.integral())
    }

    /// Formal exponential of a series with zero constant term.
    pub fn exp0(&self) -> Result<Self, SeriesError> {
        if !self.constant_term().is_zero() {
            return Err(SeriesError::NonzeroConstant("exp0"));
        }
        if self.order == EXACT {
            if self.coeffs.is_empty() {
                return Ok(Self::from_parts(self.var, EXACT, vec![C::one()]));
            }
            return Err(SeriesError::NeedsFiniteOrder("exp0"));
        }
        let n = self.order;
        // g' = f' g, i.e. m g_m = sum_{k=1..m} k f_k g_{m-k}
        let mut g: Vec<C> = Vec::with_capacity(n + 1);
        g.push(C::one());
        for m in 1..=n {
            let mut acc = C::zero();
            for k in 1..=m.min(self.coeffs.len().saturating_sub(1)) {
                let f = &self.coeffs[k];
                if !f.is_zero() {
                    acc = acc.plus(&f.times(&g[m - k]).times(&C::from_int(k as i64)));
                }
            }
            g.push(acc.scaled(&BigRational::new(1.into(), (m as i64).into())));
        }
        Ok(Self::from_parts(self.var, n, g))
    }

    /// `self^c := exp(c * log(self))` for a series with constant term one.
    pub fn pow_formal(&self, c: &C) -> Result<Self, SeriesError> {
        self.log1()?.scale(c).exp0()
    }

    /// `self^(c t)` for a formal parameter `t`, as a series in `t` (to `t_order`)
    /// whose coefficients are series in this variable. The `t^k` coefficient is
    /// `(c log self)^k / k!`.
    pub fn pow_bivariate(&self, c: &C, t_var: char, t_order: usize) -> Result<Series<Series<C>>, SeriesError> {
        let l = self.log1()?.scale(c);
        let mut out = Vec::with_capacity(t_order + 1);
        let mut term = Self::one(self.var.unwrap_or('T'), self.order);
        for k in 0..=t_order {
            if k > 0 {
                term = term.mul_ref(&l).scale_rational(&BigRational::new(1.into(), (k as i64).into()));
            }
            out.push(term.clone());
        }
        Ok(Series::new(t_var, t_order, out))
    }

    /// Substitutes `var -> -var`.
    pub fn alternate(&self) -> Self {
        self.dilate(&C::from_int(-1))
    }
}

impl<C: Coeff> Coeff for Series<C> {
    fn zero() -> Self {
        Series { var: None, order: EXACT, coeffs: Vec::new() }
    }
    fn one() -> Self {
        Series { var: None, order: EXACT, coeffs: vec![C::one()] }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }
    fn plus(&self, other: &Self) -> Self {
        self.add_ref(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub_ref(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul_ref(other)
    }
    fn negated(&self) -> Self {
        self.neg_ref()
    }
    fn inverse(&self) -> Option<Self> {
        Series::inverse(self).ok()
    }
    fn from_int(n: i64) -> Self {
        Series { var: None, order: EXACT, coeffs: vec![C::from_int(n)] }.trimmed()
    }
    fn scaled(&self, r: &BigRational) -> Self {
        self.scale_rational(r)
    }
}

impl<C: Coeff> Series<C> {
    fn trimmed(self) -> Self {
        Self::from_parts(self.var, self.order, self.coeffs)
    }
}

macro_rules! series_binop {
    ($tr:ident, $m:ident, $imp:ident) => {
        impl<C: Coeff> $tr<&Series<C>> for &Series<C> {
            type Output = Series<C>;
            fn $m(self, rhs: &Series<C>) -> Series<C> {
                self.$imp(rhs)
            }
        }
        impl<C: Coeff> $tr<Series<C>> for Series<C> {
            type Output = Series<C>;
            fn $m(self, rhs: Series<C>) -> Series<C> {
                self.$imp(&rhs)
            }
        }
    };
}

series_binop!(Add, add, add_ref);
series_binop!(Sub, sub, sub_ref);
series_binop!(Mul, mul, mul_ref);

impl<C: Coeff> Neg for &Series<C> {
    type Output = Series<C>;
    fn neg(self) -> Series<C> {
        self.neg_ref()
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = self.var.unwrap_or('x');
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*{var}")?,
                _ => write!(f, "({c})*{var}^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        if self.order != EXACT {
            write!(f, " + O({var}^{})", self.order + 1)?;
        }
        Ok(())
    }
}

/// A series in `q` with rational coefficients.
pub type QSeries = Series<BigRational>;
