//! Two- and three-variable power series truncated by total degree, plus exact
//! bivariate polynomials for closed rational forms.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use num_rational::BigRational;

use crate::series::{Coeff, Series, SeriesError};

/// A series in two variables holding every coefficient of total degree `<= order`.
#[derive(Clone, Debug, PartialEq)]
pub struct BiSeries<C> {
    vars: (char, char),
    order: usize,
    /// `rows[i][j]` is the coefficient of `x^i y^j`, with `j <= order - i`.
    rows: Vec<Vec<C>>,
}

impl<C: Coeff> BiSeries<C> {
    pub fn from_fn(vars: (char, char), order: usize, mut f: impl FnMut(usize, usize) -> C) -> Self {
        let rows = (0..=order).map(|i| (0..=order - i).map(|j| f(i, j)).collect()).collect();
        BiSeries { vars, order, rows }
    }

    pub fn zero(vars: (char, char), order: usize) -> Self {
        Self::from_fn(vars, order, |_, _| C::zero())
    }

    pub fn one(vars: (char, char), order: usize) -> Self {
        Self::from_fn(vars, order, |i, j| if i + j == 0 { C::one() } else { C::zero() })
    }

    pub fn gen_x(vars: (char, char), order: usize) -> Self {
        Self::from_fn(vars, order, |i, j| if (i, j) == (1, 0) { C::one() } else { C::zero() })
    }

    pub fn gen_y(vars: (char, char), order: usize) -> Self {
        Self::from_fn(vars, order, |i, j| if (i, j) == (0, 1) { C::one() } else { C::zero() })
    }

    /// `f(x)` viewed as a bivariate series.
    pub fn from_x(f: &Series<C>, vars: (char, char), order: usize) -> Self {
        let order = order.min(f.order());
        Self::from_fn(vars, order, |i, j| if j == 0 { f.coeff(i) } else { C::zero() })
    }

    /// `f(y)` viewed as a bivariate series.
    pub fn from_y(f: &Series<C>, vars: (char, char), order: usize) -> Self {
        let order = order.min(f.order());
        Self::from_fn(vars, order, |i, j| if i == 0 { f.coeff(j) } else { C::zero() })
    }

    pub fn vars(&self) -> (char, char) {
        self.vars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Coefficient of `x^i y^j`; `None` beyond the truncation order.
    pub fn get(&self, i: usize, j: usize) -> Option<&C> {
        self.rows.get(i).and_then(|r| r.get(j))
    }

    /// Coefficient of `x^i y^j`. Panics if `i + j` exceeds the order.
    pub fn coeff(&self, i: usize, j: usize) -> &C {
        self.get(i, j).unwrap_or_else(|| panic!("coefficient ({i}, {j}) beyond total order {}", self.order))
    }

    pub fn set(&mut self, i: usize, j: usize, c: C) {
        self.rows[i][j] = c;
    }

    /// Nonzero coefficients ordered by total degree, then by `(i, j)`.
    pub fn terms_by_degree(&self) -> Vec<((usize, usize), &C)> {
        let mut out = Vec::new();
        for d in 0..=self.order {
            for i in 0..=d {
                let c = self.coeff(i, d - i);
                if !c.is_zero() {
                    out.push(((i, d - i), c));
                }
            }
        }
        out
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        Self::from_fn(self.vars, order, |i, j| self.rows[i][j].clone())
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> BiSeries<D> {
        BiSeries::from_fn(self.vars, self.order, |i, j| f(&self.rows[i][j]))
    }

    /// Exchanges the roles of the two variables.
    pub fn swap(&self) -> Self {
        Self::from_fn(self.vars, self.order, |i, j| self.rows[j][i].clone())
    }

    fn check_vars(&self, other: &Self) {
        assert_eq!(self.vars, other.vars, "bivariate series in different variables");
    }

    fn zip(&self, other: &Self, f: impl Fn(&C, &C) -> C) -> Self {
        self.check_vars(other);
        let order = self.order.min(other.order);
        Self::from_fn(self.vars, order, |i, j| f(&self.rows[i][j], &other.rows[i][j]))
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map(|x| x.times(c))
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self.check_vars(other);
        let n = self.order.min(other.order);
        let mut out = Self::zero(self.vars, n);
        for (i1, row) in self.rows.iter().enumerate().take(n + 1) {
            for (j1, a) in row.iter().enumerate().take(n + 1 - i1) {
                if a.is_zero() {
                    continue;
                }
                let room = n - i1 - j1;
                for i2 in 0..=room {
                    for j2 in 0..=room - i2 {
                        let b = &other.rows[i2][j2];
                        if !b.is_zero() {
                            let cell = &mut out.rows[i1 + i2][j1 + j2];
                            *cell = cell.plus(&a.times(b));
                        }
                    }
                }
            }
        }
        out
    }

    /// Multiplicative inverse by recursion on total degree.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let inv0 = self.rows[0][0].inverse().ok_or(SeriesError::NonInvertibleConstant)?;
        let n = self.order;
        let mut out = Self::zero(self.vars, n);
        out.rows[0][0] = inv0.clone();
        for d in 1..=n {
            for i in 0..=d {
                let j = d - i;
                let mut acc = C::zero();
                for a in 0..=i {
                    for b in 0..=j {
                        if a + b == 0 {
                            continue;
                        }
                        let f = &self.rows[a][b];
                        if !f.is_zero() {
                            acc = acc.plus(&f.times(&out.rows[i - a][j - b]));
                        }
                    }
                }
                out.rows[i][j] = acc.times(&inv0).negated();
            }
        }
        Ok(out)
    }

    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        Ok(self.mul_ref(&other.inverse()?))
    }

    /// `f(self)` for a univariate `f`; `self` must have zero constant term.
    pub fn compose_into(&self, f: &Series<C>) -> Result<Self, SeriesError> {
        if !self.rows[0][0].is_zero() {
            return Err(SeriesError::NonzeroConstant("compose"));
        }
        let n = self.order.min(f.order());
        let inner = self.truncate(n);
        let mut acc = Self::zero(self.vars, n);
        for k in (0..f.coeffs().len().min(n + 1)).rev() {
            acc = acc.mul_ref(&inner);
            acc.rows[0][0] = acc.rows[0][0].plus(&f.coeff(k));
        }
        Ok(acc)
    }

    /// The univariate series `self(x(T), y(T))`; `x` and `y` must have zero
    /// constant terms.
    pub fn eval_on(&self, x: &Series<C>, y: &Series<C>) -> Result<Series<C>, SeriesError> {
        if !x.constant_term().is_zero() || !y.constant_term().is_zero() {
            return Err(SeriesError::NonzeroConstant("bivariate substitution"));
        }
        let var = x.var().or(y.var()).unwrap_or('T');
        let n = self.order.min(x.order()).min(y.order());
        let x = x.truncate(n);
        let y = y.truncate(n);
        let mut y_pows = vec![Series::one(var, n)];
        for j in 1..=n {
            let next = &y_pows[j - 1] * &y;
            y_pows.push(next);
        }
        let mut acc = Series::zero(var, n);
        for i in (0..=n).rev() {
            let mut inner = Series::zero(var, n);
            for (j, yp) in y_pows.iter().enumerate().take(n - i + 1) {
                let c = &self.rows[i][j];
                if !c.is_zero() {
                    inner = &inner + &yp.scale(c);
                }
            }
            acc = &(&acc * &x) + &inner;
        }
        Ok(acc)
    }

    /// `self(g, h)` where `g`, `h` are trivariate with zero constant terms.
    pub fn substitute(&self, g: &TriSeries<C>, h: &TriSeries<C>) -> Result<TriSeries<C>, SeriesError> {
        if !g.coeff(0, 0, 0).is_zero() || !h.coeff(0, 0, 0).is_zero() {
            return Err(SeriesError::NonzeroConstant("trivariate substitution"));
        }
        let n = self.order.min(g.order).min(h.order);
        let g = g.truncate(n);
        let h = h.truncate(n);
        let mut h_pows = vec![TriSeries::constant(C::one(), n)];
        for j in 1..=n {
            let next = h_pows[j - 1].mul(&h);
            h_pows.push(next);
        }
        let mut acc = TriSeries::zero(n);
        for i in (0..=n).rev() {
            let mut inner = TriSeries::zero(n);
            for (j, hp) in h_pows.iter().enumerate().take(n - i + 1) {
                let c = &self.rows[i][j];
                if !c.is_zero() {
                    inner = inner.add(&hp.scale(c));
                }
            }
            acc = acc.mul(&g).add(&inner);
        }
        Ok(acc)
    }

    /// Smallest `(i, j)`, by total degree then `i`, where the two series differ.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize)> {
        let n = self.order.min(other.order);
        (0..=n).flat_map(|d| (0..=d).map(move |i| (i, d - i))).find(|&(i, j)| self.rows[i][j] != other.rows[i][j])
    }
}

macro_rules! bi_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<C: Coeff> $tr<&BiSeries<C>> for &BiSeries<C> {
            type Output = BiSeries<C>;
            fn $m(self, rhs: &BiSeries<C>) -> BiSeries<C> {
                let f: fn(&BiSeries<C>, &BiSeries<C>) -> BiSeries<C> = $body;
                f(self, rhs)
            }
        }
    };
}

bi_binop!(Add, add, |a, b| a.zip(b, |x, y| x.plus(y)));
bi_binop!(Sub, sub, |a, b| a.zip(b, |x, y| x.minus(y)));
bi_binop!(Mul, mul, |a, b| a.mul_ref(b));

/// A series in three variables `x, y, z` truncated by total degree.
#[derive(Clone, Debug, PartialEq)]
pub struct TriSeries<C> {
    order: usize,
    /// Coefficients in the order of `monomials(order)`.
    coeffs: Vec<C>,
}

/// Exponent triples of total degree `<= order`, by total degree then lexicographically
/// descending in `x`.
fn monomials(order: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for d in 0..=order {
        for i in (0..=d).rev() {
            for j in (0..=d - i).rev() {
                out.push((i, j, d - i - j));
            }
        }
    }
    out
}

fn tri_index(order: usize, (i, j, k): (usize, usize, usize)) -> usize {
    // number of monomials of degree < d is C(d + 2, 3)
    let d = i + j + k;
    debug_assert!(d <= order);
    let before = d * (d + 1) * (d + 2) / 6;
    // within degree d: i descends from d; for fixed i, j descends from d - i
    let r = d - i; // rows with larger i contribute (d - i') + 1 entries each
    let skipped: usize = (0..r).map(|t| t + 1).sum();
    before + skipped + (d - i - j)
}

impl<C: Coeff> TriSeries<C> {
    pub fn zero(order: usize) -> Self {
        let len = (order + 1) * (order + 2) * (order + 3) / 6;
        TriSeries { order, coeffs: vec![C::zero(); len] }
    }

    pub fn constant(c: C, order: usize) -> Self {
        let mut t = Self::zero(order);
        t.coeffs[0] = c;
        t
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, i: usize, j: usize, k: usize) -> &C {
        &self.coeffs[tri_index(self.order, (i, j, k))]
    }

    fn coeff_mut(&mut self, m: (usize, usize, usize)) -> &mut C {
        let idx = tri_index(self.order, m);
        &mut self.coeffs[idx]
    }

    /// Embeds a bivariate series, sending its two variables to the chosen slots
    /// (0 = x, 1 = y, 2 = z).
    pub fn embed(f: &BiSeries<C>, slots: (usize, usize)) -> Self {
        assert!(slots.0 < 3 && slots.1 < 3 && slots.0 != slots.1);
        let mut t = Self::zero(f.order());
        for (m, c) in f.terms_by_degree() {
            let mut e = [0usize; 3];
            e[slots.0] = m.0;
            e[slots.1] = m.1;
            *t.coeff_mut((e[0], e[1], e[2])) = c.clone();
        }
        t
    }

    /// The coordinate function in the given slot.
    pub fn variable(slot: usize, order: usize) -> Self {
        let mut e = [0usize; 3];
        e[slot] = 1;
        let mut t = Self::zero(order);
        if order >= 1 {
            *t.coeff_mut((e[0], e[1], e[2])) = C::one();
        }
        t
    }

    pub fn truncate(&self, order: usize) -> Self {
        if order >= self.order {
            return self.clone();
        }
        let len = (order + 1) * (order + 2) * (order + 3) / 6;
        TriSeries { order, coeffs: self.coeffs[..len].to_vec() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order.min(other.order);
        let a = self.truncate(n);
        let b = other.truncate(n);
        TriSeries { order: n, coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x.plus(y)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order.min(other.order);
        let a = self.truncate(n);
        let b = other.truncate(n);
        TriSeries { order: n, coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x.minus(y)).collect() }
    }

    pub fn scale(&self, c: &C) -> Self {
        TriSeries { order: self.order, coeffs: self.coeffs.iter().map(|x| x.times(c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order.min(other.order);
        let mons = monomials(n);
        let mut out = Self::zero(n);
        for (ia, ma) in mons.iter().enumerate() {
            let a = &self.coeffs[ia];
            if a.is_zero() {
                continue;
            }
            let da = ma.0 + ma.1 + ma.2;
            for (ib, mb) in mons.iter().enumerate() {
                if da + mb.0 + mb.1 + mb.2 > n {
                    break;
                }
                let b = &other.coeffs[ib];
                if b.is_zero() {
                    continue;
                }
                let cell = out.coeff_mut((ma.0 + mb.0, ma.1 + mb.1, ma.2 + mb.2));
                *cell = cell.plus(&a.times(b));
            }
        }
        out
    }

    /// Smallest exponent triple (by total degree) where the two series differ.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize, usize)> {
        let n = self.order.min(other.order);
        monomials(n).into_iter().enumerate().find(|(idx, _)| self.coeffs[*idx] != other.coeffs[*idx]).map(|(_, m)| m)
    }
}

/// An exact bivariate polynomial, used for closed rational forms of laws.
#[derive(Clone, Debug, PartialEq)]
pub struct BiPoly<C> {
    terms: BTreeMap<(usize, usize), C>,
}

impl<C: Coeff> BiPoly<C> {
    pub fn from_terms(terms: impl IntoIterator<Item = ((usize, usize), C)>) -> Self {
        let mut p = BiPoly { terms: BTreeMap::new() };
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: (usize, usize), c: C) {
        let cur = self.terms.remove(&m).unwrap_or_else(C::zero);
        let next = cur.plus(&c);
        if !next.is_zero() {
            self.terms.insert(m, next);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize), &C)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> BiPoly<D> {
        BiPoly::from_terms(self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.map(C::negated))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = BiPoly { terms: BTreeMap::new() };
        for (ma, a) in &self.terms {
            for (mb, b) in &other.terms {
                out.add_term((ma.0 + mb.0, ma.1 + mb.1), a.times(b));
            }
        }
        out
    }

    pub fn to_series(&self, vars: (char, char), order: usize) -> BiSeries<C> {
        let mut s = BiSeries::zero(vars, order);
        for (&(i, j), c) in &self.terms {
            if i + j <= order {
                s.set(i, j, c.clone());
            }
        }
        s
    }

    pub fn scaled(&self, r: &BigRational) -> Self {
        self.map(|c| c.scaled(r))
    }
}
