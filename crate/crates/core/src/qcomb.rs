//! q-combinatorics and q-series: q-integers, q-factorials, Gaussian binomials,
//! q-Pochhammer symbols in product and sum form, Euler's function, the modular
//! discriminant, and eta-power bookkeeping with rational prefactor exponents.
//!
//! Two-variable objects in `t` and `q` are `Series<QSeries>`: a series in `t`
//! whose coefficients are `q`-series. The `t`-truncation is the outer order and
//! the `q`-truncation the inner one.

use num_integer::Integer;
use num_rational::BigRational;
use thiserror::Error;

use crate::scalar::{Scalar, ScalarError};
use crate::series::{Coeff, QSeries, Series, EXACT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QCombError {
    #[error("q_binom({n}, {k}) needs 0 <= k <= n")]
    BinomialRange { n: u64, k: u64 },
    #[error("eta prefactor q^{0} is not a non-negative integer power")]
    FractionalPrefactor(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Polynomial in `t` with `q`-series coefficients.
pub type TqSeries = Series<QSeries>;

/// `[k]_q = 1 + q + ... + q^(k-1)`; `[0]_q = 0`.
pub fn q_int(k: u64) -> Scalar {
    Scalar::q_poly(&vec![1; k as usize])
}

/// `[k]_q! = [1]_q [2]_q ... [k]_q`.
pub fn q_fact(k: u64) -> Scalar {
    (1..=k).fold(Scalar::one(), |acc, i| &acc * &q_int(i))
}

/// Gaussian binomial `[n choose k]_q`, a polynomial in `q`.
pub fn q_binom(n: u64, k: u64) -> Result<Scalar, QCombError> {
    if k > n {
        return Err(QCombError::BinomialRange { n, k });
    }
    Ok(q_fact(n).checked_div(&(&q_fact(k) * &q_fact(n - k)))?)
}

/// The `q`-expansion at `q = 0` of an element living in `q`, to `order`.
pub fn q_expand(a: &Scalar, order: usize) -> Result<QSeries, QCombError> {
    let (val, num, den) = a.q_parts()?;
    if a.is_zero() {
        return Ok(Series::zero('q', order));
    }
    if val < 0 {
        return Err(ScalarError::Pole { at: 0, value: a.to_string() }.into());
    }
    let num = Series::new('q', order, num).shift_up(val as usize).truncate(order);
    let den = Series::new('q', order, den);
    Ok(num.div(&den).expect("canonical denominators have nonzero constant term"))
}

fn shift_q(g: &QSeries, k: usize) -> QSeries {
    g.shift_up(k).truncate(g.order())
}

/// `w * (1 + c q^k t)`.
pub(crate) fn mul_line(w: &TqSeries, c: &BigRational, k: usize) -> TqSeries {
    let src = w.coeffs();
    let len = if w.is_exact() { src.len() + 1 } else { (src.len() + 1).min(w.order() + 1) };
    let mut out = Vec::with_capacity(len);
    for j in 0..len {
        let mut cell = src.get(j).cloned().unwrap_or_else(<QSeries as Coeff>::zero);
        if j >= 1 {
            if let Some(prev) = src.get(j - 1) {
                cell = cell.plus(&shift_q(prev, k).scale_rational(c));
            }
        }
        out.push(cell);
    }
    Series::new('t', w.order(), out)
}

/// `w / (1 + c q^k t)`; the outer order must be finite.
pub(crate) fn div_line(w: &TqSeries, c: &BigRational, k: usize) -> TqSeries {
    assert!(!w.is_exact(), "dividing by a line factor needs a finite t-order");
    let mut out: Vec<QSeries> = Vec::with_capacity(w.order() + 1);
    for j in 0..=w.order() {
        let mut cell = w.coeff_ref(j).cloned().unwrap_or_else(<QSeries as Coeff>::zero);
        if j >= 1 {
            cell = cell.minus(&shift_q(&out[j - 1], k).scale_rational(c));
        }
        out.push(cell);
    }
    Series::new('t', w.order(), out)
}

fn t_one(t_order: usize, q_order: usize) -> TqSeries {
    Series::constant('t', Series::one('q', q_order), t_order)
}

/// `(t; q)_n = prod_{k < n} (1 - t q^k)`, exact in `t`, truncated at `q^q_order`.
pub fn poch_finite(n: usize, q_order: usize) -> TqSeries {
    let minus_one = -BigRational::one();
    (0..n).fold(t_one(EXACT, q_order), |w, k| mul_line(&w, &minus_one, k))
}

/// `(t; q)_inf` by its product, truncated at `t^t_order` and `q^q_order`.
///
/// Factors with `k > q_order` equal `1 + O(q^(q_order + 1))` in every `t`-slice,
/// so the product stops at `k = q_order`.
pub fn poch_inf_product(t_order: usize, q_order: usize) -> TqSeries {
    let minus_one = -BigRational::one();
    (0..=q_order).fold(t_one(t_order, q_order), |w, k| mul_line(&w, &minus_one, k))
}

/// The exact `t^k` coefficient of `(t; q)_inf` in sum form:
/// `(-1)^k q^binom(k, 2) / ([k]_q! (1 - q)^k)`.
pub fn poch_sum_coefficient(k: u64) -> Scalar {
    let sign = if k.is_multiple_of(2) { 1 } else { -1 };
    let qpow = Scalar::q_pow((k * k.saturating_sub(1) / 2) as i64);
    let den = &q_fact(k) * &Scalar::q_poly(&[1, -1]).pow(k as i64).expect("non-negative power");
    (&qpow * &Scalar::from_int(sign)).checked_div(&den).expect("[k]_q! (1-q)^k is nonzero")
}

/// `(t; q)_inf` from its sum form, each `t^k` coefficient expanded to `q^q_order`.
pub fn poch_inf_sum(t_order: usize, q_order: usize) -> TqSeries {
    let coeffs =
        (0..=t_order as u64).map(|k| q_expand(&poch_sum_coefficient(k), q_order).expect("no pole at q = 0")).collect();
    Series::new('t', t_order, coeffs)
}

/// Euler's function `prod_{k >= 1} (1 - q^k)` to `q^q_order`.
pub fn euler_phi(q_order: usize) -> QSeries {
    let mut acc: QSeries = Series::one('q', q_order);
    for k in 1..=q_order {
        // acc *= (1 - q^k), in place from the top down
        let mut c = acc.coeffs().to_vec();
        c.resize(q_order + 1, BigRational::zero());
        for d in (k..=q_order).rev() {
            let lower = c[d - k].clone();
            c[d] -= lower;
        }
        acc = Series::new('q', q_order, c);
    }
    acc
}

fn pow_series(base: &QSeries, mut e: u64) -> QSeries {
    let mut acc = Series::one('q', base.order());
    let mut sq = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = &acc * &sq;
        }
        e >>= 1;
        if e > 0 {
            sq = &sq * &sq;
        }
    }
    acc
}

/// The modular discriminant `q prod_{k >= 1} (1 - q^k)^24` to `q^q_order`.
pub fn discriminant(q_order: usize) -> QSeries {
    assert!(q_order >= 1);
    pow_series(&euler_phi(q_order - 1), 24).shift_up(1)
}

/// `q^exponent * body` with a rational exponent, so that fractional powers of `q`
/// stay out of the series type.
#[derive(Clone, Debug, PartialEq)]
pub struct EtaElement {
    pub exponent: BigRational,
    pub body: QSeries,
}

impl EtaElement {
    /// `eta(q) = q^(1/24) phi(q)`.
    pub fn eta(q_order: usize) -> Self {
        EtaElement { exponent: BigRational::new(1.into(), 24.into()), body: euler_phi(q_order) }
    }

    pub fn one(q_order: usize) -> Self {
        EtaElement { exponent: BigRational::zero(), body: Series::one('q', q_order) }
    }

    pub fn mul(&self, other: &Self) -> Self {
        EtaElement { exponent: &self.exponent + &other.exponent, body: &self.body * &other.body }
    }

    pub fn inverse(&self) -> Self {
        EtaElement { exponent: -&self.exponent, body: self.body.inverse().expect("eta bodies have constant term one") }
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        EtaElement {
            exponent: &base.exponent * BigRational::from_integer(e.unsigned_abs().into()),
            body: pow_series(&base.body, e.unsigned_abs()),
        }
    }

    /// Multiplies the prefactor into the body; the exponent must be a
    /// non-negative integer. The order grows with the shift.
    pub fn fold(&self) -> Result<QSeries, QCombError> {
        let e = &self.exponent;
        if !e.is_integer() || e < &BigRational::zero() {
            return Err(QCombError::FractionalPrefactor(e.to_string()));
        }
        let k: usize = e.to_integer().try_into().expect("small exponent");
        Ok(self.body.shift_up(k))
    }
}

/// `eta` built from `phi`: prefactor exponent `1/24`, body `phi`.
pub fn eta_from_phi(q_order: usize) -> EtaElement {
    EtaElement::eta(q_order)
}

/// Generalised pentagonal numbers `k(3k - 1)/2`, `k = 0, 1, -1, 2, -2, ...`, up to
/// `bound`, paired with the sign `(-1)^k`.
pub fn pentagonal_support(bound: usize) -> Vec<(usize, i64)> {
    let mut out = Vec::new();
    for m in 0i64.. {
        let mut any = false;
        for k in if m == 0 { vec![0] } else { vec![m, -m] } {
            let p = (k * (3 * k - 1) / 2) as usize;
            if p <= bound {
                any = true;
                out.push((p, if k.is_even() { 1 } else { -1 }));
            }
        }
        if !any {
            break;
        }
    }
    out.sort();
    out
}
