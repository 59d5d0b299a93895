//! The lambda-ring structure on `Z[q, q^-1]` and its localisations: Adams
//! operations, `lambda_t` into truncated big Witt vectors, the Newton link between
//! the two, and the product identities for `(t; q)_inf`, the Thom class and the
//! discriminant.
//!
//! Convention: a [`WittElement`] stores `lambda_t(a)`, so a line `L` maps to
//! `1 + tL`. Whenever an identity is phrased with `lambda_{-t}`, the element is
//! flipped with [`WittElement::at_minus_t`] right before comparison.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::mobius::{Mobius, MobiusError};
use crate::qcomb::{discriminant, div_line, euler_phi, mul_line, q_expand, q_fact, QCombError, TqSeries};
use crate::report::VerificationReport;
use crate::scalar::{Scalar, ScalarError};
use crate::series::{QSeries, Series, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LambdaError {
    #[error("{0} does not live in q")]
    NotInQ(String),
    #[error("q-expansion coefficient of q^{n} is {value}, not an integer")]
    NonIntegerExpansion { n: usize, value: String },
    #[error("cannot substitute into a t-series truncated at t^{t_order}: {reason}")]
    Truncation { t_order: usize, reason: &'static str },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    QComb(#[from] QCombError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Mobius(#[from] MobiusError),
}

/// `psi^k`: the ring endomorphism `q -> q^k`.
pub fn adams(a: &Scalar, k: u32) -> Result<Scalar, LambdaError> {
    if !a.lives_in_q() {
        return Err(LambdaError::NotInQ(a.to_string()));
    }
    Ok(a.inflate_s(k))
}

/// An exact element together with its expansion at `q = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct QExpandable {
    pub exact: Scalar,
    pub expansion: QSeries,
}

impl QExpandable {
    pub fn new(exact: Scalar, q_order: usize) -> Result<Self, LambdaError> {
        if !exact.lives_in_q() {
            return Err(LambdaError::NotInQ(exact.to_string()));
        }
        let expansion = q_expand(&exact, q_order)?;
        Ok(QExpandable { exact, expansion })
    }

    /// The polynomial `sum a_n q^n`.
    pub fn from_multiplicities(a: &[i64], q_order: usize) -> Self {
        Self::new(Scalar::q_poly(a), q_order).expect("polynomials in q expand")
    }

    pub fn q_order(&self) -> usize {
        self.expansion.order()
    }

    /// True when every expansion coefficient is an integer, i.e. the element is
    /// a virtual representation to this order.
    pub fn is_virtual_rep(&self) -> bool {
        self.expansion.coeffs().iter().all(|c| c.is_integer())
    }

    fn multiplicities(&self) -> Result<Vec<i64>, LambdaError> {
        (0..=self.q_order())
            .map(|n| {
                let c = self.expansion.coeff(n);
                c.is_integer()
                    .then(|| c.to_integer().to_i64())
                    .flatten()
                    .ok_or_else(|| LambdaError::NonIntegerExpansion { n, value: c.to_string() })
            })
            .collect()
    }
}

/// A truncated big Witt vector `1 + w_1 t + w_2 t^2 + ...` with `q`-series entries.
/// Addition is multiplication of series.
#[derive(Clone, Debug, PartialEq)]
pub struct WittElement {
    body: TqSeries,
    q_order: usize,
    /// A `d` with `[t^j] = O(q^(q_order + 1))` for all `j > d`, when known.
    t_degree: Option<usize>,
}

impl WittElement {
    pub fn one(t_order: usize, q_order: usize) -> Self {
        WittElement { body: Series::constant('t', Series::one('q', q_order), t_order), q_order, t_degree: Some(0) }
    }

    pub fn body(&self) -> &TqSeries {
        &self.body
    }

    pub fn t_order(&self) -> usize {
        self.body.order()
    }

    pub fn q_order(&self) -> usize {
        self.q_order
    }

    pub fn coeff(&self, k: usize) -> QSeries {
        self.body.coeff_ref(k).cloned().unwrap_or_else(|| Series::zero('q', self.q_order))
    }

    /// `w(-t)`.
    pub fn at_minus_t(&self) -> Self {
        WittElement { body: self.body.alternate(), ..self.clone() }
    }

    /// The Witt-vector negative, i.e. the reciprocal series.
    pub fn negate(&self) -> Self {
        WittElement { body: self.body.inverse().expect("constant term one"), q_order: self.q_order, t_degree: None }
    }

    /// `sum_j w_j (c q^m)^j`, truncated at `q^q_order`.
    ///
    /// Only defined when no dropped `t`-coefficient can contribute: either the
    /// element is known to be a polynomial in `t` modulo `q^(q_order+1)`, or
    /// `m >= 1` and the `t`-order reaches `q_order / m`.
    pub fn specialize(&self, c: &BigRational, m: usize) -> Result<QSeries, LambdaError> {
        let nt = self.t_order();
        let poly_ok = self.t_degree.is_some_and(|d| d <= nt);
        let shift_ok = m >= 1 && nt >= self.q_order / m;
        if !poly_ok && !shift_ok {
            let reason = if m == 0 {
                "a constant value of t needs the element to be polynomial in t"
            } else {
                "the t-order is below q_order / m"
            };
            return Err(LambdaError::Truncation { t_order: nt, reason });
        }
        let mut acc = Series::zero('q', self.q_order);
        let mut cj = BigRational::one();
        for j in 0..=nt {
            if m * j > self.q_order && m > 0 {
                break;
            }
            let term = self.coeff(j).shift_up(m * j).truncate(self.q_order).scale_rational(&cj);
            acc = &acc + &term;
            cj *= c;
        }
        Ok(acc)
    }
}

/// `w1 + w2` in the Witt group: the product of the two series.
pub fn witt_add(a: &WittElement, b: &WittElement) -> WittElement {
    let t_order = a.t_order().min(b.t_order());
    let q_order = a.q_order.min(b.q_order);
    let trim = |w: &WittElement| w.body.truncate(t_order).map(|c| c.truncate(q_order));
    WittElement { body: &trim(a) * &trim(b), q_order, t_degree: a.t_degree.zip(b.t_degree).map(|(x, y)| x + y) }
}

/// `prod_n (1 + t q^n)^(a_n)` over the expansion `sum a_n q^n` of `a`.
pub fn lambda_t(a: &QExpandable, t_order: usize, q_order: usize) -> Result<WittElement, LambdaError> {
    let q_order = q_order.min(a.q_order());
    let mult = a.multiplicities()?;
    let one = BigRational::one();
    let mut body = WittElement::one(t_order, q_order).body;
    for (n, &a_n) in mult.iter().enumerate().take(q_order + 1) {
        for _ in 0..a_n.unsigned_abs() {
            body = if a_n > 0 { mul_line(&body, &one, n) } else { div_line(&body, &one, n) };
        }
    }
    // (1 + t)^(a_0) times factors whose t^j coefficient is O(q^j)
    let t_degree = (mult[0] >= 0).then(|| mult[0] as usize + q_order);
    Ok(WittElement { body, q_order, t_degree })
}

/// `n`-th ghost component: `[t^n]` of `-t d/dt log w(-t)`.
pub fn witt_ghost(w: &WittElement, n: usize) -> QSeries {
    let log = w.body.alternate().log1().expect("constant term one");
    ghost_cell(w, &log, n)
}

/// `-n [t^n] log`, as a `q`-series of the element's precision even when it vanishes.
fn ghost_cell(w: &WittElement, log: &TqSeries, n: usize) -> QSeries {
    match log.coeff_ref(n) {
        Some(c) if !c.is_zero() => c.scale_rational(&BigRational::from_integer(-BigInt::from(n))),
        _ => Series::zero('q', w.q_order),
    }
}

/// `psi^1 .. psi^k` of the element whose lambda series is `w`.
pub fn newton_adams_from_lambda(w: &WittElement, k: usize) -> Vec<QSeries> {
    assert!(k <= w.t_order(), "need t-order at least {k}");
    let log = w.body.alternate().log1().expect("constant term one");
    (1..=k).map(|n| ghost_cell(w, &log, n)).collect()
}

/// Which power of `q` appears in the closed form for `lambda^k (1 - q)^-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum ExponentVariant {
    /// `q^(k(k+1)/2)`
    Printed,
    /// `q^(k(k-1)/2)`
    Binomial,
}

#[derive(Clone, Debug)]
pub struct LambdaKReport {
    pub k: u64,
    /// `q^(k(k+1)/2) / ([k]_q! (1-q)^k)`.
    pub printed: Scalar,
    /// `q^(k(k-1)/2) / ([k]_q! (1-q)^k)`.
    pub binomial: Scalar,
    /// `[t^k] lambda_t((1-q)^-1)`.
    pub witt: QSeries,
    /// `e_k(1, q, ..., q^q_order)` from the Newton recursion on power sums.
    pub oracle: QSeries,
    pub printed_matches: bool,
    pub binomial_matches: bool,
    pub witt_matches: bool,
}

impl LambdaKReport {
    /// The variant all three routes agree on, if exactly one does.
    pub fn selected(&self) -> Option<ExponentVariant> {
        match (self.printed_matches, self.binomial_matches, self.witt_matches) {
            (true, false, true) => Some(ExponentVariant::Printed),
            (false, true, true) => Some(ExponentVariant::Binomial),
            _ => None,
        }
    }
}

fn closed_lambda_k(k: u64, exponent: u64) -> Scalar {
    let den = &q_fact(k) * &Scalar::q_poly(&[1, -1]).pow(k as i64).expect("non-negative power");
    Scalar::q_pow(exponent as i64).checked_div(&den).expect("nonzero")
}

/// `e_1 .. e_k` of the variables `1, q, ..., q^q_order` via
/// `e_j = (1/j) sum_i (-1)^(i-1) e_(j-i) p_i`.
pub fn elementary_symmetric_geometric(k: usize, q_order: usize) -> Vec<QSeries> {
    let power_sum = |i: usize| {
        let mut c = vec![BigRational::zero(); q_order + 1];
        for n in 0..=q_order {
            if n * i <= q_order {
                c[n * i] += BigRational::one();
            }
        }
        Series::new('q', q_order, c)
    };
    let p: Vec<QSeries> = (0..=k).map(|i| if i == 0 { Series::zero('q', q_order) } else { power_sum(i) }).collect();
    let mut e: Vec<QSeries> = vec![Series::one('q', q_order)];
    for j in 1..=k {
        let mut acc = Series::zero('q', q_order);
        for i in 1..=j {
            let term = &e[j - i] * &p[i];
            acc = if i % 2 == 1 { &acc + &term } else { &acc - &term };
        }
        e.push(acc.scale_rational(&BigRational::new(1.into(), BigInt::from(j))));
    }
    e
}

pub fn lambda_k_closed(k: u64, q_order: usize) -> Result<LambdaKReport, LambdaError> {
    assert!(k >= 1);
    let printed = closed_lambda_k(k, k * (k + 1) / 2);
    let binomial = closed_lambda_k(k, k * (k - 1) / 2);
    let geometric = QExpandable::new(Scalar::q_poly(&[1, -1]).inv()?, q_order)?;
    let witt = lambda_t(&geometric, k as usize, q_order)?.coeff(k as usize);
    let oracle = elementary_symmetric_geometric(k as usize, q_order).pop().expect("k >= 1");
    Ok(LambdaKReport {
        k,
        printed_matches: q_expand(&printed, q_order)? == oracle,
        binomial_matches: q_expand(&binomial, q_order)? == oracle,
        witt_matches: witt == oracle,
        printed,
        binomial,
        witt,
        oracle,
    })
}

/// The class `lambda_{-1}` of the regular representation without its trivial
/// summand.
#[derive(Clone, Debug)]
pub struct ThomClass {
    pub value: QSeries,
    /// `lambda_{-t}((1-q)^-1)` at `t = 1`, including the `n = 0` factor `1 - t`.
    pub literal: QSeries,
    pub route: &'static str,
}

pub const THOM_ROUTE: &str = "lambda_{-t}(q/(1-q)) at t = 1 (factors n >= 1)";

pub fn thom_class(q_order: usize) -> Result<ThomClass, LambdaError> {
    let one = BigRational::one();
    let geometric = Scalar::q_poly(&[1, -1]).inv()?;
    let shifted = QExpandable::new(&Scalar::q() * &geometric, q_order)?;
    let value = lambda_t(&shifted, q_order, q_order)?.at_minus_t().specialize(&one, 0)?;
    let full = QExpandable::new(geometric, q_order)?;
    let literal = lambda_t(&full, q_order + 1, q_order)?.at_minus_t().specialize(&one, 0)?;
    Ok(ThomClass { value, literal, route: THOM_ROUTE })
}

pub const EX32_MOBIUS: &str = "[[0, 24], [-1, 1]](q) = 24/(1 - q)";
pub const EX32_DIRECT: &str = "(a) t = 1 in lambda_{-t}(24/(1-q))";
pub const EX32_SHIFT: &str = "(b) t = q in lambda_{-t}(24/(1-q))";
pub const EX32_DROP: &str = "(c) t = 1 in lambda_{-t}(24q/(1-q))";

/// Labelled candidate expansions.
pub type NamedSeries = Vec<(&'static str, QSeries)>;

/// The limit `q lambda_{-t}([[0,24],[-1,1]](q))` as `t -> 1`, read three ways and
/// compared with the discriminant.
pub fn exercise32(q_order: usize) -> Result<(VerificationReport, NamedSeries), LambdaError> {
    assert!(q_order >= 2);
    let one = BigRational::one();
    let mut report = VerificationReport::new();
    let m = Mobius::from_ints(0, 24, -1, 1)?;
    let value = m.eval(&Scalar::q())?;
    let expected = Scalar::from_int(24).checked_div(&Scalar::q_poly(&[1, -1]))?;
    report.push(EX32_MOBIUS, &[], value == expected, (value != expected).then(|| value.to_string()));

    let delta = discriminant(q_order);
    let times_q = |f: QSeries| f.shift_up(1).truncate(q_order);
    let a = QExpandable::new(value.clone(), q_order)?;
    let direct = lambda_t(&a, 24 + q_order, q_order)?.at_minus_t();
    let cand_a = times_q(direct.specialize(&one, 0)?);
    let cand_b = times_q(direct.specialize(&one, 1)?);
    let dropped = QExpandable::new(&Scalar::q() * &value, q_order)?;
    let cand_c = times_q(lambda_t(&dropped, q_order, q_order)?.at_minus_t().specialize(&one, 0)?);

    let mut out = Vec::new();
    for (name, cand) in [(EX32_DIRECT, cand_a), (EX32_SHIFT, cand_b), (EX32_DROP, cand_c)] {
        let diff = (0..=q_order).find(|&n| cand.coeff(n) != delta.coeff(n));
        report.push(name, &[q_order], diff.is_none(), diff.map(|n| format!("first difference at q^{n}")));
        out.push((name, cand));
    }
    Ok((report, out))
}

/// `prod_{n >= 0} (1 - q^(n+1))^24 = phi(q)^24`, the shift identity behind (b).
pub fn phi_power(q_order: usize, e: u64) -> QSeries {
    let phi = euler_phi(q_order);
    (0..e).fold(Series::one('q', q_order), |acc, _| &acc * &phi)
}
