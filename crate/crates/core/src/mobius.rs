//! Fractional-linear transformations `[A](T) = (aT + b)/(cT + d)` over [`Scalar`].

use thiserror::Error;

use crate::scalar::{Scalar, ScalarError};
use crate::series::{Series, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MobiusError {
    #[error("matrix is singular")]
    Singular,
    #[error("denominator c*f + d has a non-invertible constant term")]
    NonInvertibleDenominator,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// A 2x2 matrix `[[a, b], [c, d]]` with nonzero determinant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mobius {
    a: Scalar,
    b: Scalar,
    c: Scalar,
    d: Scalar,
}

impl Mobius {
    pub fn new(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Result<Self, MobiusError> {
        let m = Mobius { a, b, c, d };
        if m.det().is_zero() {
            return Err(MobiusError::Singular);
        }
        Ok(m)
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Result<Self, MobiusError> {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Self::scalar(Scalar::one()).expect("identity is invertible")
    }

    /// `lambda` times the identity.
    pub fn scalar(lambda: Scalar) -> Result<Self, MobiusError> {
        Self::new(lambda.clone(), Scalar::zero(), Scalar::zero(), lambda)
    }

    /// `[Q] = [[-q, 1], [-1, 1]]`, so that `[Q](T) = (1 - qT)/(1 - T)`.
    pub fn q_matrix() -> Self {
        Self::new(-Scalar::q(), Scalar::one(), Scalar::from_int(-1), Scalar::one()).expect("det [Q] = 1 - q")
    }

    /// `[Q^{-1}] = [[1, -1], [1, -q]]`.
    pub fn q_inv_matrix() -> Self {
        Self::new(Scalar::one(), Scalar::from_int(-1), Scalar::one(), -Scalar::q()).expect("det [Q^-1] = 1 - q")
    }

    pub fn entries(&self) -> [&Scalar; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn a(&self) -> &Scalar {
        &self.a
    }

    pub fn det(&self) -> Scalar {
        &self.a * &self.d - &self.b * &self.c
    }

    /// Matrix product `self * other`; acting on series this applies `other` first.
    pub fn mul(&self, other: &Self) -> Self {
        Mobius {
            a: &self.a * &other.a + &self.b * &other.c,
            b: &self.a * &other.b + &self.b * &other.d,
            c: &self.c * &other.a + &self.d * &other.c,
            d: &self.c * &other.b + &self.d * &other.d,
        }
    }

    /// True if the matrix is a scalar multiple of the identity.
    pub fn is_scalar(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == self.d
    }

    /// `(a f + b)/(c f + d)` as a truncated series.
    pub fn apply(&self, f: &Series<Scalar>) -> Result<Series<Scalar>, MobiusError> {
        let var = f.var().unwrap_or('T');
        let order = f.order();
        let num = &f.scale(&self.a) + &Series::constant(var, self.b.clone(), order);
        let den = &f.scale(&self.c) + &Series::constant(var, self.d.clone(), order);
        num.div(&den).map_err(|e| match e {
            SeriesError::NonInvertibleConstant => MobiusError::NonInvertibleDenominator,
            _ => unreachable!("division only fails on the constant term"),
        })
    }

    /// `(a x + b)/(c x + d)` for a scalar `x`.
    pub fn eval(&self, x: &Scalar) -> Result<Scalar, MobiusError> {
        Ok((&self.a * x + &self.b).checked_div(&(&self.c * x + &self.d))?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_minus_q() -> Scalar {
        Scalar::q_poly(&[1, -1])
    }

    #[test]
    fn lemma_products_are_scalar() {
        let q = Mobius::q_matrix();
        let qi = Mobius::q_inv_matrix();
        let expected = Mobius::scalar(one_minus_q()).unwrap();
        assert_eq!(q.mul(&qi), expected);
        assert_eq!(qi.mul(&q), expected);
        assert_eq!(q.det(), one_minus_q());
        assert_eq!(qi.det(), one_minus_q());
        assert_eq!(q.a(), &-Scalar::q());
    }

    #[test]
    fn identity_is_neutral() {
        let q = Mobius::q_matrix();
        assert_eq!(q.mul(&Mobius::identity()), q);
        assert_eq!(Mobius::identity().mul(&q), q);
    }

    #[test]
    fn singular_matrix_rejected() {
        assert_eq!(Mobius::from_ints(1, 2, 2, 4), Err(MobiusError::Singular));
    }

    #[test]
    fn q_applied_to_generator() {
        let t = Series::variable('T', 2);
        let out = Mobius::q_matrix().apply(&t).unwrap();
        assert_eq!(out, Series::new('T', 2, vec![Scalar::one(), one_minus_q(), one_minus_q()]));
    }

    #[test]
    fn inverse_pair_acts_trivially() {
        let t = Series::variable('T', 8);
        let there = Mobius::q_matrix().apply(&t).unwrap();
        // [Q](T) has constant term 1; [Q^-1] maps it back to T
        let back = Mobius::q_inv_matrix().apply(&there).unwrap();
        assert_eq!(back, t);
        let f = Series::new('T', 5, vec![Scalar::zero(), Scalar::one(), Scalar::q()]);
        assert_eq!(Mobius::identity().apply(&f).unwrap(), f);
    }

    #[test]
    fn non_invertible_denominator() {
        let t: Series<Scalar> = Series::variable('T', 4);
        let m = Mobius::from_ints(1, 1, 1, 0).unwrap();
        assert_eq!(m.apply(&t), Err(MobiusError::NonInvertibleDenominator));
    }

    #[test]
    fn scalar_evaluation() {
        let m = Mobius::from_ints(0, 24, -1, 1).unwrap();
        let v = m.eval(&Scalar::q()).unwrap();
        assert_eq!(v, Scalar::from_int(24).checked_div(&one_minus_q()).unwrap());
    }
}
