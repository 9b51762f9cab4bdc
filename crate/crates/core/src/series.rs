//! Truncated formal power series in `z` with coefficients in any [`Ring`].
//!
//! A series of order `N` knows its coefficients `c_0..=c_N` exactly and
//! nothing beyond. Binary operations between series of different orders
//! truncate to the smaller order; nothing is ever extended silently.

use crate::error::{Error, Result};
use crate::ring::Ring;
use crate::scalar::GQ;

#[derive(Clone, PartialEq, Debug)]
pub struct TruncSeries<T> {
    coeffs: Vec<T>,
}

pub type ScalarSeries = TruncSeries<GQ>;

impl<T: Ring> TruncSeries<T> {
    /// Builds a series of order `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least c_0");
        TruncSeries { coeffs }
    }

    /// Pads (with zeros shaped like `template`) or truncates to `order`.
    pub fn from_coeffs(mut coeffs: Vec<T>, order: usize, template: &T) -> Self {
        coeffs.resize(order + 1, template.zero_like());
        TruncSeries { coeffs }
    }

    pub fn zero(template: &T, order: usize) -> Self {
        TruncSeries { coeffs: vec![template.zero_like(); order + 1] }
    }

    pub fn one(template: &T, order: usize) -> Self {
        Self::constant(template.one_like(), order)
    }

    pub fn constant(c: T, order: usize) -> Self {
        let zero = c.zero_like();
        let mut coeffs = vec![zero; order + 1];
        coeffs[0] = c;
        TruncSeries { coeffs }
    }

    /// `c * z^k` truncated at `order`.
    pub fn monomial(c: T, k: usize, order: usize) -> Self {
        let mut coeffs = vec![c.zero_like(); order + 1];
        if k <= order {
            coeffs[k] = c;
        }
        TruncSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &T {
        &self.coeffs[k]
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot extend a truncated series");
        TruncSeries { coeffs: self.coeffs[..=order].to_vec() }
    }

    pub fn map<U: Ring>(&self, f: impl FnMut(&T) -> U) -> TruncSeries<U> {
        TruncSeries { coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn try_map<U: Ring>(&self, f: impl FnMut(&T) -> Result<U>) -> Result<TruncSeries<U>> {
        Ok(TruncSeries { coeffs: self.coeffs.iter().map(f).collect::<Result<_>>()? })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Index of the first nonzero coefficient, if any.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        TruncSeries { coeffs: (0..=n).map(|k| self.coeffs[k].add(&other.coeffs[k])).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        TruncSeries { coeffs: (0..=n).map(|k| self.coeffs[k].sub(&other.coeffs[k])).collect() }
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }

    pub fn scale(&self, c: &GQ) -> Self {
        self.map(|x| x.scale(c))
    }

    /// Cauchy product, `self` on the left.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero; n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        TruncSeries { coeffs: out }
    }

    /// Left multiplication of every coefficient by a constant.
    pub fn left_mul(&self, c: &T) -> Self {
        self.map(|x| c.mul(x))
    }

    /// Right multiplication of every coefficient by a constant.
    pub fn right_mul(&self, c: &T) -> Self {
        self.map(|x| x.mul(c))
    }

    /// `z * self`; the order grows by one because the new top coefficient is known.
    pub fn shift_up(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(self.coeffs[0].zero_like());
        coeffs.extend(self.coeffs.iter().cloned());
        TruncSeries { coeffs }
    }

    /// `(self - c_0) / z`; the order drops by one.
    pub fn shift_down(&self) -> Result<Self> {
        if self.order() == 0 {
            return Err(Error::domain("cannot divide an order-0 series by z"));
        }
        Ok(TruncSeries { coeffs: self.coeffs[1..].to_vec() })
    }

    /// Multiplicative inverse. Requires an invertible constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0_inv =
            self.coeffs[0].try_inverse().ok_or_else(|| Error::domain("constant term of series is not invertible"))?;
        let n = self.order();
        let mut out: Vec<T> = Vec::with_capacity(n + 1);
        out.push(c0_inv.clone());
        for k in 1..=n {
            let mut acc = self.coeffs[0].zero_like();
            for j in 1..=k {
                let a = &self.coeffs[j];
                if a.is_zero() {
                    continue;
                }
                acc = acc.add(&a.mul(&out[k - j]));
            }
            out.push(c0_inv.mul(&acc).neg());
        }
        Ok(TruncSeries { coeffs: out })
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::one(&self.coeffs[0], self.order());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }
}

impl ScalarSeries {
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| GQ::from_int(c)).collect())
    }

    /// The identity series `z` at the given order (order ≥ 1).
    pub fn variable(order: usize) -> Self {
        Self::monomial(GQ::one(), 1, order)
    }

    /// `Σ_k self_k · inner^k`. Requires `inner` to have zero constant term.
    ///
    /// Scalar coefficients are central, so `inner` may live in any ring. The
    /// result has order `min(self.order(), inner.order())`.
    pub fn compose<T: Ring>(&self, inner: &TruncSeries<T>) -> Result<TruncSeries<T>> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::domain("inner series of a composition must have zero constant term"));
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        let template = &inner.coeffs[0];
        let mut acc = TruncSeries::zero(template, n);
        let mut power = TruncSeries::one(template, n);
        for k in 0..=n {
            if !self.coeffs[k].is_zero() {
                acc = acc.add(&power.scale(&self.coeffs[k]));
            }
            if k < n {
                power = power.mul(&inner);
            }
        }
        Ok(acc)
    }

    /// `Σ_{k≥1} β_k · inner^{k-1}` where `self = Σ β_k z^k` is a Boolean
    /// transform η. This evaluates the shifted transform η̃ = η/z at `inner`.
    pub fn compose_shifted<T: Ring>(&self, inner: &TruncSeries<T>) -> Result<TruncSeries<T>> {
        self.shift_down()?.compose(inner)
    }

    /// Compositional inverse: `self(revert(z)) = z + O(z^{N+1})`.
    pub fn revert(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::domain("series reversion needs zero constant term"));
        }
        let n = self.order();
        if n == 0 {
            return Err(Error::domain("series reversion needs order at least 1"));
        }
        let c1_inv = self.coeffs[1]
            .checked_inv()
            .map_err(|_| Error::domain("series reversion needs a nonzero linear coefficient"))?;
        let mut g = Self::monomial(c1_inv.clone(), 1, n);
        for k in 2..=n {
            let residual = self.compose(&g)?;
            let correction = -(&residual.coeffs[k] * &c1_inv);
            g.coeffs[k] = correction;
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ScalarMatrix;

    #[test]
    fn geometric_series() {
        let s = ScalarSeries::from_ints(&[1, -1, 0, 0, 0, 0]);
        assert_eq!(s.inverse().unwrap(), ScalarSeries::from_ints(&[1, 1, 1, 1, 1, 1]));
    }

    #[test]
    fn catalan_from_semicircle_boolean_transform() {
        // 1 - η for the semicircle: η = z² + z⁴ + 2z⁶
        let s = ScalarSeries::from_ints(&[1, 0, -1, 0, -1, 0, -2]);
        assert_eq!(s.inverse().unwrap(), ScalarSeries::from_ints(&[1, 0, 1, 0, 2, 0, 5]));
    }

    #[test]
    fn identity_matrix_series_inverse() {
        let s = TruncSeries::constant(ScalarMatrix::identity(3), 4);
        assert_eq!(s.inverse().unwrap(), s);
    }

    #[test]
    fn non_invertible_constant_term() {
        let s = ScalarSeries::from_ints(&[0, 1, 2]);
        assert!(matches!(s.inverse(), Err(Error::Domain(_))));
        let m = TruncSeries::constant(ScalarMatrix::zeros(2), 2);
        assert!(m.inverse().is_err());
    }

    #[test]
    fn composition_examples() {
        let z = ScalarSeries::variable(6);
        let w = ScalarSeries::from_ints(&[0, 3, -1, 4, 1, 5, 9]);
        assert_eq!(z.compose(&w).unwrap(), w);
        let sq = ScalarSeries::from_ints(&[0, 0, 1, 0, 0, 0, 0]);
        let inner = ScalarSeries::from_ints(&[0, 1, 1, 0, 0, 0, 0]);
        assert_eq!(sq.compose(&inner).unwrap(), ScalarSeries::from_ints(&[0, 0, 1, 2, 1, 0, 0]));
        assert!(sq.compose(&ScalarSeries::from_ints(&[1, 1])).is_err());
    }

    #[test]
    fn shifted_composition_with_matrix_argument() {
        // η of the semicircle; η̃(zI) = (z + z³ + 2z⁵) I
        let eta = ScalarSeries::from_ints(&[0, 0, 1, 0, 1, 0, 2]);
        let inner = TruncSeries::monomial(ScalarMatrix::identity(2), 1, 6);
        let out = eta.compose_shifted(&inner).unwrap();
        let expected = [0, 1, 0, 1, 0, 2];
        assert_eq!(out.order(), 5);
        for (k, &e) in expected.iter().enumerate() {
            assert_eq!(out.coeff(k), &ScalarMatrix::diagonal(2, &GQ::from_int(e)));
        }
        // shifted mode on z + z³ + 2z⁵ itself: 1 + W² + 2W⁴ at W = zI
        let s = ScalarSeries::from_ints(&[0, 1, 0, 1, 0, 2]);
        let out = s.compose_shifted(&inner).unwrap();
        let expected = [1, 0, 1, 0, 2];
        for (k, &e) in expected.iter().enumerate() {
            assert_eq!(out.coeff(k), &ScalarMatrix::diagonal(2, &GQ::from_int(e)));
        }
    }

    #[test]
    fn reversion_examples() {
        let z = ScalarSeries::variable(5);
        assert_eq!(z.revert().unwrap(), z);
        // z/(1-z) ↦ z/(1+z)
        let s = ScalarSeries::from_ints(&[0, 1, 1, 1, 1, 1]);
        assert_eq!(s.revert().unwrap(), ScalarSeries::from_ints(&[0, 1, -1, 1, -1, 1]));
        let s = ScalarSeries::from_ints(&[0, 1, 1, 0, 0]);
        assert_eq!(s.revert().unwrap(), ScalarSeries::from_ints(&[0, 1, -1, 2, -5]));
        let bad = ScalarSeries::from_ints(&[0, 0, 1]);
        assert!(matches!(bad.revert(), Err(Error::Domain(_))));
    }

    #[test]
    fn mixed_orders_truncate_to_minimum() {
        let a = ScalarSeries::from_ints(&[1, 2, 3, 4]);
        let b = ScalarSeries::from_ints(&[1, 1]);
        assert_eq!(a.add(&b).order(), 1);
        assert_eq!(a.mul(&b).order(), 1);
    }
}
