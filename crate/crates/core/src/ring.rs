//! The minimal algebraic interface shared by every coefficient type.
//!
//! Truncated series, matrices and the fixed-point engine are generic over
//! [`Ring`]. Rings here may be noncommutative (matrices, noncommutative
//! polynomials) and carry their shape in the value itself, which is why
//! zero and one are produced from an existing element instead of from the
//! type alone.

use std::fmt::Debug;

use crate::scalar::GaussianRational;

pub trait Ring: Clone + PartialEq + Debug {
    /// Additive identity with the same shape as `self`.
    fn zero_like(&self) -> Self;
    /// Multiplicative identity with the same shape as `self`.
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplication by a central scalar.
    fn scale(&self, c: &GaussianRational) -> Self;
    /// Two-sided multiplicative inverse, when it exists and is computable.
    fn try_inverse(&self) -> Option<Self>;

    fn pow(&self, k: usize) -> Self {
        let mut acc = self.one_like();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }
}
