//! Square matrices over an arbitrary (possibly noncommutative) [`Ring`].

use std::fmt;

use crate::error::{Error, Result};
use crate::ring::Ring;
use crate::scalar::GQ;

#[derive(Clone, PartialEq)]
pub struct SquareMatrix<T> {
    n: usize,
    /// Row-major, `n * n` entries.
    entries: Vec<T>,
}

pub type ScalarMatrix = SquareMatrix<GQ>;

impl<T: Ring> SquareMatrix<T> {
    pub fn from_vec(n: usize, entries: Vec<T>) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("matrix dimension must be positive"));
        }
        if entries.len() != n * n {
            return Err(Error::domain(format!("expected {} entries, got {}", n * n, entries.len())));
        }
        Ok(SquareMatrix { n, entries })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::domain("matrix rows must all have length n"));
        }
        Self::from_vec(n, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        assert!(n > 0, "matrix dimension must be positive");
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        SquareMatrix { n, entries }
    }

    /// `template * I`, where `template` supplies the entry shape.
    pub fn diagonal(n: usize, value: &T) -> Self {
        let zero = value.zero_like();
        Self::from_fn(n, |i, j| if i == j { value.clone() } else { zero.clone() })
    }

    pub fn identity_like(n: usize, template: &T) -> Self {
        Self::diagonal(n, &template.one_like())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.entries[i * self.n + j] = v;
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.entries.chunks(self.n).map(|c| c.to_vec()).collect()
    }

    pub fn map<U: Ring>(&self, f: impl FnMut(&T) -> U) -> SquareMatrix<U> {
        SquareMatrix { n: self.n, entries: self.entries.iter().map(f).collect() }
    }

    pub fn try_map<U: Ring>(&self, f: impl FnMut(&T) -> Result<U>) -> Result<SquareMatrix<U>> {
        Ok(SquareMatrix { n: self.n, entries: self.entries.iter().map(f).collect::<Result<_>>()? })
    }

    fn check_dim(&self, other: &Self) {
        assert_eq!(self.n, other.n, "matrix dimension mismatch");
    }

    /// Gauss-Jordan elimination by row operations (left multiplication), taking
    /// the first invertible entry of each column as pivot.
    fn gauss_jordan_inverse(&self) -> Option<Self> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity_like(n, &self.entries[0]);
        for col in 0..n {
            let (pivot_row, pivot_inv) = (col..n).find_map(|r| a.get(r, col).try_inverse().map(|p| (r, p)))?;
            if pivot_row != col {
                for j in 0..n {
                    a.entries.swap(pivot_row * n + j, col * n + j);
                    inv.entries.swap(pivot_row * n + j, col * n + j);
                }
            }
            for j in 0..n {
                let v = pivot_inv.mul(a.get(col, j));
                a.set(col, j, v);
                let w = pivot_inv.mul(inv.get(col, j));
                inv.set(col, j, w);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = a.get(r, j).sub(&factor.mul(a.get(col, j)));
                    a.set(r, j, v);
                    let w = inv.get(r, j).sub(&factor.mul(inv.get(col, j)));
                    inv.set(r, j, w);
                }
            }
        }
        Some(inv)
    }

    pub fn checked_inverse(&self) -> Result<Self> {
        self.gauss_jordan_inverse().ok_or_else(|| Error::domain("singular matrix"))
    }
}

impl<T: Ring> Ring for SquareMatrix<T> {
    fn zero_like(&self) -> Self {
        self.map(|e| e.zero_like())
    }

    fn one_like(&self) -> Self {
        Self::identity_like(self.n, &self.entries[0])
    }

    fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    fn add(&self, other: &Self) -> Self {
        self.check_dim(other);
        SquareMatrix { n: self.n, entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect() }
    }

    fn sub(&self, other: &Self) -> Self {
        self.check_dim(other);
        SquareMatrix { n: self.n, entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.sub(b)).collect() }
    }

    fn mul(&self, other: &Self) -> Self {
        self.check_dim(other);
        let n = self.n;
        let zero = self.entries[0].zero_like();
        Self::from_fn(n, |i, j| {
            let mut acc = zero.clone();
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let b = other.get(k, j);
                if b.is_zero() {
                    continue;
                }
                acc = acc.add(&a.mul(b));
            }
            acc
        })
    }

    fn neg(&self) -> Self {
        self.map(|e| e.neg())
    }

    fn scale(&self, c: &GQ) -> Self {
        self.map(|e| e.scale(c))
    }

    fn try_inverse(&self) -> Option<Self> {
        self.gauss_jordan_inverse()
    }
}

impl<T: fmt::Debug> fmt::Debug for SquareMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[T]> = self.entries.chunks(self.n).collect();
        f.debug_list().entries(rows).finish()
    }
}

impl ScalarMatrix {
    pub fn identity(n: usize) -> Self {
        Self::identity_like(n, &GQ::zero())
    }

    pub fn zeros(n: usize) -> Self {
        Self::diagonal(n, &GQ::zero())
    }

    /// Parses nested string arrays such as `[["0","1"],["i","0"]]`.
    pub fn from_strings(rows: &[Vec<&str>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|s| s.parse::<GQ>()).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    /// `uᵗ M v`.
    pub fn bilinear(&self, u: &[GQ], v: &[GQ]) -> GQ {
        let mut acc = GQ::zero();
        for i in 0..self.n {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..self.n {
                if v[j].is_zero() {
                    continue;
                }
                acc = acc + &(&u[i] * self.get(i, j)) * &v[j];
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<&str>]) -> ScalarMatrix {
        ScalarMatrix::from_strings(rows).unwrap()
    }

    #[test]
    fn inverse_needs_row_swap() {
        let a = m(&[vec!["0", "1"], vec!["2", "3"]]);
        let inv = a.checked_inverse().unwrap();
        assert_eq!(a.mul(&inv), ScalarMatrix::identity(2));
        assert_eq!(inv.mul(&a), ScalarMatrix::identity(2));
    }

    #[test]
    fn complex_inverse() {
        let a = m(&[vec!["1", "i"], vec!["-i", "2"]]);
        let inv = a.checked_inverse().unwrap();
        assert_eq!(a.mul(&inv), ScalarMatrix::identity(2));
    }

    #[test]
    fn singular_matrix_rejected() {
        let a = m(&[vec!["1", "2"], vec!["1/2", "1"]]);
        assert!(matches!(a.checked_inverse(), Err(Error::Domain(_))));
    }

    #[test]
    fn shape_errors() {
        assert!(ScalarMatrix::from_vec(0, vec![]).is_err());
        assert!(ScalarMatrix::from_rows(vec![vec![GQ::one()], vec![]]).is_err());
    }
}
