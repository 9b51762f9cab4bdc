use std::collections::BTreeMap;
use std::fmt;

use super::poly::{NCPolynomial, PolyMatrix};
use super::word::{Letter, Word};
use crate::matrix::SquareMatrix;
use crate::ring::Ring;
use crate::scalar::GQ;

/// An element of the k-fold algebraic tensor power of ℂ⟨X,Y⟩, stored as a
/// coefficient map over k-tuples of words.
#[derive(Clone, PartialEq, Eq)]
pub struct Tensor {
    arity: usize,
    terms: BTreeMap<Vec<Word>, GQ>,
}

/// Two-fold tensors, the codomain of the derivations.
pub type TensorPoly = Tensor;

pub type TensorMatrix = SquareMatrix<Tensor>;

/// Which derivation to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Derivation {
    /// The free difference quotient ∂: cut out the letter.
    Partial,
    /// rδ: cut just before the letter, keeping it on the right.
    Right,
    /// lδ: cut just after the letter, keeping it on the left.
    Left,
}

impl Tensor {
    pub fn zero(arity: usize) -> Self {
        assert!(arity >= 1, "tensor arity must be positive");
        Tensor { arity, terms: BTreeMap::new() }
    }

    pub fn one(arity: usize) -> Self {
        Self::simple(GQ::one(), vec![Word::empty(); arity])
    }

    pub fn simple(c: GQ, words: Vec<Word>) -> Self {
        let mut t = Self::zero(words.len());
        t.add_term(words, c);
        t
    }

    /// `p ⊗ q`.
    pub fn from_pair(p: &NCPolynomial, q: &NCPolynomial) -> Self {
        let mut t = Self::zero(2);
        for (u, a) in p.terms() {
            for (v, b) in q.terms() {
                t.add_term(vec![u.clone(), v.clone()], a * b);
            }
        }
        t
    }

    /// Embeds a polynomial as a tensor of arity one.
    pub fn from_poly(p: &NCPolynomial) -> Self {
        let mut t = Self::zero(1);
        for (w, c) in p.terms() {
            t.add_term(vec![w.clone()], c.clone());
        }
        t
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Word>, &GQ)> {
        self.terms.iter()
    }

    pub fn coeff(&self, words: &[Word]) -> GQ {
        self.terms.get(words).cloned().unwrap_or_else(GQ::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, words: Vec<Word>, c: GQ) {
        assert_eq!(words.len(), self.arity, "tensor arity mismatch");
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(words);
        match entry {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.arity, other.arity, "tensor arity mismatch");
        let mut out = self.clone();
        for (ws, c) in &other.terms {
            out.add_term(ws.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &GQ) -> Self {
        let mut out = Self::zero(self.arity);
        for (ws, a) in &self.terms {
            out.add_term(ws.clone(), a * c);
        }
        out
    }

    /// Componentwise product in the tensor-power algebra.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.arity, other.arity, "tensor arity mismatch");
        let mut out = Self::zero(self.arity);
        for (us, a) in &self.terms {
            for (vs, b) in &other.terms {
                let ws = us.iter().zip(vs).map(|(u, v)| u.concat(v)).collect();
                out.add_term(ws, a * b);
            }
        }
        out
    }

    /// `(p ⊗ 1 ⊗ … ⊗ 1) · self`.
    pub fn left_mul_first(&self, p: &NCPolynomial) -> Self {
        let mut f = vec![NCPolynomial::one(); self.arity];
        f[0] = p.clone();
        Self::product_of(&f).mul(self)
    }

    /// `self · (1 ⊗ … ⊗ 1 ⊗ q)`.
    pub fn right_mul_last(&self, q: &NCPolynomial) -> Self {
        let mut f = vec![NCPolynomial::one(); self.arity];
        f[self.arity - 1] = q.clone();
        self.mul(&Self::product_of(&f))
    }

    /// `f_1 ⊗ … ⊗ f_k`.
    pub fn product_of(factors: &[NCPolynomial]) -> Self {
        let mut partial: BTreeMap<Vec<Word>, GQ> = BTreeMap::new();
        partial.insert(Vec::new(), GQ::one());
        for f in factors {
            let mut next = BTreeMap::new();
            for (ws, a) in &partial {
                for (w, b) in f.terms() {
                    let mut v = ws.clone();
                    v.push(w.clone());
                    next.insert(v, a * b);
                }
            }
            partial = next;
        }
        let mut out = Self::zero(factors.len());
        for (ws, c) in partial {
            out.add_term(ws, c);
        }
        out
    }

    /// Applies a linear map `Word → k-tensor` to factor `pos`, producing a
    /// tensor of arity `arity + k - 1`.
    pub fn apply_at(&self, pos: usize, k: usize, mut f: impl FnMut(&Word) -> Tensor) -> Self {
        assert!(pos < self.arity);
        let mut out = Self::zero(self.arity + k - 1);
        for (ws, c) in &self.terms {
            let image = f(&ws[pos]);
            assert_eq!(image.arity, k, "image arity mismatch");
            for (vs, d) in &image.terms {
                let mut new = ws[..pos].to_vec();
                new.extend(vs.iter().cloned());
                new.extend(ws[pos + 1..].iter().cloned());
                out.add_term(new, c * d);
            }
        }
        out
    }

    /// `(f_1 ⊗ … ⊗ f_{k-1} ⊗ g)`: scalar functionals on every factor but the
    /// last, which is mapped to a polynomial.
    pub fn contract<E>(
        &self,
        mut scalar: impl FnMut(usize, &Word) -> Result<GQ, E>,
        mut last: impl FnMut(&Word) -> Result<NCPolynomial, E>,
    ) -> Result<NCPolynomial, E> {
        let mut out = NCPolynomial::zero();
        for (ws, c) in &self.terms {
            let mut coeff = c.clone();
            for (k, w) in ws[..self.arity - 1].iter().enumerate() {
                coeff = coeff * scalar(k, w)?;
                if coeff.is_zero() {
                    break;
                }
            }
            if coeff.is_zero() {
                continue;
            }
            out = out.add(&last(&ws[self.arity - 1])?.scale(&coeff));
        }
        Ok(out)
    }
}

impl fmt::Display for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(ws, c)| {
                let body: Vec<String> = ws.iter().map(Word::to_string).collect();
                format!("({c})*{}", body.join("⊗"))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Ring for Tensor {
    fn zero_like(&self) -> Self {
        Self::zero(self.arity)
    }
    fn one_like(&self) -> Self {
        Self::one(self.arity)
    }
    fn is_zero(&self) -> bool {
        Tensor::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        Tensor::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        Tensor::add(self, &other.scale(&-GQ::one()))
    }
    fn mul(&self, other: &Self) -> Self {
        Tensor::mul(self, other)
    }
    fn neg(&self) -> Self {
        self.scale(&-GQ::one())
    }
    fn scale(&self, c: &GQ) -> Self {
        Tensor::scale(self, c)
    }
    fn try_inverse(&self) -> Option<Self> {
        None
    }
}

/// Derivation of a single word into a 2-tensor.
pub fn derive_word(w: &Word, letter: Letter, kind: Derivation) -> Tensor {
    let mut out = Tensor::zero(2);
    let n = w.len();
    for (j, &l) in w.letters().iter().enumerate() {
        if l != letter {
            continue;
        }
        let (left, right) = match kind {
            Derivation::Partial => (w.slice(0, j), w.slice(j + 1, n)),
            Derivation::Right => (w.slice(0, j), w.slice(j, n)),
            Derivation::Left => (w.slice(0, j + 1), w.slice(j + 1, n)),
        };
        out.add_term(vec![left, right], GQ::one());
    }
    out
}

pub fn derive(p: &NCPolynomial, letter: Letter, kind: Derivation) -> Tensor {
    let mut out = Tensor::zero(2);
    for (w, c) in p.terms() {
        out = out.add(&derive_word(w, letter, kind).scale(c));
    }
    out
}

/// The free difference quotient ∂_letter.
pub fn partial_diff(p: &NCPolynomial, letter: Letter) -> Tensor {
    derive(p, letter, Derivation::Partial)
}

/// `∂^k`, obtained by repeatedly applying ∂ to the last tensor factor.
/// The result has arity `k + 1`.
pub fn partial_diff_k(p: &NCPolynomial, letter: Letter, k: usize) -> Tensor {
    assert!(k >= 1, "derivative order must be positive");
    let mut t = partial_diff(p, letter);
    for _ in 1..k {
        let last = t.arity() - 1;
        t = t.apply_at(last, 2, |w| derive_word(w, letter, Derivation::Partial));
    }
    t
}

pub fn rdelta(p: &NCPolynomial, letter: Letter) -> Tensor {
    derive(p, letter, Derivation::Right)
}

pub fn ldelta(p: &NCPolynomial, letter: Letter) -> Tensor {
    derive(p, letter, Derivation::Left)
}

/// Entrywise derivation of a polynomial matrix.
pub fn amplified_diff(m: &PolyMatrix, letter: Letter, kind: Derivation) -> TensorMatrix {
    m.map(|p| derive(p, letter, kind))
}

/// `(A ⊙ B)_{ij} = Σ_k a_{ik} ⊗ b_{kj}`.
pub fn odot(a: &PolyMatrix, b: &PolyMatrix) -> TensorMatrix {
    let n = a.dim();
    assert_eq!(n, b.dim(), "matrix dimension mismatch");
    SquareMatrix::from_fn(n, |i, j| {
        let mut acc = Tensor::zero(2);
        for k in 0..n {
            acc = acc.add(&Tensor::from_pair(a.get(i, k), b.get(k, j)));
        }
        acc
    })
}

/// `T · (1 ⊙ B)`: right multiplication of the last factor.
pub fn tensor_matrix_mul_right(t: &TensorMatrix, b: &PolyMatrix) -> TensorMatrix {
    let n = t.dim();
    SquareMatrix::from_fn(n, |i, j| {
        let mut acc = Tensor::zero(2);
        for k in 0..n {
            acc = acc.add(&t.get(i, k).right_mul_last(b.get(k, j)));
        }
        acc
    })
}

/// `(A ⊙ 1) · T`: left multiplication of the first factor.
pub fn tensor_matrix_mul_left(a: &PolyMatrix, t: &TensorMatrix) -> TensorMatrix {
    let n = t.dim();
    SquareMatrix::from_fn(n, |i, j| {
        let mut acc = Tensor::zero(2);
        for k in 0..n {
            let lifted = Tensor::from_pair(a.get(i, k), &NCPolynomial::one());
            acc = acc.add(&lifted.mul(t.get(k, j)));
        }
        acc
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::parse_poly;

    fn p(s: &str) -> NCPolynomial {
        parse_poly(s).unwrap()
    }

    fn t2(pairs: &[(&str, &str)]) -> Tensor {
        let mut t = Tensor::zero(2);
        for (a, b) in pairs {
            t.add_term(vec![Word::parse(a).unwrap(), Word::parse(b).unwrap()], GQ::one());
        }
        t
    }

    #[test]
    fn free_difference_quotient_of_power() {
        assert_eq!(partial_diff(&p("x^3"), Letter::X), t2(&[("", "XX"), ("X", "X"), ("XX", "")]));
        assert!(partial_diff(&p("y^2"), Letter::X).is_zero());
    }

    #[test]
    fn second_derivative_of_square() {
        let d2 = partial_diff_k(&p("x^2"), Letter::X, 2);
        assert_eq!(d2, Tensor::one(3));
        let d1 = partial_diff(&p("x^2"), Letter::X);
        let other = d1.apply_at(0, 2, |w| derive_word(w, Letter::X, Derivation::Partial));
        assert_eq!(d2, other);
    }

    #[test]
    fn deconcatenations() {
        assert_eq!(rdelta(&p("x^2"), Letter::X), t2(&[("", "XX"), ("X", "X")]));
        assert_eq!(ldelta(&p("x^2"), Letter::X), t2(&[("X", "X"), ("XX", "")]));
        assert_eq!(rdelta(&p("y*x*y"), Letter::X), t2(&[("Y", "XY")]));
    }

    #[test]
    fn leibniz_on_a_product() {
        let a = p("x*y + 2*x^2");
        let b = p("i*y*x - x");
        let lhs = partial_diff(&a.mul(&b), Letter::X);
        let rhs = partial_diff(&a, Letter::X).right_mul_last(&b).add(&partial_diff(&b, Letter::X).left_mul_first(&a));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn contract_applies_functionals() {
        let t = rdelta(&p("y*x*y*x"), Letter::X);
        // terms: Y ⊗ XYX, YXY ⊗ X
        let out: Result<_, ()> =
            t.contract(|_, w| Ok(GQ::from_int(w.len() as i64)), |w| Ok(NCPolynomial::word(w.clone())));
        assert_eq!(out.unwrap(), p("x*y*x + 3*x"));
    }
}
