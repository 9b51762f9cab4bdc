use std::collections::BTreeMap;
use std::fmt;

use super::word::{Letter, Word};
use crate::ring::Ring;
use crate::scalar::GQ;

/// A noncommutative polynomial in X, Y over ℚ(i).
///
/// Terms are kept in graded-lexicographic order of their words and zero
/// coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct NCPolynomial {
    terms: BTreeMap<Word, GQ>,
}

pub type PolyMatrix = crate::matrix::SquareMatrix<NCPolynomial>;

impl NCPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GQ::one())
    }

    pub fn constant(c: GQ) -> Self {
        Self::term(c, Word::empty())
    }

    pub fn term(c: GQ, w: Word) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c);
        p
    }

    pub fn word(w: Word) -> Self {
        Self::term(GQ::one(), w)
    }

    pub fn letter(l: Letter) -> Self {
        Self::word(Word::letter(l))
    }

    pub fn x() -> Self {
        Self::letter(Letter::X)
    }

    pub fn y() -> Self {
        Self::letter(Letter::Y)
    }

    /// Polynomial in a single letter from its coefficient list `c_0 + c_1 l + ...`.
    pub fn univariate(l: Letter, coeffs: &[GQ]) -> Self {
        let mut p = Self::zero();
        for (k, c) in coeffs.iter().enumerate() {
            p.add_term(Word::power(l, k), c.clone());
        }
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, GQ)>) -> Self {
        let mut p = Self::zero();
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    pub fn add_term(&mut self, w: Word, c: GQ) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&w);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &GQ)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &Word) -> GQ {
        self.terms.get(w).cloned().unwrap_or_else(GQ::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The augmentation ε: the constant coefficient.
    pub fn constant_term(&self) -> GQ {
        self.coeff(&Word::empty())
    }

    /// `Some(c)` when the polynomial is the constant `c`.
    pub fn as_constant(&self) -> Option<GQ> {
        match self.terms.len() {
            0 => Some(GQ::zero()),
            1 => self.terms.get(&Word::empty()).cloned(),
            _ => None,
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).max()
    }

    /// Highest exponent of `l` in a polynomial supported on `l` alone.
    pub fn is_supported_on(&self, l: Letter) -> bool {
        self.terms.keys().all(|w| w.is_pure(l))
    }

    /// Coefficients `c_0..c_d` of a polynomial supported on `l`; `None` otherwise.
    pub fn univariate_coeffs(&self, l: Letter) -> Option<Vec<GQ>> {
        if !self.is_supported_on(l) {
            return None;
        }
        let d = self.degree().unwrap_or(0);
        let mut out = vec![GQ::zero(); d + 1];
        for (w, c) in &self.terms {
            out[w.len()] = c.clone();
        }
        Some(out)
    }

    pub fn without_constant(&self) -> Self {
        let mut p = self.clone();
        p.terms.remove(&Word::empty());
        p
    }

    /// The star involution: reverse every word and conjugate every coefficient.
    pub fn star(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(w, c)| (w.reversed(), c.conj())))
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.star() == *self
    }

    pub fn map_words(&self, mut f: impl FnMut(&Word, &GQ) -> NCPolynomial) -> NCPolynomial {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out = out.add(&f(w, c));
        }
        out
    }

    /// Applies a linear functional given on the monomial basis.
    pub fn apply_linear<E>(&self, mut f: impl FnMut(&Word) -> Result<GQ, E>) -> Result<GQ, E> {
        let mut acc = GQ::zero();
        for (w, c) in &self.terms {
            let v = f(w)?;
            acc = acc + c * &v;
        }
        Ok(acc)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.concat(v), a * b);
            }
        }
        out
    }

    pub fn scale(&self, c: &GQ) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(w, a)| (w.clone(), c * a)).collect() }
    }

    pub fn neg(&self) -> Self {
        Self { terms: self.terms.iter().map(|(w, a)| (w.clone(), -a)).collect() }
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitutes `t ↦ self` in `Σ c_k t^k`.
    pub fn eval_univariate(&self, coeffs: &[GQ]) -> Self {
        let mut acc = Self::zero();
        let mut power = Self::one();
        for c in coeffs {
            acc = acc.add(&power.scale(c));
            power = power.mul(self);
        }
        acc
    }
}

fn coeff_prefix(c: &GQ) -> String {
    // Coefficient as it appears in front of `*word`.
    if c.is_real() || c.re().eq(&num_rational::BigRational::from_integer(0.into())) {
        c.to_string()
    } else {
        format!("({c})")
    }
}

impl fmt::Display for NCPolynomial {
    /// Canonical printer, e.g. `-1/2 + x^2 + i*x*y - i*y*x`; zero prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (k, (w, c)) in self.terms.iter().enumerate() {
            let term = if w.is_empty() {
                if c.is_real() || c.re() == &num_rational::BigRational::from_integer(0.into()) {
                    c.to_string()
                } else {
                    format!("({c})")
                }
            } else if c.is_one() {
                w.to_string()
            } else if (-c).is_one() {
                format!("-{w}")
            } else {
                format!("{}*{w}", coeff_prefix(c))
            };
            if k == 0 {
                out.push_str(&term);
            } else if let Some(rest) = term.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&term);
            }
        }
        write!(f, "{out}")
    }
}

impl fmt::Debug for NCPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Ring for NCPolynomial {
    fn zero_like(&self) -> Self {
        Self::zero()
    }
    fn one_like(&self) -> Self {
        Self::one()
    }
    fn is_zero(&self) -> bool {
        NCPolynomial::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        NCPolynomial::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        NCPolynomial::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        NCPolynomial::mul(self, other)
    }
    fn neg(&self) -> Self {
        NCPolynomial::neg(self)
    }
    fn scale(&self, c: &GQ) -> Self {
        NCPolynomial::scale(self, c)
    }
    fn try_inverse(&self) -> Option<Self> {
        let c = self.as_constant()?;
        c.checked_inv().ok().map(Self::constant)
    }
}

impl From<GQ> for NCPolynomial {
    fn from(c: GQ) -> Self {
        Self::constant(c)
    }
}

/// Lifts a scalar matrix to a polynomial matrix.
pub fn lift_matrix(m: &crate::matrix::ScalarMatrix) -> PolyMatrix {
    m.map(|c| NCPolynomial::constant(c.clone()))
}

/// `M ⊗ l`: every entry multiplied by the letter `l`.
pub fn letter_matrix(m: &crate::matrix::ScalarMatrix, l: Letter) -> PolyMatrix {
    m.map(|c| NCPolynomial::term(c.clone(), Word::letter(l)))
}

/// Constant matrix of a polynomial matrix whose entries are all constants.
pub fn constant_matrix(m: &PolyMatrix) -> Option<crate::matrix::ScalarMatrix> {
    m.try_map(|p| p.as_constant().ok_or_else(|| crate::error::Error::domain("non-constant entry"))).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn star_examples() {
        let ixy = NCPolynomial::term(GQ::i(), w("XY"));
        assert_eq!(ixy.star(), NCPolynomial::term(-GQ::i(), w("YX")));
        let s = NCPolynomial::x().add(&NCPolynomial::y());
        assert_eq!(s.star(), s);
        let comm = ixy.sub(&NCPolynomial::term(GQ::i(), w("YX")));
        assert!(comm.is_self_adjoint());
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let p = NCPolynomial::x().sub(&NCPolynomial::x());
        assert!(p.is_zero());
        assert_eq!(p.num_terms(), 0);
        assert_eq!(p.to_string(), "0");
    }

    #[test]
    fn printing_is_canonical() {
        let p = NCPolynomial::from_terms([
            (w("YX"), -GQ::i()),
            (w("XY"), GQ::i()),
            (w(""), GQ::frac(-1, 2)),
            (w("XX"), GQ::one()),
        ]);
        assert_eq!(p.to_string(), "-1/2 + x^2 + i*x*y - i*y*x");
        let q = NCPolynomial::term("1+i".parse().unwrap(), w("XYYX"));
        assert_eq!(q.to_string(), "(1+i)*x*y^2*x");
    }

    #[test]
    fn univariate_helpers() {
        let p = NCPolynomial::univariate(Letter::X, &[GQ::one(), GQ::zero(), GQ::frac(1, 4)]);
        assert_eq!(p.univariate_coeffs(Letter::X).unwrap(), vec![GQ::one(), GQ::zero(), GQ::frac(1, 4)]);
        assert!(p.univariate_coeffs(Letter::Y).is_none());
        assert_eq!(p.degree(), Some(2));
    }
}
