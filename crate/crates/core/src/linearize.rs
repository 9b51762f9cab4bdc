//! Linearizations `(1 − z^m P)⁻¹ = uᵗ (I − z(A(z)X + B(z)Y))⁻¹ v`.
//!
//! Matrix entries are indexed `(source, target)`: a product
//! `L_{i₀i₁} L_{i₁i₂} ⋯` reads its letters along the walk `i₀ → i₁ → ⋯`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::engine::{resolvent_series, MatrixSeries};
use crate::error::{Error, Result};
use crate::matrix::ScalarMatrix;
use crate::ncpoly::{Letter, NCPolynomial, Word};
use crate::scalar::GQ;

/// `A(z)`, `B(z)` as coefficient lists in `z`, with boundary vectors `u`, `v`.
#[derive(Clone, Debug, PartialEq)]
pub struct Linearization {
    dim: usize,
    degree: usize,
    a: Vec<ScalarMatrix>,
    b: Vec<ScalarMatrix>,
    u: Vec<GQ>,
    v: Vec<GQ>,
}

impl Linearization {
    /// Validates shapes; `a` and `b` list the coefficients of `z⁰, z¹, …`.
    pub fn new(a: Vec<ScalarMatrix>, b: Vec<ScalarMatrix>, u: Vec<GQ>, v: Vec<GQ>, degree: usize) -> Result<Self> {
        let dim = u.len();
        if dim == 0 || v.len() != dim {
            return Err(Error::domain("boundary vectors must be nonempty and of equal length"));
        }
        if a.is_empty() || b.is_empty() {
            return Err(Error::domain("coefficient lists must be nonempty"));
        }
        if a.iter().chain(&b).any(|m| m.dim() != dim) {
            return Err(Error::domain("coefficient matrices must match the vector length"));
        }
        if degree == 0 {
            return Err(Error::domain("degree must be positive"));
        }
        let (a, b) = (trim_zero_powers(a), trim_zero_powers(b));
        Ok(Linearization { dim, degree, a, b, u, v })
    }

    /// z-independent coefficients.
    pub fn constant(a: ScalarMatrix, b: ScalarMatrix, u: Vec<GQ>, v: Vec<GQ>, degree: usize) -> Result<Self> {
        Self::new(vec![a], vec![b], u, v, degree)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The degree `m` of the linearized polynomial.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn a(&self) -> &[ScalarMatrix] {
        &self.a
    }

    pub fn b(&self) -> &[ScalarMatrix] {
        &self.b
    }

    pub fn u(&self) -> &[GQ] {
        &self.u
    }

    pub fn v(&self) -> &[GQ] {
        &self.v
    }

    pub fn a_series(&self, order: usize) -> MatrixSeries {
        MatrixSeries::from_coeffs(self.a.clone(), order, &self.a[0])
    }

    pub fn b_series(&self, order: usize) -> MatrixSeries {
        MatrixSeries::from_coeffs(self.b.clone(), order, &self.b[0])
    }

    /// A copy with one coefficient entry of `A` replaced.
    pub fn with_a_entry(&self, power: usize, i: usize, j: usize, value: GQ) -> Self {
        let mut out = self.clone();
        while out.a.len() <= power {
            out.a.push(ScalarMatrix::zeros(self.dim));
        }
        out.a[power].set(i, j, value);
        out
    }
}

fn trim_zero_powers(mut coeffs: Vec<ScalarMatrix>) -> Vec<ScalarMatrix> {
    while coeffs.len() > 1 && coeffs.last().is_some_and(|m| m.entries().iter().all(GQ::is_zero)) {
        coeffs.pop();
    }
    coeffs
}

/// The 3×3 linearization of `i(XY − YX)` with `u = v = e₁`.
pub fn commutator_linearization() -> Linearization {
    let cx = ScalarMatrix::from_strings(&[vec!["0", "0", "i"], vec!["1", "0", "0"], vec!["0", "0", "0"]])
        .expect("valid literal");
    let cy = ScalarMatrix::from_strings(&[vec!["0", "-i", "0"], vec!["0", "0", "0"], vec!["1", "0", "0"]])
        .expect("valid literal");
    let e1 = vec![GQ::one(), GQ::zero(), GQ::zero()];
    Linearization::constant(cx, cy, e1.clone(), e1, 2).expect("consistent shapes")
}

/// Prefix-trie automaton: states are the proper prefixes of the monomials of
/// `p`, the root is the empty word, and completing a monomial of length `k`
/// returns to the root with weight `c · z^{m−k}`.
pub fn linearize(p: &NCPolynomial) -> Result<Linearization> {
    if p.is_zero() {
        return Err(Error::domain("cannot linearize the zero polynomial"));
    }
    if !p.constant_term().is_zero() {
        return Err(Error::domain("polynomial has a nonzero constant term; shift it away first"));
    }
    let m = p.degree().expect("nonzero polynomial");
    let mut states: BTreeMap<Word, usize> = BTreeMap::new();
    states.insert(Word::empty(), 0);
    for (w, _) in p.terms() {
        for j in 1..w.len() {
            let prefix = w.slice(0, j);
            let next = states.len();
            states.entry(prefix).or_insert(next);
        }
    }
    let n = states.len();
    let mut a = vec![ScalarMatrix::zeros(n); m];
    let mut b = vec![ScalarMatrix::zeros(n); m];
    let slot =
        |l: Letter, a: &mut Vec<ScalarMatrix>, b: &mut Vec<ScalarMatrix>, power: usize, i: usize, j: usize, c: GQ| {
            let target = match l {
                Letter::X => &mut a[power],
                Letter::Y => &mut b[power],
            };
            let v = target.get(i, j) + &c;
            target.set(i, j, v);
        };
    for (w, c) in p.terms() {
        let k = w.len();
        let letters = w.letters();
        for j in 0..k - 1 {
            let src = states[&w.slice(0, j)];
            let dst = states[&w.slice(0, j + 1)];
            let matrix = match letters[j] {
                Letter::X => &mut a[0],
                Letter::Y => &mut b[0],
            };
            // trie edges are shared between monomials with a common prefix
            matrix.set(src, dst, GQ::one());
        }
        let src = states[&w.slice(0, k - 1)];
        slot(letters[k - 1], &mut a, &mut b, m - k, src, 0, c.clone());
    }
    let mut root = vec![GQ::zero(); n];
    root[0] = GQ::one();
    Linearization::new(a, b, root.clone(), root, m)
}

/// Outcome of comparing both sides of a linearization identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub ok: bool,
    /// First power of `z` whose coefficients differ.
    pub first_mismatch: Option<usize>,
}

/// Compares `uᵗ (I − zL)⁻¹ v` with `Σ (z^m P)ⁿ` coefficientwise through `z^order`.
pub fn verify_linearization(lin: &Linearization, p: &NCPolynomial, order: usize) -> Verification {
    let psi = match resolvent_series(&lin.a_series(order), &lin.b_series(order), order) {
        Ok(psi) => psi,
        Err(_) => return Verification { ok: false, first_mismatch: Some(0) },
    };
    let m = lin.degree;
    let mut power = NCPolynomial::one();
    for k in 0..=order {
        let expected = if k % m == 0 {
            if k > 0 {
                power = power.mul(p);
            }
            power.clone()
        } else {
            NCPolynomial::zero()
        };
        let coeff = psi.coeff(k);
        let mut got = NCPolynomial::zero();
        for i in 0..lin.dim {
            for j in 0..lin.dim {
                let c = &lin.u[i] * &lin.v[j];
                if !c.is_zero() {
                    got = got.add(&coeff.get(i, j).scale(&c));
                }
            }
        }
        if got != expected {
            return Verification { ok: false, first_mismatch: Some(k) };
        }
    }
    Verification { ok: true, first_mismatch: None }
}

#[derive(Serialize, Deserialize)]
struct LinearizationJson {
    degree: usize,
    a: Vec<Vec<Vec<GQ>>>,
    b: Vec<Vec<Vec<GQ>>>,
    u: Vec<GQ>,
    v: Vec<GQ>,
}

/// Nested `[row][column]` arrays of coefficient lists in `z`.
fn to_nested(coeffs: &[ScalarMatrix], dim: usize) -> Vec<Vec<Vec<GQ>>> {
    (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| {
                    let mut list: Vec<GQ> = coeffs.iter().map(|m| m.get(i, j).clone()).collect();
                    while list.len() > 1 && list.last().is_some_and(GQ::is_zero) {
                        list.pop();
                    }
                    list
                })
                .collect()
        })
        .collect()
}

fn from_nested(nested: &[Vec<Vec<GQ>>], dim: usize) -> Result<Vec<ScalarMatrix>> {
    if nested.len() != dim || nested.iter().any(|r| r.len() != dim) {
        return Err(Error::domain("matrix shape does not match the vector length"));
    }
    let powers = nested.iter().flatten().map(Vec::len).max().unwrap_or(1).max(1);
    Ok((0..powers)
        .map(|k| ScalarMatrix::from_fn(dim, |i, j| nested[i][j].get(k).cloned().unwrap_or_else(GQ::zero)))
        .collect())
}

impl Serialize for Linearization {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LinearizationJson {
            degree: self.degree,
            a: to_nested(&self.a, self.dim),
            b: to_nested(&self.b, self.dim),
            u: self.u.clone(),
            v: self.v.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Linearization {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = LinearizationJson::deserialize(d)?;
        let dim = raw.u.len();
        let a = from_nested(&raw.a, dim).map_err(serde::de::Error::custom)?;
        let b = from_nested(&raw.b, dim).map_err(serde::de::Error::custom)?;
        Linearization::new(a, b, raw.u, raw.v, raw.degree).map_err(serde::de::Error::custom)
    }
}
