//! The free conditional expectation `E^ψ_X` and the right quasi-conditional
//! expectation `rE^φ_X` onto `ℂ⟨X⟩`, on words and on matrix resolvents.

use std::collections::HashMap;

use serde::Serialize;

use crate::cumulants::State;
use crate::engine::{apply_entrywise, resolvent_series, solve_fixed_point, MatrixSeries, PolyMatrixSeries};
use crate::error::{Error, Result};
use crate::matrix::ScalarMatrix;
use crate::ncpoly::{letter_matrix, lift_matrix, Letter, NCPolynomial, PolyMatrix, Word};
use crate::oracle::TwoStateSpec;
use crate::ring::Ring;
use crate::series::TruncSeries;

/// Longest word accepted by the word-wise operations.
pub const MAX_WORD_LEN: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    FullFormula,
    Recursive,
    Resolvent,
}

/// A polynomial in X together with the method that produced it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CondExpResult {
    #[serde(serialize_with = "serialize_poly")]
    pub value: NCPolynomial,
    pub provenance: Provenance,
}

fn serialize_poly<S: serde::Serializer>(p: &NCPolynomial, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(p)
}

fn guard(spec: &TwoStateSpec, w: &Word) -> Result<()> {
    if w.len() > MAX_WORD_LEN {
        return Err(Error::limit(format!("word length {} exceeds the limit {MAX_WORD_LEN}", w.len())));
    }
    if w.len() > spec.order() {
        return Err(Error::limit(format!("word length {} exceeds the spec order {}", w.len(), spec.order())));
    }
    Ok(())
}

/// Splits `W = X₀ Y₁ X₁ ⋯ Yₙ Xₙ` into its X-parts (length n+1, outer ones
/// possibly empty) and Y-parts (length n).
fn alternating_parts(w: &Word) -> (Vec<Word>, Vec<Word>) {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut pos = 0;
    let blocks = w.block_factorize();
    let mut iter = blocks.iter().peekable();
    if matches!(iter.peek(), Some((Letter::Y, _)) | None) {
        xs.push(Word::empty());
    }
    for &(l, k) in iter {
        let part = w.slice(pos, pos + k);
        pos += k;
        match l {
            Letter::X => xs.push(part),
            Letter::Y => ys.push(part),
        }
    }
    if xs.len() == ys.len() {
        xs.push(Word::empty());
    }
    (xs, ys)
}

/// `E^ψ_X[W]` by the explicit sum over chains `0 = i₀ < i₁ < ⋯ < i_{p+1} = n`.
pub fn efree_full(spec: &TwoStateSpec, w: &Word) -> Result<NCPolynomial> {
    guard(spec, w)?;
    let (xs, ys) = alternating_parts(w);
    let n = ys.len();
    if n == 0 {
        return Ok(NCPolynomial::word(w.clone()));
    }
    let mut total = NCPolynomial::zero();
    for mask in 0u32..(1 << (n - 1)) {
        let mut cuts = vec![0];
        cuts.extend((1..n).filter(|i| mask & (1 << (i - 1)) != 0));
        cuts.push(n);
        let mut coeff = crate::scalar::GQ::one();
        for pair in cuts.windows(2) {
            let (lo, hi) = (pair[0], pair[1]);
            let mut args = Vec::with_capacity(2 * (hi - lo) - 1);
            for t in lo..hi {
                args.push(ys[t].clone());
                if t + 1 < hi {
                    args.push(xs[t + 1].clone());
                }
            }
            coeff = coeff * spec.boolean_of_words(State::Psi, &args)?;
            if coeff.is_zero() {
                break;
            }
        }
        if coeff.is_zero() {
            continue;
        }
        let mut word = xs[0].clone();
        for &i in &cuts[1..cuts.len() - 1] {
            word = word.concat(&xs[i]);
        }
        word = word.concat(&xs[n]);
        total = total.add(&NCPolynomial::term(coeff, word));
    }
    Ok(total)
}

/// Memoized word-wise conditional expectations over one spec.
pub struct CondExp<'a> {
    spec: &'a TwoStateSpec,
    efree: HashMap<Word, NCPolynomial>,
    rqce: HashMap<Word, NCPolynomial>,
}

impl<'a> CondExp<'a> {
    pub fn new(spec: &'a TwoStateSpec) -> Self {
        CondExp { spec, efree: HashMap::new(), rqce: HashMap::new() }
    }

    pub fn spec(&self) -> &TwoStateSpec {
        self.spec
    }

    /// `E^ψ_X[W]` by the deconcatenation recursion: for `W` starting with Y,
    /// `E[W] = β^{b,ψ}_Y(W) + (β^{b,ψ}_Y ⊗ E)[rδ_X W]`; for `W = XW'`,
    /// `E[W] = X E[W']`.
    pub fn efree_rec(&mut self, w: &Word) -> Result<NCPolynomial> {
        guard(self.spec, w)?;
        self.efree_inner(w)
    }

    fn efree_inner(&mut self, w: &Word) -> Result<NCPolynomial> {
        if w.is_empty() {
            return Ok(NCPolynomial::one());
        }
        if let Some(v) = self.efree.get(w) {
            return Ok(v.clone());
        }
        let letters = w.letters();
        let v = match letters[0] {
            Letter::X => NCPolynomial::x().mul(&self.efree_inner(&w.slice(1, w.len()))?),
            Letter::Y => {
                let mut acc = NCPolynomial::constant(self.spec.partial_block_boolean(State::Psi, Letter::Y, w)?);
                for q in 1..w.len() {
                    if letters[q] != Letter::X {
                        continue;
                    }
                    let b = self.spec.partial_block_boolean(State::Psi, Letter::Y, &w.slice(0, q))?;
                    if b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&self.efree_inner(&w.slice(q, w.len()))?.scale(&b));
                }
                acc
            }
        };
        self.efree.insert(w.clone(), v.clone());
        Ok(v)
    }

    /// `rE^φ_X[W]` defined by the recursion: identity on ℂ⟨X⟩, `φ` on ℂ⟨Y⟩,
    /// `β^{b,φ}_Y(W) + (β^{b,φ}_Y ⊗ rE)[rδ_X W]` for Y-initial words and
    /// `E^ψ[W] + (β^{b,φ}_X ⊗ (rE − E^ψ))[rδ_Y W]` for X-initial words.
    pub fn rqce(&mut self, w: &Word) -> Result<NCPolynomial> {
        guard(self.spec, w)?;
        self.rqce_inner(w)
    }

    fn rqce_inner(&mut self, w: &Word) -> Result<NCPolynomial> {
        if w.is_empty() || w.is_pure(Letter::X) {
            return Ok(NCPolynomial::word(w.clone()));
        }
        if let Some(v) = self.rqce.get(w) {
            return Ok(v.clone());
        }
        let letters = w.letters();
        let v = if w.is_pure(Letter::Y) {
            NCPolynomial::constant(self.spec.phi_moment(w)?)
        } else if letters[0] == Letter::Y {
            let mut acc = NCPolynomial::constant(self.spec.partial_block_boolean(State::Phi, Letter::Y, w)?);
            for q in 1..w.len() {
                if letters[q] != Letter::X {
                    continue;
                }
                let b = self.spec.partial_block_boolean(State::Phi, Letter::Y, &w.slice(0, q))?;
                if b.is_zero() {
                    continue;
                }
                acc = acc.add(&self.rqce_inner(&w.slice(q, w.len()))?.scale(&b));
            }
            acc
        } else {
            let mut acc = self.efree_inner(w)?;
            for q in 1..w.len() {
                if letters[q] != Letter::Y {
                    continue;
                }
                let b = self.spec.partial_block_boolean(State::Phi, Letter::X, &w.slice(0, q))?;
                if b.is_zero() {
                    continue;
                }
                let tail = w.slice(q, w.len());
                let diff = self.rqce_inner(&tail)?.sub(&self.efree_inner(&tail)?);
                acc = acc.add(&diff.scale(&b));
            }
            acc
        };
        self.rqce.insert(w.clone(), v.clone());
        Ok(v)
    }

    /// The single general recursion with `β̊ = β − ε` and the left
    /// annihilation operator; it must agree with [`CondExp::rqce`].
    pub fn rqce_general(&mut self, w: &Word) -> Result<NCPolynomial> {
        guard(self.spec, w)?;
        if w.is_empty() {
            return Ok(NCPolynomial::one());
        }
        let spec = self.spec;
        let letters = w.letters();
        let reduced = |l: Letter, prefix: &Word| -> Result<crate::scalar::GQ> {
            if prefix.is_empty() {
                Ok(crate::scalar::GQ::zero())
            } else {
                spec.partial_block_boolean(State::Phi, l, prefix)
            }
        };
        let mut acc = NCPolynomial::constant(spec.partial_block_boolean(State::Phi, Letter::Y, w)?);
        for q in 0..w.len() {
            let prefix = w.slice(0, q);
            let tail = w.slice(q, w.len());
            match letters[q] {
                Letter::X => {
                    let b = reduced(Letter::Y, &prefix)?;
                    if !b.is_zero() {
                        acc = acc.add(&self.rqce_inner(&tail)?.scale(&b));
                    }
                }
                Letter::Y => {
                    let b = reduced(Letter::X, &prefix)?;
                    if !b.is_zero() {
                        let diff = self.rqce_inner(&tail)?.sub(&self.efree_inner(&tail)?);
                        acc = acc.add(&diff.scale(&b));
                    }
                }
            }
        }
        if letters[0] == Letter::X {
            acc = acc.add(&NCPolynomial::x().mul(&self.efree_inner(&w.slice(1, w.len()))?));
        }
        Ok(acc)
    }

    /// Linear extension of `E^ψ_X` to polynomials.
    pub fn efree_poly(&mut self, p: &NCPolynomial) -> Result<NCPolynomial> {
        let mut acc = NCPolynomial::zero();
        for (w, c) in p.terms() {
            acc = acc.add(&self.efree_rec(w)?.scale(c));
        }
        Ok(acc)
    }

    /// Linear extension of `rE^φ_X` to polynomials.
    pub fn rqce_poly(&mut self, p: &NCPolynomial) -> Result<NCPolynomial> {
        let mut acc = NCPolynomial::zero();
        for (w, c) in p.terms() {
            acc = acc.add(&self.rqce(w)?.scale(c));
        }
        Ok(acc)
    }

    pub fn efree_result(&mut self, w: &Word) -> Result<CondExpResult> {
        Ok(CondExpResult { value: self.efree_rec(w)?, provenance: Provenance::Recursive })
    }

    pub fn rqce_result(&mut self, w: &Word) -> Result<CondExpResult> {
        Ok(CondExpResult { value: self.rqce(w)?, provenance: Provenance::Recursive })
    }
}

/// `φ(E^ψ_X[W])` for an X-initial word, by
/// `β^{b,φ}(W) + (β^{b,φ} ⊗ φ∘E^ψ_X)[rδ_Y W]`.
pub fn phi_of_efree_rec(spec: &TwoStateSpec, w: &Word) -> Result<crate::scalar::GQ> {
    if w.first() != Some(Letter::X) {
        return Err(Error::domain("the recursion applies to words starting with X"));
    }
    let mut ce = CondExp::new(spec);
    let mut acc = spec.block_boolean(State::Phi, w)?;
    for (q, &l) in w.letters().iter().enumerate() {
        if l != Letter::Y {
            continue;
        }
        let b = spec.block_boolean(State::Phi, &w.slice(0, q))?;
        if b.is_zero() {
            continue;
        }
        let tail = ce.efree_rec(&w.slice(q, w.len()))?;
        acc = acc + b * spec.eval(State::Phi, &tail)?;
    }
    Ok(acc)
}

fn lift(series: &MatrixSeries) -> PolyMatrixSeries {
    series.map(lift_matrix)
}

fn with_letter(series: &MatrixSeries, l: Letter) -> PolyMatrixSeries {
    series.map(|m| letter_matrix(m, l))
}

fn identity_poly(n: usize, order: usize) -> PolyMatrixSeries {
    TruncSeries::one(&PolyMatrix::identity_like(n, &NCPolynomial::zero()), order)
}

/// `z · s`, keeping the order.
fn times_z<T: Ring>(s: &TruncSeries<T>, order: usize) -> TruncSeries<T> {
    s.shift_up().truncate(order)
}

/// The three closed forms of `E^ψ_X[Ψ]` for `Ψ = (I − z(AX + BY))⁻¹`.
#[derive(Clone, Debug, PartialEq)]
pub struct EfreeResolvent {
    /// `(I − z β^{b,ψ}_Y(Ψ) A X)⁻¹ β^{b,ψ}_Y(Ψ)`
    pub left: PolyMatrixSeries,
    /// `β^{b,ψ}_Y(Ψ) (I − z A X β^{b,ψ}_Y(Ψ))⁻¹`
    pub right: PolyMatrixSeries,
    /// `(I − zAX − zB F_Y)⁻¹`
    pub subordinated: PolyMatrixSeries,
}

impl EfreeResolvent {
    pub fn agree(&self) -> bool {
        self.left == self.right && self.right == self.subordinated
    }
}

/// `β^{b,ψ}_Y` applied entrywise to the resolvent coefficients.
pub fn block_boolean_y_of_resolvent(
    spec: &TwoStateSpec,
    state: State,
    a: &MatrixSeries,
    b: &MatrixSeries,
    order: usize,
) -> Result<MatrixSeries> {
    let psi = resolvent_series(a, b, order)?;
    apply_entrywise(&psi, |p| spec.partial_block_boolean_poly(state, Letter::Y, p))
}

pub fn efree_resolvent(
    spec: &TwoStateSpec,
    a: &MatrixSeries,
    b: &MatrixSeries,
    order: usize,
) -> Result<EfreeResolvent> {
    let n = a.coeff(0).dim();
    let a = MatrixSeries::from_coeffs(a.coeffs().to_vec(), order, a.coeff(0));
    let b = MatrixSeries::from_coeffs(b.coeffs().to_vec(), order, b.coeff(0));
    let h = lift(&block_boolean_y_of_resolvent(spec, State::Psi, &a, &b, order)?);
    let ax = with_letter(&a, Letter::X);
    let id = identity_poly(n, order);
    let left = id.sub(&times_z(&h.mul(&ax), order)).inverse()?.mul(&h);
    let right = h.mul(&id.sub(&times_z(&ax.mul(&h), order)).inverse()?);
    let engine = solve_fixed_point(spec, &a, &b, order)?;
    let bf = lift(&times_z(&b.mul(&engine.f_y), order));
    let subordinated = id.sub(&times_z(&ax, order)).sub(&bf).inverse()?;
    Ok(EfreeResolvent { left, right, subordinated })
}

/// `(I − zAF^φ_X − zBF^φ_Y)⁻¹ (I − zAF^φ_X − zBF_Y) (I − zAX − zBF_Y)⁻¹`.
pub fn rqce_resolvent(
    spec: &TwoStateSpec,
    a: &MatrixSeries,
    b: &MatrixSeries,
    order: usize,
) -> Result<PolyMatrixSeries> {
    let n = a.coeff(0).dim();
    let engine = solve_fixed_point(spec, a, b, order)?;
    let (a, b) = (&engine.a, &engine.b);
    let z = |l: &MatrixSeries, r: &MatrixSeries| times_z(&l.mul(r), order);
    let id = MatrixSeries::one(&ScalarMatrix::identity(n), order);
    let mphi = id.sub(&z(a, &engine.f_x_phi)).sub(&z(b, &engine.f_y_phi)).inverse()?;
    let middle = id.sub(&z(a, &engine.f_x_phi)).sub(&z(b, &engine.f_y));
    let ax = with_letter(a, Letter::X);
    let e = identity_poly(n, order).sub(&times_z(&ax, order)).sub(&lift(&z(b, &engine.f_y))).inverse()?;
    Ok(lift(&mphi.mul(&middle)).mul(&e))
}

/// `φ(E^ψ_X[Ψ]) = (I − zAF^φ_X − zBF_Y)⁻¹`.
pub fn phi_of_efree_resolvent(
    spec: &TwoStateSpec,
    a: &MatrixSeries,
    b: &MatrixSeries,
    order: usize,
) -> Result<MatrixSeries> {
    let n = a.coeff(0).dim();
    let engine = solve_fixed_point(spec, a, b, order)?;
    let id = MatrixSeries::one(&ScalarMatrix::identity(n), order);
    id.sub(&times_z(&engine.a.mul(&engine.f_x_phi), order)).sub(&times_z(&engine.b.mul(&engine.f_y), order)).inverse()
}

/// `M^φ φ(E^ψ_X[Ψ])⁻¹ E^ψ_X[Ψ]`, another expression for `rE^φ_X[Ψ]`.
pub fn rqce_resolvent_via_mgf(
    spec: &TwoStateSpec,
    a: &MatrixSeries,
    b: &MatrixSeries,
    order: usize,
) -> Result<PolyMatrixSeries> {
    let engine = solve_fixed_point(spec, a, b, order)?;
    let phi_e = phi_of_efree_resolvent(spec, a, b, order)?;
    let prefactor = engine.mgf(State::Phi).mul(&phi_e.inverse()?);
    Ok(lift(&prefactor).mul(&efree_resolvent(spec, a, b, order)?.subordinated))
}

/// Applies a word-wise map entrywise to the resolvent coefficients.
pub fn wordwise_on_resolvent(
    a: &MatrixSeries,
    b: &MatrixSeries,
    order: usize,
    mut f: impl FnMut(&NCPolynomial) -> Result<NCPolynomial>,
) -> Result<PolyMatrixSeries> {
    let psi = resolvent_series(a, b, order)?;
    psi.try_map(|m| m.try_map(&mut f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::constant_series;
    use crate::oracle::{Atom, Distribution};
    use crate::scalar::GQ;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn semicircle_bernoulli(order: usize) -> TwoStateSpec {
        TwoStateSpec::from_moments(
            Distribution::standard_semicircle().moments(order).unwrap(),
            None,
            Distribution::bernoulli().moments(order).unwrap(),
            None,
        )
        .unwrap()
    }

    /// Y with ψ = Bernoulli on {0, 2} and φ = δ₁ moments shifted; X semicircle
    /// with φ weighted by X².
    fn skewed(order: usize) -> TwoStateSpec {
        let x = Distribution::standard_semicircle().moments(order + 2).unwrap();
        let y_psi = Distribution::Atoms {
            atoms: vec![
                Atom { value: GQ::zero(), weight: GQ::frac(1, 2) },
                Atom { value: GQ::from_int(2), weight: GQ::frac(1, 2) },
            ],
        }
        .moments(order)
        .unwrap();
        let y_phi = Distribution::point_mass(GQ::frac(3, 2)).moments(order).unwrap();
        TwoStateSpec::from_moments(x[..order].to_vec(), Some(x[2..].to_vec()), y_psi, Some(y_phi)).unwrap()
    }

    #[test]
    fn alternating_parts_layout() {
        let (xs, ys) = alternating_parts(&w("YXXY"));
        assert_eq!(xs, vec![Word::empty(), w("XX"), Word::empty()]);
        assert_eq!(ys, vec![w("Y"), w("Y")]);
        let (xs, ys) = alternating_parts(&w("XYX"));
        assert_eq!(xs, vec![w("X"), w("X")]);
        assert_eq!(ys, vec![w("Y")]);
    }

    #[test]
    fn full_formula_examples() {
        let s = semicircle_bernoulli(8);
        assert_eq!(efree_full(&s, &w("XXX")).unwrap(), NCPolynomial::word(w("XXX")));
        assert_eq!(efree_full(&s, &w("YY")).unwrap(), NCPolynomial::one());
        assert_eq!(efree_full(&s, &w("XYX")).unwrap(), NCPolynomial::zero());
    }

    #[test]
    fn recursion_matches_full_formula() {
        let s = skewed(8);
        let mut ce = CondExp::new(&s);
        for word in ["YXY", "XYYXY", "YXYXXY", "XXYXYX", "Y", ""] {
            assert_eq!(ce.efree_rec(&w(word)).unwrap(), efree_full(&s, &w(word)).unwrap(), "{word}");
        }
    }

    #[test]
    fn rqce_left_modularity_failure() {
        let s = skewed(6);
        let mut ce = CondExp::new(&s);
        let mx = &s.marginal(Letter::X);
        let (phi_x, phi_y, psi_y) =
            (mx.phi[0].clone(), s.marginal(Letter::Y).phi[0].clone(), s.marginal(Letter::Y).psi[0].clone());
        let expected = NCPolynomial::x().scale(&psi_y).add(&NCPolynomial::constant(&phi_x * &(&phi_y - &psi_y)));
        assert_eq!(ce.rqce(&w("XY")).unwrap(), expected);
        assert_ne!(ce.rqce(&w("XY")).unwrap(), NCPolynomial::x().mul(&ce.rqce(&w("Y")).unwrap()));
        assert_eq!(ce.rqce(&w("Y")).unwrap(), NCPolynomial::constant(phi_y));
    }

    #[test]
    fn rqce_invariance_and_right_modularity() {
        let s = skewed(8);
        let mut ce = CondExp::new(&s);
        for word in ["XY", "YXY", "XYXY", "YYXYX", "XXYYXY"] {
            let r = ce.rqce(&w(word)).unwrap();
            assert_eq!(s.eval(State::Phi, &r).unwrap(), s.phi_moment(&w(word)).unwrap(), "{word}");
            let extended = ce.rqce(&w(word).concat(&w("XX"))).unwrap();
            assert_eq!(extended, r.mul(&NCPolynomial::word(w("XX"))), "{word}");
            assert_eq!(ce.rqce_general(&w(word)).unwrap(), r, "{word}");
        }
    }

    #[test]
    fn phi_of_conditional_expectation() {
        let s = skewed(8);
        let mut ce = CondExp::new(&s);
        for word in ["XY", "XYXY", "XXYYX", "XYYXYX"] {
            let direct = s.eval(State::Phi, &ce.efree_rec(&w(word)).unwrap()).unwrap();
            assert_eq!(phi_of_efree_rec(&s, &w(word)).unwrap(), direct, "{word}");
        }
    }

    #[test]
    fn resolvent_forms() {
        let s = skewed(5);
        let a = constant_series(&ScalarMatrix::from_strings(&[vec!["1", "2"], vec!["0", "-1"]]).unwrap(), 5);
        let b = constant_series(&ScalarMatrix::from_strings(&[vec!["0", "1"], vec!["1", "1/2"]]).unwrap(), 5);
        let forms = efree_resolvent(&s, &a, &b, 5).unwrap();
        assert!(forms.agree());
        let mut ce = CondExp::new(&s);
        let wordwise = wordwise_on_resolvent(&a, &b, 5, |p| ce.efree_poly(p)).unwrap();
        assert_eq!(wordwise, forms.subordinated);
        let r = rqce_resolvent(&s, &a, &b, 5).unwrap();
        let wordwise = wordwise_on_resolvent(&a, &b, 5, |p| ce.rqce_poly(p)).unwrap();
        assert_eq!(wordwise, r);
        assert_eq!(rqce_resolvent_via_mgf(&s, &a, &b, 5).unwrap(), r);
    }

    #[test]
    fn long_words_are_limited() {
        let s = semicircle_bernoulli(12);
        assert!(matches!(efree_full(&s, &Word::power(Letter::Y, 11)), Err(Error::Limit(_))));
    }
}
