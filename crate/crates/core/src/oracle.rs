//! Joint moments of words in c-free X and Y computed from the marginals by
//! colored noncrossing-partition sums, and the Boolean cumulant functionals
//! built on them.
//!
//! Joint moments use the first-block expansion of the moment–cumulant
//! formulas: mixed free and c-free cumulants vanish, so the block containing
//! the first letter picks positions carrying that same letter; the gaps it
//! encloses are inner regions (ψ) and the remainder after it is evaluated in
//! the same state as the whole word.

use std::collections::HashMap;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::cumulants::{
    boolean_from_moments, cfree_from_two_moments, free_from_moments, semicircle_moments, transform_series, State,
};
use crate::error::{Error, Result};
use crate::ncpoly::{Letter, NCPolynomial, Word};
use crate::partitions::{enumerate_nc, enumerate_nc_colored, is_ll, is_vnrp, Coloring, SetPartition};
use crate::scalar::GQ;
use crate::series::ScalarSeries;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Atom {
    pub value: GQ,
    pub weight: GQ,
}

/// Marginal distribution presets, expanded to exact moments.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Distribution {
    Moments { moments: Vec<GQ> },
    Semicircle { variance: GQ },
    Atoms { atoms: Vec<Atom> },
}

impl Distribution {
    pub fn standard_semicircle() -> Self {
        Distribution::Semicircle { variance: GQ::one() }
    }

    /// Symmetric Bernoulli on ±1.
    pub fn bernoulli() -> Self {
        Distribution::Atoms {
            atoms: vec![
                Atom { value: GQ::from_int(-1), weight: GQ::frac(1, 2) },
                Atom { value: GQ::one(), weight: GQ::frac(1, 2) },
            ],
        }
    }

    pub fn point_mass(t: GQ) -> Self {
        Distribution::Atoms { atoms: vec![Atom { value: t, weight: GQ::one() }] }
    }

    /// Moments `m_1..m_order`.
    pub fn moments(&self, order: usize) -> Result<Vec<GQ>> {
        match self {
            Distribution::Moments { moments } => {
                if moments.len() < order {
                    return Err(Error::domain(format!(
                        "moment list has {} entries but order {order} was requested",
                        moments.len()
                    )));
                }
                Ok(moments[..order].to_vec())
            }
            Distribution::Semicircle { variance } => Ok(semicircle_moments(variance, order)),
            Distribution::Atoms { atoms } => {
                let total: GQ = atoms.iter().map(|a| a.weight.clone()).sum();
                if !total.is_one() {
                    return Err(Error::domain("atom weights must sum to 1"));
                }
                Ok((1..=order).map(|n| atoms.iter().map(|a| &a.weight * &a.value.pow(n as u32)).sum()).collect())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LetterInput {
    pub psi: Distribution,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Distribution>,
}

/// The JSON form of a two-state specification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecInput {
    pub x: LetterInput,
    pub y: LetterInput,
    pub order: usize,
}

/// Marginal data of one letter with all derived cumulant sequences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Marginal {
    pub psi: Vec<GQ>,
    pub phi: Vec<GQ>,
    pub free_psi: Vec<GQ>,
    pub cfree: Vec<GQ>,
    pub boolean_psi: Vec<GQ>,
    pub boolean_phi: Vec<GQ>,
}

impl Marginal {
    pub fn new(psi: Vec<GQ>, phi: Vec<GQ>) -> Result<Self> {
        if psi.len() != phi.len() {
            return Err(Error::domain("ψ- and φ-moment sequences must have the same order"));
        }
        let free_psi = free_from_moments(&psi);
        let cfree = cfree_from_two_moments(&phi, &free_psi);
        let boolean_psi = boolean_from_moments(&psi);
        let boolean_phi = boolean_from_moments(&phi);
        Ok(Marginal { psi, phi, free_psi, cfree, boolean_psi, boolean_phi })
    }

    pub fn order(&self) -> usize {
        self.psi.len()
    }

    pub fn moments(&self, state: State) -> &[GQ] {
        match state {
            State::Psi => &self.psi,
            State::Phi => &self.phi,
        }
    }

    pub fn boolean(&self, state: State) -> &[GQ] {
        match state {
            State::Psi => &self.boolean_psi,
            State::Phi => &self.boolean_phi,
        }
    }

    /// Moment `m_n` with `m_0 = 1`.
    pub fn moment(&self, state: State, n: usize) -> GQ {
        if n == 0 {
            GQ::one()
        } else {
            self.moments(state)[n - 1].clone()
        }
    }

    /// The Boolean transform η(z) = Σ β_n z^n.
    pub fn eta(&self, state: State) -> ScalarSeries {
        transform_series(self.boolean(state))
    }

    /// η̃ = η/z, of order one less.
    pub fn eta_shifted(&self, state: State) -> ScalarSeries {
        self.eta(state).shift_down().expect("η has zero constant term")
    }
}

type Memo<K> = RwLock<HashMap<K, GQ>>;

/// Marginals of X and Y for a pair of states (φ, ψ) under which X and Y are
/// c-free, with thread-safe memo tables for joint quantities.
#[derive(Debug)]
pub struct TwoStateSpec {
    order: usize,
    marginals: [Marginal; 2],
    moments: Memo<(State, Word)>,
    block_boolean: Memo<(State, Word)>,
    letter_boolean: Memo<(State, Word)>,
}

impl Clone for TwoStateSpec {
    fn clone(&self) -> Self {
        Self::from_marginals(self.marginals[0].clone(), self.marginals[1].clone()).expect("valid marginals")
    }
}

impl TwoStateSpec {
    pub fn from_marginals(x: Marginal, y: Marginal) -> Result<Self> {
        if x.order() != y.order() {
            return Err(Error::domain("marginal orders of X and Y differ"));
        }
        Ok(TwoStateSpec {
            order: x.order(),
            marginals: [x, y],
            moments: RwLock::default(),
            block_boolean: RwLock::default(),
            letter_boolean: RwLock::default(),
        })
    }

    /// Builds a spec from ψ- and φ-moment sequences; `None` for φ means φ = ψ.
    pub fn from_moments(
        x_psi: Vec<GQ>,
        x_phi: Option<Vec<GQ>>,
        y_psi: Vec<GQ>,
        y_phi: Option<Vec<GQ>>,
    ) -> Result<Self> {
        let x_phi = x_phi.unwrap_or_else(|| x_psi.clone());
        let y_phi = y_phi.unwrap_or_else(|| y_psi.clone());
        Self::from_marginals(Marginal::new(x_psi, x_phi)?, Marginal::new(y_psi, y_phi)?)
    }

    pub fn from_input(input: &SpecInput) -> Result<Self> {
        let n = input.order;
        let letter = |l: &LetterInput| -> Result<Marginal> {
            let psi = l.psi.moments(n)?;
            let phi = match &l.phi {
                Some(d) => d.moments(n)?,
                None => psi.clone(),
            };
            Marginal::new(psi, phi)
        };
        Self::from_marginals(letter(&input.x)?, letter(&input.y)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let input: SpecInput =
            serde_json::from_str(text).map_err(|e| Error::parse(0, format!("invalid spec JSON: {e}")))?;
        Self::from_input(&input)
    }

    /// The same marginals with φ replaced by ψ.
    pub fn free_part(&self) -> Self {
        let m =
            |k: usize| Marginal::new(self.marginals[k].psi.clone(), self.marginals[k].psi.clone()).expect("same order");
        Self::from_marginals(m(0), m(1)).expect("same order")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn marginal(&self, l: Letter) -> &Marginal {
        &self.marginals[l.index()]
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if n > self.order {
            return Err(Error::limit(format!("word length {n} exceeds the spec order {}", self.order)));
        }
        Ok(())
    }

    pub fn psi_moment(&self, w: &Word) -> Result<GQ> {
        self.moment(State::Psi, w)
    }

    pub fn phi_moment(&self, w: &Word) -> Result<GQ> {
        self.moment(State::Phi, w)
    }

    /// Joint moment of a word in the given state.
    pub fn moment(&self, state: State, w: &Word) -> Result<GQ> {
        if w.is_empty() {
            return Ok(GQ::one());
        }
        self.check_len(w.len())?;
        let key = (state, w.clone());
        if let Some(v) = self.moments.read().expect("memo lock").get(&key) {
            return Ok(v.clone());
        }
        let v = self.compute_moment(state, w)?;
        self.moments.write().expect("memo lock").insert(key, v.clone());
        Ok(v)
    }

    fn compute_moment(&self, state: State, w: &Word) -> Result<GQ> {
        let letters = w.letters();
        let n = letters.len();
        let first = letters[0];
        let m = self.marginal(first);
        if w.is_pure(first) {
            return Ok(m.moment(state, n));
        }
        let cumulants = match state {
            State::Psi => &m.free_psi,
            State::Phi => &m.cfree,
        };
        let positions: Vec<usize> = (0..n).filter(|&p| letters[p] == first).collect();
        // chain[t][k]: sum over choices of k further block elements after
        // positions[t], weighted by the enclosed gaps and the remainder
        let count = positions.len();
        let mut chain = vec![vec![GQ::zero(); count]; count];
        for t in (0..count).rev() {
            let p = positions[t];
            chain[t][0] = self.moment(state, &w.slice(p + 1, n))?;
            for k in 1..count - t {
                let mut acc = GQ::zero();
                for u in t + 1..count {
                    if count - u < k {
                        break;
                    }
                    let tail = &chain[u][k - 1];
                    if tail.is_zero() {
                        continue;
                    }
                    let gap = self.moment(State::Psi, &w.slice(p + 1, positions[u]))?;
                    acc = acc + gap * tail;
                }
                chain[t][k] = acc;
            }
        }
        let mut total = GQ::zero();
        for s in 1..=count {
            total = total + &cumulants[s - 1] * &chain[0][s - 1];
        }
        Ok(total)
    }

    /// Brute-force joint moment: the sum over NC(n) compatible with the
    /// letters, outer blocks weighted by c-free cumulants for φ.
    pub fn moment_by_enumeration(&self, state: State, w: &Word) -> Result<GQ> {
        if w.is_empty() {
            return Ok(GQ::one());
        }
        self.check_len(w.len())?;
        let coloring = Coloring::from_word(w);
        let mut total = GQ::zero();
        for pi in enumerate_nc_colored(&coloring)? {
            let parents = pi.parents();
            let mut term = GQ::one();
            for (b, p) in pi.blocks().iter().zip(&parents) {
                let m = self.marginal(w.letters()[b[0]]);
                let c = match (state, p) {
                    (State::Phi, None) => &m.cfree[b.len() - 1],
                    _ => &m.free_psi[b.len() - 1],
                };
                term = term * c;
            }
            total = total + term;
        }
        Ok(total)
    }

    /// `state(p)` for a polynomial, extended linearly.
    pub fn eval(&self, state: State, p: &NCPolynomial) -> Result<GQ> {
        p.apply_linear(|w| self.moment(state, w))
    }

    /// Multilinear Boolean cumulant `β_n(a_1, …, a_n)` by the deconcatenation recursion.
    pub fn multilinear_boolean(&self, state: State, args: &[NCPolynomial]) -> Result<GQ> {
        let n = args.len();
        if n == 0 {
            return Ok(GQ::one());
        }
        // products[i][j] = a_i ⋯ a_{j-1}, moments of contiguous ranges
        let mut range_moment = vec![vec![GQ::zero(); n + 1]; n + 1];
        for i in 0..n {
            let mut prod = NCPolynomial::one();
            for j in i + 1..=n {
                prod = prod.mul(&args[j - 1]);
                range_moment[i][j] = self.eval(state, &prod)?;
            }
        }
        let mut b = vec![GQ::zero(); n + 1];
        for k in 1..=n {
            let mut v = range_moment[0][k].clone();
            for j in 1..k {
                v = v - &b[j] * &range_moment[j][k];
            }
            b[k] = v;
        }
        Ok(b[n].clone())
    }

    /// Boolean cumulant of word arguments; their product is the concatenation.
    pub fn boolean_of_words(&self, state: State, args: &[Word]) -> Result<GQ> {
        let n = args.len();
        if n == 0 {
            return Ok(GQ::one());
        }
        let mut b = vec![GQ::zero(); n + 1];
        for k in 1..=n {
            let mut tail = Word::empty();
            // moment of args[j..k] accumulated from the right
            let mut range = vec![GQ::zero(); k];
            for j in (0..k).rev() {
                tail = args[j].concat(&tail);
                range[j] = self.moment(state, &tail)?;
            }
            let mut v = range[0].clone();
            for j in 1..k {
                v = v - &b[j] * &range[j];
            }
            b[k] = v;
        }
        Ok(b[n].clone())
    }

    fn memoized(&self, memo: &Memo<(State, Word)>, key: (State, Word), f: impl FnOnce() -> Result<GQ>) -> Result<GQ> {
        if let Some(v) = memo.read().expect("memo lock").get(&key) {
            return Ok(v.clone());
        }
        let v = f()?;
        memo.write().expect("memo lock").insert(key, v.clone());
        Ok(v)
    }

    /// β^{b}(W) = β_k(U_1, …, U_k) over the block factorization; β^{b}(1) = 1.
    pub fn block_boolean(&self, state: State, w: &Word) -> Result<GQ> {
        if w.is_empty() {
            return Ok(GQ::one());
        }
        self.memoized(&self.block_boolean, (state, w.clone()), || self.boolean_of_words(state, &w.blocks()))
    }

    /// β^{b}_ℓ(W): β^{b}(W) when W begins and ends with ℓ, otherwise 0.
    pub fn partial_block_boolean(&self, state: State, l: Letter, w: &Word) -> Result<GQ> {
        if w.is_empty() {
            return Ok(GQ::one());
        }
        if w.first() != Some(l) || w.last() != Some(l) {
            return Ok(GQ::zero());
        }
        self.block_boolean(state, w)
    }

    /// β^{δ}(Z_1⋯Z_k) = β_k(Z_1, …, Z_k); β^{δ}(1) = 1.
    pub fn letterwise_boolean(&self, state: State, w: &Word) -> Result<GQ> {
        if w.is_empty() {
            return Ok(GQ::one());
        }
        self.memoized(&self.letter_boolean, (state, w.clone()), || {
            let args: Vec<Word> = w.letters().iter().map(|&l| Word::letter(l)).collect();
            self.boolean_of_words(state, &args)
        })
    }

    pub fn partial_letterwise_boolean(&self, state: State, l: Letter, w: &Word) -> Result<GQ> {
        if w.is_empty() {
            return Ok(GQ::one());
        }
        if w.first() != Some(l) || w.last() != Some(l) {
            return Ok(GQ::zero());
        }
        self.letterwise_boolean(state, w)
    }

    /// Linear extensions of the functionals above to polynomials.
    pub fn block_boolean_poly(&self, state: State, p: &NCPolynomial) -> Result<GQ> {
        p.apply_linear(|w| self.block_boolean(state, w))
    }

    pub fn partial_block_boolean_poly(&self, state: State, l: Letter, p: &NCPolynomial) -> Result<GQ> {
        p.apply_linear(|w| self.partial_block_boolean(state, l, w))
    }

    pub fn partial_letterwise_boolean_poly(&self, state: State, l: Letter, p: &NCPolynomial) -> Result<GQ> {
        p.apply_linear(|w| self.partial_letterwise_boolean(state, l, w))
    }

    /// Number of memoized joint moments.
    pub fn cache_len(&self) -> usize {
        self.moments.read().expect("memo lock").len()
    }

    /// Drops all memoized values.
    pub fn clear_cache(&self) {
        self.moments.write().expect("memo lock").clear();
        self.block_boolean.write().expect("memo lock").clear();
        self.letter_boolean.write().expect("memo lock").clear();
    }
}

/// Multilinear functionals of a fixed argument tuple, indexed by position
/// subsets, used for partition-level identities.
pub struct ArgFunctionals<'a> {
    spec: &'a TwoStateSpec,
    args: Vec<NCPolynomial>,
    free: HashMap<Vec<usize>, GQ>,
    cfree: HashMap<Vec<usize>, GQ>,
}

impl<'a> ArgFunctionals<'a> {
    pub fn new(spec: &'a TwoStateSpec, args: Vec<NCPolynomial>) -> Self {
        ArgFunctionals { spec, args, free: HashMap::new(), cfree: HashMap::new() }
    }

    pub fn len(&self) -> usize {
        self.args.len()
    }

    pub fn is_empty(&self) -> bool {
        self.args.is_empty()
    }

    fn sub_args(&self, positions: &[usize]) -> Vec<NCPolynomial> {
        positions.iter().map(|&p| self.args[p].clone()).collect()
    }

    pub fn moment(&self, state: State, positions: &[usize]) -> Result<GQ> {
        let prod = positions.iter().fold(NCPolynomial::one(), |acc, &p| acc.mul(&self.args[p]));
        self.spec.eval(state, &prod)
    }

    pub fn boolean(&self, state: State, positions: &[usize]) -> Result<GQ> {
        self.spec.multilinear_boolean(state, &self.sub_args(positions))
    }

    /// Multilinear free cumulant `r^ψ` of the arguments at `positions`.
    pub fn free(&mut self, positions: &[usize]) -> Result<GQ> {
        if let Some(v) = self.free.get(positions) {
            return Ok(v.clone());
        }
        let k = positions.len();
        let mut v = self.moment(State::Psi, positions)?;
        for sigma in enumerate_nc(k)? {
            if sigma.num_blocks() == 1 {
                continue;
            }
            let mut term = GQ::one();
            for b in sigma.blocks() {
                let sub: Vec<usize> = b.iter().map(|&i| positions[i]).collect();
                term = term * self.free(&sub)?;
                if term.is_zero() {
                    break;
                }
            }
            v = v - term;
        }
        self.free.insert(positions.to_vec(), v.clone());
        Ok(v)
    }

    /// Multilinear c-free cumulant `r^{φψ}` of the arguments at `positions`.
    pub fn cfree(&mut self, positions: &[usize]) -> Result<GQ> {
        if let Some(v) = self.cfree.get(positions) {
            return Ok(v.clone());
        }
        let k = positions.len();
        let mut v = self.moment(State::Phi, positions)?;
        for sigma in enumerate_nc(k)? {
            if sigma.num_blocks() == 1 {
                continue;
            }
            let parents = sigma.parents();
            let mut term = GQ::one();
            for (b, p) in sigma.blocks().iter().zip(&parents) {
                let sub: Vec<usize> = b.iter().map(|&i| positions[i]).collect();
                let c = if p.is_none() { self.cfree(&sub)? } else { self.free(&sub)? };
                term = term * c;
                if term.is_zero() {
                    break;
                }
            }
            v = v - term;
        }
        self.cfree.insert(positions.to_vec(), v.clone());
        Ok(v)
    }

    /// β^{φ,ψ}_π: outer blocks by β^φ, inner blocks by β^ψ.
    pub fn nested_two_state_boolean(&self, pi: &SetPartition) -> Result<GQ> {
        let parents = pi.parents();
        let mut acc = GQ::one();
        for (b, p) in pi.blocks().iter().zip(&parents) {
            let state = if p.is_none() { State::Phi } else { State::Psi };
            acc = acc * self.boolean(state, b)?;
            if acc.is_zero() {
                break;
            }
        }
        Ok(acc)
    }

    /// The same quantity as `Σ_{ρ≪π} Π_outer r^{φψ} Π_inner r^ψ`.
    pub fn nested_two_state_boolean_by_ll(&mut self, pi: &SetPartition) -> Result<GQ> {
        let mut total = GQ::zero();
        for rho in enumerate_nc(pi.n())? {
            if !is_ll(&rho, pi) {
                continue;
            }
            let parents = rho.parents();
            let mut term = GQ::one();
            for (b, p) in rho.blocks().iter().zip(&parents) {
                let c = if p.is_none() { self.cfree(b)? } else { self.free(b)? };
                term = term * c;
                if term.is_zero() {
                    break;
                }
            }
            total = total + term;
        }
        Ok(total)
    }
}

/// The colouring of a tuple of single-letter polynomials.
pub fn coloring_of(args: &[NCPolynomial]) -> Result<Coloring> {
    let colors = args
        .iter()
        .map(|a| {
            Letter::ALL
                .into_iter()
                .find(|&l| a.is_supported_on(l))
                .map(Letter::index)
                .ok_or_else(|| Error::domain(format!("argument {a} is not supported on a single letter")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Coloring::new(colors))
}

/// β^φ_n(x_1, …, x_n) as the sum over irreducible colour-compatible
/// partitions with the vertical-no-repeat property of β^{φ,ψ}_π.
pub fn vnrp_boolean_phi(spec: &TwoStateSpec, args: &[NCPolynomial]) -> Result<GQ> {
    let coloring = coloring_of(args)?;
    let f = ArgFunctionals::new(spec, args.to_vec());
    let mut total = GQ::zero();
    for pi in enumerate_nc_colored(&coloring)? {
        if !pi.is_irreducible() || !is_vnrp(&pi, &coloring)? {
            continue;
        }
        total = total + f.nested_two_state_boolean(&pi)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::parse_poly;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn semicircle_bernoulli(order: usize) -> TwoStateSpec {
        let x = Distribution::standard_semicircle().moments(order).unwrap();
        let y = Distribution::bernoulli().moments(order).unwrap();
        TwoStateSpec::from_moments(x, None, y, None).unwrap()
    }

    /// X semicircle with φ weighted by X², Y on atoms {0, 2}.
    fn pyramidal(order: usize) -> TwoStateSpec {
        let x = Distribution::standard_semicircle().moments(order + 2).unwrap();
        let y = Distribution::Atoms {
            atoms: vec![
                Atom { value: GQ::zero(), weight: GQ::frac(1, 2) },
                Atom { value: GQ::from_int(2), weight: GQ::frac(1, 2) },
            ],
        }
        .moments(order)
        .unwrap();
        TwoStateSpec::from_moments(x[..order].to_vec(), Some(x[2..].to_vec()), y, None).unwrap()
    }

    #[test]
    fn free_moments() {
        let s = semicircle_bernoulli(8);
        assert_eq!(s.psi_moment(&w("XYXY")).unwrap(), GQ::zero());
        assert_eq!(s.psi_moment(&w("XXYY")).unwrap(), GQ::one());
        assert_eq!(s.psi_moment(&w("XXXX")).unwrap(), GQ::from_int(2));
        let c = parse_poly("i*(x*y - y*x)").unwrap();
        assert_eq!(s.eval(State::Psi, &c.pow(2)).unwrap(), GQ::from_int(2));
    }

    #[test]
    fn pyramidal_law_value() {
        let s = pyramidal(6);
        assert_eq!(s.phi_moment(&w("XYX")).unwrap(), GQ::from_int(2));
        assert_eq!(s.phi_moment(&w("YYY")).unwrap(), s.psi_moment(&w("YYY")).unwrap());
    }

    #[test]
    fn recursion_matches_enumeration() {
        let s = pyramidal(7);
        for word in ["XYX", "XYXY", "YXXYX", "XYYXYX", "XXYXYYX"] {
            for state in [State::Psi, State::Phi] {
                assert_eq!(
                    s.moment(state, &w(word)).unwrap(),
                    s.moment_by_enumeration(state, &w(word)).unwrap(),
                    "{word} {state:?}"
                );
            }
        }
    }

    #[test]
    fn boolean_functionals() {
        let s = semicircle_bernoulli(8);
        assert_eq!(s.multilinear_boolean(State::Psi, &[NCPolynomial::x(), NCPolynomial::x()]).unwrap(), GQ::one());
        let xyx = [NCPolynomial::x(), NCPolynomial::y(), NCPolynomial::x()];
        assert_eq!(s.multilinear_boolean(State::Psi, &xyx).unwrap(), GQ::zero());
        let blocks = [w("XXX"), w("YY"), w("X")];
        assert_eq!(
            s.block_boolean(State::Psi, &w("XXXYYX")).unwrap(),
            s.boolean_of_words(State::Psi, &blocks).unwrap()
        );
        assert_eq!(s.partial_block_boolean(State::Psi, Letter::X, &w("YX")).unwrap(), GQ::zero());
        assert_eq!(s.block_boolean(State::Psi, &Word::empty()).unwrap(), GQ::one());
        let letters: Vec<Word> = w("XXXYYX").letters().iter().map(|&l| Word::letter(l)).collect();
        assert_eq!(
            s.partial_letterwise_boolean(State::Psi, Letter::X, &w("XXXYYX")).unwrap(),
            s.boolean_of_words(State::Psi, &letters).unwrap()
        );
    }

    #[test]
    fn spec_json_round_trip() {
        let text = r#"{"x":{"psi":{"kind":"semicircle","variance":"1"}},
                       "y":{"psi":{"kind":"atoms","atoms":[{"value":"-1","weight":"1/2"},{"value":"1","weight":"1/2"}]},
                            "phi":{"kind":"moments","moments":["0","1","0","1"]}},
                       "order":4}"#;
        let s = TwoStateSpec::from_json(text).unwrap();
        assert_eq!(s.marginal(Letter::X).phi, s.marginal(Letter::X).psi);
        assert_eq!(s.marginal(Letter::Y).psi, vec![GQ::zero(), GQ::one(), GQ::zero(), GQ::one()]);
        assert!(matches!(TwoStateSpec::from_json(r#"{"x":1}"#), Err(Error::Parse { .. })));
        let short = r#"{"x":{"psi":{"kind":"moments","moments":["0"]}},"y":{"psi":{"kind":"semicircle","variance":"1"}},"order":3}"#;
        assert!(matches!(TwoStateSpec::from_json(short), Err(Error::Domain(_))));
    }

    #[test]
    fn long_words_are_limited() {
        let s = semicircle_bernoulli(4);
        assert!(matches!(s.psi_moment(&w("XYXYX")), Err(Error::Limit(_))));
    }
}
