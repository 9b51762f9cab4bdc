//! Matrix-valued subordination equations for `AX + BY` with c-free X, Y.
//!
//! For the resolvent `Ψ = (I − z(AX + BY))⁻¹` the engine solves
//!
//! ```text
//! H_X = (I − zA F_X)⁻¹      F_X = η̃^ψ_X(z H_Y A)      F^φ_X = η̃^φ_X(z H_Y A)
//! H_Y = (I − zB F_Y)⁻¹      F_Y = η̃^ψ_Y(z H_X B)      F^φ_Y = η̃^φ_Y(z H_X B)
//! ```
//!
//! and returns `M^φ = (I − zA F^φ_X − zB F^φ_Y)⁻¹`. `A` and `B` may depend on `z`.
//! The `H` series are kept at the target order `N` and the `F` series at
//! `N − 1`, which is all the moment generating function needs.

use crate::cumulants::{MomentSeq, State};
use crate::error::{Error, Result};
use crate::linearize::linearize;
use crate::matrix::ScalarMatrix;
use crate::ncpoly::{letter_matrix, Letter, NCPolynomial, PolyMatrix};
use crate::oracle::TwoStateSpec;
use crate::ring::Ring;
use crate::scalar::GQ;
use crate::series::{ScalarSeries, TruncSeries};

pub type MatrixSeries = TruncSeries<ScalarMatrix>;
pub type PolyMatrixSeries = TruncSeries<PolyMatrix>;

/// A constant matrix as a series of the given order.
pub fn constant_series(m: &ScalarMatrix, order: usize) -> MatrixSeries {
    MatrixSeries::constant(m.clone(), order)
}

/// `Ψ = Σ zⁿ (A(z)X + B(z)Y)ⁿ` with polynomial-matrix coefficients.
pub fn resolvent_series(a: &MatrixSeries, b: &MatrixSeries, order: usize) -> Result<PolyMatrixSeries> {
    let n = a.coeff(0).dim();
    if b.coeff(0).dim() != n {
        return Err(Error::domain("coefficient matrices A and B have different dimensions"));
    }
    if a.order() + 1 < order || b.order() + 1 < order {
        return Err(Error::domain("coefficient series are shorter than the requested order"));
    }
    // L_j is the coefficient of z^j in z(A(z)X + B(z)Y)
    let l: Vec<PolyMatrix> = (0..=order)
        .map(|j| {
            if j == 0 {
                PolyMatrix::diagonal(n, &NCPolynomial::zero())
            } else {
                letter_matrix(a.coeff(j - 1), Letter::X).add(&letter_matrix(b.coeff(j - 1), Letter::Y))
            }
        })
        .collect();
    let mut psi: Vec<PolyMatrix> = vec![PolyMatrix::identity_like(n, &NCPolynomial::zero())];
    for k in 1..=order {
        let mut acc = PolyMatrix::diagonal(n, &NCPolynomial::zero());
        for j in 1..=k {
            if l[j].is_zero() {
                continue;
            }
            acc = acc.add(&l[j].mul(&psi[k - j]));
        }
        psi.push(acc);
    }
    Ok(TruncSeries::new(psi))
}

/// The solved subordination system.
#[derive(Clone, Debug, PartialEq)]
pub struct EngineState {
    pub order: usize,
    pub a: MatrixSeries,
    pub b: MatrixSeries,
    pub h_x: MatrixSeries,
    pub h_y: MatrixSeries,
    pub f_x: MatrixSeries,
    pub f_y: MatrixSeries,
    pub f_x_phi: MatrixSeries,
    pub f_y_phi: MatrixSeries,
    /// Number of sweeps until a sweep changed nothing.
    pub sweeps: usize,
}

struct Transforms {
    x_psi: ScalarSeries,
    y_psi: ScalarSeries,
    x_phi: ScalarSeries,
    y_phi: ScalarSeries,
}

impl Transforms {
    /// η̃ series truncated to order `n − 1`.
    fn new(spec: &TwoStateSpec, n: usize) -> Self {
        let t = |l: Letter, s: State| spec.marginal(l).eta_shifted(s).truncate(n - 1);
        Transforms {
            x_psi: t(Letter::X, State::Psi),
            y_psi: t(Letter::Y, State::Psi),
            x_phi: t(Letter::X, State::Phi),
            y_phi: t(Letter::Y, State::Phi),
        }
    }
}

/// `z · left · right`, of order `left.order() + 1` clipped to `order`.
fn z_times(left: &MatrixSeries, right: &MatrixSeries, order: usize) -> MatrixSeries {
    left.mul(right).shift_up().truncate(order)
}

fn resolvent_of(c: &MatrixSeries, f: &MatrixSeries, order: usize) -> Result<MatrixSeries> {
    let id = MatrixSeries::one(c.coeff(0), order);
    id.sub(&z_times(c, f, order)).inverse()
}

fn subordinate(eta_shifted: &ScalarSeries, h: &MatrixSeries, c: &MatrixSeries, order: usize) -> Result<MatrixSeries> {
    // z H C has zero constant term; the result carries the order of η̃
    eta_shifted.compose(&z_times(h, c, order)).map(|s| s.truncate(order - 1))
}

impl EngineState {
    fn sweep(&self, t: &Transforms) -> Result<(MatrixSeries, MatrixSeries, MatrixSeries, MatrixSeries)> {
        let n = self.order;
        let h_x = resolvent_of(&self.a, &self.f_x, n)?;
        let h_y = resolvent_of(&self.b, &self.f_y, n)?;
        let f_x = subordinate(&t.x_psi, &self.h_y, &self.a, n)?;
        let f_y = subordinate(&t.y_psi, &self.h_x, &self.b, n)?;
        Ok((h_x, h_y, f_x, f_y))
    }

    /// `(I − zA F^s_X − zB F^s_Y)⁻¹`.
    pub fn mgf(&self, state: State) -> MatrixSeries {
        let n = self.order;
        let id = MatrixSeries::one(self.a.coeff(0), n);
        id.sub(&self.eta(state)).inverse().expect("identity constant term")
    }

    /// `η_{AX+BY} = zA F_X + zB F_Y` in the given state.
    pub fn eta(&self, state: State) -> MatrixSeries {
        let (fx, fy) = match state {
            State::Psi => (&self.f_x, &self.f_y),
            State::Phi => (&self.f_x_phi, &self.f_y_phi),
        };
        z_times(&self.a, fx, self.order).add(&z_times(&self.b, fy, self.order))
    }

    /// `H^φ_X = (I − zA F^φ_X)⁻¹`, kept only for consistency checks.
    pub fn h_x_phi(&self) -> MatrixSeries {
        resolvent_of(&self.a, &self.f_x_phi, self.order).expect("identity constant term")
    }

    pub fn h_y_phi(&self) -> MatrixSeries {
        resolvent_of(&self.b, &self.f_y_phi, self.order).expect("identity constant term")
    }

    /// True when one more sweep reproduces the state exactly.
    pub fn is_fixed_point(&self, spec: &TwoStateSpec) -> Result<bool> {
        let t = Transforms::new(spec, self.order);
        let (h_x, h_y, f_x, f_y) = self.sweep(&t)?;
        let f_x_phi = subordinate(&t.x_phi, &self.h_y, &self.a, self.order)?;
        let f_y_phi = subordinate(&t.y_phi, &self.h_x, &self.b, self.order)?;
        Ok(h_x == self.h_x
            && h_y == self.h_y
            && f_x == self.f_x
            && f_y == self.f_y
            && f_x_phi == self.f_x_phi
            && f_y_phi == self.f_y_phi)
    }
}

/// Solves the subordination system to z-order `order` (at least 1).
pub fn solve_fixed_point(spec: &TwoStateSpec, a: &MatrixSeries, b: &MatrixSeries, order: usize) -> Result<EngineState> {
    if order == 0 {
        return Err(Error::domain("engine order must be at least 1"));
    }
    if order > spec.order() {
        return Err(Error::limit(format!("engine order {order} exceeds the spec order {}", spec.order())));
    }
    let n = a.coeff(0).dim();
    if b.coeff(0).dim() != n {
        return Err(Error::domain("coefficient matrices A and B have different dimensions"));
    }
    if a.order() + 1 < order || b.order() + 1 < order {
        return Err(Error::domain("coefficient series are shorter than the requested order"));
    }
    let pad = |s: &MatrixSeries| MatrixSeries::from_coeffs(s.coeffs().to_vec(), order, s.coeff(0));
    let t = Transforms::new(spec, order);
    let beta1 = |l: Letter| {
        let id = ScalarMatrix::identity(n);
        MatrixSeries::constant(id.scale(&spec.marginal(l).boolean_psi[0]), order - 1)
    };
    let mut state = EngineState {
        order,
        a: pad(a),
        b: pad(b),
        h_x: MatrixSeries::one(&ScalarMatrix::identity(n), order),
        h_y: MatrixSeries::one(&ScalarMatrix::identity(n), order),
        f_x: beta1(Letter::X),
        f_y: beta1(Letter::Y),
        f_x_phi: MatrixSeries::zero(&ScalarMatrix::identity(n), order - 1),
        f_y_phi: MatrixSeries::zero(&ScalarMatrix::identity(n), order - 1),
        sweeps: 0,
    };
    loop {
        let (h_x, h_y, f_x, f_y) = state.sweep(&t)?;
        state.sweeps += 1;
        let unchanged = h_x == state.h_x && h_y == state.h_y && f_x == state.f_x && f_y == state.f_y;
        state.h_x = h_x;
        state.h_y = h_y;
        state.f_x = f_x;
        state.f_y = f_y;
        if unchanged {
            break;
        }
        if state.sweeps > order + 2 {
            return Err(Error::internal(format!(
                "fixed-point iteration did not stabilize after {} sweeps",
                state.sweeps
            )));
        }
    }
    state.f_x_phi = subordinate(&t.x_phi, &state.h_y, &state.a, order)?;
    state.f_y_phi = subordinate(&t.y_phi, &state.h_x, &state.b, order)?;
    Ok(state)
}

/// Moments `state(Pⁿ)`, `n = 1..=order`, read off `uᵗ M(z) v` at multiples of
/// `deg P`.
pub fn poly_distribution(spec: &TwoStateSpec, p: &NCPolynomial, state: State, order: usize) -> Result<MomentSeq> {
    let lin = linearize(p)?;
    let m = lin.degree();
    let z_order = m * order;
    if z_order == 0 {
        return Ok(MomentSeq::new(state, Vec::new()));
    }
    if z_order > spec.order() {
        return Err(Error::limit(format!(
            "{order} moments of a degree-{m} polynomial need spec order {z_order}, have {}",
            spec.order()
        )));
    }
    let engine = solve_fixed_point(spec, &lin.a_series(z_order), &lin.b_series(z_order), z_order)?;
    let series = engine.mgf(state);
    let mut values = Vec::with_capacity(order);
    for k in 1..=z_order {
        let c = series.coeff(k).bilinear(lin.u(), lin.v());
        if k % m == 0 {
            values.push(c);
        } else if !c.is_zero() {
            return Err(Error::internal(format!("nonzero coefficient at z^{k} which is not a multiple of {m}")));
        }
    }
    Ok(MomentSeq::new(state, values))
}

/// Applies a linear functional entrywise to every coefficient of a
/// polynomial-matrix series.
pub fn apply_entrywise(
    series: &PolyMatrixSeries,
    mut f: impl FnMut(&NCPolynomial) -> Result<GQ>,
) -> Result<MatrixSeries> {
    series.try_map(|m| m.try_map(&mut f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::parse_poly;
    use crate::oracle::Distribution;

    fn semicircle_bernoulli(order: usize) -> TwoStateSpec {
        TwoStateSpec::from_moments(
            Distribution::standard_semicircle().moments(order).unwrap(),
            None,
            Distribution::bernoulli().moments(order).unwrap(),
            None,
        )
        .unwrap()
    }

    #[test]
    fn resolvent_low_orders() {
        let one = constant_series(&ScalarMatrix::identity(1), 3);
        let psi = resolvent_series(&one, &one, 2).unwrap();
        assert_eq!(psi.coeff(0).get(0, 0), &NCPolynomial::one());
        assert_eq!(psi.coeff(1).get(0, 0), &parse_poly("x+y").unwrap());
        assert_eq!(psi.coeff(2).get(0, 0), &parse_poly("(x+y)^2").unwrap());
    }

    #[test]
    fn scalar_free_convolution() {
        let spec = semicircle_bernoulli(8);
        let m = poly_distribution(&spec, &parse_poly("x+y").unwrap(), State::Psi, 8).unwrap();
        let p = parse_poly("x+y").unwrap();
        for n in 1..=8 {
            assert_eq!(m.get(n), spec.eval(State::Psi, &p.pow(n)).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn commutator_moments() {
        let spec = semicircle_bernoulli(12);
        let m = poly_distribution(&spec, &parse_poly("i*(x*y-y*x)").unwrap(), State::Psi, 6).unwrap();
        let expected: Vec<GQ> = [0, 2, 0, 8, 0, 40].into_iter().map(GQ::from_int).collect();
        assert_eq!(m.values, expected);
    }

    #[test]
    fn single_variable_degeneration() {
        let spec = semicircle_bernoulli(6);
        let a = constant_series(&ScalarMatrix::identity(1), 6);
        let b = constant_series(&ScalarMatrix::zeros(1), 6);
        let e = solve_fixed_point(&spec, &a, &b, 6).unwrap();
        assert_eq!(e.h_y, MatrixSeries::one(&ScalarMatrix::identity(1), 6));
        let eta = spec.marginal(Letter::X).eta_shifted(State::Psi).truncate(5);
        assert_eq!(e.f_x, eta.map(|c| ScalarMatrix::identity(1).scale(c)));
        assert!(e.is_fixed_point(&spec).unwrap());
        assert_eq!(e.f_x_phi, e.f_x);
    }

    #[test]
    fn order_beyond_spec_is_limited() {
        let spec = semicircle_bernoulli(4);
        let r = poly_distribution(&spec, &parse_poly("x*y").unwrap(), State::Psi, 3);
        assert!(matches!(r, Err(Error::Limit(_))));
    }
}
