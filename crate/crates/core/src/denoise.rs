//! Recovering `E[g(X) | P(X, Y)]` from moments.
//!
//! Weighting ψ by a polynomial `f(X)` gives a state `φ(c) = ψ(f(X)c)/ψ(f)`
//! under which X and Y are c-free with the same ψ. Pairings `ψ(g(X)·Pᵏ)` are
//! therefore `ψ(g)·φ_g(Pᵏ)`, which the subordination engine delivers without
//! expanding words.

use serde::Serialize;

use crate::cumulants::{MomentSeq, State};
use crate::engine::poly_distribution;
use crate::error::{Error, Result};
use crate::matrix::ScalarMatrix;
use crate::ncpoly::{Letter, NCPolynomial};
use crate::oracle::{Marginal, TwoStateSpec};
use crate::scalar::GQ;

/// The two-state spec obtained by weighting ψ with `f(X)`.
#[derive(Clone, Debug)]
pub struct WeightedState {
    pub weight: NCPolynomial,
    /// `ψ(f(X))`.
    pub normalization: GQ,
    pub spec: TwoStateSpec,
}

fn weight_coeffs(f: &NCPolynomial) -> Result<Vec<GQ>> {
    f.univariate_coeffs(Letter::X).ok_or_else(|| Error::domain(format!("weight {f} must be a polynomial in x only")))
}

/// Builds the weighted state from the ψ-marginals of `base`. The result has
/// order `base.order() − deg f`; the φ-marginals of `base` are ignored.
pub fn weighted_state(base: &TwoStateSpec, f: &NCPolynomial) -> Result<WeightedState> {
    let c = weight_coeffs(f)?;
    let deg = c.len().saturating_sub(1);
    if deg > base.order() {
        return Err(Error::limit("weight degree exceeds the spec order"));
    }
    let order = base.order() - deg;
    let x = base.marginal(Letter::X);
    let pairing = |n: usize| -> GQ { c.iter().enumerate().map(|(k, ck)| ck * &x.moment(State::Psi, n + k)).sum() };
    let normalization = pairing(0);
    if normalization.is_zero() {
        return Err(Error::domain(format!("ψ({f}) = 0, the weight cannot be normalized")));
    }
    let x_phi = (1..=order).map(|n| pairing(n).checked_div(&normalization)).collect::<Result<Vec<_>>>()?;
    let x_psi = x.psi[..order].to_vec();
    let y_psi = base.marginal(Letter::Y).psi[..order].to_vec();
    let spec = TwoStateSpec::from_marginals(Marginal::new(x_psi, x_phi)?, Marginal::new(y_psi.clone(), y_psi)?)?;
    Ok(WeightedState { weight: f.clone(), normalization, spec })
}

/// Moments of `P` under the weighted φ and under ψ.
pub fn distributions_of_poly(ws: &WeightedState, p: &NCPolynomial, order: usize) -> Result<(MomentSeq, MomentSeq)> {
    Ok((poly_distribution(&ws.spec, p, State::Phi, order)?, poly_distribution(&ws.spec, p, State::Psi, order)?))
}

/// `ψ(g(X)·Pᵏ)` for `k = 0..=count-1`, through a weighted state.
pub fn target_pairings(spec: &TwoStateSpec, g: &NCPolynomial, p: &NCPolynomial, count: usize) -> Result<Vec<GQ>> {
    let c = weight_coeffs(g)?;
    let psi_g: GQ = c.iter().enumerate().map(|(k, ck)| ck * &spec.marginal(Letter::X).moment(State::Psi, k)).sum();
    // a ψ-null target is shifted by 1 and the shift removed afterwards
    let shift = psi_g.is_zero();
    let weight = if shift { g.add(&NCPolynomial::one()) } else { g.clone() };
    let ws = weighted_state(spec, &weight)?;
    let phi = poly_moments(&ws.spec, p, State::Phi, count)?;
    let psi = if shift { poly_moments(spec, p, State::Psi, count)? } else { Vec::new() };
    Ok((0..count)
        .map(|k| {
            let v = &ws.normalization * &phi[k];
            if shift {
                v - &psi[k]
            } else {
                v
            }
        })
        .collect())
}

/// `state(Pᵏ)` for `k = 0..count`, including `k = 0`.
fn poly_moments(spec: &TwoStateSpec, p: &NCPolynomial, state: State, count: usize) -> Result<Vec<GQ>> {
    let m = poly_distribution(spec, p, state, count.saturating_sub(1))?;
    Ok((0..count).map(|k| m.get(k)).collect())
}

/// Best approximation `h(P) = Σ hⱼ Pʲ` of `g(X)` in `L²(ψ)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProjectionResult {
    pub coefficients: Vec<GQ>,
    /// Size of the leading Gram block actually solved.
    pub rank: usize,
    /// `ψ((g − h(P))·Pᵏ)` for `k < rank`, all zero.
    pub residuals: Vec<GQ>,
}

/// Solves the Hankel system `[ψ(P^{j+k})]·h = [ψ(g·Pᵏ)]`, `0 ≤ j, k ≤ d`,
/// shrinking to the largest nonsingular leading block when needed.
pub fn l2_project(spec: &TwoStateSpec, g: &NCPolynomial, p: &NCPolynomial, degree: usize) -> Result<ProjectionResult> {
    let moments = poly_moments(spec, p, State::Psi, 2 * degree + 1)?;
    if moments.iter().all(GQ::is_zero) {
        return Err(Error::domain("Gram matrix of the powers of P vanishes"));
    }
    let rhs = target_pairings(spec, g, p, degree + 1)?;
    for rank in (1..=degree + 1).rev() {
        let gram = ScalarMatrix::from_fn(rank, |j, k| moments[j + k].clone());
        let Ok(inv) = gram.checked_inverse() else { continue };
        let coefficients: Vec<GQ> = (0..rank).map(|j| (0..rank).map(|k| inv.get(j, k) * &rhs[k]).sum()).collect();
        let residuals =
            (0..rank).map(|k| &rhs[k] - &(0..rank).map(|j| &coefficients[j] * &moments[j + k]).sum::<GQ>()).collect();
        return Ok(ProjectionResult { coefficients, rank, residuals });
    }
    Err(Error::domain("Gram matrix of the powers of P is singular in every leading block"))
}

/// Checks `ψ((g − h(P))·Pᵏ) = 0` for `k = 0..=k_max`.
pub fn condexp_verify(spec: &TwoStateSpec, g: &NCPolynomial, p: &NCPolynomial, h: &[GQ], k_max: usize) -> Result<bool> {
    let count = k_max + 1;
    let moments = poly_moments(spec, p, State::Psi, k_max + h.len())?;
    let rhs = target_pairings(spec, g, p, count)?;
    Ok((0..count).all(|k| {
        let hp: GQ = h.iter().enumerate().map(|(j, hj)| hj * &moments[j + k]).sum();
        rhs[k] == hp
    }))
}
