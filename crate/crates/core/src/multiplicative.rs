//! c-free multiplicative convolution: subordination series for `XY`, its
//! moment generating functions, and the Σ-transform.

use serde::Serialize;

use crate::cumulants::{boolean_from_moments, transform_series, State};
use crate::error::{Error, Result};
use crate::ncpoly::Letter;
use crate::oracle::TwoStateSpec;
use crate::scalar::GQ;
use crate::series::ScalarSeries;

/// Solutions of `ω_X = z η̃^ψ_Y(ω_Y)`, `ω_Y = z η̃^ψ_X(ω_X)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubordinationPair {
    pub omega_x: ScalarSeries,
    pub omega_y: ScalarSeries,
}

fn check_order(spec: &TwoStateSpec, order: usize) -> Result<()> {
    if order == 0 {
        return Err(Error::domain("order must be at least 1"));
    }
    if order > spec.order() {
        return Err(Error::limit(format!("order {order} exceeds the spec order {}", spec.order())));
    }
    Ok(())
}

fn eta_shifted(spec: &TwoStateSpec, l: Letter, state: State, order: usize) -> ScalarSeries {
    spec.marginal(l).eta_shifted(state).truncate(order - 1)
}

pub fn subordination_pair(spec: &TwoStateSpec, order: usize) -> Result<SubordinationPair> {
    check_order(spec, order)?;
    let ex = eta_shifted(spec, Letter::X, State::Psi, order);
    let ey = eta_shifted(spec, Letter::Y, State::Psi, order);
    let mut pair = SubordinationPair {
        omega_x: ScalarSeries::zero(&GQ::zero(), order),
        omega_y: ScalarSeries::zero(&GQ::zero(), order),
    };
    // each sweep fixes at least one more coefficient of both series
    for _ in 0..=order + 1 {
        let omega_x = ey.compose(&pair.omega_y)?.shift_up();
        let omega_y = ex.compose(&pair.omega_x)?.shift_up();
        let next = SubordinationPair { omega_x, omega_y };
        if next == pair {
            return Ok(pair);
        }
        pair = next;
    }
    Err(Error::internal("subordination iteration did not stabilize"))
}

/// `1 / (1 − z η̃^s_X(ω_X) η̃^s_Y(ω_Y))`, the moment generating function of `XY`.
pub fn mgf_product(spec: &TwoStateSpec, state: State, order: usize) -> Result<ScalarSeries> {
    let pair = subordination_pair(spec, order)?;
    let fx = eta_shifted(spec, Letter::X, state, order).compose(&pair.omega_x)?;
    let fy = eta_shifted(spec, Letter::Y, state, order).compose(&pair.omega_y)?;
    let eta = fx.mul(&fy).shift_up();
    ScalarSeries::one(&GQ::zero(), order).sub(&eta).inverse()
}

pub fn mgf_product_phi(spec: &TwoStateSpec, order: usize) -> Result<ScalarSeries> {
    mgf_product(spec, State::Phi, order)
}

/// Moments `m_1..m_order` from a moment generating function.
pub fn moments_of(series: &ScalarSeries) -> Vec<GQ> {
    series.coeffs()[1..].to_vec()
}

/// `Σ^φ = η̃^φ ∘ (η^ψ)⁻¹` from φ- and ψ-moments of equal length `N`; the
/// result has order `N − 1`.
pub fn sigma_transform(phi_moments: &[GQ], psi_moments: &[GQ]) -> Result<ScalarSeries> {
    if phi_moments.len() != psi_moments.len() || phi_moments.len() < 2 {
        return Err(Error::domain("Σ-transform needs φ- and ψ-moments of equal length at least 2"));
    }
    if psi_moments[0].is_zero() {
        return Err(Error::domain("Σ-transform needs a nonzero ψ-mean"));
    }
    let eta_psi = transform_series(&boolean_from_moments(psi_moments));
    let eta_phi_shifted = transform_series(&boolean_from_moments(phi_moments)).shift_down()?;
    eta_phi_shifted.compose(&eta_psi.revert()?)
}

/// Σ-transforms of X, Y and XY with the multiplicativity residual.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SigmaReport {
    pub sigma_x: Vec<GQ>,
    pub sigma_y: Vec<GQ>,
    pub sigma_xy: Vec<GQ>,
    pub residual: Vec<GQ>,
}

impl SigmaReport {
    pub fn is_multiplicative(&self) -> bool {
        self.residual.iter().all(GQ::is_zero)
    }
}

pub fn sigma_report(spec: &TwoStateSpec, order: usize) -> Result<SigmaReport> {
    let mx = spec.marginal(Letter::X);
    let my = spec.marginal(Letter::Y);
    let sx = sigma_transform(&mx.phi[..order], &mx.psi[..order])?;
    let sy = sigma_transform(&my.phi[..order], &my.psi[..order])?;
    let xy_phi = moments_of(&mgf_product(spec, State::Phi, order)?);
    let xy_psi = moments_of(&mgf_product(spec, State::Psi, order)?);
    let sxy = sigma_transform(&xy_phi, &xy_psi)?;
    let residual = sxy.sub(&sx.mul(&sy));
    Ok(SigmaReport {
        sigma_x: sx.coeffs().to_vec(),
        sigma_y: sy.coeffs().to_vec(),
        sigma_xy: sxy.coeffs().to_vec(),
        residual: residual.coeffs().to_vec(),
    })
}
