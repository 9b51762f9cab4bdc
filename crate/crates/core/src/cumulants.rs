//! Conversions among moments, Boolean, free and c-free cumulants of a single
//! variable, partitioned functionals, and Boolean cumulants with products as
//! entries.
//!
//! Sequences are stored from index 1: `values[0]` is the first moment or
//! cumulant. All conversions are triangular recursions in the order.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::Result;
use crate::partitions::{enumerate_interval, enumerate_irreducible, enumerate_nc, is_ll, SetPartition};
use crate::scalar::GQ;
use crate::series::ScalarSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum State {
    Psi,
    Phi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CumulantKind {
    BooleanPsi,
    BooleanPhi,
    FreePsi,
    CFree,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentSeq {
    pub state: State,
    pub values: Vec<GQ>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CumulantSeq {
    pub kind: CumulantKind,
    pub values: Vec<GQ>,
}

impl MomentSeq {
    pub fn new(state: State, values: Vec<GQ>) -> Self {
        MomentSeq { state, values }
    }

    pub fn order(&self) -> usize {
        self.values.len()
    }

    /// `m_n`, with `m_0 = 1`.
    pub fn get(&self, n: usize) -> GQ {
        if n == 0 {
            GQ::one()
        } else {
            self.values[n - 1].clone()
        }
    }
}

impl CumulantSeq {
    pub fn new(kind: CumulantKind, values: Vec<GQ>) -> Self {
        CumulantSeq { kind, values }
    }

    pub fn order(&self) -> usize {
        self.values.len()
    }

    /// `c_n` for `n ≥ 1`.
    pub fn get(&self, n: usize) -> &GQ {
        &self.values[n - 1]
    }
}

/// `1 + Σ m_k z^k` as a series of order `values.len()`.
pub fn moment_series(values: &[GQ]) -> ScalarSeries {
    let mut c = Vec::with_capacity(values.len() + 1);
    c.push(GQ::one());
    c.extend(values.iter().cloned());
    ScalarSeries::new(c)
}

/// `Σ c_k z^k` (zero constant term).
pub fn transform_series(values: &[GQ]) -> ScalarSeries {
    let mut c = Vec::with_capacity(values.len() + 1);
    c.push(GQ::zero());
    c.extend(values.iter().cloned());
    ScalarSeries::new(c)
}

/// `β_n = m_n − Σ_{k<n} β_k m_{n−k}`.
pub fn boolean_from_moments(m: &[GQ]) -> Vec<GQ> {
    let mut b: Vec<GQ> = Vec::with_capacity(m.len());
    for n in 1..=m.len() {
        let mut v = m[n - 1].clone();
        for k in 1..n {
            v = v - &b[k - 1] * &m[n - k - 1];
        }
        b.push(v);
    }
    b
}

/// `m_n = Σ_{k≤n} β_k m_{n−k}`.
pub fn moments_from_boolean(b: &[GQ]) -> Vec<GQ> {
    let mut m: Vec<GQ> = Vec::with_capacity(b.len());
    for n in 1..=b.len() {
        let mut v = b[n - 1].clone();
        for k in 1..n {
            v = v + &b[k - 1] * &m[n - k - 1];
        }
        m.push(v);
    }
    m
}

/// Coefficients `[z^j] M^s` for `j ≤ order` and `s ≤ order`, with `M` built
/// from the first `order` moments.
fn moment_powers(m: &[GQ], order: usize) -> Vec<ScalarSeries> {
    let series = moment_series(&m[..order.min(m.len())]);
    let series = pad(&series, order);
    let mut powers = vec![ScalarSeries::one(&GQ::zero(), order)];
    for s in 1..=order {
        let next = powers[s - 1].mul(&series);
        powers.push(next);
    }
    powers
}

fn pad(s: &ScalarSeries, order: usize) -> ScalarSeries {
    let mut c = s.coeffs().to_vec();
    c.resize(order + 1, GQ::zero());
    ScalarSeries::new(c)
}

/// Free cumulants from moments: `m_n = Σ_{s=1}^n r_s [z^{n−s}] M(z)^s`.
pub fn free_from_moments(m: &[GQ]) -> Vec<GQ> {
    let n_max = m.len();
    let powers = moment_powers(m, n_max);
    let mut r: Vec<GQ> = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut v = m[n - 1].clone();
        for s in 1..n {
            v = v - &r[s - 1] * powers[s].coeff(n - s);
        }
        r.push(v);
    }
    r
}

pub fn moments_from_free(r: &[GQ]) -> Vec<GQ> {
    let n_max = r.len();
    let mut m: Vec<GQ> = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        // [z^{n-s}] M^s only involves m_1..m_{n-1}
        let powers = moment_powers(&m, n);
        let mut v = r[n - 1].clone();
        for s in 1..n {
            v = v + &r[s - 1] * powers[s].coeff(n - s);
        }
        m.push(v);
    }
    m
}

/// c-free cumulants from φ-moments and free ψ-cumulants:
/// `φ_n = Σ_s r^{φψ}_s [z^{n−s}] M_ψ^{s−1} M_φ`.
pub fn cfree_from_two_moments(m_phi: &[GQ], r_psi: &[GQ]) -> Vec<GQ> {
    let n_max = m_phi.len().min(r_psi.len());
    let mixed = mixed_powers(&moments_from_free(&r_psi[..n_max]), &m_phi[..n_max], n_max);
    let mut out: Vec<GQ> = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut v = m_phi[n - 1].clone();
        for s in 1..n {
            v = v - &out[s - 1] * mixed[s].coeff(n - s);
        }
        out.push(v);
    }
    out
}

/// `M_ψ^{s−1} M_φ` for `s = 0..=order` (entry 0 unused).
fn mixed_powers(m_psi: &[GQ], m_phi: &[GQ], order: usize) -> Vec<ScalarSeries> {
    let mpsi = pad(&moment_series(m_psi), order);
    let mphi = pad(&moment_series(m_phi), order);
    let mut out = vec![ScalarSeries::one(&GQ::zero(), order)];
    let mut acc = mphi;
    for _ in 1..=order {
        out.push(acc.clone());
        acc = acc.mul(&mpsi);
    }
    out
}

pub fn phi_moments_from_cfree(r_cfree: &[GQ], r_psi: &[GQ]) -> Vec<GQ> {
    let n_max = r_cfree.len().min(r_psi.len());
    let m_psi = moments_from_free(&r_psi[..n_max]);
    let mut m: Vec<GQ> = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mixed = mixed_powers(&m_psi, &m, n);
        let mut v = r_cfree[n - 1].clone();
        for s in 1..n {
            v = v + &r_cfree[s - 1] * mixed[s].coeff(n - s);
        }
        m.push(v);
    }
    m
}

/// `r_π = Π_{V∈π} r_{|V|}` for a single variable.
pub fn partition_weight(pi: &SetPartition, r: &[GQ]) -> GQ {
    pi.blocks().iter().map(|b| r[b.len() - 1].clone()).product()
}

/// Outer blocks weighted by `outer`, inner blocks by `inner`.
pub fn two_state_weight(pi: &SetPartition, outer: &[GQ], inner: &[GQ]) -> GQ {
    let parents = pi.parents();
    pi.blocks()
        .iter()
        .zip(&parents)
        .map(|(b, p)| if p.is_none() { outer[b.len() - 1].clone() } else { inner[b.len() - 1].clone() })
        .product()
}

/// `β_n = Σ_{π∈NCirr(n)} r_π`, by enumeration.
pub fn boolean_from_free_irr(r: &[GQ]) -> Result<Vec<GQ>> {
    (1..=r.len()).map(|n| Ok(enumerate_irreducible(n)?.iter().map(|p| partition_weight(p, r)).sum())).collect()
}

/// `β^φ_n = Σ_{π∈NCirr(n)} Π_outer r^{φψ} Π_inner r^ψ`.
pub fn boolean_phi_from_cfree_irr(r_cfree: &[GQ], r_psi: &[GQ]) -> Result<Vec<GQ>> {
    let n_max = r_cfree.len().min(r_psi.len());
    (1..=n_max)
        .map(|n| Ok(enumerate_irreducible(n)?.iter().map(|p| two_state_weight(p, r_cfree, r_psi)).sum()))
        .collect()
}

/// `L_π(args) = Π_{V∈π} L_{|V|}(args restricted to V)`; `block_value` receives
/// each block's positions.
pub fn partitioned_functional(pi: &SetPartition, mut block_value: impl FnMut(&[usize]) -> Result<GQ>) -> Result<GQ> {
    let mut acc = GQ::one();
    for b in pi.blocks() {
        acc = acc * block_value(b)?;
        if acc.is_zero() {
            break;
        }
    }
    Ok(acc)
}

/// `Σ_{π ≪ ρ} r_π` for a single variable.
pub fn ll_sum(rho: &SetPartition, r: &[GQ]) -> Result<GQ> {
    Ok(enumerate_nc(rho.n())?.iter().filter(|p| is_ll(p, rho)).map(|p| partition_weight(p, r)).sum())
}

/// Boundaries `d_1 < … < d_m = n` of the interval partition with the given block sizes.
fn boundaries(sizes: &[usize]) -> Vec<usize> {
    sizes
        .iter()
        .scan(0, |acc, &s| {
            *acc += s;
            Some(*acc)
        })
        .collect()
}

/// Boolean cumulant with products as entries, summed over interval partitions
/// π with `π ∨ ρ = 1`. `beta(i, j)` is the Boolean cumulant of the factors at
/// positions `i..j`.
pub fn boolean_products_join(sizes: &[usize], mut beta: impl FnMut(usize, usize) -> Result<GQ>) -> Result<GQ> {
    let n: usize = sizes.iter().sum();
    let cuts = boundaries(sizes);
    let mut total = GQ::zero();
    for pi in enumerate_interval(n)? {
        // π ∨ ρ = 1 iff π does not cut at any internal ρ-boundary
        let labels = pi.labels();
        if cuts[..cuts.len() - 1].iter().any(|&d| labels[d - 1] != labels[d]) {
            continue;
        }
        total = total + partitioned_functional(&pi, |b| beta(b[0], b[b.len() - 1] + 1))?;
    }
    Ok(total)
}

/// The same quantity by the first-block recursion: the first Boolean block
/// `[0, j)` must end strictly inside a ρ-block, or at `n`.
pub fn boolean_products_rec(sizes: &[usize], mut beta: impl FnMut(usize, usize) -> Result<GQ>) -> Result<GQ> {
    let n: usize = sizes.iter().sum();
    let cuts = boundaries(sizes);
    let mut memo: HashMap<usize, GQ> = HashMap::new();
    fn go(
        s: usize,
        n: usize,
        cuts: &[usize],
        beta: &mut dyn FnMut(usize, usize) -> Result<GQ>,
        memo: &mut HashMap<usize, GQ>,
    ) -> Result<GQ> {
        if s == n {
            return Ok(GQ::one());
        }
        if let Some(v) = memo.get(&s) {
            return Ok(v.clone());
        }
        let mut total = GQ::zero();
        for j in s + 1..=n {
            if j < n && cuts.contains(&j) {
                continue;
            }
            let b = beta(s, j)?;
            if b.is_zero() {
                continue;
            }
            total = total + b * go(j, n, cuts, beta, memo)?;
        }
        memo.insert(s, total.clone());
        Ok(total)
    }
    go(0, n, &cuts, &mut beta, &mut memo)
}

/// Moments of the semicircle law with the given variance.
pub fn semicircle_moments(variance: &GQ, order: usize) -> Vec<GQ> {
    let mut out = Vec::with_capacity(order);
    let mut catalan = GQ::one();
    for n in 1..=order {
        if n % 2 == 1 {
            out.push(GQ::zero());
        } else {
            let k = (n / 2) as i64;
            // C_k = C_{k-1} · 2(2k−1)/(k+1)
            catalan = catalan * GQ::frac(2 * (2 * k - 1), k + 1);
            out.push(&catalan * &variance.pow(k as u32));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<GQ> {
        v.iter().map(|&x| GQ::from_int(x)).collect()
    }

    #[test]
    fn boolean_examples() {
        assert_eq!(boolean_from_moments(&ints(&[0, 1, 0, 2, 0, 5])), ints(&[0, 1, 0, 1, 0, 2]));
        assert_eq!(boolean_from_moments(&ints(&[0, 1, 0, 1, 0, 1])), ints(&[0, 1, 0, 0, 0, 0]));
        assert_eq!(boolean_from_moments(&ints(&[1, 1, 1, 1])), ints(&[1, 0, 0, 0]));
    }

    #[test]
    fn free_examples() {
        assert_eq!(free_from_moments(&ints(&[0, 1, 0, 2, 0, 5])), ints(&[0, 1, 0, 0, 0, 0]));
        assert_eq!(free_from_moments(&ints(&[0, 1, 0, 1, 0, 1])), ints(&[0, 1, 0, -1, 0, 2]));
        let t = GQ::frac(3, 2);
        let point: Vec<GQ> = (1..=5).map(|k| t.pow(k)).collect();
        let mut expected = vec![GQ::zero(); 5];
        expected[0] = t.clone();
        assert_eq!(free_from_moments(&point), expected);
    }

    #[test]
    fn cfree_examples() {
        let m = ints(&[0, 1, 0, 2, 0, 5]);
        let r = free_from_moments(&m);
        assert_eq!(cfree_from_two_moments(&m, &r), r);
        // φ(a^n) = ψ(a^{n+2}) for a semicircle
        let phi = ints(&[0, 2, 0, 5]);
        let rc = cfree_from_two_moments(&phi, &r[..4]);
        assert_eq!(rc[0], GQ::zero());
        assert_eq!(rc[1], GQ::from_int(2));
        assert_eq!(phi_moments_from_cfree(&rc, &r[..4]), phi);
    }

    #[test]
    fn boolean_from_irreducible_sum() {
        let r = ints(&[0, 1, 0, 0, 0, 0]);
        assert_eq!(boolean_from_free_irr(&r).unwrap()[5], GQ::from_int(2));
        let r1 = ints(&[5, 0, 0, 0]);
        assert_eq!(boolean_from_free_irr(&r1).unwrap(), ints(&[5, 0, 0, 0]));
    }

    #[test]
    fn semicircle_preset() {
        assert_eq!(semicircle_moments(&GQ::one(), 6), ints(&[0, 1, 0, 2, 0, 5]));
        assert_eq!(semicircle_moments(&GQ::from_int(2), 6), ints(&[0, 2, 0, 8, 0, 40]));
    }

    #[test]
    fn products_as_entries_for_semicircle() {
        // β₂(X·X, X) of a semicircle: odd total degree
        let b = boolean_from_moments(&ints(&[0, 1, 0, 2, 0, 5]));
        let beta = |i: usize, j: usize| Ok(b[j - i - 1].clone());
        assert_eq!(boolean_products_join(&[2, 1], beta).unwrap(), GQ::zero());
        assert_eq!(boolean_products_rec(&[2, 1], beta).unwrap(), GQ::zero());
        // β₂(X², X²) = ψ(X⁴) − ψ(X²)² = 1
        let j = boolean_products_join(&[2, 2], beta).unwrap();
        assert_eq!(j, boolean_products_rec(&[2, 2], beta).unwrap());
        assert_eq!(j, GQ::one());
    }

    #[test]
    fn partitioned_functional_trivial_cases() {
        let b = ints(&[0, 1, 0, 1]);
        let one = partitioned_functional(&SetPartition::one(4), |v| Ok(b[v.len() - 1].clone())).unwrap();
        assert_eq!(one, GQ::one());
        let p = SetPartition::new(3, vec![vec![0, 2], vec![1]]).unwrap();
        let v = partitioned_functional(&p, |v| Ok(b[v.len() - 1].clone())).unwrap();
        assert_eq!(v, GQ::zero());
    }
}
