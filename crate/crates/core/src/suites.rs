//! End-to-end verification suites shared by the acceptance tests and the
//! `verify` command. Every check is exact; random data comes from a seeded
//! ChaCha stream so reports are reproducible.

use std::fmt::Display;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::condexp::{efree_full, efree_resolvent, rqce_resolvent, wordwise_on_resolvent, CondExp};
use crate::cumulants::{
    boolean_from_moments, cfree_from_two_moments, free_from_moments, ll_sum, moments_from_boolean, moments_from_free,
    partition_weight, phi_moments_from_cfree, transform_series, State,
};
use crate::denoise::{condexp_verify, l2_project};
use crate::engine::{constant_series, poly_distribution};
use crate::error::{Error, Result};
use crate::linearize::{commutator_linearization, linearize, verify_linearization};
use crate::matrix::ScalarMatrix;
use crate::multiplicative::{mgf_product, moments_of, sigma_report, subordination_pair};
use crate::ncpoly::{parse_poly, Letter, NCPolynomial, Word};
use crate::oracle::{vnrp_boolean_phi, Distribution, TwoStateSpec};
use crate::partitions::{
    enumerate_interval, enumerate_nc, enumerate_nc_colored, is_ll, is_vnrp, vnrp_closure, Coloring, SetPartition,
};
use crate::scalar::GQ;

const SEED: u64 = 0x5eed_cf4e;

/// Outcome of one suite.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checks: usize,
    pub failures: Vec<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Tally {
    checks: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { checks: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, left: &T, right: &T, what: impl Display) {
        self.check(left == right, || format!("{what}: {left:?} != {right:?}"));
    }

    fn try_check(&mut self, r: Result<bool>, what: impl Display) {
        match r {
            Ok(ok) => self.check(ok, || what.to_string()),
            Err(e) => self.check(false, || format!("{what}: {e}")),
        }
    }
}

pub const SUITES: [&str; 8] =
    ["commutator", "denoise", "engine", "vnrp", "linearize", "condexp", "sigma", "combinatorics"];

/// Runs the named suite; an unknown name is a usage error.
pub fn run_suite(name: &str) -> Result<SuiteReport> {
    let start = Instant::now();
    let (name, run): (&'static str, fn(&mut Tally) -> Result<()>) = match name {
        "commutator" => ("commutator", commutator),
        "denoise" => ("denoise", denoise),
        "engine" => ("engine", engine_vs_oracle),
        "vnrp" => ("vnrp", vnrp),
        "linearize" => ("linearize", linearization),
        "condexp" => ("condexp", conditional_expectations),
        "sigma" => ("sigma", sigma),
        "combinatorics" => ("combinatorics", combinatorics),
        other => return Err(Error::usage(format!("unknown suite {other:?}, expected one of {}", SUITES.join(", ")))),
    };
    let mut tally = Tally::new();
    run(&mut tally)?;
    Ok(SuiteReport { name, checks: tally.checks, failures: tally.failures, elapsed: start.elapsed() })
}

fn rand_rational(rng: &mut ChaCha8Rng, max_num: i64, max_den: i64) -> GQ {
    GQ::frac(rng.gen_range(-max_num..=max_num), rng.gen_range(1..=max_den))
}

fn rand_nonzero(rng: &mut ChaCha8Rng, max_num: i64, max_den: i64) -> GQ {
    loop {
        let q = rand_rational(rng, max_num, max_den);
        if !q.is_zero() {
            return q;
        }
    }
}

/// A spec with arbitrary rational moment sequences, which is all the formal
/// identities need.
pub fn random_spec(rng: &mut ChaCha8Rng, order: usize, nonzero_mean: bool) -> TwoStateSpec {
    let seq = |rng: &mut ChaCha8Rng| -> Vec<GQ> {
        (0..order)
            .map(|k| if k == 0 && nonzero_mean { rand_nonzero(rng, 3, 2) } else { rand_rational(rng, 3, 3) })
            .collect()
    };
    let (xp, xf, yp, yf) = (seq(rng), seq(rng), seq(rng), seq(rng));
    TwoStateSpec::from_moments(xp, Some(xf), yp, Some(yf)).expect("equal orders")
}

fn semicircle_bernoulli(order: usize) -> Result<TwoStateSpec> {
    TwoStateSpec::from_moments(
        Distribution::standard_semicircle().moments(order)?,
        None,
        Distribution::bernoulli().moments(order)?,
        None,
    )
}

fn oracle_moments(spec: &TwoStateSpec, p: &NCPolynomial, state: State, count: usize) -> Result<Vec<GQ>> {
    let mut power = NCPolynomial::one();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        power = power.mul(p);
        out.push(spec.eval(state, &power)?);
    }
    Ok(out)
}

fn ints(v: &[i64]) -> Vec<GQ> {
    v.iter().map(|&n| GQ::from_int(n)).collect()
}

fn commutator(t: &mut Tally) -> Result<()> {
    let spec = semicircle_bernoulli(12)?;
    let p = parse_poly("i*(x*y - y*x)")?;
    let engine = poly_distribution(&spec, &p, State::Psi, 6)?.values;
    t.eq(&engine, &ints(&[0, 2, 0, 8, 0, 40]), "ψ-moments of the commutator");
    t.eq(&engine, &oracle_moments(&spec, &p, State::Psi, 6)?, "engine against word expansion");
    let variance_two = crate::cumulants::semicircle_moments(&GQ::from_int(2), 6);
    t.eq(&engine, &variance_two, "semicircle of variance 2");
    Ok(())
}

fn denoise(t: &mut Tally) -> Result<()> {
    let spec = semicircle_bernoulli(22)?;
    let p = parse_poly("i*(x*y - y*x)")?;
    let q = |v: &[(i64, i64)]| v.iter().map(|&(n, d)| GQ::frac(n, d)).collect::<Vec<_>>();
    for (g, degree, k, expected) in
        [("x^2", 2, 8, q(&[(1, 2), (0, 1), (1, 4)])), ("x^4", 4, 6, q(&[(3, 4), (0, 1), (3, 8), (0, 1), (1, 16)]))]
    {
        let g = parse_poly(g)?;
        let r = l2_project(&spec, &g, &p, degree)?;
        t.eq(&r.coefficients, &expected, format!("E[{g} | P]"));
        t.check(r.residuals.iter().all(GQ::is_zero), || format!("residuals of E[{g} | P]"));
        t.try_check(
            condexp_verify(&spec, &g, &p, &r.coefficients, k),
            format!("orthogonality of E[{g} | P] up to K = {k}"),
        );
    }
    Ok(())
}

fn engine_vs_oracle(t: &mut Tally) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let polys = ["x + y", "x*y", "x*y + y*x", "x^2 + y^2", "i*(x*y - y*x)"].map(|s| parse_poly(s).expect("literal"));
    for n in 0..20 {
        let spec = random_spec(&mut rng, 8, false);
        for p in &polys {
            let count = 8 / p.degree().unwrap_or(1);
            for state in [State::Psi, State::Phi] {
                let engine = poly_distribution(&spec, p, state, count)?.values;
                let oracle = oracle_moments(&spec, p, state, count)?;
                t.eq(&engine, &oracle, format!("spec {n}, {p}, {state:?}"));
            }
        }
    }
    Ok(())
}

fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    (1..=n)
        .flat_map(|first| {
            compositions(n - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// Colourings up to relabelling with at most `s` colours.
fn canonical_colorings(m: usize, s: usize) -> Vec<Coloring> {
    fn go(prefix: &mut Vec<usize>, m: usize, s: usize, out: &mut Vec<Coloring>) {
        if prefix.len() == m {
            out.push(Coloring::new(prefix.clone()));
            return;
        }
        let next = prefix.iter().max().map_or(0, |&c| c + 1).min(s - 1);
        for c in 0..=next {
            prefix.push(c);
            go(prefix, m, s, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), m, s, &mut out);
    out
}

fn vnrp(t: &mut Tally) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    for n in 0..10 {
        let spec = random_spec(&mut rng, 6, false);
        for total in 1..=6 {
            for sizes in compositions(total) {
                for first in Letter::ALL {
                    let mut letter = first;
                    let args: Vec<NCPolynomial> = sizes
                        .iter()
                        .map(|&k| {
                            let a = NCPolynomial::word(Word::power(letter, k));
                            letter = letter.other();
                            a
                        })
                        .collect();
                    let direct = spec.multilinear_boolean(State::Phi, &args)?;
                    let grouped = vnrp_boolean_phi(&spec, &args)?;
                    t.eq(&grouped, &direct, format!("spec {n}, blocks {sizes:?} from {first:?}"));
                }
            }
        }
    }
    for m in 1..=6 {
        for c in canonical_colorings(m, 3) {
            let nc = enumerate_nc_colored(&c)?;
            for sigma in &nc {
                let above: Vec<&SetPartition> = nc.iter().filter(|rho| is_ll(sigma, rho)).collect();
                let maximal: Vec<&SetPartition> = above
                    .iter()
                    .copied()
                    .filter(|rho| !above.iter().any(|other| *other != *rho && is_ll(rho, other)))
                    .collect();
                let closure = vnrp_closure(sigma, &c)?;
                t.check(maximal.len() == 1 && *maximal[0] == closure && is_vnrp(&closure, &c)?, || {
                    format!("colouring {:?}, σ = {sigma:?}: maximal {maximal:?}, closure {closure:?}", c.colors())
                });
            }
        }
    }
    Ok(())
}

fn random_poly(rng: &mut ChaCha8Rng) -> NCPolynomial {
    loop {
        let mut p = NCPolynomial::zero();
        for _ in 0..rng.gen_range(1..=4) {
            let len = rng.gen_range(1..=4);
            let word = Word::new((0..len).map(|_| if rng.gen_bool(0.5) { Letter::X } else { Letter::Y }).collect());
            let c = if rng.gen_bool(0.3) { GQ::i() * rand_nonzero(rng, 3, 2) } else { rand_nonzero(rng, 3, 2) };
            p.add_term(word, c);
        }
        if !p.is_zero() {
            return p;
        }
    }
}

fn linearization(t: &mut Tally) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    for _ in 0..50 {
        let p = random_poly(&mut rng);
        let v = verify_linearization(&linearize(&p)?, &p, 10);
        t.check(v.ok, || format!("{p}: first mismatch at z^{:?}", v.first_mismatch));
    }
    let p = parse_poly("i*(x*y - y*x)")?;
    let v = verify_linearization(&commutator_linearization(), &p, 10);
    t.check(v.ok, || format!("explicit commutator pencil: first mismatch at z^{:?}", v.first_mismatch));
    Ok(())
}

fn all_words(max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        layer = layer.iter().flat_map(|w| Letter::ALL.map(|l| w.concat(&Word::letter(l)))).collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> ScalarMatrix {
    ScalarMatrix::from_fn(n, |_, _| rand_rational(rng, 2, 2))
}

fn conditional_expectations(t: &mut Tally) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let words = all_words(6);
    for n in 0..3 {
        let spec = random_spec(&mut rng, 8, false);
        let mut ce = CondExp::new(&spec);
        for w in &words {
            t.eq(&efree_full(&spec, w)?, &ce.efree_rec(w)?, format!("spec {n}, E[{w}]"));
        }
    }
    for n in 0..3 {
        let spec = random_spec(&mut rng, 8, false);
        let a = constant_series(&random_matrix(&mut rng, 2), 6);
        let b = constant_series(&random_matrix(&mut rng, 2), 6);
        let forms = efree_resolvent(&spec, &a, &b, 6)?;
        t.check(forms.agree(), || format!("spec {n}: resolvent forms of E[Ψ] disagree"));
        let mut ce = CondExp::new(&spec);
        let wordwise = wordwise_on_resolvent(&a, &b, 6, |p| ce.efree_poly(p))?;
        t.eq(&wordwise, &forms.subordinated, format!("spec {n}: E[Ψ] word by word"));
        let (a5, b5) = (a.truncate(5), b.truncate(5));
        let wordwise = wordwise_on_resolvent(&a5, &b5, 5, |p| ce.rqce_poly(p))?;
        t.eq(&rqce_resolvent(&spec, &a5, &b5, 5)?, &wordwise, format!("spec {n}: rE[Ψ] word by word"));
    }
    let specs: Vec<TwoStateSpec> = (0..10).map(|_| random_spec(&mut rng, 8, false)).collect();
    let mut engines: Vec<CondExp> = specs.iter().map(CondExp::new).collect();
    for pair in 0..200 {
        let s = rng.gen_range(0..specs.len());
        let len = rng.gen_range(1..=5);
        let w = Word::new((0..len).map(|_| if rng.gen_bool(0.5) { Letter::X } else { Letter::Y }).collect());
        let k = rng.gen_range(1..=8 - len.min(7));
        let ce = &mut engines[s];
        let r = ce.rqce(&w)?;
        t.eq(&specs[s].eval(State::Phi, &r)?, &specs[s].phi_moment(&w)?, format!("pair {pair}: φ(rE[{w}])"));
        let tail = Word::power(Letter::X, k.min(8 - len));
        let extended = ce.rqce(&w.concat(&tail))?;
        t.eq(&extended, &r.mul(&NCPolynomial::word(tail.clone())), format!("pair {pair}: rE[{w}{tail}]"));
    }
    let spec = random_spec(&mut rng, 4, false);
    let mut ce = CondExp::new(&spec);
    let (mx, my) = (spec.marginal(Letter::X), spec.marginal(Letter::Y));
    let expected =
        NCPolynomial::x().scale(&my.psi[0]).add(&NCPolynomial::constant(&mx.phi[0] * &(&my.phi[0] - &my.psi[0])));
    let xy = ce.rqce(&Word::parse("XY").expect("literal"))?;
    t.eq(&xy, &expected, "rE[XY]");
    let left = NCPolynomial::x().mul(&ce.rqce(&Word::letter(Letter::Y))?);
    t.check(my.phi[0] != my.psi[0] && xy != left, || "rE[XY] should differ from X·rE[Y]".into());
    Ok(())
}

fn sigma(t: &mut Tally) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    for n in 0..10 {
        let spec = random_spec(&mut rng, 8, true);
        let report = sigma_report(&spec, 7)?;
        t.check(report.residual.len() == 7 && report.is_multiplicative(), || {
            format!("spec {n}: Σ_XY − Σ_X Σ_Y = {:?}", report.residual)
        });
        let pair = subordination_pair(&spec, 8)?;
        let eta_xy = transform_series(&boolean_from_moments(&moments_of(&mgf_product(&spec, State::Psi, 8)?)));
        for (l, omega) in [(Letter::X, &pair.omega_x), (Letter::Y, &pair.omega_y)] {
            let composed = spec.marginal(l).eta(State::Psi).compose(omega)?;
            t.eq(&composed, &eta_xy, format!("spec {n}: η_{l:?}∘ω_{l:?}"));
        }
    }
    Ok(())
}

fn catalan(n: usize) -> usize {
    (0..n).fold(1, |c, k| c * 2 * (2 * k + 1) / (k + 2))
}

fn closure_axioms(
    t: &mut Tally,
    elems: &[SetPartition],
    le: impl Fn(&SetPartition, &SetPartition) -> bool,
    closure: impl Fn(&SetPartition) -> Result<SetPartition>,
    what: &str,
) -> Result<()> {
    let closed: Vec<SetPartition> = elems.iter().map(&closure).collect::<Result<_>>()?;
    for (x, cx) in elems.iter().zip(&closed) {
        t.check(le(x, cx), || format!("{what}: {x:?} is not below its closure"));
        t.eq(&closure(cx)?, cx, format!("{what}: idempotence at {x:?}"));
        for (y, cy) in elems.iter().zip(&closed) {
            if le(x, y) && !le(cx, cy) {
                t.check(false, || format!("{what}: not monotone at {x:?} ≤ {y:?}"));
            }
        }
    }
    Ok(())
}

fn combinatorics(t: &mut Tally) -> Result<()> {
    for n in 1..=10 {
        t.eq(&enumerate_nc(n)?.len(), &catalan(n), format!("|NC({n})|"));
    }
    for n in 1..=6 {
        let nc = enumerate_nc(n)?;
        closure_axioms(
            t,
            &nc,
            |a, b| a.refines(b),
            |p| Ok(p.interval_closure()),
            &format!("interval closure, n = {n}"),
        )?;
        for p in enumerate_interval(n)? {
            t.eq(&p.interval_closure(), &p, format!("interval partition {p:?} is closed"));
        }
        for c in canonical_colorings(n, 3) {
            let colored = enumerate_nc_colored(&c)?;
            closure_axioms(
                t,
                &colored,
                is_ll,
                |p| vnrp_closure(p, &c),
                &format!("VNRP closure, colouring {:?}", c.colors()),
            )?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 8);
    for _ in 0..5 {
        let m: Vec<GQ> = (0..10).map(|_| rand_rational(&mut rng, 4, 3)).collect();
        let phi: Vec<GQ> = (0..10).map(|_| rand_rational(&mut rng, 4, 3)).collect();
        t.eq(&moments_from_boolean(&boolean_from_moments(&m)), &m, "Boolean round trip");
        let r = free_from_moments(&m);
        t.eq(&moments_from_free(&r), &m, "free round trip");
        t.eq(&phi_moments_from_cfree(&cfree_from_two_moments(&phi, &r), &r), &phi, "c-free round trip");
        let m6 = &m[..6];
        let (b6, r6) = (boolean_from_moments(m6), free_from_moments(m6));
        for n in 1..=6 {
            for rho in enumerate_nc(n)? {
                t.eq(&ll_sum(&rho, &r6)?, &partition_weight(&rho, &b6), format!("β_ρ for ρ = {rho:?}"));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn helpers() {
        assert_eq!((1..=6).map(catalan).collect::<Vec<_>>(), vec![1, 2, 5, 14, 42, 132]);
        assert_eq!(compositions(4).len(), 8);
        assert_eq!(canonical_colorings(4, 3).len(), 14);
        assert_eq!(all_words(3).len(), 15);
    }

    #[test]
    fn unknown_suite() {
        assert!(matches!(run_suite("nope"), Err(Error::Usage(_))));
    }
}
