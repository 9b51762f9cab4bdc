use cfree::condexp::{phi_of_efree_rec, CondExp};
use cfree::cumulants::{boolean_from_moments, moment_series, transform_series, State};
use cfree::denoise::{distributions_of_poly, l2_project, weighted_state};
use cfree::multiplicative::{mgf_product, moments_of, sigma_report, subordination_pair};
use cfree::ncpoly::parse_poly;
use cfree::oracle::{vnrp_boolean_phi, Distribution, TwoStateSpec};
use cfree::partitions::{enumerate_interval, enumerate_irreducible, enumerate_nc};
use cfree::suites::random_spec;
use cfree::{Letter, NCPolynomial, ScalarSeries, Word, GQ};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn words(max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        layer = layer.iter().flat_map(|w| Letter::ALL.map(|l| w.concat(&Word::letter(l)))).collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn specs(seed: u64, count: usize, order: usize) -> Vec<TwoStateSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_spec(&mut rng, order, false)).collect()
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

fn catalan(n: usize) -> usize {
    (0..n).fold(1, |c, k| c * 2 * (2 * k + 1) / (k + 2))
}

#[test]
fn partition_counts_and_components() {
    for n in 1..=10 {
        assert_eq!(enumerate_interval(n).unwrap().len(), 1 << (n - 1));
        assert_eq!(enumerate_irreducible(n).unwrap().len(), catalan(n - 1));
    }
    for n in 1..=8 {
        for p in enumerate_nc(n).unwrap() {
            let parts = p.irreducible_components();
            let joined = parts[1..].iter().fold(parts[0].clone(), |acc, q| acc.concat(q));
            assert_eq!(joined, p);
        }
    }
}

#[test]
fn moment_and_boolean_transforms() {
    let spec = &specs(1, 1, 10)[0];
    for state in [State::Psi, State::Phi] {
        let m = spec.marginal(Letter::Y).moments(state);
        let eta = transform_series(&boolean_from_moments(m));
        let one = ScalarSeries::one(&GQ::zero(), 10);
        assert_eq!(moment_series(m), one.sub(&eta).inverse().unwrap());
    }
}

#[test]
fn cyclically_alternating_cumulants_vanish() {
    let spec = &specs(2, 1, 8)[0];
    for w in words(8) {
        if w.len() >= 2 && w.first() != w.last() {
            for state in [State::Psi, State::Phi] {
                assert!(spec.letterwise_boolean(state, &w).unwrap().is_zero(), "{w} {state:?}");
            }
        }
    }
}

#[test]
fn equal_states_reduce_to_freeness() {
    let spec = specs(3, 1, 8)[0].free_part();
    for w in words(8) {
        assert_eq!(spec.phi_moment(&w).unwrap(), spec.psi_moment(&w).unwrap(), "{w}");
    }
}

#[test]
fn centered_alternating_products_factorize() {
    for spec in specs(4, 3, 6) {
        for sizes in [vec![1, 1], vec![2, 1, 2], vec![1, 2, 1, 2], vec![3, 3], vec![1, 1, 1, 1, 1, 1]] {
            for first in Letter::ALL {
                let mut letter = first;
                let (mut product, mut phi_product) = (NCPolynomial::one(), GQ::one());
                for &k in &sizes {
                    let power = NCPolynomial::word(Word::power(letter, k));
                    let centered = power.sub(&NCPolynomial::constant(spec.eval(State::Psi, &power).unwrap()));
                    phi_product = phi_product * spec.eval(State::Phi, &centered).unwrap();
                    product = product.mul(&centered);
                    letter = letter.other();
                }
                assert!(spec.eval(State::Psi, &product).unwrap().is_zero(), "{sizes:?}");
                assert_eq!(spec.eval(State::Phi, &product).unwrap(), phi_product, "{sizes:?}");
            }
        }
    }
}

#[test]
fn cached_and_fresh_values_agree() {
    let spec = &specs(5, 1, 7)[0];
    let all = words(7);
    let first: Vec<GQ> = all.iter().map(|w| spec.phi_moment(w).unwrap()).collect();
    assert!(spec.cache_len() > 0);
    let again: Vec<GQ> = all.iter().map(|w| spec.phi_moment(w).unwrap()).collect();
    spec.clear_cache();
    assert_eq!(spec.cache_len(), 0);
    let fresh: Vec<GQ> = all.iter().map(|w| spec.phi_moment(w).unwrap()).collect();
    assert_eq!(first, again);
    assert_eq!(first, fresh);
}

#[test]
fn conditional_expectation_laws() {
    for spec in specs(6, 10, 8) {
        let mut ce = CondExp::new(&spec);
        for w in words(6) {
            let r = ce.rqce(&w).unwrap();
            assert_eq!(spec.eval(State::Phi, &r).unwrap(), spec.phi_moment(&w).unwrap(), "φ(rE[{w}])");
            assert!(r.degree().unwrap_or(0) <= w.len(), "deg rE[{w}]");
            let e = ce.efree_rec(&w).unwrap();
            assert_eq!(spec.eval(State::Psi, &e).unwrap(), spec.psi_moment(&w).unwrap(), "ψ(E[{w}])");
            if w.first() == Some(Letter::X) {
                assert_eq!(phi_of_efree_rec(&spec, &w).unwrap(), spec.eval(State::Phi, &e).unwrap(), "φ(E[{w}])");
            }
        }
        for w in words(4) {
            let e = ce.efree_rec(&w).unwrap();
            let (xa, xb) = (Word::power(Letter::X, 1), Word::power(Letter::X, 2));
            let wrapped = xa.concat(&w).concat(&xb);
            let expected = NCPolynomial::word(xa).mul(&e).mul(&NCPolynomial::word(xb));
            assert_eq!(ce.efree_rec(&wrapped).unwrap(), expected, "bimodule at {w}");
        }
    }
}

#[test]
fn multiplicative_laws_at_equal_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..3 {
        let spec = random_spec(&mut rng, 7, true).free_part();
        let report = sigma_report(&spec, 7).unwrap();
        assert!(report.is_multiplicative());
        assert_eq!(mgf_product(&spec, State::Phi, 7).unwrap(), mgf_product(&spec, State::Psi, 7).unwrap());
    }
    let spec = random_spec(&mut rng, 8, true);
    let pair = subordination_pair(&spec, 8).unwrap();
    let eta_xy = transform_series(&boolean_from_moments(&moments_of(&mgf_product(&spec, State::Psi, 8).unwrap())));
    let shifted = |l: Letter, w: &ScalarSeries| spec.marginal(l).eta_shifted(State::Psi).compose(w).unwrap();
    let product = shifted(Letter::X, &pair.omega_x).mul(&shifted(Letter::Y, &pair.omega_y));
    assert_eq!(product, eta_xy.shift_down().unwrap());
}

#[test]
fn weighted_state_is_conditionally_free() {
    let ws = weighted_state(&semicircle_bernoulli(10), &parse_poly("x^2").unwrap()).unwrap();
    for sizes in [vec![2], vec![1, 1], vec![2, 2], vec![1, 2, 1], vec![2, 1, 1, 2], vec![1, 1, 1, 1, 1, 1]] {
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
            let direct = ws.spec.multilinear_boolean(State::Phi, &args).unwrap();
            assert_eq!(vnrp_boolean_phi(&ws.spec, &args).unwrap(), direct, "{sizes:?}");
        }
    }
    let sum = parse_poly("x + y").unwrap();
    let unit = weighted_state(&semicircle_bernoulli(6), &NCPolynomial::one()).unwrap();
    let (phi, psi) = distributions_of_poly(&unit, &sum, 6).unwrap();
    assert_eq!(phi, cfree::cumulants::MomentSeq::new(State::Phi, psi.values.clone()));
}

#[test]
fn rotated_commutators_share_the_projection() {
    let spec = semicircle_bernoulli(14);
    let x2 = parse_poly("x^2").unwrap();
    let xy = parse_poly("x*y").unwrap();
    let yx = parse_poly("y*x").unwrap();
    for theta in [GQ::one(), GQ::i(), GQ::frac(3, 5) + GQ::i() * GQ::frac(4, 5)] {
        let p = xy.scale(&theta).add(&yx.scale(&theta.conj()));
        let r = l2_project(&spec, &x2, &p, 2).unwrap();
        assert_eq!(r.coefficients, vec![GQ::frac(1, 2), GQ::zero(), GQ::frac(1, 4)], "θ = {theta}");
    }
}

#[test]
fn projection_is_a_density_at_moment_level() {
    let spec = semicircle_bernoulli(16);
    let p = parse_poly("i*(x*y - y*x)").unwrap();
    let f = parse_poly("x^2").unwrap();
    let h = l2_project(&spec, &f, &p, 2).unwrap().coefficients;
    let ws = weighted_state(&spec, &f).unwrap();
    let (phi, _) = distributions_of_poly(&ws, &p, 6).unwrap();
    let hp = NCPolynomial::constant(h[0].clone()).add(&p.scale(&h[1])).add(&p.pow(2).scale(&h[2]));
    for n in 1..=6 {
        let rhs = spec.eval(State::Psi, &hp.mul(&p.pow(n))).unwrap();
        assert_eq!(&phi.get(n) * &ws.normalization, rhs, "n = {n}");
    }
}

/// Z₂ * Z₂ with the trace as ψ and φ(w) = q^|w|; X plays b, Y plays a.
fn coxeter(order: usize, q: &GQ) -> TwoStateSpec {
    let psi: Vec<GQ> = (1..=order).map(|n| if n % 2 == 0 { GQ::one() } else { GQ::zero() }).collect();
    let phi: Vec<GQ> = (1..=order).map(|n| if n % 2 == 0 { GQ::one() } else { q.clone() }).collect();
    TwoStateSpec::from_moments(psi.clone(), Some(phi.clone()), psi, Some(phi)).unwrap()
}

#[test]
fn coxeter_quasi_conditional_expectation() {
    let q = GQ::frac(1, 2);
    let spec = coxeter(8, &q);
    let mut ce = CondExp::new(&spec);
    let bxb = parse_poly("x^2 + x*y*x").unwrap();
    let r = ce.rqce_poly(&bxb).unwrap();
    assert_eq!(r, parse_poly("x^2 + 1/4*x").unwrap());
    let printed = parse_poly("x^2 + 3/4*x").unwrap();
    let pairing = |p: &NCPolynomial, n: usize| {
        spec.eval(State::Phi, &p.mul(&NCPolynomial::word(Word::power(Letter::X, n)))).unwrap()
    };
    for n in 0..=4 {
        assert_eq!(pairing(&r, n), pairing(&bxb, n), "n = {n}");
    }
    assert_ne!(pairing(&printed, 0), pairing(&bxb, 0));
    assert_eq!(
        spec.eval(State::Phi, &ce.rqce(&Word::parse("YXY").unwrap()).unwrap()).unwrap(),
        spec.phi_moment(&Word::parse("YXY").unwrap()).unwrap()
    );
}
