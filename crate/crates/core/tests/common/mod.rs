//! Generators and algebraic laws shared by the property suite and the
//! acceptance run.
#![allow(dead_code)]

use deltakin::exactpoly::{resultant, MPoly, Monomial, PolyJson, Scalar, Var, NUM_VARS};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestCaseError};

pub const CASES: u32 = 1000;
pub const SEED: u64 = 0x5eed_de17a;

pub fn config() -> Config {
    Config { cases: CASES, rng_seed: RngSeed::Fixed(SEED), failure_persistence: None, ..Config::default() }
}

/// Variables used by random polynomials; a mix of pose, joint and `L`.
pub const VARS: [Var; 4] = [Var::X, Var::Y, Var::Rho1, Var::L];

pub fn scalar() -> impl Strategy<Value = Scalar> {
    (-9i64..=9, 1i64..=4, -3i64..=3, 1i64..=3, prop::bool::weighted(0.3)).prop_map(|(p, q, r, s, mixed)| {
        let rat = Scalar::ratio(p, q);
        if mixed {
            &rat + &Scalar::sqrt3_times(r, s)
        } else {
            rat
        }
    })
}

fn monomial() -> impl Strategy<Value = Monomial> {
    prop::array::uniform4(0u32..=3).prop_map(|e| {
        let mut exps = [0u32; NUM_VARS];
        for (v, k) in VARS.iter().zip(e) {
            exps[v.index()] = k;
        }
        Monomial::from_exponents(&exps)
    })
}

pub fn poly() -> impl Strategy<Value = MPoly> {
    prop::collection::vec((monomial(), scalar()), 0..6).prop_map(MPoly::from_terms)
}

/// Low-degree polynomials for the multivariate resultant law, whose
/// Sylvester matrices grow with the degree in `x`.
pub fn small_poly() -> impl Strategy<Value = MPoly> {
    let mono = prop::array::uniform3(0u32..=1).prop_map(|e| {
        let mut exps = [0u32; NUM_VARS];
        exps[Var::X.index()] = e[0];
        exps[Var::Y.index()] = e[1];
        exps[Var::Rho1.index()] = e[2];
        Monomial::from_exponents(&exps)
    });
    prop::collection::vec((mono, scalar()), 1..4).prop_map(MPoly::from_terms)
}

pub fn point() -> impl Strategy<Value = [Scalar; NUM_VARS]> {
    prop::array::uniform7((-5i64..=5, 1i64..=3)).prop_map(|a| a.map(|(p, q)| Scalar::ratio(p, q)))
}

pub fn var() -> impl Strategy<Value = Var> {
    prop::sample::select(VARS.to_vec())
}

pub fn univariate_coeffs() -> impl Strategy<Value = (Vec<Scalar>, Vec<Scalar>, Option<Scalar>)> {
    (
        prop::collection::vec(scalar(), 2..5),
        prop::collection::vec(scalar(), 2..4),
        prop::option::weighted(0.5, scalar()),
    )
}

#[allow(clippy::eq_op)] // `p - p` is the axiom under test
pub fn ring_axioms(p: &MPoly, q: &MPoly, r: &MPoly) -> Result<(), TestCaseError> {
    prop_assert_eq!(p + q, q + p);
    prop_assert_eq!(p * q, q * p);
    prop_assert_eq!(&(p + q) + r, p + &(q + r));
    prop_assert_eq!(&(p * q) * r, p * &(q * r));
    prop_assert_eq!(p * &(q + r), &(p * q) + &(p * r));
    prop_assert_eq!(p - p, MPoly::zero());
    prop_assert_eq!(p * &MPoly::one(), p.clone());
    prop_assert_eq!(p + &MPoly::zero(), p.clone());
    Ok(())
}

pub fn derivative_rules(p: &MPoly, q: &MPoly, v: Var) -> Result<(), TestCaseError> {
    let lhs = (p * q).diff(v);
    let rhs = &(&p.diff(v) * q) + &(p * &q.diff(v));
    prop_assert_eq!(lhs, rhs);
    prop_assert_eq!((p + q).diff(v), &p.diff(v) + &q.diff(v));
    Ok(())
}

pub fn evaluation_homomorphism(p: &MPoly, q: &MPoly, at: &[Scalar; NUM_VARS]) -> Result<(), TestCaseError> {
    let (ep, eq) = (p.eval_exact(at), q.eval_exact(at));
    prop_assert_eq!((p + q).eval_exact(at), &ep + &eq);
    prop_assert_eq!((p * q).eval_exact(at), &ep * &eq);
    let atf = at.each_ref().map(Scalar::to_f64);
    let scale = p.coeff_l1_norm() * 6f64.powi(p.total_degree() as i32);
    prop_assert!((p.eval_f64(&atf) - ep.to_f64()).abs() <= 1e-12 * scale.max(1.0));
    Ok(())
}

pub fn text_and_json_round_trip(p: &MPoly) -> Result<(), TestCaseError> {
    prop_assert_eq!(&p.to_string().parse::<MPoly>().unwrap(), p);
    prop_assert_eq!(&MPoly::try_from(&PolyJson::from(p)).unwrap(), p);
    Ok(())
}

/// Central differences converge quadratically: halving `h` divides the
/// error by about four until rounding takes over.
pub fn finite_difference_convergence(p: &MPoly, v: Var, at: &[Scalar; NUM_VARS]) -> Result<(), TestCaseError> {
    let x0 = at.each_ref().map(Scalar::to_f64);
    let exact = p.diff(v).eval_f64(&x0);
    let central = |h: f64| {
        let (mut plus, mut minus) = (x0, x0);
        plus[v.index()] += h;
        minus[v.index()] -= h;
        (p.eval_f64(&plus) - p.eval_f64(&minus)) / (2.0 * h)
    };
    let floor = 1e-9 * p.coeff_l1_norm().max(1.0) * 7f64.powi(p.total_degree() as i32);
    let e1 = (central(1e-2) - exact).abs();
    let e2 = (central(5e-3) - exact).abs();
    prop_assert!(e2 <= 0.3 * e1 + floor, "errors {} then {}", e1, e2);
    Ok(())
}

/// Univariate polynomials over ℚ(√3): the resultant vanishes exactly when
/// Euclid's algorithm finds a non-constant gcd.
pub fn resultant_iff_gcd(a: &[Scalar], b: &[Scalar], shared: &Option<Scalar>) -> Result<(), TestCaseError> {
    let mut p = univariate(a);
    let mut q = univariate(b);
    if let Some(root) = shared {
        let factor = &MPoly::var(Var::X) - &MPoly::constant(root.clone());
        p = &p * &factor;
        q = &q * &factor;
    }
    if p.degree_in(Var::X) == 0 || q.degree_in(Var::X) == 0 {
        return Err(TestCaseError::reject("constant in x"));
    }
    let res = resultant(&p, &q, Var::X).unwrap();
    prop_assert!(res.is_constant());
    let common = gcd_degree(coeffs(&p), coeffs(&q));
    prop_assert_eq!(res.is_zero(), common > 0, "res {} gcd degree {}", res, common);
    if shared.is_some() {
        prop_assert!(res.is_zero());
    }
    Ok(())
}

/// A shared factor involving the eliminated variable forces a zero
/// resultant.
pub fn resultant_with_shared_factor(p: &MPoly, q: &MPoly, c: &MPoly) -> Result<(), TestCaseError> {
    if c.degree_in(Var::X) == 0 || p.is_zero() || q.is_zero() {
        return Err(TestCaseError::reject("degenerate"));
    }
    prop_assert!(resultant(&(p * c), &(q * c), Var::X).unwrap().is_zero());
    Ok(())
}

fn univariate(c: &[Scalar]) -> MPoly {
    MPoly::from_terms(c.iter().enumerate().map(|(k, s)| {
        let mut e = [0u32; NUM_VARS];
        e[Var::X.index()] = k as u32;
        (Monomial::from_exponents(&e), s.clone())
    }))
}

/// Coefficients in increasing degree.
fn coeffs(p: &MPoly) -> Vec<Scalar> {
    let d = p.degree_in(Var::X) as usize;
    let mut out = vec![Scalar::zero(); d + 1];
    for (m, c) in p.terms() {
        out[m.exponent(Var::X) as usize] = c.clone();
    }
    out
}

fn trim(mut v: Vec<Scalar>) -> Vec<Scalar> {
    while v.last().is_some_and(Scalar::is_zero) {
        v.pop();
    }
    v
}

fn remainder(mut a: Vec<Scalar>, b: &[Scalar]) -> Vec<Scalar> {
    let lead = b.last().and_then(Scalar::inverse).expect("nonzero divisor");
    while a.len() >= b.len() {
        let shift = a.len() - b.len();
        let f = &a[a.len() - 1] * &lead;
        for (k, bk) in b.iter().enumerate() {
            a[shift + k] = &a[shift + k] - &(&f * bk);
        }
        a.pop();
        a = trim(a);
    }
    a
}

fn gcd_degree(a: Vec<Scalar>, b: Vec<Scalar>) -> usize {
    let (mut a, mut b) = (trim(a), trim(b));
    while !b.is_empty() {
        let r = remainder(a, &b);
        a = b;
        b = r;
    }
    a.len().saturating_sub(1)
}
