use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::monomial::{Monomial, Var, NUM_VARS};
use super::scalar::Scalar;

/// Sparse multivariate polynomial over ℚ(√3) in the seven fixed variables.
///
/// Terms are kept sorted by decreasing graded-lex monomial with no zero
/// coefficients, so `==` is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MPoly {
    terms: Vec<(Monomial, Scalar)>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::term(c, Monomial::ONE)
    }

    pub fn int(n: i64) -> Self {
        Self::constant(Scalar::from_int(n))
    }

    pub fn var(v: Var) -> Self {
        Self::term(Scalar::one(), Monomial::var(v, 1))
    }

    pub fn term(c: Scalar, m: Monomial) -> Self {
        if c.is_zero() {
            MPoly::zero()
        } else {
            MPoly { terms: vec![(m, c)] }
        }
    }

    /// Builds a canonical polynomial from arbitrary (possibly repeated or
    /// zero) terms.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Scalar)>>(terms: I) -> Self {
        let mut acc: HashMap<Monomial, Scalar> = HashMap::new();
        for (m, c) in terms {
            match acc.get_mut(&m) {
                Some(slot) => *slot += &c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Self::from_map(acc)
    }

    fn from_map(acc: HashMap<Monomial, Scalar>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by_key(|t| std::cmp::Reverse(t.0));
        MPoly { terms }
    }

    fn from_sorted_unchecked(terms: Vec<(Monomial, Scalar)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        MPoly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn leading_term(&self) -> Option<(Monomial, &Scalar)> {
        self.terms.first().map(|(m, c)| (*m, c))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.total_degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn contains(&self, v: Var) -> bool {
        self.terms.iter().any(|(m, _)| m.exponent(v) > 0)
    }

    pub fn variables(&self) -> Vec<Var> {
        Var::ALL.into_iter().filter(|&v| self.contains(v)).collect()
    }

    /// Coefficient of `m` (zero when absent).
    pub fn coeff(&self, m: Monomial) -> Scalar {
        self.terms
            .binary_search_by(|(tm, _)| m.cmp(tm))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_default()
    }

    pub fn scale(&self, c: &Scalar) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly::from_sorted_unchecked(self.terms.iter().map(|(m, a)| (*m, a * c)).collect())
    }

    pub fn mul_monomial(&self, mono: Monomial) -> MPoly {
        MPoly::from_sorted_unchecked(self.terms.iter().map(|(m, a)| (m.mul(mono), a.clone())).collect())
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut acc = MPoly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative.
    pub fn diff(&self, v: Var) -> MPoly {
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exponent(v);
            (e > 0).then(|| {
                let lowered = m.div(Monomial::var(v, 1)).expect("exponent checked");
                (lowered, c * &Scalar::from_int(e as i64))
            })
        });
        MPoly::from_terms(terms)
    }

    /// Coefficients with respect to `v`: element `k` multiplies `v^k`.
    pub fn coefficients_in(&self, v: Var) -> Vec<MPoly> {
        let deg = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Monomial, Scalar)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            buckets[m.exponent(v) as usize].push((m.without(v), c.clone()));
        }
        buckets.into_iter().map(MPoly::from_terms).collect()
    }

    /// Exact substitution of a constant for one variable.
    pub fn substitute(&self, v: Var, value: &Scalar) -> MPoly {
        let deg = self.degree_in(v);
        let powers: Vec<Scalar> = (0..=deg).scan(Scalar::one(), |acc, i| {
            let cur = acc.clone();
            if i < deg {
                *acc = &*acc * value;
            }
            Some(cur)
        }).collect();
        MPoly::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| (m.without(v), c * &powers[m.exponent(v) as usize])),
        )
    }

    /// Exact evaluation; `point` is indexed by [`Var::index`].
    pub fn eval_exact(&self, point: &[Scalar; NUM_VARS]) -> Scalar {
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = &t * &point[v].pow(e);
                }
            }
            acc += &t;
        }
        acc
    }

    /// Floating-point evaluation with √3 expanded numerically.
    pub fn eval_f64(&self, point: &[f64; NUM_VARS]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let e = m.exponents();
                let mono: f64 = (0..NUM_VARS).map(|v| point[v].powi(e[v] as i32)).product();
                c.to_f64() * mono
            })
            .sum()
    }

    /// Sum of absolute values of the (float) coefficients.
    pub fn coeff_l1_norm(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.to_f64().abs()).sum()
    }

    /// Residual of `self` at `point`, normalized by the coefficient 1-norm
    /// and `max(1, |point|)^degree`.  Scale-free, so comparable across
    /// polynomials with very different coefficient sizes.
    pub fn scaled_residual(&self, point: &[f64; NUM_VARS]) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let vars = self.variables();
        let norm_sq: f64 = vars.iter().map(|v| point[v.index()].powi(2)).sum();
        let radius = norm_sq.sqrt().max(1.0);
        let denom = self.coeff_l1_norm() * radius.powi(self.total_degree() as i32);
        self.eval_f64(point).abs() / denom
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter().map(|(m, _)| *m);
        match it.next() {
            Some(first) => it.fold(first, Monomial::gcd),
            None => Monomial::ONE,
        }
    }

    /// Positive rational `c` such that `self / c` has coprime integer
    /// coefficients (in both the rational and √3 parts).
    pub fn integer_content(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::one();
        }
        let mut den = BigInt::one();
        let mut num = BigInt::zero();
        for (_, c) in &self.terms {
            den = den.lcm(&c.denominator_lcm());
        }
        for (_, c) in &self.terms {
            for part in [c.rat_part(), c.sqrt3_part()] {
                if !part.is_zero() {
                    let scaled = part.numer() * (&den / part.denom());
                    num = num.gcd(&scaled);
                }
            }
        }
        BigRational::new(num.abs(), den)
    }

    /// `self` divided by its positive integer content.
    pub fn primitive_part(&self) -> MPoly {
        let c = self.integer_content();
        if c.is_one() {
            return self.clone();
        }
        let inv = Scalar::from_rational(c.recip());
        self.scale(&inv)
    }

    /// Exact division; `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &MPoly) -> Option<MPoly> {
        let (lead_m, lead_c) = divisor.leading_term()?;
        if self.is_zero() {
            return Some(MPoly::zero());
        }
        if divisor.terms.len() == 1 {
            let inv = lead_c.inverse()?;
            let mut out = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                out.push((m.div(lead_m)?, c * &inv));
            }
            return Some(MPoly::from_sorted_unchecked(out));
        }
        let inv = lead_c.inverse()?;
        let mut rem: BTreeMap<Monomial, Scalar> = self.terms.iter().cloned().collect();
        let mut quotient = Vec::new();
        while let Some((&m, _)) = rem.iter().next_back() {
            let c = rem.remove(&m).expect("present");
            let qm = m.div(lead_m)?;
            let qc = &c * &inv;
            for (dm, dc) in &divisor.terms[1..] {
                let key = dm.mul(qm);
                let delta = dc * &qc;
                match rem.get_mut(&key) {
                    Some(slot) => {
                        *slot -= &delta;
                        if slot.is_zero() {
                            rem.remove(&key);
                        }
                    }
                    None => {
                        rem.insert(key, -delta);
                    }
                }
            }
            quotient.push((qm, qc));
        }
        Some(MPoly::from_sorted_unchecked(quotient))
    }

    /// Square root of `self / lc(self)` when that monic polynomial is a
    /// perfect square.
    pub fn monic_sqrt(&self) -> Option<MPoly> {
        let (lead_m, lead_c) = self.leading_term()?;
        if lead_m.exponents().iter().any(|e| e % 2 == 1) {
            return None;
        }
        let monic = self.scale(&lead_c.inverse()?);
        let min_degree = monic.terms.iter().map(|(m, _)| m.total_degree()).min().unwrap_or(0);
        let mut half = [0; NUM_VARS];
        for (h, e) in half.iter_mut().zip(lead_m.exponents()) {
            *h = e / 2;
        }
        let root_lead = Monomial::from_exponents(&half);
        let mut root = MPoly::term(Scalar::one(), root_lead);
        let mut rem = &monic - &(&root * &root);
        let half_scalar = Scalar::ratio(1, 2);
        while let Some((m, c)) = rem.leading_term() {
            let next_m = m.div(root_lead)?;
            if 2 * next_m.total_degree() < min_degree {
                return None;
            }
            let next = MPoly::term(c * &half_scalar, next_m);
            // rem -= 2·root·next + next²
            let twice_root = root.scale(&Scalar::from_int(2));
            rem = &rem - &(&(&twice_root + &next) * &next);
            root = &root + &next;
        }
        Some(root)
    }
}

fn merge(a: &MPoly, b: &MPoly, negate_b: bool) -> MPoly {
    let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
    let (mut i, mut j) = (0, 0);
    let sign_b = |c: &Scalar| if negate_b { -c } else { c.clone() };
    while i < a.terms.len() && j < b.terms.len() {
        let (ma, ca) = &a.terms[i];
        let (mb, cb) = &b.terms[j];
        match ma.cmp(mb) {
            std::cmp::Ordering::Greater => {
                out.push((*ma, ca.clone()));
                i += 1;
            }
            std::cmp::Ordering::Less => {
                out.push((*mb, sign_b(cb)));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let c = if negate_b { ca - cb } else { ca + cb };
                if !c.is_zero() {
                    out.push((*ma, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a.terms[i..].iter().cloned());
    out.extend(b.terms[j..].iter().map(|(m, c)| (*m, sign_b(c))));
    MPoly::from_sorted_unchecked(out)
}

impl<'a> Add<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        merge(self, rhs, false)
    }
}

impl<'a> Sub<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        merge(self, rhs, true)
    }
}

impl<'a> Mul<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        if self.is_zero() || rhs.is_zero() {
            return MPoly::zero();
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return rhs.mul_monomial(*m).scale(c);
        }
        if rhs.terms.len() == 1 {
            let (m, c) = &rhs.terms[0];
            return self.mul_monomial(*m).scale(c);
        }
        let mut acc: HashMap<Monomial, Scalar> =
            HashMap::with_capacity(self.terms.len().max(rhs.terms.len()) * 2);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let prod = ca * cb;
                match acc.get_mut(&ma.mul(*mb)) {
                    Some(slot) => *slot += &prod,
                    None => {
                        acc.insert(ma.mul(*mb), prod);
                    }
                }
            }
        }
        MPoly::from_map(acc)
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly::from_sorted_unchecked(self.terms.iter().map(|(m, c)| (*m, -c)).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for MPoly {
            type Output = MPoly;
            fn $f(self, rhs: MPoly) -> MPoly {
                (&self).$f(&rhs)
            }
        }
        impl<'a> $tr<&'a MPoly> for MPoly {
            type Output = MPoly;
            fn $f(self, rhs: &MPoly) -> MPoly {
                (&self).$f(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

impl From<Var> for MPoly {
    fn from(v: Var) -> Self {
        MPoly::var(v)
    }
}

impl From<Scalar> for MPoly {
    fn from(c: Scalar) -> Self {
        MPoly::constant(c)
    }
}

impl From<i64> for MPoly {
    fn from(n: i64) -> Self {
        MPoly::int(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(var: Var) -> MPoly {
        MPoly::var(var)
    }

    #[test]
    fn add_cancels_and_merges() {
        let x = v(Var::X);
        let p = &x + &MPoly::one();
        let q = &x - &MPoly::one();
        assert_eq!(&p + &q, x.scale(&Scalar::from_int(2)));
        let s3y = v(Var::Y).scale(&Scalar::sqrt3());
        assert_eq!(&s3y + &s3y, v(Var::Y).scale(&Scalar::sqrt3_times(2, 1)));
        assert_eq!(&p + &MPoly::zero(), p);
    }

    #[test]
    fn products() {
        let (x, y) = (v(Var::X), v(Var::Y));
        assert_eq!(&(&x + &y) * &(&x - &y), &(&x * &x) - &(&y * &y));
        let s3 = MPoly::constant(Scalar::sqrt3());
        assert_eq!(&s3 * &s3, MPoly::int(3));
        let d = &x - &v(Var::Rho1);
        let expected = &(&(&x * &x) - &(&x * &v(Var::Rho1)).scale(&Scalar::from_int(2)))
            + &(&v(Var::Rho1) * &v(Var::Rho1));
        assert_eq!(&d * &d, expected);
    }

    #[test]
    fn derivatives() {
        let (x, y, z, r1, l) = (v(Var::X), v(Var::Y), v(Var::Z), v(Var::Rho1), v(Var::L));
        let d = &x - &r1;
        let f = &(&(&(&d * &d) + &(&y * &y)) + &(&z * &z)) - &(&l * &l);
        assert_eq!(f.diff(Var::X), d.scale(&Scalar::from_int(2)));
        assert_eq!(f.diff(Var::Rho1), d.scale(&Scalar::from_int(-2)));
        assert!((&x * &x).diff(Var::Y).is_zero());
    }

    #[test]
    fn exact_division() {
        let (x, y) = (v(Var::X), v(Var::Y));
        let a = &(&x * &x) + &(&y * &MPoly::int(3));
        let b = &(&x * &y) - &MPoly::constant(Scalar::sqrt3());
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&b), Some(a.clone()));
        assert_eq!(prod.div_exact(&a), Some(b));
        assert_eq!((&a + &MPoly::one()).div_exact(&x), None);
    }

    #[test]
    fn monic_sqrt_detects_squares() {
        let (x, z) = (v(Var::X), v(Var::Z));
        let base = &(&(&z * &z) - &MPoly::int(4)) + &x.scale(&Scalar::ratio(1, 3));
        let sq = (&base * &base).scale(&Scalar::from_int(-6));
        let root = sq.monic_sqrt().unwrap();
        assert!(root == base || root == -&base);
        assert!((&sq + &MPoly::one()).monic_sqrt().is_none());
        assert!(x.monic_sqrt().is_none());
    }

    #[test]
    fn content_and_monomial_factor() {
        let (x, z) = (v(Var::X), v(Var::Z));
        let p = (&(&x * &z) + &(&z * &z)).scale(&Scalar::ratio(6, 5));
        assert_eq!(p.integer_content(), BigRational::new(6.into(), 5.into()));
        assert_eq!(p.monomial_content(), Monomial::var(Var::Z, 1));
        let mixed = MPoly::constant("4+6*sqrt3".parse().unwrap());
        assert_eq!(mixed.primitive_part(), MPoly::constant("2+3*sqrt3".parse().unwrap()));
    }

    #[test]
    fn substitution_and_coefficients() {
        let (x, l) = (v(Var::X), v(Var::L));
        let p = &(&x * &(&l * &l)) + &l;
        assert_eq!(p.substitute(Var::L, &Scalar::from_int(2)), &x.scale(&Scalar::from_int(4)) + &MPoly::int(2));
        let cs = p.coefficients_in(Var::L);
        assert_eq!(cs, vec![MPoly::zero(), MPoly::one(), x]);
    }
}
