//! Exact scalars in ℚ(√3), stored as `rat + sqrt3·√3`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::PolyError;

pub const SQRT3_F64: f64 = 1.732_050_807_568_877_2;

/// An element `rat + sqrt3·√3` of ℚ(√3).
///
/// Both parts are always reduced fractions, so structural equality is
/// value equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    rat: BigRational,
    sqrt3: BigRational,
}

impl Scalar {
    pub fn new(rat: BigRational, sqrt3: BigRational) -> Self {
        Scalar { rat, sqrt3 }
    }

    pub fn from_rational(rat: BigRational) -> Self {
        Scalar { rat, sqrt3: BigRational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_rational(BigRational::from_integer(n))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(num.into(), den.into()))
    }

    /// `c·√3` for a rational `c = num/den`.
    pub fn sqrt3_times(num: i64, den: i64) -> Self {
        Scalar { rat: BigRational::zero(), sqrt3: BigRational::new(num.into(), den.into()) }
    }

    pub fn sqrt3() -> Self {
        Self::sqrt3_times(1, 1)
    }

    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn rat_part(&self) -> &BigRational {
        &self.rat
    }

    pub fn sqrt3_part(&self) -> &BigRational {
        &self.sqrt3
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.sqrt3.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.rat.is_one() && self.sqrt3.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.sqrt3.is_zero()
    }

    /// Sign of the real number represented, exact.
    pub fn signum(&self) -> i32 {
        let sa = sign_of(&self.rat);
        let sb = sign_of(&self.sqrt3);
        if sa == sb || sb == 0 {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        // Opposite signs: compare a² with 3b².
        let a2 = &self.rat * &self.rat;
        let b2 = &self.sqrt3 * &self.sqrt3 * BigRational::from_integer(3.into());
        if a2 > b2 {
            sa
        } else {
            sb
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.rat) + ratio_to_f64(&self.sqrt3) * SQRT3_F64
    }

    /// `a - b√3`.
    pub fn conjugate(&self) -> Self {
        Scalar { rat: self.rat.clone(), sqrt3: -self.sqrt3.clone() }
    }

    /// Field norm `a² - 3b²`.
    pub fn norm(&self) -> BigRational {
        &self.rat * &self.rat - &self.sqrt3 * &self.sqrt3 * BigRational::from_integer(3.into())
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(Scalar { rat: &self.rat / &n, sqrt3: -(&self.sqrt3 / &n) })
    }

    pub fn scale_rational(&self, c: &BigRational) -> Self {
        Scalar { rat: &self.rat * c, sqrt3: &self.sqrt3 * c }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Scalar::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Square root inside ℚ(√3), when one exists.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        if self.is_rational() {
            if let Some(r) = rational_sqrt(&self.rat) {
                return Some(Scalar::from_rational(r));
            }
            // c = 3·t² has root t·√3.
            let third = &self.rat / BigRational::from_integer(3.into());
            return rational_sqrt(&third).map(|t| Scalar { rat: BigRational::zero(), sqrt3: t });
        }
        // (p + q√3)² = p² + 3q² + 2pq√3; p² is a root of
        // u² - a·u + 3b²/4 = 0 with u = p².
        let a = &self.rat;
        let b = &self.sqrt3;
        let disc = a * a - b * b * BigRational::new(3.into(), 1.into());
        let root = rational_sqrt(&disc)?;
        let two = BigRational::from_integer(2.into());
        for u in [(a + &root) / &two, (a - &root) / &two] {
            if let Some(p) = rational_sqrt(&u) {
                if p.is_zero() {
                    continue;
                }
                let q = b / (&two * &p);
                let cand = Scalar { rat: p, sqrt3: q };
                if &(&cand * &cand) == self {
                    return Some(cand);
                }
            }
        }
        None
    }

    /// Least common multiple of the two denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.rat.denom().lcm(self.sqrt3.denom())
    }

    /// Format as `p/q`, `r/s*sqrt3` or `p/q+r/s*sqrt3`.
    pub fn to_exact_string(&self) -> String {
        self.to_string()
    }
}

fn sign_of(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() {
            return n / d;
        }
    }
    r.to_f64().unwrap_or(f64::NAN)
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

fn fmt_ratio(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.rat.is_zero(), self.sqrt3.is_zero()) {
            (_, true) => write!(f, "{}", fmt_ratio(&self.rat)),
            (true, false) => write!(f, "{}*sqrt3", fmt_ratio(&self.sqrt3)),
            (false, false) => {
                let sep = if self.sqrt3.is_negative() { "" } else { "+" };
                write!(f, "{}{}{}*sqrt3", fmt_ratio(&self.rat), sep, fmt_ratio(&self.sqrt3))
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

fn parse_ratio(s: &str) -> Result<BigRational, PolyError> {
    let s = s.trim();
    let bad = || PolyError::Parse(format!("invalid rational `{s}`"));
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.trim_start().starts_with('-');
        let int_part = if int.is_empty() || int == "-" || int == "+" {
            BigInt::zero()
        } else {
            BigInt::from_str(int).map_err(|_| bad())?
        };
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac_part = BigInt::from_str(frac).map_err(|_| bad())?;
        let magnitude = int_part.abs() * &scale + frac_part;
        let num = if negative { -magnitude } else { magnitude };
        return Ok(BigRational::new(num, scale));
    }
    BigInt::from_str(s).map(BigRational::from_integer).map_err(|_| bad())
}

impl FromStr for Scalar {
    type Err = PolyError;

    /// Accepts `p`, `p/q`, decimals, `r/s*sqrt3`, `sqrt3` and
    /// `p/q+r/s*sqrt3` (or with `-`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(PolyError::Parse("empty scalar".into()));
        }
        let Some(body) = s.strip_suffix("sqrt3") else {
            return Ok(Scalar::from_rational(parse_ratio(&s)?));
        };
        // Split off the rational part at the last top-level sign.
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .last();
        let (rat_str, coef_str) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("", body),
        };
        let coef_str = coef_str.strip_suffix('*').unwrap_or(coef_str);
        let sqrt3 = match coef_str {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            c => parse_ratio(c)?,
        };
        let rat = if rat_str.is_empty() { BigRational::zero() } else { parse_ratio(rat_str)? };
        Ok(Scalar { rat, sqrt3 })
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar { rat: &self.rat + &rhs.rat, sqrt3: &self.sqrt3 + &rhs.sqrt3 }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar { rat: &self.rat - &rhs.rat, sqrt3: &self.sqrt3 - &rhs.sqrt3 }
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.sqrt3.is_zero() && rhs.sqrt3.is_zero() {
            return Scalar::from_rational(&self.rat * &rhs.rat);
        }
        let three = BigRational::from_integer(3.into());
        Scalar {
            rat: &self.rat * &rhs.rat + &self.sqrt3 * &rhs.sqrt3 * three,
            sqrt3: &self.rat * &rhs.sqrt3 + &self.sqrt3 * &rhs.rat,
        }
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    /// Panics on division by zero, like integer division.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Scalar) -> Scalar {
        let inv = rhs.inverse().expect("division by zero scalar");
        self * &inv
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { rat: -self.rat, sqrt3: -self.sqrt3 }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { rat: -&self.rat, sqrt3: -&self.sqrt3 }
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.rat += &rhs.rat;
        if !rhs.sqrt3.is_zero() {
            self.sqrt3 += &rhs.sqrt3;
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.rat -= &rhs.rat;
        if !rhs.sqrt3.is_zero() {
            self.sqrt3 -= &rhs.sqrt3;
        }
    }
}
