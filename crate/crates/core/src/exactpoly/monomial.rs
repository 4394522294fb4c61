use std::fmt;

/// The seven symbols every polynomial in this crate ranges over, in the
/// global order used for sorting and serialization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
    Z,
    Rho1,
    Rho2,
    Rho3,
    L,
}

pub const NUM_VARS: usize = 7;

impl Var {
    pub const ALL: [Var; NUM_VARS] = [Var::X, Var::Y, Var::Z, Var::Rho1, Var::Rho2, Var::Rho3, Var::L];
    pub const POSE: [Var; 3] = [Var::X, Var::Y, Var::Z];
    pub const JOINTS: [Var; 3] = [Var::Rho1, Var::Rho2, Var::Rho3];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Var> {
        Self::ALL.get(i).copied()
    }

    pub fn joint(leg: usize) -> Var {
        Self::JOINTS[leg]
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::Z => "z",
            Var::Rho1 => "rho1",
            Var::Rho2 => "rho2",
            Var::Rho3 => "rho3",
            Var::L => "L",
        }
    }

    pub fn from_name(s: &str) -> Option<Var> {
        Self::ALL.iter().copied().find(|v| v.name() == s)
    }

    // Factors inside a printed term follow joints-then-pose, e.g. `rho1*z`.
    pub(crate) const DISPLAY_ORDER: [Var; NUM_VARS] =
        [Var::Rho1, Var::Rho2, Var::Rho3, Var::X, Var::Y, Var::Z, Var::L];
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

const FIELD_BITS: u32 = 8;
const FIELD_MASK: u64 = 0xff;
const TOTAL_SHIFT: u32 = 56;

/// Exponent vector packed into a `u64`: total degree in the top byte, then
/// one byte per variable with `x` most significant.  Integer comparison of
/// the packed words is graded-lexicographic order; multiplication is
/// addition of the words.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(u64);

pub const MAX_TOTAL_DEGREE: u32 = 255;

fn shift(v: usize) -> u32 {
    (NUM_VARS - 1 - v) as u32 * FIELD_BITS
}

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn from_exponents(exps: &[u32; NUM_VARS]) -> Monomial {
        let total: u32 = exps.iter().sum();
        assert!(total <= MAX_TOTAL_DEGREE, "monomial degree {total} exceeds {MAX_TOTAL_DEGREE}");
        let mut w = (total as u64) << TOTAL_SHIFT;
        for (v, &e) in exps.iter().enumerate() {
            w |= (e as u64) << shift(v);
        }
        Monomial(w)
    }

    pub fn var(v: Var, power: u32) -> Monomial {
        let mut e = [0; NUM_VARS];
        e[v.index()] = power;
        Self::from_exponents(&e)
    }

    pub fn exponent(self, v: Var) -> u32 {
        ((self.0 >> shift(v.index())) & FIELD_MASK) as u32
    }

    pub fn exponents(self) -> [u32; NUM_VARS] {
        let mut e = [0; NUM_VARS];
        for (v, slot) in e.iter_mut().enumerate() {
            *slot = ((self.0 >> shift(v)) & FIELD_MASK) as u32;
        }
        e
    }

    pub fn total_degree(self) -> u32 {
        (self.0 >> TOTAL_SHIFT) as u32
    }

    pub fn is_one(self) -> bool {
        self.0 == 0
    }

    #[allow(clippy::should_implement_trait)] // checked, unlike `Mul`
    pub fn mul(self, other: Monomial) -> Monomial {
        assert!(
            self.total_degree() + other.total_degree() <= MAX_TOTAL_DEGREE,
            "monomial degree overflow"
        );
        Monomial(self.0 + other.0)
    }

    pub fn divides(self, other: Monomial) -> bool {
        (0..NUM_VARS).all(|v| {
            let s = shift(v);
            (self.0 >> s) & FIELD_MASK <= (other.0 >> s) & FIELD_MASK
        })
    }

    /// `self / other`, if `other` divides `self`.
    #[allow(clippy::should_implement_trait)] // partial, so not `Div`
    pub fn div(self, other: Monomial) -> Option<Monomial> {
        other.divides(self).then(|| Monomial(self.0 - other.0))
    }

    pub fn gcd(self, other: Monomial) -> Monomial {
        let a = self.exponents();
        let b = other.exponents();
        let mut e = [0; NUM_VARS];
        for v in 0..NUM_VARS {
            e[v] = a[v].min(b[v]);
        }
        Monomial::from_exponents(&e)
    }

    /// Drops `v` from the monomial.
    pub fn without(self, v: Var) -> Monomial {
        let e = self.exponent(v) as u64;
        Monomial(self.0 - (e << shift(v.index())) - (e << TOTAL_SHIFT))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exponents())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in Var::DISPLAY_ORDER {
            let e = self.exponent(v);
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}
