use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::monomial::{Var, NUM_VARS};
use super::poly::MPoly;

/// Which variable triple `per_var_degrees` refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarGroup {
    Pose,
    Joints,
}

/// Shape statistics of a polynomial, in the columns of the comparison
/// table: total degree, per-variable degrees, term count, and coefficient
/// bit size.
///
/// `coeff_bitsize` is the largest bit length among the integer
/// coefficients obtained by multiplying through by the common denominator
/// (both the rational and the √3 component count).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyStats {
    pub total_degree: u32,
    pub per_var_degrees: [u32; 3],
    pub var_group: VarGroup,
    pub num_terms: usize,
    pub coeff_bitsize: u64,
    pub all_degrees: [u32; NUM_VARS],
}

pub const BITSIZE_DEFINITION: &str =
    "max bit length of |integer coefficient| after multiplying by the common denominator";

/// The triple defaults to (x, y, z); polynomials in joint variables only
/// report (rho1, rho2, rho3).
pub fn poly_stats(p: &MPoly) -> PolyStats {
    let has_pose = Var::POSE.iter().any(|&v| p.contains(v));
    let has_joints = Var::JOINTS.iter().any(|&v| p.contains(v));
    let group = if has_joints && !has_pose { VarGroup::Joints } else { VarGroup::Pose };
    poly_stats_for(p, group)
}

pub fn poly_stats_for(p: &MPoly, group: VarGroup) -> PolyStats {
    let vars = match group {
        VarGroup::Pose => Var::POSE,
        VarGroup::Joints => Var::JOINTS,
    };
    let mut all = [0; NUM_VARS];
    for v in Var::ALL {
        all[v.index()] = p.degree_in(v);
    }
    PolyStats {
        total_degree: p.total_degree(),
        per_var_degrees: vars.map(|v| all[v.index()]),
        var_group: group,
        num_terms: p.num_terms(),
        coeff_bitsize: coeff_bitsize(p),
        all_degrees: all,
    }
}

fn coeff_bitsize(p: &MPoly) -> u64 {
    let mut den = BigInt::one();
    for (_, c) in p.terms() {
        den = den.lcm(&c.denominator_lcm());
    }
    let mut bits = 0;
    for (_, c) in p.terms() {
        for part in [c.rat_part(), c.sqrt3_part()] {
            if part.is_zero() {
                continue;
            }
            let scaled = (part.numer() * (&den / part.denom())).abs();
            bits = bits.max(scaled.bits());
        }
    }
    bits
}
