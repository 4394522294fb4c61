//! Closed-form inverse and direct kinematics in double precision.
//!
//! Each leg constraint `|P - a_i - rho_i d_i|² = L²` is a monic quadratic
//! in `rho_i`, so the inverse problem splits into three independent
//! quadratics and has at most 2³ = 8 solutions (working modes).  The direct
//! problem is a three-sphere intersection: subtracting sphere equations
//! gives two radical planes whose line meets the third sphere in at most
//! two points (assembly modes).

use serde::Serialize;

use crate::robots::RobotModel;

pub type Vec3 = [f64; 3];

/// Discriminants with magnitude below `TANGENCY_EPS · max(1, L²)` count as
/// a double root.
pub const TANGENCY_EPS: f64 = 1e-9;
/// Joint values closer than this to a limit are outside the open interval.
pub const LIMIT_EPS: f64 = 1e-9;
// Relative threshold for treating the two radical planes as parallel.
const PARALLEL_EPS: f64 = 1e-12;

fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn sub(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

/// Which root of a leg quadratic: `rho = c ± sqrt(disc)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
    Double,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
            Branch::Double => 0.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LegRoot {
    pub rho: f64,
    pub branch: Branch,
}

/// Float view of a model, cached for the hot loops.
#[derive(Clone, Debug)]
pub struct NumericModel {
    pub bases: [Vec3; 3],
    pub axes: [Vec3; 3],
    pub link_length: f64,
    pub limits: (f64, f64),
}

impl NumericModel {
    pub fn new(m: &RobotModel) -> Self {
        NumericModel {
            bases: std::array::from_fn(|i| m.legs[i].base_f64()),
            axes: std::array::from_fn(|i| m.legs[i].axis_f64()),
            link_length: m.link_length_f64(),
            limits: m.limits_f64(),
        }
    }

    fn tangency_band(&self) -> f64 {
        TANGENCY_EPS * (self.link_length * self.link_length).max(1.0)
    }

    pub fn within_limits(&self, rho: f64) -> bool {
        rho > self.limits.0 + LIMIT_EPS && rho < self.limits.1 - LIMIT_EPS
    }

    /// Centre and discriminant of leg `i`'s quadratic:
    /// `rho = centre ± sqrt(disc)`.
    pub fn leg_quadratic(&self, i: usize, pose: &Vec3) -> (f64, f64) {
        let rel = sub(pose, &self.bases[i]);
        let centre = dot(&self.axes[i], &rel);
        let c = dot(&rel, &rel) - self.link_length * self.link_length;
        (centre, centre * centre - c)
    }

    pub fn leg_roots(&self, i: usize, pose: &Vec3) -> Vec<LegRoot> {
        let (centre, disc) = self.leg_quadratic(i, pose);
        if disc.abs() <= self.tangency_band() {
            vec![LegRoot { rho: centre, branch: Branch::Double }]
        } else if disc < 0.0 {
            Vec::new()
        } else {
            let s = disc.sqrt();
            vec![
                LegRoot { rho: centre + s, branch: Branch::Plus },
                LegRoot { rho: centre - s, branch: Branch::Minus },
            ]
        }
    }

    /// The root of leg `i` on a fixed branch, if the leg reaches `pose`.
    pub fn branch_root(&self, i: usize, pose: &Vec3, branch: Branch) -> Option<f64> {
        let (centre, disc) = self.leg_quadratic(i, pose);
        if disc < 0.0 {
            return None;
        }
        Some(centre + branch.sign() * disc.sqrt())
    }

    pub fn slider(&self, i: usize, rho: f64) -> Vec3 {
        let (a, d) = (&self.bases[i], &self.axes[i]);
        [a[0] + rho * d[0], a[1] + rho * d[1], a[2] + rho * d[2]]
    }

    /// `f_i(pose, rho)` for each leg.
    pub fn residuals(&self, pose: &Vec3, joints: &Vec3) -> Vec3 {
        std::array::from_fn(|i| {
            let d = sub(pose, &self.slider(i, joints[i]));
            dot(&d, &d) - self.link_length * self.link_length
        })
    }

    /// Residual tolerance `1e-9 · (1 + |P|² + L²)`.
    pub fn residual_bound(&self, pose: &Vec3) -> f64 {
        1e-9 * (1.0 + dot(pose, pose) + self.link_length * self.link_length)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IkSolution {
    pub joints: Vec3,
    pub branches: [Branch; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IkSolutionSet {
    pub pose: Vec3,
    pub solutions: Vec<IkSolution>,
    pub per_leg_root_counts: [usize; 3],
    pub limits_applied: bool,
}

impl IkSolutionSet {
    pub fn count(&self) -> usize {
        self.solutions.len()
    }
}

/// Why a direct-kinematics system has no isolated solutions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Degeneracy {
    /// Radical planes parallel and distinct: no solution.
    ParallelPlanes,
    /// Radical planes coincide: a solution curve, not enumerated.
    CoincidentPlanes,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DkSolutionSet {
    pub joints: Vec3,
    pub solutions: Vec<Vec3>,
    pub degenerate: Option<Degeneracy>,
    pub limits_applied: bool,
}

impl DkSolutionSet {
    pub fn count(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate.is_some()
    }
}

/// Real roots of leg `i` at `pose` (no joint limits).
pub fn ik_leg(m: &RobotModel, i: usize, pose: &Vec3) -> Vec<LegRoot> {
    NumericModel::new(m).leg_roots(i, pose)
}

pub fn ik(m: &RobotModel, pose: &Vec3, apply_limits: bool) -> IkSolutionSet {
    ik_numeric(&NumericModel::new(m), pose, apply_limits)
}

pub fn ik_numeric(nm: &NumericModel, pose: &Vec3, apply_limits: bool) -> IkSolutionSet {
    let per_leg: [Vec<LegRoot>; 3] = std::array::from_fn(|i| {
        let mut roots = nm.leg_roots(i, pose);
        if apply_limits {
            roots.retain(|r| nm.within_limits(r.rho));
        }
        roots
    });
    let mut solutions = Vec::with_capacity(8);
    for r0 in &per_leg[0] {
        for r1 in &per_leg[1] {
            for r2 in &per_leg[2] {
                solutions.push(IkSolution {
                    joints: [r0.rho, r1.rho, r2.rho],
                    branches: [r0.branch, r1.branch, r2.branch],
                });
            }
        }
    }
    IkSolutionSet {
        pose: *pose,
        solutions,
        per_leg_root_counts: per_leg.each_ref().map(Vec::len),
        limits_applied: apply_limits,
    }
}

/// Number of IK solutions without materializing them.
pub fn count_ik_numeric(nm: &NumericModel, pose: &Vec3, apply_limits: bool) -> usize {
    (0..3)
        .map(|i| {
            let roots = nm.leg_roots(i, pose);
            if apply_limits {
                roots.iter().filter(|r| nm.within_limits(r.rho)).count()
            } else {
                roots.len()
            }
        })
        .product()
}

pub fn count_ik(m: &RobotModel, pose: &Vec3, apply_limits: bool) -> usize {
    count_ik_numeric(&NumericModel::new(m), pose, apply_limits)
}

pub fn dk(m: &RobotModel, joints: &Vec3, apply_limits: bool) -> DkSolutionSet {
    dk_numeric(&NumericModel::new(m), joints, apply_limits)
}

pub fn dk_numeric(nm: &NumericModel, joints: &Vec3, apply_limits: bool) -> DkSolutionSet {
    let mut out = DkSolutionSet { joints: *joints, solutions: Vec::new(), degenerate: None, limits_applied: apply_limits };
    if apply_limits && !joints.iter().all(|&r| nm.within_limits(r)) {
        return out;
    }
    let centres: [Vec3; 3] = std::array::from_fn(|i| nm.slider(i, joints[i]));
    // f_i - f_3 = 0  <=>  n_i · P = c_i
    let n1 = sub(&centres[0], &centres[2]);
    let n2 = sub(&centres[1], &centres[2]);
    let sq = |v: &Vec3| dot(v, v);
    let c1 = 0.5 * (sq(&centres[0]) - sq(&centres[2]));
    let c2 = 0.5 * (sq(&centres[1]) - sq(&centres[2]));
    let u = cross(&n1, &n2);
    let scale = norm(&n1) * norm(&n2);
    if norm(&u) <= PARALLEL_EPS.max(f64::EPSILON) * scale.max(f64::MIN_POSITIVE) || scale == 0.0 {
        out.degenerate = Some(classify_parallel(&n1, c1, &n2, c2));
        return out;
    }
    let uu = dot(&u, &u);
    let a = cross(&n2, &u);
    let b = cross(&u, &n1);
    let p0: Vec3 = std::array::from_fn(|k| (c1 * a[k] + c2 * b[k]) / uu);
    let dir: Vec3 = u.map(|v| v / uu.sqrt());
    // |p0 + t·dir - B3|² = L²
    let w = sub(&p0, &centres[2]);
    let half_b = dot(&dir, &w);
    let c = dot(&w, &w) - nm.link_length * nm.link_length;
    let disc = half_b * half_b - c;
    let at = |t: f64| -> Vec3 { std::array::from_fn(|k| p0[k] + t * dir[k]) };
    if disc.abs() <= nm.tangency_band() {
        out.solutions.push(at(-half_b));
    } else if disc > 0.0 {
        let s = disc.sqrt();
        out.solutions.push(at(-half_b + s));
        out.solutions.push(at(-half_b - s));
    }
    out
}

fn classify_parallel(n1: &Vec3, c1: f64, n2: &Vec3, c2: f64) -> Degeneracy {
    let tol = 1e-9;
    let (l1, l2) = (norm(n1), norm(n2));
    let consistent = match (l1 > tol, l2 > tol) {
        // Both planes exist: same plane iff the normalized offsets agree.
        (true, true) => {
            let s = dot(n1, n2).signum();
            (c1 / l1 - s * c2 / l2).abs() <= tol * (1.0 + (c1 / l1).abs())
        }
        (true, false) => c2.abs() <= tol,
        (false, true) => c1.abs() <= tol,
        (false, false) => c1.abs() <= tol && c2.abs() <= tol,
    };
    if consistent {
        Degeneracy::CoincidentPlanes
    } else {
        Degeneracy::ParallelPlanes
    }
}

pub fn count_dk(m: &RobotModel, joints: &Vec3, apply_limits: bool) -> usize {
    dk(m, joints, apply_limits).count()
}
