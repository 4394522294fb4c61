//! Jacobians of the constraint system, their determinants, and projection
//! of the singular loci into the workspace or the joint space by a cascade
//! of Sylvester resultants.
//!
//! Differentiating `f(P, rho) = 0` in time gives `A·t + B·q̇ = 0` with
//! `A = ∂f/∂(x,y,z)` (parallel Jacobian) and `B = ∂f/∂rho` (serial
//! Jacobian, diagonal for this family).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::exactpoly::{
    mat3_det, poly_stats_for, resultant, MPoly, Mat3, Monomial, PolyStats, Scalar, Var, VarGroup, NUM_VARS,
};
use crate::kinematics::{Branch, NumericModel, Vec3};
use crate::robots::{constraint_system, constraint_system_numeric, RobotModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SingularityKind {
    Parallel,
    Serial,
}

impl SingularityKind {
    pub fn name(self) -> &'static str {
        match self {
            SingularityKind::Parallel => "parallel",
            SingularityKind::Serial => "serial",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Workspace,
    Jointspace,
}

impl Space {
    pub fn name(self) -> &'static str {
        match self {
            Space::Workspace => "workspace",
            Space::Jointspace => "jointspace",
        }
    }

    pub fn var_group(self) -> VarGroup {
        match self {
            Space::Workspace => VarGroup::Pose,
            Space::Jointspace => VarGroup::Joints,
        }
    }

    /// Variables removed when projecting onto this space, in elimination order.
    pub fn eliminated(self) -> [Var; 3] {
        match self {
            Space::Workspace => Var::JOINTS,
            Space::Jointspace => Var::POSE,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SingularityError {
    #[error("cannot project the zero polynomial")]
    ZeroInput,
    #[error("elimination of {var} produced the zero polynomial (the input shares a factor with {pivot})")]
    ZeroIntermediate { var: Var, pivot: String },
    #[error("{var} occurs in the singularity polynomial but in no remaining constraint")]
    Stalled { var: Var },
    #[error("found only {found} of {requested} singular configurations within the iteration budget")]
    InsufficientSamples { requested: usize, found: usize, samples: Vec<SingularConfig> },
}

/// Parallel (`A`) and serial (`B`) Jacobians of the constraint system.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobianPair {
    pub parallel: Mat3,
    pub serial: Mat3,
}

pub fn jacobians(m: &RobotModel) -> JacobianPair {
    let f = constraint_system(m);
    JacobianPair {
        parallel: std::array::from_fn(|i| std::array::from_fn(|k| f[i].diff(Var::POSE[k]))),
        serial: std::array::from_fn(|i| std::array::from_fn(|j| f[i].diff(Var::joint(j)))),
    }
}

/// `det(A)`, rows ordered by leg, columns by x, y, z.
pub fn parallel_det(m: &RobotModel) -> MPoly {
    mat3_det(&jacobians(m).parallel)
}

/// `det(B)`.
pub fn serial_det(m: &RobotModel) -> MPoly {
    mat3_det(&jacobians(m).serial)
}

pub fn singularity_det(m: &RobotModel, kind: SingularityKind) -> MPoly {
    match kind {
        SingularityKind::Parallel => parallel_det(m),
        SingularityKind::Serial => serial_det(m),
    }
}

/// One resultant step of a projection.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EliminationStep {
    pub var: String,
    pub pivot: String,
    /// Degree of the singularity polynomial in `var` before the step.
    pub target_degree: u32,
    pub pivot_degree: u32,
    /// Constraints rewritten in this step besides the singularity polynomial.
    pub constraints_rewritten: usize,
    pub content_removed: String,
    pub monomial_removed: String,
    pub square_roots_taken: u32,
    pub total_degree_after: u32,
    pub terms_after: usize,
}

/// A singularity locus projected onto pose or joint coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectedSurface {
    pub space: Space,
    pub poly: MPoly,
    pub stats: PolyStats,
    pub elimination_trace: Vec<EliminationStep>,
    pub extraneous_factors_removed: Vec<ExtraneousFactor>,
    pub link_length: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtraneousFactor {
    pub factor: String,
    pub multiplicity: u32,
}

#[derive(Clone, Debug)]
struct Equation {
    poly: MPoly,
    label: String,
    from_target: bool,
}

/// Outcome of [`reduce`]: the reduced polynomial plus what was removed.
struct Reduction {
    poly: MPoly,
    content: Scalar,
    monomial: Monomial,
    square_roots: u32,
}

/// Zero-set preserving normalization applied after every resultant:
/// divide by the positive integer content, shrink the common monomial
/// factor to its square-free support, and replace a perfect-square
/// cofactor by its root.
fn reduce(p: &MPoly) -> Reduction {
    let content = p.integer_content();
    let prim = p.primitive_part();
    let mono = prim.monomial_content();
    let mut exps = mono.exponents();
    for e in exps.iter_mut() {
        *e = (*e).min(1);
    }
    let support = Monomial::from_exponents(&exps);
    let mut cofactor = prim.div_exact(&MPoly::term(Scalar::one(), mono)).expect("monomial content divides");
    let mut square_roots = 0;
    while !cofactor.is_constant() {
        match cofactor.monic_sqrt() {
            Some(root) => {
                cofactor = root.primitive_part();
                square_roots += 1;
            }
            None => break,
        }
    }
    if square_roots > 0 && cofactor.is_constant() {
        cofactor = MPoly::one();
    }
    let removed = mono.div(support).expect("support divides content");
    Reduction {
        poly: cofactor.mul_monomial(support),
        content: Scalar::from_rational(content),
        monomial: removed,
        square_roots,
    }
}

fn elimination_system(m: &RobotModel, space: Space) -> Vec<Equation> {
    let [f1, f2, f3] = constraint_system_numeric(m);
    let eq = |poly, label: &str| Equation { poly, label: label.to_string(), from_target: false };
    match space {
        Space::Workspace => vec![eq(f1, "f1"), eq(f2, "f2"), eq(f3, "f3")],
        // Radical planes keep x, y, z linear in the first two equations.
        Space::Jointspace => vec![eq(&f1 - &f3, "f1-f3"), eq(&f2 - &f3, "f2-f3"), eq(f3, "f3")],
    }
}

/// Projects the zero set of `g ∧ f = 0` onto `space` by successive
/// resultants.
///
/// The model's numeric link length replaces `L` first.  Workspace
/// projections eliminate `rho1, rho2, rho3` against `f1, f2, f3`; joint
/// space projections eliminate `x, y, z` against `f1-f3, f2-f3, f3`.  At
/// each step the pivot is the constraint of lowest positive degree in the
/// variable (earliest on ties) and every other equation containing the
/// variable is replaced by its resultant with the pivot (`g`'s rows first).
///
/// Resultants can add spurious components, so the result contains the
/// projection but may be larger than it.  Powers of pivot leading
/// coefficients are divided out at the end (see
/// [`ProjectedSurface::extraneous_factors_removed`]).
pub fn project(m: &RobotModel, g: &MPoly, space: Space) -> Result<ProjectedSurface, SingularityError> {
    let g = g.substitute(Var::L, &m.link_length);
    if g.is_zero() {
        return Err(SingularityError::ZeroInput);
    }
    let g_input = g.clone();
    let mut eqs = elimination_system(m, space);
    eqs.push(Equation { poly: g, label: "g".into(), from_target: true });
    let mut trace = Vec::new();
    let mut pivot_leads: Vec<MPoly> = Vec::new();
    for var in space.eliminated() {
        let pivot_idx = eqs
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.from_target && e.poly.contains(var))
            .min_by_key(|(i, e)| (e.poly.degree_in(var), *i))
            .map(|(i, _)| i);
        let Some(pivot_idx) = pivot_idx else {
            if eqs.iter().any(|e| e.from_target && e.poly.contains(var)) {
                return Err(SingularityError::Stalled { var });
            }
            continue;
        };
        let pivot = eqs.remove(pivot_idx);
        let mut lead = pivot.poly.coefficients_in(var).pop().expect("pivot contains var").primitive_part();
        if lead.leading_term().is_some_and(|(_, c)| c.signum() < 0) {
            lead = -lead;
        }
        if !lead.is_constant() && !pivot_leads.contains(&lead) {
            pivot_leads.push(lead);
        }
        let target_degree = eqs.iter().find(|e| e.from_target).map_or(0, |e| e.poly.degree_in(var));
        let mut step = EliminationStep {
            var: var.name().into(),
            pivot: pivot.label.clone(),
            target_degree,
            pivot_degree: pivot.poly.degree_in(var),
            constraints_rewritten: 0,
            content_removed: "1".into(),
            monomial_removed: "1".into(),
            square_roots_taken: 0,
            total_degree_after: 0,
            terms_after: 0,
        };
        for e in eqs.iter_mut().filter(|e| e.poly.contains(var)) {
            let res = resultant(&e.poly, &pivot.poly, var).expect("both operands contain the variable");
            if res.is_zero() {
                return Err(SingularityError::ZeroIntermediate { var, pivot: pivot.label.clone() });
            }
            let red = reduce(&res);
            e.label = format!("res_{}({}, {})", var.name(), e.label, pivot.label);
            e.poly = red.poly;
            if e.from_target {
                step.content_removed = red.content.to_string();
                step.monomial_removed = red.monomial.to_string();
                step.square_roots_taken = red.square_roots;
            } else {
                step.constraints_rewritten += 1;
            }
        }
        let target = eqs.iter().find(|e| e.from_target).expect("target is never a pivot");
        step.total_degree_after = target.poly.total_degree();
        step.terms_after = target.poly.num_terms();
        trace.push(step);
    }
    let mut poly = eqs.into_iter().find(|e| e.from_target).expect("target survives").poly;
    let extraneous_factors_removed = strip_leading_coefficients(&mut poly, &pivot_leads, &g_input, space);
    debug_assert!(space.eliminated().iter().all(|&v| !poly.contains(v)));
    Ok(ProjectedSurface {
        space,
        stats: poly_stats_for(&poly, space.var_group()),
        poly,
        elimination_trace: trace,
        extraneous_factors_removed,
        link_length: m.link_length.clone(),
    })
}

/// Divides out powers of pivot leading coefficients that live entirely in
/// the target coordinates.  Where such a coefficient vanishes the pivot
/// loses its variable and every resultant taken against it vanishes
/// identically, so these factors are extraneous components.  A coefficient
/// sharing a factor with the input `g` is kept: that factor's zero set is
/// singular for every value of the eliminated variables, so it is a
/// genuine component.
/// Two polynomials have a common non-constant factor exactly when their
/// resultant vanishes in some variable that both contain.
fn shares_factor(a: &MPoly, b: &MPoly) -> bool {
    Var::ALL.iter().any(|&v| {
        a.contains(v) && b.contains(v) && resultant(a, b, v).is_ok_and(|r| r.is_zero())
    })
}

fn strip_leading_coefficients(poly: &mut MPoly, leads: &[MPoly], g: &MPoly, space: Space) -> Vec<ExtraneousFactor> {
    let mut removed = Vec::new();
    for lead in leads {
        if space.eliminated().iter().any(|&v| lead.contains(v)) || shares_factor(lead, g) {
            continue;
        }
        let mut multiplicity = 0;
        while let Some(q) = poly.div_exact(lead) {
            if q.is_constant() {
                break;
            }
            *poly = q;
            multiplicity += 1;
        }
        if multiplicity > 0 {
            removed.push(ExtraneousFactor { factor: lead.to_string(), multiplicity });
        }
    }
    if !removed.is_empty() {
        *poly = poly.primitive_part();
    }
    removed
}

/// Published shape of a projected singularity polynomial: the columns
/// degree, per-variable degrees, number of terms and coefficient bitsize.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ReferenceStats {
    pub space: Space,
    pub total_degree: u32,
    pub per_var_degrees: [u32; 3],
    pub num_terms: usize,
    pub coeff_bitsize: u64,
}

/// Reference shapes for the builtin robots.  Parallel loci are given in
/// the workspace and serial loci in the joint space.
pub fn reference_stats(model: &str, kind: SingularityKind) -> Option<ReferenceStats> {
    use SingularityKind::*;
    let (space, total_degree, per_var_degrees, num_terms, coeff_bitsize) = match (model, kind) {
        ("orthoglide", Parallel) => (Space::Workspace, 18, [10, 10, 10], 97, 15),
        ("orthoglide", Serial) => (Space::Jointspace, 18, [12, 12, 12], 62, 12),
        ("hybridglide", Parallel) => (Space::Workspace, 20, [16, 8, 12], 119, 17),
        ("hybridglide", Serial) => (Space::Jointspace, 18, [12, 12, 12], 281, 17),
        ("triaglide", Parallel) => (Space::Workspace, 3, [0, 0, 3], 2, 2),
        ("triaglide", Serial) => (Space::Jointspace, 6, [6, 6, 6], 42, 7),
        ("uranesx", Parallel) => (Space::Workspace, 6, [6, 4, 0], 15, 40),
        ("uranesx", Serial) => (Space::Jointspace, 12, [12, 12, 12], 252, 151),
        _ => return None,
    };
    Some(ReferenceStats { space, total_degree, per_var_degrees, num_terms, coeff_bitsize })
}

/// Field-by-field agreement between computed and reference stats.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StatsMatch {
    pub total_degree: bool,
    pub per_var_degrees: bool,
    pub num_terms: bool,
    pub coeff_bitsize: bool,
    pub all: bool,
}

pub fn compare_stats(stats: &PolyStats, target: &ReferenceStats) -> StatsMatch {
    let total_degree = stats.total_degree == target.total_degree;
    let per_var_degrees = stats.per_var_degrees == target.per_var_degrees;
    let num_terms = stats.num_terms == target.num_terms;
    let coeff_bitsize = stats.coeff_bitsize == target.coeff_bitsize;
    StatsMatch {
        total_degree,
        per_var_degrees,
        num_terms,
        coeff_bitsize,
        all: total_degree && per_var_degrees && num_terms && coeff_bitsize,
    }
}

/// A configuration (pose plus joints) on a singularity locus.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularConfig {
    pub pose: Vec3,
    pub joints: Vec3,
    pub branches: [Branch; 3],
    /// Scaled residual of the determinant at the configuration.
    pub det_residual: f64,
    /// Largest `|f_i|` at the configuration.
    pub constraint_residual: f64,
}

/// Packs pose, joints and `L` into an evaluation point.
pub fn eval_point(pose: &Vec3, joints: &Vec3, link_length: f64) -> [f64; NUM_VARS] {
    [pose[0], pose[1], pose[2], joints[0], joints[1], joints[2], link_length]
}

const SAMPLE_TOL: f64 = 1e-9;
const WALK_STEPS: usize = 48;
const ATTEMPTS_PER_SAMPLE: usize = 2000;

/// Axis-aligned box containing every pose some leg can reach within
/// `(0, 2L)` style limits (sliders' travel expanded by `L`).
fn reach_box(nm: &NumericModel) -> (Vec3, Vec3) {
    let (lo, hi) = nm.limits;
    let mut min = [f64::INFINITY; 3];
    let mut max = [f64::NEG_INFINITY; 3];
    for i in 0..3 {
        for rho in [lo, hi] {
            let s = nm.slider(i, rho);
            for k in 0..3 {
                min[k] = min[k].min(s[k] - nm.link_length);
                max[k] = max[k].max(s[k] + nm.link_length);
            }
        }
    }
    (min, max)
}

struct Sampler {
    nm: NumericModel,
    det: MPoly,
    apply_limits: bool,
    rng: ChaCha8Rng,
}

impl Sampler {
    fn finish(&self, pose: Vec3, joints: Vec3, branches: [Branch; 3]) -> Option<SingularConfig> {
        if self.apply_limits && !joints.iter().all(|&r| self.nm.within_limits(r)) {
            return None;
        }
        let point = eval_point(&pose, &joints, self.nm.link_length);
        let det_residual = self.det.scaled_residual(&point);
        let constraint_residual = self.nm.residuals(&pose, &joints).iter().fold(0.0f64, |a, r| a.max(r.abs()));
        (det_residual <= SAMPLE_TOL && constraint_residual <= self.nm.residual_bound(&pose))
            .then_some(SingularConfig { pose, joints, branches, det_residual, constraint_residual })
    }

    fn random_pose(&mut self) -> Vec3 {
        let (min, max) = reach_box(&self.nm);
        std::array::from_fn(|k| self.rng.gen_range(min[k]..max[k]))
    }

    fn joints_on(&self, pose: &Vec3, branches: &[Branch; 3]) -> Option<Vec3> {
        let mut out = [0.0; 3];
        for i in 0..3 {
            out[i] = self.nm.branch_root(i, pose, branches[i])?;
        }
        Some(out)
    }

    /// Walks one pose coordinate on a fixed working mode until `det(A)`
    /// changes sign, then bisects.
    fn parallel_attempt(&mut self) -> Option<SingularConfig> {
        let start = self.random_pose();
        let set = crate::kinematics::ik_numeric(&self.nm, &start, self.apply_limits);
        if set.solutions.is_empty() {
            return None;
        }
        let pick = self.rng.gen_range(0..set.solutions.len());
        let branches = set.solutions[pick].branches;
        if branches.contains(&Branch::Double) {
            return None;
        }
        let axis = self.rng.gen_range(0..3);
        let half_width = 0.5 * self.nm.link_length;
        let at = |t: f64| {
            let mut p = start;
            p[axis] += t;
            p
        };
        let phi = |t: f64| -> Option<f64> {
            let pose = at(t);
            let joints = self.joints_on(&pose, &branches)?;
            Some(self.det.eval_f64(&eval_point(&pose, &joints, self.nm.link_length)))
        };
        let ts: Vec<f64> = (0..=WALK_STEPS)
            .map(|j| -half_width + 2.0 * half_width * j as f64 / WALK_STEPS as f64)
            .collect();
        let values: Vec<Option<f64>> = ts.iter().map(|&t| phi(t)).collect();
        let bracket = (0..WALK_STEPS).find(|&j| match (values[j], values[j + 1]) {
            (Some(a), Some(b)) => a == 0.0 || a.signum() != b.signum(),
            _ => false,
        })?;
        let (mut lo, mut hi) = (ts[bracket], ts[bracket + 1]);
        let mut f_lo = values[bracket]?;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || f_lo == 0.0 {
                break;
            }
            let f_mid = phi(mid)?;
            if f_mid.signum() == f_lo.signum() && f_mid != 0.0 {
                lo = mid;
                f_lo = f_mid;
            } else {
                hi = mid;
            }
        }
        let candidates = [lo, hi];
        candidates.iter().find_map(|&t| {
            let pose = at(t);
            let joints = self.joints_on(&pose, &branches)?;
            self.finish(pose, joints, branches)
        })
    }

    /// Places the tool centre at distance exactly `L` from one leg's
    /// sliding axis, so that leg's quadratic has a double root and its
    /// diagonal entry of `B` vanishes.
    fn serial_attempt(&mut self) -> Option<SingularConfig> {
        let leg = self.rng.gen_range(0..3);
        let (lo, hi) = self.nm.limits;
        let rho = if self.apply_limits { self.rng.gen_range(lo..hi) } else { self.rng.gen_range(lo - 1.0..hi + 1.0) };
        let d = self.nm.axes[leg];
        // Orthonormal pair spanning the plane normal to d.
        let helper = if d[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
        let e1 = normalize(cross(&d, &helper));
        let e2 = cross(&d, &e1);
        let theta = self.rng.gen_range(0.0..std::f64::consts::TAU);
        let slider = self.nm.slider(leg, rho);
        let l = self.nm.link_length;
        let pose: Vec3 =
            std::array::from_fn(|k| slider[k] + l * (theta.cos() * e1[k] + theta.sin() * e2[k]));
        let mut joints = [0.0; 3];
        let mut branches = [Branch::Double; 3];
        joints[leg] = rho;
        for i in (0..3).filter(|&i| i != leg) {
            let mut roots = self.nm.leg_roots(i, &pose);
            if self.apply_limits {
                roots.retain(|r| self.nm.within_limits(r.rho));
            }
            if roots.is_empty() {
                return None;
            }
            let r = roots[self.rng.gen_range(0..roots.len())];
            joints[i] = r.rho;
            branches[i] = r.branch;
        }
        self.finish(pose, joints, branches)
    }
}

fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn normalize(v: Vec3) -> Vec3 {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    v.map(|c| c / n)
}

/// Draws `n` configurations with `|f_i|` and the scaled determinant
/// residual below `1e-9`.  Deterministic in `seed`.
pub fn sample_singular(
    m: &RobotModel,
    kind: SingularityKind,
    n: usize,
    seed: u64,
    apply_limits: bool,
) -> Result<Vec<SingularConfig>, SingularityError> {
    let mut sampler = Sampler {
        nm: NumericModel::new(m),
        det: singularity_det(m, kind),
        apply_limits,
        rng: ChaCha8Rng::seed_from_u64(seed),
    };
    let mut out = Vec::with_capacity(n);
    let budget = ATTEMPTS_PER_SAMPLE * n.max(1);
    for _ in 0..budget {
        if out.len() == n {
            break;
        }
        let found = match kind {
            SingularityKind::Parallel => sampler.parallel_attempt(),
            SingularityKind::Serial => sampler.serial_attempt(),
        };
        out.extend(found);
    }
    if out.len() < n {
        return Err(SingularityError::InsufficientSamples { requested: n, found: out.len(), samples: out });
    }
    Ok(out)
}

/// Scaled residual of a projected polynomial at a configuration: the pose
/// for workspace projections, the joints for joint-space ones.
pub fn projection_residual(surface: &ProjectedSurface, config: &SingularConfig) -> f64 {
    let point = eval_point(&config.pose, &config.joints, surface.link_length.to_f64());
    surface.poly.scaled_residual(&point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::robots::builtin_model;

    fn p(s: &str) -> MPoly {
        s.parse().unwrap()
    }

    #[test]
    fn orthoglide_jacobians() {
        let j = jacobians(&builtin_model("orthoglide").unwrap());
        assert_eq!(j.parallel[0], [p("2*(x-rho1)"), p("2*y"), p("2*z")]);
        let expected_b = [p("-2*(x-rho1)"), p("-2*(y-rho2)"), p("-2*(z-rho3)")];
        for (i, expected) in expected_b.iter().enumerate() {
            for k in 0..3 {
                if i == k {
                    assert_eq!(&j.serial[i][k], expected);
                } else {
                    assert!(j.serial[i][k].is_zero());
                }
            }
        }
    }

    #[test]
    fn serial_determinants_factor() {
        let o = serial_det(&builtin_model("orthoglide").unwrap());
        assert_eq!(o, p("-8*(x-rho1)*(y-rho2)*(z-rho3)"));
        let t = serial_det(&builtin_model("triaglide").unwrap());
        assert_eq!(t, p("-8*(y-rho1)*(y-rho2)*(y-rho3)"));
        // x = rho1 zeroes the first diagonal entry.
        let point = eval_point(&[0.7, 0.2, -0.4], &[0.7, 1.5, 2.5], 2.0);
        assert_eq!(o.eval_f64(&point), 0.0);
    }

    #[test]
    fn reduce_keeps_square_free_monomial_support() {
        let r = reduce(&p("64*z^3*(4-z^2)^2"));
        assert_eq!(r.poly, p("z^3-4*z"));
        assert_eq!(r.monomial, Monomial::var(Var::Z, 2));
        assert_eq!(r.square_roots, 1);
    }

    #[test]
    fn zero_input_is_rejected() {
        let m = builtin_model("triaglide").unwrap();
        assert_eq!(project(&m, &MPoly::zero(), Space::Workspace), Err(SingularityError::ZeroInput));
    }

    #[test]
    fn shared_factor_is_reported() {
        let m = builtin_model("orthoglide").unwrap();
        let f1 = constraint_system(&m)[0].clone();
        let g = &f1 * &MPoly::var(Var::X);
        assert!(matches!(
            project(&m, &g, Space::Workspace),
            Err(SingularityError::ZeroIntermediate { var: Var::Rho1, .. })
        ));
    }

    #[test]
    fn triaglide_workspace_projection() {
        let m = builtin_model("triaglide").unwrap();
        let s = project(&m, &parallel_det(&m), Space::Workspace).unwrap();
        assert_eq!(s.poly, p("z^3-4*z"));
        assert_eq!(s.stats.per_var_degrees, [0, 0, 3]);
        assert_eq!(s.elimination_trace.len(), 3);
    }

    #[test]
    fn sampling_is_deterministic_and_on_locus() {
        let m = builtin_model("orthoglide").unwrap();
        for kind in [SingularityKind::Parallel, SingularityKind::Serial] {
            let a = sample_singular(&m, kind, 10, 3, true).unwrap();
            let b = sample_singular(&m, kind, 10, 3, true).unwrap();
            assert_eq!(a, b);
            let nm = NumericModel::new(&m);
            for c in &a {
                assert!(c.det_residual <= 1e-9);
                assert!(c.joints.iter().all(|&r| nm.within_limits(r)));
            }
        }
    }
}
