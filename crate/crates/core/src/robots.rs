//! The delta-like family as data: three prismatic legs, each a fixed base
//! point and unit sliding axis, all carrying a distal bar of length `L`
//! to the tool centre point.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactpoly::{MPoly, Scalar, Var};

#[derive(Debug, Error)]
pub enum RobotError {
    #[error("unknown model `{0}` (expected one of orthoglide, hybridglide, triaglide, uranesx)")]
    UnknownModel(String),
    #[error("invalid robot config: {0}")]
    Config(String),
    #[error("invalid robot model: {}", .0.join("; "))]
    Invalid(Vec<String>),
}

/// One actuated leg.  The slider sits at `base + rho·axis`.
#[derive(Clone, Debug, PartialEq)]
pub struct LegSpec {
    pub base: [Scalar; 3],
    pub axis: [Scalar; 3],
}

impl LegSpec {
    pub fn new(base: [Scalar; 3], axis: [Scalar; 3]) -> Self {
        LegSpec { base, axis }
    }

    pub fn base_f64(&self) -> [f64; 3] {
        self.base.each_ref().map(Scalar::to_f64)
    }

    pub fn axis_f64(&self) -> [f64; 3] {
        self.axis.each_ref().map(Scalar::to_f64)
    }

    /// Slider position `base + rho·axis` as polynomials in `rho`.
    pub fn slider(&self, rho: Var) -> [MPoly; 3] {
        std::array::from_fn(|k| {
            &MPoly::constant(self.base[k].clone()) + &MPoly::var(rho).scale(&self.axis[k])
        })
    }
}

/// Upper joint limit: either a fixed value or twice the link length.
#[derive(Clone, Debug, PartialEq)]
pub enum LimitMax {
    TwiceLinkLength,
    Value(Scalar),
}

/// Open interval `min < rho_i < max`, shared by the three joints.
#[derive(Clone, Debug, PartialEq)]
pub struct JointLimits {
    pub min: Scalar,
    pub max: LimitMax,
}

impl Default for JointLimits {
    fn default() -> Self {
        JointLimits { min: Scalar::zero(), max: LimitMax::TwiceLinkLength }
    }
}

pub const DEFAULT_LINK_LENGTH: i64 = 2;

#[derive(Clone, Debug, PartialEq)]
pub struct RobotModel {
    pub name: String,
    pub legs: Vec<LegSpec>,
    pub link_length: Scalar,
    pub limits: JointLimits,
}

pub const BUILTIN_NAMES: [&str; 4] = ["orthoglide", "hybridglide", "triaglide", "uranesx"];

fn vec3(a: i64, b: i64, c: i64) -> [Scalar; 3] {
    [Scalar::from_int(a), Scalar::from_int(b), Scalar::from_int(c)]
}

const X_AXIS: (i64, i64, i64) = (1, 0, 0);
const Y_AXIS: (i64, i64, i64) = (0, 1, 0);
const Z_AXIS: (i64, i64, i64) = (0, 0, 1);

fn leg(base: (i64, i64, i64), axis: (i64, i64, i64)) -> LegSpec {
    LegSpec::new(vec3(base.0, base.1, base.2), vec3(axis.0, axis.1, axis.2))
}

/// One of the four named architectures, with `L = 2` and limits `(0, 2L)`.
pub fn builtin_model(name: &str) -> Result<RobotModel, RobotError> {
    let legs = match name.to_ascii_lowercase().as_str() {
        "orthoglide" => vec![leg((0, 0, 0), X_AXIS), leg((0, 0, 0), Y_AXIS), leg((0, 0, 0), Z_AXIS)],
        "hybridglide" => vec![leg((1, 0, 0), Y_AXIS), leg((-1, 0, 0), Y_AXIS), leg((0, 0, 0), Z_AXIS)],
        "triaglide" => vec![leg((1, 0, 0), Y_AXIS), leg((-1, 0, 0), Y_AXIS), leg((0, 0, 0), Y_AXIS)],
        "uranesx" => {
            let z = vec3(0, 0, 1);
            vec![
                LegSpec::new(vec3(1, 0, 0), z.clone()),
                LegSpec::new([Scalar::ratio(-1, 2), Scalar::sqrt3_times(1, 2), Scalar::zero()], z.clone()),
                LegSpec::new([Scalar::ratio(-1, 2), Scalar::sqrt3_times(-1, 2), Scalar::zero()], z),
            ]
        }
        _ => return Err(RobotError::UnknownModel(name.to_string())),
    };
    Ok(RobotModel {
        name: name.to_ascii_lowercase(),
        legs,
        link_length: Scalar::from_int(DEFAULT_LINK_LENGTH),
        limits: JointLimits::default(),
    })
}

fn dot(a: &[Scalar; 3], b: &[Scalar; 3]) -> Scalar {
    let mut acc = Scalar::zero();
    for k in 0..3 {
        acc += &(&a[k] * &b[k]);
    }
    acc
}

impl RobotModel {
    pub fn with_link_length(mut self, l: Scalar) -> Self {
        self.link_length = l;
        self
    }

    pub fn link_length_f64(&self) -> f64 {
        self.link_length.to_f64()
    }

    pub fn limit_max(&self) -> Scalar {
        match &self.limits.max {
            LimitMax::TwiceLinkLength => &self.link_length * &Scalar::from_int(2),
            LimitMax::Value(v) => v.clone(),
        }
    }

    /// Joint-limit interval in floating point (open at both ends).
    pub fn limits_f64(&self) -> (f64, f64) {
        (self.limits.min.to_f64(), self.limit_max().to_f64())
    }

    /// The same mechanism with every length multiplied by `lambda`.
    pub fn scaled(&self, lambda: &Scalar) -> RobotModel {
        let legs = self
            .legs
            .iter()
            .map(|l| LegSpec::new(l.base.each_ref().map(|b| b * lambda), l.axis.clone()))
            .collect();
        let max = match &self.limits.max {
            LimitMax::TwiceLinkLength => LimitMax::TwiceLinkLength,
            LimitMax::Value(v) => LimitMax::Value(v * lambda),
        };
        RobotModel {
            name: self.name.clone(),
            legs,
            link_length: &self.link_length * lambda,
            limits: JointLimits { min: &self.limits.min * lambda, max },
        }
    }
}

/// Checks the model invariants; an empty list means the model is valid.
pub fn validate_model(m: &RobotModel) -> Vec<String> {
    let mut violations = Vec::new();
    if m.legs.len() != 3 {
        violations.push(format!("expected 3 legs, found {}", m.legs.len()));
    }
    for (i, l) in m.legs.iter().enumerate() {
        if !dot(&l.axis, &l.axis).is_one() {
            violations.push(format!("leg {}: axis not unit", i + 1));
        }
    }
    if !m.link_length.is_positive() {
        violations.push("non-positive link length".to_string());
    }
    if !(&m.limit_max() - &m.limits.min).is_positive() {
        violations.push("empty joint-limit interval".to_string());
    }
    violations
}

/// `f_i = |P - (a_i + rho_i d_i)|² - L²` for each leg, with `L` symbolic.
pub fn constraint_system(m: &RobotModel) -> [MPoly; 3] {
    let pose = Var::POSE.map(MPoly::var);
    let l = MPoly::var(Var::L);
    std::array::from_fn(|i| {
        let slider = m.legs[i].slider(Var::joint(i));
        let mut f = -&(&l * &l);
        for k in 0..3 {
            let d = &pose[k] - &slider[k];
            f = &f + &(&d * &d);
        }
        f
    })
}

/// [`constraint_system`] with `L` replaced by the model's numeric length.
pub fn constraint_system_numeric(m: &RobotModel) -> [MPoly; 3] {
    constraint_system(m).map(|f| f.substitute(Var::L, &m.link_length))
}

// ---------------------------------------------------------------------------
// JSON config
// ---------------------------------------------------------------------------

/// A scalar in config files: `"p/q"` or `{"rat":"p/q","sqrt3":"r/s"}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum ScalarJson {
    Text(String),
    Parts {
        #[serde(default = "zero_text")]
        rat: String,
        #[serde(default = "zero_text")]
        sqrt3: String,
    },
}

fn zero_text() -> String {
    "0".into()
}

impl ScalarJson {
    fn to_scalar(&self) -> Result<Scalar, RobotError> {
        let bad = |e: crate::exactpoly::PolyError| RobotError::Config(e.to_string());
        match self {
            ScalarJson::Text(s) => s.parse().map_err(bad),
            ScalarJson::Parts { rat, sqrt3 } => {
                let r: Scalar = rat.parse().map_err(bad)?;
                let s: Scalar = sqrt3.parse().map_err(bad)?;
                if !r.is_rational() || !s.is_rational() {
                    return Err(RobotError::Config("scalar parts must be rational".into()));
                }
                Ok(&r + &(&s * &Scalar::sqrt3()))
            }
        }
    }

    fn from_scalar(s: &Scalar) -> Self {
        if s.is_rational() {
            ScalarJson::Text(s.to_string())
        } else {
            ScalarJson::Parts {
                rat: Scalar::from_rational(s.rat_part().clone()).to_string(),
                sqrt3: Scalar::from_rational(s.sqrt3_part().clone()).to_string(),
            }
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct LegJson {
    pub base: Vec<ScalarJson>,
    pub axis: Vec<ScalarJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct LimitsJson {
    pub min: ScalarJson,
    /// A scalar or the literal `"2L"`.
    pub max: ScalarJson,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RobotConfig {
    pub name: String,
    #[serde(rename = "L")]
    pub link_length: ScalarJson,
    pub legs: Vec<LegJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limits: Option<LimitsJson>,
}

fn triple(v: &[ScalarJson], what: &str) -> Result<[Scalar; 3], RobotError> {
    if v.len() != 3 {
        return Err(RobotError::Config(format!("{what} must have 3 components, found {}", v.len())));
    }
    Ok([v[0].to_scalar()?, v[1].to_scalar()?, v[2].to_scalar()?])
}

impl RobotConfig {
    /// Converts to a model and validates it.
    pub fn to_model(&self) -> Result<RobotModel, RobotError> {
        let legs = self
            .legs
            .iter()
            .map(|l| Ok(LegSpec::new(triple(&l.base, "base")?, triple(&l.axis, "axis")?)))
            .collect::<Result<Vec<_>, RobotError>>()?;
        let limits = match &self.limits {
            None => JointLimits::default(),
            Some(l) => {
                let max = match &l.max {
                    ScalarJson::Text(s) if s.trim() == "2L" => LimitMax::TwiceLinkLength,
                    other => LimitMax::Value(other.to_scalar()?),
                };
                JointLimits { min: l.min.to_scalar()?, max }
            }
        };
        let model = RobotModel {
            name: self.name.clone(),
            legs,
            link_length: self.link_length.to_scalar()?,
            limits,
        };
        let violations = validate_model(&model);
        if violations.is_empty() {
            Ok(model)
        } else {
            Err(RobotError::Invalid(violations))
        }
    }

    pub fn from_model(m: &RobotModel) -> Self {
        let to_json = |v: &[Scalar; 3]| v.iter().map(ScalarJson::from_scalar).collect();
        RobotConfig {
            name: m.name.clone(),
            link_length: ScalarJson::from_scalar(&m.link_length),
            legs: m.legs.iter().map(|l| LegJson { base: to_json(&l.base), axis: to_json(&l.axis) }).collect(),
            limits: Some(LimitsJson {
                min: ScalarJson::from_scalar(&m.limits.min),
                max: match &m.limits.max {
                    LimitMax::TwiceLinkLength => ScalarJson::Text("2L".into()),
                    LimitMax::Value(v) => ScalarJson::from_scalar(v),
                },
            }),
        }
    }
}

pub fn model_from_json(text: &str) -> Result<RobotModel, RobotError> {
    let cfg: RobotConfig = serde_json::from_str(text).map_err(|e| RobotError::Config(e.to_string()))?;
    cfg.to_model()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MPoly {
        s.parse().unwrap()
    }

    #[test]
    fn orthoglide_legs() {
        let m = builtin_model("orthoglide").unwrap();
        for (i, l) in m.legs.iter().enumerate() {
            assert_eq!(l.base, vec3(0, 0, 0));
            let mut e = [0, 0, 0];
            e[i] = 1;
            assert_eq!(l.axis, vec3(e[0], e[1], e[2]));
        }
    }

    #[test]
    fn uranesx_bases() {
        let m = builtin_model("uranesx").unwrap();
        assert_eq!(m.legs[1].base[1], "1/2*sqrt3".parse().unwrap());
        assert_eq!(m.legs[2].base[1], "-1/2*sqrt3".parse().unwrap());
        assert!(m.legs.iter().all(|l| l.axis == vec3(0, 0, 1)));
    }

    #[test]
    fn unknown_model() {
        assert!(matches!(builtin_model("hexaglide"), Err(RobotError::UnknownModel(_))));
    }

    #[test]
    fn leading_rho_coefficient_is_one() {
        for name in BUILTIN_NAMES {
            let m = builtin_model(name).unwrap();
            for (i, f) in constraint_system(&m).iter().enumerate() {
                let coeffs = f.coefficients_in(Var::joint(i));
                assert_eq!(coeffs.len(), 3);
                assert_eq!(coeffs[2], MPoly::one(), "{name} leg {i}");
            }
        }
    }

    #[test]
    fn hybridglide_first_leg() {
        let m = builtin_model("hybridglide").unwrap();
        assert_eq!(constraint_system(&m)[0], p("(x-1)^2+(y-rho1)^2+z^2-L^2"));
    }

    #[test]
    fn actuator_length_identity() {
        // |(a + rho d) - a|² = rho² for unit d.
        for name in BUILTIN_NAMES {
            let m = builtin_model(name).unwrap();
            for (i, l) in m.legs.iter().enumerate() {
                let rho = Var::joint(i);
                let slider = l.slider(rho);
                let mut acc = MPoly::zero();
                for (s, b) in slider.iter().zip(&l.base) {
                    let d = s - &MPoly::constant(b.clone());
                    acc = &acc + &(&d * &d);
                }
                assert_eq!(acc, &MPoly::var(rho) * &MPoly::var(rho));
            }
        }
    }

    #[test]
    fn validation() {
        assert!(validate_model(&builtin_model("orthoglide").unwrap()).is_empty());
        let mut bad = builtin_model("orthoglide").unwrap();
        bad.legs[0].axis = vec3(1, 1, 0);
        assert_eq!(validate_model(&bad), vec!["leg 1: axis not unit".to_string()]);
        let zero_l = builtin_model("triaglide").unwrap().with_link_length(Scalar::zero());
        let v = validate_model(&zero_l);
        assert!(v.contains(&"non-positive link length".to_string()));
        let mut two_legs = builtin_model("triaglide").unwrap();
        two_legs.legs.pop();
        assert_eq!(validate_model(&two_legs), vec!["expected 3 legs, found 2".to_string()]);
    }

    #[test]
    fn config_round_trip() {
        for name in BUILTIN_NAMES {
            let m = builtin_model(name).unwrap();
            let text = serde_json::to_string(&RobotConfig::from_model(&m)).unwrap();
            assert_eq!(model_from_json(&text).unwrap(), m);
        }
    }

    #[test]
    fn config_parsing() {
        let text = r#"{"name":"custom","L":"3/2",
            "legs":[{"base":["0","0","0"],"axis":["1","0","0"]},
                    {"base":["0","0","0"],"axis":["0","1","0"]},
                    {"base":[{"rat":"-1/2","sqrt3":"1/2"},"0","0"],"axis":["0","0","1"]}],
            "limits":{"min":"0","max":"5/2"}}"#;
        let m = model_from_json(text).unwrap();
        assert_eq!(m.link_length, Scalar::ratio(3, 2));
        assert_eq!(m.legs[2].base[0], "-1/2+1/2*sqrt3".parse().unwrap());
        assert_eq!(m.limits_f64(), (0.0, 2.5));
        let bad_axis = text.replace(r#""axis":["1","0","0"]"#, r#""axis":["1","1","0"]"#);
        assert!(matches!(model_from_json(&bad_axis), Err(RobotError::Invalid(_))));
        assert!(matches!(model_from_json("{"), Err(RobotError::Config(_))));
    }
}
