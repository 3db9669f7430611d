//! The five genus-zero weighted models: supports, weights, kernel and the
//! γ-functions of the functional equation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactalg::{LaurentXY, Poly, Rat, Ring, TriPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid support: {0}")]
    InvalidSupport(String),
    #[error("weight of step {0} must be positive")]
    NonPositiveWeight(String),
    #[error("unknown step set {0:?} (expected S1..S5)")]
    UnknownStepSet(String),
    #[error("unknown step {0:?}")]
    UnknownStep(String),
    #[error("bad rational {0:?}")]
    BadRational(String),
    #[error("malformed model JSON: {0}")]
    Json(String),
}

/// A unit step of the genus-zero supports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Step {
    /// (1, -1)
    SouthEast,
    /// (-1, 1)
    NorthWest,
    /// (1, 0)
    East,
    /// (0, 1)
    North,
    /// (1, 1)
    NorthEast,
}

impl Step {
    pub const ALL: [Step; 5] = [Step::SouthEast, Step::NorthWest, Step::East, Step::North, Step::NorthEast];

    pub fn vector(self) -> (i32, i32) {
        match self {
            Step::SouthEast => (1, -1),
            Step::NorthWest => (-1, 1),
            Step::East => (1, 0),
            Step::North => (0, 1),
            Step::NorthEast => (1, 1),
        }
    }

    fn index(self) -> usize {
        self as usize
    }

    /// The JSON key `"i,j"`.
    pub fn key(self) -> String {
        let (i, j) = self.vector();
        format!("{i},{j}")
    }
}

impl FromStr for Step {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Step, ModelError> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        Step::ALL
            .into_iter()
            .find(|st| st.key() == compact)
            .ok_or_else(|| ModelError::UnknownStep(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum StepSet {
    S1,
    S2,
    S3,
    S4,
    S5,
}

impl StepSet {
    pub const ALL: [StepSet; 5] = [StepSet::S1, StepSet::S2, StepSet::S3, StepSet::S4, StepSet::S5];

    pub fn steps(self) -> &'static [Step] {
        use Step::*;
        match self {
            StepSet::S1 => &[SouthEast, NorthWest, North],
            StepSet::S2 => &[SouthEast, NorthWest, East, North],
            StepSet::S3 => &[SouthEast, NorthWest, NorthEast],
            StepSet::S4 => &[SouthEast, NorthWest, NorthEast, North],
            StepSet::S5 => &[SouthEast, NorthWest, East, North, NorthEast],
        }
    }

    pub fn contains(self, s: Step) -> bool {
        self.steps().contains(&s)
    }

    pub fn name(self) -> &'static str {
        match self {
            StepSet::S1 => "S1",
            StepSet::S2 => "S2",
            StepSet::S3 => "S3",
            StepSet::S4 => "S4",
            StepSet::S5 => "S5",
        }
    }
}

impl fmt::Display for StepSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StepSet {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<StepSet, ModelError> {
        StepSet::ALL
            .into_iter()
            .find(|st| st.name() == s.trim())
            .ok_or_else(|| ModelError::UnknownStepSet(s.to_string()))
    }
}

/// Step weights `d_v` plus the Boltzmann weights `a` (x-axis) and `b` (y-axis).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Weighting {
    d: [Rat; 5],
    pub a: Rat,
    pub b: Rat,
}

impl Weighting {
    /// Weights for the given steps; every other step gets weight 0.
    pub fn new(steps: &[(Step, Rat)], a: Rat, b: Rat) -> Weighting {
        let mut d: [Rat; 5] = Default::default();
        for (s, w) in steps {
            d[s.index()] = w.clone();
        }
        Weighting { d, a, b }
    }

    /// Weight 1 on every step of `set`.
    pub fn unit(set: StepSet, a: Rat, b: Rat) -> Weighting {
        let steps: Vec<(Step, Rat)> = set.steps().iter().map(|&s| (s, Rat::one())).collect();
        Weighting::new(&steps, a, b)
    }

    pub fn d(&self, s: Step) -> &Rat {
        &self.d[s.index()]
    }
}

/// A validated model with its derived quantities `A = 1 - 1/a`,
/// `B = 1 - 1/b` and `omega = 1 - A - B`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Model {
    stepset: StepSet,
    weighting: Weighting,
    cap_a: Rat,
    cap_b: Rat,
    omega: Rat,
}

impl Model {
    pub fn new(stepset: StepSet, weighting: Weighting) -> Result<Model, ModelError> {
        for s in Step::ALL {
            let w = weighting.d(s);
            if stepset.contains(s) {
                if w.is_zero() {
                    return Err(ModelError::InvalidSupport(format!(
                        "step ({}) belongs to {stepset} but has weight 0",
                        s.key()
                    )));
                }
                if w.signum() < 0 {
                    return Err(ModelError::NonPositiveWeight(s.key()));
                }
            } else if !w.is_zero() {
                return Err(ModelError::InvalidSupport(format!(
                    "step ({}) is not in {stepset} but has weight {w}",
                    s.key()
                )));
            }
        }
        for (name, w) in [("a", &weighting.a), ("b", &weighting.b)] {
            if w.signum() <= 0 {
                return Err(ModelError::NonPositiveWeight(name.to_string()));
            }
        }
        let one = Rat::one();
        let cap_a = &one - &weighting.a.inv_rat();
        let cap_b = &one - &weighting.b.inv_rat();
        let omega = &(&one - &cap_a) - &cap_b;
        Ok(Model { stepset, weighting, cap_a, cap_b, omega })
    }

    /// Unit step weights with Boltzmann weights `a`, `b`.
    pub fn unit(stepset: StepSet, a: Rat, b: Rat) -> Model {
        Model::new(stepset, Weighting::unit(stepset, a, b)).expect("unit weights are valid")
    }

    /// Model with prescribed `A = 1 - 1/a` and `B = 1 - 1/b` (both < 1).
    pub fn with_ab(stepset: StepSet, steps: &[(Step, Rat)], cap_a: &Rat, cap_b: &Rat) -> Result<Model, ModelError> {
        let one = Rat::one();
        let a = (&one - cap_a).inv_rat();
        let b = (&one - cap_b).inv_rat();
        Model::new(stepset, Weighting::new(steps, a, b))
    }

    pub fn stepset(&self) -> StepSet {
        self.stepset
    }

    pub fn weighting(&self) -> &Weighting {
        &self.weighting
    }

    pub fn d(&self, s: Step) -> &Rat {
        self.weighting.d(s)
    }

    pub fn a(&self) -> &Rat {
        &self.weighting.a
    }

    pub fn b(&self) -> &Rat {
        &self.weighting.b
    }

    #[allow(non_snake_case)]
    pub fn A(&self) -> &Rat {
        &self.cap_a
    }

    #[allow(non_snake_case)]
    pub fn B(&self) -> &Rat {
        &self.cap_b
    }

    pub fn omega(&self) -> &Rat {
        &self.omega
    }

    /// Present steps with their weights.
    pub fn steps(&self) -> Vec<(Step, Rat)> {
        self.stepset.steps().iter().map(|&s| (s, self.d(s).clone())).collect()
    }

    /// The step polynomial `S(x, y)` as a Laurent polynomial.
    pub fn step_polynomial(&self) -> LaurentXY {
        let mut s = LaurentXY::zero();
        for (st, w) in self.steps() {
            let (i, j) = st.vector();
            s = &s + &LaurentXY::term(Poly::constant(w), i, j);
        }
        s
    }

    /// `K(x, y) = xy (1 - t S(x, y))`, a polynomial in `x, y, t`.
    pub fn kernel(&self) -> TriPoly {
        let xy = LaurentXY::x() * LaurentXY::y();
        let k = &xy - &(&(&xy * &LaurentXY::t()) * &self.step_polynomial());
        k.to_poly_unshifted()
    }

    /// `gamma1 = A/x - t d_{1,-1}/y`.
    pub fn gamma1(&self) -> LaurentXY {
        &LaurentXY::term(Poly::constant(self.cap_a.clone()), -1, 0)
            - &LaurentXY::term(Poly::monomial(self.d(Step::SouthEast).clone(), 1), 0, -1)
    }

    /// `gamma2 = B/y - t d_{-1,1}/x`.
    pub fn gamma2(&self) -> LaurentXY {
        &LaurentXY::term(Poly::constant(self.cap_b.clone()), 0, -1)
            - &LaurentXY::term(Poly::monomial(self.d(Step::NorthWest).clone(), 1), -1, 0)
    }

    /// `gamma = gamma1 / gamma2` as a numerator/denominator pair.
    pub fn gamma(&self) -> (LaurentXY, LaurentXY) {
        (self.gamma1(), self.gamma2())
    }

    /// The four polynomial coefficient functions of
    /// `K Q = omega xy + x^2 y gamma1 Q(x,0) + x y^2 gamma2 Q(0,y)`.
    pub fn functional_equation_coeffs(&self) -> FunctionalEquation {
        let x = LaurentXY::x();
        let y = LaurentXY::y();
        let xy = &x * &y;
        let omega_xy = xy.scale_rat(&self.omega);
        let x2y = &(&x * &x) * &y;
        let xy2 = &(&x * &y) * &y;
        FunctionalEquation {
            kernel: self.kernel(),
            omega_term: omega_xy.to_poly_unshifted(),
            x_axis_coeff: (&x2y * &self.gamma1()).to_poly_unshifted(),
            y_axis_coeff: (&xy2 * &self.gamma2()).to_poly_unshifted(),
        }
    }

    pub fn to_file(&self) -> ModelFile {
        ModelFile {
            stepset: self.stepset.name().to_string(),
            weights: self.steps().into_iter().map(|(s, w)| (s.key(), w.to_string())).collect(),
            a: self.a().to_string(),
            b: self.b().to_string(),
        }
    }

    pub fn from_json(s: &str) -> Result<Model, ModelError> {
        let file: ModelFile = serde_json::from_str(s).map_err(|e| ModelError::Json(e.to_string()))?;
        file.to_model()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("model serializes")
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.stepset)?;
        let ds: Vec<String> = self.steps().iter().map(|(s, w)| format!("d({})={w}", s.key())).collect();
        write!(f, " [{}] a={} b={}", ds.join(" "), self.a(), self.b())
    }
}

/// Polynomial coefficients of the functional equation, all in `Q[t][x, y]`.
#[derive(Debug, Clone)]
pub struct FunctionalEquation {
    pub kernel: TriPoly,
    pub omega_term: TriPoly,
    pub x_axis_coeff: TriPoly,
    pub y_axis_coeff: TriPoly,
}

/// On-disk model description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub stepset: String,
    pub weights: BTreeMap<String, String>,
    pub a: String,
    pub b: String,
}

impl ModelFile {
    pub fn to_model(&self) -> Result<Model, ModelError> {
        let stepset: StepSet = self.stepset.parse()?;
        let parse = |s: &str| s.parse::<Rat>().map_err(|_| ModelError::BadRational(s.to_string()));
        let mut steps = Vec::new();
        for (k, v) in &self.weights {
            let st: Step = k.parse()?;
            if steps.iter().any(|(s, _)| *s == st) {
                return Err(ModelError::InvalidSupport(format!("step ({k}) given twice")));
            }
            steps.push((st, parse(v)?));
        }
        Model::new(stepset, Weighting::new(&steps, parse(&self.a)?, parse(&self.b)?))
    }
}

trait InvRat {
    fn inv_rat(&self) -> Rat;
}

impl InvRat for Rat {
    fn inv_rat(&self) -> Rat {
        crate::exactalg::Field::inv(self)
    }
}

impl LaurentXY {
    /// The polynomial with exactly these exponents; panics on negative ones.
    pub fn to_poly_unshifted(&self) -> TriPoly {
        let terms: Vec<(usize, usize, Poly<Rat>)> = self
            .terms()
            .map(|(&(i, j), c)| {
                assert!(i >= 0 && j >= 0, "negative exponent in a polynomial");
                (i as usize, j as usize, c.clone())
            })
            .collect();
        TriPoly::from_terms(&terms)
    }
}
