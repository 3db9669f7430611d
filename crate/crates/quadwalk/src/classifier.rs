//! Classification of a model: rational, algebraic, or neither x- nor
//! y-D-algebraic, with a trail of machine-checked evidence.
//!
//! The evidence comes in three kinds. Polynomial identities between
//! functions on the kernel curve are checked by pseudo-division by the
//! kernel. Signs of decoupling factors are certified by deciding whether an
//! explicit polynomial in one variable is a square. Matrix evidence comes
//! from [`crate::sigmadist`].

use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::curve::{critical_sets, curve_zeros, Curve, CurveError};
use crate::enumerator::enumerate;
use crate::exactalg::{poly_to_string, BiPoly, LaurentXY, Poly, PowerSeries, Rat, RatFunc, Ring, TriPoly};
use crate::model::{Model, Step, StepSet};
use crate::sigmadist::{build_matrices_with, DistanceMatrix, MatrixOptions, SigmaError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassifyError {
    #[error("no rule decides this model: {0}")]
    CoverageGap(String),
    #[error("edge-case evidence failed: {0}")]
    EvidenceFailed(String),
    #[error("identity {lemma} fails, residual {residual}")]
    IdentityFailed { lemma: String, residual: String },
    #[error("homogeneous analysis gives {computed} but the expected cell is {expected}")]
    TableCellMismatch { computed: String, expected: String },
    #[error("closed form for {axis} differs from the enumeration at t^{n}")]
    OracleMismatch { axis: String, n: usize },
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error(transparent)]
    Sigma(#[from] SigmaError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

// ---------------------------------------------------------------------------
// Laurent building blocks

struct Weights {
    se: Rat,
    nw: Rat,
    e: Rat,
    n: Rat,
    ne: Rat,
    a: Rat,
    b: Rat,
}

impl Weights {
    fn of(model: &Model) -> Weights {
        Weights {
            se: model.d(Step::SouthEast).clone(),
            nw: model.d(Step::NorthWest).clone(),
            e: model.d(Step::East).clone(),
            n: model.d(Step::North).clone(),
            ne: model.d(Step::NorthEast).clone(),
            a: model.A().clone(),
            b: model.B().clone(),
        }
    }
}

/// `c t^k x^i y^j`.
fn mono(c: &Rat, k: usize, i: i32, j: i32) -> LaurentXY {
    LaurentXY::term(Poly::monomial(c.clone(), k), i, j)
}

fn cst(c: &Rat) -> LaurentXY {
    LaurentXY::constant(c.clone())
}

fn half() -> Rat {
    Rat::new(1, 2)
}

fn quarter() -> Rat {
    Rat::new(1, 4)
}

/// `x gamma1 = A - t d_{1,-1} x/y`.
fn x_gamma1(w: &Weights) -> LaurentXY {
    &cst(&w.a) - &mono(&w.se, 1, 1, -1)
}

/// `y gamma2 = B - t d_{-1,1} y/x`.
fn y_gamma2(w: &Weights) -> LaurentXY {
    &cst(&w.b) - &mono(&w.nw, 1, -1, 1)
}

/// `u_l = (1 - l) - t d_{1,0} x - t d_{1,-1} x/y`.
fn u_lambda(w: &Weights, l: &Rat) -> LaurentXY {
    let one = Rat::one();
    &(&cst(&(&one - l)) - &mono(&w.e, 1, 1, 0)) - &mono(&w.se, 1, 1, -1)
}

/// `t^2 d_{1,-1} d_{-1,1}`.
fn tt_se_nw(w: &Weights) -> LaurentXY {
    mono(&(&w.se * &w.nw), 2, 0, 0)
}

// ---------------------------------------------------------------------------
// Identities modulo the kernel

/// Polynomial identities between functions on the kernel curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Identity {
    /// `u_l = -(l - t d_{0,1} y - t d_{-1,1} y/x)`; needs `d_{1,1} = 0`.
    TwoFormsOfU(Rat),
    /// `(l - A + x gamma1) u_l = l(1-l) - t^2 d_{1,-1} d_{-1,1} - (l t d_{1,0} + t^2 d_{1,-1} d_{0,1}) x`;
    /// needs `d_{1,1} = 0`.
    XSideProduct(Rat),
    /// `-(1 - l - B + y gamma2) u_l = l(1-l) - t^2 d_{1,-1} d_{-1,1} - ((1-l) t d_{0,1} + t^2 d_{-1,1} d_{1,0}) y`;
    /// needs `d_{1,1} = 0`.
    YSideProduct(Rat),
    /// `(1/2 - A + x gamma1)^2 = 1/4 - d_{1,-1} d_{-1,1} t^2 - d_{1,1} d_{1,-1} t^2 x^2`;
    /// needs `d_{1,0} = d_{0,1} = 0`.
    XSideSquare,
    /// `(1/2 - B + y gamma2)^2 = 1/4 - d_{1,-1} d_{-1,1} t^2 - d_{1,1} d_{-1,1} t^2 y^2`;
    /// needs `d_{1,0} = d_{0,1} = 0`.
    YSideSquare,
    /// `u^2 = 1/4 - t^2 d_{-1,1} d_{1,-1} - t^2 d_{1,-1} d_{0,1} x` with
    /// `u = 1/2 - t d_{1,-1} x/y`; needs the support `S1` and `B = 1/2`.
    EdgeUSquare,
    /// `-(y gamma2) u = 1/4 - (1/2) t d_{0,1} y - t^2 d_{-1,1} d_{1,-1}`; needs
    /// the support `S1` and `B = 1/2`.
    EdgeUTimesYGamma2,
    /// `(1/2 - A + x gamma1)^2 = 1/4 - t^2 d_{1,-1} d_{-1,1} - t^2 d_{1,-1} d_{0,1} x - t^2 d_{1,-1} d_{1,1} x^2`;
    /// needs `d_{1,0} = 0`.
    XGammaSquare,
    /// Mirror of [`Identity::XGammaSquare`]; needs `d_{0,1} = 0`.
    YGammaSquare,
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Identity::TwoFormsOfU(l) => write!(f, "two_forms_of_u[lambda={l}]"),
            Identity::XSideProduct(l) => write!(f, "x_side_product[lambda={l}]"),
            Identity::YSideProduct(l) => write!(f, "y_side_product[lambda={l}]"),
            Identity::XSideSquare => write!(f, "x_side_square"),
            Identity::YSideSquare => write!(f, "y_side_square"),
            Identity::EdgeUSquare => write!(f, "edge_u_square"),
            Identity::EdgeUTimesYGamma2 => write!(f, "edge_u_times_y_gamma2"),
            Identity::XGammaSquare => write!(f, "x_gamma1_square"),
            Identity::YGammaSquare => write!(f, "y_gamma2_square"),
        }
    }
}

fn is_edge_support(model: &Model) -> bool {
    model.stepset() == StepSet::S1 && *model.B() == half()
}

impl Identity {
    /// Whether the support and weights meet the identity's hypothesis.
    pub fn applies(&self, model: &Model) -> bool {
        let w = Weights::of(model);
        match self {
            Identity::TwoFormsOfU(_) | Identity::XSideProduct(_) | Identity::YSideProduct(_) => w.ne.is_zero(),
            Identity::XSideSquare | Identity::YSideSquare => w.e.is_zero() && w.n.is_zero(),
            Identity::EdgeUSquare | Identity::EdgeUTimesYGamma2 => is_edge_support(model),
            Identity::XGammaSquare => w.e.is_zero(),
            Identity::YGammaSquare => w.n.is_zero(),
        }
    }

    /// The two sides of the identity.
    pub fn sides(&self, model: &Model) -> (LaurentXY, LaurentXY) {
        let w = Weights::of(model);
        let one = Rat::one();
        let t1 = |c: &Rat, i, j| mono(c, 1, i, j);
        let t2 = |c: &Rat, i, j| mono(c, 2, i, j);
        let u_half = &cst(&half()) - &mono(&w.se, 1, 1, -1);
        match self {
            Identity::TwoFormsOfU(l) => {
                let rhs = -(&(&cst(l) - &t1(&w.n, 0, 1)) - &t1(&w.nw, -1, 1));
                (u_lambda(&w, l), rhs)
            }
            Identity::XSideProduct(l) => {
                let lhs = &(&(&cst(l) - &cst(&w.a)) + &x_gamma1(&w)) * &u_lambda(&w, l);
                let lin = &t1(&(l * &w.e), 1, 0) + &t2(&(&w.se * &w.n), 1, 0);
                let rhs = &(&cst(&(l * &(&one - l))) - &tt_se_nw(&w)) - &lin;
                (lhs, rhs)
            }
            Identity::YSideProduct(l) => {
                let m = &one - l;
                let lhs = -(&(&(&cst(&m) - &cst(&w.b)) + &y_gamma2(&w)) * &u_lambda(&w, l));
                let lin = &t1(&(&m * &w.n), 0, 1) + &t2(&(&w.nw * &w.e), 0, 1);
                let rhs = &(&cst(&(l * &m)) - &tt_se_nw(&w)) - &lin;
                (lhs, rhs)
            }
            Identity::XSideSquare => {
                let base = &(&cst(&half()) - &cst(&w.a)) + &x_gamma1(&w);
                let rhs = &(&cst(&quarter()) - &tt_se_nw(&w)) - &t2(&(&w.ne * &w.se), 2, 0);
                (base.pow(2), rhs)
            }
            Identity::YSideSquare => {
                let base = &(&cst(&half()) - &cst(&w.b)) + &y_gamma2(&w);
                let rhs = &(&cst(&quarter()) - &tt_se_nw(&w)) - &t2(&(&w.ne * &w.nw), 0, 2);
                (base.pow(2), rhs)
            }
            Identity::EdgeUSquare => {
                let rhs = &(&cst(&quarter()) - &tt_se_nw(&w)) - &t2(&(&w.se * &w.n), 1, 0);
                (u_half.pow(2), rhs)
            }
            Identity::EdgeUTimesYGamma2 => {
                let lhs = -(&y_gamma2(&w) * &u_half);
                let rhs = &(&cst(&quarter()) - &t1(&(&half() * &w.n), 0, 1)) - &tt_se_nw(&w);
                (lhs, rhs)
            }
            Identity::XGammaSquare => {
                let base = &(&cst(&half()) - &cst(&w.a)) + &x_gamma1(&w);
                let rhs = &(&(&cst(&quarter()) - &tt_se_nw(&w)) - &t2(&(&w.se * &w.n), 1, 0))
                    - &t2(&(&w.se * &w.ne), 2, 0);
                (base.pow(2), rhs)
            }
            Identity::YGammaSquare => {
                let base = &(&cst(&half()) - &cst(&w.b)) + &y_gamma2(&w);
                let rhs = &(&(&cst(&quarter()) - &tt_se_nw(&w)) - &t2(&(&w.nw * &w.e), 0, 1))
                    - &t2(&(&w.nw * &w.ne), 0, 2);
                (base.pow(2), rhs)
            }
        }
    }

    /// Pseudo-remainder of `lhs - rhs` (cleared of denominators) by the kernel.
    pub fn residual(&self, model: &Model) -> TriPoly {
        let (lhs, rhs) = self.sides(model);
        reduce_mod_kernel(model, &(&lhs - &rhs))
    }

    pub fn check(&self, model: &Model) -> Result<IdentityCheck, ClassifyError> {
        if !self.applies(model) {
            return Err(ClassifyError::NotApplicable(format!("{self} on {model}")));
        }
        let res = self.residual(model);
        if !Ring::is_zero(&res) {
            return Err(ClassifyError::IdentityFailed {
                lemma: self.to_string(),
                residual: LaurentXY::from_poly(&res).to_string(),
            });
        }
        Ok(IdentityCheck { identity: self.to_string(), residual: "0".into() })
    }
}

/// Reduces a Laurent polynomial modulo `K`. The kernel is irreducible and its
/// leading coefficient in `y` does not involve `y`, so `h` vanishes on the
/// curve iff the pseudo-remainder is zero.
pub fn reduce_mod_kernel(model: &Model, h: &LaurentXY) -> TriPoly {
    let (p, _) = h.to_poly();
    p.pseudo_rem(&model.kernel())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub residual: String,
}

/// All identities whose hypotheses the model meets; the product identities
/// are checked with `lambda = A` and `lambda = 1/2`.
pub fn applicable_identities(model: &Model) -> Vec<Identity> {
    let lambdas = [model.A().clone(), half()];
    let mut all = Vec::new();
    for l in &lambdas {
        all.push(Identity::TwoFormsOfU(l.clone()));
        all.push(Identity::XSideProduct(l.clone()));
        all.push(Identity::YSideProduct(l.clone()));
    }
    all.extend([
        Identity::XSideSquare,
        Identity::YSideSquare,
        Identity::EdgeUSquare,
        Identity::EdgeUTimesYGamma2,
        Identity::XGammaSquare,
        Identity::YGammaSquare,
    ]);
    let mut out: Vec<Identity> = Vec::new();
    for i in all {
        if i.applies(model) && !out.contains(&i) {
            out.push(i);
        }
    }
    out
}

pub fn verify_identity_lemmas(model: &Model) -> Result<Vec<IdentityCheck>, ClassifyError> {
    applicable_identities(model).iter().map(|i| i.check(model)).collect()
}

// ---------------------------------------------------------------------------
// Homogeneous equation

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn times(self, o: Sign) -> Sign {
        if self == o {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Why a decoupling factor has its sign.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignCertificate {
    /// `h11`, `h12` (factors of `gamma1`) or `h21`, `h22` (of `gamma2`).
    pub factor: String,
    pub function: String,
    pub sign: Sign,
    pub reason: String,
    /// The polynomial whose square test decides the sign.
    pub polynomial: Option<String>,
    pub is_square: Option<bool>,
    pub identities: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HomWitness {
    /// 1-based row of `M1` made of `⊥` only.
    BotRow(usize),
    SignedSolution(Sign, Sign),
}

impl fmt::Display for HomWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomWitness::BotRow(r) => write!(f, "(bot, {r})"),
            HomWitness::SignedSolution(a, b) => write!(f, "({a}, {b})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum HomStatus {
    NoSolution { witness: HomWitness, certificates: Vec<SignCertificate> },
    Solution { h1: String, h2: String, certificates: Vec<SignCertificate> },
}

impl HomStatus {
    pub fn is_no_solution(&self) -> bool {
        matches!(self, HomStatus::NoSolution { .. })
    }

    pub fn witness(&self) -> Option<HomWitness> {
        match self {
            HomStatus::NoSolution { witness, .. } => Some(*witness),
            HomStatus::Solution { .. } => None,
        }
    }

    fn describe(&self) -> String {
        match self {
            HomStatus::NoSolution { witness, .. } => witness.to_string(),
            HomStatus::Solution { h1, h2, .. } => format!("solution ({h1}, {h2})"),
        }
    }
}

/// Univariate polynomial in `x` (if `in_x`) or `y` from a Laurent polynomial
/// free of the other variable and of negative powers.
fn univariate(h: &LaurentXY, in_x: bool) -> Poly<RatFunc> {
    let mut coeffs: Vec<RatFunc> = Vec::new();
    for (&(i, j), c) in h.terms() {
        let (k, other) = if in_x { (i, j) } else { (j, i) };
        assert!(other == 0 && k >= 0, "not a polynomial in one variable");
        let k = k as usize;
        if coeffs.len() <= k {
            coeffs.resize(k + 1, RatFunc::zero());
        }
        coeffs[k] = RatFunc::from_poly(c.clone());
    }
    Poly::new(coeffs)
}

fn square_certificate(
    model: &Model,
    id: Identity,
    factor: &str,
    function: &str,
    in_x: bool,
    reason: &str,
) -> Result<SignCertificate, ClassifyError> {
    id.check(model)?;
    let (_, rhs) = id.sides(model);
    let p = univariate(&rhs, in_x);
    let square = p.is_square_geometric();
    Ok(SignCertificate {
        factor: factor.into(),
        function: function.into(),
        sign: if square { Sign::Plus } else { Sign::Minus },
        reason: reason.into(),
        polynomial: Some(rhs.to_string()),
        is_square: Some(square),
        identities: vec![id.to_string()],
    })
}

fn one_variable_certificate(factor: &str, function: &str, h: &LaurentXY, in_x: bool) -> Option<SignCertificate> {
    let free = h.terms().all(|(&(i, j), _)| if in_x { j == 0 } else { i == 0 });
    free.then(|| SignCertificate {
        factor: factor.into(),
        function: function.into(),
        sign: Sign::Plus,
        reason: format!("depends on {} only", if in_x { "x" } else { "y" }),
        polynomial: None,
        is_square: None,
        identities: vec![],
    })
}

/// Signed factors of `gamma1` (`h11`, `h12`), or `None` when no signed
/// decoupling is known.
fn gamma1_signs(model: &Model) -> Result<Option<Vec<SignCertificate>>, ClassifyError> {
    let w = Weights::of(model);
    if w.a.is_zero() {
        return Ok(one_variable_certificate("h12", "gamma1", &model.gamma1(), false).map(|c| vec![c]));
    }
    if w.a == half() && w.e.is_zero() {
        let c = square_certificate(
            model,
            Identity::XGammaSquare,
            "h11",
            "gamma1",
            true,
            "(x gamma1)^2 is a polynomial in x; gamma1 changes sign under iota1 iff it is not a square",
        )?;
        return Ok(Some(vec![c]));
    }
    Ok(None)
}

fn gamma2_signs(model: &Model) -> Result<Option<Vec<SignCertificate>>, ClassifyError> {
    let w = Weights::of(model);
    if w.b.is_zero() {
        return Ok(one_variable_certificate("h21", "gamma2", &model.gamma2(), true).map(|c| vec![c]));
    }
    if w.b == half() && is_edge_support(model) {
        let h21 = square_certificate(
            model,
            Identity::EdgeUSquare,
            "h21",
            "1/u",
            true,
            "u^2 is a polynomial in x; u changes sign under iota1 iff it is not a square",
        )?;
        Identity::EdgeUTimesYGamma2.check(model)?;
        let (_, mu) = Identity::EdgeUTimesYGamma2.sides(model);
        let mut h22 = one_variable_certificate("h22", "-mu/y", &mu, false).expect("mu is a polynomial in y");
        h22.reason = format!("mu = -(y gamma2) u = {mu} {}", h22.reason);
        h22.identities.push(Identity::EdgeUTimesYGamma2.to_string());
        return Ok(Some(vec![h21, h22]));
    }
    if w.b == half() && w.n.is_zero() {
        let c = square_certificate(
            model,
            Identity::YGammaSquare,
            "h22",
            "gamma2",
            false,
            "(y gamma2)^2 is a polynomial in y; gamma2 changes sign under iota2 iff it is not a square",
        )?;
        return Ok(Some(vec![c]));
    }
    Ok(None)
}

/// Combined signs `(e1, e2)` with `e1 = e11 e21`, `e2 = e12 e22`; absent
/// factors count as `+`.
fn combine(certs: &[SignCertificate]) -> (Sign, Sign) {
    let sign_of = |f: &str| certs.iter().find(|c| c.factor == f).map_or(Sign::Plus, |c| c.sign);
    (sign_of("h11").times(sign_of("h21")), sign_of("h12").times(sign_of("h22")))
}

/// Rows of the homogeneous-solution table that apply to the model.
pub fn table_cells(model: &Model) -> Vec<HomCell> {
    let (a, b) = (model.A(), model.B());
    let set = model.stepset();
    let (zero, h) = (Rat::zero(), half());
    let one = Rat::one();
    let (p, m) = (Sign::Plus, Sign::Minus);
    let mut out = Vec::new();
    let on = |sets: &[StepSet]| sets.contains(&set);
    use StepSet::*;
    if *a == zero && *b == zero {
        out.push(HomCell::Signed(p, p));
    }
    if *a == zero && *b == h {
        out.push(match set {
            S1 => HomCell::Signed(m, p),
            S3 => HomCell::Signed(p, m),
            _ => HomCell::Bot(4),
        });
    }
    if *a == h && *b == zero {
        out.push(if on(&[S1, S3, S4]) { HomCell::Signed(m, p) } else { HomCell::Bot(2) });
    }
    if *a == h && *b == h {
        out.push(match set {
            S1 | S2 => HomCell::Signed(p, p),
            S3 => HomCell::Solution,
            _ => HomCell::Bot(4),
        });
    }
    let sum_one = &(a + b) == &one;
    if sum_one && !(*a == h && *b == h) {
        out.push(if on(&[S1, S2]) { HomCell::Signed(p, p) } else { HomCell::Bot(2) });
    }
    if *a != zero && *a != h && !sum_one {
        out.push(HomCell::Bot(2));
    }
    if *b != zero && *b != h {
        out.push(HomCell::Bot(4));
    }
    out
}

/// One cell of the homogeneous-solution table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomCell {
    Signed(Sign, Sign),
    Bot(usize),
    Solution,
}

impl fmt::Display for HomCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomCell::Signed(a, b) => write!(f, "({a}, {b})"),
            HomCell::Bot(r) => write!(f, "(bot, {r})"),
            HomCell::Solution => write!(f, "solution"),
        }
    }
}

/// Rows `{1, 2}` and `{3, 4}` are each defined up to relabeling.
fn same_row_class(r: usize, s: usize) -> bool {
    (r <= 2) == (s <= 2)
}

fn cell_matches(status: &HomStatus, cell: &HomCell) -> bool {
    match (status, cell) {
        (HomStatus::Solution { .. }, HomCell::Solution) => true,
        (HomStatus::NoSolution { witness: HomWitness::SignedSolution(a, b), .. }, HomCell::Signed(c, d)) => {
            (a, b) == (c, d)
        }
        (HomStatus::NoSolution { witness: HomWitness::BotRow(r), .. }, HomCell::Bot(s)) => same_row_class(*r, *s),
        _ => false,
    }
}

/// Decides whether `gamma1 h1 + gamma2 h2 = 0` has a nontrivial solution
/// with the required symmetries, from signed decouplings when both `gamma`s
/// have one and from a `⊥` row of `M1` otherwise. The result is checked
/// against [`table_cells`].
pub fn homogeneous_analysis(model: &Model, m1: &DistanceMatrix) -> Result<HomStatus, ClassifyError> {
    let status = homogeneous_status(model, m1)?;
    let cells = table_cells(model);
    if !cells.iter().any(|c| cell_matches(&status, c)) {
        let expected: Vec<String> = cells.iter().map(|c| c.to_string()).collect();
        return Err(ClassifyError::TableCellMismatch { computed: status.describe(), expected: expected.join(" or ") });
    }
    Ok(status)
}

fn homogeneous_status(model: &Model, m1: &DistanceMatrix) -> Result<HomStatus, ClassifyError> {
    let w = Weights::of(model);
    let one = Rat::one();
    if w.ne.is_zero() && &w.a + &w.b == one {
        // gamma1 and gamma2 are both multiples of u_A
        let mut certificates = Vec::new();
        for (id, factor, function) in [
            (Identity::XSideProduct(w.a.clone()), "h11", "x gamma1 u_A"),
            (Identity::YSideProduct(w.a.clone()), "h21", "y gamma2 u_A"),
        ] {
            id.check(model)?;
            certificates.push(SignCertificate {
                factor: factor.into(),
                function: function.into(),
                sign: Sign::Plus,
                reason: "product with u_A is a polynomial in one variable".into(),
                polynomial: Some(id.sides(model).1.to_string()),
                is_square: None,
                identities: vec![id.to_string()],
            });
        }
        let witness = HomWitness::SignedSolution(Sign::Plus, Sign::Plus);
        return Ok(HomStatus::NoSolution { witness, certificates });
    }
    let s1 = gamma1_signs(model)?;
    let s2 = gamma2_signs(model)?;
    if let (Some(c1), Some(c2)) = (&s1, &s2) {
        let certificates: Vec<SignCertificate> = c1.iter().chain(c2).cloned().collect();
        let (e1, e2) = combine(&certificates);
        if (e1, e2) == (Sign::Minus, Sign::Minus) {
            return Ok(HomStatus::Solution { h1: "1/gamma1".into(), h2: "-1/gamma2".into(), certificates });
        }
        return Ok(HomStatus::NoSolution { witness: HomWitness::SignedSolution(e1, e2), certificates });
    }
    let bot = m1.bot_rows();
    let wanted: Vec<usize> = table_cells(model)
        .iter()
        .filter_map(|c| match c {
            HomCell::Bot(r) => Some(*r),
            _ => None,
        })
        .collect();
    // a side lacking a signed decoupling needs the witness; prefer the row
    // the table names, then its relabeling partner
    let sides: Vec<usize> = [(s1.is_none(), 1), (s2.is_none(), 3)].iter().filter(|s| s.0).map(|s| s.1).collect();
    let mut rows: Vec<usize> =
        bot.iter().map(|r| r + 1).filter(|r| sides.iter().any(|s| same_row_class(*r, *s))).collect();
    let rank = |r: &usize| {
        if wanted.contains(r) {
            0
        } else if wanted.iter().any(|w| same_row_class(*r, *w)) {
            1
        } else {
            2
        }
    };
    rows.sort_by_key(|r| (rank(r), *r));
    match rows.first() {
        Some(&r) => Ok(HomStatus::NoSolution { witness: HomWitness::BotRow(r), certificates: vec![] }),
        None => Err(ClassifyError::TableCellMismatch {
            computed: format!("no bot row on the unsigned side in\n{}", m1.to_text()),
            expected: table_cells(model).iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" or "),
        }),
    }
}

// ---------------------------------------------------------------------------
// Inhomogeneous equation

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PoleConfinement {
    H1Confined,
    H2Confined,
    EdgeCase,
    Inconclusive,
}

fn is_edge_case(model: &Model) -> bool {
    is_edge_support(model) && *model.A() != half()
}

/// Every confinement argument that applies: the edge case, `M1` entries all
/// negative or `⊥`, the same for `M2`; `[Inconclusive]` when none does.
pub fn inhomogeneous_analysis(model: &Model, m1: &DistanceMatrix, m2: &DistanceMatrix) -> Vec<PoleConfinement> {
    let mut out = Vec::new();
    if is_edge_case(model) {
        out.push(PoleConfinement::EdgeCase);
    }
    if m1.all_negative_or_bot() {
        out.push(PoleConfinement::H1Confined);
    }
    if m2.all_negative_or_bot() {
        out.push(PoleConfinement::H2Confined);
    }
    if out.is_empty() {
        out.push(PoleConfinement::Inconclusive);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeCaseReport {
    /// `(row label, column label, value)` of the single nonnegative `M2` entry.
    pub nonnegative_entry: (String, String, i64),
    /// Zeros of `u gamma2` as `(label, multiplicity)`.
    pub zeros: Vec<(String, i64)>,
}

/// The two facts behind the edge case `S1`, `B = 1/2`, `A != 1/2`: the only
/// nonnegative `M2` entry is `δ(iota2 P, P) = 1` for one of `P3`, `P4`, and
/// the zeros of `u gamma2` are exactly `P` and `iota2 P`.
pub fn edge_case_checks(model: &Model, opts: &MatrixOptions) -> Result<EdgeCaseReport, ClassifyError> {
    if !is_edge_case(model) {
        return Err(ClassifyError::NotApplicable(format!("{model} is not the S1, B = 1/2, A != 1/2 case")));
    }
    let curve = Curve::new(model);
    let (_, m2) = build_matrices_with(&curve, opts)?;
    let fail = |s: String| Err(ClassifyError::EvidenceFailed(s));
    let nonneg = m2.nonnegative_entries();
    let (r, c, n) = match nonneg.as_slice() {
        [one] => *one,
        _ => return fail(format!("expected one nonnegative M2 entry, found {nonneg:?}")),
    };
    if !(r == c && r >= 2 && n == 1) {
        return fail(format!("nonnegative entry {n} at ({}, {})", m2.rows[r], m2.cols[c]));
    }
    let sets = critical_sets(&curve)?;
    let (p, ip) = (&sets.l2_plus[c], &sets.l2_minus[r]);
    let w = Weights::of(model);
    let u = &cst(&half()) - &mono(&w.se, 1, 1, -1);
    let zeros = curve_zeros(&curve, &[(u, 1), (model.gamma2(), 1)])?;
    let label = |q: &crate::curve::CurvePoint| {
        if q == p {
            m2.cols[c].to_string()
        } else if q == ip {
            m2.rows[r].to_string()
        } else {
            format!("{q:?}")
        }
    };
    let found: Vec<(String, i64)> = zeros.iter().map(|(q, k)| (label(q), *k)).collect();
    let ok = zeros.len() == 2 && zeros.iter().any(|(q, _)| q == p) && zeros.iter().any(|(q, _)| q == ip);
    if !ok {
        return fail(format!("zeros of u gamma2 are {found:?}"));
    }
    Ok(EdgeCaseReport { nonnegative_entry: (m2.rows[r].into(), m2.cols[c].into(), n), zeros: found })
}

// ---------------------------------------------------------------------------
// Closed forms

/// `Q(z) = (P(z) / P(0))^power` with `P` a polynomial in `z` over `Q[t]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedForm {
    /// `"x"` for `Q(x,0)`, `"y"` for `Q(0,y)`.
    pub var: &'static str,
    /// Outer index: power of `z`; inner: polynomial in `t`.
    pub p: BiPoly<Rat>,
    pub power: Rat,
}

impl ClosedForm {
    /// Power series in `t` up to `t^order`, coefficients polynomials in `z`.
    pub fn series(&self, order: usize) -> Vec<Poly<Rat>> {
        let len = order + 1;
        let by_t = self.p.transpose();
        let c = by_t.coeff(0);
        assert!(c.is_constant() && !Ring::is_zero(&c), "P(z) at t = 0 must be a nonzero constant");
        let inv = c.coeff(0).inv_rat();
        let num: Vec<Poly<Rat>> = by_t.coeffs().iter().map(|q| q.scale(&inv)).collect();
        let at0: Vec<Poly<Rat>> = num.iter().map(|q| Poly::constant(q.coeff(0))).collect();
        let f = PowerSeries::new(num, len).pow_rat(&self.power);
        let g = PowerSeries::new(at0, len).pow_rat(&-self.power.clone());
        f.mul(&g).coeffs().to_vec()
    }

    fn render_p(&self, at_zero: bool) -> String {
        let mut parts = Vec::new();
        for (k, c) in self.p.coeffs().iter().enumerate() {
            if Ring::is_zero(c) || (at_zero && k > 0) {
                continue;
            }
            let tc = poly_to_string(c, "t");
            parts.push(match k {
                0 => format!("({tc})"),
                1 => format!("({tc})*{}", self.var),
                _ => format!("({tc})*{}^{k}", self.var),
            });
        }
        parts.join(" + ")
    }
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lhs = if self.var == "x" { "Q(x,0)" } else { "Q(0,y)" };
        let p0 = poly_to_string(&self.p.coeffs()[0], "t");
        let frac = format!("({p0})/({})", self.render_p(false));
        if self.power == Rat::from(-1) {
            write!(f, "{lhs} = {frac}")
        } else if self.power == Rat::new(-1, 2) {
            write!(f, "{lhs} = sqrt({frac})")
        } else {
            write!(f, "{lhs} = ({}/{})^({})", self.render_p(false), self.render_p(true), self.power)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosedForms {
    pub qx0: ClosedForm,
    pub q0y: ClosedForm,
}

trait InvRat {
    fn inv_rat(&self) -> Rat;
}

impl InvRat for Rat {
    fn inv_rat(&self) -> Rat {
        crate::exactalg::Field::inv(self)
    }
}

fn tpoly(c: &[Rat]) -> Poly<Rat> {
    Poly::new(c.to_vec())
}

/// Closed forms of `Q(x,0)` and `Q(0,y)` in the two solvable families:
/// `S1`, `S2` with `A + B = 1`, and `S3` with `A = B = 1/2`.
pub fn closed_forms(model: &Model) -> Option<ClosedForms> {
    let w = Weights::of(model);
    let z = Rat::zero();
    let one = Rat::one();
    let se_nw = &w.se * &w.nw;
    match model.stepset() {
        StepSet::S1 | StepSet::S2 if &w.a + &w.b == one => {
            // P(x) = AB - t^2 d_{1,-1} d_{-1,1} - (A t d_{1,0} + t^2 d_{1,-1} d_{0,1}) x
            let p0 = tpoly(&[&w.a * &w.b, z.clone(), -se_nw.clone()]);
            let px = tpoly(&[z.clone(), -(&w.a * &w.e), -(&w.se * &w.n)]);
            let py = tpoly(&[z.clone(), -(&w.b * &w.n), -(&w.nw * &w.e)]);
            Some(ClosedForms {
                qx0: ClosedForm { var: "x", p: Poly::new(vec![p0.clone(), px]), power: Rat::from(-1) },
                q0y: ClosedForm { var: "y", p: Poly::new(vec![p0, py]), power: Rat::from(-1) },
            })
        }
        StepSet::S3 if w.a == half() && w.b == half() => {
            // P(x) = 1/4 - t^2 d_{1,-1} d_{-1,1} - t^2 d_{1,1} d_{1,-1} x^2
            let p0 = tpoly(&[quarter(), z.clone(), -se_nw]);
            let px = tpoly(&[z.clone(), z.clone(), -(&w.ne * &w.se)]);
            let py = tpoly(&[z.clone(), z.clone(), -(&w.ne * &w.nw)]);
            let zero = Poly::zero();
            Some(ClosedForms {
                qx0: ClosedForm { var: "x", p: Poly::new(vec![p0.clone(), zero.clone(), px]), power: Rat::new(-1, 2) },
                q0y: ClosedForm { var: "y", p: Poly::new(vec![p0, zero, py]), power: Rat::new(-1, 2) },
            })
        }
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedFormReport {
    pub order: usize,
    pub qx0: String,
    pub q0y: String,
    pub matched_terms: usize,
}

/// Expands both closed forms to `t^order` and compares with the walk
/// enumeration coefficient by coefficient.
pub fn verify_closed_form(model: &Model, order: usize) -> Result<ClosedFormReport, ClassifyError> {
    let cf = closed_forms(model)
        .ok_or_else(|| ClassifyError::NotApplicable(format!("{model} has no closed form")))?;
    let series = enumerate(model, order);
    for (form, dp, axis) in [(&cf.qx0, series.x_axis(), "Q(x,0)"), (&cf.q0y, series.y_axis(), "Q(0,y)")] {
        let closed = form.series(order);
        for n in 0..=order {
            if closed[n] != dp[n] {
                return Err(ClassifyError::OracleMismatch { axis: axis.into(), n });
            }
        }
    }
    Ok(ClosedFormReport { order, qx0: cf.qx0.to_string(), q0y: cf.q0y.to_string(), matched_terms: 2 * (order + 1) })
}

// ---------------------------------------------------------------------------
// Verdict

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Rational,
    Algebraic,
    NotDAlgebraic,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrailEntry {
    pub rule: String,
    pub evidence: Value,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub model: Model,
    pub verdict: Verdict,
    pub closed_forms: Option<ClosedForms>,
    pub trail: Vec<TrailEntry>,
}

impl Classification {
    pub fn has_rule(&self, rule: &str) -> bool {
        self.trail.iter().any(|e| e.rule == rule)
    }

    pub fn to_json(&self) -> Value {
        let cf = self.closed_forms.as_ref().map(|c| json!({"qx0": c.qx0.to_string(), "q0y": c.q0y.to_string()}));
        json!({
            "model": serde_json::to_value(self.model.to_file()).expect("model serializes"),
            "verdict": self.verdict,
            "closed_forms": cf,
            "trail": self.trail,
        })
    }
}

pub const RULE_RATIONAL: &str = "rational_decoupling";
pub const RULE_HOM_SOLUTION: &str = "homogeneous_solution";
pub const RULE_HOM_NONE: &str = "homogeneous_no_solution";
pub const RULE_EDGE: &str = "edge_case";
pub const RULE_H1: &str = "m1_negative_or_bot";
pub const RULE_H2: &str = "m2_negative_or_bot";

fn entry(rule: &str, evidence: Value) -> TrailEntry {
    TrailEntry { rule: rule.into(), evidence }
}

pub fn classify(model: &Model) -> Result<Classification, ClassifyError> {
    classify_with(model, &MatrixOptions::default())
}

/// Applies the rules in order: rational decoupling, homogeneous solution,
/// then pole confinement with a homogeneous no-solution witness.
pub fn classify_with(model: &Model, opts: &MatrixOptions) -> Result<Classification, ClassifyError> {
    let w = Weights::of(model);
    let mut trail = Vec::new();
    let done = |verdict, closed_forms, trail| Ok(Classification { model: model.clone(), verdict, closed_forms, trail });

    if w.ne.is_zero() && &w.a + &w.b == Rat::one() {
        let ids = [
            Identity::TwoFormsOfU(w.a.clone()),
            Identity::XSideProduct(w.a.clone()),
            Identity::YSideProduct(w.a.clone()),
        ];
        let checks: Vec<IdentityCheck> = ids.iter().map(|i| i.check(model)).collect::<Result<_, _>>()?;
        trail.push(entry(RULE_RATIONAL, json!({"lambda": w.a.to_string(), "identities": checks})));
        return done(Verdict::Rational, closed_forms(model), trail);
    }

    let curve = Curve::new(model);
    let (m1, m2) = build_matrices_with(&curve, opts)?;
    let hom = homogeneous_analysis(model, &m1)?;
    if let HomStatus::Solution { .. } = &hom {
        let ids = [Identity::XSideSquare, Identity::YSideSquare];
        let checks: Vec<IdentityCheck> = ids.iter().map(|i| i.check(model)).collect::<Result<_, _>>()?;
        trail.push(entry(RULE_HOM_SOLUTION, json!({"status": hom, "identities": checks})));
        return done(Verdict::Algebraic, closed_forms(model), trail);
    }
    trail.push(entry(RULE_HOM_NONE, json!({"status": hom, "m1": m1.to_json()})));

    for conf in inhomogeneous_analysis(model, &m1, &m2) {
        match conf {
            PoleConfinement::EdgeCase => {
                let report = edge_case_checks(model, opts)?;
                let ids: Vec<IdentityCheck> = [Identity::EdgeUSquare, Identity::EdgeUTimesYGamma2]
                    .iter()
                    .map(|i| i.check(model))
                    .collect::<Result<_, _>>()?;
                trail.push(entry(RULE_EDGE, json!({"report": report, "m2": m2.to_json(), "identities": ids})));
            }
            PoleConfinement::H1Confined => trail.push(entry(RULE_H1, m1.to_json())),
            PoleConfinement::H2Confined => trail.push(entry(RULE_H2, m2.to_json())),
            PoleConfinement::Inconclusive => {
                return Err(ClassifyError::CoverageGap(format!("{model}\n{}{}", m1.to_text(), m2.to_text())));
            }
        }
    }
    done(Verdict::NotDAlgebraic, None, trail)
}

/// Whether a trail carries one of the three accepted arguments for a
/// non-D-algebraic verdict.
pub fn trail_is_complete(c: &Classification) -> bool {
    match c.verdict {
        Verdict::Rational => c.has_rule(RULE_RATIONAL) && c.closed_forms.is_some(),
        Verdict::Algebraic => c.has_rule(RULE_HOM_SOLUTION) && c.closed_forms.is_some(),
        Verdict::NotDAlgebraic => {
            c.has_rule(RULE_EDGE) || (c.has_rule(RULE_HOM_NONE) && (c.has_rule(RULE_H1) || c.has_rule(RULE_H2)))
        }
    }
}
