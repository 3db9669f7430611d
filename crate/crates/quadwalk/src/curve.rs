//! Points of the kernel curve, the involutions `iota1`, `iota2`, the critical
//! points (zeros of `gamma1`, `gamma2`) and zeros of curve functions.
//!
//! Points live in the reciprocal chart `x1 = 1/x`, `y1 = 1/y`, where the
//! curve is the conic
//!
//! `C = t d_{-1,1} x1^2 + t d_{1,-1} y1^2 - x1 y1 + t d_{0,1} x1 + t d_{1,0} y1 + t d_{1,1}`.
//!
//! The only point of the closure in `P1 x P1` outside this chart is the
//! singular point `Omega = (x, y) = (0, 0)`, which no computation here ever
//! produces, so both coordinates are stored as plain field elements.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::exactalg::{
    resultant, AlgError, Field, LaurentXY, Poly, QuadExt, Rat, RatFunc, Ring, TriPoly, Val,
};
use crate::model::{Model, Step};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurveError {
    #[error("point is not on the kernel curve")]
    OffCurveInput,
    #[error("degenerate weights: {0}")]
    DegenerateWeights(String),
    #[error("function vanishes identically on the curve")]
    IdenticallyZeroOnCurve,
    #[error("unsupported zero computation: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Alg(#[from] AlgError),
}

/// A point `(x1, y1)` of the kernel curve in the reciprocal chart.
#[derive(Clone, PartialEq)]
pub struct CurvePoint {
    pub x1: QuadExt,
    pub y1: QuadExt,
}

impl CurvePoint {
    pub fn new(x1: QuadExt, y1: QuadExt) -> CurvePoint {
        CurvePoint { x1, y1 }
    }

    /// `(v(x1), v(y1))`.
    pub fn bivaluation(&self) -> (Val, Val) {
        (self.x1.valuation(), self.y1.valuation())
    }
}

impl fmt::Debug for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(x1 = {:?}, y1 = {:?})", self.x1, self.y1)
    }
}

/// The kernel curve of a model, with the conic coefficients cached.
#[derive(Clone, Debug)]
pub struct Curve {
    model: Model,
    /// `t d_{-1,1}`, `t d_{1,-1}`, `t d_{0,1}`, `t d_{1,0}`, `t d_{1,1}`
    cxx: RatFunc,
    cyy: RatFunc,
    cx: RatFunc,
    cy: RatFunc,
    c0: RatFunc,
}

fn td(model: &Model, s: Step) -> RatFunc {
    RatFunc::monomial(model.d(s).clone(), 1)
}

fn q(r: &RatFunc) -> QuadExt {
    QuadExt::from_ratfunc(r.clone())
}

fn rf(r: &Rat) -> RatFunc {
    RatFunc::constant(r.clone())
}

impl Curve {
    pub fn new(model: &Model) -> Curve {
        Curve {
            model: model.clone(),
            cxx: td(model, Step::NorthWest),
            cyy: td(model, Step::SouthEast),
            cx: td(model, Step::North),
            cy: td(model, Step::East),
            c0: td(model, Step::NorthEast),
        }
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    /// The conic as a polynomial in `y1` over polynomials in `x1` over `Q(t)`.
    pub fn chart_polynomial(&self) -> Poly<Poly<RatFunc>> {
        Poly::new(vec![
            Poly::new(vec![self.c0.clone(), self.cx.clone(), self.cxx.clone()]),
            Poly::new(vec![self.cy.clone(), -RatFunc::one()]),
            Poly::constant(self.cyy.clone()),
        ])
    }

    /// Value of the conic at a point.
    pub fn eval(&self, p: &CurvePoint) -> QuadExt {
        let (x, y) = (&p.x1, &p.y1);
        q(&self.cxx) * x.clone() * x.clone() + q(&self.cyy) * y.clone() * y.clone() - x.clone() * y.clone()
            + q(&self.cx) * x.clone()
            + q(&self.cy) * y.clone()
            + q(&self.c0)
    }

    pub fn contains(&self, p: &CurvePoint) -> bool {
        Ring::is_zero(&self.eval(p))
    }

    pub fn check(&self, p: &CurvePoint) -> Result<(), CurveError> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(CurveError::OffCurveInput)
        }
    }

    /// Keeps `x1`, swaps `y1` with the other root of the conic.
    pub fn iota1(&self, p: &CurvePoint) -> CurvePoint {
        let s = (p.x1.clone() - q(&self.cy)) * q(&self.cyy.inv());
        CurvePoint::new(p.x1.clone(), s - p.y1.clone())
    }

    /// Keeps `y1`, swaps `x1` with the other root of the conic.
    pub fn iota2(&self, p: &CurvePoint) -> CurvePoint {
        let s = (p.y1.clone() - q(&self.cx)) * q(&self.cxx.inv());
        CurvePoint::new(s - p.x1.clone(), p.y1.clone())
    }

    /// `sigma = iota2 o iota1`.
    pub fn sigma(&self, p: &CurvePoint) -> CurvePoint {
        self.iota2(&self.iota1(p))
    }

    pub fn sigma_inv(&self, p: &CurvePoint) -> CurvePoint {
        self.iota1(&self.iota2(p))
    }

    /// `sigma^n (p)` for any integer `n`.
    pub fn sigma_pow(&self, p: &CurvePoint, n: i64) -> CurvePoint {
        let mut out = p.clone();
        for _ in 0..n.unsigned_abs() {
            out = if n > 0 { self.sigma(&out) } else { self.sigma_inv(&out) };
        }
        out
    }

    /// The checked variants refuse points off the curve.
    pub fn apply_iota1(&self, p: &CurvePoint) -> Result<CurvePoint, CurveError> {
        self.check(p)?;
        Ok(self.iota1(p))
    }

    pub fn apply_iota2(&self, p: &CurvePoint) -> Result<CurvePoint, CurveError> {
        self.check(p)?;
        Ok(self.iota2(p))
    }

    pub fn apply_sigma(&self, p: &CurvePoint) -> Result<CurvePoint, CurveError> {
        self.check(p)?;
        Ok(self.sigma(p))
    }

    pub fn apply_sigma_inverse(&self, p: &CurvePoint) -> Result<CurvePoint, CurveError> {
        self.check(p)?;
        Ok(self.sigma_inv(p))
    }
}

/// Roots of `a z^2 + b z + c` (`a != 0`) as `[r+, r-]` with
/// `r± = (-b ± sqrt(disc)) / 2a` and the principal square root.
pub fn solve_quadratic(a: &RatFunc, b: &RatFunc, c: &RatFunc) -> [QuadExt; 2] {
    let four = RatFunc::from(4);
    let disc = b * b - &(&four * &(a * c));
    let s = QuadExt::sqrt(&disc);
    let inv2a = q(&(RatFunc::from(2) * a.clone()).inv());
    let mb = q(&-b.clone());
    [(mb.clone() + s.clone()) * inv2a.clone(), (mb - s) * inv2a]
}

/// Orders the two roots so that the larger valuation comes first; ties keep
/// `r+` first.
fn order_by_valuation(roots: [QuadExt; 2]) -> [QuadExt; 2] {
    let [p, m] = roots;
    if m.valuation() > p.valuation() {
        [m, p]
    } else {
        [p, m]
    }
}

/// Weights seen from one axis: `(A, d_{1,-1}, d_{-1,1}, d_{0,1}, d_{1,0}, d_{1,1})`
/// for `gamma1`; the mirrored tuple for `gamma2`.
#[derive(Clone, Debug)]
struct AxisWeights {
    cap: Rat,
    toward: Rat,
    away: Rat,
    along_other: Rat,
    along: Rat,
    diag: Rat,
}

impl AxisWeights {
    fn x_axis(model: &Model) -> AxisWeights {
        AxisWeights {
            cap: model.A().clone(),
            toward: model.d(Step::SouthEast).clone(),
            away: model.d(Step::NorthWest).clone(),
            along_other: model.d(Step::North).clone(),
            along: model.d(Step::East).clone(),
            diag: model.d(Step::NorthEast).clone(),
        }
    }

    fn y_axis(model: &Model) -> AxisWeights {
        AxisWeights {
            cap: model.B().clone(),
            toward: model.d(Step::NorthWest).clone(),
            away: model.d(Step::SouthEast).clone(),
            along_other: model.d(Step::East).clone(),
            along: model.d(Step::North).clone(),
            diag: model.d(Step::NorthEast).clone(),
        }
    }

    /// Coefficients `(a, b, c)` of the quadratic whose roots are the free
    /// coordinates of the zeros, and the slope `m` (other coordinate `= m`
    /// times the free one).
    fn zero_quadratic(&self) -> ([RatFunc; 3], RatFunc) {
        let cap = rf(&self.cap);
        let toward = rf(&self.toward);
        let t = RatFunc::t();
        let t2 = &t * &t;
        let qa = &(&(&t2 * &toward) * &rf(&self.away)) + &(&(&cap * &cap) - &cap);
        let qb = &(&(&t2 * &toward) * &rf(&self.along_other)) + &(&(&cap * &t) * &rf(&self.along));
        let qc = &(&t2 * &toward) * &rf(&self.diag);
        let slope = &cap / &(&t * &toward);
        ([qa, qb, qc], slope)
    }

    fn degeneracy_factors(&self) -> [Poly<Rat>; 3] {
        let (dse, dnw, de, dn, dne) = (&self.toward, &self.away, &self.along, &self.along_other, &self.diag);
        let a = &self.cap;
        let f1 = Poly::constant(dse.clone());
        let f2 = Poly::new(vec![a * &(a - &Rat::one()), Rat::zero(), dse * dnw]);
        let four = Rat::from(4);
        let lead = &(&(&(dn * dn) * dse) + &(&(de * de) * dnw)) - &(&(&(&four * dne) * dse) * dnw);
        let f3 = Poly::new(vec![dne.clone(), dn * de, lead]);
        [f1, f2, f3]
    }
}

/// The zeros of `gamma1` and `gamma2` on the curve.
#[derive(Clone, Debug)]
pub struct CriticalPoints {
    pub p1: CurvePoint,
    pub p2: CurvePoint,
    pub p3: CurvePoint,
    pub p4: CurvePoint,
}

impl CriticalPoints {
    pub fn as_array(&self) -> [&CurvePoint; 4] {
        [&self.p1, &self.p2, &self.p3, &self.p4]
    }
}

/// `P1, P2` are the zeros of `gamma1 = A x1 - t d_{1,-1} y1`, `P3, P4` those
/// of `gamma2 = B y1 - t d_{-1,1} x1`. Within each pair the point whose
/// free coordinate (`x1` for `gamma1`, `y1` for `gamma2`) has the larger
/// valuation comes first; on a tie the root with `+sqrt` comes first.
pub fn critical_points(curve: &Curve) -> Result<CriticalPoints, CurveError> {
    let model = curve.model();
    check_nondegenerate(model)?;
    let ([a, b, c], m) = AxisWeights::x_axis(model).zero_quadratic();
    let [r1, r2] = order_by_valuation(solve_quadratic(&a, &b, &c));
    let on_line = |x: QuadExt| CurvePoint::new(x.clone(), x * q(&m));
    let (p1, p2) = (on_line(r1), on_line(r2));

    // gamma2 by symmetry: swap the roles of x and y
    let ([a, b, c], m) = AxisWeights::y_axis(model).zero_quadratic();
    let [s1, s2] = order_by_valuation(solve_quadratic(&a, &b, &c));
    let on_line = |y: QuadExt| CurvePoint::new(y.clone() * q(&m), y);
    let (p3, p4) = (on_line(s1), on_line(s2));
    for p in [&p1, &p2, &p3, &p4] {
        debug_assert!(curve.contains(p));
    }
    Ok(CriticalPoints { p1, p2, p3, p4 })
}

/// The critical sets, each in its fixed order.
#[derive(Clone, Debug)]
pub struct CriticalSets {
    pub points: CriticalPoints,
    /// `{P1, P2, iota2 P3, iota2 P4}`
    pub l1_minus: [CurvePoint; 4],
    /// `{iota1 P1, iota1 P2, sigma^-1 P3, sigma^-1 P4}`
    pub l1_plus: [CurvePoint; 4],
    /// `{sigma P1, sigma P2, iota2 P3, iota2 P4}`
    pub l2_minus: [CurvePoint; 4],
    /// `{iota1 P1, iota1 P2, P3, P4}`
    pub l2_plus: [CurvePoint; 4],
}

pub fn critical_sets(curve: &Curve) -> Result<CriticalSets, CurveError> {
    let pts = critical_points(curve)?;
    let c = curve;
    let i1p1 = c.iota1(&pts.p1);
    let i1p2 = c.iota1(&pts.p2);
    let i2p3 = c.iota2(&pts.p3);
    let i2p4 = c.iota2(&pts.p4);
    let sets = CriticalSets {
        l1_minus: [pts.p1.clone(), pts.p2.clone(), i2p3.clone(), i2p4.clone()],
        l1_plus: [i1p1.clone(), i1p2.clone(), c.sigma_inv(&pts.p3), c.sigma_inv(&pts.p4)],
        l2_minus: [c.sigma(&pts.p1), c.sigma(&pts.p2), i2p3, i2p4],
        l2_plus: [i1p1, i1p2, pts.p3.clone(), pts.p4.clone()],
        points: pts,
    };
    for set in [&sets.l1_minus, &sets.l1_plus, &sets.l2_minus, &sets.l2_plus] {
        for p in set {
            curve.check(p)?;
        }
    }
    Ok(sets)
}

/// The polynomials `f1, f2, f3` in `t` whose product (times `16 t^2`) is the
/// discriminant controlling double zeros of `gamma1`:
/// `f1 = d_{1,-1}`, `f2 = d_{1,-1} d_{-1,1} t^2 + A(A - 1)`,
/// `f3 = (d_{0,1}^2 d_{1,-1} + d_{1,0}^2 d_{-1,1} - 4 d_{1,1} d_{1,-1} d_{-1,1}) t^2 + d_{0,1} d_{1,0} t + d_{1,1}`.
pub fn degeneracy_factors(model: &Model) -> [Poly<Rat>; 3] {
    AxisWeights::x_axis(model).degeneracy_factors()
}

/// The same factors for `gamma2` (roles of the axes swapped).
pub fn degeneracy_factors_y(model: &Model) -> [Poly<Rat>; 3] {
    AxisWeights::y_axis(model).degeneracy_factors()
}

/// Fails if one of the degeneracy factors (for `gamma1` or `gamma2`) is the
/// zero polynomial. Never happens for a valid model.
pub fn check_nondegenerate(model: &Model) -> Result<(), CurveError> {
    for (name, fs) in [("gamma1", degeneracy_factors(model)), ("gamma2", degeneracy_factors_y(model))] {
        for (k, f) in fs.iter().enumerate() {
            if Ring::is_zero(f) {
                return Err(CurveError::DegenerateWeights(format!("factor f{} of {name} vanishes", k + 1)));
            }
        }
    }
    Ok(())
}

/// Converts a polynomial in `x1, y1` with `Q[t]` coefficients (outer `y1`)
/// to one over `Q(t)`.
fn over_field(p: &TriPoly) -> Poly<Poly<RatFunc>> {
    p.map(|row| row.map(|c| RatFunc::from_poly(c.clone())))
}

fn eval_at(p: &Poly<Poly<RatFunc>>, pt: &CurvePoint) -> QuadExt {
    let mut acc = QuadExt::zero();
    for row in p.coeffs().iter().rev() {
        acc = acc * pt.y1.clone() + eval_poly(row, &pt.x1);
    }
    acc
}

fn eval_poly(p: &Poly<RatFunc>, z: &QuadExt) -> QuadExt {
    let mut acc = QuadExt::zero();
    for c in p.coeffs().iter().rev() {
        acc = acc * z.clone() + q(c);
    }
    acc
}

fn lift(p: &Poly<RatFunc>) -> Poly<QuadExt> {
    p.map(q)
}

/// Multiplicity of `z` as a root of `p` (0 if not a root).
pub fn root_multiplicity(p: &Poly<RatFunc>, z: &QuadExt) -> usize {
    let mut cur = lift(p);
    let lin = Poly::new(vec![-z.clone(), QuadExt::one()]);
    let mut k = 0;
    while !Ring::is_zero(&cur) {
        let (quo, rem) = cur.div_rem(&lin);
        if !Ring::is_zero(&rem) {
            break;
        }
        cur = quo;
        k += 1;
    }
    k
}

/// Distinct roots of a nonzero polynomial of `Q(t)[z]` whose square-free
/// parts have degree at most 2.
fn roots(p: &Poly<RatFunc>) -> Result<Vec<QuadExt>, CurveError> {
    let mut out: Vec<QuadExt> = Vec::new();
    if p.is_constant() {
        return Ok(out);
    }
    let (_, parts) = crate::exactalg::square_free_decomposition(p);
    for part in parts {
        match part.degree() {
            Some(0) | None => {}
            Some(1) => out.push(q(&-part.coeff(0))),
            Some(2) => {
                let rs = solve_quadratic(&part.coeff(2), &part.coeff(1), &part.coeff(0));
                out.extend(rs);
            }
            Some(d) => {
                return Err(CurveError::Unsupported(format!("eliminant factor of degree {d}")));
            }
        }
    }
    Ok(out)
}

/// Intersection points of `{f = 0}` with the curve and their intersection
/// multiplicities (the order of vanishing of `f` restricted to the curve).
fn intersect(curve: &Curve, f: &Poly<Poly<RatFunc>>) -> Result<Vec<(CurvePoint, usize)>, CurveError> {
    let c = curve.chart_polynomial();
    let rx = resultant(f, &c)?;
    if Ring::is_zero(&rx) {
        return Err(CurveError::IdenticallyZeroOnCurve);
    }
    // points: for each x1-root, common y1-roots of f(x1, .) and C(x1, .)
    let mut pts: Vec<CurvePoint> = Vec::new();
    for alpha in roots(&rx)? {
        let fa = lift_rows(f, &alpha);
        let ca = lift_rows(&c, &alpha);
        let g = if Ring::is_zero(&fa) { ca.monic() } else { fa.gcd(&ca) };
        let ys: Vec<QuadExt> = match g.degree() {
            Some(1) => vec![-g.coeff(0)],
            Some(2) => {
                let (b, c0) = (g.coeff(1), g.coeff(0));
                let (Some(b), Some(c0)) = (b.as_ratfunc(), c0.as_ratfunc()) else {
                    return Err(CurveError::Unsupported("second quadratic extension needed".into()));
                };
                solve_quadratic(&RatFunc::one(), b, c0).to_vec()
            }
            _ => return Err(CurveError::Unsupported("no common root above an eliminant root".into())),
        };
        for y in ys {
            let p = CurvePoint::new(alpha.clone(), y);
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
    }
    // multiplicities: read from the x1-eliminant when the point is alone
    // above its x1, otherwise from the y1-eliminant
    let ry = resultant(&swap_vars(f), &swap_vars(&c))?;
    let mut out = Vec::new();
    for p in &pts {
        let same_x = pts.iter().filter(|o| o.x1 == p.x1).count();
        let same_y = pts.iter().filter(|o| o.y1 == p.y1).count();
        let m = if same_x == 1 {
            root_multiplicity(&rx, &p.x1)
        } else if same_y == 1 {
            root_multiplicity(&ry, &p.y1)
        } else {
            return Err(CurveError::Unsupported("cannot separate intersection points".into()));
        };
        debug_assert!(curve.contains(p) && Ring::is_zero(&eval_at(f, p)));
        out.push((p.clone(), m));
    }
    Ok(out)
}

fn lift_rows(p: &Poly<Poly<RatFunc>>, x: &QuadExt) -> Poly<QuadExt> {
    Poly::new(p.coeffs().iter().map(|row| eval_poly(row, x)).collect())
}

fn swap_vars(p: &Poly<Poly<RatFunc>>) -> Poly<Poly<RatFunc>> {
    let terms: Vec<(usize, usize, RatFunc)> = p.terms().into_iter().map(|(i, j, c)| (j, i, c)).collect();
    Poly::<Poly<RatFunc>>::from_terms(&terms)
}

/// Divisor of `h = prod_k h_k^(e_k)` on the curve minus `Omega`, as points
/// with nonzero order (positive for zeros, negative for poles). Each `h_k` is
/// a Laurent polynomial in `x, y` over `Q[t]`.
pub fn curve_divisor(curve: &Curve, factors: &[(LaurentXY, i64)]) -> Result<Vec<(CurvePoint, i64)>, CurveError> {
    let mut div: Vec<(CurvePoint, i64)> = Vec::new();
    let mut add = |pts: Vec<(CurvePoint, usize)>, e: i64| {
        for (p, m) in pts {
            match div.iter_mut().find(|(o, _)| *o == p) {
                Some(slot) => slot.1 += e * m as i64,
                None => div.push((p, e * m as i64)),
            }
        }
    };
    let x1: Poly<Poly<RatFunc>> = Poly::constant(Poly::var());
    let y1: Poly<Poly<RatFunc>> = Poly::var();
    for (h, e) in factors {
        if h.is_zero() {
            return Err(CurveError::IdenticallyZeroOnCurve);
        }
        // h = x1^(-i) y1^(-j) G(x1, y1)
        let (g, (i, j)) = h.to_chart();
        let g = over_field(&g);
        if !g.is_constant() || !g.coeff(0).is_constant() {
            add(intersect(curve, &g)?, *e);
        }
        if i != 0 {
            add(intersect(curve, &x1)?, -(*e) * i as i64);
        }
        if j != 0 {
            add(intersect(curve, &y1)?, -(*e) * j as i64);
        }
    }
    div.retain(|(_, m)| *m != 0);
    Ok(div)
}

/// Zeros of `h = prod_k h_k^(e_k)` on the curve minus `Omega`, with
/// multiplicity.
pub fn curve_zeros(curve: &Curve, factors: &[(LaurentXY, i64)]) -> Result<Vec<(CurvePoint, i64)>, CurveError> {
    let mut d = curve_divisor(curve, factors)?;
    d.retain(|(_, m)| *m > 0);
    Ok(d)
}

/// Value of a Laurent polynomial at a curve point (both coordinates of the
/// point must be nonzero in the chart when negative powers of `x1`, `y1`
/// appear).
pub fn eval_laurent(h: &LaurentXY, p: &CurvePoint) -> QuadExt {
    let (g, (i, j)) = h.to_chart();
    let v = eval_at(&over_field(&g), p);
    let mut denom = QuadExt::one();
    for _ in 0..i.max(0) {
        denom = denom * p.x1.clone();
    }
    for _ in 0..j.max(0) {
        denom = denom * p.y1.clone();
    }
    let mut num = v;
    for _ in 0..(-i).max(0) {
        num = num * p.x1.clone();
    }
    for _ in 0..(-j).max(0) {
        num = num * p.y1.clone();
    }
    num / denom
}

/// Debug view of one coordinate: minimal polynomial over `Q(t)` (constant
/// term first) and the expression.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CoordinateView {
    pub minpoly: Vec<String>,
    pub valuation: String,
    pub expr: String,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct PointView {
    pub x1: CoordinateView,
    pub y1: CoordinateView,
}

fn coordinate_view(z: &QuadExt) -> CoordinateView {
    let minpoly: Vec<RatFunc> = match z.as_ratfunc() {
        Some(a) => vec![-a.clone(), RatFunc::one()],
        None => vec![z.norm(), -(RatFunc::from(2) * z.base().clone()), RatFunc::one()],
    };
    CoordinateView {
        minpoly: minpoly.iter().map(|c| c.to_string()).collect(),
        valuation: z.valuation().to_string(),
        expr: format!("{z:?}"),
    }
}

impl CurvePoint {
    pub fn view(&self) -> PointView {
        PointView { x1: coordinate_view(&self.x1), y1: coordinate_view(&self.y1) }
    }
}
