use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;

use super::poly::square_free_decomposition;
use super::ratfunc::{owned_binop, poly_to_string};
use super::{AlgError, Field, Poly, Rat, RatFunc, Ring, Val};

/// Canonical radicand `D = c * F`: `c` a square-free integer, `F` monic and
/// square-free in `Q[t]`. Distinct canonical radicands generate distinct
/// quadratic extensions of `Q(t)`, so `1, sqrt(D1), sqrt(D2)` are linearly
/// independent whenever `D1 != D2`.
///
/// `sqrt(D)` always denotes the Puiseux root whose leading coefficient is the
/// principal square root of the lowest coefficient of `D` (positive real, or
/// `i` times a positive real).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Radicand {
    poly: Poly<Rat>,
    rf: RatFunc,
    valuation: usize,
    low_coeff: Rat,
    low_root: Option<Rat>,
}

impl Radicand {
    fn new(poly: Poly<Rat>) -> Radicand {
        let valuation = poly.low_degree().expect("zero radicand");
        let low_coeff = poly.coeff(valuation);
        let low_root = low_coeff.sqrt();
        Radicand { rf: RatFunc::from_poly(poly.clone()), poly, valuation, low_coeff, low_root }
    }

    pub fn poly(&self) -> &Poly<Rat> {
        &self.poly
    }

    pub fn as_ratfunc(&self) -> &RatFunc {
        &self.rf
    }

    /// `v(D)`, either 0 or 1 for a canonical radicand.
    pub fn valuation(&self) -> usize {
        self.valuation
    }

    pub fn low_coeff(&self) -> &Rat {
        &self.low_coeff
    }

    /// Leading coefficient of `sqrt(D)` when it is rational.
    pub fn low_root(&self) -> Option<&Rat> {
        self.low_root.as_ref()
    }
}

impl fmt::Debug for Radicand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", poly_to_string(&self.poly, "t"))
    }
}

/// Element `base + coeff * sqrt(D)` of a quadratic extension of `Q(t)`.
/// Elements of `Q(t)` itself carry no radicand.
#[derive(Clone)]
pub struct QuadExt {
    base: RatFunc,
    coeff: RatFunc,
    rad: Option<Arc<Radicand>>,
}

impl QuadExt {
    pub fn from_ratfunc(a: RatFunc) -> QuadExt {
        QuadExt { base: a, coeff: RatFunc::zero(), rad: None }
    }

    pub fn new(base: RatFunc, coeff: RatFunc, rad: Option<Arc<Radicand>>) -> QuadExt {
        if Ring::is_zero(&coeff) || rad.is_none() {
            assert!(rad.is_some() || Ring::is_zero(&coeff), "radical part without radicand");
            return QuadExt::from_ratfunc(base);
        }
        QuadExt { base, coeff, rad }
    }

    /// The principal square root of `d` (leading Puiseux coefficient is the
    /// principal root of the lowest coefficient of `d`).
    pub fn sqrt(d: &RatFunc) -> QuadExt {
        if Ring::is_zero(d) {
            return QuadExt::zero();
        }
        let p = d.square_class_poly();
        let (lc, parts) = square_free_decomposition(&p);
        let mut free = Poly::<Rat>::one();
        let mut root = Poly::<Rat>::one();
        for (k, part) in parts.iter().enumerate() {
            let mult = (k + 1) as u32;
            if mult % 2 == 1 {
                free = free * part.clone();
            }
            root = root * part.pow(mult / 2);
        }
        let (s, c) = lc.square_class();
        let scale = RatFunc::new(root.scale(&s), d.den().clone());
        let sign = if scale.lowest_coeff().signum() < 0 { -RatFunc::one() } else { RatFunc::one() };
        let scale = scale * sign;
        let dpoly = free.scale(&Rat::from(c.clone()));
        if c == BigInt::from(1) && free.is_constant() {
            return QuadExt::from_ratfunc(scale);
        }
        QuadExt::new(RatFunc::zero(), scale, Some(Arc::new(Radicand::new(dpoly))))
    }

    /// `base + coeff * r` where `r` is the square root of `radicand` whose
    /// leading Puiseux term is `lead_coeff * t^lead_exp`.
    pub fn with_selector(
        base: RatFunc,
        coeff: RatFunc,
        radicand: &RatFunc,
        lead_exp: &Rat,
        lead_coeff: &Rat,
    ) -> Result<QuadExt, AlgError> {
        if Ring::is_zero(radicand) {
            return Err(AlgError::ZeroRadicand);
        }
        let v = radicand.valuation_int().unwrap();
        if Rat::new(v, 2) != *lead_exp {
            return Err(AlgError::RootSelectorInconsistent(format!(
                "exponent {lead_exp} but the radicand has valuation {v}"
            )));
        }
        if lead_coeff * lead_coeff != radicand.lowest_coeff() {
            return Err(AlgError::RootSelectorInconsistent(format!(
                "coefficient {lead_coeff} does not square to {}",
                radicand.lowest_coeff()
            )));
        }
        let principal = QuadExt::sqrt(radicand);
        let r = if lead_coeff.signum() < 0 { -principal } else { principal };
        Ok(QuadExt::from_ratfunc(base) + r * QuadExt::from_ratfunc(coeff))
    }

    pub fn base(&self) -> &RatFunc {
        &self.base
    }

    pub fn radical_coeff(&self) -> &RatFunc {
        &self.coeff
    }

    pub fn radicand(&self) -> Option<&Arc<Radicand>> {
        self.rad.as_ref()
    }

    pub fn is_rational(&self) -> bool {
        self.rad.is_none()
    }

    pub fn as_ratfunc(&self) -> Option<&RatFunc> {
        if self.rad.is_none() {
            Some(&self.base)
        } else {
            None
        }
    }

    pub fn conj(&self) -> QuadExt {
        QuadExt { base: self.base.clone(), coeff: -&self.coeff, rad: self.rad.clone() }
    }

    /// `self * conj(self)`, an element of `Q(t)`.
    pub fn norm(&self) -> RatFunc {
        match &self.rad {
            None => &self.base * &self.base,
            Some(r) => &(&self.base * &self.base) - &(&(&self.coeff * &self.coeff) * &r.rf),
        }
    }

    pub fn scale(&self, k: &RatFunc) -> QuadExt {
        QuadExt::new(&self.base * k, &self.coeff * k, self.rad.clone())
    }

    /// t-adic valuation under the fixed embedding into Puiseux series.
    pub fn valuation(&self) -> Val {
        let Some(rad) = &self.rad else {
            return self.base.valuation();
        };
        let half = Rat::new(rad.valuation as i64, 2);
        let vb = match self.coeff.valuation() {
            Val::Fin(v) => Val::Fin(v + &half),
            Val::Inf => Val::Inf,
        };
        let va = self.base.valuation();
        if va != vb {
            return va.min(vb);
        }
        // equal finite valuations; the leading terms cancel only if sqrt(D)
        // has a rational leading coefficient matching -lead(a)/lead(b)
        if let Some(r) = &rad.low_root {
            let lead = self.base.lowest_coeff() + self.coeff.lowest_coeff() * r;
            if lead.is_zero() {
                let vn = self.norm().valuation();
                return match (vn, va) {
                    (Val::Fin(n), Val::Fin(a)) => Val::Fin(n - a),
                    _ => unreachable!("nonzero element with infinite norm valuation"),
                };
            }
        }
        va
    }

    fn join(&self, o: &QuadExt) -> Option<Arc<Radicand>> {
        match (&self.rad, &o.rad) {
            (None, r) | (r, None) => r.clone(),
            (Some(a), Some(b)) => {
                assert!(
                    Arc::ptr_eq(a, b) || a == b,
                    "arithmetic across distinct quadratic extensions ({a:?} vs {b:?})"
                );
                Some(a.clone())
            }
        }
    }
}

impl PartialEq for QuadExt {
    fn eq(&self, o: &QuadExt) -> bool {
        if self.base != o.base || self.coeff != o.coeff {
            return false;
        }
        match (&self.rad, &o.rad) {
            (Some(a), Some(b)) => Arc::ptr_eq(a, b) || a == b,
            _ => true,
        }
    }
}

impl fmt::Debug for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.rad {
            None => write!(f, "{}", self.base),
            Some(r) => write!(f, "{} + ({})*sqrt({:?})", self.base, self.coeff, r),
        }
    }
}

impl<'a> Add<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn add(self, o: &'a QuadExt) -> QuadExt {
        let rad = self.join(o);
        QuadExt::new(&self.base + &o.base, &self.coeff + &o.coeff, rad)
    }
}

impl<'a> Sub<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn sub(self, o: &'a QuadExt) -> QuadExt {
        let rad = self.join(o);
        QuadExt::new(&self.base - &o.base, &self.coeff - &o.coeff, rad)
    }
}

impl<'a> Mul<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn mul(self, o: &'a QuadExt) -> QuadExt {
        let rad = self.join(o);
        let mut base = &self.base * &o.base;
        if let Some(r) = &rad {
            if !Ring::is_zero(&self.coeff) && !Ring::is_zero(&o.coeff) {
                base = &base + &(&(&self.coeff * &o.coeff) * &r.rf);
            }
        }
        let coeff = &(&self.base * &o.coeff) + &(&self.coeff * &o.base);
        QuadExt::new(base, coeff, rad)
    }
}

impl<'a> Div<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn div(self, o: &'a QuadExt) -> QuadExt {
        self * &o.inv()
    }
}

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt { base: -&self.base, coeff: -&self.coeff, rad: self.rad.clone() }
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        -&self
    }
}

owned_binop!(QuadExt, Add, add);
owned_binop!(QuadExt, Sub, sub);
owned_binop!(QuadExt, Mul, mul);
owned_binop!(QuadExt, Div, div);

impl Ring for QuadExt {
    fn zero() -> QuadExt {
        QuadExt::from_ratfunc(RatFunc::zero())
    }
    fn one() -> QuadExt {
        QuadExt::from_ratfunc(RatFunc::one())
    }
    fn is_zero(&self) -> bool {
        Ring::is_zero(&self.base) && Ring::is_zero(&self.coeff)
    }
    fn from_i64(n: i64) -> QuadExt {
        QuadExt::from_ratfunc(RatFunc::from(n))
    }
}

impl Field for QuadExt {
    fn inv(&self) -> QuadExt {
        assert!(!Ring::is_zero(self), "division by zero in a quadratic extension");
        let n = self.norm().inv();
        self.conj().scale(&n)
    }
}

impl From<RatFunc> for QuadExt {
    fn from(a: RatFunc) -> QuadExt {
        QuadExt::from_ratfunc(a)
    }
}

impl From<Rat> for QuadExt {
    fn from(a: Rat) -> QuadExt {
        QuadExt::from_ratfunc(RatFunc::constant(a))
    }
}
