use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::{AlgError, Field, Poly, Rat, Ring, SquareRoot, Val};

/// Element of `Q(t)`: reduced fraction with a monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly<Rat>,
    den: Poly<Rat>,
}

impl RatFunc {
    pub fn normalize(num: Poly<Rat>, den: Poly<Rat>) -> Result<RatFunc, AlgError> {
        if Ring::is_zero(&den) {
            return Err(AlgError::ZeroDenominator);
        }
        if Ring::is_zero(&num) {
            return Ok(RatFunc::zero());
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.is_constant() {
            (num, den)
        } else {
            (num.exact_div(&g), den.exact_div(&g))
        };
        let lc = d.lc();
        if !lc.is_one() {
            let inv = lc.inv();
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        Ok(RatFunc { num: n, den: d })
    }

    /// Assumes `num/den` is already reduced; only rescales to a monic denominator.
    fn monic_den(num: Poly<Rat>, den: Poly<Rat>) -> RatFunc {
        let lc = den.lc();
        if lc.is_one() {
            return RatFunc { num, den };
        }
        let inv = lc.inv();
        RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn new(num: Poly<Rat>, den: Poly<Rat>) -> RatFunc {
        RatFunc::normalize(num, den).expect("zero denominator")
    }

    pub fn from_poly(p: Poly<Rat>) -> RatFunc {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn constant(c: Rat) -> RatFunc {
        RatFunc::from_poly(Poly::constant(c))
    }

    /// The formal variable `t`.
    pub fn t() -> RatFunc {
        RatFunc::from_poly(Poly::var())
    }

    /// `c * t^k`.
    pub fn monomial(c: Rat, k: usize) -> RatFunc {
        RatFunc::from_poly(Poly::monomial(c, k))
    }

    pub fn num(&self) -> &Poly<Rat> {
        &self.num
    }

    pub fn den(&self) -> &Poly<Rat> {
        &self.den
    }

    pub fn as_constant(&self) -> Option<Rat> {
        if self.num.is_constant() && self.den.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    pub fn as_poly(&self) -> Option<&Poly<Rat>> {
        if self.den.is_constant() {
            Some(&self.num)
        } else {
            None
        }
    }

    /// Order of vanishing at `t = 0`.
    pub fn valuation(&self) -> Val {
        match self.num.low_degree() {
            None => Val::Inf,
            Some(vn) => {
                let vd = self.den.low_degree().unwrap();
                Val::int(vn as i64 - vd as i64)
            }
        }
    }

    pub fn valuation_int(&self) -> Option<i64> {
        self.num
            .low_degree()
            .map(|vn| vn as i64 - self.den.low_degree().unwrap() as i64)
    }

    /// Coefficient of the lowest power of `t` in the Laurent expansion.
    pub fn lowest_coeff(&self) -> Rat {
        match self.num.low_degree() {
            None => Rat::zero(),
            Some(vn) => {
                let vd = self.den.low_degree().unwrap();
                self.num.coeff(vn) / self.den.coeff(vd)
            }
        }
    }

    /// Laurent coefficients from the valuation up to exponent `last`
    /// inclusive. Returns `(valuation, coefficients)`.
    pub fn laurent(&self, last: i64) -> Option<(i64, Vec<Rat>)> {
        let v = self.valuation_int()?;
        let vn = self.num.low_degree().unwrap();
        let vd = self.den.low_degree().unwrap();
        let n: Vec<Rat> = self.num.coeffs()[vn..].to_vec();
        let d: Vec<Rat> = self.den.coeffs()[vd..].to_vec();
        let count = if last < v { 0 } else { (last - v + 1) as usize };
        let inv0 = d[0].inv();
        let mut out: Vec<Rat> = Vec::with_capacity(count);
        for k in 0..count {
            let mut acc = n.get(k).cloned().unwrap_or_else(Rat::zero);
            for j in 1..=k.min(d.len() - 1) {
                acc = acc - &d[j] * &out[k - j];
            }
            out.push(acc * &inv0);
        }
        Some((v, out))
    }

    pub fn pow(&self, e: i32) -> RatFunc {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut acc = RatFunc::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc * base.clone();
        }
        acc
    }

    /// Numerator times denominator: has the same square class as `self`.
    pub fn square_class_poly(&self) -> Poly<Rat> {
        &self.num * &self.den
    }

    pub fn to_string_in(&self, var: &str) -> String {
        let n = poly_to_string(&self.num, var);
        if self.den.is_one() {
            n
        } else {
            format!("({})/({})", n, poly_to_string(&self.den, var))
        }
    }
}

/// Renders a polynomial with rational coefficients in increasing degree.
pub fn poly_to_string(p: &Poly<Rat>, var: &str) -> String {
    if Ring::is_zero(p) {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg = c.signum() < 0;
        let a = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        if k == 0 {
            out.push_str(&a.to_string());
        } else if a.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{a}*{mono}"));
        }
    }
    out
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("t"))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Rat> for RatFunc {
    fn from(c: Rat) -> RatFunc {
        RatFunc::constant(c)
    }
}

impl From<i64> for RatFunc {
    fn from(c: i64) -> RatFunc {
        RatFunc::constant(Rat::from(c))
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, o: &'a RatFunc) -> RatFunc {
        if Ring::is_zero(self) {
            return o.clone();
        }
        if Ring::is_zero(o) {
            return self.clone();
        }
        if self.den == o.den {
            return RatFunc::new(&self.num + &o.num, self.den.clone());
        }
        // with g = gcd(d1, d2) the only possible common factor of the new
        // numerator and denominator divides g
        let g = self.den.gcd(&o.den);
        let d1 = self.den.exact_div(&g);
        let d2 = o.den.exact_div(&g);
        let num = &(&self.num * &d2) + &(&o.num * &d1);
        if Ring::is_zero(&num) {
            return RatFunc::zero();
        }
        let h = num.gcd(&g);
        let (num, g) = if h.is_constant() { (num, g) } else { (num.exact_div(&h), g.exact_div(&h)) };
        RatFunc::monic_den(num, &(&d1 * &d2) * &g)
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &'a RatFunc) -> RatFunc {
        self + &(-o)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &'a RatFunc) -> RatFunc {
        if Ring::is_zero(self) || Ring::is_zero(o) {
            return RatFunc::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFunc { num: &self.num * &o.num, den: Poly::one() };
        }
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let div = |p: &Poly<Rat>, g: &Poly<Rat>| if g.is_constant() { p.clone() } else { p.exact_div(g) };
        let num = &div(&self.num, &g1) * &div(&o.num, &g2);
        let den = &div(&self.den, &g2) * &div(&o.den, &g1);
        RatFunc::monic_den(num, den)
    }
}

impl<'a> Div<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn div(self, o: &'a RatFunc) -> RatFunc {
        assert!(!Ring::is_zero(o), "division by zero in Q(t)");
        RatFunc::new(&self.num * &o.den, &self.den * &o.num)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

macro_rules! owned_binop {
    ($t:ty, $tr:ident, $m:ident) => {
        impl $tr for $t {
            type Output = $t;
            fn $m(self, o: $t) -> $t {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a $t> for $t {
            type Output = $t;
            fn $m(self, o: &'a $t) -> $t {
                (&self).$m(o)
            }
        }
    };
}
pub(crate) use owned_binop;

owned_binop!(RatFunc, Add, add);
owned_binop!(RatFunc, Sub, sub);
owned_binop!(RatFunc, Mul, mul);
owned_binop!(RatFunc, Div, div);

impl Ring for RatFunc {
    fn zero() -> RatFunc {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }
    fn one() -> RatFunc {
        RatFunc::constant(Rat::one())
    }
    fn is_zero(&self) -> bool {
        Ring::is_zero(&self.num)
    }
    fn from_i64(n: i64) -> RatFunc {
        RatFunc::from(n)
    }
}

impl Field for RatFunc {
    fn inv(&self) -> RatFunc {
        &RatFunc::one() / self
    }
}

impl SquareRoot for RatFunc {
    fn sqrt_exact(&self) -> Option<RatFunc> {
        // den is monic, so the leading coefficient sits in the numerator
        let n = self.num.sqrt_exact()?;
        let d = self.den.sqrt_exact()?;
        Some(RatFunc::new(n, d))
    }
}
