use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{Poly, Rat, Ring};

/// Polynomial in `y` over polynomials in `x` over polynomials in `t`.
pub type TriPoly = Poly<Poly<Poly<Rat>>>;

/// Laurent polynomial in `x, y` with coefficients in `Q[t]`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentXY {
    terms: BTreeMap<(i32, i32), Poly<Rat>>,
}

impl LaurentXY {
    pub fn zero() -> LaurentXY {
        LaurentXY::default()
    }

    /// `c(t) * x^i * y^j`.
    pub fn term(c: Poly<Rat>, i: i32, j: i32) -> LaurentXY {
        let mut out = LaurentXY::zero();
        out.insert(i, j, c);
        out
    }

    pub fn constant(c: Rat) -> LaurentXY {
        LaurentXY::term(Poly::constant(c), 0, 0)
    }

    pub fn x() -> LaurentXY {
        LaurentXY::term(Poly::one(), 1, 0)
    }

    pub fn y() -> LaurentXY {
        LaurentXY::term(Poly::one(), 0, 1)
    }

    pub fn t() -> LaurentXY {
        LaurentXY::term(Poly::var(), 0, 0)
    }

    fn insert(&mut self, i: i32, j: i32, c: Poly<Rat>) {
        let slot = self.terms.entry((i, j)).or_insert_with(Poly::zero);
        *slot = &*slot + &c;
        if Ring::is_zero(slot) {
            self.terms.remove(&(i, j));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i32, i32), &Poly<Rat>)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: i32, j: i32) -> Poly<Rat> {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn scale(&self, c: &Poly<Rat>) -> LaurentXY {
        let mut out = LaurentXY::zero();
        for (&(i, j), v) in &self.terms {
            out.insert(i, j, v * c);
        }
        out
    }

    pub fn scale_rat(&self, c: &Rat) -> LaurentXY {
        self.scale(&Poly::constant(c.clone()))
    }

    /// Multiplies by `x^i y^j`.
    pub fn shift(&self, di: i32, dj: i32) -> LaurentXY {
        LaurentXY { terms: self.terms.iter().map(|(&(i, j), c)| ((i + di, j + dj), c.clone())).collect() }
    }

    pub fn pow(&self, e: u32) -> LaurentXY {
        let mut acc = LaurentXY::constant(Rat::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Lowest exponents of `x` and `y` (zero for the zero polynomial).
    pub fn min_exponents(&self) -> (i32, i32) {
        let i = self.terms.keys().map(|k| k.0).min().unwrap_or(0);
        let j = self.terms.keys().map(|k| k.1).min().unwrap_or(0);
        (i, j)
    }

    /// Highest exponents of `x` and `y`.
    pub fn max_exponents(&self) -> (i32, i32) {
        let i = self.terms.keys().map(|k| k.0).max().unwrap_or(0);
        let j = self.terms.keys().map(|k| k.1).max().unwrap_or(0);
        (i, j)
    }

    /// `self * x^(-i0) y^(-j0)` as a polynomial, with `(i0, j0)` the lowest
    /// exponents. Returns the polynomial and `(i0, j0)`.
    pub fn to_poly(&self) -> (TriPoly, (i32, i32)) {
        let (i0, j0) = self.min_exponents();
        let terms: Vec<(usize, usize, Poly<Rat>)> = self
            .terms
            .iter()
            .map(|(&(i, j), c)| ((i - i0) as usize, (j - j0) as usize, c.clone()))
            .collect();
        (Poly::<Poly<Poly<Rat>>>::from_terms(&terms), (i0, j0))
    }

    pub fn from_poly(p: &TriPoly) -> LaurentXY {
        let mut out = LaurentXY::zero();
        for (i, j, c) in p.terms() {
            out.insert(i as i32, j as i32, c);
        }
        out
    }

    /// Rewrites in the reciprocal chart `x = 1/x1, y = 1/y1` as
    /// `x1^(-i1) * y1^(-j1) * G(x1, y1)` with `G` a polynomial not divisible by
    /// `x1` or `y1`. Returns `(G, (i1, j1))`, with `G`'s outer variable `y1`.
    pub fn to_chart(&self) -> (TriPoly, (i32, i32)) {
        let (imax, jmax) = self.max_exponents();
        let terms: Vec<(usize, usize, Poly<Rat>)> = self
            .terms
            .iter()
            .map(|(&(i, j), c)| ((imax - i) as usize, (jmax - j) as usize, c.clone()))
            .collect();
        (Poly::<Poly<Poly<Rat>>>::from_terms(&terms), (imax, jmax))
    }

    /// Swaps `x` and `y`.
    pub fn transpose(&self) -> LaurentXY {
        LaurentXY { terms: self.terms.iter().map(|(&(i, j), c)| ((j, i), c.clone())).collect() }
    }
}

impl<'a> Add<&'a LaurentXY> for &'a LaurentXY {
    type Output = LaurentXY;
    fn add(self, o: &'a LaurentXY) -> LaurentXY {
        let mut out = self.clone();
        for (&(i, j), c) in &o.terms {
            out.insert(i, j, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a LaurentXY> for &'a LaurentXY {
    type Output = LaurentXY;
    fn sub(self, o: &'a LaurentXY) -> LaurentXY {
        self + &(-o)
    }
}

impl<'a> Mul<&'a LaurentXY> for &'a LaurentXY {
    type Output = LaurentXY;
    fn mul(self, o: &'a LaurentXY) -> LaurentXY {
        let mut out = LaurentXY::zero();
        for (&(i, j), c) in &self.terms {
            for (&(k, l), d) in &o.terms {
                out.insert(i + k, j + l, c * d);
            }
        }
        out
    }
}

impl Neg for &LaurentXY {
    type Output = LaurentXY;
    fn neg(self) -> LaurentXY {
        LaurentXY { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }
}

impl Neg for LaurentXY {
    type Output = LaurentXY;
    fn neg(self) -> LaurentXY {
        -&self
    }
}

macro_rules! laurent_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentXY {
            type Output = LaurentXY;
            fn $m(self, o: LaurentXY) -> LaurentXY {
                (&self).$m(&o)
            }
        }
    };
}
laurent_owned!(Add, add);
laurent_owned!(Sub, sub);
laurent_owned!(Mul, mul);

impl fmt::Debug for LaurentXY {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LaurentXY {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(i, j), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", super::ratfunc::poly_to_string(c, "t"))?;
            match i {
                0 => {}
                1 => write!(f, "*x")?,
                _ => write!(f, "*x^{i}")?,
            }
            match j {
                0 => {}
                1 => write!(f, "*y")?,
                _ => write!(f, "*y^{j}")?,
            }
        }
        Ok(())
    }
}
