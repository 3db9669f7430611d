use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{AlgError, Field, Ring, SquareRoot};

/// Arbitrary precision rational, always reduced with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(num: i64, den: i64) -> Rat {
        assert!(den != 0, "zero denominator");
        Rat(BigRational::new(num.into(), den.into()))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Rat {
        assert!(!den.is_zero(), "zero denominator");
        Rat(BigRational::new(num, den))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    pub fn signum(&self) -> i32 {
        match self.0.numer().sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn pow(&self, e: i32) -> Rat {
        Rat(num_traits::Pow::pow(&self.0, e))
    }

    /// Square root when the rational is the square of a rational.
    pub fn sqrt(&self) -> Option<Rat> {
        if self.signum() < 0 {
            return None;
        }
        let n = exact_isqrt(self.numer())?;
        let d = exact_isqrt(self.denom())?;
        Some(Rat::from_big(n, d))
    }

    /// Writes `self = s^2 * c` with `c` a square-free integer (sign included).
    pub fn square_class(&self) -> (Rat, BigInt) {
        assert!(!self.is_zero(), "square class of zero");
        // p/q = p*q / q^2
        let pq = self.numer() * self.denom();
        let (root, free) = square_free_integer(&pq);
        (Rat::from_big(root, self.denom().clone()), free)
    }

    /// Decimal rendering rounded toward zero with `digits` fractional digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let neg = self.signum() < 0;
        let a = self.abs();
        let scale = BigInt::from(10u32).pow(digits as u32);
        let scaled = (a.numer() * &scale) / a.denom();
        let (int_part, frac_part) = scaled.div_rem(&scale);
        let mut s = String::new();
        if neg && !scaled.is_zero() {
            s.push('-');
        }
        s.push_str(&int_part.to_string());
        if digits > 0 {
            s.push('.');
            s.push_str(&format!("{:0>width$}", frac_part.to_string(), width = digits));
        }
        s
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }
}

fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// Splits `n = root^2 * free` with `free` square-free (keeps the sign in `free`).
/// Trial division to 10^6; a remaining cofactor below 10^18 is then either a
/// prime, a product of two distinct primes, or a prime square.
fn square_free_integer(n: &BigInt) -> (BigInt, BigInt) {
    let sign = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut m = n.abs();
    let mut root = BigInt::one();
    let mut free = BigInt::one();
    let mut p = BigInt::from(2u32);
    let limit = BigInt::from(1_000_000u32);
    while &p * &p <= m && p <= limit {
        let mut e = 0u32;
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        if e > 0 {
            root *= p.pow(e / 2);
            if e % 2 == 1 {
                free *= &p;
            }
        }
        p += if p == BigInt::from(2u32) { 1u32 } else { 2u32 };
    }
    if let Some(r) = exact_isqrt(&m) {
        if !m.is_one() {
            root *= r;
            m = BigInt::one();
        }
    }
    free *= m;
    (root, sign * free)
}

impl From<i64> for Rat {
    fn from(n: i64) -> Rat {
        Rat(BigRational::from_integer(n.into()))
    }
}

impl From<BigInt> for Rat {
    fn from(n: BigInt) -> Rat {
        Rat(BigRational::from_integer(n))
    }
}

impl FromStr for Rat {
    type Err = AlgError;

    fn from_str(s: &str) -> Result<Rat, AlgError> {
        let err = || AlgError::Parse(s.to_string());
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| err())?;
                let d: BigInt = d.trim().parse().map_err(|_| err())?;
                if d.is_zero() {
                    return Err(err());
                }
                Ok(Rat::from_big(n, d))
            }
            None => s.parse::<BigInt>().map(Rat::from).map_err(|_| err()),
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

macro_rules! rat_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for Rat {
            type Output = Rat;
            fn $m(self, o: Rat) -> Rat {
                Rat(self.0.$m(o.0))
            }
        }
        impl<'a> $tr<&'a Rat> for &'a Rat {
            type Output = Rat;
            fn $m(self, o: &'a Rat) -> Rat {
                Rat((&self.0).$m(&o.0))
            }
        }
        impl<'a> $tr<&'a Rat> for Rat {
            type Output = Rat;
            fn $m(self, o: &'a Rat) -> Rat {
                Rat(self.0.$m(&o.0))
            }
        }
    };
}

rat_binop!(Add, add);
rat_binop!(Sub, sub);
rat_binop!(Mul, mul);
rat_binop!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl Ring for Rat {
    fn zero() -> Rat {
        Rat(BigRational::zero())
    }
    fn one() -> Rat {
        Rat(BigRational::one())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn from_i64(n: i64) -> Rat {
        Rat::from(n)
    }
}

impl Field for Rat {
    fn inv(&self) -> Rat {
        Rat(self.0.recip())
    }
}

impl SquareRoot for Rat {
    fn sqrt_exact(&self) -> Option<Rat> {
        self.sqrt()
    }
}
