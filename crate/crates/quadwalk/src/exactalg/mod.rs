//! Exact arithmetic: rationals, dense polynomials, rational functions in `t`,
//! quadratic extensions of `Q(t)` and truncated Puiseux series.

mod laurent;
mod poly;
mod puiseux;
mod quadext;
mod rat;
mod ratfunc;
mod resultant;
mod series;

pub use laurent::{LaurentXY, TriPoly};
pub use ratfunc::poly_to_string;
pub use poly::{square_free_decomposition, BiPoly, Poly};
pub use puiseux::{puiseux_expand, PuiseuxTrunc};
pub use quadext::{QuadExt, Radicand};
pub use rat::Rat;
pub use ratfunc::RatFunc;
pub use resultant::{resultant, sylvester_matrix};
pub use series::{PowerSeries, RatScale};

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use thiserror::Error;

/// Commutative ring with identity, closed under the std arithmetic operators.
pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_i64(n: i64) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

pub trait Field: Ring + Div<Output = Self> {
    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }
}

/// Fields in which we can decide whether an element is a square.
pub trait SquareRoot: Field {
    fn sqrt_exact(&self) -> Option<Self>;
}

/// t-adic valuation, `Inf` for the zero element.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Val {
    Fin(Rat),
    Inf,
}

impl Val {
    pub fn int(n: i64) -> Val {
        Val::Fin(Rat::from(n))
    }

    pub fn finite(&self) -> Option<&Rat> {
        match self {
            Val::Fin(r) => Some(r),
            Val::Inf => None,
        }
    }

    pub fn add(&self, other: &Val) -> Val {
        match (self, other) {
            (Val::Fin(a), Val::Fin(b)) => Val::Fin(a + b),
            _ => Val::Inf,
        }
    }
}

impl std::fmt::Display for Val {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Val::Fin(r) => write!(f, "{r}"),
            Val::Inf => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("both polynomials are constant in the eliminated variable")]
    BothConstantInVariable,
    #[error("root selector inconsistent with the expansion: {0}")]
    RootSelectorInconsistent(String),
    #[error("leading coefficient {0} of the radicand is not a rational square; expansion needs an algebraic number")]
    IrrationalLeadingCoefficient(Rat),
    #[error("zero radicand")]
    ZeroRadicand,
    #[error("cannot parse rational {0:?}")]
    Parse(String),
}
