use std::ops::{Add, Mul, Neg, Sub};

use super::{Field, Ring, SquareRoot};

/// Dense univariate polynomial, coefficients from degree 0 upward.
/// The zero polynomial has an empty coefficient vector and degree `None`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly<R> {
    c: Vec<R>,
}

/// Polynomial in `y` whose coefficients are polynomials in `x`.
pub type BiPoly<R> = Poly<Poly<R>>;

impl<R: Ring> Poly<R> {
    pub fn new(mut c: Vec<R>) -> Poly<R> {
        while c.last().is_some_and(|z| z.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn constant(a: R) -> Poly<R> {
        Poly::new(vec![a])
    }

    pub fn monomial(a: R, k: usize) -> Poly<R> {
        if a.is_zero() {
            return Poly { c: vec![] };
        }
        let mut c = vec![R::zero(); k];
        c.push(a);
        Poly { c }
    }

    /// The variable itself.
    pub fn var() -> Poly<R> {
        Poly::monomial(R::one(), 1)
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with the convention deg 0 = -1 (handy in comparisons).
    pub fn deg_i(&self) -> isize {
        self.c.len() as isize - 1
    }

    pub fn coeffs(&self) -> &[R] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.c
    }

    pub fn coeff(&self, k: usize) -> R {
        self.c.get(k).cloned().unwrap_or_else(R::zero)
    }

    pub fn coeff_ref(&self, k: usize) -> Option<&R> {
        self.c.get(k)
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn lc(&self) -> R {
        self.c.last().cloned().unwrap_or_else(R::zero)
    }

    /// Index of the lowest nonzero coefficient.
    pub fn low_degree(&self) -> Option<usize> {
        self.c.iter().position(|z| !z.is_zero())
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn scale(&self, a: &R) -> Poly<R> {
        Poly::new(self.c.iter().map(|z| z.clone() * a.clone()).collect())
    }

    /// Multiplies by `var^k`.
    pub fn shift(&self, k: usize) -> Poly<R> {
        if Ring::is_zero(self) {
            return self.clone();
        }
        let mut c = vec![R::zero(); k];
        c.extend(self.c.iter().cloned());
        Poly { c }
    }

    pub fn eval(&self, x: &R) -> R {
        let mut acc = R::zero();
        for z in self.c.iter().rev() {
            acc = acc * x.clone() + z.clone();
        }
        acc
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Poly<S> {
        Poly::new(self.c.iter().map(f).collect())
    }

    pub fn derivative(&self) -> Poly<R> {
        Poly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, z)| z.clone() * R::from_i64(k as i64))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Poly<R> {
        let mut acc = Poly::constant(R::one());
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }

    /// Truncates to terms of degree < n.
    pub fn truncate(&self, n: usize) -> Poly<R> {
        Poly::new(self.c.iter().take(n).cloned().collect())
    }

    /// Pseudo-remainder: `lc(d)^e * self = q*d + r` with `deg r < deg d`.
    pub fn pseudo_rem(&self, d: &Poly<R>) -> Poly<R> {
        let dd = d.degree().expect("pseudo-division by zero");
        let lcd = d.lc();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let lcr = r.lc();
            r = r.scale(&lcd) - d.shift(dr - dd).scale(&lcr);
        }
        r
    }
}

impl<F: Field> Poly<F> {
    pub fn monic(&self) -> Poly<F> {
        if Ring::is_zero(self) {
            return self.clone();
        }
        let inv = self.lc().inv();
        self.scale(&inv)
    }

    pub fn div_rem(&self, d: &Poly<F>) -> (Poly<F>, Poly<F>) {
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = d.lc().inv();
        let mut r = self.clone();
        let mut q = vec![F::zero(); self.c.len().saturating_sub(dd)];
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let k = r.lc() * inv.clone();
            q[dr - dd] = k.clone();
            r = r - d.shift(dr - dd).scale(&k);
        }
        (Poly::new(q), r)
    }

    /// Quotient of an exact division; panics if the remainder is nonzero.
    pub fn exact_div(&self, d: &Poly<F>) -> Poly<F> {
        let (q, r) = self.div_rem(d);
        assert!(Ring::is_zero(&r), "inexact polynomial division");
        q
    }

    /// Monic gcd (zero if both inputs vanish).
    pub fn gcd(&self, other: &Poly<F>) -> Poly<F> {
        let mut a = self.monic();
        let mut b = other.monic();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !Ring::is_zero(&b) {
            if b.is_constant() {
                return Poly::one();
            }
            // monic remainders keep coefficient growth in check
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a
    }

    /// Decides whether `self` is the square of a polynomial over the same field,
    /// returning a square root.
    pub fn sqrt_exact(&self) -> Option<Poly<F>>
    where
        F: SquareRoot,
    {
        if Ring::is_zero(self) {
            return Some(self.clone());
        }
        let d = self.degree().unwrap();
        if d % 2 == 1 {
            return None;
        }
        let lc_root = self.lc().sqrt_exact()?;
        if d == 2 {
            // discriminant-zero test
            let (a, b, c) = (self.coeff(2), self.coeff(1), self.coeff(0));
            let disc = b.clone() * b.clone() - F::from_i64(4) * a.clone() * c;
            if !disc.is_zero() {
                return None;
            }
            let root = Poly::new(vec![b / (F::from_i64(2) * lc_root.clone()), lc_root]);
            return Some(root);
        }
        let (lc, parts) = square_free_decomposition(self);
        let mut root = Poly::constant(lc.sqrt_exact()?);
        for (k, p) in parts.iter().enumerate() {
            let mult = k + 1;
            if mult % 2 == 1 && !p.is_constant() {
                return None;
            }
            root = root * p.pow((mult / 2) as u32);
        }
        debug_assert!(root.clone() * root.clone() == *self);
        Some(root)
    }

    /// Square over an algebraic closure of the coefficient field: every root
    /// has even multiplicity (the leading coefficient is always a square there).
    pub fn is_square_geometric(&self) -> bool {
        if Ring::is_zero(self) {
            return true;
        }
        let d = self.degree().unwrap();
        if d % 2 == 1 {
            return false;
        }
        if d == 2 {
            let (a, b, c) = (self.coeff(2), self.coeff(1), self.coeff(0));
            return (b.clone() * b - F::from_i64(4) * a * c).is_zero();
        }
        let (_, parts) = square_free_decomposition(self);
        parts
            .iter()
            .enumerate()
            .all(|(k, p)| (k + 1) % 2 == 0 || p.is_constant())
    }
}

/// Yun's square-free decomposition: `p = lc * prod_k parts[k]^(k+1)` with
/// monic, pairwise coprime, square-free parts.
pub fn square_free_decomposition<F: Field>(p: &Poly<F>) -> (F, Vec<Poly<F>>) {
    assert!(!Ring::is_zero(p), "square-free decomposition of zero");
    let lc = p.lc();
    let f = p.monic();
    if f.is_constant() {
        return (lc, vec![]);
    }
    let df = f.derivative();
    let a = f.gcd(&df);
    let mut b = f.exact_div(&a);
    let mut c = df.exact_div(&a);
    let mut d = c - b.derivative();
    let mut parts = Vec::new();
    loop {
        let g = b.gcd(&d);
        parts.push(g.clone());
        b = b.exact_div(&g);
        if b.is_constant() {
            break;
        }
        c = d.exact_div(&g);
        d = c - b.derivative();
    }
    while parts.last().is_some_and(|q| q.is_constant()) {
        parts.pop();
    }
    (lc, parts)
}

impl<R: Ring> Ring for Poly<R> {
    fn zero() -> Self {
        Poly { c: vec![] }
    }
    fn one() -> Self {
        Poly::constant(R::one())
    }
    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    fn from_i64(n: i64) -> Self {
        Poly::constant(R::from_i64(n))
    }
}

fn add_vec<R: Ring>(a: &[R], b: &[R]) -> Vec<R> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| match (a.get(k), b.get(k)) {
            (Some(x), Some(y)) => x.clone() + y.clone(),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        })
        .collect()
}

fn mul_vec<R: Ring>(a: &[R], b: &[R]) -> Vec<R> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![R::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

impl<'a, R: Ring> Add<&'a Poly<R>> for &'a Poly<R> {
    type Output = Poly<R>;
    fn add(self, o: &'a Poly<R>) -> Poly<R> {
        Poly::new(add_vec(&self.c, &o.c))
    }
}

impl<'a, R: Ring> Sub<&'a Poly<R>> for &'a Poly<R> {
    type Output = Poly<R>;
    fn sub(self, o: &'a Poly<R>) -> Poly<R> {
        let neg: Vec<R> = o.c.iter().map(|z| -z.clone()).collect();
        Poly::new(add_vec(&self.c, &neg))
    }
}

impl<'a, R: Ring> Mul<&'a Poly<R>> for &'a Poly<R> {
    type Output = Poly<R>;
    fn mul(self, o: &'a Poly<R>) -> Poly<R> {
        Poly::new(mul_vec(&self.c, &o.c))
    }
}

impl<R: Ring> Add for Poly<R> {
    type Output = Poly<R>;
    fn add(self, o: Poly<R>) -> Poly<R> {
        &self + &o
    }
}

impl<R: Ring> Sub for Poly<R> {
    type Output = Poly<R>;
    fn sub(self, o: Poly<R>) -> Poly<R> {
        &self - &o
    }
}

impl<R: Ring> Mul for Poly<R> {
    type Output = Poly<R>;
    fn mul(self, o: Poly<R>) -> Poly<R> {
        &self * &o
    }
}

impl<R: Ring> Neg for Poly<R> {
    type Output = Poly<R>;
    fn neg(self) -> Poly<R> {
        Poly { c: self.c.into_iter().map(|z| -z).collect() }
    }
}

impl<R: Ring> Neg for &Poly<R> {
    type Output = Poly<R>;
    fn neg(self) -> Poly<R> {
        -self.clone()
    }
}

impl<R: Ring> BiPoly<R> {
    /// Coefficient of `x^i y^j` (outer index is the power of `y`).
    pub fn coeff_xy(&self, i: usize, j: usize) -> R {
        self.coeff_ref(j).map(|p| p.coeff(i)).unwrap_or_else(R::zero)
    }

    pub fn from_terms(terms: &[(usize, usize, R)]) -> BiPoly<R> {
        let ny = terms.iter().map(|t| t.1 + 1).max().unwrap_or(0);
        let mut rows: Vec<Vec<R>> = vec![vec![]; ny];
        for (i, j, c) in terms {
            let row = &mut rows[*j];
            if row.len() <= *i {
                row.resize(*i + 1, R::zero());
            }
            row[*i] = row[*i].clone() + c.clone();
        }
        Poly::new(rows.into_iter().map(Poly::new).collect())
    }

    /// Nonzero terms as `(i, j, coefficient)` sorted by `(i, j)`.
    pub fn terms(&self) -> Vec<(usize, usize, R)> {
        let mut out = Vec::new();
        for (j, row) in self.coeffs().iter().enumerate() {
            for (i, c) in row.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    out.push((i, j, c.clone()));
                }
            }
        }
        out.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        out
    }

    /// Substitutes `x = 0`, giving a polynomial in `y`.
    pub fn at_x_zero(&self) -> Poly<R> {
        Poly::new(self.coeffs().iter().map(|p| p.coeff(0)).collect())
    }

    /// Substitutes `y = 0`, giving a polynomial in `x`.
    pub fn at_y_zero(&self) -> Poly<R> {
        self.coeff(0)
    }

    /// Swaps the roles of `x` and `y`.
    pub fn transpose(&self) -> BiPoly<R> {
        let terms: Vec<_> = self.terms().into_iter().map(|(i, j, c)| (j, i, c)).collect();
        BiPoly::from_terms(&terms)
    }

    /// Substitutes a value for `x`, leaving a polynomial in `y`.
    pub fn eval_x(&self, x: &R) -> Poly<R> {
        Poly::new(self.coeffs().iter().map(|p| p.eval(x)).collect())
    }
}
