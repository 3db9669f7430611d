use super::{Field, Poly, Rat, Ring};

/// Truncated power series `sum_{n < len} c_n t^n` whose coefficients live in
/// a ring that is also a `Q`-vector space (rationals, or polynomials in `x`).
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries<R> {
    coeffs: Vec<R>,
}

/// Rings on which rationals act by scaling.
pub trait RatScale: Ring {
    fn scale_rat(&self, r: &Rat) -> Self;
}

impl RatScale for Rat {
    fn scale_rat(&self, r: &Rat) -> Rat {
        self * r
    }
}

impl RatScale for Poly<Rat> {
    fn scale_rat(&self, r: &Rat) -> Poly<Rat> {
        self.scale(r)
    }
}

impl<R: RatScale> PowerSeries<R> {
    /// Series with the given coefficients, padded with zeros to `len`.
    pub fn new(mut coeffs: Vec<R>, len: usize) -> PowerSeries<R> {
        coeffs.resize(len, R::zero());
        PowerSeries { coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &R {
        &self.coeffs[n]
    }

    pub fn mul(&self, o: &PowerSeries<R>) -> PowerSeries<R> {
        let n = self.len().min(o.len());
        let mut out = vec![R::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(n - i) {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        PowerSeries { coeffs: out }
    }

    /// `self^alpha` for a series with constant term 1, via the recurrence
    /// `n h_n = sum_{k=1}^n ((alpha+1) k - n) f_k h_{n-k}`.
    pub fn pow_rat(&self, alpha: &Rat) -> PowerSeries<R> {
        assert!(
            !self.is_empty() && self.coeffs[0].is_one(),
            "power of a series needs constant term 1"
        );
        let n = self.len();
        let mut h: Vec<R> = Vec::with_capacity(n);
        h.push(R::one());
        let a1 = alpha + &Rat::one();
        for m in 1..n {
            let mut acc = R::zero();
            for k in 1..=m {
                let f = &self.coeffs[k];
                if f.is_zero() {
                    continue;
                }
                let w = &(&a1 * &Rat::from(k as i64)) - &Rat::from(m as i64);
                if w.is_zero() {
                    continue;
                }
                acc = acc + (f.clone() * h[m - k].clone()).scale_rat(&w);
            }
            h.push(acc.scale_rat(&Rat::new(1, m as i64)));
        }
        PowerSeries { coeffs: h }
    }

    pub fn inverse(&self) -> PowerSeries<R> {
        self.pow_rat(&Rat::from(-1))
    }
}

impl PowerSeries<Rat> {
    /// Power series of a polynomial in `t` truncated to `len` terms.
    pub fn from_poly(p: &Poly<Rat>, len: usize) -> PowerSeries<Rat> {
        PowerSeries::new(p.coeffs().iter().take(len).cloned().collect(), len)
    }

    /// Series of `num/den` with `den(0) != 0`.
    pub fn from_fraction(num: &Poly<Rat>, den: &Poly<Rat>, len: usize) -> PowerSeries<Rat> {
        let d0 = den.coeff(0);
        assert!(!d0.is_zero(), "denominator vanishes at t = 0");
        let inv0 = d0.inv();
        let mut out: Vec<Rat> = Vec::with_capacity(len);
        for k in 0..len {
            let mut acc = num.coeff(k);
            for j in 1..=k {
                let dj = den.coeff(j);
                if !dj.is_zero() {
                    acc = acc - &dj * &out[k - j];
                }
            }
            out.push(acc * &inv0);
        }
        PowerSeries { coeffs: out }
    }
}
