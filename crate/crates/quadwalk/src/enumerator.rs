//! Exact enumeration of weighted quadrant walks with boundary contacts.
//!
//! A contact with the x-axis is an arrival (after step `i >= 1`) at a point
//! with second coordinate 0 and costs a factor `a`; the y-axis is symmetric
//! with `b`. The empty walk has weight 1.

use serde::Serialize;
use thiserror::Error;

use crate::exactalg::{BiPoly, Poly, Rat, Ring, TriPoly};
use crate::model::{Model, Step};
use crate::par::{self, Exec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("functional equation residual is nonzero at t^{n}: coefficient {coeff} of x^{i} y^{j}")]
    ResidualNonZero { n: usize, i: usize, j: usize, coeff: Rat },
}

/// `Q(x, y) mod t^(N+1)`: `terms[n]` is the coefficient of `t^n`, a
/// polynomial in `x, y` (outer variable `y`).
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesTruncation {
    terms: Vec<BiPoly<Rat>>,
}

impl SeriesTruncation {
    pub fn order(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn terms(&self) -> &[BiPoly<Rat>] {
        &self.terms
    }

    pub fn term(&self, n: usize) -> &BiPoly<Rat> {
        &self.terms[n]
    }

    /// Coefficients of `Q(x, 0)`, one polynomial in `x` per power of `t`.
    pub fn x_axis(&self) -> Vec<Poly<Rat>> {
        self.terms.iter().map(|p| p.at_y_zero()).collect()
    }

    /// Coefficients of `Q(0, y)`.
    pub fn y_axis(&self) -> Vec<Poly<Rat>> {
        self.terms.iter().map(|p| p.at_x_zero()).collect()
    }

    /// Coefficients of `Q(1, 1)`.
    pub fn at_one(&self) -> Vec<Rat> {
        self.terms.iter().map(|p| sum_all(p)).collect()
    }

    /// Coefficients of `Q(1, 0)` (walks ending on the x-axis).
    pub fn x_axis_at_one(&self) -> Vec<Rat> {
        self.x_axis().iter().map(sum_coeffs).collect()
    }

    /// Coefficients of `Q(0, 1)`.
    pub fn y_axis_at_one(&self) -> Vec<Rat> {
        self.y_axis().iter().map(sum_coeffs).collect()
    }

    /// Each term as `(i, j, "p/q")` triples sorted by `(i, j)`.
    pub fn to_json(&self) -> String {
        let out: Vec<Vec<(usize, usize, String)>> = self
            .terms
            .iter()
            .map(|p| p.terms().into_iter().map(|(i, j, c)| (i, j, c.to_string())).collect())
            .collect();
        serde_json::to_string(&SeriesJson(out)).expect("series serializes")
    }
}

#[derive(Serialize)]
#[serde(transparent)]
struct SeriesJson(Vec<Vec<(usize, usize, String)>>);

fn sum_coeffs(p: &Poly<Rat>) -> Rat {
    p.coeffs().iter().fold(Rat::zero(), |acc, c| acc + c.clone())
}

fn sum_all(p: &BiPoly<Rat>) -> Rat {
    p.coeffs().iter().fold(Rat::zero(), |acc, row| acc + sum_coeffs(row))
}

/// `Q(x, y) mod t^(n+1)` in the default execution mode.
pub fn enumerate(model: &Model, n: usize) -> SeriesTruncation {
    enumerate_with(model, n, Exec::default())
}

/// Layered DP over positions; each layer is computed row by row (fixed `i`),
/// rows in parallel when `exec` allows it.
pub fn enumerate_with(model: &Model, n: usize, exec: Exec) -> SeriesTruncation {
    let steps: Vec<((i64, i64), Rat)> = model
        .steps()
        .into_iter()
        .map(|(s, w)| {
            let (dx, dy) = s.vector();
            ((dx as i64, dy as i64), w)
        })
        .collect();
    let a = model.a().clone();
    let b = model.b().clone();
    let size = n + 1;
    let mut layer: Vec<Vec<Rat>> = vec![vec![Rat::zero(); size]; size];
    layer[0][0] = Rat::one();
    let mut terms = vec![BiPoly::constant(Poly::one())];
    for len in 1..=n {
        let old = &layer;
        let next: Vec<Vec<Rat>> = par::map_range_with(exec, size, |i| {
            let mut row = vec![Rat::zero(); size];
            if i > len {
                return row;
            }
            for (j, cell) in row.iter_mut().enumerate().take(len + 1) {
                let mut acc = Rat::zero();
                for ((dx, dy), w) in &steps {
                    let (pi, pj) = (i as i64 - dx, j as i64 - dy);
                    if pi < 0 || pj < 0 || pi as usize >= size || pj as usize >= size {
                        continue;
                    }
                    let prev = &old[pi as usize][pj as usize];
                    if !prev.is_zero() {
                        acc = acc + prev * w;
                    }
                }
                if acc.is_zero() {
                    continue;
                }
                if j == 0 {
                    acc = acc * &a;
                }
                if i == 0 {
                    acc = acc * &b;
                }
                *cell = acc;
            }
            row
        });
        layer = next;
        let mut cells = Vec::new();
        for (i, row) in layer.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    cells.push((i, j, c.clone()));
                }
            }
        }
        terms.push(BiPoly::from_terms(&cells));
    }
    SeriesTruncation { terms }
}

/// Splits a polynomial in `x, y, t` into its `t^k` coefficients.
fn by_t_power(p: &TriPoly) -> Vec<BiPoly<Rat>> {
    let mut buckets: Vec<Vec<(usize, usize, Rat)>> = Vec::new();
    for (i, j, c) in p.terms() {
        for (k, v) in c.coeffs().iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            if buckets.len() <= k {
                buckets.resize(k + 1, Vec::new());
            }
            buckets[k].push((i, j, v.clone()));
        }
    }
    buckets.iter().map(|b| BiPoly::from_terms(b)).collect()
}

fn lift_x(p: &Poly<Rat>) -> BiPoly<Rat> {
    BiPoly::constant(p.clone())
}

fn lift_y(p: &Poly<Rat>) -> BiPoly<Rat> {
    Poly::new(p.coeffs().iter().map(|c| Poly::constant(c.clone())).collect())
}

/// `K Q - (omega xy + x^2 y gamma1 Q(x,0) + x y^2 gamma2 Q(0,y))` modulo
/// `t^(N+1)`, one polynomial per power of `t`.
pub fn residual(model: &Model, series: &SeriesTruncation) -> Vec<BiPoly<Rat>> {
    let fe = model.functional_equation_coeffs();
    let k = by_t_power(&fe.kernel);
    let w = by_t_power(&fe.omega_term);
    let gx = by_t_power(&fe.x_axis_coeff);
    let gy = by_t_power(&fe.y_axis_coeff);
    let qx: Vec<BiPoly<Rat>> = series.x_axis().iter().map(lift_x).collect();
    let qy: Vec<BiPoly<Rat>> = series.y_axis().iter().map(lift_y).collect();
    let conv = |coef: &[BiPoly<Rat>], q: &[BiPoly<Rat>], n: usize| {
        let mut acc = BiPoly::<Rat>::zero();
        for (kk, c) in coef.iter().enumerate().take(n + 1) {
            acc = acc + c * &q[n - kk];
        }
        acc
    };
    (0..=series.order())
        .map(|n| {
            let lhs = conv(&k, series.terms(), n);
            let mut rhs = w.get(n).cloned().unwrap_or_else(BiPoly::zero);
            rhs = rhs + conv(&gx, &qx, n) + conv(&gy, &qy, n);
            lhs - rhs
        })
        .collect()
}

/// Checks that the functional equation holds to the series' order.
pub fn check_residual(model: &Model, series: &SeriesTruncation) -> Result<(), EnumError> {
    for (n, r) in residual(model, series).iter().enumerate() {
        if let Some((i, j, coeff)) = r.terms().into_iter().next() {
            return Err(EnumError::ResidualNonZero { n, i, j, coeff });
        }
    }
    Ok(())
}

/// Weight of a single walk given as a step sequence, or `None` if it leaves
/// the quadrant. Mirrors the contact rule directly.
pub fn walk_weight(model: &Model, walk: &[Step]) -> Option<Rat> {
    let (mut x, mut y) = (0i32, 0i32);
    let mut w = Rat::one();
    for s in walk {
        let (dx, dy) = s.vector();
        x += dx;
        y += dy;
        if x < 0 || y < 0 {
            return None;
        }
        w = w * model.d(*s);
        if y == 0 {
            w = w * model.a();
        }
        if x == 0 {
            w = w * model.b();
        }
    }
    Some(w)
}
