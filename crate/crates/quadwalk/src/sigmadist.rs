//! σ-distances between points of the kernel curve and the two distance
//! matrices built on the critical sets.
//!
//! For a point `P` the orbit `σ^n P` is computed exactly on a window around
//! `n = 0`. Outside the window only valuations are tracked: once the
//! bivaluation `(i, j)` satisfies `i < j < 0` every further σ-step maps it
//! to `(i - 2δ, j - 2δ)` with `δ = j - i`, and symmetrically backwards
//! once `j < i < 0`. Since these tails are injective, comparing valuations
//! leaves at most one candidate per tail, and every candidate is checked by
//! exact point equality.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::curve::{critical_sets, CriticalSets, Curve, CurveError, CurvePoint};
use crate::exactalg::{Rat, Val};
use crate::par::{self, Exec};

pub const DEFAULT_WINDOW: usize = 5;
pub const MAX_WINDOW: usize = 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SigmaError {
    #[error("valuation step does not apply to {0}")]
    RegimeNotApplicable(Bivaluation),
    #[error("orbit did not enter the valuation regime within {0} steps")]
    OrbitRegimeNotReached(usize),
    #[error("window must lie in [2, {MAX_WINDOW}], got {0}")]
    InvalidWindow(usize),
    #[error("derived entry ({row}, {col}) of {which} is {derived} but direct computation gives {direct}")]
    MatrixIdentityFailed { which: Which, row: usize, col: usize, derived: SigmaDistance, direct: SigmaDistance },
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// `(v(x1), v(y1))`, `+∞` for a coordinate equal to 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bivaluation {
    pub vx: Val,
    pub vy: Val,
}

impl Bivaluation {
    pub fn new(vx: Val, vy: Val) -> Bivaluation {
        Bivaluation { vx, vy }
    }

    pub fn finite(i: i64, j: i64) -> Bivaluation {
        Bivaluation::new(Val::int(i), Val::int(j))
    }

    fn pair(&self) -> Option<(&Rat, &Rat)> {
        Some((self.vx.finite()?, self.vy.finite()?))
    }
}

impl fmt::Display for Bivaluation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.vx, self.vy)
    }
}

pub fn bivaluation(p: &CurvePoint) -> Bivaluation {
    let (vx, vy) = p.bivaluation();
    Bivaluation { vx, vy }
}

fn two(r: &Rat) -> Rat {
    r + r
}

/// Valuation of `σ P` from that of `P`: `iota1` needs `i < 0` and gives
/// `(i, 2i - j)`, then `iota2` needs `2i - j < 0`.
pub fn step_valuation_forward(v: &Bivaluation) -> Result<Bivaluation, SigmaError> {
    let err = || SigmaError::RegimeNotApplicable(v.clone());
    let (i, j) = v.pair().ok_or_else(err)?;
    if i.signum() >= 0 {
        return Err(err());
    }
    let j1 = &two(i) - j;
    if j1.signum() >= 0 {
        return Err(err());
    }
    let i1 = &two(&j1) - i;
    Ok(Bivaluation::new(Val::Fin(i1), Val::Fin(j1)))
}

/// Valuation of `σ^-1 P`: `iota2` needs `j < 0`, then `iota1` needs `2j - i < 0`.
pub fn step_valuation_backward(v: &Bivaluation) -> Result<Bivaluation, SigmaError> {
    let err = || SigmaError::RegimeNotApplicable(v.clone());
    let (i, j) = v.pair().ok_or_else(err)?;
    if j.signum() >= 0 {
        return Err(err());
    }
    let i1 = &two(j) - i;
    if i1.signum() >= 0 {
        return Err(err());
    }
    let j1 = &two(&i1) - j;
    Ok(Bivaluation::new(Val::Fin(i1), Val::Fin(j1)))
}

/// An integer or the no-relation marker `⊥`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SigmaDistance {
    Finite(i64),
    Bot,
}

impl SigmaDistance {
    pub fn value(self) -> Option<i64> {
        match self {
            SigmaDistance::Finite(n) => Some(n),
            SigmaDistance::Bot => None,
        }
    }

    pub fn is_bot(self) -> bool {
        self == SigmaDistance::Bot
    }

    /// `⊥ + n = ⊥`.
    pub fn plus(self, k: i64) -> SigmaDistance {
        match self {
            SigmaDistance::Finite(n) => SigmaDistance::Finite(n + k),
            SigmaDistance::Bot => SigmaDistance::Bot,
        }
    }

    pub fn neg(self) -> SigmaDistance {
        match self {
            SigmaDistance::Finite(n) => SigmaDistance::Finite(-n),
            SigmaDistance::Bot => SigmaDistance::Bot,
        }
    }

    /// Negative integer or `⊥`.
    pub fn is_negative_or_bot(self) -> bool {
        self.value().is_none_or(|n| n < 0)
    }
}

impl fmt::Display for SigmaDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SigmaDistance::Finite(n) => write!(f, "{n}"),
            SigmaDistance::Bot => write!(f, "bot"),
        }
    }
}

impl Serialize for SigmaDistance {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            SigmaDistance::Finite(n) => s.serialize_i64(*n),
            SigmaDistance::Bot => s.serialize_str("bot"),
        }
    }
}

/// Valuation tail `v(σ^(n0 ± k) P) = (i - 2δk, j - 2δk)`, `k ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tail {
    pub n0: i64,
    pub i: Rat,
    pub j: Rat,
    pub delta: Rat,
}

impl Tail {
    /// The `k ≥ 1` with `(i - 2δk, j - 2δk) = v`, if any.
    fn solve(&self, v: &Bivaluation) -> Option<i64> {
        let (i1, j1) = v.pair()?;
        if &(&self.i - i1) != &(&self.j - j1) {
            return None;
        }
        let k = &(&self.i - i1) / &two(&self.delta);
        let k = k.to_i64()?;
        (k >= 1).then_some(k)
    }

    pub fn valuation(&self, k: i64) -> Bivaluation {
        let s = &two(&self.delta) * &Rat::from(k);
        Bivaluation::new(Val::Fin(&self.i - &s), Val::Fin(&self.j - &s))
    }
}

/// Explicit orbit points on a window plus the two certified valuation tails.
#[derive(Debug, Clone)]
pub struct OrbitProfile {
    /// Index of `points[0]`.
    pub first: i64,
    pub points: Vec<CurvePoint>,
    pub valuations: Vec<Bivaluation>,
    pub forward: Tail,
    pub backward: Tail,
}

fn forward_entry(v: &Bivaluation) -> Option<(Rat, Rat)> {
    let (i, j) = v.pair()?;
    (i < j && j.signum() < 0).then(|| (i.clone(), j.clone()))
}

fn backward_entry(v: &Bivaluation) -> Option<(Rat, Rat)> {
    let (i, j) = v.pair()?;
    (j < i && i.signum() < 0).then(|| (i.clone(), j.clone()))
}

/// Computes `σ^n P` for `n ∈ [-W, W]` and extends either side up to
/// [`MAX_WINDOW`] until its tail is certified.
pub fn orbit_profile(curve: &Curve, p: &CurvePoint, window: usize) -> Result<OrbitProfile, SigmaError> {
    if !(2..=MAX_WINDOW).contains(&window) {
        return Err(SigmaError::InvalidWindow(window));
    }
    curve.check(p)?;
    let mut fwd = vec![p.clone()];
    let mut fwd_val = vec![bivaluation(p)];
    let mut entry = None;
    loop {
        let n = fwd.len() - 1;
        if entry.is_none() {
            entry = forward_entry(&fwd_val[n]).map(|e| (n, e));
        }
        if n >= window && entry.is_some() {
            break;
        }
        if n >= MAX_WINDOW {
            return Err(SigmaError::OrbitRegimeNotReached(MAX_WINDOW));
        }
        let q = curve.sigma(&fwd[n]);
        fwd_val.push(bivaluation(&q));
        fwd.push(q);
    }
    let (nf, (i, j)) = entry.expect("loop exits with an entry");
    let delta = &j - &i;
    let forward = Tail { n0: nf as i64, i, j, delta };

    let mut bwd = vec![p.clone()];
    let mut bwd_val = vec![bivaluation(p)];
    let mut entry = None;
    loop {
        let n = bwd.len() - 1;
        if entry.is_none() {
            entry = backward_entry(&bwd_val[n]).map(|e| (n, e));
        }
        if n >= window && entry.is_some() {
            break;
        }
        if n >= MAX_WINDOW {
            return Err(SigmaError::OrbitRegimeNotReached(MAX_WINDOW));
        }
        let q = curve.sigma_inv(&bwd[n]);
        bwd_val.push(bivaluation(&q));
        bwd.push(q);
    }
    let (nb, (i, j)) = entry.expect("loop exits with an entry");
    let delta = &i - &j;
    let backward = Tail { n0: -(nb as i64), i, j, delta };

    let first = -((bwd.len() - 1) as i64);
    let mut points: Vec<CurvePoint> = bwd.into_iter().skip(1).rev().collect();
    let mut valuations: Vec<Bivaluation> = bwd_val.into_iter().skip(1).rev().collect();
    points.extend(fwd);
    valuations.extend(fwd_val);
    Ok(OrbitProfile { first, points, valuations, forward, backward })
}

impl OrbitProfile {
    pub fn last(&self) -> i64 {
        self.first + self.points.len() as i64 - 1
    }

    /// Valuation of `σ^n P` for any `n`.
    pub fn valuation(&self, n: i64) -> Bivaluation {
        if n > self.last() {
            self.forward.valuation(n - self.forward.n0)
        } else if n < self.first {
            self.backward.valuation(self.backward.n0 - n)
        } else {
            self.valuations[(n - self.first) as usize].clone()
        }
    }

    /// The indices `n` whose valuation matches `v`, by increasing `|n|`.
    pub fn candidates(&self, v: &Bivaluation) -> Vec<i64> {
        let mut out: Vec<i64> = self
            .valuations
            .iter()
            .enumerate()
            .filter(|(_, w)| *w == v)
            .map(|(k, _)| self.first + k as i64)
            .collect();
        if let Some(k) = self.forward.solve(v) {
            let n = self.forward.n0 + k;
            if n > self.last() {
                out.push(n);
            }
        }
        if let Some(k) = self.backward.solve(v) {
            let n = self.backward.n0 - k;
            if n < self.first {
                out.push(n);
            }
        }
        out.sort_by_key(|n| (n.unsigned_abs(), *n));
        out
    }

    fn point(&self, curve: &Curve, n: i64) -> CurvePoint {
        if (self.first..=self.last()).contains(&n) {
            self.points[(n - self.first) as usize].clone()
        } else if n > self.last() {
            curve.sigma_pow(self.points.last().expect("nonempty"), n - self.last())
        } else {
            curve.sigma_pow(&self.points[0], n - self.first)
        }
    }

    /// `δ(P, q)` for the profiled point `P`.
    pub fn distance_to(&self, curve: &Curve, q: &CurvePoint) -> SigmaDistance {
        let v = bivaluation(q);
        for n in self.candidates(&v) {
            if self.point(curve, n) == *q {
                return SigmaDistance::Finite(n);
            }
        }
        SigmaDistance::Bot
    }
}

/// `n` with `σ^n P = Q`, or `⊥`.
pub fn sigma_distance(
    curve: &Curve,
    p: &CurvePoint,
    q: &CurvePoint,
    window: usize,
) -> Result<SigmaDistance, SigmaError> {
    curve.check(q)?;
    Ok(orbit_profile(curve, p, window)?.distance_to(curve, q))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Which {
    M1,
    M2,
}

impl fmt::Display for Which {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

pub const M1_ROWS: [&str; 4] = ["P1", "P2", "iota2 P3", "iota2 P4"];
pub const M1_COLS: [&str; 4] = ["iota1 P1", "iota1 P2", "sigma^-1 P3", "sigma^-1 P4"];
pub const M2_ROWS: [&str; 4] = ["sigma P1", "sigma P2", "iota2 P3", "iota2 P4"];
pub const M2_COLS: [&str; 4] = ["iota1 P1", "iota1 P2", "P3", "P4"];

/// Entry `(r, c)` is `δ(row point r, column point c)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceMatrix {
    pub which: Which,
    pub rows: [&'static str; 4],
    pub cols: [&'static str; 4],
    pub entries: [[SigmaDistance; 4]; 4],
}

impl DistanceMatrix {
    pub fn new(which: Which, entries: [[SigmaDistance; 4]; 4]) -> DistanceMatrix {
        let (rows, cols) = match which {
            Which::M1 => (M1_ROWS, M1_COLS),
            Which::M2 => (M2_ROWS, M2_COLS),
        };
        DistanceMatrix { which, rows, cols, entries }
    }

    pub fn get(&self, r: usize, c: usize) -> SigmaDistance {
        self.entries[r][c]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..4).all(|r| (0..4).all(|c| self.entries[r][c] == self.entries[c][r]))
    }

    pub fn all_negative_or_bot(&self) -> bool {
        self.entries.iter().flatten().all(|d| d.is_negative_or_bot())
    }

    /// Positions of the entries that are integers `>= 0`.
    pub fn nonnegative_entries(&self) -> Vec<(usize, usize, i64)> {
        let mut out = Vec::new();
        for r in 0..4 {
            for c in 0..4 {
                if let Some(n) = self.entries[r][c].value().filter(|n| *n >= 0) {
                    out.push((r, c, n));
                }
            }
        }
        out
    }

    /// Rows (0-based) consisting of `⊥` only.
    pub fn bot_rows(&self) -> Vec<usize> {
        (0..4).filter(|&r| self.entries[r].iter().all(|d| d.is_bot())).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("matrix serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.which);
        let w = 12;
        s.push_str(&format!("{:w$}", ""));
        for c in &self.cols {
            s.push_str(&format!("{c:>w$}"));
        }
        s.push('\n');
        for (r, row) in self.rows.iter().enumerate() {
            s.push_str(&format!("{row:w$}"));
            for d in &self.entries[r] {
                s.push_str(&format!("{:>w$}", d.to_string()));
            }
            s.push('\n');
        }
        s
    }
}

/// `M2 = M1 + block(-J2, 0; 0, J2)`.
pub fn shift_blocks(m1: &DistanceMatrix) -> DistanceMatrix {
    let mut e = m1.entries;
    for (r, row) in e.iter_mut().enumerate() {
        for (c, d) in row.iter_mut().enumerate() {
            let k = match (r < 2, c < 2) {
                (true, true) => -1,
                (false, false) => 1,
                _ => 0,
            };
            *d = d.plus(k);
        }
    }
    DistanceMatrix::new(Which::M2, e)
}

/// Options for [`build_matrices_with`].
#[derive(Debug, Clone, Copy)]
pub struct MatrixOptions {
    pub window: usize,
    pub exec: Exec,
    /// Seed choosing the `M2` entries that are recomputed directly.
    pub seed: u64,
    pub spot_checks: usize,
}

impl Default for MatrixOptions {
    fn default() -> MatrixOptions {
        MatrixOptions { window: DEFAULT_WINDOW, exec: Exec::default(), seed: 0, spot_checks: 4 }
    }
}

/// `M1` and `M2` with default options.
pub fn build_matrices(curve: &Curve) -> Result<(DistanceMatrix, DistanceMatrix), SigmaError> {
    build_matrices_with(curve, &MatrixOptions::default())
}

/// Computes the 10 entries of `M1` on and above the diagonal, fills the rest
/// by symmetry, derives `M2` by the block shift and recomputes a few random
/// `M2` entries directly.
pub fn build_matrices_with(
    curve: &Curve,
    opts: &MatrixOptions,
) -> Result<(DistanceMatrix, DistanceMatrix), SigmaError> {
    let sets = critical_sets(curve)?;
    let profiles = profiles(curve, &sets.l1_minus, opts)?;
    let pairs: Vec<(usize, usize)> = (0..4).flat_map(|r| (r..4).map(move |c| (r, c))).collect();
    let upper = par::map_with(opts.exec, &pairs, |&(r, c)| profiles[r].distance_to(curve, &sets.l1_plus[c]));
    let mut e = [[SigmaDistance::Bot; 4]; 4];
    for (&(r, c), d) in pairs.iter().zip(upper) {
        e[r][c] = d;
        e[c][r] = d;
    }
    let m1 = DistanceMatrix::new(Which::M1, e);
    let m2 = shift_blocks(&m1);
    spot_check(curve, &sets, &m2, opts)?;
    Ok((m1, m2))
}

fn profiles(curve: &Curve, pts: &[CurvePoint], opts: &MatrixOptions) -> Result<Vec<OrbitProfile>, SigmaError> {
    par::map_with(opts.exec, pts, |p| orbit_profile(curve, p, opts.window)).into_iter().collect()
}

fn spot_check(
    curve: &Curve,
    sets: &CriticalSets,
    m2: &DistanceMatrix,
    opts: &MatrixOptions,
) -> Result<(), SigmaError> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let picks = rand::seq::index::sample(&mut rng, 16, opts.spot_checks.min(16)).into_vec();
    let direct = par::map_with(opts.exec, &picks, |&k| {
        let (r, c) = (k / 4, k % 4);
        sigma_distance(curve, &sets.l2_minus[r], &sets.l2_plus[c], opts.window).map(|d| (r, c, d))
    });
    for res in direct {
        let (r, c, d) = res?;
        if m2.get(r, c) != d {
            return Err(SigmaError::MatrixIdentityFailed {
                which: Which::M2,
                row: r,
                col: c,
                derived: m2.get(r, c),
                direct: d,
            });
        }
    }
    Ok(())
}

/// All 32 entries of `M1` and `M2` computed directly, without symmetry.
pub fn direct_matrices(
    curve: &Curve,
    window: usize,
    exec: Exec,
) -> Result<(DistanceMatrix, DistanceMatrix), SigmaError> {
    let sets = critical_sets(curve)?;
    let opts = MatrixOptions { window, exec, ..MatrixOptions::default() };
    let mut out = Vec::new();
    for (which, minus, plus) in [(Which::M1, &sets.l1_minus, &sets.l1_plus), (Which::M2, &sets.l2_minus, &sets.l2_plus)] {
        let prof = profiles(curve, minus, &opts)?;
        let flat = par::map_range_with(exec, 16, |k| prof[k / 4].distance_to(curve, &plus[k % 4]));
        let mut e = [[SigmaDistance::Bot; 4]; 4];
        for (k, d) in flat.into_iter().enumerate() {
            e[k / 4][k % 4] = d;
        }
        out.push(DistanceMatrix::new(which, e));
    }
    let m2 = out.pop().expect("two matrices");
    let m1 = out.pop().expect("two matrices");
    Ok((m1, m2))
}
