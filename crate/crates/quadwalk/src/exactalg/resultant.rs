use super::{AlgError, Field, Poly, Ring};

/// Sylvester matrix of `p` (degree m) and `q` (degree n) in the outer
/// variable: n shifted rows of p's coefficients followed by m shifted rows of
/// q's, leading coefficients first.
pub fn sylvester_matrix<R: Ring>(p: &Poly<R>, q: &Poly<R>) -> Vec<Vec<R>> {
    let m = p.degree().unwrap_or(0);
    let n = q.degree().unwrap_or(0);
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for (src, deg, count) in [(p, m, n), (q, n, m)] {
        for r in 0..count {
            let mut row = vec![R::zero(); size];
            for k in 0..=deg {
                row[r + k] = src.coeff(deg - k);
            }
            rows.push(row);
        }
    }
    rows
}

/// Resultant with respect to the outer variable, with the convention
/// `Res(p, q) = det(Sylvester(p, q)) = lc(p)^n * prod_{p(r)=0} q(r)`.
/// For example `Res_y(y - x, y + x) = 2x` and `Res_y(y^2 - x, y) = -x`.
pub fn resultant<F: Field>(p: &Poly<Poly<F>>, q: &Poly<Poly<F>>) -> Result<Poly<F>, AlgError> {
    let (Some(m), Some(n)) = (p.degree(), q.degree()) else {
        return Ok(Poly::zero());
    };
    if m == 0 && n == 0 {
        return Err(AlgError::BothConstantInVariable);
    }
    Ok(bareiss_det(sylvester_matrix(p, q)))
}

/// Fraction-free Gaussian elimination over `F[x]`; every division is exact.
fn bareiss_det<F: Field>(mut a: Vec<Vec<Poly<F>>>) -> Poly<F> {
    let n = a.len();
    if n == 0 {
        return Poly::one();
    }
    let mut negate = false;
    let mut prev = Poly::<F>::one();
    for k in 0..n - 1 {
        if Ring::is_zero(&a[k][k]) {
            match (k + 1..n).find(|&i| !Ring::is_zero(&a[i][k])) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return Poly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = v.exact_div(&prev);
            }
            a[i][k] = Poly::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}
