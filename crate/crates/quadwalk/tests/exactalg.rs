use proptest::prelude::*;
use quadwalk::exactalg::{
    puiseux_expand, resultant, square_free_decomposition, PowerSeries, Poly, QuadExt, Rat, RatFunc, Ring, Val,
};

fn r(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

fn px(c: &[i64]) -> Poly<Rat> {
    Poly::new(c.iter().map(|&n| Rat::from(n)).collect())
}

/// Polynomial in y whose coefficients are polynomials in x.
fn bipoly(c: &[&[i64]]) -> Poly<Poly<Rat>> {
    Poly::new(c.iter().map(|cs| px(cs)).collect())
}

#[test]
fn resultant_sign_convention() {
    // y - x and y + x
    let p = bipoly(&[&[0, -1], &[1]]);
    let q = bipoly(&[&[0, 1], &[1]]);
    assert_eq!(resultant(&p, &q).unwrap(), px(&[0, 2]));
    // y^2 - x and y
    let p = bipoly(&[&[0, -1], &[], &[1]]);
    let q = bipoly(&[&[], &[1]]);
    assert_eq!(resultant(&p, &q).unwrap(), px(&[0, -1]));
    assert_eq!(resultant(&q, &p).unwrap(), px(&[0, -1]));
}

#[test]
fn resultant_of_constants_is_refused() {
    let p = bipoly(&[&[1, 1]]);
    assert!(resultant(&p, &p).is_err());
}

#[test]
fn resultant_detects_common_root() {
    // (y - x)(y - 1) and (y - x)(y + 2)
    let a = bipoly(&[&[0, -1], &[1]]);
    let p = &a * &bipoly(&[&[-1], &[1]]);
    let q = &a * &bipoly(&[&[2], &[1]]);
    assert!(resultant(&p, &q).unwrap().is_zero());
}

#[test]
fn puiseux_of_a_unit_square_root() {
    let d = RatFunc::from_poly(px(&[1, 1]));
    let s = puiseux_expand(&QuadExt::sqrt(&d), &Rat::from(3)).unwrap();
    assert_eq!(s.ramification, 1);
    let want = [r(1, 1), r(1, 2), r(-1, 8), r(1, 16)];
    for (k, c) in want.iter().enumerate() {
        assert_eq!(&s.coeff_at(&Rat::from(k as i64)), c);
    }
}

#[test]
fn puiseux_with_half_exponents() {
    // sqrt(t + t^2) = t^(1/2) (1 + t/2 - t^2/8 + ...)
    let d = RatFunc::from_poly(px(&[0, 1, 1]));
    let s = puiseux_expand(&QuadExt::sqrt(&d), &Rat::from(2)).unwrap();
    assert_eq!(s.ramification, 2);
    assert_eq!(s.valuation, r(1, 2));
    assert_eq!(s.coeff_at(&r(1, 2)), Rat::one());
    assert_eq!(s.coeff_at(&r(3, 2)), r(1, 2));
    assert!(s.coeff_at(&Rat::one()).is_zero());
    assert_eq!(s.precision, r(5, 2));
}

#[test]
fn puiseux_of_a_mixed_element() {
    // t + 2 sqrt(4 t^2 + 4 t^3) = t + 4t (1 + t)^(1/2)
    let d = RatFunc::from_poly(px(&[0, 0, 4, 4]));
    let e = &QuadExt::from(RatFunc::t()) + &QuadExt::sqrt(&d).scale(&RatFunc::constant(Rat::from(2)));
    let s = puiseux_expand(&e, &Rat::from(3)).unwrap();
    assert_eq!(s.valuation, Rat::one());
    assert_eq!(s.coeff_at(&Rat::one()), Rat::from(5));
    assert_eq!(s.coeff_at(&Rat::from(2)), Rat::from(2));
    assert_eq!(s.coeff_at(&Rat::from(3)), r(-1, 2));
}

#[test]
fn puiseux_needs_a_rational_leading_root() {
    let d = RatFunc::from_poly(px(&[2, 1]));
    assert!(puiseux_expand(&QuadExt::sqrt(&d), &Rat::from(2)).is_err());
}

#[test]
fn square_detection() {
    assert_eq!(px(&[1, 2, 1]).sqrt_exact(), Some(px(&[1, 1])));
    assert_eq!(px(&[1, 0, 1]).sqrt_exact(), None);
    assert!(!px(&[1, 0, 1]).is_square_geometric());
    // 2x^2 is a square only after adjoining sqrt 2
    assert_eq!(px(&[0, 0, 2]).sqrt_exact(), None);
    assert!(px(&[0, 0, 2]).is_square_geometric());
    let p = px(&[1, 1]).pow(4) * px(&[-3, 0, 1]).pow(2);
    assert_eq!(p.sqrt_exact(), Some(px(&[1, 1]).pow(2) * px(&[-3, 0, 1])));
    assert_eq!((p.clone() * px(&[0, 1])).sqrt_exact(), None);
}

#[test]
fn square_free_parts() {
    let p = (px(&[1, 1]) * px(&[-2, 1]).pow(2)).scale(&Rat::from(3));
    let (lc, parts) = square_free_decomposition(&p);
    assert_eq!(lc, Rat::from(3));
    assert_eq!(parts, vec![px(&[1, 1]), px(&[-2, 1])]);
}

#[test]
fn quadext_valuation_and_conjugate() {
    let d = RatFunc::from_poly(px(&[0, 0, 1, 1]));
    let s = QuadExt::sqrt(&d);
    assert_eq!(s.valuation(), Val::int(1));
    assert_eq!(&s * &s, QuadExt::from(d.clone()));
    assert_eq!(s.norm(), -d);
    assert_eq!(QuadExt::zero().valuation(), Val::Inf);
}

#[test]
fn rational_parsing_and_decimals() {
    assert_eq!("6/4".parse::<Rat>().unwrap(), r(3, 2));
    assert_eq!(" -7 ".parse::<Rat>().unwrap(), Rat::from(-7));
    assert!("1/0".parse::<Rat>().is_err());
    assert!("x".parse::<Rat>().is_err());
    assert_eq!(r(-1, 3).to_decimal(4), "-0.3333");
    assert_eq!(r(5, 2).to_string(), "5/2");
}

fn small_poly() -> impl Strategy<Value = Poly<Rat>> {
    prop::collection::vec(-4i64..5, 0..4).prop_map(|c| px(&c))
}

fn small_bipoly() -> impl Strategy<Value = Poly<Poly<Rat>>> {
    prop::collection::vec(small_poly(), 1..4).prop_map(Poly::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn resultant_with_a_linear_factor_is_evaluation(a in small_poly(), q in small_bipoly()) {
        prop_assume!(q.degree().unwrap_or(0) > 0);
        let p = Poly::new(vec![-a.clone(), Poly::one()]);
        prop_assert_eq!(resultant(&p, &q).unwrap(), q.eval(&a));
    }

    #[test]
    fn resultant_is_multiplicative(f in small_bipoly(), g in small_bipoly(), h in small_bipoly()) {
        prop_assume!(f.degree().unwrap_or(0) > 0 && g.degree().unwrap_or(0) > 0 && h.degree().unwrap_or(0) > 0);
        let fg = &f * &g;
        let lhs = resultant(&fg, &h).unwrap();
        let rhs = resultant(&f, &h).unwrap() * resultant(&g, &h).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn squares_are_recognised(p in small_poly()) {
        prop_assume!(!p.is_zero());
        let sq = &p * &p;
        let root = sq.sqrt_exact().unwrap();
        prop_assert_eq!(&root * &root, sq);
    }

    #[test]
    fn series_square_root_squares_back(c in prop::collection::vec(-5i64..6, 1..6)) {
        let mut coeffs = vec![Rat::one()];
        coeffs.extend(c.iter().map(|&n| Rat::from(n)));
        let f = PowerSeries::new(coeffs, 8);
        let h = f.pow_rat(&r(1, 2));
        prop_assert_eq!(h.mul(&h), f.clone());
        prop_assert_eq!(f.mul(&f.inverse()), PowerSeries::new(vec![Rat::one()], 8));
    }

    #[test]
    fn ratfunc_field_laws(a in small_poly(), b in small_poly(), c in small_poly()) {
        prop_assume!(!b.is_zero() && !c.is_zero());
        let x = RatFunc::new(a.clone(), b.clone());
        let y = RatFunc::new(b, c);
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        prop_assert_eq!(&(&x * &y) / &y, x);
    }
}
