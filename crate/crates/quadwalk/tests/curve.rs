use quadwalk::curve::{
    check_nondegenerate, critical_points, critical_sets, curve_divisor, curve_zeros, degeneracy_factors,
    eval_laurent, root_multiplicity, solve_quadratic, Curve, CurvePoint,
};
use quadwalk::exactalg::{LaurentXY, Poly, QuadExt, Rat, RatFunc, Ring, Val};
use quadwalk::model::{Model, Step, StepSet, Weighting};

fn r(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

fn v(n: i64) -> Val {
    Val::int(n)
}

fn s1(a: Rat, b: Rat) -> Model {
    Model::unit(StepSet::S1, a, b)
}

fn sample_models() -> Vec<Model> {
    let mut out = Vec::new();
    for set in StepSet::ALL {
        for (a, b) in [(r(5, 1), r(7, 3)), (r(2, 1), r(2, 1)), (Rat::one(), r(3, 1)), (r(3, 2), Rat::one())] {
            out.push(Model::unit(set, a, b));
        }
    }
    let w = Weighting::new(
        &[
            (Step::SouthEast, r(2, 1)),
            (Step::NorthWest, r(1, 3)),
            (Step::East, r(3, 2)),
            (Step::North, r(5, 7)),
            (Step::NorthEast, r(1, 4)),
        ],
        r(4, 3),
        r(6, 1),
    );
    out.push(Model::new(StepSet::S5, w).unwrap());
    out
}

#[test]
fn s1_p2_coordinates_match_closed_form() {
    // x1(P2) = -d01 d1-1 t^2 / (d1-1 d-11 t^2 + A^2 - A), here with unit d's
    for a in [r(5, 1), r(3, 1), r(2, 1), r(4, 3)] {
        let m = s1(a, r(3, 1));
        let curve = Curve::new(&m);
        let cp = critical_points(&curve).unwrap();
        let aa = m.A().clone();
        let den = Poly::new(vec![&aa * &aa - aa.clone(), Rat::zero(), Rat::one()]);
        let x = RatFunc::new(Poly::monomial(-Rat::one(), 2), den.clone());
        assert_eq!(cp.p2.x1, QuadExt::from(x));
        assert_eq!(cp.p1, CurvePoint::new(QuadExt::zero(), QuadExt::zero()));
        // y1(iota1 P2) = d01 t (A - 1) / (...)
        let y = RatFunc::new(Poly::monomial(&aa - &Rat::one(), 1), den);
        assert_eq!(curve.iota1(&cp.p2).y1, QuadExt::from(y));
        if aa != r(1, 2) {
            assert_eq!(cp.p2.bivaluation(), (v(2), v(1)));
        }
    }
}

#[test]
fn s1_without_x_interaction() {
    let m = s1(Rat::one(), r(3, 1));
    let cp = critical_points(&Curve::new(&m)).unwrap();
    assert_eq!(cp.p2.bivaluation(), (v(0), Val::Inf));
    assert_eq!(cp.p1.bivaluation(), (Val::Inf, Val::Inf));
}

#[test]
fn s1_orbit_bivaluations() {
    let m = s1(r(5, 1), r(3, 1));
    let curve = Curve::new(&m);
    let p2 = critical_points(&curve).unwrap().p2;
    let got: Vec<_> = (-2..=2).map(|n| curve.sigma_pow(&p2, n).bivaluation()).collect();
    let want = vec![(v(-2), v(-3)), (v(0), v(-1)), (v(2), v(1)), (v(0), v(1)), (v(-2), v(-1))];
    assert_eq!(got, want);

    let m = s1(Rat::one(), r(3, 1));
    let curve = Curve::new(&m);
    let p2 = critical_points(&curve).unwrap().p2;
    let got: Vec<_> = (-3..=1).map(|n| curve.sigma_pow(&p2, n).bivaluation()).collect();
    let want = vec![(v(-2), v(-3)), (v(0), v(-1)), (Val::Inf, Val::Inf), (v(0), Val::Inf), (v(-2), v(-1))];
    assert_eq!(got, want);
}

#[test]
fn group_action_is_consistent() {
    for m in sample_models() {
        let curve = Curve::new(&m);
        let sets = critical_sets(&curve).unwrap();
        for p in sets.points.as_array() {
            assert!(curve.contains(p));
            assert_eq!(&curve.iota1(&curve.iota1(p)), p);
            assert_eq!(&curve.iota2(&curve.iota2(p)), p);
            assert_eq!(&curve.sigma_inv(&curve.sigma(p)), p);
            let mut cur = p.clone();
            for _ in 0..5 {
                let i1 = curve.iota1(&cur);
                assert_eq!(i1.x1, cur.x1);
                let i2 = curve.iota2(&cur);
                assert_eq!(i2.y1, cur.y1);
                cur = curve.sigma(&cur);
                assert!(curve.contains(&cur));
            }
        }
        for (k, p) in sets.l1_minus.iter().enumerate() {
            assert_eq!(curve.iota1(p), sets.l1_plus[k]);
            assert_eq!(curve.iota2(&sets.l2_plus[k]), sets.l2_minus[k]);
        }
        assert_eq!(sets.l1_plus[0], sets.l2_plus[0]);
        assert_eq!(sets.l1_plus[1], sets.l2_plus[1]);
    }
}

#[test]
fn critical_points_are_zeros_of_gamma() {
    for m in sample_models() {
        let curve = Curve::new(&m);
        let cp = critical_points(&curve).unwrap();
        for p in [&cp.p1, &cp.p2] {
            assert!(eval_laurent(&chart_safe(&m.gamma1()), p).is_zero() || gamma_chart_zero(&m, p, true));
        }
        for p in [&cp.p3, &cp.p4] {
            assert!(gamma_chart_zero(&m, p, false));
        }
    }
}

fn chart_safe(h: &LaurentXY) -> LaurentXY {
    h.clone()
}

/// gamma1 = A x1 - t d_{1,-1} y1, gamma2 = B y1 - t d_{-1,1} x1 in the chart.
fn gamma_chart_zero(m: &Model, p: &CurvePoint, first: bool) -> bool {
    let t = |c: &Rat| QuadExt::from(RatFunc::monomial(c.clone(), 1));
    let val = if first {
        QuadExt::from(m.A().clone()) * p.x1.clone() - t(m.d(Step::SouthEast)) * p.y1.clone()
    } else {
        QuadExt::from(m.B().clone()) * p.y1.clone() - t(m.d(Step::NorthWest)) * p.x1.clone()
    };
    val.is_zero()
}

#[test]
fn zeros_of_gamma_are_the_critical_points() {
    for m in sample_models() {
        let curve = Curve::new(&m);
        let cp = critical_points(&curve).unwrap();
        for (g, pair) in [(m.gamma1(), [&cp.p1, &cp.p2]), (m.gamma2(), [&cp.p3, &cp.p4])] {
            let zeros = curve_zeros(&curve, &[(g, 1)]).unwrap();
            let total: i64 = zeros.iter().map(|z| z.1).sum();
            assert_eq!(total, 2, "{m}");
            for p in pair {
                assert!(zeros.iter().any(|(z, _)| z == p), "{m}: {p:?} not among {zeros:?}");
            }
        }
    }
}

#[test]
fn edge_function_zeros() {
    // u = 1/2 - t d_{1,-1} x / y on S1 with B = 1/2
    for a in [r(5, 1), r(3, 1), r(3, 2)] {
        let m = s1(a, r(2, 1));
        let curve = Curve::new(&m);
        let cp = critical_points(&curve).unwrap();
        let u = &LaurentXY::constant(r(1, 2)) - &LaurentXY::term(Poly::monomial(Rat::one(), 1), 1, -1);
        let zeros = curve_zeros(&curve, &[(u, 1), (m.gamma2(), 1)]).unwrap();
        let i2p4 = curve.iota2(&cp.p4);
        assert_eq!(zeros.len(), 2, "{zeros:?}");
        assert!(zeros.contains(&(cp.p4.clone(), 1)));
        assert!(zeros.contains(&(i2p4, 1)));
    }
}

#[test]
fn divisor_of_a_coordinate() {
    // on S1 the line x1 = 0 is tangent to the curve at (0, 0)
    let m = s1(r(3, 1), r(3, 1));
    let curve = Curve::new(&m);
    let div = curve_divisor(&curve, &[(LaurentXY::x(), -1)]).unwrap();
    assert_eq!(div, vec![(CurvePoint::new(QuadExt::zero(), QuadExt::zero()), 2)]);
    assert!(curve_zeros(&curve, &[(LaurentXY::zero(), 1)]).is_err());
}

#[test]
fn off_curve_input_is_rejected() {
    let curve = Curve::new(&s1(r(3, 1), r(3, 1)));
    let p = CurvePoint::new(QuadExt::one(), QuadExt::one());
    assert!(curve.apply_iota1(&p).is_err());
    assert!(curve.apply_sigma(&p).is_err());
}

#[test]
fn degeneracy_factors_never_vanish() {
    for m in sample_models() {
        check_nondegenerate(&m).unwrap();
        for f in degeneracy_factors(&m) {
            assert!(!f.is_zero());
        }
    }
}

#[test]
fn double_zero_gives_equal_points() {
    // A = 0 and d01^2 = 4 d11 d-11: gamma1 has a double zero
    let w = Weighting::new(
        &[
            (Step::SouthEast, Rat::one()),
            (Step::NorthWest, Rat::one()),
            (Step::North, r(2, 1)),
            (Step::NorthEast, Rat::one()),
        ],
        Rat::one(),
        r(3, 1),
    );
    let m = Model::new(StepSet::S4, w).unwrap();
    let curve = Curve::new(&m);
    let cp = critical_points(&curve).unwrap();
    assert_eq!(cp.p1, cp.p2);
    let zeros = curve_zeros(&curve, &[(m.gamma1(), 1)]).unwrap();
    assert_eq!(zeros, vec![(cp.p1.clone(), 2)]);
}

#[test]
fn quadratic_roots_and_multiplicity() {
    let one = RatFunc::one();
    let [p, m] = solve_quadratic(&one, &RatFunc::zero(), &-RatFunc::t());
    assert_eq!(p.clone() * p.clone(), QuadExt::from(RatFunc::t()));
    assert_eq!(p.clone() + m, QuadExt::zero());
    let poly = Poly::new(vec![RatFunc::one(), RatFunc::from(-2), RatFunc::one()]);
    assert_eq!(root_multiplicity(&poly, &QuadExt::one()), 2);
    assert_eq!(root_multiplicity(&poly, &QuadExt::zero()), 0);
}
