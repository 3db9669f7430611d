use quadwalk::classifier::{
    applicable_identities, classify, closed_forms, edge_case_checks, homogeneous_analysis, inhomogeneous_analysis,
    reduce_mod_kernel, table_cells, trail_is_complete, verify_closed_form, ClassifyError, HomCell, HomStatus,
    HomWitness, Identity, PoleConfinement, Sign, Verdict, RULE_EDGE,
};
use quadwalk::curve::Curve;
use quadwalk::exactalg::{LaurentXY, Poly, Rat, Ring};
use quadwalk::model::{Model, Step, StepSet, Weighting};
use quadwalk::par;
use quadwalk::sigmadist::{build_matrices, MatrixOptions};

fn r(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

/// Weights `d` cycled over the present steps.
fn weighted(set: StepSet, d: &[Rat], cap_a: &Rat, cap_b: &Rat) -> Model {
    let steps: Vec<(Step, Rat)> = set.steps().iter().zip(d.iter().cycle()).map(|(&s, w)| (s, w.clone())).collect();
    Model::with_ab(set, &steps, cap_a, cap_b).unwrap()
}

fn weightings() -> Vec<Vec<Rat>> {
    vec![
        vec![r(1, 1)],
        vec![r(2, 1), r(1, 3), r(5, 7)],
        vec![r(3, 2), r(4, 1), r(1, 5), r(2, 3), r(7, 2)],
        vec![r(1, 2), r(5, 3)],
        vec![r(9, 4), r(2, 7), r(6, 5), r(1, 1), r(3, 8)],
    ]
}

fn unit_ab(set: StepSet, a: Rat, b: Rat) -> Model {
    weighted(set, &[Rat::one()], &a, &b)
}

#[test]
fn identities_hold_on_their_supports() {
    let abs = [(r(1, 3), r(2, 3)), (r(1, 2), r(1, 2)), (r(1, 4), r(1, 2)), (r(2, 3), r(1, 5))];
    let mut seen = std::collections::BTreeSet::new();
    for set in StepSet::ALL {
        for (k, d) in weightings().iter().enumerate() {
            let (a, b) = &abs[k % abs.len()];
            let m = weighted(set, d, a, b);
            for id in applicable_identities(&m) {
                id.check(&m).unwrap_or_else(|e| panic!("{m}: {e}"));
                seen.insert(format!("{id}").split('[').next().unwrap().to_string());
            }
        }
    }
    for name in ["two_forms_of_u", "x_side_product", "y_side_product", "x_side_square", "y_side_square"] {
        assert!(seen.contains(name), "{name} never checked");
    }
    // the edge identities need B = 1/2 on S1
    for d in weightings() {
        let m = weighted(StepSet::S1, &d, &r(1, 5), &r(1, 2));
        for id in [Identity::EdgeUSquare, Identity::EdgeUTimesYGamma2] {
            id.check(&m).unwrap();
        }
    }
}

#[test]
fn identities_refuse_other_supports() {
    let m = unit_ab(StepSet::S5, r(1, 2), r(1, 2));
    assert!(matches!(Identity::XSideSquare.check(&m), Err(ClassifyError::NotApplicable(_))));
    assert!(matches!(Identity::TwoFormsOfU(r(1, 2)).check(&m), Err(ClassifyError::NotApplicable(_))));
    let m = unit_ab(StepSet::S1, r(1, 3), r(1, 3));
    assert!(matches!(Identity::EdgeUSquare.check(&m), Err(ClassifyError::NotApplicable(_))));
}

#[test]
fn kernel_reduction_detects_nonzero_functions() {
    let m = unit_ab(StepSet::S2, r(1, 3), r(1, 4));
    assert!(!Ring::is_zero(&reduce_mod_kernel(&m, &m.gamma1())));
    assert!(!Ring::is_zero(&reduce_mod_kernel(&m, &LaurentXY::x())));
    // the kernel itself and its multiples reduce to 0
    let k = LaurentXY::from_poly(&m.kernel());
    assert!(Ring::is_zero(&reduce_mod_kernel(&m, &k)));
    let h = &(&k * &LaurentXY::term(Poly::new(vec![r(2, 1), r(-1, 3)]), -1, 2)) * &LaurentXY::y();
    assert!(Ring::is_zero(&reduce_mod_kernel(&m, &h)));
}

fn hom(m: &Model) -> HomStatus {
    let (m1, _) = build_matrices(&Curve::new(m)).unwrap();
    homogeneous_analysis(m, &m1).unwrap_or_else(|e| panic!("{m}: {e}"))
}

#[test]
fn homogeneous_solution_only_for_s3_at_half_half() {
    let m = unit_ab(StepSet::S3, r(1, 2), r(1, 2));
    match hom(&m) {
        HomStatus::Solution { h1, h2, certificates } => {
            assert_eq!((h1.as_str(), h2.as_str()), ("1/gamma1", "-1/gamma2"));
            assert!(certificates.iter().all(|c| c.sign == Sign::Minus && c.is_square == Some(false)));
        }
        other => panic!("{other:?}"),
    }
    for set in [StepSet::S1, StepSet::S2, StepSet::S4, StepSet::S5] {
        assert!(hom(&unit_ab(set, r(1, 2), r(1, 2))).is_no_solution());
    }
}

#[test]
fn homogeneous_cells() {
    let (p, mi) = (Sign::Plus, Sign::Minus);
    let signed = |a, b| Some(HomWitness::SignedSolution(a, b));
    for set in StepSet::ALL {
        assert_eq!(hom(&unit_ab(set, Rat::zero(), Rat::zero())).witness(), signed(p, p), "{set}");
    }
    assert_eq!(hom(&unit_ab(StepSet::S1, Rat::zero(), r(1, 2))).witness(), signed(mi, p));
    assert_eq!(hom(&unit_ab(StepSet::S3, Rat::zero(), r(1, 2))).witness(), signed(p, mi));
    assert_eq!(hom(&unit_ab(StepSet::S4, r(1, 2), Rat::zero())).witness(), signed(mi, p));
    // rows 3 and 4 may be swapped by the labelling
    for set in [StepSet::S2, StepSet::S4, StepSet::S5] {
        let w = hom(&unit_ab(set, Rat::zero(), r(1, 2))).witness();
        assert!(matches!(w, Some(HomWitness::BotRow(3 | 4))), "{set}: {w:?}");
    }
    let w = hom(&unit_ab(StepSet::S2, r(1, 3), r(1, 4))).witness();
    assert!(matches!(w, Some(HomWitness::BotRow(_))));
}

#[test]
fn sign_certificates_are_non_squares() {
    let m = unit_ab(StepSet::S1, r(1, 2), Rat::zero());
    let HomStatus::NoSolution { certificates, .. } = hom(&m) else { panic!() };
    let h11 = certificates.iter().find(|c| c.factor == "h11").unwrap();
    assert_eq!(h11.is_square, Some(false));
    assert_eq!(h11.sign, Sign::Minus);
    // edge support: u^2 has degree 1 in x
    let m = unit_ab(StepSet::S1, Rat::zero(), r(1, 2));
    let HomStatus::NoSolution { certificates, .. } = hom(&m) else { panic!() };
    let h21 = certificates.iter().find(|c| c.factor == "h21").unwrap();
    assert_eq!((h21.sign, h21.is_square), (Sign::Minus, Some(false)));
    let h22 = certificates.iter().find(|c| c.factor == "h22").unwrap();
    assert_eq!(h22.sign, Sign::Plus);
}

#[test]
fn table_lists_generic_rows() {
    let m = unit_ab(StepSet::S5, r(1, 3), r(1, 4));
    assert_eq!(table_cells(&m), vec![HomCell::Bot(2), HomCell::Bot(4)]);
    let m = unit_ab(StepSet::S3, r(1, 2), r(1, 2));
    assert_eq!(table_cells(&m), vec![HomCell::Solution]);
}

fn confinement(m: &Model) -> Vec<PoleConfinement> {
    let (m1, m2) = build_matrices(&Curve::new(m)).unwrap();
    inhomogeneous_analysis(m, &m1, &m2)
}

#[test]
fn confinement_examples() {
    for d in weightings().iter().take(3) {
        assert!(confinement(&weighted(StepSet::S4, d, &r(1, 3), &r(1, 4))).contains(&PoleConfinement::H2Confined));
        assert!(confinement(&weighted(StepSet::S4, d, &r(1, 2), &r(1, 2))).contains(&PoleConfinement::H2Confined));
        assert!(confinement(&weighted(StepSet::S2, d, &r(1, 4), &r(1, 3))).contains(&PoleConfinement::H1Confined));
    }
    assert_eq!(confinement(&unit_ab(StepSet::S1, r(4, 5), r(1, 2))), vec![PoleConfinement::EdgeCase]);
    // the solvable families are not confined
    assert_eq!(confinement(&unit_ab(StepSet::S1, r(1, 3), r(2, 3))), vec![PoleConfinement::Inconclusive]);
    assert_eq!(confinement(&unit_ab(StepSet::S3, r(1, 2), r(1, 2))), vec![PoleConfinement::Inconclusive]);
}

#[test]
fn edge_case_evidence() {
    let m = Model::unit(StepSet::S1, r(5, 1), r(2, 1));
    let rep = edge_case_checks(&m, &MatrixOptions::default()).unwrap();
    let (row, col, n) = &rep.nonnegative_entry;
    assert_eq!(n, &1);
    assert!(row.starts_with("iota2 P") && row.ends_with(&col[1..]));
    assert_eq!(rep.zeros.len(), 2);
    let refused = edge_case_checks(&Model::unit(StepSet::S1, r(2, 1), r(2, 1)), &MatrixOptions::default());
    assert!(matches!(refused, Err(ClassifyError::NotApplicable(_))));
}

#[test]
fn classify_examples() {
    let c = classify(&Model::unit(StepSet::S1, r(3, 1), r(3, 2))).unwrap();
    assert_eq!(c.verdict, Verdict::Rational);
    let cf = c.closed_forms.as_ref().unwrap();
    // AB = 1/3 * 2/3, the x coefficient is -t^2 (no East step)
    assert_eq!(cf.qx0.to_string(), "Q(x,0) = (2/9 - t^2)/((2/9 - t^2) + (-t^2)*x)");
    let c = classify(&Model::unit(StepSet::S3, r(2, 1), r(2, 1))).unwrap();
    assert_eq!(c.verdict, Verdict::Algebraic);
    assert_eq!(c.closed_forms.as_ref().unwrap().qx0.to_string(), "Q(x,0) = sqrt((1/4 - t^2)/((1/4 - t^2) + (-t^2)*x^2))");
    let c = classify(&Model::unit(StepSet::S5, r(1, 1), r(1, 1))).unwrap();
    assert_eq!(c.verdict, Verdict::NotDAlgebraic);
    assert!(c.closed_forms.is_none());
    assert!(trail_is_complete(&c));
    let c = classify(&Model::unit(StepSet::S1, r(5, 1), r(2, 1))).unwrap();
    assert!(c.has_rule(RULE_EDGE));
    let js = c.to_json();
    assert_eq!(js["verdict"], "NotDAlgebraic");
    assert!(js["trail"].as_array().unwrap().iter().all(|e| e["rule"].is_string()));
}

/// Hand counts. On S1 the only two-step walk ending on the x-axis is N then
/// SE, touching the y-axis and then the x-axis: weight b a = 9/2.
#[test]
fn closed_forms_match_hand_counts() {
    let m = Model::unit(StepSet::S1, r(3, 1), r(3, 2));
    let s = closed_forms(&m).unwrap().qx0.series(4);
    assert_eq!(s[0], Poly::constant(Rat::one()));
    assert_eq!(s[1], Poly::zero());
    assert_eq!(s[2], Poly::new(vec![Rat::zero(), r(9, 2)]));

    // S3, a = b = 2: NE then SE ends at (2, 0) with one contact, 2 x^2;
    // four steps give 8 x^2 + 6 x^4
    let m = Model::unit(StepSet::S3, r(2, 1), r(2, 1));
    let s = closed_forms(&m).unwrap().qx0.series(4);
    assert_eq!(s[2], Poly::new(vec![Rat::zero(), Rat::zero(), r(2, 1)]));
    assert_eq!(s[4], Poly::new(vec![Rat::zero(), Rat::zero(), r(8, 1), Rat::zero(), r(6, 1)]));
}

#[test]
fn closed_forms_match_enumeration() {
    for set in [StepSet::S1, StepSet::S2] {
        for (a, b) in [(r(3, 1), r(3, 2)), (r(4, 1), r(4, 3)), (r(3, 2), r(3, 1))] {
            let m = Model::unit(set, a, b);
            verify_closed_form(&m, 12).unwrap();
        }
    }
    for d in [vec![Rat::one()], vec![r(1, 2), r(3, 1), r(2, 1)]] {
        // S3 steps are SE, NW, NE
        verify_closed_form(&weighted(StepSet::S3, &d, &r(1, 2), &r(1, 2)), 12).unwrap();
    }
    let refused = verify_closed_form(&Model::unit(StepSet::S5, r(2, 1), r(2, 1)), 4);
    assert!(matches!(refused, Err(ClassifyError::NotApplicable(_))));
}

#[test]
fn closed_form_series_are_nonnegative() {
    for m in [
        weighted(StepSet::S2, &[r(2, 1), r(1, 3), r(5, 7), r(3, 2)], &r(1, 4), &r(3, 4)),
        weighted(StepSet::S3, &[r(1, 5), r(2, 1), r(7, 3)], &r(1, 2), &r(1, 2)),
    ] {
        let cf = closed_forms(&m).unwrap();
        for form in [&cf.qx0, &cf.q0y] {
            for (n, c) in form.series(10).iter().enumerate() {
                assert!(c.coeffs().iter().all(|x| x.signum() >= 0), "{m} n = {n}");
            }
        }
    }
}

#[test]
fn rational_for_every_weighting_with_a_plus_b_equal_ab() {
    for set in [StepSet::S1, StepSet::S2] {
        for d in weightings() {
            let m = weighted(set, &d, &r(2, 5), &r(3, 5));
            let c = classify(&m).unwrap();
            assert_eq!(c.verdict, Verdict::Rational, "{m}");
            verify_closed_form(&m, 8).unwrap();
        }
    }
}

#[test]
fn sampled_grid_has_no_coverage_gap() {
    let vals = [Rat::zero(), r(1, 4), r(1, 3), r(1, 2), r(2, 3), r(3, 4)];
    let ds = [vec![Rat::one()], vec![r(2, 1), r(1, 3), r(5, 7)], vec![r(3, 2), r(4, 1), r(1, 5), r(2, 3), r(7, 2)]];
    let mut models = Vec::new();
    for set in StepSet::ALL {
        for a in &vals {
            for b in &vals {
                for d in &ds {
                    models.push(weighted(set, d, a, b));
                }
            }
        }
    }
    let results = par::map(&models, |m| classify(m).map(|c| (c.verdict, trail_is_complete(&c))));
    for (m, res) in models.iter().zip(results) {
        let (verdict, complete) = res.unwrap_or_else(|e| panic!("{m}: {e}"));
        assert!(complete, "{m}");
        let one = Rat::one();
        let expect = match m.stepset() {
            StepSet::S1 | StepSet::S2 if &(m.A() + m.B()) == &one => Verdict::Rational,
            StepSet::S3 if *m.A() == r(1, 2) && *m.B() == r(1, 2) => Verdict::Algebraic,
            _ => Verdict::NotDAlgebraic,
        };
        assert_eq!(verdict, expect, "{m}");
    }
}

#[test]
fn weighting_from_explicit_steps() {
    let w = Weighting::new(&[(Step::SouthEast, r(1, 2)), (Step::NorthWest, r(2, 1)), (Step::NorthEast, r(1, 1))], r(2, 1), r(2, 1));
    let m = Model::new(StepSet::S3, w).unwrap();
    assert_eq!(classify(&m).unwrap().verdict, Verdict::Algebraic);
}
