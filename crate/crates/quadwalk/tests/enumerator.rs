use std::collections::HashMap;

use proptest::prelude::*;
use quadwalk::enumerator::{check_residual, enumerate, enumerate_with, residual, walk_weight};
use quadwalk::exactalg::{Poly, Rat, Ring};
use quadwalk::model::{Model, Step, StepSet, Weighting};
use quadwalk::par::Exec;

fn r(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

fn unit(set: StepSet, a: Rat, b: Rat) -> Model {
    Model::unit(set, a, b)
}

/// Counts walks by listing every step sequence: the most literal oracle.
fn brute_force(model: &Model, n: usize) -> Vec<HashMap<(i32, i32), Rat>> {
    let steps = model.stepset().steps();
    let mut out = vec![HashMap::new(); n + 1];
    let mut stack: Vec<Vec<Step>> = vec![vec![]];
    while let Some(w) = stack.pop() {
        let Some(weight) = walk_weight(model, &w) else { continue };
        let end = w.iter().fold((0, 0), |(x, y), s| {
            let (dx, dy) = s.vector();
            (x + dx, y + dy)
        });
        let slot = out[w.len()].entry(end).or_insert_with(Rat::zero);
        *slot = slot.clone() + weight;
        if w.len() < n {
            for s in steps {
                let mut next = w.clone();
                next.push(*s);
                stack.push(next);
            }
        }
    }
    out
}

/// Contact-free push DP over endpoint counts; independent of the main DP.
fn plain_counts(model: &Model, n: usize) -> Vec<HashMap<(i32, i32), Rat>> {
    let mut cur: HashMap<(i32, i32), Rat> = HashMap::from([((0, 0), Rat::one())]);
    let mut out = vec![cur.clone()];
    for _ in 0..n {
        let mut next: HashMap<(i32, i32), Rat> = HashMap::new();
        for ((x, y), w) in &cur {
            for (s, d) in model.steps() {
                let (dx, dy) = s.vector();
                let p = (x + dx, y + dy);
                if p.0 < 0 || p.1 < 0 {
                    continue;
                }
                let slot = next.entry(p).or_insert_with(Rat::zero);
                *slot = slot.clone() + w.clone() * d;
            }
        }
        out.push(next.clone());
        cur = next;
    }
    out
}

fn matches(model: &Model, n: usize, oracle: &[HashMap<(i32, i32), Rat>]) {
    let s = enumerate(model, n);
    for (k, want) in oracle.iter().enumerate() {
        let got = s.term(k);
        let mut count = 0;
        for (i, j, c) in got.terms() {
            assert_eq!(want.get(&(i as i32, j as i32)), Some(&c), "t^{k} x^{i} y^{j}");
            count += 1;
        }
        assert_eq!(count, want.values().filter(|c| !c.is_zero()).count(), "t^{k}");
    }
}

#[test]
fn constant_term_is_one() {
    for set in StepSet::ALL {
        let s = enumerate(&unit(set, r(5, 2), r(1, 3)), 3);
        assert_eq!(s.term(0), &Poly::constant(Poly::one()));
    }
}

#[test]
fn s3_first_terms() {
    let m = unit(StepSet::S3, Rat::one(), Rat::one());
    let s = enumerate(&m, 2);
    assert_eq!(s.term(1).terms(), vec![(1, 1, Rat::one())]);
    assert_eq!(s.term(2).terms(), vec![(0, 2, Rat::one()), (2, 0, Rat::one()), (2, 2, Rat::one())]);
}

#[test]
fn s1_x_axis_term_two() {
    let m = unit(StepSet::S1, r(3, 1), r(3, 2));
    let s = enumerate(&m, 2);
    assert_eq!(s.x_axis()[2], Poly::monomial(r(9, 2), 1));
    let m = unit(StepSet::S1, Rat::one(), Rat::one());
    assert_eq!(enumerate(&m, 1).y_axis()[1], Poly::monomial(Rat::one(), 1));
    assert_eq!(enumerate(&m, 1).at_one()[0], Rat::one());
}

#[test]
fn agrees_with_brute_force() {
    let weights = Weighting::new(
        &[
            (Step::SouthEast, r(2, 3)),
            (Step::NorthWest, r(5, 4)),
            (Step::East, r(1, 2)),
            (Step::North, r(3, 1)),
            (Step::NorthEast, r(1, 7)),
        ],
        r(7, 3),
        r(2, 5),
    );
    let m = Model::new(StepSet::S5, weights).unwrap();
    matches(&m, 6, &brute_force(&m, 6));
    for set in StepSet::ALL {
        let m = unit(set, r(3, 1), r(1, 2));
        matches(&m, 6, &brute_force(&m, 6));
    }
}

#[test]
fn contact_free_case_matches_plain_dp() {
    for set in StepSet::ALL {
        let m = unit(set, Rat::one(), Rat::one());
        matches(&m, 12, &plain_counts(&m, 12));
    }
}

#[test]
fn residual_vanishes_on_examples() {
    let half = r(1, 2);
    let s5 = Weighting::new(
        &Step::ALL.iter().map(|&s| (s, half.clone())).collect::<Vec<_>>(),
        r(2, 1),
        r(3, 1),
    );
    let cases = [
        (unit(StepSet::S3, r(2, 1), r(2, 1)), 8),
        (unit(StepSet::S1, Rat::one(), Rat::one()), 8),
        (Model::new(StepSet::S5, s5).unwrap(), 6),
    ];
    for (m, n) in cases {
        let s = enumerate(&m, n);
        check_residual(&m, &s).unwrap();
        assert!(residual(&m, &s).iter().all(|p| p.is_zero()));
    }
}

#[test]
fn residual_detects_a_wrong_series() {
    let m = unit(StepSet::S2, r(2, 1), r(3, 1));
    let other = unit(StepSet::S2, r(2, 1), r(5, 1));
    let s = enumerate(&other, 4);
    assert!(check_residual(&m, &s).is_err());
}

#[test]
fn sequential_and_parallel_agree() {
    let m = unit(StepSet::S5, r(3, 2), r(5, 3));
    assert_eq!(enumerate_with(&m, 10, Exec::Sequential), enumerate_with(&m, 10, Exec::Parallel));
}

#[test]
fn json_terms_are_sorted_triples() {
    let m = unit(StepSet::S3, Rat::one(), Rat::one());
    let json = enumerate(&m, 2).to_json();
    assert_eq!(json, r#"[[[0,0,"1"]],[[1,1,"1"]],[[0,2,"1"],[2,0,"1"],[2,2,"1"]]]"#);
}

fn small_rat() -> impl Strategy<Value = Rat> {
    (1i64..6, 1i64..5).prop_map(|(n, d)| Rat::new(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn coefficients_nonnegative_and_monotone(d in small_rat(), extra in small_rat(), a in small_rat(), b in small_rat()) {
        let steps: Vec<(Step, Rat)> = StepSet::S4.steps().iter().map(|&s| (s, d.clone())).collect();
        let m = Model::new(StepSet::S4, Weighting::new(&steps, a.clone(), b.clone())).unwrap();
        let mut bumped = steps.clone();
        bumped[0].1 = d.clone() + extra;
        let m2 = Model::new(StepSet::S4, Weighting::new(&bumped, a, b)).unwrap();
        let (s, s2) = (enumerate(&m, 6), enumerate(&m2, 6));
        for n in 0..=6 {
            for (i, j, c) in s.term(n).terms() {
                prop_assert!(c.signum() > 0);
                prop_assert!(s2.term(n).coeff_xy(i, j) >= c);
            }
        }
        prop_assert!(check_residual(&m, &s).is_ok());
    }
}
