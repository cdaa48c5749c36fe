use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};

use zhat::indefinite::{mock_f0_reference, zhat_reversed};
use zhat::plumbing::PlumbingGraph;
use zhat::surgery::{figure_eight_fk, surgery_zhat, SurgerySlope};
use zhat::zhat::{f_and_p, false_theta, zhat_negative_definite, zhat_three_star};
use zhat::{coeff, exp, QSeries};

mod support;
use support::{sigma237, sigma237_oracle};

#[test]
fn false_side_through_fifty_and_a_half() {
    let g = sigma237();
    let order = exp(51, 1);
    let lattice = zhat_negative_definite(&g, &g.canonical_label().unwrap(), order, 1).unwrap();
    let closed = zhat_three_star(&g, order).unwrap();
    let oracle = sigma237_oracle(order);
    assert_eq!(lattice, oracle);
    assert_eq!(closed, oracle);
    let head: Vec<(Rational64, BigRational)> = lattice.iter().take(5).map(|(e, c)| (*e, c.clone())).collect();
    assert_eq!(
        head,
        vec![
            (exp(1, 2), coeff(1, 1)),
            (exp(3, 2), coeff(-1, 1)),
            (exp(11, 2), coeff(-1, 1)),
            (exp(21, 2), coeff(1, 1)),
            (exp(23, 2), coeff(-1, 1)),
        ]
    );
}

#[test]
fn parameters_of_sigma237() {
    let t = sigma237().three_star_params().unwrap();
    assert_eq!(t.m, coeff(42, 1));
    let pairs: Vec<(BigRational, BigRational)> = t.b.iter().zip(&t.c).map(|(b, c)| (b.clone(), c * BigInt::from(4))).collect();
    assert_eq!(
        pairs,
        vec![(coeff(1, 1), coeff(1, 1)), (coeff(-13, 1), coeff(5, 1)), (coeff(-29, 1), coeff(21, 1)), (coeff(41, 1), coeff(41, 1))]
    );
    assert_eq!(t.d, coeff(41, 168));
    assert_eq!(t.c_pref, coeff(83, 168));
    for j in 0..4 {
        assert_eq!(&t.c[j] - &t.b[j] * &t.b[j] / (&t.m * BigInt::from(4)), t.d);
    }
}

#[test]
fn mock_side_through_one_hundred() {
    let z = zhat_reversed(&sigma237(), exp(199, 2)).unwrap();
    let f0 = mock_f0_reference(exp(100, 1)).shift(exp(-1, 2));
    assert_eq!(z, f0);
    let head: Vec<i64> = (0..8).map(|i| z.coeff(exp(2 * i - 1, 2)).to_integer().try_into().unwrap()).collect();
    assert_eq!(head, vec![1, 1, 0, 1, 1, 1, 0, 2]);
}

#[test]
fn surgery_matches_reversed_up_to_sign() {
    let r = surgery_zhat(&figure_eight_fk(), SurgerySlope::new(-1, 1).unwrap(), exp(0, 1), exp(100, 1)).unwrap();
    assert!(r.guaranteed_order >= exp(11, 1));
    let (e0, c0, n) = r.normalized().unwrap();
    assert_eq!(c0, coeff(-1, 1));
    let want = [1, 1, 0, 1, 1, 1, 0, 2, 1, 2, 1, 2];
    for (i, w) in want.iter().enumerate() {
        assert_eq!(n.coeff(exp(i as i64, 1)), coeff(*w, 1));
    }
    let rev = zhat_reversed(&sigma237(), exp(20, 1)).unwrap();
    let bound = r.guaranteed_order;
    for (e, c) in r.series.iter() {
        assert_eq!(-c.clone(), rev.coeff(*e - e0 - exp(1, 2)));
    }
    for (e, c) in rev.iter() {
        let shifted = *e + exp(1, 2) + e0;
        if shifted < bound {
            assert_eq!(r.series.coeff(shifted), -c.clone());
        }
    }
}

#[test]
fn false_theta_identity_all_branches() {
    let order = exp(50, 1);
    let mut branches = [0usize; 3];
    for m in 1..=20i64 {
        for j in -4 * m..4 * m {
            let (f, p) = f_and_p(j, m, order).unwrap();
            let theta = false_theta(m, j, order).unwrap().series;
            assert_eq!(f, theta.add(&p), "m = {m}, j = {j}");
            branches[if j < 0 { 0 } else if j < 2 * m { 1 } else { 2 }] += 1;
        }
    }
    assert!(branches.iter().all(|&b| b > 0));
}

#[test]
fn unknot_minus_one() {
    let g = PlumbingGraph::from_weights(&[-1], &[]).unwrap();
    let z = zhat_negative_definite(&g, &g.canonical_label().unwrap(), exp(2, 1), 1).unwrap();
    assert_eq!(z, QSeries::from_terms([(exp(-1, 2), coeff(-2, 1)), (exp(1, 2), coeff(2, 1))], exp(2, 1)));
}
