mod support;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zhat::indefinite::{rho_regularizer, IndefThetaSpec};
use zhat::modular::{asymptotic_coeffs, minimum_order, radial_extrapolate, x_matrix, PeriodicSign};
use zhat::plumbing::{PlumbingGraph, SpincLabel};
use zhat::series::eta_series;
use zhat::surgery::{surgery_zhat, KnotSeries, QPoly, SurgerySlope};
use zhat::zhat::{zhat_negative_definite, zhat_three_star};
use zhat::{coeff, exp, Exp, QSeries};

use support::{random_negative_definite, random_series, sigma237, sigma237_orderings};

fn ri(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Random tree with weights in `-5..=-1`, nonsingular.
fn random_tree(rng: &mut ChaCha8Rng) -> PlumbingGraph {
    loop {
        let n = rng.gen_range(1..=5);
        let weights: Vec<i64> = (0..n).map(|_| rng.gen_range(-5..=-1)).collect();
        let edges: Vec<(i64, i64)> = (1..n).map(|i| (rng.gen_range(0..i), i)).collect();
        let g = PlumbingGraph::from_weights(&weights, &edges).unwrap();
        if !g.adjacency_matrix().determinant().is_zero() {
            return g;
        }
    }
}

fn random_label(rng: &mut ChaCha8Rng, g: &PlumbingGraph) -> Vec<BigInt> {
    g.parity_vector()
        .iter()
        .map(|&d| BigInt::from(2 * rng.gen_range(-6i64..=6) + d))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn spinc_canonical_form_is_idempotent_and_equivalent(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_tree(&mut rng);
        let m = g.adjacency_matrix();
        let inv = m.inverse().unwrap();
        let raw = random_label(&mut rng, &g);
        let canon = SpincLabel::new(&g, raw.clone()).unwrap();
        prop_assert_eq!(&SpincLabel::new(&g, canon.a.clone()).unwrap(), &canon);
        let raw_label = SpincLabel { a: raw.clone(), delta: g.parity_vector() };
        prop_assert!(canon.equivalent(&raw_label, &inv));
        // Moving by 2 M x does not change the class.
        let x: Vec<BigRational> = (0..g.len()).map(|_| ri(rng.gen_range(-3..=3))).collect();
        let mx = m.mul_vec(&x);
        let moved: Vec<BigInt> = raw.iter().zip(&mx).map(|(a, s)| a + (s * ri(2)).to_integer()).collect();
        prop_assert_eq!(SpincLabel::new(&g, moved).unwrap(), canon.clone());
        let labels = g.spinc_labels().unwrap();
        prop_assert!(labels.contains(&canon));
        prop_assert_eq!(BigInt::from(labels.len()), m.determinant().abs().to_integer());
    }

    #[test]
    fn x_matrix_symmetries(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=3);
        let m = random_negative_definite(&mut rng, n);
        let vec = |rng: &mut ChaCha8Rng| -> Vec<BigInt> { (0..n).map(|_| BigInt::from(rng.gen_range(-9..=9))).collect() };
        let (a, b) = (vec(&mut rng), vec(&mut rng));
        let neg = |v: &[BigInt]| v.iter().map(|x| -x).collect::<Vec<_>>();
        let x0 = x_matrix(&m, &a, &b).unwrap();
        prop_assert_eq!(&x_matrix(&m, &neg(&a), &b).unwrap(), &x0);
        prop_assert_eq!(&x_matrix(&m, &a, &neg(&b)).unwrap(), &x0);
        let shift = |v: &[BigInt], k: i64, rng: &mut ChaCha8Rng| -> Vec<BigInt> {
            let y: Vec<BigRational> = (0..n).map(|_| ri(rng.gen_range(-2..=2))).collect();
            let my = m.mul_vec(&y);
            v.iter().zip(&my).map(|(x, s)| x + (s * ri(k)).to_integer()).collect()
        };
        let a2 = shift(&a, 2, &mut rng);
        let b1 = shift(&b, 1, &mut rng);
        prop_assert_eq!(&x_matrix(&m, &a2, &b1).unwrap(), &x0);
        let v = x0.value(96);
        let w = x_matrix(&m, &b1, &a2);
        prop_assert!(w.is_ok());
        prop_assert!(v.abs().to_f64() <= 2.0 / x0.det_abs.to_f64().unwrap().sqrt() + 1e-12);
    }

    #[test]
    fn eta_division_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_series(&mut rng);
        let eta = eta_series(exp(20, 1));
        let back = s.mul(&eta).mul(&eta.invert().unwrap());
        let o = back.order().min(s.order());
        prop_assert_eq!(back.truncate(o), s.truncate(o));
    }

    #[test]
    fn laplace_map_is_linear(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let random_knot = |rng: &mut ChaCha8Rng| -> (KnotSeries, Vec<(Exp, QPoly)>) {
            let mut pos = Vec::new();
            for i in 0..5i64 {
                let mut p = QPoly::new();
                for _ in 0..rng.gen_range(1..=3) {
                    let e = exp(rng.gen_range(-2 * i..=3), 1);
                    *p.entry(e).or_insert_with(BigRational::zero) += ri(rng.gen_range(-3..=3));
                }
                p.retain(|_, c| !c.is_zero());
                p.entry(exp(-i, 1)).or_insert_with(|| ri(1));
                pos.push((exp(2 * i + 1, 2), p));
            }
            (KnotSeries::from_positive_part("random", pos.clone(), None).unwrap(), pos)
        };
        let (k1, p1) = random_knot(&mut rng);
        let (k2, p2) = random_knot(&mut rng);
        let mut sum: BTreeMap<Exp, QPoly> = BTreeMap::new();
        for (u, p) in p1.iter().chain(&p2) {
            let entry = sum.entry(*u).or_default();
            for (e, c) in p {
                *entry.entry(*e).or_insert_with(BigRational::zero) += c;
            }
        }
        let k12 = KnotSeries::from_positive_part("sum", sum.into_iter().collect(), None).unwrap();
        let slope = SurgerySlope::new(-rng.gen_range(1..=3), 1).unwrap();
        let order = exp(30, 1);
        let (r1, r2, r12) = (
            surgery_zhat(&k1, slope, exp(0, 1), order).unwrap().series,
            surgery_zhat(&k2, slope, exp(0, 1), order).unwrap().series,
            surgery_zhat(&k12, slope, exp(0, 1), order).unwrap().series,
        );
        let o = r1.order().min(r2.order()).min(r12.order());
        prop_assert_eq!(r12.truncate(o), r1.add(&r2).truncate(o));
        let twice = surgery_zhat(&k1, slope, exp(0, 1), order).unwrap().series.scale(&ri(2));
        prop_assert_eq!(twice.truncate(o), r1.add(&r1).truncate(o));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn indefinite_terms_match_brute_force(c1 in 1i64..=5, c2 in -12i64..=12, d1 in 1i64..=5, d2 in -12i64..=12, flip in any::<bool>()) {
        let s = if flip { -1 } else { 1 };
        let data = sigma237().three_star_params().unwrap();
        let spec = IndefThetaSpec::new(&data, [ri(s * c1), ri(c2)], [ri(s * d1), ri(d2)]);
        prop_assume!(spec.is_ok());
        let spec = spec.unwrap();
        let qmax = ri(4);
        let fast: Vec<_> = spec.terms(&qmax).into_iter().map(|t| (t.j, t.eps, t.v, t.rho, t.qexp)).collect();
        let mut slow = Vec::new();
        for j in 0..4 {
            for eps in [1i64, -1] {
                let shift = ri(eps) * &data.b[j] / &data.m;
                for n in -40i64..=40 {
                    let v2 = ri(n) - BigRational::new(1.into(), 6.into());
                    for k in (-41i64..=41).filter(|k| k % 2 != 0) {
                        let v = [ri(k) - &shift, v2.clone()];
                        let rho = rho_regularizer(&v, &spec);
                        if rho.is_zero() {
                            continue;
                        }
                        let qexp = -&data.d + spec.form(&v, &v) / ri(2);
                        if qexp < qmax {
                            prop_assert!(n.abs() < 40 && k.abs() < 41, "box too small at v = ({}, {})", v[0], v[1]);
                            slow.push((j, eps, v, rho, qexp));
                        }
                    }
                }
            }
        }
        slow.sort();
        prop_assert_eq!(fast, slow);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn radial_limit_matches_leading_asymptotic(residues in prop::collection::vec((1i64..42, prop_oneof![Just(1i64), Just(-1)]), 1..4)) {
        let c = PeriodicSign::from_false_theta_combination(42, &residues).unwrap();
        prop_assume!(c.values().iter().any(|v| !v.is_zero()));
        let alpha = asymptotic_coeffs(&c, 42, 0).unwrap();
        let grid: Vec<BigRational> = [1000i64, 2000, 4000, 8000, 16000]
            .iter()
            .map(|&d| BigRational::new(1.into(), d.into()))
            .collect();
        let cmax = c.values().iter().map(|v| v.abs()).max().unwrap();
        let order = minimum_order(grid.last().unwrap(), 128, cmax.to_f64().unwrap()) + exp(1, 1);
        let s = c.theta_series(42, order);
        let r = radial_extrapolate(&s, &ri(0), &grid, 128).unwrap();
        let got = r.extrapolant.re.to_f64();
        prop_assert!((got - alpha[0].to_f64()).abs() < 1e-6, "{} vs {}", got, alpha[0]);
        prop_assert!(r.extrapolant.im.to_f64().abs() < 1e-9);
    }
}

#[test]
fn leg_permutations_leave_everything_invariant() {
    let order = exp(20, 1);
    let reference = zhat_three_star(&sigma237(), order).unwrap();
    for g in sigma237_orderings() {
        let t = g.three_star_params().unwrap();
        assert_eq!(t.d, coeff(41, 168));
        for j in 0..4 {
            assert_eq!(&t.c[j] - &t.b[j] * &t.b[j] / (&t.m * BigInt::from(4)), t.d);
        }
        assert_eq!(zhat_three_star(&g, order).unwrap(), reference);
        let lattice = zhat_negative_definite(&g, &g.canonical_label().unwrap(), order, 1).unwrap();
        assert_eq!(lattice, reference);
    }
}

#[test]
fn qseries_neg_and_sub_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let (a, b) = (random_series(&mut rng), random_series(&mut rng));
        assert_eq!(a.sub(&b), a.add(&b.neg()));
        assert_eq!(a.sub(&a), QSeries::zero(a.order()));
    }
}
