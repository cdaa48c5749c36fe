//! Randomized oracle suites shared by the core test targets and the
//! acceptance report.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zhat::indefinite::{rho_regularizer, IndefThetaSpec};
use zhat::lattice::{box_bound, lattice_points, lattice_points_box};
use zhat::linalg::{inertia, SymMatrix};
use zhat::plumbing::PlumbingGraph;
use zhat::{Coeff, Exp, QSeries};

pub fn sigma237() -> PlumbingGraph {
    PlumbingGraph::from_weights(&[-1, -2, -3, -7], &[(0, 1), (0, 2), (0, 3)]).unwrap()
}

/// `sum over k = +-1, +-41 (mod 84) minus k = +-13, +-29` of
/// `q^((k^2 + 83)/168)`, `k > 0`, written out independently of the engines.
pub fn sigma237_oracle(order: Rational64) -> QSeries {
    let mut s = QSeries::zero(order);
    for k in 1i64.. {
        let e = Rational64::new(k * k + 83, 168);
        if e >= order {
            break;
        }
        let c = match k % 84 {
            1 | 41 | 55 | 71 => 1,
            13 | 29 | 43 | 83 => -1,
            _ => 0,
        };
        if c != 0 {
            s.add_term(e, Coeff::from_integer(c.into()));
        }
    }
    s
}

/// The 24 vertex orderings of the `Sigma(2,3,7)` graph: four positions of
/// the centre times six orders of the legs.
pub fn sigma237_orderings() -> Vec<PlumbingGraph> {
    let legs = [-2i64, -3, -7];
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut out = Vec::new();
    for centre in 0..4usize {
        for p in &perms {
            let mut weights = Vec::with_capacity(4);
            let mut leg_ids = Vec::new();
            let mut next = 0;
            for pos in 0..4usize {
                if pos == centre {
                    weights.push(-1);
                } else {
                    weights.push(legs[p[next]]);
                    leg_ids.push(pos as i64);
                    next += 1;
                }
            }
            let edges: Vec<(i64, i64)> = leg_ids.iter().map(|&l| (centre as i64, l)).collect();
            out.push(PlumbingGraph::from_weights(&weights, &edges).unwrap());
        }
    }
    out
}

/// `-(B^T B + D)` with small random `B` and positive diagonal `D`.
pub fn random_negative_definite(rng: &mut ChaCha8Rng, n: usize) -> SymMatrix {
    let b: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-1..=1)).collect()).collect();
    let sym: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let g: i64 = (0..n).map(|k| b[k][i] * b[k][j]).sum();
                    -(g + if i == j { rng.gen_range(1..=2) } else { 0 })
                })
                .collect()
        })
        .collect();
    SymMatrix::from_rows_i64(&sym)
}

/// Fincke-Pohst enumeration against a brute-force box scan.
pub fn lattice_vs_box(instances: usize, seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = 0;
    for case in 0..instances {
        let n = rng.gen_range(1..=4);
        let m = random_negative_definite(&mut rng, n);
        let a: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
        let qmax = Rational64::new(rng.gen_range(1..=12), 4);
        let fast = lattice_points(&m, &a, qmax).map_err(|e| format!("case {case}: {e}"))?;
        let slow = lattice_points_box(&m, &a, qmax, box_bound(&m, qmax)).map_err(|e| format!("case {case}: {e}"))?;
        if fast != slow {
            return Err(format!("case {case}: M = {:?}, a = {a:?}, qmax = {qmax}", m.to_i64_rows()));
        }
        points += fast.len();
    }
    Ok(points)
}

/// Characteristic polynomial `det(x I - M)`, lowest degree first, by
/// Faddeev-LeVerrier.
pub fn characteristic_polynomial(m: &SymMatrix) -> Vec<BigRational> {
    let n = m.size();
    let rows = m.rows();
    let mul = |a: &Vec<Vec<BigRational>>, b: &Vec<Vec<BigRational>>| -> Vec<Vec<BigRational>> {
        (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum()).collect())
            .collect()
    };
    let mut c = vec![BigRational::zero(); n + 1];
    c[n] = BigRational::one();
    let mut mk: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        let mut next = mul(&rows, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &c[n - k + 1];
        }
        mk = next;
        let am = mul(&rows, &mk);
        let tr: BigRational = (0..n).map(|i| am[i][i].clone()).sum();
        c[n - k] = -tr / BigInt::from(k as i64);
    }
    c
}

fn sign_changes(c: &[BigRational]) -> usize {
    let signs: Vec<bool> = c.iter().filter(|x| !x.is_zero()).map(|x| x.is_positive()).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// `(positive, negative, zero)` root counts of a real-rooted polynomial by
/// Descartes' rule.
pub fn descartes_inertia(c: &[BigRational]) -> (usize, usize, usize) {
    let zeros = c.iter().position(|x| !x.is_zero()).unwrap_or(c.len() - 1);
    let pos = sign_changes(c);
    let flipped: Vec<BigRational> = c
        .iter()
        .enumerate()
        .map(|(i, x)| if i % 2 == 1 { -x.clone() } else { x.clone() })
        .collect();
    (pos, sign_changes(&flipped), zeros)
}

pub fn inertia_vs_charpoly(instances: usize, seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut singular = 0;
    for case in 0..instances {
        let n = rng.gen_range(1..=5);
        let mut rows = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in i..n {
                let v = rng.gen_range(-3..=3);
                rows[i][j] = v;
                rows[j][i] = v;
            }
        }
        // Copy the first row and column onto the last now and then, which
        // makes the matrix singular.
        if n > 1 && rng.gen_bool(0.2) {
            for i in 0..n {
                rows[i][n - 1] = rows[i][0];
                rows[n - 1][i] = rows[0][i];
            }
            rows[n - 1][n - 1] = rows[0][0];
        }
        let m = SymMatrix::from_rows_i64(&rows);
        let got = inertia(&m);
        let want = descartes_inertia(&characteristic_polynomial(&m));
        if (got.positives, got.negatives, got.zeros) != want {
            return Err(format!("case {case}: {rows:?}: got {got:?}, want {want:?}"));
        }
        singular += usize::from(want.2 > 0);
    }
    Ok(singular)
}

pub fn random_series(rng: &mut ChaCha8Rng) -> QSeries {
    let den = [1i64, 2, 3][rng.gen_range(0..3)];
    let order = Rational64::new(rng.gen_range(8..=16), 2);
    let mut s = QSeries::zero(order);
    for _ in 0..rng.gen_range(1..=5) {
        let e = Rational64::new(rng.gen_range(-4..=12), den);
        let c = Coeff::new(rng.gen_range(-5..=5).into(), rng.gen_range(1..=3).into());
        s.add_term(e, c);
    }
    s
}

fn agree(x: &QSeries, y: &QSeries) -> bool {
    let o = x.order().min(y.order());
    x.truncate(o) == y.truncate(o)
}

/// Ring axioms on random triples, each side compared up to the smaller of
/// the two truncation orders.
pub fn ring_axioms(triples: usize, seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..triples {
        let (a, b, c) = (random_series(&mut rng), random_series(&mut rng), random_series(&mut rng));
        let zero = QSeries::zero(Exp::from_integer(100));
        let one = QSeries::one(Exp::from_integer(100));
        let checks = [
            ("add assoc", agree(&a.add(&b).add(&c), &a.add(&b.add(&c)))),
            ("add comm", a.add(&b) == b.add(&a)),
            ("mul assoc", agree(&a.mul(&b).mul(&c), &a.mul(&b.mul(&c)))),
            ("mul comm", a.mul(&b) == b.mul(&a)),
            ("distrib", agree(&a.mul(&b.add(&c)), &a.mul(&b).add(&a.mul(&c)))),
            ("zero", agree(&a.add(&zero), &a)),
            ("one", agree(&a.mul(&one), &a)),
            ("neg", a.add(&a.neg()).is_zero()),
        ];
        if let Some((name, _)) = checks.iter().find(|(_, ok)| !ok) {
            return Err(format!("case {case}: {name} fails for a = {a}, b = {b}, c = {c}"));
        }
    }
    Ok(triples)
}

/// No lattice point of the `Sigma(2,3,7)` theta function lies on either
/// boundary line `(vbar, c) = 0` or `(vbar, c') = 0`: neither the enumerated
/// terms below `order` nor any point of the box `|k| <= 2 half + 1`,
/// `|n| <= half`.
pub fn rho_boundary_never_attained(order: i64, half: i64) -> Result<usize, String> {
    let data = sigma237().three_star_params().unwrap();
    let spec = IndefThetaSpec::with_default_cone(&data).unwrap();
    let qmax = BigRational::from_integer(order.into());
    let mut checked = 0;
    for t in spec.terms(&qmax) {
        let vbar = [t.v[0].abs(), t.v[1].clone()];
        if spec.form(&vbar, &spec.cvec).is_zero() || spec.form(&vbar, &spec.cprime).is_zero() {
            return Err(format!("term on the boundary: v = ({}, {})", t.v[0], t.v[1]));
        }
        checked += 1;
    }
    let six = BigRational::from_integer(6.into());
    for (j, b) in data.b.iter().enumerate() {
        for eps in [1i64, -1] {
            let shift = BigRational::from_integer(eps.into()) * b / &data.m;
            for n in -half..=half {
                let v2 = BigRational::from_integer(n.into()) - BigRational::one() / &six;
                for k in (-2 * half - 1..=2 * half + 1).filter(|k| k % 2 != 0) {
                    let v = [BigRational::from_integer(k.into()) - &shift, v2.clone()];
                    let vbar = [v[0].abs(), v[1].clone()];
                    if spec.form(&vbar, &spec.cvec).is_zero() || spec.form(&vbar, &spec.cprime).is_zero() {
                        return Err(format!("j = {j}: point on the boundary v = ({}, {})", v[0], v[1]));
                    }
                    let rho = rho_regularizer(&v, &spec);
                    if rho != BigRational::zero() && rho.abs() != BigRational::one() {
                        return Err(format!("rho = {rho} off {{0, +-1}} at v = ({}, {})", v[0], v[1]));
                    }
                }
            }
        }
    }
    Ok(checked)
}
