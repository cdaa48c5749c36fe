//! `Zhat` for negative-definite plumbings by lattice summation, and the
//! false-theta closed form for four-node three-star graphs.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{lattice_points_with, LatticeTerm, Support};
use crate::plumbing::{PlumbingGraph, SpincLabel};
use crate::series::{pv_vertex_factor, Coeff, Exp, QSeries};

fn big(r: Exp) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

fn small(r: &BigRational) -> Result<Exp> {
    match (r.numer().to_i64(), r.denom().to_i64()) {
        (Some(n), Some(d)) => Ok(Rational64::new(n, d)),
        _ => Err(Error::Precondition(format!("exponent {r} does not fit in 64 bits"))),
    }
}

/// `(-1)^pi` and the prefactor exponent `(3 sigma - sum of weights) / 4`.
pub fn prefactor(g: &PlumbingGraph) -> (i64, Exp) {
    let i = g.inertia();
    let sign = if i.positives.is_multiple_of(2) { 1 } else { -1 };
    (sign, Rational64::new(3 * i.signature() - g.weight_sum(), 4))
}

/// Values of `n_v` where the principal-value factor of a vertex of degree
/// at most two is nonzero; `None` for higher degree.
fn vertex_support(degree: usize) -> Option<Vec<i64>> {
    match degree {
        0 => Some(vec![-2, 0, 2]),
        1 => Some(vec![-1, 1]),
        2 => Some(vec![0]),
        _ => None,
    }
}

/// Lattice terms contributing to `Zhat_a` below q-order `order`, i.e. with
/// `qexp + prefactor < order`.
pub fn contributing_terms(g: &PlumbingGraph, a: &SpincLabel, order: Exp, jobs: usize) -> Result<Vec<LatticeTerm>> {
    let m = g.adjacency_matrix();
    if !g.inertia().is_negative_definite() {
        return Err(Error::NotNegativeDefinite);
    }
    let (_, pre) = prefactor(g);
    let support: Support = g.degrees().into_iter().map(vertex_support).collect();
    lattice_points_with(&m, &a.to_i64(), order - pre, support, jobs)
}

/// `(-1)^pi q^((3 sigma - sum weights)/4) sum_n q^(-n M^-1 n / 4) prod_v PV_v(-n_v)`,
/// for negative-definite `M`.
pub fn zhat_negative_definite(g: &PlumbingGraph, a: &SpincLabel, order: Exp, jobs: usize) -> Result<QSeries> {
    if !order.is_positive() {
        return Err(Error::Precondition("series order must be positive".into()));
    }
    let terms = contributing_terms(g, a, order, jobs)?;
    let (sign, pre) = prefactor(g);
    let window = terms.iter().flat_map(|t| t.n.iter().map(|x| x.abs())).max().unwrap_or(0);
    let pv: Vec<_> = g.degrees().iter().map(|&d| pv_vertex_factor(d as u32, window)).collect();
    let mut out = QSeries::zero(order);
    for t in &terms {
        let mut c = Coeff::from_integer(sign.into());
        for (f, &nv) in pv.iter().zip(&t.n) {
            c *= f.coefficient(-nv);
            if c.is_zero() {
                break;
            }
        }
        out.add_term(t.qexp + pre, c);
    }
    Ok(out)
}

fn sign(x: &BigRational) -> i64 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// The false theta function `sum_{k = r mod 2m} sgn(k) q^(k^2/4m)`.
///
/// The `k = 0` term counts with sign `+1`, the convention under which
/// `F_{j,m}(m tau) = false_theta(m, j) + p_{m,j}` holds for every residue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FalseTheta {
    pub m: i64,
    pub r: i64,
    pub series: QSeries,
}

pub fn false_theta(m: i64, r: i64, order: Exp) -> Result<FalseTheta> {
    if m <= 0 {
        return Err(Error::Precondition(format!("false theta needs m > 0, got {m}")));
    }
    let r0 = r.rem_euclid(2 * m);
    let mut series = QSeries::zero(order);
    let exp_of = |k: i64| Rational64::new(k * k, 4 * m);
    // k = r0 + 2m t for t >= 0 and k = r0 - 2m t for t >= 1 exhaust the class.
    let mut k = r0;
    while exp_of(k) < order {
        series.add_term(exp_of(k), Coeff::one());
        k += 2 * m;
    }
    let mut k = r0 - 2 * m;
    while exp_of(k) < order {
        series.add_term(exp_of(k), Coeff::from_integer((-1).into()));
        k -= 2 * m;
    }
    Ok(FalseTheta { m, r: r0, series })
}

/// `F_{j,m}(s tau) = sum_k sgn(k + 1/2) q^(s (k + j/2m)^2)` for rational
/// `j`, `m != 0` and `s > 0`.
pub fn f_series(j: &BigRational, m: &BigRational, s: &BigRational, order: Exp) -> Result<QSeries> {
    if m.is_zero() {
        return Err(Error::Precondition("F_{j,m} needs m != 0".into()));
    }
    if !s.is_positive() {
        return Err(Error::Precondition("F_{j,m} needs a positive argument scale".into()));
    }
    let x = j / (m * BigInt::from(2));
    let ord = big(order);
    let mut out = QSeries::zero(order);
    let exp_of = |k: &BigInt| {
        let t = BigRational::from_integer(k.clone()) + &x;
        s * &t * &t
    };
    let start = (-&x).floor().to_integer();
    let mut k = start.clone();
    loop {
        let e = exp_of(&k);
        if e >= ord {
            break;
        }
        let sg = sign(&(BigRational::from_integer(k.clone()) + BigRational::new(1.into(), 2.into())));
        out.add_term(small(&e)?, Coeff::from_integer(sg.into()));
        k -= 1;
    }
    let mut k = start + 1;
    loop {
        let e = exp_of(&k);
        if e >= ord {
            break;
        }
        let sg = sign(&(BigRational::from_integer(k.clone()) + BigRational::new(1.into(), 2.into())));
        out.add_term(small(&e)?, Coeff::from_integer(sg.into()));
        k += 1;
    }
    Ok(out)
}

/// The polynomial `p_{m,j}` with `F_{j,m}(m tau) = false_theta(m, j) + p_{m,j}`.
pub fn p_polynomial(m: i64, j: i64, order: Exp) -> Result<QSeries> {
    if m <= 0 {
        return Err(Error::Precondition(format!("p_(m,j) needs m > 0, got {m}")));
    }
    let mut out = QSeries::zero(order);
    let e = |k: i64| Rational64::new(k * k, 4 * m);
    let fl = j.div_euclid(2 * m);
    if j >= 2 * m {
        for k in 1..=fl {
            out.add_term(e(j - 2 * m * k), Coeff::from_integer((-2).into()));
        }
    } else if j < 0 {
        for k in 0..=(-fl - 1) {
            out.add_term(e(j + 2 * m * k), Coeff::from_integer(2.into()));
        }
    }
    Ok(out.truncate(order))
}

/// `(F_{j,m}(m tau), p_{m,j}(tau))` for integers `m > 0`, `j`.
pub fn f_and_p(j: i64, m: i64, order: Exp) -> Result<(QSeries, QSeries)> {
    if m == 0 {
        return Err(Error::Precondition("F_{j,m} needs m != 0".into()));
    }
    let mb = BigRational::from_integer(m.into());
    let f = f_series(&BigRational::from_integer(j.into()), &mb, &mb, order)?;
    Ok((f, p_polynomial(m, j, order)?))
}

/// `(-1)^pi q^c sum_j F_{m - b_j, m}(m tau)` for a weakly negative
/// unimodular four-node three-star graph.
pub fn zhat_three_star(g: &PlumbingGraph, order: Exp) -> Result<QSeries> {
    let t = g.three_star_params()?;
    let shift = small(&t.c_pref)?;
    let mut acc = QSeries::zero(order - shift);
    for b in &t.b {
        acc = acc.add(&f_series(&(&t.m - b), &t.m, &t.m, order - shift)?);
    }
    let out = acc.shift(shift);
    Ok(if t.sign < 0 { out.neg() } else { out })
}

/// The three-star closed form written as a signed combination of false
/// theta functions, `(residue, multiplicity)` with residues in `[0, 2m)`,
/// plus the correction polynomial. Requires integral `m` and `b_j`.
pub fn three_star_false_theta_combination(g: &PlumbingGraph, order: Exp) -> Result<(i64, Vec<(i64, i64)>, QSeries)> {
    let t = g.three_star_params()?;
    let m = t
        .m_integer()
        .ok_or_else(|| Error::Precondition(format!("m = {} is not an integer", t.m)))?;
    let mut combo: Vec<(i64, i64)> = Vec::new();
    let mut poly = QSeries::zero(order);
    for b in &t.b {
        if !b.is_integer() {
            return Err(Error::Precondition(format!("b = {b} is not an integer")));
        }
        let j = m - b.to_integer().to_i64().unwrap();
        let (r, s) = canonical_residue(m, j);
        match combo.iter_mut().find(|(x, _)| *x == r) {
            Some(entry) => entry.1 += s,
            None => combo.push((r, s)),
        }
        poly = poly.add(&p_polynomial(m, j, order)?);
    }
    combo.retain(|&(_, s)| s != 0);
    combo.sort_unstable();
    Ok((m, combo, poly))
}

/// Residue `r` in `[0, m]` with `false_theta(m, j) = s false_theta(m, r)`
/// away from `k = 0`, using `k -> -k`.
fn canonical_residue(m: i64, j: i64) -> (i64, i64) {
    let r = j.rem_euclid(2 * m);
    if r > m {
        (2 * m - r, -1)
    } else {
        (r, 1)
    }
}
