//! `Zhat` of orientation-reversed three-star manifolds through a
//! cone-regularized theta function of signature (1,1).
//!
//! For a four-node three-star graph with parameters `m`, `b_j`, `c_j`, `d`
//! the theta function is
//!
//! ```text
//! q^-d e^(i pi/6) sum_{j, eps} eps w^(eps b_j/m) sum_{v in L_{j,eps}} rho(v) q^((v,v)/2) e^(2 pi i (z, 1/2).v)
//! ```
//!
//! over `v1 in 2Z + 1 - eps b_j/m`, `v2 in Z - 1/6`, with `(u, v) = u^T K v`,
//! `K = diag(-m/2, 3)`, and `rho` built from two timelike vectors.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::plumbing::{PlumbingGraph, ThreeStarData};
use crate::series::{constant_term_with_pv, eta_series, pv_vertex_factor, Coeff, Exp, QSeries, WLaurentQSeries};
use crate::zhat::prefactor;

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn ri(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn small(x: &BigRational) -> Result<Exp> {
    match (x.numer().to_i64(), x.denom().to_i64()) {
        (Some(n), Some(d)) => Ok(Rational64::new(n, d)),
        _ => Err(Error::Precondition(format!("exponent {x} does not fit in 64 bits"))),
    }
}

fn big(e: Exp) -> BigRational {
    r(*e.numer(), *e.denom())
}

fn sgn(x: &BigRational) -> i64 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Lattice data and cone vectors of the regularized theta function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndefThetaSpec {
    pub m: BigRational,
    pub b: [BigRational; 4],
    pub c: [BigRational; 4],
    pub d: BigRational,
    pub cvec: [BigRational; 2],
    pub cprime: [BigRational; 2],
}

/// Which half of the lattice, by the sign of `v2`.
#[derive(Clone, Copy)]
enum Side {
    Up,
    Down,
}

impl IndefThetaSpec {
    pub fn new(data: &ThreeStarData, cvec: [BigRational; 2], cprime: [BigRational; 2]) -> Result<Self> {
        let spec = IndefThetaSpec {
            m: data.m.clone(),
            b: data.b.clone(),
            c: data.c.clone(),
            d: data.d.clone(),
            cvec,
            cprime,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// The cone `c = (1, 0)`, `c' = (8, 21)`.
    pub fn with_default_cone(data: &ThreeStarData) -> Result<Self> {
        Self::new(data, [ri(1), ri(0)], [ri(8), ri(21)])
    }

    /// `(u, v)_K = -m/2 u1 v1 + 3 u2 v2`.
    pub fn form(&self, u: &[BigRational; 2], v: &[BigRational; 2]) -> BigRational {
        -(&self.m / ri(2)) * &u[0] * &v[0] + ri(3) * &u[1] * &v[1]
    }

    pub fn validate(&self) -> Result<()> {
        if !self.m.is_positive() {
            return Err(Error::InvalidCone(format!("form needs m > 0, got {}", self.m)));
        }
        for (name, c) in [("c", &self.cvec), ("c'", &self.cprime)] {
            let n = self.form(c, c);
            if !n.is_negative() {
                return Err(Error::InvalidCone(format!("{name} = ({}, {}) has norm {n} >= 0", c[0], c[1])));
            }
        }
        if !self.form(&self.cvec, &self.cprime).is_negative() {
            return Err(Error::InvalidCone("c and c' lie in opposite timelike cones".into()));
        }
        if sgn(&self.cvec[0]) == 0 || sgn(&self.cvec[0]) != sgn(&self.cprime[0]) {
            return Err(Error::InvalidCone("support of rho is unbounded in |v1|".into()));
        }
        for side in [Side::Up, Side::Down] {
            if !self.growth(side).is_positive() {
                return Err(Error::InvalidCone("quadratic form is not positive on the support of rho".into()));
            }
        }
        Ok(())
    }

    /// Root of `(vbar, c) = 0` in `|v1|` per unit `v2`.
    fn root_slope(&self, c: &[BigRational; 2]) -> BigRational {
        ri(6) * &c[1] / (&self.m * &c[0])
    }

    /// Support of `rho` within a `v2` slice: `|v1| <= slope * |v2|`.
    fn slope(&self, side: Side) -> BigRational {
        let s = match side {
            Side::Up => ri(1),
            Side::Down => ri(-1),
        };
        [self.root_slope(&self.cvec), self.root_slope(&self.cprime)]
            .into_iter()
            .map(|a| a * &s)
            .fold(BigRational::zero(), |acc, x| if x > acc { x } else { acc })
    }

    /// `kappa` with `(v,v)/2 >= kappa v2^2` on the support of `rho`.
    fn growth(&self, side: Side) -> BigRational {
        let a = self.slope(side);
        r(3, 2) - &self.m / ri(4) * &a * &a
    }

    /// Largest `|v1|` in the support at height `v2`.
    fn slice_bound(&self, v2: &BigRational) -> BigRational {
        let roots = [self.root_slope(&self.cvec) * v2, self.root_slope(&self.cprime) * v2];
        roots.into_iter().fold(BigRational::zero(), |acc, x| if x > acc { x } else { acc })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "c": [self.cvec[0].to_string(), self.cvec[1].to_string()],
            "cprime": [self.cprime[0].to_string(), self.cprime[1].to_string()],
        })
    }
}

/// `1/2 (sgn(vbar, c) - sgn(vbar, c'))` with `vbar = (|v1|, v2)`.
pub fn rho_regularizer(v: &[BigRational; 2], spec: &IndefThetaSpec) -> BigRational {
    let vbar = [v[0].abs(), v[1].clone()];
    r(sgn(&spec.form(&vbar, &spec.cvec)) - sgn(&spec.form(&vbar, &spec.cprime)), 2)
}

/// One lattice point of the theta function with nonzero `rho`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct IndefTerm {
    pub j: usize,
    pub eps: i64,
    /// Total w-exponent `eps b_j/m + v1`.
    pub wexp: BigRational,
    pub v: [BigRational; 2],
    pub rho: BigRational,
    /// `-d + (v,v)/2`.
    pub qexp: BigRational,
    /// Phase as a power of `zeta_12`: `1 + 6 v2`.
    pub phase: BigRational,
}

impl IndefThetaSpec {
    /// All terms with nonzero `rho` and `-d + (v,v)/2 < qmax`.
    pub fn terms(&self, qmax: &BigRational) -> Vec<IndefTerm> {
        let budget = qmax + &self.d;
        let mut out = Vec::new();
        for j in 0..4 {
            for eps in [1i64, -1] {
                let shift = ri(eps) * &self.b[j] / &self.m;
                for side in [Side::Up, Side::Down] {
                    let kappa = self.growth(side);
                    let (mut n, step) = match side {
                        Side::Up => (1i64, 1i64),
                        Side::Down => (0, -1),
                    };
                    loop {
                        let v2 = ri(n) - r(1, 6);
                        if &kappa * &v2 * &v2 >= budget {
                            break;
                        }
                        self.slice(j, eps, &shift, &v2, qmax, &mut out);
                        n += step;
                    }
                }
            }
        }
        out.sort();
        out
    }

    fn slice(&self, j: usize, eps: i64, shift: &BigRational, v2: &BigRational, qmax: &BigRational, out: &mut Vec<IndefTerm>) {
        let u = self.slice_bound(v2);
        // v1 = k - shift with k odd and |v1| <= u.
        let lo = (shift - &u).ceil().to_integer();
        let hi = (shift + &u).floor().to_integer();
        let mut k = lo;
        while k <= hi {
            if k.clone() % 2 != BigInt::zero() {
                let v = [BigRational::from_integer(k.clone()) - shift, v2.clone()];
                let rho = rho_regularizer(&v, self);
                if !rho.is_zero() {
                    let qexp = -&self.d + self.form(&v, &v) / ri(2);
                    if &qexp < qmax {
                        out.push(IndefTerm {
                            j,
                            eps,
                            wexp: BigRational::from_integer(k.clone()),
                            phase: ri(1) + ri(6) * v2,
                            v,
                            rho,
                            qexp,
                        });
                    }
                }
            }
            k += 1;
        }
    }
}

/// The regularized theta function as a Laurent object in `w`, truncated at
/// q-order `order`. Phases are combined exactly in `Q(zeta_12)`; any term
/// that fails to come out rational is an error.
pub fn vartheta_indefinite(spec: &IndefThetaSpec, order: Exp) -> Result<WLaurentQSeries> {
    let terms = spec.terms(&big(order));
    let mut acc: BTreeMap<(BigRational, BigRational), BTreeMap<u64, BigRational>> = BTreeMap::new();
    for t in &terms {
        if !t.phase.is_integer() {
            return Err(Error::NonRationalPhase(format!("zeta_12^({})", t.phase)));
        }
        let p = t.phase.to_integer().to_i64().unwrap().rem_euclid(12) as u64;
        let c = ri(t.eps) * &t.rho;
        *acc.entry((t.wexp.clone(), t.qexp.clone()))
            .or_default()
            .entry(p)
            .or_insert_with(BigRational::zero) += c;
    }
    let window = terms.iter().map(|t| t.wexp.abs()).max().unwrap_or_else(BigRational::zero);
    let mut out = WLaurentQSeries::new(small(&window)?, order);
    for ((w, q), powers) in acc {
        let value = Cyclotomic::from_powers(12, &powers);
        let c = value
            .to_rational()
            .ok_or_else(|| Error::NonRationalPhase(format!("w^{w} q^{q}")))?;
        out.add_monomial(small(&w)?, small(&q)?, c);
    }
    Ok(out)
}

/// `1/(q;q)_inf` truncated below `order`.
pub fn partition_series(order: Exp) -> QSeries {
    let shift = Exp::new(1, 24);
    eta_series(order + shift)
        .shift(-shift)
        .invert()
        .expect("(q;q)_inf has constant term 1")
}

/// The constant term in `w` of the theta function against the
/// principal-value factor `1/(w - 1/w)`, before the eta division.
pub fn reversed_constant_term(spec: &IndefThetaSpec, order: Exp) -> Result<QSeries> {
    let theta = vartheta_indefinite(spec, order)?;
    let window = theta.window().ceil().to_integer();
    Ok(constant_term_with_pv(&theta, &pv_vertex_factor(3, window)))
}

/// `Zhat_0(-M)` with the default cone.
pub fn zhat_reversed(g: &PlumbingGraph, order: Exp) -> Result<QSeries> {
    let data = g.three_star_params()?;
    let spec = IndefThetaSpec::with_default_cone(&data)?;
    zhat_reversed_with(g, &spec, order)
}

pub fn zhat_reversed_with(g: &PlumbingGraph, spec: &IndefThetaSpec, order: Exp) -> Result<QSeries> {
    let (sign, pre) = prefactor(g);
    let eta_shift = Exp::new(1, 24);
    // Total exponent: -pre - 1/24 + theta exponent + partition exponent.
    let theta_order = order + pre + eta_shift;
    let ct = reversed_constant_term(spec, theta_order)?;
    let low = ct.min_exponent().unwrap_or_else(Exp::zero).min(Exp::zero());
    let parts = partition_series(theta_order - low);
    // rho is -1 on its support; the overall sign makes the regularized
    // weight +1 per lattice point.
    let orientation = -sign;
    let out = ct
        .mul(&parts)
        .shift(-pre - eta_shift)
        .scale(&Coeff::from_integer(orientation.into()))
        .truncate(order);
    Ok(out)
}

/// Ramanujan's order-7 mock theta function
/// `F0(q) = sum_n q^(n^2) / ((1 - q^(n+1)) ... (1 - q^(2n)))`, computed
/// densely with integer coefficients.
pub fn mock_f0_reference(order: Exp) -> QSeries {
    let len = order.ceil().to_integer().max(0) as usize;
    let mut total = vec![BigInt::zero(); len];
    let mut n = 0usize;
    while n * n < len {
        let mut a = vec![BigInt::zero(); len];
        a[n * n] = BigInt::one();
        for i in n + 1..=2 * n {
            for t in i..len {
                let prev = a[t - i].clone();
                a[t] += prev;
            }
        }
        for (t, x) in total.iter_mut().zip(a) {
            *t += x;
        }
        n += 1;
    }
    QSeries::from_terms(
        total
            .into_iter()
            .enumerate()
            .map(|(i, c)| (Exp::from_integer(i as i64), BigRational::from_integer(c))),
        order,
    )
}

/// A combination `sum s_r theta^1_{m,r}` of weight 3/2 unary theta
/// functions `theta^1_{m,r} = (4m)^(-1/2) sum_{l = r mod 2m} l q^(l^2/4m)`.
/// The series omits the scalar `(4m)^(-1/2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShadowTheta {
    pub m: i64,
    pub residues: Vec<(i64, i64)>,
    /// `(l, multiplicity)` for every contributing `l`.
    pub terms: Vec<(i64, i64)>,
    pub series: QSeries,
}

impl ShadowTheta {
    pub fn new(m: i64, residues: &[(i64, i64)], order: Exp) -> Result<Self> {
        if m <= 0 {
            return Err(Error::Precondition(format!("unary theta needs m > 0, got {m}")));
        }
        let e = |l: i64| Rational64::new(l * l, 4 * m);
        let mut terms = Vec::new();
        for &(res, s) in residues {
            let r0 = res.rem_euclid(2 * m);
            let mut l = r0;
            while e(l) < order {
                terms.push((l, s));
                l += 2 * m;
            }
            let mut l = r0 - 2 * m;
            while e(l) < order {
                terms.push((l, s));
                l -= 2 * m;
            }
        }
        terms.sort_unstable();
        let mut series = QSeries::zero(order);
        for &(l, s) in &terms {
            series.add_term(e(l), ri(l * s));
        }
        Ok(ShadowTheta { m, residues: residues.to_vec(), terms, series })
    }

    /// `4m`, the number whose inverse square root scales the series.
    pub fn normalization_square(&self) -> i64 {
        4 * self.m
    }

    /// The Eichler integral `sum n^(1-w) a(n) q^n` at weight 3/2, which
    /// replaces each `l q^(l^2/4m) / sqrt(4m)` by `sgn(l) q^(l^2/4m)`.
    pub fn eichler_companion(&self) -> QSeries {
        let mut out = QSeries::zero(self.series.order());
        for &(l, s) in &self.terms {
            out.add_term(Rational64::new(l * l, 4 * self.m), ri(l.signum() * s));
        }
        out
    }
}

/// The shadow `theta^1_{42,1} - theta^1_{42,13} - theta^1_{42,29} + theta^1_{42,41}`
/// of the order-7 mock theta function.
pub fn shadow_theta(order: Exp) -> ShadowTheta {
    ShadowTheta::new(42, &[(1, 1), (13, -1), (29, -1), (41, 1)], order).expect("m = 42 is positive")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{coeff, exp};

    fn sigma237() -> PlumbingGraph {
        PlumbingGraph::from_weights(&[-1, -2, -3, -7], &[(0, 1), (0, 2), (0, 3)]).unwrap()
    }

    fn spec() -> IndefThetaSpec {
        IndefThetaSpec::with_default_cone(&sigma237().three_star_params().unwrap()).unwrap()
    }

    #[test]
    fn cone_norms() {
        let s = spec();
        assert_eq!(s.form(&s.cvec, &s.cvec), ri(-21));
        assert_eq!(s.form(&s.cprime, &s.cprime), ri(-21));
        let bad = IndefThetaSpec::new(&sigma237().three_star_params().unwrap(), [ri(1), ri(0)], [ri(1), ri(5)]);
        assert!(matches!(bad, Err(Error::InvalidCone(_))));
    }

    #[test]
    fn rho_examples() {
        let s = spec();
        assert_eq!(rho_regularizer(&[ri(1), r(17, 6)], &s), ri(-1));
        assert_eq!(rho_regularizer(&[ri(1), r(5, 6)], &s), ri(0));
        assert_eq!(rho_regularizer(&[ri(-1), r(17, 6)], &s), ri(-1));
    }

    #[test]
    fn theta_is_odd_in_w() {
        let t = vartheta_indefinite(&spec(), exp(20, 1)).unwrap();
        assert!(!t.is_empty());
        for (w, s) in t.iter() {
            assert!(w.is_integer() && w.to_integer() % 2 != 0);
            assert_eq!(t.get(-*w).unwrap(), &s.neg());
        }
    }

    #[test]
    fn golden_reversed() {
        let z = zhat_reversed(&sigma237(), exp(15, 2)).unwrap();
        let want = mock_f0_reference(exp(8, 1)).shift(exp(-1, 2));
        assert_eq!(z, want);
        let f0: Vec<i64> = (0..8)
            .map(|i| mock_f0_reference(exp(8, 1)).coeff(exp(i, 1)).to_integer().try_into().unwrap())
            .collect();
        assert_eq!(f0, vec![1, 1, 0, 1, 1, 1, 0, 2]);
    }

    #[test]
    fn shadow_and_companion() {
        let s = shadow_theta(exp(3, 1));
        assert_eq!(s.series.coeff(exp(1, 168)), coeff(1, 1));
        let t = ShadowTheta::new(42, &[(-1, 1)], exp(40, 1)).unwrap();
        let u = ShadowTheta::new(42, &[(1, -1)], exp(40, 1)).unwrap();
        assert_eq!(t.series, u.series);
        let order = exp(40, 1);
        let z = crate::zhat::zhat_three_star(&sigma237(), order + exp(83, 168)).unwrap();
        assert_eq!(shadow_theta(order).eichler_companion(), z.shift(exp(-83, 168)).truncate(order));
    }
}
