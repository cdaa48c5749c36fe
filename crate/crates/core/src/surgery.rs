//! Dehn surgery on knot complements: two-variable knot series, the
//! Laplace transform onto q-series, and the Alexander-polynomial boundary
//! condition.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::series::{Coeff, Exp, QSeries};

/// Finite Laurent polynomial in `q` with rational exponents.
pub type QPoly = BTreeMap<Exp, Coeff>;

fn poly_add(p: &mut QPoly, e: Exp, c: Coeff) {
    let entry = p.entry(e).or_insert_with(Coeff::zero);
    *entry += c;
    if entry.is_zero() {
        p.remove(&e);
    }
}

/// `F_K(x, q) = sum_u F_u(q) x^u`, antisymmetric under `x -> 1/x`, known for
/// `|u| <= u_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnotSeries {
    pub name: String,
    coeffs: BTreeMap<Exp, QPoly>,
    pub u_max: Exp,
    /// Spacing of consecutive x-exponents.
    pub u_step: Exp,
    /// `Delta_K(x)` as `(power, coefficient)` pairs.
    pub alexander: Option<Vec<(i64, i64)>>,
}

impl KnotSeries {
    /// Build from the coefficients at positive `u`, antisymmetrizing.
    pub fn from_positive_part(name: &str, positive: Vec<(Exp, QPoly)>, alexander: Option<Vec<(i64, i64)>>) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (u, p) in positive {
            if !u.is_positive() {
                return Err(Error::Parse(format!("expected a positive x-exponent, got {u}")));
            }
            let neg: QPoly = p.iter().map(|(e, c)| (*e, -c)).collect();
            coeffs.insert(u, p);
            coeffs.insert(-u, neg);
        }
        Self::from_coefficients(name, coeffs, alexander)
    }

    /// Build from a full coefficient table, which must be antisymmetric.
    /// Missing mirror terms are filled in.
    pub fn from_coefficients(name: &str, mut coeffs: BTreeMap<Exp, QPoly>, alexander: Option<Vec<(i64, i64)>>) -> Result<Self> {
        coeffs.retain(|_, p| !p.is_empty());
        let keys: Vec<Exp> = coeffs.keys().copied().collect();
        for u in keys {
            let mirror: QPoly = coeffs[&u].iter().map(|(e, c)| (*e, -c)).collect();
            match coeffs.get(&-u) {
                Some(p) if *p != mirror => {
                    return Err(Error::Parse(format!("knot series is not antisymmetric at x^{u}")));
                }
                Some(_) => {}
                None => {
                    coeffs.insert(-u, mirror);
                }
            }
        }
        let pos: Vec<Exp> = coeffs.keys().copied().filter(|u| u.is_positive()).collect();
        let u_max = pos.last().copied().unwrap_or_else(Exp::zero);
        let u_step = pos.windows(2).map(|w| w[1] - w[0]).min().unwrap_or_else(Exp::one);
        Ok(KnotSeries { name: name.to_string(), coeffs, u_max, u_step, alexander })
    }

    pub fn coefficient(&self, u: Exp) -> Option<&QPoly> {
        self.coeffs.get(&u)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Exp, &QPoly)> {
        self.coeffs.iter()
    }

    /// `F_u(1)`.
    pub fn at_q_one(&self, u: Exp) -> Coeff {
        self.coeffs.get(&u).map_or_else(Coeff::zero, |p| p.values().sum())
    }

    /// Negative of the minimal q-exponent of `F_u`, for each known `u > 0`.
    pub fn widths(&self) -> Vec<(Exp, Exp)> {
        self.coeffs
            .iter()
            .filter(|(u, _)| u.is_positive())
            .map(|(u, p)| (*u, -p.keys().next().copied().unwrap_or_else(Exp::zero)))
            .collect()
    }

    /// Width bound for an unknown coefficient: each step past the data adds
    /// one more than the previous step did, starting from the last observed
    /// increment.
    pub fn extrapolated_width(&self, u: Exp) -> Exp {
        let w = self.widths();
        let (last_u, last_w, inc) = match w.as_slice() {
            [] => return Exp::zero(),
            [(u0, w0)] => (*u0, (*w0).max(Exp::zero()), Exp::zero()),
            [.., (u1, w1), (u2, w2)] => (*u2, *w2, ((*w2 - *w1) / ((*u2 - *u1) / self.u_step)).max(Exp::zero())),
        };
        let mut width = last_w;
        let mut step = inc;
        let mut at = last_u;
        while at < u {
            step += 1;
            width += step;
            at += self.u_step;
        }
        width.max(Exp::zero())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("knot document: {e}")))?;
        Self::from_json(&v)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let name = v.get("name").and_then(Value::as_str).unwrap_or("knot");
        let xden = v.get("xden").and_then(Value::as_i64).unwrap_or(2);
        if xden <= 0 {
            return Err(Error::Parse("xden must be positive".into()));
        }
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing \"terms\" array".into()))?;
        let mut coeffs = BTreeMap::new();
        for t in terms {
            let bad = || Error::Parse(format!("malformed knot term {t}"));
            let pair = t.as_array().filter(|p| p.len() == 2).ok_or_else(bad)?;
            let u = Rational64::new(pair[0].as_i64().ok_or_else(bad)?, xden);
            let mut poly = QPoly::new();
            for m in pair[1].as_array().ok_or_else(bad)? {
                let q: Vec<i64> = m
                    .as_array()
                    .filter(|q| q.len() == 4)
                    .and_then(|q| q.iter().map(Value::as_i64).collect())
                    .ok_or_else(bad)?;
                if q[1] == 0 || q[3] == 0 {
                    return Err(bad());
                }
                poly_add(&mut poly, Rational64::new(q[0], q[1]), BigRational::new(q[2].into(), q[3].into()));
            }
            if coeffs.insert(u, poly).is_some() {
                return Err(Error::Parse(format!("x-exponent {u} listed twice")));
            }
        }
        let alexander = match v.get("alexander") {
            None | Some(Value::Null) => None,
            Some(a) => {
                let list = a.as_array().ok_or_else(|| Error::Parse("\"alexander\" must be an array".into()))?;
                let mut out = Vec::new();
                for p in list {
                    let pc = p
                        .as_array()
                        .filter(|x| x.len() == 2)
                        .and_then(|x| Some((x[0].as_i64()?, x[1].as_i64()?)))
                        .ok_or_else(|| Error::Parse(format!("malformed Alexander term {p}")))?;
                    out.push(pc);
                }
                Some(out)
            }
        };
        Self::from_coefficients(name, coeffs, alexander)
    }

    pub fn to_json(&self) -> Value {
        let xden = self.coeffs.keys().fold(1i64, |acc, u| acc.lcm(u.denom()));
        let terms: Vec<Value> = self
            .coeffs
            .iter()
            .map(|(u, p)| {
                let monos: Vec<Value> = p
                    .iter()
                    .map(|(e, c)| json!([e.numer(), e.denom(), c.numer().to_i64().expect("coefficient fits in i64"), c.denom().to_i64().expect("coefficient fits in i64")]))
                    .collect();
                json!([(*u * xden).to_integer(), monos])
            })
            .collect();
        let mut v = json!({"name": self.name, "xden": xden, "terms": terms});
        if let Some(a) = &self.alexander {
            v["alexander"] = json!(a);
        }
        v
    }
}

fn qpoly(terms: &[(i64, i64)]) -> QPoly {
    terms
        .iter()
        .map(|&(e, c)| (Exp::from_integer(e), BigRational::from_integer(c.into())))
        .collect()
}

/// Leading terms of the figure-eight knot series,
/// `F = (Xi(x) - Xi(1/x)) / 2` with
/// `Xi = x^(1/2) + 2 x^(3/2) + (q^-1 + 3 + q) x^(5/2) + (2q^-2 + 2q^-1 + 5 + 2q + 2q^2) x^(7/2)`.
pub fn figure_eight_fk() -> KnotSeries {
    let xi = [
        (1, qpoly(&[(0, 1)])),
        (3, qpoly(&[(0, 2)])),
        (5, qpoly(&[(-1, 1), (0, 3), (1, 1)])),
        (7, qpoly(&[(-2, 2), (-1, 2), (0, 5), (1, 2), (2, 2)])),
    ];
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let positive = xi
        .into_iter()
        .map(|(u2, p)| (Rational64::new(u2, 2), p.into_iter().map(|(e, c)| (e, c * &half)).collect()))
        .collect();
    KnotSeries::from_positive_part("4_1", positive, Some(vec![(-1, -1), (0, 3), (1, -1)])).expect("figure-eight data is antisymmetric")
}

/// `F = x^(1/2) - x^(-1/2)` with `Delta = 1`.
pub fn unknot() -> KnotSeries {
    KnotSeries::from_positive_part("unknot", vec![(Rational64::new(1, 2), qpoly(&[(0, 1)]))], Some(vec![(0, 1)]))
        .expect("unknot data is antisymmetric")
}

/// A surgery coefficient `p/r` in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SurgerySlope {
    pub p: i64,
    pub r: i64,
}

impl SurgerySlope {
    pub fn new(p: i64, r: i64) -> Result<Self> {
        if p == 0 || r == 0 {
            return Err(Error::Precondition(format!("surgery slope {p}/{r} needs nonzero p and r")));
        }
        if p.gcd(&r) != 1 {
            return Err(Error::Precondition(format!("surgery slope {p}/{r} is not in lowest terms")));
        }
        Ok(SurgerySlope { p, r })
    }

    pub fn parse(s: &str) -> Result<Self> {
        let (p, r) = match s.trim().split_once('/') {
            Some((p, r)) => (p.trim(), r.trim()),
            None => (s.trim(), "1"),
        };
        let num = |t: &str| t.parse::<i64>().map_err(|_| Error::Parse(format!("bad slope {s:?}")));
        Self::new(num(p)?, num(r)?)
    }
}

impl fmt::Display for SurgerySlope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.r)
    }
}

/// Image of `x^u q^v`: `q^(v - u^2 r/p)` when `r u - a` lies in `pZ`,
/// otherwise nothing.
pub fn laplace_transform(u: Exp, v: Exp, a: Exp, slope: SurgerySlope) -> Option<Exp> {
    let sel = (u * slope.r - a) / slope.p;
    sel.is_integer().then(|| v - u * u * slope.r / slope.p)
}

/// Raw surgery series `L[(x^(1/2r) - x^(-1/2r)) F_K]` with the order below
/// which the truncated knot data determines it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurgeryResult {
    pub series: QSeries,
    pub guaranteed_order: Exp,
}

impl SurgeryResult {
    /// Minimal exponent and the series divided by its leading monomial
    /// (leading coefficient made `+1`).
    pub fn normalized(&self) -> Option<(Exp, Coeff, QSeries)> {
        let e0 = self.series.min_exponent()?;
        let c0 = self.series.coeff(e0);
        let inv = c0.recip();
        Some((e0, c0, self.series.shift(-e0).scale(&inv)))
    }
}

pub fn surgery_zhat(k: &KnotSeries, slope: SurgerySlope, a: Exp, order: Exp) -> Result<SurgeryResult> {
    if Rational64::new(slope.r, slope.p).is_positive() {
        return Err(Error::SlopeNotAdmissible(format!(
            "r/p = {}/{} > 0 sends x^u to q^(-u^2 r/p), unbounded below",
            slope.r, slope.p
        )));
    }
    let half = Rational64::new(1, 2 * slope.r.abs());
    let coeff_r = Rational64::new(slope.r, slope.p);
    // The first unknown x-power in F, shifted by +-1/2r, lower-bounds every
    // contribution the data lacks.
    let mut guaranteed: Option<Exp> = None;
    let mut u = k.u_max + k.u_step;
    for _ in 0..64 {
        let w = k.extrapolated_width(u);
        for s in [u - half, u + half] {
            let e = -s * s * coeff_r - w;
            guaranteed = Some(guaranteed.map_or(e, |g: Exp| g.min(e)));
        }
        u += k.u_step;
    }
    let guaranteed = guaranteed.unwrap();
    let cut = order.min(guaranteed);
    let mut out = QSeries::zero(cut);
    for (u, p) in k.iter() {
        for (shift, sign) in [(half, 1i64), (-half, -1)] {
            for (v, c) in p {
                if let Some(e) = laplace_transform(*u + shift, *v, a, slope) {
                    if e < cut {
                        out.add_term(e, c * BigInt::from(sign));
                    }
                }
            }
        }
    }
    Ok(SurgeryResult { series: out, guaranteed_order: guaranteed })
}

/// Symmetric expansion of `1/Delta(x)`: the average of the expansions at
/// `x -> 0` and `x -> infinity`, coefficients for `|e| <= range`.
pub fn symmetric_expansion_inverse(delta: &[(i64, i64)], range: i64) -> Result<BTreeMap<i64, Coeff>> {
    let mut poly: BTreeMap<i64, BigInt> = BTreeMap::new();
    for &(p, c) in delta {
        *poly.entry(p).or_insert_with(BigInt::zero) += c;
    }
    poly.retain(|_, c| !c.is_zero());
    let (&lo, _) = poly.iter().next().ok_or(Error::MissingAlexander)?;
    let (&hi, _) = poly.iter().next_back().unwrap();
    // 1/Delta = x^-lo / (a_lo + a_(lo+1) x + ...) near 0, and
    // x^-hi / (a_hi + a_(hi-1) x^-1 + ...) near infinity.
    let series_inverse = |coef: &dyn Fn(i64) -> BigInt, n: usize| -> Vec<BigRational> {
        let a0 = BigRational::from_integer(coef(0));
        let mut b = vec![BigRational::zero(); n];
        for i in 0..n {
            let mut s = if i == 0 { BigRational::one() } else { BigRational::zero() };
            for j in 1..=i {
                let aj = coef(j as i64);
                if !aj.is_zero() {
                    s -= BigRational::from_integer(aj) * &b[i - j];
                }
            }
            b[i] = s / &a0;
        }
        b
    };
    let get = |p: i64| poly.get(&p).cloned().unwrap_or_else(BigInt::zero);
    let n = (2 * range + (hi - lo) + 2) as usize;
    let near0 = series_inverse(&|j| get(lo + j), n);
    let nearinf = series_inverse(&|j| get(hi - j), n);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut out = BTreeMap::new();
    for e in -range..=range {
        let i0 = e + lo;
        let i1 = -e - hi;
        let a = if i0 >= 0 { near0[i0 as usize].clone() } else { BigRational::zero() };
        let b = if i1 >= 0 { nearinf[i1 as usize].clone() } else { BigRational::zero() };
        out.insert(e, (a + b) * &half);
    }
    Ok(out)
}

/// One compared coefficient of `f_K(x, 1)` against `s.e. 1/Delta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryRow {
    pub power: i64,
    pub expected: Coeff,
    pub found: Coeff,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryReport {
    pub rows: Vec<BoundaryRow>,
}

impl BoundaryReport {
    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(|r| r.ok)
    }

    pub fn first_mismatch(&self) -> Option<i64> {
        self.rows.iter().find(|r| !r.ok).map(|r| r.power)
    }
}

/// Divide `F_K(x, 1)` by `x^(1/2) - x^(-1/2)` and compare with the symmetric
/// expansion of `1/Delta_K`. With `F_(e+1/2) = g_e - g_(e+1)` the quotient
/// `g` is recovered from `g_0`, which is taken from the expansion.
pub fn alexander_boundary_check(k: &KnotSeries) -> Result<BoundaryReport> {
    let delta = k.alexander.as_ref().ok_or(Error::MissingAlexander)?;
    let half = Rational64::new(1, 2);
    if !(k.u_max - half).is_integer() {
        return Err(Error::Precondition("boundary check needs half-integer x-exponents".into()));
    }
    let top = (k.u_max + half).to_integer();
    let se = symmetric_expansion_inverse(delta, top)?;
    let mut g = se[&0].clone();
    let mut rows = Vec::new();
    for e in 1..=top {
        g -= k.at_q_one(Rational64::from_integer(e - 1) + half);
        let expected = se[&e].clone();
        rows.push(BoundaryRow { power: e, ok: g == expected, expected, found: g.clone() });
    }
    Ok(BoundaryReport { rows })
}
