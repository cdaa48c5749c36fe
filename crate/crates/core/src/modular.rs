//! Radial limits at rational cusps, exact asymptotic coefficients of false
//! theta functions, and the `X` matrix relating `Zhat` to WRT invariants.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::highprec::{Complex, MonomialEvaluator, Real};
use crate::indefinite::mock_f0_reference;
use crate::linalg::SymMatrix;
use crate::plumbing::PlumbingGraph;
use crate::series::{binomial, QSeries};
use crate::zhat::{three_star_false_theta_combination, zhat_negative_definite, zhat_three_star};
use crate::Exp;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// A periodic coefficient function `C(k) = C(k + P)`, stored for
/// `k = 1..=P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicSign {
    period: u64,
    values: Vec<BigRational>,
}

impl PeriodicSign {
    /// `values[i]` is `C(i + 1)`.
    pub fn new(values: Vec<BigRational>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Precondition("periodic pattern needs a positive period".into()));
        }
        Ok(PeriodicSign { period: values.len() as u64, values })
    }

    pub fn from_i64(values: &[i64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| BigRational::from_integer(v.into())).collect())
    }

    /// Pattern of `sum_r s_r false_theta(m, r)` restricted to `k > 0`, of
    /// period `2m`: `C(k) = sum_r s_r ([k = r] - [k = -r])`.
    pub fn from_false_theta_combination(m: i64, combo: &[(i64, i64)]) -> Result<Self> {
        if m <= 0 {
            return Err(Error::Precondition(format!("false theta needs m > 0, got {m}")));
        }
        let p = 2 * m;
        let mut v = vec![0i64; p as usize];
        for &(r, s) in combo {
            let idx = |k: i64| ((k - 1).rem_euclid(p)) as usize;
            v[idx(r)] += s;
            v[idx(-r)] -= s;
        }
        Self::from_i64(&v)
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    /// `C(k)` for any integer `k`.
    pub fn value(&self, k: i64) -> &BigRational {
        &self.values[((k - 1).rem_euclid(self.period as i64)) as usize]
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn is_mean_zero(&self) -> bool {
        self.values.iter().fold(BigRational::zero(), |a, b| a + b).is_zero()
    }

    /// `sum_{0 < k} C(k) q^(k^2 / 4m)` up to `order`.
    pub fn theta_series(&self, m: i64, order: Exp) -> QSeries {
        let mut s = QSeries::zero(order);
        let mut k = 1i64;
        while Rational64::new(k * k, 4 * m) < order {
            let c = self.value(k);
            if !c.is_zero() {
                s.add_term(Rational64::new(k * k, 4 * m), c.clone());
            }
            k += 1;
        }
        s
    }
}

/// A rational multiple of `pi^power`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiMultiple {
    pub coeff: BigRational,
    pub power: u32,
}

impl PiMultiple {
    pub fn to_real(&self, prec: u32) -> Real {
        Real::pi(prec).pow(self.power as u64).mul_ratio(&self.coeff)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_real(128).to_f64()
    }
}

impl fmt::Display for PiMultiple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.power {
            _ if self.coeff.is_zero() => write!(f, "0"),
            0 => write!(f, "{}", self.coeff),
            1 => write!(f, "({})*pi", self.coeff),
            p => write!(f, "({})*pi^{p}", self.coeff),
        }
    }
}

/// Bernoulli numbers `B_0..=B_n` with `B_1 = -1/2`.
pub fn bernoulli_numbers(n: usize) -> Vec<BigRational> {
    let mut b = vec![BigRational::zero(); n + 1];
    b[0] = BigRational::one();
    for m in 1..=n {
        let mut acc = BigRational::zero();
        for (k, bk) in b.iter().enumerate().take(m) {
            acc += BigRational::from_integer(binomial(m as i64 + 1, k as i64)) * bk;
        }
        b[m] = -acc / BigInt::from(m as i64 + 1);
    }
    b
}

/// `B_n(x)` evaluated exactly.
pub fn bernoulli_polynomial(n: usize, x: &BigRational, numbers: &[BigRational]) -> BigRational {
    let mut acc = BigRational::zero();
    let mut xp = BigRational::one();
    for k in (0..=n).rev() {
        acc += BigRational::from_integer(binomial(n as i64, k as i64)) * &numbers[k] * &xp;
        xp *= x;
    }
    acc
}

/// `L(-r, C) = -(P^r / (r + 1)) sum_{k=1}^{P} C(k) B_{r+1}(k / P)`.
pub fn l_value_negative(c: &PeriodicSign, r: usize, numbers: &[BigRational]) -> BigRational {
    let p = c.period() as i64;
    let mut acc = BigRational::zero();
    for k in 1..=p {
        let v = c.value(k);
        if v.is_zero() {
            continue;
        }
        acc += v * bernoulli_polynomial(r + 1, &rat(k, p), numbers);
    }
    -acc * BigRational::from_integer(BigInt::from(p).pow(r as u32)) / BigInt::from(r as i64 + 1)
}

/// Coefficients of `sum_{k>0} C(k) exp(-2 pi t k^2 / 4m) ~ sum_n alpha(n) t^n`
/// for `n = 0..=nmax`.
pub fn asymptotic_coeffs(c: &PeriodicSign, m: i64, nmax: usize) -> Result<Vec<PiMultiple>> {
    if !c.is_mean_zero() {
        return Err(Error::DivergentConstantTerm);
    }
    if m <= 0 {
        return Err(Error::Precondition(format!("asymptotics need m > 0, got {m}")));
    }
    let numbers = bernoulli_numbers(2 * nmax + 1);
    let step = rat(-1, 2 * m);
    let mut weight = BigRational::one();
    let mut out = Vec::with_capacity(nmax + 1);
    for n in 0..=nmax {
        if n > 0 {
            weight = weight * &step / BigInt::from(n as i64);
        }
        out.push(PiMultiple {
            coeff: l_value_negative(c, 2 * n, &numbers) * &weight,
            power: n as u32,
        });
    }
    Ok(out)
}

/// Values of a series along `tau = x + i t` and their extrapolation to
/// `t = 0`.
#[derive(Clone, Debug)]
pub struct RadialReport {
    pub x: BigRational,
    pub tgrid: Vec<BigRational>,
    pub values: Vec<Complex>,
    /// Extrapolant through the first `i + 1` grid points, row by row.
    pub running: Vec<Complex>,
    pub extrapolant: Complex,
    /// Derivative at `t = 0` of the full interpolating polynomial.
    pub slope: Complex,
    pub error: Real,
    pub precision: u32,
}

const DIGITS: usize = 24;

fn complex_json(z: &Complex) -> Value {
    json!({"re": z.re.to_decimal_string(DIGITS), "im": z.im.to_decimal_string(DIGITS)})
}

fn complex_text(z: &Complex) -> String {
    let re = z.re.to_decimal_string(DIGITS);
    let im = z.im.to_decimal_string(DIGITS);
    if im.starts_with('-') {
        format!("{re}{im}i")
    } else {
        format!("{re}+{im}i")
    }
}

impl RadialReport {
    pub fn error_f64(&self) -> f64 {
        self.error.to_f64()
    }

    pub fn to_json(&self) -> Value {
        let points: Vec<Value> = self
            .tgrid
            .iter()
            .zip(&self.values)
            .zip(&self.running)
            .map(|((t, v), r)| json!({"t": t.to_string(), "value": complex_json(v), "extrapolant": complex_json(r)}))
            .collect();
        json!({
            "x": self.x.to_string(),
            "precision": self.precision,
            "points": points,
            "extrapolant": complex_json(&self.extrapolant),
            "slope": complex_json(&self.slope),
            "error_estimate": self.error.to_decimal_string(DIGITS),
        })
    }

    /// Columns `t, Re, Im, extrapolant, error_estimate`; row `i` carries the
    /// extrapolant through the first `i + 1` points and its spread from the
    /// previous row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,Re,Im,extrapolant,error_estimate\n");
        for (i, (t, v)) in self.tgrid.iter().zip(&self.values).enumerate() {
            let err = if i == 0 {
                String::new()
            } else {
                self.running[i].sub(&self.running[i - 1]).abs().to_decimal_string(DIGITS)
            };
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                t,
                v.re.to_decimal_string(DIGITS),
                v.im.to_decimal_string(DIGITS),
                complex_text(&self.running[i]),
                err
            ));
        }
        out
    }

    pub fn to_plain(&self) -> String {
        let mut out = format!("x = {}\n", self.x);
        for (t, v) in self.tgrid.iter().zip(&self.values) {
            out.push_str(&format!("t = {t}: {}\n", complex_text(v)));
        }
        out.push_str(&format!("extrapolant: {}\n", complex_text(&self.extrapolant)));
        out.push_str(&format!("slope: {}\n", complex_text(&self.slope)));
        out.push_str(&format!("error estimate: {}\n", self.error.to_decimal_string(DIGITS)));
        out
    }
}

/// Smallest series order for which the omitted tail is below `2^-precision`
/// at `t = tmin`, given coefficients bounded by `cmax`.
pub fn minimum_order(tmin: &BigRational, precision: u32, cmax: f64) -> Exp {
    let t = tmin.to_f64().unwrap_or(f64::MIN_POSITIVE);
    let need = (precision as f64 * std::f64::consts::LN_2 + (1.0 + cmax).ln() + 8.0) / (2.0 * std::f64::consts::PI * t);
    Rational64::from_integer(need.ceil() as i64)
}

fn check_tail(s: &QSeries, tgrid: &[BigRational], precision: u32) -> Result<()> {
    let tmin = tgrid.iter().min().expect("non-empty grid");
    let cmax = s
        .iter()
        .map(|(_, c)| c.abs().to_f64().unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max);
    let need = minimum_order(tmin, precision, cmax);
    if s.order() < need {
        return Err(Error::TailBound(format!(
            "need order >= {} for t_min = {} at {} bits, have {}",
            need,
            tmin,
            precision,
            s.order()
        )));
    }
    Ok(())
}

/// `s(x + i t)` at working precision `prec + 32`.
pub fn evaluate(s: &QSeries, x: &BigRational, t: &BigRational, prec: u32) -> Complex {
    let mut ev = MonomialEvaluator::new(x, t, s.common_denominator(), prec);
    let work = ev.working_precision();
    let mut acc = Complex::zero(work);
    for (e, c) in s.iter() {
        let term = ev.phase(*e).scale(&ev.decay(*e)).scale_ratio(c);
        acc = acc.add(&term);
    }
    acc
}

/// Coefficients, lowest degree first, of the Lagrange basis polynomials on
/// `ts`.
fn lagrange_basis(ts: &[BigRational]) -> Vec<Vec<BigRational>> {
    let n = ts.len();
    (0..n)
        .map(|i| {
            let mut poly = vec![BigRational::one()];
            for j in (0..n).filter(|&j| j != i) {
                let d = &ts[i] - &ts[j];
                let mut next = vec![BigRational::zero(); poly.len() + 1];
                for (k, c) in poly.iter().enumerate() {
                    next[k + 1] += c / &d;
                    next[k] -= c * &ts[j] / &d;
                }
                poly = next;
            }
            poly
        })
        .collect()
}

/// Value and derivative at `t = 0` of the interpolant through `(ts, vs)`.
fn extrapolate(ts: &[BigRational], vs: &[Complex], prec: u32) -> (Complex, Complex) {
    let basis = lagrange_basis(ts);
    let mut v0 = Complex::zero(prec);
    let mut v1 = Complex::zero(prec);
    for (b, v) in basis.iter().zip(vs) {
        v0 = v0.add(&v.scale_ratio(&b[0]));
        if b.len() > 1 {
            v1 = v1.add(&v.scale_ratio(&b[1]));
        }
    }
    (v0, v1)
}

/// Evaluate `s` at `x + i t` for each `t` and extrapolate polynomially to
/// `t = 0`. Needs at least two distinct grid points.
pub fn radial_extrapolate(s: &QSeries, x: &BigRational, tgrid: &[BigRational], precision: u32) -> Result<RadialReport> {
    radial_extrapolate_with(s, x, tgrid, precision, 1)
}

pub fn radial_extrapolate_with(
    s: &QSeries,
    x: &BigRational,
    tgrid: &[BigRational],
    precision: u32,
    jobs: usize,
) -> Result<RadialReport> {
    if tgrid.len() < 2 {
        return Err(Error::Precondition("radial extrapolation needs at least two grid points".into()));
    }
    if tgrid.iter().any(|t| !t.is_positive()) {
        return Err(Error::Precondition("grid points must be positive".into()));
    }
    if tgrid.iter().collect::<BTreeSet<_>>().len() != tgrid.len() {
        return Err(Error::Precondition("grid points must be distinct".into()));
    }
    check_tail(s, tgrid, precision)?;
    let values: Vec<Complex> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool");
        pool.install(|| tgrid.par_iter().map(|t| evaluate(s, x, t, precision)).collect())
    } else {
        tgrid.iter().map(|t| evaluate(s, x, t, precision)).collect()
    };
    let work = values[0].re.precision();
    let running: Vec<Complex> = (0..tgrid.len())
        .map(|i| extrapolate(&tgrid[..=i], &values[..=i], work).0)
        .collect();
    let (extrapolant, slope) = extrapolate(tgrid, &values, work);
    // Same order, but without the coarsest point.
    let coarsest = (0..tgrid.len()).max_by(|&i, &j| tgrid[i].cmp(&tgrid[j])).unwrap();
    let (ts, vs): (Vec<_>, Vec<_>) = tgrid
        .iter()
        .zip(&values)
        .enumerate()
        .filter(|&(i, _)| i != coarsest)
        .map(|(_, (t, v))| (t.clone(), v.clone()))
        .unzip();
    let (lower, _) = extrapolate(&ts, &vs, work);
    let error = extrapolant.sub(&lower).abs();
    Ok(RadialReport {
        x: x.clone(),
        tgrid: tgrid.to_vec(),
        values,
        running,
        extrapolant,
        slope,
        error,
        precision,
    })
}

/// `X_ab` as `numerator / (2 sqrt|det M|)` with an exact cyclotomic
/// numerator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XEntry {
    pub numerator: Cyclotomic,
    pub det_abs: BigInt,
    /// Distinct elements of the `Z_2 x Z_2` orbit of `(a, b)`.
    pub orbit: Vec<(Vec<BigInt>, Vec<BigInt>)>,
}

impl XEntry {
    pub fn value(&self, prec: u32) -> Complex {
        let n = self.numerator.order();
        let mut acc = Complex::zero(prec);
        for (k, c) in self.numerator.coefficients().iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&Complex::unit(&rat(k as i64, n as i64), prec).scale_ratio(c));
            }
        }
        let den = Real::from_ratio(&BigRational::from_integer(self.det_abs.clone()), prec)
            .sqrt()
            .mul_i64(2);
        acc.div_real(&den)
    }

    /// The exact value when `|det M|` is a perfect square and the numerator
    /// is rational.
    pub fn to_rational(&self) -> Option<BigRational> {
        let r = self.det_abs.sqrt();
        if &r * &r != self.det_abs {
            return None;
        }
        self.numerator
            .to_rational()
            .map(|c| c / (r * BigInt::from(2)))
    }
}

/// `v - k M floor((k M)^-1 v)`.
fn reduce_mod(m: &SymMatrix, m_inv: &SymMatrix, k: i64, v: &[BigInt]) -> Vec<BigInt> {
    let vr: Vec<BigRational> = v.iter().map(|x| BigRational::from_integer(x.clone())).collect();
    let fl: Vec<BigRational> = m_inv
        .mul_vec(&vr)
        .iter()
        .map(|t| BigRational::from_integer((t / BigInt::from(k)).floor().to_integer()))
        .collect();
    let shift = m.mul_vec(&fl);
    v.iter()
        .zip(&shift)
        .map(|(x, s)| x - (s * BigInt::from(k)).to_integer())
        .collect()
}

/// `sum over the orbit {(+-a, +-b)} of exp(2 pi i (a, M^-1 b))`, divided by
/// `2 sqrt|det M|`. `a` is read modulo `2M`, `b` modulo `M`.
pub fn x_matrix(m: &SymMatrix, a: &[BigInt], b: &[BigInt]) -> Result<XEntry> {
    let n = m.size();
    if a.len() != n || b.len() != n {
        return Err(Error::Precondition(format!(
            "labels must have {n} entries, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let det = m.determinant();
    if det.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let inv = m.inverse()?;
    let neg = |v: &[BigInt]| v.iter().map(|x| -x).collect::<Vec<_>>();
    let mut orbit = BTreeSet::new();
    for aa in [a.to_vec(), neg(a)] {
        for bb in [b.to_vec(), neg(b)] {
            orbit.insert((reduce_mod(m, &inv, 2, &aa), reduce_mod(m, &inv, 1, &bb)));
        }
    }
    let pairings: Vec<BigRational> = orbit
        .iter()
        .map(|(aa, bb)| {
            let ar: Vec<BigRational> = aa.iter().map(|x| BigRational::from_integer(x.clone())).collect();
            let br: Vec<BigRational> = bb.iter().map(|x| BigRational::from_integer(x.clone())).collect();
            inv.bilinear(&ar, &br)
        })
        .collect();
    let order = pairings
        .iter()
        .fold(BigInt::one(), |l, p| l.lcm(p.denom()))
        .to_u64()
        .ok_or_else(|| Error::Precondition("root of unity order too large".into()))?;
    let mut powers: BTreeMap<u64, BigRational> = BTreeMap::new();
    for p in &pairings {
        let k = (p * BigInt::from(order)).to_integer().mod_floor(&BigInt::from(order));
        *powers.entry(k.to_u64().unwrap()).or_insert_with(BigRational::zero) += BigRational::one();
    }
    Ok(XEntry {
        numerator: Cyclotomic::from_powers(order, &powers),
        det_abs: det.abs().to_integer(),
        orbit: orbit.into_iter().collect(),
    })
}

/// `Zhat_0` through `order`: closed form for three-star graphs, lattice sum
/// otherwise.
pub fn zhat_series(g: &PlumbingGraph, order: Exp, jobs: usize) -> Result<QSeries> {
    match zhat_three_star(g, order) {
        Ok(s) => Ok(s),
        Err(_) => zhat_negative_definite(g, &g.canonical_label()?, order, jobs),
    }
}

/// Radial limit towards `1/k` with both normalizations of the WRT relation.
#[derive(Clone, Debug)]
pub struct WrtReport {
    pub k: u64,
    pub radial: RadialReport,
    /// `lim / (i sqrt(2k))`.
    pub display: Complex,
    /// `X_00 lim / (i sqrt(2k))`, only for unimodular plumbings where the
    /// sum over flat connections has a single term.
    pub with_x00: Option<Complex>,
    pub x00: Option<BigRational>,
}

impl WrtReport {
    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k,
            "radial": self.radial.to_json(),
            "z_display": complex_json(&self.display),
            "z_with_x00": self.with_x00.as_ref().map(complex_json),
            "x00": self.x00.as_ref().map(|x| x.to_string()),
        })
    }
}

/// Multiply by `1 / (i sqrt(2k))`.
pub fn wrt_normalize(z: &Complex, k: u64) -> Complex {
    let prec = z.re.precision();
    let r = Real::from_i64(2 * k as i64, prec).sqrt();
    let w = z.div_real(&r);
    Complex { re: w.im.clone(), im: w.re.neg() }
}

/// `lim_{t -> 0} Zhat_0(1/k + i t) / (i sqrt(2k))`.
pub fn wrt_radial(g: &PlumbingGraph, k: u64, tgrid: &[BigRational], precision: u32, jobs: usize) -> Result<WrtReport> {
    if k == 0 {
        return Err(Error::Precondition("k must be positive".into()));
    }
    let tmin = tgrid
        .iter()
        .min()
        .ok_or_else(|| Error::Precondition("radial extrapolation needs at least two grid points".into()))?;
    let order = minimum_order(tmin, precision, 4.0 * g.len() as f64) + 1;
    let s = zhat_series(g, order, jobs)?;
    let x = rat(1, k as i64);
    let radial = radial_extrapolate_with(&s, &x, tgrid, precision, jobs)?;
    let display = wrt_normalize(&radial.extrapolant, k);
    let m = g.adjacency_matrix();
    let unimodular = m.determinant().abs().is_one();
    let (with_x00, x00) = if unimodular {
        let zero = vec![BigInt::zero(); g.len()];
        let x = x_matrix(&m, &zero, &zero)?
            .to_rational()
            .expect("unimodular X_00 is rational");
        (Some(display.scale_ratio(&x)), Some(x))
    } else {
        (None, None)
    };
    Ok(WrtReport { k, radial, display, with_x00, x00 })
}

/// One row of the false/mock comparison at the cusp `0`.
#[derive(Clone, Debug)]
pub struct FalseMockRow {
    pub t: BigRational,
    pub false_value: Real,
    pub asymptotic: Real,
    pub mock_value: Real,
}

#[derive(Clone, Debug)]
pub struct FalseMockReport {
    pub m: i64,
    pub alpha: Vec<PiMultiple>,
    pub rows: Vec<FalseMockRow>,
    pub radial: Option<RadialReport>,
    pub tolerance: f64,
}

impl FalseMockReport {
    /// Whether the extrapolated false theta matches `alpha(0)` and its
    /// slope matches `alpha(1)` within the tolerance.
    pub fn false_side_matches(&self) -> Option<(bool, bool)> {
        let r = self.radial.as_ref()?;
        let a0 = self.alpha[0].to_f64();
        let a1 = self.alpha[1].to_f64();
        Some((
            (r.extrapolant.re.to_f64() - a0).abs() < self.tolerance,
            (r.slope.re.to_f64() - a1).abs() < self.tolerance,
        ))
    }

    /// Whether the truncated mock series grows as `t` decreases.
    pub fn mock_grows(&self) -> bool {
        let mut rows: Vec<&FalseMockRow> = self.rows.iter().collect();
        rows.sort_by(|a, b| b.t.cmp(&a.t));
        rows.windows(2)
            .all(|w| w[1].mock_value.cmp_value(&w[0].mock_value) == std::cmp::Ordering::Greater)
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                json!({
                    "t": r.t.to_string(),
                    "false": r.false_value.to_decimal_string(DIGITS),
                    "asymptotic": r.asymptotic.to_decimal_string(DIGITS),
                    "mock_truncated": r.mock_value.to_decimal_string(DIGITS),
                })
            })
            .collect();
        json!({
            "m": self.m,
            "alpha": self.alpha.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
            "rows": rows,
            "radial": self.radial.as_ref().map(|r| r.to_json()),
            "false_side_matches": self.false_side_matches(),
            "mock_grows": self.mock_grows(),
        })
    }
}

/// Tabulate the false theta of the `Sigma(2,3,7)` pair against its
/// asymptotic series at `t -> 0`, and the truncated order-7 mock theta
/// `F_0(e^(-2 pi t))` alongside.
pub fn false_mock_zero_report(order: Exp, tgrid: &[BigRational], precision: u32) -> Result<FalseMockReport> {
    let m = 42;
    let pattern = PeriodicSign::from_false_theta_combination(m, &[(1, 1), (13, -1), (29, -1), (41, 1)])?;
    let alpha = asymptotic_coeffs(&pattern, m, 3)?;
    if tgrid.is_empty() {
        return Ok(FalseMockReport { m, alpha, rows: Vec::new(), radial: None, tolerance: 1e-6 });
    }
    let theta = pattern.theta_series(m, order);
    let mock = mock_f0_reference(order);
    let zero = BigRational::zero();
    let mut rows = Vec::new();
    for t in tgrid {
        let f = evaluate(&theta, &zero, t, precision);
        let work = f.re.precision();
        let tr = Real::from_ratio(t, work);
        let mut pred = Real::zero(work);
        let mut tp = Real::one(work);
        for a in &alpha {
            pred = pred.add(&a.to_real(work).mul(&tp));
            tp = tp.mul(&tr);
        }
        rows.push(FalseMockRow {
            t: t.clone(),
            false_value: f.re,
            asymptotic: pred,
            mock_value: evaluate(&mock, &zero, t, precision).re,
        });
    }
    let radial = if tgrid.len() >= 2 {
        Some(radial_extrapolate(&theta, &zero, tgrid, precision)?)
    } else {
        None
    };
    Ok(FalseMockReport { m, alpha, rows, radial, tolerance: 1e-6 })
}

/// The sign pattern of `Zhat_0` for a three-star graph with its `m`.
pub fn three_star_pattern(g: &PlumbingGraph) -> Result<(i64, PeriodicSign)> {
    let (m, combo, poly) = three_star_false_theta_combination(g, Rational64::from_integer(1))?;
    if !poly.is_zero() {
        return Err(Error::Precondition("closed form carries a correction polynomial".into()));
    }
    Ok((m, PeriodicSign::from_false_theta_combination(m, &combo)?))
}
