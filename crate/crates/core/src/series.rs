//! Exact sparse q-series with rational exponents, Laurent objects in an
//! auxiliary variable `w`, and the principal-value expansion of vertex
//! factors `(w - 1/w)^(2 - deg)`.
//!
//! A [`QSeries`] is `sum c_e q^e + O(q^order)`: exponents and coefficients are
//! exact rationals and every stored exponent lies strictly below `order`.
//! Terms at or above `order` are unknown, not zero. Zero coefficients are
//! never stored, so structural equality of two series is equality of the
//! underlying truncated objects.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Exponent of `q` (or `w`): exact rational with machine-size parts.
pub type Exp = Rational64;
/// Exact coefficient.
pub type Coeff = BigRational;

/// `binom(n, k)` as a big integer; zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// A truncated q-series with rational exponents and rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSeries {
    terms: BTreeMap<Exp, Coeff>,
    order: Exp,
}

impl QSeries {
    /// The zero series `O(q^order)`.
    pub fn zero(order: Exp) -> Self {
        QSeries {
            terms: BTreeMap::new(),
            order,
        }
    }

    /// `1 + O(q^order)`; the constant is dropped when `order <= 0`.
    pub fn one(order: Exp) -> Self {
        Self::monomial(Exp::zero(), Coeff::one(), order)
    }

    /// `c q^e + O(q^order)`.
    pub fn monomial(e: Exp, c: Coeff, order: Exp) -> Self {
        let mut s = Self::zero(order);
        s.add_term(e, c);
        s
    }

    /// Build from `(exponent, coefficient)` pairs; repeated exponents are summed
    /// and terms at or above `order` are dropped.
    pub fn from_terms<I>(terms: I, order: Exp) -> Self
    where
        I: IntoIterator<Item = (Exp, Coeff)>,
    {
        let mut s = Self::zero(order);
        for (e, c) in terms {
            s.add_term(e, c);
        }
        s
    }

    /// Build from integer exponents and coefficients, convenient in tests.
    pub fn from_int_terms(terms: &[(i64, i64)], order: i64) -> Self {
        Self::from_terms(
            terms
                .iter()
                .map(|&(e, c)| (Exp::from_integer(e), Coeff::from_integer(c.into()))),
            Exp::from_integer(order),
        )
    }

    /// Accumulate `c q^e`, ignoring it when `e >= order`.
    pub fn add_term(&mut self, e: Exp, c: Coeff) {
        if e >= self.order || c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn order(&self) -> Exp {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `q^e`; zero for absent terms below the order.
    pub fn coeff(&self, e: Exp) -> Coeff {
        self.terms.get(&e).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Exp, &Coeff)> {
        self.terms.iter()
    }

    pub fn min_exponent(&self) -> Option<Exp> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<Exp> {
        self.terms.keys().next_back().copied()
    }

    /// Least common denominator of all stored exponents (1 when empty).
    pub fn common_denominator(&self) -> i64 {
        self.terms
            .keys()
            .fold(1i64, |acc, e| acc.lcm(e.denom()))
    }

    /// Lowest exponent that may carry information: the minimal stored
    /// exponent, or the order for a zero series.
    fn low(&self) -> Exp {
        self.min_exponent().unwrap_or(self.order)
    }

    /// Lower the truncation order; never raises it.
    pub fn truncate(&self, order: Exp) -> Self {
        let order = order.min(self.order);
        QSeries {
            terms: self
                .terms
                .range(..order)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
            order,
        }
    }

    pub fn neg(&self) -> Self {
        QSeries {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
            order: self.order,
        }
    }

    pub fn scale(&self, k: &Coeff) -> Self {
        if k.is_zero() {
            return Self::zero(self.order);
        }
        QSeries {
            terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect(),
            order: self.order,
        }
    }

    /// Multiply by `q^shift`; the order moves with the terms.
    pub fn shift(&self, shift: Exp) -> Self {
        QSeries {
            terms: self.terms.iter().map(|(e, c)| (*e + shift, c.clone())).collect(),
            order: self.order + shift,
        }
    }

    /// Substitute `q -> q^k` for a positive rational `k`.
    pub fn rescale(&self, k: Exp) -> Self {
        assert!(k > Exp::zero(), "rescale factor must be positive");
        QSeries {
            terms: self.terms.iter().map(|(e, c)| (*e * k, c.clone())).collect(),
            order: self.order * k,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut out = self.truncate(order);
        for (e, c) in other.terms.range(..order) {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Exact product, truncated at
    /// `min(a.order + low(b), b.order + low(a))`.
    pub fn mul(&self, other: &Self) -> Self {
        let order = (self.order + other.low()).min(other.order + self.low());
        let mut acc: BTreeMap<Exp, Coeff> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = *ea + *eb;
                if e >= order {
                    break;
                }
                *acc.entry(e).or_insert_with(Coeff::zero) += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        QSeries { terms: acc, order }
    }

    /// Multiplicative inverse. The minimal term `c0 q^e0` must exist; the
    /// result has minimal exponent `-e0` and order `order - 2 e0`, so the
    /// relative precision is preserved.
    pub fn invert(&self) -> Result<Self> {
        let (&e0, c0) = self
            .terms
            .iter()
            .next()
            .ok_or_else(|| Error::NotInvertible("zero series".into()))?;
        let c0_inv = c0.recip();
        let rel_order = self.order - e0;
        let rest: Vec<(Exp, Coeff)> = self
            .terms
            .iter()
            .skip(1)
            .map(|(e, c)| (*e - e0, c * &c0_inv))
            .collect();
        let den = rest.iter().fold(1i64, |acc, (e, _)| acc.lcm(e.denom()));
        // Work on the grid q^(i/den), i < rel_order * den.
        let len = (rel_order * den).ceil().to_integer().max(0) as usize;
        let steps: Vec<(usize, &Coeff)> = rest
            .iter()
            .map(|(e, c)| ((*e * den).to_integer() as usize, c))
            .collect();
        let mut b: Vec<Coeff> = vec![Coeff::zero(); len];
        if len > 0 {
            b[0] = Coeff::one();
        }
        for i in 1..len {
            let mut acc = Coeff::zero();
            for &(f, rf) in &steps {
                if f > i {
                    break;
                }
                let prev = &b[i - f];
                if !prev.is_zero() {
                    acc -= rf * prev;
                }
            }
            b[i] = acc;
        }
        let order = rel_order - e0;
        let terms = b.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| {
            (Exp::new(i as i64, den) - e0, c * &c0_inv)
        });
        Ok(Self::from_terms(terms, order))
    }

    /// `true` when every exponent differs from the minimal one by an integer.
    pub fn single_coset_mod_one(&self) -> bool {
        match self.min_exponent() {
            None => true,
            Some(e0) => self.terms.keys().all(|e| (*e - e0).is_integer()),
        }
    }

    /// Serialize to `{"den": D, "terms": [[e*D, num, den], ...], "order": [num, den]}`.
    pub fn to_json(&self) -> Value {
        let den = self.common_denominator();
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(e, c)| {
                json!([
                    (*e * den).to_integer(),
                    bigint_json(c.numer()),
                    bigint_json(c.denom())
                ])
            })
            .collect();
        json!({
            "den": den,
            "terms": terms,
            "order": [*self.order.numer(), *self.order.denom()],
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("series json: {what}"));
        let den = v
            .get("den")
            .and_then(Value::as_i64)
            .filter(|d| *d > 0)
            .ok_or_else(|| bad("missing or invalid \"den\""))?;
        let order = v
            .get("order")
            .and_then(Value::as_array)
            .filter(|a| a.len() == 2)
            .ok_or_else(|| bad("missing \"order\""))?;
        let on = order[0].as_i64().ok_or_else(|| bad("order numerator"))?;
        let od = order[1].as_i64().filter(|d| *d != 0).ok_or_else(|| bad("order denominator"))?;
        let mut s = Self::zero(Exp::new(on, od));
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing \"terms\""))?;
        for t in terms {
            let t = t.as_array().filter(|a| a.len() == 3).ok_or_else(|| bad("term shape"))?;
            let e = t[0].as_i64().ok_or_else(|| bad("term exponent"))?;
            let n = bigint_from_json(&t[1]).ok_or_else(|| bad("coefficient numerator"))?;
            let d = bigint_from_json(&t[2]).filter(|d| !d.is_zero()).ok_or_else(|| bad("coefficient denominator"))?;
            s.add_term(Exp::new(e, den), BigRational::new(n, d));
        }
        Ok(s)
    }

    /// One `exponent,coefficient` row per term, exponents as `num/den`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("exponent,coefficient\n");
        for (e, c) in &self.terms {
            out.push_str(&format!("{},{}\n", fmt_rational64(*e), c));
        }
        out
    }
}

fn bigint_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

fn bigint_from_json(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from),
        Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

pub(crate) fn fmt_rational64(e: Exp) -> String {
    if e.is_integer() {
        e.numer().to_string()
    } else {
        format!("{}/{}", e.numer(), e.denom())
    }
}

fn fmt_power(e: Exp) -> String {
    if e.is_zero() {
        String::new()
    } else if e.is_one() {
        "q".into()
    } else if e.is_integer() && e > Exp::zero() {
        format!("q^{}", e.numer())
    } else {
        format!("q^({})", fmt_rational64(e))
    }
}

fn fmt_terms<'a>(f: &mut fmt::Formatter<'_>, terms: impl Iterator<Item = (Exp, &'a Coeff)>) -> fmt::Result {
    for (i, (e, c)) in terms.enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        match (i, neg) {
            (0, true) => write!(f, "-")?,
            (0, false) => {}
            (_, true) => write!(f, " - ")?,
            (_, false) => write!(f, " + ")?,
        }
        let power = fmt_power(e);
        if power.is_empty() {
            write!(f, "{mag}")?;
        } else if mag.is_one() {
            write!(f, "{power}")?;
        } else {
            write!(f, "{mag}*{power}")?;
        }
    }
    Ok(())
}

/// Plain rendering: `q^(e0)*(1 - q - q^5 + O(q^(N - e0)))` when all exponents lie
/// in one coset of the integers, else the terms in ascending order.
impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let big_o = |e: Exp| {
            let p = fmt_power(e);
            format!("O({})", if p.is_empty() { "1".to_string() } else { p })
        };
        let tail = big_o(self.order);
        match self.min_exponent() {
            None => write!(f, "0 + {tail}"),
            Some(e0) if !e0.is_zero() && self.single_coset_mod_one() => {
                write!(f, "{}*(", fmt_power(e0))?;
                fmt_terms(f, self.terms.iter().map(|(e, c)| (*e - e0, c)))?;
                write!(f, " + {})", big_o(self.order - e0))
            }
            Some(_) => {
                fmt_terms(f, self.terms.iter().map(|(e, c)| (*e, c)))?;
                write!(f, " + {tail}")
            }
        }
    }
}

/// The Dedekind eta series `q^(1/24) sum_n (-1)^n q^((3n^2 - n)/2)`,
/// truncated below `order`.
pub fn eta_series(order: Exp) -> QSeries {
    let shift = Exp::new(1, 24);
    let mut s = QSeries::zero(order);
    for sign in [1i64, -1] {
        let mut n: i64 = if sign == 1 { 0 } else { -1 };
        loop {
            let e = Exp::from_integer((3 * n * n - n) / 2) + shift;
            if e >= order {
                break;
            }
            let c = if n.rem_euclid(2) == 0 { 1 } else { -1 };
            s.add_term(e, Coeff::from_integer(c.into()));
            n += sign;
        }
    }
    s
}

/// Principal-value expansion of `(w - 1/w)^(2 - degree)` with exponents
/// clipped to `|e| <= window`.
///
/// For `degree = 2 + k`, `k >= 1`, the coefficient is the average of the
/// expansions for `|w| > 1` and `|w| < 1`:
/// `1/2 binom(k-1+j, j)` at `w^(-k-2j)` and `1/2 (-1)^k binom(k-1+j, j)` at
/// `w^(k+2j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PVFactor {
    degree: u32,
    window: i64,
}

impl PVFactor {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn window(&self) -> i64 {
        self.window
    }

    pub fn coefficient(&self, e: i64) -> Coeff {
        if e.abs() > self.window {
            return Coeff::zero();
        }
        let deg = self.degree as i64;
        if deg <= 2 {
            let s = 2 - deg;
            if (s - e).rem_euclid(2) != 0 || e.abs() > s {
                return Coeff::zero();
            }
            let i = (s - e) / 2;
            let b = binomial(s, i);
            let b = if i % 2 == 0 { b } else { -b };
            return BigRational::from_integer(b);
        }
        let k = deg - 2;
        if (e - k).rem_euclid(2) != 0 {
            return Coeff::zero();
        }
        let half = Coeff::new(BigInt::one(), BigInt::from(2));
        if e <= -k {
            let j = (-e - k) / 2;
            half * BigRational::from_integer(binomial(k - 1 + j, j))
        } else if e >= k {
            let j = (e - k) / 2;
            let b = BigRational::from_integer(binomial(k - 1 + j, j));
            if k % 2 == 0 { half * b } else { -half * b }
        } else {
            Coeff::zero()
        }
    }

    /// Nonzero `(exponent, coefficient)` pairs within the window.
    pub fn terms(&self) -> Vec<(i64, Coeff)> {
        (-self.window..=self.window)
            .map(|e| (e, self.coefficient(e)))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }
}

pub fn pv_vertex_factor(degree: u32, window: i64) -> PVFactor {
    PVFactor {
        degree,
        window: window.max(0),
    }
}

/// Finite Laurent object in `w` with [`QSeries`] coefficients.
///
/// Every coefficient shares the q-order `order`; w-exponents are confined to
/// `|e| <= window` and terms outside the window are dropped on insertion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WLaurentQSeries {
    terms: BTreeMap<Exp, QSeries>,
    window: Exp,
    order: Exp,
}

impl WLaurentQSeries {
    pub fn new(window: Exp, order: Exp) -> Self {
        WLaurentQSeries {
            terms: BTreeMap::new(),
            window,
            order,
        }
    }

    pub fn window(&self) -> Exp {
        self.window
    }

    pub fn order(&self) -> Exp {
        self.order
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Exp, &QSeries)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, wexp: Exp) -> Option<&QSeries> {
        self.terms.get(&wexp)
    }

    /// Accumulate `c q^qexp w^wexp`.
    pub fn add_monomial(&mut self, wexp: Exp, qexp: Exp, c: Coeff) {
        if wexp.abs() > self.window || qexp >= self.order || c.is_zero() {
            return;
        }
        let order = self.order;
        let entry = self.terms.entry(wexp).or_insert_with(|| QSeries::zero(order));
        entry.add_term(qexp, c);
        if entry.is_zero() {
            self.terms.remove(&wexp);
        }
    }

    /// Accumulate `s w^wexp`.
    pub fn add_series(&mut self, wexp: Exp, s: &QSeries) {
        if wexp.abs() > self.window {
            return;
        }
        let order = self.order;
        let cur = self.terms.remove(&wexp).unwrap_or_else(|| QSeries::zero(order));
        let sum = cur.add(&s.truncate(order));
        if !sum.is_zero() {
            self.terms.insert(wexp, sum);
        }
    }

    /// Product of two finite Laurent objects; windows add and q-orders follow
    /// [`QSeries::mul`].
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = WLaurentQSeries::new(self.window + other.window, self.order.min(other.order));
        let mut order = out.order;
        let mut parts = Vec::new();
        for (ea, sa) in &self.terms {
            for (eb, sb) in &other.terms {
                let p = sa.mul(sb);
                order = order.min(p.order());
                parts.push((*ea + *eb, p));
            }
        }
        out.order = order;
        for (e, p) in parts {
            out.add_series(e, &p);
        }
        out
    }

    /// The substitution `w -> 1/w`.
    pub fn invert_w(&self) -> Self {
        WLaurentQSeries {
            terms: self.terms.iter().map(|(e, s)| (-*e, s.clone())).collect(),
            window: self.window,
            order: self.order,
        }
    }

    pub fn neg(&self) -> Self {
        WLaurentQSeries {
            terms: self.terms.iter().map(|(e, s)| (*e, s.neg())).collect(),
            window: self.window,
            order: self.order,
        }
    }
}

/// The coefficient of `w^0`, i.e. `oint dw / (2 pi i w) f`.
pub fn constant_term_in_w(f: &WLaurentQSeries) -> QSeries {
    f.get(Exp::zero())
        .cloned()
        .unwrap_or_else(|| QSeries::zero(f.order()))
}

/// `oint dw / (2 pi i w) pv(w) f(w)`: pairs `w^k` in `f` with the
/// coefficient of `w^(-k)` in the principal-value factor. Non-integral
/// w-exponents pair with nothing.
pub fn constant_term_with_pv(f: &WLaurentQSeries, pv: &PVFactor) -> QSeries {
    let mut acc = QSeries::zero(f.order());
    for (k, s) in f.iter() {
        if !k.is_integer() {
            continue;
        }
        let c = pv.coefficient(-k.to_integer());
        if !c.is_zero() {
            acc = acc.add(&s.scale(&c));
        }
    }
    acc
}
