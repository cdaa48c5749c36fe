//! Fixed-point arbitrary-precision reals and complex numbers.
//!
//! A [`Real`] is `v / 2^prec` with a big-integer mantissa, so precision is
//! absolute: values below `2^-prec` vanish. That is the right model for
//! evaluating q-series near the boundary, where every term is bounded by one
//! and the quantity of interest is an absolute error.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Real {
    v: BigInt,
    prec: u32,
}

impl Real {
    pub fn zero(prec: u32) -> Self {
        Real { v: BigInt::zero(), prec }
    }

    pub fn one(prec: u32) -> Self {
        Real { v: BigInt::one() << prec, prec }
    }

    pub fn from_i64(x: i64, prec: u32) -> Self {
        Real { v: BigInt::from(x) << prec, prec }
    }

    /// Nearest fixed-point value to `r` (rounded toward negative infinity).
    pub fn from_ratio(r: &BigRational, prec: u32) -> Self {
        let num: BigInt = r.numer().clone() << prec;
        Real {
            v: num.div_floor(r.denom()),
            prec,
        }
    }

    pub fn from_rational64(r: Rational64, prec: u32) -> Self {
        Self::from_ratio(&BigRational::new((*r.numer()).into(), (*r.denom()).into()), prec)
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// Change the number of fractional bits.
    pub fn with_precision(&self, prec: u32) -> Self {
        let v = match prec.cmp(&self.prec) {
            Ordering::Equal => self.v.clone(),
            Ordering::Greater => &self.v << (prec - self.prec),
            Ordering::Less => &self.v >> (self.prec - prec),
        };
        Real { v, prec }
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn add(&self, o: &Real) -> Real {
        debug_assert_eq!(self.prec, o.prec);
        Real { v: &self.v + &o.v, prec: self.prec }
    }

    pub fn sub(&self, o: &Real) -> Real {
        debug_assert_eq!(self.prec, o.prec);
        Real { v: &self.v - &o.v, prec: self.prec }
    }

    pub fn neg(&self) -> Real {
        Real { v: -&self.v, prec: self.prec }
    }

    pub fn abs(&self) -> Real {
        Real { v: self.v.abs(), prec: self.prec }
    }

    pub fn mul(&self, o: &Real) -> Real {
        debug_assert_eq!(self.prec, o.prec);
        Real { v: (&self.v * &o.v) >> self.prec, prec: self.prec }
    }

    pub fn div(&self, o: &Real) -> Real {
        debug_assert_eq!(self.prec, o.prec);
        assert!(!o.v.is_zero(), "division by zero");
        Real { v: (&self.v << self.prec).div_floor(&o.v), prec: self.prec }
    }

    pub fn mul_ratio(&self, r: &BigRational) -> Real {
        Real {
            v: (&self.v * r.numer()).div_floor(r.denom()),
            prec: self.prec,
        }
    }

    pub fn mul_i64(&self, k: i64) -> Real {
        Real { v: &self.v * k, prec: self.prec }
    }

    pub fn div_i64(&self, k: i64) -> Real {
        Real { v: self.v.div_floor(&BigInt::from(k)), prec: self.prec }
    }

    pub fn sqrt(&self) -> Real {
        assert!(!self.v.is_negative(), "square root of a negative number");
        Real { v: (&self.v << self.prec).sqrt(), prec: self.prec }
    }

    pub fn cmp_value(&self, o: &Real) -> Ordering {
        self.v.cmp(&o.v)
    }

    pub fn max(&self, o: &Real) -> Real {
        if self.cmp_value(o) == Ordering::Less { o.clone() } else { self.clone() }
    }

    pub fn to_f64(&self) -> f64 {
        // Keep 60 significant bits before converting.
        let bits = self.v.bits() as i64;
        let drop = (bits - 60).max(0);
        let head = (&self.v >> drop as usize).to_f64().unwrap_or(f64::NAN);
        head * 2f64.powi((drop - self.prec as i64) as i32)
    }

    /// Decimal rendering with `digits` fractional digits, rounded half away
    /// from zero.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        let scale = BigInt::from(10u32).pow(digits as u32);
        let neg = self.v.is_negative();
        let half = if self.prec == 0 { BigInt::zero() } else { BigInt::one() << (self.prec - 1) };
        let scaled: BigInt = (self.v.abs() * scale + half) >> self.prec;
        let s = scaled.to_string();
        let s = format!("{:0>width$}", s, width = digits + 1);
        let (int, frac) = s.split_at(s.len() - digits);
        let sign = if neg && !scaled.is_zero() { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }

    /// `pi` by Machin's formula.
    pub fn pi(prec: u32) -> Real {
        let work = prec + 32;
        let atan_inv = |k: i64| {
            // atan(1/k) = sum (-1)^n / ((2n+1) k^(2n+1))
            let mut term = Real::one(work).div_i64(k);
            let k2 = k * k;
            let mut acc = Real::zero(work);
            let mut n = 0i64;
            while !term.is_zero() {
                let t = term.div_i64(2 * n + 1);
                acc = if n % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
                term = term.div_i64(k2);
                n += 1;
            }
            acc
        };
        atan_inv(5).mul_i64(16).sub(&atan_inv(239).mul_i64(4)).with_precision(prec)
    }

    /// `exp(self)`, by halving to a small argument, Taylor series, and
    /// repeated squaring.
    pub fn exp(&self) -> Real {
        let prec = self.prec;
        let mag = self.abs().to_f64();
        let halvings = if mag > 0.25 { (mag / 0.25).log2().ceil() as u32 } else { 0 };
        let work = prec + halvings + 40;
        let x = Real { v: self.with_precision(work).v >> halvings, prec: work };
        let mut sum = Real::one(work);
        let mut term = Real::one(work);
        let mut n = 1i64;
        loop {
            term = term.mul(&x).div_i64(n);
            if term.is_zero() {
                break;
            }
            sum = sum.add(&term);
            n += 1;
        }
        for _ in 0..halvings {
            sum = sum.mul(&sum);
        }
        sum.with_precision(prec)
    }

    /// `self^k` by binary powering.
    pub fn pow(&self, mut k: u64) -> Real {
        let mut base = self.clone();
        let mut acc = Real::one(self.prec);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// Complex number with [`Real`] parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn zero(prec: u32) -> Self {
        Complex { re: Real::zero(prec), im: Real::zero(prec) }
    }

    pub fn one(prec: u32) -> Self {
        Complex { re: Real::one(prec), im: Real::zero(prec) }
    }

    pub fn from_real(re: Real) -> Self {
        let prec = re.precision();
        Complex { re, im: Real::zero(prec) }
    }

    pub fn add(&self, o: &Complex) -> Complex {
        Complex { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &Complex) -> Complex {
        Complex { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn mul(&self, o: &Complex) -> Complex {
        Complex {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn scale(&self, k: &Real) -> Complex {
        Complex { re: self.re.mul(k), im: self.im.mul(k) }
    }

    pub fn scale_ratio(&self, r: &BigRational) -> Complex {
        Complex { re: self.re.mul_ratio(r), im: self.im.mul_ratio(r) }
    }

    pub fn div_real(&self, k: &Real) -> Complex {
        Complex { re: self.re.div(k), im: self.im.div(k) }
    }

    /// `|self|` as a real, via the square root of the norm.
    pub fn abs(&self) -> Real {
        self.re.mul(&self.re).add(&self.im.mul(&self.im)).sqrt()
    }

    /// `exp(2 pi i f)` for rational `f`, exactly reduced modulo 1 first.
    pub fn unit(f: &BigRational, prec: u32) -> Complex {
        // Nearest quarter turn, then a residual angle in [-pi/4, pi/4].
        let quarter = (f * BigInt::from(4)).round().to_integer();
        let rest = f - BigRational::new(quarter.clone(), BigInt::from(4));
        let q = quarter.mod_floor(&BigInt::from(4)).to_u8().unwrap();
        let work = prec + 32;
        let theta = Real::pi(work).mul_i64(2).mul_ratio(&rest);
        let theta2 = theta.mul(&theta);
        let mut cos = Real::one(work);
        let mut sin = theta.clone();
        let mut ct = Real::one(work);
        let mut st = theta.clone();
        let mut n = 1i64;
        loop {
            ct = ct.mul(&theta2).div_i64((2 * n - 1) * (2 * n)).neg();
            st = st.mul(&theta2).div_i64((2 * n) * (2 * n + 1)).neg();
            if ct.is_zero() && st.is_zero() {
                break;
            }
            cos = cos.add(&ct);
            sin = sin.add(&st);
            n += 1;
        }
        let (re, im) = match q {
            0 => (cos, sin),
            1 => (sin.neg(), cos),
            2 => (cos.neg(), sin.neg()),
            _ => (sin, cos.neg()),
        };
        Complex { re: re.with_precision(prec), im: im.with_precision(prec) }
    }
}

/// Evaluates monomials `q^e` at a fixed `tau = x + i t` with rational `x`,
/// `t`, caching the decay base `exp(-2 pi t / den)` and the phases.
pub struct MonomialEvaluator {
    x: BigRational,
    den: i64,
    base: Real,
    base_pows: HashMap<u64, Real>,
    phases: HashMap<BigRational, Complex>,
    prec: u32,
}

impl MonomialEvaluator {
    /// `den` must be a common denominator of every exponent to be evaluated.
    pub fn new(x: &BigRational, t: &BigRational, den: i64, prec: u32) -> Self {
        let work = prec + 32;
        let arg = Real::pi(work)
            .mul_i64(-2)
            .mul_ratio(t)
            .div_i64(den);
        MonomialEvaluator {
            x: x.clone(),
            den,
            base: arg.exp(),
            base_pows: HashMap::new(),
            phases: HashMap::new(),
            prec: work,
        }
    }

    pub fn working_precision(&self) -> u32 {
        self.prec
    }

    /// `|q|^e`, for `e` with denominator dividing `den`; `e` may be negative.
    pub fn decay(&mut self, e: Rational64) -> Real {
        let i = (e * self.den).to_integer();
        let k = i.unsigned_abs();
        let p = self
            .base_pows
            .entry(k)
            .or_insert_with(|| self.base.pow(k))
            .clone();
        if i >= 0 {
            p
        } else {
            Real::one(self.prec).div(&p)
        }
    }

    /// `exp(2 pi i e x)`.
    pub fn phase(&mut self, e: Rational64) -> Complex {
        if self.x.is_zero() {
            return Complex::one(self.prec);
        }
        let ex = BigRational::new((*e.numer()).into(), (*e.denom()).into()) * &self.x;
        let frac = &ex - ex.floor();
        let prec = self.prec;
        self.phases
            .entry(frac.clone())
            .or_insert_with(|| Complex::unit(&frac, prec))
            .clone()
    }
}
