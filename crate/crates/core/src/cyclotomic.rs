//! Exact arithmetic in the cyclotomic field `Q(zeta_n)`.
//!
//! Elements are stored as polynomials in `zeta_n` reduced modulo the `n`-th
//! cyclotomic polynomial, so the representation is canonical and equality is
//! structural.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Integer polynomial, lowest degree first.
type IntPoly = Vec<BigInt>;

fn trim(p: &mut IntPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Exact division of monic integer polynomials.
fn div_exact(num: &IntPoly, den: &IntPoly) -> IntPoly {
    let mut rem = num.clone();
    let dl = den.len();
    let mut quot = vec![BigInt::zero(); num.len() + 1 - dl];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dl - 1].clone();
        if c.is_zero() {
            continue;
        }
        for (k, d) in den.iter().enumerate() {
            rem[i + k] -= &c * d;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quot
}

/// The `n`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    assert!(n > 0);
    let mut p: IntPoly = vec![BigInt::zero(); n as usize + 1];
    p[0] = -BigInt::one();
    p[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = div_exact(&p, &cyclotomic_polynomial(d));
        }
    }
    trim(&mut p);
    p
}

/// An element of `Q(zeta_n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cyclotomic {
    n: u64,
    /// Coefficients of `1, zeta, ..., zeta^(phi(n)-1)`.
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    pub fn zero(n: u64) -> Self {
        let deg = cyclotomic_polynomial(n).len() - 1;
        Cyclotomic {
            n,
            coeffs: vec![BigRational::zero(); deg],
        }
    }

    pub fn from_rational(n: u64, r: BigRational) -> Self {
        let mut z = Self::zero(n);
        z.coeffs[0] = r;
        z
    }

    /// `zeta_n^k`.
    pub fn root_of_unity(n: u64, k: i64) -> Self {
        let mut m = BTreeMap::new();
        m.insert(k.rem_euclid(n as i64) as u64, BigRational::one());
        Self::from_powers(n, &m)
    }

    /// `sum c_k zeta_n^k` reduced modulo the cyclotomic polynomial.
    pub fn from_powers(n: u64, powers: &BTreeMap<u64, BigRational>) -> Self {
        let phi = cyclotomic_polynomial(n);
        let deg = phi.len() - 1;
        let top = powers.keys().next_back().map_or(0, |&k| (k % n) as usize);
        let mut p = vec![BigRational::zero(); (top + 1).max(deg)];
        for (&k, c) in powers {
            let k = (k % n) as usize;
            if k >= p.len() {
                p.resize(k + 1, BigRational::zero());
            }
            p[k] += c;
        }
        for i in (deg..p.len()).rev() {
            let c = std::mem::take(&mut p[i]);
            if c.is_zero() {
                continue;
            }
            // zeta^i = -sum_{k<deg} phi_k zeta^(i-deg+k)
            for (k, f) in phi.iter().take(deg).enumerate() {
                p[i - deg + k] -= &c * BigRational::from_integer(f.clone());
            }
        }
        p.truncate(deg);
        Cyclotomic { n, coeffs: p }
    }

    pub fn order(&self) -> u64 {
        self.n
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Rewrite as an element of `Q(zeta_m)` where `n | m`.
    pub fn lift(&self, m: u64) -> Self {
        assert!(m.is_multiple_of(self.n), "lift target must be a multiple of the order");
        let step = m / self.n;
        let powers = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k as u64 * step, c.clone()))
            .collect();
        Self::from_powers(m, &powers)
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        let m = self.n.lcm(&other.n);
        (self.lift(m), other.lift(m))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        Cyclotomic {
            n: a.n,
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        let mut powers: BTreeMap<u64, BigRational> = BTreeMap::new();
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                *powers.entry((i + j) as u64).or_insert_with(BigRational::zero) += x * y;
            }
        }
        Self::from_powers(a.n, &powers)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Cyclotomic {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// The rational value, when the element lies in `Q`.
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.coeffs.iter().skip(1).all(Zero::is_zero) {
            Some(self.coeffs.first().cloned().unwrap_or_else(BigRational::zero))
        } else {
            None
        }
    }
}

impl PartialEq<BigRational> for Cyclotomic {
    fn eq(&self, other: &BigRational) -> bool {
        self.to_rational().as_ref() == Some(other)
    }
}
