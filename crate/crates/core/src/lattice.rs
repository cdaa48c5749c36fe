//! Enumeration of the theta-lattice coset `a + 2M Z^n` below a q-exponent
//! bound.
//!
//! Points are enumerated in the coordinates of `n` itself: writing
//! `n = a + 2k`, the exponent `-n^T M^-1 n / 4` is a positive definite form
//! in `k`, and Fincke–Pohst recursion over its LDL decomposition yields
//! every `k` below the bound with exact rational interval tests. Membership
//! in the finer coset `a + 2M Z^n` is checked last. Working in `n`
//! coordinates lets callers prune coordinates whose admissible values form
//! a small finite set.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{inertia, SymMatrix};

/// One point of the coset with its q-exponent `-n^T M^-1 n / 4`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct LatticeTerm {
    pub qexp: Rational64,
    pub n: Vec<i64>,
}

/// Optional finite set of admissible values for each coordinate of `n`.
pub type Support = Vec<Option<Vec<i64>>>;

struct Plan {
    dim: usize,
    /// Coordinates in enumeration order (outermost first).
    order: Vec<usize>,
    /// LDL data of `4H` in the permuted basis: diagonal and upper factor.
    diag: Vec<BigRational>,
    upper: Vec<Vec<BigRational>>,
    /// Centre `-a/2` in the permuted basis.
    centre: Vec<BigRational>,
    base: Vec<i64>,
    m_inv: SymMatrix,
    qmax: BigRational,
    support: Support,
}

fn to_big(r: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

fn to_small(r: &BigRational) -> Rational64 {
    Rational64::new(
        r.numer().to_i64().expect("exponent numerator overflows i64"),
        r.denom().to_i64().expect("exponent denominator overflows i64"),
    )
}

impl Plan {
    fn new(m: &SymMatrix, a: &[i64], qmax: Rational64, support: Support) -> Result<Self> {
        let dim = m.size();
        assert_eq!(a.len(), dim, "label length differs from matrix size");
        let m_inv = m.inverse()?;
        if !inertia(&m_inv).is_negative_definite() {
            return Err(Error::NotNegativeDefinite);
        }
        // Coordinates with a finite support go outermost, i.e. last in the
        // decomposition order.
        let mut order: Vec<usize> = (0..dim).filter(|&i| support[i].is_some()).collect();
        order.extend((0..dim).filter(|&i| support[i].is_none()));
        let rev: Vec<usize> = order.iter().rev().copied().collect();
        // Q(k) = (k - c)^T G (k - c), G = -M^-1 (the 4 and 1/4 cancel).
        let g = m_inv.neg().permute(&rev);
        let mut q = g.rows();
        for i in 0..dim {
            for j in i + 1..dim {
                let t = &q[i][j] / &q[i][i];
                q[j][i] = q[i][j].clone();
                q[i][j] = t;
            }
            for k in i + 1..dim {
                for l in k..dim {
                    let t = &q[k][i] * &q[i][l];
                    q[k][l] -= t;
                }
            }
        }
        let diag = (0..dim).map(|i| q[i][i].clone()).collect();
        let upper = (0..dim)
            .map(|i| (0..dim).map(|j| if j > i { q[i][j].clone() } else { BigRational::zero() }).collect())
            .collect();
        let half = BigRational::new(BigInt::from(-1), BigInt::from(2));
        let centre = rev.iter().map(|&v| BigRational::from_integer(a[v].into()) * &half).collect();
        Ok(Plan {
            dim,
            order: rev,
            diag,
            upper,
            centre,
            base: a.to_vec(),
            m_inv,
            qmax: to_big(qmax),
            support,
        })
    }

    /// Admissible integers `k` at level `i` given the centre `z` and budget.
    fn candidates(&self, i: usize, z: &BigRational, budget: &BigRational) -> Vec<i64> {
        let d = &self.diag[i];
        let fits = |k: i64| {
            let t = BigRational::from_integer(k.into()) - z;
            &(d * &t * &t) < budget
        };
        let var = self.order[i];
        let allowed = |k: i64| match &self.support[var] {
            Some(vals) => vals.contains(&(self.base[var] + 2 * k)),
            None => true,
        };
        if let Some(vals) = &self.support[var] {
            let mut out: Vec<i64> = vals
                .iter()
                .filter(|&&n| (n - self.base[var]).rem_euclid(2) == 0)
                .map(|&n| (n - self.base[var]) / 2)
                .filter(|&k| fits(k))
                .collect();
            out.sort_unstable();
            out.dedup();
            return out;
        }
        let start = z.floor().to_integer().to_i64().expect("lattice coordinate overflows i64");
        let mut out = Vec::new();
        let mut k = start;
        while fits(k) {
            if allowed(k) {
                out.push(k);
            }
            k -= 1;
        }
        let mut k = start + 1;
        while fits(k) {
            if allowed(k) {
                out.push(k);
            }
            k += 1;
        }
        out.sort_unstable();
        out
    }

    fn centre_at(&self, i: usize, k: &[i64]) -> BigRational {
        let mut z = self.centre[i].clone();
        for j in i + 1..self.dim {
            let y = BigRational::from_integer(k[j].into()) - &self.centre[j];
            z -= &self.upper[i][j] * y;
        }
        z
    }

    fn spent(&self, i: usize, z: &BigRational, kv: i64) -> BigRational {
        let t = BigRational::from_integer(kv.into()) - z;
        &self.diag[i] * &t * &t
    }

    fn recurse(&self, i: usize, k: &mut Vec<i64>, budget: &BigRational, out: &mut Vec<LatticeTerm>) {
        let z = self.centre_at(i, k);
        for kv in self.candidates(i, &z, budget) {
            k[i] = kv;
            let rest = budget - self.spent(i, &z, kv);
            if i == 0 {
                self.emit(k, &rest, out);
            } else {
                self.recurse(i - 1, k, &rest, out);
            }
        }
    }

    fn emit(&self, k: &[i64], rest: &BigRational, out: &mut Vec<LatticeTerm>) {
        let mut n = vec![0i64; self.dim];
        let mut kk = vec![BigRational::zero(); self.dim];
        for (i, &var) in self.order.iter().enumerate() {
            n[var] = self.base[var] + 2 * k[i];
            kk[var] = BigRational::from_integer(k[i].into());
        }
        // n - a = 2k must lie in 2M Z^n.
        if !self.m_inv.mul_vec(&kk).iter().all(BigRational::is_integer) {
            return;
        }
        out.push(LatticeTerm {
            qexp: to_small(&(&self.qmax - rest)),
            n,
        });
    }

    fn run(&self, jobs: usize) -> Vec<LatticeTerm> {
        let mut out = Vec::new();
        if self.dim == 0 {
            if self.qmax.is_positive() {
                out.push(LatticeTerm { qexp: Rational64::zero(), n: vec![] });
            }
            return out;
        }
        let top = self.dim - 1;
        let z = self.centre_at(top, &vec![0; self.dim]);
        let outer = self.candidates(top, &z, &self.qmax);
        let work = |kv: i64| {
            let mut local = Vec::new();
            let mut k = vec![0i64; self.dim];
            k[top] = kv;
            let rest = &self.qmax - self.spent(top, &z, kv);
            if top == 0 {
                self.emit(&k, &rest, &mut local);
            } else {
                self.recurse(top - 1, &mut k, &rest, &mut local);
            }
            local
        };
        if jobs > 1 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .expect("thread pool");
            let parts: Vec<Vec<LatticeTerm>> = pool.install(|| outer.par_iter().map(|&kv| work(kv)).collect());
            out = parts.into_iter().flatten().collect();
        } else {
            for kv in outer {
                out.extend(work(kv));
            }
        }
        out.sort();
        out
    }
}

/// Every `n` in `a + 2M Z^n` with `-n^T M^-1 n / 4 < qmax`, sorted by
/// exponent then lexicographically.
pub fn lattice_points(m: &SymMatrix, a: &[i64], qmax: Rational64) -> Result<Vec<LatticeTerm>> {
    lattice_points_with(m, a, qmax, vec![None; m.size()], 1)
}

/// As [`lattice_points`], keeping only points whose coordinates lie in the
/// given finite supports, split over `jobs` threads.
pub fn lattice_points_with(
    m: &SymMatrix,
    a: &[i64],
    qmax: Rational64,
    support: Support,
    jobs: usize,
) -> Result<Vec<LatticeTerm>> {
    Ok(Plan::new(m, a, qmax, support)?.run(jobs.max(1)))
}

/// Brute-force scan of `a + 2M Z^n` over the box `|n_i| <= bound`, in
/// machine integers via the adjugate `adj = det(M) M^-1`.
pub fn lattice_points_box(m: &SymMatrix, a: &[i64], qmax: Rational64, bound: i64) -> Result<Vec<LatticeTerm>> {
    let dim = m.size();
    let det = m.determinant();
    let m_inv = m.inverse()?;
    let det = det.to_integer().to_i64().expect("determinant fits in i64");
    let adj: Vec<Vec<i64>> = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| (m_inv.get(i, j) * BigInt::from(det)).to_integer().to_i64().unwrap())
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let lo: Vec<i64> = a
        .iter()
        .map(|&ai| if (bound - ai).rem_euclid(2) == 0 { -bound } else { -bound + 1 })
        .collect();
    if lo.iter().any(|&x| x > bound) {
        return Ok(out);
    }
    let mut n = lo.clone();
    loop {
        // (n - a)/2 in M Z^n  <=>  adj (n - a)/2 == 0 mod det.
        let member = (0..dim).all(|i| {
            let s: i64 = (0..dim).map(|j| adj[i][j] * ((n[j] - a[j]) / 2)).sum();
            s % det == 0
        });
        if member {
            let quad: i64 = (0..dim)
                .map(|i| n[i] * (0..dim).map(|j| adj[i][j] * n[j]).sum::<i64>())
                .sum();
            let q = Rational64::new(-quad, 4 * det);
            if q < qmax {
                out.push(LatticeTerm { qexp: q, n: n.clone() });
            }
        }
        let mut i = 0;
        loop {
            if i == dim {
                out.sort();
                return Ok(out);
            }
            n[i] += 2;
            if n[i] <= bound {
                break;
            }
            n[i] = lo[i];
            i += 1;
        }
    }
}

/// Smallest `B` such that the ellipsoid `-n^T M^-1 n / 4 < qmax` lies in
/// the box `|n_i| <= B`: `|n_i|^2 < 4 qmax (-M)_{ii}`.
pub fn box_bound(m: &SymMatrix, qmax: Rational64) -> i64 {
    let q = to_big(qmax) * BigInt::from(4);
    (0..m.size())
        .map(|i| {
            let r = -m.get(i, i).clone() * &q;
            let r = r.ceil().to_integer();
            r.sqrt().to_i64().unwrap() + 1
        })
        .max()
        .unwrap_or(0)
}
