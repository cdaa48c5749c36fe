//! Exact linear algebra on small symmetric matrices: inverse, determinant,
//! inertia by congruence, and Smith normal form over the integers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Square matrix with exact rational entries, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymMatrix {
    n: usize,
    entries: Vec<BigRational>,
}

impl SymMatrix {
    pub fn from_rows_i64(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        let entries = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), n, "matrix must be square");
                r.iter().map(|&x| BigRational::from_integer(x.into()))
            })
            .collect();
        SymMatrix { n, entries }
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Self {
        let n = rows.len();
        let entries = rows
            .into_iter()
            .flat_map(|r| {
                assert_eq!(r.len(), n, "matrix must be square");
                r
            })
            .collect();
        SymMatrix { n, entries }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.n + j]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn rows(&self) -> Vec<Vec<BigRational>> {
        self.entries.chunks(self.n.max(1)).map(|c| c.to_vec()).collect()
    }

    /// Integer entries, when every entry is integral and fits in `i64`.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        self.entries
            .chunks(self.n.max(1))
            .take(self.n)
            .map(|row| {
                row.iter()
                    .map(|x| if x.is_integer() { x.to_integer().to_i64() } else { None })
                    .collect()
            })
            .collect()
    }

    pub fn neg(&self) -> Self {
        SymMatrix {
            n: self.n,
            entries: self.entries.iter().map(|x| -x).collect(),
        }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        SymMatrix {
            n: self.n,
            entries: self.entries.iter().map(|x| x * k).collect(),
        }
    }

    /// Principal submatrix on the given indices.
    pub fn principal(&self, idx: &[usize]) -> Self {
        let rows = idx
            .iter()
            .map(|&i| idx.iter().map(|&j| self.get(i, j).clone()).collect())
            .collect();
        Self::from_rows(rows)
    }

    /// Permute rows and columns: result[i][j] = self[p[i]][p[j]].
    pub fn permute(&self, p: &[usize]) -> Self {
        self.principal(p)
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        (0..self.n)
            .map(|i| (0..self.n).fold(BigRational::zero(), |acc, j| acc + self.get(i, j) * &v[j]))
            .collect()
    }

    /// `u^T self v`.
    pub fn bilinear(&self, u: &[BigRational], v: &[BigRational]) -> BigRational {
        let mv = self.mul_vec(v);
        u.iter().zip(&mv).fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn determinant(&self) -> BigRational {
        let mut a = self.rows();
        let n = self.n;
        let mut det = BigRational::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return BigRational::zero();
            };
            if p != col {
                a.swap(p, col);
                det = -det;
            }
            let pivot = a[col][col].clone();
            det *= &pivot;
            for r in col + 1..n {
                if a[r][col].is_zero() {
                    continue;
                }
                let f = &a[r][col] / &pivot;
                for c in col..n {
                    let t = &f * &a[col][c];
                    a[r][c] -= t;
                }
            }
        }
        det
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut a = self.rows();
        let mut inv: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                    .collect()
            })
            .collect();
        for col in 0..n {
            let p = (col..n)
                .find(|&r| !a[r][col].is_zero())
                .ok_or(Error::SingularMatrix)?;
            a.swap(p, col);
            inv.swap(p, col);
            let pivot = a[col][col].recip();
            for c in 0..n {
                a[col][c] *= &pivot;
                inv[col][c] *= &pivot;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for c in 0..n {
                    let t = &f * &a[col][c];
                    a[r][c] -= t;
                    let t = &f * &inv[col][c];
                    inv[r][c] -= t;
                }
            }
        }
        Ok(Self::from_rows(inv))
    }
}

/// Counts of positive, negative and zero eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Inertia {
    pub positives: usize,
    pub negatives: usize,
    pub zeros: usize,
}

impl Inertia {
    pub fn signature(&self) -> i64 {
        self.positives as i64 - self.negatives as i64
    }

    pub fn is_negative_definite(&self) -> bool {
        self.positives == 0 && self.zeros == 0
    }
}

/// Inertia by symmetric Gaussian reduction over the rationals.
///
/// A nonzero diagonal pivot contributes its sign. When the remaining diagonal
/// vanishes but some off-diagonal entry does not, the 2x2 block
/// `[[0, b], [b, 0]]` contributes one positive and one negative eigenvalue
/// and is eliminated as a unit (Sylvester's law of inertia).
pub fn inertia(m: &SymMatrix) -> Inertia {
    let mut a = m.rows();
    let mut out = Inertia {
        positives: 0,
        negatives: 0,
        zeros: 0,
    };
    loop {
        let n = a.len();
        if n == 0 {
            return out;
        }
        if let Some(p) = (0..n).find(|&i| !a[i][i].is_zero()) {
            if a[p][p].is_positive() {
                out.positives += 1;
            } else {
                out.negatives += 1;
            }
            let pivot = a[p][p].clone();
            let col: Vec<BigRational> = (0..n).map(|i| a[i][p].clone()).collect();
            let mut next = Vec::with_capacity(n - 1);
            for i in (0..n).filter(|&i| i != p) {
                let row = (0..n)
                    .filter(|&j| j != p)
                    .map(|j| &a[i][j] - &col[i] * &col[j] / &pivot)
                    .collect();
                next.push(row);
            }
            a = next;
            continue;
        }
        let off = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find(|&(i, j)| i < j && !a[i][j].is_zero());
        let Some((p, q)) = off else {
            out.zeros += n;
            return out;
        };
        out.positives += 1;
        out.negatives += 1;
        // Block B = [[0, b], [b, 0]], B^-1 = [[0, 1/b], [1/b, 0]].
        let b_inv = a[p][q].recip();
        let cp: Vec<BigRational> = (0..n).map(|i| a[i][p].clone()).collect();
        let cq: Vec<BigRational> = (0..n).map(|i| a[i][q].clone()).collect();
        let mut next = Vec::with_capacity(n - 2);
        for i in (0..n).filter(|&i| i != p && i != q) {
            let row = (0..n)
                .filter(|&j| j != p && j != q)
                .map(|j| &a[i][j] - (&cp[i] * &cq[j] + &cq[i] * &cp[j]) * &b_inv)
                .collect();
            next.push(row);
        }
        a = next;
    }
}

/// Smith normal form `U A V = D` of a square integer matrix. Only the
/// diagonal and `U^-1` are retained, which is what coset enumeration of
/// `Z^n / A Z^n` needs: representatives are `U^-1 z` with `0 <= z_i < d_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub diagonal: Vec<BigInt>,
    pub u_inverse: Vec<Vec<BigInt>>,
}

pub fn smith_normal_form(rows: &[Vec<i64>]) -> SmithForm {
    let n = rows.len();
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut uinv: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    // Row op "row_i += k row_j" on A means U <- E U, so U^-1 <- U^-1 E^-1,
    // i.e. column_j of U^-1 -= k column_i.
    fn row_add(a: &mut [Vec<BigInt>], uinv: &mut [Vec<BigInt>], i: usize, j: usize, k: &BigInt) {
        let n = a.len();
        for c in 0..n {
            let t = k * &a[j][c];
            a[i][c] += t;
        }
        for r in 0..n {
            let t = k * &uinv[r][i];
            uinv[r][j] -= t;
        }
    }
    fn row_swap(a: &mut [Vec<BigInt>], uinv: &mut [Vec<BigInt>], i: usize, j: usize) {
        a.swap(i, j);
        for row in uinv.iter_mut() {
            row.swap(i, j);
        }
    }
    fn col_add(a: &mut [Vec<BigInt>], i: usize, j: usize, k: &BigInt) {
        for row in a.iter_mut() {
            let t = k * &row[j];
            row[i] += t;
        }
    }
    fn col_swap(a: &mut [Vec<BigInt>], i: usize, j: usize) {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    }

    for t in 0..n {
        loop {
            // Smallest nonzero entry of the trailing block becomes the pivot.
            let pivot = (t..n)
                .flat_map(|i| (t..n).map(move |j| (i, j)))
                .filter(|&(i, j)| !a[i][j].is_zero())
                .min_by(|&(i, j), &(k, l)| a[i][j].abs().cmp(&a[k][l].abs()));
            let Some((pi, pj)) = pivot else { break };
            row_swap(&mut a, &mut uinv, t, pi);
            col_swap(&mut a, t, pj);
            let mut clean = true;
            for i in t + 1..n {
                let q = a[i][t].clone() / a[t][t].clone();
                if !q.is_zero() {
                    row_add(&mut a, &mut uinv, i, t, &-q);
                }
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                let q = a[t][j].clone() / a[t][t].clone();
                if !q.is_zero() {
                    col_add(&mut a, j, t, &-q);
                }
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Divisibility: the pivot must divide the trailing block.
            let bad = (t + 1..n)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !(a[i][j].clone() % a[t][t].clone()).is_zero());
            match bad {
                Some((i, _)) => row_add(&mut a, &mut uinv, t, i, &BigInt::one()),
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for c in 0..n {
                a[t][c] = -a[t][c].clone();
            }
            for row in uinv.iter_mut() {
                row[t] = -row[t].clone();
            }
        }
    }
    SmithForm {
        diagonal: (0..n).map(|i| a[i][i].clone()).collect(),
        u_inverse: uinv,
    }
}
