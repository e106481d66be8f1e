//! Dense linear algebra over the prime field F_q.

use crate::error::{Error, Result};

pub fn add_mod(a: u64, b: u64, q: u64) -> u64 {
    let s = a + b;
    if s >= q {
        s - q
    } else {
        s
    }
}

pub fn sub_mod(a: u64, b: u64, q: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + q - b
    }
}

pub fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    a * b % q
}

/// Inverse of `a` modulo prime `q` via Fermat.
pub fn inv_mod(a: u64, q: u64) -> u64 {
    debug_assert!(a != 0);
    pow_mod(a, q - 2, q)
}

pub fn pow_mod(mut base: u64, mut exp: u64, q: u64) -> u64 {
    let mut acc = 1 % q;
    base %= q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % q;
        }
        base = base * base % q;
        exp >>= 1;
    }
    acc
}

/// Row-major matrix over F_q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FqMat {
    pub rows: usize,
    pub cols: usize,
    pub q: u64,
    data: Vec<u64>,
}

impl FqMat {
    pub fn zero(rows: usize, cols: usize, q: u64) -> Self {
        FqMat {
            rows,
            cols,
            q,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize, q: u64) -> Self {
        let mut m = Self::zero(n, n, q);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u64>], q: u64) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zero(r, c, q);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c);
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v % q);
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[u64] {
        &self.data
    }

    pub fn mul(&self, other: &FqMat) -> Result<FqMat> {
        if self.cols != other.rows || self.q != other.q {
            return Err(Error::ShapeMismatch);
        }
        let q = self.q;
        let mut out = FqMat::zero(self.rows, other.cols, q);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = add_mod(out.get(i, j), a * other.get(k, j) % q, q);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Matrix applied to a column vector.
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        let q = self.q;
        let mut out = vec![0u64; self.rows];
        for i in 0..self.rows {
            let mut acc = 0u64;
            for j in 0..self.cols {
                acc = add_mod(acc, self.get(i, j) * v[j] % q, q);
            }
            out[i] = acc;
        }
        out
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.row_reduce(m.cols)
    }

    /// In-place Gauss-Jordan elimination with pivots restricted to the first
    /// `pivot_cols` columns; returns the number of pivots.
    fn row_reduce(&mut self, pivot_cols: usize) -> usize {
        let q = self.q;
        let mut rank = 0;
        for col in 0..pivot_cols {
            if rank == self.rows {
                break;
            }
            let Some(pivot) = (rank..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            self.swap_rows(rank, pivot);
            let inv = inv_mod(self.get(rank, col), q);
            for j in 0..self.cols {
                self.set(rank, j, self.get(rank, j) * inv % q);
            }
            for r in 0..self.rows {
                if r != rank && self.get(r, col) != 0 {
                    let f = self.get(r, col);
                    for j in 0..self.cols {
                        let v = sub_mod(self.get(r, j), f * self.get(rank, j) % q, q);
                        self.set(r, j, v);
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            let (x, y) = (self.get(a, j), self.get(b, j));
            self.set(a, j, y);
            self.set(b, j, x);
        }
    }

    pub fn inverse(&self) -> Result<FqMat> {
        if self.rows != self.cols {
            return Err(Error::ShapeMismatch);
        }
        let n = self.rows;
        let mut work = FqMat::zero(n, 2 * n, self.q);
        for i in 0..n {
            for j in 0..n {
                work.set(i, j, self.get(i, j));
            }
            work.set(i, n + i, 1);
        }
        if work.row_reduce(n) != n {
            return Err(Error::SingularBasis);
        }
        let mut out = FqMat::zero(n, n, self.q);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, work.get(i, n + j));
            }
        }
        Ok(out)
    }

    /// Solves `self * x = b`; requires a square invertible matrix.
    pub fn solve(&self, b: &[u64]) -> Result<Vec<u64>> {
        Ok(self.inverse()?.apply(b))
    }

    /// Basis of the right kernel, one vector per column of the result.
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let q = self.q;
        let mut m = self.clone();
        m.row_reduce(m.cols);
        let mut pivot_of_col = vec![usize::MAX; self.cols];
        let mut r = 0;
        for col in 0..self.cols {
            if r < self.rows && m.get(r, col) != 0 {
                pivot_of_col[col] = r;
                r += 1;
            }
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_of_col[free] != usize::MAX {
                continue;
            }
            let mut v = vec![0u64; self.cols];
            v[free] = 1;
            for col in 0..self.cols {
                let p = pivot_of_col[col];
                if p != usize::MAX {
                    v[col] = sub_mod(0, m.get(p, free), q);
                }
            }
            basis.push(v);
        }
        basis
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip() {
        let m = FqMat::from_rows(&[vec![1, 2], vec![2, 2]], 3);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), FqMat::identity(2, 3));
    }

    #[test]
    fn rank_and_kernel() {
        let m = FqMat::from_rows(&[vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 0]], 2);
        assert_eq!(m.rank(), 2);
        let ker = m.kernel_basis();
        assert_eq!(ker.len(), 1);
        for v in &ker {
            assert_eq!(m.apply(v), vec![0, 0, 0]);
        }
    }

    #[test]
    fn singular_inverse_rejected() {
        let m = FqMat::from_rows(&[vec![1, 1], vec![1, 1]], 2);
        assert_eq!(m.inverse().unwrap_err(), Error::SingularBasis);
    }
}
