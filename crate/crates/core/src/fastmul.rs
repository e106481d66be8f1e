//! Fragmentation-based sub-quadratic skew polynomial multiplication.
//!
//! A product of polynomials of degree at most `s` is rewritten as one matrix
//! product `C = A·B` with `A` of shape `s*×s*` and `B` of shape `s*×(s+s*)`,
//! `s* = ⌈√(s+1)⌉`. The rectangular product is realized as `⌈(s+s*)/s*⌉`
//! square block products, each evaluated by a pluggable backend (naive cubic
//! or Strassen above a threshold). Setup, extraction and fragment summation
//! cost `O(s^{3/2})` field operations.

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement, OpCounter, OpTally};
use crate::skewpoly::SkewPoly;

/// Row-major matrix over `F_{q^m}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<FieldElement>,
}

impl FeMat {
    pub fn zero(ctx: &FieldCtx, rows: usize, cols: usize) -> Self {
        FeMat {
            rows,
            cols,
            data: vec![ctx.zero(); rows * cols],
        }
    }

    pub fn identity(ctx: &FieldCtx, n: usize) -> Self {
        let mut m = Self::zero(ctx, n, n);
        for i in 0..n {
            m.set(i, i, ctx.one());
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.data[i * self.cols + j] = v;
    }
}

/// Matrix multiplication strategy of a [`MatBackend`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MatStrategy {
    #[default]
    NaiveCubic,
    /// Strassen recursion; dimensions at or below the threshold run naive.
    Strassen { threshold: usize },
}

pub const DEFAULT_STRASSEN_THRESHOLD: usize = 64;

/// Backend selection plus an optional tally of the `F_{q^m}` multiplications
/// and additions spent inside matrix products.
#[derive(Debug, Default)]
pub struct MatBackend {
    strategy: MatStrategy,
    counter: Option<OpCounter>,
}

impl MatBackend {
    pub fn naive() -> Self {
        MatBackend {
            strategy: MatStrategy::NaiveCubic,
            counter: None,
        }
    }

    pub fn strassen() -> Self {
        Self::strassen_with_threshold(DEFAULT_STRASSEN_THRESHOLD)
    }

    pub fn strassen_with_threshold(threshold: usize) -> Self {
        MatBackend {
            strategy: MatStrategy::Strassen {
                threshold: threshold.max(2),
            },
            counter: None,
        }
    }

    pub fn counting(mut self) -> Self {
        self.counter = Some(OpCounter::default());
        self
    }

    pub fn strategy(&self) -> MatStrategy {
        self.strategy
    }

    /// Tally of matrix-level field operations, if counting is enabled.
    pub fn tally(&self) -> Option<OpTally> {
        self.counter.as_ref().map(|c| c.tally())
    }
}

struct Ops<'a> {
    ctx: &'a FieldCtx,
    counter: Option<&'a OpCounter>,
}

impl<'a> Ops<'a> {
    fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if let Some(c) = self.counter {
            c.mul();
        }
        self.ctx.mul(a, b)
    }

    fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if let Some(c) = self.counter {
            c.add();
        }
        self.ctx.add(a, b)
    }

    fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if let Some(c) = self.counter {
            c.add();
        }
        self.ctx.sub(a, b)
    }
}

/// Exact matrix product, dispatched through the backend.
///
/// A square left factor with a wider right factor is chunked column-wise into
/// square blocks; anything else falls back to the cubic loop.
pub fn matmul(ctx: &FieldCtx, a: &FeMat, b: &FeMat, backend: &MatBackend) -> Result<FeMat> {
    if a.cols != b.rows {
        return Err(Error::ShapeMismatch);
    }
    let ops = Ops {
        ctx,
        counter: backend.counter.as_ref(),
    };
    if a.rows == a.cols && b.cols >= a.cols {
        let n = a.cols;
        let mut out = FeMat::zero(ctx, a.rows, b.cols);
        let mut col = 0;
        while col < b.cols {
            let width = n.min(b.cols - col);
            let mut block = FeMat::zero(ctx, n, n);
            for i in 0..n {
                for j in 0..width {
                    block.set(i, j, b.get(i, col + j));
                }
            }
            let prod = square_mul(&ops, a, &block, backend.strategy);
            for i in 0..a.rows {
                for j in 0..width {
                    out.set(i, col + j, prod.get(i, j));
                }
            }
            col += width;
        }
        Ok(out)
    } else {
        Ok(naive_mul(&ops, a, b))
    }
}

fn naive_mul(ops: &Ops, a: &FeMat, b: &FeMat) -> FeMat {
    let mut out = FeMat::zero(ops.ctx, a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a.get(i, k);
            for j in 0..b.cols {
                let t = ops.mul(aik, b.get(k, j));
                out.set(i, j, ops.add(out.get(i, j), t));
            }
        }
    }
    out
}

fn square_mul(ops: &Ops, a: &FeMat, b: &FeMat, strategy: MatStrategy) -> FeMat {
    match strategy {
        MatStrategy::NaiveCubic => naive_mul(ops, a, b),
        MatStrategy::Strassen { threshold } => {
            let n = a.rows;
            if n <= threshold {
                return naive_mul(ops, a, b);
            }
            let padded = n.next_power_of_two();
            if padded == n {
                strassen(ops, a, b, threshold)
            } else {
                let ap = pad(ops.ctx, a, padded);
                let bp = pad(ops.ctx, b, padded);
                let cp = strassen(ops, &ap, &bp, threshold);
                crop(ops.ctx, &cp, n)
            }
        }
    }
}

fn pad(ctx: &FieldCtx, m: &FeMat, n: usize) -> FeMat {
    let mut out = FeMat::zero(ctx, n, n);
    for i in 0..m.rows {
        for j in 0..m.cols {
            out.set(i, j, m.get(i, j));
        }
    }
    out
}

fn crop(ctx: &FieldCtx, m: &FeMat, n: usize) -> FeMat {
    let mut out = FeMat::zero(ctx, n, n);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, m.get(i, j));
        }
    }
    out
}

fn mat_add(ops: &Ops, a: &FeMat, b: &FeMat) -> FeMat {
    let mut out = FeMat::zero(ops.ctx, a.rows, a.cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            out.set(i, j, ops.add(a.get(i, j), b.get(i, j)));
        }
    }
    out
}

fn mat_sub(ops: &Ops, a: &FeMat, b: &FeMat) -> FeMat {
    let mut out = FeMat::zero(ops.ctx, a.rows, a.cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            out.set(i, j, ops.sub(a.get(i, j), b.get(i, j)));
        }
    }
    out
}

fn split(ctx: &FieldCtx, m: &FeMat) -> [FeMat; 4] {
    let h = m.rows / 2;
    let mut parts = [
        FeMat::zero(ctx, h, h),
        FeMat::zero(ctx, h, h),
        FeMat::zero(ctx, h, h),
        FeMat::zero(ctx, h, h),
    ];
    for i in 0..h {
        for j in 0..h {
            parts[0].set(i, j, m.get(i, j));
            parts[1].set(i, j, m.get(i, j + h));
            parts[2].set(i, j, m.get(i + h, j));
            parts[3].set(i, j, m.get(i + h, j + h));
        }
    }
    parts
}

fn join(ctx: &FieldCtx, c11: &FeMat, c12: &FeMat, c21: &FeMat, c22: &FeMat) -> FeMat {
    let h = c11.rows;
    let mut out = FeMat::zero(ctx, 2 * h, 2 * h);
    for i in 0..h {
        for j in 0..h {
            out.set(i, j, c11.get(i, j));
            out.set(i, j + h, c12.get(i, j));
            out.set(i + h, j, c21.get(i, j));
            out.set(i + h, j + h, c22.get(i, j));
        }
    }
    out
}

fn strassen(ops: &Ops, a: &FeMat, b: &FeMat, threshold: usize) -> FeMat {
    let n = a.rows;
    if n <= threshold {
        return naive_mul(ops, a, b);
    }
    let [a11, a12, a21, a22] = split(ops.ctx, a);
    let [b11, b12, b21, b22] = split(ops.ctx, b);
    let m1 = strassen(ops, &mat_add(ops, &a11, &a22), &mat_add(ops, &b11, &b22), threshold);
    let m2 = strassen(ops, &mat_add(ops, &a21, &a22), &b11, threshold);
    let m3 = strassen(ops, &a11, &mat_sub(ops, &b12, &b22), threshold);
    let m4 = strassen(ops, &a22, &mat_sub(ops, &b21, &b11), threshold);
    let m5 = strassen(ops, &mat_add(ops, &a11, &a12), &b22, threshold);
    let m6 = strassen(ops, &mat_sub(ops, &a21, &a11), &mat_add(ops, &b11, &b12), threshold);
    let m7 = strassen(ops, &mat_sub(ops, &a12, &a22), &mat_add(ops, &b21, &b22), threshold);
    let c11 = mat_add(ops, &mat_sub(ops, &mat_add(ops, &m1, &m4), &m5), &m7);
    let c12 = mat_add(ops, &m3, &m5);
    let c21 = mat_add(ops, &m2, &m4);
    let c22 = mat_add(ops, &mat_add(ops, &mat_sub(ops, &m1, &m2), &m3), &m6);
    join(ops.ctx, &c11, &c12, &c21, &c22)
}

/// The matrices of the fragmentation identity `C = A·B`, with
/// `A_{ij} = σ^{−i·s*}(a_{i·s*+j})` of shape `s*×s*` and the banded
/// `B_{ij} = σ^i(b_{j−i})` (nonzero only for `0 ≤ j−i ≤ s`) of shape
/// `s*×(s+s*)`, so that row `i` of `C` holds `σ^{−i·s*}` of the coefficients
/// of the fragment product `a^{(i)}·b`.
#[derive(Debug)]
pub struct FragMatrices {
    pub s_star: usize,
    pub a_mat: FeMat,
    pub b_mat: FeMat,
    pub c_mat: FeMat,
}

impl FragMatrices {
    pub fn build(ctx: &FieldCtx, a: &SkewPoly, b: &SkewPoly, backend: &MatBackend) -> Result<Self> {
        assert_eq!(a.ell(), b.ell(), "polynomials over different automorphisms");
        let s = a.deg_q().unwrap_or(0).max(b.deg_q().unwrap_or(0));
        let s_star = int_sqrt_ceil(s + 1);
        let mut a_mat = FeMat::zero(ctx, s_star, s_star);
        for i in 0..s_star {
            for j in 0..s_star {
                let idx = i * s_star + j;
                let coeff = a.coeff(ctx, idx);
                if !coeff.is_zero() {
                    a_mat.set(i, j, a.sigma_inv(ctx, coeff, i * s_star));
                }
            }
        }
        let mut b_mat = FeMat::zero(ctx, s_star, s + s_star);
        for i in 0..s_star {
            for j in i..(i + s + 1).min(s + s_star) {
                let coeff = b.coeff(ctx, j - i);
                if !coeff.is_zero() {
                    b_mat.set(i, j, b.sigma(ctx, coeff, i));
                }
            }
        }
        let c_mat = matmul(ctx, &a_mat, &b_mat, backend)?;
        Ok(FragMatrices {
            s_star,
            a_mat,
            b_mat,
            c_mat,
        })
    }

    /// Undoes the row twist: fragment `i`, coefficient `h` of `a^{(i)}·b`.
    pub(crate) fn fragments(&self, ctx: &FieldCtx, ell: usize) -> Vec<Vec<FieldElement>> {
        let proto = SkewPoly::one(ctx, ell);
        (0..self.s_star)
            .map(|i| {
                (0..self.c_mat.cols)
                    .map(|h| {
                        let v = self.c_mat.get(i, h);
                        if v.is_zero() {
                            v
                        } else {
                            proto.sigma(ctx, v, i * self.s_star)
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

fn int_sqrt_ceil(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r < n {
        r += 1;
    }
    while r > 1 && (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r
}

/// Fragmentation product; coefficient-identical to [`SkewPoly::mul_naive`].
pub fn sp_mul_fast(
    a: &SkewPoly,
    b: &SkewPoly,
    ctx: &FieldCtx,
    backend: &MatBackend,
) -> Result<SkewPoly> {
    if a.is_zero() || b.is_zero() {
        return Ok(SkewPoly::zero(ctx, a.ell()));
    }
    let frag = FragMatrices::build(ctx, a, b, backend)?;
    let fragments = frag.fragments(ctx, a.ell());
    let out_len = a.deg_q().unwrap() + b.deg_q().unwrap() + 1;
    let mut coeffs = vec![ctx.zero(); out_len];
    // The fragment sums overlap in at most s known positions each.
    for (i, fragment) in fragments.iter().enumerate() {
        let offset = i * frag.s_star;
        for (h, &v) in fragment.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            debug_assert!(offset + h < out_len, "fragment coefficient out of range");
            coeffs[offset + h] = ctx.add(coeffs[offset + h], v);
        }
    }
    Ok(SkewPoly::new(ctx, a.ell(), coeffs))
}

/// Runs both multiplication paths on seeded random degree-`s` inputs with
/// counters enabled and returns `(naive, fast)` tallies of context-level
/// field operations. Frobenius applications count as multiplications.
pub fn count_field_ops(
    ctx: &FieldCtx,
    s: usize,
    backend: &MatBackend,
    seed: u64,
) -> Result<(OpTally, OpTally)> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
    let coeffs_a: Vec<_> = (0..=s).map(|_| ctx.random_element(&mut rng)).collect();
    let coeffs_b: Vec<_> = (0..=s).map(|_| ctx.random_element(&mut rng)).collect();
    let a = SkewPoly::new(ctx, 1, coeffs_a);
    let b = SkewPoly::new(ctx, 1, coeffs_b);
    let t0 = ctx.op_tally();
    let naive = a.mul_naive(&b, ctx);
    let t1 = ctx.op_tally();
    let fast = sp_mul_fast(&a, &b, ctx, backend)?;
    let t2 = ctx.op_tally();
    debug_assert_eq!(naive, fast);
    Ok((t1 - t0, t2 - t1))
}
