//! Forward and inverse q-transform with respect to a normal basis of
//! `F_{q^s} ⊆ F_{q^m}`.
//!
//! The forward transform maps coefficients to evaluations at the conjugates
//! `β^{[j]}`; written out, both directions are products of a vector with an
//! `s×s` Toeplitz matrix of conjugates, and a Toeplitz product reduces to one
//! ordinary polynomial multiplication over `F_{q^m}[x]`. The inverse uses the
//! dual normal basis ladder, which is again a Toeplitz product.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};
use crate::fq::FqMat;
use crate::skewpoly::SkewPoly;

/// Schoolbook is faster below this length.
const KARATSUBA_THRESHOLD: usize = 32;
const SUBFIELD_SEARCH_TRIES: usize = 2048;

/// Precomputed transform data: block length `s | m`, a normal element `β` of
/// `F_{q^s}` with its dual `β^⊥`, and both conjugate ladders up to `[2s−2]`.
#[derive(Debug, Clone)]
pub struct QTContext {
    s: usize,
    beta: FieldElement,
    beta_dual: FieldElement,
    ladder: Vec<FieldElement>,
    dual_ladder: Vec<FieldElement>,
}

impl QTContext {
    /// Finds a normal element of `F_{q^s}` over `F_q` and sets up the ladders.
    pub fn new(ctx: &FieldCtx, s: usize) -> Result<Self> {
        if s == 0 || !ctx.m().is_multiple_of(s) {
            return Err(Error::BlockLength { s, m: ctx.m() });
        }
        let beta = if s == ctx.m() {
            ctx.normal_element()
        } else {
            find_subfield_normal(ctx, s)?
        };
        Self::with_beta(ctx, s, beta)
    }

    /// Builds the context around a caller-supplied normal element of `F_{q^s}`.
    pub fn with_beta(ctx: &FieldCtx, s: usize, beta: FieldElement) -> Result<Self> {
        if s == 0 || !ctx.m().is_multiple_of(s) {
            return Err(Error::BlockLength { s, m: ctx.m() });
        }
        if ctx.frobenius(beta, s) != beta {
            return Err(Error::NotNormal);
        }
        if ctx.conjugate_matrix(beta, s).rank() != s {
            return Err(Error::NotNormal);
        }
        let beta_dual = ctx.dual_in_subfield(beta, s)?;
        Ok(QTContext {
            s,
            beta,
            beta_dual,
            ladder: conjugate_ladder(ctx, beta, 2 * s - 1),
            dual_ladder: conjugate_ladder(ctx, beta_dual, 2 * s - 1),
        })
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn beta(&self) -> FieldElement {
        self.beta
    }

    pub fn beta_dual(&self) -> FieldElement {
        self.beta_dual
    }

    /// `β^{[j]}` for `j < s`, the evaluation points of the transform.
    pub fn basis(&self) -> &[FieldElement] {
        &self.ladder[..self.s]
    }
}

fn conjugate_ladder(ctx: &FieldCtx, beta: FieldElement, len: usize) -> Vec<FieldElement> {
    let mut out = Vec::with_capacity(len);
    let mut cur = beta;
    for i in 0..len {
        if i > 0 {
            cur = ctx.frobenius(cur, 1);
        }
        out.push(cur);
    }
    out
}

/// Deterministic search for a normal element of the subfield fixed by `σ^s`.
fn find_subfield_normal(ctx: &FieldCtx, s: usize) -> Result<FieldElement> {
    let m = ctx.m();
    let q = ctx.q();
    // Subfield = kernel of (Frobenius^s − id) as an F_q-linear map.
    let mut frob_s = FqMat::zero(m, m, q);
    for j in 0..m {
        let mut unit = vec![0u64; m];
        unit[j] = 1;
        let e = ctx.from_coords(&unit).expect("unit coordinate vector");
        for (i, &c) in ctx.coords(ctx.frobenius(e, s)).iter().enumerate() {
            let v = if i == j { (c + q - 1) % q } else { c };
            frob_s.set(i, j, v);
        }
    }
    let kernel = frob_s.kernel_basis();
    assert_eq!(kernel.len(), s, "fixed field of σ^s has dimension s");
    let gens: Vec<FieldElement> = kernel
        .iter()
        .map(|coords| ctx.from_coords(coords).expect("kernel vector"))
        .collect();
    let combo = |idx: u64| -> FieldElement {
        let mut acc = ctx.zero();
        let mut rest = idx;
        for g in &gens {
            let c = rest % q;
            rest /= q;
            if c != 0 {
                let ce = ctx.from_value(c).expect("scalar below q");
                acc = ctx.add(acc, ctx.mul(ce, *g));
            }
        }
        acc
    };
    let total = (q as u128).pow(s as u32);
    let is_normal_in_subfield =
        |x: FieldElement| !x.is_zero() && ctx.conjugate_matrix(x, s).rank() == s;
    let mut rng = ChaCha12Rng::seed_from_u64(0x7174_6e62);
    for _ in 0..SUBFIELD_SEARCH_TRIES {
        let idx = rand::Rng::gen_range(&mut rng, 1..total) as u64;
        let x = combo(idx);
        if is_normal_in_subfield(x) {
            return Ok(x);
        }
    }
    for idx in 1..total {
        let x = combo(idx as u64);
        if is_normal_in_subfield(x) {
            return Ok(x);
        }
    }
    Err(Error::MissingNormalBasis)
}

/// Ordinary (commutative) product in `F_{q^m}[x]`; Karatsuba above the
/// threshold, schoolbook below. Output length is `f.len() + g.len() − 1`.
pub fn poly_mul_ordinary(ctx: &FieldCtx, f: &[FieldElement], g: &[FieldElement]) -> Vec<FieldElement> {
    if f.is_empty() || g.is_empty() {
        return vec![];
    }
    if f.len().min(g.len()) <= KARATSUBA_THRESHOLD {
        return schoolbook(ctx, f, g);
    }
    karatsuba(ctx, f, g)
}

fn schoolbook(ctx: &FieldCtx, f: &[FieldElement], g: &[FieldElement]) -> Vec<FieldElement> {
    let mut out = vec![ctx.zero(); f.len() + g.len() - 1];
    for (i, &fi) in f.iter().enumerate() {
        if fi.is_zero() {
            continue;
        }
        for (j, &gj) in g.iter().enumerate() {
            out[i + j] = ctx.add(out[i + j], ctx.mul(fi, gj));
        }
    }
    out
}

fn karatsuba(ctx: &FieldCtx, f: &[FieldElement], g: &[FieldElement]) -> Vec<FieldElement> {
    let n = f.len().max(g.len());
    let h = n.div_ceil(2);
    if f.len() <= h || g.len() <= h {
        // One operand fits entirely in the low half; split the other.
        let (long, short) = if f.len() >= g.len() { (f, g) } else { (g, f) };
        let lo = poly_mul_ordinary(ctx, &long[..h], short);
        let hi = poly_mul_ordinary(ctx, &long[h..], short);
        let mut out = vec![ctx.zero(); f.len() + g.len() - 1];
        for (i, &c) in lo.iter().enumerate() {
            out[i] = ctx.add(out[i], c);
        }
        for (i, &c) in hi.iter().enumerate() {
            out[h + i] = ctx.add(out[h + i], c);
        }
        return out;
    }
    let (f0, f1) = f.split_at(h);
    let (g0, g1) = g.split_at(h);
    let z0 = poly_mul_ordinary(ctx, f0, g0);
    let z2 = poly_mul_ordinary(ctx, f1, g1);
    let fs = slice_add(ctx, f0, f1);
    let gs = slice_add(ctx, g0, g1);
    let mut z1 = poly_mul_ordinary(ctx, &fs, &gs);
    for (i, &c) in z0.iter().enumerate() {
        z1[i] = ctx.sub(z1[i], c);
    }
    for (i, &c) in z2.iter().enumerate() {
        z1[i] = ctx.sub(z1[i], c);
    }
    let mut out = vec![ctx.zero(); f.len() + g.len() - 1];
    for (i, &c) in z0.iter().enumerate() {
        out[i] = ctx.add(out[i], c);
    }
    for (i, &c) in z1.iter().enumerate() {
        out[h + i] = ctx.add(out[h + i], c);
    }
    for (i, &c) in z2.iter().enumerate() {
        out[2 * h + i] = ctx.add(out[2 * h + i], c);
    }
    out
}

fn slice_add(ctx: &FieldCtx, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or_else(|| ctx.zero());
            let y = b.get(i).copied().unwrap_or_else(|| ctx.zero());
            ctx.add(x, y)
        })
        .collect()
}

/// Product of a row vector `v` with the `s×s` Toeplitz matrix whose entry
/// `(i, j)` is `diagonals[j − i + s − 1]`, via one polynomial multiplication.
pub fn toeplitz_matvec(
    ctx: &FieldCtx,
    diagonals: &[FieldElement],
    v: &[FieldElement],
) -> Result<Vec<FieldElement>> {
    if v.is_empty() {
        return Err(Error::EmptyInput);
    }
    let s = v.len();
    if diagonals.len() != 2 * s - 1 {
        return Err(Error::ShapeMismatch);
    }
    let prod = poly_mul_ordinary(ctx, diagonals, v);
    Ok((0..s)
        .map(|j| prod.get(s - 1 + j).copied().unwrap_or_else(|| ctx.zero()))
        .collect())
}

/// `qtr{a}_j = a(β^{[j]}) = Σ_i a_i β^{[i+j]}` for `j < s`, as a Toeplitz
/// product of the reversed coefficient vector with the conjugate ladder.
pub fn qt_forward(ctx: &FieldCtx, qt: &QTContext, a: &SkewPoly) -> Result<SkewPoly> {
    transform(ctx, qt, a, &qt.ladder)
}

/// Inverse transform `a_i = Σ_j qtr{a}_j (β^⊥)^{[j+i]}` via the dual ladder.
pub fn qt_inverse(ctx: &FieldCtx, qt: &QTContext, qa: &SkewPoly) -> Result<SkewPoly> {
    transform(ctx, qt, qa, &qt.dual_ladder)
}

fn transform(
    ctx: &FieldCtx,
    qt: &QTContext,
    a: &SkewPoly,
    ladder: &[FieldElement],
) -> Result<SkewPoly> {
    if !a.is_linearized(ctx) {
        return Err(Error::AutomorphismMismatch);
    }
    let s = qt.s;
    if a.deg_q() >= Some(s) {
        return Err(Error::DegreeTooLarge);
    }
    // v_i = a_{s−1−i}; then out_j = Σ_k a_k · ladder[k + j].
    let v: Vec<FieldElement> = (0..s).map(|i| a.coeff(ctx, s - 1 - i)).collect();
    let out = toeplitz_matvec(ctx, ladder, &v)?;
    Ok(SkewPoly::new(ctx, a.ell(), out))
}
