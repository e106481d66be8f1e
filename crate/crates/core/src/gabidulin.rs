//! Gabidulin rank-metric codes: evaluation encoding, error-only decoding up
//! to half the minimum rank distance, error–erasure decoding with row and
//! column side information, and a seeded channel for tests and experiments.
//!
//! Decoding follows the Gao pattern: interpolate the received word at the
//! code locators, run the right LEEA against the locator MSP (error-only) or
//! `x^{[m]}−x` (error–erasure) with the half-way stopping degree, and read
//! the message off a final division whose remainder must vanish.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fastmul::{sp_mul_fast, MatBackend};
use crate::field::{FieldCtx, FieldElement};
use crate::fq::FqMat;
use crate::interp::interpolate_unchecked;
use crate::leea::right_leea;
use crate::qtransform::{qt_forward, QTContext};
use crate::skewpoly::SkewPoly;
use crate::subspace::{fq_rank, mpe_general, msp};

/// A Gabidulin code `Gab[n, k]` over `F_{q^m}` with `k ≤ n ≤ m`, given by
/// `F_q`-independent locators `g_1..g_n`. MRD: the minimum rank distance is
/// `d = n − k + 1`.
#[derive(Debug, Clone)]
pub struct GabidulinCode {
    n: usize,
    k: usize,
    g: Vec<FieldElement>,
    /// MSP of the locator span, cached for the decoder.
    msp_g: SkewPoly,
    /// Set iff `g_i = β^{[i−1]}` for a normal element β.
    beta: Option<FieldElement>,
    /// Dual normal element of β; the error–erasure decoder expands the
    /// column directions over the dual ladder.
    beta_dual: Option<FieldElement>,
}

impl GabidulinCode {
    pub fn new(ctx: &FieldCtx, g: Vec<FieldElement>, k: usize) -> Result<Self> {
        let n = g.len();
        if n == 0 || k == 0 || k > n || n > ctx.m() {
            return Err(Error::ShapeMismatch);
        }
        let msp_g = msp(ctx, &g)?;
        if msp_g.deg_q() != Some(n) {
            return Err(Error::DependentAbscissae);
        }
        let ladder = g.iter().enumerate().all(|(i, &p)| p == ctx.frobenius(g[0], i));
        let beta = (ladder && n == ctx.m()).then_some(g[0]);
        let beta_dual = match beta {
            Some(b) => Some(ctx.dual_element(b)?),
            None => None,
        };
        Ok(GabidulinCode {
            n,
            k,
            g,
            msp_g,
            beta,
            beta_dual,
        })
    }

    /// Full-length code with locators `β^{[0]}, …, β^{[m−1]}`.
    pub fn with_normal_basis(ctx: &FieldCtx, n: usize, k: usize) -> Result<Self> {
        let beta = ctx.normal_element();
        let g = (0..n).map(|i| ctx.frobenius(beta, i)).collect();
        Self::new(ctx, g, k)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Minimum rank distance `n − k + 1`.
    pub fn d(&self) -> usize {
        self.n - self.k + 1
    }

    /// Unique decoding radius `⌊(d−1)/2⌋`.
    pub fn radius(&self) -> usize {
        (self.d() - 1) / 2
    }

    pub fn locators(&self) -> &[FieldElement] {
        &self.g
    }

    pub fn is_normal(&self) -> bool {
        self.beta.is_some()
    }

    /// Codeword `[f(g_1), …, f(g_n)]` for `deg_q f < k`, as one MPE.
    pub fn encode(&self, ctx: &FieldCtx, f: &SkewPoly) -> Result<Vec<FieldElement>> {
        if f.deg_q() >= Some(self.k) {
            return Err(Error::DegreeTooLarge);
        }
        mpe_general(ctx, f, &self.g)
    }

    /// Encoding through the q-transform; available when the locators form a
    /// normal basis of the full field, and identical to [`Self::encode`].
    pub fn encode_qt(&self, ctx: &FieldCtx, f: &SkewPoly) -> Result<Vec<FieldElement>> {
        let beta = self.beta.ok_or(Error::RequiresNormalBasis)?;
        if f.deg_q() >= Some(self.k) {
            return Err(Error::DegreeTooLarge);
        }
        let qt = QTContext::with_beta(ctx, ctx.m(), beta)?;
        let transformed = qt_forward(ctx, &qt, f)?;
        Ok((0..self.n).map(|j| transformed.coeff(ctx, j)).collect())
    }
}

/// Row-erasure values and column-erasure directions known to the decoder.
#[derive(Debug, Clone)]
pub struct ErasureInfo {
    /// `a^(R)`: the ρ known row-space values in `F_{q^m}`.
    pub a_r: Vec<FieldElement>,
    /// `B^(C)`: γ×n matrix over `F_q` of known column directions.
    pub b_c: FqMat,
}

impl ErasureInfo {
    pub fn none(ctx: &FieldCtx, n: usize) -> Self {
        ErasureInfo {
            a_r: vec![],
            b_c: FqMat::zero(0, n, ctx.q()),
        }
    }

    pub fn rho(&self) -> usize {
        self.a_r.len()
    }

    pub fn gamma(&self) -> usize {
        self.b_c.rows
    }

    pub fn repr(&self) -> ErasureInfoRepr {
        ErasureInfoRepr {
            a_r: self.a_r.iter().map(|x| x.value()).collect(),
            b_c: (0..self.b_c.rows).map(|i| self.b_c.row(i).to_vec()).collect(),
        }
    }

    pub fn from_repr(ctx: &FieldCtx, n: usize, repr: &ErasureInfoRepr) -> Result<Self> {
        let a_r = repr
            .a_r
            .iter()
            .map(|&v| ctx.from_value(v))
            .collect::<Result<Vec<_>>>()?;
        if repr.b_c.iter().any(|row| row.len() != n)
            || repr.b_c.iter().flatten().any(|&v| v >= ctx.q())
        {
            return Err(Error::ShapeMismatch);
        }
        let b_c = if repr.b_c.is_empty() {
            FqMat::zero(0, n, ctx.q())
        } else {
            FqMat::from_rows(&repr.b_c, ctx.q())
        };
        Ok(ErasureInfo { a_r, b_c })
    }
}

/// Serialization form: `{a_R, B_C}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErasureInfoRepr {
    #[serde(rename = "a_R")]
    pub a_r: Vec<u64>,
    #[serde(rename = "B_C")]
    pub b_c: Vec<Vec<u64>>,
}

/// Decoding outcome; `Failure` is a value, never a panic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeResult {
    Decoded {
        f: SkewPoly,
        /// Error span polynomial `u_out`, when the algorithm produces one.
        lambda: Option<SkewPoly>,
    },
    Failure,
}

impl DecodeResult {
    pub fn decoded(&self) -> Option<&SkewPoly> {
        match self {
            DecodeResult::Decoded { f, .. } => Some(f),
            DecodeResult::Failure => None,
        }
    }
}

/// Expansion of a word into the `m×n` coordinate matrix over `F_q`.
pub fn expand(ctx: &FieldCtx, word: &[FieldElement]) -> FqMat {
    let m = ctx.m();
    let mut out = FqMat::zero(m, word.len(), ctx.q());
    for (j, &x) in word.iter().enumerate() {
        for (i, &c) in ctx.coords(x).iter().enumerate() {
            out.set(i, j, c);
        }
    }
    out
}

/// Rank over `F_q` of the coordinate expansion; the rank weight.
pub fn rank_of_word(ctx: &FieldCtx, word: &[FieldElement]) -> usize {
    expand(ctx, word).rank()
}

fn word_sub(ctx: &FieldCtx, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    a.iter().zip(b).map(|(&x, &y)| ctx.sub(x, y)).collect()
}

fn mul_backend() -> MatBackend {
    MatBackend::strassen()
}

/// Error-only decoding up to `⌊(d−1)/2⌋` rank errors.
///
/// A returned polynomial always re-encodes to a word within the unique
/// decoding radius of `r`; anything else reports `Failure`.
pub fn decode_errors(ctx: &FieldCtx, code: &GabidulinCode, r: &[FieldElement]) -> Result<DecodeResult> {
    if r.len() != code.n {
        return Err(Error::ShapeMismatch);
    }
    let pairs: Vec<_> = code.g.iter().copied().zip(r.iter().copied()).collect();
    let r_hat = interpolate_unchecked(ctx, &pairs)?;
    let (r_out, u_out) = if r_hat.is_zero() {
        (SkewPoly::zero(ctx, 1), SkewPoly::one(ctx, 1))
    } else {
        let d_stop = ((code.n + code.k) / 2) as i64;
        let (r_out, u_out, _v_out) = right_leea(ctx, &code.msp_g, &r_hat, d_stop)?;
        (r_out, u_out)
    };
    if u_out.is_zero() {
        return Ok(DecodeResult::Failure);
    }
    let (quo_l, rem_l) = r_out.ldiv(&u_out, ctx)?;
    if !rem_l.is_zero() || quo_l.deg_q() >= Some(code.k) {
        return Ok(DecodeResult::Failure);
    }
    // Guard against miscorrection: the estimate must lie within the radius.
    let re_encoded = code.encode(ctx, &quo_l)?;
    if rank_of_word(ctx, &word_sub(ctx, r, &re_encoded)) > code.radius() {
        return Ok(DecodeResult::Failure);
    }
    Ok(DecodeResult::Decoded {
        f: quo_l,
        lambda: Some(u_out),
    })
}

/// Error–erasure decoding for full-length codes over a normal basis.
///
/// Succeeds whenever `2t + ρ + γ ≤ d − 1`, where `t` is the rank of the
/// residual error beyond the reported row and column erasures.
pub fn decode_error_erasure(
    ctx: &FieldCtx,
    code: &GabidulinCode,
    r: &[FieldElement],
    erasures: &ErasureInfo,
) -> Result<DecodeResult> {
    let beta_dual = code.beta_dual.ok_or(Error::RequiresNormalBasis)?;
    let m = ctx.m();
    debug_assert_eq!(code.n, m);
    if r.len() != code.n {
        return Err(Error::ShapeMismatch);
    }
    if erasures.b_c.cols != code.n || erasures.b_c.q != ctx.q() {
        return Err(Error::ShapeMismatch);
    }
    let rho = erasures.rho();
    let gamma = erasures.gamma();
    let backend = mul_backend();
    let xm = SkewPoly::monomial(ctx, 1, ctx.one(), m).sub(&SkewPoly::one(ctx, 1), ctx);
    let reduce = |p: &SkewPoly| -> Result<SkewPoly> { p.mod_right(&xm, ctx) };

    // d^(C)_i = Σ_j B^(C)_{i,j} (β^⊥)^{[j−1]}: the column directions expand
    // over the dual ladder, since the q-reverse of Γ acts as the trace
    // adjoint and must annihilate them after transposition.
    let col_values: Vec<FieldElement> = (0..gamma)
        .map(|i| {
            let mut acc = ctx.zero();
            for (j, &bij) in erasures.b_c.row(i).iter().enumerate() {
                if bij != 0 {
                    let scalar = ctx.from_value(bij).expect("entry below q");
                    acc = ctx.add(acc, ctx.mul(scalar, ctx.frobenius(beta_dual, j)));
                }
            }
            acc
        })
        .collect();
    let gamma_c = if gamma == 0 {
        SkewPoly::one(ctx, 1)
    } else {
        msp(ctx, &col_values)?
    };
    let lambda_r = if rho == 0 {
        SkewPoly::one(ctx, 1)
    } else {
        msp(ctx, &erasures.a_r)?
    };
    // Γ̄·x^{[γ]} mod (x^{[m]}−x) has degree exactly γ.
    let twist = reduce(&gamma_c.q_reverse(ctx).shift_up(gamma, ctx))?;

    let pairs: Vec<_> = code.g.iter().copied().zip(r.iter().copied()).collect();
    let r_hat = interpolate_unchecked(ctx, &pairs)?;
    let y_hat = reduce(&sp_mul_fast(&lambda_r, &r_hat, ctx, &backend)?)?;
    let y_hat = reduce(&sp_mul_fast(&y_hat, &twist, ctx, &backend)?)?;

    let (r_out, u_out) = if y_hat.is_zero() {
        (SkewPoly::zero(ctx, 1), SkewPoly::one(ctx, 1))
    } else {
        let d_stop = ((code.n + code.k + rho + gamma) / 2) as i64;
        let (r_out, u_out, _v_out) = right_leea(ctx, &xm, &y_hat, d_stop)?;
        (r_out, u_out)
    };
    let denom = sp_mul_fast(&u_out, &lambda_r, ctx, &backend)?;
    if denom.is_zero() {
        return Ok(DecodeResult::Failure);
    }
    let (quo_l, rem_l) = r_out.ldiv(&denom, ctx)?;
    if !rem_l.is_zero() {
        return Ok(DecodeResult::Failure);
    }
    let (quo_r, rem_r) = quo_l.rdiv(&twist, ctx)?;
    if !rem_r.is_zero() || quo_r.deg_q() >= Some(code.k) {
        return Ok(DecodeResult::Failure);
    }
    Ok(DecodeResult::Decoded {
        f: quo_r,
        lambda: None,
    })
}

/// Additive channel with `t` full errors, ρ row erasures and γ column
/// erasures: `e = Σ a^(R)_i b^(R)_i + Σ a^(C)_i b^(C)_i + Σ a^(E)_i b^(E)_i`
/// with each factor family drawn full-rank. The decoder-visible side
/// information (`a^(R)`, `B^(C)`) is returned along with the ground truth.
pub fn channel(
    ctx: &FieldCtx,
    codeword: &[FieldElement],
    t: usize,
    rho: usize,
    gamma: usize,
    seed: u64,
) -> Result<(Vec<FieldElement>, ErasureInfo, Vec<FieldElement>)> {
    let n = codeword.len();
    if t + rho + gamma > n {
        return Err(Error::RadiusInfeasible);
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut error = vec![ctx.zero(); n];
    let apply_outer = |rng: &mut ChaCha12Rng, count: usize, error: &mut Vec<FieldElement>| {
        let values = independent_elements(ctx, count, rng);
        let directions = independent_rows(ctx.q(), count, n, rng);
        for (a, b) in values.iter().zip(directions.iter()) {
            for (j, &c) in b.iter().enumerate() {
                if c != 0 {
                    let scalar = ctx.from_value(c).expect("entry below q");
                    error[j] = ctx.add(error[j], ctx.mul(scalar, *a));
                }
            }
        }
        (values, directions)
    };
    let (a_r, _b_r) = apply_outer(&mut rng, rho, &mut error);
    let (_a_c, b_c_rows) = apply_outer(&mut rng, gamma, &mut error);
    let (_a_e, _b_e) = apply_outer(&mut rng, t, &mut error);
    let received: Vec<FieldElement> = codeword
        .iter()
        .zip(error.iter())
        .map(|(&c, &e)| ctx.add(c, e))
        .collect();
    let b_c = if gamma == 0 {
        FqMat::zero(0, n, ctx.q())
    } else {
        FqMat::from_rows(&b_c_rows, ctx.q())
    };
    Ok((received, ErasureInfo { a_r, b_c }, error))
}

/// `count` elements of `F_{q^m}`, linearly independent over `F_q`.
fn independent_elements(ctx: &FieldCtx, count: usize, rng: &mut ChaCha12Rng) -> Vec<FieldElement> {
    assert!(count <= ctx.m());
    loop {
        let cand: Vec<_> = (0..count).map(|_| ctx.random_element(rng)).collect();
        if fq_rank(ctx, &cand) == count {
            return cand;
        }
    }
}

/// `count` independent vectors in `F_q^n`.
fn independent_rows(q: u64, count: usize, n: usize, rng: &mut ChaCha12Rng) -> Vec<Vec<u64>> {
    assert!(count <= n);
    if count == 0 {
        return vec![];
    }
    loop {
        let rows: Vec<Vec<u64>> = (0..count)
            .map(|_| (0..n).map(|_| rng.gen_range(0..q)).collect())
            .collect();
        if FqMat::from_rows(&rows, q).rank() == count {
            return rows;
        }
    }
}
