//! Divide-and-conquer linearized interpolation.
//!
//! Given pairs `(x_i, y_i)` with `F_q`-independent abscissae, the unique
//! polynomial `I` of `deg_q I < s` with `I(x_i) = y_i` decomposes as
//! `I = I_1·M_B + I_2·M_A`, where `M_A`, `M_B` are the MSPs of the two halves
//! of the abscissae and `I_1`, `I_2` interpolate the halves at twisted
//! abscissae `M_B(x_i)` and `M_A(x_i)` respectively.

use crate::error::{Error, Result};
use crate::fastmul::{sp_mul_fast, MatBackend};
use crate::field::{FieldCtx, FieldElement};
use crate::skewpoly::SkewPoly;
use crate::subspace::{fq_rank, mpe_node, msp_node};

/// Interpolates the pairs, first verifying that the abscissae are
/// `F_q`-linearly independent (one extra MSP computation).
pub fn interpolate(ctx: &FieldCtx, pairs: &[(FieldElement, FieldElement)]) -> Result<SkewPoly> {
    if pairs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let xs: Vec<FieldElement> = pairs.iter().map(|p| p.0).collect();
    let node = msp_node(ctx, &xs, None);
    if node.poly.deg_q() != Some(pairs.len()) {
        return Err(Error::DependentAbscissae);
    }
    interpolate_unchecked(ctx, pairs)
}

/// Interpolation without the independence pre-check, for callers that
/// guarantee it (the decoders interpolate at fixed code locators).
pub fn interpolate_unchecked(
    ctx: &FieldCtx,
    pairs: &[(FieldElement, FieldElement)],
) -> Result<SkewPoly> {
    if pairs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let xs: Vec<FieldElement> = pairs.iter().map(|p| p.0).collect();
    let ys: Vec<FieldElement> = pairs.iter().map(|p| p.1).collect();
    interp_rec(ctx, &xs, &ys)
}

fn interp_rec(ctx: &FieldCtx, xs: &[FieldElement], ys: &[FieldElement]) -> Result<SkewPoly> {
    if xs.len() == 1 {
        let c = ctx.div(ys[0], xs[0]).map_err(|_| Error::DependentAbscissae)?;
        return Ok(SkewPoly::new(ctx, 1, vec![c]));
    }
    let mid = xs.len() / 2;
    let (xa, xb) = xs.split_at(mid);
    let (ya, yb) = ys.split_at(mid);
    let a_node = msp_node(ctx, xa, None);
    let b_node = msp_node(ctx, xb, None);
    let xa_t = mpe_node(ctx, &b_node.poly, xa, a_node.left.as_deref(), true, None);
    let xb_t = mpe_node(ctx, &a_node.poly, xb, b_node.left.as_deref(), true, None);
    debug_assert_eq!(fq_rank(ctx, &xa_t), xa.len(), "twisted abscissae lost rank");
    debug_assert_eq!(fq_rank(ctx, &xb_t), xb.len(), "twisted abscissae lost rank");
    let i1 = interp_rec(ctx, &xa_t, ya)?;
    let i2 = interp_rec(ctx, &xb_t, yb)?;
    let backend = MatBackend::strassen();
    let left = sp_mul_fast(&i1, &b_node.poly, ctx, &backend)?;
    let right = sp_mul_fast(&i2, &a_node.poly, ctx, &backend)?;
    Ok(left.add(&right, ctx))
}

/// True iff `deg_q I < s` and all `s` evaluations match.
pub fn check_interpolation(
    ctx: &FieldCtx,
    candidate: &SkewPoly,
    pairs: &[(FieldElement, FieldElement)],
) -> bool {
    if candidate.deg_q() >= Some(pairs.len()) {
        return false;
    }
    pairs
        .iter()
        .all(|&(x, y)| candidate.eval_lin(x, ctx) == y)
}
