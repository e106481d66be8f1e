//! Minimal subspace polynomials and multi-point evaluation by mutually
//! recursive divide-and-conquer.
//!
//! `msp(U)` returns the unique monic linearized polynomial whose kernel is
//! the `F_q`-span of `U`; its degree equals the rank of `U`. `mpe(a, U)`
//! evaluates `a` at every point of `U`. The two recursions call each other:
//! an MSP node multiplies the MSP of the image of one half under the MSP of
//! the other, an MPE node reduces `a` modulo the half MSPs and recurses on
//! the remainders.
//!
//! Every MSP node retains the MSP of its left half, and an MPE node passes
//! that polynomial down to the recursive call on the same half as a hint, so
//! the left-half MSP is computed once per node instead of twice.

use std::cell::Cell;

use crate::error::{Error, Result};
use crate::fastmul::{sp_mul_fast, MatBackend};
use crate::field::{FieldCtx, FieldElement};
use crate::skewpoly::SkewPoly;

/// MSP of a point set together with the memoized MSP of its left half.
#[derive(Debug, Clone)]
pub(crate) struct MspNode {
    pub(crate) poly: SkewPoly,
    pub(crate) left: Option<Box<MspNode>>,
}

#[derive(Debug, Default)]
pub(crate) struct CallCounters {
    /// `msp` computations requested by MPE nodes.
    pub(crate) msp_sites: Cell<u64>,
    /// MPE nodes that reused a caller-supplied MSP.
    pub(crate) hint_hits: Cell<u64>,
}

/// Rank over `F_q` of the coordinate matrix of the points.
pub fn fq_rank(ctx: &FieldCtx, points: &[FieldElement]) -> usize {
    if points.is_empty() {
        return 0;
    }
    let rows: Vec<Vec<u64>> = points.iter().map(|&p| ctx.coords(p)).collect();
    crate::fq::FqMat::from_rows(&rows, ctx.q()).rank()
}

fn mul_backend() -> MatBackend {
    MatBackend::strassen()
}

/// `x^{[1]} − u^{q−1}·x^{[0]}`, or `x^{[0]}` for `u = 0`.
fn msp_single(ctx: &FieldCtx, u: FieldElement) -> SkewPoly {
    if u.is_zero() {
        return SkewPoly::one(ctx, 1);
    }
    let uq1 = ctx
        .div(ctx.frobenius(u, 1), u)
        .expect("u is nonzero");
    SkewPoly::new(ctx, 1, vec![ctx.neg(uq1), ctx.one()])
}

pub(crate) fn msp_node(
    ctx: &FieldCtx,
    points: &[FieldElement],
    counters: Option<&CallCounters>,
) -> MspNode {
    if points.len() == 1 {
        return MspNode {
            poly: msp_single(ctx, points[0]),
            left: None,
        };
    }
    let (left_pts, right_pts) = points.split_at(points.len() / 2);
    let left_node = msp_node(ctx, left_pts, counters);
    let images = mpe_node(ctx, &left_node.poly, right_pts, None, true, counters);
    let image_node = msp_node(ctx, &images, counters);
    let poly = sp_mul_fast(&image_node.poly, &left_node.poly, ctx, &mul_backend())
        .expect("compatible operands");
    MspNode {
        poly,
        left: Some(Box::new(left_node)),
    }
}

pub(crate) fn mpe_node(
    ctx: &FieldCtx,
    a: &SkewPoly,
    points: &[FieldElement],
    hint: Option<&MspNode>,
    use_hints: bool,
    counters: Option<&CallCounters>,
) -> Vec<FieldElement> {
    if points.len() == 1 {
        // a_1 u^{[1]} + a_0 u^{[0]}; direct evaluation covers callers that
        // arrive above the nominal degree bound (the interpolation twist).
        return vec![a.eval_lin(points[0], ctx)];
    }
    let (left_pts, right_pts) = points.split_at(points.len() / 2);
    let left_owned;
    let (left_poly, left_hint) = match hint.filter(|_| use_hints) {
        Some(node) => {
            if let Some(c) = counters {
                c.hint_hits.set(c.hint_hits.get() + 1);
            }
            (&node.poly, node.left.as_deref())
        }
        None => {
            if let Some(c) = counters {
                c.msp_sites.set(c.msp_sites.get() + 1);
            }
            left_owned = msp_node(ctx, left_pts, counters);
            (&left_owned.poly, left_owned.left.as_deref())
        }
    };
    if let Some(c) = counters {
        c.msp_sites.set(c.msp_sites.get() + 1);
    }
    let right_node = msp_node(ctx, right_pts, counters);
    let rho_left = a.mod_right(left_poly, ctx).expect("MSPs are nonzero");
    let rho_right = a.mod_right(&right_node.poly, ctx).expect("MSPs are nonzero");
    let mut out = mpe_node(
        ctx,
        &rho_left,
        left_pts,
        left_hint.filter(|_| use_hints),
        use_hints,
        counters,
    );
    out.extend(mpe_node(
        ctx,
        &rho_right,
        right_pts,
        right_node.left.as_deref().filter(|_| use_hints),
        use_hints,
        counters,
    ));
    out
}

/// Minimal subspace polynomial of the span of `points`: the unique monic
/// linearized polynomial with `ker = ⟨points⟩` and `deg_q = dim ⟨points⟩`.
/// Zero entries and `F_q`-dependent entries are legal.
pub fn msp(ctx: &FieldCtx, points: &[FieldElement]) -> Result<SkewPoly> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(msp_node(ctx, points, None).poly)
}

/// Multi-point evaluation `[a(u_1), …, a(u_s)]` in input order.
///
/// Requires `deg_q a ≤ |points|`; `msp_hint`, when given, is used as the MSP
/// of the left half of `points`, saving its recomputation.
pub fn mpe(
    ctx: &FieldCtx,
    a: &SkewPoly,
    points: &[FieldElement],
    msp_hint: Option<&SkewPoly>,
) -> Result<Vec<FieldElement>> {
    if !a.is_linearized(ctx) {
        return Err(Error::AutomorphismMismatch);
    }
    if points.is_empty() {
        return Ok(vec![]);
    }
    if a.deg_q() > Some(points.len()) || (points.len() == 1 && a.deg_q() > Some(1)) {
        return Err(Error::DegreeTooLarge);
    }
    let hint_node = msp_hint.map(|p| MspNode {
        poly: p.clone(),
        left: None,
    });
    Ok(mpe_node(ctx, a, points, hint_node.as_ref(), true, None))
}

/// Multi-point evaluation without a degree bound: polynomials of degree at
/// least `|points|` are first reduced modulo `msp(points)`, which agrees with
/// them on the whole span.
pub fn mpe_general(ctx: &FieldCtx, a: &SkewPoly, points: &[FieldElement]) -> Result<Vec<FieldElement>> {
    if !a.is_linearized(ctx) {
        return Err(Error::AutomorphismMismatch);
    }
    if points.is_empty() {
        return Ok(vec![]);
    }
    let needs_reduction =
        a.deg_q() >= Some(points.len()) || (points.len() == 1 && a.deg_q() > Some(1));
    if !needs_reduction {
        return mpe(ctx, a, points, None);
    }
    let node = msp_node(ctx, points, None);
    let reduced = a.mod_right(&node.poly, ctx)?;
    Ok(mpe_node(ctx, &reduced, points, Some(&node), true, None))
}
