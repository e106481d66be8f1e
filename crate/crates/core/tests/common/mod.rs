//! Shared helpers and independent oracles for the integration tests.

use linpoly::field::{FieldCtx, FieldElement};
use linpoly::skewpoly::SkewPoly;
use linpoly::subspace::fq_rank;
use rand_chacha::ChaCha12Rng;

pub fn random_poly(ctx: &FieldCtx, ell: usize, deg: usize, rng: &mut ChaCha12Rng) -> SkewPoly {
    let coeffs = (0..=deg).map(|_| ctx.random_element(rng)).collect();
    SkewPoly::new(ctx, ell, coeffs)
}

pub fn independent_points(ctx: &FieldCtx, n: usize, rng: &mut ChaCha12Rng) -> Vec<FieldElement> {
    assert!(n <= ctx.m());
    loop {
        let pts: Vec<_> = (0..n).map(|_| ctx.random_element(rng)).collect();
        if fq_rank(ctx, &pts) == n {
            return pts;
        }
    }
}

/// Interpolation oracle: solves the linearized Vandermonde system
/// `Σ_j c_j x_i^{[j]} = y_i` by Gaussian elimination over `F_{q^m}`,
/// independent of the divide-and-conquer implementation.
pub fn gauss_interpolation(ctx: &FieldCtx, pairs: &[(FieldElement, FieldElement)]) -> SkewPoly {
    let s = pairs.len();
    let mut rows: Vec<Vec<FieldElement>> = pairs
        .iter()
        .map(|&(x, y)| {
            let mut row: Vec<FieldElement> = (0..s).map(|j| ctx.frobenius(x, j)).collect();
            row.push(y);
            row
        })
        .collect();
    for col in 0..s {
        let pivot = (col..s)
            .find(|&r| !rows[r][col].is_zero())
            .expect("independent abscissae give a regular system");
        rows.swap(col, pivot);
        let inv = ctx.inv(rows[col][col]).unwrap();
        for j in col..=s {
            rows[col][j] = ctx.mul(rows[col][j], inv);
        }
        for r in 0..s {
            if r != col && !rows[r][col].is_zero() {
                let f = rows[r][col];
                for j in col..=s {
                    let t = ctx.mul(f, rows[col][j]);
                    rows[r][j] = ctx.sub(rows[r][j], t);
                }
            }
        }
    }
    let coeffs = (0..s).map(|i| rows[i][s]).collect();
    SkewPoly::new(ctx, 1, coeffs)
}
