//! The monoid isomorphism between linearized polynomials of degree below `m`
//! under multiplication modulo `x^{[m]}−x` and `m×m` matrices over `F_q`
//! under composition, plus matrix-backed modular multiplication.

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};
use crate::fq::FqMat;
use crate::qtransform::{qt_forward, qt_inverse, QTContext};
use crate::skewpoly::SkewPoly;

/// Matrix of an `F_q`-linear map on `F_{q^m}`: column `j` holds the
/// coordinates, in the chosen basis, of the image of basis element `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinMap {
    mat: FqMat,
}

impl LinMap {
    pub fn from_matrix(mat: FqMat) -> Self {
        assert_eq!(mat.rows, mat.cols);
        LinMap { mat }
    }

    pub fn identity(ctx: &FieldCtx) -> Self {
        LinMap {
            mat: FqMat::identity(ctx.m(), ctx.q()),
        }
    }

    pub fn matrix(&self) -> &FqMat {
        &self.mat
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.mat.get(i, j)
    }

    pub fn compose(&self, other: &LinMap) -> Result<LinMap> {
        Ok(LinMap {
            mat: self.mat.mul(&other.mat)?,
        })
    }

    /// Row-major serialization of the entries.
    pub fn to_flat(&self) -> Vec<u64> {
        self.mat.entries().to_vec()
    }

    pub fn rows(&self) -> usize {
        self.mat.rows
    }

    pub fn from_flat(q: u64, m: usize, entries: &[u64]) -> Result<Self> {
        if entries.len() != m * m || entries.iter().any(|&e| e >= q) {
            return Err(Error::ShapeMismatch);
        }
        let mut mat = FqMat::zero(m, m, q);
        for i in 0..m {
            for j in 0..m {
                mat.set(i, j, entries[i * m + j]);
            }
        }
        Ok(LinMap { mat })
    }
}

impl serde::Serialize for LinMap {
    /// Row-major flat array of `F_q` integers.
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.mat.entries().serialize(serializer)
    }
}

#[derive(Debug)]
enum Route {
    /// The basis is the conjugate ladder of a normal element; `φ` is a
    /// q-transform with `s = m`.
    Normal(QTContext),
    /// Arbitrary basis: conjugate through the canonical normal ladder.
    General {
        via: Box<BasisCtx>,
        /// Takes coordinates in this basis to coordinates in the normal one.
        to_normal: FqMat,
        from_normal: FqMat,
    },
}

/// Conversion context for one basis; change-of-basis matrices are computed
/// once at construction.
#[derive(Debug)]
pub struct BasisCtx {
    basis: Vec<FieldElement>,
    p: FqMat,
    p_inv: FqMat,
    route: Route,
}

impl BasisCtx {
    pub fn new(ctx: &FieldCtx, basis: Vec<FieldElement>) -> Result<Self> {
        if basis.len() != ctx.m() {
            return Err(Error::ShapeMismatch);
        }
        let p = ctx.basis_matrix(&basis);
        let p_inv = p.inverse().map_err(|_| Error::SingularBasis)?;
        let is_ladder = basis
            .iter()
            .enumerate()
            .all(|(i, &b)| b == ctx.frobenius(basis[0], i));
        let route = if is_ladder {
            Route::Normal(QTContext::with_beta(ctx, ctx.m(), basis[0])?)
        } else {
            let via = Box::new(BasisCtx::canonical_normal(ctx)?);
            // T = P_{B'}^{-1} · P_B maps B-coordinates to B'-coordinates.
            let to_normal = via.p_inv.mul(&p)?;
            let from_normal = to_normal.inverse().map_err(|_| Error::SingularBasis)?;
            Route::General {
                via,
                to_normal,
                from_normal,
            }
        };
        Ok(BasisCtx {
            basis,
            p,
            p_inv,
            route,
        })
    }

    /// The conjugate ladder of the context's cached normal element.
    pub fn canonical_normal(ctx: &FieldCtx) -> Result<Self> {
        let beta = ctx.normal_element();
        let basis = (0..ctx.m()).map(|i| ctx.frobenius(beta, i)).collect();
        Self::new(ctx, basis)
    }

    pub fn basis(&self) -> &[FieldElement] {
        &self.basis
    }

    pub fn is_normal(&self) -> bool {
        matches!(self.route, Route::Normal(_))
    }

    fn coords_of(&self, ctx: &FieldCtx, x: FieldElement) -> Vec<u64> {
        self.p_inv.apply(&ctx.coords(x))
    }

    fn element_from(&self, ctx: &FieldCtx, coords: &[u64]) -> FieldElement {
        ctx.from_coords(&self.p.apply(coords))
            .expect("basis image coordinates are reduced")
    }
}

/// `φ_B(a)`: the matrix of the evaluation map of `a` in basis `B`.
/// Normal bases go through one q-transform; other bases conjugate the
/// normal-basis matrix with the cached change-of-basis matrices.
pub fn phi(ctx: &FieldCtx, bctx: &BasisCtx, a: &SkewPoly) -> Result<LinMap> {
    if !a.is_linearized(ctx) {
        return Err(Error::AutomorphismMismatch);
    }
    if a.deg_q() >= Some(ctx.m()) {
        return Err(Error::DegreeTooLarge);
    }
    match &bctx.route {
        Route::Normal(qt) => {
            let images = qt_forward(ctx, qt, a)?;
            let m = ctx.m();
            let mut mat = FqMat::zero(m, m, ctx.q());
            for j in 0..m {
                let col = bctx.coords_of(ctx, images.coeff(ctx, j));
                for (i, &c) in col.iter().enumerate() {
                    mat.set(i, j, c);
                }
            }
            Ok(LinMap { mat })
        }
        Route::General {
            via,
            to_normal,
            from_normal,
        } => {
            let normal_map = phi(ctx, via, a)?;
            let mat = from_normal.mul(&normal_map.mat)?.mul(to_normal)?;
            Ok(LinMap { mat })
        }
    }
}

/// `φ_B^{-1}(M)`: the unique polynomial of degree below `m` whose evaluation
/// map has matrix `M` in basis `B`; an inverse q-transform for normal `B`.
pub fn phi_inv(ctx: &FieldCtx, bctx: &BasisCtx, map: &LinMap) -> Result<SkewPoly> {
    if map.mat.rows != ctx.m() || map.mat.q != ctx.q() {
        return Err(Error::ShapeMismatch);
    }
    match &bctx.route {
        Route::Normal(qt) => {
            let m = ctx.m();
            let mut images = Vec::with_capacity(m);
            for j in 0..m {
                let col: Vec<u64> = (0..m).map(|i| map.mat.get(i, j)).collect();
                images.push(bctx.element_from(ctx, &col));
            }
            qt_inverse(ctx, qt, &SkewPoly::new(ctx, 1, images))
        }
        Route::General {
            via,
            to_normal,
            from_normal,
        } => {
            let normal_mat = to_normal.mul(&map.mat)?.mul(from_normal)?;
            phi_inv(ctx, via, &LinMap { mat: normal_mat })
        }
    }
}

/// `a·b mod (x^{[m]}−x)` computed as `φ_B^{-1}(φ_B(a)·φ_B(b))`.
pub fn mulmod_matrix(
    ctx: &FieldCtx,
    bctx: &BasisCtx,
    a: &SkewPoly,
    b: &SkewPoly,
) -> Result<SkewPoly> {
    let ma = phi(ctx, bctx, a)?;
    let mb = phi(ctx, bctx, b)?;
    phi_inv(ctx, bctx, &ma.compose(&mb)?)
}

/// Fragmentation wrapper for degrees at or above `m`: both factors split into
/// pieces of degree below `⌈m/2⌉`, piece products (degree `< m`, so the
/// modulus is inactive) run through [`mulmod_matrix`], and the recombination
/// wraps coefficient indices modulo `x^{[m]}−x`.
pub fn mulmod_matrix_frag(
    ctx: &FieldCtx,
    bctx: &BasisCtx,
    a: &SkewPoly,
    b: &SkewPoly,
) -> Result<SkewPoly> {
    if a.is_zero() || b.is_zero() {
        return Ok(SkewPoly::zero(ctx, a.ell()));
    }
    let m = ctx.m();
    let h = m.div_ceil(2).max(1);
    let frag = |p: &SkewPoly| -> Vec<SkewPoly> {
        let deg = p.deg_q().unwrap();
        (0..=deg / h)
            .map(|i| {
                let coeffs: Vec<FieldElement> = (0..h)
                    .map(|j| p.sigma_inv(ctx, p.coeff(ctx, i * h + j), i * h))
                    .collect();
                SkewPoly::new(ctx, p.ell(), coeffs)
            })
            .collect()
    };
    let a_frags = frag(a);
    let b_frags = frag(b);
    let mut acc = vec![ctx.zero(); m];
    for (i, fa) in a_frags.iter().enumerate() {
        for (k, fb) in b_frags.iter().enumerate() {
            // x^{[ih]}·fa·x^{[kh]}·fb = x^{[(i+k)h]}·(σ^{-kh} fa)·fb
            let twisted: Vec<FieldElement> = fa
                .coeffs()
                .iter()
                .map(|&c| fa.sigma_inv(ctx, c, k * h))
                .collect();
            let twisted = SkewPoly::new(ctx, fa.ell(), twisted);
            let prod = mulmod_matrix(ctx, bctx, &twisted, fb)?;
            let offset = (i + k) * h;
            for (j, &c) in prod.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let idx = (offset + j) % m;
                acc[idx] = ctx.add(acc[idx], prod.sigma(ctx, c, offset));
            }
        }
    }
    Ok(SkewPoly::new(ctx, a.ell(), acc))
}
