//! Arithmetic for linearized and skew polynomials over finite fields.
//!
//! The crate provides exact arithmetic in `F_{q^m}` (`q` prime), the skew
//! polynomial ring `F_{q^m}[x;σ]` with `σ` a power of the Frobenius,
//! fragmentation-based sub-quadratic multiplication, the q-transform and its
//! inverse via Toeplitz products, divide-and-conquer minimal subspace
//! polynomials, multi-point evaluation and interpolation, a linearized
//! extended Euclidean algorithm, and — on top of all of that — encoding and
//! error/erasure decoding of Gabidulin rank-metric codes.
//!
//! ```
//! use linpoly::{FieldCtx, SkewPoly};
//! use linpoly::gabidulin::{channel, decode_errors, GabidulinCode};
//!
//! let ctx = FieldCtx::new(2, 8)?;
//! let code = GabidulinCode::with_normal_basis(&ctx, 8, 3)?;
//! let f = SkewPoly::new(&ctx, 1, vec![
//!     ctx.from_value(9)?,
//!     ctx.zero(),
//!     ctx.from_value(200)?,
//! ]);
//! let word = code.encode(&ctx, &f)?;
//! // Two rank errors stay within the unique decoding radius of Gab[8,3].
//! let (received, _, _) = channel(&ctx, &word, 2, 0, 0, 7)?;
//! let result = decode_errors(&ctx, &code, &received)?;
//! assert_eq!(result.decoded(), Some(&f));
//! # Ok::<(), linpoly::Error>(())
//! ```

pub mod error;
pub mod fastmul;
pub mod field;
pub mod fq;
pub mod gabidulin;
pub mod interp;
pub mod leea;
pub mod matiso;
pub mod qtransform;
pub mod skewpoly;
pub mod subspace;

pub use error::{Error, Result};
pub use field::{FieldCtx, FieldElement};
pub use skewpoly::SkewPoly;
