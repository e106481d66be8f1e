//! The skew polynomial ring `F_{q^m}[x;σ]` with `σ = Frobenius^ℓ` and zero
//! derivation. For `ℓ = 1` this is the ring of linearized polynomials under
//! composition, written in the `x^{[i]} = x^{q^i}` basis.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};

/// Skew polynomial with coefficients low-to-high; the zero polynomial stores
/// no coefficients and reports degree `None`, which orders below every
/// finite degree.
///
/// The automorphism exponent `ℓ` travels on the value itself, so linearized
/// (`ℓ = 1`) and generic skew polynomials cannot be mixed by accident.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewPoly {
    ctx_id: u32,
    ell: usize,
    coeffs: Vec<FieldElement>,
}

/// Serialization form: `{ell, coeffs}` with packed coefficient values.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SkewPolyRepr {
    pub ell: usize,
    pub coeffs: Vec<u64>,
}

impl SkewPoly {
    /// Wraps a coefficient sequence, trimming high zeros.
    pub fn new(ctx: &FieldCtx, ell: usize, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        for c in &coeffs {
            assert_eq!(c.ctx_id(), ctx.id(), "coefficient from a foreign context");
        }
        SkewPoly {
            ctx_id: ctx.id(),
            ell: ell % ctx.m(),
            coeffs,
        }
    }

    pub fn zero(ctx: &FieldCtx, ell: usize) -> Self {
        Self::new(ctx, ell, vec![])
    }

    /// The multiplicative identity `x^{[0]}`.
    pub fn one(ctx: &FieldCtx, ell: usize) -> Self {
        Self::new(ctx, ell, vec![ctx.one()])
    }

    /// `c·x^{[deg]}`.
    pub fn monomial(ctx: &FieldCtx, ell: usize, c: FieldElement, deg: usize) -> Self {
        let mut coeffs = vec![ctx.zero(); deg + 1];
        coeffs[deg] = c;
        Self::new(ctx, ell, coeffs)
    }

    pub fn from_repr(ctx: &FieldCtx, repr: &SkewPolyRepr) -> Result<Self> {
        let coeffs = repr
            .coeffs
            .iter()
            .map(|&v| ctx.from_value(v))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(ctx, repr.ell, coeffs))
    }

    pub fn repr(&self) -> SkewPolyRepr {
        SkewPolyRepr {
            ell: self.ell,
            coeffs: self.coeffs.iter().map(|c| c.value()).collect(),
        }
    }

    #[inline]
    pub fn ell(&self) -> usize {
        self.ell
    }

    #[inline]
    pub fn ctx_id(&self) -> u32 {
        self.ctx_id
    }

    /// `deg_q`; `None` encodes `−∞` and compares below every finite degree.
    #[inline]
    pub fn deg_q(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.value() == 1)
    }

    /// Whether `σ` is the plain Frobenius, i.e. the linearized case.
    pub fn is_linearized(&self, ctx: &FieldCtx) -> bool {
        self.ell == 1 % ctx.m()
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Coefficient of `x^{[i]}`, zero beyond the degree.
    pub fn coeff(&self, ctx: &FieldCtx, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or_else(|| ctx.zero())
    }

    fn lead(&self) -> FieldElement {
        *self.coeffs.last().expect("nonzero polynomial")
    }

    fn compat(&self, other: &SkewPoly) {
        assert_eq!(self.ctx_id, other.ctx_id, "polynomials from different contexts");
        assert_eq!(self.ell, other.ell, "polynomials over different automorphisms");
    }

    /// `σ^j` applied to one element, with `σ = Frobenius^ℓ`.
    #[inline]
    pub(crate) fn sigma(&self, ctx: &FieldCtx, x: FieldElement, j: usize) -> FieldElement {
        ctx.frobenius(x, (j * self.ell) % ctx.m())
    }

    /// `σ^{-j}` applied to one element.
    #[inline]
    pub(crate) fn sigma_inv(&self, ctx: &FieldCtx, x: FieldElement, j: usize) -> FieldElement {
        let m = ctx.m();
        ctx.frobenius(x, (m - (j * self.ell) % m) % m)
    }

    pub fn add(&self, other: &SkewPoly, ctx: &FieldCtx) -> SkewPoly {
        self.compat(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(ctx.add(self.coeff(ctx, i), other.coeff(ctx, i)));
        }
        SkewPoly::new(ctx, self.ell, coeffs)
    }

    pub fn sub(&self, other: &SkewPoly, ctx: &FieldCtx) -> SkewPoly {
        self.compat(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(ctx.sub(self.coeff(ctx, i), other.coeff(ctx, i)));
        }
        SkewPoly::new(ctx, self.ell, coeffs)
    }

    pub fn neg(&self, ctx: &FieldCtx) -> SkewPoly {
        let coeffs = self.coeffs.iter().map(|&c| ctx.neg(c)).collect();
        SkewPoly::new(ctx, self.ell, coeffs)
    }

    /// Left multiplication by a constant: `(c·x^{[0]}) · self`.
    pub fn scale_left(&self, c: FieldElement, ctx: &FieldCtx) -> SkewPoly {
        let coeffs = self.coeffs.iter().map(|&a| ctx.mul(c, a)).collect();
        SkewPoly::new(ctx, self.ell, coeffs)
    }

    /// Right multiplication by `x^{[k]}`, a pure coefficient shift.
    pub fn shift_up(&self, k: usize, ctx: &FieldCtx) -> SkewPoly {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut coeffs = vec![ctx.zero(); k];
        coeffs.extend_from_slice(&self.coeffs);
        SkewPoly::new(ctx, self.ell, coeffs)
    }

    /// Schoolbook product via `c_i = Σ_j a_j σ^j(b_{i−j})`.
    pub fn mul_naive(&self, other: &SkewPoly, ctx: &FieldCtx) -> SkewPoly {
        self.compat(other);
        if self.is_zero() || other.is_zero() {
            return SkewPoly::zero(ctx, self.ell);
        }
        let (da, db) = (self.coeffs.len(), other.coeffs.len());
        let mut coeffs = vec![ctx.zero(); da + db - 1];
        for (j, &aj) in self.coeffs.iter().enumerate() {
            for (k, &bk) in other.coeffs.iter().enumerate() {
                let term = ctx.mul(aj, self.sigma(ctx, bk, j));
                coeffs[j + k] = ctx.add(coeffs[j + k], term);
            }
        }
        SkewPoly::new(ctx, self.ell, coeffs)
    }

    /// Operator evaluation `a(α) = Σ a_i α^{[i]}`; linearized input only.
    pub fn evaluate(&self, alpha: FieldElement, ctx: &FieldCtx) -> Result<FieldElement> {
        if !self.is_linearized(ctx) {
            return Err(Error::AutomorphismMismatch);
        }
        Ok(self.eval_lin(alpha, ctx))
    }

    /// Unchecked linearized evaluation for internal callers.
    pub(crate) fn eval_lin(&self, alpha: FieldElement, ctx: &FieldCtx) -> FieldElement {
        let mut acc = ctx.zero();
        let mut pow = alpha;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                pow = ctx.frobenius(pow, 1);
            }
            if !c.is_zero() {
                acc = ctx.add(acc, ctx.mul(c, pow));
            }
        }
        acc
    }

    /// Right division: `self = quo·b + rem` with `deg_q rem < deg_q b`.
    pub fn rdiv(&self, b: &SkewPoly, ctx: &FieldCtx) -> Result<(SkewPoly, SkewPoly)> {
        self.compat(b);
        if b.is_zero() {
            return Err(Error::DivisionByZeroPoly);
        }
        let db = b.deg_q().unwrap();
        let bt = b.lead();
        let mut rem = self.clone();
        let quo_len = (self.coeffs.len()).saturating_sub(db);
        let mut quo = vec![ctx.zero(); quo_len];
        while rem.deg_q() >= Some(db) {
            let ds = rem.deg_q().unwrap();
            let shift = ds - db;
            // Eliminate the lead: subtract (rem_s / σ^{shift}(b_t)) x^{[shift]} · b.
            let c = ctx
                .div(rem.lead(), self.sigma(ctx, bt, shift))
                .expect("leading coefficient is nonzero");
            quo[shift] = c;
            for (i, &bi) in b.coeffs.iter().enumerate() {
                let t = ctx.mul(c, self.sigma(ctx, bi, shift));
                rem.coeffs[shift + i] = ctx.sub(rem.coeffs[shift + i], t);
            }
            while rem.coeffs.last().is_some_and(|c| c.is_zero()) {
                rem.coeffs.pop();
            }
        }
        Ok((SkewPoly::new(ctx, self.ell, quo), rem))
    }

    /// Left division: `self = b·quo + rem` with `deg_q rem < deg_q b`.
    pub fn ldiv(&self, b: &SkewPoly, ctx: &FieldCtx) -> Result<(SkewPoly, SkewPoly)> {
        self.compat(b);
        if b.is_zero() {
            return Err(Error::DivisionByZeroPoly);
        }
        let db = b.deg_q().unwrap();
        let bt = b.lead();
        let mut rem = self.clone();
        let quo_len = (self.coeffs.len()).saturating_sub(db);
        let mut quo = vec![ctx.zero(); quo_len];
        while rem.deg_q() >= Some(db) {
            let ds = rem.deg_q().unwrap();
            let shift = ds - db;
            // Subtract b · (σ^{-db}(rem_s / b_t)) x^{[shift]}.
            let c = self.sigma_inv(
                ctx,
                ctx.div(rem.lead(), bt).expect("leading coefficient is nonzero"),
                db,
            );
            quo[shift] = c;
            for (i, &bi) in b.coeffs.iter().enumerate() {
                let t = ctx.mul(bi, self.sigma(ctx, c, i));
                rem.coeffs[shift + i] = ctx.sub(rem.coeffs[shift + i], t);
            }
            while rem.coeffs.last().is_some_and(|c| c.is_zero()) {
                rem.coeffs.pop();
            }
        }
        Ok((SkewPoly::new(ctx, self.ell, quo), rem))
    }

    /// Remainder of the right division by `c`: the `mod` with
    /// `a ≡ b (mod c)` iff `a = b + d·c`.
    pub fn mod_right(&self, c: &SkewPoly, ctx: &FieldCtx) -> Result<SkewPoly> {
        Ok(self.rdiv(c, ctx)?.1)
    }

    /// The q-reverse `Γ̄_i = Γ_{(−i) mod m}^{[i]}` for `i = 0..m−1`.
    pub fn q_reverse(&self, ctx: &FieldCtx) -> SkewPoly {
        let m = ctx.m();
        assert!(self.is_linearized(ctx), "q-reverse is defined on linearized polynomials");
        assert!(self.deg_q() < Some(m), "degree must be below m");
        let mut coeffs = vec![ctx.zero(); m];
        for (i, slot) in coeffs.iter_mut().enumerate() {
            let src = (m - i) % m;
            *slot = ctx.frobenius(self.coeff(ctx, src), i);
        }
        SkewPoly::new(ctx, self.ell, coeffs)
    }
}

impl std::fmt::Display for SkewPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{}·x^[{}]", c.value(), i)?;
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;
    use std::sync::OnceLock;

    fn f4() -> &'static FieldCtx {
        static CTX: OnceLock<FieldCtx> = OnceLock::new();
        CTX.get_or_init(|| FieldCtx::new(2, 2).unwrap())
    }

    fn f16() -> &'static FieldCtx {
        static CTX: OnceLock<FieldCtx> = OnceLock::new();
        CTX.get_or_init(|| FieldCtx::new(2, 4).unwrap())
    }

    fn random_poly(ctx: &FieldCtx, ell: usize, deg: usize, rng: &mut ChaCha12Rng) -> SkewPoly {
        let coeffs = (0..=deg).map(|_| ctx.random_element(rng)).collect();
        SkewPoly::new(ctx, ell, coeffs)
    }

    #[test]
    fn addition_basics() {
        let ctx = f4();
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        let a = random_poly(ctx, 1, 4, &mut rng);
        let zero = SkewPoly::zero(ctx, 1);
        assert_eq!(a.add(&zero, ctx), a);
        assert_eq!(a.add(&a.neg(ctx), ctx), zero);
        // char 2: a + a = 0
        assert_eq!(a.add(&a, ctx), zero);
    }

    #[test]
    fn identity_element() {
        let ctx = f16();
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        let one = SkewPoly::one(ctx, 1);
        for _ in 0..10 {
            let b = random_poly(ctx, 1, 5, &mut rng);
            assert_eq!(one.mul_naive(&b, ctx), b);
            assert_eq!(b.mul_naive(&one, ctx), b);
        }
    }

    #[test]
    fn f4_products_do_not_commute() {
        let ctx = f4();
        let z = ctx.gen_z();
        let zx1 = SkewPoly::monomial(ctx, 1, z, 1);
        let zx0 = SkewPoly::monomial(ctx, 1, z, 0);
        // (z·x^[1]) · (z·x^[0]) = (z·z^2)·x^[1] = 1·x^[1]
        let left = zx1.mul_naive(&zx0, ctx);
        assert_eq!(left, SkewPoly::monomial(ctx, 1, ctx.one(), 1));
        // (z·x^[0]) · (z·x^[1]) = z^2·x^[1] = (z+1)·x^[1]
        let right = zx0.mul_naive(&zx1, ctx);
        assert_eq!(right, SkewPoly::monomial(ctx, 1, ctx.add(z, ctx.one()), 1));
        assert_ne!(left, right);
    }

    #[test]
    fn degree_law_and_associativity() {
        let ctx = f4();
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        for ell in [1usize, 2] {
            for _ in 0..50 {
                let a = random_poly(ctx, ell, rng.gen_range(0..5), &mut rng);
                let b = random_poly(ctx, ell, rng.gen_range(0..5), &mut rng);
                let c = random_poly(ctx, ell, rng.gen_range(0..5), &mut rng);
                if !a.is_zero() && !b.is_zero() {
                    assert_eq!(
                        a.mul_naive(&b, ctx).deg_q(),
                        Some(a.deg_q().unwrap() + b.deg_q().unwrap())
                    );
                }
                let ab_c = a.mul_naive(&b, ctx).mul_naive(&c, ctx);
                let a_bc = a.mul_naive(&b.mul_naive(&c, ctx), ctx);
                assert_eq!(ab_c, a_bc);
                let dist = a.add(&b, ctx).mul_naive(&c, ctx);
                assert_eq!(dist, a.mul_naive(&c, ctx).add(&b.mul_naive(&c, ctx), ctx));
            }
        }
    }

    #[test]
    fn division_identities() {
        let ctx = f16();
        let mut rng = ChaCha12Rng::seed_from_u64(4);
        for _ in 0..1000 {
            let ell = rng.gen_range(1..=4);
            let a = random_poly(ctx, ell, rng.gen_range(0..8), &mut rng);
            let b = random_poly(ctx, ell, rng.gen_range(0..6), &mut rng);
            if b.is_zero() {
                assert_eq!(a.rdiv(&b, ctx).unwrap_err(), Error::DivisionByZeroPoly);
                continue;
            }
            let (qr, rr) = a.rdiv(&b, ctx).unwrap();
            assert!(rr.deg_q() < b.deg_q());
            assert_eq!(qr.mul_naive(&b, ctx).add(&rr, ctx), a);
            let (ql, rl) = a.ldiv(&b, ctx).unwrap();
            assert!(rl.deg_q() < b.deg_q());
            assert_eq!(b.mul_naive(&ql, ctx).add(&rl, ctx), a);
        }
    }

    #[test]
    fn division_recovers_random_factors() {
        let ctx = f16();
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for _ in 0..200 {
            let q = random_poly(ctx, 1, rng.gen_range(0..4), &mut rng);
            let mut b = random_poly(ctx, 1, rng.gen_range(1..4), &mut rng);
            while b.is_zero() {
                b = random_poly(ctx, 1, 2, &mut rng);
            }
            let bound = b.deg_q().unwrap();
            let r = if bound == 0 {
                SkewPoly::zero(ctx, 1)
            } else {
                random_poly(ctx, 1, bound - 1, &mut rng)
            };
            let a = q.mul_naive(&b, ctx).add(&r, ctx);
            let (quo, rem) = a.rdiv(&b, ctx).unwrap();
            assert_eq!((quo, rem), (q.clone(), r.clone()));
            let a2 = b.mul_naive(&q, ctx).add(&r, ctx);
            let (quo, rem) = a2.ldiv(&b, ctx).unwrap();
            assert_eq!((quo, rem), (q, r));
        }
        let b = random_poly(ctx, 1, 3, &mut rng);
        assert_eq!(
            b.rdiv(&b, ctx).unwrap(),
            (SkewPoly::one(ctx, 1), SkewPoly::zero(ctx, 1))
        );
    }

    #[test]
    fn left_and_right_division_differ() {
        let ctx = f4();
        let z = ctx.gen_z();
        let a = SkewPoly::new(ctx, 1, vec![z, ctx.one(), z]);
        let b = SkewPoly::new(ctx, 1, vec![ctx.one(), z]);
        let (qr, _) = a.rdiv(&b, ctx).unwrap();
        let (ql, _) = a.ldiv(&b, ctx).unwrap();
        assert_ne!(qr, ql);
    }

    #[test]
    fn mod_right_properties() {
        let ctx = f16();
        let mut rng = ChaCha12Rng::seed_from_u64(6);
        let c = random_poly(ctx, 1, 3, &mut rng);
        assert!(c.mod_right(&c, ctx).unwrap().is_zero());
        let small = random_poly(ctx, 1, 2, &mut rng);
        assert_eq!(small.mod_right(&c, ctx).unwrap(), small);
        // Reduction modulo x^{[m]} − x preserves the evaluation map.
        let m = ctx.m();
        let xm = SkewPoly::monomial(ctx, 1, ctx.one(), m).sub(&SkewPoly::one(ctx, 1), ctx);
        let a = random_poly(ctx, 1, 6, &mut rng);
        let reduced = a.mod_right(&xm, ctx).unwrap();
        for x in ctx.all_elements() {
            assert_eq!(a.eval_lin(x, ctx), reduced.eval_lin(x, ctx));
        }
    }

    #[test]
    fn evaluation_examples() {
        let ctx = f16();
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let ident = SkewPoly::one(ctx, 1);
        for _ in 0..10 {
            let alpha = ctx.random_element(&mut rng);
            assert_eq!(ident.evaluate(alpha, ctx).unwrap(), alpha);
        }
        let a = random_poly(ctx, 1, 4, &mut rng);
        assert_eq!(a.evaluate(ctx.zero(), ctx).unwrap(), ctx.zero());
        // x^{[1]} − u^{q−1} x^{[0]} kills u.
        for _ in 0..20 {
            let u = ctx.random_element(&mut rng);
            if u.is_zero() {
                continue;
            }
            let uq1 = ctx.div(ctx.frobenius(u, 1), u).unwrap();
            let p = SkewPoly::new(ctx, 1, vec![ctx.neg(uq1), ctx.one()]);
            assert_eq!(p.evaluate(u, ctx).unwrap(), ctx.zero());
        }
        let skew = SkewPoly::monomial(ctx, 2, ctx.one(), 1);
        assert_eq!(
            skew.evaluate(ctx.one(), ctx).unwrap_err(),
            Error::AutomorphismMismatch
        );
    }

    #[test]
    fn evaluation_is_a_homomorphism_and_linear() {
        let ctx = f4();
        let mut rng = ChaCha12Rng::seed_from_u64(8);
        for _ in 0..100 {
            let a = random_poly(ctx, 1, rng.gen_range(0..4), &mut rng);
            let b = random_poly(ctx, 1, rng.gen_range(0..4), &mut rng);
            let alpha = ctx.random_element(&mut rng);
            let lhs = a.mul_naive(&b, ctx).eval_lin(alpha, ctx);
            assert_eq!(lhs, a.eval_lin(b.eval_lin(alpha, ctx), ctx));
            let beta = ctx.random_element(&mut rng);
            assert_eq!(
                a.eval_lin(ctx.add(alpha, beta), ctx),
                ctx.add(a.eval_lin(alpha, ctx), a.eval_lin(beta, ctx))
            );
        }
        // F_q-scaling with q = 3, where scalars beyond 0/1 exist.
        let ctx27 = FieldCtx::new(3, 3).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        for _ in 0..50 {
            let a = random_poly(&ctx27, 1, 3, &mut rng);
            let alpha = ctx27.random_element(&mut rng);
            for c in 0..3u64 {
                let ce = ctx27.from_value(c).unwrap();
                assert_eq!(
                    a.eval_lin(ctx27.mul(ce, alpha), &ctx27),
                    ctx27.mul(ce, a.eval_lin(alpha, &ctx27))
                );
            }
        }
    }

    #[test]
    fn q_reverse_cases() {
        let ctx = f4();
        let one = SkewPoly::one(ctx, 1);
        assert_eq!(one.q_reverse(ctx), one);
        // c·x^{[j]} reverses to c^{[m−j]}·x^{[m−j]} for j ≠ 0.
        let z = ctx.gen_z();
        let mono = SkewPoly::monomial(ctx, 1, z, 1);
        let rev = mono.q_reverse(ctx);
        assert_eq!(rev, SkewPoly::monomial(ctx, 1, ctx.frobenius(z, 1), 1));
        // Double application is the identity (m = 2, all polynomials of deg < 2).
        let mut rng = ChaCha12Rng::seed_from_u64(10);
        for _ in 0..100 {
            let g = random_poly(ctx, 1, 1, &mut rng);
            assert_eq!(g.q_reverse(ctx).q_reverse(ctx), g);
        }
    }

    #[test]
    fn repr_round_trip() {
        let ctx = f16();
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let a = random_poly(ctx, 1, 5, &mut rng);
        let repr = a.repr();
        assert_eq!(SkewPoly::from_repr(ctx, &repr).unwrap(), a);
        let bad = SkewPolyRepr { ell: 1, coeffs: vec![99] };
        assert!(SkewPoly::from_repr(ctx, &bad).is_err());
    }

    proptest::proptest! {
        #[test]
        fn division_reconstructs_arbitrary_inputs(
            a_vals in proptest::collection::vec(0u64..16, 0..10),
            b_vals in proptest::collection::vec(0u64..16, 1..8),
            ell in 1usize..=4,
        ) {
            let ctx = f16();
            let to_poly = |vals: &[u64]| {
                let coeffs = vals.iter().map(|&v| ctx.from_value(v).unwrap()).collect();
                SkewPoly::new(ctx, ell, coeffs)
            };
            let a = to_poly(&a_vals);
            let b = to_poly(&b_vals);
            if b.is_zero() {
                proptest::prop_assert!(a.rdiv(&b, ctx).is_err());
            } else {
                let (qr, rr) = a.rdiv(&b, ctx).unwrap();
                proptest::prop_assert!(rr.deg_q() < b.deg_q());
                proptest::prop_assert_eq!(qr.mul_naive(&b, ctx).add(&rr, ctx), a.clone());
                let (ql, rl) = a.ldiv(&b, ctx).unwrap();
                proptest::prop_assert_eq!(b.mul_naive(&ql, ctx).add(&rl, ctx), a);
            }
        }
    }
}
