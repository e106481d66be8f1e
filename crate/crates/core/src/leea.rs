//! Right linearized extended Euclidean algorithm with a degree stopping
//! condition, the engine of both Gabidulin decoders.

use crate::error::{Error, Result};
use crate::fastmul::{sp_mul_fast, MatBackend};
use crate::field::FieldCtx;
use crate::skewpoly::SkewPoly;

/// Two consecutive rows of the Euclidean recurrence. Each row satisfies
/// `r = v·a + u·b` against the original inputs, with the cofactors
/// multiplying `a` and `b` from the left; remainder degrees decrease
/// strictly down the sequence.
#[derive(Debug, Clone)]
pub struct LeeaState {
    pub r_prev: SkewPoly,
    pub r_cur: SkewPoly,
    pub u_prev: SkewPoly,
    pub u_cur: SkewPoly,
    pub v_prev: SkewPoly,
    pub v_cur: SkewPoly,
}

impl LeeaState {
    fn init(ctx: &FieldCtx, a: &SkewPoly, b: &SkewPoly) -> Self {
        let ell = a.ell();
        LeeaState {
            r_prev: a.clone(),
            r_cur: b.clone(),
            u_prev: SkewPoly::zero(ctx, ell),
            u_cur: SkewPoly::one(ctx, ell),
            v_prev: SkewPoly::one(ctx, ell),
            v_cur: SkewPoly::zero(ctx, ell),
        }
    }

    /// One division step: `r_{i−2} = q·r_{i−1} + r_i` with cofactor updates
    /// `u_i = u_{i−2} − q·u_{i−1}` and likewise for `v`.
    fn step(&mut self, ctx: &FieldCtx, backend: &MatBackend) -> Result<()> {
        let (q, r_next) = self.r_prev.rdiv(&self.r_cur, ctx)?;
        let u_next = self.u_prev.sub(&sp_mul_fast(&q, &self.u_cur, ctx, backend)?, ctx);
        let v_next = self.v_prev.sub(&sp_mul_fast(&q, &self.v_cur, ctx, backend)?, ctx);
        self.r_prev = std::mem::replace(&mut self.r_cur, r_next);
        self.u_prev = std::mem::replace(&mut self.u_cur, u_next);
        self.v_prev = std::mem::replace(&mut self.v_cur, v_next);
        Ok(())
    }
}

/// Runs the remainder sequence of `(a, b)` with `deg_q b ≤ deg_q a` and
/// returns the first triple `(r, u, v)` whose remainder degree drops below
/// `d_stop`; the identity `r = v·a + u·b` holds exactly for the output.
pub fn right_leea(
    ctx: &FieldCtx,
    a: &SkewPoly,
    b: &SkewPoly,
    d_stop: i64,
) -> Result<(SkewPoly, SkewPoly, SkewPoly)> {
    if d_stop < 0 {
        return Err(Error::InvalidStop);
    }
    if a.is_zero() && b.is_zero() {
        return Err(Error::EmptyInput);
    }
    assert!(b.deg_q() <= a.deg_q(), "right_leea requires deg b ≤ deg a");
    let deg_a = a.deg_q().unwrap_or(0) as i64;
    let d_stop = d_stop.min(deg_a + 1) as usize;
    let ell = a.ell();
    if a.deg_q() < Some(d_stop) {
        return Ok((a.clone(), SkewPoly::zero(ctx, ell), SkewPoly::one(ctx, ell)));
    }
    if b.is_zero() {
        // deg a ≥ d_stop with nothing to divide by.
        return Err(Error::NoSolution);
    }
    let backend = MatBackend::strassen();
    let mut st = LeeaState::init(ctx, a, b);
    while st.r_cur.deg_q() >= Some(d_stop) {
        st.step(ctx, &backend)?;
        debug_assert_eq!(
            st.r_cur,
            st.v_cur.mul_naive(a, ctx).add(&st.u_cur.mul_naive(b, ctx), ctx),
            "Bezout identity violated"
        );
        debug_assert!(st.r_cur.deg_q() < st.r_prev.deg_q(), "degrees must decrease");
    }
    Ok((st.r_cur, st.u_cur, st.v_cur))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;
    use std::sync::OnceLock;

    fn f16() -> &'static FieldCtx {
        static CTX: OnceLock<FieldCtx> = OnceLock::new();
        CTX.get_or_init(|| FieldCtx::new(2, 4).unwrap())
    }

    fn random_poly(ctx: &FieldCtx, deg: usize, rng: &mut ChaCha12Rng) -> SkewPoly {
        loop {
            let coeffs: Vec<_> = (0..=deg).map(|_| ctx.random_element(rng)).collect();
            let p = SkewPoly::new(ctx, 1, coeffs);
            if p.deg_q() == Some(deg) {
                return p;
            }
        }
    }

    /// Runs the full remainder ladder and picks the first crossing triple.
    fn ladder_oracle(
        ctx: &FieldCtx,
        a: &SkewPoly,
        b: &SkewPoly,
        d_stop: usize,
    ) -> (SkewPoly, SkewPoly, SkewPoly) {
        let mut triples = vec![
            (a.clone(), SkewPoly::zero(ctx, 1), SkewPoly::one(ctx, 1)),
            (b.clone(), SkewPoly::one(ctx, 1), SkewPoly::zero(ctx, 1)),
        ];
        loop {
            let n = triples.len();
            let (r2, u2, v2) = triples[n - 2].clone();
            let (r1, u1, v1) = triples[n - 1].clone();
            if r1.is_zero() {
                break;
            }
            let (q, r) = r2.rdiv(&r1, ctx).unwrap();
            let u = u2.sub(&q.mul_naive(&u1, ctx), ctx);
            let v = v2.sub(&q.mul_naive(&v1, ctx), ctx);
            triples.push((r, u, v));
            if triples.last().unwrap().0.is_zero() {
                break;
            }
        }
        triples
            .into_iter()
            .find(|(r, _, _)| r.deg_q() < Some(d_stop))
            .expect("the ladder reaches remainder zero")
    }

    #[test]
    fn degenerate_zero_b() {
        let ctx = f16();
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        let a = random_poly(ctx, 3, &mut rng);
        let zero = SkewPoly::zero(ctx, 1);
        let (r, u, v) = right_leea(ctx, &a, &zero, 4).unwrap();
        assert_eq!(r, a);
        assert!(u.is_zero());
        assert_eq!(v, SkewPoly::one(ctx, 1));
        assert_eq!(right_leea(ctx, &a, &zero, 2).unwrap_err(), Error::NoSolution);
        assert_eq!(right_leea(ctx, &a, &zero, -1).unwrap_err(), Error::InvalidStop);
        assert_eq!(right_leea(ctx, &zero, &zero, 0).unwrap_err(), Error::EmptyInput);
    }

    #[test]
    fn exact_multiple_runs_to_zero() {
        let ctx = f16();
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        let q = random_poly(ctx, 3, &mut rng);
        let b = random_poly(ctx, 2, &mut rng);
        let a = q.mul_naive(&b, ctx);
        let (r, u, v) = right_leea(ctx, &a, &b, 0).unwrap();
        assert!(r.is_zero());
        // Only the identity pins the cofactors here.
        assert_eq!(
            r,
            v.mul_naive(&a, ctx).add(&u.mul_naive(&b, ctx), ctx)
        );
    }

    #[test]
    fn matches_full_ladder_oracle() {
        let ctx = f16();
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        for _ in 0..200 {
            let da = rng.gen_range(2..=8);
            let db = rng.gen_range(0..=da.min(5));
            let a = random_poly(ctx, da, &mut rng);
            let b = random_poly(ctx, db, &mut rng);
            let d_stop = rng.gen_range(0..=da as i64);
            let got = right_leea(ctx, &a, &b, d_stop).unwrap();
            let expect = ladder_oracle(ctx, &a, &b, d_stop as usize);
            assert_eq!(got, expect);
            // Postcondition identity.
            let (r, u, v) = got;
            assert_eq!(r, v.mul_naive(&a, ctx).add(&u.mul_naive(&b, ctx), ctx));
            assert!(r.deg_q() < Some(d_stop as usize));
        }
    }

    #[test]
    fn stop_crossing_from_spec_example() {
        let ctx = f16();
        let mut rng = ChaCha12Rng::seed_from_u64(4);
        let a = random_poly(ctx, 8, &mut rng);
        let b = random_poly(ctx, 5, &mut rng);
        let (r, u, v) = right_leea(ctx, &a, &b, 3).unwrap();
        assert!(r.deg_q() < Some(3));
        assert_eq!(r, v.mul_naive(&a, ctx).add(&u.mul_naive(&b, ctx), ctx));
        // The previous remainder in the ladder still had degree ≥ 3.
        let ladder = ladder_oracle(ctx, &a, &b, 3);
        assert_eq!(ladder.0, r);
    }

    #[test]
    fn cofactor_degree_ladder() {
        let ctx = f16();
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for _ in 0..50 {
            let a = random_poly(ctx, 7, &mut rng);
            let b = random_poly(ctx, rng.gen_range(1..=6), &mut rng);
            // Walk the ladder manually, checking deg u_i = deg a − deg r_{i−1}.
            let mut r_prev = a.clone();
            let mut r_cur = b.clone();
            let mut u_prev = SkewPoly::zero(ctx, 1);
            let mut u_cur = SkewPoly::one(ctx, 1);
            while !r_cur.is_zero() {
                let (q, r_next) = r_prev.rdiv(&r_cur, ctx).unwrap();
                let u_next = u_prev.sub(&q.mul_naive(&u_cur, ctx), ctx);
                if !u_next.is_zero() {
                    assert_eq!(
                        u_next.deg_q().unwrap() + r_cur.deg_q().unwrap(),
                        a.deg_q().unwrap()
                    );
                }
                r_prev = std::mem::replace(&mut r_cur, r_next);
                u_prev = std::mem::replace(&mut u_cur, u_next);
            }
        }
    }

    #[test]
    fn huge_stop_clamps_to_input_row() {
        let ctx = f16();
        let mut rng = ChaCha12Rng::seed_from_u64(6);
        let a = random_poly(ctx, 4, &mut rng);
        let b = random_poly(ctx, 2, &mut rng);
        let (r, u, v) = right_leea(ctx, &a, &b, 1000).unwrap();
        assert_eq!(r, a);
        assert!(u.is_zero());
        assert_eq!(v, SkewPoly::one(ctx, 1));
    }
}
