//! Exact arithmetic in `F_q` (q prime) and its extension `F_{q^m}`.
//!
//! A [`FieldCtx`] fixes the pair `(q, m)`, a verified-irreducible modulus, and
//! precomputed Frobenius coordinate maps. Elements are stored in the
//! polynomial basis, packed as the integer `v = Σ coords[i]·q^i`; the normal
//! basis is exposed as a coordinate view on top of that canonical
//! representation. For small extensions the context additionally carries
//! discrete-log tables, which make multiplication, inversion and Frobenius
//! applications constant-time lookups.

use std::fmt;
use std::sync::atomic::{AtomicU32, AtomicU64, Ordering};
use std::sync::OnceLock;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fq::{self, FqMat};

/// Elements of extensions larger than this do not get lookup tables.
const TABLE_LIMIT: u128 = 1 << 16;
/// Default desk-scale bound on the extension degree.
pub const DEFAULT_MAX_M: usize = 64;
/// Randomized normal-element tries before the exhaustive fallback.
const NORMAL_SEARCH_TRIES: usize = 4096;

static NEXT_CTX_ID: AtomicU32 = AtomicU32::new(1);

/// One element of `F_{q^m}`, tied to its context by id.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct FieldElement {
    v: u64,
    ctx: u32,
}

impl FieldElement {
    /// Packed value `Σ coords[i]·q^i`, the serialization integer.
    #[inline]
    pub fn value(&self) -> u64 {
        self.v
    }

    #[inline]
    pub fn ctx_id(&self) -> u32 {
        self.ctx
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.v == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

/// Tally of field multiplications and additions performed through a context.
///
/// Frobenius applications, inversions and divisions are booked as
/// multiplications; additions, subtractions and negations as additions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct OpTally {
    pub muls: u64,
    pub adds: u64,
}

impl std::ops::Sub for OpTally {
    type Output = OpTally;
    fn sub(self, rhs: OpTally) -> OpTally {
        OpTally {
            muls: self.muls - rhs.muls,
            adds: self.adds - rhs.adds,
        }
    }
}

impl std::ops::Add for OpTally {
    type Output = OpTally;
    fn add(self, rhs: OpTally) -> OpTally {
        OpTally {
            muls: self.muls + rhs.muls,
            adds: self.adds + rhs.adds,
        }
    }
}

#[derive(Debug, Default)]
pub struct OpCounter {
    muls: AtomicU64,
    adds: AtomicU64,
}

impl OpCounter {
    #[inline]
    pub(crate) fn mul(&self) {
        self.muls.fetch_add(1, Ordering::Relaxed);
    }

    #[inline]
    pub(crate) fn add(&self) {
        self.adds.fetch_add(1, Ordering::Relaxed);
    }

    pub fn tally(&self) -> OpTally {
        OpTally {
            muls: self.muls.load(Ordering::Relaxed),
            adds: self.adds.load(Ordering::Relaxed),
        }
    }
}

struct LogTables {
    /// `exp[i] = g^i` for `i < 2(N-1)`, so sums of two logs need no reduction.
    exp: Vec<u64>,
    /// `log[v]` for `v > 0`.
    log: Vec<u32>,
    /// `frob[l][v] = v^{q^l}`.
    frob: Vec<Vec<u64>>,
}

/// Supported arithmetic operations for [`FieldCtx::fe_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeOp {
    Add,
    Sub,
    Mul,
    Div,
    Inv,
    Neg,
}

/// Construction options; `max_m` overrides the desk-scale bound.
#[derive(Debug, Clone, Copy)]
pub struct FieldOptions {
    pub max_m: usize,
}

impl Default for FieldOptions {
    fn default() -> Self {
        FieldOptions { max_m: DEFAULT_MAX_M }
    }
}

/// The arithmetic environment for `F_{q^m}`.
///
/// Immutable after construction; all operations take `&self` and are safe to
/// call concurrently.
pub struct FieldCtx {
    id: u32,
    q: u64,
    m: usize,
    /// Monic irreducible modulus, `m + 1` digits, low index = constant term.
    modulus: Vec<u64>,
    order: u128,
    frob_tables: Vec<FqMat>,
    tables: Option<LogTables>,
    counter: OpCounter,
    normal: OnceLock<(FieldElement, FieldElement)>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("q", &self.q)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .finish()
    }
}

/// Construction parameters of a context, the `{q, m, modulus}` wire form.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldParams {
    pub q: u64,
    pub m: usize,
    pub modulus: Vec<u64>,
}

impl FieldCtx {
    /// Builds `F_{q^m}` with a deterministically scanned irreducible modulus.
    pub fn new(q: u64, m: usize) -> Result<Self> {
        Self::with_options(q, m, None, FieldOptions::default())
    }

    /// Builds `F_{q^m}` with the given modulus digits (length `m + 1`, monic).
    pub fn with_modulus(q: u64, m: usize, modulus: &[u64]) -> Result<Self> {
        Self::with_options(q, m, Some(modulus), FieldOptions::default())
    }

    pub fn with_options(
        q: u64,
        m: usize,
        modulus: Option<&[u64]>,
        opts: FieldOptions,
    ) -> Result<Self> {
        if !(2..1 << 15).contains(&q) || !fq::is_prime(q) {
            return Err(Error::NonPrimeQ { q });
        }
        if m == 0 || m > opts.max_m {
            return Err(Error::ExtensionTooLarge { q, m });
        }
        let order = (q as u128)
            .checked_pow(m as u32)
            .filter(|&n| n <= u64::MAX as u128 + 1)
            .ok_or(Error::ExtensionTooLarge { q, m })?;

        let modulus = match modulus {
            Some(digits) => {
                if digits.len() != m + 1
                    || digits[m] != 1
                    || digits.iter().any(|&d| d >= q)
                {
                    return Err(Error::InvalidModulus);
                }
                if !is_irreducible(q, digits) {
                    return Err(Error::ReducibleModulus);
                }
                digits.to_vec()
            }
            None => scan_irreducible(q, m)?,
        };

        let frob_tables = build_frob_tables(q, m, &modulus);
        let mut ctx = FieldCtx {
            id: NEXT_CTX_ID.fetch_add(1, Ordering::Relaxed),
            q,
            m,
            modulus,
            order,
            frob_tables,
            tables: None,
            counter: OpCounter::default(),
            normal: OnceLock::new(),
        };
        if order <= TABLE_LIMIT {
            ctx.tables = Some(ctx.build_log_tables());
        }
        Ok(ctx)
    }

    pub fn from_params(params: &FieldParams) -> Result<Self> {
        Self::with_modulus(params.q, params.m, &params.modulus)
    }

    pub fn params(&self) -> FieldParams {
        FieldParams {
            q: self.q,
            m: self.m,
            modulus: self.modulus.clone(),
        }
    }

    #[inline]
    pub fn q(&self) -> u64 {
        self.q
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn id(&self) -> u32 {
        self.id
    }

    /// Field size `q^m` as `u128`.
    pub fn order(&self) -> u128 {
        self.order
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Snapshot of the operation counters.
    pub fn op_tally(&self) -> OpTally {
        self.counter.tally()
    }

    // ----- element construction ---------------------------------------

    #[inline]
    fn fe(&self, v: u64) -> FieldElement {
        FieldElement { v, ctx: self.id }
    }

    pub fn zero(&self) -> FieldElement {
        self.fe(0)
    }

    pub fn one(&self) -> FieldElement {
        self.fe(1)
    }

    /// The class of the indeterminate `z` of the polynomial basis.
    pub fn gen_z(&self) -> FieldElement {
        if self.m == 1 {
            self.fe(fq::sub_mod(0, self.modulus[0], self.q))
        } else {
            self.fe(self.q)
        }
    }

    pub fn from_value(&self, v: u64) -> Result<FieldElement> {
        if (v as u128) < self.order {
            Ok(self.fe(v))
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn from_coords(&self, coords: &[u64]) -> Result<FieldElement> {
        if coords.len() != self.m || coords.iter().any(|&c| c >= self.q) {
            return Err(Error::ShapeMismatch);
        }
        let mut v = 0u64;
        for &c in coords.iter().rev() {
            v = v * self.q + c;
        }
        Ok(self.fe(v))
    }

    /// Polynomial-basis coordinates, low index = constant term.
    pub fn coords(&self, x: FieldElement) -> Vec<u64> {
        self.check(x);
        let mut out = vec![0u64; self.m];
        self.unpack(x.v, &mut out);
        out
    }

    fn unpack(&self, mut v: u64, out: &mut [u64]) {
        if self.q == 2 {
            for (i, slot) in out.iter_mut().enumerate() {
                *slot = (v >> i) & 1;
            }
        } else {
            for slot in out.iter_mut() {
                *slot = v % self.q;
                v /= self.q;
            }
        }
    }

    fn pack(&self, coords: &[u64]) -> u64 {
        let mut v = 0u64;
        for &c in coords.iter().rev() {
            v = v * self.q + c;
        }
        v
    }

    pub fn random_element<R: RngCore>(&self, rng: &mut R) -> FieldElement {
        if self.order == u64::MAX as u128 + 1 {
            self.fe(rng.next_u64())
        } else {
            self.fe(rng.gen_range(0..self.order as u64))
        }
    }

    /// Iterates every element; only sensible for small orders.
    pub fn all_elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        assert!(self.order <= 1 << 24, "field too large to enumerate");
        (0..self.order as u64).map(move |v| self.fe(v))
    }

    #[inline]
    fn check(&self, x: FieldElement) {
        assert_eq!(x.ctx, self.id, "field element from a foreign context");
    }

    // ----- arithmetic ---------------------------------------------------

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        self.counter.add();
        if self.q == 2 {
            return self.fe(a.v ^ b.v);
        }
        let mut ca = [0u64; DEFAULT_MAX_M];
        let mut cb = [0u64; DEFAULT_MAX_M];
        let (ca, cb) = (&mut ca[..self.m], &mut cb[..self.m]);
        self.unpack(a.v, ca);
        self.unpack(b.v, cb);
        for i in 0..self.m {
            ca[i] = fq::add_mod(ca[i], cb[i], self.q);
        }
        self.fe(self.pack(ca))
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        self.counter.add();
        if self.q == 2 {
            return self.fe(a.v ^ b.v);
        }
        let mut ca = [0u64; DEFAULT_MAX_M];
        let mut cb = [0u64; DEFAULT_MAX_M];
        let (ca, cb) = (&mut ca[..self.m], &mut cb[..self.m]);
        self.unpack(a.v, ca);
        self.unpack(b.v, cb);
        for i in 0..self.m {
            ca[i] = fq::sub_mod(ca[i], cb[i], self.q);
        }
        self.fe(self.pack(ca))
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.check(a);
        self.counter.add();
        if self.q == 2 {
            return a;
        }
        let mut ca = [0u64; DEFAULT_MAX_M];
        let ca = &mut ca[..self.m];
        self.unpack(a.v, ca);
        for c in ca.iter_mut() {
            *c = fq::sub_mod(0, *c, self.q);
        }
        self.fe(self.pack(ca))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        self.counter.mul();
        if let Some(t) = &self.tables {
            if a.v == 0 || b.v == 0 {
                return self.fe(0);
            }
            return self.fe(t.exp[(t.log[a.v as usize] + t.log[b.v as usize]) as usize]);
        }
        self.mul_generic(a.v, b.v)
    }

    fn mul_generic(&self, a: u64, b: u64) -> FieldElement {
        let m = self.m;
        let q = self.q;
        let mut ca = [0u64; DEFAULT_MAX_M];
        let mut cb = [0u64; DEFAULT_MAX_M];
        self.unpack(a, &mut ca[..m]);
        self.unpack(b, &mut cb[..m]);
        let mut buf = [0u64; 2 * DEFAULT_MAX_M];
        for i in 0..m {
            if ca[i] == 0 {
                continue;
            }
            for j in 0..m {
                buf[i + j] += ca[i] * cb[j];
            }
        }
        for v in buf[..2 * m - 1].iter_mut() {
            *v %= q;
        }
        for i in (m..2 * m - 1).rev() {
            let c = buf[i];
            if c == 0 {
                continue;
            }
            let f = q - c;
            for j in 0..m {
                buf[i - m + j] = (buf[i - m + j] + f * self.modulus[j]) % q;
            }
        }
        self.fe(self.pack(&buf[..m]))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        self.check(a);
        if a.v == 0 {
            return Err(Error::DivisionByZero);
        }
        self.counter.mul();
        if let Some(t) = &self.tables {
            let n = self.order as u64 - 1;
            return Ok(self.fe(t.exp[(n - t.log[a.v as usize] as u64) as usize]));
        }
        Ok(self.inv_generic(a.v))
    }

    fn inv_generic(&self, a: u64) -> FieldElement {
        // Extended Euclid over F_q[z] against the modulus.
        let q = self.q;
        let mut r0 = self.modulus.clone();
        let mut r1 = vec![0u64; self.m];
        self.unpack(a, &mut r1);
        poly_trim(&mut r1);
        let mut t0: Vec<u64> = vec![];
        let mut t1: Vec<u64> = vec![1];
        while !r1.is_empty() {
            let (quo, rem) = poly_divrem(&r0, &r1, q);
            let t2 = poly_sub(&t0, &poly_mul(&quo, &t1, q), q);
            r0 = std::mem::replace(&mut r1, rem);
            t0 = std::mem::replace(&mut t1, t2);
        }
        debug_assert_eq!(r0.len(), 1, "modulus and element are not coprime");
        let scale = fq::inv_mod(r0[0], q);
        let mut coords = vec![0u64; self.m];
        for (i, &c) in t0.iter().enumerate() {
            coords[i] = c * scale % q;
        }
        self.fe(self.pack(&coords))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        let bi = self.inv(b)?;
        Ok(self.mul(a, bi))
    }

    /// `x^{q^l}` through the precomputed coordinate maps.
    pub fn frobenius(&self, x: FieldElement, l: usize) -> FieldElement {
        self.check(x);
        let l = l % self.m;
        if l == 0 {
            return x;
        }
        self.counter.mul();
        if let Some(t) = &self.tables {
            return self.fe(t.frob[l][x.v as usize]);
        }
        let mut coords = vec![0u64; self.m];
        self.unpack(x.v, &mut coords);
        let mapped = self.frob_tables[l].apply(&coords);
        self.fe(self.pack(&mapped))
    }

    /// Checked dispatcher over the elementary operations.
    pub fn fe_arith(
        &self,
        op: FeOp,
        x: FieldElement,
        y: Option<FieldElement>,
    ) -> Result<FieldElement> {
        if x.ctx != self.id || y.is_some_and(|y| y.ctx != self.id) {
            return Err(Error::ContextMismatch);
        }
        let binary = |y: Option<FieldElement>| y.ok_or(Error::ContextMismatch);
        match op {
            FeOp::Add => Ok(self.add(x, binary(y)?)),
            FeOp::Sub => Ok(self.sub(x, binary(y)?)),
            FeOp::Mul => Ok(self.mul(x, binary(y)?)),
            FeOp::Div => self.div(x, binary(y)?),
            FeOp::Inv => self.inv(x),
            FeOp::Neg => Ok(self.neg(x)),
        }
    }

    // ----- basis machinery ----------------------------------------------

    /// `Tr(x) = Σ x^{[i]}`, always an element of the prime subfield.
    pub fn trace(&self, x: FieldElement) -> FieldElement {
        let mut acc = x;
        for i in 1..self.m {
            acc = self.add(acc, self.frobenius(x, i));
        }
        acc
    }

    /// Whether the conjugates of `x` form a basis of `F_{q^m}` over `F_q`.
    pub fn is_normal(&self, x: FieldElement) -> bool {
        self.conjugate_matrix(x, self.m).rank() == self.m
    }

    /// Rows `i` = coordinates of `x^{[i]}`, for `i < count`.
    pub(crate) fn conjugate_matrix(&self, x: FieldElement, count: usize) -> FqMat {
        let mut rows = Vec::with_capacity(count);
        for i in 0..count {
            rows.push(self.coords(self.frobenius(x, i)));
        }
        FqMat::from_rows(&rows, self.q)
    }

    /// A normal element, found by seeded sampling with exhaustive fallback.
    pub fn normal_element(&self) -> FieldElement {
        self.normal_pair().0
    }

    /// The dual normal element paired with [`FieldCtx::normal_element`].
    pub fn dual_normal_element(&self) -> FieldElement {
        self.normal_pair().1
    }

    fn normal_pair(&self) -> (FieldElement, FieldElement) {
        *self.normal.get_or_init(|| {
            let beta = self.find_normal_element();
            let dual = self
                .dual_element(beta)
                .expect("normal element has a dual basis");
            (beta, dual)
        })
    }

    fn find_normal_element(&self) -> FieldElement {
        if self.m == 1 {
            return self.one();
        }
        let mut rng = ChaCha12Rng::seed_from_u64(0x6e6f726d);
        for _ in 0..NORMAL_SEARCH_TRIES {
            let x = self.random_element(&mut rng);
            if !x.is_zero() && self.is_normal(x) {
                return x;
            }
        }
        for v in 1..self.order as u64 {
            let x = self.fe(v);
            if self.is_normal(x) {
                return x;
            }
        }
        unreachable!("every finite extension has a normal basis");
    }

    /// The unique `β^⊥` with `Tr(β^{[i]}·(β^⊥)^{[j]}) = δ_{ij}`.
    ///
    /// Computed by inverting the Gram matrix `T_{ij} = Tr(β^{[i]} β^{[j]})`
    /// over `F_q`; a singular Gram matrix means `β` is not normal.
    pub fn dual_element(&self, beta: FieldElement) -> Result<FieldElement> {
        self.dual_in_subfield(beta, self.m)
    }

    /// Dual of `β` inside the subfield `F_{q^s}`, w.r.t. the subfield trace.
    pub(crate) fn dual_in_subfield(&self, beta: FieldElement, s: usize) -> Result<FieldElement> {
        self.check(beta);
        let subtrace = |x: FieldElement| -> u64 {
            let mut acc = x;
            for i in 1..s {
                acc = self.add(acc, self.frobenius(x, i));
            }
            let coords = self.coords(acc);
            debug_assert!(coords[1..].iter().all(|&c| c == 0), "subfield trace must land in F_q");
            coords[0]
        };
        let conj: Vec<FieldElement> = (0..s).map(|i| self.frobenius(beta, i)).collect();
        let mut gram = FqMat::zero(s, s, self.q);
        for i in 0..s {
            for j in i..s {
                let t = subtrace(self.mul(conj[i], conj[j]));
                gram.set(i, j, t);
                gram.set(j, i, t);
            }
        }
        let mut e0 = vec![0u64; s];
        e0[0] = 1;
        let coeffs = gram.solve(&e0).map_err(|_| Error::NotNormal)?;
        let mut dual = self.zero();
        for (c, &b) in coeffs.iter().zip(conj.iter()) {
            if *c != 0 {
                dual = self.add(dual, self.mul(self.fe(*c), b));
            }
        }
        Ok(dual)
    }

    /// Coordinates of `x` in an arbitrary basis.
    pub fn coords_in_basis(&self, x: FieldElement, basis: &[FieldElement]) -> Result<Vec<u64>> {
        if basis.len() != self.m {
            return Err(Error::ShapeMismatch);
        }
        let p = self.basis_matrix(basis);
        let p_inv = p.inverse().map_err(|_| Error::SingularBasis)?;
        Ok(p_inv.apply(&self.coords(x)))
    }

    /// Inverse of [`FieldCtx::coords_in_basis`].
    pub fn from_coords_in_basis(&self, coords: &[u64], basis: &[FieldElement]) -> Result<FieldElement> {
        if basis.len() != self.m || coords.len() != self.m {
            return Err(Error::ShapeMismatch);
        }
        let mut acc = self.zero();
        for (&c, &b) in coords.iter().zip(basis.iter()) {
            if c != 0 {
                acc = self.add(acc, self.mul(self.fe(c % self.q), b));
            }
        }
        Ok(acc)
    }

    /// Columns `j` = polynomial-basis coordinates of `basis[j]`.
    pub(crate) fn basis_matrix(&self, basis: &[FieldElement]) -> FqMat {
        let mut p = FqMat::zero(self.m, basis.len(), self.q);
        for (j, &b) in basis.iter().enumerate() {
            self.check(b);
            for (i, &c) in self.coords(b).iter().enumerate() {
                p.set(i, j, c);
            }
        }
        p
    }

    // ----- table construction -------------------------------------------

    fn build_log_tables(&self) -> LogTables {
        let n = self.order as u64;
        let group = (n - 1) as usize;
        let mut exp = vec![0u64; group.max(1) * 2];
        let mut log = vec![0u32; n as usize];
        'candidates: for g in 2..n.max(3) {
            let g = if n == 2 { 1 } else { g };
            let mut acc = 1u64;
            for i in 0..group {
                exp[i] = acc;
                log[acc as usize] = i as u32;
                acc = self.mul_generic(acc, g).v;
                if acc == 1 && i + 1 < group {
                    continue 'candidates;
                }
            }
            debug_assert_eq!(acc, 1);
            for i in 0..group {
                exp[group + i] = exp[i];
            }
            let mut frob = Vec::with_capacity(self.m);
            for l in 0..self.m {
                let ql = fq::pow_mod(self.q % (group.max(1) as u64), l as u64, group.max(1) as u64);
                let mut t = vec![0u64; n as usize];
                for v in 1..n {
                    t[v as usize] = exp[(log[v as usize] as u64 * ql % group.max(1) as u64) as usize];
                }
                frob.push(t);
            }
            return LogTables { exp, log, frob };
        }
        unreachable!("the multiplicative group of a finite field is cyclic");
    }
}

// ----- dense polynomial helpers over F_q (for the modulus machinery) ------

fn poly_trim(p: &mut Vec<u64>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

fn poly_sub(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, slot) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *slot = fq::sub_mod(x, y, q);
    }
    poly_trim(&mut out);
    out
}

fn poly_mul(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % q;
        }
    }
    poly_trim(&mut out);
    out
}

fn poly_divrem(a: &[u64], b: &[u64], q: u64) -> (Vec<u64>, Vec<u64>) {
    assert!(!b.is_empty());
    let mut rem = a.to_vec();
    poly_trim(&mut rem);
    if rem.len() < b.len() {
        return (vec![], rem);
    }
    let mut quo = vec![0u64; rem.len() - b.len() + 1];
    let lead_inv = fq::inv_mod(*b.last().unwrap(), q);
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = rem.last().unwrap() * lead_inv % q;
        quo[shift] = c;
        for (j, &bj) in b.iter().enumerate() {
            rem[shift + j] = fq::sub_mod(rem[shift + j], c * bj % q, q);
        }
        poly_trim(&mut rem);
        if rem.is_empty() {
            break;
        }
    }
    poly_trim(&mut quo);
    (quo, rem)
}

fn poly_rem(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    poly_divrem(a, b, q).1
}

fn poly_gcd(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    poly_trim(&mut r0);
    poly_trim(&mut r1);
    while !r1.is_empty() {
        let rem = poly_rem(&r0, &r1, q);
        r0 = std::mem::replace(&mut r1, rem);
    }
    r0
}

/// `base^{q} mod f` in `F_q[z]/(f)`.
fn poly_pow_q(base: &[u64], f: &[u64], q: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut sq = base.to_vec();
    let mut exp = q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = poly_rem(&poly_mul(&acc, &sq, q), f, q);
        }
        exp >>= 1;
        if exp > 0 {
            sq = poly_rem(&poly_mul(&sq, &sq, q), f, q);
        }
    }
    acc
}

/// Irreducibility over F_q: no roots, plus the q-power-map gcd test for m > 3.
fn is_irreducible(q: u64, f: &[u64]) -> bool {
    let m = f.len() - 1;
    if m == 1 {
        return true;
    }
    for a in 0..q {
        let mut acc = 0u64;
        for &c in f.iter().rev() {
            acc = (acc * a + c) % q;
        }
        if acc == 0 {
            return false;
        }
    }
    if m <= 3 {
        // No roots rules out linear factors, which is all a reducible
        // quadratic or cubic can have.
        return true;
    }
    let z = vec![0u64, 1];
    let mut x_pow = z.clone(); // z^{q^j} mod f
    let mut powers = Vec::with_capacity(m);
    for _ in 0..m {
        x_pow = poly_pow_q(&x_pow, f, q);
        powers.push(x_pow.clone());
    }
    if powers[m - 1] != poly_rem(&z, f, q) {
        return false;
    }
    for p in prime_factors(m) {
        let g = poly_gcd(&poly_sub(&powers[m / p - 1], &z, q), f, q);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Deterministic scan for a monic irreducible of degree m, ordered by the
/// packed value of the low coefficient vector.
fn scan_irreducible(q: u64, m: usize) -> Result<Vec<u64>> {
    let mut digits = vec![0u64; m + 1];
    digits[m] = 1;
    let total = (q as u128).saturating_pow(m as u32);
    let mut v = 0u128;
    while v < total {
        let mut x = v;
        for d in digits[..m].iter_mut() {
            *d = (x % q as u128) as u64;
            x /= q as u128;
        }
        if is_irreducible(q, &digits) {
            return Ok(digits);
        }
        v += 1;
    }
    Err(Error::NoIrreducibleFound)
}

fn build_frob_tables(q: u64, m: usize, modulus: &[u64]) -> Vec<FqMat> {
    let mut tables = Vec::with_capacity(m);
    tables.push(FqMat::identity(m, q));
    if m == 1 {
        return tables;
    }
    let w = poly_pow_q(&[0, 1], modulus, q); // z^q mod f
    let mut m1 = FqMat::zero(m, m, q);
    let mut w_pow = vec![1u64];
    for j in 0..m {
        for (i, &c) in w_pow.iter().enumerate() {
            m1.set(i, j, c);
        }
        if j + 1 < m {
            w_pow = poly_rem(&poly_mul(&w_pow, &w, q), modulus, q);
        }
    }
    for i in 1..m {
        let next = m1.mul(&tables[i - 1]).expect("square matrices");
        tables.push(next);
    }
    tables
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::sync::OnceLock as StdOnce;

    fn f4() -> &'static FieldCtx {
        static CTX: StdOnce<FieldCtx> = StdOnce::new();
        CTX.get_or_init(|| FieldCtx::new(2, 2).unwrap())
    }

    fn f8() -> &'static FieldCtx {
        static CTX: StdOnce<FieldCtx> = StdOnce::new();
        CTX.get_or_init(|| FieldCtx::new(2, 3).unwrap())
    }

    fn f16() -> &'static FieldCtx {
        static CTX: StdOnce<FieldCtx> = StdOnce::new();
        CTX.get_or_init(|| FieldCtx::new(2, 4).unwrap())
    }

    #[test]
    fn default_moduli_are_the_expected_ones() {
        assert_eq!(f4().modulus(), &[1, 1, 1]); // z^2 + z + 1
        assert_eq!(f8().modulus(), &[1, 1, 0, 1]); // z^3 + z + 1
        assert_eq!(f16().modulus(), &[1, 1, 0, 0, 1]); // z^4 + z + 1
    }

    #[test]
    fn trivial_prime_field() {
        let ctx = FieldCtx::new(2, 1).unwrap();
        let one = ctx.one();
        assert_eq!(ctx.frobenius(one, 1), one);
        assert_eq!(ctx.add(one, one), ctx.zero());
        // m = 1: the element 1 is normal and self-dual.
        assert_eq!(ctx.normal_element(), one);
        assert_eq!(ctx.dual_element(one).unwrap(), one);
    }

    #[test]
    fn contexts_and_elements_are_send_sync() {
        fn check<T: Send + Sync>() {}
        check::<FieldCtx>();
        check::<FieldElement>();
        check::<crate::skewpoly::SkewPoly>();
    }

    #[test]
    fn given_modulus_validated() {
        // z^2 + z + 2 over F_3 has no roots, so it is accepted.
        assert!(FieldCtx::with_modulus(3, 2, &[2, 1, 1]).is_ok());
        // z^2 + 2z + 1 = (z + 1)^2 is rejected.
        assert_eq!(
            FieldCtx::with_modulus(3, 2, &[1, 2, 1]).unwrap_err(),
            Error::ReducibleModulus
        );
        assert_eq!(
            FieldCtx::with_modulus(3, 2, &[1, 1]).unwrap_err(),
            Error::InvalidModulus
        );
        assert_eq!(FieldCtx::new(4, 2).unwrap_err(), Error::NonPrimeQ { q: 4 });
    }

    #[test]
    fn f4_worked_products() {
        let ctx = f4();
        let z = ctx.gen_z();
        let z1 = ctx.add(z, ctx.one());
        assert_eq!(ctx.mul(z, z), z1); // z·z = z + 1
        assert_eq!(ctx.mul(z, z1), ctx.one()); // z·(z+1) = 1
    }

    #[test]
    fn frobenius_examples() {
        let ctx = f4();
        let z = ctx.gen_z();
        assert_eq!(ctx.frobenius(z, 1), ctx.add(z, ctx.one()));
        for x in ctx.all_elements() {
            assert_eq!(ctx.frobenius(x, ctx.m()), x);
        }
        let ctx8 = f8();
        let z = ctx8.gen_z();
        assert_eq!(ctx8.frobenius(z, 1), ctx8.mul(z, z)); // z^2
        assert_eq!(ctx8.frobenius(z, 2).value(), 6); // z^4 = z^2 + z
    }

    #[test]
    fn f8_generator_is_not_normal() {
        let ctx = f8();
        assert!(!ctx.is_normal(ctx.gen_z()));
        assert!(ctx.is_normal(ctx.add(ctx.gen_z(), ctx.one())));
        let beta = ctx.normal_element();
        assert!(ctx.is_normal(beta));
    }

    #[test]
    fn f4_gen_is_normal_and_self_dual() {
        let ctx = f4();
        let z = ctx.gen_z();
        assert!(ctx.is_normal(z));
        assert_eq!(ctx.dual_element(z).unwrap(), z);
    }

    #[test]
    fn trace_examples() {
        let ctx = f4();
        assert_eq!(ctx.trace(ctx.zero()), ctx.zero());
        assert_eq!(ctx.trace(ctx.gen_z()), ctx.one());
        for x in f16().all_elements() {
            let coords = f16().coords(f16().trace(x));
            assert!(coords[1..].iter().all(|&c| c == 0));
        }
    }

    #[test]
    fn dual_pairing_holds_exhaustively() {
        for ctx in [f4(), f8(), f16()] {
            let beta = ctx.normal_element();
            let dual = ctx.dual_element(beta).unwrap();
            for i in 0..ctx.m() {
                for j in 0..ctx.m() {
                    let t = ctx.trace(ctx.mul(ctx.frobenius(beta, i), ctx.frobenius(dual, j)));
                    let expect = if i == j { ctx.one() } else { ctx.zero() };
                    assert_eq!(t, expect, "pairing failed at ({i},{j})");
                }
            }
            // Dual of the dual basis is the original basis.
            assert_eq!(ctx.dual_element(dual).unwrap(), beta);
        }
    }

    #[test]
    fn dual_of_non_normal_rejected() {
        assert_eq!(
            f8().dual_element(f8().gen_z()).unwrap_err(),
            Error::NotNormal
        );
    }

    #[test]
    fn coords_round_trip_and_units() {
        let ctx = f16();
        let beta = ctx.normal_element();
        let basis: Vec<_> = (0..4).map(|i| ctx.frobenius(beta, i)).collect();
        for (i, &b) in basis.iter().enumerate() {
            let coords = ctx.coords_in_basis(b, &basis).unwrap();
            let mut unit = vec![0u64; 4];
            unit[i] = 1;
            assert_eq!(coords, unit);
        }
        assert_eq!(ctx.coords_in_basis(ctx.zero(), &basis).unwrap(), vec![0; 4]);
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for _ in 0..100 {
            let x = ctx.random_element(&mut rng);
            let coords = ctx.coords_in_basis(x, &basis).unwrap();
            assert_eq!(ctx.from_coords_in_basis(&coords, &basis).unwrap(), x);
        }
        let singular = vec![beta, beta, basis[2], basis[3]];
        assert_eq!(
            ctx.coords_in_basis(ctx.one(), &singular).unwrap_err(),
            Error::SingularBasis
        );
    }

    #[test]
    fn normal_basis_view_shifts_under_frobenius() {
        for ctx in [f8(), f16()] {
            let beta = ctx.normal_element();
            let basis: Vec<_> = (0..ctx.m()).map(|i| ctx.frobenius(beta, i)).collect();
            let mut rng = ChaCha12Rng::seed_from_u64(5);
            for _ in 0..50 {
                let x = ctx.random_element(&mut rng);
                let coords = ctx.coords_in_basis(x, &basis).unwrap();
                for j in 0..ctx.m() {
                    let shifted = ctx.coords_in_basis(ctx.frobenius(x, j), &basis).unwrap();
                    for t in 0..ctx.m() {
                        assert_eq!(shifted[t], coords[(t + ctx.m() - j) % ctx.m()]);
                    }
                }
            }
        }
    }

    #[test]
    fn fe_arith_checked_paths() {
        let ctx = f4();
        let other = FieldCtx::new(2, 2).unwrap();
        let z = ctx.gen_z();
        assert_eq!(
            ctx.fe_arith(FeOp::Add, z, Some(other.gen_z())).unwrap_err(),
            Error::ContextMismatch
        );
        assert_eq!(
            ctx.fe_arith(FeOp::Div, z, Some(ctx.zero())).unwrap_err(),
            Error::DivisionByZero
        );
        assert_eq!(ctx.fe_arith(FeOp::Inv, ctx.zero(), None).unwrap_err(), Error::DivisionByZero);
        assert_eq!(ctx.fe_arith(FeOp::Mul, z, Some(z)).unwrap(), ctx.mul(z, z));
    }

    #[test]
    fn ops_are_counted() {
        let ctx = FieldCtx::new(2, 4).unwrap();
        let before = ctx.op_tally();
        let z = ctx.gen_z();
        let _ = ctx.mul(z, z);
        let _ = ctx.frobenius(z, 2);
        let _ = ctx.add(z, z);
        let after = ctx.op_tally() - before;
        assert_eq!(after, OpTally { muls: 2, adds: 1 });
    }

    // Field axioms across q ∈ {2,3,5}, m ∈ {1..8}; sampled triples.
    #[test]
    fn field_axioms_sampled() {
        let mut rng = ChaCha12Rng::seed_from_u64(99);
        for q in [2u64, 3, 5] {
            for m in 1..=8usize {
                let ctx = FieldCtx::new(q, m).unwrap();
                for _ in 0..40 {
                    let a = ctx.random_element(&mut rng);
                    let b = ctx.random_element(&mut rng);
                    let c = ctx.random_element(&mut rng);
                    assert_eq!(ctx.mul(ctx.mul(a, b), c), ctx.mul(a, ctx.mul(b, c)));
                    assert_eq!(ctx.add(ctx.add(a, b), c), ctx.add(a, ctx.add(b, c)));
                    assert_eq!(
                        ctx.mul(a, ctx.add(b, c)),
                        ctx.add(ctx.mul(a, b), ctx.mul(a, c))
                    );
                    assert_eq!(ctx.add(a, ctx.neg(a)), ctx.zero());
                    assert_eq!(ctx.mul(a, ctx.one()), a);
                    assert_eq!(ctx.add(a, ctx.zero()), a);
                    if !a.is_zero() {
                        assert_eq!(ctx.mul(a, ctx.inv(a).unwrap()), ctx.one());
                        assert_eq!(ctx.div(b, a).map(|r| ctx.mul(r, a)).unwrap(), b);
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_is_an_automorphism() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for (q, m) in [(2u64, 6usize), (3, 4), (5, 3)] {
            let ctx = FieldCtx::new(q, m).unwrap();
            for _ in 0..50 {
                let a = ctx.random_element(&mut rng);
                let b = ctx.random_element(&mut rng);
                for l in 0..m {
                    assert_eq!(
                        ctx.frobenius(ctx.mul(a, b), l),
                        ctx.mul(ctx.frobenius(a, l), ctx.frobenius(b, l))
                    );
                    assert_eq!(
                        ctx.frobenius(ctx.add(a, b), l),
                        ctx.add(ctx.frobenius(a, l), ctx.frobenius(b, l))
                    );
                }
            }
        }
    }

    #[test]
    fn generic_path_agrees_with_tables() {
        // F_{3^4} is small enough for tables; re-derive products generically.
        let ctx = FieldCtx::new(3, 4).unwrap();
        assert!(ctx.tables.is_some());
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        for _ in 0..500 {
            let a = ctx.random_element(&mut rng);
            let b = ctx.random_element(&mut rng);
            assert_eq!(ctx.mul(a, b), ctx.mul_generic(a.value(), b.value()));
            if !a.is_zero() {
                assert_eq!(ctx.inv(a).unwrap(), ctx.inv_generic(a.value()));
            }
        }
    }

    #[test]
    fn table_limit_boundary_field() {
        // F_{2^16} sits exactly at the lookup-table limit.
        let ctx = FieldCtx::new(2, 16).unwrap();
        assert!(ctx.tables.is_some());
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        for _ in 0..200 {
            let a = ctx.random_element(&mut rng);
            let b = ctx.random_element(&mut rng);
            assert_eq!(ctx.mul(a, b), ctx.mul_generic(a.value(), b.value()));
            assert_eq!(ctx.frobenius(a, 16), a);
            if !a.is_zero() {
                assert_eq!(ctx.mul(a, ctx.inv(a).unwrap()), ctx.one());
            }
        }
    }

    #[test]
    fn large_extension_without_tables() {
        let ctx = FieldCtx::new(2, 40).unwrap();
        assert!(ctx.tables.is_none());
        let mut rng = ChaCha12Rng::seed_from_u64(17);
        for _ in 0..20 {
            let a = ctx.random_element(&mut rng);
            if a.is_zero() {
                continue;
            }
            assert_eq!(ctx.mul(a, ctx.inv(a).unwrap()), ctx.one());
            assert_eq!(ctx.frobenius(a, 40), a);
        }
        assert!(matches!(
            FieldCtx::new(2, 65).unwrap_err(),
            Error::ExtensionTooLarge { .. }
        ));
        assert!(FieldCtx::with_options(3, 41, None, FieldOptions { max_m: 80 }).is_err());
    }

    proptest! {
        #[test]
        fn serialization_value_round_trips(v in 0u64..6561) {
            let ctx = FieldCtx::new(3, 8).unwrap();
            let x = ctx.from_value(v).unwrap();
            prop_assert_eq!(x.value(), v);
            let coords = ctx.coords(x);
            prop_assert_eq!(ctx.from_coords(&coords).unwrap(), x);
        }

        #[test]
        fn add_sub_inverse(a in 0u64..4096, b in 0u64..4096) {
            let ctx = f16();
            let m = ctx.order() as u64;
            let x = ctx.from_value(a % m).unwrap();
            let y = ctx.from_value(b % m).unwrap();
            prop_assert_eq!(ctx.sub(ctx.add(x, y), y), x);
        }
    }
}
