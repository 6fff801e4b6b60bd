//! Finite fields `F_q`, `q = p^e`, with elements stored as integer indices.
//!
//! An element `c_0 + c_1 u + ... + c_{e-1} u^{e-1}` (with `u` a root of the
//! field modulus) has index `sum c_i p^i`. Multiplication goes through
//! log/exp tables relative to a fixed generator, addition uses XOR for
//! `p = 2`, plain residues for `e = 1` and Zech logarithms otherwise.

mod eisenstein;
mod embed;
mod primepoly;

pub use eisenstein::EisensteinInt;
pub use embed::Embedding;

use crate::{Error, Result};

/// Largest field order supported.
pub const MAX_Q: u64 = 1 << 24;

const NONE: u32 = u32::MAX;

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElem(pub u32);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug, Clone)]
pub struct FieldCtx {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: FqElem,
    // exp has length 2(q-1) so that sums of two logs need no reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    pow_p: Vec<u32>,
    tr_basis: Vec<u32>,
}

impl FieldCtx {
    pub fn new(p: u32, e: u32) -> Result<Self> {
        Self::build(p, e, 0)
    }

    /// Same field, but the modulus search starts at a seed-dependent
    /// offset, so a different (isomorphic) model may be chosen.
    pub fn with_seed(p: u32, e: u32, seed: u64) -> Result<Self> {
        Self::build(p, e, seed)
    }

    fn build(p: u32, e: u32, seed: u64) -> Result<Self> {
        if !is_prime_u64(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if p == 3 {
            return Err(Error::CharIsThree);
        }
        if e == 0 {
            return Err(Error::InvalidParams("field degree e must be >= 1".into()));
        }
        let q = (p as u64).checked_pow(e).filter(|&q| q <= MAX_Q).ok_or(Error::TooLarge {
            what: "field order",
            bits: crate::limits::log2_ceil_pow(p as u64, e as u64),
            cap: 24,
        })?;
        let q = q as u32;
        let modulus = primepoly::least_irreducible(p, e as usize, seed);
        let pow_p: Vec<u32> = (0..e).map(|i| p.pow(i)).collect();

        let to_poly = |x: u32| -> Vec<u32> {
            let mut v = Vec::with_capacity(e as usize);
            let mut x = x;
            for _ in 0..e {
                v.push(x % p);
                x /= p;
            }
            v
        };
        let to_index = |v: &[u32]| -> u32 { v.iter().rev().fold(0u32, |acc, &c| acc * p + c) };

        let order = (q - 1) as u64;
        let prime_factors: Vec<u64> = factor_u64(order).into_iter().map(|(l, _)| l).collect();
        let mut generator = None;
        for cand in 1..q {
            let g = to_poly(cand);
            let is_gen = prime_factors.iter().all(|&l| {
                let r = primepoly::powmod(&g, order / l, &modulus, p);
                !(r.len() == 1 && r[0] == 1)
            });
            if is_gen {
                generator = Some(cand);
                break;
            }
        }
        let generator = generator.expect("multiplicative group is cyclic");

        let n = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * n];
        let mut log = vec![NONE; q as usize];
        let g = to_poly(generator);
        let mut cur = vec![1u32];
        for (j, slot) in exp.iter_mut().take(n).enumerate() {
            let mut padded = cur.clone();
            padded.resize(e as usize, 0);
            let idx = to_index(&padded);
            *slot = idx;
            log[idx as usize] = j as u32;
            cur = primepoly::mulmod(&cur, &g, &modulus, p);
        }
        for j in 0..n {
            exp[n + j] = exp[j];
        }

        let mut zech = vec![NONE; n];
        for (j, z) in zech.iter_mut().enumerate() {
            let x = exp[j];
            let bumped = x - x % p + (x % p + 1) % p;
            *z = log[bumped as usize];
        }

        let mut ctx = FieldCtx {
            p,
            e,
            q,
            modulus,
            generator: FqElem(generator),
            exp,
            log,
            zech,
            pow_p,
            tr_basis: Vec::new(),
        };
        let mut tr_basis = Vec::with_capacity(e as usize);
        for i in 0..e {
            let ui = FqElem(p.pow(i));
            let mut acc = FqElem::ZERO;
            let mut y = ui;
            for _ in 0..e {
                acc = ctx.add(acc, y);
                y = ctx.pow(y, p as u64);
            }
            debug_assert!(acc.0 < p);
            tr_basis.push(acc.0);
        }
        ctx.tr_basis = tr_basis;
        Ok(ctx)
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }
    #[inline]
    pub fn e(&self) -> u32 {
        self.e
    }
    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }
    /// Monic modulus over `F_p`, coefficients low to high.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    pub fn generator(&self) -> FqElem {
        self.generator
    }

    pub fn zero(&self) -> FqElem {
        FqElem::ZERO
    }
    pub fn one(&self) -> FqElem {
        FqElem::ONE
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FqElem {
        FqElem(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_index(&self, i: u32) -> FqElem {
        assert!(i < self.q, "index {i} out of range for F_{}", self.q);
        FqElem(i)
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        (0..self.q).map(FqElem)
    }

    pub fn units(&self) -> impl Iterator<Item = FqElem> {
        (1..self.q).map(FqElem)
    }

    /// Coordinates over `F_p` in the power basis, low to high.
    pub fn coords(&self, x: FqElem) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.e as usize);
        let mut i = x.0;
        for _ in 0..self.e {
            v.push(i % self.p);
            i /= self.p;
        }
        v
    }

    pub fn from_coords(&self, c: &[u32]) -> FqElem {
        assert!(c.len() <= self.e as usize);
        FqElem(c.iter().rev().fold(0, |acc, &d| acc * self.p + d % self.p))
    }

    #[inline]
    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        if self.p == 2 {
            return FqElem(a.0 ^ b.0);
        }
        if self.e == 1 {
            let s = a.0 + b.0;
            return FqElem(if s >= self.p { s - self.p } else { s });
        }
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let n = self.q - 1;
        let la = self.log[a.0 as usize];
        let lb = self.log[b.0 as usize];
        let d = if lb >= la { lb - la } else { lb + n - la };
        let z = self.zech[d as usize];
        if z == NONE {
            FqElem::ZERO
        } else {
            FqElem(self.exp[(la + z) as usize])
        }
    }

    #[inline]
    pub fn neg(&self, a: FqElem) -> FqElem {
        if self.p == 2 || a.0 == 0 {
            return a;
        }
        if self.e == 1 {
            return FqElem(self.p - a.0);
        }
        let half = (self.q - 1) / 2;
        FqElem(self.exp[(self.log[a.0 as usize] + half) as usize])
    }

    #[inline]
    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        if a.0 == 0 || b.0 == 0 {
            return FqElem::ZERO;
        }
        FqElem(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    pub fn inv(&self, a: FqElem) -> Result<FqElem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = self.q - 1;
        let l = self.log[a.0 as usize];
        Ok(FqElem(self.exp[((n - l) % n) as usize]))
    }

    pub fn div(&self, a: FqElem, b: FqElem) -> Result<FqElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FqElem, k: u64) -> FqElem {
        if k == 0 {
            return FqElem::ONE;
        }
        if a.0 == 0 {
            return FqElem::ZERO;
        }
        let n = (self.q - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        FqElem(self.exp[((l * (k % n)) % n) as usize])
    }

    /// Discrete log to the base of the generator; `None` for zero.
    #[inline]
    pub fn log(&self, a: FqElem) -> Option<u32> {
        let l = self.log[a.0 as usize];
        (l != NONE).then_some(l)
    }

    /// `g^k` for the fixed generator `g`.
    #[inline]
    pub fn exp(&self, k: u64) -> FqElem {
        FqElem(self.exp[(k % (self.q as u64 - 1)) as usize])
    }

    pub fn frobenius(&self, a: FqElem) -> FqElem {
        self.pow(a, self.p as u64)
    }

    /// Absolute trace to `F_p`, returned as an integer in `[0, p)`.
    pub fn trace(&self, a: FqElem) -> u32 {
        let mut i = a.0;
        let mut acc = 0u64;
        for &t in &self.tr_basis {
            acc += (i % self.p) as u64 * t as u64;
            i /= self.p;
        }
        (acc % self.p as u64) as u32
    }

    /// Traces of the power basis `1, u, ..., u^{e-1}`.
    pub fn trace_basis(&self) -> &[u32] {
        &self.tr_basis
    }

    pub fn pow_p(&self) -> &[u32] {
        &self.pow_p
    }

    /// Multiplies by an element of the prime field, digit by digit.
    pub fn scale_int(&self, a: FqElem, c: u32) -> FqElem {
        self.mul(a, FqElem(c % self.p))
    }

    pub fn is_cube(&self, a: FqElem) -> bool {
        match self.log(a) {
            None => true,
            Some(l) => self.q % 3 != 1 || l % 3 == 0,
        }
    }

    /// The cube roots of unity in `F_q` (just `1` unless `q = 1 mod 3`).
    pub fn cube_roots_of_unity(&self) -> Vec<FqElem> {
        if self.q % 3 == 1 {
            let t = ((self.q - 1) / 3) as u64;
            vec![FqElem::ONE, self.exp(t), self.exp(2 * t)]
        } else {
            vec![FqElem::ONE]
        }
    }
}

/// The cubic character `chi(g^k) = omega^k` attached to the context's generator.
#[derive(Debug, Clone, Copy)]
pub struct CubicCharacter<'a> {
    ctx: &'a FieldCtx,
}

impl<'a> CubicCharacter<'a> {
    pub fn new(ctx: &'a FieldCtx) -> Result<Self> {
        if ctx.q() % 3 != 1 {
            return Err(Error::NoCubicCharacter(ctx.q() as u64));
        }
        Ok(CubicCharacter { ctx })
    }

    pub fn ctx(&self) -> &'a FieldCtx {
        self.ctx
    }

    /// `chi(x) = omega^j`; `None` at zero.
    #[inline]
    pub fn exponent(&self, x: FqElem) -> Option<u32> {
        self.ctx.log(x).map(|l| l % 3)
    }

    pub fn value(&self, x: FqElem) -> EisensteinInt {
        match self.exponent(x) {
            None => EisensteinInt::zero(),
            Some(j) => EisensteinInt::omega_pow(j),
        }
    }
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(sp) {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
pub fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod_u64(mut a: u64, mut k: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while k > 0 {
        if k & 1 == 1 {
            r = mul_mod_u64(r, a, m);
        }
        a = mul_mod_u64(a, a, m);
        k >>= 1;
    }
    r
}

/// Trial-division factorization, fine for the orders we meet here.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut f = 2u64;
    while f * f <= n {
        if n.is_multiple_of(f) {
            let mut k = 0;
            while n.is_multiple_of(f) {
                n /= f;
                k += 1;
            }
            out.push((f, k));
        }
        f += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn f4_generator_and_traces() {
        let f = FieldCtx::new(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        let g = f.generator();
        assert_eq!(g, FqElem(2));
        assert_eq!(f.mul(g, g), f.add(g, f.one()));
        let tr: Vec<u32> = f.elements().map(|x| f.trace(x)).collect();
        assert_eq!(tr, vec![0, 0, 1, 1]);
    }

    #[test]
    fn f7_cubes() {
        let f = FieldCtx::new(7, 1).unwrap();
        let mut cubes: Vec<u32> = f.units().map(|x| f.pow(x, 3).0).collect();
        cubes.sort();
        cubes.dedup();
        assert_eq!(cubes, vec![1, 6]);
        assert_eq!(f.generator(), FqElem(3));
    }

    #[test]
    fn rejects_bad_characteristic() {
        assert_eq!(FieldCtx::new(3, 2).unwrap_err(), Error::CharIsThree);
        assert_eq!(FieldCtx::new(6, 1).unwrap_err(), Error::NotPrime(6));
        assert!(matches!(FieldCtx::new(2, 30), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn cubic_character_needs_q_one_mod_three() {
        let f5 = FieldCtx::new(5, 1).unwrap();
        assert_eq!(CubicCharacter::new(&f5).unwrap_err(), Error::NoCubicCharacter(5));
        let f7 = FieldCtx::new(7, 1).unwrap();
        let chi = CubicCharacter::new(&f7).unwrap();
        assert_eq!(chi.exponent(f7.generator()), Some(1));
        assert_eq!(chi.exponent(FqElem(6)), Some(0));
        assert_eq!(chi.exponent(FqElem(0)), None);
    }

    #[test]
    fn seeded_modulus_is_still_a_field() {
        let a = FieldCtx::with_seed(2, 4, 7).unwrap();
        for x in a.units() {
            assert_eq!(a.mul(x, a.inv(x).unwrap()), a.one());
        }
    }

    #[test]
    fn trace_is_sum_of_conjugates() {
        for (p, e) in [(2, 3), (5, 2), (7, 2), (13, 1), (2, 6)] {
            let f = FieldCtx::new(p, e).unwrap();
            for x in f.elements() {
                let mut acc = f.zero();
                let mut y = x;
                for _ in 0..e {
                    acc = f.add(acc, y);
                    y = f.frobenius(y);
                }
                assert_eq!(acc.0, f.trace(x));
            }
        }
    }

    fn schoolbook_add(f: &FieldCtx, a: FqElem, b: FqElem) -> FqElem {
        let ca = f.coords(a);
        let cb = f.coords(b);
        let s: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % f.p()).collect();
        f.from_coords(&s)
    }

    proptest! {
        #[test]
        fn field_axioms(pe in prop::sample::select(vec![(2u32, 4u32), (5, 2), (7, 2), (13, 2), (11, 1)]),
                        ia in 0u32..1 << 20, ib in 0u32..1 << 20, ic in 0u32..1 << 20) {
            let f = FieldCtx::new(pe.0, pe.1).unwrap();
            let (a, b, c) = (FqElem(ia % f.q()), FqElem(ib % f.q()), FqElem(ic % f.q()));
            prop_assert_eq!(f.add(a, b), schoolbook_add(&f, a, b));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            prop_assert_eq!(f.add(a, f.neg(a)), f.zero());
            if !a.is_zero() {
                prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
            }
            prop_assert_eq!(f.trace(f.add(a, b)), (f.trace(a) + f.trace(b)) % f.p());
        }
    }
}
