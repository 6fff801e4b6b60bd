//! The elementary abelian group `(Z/p)^n`, its packed form for fast
//! additions, dense histograms over it, and exact convolution.
//!
//! Elements are addressed by base-`p` index (digit `i` is coordinate `i`).
//! Convolution runs an exact transform modulo primes `P = 1 mod p` just
//! above `2^62` and recombines by CRT.

use crate::gf::{is_prime_u64, pow_mod_u64};
use crate::limits;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ElemAbelian {
    p: u32,
    n: u32,
    size: usize,
}

impl ElemAbelian {
    pub fn new(p: u32, n: u32) -> Result<Self> {
        limits::check_default("group size", p as u64, n as u64)?;
        Ok(ElemAbelian { p, n, size: (p as usize).pow(n) })
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        if self.p == 2 {
            return a ^ b;
        }
        let p = self.p as usize;
        let (mut a, mut b, mut out, mut w) = (a, b, 0, 1);
        for _ in 0..self.n {
            out += ((a % p + b % p) % p) * w;
            a /= p;
            b /= p;
            w *= p;
        }
        out
    }

    pub fn neg(&self, a: usize) -> usize {
        if self.p == 2 {
            return a;
        }
        let p = self.p as usize;
        let (mut a, mut out, mut w) = (a, 0, 1);
        for _ in 0..self.n {
            out += ((p - a % p) % p) * w;
            a /= p;
            w *= p;
        }
        out
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }
}

/// Vectors over `F_p` packed into a `u128`, one lane per digit.
///
/// For `p = 2` a lane is one bit and addition is XOR. For odd `p` each lane
/// has `w` value bits plus a guard bit, with `2^w >= p`; adding
/// `2^w - p` per lane sets the guard exactly where a reduction is due.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Lanes {
    p: u32,
    digits: u32,
    width: u32,
    guard: u128,
    bias: u128,
    all_p: u128,
    lane_mask: u128,
}

impl Lanes {
    pub fn new(p: u32, digits: u32) -> Result<Self> {
        let width = if p == 2 { 1 } else { 32 - (p - 1).leading_zeros() + 1 };
        if digits * width > 128 {
            return Err(Error::TooLarge { what: "packed vector length", bits: digits * width, cap: 128 });
        }
        let (mut guard, mut bias, mut all_p) = (0u128, 0u128, 0u128);
        let lane_mask = if width == 1 { 1 } else { (1u128 << width) - 1 };
        if p != 2 {
            let w = width - 1;
            for i in 0..digits {
                let sh = i * width;
                guard |= 1u128 << (sh + w);
                bias |= ((1u128 << w) - p as u128) << sh;
                all_p |= (p as u128) << sh;
            }
        }
        Ok(Lanes { p, digits, width, guard, bias, all_p, lane_mask })
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn digits(&self) -> u32 {
        self.digits
    }

    #[inline(always)]
    pub fn add(&self, a: u128, b: u128) -> u128 {
        if self.p == 2 {
            return a ^ b;
        }
        let t = a + b + self.bias;
        let g = t & self.guard;
        let m = g - (g >> (self.width - 1));
        (t ^ g) - (self.bias & !m)
    }

    #[inline(always)]
    pub fn neg(&self, a: u128) -> u128 {
        if self.p == 2 {
            return a;
        }
        self.add(self.all_p - a, 0)
    }

    #[inline(always)]
    pub fn sub(&self, a: u128, b: u128) -> u128 {
        self.add(a, self.neg(b))
    }

    #[inline(always)]
    pub fn digit(&self, a: u128, i: u32) -> u32 {
        ((a >> (i * self.width)) & self.lane_mask) as u32
    }

    /// Clears every lane at position `>= k`.
    #[inline(always)]
    pub fn truncate(&self, a: u128, k: u32) -> u128 {
        let bits = k * self.width;
        if bits >= 128 {
            a
        } else {
            a & ((1u128 << bits) - 1)
        }
    }

    /// Lanes `lo..lo+k` moved down to position 0.
    #[inline(always)]
    pub fn window(&self, a: u128, lo: u32, k: u32) -> u128 {
        self.truncate(a >> (lo * self.width), k)
    }

    pub fn from_digits(&self, d: &[u32]) -> u128 {
        d.iter().enumerate().fold(0u128, |acc, (i, &x)| acc | ((x as u128) << (i as u32 * self.width)))
    }

    pub fn to_digits(&self, a: u128) -> Vec<u32> {
        (0..self.digits).map(|i| self.digit(a, i)).collect()
    }

    /// Base-`p` index of the lowest `k` lanes.
    #[inline]
    pub fn index_of(&self, a: u128, k: u32) -> u64 {
        if self.p == 2 {
            return self.truncate(a, k) as u64;
        }
        let mut idx = 0u64;
        for i in (0..k).rev() {
            idx = idx * self.p as u64 + self.digit(a, i) as u64;
        }
        idx
    }

    pub fn from_index(&self, mut idx: u64) -> u128 {
        let mut out = 0u128;
        let mut i = 0;
        while idx > 0 {
            out |= ((idx % self.p as u64) as u128) << (i * self.width);
            idx /= self.p as u64;
            i += 1;
        }
        out
    }

    /// Position of the highest nonzero lane, if any.
    #[inline]
    pub fn top_lane(&self, a: u128) -> Option<u32> {
        if a == 0 {
            None
        } else {
            Some((127 - a.leading_zeros()) / self.width)
        }
    }
}

/// Dense exact counts over `(Z/p)^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Histogram {
    group: ElemAbelian,
    counts: Vec<u128>,
}

impl Histogram {
    pub fn zeros(group: ElemAbelian) -> Self {
        Histogram { group, counts: vec![0; group.size()] }
    }

    pub fn delta(group: ElemAbelian, at: usize) -> Self {
        let mut h = Self::zeros(group);
        h.counts[at] = 1;
        h
    }

    pub fn from_counts(group: ElemAbelian, counts: Vec<u128>) -> Result<Self> {
        if counts.len() != group.size() {
            return Err(Error::SizeMismatch(counts.len(), group.size()));
        }
        Ok(Histogram { group, counts })
    }

    pub fn group(&self) -> ElemAbelian {
        self.group
    }

    pub fn counts(&self) -> &[u128] {
        &self.counts
    }

    pub fn counts_mut(&mut self) -> &mut [u128] {
        &mut self.counts
    }

    pub fn get(&self, i: usize) -> u128 {
        self.counts[i]
    }

    pub fn bump(&mut self, i: usize, by: u128) {
        self.counts[i] += by;
    }

    pub fn mass(&self) -> u128 {
        self.counts.iter().sum()
    }

    pub fn add_assign(&mut self, o: &Histogram) -> Result<()> {
        if o.group != self.group {
            return Err(Error::SizeMismatch(o.group.size(), self.group.size()));
        }
        for (a, b) in self.counts.iter_mut().zip(&o.counts) {
            *a += b;
        }
        Ok(())
    }

    pub fn convolve_naive(&self, o: &Histogram) -> Result<Histogram> {
        if o.group != self.group {
            return Err(Error::SizeMismatch(o.group.size(), self.group.size()));
        }
        let g = self.group;
        let mut out = Histogram::zeros(g);
        for (a, &ca) in self.counts.iter().enumerate() {
            if ca == 0 {
                continue;
            }
            for (b, &cb) in o.counts.iter().enumerate() {
                if cb != 0 {
                    out.counts[g.add(a, b)] += ca * cb;
                }
            }
        }
        Ok(out)
    }

    pub fn convolve(&self, o: &Histogram) -> Result<Histogram> {
        convolve_all(&[(self, o)])
    }
}

/// `sum_i a_i * b_i` over the group, each product a convolution, computed
/// with one inverse transform.
pub fn convolve_all(pairs: &[(&Histogram, &Histogram)]) -> Result<Histogram> {
    let g = pairs.first().ok_or(Error::InvalidParams("no histograms".into()))?.0.group;
    let mut bound: u128 = 0;
    for (a, b) in pairs {
        if a.group != g || b.group != g {
            return Err(Error::SizeMismatch(a.group.size(), g.size()));
        }
        let m = a.mass().checked_mul(b.mass()).ok_or(Error::TooLarge { what: "convolution mass", bits: 128, cap: 124 })?;
        bound = bound.checked_add(m).ok_or(Error::TooLarge { what: "convolution mass", bits: 128, cap: 124 })?;
    }
    let primes = ntt_primes(g.p());
    let nprimes = if bound < primes[0] as u128 { 1 } else { 2 };
    if nprimes == 2 && bound >= primes[0] as u128 * primes[1] as u128 {
        return Err(Error::TooLarge { what: "convolution mass", bits: 128 - bound.leading_zeros(), cap: 124 });
    }
    let mut residues: Vec<Vec<u64>> = Vec::with_capacity(nprimes);
    for &pr in primes.iter().take(nprimes) {
        let ctx = Mont::new(pr);
        let w = ctx.to_mont(root_of_unity(pr, g.p()));
        let mut acc = vec![0u64; g.size()];
        for (a, b) in pairs {
            let mut fa = ctx.load(&a.counts);
            dft(&ctx, &mut fa, g, w);
            let fb = if std::ptr::eq(*a, *b) {
                fa.clone()
            } else {
                let mut fb = ctx.load(&b.counts);
                dft(&ctx, &mut fb, g, w);
                fb
            };
            for ((s, x), y) in acc.iter_mut().zip(&fa).zip(&fb) {
                *s = ctx.add(*s, ctx.mul(*x, *y));
            }
        }
        let winv = ctx.to_mont(pow_mod_u64(root_of_unity(pr, g.p()), g.p() as u64 - 1, pr));
        dft(&ctx, &mut acc, g, winv);
        let ninv = ctx.to_mont(pow_mod_u64(g.size() as u64 % pr, pr - 2, pr));
        for x in acc.iter_mut() {
            *x = ctx.from_mont(ctx.mul(*x, ninv));
        }
        residues.push(acc);
    }
    let counts = if nprimes == 1 {
        residues[0].iter().map(|&x| x as u128).collect()
    } else {
        let (p1, p2) = (primes[0], primes[1]);
        let p1_inv = pow_mod_u64(p1 % p2, p2 - 2, p2);
        residues[0]
            .iter()
            .zip(&residues[1])
            .map(|(&a1, &a2)| {
                let diff = (a2 as u128 + p2 as u128 - (a1 % p2) as u128) % p2 as u128;
                let k = diff * p1_inv as u128 % p2 as u128;
                a1 as u128 + k * p1 as u128
            })
            .collect()
    };
    Ok(Histogram { group: g, counts })
}

/// In-place multidimensional DFT of length `p` along every digit axis.
fn dft(ctx: &Mont, x: &mut [u64], g: ElemAbelian, w: u64) {
    let p = g.p() as usize;
    let mut pw = vec![ctx.one(); p];
    for j in 1..p {
        pw[j] = ctx.mul(pw[j - 1], w);
    }
    let mut buf = vec![0u64; p];
    let mut stride = 1usize;
    for _ in 0..g.n() {
        let block = stride * p;
        for base in (0..x.len()).step_by(block) {
            for off in 0..stride {
                let i0 = base + off;
                if p == 2 {
                    let (a, b) = (x[i0], x[i0 + stride]);
                    x[i0] = ctx.add(a, b);
                    x[i0 + stride] = ctx.sub(a, b);
                    continue;
                }
                for (k, slot) in buf.iter_mut().enumerate() {
                    let mut s = 0u64;
                    for j in 0..p {
                        let v = x[i0 + j * stride];
                        if v != 0 {
                            s = ctx.add(s, ctx.mul(v, pw[(j * k) % p]));
                        }
                    }
                    *slot = s;
                }
                for (k, &v) in buf.iter().enumerate() {
                    x[i0 + k * stride] = v;
                }
            }
        }
        stride = block;
    }
}

/// The two smallest primes `P = 1 mod p` above `2^62`.
pub fn ntt_primes(p: u32) -> [u64; 2] {
    let step = if p == 2 { 2 } else { 2 * p as u64 };
    let base = 1u64 << 62;
    let mut x = base - base % step + 1;
    if x <= base {
        x += step;
    }
    let mut out = [0u64; 2];
    let mut found = 0;
    while found < 2 {
        if is_prime_u64(x) {
            out[found] = x;
            found += 1;
        }
        x += step;
    }
    out
}

fn root_of_unity(pr: u64, p: u32) -> u64 {
    let e = (pr - 1) / p as u64;
    (2..).map(|a| pow_mod_u64(a, e, pr)).find(|&w| w != 1).unwrap()
}

/// Montgomery arithmetic modulo an odd prime below `2^63`, `R = 2^64`.
struct Mont {
    m: u64,
    m_neg_inv: u64,
    r2: u64,
}

impl Mont {
    fn new(m: u64) -> Self {
        let mut inv = 1u64;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(m.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % m as u128) as u64;
        let r2 = ((r as u128 * r as u128) % m as u128) as u64;
        Mont { m, m_neg_inv: inv.wrapping_neg(), r2 }
    }

    #[inline(always)]
    fn redc(&self, t: u128) -> u64 {
        let k = (t as u64).wrapping_mul(self.m_neg_inv);
        let u = ((t + k as u128 * self.m as u128) >> 64) as u64;
        if u >= self.m {
            u - self.m
        } else {
            u
        }
    }

    #[inline(always)]
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline(always)]
    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.m {
            s - self.m
        } else {
            s
        }
    }

    #[inline(always)]
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.m - b
        }
    }

    fn to_mont(&self, a: u64) -> u64 {
        self.mul(a % self.m, self.r2)
    }

    fn from_mont(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    fn one(&self) -> u64 {
        self.to_mont(1)
    }

    fn load(&self, v: &[u128]) -> Vec<u64> {
        v.iter().map(|&c| if c == 0 { 0 } else { self.to_mont((c % self.m as u128) as u64) }).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hist(g: ElemAbelian, rng: &mut ChaCha8Rng, max: u128) -> Histogram {
        let counts = (0..g.size()).map(|_| rng.gen_range(0..=max)).collect();
        Histogram::from_counts(g, counts).unwrap()
    }

    #[test]
    fn ntt_matches_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (p, n) in [(2, 4), (2, 10), (5, 3), (7, 2), (13, 2)] {
            let g = ElemAbelian::new(p, n).unwrap();
            let a = random_hist(g, &mut rng, 1000);
            let b = random_hist(g, &mut rng, 1000);
            assert_eq!(a.convolve(&b).unwrap(), a.convolve_naive(&b).unwrap(), "p={p} n={n}");
        }
    }

    #[test]
    fn two_prime_crt_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = ElemAbelian::new(5, 3).unwrap();
        let a = random_hist(g, &mut rng, 1 << 40);
        let b = random_hist(g, &mut rng, 1 << 40);
        assert_eq!(a.convolve(&b).unwrap(), a.convolve_naive(&b).unwrap());
    }

    #[test]
    fn delta_is_identity_and_mass_multiplies() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = ElemAbelian::new(2, 6).unwrap();
        let a = random_hist(g, &mut rng, 50);
        let b = random_hist(g, &mut rng, 50);
        assert_eq!(Histogram::delta(g, 0).convolve(&a).unwrap(), a);
        assert_eq!(a.convolve(&b).unwrap().mass(), a.mass() * b.mass());
    }

    #[test]
    fn primes_are_one_mod_p() {
        for p in [2u32, 5, 7, 13] {
            let [a, b] = ntt_primes(p);
            assert!(a > 1 << 62 && b > a);
            assert_eq!(a % p as u64, 1);
            assert_eq!(b % p as u64, 1);
        }
    }

    proptest! {
        #[test]
        fn lanes_agree_with_index_arithmetic(p in prop::sample::select(vec![2u32, 5, 7, 11, 13]),
                                             a in 0u64..1 << 40, b in 0u64..1 << 40) {
            let n = 6;
            let g = ElemAbelian::new(p, n).unwrap();
            let lanes = Lanes::new(p, n).unwrap();
            let (a, b) = ((a % g.size() as u64) as usize, (b % g.size() as u64) as usize);
            let (pa, pb) = (lanes.from_index(a as u64), lanes.from_index(b as u64));
            prop_assert_eq!(lanes.index_of(lanes.add(pa, pb), n) as usize, g.add(a, b));
            prop_assert_eq!(lanes.index_of(lanes.neg(pa), n) as usize, g.neg(a));
            prop_assert_eq!(lanes.index_of(lanes.sub(pa, pb), n) as usize, g.sub(a, b));
        }
    }
}
