//! Local densities of `x^3 + y^3 + z^3 = k` modulo polynomials: counts
//! `rho(r, k)`, the modulus `N(M)`, complete exponential sums `S_r(0)` and
//! partial sums of the singular series.
//!
//! Prime powers are counted by splitting on the smallest valuation of
//! `(x, y, z)`: triples with a unit coordinate lift uniquely from the
//! residue field (Hensel), and the all-divisible stratum recurses on
//! `rho(w^{e-3}, k / w^3)`.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::group::{ElemAbelian, Histogram};
use crate::polyring::{Poly, PolyRing, ResidueRing};
use crate::{limits, Error, Result};

/// Histogram of `x^3 mod r` over all residues `x`, indexed by residue index.
pub fn cube_histogram_mod(ring: PolyRing, r: &Poly) -> Result<Histogram> {
    let rr = ResidueRing::new(ring, r.clone())?;
    let f = ring.field();
    let g = ElemAbelian::new(f.p(), f.e() * rr.n() as u32)?;
    let mut h = Histogram::zeros(g);
    for x in rr.elements() {
        let c = rr.reduce(&ring.cube(&x));
        h.bump(c.index(ring.q()) as usize, 1);
    }
    Ok(h)
}

/// `#{(x, y, z) mod r : x^3 + y^3 + z^3 = k}` for every `k`, straight from
/// the table of cubes.
pub fn rho_table_brute(ring: PolyRing, r: &Poly) -> Result<Vec<u128>> {
    let h = cube_histogram_mod(ring, r)?;
    let hh = h.convolve(&h)?;
    Ok(hh.convolve(&h)?.counts().to_vec())
}

/// Counts modulo powers of one prime `w`.
#[derive(Debug, Clone)]
pub struct PrimePowerCounter<'a> {
    ring: PolyRing<'a>,
    prime: Poly,
    pi: u128,
    nu: Vec<u128>,
    powers: Vec<Poly>,
}

impl<'a> PrimePowerCounter<'a> {
    pub fn new(ring: PolyRing<'a>, prime: Poly) -> Result<Self> {
        let deg = prime.degree().ok_or(Error::ZeroModulus)?;
        if deg == 0 {
            return Err(Error::InvalidParams("prime must have positive degree".into()));
        }
        let nu = rho_table_brute(ring, &prime)?;
        let pi = (ring.q() as u128).pow(deg as u32);
        Ok(PrimePowerCounter { ring, prime, pi, nu, powers: vec![Poly::one()] })
    }

    pub fn prime(&self) -> &Poly {
        &self.prime
    }

    /// `|w|`.
    pub fn pi(&self) -> u128 {
        self.pi
    }

    /// Residue-field counts `nu(k)` indexed by the residue index of `k`.
    pub fn nu(&self) -> &[u128] {
        &self.nu
    }

    fn power(&mut self, e: usize) -> Poly {
        while self.powers.len() <= e {
            let next = self.ring.mul(self.powers.last().unwrap(), &self.prime);
            self.powers.push(next);
        }
        self.powers[e].clone()
    }

    fn smooth(&self, e: u32, kbar: &Poly) -> u128 {
        let idx = kbar.index(self.ring.q()) as usize;
        let n0 = self.nu[idx] - u128::from(kbar.is_zero());
        n0 * self.pi.pow(2 * (e - 1))
    }

    /// Triples modulo `w^e` not all divisible by `w`.
    pub fn rho_star(&self, e: u32, k: &Poly) -> u128 {
        assert!(e >= 1);
        let kbar = self.ring.rem(k, &self.prime).expect("nonzero prime");
        self.smooth(e, &kbar)
    }

    /// `rho(w^e, k)`.
    pub fn rho(&mut self, e: u32, k: &Poly) -> u128 {
        if e == 0 {
            return 1;
        }
        let kbar = self.ring.rem(k, &self.prime).expect("nonzero prime");
        let smooth = self.smooth(e, &kbar);
        let rest = if e <= 3 {
            let m = self.power(e as usize);
            if self.ring.rem(k, &m).unwrap().is_zero() {
                self.pi.pow(3 * (e - 1))
            } else {
                0
            }
        } else {
            let w3 = self.power(3);
            let (quo, rm) = self.ring.divmod(k, &w3).unwrap();
            if rm.is_zero() {
                let m = self.power(e as usize - 3);
                let reduced = self.ring.rem(&quo, &m).unwrap();
                self.rho(e - 3, &reduced) * self.pi.pow(6)
            } else {
                0
            }
        };
        smooth + rest
    }

    /// `rho(w^e, a)` for every residue `a mod w^e`, by residue index.
    pub fn rho_all(&mut self, e: u32) -> Result<Vec<u128>> {
        let m = self.power(e as usize);
        let rr = ResidueRing::new(self.ring, m)?;
        let card = rr.card();
        Ok((0..card).map(|i| self.rho(e, &rr.element(i))).collect())
    }

    /// `#{x mod w^j in 6 variables : F(x) = 0}` where `F = F_0(x) - F_0(y)`
    /// is counted as `sum_a rho(a) rho(-a)`.
    pub fn n6(&mut self, j: u32) -> Result<BigUint> {
        if j == 0 {
            return Ok(BigUint::one());
        }
        let table = self.rho_all(j)?;
        let m = self.power(j as usize);
        let rr = ResidueRing::new(self.ring, m)?;
        let mut acc = BigUint::zero();
        for (i, &v) in table.iter().enumerate() {
            if v == 0 {
                continue;
            }
            let neg = rr.neg(&rr.element(i as u64)).index(self.ring.q()) as usize;
            acc += BigUint::from(v) * BigUint::from(table[neg]);
        }
        Ok(acc)
    }

    /// `S_{w^j}(0) = |w|^j n6(j) - |w|^{j+5} n6(j-1)`.
    pub fn s_r0(&mut self, j: u32) -> Result<BigInt> {
        if j == 0 {
            return Ok(BigInt::one());
        }
        let pi = BigInt::from(self.pi);
        let a = BigInt::from(self.n6(j)?) * pi.pow(j);
        let b = BigInt::from(self.n6(j - 1)?) * pi.pow(j + 5);
        Ok(a - b)
    }
}

/// The modulus `N(M) = prod_{deg w <= M} w^{floor(M / deg w)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModulusN {
    pub m: u32,
    pub factors: Vec<(Poly, u32)>,
    pub value: Poly,
}

impl ModulusN {
    pub fn degree(&self) -> usize {
        self.value.degree().unwrap_or(0)
    }
}

pub fn modulus_n(ring: PolyRing, m: u32) -> Result<ModulusN> {
    limits::check_default("modulus N(M)", ring.q() as u64, m as u64)?;
    let mut factors = Vec::new();
    let mut value = Poly::one();
    for deg in 1..=m as usize {
        for w in ring.primes_of_degree(deg)? {
            let e = m / deg as u32;
            value = ring.mul(&value, &ring.pow(&w, e as u64));
            factors.push((w, e));
        }
    }
    Ok(ModulusN { m, factors, value })
}

/// Densities modulo a fixed `N`, assembled from its prime powers by CRT.
#[derive(Debug, Clone)]
pub struct ResidueDensities<'a> {
    ring: PolyRing<'a>,
    modulus: Poly,
    parts: Vec<(PrimePowerCounter<'a>, u32, Poly)>,
}

impl<'a> ResidueDensities<'a> {
    pub fn new(ring: PolyRing<'a>, modulus: &Poly) -> Result<Self> {
        let modulus = ring.monic(modulus);
        let factors = if modulus.degree() == Some(0) { Vec::new() } else { ring.factor(&modulus)? };
        Self::from_factors(ring, modulus, factors)
    }

    pub fn from_modulus_n(ring: PolyRing<'a>, n: &ModulusN) -> Result<Self> {
        Self::from_factors(ring, n.value.clone(), n.factors.clone())
    }

    fn from_factors(ring: PolyRing<'a>, modulus: Poly, factors: Vec<(Poly, u32)>) -> Result<Self> {
        let mut parts = Vec::new();
        for (w, e) in factors {
            let pe = ring.pow(&w, e as u64);
            parts.push((PrimePowerCounter::new(ring, w)?, e, pe));
        }
        Ok(ResidueDensities { ring, modulus, parts })
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    /// `|N|` as a power of `q`.
    pub fn deg(&self) -> usize {
        self.modulus.degree().unwrap_or(0)
    }

    pub fn rho(&mut self, k: &Poly) -> BigUint {
        let mut acc = BigUint::one();
        for (c, e, pe) in self.parts.iter_mut() {
            let kr = self.ring.rem(k, pe).unwrap();
            acc *= BigUint::from(c.rho(*e, &kr));
        }
        acc
    }

    /// `rho(N, k) / |N|^2`.
    pub fn rho_tilde(&mut self, k: &Poly) -> BigRational {
        let n2 = BigInt::from(self.ring.q()).pow(2 * self.deg() as u32);
        BigRational::new(BigInt::from(self.rho(k)), n2)
    }

    /// `rho(N, a)` for every residue `a mod N`, by residue index.
    pub fn rho_all(&mut self) -> Result<Vec<u128>> {
        let rr = ResidueRing::new(self.ring, self.modulus.clone())?;
        let tables: Vec<Vec<u128>> = self.parts.iter_mut().map(|(c, e, _)| c.rho_all(*e)).collect::<Result<_>>()?;
        let mut out = Vec::with_capacity(rr.card() as usize);
        for i in 0..rr.card() {
            let a = rr.element(i);
            let mut v = 1u128;
            for ((_, _, pe), t) in self.parts.iter().zip(&tables) {
                let ai = self.ring.rem(&a, pe).unwrap().index(self.ring.q());
                v = v.checked_mul(t[ai as usize]).ok_or(Error::TooLarge { what: "rho value", bits: 128, cap: 128 })?;
            }
            out.push(v);
        }
        Ok(out)
    }

    /// `rho6~(N) = |N|^{-5} sum_a rho(N, a) rho(N, -a)`, by CRT over prime powers.
    pub fn rho6_tilde(&mut self) -> Result<BigRational> {
        let mut acc = BigRational::one();
        for (c, e, _) in self.parts.iter_mut() {
            let n6 = c.n6(*e)?;
            let den = BigInt::from(c.pi()).pow(5 * *e);
            acc *= BigRational::new(BigInt::from(n6), den);
        }
        Ok(acc)
    }

    /// Same quantity summed directly over all residues of `N`.
    pub fn rho6_tilde_direct(&mut self) -> Result<BigRational> {
        let table = self.rho_all()?;
        let rr = ResidueRing::new(self.ring, self.modulus.clone())?;
        let mut acc = BigInt::zero();
        for (i, &v) in table.iter().enumerate() {
            if v == 0 {
                continue;
            }
            let j = rr.neg(&rr.element(i as u64)).index(self.ring.q());
            acc += BigInt::from(v) * BigInt::from(table[j as usize]);
        }
        let den = BigInt::from(self.ring.q()).pow(5 * self.deg() as u32);
        Ok(BigRational::new(acc, den))
    }

    /// `|N|^{-1} sum_{k mod N} 1 / rho~(N, k)`, as a product over prime powers.
    pub fn recip_rho_average(&mut self) -> Result<BigRational> {
        let mut acc = BigRational::one();
        for (c, e, _) in self.parts.iter_mut() {
            let t = c.rho_all(*e)?;
            let pe = BigInt::from(c.pi()).pow(*e);
            let mut s = BigRational::zero();
            for &v in &t {
                if v == 0 {
                    return Err(Error::ZeroDensityClass);
                }
                s += BigRational::new(&pe * &pe, BigInt::from(v));
            }
            acc *= s / BigRational::from_integer(pe);
        }
        Ok(acc)
    }

    /// Direct average over all residues of `N`.
    pub fn recip_rho_average_direct(&mut self) -> Result<BigRational> {
        let table = self.rho_all()?;
        let n = BigInt::from(self.ring.q()).pow(self.deg() as u32);
        let mut s = BigRational::zero();
        for &v in &table {
            if v == 0 {
                return Err(Error::ZeroDensityClass);
            }
            s += BigRational::new(&n * &n, BigInt::from(v));
        }
        Ok(s / BigRational::from_integer(n))
    }

    pub fn parts(&self) -> impl Iterator<Item = (&Poly, u32)> {
        self.parts.iter().map(|(c, e, _)| (c.prime(), *e))
    }
}

/// `rho(r, k)` for any nonzero `r`.
pub fn rho(ring: PolyRing, r: &Poly, k: &Poly) -> Result<BigUint> {
    Ok(ResidueDensities::new(ring, r)?.rho(k))
}

pub fn rho_star(ring: PolyRing, prime: &Poly, e: u32, k: &Poly) -> Result<u128> {
    Ok(PrimePowerCounter::new(ring, prime.clone())?.rho_star(e, k))
}

/// Element of `Z[x]/(x^p - 1)`, mapped to `Z[zeta_p]` when read out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloInt {
    pub coeffs: Vec<i128>,
}

impl CycloInt {
    pub fn one(p: u32) -> Self {
        let mut coeffs = vec![0; p as usize];
        coeffs[0] = 1;
        CycloInt { coeffs }
    }

    pub fn mul(&self, o: &CycloInt) -> Result<CycloInt> {
        let p = self.coeffs.len();
        let mut out = vec![0i128; p];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                let t = a.checked_mul(b).and_then(|t| t.checked_add(out[(i + j) % p]));
                out[(i + j) % p] = t.ok_or(Error::TooLarge { what: "cyclotomic coefficient", bits: 127, cap: 127 })?;
            }
        }
        Ok(CycloInt { coeffs: out })
    }

    pub fn pow(&self, k: u32) -> Result<CycloInt> {
        let mut acc = CycloInt::one(self.coeffs.len() as u32);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn add_assign(&mut self, o: &CycloInt) {
        for (a, b) in self.coeffs.iter_mut().zip(&o.coeffs) {
            *a += b;
        }
    }

    /// The rational integer this element equals in `Z[zeta_p]`, if it is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        let c1 = *self.coeffs.get(1)?;
        if self.coeffs[1..].iter().any(|&c| c != c1) {
            return None;
        }
        Some(BigInt::from(self.coeffs[0]) - BigInt::from(c1))
    }

    pub fn to_complex(&self) -> Complex64 {
        let p = self.coeffs.len() as f64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, &c)| Complex64::from_polar(c as f64, std::f64::consts::TAU * j as f64 / p))
            .sum()
    }
}

/// `T(a, r) = sum_{x mod r} psi(a x^3 / r)` for every unit `a mod r`,
/// grouped by the value of `x^3`.
pub fn weyl_sums(ring: PolyRing, r: &Poly) -> Result<Vec<(Poly, CycloInt)>> {
    let r = ring.monic(r);
    let rr = ResidueRing::new(ring, r.clone())?;
    let f = ring.field();
    let p = f.p();
    let h = cube_histogram_mod(ring, &r)?;
    let support: Vec<(Vec<u32>, u128)> = h
        .counts()
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(i, &c)| {
            let mut digits = Vec::new();
            let mut x = i as u64;
            for _ in 0..h.group().n() {
                digits.push((x % p as u64) as u32);
                x /= p as u64;
            }
            (digits, c)
        })
        .collect();
    let n = rr.n();
    let mut out = Vec::new();
    for a in rr.units() {
        // psi(a c / r) is F_p-linear in c; read it off on the basis u^i t^j.
        let mut ell = Vec::with_capacity(n * f.e() as usize);
        for j in 0..n {
            for i in 0..f.e() {
                let b = Poly::monomial(crate::gf::FqElem(p.pow(i)), j);
                ell.push(ring.psi_frac(&ring.mul(&a, &b), &r)?);
            }
        }
        let mut t = CycloInt { coeffs: vec![0; p as usize] };
        for (digits, c) in &support {
            let lam = digits.iter().zip(&ell).map(|(&d, &l)| d as u64 * l as u64).sum::<u64>() % p as u64;
            t.coeffs[lam as usize] += *c as i128;
        }
        out.push((a, t));
    }
    Ok(out)
}

/// `S_r(0) = sum_a T(a, r)^6` via characters: exact value and its complex evaluation.
pub fn s_r0_characters(ring: PolyRing, r: &Poly) -> Result<(BigInt, Complex64)> {
    if r.degree() == Some(0) {
        return Ok((BigInt::one(), Complex64::new(1.0, 0.0)));
    }
    let p = ring.field().p();
    let mut acc = CycloInt { coeffs: vec![0; p as usize] };
    let mut z = Complex64::new(0.0, 0.0);
    for (_, t) in weyl_sums(ring, r)? {
        let t6 = t.pow(6)?;
        z += t.to_complex().powu(6);
        acc.add_assign(&t6);
    }
    let exact = acc.to_integer().ok_or(Error::InvalidParams("S_r(0) is not rational".into()))?;
    Ok((exact, z))
}

/// `S_r(0)` from point counts, multiplicatively over the prime powers of `r`.
pub fn s_r0(ring: PolyRing, r: &Poly) -> Result<BigInt> {
    if r.degree() == Some(0) {
        return Ok(BigInt::one());
    }
    let mut acc = BigInt::one();
    for (w, e) in ring.factor(r)? {
        acc *= PrimePowerCounter::new(ring, w)?.s_r0(e)?;
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingularSeriesPartial {
    pub m_max: u32,
    pub partial: BigRational,
    /// `sum_{deg r = R} |r|^{-6} |S_r(0)|` for `R = 0..=m_max`.
    pub per_degree_tail: Vec<BigRational>,
}

/// Partial sums of `sum_r |r|^{-6} S_r(0)` over monic `r` with `deg r <= m_max`.
pub fn singular_series(ring: PolyRing, m_max: u32) -> Result<SingularSeriesPartial> {
    limits::check_default("singular series", ring.q() as u64, m_max as u64)?;
    let mut cache: HashMap<(Poly, u32), BigInt> = HashMap::new();
    let mut counters: HashMap<Poly, PrimePowerCounter> = HashMap::new();
    let q = BigInt::from(ring.q());
    let mut partial = BigRational::zero();
    let mut tails = Vec::new();
    for deg in 0..=m_max as usize {
        let den = q.pow(6 * deg as u32);
        let mut tail = BigInt::zero();
        let mut signed = BigInt::zero();
        for r in ring.monics_of_degree(deg)? {
            let mut s = BigInt::one();
            if deg > 0 {
                for (w, e) in ring.factor(&r)? {
                    let key = (w.clone(), e);
                    if !cache.contains_key(&key) {
                        if !counters.contains_key(&w) {
                            counters.insert(w.clone(), PrimePowerCounter::new(ring, w.clone())?);
                        }
                        let v = counters.get_mut(&w).unwrap().s_r0(e)?;
                        cache.insert(key.clone(), v);
                    }
                    s *= &cache[&key];
                }
            }
            tail += s.abs();
            signed += s;
        }
        partial += BigRational::new(signed, den.clone());
        tails.push(BigRational::new(tail, den));
    }
    Ok(SingularSeriesPartial { m_max, partial, per_degree_tail: tails })
}

/// Both sides of `rho6~(N) = sum_{r | N} |r|^{-6} S_r(0)`: the left from
/// residue counts, the right from character sums over monic divisors.
pub fn rho6_divisor_identity(ring: PolyRing, n: &ModulusN) -> Result<(BigRational, BigRational)> {
    let mut dens = ResidueDensities::from_modulus_n(ring, n)?;
    let lhs = dens.rho6_tilde()?;
    let q = BigInt::from(ring.q());
    // Per prime: sum_{j <= e} |w|^{-6j} S_{w^j}(0); divisor sums factor over primes.
    let mut rhs = BigRational::one();
    for (w, e) in &n.factors {
        let mut s = BigRational::one();
        for j in 1..=*e {
            let wj = ring.pow(w, j as u64);
            let (val, _) = s_r0_characters(ring, &wj)?;
            s += BigRational::new(val, q.pow(6 * wj.degree().unwrap() as u32));
        }
        rhs *= s;
    }
    Ok((lhs, rhs))
}

/// Same right-hand side, summed over every monic divisor of `N` explicitly.
pub fn rho6_divisor_sum_explicit(ring: PolyRing, n: &ModulusN) -> Result<BigRational> {
    let mut per_prime: Vec<Vec<(usize, BigInt)>> = Vec::new();
    for (w, e) in &n.factors {
        let mut v = vec![(0usize, BigInt::one())];
        for j in 1..=*e {
            let wj = ring.pow(w, j as u64);
            let (val, _) = s_r0_characters(ring, &wj)?;
            v.push((wj.degree().unwrap(), val));
        }
        per_prime.push(v);
    }
    let q = BigInt::from(ring.q());
    let top = n.degree();
    // Common denominator |N|^6.
    let mut num = BigInt::zero();
    let mut idx = vec![0usize; per_prime.len()];
    loop {
        let mut deg = 0;
        let mut s = BigInt::one();
        for (k, &i) in idx.iter().enumerate() {
            deg += per_prime[k][i].0;
            s *= &per_prime[k][i].1;
        }
        num += s * q.pow(6 * (top - deg) as u32);
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(BigRational::new(num, q.pow(6 * top as u32)));
            }
            idx[k] += 1;
            if idx[k] < per_prime[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Lower bound for `prod_{w | N} (1 + 8 / |w|^{3/2})`, using
/// `|w|^{3/2} <= |w| (isqrt(|w|) + 1)`.
pub fn prop33_bound_lower(dens: &ResidueDensities) -> BigRational {
    let mut acc = BigRational::one();
    for (w, _) in dens.parts() {
        let pi = (dens.ring.q() as u64).pow(w.degree().unwrap() as u32);
        let s = (pi as f64).sqrt() as u64;
        let s = (s.saturating_sub(2)..=s + 2).filter(|&x| x * x <= pi).max().unwrap_or(0);
        let den = BigInt::from(pi) * BigInt::from(s + 1);
        acc *= BigRational::one() + BigRational::new(BigInt::from(8), den);
    }
    acc
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldCtx;

    fn p(v: &[u32]) -> Poly {
        Poly::from_indices(v)
    }

    #[test]
    fn rho_examples_over_f2() {
        let f = FieldCtx::new(2, 1).unwrap();
        let r = PolyRing::new(&f);
        assert_eq!(rho(r, &p(&[0, 1]), &Poly::one()).unwrap(), BigUint::from(4u32));
        assert_eq!(rho(r, &p(&[1, 1, 1]), &Poly::zero()).unwrap(), BigUint::from(28u32));
        assert_eq!(rho(r, &p(&[0, 1, 1]), &Poly::one()).unwrap(), BigUint::from(16u32));
    }

    #[test]
    fn recursion_matches_brute_on_prime_powers() {
        for (pp, e) in [(2u32, 1u32), (5, 1), (2, 2), (7, 1)] {
            let f = FieldCtx::new(pp, e).unwrap();
            let r = PolyRing::new(&f);
            for deg in 1..=2 {
                for w in r.primes_of_degree(deg).unwrap() {
                    let mut c = PrimePowerCounter::new(r, w.clone()).unwrap();
                    let mut ex = 1;
                    loop {
                        let m = r.pow(&w, ex as u64);
                        if (f.q() as u64).pow((deg * ex) as u32) > 256 {
                            break;
                        }
                        let brute = rho_table_brute(r, &m).unwrap();
                        assert_eq!(c.rho_all(ex as u32).unwrap(), brute, "q={} w={w} e={ex}", f.q());
                        ex += 1;
                    }
                }
            }
        }
    }

    #[test]
    fn modulus_n_examples() {
        let f = FieldCtx::new(2, 1).unwrap();
        let r = PolyRing::new(&f);
        assert_eq!(modulus_n(r, 0).unwrap().value, Poly::one());
        assert_eq!(modulus_n(r, 1).unwrap().value, p(&[0, 1, 1]));
        let n2 = modulus_n(r, 2).unwrap();
        assert_eq!(n2.degree(), 6);
        let want = r.mul(&r.mul(&p(&[0, 0, 1]), &p(&[1, 0, 1])), &p(&[1, 1, 1]));
        assert_eq!(n2.value, want);
    }

    #[test]
    fn s_r0_examples() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        let r2 = PolyRing::new(&f2);
        assert_eq!(s_r0(r2, &p(&[0, 1])).unwrap(), BigInt::zero());
        assert_eq!(s_r0_characters(r2, &p(&[0, 1])).unwrap().0, BigInt::zero());
        assert_eq!(s_r0(r2, &Poly::one()).unwrap(), BigInt::one());
        let f5 = FieldCtx::new(5, 1).unwrap();
        let r5 = PolyRing::new(&f5);
        assert_eq!(s_r0(r5, &p(&[0, 1])).unwrap(), BigInt::zero());
    }

    #[test]
    fn recip_average_examples() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        let r2 = PolyRing::new(&f2);
        let mut d = ResidueDensities::new(r2, &p(&[0, 1])).unwrap();
        assert_eq!(d.recip_rho_average().unwrap(), BigRational::one());
        let mut d1 = ResidueDensities::new(r2, &Poly::one()).unwrap();
        assert_eq!(d1.recip_rho_average().unwrap(), BigRational::one());
        // t^2 + t + 1 has residue field F_4, where cubes are {0, 1}.
        let mut d4 = ResidueDensities::new(r2, &p(&[1, 1, 1])).unwrap();
        assert_eq!(d4.recip_rho_average().unwrap_err(), Error::ZeroDensityClass);
    }
}
