//! Polynomials over `F_q`, residue rings `F_q[t]/(r)`, CRT and the additive
//! character `psi` on `F_q((1/t))`.

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;

use crate::gf::{FieldCtx, FqElem};
use crate::limits;
use crate::{Error, Result};

/// Coefficients low to high with no trailing zeros; the zero polynomial is empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly(Vec<FqElem>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn one() -> Self {
        Poly(vec![FqElem::ONE])
    }

    pub fn t() -> Self {
        Poly(vec![FqElem::ZERO, FqElem::ONE])
    }

    pub fn constant(c: FqElem) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn monomial(c: FqElem, n: usize) -> Self {
        let mut v = vec![FqElem::ZERO; n + 1];
        v[n] = c;
        Self::from_coeffs(v)
    }

    pub fn from_coeffs(mut v: Vec<FqElem>) -> Self {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        Poly(v)
    }

    pub fn from_indices(v: &[u32]) -> Self {
        Self::from_coeffs(v.iter().map(|&i| FqElem(i)).collect())
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> FqElem {
        self.0.get(i).copied().unwrap_or(FqElem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// Degree with `-1` standing in for the zero polynomial.
    pub fn deg_i64(&self) -> i64 {
        self.0.len() as i64 - 1
    }

    pub fn lead(&self) -> FqElem {
        self.0.last().copied().unwrap_or(FqElem::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == FqElem::ONE
    }

    pub fn size_exp(&self) -> SizeExp {
        match self.degree() {
            None => SizeExp::NegInf,
            Some(d) => SizeExp::Exp(d as i64),
        }
    }

    /// Base-`q` index of the coefficient vector.
    pub fn index(&self, q: u32) -> u64 {
        self.0.iter().rev().fold(0u64, |acc, c| acc * q as u64 + c.0 as u64)
    }

    pub fn from_index(mut idx: u64, q: u32) -> Self {
        let mut v = Vec::new();
        while idx > 0 {
            v.push(FqElem((idx % q as u64) as u32));
            idx /= q as u64;
        }
        Poly(v)
    }

    /// Coefficient indices separated by commas, low to high (`"0"` for zero).
    pub fn to_coeff_string(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.0.iter().map(|c| c.0.to_string()).collect::<Vec<_>>().join(",")
    }

    pub fn parse_coeff_string(s: &str, q: u32) -> Result<Self> {
        let mut v = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let c: u32 = part
                .parse()
                .map_err(|_| Error::InvalidParams(format!("bad coefficient {part:?}")))?;
            if c >= q {
                return Err(Error::InvalidParams(format!("coefficient {c} not below q = {q}")));
            }
            v.push(FqElem(c));
        }
        Ok(Self::from_coeffs(v))
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![FqElem::ZERO; k];
        v.extend_from_slice(&self.0);
        Poly(v)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_coeff_string())
    }
}

/// `|f| = q^n` recorded as the exponent `n`, with `NegInf` for `f = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SizeExp {
    NegInf,
    Exp(i64),
}

impl SizeExp {
    pub fn mul(self, o: SizeExp) -> SizeExp {
        match (self, o) {
            (SizeExp::Exp(a), SizeExp::Exp(b)) => SizeExp::Exp(a + b),
            _ => SizeExp::NegInf,
        }
    }
}

/// Arithmetic in `F_q[t]` for a fixed field.
#[derive(Clone, Copy, Debug)]
pub struct PolyRing<'a> {
    f: &'a FieldCtx,
}

impl<'a> PolyRing<'a> {
    pub fn new(f: &'a FieldCtx) -> Self {
        PolyRing { f }
    }

    pub fn field(&self) -> &'a FieldCtx {
        self.f
    }

    pub fn q(&self) -> u32 {
        self.f.q()
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.0.len().max(b.0.len());
        Poly::from_coeffs((0..n).map(|i| self.f.add(a.coeff(i), b.coeff(i))).collect())
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.0.len().max(b.0.len());
        Poly::from_coeffs((0..n).map(|i| self.f.sub(a.coeff(i), b.coeff(i))).collect())
    }

    pub fn neg(&self, a: &Poly) -> Poly {
        Poly(a.0.iter().map(|&c| self.f.neg(c)).collect())
    }

    pub fn scale(&self, a: &Poly, c: FqElem) -> Poly {
        Poly::from_coeffs(a.0.iter().map(|&x| self.f.mul(x, c)).collect())
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![FqElem::ZERO; a.0.len() + b.0.len() - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                v[i + j] = self.f.add(v[i + j], self.f.mul(x, y));
            }
        }
        Poly::from_coeffs(v)
    }

    pub fn pow(&self, a: &Poly, mut k: u64) -> Poly {
        let mut base = a.clone();
        let mut acc = Poly::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn cube(&self, a: &Poly) -> Poly {
        self.mul(&self.mul(a, a), a)
    }

    pub fn divmod(&self, a: &Poly, b: &Poly) -> Result<(Poly, Poly)> {
        let db = b.degree().ok_or(Error::DivisionByZero)?;
        let inv = self.f.inv(b.lead())?;
        let mut r = a.0.clone();
        if r.len() <= db {
            return Ok((Poly::zero(), a.clone()));
        }
        let mut quo = vec![FqElem::ZERO; r.len() - db];
        for i in (db..r.len()).rev() {
            let c = self.f.mul(r[i], inv);
            if c.is_zero() {
                continue;
            }
            quo[i - db] = c;
            for (j, &bj) in b.0.iter().enumerate() {
                let k = i - db + j;
                r[k] = self.f.sub(r[k], self.f.mul(c, bj));
            }
        }
        r.truncate(db);
        Ok((Poly::from_coeffs(quo), Poly::from_coeffs(r)))
    }

    pub fn rem(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        Ok(self.divmod(a, b)?.1)
    }

    pub fn divides(&self, d: &Poly, a: &Poly) -> Result<bool> {
        Ok(self.rem(a, d)?.is_zero())
    }

    pub fn monic(&self, a: &Poly) -> Poly {
        if a.is_zero() {
            return Poly::zero();
        }
        let inv = self.f.inv(a.lead()).expect("nonzero lead");
        self.scale(a, inv)
    }

    /// Monic gcd (zero if both inputs vanish).
    pub fn gcd(&self, a: &Poly, b: &Poly) -> Poly {
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let r = self.rem(&a, &b).expect("b nonzero");
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    /// `(g, u, v)` with `u a + v b = g` and `g` monic.
    pub fn ext_gcd(&self, a: &Poly, b: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (qt, r2) = self.divmod(&r0, &r1).expect("nonzero");
            let s2 = self.sub(&s0, &self.mul(&qt, &s1));
            let t2 = self.sub(&t0, &self.mul(&qt, &t1));
            r0 = std::mem::replace(&mut r1, r2);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = self.f.inv(r0.lead()).expect("nonzero");
        (self.scale(&r0, inv), self.scale(&s0, inv), self.scale(&t0, inv))
    }

    pub fn mulmod(&self, a: &Poly, b: &Poly, m: &Poly) -> Result<Poly> {
        self.rem(&self.mul(a, b), m)
    }

    pub fn powmod(&self, a: &Poly, mut k: u64, m: &Poly) -> Result<Poly> {
        let mut base = self.rem(a, m)?;
        let mut acc = self.rem(&Poly::one(), m)?;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mulmod(&acc, &base, m)?;
            }
            k >>= 1;
            if k > 0 {
                base = self.mulmod(&base, &base, m)?;
            }
        }
        Ok(acc)
    }

    pub fn eval(&self, a: &Poly, x: FqElem) -> FqElem {
        a.0.iter().rev().fold(FqElem::ZERO, |acc, &c| self.f.add(self.f.mul(acc, x), c))
    }

    pub fn is_irreducible(&self, f: &Poly) -> bool {
        let n = match f.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let t = Poly::t();
        let mut h = t.clone();
        for _ in 1..=n / 2 {
            h = self.powmod(&h, self.q() as u64, f).expect("nonzero modulus");
            let g = self.gcd(f, &self.sub(&h, &t));
            if g.degree() != Some(0) {
                return false;
            }
        }
        true
    }

    /// All monic polynomials of degree `n`, in index order of their lower part.
    pub fn monics_of_degree(&self, n: usize) -> Result<impl Iterator<Item = Poly> + '_> {
        limits::check_default("monic enumeration", self.q() as u64, n as u64)?;
        let q = self.q();
        let count = (q as u64).pow(n as u32);
        Ok((0..count).map(move |i| {
            let mut v = Poly::from_index(i, q).0;
            v.resize(n, FqElem::ZERO);
            v.push(FqElem::ONE);
            Poly(v)
        }))
    }

    /// All polynomials of degree exactly `n`.
    pub fn polys_of_degree(&self, n: usize) -> Result<impl Iterator<Item = Poly> + '_> {
        limits::check_default("polynomial enumeration", self.q() as u64, n as u64 + 1)?;
        let q = self.q() as u64;
        let lo = q.pow(n as u32);
        Ok((lo..lo * q).map(move |i| Poly::from_index(i, q as u32)))
    }

    pub fn primes_of_degree(&self, n: usize) -> Result<Vec<Poly>> {
        Ok(self.monics_of_degree(n)?.filter(|f| self.is_irreducible(f)).collect())
    }

    /// Factorization of a nonzero polynomial into monic primes with
    /// multiplicities, ignoring the leading unit.
    pub fn factor(&self, r: &Poly) -> Result<Vec<(Poly, u32)>> {
        let n = r.degree().ok_or(Error::ZeroModulus)?;
        if limits::log2_ceil_pow(self.q() as u64, (n / 2) as u64) > limits::cap_bits() {
            return Err(Error::FactorizationCapExceeded(n));
        }
        let mut rest = self.monic(r);
        let mut out = Vec::new();
        let mut deg = 1;
        while let Some(dr) = rest.degree() {
            if dr == 0 {
                break;
            }
            if 2 * deg > dr {
                out.push((rest.clone(), 1));
                break;
            }
            for p in self.primes_of_degree(deg)? {
                let mut k = 0;
                loop {
                    let (qt, rm) = self.divmod(&rest, &p)?;
                    if !rm.is_zero() {
                        break;
                    }
                    rest = qt;
                    k += 1;
                }
                if k > 0 {
                    out.push((p, k));
                }
            }
            deg += 1;
        }
        out.sort_by(|a, b| cmp_poly(&a.0, &b.0));
        Ok(out)
    }

    /// Chinese remainder: the unique `x` with `deg x < sum deg m_i` and
    /// `x = r_i mod m_i`.
    pub fn crt(&self, residues: &[Poly], moduli: &[Poly]) -> Result<Poly> {
        if residues.len() != moduli.len() {
            return Err(Error::SizeMismatch(residues.len(), moduli.len()));
        }
        let mut x = Poly::zero();
        let mut m = Poly::one();
        for (r, mi) in residues.iter().zip(moduli) {
            if mi.is_zero() {
                return Err(Error::ZeroModulus);
            }
            let (g, u, _) = self.ext_gcd(&m, mi);
            if g.degree() != Some(0) {
                return Err(Error::NotCoprime);
            }
            // x + m * ((r - x) u mod mi), where u = m^{-1} mod mi
            let delta = self.mulmod(&self.sub(r, &x), &u, mi)?;
            x = self.add(&x, &self.mul(&m, &delta));
            m = self.mul(&m, mi);
            x = self.rem(&x, &m)?;
        }
        Ok(x)
    }

    /// Exponent `j` in `psi(a / r) = e(j / p)`: the trace of the coefficient
    /// of `t^{-1}` in the expansion of `a / r`.
    pub fn psi_frac(&self, a: &Poly, r: &Poly) -> Result<u32> {
        let n = r.degree().ok_or(Error::ZeroModulus)?;
        if n == 0 {
            return Ok(0);
        }
        let red = self.rem(a, r)?;
        let c = self.f.div(red.coeff(n - 1), r.lead())?;
        Ok(self.f.trace(c))
    }

    pub fn psi_value(&self, a: &Poly, r: &Poly) -> Result<Complex64> {
        let j = self.psi_frac(a, r)?;
        Ok(Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / self.f.p() as f64))
    }
}

/// Orders polynomials by degree, then by coefficients from the top.
pub fn cmp_poly(a: &Poly, b: &Poly) -> Ordering {
    a.0.len().cmp(&b.0.len()).then_with(|| a.0.iter().rev().cmp(b.0.iter().rev()))
}

/// `F_q[t]/(r)`, with elements indexed by the base-`q` index of their
/// reduced representative.
#[derive(Clone, Debug)]
pub struct ResidueRing<'a> {
    ring: PolyRing<'a>,
    modulus: Poly,
    n: usize,
}

impl<'a> ResidueRing<'a> {
    pub fn new(ring: PolyRing<'a>, modulus: Poly) -> Result<Self> {
        let n = modulus.degree().ok_or(Error::ZeroModulus)?;
        limits::check_default("residue ring", ring.q() as u64, n as u64)?;
        Ok(ResidueRing { ring, modulus, n })
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn ring(&self) -> PolyRing<'a> {
        self.ring
    }

    /// Degree of the modulus, so the ring has `q^n` elements.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn card(&self) -> u64 {
        (self.ring.q() as u64).pow(self.n as u32)
    }

    pub fn reduce(&self, a: &Poly) -> Poly {
        self.ring.rem(a, &self.modulus).expect("nonzero modulus")
    }

    pub fn element(&self, idx: u64) -> Poly {
        Poly::from_index(idx, self.ring.q())
    }

    pub fn index(&self, a: &Poly) -> u64 {
        self.reduce(a).index(self.ring.q())
    }

    pub fn elements(&self) -> impl Iterator<Item = Poly> + '_ {
        (0..self.card()).map(|i| self.element(i))
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        self.reduce(&self.ring.add(a, b))
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.reduce(&self.ring.mul(a, b))
    }

    pub fn neg(&self, a: &Poly) -> Poly {
        self.reduce(&self.ring.neg(a))
    }

    pub fn is_unit(&self, a: &Poly) -> bool {
        self.ring.gcd(a, &self.modulus).degree() == Some(0)
    }

    pub fn units(&self) -> impl Iterator<Item = Poly> + '_ {
        self.elements().filter(|a| self.is_unit(a))
    }
}
