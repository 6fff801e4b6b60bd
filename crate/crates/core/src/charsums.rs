//! Cubic Gauss and Jacobi sums, the constants `c_w` attached to primes of
//! even degree, diagonal cubic point counts over finite fields, and the
//! certificate that a fixed modulus has small cubic density.

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::gf::{CubicCharacter, EisensteinInt, Embedding, FieldCtx, FqElem};
use crate::report::rat_string;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussSumValue {
    pub value: Complex64,
    pub m: u64,
}

impl GaussSumValue {
    /// `g / sqrt(m)`, of absolute value one.
    pub fn normalized(&self) -> Complex64 {
        self.value / (self.m as f64).sqrt()
    }
}

fn additive_table(p: u32) -> Vec<Complex64> {
    (0..p).map(|j| Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / p as f64)).collect()
}

fn omega_table() -> [Complex64; 3] {
    [0, 1, 2].map(|j| EisensteinInt::omega_pow(j).to_complex())
}

/// `g(chi) = sum_u chi(u) e_p(Tr u)`.
pub fn gauss_sum(chi: &CubicCharacter) -> GaussSumValue {
    let f = chi.ctx();
    let ep = additive_table(f.p());
    let om = omega_table();
    let mut s = Complex64::new(0.0, 0.0);
    for u in f.units() {
        s += om[chi.exponent(u).unwrap() as usize] * ep[f.trace(u) as usize];
    }
    GaussSumValue { value: s, m: f.q() as u64 }
}

/// Gauss sum of `chi o N` over a larger field, where `chi` lives on the
/// small field of `emb`.
pub fn gauss_sum_lifted(chi: &CubicCharacter, emb: &Embedding) -> GaussSumValue {
    let big = emb.big();
    let ep = additive_table(big.p());
    let om = omega_table();
    let mut s = Complex64::new(0.0, 0.0);
    for y in big.units() {
        let j = chi.exponent(emb.norm(y)).unwrap();
        s += om[j as usize] * ep[big.trace(y) as usize];
    }
    GaussSumValue { value: s, m: big.q() as u64 }
}

/// `J(chi, chi) = sum_u chi(u) chi(1 - u)`, exactly.
pub fn jacobi_sum(chi: &CubicCharacter) -> EisensteinInt {
    let f = chi.ctx();
    let mut n = [0i64; 3];
    for u in f.units() {
        let v = f.sub(f.one(), u);
        if let Some(jv) = chi.exponent(v) {
            n[((chi.exponent(u).unwrap() + jv) % 3) as usize] += 1;
        }
    }
    // n0 + n1 w + n2 w^2 with w^2 = -1 - w
    EisensteinInt::new(n[0] - n[2], n[1] - n[2])
}

/// The quadratic extension `F_{q^2}` of the base field together with its
/// cubic Jacobi sum; every `c_w` for primes of degree `2d` derives from it.
#[derive(Debug, Clone)]
pub struct QuadraticBase {
    q: u64,
    field: FieldCtx,
    jacobi: EisensteinInt,
}

impl QuadraticBase {
    pub fn new(p: u32, e: u32) -> Result<Self> {
        let field = FieldCtx::new(p, 2 * e)?;
        let chi = CubicCharacter::new(&field)?;
        let jacobi = jacobi_sum(&chi);
        Ok(QuadraticBase { q: (p as u64).pow(e), field, jacobi })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn jacobi(&self) -> &EisensteinInt {
        &self.jacobi
    }

    /// `(-J)^d`.
    pub fn minus_j_pow(&self, d: u32) -> EisensteinInt {
        (-&self.jacobi).pow(d)
    }

    /// `c = -2 Re((-J)^d)`, shared by all primes of degree `2d` over `F_q`.
    pub fn c_varpi(&self, d: u32) -> BigInt {
        -self.minus_j_pow(d).two_re()
    }

    /// Whether `Re((-g~^3)^d) >= 9/10`, i.e. `10 * 2Re((-J)^d) >= 18 q^d`.
    pub fn lemma21_holds(&self, d: u32) -> bool {
        let lhs = self.minus_j_pow(d).two_re() * 10;
        let rhs = BigInt::from(self.q).pow(d) * 18;
        lhs >= rhs
    }

    pub fn lemma21_search(&self, d_max: u32) -> Result<u32> {
        (1..=d_max).find(|&d| self.lemma21_holds(d)).ok_or(Error::NotFoundWithin { d_max })
    }
}

pub fn c_varpi(p: u32, e: u32, d: u32) -> Result<BigInt> {
    Ok(QuadraticBase::new(p, e)?.c_varpi(d))
}

/// `|g~(chi o N) + (-g~(chi))^d|` for `chi` on `F_{q^2}` and `N` the norm
/// from `F_{q^{2d}}`.
pub fn hasse_davenport_check(p: u32, e: u32, d: u32) -> Result<f64> {
    crate::limits::check("Gauss sum field", p as u64, 2 * e as u64 * d as u64, 24)?;
    let small = FieldCtx::new(p, 2 * e)?;
    let chi = CubicCharacter::new(&small)?;
    let g_small = gauss_sum(&chi).normalized();
    let big_owned;
    let big = if d == 1 {
        &small
    } else {
        big_owned = FieldCtx::new(p, 2 * e * d)?;
        &big_owned
    };
    let emb = Embedding::new(&small, big)?;
    let g_big = if d == 1 { gauss_sum(&chi).normalized() } else { gauss_sum_lifted(&chi, &emb).normalized() };
    Ok((g_big + (-g_small).powu(d)).norm())
}

/// Closed-form count of `x^3 + y^3 + z^3 = k` over `F_r`.
pub fn diagonal_cubic_count(f: &FieldCtx, k: FqElem) -> BigInt {
    let r = BigInt::from(f.q());
    if f.q() % 3 != 1 {
        return &r * &r;
    }
    let chi = CubicCharacter::new(f).expect("q = 1 mod 3");
    let tr_j = jacobi_sum(&chi).two_re();
    if k.is_zero() {
        &r * &r + tr_j * (&r - 1)
    } else {
        &r * &r + chi.value(k).two_re() * 3 * &r - tr_j
    }
}

/// Direct count of `x^3 + y^3 + z^3 = k` over `F_r`, through the table of cubes.
pub fn diagonal_cubic_count_brute(f: &FieldCtx, k: FqElem) -> u64 {
    let mut hist = vec![0u64; f.q() as usize];
    for x in f.elements() {
        hist[f.pow(x, 3).index() as usize] += 1;
    }
    let vals: Vec<(FqElem, u64)> =
        hist.iter().enumerate().filter(|(_, &c)| c > 0).map(|(i, &c)| (FqElem(i as u32), c)).collect();
    let mut total = 0;
    for &(a, ca) in &vals {
        for &(b, cb) in &vals {
            let c = f.sub(f.sub(k, a), b);
            total += ca * cb * hist[c.index() as usize];
        }
    }
    total
}

/// Number of monic irreducibles of degree `n` over `F_q`.
pub fn necklace_count(q: u64, n: u32) -> BigUint {
    let mut acc = BigInt::zero();
    for j in 1..=n {
        if !n.is_multiple_of(j) {
            continue;
        }
        let mu = mobius(j);
        if mu != 0 {
            acc += BigInt::from(q).pow(n / j) * mu;
        }
    }
    (acc / n).to_biguint().expect("positive count")
}

fn mobius(n: u32) -> i32 {
    let mut n = n;
    let mut sign = 1;
    let mut f = 2;
    while f * f <= n {
        if n.is_multiple_of(f) {
            n /= f;
            if n.is_multiple_of(f) {
                return 0;
            }
            sign = -sign;
        }
        f += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Closed interval with endpoints on the dyadic grid `2^-SCALE`.
#[derive(Clone, Debug, PartialEq)]
pub struct DyadicInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

const SCALE: u32 = 64;

fn grid() -> BigInt {
    BigInt::one() << SCALE
}

fn round_down(x: &BigRational) -> BigRational {
    let g = grid();
    BigRational::new((x * BigRational::from_integer(g.clone())).floor().to_integer(), g)
}

fn round_up(x: &BigRational) -> BigRational {
    let g = grid();
    BigRational::new((x * BigRational::from_integer(g.clone())).ceil().to_integer(), g)
}

impl DyadicInterval {
    fn scale(&self, k: &BigInt) -> DyadicInterval {
        let k = BigRational::from_integer(k.clone());
        DyadicInterval { lo: &self.lo * &k, hi: &self.hi * &k }
    }

    fn neg(&self) -> DyadicInterval {
        DyadicInterval { lo: -&self.hi, hi: -&self.lo }
    }
}

/// Enclosure of `-ln(1 - x)` for rational `0 < x < 1`.
fn neg_log1m(x: &BigRational) -> DyadicInterval {
    let eps = BigRational::new(BigInt::one(), BigInt::one() << (SCALE + 4));
    let mut sum_lo = BigRational::zero();
    let mut sum_hi = BigRational::zero();
    let mut pw = round_down(x);
    let mut pw_hi = round_up(x);
    let mut k = 1u32;
    loop {
        let kk = BigRational::from_integer(BigInt::from(k));
        sum_lo = round_down(&(&sum_lo + &pw / &kk));
        sum_hi = round_up(&(&sum_hi + &pw_hi / &kk));
        pw = round_down(&(&pw * x));
        pw_hi = round_up(&(&pw_hi * x));
        k += 1;
        // Remaining terms sum to at most x^k / (k (1 - x)).
        let tail = &pw_hi / (BigRational::from_integer(BigInt::from(k)) * (BigRational::one() - x));
        if tail < eps || k > 4000 {
            sum_hi = round_up(&(&sum_hi + tail));
            break;
        }
    }
    DyadicInterval { lo: sum_lo, hi: sum_hi }
}

/// Enclosure of `ln q` via `2 atanh((q-1)/(q+1))`.
fn ln_int(q: u64) -> DyadicInterval {
    if q == 1 {
        return DyadicInterval { lo: BigRational::zero(), hi: BigRational::zero() };
    }
    let y = BigRational::new(BigInt::from(q - 1), BigInt::from(q + 1));
    let y2 = &y * &y;
    let eps = BigRational::new(BigInt::one(), BigInt::one() << (SCALE + 4));
    let two = BigRational::from_integer(BigInt::from(2));
    let mut lo = BigRational::zero();
    let mut hi = BigRational::zero();
    let mut pw = y.clone();
    let mut k = 0u32;
    loop {
        let den = BigRational::from_integer(BigInt::from(2 * k + 1));
        let term = &two * &pw / den;
        lo = round_down(&(&lo + &term));
        hi = round_up(&(&hi + &term));
        pw = &pw * &y2;
        pw = round_up(&pw);
        k += 1;
        let tail = &two * &pw / (BigRational::from_integer(BigInt::from(2 * k + 1)) * (BigRational::one() - &y2));
        if tail < eps {
            hi = round_up(&(&hi + tail));
            break;
        }
    }
    DyadicInterval { lo, hi }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateAttempt {
    pub d: u32,
    pub c: String,
    pub m: String,
    pub factor: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate12 {
    pub q: u64,
    pub a: f64,
    pub d: u32,
    pub c_a: BigRational,
    pub m: BigUint,
    pub c: BigInt,
    pub factor: BigRational,
    /// Enclosure of `ln(factor^m)`.
    pub log_bound: DyadicInterval,
    pub pass: bool,
    pub attempts: Vec<CertificateAttempt>,
}

impl Certificate12 {
    /// `factor^m * C_A < 1` evaluated exactly; only sensible for small `m`.
    pub fn exact_check(&self) -> Option<bool> {
        let m = self.m.to_u32().filter(|&m| m as u64 * self.factor.denom().bits() <= 1 << 20)?;
        let bound = num_traits::pow(self.factor.clone(), m as usize);
        Some(bound * &self.c_a < BigRational::one())
    }
}

/// Smallest qualifying `d <= d_max` for which the product over all primes of
/// degree `2d` of the per-prime density factor is provably below `1/C_A`,
/// with `C_A = q^{3(ceil(A)+2)}`.
pub fn theorem12_certificate(p: u32, e: u32, a: f64, d_max: u32) -> Result<Certificate12> {
    if !a.is_finite() || a < 0.0 {
        return Err(Error::InvalidParams(format!("A must be a finite real >= 0, got {a}")));
    }
    let base = QuadraticBase::new(p, e)?;
    let q = base.q();
    let a_ceil = a.ceil() as u32;
    let c_a = BigRational::from_integer(BigInt::from(q).pow(3 * (a_ceil + 2)));
    let ln_ca = ln_int(q).scale(&BigInt::from(3 * (a_ceil + 2)));
    let mut attempts = Vec::new();
    for d in 1..=d_max {
        if !base.lemma21_holds(d) {
            continue;
        }
        let c = base.c_varpi(d);
        let big_q = BigInt::from(q).pow(2 * d);
        let big_q2 = &big_q * &big_q;
        let factor = BigRational::one() + BigRational::new(c.clone(), big_q.clone()) - BigRational::new(c.clone(), big_q2);
        let m = necklace_count(q, 2 * d);
        let m_int = BigInt::from(m.clone());
        let (log_bound, pass) = if factor.is_positive() && factor < BigRational::one() {
            let x = BigRational::one() - &factor;
            let nl = neg_log1m(&x).scale(&m_int);
            let pass = nl.lo > ln_ca.hi;
            (nl.neg(), pass)
        } else {
            let zero = BigRational::zero();
            (DyadicInterval { lo: zero.clone(), hi: zero }, false)
        };
        attempts.push(CertificateAttempt {
            d,
            c: c.to_string(),
            m: m.to_string(),
            factor: rat_string(&factor),
            pass,
        });
        if pass {
            return Ok(Certificate12 { q, a, d, c_a, m, c, factor, log_bound, pass, attempts });
        }
    }
    Err(Error::NotFoundWithin { d_max })
}

/// Greatest common divisor helper kept public for report code.
pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_sums() {
        let f = FieldCtx::new(2, 2).unwrap();
        let chi = CubicCharacter::new(&f).unwrap();
        let g = gauss_sum(&chi).value;
        assert!((g - Complex64::new(2.0, 0.0)).norm() < 1e-12);
        assert_eq!(jacobi_sum(&chi), EisensteinInt::new(2, 0));
    }

    #[test]
    fn c_values_over_f2() {
        let b = QuadraticBase::new(2, 1).unwrap();
        assert_eq!(b.c_varpi(1), BigInt::from(4));
        assert_eq!(b.c_varpi(2), BigInt::from(-8));
        assert_eq!(b.c_varpi(6), BigInt::from(-128));
        assert_eq!(b.lemma21_search(10).unwrap(), 2);
    }

    #[test]
    fn c_bound() {
        for (p, e) in [(2, 1), (5, 1), (7, 1), (2, 2)] {
            let b = QuadraticBase::new(p, e).unwrap();
            for d in 1..=64 {
                let c = b.c_varpi(d).abs();
                assert!(c <= BigInt::from(b.q()).pow(d) * 2, "q={} d={d}", b.q());
            }
        }
    }

    #[test]
    fn closed_forms_small() {
        let f4 = FieldCtx::new(2, 2).unwrap();
        assert_eq!(diagonal_cubic_count(&f4, FqElem(0)), BigInt::from(28));
        assert_eq!(diagonal_cubic_count(&f4, FqElem(1)), BigInt::from(36));
        assert_eq!(diagonal_cubic_count_brute(&f4, FqElem(1)), 36);
        let f5 = FieldCtx::new(5, 1).unwrap();
        for k in f5.elements() {
            assert_eq!(diagonal_cubic_count_brute(&f5, k), 25);
        }
    }

    #[test]
    fn necklaces() {
        assert_eq!(necklace_count(2, 4), BigUint::from(3u32));
        assert_eq!(necklace_count(2, 8), BigUint::from(30u32));
        assert_eq!(necklace_count(2, 12), BigUint::from(335u32));
        assert_eq!(necklace_count(5, 2), BigUint::from(10u32));
    }

    #[test]
    fn log_enclosures() {
        let l2 = ln_int(2);
        let f = |x: &BigRational| x.to_f64().unwrap();
        assert!(f(&l2.lo) <= std::f64::consts::LN_2 && std::f64::consts::LN_2 <= f(&l2.hi) + 1e-15);
        assert!(&l2.hi - &l2.lo < BigRational::new(BigInt::one(), BigInt::one() << 50));
        let x = BigRational::new(BigInt::from(121), BigInt::from(256));
        let nl = neg_log1m(&x);
        let want = -(1.0f64 - 121.0 / 256.0).ln();
        assert!(f(&nl.lo) <= want + 1e-15 && want <= f(&nl.hi) + 1e-15);
    }

    #[test]
    fn certificate_q2() {
        for a in [0.0, 1.0] {
            let cert = theorem12_certificate(2, 1, a, 12).unwrap();
            assert!(cert.pass);
            assert_eq!(cert.d, 6);
            assert_eq!(cert.attempts[0].d, 2);
            assert_eq!(cert.attempts[0].c, "-8");
            // 1 - 8/16 + 8/256 = 136/256
            assert_eq!(cert.attempts[0].factor, "17/32");
            assert_eq!(cert.exact_check(), Some(true));
        }
    }

    #[test]
    fn hd_identity_case_is_exact() {
        assert_eq!(hasse_davenport_check(2, 1, 1).unwrap(), 0.0);
        assert!(hasse_davenport_check(2, 1, 2).unwrap() < 1e-8);
    }
}
