//! Global counts: `r_A(k)` over a full degree block, membership in `S_A`,
//! density scans, the variance sums and the coordinate-pairing spaces on
//! the six-variable cubic.
//!
//! Throughout `P = t^d`; the weight only sees `|P|`.

use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rand::Rng;
use rayon::prelude::*;

use crate::archdens::{sigma_infty, SigmaEngine, WeightParams};
use crate::gf::{FieldCtx, FqElem};
use crate::group::Lanes;
use crate::localdens::{modulus_n, singular_series, ResidueDensities};
use crate::polyring::{Poly, PolyRing};
use crate::{limits, Error, Result};

/// Extra headroom over the group-size cap for plain enumerations.
pub const ENUM_EXTRA_BITS: u32 = 4;

fn enum_cap() -> u32 {
    limits::cap_bits() + ENUM_EXTRA_BITS
}

/// Polynomials with at most `len` coefficients, packed into `F_p` lanes
/// (coefficient `j`, sub-digit `i` at lane `j e + i`).
#[derive(Clone, Copy, Debug)]
pub struct PolyPack {
    lanes: Lanes,
    p: u32,
    e: u32,
    len: u32,
}

impl PolyPack {
    pub fn new(f: &FieldCtx, len: u32) -> Result<Self> {
        Ok(PolyPack { lanes: Lanes::new(f.p(), f.e() * len)?, p: f.p(), e: f.e(), len })
    }

    pub fn lanes(&self) -> &Lanes {
        &self.lanes
    }

    pub fn pack(&self, a: &Poly) -> u128 {
        assert!(a.coeffs().len() <= self.len as usize, "polynomial too long to pack");
        let mut digits = Vec::with_capacity(a.coeffs().len() * self.e as usize);
        for c in a.coeffs() {
            let mut x = c.0;
            for _ in 0..self.e {
                digits.push(x % self.p);
                x /= self.p;
            }
        }
        self.lanes.from_digits(&digits)
    }

    pub fn coeff(&self, a: u128, j: u32) -> u32 {
        (0..self.e).rev().fold(0, |acc, i| acc * self.p + self.lanes.digit(a, j * self.e + i))
    }

    pub fn unpack(&self, a: u128) -> Poly {
        Poly::from_coeffs((0..self.len).map(|j| FqElem(self.coeff(a, j))).collect())
    }

    pub fn degree(&self, a: u128) -> Option<u32> {
        self.lanes.top_lane(a).map(|l| l / self.e)
    }

    /// Base-`q` index of the polynomial.
    pub fn index(&self, a: u128) -> u64 {
        self.lanes.index_of(a, self.len * self.e)
    }

    /// Index of the coefficients at positions `lo..lo+n`, shifted down.
    pub fn window_index(&self, a: u128, lo: u32, n: u32) -> u64 {
        self.lanes.index_of(self.lanes.window(a, lo * self.e, n * self.e), n * self.e)
    }

    pub fn add(&self, a: u128, b: u128) -> u128 {
        self.lanes.add(a, b)
    }

    pub fn neg(&self, a: u128) -> u128 {
        self.lanes.neg(a)
    }
}

/// Calls `visit` on `base + sum_j terms[j][c_j]` for every digit vector
/// with `c_j < q`; with `top_nonzero` the last digit skips zero.
fn walk(lanes: &Lanes, base: u128, terms: &[Vec<u128>], top_nonzero: bool, mut visit: impl FnMut(u128)) {
    let n = terms.len();
    if n == 0 {
        if !top_nonzero {
            visit(base);
        }
        return;
    }
    let q = terms[0].len();
    let mut digits = vec![0usize; n];
    let mut v = base;
    if top_nonzero {
        digits[n - 1] = 1;
        v = lanes.add(v, terms[n - 1][1]);
    }
    loop {
        visit(v);
        let mut j = 0;
        loop {
            let old = digits[j];
            let new = (old + 1) % q;
            if new == 0 && j == n - 1 {
                return;
            }
            v = lanes.add(lanes.sub(v, terms[j][old]), terms[j][new]);
            digits[j] = new;
            if new != 0 {
                break;
            }
            j += 1;
        }
    }
}

/// `terms[j][c] = pack(c t^j g)` for `j < n`.
fn shifted_terms(ring: PolyRing, pack: &PolyPack, g: &Poly, n: u32) -> Vec<Vec<u128>> {
    let q = ring.q();
    (0..n)
        .map(|j| (0..q).map(|c| pack.pack(&ring.mul(&Poly::monomial(FqElem(c), j as usize), g))).collect())
        .collect()
}

/// Exact nonnegative sum of products, kept in `u128` until it overflows.
#[derive(Clone, Debug, Default)]
struct ExactSum {
    small: u128,
    big: BigUint,
}

impl ExactSum {
    fn add_prod(&mut self, factors: &[u128]) {
        let mut p = Some(1u128);
        for &f in factors {
            p = p.and_then(|x| x.checked_mul(f));
        }
        match p.and_then(|x| self.small.checked_add(x)) {
            Some(s) => self.small = s,
            None => {
                let big: BigUint = factors.iter().fold(BigUint::one(), |acc, &f| acc * BigUint::from(f));
                self.big += big;
            }
        }
    }

    fn add_sq_diff(&mut self, a: u128, b: u128) {
        let d = a.abs_diff(b);
        match d.checked_mul(d).and_then(|x| self.small.checked_add(x)) {
            Some(s) => self.small = s,
            None => {
                let db = BigUint::from(d);
                self.big += &db * &db;
            }
        }
    }

    fn total(&self) -> BigUint {
        &self.big + BigUint::from(self.small)
    }
}

fn rat(num: BigUint, den: BigInt) -> BigRational {
    BigRational::new(BigInt::from(num), den)
}

fn q_pow(q: u32, e: u32) -> BigInt {
    BigInt::from(q).pow(e)
}

/// Cubes of every polynomial of degree `<= dmax`, by index.
struct CubeTable {
    pack: PolyPack,
    cubes: Vec<u128>,
}

impl CubeTable {
    fn new(f: &FieldCtx, dmax: u32) -> Result<Self> {
        let ring = PolyRing::new(f);
        limits::check("cube table", f.q() as u64, dmax as u64 + 1, enum_cap())?;
        let pack = PolyPack::new(f, 3 * dmax + 1)?;
        let n = (f.q() as u64).pow(dmax + 1);
        let cubes = (0..n).map(|i| pack.pack(&ring.cube(&Poly::from_index(i, f.q())))).collect();
        Ok(CubeTable { pack, cubes })
    }
}

/// Index range of the polynomials of exact degree `deg`.
fn degree_range(q: u32, deg: u32) -> std::ops::Range<usize> {
    let lo = (q as usize).pow(deg);
    lo..lo * q as usize
}

/// `r_A(k)` for every `k` of degree exactly `B`.
#[derive(Clone, Debug)]
pub struct RAHistogram {
    pub params: WeightParams,
    pub q: u32,
    /// `counts[i] = r_A(k)` for the `k` with index `q^B + i`.
    pub counts: Vec<u64>,
    pub support_size: u64,
}

impl RAHistogram {
    pub fn b(&self) -> u32 {
        self.params.b()
    }

    pub fn get(&self, k: &Poly) -> u64 {
        if k.degree() != Some(self.b() as usize) {
            return 0;
        }
        self.counts[(k.index(self.q) - (self.q as u64).pow(self.b())) as usize]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `sum_k r_A(k)^2`, which is `N_w(P)`.
    pub fn sum_squares(&self) -> BigUint {
        let mut s = ExactSum::default();
        for &c in &self.counts {
            s.add_prod(&[c as u128, c as u128]);
        }
        s.total()
    }
}

/// Visits `F_0(x)` for every `x` in the support of `nu(x / P)`, split by the
/// first variable so the work can be shared.
fn support_strata(f: &FieldCtx, params: &WeightParams) -> Result<(CubeTable, Vec<(u32, usize)>)> {
    let d = params.d();
    let top = d + params.a_tilde();
    limits::check("weight support", f.q() as u64, 3 * (top as u64 + 1), enum_cap() + 4)?;
    let table = CubeTable::new(f, top)?;
    let strata = (d..=top).flat_map(|deg| degree_range(f.q(), deg).map(move |x| (deg, x))).collect();
    Ok((table, strata))
}

fn for_each_in_stratum(table: &CubeTable, q: u32, b: u32, deg: u32, x: usize, mut visit: impl FnMut(usize, usize, u128)) {
    let cx = table.cubes[x];
    for y in degree_range(q, deg) {
        let s = table.pack.add(cx, table.cubes[y]);
        for z in degree_range(q, deg - 1).chain(degree_range(q, deg)) {
            let v = table.pack.add(s, table.cubes[z]);
            if table.pack.degree(v) == Some(b) {
                visit(y, z, v);
            }
        }
    }
}

pub fn ra_histogram(f: &FieldCtx, params: &WeightParams) -> Result<RAHistogram> {
    let b = params.b();
    let q = f.q();
    limits::check("r_A histogram", q as u64, b as u64, enum_cap())?;
    let (table, strata) = support_strata(f, params)?;
    let base = (q as u64).pow(b);
    let size = (base * (q as u64 - 1)) as usize;
    let threads = rayon::current_num_threads().max(1);
    let chunk = strata.len().div_ceil(threads).max(1);
    let partial: Vec<(Vec<u64>, u64)> = strata
        .par_chunks(chunk)
        .map(|part| {
            let mut counts = vec![0u64; size];
            let mut n = 0u64;
            for &(deg, x) in part {
                for_each_in_stratum(&table, q, b, deg, x, |_, _, v| {
                    counts[(table.pack.index(v) - base) as usize] += 1;
                    n += 1;
                });
            }
            (counts, n)
        })
        .collect();
    let mut counts = vec![0u64; size];
    let mut support_size = 0;
    for (c, n) in partial {
        for (a, b) in counts.iter_mut().zip(c) {
            *a += b;
        }
        support_size += n;
    }
    Ok(RAHistogram { params: *params, q, counts, support_size })
}

/// `r_A(k)` for one `k` by a separate triple loop in polynomial arithmetic.
pub fn ra_brute(f: &FieldCtx, params: &WeightParams, k: &Poly) -> Result<u64> {
    let ring = PolyRing::new(f);
    let d = params.d() as usize;
    let top = d + params.a_tilde() as usize;
    limits::check("r_A brute", f.q() as u64, 3 * (top as u64 + 1), 24)?;
    if k.degree() != Some(params.b() as usize) {
        return Ok(0);
    }
    let mut n = 0;
    for deg in d..=top {
        let xs: Vec<Poly> = ring.polys_of_degree(deg)?.collect();
        let zs: Vec<Poly> = ring.polys_of_degree(deg - 1)?.chain(xs.iter().cloned()).collect();
        for x in &xs {
            let rest = ring.sub(k, &ring.cube(x));
            for y in &xs {
                let rest = ring.sub(&rest, &ring.cube(y));
                n += zs.iter().filter(|z| ring.cube(z) == rest).count() as u64;
            }
        }
    }
    Ok(n)
}

/// `N_w(P)` by a double loop over pairs of support points.
pub fn n_w_pairs(f: &FieldCtx, params: &WeightParams) -> Result<u64> {
    let ring = PolyRing::new(f);
    let d = params.d() as usize;
    let top = d + params.a_tilde() as usize;
    limits::check("N_w pair loop", f.q() as u64, 3 * (top as u64 + 1), 14)?;
    let mut values = Vec::new();
    for deg in d..=top {
        let xs: Vec<Poly> = ring.polys_of_degree(deg)?.collect();
        let zs: Vec<Poly> = ring.polys_of_degree(deg - 1)?.chain(xs.iter().cloned()).collect();
        for x in &xs {
            for y in &xs {
                for z in &zs {
                    let v = ring.add(&ring.add(&ring.cube(x), &ring.cube(y)), &ring.cube(z));
                    if v.degree() == Some(params.b() as usize) {
                        values.push(v);
                    }
                }
            }
        }
    }
    let mut n = 0;
    for a in &values {
        for b in &values {
            if ring.add(a, b).is_zero() {
                n += 1;
            }
        }
    }
    Ok(n)
}

/// Shared data for one weight: the `sigma_{inf,A}` table and `sigma_inf`.
pub struct GlobalCtx<'a> {
    f: &'a FieldCtx,
    params: WeightParams,
    engine: SigmaEngine<'a>,
    sigma_table: Vec<u128>,
    sigma_inf: BigRational,
}

impl<'a> GlobalCtx<'a> {
    pub fn new(f: &'a FieldCtx, params: WeightParams) -> Result<Self> {
        if f.p() == 3 {
            return Err(Error::CharIsThree);
        }
        let engine = SigmaEngine::new(f, params, None)?;
        let sigma_table = engine.numer_table()?;
        let sigma_inf = sigma_infty(f, &params)?;
        Ok(GlobalCtx { f, params, engine, sigma_table, sigma_inf })
    }

    pub fn field(&self) -> &'a FieldCtx {
        self.f
    }
    pub fn params(&self) -> &WeightParams {
        &self.params
    }
    pub fn engine(&self) -> &SigmaEngine<'a> {
        &self.engine
    }
    pub fn sigma_inf(&self) -> &BigRational {
        &self.sigma_inf
    }

    fn sigma_denom(&self) -> BigInt {
        q_pow(self.f.q(), self.engine.denom_exp())
    }

    /// Index of `m` for a packed `k` of degree `B`.
    fn m_index_packed(&self, pack: &PolyPack, k: u128) -> usize {
        let top = 3 * (self.params.d() + self.params.a_tilde()) as i64;
        let q = self.f.q() as usize;
        let mut idx = 0usize;
        for j in (0..self.params.depth() as i64).rev() {
            let e = top - j;
            let c = if e < 0 { 0 } else { pack.coeff(k, e as u32) };
            idx = idx * q + c as usize;
        }
        idx
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VarianceReport {
    pub q: u32,
    pub params: WeightParams,
    pub b: u32,
    pub m: u32,
    pub modulus: Poly,
    pub sigma1: BigRational,
    pub sigma2: BigRational,
    pub sigma3: BigRational,
    pub var: BigRational,
    /// `sum_k (r_A(k) - l_A(k; M))^2`, summed term by term.
    pub var_direct: BigRational,
    /// `sigma_inf rho6~(N) |P|^3`.
    pub target: BigRational,
    pub sigma2_equal: bool,
    pub sigma3_equal: bool,
    /// `|N| < |P| q^{-6A~}`.
    pub sigma2_hypothesis: bool,
    /// `|N| < |P|^3 q^{-4A~}`.
    pub sigma3_hypothesis: bool,
    pub notes: Vec<String>,
}

impl VarianceReport {
    pub fn sigma2_identity(&self) -> bool {
        self.sigma2_equal && self.sigma2_hypothesis
    }
    pub fn sigma3_identity(&self) -> bool {
        self.sigma3_equal && self.sigma3_hypothesis
    }

    /// `Var = Sigma1 - 2 Sigma2 + Sigma3` matches the termwise sum and is `>= 0`.
    pub fn consistent(&self) -> bool {
        self.var == self.var_direct && !self.var.is_negative()
    }
}

pub fn variance(ctx: &GlobalCtx, m: u32) -> Result<VarianceReport> {
    let f = ctx.f;
    let ring = PolyRing::new(f);
    let params = ctx.params;
    let q = f.q();
    let (b, d, at) = (params.b(), params.d() as i64, params.a_tilde() as i64);
    let hist = ra_histogram(f, &params)?;
    let nm = modulus_n(ring, m)?;
    let deg_n = nm.degree() as u32;
    let mut dens = ResidueDensities::from_modulus_n(ring, &nm)?;
    let rho_tab = dens.rho_all()?;
    let rho6 = dens.rho6_tilde()?;

    // k in lanes 0..=B, k mod N right above it.
    let pack = PolyPack::new(f, b + 1 + deg_n)?;
    let lanes = *pack.lanes();
    let mut terms = Vec::with_capacity(b as usize + 1);
    for j in 0..=b {
        let mut row = Vec::with_capacity(q as usize);
        for c in 0..q {
            let mono = Poly::monomial(FqElem(c), j as usize);
            let res = ring.rem(&mono, &nm.value)?;
            row.push(lanes.add(pack.pack(&mono), pack.pack(&res.shift(b as usize + 1))));
        }
        terms.push(row);
    }
    let sig_den = ctx.engine.denom_exp();
    let eg: u128 = (q as u128).pow(sig_den) * (q as u128).pow(2 * deg_n);
    let base = (q as u64).pow(b);
    let (mut s1, mut s2, mut s3, mut vd) = (ExactSum::default(), ExactSum::default(), ExactSum::default(), ExactSum::default());
    walk(&lanes, 0, &terms, true, |v| {
        let r = hist.counts[(pack.window_index(v, 0, b + 1) - base) as usize] as u128;
        let s = ctx.sigma_table[ctx.m_index_packed(&pack, v)];
        let rho = rho_tab[pack.window_index(v, b + 1, deg_n) as usize];
        s1.add_prod(&[r, r]);
        s2.add_prod(&[r, s, rho]);
        s3.add_prod(&[s, s, rho, rho]);
        match (r.checked_mul(eg), s.checked_mul(rho)) {
            (Some(a), Some(c)) => vd.add_sq_diff(a, c),
            _ => {
                let diff = BigInt::from(r) * BigInt::from(eg) - BigInt::from(s) * BigInt::from(rho);
                vd.big += (&diff * &diff).to_biguint().unwrap();
            }
        }
    });
    let egb = BigInt::from(eg);
    let sigma1 = rat(s1.total(), BigInt::one());
    let sigma2 = rat(s2.total(), egb.clone());
    let sigma3 = rat(s3.total(), &egb * &egb);
    let var_direct = rat(vd.total(), &egb * &egb);
    let var = &sigma1 - BigRational::from_integer(2.into()) * &sigma2 + &sigma3;
    let target = ctx.sigma_inf.clone() * rho6 * BigRational::from_integer(q_pow(q, 3 * params.d()));
    let sigma2_hypothesis = (deg_n as i64) < d - 6 * at;
    let sigma3_hypothesis = (deg_n as i64) < 3 * d - 4 * at;
    let mut notes = Vec::new();
    if !sigma2_hypothesis {
        notes.push(format!("deg N = {deg_n} >= d - 6A~ = {}: Sigma2 identity not expected", d - 6 * at));
    }
    if !sigma3_hypothesis {
        notes.push(format!("deg N = {deg_n} >= 3d - 4A~ = {}: Sigma3 identity not expected", 3 * d - 4 * at));
    }
    Ok(VarianceReport {
        q,
        params,
        b,
        m,
        modulus: nm.value.clone(),
        sigma2_equal: sigma2 == target,
        sigma3_equal: sigma3 == target,
        sigma1,
        sigma2,
        sigma3,
        var,
        var_direct,
        target,
        sigma2_hypothesis,
        sigma3_hypothesis,
        notes,
    })
}

/// `l_A(k; M) = sigma_{inf,A}(k) rho~(N(M), k)`.
pub fn l_a(ctx: &GlobalCtx, dens: &mut ResidueDensities, k: &Poly) -> Result<BigRational> {
    Ok(ctx.engine.sigma(k)? * dens.rho_tilde(k))
}

#[derive(Clone, Debug, PartialEq)]
pub struct LemmaCheck {
    pub lhs: BigRational,
    pub rhs: BigRational,
    pub equal: bool,
    /// Number of terms summed on the left.
    pub terms: u64,
}

/// `sum_{deg k = B, k = a mod N} sigma_{inf,A}(k)^2` against `sigma_inf |P|^3 / |N|`.
pub fn lemma41_check(ctx: &GlobalCtx, n: &Poly, a: &Poly) -> Result<LemmaCheck> {
    let f = ctx.f;
    let ring = PolyRing::new(f);
    let params = ctx.params;
    let deg_n = n.degree().ok_or(Error::ZeroModulus)? as i64;
    let bound = 3 * params.d() as i64 - 4 * params.a_tilde() as i64;
    if deg_n >= bound {
        return Err(Error::ModulusTooLarge { deg_n: deg_n as usize, bound });
    }
    let b = params.b();
    limits::check("sigma^2 class sum", f.q() as u64, b as u64 + 1 - deg_n as u64, enum_cap())?;
    let pack = PolyPack::new(f, b + 1)?;
    let a0 = ring.rem(a, n)?;
    let terms = shifted_terms(ring, &pack, n, b + 1 - deg_n as u32);
    let mut sum = ExactSum::default();
    let mut count = 0u64;
    walk(pack.lanes(), pack.pack(&a0), &terms, true, |k| {
        let s = ctx.sigma_table[ctx.m_index_packed(&pack, k)];
        sum.add_prod(&[s, s]);
        count += 1;
    });
    let den = ctx.sigma_denom();
    let lhs = rat(sum.total(), &den * &den);
    let rhs = ctx.sigma_inf.clone() * BigRational::new(q_pow(f.q(), 3 * params.d()), q_pow(f.q(), deg_n as u32));
    Ok(LemmaCheck { equal: lhs == rhs, lhs, rhs, terms: count })
}

/// `sum_{y = b mod N} nu(y / P) sigma_{inf,A}(F_0(y))` against
/// `sigma_inf |P|^3 / |N|^3`, enumerating every triple in the classes.
pub fn lemma42_check(ctx: &GlobalCtx, n: &Poly, bs: &[Poly; 3]) -> Result<LemmaCheck> {
    let f = ctx.f;
    let ring = PolyRing::new(f);
    let params = ctx.params;
    let q = f.q();
    let deg_n = n.degree().ok_or(Error::ZeroModulus)? as u32;
    let (d, at) = (params.d(), params.a_tilde());
    let bound = d as i64 - 6 * at as i64;
    if deg_n as i64 >= bound {
        return Err(Error::ModulusTooLarge { deg_n: deg_n as usize, bound });
    }
    let top = d + at;
    // Roughly (q^{top+1} / |N|)^3 triples.
    limits::check("weighted triple sum", q as u64, 3 * (top as u64 + 1 - deg_n as u64), enum_cap() + 2)?;
    let l = params.depth();
    let pack = PolyPack::new(f, top + 1)?;
    let mlanes = Lanes::new(f.p(), f.e() * l)?;
    let mpack_e = f.e();
    // m-lanes of (y / t^{top})^3 truncated to s^l.
    let cube_m = |y: &Poly| -> u128 {
        let c = ring.cube(y);
        let mut digits = Vec::with_capacity((l * mpack_e) as usize);
        for j in 0..l as i64 {
            let e = 3 * top as i64 - j;
            let mut x = if e < 0 { 0 } else { c.coeff(e as usize).0 };
            for _ in 0..mpack_e {
                digits.push(x % f.p());
                x /= f.p();
            }
        }
        mlanes.from_digits(&digits)
    };
    // lists[i][deg - (d - 1)]: y = b_i mod N of exact degree deg.
    let mut lists: Vec<Vec<Vec<u128>>> = Vec::new();
    for bi in bs {
        let b0 = ring.rem(bi, n)?;
        let mut per_deg = Vec::new();
        for deg in d - 1..=top {
            let mut v = Vec::new();
            if deg < deg_n {
                if b0.degree() == Some(deg as usize) {
                    v.push(cube_m(&b0));
                }
            } else {
                let terms = shifted_terms(ring, &pack, n, deg - deg_n + 1);
                walk(pack.lanes(), pack.pack(&b0), &terms, true, |y| v.push(cube_m(&pack.unpack(y))));
            }
            per_deg.push(v);
        }
        lists.push(per_deg);
    }
    let v_m = params.v_m();
    let e = f.e();
    let low_mask_zero = |m: u128| mlanes.truncate(m, v_m * e) == 0 && mlanes.window(m, v_m * e, e) != 0;
    let mut sum = ExactSum::default();
    let mut count = 0u64;
    for deg in d..=top {
        let i = (deg - (d - 1)) as usize;
        for &c1 in &lists[0][i] {
            for &c2 in &lists[1][i] {
                let s = mlanes.add(c1, c2);
                for &c3 in lists[2][i - 1].iter().chain(&lists[2][i]) {
                    let m = mlanes.add(s, c3);
                    count += 1;
                    if low_mask_zero(m) {
                        sum.add_prod(&[ctx.sigma_table[mlanes.index_of(m, e * l) as usize]]);
                    }
                }
            }
        }
    }
    let lhs = rat(sum.total(), ctx.sigma_denom());
    let rhs = ctx.sigma_inf.clone() * BigRational::new(q_pow(q, 3 * d), q_pow(q, 3 * deg_n));
    Ok(LemmaCheck { equal: lhs == rhs, lhs, rhs, terms: count })
}

/// Sorted table of `x^3 + y^3` over `deg x, deg y <= dmax` for membership
/// searches in `S_A`.
pub struct SaSearcher<'a> {
    f: &'a FieldCtx,
    dmax: u32,
    cubes: CubeTable,
    /// `(x^3 + y^3, x, y)` with `x <= y`, sorted by value.
    pairs: Vec<(u128, u32, u32)>,
}

impl<'a> SaSearcher<'a> {
    pub fn new(f: &'a FieldCtx, dmax: u32) -> Result<Self> {
        limits::check("S_A pair table", f.q() as u64, 2 * (dmax as u64 + 1), enum_cap() - 1)?;
        let cubes = CubeTable::new(f, dmax)?;
        let n = cubes.cubes.len();
        let mut pairs = Vec::with_capacity(n * (n + 1) / 2);
        for x in 0..n {
            for y in x..n {
                pairs.push((cubes.pack.add(cubes.cubes[x], cubes.cubes[y]), x as u32, y as u32));
            }
        }
        pairs.sort_unstable();
        Ok(SaSearcher { f, dmax, cubes, pairs })
    }

    pub fn dmax(&self) -> u32 {
        self.dmax
    }

    /// A witness `(x, y, z)` with `x^3 + y^3 + z^3 = k` and all degrees `<= dmax`.
    pub fn find(&self, k: &Poly) -> Option<[Poly; 3]> {
        if k.degree().is_some_and(|dk| dk > 3 * self.dmax as usize) {
            return None;
        }
        let pk = self.cubes.pack.pack(k);
        for (z, &cz) in self.cubes.cubes.iter().enumerate() {
            let want = self.cubes.pack.lanes().sub(pk, cz);
            let i = self.pairs.partition_point(|p| p.0 < want);
            if let Some(&(v, x, y)) = self.pairs.get(i) {
                if v == want {
                    let q = self.f.q();
                    return Some([Poly::from_index(x as u64, q), Poly::from_index(y as u64, q), Poly::from_index(z as u64, q)]);
                }
            }
        }
        None
    }
}

/// The box `max deg <= deg k / 3 + A` as an integer bound.
pub fn sa_box(deg_k: u32, a: f64) -> u32 {
    (deg_k as f64 / 3.0 + a + 1e-9).floor() as u32
}

/// Membership of `k` in `S_A`, with a witness.
pub fn sa_member(f: &FieldCtx, k: &Poly, a: f64) -> Result<Option<[Poly; 3]>> {
    let dk = k.degree().ok_or_else(|| Error::InvalidParams("k must be nonzero".into()))? as u32;
    Ok(SaSearcher::new(f, sa_box(dk, a))?.find(k))
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityRow {
    pub b: u32,
    pub a: f64,
    pub box_degree: u32,
    pub members: u64,
    pub total: u64,
    pub fraction: BigRational,
    /// `#{k : r_A(k) > 0}`, when `B = 3d + alpha` gives a valid weight.
    pub ra_positive: Option<u64>,
}

/// Indicator of `k in S_A` over all `k` of degree exactly `b`.
pub fn sa_indicator(f: &FieldCtx, b: u32, a: f64) -> Result<Vec<bool>> {
    let q = f.q();
    let dmax = sa_box(b, a);
    limits::check("density scan", q as u64, b as u64 + 1, enum_cap())?;
    let base = (q as u64).pow(b);
    let mut hit = vec![false; (base * (q as u64 - 1)) as usize];
    if 3 * dmax < b {
        return Ok(hit);
    }
    let cubes = CubeTable::new(f, dmax)?;
    let pack = cubes.pack;
    let lanes = *pack.lanes();
    let e = f.e();
    let hi_lo = (b + 1) * e;
    let hi_len = (3 * dmax + 1) * e - hi_lo;
    let high = |v: u128| if hi_len == 0 { 0 } else { lanes.window(v, hi_lo, hi_len) };
    limits::check("density scan pairs", q as u64, 2 * (dmax as u64 + 1), enum_cap() - 1)?;
    let n = cubes.cubes.len();
    let mut pairs: Vec<(u128, u128)> = Vec::with_capacity(n * (n + 1) / 2);
    for x in 0..n {
        for y in x..n {
            let s = lanes.add(cubes.cubes[x], cubes.cubes[y]);
            pairs.push((high(s), s));
        }
    }
    pairs.sort_unstable();
    let hi_lanes = Lanes::new(f.p(), hi_len.max(1))?;
    for &cz in &cubes.cubes {
        let want = hi_lanes.neg(high(cz));
        let start = pairs.partition_point(|p| p.0 < want);
        for &(h, s) in &pairs[start..] {
            if h != want {
                break;
            }
            let k = lanes.add(s, cz);
            if pack.degree(k) == Some(b) {
                hit[(pack.index(k) - base) as usize] = true;
            }
        }
    }
    Ok(hit)
}

pub fn density_scan(f: &FieldCtx, a: f64, bs: &[u32]) -> Result<Vec<DensityRow>> {
    let q = f.q();
    let mut rows = Vec::new();
    for &b in bs {
        let hit = sa_indicator(f, b, a)?;
        let members = hit.iter().filter(|&&h| h).count() as u64;
        let total = hit.len() as u64;
        let ra_positive = match WeightParams::new(a, b % 3, b / 3) {
            Ok(params) if f.p() != 3 => match ra_histogram(f, &params) {
                Ok(hist) => Some(hist.counts.iter().filter(|&&c| c > 0).count() as u64),
                Err(Error::TooLarge { .. }) => None,
                Err(e) => return Err(e),
            },
            _ => None,
        };
        let _ = q;
        rows.push(DensityRow {
            b,
            a,
            box_degree: sa_box(b, a),
            members,
            total,
            fraction: BigRational::new(BigInt::from(members), BigInt::from(total)),
            ra_positive,
        });
    }
    Ok(rows)
}

/// A random `k = x^3 + y^3 + z^3` of degree `b` with all degrees within the `S_A` box.
pub fn planted_k<R: Rng>(f: &FieldCtx, b: u32, a: f64, rng: &mut R) -> Option<(Poly, [Poly; 3])> {
    let ring = PolyRing::new(f);
    let dmax = sa_box(b, a);
    if 3 * dmax < b {
        return None;
    }
    let n = (f.q() as u64).pow(dmax + 1);
    for _ in 0..10_000 {
        let xs = [0; 3].map(|_| Poly::from_index(rng.gen_range(0..n), f.q()));
        let k = xs.iter().fold(Poly::zero(), |acc, x| ring.add(&acc, &ring.cube(x)));
        if k.degree() == Some(b as usize) {
            return Some((k, xs));
        }
    }
    None
}

/// The space `x_i + zeta x_j = 0` for each pair `(i, j)` of a perfect
/// matching of the six coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSpace {
    pub pairs: [(usize, usize); 3],
    pub roots: [FqElem; 3],
}

fn perfect_matchings(items: &[usize]) -> Vec<Vec<(usize, usize)>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let first = items[0];
    let mut out = Vec::new();
    for i in 1..items.len() {
        let rest: Vec<usize> = items[1..].iter().copied().filter(|&x| x != items[i]).collect();
        for mut m in perfect_matchings(&rest) {
            m.insert(0, (first, items[i]));
            out.push(m);
        }
    }
    out
}

pub fn upsilon_enumerate(f: &FieldCtx) -> Result<Vec<LinearSpace>> {
    if f.p() == 3 {
        return Err(Error::CharIsThree);
    }
    let roots = f.cube_roots_of_unity();
    let mut out = Vec::new();
    for m in perfect_matchings(&[0, 1, 2, 3, 4, 5]) {
        for &a in &roots {
            for &b in &roots {
                for &c in &roots {
                    out.push(LinearSpace { pairs: [m[0], m[1], m[2]], roots: [a, b, c] });
                }
            }
        }
    }
    Ok(out)
}

impl LinearSpace {
    /// `F` restricted to the space is `sum_k (1 - zeta_k^3) x_{j_k}^3`.
    pub fn f_vanishes(&self, f: &FieldCtx) -> bool {
        let mut seen = [false; 6];
        for &(i, j) in &self.pairs {
            if i == j || seen[i] || seen[j] {
                return false;
            }
            seen[i] = true;
            seen[j] = true;
        }
        self.roots.iter().all(|&z| f.pow(z, 3) == f.one())
    }

    /// A point of the space from free values at the second coordinate of each pair.
    pub fn point(&self, ring: PolyRing, free: &[Poly; 3]) -> [Poly; 6] {
        let mut x: [Poly; 6] = Default::default();
        for (k, &(i, j)) in self.pairs.iter().enumerate() {
            x[j] = free[k].clone();
            x[i] = ring.neg(&ring.scale(&free[k], self.roots[k]));
        }
        x
    }

    /// `n` random points with coordinates of degree `< deg`, checking `F = 0`.
    pub fn spot_check<R: Rng>(&self, f: &FieldCtx, n: usize, deg: u32, rng: &mut R) -> bool {
        let ring = PolyRing::new(f);
        let top = (f.q() as u64).pow(deg);
        (0..n).all(|_| {
            let free = [0; 3].map(|_| Poly::from_index(rng.gen_range(0..top), f.q()));
            let x = self.point(ring, &free);
            x.iter().fold(Poly::zero(), |acc, v| ring.add(&acc, &ring.cube(v))).is_zero()
        })
    }
}

/// Indices (into the poly table) of the six coordinates of every point of
/// `space` in the support of `w(x / P)`.
fn space_points(f: &FieldCtx, params: &WeightParams, space: &LinearSpace, mut visit: impl FnMut([u32; 6])) -> Result<()> {
    let ring = PolyRing::new(f);
    let top = params.d() + params.a_tilde();
    limits::check("linear space points", f.q() as u64, 3 * (top as u64 + 1), enum_cap())?;
    let cubes = CubeTable::new(f, top)?;
    let n = cubes.cubes.len();
    let q = f.q();
    // Index of -zeta * x for each root in use.
    let scaled: Vec<Vec<u32>> = space
        .roots
        .iter()
        .map(|&z| {
            let c = f.neg(z);
            (0..n).map(|i| ring.scale(&Poly::from_index(i as u64, q), c).index(q) as u32).collect()
        })
        .collect();
    let deg = |i: usize| if i == 0 { None } else { Some(((i as f64).ln() / (q as f64).ln() + 1e-9).floor() as u32) };
    let degs: Vec<Option<u32>> = (0..n).map(deg).collect();
    let nu = |x: [usize; 3]| -> bool {
        let (d1, d2, d3) = match (degs[x[0]], degs[x[1]], degs[x[2]]) {
            (Some(a), Some(b), Some(c)) => (a, b, c),
            _ => return false,
        };
        if d1 != d2 || d1 < params.d() || d3 > d2 || d3 + 1 < d2 {
            return false;
        }
        let s = cubes.pack.add(cubes.pack.add(cubes.cubes[x[0]], cubes.cubes[x[1]]), cubes.cubes[x[2]]);
        cubes.pack.degree(s) == Some(params.b())
    };
    for a in 1..n {
        for b in 1..n {
            for c in 1..n {
                let free = [a, b, c];
                let mut x = [0usize; 6];
                for (k, &(i, j)) in space.pairs.iter().enumerate() {
                    x[j] = free[k];
                    x[i] = scaled[k][free[k]] as usize;
                }
                if nu([x[0], x[1], x[2]]) && nu([x[3], x[4], x[5]]) {
                    visit(x.map(|v| v as u32));
                }
            }
        }
    }
    Ok(())
}

/// `sum_{x in L} w(x / P)` for one space.
pub fn linear_space_count(f: &FieldCtx, params: &WeightParams, space: &LinearSpace) -> Result<u64> {
    let mut n = 0;
    space_points(f, params, space, |_| n += 1)?;
    Ok(n)
}

#[derive(Clone, Debug, PartialEq)]
pub struct UpsilonTerm {
    pub spaces: usize,
    /// Sum of the per-space counts.
    pub sum: u64,
    /// Number of distinct points over all spaces.
    pub union: u64,
}

pub fn upsilon_term(f: &FieldCtx, params: &WeightParams) -> Result<UpsilonTerm> {
    let spaces = upsilon_enumerate(f)?;
    let mut seen: HashSet<[u32; 6]> = HashSet::new();
    let mut sum = 0;
    for s in &spaces {
        space_points(f, params, s, |x| {
            sum += 1;
            seen.insert(x);
        })?;
    }
    Ok(UpsilonTerm { spaces: spaces.len(), sum, union: seen.len() as u64 })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceAudit {
    /// Number of 3-dimensional subspaces of `F_q^6`.
    pub total: u64,
    /// Those on which `F` vanishes as a polynomial.
    pub vanishing: u64,
    /// Whether every vanishing subspace is a coordinate pairing.
    pub all_pairings: bool,
}

/// Reduced row echelon form of the rows, as a canonical key.
fn rref(f: &FieldCtx, mut rows: Vec<[FqElem; 6]>) -> Vec<[FqElem; 6]> {
    let mut r = 0;
    for c in 0..6 {
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, piv);
        let inv = f.inv(rows[r][c]).unwrap();
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let m = rows[i][c];
                for k in 0..6 {
                    rows[i][k] = f.sub(rows[i][k], f.mul(m, rows[r][k]));
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

/// Every 3-dimensional subspace of `F_q^6`, tested for `F|_V = 0` as a
/// cubic form in three variables.
pub fn subspace_audit(f: &FieldCtx) -> Result<SubspaceAudit> {
    let q = f.q();
    limits::check("subspace audit", q as u64, 9, 22)?;
    let pairing_keys: HashSet<Vec<[FqElem; 6]>> = upsilon_enumerate(f)?
        .iter()
        .map(|s| {
            let rows = s
                .pairs
                .iter()
                .zip(&s.roots)
                .map(|(&(i, j), &z)| {
                    let mut v = [FqElem::ZERO; 6];
                    v[j] = f.one();
                    v[i] = f.neg(z);
                    v
                })
                .collect();
            rref(f, rows)
        })
        .collect();
    // Monomials u^a v^b w^c with a + b + c = 3 and their multinomial coefficients.
    let mut monos = Vec::new();
    for a in 0..=3u32 {
        for b in 0..=3 - a {
            let c = 3 - a - b;
            let fact = |n: u32| (1..=n).product::<u32>();
            monos.push((a, b, c, fact(3) / (fact(a) * fact(b) * fact(c))));
        }
    }
    let (mut total, mut vanishing, mut all_pairings) = (0u64, 0u64, true);
    let mut free_count;
    for pivots in (0..6usize).flat_map(|a| (a + 1..6).flat_map(move |b| (b + 1..6).map(move |c| [a, b, c]))) {
        // Free entries: row r, column c > pivots[r], c not a pivot.
        let slots: Vec<(usize, usize)> =
            (0..3).flat_map(|r| (pivots[r] + 1..6).filter(|c| !pivots.contains(c)).map(move |c| (r, c))).collect();
        free_count = slots.len() as u32;
        for idx in 0..(q as u64).pow(free_count) {
            let mut rows = [[FqElem::ZERO; 6]; 3];
            for r in 0..3 {
                rows[r][pivots[r]] = f.one();
            }
            let mut x = idx;
            for &(r, c) in &slots {
                rows[r][c] = FqElem((x % q as u64) as u32);
                x /= q as u64;
            }
            total += 1;
            let zero = monos.iter().all(|&(a, b, c, m)| {
                let mut s = f.zero();
                for col in 0..6 {
                    let t = f.mul(f.mul(f.pow(rows[0][col], a as u64), f.pow(rows[1][col], b as u64)), f.pow(rows[2][col], c as u64));
                    s = f.add(s, t);
                }
                f.scale_int(s, m).is_zero()
            });
            if zero {
                vanishing += 1;
                if !pairing_keys.contains(&rows.to_vec()) {
                    all_pairings = false;
                }
            }
        }
    }
    Ok(SubspaceAudit { total, vanishing, all_pairings })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ManinReport {
    pub q: u32,
    pub params: WeightParams,
    pub m_max: u32,
    pub n_w: BigRational,
    pub sigma_inf: BigRational,
    pub singular_partial: BigRational,
    pub main: BigRational,
    pub upsilon: UpsilonTerm,
    pub residual: BigRational,
    /// `residual / |P|^3`.
    pub residual_scaled: BigRational,
    /// `floor(-2A~ + 3d/2)`, recorded only.
    pub q_hat: i64,
}

pub fn manin_report(ctx: &GlobalCtx, m_max: u32) -> Result<ManinReport> {
    let f = ctx.f;
    let params = ctx.params;
    let ring = PolyRing::new(f);
    let hist = ra_histogram(f, &params)?;
    let n_w = BigRational::from_integer(BigInt::from(hist.sum_squares()));
    let ss = singular_series(ring, m_max)?;
    let p3 = BigRational::from_integer(q_pow(f.q(), 3 * params.d()));
    let main = ctx.sigma_inf.clone() * ss.partial.clone() * &p3;
    let upsilon = upsilon_term(f, &params)?;
    let residual = &n_w - &main - BigRational::from_integer(upsilon.sum.into());
    let residual_scaled = &residual / &p3;
    let q_hat = (-4 * params.a_tilde() as i64 + 3 * params.d() as i64).div_euclid(2);
    Ok(ManinReport {
        q: f.q(),
        params,
        m_max,
        n_w,
        sigma_inf: ctx.sigma_inf.clone(),
        singular_partial: ss.partial,
        main,
        upsilon,
        residual,
        residual_scaled,
        q_hat,
    })
}

/// Lossy view for printing.
pub fn approx(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use num_traits::Zero;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(7)
    }

    #[test]
    fn pack_roundtrip() {
        for (p, e) in [(2, 1), (5, 1), (2, 2), (7, 1)] {
            let f = FieldCtx::new(p, e).unwrap();
            let ring = PolyRing::new(&f);
            let pack = PolyPack::new(&f, 6).unwrap();
            let mut r = rng();
            for _ in 0..50 {
                let a = Poly::from_index(r.gen_range(0..(f.q() as u64).pow(6)), f.q());
                let b = Poly::from_index(r.gen_range(0..(f.q() as u64).pow(6)), f.q());
                assert_eq!(pack.unpack(pack.pack(&a)), a);
                assert_eq!(pack.unpack(pack.add(pack.pack(&a), pack.pack(&b))), ring.add(&a, &b));
                assert_eq!(pack.index(pack.pack(&a)), a.index(f.q()));
                assert_eq!(pack.degree(pack.pack(&a)), a.degree().map(|x| x as u32));
            }
        }
    }

    #[test]
    fn walk_covers_class() {
        let f = FieldCtx::new(5, 1).unwrap();
        let ring = PolyRing::new(&f);
        let pack = PolyPack::new(&f, 5).unwrap();
        let n = Poly::from_indices(&[2, 0, 1]);
        let a = Poly::from_indices(&[3, 1]);
        let terms = shifted_terms(ring, &pack, &n, 3);
        let mut seen = Vec::new();
        walk(pack.lanes(), pack.pack(&a), &terms, true, |v| seen.push(pack.unpack(v)));
        assert_eq!(seen.len(), 4 * 25);
        for k in &seen {
            assert_eq!(k.degree(), Some(4));
            assert_eq!(ring.rem(k, &n).unwrap(), a);
        }
        let set: HashSet<u64> = seen.iter().map(|k| k.index(5)).collect();
        assert_eq!(set.len(), seen.len());
    }

    #[test]
    fn histogram_matches_brute() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        let params = WeightParams::new(0.0, 0, 2).unwrap();
        let h = ra_histogram(&f2, &params).unwrap();
        assert_eq!(h.total(), h.support_size);
        let mut r = rng();
        for _ in 0..5 {
            let k = Poly::from_index(r.gen_range(64..128), 2);
            assert_eq!(h.get(&k), ra_brute(&f2, &params, &k).unwrap());
        }
        assert_eq!(h.get(&Poly::monomial(FqElem::ONE, 5)), 0);
        for (p, a, alpha, d) in [(2u32, 1.0, 1u32, 2u32), (5, 0.0, 0, 1), (2, 1.0, 0, 2)] {
            let f = FieldCtx::new(p, 1).unwrap();
            let params = WeightParams::new(a, alpha, d).unwrap();
            let h = ra_histogram(&f, &params).unwrap();
            let base = (f.q() as u64).pow(params.b());
            for i in (0..h.counts.len()).step_by(37) {
                let k = Poly::from_index(base + i as u64, f.q());
                assert_eq!(h.counts[i], ra_brute(&f, &params, &k).unwrap());
            }
        }
    }

    #[test]
    fn sum_of_squares_is_pair_count() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        for d in 1..=3 {
            let params = WeightParams::new(0.0, 0, d).unwrap();
            let h = ra_histogram(&f2, &params).unwrap();
            assert_eq!(h.sum_squares(), BigUint::from(n_w_pairs(&f2, &params).unwrap()));
        }
    }

    #[test]
    fn variance_identities() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        for (d, m) in [(3, 1), (5, 1), (5, 0)] {
            let params = WeightParams::new(0.5, 0, d).unwrap();
            let ctx = GlobalCtx::new(&f2, params).unwrap();
            let rep = variance(&ctx, m).unwrap();
            assert!(rep.sigma2_identity() && rep.sigma3_identity(), "{rep:?}");
            assert_eq!(rep.var, rep.var_direct);
            assert!(rep.var >= BigRational::zero());
        }
    }

    #[test]
    fn variance_flags_large_modulus() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        let params = WeightParams::new(0.0, 0, 2).unwrap();
        let ctx = GlobalCtx::new(&f2, params).unwrap();
        let rep = variance(&ctx, 1).unwrap();
        assert!(!rep.sigma2_hypothesis && rep.sigma3_hypothesis);
        assert!(!rep.sigma2_identity());
        assert_eq!(rep.var, rep.var_direct);
        assert_eq!(rep.notes.len(), 1);
    }

    #[test]
    fn lemma41_examples() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        let params = WeightParams::new(0.0, 0, 4).unwrap();
        let ctx = GlobalCtx::new(&f2, params).unwrap();
        let t3 = Poly::monomial(FqElem::ONE, 3);
        let c = lemma41_check(&ctx, &t3, &Poly::one()).unwrap();
        assert!(c.equal);
        assert_eq!(c.terms, 512);
        let c = lemma41_check(&ctx, &Poly::one(), &Poly::zero()).unwrap();
        assert!(c.equal);
        assert_eq!(c.terms, 1 << 12);
        assert!(matches!(
            lemma41_check(&ctx, &Poly::monomial(FqElem::ONE, 12), &Poly::one()),
            Err(Error::ModulusTooLarge { .. })
        ));
    }

    #[test]
    fn lemma42_examples() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        let params = WeightParams::new(0.0, 0, 5).unwrap();
        let ctx = GlobalCtx::new(&f2, params).unwrap();
        let n = Poly::from_indices(&[1, 1]);
        let c = lemma42_check(&ctx, &n, &[Poly::one(), Poly::one(), Poly::one()]).unwrap();
        assert!(c.equal, "{c:?}");
        let f5 = FieldCtx::new(5, 1).unwrap();
        let params = WeightParams::new(0.0, 0, 2).unwrap();
        let ctx = GlobalCtx::new(&f5, params).unwrap();
        let n = Poly::from_indices(&[2, 1]);
        let c = lemma42_check(&ctx, &n, &[Poly::one(), Poly::zero(), Poly::from_indices(&[3])]).unwrap();
        assert!(c.equal, "{c:?}");
    }

    #[test]
    fn sa_membership() {
        let f5 = FieldCtx::new(5, 1).unwrap();
        let t = Poly::t();
        assert!(sa_member(&f5, &t, 2.0).unwrap().is_some());
        let mut r = rng();
        let ring = PolyRing::new(&f5);
        for b in [3u32, 4, 5] {
            let (k, _) = planted_k(&f5, b, 1.0, &mut r).unwrap();
            let w = sa_member(&f5, &k, 1.0).unwrap().expect("planted k must be found");
            let s = w.iter().fold(Poly::zero(), |acc, x| ring.add(&acc, &ring.cube(x)));
            assert_eq!(s, k);
            assert!(sa_member(&f5, &k, 2.0).unwrap().is_some());
        }
    }

    #[test]
    fn scan_agrees_with_searcher() {
        let f5 = FieldCtx::new(5, 1).unwrap();
        for (b, a) in [(3u32, 0.0), (4, 0.0), (3, 1.0)] {
            let hit = sa_indicator(&f5, b, a).unwrap();
            let s = SaSearcher::new(&f5, sa_box(b, a)).unwrap();
            let base = 5u64.pow(b);
            for (i, &h) in hit.iter().enumerate().step_by(11) {
                assert_eq!(h, s.find(&Poly::from_index(base + i as u64, 5)).is_some());
            }
        }
    }

    #[test]
    fn ra_support_inside_box() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        let params = WeightParams::new(1.0, 1, 2).unwrap();
        let h = ra_histogram(&f2, &params).unwrap();
        let hit = sa_indicator(&f2, params.b(), 1.0).unwrap();
        assert!(h.counts.iter().zip(&hit).all(|(&c, &s)| c == 0 || s));
    }

    #[test]
    fn upsilon_spaces() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        assert_eq!(upsilon_enumerate(&f2).unwrap().len(), 15);
        let f7 = FieldCtx::new(7, 1).unwrap();
        let sp = upsilon_enumerate(&f7).unwrap();
        assert_eq!(sp.len(), 405);
        let mut r = rng();
        for s in sp.iter().step_by(13) {
            assert!(s.f_vanishes(&f7));
            assert!(s.spot_check(&f7, 100, 3, &mut r));
        }
    }

    #[test]
    fn pairing_count_is_support_size() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        let params = WeightParams::new(0.0, 0, 2).unwrap();
        let s = LinearSpace { pairs: [(0, 3), (1, 4), (2, 5)], roots: [FqElem::ONE; 3] };
        let h = ra_histogram(&f2, &params).unwrap();
        assert_eq!(linear_space_count(&f2, &params, &s).unwrap(), h.support_size);
        let u = upsilon_term(&f2, &params).unwrap();
        assert!(u.union <= u.sum);
        assert!(BigUint::from(u.union) <= h.sum_squares());
    }

    #[test]
    fn subspace_audit_f2() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        let a = subspace_audit(&f2).unwrap();
        assert_eq!(a, SubspaceAudit { total: 1395, vanishing: 15, all_pairings: true });
        let f5 = FieldCtx::new(5, 1).unwrap();
        let a = subspace_audit(&f5).unwrap();
        assert_eq!(a, SubspaceAudit { total: 2558556, vanishing: 15, all_pairings: true });
    }

    #[test]
    fn subspace_audit_f4_has_extra_spaces() {
        // Over F_4 the cubic x^3 is the Hermitian form x^{2+1}.
        let f4 = FieldCtx::new(2, 2).unwrap();
        let a = subspace_audit(&f4).unwrap();
        assert_eq!(a, SubspaceAudit { total: 376805, vanishing: 891, all_pairings: false });
        assert_eq!(upsilon_enumerate(&f4).unwrap().len(), 405);
    }
}
