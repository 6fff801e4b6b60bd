//! The weight `nu_{A,alpha}` at the infinite place and exact values of the
//! real densities `sigma_{inf,A}(k)` and `sigma_inf`.
//!
//! Everything is computed in `s = 1/t`. After scaling by `t^{d + A~}` the
//! weight support becomes a condition on valuations of triples in
//! `F_q[s]/(s^L)`, and the densities become point counts. Two routes give
//! those counts: full cube histograms convolved over the additive group, and
//! a lifted route that counts modulo `s^2` and multiplies by the (constant)
//! number of Hensel lifts.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::gf::{FieldCtx, FqElem};
use crate::group::{convolve_all, ElemAbelian, Histogram};
use crate::polyring::Poly;
use crate::{limits, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightParams {
    a: f64,
    alpha: u32,
    d: u32,
    a_tilde: u32,
}

impl WeightParams {
    pub fn new(a: f64, alpha: u32, d: u32) -> Result<Self> {
        if !a.is_finite() || a < 0.0 {
            return Err(Error::InvalidParams(format!("A must be a finite real >= 0, got {a}")));
        }
        if alpha > 2 {
            return Err(Error::InvalidParams(format!("alpha must be 0, 1 or 2, got {alpha}")));
        }
        if d == 0 {
            return Err(Error::InvalidParams("d must be >= 1".into()));
        }
        // floor(alpha/3 + A), computed as floor((alpha + 3A) / 3) with a
        // little slack so that A = 1/3 style inputs round as intended.
        let a_tilde = ((alpha as f64 + 3.0 * a) / 3.0 + 1e-9).floor() as u32;
        if alpha > 0 && a_tilde < alpha {
            return Err(Error::InvalidParams(format!(
                "A~ = {a_tilde} < alpha = {alpha}: the density formulas need A~ >= alpha"
            )));
        }
        Ok(WeightParams { a, alpha, d, a_tilde })
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn alpha(&self) -> u32 {
        self.alpha
    }
    pub fn d(&self) -> u32 {
        self.d
    }
    pub fn a_tilde(&self) -> u32 {
        self.a_tilde
    }
    /// `B = 3d + alpha`, the degree of the `k` being weighted.
    pub fn b(&self) -> u32 {
        3 * self.d + self.alpha
    }
    /// `v_s(m) = 3 A~ - alpha` for `m = P^{-3} t^{-3A~} k`.
    pub fn v_m(&self) -> u32 {
        3 * self.a_tilde - self.alpha
    }
    /// Depth `7 A~ + 2` at which `sigma_{inf,A}` is an exact count.
    pub fn depth(&self) -> u32 {
        7 * self.a_tilde + 2
    }
    /// Lowest `t`-exponent of `k` that `sigma_{inf,A}(k)` depends on.
    pub fn lowest_relevant_exponent(&self) -> i64 {
        3 * self.d as i64 + 3 * self.a_tilde as i64 - self.depth() as i64 + 1
    }
}

/// A Laurent polynomial `sum_i c_i t^{lo + i}`, read as the class of all
/// series agreeing with it in every exponent `>= lo`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentWindow {
    pub lo: i64,
    pub coeffs: Vec<FqElem>,
}

impl LaurentWindow {
    pub fn new(lo: i64, coeffs: Vec<FqElem>) -> Self {
        LaurentWindow { lo, coeffs }
    }

    pub fn from_poly(p: &Poly, lo: i64) -> Self {
        assert!(lo <= 0);
        let mut coeffs = vec![FqElem::ZERO; (-lo) as usize];
        coeffs.extend_from_slice(p.coeffs());
        LaurentWindow { lo, coeffs }
    }

    /// Degree in `t`, or `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        self.coeffs.iter().rposition(|c| !c.is_zero()).map(|i| self.lo + i as i64)
    }

    fn shifted_poly(&self, lo: i64) -> Poly {
        assert!(lo <= self.lo);
        let mut v = vec![FqElem::ZERO; (self.lo - lo) as usize];
        v.extend_from_slice(&self.coeffs);
        Poly::from_coeffs(v)
    }
}

/// `nu` evaluated at the exact point given by three Laurent polynomials.
pub fn nu_exact(f: &FieldCtx, params: &WeightParams, x: &[LaurentWindow; 3]) -> bool {
    let lo = x.iter().map(|w| w.lo).min().unwrap();
    let ring = crate::polyring::PolyRing::new(f);
    let degs: Vec<Option<i64>> = x.iter().map(|w| w.degree()).collect();
    let (d1, d2, d3) = match (degs[0], degs[1], degs[2]) {
        (Some(a), Some(b), Some(c)) => (a, b, c),
        _ => return false,
    };
    if d1 != d2 || d1 < 0 || d1 > params.a_tilde as i64 || d3 > d2 || d3 < d2 - 1 {
        return false;
    }
    let mut sum = Poly::zero();
    for w in x {
        sum = ring.add(&sum, &ring.cube(&w.shifted_poly(lo)));
    }
    sum.degree().map(|dg| 3 * lo + dg as i64) == Some(params.alpha as i64)
}

/// `nu_{A,alpha}` on classes of windows; constant on the class only when
/// every window is known down to `t^{min(alpha - 2A~, -1)}`.
pub fn nu_indicator(f: &FieldCtx, params: &WeightParams, x: &[LaurentWindow; 3]) -> Result<bool> {
    let need = (params.alpha as i64 - 2 * params.a_tilde as i64).min(-1);
    for w in x {
        if w.lo > need {
            return Err(Error::InsufficientPrecision { have: w.lo, need });
        }
    }
    Ok(nu_exact(f, params, x))
}

pub fn w_indicator(f: &FieldCtx, params: &WeightParams, x: &[LaurentWindow; 3], y: &[LaurentWindow; 3]) -> Result<bool> {
    Ok(nu_indicator(f, params, x)? && nu_indicator(f, params, y)?)
}

/// `y` in `R_{A,alpha}`: windows on exponents `alpha - 2A~ ..= A~`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RSetElem {
    pub windows: [LaurentWindow; 3],
}

pub fn r_set_enumerate(f: &FieldCtx, params: &WeightParams) -> Result<Vec<RSetElem>> {
    let lo = params.alpha as i64 - 2 * params.a_tilde as i64;
    let width = (params.a_tilde as i64 - lo + 1) as usize;
    limits::check_default("R-set enumeration", f.q() as u64, 3 * width as u64)?;
    let q = f.q() as u64;
    let total = q.pow(width as u32);
    let window = |i: u64| {
        let mut c = Vec::with_capacity(width);
        let mut x = i;
        for _ in 0..width {
            c.push(FqElem((x % q) as u32));
            x /= q;
        }
        LaurentWindow::new(lo, c)
    };
    let mut out = Vec::new();
    for i in 0..total {
        let x1 = window(i);
        match x1.degree() {
            Some(dg) if dg >= 0 => {}
            _ => continue,
        }
        for j in 0..total {
            let x2 = window(j);
            if x2.degree() != x1.degree() {
                continue;
            }
            for k in 0..total {
                let w = [x1.clone(), x2.clone(), window(k)];
                if nu_exact(f, params, &w) {
                    out.push(RSetElem { windows: w });
                }
            }
        }
    }
    Ok(out)
}

/// Truncated product in `F_q[s]/(s^l)`.
fn series_mul(f: &FieldCtx, a: &[FqElem], b: &[FqElem], l: usize) -> Vec<FqElem> {
    let mut out = vec![FqElem::ZERO; l];
    for (i, &x) in a.iter().enumerate().take(l) {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(l - i) {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    out
}

pub fn series_cube(f: &FieldCtx, a: &[FqElem], l: usize) -> Vec<FqElem> {
    let sq = series_mul(f, a, a, l);
    series_mul(f, &sq, a, l)
}

fn series_index(q: u32, c: &[FqElem]) -> usize {
    c.iter().rev().fold(0usize, |acc, x| acc * q as usize + x.0 as usize)
}

fn series_from_index(q: u32, mut idx: usize, l: usize) -> Vec<FqElem> {
    let mut v = Vec::with_capacity(l);
    for _ in 0..l {
        v.push(FqElem((idx % q as usize) as u32));
        idx /= q as usize;
    }
    v
}

/// `h_b(r) = #{x mod s^L : v_s(x) = b, x^3 = r}` for `b = 0..=b_max`.
///
/// `x = s^b u` with `u` a unit; `x^3` only sees `u mod s^{L-3b}`, so each
/// class of `u` there stands for `q^{2b}` values of `x`.
pub fn cube_histograms(f: &FieldCtx, l: u32, b_max: u32) -> Result<Vec<Histogram>> {
    let g = ElemAbelian::new(f.p(), f.e() * l)?;
    let q = f.q();
    let mut out = Vec::new();
    for b in 0..=b_max {
        let mut h = Histogram::zeros(g);
        if b >= l {
            out.push(h);
            continue;
        }
        if 3 * b >= l {
            let n = (q as u128 - 1) * (q as u128).pow(l - b - 1);
            h.bump(0, n);
            out.push(h);
            continue;
        }
        let lp = (l - 3 * b) as usize;
        let mult = (q as u128).pow(2 * b);
        let count = (q as usize).pow(lp as u32);
        let step = count / q as usize;
        // units: lowest coefficient nonzero
        for idx in 0..count {
            if idx % q as usize == 0 {
                continue;
            }
            let u = series_from_index(q, idx, lp);
            let c = series_cube(f, &u, lp);
            let mut full = vec![FqElem::ZERO; 3 * b as usize];
            full.extend_from_slice(&c);
            h.bump(series_index(q, &full), mult);
        }
        let _ = step;
        out.push(h);
    }
    Ok(out)
}

/// `m = P^{-3} t^{-3A~} k` truncated to `s^l`, as a group index.
pub fn m_index(f: &FieldCtx, params: &WeightParams, k: &Poly, l: u32) -> usize {
    let top = (3 * params.d + 3 * params.a_tilde) as i64;
    let c: Vec<FqElem> = (0..l as i64)
        .map(|j| {
            let e = top - j;
            if e < 0 {
                FqElem::ZERO
            } else {
                k.coeff(e as usize)
            }
        })
        .collect();
    series_index(f.q(), &c)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SigmaRoute {
    /// Convolved cube histograms over `F_q[s]/(s^{7A~+2})`.
    Full,
    /// Counts modulo `s^2` times the number of Hensel lifts.
    Lifted,
}

/// Largest `q^L` for which `Auto` picks the full histogram route.
pub const FULL_ROUTE_MAX_BITS: u32 = 20;

/// `sigma_{inf,A}` for one parameter set; values are `numer / q^{14A~+2}`.
#[derive(Clone, Debug)]
pub struct SigmaEngine<'a> {
    f: &'a FieldCtx,
    params: WeightParams,
    route: SigmaRoute,
    // Full: counts over G_L. Lifted: C over G_2.
    table: Vec<u128>,
}

impl<'a> SigmaEngine<'a> {
    pub fn new(f: &'a FieldCtx, params: WeightParams, route: Option<SigmaRoute>) -> Result<Self> {
        let l = params.depth();
        let route = route.unwrap_or(if limits::log2_ceil_pow(f.q() as u64, l as u64) <= FULL_ROUTE_MAX_BITS {
            SigmaRoute::Full
        } else {
            SigmaRoute::Lifted
        });
        let table = match route {
            SigmaRoute::Full => full_count_table(f, params.a_tilde, l)?.counts().to_vec(),
            SigmaRoute::Lifted => lifted_table(f)?,
        };
        Ok(SigmaEngine { f, params, route, table })
    }

    pub fn params(&self) -> &WeightParams {
        &self.params
    }

    pub fn route(&self) -> SigmaRoute {
        self.route
    }

    /// Exponent `e` of the common denominator `q^e`.
    pub fn denom_exp(&self) -> u32 {
        14 * self.params.a_tilde + 2
    }

    /// Numerator for `m` given as an index into `F_q[s]/(s^{7A~+2})`.
    pub fn numer_of_index(&self, idx: usize) -> u128 {
        match self.route {
            SigmaRoute::Full => self.table[idx],
            SigmaRoute::Lifted => {
                let q = self.f.q() as usize;
                let l = self.params.depth() as usize;
                let m = series_from_index(self.f.q(), idx, l);
                let v = match m.iter().position(|c| !c.is_zero()) {
                    Some(v) => v as u32,
                    None => return self.lifted_sum_zero(),
                };
                let mut s = 0u128;
                for b in 0..=self.params.a_tilde.min(v / 3) {
                    let i = 3 * b as usize;
                    s += self.table[m[i].0 as usize + q * m[i + 1].0 as usize];
                }
                s * (self.f.q() as u128).pow(14 * self.params.a_tilde)
            }
        }
    }

    fn lifted_sum_zero(&self) -> u128 {
        let s: u128 = (0..=self.params.a_tilde).map(|_| self.table[0]).sum();
        s * (self.f.q() as u128).pow(14 * self.params.a_tilde)
    }

    pub fn sigma_of_index(&self, idx: usize) -> BigRational {
        BigRational::new(BigInt::from(self.numer_of_index(idx)), BigInt::from(self.f.q()).pow(self.denom_exp()))
    }

    pub fn sigma(&self, k: &Poly) -> Result<BigRational> {
        if k.degree() != Some(self.params.b() as usize) {
            return Err(Error::SizeMismatch(k.deg_i64().max(0) as usize, self.params.b() as usize));
        }
        Ok(self.sigma_of_index(m_index(self.f, &self.params, k, self.params.depth())))
    }

    /// Numerators for every `m` in `F_q[s]/(s^{7A~+2})`.
    pub fn numer_table(&self) -> Result<Vec<u128>> {
        match self.route {
            SigmaRoute::Full => Ok(self.table.clone()),
            SigmaRoute::Lifted => {
                limits::check_default("sigma table", self.f.q() as u64, self.params.depth() as u64)?;
                let n = (self.f.q() as usize).pow(self.params.depth());
                Ok((0..n).map(|i| self.numer_of_index(i)).collect())
            }
        }
    }
}

/// `sum_{b <= A~} h_b * h_b * (h_b + h_{b+1})` at depth `l`.
pub fn full_count_table(f: &FieldCtx, a_tilde: u32, l: u32) -> Result<Histogram> {
    let hs = cube_histograms(f, l, a_tilde + 1)?;
    let mut squares = Vec::new();
    let mut tails = Vec::new();
    for b in 0..=a_tilde as usize {
        squares.push(hs[b].convolve(&hs[b])?);
        let mut t = hs[b].clone();
        t.add_assign(&hs[b + 1])?;
        tails.push(t);
    }
    let pairs: Vec<(&Histogram, &Histogram)> = squares.iter().zip(&tails).collect();
    convolve_all(&pairs)
}

/// `C(m') = #{x mod s^2 : x_1, x_2 units, v(x_3) <= 1, F_0(x) = m'}`, indexed
/// by `m'_0 + q m'_1`.
pub fn lifted_table(f: &FieldCtx) -> Result<Vec<u128>> {
    let q = f.q() as usize;
    limits::check_default("lifted table", q as u64, 6)?;
    let mut cubes = Vec::with_capacity(q * q);
    for idx in 0..q * q {
        let u = series_from_index(f.q(), idx, 2);
        cubes.push(series_cube(f, &u, 2));
    }
    let units: Vec<usize> = (0..q * q).filter(|i| i % q != 0).collect();
    let v_le1: Vec<usize> = (1..q * q).collect();
    let mut table = vec![0u128; q * q];
    for &a in &units {
        for &b in &units {
            let s0 = f.add(cubes[a][0], cubes[b][0]);
            let s1 = f.add(cubes[a][1], cubes[b][1]);
            for &c in &v_le1 {
                let m0 = f.add(s0, cubes[c][0]);
                let m1 = f.add(s1, cubes[c][1]);
                table[m0.0 as usize + q * m1.0 as usize] += 1;
            }
        }
    }
    Ok(table)
}

/// Direct count over `(F_q[s]/(s^L))^3` of `sigma_{inf,A}` numerators for
/// every `m`, with `x_1` optionally fixed (then a slice of the full count).
pub fn sigma_brute_table(f: &FieldCtx, params: &WeightParams, x1: Option<usize>) -> Result<Vec<u128>> {
    let l = params.depth() as usize;
    let q = f.q() as usize;
    let n = q.pow(l as u32);
    let vars = if x1.is_some() { 2 } else { 3 };
    limits::check("brute sigma", q as u64, (vars * l) as u64, 24)?;
    let g = ElemAbelian::new(f.p(), f.e() * l as u32)?;
    let val: Vec<Option<u32>> = (0..n)
        .map(|i| series_from_index(f.q(), i, l).iter().position(|c| !c.is_zero()).map(|v| v as u32))
        .collect();
    let cube: Vec<usize> = (0..n).map(|i| series_index(f.q(), &series_cube(f, &series_from_index(f.q(), i, l), l))).collect();
    let mut table = vec![0u128; n];
    let xs1: Vec<usize> = match x1 {
        Some(v) => vec![v],
        None => (0..n).collect(),
    };
    for &a in &xs1 {
        let va = match val[a] {
            Some(v) if v <= params.a_tilde => v,
            _ => continue,
        };
        for b in 0..n {
            if val[b] != Some(va) {
                continue;
            }
            let s = g.add(cube[a], cube[b]);
            for c in 0..n {
                if matches!(val[c], Some(vc) if vc == va || vc == va + 1) {
                    table[g.add(s, cube[c])] += 1;
                }
            }
        }
    }
    Ok(table)
}

/// Looks for a point where `nu` differs from the count of `R`-set windows
/// within `q^{alpha - 2A~}` of it. Points range over windows on exponents
/// `alpha - 2A~ - extra ..= A~ + 1`. Returns the first mismatch.
pub fn r_set_decomposition_check(
    f: &FieldCtx,
    params: &WeightParams,
    extra: u32,
) -> Result<Option<[LaurentWindow; 3]>> {
    use std::collections::HashSet;
    let r_lo = params.alpha as i64 - 2 * params.a_tilde as i64;
    let hi = params.a_tilde as i64 + 1;
    let lo = r_lo - extra as i64;
    let width = (hi - lo + 1) as usize;
    limits::check_default("R-set decomposition", f.q() as u64, 3 * width as u64)?;
    let r: HashSet<Vec<u32>> = r_set_enumerate(f, params)?
        .into_iter()
        .map(|e| e.windows.iter().flat_map(|w| w.coeffs.iter().map(|c| c.0)).collect())
        .collect();
    let q = f.q() as u64;
    let per = q.pow(width as u32);
    let window = |mut x: u64| {
        let mut c = Vec::with_capacity(width);
        for _ in 0..width {
            c.push(FqElem((x % q) as u32));
            x /= q;
        }
        LaurentWindow::new(lo, c)
    };
    let skip = (r_lo - lo) as usize;
    let r_width = (params.a_tilde as i64 - r_lo + 1) as usize;
    for i in 0..per.pow(3) {
        let x = [window(i % per), window((i / per) % per), window(i / per / per)];
        let nu = nu_exact(f, params, &x);
        let top_free = x.iter().all(|w| w.coeffs[width - 1].is_zero());
        let in_r = top_free && {
            let key: Vec<u32> = x.iter().flat_map(|w| w.coeffs[skip..skip + r_width].iter().map(|c| c.0)).collect();
            r.contains(&key)
        };
        if nu != in_r {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// `sigma_{inf,A}` restricted to one value of `x_1`, from the histograms:
/// `(h_b * (h_b + h_{b+1}))(m - x_1^3)` with `b = v(x_1)`.
pub fn sigma_slice_numer(f: &FieldCtx, params: &WeightParams, m_idx: usize, x1: usize) -> Result<u128> {
    let l = params.depth();
    let q = f.q() as usize;
    let g = ElemAbelian::new(f.p(), f.e() * l)?;
    let x = series_from_index(f.q(), x1, l as usize);
    let b = match x.iter().position(|c| !c.is_zero()) {
        Some(b) if b as u32 <= params.a_tilde => b,
        _ => return Ok(0),
    };
    let hs = cube_histograms(f, l, params.a_tilde + 1)?;
    let mut tail = hs[b].clone();
    tail.add_assign(&hs[b + 1])?;
    let conv = hs[b].convolve(&tail)?;
    let c = series_index(f.q(), &series_cube(f, &x, l as usize));
    let _ = q;
    Ok(conv.get(g.sub(m_idx, c)))
}

/// `sigma_inf` with the theta integral cut at `|theta| <= q^T` and the
/// congruence checked at depth `L = T + 3A~ + 2`, counted on histograms of
/// depth `L + extra`. Full route only.
pub fn sigma_infty_hist(f: &FieldCtx, params: &WeightParams, t_exp: u32, extra: u32) -> Result<BigRational> {
    let a = params.a_tilde;
    let l = t_exp + 3 * a + 2;
    let depth = l + extra;
    let table = full_count_table(f, a, depth)?;
    let q = f.q() as usize;
    let g_full = table.group();
    // Aggregate onto F_q[s]/(s^l).
    let gl = ElemAbelian::new(f.p(), f.e() * l)?;
    let mut agg = vec![0u128; gl.size()];
    let modulus = q.pow(l);
    for (i, &c) in table.counts().iter().enumerate() {
        if c != 0 {
            agg[i % modulus] += c;
        }
    }
    let _ = g_full;
    let v = params.v_m() as usize;
    let mut count6 = BigUint::zero();
    for (i, &c) in agg.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let m = series_from_index(f.q(), i, l as usize);
        if m.iter().position(|x| !x.is_zero()) != Some(v) {
            continue;
        }
        count6 += BigUint::from(c) * BigUint::from(agg[gl.neg(i)]);
    }
    // q^{T+1} q^{6A~} q^{-6(L-1)} count6, with the extra depth contributing q^{6 extra}.
    let qn = BigInt::from(f.q());
    let num = BigInt::from(count6) * qn.pow(t_exp + 1 + 6 * a);
    let den = qn.pow(6 * (depth - 1));
    Ok(BigRational::new(num, den))
}

/// `sigma_inf` through the lifted counts modulo `s^2`.
pub fn sigma_infty_lifted(f: &FieldCtx, params: &WeightParams) -> Result<BigRational> {
    let c = lifted_table(f)?;
    let q = f.q() as usize;
    let v = params.v_m() as usize;
    let l = v + 2;
    limits::check_default("sigma_inf lifted", q as u64, l as u64)?;
    let gl = ElemAbelian::new(f.p(), f.e() * l as u32)?;
    // Only m with v(m) = v contribute: m = s^v (m_v + m_{v+1} s), m_v != 0.
    let mut total = BigUint::zero();
    let s_of = |m: &[FqElem]| -> u128 {
        let mut s = 0u128;
        for b in 0..=params.a_tilde.min(v as u32 / 3) as usize {
            s += c[m[3 * b].0 as usize + q * m[3 * b + 1].0 as usize];
        }
        s
    };
    let base = q.pow(v as u32);
    for top in 0..q * q {
        if top % q == 0 {
            continue;
        }
        let idx = top * base;
        let m = series_from_index(f.q(), idx, l);
        let neg = series_from_index(f.q(), gl.neg(idx), l);
        total += BigUint::from(s_of(&m)) * BigUint::from(s_of(&neg));
    }
    // sigma_inf = q^{alpha - 5} * sum S(m) S(-m)
    let qn = BigInt::from(f.q());
    let num = BigInt::from(total) * qn.pow(params.alpha);
    Ok(BigRational::new(num, qn.pow(5)))
}

/// `sigma_inf` at the natural cutoff `T = 4A~`, by whichever route fits.
pub fn sigma_infty(f: &FieldCtx, params: &WeightParams) -> Result<BigRational> {
    if limits::log2_ceil_pow(f.q() as u64, params.depth() as u64) <= FULL_ROUTE_MAX_BITS {
        sigma_infty_hist(f, params, 4 * params.a_tilde, 0)
    } else {
        sigma_infty_lifted(f, params)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Prop32Row {
    pub k: Poly,
    pub sigma: BigRational,
    pub bound: BigRational,
    pub pass: bool,
}

/// Checks `sigma_{inf,A}(k) >= A~ / q^2` for each `k`.
pub fn prop32_sweep(engine: &SigmaEngine, ks: &[Poly]) -> Result<Vec<Prop32Row>> {
    let q = BigInt::from(engine.f.q());
    let bound = BigRational::new(BigInt::from(engine.params.a_tilde), &q * &q);
    ks.iter()
        .map(|k| {
            let sigma = engine.sigma(k)?;
            let pass = sigma >= bound;
            Ok(Prop32Row { k: k.clone(), sigma, bound: bound.clone(), pass })
        })
        .collect()
}

pub fn is_q_power_denominator(x: &BigRational, q: u32) -> bool {
    let mut d = x.denom().clone();
    let qb = BigInt::from(q);
    while !d.is_one() {
        if (&d % &qb) != BigInt::zero() {
            return false;
        }
        d /= &qb;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn win(lo: i64, c: &[u32]) -> LaurentWindow {
        LaurentWindow::new(lo, c.iter().map(|&x| FqElem(x)).collect())
    }

    #[test]
    fn params_validation() {
        assert!(WeightParams::new(0.0, 1, 2).is_err());
        assert!(WeightParams::new(1.0, 2, 2).is_err());
        assert_eq!(WeightParams::new(0.5, 0, 3).unwrap().a_tilde(), 0);
        assert_eq!(WeightParams::new(2.0 / 3.0, 1, 3).unwrap().a_tilde(), 1);
        assert!(WeightParams::new(1.0 / 3.0, 2, 3).is_err());
        assert!(WeightParams::new(2.0, 2, 1).is_ok());
    }

    #[test]
    fn nu_examples() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        let pr = WeightParams::new(0.0, 0, 1).unwrap();
        let one = win(-1, &[0, 1]);
        let zero = win(-1, &[0, 0]);
        assert!(nu_indicator(&f2, &pr, &[one.clone(), one.clone(), one.clone()]).unwrap());
        assert!(!nu_indicator(&f2, &pr, &[one.clone(), one.clone(), zero]).unwrap());
        assert!(nu_indicator(&f2, &pr, &[win(0, &[1]), one.clone(), one.clone()]).is_err());

        let f5 = FieldCtx::new(5, 1).unwrap();
        for z in 0..5 {
            let x = [win(-1, &[0, 1]), win(-1, &[0, 4]), win(-1, &[0, z])];
            assert_eq!(nu_indicator(&f5, &pr, &x).unwrap(), z != 0);
        }
        // z = t^{-1} is still allowed: |z| >= |y| / q.
        let x = [win(-1, &[0, 1]), win(-1, &[0, 4]), win(-1, &[1, 0])];
        assert!(!nu_indicator(&f5, &pr, &x).unwrap());
        let x = [win(-1, &[0, 1]), win(-1, &[0, 1]), win(-1, &[1, 0])];
        assert!(nu_indicator(&f5, &pr, &x).unwrap());
    }

    #[test]
    fn histogram_examples() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        let hs = cube_histograms(&f2, 2, 1).unwrap();
        assert_eq!(hs[0].counts(), &[0, 1, 0, 1]);
        assert_eq!(hs[1].counts(), &[1, 0, 0, 0]);
        let f5 = FieldCtx::new(5, 1).unwrap();
        let hs = cube_histograms(&f5, 3, 3).unwrap();
        let total: u128 = hs.iter().map(|h| h.mass()).sum::<u128>() + 1;
        assert_eq!(total, 125);
    }

    #[test]
    fn histograms_match_direct_cubes() {
        for (p, e, l) in [(2u32, 1u32, 7u32), (5, 1, 4), (2, 2, 4), (7, 1, 3)] {
            let f = FieldCtx::new(p, e).unwrap();
            let hs = cube_histograms(&f, l, l).unwrap();
            let q = f.q() as usize;
            let n = q.pow(l);
            let mut direct = vec![vec![0u128; n]; l as usize + 1];
            for i in 1..n {
                let x = series_from_index(f.q(), i, l as usize);
                let v = x.iter().position(|c| !c.is_zero()).unwrap();
                direct[v][series_index(f.q(), &series_cube(&f, &x, l as usize))] += 1;
            }
            for b in 0..l as usize {
                assert_eq!(hs[b].counts(), &direct[b][..], "q={} l={l} b={b}", f.q());
            }
        }
    }

    #[test]
    fn worked_sigma_value() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        for d in 1..4 {
            let pr = WeightParams::new(0.5, 0, d).unwrap();
            let k = Poly::monomial(FqElem::ONE, 3 * d as usize);
            for route in [SigmaRoute::Full, SigmaRoute::Lifted] {
                let eng = SigmaEngine::new(&f2, pr, Some(route)).unwrap();
                assert_eq!(eng.sigma(&k).unwrap(), BigRational::one());
            }
        }
        assert_eq!(lifted_table(&f2).unwrap(), vec![2, 4, 2, 4]);
    }

    #[test]
    fn sigma_rejects_wrong_degree() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        let pr = WeightParams::new(0.0, 0, 2).unwrap();
        let eng = SigmaEngine::new(&f2, pr, None).unwrap();
        assert!(matches!(eng.sigma(&Poly::monomial(FqElem::ONE, 5)), Err(Error::SizeMismatch(5, 6))));
    }

    #[test]
    fn routes_agree() {
        for (p, e, a, alpha) in [(2u32, 1u32, 1.0, 0u32), (2, 1, 1.0, 1), (2, 1, 2.0, 2), (2, 2, 1.0, 0), (5, 1, 0.0, 0), (7, 1, 0.0, 0), (13, 1, 0.0, 0)] {
            let f = FieldCtx::new(p, e).unwrap();
            let pr = WeightParams::new(a, alpha, 3).unwrap();
            let full = SigmaEngine::new(&f, pr, Some(SigmaRoute::Full)).unwrap();
            let lifted = SigmaEngine::new(&f, pr, Some(SigmaRoute::Lifted)).unwrap();
            let n = (f.q() as usize).pow(pr.depth());
            for idx in 0..n {
                assert_eq!(full.numer_of_index(idx), lifted.numer_of_index(idx), "p={p} a={a} alpha={alpha} idx={idx}");
            }
            assert_eq!(sigma_infty_hist(&f, &pr, 4 * pr.a_tilde(), 0).unwrap(), sigma_infty_lifted(&f, &pr).unwrap());
        }
    }

    #[test]
    fn sigma_infty_small() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        let pr = WeightParams::new(0.0, 0, 1).unwrap();
        assert_eq!(sigma_infty(&f2, &pr).unwrap(), BigRational::one());
        // Extra depth and a larger theta cutoff leave the value unchanged.
        assert_eq!(sigma_infty_hist(&f2, &pr, 0, 1).unwrap(), BigRational::one());
        assert_eq!(sigma_infty_hist(&f2, &pr, 1, 0).unwrap(), BigRational::one());
        let pr = WeightParams::new(1.0, 0, 1).unwrap();
        let nine_quarters = BigRational::new(9.into(), 4.into());
        for t in [4, 5, 6] {
            assert_eq!(sigma_infty_hist(&f2, &pr, t, 0).unwrap(), nine_quarters);
        }
        assert_eq!(sigma_infty_lifted(&f2, &pr).unwrap(), nine_quarters);
        let f5 = FieldCtx::new(5, 1).unwrap();
        let pr = WeightParams::new(0.0, 0, 1).unwrap();
        assert_eq!(sigma_infty(&f5, &pr).unwrap(), BigRational::new(23716.into(), 25.into()));
    }

    #[test]
    fn brute_oracle_full() {
        for (p, e) in [(2u32, 1u32), (5, 1), (7, 1), (2, 2)] {
            let f = FieldCtx::new(p, e).unwrap();
            let pr = WeightParams::new(0.0, 0, 2).unwrap();
            let brute = sigma_brute_table(&f, &pr, None).unwrap();
            for route in [SigmaRoute::Full, SigmaRoute::Lifted] {
                let eng = SigmaEngine::new(&f, pr, Some(route)).unwrap();
                assert_eq!(eng.numer_table().unwrap(), brute, "q={}", f.q());
            }
        }
    }

    #[test]
    fn brute_oracle_slices() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        for alpha in [0, 1] {
            let pr = WeightParams::new(1.0, alpha, 3).unwrap();
            let eng = SigmaEngine::new(&f2, pr, Some(SigmaRoute::Full)).unwrap();
            let mut summed = vec![0u128; 1 << pr.depth()];
            // x_1 with v(x_1) = 0 and 1 and a few higher digits set.
            for x1 in [1usize, 3, 0b1_0000_0001, 2, 6, 0b1_0101_0010] {
                let brute = sigma_brute_table(&f2, &pr, Some(x1)).unwrap();
                for (m, &c) in brute.iter().enumerate().step_by(7) {
                    assert_eq!(sigma_slice_numer(&f2, &pr, m, x1).unwrap(), c);
                }
                for (s, c) in summed.iter_mut().zip(&brute) {
                    *s += c;
                }
            }
            assert!(summed.iter().zip(eng.numer_table().unwrap()).all(|(s, t)| *s <= t));
        }
    }

    #[test]
    fn r_set_decomposition() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        for alpha in [0, 1] {
            let pr = WeightParams::new(1.0, alpha, 2).unwrap();
            assert_eq!(r_set_decomposition_check(&f2, &pr, 1).unwrap(), None);
        }
        let pr = WeightParams::new(0.0, 0, 1).unwrap();
        assert_eq!(r_set_enumerate(&f2, &pr).unwrap().len(), 1);
    }

    #[test]
    fn r_set_decomposition_needs_positive_a() {
        // With A~ = 0 the windows stop at t^0 and nu is not constant on them.
        let f5 = FieldCtx::new(5, 1).unwrap();
        let pr = WeightParams::new(0.0, 0, 1).unwrap();
        let x = [win(-1, &[0, 1]), win(-1, &[0, 1]), win(-1, &[1, 0])];
        assert!(nu_exact(&f5, &pr, &x));
        let trunc = [win(0, &[1]), win(0, &[1]), win(0, &[0])];
        assert!(!nu_exact(&f5, &pr, &trunc));
        assert!(r_set_decomposition_check(&f5, &pr, 1).unwrap().is_some());
    }

    #[test]
    fn prop32_on_small_grid() {
        for (p, a, alpha) in [(2u32, 1.0, 0u32), (2, 1.0, 1), (5, 1.0, 0), (7, 0.0, 0)] {
            let f = FieldCtx::new(p, 1).unwrap();
            let pr = WeightParams::new(a, alpha, 2).unwrap();
            let eng = SigmaEngine::new(&f, pr, None).unwrap();
            let ring = crate::polyring::PolyRing::new(&f);
            let ks: Vec<Poly> = ring
                .polys_of_degree(pr.b() as usize)
                .unwrap()
                .step_by(97)
                .take(200)
                .collect();
            for row in prop32_sweep(&eng, &ks).unwrap() {
                assert!(row.pass, "{:?}", row);
                assert!(is_q_power_denominator(&row.sigma, f.q()));
            }
        }
    }
}
