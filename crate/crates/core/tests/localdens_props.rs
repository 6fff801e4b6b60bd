//! Local density invariants checked against direct enumeration.

use cubesff::gf::FieldCtx;
use cubesff::localdens::{
    modulus_n, prop33_bound_lower, rho_star, rho_table_brute, rho6_divisor_identity, s_r0, s_r0_characters,
    ResidueDensities,
};
use cubesff::polyring::{Poly, PolyRing, ResidueRing};
use cubesff::Error;
use num_bigint::BigInt;
use num_rational::BigRational;

/// Residue indices are base-p digit strings, so addition is digitwise mod p.
fn add_idx(mut a: u64, mut b: u64, p: u64) -> u64 {
    let (mut out, mut place) = (0, 1);
    while a > 0 || b > 0 {
        out += ((a % p + b % p) % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

fn conv3(hist: &[u64], p: u64) -> Vec<u64> {
    let supp: Vec<(u64, u64)> = hist.iter().enumerate().filter(|(_, &c)| c > 0).map(|(i, &c)| (i as u64, c)).collect();
    let mut two = vec![0u64; hist.len()];
    for &(a, ca) in &supp {
        for &(b, cb) in &supp {
            two[add_idx(a, b, p) as usize] += ca * cb;
        }
    }
    let mut three = vec![0u64; hist.len()];
    for (a, &ca) in two.iter().enumerate().filter(|(_, &c)| c > 0) {
        for &(b, cb) in &supp {
            three[add_idx(a as u64, b, p) as usize] += ca * cb;
        }
    }
    three
}

/// Triples mod `w^e`, not all divisible by `w`, summing to each residue.
fn rho_star_brute(ring: PolyRing, w: &Poly, e: u32) -> Vec<u64> {
    let m = ring.pow(w, e as u64);
    let rr = ResidueRing::new(ring, m.clone()).unwrap();
    let n = rr.card() as usize;
    let (mut all, mut div) = (vec![0u64; n], vec![0u64; n]);
    for x in rr.elements() {
        let c = rr.index(&ring.cube(&x)) as usize;
        all[c] += 1;
        if ring.divides(w, &x).unwrap() {
            div[c] += 1;
        }
    }
    let p = ring.field().p() as u64;
    conv3(&all, p).iter().zip(conv3(&div, p)).map(|(a, d)| a - d).collect()
}

#[test]
fn hensel_invariance() {
    for (p, e_f, degs) in [(2u32, 1u32, 1..=4usize), (5, 1, 1..=2), (7, 1, 1..=2)] {
        let f = FieldCtx::new(p, e_f).unwrap();
        let ring = PolyRing::new(&f);
        for deg in degs {
            for w in ring.primes_of_degree(deg).unwrap().into_iter().take(2) {
                let pi = (f.q() as u64).pow(deg as u32);
                for e in 1..=3u32 {
                    if pi.pow(e) > 1 << 12 {
                        break;
                    }
                    let brute = rho_star_brute(ring, &w, e);
                    let rr = ResidueRing::new(ring, ring.pow(&w, e as u64)).unwrap();
                    for (i, &b) in brute.iter().enumerate() {
                        let k = rr.element(i as u64);
                        let scaled = BigRational::new(BigInt::from(b), BigInt::from(pi).pow(2 * e));
                        let base = BigRational::new(BigInt::from(rho_star(ring, &w, 1, &k).unwrap()), BigInt::from(pi).pow(2));
                        assert_eq!(scaled, base, "q={} w={w} e={e} k={k}", f.q());
                        assert_eq!(rho_star(ring, &w, e, &k).unwrap() as u64, b);
                    }
                }
            }
        }
    }
}

fn monics_up_to(ring: PolyRing, max_deg: usize) -> Vec<Poly> {
    (1..=max_deg).flat_map(|d| ring.monics_of_degree(d).unwrap().collect::<Vec<_>>()).collect()
}

#[test]
fn multiplicativity_on_coprime_pairs() {
    for (p, max_total) in [(2u32, 7usize), (5, 3), (7, 2)] {
        let f = FieldCtx::new(p, 1).unwrap();
        let ring = PolyRing::new(&f);
        let monics = monics_up_to(ring, max_total - 1);
        let mut tables = std::collections::HashMap::new();
        for r in &monics {
            tables.insert(r.clone(), rho_table_brute(ring, r).unwrap());
        }
        let mut pairs = 0;
        for (i, r1) in monics.iter().enumerate() {
            for r2 in &monics[i + 1..] {
                let deg = r1.degree().unwrap() + r2.degree().unwrap();
                if deg > max_total || ring.gcd(r1, r2) != Poly::one() {
                    continue;
                }
                let r = ring.mul(r1, r2);
                let rr = ResidueRing::new(ring, r.clone()).unwrap();
                let (rr1, rr2) = (ResidueRing::new(ring, r1.clone()).unwrap(), ResidueRing::new(ring, r2.clone()).unwrap());
                let whole = rho_table_brute(ring, &r).unwrap();
                for (idx, &v) in whole.iter().enumerate() {
                    let k = rr.element(idx as u64);
                    let a = tables[r1][rr1.index(&k) as usize];
                    let b = tables[r2][rr2.index(&k) as usize];
                    assert_eq!(v, a * b, "q={p} r1={r1} r2={r2} k={k}");
                }
                pairs += 1;
            }
        }
        assert!(pairs > 0);
    }
}

#[test]
fn s_r0_routes_on_prime_powers() {
    for (p, cap) in [(2u32, 1u64 << 10), (5, 625), (7, 343), (13, 169)] {
        let f = FieldCtx::new(p, 1).unwrap();
        let ring = PolyRing::new(&f);
        let q = f.q() as u64;
        let mut deg = 1;
        while q.pow(deg as u32) <= cap {
            let ws = ring.primes_of_degree(deg).unwrap();
            let take = if q.pow(deg as u32) >= 256 { 2 } else { ws.len() };
            for w in ws.into_iter().take(take) {
                let mut j = 1;
                while q.pow((deg * j) as u32) <= cap {
                    let r = ring.pow(&w, j as u64);
                    assert_eq!(s_r0(ring, &r).unwrap(), s_r0_characters(ring, &r).unwrap().0, "q={p} r={r}");
                    j += 1;
                }
            }
            deg += 1;
        }
    }
}

#[test]
fn rho6_divisor_sum() {
    for p in [2u32, 5] {
        let f = FieldCtx::new(p, 1).unwrap();
        let ring = PolyRing::new(&f);
        for m in 0..=2 {
            let n = modulus_n(ring, m).unwrap();
            let (lhs, rhs) = rho6_divisor_identity(ring, &n).unwrap();
            assert_eq!(lhs, rhs, "q={p} M={m}");
        }
    }
}

#[test]
fn recip_average_bound() {
    for (p, m_max) in [(5u32, 3u32), (7, 2), (2, 1)] {
        let f = FieldCtx::new(p, 1).unwrap();
        let ring = PolyRing::new(&f);
        for m in 0..=m_max {
            let mut dens = ResidueDensities::from_modulus_n(ring, &modulus_n(ring, m).unwrap()).unwrap();
            let avg = dens.recip_rho_average().unwrap();
            assert!(avg <= prop33_bound_lower(&dens), "q={p} M={m}");
        }
    }
    let f = FieldCtx::new(2, 1).unwrap();
    let ring = PolyRing::new(&f);
    for m in [2, 3] {
        let mut dens = ResidueDensities::from_modulus_n(ring, &modulus_n(ring, m).unwrap()).unwrap();
        assert_eq!(dens.recip_rho_average().unwrap_err(), Error::ZeroDensityClass);
    }
}
