//! Dense polynomials over `F_p` as coefficient vectors (low to high), used
//! only to set up field tables.

fn trim(v: &mut Vec<u32>) {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    if v.is_empty() {
        v.push(0);
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    crate::gf::pow_mod_u64(a as u64, p as u64 - 2, p as u64) as u32
}

fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p) as u64;
    while r.len() > dm && !(r.len() == 1 && r[0] == 0) {
        let dr = r.len() - 1;
        let c = (r[dr] as u64 * lead_inv % p as u64) as u32;
        if c != 0 {
            for (i, &mi) in m.iter().enumerate() {
                let idx = dr - dm + i;
                r[idx] = ((r[idx] as u64 + (p - c) as u64 * mi as u64) % p as u64) as u32;
            }
        }
        r.pop();
        trim(&mut r);
        if dm == 0 {
            return vec![0];
        }
    }
    r
}

pub(crate) fn mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let prod: Vec<u32> = prod.into_iter().map(|x| x as u32).collect();
    rem(&prod, m, p)
}

pub(crate) fn powmod(a: &[u32], mut k: u64, m: &[u32], p: u32) -> Vec<u32> {
    let mut base = rem(a, m, p);
    let mut acc = vec![1u32];
    while k > 0 {
        if k & 1 == 1 {
            acc = mulmod(&acc, &base, m, p);
        }
        base = mulmod(&base, &base, m, p);
        k >>= 1;
    }
    acc
}

fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !(b.len() == 1 && b[0] == 0) {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let n = f.len() - 1;
    if n <= 1 {
        return n == 1;
    }
    let x = vec![0u32, 1];
    let mut h = x.clone();
    for _ in 1..=n / 2 {
        h = powmod(&h, p as u64, f, p);
        let mut d = h.clone();
        d.resize(d.len().max(2), 0);
        d[1] = (d[1] + p - 1) % p;
        trim(&mut d);
        let g = gcd(f, &d, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Least monic irreducible of degree `e` in the order of `sum c_i p^i` over
/// its lower coefficients, scanning from an offset derived from `seed`.
pub(crate) fn least_irreducible(p: u32, e: usize, seed: u64) -> Vec<u32> {
    let total = (p as u64).pow(e as u32);
    let start = seed % total;
    for step in 0..total {
        let c = (start + step) % total;
        let mut f = Vec::with_capacity(e + 1);
        let mut x = c;
        for _ in 0..e {
            f.push((x % p as u64) as u32);
            x /= p as u64;
        }
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_irreducibles_over_f2() {
        // Necklace counts of monic irreducibles over F_2: 2, 1, 2, 3, 6.
        for (deg, want) in [(1, 2), (2, 1), (3, 2), (4, 3), (5, 6)] {
            let mut n = 0;
            for c in 0..(1u64 << deg) {
                let mut f: Vec<u32> = (0..deg).map(|i| ((c >> i) & 1) as u32).collect();
                f.push(1);
                n += is_irreducible(&f, 2) as u32;
            }
            assert_eq!(n, want, "degree {deg}");
        }
    }

    #[test]
    fn least_irreducibles() {
        assert_eq!(least_irreducible(2, 2, 0), vec![1, 1, 1]);
        assert_eq!(least_irreducible(2, 3, 0), vec![1, 1, 0, 1]);
        assert_eq!(least_irreducible(5, 2, 0), vec![2, 0, 1]);
    }
}
