use std::collections::HashMap;

use super::{FieldCtx, FqElem};
use crate::{Error, Result};

/// A fixed embedding `F_{q0} -> F_q` sending the small field's defining
/// root to the least root of its modulus in the big field.
#[derive(Debug, Clone)]
pub struct Embedding<'a> {
    small: &'a FieldCtx,
    big: &'a FieldCtx,
    image: Vec<FqElem>,
    preimage: HashMap<u32, u32>,
}

impl<'a> Embedding<'a> {
    pub fn new(small: &'a FieldCtx, big: &'a FieldCtx) -> Result<Self> {
        if small.p() != big.p() || !big.e().is_multiple_of(small.e()) {
            return Err(Error::NotASubfield { small: small.q() as u64, big: big.q() as u64 });
        }
        // The prime field sits inside every field as the indices below p.
        let identity = small.e() == 1 || (small.e() == big.e() && small.modulus() == big.modulus());
        let beta = if identity {
            FqElem(small.p().min(small.q() - 1).max(1))
        } else {
            // Roots of the small modulus lie in the subfield g^{k (Q-1)/(q0-1)}.
            let step = ((big.q() - 1) / (small.q() - 1)) as u64;
            let mut found = None;
            let mut cands: Vec<FqElem> = (0..(small.q() - 1) as u64).map(|k| big.exp(k * step)).collect();
            cands.sort();
            for b in cands {
                let mut acc = FqElem::ZERO;
                for &c in small.modulus().iter().rev() {
                    acc = big.add(big.mul(acc, b), FqElem(c));
                }
                if acc.is_zero() {
                    found = Some(b);
                    break;
                }
            }
            found.expect("subfield contains the roots of its modulus")
        };
        let mut image = Vec::with_capacity(small.q() as usize);
        let mut preimage = HashMap::with_capacity(small.q() as usize);
        for x in small.elements() {
            let y = if identity {
                x
            } else {
                let mut acc = FqElem::ZERO;
                for &c in small.coords(x).iter().rev() {
                    acc = big.add(big.mul(acc, beta), FqElem(c));
                }
                acc
            };
            image.push(y);
            preimage.insert(y.0, x.0);
        }
        Ok(Embedding { small, big, image, preimage })
    }

    pub fn small(&self) -> &'a FieldCtx {
        self.small
    }

    pub fn big(&self) -> &'a FieldCtx {
        self.big
    }

    pub fn lift(&self, x: FqElem) -> FqElem {
        self.image[x.0 as usize]
    }

    /// Inverse of `lift`, if `y` lies in the image.
    pub fn restrict(&self, y: FqElem) -> Option<FqElem> {
        self.preimage.get(&y.0).map(|&x| FqElem(x))
    }

    /// Relative norm `N(y) = y^{(Q-1)/(q0-1)}`, pulled back to the small field.
    pub fn norm(&self, y: FqElem) -> FqElem {
        if y.is_zero() {
            return FqElem::ZERO;
        }
        let k = ((self.big.q() - 1) / (self.small.q() - 1)) as u64;
        let n = self.big.pow(y, k);
        self.restrict(n).expect("norm lands in the subfield")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedding_is_a_ring_map() {
        for (p, e0, e) in [(2, 1, 2), (2, 2, 4), (2, 2, 6), (2, 3, 6), (5, 1, 2), (7, 1, 3), (13, 1, 2)] {
            let small = FieldCtx::new(p, e0).unwrap();
            let big = FieldCtx::new(p, e).unwrap();
            let emb = Embedding::new(&small, &big).unwrap();
            for x in small.elements() {
                for y in small.elements() {
                    assert_eq!(emb.lift(small.add(x, y)), big.add(emb.lift(x), emb.lift(y)));
                    assert_eq!(emb.lift(small.mul(x, y)), big.mul(emb.lift(x), emb.lift(y)));
                }
            }
            // Norm is multiplicative and surjective onto units.
            let mut hit = vec![false; small.q() as usize];
            for y in big.units() {
                hit[emb.norm(y).0 as usize] = true;
            }
            assert!(hit[1..].iter().all(|&h| h));
        }
    }

    #[test]
    fn rejects_non_subfield() {
        let a = FieldCtx::new(2, 2).unwrap();
        let b = FieldCtx::new(2, 3).unwrap();
        assert!(matches!(Embedding::new(&a, &b), Err(Error::NotASubfield { .. })));
    }
}
