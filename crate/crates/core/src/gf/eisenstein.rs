use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

/// `a + b*omega` in `Z[omega]`, `omega = e^{2 pi i / 3}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EisensteinInt {
    pub a: BigInt,
    pub b: BigInt,
}

impl EisensteinInt {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        EisensteinInt { a: a.into(), b: b.into() }
    }

    pub fn zero() -> Self {
        Self::new(0, 0)
    }

    pub fn one() -> Self {
        Self::new(1, 0)
    }

    pub fn omega() -> Self {
        Self::new(0, 1)
    }

    /// `omega^j` for any `j`.
    pub fn omega_pow(j: u32) -> Self {
        match j % 3 {
            0 => Self::new(1, 0),
            1 => Self::new(0, 1),
            _ => Self::new(-1, -1),
        }
    }

    pub fn conj(&self) -> Self {
        EisensteinInt { a: &self.a - &self.b, b: -&self.b }
    }

    pub fn norm(&self) -> BigInt {
        &self.a * &self.a - &self.a * &self.b + &self.b * &self.b
    }

    /// `2 Re(z) = 2a - b`.
    pub fn two_re(&self) -> BigInt {
        BigInt::from(2) * &self.a - &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        EisensteinInt { a: &self.a * c, b: &self.b * c }
    }

    pub fn to_complex(&self) -> Complex64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        Complex64::new(a - 0.5 * b, b * 3f64.sqrt() * 0.5)
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }
}

impl fmt::Display for EisensteinInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}w", self.a, self.b)
    }
}

impl Add for &EisensteinInt {
    type Output = EisensteinInt;
    fn add(self, o: &EisensteinInt) -> EisensteinInt {
        EisensteinInt { a: &self.a + &o.a, b: &self.b + &o.b }
    }
}

impl Sub for &EisensteinInt {
    type Output = EisensteinInt;
    fn sub(self, o: &EisensteinInt) -> EisensteinInt {
        EisensteinInt { a: &self.a - &o.a, b: &self.b - &o.b }
    }
}

impl Mul for &EisensteinInt {
    type Output = EisensteinInt;
    fn mul(self, o: &EisensteinInt) -> EisensteinInt {
        // omega^2 = -1 - omega
        let bd = &self.b * &o.b;
        EisensteinInt { a: &self.a * &o.a - &bd, b: &self.a * &o.b + &self.b * &o.a - bd }
    }
}

impl Neg for &EisensteinInt {
    type Output = EisensteinInt;
    fn neg(self) -> EisensteinInt {
        EisensteinInt { a: -&self.a, b: -&self.b }
    }
}

impl Add for EisensteinInt {
    type Output = EisensteinInt;
    fn add(self, o: EisensteinInt) -> EisensteinInt {
        &self + &o
    }
}

impl Sub for EisensteinInt {
    type Output = EisensteinInt;
    fn sub(self, o: EisensteinInt) -> EisensteinInt {
        &self - &o
    }
}

impl Mul for EisensteinInt {
    type Output = EisensteinInt;
    fn mul(self, o: EisensteinInt) -> EisensteinInt {
        &self * &o
    }
}

impl Neg for EisensteinInt {
    type Output = EisensteinInt;
    fn neg(self) -> EisensteinInt {
        -&self
    }
}
