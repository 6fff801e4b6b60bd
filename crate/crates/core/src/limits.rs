//! Process-wide size caps, expressed in bits.

use std::sync::atomic::{AtomicU32, Ordering};

use crate::{Error, Result};

pub const DEFAULT_CAP_BITS: u32 = 26;

static CAP_BITS: AtomicU32 = AtomicU32::new(DEFAULT_CAP_BITS);

pub fn cap_bits() -> u32 {
    CAP_BITS.load(Ordering::Relaxed)
}

pub fn set_cap_bits(bits: u32) {
    CAP_BITS.store(bits.clamp(4, 40), Ordering::Relaxed);
}

/// log2 of `base^exp`, rounded up.
pub fn log2_ceil_pow(base: u64, exp: u64) -> u32 {
    let b = (base as f64).log2() * exp as f64;
    (b - 1e-9).ceil().max(0.0) as u32
}

/// Fails with `TooLarge` when `base^exp` exceeds `2^cap`.
pub fn check(what: &'static str, base: u64, exp: u64, cap: u32) -> Result<()> {
    let bits = log2_ceil_pow(base, exp);
    if bits > cap {
        return Err(Error::TooLarge { what, bits, cap });
    }
    Ok(())
}

pub fn check_default(what: &'static str, base: u64, exp: u64) -> Result<()> {
    check(what, base, exp, cap_bits())
}
