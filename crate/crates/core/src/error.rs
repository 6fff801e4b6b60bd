use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic 3 is not supported")]
    CharIsThree,
    #[error("{what}: size 2^{bits} exceeds cap 2^{cap}")]
    TooLarge { what: &'static str, bits: u32, cap: u32 },
    #[error("no nontrivial cubic character: q = {0} is not 1 mod 3")]
    NoCubicCharacter(u64),
    #[error("F_{small} is not a subfield of F_{big}")]
    NotASubfield { small: u64, big: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("moduli are not coprime")]
    NotCoprime,
    #[error("zero modulus")]
    ZeroModulus,
    #[error("no passing d found up to {d_max}")]
    NotFoundWithin { d_max: u32 },
    #[error("factorization cap exceeded for degree {0}")]
    FactorizationCapExceeded(usize),
    #[error("histogram size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("window precision {have} is coarser than required {need}")]
    InsufficientPrecision { have: i64, need: i64 },
    #[error("rho(N, k) = 0 for some residue k")]
    ZeroDensityClass,
    #[error("modulus degree {deg_n} violates hypothesis deg N < {bound}")]
    ModulusTooLarge { deg_n: usize, bound: i64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;
