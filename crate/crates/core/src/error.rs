use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("characteristic 2 is not supported")]
    CharacteristicTwo,
    #[error("modulus {0} exceeds the supported range (p < 2^32)")]
    ModulusTooLarge(u64),
    #[error("square class of zero undefined")]
    ZeroSquareClass,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("modulus of degree {0} is not a monic irreducible polynomial")]
    ReducibleModulus(usize),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {0}^{1} does not fit the exponent range")]
    FieldTooLarge(u64, u32),
    #[error("linear form with all coefficients zero")]
    ZeroLinearForm,
    #[error("zero form")]
    ZeroForm,
    #[error("identical lines")]
    IdenticalLines,
    #[error("rational function on the plane must have degree 0, got {0}")]
    NonzeroDegree(i64),
    #[error("symbol entries must be nonzero")]
    ZeroEntry,
    #[error("symbol length {0} outside 1..=3")]
    SymbolLength(usize),
    #[error("tier mismatch: {0}")]
    TierMismatch(&'static str),
    #[error("coefficient {name} = {value} lies in {{0, -1}} mod {p}")]
    CoefficientConstraint { name: String, value: i64, p: u64 },
    #[error("a = {a} is zero mod {p}")]
    ZeroParameter { a: i64, p: u64 },
    #[error("a = {a} is a square mod {p}")]
    SquareParameter { a: i64, p: u64 },
    #[error("no primes in range [{0}, {1}]")]
    EmptyPrimeRange(u64, u64),
    #[error("malformed coefficient triple: {0}")]
    MalformedTriple(String),
    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
