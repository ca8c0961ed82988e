use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("modulus {0} exceeds the supported bound 2^62")]
    ModulusTooLarge(u64),
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("{0} is undefined for the zero polynomial")]
    ZeroPolynomial(&'static str),
    #[error("polynomial of degree {0} has even degree; reduce it with odd_degree_model first")]
    EvenDegree(usize),
    #[error("polynomial of degree {0} does not define a curve of positive genus")]
    DegreeTooSmall(usize),
    #[error("{root} is not a root of the defining polynomial")]
    NotARoot { root: u64 },
    #[error("defining polynomial has a repeated root")]
    NotSquarefree,
    #[error("prime {0} is not supported here; p > 5 is required")]
    PrimeTooSmall(u64),
    #[error("prime {0} is inert in Q(sqrt 5); a split prime is required")]
    InertPrime(u64),
    #[error("matrix dimensions do not match")]
    DimensionMismatch,
}
