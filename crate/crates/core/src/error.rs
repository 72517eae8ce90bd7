use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("characteristic {p} divides the curve degree {n}")]
    NotCoprime { p: u64, n: u64 },

    #[error("triple entries must be nonnegative")]
    NegativeEntry,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("this operation needs positive characteristic")]
    ZeroCharacteristic,

    /// The quotient `R/I^[p^e]` has finite projective dimension, so the
    /// reduction to `Syz(X^b, Y^b, Z^b)` does not apply.
    #[error("R/(X^{b},Y^{b},Z^{b}) has finite projective dimension (n = {n}, p = {p})")]
    FinitePdCase { p: u64, n: u64, b: String },

    #[error("the syzygy bundle is strongly semistable")]
    StronglySemistable,

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("Syz(X^{a},Y^{a},Z^{a}) is semistable on the degree-{n} Fermat curve in characteristic 0")]
    SemistableInCharZero { n: u64, a: u64 },

    #[error("oracle budget exceeded: needs degree {needed}, budget is {budget}")]
    BudgetExceeded { needed: String, budget: u64 },

    #[error("value not determined: {0}")]
    NotDetermined(String),
}
