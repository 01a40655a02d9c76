//! Crate-wide error type. Variants mirror the failure modes of the individual
//! subsystems so callers can match on them directly.

use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("structural failure: {0}")]
    StructuralFailure(String),
    #[error("unit condition failed: nontrivial totally positive unit class {0}")]
    UnitConditionFailed(String),
    #[error("numeric precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("class representative norm product {0} is not squarefree")]
    FNotSquarefree(BigInt),
    #[error("prime {0} ramifies in the field")]
    RamifiedPrime(u64),
    #[error("prime 2 is not admissible here")]
    EvenPrime,
    #[error("no generator found within the enumeration budget (norm {0})")]
    GeneratorNotFound(BigInt),
    #[error("no unit multiple is totally positive; the unit condition data is inconsistent")]
    NotAchievable,
    #[error("enumeration ceiling exceeded: {0}")]
    CeilingExceeded(String),
    #[error("modulus {0} is even or non-positive")]
    EvenModulus(BigInt),
    #[error("argument has even norm {0}")]
    EvenArgument(BigInt),
    #[error("factoring budget exceeded: {0}")]
    FactoringBudgetExceeded(String),
    #[error("reciprocity cell {0} saw inconsistent values")]
    InconsistentCell(String),
    #[error("reciprocity cell {0} is not populated")]
    UnpopulatedCell(String),
    #[error("zero residue symbol encountered; arguments share a prime")]
    ZeroSymbolEncountered,
    #[error("quadratic form discriminants differ: {0} vs {1}")]
    DiscriminantMismatch(BigInt, BigInt),
    #[error("discriminant {0} is not fundamental")]
    NotFundamental(BigInt),
    #[error("prime {0} is not in the residue class required here")]
    WrongResidueClass(u64),
    #[error("found only {found} witness pairs, needed {needed}")]
    InsufficientWitnesses { found: usize, needed: usize },
    #[error("bad character modulus: {0}")]
    BadModulus(String),
    #[error("invalid spin configuration: {0}")]
    InvalidSpinConfig(String),
    #[error("psi table has no entry for residue {0}")]
    PsiUnpopulated(String),
    #[error("spec file error: {0}")]
    SpecFile(String),
}
