//! Exact arithmetic and experiments for spins of prime ideals in explicitly
//! presented Galois number fields: residue symbols and reciprocity, prime
//! splitting, principal-ideal generators, binary quadratic form class groups,
//! and the sieve-sum experiment kernels driven by the spinlab CLI.

pub mod algebra;
pub mod classgroup;
pub mod error;
pub mod generators;
pub mod intmath;
pub mod linalg;
pub mod lll;
pub mod numeric;
pub mod poly;
pub mod presets;
pub mod primes;
pub mod sieve;
pub mod spin;
pub mod symbols;

pub use algebra::{
    BigFConstant, Field, FieldElement, FieldSpec, IdealLattice, Modulus8Class, ValidationReport,
};
pub use error::{Error, Result};
