//! Eichler orders of level c in B_{p,oo}, binary quadratic forms of
//! discriminant -16cp and -cp, and Z[sqrt(-cp)]-oriented supersingular curves.
//!
//! The modules build on each other in roughly this order: `numth`, `qform`,
//! `quat`, `ff`, `classpoly`, `ec`, `correspond`.

pub mod classpoly;
pub mod correspond;
pub mod ec;
pub mod ff;
pub mod numth;
pub mod qform;
pub mod quat;

pub use numth::{PrimeParams, Variant};
pub use qform::BQForm;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("r^2 + cp has no lift to a root mod 4q (cp must be 3 mod 4)")]
    NoLift,
    #[error("form is not primitive")]
    NotPrimitive,
    #[error("discriminant must be negative")]
    NotNegativeDisc,
    #[error("discriminant mismatch: {0} vs {1}")]
    DiscMismatch(i64, i64),
    #[error("bad discriminant {0}")]
    BadDisc(i64),
    #[error("{0} is not coprime to the discriminant")]
    NotCoprime(i64),
    #[error("q = {0} does not satisfy the admissibility conditions")]
    BadQ(i64),
    #[error("ideal is not proper")]
    NotProper,
    #[error("prime {0} does not split")]
    NotSplit(i64),
    #[error("lattice basis is degenerate")]
    DegenerateBasis,
    #[error("lattice is not a sublattice")]
    NotSublattice,
    #[error("order carries no (q, r) label")]
    Unlabeled,
    #[error("lattice constructed from valid parameters is not an order")]
    NotAnOrder,
    #[error("context mismatch")]
    CtxMismatch,
    #[error("precision exhausted after {0} bits")]
    PrecisionExhausted(u32),
    #[error("resultant vanishes")]
    ResultantZero,
    #[error("singular curve")]
    Singular,
    #[error("p = {0} is too large for exhaustive point counting")]
    PTooLarge(i64),
    #[error("invalid n = {0}")]
    BadN(i64),
    #[error("invalid kernel")]
    InvalidKernel,
    #[error("modular polynomial for ell = {0} is not available")]
    UnsupportedEll(i64),
    #[error("modular polynomial table failed validation: {0}")]
    BadTable(String),
}
