//! Arbitrary-precision reals, integer-relation detection, the Jacobi
//! eigensolver and exact arithmetic in Q(√φ).

mod bigreal;
mod field;
mod jacobi;
mod pslq;
mod quadc5;

pub use bigreal::{bits_for_digits, BigReal};
pub use field::GoldenQuartic;
pub use jacobi::{jacobi_eigen, SymEigen};
pub use pslq::{pslq, pslq_candidates, pslq_find, residual_test, Candidate, IntPolynomial, PslqSettings, Relation};
pub use quadc5::{verify_quadc5_construction, QuadC5Check, QuadC5Report};

/// Default BigReal precision in decimal digits.
pub const DEFAULT_DIGITS: u32 = 50;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AlgebraError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric at ({i}, {j}): difference {diff:e}")]
    Asymmetric { i: usize, j: usize, diff: f64 },
    #[error("cannot parse {0:?} as a real number")]
    Parse(String),
    #[error("square root of a negative number")]
    NegativeSqrt,
    #[error("division by zero in Q(ω)")]
    FieldDivisionByZero,
    #[error("the zero polynomial has no normal form")]
    ZeroPolynomial,
    #[error("PSLQ needs at least two numbers")]
    PslqTooShort,
    #[error("relation undetectable at {digits} digits")]
    Undetectable { digits: u32 },
    #[error("PSLQ did not terminate within {steps} steps")]
    PslqNoConvergence { steps: usize },
    #[error("polynomial degree {0} outside 1..=4")]
    DegreeRange(usize),
    #[error("derivative vanishes at the evaluation point; residual undefined")]
    VanishingDerivative,
    #[error("{digits} digits requested, at least {min} required")]
    PrecisionTooLow { digits: u32, min: u32 },
}
