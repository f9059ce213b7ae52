use thiserror::Error;

use crate::report::Report;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{l} is not coprime to {modulus}")]
    NotCoprime { l: i64, modulus: u64 },
    #[error("element of Q[z{order}] does not lie in Q[z{target}]")]
    NotEmbeddable { order: u32, target: u32 },
    #[error("square root of a negative rational")]
    NegativeRadicand,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("modular data axioms violated: {}", .0.failure_summary())]
    AxiomViolation(Box<Report>),
    #[error("fusion coefficient N[{0},{1}][{2}] = {3} is not a nonnegative integer")]
    NonIntegralFusion(usize, usize, usize, String),
    #[error("S entry ({row},{col}) needs Q[z{needed}], outside Q[z{conductor}]")]
    ConductorMismatch {
        row: usize,
        col: usize,
        needed: u32,
        conductor: u64,
    },
    #[error("unsupported model {0:?}")]
    UnsupportedModel(String),
    #[error("no lift of {l} mod {modulus} coprime to {order}")]
    LiftNotFound { l: i64, modulus: u64, order: u64 },
    #[error("no signed permutation relates sigma_{0}(S) to S")]
    NoMonomialStructure(i64),
    #[error("matrix expected to be diagonal: {0}")]
    NotDiagonal(String),
    #[error("c - c0 = {0} is not in 4Z")]
    PhaseConstraint(String),
    #[error("out of scope: {0}")]
    OutOfScope(String),
    #[error("multiplicity {0} is not a nonnegative integer")]
    NonIntegralMultiplicity(String),
    #[error("cyclotomic order {order} exceeds the configured cap {cap}")]
    OrderCap { order: u64, cap: u64 },
    #[error("label index {0} out of range")]
    BadLabel(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
