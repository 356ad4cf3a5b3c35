use thiserror::Error;

use crate::atoms::{Atom, StructureKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("atom {atom:?} does not belong to a {expected:?} structure")]
    StructureMismatch { atom: Atom, expected: StructureKind },

    #[error("operation requires a {expected:?} structure, got {found:?}")]
    WrongStructure {
        expected: StructureKind,
        found: StructureKind,
    },

    #[error("atom {0:?} is not materialized")]
    NotMaterialized(Atom),

    #[error("unsatisfiable type: {0}")]
    UnsatisfiableType(String),

    #[error("out of budget: {0}")]
    OutOfBudget(String),

    #[error("not a duplicate-free sequence")]
    NotASeq,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("oracle answer outside the declared codomain: {0}")]
    OracleAnswer(String),

    #[error("witness rejected: {0}")]
    WitnessRejected(String),

    #[error("engine exceeded its probe bound of {bound} without a witness")]
    ProbeBound { bound: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
