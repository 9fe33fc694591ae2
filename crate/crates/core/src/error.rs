use thiserror::Error;

use crate::exactgeom::{RationalVector, Q};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("cone is not full-dimensional")]
    NotFullDimensional,
    #[error("cone is not pointed")]
    NotPointed,
    #[error("degenerate cone: {0}")]
    DegenerateCone(String),
    #[error("slice is unbounded: covector is not strictly positive on ray {0}")]
    UnboundedSlice(RationalVector),
    #[error("polytope is unbounded")]
    Unbounded,
    #[error("polytope has zero volume")]
    ZeroVolume,
    #[error("linear program is infeasible (Farkas certificate {farkas})")]
    Infeasible { farkas: RationalVector },
    #[error("linear program is unbounded along {ray}")]
    UnboundedLp { ray: RationalVector },
    #[error("enumeration budget exceeded: more than {cap} lattice points")]
    BudgetExceeded { cap: usize },
    #[error("pair is not Q-Gorenstein: log discrepancy system is inconsistent")]
    NotQGorenstein,
    #[error("pair is not klt: {0}")]
    NotKlt(String),
    #[error("{0} is not in the open Reeb cone")]
    NotReeb(RationalVector),
    #[error("filtration is not m-primary: transform vanishes on weight ray {0}")]
    NotPrimary(RationalVector),
    #[error("scale must be positive, got {0}")]
    NonpositiveScale(Q),
    #[error("empty input")]
    EmptyInput,
    #[error("filtrations live on different singularities")]
    AmbientMismatch,
    #[error("lattice point {0} lies outside the weight cone")]
    OutsideWeightCone(RationalVector),
    #[error("tolerance not reached: bracket [{lower}, {upper}]")]
    ToleranceNotReached { lower: Q, upper: Q },
    #[error("Futaki invariant does not vanish on N (offset {0})")]
    FutakiNonvanishing(RationalVector),
    #[error("denominator vanishes or changes sign on the feasible set")]
    DenominatorVanishes,
    #[error("weight semigroup does not generate the lattice")]
    LatticeNotGenerated,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
