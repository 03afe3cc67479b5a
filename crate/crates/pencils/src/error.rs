//! Error and refusal types shared across the crate.

use thiserror::Error;

/// Machine-readable reason for refusing a synthesis or placement request.
///
/// A refusal means the request is provably infeasible under the decision
/// predicates, as opposed to a search backend giving up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Refusal {
    /// The interlacing conditions fail at the requested rank.
    InterlacingFails {
        rank: usize,
        index: usize,
        side: crate::reach::Side,
    },
    /// Requested rank exceeds the pencil size.
    RankTooLarge { rank: usize, n: usize },
    /// 1x1 over GF(2) with rank 1 and equal pencils: no perturbation exists.
    ScalarException,
    /// Neither a joint non-eigenvalue nor a shared-multiplicity point exists;
    /// the decision predicates do not settle feasibility.
    NoApplicabilityPath,
    /// Determinant placement: the invariant-factor product does not divide
    /// the target.
    PlacementDivisibility,
    /// Determinant placement: the infinite-multiplicity degree bound fails.
    PlacementDegree { needed: usize, available: usize },
}

impl std::fmt::Display for Refusal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Refusal::InterlacingFails { rank, index, side } => write!(
                f,
                "interlacing fails at rank {rank}: violation at index {index} ({side:?})"
            ),
            Refusal::RankTooLarge { rank, n } => {
                write!(f, "requested rank {rank} exceeds pencil size {n}")
            }
            Refusal::ScalarException => write!(
                f,
                "1x1 pencil over GF(2) with rank 1: equal pencils cannot be perturbed"
            ),
            Refusal::NoApplicabilityPath => write!(
                f,
                "no joint non-eigenvalue and no shared-multiplicity point; feasibility undecided by predicates"
            ),
            Refusal::PlacementDivisibility => write!(
                f,
                "product of the first n-r invariant factors does not divide the target"
            ),
            Refusal::PlacementDegree { needed, available } => write!(
                f,
                "infinite-multiplicity bound fails: need {needed} <= {available}"
            ),
        }
    }
}

#[derive(Error, Debug)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("gcd of two zero polynomials is undefined")]
    GcdOfZeros,
    #[error("degree {deg} exceeds homogenization degree {total}")]
    DegreeTooLarge { deg: usize, total: usize },
    #[error("pencil is not regular: {0}")]
    NotRegular(String),
    #[error("matrix block is singular")]
    SingularBlock,
    #[error("pencil does not have an invertible leading coefficient")]
    NotMonicLeading,
    #[error("invalid Weierstrass structure: {0}")]
    InvalidStructure(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("refused: {0}")]
    Refused(Refusal),
    #[error("search backend exhausted without a certificate (not a proof of infeasibility)")]
    BackendExhausted,
    #[error("exhaustive search contradicts a theorem guarantee: {0}")]
    TheoremContradiction(String),
    #[error("internal verification failed: {0}")]
    InternalCheck(String),
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
