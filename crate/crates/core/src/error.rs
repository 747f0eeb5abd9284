use thiserror::Error;

/// Errors raised by algebra construction and the analysis operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("antisymmetry violated at basis pair ({i}, {j})")]
    Antisymmetry { i: usize, j: usize },

    #[error("not a Lie algebra: Jacobi identity fails for basis triple ({i}, {j}, {k})")]
    Jacobi { i: usize, j: usize, k: usize },

    #[error("cartan basis is not abelian")]
    CartanNotAbelian,

    #[error("cartan basis is not self-centralizing")]
    CartanNotSelfCentralizing,

    #[error("algebra not split over the rationals in this basis")]
    NotSplit,

    #[error("no strongly regular element within the search bound")]
    StronglyRegularSearchExhausted,

    #[error("map is not a derivation (failing pair {0:?})")]
    NotDerivation(Option<(usize, usize)>),

    #[error("map is not nilpotent")]
    NotNilpotent,

    #[error("map is not an automorphism (failing pair {0:?})")]
    NotAutomorphism(Option<(usize, usize)>),

    #[error("algebra is not semisimple")]
    NotSemisimple,

    #[error("hypothesis (i) fails: complement of [L,L] has dimension {0} < 2")]
    HypothesisDimension(usize),

    #[error("hypothesis (ii) fails: Z(L) ∩ [L,L] is zero")]
    HypothesisCenter,

    #[error("witness system inconsistent")]
    WitnessInconsistent,

    #[error("no non-additivity witness found in the scan")]
    NoNonadditivityWitness,

    #[error("unsupported map rule: {0}")]
    UnsupportedRule(String),

    #[error("zero torus parameter at simple root {0}")]
    ZeroTorusParameter(usize),

    #[error("singular matrix")]
    Singular,
}

pub type Result<T, E = LieError> = std::result::Result<T, E>;
