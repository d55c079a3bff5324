use thiserror::Error;

use crate::linalg::Rational;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("matrix is singular")]
    Singular,

    #[error("matrix has no nonzero eigenvalue")]
    NoNonzeroEigenvalue,

    #[error("tolerance must be positive")]
    NonPositiveTolerance,

    #[error("invalid rational literal {0:?}")]
    InvalidRational(String),

    #[error("invalid density: {0}")]
    InvalidDensity(String),

    #[error("profile needs at least one density")]
    EmptyProfile,

    #[error("player index {player} out of range for {players} players")]
    PlayerOutOfRange { player: usize, players: usize },

    #[error("interval [{lo}, {hi}] is not a subinterval of [0, 1]")]
    IntervalOutOfRange { lo: Box<Rational>, hi: Box<Rational> },

    #[error("invalid target point: {0}")]
    InvalidTarget(String),

    #[error("invalid goal matrix: {0}")]
    InvalidGoal(String),

    #[error("goal matrix is not proper: {0}")]
    ImproperK(String),

    #[error("delta {delta} too large: entry ({row}, {col}) of the stochastic factor is {value}")]
    DeltaTooLarge {
        delta: Box<Rational>,
        row: usize,
        col: usize,
        value: Box<Rational>,
    },

    #[error("delta must be nonnegative, got {0}")]
    NegativeDelta(Rational),

    #[error("delta must be positive, got {0}")]
    NonPositiveDelta(Rational),

    #[error("goal matrix is zero")]
    ZeroGoal,

    #[error("invalid weight system: {0}")]
    InvalidWeights(String),

    #[error("system is infeasible")]
    Infeasible,

    #[error("invalid partition: intervals [{a_lo}, {a_hi}] and [{b_lo}, {b_hi}] overlap")]
    Overlap {
        a_lo: Box<Rational>,
        a_hi: Box<Rational>,
        b_lo: Box<Rational>,
        b_hi: Box<Rational>,
    },

    #[error("invalid partition: gap [{lo}, {hi}] is not assigned to any player")]
    CoverageGap { lo: Box<Rational>, hi: Box<Rational> },

    #[error("not a sharing matrix: {0}")]
    NotSharingMatrix(String),

    #[error("internal error: {0}")]
    Internal(String),
}
