use thiserror::Error;

/// Everything that can go wrong inside the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cut violation: left option {left} is not below right option {right}")]
    CutViolation { left: String, right: String },

    #[error("division by zero")]
    ZeroDivision,

    #[error("{0} is undefined at zero")]
    ZeroInput(&'static str),

    #[error("exp/log of a nonzero constant is transcendental: {0}")]
    TranscendentalConstant(String),

    #[error("unsupported ordinal: {0}")]
    UnsupportedOrdinal(String),

    #[error("outside the supported fragment: {0}")]
    OutsideFragment(String),

    #[error("expected an infinitesimal argument, got {0}")]
    NotInfinitesimal(String),

    #[error("expected an argument asymptotic to 1, got {0}")]
    NotUnit(String),

    #[error("expected a positive argument, got {0}")]
    NonPositive(String),

    #[error("{0}-th root of the coefficient {1} is irrational")]
    IrrationalRoot(u32, String),

    #[error("even root of a negative number")]
    NegativeEvenRoot,

    #[error("malformed stream: {0}")]
    MalformedStream(String),

    #[error("budget of {0} exhausted before the answer was determined")]
    BudgetExhausted(usize),

    #[error("no asymptotic integral found for {0}")]
    NoAsymptoticIntegral(String),

    #[error("refinement round {round} did not increase the valuation of the residual")]
    NoProgress { round: usize },

    #[error("level {0} is out of the supported range")]
    LevelOutOfRange(i64),

    #[error("{0} is not a dyadic rational")]
    NotDyadic(String),

    #[error("sign sequences only exist for dyadic values")]
    SignFormatOnSeries,

    #[error("undecided: {0}")]
    Undecided(String),

    #[error("bound exceeded: {0}")]
    BoundExceeded(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
