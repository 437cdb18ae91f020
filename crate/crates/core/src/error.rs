use thiserror::Error;

/// Errors raised by the toolkit.
///
/// Variants fall into three families that the CLI maps to distinct exit
/// codes: arithmetic that could not be certified ([`Error::Undecided`]),
/// contract violations (bad inputs, broken invariants, infeasible schedules)
/// and plain I/O or parse failures.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("the empty word never occurs as a subblock")]
    EmptyWord,
    #[error("alphabet is empty")]
    EmptyAlphabet,
    #[error("count must be positive")]
    ZeroCount,
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("undecided at index {index}: {detail}")]
    Undecided { index: usize, detail: String },
    #[error("point outside the domain: {0}")]
    OutOfDomain(String),
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("digit {digit} is not in the digit set")]
    DigitOutOfRange { digit: u64 },
    #[error("word is not admissible: {0}")]
    NotAdmissible(String),
    #[error("word does not label a closed path at vertex 0")]
    NotClosed,
    #[error("automaton depth {depth} is too small for a word of length {len}")]
    DepthTooSmall { depth: usize, len: usize },
    #[error("weights are not a probability vector: {0}")]
    InvalidWeights(String),
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),
    #[error("cylinder outside the supported range: {0}")]
    UnsupportedBlock(String),
    #[error("no good block after {attempts} attempts (m={m}, eps={eps}, len={len})")]
    RetryBudgetExhausted {
        attempts: usize,
        m: usize,
        eps: String,
        len: usize,
    },
    #[error("schedule infeasible: {0}")]
    ScheduleInfeasible(String),
    #[error("schedule condition violated: {0}")]
    ScheduleViolation(String),
    #[error("gluer failure: {0}")]
    GluerFailure(String),
    #[error("safe-symbol reduction: {0}")]
    SafeSymbol(String),
    #[error("trace is incomplete: {0}")]
    TruncatedTrace(String),
    #[error("stream exhausted after {available} symbols ({requested} requested)")]
    StreamExhausted { available: usize, requested: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn undecided(index: usize, detail: impl Into<String>) -> Self {
        Error::Undecided {
            index,
            detail: detail.into(),
        }
    }

    /// True for failures caused by uncertifiable arithmetic rather than bad input.
    pub fn is_undecided(&self) -> bool {
        matches!(self, Error::Undecided { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
