use thiserror::Error;

/// Errors raised by the laboratory. Every operation fails loudly rather than
/// silently clamping its inputs.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("generator row list is empty")]
    EmptyRows,
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("word length {0} exceeds the supported maximum of 128 bits")]
    WordTooLong(usize),
    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("duplicate index {0}")]
    DuplicateIndex(usize),
    #[error("duplicate word {0}")]
    DuplicateWord(String),
    #[error("{what} needs 2^{log2_size} elements, over the enumeration budget 2^{budget_log2}")]
    BudgetExceeded {
        what: &'static str,
        log2_size: u32,
        budget_log2: u32,
    },
    #[error("set is empty")]
    EmptySet,
    #[error("conditioning event has probability zero")]
    ZeroProbability,
    #[error("target and conditioning index sets overlap")]
    OverlappingSets,
    #[error("weights must be positive and sum to exactly 1 (sum is {0})")]
    BadWeights(String),
    #[error("reader root is the terminal mark")]
    RootIsStop,
    #[error("bit sequence {0} is not a terminal sequence of the reader")]
    NotTerminal(String),
    #[error("a branch below the graft point has fewer than {needed} unread indices")]
    InsufficientUnread { needed: usize },
    #[error("reader is not complete: some branch reads {found} bits instead of {expected}")]
    IncompleteReader { expected: usize, found: usize },
    #[error("index {0} is read twice along one path")]
    RepeatedIndex(usize),
    #[error("grafted reader reads more than {0} bits below the graft point")]
    ReaderTooDeep(usize),
    #[error("operation needs a {expected} tester")]
    WrongTesterKind { expected: &'static str },
    #[error("adaptive discerning mass needs a conditioning value")]
    MissingConditioningValue,
    #[error("invalid tester: {0}")]
    InvalidTester(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
