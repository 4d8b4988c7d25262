use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("quadratic parameter must be a squarefree integer other than 0 and 1, got {0}")]
    NotSquarefree(i64),
    #[error("quadratic parameter {0} is outside the supported magnitude (|d| <= 10^9)")]
    QuadraticOutOfRange(i64),
    #[error("modulus {0} is not prime")]
    CompositeModulus(u64),
    #[error("cannot parse {text:?} over {field}: {reason}")]
    ScalarParse {
        text: String,
        field: String,
        reason: String,
    },
    #[error("scalar does not belong to the expected field")]
    FieldMismatch,
    #[error("zero is not invertible")]
    DivisionByZero,
    #[error("matrix wants {rows}x{cols} = {want} entries, got {got}")]
    MatrixShape {
        rows: usize,
        cols: usize,
        want: usize,
        got: usize,
    },
    #[error("all coefficients are zero")]
    ZeroTriple,
    #[error("the lines are projectively identical")]
    IdenticalLines,
    #[error("duplicate line at index {0}")]
    DuplicateLine(usize),
    #[error("line is not a member of the arrangement")]
    LineNotInArrangement,
    #[error("line is already a member of the arrangement")]
    LineAlreadyPresent,
    #[error("line index {index} is out of range for {size} lines")]
    LineIndexOutOfRange { index: usize, size: usize },
    #[error("point is not in the intersection lattice")]
    PointNotInLattice,
    #[error("operation needs at least {needed} lines, arrangement has {got}")]
    TooFewLines { needed: usize, got: usize },
    #[error("arrangement is not essential")]
    NotEssential,
    #[error("operation requires characteristic zero")]
    PositiveCharacteristic,
    #[error(
        "no nonzero derivation found up to degree {cap}; \
         set ARRANGELAB_MAX_DEGREE to extend the scan"
    )]
    MdrScanExceeded { cap: usize },
    #[error("multiarrangement must contain at least one point")]
    EmptyMultiArrangement,
    #[error("multiplicities must be positive")]
    ZeroMultiplicity,
    #[error("duplicate point in multiarrangement")]
    DuplicateMultiPoint,
    #[error("family parameter out of range: {0}")]
    FamilyParameter(String),
    #[error("failed to build a valid random arrangement after {0} attempts")]
    ResamplingExhausted(usize),
    #[error("derivation does not match the arrangement: {0}")]
    DerivationMismatch(String),
    #[error("unknown theorem id {0:?}")]
    UnknownTheorem(String),
    #[error("arrangement file: {0}")]
    FileFormat(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}
