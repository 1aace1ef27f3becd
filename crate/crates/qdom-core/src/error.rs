use alloc::string::String;

/// Domain errors raised by the encoding, parsing and search operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("board side length must be at least 1")]
    EmptyBoard,
    #[error("square {square} is outside 1..={max}")]
    SquareOutOfRange { square: usize, max: usize },
    #[error("square set must be sorted ascending without duplicates")]
    UnsortedSquares,
    #[error("clause must contain at least one literal")]
    EmptyClause,
    #[error("variable {0} occurs more than once in the cardinality input")]
    DuplicateVariable(u32),
    #[error("lex constraint vectors differ in length ({x} vs {y})")]
    LengthMismatch { x: usize, y: usize },
    #[error("lex constraint vectors must be non-empty")]
    EmptyLexVector,
    #[error("cardinality input must be non-empty")]
    EmptyCardinalityInput,
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u32),
    #[error("cube set must contain at least one cube")]
    EmptyCubeSet,
    #[error("cube {0} appears more than once")]
    DuplicateCube(usize),
    #[error("cube literal refers to variable {var} but the formula has {num_vars}")]
    CubeVariableOutOfRange { var: u32, num_vars: u32 },
    #[error("split depth {depth} is invalid (must be 1..={max})")]
    InvalidDepth { depth: usize, max: usize },
    #[error("oracle supports boards up to 8x8, got {0}x{0}")]
    OracleBoardTooLarge(usize),
    #[error("no dominating set with at most {max_k} queens")]
    NoDominatingSet { max_k: usize },
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}
