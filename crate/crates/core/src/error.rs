use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HexError {
    #[error("expected {expected} hex digits, found {found}")]
    Width { expected: usize, found: usize },
    #[error("invalid hex digit {0:?}")]
    Digit(char),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpecError {
    #[error("leak round {0} outside 1..=32")]
    Round(usize),
    #[error("Hamming-weight bit {0} outside 0..=7")]
    HwBit(usize),
    #[error("cube must not be empty")]
    EmptyCube,
    #[error("cube index {0} outside 0..32")]
    CubeIndex(usize),
    #[error("cube index {0} repeated")]
    DuplicateCubeIndex(usize),
    #[error("invalid search config: {0}")]
    Config(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("inconsistent system: row {row} reduces to 0 = 1")]
    Inconsistent { row: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

#[derive(Debug, Error)]
pub enum DbError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("maxterm {index} does not use the database's uniform fixed-bit assignment")]
    NonUniformFixedBits { index: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("victim query failed after {queries_issued} queries: {reason}")]
pub struct VictimError {
    pub queries_issued: u64,
    pub reason: String,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AttackError {
    #[error("maxterm database is empty")]
    EmptyDb,
    #[error("{observed} observations for {equations} equations")]
    LengthMismatch { observed: usize, equations: usize },
    #[error("observations contradict the maxterm equations (row {row}); wrong leak spec or corrupted database")]
    Inconsistent { row: usize },
    #[error(transparent)]
    Victim(#[from] VictimError),
    #[error("no known plaintext/ciphertext pair supplied")]
    NoKnownPair,
}
