use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed header at line {line}: {reason}")]
    MalformedHeader { line: usize, reason: String },
    #[error("label line has {found} characters, expected {expected}")]
    LabelLengthMismatch { expected: usize, found: usize },
    #[error("invalid label byte 0x{byte:02x} at position {position}")]
    InvalidLabel { position: usize, byte: u8 },
    #[error("malformed edge at line {line}: {reason}")]
    MalformedEdge { line: usize, reason: String },
    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("edge ({0}, {1}) is not present")]
    EdgeNotPresent(usize, usize),
    #[error("CycleDetected: graph is not a DAG")]
    CycleDetected,

    #[error("pattern is empty")]
    EmptyPattern,
    #[error("pattern byte 0x{0:02x} is not printable ASCII")]
    InvalidPatternByte(u8),
    #[error("pattern length {m} exceeds the PS table cap {cap}")]
    PatternTooLong { m: usize, cap: usize },

    #[error("path count overflow: exact arithmetic exceeds 2^63-1, use capped mode")]
    Overflow,
    #[error("graph is not in class {class} for k = {k}")]
    NotInClass { class: &'static str, k: u64 },
    #[error("class violation at vertex {vertex}: |PI| = {size} exceeds certified bound {bound}")]
    ClassViolation { vertex: usize, size: usize, bound: u64 },

    #[error("no solution with at most {0} deletions")]
    Exceeded(usize),
    #[error("instance too large for brute force: {0}")]
    TooLarge(String),

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
