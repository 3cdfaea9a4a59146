// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T, E = EdfError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum EdfError {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("element {element} does not belong to group {group}")]
    GroupMismatch { element: String, group: String },

    #[error("factors {factors:?} are not pairwise coprime")]
    NotCoprime { factors: Vec<u64> },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{value} is not prime{}", if *.prime_power { " (prime powers are not supported, prime fields only)" } else { "" })]
    NotPrime { value: u64, prime_power: bool },

    #[error("no cyclotomic classes of index {e} over F_{p}: {e} does not divide {p}-1 (or class index out of range)")]
    InvalidCyclotomy { p: u64, e: u64 },

    #[error("block {first} and block {second} both contain {element}")]
    NotDisjoint {
        first: usize,
        second: usize,
        element: String,
    },

    #[error("block {block} contains {element} more than once")]
    DuplicateElement { block: usize, element: String },

    #[error("block {0} is empty")]
    EmptyBlock(usize),

    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error("the offset must be a nonzero group element")]
    InvalidDelta,

    #[error("precondition unmet: {0}")]
    PreconditionUnmet(String),

    #[error(
        "partition enumeration for a = {a} exceeds the cap of {cap}; raise the cap explicitly"
    )]
    PartitionCapExceeded { a: u64, cap: u64 },

    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("schema violation at `{field}`: {message}")]
    Schema { field: String, message: String },

    #[error("catalog entry `{name}` is corrupt: {reason}")]
    CatalogCorrupt { name: String, reason: String },

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
