// SPDX-License-Identifier: Apache-2.0

//! Network representation, cover algebra and the exhaustive oracle.

mod network;
mod sop;
mod truth;

pub use network::{node, Network, Node, Output, Signal};
pub use sop::{mask_for, minimal_cover, Cube, Literal, Sop, VAR_MASKS};
pub use truth::{
    input_word, is_equivalent, truth_table, truth_tables, Counterexample, TruthTable, Verdict, MAX_TABLE_VARS,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoolError {
    #[error("variable {0} does not occur in the function")]
    VariableAbsent(u32),
    #[error("function has {found} variables; at most {limit} supported")]
    TooManyVariables { found: usize, limit: usize },
    #[error("network has {found} inputs; exhaustive simulation supports {limit}")]
    InputCountExceeded { found: usize, limit: usize },
    #[error("interface mismatch: {0}")]
    InterfaceMismatch(String),
    #[error("invalid network: {0}")]
    Invalid(String),
}

/// Literal count of a cover: distinct (variable, polarity) pairs.
pub fn literal_count(f: &Sop) -> usize {
    f.literal_count()
}
