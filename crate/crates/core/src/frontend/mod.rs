// SPDX-License-Identifier: Apache-2.0

//! Readers and writers: EQN and BLIF input, mapped-netlist output.

mod blif;
mod emit;
mod eqn;
mod netlist;

pub use blif::{emit_blif, parse_blif, parse_blif_model, BlifModel, Cover};
pub use emit::emit_expression;
pub use eqn::{emit_eqn, parse_eqn, parse_eqn_source, EqnSource, Expr, Pos};
pub use netlist::{emit_netlist, load_netlist, NetlistFormat};

use std::path::Path;

use thiserror::Error;

use crate::boolcore::{BoolError, Network};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrontendError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: `{name}` is used before it is defined")]
    Undefined { name: String, line: usize, col: usize },
    #[error("{line}:{col}: `{name}` is defined twice")]
    Redefinition { name: String, line: usize, col: usize },
    #[error("expression expands to more than {0} cubes")]
    TooLarge(usize),
    #[error("line {line}: {msg}")]
    Blif { line: usize, msg: String },
    #[error("line {line}: unsupported directive `{directive}` (only combinational covers are accepted)")]
    UnsupportedDirective { directive: String, line: usize },
    #[error("line {line}: OFF-set cover rows are not supported")]
    OffSetCover { line: usize },
    #[error("line {line}: signal `{name}` is never driven")]
    UndefinedSignal { name: String, line: usize },
    #[error("netlist line {line}: {msg}")]
    Netlist { line: usize, msg: String },
    #[error("unrecognised input format for `{0}` (expected .eqn or .blif)")]
    UnknownFormat(String),
    #[error(transparent)]
    Network(#[from] BoolError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Eqn,
    Blif,
}

impl Format {
    pub fn from_path(path: &Path) -> Option<Format> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "eqn" => Some(Format::Eqn),
            "blif" => Some(Format::Blif),
            _ => None,
        }
    }

    pub fn parse(self, text: &str) -> Result<Network, FrontendError> {
        match self {
            Format::Eqn => parse_eqn(text),
            Format::Blif => parse_blif(text),
        }
    }
}
