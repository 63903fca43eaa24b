// SPDX-License-Identifier: Apache-2.0

//! Logic simplification and technology mapping for crosstalk-computing
//! gate libraries.
//!
//! The flow ingests a multi-level Boolean network (EQN or BLIF), sweeps and
//! decomposes it into nodes of at most three fanins, maps every node onto
//! crosstalk gates (homogeneous AND/OR/NAND/NOR/majority cells and
//! heterogeneous AND-OR cells) and reports transistor and gate counts.
//! Every stage can be checked against the input with an exhaustive
//! equivalence oracle.

pub mod boolcore;
pub mod costing;
pub mod decompose;
pub mod flow;
pub mod frontend;
pub mod random;
pub mod xtalkmap;
