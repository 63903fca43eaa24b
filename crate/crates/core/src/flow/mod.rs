// SPDX-License-Identifier: Apache-2.0

//! End-to-end synthesis: sweep, decompose, share cubes, map, cost and
//! optionally verify. Also the manifest-driven benchmark runner.

mod bench;

pub use bench::{load_manifest, run_bench, BenchEntry, BenchReport, BenchRow, Manifest};

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::boolcore::{is_equivalent, BoolError, Network, Verdict};
use crate::costing::{cmos_baseline, CostError, CostReport, CostTable};
use crate::decompose::{decompose3_with, share_common_cubes_with, sweep, Strategy};
use crate::frontend::{Format, FrontendError};
use crate::xtalkmap::{map_network, GateLibrary, MapError, MappedNetwork};

#[derive(Debug, Error)]
pub enum FlowError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: FrontendError,
    },
    #[error("{path}: {msg}")]
    Manifest { path: PathBuf, msg: String },
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Bool(#[from] BoolError),
    #[error(transparent)]
    Cost(#[from] CostError),
}

impl FlowError {
    /// Process exit status: 2 for malformed input, 4 for I/O, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            FlowError::Parse { .. } | FlowError::Manifest { .. } => 2,
            FlowError::Io { .. } => 4,
            FlowError::Cost(CostError::Io { .. }) => 4,
            FlowError::Cost(CostError::Parse(_) | CostError::UnknownKind(_) | CostError::NotPositive { .. }) => 2,
            _ => 1,
        }
    }
}

/// Reads and parses a network, picking the format from the extension
/// unless `format` is given.
pub fn load_network(path: &Path, format: Option<Format>) -> Result<Network, FlowError> {
    let text = std::fs::read_to_string(path).map_err(|source| FlowError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let parse_err = |source| FlowError::Parse {
        path: path.to_path_buf(),
        source,
    };
    let format = match format.or_else(|| Format::from_path(path)) {
        Some(f) => f,
        None => {
            return Err(parse_err(FrontendError::UnknownFormat(path.display().to_string())));
        }
    };
    format.parse(&text).map_err(parse_err)
}

#[derive(Clone, Debug)]
pub struct FlowOptions {
    pub lib: GateLibrary,
    pub costs: CostTable,
    /// Cell costs of the CMOS baseline.
    pub cmos_costs: CostTable,
    /// Run the cube-sharing pass.
    pub share: bool,
    /// Verify the mapped result against the input.
    pub check: bool,
}

impl Default for FlowOptions {
    fn default() -> Self {
        FlowOptions {
            lib: GateLibrary::crosstalk(),
            costs: CostTable::crosstalk(),
            cmos_costs: CostTable::cmos(),
            share: true,
            check: true,
        }
    }
}

/// Size of a network after decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetStats {
    pub nodes: usize,
    pub max_fanin: usize,
    pub literals: usize,
}

impl NetStats {
    pub fn of(net: &Network) -> NetStats {
        NetStats {
            nodes: net.nodes.len(),
            max_fanin: net.max_fanin(),
            literals: net.nodes.iter().map(|n| n.func.literal_occurrences()).sum(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SynthResult {
    pub decomposed: Network,
    pub mapped: MappedNetwork,
    pub report: CostReport,
    /// CMOS cell mapping of the same decomposed network.
    pub cmos: CostReport,
    pub stats: NetStats,
    /// Present when checking was requested.
    pub verdict: Option<Verdict>,
}

/// Transistor count of a mapping under `opts`, `u64::MAX` if it fails.
fn estimate(net: &Network, opts: &FlowOptions) -> u64 {
    map_network(net, &opts.lib, &opts.costs)
        .ok()
        .and_then(|m| crate::costing::transistor_count(&m, &opts.costs).ok())
        .map_or(u64::MAX, u64::from)
}

/// The technology-independent half of the flow: every decomposition
/// strategy is tried and the one whose mapping is cheapest is kept (the
/// first on ties).
pub fn prepare(net: &Network, opts: &FlowOptions) -> Network {
    let swept = sweep(net);
    let mut best: Option<(u64, Network)> = None;
    for s in Strategy::ALL {
        let mut d = decompose3_with(&swept, s);
        if opts.share {
            d = share_common_cubes_with(&d, |n| estimate(n, opts));
        }
        let cost = estimate(&d, opts);
        if best.as_ref().is_none_or(|(c, _)| cost < *c) {
            best = Some((cost, d));
        }
    }
    best.map(|(_, d)| d).expect("at least one strategy")
}

pub fn synthesize(net: &Network, label: &str, opts: &FlowOptions) -> Result<SynthResult, FlowError> {
    let decomposed = prepare(net, opts);
    let mapped = map_network(&decomposed, &opts.lib, &opts.costs)?;
    let report = CostReport::of(&mapped, &opts.costs, label)?;
    let (_, mut cmos) = cmos_baseline(&decomposed, &opts.cmos_costs)?;
    cmos.label = format!("{label} (cmos)");
    let verdict = if opts.check {
        Some(is_equivalent(net, &mapped.to_network()?)?)
    } else {
        None
    };
    Ok(SynthResult {
        stats: NetStats::of(&decomposed),
        decomposed,
        mapped,
        report,
        cmos,
        verdict,
    })
}
