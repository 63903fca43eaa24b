// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Deserialize;

use super::{load_network, synthesize, FlowError, FlowOptions, NetStats};
use crate::boolcore::Verdict;
use crate::costing::{load_refs, reduction_report, Metrics, ReductionRow, RefEntry};
use crate::frontend::Format;

#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct BenchEntry {
    pub name: String,
    pub path: PathBuf,
    /// Skip with a warning instead of failing when the file is missing.
    #[serde(default)]
    pub optional: bool,
    /// `eqn` or `blif`; taken from the extension when absent.
    pub format: Option<String>,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub refs: Option<PathBuf>,
    #[serde(default)]
    pub bench: Vec<BenchEntry>,
}

/// Reads a manifest and resolves its paths against the manifest's
/// directory.
pub fn load_manifest(path: &Path) -> Result<Manifest, FlowError> {
    let text = std::fs::read_to_string(path).map_err(|source| FlowError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut m: Manifest = toml::from_str(&text).map_err(|e| FlowError::Manifest {
        path: path.to_path_buf(),
        msg: e.to_string(),
    })?;
    let base = path.parent().unwrap_or(Path::new(""));
    m.refs = m.refs.map(|r| base.join(r));
    for b in &mut m.bench {
        b.path = base.join(&b.path);
    }
    Ok(m)
}

#[derive(Clone, Debug)]
pub struct BenchRow {
    pub name: String,
    pub io: String,
    pub ours: Metrics,
    pub inverters: usize,
    /// Baseline used for the CMOS reduction: the reference pair when one is
    /// supplied, else the computed CMOS mapping.
    pub cmos: Metrics,
    pub cmos_is_reference: bool,
    pub cmos_computed: Metrics,
    pub existing: Option<Metrics>,
    pub published: Option<Metrics>,
    pub r_cmos: ReductionRow,
    pub r_existing: Option<ReductionRow>,
    pub stats: NetStats,
    pub verdict: Verdict,
}

impl BenchRow {
    pub fn equivalent(&self) -> bool {
        self.verdict.is_equivalent()
    }

    /// Signed deviation of our transistor count from the published one,
    /// in percent.
    pub fn published_deviation_pct(&self) -> Option<f64> {
        let p = self.published?.transistors;
        (p > 0).then(|| 100.0 * (f64::from(self.ours.transistors) - f64::from(p)) / f64::from(p))
    }
}

#[derive(Clone, Debug, Default)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    /// Optional entries whose files were missing: (name, path).
    pub skipped: Vec<(String, PathBuf)>,
}

fn parse_format(entry: &BenchEntry) -> Result<Option<Format>, FlowError> {
    match entry.format.as_deref() {
        None => Ok(None),
        Some("eqn") => Ok(Some(Format::Eqn)),
        Some("blif") => Ok(Some(Format::Blif)),
        Some(other) => Err(FlowError::Manifest {
            path: entry.path.clone(),
            msg: format!("unknown format `{other}`"),
        }),
    }
}

fn run_one(
    entry: &BenchEntry,
    refs: &BTreeMap<String, RefEntry>,
    opts: &FlowOptions,
) -> Result<Option<BenchRow>, FlowError> {
    if entry.optional && !entry.path.exists() {
        log::warn!("{}: {} not found, skipped", entry.name, entry.path.display());
        return Ok(None);
    }
    let net = load_network(&entry.path, parse_format(entry)?)?;
    let r = synthesize(&net, &entry.name, opts)?;
    let reference = refs.get(&entry.name);
    let io = format!("{}/{}", net.inputs.len(), net.outputs.len());
    if let Some(want) = reference.and_then(|e| e.io.as_ref()) {
        if *want != io {
            log::warn!("{}: interface is {io}, reference lists {want}", entry.name);
        }
    }
    let ours = Metrics::new(r.report.transistor_total, r.report.gate_total as u32);
    let cmos_computed = Metrics::new(r.cmos.transistor_total, r.cmos.gate_total as u32);
    let cmos_ref = reference.and_then(RefEntry::cmos);
    let cmos = cmos_ref.unwrap_or(cmos_computed);
    let existing = reference.and_then(RefEntry::existing);
    let r_existing = existing
        .map(|e| reduction_report(&entry.name, &io, ours, e))
        .transpose()?;
    Ok(Some(BenchRow {
        name: entry.name.clone(),
        r_cmos: reduction_report(&entry.name, &io, ours, cmos)?,
        io,
        ours,
        inverters: r.report.inverter_total,
        cmos,
        cmos_is_reference: cmos_ref.is_some(),
        cmos_computed,
        existing,
        published: reference.and_then(RefEntry::published),
        r_existing,
        stats: r.stats,
        verdict: r.verdict.expect("bench runs always check"),
    }))
}

/// Synthesizes and checks every manifest entry. Entries run in parallel;
/// rows keep manifest order. `refs` overrides the manifest's reference
/// file.
pub fn run_bench(manifest: &Manifest, refs: Option<&Path>, opts: &FlowOptions) -> Result<BenchReport, FlowError> {
    let refs_path = refs.map(Path::to_path_buf).or_else(|| manifest.refs.clone());
    let refs = match refs_path {
        Some(p) => load_refs(&p)?,
        None => BTreeMap::new(),
    };
    let opts = FlowOptions {
        check: true,
        ..opts.clone()
    };
    let results: Vec<Result<Option<BenchRow>, FlowError>> =
        manifest.bench.par_iter().map(|e| run_one(e, &refs, &opts)).collect();
    let mut report = BenchReport::default();
    for (entry, res) in manifest.bench.iter().zip(results) {
        match res? {
            Some(row) => report.rows.push(row),
            None => report.skipped.push((entry.name.clone(), entry.path.clone())),
        }
    }
    Ok(report)
}

fn opt_cell(v: Option<impl ToString>) -> String {
    v.map_or_else(|| "-".to_string(), |x| x.to_string())
}

impl BenchReport {
    pub fn all_equivalent(&self) -> bool {
        self.rows.iter().all(BenchRow::equivalent)
    }

    fn records(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                vec![
                    r.name.clone(),
                    r.io.clone(),
                    r.cmos.transistors.to_string(),
                    r.cmos.gates.to_string(),
                    opt_cell(r.existing.map(|m| m.transistors)),
                    opt_cell(r.existing.map(|m| m.gates)),
                    r.ours.transistors.to_string(),
                    r.ours.gates.to_string(),
                    r.r_cmos.r_transistor_pct.to_string(),
                    r.r_cmos.r_gate_pct.to_string(),
                    opt_cell(r.r_existing.as_ref().map(|x| x.r_transistor_pct)),
                    opt_cell(r.r_existing.as_ref().map(|x| x.r_gate_pct)),
                    r.inverters.to_string(),
                    opt_cell(r.published.map(|m| m.transistors)),
                    opt_cell(r.published_deviation_pct().map(|d| format!("{d:.1}"))),
                    r.stats.nodes.to_string(),
                    r.stats.literals.to_string(),
                    if r.equivalent() { "yes" } else { "no" }.to_string(),
                ]
            })
            .collect()
    }

    pub const HEADER: [&'static str; 18] = [
        "name",
        "io",
        "cmos_t",
        "cmos_g",
        "existing_t",
        "existing_g",
        "ours_t",
        "ours_g",
        "r_cmos_t_pct",
        "r_cmos_g_pct",
        "r_existing_t_pct",
        "r_existing_g_pct",
        "inverters",
        "published_t",
        "dev_published_t_pct",
        "nodes",
        "literals",
        "equivalent",
    ];

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(Self::HEADER).expect("in-memory write");
        for rec in self.records() {
            w.write_record(&rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
    }

    /// The same table with aligned columns.
    pub fn to_text(&self) -> String {
        let mut rows: Vec<Vec<String>> = vec![Self::HEADER.iter().map(|s| s.to_string()).collect()];
        rows.extend(self.records());
        let widths: Vec<usize> = (0..Self::HEADER.len())
            .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for r in &rows {
            let line: Vec<String> = r
                .iter()
                .zip(&widths)
                .enumerate()
                .map(|(c, (cell, w))| {
                    if c < 2 {
                        format!("{cell:<w$}")
                    } else {
                        format!("{cell:>w$}")
                    }
                })
                .collect();
            let _ = writeln!(out, "{}", line.join("  ").trim_end());
        }
        for (name, path) in &self.skipped {
            let _ = writeln!(out, "skipped {name}: {} not found", path.display());
        }
        out
    }
}
