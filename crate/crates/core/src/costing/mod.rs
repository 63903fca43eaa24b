// SPDX-License-Identifier: Apache-2.0

//! Transistor and gate counting, the CMOS baseline and reduction rows.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boolcore::Network;
use crate::xtalkmap::{map_network, Driver, GateKind, GateLibrary, MapError, MappedNetwork};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CostError {
    #[error("no cost given for gate kind {0}")]
    MissingKind(GateKind),
    #[error("unknown gate kind `{0}` in cost table")]
    UnknownKind(String),
    #[error("cost of `{key}` must be a positive integer, got {value}")]
    NotPositive { key: String, value: String },
    #[error("malformed key-value file: {0}")]
    Parse(String),
    #[error("baseline total is zero")]
    ZeroBaseline,
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
}

/// Core transistor count per gate kind plus the inverter cost.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostTable {
    core: BTreeMap<GateKind, u32>,
    inverter: u32,
}

impl CostTable {
    /// Inverting crosstalk cores cost 3, non-inverting ones 5, inverters 2.
    pub fn crosstalk() -> Self {
        let core = GateKind::ALL
            .iter()
            .filter(|k| **k != GateKind::Inv)
            .map(|k| (*k, if k.is_inverting() { 3 } else { 5 }))
            .collect();
        CostTable { core, inverter: 2 }
    }

    /// Two transistors per input for NAND/NOR/AOI/OAI, two more for the
    /// non-inverting AND/OR cells, inverters 2.
    pub fn cmos() -> Self {
        use GateKind::*;
        let core = [
            (Nand2, 4),
            (Nand3, 6),
            (Nor2, 4),
            (Nor3, 6),
            (Aoi21, 6),
            (Oai21, 6),
            (And2, 6),
            (And3, 8),
            (Or2, 6),
            (Or3, 8),
        ]
        .into_iter()
        .collect();
        CostTable { core, inverter: 2 }
    }

    pub fn core(&self, kind: GateKind) -> Result<u32, CostError> {
        if kind == GateKind::Inv {
            return Ok(self.inverter);
        }
        self.core.get(&kind).copied().ok_or(CostError::MissingKind(kind))
    }

    pub fn inverter(&self) -> u32 {
        self.inverter
    }

    pub fn set(&mut self, kind: GateKind, cost: u32) {
        if kind == GateKind::Inv {
            self.inverter = cost;
        } else {
            self.core.insert(kind, cost);
        }
    }

    /// Reads `KIND = integer` lines over `base`; kinds not mentioned keep
    /// their base cost.
    pub fn parse_over(text: &str, base: &CostTable) -> Result<CostTable, CostError> {
        let table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| CostError::Parse(e.to_string()))?;
        let mut out = base.clone();
        for (key, value) in &table {
            let kind: GateKind = key.parse().map_err(|_| CostError::UnknownKind(key.clone()))?;
            let cost = value
                .as_integer()
                .filter(|v| *v > 0)
                .and_then(|v| u32::try_from(v).ok())
                .ok_or_else(|| CostError::NotPositive {
                    key: key.clone(),
                    value: value.to_string(),
                })?;
            out.set(kind, cost);
        }
        Ok(out)
    }

    pub fn load_over(path: &Path, base: &CostTable) -> Result<CostTable, CostError> {
        CostTable::parse_over(&read(path)?, base)
    }
}

fn read(path: &Path) -> Result<String, CostError> {
    std::fs::read_to_string(path).map_err(|e| CostError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })
}

/// Gate cores plus one inverter cost per explicit inverter and per
/// complemented primary input.
pub fn transistor_count(m: &MappedNetwork, costs: &CostTable) -> Result<u32, CostError> {
    let mut total = 0;
    for g in &m.gates {
        total += costs.core(g.kind)?;
    }
    Ok(total + costs.inverter() * m.inverter_count() as u32)
}

/// Crosstalk gate instances; standalone inverters are not counted.
pub fn gate_count(m: &MappedNetwork) -> usize {
    m.gate_count()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputCost {
    pub name: String,
    /// Transistors in the output's transitive fanin cone.
    pub transistors: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostReport {
    pub label: String,
    pub transistor_total: u32,
    pub gate_total: usize,
    pub inverter_total: usize,
    pub core_total: u32,
    pub inverter_cost: u32,
    pub per_output: Vec<OutputCost>,
}

impl CostReport {
    pub fn of(m: &MappedNetwork, costs: &CostTable, label: &str) -> Result<CostReport, CostError> {
        let core_total = m.gates.iter().map(|g| costs.core(g.kind)).sum::<Result<u32, _>>()?;
        let per_output = m
            .outputs
            .iter()
            .map(|o| {
                Ok(OutputCost {
                    name: o.name.clone(),
                    transistors: cone_cost(m, o.pin.driver, o.pin.complemented, costs)?,
                })
            })
            .collect::<Result<_, CostError>>()?;
        Ok(CostReport {
            label: label.to_string(),
            transistor_total: transistor_count(m, costs)?,
            gate_total: gate_count(m),
            inverter_total: m.inverter_count(),
            core_total,
            inverter_cost: costs.inverter(),
            per_output,
        })
    }

    /// `transistor_total = core_total + inverter_total * inverter_cost`.
    pub fn is_consistent(&self) -> bool {
        self.transistor_total == self.core_total + self.inverter_total as u32 * self.inverter_cost
    }
}

impl fmt::Display for CostReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.label)?;
        writeln!(f, "  transistors: {}", self.transistor_total)?;
        writeln!(f, "  gates:       {}", self.gate_total)?;
        writeln!(f, "  inverters:   {}", self.inverter_total)?;
        for o in &self.per_output {
            writeln!(f, "  cone {}: {}", o.name, o.transistors)?;
        }
        Ok(())
    }
}

fn cone_cost(m: &MappedNetwork, root: Driver, root_neg: bool, costs: &CostTable) -> Result<u32, CostError> {
    let mut gates = BTreeSet::new();
    let mut invs = BTreeSet::new();
    let mut pis = BTreeSet::new();
    let mut stack = vec![(root, root_neg)];
    while let Some((d, neg)) = stack.pop() {
        match d {
            Driver::Input(i) if neg => {
                pis.insert(i);
            }
            Driver::Gate(g) => {
                if gates.insert(g) {
                    stack.extend(m.gates[g].pins.iter().map(|p| (p.driver, p.complemented)));
                }
            }
            Driver::Inverter(k) if invs.insert(k) => {
                stack.push((m.inverters[k].input, false));
            }
            _ => {}
        }
    }
    let mut total = 0;
    for g in gates {
        total += costs.core(m.gates[g].kind)?;
    }
    Ok(total + costs.inverter() * (invs.len() + pis.len()) as u32)
}

/// Maps `net` onto static CMOS cells with the same mapper and reports it.
pub fn cmos_baseline(net: &Network, cmos_costs: &CostTable) -> Result<(MappedNetwork, CostReport), MapError> {
    let m = map_network(net, &GateLibrary::cmos(), cmos_costs)?;
    let report = CostReport::of(&m, cmos_costs, "cmos").map_err(MapError::Cost)?;
    Ok((m, report))
}

/// `round(100 * (base - ours) / base)`, halves away from zero.
pub fn reduction_pct(base: u32, ours: u32) -> Result<i64, CostError> {
    if base == 0 {
        return Err(CostError::ZeroBaseline);
    }
    let n = 100 * (i64::from(base) - i64::from(ours));
    let d = i64::from(base);
    Ok((2 * n + n.signum() * d) / (2 * d))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metrics {
    pub transistors: u32,
    pub gates: u32,
}

impl Metrics {
    pub fn new(transistors: u32, gates: u32) -> Self {
        Metrics { transistors, gates }
    }
}

impl From<&CostReport> for Metrics {
    fn from(r: &CostReport) -> Self {
        Metrics::new(r.transistor_total, r.gate_total as u32)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionRow {
    pub name: String,
    pub io: String,
    pub baseline: Metrics,
    pub ours: Metrics,
    pub r_transistor_pct: i64,
    pub r_gate_pct: i64,
}

pub fn reduction_report(name: &str, io: &str, ours: Metrics, base: Metrics) -> Result<ReductionRow, CostError> {
    Ok(ReductionRow {
        name: name.to_string(),
        io: io.to_string(),
        baseline: base,
        ours,
        r_transistor_pct: reduction_pct(base.transistors, ours.transistors)?,
        r_gate_pct: reduction_pct(base.gates, ours.gates)?,
    })
}

/// Externally supplied comparison numbers for one benchmark.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RefEntry {
    pub io: Option<String>,
    pub cmos_transistors: Option<u32>,
    pub cmos_gates: Option<u32>,
    pub existing_transistors: Option<u32>,
    pub existing_gates: Option<u32>,
    pub published_transistors: Option<u32>,
    pub published_gates: Option<u32>,
}

impl RefEntry {
    pub fn cmos(&self) -> Option<Metrics> {
        Some(Metrics::new(self.cmos_transistors?, self.cmos_gates?))
    }

    pub fn existing(&self) -> Option<Metrics> {
        Some(Metrics::new(self.existing_transistors?, self.existing_gates?))
    }

    pub fn published(&self) -> Option<Metrics> {
        Some(Metrics::new(self.published_transistors?, self.published_gates?))
    }
}

/// Reference values keyed by benchmark name, read from `bench.field = int`
/// lines.
pub fn parse_refs(text: &str) -> Result<BTreeMap<String, RefEntry>, CostError> {
    toml::from_str(text).map_err(|e| CostError::Parse(e.to_string()))
}

pub fn load_refs(path: &Path) -> Result<BTreeMap<String, RefEntry>, CostError> {
    parse_refs(&read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::xtalkmap::{GateInst, InverterInst, MappedOutput, Pin};

    #[test]
    fn rounding_matches_published_cells() {
        for (base, ours, pct) in [
            (20, 13, 35),
            (18, 10, 44),
            (62, 44, 29),
            (21, 11, 48),
            (7, 3, 57),
            (62, 62, 0),
        ] {
            assert_eq!(reduction_pct(base, ours).unwrap(), pct, "{base} -> {ours}");
        }
        assert_eq!(reduction_pct(2, 1).unwrap(), 50);
        assert_eq!(reduction_pct(8, 9).unwrap(), -13);
        assert_eq!(reduction_pct(200, 201).unwrap(), -1);
        assert_eq!(reduction_pct(0, 3), Err(CostError::ZeroBaseline));
    }

    #[test]
    fn default_costs() {
        let c = CostTable::crosstalk();
        assert_eq!(c.core(GateKind::Nand2).unwrap(), 3);
        assert_eq!(c.core(GateKind::Maj3).unwrap(), 5);
        assert_eq!(c.core(GateKind::Inv).unwrap(), 2);
        let cm = CostTable::cmos();
        assert_eq!(cm.core(GateKind::Nand3).unwrap(), 6);
        assert_eq!(cm.core(GateKind::Maj3), Err(CostError::MissingKind(GateKind::Maj3)));
    }

    #[test]
    fn key_value_overrides() {
        let c = CostTable::parse_over("# custom\nCT_NAND2 = 4\nINV = 1\n", &CostTable::crosstalk()).unwrap();
        assert_eq!(c.core(GateKind::Nand2).unwrap(), 4);
        assert_eq!(c.inverter(), 1);
        assert_eq!(c.core(GateKind::Nor2).unwrap(), 3);
        assert!(matches!(
            CostTable::parse_over("CT_XOR2 = 4", &CostTable::crosstalk()),
            Err(CostError::UnknownKind(_))
        ));
        assert!(matches!(
            CostTable::parse_over("CT_AND2 = 0", &CostTable::crosstalk()),
            Err(CostError::NotPositive { .. })
        ));
    }

    #[test]
    fn counts_and_report_identity() {
        let m = MappedNetwork {
            inputs: vec!["a".into(), "b".into()],
            gates: vec![GateInst {
                id: "g".into(),
                kind: GateKind::Nand2,
                pins: vec![Pin::input(0, true), Pin::input(1, false)],
            }],
            inverters: vec![InverterInst {
                id: "gn".into(),
                input: Driver::Gate(0),
            }],
            outputs: vec![
                MappedOutput {
                    name: "y".into(),
                    pin: Pin::new(Driver::Gate(0)),
                },
                MappedOutput {
                    name: "z".into(),
                    pin: Pin::new(Driver::Inverter(0)),
                },
            ],
        };
        let costs = CostTable::crosstalk();
        assert_eq!(transistor_count(&m, &costs).unwrap(), 3 + 2 + 2);
        assert_eq!(gate_count(&m), 1);
        let r = CostReport::of(&m, &costs, "t").unwrap();
        assert!(r.is_consistent());
        assert_eq!(r.per_output[0].transistors, 5);
        assert_eq!(r.per_output[1].transistors, 7);
    }

    #[test]
    fn reference_file() {
        let refs = parse_refs("[full_adder]\ncmos_transistors = 18\ncmos_gates = 9\n").unwrap();
        assert_eq!(refs["full_adder"].cmos(), Some(Metrics::new(18, 9)));
        assert_eq!(refs["full_adder"].existing(), None);
        assert!(parse_refs("[x]\nbogus = 1\n").is_err());
    }
}
