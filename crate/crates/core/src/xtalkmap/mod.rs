// SPDX-License-Identifier: Apache-2.0

//! Crosstalk technology mapping.
//!
//! Every node of a decomposed network (at most three fanins) is realized
//! by library gates: direct library membership first, common-literal
//! factoring next, De Morgan variants for two-literal nodes, and a
//! NAND/NOR fallback. Network-wide passes then absorb inverters into dual
//! gates and merge redundant cells.

mod gate;
mod mapped;
mod mapper;
mod matcher;
mod passes;

pub use gate::{GateKind, GateLibrary};
pub use mapped::{Driver, GateInst, InverterInst, MappedNetwork, MappedOutput, Pin};
pub use mapper::{
    choose_demorgan_variant, classify, factor_out, find_common_literal, map_network, map_network_naive, DemorganChoice,
    GateMatch, Implementation, LocalGate, Root, Src,
};
pub use passes::{absorb_inverted_fanins, redundancy_check};

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::costing::CostError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("node `{node}` has {fanins} fanins; decompose to at most 3 first")]
    Arity { node: String, fanins: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid netlist: {0}")]
    InvalidNetlist(String),
    #[error(transparent)]
    Cost(#[from] CostError),
}

/// A value available while building a netlist: a driver and whether it is
/// needed complemented.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Val {
    pub driver: Driver,
    pub neg: bool,
}

impl Val {
    pub const fn new(driver: Driver, neg: bool) -> Self {
        Val { driver, neg }
    }

    pub fn negate(self) -> Self {
        Val { neg: !self.neg, ..self }
    }
}

/// Incremental netlist construction with inverter sharing and unique ids.
pub(crate) struct Builder {
    pub m: MappedNetwork,
    inv_of: HashMap<usize, usize>,
    names: HashSet<String>,
    /// Preferred id for the inverter of a gate.
    pub inv_names: HashMap<usize, String>,
    /// Inputs already read complemented.
    pub pi_neg: HashSet<usize>,
}

impl Builder {
    pub fn new(inputs: Vec<String>) -> Self {
        let names = inputs.iter().cloned().collect();
        Builder {
            m: MappedNetwork {
                inputs,
                ..MappedNetwork::default()
            },
            inv_of: HashMap::new(),
            names,
            inv_names: HashMap::new(),
            pi_neg: HashSet::new(),
        }
    }

    /// Reserves names so generated ids avoid them.
    pub fn reserve<'a>(&mut self, names: impl IntoIterator<Item = &'a String>) {
        self.names.extend(names.into_iter().cloned());
    }

    pub fn fresh(&mut self, hint: &str) -> String {
        if self.names.insert(hint.to_string()) {
            return hint.to_string();
        }
        (1..)
            .map(|k| format!("{hint}_{k}"))
            .find(|n| !self.names.contains(n))
            .inspect(|n| {
                self.names.insert(n.clone());
            })
            .expect("unbounded suffix search")
    }

    /// Adds a gate with a unique id derived from `hint`.
    pub fn gate(&mut self, hint: &str, kind: GateKind, pins: Vec<Pin>) -> usize {
        let id = self.fresh(hint);
        self.gate_exact(&id, kind, pins)
    }

    /// Adds a gate under `id`, which the caller owns (reserved or fresh).
    pub fn gate_exact(&mut self, id: &str, kind: GateKind, pins: Vec<Pin>) -> usize {
        self.names.insert(id.to_string());
        self.m.gates.push(GateInst {
            id: id.to_string(),
            kind,
            pins,
        });
        self.m.gates.len() - 1
    }

    pub fn inverter_of(&mut self, g: usize) -> usize {
        if let Some(&k) = self.inv_of.get(&g) {
            return k;
        }
        let hint = self
            .inv_names
            .get(&g)
            .cloned()
            .unwrap_or_else(|| format!("{}_n", self.m.gates[g].id));
        let id = self.fresh(&hint);
        self.m.inverters.push(InverterInst {
            id,
            input: Driver::Gate(g),
        });
        let k = self.m.inverters.len() - 1;
        self.inv_of.insert(g, k);
        k
    }

    pub fn has_inverter(&self, g: usize) -> bool {
        self.inv_of.contains_key(&g)
    }

    pub fn pin(&mut self, v: Val) -> Pin {
        match (v.driver, v.neg) {
            (Driver::Input(i), neg) => {
                if neg {
                    self.pi_neg.insert(i);
                }
                Pin::input(i, neg)
            }
            (Driver::Const(b), neg) => Pin::new(Driver::Const(b ^ neg)),
            (d, false) => Pin::new(d),
            (Driver::Gate(g), true) => Pin::new(Driver::Inverter(self.inverter_of(g))),
            (Driver::Inverter(k), true) => match self.m.inverters[k].input {
                Driver::Gate(g) => Pin::new(Driver::Gate(g)),
                other => self.pin(Val::new(other, false)),
            },
        }
    }
}

/// Drops gates and inverters no output depends on, keeping order.
pub(crate) fn compact(m: &MappedNetwork) -> MappedNetwork {
    let mut live_g = vec![false; m.gates.len()];
    let mut live_i = vec![false; m.inverters.len()];
    let mut stack: Vec<Driver> = m.outputs.iter().map(|o| o.pin.driver).collect();
    while let Some(d) = stack.pop() {
        match d {
            Driver::Gate(g) if !live_g[g] => {
                live_g[g] = true;
                stack.extend(m.gates[g].pins.iter().map(|p| p.driver));
            }
            Driver::Inverter(k) if !live_i[k] => {
                live_i[k] = true;
                stack.push(m.inverters[k].input);
            }
            _ => {}
        }
    }
    let remap = |live: &[bool]| {
        let mut next = 0;
        live.iter()
            .map(|l| {
                if *l {
                    next += 1;
                    next - 1
                } else {
                    usize::MAX
                }
            })
            .collect::<Vec<_>>()
    };
    let (gmap, imap) = (remap(&live_g), remap(&live_i));
    let fix = |p: Pin| Pin {
        driver: match p.driver {
            Driver::Gate(g) => Driver::Gate(gmap[g]),
            Driver::Inverter(k) => Driver::Inverter(imap[k]),
            d => d,
        },
        ..p
    };
    MappedNetwork {
        inputs: m.inputs.clone(),
        gates: m
            .gates
            .iter()
            .zip(&live_g)
            .filter(|(_, l)| **l)
            .map(|(g, _)| GateInst {
                id: g.id.clone(),
                kind: g.kind,
                pins: g.pins.iter().map(|p| fix(*p)).collect(),
            })
            .collect(),
        inverters: m
            .inverters
            .iter()
            .zip(&live_i)
            .filter(|(_, l)| **l)
            .map(|(i, _)| InverterInst {
                id: i.id.clone(),
                input: fix(Pin::new(i.input)).driver,
            })
            .collect(),
        outputs: m
            .outputs
            .iter()
            .map(|o| MappedOutput {
                name: o.name.clone(),
                pin: fix(o.pin),
            })
            .collect(),
    }
}
