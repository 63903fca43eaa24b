// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeSet, HashSet};

use super::gate::{GateKind, GateLibrary};
use super::MapError;
use crate::boolcore::{Cube, Literal, Network, Node, Output, Signal, Sop};

/// What drives a pin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Driver {
    Input(usize),
    Gate(usize),
    Inverter(usize),
    Const(bool),
}

/// A gate input or output reference. `complemented` is only meaningful on
/// primary inputs, where it stands for the shared input inverter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pin {
    pub driver: Driver,
    pub complemented: bool,
}

impl Pin {
    pub const fn new(driver: Driver) -> Self {
        Pin {
            driver,
            complemented: false,
        }
    }

    pub const fn input(i: usize, complemented: bool) -> Self {
        Pin {
            driver: Driver::Input(i),
            complemented,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GateInst {
    pub id: String,
    pub kind: GateKind,
    pub pins: Vec<Pin>,
}

/// Explicit inverter. Its source is a gate, an input, or another inverter;
/// the mapper only produces gate-sourced inverters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InverterInst {
    pub id: String,
    pub input: Driver,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MappedOutput {
    pub name: String,
    pub pin: Pin,
}

/// Crosstalk netlist: gates in topological order plus explicit inverters.
///
/// A gate may read an inverter only when the gate (or input) at the root of
/// that inverter's chain precedes it; an inverter may read an earlier
/// inverter.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MappedNetwork {
    pub inputs: Vec<String>,
    pub gates: Vec<GateInst>,
    pub inverters: Vec<InverterInst>,
    pub outputs: Vec<MappedOutput>,
}

impl MappedNetwork {
    /// Gate or input at the root of an inverter chain.
    pub fn inverter_root(&self, k: usize) -> Driver {
        let mut d = self.inverters[k].input;
        while let Driver::Inverter(j) = d {
            d = self.inverters[j].input;
        }
        d
    }

    pub fn validate(&self, lib: Option<&GateLibrary>) -> Result<(), MapError> {
        let bad = |msg: String| Err(MapError::InvalidNetlist(msg));
        let mut ids = HashSet::new();
        for name in &self.inputs {
            if !ids.insert(name.as_str()) {
                return bad(format!("duplicate input `{name}`"));
            }
        }
        for id in self
            .gates
            .iter()
            .map(|g| &g.id)
            .chain(self.inverters.iter().map(|i| &i.id))
        {
            if !ids.insert(id.as_str()) {
                return bad(format!("duplicate identifier `{id}`"));
            }
        }
        for (k, inv) in self.inverters.iter().enumerate() {
            match inv.input {
                Driver::Input(i) if i < self.inputs.len() => {}
                Driver::Gate(g) if g < self.gates.len() => {}
                Driver::Inverter(j) if j < k => {}
                _ => return bad(format!("inverter `{}` has an invalid source", inv.id)),
            }
        }
        for (j, g) in self.gates.iter().enumerate() {
            if g.kind == GateKind::Inv {
                return bad(format!("gate `{}` is an inverter; use the inverter list", g.id));
            }
            if let Some(lib) = lib {
                if !lib.contains(g.kind) {
                    return bad(format!("gate `{}` uses {} outside the library", g.id, g.kind));
                }
            }
            if g.pins.len() != g.kind.arity() {
                return bad(format!(
                    "gate `{}` has {} pins, {} expects {}",
                    g.id,
                    g.pins.len(),
                    g.kind,
                    g.kind.arity()
                ));
            }
            for p in &g.pins {
                self.check_pin(p, j, &g.id)?;
            }
        }
        for o in &self.outputs {
            self.check_pin(&o.pin, self.gates.len(), &o.name)?;
        }
        Ok(())
    }

    fn check_pin(&self, p: &Pin, before: usize, owner: &str) -> Result<(), MapError> {
        let ok = match p.driver {
            Driver::Input(i) => i < self.inputs.len(),
            Driver::Gate(g) => g < before && !p.complemented,
            Driver::Inverter(k) => {
                k < self.inverters.len()
                    && !p.complemented
                    && match self.inverter_root(k) {
                        Driver::Gate(g) => g < before,
                        _ => true,
                    }
            }
            Driver::Const(_) => !p.complemented,
        };
        if ok {
            Ok(())
        } else {
            Err(MapError::InvalidNetlist(format!(
                "`{owner}` has an invalid or out-of-order pin"
            )))
        }
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    /// Primary inputs consumed in complemented form; each needs one shared
    /// inverter.
    pub fn complemented_inputs(&self) -> BTreeSet<usize> {
        self.gates
            .iter()
            .flat_map(|g| g.pins.iter())
            .chain(self.outputs.iter().map(|o| &o.pin))
            .filter_map(|p| match p.driver {
                Driver::Input(i) if p.complemented => Some(i),
                _ => None,
            })
            .collect()
    }

    /// Explicit inverters plus one shared inverter per complemented input.
    pub fn inverter_count(&self) -> usize {
        self.inverters.len() + self.complemented_inputs().len()
    }

    pub fn driver_name(&self, d: Driver) -> String {
        match d {
            Driver::Input(i) => self.inputs[i].clone(),
            Driver::Gate(g) => self.gates[g].id.clone(),
            Driver::Inverter(k) => self.inverters[k].id.clone(),
            Driver::Const(v) => u8::from(v).to_string(),
        }
    }

    /// Boolean network with one node per gate and inverter, for the
    /// equivalence oracle.
    pub fn to_network(&self) -> Result<Network, MapError> {
        self.validate(None)?;
        let mut nodes: Vec<Node> = Vec::new();
        let mut gate_node = vec![usize::MAX; self.gates.len()];
        let mut inv_node = vec![usize::MAX; self.inverters.len()];
        // inverters are emitted as soon as their source exists
        let mut pending: Vec<usize> = (0..self.inverters.len()).collect();
        let signal = |d: Driver, gate_node: &[usize], inv_node: &[usize]| -> Option<Signal> {
            match d {
                Driver::Input(i) => Some(Signal::Input(i)),
                Driver::Gate(g) => (gate_node[g] != usize::MAX).then(|| Signal::Node(gate_node[g])),
                Driver::Inverter(k) => (inv_node[k] != usize::MAX).then(|| Signal::Node(inv_node[k])),
                Driver::Const(v) => Some(Signal::Const(v)),
            }
        };
        let flush =
            |nodes: &mut Vec<Node>, gate_node: &[usize], inv_node: &mut Vec<usize>, pending: &mut Vec<usize>| loop {
                let mut progressed = false;
                pending.retain(|&k| {
                    let Some(src) = signal(self.inverters[k].input, gate_node, inv_node) else {
                        return true;
                    };
                    inv_node[k] = nodes.len();
                    nodes.push(literal_node(&self.inverters[k].id, src, true));
                    progressed = true;
                    false
                });
                if !progressed {
                    break;
                }
            };
        flush(&mut nodes, &gate_node, &mut inv_node, &mut pending);
        for (j, g) in self.gates.iter().enumerate() {
            let mut fanins: Vec<Signal> = Vec::new();
            let mut lits: Vec<Option<Literal>> = Vec::new();
            for p in &g.pins {
                let s = match p.driver {
                    Driver::Input(i) => Signal::Input(i),
                    Driver::Gate(h) => Signal::Node(gate_node[h]),
                    Driver::Inverter(k) => Signal::Node(inv_node[k]),
                    Driver::Const(v) => Signal::Const(v),
                };
                if let Signal::Const(v) = s {
                    lits.push(None);
                    let _ = v;
                    continue;
                }
                let slot = match fanins.iter().position(|f| *f == s) {
                    Some(slot) => slot,
                    None => {
                        fanins.push(s);
                        fanins.len() - 1
                    }
                };
                lits.push(Some(Literal::new(slot as u32, p.complemented)));
            }
            let func = gate_sop(g.kind, &g.pins, &lits);
            gate_node[j] = nodes.len();
            nodes.push(Node {
                name: g.id.clone(),
                fanins,
                func,
            });
            flush(&mut nodes, &gate_node, &mut inv_node, &mut pending);
        }
        let outputs = self
            .outputs
            .iter()
            .map(|o| Output {
                name: o.name.clone(),
                signal: match o.pin.driver {
                    Driver::Input(i) => Signal::Input(i),
                    Driver::Gate(g) => Signal::Node(gate_node[g]),
                    Driver::Inverter(k) => Signal::Node(inv_node[k]),
                    Driver::Const(v) => Signal::Const(v),
                },
                complemented: o.pin.complemented,
            })
            .collect();
        Network::new(self.inputs.clone(), nodes, outputs).map_err(|e| MapError::InvalidNetlist(e.to_string()))
    }
}

fn literal_node(name: &str, src: Signal, complemented: bool) -> Node {
    Node {
        name: name.to_string(),
        fanins: vec![src],
        func: Sop::literal(Literal::new(0, complemented)),
    }
}

/// Cover of a gate given pin literals (`None` for constant pins, whose
/// value is taken from `pins`).
fn gate_sop(kind: GateKind, pins: &[Pin], lits: &[Option<Literal>]) -> Sop {
    let table = kind.table();
    let a = kind.arity();
    let mut cubes = Vec::new();
    'rows: for row in 0..(1usize << a) {
        if (table >> row) & 1 == 0 {
            continue;
        }
        let mut cube_lits = Vec::new();
        for i in 0..a {
            let want = (row >> i) & 1 == 1;
            match (lits[i], pins[i].driver) {
                (Some(l), _) => cube_lits.push(if want { l } else { l.negate() }),
                (None, Driver::Const(v)) => {
                    if v != want {
                        continue 'rows;
                    }
                }
                (None, _) => unreachable!("non-constant pin without literal"),
            }
        }
        if let Some(c) = Cube::new(cube_lits) {
            cubes.push(c);
        }
    }
    Sop::from_cubes(cubes).scc()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolcore::truth_table;

    fn and_or() -> MappedNetwork {
        MappedNetwork {
            inputs: vec!["a".into(), "b".into(), "c".into()],
            gates: vec![
                GateInst {
                    id: "g".into(),
                    kind: GateKind::Nand2,
                    pins: vec![Pin::input(0, false), Pin::input(1, true)],
                },
                GateInst {
                    id: "h".into(),
                    kind: GateKind::Or2,
                    pins: vec![Pin::new(Driver::Inverter(0)), Pin::input(2, false)],
                },
            ],
            inverters: vec![InverterInst {
                id: "gn".into(),
                input: Driver::Gate(0),
            }],
            outputs: vec![MappedOutput {
                name: "y".into(),
                pin: Pin::new(Driver::Gate(1)),
            }],
        }
    }

    #[test]
    fn converts_to_network() {
        let m = and_or();
        m.validate(Some(&GateLibrary::crosstalk())).unwrap();
        let net = m.to_network().unwrap();
        let tt = truth_table(&net, 0).unwrap();
        for row in 0..8u64 {
            let (a, b, c) = (row & 1 == 1, row & 2 != 0, row & 4 != 0);
            assert_eq!(tt.get(row), (a && !b) || c);
        }
        assert_eq!(m.inverter_count(), 2);
        assert_eq!(m.complemented_inputs().into_iter().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn rejects_forward_inverter_use() {
        let mut m = and_or();
        m.gates.swap(0, 1);
        m.gates[1].pins.swap(0, 1);
        m.inverters[0].input = Driver::Gate(1);
        assert!(m.validate(None).is_err());
    }

    #[test]
    fn constant_pins() {
        let m = MappedNetwork {
            inputs: vec!["a".into()],
            gates: vec![GateInst {
                id: "g".into(),
                kind: GateKind::And2,
                pins: vec![Pin::input(0, false), Pin::new(Driver::Const(true))],
            }],
            inverters: vec![],
            outputs: vec![MappedOutput {
                name: "y".into(),
                pin: Pin::new(Driver::Gate(0)),
            }],
        };
        let tt = truth_table(&m.to_network().unwrap(), 0).unwrap();
        assert_eq!(tt.to_string(), "01");
    }
}
