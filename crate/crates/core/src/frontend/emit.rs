// SPDX-License-Identifier: Apache-2.0

//! `X_<family>(...)` rendering of a mapped netlist.

use std::fmt::Write as _;

use crate::xtalkmap::{Driver, MappedNetwork, Pin};

/// Effective reader count per gate. A read through an inverter counts as
/// many times as the inverter itself is read.
fn gate_uses(m: &MappedNetwork) -> Vec<usize> {
    let mut direct_g = vec![0usize; m.gates.len()];
    let mut inv = vec![0usize; m.inverters.len()];
    let pins = m
        .gates
        .iter()
        .flat_map(|g| g.pins.iter())
        .chain(m.outputs.iter().map(|o| &o.pin));
    for p in pins {
        match p.driver {
            Driver::Gate(g) => direct_g[g] += 1,
            Driver::Inverter(k) => inv[k] += 1,
            _ => {}
        }
    }
    // inverters only read earlier inverters, so one backward pass settles
    // chained counts
    for k in (0..m.inverters.len()).rev() {
        match m.inverters[k].input {
            Driver::Inverter(j) => inv[j] += inv[k],
            Driver::Gate(g) => direct_g[g] += inv[k],
            _ => {}
        }
    }
    direct_g
}

struct Renderer<'a> {
    m: &'a MappedNetwork,
    uses: Vec<usize>,
}

impl Renderer<'_> {
    fn inline(&self, g: usize) -> bool {
        self.uses[g] == 1
    }

    fn driver(&self, d: Driver) -> String {
        match d {
            Driver::Input(i) => self.m.inputs[i].clone(),
            Driver::Const(c) => u8::from(c).to_string(),
            Driver::Gate(g) if self.inline(g) => self.gate_body(g),
            Driver::Gate(g) => self.m.gates[g].id.clone(),
            Driver::Inverter(k) => format!("{}'", self.driver(self.m.inverters[k].input)),
        }
    }

    fn pin(&self, p: &Pin) -> String {
        let s = self.driver(p.driver);
        if p.complemented {
            s + "'"
        } else {
            s
        }
    }

    /// Pins of interchangeable positions are listed gate-driven first, then
    /// inputs in declaration order; distinguished positions keep their slot.
    fn ordered_pins(&self, g: usize) -> Vec<Pin> {
        let gate = &self.m.gates[g];
        let classes = gate.kind.pin_classes();
        let mut pins = gate.pins.clone();
        let key = |p: &Pin| match p.driver {
            Driver::Input(i) => (1u8, i, p.complemented),
            Driver::Gate(x) => (0, x, false),
            Driver::Inverter(x) => (0, self.m.gates.len() + x, false),
            Driver::Const(c) => (2, usize::from(c), false),
        };
        let mut class_ids: Vec<u8> = classes.to_vec();
        class_ids.sort();
        class_ids.dedup();
        for c in class_ids {
            let slots: Vec<usize> = (0..pins.len()).filter(|&i| classes.get(i) == Some(&c)).collect();
            let mut members: Vec<Pin> = slots.iter().map(|&i| pins[i]).collect();
            members.sort_by_key(key);
            for (slot, p) in slots.into_iter().zip(members) {
                pins[slot] = p;
            }
        }
        pins
    }

    fn gate_body(&self, g: usize) -> String {
        let args: Vec<String> = self.ordered_pins(g).iter().map(|p| self.pin(p)).collect();
        format!("X_{}({})", self.m.gates[g].kind.family(), args.join(","))
    }
}

/// Renders each shared gate as `id = X_<family>(...)` followed by one line
/// per output. Gates read once are inlined into their reader; inverters
/// appear as a trailing apostrophe. The text depends only on `m`.
pub fn emit_expression(m: &MappedNetwork) -> String {
    let r = Renderer { m, uses: gate_uses(m) };
    let mut out = String::new();
    for g in 0..m.gates.len() {
        if !r.inline(g) {
            let _ = writeln!(out, "{} = {}", m.gates[g].id, r.gate_body(g));
        }
    }
    for o in &m.outputs {
        let named_itself = matches!(o.pin.driver, Driver::Gate(g) if !r.inline(g) && m.gates[g].id == o.name);
        if named_itself && !o.pin.complemented {
            continue;
        }
        let _ = writeln!(out, "{} = {}", o.name, r.pin(&o.pin));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::xtalkmap::{GateInst, GateKind, InverterInst, MappedOutput};

    fn out(name: &str, pin: Pin) -> MappedOutput {
        MappedOutput { name: name.into(), pin }
    }

    #[test]
    fn and3_over_literals() {
        let m = MappedNetwork {
            inputs: vec!["A3".into(), "B0".into(), "B3".into()],
            gates: vec![GateInst {
                id: "f2".into(),
                kind: GateKind::And3,
                pins: vec![Pin::input(0, false), Pin::input(1, true), Pin::input(2, true)],
            }],
            inverters: vec![],
            outputs: vec![out("f2", Pin::new(Driver::Gate(0)))],
        };
        assert_eq!(emit_expression(&m), "f2 = X_and(A3,B0',B3')\n");
    }

    #[test]
    fn lone_inverter_on_input() {
        let m = MappedNetwork {
            inputs: vec!["a".into()],
            gates: vec![],
            inverters: vec![InverterInst {
                id: "n".into(),
                input: Driver::Input(0),
            }],
            outputs: vec![out("y", Pin::new(Driver::Inverter(0)))],
        };
        assert_eq!(emit_expression(&m), "y = a'\n");
        let direct = MappedNetwork {
            inputs: vec!["a".into()],
            outputs: vec![out("y", Pin::input(0, true))],
            ..Default::default()
        };
        assert_eq!(emit_expression(&direct), "y = a'\n");
    }

    #[test]
    fn shared_gate_is_named_and_gates_lead_arguments() {
        let m = MappedNetwork {
            inputs: vec!["A1".into(), "A0".into(), "B1".into(), "B0".into()],
            gates: vec![
                GateInst {
                    id: "Y0".into(),
                    kind: GateKind::And2,
                    pins: vec![Pin::input(1, false), Pin::input(3, false)],
                },
                GateInst {
                    id: "Y3".into(),
                    kind: GateKind::And3,
                    pins: vec![Pin::input(2, false), Pin::new(Driver::Gate(0)), Pin::input(0, false)],
                },
            ],
            inverters: vec![],
            outputs: vec![
                out("Y0", Pin::new(Driver::Gate(0))),
                out("Y3", Pin::new(Driver::Gate(1))),
            ],
        };
        assert_eq!(emit_expression(&m), "Y0 = X_and(A0,B0)\nY3 = X_and(Y0,A1,B1)\n");
    }

    #[test]
    fn hetero_gate_keeps_its_lone_pin_last() {
        let m = MappedNetwork {
            inputs: vec!["a".into(), "b".into(), "c".into()],
            gates: vec![
                GateInst {
                    id: "g".into(),
                    kind: GateKind::Nand2,
                    pins: vec![Pin::input(0, false), Pin::input(1, false)],
                },
                GateInst {
                    id: "y".into(),
                    kind: GateKind::Ao21,
                    pins: vec![Pin::input(2, false), Pin::input(1, true), Pin::new(Driver::Inverter(0))],
                },
            ],
            inverters: vec![InverterInst {
                id: "g_n".into(),
                input: Driver::Gate(0),
            }],
            outputs: vec![out("y", Pin::new(Driver::Gate(1)))],
        };
        assert_eq!(emit_expression(&m), "y = X_ao21(b',c,X_nand(a,b)')\n");
    }

    #[test]
    fn gate_read_through_a_shared_inverter_is_named() {
        let m = MappedNetwork {
            inputs: vec!["a".into(), "b".into()],
            gates: vec![GateInst {
                id: "g".into(),
                kind: GateKind::Nand2,
                pins: vec![Pin::input(0, false), Pin::input(1, false)],
            }],
            inverters: vec![InverterInst {
                id: "g_n".into(),
                input: Driver::Gate(0),
            }],
            outputs: vec![
                out("y", Pin::new(Driver::Inverter(0))),
                out("z", Pin::new(Driver::Inverter(0))),
            ],
        };
        assert_eq!(emit_expression(&m), "g = X_nand(a,b)\ny = g'\nz = g'\n");
    }
}
