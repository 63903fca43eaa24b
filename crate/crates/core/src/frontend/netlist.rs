// SPDX-License-Identifier: Apache-2.0

//! Mapped-netlist serialization: JSON and a line-oriented BLIF-like text.
//!
//! The BLIF-like form reads
//!
//! ```text
//! .model mapped
//! .inputs a b cin
//! .outputs sum cout
//! .gate CT_MAJ3 g1 a b cin'
//! .inv g1_n g1
//! .out sum g1_n
//! .end
//! ```
//!
//! where a trailing apostrophe on a primary input is the shared input
//! inverter, and `0`/`1` are constants when no signal carries that name.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::FrontendError;
use crate::xtalkmap::{Driver, GateInst, GateKind, InverterInst, MappedNetwork, MappedOutput, Pin};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NetlistFormat {
    Json,
    BlifLike,
}

impl FromStr for NetlistFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(NetlistFormat::Json),
            "blif" | "blif-like" => Ok(NetlistFormat::BlifLike),
            _ => Err(format!("unknown netlist format `{s}`")),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonPin {
    name: String,
    complemented: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonOutput {
    name: String,
    driver: String,
    complemented: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonGate {
    id: String,
    kind: GateKind,
    inputs: Vec<JsonPin>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonInverter {
    id: String,
    input: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonNetlist {
    inputs: Vec<String>,
    outputs: Vec<JsonOutput>,
    gates: Vec<JsonGate>,
    inverters: Vec<JsonInverter>,
}

pub fn emit_netlist(m: &MappedNetwork, format: NetlistFormat) -> String {
    match format {
        NetlistFormat::Json => emit_json(m),
        NetlistFormat::BlifLike => emit_blif_like(m),
    }
}

pub fn load_netlist(text: &str, format: NetlistFormat) -> Result<MappedNetwork, FrontendError> {
    match format {
        NetlistFormat::Json => load_json(text),
        NetlistFormat::BlifLike => load_blif_like(text),
    }
}

fn emit_json(m: &MappedNetwork) -> String {
    let pin = |p: &Pin| JsonPin {
        name: m.driver_name(p.driver),
        complemented: p.complemented,
    };
    let doc = JsonNetlist {
        inputs: m.inputs.clone(),
        outputs: m
            .outputs
            .iter()
            .map(|o| JsonOutput {
                name: o.name.clone(),
                driver: m.driver_name(o.pin.driver),
                complemented: o.pin.complemented,
            })
            .collect(),
        gates: m
            .gates
            .iter()
            .map(|g| JsonGate {
                id: g.id.clone(),
                kind: g.kind,
                inputs: g.pins.iter().map(pin).collect(),
            })
            .collect(),
        inverters: m
            .inverters
            .iter()
            .map(|i| JsonInverter {
                id: i.id.clone(),
                input: m.driver_name(i.input),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("netlist serializes");
    s.push('\n');
    s
}

/// Name table shared by both loaders.
struct Names(HashMap<String, Driver>);

impl Names {
    fn new(inputs: &[String], gates: &[&str], inverters: &[&str]) -> Result<Names, String> {
        let mut map = HashMap::new();
        let all = inputs
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), Driver::Input(i)))
            .chain(gates.iter().enumerate().map(|(g, n)| (*n, Driver::Gate(g))))
            .chain(inverters.iter().enumerate().map(|(k, n)| (*n, Driver::Inverter(k))));
        for (name, d) in all {
            if map.insert(name.to_string(), d).is_some() {
                return Err(format!("`{name}` is declared twice"));
            }
        }
        Ok(Names(map))
    }

    fn get(&self, name: &str) -> Result<Driver, String> {
        match (self.0.get(name), name) {
            (Some(d), _) => Ok(*d),
            (None, "0") => Ok(Driver::Const(false)),
            (None, "1") => Ok(Driver::Const(true)),
            (None, _) => Err(format!("unknown signal `{name}`")),
        }
    }
}

fn checked(m: MappedNetwork, line: usize) -> Result<MappedNetwork, FrontendError> {
    m.validate(None).map_err(|e| FrontendError::Netlist {
        line,
        msg: e.to_string(),
    })?;
    Ok(m)
}

fn load_json(text: &str) -> Result<MappedNetwork, FrontendError> {
    let doc: JsonNetlist = serde_json::from_str(text).map_err(|e| FrontendError::Netlist {
        line: e.line(),
        msg: e.to_string(),
    })?;
    let err = |msg: String| FrontendError::Netlist { line: 0, msg };
    let gate_ids: Vec<&str> = doc.gates.iter().map(|g| g.id.as_str()).collect();
    let inv_ids: Vec<&str> = doc.inverters.iter().map(|i| i.id.as_str()).collect();
    let names = Names::new(&doc.inputs, &gate_ids, &inv_ids).map_err(err)?;
    let pin = |name: &str, complemented: bool| names.get(name).map(|driver| Pin { driver, complemented });
    let mut gates = Vec::with_capacity(doc.gates.len());
    for g in &doc.gates {
        let pins = g
            .inputs
            .iter()
            .map(|p| pin(&p.name, p.complemented))
            .collect::<Result<_, _>>()
            .map_err(err)?;
        gates.push(GateInst {
            id: g.id.clone(),
            kind: g.kind,
            pins,
        });
    }
    let mut inverters = Vec::with_capacity(doc.inverters.len());
    for i in &doc.inverters {
        inverters.push(InverterInst {
            id: i.id.clone(),
            input: names.get(&i.input).map_err(err)?,
        });
    }
    let mut outputs = Vec::with_capacity(doc.outputs.len());
    for o in &doc.outputs {
        outputs.push(MappedOutput {
            name: o.name.clone(),
            pin: pin(&o.driver, o.complemented).map_err(err)?,
        });
    }
    checked(
        MappedNetwork {
            inputs: doc.inputs,
            gates,
            inverters,
            outputs,
        },
        0,
    )
}

fn emit_blif_like(m: &MappedNetwork) -> String {
    let pin = |p: &Pin| {
        let mut s = m.driver_name(p.driver);
        if p.complemented {
            s.push('\'');
        }
        s
    };
    let mut out = String::from(".model mapped\n");
    let _ = writeln!(
        out,
        ".inputs{}",
        m.inputs.iter().map(|n| format!(" {n}")).collect::<String>()
    );
    let _ = writeln!(
        out,
        ".outputs{}",
        m.outputs.iter().map(|o| format!(" {}", o.name)).collect::<String>()
    );
    for g in &m.gates {
        let pins: String = g.pins.iter().map(|p| format!(" {}", pin(p))).collect();
        let _ = writeln!(out, ".gate {} {}{pins}", g.kind, g.id);
    }
    for i in &m.inverters {
        let _ = writeln!(out, ".inv {} {}", i.id, m.driver_name(i.input));
    }
    for o in &m.outputs {
        let _ = writeln!(out, ".out {} {}", o.name, pin(&o.pin));
    }
    out.push_str(".end\n");
    out
}

fn load_blif_like(text: &str) -> Result<MappedNetwork, FrontendError> {
    let mut inputs: Vec<String> = Vec::new();
    let mut declared_outputs: Vec<String> = Vec::new();
    let mut gates: Vec<(usize, GateKind, String, Vec<String>)> = Vec::new();
    let mut invs: Vec<(usize, String, String)> = Vec::new();
    let mut outs: Vec<(usize, String, String)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |msg: String| FrontendError::Netlist { line, msg };
        let body = raw.split('#').next().unwrap_or("");
        let mut tok = body.split_whitespace();
        let Some(head) = tok.next() else { continue };
        let rest: Vec<String> = tok.map(str::to_string).collect();
        match head {
            ".model" | ".end" => {}
            ".inputs" => inputs.extend(rest),
            ".outputs" => declared_outputs.extend(rest),
            ".gate" => {
                let [kind, id, pins @ ..] = rest.as_slice() else {
                    return Err(err("`.gate` needs a kind and an id".into()));
                };
                let kind = kind.parse::<GateKind>().map_err(err)?;
                gates.push((line, kind, id.clone(), pins.to_vec()));
            }
            ".inv" | ".out" => {
                let [a, b] = rest.as_slice() else {
                    return Err(err(format!("`{head}` takes exactly two names")));
                };
                let target = if head == ".inv" { &mut invs } else { &mut outs };
                target.push((line, a.clone(), b.clone()));
            }
            other => return Err(err(format!("unknown directive `{other}`"))),
        }
    }
    let gate_ids: Vec<&str> = gates.iter().map(|g| g.2.as_str()).collect();
    let inv_ids: Vec<&str> = invs.iter().map(|i| i.1.as_str()).collect();
    let names = Names::new(&inputs, &gate_ids, &inv_ids).map_err(|msg| FrontendError::Netlist { line: 0, msg })?;
    let pin = |tok: &str, line: usize| {
        let (name, complemented) = match tok.strip_suffix('\'') {
            Some(n) => (n, true),
            None => (tok, false),
        };
        names
            .get(name)
            .map(|driver| Pin { driver, complemented })
            .map_err(|msg| FrontendError::Netlist { line, msg })
    };
    let mut m = MappedNetwork {
        inputs: inputs.clone(),
        ..Default::default()
    };
    for (line, kind, id, pins) in &gates {
        m.gates.push(GateInst {
            id: id.clone(),
            kind: *kind,
            pins: pins.iter().map(|p| pin(p, *line)).collect::<Result<_, _>>()?,
        });
    }
    for (line, id, src) in &invs {
        m.inverters.push(InverterInst {
            id: id.clone(),
            input: names
                .get(src)
                .map_err(|msg| FrontendError::Netlist { line: *line, msg })?,
        });
    }
    for (line, name, src) in &outs {
        m.outputs.push(MappedOutput {
            name: name.clone(),
            pin: pin(src, *line)?,
        });
    }
    let listed: Vec<&String> = m.outputs.iter().map(|o| &o.name).collect();
    if listed != declared_outputs.iter().collect::<Vec<_>>() {
        return Err(FrontendError::Netlist {
            line: 0,
            msg: "`.out` lines do not match the `.outputs` list".into(),
        });
    }
    checked(m, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> MappedNetwork {
        MappedNetwork {
            inputs: vec!["a".into(), "b".into(), "c".into()],
            gates: vec![
                GateInst {
                    id: "g1".into(),
                    kind: GateKind::Maj3,
                    pins: vec![Pin::input(0, false), Pin::input(1, true), Pin::input(2, false)],
                },
                GateInst {
                    id: "g2".into(),
                    kind: GateKind::Oai21,
                    pins: vec![
                        Pin::new(Driver::Inverter(0)),
                        Pin::input(2, true),
                        Pin::new(Driver::Const(true)),
                    ],
                },
            ],
            inverters: vec![InverterInst {
                id: "g1_n".into(),
                input: Driver::Gate(0),
            }],
            outputs: vec![
                MappedOutput {
                    name: "y".into(),
                    pin: Pin::new(Driver::Gate(1)),
                },
                MappedOutput {
                    name: "z".into(),
                    pin: Pin::input(1, true),
                },
            ],
        }
    }

    #[test]
    fn round_trips_in_both_formats() {
        let m = sample();
        for f in [NetlistFormat::Json, NetlistFormat::BlifLike] {
            let text = emit_netlist(&m, f);
            assert_eq!(load_netlist(&text, f).unwrap(), m, "{text}");
        }
    }

    #[test]
    fn empty_network_has_empty_gate_list() {
        let m = MappedNetwork::default();
        let text = emit_netlist(&m, NetlistFormat::Json);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["gates"], serde_json::json!([]));
        assert_eq!(load_netlist(&text, NetlistFormat::Json).unwrap(), m);
    }

    #[test]
    fn json_uses_the_documented_keys() {
        let v: serde_json::Value = serde_json::from_str(&emit_netlist(&sample(), NetlistFormat::Json)).unwrap();
        assert_eq!(v["gates"][0]["kind"], "CT_MAJ3");
        assert_eq!(
            v["gates"][0]["inputs"][1],
            serde_json::json!({"name": "b", "complemented": true})
        );
        assert_eq!(v["inverters"][0], serde_json::json!({"id": "g1_n", "input": "g1"}));
        assert_eq!(
            v["outputs"][1],
            serde_json::json!({"name": "z", "driver": "b", "complemented": true})
        );
    }

    #[test]
    fn loader_rejects_bad_references() {
        let bad = ".inputs a\n.outputs y\n.gate CT_AND2 g a q\n.out y g\n";
        match load_netlist(bad, NetlistFormat::BlifLike) {
            Err(FrontendError::Netlist { line: 3, .. }) => {}
            other => panic!("{other:?}"),
        }
        let forward = ".inputs a b\n.outputs y\n.gate CT_AND2 g a h\n.gate CT_OR2 h a b\n.out y g\n";
        assert!(load_netlist(forward, NetlistFormat::BlifLike).is_err());
    }
}
