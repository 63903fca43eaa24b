// SPDX-License-Identifier: Apache-2.0

use std::collections::HashMap;

use super::gate::{GateKind, GateLibrary};
use super::mapped::{Driver, MappedNetwork, MappedOutput, Pin};
use super::{compact, Builder, MapError, Val};
use crate::costing::CostTable;

fn core(costs: &CostTable, kind: GateKind) -> u32 {
    costs.core(kind).unwrap_or(u32::MAX / 64)
}

fn for_each_pin(m: &mut MappedNetwork, mut f: impl FnMut(&mut Pin)) {
    for g in &mut m.gates {
        for p in &mut g.pins {
            f(p);
        }
    }
    for o in &mut m.outputs {
        f(&mut o.pin);
    }
}

/// Replaces gates by their duals where that saves inverters: a gate read
/// only through its inverter is flipped and the inverter dropped; a gate
/// read in both polarities takes whichever of the pair has the cheaper
/// core.
pub fn absorb_inverted_fanins(m: &MappedNetwork, lib: &GateLibrary, costs: &CostTable) -> MappedNetwork {
    let mut m = m.clone();
    let inv = costs.inverter();
    let mut first_inv: HashMap<usize, usize> = HashMap::new();
    let mut inv_count: HashMap<usize, usize> = HashMap::new();
    let mut chained = vec![false; m.inverters.len()];
    for (k, i) in m.inverters.iter().enumerate() {
        match i.input {
            Driver::Gate(g) => {
                first_inv.entry(g).or_insert(k);
                *inv_count.entry(g).or_default() += 1;
            }
            Driver::Inverter(j) => chained[j] = true,
            _ => {}
        }
    }
    let mut pos_refs = vec![0usize; m.gates.len()];
    let mut neg_refs = vec![0usize; m.inverters.len()];
    for p in m
        .gates
        .iter()
        .flat_map(|g| g.pins.iter())
        .chain(m.outputs.iter().map(|o| &o.pin))
    {
        match p.driver {
            Driver::Gate(g) => pos_refs[g] += 1,
            Driver::Inverter(k) => neg_refs[k] += 1,
            _ => {}
        }
    }
    let mut gates: Vec<(usize, usize)> = first_inv.into_iter().collect();
    gates.sort_unstable();
    for (g, k) in gates {
        if inv_count[&g] > 1 || chained[k] || neg_refs[k] == 0 {
            continue;
        }
        let kind = m.gates[g].kind;
        let Some(dual) = lib.dual(kind) else { continue };
        let only_negative = pos_refs[g] == 0;
        let flip = if only_negative {
            core(costs, dual) <= core(costs, kind) + inv
        } else {
            core(costs, dual) < core(costs, kind)
        };
        if !flip {
            continue;
        }
        m.gates[g].kind = dual;
        for_each_pin(&mut m, |p| {
            if p.driver == Driver::Inverter(k) {
                p.driver = Driver::Gate(g);
            } else if p.driver == Driver::Gate(g) {
                p.driver = Driver::Inverter(k);
            }
        });
    }
    compact(&m)
}

fn canonical_pins(kind: GateKind, pins: &[Val]) -> Vec<Val> {
    let classes = kind.pin_classes();
    let mut out = pins.to_vec();
    for c in 0..=classes.iter().copied().max().unwrap_or(0) {
        let idx: Vec<usize> = (0..pins.len()).filter(|i| classes[*i] == c).collect();
        let mut vals: Vec<Val> = idx.iter().map(|i| pins[*i]).collect();
        vals.sort();
        for (i, v) in idx.into_iter().zip(vals) {
            out[i] = v;
        }
    }
    out
}

/// Structural clean-up: merges identical gates, turns a gate that is the
/// dual of an existing one into an inverter of it, collapses inverter
/// chains and inverters on inputs, shares inverters, and drops cells no
/// output uses.
pub fn redundancy_check(m: &MappedNetwork, costs: &CostTable) -> MappedNetwork {
    let inv = costs.inverter();
    let mut b = Builder::new(m.inputs.clone());
    b.reserve(m.gates.iter().map(|g| &g.id));
    let mut preferred: HashMap<usize, String> = HashMap::new();
    for k in 0..m.inverters.len() {
        let (root, odd) = chain(m, k);
        if let (Driver::Gate(g), true) = (root, odd) {
            preferred.entry(g).or_insert_with(|| m.inverters[k].id.clone());
        }
    }
    let mut gate_val: Vec<Val> = Vec::with_capacity(m.gates.len());
    let old_val = |d: Driver, gate_val: &[Val]| -> Val {
        match d {
            Driver::Input(i) => Val::new(Driver::Input(i), false),
            Driver::Const(c) => Val::new(Driver::Const(c), false),
            Driver::Gate(g) => gate_val[g],
            Driver::Inverter(k) => {
                let (root, odd) = chain(m, k);
                let v = match root {
                    Driver::Gate(g) => gate_val[g],
                    other => Val::new(other, false),
                };
                if odd {
                    v.negate()
                } else {
                    v
                }
            }
        }
    };
    let mut table: HashMap<(GateKind, Vec<Val>), usize> = HashMap::new();
    for (j, g) in m.gates.iter().enumerate() {
        let pv: Vec<Val> = g
            .pins
            .iter()
            .map(|p| {
                let v = old_val(p.driver, &gate_val);
                if p.complemented {
                    v.negate()
                } else {
                    v
                }
            })
            .collect();
        let key = canonical_pins(g.kind, &pv);
        if let Some(&n) = table.get(&(g.kind, key.clone())) {
            gate_val.push(Val::new(Driver::Gate(n), false));
            continue;
        }
        if let Some(&n) = table.get(&(g.kind.dual(), key.clone())) {
            if b.has_inverter(n) || core(costs, g.kind) >= inv {
                gate_val.push(Val::new(Driver::Gate(n), true));
                continue;
            }
        }
        let pins = pv.into_iter().map(|v| b.pin(v)).collect();
        let n = b.gate_exact(&g.id, g.kind, pins);
        if let Some(name) = preferred.get(&j) {
            b.inv_names.insert(n, name.clone());
        }
        table.insert((g.kind, key), n);
        gate_val.push(Val::new(Driver::Gate(n), false));
    }
    let outputs: Vec<MappedOutput> = m
        .outputs
        .iter()
        .map(|o| {
            let v = old_val(o.pin.driver, &gate_val);
            MappedOutput {
                name: o.name.clone(),
                pin: b.pin(if o.pin.complemented { v.negate() } else { v }),
            }
        })
        .collect();
    b.m.outputs = outputs;
    compact(&b.m)
}

/// Root driver of an inverter chain and whether the chain has odd length.
fn chain(m: &MappedNetwork, k: usize) -> (Driver, bool) {
    let mut odd = true;
    let mut d = m.inverters[k].input;
    while let Driver::Inverter(j) = d {
        odd = !odd;
        d = m.inverters[j].input;
    }
    (d, odd)
}

/// Alternates inverter absorption and redundancy removal until stable.
pub(crate) fn optimize(m: MappedNetwork, lib: &GateLibrary, costs: &CostTable) -> Result<MappedNetwork, MapError> {
    let mut cur = compact(&m);
    for _ in 0..16 {
        let next = redundancy_check(&absorb_inverted_fanins(&cur, lib, costs), costs);
        if next == cur {
            break;
        }
        cur = next;
    }
    Ok(cur)
}
