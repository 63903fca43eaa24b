// SPDX-License-Identifier: Apache-2.0

//! Test-side oracles. These evaluate networks and netlists from their raw
//! structure with their own gate semantics, sharing nothing with the
//! library's simulator.

#![allow(dead_code)]

use std::path::PathBuf;

use xtalk::boolcore::{Network, Signal, Sop};
use xtalk::xtalkmap::{Driver, GateKind, MappedNetwork};

pub fn bench_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../benchmarks")
}

/// 64 consecutive rows of input `i` starting at row `64 * w`; input 0 is
/// the least significant row bit.
fn input_word(i: usize, w: usize) -> u64 {
    if i < 6 {
        let mut x = 0u64;
        for r in 0..64 {
            if (r >> i) & 1 == 1 {
                x |= 1 << r;
            }
        }
        x
    } else if (w >> (i - 6)) & 1 == 1 {
        u64::MAX
    } else {
        0
    }
}

fn cover_word(f: &Sop, slot: impl Fn(u32) -> u64) -> u64 {
    let mut acc = 0u64;
    for c in f.cubes() {
        let mut t = u64::MAX;
        for l in c.literals() {
            let v = slot(l.var);
            t &= if l.complemented { !v } else { v };
        }
        acc |= t;
    }
    acc
}

fn network_word(net: &Network, ins: &[u64]) -> Vec<(String, u64)> {
    let mut vals: Vec<u64> = Vec::with_capacity(net.nodes.len());
    let sig = |s: Signal, vals: &[u64]| match s {
        Signal::Input(i) => ins[i],
        Signal::Node(k) => vals[k],
        Signal::Const(c) => {
            if c {
                u64::MAX
            } else {
                0
            }
        }
    };
    for n in &net.nodes {
        let fan: Vec<u64> = n.fanins.iter().map(|s| sig(*s, &vals)).collect();
        vals.push(cover_word(&n.func, |v| fan[v as usize]));
    }
    net.outputs
        .iter()
        .map(|o| {
            let v = sig(o.signal, &vals);
            (o.name.clone(), if o.complemented { !v } else { v })
        })
        .collect()
}

/// Gate semantics written out independently of the library.
pub fn gate_word(kind: GateKind, p: &[u64]) -> u64 {
    let maj = |a: u64, b: u64, c: u64| (a & b) | (b & c) | (a & c);
    match kind {
        GateKind::Inv => !p[0],
        GateKind::And2 => p[0] & p[1],
        GateKind::And3 => p[0] & p[1] & p[2],
        GateKind::Or2 => p[0] | p[1],
        GateKind::Or3 => p[0] | p[1] | p[2],
        GateKind::Nand2 => !(p[0] & p[1]),
        GateKind::Nand3 => !(p[0] & p[1] & p[2]),
        GateKind::Nor2 => !(p[0] | p[1]),
        GateKind::Nor3 => !(p[0] | p[1] | p[2]),
        GateKind::Maj3 => maj(p[0], p[1], p[2]),
        GateKind::Min3 => !maj(p[0], p[1], p[2]),
        GateKind::Ao21 => (p[0] & p[1]) | p[2],
        GateKind::Oa21 => (p[0] | p[1]) & p[2],
        GateKind::Aoi21 => !((p[0] & p[1]) | p[2]),
        GateKind::Oai21 => !((p[0] | p[1]) & p[2]),
        // five-input majority over a, b, c, d, d
        GateKind::Wmaj4 => (p[0] & p[1] & p[2]) | (p[3] & (p[0] | p[1] | p[2])),
        GateKind::Wmin4 => !((p[0] & p[1] & p[2]) | (p[3] & (p[0] | p[1] | p[2]))),
    }
}

fn mapped_word(m: &MappedNetwork, ins: &[u64]) -> Vec<(String, u64)> {
    let mut gates: Vec<Option<u64>> = vec![None; m.gates.len()];
    let mut invs: Vec<Option<u64>> = vec![None; m.inverters.len()];
    fn drive(m: &MappedNetwork, d: Driver, ins: &[u64], gates: &[Option<u64>], invs: &mut Vec<Option<u64>>) -> u64 {
        match d {
            Driver::Input(i) => ins[i],
            Driver::Const(c) => {
                if c {
                    u64::MAX
                } else {
                    0
                }
            }
            Driver::Gate(g) => gates[g].expect("gate read before it is computed"),
            Driver::Inverter(k) => {
                if let Some(v) = invs[k] {
                    return v;
                }
                let v = !drive(m, m.inverters[k].input, ins, gates, invs);
                invs[k] = Some(v);
                v
            }
        }
    }
    for (j, g) in m.gates.iter().enumerate() {
        let pins: Vec<u64> = g
            .pins
            .iter()
            .map(|p| {
                let v = drive(m, p.driver, ins, &gates, &mut invs);
                if p.complemented {
                    !v
                } else {
                    v
                }
            })
            .collect();
        gates[j] = Some(gate_word(g.kind, &pins));
    }
    m.outputs
        .iter()
        .map(|o| {
            let v = drive(m, o.pin.driver, ins, &gates, &mut invs);
            (o.name.clone(), if o.pin.complemented { !v } else { v })
        })
        .collect()
}

/// Lowest row where two evaluators disagree on some output (matched by
/// name), over inputs named in `inputs`. `None` when they agree everywhere.
fn first_difference(
    inputs: &[String],
    b_inputs: &[String],
    a: impl Fn(&[u64]) -> Vec<(String, u64)>,
    b: impl Fn(&[u64]) -> Vec<(String, u64)>,
) -> Option<u64> {
    let n = inputs.len();
    let perm: Vec<usize> = b_inputs
        .iter()
        .map(|name| inputs.iter().position(|x| x == name).expect("same input names"))
        .collect();
    let words = if n <= 6 { 1 } else { 1usize << (n - 6) };
    let mask = if n >= 6 { u64::MAX } else { (1u64 << (1 << n)) - 1 };
    for w in 0..words {
        let ins: Vec<u64> = (0..n).map(|i| input_word(i, w)).collect();
        let ins_b: Vec<u64> = perm.iter().map(|&i| ins[i]).collect();
        let va = a(&ins);
        let vb = b(&ins_b);
        let mut diff = 0u64;
        for (name, x) in &va {
            let y = vb.iter().find(|(m, _)| m == name).expect("same output names").1;
            diff |= (x ^ y) & mask;
        }
        if diff != 0 {
            return Some(64 * w as u64 + u64::from(diff.trailing_zeros()));
        }
    }
    None
}

/// Every differing row of two networks with at most six inputs.
pub fn network_differences(a: &Network, b: &Network) -> Vec<u64> {
    assert!(a.inputs.len() <= 6);
    let ins: Vec<u64> = (0..a.inputs.len()).map(|i| input_word(i, 0)).collect();
    let ins_b: Vec<u64> = b
        .inputs
        .iter()
        .map(|n| ins[a.inputs.iter().position(|x| x == n).expect("same input names")])
        .collect();
    let (va, vb) = (network_word(a, &ins), network_word(b, &ins_b));
    let mut diff = 0u64;
    for (name, x) in &va {
        diff |= x ^ vb.iter().find(|(m, _)| m == name).expect("same output names").1;
    }
    (0..1u64 << a.inputs.len()).filter(|r| (diff >> r) & 1 == 1).collect()
}

pub fn network_vs_mapped(net: &Network, m: &MappedNetwork) -> Option<u64> {
    first_difference(&net.inputs, &m.inputs, |i| network_word(net, i), |i| mapped_word(m, i))
}

pub fn network_vs_network(a: &Network, b: &Network) -> Option<u64> {
    first_difference(&a.inputs, &b.inputs, |i| network_word(a, i), |i| network_word(b, i))
}

/// Truth table of a cover over variables 0..3.
pub fn table3(f: &Sop) -> u8 {
    let w = cover_word(f, |v| input_word(v as usize, 0));
    (w & 0xFF) as u8
}

/// The cover listing every minterm of `t` over three variables.
pub fn minterm_cover(t: u8) -> Sop {
    use xtalk::boolcore::Literal;
    Sop::from_literal_lists(
        (0..8u32)
            .filter(|r| (t >> r) & 1 == 1)
            .map(|r| (0..3u32).map(move |v| Literal::new(v, (r >> v) & 1 == 0))),
    )
}
