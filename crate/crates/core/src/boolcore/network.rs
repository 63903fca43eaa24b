// SPDX-License-Identifier: Apache-2.0

use std::collections::HashSet;

use super::sop::{Literal, Sop};
use super::BoolError;

/// Reference to a value in a [`Network`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Signal {
    Input(usize),
    Node(usize),
    Const(bool),
}

/// A logic node: a cover over its fanin slots. Literal `var = i` reads
/// `fanins[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Node {
    pub name: String,
    pub fanins: Vec<Signal>,
    pub func: Sop,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Output {
    pub name: String,
    pub signal: Signal,
    pub complemented: bool,
}

/// Acyclic multi-level Boolean network. Nodes are stored in topological
/// order: a node only reads primary inputs and earlier nodes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Network {
    pub inputs: Vec<String>,
    pub nodes: Vec<Node>,
    pub outputs: Vec<Output>,
}

impl Network {
    pub fn new(inputs: Vec<String>, nodes: Vec<Node>, outputs: Vec<Output>) -> Result<Self, BoolError> {
        let net = Self { inputs, nodes, outputs };
        net.validate()?;
        Ok(net)
    }

    pub fn validate(&self) -> Result<(), BoolError> {
        let mut names = HashSet::new();
        for name in &self.inputs {
            if !names.insert(name.as_str()) {
                return Err(BoolError::Invalid(format!("duplicate input `{name}`")));
            }
        }
        for (i, node) in self.nodes.iter().enumerate() {
            if !names.insert(node.name.as_str()) {
                return Err(BoolError::Invalid(format!("duplicate name `{}`", node.name)));
            }
            let mut seen = HashSet::new();
            for f in &node.fanins {
                match *f {
                    Signal::Input(k) if k < self.inputs.len() => {}
                    Signal::Node(k) if k < i => {}
                    Signal::Const(_) => {
                        return Err(BoolError::Invalid(format!(
                            "node `{}` reads a constant fanin",
                            node.name
                        )))
                    }
                    _ => {
                        return Err(BoolError::Invalid(format!(
                            "node `{}` has an out-of-order or dangling fanin",
                            node.name
                        )))
                    }
                }
                if !seen.insert(*f) {
                    return Err(BoolError::Invalid(format!("node `{}` lists a fanin twice", node.name)));
                }
            }
            if let Some(v) = node.func.support().last() {
                if *v as usize >= node.fanins.len() {
                    return Err(BoolError::Invalid(format!(
                        "node `{}` reads slot {v} but has {} fanins",
                        node.name,
                        node.fanins.len()
                    )));
                }
            }
        }
        for out in &self.outputs {
            match out.signal {
                Signal::Input(k) if k < self.inputs.len() => {}
                Signal::Node(k) if k < self.nodes.len() => {}
                Signal::Const(_) => {}
                _ => return Err(BoolError::Invalid(format!("output `{}` does not resolve", out.name))),
            }
        }
        Ok(())
    }

    pub fn num_inputs(&self) -> usize {
        self.inputs.len()
    }

    pub fn input_index(&self, name: &str) -> Option<usize> {
        self.inputs.iter().position(|n| n == name)
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.name == name)
    }

    pub fn signal_name(&self, s: Signal) -> String {
        match s {
            Signal::Input(i) => self.inputs[i].clone(),
            Signal::Node(i) => self.nodes[i].name.clone(),
            Signal::Const(v) => u8::from(v).to_string(),
        }
    }

    pub fn max_fanin(&self) -> usize {
        self.nodes.iter().map(|n| n.fanins.len()).max().unwrap_or(0)
    }

    /// Fanout count per node (node fanins plus outputs).
    pub fn fanout_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.nodes.len()];
        for node in &self.nodes {
            for f in &node.fanins {
                if let Signal::Node(k) = f {
                    counts[*k] += 1;
                }
            }
        }
        for out in &self.outputs {
            if let Signal::Node(k) = out.signal {
                counts[k] += 1;
            }
        }
        counts
    }

    /// Evaluates 64 assignments at once. `inputs[i]` holds the words of
    /// primary input `i`; `scratch` is resized to one word per node.
    pub fn simulate_word(&self, inputs: &[u64], scratch: &mut Vec<u64>) {
        scratch.clear();
        let mut local = Vec::with_capacity(8);
        for node in &self.nodes {
            local.clear();
            for f in &node.fanins {
                local.push(match *f {
                    Signal::Input(k) => inputs[k],
                    Signal::Node(k) => scratch[k],
                    Signal::Const(v) => {
                        if v {
                            !0
                        } else {
                            0
                        }
                    }
                });
            }
            scratch.push(node.func.eval_word(&local));
        }
    }

    pub fn signal_word(&self, s: Signal, inputs: &[u64], nodes: &[u64]) -> u64 {
        match s {
            Signal::Input(k) => inputs[k],
            Signal::Node(k) => nodes[k],
            Signal::Const(v) => {
                if v {
                    !0
                } else {
                    0
                }
            }
        }
    }

    /// Output values for one assignment (input `i` = `assignment[i]`).
    pub fn eval(&self, assignment: &[bool]) -> Vec<bool> {
        let words: Vec<u64> = assignment.iter().map(|b| if *b { !0 } else { 0 }).collect();
        let mut scratch = Vec::new();
        self.simulate_word(&words, &mut scratch);
        self.outputs
            .iter()
            .map(|o| (self.signal_word(o.signal, &words, &scratch) & 1 == 1) ^ o.complemented)
            .collect()
    }

    /// Removes nodes that no output reaches, renumbering the rest.
    #[must_use]
    pub fn without_dangling(&self) -> Network {
        let mut live = vec![false; self.nodes.len()];
        for o in &self.outputs {
            if let Signal::Node(k) = o.signal {
                live[k] = true;
            }
        }
        for i in (0..self.nodes.len()).rev() {
            if live[i] {
                for f in &self.nodes[i].fanins {
                    if let Signal::Node(k) = f {
                        live[*k] = true;
                    }
                }
            }
        }
        let mut remap = vec![usize::MAX; self.nodes.len()];
        let mut nodes = Vec::new();
        for (i, node) in self.nodes.iter().enumerate() {
            if live[i] {
                remap[i] = nodes.len();
                let fanins = node
                    .fanins
                    .iter()
                    .map(|f| match *f {
                        Signal::Node(k) => Signal::Node(remap[k]),
                        other => other,
                    })
                    .collect();
                nodes.push(Node {
                    name: node.name.clone(),
                    fanins,
                    func: node.func.clone(),
                });
            }
        }
        let outputs = self
            .outputs
            .iter()
            .map(|o| Output {
                name: o.name.clone(),
                signal: match o.signal {
                    Signal::Node(k) => Signal::Node(remap[k]),
                    other => other,
                },
                complemented: o.complemented,
            })
            .collect();
        Network {
            inputs: self.inputs.clone(),
            nodes,
            outputs,
        }
    }

    /// Renders a node's function with fanin names, e.g. `a*b' + c`.
    pub fn node_expression(&self, idx: usize) -> String {
        let node = &self.nodes[idx];
        let name = |v: u32| self.signal_name(node.fanins[v as usize]);
        node.func.to_string_with(name)
    }
}

/// Convenience constructor used by tests and generators: a node whose cover
/// is given over explicit fanins.
pub fn node(name: &str, fanins: Vec<Signal>, cubes: &[&[(usize, bool)]]) -> Node {
    Node {
        name: name.to_string(),
        fanins,
        func: Sop::from_literal_lists(
            cubes
                .iter()
                .map(|c| c.iter().map(|(v, neg)| Literal::new(*v as u32, *neg))),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_rejects_forward_references() {
        let net = Network {
            inputs: vec!["a".into()],
            nodes: vec![node("g", vec![Signal::Node(0)], &[&[(0, false)]])],
            outputs: vec![],
        };
        assert!(net.validate().is_err());
    }

    #[test]
    fn validate_rejects_slot_overflow() {
        let net = Network {
            inputs: vec!["a".into()],
            nodes: vec![node("g", vec![Signal::Input(0)], &[&[(1, false)]])],
            outputs: vec![],
        };
        assert!(net.validate().is_err());
    }

    #[test]
    fn dangling_nodes_are_removed() {
        let net = Network::new(
            vec!["a".into(), "b".into()],
            vec![
                node(
                    "x",
                    vec![Signal::Input(0), Signal::Input(1)],
                    &[&[(0, false), (1, false)]],
                ),
                node("y", vec![Signal::Input(0)], &[&[(0, true)]]),
                node(
                    "z",
                    vec![Signal::Node(0), Signal::Input(1)],
                    &[&[(0, false)], &[(1, false)]],
                ),
            ],
            vec![Output {
                name: "o".into(),
                signal: Signal::Node(2),
                complemented: false,
            }],
        )
        .unwrap();
        let pruned = net.without_dangling();
        assert_eq!(pruned.nodes.len(), 2);
        assert_eq!(pruned.outputs[0].signal, Signal::Node(1));
        assert_eq!(pruned.eval(&[true, false]), net.eval(&[true, false]));
    }
}
