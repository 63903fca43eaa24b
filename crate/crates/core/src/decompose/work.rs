// SPDX-License-Identifier: Apache-2.0

//! Global-variable form: every node cover reads network-wide variables
//! (input `i` is variable `i`, node `j` is variable `inputs.len() + j`), so
//! passes can rewrite covers without juggling fanin slots.

use std::collections::HashSet;

use crate::boolcore::{input_word, minimal_cover, Literal, Network, Node, Output, Signal, Sop};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Ref {
    Const(bool),
    Lit(Literal),
}

#[derive(Clone, Debug)]
pub(crate) struct Work {
    pub inputs: Vec<String>,
    pub names: Vec<String>,
    pub funcs: Vec<Sop>,
    pub outputs: Vec<(String, Ref)>,
}

fn negate_if(l: Literal, neg: bool) -> Literal {
    if neg {
        l.negate()
    } else {
        l
    }
}

impl Work {
    pub fn from_network(net: &Network) -> Work {
        let n = net.inputs.len() as u32;
        let var_of = |s: Signal| match s {
            Signal::Input(i) => i as u32,
            Signal::Node(k) => n + k as u32,
            Signal::Const(_) => unreachable!("constants are restricted first"),
        };
        let funcs = net
            .nodes
            .iter()
            .map(|node| {
                let mut f = node.func.clone();
                for (slot, s) in node.fanins.iter().enumerate() {
                    if let Signal::Const(c) = s {
                        f = f.restrict(slot as u32, *c);
                    }
                }
                f.map_vars(&|v| Literal::pos(var_of(node.fanins[v as usize])))
            })
            .collect();
        let outputs = net
            .outputs
            .iter()
            .map(|o| {
                let r = match o.signal {
                    Signal::Const(c) => Ref::Const(c ^ o.complemented),
                    s => Ref::Lit(Literal::new(var_of(s), o.complemented)),
                };
                (o.name.clone(), r)
            })
            .collect();
        Work {
            inputs: net.inputs.clone(),
            names: net.nodes.iter().map(|n| n.name.clone()).collect(),
            funcs,
            outputs,
        }
    }

    pub fn n_in(&self) -> u32 {
        self.inputs.len() as u32
    }

    /// Node index behind a variable, if it is a node.
    pub fn node_of(&self, var: u32) -> Option<usize> {
        var.checked_sub(self.n_in()).map(|k| k as usize)
    }

    pub fn push(&mut self, name: String, func: Sop) -> u32 {
        self.names.push(name);
        self.funcs.push(func);
        self.n_in() + self.funcs.len() as u32 - 1
    }

    /// Topological order; an already ordered network keeps its order.
    pub fn order(&self) -> Vec<usize> {
        let mut state = vec![0u8; self.funcs.len()];
        let mut out = Vec::with_capacity(self.funcs.len());
        for root in 0..self.funcs.len() {
            if state[root] != 0 {
                continue;
            }
            let mut stack = vec![(root, false)];
            while let Some((j, expanded)) = stack.pop() {
                if expanded {
                    state[j] = 2;
                    out.push(j);
                    continue;
                }
                if state[j] != 0 {
                    continue;
                }
                state[j] = 1;
                stack.push((j, true));
                for v in self.funcs[j].support().into_iter().rev() {
                    if let Some(k) = self.node_of(v) {
                        assert!(state[k] != 1, "cycle through node `{}`", self.names[k]);
                        if state[k] == 0 {
                            stack.push((k, false));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn to_network(&self) -> Network {
        let order = self.order();
        let n = self.n_in();
        let mut pos = vec![usize::MAX; self.funcs.len()];
        for (p, j) in order.iter().enumerate() {
            pos[*j] = p;
        }
        let signal = |v: u32| match v.checked_sub(n) {
            None => Signal::Input(v as usize),
            Some(k) => Signal::Node(pos[k as usize]),
        };
        let nodes = order
            .iter()
            .map(|&j| {
                let support = self.funcs[j].support();
                let func = self.funcs[j]
                    .map_vars(&|v| Literal::pos(support.binary_search(&v).expect("support variable") as u32));
                Node {
                    name: self.names[j].clone(),
                    fanins: support.iter().map(|v| signal(*v)).collect(),
                    func,
                }
            })
            .collect();
        let outputs = self
            .outputs
            .iter()
            .map(|(name, r)| match r {
                Ref::Const(c) => Output {
                    name: name.clone(),
                    signal: Signal::Const(*c),
                    complemented: false,
                },
                Ref::Lit(l) => Output {
                    name: name.clone(),
                    signal: signal(l.var),
                    complemented: l.complemented,
                },
            })
            .collect();
        Network {
            inputs: self.inputs.clone(),
            nodes,
            outputs,
        }
    }

    fn resolve(&self, r: Ref) -> Ref {
        match r {
            Ref::Lit(l) => match self.node_of(l.var) {
                Some(k) => {
                    let f = &self.funcs[k];
                    if let Some(c) = f.as_constant() {
                        Ref::Const(c ^ l.complemented)
                    } else if let Some(m) = f.as_literal() {
                        Ref::Lit(negate_if(m, l.complemented))
                    } else {
                        r
                    }
                }
                None => r,
            },
            c => c,
        }
    }

    /// One round of constant and alias propagation plus local
    /// simplification. Returns whether anything changed.
    pub fn sweep_once(&mut self) -> bool {
        let mut changed = false;
        for j in 0..self.funcs.len() {
            let mut f = self.funcs[j].clone();
            for v in f.support() {
                let Some(k) = self.node_of(v) else { continue };
                if k == j {
                    continue;
                }
                let g = &self.funcs[k];
                if let Some(c) = g.as_constant() {
                    f = f.restrict(v, c);
                } else if let Some(m) = g.as_literal() {
                    f = f.map_vars(&|x| if x == v { m } else { Literal::pos(x) });
                }
            }
            let f = simplify(&f);
            if f != self.funcs[j] {
                self.funcs[j] = f;
                changed = true;
            }
        }
        for i in 0..self.outputs.len() {
            let r = self.resolve(self.outputs[i].1);
            if r != self.outputs[i].1 {
                self.outputs[i].1 = r;
                changed = true;
            }
        }
        changed
    }

    pub fn sweep_to_fixpoint(&mut self) {
        while self.sweep_once() {}
    }

    /// Keeps only nodes some output depends on, preserving index order.
    pub fn remove_dangling(&mut self) {
        let mut live = vec![false; self.funcs.len()];
        let mut stack: Vec<usize> = self
            .outputs
            .iter()
            .filter_map(|(_, r)| match r {
                Ref::Lit(l) => self.node_of(l.var),
                Ref::Const(_) => None,
            })
            .collect();
        while let Some(j) = stack.pop() {
            if live[j] {
                continue;
            }
            live[j] = true;
            stack.extend(self.funcs[j].support().into_iter().filter_map(|v| self.node_of(v)));
        }
        let n = self.n_in();
        let mut remap = vec![u32::MAX; self.funcs.len()];
        let mut next = 0u32;
        for (j, l) in live.iter().enumerate() {
            if *l {
                remap[j] = n + next;
                next += 1;
            }
        }
        let map = |v: u32| Literal::pos(if v < n { v } else { remap[(v - n) as usize] });
        let mut names = Vec::new();
        let mut funcs = Vec::new();
        for (j, &keep) in live.iter().enumerate() {
            if keep {
                names.push(self.names[j].clone());
                funcs.push(self.funcs[j].map_vars(&map));
            }
        }
        for (_, r) in &mut self.outputs {
            if let Ref::Lit(l) = r {
                *l = negate_if(map(l.var), l.complemented);
            }
        }
        self.names = names;
        self.funcs = funcs;
    }

    pub fn fanout(&self) -> Vec<usize> {
        let mut count = vec![0usize; self.funcs.len()];
        for f in &self.funcs {
            for v in f.support() {
                if let Some(k) = self.node_of(v) {
                    count[k] += 1;
                }
            }
        }
        for (_, r) in &self.outputs {
            if let Ref::Lit(l) = r {
                if let Some(k) = self.node_of(l.var) {
                    count[k] += 1;
                }
            }
        }
        count
    }

    /// Fresh `f_<k>` name generator state: the names already taken.
    pub fn taken_names(&self) -> HashSet<String> {
        self.inputs
            .iter()
            .chain(self.names.iter())
            .chain(self.outputs.iter().map(|(n, _)| n))
            .cloned()
            .collect()
    }

    /// Exhaustive node tables (64-row words), in node index order. `None`
    /// when the input count exceeds `max_inputs`.
    pub fn node_tables(&self, max_inputs: usize) -> Option<Vec<Vec<u64>>> {
        let n = self.inputs.len();
        if n > max_inputs {
            return None;
        }
        let words = if n <= 6 { 1 } else { 1usize << (n - 6) };
        let order = self.order();
        let mut tables = vec![vec![0u64; words]; self.funcs.len()];
        let mut vals = vec![0u64; n + self.funcs.len()];
        #[allow(clippy::needless_range_loop)]
        for w in 0..words {
            for (i, v) in vals.iter_mut().enumerate().take(n) {
                *v = input_word(i, w);
            }
            for &j in &order {
                let x = self.funcs[j].eval_word(&vals);
                vals[n + j] = x;
                tables[j][w] = x;
            }
        }
        let mask = crate::boolcore::mask_for(n.min(6));
        for t in &mut tables {
            for x in t.iter_mut() {
                *x &= mask;
            }
        }
        Some(tables)
    }
}

/// Local cleanup: single-cube containment, irrelevant-variable removal
/// and exact minimum covers for up to three variables.
pub(crate) fn simplify(f: &Sop) -> Sop {
    let mut f = f.scc();
    let support = f.support();
    if support.len() <= 6 && !support.is_empty() {
        let t = f.local_table(&support);
        let n = support.len();
        let keep: Vec<u32> = (0..n)
            .filter(|&i| {
                let m = crate::boolcore::VAR_MASKS[i] & crate::boolcore::mask_for(n);
                ((t & m) >> (1 << i)) != (t & !m & crate::boolcore::mask_for(n))
            })
            .map(|i| support[i])
            .collect();
        for v in &support {
            if !keep.contains(v) {
                f = f.restrict(*v, false).scc();
            }
        }
        if keep.len() <= 3 {
            let t = f.local_table(&keep);
            f = minimal_cover(t, keep.len()).map_vars(&|v| Literal::pos(keep[v as usize]));
        }
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolcore::{is_equivalent, node};

    #[test]
    fn round_trip_keeps_order_and_function_stable() {
        let net = Network::new(
            vec!["a".into(), "b".into()],
            vec![
                node(
                    "t",
                    vec![Signal::Input(0), Signal::Input(1)],
                    &[&[(0, false), (1, true)]],
                ),
                node(
                    "y",
                    vec![Signal::Node(0), Signal::Input(0)],
                    &[&[(0, false)], &[(1, true)]],
                ),
            ],
            vec![Output {
                name: "y".into(),
                signal: Signal::Node(1),
                complemented: false,
            }],
        )
        .unwrap();
        let back = Work::from_network(&net).to_network();
        assert_eq!(back.nodes.iter().map(|n| &n.name).collect::<Vec<_>>(), ["t", "y"]);
        assert_eq!(Work::from_network(&back).to_network(), back);
        assert!(is_equivalent(&net, &back).unwrap().is_equivalent());
    }

    #[test]
    fn simplify_drops_irrelevant_variables() {
        // a*b + a*b' = a
        let f = Sop::from_literal_lists([
            vec![Literal::pos(0), Literal::pos(1)],
            vec![Literal::pos(0), Literal::neg(1)],
        ]);
        assert_eq!(simplify(&f), Sop::literal(Literal::pos(0)));
        // over five variables the table path still applies
        let g = Sop::from_literal_lists([
            vec![Literal::pos(0), Literal::pos(4), Literal::pos(7)],
            vec![Literal::pos(0), Literal::pos(4), Literal::neg(7)],
            vec![Literal::pos(1), Literal::pos(2), Literal::pos(3)],
        ]);
        let s = simplify(&g);
        assert!(!s.has_var(7));
        assert_eq!(s.support(), vec![0, 1, 2, 3, 4]);
    }
}
