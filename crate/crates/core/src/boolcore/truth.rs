// SPDX-License-Identifier: Apache-2.0

//! Exhaustive simulation: truth tables and the equivalence oracle.
//!
//! Row `i` of a table assigns input slot `k` the value of bit `k` of `i`.

use std::fmt;

use super::network::Network;
use super::sop::VAR_MASKS;
use super::BoolError;

pub const MAX_TABLE_VARS: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruthTable {
    num_vars: usize,
    words: Vec<u64>,
}

impl TruthTable {
    pub fn from_fn(num_vars: usize, f: impl Fn(u64) -> bool) -> Self {
        let rows = 1u64 << num_vars;
        let mut words = vec![0u64; word_count(num_vars)];
        for row in 0..rows {
            if f(row) {
                words[(row / 64) as usize] |= 1 << (row % 64);
            }
        }
        Self { num_vars, words }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_rows(&self) -> u64 {
        1u64 << self.num_vars
    }

    pub fn get(&self, row: u64) -> bool {
        self.words[(row / 64) as usize] >> (row % 64) & 1 == 1
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    #[must_use]
    pub fn complement(&self) -> Self {
        let mask = row_mask(self.num_vars);
        Self {
            num_vars: self.num_vars,
            words: self.words.iter().map(|w| !w & mask).collect(),
        }
    }
}

impl fmt::Display for TruthTable {
    /// Bits in row order, row 0 first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in 0..self.num_rows() {
            write!(f, "{}", u8::from(self.get(row)))?;
        }
        Ok(())
    }
}

fn word_count(num_vars: usize) -> usize {
    if num_vars <= 6 {
        1
    } else {
        1 << (num_vars - 6)
    }
}

fn row_mask(num_vars: usize) -> u64 {
    super::sop::mask_for(num_vars.min(6))
}

/// Value word for input `var` at word index `w` of an exhaustive table.
pub fn input_word(var: usize, w: usize) -> u64 {
    if var < 6 {
        VAR_MASKS[var]
    } else if (w >> (var - 6)) & 1 == 1 {
        !0
    } else {
        0
    }
}

fn check_width(n: usize) -> Result<(), BoolError> {
    if n > MAX_TABLE_VARS {
        Err(BoolError::InputCountExceeded {
            found: n,
            limit: MAX_TABLE_VARS,
        })
    } else {
        Ok(())
    }
}

/// Truth tables of every output, in output order.
pub fn truth_tables(net: &Network) -> Result<Vec<TruthTable>, BoolError> {
    let n = net.num_inputs();
    check_width(n)?;
    let words = word_count(n);
    let mask = row_mask(n);
    let mut tables: Vec<Vec<u64>> = vec![vec![0; words]; net.outputs.len()];
    let mut inputs = vec![0u64; n];
    let mut scratch = Vec::new();
    #[allow(clippy::needless_range_loop)]
    for w in 0..words {
        for (k, slot) in inputs.iter_mut().enumerate() {
            *slot = input_word(k, w);
        }
        net.simulate_word(&inputs, &mut scratch);
        for (o, out) in net.outputs.iter().enumerate() {
            let mut v = net.signal_word(out.signal, &inputs, &scratch);
            if out.complemented {
                v = !v;
            }
            tables[o][w] = v & mask;
        }
    }
    Ok(tables
        .into_iter()
        .map(|words| TruthTable { num_vars: n, words })
        .collect())
}

/// Truth table of output `out`.
pub fn truth_table(net: &Network, out: usize) -> Result<TruthTable, BoolError> {
    if out >= net.outputs.len() {
        return Err(BoolError::Invalid(format!("no output with index {out}")));
    }
    let mut single = net.clone();
    single.outputs = vec![net.outputs[out].clone()];
    Ok(truth_tables(&single)?.remove(0))
}

/// Mismatch found by [`is_equivalent`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub output: String,
    /// Row index in the first network's input order.
    pub row: u64,
    /// `(input name, value)` in the first network's input order.
    pub assignment: Vec<(String, bool)>,
    pub left: bool,
    pub right: bool,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.assignment.iter().map(|(n, _)| n.as_str()).collect();
        let values: Vec<String> = self.assignment.iter().map(|(_, v)| u8::from(*v).to_string()).collect();
        write!(
            f,
            "output {} differs at ({}) = ({}): {} vs {}",
            self.output,
            names.join(","),
            values.join(","),
            u8::from(self.left),
            u8::from(self.right)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equivalent,
    Counterexample(Counterexample),
}

impl Verdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Verdict::Equivalent)
    }
}

/// Exhaustive combinational equivalence check.
///
/// Inputs and outputs are matched by name, so both networks must declare
/// the same input and output name sets. Rows follow the first network's
/// input order; the reported counterexample is the lowest differing row.
pub fn is_equivalent(a: &Network, b: &Network) -> Result<Verdict, BoolError> {
    let n = a.num_inputs();
    check_width(n)?;
    if b.num_inputs() != n {
        return Err(BoolError::InterfaceMismatch(format!(
            "{} inputs vs {}",
            n,
            b.num_inputs()
        )));
    }
    let mut perm = Vec::with_capacity(n);
    for name in &b.inputs {
        perm.push(
            a.input_index(name)
                .ok_or_else(|| BoolError::InterfaceMismatch(format!("input `{name}` missing from first network")))?,
        );
    }
    if a.outputs.len() != b.outputs.len() {
        return Err(BoolError::InterfaceMismatch(format!(
            "{} outputs vs {}",
            a.outputs.len(),
            b.outputs.len()
        )));
    }
    let mut pairs = Vec::with_capacity(a.outputs.len());
    for (i, out) in a.outputs.iter().enumerate() {
        let j = b.outputs.iter().position(|o| o.name == out.name).ok_or_else(|| {
            BoolError::InterfaceMismatch(format!("output `{}` missing from second network", out.name))
        })?;
        pairs.push((i, j));
    }

    let words = word_count(n);
    let mask = row_mask(n);
    let mut in_a = vec![0u64; n];
    let mut in_b = vec![0u64; n];
    let (mut sa, mut sb) = (Vec::new(), Vec::new());
    for w in 0..words {
        for (k, slot) in in_a.iter_mut().enumerate() {
            *slot = input_word(k, w);
        }
        for (k, p) in perm.iter().enumerate() {
            in_b[k] = in_a[*p];
        }
        a.simulate_word(&in_a, &mut sa);
        b.simulate_word(&in_b, &mut sb);
        let mut best: Option<(u32, usize, u64, u64)> = None;
        for (i, j) in &pairs {
            let oa = &a.outputs[*i];
            let ob = &b.outputs[*j];
            let va = a.signal_word(oa.signal, &in_a, &sa) ^ if oa.complemented { !0 } else { 0 };
            let vb = b.signal_word(ob.signal, &in_b, &sb) ^ if ob.complemented { !0 } else { 0 };
            let diff = (va ^ vb) & mask;
            if diff != 0 {
                let bit = diff.trailing_zeros();
                if best.is_none_or(|(bb, ..)| bit < bb) {
                    best = Some((bit, *i, va, vb));
                }
            }
        }
        if let Some((bit, i, va, vb)) = best {
            let row = w as u64 * 64 + u64::from(bit);
            let assignment = a
                .inputs
                .iter()
                .enumerate()
                .map(|(k, name)| (name.clone(), row >> k & 1 == 1))
                .collect();
            return Ok(Verdict::Counterexample(Counterexample {
                output: a.outputs[i].name.clone(),
                row,
                assignment,
                left: va >> bit & 1 == 1,
                right: vb >> bit & 1 == 1,
            }));
        }
    }
    Ok(Verdict::Equivalent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolcore::network::{node, Output, Signal};
    use crate::boolcore::sop::Sop;
    use crate::boolcore::Node;

    fn one_node(n_in: usize, func: Node) -> Network {
        Network::new(
            (0..n_in).map(|i| format!("x{i}")).collect(),
            vec![func],
            vec![Output {
                name: "y".into(),
                signal: Signal::Node(0),
                complemented: false,
            }],
        )
        .unwrap()
    }

    #[test]
    fn and2_table() {
        let net = one_node(
            2,
            node(
                "g",
                vec![Signal::Input(0), Signal::Input(1)],
                &[&[(0, false), (1, false)]],
            ),
        );
        assert_eq!(truth_table(&net, 0).unwrap().to_string(), "0001");
    }

    #[test]
    fn constant_zero_table() {
        let net = one_node(
            3,
            Node {
                name: "g".into(),
                fanins: vec![],
                func: Sop::zero(),
            },
        );
        let tt = truth_table(&net, 0).unwrap();
        assert_eq!(tt.count_ones(), 0);
        assert_eq!(tt.to_string(), "00000000");
    }

    #[test]
    fn maj3_table_against_enumeration() {
        let ins = vec![Signal::Input(0), Signal::Input(1), Signal::Input(2)];
        let net = one_node(
            3,
            node(
                "m",
                ins,
                &[
                    &[(0, false), (1, false)],
                    &[(1, false), (2, false)],
                    &[(2, false), (0, false)],
                ],
            ),
        );
        let tt = truth_table(&net, 0).unwrap();
        for row in 0..8u64 {
            assert_eq!(tt.get(row), row.count_ones() >= 2, "row {row}");
        }
    }

    #[test]
    fn wide_tables_use_word_patterns() {
        // x7 alone over 8 inputs
        let net = one_node(8, node("g", vec![Signal::Input(7)], &[&[(0, false)]]));
        let tt = truth_table(&net, 0).unwrap();
        for row in 0..256u64 {
            assert_eq!(tt.get(row), row >> 7 & 1 == 1);
        }
    }

    #[test]
    fn too_many_inputs() {
        let net = one_node(25, node("g", vec![Signal::Input(0)], &[&[(0, false)]]));
        assert!(matches!(
            truth_table(&net, 0),
            Err(BoolError::InputCountExceeded { found: 25, .. })
        ));
    }

    #[test]
    fn equivalence_reports_lowest_row() {
        let and = one_node(
            2,
            node(
                "g",
                vec![Signal::Input(0), Signal::Input(1)],
                &[&[(0, false), (1, false)]],
            ),
        );
        let or = one_node(
            2,
            node(
                "g",
                vec![Signal::Input(0), Signal::Input(1)],
                &[&[(0, false)], &[(1, false)]],
            ),
        );
        assert!(is_equivalent(&and, &and).unwrap().is_equivalent());
        match is_equivalent(&and, &or).unwrap() {
            Verdict::Counterexample(cex) => {
                assert_eq!(cex.row, 1);
                assert!(!cex.left && cex.right);
            }
            Verdict::Equivalent => panic!("AND and OR differ"),
        }
    }

    #[test]
    fn equivalence_matches_inputs_by_name() {
        let a = one_node(
            2,
            node(
                "g",
                vec![Signal::Input(0), Signal::Input(1)],
                &[&[(0, false), (1, true)]],
            ),
        );
        let mut b = a.clone();
        b.inputs.swap(0, 1);
        b.nodes[0].fanins = vec![Signal::Input(1), Signal::Input(0)];
        assert!(is_equivalent(&a, &b).unwrap().is_equivalent());
    }

    #[test]
    fn interface_mismatch() {
        let a = one_node(2, node("g", vec![Signal::Input(0)], &[&[(0, false)]]));
        let mut b = a.clone();
        b.outputs[0].name = "z".into();
        assert!(matches!(is_equivalent(&a, &b), Err(BoolError::InterfaceMismatch(_))));
        let c = one_node(3, node("g", vec![Signal::Input(0)], &[&[(0, false)]]));
        assert!(matches!(is_equivalent(&a, &c), Err(BoolError::InterfaceMismatch(_))));
    }
}
