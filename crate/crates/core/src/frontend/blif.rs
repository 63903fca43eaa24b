// SPDX-License-Identifier: Apache-2.0

//! Combinational BLIF subset: `.model`, `.inputs`, `.outputs`, `.names`
//! with ON-set covers, `.end`. `#` comments and `\` line continuations are
//! accepted. Covers may appear in any order; they are sorted topologically.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::FrontendError;
use crate::boolcore::{Cube, Literal, Network, Node, Output, Signal, Sop};

/// One `.names` block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    pub inputs: Vec<String>,
    pub output: String,
    /// Input patterns of the ON-set rows (`0`, `1`, `-`).
    pub rows: Vec<String>,
    pub line: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BlifModel {
    pub name: String,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub covers: Vec<Cover>,
}

/// Logical lines with their starting line number; comments stripped and
/// continuations joined.
fn logical_lines(text: &str) -> Vec<(usize, Vec<String>)> {
    let mut out = Vec::new();
    let mut pending: Option<(usize, String)> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let (body, cont) = match line.trim_end().strip_suffix('\\') {
            Some(b) => (b, true),
            None => (line, false),
        };
        let entry = pending.get_or_insert_with(|| (i + 1, String::new()));
        entry.1.push(' ');
        entry.1.push_str(body);
        if !cont {
            let (ln, joined) = pending.take().unwrap();
            let toks: Vec<String> = joined.split_whitespace().map(str::to_string).collect();
            if !toks.is_empty() {
                out.push((ln, toks));
            }
        }
    }
    if let Some((ln, joined)) = pending {
        let toks: Vec<String> = joined.split_whitespace().map(str::to_string).collect();
        if !toks.is_empty() {
            out.push((ln, toks));
        }
    }
    out
}

pub fn parse_blif_model(text: &str) -> Result<BlifModel, FrontendError> {
    let mut model = BlifModel::default();
    let mut current: Option<Cover> = None;
    let mut ended = false;
    for (line, toks) in logical_lines(text) {
        if ended {
            break;
        }
        let head = toks[0].as_str();
        if head.starts_with('.') {
            if let Some(c) = current.take() {
                model.covers.push(c);
            }
            match head {
                ".model" => model.name = toks.get(1).cloned().unwrap_or_default(),
                ".inputs" => model.inputs.extend(toks[1..].iter().cloned()),
                ".outputs" => model.outputs.extend(toks[1..].iter().cloned()),
                ".names" => {
                    if toks.len() < 2 {
                        return Err(FrontendError::Blif {
                            line,
                            msg: ".names needs an output signal".into(),
                        });
                    }
                    let output = toks[toks.len() - 1].clone();
                    current = Some(Cover {
                        inputs: toks[1..toks.len() - 1].to_vec(),
                        output,
                        rows: Vec::new(),
                        line,
                    });
                }
                ".end" => ended = true,
                other => {
                    return Err(FrontendError::UnsupportedDirective {
                        directive: other.to_string(),
                        line,
                    })
                }
            }
            continue;
        }
        let Some(cover) = current.as_mut() else {
            return Err(FrontendError::Blif {
                line,
                msg: format!("cover row `{}` outside .names", toks.join(" ")),
            });
        };
        let (pattern, value) = match (cover.inputs.len(), toks.as_slice()) {
            (0, [v]) => (String::new(), v.as_str()),
            (_, [p, v]) => (p.clone(), v.as_str()),
            _ => {
                return Err(FrontendError::Blif {
                    line,
                    msg: format!("malformed cover row `{}`", toks.join(" ")),
                })
            }
        };
        if pattern.len() != cover.inputs.len() || !pattern.chars().all(|c| matches!(c, '0' | '1' | '-')) {
            return Err(FrontendError::Blif {
                line,
                msg: format!("pattern `{pattern}` does not match {} inputs", cover.inputs.len()),
            });
        }
        match value {
            "1" => cover.rows.push(pattern),
            "0" => return Err(FrontendError::OffSetCover { line }),
            v => {
                return Err(FrontendError::Blif {
                    line,
                    msg: format!("output value `{v}` is not 0 or 1"),
                })
            }
        }
    }
    if let Some(c) = current.take() {
        model.covers.push(c);
    }
    Ok(model)
}

impl Cover {
    pub fn sop(&self) -> Sop {
        Sop::from_cubes(self.rows.iter().map(|row| {
            Cube::new(row.chars().enumerate().filter_map(|(i, c)| match c {
                '1' => Some(Literal::pos(i as u32)),
                '0' => Some(Literal::neg(i as u32)),
                _ => None,
            }))
            .expect("one literal per column")
        }))
    }
}

impl BlifModel {
    pub fn to_network(&self) -> Result<Network, FrontendError> {
        let mut input_ids = HashMap::new();
        for (i, name) in self.inputs.iter().enumerate() {
            if input_ids.insert(name.as_str(), i).is_some() {
                return Err(FrontendError::Redefinition {
                    name: name.clone(),
                    line: 0,
                    col: 0,
                });
            }
        }
        let mut defs: HashMap<&str, usize> = HashMap::new();
        for (k, c) in self.covers.iter().enumerate() {
            if input_ids.contains_key(c.output.as_str()) || defs.insert(c.output.as_str(), k).is_some() {
                return Err(FrontendError::Redefinition {
                    name: c.output.clone(),
                    line: c.line,
                    col: 1,
                });
            }
            for (a, name) in c.inputs.iter().enumerate() {
                if c.inputs[..a].contains(name) {
                    return Err(FrontendError::Blif {
                        line: c.line,
                        msg: format!("signal `{name}` listed twice"),
                    });
                }
            }
        }
        // topological order over covers (iterative DFS)
        let mut order = Vec::with_capacity(self.covers.len());
        let mut state = vec![0u8; self.covers.len()];
        for root in 0..self.covers.len() {
            if state[root] != 0 {
                continue;
            }
            let mut stack = vec![(root, 0usize)];
            state[root] = 1;
            while let Some((k, next)) = stack.pop() {
                let cover = &self.covers[k];
                if next < cover.inputs.len() {
                    stack.push((k, next + 1));
                    let name = cover.inputs[next].as_str();
                    if input_ids.contains_key(name) {
                        continue;
                    }
                    let Some(&d) = defs.get(name) else {
                        return Err(FrontendError::UndefinedSignal {
                            name: name.to_string(),
                            line: cover.line,
                        });
                    };
                    match state[d] {
                        0 => {
                            state[d] = 1;
                            stack.push((d, 0));
                        }
                        1 => {
                            return Err(FrontendError::Blif {
                                line: cover.line,
                                msg: format!("combinational cycle through `{name}`"),
                            })
                        }
                        _ => {}
                    }
                } else {
                    state[k] = 2;
                    order.push(k);
                }
            }
        }
        let mut node_of = vec![usize::MAX; self.covers.len()];
        let mut nodes = Vec::with_capacity(order.len());
        for &k in &order {
            let cover = &self.covers[k];
            let fanins = cover
                .inputs
                .iter()
                .map(|n| match input_ids.get(n.as_str()) {
                    Some(&i) => Signal::Input(i),
                    None => Signal::Node(node_of[defs[n.as_str()]]),
                })
                .collect();
            node_of[k] = nodes.len();
            nodes.push(Node {
                name: cover.output.clone(),
                fanins,
                func: cover.sop(),
            });
        }
        let mut outputs = Vec::with_capacity(self.outputs.len());
        for name in &self.outputs {
            let signal = if let Some(&i) = input_ids.get(name.as_str()) {
                Signal::Input(i)
            } else if let Some(&k) = defs.get(name.as_str()) {
                Signal::Node(node_of[k])
            } else {
                return Err(FrontendError::UndefinedSignal {
                    name: name.clone(),
                    line: 0,
                });
            };
            outputs.push(Output {
                name: name.clone(),
                signal,
                complemented: false,
            });
        }
        Network::new(self.inputs.clone(), nodes, outputs).map_err(FrontendError::from)
    }
}

pub fn parse_blif(text: &str) -> Result<Network, FrontendError> {
    parse_blif_model(text)?.to_network()
}

/// Writes a network as BLIF. Complemented or renamed outputs get a
/// buffer/inverter cover.
pub fn emit_blif(net: &Network, model: &str) -> String {
    let mut text = String::new();
    let _ = writeln!(text, ".model {model}");
    let _ = writeln!(text, ".inputs {}", net.inputs.join(" "));
    let outs: Vec<&str> = net.outputs.iter().map(|o| o.name.as_str()).collect();
    let _ = writeln!(text, ".outputs {}", outs.join(" "));
    let direct = |o: &Output| {
        !o.complemented
            && match o.signal {
                Signal::Node(j) => net.nodes[j].name == o.name,
                Signal::Input(i) => net.inputs[i] == o.name,
                Signal::Const(_) => false,
            }
    };
    for node in &net.nodes {
        let names: Vec<String> = node.fanins.iter().map(|s| net.signal_name(*s)).collect();
        let _ = writeln!(text, ".names {} {}", names.join(" "), node.name);
        for cube in node.func.cubes() {
            let mut row = vec!['-'; node.fanins.len()];
            for l in cube.literals() {
                row[l.var as usize] = if l.complemented { '0' } else { '1' };
            }
            let row: String = row.into_iter().collect();
            if row.is_empty() {
                let _ = writeln!(text, "1");
            } else {
                let _ = writeln!(text, "{row} 1");
            }
        }
    }
    for o in net.outputs.iter().filter(|o| !direct(o)) {
        match o.signal {
            Signal::Const(v) => {
                let _ = writeln!(text, ".names {}", o.name);
                if v ^ o.complemented {
                    let _ = writeln!(text, "1");
                }
            }
            s => {
                let _ = writeln!(text, ".names {} {}", net.signal_name(s), o.name);
                let _ = writeln!(text, "{} 1", if o.complemented { '0' } else { '1' });
            }
        }
    }
    let _ = writeln!(text, ".end");
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolcore::{is_equivalent, truth_table};

    #[test]
    fn single_cube_cover() {
        let net = parse_blif(".model t\n.inputs a b\n.outputs y\n.names a b y\n11 1\n.end\n").unwrap();
        assert_eq!(truth_table(&net, 0).unwrap().to_string(), "0001");
    }

    #[test]
    fn dont_care_columns() {
        let net = parse_blif(".model t\n.inputs a b\n.outputs y\n.names a b y\n1- 1\n-1 1\n.end\n").unwrap();
        assert_eq!(truth_table(&net, 0).unwrap().to_string(), "0111");
    }

    #[test]
    fn out_of_order_covers_and_continuations() {
        let text = "\
.model t   # comment
.inputs a b \\
  c
.outputs y
.names t c y
11 1
.names a b t
01 1
10 1
.end
";
        let net = parse_blif(text).unwrap();
        assert_eq!(net.inputs, vec!["a", "b", "c"]);
        let tt = truth_table(&net, 0).unwrap();
        for row in 0..8u64 {
            let (a, b, c) = (row & 1 == 1, row & 2 != 0, row & 4 != 0);
            assert_eq!(tt.get(row), (a ^ b) && c);
        }
    }

    #[test]
    fn constant_covers() {
        let net = parse_blif(".model t\n.inputs a\n.outputs y z\n.names y\n1\n.names z\n.end\n").unwrap();
        assert_eq!(truth_table(&net, 0).unwrap().to_string(), "11");
        assert_eq!(truth_table(&net, 1).unwrap().to_string(), "00");
    }

    #[test]
    fn rejects_offset_and_sequential() {
        assert!(matches!(
            parse_blif(".model t\n.inputs a\n.outputs y\n.names a y\n1 0\n.end\n"),
            Err(FrontendError::OffSetCover { line: 5 })
        ));
        assert!(matches!(
            parse_blif(".model t\n.inputs a\n.outputs y\n.latch a y 0\n.end\n"),
            Err(FrontendError::UnsupportedDirective { .. })
        ));
        assert!(matches!(
            parse_blif(".model t\n.inputs a\n.outputs y\n.subckt foo a=a\n.end\n"),
            Err(FrontendError::UnsupportedDirective { .. })
        ));
    }

    #[test]
    fn undefined_signal() {
        assert!(matches!(
            parse_blif(".model t\n.inputs a\n.outputs y\n.names a q y\n11 1\n.end\n"),
            Err(FrontendError::UndefinedSignal { .. })
        ));
        assert!(matches!(
            parse_blif(".model t\n.inputs a\n.outputs w\n.end\n"),
            Err(FrontendError::UndefinedSignal { .. })
        ));
    }

    #[test]
    fn emit_round_trip() {
        let text = ".model t\n.inputs a b c\n.outputs y a\n.names a b t\n10 1\n.names t c y\n1- 1\n-0 1\n.end\n";
        let net = parse_blif(text).unwrap();
        let again = parse_blif(&emit_blif(&net, "t")).unwrap();
        assert!(is_equivalent(&net, &again).unwrap().is_equivalent());
    }
}
