// SPDX-License-Identifier: Apache-2.0

//! Equation format.
//!
//! ```text
//! # comment
//! INORDER = a b c;        (optional: fixes the primary input order)
//! OUTORDER = y;           (optional: selects and orders the outputs)
//! t = a*b' + (b + c)'
//! y = t c + a
//! ```
//!
//! Juxtaposition and `*` are AND, `+` is OR, a postfix `'` complements the
//! preceding factor. `0` and `1` are constants. An assignment ends at `;` or
//! at the end of a line outside parentheses; a line ending in an operator
//! continues on the next line. Without `OUTORDER`, every target that no
//! later assignment reads is an output.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use super::FrontendError;
use crate::boolcore::{Literal, Network, Node, Output, Signal, Sop};

const MAX_CUBES: usize = 1 << 16;

/// Assignments as written, before any expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqnSource {
    pub inorder: Option<Vec<String>>,
    pub outorder: Option<Vec<String>>,
    pub assignments: Vec<(String, Expr)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Var(String, Pos),
    Const(bool),
    Not(Box<Expr>),
    And(Vec<Expr>),
    Or(Vec<Expr>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Const(bool),
    Eq,
    Plus,
    Star,
    Apos,
    LParen,
    RParen,
    Semi,
    Newline,
    Eof,
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, FrontendError> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let pos = Pos {
                line: ln + 1,
                col: i + 1,
            };
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let tok = match c {
                '=' => Tok::Eq,
                '+' => Tok::Plus,
                '*' | '&' => Tok::Star,
                '\'' => Tok::Apos,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ';' => Tok::Semi,
                c if c.is_ascii_alphanumeric() || c == '_' => {
                    let start = i;
                    while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                        i += 1;
                    }
                    let word: String = chars[start..i].iter().collect();
                    let tok = match word.as_str() {
                        "0" => Tok::Const(false),
                        "1" => Tok::Const(true),
                        w if w.starts_with(|c: char| c.is_ascii_digit()) => {
                            return Err(FrontendError::Syntax {
                                line: pos.line,
                                col: pos.col,
                                msg: format!("identifier `{w}` starts with a digit"),
                            })
                        }
                        _ => Tok::Ident(word),
                    };
                    out.push((tok, pos));
                    continue;
                }
                other => {
                    return Err(FrontendError::Syntax {
                        line: pos.line,
                        col: pos.col,
                        msg: format!("unexpected character `{other}`"),
                    })
                }
            };
            out.push((tok, pos));
            i += 1;
        }
        out.push((
            Tok::Newline,
            Pos {
                line: ln + 1,
                col: chars.len() + 1,
            },
        ));
    }
    let end = Pos {
        line: text.lines().count() + 1,
        col: 1,
    };
    out.push((Tok::Eof, end));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    depth: usize,
}

impl Parser {
    fn peek(&mut self) -> &Tok {
        if self.depth > 0 {
            self.skip_newlines();
        }
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn skip_newlines(&mut self) {
        while self.toks[self.at].0 == Tok::Newline {
            self.at += 1;
        }
    }

    fn error(&self, msg: impl Into<String>) -> FrontendError {
        let p = self.pos();
        FrontendError::Syntax {
            line: p.line,
            col: p.col,
            msg: msg.into(),
        }
    }

    fn file(&mut self) -> Result<EqnSource, FrontendError> {
        let mut src = EqnSource {
            inorder: None,
            outorder: None,
            assignments: Vec::new(),
        };
        loop {
            self.skip_newlines();
            while *self.peek() == Tok::Semi {
                self.bump();
                self.skip_newlines();
            }
            let (tok, pos) = self.bump();
            let target = match tok {
                Tok::Eof => break,
                Tok::Ident(name) => name,
                _ => {
                    return Err(FrontendError::Syntax {
                        line: pos.line,
                        col: pos.col,
                        msg: "expected an assignment target".into(),
                    })
                }
            };
            if *self.peek() != Tok::Eq {
                return Err(self.error(format!("expected `=` after `{target}`")));
            }
            self.bump();
            self.skip_newlines();
            match target.as_str() {
                "INORDER" | "OUTORDER" => {
                    let mut names = Vec::new();
                    while let Tok::Ident(n) = self.peek().clone() {
                        names.push(n);
                        self.bump();
                    }
                    if target == "INORDER" {
                        src.inorder = Some(names);
                    } else {
                        src.outorder = Some(names);
                    }
                }
                _ => {
                    let e = self.expr()?;
                    src.assignments.push((target, e));
                }
            }
            match self.peek() {
                Tok::Semi | Tok::Newline => {
                    self.bump();
                }
                Tok::Eof => {}
                _ => return Err(self.error("expected end of assignment")),
            }
        }
        Ok(src)
    }

    fn expr(&mut self) -> Result<Expr, FrontendError> {
        let mut terms = vec![self.term()?];
        while *self.peek() == Tok::Plus {
            self.bump();
            self.skip_newlines();
            terms.push(self.term()?);
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            Expr::Or(terms)
        })
    }

    fn term(&mut self) -> Result<Expr, FrontendError> {
        let mut factors = vec![self.factor()?];
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    self.skip_newlines();
                    factors.push(self.factor()?);
                }
                Tok::Ident(_) | Tok::Const(_) | Tok::LParen => factors.push(self.factor()?),
                _ => break,
            }
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            Expr::And(factors)
        })
    }

    fn factor(&mut self) -> Result<Expr, FrontendError> {
        let pos = self.pos();
        let mut e = match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Expr::Var(name, pos)
            }
            Tok::Const(v) => {
                self.bump();
                Expr::Const(v)
            }
            Tok::LParen => {
                self.bump();
                self.depth += 1;
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error("expected `)`"));
                }
                self.depth -= 1;
                self.bump();
                inner
            }
            _ => return Err(self.error("expected an identifier, constant or `(`")),
        };
        while self.toks[self.at].0 == Tok::Apos {
            self.bump();
            e = Expr::Not(Box::new(e));
        }
        Ok(e)
    }
}

/// Parses equation text without resolving names.
pub fn parse_eqn_source(text: &str) -> Result<EqnSource, FrontendError> {
    let toks = lex(text)?;
    Parser { toks, at: 0, depth: 0 }.file()
}

/// Parses equation text into a network with one node per assignment.
pub fn parse_eqn(text: &str) -> Result<Network, FrontendError> {
    let src = parse_eqn_source(text)?;
    build_network(&src)
}

struct Resolver<'a> {
    inputs: Vec<String>,
    input_ids: HashMap<String, usize>,
    targets: &'a HashMap<String, usize>,
    fixed_inputs: bool,
    current: usize,
}

impl Resolver<'_> {
    fn resolve(&mut self, name: &str, pos: Pos) -> Result<Signal, FrontendError> {
        if let Some(&j) = self.targets.get(name) {
            if j < self.current {
                return Ok(Signal::Node(j));
            }
            return Err(FrontendError::Undefined {
                name: name.into(),
                line: pos.line,
                col: pos.col,
            });
        }
        if let Some(&i) = self.input_ids.get(name) {
            return Ok(Signal::Input(i));
        }
        if self.fixed_inputs {
            return Err(FrontendError::Undefined {
                name: name.into(),
                line: pos.line,
                col: pos.col,
            });
        }
        let i = self.inputs.len();
        self.inputs.push(name.to_string());
        self.input_ids.insert(name.to_string(), i);
        Ok(Signal::Input(i))
    }
}

fn to_sop(e: &Expr, negate: bool, slots: &mut Vec<Signal>, res: &mut Resolver<'_>) -> Result<Sop, FrontendError> {
    Ok(match e {
        Expr::Const(v) => Sop::constant(*v ^ negate),
        Expr::Var(name, pos) => {
            let s = res.resolve(name, *pos)?;
            let slot = match slots.iter().position(|x| *x == s) {
                Some(k) => k,
                None => {
                    slots.push(s);
                    slots.len() - 1
                }
            };
            Sop::literal(Literal::new(slot as u32, negate))
        }
        Expr::Not(inner) => to_sop(inner, !negate, slots, res)?,
        Expr::And(parts) | Expr::Or(parts) => {
            let conj = matches!(e, Expr::And(_)) != negate;
            let mut acc = Sop::constant(conj);
            for p in parts {
                let s = to_sop(p, negate, slots, res)?;
                acc = if conj { acc.and(&s).scc() } else { acc.or(&s).scc() };
                if acc.cubes().len() > MAX_CUBES {
                    return Err(FrontendError::TooLarge(MAX_CUBES));
                }
            }
            acc
        }
    })
}

fn build_network(src: &EqnSource) -> Result<Network, FrontendError> {
    let mut targets = HashMap::new();
    for (i, (t, _)) in src.assignments.iter().enumerate() {
        if targets.insert(t.clone(), i).is_some() {
            let pos = first_pos(&src.assignments[i].1).unwrap_or(Pos { line: 0, col: 0 });
            return Err(FrontendError::Redefinition {
                name: t.clone(),
                line: pos.line,
                col: pos.col,
            });
        }
    }
    let mut res = Resolver {
        inputs: Vec::new(),
        input_ids: HashMap::new(),
        targets: &targets,
        fixed_inputs: src.inorder.is_some(),
        current: 0,
    };
    if let Some(order) = &src.inorder {
        for name in order {
            if targets.contains_key(name) || res.input_ids.contains_key(name) {
                return Err(FrontendError::Redefinition {
                    name: name.clone(),
                    line: 0,
                    col: 0,
                });
            }
            res.input_ids.insert(name.clone(), res.inputs.len());
            res.inputs.push(name.clone());
        }
    }
    let mut nodes = Vec::with_capacity(src.assignments.len());
    let mut read = HashSet::new();
    for (i, (target, expr)) in src.assignments.iter().enumerate() {
        res.current = i;
        let mut slots = Vec::new();
        let func = to_sop(expr, false, &mut slots, &mut res)?.scc();
        for s in &slots {
            if let Signal::Node(j) = s {
                read.insert(*j);
            }
        }
        nodes.push(compact_node(target.clone(), slots, func));
    }
    let outputs = match &src.outorder {
        Some(order) => order
            .iter()
            .map(|name| {
                let signal = if let Some(&j) = targets.get(name) {
                    Signal::Node(j)
                } else if let Some(&i) = res.input_ids.get(name) {
                    Signal::Input(i)
                } else {
                    return Err(FrontendError::Undefined {
                        name: name.clone(),
                        line: 0,
                        col: 0,
                    });
                };
                Ok(Output {
                    name: name.clone(),
                    signal,
                    complemented: false,
                })
            })
            .collect::<Result<Vec<_>, _>>()?,
        None => (0..nodes.len())
            .filter(|j| !read.contains(j))
            .map(|j| Output {
                name: nodes[j].name.clone(),
                signal: Signal::Node(j),
                complemented: false,
            })
            .collect(),
    };
    Network::new(res.inputs, nodes, outputs).map_err(FrontendError::from)
}

/// Drops fanin slots the cover no longer mentions.
pub(crate) fn compact_node(name: String, slots: Vec<Signal>, func: Sop) -> Node {
    let support = func.support();
    let fanins = support.iter().map(|v| slots[*v as usize]).collect();
    let func = func.map_vars(&|v| Literal::pos(support.binary_search(&v).expect("support var") as u32));
    Node { name, fanins, func }
}

fn first_pos(e: &Expr) -> Option<Pos> {
    match e {
        Expr::Var(_, p) => Some(*p),
        Expr::Const(_) => None,
        Expr::Not(i) => first_pos(i),
        Expr::And(v) | Expr::Or(v) => v.iter().find_map(first_pos),
    }
}

/// Writes a network back as equations (with `INORDER`/`OUTORDER`).
pub fn emit_eqn(net: &Network) -> String {
    let mut taken: HashSet<String> = net.inputs.iter().cloned().collect();
    taken.extend(net.outputs.iter().map(|o| o.name.clone()));
    // a node keeps its name unless an output of the same name means
    // something else
    let mut names: Vec<String> = Vec::with_capacity(net.nodes.len());
    for (j, node) in net.nodes.iter().enumerate() {
        let clash = net
            .outputs
            .iter()
            .any(|o| o.name == node.name && !(o.signal == Signal::Node(j) && !o.complemented));
        let mut name = node.name.clone();
        if clash || net.inputs.contains(&name) {
            let mut k = 1;
            while taken.contains(&format!("{}_{k}", node.name)) {
                k += 1;
            }
            name = format!("{}_{k}", node.name);
        }
        taken.insert(name.clone());
        names.push(name);
    }
    let sig = |s: Signal| match s {
        Signal::Input(i) => net.inputs[i].clone(),
        Signal::Node(j) => names[j].clone(),
        Signal::Const(v) => u8::from(v).to_string(),
    };
    let mut text = String::new();
    let _ = writeln!(text, "INORDER = {};", net.inputs.join(" "));
    let outs: Vec<&str> = net.outputs.iter().map(|o| o.name.as_str()).collect();
    let _ = writeln!(text, "OUTORDER = {};", outs.join(" "));
    for (j, node) in net.nodes.iter().enumerate() {
        let fan = |v: u32| sig(node.fanins[v as usize]);
        let _ = writeln!(text, "{} = {};", names[j], node.func.to_string_with(fan));
    }
    for o in &net.outputs {
        if o.signal == Signal::Node(net.node_index(&o.name).unwrap_or(usize::MAX)) && !o.complemented {
            continue;
        }
        let _ = writeln!(
            text,
            "{} = {}{};",
            o.name,
            sig(o.signal),
            if o.complemented { "'" } else { "" }
        );
    }
    text
}
