// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeSet, HashMap, HashSet};

use super::work::Work;
use super::MAX_FANIN;
use crate::boolcore::{Cube, Literal, Network, Sop};

/// Inputs up to which nodes are merged by exhaustive global tables.
const MERGE_MAX_INPUTS: usize = 16;

/// Factored form of a cover.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Expr {
    Const(bool),
    Lit(Literal),
    And(Vec<Expr>),
    Or(Vec<Expr>),
}

fn join(and: bool, parts: Vec<Expr>) -> Expr {
    let mut flat = Vec::new();
    for p in parts {
        match p {
            Expr::And(v) if and => flat.extend(v),
            Expr::Or(v) if !and => flat.extend(v),
            e => flat.push(e),
        }
    }
    if flat.len() == 1 {
        return flat.pop().expect("one part");
    }
    if and {
        Expr::And(flat)
    } else {
        Expr::Or(flat)
    }
}

fn cube_expr(c: &Cube) -> Expr {
    match c.len() {
        0 => Expr::Const(true),
        _ => join(true, c.literals().iter().map(|l| Expr::Lit(*l)).collect()),
    }
}

/// Literal factoring: the literal shared by the most cubes (smallest on
/// ties) is pulled out until no literal repeats.
fn factor_literal(f: &Sop) -> Expr {
    if let Some(c) = f.as_constant() {
        return Expr::Const(c);
    }
    if f.cubes().len() == 1 {
        return cube_expr(&f.cubes()[0]);
    }
    let mut counts: HashMap<Literal, usize> = HashMap::new();
    for c in f.cubes() {
        for l in c.literals() {
            *counts.entry(*l).or_default() += 1;
        }
    }
    let best = counts
        .iter()
        .filter(|(_, n)| **n >= 2)
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
        .map(|(l, _)| *l);
    match best {
        None => join(false, f.cubes().iter().map(cube_expr).collect()),
        Some(l) => {
            let (with, rest): (Vec<&Cube>, Vec<&Cube>) = f.cubes().iter().partition(|c| c.contains(l));
            let q = Sop::from_cubes(with.iter().map(|c| c.without(l)));
            let head = join(true, vec![Expr::Lit(l), factor_literal(&q)]);
            if rest.is_empty() {
                head
            } else {
                join(
                    false,
                    vec![head, factor_literal(&Sop::from_cubes(rest.into_iter().cloned()))],
                )
            }
        }
    }
}

/// Largest cube dividing every cube of `f`.
fn common_cube(f: &Sop) -> Cube {
    let mut it = f.cubes().iter();
    let first = it.next().cloned().unwrap_or_default();
    it.fold(first, |acc, c| acc.intersection(c))
}

const MAX_KERNELS: usize = 256;
const MAX_KERNEL_CUBES: usize = 48;

/// Kernels of `f` (cube-free quotients by cubes), bounded in number.
fn kernels(f: &Sop) -> Vec<Sop> {
    fn walk(f: &Sop, lits: &[Literal], from: usize, out: &mut Vec<Sop>) {
        for (i, l) in lits.iter().enumerate().skip(from) {
            if out.len() >= MAX_KERNELS {
                return;
            }
            let with: Vec<&Cube> = f.cubes().iter().filter(|c| c.contains(*l)).collect();
            if with.len() < 2 {
                continue;
            }
            let q = Sop::from_cubes(with.iter().map(|c| c.without(*l)));
            let cc = common_cube(&q);
            if cc.literals().iter().any(|m| lits[..i].contains(m)) {
                continue;
            }
            let k = Sop::from_cubes(q.cubes().iter().map(|c| c.quotient(&cc)));
            walk(&k, lits, i + 1, out);
        }
        if f.cubes().len() >= 2 && common_cube(f).is_empty() && !out.contains(f) {
            out.push(f.clone());
        }
    }
    let lits: Vec<Literal> = f.literals().into_iter().collect();
    let mut out = Vec::new();
    walk(f, &lits, 0, &mut out);
    out
}

/// Kernel factoring: divide by the kernel with the largest literal saving,
/// recurse on quotient, divisor and remainder; literal factoring when no
/// kernel helps.
fn factor_kernel(f: &Sop) -> Expr {
    if f.as_constant().is_some() || f.cubes().len() == 1 || f.cubes().len() > MAX_KERNEL_CUBES {
        return factor_literal(f);
    }
    let cc = common_cube(f);
    if !cc.is_empty() {
        let rest = Sop::from_cubes(f.cubes().iter().map(|c| c.quotient(&cc)));
        return join(true, vec![cube_expr(&cc), factor_kernel(&rest)]);
    }
    let mut best: Option<(usize, Sop, Vec<Cube>, Vec<Cube>)> = None;
    for k in kernels(f) {
        if k == *f {
            continue;
        }
        let Some((q, r)) = weak_divide(f, &k) else { continue };
        let lq: usize = q.iter().map(Cube::len).sum();
        let lk = k.literal_occurrences();
        let value = (q.len() - 1) * lk + (k.cubes().len() - 1) * lq;
        if value > 0 && best.as_ref().is_none_or(|b| value > b.0) {
            best = Some((value, k, q, r));
        }
    }
    let Some((_, k, q, r)) = best else {
        return factor_literal(f);
    };
    let head = join(true, vec![factor_kernel(&Sop::from_cubes(q)), factor_kernel(&k)]);
    if r.is_empty() {
        head
    } else {
        join(false, vec![head, factor_kernel(&Sop::from_cubes(r))])
    }
}

fn combine(and: bool, items: &[Sop]) -> Sop {
    let mut acc = Sop::constant(and);
    for s in items {
        acc = if and { acc.and(s) } else { acc.or(s) }.scc();
    }
    acc
}

fn union_support(items: &[Sop]) -> BTreeSet<u32> {
    items.iter().flat_map(|s| s.support()).collect()
}

/// Weak division by an arbitrary cover: `f = q*d + r` with `q` sharing no
/// variable with `d`. Returns `None` when the quotient is empty.
fn weak_divide(f: &Sop, d: &Sop) -> Option<(Vec<Cube>, Vec<Cube>)> {
    let dvars: BTreeSet<u32> = d.support().into_iter().collect();
    let mut q: Option<BTreeSet<Cube>> = None;
    for dc in d.cubes() {
        let qi: BTreeSet<Cube> = f
            .cubes()
            .iter()
            .filter(|c| dc.divides(c))
            .map(|c| c.quotient(dc))
            .filter(|qc| qc.literals().iter().all(|l| !dvars.contains(&l.var)))
            .collect();
        q = Some(match q {
            None => qi,
            Some(prev) => prev.intersection(&qi).cloned().collect(),
        });
    }
    let q: Vec<Cube> = q.unwrap_or_default().into_iter().collect();
    if q.is_empty() {
        return None;
    }
    let used: HashSet<Cube> = q
        .iter()
        .flat_map(|qc| d.cubes().iter().filter_map(move |dc| qc.and(dc)))
        .collect();
    let r = f.cubes().iter().filter(|c| !used.contains(*c)).cloned().collect();
    Some((q, r))
}

/// Largest-saving common cube of at least two literals, capped at three
/// literals so it fits one node.
fn best_cube_divisor(f: &Sop) -> Option<Cube> {
    let cubes = f.cubes();
    let mut best: Option<(usize, Cube)> = None;
    for i in 0..cubes.len() {
        for j in i + 1..cubes.len() {
            let mut d = cubes[i].intersection(&cubes[j]);
            if d.len() < 2 {
                continue;
            }
            if d.len() > MAX_FANIN {
                d = Cube::new(d.literals()[..MAX_FANIN].iter().copied()).expect("sub-cube");
            }
            let count = cubes.iter().filter(|c| d.divides(c)).count();
            let score = d.len() * (count - 1);
            let better = match &best {
                None => true,
                Some((s, b)) => score > *s || (score == *s && d < *b),
            };
            if better {
                best = Some((score, d));
            }
        }
    }
    best.map(|(_, d)| d)
}

/// How wide covers are broken up once resubstitution stops helping.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Extract shared cubes first, then literal factoring.
    #[default]
    CubeFirst,
    /// Kernel factoring of the whole cover.
    Kernel,
}

impl Strategy {
    pub const ALL: [Strategy; 2] = [Strategy::CubeFirst, Strategy::Kernel];
}

struct Splitter {
    strategy: Strategy,
    w: Work,
    taken: HashSet<String>,
    next: usize,
    /// Finished nodes (at most three variables) usable as divisors.
    divisors: Vec<u32>,
    by_func: HashMap<Sop, u32>,
    complements: HashMap<u32, Sop>,
}

impl Splitter {
    fn fresh_name(&mut self) -> String {
        loop {
            self.next += 1;
            let name = format!("f_{}", self.next);
            if self.taken.insert(name.clone()) {
                return name;
            }
        }
    }

    fn register(&mut self, var: u32) {
        let k = self.w.node_of(var).expect("node variable");
        let f = self.w.funcs[k].clone();
        let support = f.support().len();
        if support > MAX_FANIN {
            return;
        }
        if support >= 2 {
            self.divisors.push(var);
            if let Ok(c) = f.complement_demorgan() {
                self.complements.insert(var, c);
            }
        }
        self.by_func.entry(f).or_insert(var);
    }

    /// A literal for `f` (at most three variables), reusing an existing
    /// node or its complement when possible.
    fn materialize(&mut self, f: Sop) -> Literal {
        if let Some(l) = f.as_literal() {
            return l;
        }
        if let Some(&v) = self.by_func.get(&f) {
            return Literal::pos(v);
        }
        if let Ok(c) = f.complement_demorgan() {
            if let Some(&v) = self.by_func.get(&c) {
                return Literal::neg(v);
            }
        }
        let name = self.fresh_name();
        let var = self.w.push(name, f);
        self.register(var);
        Literal::pos(var)
    }

    /// Best rewrite of `f` through an existing node or its complement that
    /// lowers the literal occurrence count.
    fn resubstitute(&self, f: &Sop) -> Option<Sop> {
        let fvars: BTreeSet<u32> = f.support().into_iter().collect();
        let mut best: Option<(usize, Sop)> = None;
        for &v in &self.divisors {
            let k = self.w.node_of(v).expect("node variable");
            let d = &self.w.funcs[k];
            if !d.support().iter().all(|x| fvars.contains(x)) {
                continue;
            }
            let options = [(d, false), (self.complements.get(&v).unwrap_or(d), true)];
            for (div, neg) in options {
                if neg && !self.complements.contains_key(&v) {
                    continue;
                }
                let Some((q, r)) = weak_divide(f, div) else { continue };
                let lit = Literal::new(v, neg);
                let cubes = q
                    .iter()
                    .filter_map(|qc| qc.and(&Cube::new([lit]).expect("literal cube")))
                    .chain(r);
                let g = Sop::from_cubes(cubes).scc();
                let cost = g.literal_occurrences();
                if cost < f.literal_occurrences() && best.as_ref().is_none_or(|(c, _)| cost < *c) {
                    best = Some((cost, g));
                }
            }
        }
        best.map(|(_, g)| g)
    }

    fn extract_cube(&mut self, f: &Sop, d: &Cube) -> Sop {
        let lit = self.materialize(Sop::from_cubes([d.clone()]));
        let lc = Cube::new([lit]).expect("literal cube");
        Sop::from_cubes(f.cubes().iter().filter_map(|c| {
            if d.divides(c) {
                c.quotient(d).and(&lc)
            } else {
                Some(c.clone())
            }
        }))
        .scc()
    }

    /// Turns a factored expression into a cover of at most three
    /// variables, creating nodes for the pieces that do not fit.
    fn pack(&mut self, e: &Expr) -> Sop {
        let (and, children) = match e {
            Expr::Const(c) => return Sop::constant(*c),
            Expr::Lit(l) => return Sop::literal(*l),
            Expr::And(v) => (true, v),
            Expr::Or(v) => (false, v),
        };
        let mut items: Vec<Sop> = children.iter().map(|c| self.pack(c)).collect();
        loop {
            if union_support(&items).len() <= MAX_FANIN {
                return combine(and, &items);
            }
            let width = |s: &Sop| s.support().len();
            // merge two wide pieces that fit one node together
            let pair = (0..items.len())
                .flat_map(|i| (i + 1..items.len()).map(move |j| (i, j)))
                .find(|&(i, j)| {
                    width(&items[i]) >= 2
                        && width(&items[j]) >= 2
                        && union_support(&items[i..=i])
                            .union(&union_support(&items[j..=j]))
                            .count()
                            <= MAX_FANIN
                });
            if let Some((i, j)) = pair {
                let merged = combine(and, &[items[i].clone(), items[j].clone()]);
                items[i] = merged;
                items.remove(j);
                continue;
            }
            let widest = (0..items.len())
                .filter(|&i| width(&items[i]) >= 2)
                .max_by(|&a, &b| width(&items[a]).cmp(&width(&items[b])).then(b.cmp(&a)));
            if let Some(i) = widest {
                let f = items[i].clone();
                items[i] = Sop::literal(self.materialize(f));
                continue;
            }
            let group: Vec<Sop> = items.drain(0..MAX_FANIN).collect();
            let lit = self.materialize(combine(and, &group));
            items.push(Sop::literal(lit));
        }
    }

    fn split_node(&mut self, j: usize) {
        let mut f = self.w.funcs[j].clone();
        while f.support().len() > MAX_FANIN {
            if let Some(g) = self.resubstitute(&f) {
                f = g;
                continue;
            }
            if self.strategy == Strategy::CubeFirst {
                if let Some(d) = best_cube_divisor(&f) {
                    f = self.extract_cube(&f, &d);
                    continue;
                }
                f = self.pack(&factor_literal(&f));
            } else {
                f = self.pack(&factor_kernel(&f));
            }
        }
        self.w.funcs[j] = f;
        self.register(self.w.n_in() + j as u32);
    }

    /// Replaces nodes whose global function equals an earlier signal (or
    /// its complement) by that signal.
    fn merge_functional(&mut self) {
        let Some(tables) = self.w.node_tables(MERGE_MAX_INPUTS) else {
            return;
        };
        let n = self.w.inputs.len();
        let words = tables.first().map_or(0, Vec::len);
        let mask = crate::boolcore::mask_for(n.min(6));
        let mut seen: HashMap<Vec<u64>, Literal> = HashMap::new();
        for i in 0..n {
            let t: Vec<u64> = (0..words).map(|w| crate::boolcore::input_word(i, w) & mask).collect();
            seen.entry(t).or_insert(Literal::pos(i as u32));
        }
        let zero = vec![0u64; words];
        let one = vec![mask; words];
        for j in self.w.order() {
            let t = &tables[j];
            if *t == zero || *t == one {
                self.w.funcs[j] = Sop::constant(*t == one);
                continue;
            }
            let c: Vec<u64> = t.iter().map(|x| !x & mask).collect();
            if let Some(l) = seen.get(t) {
                self.w.funcs[j] = Sop::literal(*l);
            } else if let Some(l) = seen.get(&c) {
                self.w.funcs[j] = Sop::literal(l.negate());
            } else {
                seen.insert(t.clone(), Literal::pos(self.w.n_in() + j as u32));
            }
        }
    }
}

/// Rewrites every node to at most three fanins. New nodes are named
/// `f_1`, `f_2`, ... in creation order, skipping names already in use.
pub fn decompose3(net: &Network) -> Network {
    decompose3_with(net, Strategy::default())
}

pub fn decompose3_with(net: &Network, strategy: Strategy) -> Network {
    let w = Work::from_network(net);
    let taken = w.taken_names();
    let originals = w.funcs.len();
    let mut s = Splitter {
        strategy,
        w,
        taken,
        next: 0,
        divisors: Vec::new(),
        by_func: HashMap::new(),
        complements: HashMap::new(),
    };
    for j in s.w.order() {
        if j < originals {
            s.split_node(j);
        }
    }
    s.merge_functional();
    let mut w = s.w;
    w.sweep_to_fixpoint();
    w.remove_dangling();
    w.to_network()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolcore::{is_equivalent, Literal as L};
    use crate::frontend::parse_eqn;

    fn eval(e: &Expr, row: u32) -> bool {
        match e {
            Expr::Const(c) => *c,
            Expr::Lit(l) => ((row >> l.var) & 1 == 1) ^ l.complemented,
            Expr::And(v) => v.iter().all(|x| eval(x, row)),
            Expr::Or(v) => v.iter().any(|x| eval(x, row)),
        }
    }

    #[test]
    fn weak_division_by_complement() {
        // a1*a0'*b1 + a1*b1*b0' divided by (a0' + b0') leaves a1*b1
        let (a0, a1, b0, b1) = (0, 1, 2, 3);
        let f = Sop::from_literal_lists([
            vec![L::pos(a1), L::neg(a0), L::pos(b1)],
            vec![L::pos(a1), L::pos(b1), L::neg(b0)],
        ]);
        let d = Sop::from_literal_lists([vec![L::neg(a0)], vec![L::neg(b0)]]);
        let (q, r) = weak_divide(&f, &d).unwrap();
        assert_eq!(q, vec![Cube::new([L::pos(a1), L::pos(b1)]).unwrap()]);
        assert!(r.is_empty());
    }

    #[test]
    fn cube_divisor_prefers_larger_saving() {
        let f = Sop::from_literal_lists([
            vec![L::pos(0), L::pos(1), L::pos(2)],
            vec![L::pos(0), L::pos(1), L::pos(3)],
            vec![L::pos(0), L::pos(1), L::pos(4)],
            vec![L::pos(2), L::pos(3)],
        ]);
        assert_eq!(best_cube_divisor(&f), Cube::new([L::pos(0), L::pos(1)]));
    }

    #[test]
    fn factor_is_exact() {
        let f = Sop::from_literal_lists([
            vec![L::pos(0), L::pos(1)],
            vec![L::pos(0), L::neg(2)],
            vec![L::pos(3), L::pos(4)],
        ]);
        let e = factor_literal(&f);
        fn eval(e: &Expr, row: u32) -> bool {
            match e {
                Expr::Const(c) => *c,
                Expr::Lit(l) => ((row >> l.var) & 1 == 1) ^ l.complemented,
                Expr::And(v) => v.iter().all(|x| eval(x, row)),
                Expr::Or(v) => v.iter().any(|x| eval(x, row)),
            }
        }
        for row in 0..32u32 {
            assert_eq!(eval(&e, row), f.eval(|v| (row >> v) & 1 == 1));
        }
    }

    #[test]
    fn kernel_factoring_is_exact_and_finds_sum_divisor() {
        // (a + b)(c + d) + e
        let f = Sop::from_literal_lists([
            vec![L::pos(0), L::pos(2)],
            vec![L::pos(0), L::pos(3)],
            vec![L::pos(1), L::pos(2)],
            vec![L::pos(1), L::pos(3)],
            vec![L::pos(4)],
        ]);
        let e = factor_kernel(&f);
        fn lits(e: &Expr) -> usize {
            match e {
                Expr::Const(_) => 0,
                Expr::Lit(_) => 1,
                Expr::And(v) | Expr::Or(v) => v.iter().map(lits).sum(),
            }
        }
        assert_eq!(lits(&e), 5);
        for row in 0..32u32 {
            assert_eq!(eval(&e, row), f.eval(|v| (row >> v) & 1 == 1));
        }
    }

    #[test]
    fn both_strategies_are_exact() {
        let net = parse_eqn("y = a*b*c + a*b*d + c*d*e' + a'*e*g\nz = a*b + c*d + e*g + h").unwrap();
        for s in Strategy::ALL {
            let d = decompose3_with(&net, s);
            assert!(d.max_fanin() <= 3);
            assert!(is_equivalent(&net, &d).unwrap().is_equivalent());
        }
    }

    #[test]
    fn wide_and_splits() {
        let net = parse_eqn("y = a*b*c*d*e*g*h").unwrap();
        let d = decompose3(&net);
        assert!(d.max_fanin() <= 3);
        assert!(is_equivalent(&net, &d).unwrap().is_equivalent());
        assert!(d.nodes.iter().any(|n| n.name == "f_1"));
    }

    #[test]
    fn multiplier_reuses_the_low_product() {
        let net = parse_eqn(
            "INORDER = A1 A0 B1 B0;\n\
             Y0 = A0*B0\n\
             Y1 = A1*A0'*B0 + A1*B1'*B0 + A1'*A0*B1 + A0*B1*B0'\n\
             Y2 = A1*A0'*B1 + A1*B1*B0'\n\
             Y3 = A1*A0*B1*B0\n\
             OUTORDER = Y0 Y1 Y2 Y3;",
        )
        .unwrap();
        let d = decompose3(&net);
        assert!(d.max_fanin() <= 3);
        assert!(is_equivalent(&net, &d).unwrap().is_equivalent());
        let y3 = &d.nodes[d.node_index("Y3").unwrap()];
        let names: Vec<String> = y3.fanins.iter().map(|s| d.signal_name(*s)).collect();
        assert!(names.contains(&"Y0".to_string()), "{names:?}");
        assert_eq!(decompose3(&net), d);
    }
}
