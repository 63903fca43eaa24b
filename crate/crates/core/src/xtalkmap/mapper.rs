// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeSet, HashSet};

use super::gate::{GateKind, GateLibrary};
use super::mapped::{Driver, MappedNetwork, MappedOutput};
use super::matcher::{Binding, Matcher, EXTRA};
use super::passes::optimize;
use super::{Builder, MapError, Val};
use crate::boolcore::{minimal_cover, Literal, Network, Signal, Sop, VAR_MASKS};
use crate::costing::{transistor_count, CostTable};

/// Source of a local gate pin inside an [`Implementation`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Src {
    /// Node fanin slot.
    Slot(u8),
    /// An existing network signal offered to the node.
    Extra(u8),
    /// Output of an earlier local gate.
    Local(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalGate {
    pub kind: GateKind,
    pub pins: Vec<(Src, bool)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Root {
    Const(bool),
    Lit(Src, bool),
}

/// Gates realizing one node function. `cost` is `T + 2*I` with `I`
/// counting each distinct complemented source once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Implementation {
    pub gates: Vec<LocalGate>,
    pub root: Root,
    pub cost: u32,
}

impl Implementation {
    /// Function over the three slots; `extras[e]` is the table of
    /// `Src::Extra(e)`.
    pub fn table(&self, extras: &[u8]) -> u8 {
        let mut out = 0u8;
        for row in 0..8usize {
            let mut vals: Vec<bool> = Vec::with_capacity(self.gates.len());
            let read = |src: Src, vals: &[bool]| match src {
                Src::Slot(s) => (row >> s) & 1 == 1,
                Src::Extra(e) => (extras[e as usize] >> row) & 1 == 1,
                Src::Local(j) => vals[j],
            };
            for g in &self.gates {
                let pins: Vec<bool> = g.pins.iter().map(|(s, n)| read(*s, &vals) ^ n).collect();
                vals.push(g.kind.eval(&pins));
            }
            let v = match self.root {
                Root::Const(b) => b,
                Root::Lit(s, n) => read(s, &vals) ^ n,
            };
            out |= u8::from(v) << row;
        }
        out
    }

    /// Distinct complemented sources, including the root.
    pub fn complemented_sources(&self) -> BTreeSet<Src> {
        let mut set: BTreeSet<Src> = self
            .gates
            .iter()
            .flat_map(|g| g.pins.iter())
            .filter(|(_, n)| *n)
            .map(|(s, _)| *s)
            .collect();
        if let Root::Lit(s, true) = self.root {
            set.insert(s);
        }
        set
    }

    fn recost(mut self, p: &Pricing) -> Self {
        let core: u32 = self.gates.iter().map(|g| p.core(g.kind)).sum();
        let inv: u32 = self
            .complemented_sources()
            .into_iter()
            .map(|s| match s {
                Src::Slot(i) => p.neg_cost[i as usize],
                Src::Extra(_) => p.neg_cost[EXTRA as usize],
                Src::Local(_) => p.inverter,
            })
            .sum();
        self.cost = core + inv;
        self
    }
}

/// Marginal costs for one node: the cost of reading each slot (and the
/// extra signal) complemented.
#[derive(Clone, Debug)]
struct Pricing<'a> {
    costs: &'a CostTable,
    neg_cost: [u32; 4],
    inverter: u32,
}

impl Pricing<'_> {
    fn core(&self, kind: GateKind) -> u32 {
        self.costs.core(kind).unwrap_or(u32::MAX / 64)
    }
}

/// A library gate realizing a node function directly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GateMatch {
    pub kind: GateKind,
    /// Pin bindings: slot literals in pin order.
    pub pins: Vec<Literal>,
    pub output_complemented: bool,
}

fn check_slots(f: &Sop) -> Result<(), MapError> {
    match f.support().last() {
        Some(v) if *v >= 3 => Err(MapError::Arity {
            node: f.to_string(),
            fanins: *v as usize + 1,
        }),
        _ => Ok(()),
    }
}

fn table3(f: &Sop) -> u8 {
    let t = f.local_table(&[0, 1, 2]);
    t as u8
}

fn binding_pins(b: &Binding, extra: (Src, bool)) -> Vec<(Src, bool)> {
    b.pin_list()
        .map(|(s, n)| {
            if s == EXTRA {
                (extra.0, extra.1 ^ n)
            } else {
                (Src::Slot(s), n)
            }
        })
        .collect()
}

fn single(b: &Binding, extra: (Src, bool), p: &Pricing) -> Implementation {
    Implementation {
        gates: vec![LocalGate {
            kind: b.kind,
            pins: binding_pins(b, extra),
        }],
        root: Root::Lit(Src::Local(0), false),
        cost: 0,
    }
    .recost(p)
}

/// Library membership test: the match whose pins use the function's own
/// literals when possible, then the cheapest core.
pub fn classify(f: &Sop, lib: &GateLibrary) -> Result<Option<GateMatch>, MapError> {
    check_slots(f)?;
    let m = Matcher::shared(lib, &CostTable::crosstalk());
    let lits = f.literals();
    let t = table3(f);
    let mut best: Option<((usize, u32), &Binding)> = None;
    for (_, b) in m.exact(t) {
        let foreign = b
            .pin_list()
            .filter(|(s, n)| !lits.contains(&Literal::new(u32::from(*s), *n)))
            .count();
        let key = (foreign, b.core);
        if best.is_none_or(|(k, _)| key < k) {
            best = Some((key, b));
        }
    }
    Ok(best.map(|(_, b)| GateMatch {
        kind: b.kind,
        pins: b.pin_list().map(|(s, n)| Literal::new(u32::from(s), n)).collect(),
        output_complemented: false,
    }))
}

/// A literal present in every cube. Ties prefer a literal whose cofactor
/// is a library gate, then the smallest literal.
pub fn find_common_literal(f: &Sop, lib: &GateLibrary) -> Option<Literal> {
    let cubes = f.cubes();
    if cubes.len() < 2 {
        return None;
    }
    let common: Vec<Literal> = cubes[0]
        .literals()
        .iter()
        .copied()
        .filter(|l| cubes.iter().all(|c| c.contains(*l)))
        .collect();
    common.iter().copied().min_by_key(|l| {
        let classifies = f
            .cofactor(*l)
            .ok()
            .and_then(|q| classify(&q, lib).ok().flatten())
            .is_some();
        (!classifies, *l)
    })
}

/// `f = l * f_l` with `f_l` the cofactor of `f` by `l`.
pub fn factor_out(f: &Sop, l: Literal) -> Result<(Literal, Sop), MapError> {
    if f.cubes().is_empty() || !f.cubes().iter().all(|c| c.contains(l)) {
        return Err(MapError::Precondition(format!(
            "literal x{}{} is not in every cube",
            l.var,
            if l.complemented { "'" } else { "" }
        )));
    }
    let q = f.cofactor(l).map_err(|e| MapError::Precondition(e.to_string()))?;
    Ok((l, q))
}

/// Both realizations of a two-literal function: the gate over its own
/// literals, and the dual gate over the literals of its complement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DemorganChoice {
    pub direct: Option<Implementation>,
    pub variant: Option<Implementation>,
}

impl DemorganChoice {
    /// The variant only when strictly cheaper.
    pub fn uses_variant(&self) -> bool {
        match (&self.direct, &self.variant) {
            (Some(d), Some(v)) => v.cost < d.cost,
            (None, Some(_)) => true,
            _ => false,
        }
    }

    pub fn chosen(&self) -> Option<&Implementation> {
        if self.uses_variant() {
            self.variant.as_ref()
        } else {
            self.direct.as_ref()
        }
    }
}

/// Costs the two forms of a two-literal function whose slots are primary
/// inputs without existing inverters.
pub fn choose_demorgan_variant(f: &Sop, lib: &GateLibrary, costs: &CostTable) -> Result<DemorganChoice, MapError> {
    check_slots(f)?;
    if f.literal_count() != 2 {
        return Err(MapError::Precondition(format!(
            "{} literals; the De Morgan choice needs exactly 2",
            f.literal_count()
        )));
    }
    let m = Matcher::shared(lib, costs);
    let p = Pricing {
        costs,
        neg_cost: [costs.inverter(); 4],
        inverter: costs.inverter(),
    };
    Ok(demorgan(&m, f, table3(f), &p))
}

fn demorgan(m: &Matcher, f: &Sop, t: u8, p: &Pricing) -> DemorganChoice {
    let over = |lits: &BTreeSet<Literal>| {
        m.best_single(t, &p.neg_cost, |b| {
            b.pin_list()
                .all(|(s, n)| s < EXTRA && lits.contains(&Literal::new(u32::from(s), n)))
        })
        .map(|(i, _)| single(&m.bindings[i], (Src::Extra(0), false), p))
    };
    let direct = over(&f.literals());
    let variant = f.complement_demorgan().ok().and_then(|dm| over(&dm.literals()));
    DemorganChoice { direct, variant }
}

fn literal_root(t: u8) -> Option<Root> {
    match t {
        0 => return Some(Root::Const(false)),
        0xFF => return Some(Root::Const(true)),
        _ => {}
    }
    (0..3u8).find_map(|v| {
        let vt = VAR_MASKS[v as usize] as u8;
        if t == vt {
            Some(Root::Lit(Src::Slot(v), false))
        } else if t == !vt {
            Some(Root::Lit(Src::Slot(v), true))
        } else {
            None
        }
    })
}

struct Ctx<'a> {
    matcher: &'a Matcher,
    lib: &'a GateLibrary,
    pricing: Pricing<'a>,
    naive_only: bool,
}

/// An existing signal offered to a node: its table over the node's slots
/// and the cost of reading it complemented.
#[derive(Clone, Copy, Debug)]
struct Extra {
    table: u8,
    neg_cost: u32,
}

fn pick(cands: impl IntoIterator<Item = Implementation>) -> Option<Implementation> {
    let mut best: Option<Implementation> = None;
    for c in cands {
        if best.as_ref().is_none_or(|b| c.cost < b.cost) {
            best = Some(c);
        }
    }
    best
}

/// Per-node flow. `f` is over slots `0..3`.
fn map_local(ctx: &Ctx, f: &Sop, extras: &[Extra]) -> Implementation {
    let t = table3(f);
    let p = &ctx.pricing;
    if let Some(root) = literal_root(t) {
        return Implementation {
            gates: vec![],
            root,
            cost: 0,
        }
        .recost(p);
    }
    let naive = naive_fallback(ctx, t);
    if ctx.naive_only {
        return naive;
    }
    let m = ctx.matcher;
    let mut cands = Vec::new();
    if f.literal_count() <= 2 {
        if let Some(c) = demorgan(m, f, t, p).chosen() {
            cands.push(c.clone());
        }
    } else if let Some((i, _)) = m.best_single(t, &p.neg_cost, |_| true) {
        cands.push(single(&m.bindings[i], (Src::Extra(0), false), p));
    } else {
        if let Some(l) = find_common_literal(f, ctx.lib) {
            if let Ok((_, fl)) = factor_out(f, l) {
                cands.extend(factored(ctx, t, &fl));
            }
        }
        for (e, x) in extras.iter().enumerate() {
            let mut neg = p.neg_cost;
            neg[EXTRA as usize] = x.neg_cost;
            if let Some((i, _)) = m.best_with_extra(t, x.table, &neg) {
                let pe = Pricing {
                    neg_cost: neg,
                    ..p.clone()
                };
                cands.push(single(&m.bindings[i], (Src::Extra(e as u8), false), &pe));
            }
        }
        if let Some((c, _)) = m.best_depth2(t, &p.neg_cost) {
            let inner = &m.bindings[c.inner];
            let outer = &m.bindings[c.outer];
            cands.push(
                Implementation {
                    gates: vec![
                        LocalGate {
                            kind: inner.kind,
                            pins: binding_pins(inner, (Src::Extra(0), false)),
                        },
                        LocalGate {
                            kind: outer.kind,
                            pins: binding_pins(outer, (Src::Local(0), false)),
                        },
                    ],
                    root: Root::Lit(Src::Local(1), false),
                    cost: 0,
                }
                .recost(p),
            );
        }
    }
    match pick(cands) {
        Some(best) if best.cost <= naive.cost => best,
        _ => naive,
    }
}

/// `f = l * f_l`: maps `f_l`, then combines it with the slots through one
/// more gate.
fn factored(ctx: &Ctx, t: u8, fl: &Sop) -> Option<Implementation> {
    let inner = map_local(ctx, fl, &[]);
    let Root::Lit(src, _) = inner.root else {
        return None;
    };
    let src_table = match src {
        Src::Slot(s) => VAR_MASKS[s as usize] as u8,
        _ => {
            let probe = Implementation {
                root: Root::Lit(src, false),
                ..inner.clone()
            };
            probe.table(&[])
        }
    };
    let p = &ctx.pricing;
    let mut neg = p.neg_cost;
    neg[EXTRA as usize] = match src {
        Src::Slot(s) => p.neg_cost[s as usize],
        _ => p.inverter,
    };
    let (i, _) = ctx.matcher.best_with_extra(t, src_table, &neg)?;
    let b = &ctx.matcher.bindings[i];
    let mut gates = inner.gates;
    gates.push(LocalGate {
        kind: b.kind,
        pins: binding_pins(b, (src, false)),
    });
    let root = Root::Lit(Src::Local(gates.len() - 1), false);
    Some(Implementation { gates, root, cost: 0 }.recost(p))
}

/// NAND/NOR-only realizations: NAND-NAND sum of products, NOR-NOR product
/// of sums, and Shannon expansion on each variable; the cheapest wins.
fn naive_fallback(ctx: &Ctx, t: u8) -> Implementation {
    let p = &ctx.pricing;
    let mut cands = Vec::new();
    if let Some(c) = nand_sop(t) {
        cands.push(c.recost(p));
    }
    if let Some(c) = nor_pos(t) {
        cands.push(c.recost(p));
    }
    for v in 0..3u8 {
        if let Some(c) = shannon(t, v) {
            cands.push(c.recost(p));
        }
    }
    pick(cands).expect("Shannon expansion always applies to a non-trivial function")
}

#[derive(Default)]
struct Naive {
    gates: Vec<LocalGate>,
}

type Lit = (Src, bool);

impl Naive {
    fn push(&mut self, kind: GateKind, pins: Vec<Lit>) -> Lit {
        self.gates.push(LocalGate { kind, pins });
        (Src::Local(self.gates.len() - 1), false)
    }

    fn nand(&mut self, xs: Vec<Lit>) -> Lit {
        match xs.len() {
            1 => (xs[0].0, !xs[0].1),
            2 => self.push(GateKind::Nand2, xs),
            _ => self.push(GateKind::Nand3, xs),
        }
    }

    fn nor(&mut self, xs: Vec<Lit>) -> Lit {
        match xs.len() {
            1 => (xs[0].0, !xs[0].1),
            2 => self.push(GateKind::Nor2, xs),
            _ => self.push(GateKind::Nor3, xs),
        }
    }

    fn and(&mut self, xs: Vec<Lit>) -> Lit {
        let (s, n) = self.nand(xs);
        (s, !n)
    }

    fn or(&mut self, xs: Vec<Lit>) -> Lit {
        self.nand(xs.into_iter().map(|(s, n)| (s, !n)).collect())
    }

    /// NAND-NAND cover of `t`; `None` beyond three cubes.
    fn sop(&mut self, t: u8) -> Option<Lit> {
        let cover = minimal_cover(u64::from(t), 3);
        if cover.cubes().len() > 3 || cover.cubes().is_empty() {
            return None;
        }
        let terms: Vec<Lit> = cover
            .cubes()
            .iter()
            .map(|c| {
                let lits = c
                    .literals()
                    .iter()
                    .map(|l| (Src::Slot(l.var as u8), l.complemented))
                    .collect();
                self.nand(lits)
            })
            .collect();
        Some(self.nand(terms))
    }

    fn finish(self, root: Lit) -> Implementation {
        Implementation {
            gates: self.gates,
            root: Root::Lit(root.0, root.1),
            cost: 0,
        }
    }
}

fn nand_sop(t: u8) -> Option<Implementation> {
    let mut nb = Naive::default();
    let root = nb.sop(t)?;
    Some(nb.finish(root))
}

fn nor_pos(t: u8) -> Option<Implementation> {
    let cover = minimal_cover(u64::from(!t), 3);
    if cover.cubes().len() > 3 || cover.cubes().is_empty() {
        return None;
    }
    let mut nb = Naive::default();
    let terms: Vec<Lit> = cover
        .cubes()
        .iter()
        .map(|c| {
            // a cube of the complement, built as a NOR of negated literals
            let lits = c
                .literals()
                .iter()
                .map(|l| (Src::Slot(l.var as u8), !l.complemented))
                .collect();
            nb.nor(lits)
        })
        .collect();
    let root = nb.nor(terms);
    Some(nb.finish(root))
}

fn shannon(t: u8, v: u8) -> Option<Implementation> {
    // cofactors, copied to both halves so they do not depend on v
    let spread = |value: bool| {
        (0..8usize).fold(0u8, |acc, row| {
            let src = if value { row | (1 << v) } else { row & !(1 << v) };
            acc | (((t >> src) & 1) << row)
        })
    };
    let (f1, f0) = (spread(true), spread(false));
    if f1 == f0 {
        return None;
    }
    let mut nb = Naive::default();
    let sub = |nb: &mut Naive, ft: u8| -> Option<Lit> {
        match literal_root(ft) {
            Some(Root::Const(_)) => None,
            Some(Root::Lit(s, n)) => Some((s, n)),
            None => nb.sop(ft),
        }
    };
    let x = (Src::Slot(v), false);
    let xn = (Src::Slot(v), true);
    let root = match (f1, f0) {
        (0, _) => {
            let g0 = sub(&mut nb, f0)?;
            nb.and(vec![xn, g0])
        }
        (0xFF, _) => {
            let g0 = sub(&mut nb, f0)?;
            nb.or(vec![x, g0])
        }
        (_, 0) => {
            let g1 = sub(&mut nb, f1)?;
            nb.and(vec![x, g1])
        }
        (_, 0xFF) => {
            let g1 = sub(&mut nb, f1)?;
            nb.or(vec![xn, g1])
        }
        _ => {
            let g1 = sub(&mut nb, f1)?;
            let g0 = sub(&mut nb, f0)?;
            let a = nb.nand(vec![x, g1]);
            let b = nb.nand(vec![xn, g0]);
            nb.nand(vec![a, b])
        }
    };
    Some(nb.finish(root))
}

/// Maps a decomposed network (at most three fanins per node).
///
/// Each node may be realized in either output polarity. Starting from all
/// nodes positive, flipping a node is kept when it lowers the transistor
/// count of the whole mapping; nodes are visited in order until a full
/// round changes nothing. The NAND/NOR-only mapping stays a candidate, so
/// the result never costs more than it.
pub fn map_network(net: &Network, lib: &GateLibrary, costs: &CostTable) -> Result<MappedNetwork, MapError> {
    let total = |m: &MappedNetwork| transistor_count(m, costs).unwrap_or(u32::MAX);
    let mut phase = vec![false; net.nodes.len()];
    let mut best = map_with(net, lib, costs, false, &phase)?;
    let mut best_cost = total(&best);
    for _ in 0..MAX_PHASE_ROUNDS {
        let mut improved = false;
        for j in 0..phase.len() {
            phase[j] = !phase[j];
            let m = map_with(net, lib, costs, false, &phase)?;
            let c = total(&m);
            if c < best_cost {
                best = m;
                best_cost = c;
                improved = true;
            } else {
                phase[j] = !phase[j];
            }
        }
        if !improved {
            break;
        }
    }
    let naive = map_network_naive(net, lib, costs)?;
    Ok(if total(&naive) < best_cost { naive } else { best })
}

const MAX_PHASE_ROUNDS: usize = 3;

/// Reference mapping that realizes every node with the NAND/NOR fallback
/// alone, followed by the same network-wide passes.
pub fn map_network_naive(net: &Network, lib: &GateLibrary, costs: &CostTable) -> Result<MappedNetwork, MapError> {
    map_with(net, lib, costs, true, &vec![false; net.nodes.len()])
}

/// What a mapped node is known to compute: its table over the positive
/// drivers it read.
struct NodeInfo {
    drivers: Vec<Driver>,
    table: u8,
}

const MAX_EXTRAS: usize = 8;

/// `phase[j]` realizes node `j` as its complement and hands consumers the
/// inverted value.
fn map_with(
    net: &Network,
    lib: &GateLibrary,
    costs: &CostTable,
    naive_only: bool,
    phase: &[bool],
) -> Result<MappedNetwork, MapError> {
    for node in &net.nodes {
        if node.fanins.len() > 3 {
            return Err(MapError::Arity {
                node: node.name.clone(),
                fanins: node.fanins.len(),
            });
        }
    }
    for k in lib.kinds() {
        costs.core(*k)?;
    }
    let matcher = Matcher::shared(lib, costs);
    let inv = costs.inverter();
    let mut b = Builder::new(net.inputs.clone());
    b.reserve(net.nodes.iter().map(|n| &n.name));
    let mut vals: Vec<Val> = Vec::with_capacity(net.nodes.len());
    let mut infos: Vec<Option<NodeInfo>> = Vec::with_capacity(net.nodes.len());

    for (j, node) in net.nodes.iter().enumerate() {
        // normalize fanins to distinct positive drivers
        let mut drivers: Vec<Driver> = Vec::new();
        let mut f = node.func.clone();
        let mut map: Vec<Literal> = Vec::with_capacity(node.fanins.len());
        for (slot, s) in node.fanins.iter().enumerate() {
            let v = match *s {
                Signal::Input(i) => Val::new(Driver::Input(i), false),
                Signal::Node(j) => vals[j],
                Signal::Const(c) => Val::new(Driver::Const(c), false),
            };
            if let Driver::Const(c) = v.driver {
                f = f.restrict(slot as u32, c ^ v.neg);
                map.push(Literal::pos(0));
                continue;
            }
            let idx = match drivers.iter().position(|d| *d == v.driver) {
                Some(i) => i,
                None => {
                    drivers.push(v.driver);
                    drivers.len() - 1
                }
            };
            map.push(Literal::new(idx as u32, v.neg));
        }
        let f = f.map_vars(&|v| map[v as usize]).scc();
        let mut neg_cost = [inv; 4];
        for (i, d) in drivers.iter().enumerate() {
            neg_cost[i] = match d {
                Driver::Input(k) if b.pi_neg.contains(k) => 0,
                Driver::Gate(g) if b.has_inverter(*g) => 0,
                _ => inv,
            };
        }
        let t = table3(&f);

        let (extra_vals, extras) = if naive_only {
            (Vec::new(), Vec::new())
        } else {
            offered_extras(&vals, &infos, &drivers, &b, inv)
        };
        let ctx = Ctx {
            matcher: &matcher,
            lib,
            pricing: Pricing {
                costs,
                neg_cost,
                inverter: inv,
            },
            naive_only,
        };
        let flip = phase[j] && literal_root(t).is_none();
        let imp = if flip {
            map_local(&ctx, &minimal_cover(u64::from(!t), 3), &extras)
        } else {
            map_local(&ctx, &f, &extras)
        };
        debug_assert_eq!(
            imp.table(&extras.iter().map(|x| x.table).collect::<Vec<_>>()),
            if flip { !t } else { t },
            "node {}",
            node.name
        );

        let src_val = |src: Src, created: &[usize]| match src {
            Src::Slot(s) => Val::new(drivers[s as usize], false),
            Src::Extra(e) => extra_vals[e as usize],
            Src::Local(j) => Val::new(Driver::Gate(created[j]), false),
        };
        let root_local = match imp.root {
            Root::Lit(Src::Local(r), _) => Some(r),
            _ => None,
        };
        let mut created = Vec::with_capacity(imp.gates.len());
        let mut helper = 0;
        for (j, g) in imp.gates.iter().enumerate() {
            let pins = g
                .pins
                .iter()
                .map(|(s, n)| {
                    let v = src_val(*s, &created);
                    b.pin(if *n { v.negate() } else { v })
                })
                .collect();
            let idx = if Some(j) == root_local {
                b.gate_exact(&node.name, g.kind, pins)
            } else {
                helper += 1;
                let hint = format!("{}_{helper}", node.name);
                b.gate(&hint, g.kind, pins)
            };
            created.push(idx);
        }
        let val = match imp.root {
            Root::Const(c) => Val::new(Driver::Const(c), false),
            Root::Lit(s, n) => {
                let v = src_val(s, &created);
                if n ^ flip {
                    v.negate()
                } else {
                    v
                }
            }
        };
        vals.push(val);
        infos.push(match val.driver {
            Driver::Gate(_) => Some(NodeInfo {
                drivers: drivers.clone(),
                table: t,
            }),
            _ => None,
        });
    }

    let outputs: Vec<MappedOutput> = net
        .outputs
        .iter()
        .map(|o| {
            let v = match o.signal {
                Signal::Input(i) => Val::new(Driver::Input(i), false),
                Signal::Node(j) => vals[j],
                Signal::Const(c) => Val::new(Driver::Const(c), false),
            };
            MappedOutput {
                name: o.name.clone(),
                pin: b.pin(if o.complemented { v.negate() } else { v }),
            }
        })
        .collect();
    b.m.outputs = outputs;
    let m = optimize(b.m, lib, costs)?;
    m.validate(Some(lib))?;
    Ok(m)
}

/// Earlier gate-driven nodes whose inputs are a subset of this node's
/// drivers, most recent first.
fn offered_extras(
    vals: &[Val],
    infos: &[Option<NodeInfo>],
    drivers: &[Driver],
    b: &Builder,
    inv: u32,
) -> (Vec<Val>, Vec<Extra>) {
    let mut out_vals = Vec::new();
    let mut out = Vec::new();
    let mut seen: HashSet<Driver> = drivers.iter().copied().collect();
    for j in (0..infos.len()).rev() {
        if out.len() == MAX_EXTRAS {
            break;
        }
        let Some(info) = &infos[j] else { continue };
        if seen.contains(&vals[j].driver) {
            continue;
        }
        let Some(pos): Option<Vec<usize>> = info
            .drivers
            .iter()
            .map(|d| drivers.iter().position(|x| x == d))
            .collect()
        else {
            continue;
        };
        seen.insert(vals[j].driver);
        // value of node j (positive driver) over this node's slots
        let mut table = 0u8;
        for row in 0..8usize {
            let mut r = 0usize;
            for (k, p) in pos.iter().enumerate() {
                r |= ((row >> p) & 1) << k;
            }
            let v = ((info.table >> r) & 1) ^ u8::from(vals[j].neg);
            table |= v << row;
        }
        let neg_cost = match vals[j].driver {
            Driver::Gate(g) if b.has_inverter(g) => 0,
            _ => inv,
        };
        out_vals.push(Val::new(vals[j].driver, false));
        out.push(Extra { table, neg_cost });
    }
    (out_vals, out)
}
