// SPDX-License-Identifier: Apache-2.0

//! Precomputed truth-table matching.
//!
//! Local functions are tables over up to four signals: three node fanin
//! slots (0..=2) and one extra signal (3) whose function is known. A
//! binding assigns each gate pin to a distinct signal with a polarity.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

use super::gate::{GateKind, GateLibrary};
use crate::costing::CostTable;

pub(crate) const EXTRA: u8 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Binding {
    pub kind: GateKind,
    /// Signal per pin; only the first `kind.arity()` entries are used.
    pub pins: [u8; 4],
    /// Bit `i` set when pin `i` reads its signal complemented.
    pub pin_neg: u8,
    /// Signals read complemented.
    pub neg_signals: u8,
    pub signals: u8,
    pub table: u16,
    pub core: u32,
}

impl Binding {
    pub fn pin_list(&self) -> impl Iterator<Item = (u8, bool)> + '_ {
        (0..self.kind.arity()).map(move |i| (self.pins[i], (self.pin_neg >> i) & 1 == 1))
    }

    pub fn cost(&self, neg_cost: &[u32; 4]) -> u32 {
        self.core + mask_cost(self.neg_signals, neg_cost)
    }
}

pub(crate) fn mask_cost(mask: u8, neg_cost: &[u32; 4]) -> u32 {
    (0..4).filter(|s| (mask >> s) & 1 == 1).map(|s| neg_cost[s]).sum()
}

/// Two gates: `inner` over the slots, `outer` reading the slots and the
/// inner gate's output on signal 3.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Composite {
    pub inner: usize,
    pub outer: usize,
    /// Core costs plus an inverter when the outer gate reads the inner
    /// output complemented.
    pub base: u32,
    pub neg_slots: u8,
}

pub(crate) struct Matcher {
    pub bindings: Vec<Binding>,
    by_table: HashMap<u16, Vec<usize>>,
    with_extra: Vec<usize>,
    depth2: HashMap<u8, Vec<Composite>>,
}

/// Widens a three-slot table to four signals (independent of signal 3).
pub(crate) fn widen(t: u8) -> u16 {
    u16::from(t) | (u16::from(t) << 8)
}

fn bit16(t: u16, row: usize) -> bool {
    (t >> row) & 1 == 1
}

impl Matcher {
    pub fn shared(lib: &GateLibrary, costs: &CostTable) -> Arc<Matcher> {
        type Key = (Vec<GateKind>, Vec<(GateKind, u32)>, u32);
        static CACHE: OnceLock<Mutex<HashMap<Key, Arc<Matcher>>>> = OnceLock::new();
        let usable: Vec<GateKind> = lib.kinds().iter().copied().filter(|k| costs.core(*k).is_ok()).collect();
        let key: Key = (
            usable.clone(),
            usable.iter().map(|k| (*k, costs.core(*k).unwrap_or(0))).collect(),
            costs.inverter(),
        );
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(m) = cache.lock().expect("matcher cache poisoned").get(&key) {
            return Arc::clone(m);
        }
        let built = Arc::new(Matcher::build(&key.1, key.2));
        cache
            .lock()
            .expect("matcher cache poisoned")
            .entry(key)
            .or_insert(built)
            .clone()
    }

    fn build(kinds: &[(GateKind, u32)], inverter: u32) -> Matcher {
        let mut bindings = Vec::new();
        let mut seen = HashSet::new();
        for &(kind, core) in kinds {
            let a = kind.arity();
            let kt = kind.table();
            let mut pins = [0u8; 4];
            let mut emit = |pins: &[u8; 4], bindings: &mut Vec<Binding>| {
                for pin_neg in 0..(1u8 << a) {
                    let mut table = 0u16;
                    for row in 0..16usize {
                        let mut idx = 0;
                        for (i, &p) in pins.iter().enumerate().take(a) {
                            let v = ((row >> p) & 1 == 1) ^ ((pin_neg >> i) & 1 == 1);
                            idx |= usize::from(v) << i;
                        }
                        if bit16(kt, idx) {
                            table |= 1 << row;
                        }
                    }
                    let signals = (0..a).fold(0u8, |m, i| m | (1 << pins[i]));
                    let neg_signals = (0..a)
                        .filter(|i| (pin_neg >> i) & 1 == 1)
                        .fold(0u8, |m, i| m | (1 << pins[i]));
                    if seen.insert((kind, table, neg_signals)) {
                        bindings.push(Binding {
                            kind,
                            pins: *pins,
                            pin_neg,
                            neg_signals,
                            signals,
                            table,
                            core,
                        });
                    }
                }
            };
            permutations(a, 0, 0, &mut pins, &mut |p| emit(p, &mut bindings));
        }
        let mut by_table: HashMap<u16, Vec<usize>> = HashMap::new();
        let mut with_extra = Vec::new();
        for (i, b) in bindings.iter().enumerate() {
            by_table.entry(b.table).or_default().push(i);
            if b.signals & (1 << EXTRA) != 0 {
                with_extra.push(i);
            }
        }

        let inner: Vec<usize> = bindings
            .iter()
            .enumerate()
            .filter(|(_, b)| b.signals & (1 << EXTRA) == 0)
            .map(|(i, _)| i)
            .collect();
        let mut best: HashMap<(u8, u8), Composite> = HashMap::new();
        let mut order: Vec<(u8, u8)> = Vec::new();
        for &o in &with_extra {
            let ob = &bindings[o];
            let reads_neg = ob.neg_signals & (1 << EXTRA) != 0;
            for &i in &inner {
                let ib = &bindings[i];
                let t1 = ib.table as u8;
                let mut t = 0u8;
                for row in 0..8usize {
                    let v3 = (t1 >> row) & 1;
                    if bit16(ob.table, row | (usize::from(v3) << 3)) {
                        t |= 1 << row;
                    }
                }
                let base = ib.core + ob.core + if reads_neg { inverter } else { 0 };
                let neg_slots = (ib.neg_signals | ob.neg_signals) & 0b111;
                let key = (t, neg_slots);
                let cand = Composite {
                    inner: i,
                    outer: o,
                    base,
                    neg_slots,
                };
                match best.get(&key) {
                    Some(c) if c.base <= base => {}
                    Some(_) => {
                        best.insert(key, cand);
                    }
                    None => {
                        best.insert(key, cand);
                        order.push(key);
                    }
                }
            }
        }
        let mut depth2: HashMap<u8, Vec<Composite>> = HashMap::new();
        for key in order {
            depth2.entry(key.0).or_default().push(best[&key]);
        }
        Matcher {
            bindings,
            by_table,
            with_extra,
            depth2,
        }
    }

    /// Bindings realizing a three-slot table, in enumeration order.
    pub fn exact(&self, t3: u8) -> impl Iterator<Item = (usize, &Binding)> {
        self.by_table
            .get(&widen(t3))
            .into_iter()
            .flatten()
            .map(move |&i| (i, &self.bindings[i]))
    }

    /// Cheapest single gate for `t3` among bindings accepted by `keep`.
    pub fn best_single(&self, t3: u8, neg_cost: &[u32; 4], keep: impl Fn(&Binding) -> bool) -> Option<(usize, u32)> {
        let mut best: Option<(usize, u32)> = None;
        for (i, b) in self.exact(t3) {
            if !keep(b) {
                continue;
            }
            let c = b.cost(neg_cost);
            if best.is_none_or(|(_, bc)| c < bc) {
                best = Some((i, c));
            }
        }
        best
    }

    /// Cheapest gate reading signal 3, whose function over the slots is
    /// `extra`, that realizes `t3`.
    pub fn best_with_extra(&self, t3: u8, extra: u8, neg_cost: &[u32; 4]) -> Option<(usize, u32)> {
        let mut best: Option<(usize, u32)> = None;
        for &i in &self.with_extra {
            let b = &self.bindings[i];
            let fits = (0..8usize).all(|row| {
                let v3 = (extra >> row) & 1;
                bit16(b.table, row | (usize::from(v3) << 3)) == ((t3 >> row) & 1 == 1)
            });
            if fits {
                let c = b.cost(neg_cost);
                if best.is_none_or(|(_, bc)| c < bc) {
                    best = Some((i, c));
                }
            }
        }
        best
    }

    pub fn best_depth2(&self, t3: u8, neg_cost: &[u32; 4]) -> Option<(Composite, u32)> {
        let mut best: Option<(Composite, u32)> = None;
        for c in self.depth2.get(&t3).into_iter().flatten() {
            let cost = c.base + mask_cost(c.neg_slots, neg_cost);
            if best.is_none_or(|(_, bc)| cost < bc) {
                best = Some((*c, cost));
            }
        }
        best
    }
}

/// Visits every injective assignment of `arity` pins to signals `0..4`.
fn permutations(arity: usize, depth: usize, used: u8, pins: &mut [u8; 4], f: &mut impl FnMut(&[u8; 4])) {
    if depth == arity {
        f(pins);
        return;
    }
    for s in 0..4u8 {
        if used & (1 << s) == 0 {
            pins[depth] = s;
            permutations(arity, depth + 1, used | (1 << s), pins, f);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matcher() -> Arc<Matcher> {
        Matcher::shared(&GateLibrary::crosstalk(), &CostTable::crosstalk())
    }

    #[test]
    fn binding_tables_are_consistent() {
        let m = matcher();
        for b in &m.bindings {
            for row in 0..16usize {
                let pins: Vec<bool> = b.pin_list().map(|(s, neg)| ((row >> s) & 1 == 1) ^ neg).collect();
                assert_eq!(b.kind.eval(&pins), bit16(b.table, row));
            }
        }
    }

    #[test]
    fn xor_has_no_single_gate() {
        assert!(matcher().exact(0x66).next().is_none());
        assert!(matcher().exact(0x96).next().is_none());
    }

    #[test]
    fn majority_matches() {
        let m = matcher();
        let (i, cost) = m.best_single(0xE8, &[2; 4], |_| true).unwrap();
        assert_eq!(m.bindings[i].kind, GateKind::Maj3);
        assert_eq!(cost, 5);
    }

    #[test]
    fn sum_from_carry_complement() {
        let m = matcher();
        // sum of a full adder using the complemented carry as extra signal
        let (i, cost) = m.best_with_extra(0x96, !0xE8, &[2; 4]).unwrap();
        assert_eq!(m.bindings[i].kind, GateKind::Wmaj4);
        assert_eq!(cost, 5);
    }

    #[test]
    fn depth_two_covers_xor3() {
        let m = matcher();
        let (c, cost) = m.best_depth2(0x96, &[2; 4]).unwrap();
        assert_eq!(cost, 8);
        let inner = m.bindings[c.inner].table as u8;
        let outer = m.bindings[c.outer].table;
        for row in 0..8usize {
            let v3 = (inner >> row) & 1;
            assert_eq!(bit16(outer, row | (usize::from(v3) << 3)), (0x96 >> row) & 1 == 1);
        }
    }
}
