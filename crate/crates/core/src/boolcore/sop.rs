// SPDX-License-Identifier: Apache-2.0

//! Literals, cubes and sum-of-products covers.
//!
//! Variables are plain `u32` indices. Inside a [`Node`](super::Node) they
//! index the node's fanin slots; the decomposition passes reuse the same
//! types with network-global signal indices.

use std::collections::BTreeSet;
use std::fmt;

use super::BoolError;

/// A variable together with its polarity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: u32,
    pub complemented: bool,
}

impl Literal {
    pub const fn new(var: u32, complemented: bool) -> Self {
        Self { var, complemented }
    }

    pub const fn pos(var: u32) -> Self {
        Self::new(var, false)
    }

    pub const fn neg(var: u32) -> Self {
        Self::new(var, true)
    }

    #[must_use]
    pub const fn negate(self) -> Self {
        Self::new(self.var, !self.complemented)
    }

    pub fn eval(self, value: bool) -> bool {
        value ^ self.complemented
    }
}

/// A product term. Literals are kept sorted by variable and each variable
/// occurs at most once; a contradictory product cannot be constructed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cube {
    lits: Vec<Literal>,
}

impl Cube {
    /// The empty product (constant 1).
    pub fn one() -> Self {
        Self::default()
    }

    /// Builds a cube, returning `None` when it contains both `x` and `x'`.
    pub fn new(lits: impl IntoIterator<Item = Literal>) -> Option<Self> {
        let mut lits: Vec<Literal> = lits.into_iter().collect();
        lits.sort_unstable();
        lits.dedup();
        if lits.windows(2).any(|w| w[0].var == w[1].var) {
            return None;
        }
        Some(Self { lits })
    }

    pub fn literals(&self) -> &[Literal] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn contains(&self, lit: Literal) -> bool {
        self.lits.binary_search(&lit).is_ok()
    }

    pub fn has_var(&self, var: u32) -> bool {
        self.lits.iter().any(|l| l.var == var)
    }

    /// True when every literal of `self` also occurs in `other`.
    pub fn divides(&self, other: &Cube) -> bool {
        self.lits.iter().all(|l| other.contains(*l))
    }

    pub fn and(&self, other: &Cube) -> Option<Cube> {
        Cube::new(self.lits.iter().chain(other.lits.iter()).copied())
    }

    /// Removes every literal of `divisor` from `self`.
    #[must_use]
    pub fn quotient(&self, divisor: &Cube) -> Cube {
        Cube {
            lits: self.lits.iter().copied().filter(|l| !divisor.contains(*l)).collect(),
        }
    }

    #[must_use]
    pub fn without(&self, lit: Literal) -> Cube {
        Cube {
            lits: self.lits.iter().copied().filter(|l| *l != lit).collect(),
        }
    }

    pub fn intersection(&self, other: &Cube) -> Cube {
        Cube {
            lits: self.lits.iter().copied().filter(|l| other.contains(*l)).collect(),
        }
    }

    pub fn eval(&self, value: impl Fn(u32) -> bool) -> bool {
        self.lits.iter().all(|l| l.eval(value(l.var)))
    }

    /// Bit-parallel evaluation: `words[v]` holds 64 assignments of variable `v`.
    pub fn eval_word(&self, words: &[u64]) -> u64 {
        self.lits.iter().fold(!0u64, |acc, l| {
            let w = words[l.var as usize];
            acc & if l.complemented { !w } else { w }
        })
    }

    fn map_vars(&self, f: &impl Fn(u32) -> Literal) -> Option<Cube> {
        Cube::new(self.lits.iter().map(|l| {
            let m = f(l.var);
            if l.complemented {
                m.negate()
            } else {
                m
            }
        }))
    }
}

/// A sum of products. Cubes are sorted and unique. The empty cover is
/// constant 0 and the cover holding only the empty cube is constant 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sop {
    cubes: Vec<Cube>,
}

impl Sop {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self {
            cubes: vec![Cube::one()],
        }
    }

    pub fn constant(value: bool) -> Self {
        if value {
            Self::one()
        } else {
            Self::zero()
        }
    }

    pub fn literal(lit: Literal) -> Self {
        Self {
            cubes: vec![Cube { lits: vec![lit] }],
        }
    }

    pub fn from_cubes(cubes: impl IntoIterator<Item = Cube>) -> Self {
        let mut cubes: Vec<Cube> = cubes.into_iter().collect();
        cubes.sort_unstable();
        cubes.dedup();
        Self { cubes }
    }

    /// Builds a cover from literal lists, dropping contradictory products.
    pub fn from_literal_lists<I, C>(lists: I) -> Self
    where
        I: IntoIterator<Item = C>,
        C: IntoIterator<Item = Literal>,
    {
        Self::from_cubes(lists.into_iter().filter_map(Cube::new))
    }

    pub fn cubes(&self) -> &[Cube] {
        &self.cubes
    }

    pub fn is_zero(&self) -> bool {
        self.cubes.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.cubes.len() == 1 && self.cubes[0].is_empty()
    }

    /// Syntactic constant check (`Some(value)` for the two normal forms).
    pub fn as_constant(&self) -> Option<bool> {
        if self.is_zero() {
            Some(false)
        } else if self.is_one() {
            Some(true)
        } else {
            None
        }
    }

    /// Returns the literal when the cover is a single one-literal cube.
    pub fn as_literal(&self) -> Option<Literal> {
        match self.cubes.as_slice() {
            [c] if c.len() == 1 => Some(c.lits[0]),
            _ => None,
        }
    }

    /// Distinct literals (variable and polarity) appearing in any cube.
    pub fn literals(&self) -> BTreeSet<Literal> {
        self.cubes.iter().flat_map(|c| c.lits.iter().copied()).collect()
    }

    /// Number of distinct (variable, polarity) pairs.
    pub fn literal_count(&self) -> usize {
        self.literals().len()
    }

    /// Total literal occurrences over all cubes.
    pub fn literal_occurrences(&self) -> usize {
        self.cubes.iter().map(Cube::len).sum()
    }

    /// Sorted list of variables the cover mentions.
    pub fn support(&self) -> Vec<u32> {
        let vars: BTreeSet<u32> = self.cubes.iter().flat_map(|c| c.lits.iter().map(|l| l.var)).collect();
        vars.into_iter().collect()
    }

    pub fn has_var(&self, var: u32) -> bool {
        self.cubes.iter().any(|c| c.has_var(var))
    }

    pub fn or(&self, other: &Sop) -> Sop {
        Sop::from_cubes(self.cubes.iter().chain(other.cubes.iter()).cloned())
    }

    pub fn and(&self, other: &Sop) -> Sop {
        let mut out = Vec::with_capacity(self.cubes.len() * other.cubes.len());
        for a in &self.cubes {
            for b in &other.cubes {
                if let Some(c) = a.and(b) {
                    out.push(c);
                }
            }
        }
        Sop::from_cubes(out)
    }

    /// Sets `var` to `value` and simplifies.
    pub fn restrict(&self, var: u32, value: bool) -> Sop {
        let lit = Literal::new(var, value);
        Sop::from_cubes(
            self.cubes
                .iter()
                .filter(|c| !c.contains(lit))
                .map(|c| c.without(lit.negate())),
        )
    }

    /// Cofactor with respect to a literal being true: cubes holding the
    /// literal lose it, cubes holding its complement vanish.
    pub fn cofactor(&self, lit: Literal) -> Result<Sop, BoolError> {
        if !self.has_var(lit.var) {
            return Err(BoolError::VariableAbsent(lit.var));
        }
        Ok(self.restrict(lit.var, !lit.complemented))
    }

    /// Single-cube containment: drops every cube implied by another cube.
    #[must_use]
    pub fn scc(&self) -> Sop {
        let mut keep: Vec<Cube> = Vec::with_capacity(self.cubes.len());
        let mut sorted = self.cubes.clone();
        sorted.sort_by_key(Cube::len);
        for c in sorted {
            if !keep.iter().any(|k| k.divides(&c)) {
                keep.push(c);
            }
        }
        Sop::from_cubes(keep)
    }

    /// Exact complement for covers over at most three variables, returned as
    /// a minimum two-level cover.
    pub fn complement_demorgan(&self) -> Result<Sop, BoolError> {
        let vars = self.support();
        if vars.len() > 3 {
            return Err(BoolError::TooManyVariables {
                found: vars.len(),
                limit: 3,
            });
        }
        let n = vars.len();
        let mask = mask_for(n);
        let tt = self.local_table(&vars);
        let cover = minimal_cover(!tt & mask, n);
        Ok(cover.map_vars(&|v| Literal::pos(vars[v as usize])))
    }

    /// General complement by recursive De Morgan expansion. The result can
    /// grow exponentially; the caller bounds the input.
    pub fn complement(&self) -> Sop {
        let mut acc = Sop::one();
        for cube in &self.cubes {
            let negated = Sop::from_cubes(cube.lits.iter().map(|l| Cube { lits: vec![l.negate()] }));
            acc = acc.and(&negated).scc();
            if acc.is_zero() {
                break;
            }
        }
        acc
    }

    pub fn eval(&self, value: impl Fn(u32) -> bool) -> bool {
        self.cubes.iter().any(|c| c.eval(&value))
    }

    pub fn eval_word(&self, words: &[u64]) -> u64 {
        self.cubes.iter().fold(0u64, |acc, c| acc | c.eval_word(words))
    }

    /// Truth table over the listed variables (at most six); variable
    /// `vars[i]` is bit `i` of the row index. Variables not listed must not
    /// occur in the cover.
    pub fn local_table(&self, vars: &[u32]) -> u64 {
        assert!(vars.len() <= 6, "local tables hold at most six variables");
        let words: Vec<u64> = (0..vars.len()).map(|i| VAR_MASKS[i]).collect();
        let mut slot_words = vec![0u64; vars.iter().map(|v| *v as usize + 1).max().unwrap_or(0)];
        for (i, v) in vars.iter().enumerate() {
            slot_words[*v as usize] = words[i];
        }
        self.eval_word(&slot_words) & mask_for(vars.len())
    }

    /// Renames variables through `f`, which may also flip polarity.
    pub fn map_vars(&self, f: &impl Fn(u32) -> Literal) -> Sop {
        Sop::from_cubes(self.cubes.iter().filter_map(|c| c.map_vars(f)))
    }

    /// Substitutes `var` by an arbitrary cover.
    pub fn compose(&self, var: u32, with: &Sop) -> Sop {
        if !self.has_var(var) {
            return self.clone();
        }
        let with_neg = with.complement();
        let mut out = Vec::new();
        for c in &self.cubes {
            match c.lits.iter().find(|l| l.var == var) {
                None => out.push(c.clone()),
                Some(l) => {
                    let rest = Sop::from_cubes([c.without(*l)]);
                    let g = if l.complemented { &with_neg } else { with };
                    out.extend(rest.and(g).cubes);
                }
            }
        }
        Sop::from_cubes(out)
    }

    /// Renders the cover using `name` for variables, e.g. `a*b' + c`.
    pub fn to_string_with(&self, name: impl Fn(u32) -> String) -> String {
        if let Some(v) = self.as_constant() {
            return u8::from(v).to_string();
        }
        let cubes: Vec<String> = self
            .cubes
            .iter()
            .map(|c| {
                if c.lits.is_empty() {
                    return "1".to_string();
                }
                let lits: Vec<String> = c
                    .lits
                    .iter()
                    .map(|l| format!("{}{}", name(l.var), if l.complemented { "'" } else { "" }))
                    .collect();
                lits.join("*")
            })
            .collect();
        cubes.join(" + ")
    }
}

impl fmt::Display for Sop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with(|v| format!("x{v}")))
    }
}

/// Standard bit patterns for the first six variables of a 64-row table.
pub const VAR_MASKS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// Mask selecting the `2^n` valid rows of a table with `n <= 6` variables.
pub const fn mask_for(n: usize) -> u64 {
    if n >= 6 {
        !0
    } else {
        (1u64 << (1 << n)) - 1
    }
}

/// Minimum cover of a table over `n <= 3` variables (`0..n`).
///
/// Exhaustive: enumerates prime implicants, then the subset of primes with
/// the fewest cubes, then the fewest literals, then the smallest cube list.
pub fn minimal_cover(table: u64, n: usize) -> Sop {
    assert!(n <= 3, "minimal_cover handles at most three variables");
    let mask = mask_for(n);
    let table = table & mask;
    if table == 0 {
        return Sop::zero();
    }
    if table == mask {
        return Sop::one();
    }
    // every cube over n variables: each variable absent / positive / negative
    let mut implicants: Vec<(Cube, u64)> = Vec::new();
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let mut c = code;
        let mut lits = Vec::new();
        for v in 0..n {
            match c % 3 {
                1 => lits.push(Literal::pos(v as u32)),
                2 => lits.push(Literal::neg(v as u32)),
                _ => {}
            }
            c /= 3;
        }
        let cube = Cube::new(lits).expect("distinct variables");
        let ct = Sop::from_cubes([cube.clone()]).eval_word(&VAR_MASKS) & mask;
        if ct & !table == 0 {
            implicants.push((cube, ct));
        }
    }
    let primes: Vec<(Cube, u64)> = implicants
        .iter()
        .filter(|(c, t)| {
            !implicants
                .iter()
                .any(|(d, u)| d.len() < c.len() && (t & !u) == 0 && d.divides(c))
        })
        .cloned()
        .collect();
    let mut best: Option<(usize, usize, Vec<Cube>)> = None;
    for subset in 1u32..(1u32 << primes.len()) {
        let mut covered = 0u64;
        let mut cubes = Vec::new();
        let mut lits = 0usize;
        for (i, (c, t)) in primes.iter().enumerate() {
            if subset >> i & 1 == 1 {
                covered |= t;
                lits += c.len();
                cubes.push(c.clone());
            }
        }
        if covered != table {
            continue;
        }
        cubes.sort();
        let key = (cubes.len(), lits, cubes);
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
    }
    Sop::from_cubes(best.expect("primes always cover the on-set").2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Literal {
        Literal::pos(0)
    }
    fn b() -> Literal {
        Literal::pos(1)
    }
    fn c() -> Literal {
        Literal::pos(2)
    }

    fn sop(lists: &[&[Literal]]) -> Sop {
        Sop::from_literal_lists(lists.iter().map(|l| l.iter().copied()))
    }

    fn maj() -> Sop {
        sop(&[&[a(), b()], &[b(), c()], &[c(), a()]])
    }

    #[test]
    fn contradictory_cube_is_dropped() {
        assert!(Cube::new([a(), a().negate()]).is_none());
        assert!(sop(&[&[a(), a().negate()]]).is_zero());
    }

    #[test]
    fn literal_count_counts_distinct_pairs() {
        // A3 B0' B3'
        let f = sop(&[&[Literal::pos(0), Literal::neg(1), Literal::neg(2)]]);
        assert_eq!(f.literal_count(), 3);
        assert_eq!(Sop::literal(a()).literal_count(), 1);
        assert_eq!(maj().literal_count(), 3);
        assert_eq!(maj().literal_occurrences(), 6);
    }

    #[test]
    fn cofactor_examples() {
        // f4*A3 + f4*B3' with f4 = var 0
        let f = sop(&[&[a(), b()], &[a(), c().negate()]]);
        assert_eq!(f.cofactor(a()).unwrap(), sop(&[&[b()], &[c().negate()]]));
        assert!(Sop::literal(a()).cofactor(a()).unwrap().is_one());
        let g = sop(&[&[a(), b()], &[a().negate(), c()]]);
        assert_eq!(g.cofactor(a()).unwrap(), Sop::literal(b()));
        assert!(matches!(g.cofactor(Literal::pos(7)), Err(BoolError::VariableAbsent(7))));
    }

    #[test]
    fn demorgan_examples() {
        let f = sop(&[&[a()], &[b().negate()]]);
        assert_eq!(f.complement_demorgan().unwrap(), sop(&[&[a().negate(), b()]]));
        let g = sop(&[&[a(), b()]]);
        assert_eq!(
            g.complement_demorgan().unwrap(),
            sop(&[&[a().negate()], &[b().negate()]])
        );
        let m = maj().complement_demorgan().unwrap();
        let expect = sop(&[
            &[a().negate(), b().negate()],
            &[b().negate(), c().negate()],
            &[c().negate(), a().negate()],
        ]);
        assert_eq!(m, expect);
    }

    #[test]
    fn demorgan_rejects_wide_functions() {
        let f = sop(&[&[a(), b(), c(), Literal::pos(3)]]);
        assert!(matches!(
            f.complement_demorgan(),
            Err(BoolError::TooManyVariables { found: 4, limit: 3 })
        ));
    }

    #[test]
    fn demorgan_keeps_original_variable_names() {
        let f = sop(&[&[Literal::pos(5)], &[Literal::neg(9)]]);
        assert_eq!(
            f.complement_demorgan().unwrap(),
            sop(&[&[Literal::neg(5), Literal::pos(9)]])
        );
    }

    #[test]
    fn constants_complement() {
        assert!(Sop::zero().complement_demorgan().unwrap().is_one());
        assert!(Sop::one().complement_demorgan().unwrap().is_zero());
        assert!(Sop::one().complement().is_zero());
        assert!(Sop::zero().complement().is_one());
    }

    #[test]
    fn general_complement_matches_table() {
        let f = sop(&[&[a(), b()], &[c(), Literal::neg(3)], &[Literal::pos(4)]]);
        let vars = [0, 1, 2, 3, 4];
        let g = f.complement();
        assert_eq!(g.local_table(&vars), !f.local_table(&vars) & mask_for(5));
    }

    #[test]
    fn scc_removes_contained_cubes() {
        let f = sop(&[&[a()], &[a(), b()], &[b(), c()]]);
        assert_eq!(f.scc(), sop(&[&[a()], &[b(), c()]]));
    }

    #[test]
    fn local_table_bit_order() {
        // slot 0 is the least significant index bit
        let and2 = sop(&[&[a(), b()]]);
        assert_eq!(and2.local_table(&[0, 1]), 0b1000);
        let just_a = Sop::literal(a());
        assert_eq!(just_a.local_table(&[0, 1]), 0b1010);
    }

    #[test]
    fn minimal_cover_of_every_three_var_table_is_exact() {
        for t in 0u64..256 {
            let cover = minimal_cover(t, 3);
            let got = cover.local_table(&[0, 1, 2]);
            assert_eq!(got, t, "table {t:#04x}");
        }
    }

    #[test]
    fn compose_substitutes_cover() {
        // f = x0 * x1', x1 := x2 + x3
        let f = sop(&[&[a(), b().negate()]]);
        let g = sop(&[&[c()], &[Literal::pos(3)]]);
        let h = f.compose(1, &g);
        let vars = [0, 2, 3];
        let expect = sop(&[&[a(), c().negate(), Literal::neg(3)]]);
        assert_eq!(h.local_table(&vars), expect.local_table(&vars));
    }
}
