// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Gate kinds. Pin `i` of a kind is bit `i` of the row index of its table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GateKind {
    #[serde(rename = "INV")]
    Inv,
    #[serde(rename = "CT_NAND2")]
    Nand2,
    #[serde(rename = "CT_NAND3")]
    Nand3,
    #[serde(rename = "CT_NOR2")]
    Nor2,
    #[serde(rename = "CT_NOR3")]
    Nor3,
    #[serde(rename = "CT_AND2")]
    And2,
    #[serde(rename = "CT_AND3")]
    And3,
    #[serde(rename = "CT_OR2")]
    Or2,
    #[serde(rename = "CT_OR3")]
    Or3,
    #[serde(rename = "CT_MAJ3")]
    Maj3,
    #[serde(rename = "CT_MIN3")]
    Min3,
    #[serde(rename = "CT_AO21")]
    Ao21,
    #[serde(rename = "CT_OA21")]
    Oa21,
    #[serde(rename = "CT_AOI21")]
    Aoi21,
    #[serde(rename = "CT_OAI21")]
    Oai21,
    /// Weighted majority `abc + d(a+b+c)`: a five-input majority with the
    /// last pin coupled twice.
    #[serde(rename = "CT_WMAJ4")]
    Wmaj4,
    #[serde(rename = "CT_WMIN4")]
    Wmin4,
}

impl GateKind {
    pub const ALL: [GateKind; 17] = [
        GateKind::Inv,
        GateKind::Nand2,
        GateKind::Nand3,
        GateKind::Nor2,
        GateKind::Nor3,
        GateKind::And2,
        GateKind::And3,
        GateKind::Or2,
        GateKind::Or3,
        GateKind::Maj3,
        GateKind::Min3,
        GateKind::Ao21,
        GateKind::Oa21,
        GateKind::Aoi21,
        GateKind::Oai21,
        GateKind::Wmaj4,
        GateKind::Wmin4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::Inv => "INV",
            GateKind::Nand2 => "CT_NAND2",
            GateKind::Nand3 => "CT_NAND3",
            GateKind::Nor2 => "CT_NOR2",
            GateKind::Nor3 => "CT_NOR3",
            GateKind::And2 => "CT_AND2",
            GateKind::And3 => "CT_AND3",
            GateKind::Or2 => "CT_OR2",
            GateKind::Or3 => "CT_OR3",
            GateKind::Maj3 => "CT_MAJ3",
            GateKind::Min3 => "CT_MIN3",
            GateKind::Ao21 => "CT_AO21",
            GateKind::Oa21 => "CT_OA21",
            GateKind::Aoi21 => "CT_AOI21",
            GateKind::Oai21 => "CT_OAI21",
            GateKind::Wmaj4 => "CT_WMAJ4",
            GateKind::Wmin4 => "CT_WMIN4",
        }
    }

    /// Short family name used in `X_<kind>(...)` renderings.
    pub fn family(self) -> &'static str {
        match self {
            GateKind::Inv => "inv",
            GateKind::Nand2 | GateKind::Nand3 => "nand",
            GateKind::Nor2 | GateKind::Nor3 => "nor",
            GateKind::And2 | GateKind::And3 => "and",
            GateKind::Or2 | GateKind::Or3 => "or",
            GateKind::Maj3 => "maj",
            GateKind::Min3 => "min",
            GateKind::Ao21 => "ao21",
            GateKind::Oa21 => "oa21",
            GateKind::Aoi21 => "aoi21",
            GateKind::Oai21 => "oai21",
            GateKind::Wmaj4 => "wmaj",
            GateKind::Wmin4 => "wmin",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            GateKind::Inv => 1,
            GateKind::Nand2 | GateKind::Nor2 | GateKind::And2 | GateKind::Or2 => 2,
            GateKind::Wmaj4 | GateKind::Wmin4 => 4,
            _ => 3,
        }
    }

    /// Output-complement partner. `Inv` pairs with itself (its partner, the
    /// buffer, is elided).
    pub fn dual(self) -> GateKind {
        use GateKind::*;
        match self {
            Inv => Inv,
            Nand2 => And2,
            And2 => Nand2,
            Nand3 => And3,
            And3 => Nand3,
            Nor2 => Or2,
            Or2 => Nor2,
            Nor3 => Or3,
            Or3 => Nor3,
            Maj3 => Min3,
            Min3 => Maj3,
            Ao21 => Aoi21,
            Aoi21 => Ao21,
            Oa21 => Oai21,
            Oai21 => Oa21,
            Wmaj4 => Wmin4,
            Wmin4 => Wmaj4,
        }
    }

    pub fn is_inverting(self) -> bool {
        use GateKind::*;
        matches!(self, Inv | Nand2 | Nand3 | Nor2 | Nor3 | Min3 | Aoi21 | Oai21 | Wmin4)
    }

    pub fn eval(self, pins: &[bool]) -> bool {
        use GateKind::*;
        debug_assert_eq!(pins.len(), self.arity());
        let p = |i: usize| pins[i];
        let positive = match self.positive_form() {
            Inv => p(0),
            And2 | And3 => pins.iter().all(|b| *b),
            Or2 | Or3 => pins.iter().any(|b| *b),
            Maj3 => (p(0) && p(1)) || (p(1) && p(2)) || (p(0) && p(2)),
            Ao21 => (p(0) && p(1)) || p(2),
            Oa21 => (p(0) || p(1)) && p(2),
            Wmaj4 => {
                let votes = pins[..3].iter().filter(|b| **b).count() + 2 * usize::from(p(3));
                votes >= 3
            }
            _ => unreachable!("positive_form returns a non-inverting kind"),
        };
        positive ^ self.is_inverting()
    }

    fn positive_form(self) -> GateKind {
        if self.is_inverting() && self != GateKind::Inv {
            self.dual()
        } else {
            self
        }
    }

    /// Truth table over the pins, pin `i` = bit `i` of the row index.
    pub fn table(self) -> u16 {
        let a = self.arity();
        let mut t = 0u16;
        let mut pins = vec![false; a];
        for row in 0..(1usize << a) {
            for (i, p) in pins.iter_mut().enumerate() {
                *p = (row >> i) & 1 == 1;
            }
            if self.eval(&pins) {
                t |= 1 << row;
            }
        }
        t
    }

    /// Interchangeability class of each pin; pins with equal class may be
    /// permuted without changing the function.
    pub fn pin_classes(self) -> &'static [u8] {
        match self {
            GateKind::Inv => &[0],
            GateKind::Ao21 | GateKind::Oa21 | GateKind::Aoi21 | GateKind::Oai21 => &[0, 0, 1],
            GateKind::Wmaj4 | GateKind::Wmin4 => &[0, 0, 0, 1],
            k if k.arity() == 2 => &[0, 0],
            _ => &[0, 0, 0],
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = String;

    /// Accepts `CT_NAND2`, `NAND2` (case-insensitive) and `INV`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let upper = s.trim().to_ascii_uppercase();
        let bare = upper.strip_prefix("CT_").unwrap_or(&upper);
        GateKind::ALL
            .iter()
            .copied()
            .find(|k| k.name().strip_prefix("CT_").unwrap_or(k.name()) == bare)
            .ok_or_else(|| format!("unknown gate kind `{s}`"))
    }
}

/// A set of gate kinds usable by the mapper. `Inv` is always implied.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GateLibrary {
    kinds: Vec<GateKind>,
}

impl GateLibrary {
    pub fn new(kinds: impl IntoIterator<Item = GateKind>) -> Self {
        let mut kinds: Vec<GateKind> = kinds.into_iter().filter(|k| *k != GateKind::Inv).collect();
        kinds.sort();
        kinds.dedup();
        GateLibrary { kinds }
    }

    /// The crosstalk set S together with its output-complemented duals S'.
    pub fn crosstalk() -> Self {
        GateLibrary::new(GateKind::ALL)
    }

    /// Static CMOS primitive cells for the baseline.
    pub fn cmos() -> Self {
        use GateKind::*;
        GateLibrary::new([Nand2, Nand3, Nor2, Nor3, Aoi21, Oai21, And2, And3, Or2, Or3])
    }

    pub fn kinds(&self) -> &[GateKind] {
        &self.kinds
    }

    pub fn contains(&self, kind: GateKind) -> bool {
        kind == GateKind::Inv || self.kinds.binary_search(&kind).is_ok()
    }

    /// Dual of `kind` when the library holds it.
    pub fn dual(&self, kind: GateKind) -> Option<GateKind> {
        let d = kind.dual();
        self.contains(d).then_some(d)
    }
}
