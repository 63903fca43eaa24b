// SPDX-License-Identifier: Apache-2.0

use std::collections::HashSet;

use super::work::Work;
use super::MAX_FANIN;
use crate::boolcore::{Cube, Literal, Network, Sop};

/// One rewrite per candidate pair of sibling product nodes under an OR:
/// `n1 = c*r1`, `n2 = c*r2` become `t = c`, `n1 = t*(r1 + r2)` and `n2`
/// leaves the OR.
fn candidates(net: &Network) -> Vec<Network> {
    let w = Work::from_network(net);
    let fanout = w.fanout();
    let n = w.n_in();
    let mut out = Vec::new();
    for g in 0..w.funcs.len() {
        let f = &w.funcs[g];
        if f.cubes().len() < 2 {
            continue;
        }
        let siblings: Vec<(u32, Cube)> = f
            .cubes()
            .iter()
            .filter_map(|c| match c.literals() {
                [l] if !l.complemented => Some(l.var),
                _ => None,
            })
            .filter_map(|v| {
                let k = w.node_of(v)?;
                let fk = &w.funcs[k];
                (fanout[k] == 1 && fk.cubes().len() == 1).then(|| (v, fk.cubes()[0].clone()))
            })
            .collect();
        for i in 0..siblings.len() {
            for j in i + 1..siblings.len() {
                let (v1, c1) = &siblings[i];
                let (v2, c2) = &siblings[j];
                let common = c1.intersection(c2);
                if common.len() < 2 {
                    continue;
                }
                let (r1, r2) = (c1.quotient(&common), c2.quotient(&common));
                let rest: HashSet<u32> = r1.literals().iter().chain(r2.literals()).map(|l| l.var).collect();
                if rest.len() + 1 > MAX_FANIN {
                    continue;
                }
                let mut next = w.clone();
                let mut taken = w.taken_names();
                let name = (1..)
                    .map(|k| format!("f_{k}"))
                    .find(|s| taken.insert(s.clone()))
                    .expect("free name");
                let t = next.push(name, Sop::from_cubes([common.clone()]));
                let tl = Cube::new([Literal::pos(t)]).expect("literal cube");
                let k1 = (v1 - n) as usize;
                next.funcs[k1] = Sop::from_cubes([r1, r2].iter().filter_map(|r| r.and(&tl))).scc();
                let drop = Cube::new([Literal::pos(*v2)]).expect("literal cube");
                next.funcs[g] = Sop::from_cubes(f.cubes().iter().filter(|c| **c != drop).cloned());
                next.sweep_to_fixpoint();
                next.remove_dangling();
                out.push(next.to_network());
            }
        }
    }
    out
}

/// Extracts sub-cubes shared by sibling product nodes feeding a common OR,
/// keeping each rewrite only when `estimate` decreases.
pub fn share_common_cubes_with(net: &Network, estimate: impl Fn(&Network) -> u64) -> Network {
    let mut best = net.clone();
    let mut best_cost = estimate(net);
    'outer: loop {
        for cand in candidates(&best) {
            let c = estimate(&cand);
            if c < best_cost {
                best = cand;
                best_cost = c;
                continue 'outer;
            }
        }
        return best;
    }
}

/// [`share_common_cubes_with`] under the default crosstalk transistor
/// estimate.
pub fn share_common_cubes(net: &Network) -> Network {
    share_common_cubes_with(net, default_estimate)
}

/// Transistor count of the default crosstalk mapping; networks that fail
/// to map score as unusable.
pub fn default_estimate(net: &Network) -> u64 {
    use crate::costing::{transistor_count, CostTable};
    use crate::xtalkmap::{map_network, GateLibrary};
    let costs = CostTable::crosstalk();
    map_network(net, &GateLibrary::crosstalk(), &costs)
        .ok()
        .and_then(|m| transistor_count(&m, &costs).ok())
        .map_or(u64::MAX, u64::from)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolcore::is_equivalent;
    use crate::frontend::parse_eqn;

    fn literals(net: &Network) -> u64 {
        net.nodes.iter().map(|n| n.func.literal_occurrences() as u64).sum()
    }

    #[test]
    fn extracts_shared_pair() {
        let net = parse_eqn(
            "INORDER = A3 B0 B2 B3 g;\n\
             f2 = A3*B0'*B3'\n\
             f3 = A3*B2*B3'\n\
             N = f2 + f3 + g",
        )
        .unwrap();
        let out = share_common_cubes_with(&net, literals);
        assert!(is_equivalent(&net, &out).unwrap().is_equivalent());
        let t = out.nodes.iter().find(|n| n.name == "f_1").expect("shared node");
        assert_eq!(net.nodes.len(), 3);
        assert_eq!(out.nodes.len(), 3);
        let names: Vec<String> = t.fanins.iter().map(|s| out.signal_name(*s)).collect();
        assert_eq!(names, ["A3", "B3"]);
        assert_eq!(t.func.literal_count(), 2);
    }

    #[test]
    fn unchanged_without_shared_cube() {
        let net = parse_eqn("p = a*b\nq = c*d\ny = p + q").unwrap();
        assert_eq!(share_common_cubes_with(&net, literals), net);
    }

    #[test]
    fn rejected_when_estimate_does_not_drop() {
        let net = parse_eqn("INORDER = A3 B0 B2 B3 g;\nf2 = A3*B0'*B3'\nf3 = A3*B2*B3'\nN = f2 + f3 + g").unwrap();
        assert_eq!(share_common_cubes_with(&net, |_| 7), net);
    }
}
