// SPDX-License-Identifier: Apache-2.0

//! Seeded pseudo-random networks for property testing.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::boolcore::{Cube, Literal, Network, Node, Output, Signal, Sop};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomSpec {
    pub max_inputs: usize,
    pub max_nodes: usize,
    /// Upper bound on node fanin; values above three exercise decomposition.
    pub max_fanin: usize,
    pub max_cubes: usize,
    pub max_outputs: usize,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec {
            max_inputs: 8,
            max_nodes: 20,
            max_fanin: 5,
            max_cubes: 4,
            max_outputs: 3,
        }
    }
}

/// One random network: inputs `x0..`, nodes `n0..` in topological order,
/// outputs `y0..`. Fanins are distinct and drawn from inputs and earlier
/// nodes.
pub fn random_network(rng: &mut impl Rng, shape: &RandomSpec) -> Network {
    let n_in = rng.gen_range(1..=shape.max_inputs);
    let n_nodes = rng.gen_range(1..=shape.max_nodes);
    let inputs: Vec<String> = (0..n_in).map(|i| format!("x{i}")).collect();
    let mut nodes: Vec<Node> = Vec::with_capacity(n_nodes);
    for j in 0..n_nodes {
        let mut pool: Vec<Signal> = (0..n_in).map(Signal::Input).chain((0..j).map(Signal::Node)).collect();
        pool.shuffle(rng);
        let k = rng.gen_range(1..=shape.max_fanin.min(pool.len()));
        let fanins: Vec<Signal> = pool.into_iter().take(k).collect();
        let mut cubes = Vec::new();
        for _ in 0..rng.gen_range(1..=shape.max_cubes) {
            let mut lits = Vec::new();
            for slot in 0..k {
                if rng.gen_bool(0.6) {
                    lits.push(Literal::new(slot as u32, rng.gen()));
                }
            }
            cubes.extend(Cube::new(lits));
        }
        let func = Sop::from_cubes(cubes);
        nodes.push(Node {
            name: format!("n{j}"),
            fanins,
            func,
        });
    }
    let n_out = rng.gen_range(1..=shape.max_outputs);
    let outputs = (0..n_out)
        .map(|o| Output {
            name: format!("y{o}"),
            // the first output always reads the last node so most of the
            // network is live
            signal: if o == 0 {
                Signal::Node(n_nodes - 1)
            } else {
                Signal::Node(rng.gen_range(0..n_nodes))
            },
            complemented: rng.gen_bool(0.25),
        })
        .collect();
    Network::new(inputs, nodes, outputs).expect("generator builds valid networks")
}

/// `count` networks from a fixed seed; the sequence depends only on
/// `seed` and `shape`.
pub fn random_networks(seed: u64, count: usize, shape: RandomSpec) -> impl Iterator<Item = Network> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(move |_| random_network(&mut rng, &shape))
}
