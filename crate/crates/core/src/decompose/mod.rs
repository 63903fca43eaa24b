// SPDX-License-Identifier: Apache-2.0

//! Preprocessing and decomposition into nodes of at most three fanins.

mod share;
mod split;
mod work;

pub use share::{default_estimate, share_common_cubes, share_common_cubes_with};
pub use split::{decompose3, decompose3_with, Strategy};

use crate::boolcore::Network;

/// Fanin bound every decomposed node satisfies.
pub const MAX_FANIN: usize = 3;

/// Propagates constants and aliases (buffers, inverters, double
/// complements), simplifies covers locally and drops dangling nodes.
pub fn sweep(net: &Network) -> Network {
    let mut w = work::Work::from_network(net);
    w.sweep_to_fixpoint();
    w.remove_dangling();
    w.to_network()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolcore::{is_equivalent, Signal};
    use crate::frontend::parse_eqn;

    #[test]
    fn identity_buffer_collapses() {
        let net = parse_eqn("INORDER = a b;\ng = a*1\ny = g*b\nOUTORDER = y;").unwrap();
        let s = sweep(&net);
        assert_eq!(s.nodes.len(), 1);
        assert_eq!(s.nodes[0].fanins, vec![Signal::Input(0), Signal::Input(1)]);
        assert!(is_equivalent(&net, &s).unwrap().is_equivalent());
    }

    #[test]
    fn contradiction_propagates() {
        let net = parse_eqn("INORDER = a b;\ng = a*a'\ny = g + b\nOUTORDER = y;").unwrap();
        let s = sweep(&net);
        assert!(s.nodes.is_empty());
        assert_eq!(s.outputs[0].signal, Signal::Input(1));
        assert!(is_equivalent(&net, &s).unwrap().is_equivalent());
    }

    #[test]
    fn double_complement_cancels() {
        let net = parse_eqn("INORDER = a b;\nn1 = a'\nn2 = n1'\ny = n2*b\nOUTORDER = y;").unwrap();
        let s = sweep(&net);
        assert_eq!(s.nodes.len(), 1);
        assert_eq!(s.nodes[0].fanins, vec![Signal::Input(0), Signal::Input(1)]);
        assert_eq!(sweep(&s), s);
    }
}
