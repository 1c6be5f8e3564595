//! Small relations used throughout the test suites and the demo commands.

use crate::relation::ValuedRelation;

/// Binary inequality: satisfied exactly when the two endpoints differ.
pub fn cut() -> ValuedRelation {
    ValuedRelation::from_bitstrings(&["01", "10"]).unwrap()
}

/// Every tuple of `d^r` gets the same value `w`.
pub fn full_constant(r: usize, d: u8, w: u32) -> ValuedRelation {
    let size = (d as usize).pow(r as u32);
    ValuedRelation::new(vec![d; r], vec![w; size]).unwrap()
}

/// Values 0, 0, 1, 2 on 00, 01, 10, 11: the support is an AND, but the
/// values on it differ, which is what separates the adjusted AND arity
/// from the plain one.
pub fn value_step() -> ValuedRelation {
    ValuedRelation::new(vec![2, 2], vec![0, 0, 1, 2]).unwrap()
}

/// Values 1, 2, 0, 1 on 00, 01, 10, 11: its symmetrized form is constant,
/// so only the tuple-level view can tell the values apart.
pub fn hidden_skew() -> ValuedRelation {
    ValuedRelation::new(vec![2, 2], vec![1, 2, 0, 1]).unwrap()
}

/// Three support tuples over a four-symbol domain at arity 4. The running
/// example for tight sets, rigidity, and marginal predicates.
pub fn quaternary_triple() -> ValuedRelation {
    ValuedRelation::from_support(
        vec![4, 4, 4, 4],
        &[vec![0, 1, 2, 3], vec![0, 0, 2, 3], vec![1, 1, 2, 3]],
    )
    .unwrap()
}

/// Six support tuples over a ternary domain at arity 4. Its symmetrized
/// form passes the marginal uniformity check while the relation itself
/// fails it, which forces the bundled sampling route.
pub fn r2_nonmonotone() -> ValuedRelation {
    ValuedRelation::from_support(
        vec![3, 3, 3, 3],
        &[
            vec![0, 0, 2, 2],
            vec![1, 1, 2, 2],
            vec![0, 2, 2, 2],
            vec![1, 2, 2, 2],
            vec![0, 1, 2, 2],
            vec![2, 2, 0, 1],
        ],
    )
    .unwrap()
}
