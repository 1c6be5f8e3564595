//! Classification sweeps over every Boolean arity-3 support: the
//! plentifulness closed form and coherence of the case analysis.

use cspar_core::histogram::{classify, SymmetricValuedRelation, UniformityCase};
use cspar_core::relation::ValuedRelation;

fn mask_relation(mask: u32) -> ValuedRelation {
    let table: Vec<u32> = (0..8).map(|i| (mask >> i) & 1).collect();
    ValuedRelation::new(vec![2, 2, 2], table).unwrap()
}

#[test]
fn plentifulness_matches_the_weight_formula_on_boolean_supports() {
    // For 0/1 relations the precise plentifulness of the symmetrized form
    // is min(w_max, r - w_min), where w is the number of ones in a support
    // tuple.
    for mask in 1u32..256 {
        let rel = mask_relation(mask);
        let sym = SymmetricValuedRelation::from_relation(&rel).unwrap();
        let weights: Vec<u32> = rel
            .support()
            .iter()
            .map(|t| t.iter().filter(|&&b| b == 1).count() as u32)
            .collect();
        let w_max = *weights.iter().max().unwrap();
        let w_min = *weights.iter().min().unwrap();
        assert_eq!(
            sym.precise_plentifulness(),
            w_max.min(3 - w_min),
            "mask {mask}: weights {weights:?}"
        );
    }
}

#[test]
fn classification_is_coherent_on_every_small_boolean_relation() {
    for mask in 1u32..256 {
        let rel = mask_relation(mask);
        let report = classify(&rel).unwrap();
        // 0/1 values make every level-c generalized restriction uniform,
        // so the adjusted arity never pays the bump.
        assert_eq!(report.hat_c, report.c, "mask {mask}");
        assert_eq!(report.constant, mask == 255);
        let r = report.arity as u32;
        match report.case {
            UniformityCase::SymSkewed => {
                assert_eq!(report.exponent(), r - report.k + 1, "mask {mask}");
                assert_eq!(report.eps_power(), 2);
                assert!(report.sym_violation.is_some());
            }
            UniformityCase::FullyUniform => {
                assert_eq!(report.exponent(), r - report.k, "mask {mask}");
                assert_eq!(report.eps_power(), 3);
                assert!(report.sym_violation.is_none() && report.vr_violation.is_none());
            }
            UniformityCase::TupleSkewed => {
                assert_eq!(report.exponent(), r - report.k, "mask {mask}");
                assert_eq!(report.eps_power(), 3);
                assert!(report.sym_violation.is_none() && report.vr_violation.is_some());
            }
        }
        let weights: Vec<u32> = rel
            .support()
            .iter()
            .map(|t| t.iter().filter(|&&b| b == 1).count() as u32)
            .collect();
        let w_max = *weights.iter().max().unwrap();
        let w_min = *weights.iter().min().unwrap();
        assert_eq!(report.k, w_max.min(3 - w_min), "mask {mask}");
    }
}

#[test]
fn boolean_sweep_case_inventory() {
    // Both independent-draw cases occur among Boolean supports. The
    // tuple-skewed case cannot: a one-symbol frame never separates tuples,
    // and a two-symbol frame over domain {0,1} forces plentifulness 3,
    // where marginal uniformity collapses to the constant relation.
    let mut seen = [false; 3];
    for mask in 1u32..256 {
        let report = classify(&mask_relation(mask)).unwrap();
        let slot = match report.case {
            UniformityCase::SymSkewed => 0,
            UniformityCase::FullyUniform => 1,
            UniformityCase::TupleSkewed => 2,
        };
        seen[slot] = true;
    }
    assert!(seen[0], "no symmetrized-skew relation among the masks");
    assert!(seen[1], "no fully uniform relation among the masks");
    assert!(!seen[2], "a Boolean arity-3 relation classified as tuple-skewed");
}
