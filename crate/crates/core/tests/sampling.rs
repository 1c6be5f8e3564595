//! End-to-end sampling behavior: unbiasedness across seeds, the exact
//! subsample composition law, and full plan-execute-verify pipelines.

use cspar_core::histogram::classify;
use cspar_core::instance::{sat_value, Instance, Kind};
use cspar_core::sparsify::{
    execute, iid_sample, plan, subsample_positions, Mode,
};
use cspar_core::verify::{exhaustive_verify, DEFAULT_BUDGET};
use cspar_core::{fixtures, q, Q};

#[test]
fn iid_sampling_is_unbiased_across_seeds() {
    // The cut value of 000111 on the complete ordered instance over six
    // variables is 18; the seed-averaged sampled value should sit within
    // five percent of that.
    let rel = fixtures::cut();
    let inst = Instance::complete(Kind::Uniform, 6, 2).unwrap();
    let psi = [0u8, 0, 0, 1, 1, 1];
    assert_eq!(sat_value(&rel, &inst, &psi).unwrap(), Q::from_integer(18));
    let seeds = 200u64;
    let mut total = Q::from_integer(0);
    for seed in 0..seeds {
        let sample = iid_sample(&inst, 10, seed).unwrap();
        assert_eq!(sample.total_weight(), Q::from_integer(30));
        total += sat_value(&rel, &sample, &psi).unwrap();
    }
    let mean = total / Q::from_integer(seeds as i128);
    let err = (mean - Q::from_integer(18)) / Q::from_integer(18);
    let bound = q(1, 20);
    assert!(
        err < bound && -err < bound,
        "seed-averaged value {mean} strays more than 5% from 18"
    );
}

#[test]
fn composed_subsamples_match_direct_subsampling_exactly() {
    // Enumerate every pick sequence: going 4 -> 3 -> 2 must induce the
    // same distribution over kept position pairs as going 4 -> 2 directly.
    let mut direct = std::collections::HashMap::new();
    for p0 in 0..4u64 {
        for p1 in 0..3u64 {
            let kept = subsample_positions(4, 2, &[p0, p1]);
            *direct.entry(kept).or_insert(0u64) += 1;
        }
    }
    let mut composed = std::collections::HashMap::new();
    for p0 in 0..4u64 {
        for p1 in 0..3u64 {
            for p2 in 0..2u64 {
                let mid = subsample_positions(4, 3, &[p0, p1, p2]);
                for q0 in 0..3u64 {
                    for q1 in 0..2u64 {
                        let inner = subsample_positions(3, 2, &[q0, q1]);
                        let kept: Vec<usize> = inner.iter().map(|&i| mid[i]).collect();
                        *composed.entry(kept).or_insert(0u64) += 1;
                    }
                }
            }
        }
    }
    let direct_total: u64 = direct.values().sum();
    let composed_total: u64 = composed.values().sum();
    assert_eq!(direct.len(), 6, "all two-element position sets occur");
    assert_eq!(composed.len(), 6);
    for (kept, count) in &direct {
        let c = composed[kept];
        assert_eq!(
            c * direct_total,
            count * composed_total,
            "distribution mismatch at positions {kept:?}"
        );
    }
}

#[test]
fn iid_pipeline_passes_verification_at_generous_sample_counts() {
    let rel = fixtures::cut();
    let inst = Instance::complete(Kind::Uniform, 6, 2).unwrap();
    for seed in 0..4u64 {
        let sample = iid_sample(&inst, 2000, seed).unwrap();
        let report = exhaustive_verify(&rel, &inst, &sample, q(1, 4), DEFAULT_BUDGET).unwrap();
        assert!(
            report.pass,
            "seed {seed}: deviation {} with {} zero violations",
            report.max_deviation, report.zero_violations
        );
    }
}

#[test]
fn bundled_pipeline_rebuilds_dense_instances_from_the_universe() {
    // A dense random instance of the tuple-skewed fixture plans into
    // bundles; at this scale the sample count caps at the set universe, so
    // the output is the reweighted complete instance and verification
    // passes comfortably.
    let rel = fixtures::r2_nonmonotone();
    let report = classify(&rel).unwrap();
    let m = 7000u64;
    let p = plan(&report, Kind::Uniform, false, 6, m, q(1, 2), 8).unwrap();
    assert_eq!(p.mode, Mode::Bundled);
    assert!(p.exact, "the sample count should reach the 15-set universe");
    assert_eq!(p.samples, 15);
    for seed in 0..2u64 {
        let inst = Instance::random(Kind::Uniform, 6, 4, m, seed).unwrap();
        let sparse = execute(&p, &inst, seed).unwrap();
        assert_eq!(sparse.clauses.len(), 360);
        assert_eq!(sparse.total_weight(), Q::from_integer(m as i128));
        assert_eq!(sparse.clauses[0].weight, q(m as i128, 360));
        let report = exhaustive_verify(&rel, &inst, &sparse, q(1, 2), DEFAULT_BUDGET).unwrap();
        assert!(
            report.pass,
            "seed {seed}: deviation {} with {} zero violations",
            report.max_deviation, report.zero_violations
        );
    }
}

#[test]
fn keep_all_and_single_constraint_plans_are_lossless() {
    let rel = fixtures::cut();
    let report = classify(&rel).unwrap();
    let inst = Instance::complete(Kind::Uniform, 14, 2).unwrap();
    let p = plan(&report, Kind::Uniform, true, 14, inst.clauses.len() as u64, q(1, 4), 8).unwrap();
    assert_eq!(p.mode, Mode::KeepAll);
    let kept = execute(&p, &inst, 0).unwrap();
    assert_eq!(kept, inst);

    let constant = fixtures::full_constant(2, 2, 3);
    let report = classify(&constant).unwrap();
    let inst = Instance::complete(Kind::Uniform, 5, 2).unwrap();
    let p = plan(&report, Kind::Uniform, true, 5, 20, q(1, 4), 8).unwrap();
    assert_eq!(p.mode, Mode::SingleConstraint);
    let single = execute(&p, &inst, 0).unwrap();
    assert_eq!(single.clauses.len(), 1);
    let verdict = exhaustive_verify(&constant, &inst, &single, q(1, 1000), DEFAULT_BUDGET).unwrap();
    assert!(verdict.pass);
    assert_eq!(verdict.max_deviation, Q::from_integer(0));
}
