//! Choosing and executing a sampling plan: how many clauses to draw, at
//! what weight, and by which of four constructions (keep everything, a
//! single constraint, independent clause draws, or whole-set bundles).
//!
//! The plan follows the relation's classification. A coarse marginal skew
//! costs one extra power of n in the sample count at a 1/eps^2 rate; a
//! marginally uniform relation gets the fine rate with independent draws;
//! a relation whose skew only shows at the tuple level keeps the fine rate
//! but must draw whole variable sets with all their orderings, and for
//! sparse random instances of that kind there is a density band where no
//! nontrivial guarantee is available at all.

use crate::error::{Error, Result};
use crate::histogram::{ClassificationReport, UniformityCase};
use crate::instance::{unrank_combination, Clause, Instance, Kind};
use crate::rng;
use crate::Q;
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    KeepAll,
    SingleConstraint,
    Iid,
    Bundled,
}

impl Mode {
    pub fn label(self) -> &'static str {
        match self {
            Mode::KeepAll => "keep-all",
            Mode::SingleConstraint => "single-constraint",
            Mode::Iid => "iid",
            Mode::Bundled => "bundled",
        }
    }
}

/// A fully determined sampling decision for one instance.
#[derive(Clone, Debug)]
pub struct SamplingPlan {
    pub mode: Mode,
    /// Number of draws (clauses for iid, variable sets for bundled);
    /// zero for the keep-all and single-constraint modes.
    pub samples: u64,
    /// Weight carried by each kept clause when the input has unit weights
    /// (informational; the samplers rescale real weights the same way).
    pub weight: Q,
    /// Short human-readable justification.
    pub rule: &'static str,
    /// Sparsifier size exponent backing the sample count.
    pub exponent: u32,
    /// Power of 1/eps in the sample count.
    pub eps_power: u32,
    /// Sparse tuple-skewed instances: below the lower density threshold no
    /// nontrivial sparsification is available.
    pub no_nontrivial: bool,
    /// Between the two density thresholds neither route applies; the plan
    /// keeps everything and says so.
    pub indeterminate: bool,
    /// Bundled sampling hit the set-universe size: the output is exactly
    /// the complete instance.
    pub exact: bool,
}

impl fmt::Display for SamplingPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "mode={} samples={} weight={} exponent={} eps_power={}",
            self.mode.label(),
            self.samples,
            self.weight,
            self.exponent,
            self.eps_power
        )?;
        if self.no_nontrivial {
            write!(f, " no-nontrivial")?;
        }
        if self.indeterminate {
            write!(f, " indeterminate")?;
        }
        if self.exact {
            write!(f, " exact")?;
        }
        write!(f, " ({})", self.rule)
    }
}

fn check_eps(eps: Q) -> Result<(i128, i128)> {
    let zero = Q::from_integer(0);
    let one = Q::from_integer(1);
    if eps <= zero || eps >= one {
        return Err(Error::invalid(format!(
            "epsilon must be strictly between 0 and 1, got {eps}"
        )));
    }
    Ok((*eps.numer(), *eps.denom()))
}

/// `ceil(kappa * n^exponent * ln n * (1/eps)^p)` as a sample count.
fn sample_count(kappa: u32, n: u32, exponent: u32, eps: Q, p: u32) -> f64 {
    let inv_eps = (*eps.denom() as f64) / (*eps.numer() as f64);
    let raw = kappa as f64 * (n as f64).powi(exponent as i32) * (n as f64).ln()
        * inv_eps.powi(p as i32);
    raw.ceil()
}

/// Decides how to sparsify an instance of the given shape.
///
/// `complete` says whether the instance is the full clause universe; the
/// density thresholds for tuple-skewed relations only apply to sampled
/// (non-complete) instances. `m` is the instance's clause count and
/// `kappa` scales both the sample counts and the density thresholds.
pub fn plan(
    report: &ClassificationReport,
    kind: Kind,
    complete: bool,
    n: u32,
    m: u64,
    eps: Q,
    kappa: u32,
) -> Result<SamplingPlan> {
    let (ea, eb) = check_eps(eps)?;
    if kappa == 0 {
        return Err(Error::invalid("kappa must be positive"));
    }
    if report.constant {
        return Ok(SamplingPlan {
            mode: Mode::SingleConstraint,
            samples: 0,
            weight: Q::from_integer(m as i128),
            rule: "constant relation: one constraint carries the total weight",
            exponent: 0,
            eps_power: 0,
            no_nontrivial: false,
            indeterminate: false,
            exact: true,
        });
    }
    let keep_all = |rule: &'static str, exponent: u32, p: u32, no_non: bool, indet: bool| {
        SamplingPlan {
            mode: Mode::KeepAll,
            samples: 0,
            weight: Q::from_integer(1),
            rule,
            exponent,
            eps_power: p,
            no_nontrivial: no_non,
            indeterminate: indet,
            exact: false,
        }
    };
    let iid = |exponent: u32, p: u32, rule: &'static str| -> SamplingPlan {
        let raw = sample_count(kappa, n, exponent, eps, p);
        if raw >= m as f64 {
            keep_all(
                "sample count reached the instance size",
                exponent,
                p,
                false,
                false,
            )
        } else {
            let ell = raw as u64;
            SamplingPlan {
                mode: Mode::Iid,
                samples: ell,
                weight: Q::new(m as i128, ell as i128),
                rule,
                exponent,
                eps_power: p,
                no_nontrivial: false,
                indeterminate: false,
                exact: false,
            }
        }
    };
    if kind == Kind::Rpartite {
        return Ok(iid(
            report.hat_c as u32,
            3,
            "independent clause draws at the partite rate",
        ));
    }
    match report.case {
        UniformityCase::SymSkewed => Ok(iid(
            report.exponent(),
            2,
            "independent clause draws at the coarse rate",
        )),
        UniformityCase::FullyUniform => Ok(iid(
            report.exponent(),
            3,
            "independent clause draws at the fine rate",
        )),
        UniformityCase::TupleSkewed => {
            let exponent = report.exponent();
            if !complete {
                // Density thresholds, compared exactly in integers:
                // dense enough for bundles when m >= kappa * n^(e+1) / eps^2,
                // hopeless when m <= n^(e+1) / kappa.
                let ncoarse = (n as u128).pow(exponent + 1);
                let dense = m as u128 * (ea * ea) as u128
                    >= kappa as u128 * ncoarse * (eb * eb) as u128;
                let sparse = m as u128 * kappa as u128 <= ncoarse;
                if sparse {
                    return Ok(keep_all(
                        "kept every clause: too sparse for nontrivial sparsification",
                        exponent,
                        3,
                        true,
                        false,
                    ));
                }
                if !dense {
                    return Ok(keep_all(
                        "kept every clause: density between the bundled thresholds",
                        exponent,
                        3,
                        false,
                        true,
                    ));
                }
            }
            let universe = Instance::universe_size(Kind::SymSet, n, report.arity);
            let raw = sample_count(kappa, n, exponent, eps, 3);
            let (ell, exact) = if raw >= universe as f64 {
                (universe as u64, true)
            } else {
                (raw as u64, false)
            };
            Ok(SamplingPlan {
                mode: Mode::Bundled,
                samples: ell,
                weight: Q::new(universe as i128, ell as i128),
                rule: "whole-set bundles at the fine rate",
                exponent,
                eps_power: 3,
                no_nontrivial: false,
                indeterminate: false,
                exact,
            })
        }
    }
}

/// `ell` clauses drawn independently and uniformly with replacement; each
/// kept clause carries its weight times `m / ell`, which makes the output
/// an unbiased estimate of the input on every assignment.
pub fn iid_sample(inst: &Instance, ell: u64, seed: u64) -> Result<Instance> {
    let m = inst.clauses.len() as u64;
    if m == 0 || ell == 0 {
        return Err(Error::invalid("iid sampling needs a nonempty instance and ell >= 1"));
    }
    let boost = Q::new(m as i128, ell as i128);
    let clauses = (0..ell)
        .map(|j| {
            let pick = rng::below(rng::draw(seed, j), m) as usize;
            let c = &inst.clauses[pick];
            Clause {
                vars: c.vars.clone(),
                weight: c.weight * boost,
            }
        })
        .collect();
    Ok(Instance {
        kind: inst.kind,
        n: inst.n,
        r: inst.r,
        clauses,
    })
}

fn permutations_lex(vars: &[u16]) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    let mut pool = vars.to_vec();
    let mut cur = Vec::with_capacity(vars.len());
    fn rec(pool: &mut Vec<u16>, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if pool.is_empty() {
            out.push(cur.clone());
            return;
        }
        for i in 0..pool.len() {
            let v = pool.remove(i);
            cur.push(v);
            rec(pool, cur, out);
            cur.pop();
            pool.insert(i, v);
        }
    }
    rec(&mut pool, &mut cur, &mut out);
    out
}

/// Draws `ell` variable sets with replacement from the complete set
/// universe and keeps every clause touching a drawn set.
///
/// The input must be a complete instance at one weight. For an ordered
/// (`uniform`) input the output lists all `r!` orderings of each drawn
/// set, `r! * ell` clauses in total; for a set (`symset`) input it lists
/// the drawn sets themselves. Each kept clause carries the input weight
/// times `C(n,r) / ell`. When `ell` reaches the universe size the sampler
/// returns the complete instance unchanged instead of oversampling.
pub fn bundled_sample(inst: &Instance, ell: u64, seed: u64) -> Result<Instance> {
    let base = inst.complete_profile().ok_or_else(|| {
        Error::invalid("bundled sampling starts from a complete instance at one weight")
    })?;
    if inst.kind == Kind::Rpartite {
        return Err(Error::invalid("bundled sampling needs a single variable pool"));
    }
    if ell == 0 {
        return Err(Error::invalid("bundled sampling needs ell >= 1"));
    }
    let universe = Instance::universe_size(Kind::SymSet, inst.n, inst.r) as u64;
    if ell >= universe {
        return Ok(inst.clone());
    }
    let boost = base * Q::new(universe as i128, ell as i128);
    let mut clauses = Vec::new();
    for j in 0..ell {
        let rank = rng::below(rng::draw(seed, j), universe);
        let set = unrank_combination(inst.n, inst.r, rank);
        match inst.kind {
            Kind::SymSet => clauses.push(Clause {
                vars: set,
                weight: boost,
            }),
            _ => {
                for p in permutations_lex(&set) {
                    clauses.push(Clause {
                        vars: p,
                        weight: boost,
                    });
                }
            }
        }
    }
    Ok(Instance {
        kind: inst.kind,
        n: inst.n,
        r: inst.r,
        clauses,
    })
}

/// Deterministic core of [`subsample`]: turns a sequence of bounded picks
/// (`picks[i]` in `0..m-i`) into `w` distinct positions via a partial
/// shuffle, returned in ascending order.
pub fn subsample_positions(m: usize, w: usize, picks: &[u64]) -> Vec<usize> {
    debug_assert_eq!(picks.len(), w);
    let mut idx: Vec<usize> = (0..m).collect();
    for (i, &p) in picks.iter().enumerate() {
        idx.swap(i, i + p as usize);
    }
    let mut chosen: Vec<usize> = idx[..w].to_vec();
    chosen.sort_unstable();
    chosen
}

/// Keeps `w` distinct clause positions chosen uniformly, rescaling their
/// weights by `m / w`. Composing two subsamples gives exactly the same
/// distribution as one direct subsample to the final size.
pub fn subsample(inst: &Instance, w: u64, seed: u64) -> Result<Instance> {
    let m = inst.clauses.len() as u64;
    if w == 0 || w > m {
        return Err(Error::invalid(format!(
            "subsample size must be between 1 and the clause count {m}, got {w}"
        )));
    }
    let picks: Vec<u64> = (0..w)
        .map(|i| rng::below(rng::draw(seed, i), m - i))
        .collect();
    let positions = subsample_positions(m as usize, w as usize, &picks);
    let boost = Q::new(m as i128, w as i128);
    let clauses = positions
        .into_iter()
        .map(|p| {
            let c = &inst.clauses[p];
            Clause {
                vars: c.vars.clone(),
                weight: c.weight * boost,
            }
        })
        .collect();
    Ok(Instance {
        kind: inst.kind,
        n: inst.n,
        r: inst.r,
        clauses,
    })
}

/// Chernoff-style tail bound on the probability that independent clause
/// sampling misestimates an assignment of satisfaction value `wt`:
/// `2 exp(-eps^2 * ell * wt / (3 * w_max * m))`.
pub fn failure_probability_bound(ell: u64, wt: f64, w_max: u32, m: u64, eps: Q) -> f64 {
    let e = (*eps.numer() as f64) / (*eps.denom() as f64);
    2.0 * (-e * e * ell as f64 * wt / (3.0 * w_max as f64 * m as f64)).exp()
}

/// Runs a plan against the instance it was made for. Bundled plans accept
/// a non-complete instance: the bundles are drawn from the matching
/// complete universe and rescaled to the instance's total weight.
pub fn execute(plan: &SamplingPlan, inst: &Instance, seed: u64) -> Result<Instance> {
    match plan.mode {
        Mode::KeepAll => Ok(inst.clone()),
        Mode::SingleConstraint => {
            let first = inst
                .clauses
                .first()
                .ok_or_else(|| Error::invalid("cannot sparsify an empty instance"))?;
            Ok(Instance {
                kind: inst.kind,
                n: inst.n,
                r: inst.r,
                clauses: vec![Clause {
                    vars: first.vars.clone(),
                    weight: inst.total_weight(),
                }],
            })
        }
        Mode::Iid => iid_sample(inst, plan.samples, seed),
        Mode::Bundled => {
            if inst.complete_profile().is_some() {
                bundled_sample(inst, plan.samples, seed)
            } else {
                let kind = if inst.kind == Kind::Rpartite {
                    return Err(Error::invalid("bundled plans need a single variable pool"));
                } else {
                    inst.kind
                };
                let complete = Instance::complete(kind, inst.n, inst.r)?;
                let scale = inst.total_weight() / complete.total_weight();
                let mut out = bundled_sample(&complete, plan.samples, seed)?;
                out.scale_weights(scale);
                Ok(out)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::histogram::classify;
    use crate::instance::{sat_value, Evaluator};

    fn q(n: i128, d: i128) -> Q {
        Q::new(n, d)
    }

    #[test]
    fn plan_keeps_small_instances() {
        let report = classify(&fixtures::cut()).unwrap();
        let p = plan(&report, Kind::Uniform, true, 14, 182, q(1, 4), 8).unwrap();
        assert_eq!(p.mode, Mode::KeepAll);
    }

    #[test]
    fn plan_iid_sample_count_is_the_pinned_formula_value() {
        // kappa=1, n=30, eps=9/10, partite exponent 2:
        // ceil(1 * 900 * ln 30 * (10/9)^3) = 4200.
        let rel = crate::relation::ValuedRelation::from_bitstrings(&["000", "001"]).unwrap();
        let report = classify(&rel).unwrap();
        assert_eq!(report.hat_c, 2);
        let p = plan(&report, Kind::Rpartite, true, 30, 27000, q(9, 10), 1).unwrap();
        assert_eq!(p.mode, Mode::Iid);
        assert_eq!(p.samples, 4200);
        assert_eq!(p.weight, q(27000, 4200));
    }

    #[test]
    fn plan_thresholds_for_tuple_skewed_instances() {
        let report = classify(&fixtures::r2_nonmonotone()).unwrap();
        let eps = q(1, 2);
        // Dense: at or above kappa * n^3 / eps^2 = 32000, bundled.
        let p = plan(&report, Kind::Uniform, false, 10, 32000, eps, 8).unwrap();
        assert_eq!(p.mode, Mode::Bundled);
        assert_eq!(p.samples, 210);
        assert!(p.exact, "sample count reached the set universe");
        assert_eq!(p.weight, Q::from_integer(1));
        // Sparse: at or below n^3 / kappa = 125, keep-all with the
        // no-nontrivial flag.
        let p = plan(&report, Kind::Uniform, false, 10, 125, eps, 8).unwrap();
        assert_eq!(p.mode, Mode::KeepAll);
        assert!(p.no_nontrivial);
        // In between: keep-all, tagged indeterminate.
        let p = plan(&report, Kind::Uniform, false, 10, 5000, eps, 8).unwrap();
        assert_eq!(p.mode, Mode::KeepAll);
        assert!(p.indeterminate && !p.no_nontrivial);
        // Complete instances skip the thresholds.
        let p = plan(&report, Kind::Uniform, true, 10, 5040, eps, 8).unwrap();
        assert_eq!(p.mode, Mode::Bundled);
    }

    #[test]
    fn plan_handles_constant_relations_and_bad_eps() {
        let report = classify(&fixtures::full_constant(2, 3, 5)).unwrap();
        let p = plan(&report, Kind::Uniform, true, 9, 72, q(1, 3), 8).unwrap();
        assert_eq!(p.mode, Mode::SingleConstraint);
        assert!(plan(&report, Kind::Uniform, true, 9, 72, q(0, 1), 8).is_err());
        assert!(plan(&report, Kind::Uniform, true, 9, 72, q(3, 2), 8).is_err());
        assert!(plan(&report, Kind::Uniform, true, 9, 72, q(1, 3), 0).is_err());
    }

    #[test]
    fn plan_sample_counts_are_monotone() {
        let rel = crate::relation::ValuedRelation::from_bitstrings(&["000", "001"]).unwrap();
        let report = classify(&rel).unwrap();
        let huge = u64::MAX / 2;
        // Nondecreasing in n.
        let mut prev = 0;
        for n in [10, 20, 40, 80] {
            let p = plan(&report, Kind::Rpartite, true, n, huge, q(1, 2), 8).unwrap();
            assert_eq!(p.mode, Mode::Iid);
            assert!(p.samples >= prev);
            prev = p.samples;
        }
        // Nonincreasing as eps grows.
        let mut prev = u64::MAX;
        for eps in [q(1, 8), q(1, 4), q(1, 2), q(3, 4)] {
            let p = plan(&report, Kind::Rpartite, true, 40, huge, eps, 8).unwrap();
            assert!(p.samples <= prev);
            prev = p.samples;
        }
    }

    #[test]
    fn iid_sample_is_reproducible_and_rescales() {
        let inst = Instance::complete(Kind::Uniform, 6, 2).unwrap();
        let a = iid_sample(&inst, 10, 3).unwrap();
        let b = iid_sample(&inst, 10, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.clauses.len(), 10);
        for c in &a.clauses {
            assert_eq!(c.weight, q(30, 10));
            assert!(inst.clauses.iter().any(|o| o.vars == c.vars));
        }
        assert_ne!(iid_sample(&inst, 10, 4).unwrap(), a);
    }

    #[test]
    fn bundled_sample_counts_weights_and_cap() {
        let inst = Instance::complete(Kind::Uniform, 6, 3).unwrap();
        let out = bundled_sample(&inst, 5, 9).unwrap();
        assert_eq!(out.clauses.len(), 5 * 6); // r! = 6 orderings per set
        let expect = q(20, 5); // C(6,3) / ell
        for c in &out.clauses {
            assert_eq!(c.weight, expect);
        }
        // Every drawn set contributes each ordering exactly once.
        let mut sets = std::collections::HashSet::new();
        for chunk in out.clauses.chunks(6) {
            let mut s = chunk[0].vars.clone();
            s.sort_unstable();
            for c in chunk {
                let mut cs = c.vars.clone();
                cs.sort_unstable();
                assert_eq!(cs, s);
            }
            sets.insert(s);
        }
        assert!(sets.len() <= 5);

        // At or past the universe size the complete instance comes back.
        let capped = bundled_sample(&inst, 20, 9).unwrap();
        assert_eq!(capped, inst);

        // Set-kind input stays set-kind.
        let sets_in = Instance::complete(Kind::SymSet, 6, 3).unwrap();
        let out = bundled_sample(&sets_in, 4, 2).unwrap();
        assert_eq!(out.kind, Kind::SymSet);
        assert_eq!(out.clauses.len(), 4);

        // Random instances are rejected.
        let random = Instance::random(Kind::Uniform, 6, 3, 10, 0).unwrap();
        assert!(bundled_sample(&random, 5, 9).is_err());
    }

    #[test]
    fn bundled_sample_is_unbiased_in_expectation_over_all_ranks() {
        // Averaging the single-draw estimator over every possible set
        // draw reproduces the complete instance's value exactly.
        let rel = fixtures::cut();
        let inst = Instance::complete(Kind::Uniform, 5, 2).unwrap();
        let psi = vec![0, 0, 1, 1, 1];
        let full = sat_value(&rel, &inst, &psi).unwrap();
        let universe = Instance::universe_size(Kind::SymSet, 5, 2) as u64;
        let mut acc = Q::from_integer(0);
        for rank in 0..universe {
            let set = unrank_combination(5, 2, rank);
            let mut est = Q::from_integer(0);
            for p in permutations_lex(&set) {
                if rel.value(&[psi[p[0] as usize], psi[p[1] as usize]]) > 0 {
                    est += Q::from_integer(universe as i128); // weight C/1 per clause
                }
            }
            acc += est;
        }
        assert_eq!(acc / Q::from_integer(universe as i128), full);
    }

    #[test]
    fn subsample_picks_distinct_positions_and_rescales() {
        let inst = Instance::complete(Kind::Uniform, 5, 2).unwrap();
        let out = subsample(&inst, 7, 11).unwrap();
        assert_eq!(out.clauses.len(), 7);
        let mut seen = std::collections::HashSet::new();
        for c in &out.clauses {
            assert_eq!(c.weight, q(20, 7));
            assert!(seen.insert(c.vars.clone()), "positions must be distinct");
        }
        assert!(subsample(&inst, 21, 0).is_err());
        assert!(subsample(&inst, 0, 0).is_err());
    }

    #[test]
    fn subsample_positions_enumerates_uniformly() {
        // Over all pick sequences, each 2-subset of 4 positions appears
        // the same number of times.
        let mut counts = std::collections::HashMap::new();
        for p0 in 0..4u64 {
            for p1 in 0..3u64 {
                let pos = subsample_positions(4, 2, &[p0, p1]);
                *counts.entry(pos).or_insert(0u32) += 1;
            }
        }
        assert_eq!(counts.len(), 6);
        assert!(counts.values().all(|&c| c == 2));
    }

    #[test]
    fn failure_bound_beats_polynomial_targets_at_large_kappa() {
        // Cut relation at n = 14 over the complete ordered instance, with
        // sample count at kappa = 30: for majority class sizes 7..=13 the
        // bound undercuts n^(-10 * max(1, n - maj)).
        let n = 14u32;
        let m = 182u64;
        let eps = q(1, 2);
        let ell = sample_count(30, n, 1, eps, 3) as u64;
        for maj in 7..=13u32 {
            let wt = (2 * maj * (n - maj)) as f64;
            let bound = failure_probability_bound(ell, wt, 1, m, eps);
            let target = (n as f64).powi(-10 * (n - maj).max(1) as i32);
            assert!(
                bound <= target,
                "maj={maj}: bound {bound:e} exceeds target {target:e}"
            );
        }
    }

    #[test]
    fn execute_single_constraint_is_exact_for_constant_relations() {
        let rel = fixtures::full_constant(2, 3, 5);
        let report = classify(&rel).unwrap();
        let inst = Instance::complete(Kind::Uniform, 7, 2).unwrap();
        let p = plan(&report, Kind::Uniform, true, 7, 42, q(1, 3), 8).unwrap();
        let out = execute(&p, &inst, 0).unwrap();
        assert_eq!(out.clauses.len(), 1);
        let ev_in = Evaluator::new(&rel, &inst).unwrap();
        let ev_out = Evaluator::new(&rel, &out).unwrap();
        for psi in [[0u8; 7], [2u8; 7], [0, 1, 2, 0, 1, 2, 0]] {
            assert_eq!(ev_in.sat(&psi), ev_out.sat(&psi));
        }
    }

    #[test]
    fn execute_bundles_non_complete_instances_through_the_universe() {
        let report = classify(&fixtures::r2_nonmonotone()).unwrap();
        let eps = q(1, 2);
        let inst = Instance::random(Kind::Uniform, 10, 4, 32000, 1).unwrap();
        let p = plan(&report, Kind::Uniform, false, 10, 32000, eps, 8).unwrap();
        let out = execute(&p, &inst, 5).unwrap();
        // Exact cap: complete universe rescaled to the instance's weight.
        assert_eq!(out.clauses.len(), 5040);
        assert_eq!(out.total_weight(), Q::from_integer(32000));
        assert_eq!(out.clauses[0].weight, q(32000, 5040));
    }
}
