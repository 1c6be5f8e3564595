//! Checking a sparsifier against its source instance, and the lower-bound
//! apparatus: witness families, codeword censuses, coverage statistics,
//! and minimum-value profiles over complete instances.
//!
//! All comparisons are exact rational comparisons; nothing here estimates.
//! Exhaustive checks refuse to run past a configurable assignment budget
//! rather than fall back to sampling.

use crate::error::{Error, Result};
use crate::histogram::{subset_ways, Histogram, SymmetricValuedRelation};
use crate::instance::{assignment_space, codeword, for_each_assignment_in, Instance, Kind};
use crate::relation::{RestrictionWitness, ValuedRelation};
use crate::Q;
use rayon::prelude::*;
use std::collections::{HashMap, HashSet};
use std::fmt;

/// Default cap on exhaustively enumerated assignments.
pub const DEFAULT_BUDGET: u128 = 1 << 24;

/// Space-separated assignment symbols without the file format's trailing
/// newline, for inline use in reports.
fn tokens(psi: &[u8]) -> String {
    let toks: Vec<String> = psi.iter().map(|s| s.to_string()).collect();
    toks.join(" ")
}

/// Outcome of an exhaustive comparison of two instances over every
/// assignment.
#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub eps: Q,
    /// Number of assignments enumerated.
    pub assignments: u128,
    /// Largest relative deviation |sat' - sat| / sat over assignments
    /// where the original value is nonzero.
    pub max_deviation: Q,
    /// Lexicographically first assignment attaining the maximum, if any
    /// assignment had a nonzero original value.
    pub argmax: Option<Vec<u8>>,
    /// Assignments where exactly one of the two values is zero.
    pub zero_violations: u64,
    pub pass: bool,
}

impl VerifyReport {
    pub fn machine_lines(&self) -> Vec<String> {
        let mut out = vec![
            format!("assignments={}", self.assignments),
            format!("max_deviation={}", self.max_deviation),
            format!("zero_violations={}", self.zero_violations),
            format!("eps={}", self.eps),
            format!("pass={}", self.pass),
        ];
        if let Some(psi) = &self.argmax {
            out.insert(2, format!("argmax={}", tokens(psi)));
        }
        out
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "assignments checked: {}", self.assignments)?;
        writeln!(f, "max relative deviation: {}", self.max_deviation)?;
        if let Some(psi) = &self.argmax {
            writeln!(f, "attained at: {}", tokens(psi))?;
        }
        writeln!(f, "zero-preservation violations: {}", self.zero_violations)?;
        write!(
            f,
            "verdict: {} at eps = {}",
            if self.pass { "pass" } else { "fail" },
            self.eps
        )
    }
}

struct ShardResult {
    best: Option<(Q, u128, Vec<u8>)>,
    zero_violations: u64,
}

/// Compares `sparsifier` against `original` on every assignment, exactly.
///
/// Both instances must induce the same assignment shape (same length and
/// per-position domains). Fails the verdict if the maximum relative
/// deviation exceeds `eps` or if any assignment is zero on one side only.
/// Refuses to enumerate more than `budget` assignments.
pub fn exhaustive_verify(
    relation: &ValuedRelation,
    original: &Instance,
    sparsifier: &Instance,
    eps: Q,
    budget: u128,
) -> Result<VerifyReport> {
    let sizes = original.assignment_domains(relation)?;
    let sp_sizes = sparsifier.assignment_domains(relation)?;
    if sizes != sp_sizes {
        return Err(Error::invalid(
            "the two instances range over different assignment spaces",
        ));
    }
    let space = assignment_space(&sizes);
    if space > budget {
        return Err(Error::Budget {
            size: space,
            budget,
        });
    }
    let ev_orig = crate::instance::Evaluator::new(relation, original)?;
    let ev_sp = crate::instance::Evaluator::new(relation, sparsifier)?;

    let shard_count = space.clamp(1, 64) as u64;
    let chunk = space.div_ceil(shard_count as u128);
    let shards: Vec<ShardResult> = (0..shard_count)
        .into_par_iter()
        .map(|s| {
            let lo = s as u128 * chunk;
            let hi = space.min(lo + chunk);
            let mut best: Option<(Q, u128, Vec<u8>)> = None;
            let mut zero_violations = 0u64;
            for_each_assignment_in(&sizes, lo, hi, &mut |rank, psi| {
                let orig = ev_orig.sat(psi);
                let sp = ev_sp.sat(psi);
                let zero = Q::from_integer(0);
                if (orig == zero) != (sp == zero) {
                    zero_violations += 1;
                }
                if orig != zero {
                    let diff = if sp > orig { sp - orig } else { orig - sp };
                    let dev = diff / orig;
                    let better = match &best {
                        None => true,
                        Some((b, _, _)) => dev > *b,
                    };
                    if better {
                        best = Some((dev, rank, psi.to_vec()));
                    }
                }
            });
            ShardResult {
                best,
                zero_violations,
            }
        })
        .collect();

    let mut best: Option<(Q, u128, Vec<u8>)> = None;
    let mut zero_violations = 0u64;
    for s in shards {
        zero_violations += s.zero_violations;
        if let Some((dev, rank, psi)) = s.best {
            let take = match &best {
                None => true,
                Some((b, br, _)) => dev > *b || (dev == *b && rank < *br),
            };
            if take {
                best = Some((dev, rank, psi));
            }
        }
    }
    let (max_deviation, argmax) = match best {
        Some((dev, _, psi)) => (dev, Some(psi)),
        None => (Q::from_integer(0), None),
    };
    let pass = zero_violations == 0 && max_deviation <= eps;
    Ok(VerifyReport {
        eps,
        assignments: space,
        max_deviation,
        argmax,
        zero_violations,
        pass,
    })
}

/// A family of assignments used to force a lower bound on sparsifier
/// size: every member must keep at least one satisfied clause, and a
/// single clause can serve at most `max_shared` members, so any
/// zero-preserving sparsifier has at least `implied_bound` clauses.
#[derive(Clone, Debug)]
pub struct WitnessFamily {
    pub assignments: Vec<Vec<u8>>,
    /// Per-member indices of satisfied clauses in the complete instance.
    pub satisfied: Vec<Vec<usize>>,
    pub disjoint: bool,
    pub all_nonempty: bool,
    /// Largest number of members sharing one clause (observed).
    pub max_shared: u64,
    /// A priori cap on sharing from the family's structure.
    pub share_cap: u64,
    /// Family size divided by observed sharing.
    pub implied_bound: Q,
}

fn tally_family(assignments: Vec<Vec<u8>>, satisfied: Vec<Vec<usize>>, share_cap: u64) -> WitnessFamily {
    let mut shared: HashMap<usize, u64> = HashMap::new();
    for sat in &satisfied {
        for &j in sat {
            *shared.entry(j).or_insert(0) += 1;
        }
    }
    let max_shared = shared.values().copied().max().unwrap_or(0);
    let all_nonempty = satisfied.iter().all(|s| !s.is_empty());
    let implied_bound = Q::new(assignments.len() as i128, max_shared.max(1) as i128);
    WitnessFamily {
        assignments,
        satisfied,
        disjoint: max_shared <= 1,
        all_nonempty,
        max_shared,
        share_cap,
        implied_bound,
    }
}

/// Hamming-level witness family for a Boolean relation on the complete
/// ordered instance over `n` variables.
///
/// With `c` the uniform exponent, the family is every assignment holding
/// exactly `c` copies of the scarce symbol; a clause serves at most
/// `C(r, c)` of them, so the family forces `Omega(n^c)` kept clauses.
pub fn witness_family_uniform(relation: &ValuedRelation, n: u32) -> Result<WitnessFamily> {
    let r = relation.arity();
    let c = relation.boolean_uniform_exponent()?;
    if c == 0 {
        return Err(Error::invalid(
            "uniform exponent is 0: the relation sparsifies to constant size and has no witness family",
        ));
    }
    let weights: Vec<usize> = relation
        .support()
        .iter()
        .map(|t| t.iter().filter(|&&d| d == 1).count())
        .collect();
    let w_min = *weights.iter().min().unwrap();
    // The scarce symbol: zeros when the light support tuple dominates the
    // exponent, ones otherwise.
    let symbol = if c == w_min { 0u8 } else { 1u8 };
    let inst = Instance::complete(Kind::Uniform, n, r)?;
    let mut assignments = Vec::new();
    let mut stack = vec![0u16; 0];
    choose_positions(n as usize, c, &mut stack, &mut |positions| {
        let mut psi = vec![1 - symbol; n as usize];
        for &p in positions {
            psi[p as usize] = symbol;
        }
        assignments.push(psi);
    });
    let satisfied = satisfied_sets(relation, &inst, &assignments);
    let cap = num::integer::binomial(r as u64, c as u64);
    Ok(tally_family(assignments, satisfied, cap))
}

fn choose_positions(n: usize, k: usize, stack: &mut Vec<u16>, f: &mut impl FnMut(&[u16])) {
    if stack.len() == k {
        f(stack);
        return;
    }
    let start = stack.last().map_or(0, |&p| p as usize + 1);
    for p in start..n {
        stack.push(p as u16);
        choose_positions(n, k, stack, f);
        stack.pop();
    }
}

fn satisfied_sets(
    relation: &ValuedRelation,
    inst: &Instance,
    assignments: &[Vec<u8>],
) -> Vec<Vec<usize>> {
    let r = relation.arity();
    let n = inst.n as usize;
    let part_major = inst.kind == Kind::Rpartite;
    assignments
        .iter()
        .map(|psi| {
            let mut sat = Vec::new();
            let mut pattern = vec![0u8; r];
            for (j, clause) in inst.clauses.iter().enumerate() {
                for (i, &v) in clause.vars.iter().enumerate() {
                    let pos = if part_major { i * n + v as usize } else { v as usize };
                    pattern[i] = psi[pos];
                }
                if relation.value(&pattern) > 0 {
                    sat.push(j);
                }
            }
            sat
        })
        .collect()
}

/// Per-part witness family on the complete r-partite instance, built from
/// a plain AND witness with `c >= 1` pinned coordinates.
///
/// Each choice of one distinguished vertex per pinned part determines an
/// assignment whose satisfied clauses are exactly the `n^(r-c)` clauses
/// through those vertices; the families are pairwise disjoint, so any
/// zero-preserving sparsifier keeps at least `n^c` clauses.
pub fn witness_family_rpartite(
    relation: &ValuedRelation,
    witness: &RestrictionWitness,
    n: u32,
) -> Result<WitnessFamily> {
    let r = relation.arity();
    let c = witness.distinguished.len();
    if c == 0 {
        return Err(Error::invalid(
            "the witness pins no coordinates; the family is empty",
        ));
    }
    let survivor = witness
        .survivor
        .as_ref()
        .ok_or_else(|| Error::invalid("the witness does not isolate a surviving tuple"))?;
    if witness.sets.len() != r {
        return Err(Error::invalid("witness shape does not match the relation"));
    }
    for (i, set) in witness.sets.iter().enumerate() {
        let pinned = witness.distinguished.contains(&i);
        if (pinned && set.len() != 2) || (!pinned && set.len() != 1) {
            return Err(Error::invalid(
                "the family needs a plain witness: pairs at pinned coordinates, single symbols elsewhere",
            ));
        }
    }
    witness.check(relation)?;
    let inst = Instance::complete(Kind::Rpartite, n, r)?;
    // Baseline assignment: every vertex of part i takes the non-surviving
    // symbol at pinned coordinates and the witness symbol elsewhere.
    let mut base = vec![0u8; r * n as usize];
    for i in 0..r {
        let fill = if witness.distinguished.contains(&i) {
            let pair = &witness.sets[i];
            if pair[0] == survivor[i] {
                pair[1]
            } else {
                pair[0]
            }
        } else {
            witness.sets[i][0]
        };
        for v in 0..n as usize {
            base[i * n as usize + v] = fill;
        }
    }
    let mut assignments = Vec::new();
    let mut tau = vec![0u32; c];
    loop {
        let mut psi = base.clone();
        for (slot, &i) in witness.distinguished.iter().enumerate() {
            psi[i * n as usize + tau[slot] as usize] = survivor[i];
        }
        assignments.push(psi);
        // Odometer over distinguished vertices, last slot fastest.
        let mut slot = c;
        loop {
            if slot == 0 {
                break;
            }
            slot -= 1;
            tau[slot] += 1;
            if tau[slot] < n {
                break;
            }
            tau[slot] = 0;
        }
        if tau.iter().all(|&v| v == 0) {
            break;
        }
    }
    let satisfied = satisfied_sets(relation, &inst, &assignments);
    let expect = (n as u128).pow((r - c) as u32) as usize;
    for sat in &satisfied {
        assert_eq!(
            sat.len(),
            expect,
            "each distinguished choice satisfies exactly n^(r-c) clauses"
        );
    }
    let family = tally_family(assignments, satisfied, 1);
    assert!(family.disjoint, "distinguished families never share a clause");
    Ok(family)
}

/// Distinct-codeword counts of a complete instance at each weight
/// threshold.
#[derive(Clone, Debug)]
pub struct CensusReport {
    pub thresholds: Vec<u64>,
    /// Distinct nonzero codewords with that many or fewer satisfied
    /// clauses, aligned with `thresholds`.
    pub counts: Vec<u64>,
    /// Assignments whose codeword is identically zero.
    pub zero_assignments: u128,
    pub distinct_nonzero: u64,
    pub assignments: u128,
}

/// Counts distinct clause-value vectors over all assignments of a
/// complete instance, bucketed by codeword weight (number of satisfied
/// clauses).
///
/// With `dominant = Some(d)`, only assignments giving symbol `d` to at
/// least half the positions are censused. The all-zero codeword is
/// reported separately rather than counted against thresholds.
pub fn codeword_census(
    relation: &ValuedRelation,
    inst: &Instance,
    thresholds: &[u64],
    dominant: Option<u8>,
    budget: u128,
) -> Result<CensusReport> {
    if inst.complete_profile().is_none() {
        return Err(Error::invalid("the census runs on complete instances"));
    }
    let sizes = inst.assignment_domains(relation)?;
    let space = assignment_space(&sizes);
    if space > budget {
        return Err(Error::Budget {
            size: space,
            budget,
        });
    }
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut zero_assignments = 0u128;
    let mut censused = 0u128;
    let mut err = None;
    for_each_assignment_in(&sizes, 0, space, &mut |_, psi| {
        if err.is_some() {
            return;
        }
        if let Some(d) = dominant {
            let hits = psi.iter().filter(|&&s| s == d).count();
            if 2 * hits < psi.len() {
                return;
            }
        }
        censused += 1;
        match codeword(relation, inst, psi) {
            Ok(word) => {
                if word.iter().all(|&v| v == 0) {
                    zero_assignments += 1;
                } else {
                    seen.insert(word);
                }
            }
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    let counts = thresholds
        .iter()
        .map(|&t| {
            seen.iter()
                .filter(|w| w.iter().filter(|&&v| v > 0).count() as u64 <= t)
                .count() as u64
        })
        .collect();
    Ok(CensusReport {
        thresholds: thresholds.to_vec(),
        counts,
        zero_assignments,
        distinct_nonzero: seen.len() as u64,
        assignments: censused,
    })
}

/// Number of distinct variable subsets of size `t_size` contained in at
/// least one clause of the instance.
pub fn tight_coverage_statistic(
    relation: &ValuedRelation,
    inst: &Instance,
    t_size: usize,
) -> Result<u64> {
    let r = relation.arity();
    if t_size == 0 || t_size > r {
        return Err(Error::invalid(format!(
            "subset size must be between 1 and the arity {r}, got {t_size}"
        )));
    }
    let mut seen: HashSet<Vec<u16>> = HashSet::new();
    let mut stack = Vec::new();
    for clause in &inst.clauses {
        let mut vars = clause.vars.clone();
        vars.sort_unstable();
        vars.dedup();
        subsets_of(&vars, t_size, &mut stack, &mut |s| {
            seen.insert(s.to_vec());
        });
    }
    Ok(seen.len() as u64)
}

fn subsets_of(vars: &[u16], k: usize, stack: &mut Vec<u16>, f: &mut impl FnMut(&[u16])) {
    if stack.len() == k {
        f(stack);
        return;
    }
    let need = k - stack.len();
    let start = match stack.last() {
        None => 0,
        Some(&last) => vars.partition_point(|&v| v <= last),
    };
    for i in start..=vars.len().saturating_sub(need) {
        stack.push(vars[i]);
        subsets_of(vars, k, stack, f);
        stack.pop();
    }
}

/// Exact satisfaction value of every assignment histogram on the complete
/// ordered instance over `n` variables, in lexicographic histogram order.
///
/// Permutation invariance makes the histogram a sufficient statistic, so
/// this profiles all assignment values at polynomial cost.
pub fn min_sat_profile(relation: &ValuedRelation, n: u32) -> Result<Vec<(Histogram, Q)>> {
    let sym = SymmetricValuedRelation::from_relation(relation)?;
    let support: Vec<(Histogram, u64)> = sym
        .support()
        .into_iter()
        .map(|h| {
            let v = sym.value(&h);
            (h, v)
        })
        .collect();
    let dsize = sym.dsize();
    Ok(Histogram::all(dsize, n)
        .into_iter()
        .map(|g| {
            let mut acc = Q::from_integer(0);
            for (h, v) in &support {
                let ways = subset_ways(&g, h);
                if ways > 0 {
                    acc += Q::from_integer(*v as i128) * Q::from_integer(ways as i128);
                }
            }
            (g, acc)
        })
        .collect())
}

/// Smallest nonzero entry of a [`min_sat_profile`], with the first
/// histogram attaining it.
pub fn min_positive_sat(profile: &[(Histogram, Q)]) -> Option<(&Histogram, Q)> {
    let zero = Q::from_integer(0);
    let mut best: Option<(&Histogram, Q)> = None;
    for (h, v) in profile {
        if *v > zero && best.as_ref().is_none_or(|(_, b)| *v < *b) {
            best = Some((h, *v));
        }
    }
    best
}

/// A pair of nearby assignment histograms with separated values.
#[derive(Clone, Debug)]
pub struct Separation {
    pub low: Histogram,
    pub high: Histogram,
    pub low_sat: Q,
    pub high_sat: Q,
    /// `high_sat / low_sat - 1`.
    pub delta: Q,
    /// Half the total count displacement between the histograms.
    pub hamming: u32,
}

impl fmt::Display for Separation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} -> {} lifts {} to {} (delta {}, hamming {})",
            self.low, self.high, self.low_sat, self.high_sat, self.delta, self.hamming
        )
    }
}

/// Searches the complete ordered instance over `n` variables for two
/// assignments within Hamming distance `n/2` whose nonzero values differ
/// by the largest ratio. Returns `None` when every such pair agrees.
pub fn value_separation_search(relation: &ValuedRelation, n: u32) -> Result<Option<Separation>> {
    let profile = min_sat_profile(relation, n)?;
    let zero = Q::from_integer(0);
    let positive: Vec<&(Histogram, Q)> = profile.iter().filter(|(_, v)| *v > zero).collect();
    let mut best: Option<Separation> = None;
    for (a, (g, gv)) in positive.iter().enumerate() {
        for (g2, g2v) in positive.iter().skip(a + 1) {
            let moved: u32 = g
                .counts()
                .iter()
                .zip(g2.counts())
                .map(|(&x, &y)| x.abs_diff(y))
                .sum();
            let hamming = moved / 2;
            if 2 * hamming > n || gv == g2v {
                continue;
            }
            let (low, high, low_sat, high_sat) = if gv < g2v {
                (g, g2, *gv, *g2v)
            } else {
                (g2, g, *g2v, *gv)
            };
            let delta = high_sat / low_sat - Q::from_integer(1);
            if best.as_ref().is_none_or(|b| delta > b.delta) {
                best = Some(Separation {
                    low: low.clone(),
                    high: high.clone(),
                    low_sat,
                    high_sat,
                    delta,
                    hamming,
                });
            }
        }
    }
    Ok(best)
}
