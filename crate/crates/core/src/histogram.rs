//! Symmetrized view of a valued relation: histograms, plentifulness, tight
//! sets, rigidity, marginal predicates, the two marginal-uniformity checks,
//! and the classification verdict that picks a sampling route.
//!
//! A relation over a shared domain induces a function on histograms: the
//! value of histogram `h` is the number of orderings it admits times the
//! total relation value over tuples with that histogram. Instances whose
//! clauses are unordered variable sets see only this symmetrized form, so
//! the structure theory here decides how much sampling the relation
//! tolerates.

use crate::error::{Error, Result};
use crate::relation::{tuple_string, ValuedRelation};
use std::collections::HashMap;
use std::fmt;

/// Symbol counts over a fixed domain; the total is the arity (or the part
/// size) the histogram describes.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Histogram(Vec<u32>);

impl Histogram {
    pub fn new(counts: Vec<u32>) -> Self {
        Histogram(counts)
    }

    pub fn of_tuple(t: &[u8], dsize: u8) -> Self {
        let mut counts = vec![0u32; dsize as usize];
        for &s in t {
            counts[s as usize] += 1;
        }
        Histogram(counts)
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, d: u8) -> u32 {
        self.0[d as usize]
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn dsize(&self) -> u8 {
        self.0.len() as u8
    }

    /// Sum of counts over a set of symbols.
    pub fn mass(&self, syms: &[u8]) -> u32 {
        syms.iter().map(|&e| self.get(e)).sum()
    }

    /// All histograms over `dsize` symbols with the given total, in
    /// lexicographic order.
    pub fn all(dsize: u8, total: u32) -> Vec<Histogram> {
        let mut out = Vec::new();
        let mut counts = vec![0u32; dsize as usize];
        fn rec(counts: &mut Vec<u32>, pos: usize, left: u32, out: &mut Vec<Histogram>) {
            if pos + 1 == counts.len() {
                counts[pos] = left;
                out.push(Histogram(counts.clone()));
                return;
            }
            for v in 0..=left {
                counts[pos] = v;
                rec(counts, pos + 1, left - v, out);
            }
        }
        rec(&mut counts, 0, total, &mut out);
        out
    }

    /// Number of histograms over `dsize` symbols with the given total.
    pub fn count(dsize: u8, total: u32) -> u128 {
        num::integer::binomial(total as u128 + dsize as u128 - 1, dsize as u128 - 1)
    }
}

impl fmt::Debug for Histogram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for Histogram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Number of ways to pick a sub-multiset with histogram `h` from a pool
/// with histogram `g`: the product of per-symbol binomials.
pub fn subset_ways(g: &Histogram, h: &Histogram) -> u128 {
    debug_assert_eq!(g.dsize(), h.dsize());
    let mut ways: u128 = 1;
    for d in 0..g.dsize() {
        let (gd, hd) = (g.get(d) as u128, h.get(d) as u128);
        if hd > gd {
            return 0;
        }
        ways *= num::integer::binomial(gd, hd);
    }
    ways
}

fn factorial(n: u32) -> u64 {
    (1..=n as u64).product()
}

/// A function from histograms (over one domain, fixed total) to
/// nonnegative integers, stored densely in lexicographic order.
#[derive(Clone, PartialEq, Eq)]
pub struct SymmetricValuedRelation {
    dsize: u8,
    total: u32,
    hists: Vec<Histogram>,
    values: Vec<u64>,
    index: HashMap<Histogram, usize>,
}

impl SymmetricValuedRelation {
    pub fn new(dsize: u8, total: u32, value_of: impl Fn(&Histogram) -> u64) -> Self {
        let hists = Histogram::all(dsize, total);
        let values: Vec<u64> = hists.iter().map(&value_of).collect();
        let index = hists
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, h)| (h, i))
            .collect();
        SymmetricValuedRelation {
            dsize,
            total,
            hists,
            values,
            index,
        }
    }

    /// Symmetrizes a relation over a shared domain: histogram `h` maps to
    /// `(prod_d h_d!) * sum of values over tuples with histogram h`. The
    /// multiplier makes evaluation over unordered variable sets agree with
    /// evaluation of the original relation over all orderings.
    pub fn from_relation(r: &ValuedRelation) -> Result<Self> {
        let dsize = r
            .single_domain()
            .ok_or_else(|| Error::invalid("symmetrization requires a shared domain"))?;
        let total = r.arity() as u32;
        let mut sums: HashMap<Histogram, u64> = HashMap::new();
        for idx in 0..r.table_size() {
            let v = r.value_at(idx);
            if v > 0 {
                let h = Histogram::of_tuple(&r.tuple_at(idx), dsize);
                *sums.entry(h).or_insert(0) += v as u64;
            }
        }
        Ok(Self::new(dsize, total, |h| {
            let mult: u64 = h.counts().iter().map(|&c| factorial(c)).product();
            mult * sums.get(h).copied().unwrap_or(0)
        }))
    }

    pub fn dsize(&self) -> u8 {
        self.dsize
    }

    /// Total count of each histogram (the arity of the underlying tuples).
    pub fn total(&self) -> u32 {
        self.total
    }

    pub fn hists(&self) -> &[Histogram] {
        &self.hists
    }

    pub fn value(&self, h: &Histogram) -> u64 {
        self.values[self.index[h]]
    }

    pub fn max_value(&self) -> u64 {
        self.values.iter().copied().max().unwrap_or(0)
    }

    /// Histograms with nonzero value, in lexicographic order.
    pub fn support(&self) -> Vec<Histogram> {
        self.hists
            .iter()
            .zip(&self.values)
            .filter(|(_, &v)| v > 0)
            .map(|(h, _)| h.clone())
            .collect()
    }

    /// Whether every support histogram can push at least `k` mass onto any
    /// chosen symbol: for all `d` and all support `h` there is a support
    /// `g` with `g_e <= h_e` away from `d` and `g_d >= k`.
    pub fn is_k_plentiful(&self, k: u32) -> bool {
        let supp = self.support();
        if supp.is_empty() {
            return false;
        }
        (0..self.dsize).all(|d| {
            supp.iter().all(|h| {
                supp.iter().any(|g| {
                    g.get(d) >= k
                        && (0..self.dsize).all(|e| e == d || g.get(e) <= h.get(e))
                })
            })
        })
    }

    /// The largest `k` for which the relation is `k`-plentiful.
    pub fn precise_plentifulness(&self) -> u32 {
        let mut k = 0;
        while k < self.total && self.is_k_plentiful(k + 1) {
            k += 1;
        }
        k
    }

    /// Support histograms `h` with `h_d = k` such that no other support
    /// histogram fits under `h` away from `d`.
    pub fn tight_set(&self, d: u8, k: u32) -> Vec<Histogram> {
        self.support()
            .into_iter()
            .filter(|h| h.get(d) == k && self.is_tight(h, d))
            .collect()
    }

    fn is_tight(&self, h: &Histogram, d: u8) -> bool {
        self.support().iter().all(|g| {
            g == h || !(0..self.dsize).all(|e| e == d || g.get(e) <= h.get(e))
        })
    }

    /// Whether `h` concentrates its `E`-mass on `d` unavoidably: the other
    /// symbols of `E` are absent from `h`, and every support histogram that
    /// fits under `h` outside `E` carries exactly `h_d` mass on `E`.
    pub fn is_rigid(&self, h: &Histogram, d: u8, e_set: &[u8]) -> bool {
        debug_assert!(e_set.contains(&d));
        if e_set.iter().any(|&e| e != d && h.get(e) != 0) {
            return false;
        }
        let outside: Vec<u8> = (0..self.dsize).filter(|e| !e_set.contains(e)).collect();
        self.support().iter().all(|g| {
            let fits = outside.iter().all(|&e| g.get(e) <= h.get(e));
            !fits || g.mass(e_set) == h.get(d)
        })
    }

    /// Symbols `e` such that `h` is rigid for `d` on the pair `{d, e}`.
    /// Requires `h` to be a `d`-tight support histogram.
    ///
    /// When the relation is `h_d`-plentiful, moving the `d`-mass of `h`
    /// onto any such `e` lands in the tight set of `e` at the same level;
    /// checked here as a debug assertion under that hypothesis.
    pub fn uncontrolled(&self, h: &Histogram, d: u8) -> Result<Vec<u8>> {
        if self.value(h) == 0 || !self.is_tight(h, d) {
            return Err(Error::invalid(format!(
                "histogram {h} is not a tight support histogram for symbol {d}"
            )));
        }
        let out: Vec<u8> = (0..self.dsize)
            .filter(|&e| {
                let pair = if e == d { vec![d] } else { sorted_pair(d, e) };
                self.is_rigid(h, d, &pair)
            })
            .collect();
        if cfg!(debug_assertions) && self.is_k_plentiful(h.get(d)) {
            for &e in &out {
                if e != d {
                    let mut counts = h.counts().to_vec();
                    counts[e as usize] = counts[d as usize];
                    counts[d as usize] = 0;
                    let swapped = Histogram::new(counts);
                    debug_assert!(
                        self.value(&swapped) > 0 && self.is_tight(&swapped, e),
                        "mass swap {h} -> {swapped} left the tight set"
                    );
                }
            }
        }
        Ok(out)
    }

    /// Restriction of the relation to histograms agreeing with `h` outside
    /// `e_set`, viewed as a function of the `E`-part alone. Requires some
    /// `d` in `e_set` for which `h` is tight and rigid; the `E`-part then
    /// has total mass `h_d`.
    pub fn marginal_predicate(&self, h: &Histogram, e_set: &[u8]) -> Result<MarginalPredicate> {
        let d = e_set
            .iter()
            .copied()
            .find(|&d| self.value(h) > 0 && self.is_tight(h, d) && self.is_rigid(h, d, e_set))
            .ok_or_else(|| {
                Error::invalid(format!(
                    "histogram {h} is not tight and rigid on {{{}}} for any of its symbols",
                    join_syms(e_set)
                ))
            })?;
        let k = h.get(d);
        let entries: Vec<(Histogram, u64)> = Histogram::all(e_set.len() as u8, k)
            .into_iter()
            .map(|g| {
                let mut counts = h.counts().to_vec();
                for (j, &e) in e_set.iter().enumerate() {
                    counts[e as usize] = g.get(j as u8);
                }
                let v = self.value(&Histogram::new(counts));
                (g, v)
            })
            .collect();
        let first = entries[0].1;
        let uniform = entries.iter().all(|(_, v)| *v == first);
        Ok(MarginalPredicate {
            syms: e_set.to_vec(),
            pivot: d,
            k,
            entries,
            uniform,
        })
    }

    /// The `(d, h, E)` triples examined by the marginal-uniformity checks:
    /// `h` ranges over the tight set of `d` at the precise plentifulness
    /// level, `E` over symbol subsets containing `d` on which `h` is rigid.
    /// Order: `d` ascending, `h` lexicographic, `E` by ascending bitmask.
    pub fn rigid_frames(&self) -> Vec<(u8, Histogram, Vec<u8>)> {
        let k = self.precise_plentifulness();
        let mut frames = Vec::new();
        for d in 0..self.dsize {
            for h in self.tight_set(d, k) {
                for mask in 1u32..(1 << self.dsize) {
                    if mask & (1 << d) == 0 {
                        continue;
                    }
                    let e_set: Vec<u8> =
                        (0..self.dsize).filter(|&e| mask & (1 << e) != 0).collect();
                    if self.is_rigid(&h, d, &e_set) {
                        frames.push((d, h.clone(), e_set));
                    }
                }
            }
        }
        frames
    }

    /// First non-uniform marginal predicate over the rigid frames, if any.
    pub fn marginal_violation(&self) -> Option<SvrViolation> {
        for (d, h, e_set) in self.rigid_frames() {
            let m = self
                .marginal_predicate(&h, &e_set)
                .expect("frame is tight and rigid by construction");
            if !m.uniform {
                for i in 0..m.entries.len() {
                    for j in i + 1..m.entries.len() {
                        if m.entries[i].1 != m.entries[j].1 {
                            return Some(SvrViolation {
                                d,
                                h,
                                e_set,
                                g_first: m.entries[i].0.clone(),
                                g_second: m.entries[j].0.clone(),
                                v_first: m.entries[i].1,
                                v_second: m.entries[j].1,
                            });
                        }
                    }
                }
            }
        }
        None
    }

    /// Whether every marginal predicate over the rigid frames is uniform.
    pub fn is_marginally_uniform(&self) -> bool {
        self.marginal_violation().is_none()
    }

    /// Lower and upper envelopes over the classes "equal outside `e_set`":
    /// per class, the pointwise minimum and maximum of the relation.
    pub fn sandwich(&self, e_set: &[u8]) -> (SymmetricValuedRelation, SymmetricValuedRelation) {
        let outside_key = |h: &Histogram| -> Vec<u32> {
            (0..self.dsize)
                .filter(|e| !e_set.contains(e))
                .map(|e| h.get(e))
                .collect()
        };
        let mut lo: HashMap<Vec<u32>, u64> = HashMap::new();
        let mut hi: HashMap<Vec<u32>, u64> = HashMap::new();
        for (h, &v) in self.hists.iter().zip(&self.values) {
            let key = outside_key(h);
            lo.entry(key.clone())
                .and_modify(|m| *m = (*m).min(v))
                .or_insert(v);
            hi.entry(key).and_modify(|m| *m = (*m).max(v)).or_insert(v);
        }
        let lower = Self::new(self.dsize, self.total, |h| lo[&outside_key(h)]);
        let upper = Self::new(self.dsize, self.total, |h| hi[&outside_key(h)]);
        (lower, upper)
    }
}

impl fmt::Debug for SymmetricValuedRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymmetricValuedRelation(dsize={}, total={}, support=[", self.dsize, self.total)?;
        let mut first = true;
        for (h, &v) in self.hists.iter().zip(&self.values) {
            if v > 0 {
                if !first {
                    write!(f, ", ")?;
                }
                write!(f, "{h}:{v}")?;
                first = false;
            }
        }
        write!(f, "])")
    }
}

fn sorted_pair(a: u8, b: u8) -> Vec<u8> {
    if a < b {
        vec![a, b]
    } else {
        vec![b, a]
    }
}

fn join_syms(syms: &[u8]) -> String {
    syms.iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// A marginal predicate: the relation restricted to one rigid frame,
/// indexed by histograms over the frame's symbol set.
#[derive(Clone, Debug)]
pub struct MarginalPredicate {
    /// The symbols of `E`, ascending; marginal histograms index into this.
    pub syms: Vec<u8>,
    /// The symbol for which the frame is tight and rigid.
    pub pivot: u8,
    /// Total mass of the marginal histograms.
    pub k: u32,
    /// Marginal histogram and value, in lexicographic order.
    pub entries: Vec<(Histogram, u64)>,
    pub uniform: bool,
}

/// First witness that the symmetrized relation is not marginally uniform.
#[derive(Clone, Debug)]
pub struct SvrViolation {
    pub d: u8,
    pub h: Histogram,
    pub e_set: Vec<u8>,
    pub g_first: Histogram,
    pub g_second: Histogram,
    pub v_first: u64,
    pub v_second: u64,
}

impl fmt::Display for SvrViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "d={} h={} E={{{}}} values {} at {} vs {} at {}",
            self.d,
            self.h,
            join_syms(&self.e_set),
            self.v_first,
            self.g_first,
            self.v_second,
            self.g_second
        )
    }
}

/// First witness that the relation itself is not marginally uniform: two
/// tuples in one swap class with different values.
#[derive(Clone, Debug)]
pub struct VrViolation {
    pub d: u8,
    pub h: Histogram,
    pub e_set: Vec<u8>,
    pub s: Vec<u8>,
    pub t: Vec<u8>,
    pub v_s: u32,
    pub v_t: u32,
}

impl fmt::Display for VrViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "s={} t={} E={{{}}} values {} vs {} (frame d={} h={})",
            tuple_string(&self.s),
            tuple_string(&self.t),
            join_syms(&self.e_set),
            self.v_s,
            self.v_t,
            self.d,
            self.h
        )
    }
}

/// Tuples related by re-choosing symbols of `e_set` in place: `t` agrees
/// with `s` exactly on the coordinates where `s` is outside `e_set`.
fn for_each_class_member(s: &[u8], e_set: &[u8], f: &mut dyn FnMut(&[u8])) {
    let choices: Vec<Vec<u8>> = s
        .iter()
        .map(|&si| {
            if e_set.contains(&si) {
                e_set.to_vec()
            } else {
                vec![si]
            }
        })
        .collect();
    let mut pick = vec![0usize; s.len()];
    let mut t: Vec<u8> = choices.iter().map(|c| c[0]).collect();
    loop {
        f(&t);
        let mut i = s.len();
        let done = loop {
            if i == 0 {
                break true;
            }
            i -= 1;
            if pick[i] + 1 < choices[i].len() {
                pick[i] += 1;
                t[i] = choices[i][pick[i]];
                break false;
            }
            pick[i] = 0;
            t[i] = choices[i][0];
        };
        if done {
            return;
        }
    }
}

/// First witness that the relation is not marginally uniform at the tuple
/// level: over each rigid frame, tuples with the frame's histogram must
/// keep their value when symbols of `E` are re-chosen in place.
pub fn vr_marginal_violation(
    r: &ValuedRelation,
    sym: &SymmetricValuedRelation,
) -> Option<VrViolation> {
    for (d, h, e_set) in sym.rigid_frames() {
        for idx in 0..r.table_size() {
            let s = r.tuple_at(idx);
            if Histogram::of_tuple(&s, sym.dsize()) != h {
                continue;
            }
            let vs = r.value(&s);
            let mut hit: Option<VrViolation> = None;
            for_each_class_member(&s, &e_set, &mut |t| {
                if hit.is_none() && r.value(t) != vs {
                    hit = Some(VrViolation {
                        d,
                        h: h.clone(),
                        e_set: e_set.clone(),
                        s: s.clone(),
                        t: t.to_vec(),
                        v_s: vs,
                        v_t: r.value(t),
                    });
                }
            });
            if hit.is_some() {
                return hit;
            }
        }
    }
    None
}

/// Whether the relation keeps its value under in-place re-choice of rigid
/// frame symbols.
pub fn is_marginally_uniform_vr(r: &ValuedRelation, sym: &SymmetricValuedRelation) -> bool {
    vr_marginal_violation(r, sym).is_none()
}

/// Lower and upper envelopes of the relation over the tuple classes of
/// `e_set`: swap classes as in [`vr_marginal_violation`].
pub fn vr_sandwich(r: &ValuedRelation, e_set: &[u8]) -> (ValuedRelation, ValuedRelation) {
    let size = r.table_size();
    let mut lo = vec![u32::MAX; size];
    let mut hi = vec![0u32; size];
    for idx in 0..size {
        let s = r.tuple_at(idx);
        let v = r.value_at(idx);
        let key: Vec<u8> = s
            .iter()
            .map(|&si| if e_set.contains(&si) { u8::MAX } else { si })
            .collect();
        // Representative index: first class member in lex order.
        let rep: Vec<u8> = key
            .iter()
            .map(|&ki| if ki == u8::MAX { e_set[0] } else { ki })
            .collect();
        let ridx = r.index_of(&rep);
        lo[ridx] = lo[ridx].min(v);
        hi[ridx] = hi[ridx].max(v);
    }
    let mut lower = vec![0u32; size];
    let mut upper = vec![0u32; size];
    for idx in 0..size {
        let s = r.tuple_at(idx);
        let rep: Vec<u8> = s
            .iter()
            .map(|&si| if e_set.contains(&si) { e_set[0] } else { si })
            .collect();
        let ridx = r.index_of(&rep);
        lower[idx] = lo[ridx];
        upper[idx] = hi[ridx];
    }
    (
        ValuedRelation::new(r.domains().to_vec(), lower).unwrap(),
        ValuedRelation::new(r.domains().to_vec(), upper).unwrap(),
    )
}

/// Which sampling route an instance over this relation can take.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum UniformityCase {
    /// The symmetrized relation already has a non-uniform marginal; only
    /// the coarse rate is available.
    SymSkewed,
    /// The relation itself is marginally uniform; the fine rate applies to
    /// independent clause sampling.
    FullyUniform,
    /// The symmetrized relation is marginally uniform but the relation is
    /// not; the fine rate needs bundled (whole-set) sampling.
    TupleSkewed,
}

impl UniformityCase {
    pub fn label(self) -> &'static str {
        match self {
            UniformityCase::SymSkewed => "sym-skewed",
            UniformityCase::FullyUniform => "fully-uniform",
            UniformityCase::TupleSkewed => "tuple-skewed",
        }
    }
}

/// One rigid frame at the precise plentifulness level, with its marginal
/// values.
#[derive(Clone, Debug)]
pub struct RigidMarginal {
    pub d: u8,
    pub h: Histogram,
    pub e_set: Vec<u8>,
    pub values: Vec<u64>,
    pub uniform: bool,
}

/// Everything the planner needs to know about a relation over a shared
/// domain.
#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub arity: usize,
    pub dsize: u8,
    pub support_size: usize,
    pub max_value: u32,
    /// Maximum AND arity and its uniformity-adjusted companion.
    pub c: usize,
    pub hat_c: usize,
    /// Precise plentifulness of the symmetrized relation.
    pub k: u32,
    pub sym: SymmetricValuedRelation,
    /// Nonempty tight sets, as `(d, level, histograms)`, all levels.
    pub tight: Vec<(u8, u32, Vec<Histogram>)>,
    /// Rigid frames at the precise level with their marginal values.
    pub rigid: Vec<RigidMarginal>,
    pub sym_uniform: bool,
    pub sym_violation: Option<SvrViolation>,
    pub vr_uniform: bool,
    pub vr_violation: Option<VrViolation>,
    pub case: UniformityCase,
    /// Whether the relation is a positive constant on the whole product;
    /// such relations sparsify to a single constraint.
    pub constant: bool,
}

impl ClassificationReport {
    /// Sparsifier size exponent for the uniform model: the coarse route
    /// pays one extra power of n.
    pub fn exponent(&self) -> u32 {
        let r = self.arity as u32;
        match self.case {
            UniformityCase::SymSkewed => r - self.k + 1,
            _ => r - self.k,
        }
    }

    /// Power of 1/epsilon in the sample-count formula.
    pub fn eps_power(&self) -> u32 {
        match self.case {
            UniformityCase::SymSkewed => 2,
            _ => 3,
        }
    }

    /// Stable `key=value` lines for scripting.
    pub fn machine_lines(&self) -> Vec<String> {
        let mut out = vec![
            format!("arity={}", self.arity),
            format!("dsize={}", self.dsize),
            format!("support_size={}", self.support_size),
            format!("max_value={}", self.max_value),
            format!("c={}", self.c),
            format!("hat_c={}", self.hat_c),
            format!("k={}", self.k),
            format!("sym_uniform={}", self.sym_uniform),
            format!("vr_uniform={}", self.vr_uniform),
            format!("case={}", self.case.label()),
            format!("exponent={}", self.exponent()),
            format!("eps_power={}", self.eps_power()),
            format!("constant={}", self.constant),
        ];
        if let Some(v) = &self.sym_violation {
            out.push(format!("sym_violation={v}"));
        }
        if let Some(v) = &self.vr_violation {
            out.push(format!("vr_violation={v}"));
        }
        out
    }
}

impl fmt::Display for ClassificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "arity: {}", self.arity)?;
        writeln!(f, "domain size: {}", self.dsize)?;
        writeln!(f, "support size: {}", self.support_size)?;
        writeln!(f, "max value: {}", self.max_value)?;
        writeln!(f, "and arity: {}", self.c)?;
        writeln!(f, "adjusted and arity: {}", self.hat_c)?;
        writeln!(f, "plentifulness: {}", self.k)?;
        writeln!(f, "symmetrized support:")?;
        for h in self.sym.support() {
            writeln!(f, "  {h} -> {}", self.sym.value(&h))?;
        }
        writeln!(f, "tight sets:")?;
        for (d, level, hs) in &self.tight {
            let list: Vec<String> = hs.iter().map(|h| h.to_string()).collect();
            writeln!(f, "  d={d} level={level}: {}", list.join(" "))?;
        }
        writeln!(f, "rigid marginals at level {}:", self.k)?;
        for rm in &self.rigid {
            let vals: Vec<String> = rm.values.iter().map(|v| v.to_string()).collect();
            writeln!(
                f,
                "  d={} h={} E={{{}}}: values {} ({})",
                rm.d,
                rm.h,
                join_syms(&rm.e_set),
                vals.join(" "),
                if rm.uniform { "uniform" } else { "non-uniform" }
            )?;
        }
        writeln!(
            f,
            "symmetrized marginally uniform: {}",
            if self.sym_uniform { "yes" } else { "no" }
        )?;
        if let Some(v) = &self.sym_violation {
            writeln!(f, "  violation: {v}")?;
        }
        writeln!(
            f,
            "relation marginally uniform: {}",
            if self.vr_uniform { "yes" } else { "no" }
        )?;
        if let Some(v) = &self.vr_violation {
            writeln!(f, "  violation: {v}")?;
        }
        writeln!(f, "case: {}", self.case.label())?;
        writeln!(f, "sparsifier exponent: {}", self.exponent())?;
        writeln!(f, "epsilon power: {}", self.eps_power())?;
        if self.constant {
            writeln!(f, "constant relation: single constraint suffices")?;
        }
        Ok(())
    }
}

/// Full structural analysis of a relation over a shared domain.
pub fn classify(r: &ValuedRelation) -> Result<ClassificationReport> {
    let sym = SymmetricValuedRelation::from_relation(r)?;
    if sym.max_value() == 0 {
        return Err(Error::invalid("relation has empty support"));
    }
    let (c, _) = r.max_and_arity()?;
    let (_, hat_c) = r.hat_c()?;
    let k = sym.precise_plentifulness();
    let mut tight = Vec::new();
    for d in 0..sym.dsize() {
        for level in 0..=sym.total() {
            let set = sym.tight_set(d, level);
            if !set.is_empty() {
                tight.push((d, level, set));
            }
        }
    }
    let rigid: Vec<RigidMarginal> = sym
        .rigid_frames()
        .into_iter()
        .map(|(d, h, e_set)| {
            let m = sym.marginal_predicate(&h, &e_set).unwrap();
            RigidMarginal {
                d,
                h,
                e_set,
                values: m.entries.iter().map(|(_, v)| *v).collect(),
                uniform: m.uniform,
            }
        })
        .collect();
    let sym_violation = sym.marginal_violation();
    let sym_uniform = sym_violation.is_none();
    let vr_violation = if sym_uniform {
        vr_marginal_violation(r, &sym)
    } else {
        None
    };
    let vr_uniform = sym_uniform && vr_violation.is_none();
    let case = if !sym_uniform {
        UniformityCase::SymSkewed
    } else if vr_uniform {
        UniformityCase::FullyUniform
    } else {
        UniformityCase::TupleSkewed
    };
    Ok(ClassificationReport {
        arity: r.arity(),
        dsize: sym.dsize(),
        support_size: r.support_size(),
        max_value: r.max_value(),
        c,
        hat_c,
        k,
        sym,
        tight,
        rigid,
        sym_uniform,
        sym_violation,
        vr_uniform,
        vr_violation,
        case,
        constant: r.is_constant_nonzero(),
    })
}
