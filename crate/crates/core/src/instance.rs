//! Weighted constraint instances over a relation: complete and random
//! construction, exact-rational satisfaction values, codewords, and the
//! text format.
//!
//! Three instance kinds share one clause list representation:
//!
//! - `uniform`: clauses are ordered tuples of distinct variables from one
//!   pool of `n`; assignments have length `n`.
//! - `rpartite`: clauses pick one variable per part from `r` parts of size
//!   `n` each; clause entry `i` is an index into part `i`, and assignments
//!   have length `n * r` laid out part-major (part `i` occupies positions
//!   `i*n .. (i+1)*n`).
//! - `symset`: clauses are unordered `r`-subsets of one pool, stored
//!   strictly increasing; evaluation goes through the symmetrized relation.

use crate::error::{Error, Result};
use crate::histogram::{subset_ways, Histogram, SymmetricValuedRelation};
use crate::relation::ValuedRelation;
use crate::rng;
use crate::Q;
use std::collections::HashMap;
use std::fmt::Write as _;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Kind {
    Uniform,
    Rpartite,
    SymSet,
}

impl Kind {
    pub fn label(self) -> &'static str {
        match self {
            Kind::Uniform => "uniform",
            Kind::Rpartite => "rpartite",
            Kind::SymSet => "symset",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Kind::Uniform),
            "rpartite" => Ok(Kind::Rpartite),
            "symset" => Ok(Kind::SymSet),
            _ => Err(Error::invalid(format!("unknown instance kind {s:?}"))),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Clause {
    pub vars: Vec<u16>,
    pub weight: Q,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Instance {
    pub kind: Kind,
    pub n: u32,
    pub r: usize,
    pub clauses: Vec<Clause>,
}

/// Falling factorial `n * (n-1) * ... * (n-r+1)`.
fn falling(n: u128, r: u128) -> u128 {
    (0..r).map(|i| n - i).product()
}

impl Instance {
    /// Number of clauses in the complete instance of a kind.
    pub fn universe_size(kind: Kind, n: u32, r: usize) -> u128 {
        match kind {
            Kind::Uniform => falling(n as u128, r as u128),
            Kind::Rpartite => (n as u128).pow(r as u32),
            Kind::SymSet => num::integer::binomial(n as u128, r as u128),
        }
    }

    fn check_shape(kind: Kind, n: u32, r: usize) -> Result<()> {
        if r == 0 || r > crate::relation::MAX_ARITY {
            return Err(Error::invalid(format!("arity {r} out of range")));
        }
        if n == 0 || n > u16::MAX as u32 {
            return Err(Error::invalid(format!("variable count {n} out of range")));
        }
        if matches!(kind, Kind::Uniform | Kind::SymSet) && (n as usize) < r {
            return Err(Error::invalid(format!(
                "need at least {r} variables for arity {r}, got {n}"
            )));
        }
        Ok(())
    }

    /// The complete unit-weight instance: every clause of the universe
    /// exactly once, in lexicographic order.
    pub fn complete(kind: Kind, n: u32, r: usize) -> Result<Instance> {
        Self::check_shape(kind, n, r)?;
        let mut clauses = Vec::new();
        let one = Q::from_integer(1);
        match kind {
            Kind::Uniform => {
                let mut vars: Vec<u16> = Vec::with_capacity(r);
                fn rec(n: u16, r: usize, vars: &mut Vec<u16>, out: &mut Vec<Clause>, one: Q) {
                    if vars.len() == r {
                        out.push(Clause {
                            vars: vars.clone(),
                            weight: one,
                        });
                        return;
                    }
                    for v in 0..n {
                        if !vars.contains(&v) {
                            vars.push(v);
                            rec(n, r, vars, out, one);
                            vars.pop();
                        }
                    }
                }
                rec(n as u16, r, &mut vars, &mut clauses, one);
            }
            Kind::Rpartite => {
                let mut vars = vec![0u16; r];
                loop {
                    clauses.push(Clause {
                        vars: vars.clone(),
                        weight: one,
                    });
                    let mut i = r;
                    let done = loop {
                        if i == 0 {
                            break true;
                        }
                        i -= 1;
                        if (vars[i] as u32) + 1 < n {
                            vars[i] += 1;
                            break false;
                        }
                        vars[i] = 0;
                    };
                    if done {
                        break;
                    }
                }
            }
            Kind::SymSet => {
                let mut vars: Vec<u16> = (0..r as u16).collect();
                loop {
                    clauses.push(Clause {
                        vars: vars.clone(),
                        weight: one,
                    });
                    // Next strictly increasing r-subset in lex order.
                    let mut i = r;
                    let done = loop {
                        if i == 0 {
                            break true;
                        }
                        i -= 1;
                        if (vars[i] as u32) < n - (r - i) as u32 {
                            vars[i] += 1;
                            for j in i + 1..r {
                                vars[j] = vars[j - 1] + 1;
                            }
                            break false;
                        }
                    };
                    if done {
                        break;
                    }
                }
            }
        }
        Ok(Instance {
            kind,
            n,
            r,
            clauses,
        })
    }

    /// `m` unit-weight clauses drawn independently and uniformly (with
    /// replacement) from the universe, reproducibly from `seed`.
    pub fn random(kind: Kind, n: u32, r: usize, m: u64, seed: u64) -> Result<Instance> {
        Self::check_shape(kind, n, r)?;
        let one = Q::from_integer(1);
        let mut clauses = Vec::with_capacity(m as usize);
        match kind {
            Kind::Uniform => {
                for j in 0..m {
                    let mut pool: Vec<u16> = (0..n as u16).collect();
                    let mut vars = Vec::with_capacity(r);
                    for i in 0..r {
                        let pick = rng::below(rng::draw(seed, j * r as u64 + i as u64), pool.len() as u64);
                        vars.push(pool.remove(pick as usize));
                    }
                    clauses.push(Clause { vars, weight: one });
                }
            }
            Kind::Rpartite => {
                for j in 0..m {
                    let vars: Vec<u16> = (0..r)
                        .map(|i| {
                            rng::below(rng::draw(seed, j * r as u64 + i as u64), n as u64) as u16
                        })
                        .collect();
                    clauses.push(Clause { vars, weight: one });
                }
            }
            Kind::SymSet => {
                let total = Self::universe_size(kind, n, r) as u64;
                for j in 0..m {
                    let rank = rng::below(rng::draw(seed, j), total);
                    clauses.push(Clause {
                        vars: unrank_combination(n, r, rank),
                        weight: one,
                    });
                }
            }
        }
        Ok(Instance {
            kind,
            n,
            r,
            clauses,
        })
    }

    pub fn total_weight(&self) -> Q {
        self.clauses
            .iter()
            .map(|c| c.weight)
            .fold(Q::from_integer(0), |a, b| a + b)
    }

    pub fn scale_weights(&mut self, factor: Q) {
        for c in &mut self.clauses {
            c.weight *= factor;
        }
    }

    /// Length of assignments this instance is evaluated on.
    pub fn assignment_len(&self) -> usize {
        match self.kind {
            Kind::Rpartite => self.n as usize * self.r,
            _ => self.n as usize,
        }
    }

    /// Per-position domain sizes for assignments (part `i` of an r-partite
    /// instance uses the relation's coordinate-`i` domain).
    pub fn assignment_domains(&self, relation: &ValuedRelation) -> Result<Vec<u8>> {
        if relation.arity() != self.r {
            return Err(Error::invalid(format!(
                "relation arity {} does not match instance arity {}",
                relation.arity(),
                self.r
            )));
        }
        match self.kind {
            Kind::Rpartite => {
                let mut sizes = Vec::with_capacity(self.assignment_len());
                for &d in relation.domains() {
                    sizes.extend(std::iter::repeat_n(d, self.n as usize));
                }
                Ok(sizes)
            }
            _ => {
                let d = relation.single_domain().ok_or_else(|| {
                    Error::invalid("this instance kind needs a relation with a shared domain")
                })?;
                Ok(vec![d; self.n as usize])
            }
        }
    }

    /// If the instance is exactly the complete universe with one common
    /// weight, returns that weight.
    pub fn complete_profile(&self) -> Option<Q> {
        let size = Self::universe_size(self.kind, self.n, self.r);
        if self.clauses.is_empty() || self.clauses.len() as u128 != size {
            return None;
        }
        let w = self.clauses[0].weight;
        if self.clauses.iter().any(|c| c.weight != w) {
            return None;
        }
        let mut seen = std::collections::HashSet::with_capacity(self.clauses.len());
        if self.clauses.iter().all(|c| seen.insert(&c.vars)) {
            Some(w)
        } else {
            None
        }
    }

    /// Serializes to the text format (header line, then one clause per
    /// line). Integral weights print bare, others as `p/q`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "kind={} n={} r={}", self.kind.label(), self.n, self.r).unwrap();
        for c in &self.clauses {
            for v in &c.vars {
                write!(out, "{v} ").unwrap();
            }
            if c.weight.is_integer() {
                writeln!(out, "{}", c.weight.numer()).unwrap();
            } else {
                writeln!(out, "{}/{}", c.weight.numer(), c.weight.denom()).unwrap();
            }
        }
        out
    }

    /// Parses the text format, reporting 1-based line numbers on failure.
    pub fn parse(text: &str) -> Result<Instance> {
        let mut lines = text.lines().enumerate();
        let (header_no, header) = lines
            .find(|(_, l)| !skip_line(l))
            .ok_or_else(|| Error::parse(1, "missing header"))?;
        let mut kind = None;
        let mut n = None;
        let mut r = None;
        for tok in header.split_whitespace() {
            if let Some(v) = tok.strip_prefix("kind=") {
                kind = Some(Kind::parse(v).map_err(|e| Error::parse(header_no + 1, e.to_string()))?);
            } else if let Some(v) = tok.strip_prefix("n=") {
                n = Some(parse_num::<u32>(v, header_no + 1)?);
            } else if let Some(v) = tok.strip_prefix("r=") {
                r = Some(parse_num::<usize>(v, header_no + 1)?);
            } else {
                return Err(Error::parse(
                    header_no + 1,
                    format!("unexpected header token {tok:?}"),
                ));
            }
        }
        let (kind, n, r) = match (kind, n, r) {
            (Some(k), Some(n), Some(r)) => (k, n, r),
            _ => {
                return Err(Error::parse(
                    header_no + 1,
                    "header needs kind=, n=, and r=",
                ))
            }
        };
        Self::check_shape(kind, n, r).map_err(|e| Error::parse(header_no + 1, e.to_string()))?;
        let mut clauses = Vec::new();
        for (no, line) in lines {
            if skip_line(line) {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != r + 1 {
                return Err(Error::parse(
                    no + 1,
                    format!("expected {} variables and a weight, got {} tokens", r, toks.len()),
                ));
            }
            let vars: Vec<u16> = toks[..r]
                .iter()
                .map(|t| parse_num::<u16>(t, no + 1))
                .collect::<Result<_>>()?;
            for &v in &vars {
                if v as u32 >= n {
                    return Err(Error::parse(no + 1, format!("variable {v} out of range")));
                }
            }
            match kind {
                Kind::Uniform => {
                    let mut sorted = vars.clone();
                    sorted.sort_unstable();
                    sorted.dedup();
                    if sorted.len() != r {
                        return Err(Error::parse(no + 1, "variables must be distinct"));
                    }
                }
                Kind::SymSet => {
                    if !vars.windows(2).all(|w| w[0] < w[1]) {
                        return Err(Error::parse(no + 1, "set must be strictly increasing"));
                    }
                }
                Kind::Rpartite => {}
            }
            let weight = parse_weight(toks[r], no + 1)?;
            clauses.push(Clause { vars, weight });
        }
        Ok(Instance {
            kind,
            n,
            r,
            clauses,
        })
    }
}

fn skip_line(l: &str) -> bool {
    let t = l.trim();
    t.is_empty() || t.starts_with('#')
}

fn parse_num<T: std::str::FromStr>(s: &str, line: usize) -> Result<T> {
    s.parse::<T>()
        .map_err(|_| Error::parse(line, format!("bad number {s:?}")))
}

fn parse_weight(s: &str, line: usize) -> Result<Q> {
    let q = if let Some((p, d)) = s.split_once('/') {
        let p = parse_num::<i128>(p, line)?;
        let d = parse_num::<i128>(d, line)?;
        if d == 0 {
            return Err(Error::parse(line, "weight denominator is zero"));
        }
        Q::new(p, d)
    } else {
        Q::from_integer(parse_num::<i128>(s, line)?)
    };
    if q < Q::from_integer(0) {
        return Err(Error::parse(line, "weights must be nonnegative"));
    }
    Ok(q)
}

/// The `rank`-th strictly increasing r-subset of `0..n` in lex order.
pub fn unrank_combination(n: u32, r: usize, mut rank: u64) -> Vec<u16> {
    let mut out = Vec::with_capacity(r);
    let mut next = 0u32;
    for slot in 0..r {
        let left = r - slot - 1;
        loop {
            let tail = num::integer::binomial((n - next - 1) as u64, left as u64);
            if rank < tail {
                out.push(next as u16);
                next += 1;
                break;
            }
            rank -= tail;
            next += 1;
        }
    }
    out
}

/// Parses a single-line assignment of space-separated symbols.
pub fn parse_assignment(text: &str, len: usize, sizes: &[u8]) -> Result<Vec<u8>> {
    let line = text
        .lines()
        .find(|l| !skip_line(l))
        .ok_or_else(|| Error::parse(1, "missing assignment line"))?;
    let syms: Vec<u8> = line
        .split_whitespace()
        .map(|t| parse_num::<u8>(t, 1))
        .collect::<Result<_>>()?;
    if syms.len() != len {
        return Err(Error::parse(
            1,
            format!("expected {len} symbols, got {}", syms.len()),
        ));
    }
    for (i, &s) in syms.iter().enumerate() {
        if s >= sizes[i] {
            return Err(Error::parse(1, format!("symbol {s} at position {i} out of range")));
        }
    }
    Ok(syms)
}

pub fn write_assignment(psi: &[u8]) -> String {
    let toks: Vec<String> = psi.iter().map(|s| s.to_string()).collect();
    format!("{}\n", toks.join(" "))
}

/// Number of assignments over the given per-position domain sizes.
pub fn assignment_space(sizes: &[u8]) -> u128 {
    sizes.iter().map(|&d| d as u128).product()
}

/// Calls `f` on every assignment over the per-position sizes, position 0
/// varying fastest.
pub fn for_each_assignment(sizes: &[u8], f: &mut dyn FnMut(&[u8])) {
    let mut psi = vec![0u8; sizes.len()];
    loop {
        f(&psi);
        let mut i = 0;
        loop {
            if i == sizes.len() {
                return;
            }
            psi[i] += 1;
            if psi[i] < sizes[i] {
                break;
            }
            psi[i] = 0;
            i += 1;
        }
    }
}

/// Iterates the slice of the assignment space with little-endian rank in
/// `[lo, hi)`; used to shard exhaustive scans across threads.
pub fn for_each_assignment_in(sizes: &[u8], lo: u128, hi: u128, f: &mut dyn FnMut(u128, &[u8])) {
    let mut psi = vec![0u8; sizes.len()];
    let mut rank = lo;
    // Decode the starting rank little-endian.
    {
        let mut x = lo;
        for (i, &d) in sizes.iter().enumerate() {
            psi[i] = (x % d as u128) as u8;
            x /= d as u128;
        }
    }
    while rank < hi {
        f(rank, &psi);
        rank += 1;
        let mut i = 0;
        while i < sizes.len() {
            psi[i] += 1;
            if psi[i] < sizes[i] {
                break;
            }
            psi[i] = 0;
            i += 1;
        }
    }
}

/// Precomputed evaluator for repeated satisfaction queries against one
/// instance. Clauses with identical variable tuples are merged, then
/// grouped by weight so the exact-rational arithmetic happens once per
/// group instead of once per clause. Complete single-domain instances
/// switch to a closed form over the symmetrized relation.
pub struct Evaluator<'a> {
    relation: &'a ValuedRelation,
    body: Body,
}

enum Body {
    /// Groups of (weight, flat assignment positions per clause).
    Tuple(Vec<(Q, Vec<Vec<usize>>)>),
    /// Symmetrized evaluation per clause set.
    Sym(SymmetricValuedRelation, Vec<(Q, Vec<Vec<usize>>)>),
    /// Complete universe at a single weight: count subsets by histogram.
    Closed(SymmetricValuedRelation, Q, u8),
}

impl<'a> Evaluator<'a> {
    pub fn new(relation: &'a ValuedRelation, inst: &'a Instance) -> Result<Self> {
        if relation.arity() != inst.r {
            return Err(Error::invalid(format!(
                "relation arity {} does not match instance arity {}",
                relation.arity(),
                inst.r
            )));
        }
        // Closed form: complete uniform or symset instance over a shared
        // domain. Satisfaction then depends only on the assignment's
        // symbol histogram.
        if matches!(inst.kind, Kind::Uniform | Kind::SymSet) {
            if let (Some(d), Some(w)) = (relation.single_domain(), inst.complete_profile()) {
                let sym = SymmetricValuedRelation::from_relation(relation)?;
                return Ok(Evaluator {
                    relation,
                    body: Body::Closed(sym, w, d),
                });
            }
        }
        let positions = |c: &Clause| -> Vec<usize> {
            match inst.kind {
                Kind::Rpartite => c
                    .vars
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| i * inst.n as usize + v as usize)
                    .collect(),
                _ => c.vars.iter().map(|&v| v as usize).collect(),
            }
        };
        // Merge duplicate variable tuples, then group by weight.
        let mut merged: HashMap<Vec<u16>, Q> = HashMap::new();
        for c in &inst.clauses {
            *merged.entry(c.vars.clone()).or_insert_with(|| Q::from_integer(0)) += c.weight;
        }
        let mut by_weight: HashMap<Q, Vec<Vec<usize>>> = HashMap::new();
        for (vars, w) in merged {
            if w != Q::from_integer(0) {
                let c = Clause { vars, weight: w };
                by_weight.entry(w).or_default().push(positions(&c));
            }
        }
        let mut groups: Vec<(Q, Vec<Vec<usize>>)> = by_weight.into_iter().collect();
        groups.sort_by_key(|g| g.0);
        for (_, g) in &mut groups {
            g.sort();
        }
        match inst.kind {
            Kind::SymSet => {
                let sym = SymmetricValuedRelation::from_relation(relation)?;
                Ok(Evaluator {
                    relation,
                    body: Body::Sym(sym, groups),
                })
            }
            _ => Ok(Evaluator {
                relation,
                body: Body::Tuple(groups),
            }),
        }
    }

    /// Exact satisfaction value of an assignment.
    pub fn sat(&self, psi: &[u8]) -> Q {
        match &self.body {
            Body::Tuple(groups) => {
                let strides = self.relation.strides();
                let mut total = Q::from_integer(0);
                for (w, pos_list) in groups {
                    let mut acc: u64 = 0;
                    for pos in pos_list {
                        let mut idx = 0usize;
                        for (i, &p) in pos.iter().enumerate() {
                            idx += psi[p] as usize * strides[i];
                        }
                        acc += self.relation.value_at(idx) as u64;
                    }
                    if acc > 0 {
                        total += *w * Q::from_integer(acc as i128);
                    }
                }
                total
            }
            Body::Sym(sym, groups) => {
                let d = sym.dsize();
                let mut total = Q::from_integer(0);
                for (w, pos_list) in groups {
                    let mut acc: u128 = 0;
                    for pos in pos_list {
                        let mut counts = vec![0u32; d as usize];
                        for &p in pos {
                            counts[psi[p] as usize] += 1;
                        }
                        acc += sym.value(&Histogram::new(counts)) as u128;
                    }
                    if acc > 0 {
                        total += *w * Q::from_integer(acc as i128);
                    }
                }
                total
            }
            Body::Closed(sym, w, d) => {
                let g = Histogram::of_tuple(psi, *d);
                let mut acc: u128 = 0;
                for h in sym.support() {
                    acc += sym.value(&h) as u128 * subset_ways(&g, &h);
                }
                *w * Q::from_integer(acc as i128)
            }
        }
    }
}

/// Exact satisfaction value of one assignment (convenience wrapper; build
/// an [`Evaluator`] for repeated queries).
pub fn sat_value(relation: &ValuedRelation, inst: &Instance, psi: &[u8]) -> Result<Q> {
    if psi.len() != inst.assignment_len() {
        return Err(Error::invalid(format!(
            "assignment length {} does not match instance ({})",
            psi.len(),
            inst.assignment_len()
        )));
    }
    Ok(Evaluator::new(relation, inst)?.sat(psi))
}

/// Per-clause relation values under an assignment, in clause order,
/// ignoring weights. Unordered-set clauses report the symmetrized value.
pub fn codeword(relation: &ValuedRelation, inst: &Instance, psi: &[u8]) -> Result<Vec<u64>> {
    if psi.len() != inst.assignment_len() {
        return Err(Error::invalid("assignment length mismatch"));
    }
    match inst.kind {
        Kind::SymSet => {
            let sym = SymmetricValuedRelation::from_relation(relation)?;
            Ok(inst
                .clauses
                .iter()
                .map(|c| {
                    let mut counts = vec![0u32; sym.dsize() as usize];
                    for &v in &c.vars {
                        counts[psi[v as usize] as usize] += 1;
                    }
                    sym.value(&Histogram::new(counts))
                })
                .collect())
        }
        _ => {
            let mut out = Vec::with_capacity(inst.clauses.len());
            let mut t = vec![0u8; inst.r];
            for c in &inst.clauses {
                for (i, &v) in c.vars.iter().enumerate() {
                    let p = match inst.kind {
                        Kind::Rpartite => i * inst.n as usize + v as usize,
                        _ => v as usize,
                    };
                    t[i] = psi[p];
                }
                out.push(relation.value(&t) as u64);
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn complete_sizes_and_orders() {
        let u = Instance::complete(Kind::Uniform, 4, 2).unwrap();
        assert_eq!(u.clauses.len(), 12);
        assert_eq!(u.clauses[0].vars, vec![0, 1]);
        assert_eq!(u.clauses[1].vars, vec![0, 2]);
        assert_eq!(u.clauses[3].vars, vec![1, 0]);

        let p = Instance::complete(Kind::Rpartite, 3, 2).unwrap();
        assert_eq!(p.clauses.len(), 9);
        assert_eq!(p.clauses[0].vars, vec![0, 0]);
        assert_eq!(p.clauses[1].vars, vec![0, 1]);
        assert_eq!(p.clauses[3].vars, vec![1, 0]);

        let s = Instance::complete(Kind::SymSet, 5, 3).unwrap();
        assert_eq!(s.clauses.len(), 10);
        assert_eq!(s.clauses[0].vars, vec![0, 1, 2]);
        assert_eq!(s.clauses[9].vars, vec![2, 3, 4]);
    }

    #[test]
    fn complete_rejects_small_pools() {
        assert!(Instance::complete(Kind::Uniform, 1, 2).is_err());
        assert!(Instance::complete(Kind::SymSet, 2, 3).is_err());
        // r-partite parts can be smaller than the arity.
        assert!(Instance::complete(Kind::Rpartite, 1, 3).is_ok());
    }

    #[test]
    fn random_instances_are_reproducible_and_valid() {
        for kind in [Kind::Uniform, Kind::Rpartite, Kind::SymSet] {
            let a = Instance::random(kind, 9, 3, 40, 7).unwrap();
            let b = Instance::random(kind, 9, 3, 40, 7).unwrap();
            assert_eq!(a, b);
            let c = Instance::random(kind, 9, 3, 40, 8).unwrap();
            assert_ne!(a, c);
            for cl in &a.clauses {
                assert_eq!(cl.vars.len(), 3);
                assert!(cl.vars.iter().all(|&v| v < 9));
                match kind {
                    Kind::Uniform => {
                        let mut s = cl.vars.clone();
                        s.sort_unstable();
                        s.dedup();
                        assert_eq!(s.len(), 3);
                    }
                    Kind::SymSet => assert!(cl.vars.windows(2).all(|w| w[0] < w[1])),
                    Kind::Rpartite => {}
                }
            }
        }
    }

    #[test]
    fn unrank_combination_is_lex_bijective() {
        let total = Instance::universe_size(Kind::SymSet, 6, 3) as u64;
        let all: Vec<Vec<u16>> = (0..total).map(|i| unrank_combination(6, 3, i)).collect();
        let complete = Instance::complete(Kind::SymSet, 6, 3).unwrap();
        let expect: Vec<Vec<u16>> = complete.clauses.iter().map(|c| c.vars.clone()).collect();
        assert_eq!(all, expect);
    }

    #[test]
    fn complete_profile_detection() {
        let c = Instance::complete(Kind::Uniform, 5, 2).unwrap();
        assert_eq!(c.complete_profile(), Some(Q::from_integer(1)));
        let mut scaled = c.clone();
        scaled.scale_weights(Q::new(3, 7));
        assert_eq!(scaled.complete_profile(), Some(Q::new(3, 7)));
        let mut skewed = c.clone();
        skewed.clauses[0].weight = Q::from_integer(2);
        assert_eq!(skewed.complete_profile(), None);
        let r = Instance::random(Kind::Uniform, 5, 2, 20, 1).unwrap();
        assert_eq!(r.complete_profile(), None);
    }

    #[test]
    fn cut_satisfaction_is_a_closed_form_in_the_class_sizes() {
        // Over the complete ordered instance, the cut relation counts
        // ordered pairs with distinct values: 2 * z * (n - z).
        let rel = fixtures::cut();
        let inst = Instance::complete(Kind::Uniform, 6, 2).unwrap();
        for z in 0..=6u32 {
            let mut psi = vec![1u8; 6];
            for p in psi.iter_mut().take(z as usize) {
                *p = 0;
            }
            let sat = sat_value(&rel, &inst, &psi).unwrap();
            assert_eq!(sat, Q::from_integer((2 * z * (6 - z)) as i128));
        }
    }

    #[test]
    fn closed_form_matches_group_evaluation() {
        let rel = fixtures::r2_nonmonotone();
        let complete = Instance::complete(Kind::Uniform, 7, 4).unwrap();
        // Forcing the grouped path: a copy with one clause split in two.
        let mut split = complete.clone();
        let c0 = split.clauses[0].clone();
        split.clauses[0].weight = Q::new(1, 3);
        split.clauses.push(Clause {
            vars: c0.vars,
            weight: Q::new(2, 3),
        });
        let fast = Evaluator::new(&rel, &complete).unwrap();
        assert!(matches!(fast.body, Body::Closed(..)));
        let slow = Evaluator::new(&rel, &split).unwrap();
        let mut psi = vec![0u8; 7];
        let sizes = vec![3u8; 7];
        let mut count = 0;
        for_each_assignment(&sizes, &mut |p| {
            if count % 37 == 0 {
                psi.copy_from_slice(p);
                assert_eq!(fast.sat(&psi), slow.sat(&psi));
            }
            count += 1;
        });
    }

    #[test]
    fn rpartite_evaluation_uses_part_major_layout() {
        let rel = ValuedRelation::from_bitstrings(&["000", "001"]).unwrap();
        let inst = Instance::complete(Kind::Rpartite, 2, 3).unwrap();
        // All variables 0: every clause evaluates the all-zero tuple.
        let sat = sat_value(&rel, &inst, &[0, 0, 0, 0, 0, 0]).unwrap();
        assert_eq!(sat, Q::from_integer(8));
        // Third part all ones: tuples end in 1, still satisfied.
        let sat = sat_value(&rel, &inst, &[0, 0, 0, 0, 1, 1]).unwrap();
        assert_eq!(sat, Q::from_integer(8));
        // First part all ones: nothing satisfied.
        let sat = sat_value(&rel, &inst, &[1, 1, 0, 0, 0, 0]).unwrap();
        assert_eq!(sat, Q::from_integer(0));
    }

    #[test]
    fn symset_evaluation_matches_ordered_evaluation() {
        // Summing the relation over all orderings of each set equals the
        // symmetrized value on the set, so complete instances of the two
        // kinds agree on every assignment. The set instance gets one
        // clause split in two so it takes the per-clause path rather than
        // the same closed form as the ordered one.
        let rel = fixtures::quaternary_triple();
        let ordered = Instance::complete(Kind::Uniform, 6, 4).unwrap();
        let mut sets = Instance::complete(Kind::SymSet, 6, 4).unwrap();
        let c0 = sets.clauses[0].clone();
        sets.clauses[0].weight = Q::new(1, 2);
        sets.clauses.push(Clause {
            vars: c0.vars,
            weight: Q::new(1, 2),
        });
        let eo = Evaluator::new(&rel, &ordered).unwrap();
        let es = Evaluator::new(&rel, &sets).unwrap();
        assert!(matches!(eo.body, Body::Closed(..)));
        assert!(matches!(es.body, Body::Sym(..)));
        let mut s = crate::rng::Stream::new(5);
        for _ in 0..50 {
            let psi: Vec<u8> = (0..6).map(|_| s.next_below(4) as u8).collect();
            assert_eq!(eo.sat(&psi), es.sat(&psi));
        }
    }

    #[test]
    fn codeword_respects_clause_order_and_weights_do_not_matter() {
        let rel = fixtures::cut();
        let mut inst = Instance::complete(Kind::Uniform, 3, 2).unwrap();
        inst.clauses[2].weight = Q::new(5, 2);
        let cw = codeword(&rel, &inst, &[0, 1, 1]).unwrap();
        // Clause order: 01 02 10 12 20 21.
        assert_eq!(cw, vec![1, 1, 1, 0, 1, 0]);
    }

    #[test]
    fn assignment_enumeration_is_little_endian() {
        let mut seen = Vec::new();
        for_each_assignment(&[2, 2], &mut |p| seen.push(p.to_vec()));
        assert_eq!(
            seen,
            vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]
        );
        assert_eq!(assignment_space(&[2, 3, 2]), 12);
    }

    #[test]
    fn sharded_enumeration_matches_full_enumeration() {
        let sizes = vec![3u8, 2, 2];
        let mut full = Vec::new();
        for_each_assignment(&sizes, &mut |p| full.push(p.to_vec()));
        let mut pieced = Vec::new();
        for (lo, hi) in [(0u128, 5u128), (5, 7), (7, 12)] {
            for_each_assignment_in(&sizes, lo, hi, &mut |rank, p| {
                assert_eq!(rank as usize, pieced.len());
                pieced.push(p.to_vec());
            });
        }
        assert_eq!(full, pieced);
    }

    #[test]
    fn text_round_trip_and_parse_errors() {
        let inst = Instance::random(Kind::SymSet, 8, 3, 5, 3).unwrap();
        let mut scaled = inst.clone();
        scaled.scale_weights(Q::new(7, 3));
        let text = scaled.to_text();
        assert_eq!(Instance::parse(&text).unwrap(), scaled);

        let bad = "kind=uniform n=4 r=2\n0 1 1\n0 0 1\n";
        match Instance::parse(bad) {
            Err(crate::error::Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected a parse error, got {other:?}"),
        }
        let bad = "kind=symset n=4 r=2\n1 0 1\n";
        assert!(Instance::parse(bad).is_err());
        let bad = "kind=uniform n=4\n";
        assert!(Instance::parse(bad).is_err());
        let bad = "kind=uniform n=4 r=2\n0 1 -3\n";
        assert!(Instance::parse(bad).is_err());
    }

    #[test]
    fn assignment_round_trip() {
        let psi = vec![0u8, 2, 1, 1];
        let text = write_assignment(&psi);
        assert_eq!(parse_assignment(&text, 4, &[3, 3, 3, 3]).unwrap(), psi);
        assert!(parse_assignment(&text, 4, &[3, 2, 3, 3]).is_err());
        assert!(parse_assignment("0 1\n", 3, &[2, 2, 2]).is_err());
    }
}
