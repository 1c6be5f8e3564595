//! Valued relations over small finite domains and their tuple-level
//! structure: restriction witnesses, distance to the support, irrelevant
//! symbol pairs, decomposability, and the sandwich construction.
//!
//! A valued relation assigns a nonnegative integer to every tuple of a
//! product domain `D_1 x ... x D_r`. Arity is at most 8 and each domain has
//! at most 6 symbols, so dense tables and exhaustive walks over restriction
//! choices stay cheap.

use crate::error::{Error, Result};
use std::collections::HashMap;
use std::fmt;

/// Hard caps on the dense-table representation.
pub const MAX_ARITY: usize = 8;
pub const MAX_DOMAIN: u8 = 6;

/// A function from `D_1 x ... x D_r` to the nonnegative integers, stored as
/// a dense table. Tuple `(t_0, ..., t_{r-1})` lives at the index that makes
/// ascending index order equal lexicographic tuple order.
#[derive(Clone, PartialEq, Eq)]
pub struct ValuedRelation {
    domains: Vec<u8>,
    strides: Vec<usize>,
    table: Vec<u32>,
    max_value: u32,
}

impl ValuedRelation {
    /// Builds a relation from its domain sizes and full value table, indexed
    /// lexicographically. Rejects out-of-range arity, domain sizes, or table
    /// length.
    pub fn new(domains: Vec<u8>, table: Vec<u32>) -> Result<Self> {
        let r = domains.len();
        if r == 0 || r > MAX_ARITY {
            return Err(Error::invalid(format!(
                "arity must be between 1 and {MAX_ARITY}, got {r}"
            )));
        }
        for (i, &d) in domains.iter().enumerate() {
            if d == 0 || d > MAX_DOMAIN {
                return Err(Error::invalid(format!(
                    "domain {i} has size {d}, must be between 1 and {MAX_DOMAIN}"
                )));
            }
        }
        let size: usize = domains.iter().map(|&d| d as usize).product();
        if table.len() != size {
            return Err(Error::invalid(format!(
                "table has {} entries, domain product needs {size}",
                table.len()
            )));
        }
        let mut strides = vec![1usize; r];
        for i in (0..r.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * domains[i + 1] as usize;
        }
        let max_value = table.iter().copied().max().unwrap_or(0);
        Ok(ValuedRelation {
            domains,
            strides,
            table,
            max_value,
        })
    }

    /// Builds a 0/1 relation from the list of satisfying tuples.
    pub fn from_support(domains: Vec<u8>, support: &[Vec<u8>]) -> Result<Self> {
        let entries: Vec<(Vec<u8>, u32)> = support.iter().map(|t| (t.clone(), 1)).collect();
        Self::from_entries(domains, &entries)
    }

    /// Builds a relation from (tuple, value) pairs; unlisted tuples get 0.
    pub fn from_entries(domains: Vec<u8>, entries: &[(Vec<u8>, u32)]) -> Result<Self> {
        let size: usize = domains.iter().map(|&d| d as usize).product();
        let probe = Self::new(domains.clone(), vec![0; size])?;
        let mut table = vec![0u32; size];
        for (t, v) in entries {
            let idx = probe.checked_index(t)?;
            table[idx] = *v;
        }
        Self::new(domains, table)
    }

    /// Builds a Boolean 0/1 relation from bitstrings like `"011"`. All
    /// strings must share one length, which becomes the arity.
    pub fn from_bitstrings(support: &[&str]) -> Result<Self> {
        let r = support
            .first()
            .map(|s| s.len())
            .ok_or_else(|| Error::invalid("support list is empty"))?;
        let mut tuples = Vec::with_capacity(support.len());
        for s in support {
            if s.len() != r {
                return Err(Error::invalid(format!(
                    "bitstring {s:?} has length {}, expected {r}",
                    s.len()
                )));
            }
            let t: Vec<u8> = s
                .bytes()
                .map(|b| match b {
                    b'0' => Ok(0u8),
                    b'1' => Ok(1u8),
                    _ => Err(Error::invalid(format!("bitstring {s:?} has a non-binary digit"))),
                })
                .collect::<Result<_>>()?;
            tuples.push(t);
        }
        Self::from_support(vec![2; r], &tuples)
    }

    /// Serializes to the text format: a header `r=<arity> domains=<d1,...>`
    /// followed by one line per nonzero entry, symbols space-separated. The
    /// value column is omitted when every nonzero value is 1.
    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let doms: Vec<String> = self.domains.iter().map(|d| d.to_string()).collect();
        let mut out = String::new();
        writeln!(out, "r={} domains={}", self.arity(), doms.join(",")).unwrap();
        let plain = self.max_value <= 1;
        for idx in 0..self.table.len() {
            let v = self.table[idx];
            if v == 0 {
                continue;
            }
            let t = self.tuple_at(idx);
            let syms: Vec<String> = t.iter().map(|s| s.to_string()).collect();
            if plain {
                writeln!(out, "{}", syms.join(" ")).unwrap();
            } else {
                writeln!(out, "{} {v}", syms.join(" ")).unwrap();
            }
        }
        out
    }

    /// Parses the text format, reporting 1-based line numbers on failure.
    /// Entry lines carry `r` symbols plus an optional value (default 1);
    /// listing a tuple twice is an error.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (header_no, header) = lines
            .find(|(_, l)| !skip_line(l))
            .ok_or_else(|| Error::parse(1, "missing header"))?;
        let mut arity = None;
        let mut domains: Option<Vec<u8>> = None;
        for tok in header.split_whitespace() {
            if let Some(v) = tok.strip_prefix("r=") {
                arity = Some(v.parse::<usize>().map_err(|_| {
                    Error::parse(header_no + 1, format!("bad arity {v:?}"))
                })?);
            } else if let Some(v) = tok.strip_prefix("domains=") {
                let ds: Vec<u8> = v
                    .split(',')
                    .map(|p| {
                        p.parse::<u8>().map_err(|_| {
                            Error::parse(header_no + 1, format!("bad domain size {p:?}"))
                        })
                    })
                    .collect::<Result<_>>()?;
                domains = Some(ds);
            } else {
                return Err(Error::parse(
                    header_no + 1,
                    format!("unexpected header token {tok:?}"),
                ));
            }
        }
        let (r, domains) = match (arity, domains) {
            (Some(r), Some(d)) => (r, d),
            _ => {
                return Err(Error::parse(
                    header_no + 1,
                    "header needs r= and domains=",
                ))
            }
        };
        if domains.len() != r {
            return Err(Error::parse(
                header_no + 1,
                format!("r={r} but domains= lists {} sizes", domains.len()),
            ));
        }
        let size: usize = domains.iter().map(|&d| d.max(1) as usize).product();
        let probe = Self::new(domains.clone(), vec![0; size])
            .map_err(|e| Error::parse(header_no + 1, e.to_string()))?;
        let mut table = vec![0u32; size];
        for (no, line) in lines {
            if skip_line(line) {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != r && toks.len() != r + 1 {
                return Err(Error::parse(
                    no + 1,
                    format!("expected {r} symbols and an optional value, got {} tokens", toks.len()),
                ));
            }
            let t: Vec<u8> = toks[..r]
                .iter()
                .map(|s| {
                    s.parse::<u8>()
                        .map_err(|_| Error::parse(no + 1, format!("bad symbol {s:?}")))
                })
                .collect::<Result<_>>()?;
            let idx = probe
                .checked_index(&t)
                .map_err(|e| Error::parse(no + 1, e.to_string()))?;
            let v = if toks.len() == r + 1 {
                toks[r]
                    .parse::<u32>()
                    .map_err(|_| Error::parse(no + 1, format!("bad value {:?}", toks[r])))?
            } else {
                1
            };
            if v == 0 {
                return Err(Error::parse(no + 1, "entry lines must carry nonzero values"));
            }
            if table[idx] != 0 {
                return Err(Error::parse(
                    no + 1,
                    format!("tuple {} listed twice", tuple_string(&t)),
                ));
            }
            table[idx] = v;
        }
        Self::new(domains, table)
    }

    pub fn arity(&self) -> usize {
        self.domains.len()
    }

    pub fn domains(&self) -> &[u8] {
        &self.domains
    }

    /// Domain size when all coordinates share one domain, else `None`.
    pub fn single_domain(&self) -> Option<u8> {
        let d = self.domains[0];
        self.domains.iter().all(|&x| x == d).then_some(d)
    }

    pub fn is_boolean(&self) -> bool {
        self.single_domain() == Some(2)
    }

    /// Number of tuples in the full product domain.
    pub fn table_size(&self) -> usize {
        self.table.len()
    }

    pub fn max_value(&self) -> u32 {
        self.max_value
    }

    pub fn value(&self, t: &[u8]) -> u32 {
        self.table[self.index_of(t)]
    }

    pub fn value_at(&self, idx: usize) -> u32 {
        self.table[idx]
    }

    /// Per-coordinate index multipliers of the dense table.
    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    /// Table index of a tuple; assumes valid symbols.
    pub fn index_of(&self, t: &[u8]) -> usize {
        debug_assert_eq!(t.len(), self.arity());
        t.iter()
            .zip(&self.strides)
            .map(|(&s, &st)| s as usize * st)
            .sum()
    }

    fn checked_index(&self, t: &[u8]) -> Result<usize> {
        if t.len() != self.arity() {
            return Err(Error::invalid(format!(
                "tuple {} has arity {}, relation has arity {}",
                tuple_string(t),
                t.len(),
                self.arity()
            )));
        }
        for (i, &s) in t.iter().enumerate() {
            if s >= self.domains[i] {
                return Err(Error::invalid(format!(
                    "symbol {s} at position {i} exceeds domain size {}",
                    self.domains[i]
                )));
            }
        }
        Ok(self.index_of(t))
    }

    /// Decodes a table index back into its tuple.
    pub fn tuple_at(&self, mut idx: usize) -> Vec<u8> {
        let mut t = vec![0u8; self.arity()];
        for (slot, &stride) in t.iter_mut().zip(&self.strides) {
            *slot = (idx / stride) as u8;
            idx %= stride;
        }
        t
    }

    /// Tuples with nonzero value, in lexicographic order.
    pub fn support(&self) -> Vec<Vec<u8>> {
        self.table
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > 0)
            .map(|(i, _)| self.tuple_at(i))
            .collect()
    }

    pub fn support_size(&self) -> usize {
        self.table.iter().filter(|&&v| v > 0).count()
    }

    /// True when every tuple gets the same nonzero value. Such a relation
    /// makes every assignment score identically, so a single constraint
    /// carrying the total weight is already an exact sparsifier.
    pub fn is_constant_nonzero(&self) -> bool {
        self.max_value > 0 && self.table.iter().all(|&v| v == self.max_value)
    }

    /// Applies per-coordinate symbol permutations. `perms[i]` maps old
    /// symbol `s` to `perms[i][s]`.
    pub fn relabel_symbols(&self, perms: &[Vec<u8>]) -> Result<Self> {
        if perms.len() != self.arity() {
            return Err(Error::invalid("one permutation per coordinate required"));
        }
        let mut table = vec![0u32; self.table.len()];
        for idx in 0..self.table.len() {
            let t = self.tuple_at(idx);
            let mut u = vec![0u8; t.len()];
            for i in 0..t.len() {
                u[i] = perms[i][t[i] as usize];
            }
            table[self.checked_index(&u)?] = self.table[idx];
        }
        Self::new(self.domains.clone(), table)
    }

    /// Reorders coordinates: new coordinate `i` is old coordinate `perm[i]`.
    pub fn permute_coords(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.arity() {
            return Err(Error::invalid("permutation length must equal arity"));
        }
        let domains: Vec<u8> = perm.iter().map(|&j| self.domains[j]).collect();
        let probe = Self::new(domains.clone(), vec![0; self.table.len()])?;
        let mut table = vec![0u32; self.table.len()];
        for idx in 0..self.table.len() {
            let t = self.tuple_at(idx);
            let u: Vec<u8> = perm.iter().map(|&j| t[j]).collect();
            table[probe.index_of(&u)] = self.table[idx];
        }
        Self::new(domains, table)
    }

    /// Hamming distance from `t` to the nearest support tuple.
    pub fn distance_to_support(&self, t: &[u8]) -> Result<usize> {
        self.checked_index(t)?;
        let mut best = None;
        for idx in 0..self.table.len() {
            if self.table[idx] > 0 {
                let d = hamming(&self.tuple_at(idx), t);
                best = Some(best.map_or(d, |b: usize| b.min(d)));
            }
        }
        best.ok_or_else(|| Error::invalid("relation has empty support"))
    }

    /// Hamming distance from every tuple to the support, computed by a
    /// multi-source breadth-first search over the single-substitution graph.
    pub fn distance_map(&self) -> Result<Vec<u8>> {
        const UNSEEN: u8 = u8::MAX;
        let mut dist = vec![UNSEEN; self.table.len()];
        let mut frontier: Vec<usize> = (0..self.table.len())
            .filter(|&i| self.table[i] > 0)
            .collect();
        if frontier.is_empty() {
            return Err(Error::invalid("relation has empty support"));
        }
        for &i in &frontier {
            dist[i] = 0;
        }
        let mut level = 0u8;
        while !frontier.is_empty() {
            level += 1;
            let mut next = Vec::new();
            for &idx in &frontier {
                for i in 0..self.arity() {
                    let here = (idx / self.strides[i]) % self.domains[i] as usize;
                    let base = idx - here * self.strides[i];
                    for s in 0..self.domains[i] as usize {
                        let nb = base + s * self.strides[i];
                        if dist[nb] == UNSEEN {
                            dist[nb] = level;
                            next.push(nb);
                        }
                    }
                }
            }
            frontier = next;
        }
        Ok(dist)
    }
}

impl fmt::Debug for ValuedRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ValuedRelation(domains={:?}, support=[", self.domains)?;
        for (i, t) in self.support().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:{}", tuple_string(t), self.value(t))?;
        }
        write!(f, "])")
    }
}

fn skip_line(l: &str) -> bool {
    let t = l.trim();
    t.is_empty() || t.starts_with('#')
}

/// Renders a tuple as contiguous digits, e.g. `0022`.
pub fn tuple_string(t: &[u8]) -> String {
    t.iter().map(|&s| char::from(b'0' + s)).collect()
}

/// Hamming distance between equal-length tuples.
pub fn hamming(a: &[u8], b: &[u8]) -> usize {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// A restriction of a relation to a product of small sets, one per
/// coordinate, together with the distinguished coordinates that control
/// membership in the support.
///
/// For a plain AND witness the restriction leaves exactly one support tuple
/// alive and every two-element set is distinguished. For a generalized
/// witness a coordinate with a two-element set may instead be free: both of
/// its symbols appear among surviving support tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictionWitness {
    /// Restriction sets, one per coordinate, each of size 1 or 2, sorted.
    pub sets: Vec<Vec<u8>>,
    /// Coordinates whose two-element set has exactly one symbol surviving.
    pub distinguished: Vec<usize>,
    /// The unique surviving support tuple, when there is exactly one.
    pub survivor: Option<Vec<u8>>,
    /// Whether all surviving tuples carry the same value.
    pub uniform: bool,
}

impl RestrictionWitness {
    /// Re-derives the surviving set from `relation` and checks every stored
    /// field against it. Used by tests and debug assertions.
    pub fn check(&self, relation: &ValuedRelation) -> Result<()> {
        if self.sets.len() != relation.arity() {
            return Err(Error::invalid("witness arity mismatch"));
        }
        let mut survivors = Vec::new();
        for_each_product(&self.sets, &mut |t| {
            if relation.value(t) > 0 {
                survivors.push(t.to_vec());
            }
        });
        if survivors.is_empty() {
            return Err(Error::invalid("restriction kills the whole support"));
        }
        for (i, set) in self.sets.iter().enumerate() {
            let alive: Vec<u8> = set
                .iter()
                .copied()
                .filter(|&s| survivors.iter().any(|t| t[i] == s))
                .collect();
            let is_distinguished = self.distinguished.contains(&i);
            if is_distinguished && (set.len() != 2 || alive.len() != 1) {
                return Err(Error::invalid(format!(
                    "coordinate {i} marked distinguished but not pinned by the support"
                )));
            }
            if !is_distinguished && set.len() == 2 && alive.len() == 1 {
                return Err(Error::invalid(format!(
                    "coordinate {i} is pinned by the support but not marked distinguished"
                )));
            }
        }
        match &self.survivor {
            Some(t) if survivors.len() == 1 && &survivors[0] == t => {}
            None if survivors.len() > 1 => {}
            _ => return Err(Error::invalid("survivor field disagrees with the restriction")),
        }
        let uniform = {
            let first = relation.value(&survivors[0]);
            survivors.iter().all(|t| relation.value(t) == first)
        };
        if uniform != self.uniform {
            return Err(Error::invalid("uniformity flag disagrees with the restriction"));
        }
        Ok(())
    }
}

impl fmt::Display for RestrictionWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, set) in self.sets.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            let syms: Vec<String> = set.iter().map(|s| s.to_string()).collect();
            write!(f, "E{}={{{}}}", i, syms.join(","))?;
        }
        let s: Vec<String> = self.distinguished.iter().map(|i| i.to_string()).collect();
        write!(f, " S={{{}}}", s.join(","))?;
        if let Some(t) = &self.survivor {
            write!(f, " survivor={}", tuple_string(t))?;
        }
        write!(f, " uniform={}", self.uniform)
    }
}

/// Calls `f` on every tuple of the product of the given per-coordinate
/// symbol lists, in lexicographic order.
fn for_each_product(sets: &[Vec<u8>], f: &mut dyn FnMut(&[u8])) {
    let r = sets.len();
    let mut pick = vec![0usize; r];
    let mut t: Vec<u8> = sets.iter().map(|s| s[0]).collect();
    loop {
        f(&t);
        let mut i = r;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if pick[i] + 1 < sets[i].len() {
                pick[i] += 1;
                t[i] = sets[i][pick[i]];
                break;
            }
            pick[i] = 0;
            t[i] = sets[i][0];
        }
    }
}

/// Best isolating box found so far: its pair count, the per-coordinate
/// symbol sets, and the support tuple that survives inside it.
type BestBox = Option<(usize, Vec<Vec<u8>>, Vec<u8>)>;

impl ValuedRelation {
    /// Largest `k` such that some restriction with exactly `k` two-element
    /// sets (and singletons elsewhere) leaves exactly one support tuple
    /// alive, together with a witness realizing it.
    ///
    /// The search is exhaustive over restriction-set choices: every box
    /// isolating one tuple must contain a support tuple `a` with every set
    /// containing `a`'s symbol, so for each support tuple in lex order a
    /// depth-first search picks, per coordinate, a pair around that symbol
    /// (partners ascending) or the singleton, and keeps the first witness
    /// that strictly raises the pair count.
    pub fn max_and_arity(&self) -> Result<(usize, RestrictionWitness)> {
        let supp = self.support();
        if supp.is_empty() {
            return Err(Error::invalid("relation has empty support"));
        }
        let r = self.arity();
        let mut best: BestBox = None;
        for a in &supp {
            let others: Vec<&Vec<u8>> = supp.iter().filter(|b| *b != a).collect();
            let alive: Vec<usize> = (0..others.len()).collect();
            let mut sets: Vec<Vec<u8>> = Vec::with_capacity(r);
            self.isolate_dfs(a, &others, alive, &mut sets, 0, &mut best);
        }
        let (_, sets, survivor) = best.expect("the all-singleton box always isolates");
        let distinguished = (0..r).filter(|&i| sets[i].len() == 2).collect();
        let witness = RestrictionWitness {
            sets,
            distinguished,
            survivor: Some(survivor),
            uniform: true,
        };
        debug_assert!(witness.check(self).is_ok());
        Ok((witness.distinguished.len(), witness))
    }

    /// Extends the partial box `sets` (coordinates `0..sets.len()` chosen)
    /// around support tuple `a`; `alive` indexes the other support tuples
    /// still compatible with the chosen sets.
    fn isolate_dfs(
        &self,
        a: &[u8],
        others: &[&Vec<u8>],
        alive: Vec<usize>,
        sets: &mut Vec<Vec<u8>>,
        pairs: usize,
        best: &mut BestBox,
    ) {
        let r = self.arity();
        let i = sets.len();
        // Upper bound on reachable pairs; only strict improvements matter.
        let potential =
            pairs + (i..r).filter(|&j| self.domains[j] >= 2).count();
        if let Some((b, _, _)) = best {
            if potential <= *b {
                return;
            }
        }
        if alive.is_empty() {
            // Nothing left to exclude: widen every remaining coordinate.
            let mut full = sets.clone();
            for (&aj, &dj) in a[i..].iter().zip(&self.domains[i..]) {
                if dj >= 2 {
                    let partner = if aj == 0 { 1 } else { 0 };
                    let mut pair = vec![aj, partner];
                    pair.sort_unstable();
                    full.push(pair);
                } else {
                    full.push(vec![aj]);
                }
            }
            *best = Some((potential, full, a.to_vec()));
            return;
        }
        if i == r {
            return; // survivors remain; not an isolation
        }
        for partner in 0..self.domains[i] {
            if partner == a[i] {
                continue;
            }
            let mut pair = vec![a[i], partner];
            pair.sort_unstable();
            let kept: Vec<usize> = alive
                .iter()
                .copied()
                .filter(|&b| others[b][i] == a[i] || others[b][i] == partner)
                .collect();
            sets.push(pair);
            self.isolate_dfs(a, others, kept, sets, pairs + 1, best);
            sets.pop();
        }
        let kept: Vec<usize> = alive
            .iter()
            .copied()
            .filter(|&b| others[b][i] == a[i])
            .collect();
        sets.push(vec![a[i]]);
        self.isolate_dfs(a, others, kept, sets, pairs, best);
        sets.pop();
    }

    /// Hamming distance from `t` to the support, paired with whether `t`
    /// is extreme, i.e. at distance exactly `c`. The distance never
    /// exceeds `c`: the disagreement box around a nearest support tuple
    /// isolates it.
    pub fn distance_and_extremality(&self, t: &[u8]) -> Result<(usize, bool)> {
        let d = self.distance_to_support(t)?;
        let (c, _) = self.max_and_arity()?;
        assert!(d <= c, "distance {d} exceeds the restriction arity {c}");
        Ok((d, d == c))
    }

    /// Exponent governing Boolean 0/1 relations: the larger of the minimum
    /// support weight and arity minus the maximum support weight.
    pub fn boolean_uniform_exponent(&self) -> Result<usize> {
        if !self.is_boolean() {
            return Err(Error::invalid("relation is not Boolean"));
        }
        let supp = self.support();
        if supp.is_empty() {
            return Err(Error::invalid("relation has empty support"));
        }
        let weights: Vec<usize> = supp
            .iter()
            .map(|t| t.iter().filter(|&&s| s == 1).count())
            .collect();
        let w_min = *weights.iter().min().unwrap();
        let w_max = *weights.iter().max().unwrap();
        Ok(w_min.max(self.arity() - w_max))
    }

    /// All restrictions with per-coordinate sets of size at most 2 whose
    /// surviving support is a nonempty product set with exactly `k` pinned
    /// two-element coordinates. Shrinking larger restriction sets never
    /// loses a witness, so this enumeration is exhaustive.
    pub fn generalized_ands(&self, k: usize) -> Vec<RestrictionWitness> {
        let mut choices: Vec<Vec<Vec<u8>>> = Vec::with_capacity(self.arity());
        for &d in &self.domains {
            let mut c: Vec<Vec<u8>> = (0..d).map(|s| vec![s]).collect();
            for a in 0..d {
                for b in a + 1..d {
                    c.push(vec![a, b]);
                }
            }
            choices.push(c);
        }
        let mut out = Vec::new();
        let mut pick = vec![0usize; self.arity()];
        loop {
            let sets: Vec<Vec<u8>> = pick
                .iter()
                .enumerate()
                .map(|(i, &p)| choices[i][p].clone())
                .collect();
            if let Some(w) = self.generalized_witness(&sets, k) {
                out.push(w);
            }
            let mut i = self.arity();
            let done = loop {
                if i == 0 {
                    break true;
                }
                i -= 1;
                if pick[i] + 1 < choices[i].len() {
                    pick[i] += 1;
                    break false;
                }
                pick[i] = 0;
            };
            if done {
                break;
            }
        }
        out
    }

    /// Checks one restriction-set choice: the surviving support must be a
    /// nonempty product set, and the pinned two-element coordinates must
    /// number exactly `k`.
    fn generalized_witness(&self, sets: &[Vec<u8>], k: usize) -> Option<RestrictionWitness> {
        let mut survivors = Vec::new();
        for_each_product(sets, &mut |t| {
            if self.value(t) > 0 {
                survivors.push(t.to_vec());
            }
        });
        if survivors.is_empty() {
            return None;
        }
        let mut alive_count = 1usize;
        let mut distinguished = Vec::new();
        for (i, set) in sets.iter().enumerate() {
            let alive: Vec<u8> = set
                .iter()
                .copied()
                .filter(|&s| survivors.iter().any(|t| t[i] == s))
                .collect();
            alive_count *= alive.len();
            if set.len() == 2 && alive.len() == 1 {
                distinguished.push(i);
            }
        }
        // Product set exactly when the survivor count matches the product
        // of per-coordinate survivor counts.
        if survivors.len() != alive_count || distinguished.len() != k {
            return None;
        }
        let first = self.value(&survivors[0]);
        let uniform = survivors.iter().all(|t| self.value(t) == first);
        let survivor = (survivors.len() == 1).then(|| survivors[0].clone());
        Some(RestrictionWitness {
            sets: sets.to_vec(),
            distinguished,
            survivor,
            uniform,
        })
    }

    /// Maximum AND arity `c` and its uniformity-adjusted companion: `c`
    /// when every generalized witness at level `c` is uniform, else `c + 1`.
    pub fn hat_c(&self) -> Result<(usize, usize)> {
        let (c, _) = self.max_and_arity()?;
        let witnesses = self.generalized_ands(c);
        debug_assert!(!witnesses.is_empty(), "level-c witnesses always exist");
        let bump = witnesses.iter().any(|w| !w.uniform);
        Ok((c, if bump { c + 1 } else { c }))
    }
}

/// Which symbols can be forgotten around an extreme tuple: the support
/// tuples nearest to `t`, the per-coordinate symbol pairs that none of them
/// uses, and the relabeling that would move `t` to the all-zero tuple.
#[derive(Clone, Debug)]
pub struct IrrelevanceStructure {
    /// The extreme tuple the structure is relative to.
    pub t: Vec<u8>,
    /// Its distance to the support, equal to the restriction arity.
    pub c: usize,
    /// Support tuples at distance exactly `c` from `t`, in lex order.
    pub closest_support: Vec<Vec<u8>>,
    /// Pairs `(i, d)` such that no closest support tuple uses symbol `d` at
    /// coordinate `i`. Always contains `(i, t_i)` for every `i`.
    pub pairs: Vec<(usize, u8)>,
    /// Per-coordinate permutations sending `t_i` to 0 (a transposition).
    pub relabel: Vec<Vec<u8>>,
}

impl IrrelevanceStructure {
    pub fn is_irrelevant(&self, i: usize, d: u8) -> bool {
        self.pairs.binary_search(&(i, d)).is_ok()
    }

    /// Boolean view: coordinates where flipping away from `t_i` is
    /// irrelevant (meaningful for two-symbol domains).
    pub fn irrelevant_coords(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, &ti) in self.t.iter().enumerate() {
            let other = 1 - ti;
            if self.is_irrelevant(i, other) {
                out.push(i);
            }
        }
        out
    }
}

impl ValuedRelation {
    /// Computes the irrelevance structure around `t`, which must be
    /// extreme: at distance from the support equal to the restriction
    /// arity.
    pub fn irrelevance_structure(&self, t: &[u8]) -> Result<IrrelevanceStructure> {
        let (c, extreme) = self.distance_and_extremality(t)?;
        if !extreme {
            return Err(Error::invalid(format!(
                "tuple {} is at distance {c} and not extreme",
                tuple_string(t)
            )));
        }
        let closest_support: Vec<Vec<u8>> = self
            .support()
            .into_iter()
            .filter(|s| hamming(s, t) == c)
            .collect();
        let mut pairs = Vec::new();
        for i in 0..self.arity() {
            for d in 0..self.domains[i] {
                if d == t[i] || closest_support.iter().all(|s| s[i] != d) {
                    pairs.push((i, d));
                }
            }
        }
        let relabel: Vec<Vec<u8>> = (0..self.arity())
            .map(|i| {
                let mut p: Vec<u8> = (0..self.domains[i]).collect();
                p.swap(0, t[i] as usize);
                p
            })
            .collect();
        let structure = IrrelevanceStructure {
            t: t.to_vec(),
            c,
            closest_support,
            pairs,
            relabel,
        };
        self.debug_check_substitution_closure(&structure);
        Ok(structure)
    }

    /// Closest support tuples stay in the support when, at coordinates
    /// where they agree with `t`, the symbol is replaced by anything
    /// irrelevant. This holds for every relation and extreme tuple; verify
    /// it while the structure is being built.
    fn debug_check_substitution_closure(&self, s: &IrrelevanceStructure) {
        if !cfg!(debug_assertions) {
            return;
        }
        for base in &s.closest_support {
            let sets: Vec<Vec<u8>> = (0..self.arity())
                .map(|i| {
                    if base[i] != s.t[i] {
                        vec![base[i]]
                    } else {
                        (0..self.domains[i]).filter(|&d| s.is_irrelevant(i, d)).collect()
                    }
                })
                .collect();
            let combos: usize = sets.iter().map(|x| x.len()).product();
            if combos > 1 << 20 {
                continue;
            }
            for_each_product(&sets, &mut |u| {
                debug_assert!(
                    self.value(u) > 0,
                    "substituted tuple {} fell out of the support",
                    tuple_string(u)
                );
            });
        }
    }

    /// Collapses `u` onto its class representative: irrelevant symbols are
    /// replaced by `t_i`, relevant symbols kept.
    pub fn project_irrelevant(&self, s: &IrrelevanceStructure, u: &[u8]) -> Vec<u8> {
        u.iter()
            .enumerate()
            .map(|(i, &d)| if s.is_irrelevant(i, d) { s.t[i] } else { d })
            .collect()
    }

    /// Whether the relation ignores irrelevant symbols entirely: every
    /// tuple takes the value of its class representative.
    pub fn is_decomposable(&self, s: &IrrelevanceStructure) -> bool {
        (0..self.table.len()).all(|idx| {
            let u = self.tuple_at(idx);
            self.table[idx] == self.value(&self.project_irrelevant(s, &u))
        })
    }

    /// Largest decomposable relation bounded above by this one and smallest
    /// bounded below, both with respect to the classes induced by the
    /// irrelevance structure: per class, the lower relation takes the
    /// minimum value and the upper one the maximum.
    pub fn sandwich_decomposable(
        &self,
        s: &IrrelevanceStructure,
    ) -> Result<(ValuedRelation, ValuedRelation)> {
        let mut class_min: HashMap<usize, u32> = HashMap::new();
        let mut class_max: HashMap<usize, u32> = HashMap::new();
        for idx in 0..self.table.len() {
            let u = self.tuple_at(idx);
            let key = self.index_of(&self.project_irrelevant(s, &u));
            let v = self.table[idx];
            class_min
                .entry(key)
                .and_modify(|m| *m = (*m).min(v))
                .or_insert(v);
            class_max
                .entry(key)
                .and_modify(|m| *m = (*m).max(v))
                .or_insert(v);
        }
        let mut lower = vec![0u32; self.table.len()];
        let mut upper = vec![0u32; self.table.len()];
        for idx in 0..self.table.len() {
            let u = self.tuple_at(idx);
            let key = self.index_of(&self.project_irrelevant(s, &u));
            lower[idx] = class_min[&key];
            upper[idx] = class_max[&key];
        }
        let lo = ValuedRelation::new(self.domains.clone(), lower)?;
        let hi = ValuedRelation::new(self.domains.clone(), upper)?;
        debug_assert!(lo.is_decomposable(s) && hi.is_decomposable(s));
        Ok((lo, hi))
    }
}
