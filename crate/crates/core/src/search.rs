//! Exhaustive searches over connection sets and over small regular digraphs.
//!
//! Candidates live in a fixed lexicographic order addressed by a cursor, so
//! every run is reproducible and resumable. Batches of consecutive indices
//! are checked in parallel; a witness is always the one with the smallest
//! index, independent of the schedule.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::autgroup::{
    automorphism_group, has_nontrivial_automorphism, is_representation, AutError, AutOptions,
};
use crate::cayley::{build_cayley, is_oriented_sets, validate_sets, ConnectionSets};
use crate::digraph::Digraph;
use crate::group::{Elem, GroupTable};
use crate::io::DigraphJson;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("invalid search parameters: {0}")]
    InvalidParameters(String),
    #[error("candidate space has more than 2^64 elements")]
    SpaceTooLarge,
    #[error("cursor {cursor} is past the end of a space of {total} candidates")]
    CursorOutOfRange { cursor: u64, total: u64 },
}

/// What the witness must be.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// Oriented, partite, `Aut = R(G)`.
    Posr,
    /// Partite, `Aut = R(G)`.
    Pdr,
}

impl std::str::FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "posr" => Ok(Kind::Posr),
            "pdr" => Ok(Kind::Pdr),
            other => Err(format!("unknown kind {other:?} (expected posr or pdr)")),
        }
    }
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Kind::Posr => "posr",
            Kind::Pdr => "pdr",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchStatus {
    FoundWitness,
    ExhaustedNone,
    Aborted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    ConnectionSets(ConnectionSets),
    Digraph(Digraph),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub witness: Option<Witness>,
    /// Candidates before the cursor plus those checked in this run; for a
    /// witness, its index plus one.
    pub candidates_examined: u64,
    pub total_candidates: u64,
    /// Where a resumed run should start; set when aborted.
    pub next_cursor: Option<u64>,
    /// Description of any isomorphism reduction applied to the space.
    pub reduction: Option<String>,
    pub elapsed: Duration,
}

impl SearchOutcome {
    /// Key-sorted JSON; connection-set witnesses are rendered as words of `g`.
    pub fn to_json(&self, g: Option<&GroupTable>, with_timing: bool) -> Value {
        let witness = match (&self.witness, g) {
            (Some(Witness::ConnectionSets(c)), Some(g)) => serde_json::to_value(c.to_json(g)).expect("plain data"),
            (Some(Witness::ConnectionSets(c)), None) => {
                json!({ "m": c.m(), "cells": (0..c.m()).map(|i| (0..c.m()).map(|j| c.cell(i, j).to_vec()).collect::<Vec<_>>()).collect::<Vec<_>>() })
            }
            (Some(Witness::Digraph(d)), _) => serde_json::to_value(DigraphJson::from(d)).expect("plain data"),
            (None, _) => Value::Null,
        };
        let mut v = json!({
            "status": self.status,
            "witness": witness,
            "candidates_examined": self.candidates_examined,
            "total_candidates": self.total_candidates,
            "next_cursor": self.next_cursor,
            "reduction": self.reduction,
        });
        if with_timing {
            v["elapsed_ms"] = json!(self.elapsed.as_millis() as u64);
        }
        v
    }
}

/// Progress line payload `{examined, total, elapsed_ms}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Progress {
    pub examined: u64,
    pub total: u64,
    pub elapsed_ms: u64,
}

/// How each candidate is checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Pipeline {
    /// Orientation filter on the sets, then the one-individualization probe.
    #[default]
    Quick,
    /// Full validation of the built digraph and the full automorphism group.
    Naive,
}

/// Optional shrinking of the candidate space before the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Reduction {
    #[default]
    None,
    /// For `m = 2`: one representative per orbit of the maps
    /// `(A, B) -> (a·φ(A), φ(B)·a⁻¹)` with `a` in `G` and `φ` in `Aut(G)`,
    /// each of which induces an isomorphism of the Cayley digraphs.
    Isomorphism,
}

pub struct SearchOptions<'a> {
    pub batch_size: u64,
    pub start_cursor: u64,
    /// Stop (as aborted) once this many candidates have been checked in this run.
    pub max_candidates: Option<u64>,
    pub progress_every: Option<u64>,
    pub progress: Option<&'a (dyn Fn(&Progress) + Sync)>,
    pub cancel: Option<&'a AtomicBool>,
    pub aut: AutOptions,
    pub pipeline: Pipeline,
    pub reduction: Reduction,
}

impl Default for SearchOptions<'_> {
    fn default() -> Self {
        SearchOptions {
            batch_size: 4096,
            start_cursor: 0,
            max_candidates: None,
            progress_every: None,
            progress: None,
            cancel: None,
            aut: AutOptions::default(),
            pipeline: Pipeline::Quick,
            reduction: Reduction::None,
        }
    }
}

// ---------------------------------------------------------------------------
// Combinatorics

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// The `rank`-th `k`-subset of `0..n` in lexicographic order.
fn unrank_combination(n: usize, k: usize, mut rank: u128) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut next = 0;
    for i in 0..k {
        loop {
            let below = binomial(n - next - 1, k - i - 1);
            if rank < below {
                break;
            }
            rank -= below;
            next += 1;
        }
        out.push(next);
        next += 1;
    }
    out
}

fn rank_combination(n: usize, set: &[usize]) -> u128 {
    let k = set.len();
    let mut rank = 0;
    let mut prev = 0;
    for (i, &c) in set.iter().enumerate() {
        for skipped in prev..c {
            rank += binomial(n - skipped - 1, k - i - 1);
        }
        prev = c + 1;
    }
    rank
}

/// All `m x m` cell-size matrices with the given row and column sums, in
/// row-major lexicographic order.
fn size_matrices(m: usize, valency: usize, max_cell: usize, partite: bool) -> Vec<Vec<usize>> {
    #[allow(clippy::too_many_arguments)]
    fn rec(
        idx: usize,
        m: usize,
        valency: usize,
        max_cell: usize,
        partite: bool,
        cur: &mut Vec<usize>,
        rows: &mut [usize],
        cols: &mut [usize],
        out: &mut Vec<Vec<usize>>,
    ) {
        if idx == m * m {
            out.push(cur.clone());
            return;
        }
        let (i, j) = (idx / m, idx % m);
        let hi = if partite && i == j {
            0
        } else {
            max_cell.min(valency - rows[i]).min(valency - cols[j])
        };
        for s in 0..=hi {
            // the last cell of a row or column must complete its sum
            if j == m - 1 && rows[i] + s != valency {
                continue;
            }
            if i == m - 1 && cols[j] + s != valency {
                continue;
            }
            cur.push(s);
            rows[i] += s;
            cols[j] += s;
            rec(idx + 1, m, valency, max_cell, partite, cur, rows, cols, out);
            rows[i] -= s;
            cols[j] -= s;
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(
        0,
        m,
        valency,
        max_cell,
        partite,
        &mut Vec::new(),
        &mut vec![0; m],
        &mut vec![0; m],
        &mut out,
    );
    out
}

/// Every size-valid connection-set system for `(|G|, m, valency)`, indexable.
#[derive(Debug, Clone)]
pub struct CandidateSpace {
    n: usize,
    m: usize,
    matrices: Vec<Vec<usize>>,
    /// prefix[i] = number of candidates in matrices before i
    prefix: Vec<u64>,
}

impl CandidateSpace {
    pub fn new(group_order: usize, m: usize, valency: usize, partite: bool) -> Result<Self, SearchError> {
        if m == 0 || valency == 0 {
            return Err(SearchError::InvalidParameters("m and valency must be positive".into()));
        }
        let matrices: Vec<Vec<usize>> = size_matrices(m, valency, group_order, partite);
        let mut prefix = vec![0u64];
        for mat in &matrices {
            let count = mat
                .iter()
                .try_fold(1u128, |acc, &s| acc.checked_mul(binomial(group_order, s)))
                .ok_or(SearchError::SpaceTooLarge)?;
            let next = (*prefix.last().expect("nonempty") as u128)
                .checked_add(count)
                .filter(|&t| t <= u64::MAX as u128)
                .ok_or(SearchError::SpaceTooLarge)?;
            prefix.push(next as u64);
        }
        Ok(CandidateSpace {
            n: group_order,
            m,
            matrices,
            prefix,
        })
    }

    pub fn total(&self) -> u64 {
        *self.prefix.last().expect("nonempty")
    }

    pub fn size_matrices(&self) -> &[Vec<usize>] {
        &self.matrices
    }

    /// The candidate at `index` (row-major cells, first cell most significant).
    pub fn get(&self, index: u64) -> ConnectionSets {
        assert!(index < self.total(), "candidate index out of range");
        let mi = self.prefix.partition_point(|&p| p <= index) - 1;
        let mat = &self.matrices[mi];
        let mut local = (index - self.prefix[mi]) as u128;
        let mut ranks = vec![0u128; mat.len()];
        for c in (0..mat.len()).rev() {
            let radix = binomial(self.n, mat[c]);
            ranks[c] = local % radix;
            local /= radix;
        }
        let mut conn = ConnectionSets::empty(self.m);
        for (c, &size) in mat.iter().enumerate() {
            if size > 0 {
                conn.set(c / self.m, c % self.m, unrank_combination(self.n, size, ranks[c]))
                    .expect("combinations are duplicate-free");
            }
        }
        conn
    }

    pub fn iter(&self) -> impl Iterator<Item = ConnectionSets> + '_ {
        (0..self.total()).map(move |i| self.get(i))
    }
}

/// Streams every connection-set system with all row and column sums equal to
/// `valency`, in lexicographic order.
pub fn enumerate_connection_sets<'g>(
    g: &'g GroupTable,
    m: usize,
    valency: usize,
    require_oriented: bool,
    require_partite: bool,
) -> Result<impl Iterator<Item = ConnectionSets> + 'g, SearchError> {
    let space = CandidateSpace::new(g.order(), m, valency, require_partite)?;
    Ok((0..space.total())
        .map(move |i| space.get(i))
        .filter(move |c| !require_oriented || is_oriented_sets(g, c)))
}

// ---------------------------------------------------------------------------
// Reduced space for two parts

fn apply_to_set(set: &[Elem], f: impl Fn(Elem) -> Elem) -> Vec<Elem> {
    let mut out: Vec<Elem> = set.iter().map(|&e| f(e)).collect();
    out.sort_unstable();
    out
}

/// Orbit representatives `(rank of T01, rank of T10)` under translations and
/// group automorphisms, in lexicographic order.
fn reduced_pairs(g: &GroupTable, valency: usize) -> Vec<(u128, u128)> {
    let n = g.order();
    let sets = binomial(n, valency);
    let autos = g.automorphisms();
    let transforms: Vec<(Elem, &Vec<Elem>)> = (0..n).flat_map(|a| autos.iter().map(move |phi| (a, phi))).collect();
    let image01 = |(a, phi): (Elem, &Vec<Elem>), set: &[Elem]| apply_to_set(set, |e| g.mul(a, phi[e]));
    let image10 = |(a, phi): (Elem, &Vec<Elem>), set: &[Elem]| apply_to_set(set, |e| g.mul(phi[e], g.inv(a)));

    let mut pairs = Vec::new();
    let mut seen = vec![false; sets as usize];
    for first in 0..sets {
        if seen[first as usize] {
            continue;
        }
        let a_set = unrank_combination(n, valency, first);
        let mut stabilizer = Vec::new();
        for &t in &transforms {
            let img = image01(t, &a_set);
            seen[rank_combination(n, &img) as usize] = true;
            if img == a_set {
                stabilizer.push(t);
            }
        }
        let mut seen_b = vec![false; sets as usize];
        for second in 0..sets {
            if seen_b[second as usize] {
                continue;
            }
            pairs.push((first, second));
            let b_set = unrank_combination(n, valency, second);
            for &t in &stabilizer {
                seen_b[rank_combination(n, &image10(t, &b_set)) as usize] = true;
            }
        }
    }
    pairs
}

// ---------------------------------------------------------------------------
// m-POSR / m-PDR existence

fn candidate_passes(
    g: &GroupTable,
    conn: &ConnectionSets,
    valency: usize,
    kind: Kind,
    pipeline: Pipeline,
    aut: AutOptions,
) -> Result<bool, AutError> {
    match pipeline {
        Pipeline::Quick => {
            if kind == Kind::Posr && !is_oriented_sets(g, conn) {
                return Ok(false);
            }
            let pd = build_cayley(g, conn).expect("candidate indices are in range");
            is_representation(&pd, aut)
        }
        Pipeline::Naive => {
            let report = validate_sets(g, conn, valency).expect("candidate indices are in range");
            if !report.partite || !report.regular || (kind == Kind::Posr && !report.oriented) {
                return Ok(false);
            }
            let pd = build_cayley(g, conn).expect("candidate indices are in range");
            let aut = automorphism_group(&pd.digraph)?;
            Ok(aut.order == BigUint::from(g.order()))
        }
    }
}

/// Decides whether `G` has an m-POSR (or m-PDR) of the given valency.
pub fn exists_mposr(g: &GroupTable, m: usize, valency: usize, kind: Kind) -> Result<SearchOutcome, SearchError> {
    exists_mposr_with(g, m, valency, kind, &SearchOptions::default())
}

pub fn exists_mposr_with(
    g: &GroupTable,
    m: usize,
    valency: usize,
    kind: Kind,
    options: &SearchOptions<'_>,
) -> Result<SearchOutcome, SearchError> {
    let started = Instant::now();
    let space = CandidateSpace::new(g.order(), m, valency, true)?;
    let (total, reduced, label) = match options.reduction {
        Reduction::None => (space.total(), None, None),
        Reduction::Isomorphism => {
            if m != 2 {
                return Err(SearchError::InvalidParameters(
                    "the isomorphism reduction is implemented for m = 2 only".into(),
                ));
            }
            let pairs = if g.order() >= valency { reduced_pairs(g, valency) } else { Vec::new() };
            (
                pairs.len() as u64,
                Some(pairs),
                Some("up to group automorphism and translation".to_string()),
            )
        }
    };
    let n = g.order();
    let candidate = |index: u64| -> ConnectionSets {
        match &reduced {
            None => space.get(index),
            Some(pairs) => {
                let (a, b) = pairs[index as usize];
                let mut conn = ConnectionSets::empty(2);
                conn.set(0, 1, unrank_combination(n, valency, a)).expect("valid");
                conn.set(1, 0, unrank_combination(n, valency, b)).expect("valid");
                conn
            }
        }
    };
    let check = |index: u64| candidate_passes(g, &candidate(index), valency, kind, options.pipeline, options.aut);
    run_indexed(total, options, started, label, check, |i| Witness::ConnectionSets(candidate(i)))
}

fn run_indexed(
    total: u64,
    options: &SearchOptions<'_>,
    started: Instant,
    reduction: Option<String>,
    check: impl Fn(u64) -> Result<bool, AutError> + Sync,
    witness: impl Fn(u64) -> Witness,
) -> Result<SearchOutcome, SearchError> {
    if options.start_cursor > total {
        return Err(SearchError::CursorOutOfRange {
            cursor: options.start_cursor,
            total,
        });
    }
    let batch = options.batch_size.max(1);
    let mut cursor = options.start_cursor;
    let mut checked_this_run = 0u64;
    let mut last_report = cursor;
    let outcome = |status, witness, examined, next_cursor| SearchOutcome {
        status,
        witness,
        candidates_examined: examined,
        total_candidates: total,
        next_cursor,
        reduction: reduction.clone(),
        elapsed: started.elapsed(),
    };
    while cursor < total {
        let cancelled = options.cancel.is_some_and(|c| c.load(Ordering::Relaxed));
        let over_budget = options.max_candidates.is_some_and(|max| checked_this_run >= max);
        if cancelled || over_budget {
            return Ok(outcome(SearchStatus::Aborted, None, cursor, Some(cursor)));
        }
        let mut end = (cursor + batch).min(total);
        if let Some(max) = options.max_candidates {
            end = end.min(cursor + (max - checked_this_run));
        }
        let found = (cursor..end).into_par_iter().find_map_first(|i| match check(i) {
            Ok(true) => Some(Ok(i)),
            Ok(false) => None,
            Err(e) => Some(Err(e)),
        });
        match found {
            Some(Ok(i)) => {
                return Ok(outcome(SearchStatus::FoundWitness, Some(witness(i)), i + 1, None));
            }
            Some(Err(_)) => {
                return Ok(outcome(SearchStatus::Aborted, None, cursor, Some(cursor)));
            }
            None => {}
        }
        checked_this_run += end - cursor;
        cursor = end;
        if let (Some(every), Some(report)) = (options.progress_every, options.progress) {
            if cursor - last_report >= every || cursor == total {
                last_report = cursor;
                report(&Progress {
                    examined: cursor,
                    total,
                    elapsed_ms: started.elapsed().as_millis() as u64,
                });
            }
        }
    }
    Ok(outcome(SearchStatus::ExhaustedNone, None, total, None))
}

// ---------------------------------------------------------------------------
// Asymmetric regular digraphs

struct RegularSearch<'a> {
    n: usize,
    k: usize,
    oriented: bool,
    aut: AutOptions,
    cancel: Option<&'a AtomicBool>,
}

/// Outcome of one subtree: leaves visited, a witness, or an abort.
enum Subtree {
    Done(u64),
    Found(u64, Vec<u64>),
    Aborted,
}

impl RegularSearch<'_> {
    // vertices that row `v` may point to
    fn allowed(&self, rows: &[u64], indeg: &[usize], v: usize) -> u64 {
        let mut mask = 0u64;
        for u in 0..self.n {
            if u == v || indeg[u] >= self.k {
                continue;
            }
            if self.oriented && u < v && rows[u] >> v & 1 == 1 {
                continue;
            }
            mask |= 1 << u;
        }
        mask
    }

    // column and row capacities after rows 0..=v are fixed
    fn feasible(&self, rows: &[u64], indeg: &[usize], v: usize) -> bool {
        for u in 0..self.n {
            let need = self.k - indeg[u];
            if need == 0 {
                continue;
            }
            let avail = (v + 1..self.n)
                .filter(|&w| w != u && !(self.oriented && u <= v && rows[u] >> w & 1 == 1))
                .count();
            if need > avail {
                return false;
            }
        }
        for w in v + 1..self.n {
            let choices = (0..self.n)
                .filter(|&u| {
                    u != w && indeg[u] < self.k && !(self.oriented && u <= v && rows[u] >> w & 1 == 1)
                })
                .count();
            if choices < self.k {
                return false;
            }
        }
        true
    }

    /// `k`-subsets of the bits of `mask`, in lexicographic order.
    fn subsets(mask: u64, k: usize) -> Vec<u64> {
        let bits: Vec<usize> = (0..64).filter(|&b| mask >> b & 1 == 1).collect();
        let width = bits.len();
        let mut out = Vec::new();
        if k > width {
            return out;
        }
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            out.push(idx.iter().fold(0u64, |acc, &i| acc | 1 << bits[i]));
            let Some(i) = (0..k).rev().find(|&i| idx[i] < width - k + i) else {
                return out;
            };
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }

    fn place(&self, rows: &mut [u64], indeg: &mut [usize], v: usize, row: u64, sign: isize) {
        rows[v] = if sign > 0 { row } else { 0 };
        for (u, d) in indeg.iter_mut().enumerate().take(self.n) {
            if row >> u & 1 == 1 {
                *d = (*d as isize + sign) as usize;
            }
        }
    }

    fn leaf_is_asymmetric(&self, rows: &[u64]) -> Result<bool, AutError> {
        let d = rows_to_digraph(rows, self.n);
        Ok(!has_nontrivial_automorphism(&d, self.aut)?)
    }

    fn dfs(&self, rows: &mut Vec<u64>, indeg: &mut Vec<usize>, v: usize, leaves: &mut u64) -> Result<bool, AutError> {
        if v == self.n {
            *leaves += 1;
            return self.leaf_is_asymmetric(rows);
        }
        if self.cancel.is_some_and(|c| c.load(Ordering::Relaxed)) {
            return Err(AutError::BudgetExceeded(*leaves));
        }
        for row in Self::subsets(self.allowed(rows, indeg, v), self.k) {
            self.place(rows, indeg, v, row, 1);
            if self.feasible(rows, indeg, v) && self.dfs(rows, indeg, v + 1, leaves)? {
                return Ok(true);
            }
            self.place(rows, indeg, v, row, -1);
        }
        Ok(false)
    }

    fn explore(&self, prefix: &[u64], best: &AtomicUsize, index: usize) -> Subtree {
        let mut rows = vec![0u64; self.n];
        let mut indeg = vec![0usize; self.n];
        for (v, &row) in prefix.iter().enumerate() {
            self.place(&mut rows, &mut indeg, v, row, 1);
        }
        if index > best.load(Ordering::Relaxed) {
            return Subtree::Aborted;
        }
        let mut leaves = 0;
        match self.dfs(&mut rows, &mut indeg, prefix.len(), &mut leaves) {
            Ok(true) => {
                best.fetch_min(index, Ordering::Relaxed);
                Subtree::Found(leaves, rows)
            }
            Ok(false) => Subtree::Done(leaves),
            Err(_) => Subtree::Aborted,
        }
    }
}

fn rows_to_digraph(rows: &[u64], n: usize) -> Digraph {
    Digraph::from_arcs(
        n,
        (0..n).flat_map(|u| (0..n).filter(move |&v| rows[u] >> v & 1 == 1).map(move |v| (u, v))),
    )
    .expect("rows describe a simple digraph")
}

/// Searches the `k`-regular loop-free digraphs on `order` vertices (digon-free
/// if `oriented`) for one with trivial automorphism group.
///
/// Vertex 0's out-neighbourhood is fixed to `{1..k}`: relabelling any
/// `k`-regular digraph so that a chosen vertex becomes 0 and its out-neighbours
/// become `1..k` gives an isomorphic digraph, so existence is unaffected.
/// `candidates_examined` counts complete digraphs reached by the search.
pub fn exists_antisymmetric_kregular(order: usize, k: usize, oriented: bool) -> Result<SearchOutcome, SearchError> {
    exists_antisymmetric_kregular_with(order, k, oriented, &SearchOptions::default())
}

pub fn exists_antisymmetric_kregular_with(
    order: usize,
    k: usize,
    oriented: bool,
    options: &SearchOptions<'_>,
) -> Result<SearchOutcome, SearchError> {
    let started = Instant::now();
    if order == 0 || k == 0 || order > 64 {
        return Err(SearchError::InvalidParameters("need 1 <= order <= 64 and k >= 1".into()));
    }
    let exhausted = |examined| SearchOutcome {
        status: SearchStatus::ExhaustedNone,
        witness: None,
        candidates_examined: examined,
        total_candidates: examined,
        next_cursor: None,
        reduction: Some("out-neighbourhood of vertex 0 fixed".into()),
        elapsed: started.elapsed(),
    };
    // an oriented k-regular digraph needs 2k <= order - 1
    if k >= order || (oriented && 2 * k > order - 1) {
        return Ok(exhausted(0));
    }
    let search = RegularSearch {
        n: order,
        k,
        oriented,
        aut: options.aut,
        cancel: options.cancel,
    };
    let row0: u64 = (1..=k).fold(0, |acc, u| acc | 1 << u);
    let mut rows = vec![0u64; order];
    let mut indeg = vec![0usize; order];
    search.place(&mut rows, &mut indeg, 0, row0, 1);
    if !search.feasible(&rows, &indeg, 0) {
        return Ok(exhausted(0));
    }
    let prefixes: Vec<Vec<u64>> = RegularSearch::subsets(search.allowed(&rows, &indeg, 1), k)
        .into_iter()
        .filter(|&r1| {
            let mut rows = rows.clone();
            let mut indeg = indeg.clone();
            search.place(&mut rows, &mut indeg, 1, r1, 1);
            search.feasible(&rows, &indeg, 1)
        })
        .map(|r1| vec![row0, r1])
        .collect();
    let best = AtomicUsize::new(usize::MAX);
    let results: Vec<Subtree> = prefixes
        .par_iter()
        .enumerate()
        .map(|(i, prefix)| search.explore(prefix, &best, i))
        .collect();
    let mut examined = 0u64;
    for r in results {
        match r {
            Subtree::Done(leaves) => examined += leaves,
            Subtree::Found(leaves, rows) => {
                return Ok(SearchOutcome {
                    status: SearchStatus::FoundWitness,
                    witness: Some(Witness::Digraph(rows_to_digraph(&rows, order))),
                    candidates_examined: examined + leaves,
                    total_candidates: 0,
                    next_cursor: None,
                    reduction: Some("out-neighbourhood of vertex 0 fixed".into()),
                    elapsed: started.elapsed(),
                });
            }
            Subtree::Aborted => {
                return Ok(SearchOutcome {
                    status: SearchStatus::Aborted,
                    witness: None,
                    candidates_examined: examined,
                    total_candidates: 0,
                    next_cursor: None,
                    reduction: Some("out-neighbourhood of vertex 0 fixed".into()),
                    elapsed: started.elapsed(),
                });
            }
        }
    }
    Ok(exhausted(examined))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{named_group, GroupSpec};

    fn group(spec: GroupSpec) -> GroupTable {
        named_group(&spec).unwrap()
    }

    #[test]
    fn combination_ranking_round_trips() {
        for n in 0..8 {
            for k in 0..=n {
                for r in 0..binomial(n, k) {
                    let c = unrank_combination(n, k, r);
                    assert_eq!(rank_combination(n, &c), r);
                    if r > 0 {
                        assert!(unrank_combination(n, k, r - 1) < c);
                    }
                }
            }
        }
    }

    #[test]
    fn candidate_counts() {
        let count = |spec, require_oriented| {
            enumerate_connection_sets(&group(spec), 2, 3, require_oriented, true)
                .unwrap()
                .count()
        };
        assert_eq!(count(GroupSpec::Klein4, false), 16);
        assert_eq!(count(GroupSpec::Cyclic(2), false), 0);
        assert_eq!(count(GroupSpec::Cyclic(6), false), 400);
        for n in 3..=8 {
            let space = CandidateSpace::new(n, 2, 3, true).unwrap();
            assert_eq!(space.total() as u128, binomial(n, 3).pow(2));
        }
    }

    #[test]
    fn enumeration_is_sorted_and_valid() {
        let g = group(GroupSpec::Cyclic(3));
        let all: Vec<ConnectionSets> = enumerate_connection_sets(&g, 3, 2, false, true).unwrap().collect();
        let mut seen = std::collections::HashSet::new();
        for c in &all {
            assert!(seen.insert(c.clone()));
            for i in 0..3 {
                assert_eq!(c.row_sum(i), 2);
                assert_eq!(c.col_sum(i), 2);
                assert!(c.cell(i, i).is_empty());
            }
        }
        let oriented = enumerate_connection_sets(&g, 3, 2, true, true).unwrap();
        assert!(oriented.into_iter().all(|c| is_oriented_sets(&g, &c)));
    }

    #[test]
    fn small_cyclic_verdicts() {
        let c6 = exists_mposr(&group(GroupSpec::Cyclic(6)), 2, 3, Kind::Posr).unwrap();
        assert_eq!(c6.status, SearchStatus::ExhaustedNone);
        assert_eq!(c6.candidates_examined, 400);
        let c7 = exists_mposr(&group(GroupSpec::Cyclic(7)), 2, 3, Kind::Posr).unwrap();
        assert_eq!(c7.status, SearchStatus::FoundWitness);
        let Some(Witness::ConnectionSets(w)) = c7.witness else { panic!("missing witness") };
        let g = group(GroupSpec::Cyclic(7));
        let pd = build_cayley(&g, &w).unwrap();
        assert_eq!(automorphism_group(&pd.digraph).unwrap().order, 7u32.into());
        assert!(validate_sets(&g, &w, 3).unwrap().oriented);
    }

    #[test]
    fn quick_and_naive_pipelines_agree() {
        for spec in [GroupSpec::Cyclic(6), GroupSpec::Klein4, GroupSpec::Cyclic(7)] {
            let g = group(spec);
            for kind in [Kind::Posr, Kind::Pdr] {
                let space = CandidateSpace::new(g.order(), 2, 3, true).unwrap();
                for conn in space.iter() {
                    let quick = candidate_passes(&g, &conn, 3, kind, Pipeline::Quick, AutOptions::default()).unwrap();
                    let naive = candidate_passes(&g, &conn, 3, kind, Pipeline::Naive, AutOptions::default()).unwrap();
                    assert_eq!(quick, naive, "{conn:?}");
                }
            }
        }
    }

    #[test]
    fn resume_and_budget() {
        let g = group(GroupSpec::Cyclic(6));
        let partial = exists_mposr_with(
            &g,
            2,
            3,
            Kind::Posr,
            &SearchOptions { max_candidates: Some(150), batch_size: 64, ..SearchOptions::default() },
        )
        .unwrap();
        assert_eq!(partial.status, SearchStatus::Aborted);
        let cursor = partial.next_cursor.unwrap();
        assert_eq!(cursor, 150);
        let rest = exists_mposr_with(
            &g,
            2,
            3,
            Kind::Posr,
            &SearchOptions { start_cursor: cursor, ..SearchOptions::default() },
        )
        .unwrap();
        assert_eq!(rest.status, SearchStatus::ExhaustedNone);
        assert_eq!(rest.candidates_examined, 400);
    }

    #[test]
    fn reduction_preserves_verdicts() {
        for (spec, expect) in [
            (GroupSpec::Cyclic(6), SearchStatus::ExhaustedNone),
            (GroupSpec::Cyclic(7), SearchStatus::FoundWitness),
            (GroupSpec::Quaternion8, SearchStatus::ExhaustedNone),
            (GroupSpec::Dihedral(8), SearchStatus::FoundWitness),
        ] {
            let g = group(spec);
            let opts = SearchOptions { reduction: Reduction::Isomorphism, ..SearchOptions::default() };
            let reduced = exists_mposr_with(&g, 2, 3, Kind::Posr, &opts).unwrap();
            assert_eq!(reduced.status, expect);
            let full = exists_mposr(&g, 2, 3, Kind::Posr).unwrap();
            assert_eq!(full.status, expect);
            assert!(reduced.total_candidates < full.total_candidates);
        }
    }

    #[test]
    fn tiny_antisymmetric_cases() {
        let out = exists_antisymmetric_kregular(5, 3, false).unwrap();
        assert_eq!(out.status, SearchStatus::ExhaustedNone);
        let out = exists_antisymmetric_kregular(6, 3, true).unwrap();
        assert_eq!(out.status, SearchStatus::ExhaustedNone);
        assert_eq!(out.candidates_examined, 0);
        let out = exists_antisymmetric_kregular(1, 1, false).unwrap();
        assert_eq!(out.status, SearchStatus::ExhaustedNone);
    }

    #[test]
    fn subset_enumeration() {
        let subs = RegularSearch::subsets(0b10110, 2);
        assert_eq!(subs, vec![0b00110, 0b10010, 0b10100]);
        assert!(RegularSearch::subsets(0b1, 2).is_empty());
        assert_eq!(RegularSearch::subsets(0b111, 3), vec![0b111]);
    }
}
