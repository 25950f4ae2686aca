//! Automorphism groups of digraphs by individualization-refinement.
//!
//! The solver refines an ordered partition to an equitable one (counting
//! both out- and in-neighbours per cell), individualizes vertices of the
//! smallest non-singleton cell, and compares every explored node against the
//! first path by a label-invariant trace hash. Automorphisms are collected
//! level by level from the deepest first-path node upwards, and the order is
//! the product of the basic orbit lengths.

use std::collections::VecDeque;

use num_bigint::BigUint;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::cayley::PartitionedDigraph;
use crate::digraph::Digraph;
use crate::group::GroupTable;
use crate::perm::Perm;
use crate::schreier::StabilizerChain;

pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;
pub const BRUTE_FORCE_MAX_VERTICES: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutError {
    #[error("search exceeded the node budget of {0}")]
    BudgetExceeded(u64),
    #[error("brute force is limited to {max} vertices, got {n}")]
    TooLarge { n: usize, max: usize },
    #[error("coloring has {got} entries for {n} vertices")]
    ColoringMismatch { n: usize, got: usize },
}

pub(crate) fn serialize_biguint<S: Serializer>(value: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    match u64::try_from(value) {
        Ok(small) => s.serialize_u64(small),
        Err(_) => s.serialize_str(&value.to_string()),
    }
}

// ---------------------------------------------------------------------------
// Public colorings

/// A vertex coloring with colors `0..num_colors`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    pub color: Vec<usize>,
    pub num_colors: usize,
    pub equitable: bool,
}

impl Coloring {
    pub fn uniform(n: usize) -> Self {
        Coloring {
            color: vec![0; n],
            num_colors: usize::from(n > 0),
            equitable: false,
        }
    }

    /// Renumbers arbitrary color labels to `0..k` preserving their order.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut distinct: Vec<usize> = labels.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        let color = labels
            .iter()
            .map(|l| distinct.binary_search(l).expect("label present"))
            .collect();
        Coloring {
            color,
            num_colors: distinct.len(),
            equitable: false,
        }
    }

    fn degree_vector(&self, d: &Digraph, v: usize) -> Vec<usize> {
        let k = self.num_colors;
        let mut vec = vec![0; 2 * k];
        for &u in d.out_neighbors(v) {
            vec[self.color[u]] += 1;
        }
        for &u in d.in_neighbors(v) {
            vec[k + self.color[u]] += 1;
        }
        vec
    }

    /// Same-colored vertices have equal out- and in-neighbour counts in every color.
    pub fn is_equitable(&self, d: &Digraph) -> bool {
        let mut reference: Vec<Option<Vec<usize>>> = vec![None; self.num_colors];
        (0..d.n_vertices()).all(|v| {
            let vec = self.degree_vector(d, v);
            match &reference[self.color[v]] {
                Some(r) => *r == vec,
                None => {
                    reference[self.color[v]] = Some(vec);
                    true
                }
            }
        })
    }
}

/// The coarsest equitable coloring refining `initial`.
///
/// New colors are ordered by (old color, degree vector) lexicographically,
/// so the result is deterministic and refining it again is a no-op.
pub fn equitable_refine(d: &Digraph, initial: &Coloring) -> Result<Coloring, AutError> {
    let n = d.n_vertices();
    if initial.color.len() != n {
        return Err(AutError::ColoringMismatch {
            n,
            got: initial.color.len(),
        });
    }
    let mut current = Coloring::from_labels(&initial.color);
    loop {
        let keys: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| (current.color[v], current.degree_vector(d, v)))
            .collect();
        let mut sorted: Vec<&(usize, Vec<usize>)> = keys.iter().collect();
        sorted.sort();
        sorted.dedup();
        let color: Vec<usize> = keys
            .iter()
            .map(|k| sorted.binary_search(&k).expect("key present"))
            .collect();
        let stable = sorted.len() == current.num_colors;
        current = Coloring {
            color,
            num_colors: sorted.len(),
            equitable: stable,
        };
        if stable {
            return Ok(current);
        }
    }
}

// ---------------------------------------------------------------------------
// Ordered partitions

/// Cells are contiguous ranges of `elems`; a cell is named by its start.
#[derive(Debug, Clone)]
pub(crate) struct Partition {
    elems: Vec<u32>,
    pos: Vec<u32>,
    cell_of: Vec<u32>,
    cell_len: Vec<u32>,
    cells: usize,
}

impl Partition {
    pub(crate) fn unit(n: usize) -> Self {
        let mut cell_len = vec![0; n];
        if n > 0 {
            cell_len[0] = n as u32;
        }
        Partition {
            elems: (0..n as u32).collect(),
            pos: (0..n as u32).collect(),
            cell_of: vec![0; n],
            cell_len,
            cells: usize::from(n > 0),
        }
    }

    #[inline]
    fn n(&self) -> usize {
        self.elems.len()
    }

    #[inline]
    pub(crate) fn is_discrete(&self) -> bool {
        self.cells == self.n()
    }

    fn cell(&self, start: usize) -> &[u32] {
        &self.elems[start..start + self.cell_len[start] as usize]
    }

    fn starts(&self) -> impl Iterator<Item = usize> + '_ {
        let mut s = 0;
        std::iter::from_fn(move || {
            if s >= self.n() {
                return None;
            }
            let out = s;
            s += self.cell_len[s] as usize;
            Some(out)
        })
    }

    /// Smallest non-singleton cell, lowest start on ties.
    fn target_cell(&self) -> Option<usize> {
        let mut best: Option<(u32, usize)> = None;
        for s in self.starts() {
            let len = self.cell_len[s];
            if len > 1 && best.is_none_or(|(l, _)| len < l) {
                best = Some((len, s));
                if len == 2 {
                    break;
                }
            }
        }
        best.map(|(_, s)| s)
    }

    fn sorted_cell(&self, start: usize) -> Vec<u32> {
        let mut c = self.cell(start).to_vec();
        c.sort_unstable();
        c
    }

    /// Splits `v` off its cell as a leading singleton; returns its start.
    fn individualize(&mut self, v: u32) -> usize {
        let s = self.cell_of[v as usize] as usize;
        let len = self.cell_len[s] as usize;
        debug_assert!(len > 1);
        let p = self.pos[v as usize] as usize;
        let u = self.elems[s];
        self.elems.swap(s, p);
        self.pos[v as usize] = s as u32;
        self.pos[u as usize] = p as u32;
        self.cell_len[s] = 1;
        self.cell_len[s + 1] = (len - 1) as u32;
        for i in s + 1..s + len {
            self.cell_of[self.elems[i] as usize] = (s + 1) as u32;
        }
        self.cells += 1;
        s
    }

    /// The bijection sending the `i`-th vertex of `self` to the `i`-th of `other`.
    fn map_to(&self, other: &Partition) -> Perm {
        let mut images = vec![0; self.n()];
        for (a, b) in self.elems.iter().zip(&other.elems) {
            images[*a as usize] = *b as usize;
        }
        Perm::from_images(images).expect("discrete partitions give a bijection")
    }
}

#[inline]
fn mix(h: u64, x: u64) -> u64 {
    (h ^ x.wrapping_add(0x9e37_79b9_7f4a_7c15)).wrapping_mul(0x0000_0100_0000_01b3).rotate_left(23)
}

const TRACE_SEED: u64 = 0xcbf2_9ce4_8422_2325;

/// Counting refinement over a fixed digraph.
pub(crate) struct Refiner<'a> {
    d: &'a Digraph,
    count: Vec<u32>,
    touched: Vec<u32>,
    cell_touched: Vec<bool>,
    touched_cells: Vec<u32>,
    queue: VecDeque<u32>,
    in_queue: Vec<bool>,
    splitter: Vec<u32>,
    buf: Vec<(u32, u32)>,
}

impl<'a> Refiner<'a> {
    pub(crate) fn new(d: &'a Digraph) -> Self {
        let n = d.n_vertices();
        Refiner {
            d,
            count: vec![0; n],
            touched: Vec::new(),
            cell_touched: vec![false; n],
            touched_cells: Vec::new(),
            queue: VecDeque::new(),
            in_queue: vec![false; n],
            splitter: Vec::new(),
            buf: Vec::new(),
        }
    }

    /// Refines `p` to equitability starting from the given splitter cells and
    /// returns the trace hash, which depends only on cell positions and sizes.
    pub(crate) fn refine(&mut self, p: &mut Partition, seeds: &[usize]) -> u64 {
        let mut h = TRACE_SEED;
        for &s in seeds {
            self.enqueue(s as u32);
        }
        while let Some(ws) = self.queue.pop_front() {
            self.in_queue[ws as usize] = false;
            if p.is_discrete() {
                continue;
            }
            self.splitter.clear();
            self.splitter.extend_from_slice(p.cell(ws as usize));
            h = mix(h, ws as u64);
            for outgoing in [true, false] {
                for i in 0..self.splitter.len() {
                    let w = self.splitter[i] as usize;
                    let nbrs = if outgoing {
                        self.d.out_neighbors(w)
                    } else {
                        self.d.in_neighbors(w)
                    };
                    for &v in nbrs {
                        if self.count[v] == 0 {
                            self.touched.push(v as u32);
                        }
                        self.count[v] += 1;
                    }
                }
                for &v in &self.touched {
                    let c = p.cell_of[v as usize];
                    if !self.cell_touched[c as usize] {
                        self.cell_touched[c as usize] = true;
                        self.touched_cells.push(c);
                    }
                }
                let mut cells = std::mem::take(&mut self.touched_cells);
                cells.sort_unstable();
                for &c in &cells {
                    self.cell_touched[c as usize] = false;
                    h = self.split(p, c as usize, h);
                }
                cells.clear();
                self.touched_cells = cells;
                for &v in &self.touched {
                    self.count[v as usize] = 0;
                }
                self.touched.clear();
                h = mix(h, p.cells as u64);
            }
        }
        mix(h, p.cells as u64)
    }

    fn enqueue(&mut self, s: u32) {
        if !self.in_queue[s as usize] {
            self.in_queue[s as usize] = true;
            self.queue.push_back(s);
        }
    }

    fn split(&mut self, p: &mut Partition, s: usize, mut h: u64) -> u64 {
        let len = p.cell_len[s] as usize;
        if len == 1 {
            return h;
        }
        self.buf.clear();
        self.buf
            .extend(p.elems[s..s + len].iter().map(|&v| (self.count[v as usize], v)));
        self.buf.sort_unstable();
        if self.buf[0].0 == self.buf[len - 1].0 {
            return h;
        }
        for (i, &(_, v)) in self.buf.iter().enumerate() {
            p.elems[s + i] = v;
            p.pos[v as usize] = (s + i) as u32;
        }
        let was_queued = self.in_queue[s];
        let mut fragments: Vec<(usize, usize)> = Vec::new();
        let mut a = 0;
        for i in 1..=len {
            if i == len || self.buf[i].0 != self.buf[i - 1].0 {
                let start = s + a;
                p.cell_len[start] = (i - a) as u32;
                for &(_, v) in &self.buf[a..i] {
                    p.cell_of[v as usize] = start as u32;
                }
                h = mix(mix(mix(h, start as u64), self.buf[a].0 as u64), (i - a) as u64);
                fragments.push((start, i - a));
                a = i;
            }
        }
        p.cells += fragments.len() - 1;
        if was_queued {
            for &(start, _) in &fragments[1..] {
                self.enqueue(start as u32);
            }
        } else {
            let largest = fragments
                .iter()
                .enumerate()
                .max_by_key(|(i, f)| (f.1, std::cmp::Reverse(*i)))
                .map(|(i, _)| i)
                .expect("at least two fragments");
            for (i, &(start, _)) in fragments.iter().enumerate() {
                if i != largest {
                    self.enqueue(start as u32);
                }
            }
        }
        h
    }
}

// ---------------------------------------------------------------------------
// Search

#[derive(Debug, Clone)]
struct PathNode {
    part: Partition,
    trace: u64,
    target: Option<usize>,
    chosen: u32,
}

/// Solver configuration.
#[derive(Debug, Clone, Copy)]
pub struct AutOptions {
    pub node_budget: u64,
    /// Record one line per search node: `depth target-vertex hash`.
    pub trace: bool,
}

impl Default for AutOptions {
    fn default() -> Self {
        AutOptions {
            node_budget: DEFAULT_NODE_BUDGET,
            trace: false,
        }
    }
}

/// Generators and exact order of `Aut(d)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AutGroupResult {
    pub generators: Vec<Perm>,
    #[serde(serialize_with = "serialize_biguint")]
    pub order: BigUint,
    pub base: Vec<usize>,
}

struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let up = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = up;
            x = up;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a as usize] < self.size[b as usize] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b as usize] = a;
        self.size[a as usize] += self.size[b as usize];
    }

    fn same(&mut self, a: u32, b: u32) -> bool {
        self.find(a) == self.find(b)
    }

    fn class_size(&mut self, a: u32) -> usize {
        let r = self.find(a);
        self.size[r as usize] as usize
    }
}

/// Individualization-refinement search state for one digraph.
/// Generators, base and first-leaf labelling.
type RunOutput = (Vec<Perm>, Vec<usize>, Vec<u32>);

pub struct AutSolver<'a> {
    d: &'a Digraph,
    refiner: Refiner<'a>,
    options: AutOptions,
    nodes: u64,
    trace: Vec<String>,
}

impl<'a> AutSolver<'a> {
    pub fn new(d: &'a Digraph, options: AutOptions) -> Self {
        AutSolver {
            d,
            refiner: Refiner::new(d),
            options,
            nodes: 0,
            trace: Vec::new(),
        }
    }

    /// Search nodes visited so far.
    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    pub fn trace_lines(&self) -> &[String] {
        &self.trace
    }

    fn tick(&mut self, depth: usize, vertex: Option<u32>, hash: u64) -> Result<(), AutError> {
        self.nodes += 1;
        if self.options.trace {
            let v = vertex.map_or_else(|| "-".to_string(), |v| v.to_string());
            self.trace.push(format!("{depth} {v} {hash:016x}"));
        }
        if self.nodes > self.options.node_budget {
            return Err(AutError::BudgetExceeded(self.options.node_budget));
        }
        Ok(())
    }

    fn root(&mut self, mut p: Partition) -> Result<(Partition, u64), AutError> {
        let seeds: Vec<usize> = p.starts().collect();
        let t = self.refiner.refine(&mut p, &seeds);
        self.tick(0, None, t)?;
        Ok((p, t))
    }

    fn child(&mut self, p: &Partition, v: u32, depth: usize) -> Result<(Partition, u64), AutError> {
        let mut q = p.clone();
        let s = q.individualize(v);
        let t = self.refiner.refine(&mut q, &[s]);
        self.tick(depth, Some(v), t)?;
        Ok((q, t))
    }

    fn first_path(&mut self, initial: Partition) -> Result<Vec<PathNode>, AutError> {
        let (mut p, mut t) = self.root(initial)?;
        let mut path = Vec::new();
        loop {
            match p.target_cell() {
                None => {
                    path.push(PathNode {
                        part: p,
                        trace: t,
                        target: None,
                        chosen: u32::MAX,
                    });
                    return Ok(path);
                }
                Some(s) => {
                    let v = *p.cell(s).iter().min().expect("nonempty cell");
                    let (q, tq) = self.child(&p, v, path.len() + 1)?;
                    path.push(PathNode {
                        part: p,
                        trace: t,
                        target: Some(s),
                        chosen: v,
                    });
                    p = q;
                    t = tq;
                }
            }
        }
    }

    /// Depth-first search below `p` (already matching `path[depth]`) for a
    /// leaf whose map from the first leaf passes `accept`.
    fn descend(
        &mut self,
        path: &[PathNode],
        depth: usize,
        p: Partition,
        accept: &mut dyn FnMut(&Perm) -> bool,
    ) -> Result<Option<Perm>, AutError> {
        let node = &path[depth];
        if p.is_discrete() {
            let map = node.part.map_to(&p);
            return Ok(accept(&map).then_some(map));
        }
        let s = match p.target_cell() {
            Some(s) if Some(s) == node.target => s,
            _ => return Ok(None),
        };
        for u in p.sorted_cell(s) {
            let (q, t) = self.child(&p, u, depth + 1)?;
            let next = &path[depth + 1];
            if t == next.trace && q.cells == next.part.cells {
                if let Some(found) = self.descend(path, depth + 1, q, accept)? {
                    return Ok(Some(found));
                }
            }
        }
        Ok(None)
    }

    /// Explores the child of `path[level]` obtained by individualizing `w`.
    fn explore(&mut self, path: &[PathNode], level: usize, w: u32) -> Result<Option<Perm>, AutError> {
        let (q, t) = self.child(&path[level].part, w, level + 1)?;
        let next = &path[level + 1];
        if t != next.trace || q.cells != next.part.cells {
            return Ok(None);
        }
        let d = self.d;
        self.descend(path, level + 1, q, &mut |m: &Perm| d.is_automorphism(m))
    }

    fn run(&mut self, initial: Partition, stop_at_first: bool) -> Result<RunOutput, AutError> {
        let n = self.d.n_vertices();
        let path = self.first_path(initial)?;
        let levels = path.len() - 1;
        let mut uf = UnionFind::new(n);
        let mut gens = Vec::new();
        let mut orbit_sizes = vec![1; levels];
        for level in (0..levels).rev() {
            let s = path[level].target.expect("inner node has a target");
            let v = path[level].chosen;
            let mut failed: Vec<u32> = Vec::new();
            for w in path[level].part.sorted_cell(s) {
                if w == v || uf.same(w, v) || failed.iter().any(|&f| uf.same(f, w)) {
                    continue;
                }
                match self.explore(&path, level, w)? {
                    Some(g) => {
                        for x in 0..n {
                            uf.union(x as u32, g.apply(x) as u32);
                        }
                        gens.push(g);
                        if stop_at_first {
                            return Ok((gens, Vec::new(), Vec::new()));
                        }
                    }
                    None => failed.push(w),
                }
            }
            orbit_sizes[level] = uf.class_size(v);
        }
        let base = path[..levels].iter().map(|node| node.chosen).collect();
        Ok((gens, orbit_sizes, base))
    }

    /// Generators and order of the automorphism group, from a uniform start.
    pub fn automorphism_group(&mut self) -> Result<AutGroupResult, AutError> {
        let n = self.d.n_vertices();
        let (generators, orbit_sizes, base) = self.run(Partition::unit(n), false)?;
        let order = orbit_sizes
            .iter()
            .fold(BigUint::from(1u32), |acc, &s| acc * BigUint::from(s));
        debug_assert_eq!(order, StabilizerChain::from_generators(n, &generators).order());
        Ok(AutGroupResult {
            generators,
            order,
            base: base.into_iter().map(|v| v as usize).collect(),
        })
    }

    /// Some nontrivial automorphism, if one exists.
    pub fn nontrivial_automorphism(&mut self) -> Result<Option<Perm>, AutError> {
        let n = self.d.n_vertices();
        let (mut gens, _, _) = self.run(Partition::unit(n), true)?;
        Ok(gens.pop())
    }
}

/// `Aut(d)` with default options.
pub fn automorphism_group(d: &Digraph) -> Result<AutGroupResult, AutError> {
    AutSolver::new(d, AutOptions::default()).automorphism_group()
}

/// Whether `d` has an automorphism other than the identity.
pub fn has_nontrivial_automorphism(d: &Digraph, options: AutOptions) -> Result<bool, AutError> {
    Ok(AutSolver::new(d, options).nontrivial_automorphism()?.is_some())
}

/// Exact order of the group generated by `gens` on `0..degree`.
pub fn group_order_from_generators(gens: &[Perm], degree: usize) -> BigUint {
    crate::schreier::group_order_from_generators(gens, degree)
}

/// Decides isomorphism by searching `d2` for a leaf matching the first path of `d1`.
pub fn are_isomorphic(d1: &Digraph, d2: &Digraph) -> Result<bool, AutError> {
    are_isomorphic_with(d1, d2, AutOptions::default()).map(|m| m.is_some())
}

/// An isomorphism `d1 -> d2`, if any.
pub fn are_isomorphic_with(d1: &Digraph, d2: &Digraph, options: AutOptions) -> Result<Option<Perm>, AutError> {
    let n = d1.n_vertices();
    if n != d2.n_vertices() || d1.n_arcs() != d2.n_arcs() {
        return Ok(None);
    }
    let degrees = |d: &Digraph| {
        let mut v: Vec<(usize, usize)> = (0..d.n_vertices()).map(|v| (d.out_degree(v), d.in_degree(v))).collect();
        v.sort_unstable();
        v
    };
    if degrees(d1) != degrees(d2) {
        return Ok(None);
    }
    if n == 0 {
        return Ok(Some(Perm::identity(0)));
    }
    let mut first = AutSolver::new(d1, options);
    let path = first.first_path(Partition::unit(n))?;
    let mut other = AutSolver::new(d2, options);
    other.nodes = first.nodes;
    let (root, t) = other.root(Partition::unit(n))?;
    if t != path[0].trace || root.cells != path[0].part.cells {
        return Ok(None);
    }
    let mut accept = |m: &Perm| d1.is_isomorphism_to(d2, m);
    other.descend(&path, 0, root, &mut accept)
}

// ---------------------------------------------------------------------------
// Representations

/// Outcome of testing `Aut(Γ) = R(G)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepVerdict {
    pub is_representation: bool,
    #[serde(serialize_with = "serialize_biguint")]
    pub aut_order: BigUint,
    pub witness_extra_automorphism: Option<Perm>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Probe {
    Representation,
    Extra(Perm),
    Inconclusive,
}

/// One individualization of `vertex(0, 0)` and one per other part.
///
/// If individualizing `vertex(0, 0)` already yields a discrete partition the
/// stabilizer is trivial, so `Aut = R(G)` iff no vertex `vertex(j, 0)` with
/// `j > 0` lies in the orbit of `vertex(0, 0)`; each such test is a single
/// leaf comparison.
pub(crate) fn probe_representation(pd: &PartitionedDigraph, options: AutOptions) -> Result<Probe, AutError> {
    let d = &pd.digraph;
    let mut solver = AutSolver::new(d, options);
    let (root, t0) = solver.root(Partition::unit(d.n_vertices()))?;
    let _ = t0;
    if root.is_discrete() {
        return Ok(Probe::Representation);
    }
    let (anchor, t1) = solver.child(&root, 0, 1)?;
    if !anchor.is_discrete() {
        return Ok(Probe::Inconclusive);
    }
    for part in 1..pd.m {
        let u = pd.vertex(part, 0) as u32;
        if root.cell_of[u as usize] != root.cell_of[0] {
            continue;
        }
        let (q, t) = solver.child(&root, u, 1)?;
        if t != t1 || !q.is_discrete() {
            continue;
        }
        let map = anchor.map_to(&q);
        if d.is_automorphism(&map) {
            return Ok(Probe::Extra(map));
        }
    }
    Ok(Probe::Representation)
}

/// Whether `Aut(Γ) = R(G)`, without computing the full group when avoidable.
pub fn is_representation(pd: &PartitionedDigraph, options: AutOptions) -> Result<bool, AutError> {
    match probe_representation(pd, options)? {
        Probe::Representation => Ok(true),
        Probe::Extra(_) => Ok(false),
        Probe::Inconclusive => {
            let order = AutSolver::new(&pd.digraph, options).automorphism_group()?.order;
            Ok(order == BigUint::from(pd.group_order))
        }
    }
}

fn is_right_translation(pd: &PartitionedDigraph, g: &GroupTable, p: &Perm) -> bool {
    let n = pd.group_order;
    let image = p.apply(0);
    if image >= n {
        return false;
    }
    (0..pd.m * n).all(|v| p.apply(v) == (v / n) * n + g.mul(v % n, image))
}

/// Full verdict on `Aut(Γ) = R(G)` including the exact automorphism group order.
pub fn is_semiregular_rep(pd: &PartitionedDigraph, g: &GroupTable) -> Result<RepVerdict, AutError> {
    is_semiregular_rep_with(pd, g, AutOptions::default())
}

pub fn is_semiregular_rep_with(
    pd: &PartitionedDigraph,
    g: &GroupTable,
    options: AutOptions,
) -> Result<RepVerdict, AutError> {
    let probe = probe_representation(pd, options)?;
    if probe == Probe::Representation {
        return Ok(RepVerdict {
            is_representation: true,
            aut_order: BigUint::from(pd.group_order),
            witness_extra_automorphism: None,
        });
    }
    let full = AutSolver::new(&pd.digraph, options).automorphism_group()?;
    let is_representation = full.order == BigUint::from(pd.group_order);
    let witness = match probe {
        Probe::Extra(p) => Some(p),
        _ if is_representation => None,
        _ => full
            .generators
            .iter()
            .find(|p| !is_right_translation(pd, g, p))
            .cloned(),
    };
    Ok(RepVerdict {
        is_representation,
        aut_order: full.order,
        witness_extra_automorphism: witness,
    })
}

// ---------------------------------------------------------------------------
// Oracle

/// Every automorphism of `d`, by backtracking over partial assignments.
pub fn brute_force_automorphisms(d: &Digraph) -> Result<Vec<Perm>, AutError> {
    let n = d.n_vertices();
    if n > BRUTE_FORCE_MAX_VERTICES {
        return Err(AutError::TooLarge {
            n,
            max: BRUTE_FORCE_MAX_VERTICES,
        });
    }
    fn extend(d: &Digraph, images: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Perm>) {
        let n = d.n_vertices();
        let v = images.len();
        if v == n {
            out.push(Perm::from_images(images.clone()).expect("assignment is a bijection"));
            return;
        }
        for img in 0..n {
            if used[img] {
                continue;
            }
            let consistent = d.has_arc(v, v) == d.has_arc(img, img)
                && (0..v).all(|u| {
                    d.has_arc(u, v) == d.has_arc(images[u], img) && d.has_arc(v, u) == d.has_arc(img, images[u])
                });
            if consistent {
                used[img] = true;
                images.push(img);
                extend(d, images, used, out);
                images.pop();
                used[img] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(d, &mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    Ok(out)
}
