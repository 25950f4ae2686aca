//! Simple digraphs in compressed adjacency form.

use thiserror::Error;

use crate::perm::Perm;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DigraphError {
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("duplicate arc {0} -> {1}")]
    DuplicateArc(usize, usize),
}

/// Vertex set `0..n` with sorted out- and in-adjacency lists.
///
/// Loops are representable (see [`Digraph::has_loops`]); parallel arcs are not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    out_off: Vec<usize>,
    out: Vec<usize>,
    in_off: Vec<usize>,
    inn: Vec<usize>,
}

fn csr(n: usize, arcs: &[(usize, usize)]) -> (Vec<usize>, Vec<usize>) {
    // `arcs` sorted by source, then target
    let mut off = vec![0; n + 1];
    for &(u, _) in arcs {
        off[u + 1] += 1;
    }
    for v in 0..n {
        off[v + 1] += off[v];
    }
    (off, arcs.iter().map(|&(_, v)| v).collect())
}

impl Digraph {
    pub fn empty(n: usize) -> Self {
        Digraph {
            n,
            out_off: vec![0; n + 1],
            out: Vec::new(),
            in_off: vec![0; n + 1],
            inn: Vec::new(),
        }
    }

    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<Self, DigraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut fwd: Vec<(usize, usize)> = arcs.into_iter().collect();
        for &(u, v) in &fwd {
            for w in [u, v] {
                if w >= n {
                    return Err(DigraphError::VertexOutOfRange { vertex: w, n });
                }
            }
        }
        fwd.sort_unstable();
        if let Some(w) = fwd.windows(2).find(|w| w[0] == w[1]) {
            return Err(DigraphError::DuplicateArc(w[0].0, w[0].1));
        }
        let mut back: Vec<(usize, usize)> = fwd.iter().map(|&(u, v)| (v, u)).collect();
        back.sort_unstable();
        let (out_off, out) = csr(n, &fwd);
        let (in_off, inn) = csr(n, &back);
        Ok(Digraph {
            n,
            out_off,
            out,
            in_off,
            inn,
        })
    }

    /// Builds from compressed out-lists that are already sorted and duplicate-free.
    pub(crate) fn from_sorted_csr(out_off: Vec<usize>, out: Vec<usize>) -> Self {
        let n = out_off.len() - 1;
        let mut in_off = vec![0; n + 1];
        for &v in &out {
            in_off[v + 1] += 1;
        }
        for v in 0..n {
            in_off[v + 1] += in_off[v];
        }
        let mut fill = in_off.clone();
        let mut inn = vec![0; out.len()];
        for u in 0..n {
            for &v in &out[out_off[u]..out_off[u + 1]] {
                inn[fill[v]] = u;
                fill[v] += 1;
            }
        }
        Digraph {
            n,
            out_off,
            out,
            in_off,
            inn,
        }
    }

    /// Builds from per-vertex out-neighbor lists.
    pub fn from_out_lists(lists: &[Vec<usize>]) -> Result<Self, DigraphError> {
        let n = lists.len();
        Digraph::from_arcs(
            n,
            lists
                .iter()
                .enumerate()
                .flat_map(|(u, vs)| vs.iter().map(move |&v| (u, v))),
        )
    }

    #[inline]
    pub fn n_vertices(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn n_arcs(&self) -> usize {
        self.out.len()
    }

    #[inline]
    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out[self.out_off[v]..self.out_off[v + 1]]
    }

    #[inline]
    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.inn[self.in_off[v]..self.in_off[v + 1]]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_off[v + 1] - self.out_off[v]
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_off[v + 1] - self.in_off[v]
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out_neighbors(u).binary_search(&v).is_ok()
    }

    /// Arcs in `(source, target)` lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.out_neighbors(u).iter().map(move |&v| (u, v)))
    }

    pub fn has_loops(&self) -> bool {
        (0..self.n).any(|v| self.has_arc(v, v))
    }

    pub fn has_digons(&self) -> bool {
        self.arcs().any(|(u, v)| u != v && self.has_arc(v, u))
    }

    /// No loops and at most one arc between any two vertices.
    pub fn is_oriented(&self) -> bool {
        !self.has_loops() && !self.has_digons()
    }

    pub fn is_regular(&self, k: usize) -> bool {
        (0..self.n).all(|v| self.out_degree(v) == k && self.in_degree(v) == k)
    }

    pub fn is_weakly_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in self.out_neighbors(u).iter().chain(self.in_neighbors(u)) {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }

    /// Whether `p` maps the arc set onto itself.
    pub fn is_automorphism(&self, p: &Perm) -> bool {
        p.degree() == self.n && self.arcs().all(|(u, v)| self.has_arc(p.apply(u), p.apply(v)))
    }

    /// Whether `p` maps the arcs of `self` exactly onto the arcs of `other`.
    pub fn is_isomorphism_to(&self, other: &Digraph, p: &Perm) -> bool {
        p.degree() == self.n
            && other.n == self.n
            && other.n_arcs() == self.n_arcs()
            && self.arcs().all(|(u, v)| other.has_arc(p.apply(u), p.apply(v)))
    }

    /// The digraph with every vertex `v` renamed to `p(v)`.
    pub fn relabel(&self, p: &Perm) -> Digraph {
        Digraph::from_arcs(self.n, self.arcs().map(|(u, v)| (p.apply(u), p.apply(v))))
            .expect("relabeling preserves simplicity")
    }

    /// Disjoint union; vertices of `other` are shifted by `self.n_vertices()`.
    pub fn disjoint_union(&self, other: &Digraph) -> Digraph {
        let shift = self.n;
        Digraph::from_arcs(
            self.n + other.n,
            self.arcs()
                .chain(other.arcs().map(|(u, v)| (u + shift, v + shift))),
        )
        .expect("union of simple digraphs is simple")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjacency_mirrors() {
        let d = Digraph::from_arcs(4, [(0, 1), (1, 2), (2, 0), (3, 0), (0, 3)]).unwrap();
        for u in 0..4 {
            for &v in d.out_neighbors(u) {
                assert!(d.in_neighbors(v).contains(&u));
            }
            for &v in d.in_neighbors(u) {
                assert!(d.out_neighbors(v).contains(&u));
            }
        }
        assert_eq!(d.n_arcs(), 5);
        assert!(d.has_digons());
        assert!(!d.has_loops());
        assert!(d.is_weakly_connected());
    }

    #[test]
    fn rejects_duplicates_and_range() {
        assert_eq!(
            Digraph::from_arcs(2, [(0, 1), (0, 1)]),
            Err(DigraphError::DuplicateArc(0, 1))
        );
        assert!(Digraph::from_arcs(2, [(0, 2)]).is_err());
    }

    #[test]
    fn loops_are_flagged() {
        let d = Digraph::from_arcs(2, [(0, 0), (0, 1)]).unwrap();
        assert!(d.has_loops());
        assert!(!d.is_oriented());
    }

    #[test]
    fn cycle_rotation_is_automorphism() {
        let d = Digraph::from_arcs(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let rot: Perm = "(0 1 2)".parse().unwrap();
        let swap = Perm::parse_cycles("(0 1)", 3).unwrap();
        assert!(d.is_automorphism(&rot));
        assert!(!d.is_automorphism(&swap));
        assert_eq!(d.relabel(&rot), d);
    }
}
