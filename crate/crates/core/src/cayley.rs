//! m-Cayley digraphs `Cay(G, T_{i,j})`.
//!
//! Vertex `(i, g)` (element `g` in part `i`) is numbered `i * |G| + g`.
//! For `t` in `T_{i,j}` there is an arc from `(i, g)` to `(j, t * g)`: the
//! connection element multiplies on the LEFT. Right multiplication
//! `R(h): (i, g) -> (i, g * h)` therefore commutes with every arc and is an
//! automorphism.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digraph::Digraph;
use crate::group::{Elem, GroupError, GroupTable, Word};
use crate::perm::Perm;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CayleyError {
    #[error("element {elem} out of range for a group of order {order}")]
    IndexOutOfRange { elem: usize, order: usize },
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("duplicate element {elem} in cell T[{i}][{j}]")]
    DuplicateElement { i: usize, j: usize, elem: usize },
    #[error("connection sets need an m x m grid with m >= 1, got {0}")]
    BadDimensions(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("malformed connection sets: {0}")]
    Json(String),
}

/// An `m x m` grid of sorted, duplicate-free element lists `T_{i,j}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConnectionSets {
    m: usize,
    cells: Vec<Vec<Elem>>,
}

impl ConnectionSets {
    pub fn empty(m: usize) -> Self {
        ConnectionSets {
            m,
            cells: vec![Vec::new(); m * m],
        }
    }

    /// Builds from a row-major grid of cells. Cells are sorted; duplicate
    /// elements inside a cell are rejected.
    pub fn from_cells(cells: Vec<Vec<Vec<Elem>>>) -> Result<Self, CayleyError> {
        let m = cells.len();
        if m == 0 || cells.iter().any(|row| row.len() != m) {
            return Err(CayleyError::BadDimensions(format!("{m} rows")));
        }
        let mut out = ConnectionSets::empty(m);
        for (i, row) in cells.into_iter().enumerate() {
            for (j, cell) in row.into_iter().enumerate() {
                out.set(i, j, cell)?;
            }
        }
        Ok(out)
    }

    pub fn set(&mut self, i: usize, j: usize, mut cell: Vec<Elem>) -> Result<(), CayleyError> {
        cell.sort_unstable();
        if let Some(w) = cell.windows(2).find(|w| w[0] == w[1]) {
            return Err(CayleyError::DuplicateElement { i, j, elem: w[0] });
        }
        self.cells[i * self.m + j] = cell;
        Ok(())
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn cell(&self, i: usize, j: usize) -> &[Elem] {
        &self.cells[i * self.m + j]
    }

    pub fn row_sum(&self, i: usize) -> usize {
        (0..self.m).map(|j| self.cell(i, j).len()).sum()
    }

    pub fn col_sum(&self, j: usize) -> usize {
        (0..self.m).map(|i| self.cell(i, j).len()).sum()
    }

    pub fn total_size(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    fn check_range(&self, order: usize) -> Result<(), CayleyError> {
        match self.cells.iter().flatten().find(|&&e| e >= order) {
            Some(&elem) => Err(CayleyError::IndexOutOfRange { elem, order }),
            None => Ok(()),
        }
    }

    /// Resolves a grid of generator words against `g`.
    pub fn from_words(g: &GroupTable, words: &[Vec<Vec<String>>]) -> Result<Self, CayleyError> {
        let cells = words
            .iter()
            .map(|row| {
                row.iter()
                    .map(|cell| {
                        cell.iter()
                            .map(|w| Ok(g.evaluate_word(&w.parse::<Word>()?)?))
                            .collect::<Result<Vec<_>, CayleyError>>()
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        ConnectionSets::from_cells(cells)
    }

    /// Sparse construction: `(i, j, words)` triples, all other cells empty.
    pub fn from_word_cells(g: &GroupTable, m: usize, cells: &[(usize, usize, &[&str])]) -> Result<Self, CayleyError> {
        let mut out = ConnectionSets::empty(m);
        for &(i, j, words) in cells {
            if i >= m || j >= m {
                return Err(CayleyError::BadDimensions(format!("cell ({i}, {j}) with m = {m}")));
            }
            let elems = words
                .iter()
                .map(|w| g.evaluate(w))
                .collect::<Result<Vec<_>, _>>()?;
            out.set(i, j, elems)?;
        }
        Ok(out)
    }

    /// Cells rendered with the group's BFS words.
    pub fn to_words(&self, g: &GroupTable) -> Vec<Vec<Vec<String>>> {
        (0..self.m)
            .map(|i| {
                (0..self.m)
                    .map(|j| self.cell(i, j).iter().map(|&e| g.words()[e].clone()).collect())
                    .collect()
            })
            .collect()
    }

    pub fn to_json(&self, g: &GroupTable) -> ConnectionSetsJson {
        ConnectionSetsJson {
            m: self.m,
            sets: self.to_words(g),
        }
    }

    pub fn from_json(g: &GroupTable, json: &ConnectionSetsJson) -> Result<Self, CayleyError> {
        if json.sets.len() != json.m {
            return Err(CayleyError::BadDimensions(format!(
                "m = {} but {} rows",
                json.m,
                json.sets.len()
            )));
        }
        ConnectionSets::from_words(g, &json.sets)
    }

    pub fn parse_json(g: &GroupTable, text: &str) -> Result<Self, CayleyError> {
        let json: ConnectionSetsJson =
            serde_json::from_str(text).map_err(|e| CayleyError::Json(e.to_string()))?;
        ConnectionSets::from_json(g, &json)
    }
}

/// `{"m": int, "sets": [[["word", ...], ...], ...]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectionSetsJson {
    pub m: usize,
    pub sets: Vec<Vec<Vec<String>>>,
}

/// An m-Cayley digraph together with its part structure.
#[derive(Debug, Clone)]
pub struct PartitionedDigraph {
    pub digraph: Digraph,
    pub group_order: usize,
    pub m: usize,
}

impl PartitionedDigraph {
    #[inline]
    pub fn vertex(&self, part: usize, elem: Elem) -> usize {
        part * self.group_order + elem
    }

    pub fn part_of(&self, v: usize) -> usize {
        v / self.group_order
    }

    pub fn part_range(&self, part: usize) -> std::ops::Range<usize> {
        part * self.group_order..(part + 1) * self.group_order
    }
}

/// Builds `Cay(G, T_{i,j})`.
pub fn build_cayley(g: &GroupTable, conn: &ConnectionSets) -> Result<PartitionedDigraph, CayleyError> {
    let n = g.order();
    conn.check_range(n)?;
    let m = conn.m();
    let mut out_off = Vec::with_capacity(m * n + 1);
    let mut out = Vec::with_capacity(n * conn.total_size());
    out_off.push(0);
    for i in 0..m {
        for h in 0..n {
            let start = out.len();
            for j in 0..m {
                out.extend(conn.cell(i, j).iter().map(|&t| j * n + g.mul(t, h)));
            }
            out[start..].sort_unstable();
            out_off.push(out.len());
        }
    }
    Ok(PartitionedDigraph {
        digraph: Digraph::from_sorted_csr(out_off, out),
        group_order: n,
        m,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub oriented: bool,
    pub partite: bool,
    pub regular: bool,
    pub connected: bool,
}

/// `T_{i,j}` and `T_{j,i}^{-1}` are disjoint for every `i, j` (including `i == j`).
pub fn is_oriented_sets(g: &GroupTable, conn: &ConnectionSets) -> bool {
    let m = conn.m();
    (0..m).all(|i| {
        (i..m).all(|j| {
            conn.cell(i, j)
                .iter()
                .all(|&t| conn.cell(j, i).binary_search(&g.inv(t)).is_err())
        })
    })
}

pub fn validate_sets(
    g: &GroupTable,
    conn: &ConnectionSets,
    valency: usize,
) -> Result<ValidationReport, CayleyError> {
    conn.check_range(g.order())?;
    let m = conn.m();
    let partite = (0..m).all(|i| conn.cell(i, i).is_empty());
    let regular = (0..m).all(|i| conn.row_sum(i) == valency && conn.col_sum(i) == valency);
    let connected = build_cayley(g, conn)?.digraph.is_weakly_connected();
    Ok(ValidationReport {
        oriented: is_oriented_sets(g, conn),
        partite,
        regular,
        connected,
    })
}

/// `R(h)` for every `h`, in element order, as permutations of the `m * |G|` vertices.
pub fn right_translations(g: &GroupTable, m: usize) -> Vec<Perm> {
    let n = g.order();
    (0..n)
        .map(|h| {
            let images = (0..m * n).map(|v| (v / n) * n + g.mul(v % n, h)).collect();
            Perm::from_images(images).expect("right translation is a bijection")
        })
        .collect()
}

/// Out-levels `Γ^{+0}(v), ..., Γ^{+radius}(v)`: each level is the union of
/// the out-neighborhoods of the previous one (levels may overlap).
pub fn out_ball(d: &Digraph, v: usize, radius: usize) -> Result<Vec<Vec<usize>>, CayleyError> {
    let n = d.n_vertices();
    if v >= n {
        return Err(CayleyError::VertexOutOfRange { vertex: v, n });
    }
    let mut levels = vec![vec![v]];
    let mut mark = vec![false; n];
    for _ in 0..radius {
        let prev = levels.last().expect("nonempty");
        let mut next = Vec::new();
        for &u in prev {
            for &w in d.out_neighbors(u) {
                if !mark[w] {
                    mark[w] = true;
                    next.push(w);
                }
            }
        }
        for &w in &next {
            mark[w] = false;
        }
        next.sort_unstable();
        levels.push(next);
    }
    Ok(levels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{named_group, GroupSpec};

    fn c(n: usize) -> GroupTable {
        named_group(&GroupSpec::Cyclic(n)).unwrap()
    }

    fn two_part(g: &GroupTable, t01: &[&str], t10: &[&str]) -> ConnectionSets {
        ConnectionSets::from_word_cells(g, 2, &[(0, 1, t01), (1, 0, t10)]).unwrap()
    }

    #[test]
    fn seven_vertex_pair_has_42_arcs() {
        let g = c(7);
        let conn = two_part(&g, &["1", "x", "x^2"], &["x", "x^3", "x^4"]);
        let pd = build_cayley(&g, &conn).unwrap();
        assert_eq!(pd.digraph.n_vertices(), 14);
        assert_eq!(pd.digraph.n_arcs(), 42);
        let r = validate_sets(&g, &conn, 3).unwrap();
        assert!(r.oriented && r.partite && r.regular);
    }

    #[test]
    fn empty_cells_give_no_arcs() {
        let g = c(5);
        let pd = build_cayley(&g, &ConnectionSets::empty(3)).unwrap();
        assert_eq!(pd.digraph.n_vertices(), 15);
        assert_eq!(pd.digraph.n_arcs(), 0);
    }

    #[test]
    fn three_part_cyclic_four_is_three_regular() {
        let g = c(4);
        let conn = ConnectionSets::from_word_cells(
            &g,
            3,
            &[
                (0, 1, &["1", "x"]),
                (0, 2, &["1"]),
                (1, 0, &["x^2"]),
                (1, 2, &["1", "x"]),
                (2, 0, &["x", "x^2"]),
                (2, 1, &["x"]),
            ],
        )
        .unwrap();
        let pd = build_cayley(&g, &conn).unwrap();
        assert_eq!(pd.digraph.n_vertices(), 12);
        assert!(pd.digraph.is_regular(3));
    }

    #[test]
    fn overlapping_inverse_is_not_oriented() {
        let g = c(5);
        let conn = two_part(&g, &["1", "x", "x^2"], &["x", "x^2", "x^3"]);
        assert!(!validate_sets(&g, &conn, 3).unwrap().oriented);
    }

    #[test]
    fn diagonal_cell_breaks_partiteness() {
        let g = c(7);
        let conn = ConnectionSets::from_word_cells(&g, 2, &[(0, 0, &["x"]), (0, 1, &["1"])]).unwrap();
        assert!(!validate_sets(&g, &conn, 3).unwrap().partite);
    }

    #[test]
    fn duplicates_and_range_errors() {
        let mut conn = ConnectionSets::empty(2);
        assert!(matches!(conn.set(0, 1, vec![1, 1]), Err(CayleyError::DuplicateElement { .. })));
        conn.set(0, 1, vec![9]).unwrap();
        assert!(matches!(build_cayley(&c(3), &conn), Err(CayleyError::IndexOutOfRange { .. })));
    }

    #[test]
    fn translations_are_semiregular_with_parts_as_orbits() {
        let g = named_group(&GroupSpec::Dihedral(8)).unwrap();
        let rs = right_translations(&g, 3);
        assert!(rs[0].is_identity());
        let orbit: std::collections::BTreeSet<usize> = rs.iter().map(|r| r.apply(0)).collect();
        assert_eq!(orbit, (0..8).collect());
        for r in &rs[1..] {
            assert!((0..24).all(|v| r.apply(v) != v));
        }
    }

    #[test]
    fn out_ball_levels() {
        let tri = Digraph::from_arcs(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(out_ball(&tri, 0, 0).unwrap(), vec![vec![0]]);
        assert_eq!(out_ball(&tri, 0, 2).unwrap(), vec![vec![0], vec![1], vec![2]]);
        assert!(out_ball(&tri, 5, 1).is_err());

        let g = c(10);
        let conn = two_part(&g, &["1", "x", "x^2"], &["x", "x^2", "x^4"]);
        let pd = build_cayley(&g, &conn).unwrap();
        let levels = out_ball(&pd.digraph, pd.vertex(0, 0), 2).unwrap();
        let expected: Vec<usize> = ["x", "x^2", "x^3", "x^4", "x^5", "x^6"]
            .iter()
            .map(|w| pd.vertex(0, g.evaluate(w).unwrap()))
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        assert_eq!(levels[2], expected);
    }

    #[test]
    fn matches_arc_rule_and_translations_commute() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(5);
        let specs = [GroupSpec::Cyclic(6), GroupSpec::Dihedral(8), GroupSpec::Quaternion8, GroupSpec::Alternating4];
        for trial in 0..100 {
            let g = named_group(&specs[trial % specs.len()]).unwrap();
            let m = rng.gen_range(1..=3);
            let mut conn = ConnectionSets::empty(m);
            for i in 0..m {
                for j in 0..m {
                    let cell: Vec<usize> = (0..g.order()).filter(|_| rng.gen_bool(0.2)).collect();
                    conn.set(i, j, cell).unwrap();
                }
            }
            let pd = build_cayley(&g, &conn).unwrap();
            let n = g.order();
            let mut arcs = Vec::new();
            for i in 0..m {
                for j in 0..m {
                    for &t in conn.cell(i, j) {
                        arcs.extend((0..n).map(|h| (i * n + h, j * n + g.mul(t, h))));
                    }
                }
            }
            assert_eq!(pd.digraph, Digraph::from_arcs(m * n, arcs).unwrap());
            assert_eq!(pd.digraph.n_arcs(), n * conn.total_size());
            for r in right_translations(&g, m) {
                assert!(pd.digraph.is_automorphism(&r));
            }
            let report = validate_sets(&g, &conn, 3).unwrap();
            assert_eq!(report.oriented, pd.digraph.is_oriented());
            let inside = pd.digraph.arcs().any(|(u, v)| pd.part_of(u) == pd.part_of(v));
            assert_eq!(report.partite, !inside);
            assert_eq!(report.regular, pd.digraph.is_regular(3));
        }
    }

    #[test]
    fn json_round_trip() {
        let g = named_group(&GroupSpec::Dihedral(8)).unwrap();
        let conn = two_part(&g, &["1", "x", "xy"], &["x", "y", "x^3y"]);
        let text = serde_json::to_string(&conn.to_json(&g)).unwrap();
        assert_eq!(ConnectionSets::parse_json(&g, &text).unwrap(), conn);
        assert!(ConnectionSets::parse_json(&g, r#"{"m": 2, "sets": [[[]]]}"#).is_err());
    }
}
