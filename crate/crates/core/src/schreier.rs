//! Deterministic Schreier–Sims with the fixed base `0, 1, ..., n-1`.
//!
//! Uses Knuth's incremental formulation: level `i` stores coset
//! representatives for the orbit of point `i` under the pointwise
//! stabilizer of `0..i`, and residues of Schreier generators are pushed one
//! level down.

use num_bigint::BigUint;

use crate::perm::Perm;

#[derive(Debug, Clone)]
struct Level {
    gens: Vec<Perm>,
    // reps[x] maps the base point to x
    reps: Vec<Option<Perm>>,
    reps_inv: Vec<Option<Perm>>,
    orbit: Vec<usize>,
}

impl Level {
    fn new(point: usize, n: usize) -> Self {
        let mut reps = vec![None; n];
        let mut reps_inv = vec![None; n];
        reps[point] = Some(Perm::identity(n));
        reps_inv[point] = Some(Perm::identity(n));
        Level {
            gens: Vec::new(),
            reps,
            reps_inv,
            orbit: vec![point],
        }
    }
}

/// Base and strong generating set of a permutation group of degree `n`.
#[derive(Debug, Clone)]
pub struct StabilizerChain {
    n: usize,
    levels: Vec<Level>,
}

impl StabilizerChain {
    pub fn new(degree: usize) -> Self {
        StabilizerChain {
            n: degree,
            levels: Vec::new(),
        }
    }

    pub fn from_generators(degree: usize, gens: &[Perm]) -> Self {
        let mut chain = StabilizerChain::new(degree);
        for g in gens {
            chain.insert(&g.extend_to(degree));
        }
        chain
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// Adds a generator to the group.
    pub fn insert(&mut self, g: &Perm) {
        assert_eq!(g.degree(), self.n, "generator degree mismatch");
        self.add(0, g.clone());
    }

    pub fn contains(&self, g: &Perm) -> bool {
        g.degree() == self.n && self.sift(0, g.clone())
    }

    /// Exact group order: the product of the basic orbit lengths.
    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    /// Base points with a nontrivial basic orbit.
    pub fn base(&self) -> Vec<usize> {
        (0..self.levels.len())
            .filter(|&i| self.levels[i].orbit.len() > 1)
            .collect()
    }

    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.base().iter().map(|&i| self.levels[i].orbit.len()).collect()
    }

    fn ensure_level(&mut self, i: usize) {
        while self.levels.len() <= i {
            let point = self.levels.len();
            self.levels.push(Level::new(point, self.n));
        }
    }

    // g fixes 0..start; true iff g lies in the group stored at levels >= start
    fn sift(&self, start: usize, mut g: Perm) -> bool {
        for i in start..self.n {
            if g.is_identity() {
                return true;
            }
            if i >= self.levels.len() {
                return false;
            }
            let x = g.apply(i);
            match &self.levels[i].reps_inv[x] {
                Some(inv) => g = g.then(inv),
                None => return false,
            }
        }
        g.is_identity()
    }

    fn add(&mut self, i: usize, g: Perm) {
        if self.sift(i, g.clone()) {
            return;
        }
        self.ensure_level(i);
        self.levels[i].gens.push(g.clone());
        let orbit = self.levels[i].orbit.clone();
        for x in orbit {
            let rep = self.levels[i].reps[x].clone().expect("orbit point has a representative");
            self.extend(i, rep.then(&g));
        }
    }

    fn extend(&mut self, i: usize, t: Perm) {
        let mut stack = vec![t];
        while let Some(t) = stack.pop() {
            let y = t.apply(i);
            match &self.levels[i].reps_inv[y] {
                None => {
                    let level = &mut self.levels[i];
                    level.reps_inv[y] = Some(t.inverse());
                    level.orbit.push(y);
                    stack.extend(level.gens.iter().map(|s| t.then(s)));
                    level.reps[y] = Some(t);
                }
                Some(inv) => {
                    let residue = t.then(inv);
                    if !residue.is_identity() {
                        self.add(i + 1, residue);
                    }
                }
            }
        }
    }
}

/// Order of the group generated by `gens` acting on `0..degree`.
pub fn group_order_from_generators(gens: &[Perm], degree: usize) -> BigUint {
    StabilizerChain::from_generators(degree, gens).order()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Perm {
        Perm::parse_cycles(s, n).unwrap()
    }

    #[test]
    fn small_orders() {
        assert_eq!(group_order_from_generators(&[Perm::identity(4)], 4), 1u32.into());
        assert_eq!(group_order_from_generators(&[], 4), 1u32.into());
        assert_eq!(group_order_from_generators(&[p("(0 1 2 3 4)", 5)], 5), 5u32.into());
        assert_eq!(group_order_from_generators(&[p("(0 1 2)", 3), p("(0 1)", 3)], 3), 6u32.into());
    }

    #[test]
    fn symmetric_and_alternating() {
        let n = 7;
        let cycle = p("(0 1 2 3 4 5 6)", n);
        let sym = group_order_from_generators(&[cycle.clone(), p("(0 1)", n)], n);
        assert_eq!(sym, 5040u32.into());
        let alt = group_order_from_generators(&[p("(0 1 2)", n), p("(2 3 4 5 6)", n), p("(0 1 2 3 4)", n)], n);
        assert_eq!(alt, 2520u32.into());
    }

    #[test]
    fn wreath_product() {
        // S4 wr S2 on 8 points
        let a = p("(0 1 2 3)", 8);
        let b = p("(0 1)", 8);
        let c = p("(0 4)(1 5)(2 6)(3 7)", 8);
        let chain = StabilizerChain::from_generators(8, &[a.clone(), b.clone(), c.clone()]);
        assert_eq!(chain.order(), 1152u32.into());
        assert!(chain.contains(&a.then(&c).then(&b)));
        assert!(!chain.contains(&p("(0 4)", 8)));
    }

    #[test]
    fn membership_of_products() {
        let gens = [p("(0 1 2 3)", 6), p("(4 5)", 6)];
        let chain = StabilizerChain::from_generators(6, &gens);
        assert_eq!(chain.order(), 8u32.into());
        assert!(chain.contains(&gens[0].then(&gens[1]).then(&gens[0])));
        assert!(!chain.contains(&p("(0 2)", 6)));
        assert_eq!(chain.base(), vec![0, 4]);
    }
}
