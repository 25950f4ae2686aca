//! Finite groups as multiplication tables.
//!
//! Every group is realized concretely: a list of permutation generators is
//! closed by breadth-first search, and the closure is numbered in BFS word
//! order with the identity at index 0. Named groups carry the generator
//! labels of their standard presentations (`x`, `y`, and for the Heisenberg
//! group the derived element `z = [x, y]`), and each one is validated against
//! its presentation rather than derived from it.
//!
//! Dihedral groups are indexed by ORDER: `dihedral:8` is the symmetry group of
//! the square, with a rotation of order 4.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::{Perm, PermError};

pub type Elem = usize;

/// Default upper bound on the size of a permutation closure.
pub const DEFAULT_CLOSURE_CAP: usize = 100_000;

/// Largest order for which the full `n x n` table is materialized.
pub const MAX_TABLE_ORDER: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("empty generator list")]
    EmptyGeneratorList,
    #[error("closure exceeded the cap of {0} elements")]
    ClosureCapExceeded(usize),
    #[error("group of order {0} is too large for a multiplication table")]
    TableTooLarge(usize),
    #[error("generators act on different point sets ({0} vs {1})")]
    DegreeMismatch(usize, usize),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("group is not generated by two elements")]
    NotTwoGenerated,
    #[error("cannot parse word `{0}`")]
    WordSyntax(String),
    #[error("cannot parse group spec `{0}`")]
    SpecSyntax(String),
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// A group word: a sequence of `(generator label, exponent)` factors,
/// evaluated left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<(String, i64)>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn gen(label: &str, exp: i64) -> Self {
        Word(vec![(label.to_string(), exp)])
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|(l, e)| (l.clone(), -e)).collect())
    }

    fn pow(&self, exp: i64) -> Word {
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        let mut out = Vec::new();
        for _ in 0..exp.unsigned_abs() {
            out.extend(base.0.iter().cloned());
        }
        Word(out)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (label, exp) in &self.0 {
            match exp {
                1 => write!(f, "{label}")?,
                e => write!(f, "{label}^{e}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = GroupError;

    /// Accepts words like `x^3y`, `x^-1y^{-1}xy`, `(xy)^3`, `1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
        let mut pos = 0;
        let word = parse_word(&chars, &mut pos).ok_or_else(|| GroupError::WordSyntax(s.into()))?;
        if pos != chars.len() {
            return Err(GroupError::WordSyntax(s.into()));
        }
        Ok(word)
    }
}

fn parse_word(c: &[char], pos: &mut usize) -> Option<Word> {
    let mut out = Vec::new();
    while *pos < c.len() && c[*pos] != ')' {
        let atom = match c[*pos] {
            '(' => {
                *pos += 1;
                let inner = parse_word(c, pos)?;
                if c.get(*pos) != Some(&')') {
                    return None;
                }
                *pos += 1;
                inner
            }
            '1' | 'e' => {
                *pos += 1;
                Word::identity()
            }
            ch if ch.is_ascii_lowercase() => {
                *pos += 1;
                Word::gen(&ch.to_string(), 1)
            }
            _ => return None,
        };
        let exp = if c.get(*pos) == Some(&'^') {
            *pos += 1;
            parse_exponent(c, pos)?
        } else {
            1
        };
        match atom.0.as_slice() {
            [(label, 1)] => out.push((label.clone(), exp)),
            _ => out.extend(atom.pow(exp).0),
        }
    }
    Some(Word(out))
}

fn parse_exponent(c: &[char], pos: &mut usize) -> Option<i64> {
    let braced = c.get(*pos) == Some(&'{');
    if braced {
        *pos += 1;
    }
    let start = *pos;
    if c.get(*pos) == Some(&'-') {
        *pos += 1;
    }
    while c.get(*pos).is_some_and(|ch| ch.is_ascii_digit()) {
        *pos += 1;
    }
    let value: i64 = c[start..*pos].iter().collect::<String>().parse().ok()?;
    if braced {
        if c.get(*pos) != Some(&'}') {
            return None;
        }
        *pos += 1;
    }
    Some(value)
}

/// A labeled distinguished element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub label: String,
    pub element: Elem,
}

/// A finite group of order `n` as an `n x n` multiplication table.
///
/// Element 0 is the identity. Elements are numbered in BFS order over words
/// in the primary generators.
#[derive(Debug, Clone)]
pub struct GroupTable {
    order: usize,
    mult: Vec<u32>,
    inv: Vec<u32>,
    generators: Vec<Generator>,
    /// Number of leading entries of `generators` that generated the closure.
    primary: usize,
    words: Vec<String>,
    /// BFS tree: `parent[b] * generators[via[b]] == b` for `b > 0`.
    parent: Vec<u32>,
    via: Vec<u32>,
    name: Option<String>,
}

fn default_label(i: usize) -> String {
    const LABELS: [&str; 4] = ["x", "y", "z", "w"];
    match LABELS.get(i) {
        Some(l) => l.to_string(),
        None => ((b'a' + (i - LABELS.len()) as u8 % 26) as char).to_string(),
    }
}

/// Closes `gens` under composition with the default cap.
pub fn group_from_permutations(gens: &[Perm]) -> Result<GroupTable, GroupError> {
    group_from_permutations_capped(gens, DEFAULT_CLOSURE_CAP)
}

pub fn group_from_permutations_capped(gens: &[Perm], cap: usize) -> Result<GroupTable, GroupError> {
    let labels: Vec<String> = (0..gens.len()).map(default_label).collect();
    build_table(gens, &labels, cap)
}

fn build_table(gens: &[Perm], labels: &[String], cap: usize) -> Result<GroupTable, GroupError> {
    let first = gens.first().ok_or(GroupError::EmptyGeneratorList)?;
    let degree = first.degree();
    if let Some(bad) = gens.iter().find(|g| g.degree() != degree) {
        return Err(GroupError::DegreeMismatch(degree, bad.degree()));
    }

    let mut elements = vec![Perm::identity(degree)];
    let mut index: HashMap<Perm, usize> = HashMap::new();
    index.insert(elements[0].clone(), 0);
    let mut parent = vec![0u32];
    let mut via = vec![0u32];
    let mut word_factors: Vec<Vec<usize>> = vec![Vec::new()];
    let mut queue = VecDeque::from([0usize]);
    while let Some(e) = queue.pop_front() {
        for (gi, g) in gens.iter().enumerate() {
            let next = elements[e].then(g);
            if index.contains_key(&next) {
                continue;
            }
            if elements.len() >= cap {
                return Err(GroupError::ClosureCapExceeded(cap));
            }
            let id = elements.len();
            index.insert(next.clone(), id);
            elements.push(next);
            parent.push(e as u32);
            via.push(gi as u32);
            let mut w = word_factors[e].clone();
            w.push(gi);
            word_factors.push(w);
            queue.push_back(id);
        }
    }

    let n = elements.len();
    if n > MAX_TABLE_ORDER {
        return Err(GroupError::TableTooLarge(n));
    }

    // right[gi][e] = e * g_gi
    let right: Vec<Vec<u32>> = gens
        .iter()
        .map(|g| elements.iter().map(|e| index[&e.then(g)] as u32).collect())
        .collect();

    let mut mult = vec![0u32; n * n];
    for a in 0..n {
        let row = &mut mult[a * n..(a + 1) * n];
        row[0] = a as u32;
        for b in 1..n {
            let p = parent[b] as usize;
            row[b] = right[via[b] as usize][row[p] as usize];
        }
    }
    let mut inv = vec![0u32; n];
    for a in 0..n {
        let b = (0..n).find(|&b| mult[a * n + b] == 0).expect("identity in every row");
        inv[a] = b as u32;
    }

    let generators = gens
        .iter()
        .zip(labels)
        .map(|(g, label)| Generator {
            label: label.clone(),
            element: index[g],
        })
        .collect();
    let words = word_factors
        .iter()
        .map(|w| {
            let factors: Vec<(String, i64)> = w.iter().map(|&gi| (labels[gi].clone(), 1)).collect();
            compress(&Word(factors)).to_string()
        })
        .collect();

    Ok(GroupTable {
        order: n,
        mult,
        inv,
        generators,
        primary: gens.len(),
        words,
        parent,
        via,
        name: None,
    })
}

/// Merges adjacent factors with the same label.
fn compress(w: &Word) -> Word {
    let mut out: Vec<(String, i64)> = Vec::new();
    for (l, e) in &w.0 {
        match out.last_mut() {
            Some((pl, pe)) if pl == l => *pe += e,
            _ => out.push((l.clone(), *e)),
        }
        if out.last().is_some_and(|(_, e)| *e == 0) {
            out.pop();
        }
    }
    Word(out)
}

impl GroupTable {
    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mult[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inv[a] as usize
    }

    pub fn identity(&self) -> Elem {
        0
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    /// The generators whose closure produced the table (excludes derived labels).
    pub fn primary_generators(&self) -> &[Generator] {
        &self.generators[..self.primary]
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn generator(&self, label: &str) -> Result<Elem, GroupError> {
        self.generators
            .iter()
            .find(|g| g.label == label)
            .map(|g| g.element)
            .ok_or_else(|| GroupError::UnknownGenerator(label.to_string()))
    }

    /// Registers `label` as a name for the value of `word`.
    pub fn add_derived_generator(&mut self, label: &str, word: &Word) -> Result<Elem, GroupError> {
        let e = self.evaluate_word(word)?;
        self.generators.push(Generator {
            label: label.to_string(),
            element: e,
        });
        Ok(e)
    }

    pub fn pow(&self, a: Elem, exp: i64) -> Elem {
        let base = if exp < 0 { self.inv(a) } else { a };
        let mut acc = 0;
        for _ in 0..exp.unsigned_abs() % self.order as u64 {
            acc = self.mul(acc, base);
        }
        acc
    }

    /// Left-to-right product of the word; negative exponents use inverses.
    pub fn evaluate_word(&self, word: &Word) -> Result<Elem, GroupError> {
        let mut acc = 0;
        for (label, exp) in &word.0 {
            let g = self.generator(label)?;
            acc = self.mul(acc, self.pow(g, *exp));
        }
        Ok(acc)
    }

    pub fn evaluate(&self, word: &str) -> Result<Elem, GroupError> {
        self.evaluate_word(&word.parse()?)
    }

    /// Least `k >= 1` with `e^k = 1`.
    pub fn element_order(&self, e: Elem) -> usize {
        let mut k = 1;
        let mut acc = e;
        while acc != 0 {
            acc = self.mul(acc, e);
            k += 1;
        }
        k
    }

    pub fn check_relations(&self, relations: &[(Word, Word)]) -> Result<bool, GroupError> {
        for (lhs, rhs) in relations {
            if self.evaluate_word(lhs)? != self.evaluate_word(rhs)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The subgroup generated by `gens`, as a sorted element list.
    pub fn closure(&self, gens: &[Elem]) -> Vec<Elem> {
        let n = self.order;
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0];
        let mut out = vec![0];
        while let Some(e) = stack.pop() {
            for &g in gens {
                let f = self.mul(e, g);
                if !seen[f] {
                    seen[f] = true;
                    out.push(f);
                    stack.push(f);
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn generates(&self, gens: &[Elem]) -> bool {
        self.closure(gens).len() == self.order
    }

    pub fn is_cyclic(&self) -> bool {
        (0..self.order).any(|e| self.element_order(e) == self.order)
    }

    /// All ordered pairs `(a, b)` generating the whole group, by index order.
    pub fn generating_pairs(&self) -> Vec<(Elem, Elem)> {
        let n = self.order;
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.generates(&[a, b]) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Membership in the class of 2-generated groups with a generator of
    /// order 4 whose generating pairs all have element orders at most 4.
    /// Cyclic groups are placed outside the class.
    pub fn in_phi(&self) -> Result<bool, GroupError> {
        let pairs = self.generating_pairs();
        if pairs.is_empty() {
            return Err(GroupError::NotTwoGenerated);
        }
        if self.is_cyclic() {
            return Ok(false);
        }
        let orders: Vec<usize> = (0..self.order).map(|e| self.element_order(e)).collect();
        let mut has_four = false;
        for &(a, b) in &pairs {
            if orders[a] > 4 || orders[b] > 4 {
                return Ok(false);
            }
            has_four |= orders[a] == 4 || orders[b] == 4;
        }
        Ok(has_four)
    }

    /// An isomorphism `other -> self` as an element map, if one exists.
    ///
    /// Tries every assignment of images to `other`'s primary generators and
    /// extends it along `other`'s BFS tree.
    pub fn find_isomorphism_from(&self, other: &GroupTable) -> Option<Vec<Elem>> {
        let mut found = None;
        self.visit_isomorphisms_from(other, &mut |map| {
            found = Some(map.to_vec());
            true
        });
        found
    }

    /// Every automorphism of the group as an element map; the identity map first.
    pub fn automorphisms(&self) -> Vec<Vec<Elem>> {
        let mut all = Vec::new();
        self.visit_isomorphisms_from(self, &mut |map| {
            all.push(map.to_vec());
            false
        });
        all.sort();
        all
    }

    // calls `visit` per isomorphism until it returns true
    fn visit_isomorphisms_from(&self, other: &GroupTable, visit: &mut dyn FnMut(&[Elem]) -> bool) {
        let n = self.order;
        if other.order != n {
            return;
        }
        let k = other.primary;
        let src_gens: Vec<Elem> = other.primary_generators().iter().map(|g| g.element).collect();
        let orders: Vec<usize> = (0..n).map(|e| self.element_order(e)).collect();
        let mut images = vec![0usize; k];
        let mut map = vec![0usize; n];
        let mut used = vec![false; n];
        loop {
            let order_ok = (0..k).all(|i| orders[images[i]] == other.element_order(src_gens[i]));
            if order_ok && self.extends_to_isomorphism(other, &images, &mut map, &mut used) && visit(&map) {
                return;
            }
            // odometer over image tuples
            let mut i = 0;
            loop {
                if i == k {
                    return;
                }
                images[i] += 1;
                if images[i] < n {
                    break;
                }
                images[i] = 0;
                i += 1;
            }
        }
    }

    fn extends_to_isomorphism(
        &self,
        other: &GroupTable,
        images: &[Elem],
        map: &mut [Elem],
        used: &mut [bool],
    ) -> bool {
        let n = self.order;
        used.iter_mut().for_each(|u| *u = false);
        map[0] = 0;
        used[0] = true;
        for b in 1..n {
            let img = self.mul(map[other.parent[b] as usize], images[other.via[b] as usize]);
            if used[img] {
                return false;
            }
            used[img] = true;
            map[b] = img;
        }
        let src: Vec<Elem> = other.primary_generators().iter().map(|g| g.element).collect();
        (0..n).all(|a| {
            src.iter()
                .zip(images)
                .all(|(&s, &t)| map[other.mul(a, s)] == self.mul(map[a], t))
        })
    }

    pub fn is_isomorphic_to(&self, other: &GroupTable) -> bool {
        self.find_isomorphism_from(other).is_some()
    }

    pub fn dump(&self) -> GroupDump {
        let n = self.order;
        GroupDump {
            order: n,
            generators: self.generators.clone(),
            mult: (0..n).map(|a| (0..n).map(|b| self.mul(a, b)).collect()).collect(),
        }
    }
}

/// Debug serialization of a group table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupDump {
    pub order: usize,
    pub generators: Vec<Generator>,
    pub mult: Vec<Vec<Elem>>,
}

/// The named groups the classification talks about.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Cyclic(usize),
    Klein4,
    ElemAbelian9,
    /// Dihedral group of the given ORDER.
    Dihedral(usize),
    Quaternion8,
    Alternating4,
    Heisenberg27,
    C4SemidirectC4,
    SmallGroup16_3,
    SmallGroup32_2,
    FromPermutations(Vec<Perm>),
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "cyclic:{n}"),
            GroupSpec::Klein4 => write!(f, "klein4"),
            GroupSpec::ElemAbelian9 => write!(f, "elem_abelian_9"),
            GroupSpec::Dihedral(n) => write!(f, "dihedral:{n}"),
            GroupSpec::Quaternion8 => write!(f, "quaternion8"),
            GroupSpec::Alternating4 => write!(f, "alternating4"),
            GroupSpec::Heisenberg27 => write!(f, "heisenberg27"),
            GroupSpec::C4SemidirectC4 => write!(f, "c4_semidirect_c4"),
            GroupSpec::SmallGroup16_3 => write!(f, "smallgroup:16:3"),
            GroupSpec::SmallGroup32_2 => write!(f, "smallgroup:32:2"),
            GroupSpec::FromPermutations(gens) => {
                write!(f, "perm:")?;
                for (i, g) in gens.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{g}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for GroupSpec {
    type Err = GroupError;

    /// Tokens: `cyclic:12`, `klein4`, `elem_abelian_9`, `dihedral:8`,
    /// `quaternion8`, `alternating4`, `heisenberg27`, `c4_semidirect_c4`,
    /// `smallgroup:16:3`, `smallgroup:32:2`, `perm:(0 1 2);(0 1)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GroupError::SpecSyntax(s.to_string());
        let token = s.trim();
        if let Some(rest) = token.strip_prefix("perm:") {
            let gens = rest
                .split(';')
                .map(|c| Perm::parse_cycles(c, 0))
                .collect::<Result<Vec<_>, _>>()?;
            let degree = gens.iter().map(Perm::degree).max().unwrap_or(0).max(1);
            return Ok(GroupSpec::FromPermutations(
                gens.iter().map(|g| g.extend_to(degree)).collect(),
            ));
        }
        let lower = token.to_ascii_lowercase();
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
        if let Some(n) = lower.strip_prefix("cyclic:").or_else(|| lower.strip_prefix("z")) {
            if lower.starts_with("cyclic:") || n.chars().all(|c| c.is_ascii_digit()) {
                return Ok(GroupSpec::Cyclic(num(n)?));
            }
        }
        if let Some(n) = lower.strip_prefix("dihedral:") {
            return Ok(GroupSpec::Dihedral(num(n)?));
        }
        Ok(match lower.as_str() {
            "klein4" | "z2^2" => GroupSpec::Klein4,
            "elem_abelian_9" | "z3^2" => GroupSpec::ElemAbelian9,
            "quaternion8" | "q8" => GroupSpec::Quaternion8,
            "alternating4" | "a4" => GroupSpec::Alternating4,
            "heisenberg27" | "he3" => GroupSpec::Heisenberg27,
            "c4_semidirect_c4" | "smallgroup:16:4" => GroupSpec::C4SemidirectC4,
            "smallgroup:16:3" => GroupSpec::SmallGroup16_3,
            "smallgroup:32:2" => GroupSpec::SmallGroup32_2,
            _ => return Err(bad()),
        })
    }
}

impl Serialize for GroupSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GroupSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn rel(lhs: &str, rhs: &str) -> (Word, Word) {
    (lhs.parse().expect("static word"), rhs.parse().expect("static word"))
}

impl GroupSpec {
    /// Order stated for the named group, when it is fixed by the name.
    pub fn expected_order(&self) -> Option<usize> {
        Some(match self {
            GroupSpec::Cyclic(n) | GroupSpec::Dihedral(n) => *n,
            GroupSpec::Klein4 => 4,
            GroupSpec::ElemAbelian9 => 9,
            GroupSpec::Quaternion8 => 8,
            GroupSpec::Alternating4 => 12,
            GroupSpec::Heisenberg27 => 27,
            GroupSpec::C4SemidirectC4 | GroupSpec::SmallGroup16_3 => 16,
            GroupSpec::SmallGroup32_2 => 32,
            GroupSpec::FromPermutations(_) => return None,
        })
    }

    /// Defining relations over the labels `x`, `y` (and `z` for He3).
    pub fn presentation(&self) -> Vec<(Word, Word)> {
        match self {
            GroupSpec::Cyclic(n) => vec![rel(&format!("x^{n}"), "1")],
            GroupSpec::Klein4 => vec![rel("x^2", "1"), rel("y^2", "1"), rel("xy", "yx")],
            GroupSpec::ElemAbelian9 => vec![rel("x^3", "1"), rel("y^3", "1"), rel("xy", "yx")],
            GroupSpec::Dihedral(n) => {
                vec![rel(&format!("x^{}", n / 2), "1"), rel("y^2", "1"), rel("xyx", "y^-1")]
            }
            GroupSpec::Quaternion8 => vec![rel("x^4", "1"), rel("x^2", "y^2"), rel("xyx", "y")],
            GroupSpec::Alternating4 => vec![rel("x^3", "1"), rel("y^2", "1"), rel("(xy)^3", "1")],
            GroupSpec::Heisenberg27 => vec![
                rel("x^3", "1"),
                rel("y^3", "1"),
                rel("z^3", "1"),
                rel("z", "x^-1y^-1xy"),
                rel("xz", "zx"),
                rel("yz", "zy"),
            ],
            GroupSpec::C4SemidirectC4 => vec![
                rel("x^4", "1"),
                rel("y^4", "1"),
                rel("xyx", "y"),
                rel("y", "x^2yx^2"),
            ],
            GroupSpec::SmallGroup16_3 => vec![
                rel("x^4", "1"),
                rel("y^4", "1"),
                rel("(xy)^2", "1"),
                rel("y", "x^2yx^2"),
                rel("x", "y^2xy^2"),
            ],
            GroupSpec::SmallGroup32_2 => vec![
                rel("x^4", "1"),
                rel("y^4", "1"),
                rel("(xy)^4", "1"),
                rel("(yx)^4", "1"),
                rel("(x^2y)^4", "1"),
                rel("y", "x^2yx^2"),
                rel("x", "y^2xy^2"),
            ],
            GroupSpec::FromPermutations(_) => Vec::new(),
        }
    }

    /// Exact element orders required by the presentation, as `(word, order)`.
    pub fn element_orders(&self) -> Vec<(&'static str, usize)> {
        match self {
            GroupSpec::Dihedral(n) if *n >= 6 => vec![("y", 2), ("xy", 2)],
            GroupSpec::Quaternion8 => vec![("x", 4), ("y", 4)],
            GroupSpec::Alternating4 => vec![("x", 3), ("y", 2), ("xy", 3)],
            GroupSpec::Heisenberg27 => vec![("x", 3), ("y", 3), ("z", 3)],
            GroupSpec::C4SemidirectC4 => vec![("x", 4), ("y", 4)],
            GroupSpec::SmallGroup16_3 => vec![("x", 4), ("y", 4), ("xy", 2)],
            GroupSpec::SmallGroup32_2 => {
                vec![("x", 4), ("y", 4), ("xy", 4), ("yx", 4), ("x^2y", 4)]
            }
            _ => Vec::new(),
        }
    }
}

/// Permutations of `0..n` induced by right multiplication by each generator
/// in a group given by a normal-form product.
fn right_regular(n: usize, mul: impl Fn(usize, usize) -> usize, gens: &[usize]) -> Vec<Perm> {
    gens.iter()
        .map(|&g| Perm::from_images((0..n).map(|e| mul(e, g)).collect()).expect("group product is a bijection"))
        .collect()
}

fn cycle(n: usize) -> Perm {
    Perm::from_images((0..n).map(|i| (i + 1) % n).collect()).expect("cycle")
}

/// Builds the named group with its distinguished generators.
pub fn named_group(spec: &GroupSpec) -> Result<GroupTable, GroupError> {
    let xy = || vec!["x".to_string(), "y".to_string()];
    let (gens, labels): (Vec<Perm>, Vec<String>) = match spec {
        GroupSpec::Cyclic(n) => {
            if *n == 0 {
                return Err(GroupError::InvalidParameter("cyclic order must be positive".into()));
            }
            (vec![cycle(*n)], vec!["x".into()])
        }
        GroupSpec::Klein4 => (
            vec![Perm::from_cycles(4, &[&[0, 1]])?, Perm::from_cycles(4, &[&[2, 3]])?],
            xy(),
        ),
        GroupSpec::ElemAbelian9 => (
            vec![Perm::from_cycles(6, &[&[0, 1, 2]])?, Perm::from_cycles(6, &[&[3, 4, 5]])?],
            xy(),
        ),
        GroupSpec::Dihedral(n) => {
            if *n < 4 || n % 2 != 0 {
                return Err(GroupError::InvalidParameter(format!(
                    "dihedral order must be even and at least 4, got {n}"
                )));
            }
            let k = n / 2;
            if k == 2 {
                (
                    vec![Perm::from_cycles(4, &[&[0, 1], &[2, 3]])?, Perm::from_cycles(4, &[&[0, 2], &[1, 3]])?],
                    xy(),
                )
            } else {
                let reflection = Perm::from_images((0..k).map(|i| (k - i) % k).collect())?;
                (vec![cycle(k), reflection], xy())
            }
        }
        GroupSpec::Quaternion8 => {
            // units 1, i, j, k with signs; element = 4 * sign + unit
            const UNIT: [[(usize, usize); 4]; 4] = [
                [(0, 0), (0, 1), (0, 2), (0, 3)],
                [(0, 1), (1, 0), (0, 3), (1, 2)],
                [(0, 2), (1, 3), (1, 0), (0, 1)],
                [(0, 3), (0, 2), (1, 1), (1, 0)],
            ];
            let mul = |a: usize, b: usize| {
                let (s, u) = UNIT[a % 4][b % 4];
                4 * ((a / 4 + b / 4 + s) % 2) + u
            };
            (right_regular(8, mul, &[1, 2]), xy())
        }
        GroupSpec::Alternating4 => (
            vec![Perm::from_cycles(4, &[&[0, 1, 2]])?, Perm::from_cycles(4, &[&[0, 1], &[2, 3]])?],
            xy(),
        ),
        GroupSpec::Heisenberg27 => {
            // upper unitriangular matrices over F_3, (a, b, c) -> 9a + 3b + c
            let mul = |p: usize, q: usize| {
                let (a, b, c) = (p / 9, (p / 3) % 3, p % 3);
                let (a2, b2, c2) = (q / 9, (q / 3) % 3, q % 3);
                9 * ((a + a2) % 3) + 3 * ((b + b2) % 3) + (c + c2 + a * b2) % 3
            };
            (right_regular(27, mul, &[9, 3]), xy())
        }
        GroupSpec::C4SemidirectC4 => {
            // x^i y^j -> 4j + i, with y^-1 x y = x^-1
            let mul = |p: usize, q: usize| {
                let (i, j, k, l) = (p % 4, p / 4, q % 4, q / 4);
                let twisted = if j % 2 == 0 { k } else { (4 - k) % 4 };
                4 * ((j + l) % 4) + (i + twisted) % 4
            };
            (right_regular(16, mul, &[1, 4]), xy())
        }
        GroupSpec::SmallGroup16_3 => {
            // x^i y^j -> 4j + i, with [x, y] = x^2 y^2 central of order 2
            let mul = |p: usize, q: usize| {
                let (i, j, k, l) = (p % 4, p / 4, q % 4, q / 4);
                let t = 2 * j * k;
                4 * ((j + l + t) % 4) + (i + k + t) % 4
            };
            (right_regular(16, mul, &[1, 4]), xy())
        }
        GroupSpec::SmallGroup32_2 => {
            // x^i y^j c^k -> 16k + 4j + i, with c = [x, y] central of order 2
            let mul = |p: usize, q: usize| {
                let (i, j, k) = (p % 4, (p / 4) % 4, p / 16);
                let (i2, j2, k2) = (q % 4, (q / 4) % 4, q / 16);
                16 * ((k + k2 + j * i2) % 2) + 4 * ((j + j2) % 4) + (i + i2) % 4
            };
            (right_regular(32, mul, &[1, 4]), xy())
        }
        GroupSpec::FromPermutations(gens) => {
            let labels = (0..gens.len()).map(default_label).collect();
            (gens.clone(), labels)
        }
    };
    let mut table = build_table(&gens, &labels, DEFAULT_CLOSURE_CAP)?;
    if matches!(spec, GroupSpec::Heisenberg27) {
        table.add_derived_generator("z", &"x^-1y^-1xy".parse()?)?;
    }
    table.name = Some(spec.to_string());
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_specs() -> Vec<GroupSpec> {
        vec![
            GroupSpec::Cyclic(1),
            GroupSpec::Cyclic(7),
            GroupSpec::Klein4,
            GroupSpec::ElemAbelian9,
            GroupSpec::Dihedral(4),
            GroupSpec::Dihedral(6),
            GroupSpec::Dihedral(8),
            GroupSpec::Dihedral(12),
            GroupSpec::Quaternion8,
            GroupSpec::Alternating4,
            GroupSpec::Heisenberg27,
            GroupSpec::C4SemidirectC4,
            GroupSpec::SmallGroup16_3,
            GroupSpec::SmallGroup32_2,
        ]
    }

    fn assert_group_axioms(g: &GroupTable) {
        let n = g.order();
        for a in 0..n {
            let mut row = vec![false; n];
            let mut col = vec![false; n];
            for b in 0..n {
                row[g.mul(a, b)] = true;
                col[g.mul(b, a)] = true;
            }
            assert!(row.iter().all(|&x| x) && col.iter().all(|&x| x), "latin square");
            assert_eq!(g.mul(0, a), a);
            assert_eq!(g.mul(a, 0), a);
            assert_eq!(g.mul(a, g.inv(a)), 0);
            assert_eq!(g.mul(g.inv(a), a), 0);
        }
        assert!(n <= 64);
        for a in 0..n {
            for b in 0..n {
                let ab = g.mul(a, b);
                for c in 0..n {
                    assert_eq!(g.mul(ab, c), g.mul(a, g.mul(b, c)), "associativity");
                }
            }
        }
        let gens: Vec<Elem> = g.generators().iter().map(|x| x.element).collect();
        assert_eq!(g.closure(&gens).len(), n);
    }

    #[test]
    fn named_groups_satisfy_axioms_and_presentations() {
        for spec in all_specs() {
            let g = named_group(&spec).unwrap();
            assert_group_axioms(&g);
            assert_eq!(Some(g.order()), spec.expected_order(), "{spec}");
            assert!(g.check_relations(&spec.presentation()).unwrap(), "{spec}");
            for (w, o) in spec.element_orders() {
                assert_eq!(g.element_order(g.evaluate(w).unwrap()), o, "{spec}: o({w})");
            }
            for e in 0..g.order() {
                assert_eq!(g.order() % g.element_order(e), 0);
            }
        }
    }

    #[test]
    fn seven_cycle_closes_to_order_seven() {
        let g = group_from_permutations(&["(0 1 2 3 4 5 6)".parse().unwrap()]).unwrap();
        assert_eq!(g.order(), 7);
        assert_eq!(g.words()[1], "x");
        assert_eq!(g.words()[3], "x^3");
    }

    #[test]
    fn square_symmetries_form_d8() {
        let g = group_from_permutations(&[
            "(0 1 2 3)".parse().unwrap(),
            Perm::parse_cycles("(0 2)", 4).unwrap(),
        ])
        .unwrap();
        assert_eq!(g.order(), 8);
        assert!(g.check_relations(&GroupSpec::Dihedral(8).presentation()).unwrap());
        assert_eq!(g.element_order(g.generator("x").unwrap()), 4);
        assert_eq!(g.element_order(g.generator("y").unwrap()), 2);
        assert!(g.is_isomorphic_to(&named_group(&GroupSpec::Dihedral(8)).unwrap()));
        assert!(!g.is_isomorphic_to(&named_group(&GroupSpec::Quaternion8).unwrap()));
    }

    #[test]
    fn bfs_numbering_is_deterministic() {
        let gens: Vec<Perm> = vec!["(0 1 2 3 4)".parse().unwrap(), Perm::parse_cycles("(0 1 2)", 5).unwrap()];
        let a = group_from_permutations(&gens).unwrap();
        let b = group_from_permutations(&gens).unwrap();
        assert_eq!(a.order(), 60);
        assert_eq!(a.dump().mult, b.dump().mult);
        assert_eq!(a.words(), b.words());
    }

    #[test]
    fn closure_cap_and_empty_list() {
        let gens: Vec<Perm> = vec!["(0 1 2 3 4)".parse().unwrap(), "(0 1)".parse::<Perm>().unwrap().extend_to(5)];
        assert!(matches!(
            group_from_permutations_capped(&gens, 100),
            Err(GroupError::ClosureCapExceeded(100))
        ));
        assert!(matches!(group_from_permutations(&[]), Err(GroupError::EmptyGeneratorList)));
    }

    #[test]
    fn word_evaluation() {
        let d8 = named_group(&GroupSpec::Dihedral(8)).unwrap();
        assert_eq!(d8.evaluate("1").unwrap(), 0);
        assert_eq!(d8.evaluate_word(&Word::identity()).unwrap(), 0);
        assert_eq!(d8.evaluate("xyx").unwrap(), d8.evaluate("y^-1").unwrap());
        assert!(matches!(d8.evaluate("xq"), Err(GroupError::UnknownGenerator(_))));

        let he = named_group(&GroupSpec::Heisenberg27).unwrap();
        let c = he.evaluate("x^-1y^-1xy").unwrap();
        assert_eq!(he.element_order(c), 3);
        for g in ["x", "y"] {
            let g = he.evaluate(g).unwrap();
            assert_eq!(he.mul(g, c), he.mul(c, g));
        }
    }

    #[test]
    fn word_syntax() {
        let w: Word = "x^{-1}y^2(xy)^-1".parse().unwrap();
        assert_eq!(w.to_string(), "x^-1y^2y^-1x^-1");
        assert!("x^".parse::<Word>().is_err());
        assert!("(xy".parse::<Word>().is_err());
        assert!("X".parse::<Word>().is_err());
    }

    #[test]
    fn element_orders() {
        let c12 = named_group(&GroupSpec::Cyclic(12)).unwrap();
        assert_eq!(c12.element_order(0), 1);
        assert_eq!(c12.element_order(c12.generator("x").unwrap()), 12);
        let a4 = named_group(&GroupSpec::Alternating4).unwrap();
        assert_eq!(a4.element_order(a4.evaluate("xy").unwrap()), 3);
    }

    #[test]
    fn relation_checks() {
        let c4 = named_group(&GroupSpec::Cyclic(4)).unwrap();
        assert!(!c4.check_relations(&[rel("x^2", "1")]).unwrap());
        let d8 = named_group(&GroupSpec::Dihedral(8)).unwrap();
        assert!(d8.check_relations(&[rel("x^4", "1"), rel("y^2", "1"), rel("xyx", "y^-1")]).unwrap());
    }

    #[test]
    fn generating_pair_lists() {
        let c1 = named_group(&GroupSpec::Cyclic(1)).unwrap();
        assert_eq!(c1.generating_pairs(), vec![(0, 0)]);

        let k4 = named_group(&GroupSpec::Klein4).unwrap();
        let pairs = k4.generating_pairs();
        assert_eq!(pairs.len(), 6);
        assert!(pairs.iter().all(|&(a, b)| a != b && a != 0 && b != 0));

        // brute force: Q8 is generated exactly by two order-4 elements
        // from different cyclic subgroups
        let q8 = named_group(&GroupSpec::Quaternion8).unwrap();
        let pairs = q8.generating_pairs();
        let mut expected = Vec::new();
        for a in 0..8 {
            for b in 0..8 {
                let cyc_a = q8.closure(&[a]);
                if q8.element_order(a) == 4 && q8.element_order(b) == 4 && !cyc_a.contains(&b) {
                    expected.push((a, b));
                }
            }
        }
        assert_eq!(pairs, expected);
        assert_eq!(pairs.len(), 24);
    }

    #[test]
    fn phi_membership() {
        let q8 = named_group(&GroupSpec::Quaternion8).unwrap();
        assert!(q8.in_phi().unwrap());
        assert!(named_group(&GroupSpec::Dihedral(8)).unwrap().in_phi().unwrap());
        assert!(!named_group(&GroupSpec::Dihedral(12)).unwrap().in_phi().unwrap());
        assert!(!named_group(&GroupSpec::Cyclic(4)).unwrap().in_phi().unwrap());
        for spec in [GroupSpec::C4SemidirectC4, GroupSpec::SmallGroup16_3, GroupSpec::SmallGroup32_2] {
            assert!(named_group(&spec).unwrap().in_phi().unwrap(), "{spec}");
        }
        let z2cubed: GroupSpec = "perm:(0 1);(2 3);(4 5)".parse().unwrap();
        assert_eq!(named_group(&z2cubed).unwrap().in_phi(), Err(GroupError::NotTwoGenerated));
    }

    #[test]
    fn order_sixteen_groups_are_distinguished() {
        // involution counts: C4 x| C4 has 3, (C2 x C2) x| C4 has 7
        let count = |spec: &GroupSpec| {
            let g = named_group(spec).unwrap();
            (0..g.order()).filter(|&e| g.element_order(e) == 2).count()
        };
        assert_eq!(count(&GroupSpec::C4SemidirectC4), 3);
        assert_eq!(count(&GroupSpec::SmallGroup16_3), 7);
        let g = named_group(&GroupSpec::SmallGroup32_2).unwrap();
        assert!((0..32).all(|e| g.element_order(e) <= 4));
        // derived subgroup of order 2: the commutator is the only nontrivial one
        let c = g.evaluate("x^-1y^-1xy").unwrap();
        assert_eq!(g.element_order(c), 2);
        for a in 0..32 {
            assert_eq!(g.mul(a, c), g.mul(c, a));
        }
    }

    #[test]
    fn automorphism_counts() {
        let count = |spec: GroupSpec| named_group(&spec).unwrap().automorphisms().len();
        assert_eq!(count(GroupSpec::Cyclic(7)), 6);
        assert_eq!(count(GroupSpec::Klein4), 6);
        assert_eq!(count(GroupSpec::Quaternion8), 24);
        assert_eq!(count(GroupSpec::Dihedral(8)), 8);
        assert_eq!(count(GroupSpec::Alternating4), 24);
        let d6 = named_group(&GroupSpec::Dihedral(6)).unwrap();
        let auts = d6.automorphisms();
        assert_eq!(auts[0], (0..6).collect::<Vec<_>>());
        for map in &auts {
            for a in 0..6 {
                for b in 0..6 {
                    assert_eq!(map[d6.mul(a, b)], d6.mul(map[a], map[b]));
                }
            }
        }
    }

    #[test]
    fn spec_tokens_round_trip() {
        for spec in all_specs() {
            let parsed: GroupSpec = spec.to_string().parse().unwrap();
            assert_eq!(parsed, spec);
        }
        let p: GroupSpec = "perm:(0 1 2 3);(4 5)".parse().unwrap();
        assert_eq!(p.to_string().parse::<GroupSpec>().unwrap(), p);
        assert_eq!("q8".parse::<GroupSpec>().unwrap(), GroupSpec::Quaternion8);
        assert!("dihedral:x".parse::<GroupSpec>().is_err());
        assert!(matches!(named_group(&GroupSpec::Dihedral(7)), Err(GroupError::InvalidParameter(_))));
    }
}
