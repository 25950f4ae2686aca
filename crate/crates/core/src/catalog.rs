//! Claim registry, witness constructions, the classification table and the
//! claim-verification suite.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::autgroup::{is_semiregular_rep_with, serialize_biguint, AutError, AutOptions};
use crate::cayley::{build_cayley, validate_sets, CayleyError, ConnectionSets};
use crate::digraph::Digraph;
use crate::group::{named_group, Elem, GroupError, GroupSpec, GroupTable};
use crate::io::{parse_edgelist, DigraphJson, FormatError};
use crate::search::{
    exists_antisymmetric_kregular_with, exists_mposr_with, Kind, Reduction, SearchError, SearchOptions,
    SearchOutcome, SearchStatus, Witness,
};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("parameters outside the construction's range: {0}")]
    OutOfRange(String),
    #[error("no listed construction applies: {0}")]
    NoCandidate(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("claim registry: {0}")]
    Registry(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Cayley(#[from] CayleyError),
    #[error(transparent)]
    Aut(#[from] AutError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Format(#[from] FormatError),
}

// ---------------------------------------------------------------------------
// Claims

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    #[default]
    Default,
    Extended,
}

impl FromStr for Tier {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "default" => Ok(Tier::Default),
            "extended" => Ok(Tier::Extended),
            other => Err(format!("unknown tier {other:?} (expected default or extended)")),
        }
    }
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tier::Default => "default",
            Tier::Extended => "extended",
        })
    }
}

/// `T_{i,j}` given as words in the group's generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordCell(pub usize, pub usize, pub Vec<String>);

impl WordCell {
    fn new(i: usize, j: usize, words: &[&str]) -> Self {
        WordCell(i, j, words.iter().map(|w| w.to_string()).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expected {
    ExistsWithWitness(Vec<WordCell>),
    ExistsWitnessUnavailable,
    NotExists,
}

impl Expected {
    pub fn label(&self) -> &'static str {
        match self {
            Expected::ExistsWithWitness(_) => "exists_with_witness",
            Expected::ExistsWitnessUnavailable => "exists_witness_unavailable",
            Expected::NotExists => "not_exists",
        }
    }

    pub fn exists(&self) -> bool {
        !matches!(self, Expected::NotExists)
    }
}

/// The generator a registered witness is expected to agree with.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    CyclicPosr,
    TwoGen2posr,
    TwoGenMposr,
    Pdr,
    Fixed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub id: String,
    pub group: GroupSpec,
    pub m: usize,
    pub kind: Kind,
    pub expected: Expected,
    pub source: String,
    #[serde(default)]
    pub tier: Tier,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<Construction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

const REGISTRY: &str = include_str!("../data/claims.json");

pub fn parse_registry(text: &str) -> Result<Vec<Claim>, CatalogError> {
    let claims: Vec<Claim> = serde_json::from_str(text).map_err(|e| CatalogError::Registry(e.to_string()))?;
    let mut ids: Vec<&str> = claims.iter().map(|c| c.id.as_str()).collect();
    ids.sort_unstable();
    if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
        return Err(CatalogError::Registry(format!("duplicate claim id {}", w[0])));
    }
    Ok(claims)
}

/// The checked-in claim registry.
pub fn registry() -> Vec<Claim> {
    parse_registry(REGISTRY).expect("checked-in registry parses")
}

/// Resolves word cells against `g`.
pub fn sets_from_words(g: &GroupTable, m: usize, cells: &[WordCell]) -> Result<ConnectionSets, CatalogError> {
    let mut out = ConnectionSets::empty(m);
    for WordCell(i, j, words) in cells {
        if *i >= m || *j >= m {
            return Err(CayleyError::BadDimensions(format!("cell ({i}, {j}) with m = {m}")).into());
        }
        let elems = words.iter().map(|w| g.evaluate(w)).collect::<Result<Vec<_>, _>>()?;
        out.set(*i, *j, elems)?;
    }
    Ok(out)
}

fn cells_of(cells: &[(usize, usize, &[&str])]) -> Vec<WordCell> {
    cells.iter().map(|&(i, j, w)| WordCell::new(i, j, w)).collect()
}

// ---------------------------------------------------------------------------
// Fixed digraphs

#[derive(Debug, Clone)]
pub struct NamedDigraph {
    pub name: &'static str,
    pub digraph: Digraph,
}

const FIXED: [(&str, &str); 4] = [
    ("fig1_9", include_str!("../data/fig1_9.edges")),
    ("fig1_10", include_str!("../data/fig1_10.edges")),
    ("gamma7", include_str!("../data/gamma7.edges")),
    ("gamma8", include_str!("../data/gamma8.edges")),
];

/// The four explicit 3-regular digraphs, 0-based.
pub fn fixed_digraphs() -> Vec<NamedDigraph> {
    FIXED
        .iter()
        .map(|&(name, text)| NamedDigraph {
            name,
            digraph: parse_edgelist(text).expect("checked-in edge list parses"),
        })
        .collect()
}

pub fn fixed_digraph(name: &str) -> Option<NamedDigraph> {
    fixed_digraphs().into_iter().find(|d| d.name == name)
}

/// Edge-list source text of a fixed digraph.
pub fn fixed_digraph_source(name: &str) -> Option<&'static str> {
    FIXED.iter().find(|(n, _)| *n == name).map(|&(_, text)| text)
}

/// A digraph on `m` vertices as connection sets over the trivial group.
pub fn digraph_as_word_cells(d: &Digraph) -> Vec<WordCell> {
    d.arcs().map(|(u, v)| WordCell::new(u, v, &["1"])).collect()
}

// ---------------------------------------------------------------------------
// Constructions

/// Connection sets of the cyclic m-POSR family, as words in `x`.
pub fn cyclic_posr_words(n: usize, m: usize) -> Result<Vec<WordCell>, CatalogError> {
    let in_range = match m {
        2 => n >= 7,
        3 => n >= 4,
        4 => n >= 3,
        _ => m >= 5 && n >= 3,
    };
    if !in_range {
        return Err(CatalogError::OutOfRange(format!(
            "no cyclic construction for n = {n}, m = {m}"
        )));
    }
    Ok(match m {
        2 => {
            let t10: &[&str] = if n == 7 { &["x", "x^3", "x^4"] } else { &["x", "x^2", "x^4"] };
            cells_of(&[(0, 1, &["1", "x", "x^2"]), (1, 0, t10)])
        }
        3 => cells_of(&[
            (0, 1, &["1", "x"]),
            (0, 2, &["1"]),
            (1, 0, &["x^2"]),
            (1, 2, &["1", "x"]),
            (2, 0, &["x", "x^2"]),
            (2, 1, &["x"]),
        ]),
        4 => cells_of(&[
            (0, 1, &["1", "x"]),
            (1, 2, &["1", "x"]),
            (2, 0, &["1", "x"]),
            (3, 0, &["1"]),
            (3, 1, &["1"]),
            (2, 3, &["1"]),
            (0, 3, &["x"]),
            (1, 3, &["x"]),
            (3, 2, &["x^2"]),
        ]),
        _ => {
            let mut cells = Vec::new();
            for i in 0..m {
                cells.push(WordCell::new(i, (i + 1) % m, &["1"]));
                cells.push(WordCell::new(i, (i + m - 1) % m, &["x"]));
                let back = if i == 2 { "x" } else { "1" };
                cells.push(WordCell::new(i, (i + m - 2) % m, &[back]));
            }
            cells
        }
    })
}

/// The cyclic construction over `named_group(Cyclic(n))`.
pub fn cyclic_posr_sets(n: usize, m: usize) -> Result<ConnectionSets, CatalogError> {
    let words = cyclic_posr_words(n, m)?;
    let g = named_group(&GroupSpec::Cyclic(n))?;
    sets_from_words(&g, m, &words)
}

fn satisfies(g: &GroupTable, spec: &GroupSpec) -> bool {
    spec.expected_order() == Some(g.order())
        && g.check_relations(&spec.presentation()).unwrap_or(false)
        && spec
            .element_orders()
            .iter()
            .all(|(w, o)| g.evaluate(w).map(|e| g.element_order(e) == *o).unwrap_or(false))
}

fn swap_xy(word: &str) -> String {
    word.chars()
        .map(|c| match c {
            'x' => 'y',
            'y' => 'x',
            other => other,
        })
        .collect()
}

fn two_part(t01: &[&str], t10: &[&str]) -> Vec<WordCell> {
    cells_of(&[(0, 1, t01), (1, 0, t10)])
}

/// A labelled candidate witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub label: String,
    pub words: Vec<WordCell>,
    pub sets: ConnectionSets,
}

fn push_candidate(
    g: &GroupTable,
    m: usize,
    oriented: bool,
    label: String,
    words: Vec<WordCell>,
    out: &mut Vec<Candidate>,
) {
    let Ok(sets) = sets_from_words(g, m, &words) else {
        return;
    };
    let Ok(report) = validate_sets(g, &sets, 3) else {
        return;
    };
    if report.partite && report.regular && (report.oriented || !oriented) && !out.iter().any(|c| c.sets == sets) {
        out.push(Candidate { label, words, sets });
    }
}

fn order_of(g: &GroupTable, label: &str) -> Result<(Elem, usize), CatalogError> {
    let e = g.generator(label)?;
    Ok((e, g.element_order(e)))
}

/// Label, predicate on (o(x), o(y)), `T_{0,1}` and `T_{1,0}` as words.
type Family = (&'static str, fn(usize, usize) -> bool, &'static [&'static str], &'static [&'static str]);

/// Ordered 2-POSR candidates for a non-cyclic group generated by `x`, `y`.
pub fn two_gen_2posr_candidates(g: &GroupTable) -> Result<Vec<Candidate>, CatalogError> {
    if g.is_cyclic() {
        return Err(CatalogError::PreconditionFailed("group is cyclic".into()));
    }
    let (_, ox) = order_of(g, "x")?;
    let (_, oy) = order_of(g, "y")?;
    let mut out = Vec::new();
    let named: [(GroupSpec, &[&str], &[&str]); 5] = [
        (GroupSpec::Dihedral(8), &["1", "x", "xy"], &["x", "y", "x^3y"]),
        (GroupSpec::Dihedral(10), &["1", "x", "x^2"], &["x", "y", "xy"]),
        (GroupSpec::ElemAbelian9, &["1", "x", "y"], &["y", "x", "xy^2"]),
        (GroupSpec::Alternating4, &["1", "yx", "yxy"], &["1", "yx", "xyxy"]),
        (GroupSpec::Heisenberg27, &["z", "x^2z^2", "x^2yz"], &["x^2z^2", "z", "x^2y^2"]),
    ];
    for (spec, t01, t10) in named {
        if satisfies(g, &spec) {
            push_candidate(g, 2, true, spec.to_string(), two_part(t01, t10), &mut out);
        }
    }
    let families: [Family; 5] = [
        ("o(x) = 4, o(y) = 2", |a, b| a == 4 && b == 2, &["1", "x", "xy"], &["x", "y", "x^3y"]),
        ("o(x) = 4, o(y) >= 3", |a, b| a == 4 && b >= 3, &["1", "x", "y"], &["x", "x^2", "y"]),
        ("o(x) = 5, o(y) = 2", |a, b| a == 5 && b == 2, &["1", "x", "x^2"], &["x", "y", "xy"]),
        ("o(x) = 5, o(y) >= 3", |a, b| a == 5 && b >= 3, &["1", "x", "x^2"], &["x", "y", "y^2"]),
        ("o(x) >= 6", |a, _| a >= 6, &["1", "x", "y"], &["x", "x^2", "x^3"]),
    ];
    for swapped in [false, true] {
        let (lead, other) = if swapped { (oy, ox) } else { (ox, oy) };
        for (label, applies, t01, t10) in families {
            if !applies(lead, other) {
                continue;
            }
            let map = |ws: &[&str]| -> Vec<String> {
                ws.iter().map(|w| if swapped { swap_xy(w) } else { w.to_string() }).collect()
            };
            let words = vec![WordCell(0, 1, map(t01)), WordCell(1, 0, map(t10))];
            let label = if swapped { format!("{label} (x and y exchanged)") } else { label.to_string() };
            push_candidate(g, 2, true, label, words, &mut out);
        }
    }
    if out.is_empty() {
        return Err(CatalogError::NoCandidate(format!(
            "no 2-POSR family for o(x) = {ox}, o(y) = {oy}"
        )));
    }
    Ok(out)
}

/// The m-POSR construction for `G = <x, y>` with `m >= 3`.
pub fn two_gen_mposr_sets(g: &GroupTable, m: usize) -> Result<(Vec<WordCell>, ConnectionSets), CatalogError> {
    if m < 3 {
        return Err(CatalogError::PreconditionFailed(format!("m = {m} < 3")));
    }
    if g.is_cyclic() {
        return Err(CatalogError::PreconditionFailed("group is cyclic".into()));
    }
    let (x, ox) = order_of(g, "x")?;
    let (y, oy) = order_of(g, "y")?;
    let (a, b, first, second) = if ox >= 3 {
        (x, y, "x", "y")
    } else if oy >= 3 {
        (y, x, "y", "x")
    } else {
        return Err(CatalogError::PreconditionFailed("both generators have order at most 2".into()));
    };
    if b == g.inv(a) {
        return Err(CatalogError::PreconditionFailed("y is the inverse of x".into()));
    }
    let mut words = Vec::new();
    for i in 0..m {
        if i != m - 1 {
            words.push(WordCell::new(i, i + 1, &["1", first]));
        }
        words.push(WordCell::new(i, (i + m - 1) % m, &[first]));
    }
    words.push(WordCell::new(m - 1, 0, &[first, second]));
    let sets = sets_from_words(g, m, &words)?;
    let report = validate_sets(g, &sets, 3)?;
    if !(report.partite && report.regular && report.oriented) {
        return Err(CatalogError::PreconditionFailed(format!("sets fail validation: {report:?}")));
    }
    Ok((words, sets))
}

/// Ordered m-PDR candidates: POSR witnesses first, then digon-carrying sets.
pub fn pdr_candidates(g: &GroupTable, m: usize) -> Result<Vec<Candidate>, CatalogError> {
    let mut out = posr_candidates(g, m);
    if m == 2 && g.generator("y").is_ok() {
        if satisfies(g, &GroupSpec::Dihedral(6)) {
            push_candidate(g, 2, false, "dihedral:6 digon sets".into(), two_part(&["1", "x", "x^2"], &["1", "y", "xy"]), &mut out);
        }
        if order_of(g, "x").map(|(_, o)| o == 4).unwrap_or(false) {
            push_candidate(g, 2, false, "o(x) = 4 digon sets".into(), two_part(&["1", "x", "y"], &["1", "x^-1", "x^-2"]), &mut out);
        }
    }
    if out.is_empty() {
        return Err(CatalogError::NoCandidate(format!("no {m}-PDR construction listed for this group")));
    }
    Ok(out)
}

fn posr_candidates(g: &GroupTable, m: usize) -> Vec<Candidate> {
    let mut out = Vec::new();
    if g.is_cyclic() {
        let x_generates = order_of(g, "x").map(|(_, o)| o == g.order()).unwrap_or(false);
        if let (true, Ok(words)) = (x_generates, cyclic_posr_words(g.order(), m)) {
            push_candidate(g, m, true, "cyclic family".into(), words, &mut out);
        }
    } else if m == 2 {
        out.extend(two_gen_2posr_candidates(g).unwrap_or_default());
    } else if let Ok((words, sets)) = two_gen_mposr_sets(g, m) {
        out.push(Candidate {
            label: "two-generator family".into(),
            words,
            sets,
        });
    }
    out
}

/// Where a verified witness came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessOrigin {
    Construction(String),
    Search { index: u64 },
}

/// First listed construction that verifies, else exhaustive search.
pub fn find_witness(
    g: &GroupTable,
    m: usize,
    kind: Kind,
    options: &SearchOptions<'_>,
) -> Result<Option<(ConnectionSets, WitnessOrigin)>, CatalogError> {
    let candidates = match kind {
        Kind::Posr => posr_candidates(g, m),
        Kind::Pdr => pdr_candidates(g, m).unwrap_or_default(),
    };
    for c in candidates {
        let pd = build_cayley(g, &c.sets)?;
        if is_semiregular_rep_with(&pd, g, options.aut)?.is_representation {
            return Ok(Some((c.sets, WitnessOrigin::Construction(c.label))));
        }
    }
    let outcome = exists_mposr_with(g, m, 3, kind, options)?;
    Ok(match (outcome.status, outcome.witness) {
        (SearchStatus::FoundWitness, Some(Witness::ConnectionSets(sets))) => Some((
            sets,
            WitnessOrigin::Search {
                index: outcome.candidates_examined - 1,
            },
        )),
        _ => None,
    })
}

// ---------------------------------------------------------------------------
// Classification

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Yes,
    No,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "Yes",
            Verdict::No => "No",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub rule: String,
}

fn decide(yes: bool, rule: impl Into<String>) -> Classification {
    Classification {
        verdict: if yes { Verdict::Yes } else { Verdict::No },
        rule: rule.into(),
    }
}

fn isomorphic_to(g: &GroupTable, spec: &GroupSpec) -> bool {
    spec.expected_order() == Some(g.order())
        && named_group(spec).map(|h| g.is_isomorphic_to(&h)).unwrap_or(false)
}

fn is_two_generated(g: &GroupTable) -> bool {
    let n = g.order();
    (0..n).any(|a| (a..n).any(|b| g.closure(&[a, b]).len() == n))
}

pub fn classify(spec: &GroupSpec, m: usize, kind: Kind) -> Result<Classification, CatalogError> {
    classify_table(&named_group(spec)?, m, kind)
}

/// Existence of an m-POSR / m-PDR of valency 3 for a cyclic or 2-generated group.
pub fn classify_table(g: &GroupTable, m: usize, kind: Kind) -> Result<Classification, CatalogError> {
    if m < 2 {
        return Err(CatalogError::Unsupported(format!("m = {m}; the table starts at m = 2")));
    }
    let n = g.order();
    if n == 1 {
        return Ok(match kind {
            Kind::Posr => decide(m >= 9, "trivial group: a 3-regular oriented antisymmetric digraph on m vertices exists iff m >= 9"),
            Kind::Pdr => decide(m >= 7, "trivial group: a 3-regular antisymmetric digraph on m vertices exists iff m >= 7"),
        });
    }
    if g.is_cyclic() {
        return Ok(match (kind, m) {
            (Kind::Posr, 2) => decide(n >= 7, "cyclic, m = 2: an m-POSR exists iff o(x) >= 7"),
            (Kind::Posr, 3) => decide(n >= 4, "cyclic, m = 3: an m-POSR exists iff o(x) >= 4"),
            (Kind::Posr, 4) => decide(n >= 3, "cyclic, m = 4: an m-POSR exists iff o(x) >= 3"),
            (Kind::Posr, _) => decide(true, "cyclic, m >= 5: an m-POSR exists unless o(x) = 1 and m <= 8"),
            (Kind::Pdr, 2) => decide(n >= 5, "cyclic, m = 2: an m-PDR exists iff o(x) >= 5"),
            (Kind::Pdr, 3) => decide(n >= 3, "cyclic, m = 3: an m-PDR exists iff o(x) >= 3"),
            (Kind::Pdr, _) => decide(true, "cyclic, m >= 4: an m-PDR exists unless o(x) = 1 and m <= 6"),
        });
    }
    if !is_two_generated(g) {
        return Err(CatalogError::Unsupported("group needs more than two generators".into()));
    }
    if isomorphic_to(g, &GroupSpec::Klein4) {
        return Ok(decide(m >= 3, format!("Z2^2: an m-{} exists iff m >= 3", kind.to_string().to_uppercase())));
    }
    Ok(match (kind, m) {
        (Kind::Posr, 2) if g.in_phi()? => {
            let exceptional = [
                GroupSpec::Quaternion8,
                GroupSpec::C4SemidirectC4,
                GroupSpec::SmallGroup16_3,
                GroupSpec::SmallGroup32_2,
            ];
            let hit = exceptional.iter().find(|s| isomorphic_to(g, s));
            decide(
                hit.is_none(),
                "generating pairs of orders at most 4 with o(x) = 4, m = 2: a 2-POSR exists unless G is Q8, C4:C4, SmallGroup(16,3) or SmallGroup(32,2)",
            )
        }
        (Kind::Posr, 2) => decide(
            !isomorphic_to(g, &GroupSpec::Dihedral(6)),
            "two-generated, some generating pair has an element of order not 4 or above 4, m = 2: a 2-POSR exists unless G is Z2^2 or D6",
        ),
        (Kind::Posr, _) => decide(true, "two-generated non-cyclic, m >= 3: an m-POSR exists"),
        (Kind::Pdr, _) => decide(true, "two-generated non-cyclic: an m-PDR exists unless G = Z2^2 and m = 2"),
    })
}

// ---------------------------------------------------------------------------
// Verification suite

#[derive(Debug, Clone, Copy)]
pub struct SuiteBudget {
    pub tier: Tier,
    /// Per-claim cap on exhaustive-search candidates; hitting it marks the claim Aborted.
    pub max_candidates: Option<u64>,
    /// Cap for the optional search confirming claims without a witness.
    pub confirm_candidates: u64,
    pub aut: AutOptions,
}

impl Default for SuiteBudget {
    fn default() -> Self {
        SuiteBudget {
            tier: Tier::Default,
            max_candidates: None,
            confirm_candidates: 1_000_000,
            aut: AutOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ClaimStatus {
    Pass,
    Fail,
    Skipped,
    Aborted,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClaimReport {
    pub id: String,
    pub group: String,
    pub group_order: usize,
    pub m: usize,
    pub kind: Kind,
    pub expected: &'static str,
    pub status: ClaimStatus,
    pub detail: String,
    #[serde(serialize_with = "serialize_opt_biguint")]
    pub aut_order: Option<BigUint>,
    pub candidates_examined: Option<u64>,
    pub total_candidates: Option<u64>,
    pub next_cursor: Option<u64>,
    /// Witness contradicting a nonexistence claim, or the automorphism breaking a witness.
    pub counterexample: Option<Value>,
    #[serde(skip)]
    pub elapsed: Duration,
}

fn serialize_opt_biguint<S: serde::Serializer>(v: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(b) => serialize_biguint(b, s),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tier: Tier,
    pub claims: Vec<ClaimReport>,
}

impl Report {
    pub fn count(&self, status: ClaimStatus) -> usize {
        self.claims.iter().filter(|c| c.status == status).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &ClaimReport> {
        self.claims.iter().filter(|c| c.status == ClaimStatus::Fail)
    }

    pub fn is_success(&self) -> bool {
        self.count(ClaimStatus::Fail) == 0
    }

    pub fn claim(&self, id: &str) -> Option<&ClaimReport> {
        self.claims.iter().find(|c| c.id == id)
    }

    /// Key-sorted JSON.
    pub fn to_json(&self, with_timing: bool) -> Value {
        let claims: Vec<Value> = self
            .claims
            .iter()
            .map(|c| {
                let mut v = serde_json::to_value(c).expect("plain data");
                if with_timing {
                    v["elapsed_ms"] = json!(c.elapsed.as_millis() as u64);
                }
                v
            })
            .collect();
        json!({
            "tier": self.tier,
            "claims": claims,
            "summary": {
                "pass": self.count(ClaimStatus::Pass),
                "fail": self.count(ClaimStatus::Fail),
                "skipped": self.count(ClaimStatus::Skipped),
                "aborted": self.count(ClaimStatus::Aborted),
            },
        })
    }

    pub fn to_table(&self, with_timing: bool) -> String {
        let mut rows: Vec<[String; 7]> = vec![[
            "id".into(),
            "group".into(),
            "m".into(),
            "kind".into(),
            "expected".into(),
            "status".into(),
            "detail".into(),
        ]];
        for c in &self.claims {
            let mut detail = c.detail.clone();
            if with_timing {
                detail.push_str(&format!(" [{} ms]", c.elapsed.as_millis()));
            }
            rows.push([
                c.id.clone(),
                c.group.clone(),
                c.m.to_string(),
                c.kind.to_string(),
                c.expected.to_string(),
                format!("{:?}", c.status),
                detail,
            ]);
        }
        let widths: Vec<usize> = (0..6).map(|k| rows.iter().map(|r| r[k].len()).max().unwrap_or(0)).collect();
        let mut out = String::new();
        for r in &rows {
            for k in 0..6 {
                out.push_str(&format!("{:<w$}  ", r[k], w = widths[k]));
            }
            out.push_str(&r[6]);
            out.push('\n');
        }
        out.push_str(&format!(
            "{} pass, {} fail, {} skipped, {} aborted\n",
            self.count(ClaimStatus::Pass),
            self.count(ClaimStatus::Fail),
            self.count(ClaimStatus::Skipped),
            self.count(ClaimStatus::Aborted),
        ));
        out
    }
}

/// Runs every registered claim within the budget; order follows the registry.
pub fn verify_all(budget: &SuiteBudget) -> Report {
    verify_claims(&registry(), budget)
}

pub fn verify_claims(claims: &[Claim], budget: &SuiteBudget) -> Report {
    Report {
        tier: budget.tier,
        claims: claims.par_iter().map(|c| verify_claim(c, budget)).collect(),
    }
}

fn witness_value(g: &GroupTable, outcome: &SearchOutcome) -> Option<Value> {
    match &outcome.witness {
        Some(Witness::ConnectionSets(c)) => Some(serde_json::to_value(c.to_json(g)).expect("plain data")),
        Some(Witness::Digraph(d)) => Some(serde_json::to_value(DigraphJson::from(d)).expect("plain data")),
        None => None,
    }
}

pub fn verify_claim(claim: &Claim, budget: &SuiteBudget) -> ClaimReport {
    let started = Instant::now();
    let mut report = ClaimReport {
        id: claim.id.clone(),
        group: claim.group.to_string(),
        group_order: 0,
        m: claim.m,
        kind: claim.kind,
        expected: claim.expected.label(),
        status: ClaimStatus::Skipped,
        detail: String::new(),
        aut_order: None,
        candidates_examined: None,
        total_candidates: None,
        next_cursor: None,
        counterexample: None,
        elapsed: Duration::ZERO,
    };
    if claim.tier > budget.tier {
        report.detail = format!("{} tier", claim.tier);
        return report;
    }
    if let Err(e) = run_claim(claim, budget, &mut report) {
        report.status = ClaimStatus::Fail;
        report.detail = format!("error: {e}");
    }
    report.elapsed = started.elapsed();
    report
}

fn run_claim(claim: &Claim, budget: &SuiteBudget, report: &mut ClaimReport) -> Result<(), CatalogError> {
    let g = named_group(&claim.group)?;
    report.group_order = g.order();
    let table = classify_table(&g, claim.m, claim.kind).ok();
    let table_note = match &table {
        Some(c) if (c.verdict == Verdict::Yes) != claim.expected.exists() => {
            report.status = ClaimStatus::Fail;
            report.detail = format!("registry disagrees with the classification table ({})", c.rule);
            return Ok(());
        }
        Some(_) => "",
        None => " (outside the classification table)",
    };
    match &claim.expected {
        Expected::ExistsWithWitness(words) => {
            let sets = sets_from_words(&g, claim.m, words)?;
            let v = validate_sets(&g, &sets, 3)?;
            let pd = build_cayley(&g, &sets)?;
            let verdict = is_semiregular_rep_with(&pd, &g, budget.aut)?;
            report.aut_order = Some(verdict.aut_order.clone());
            let valid = v.partite && v.regular && (claim.kind == Kind::Posr) <= v.oriented;
            if valid && verdict.is_representation {
                report.status = ClaimStatus::Pass;
                report.detail = format!("witness verified, |Aut| = {}{table_note}", verdict.aut_order);
                return Ok(());
            }
            report.status = ClaimStatus::Fail;
            report.detail = if valid {
                format!("witness has |Aut| = {} > |G| = {}", verdict.aut_order, g.order())
            } else {
                format!("witness fails validation {v:?}, |Aut| = {}", verdict.aut_order)
            };
            report.counterexample = verdict
                .witness_extra_automorphism
                .map(|p| json!({ "extra_automorphism": p.to_string() }));
            let options = SearchOptions {
                max_candidates: Some(budget.confirm_candidates),
                aut: budget.aut,
                ..SearchOptions::default()
            };
            let outcome = search(&g, claim, &options)?;
            report.detail.push_str(&match outcome.status {
                SearchStatus::FoundWitness => format!("; existence holds, search finds a witness at candidate {}", outcome.candidates_examined),
                SearchStatus::ExhaustedNone => "; search finds no witness at all".to_string(),
                SearchStatus::Aborted => "; existence unresolved within the search budget".to_string(),
            });
            if let Some(w) = witness_value(&g, &outcome) {
                report.counterexample = Some(json!({
                    "extra_automorphism": report.counterexample.take().and_then(|c| c.get("extra_automorphism").cloned()),
                    "search_witness": w,
                }));
            }
        }
        Expected::NotExists => {
            let options = SearchOptions {
                max_candidates: budget.max_candidates,
                aut: budget.aut,
                reduction: if claim.m == 2 && g.order() >= 32 { Reduction::Isomorphism } else { Reduction::None },
                ..SearchOptions::default()
            };
            let outcome = search(&g, claim, &options)?;
            record_search(report, &outcome);
            match outcome.status {
                SearchStatus::ExhaustedNone => {
                    report.status = ClaimStatus::Pass;
                    report.detail = format!("exhausted {} candidates, none{table_note}", outcome.candidates_examined);
                }
                SearchStatus::FoundWitness => {
                    report.status = ClaimStatus::Fail;
                    report.detail = format!("search found a witness at candidate {}", outcome.candidates_examined);
                    report.counterexample = witness_value(&g, &outcome);
                }
                SearchStatus::Aborted => {
                    report.status = ClaimStatus::Aborted;
                    report.detail = format!("budget reached after {} candidates", outcome.candidates_examined);
                }
            }
        }
        Expected::ExistsWitnessUnavailable => {
            let options = SearchOptions {
                max_candidates: Some(budget.confirm_candidates),
                aut: budget.aut,
                ..SearchOptions::default()
            };
            let outcome = search(&g, claim, &options)?;
            record_search(report, &outcome);
            match outcome.status {
                SearchStatus::FoundWitness => {
                    report.status = ClaimStatus::Pass;
                    report.detail = format!("confirmed by search at candidate {}", outcome.candidates_examined);
                }
                SearchStatus::ExhaustedNone => {
                    report.status = ClaimStatus::Fail;
                    report.detail = format!("search exhausted {} candidates without a witness", outcome.candidates_examined);
                }
                SearchStatus::Aborted => {
                    report.status = ClaimStatus::Pass;
                    report.detail = format!("classification only; search budget reached after {} candidates", outcome.candidates_examined);
                }
            }
        }
    }
    Ok(())
}

fn search(g: &GroupTable, claim: &Claim, options: &SearchOptions<'_>) -> Result<SearchOutcome, CatalogError> {
    Ok(if g.order() == 1 {
        exists_antisymmetric_kregular_with(claim.m, 3, claim.kind == Kind::Posr, options)?
    } else {
        exists_mposr_with(g, claim.m, 3, claim.kind, options)?
    })
}

fn record_search(report: &mut ClaimReport, outcome: &SearchOutcome) {
    report.candidates_examined = Some(outcome.candidates_examined);
    report.total_candidates = Some(outcome.total_candidates);
    report.next_cursor = outcome.next_cursor;
}
