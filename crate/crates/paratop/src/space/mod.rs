//! Finite topological spaces as minimal-neighborhood tables.
//!
//! Every finite space is an Alexandroff space: arbitrary intersections of
//! opens are open, so each point `x` has a smallest open set `U(x)`, the
//! intersection of all opens containing it. The table `x ↦ U(x)` is the
//! canonical representation here; the family of open sets is a derived
//! view (`V` is open iff `U(x) ⊆ V` for every `x ∈ V`). The specialization
//! preorder `y ≤ x ⇔ y ∈ U(x)` carries the same data, and continuity of
//! maps between finite spaces is exactly monotonicity for it.

mod enumerate;
mod io;

pub use enumerate::{enumerate_spaces, SpaceEnumerator};
pub use io::SpaceDoc;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Largest carrier representable by the bitmask set type.
pub const MAX_POINTS: usize = 64;

/// Largest carrier accepted by [`enumerate_spaces`].
pub const MAX_ENUMERATION: usize = 5;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpaceError {
    #[error("carrier is empty")]
    EmptyCarrier,
    #[error("carrier has {size} points, limit is {max}")]
    CarrierTooLarge { size: usize, max: usize },
    #[error("duplicate point `{0}`")]
    DuplicatePoint(Point),
    #[error("point `{0}` is not in the carrier")]
    UnknownPoint(Point),
    #[error("invalid point name `{0}`: names must be nonempty and free of whitespace, '^', '*', '+', '-', and '\"'")]
    InvalidPointName(String),
    #[error("open-set family is missing {0}")]
    MissingOpen(&'static str),
    #[error("family is not a topology: {op} of {left:?} and {right:?} is not in the family")]
    NotClosed {
        op: &'static str,
        left: Vec<Point>,
        right: Vec<Point>,
    },
    #[error("minimal-neighborhood table violates {0}")]
    InvalidTable(&'static str),
    #[error("no table entry for point `{0}`")]
    MissingEntry(Point),
    #[error("space is not T0")]
    NotT0,
    #[error("chosen points contain duplicate `{0}`")]
    DuplicateChosenPoints(Point),
    #[error("chosen point list is empty")]
    NoChosenPoints,
    #[error("invalid space document: {0}")]
    InvalidDocument(String),
}

/// A point identifier: an opaque name plus a formal-inverse tag.
///
/// Carriers of inverse subspaces consist of the formal inverses `x^-1` of
/// the original points; the tag keeps those distinct from ordinary points
/// without string munging.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Point {
    name: Arc<str>,
    inverted: bool,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && !name
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '^' | '*' | '+' | '-' | '"'))
}

impl Point {
    /// A plain point. Panics on names that would be ambiguous in the word
    /// grammar or in DOT output; use [`Point::from_str`] for fallible
    /// construction from user input.
    pub fn new(name: impl AsRef<str>) -> Point {
        let name = name.as_ref();
        assert!(valid_name(name), "invalid point name {name:?}");
        Point {
            name: Arc::from(name),
            inverted: false,
        }
    }

    /// The formal inverse of this point (an involution).
    pub fn formal_inverse(&self) -> Point {
        Point {
            name: Arc::clone(&self.name),
            inverted: !self.inverted,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_inverted(&self) -> bool {
        self.inverted
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverted {
            write!(f, "{}^-1", self.name)
        } else {
            f.write_str(&self.name)
        }
    }
}

impl FromStr for Point {
    type Err = SpaceError;

    fn from_str(s: &str) -> Result<Point, SpaceError> {
        let (name, inverted) = match s.strip_suffix("^-1") {
            Some(base) => (base, true),
            None => (s, false),
        };
        if !valid_name(name) {
            return Err(SpaceError::InvalidPointName(s.to_string()));
        }
        Ok(Point {
            name: Arc::from(name),
            inverted,
        })
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Point, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A subset of carrier points, stored as a bitmask over point indices.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PointSet(u64);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    pub fn full(n: usize) -> PointSet {
        debug_assert!(n <= MAX_POINTS);
        if n == 64 {
            PointSet(u64::MAX)
        } else {
            PointSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> PointSet {
        PointSet(1u64 << i)
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u64 << i;
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1u64 << i) != 0
    }

    pub fn union(self, other: PointSet) -> PointSet {
        PointSet(self.0 | other.0)
    }

    pub fn intersect(self, other: PointSet) -> PointSet {
        PointSet(self.0 & other.0)
    }

    pub fn is_subset(self, other: PointSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..MAX_POINTS).filter(move |&i| self.contains(i))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn from_bits(bits: u64) -> PointSet {
        PointSet(bits)
    }
}

impl FromIterator<usize> for PointSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> PointSet {
        let mut s = PointSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A finite topological space: ordered carrier plus the minimal open
/// neighborhood `U(x)` of each point.
///
/// Invariants, validated on construction: `x ∈ U(x)`, and `y ∈ U(x)`
/// implies `U(y) ⊆ U(x)`. Under these, each `U(x)` is itself open and is
/// exactly the intersection of all opens containing `x`, so the table and
/// the open-set family determine each other.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteSpace {
    points: Vec<Point>,
    min_nbhd: Vec<PointSet>,
}

impl FiniteSpace {
    /// Builds and validates a space from its minimal-neighborhood table.
    pub fn from_min_nbhd(
        points: Vec<Point>,
        neighborhoods: &[(Point, Vec<Point>)],
    ) -> Result<FiniteSpace, SpaceError> {
        let index = Indexer::new(&points)?;
        let mut table = vec![None; points.len()];
        for (p, nbhd) in neighborhoods {
            let pi = index.get(p)?;
            let mut set = PointSet::EMPTY;
            for q in nbhd {
                set.insert(index.get(q)?);
            }
            if table[pi].replace(set).is_some() {
                return Err(SpaceError::DuplicatePoint(p.clone()));
            }
        }
        let min_nbhd = table
            .into_iter()
            .enumerate()
            .map(|(i, entry)| entry.ok_or_else(|| SpaceError::MissingEntry(points[i].clone())))
            .collect::<Result<Vec<_>, _>>()?;
        FiniteSpace::build(points, min_nbhd)
    }

    /// Internal constructor from an index-level table.
    pub(crate) fn build(
        points: Vec<Point>,
        min_nbhd: Vec<PointSet>,
    ) -> Result<FiniteSpace, SpaceError> {
        if points.is_empty() {
            return Err(SpaceError::EmptyCarrier);
        }
        if points.len() > MAX_POINTS {
            return Err(SpaceError::CarrierTooLarge {
                size: points.len(),
                max: MAX_POINTS,
            });
        }
        Indexer::new(&points)?;
        assert_eq!(points.len(), min_nbhd.len());
        let full = PointSet::full(points.len());
        for (x, &ux) in min_nbhd.iter().enumerate() {
            if !ux.is_subset(full) {
                return Err(SpaceError::InvalidTable("carrier bounds"));
            }
            if !ux.contains(x) {
                return Err(SpaceError::InvalidTable("reflexivity (x ∈ U(x))"));
            }
            for y in ux.iter() {
                if !min_nbhd[y].is_subset(ux) {
                    return Err(SpaceError::InvalidTable(
                        "transitivity (y ∈ U(x) ⇒ U(y) ⊆ U(x))",
                    ));
                }
            }
        }
        Ok(FiniteSpace { points, min_nbhd })
    }

    /// Builds a space from an explicit open-set family, which must contain
    /// the empty set and the full carrier and be closed under pairwise
    /// union and intersection. `U(x)` is recovered as the intersection of
    /// all members containing `x`.
    pub fn from_open_sets(
        points: Vec<Point>,
        opens: &[Vec<Point>],
    ) -> Result<FiniteSpace, SpaceError> {
        if points.is_empty() {
            return Err(SpaceError::EmptyCarrier);
        }
        let index = Indexer::new(&points)?;
        let n = points.len();
        let full = PointSet::full(n);
        let mut family = BTreeSet::new();
        for open in opens {
            let mut set = PointSet::EMPTY;
            for q in open {
                set.insert(index.get(q)?);
            }
            family.insert(set);
        }
        if !family.contains(&PointSet::EMPTY) {
            return Err(SpaceError::MissingOpen("the empty set"));
        }
        if !family.contains(&full) {
            return Err(SpaceError::MissingOpen("the full carrier"));
        }
        let sets: Vec<PointSet> = family.iter().copied().collect();
        for (i, &a) in sets.iter().enumerate() {
            for &b in &sets[i + 1..] {
                for (op, combined) in [("union", a.union(b)), ("intersection", a.intersect(b))] {
                    if !family.contains(&combined) {
                        return Err(SpaceError::NotClosed {
                            op,
                            left: a.iter().map(|k| points[k].clone()).collect(),
                            right: b.iter().map(|k| points[k].clone()).collect(),
                        });
                    }
                }
            }
        }
        let min_nbhd = (0..n)
            .map(|x| {
                sets.iter()
                    .copied()
                    .filter(|s| s.contains(x))
                    .fold(full, PointSet::intersect)
            })
            .collect();
        FiniteSpace::build(points, min_nbhd)
    }

    /// The smallest topology containing the given subbase. On a finite
    /// carrier this is direct: `U(x)` is the intersection of the subbase
    /// members containing `x` (the empty intersection being the carrier).
    pub fn generate_topology(
        points: Vec<Point>,
        subbase: &[Vec<Point>],
    ) -> Result<FiniteSpace, SpaceError> {
        if points.is_empty() {
            return Err(SpaceError::EmptyCarrier);
        }
        let index = Indexer::new(&points)?;
        let n = points.len();
        let full = PointSet::full(n);
        let mut sets = Vec::with_capacity(subbase.len());
        for member in subbase {
            let mut set = PointSet::EMPTY;
            for q in member {
                set.insert(index.get(q)?);
            }
            sets.push(set);
        }
        let min_nbhd = (0..n)
            .map(|x| {
                sets.iter()
                    .copied()
                    .filter(|s| s.contains(x))
                    .fold(full, PointSet::intersect)
            })
            .collect();
        FiniteSpace::build(points, min_nbhd)
    }

    /// The chain space on `{1, …, n}` whose opens are the initial segments
    /// `{1, …, i}`; the universal T0 target for separating `n` points.
    pub fn chain(n: usize) -> Result<FiniteSpace, SpaceError> {
        if n == 0 {
            return Err(SpaceError::EmptyCarrier);
        }
        let points = (1..=n).map(|i| Point::new(i.to_string())).collect();
        let min_nbhd = (0..n)
            .map(|i| PointSet::from_bits((2u64 << i) - 1))
            .collect();
        FiniteSpace::build(points, min_nbhd)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // EmptyCarrier is rejected at construction
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn index_of(&self, p: &Point) -> Option<usize> {
        self.points.iter().position(|q| q == p)
    }

    pub(crate) fn index_or_err(&self, p: &Point) -> Result<usize, SpaceError> {
        self.index_of(p)
            .ok_or_else(|| SpaceError::UnknownPoint(p.clone()))
    }

    /// `U(x)` by point index.
    pub fn min_nbhd_idx(&self, i: usize) -> PointSet {
        self.min_nbhd[i]
    }

    /// `U(x)` as points.
    pub fn min_nbhd(&self, p: &Point) -> Result<Vec<Point>, SpaceError> {
        let i = self.index_or_err(p)?;
        Ok(self.set_points(self.min_nbhd[i]))
    }

    pub fn set_points(&self, s: PointSet) -> Vec<Point> {
        s.iter().map(|i| self.points[i].clone()).collect()
    }

    pub fn full_set(&self) -> PointSet {
        PointSet::full(self.len())
    }

    /// `V` is open iff it contains `U(x)` for each of its points.
    pub fn is_open(&self, v: PointSet) -> bool {
        v.iter().all(|x| self.min_nbhd[x].is_subset(v))
    }

    /// Topological closure: the points all of whose neighborhoods meet `s`.
    pub fn closure(&self, s: PointSet) -> PointSet {
        (0..self.len())
            .filter(|&y| !self.min_nbhd[y].intersect(s).is_empty())
            .collect()
    }

    pub fn is_closed(&self, s: PointSet) -> bool {
        self.closure(s) == s
    }

    /// Every open set, as bitmasks. Exponential in the carrier; guarded to
    /// small carriers since it is a diagnostic view.
    pub fn opens(&self) -> Vec<PointSet> {
        assert!(
            self.len() <= 20,
            "open-set family is only materialized for carriers of at most 20 points"
        );
        let n = self.len();
        (0u64..(1u64 << n))
            .map(PointSet::from_bits)
            .filter(|&v| self.is_open(v))
            .collect()
    }

    /// `U(x) = U(y)` only when `x = y`.
    pub fn is_t0(&self) -> bool {
        let n = self.len();
        (0..n).all(|x| (x + 1..n).all(|y| self.min_nbhd[x] != self.min_nbhd[y]))
    }

    pub fn is_discrete(&self) -> bool {
        (0..self.len()).all(|x| self.min_nbhd[x] == PointSet::singleton(x))
    }

    pub fn is_indiscrete(&self) -> bool {
        let full = self.full_set();
        self.min_nbhd.iter().all(|&u| u == full)
    }

    /// Whether the minimal neighborhoods form a partition of the carrier,
    /// i.e. the specialization preorder is symmetric.
    pub fn is_partition(&self) -> bool {
        (0..self.len()).all(|x| {
            self.min_nbhd[x]
                .iter()
                .all(|y| self.min_nbhd[y].contains(x))
        })
    }

    /// Specialization arcs `x → y` for `y ∈ U(x)`, `y ≠ x`.
    pub fn specialization_arcs(&self) -> Vec<(usize, usize)> {
        let mut arcs = Vec::new();
        for x in 0..self.len() {
            for y in self.min_nbhd[x].iter() {
                if y != x {
                    arcs.push((x, y));
                }
            }
        }
        arcs
    }

    /// The subspace of formal inverses inside the enveloping group: carrier
    /// `{x^-1}`, opens the inverses of closed sets. Minimal neighborhoods
    /// come out as `U(x^-1) = {y^-1 : x ∈ U(y)}`, the order dual.
    pub fn inverse_subspace(&self) -> FiniteSpace {
        let n = self.len();
        let points = self.points.iter().map(Point::formal_inverse).collect();
        let min_nbhd = (0..n)
            .map(|x| (0..n).filter(|&y| self.min_nbhd[y].contains(x)).collect())
            .collect();
        FiniteSpace::build(points, min_nbhd).expect("order dual of a valid table is valid")
    }

    /// Classes of the equivalence `U(x) = U(y)` (the T0 quotient), each
    /// represented by its smallest member index, in index order.
    pub fn nbhd_classes(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            match classes
                .iter_mut()
                .find(|c| self.min_nbhd[c[0]] == self.min_nbhd[x])
            {
                Some(c) => c.push(x),
                None => classes.push(vec![x]),
            }
        }
        classes
    }

    /// Continuous map into a chain space that is injective on `chosen`.
    ///
    /// `chosen` is ordered by a stable linear extension of specialization
    /// (Kahn's algorithm, breaking ties by the given order), the `i`-th
    /// point in that order gets rank `i`, and every `z` maps to the largest
    /// rank whose point lies in `U(z)` (rank 1 when none does). Monotone by
    /// construction, hence continuous; ranks are exact on `chosen`.
    pub fn separating_map(&self, chosen: &[Point]) -> Result<SpaceMap, SpaceError> {
        if chosen.is_empty() {
            return Err(SpaceError::NoChosenPoints);
        }
        if !self.is_t0() {
            return Err(SpaceError::NotT0);
        }
        let mut idx = Vec::with_capacity(chosen.len());
        for p in chosen {
            let i = self.index_or_err(p)?;
            if idx.contains(&i) {
                return Err(SpaceError::DuplicateChosenPoints(p.clone()));
            }
            idx.push(i);
        }
        let k = idx.len();
        // Stable topological sort: place the first unplaced chosen point
        // whose strict predecessors (members of its U(x) among chosen) are
        // all placed.
        let mut placed = vec![false; k];
        let mut order = Vec::with_capacity(k);
        while order.len() < k {
            let next = (0..k)
                .find(|&c| {
                    !placed[c]
                        && (0..k)
                            .all(|d| d == c || placed[d] || !self.min_nbhd[idx[c]].contains(idx[d]))
                })
                .expect("specialization on a T0 space is acyclic");
            placed[next] = true;
            order.push(idx[next]);
        }
        let codomain = FiniteSpace::chain(k)?;
        let assignment = (0..self.len())
            .map(|z| {
                let rank = (0..k)
                    .rev()
                    .find(|&r| self.min_nbhd[z].contains(order[r]))
                    .map(|r| r + 1)
                    .unwrap_or(1);
                rank - 1 // chain point index
            })
            .collect();
        Ok(SpaceMap {
            domain: self.clone(),
            codomain,
            assignment,
        })
    }
}

/// A function between finite spaces. Continuity is a checked property, not
/// a construction invariant, so test sweeps can quantify over all maps.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SpaceMap {
    domain: FiniteSpace,
    codomain: FiniteSpace,
    assignment: Vec<usize>,
}

impl SpaceMap {
    pub fn new(
        domain: FiniteSpace,
        codomain: FiniteSpace,
        assignment: Vec<usize>,
    ) -> Result<SpaceMap, SpaceError> {
        if assignment.len() != domain.len() || assignment.iter().any(|&i| i >= codomain.len()) {
            return Err(SpaceError::InvalidTable("map assignment bounds"));
        }
        Ok(SpaceMap {
            domain,
            codomain,
            assignment,
        })
    }

    pub fn from_pairs(
        domain: FiniteSpace,
        codomain: FiniteSpace,
        pairs: &[(Point, Point)],
    ) -> Result<SpaceMap, SpaceError> {
        let mut assignment = vec![None; domain.len()];
        for (from, to) in pairs {
            let i = domain.index_or_err(from)?;
            let j = codomain.index_or_err(to)?;
            if assignment[i].replace(j).is_some() {
                return Err(SpaceError::DuplicatePoint(from.clone()));
            }
        }
        let assignment = assignment
            .into_iter()
            .enumerate()
            .map(|(i, a)| a.ok_or_else(|| SpaceError::MissingEntry(domain.point(i).clone())))
            .collect::<Result<Vec<_>, _>>()?;
        SpaceMap::new(domain, codomain, assignment)
    }

    pub fn domain(&self) -> &FiniteSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &FiniteSpace {
        &self.codomain
    }

    pub fn apply_idx(&self, i: usize) -> usize {
        self.assignment[i]
    }

    pub fn apply(&self, p: &Point) -> Result<&Point, SpaceError> {
        let i = self.domain.index_or_err(p)?;
        Ok(self.codomain.point(self.assignment[i]))
    }

    /// Preimages of opens are open; for finite spaces this is equivalent to
    /// `f(U(x)) ⊆ U(f(x))` for every `x`, i.e. monotonicity.
    pub fn is_continuous(&self) -> bool {
        (0..self.domain.len()).all(|x| {
            let target = self.codomain.min_nbhd_idx(self.assignment[x]);
            self.domain
                .min_nbhd_idx(x)
                .iter()
                .all(|y| target.contains(self.assignment[y]))
        })
    }

    pub fn is_injective_on(&self, points: &[Point]) -> Result<bool, SpaceError> {
        let mut seen = BTreeSet::new();
        for p in points {
            let i = self.domain.index_or_err(p)?;
            if !seen.insert(self.assignment[i]) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

struct Indexer<'a> {
    points: &'a [Point],
}

impl<'a> Indexer<'a> {
    fn new(points: &'a [Point]) -> Result<Indexer<'a>, SpaceError> {
        for (i, p) in points.iter().enumerate() {
            if !valid_name(&p.name) {
                return Err(SpaceError::InvalidPointName(p.to_string()));
            }
            if points[..i].contains(p) {
                return Err(SpaceError::DuplicatePoint(p.clone()));
            }
        }
        Ok(Indexer { points })
    }

    fn get(&self, p: &Point) -> Result<usize, SpaceError> {
        self.points
            .iter()
            .position(|q| q == p)
            .ok_or_else(|| SpaceError::UnknownPoint(p.clone()))
    }
}

/// The two-point space with one open point: `U(a) = {a, b}`, `U(b) = {b}`.
pub fn sierpinski() -> FiniteSpace {
    FiniteSpace::from_min_nbhd(
        vec![Point::new("a"), Point::new("b")],
        &[
            (Point::new("a"), vec![Point::new("a"), Point::new("b")]),
            (Point::new("b"), vec![Point::new("b")]),
        ],
    )
    .expect("sierpinski space is valid")
}

/// The indiscrete space on the given names.
pub fn indiscrete(names: &[&str]) -> FiniteSpace {
    let points: Vec<Point> = names.iter().map(Point::new).collect();
    let full: Vec<Point> = points.clone();
    let table: Vec<(Point, Vec<Point>)> =
        points.iter().map(|p| (p.clone(), full.clone())).collect();
    FiniteSpace::from_min_nbhd(points, &table).expect("indiscrete space is valid")
}

/// The discrete space on the given names.
pub fn discrete(names: &[&str]) -> FiniteSpace {
    let points: Vec<Point> = names.iter().map(Point::new).collect();
    let table: Vec<(Point, Vec<Point>)> = points
        .iter()
        .map(|p| (p.clone(), vec![p.clone()]))
        .collect();
    FiniteSpace::from_min_nbhd(points, &table).expect("discrete space is valid")
}
