//! Relation-set combinatorics: the repertoire of weak/strict inequalities
//! between tableau positions, indecomposable components, the labeled
//! transitive closure, implication, crosses, admissibility, the standard
//! set, maximal sets, and the relation-removal (RR) method.
//!
//! # Admissibility coverage condition
//!
//! The coverage condition for a same-row pair `(k,i), (k,j)` with `i < j`
//! and `k <= n-1` is checked as the disjunction of:
//!
//! 1. there exist `s` and `t` (chosen independently) with
//!    `{(k,i) > (k+1,s), (k+1,s) >= (k,j)}` and
//!    `{(k,i) >= (k-1,t), (k-1,t) > (k,j)}` both contained in the set;
//! 2. there exist `s < t` with `{(k,i) > (k+1,s), (k+1,t) >= (k,j)}`
//!    contained in the set.
//!
//! The independent quantification in branch 1 is the calibrated reading:
//! coupling `s < t` across the two chains would reject the standard set,
//! which is admissible by definition.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{QgtError, Result};
use crate::tableaux::{ShiftVector, Tableau};

/// Tableau position `(row, col)` with `1 <= col <= row <= n`.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub struct Pos(pub usize, pub usize);

impl Pos {
    pub fn row(&self) -> usize {
        self.0
    }
    pub fn col(&self) -> usize {
        self.1
    }
    pub fn valid(&self, n: usize) -> bool {
        1 <= self.1 && self.1 <= self.0 && self.0 <= n
    }
}

impl std::fmt::Display for Pos {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum RelKind {
    #[serde(rename = ">=")]
    Weak,
    #[serde(rename = ">")]
    Strict,
}

/// A single relation `left >= right` or `left > right` from the repertoire.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub struct Relation {
    pub left: Pos,
    pub op: RelKind,
    pub right: Pos,
}

impl Relation {
    pub fn weak(l: (usize, usize), r: (usize, usize)) -> Self {
        Relation {
            left: Pos(l.0, l.1),
            op: RelKind::Weak,
            right: Pos(r.0, r.1),
        }
    }

    pub fn strict(l: (usize, usize), r: (usize, usize)) -> Self {
        Relation {
            left: Pos(l.0, l.1),
            op: RelKind::Strict,
            right: Pos(r.0, r.1),
        }
    }

    /// Membership in the repertoire for height `n`: weak relations go from
    /// row `i` down to row `i-1` or stay inside the top row; strict
    /// relations go from row `i-1` up to row `i`.
    pub fn in_repertoire(&self, n: usize) -> bool {
        if !self.left.valid(n) || !self.right.valid(n) {
            return false;
        }
        match self.op {
            RelKind::Weak => {
                self.left.row() == self.right.row() + 1
                    || (self.left.row() == n
                        && self.right.row() == n
                        && self.left.col() != self.right.col())
            }
            RelKind::Strict => self.left.row() + 1 == self.right.row(),
        }
    }
}

impl std::fmt::Display for Relation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let op = match self.op {
            RelKind::Weak => ">=",
            RelKind::Strict => ">",
        };
        write!(f, "{} {} {}", self.left, op, self.right)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationSet {
    pub n: usize,
    pub relations: BTreeSet<Relation>,
}

/// Chain-reachability over a relation set: `weak` holds the pairs joined by
/// some chain of relations, `strict` the pairs where some chain uses at
/// least one strict link. Strict pairs are always weak pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClosureRelation {
    pub weak: BTreeSet<(Pos, Pos)>,
    pub strict: BTreeSet<(Pos, Pos)>,
}

/// Outcome of the heuristic shift-infinitude test used by the RR method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TriState {
    Yes,
    No,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReasonCode {
    StrictOrderViolation,
    TopRowOrderViolation,
    Cross,
    CoverageFailure,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdmissibilityFailure {
    pub code: ReasonCode,
    pub witness: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub failures: Vec<AdmissibilityFailure>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }
    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            self.parent[x] = self.find(self.parent[x]);
        }
        self.parent[x]
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

impl RelationSet {
    pub fn new(n: usize, relations: impl IntoIterator<Item = Relation>) -> Result<Self> {
        let relations: BTreeSet<Relation> = relations.into_iter().collect();
        for rel in &relations {
            if !rel.in_repertoire(n) {
                return Err(QgtError::RelationOutsideRepertoire(rel.to_string(), n));
            }
        }
        Ok(RelationSet { n, relations })
    }

    pub fn empty(n: usize) -> Self {
        RelationSet {
            n,
            relations: BTreeSet::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for rel in &self.relations {
            if !rel.in_repertoire(self.n) {
                return Err(QgtError::RelationOutsideRepertoire(
                    rel.to_string(),
                    self.n,
                ));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    /// All positions appearing as an endpoint of some relation.
    pub fn vertex_set(&self) -> BTreeSet<Pos> {
        let mut v = BTreeSet::new();
        for rel in &self.relations {
            v.insert(rel.left);
            v.insert(rel.right);
        }
        v
    }

    /// Partition of the vertex set into indecomposable components, ordered
    /// by their lexicographically smallest position.
    pub fn components(&self) -> Vec<BTreeSet<Pos>> {
        let verts: Vec<Pos> = self.vertex_set().into_iter().collect();
        let index: BTreeMap<Pos, usize> =
            verts.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let mut uf = UnionFind::new(verts.len());
        for rel in &self.relations {
            uf.union(index[&rel.left], index[&rel.right]);
        }
        let mut groups: BTreeMap<usize, BTreeSet<Pos>> = BTreeMap::new();
        for (i, p) in verts.iter().enumerate() {
            groups.entry(uf.find(i)).or_default().insert(*p);
        }
        groups.into_values().collect()
    }

    /// Map from position to its component index, per `components` order.
    pub fn component_index(&self) -> BTreeMap<Pos, usize> {
        let mut out = BTreeMap::new();
        for (i, comp) in self.components().iter().enumerate() {
            for p in comp {
                out.insert(*p, i);
            }
        }
        out
    }

    /// Labeled transitive closure. Strict links count as weak links for
    /// reachability; a pair is strict when some chain uses a strict link.
    pub fn closure(&self) -> ClosureRelation {
        let verts: Vec<Pos> = self.vertex_set().into_iter().collect();
        let index: BTreeMap<Pos, usize> =
            verts.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let m = verts.len();
        let mut edges: Vec<Vec<(usize, bool)>> = vec![Vec::new(); m];
        for rel in &self.relations {
            edges[index[&rel.left]].push((index[&rel.right], rel.op == RelKind::Strict));
        }
        // reach[a][b]: chain of length >= 1 from a to b
        let mut reach = vec![vec![false; m]; m];
        for a in 0..m {
            let mut stack: Vec<usize> = vec![a];
            let mut seen = vec![false; m];
            while let Some(x) = stack.pop() {
                for &(y, _) in &edges[x] {
                    if !reach[a][y] {
                        reach[a][y] = true;
                    }
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        let mut closure = ClosureRelation::default();
        for a in 0..m {
            for b in 0..m {
                if reach[a][b] {
                    closure.weak.insert((verts[a], verts[b]));
                }
            }
        }
        for x in 0..m {
            for &(y, strict) in &edges[x] {
                if !strict {
                    continue;
                }
                for a in 0..m {
                    if a != x && !reach[a][x] {
                        continue;
                    }
                    for b in 0..m {
                        if b != y && !reach[y][b] {
                            continue;
                        }
                        closure.strict.insert((verts[a], verts[b]));
                    }
                }
            }
        }
        closure
    }

    /// `self` implies `other` when every (weak/strict) closure pair of
    /// `other` is also a (weak/strict) closure pair of `self`.
    pub fn implies(&self, other: &RelationSet) -> bool {
        assert_eq!(self.n, other.n, "implication requires equal heights");
        let a = self.closure();
        let b = other.closure();
        b.weak.is_subset(&a.weak) && b.strict.is_subset(&a.strict)
    }

    /// A cross is a pair `{(k,i) >= (k-1,t), (k-1,s) > (k,j)}` with
    /// `i < j` and `s < t`.
    pub fn has_cross(&self) -> bool {
        self.find_cross().is_some()
    }

    fn find_cross(&self) -> Option<(Relation, Relation)> {
        for down in &self.relations {
            if down.op != RelKind::Weak || down.left.row() != down.right.row() + 1 {
                continue;
            }
            let (k, i, t) = (down.left.row(), down.left.col(), down.right.col());
            for up in &self.relations {
                if up.op != RelKind::Strict || up.right.row() != k {
                    continue;
                }
                let (s, j) = (up.left.col(), up.right.col());
                if i < j && s < t {
                    return Some((*down, *up));
                }
            }
        }
        None
    }

    /// Admissibility check with reason reporting. Order conditions and the
    /// coverage condition are checked per indecomposable component; the
    /// cross pattern is rejected wherever it occurs.
    pub fn is_admissible(&self) -> Result<AdmissibilityReport> {
        self.validate()?;
        let mut failures = Vec::new();
        let closure = self.closure();
        // (i) same-row strict pairs must point left-to-right
        for (a, b) in &closure.strict {
            if a.row() == b.row() && a.col() >= b.col() {
                failures.push(AdmissibilityFailure {
                    code: ReasonCode::StrictOrderViolation,
                    witness: format!("{a} strictly dominates {b}"),
                });
            }
        }
        // (ii) top-row weak pairs must point left-to-right
        for (a, b) in &closure.weak {
            if a.row() == self.n && b.row() == self.n && a.col() >= b.col() {
                failures.push(AdmissibilityFailure {
                    code: ReasonCode::TopRowOrderViolation,
                    witness: format!("{a} dominates {b} in the top row"),
                });
            }
        }
        // (iii) no cross
        if let Some((down, up)) = self.find_cross() {
            failures.push(AdmissibilityFailure {
                code: ReasonCode::Cross,
                witness: format!("{{{down}, {up}}}"),
            });
        }
        // (iv) coverage of same-row pairs below the top row
        for comp in self.components() {
            let mut by_row: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for p in &comp {
                by_row.entry(p.row()).or_default().push(p.col());
            }
            for (&k, cols) in &by_row {
                if k >= self.n {
                    continue;
                }
                for (ai, &i) in cols.iter().enumerate() {
                    for &j in &cols[ai + 1..] {
                        if !self.coverage_holds(k, i, j) {
                            failures.push(AdmissibilityFailure {
                                code: ReasonCode::CoverageFailure,
                                witness: format!("pair ({k},{i}), ({k},{j})"),
                            });
                        }
                    }
                }
            }
        }
        Ok(AdmissibilityReport {
            admissible: failures.is_empty(),
            failures,
        })
    }

    fn coverage_holds(&self, k: usize, i: usize, j: usize) -> bool {
        let has = |rel: Relation| self.relations.contains(&rel);
        // branch 1: chain through row k+1 and chain through row k-1
        let up_chain = (1..=k + 1).any(|s| {
            has(Relation::strict((k, i), (k + 1, s))) && has(Relation::weak((k + 1, s), (k, j)))
        });
        let down_chain = k >= 2
            && (1..=k - 1).any(|t| {
                has(Relation::weak((k, i), (k - 1, t)))
                    && has(Relation::strict((k - 1, t), (k, j)))
            });
        if up_chain && down_chain {
            return true;
        }
        // branch 2: both links through row k+1 with s < t
        for s in 1..=k + 1 {
            for t in s + 1..=k + 1 {
                if has(Relation::strict((k, i), (k + 1, s)))
                    && has(Relation::weak((k + 1, t), (k, j)))
                {
                    return true;
                }
            }
        }
        false
    }

    /// Remove every relation having `v` as an endpoint. The second return
    /// value reports whether anything was removed.
    pub fn rr_remove(&self, v: Pos) -> (RelationSet, bool) {
        if !self.vertex_set().contains(&v) {
            return (self.clone(), false);
        }
        let relations = self
            .relations
            .iter()
            .filter(|rel| rel.left != v && rel.right != v)
            .cloned()
            .collect();
        (
            RelationSet {
                n: self.n,
                relations,
            },
            true,
        )
    }
}

/// The standard relation set: `(i+1,j) >= (i,j) > (i+1,j+1)` for
/// `1 <= j <= i <= n-1`. Tableaux satisfying it are exactly the standard
/// ones.
pub fn standard_set(n: usize) -> RelationSet {
    assert!(n >= 2);
    let mut relations = BTreeSet::new();
    for i in 1..n {
        for j in 1..=i {
            relations.insert(Relation::weak((i + 1, j), (i, j)));
            relations.insert(Relation::strict((i, j), (i + 1, j + 1)));
        }
    }
    RelationSet { n, relations }
}

/// Every relation of the repertoire for height `n`.
pub fn all_relations(n: usize) -> Vec<Relation> {
    let mut out = Vec::new();
    for i in 2..=n {
        for j in 1..=i {
            for jp in 1..i {
                out.push(Relation::weak((i, j), (i - 1, jp)));
                out.push(Relation::strict((i - 1, jp), (i, j)));
            }
        }
    }
    for i in 1..=n {
        for j in 1..=n {
            if i != j {
                out.push(Relation::weak((n, i), (n, j)));
            }
        }
    }
    out
}

/// The set of all repertoire relations satisfied by `t`. Implies any other
/// set `t` satisfies. The flag reports whether the result is admissible.
pub fn maximal_set(t: &Tableau) -> Result<(RelationSet, bool)> {
    let relations: BTreeSet<Relation> = all_relations(t.n)
        .into_iter()
        .filter(|rel| t.satisfies_relation(rel))
        .collect();
    let set = RelationSet {
        n: t.n,
        relations,
    };
    let admissible = set.is_admissible()?.admissible;
    Ok((set, admissible))
}

/// Heuristic test of whether `t + m*delta^v` satisfies `C` for infinitely
/// many `m`: samples `m` in `[-m_range, m_range]` and inspects whether the
/// successes reach a range end with a periodic tail. Satisfaction here is
/// relation-only (the comparability clause of full set satisfaction is not
/// required of the witness).
pub fn rr_applicable(
    set: &RelationSet,
    t: &Tableau,
    v: Pos,
    m_range: i64,
) -> Result<TriState> {
    if !set.vertex_set().contains(&v) {
        return Err(QgtError::VertexNotInSet(v.to_string()));
    }
    if v.row() >= t.n {
        return Err(QgtError::InvalidInput(format!(
            "cannot shift top-row position {v}"
        )));
    }
    let holds =
        |t: &Tableau| set.relations.iter().all(|rel| t.satisfies_relation(rel));
    if !holds(t) {
        return Err(QgtError::SeedViolatesRelations(format!(
            "witness tableau {t} does not satisfy the relation set"
        )));
    }
    let mut successes = Vec::new();
    for m in -m_range..=m_range {
        let shifted = t.shift(&ShiftVector::unit(t.n, v).scaled(m));
        if holds(&shifted) {
            successes.push(m);
        }
    }
    let lo = successes.first().copied();
    let hi = successes.last().copied();
    if lo != Some(-m_range) && hi != Some(m_range) {
        return Ok(TriState::No);
    }
    // Periodic tail at a touched end suggests an infinite family.
    let tail_periodic = |tail: &[i64]| -> bool {
        match tail.len() {
            0 => false,
            1 => true,
            _ => {
                let gap = tail[1] - tail[0];
                tail.windows(2).all(|w| w[1] - w[0] == gap)
            }
        }
    };
    let quarter = (m_range / 4).max(2);
    let ok_neg = lo == Some(-m_range) && {
        let tail: Vec<i64> = successes
            .iter()
            .copied()
            .filter(|&m| m <= -m_range + quarter)
            .collect();
        tail_periodic(&tail)
    };
    let ok_pos = hi == Some(m_range) && {
        let tail: Vec<i64> = successes
            .iter()
            .copied()
            .filter(|&m| m >= m_range - quarter)
            .collect();
        tail_periodic(&tail)
    };
    if ok_neg || ok_pos {
        Ok(TriState::Yes)
    } else {
        Ok(TriState::Unknown)
    }
}
