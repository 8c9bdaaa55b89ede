//! Gelfand-Tsetlin tableaux with half-period entries and generic block
//! tags, integer shift vectors, and the satisfaction predicates tying
//! tableaux to relation sets.

use std::collections::BTreeMap;

use num::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{QgtError, Result};
use crate::qcoeff::{format_rat, parse_rat, ExtendedExponent, Rat};
use crate::relations::{Pos, RelKind, Relation, RelationSet};

/// One tableau entry `r + h*(w/2)`, optionally offset by a named generic
/// block symbol. Entries are integrally comparable only within the same
/// block (or both without one).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Entry {
    pub r: Rat,
    pub h: i64,
    pub block: Option<String>,
}

impl Entry {
    pub fn int(r: i64) -> Self {
        Entry {
            r: Rat::from_integer(r),
            h: 0,
            block: None,
        }
    }

    pub fn rat(r: Rat) -> Self {
        Entry { r, h: 0, block: None }
    }

    pub fn with_block(mut self, name: &str) -> Self {
        self.block = Some(name.to_string());
        self
    }

    pub fn with_h(mut self, h: i64) -> Self {
        self.h = h;
        self
    }

    pub fn exponent(&self) -> ExtendedExponent {
        let mut e = ExtendedExponent::new(self.r, self.h);
        if let Some(b) = &self.block {
            e = e.block(b, 1);
        }
        e
    }

    pub fn integrally_comparable(&self, other: &Entry) -> bool {
        self.block == other.block && (self.r - other.r).denom().is_one()
    }
}

impl std::fmt::Display for Entry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.exponent())
    }
}

#[derive(Serialize, Deserialize)]
struct EntryRepr {
    r: String,
    #[serde(default)]
    h: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    block: Option<String>,
}

impl Serialize for Entry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        EntryRepr {
            r: format_rat(&self.r),
            h: self.h,
            block: self.block.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Entry {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = EntryRepr::deserialize(d)?;
        let r = parse_rat(&repr.r).map_err(|e| D::Error::custom(e.to_string()))?;
        Ok(Entry {
            r,
            h: repr.h,
            block: repr.block,
        })
    }
}

/// Triangular array of entries of height `n`. Rows are stored top first:
/// `rows[0]` has length `n`, the last row length 1. `root_degree` is the
/// lcm of entry denominators the enclosing computation agreed on.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Tableau {
    pub n: usize,
    pub root_degree: u32,
    pub rows: Vec<Vec<Entry>>,
}

impl Tableau {
    pub fn new(n: usize, root_degree: u32, rows: Vec<Vec<Entry>>) -> Result<Self> {
        let t = Tableau {
            n,
            root_degree,
            rows,
        };
        t.validate()?;
        Ok(t)
    }

    /// Height-2 tableau `T(l21, l22; l11)` with integer entries.
    pub fn gl2(l21: i64, l22: i64, l11: i64) -> Self {
        Tableau {
            n: 2,
            root_degree: 1,
            rows: vec![vec![Entry::int(l21), Entry::int(l22)], vec![Entry::int(l11)]],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 || self.rows.len() != self.n || self.root_degree < 1 {
            return Err(QgtError::InvalidInput(format!(
                "tableau shape: n = {}, {} rows",
                self.n,
                self.rows.len()
            )));
        }
        for (idx, row) in self.rows.iter().enumerate() {
            if row.len() != self.n - idx {
                return Err(QgtError::InvalidInput(format!(
                    "row {idx} has length {}, expected {}",
                    row.len(),
                    self.n - idx
                )));
            }
        }
        let d = self.root_degree as i64;
        for row in &self.rows {
            for e in row {
                if d % e.r.denom() != 0 {
                    return Err(QgtError::RootDegree {
                        given: self.root_degree,
                        required: num::integer::lcm(d, *e.r.denom()) as u32,
                        exponent: format_rat(&e.r),
                    });
                }
            }
        }
        Ok(())
    }

    /// Entry `l_{ij}` for `1 <= j <= i <= n` (row `i` has `i` entries).
    pub fn entry(&self, i: usize, j: usize) -> &Entry {
        &self.rows[self.n - i][j - 1]
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut Entry {
        &mut self.rows[self.n - i][j - 1]
    }

    pub fn top_row(&self) -> &[Entry] {
        &self.rows[0]
    }

    /// `l_left - l_right` as an exponent expression.
    pub fn diff(&self, left: Pos, right: Pos) -> ExtendedExponent {
        self.entry(left.row(), left.col())
            .exponent()
            .sub(&self.entry(right.row(), right.col()).exponent())
    }

    pub fn block_names(&self) -> Vec<String> {
        let mut names: Vec<String> = self
            .rows
            .iter()
            .flatten()
            .filter_map(|e| e.block.clone())
            .collect();
        names.sort();
        names.dedup();
        names
    }

    pub fn shift(&self, z: &ShiftVector) -> Tableau {
        let mut out = self.clone();
        for (pos, delta) in &z.z {
            out.entry_mut(pos.row(), pos.col()).r += Rat::from_integer(*delta);
        }
        out
    }

    /// The integer shift vector carrying `seed` to `self`, if one exists:
    /// top rows must agree exactly and every other entry must differ by an
    /// integer with matching half-periods and block tags.
    pub fn shift_from(&self, seed: &Tableau) -> Result<ShiftVector> {
        if self.n != seed.n {
            return Err(QgtError::NotInLattice("height mismatch".into()));
        }
        if self.top_row() != seed.top_row() {
            return Err(QgtError::NotInLattice("top row differs".into()));
        }
        let mut z = ShiftVector::zero(self.n);
        for k in 1..self.n {
            for j in 1..=k {
                let a = self.entry(k, j);
                let b = seed.entry(k, j);
                if a.h != b.h || a.block != b.block || !(a.r - b.r).denom().is_one() {
                    return Err(QgtError::NotInLattice(format!(
                        "entry ({k},{j}) differs by {} from the seed",
                        a.exponent().sub(&b.exponent())
                    )));
                }
                let delta = (a.r - b.r).to_integer();
                if delta != 0 {
                    z.z.insert(Pos(k, j), delta);
                }
            }
        }
        Ok(z)
    }

    /// Satisfaction of one relation: endpoints integrally comparable and
    /// the rational-part difference in `Z_{>=0}` (weak) or `Z_{>0}`
    /// (strict). Half-period counts are invisible to the lattice test.
    pub fn satisfies_relation(&self, rel: &Relation) -> bool {
        let a = self.entry(rel.left.row(), rel.left.col());
        let b = self.entry(rel.right.row(), rel.right.col());
        if !a.integrally_comparable(b) {
            return false;
        }
        let d = a.r - b.r;
        match rel.op {
            RelKind::Weak => d >= Rat::zero(),
            RelKind::Strict => d > Rat::zero(),
        }
    }

    /// Satisfaction of a whole set: every relation holds, and integrally
    /// comparable same-row entries only occur inside one indecomposable
    /// component of the set's vertex set.
    pub fn satisfies_set(&self, set: &RelationSet) -> bool {
        if self.n != set.n {
            return false;
        }
        if !set.relations.iter().all(|rel| self.satisfies_relation(rel)) {
            return false;
        }
        let comp = set.component_index();
        for k in 1..=self.n {
            for i in 1..=k {
                for j in i + 1..=k {
                    if self.entry(k, i).integrally_comparable(self.entry(k, j)) {
                        match (comp.get(&Pos(k, i)), comp.get(&Pos(k, j))) {
                            (Some(a), Some(b)) if a == b => {}
                            _ => return false,
                        }
                    }
                }
            }
        }
        true
    }

    /// Standardness: `l_{ki} - l_{k-1,i} in Z_{>=0}` and
    /// `l_{k-1,i} - l_{k,i+1} in Z_{>0}` for all applicable positions.
    pub fn is_standard(&self) -> bool {
        for k in 2..=self.n {
            for i in 1..k {
                let upper = self.entry(k, i);
                let mid = self.entry(k - 1, i);
                let lower_right = self.entry(k, i + 1);
                if !upper.integrally_comparable(mid) || !mid.integrally_comparable(lower_right) {
                    return false;
                }
                if upper.r - mid.r < Rat::zero() || mid.r - lower_right.r <= Rat::zero() {
                    return false;
                }
            }
        }
        true
    }
}

impl std::fmt::Display for Tableau {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        write!(f, "T({})", rows.join(";"))
    }
}

/// Integer shift supported on positions `(k,j)` with `k <= n-1`; the top
/// row never shifts.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ShiftVector {
    pub n: usize,
    pub z: BTreeMap<Pos, i64>,
}

impl ShiftVector {
    pub fn zero(n: usize) -> Self {
        ShiftVector {
            n,
            z: BTreeMap::new(),
        }
    }

    pub fn unit(n: usize, pos: Pos) -> Self {
        assert!(pos.row() < n, "top row never shifts");
        let mut z = BTreeMap::new();
        z.insert(pos, 1);
        ShiftVector { n, z }
    }

    pub fn scaled(&self, m: i64) -> Self {
        let z = if m == 0 {
            BTreeMap::new()
        } else {
            self.z.iter().map(|(p, v)| (*p, v * m)).collect()
        };
        ShiftVector { n: self.n, z }
    }

    pub fn add(&self, other: &ShiftVector) -> Self {
        let mut z = self.z.clone();
        for (p, v) in &other.z {
            *z.entry(*p).or_insert(0) += v;
        }
        z.retain(|_, v| *v != 0);
        ShiftVector { n: self.n, z }
    }

    pub fn norm_inf(&self) -> i64 {
        self.z.values().map(|v| v.abs()).max().unwrap_or(0)
    }

    /// All positions a shift may touch, in lexicographic order.
    pub fn positions(n: usize) -> Vec<Pos> {
        let mut out = Vec::new();
        for k in 1..n {
            for j in 1..=k {
                out.push(Pos(k, j));
            }
        }
        out
    }

    /// Coordinates in the fixed `positions(n)` order.
    pub fn coords(&self, n: usize) -> Vec<i64> {
        ShiftVector::positions(n)
            .iter()
            .map(|p| self.z.get(p).copied().unwrap_or(0))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::standard_set;

    #[test]
    fn shift_examples() {
        let t = Tableau::gl2(0, -2, -1);
        let shifted = t.shift(&ShiftVector::unit(2, Pos(1, 1)));
        assert_eq!(shifted, Tableau::gl2(0, -2, 0));
        assert_eq!(t.shift(&ShiftVector::zero(2)), t);
        let down = Tableau::gl2(0, -2, 0).shift(&ShiftVector::unit(2, Pos(1, 1)).scaled(-2));
        assert_eq!(down, Tableau::gl2(0, -2, -2));
    }

    #[test]
    fn shift_is_group_action() {
        let t = Tableau::gl2(0, -2, -1);
        let a = ShiftVector::unit(2, Pos(1, 1)).scaled(3);
        let b = ShiftVector::unit(2, Pos(1, 1)).scaled(-5);
        assert_eq!(t.shift(&a).shift(&b), t.shift(&a.add(&b)));
    }

    #[test]
    fn satisfies_relation_examples() {
        let t = Tableau::gl2(0, -2, -1);
        assert!(t.satisfies_relation(&Relation::weak((2, 1), (1, 1))));
        assert!(t.satisfies_relation(&Relation::strict((1, 1), (2, 2))));
        let boundary = Tableau::gl2(0, -2, 0);
        assert!(!boundary.satisfies_relation(&Relation::strict((2, 1), (1, 1))));
        // entries in different generic blocks never compare
        let mut g = Tableau::gl2(0, -2, 0);
        g.entry_mut(1, 1).block = Some("c1".into());
        assert!(!g.satisfies_relation(&Relation::weak((2, 1), (1, 1))));
    }

    #[test]
    fn satisfies_set_examples() {
        let s2 = standard_set(2);
        assert!(Tableau::gl2(0, -2, -1).satisfies_set(&s2));
        // empty set rejects integral same-row differences
        let empty = RelationSet::empty(2);
        assert!(!Tableau::gl2(0, -2, -1).satisfies_set(&empty));
        // fully generic tableau satisfies the empty set
        let mut g = Tableau::gl2(0, 0, 0);
        g.entry_mut(2, 1).block = Some("a".into());
        g.entry_mut(2, 2).block = Some("b".into());
        g.entry_mut(1, 1).block = Some("c".into());
        assert!(g.satisfies_set(&empty));
    }

    #[test]
    fn standardness() {
        assert!(Tableau::gl2(0, -2, 0).is_standard());
        assert!(!Tableau::gl2(0, -2, 1).is_standard());
        assert!(!Tableau::gl2(0, -2, -2).is_standard());
    }

    #[test]
    fn satisfaction_invariant_under_common_integer_shift() {
        let rel = Relation::weak((2, 1), (1, 1));
        for l11 in -3..=3 {
            let t = Tableau::gl2(0, -2, l11);
            let mut shifted = t.clone();
            shifted.entry_mut(2, 1).r += Rat::from_integer(7);
            shifted.entry_mut(1, 1).r += Rat::from_integer(7);
            assert_eq!(
                t.satisfies_relation(&rel),
                shifted.satisfies_relation(&rel)
            );
        }
    }

    #[test]
    fn json_round_trip() {
        let mut t = Tableau::gl2(0, -2, -1);
        t.entry_mut(1, 1).h = 1;
        t.entry_mut(1, 1).block = Some("c1".into());
        let json = serde_json::to_string(&t).unwrap();
        let back: Tableau = serde_json::from_str(&json).unwrap();
        assert_eq!(t, back);
    }
}
