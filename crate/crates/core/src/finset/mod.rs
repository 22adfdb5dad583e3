//! Finite sets with string-labelled elements and total maps between them.
//!
//! A [`FinSet`] keeps its labels sorted, so element `i` is always the `i`-th
//! label in lexicographic order. A [`SetMap`] stores its assignment as a table
//! of codomain indices, which makes "lexicographic order over assignment
//! tables" the natural enumeration order everywhere in the crate.

mod class;
mod retract;
mod universe;

pub use class::{classify_map, ClassTag, MapClass};
pub use retract::{is_retract, retraction_witness, Retraction};
pub use universe::{all_maps_up_to, enumerate_universe, ArrowShape, DEFAULT_UNIVERSE_BOUND, MAX_UNIVERSE_BOUND};

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::uf::UnionFind;

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinSet {
    elems: Vec<String>,
}

impl FinSet {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut elems: Vec<String> = labels.into_iter().map(Into::into).collect();
        elems.sort();
        for pair in elems.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::DuplicateLabel(pair[0].clone()));
            }
        }
        Ok(FinSet { elems })
    }

    pub fn empty() -> Self {
        FinSet { elems: Vec::new() }
    }

    pub fn singleton(label: impl Into<String>) -> Self {
        FinSet {
            elems: vec![label.into()],
        }
    }

    /// `{0, 1, ..., n-1}`, zero-padded so that label order agrees with numeric order.
    pub fn range(n: usize) -> Self {
        let width = if n <= 1 { 1 } else { (n - 1).to_string().len() };
        FinSet {
            elems: (0..n).map(|i| format!("{i:0width$}")).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.elems
    }

    pub fn label(&self, i: usize) -> &str {
        &self.elems[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.elems.binary_search_by(|e| e.as_str().cmp(label)).ok()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.index_of(label).is_some()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> + '_ {
        self.elems.iter().map(String::as_str)
    }

    /// Disjoint union with elements tagged `1:` and `2:`, plus both injections.
    pub fn coproduct(&self, other: &FinSet) -> (FinSet, SetMap, SetMap) {
        let sum = FinSet::new(
            self.iter()
                .map(|l| format!("1:{l}"))
                .chain(other.iter().map(|l| format!("2:{l}"))),
        )
        .expect("tagged labels are distinct");
        // Tagged labels sort as all of `1:` before all of `2:`, each block in the original order.
        let left = SetMap::from_table(self.clone(), sum.clone(), (0..self.len()).collect()).unwrap();
        let right = SetMap::from_table(
            other.clone(),
            sum.clone(),
            (self.len()..self.len() + other.len()).collect(),
        )
        .unwrap();
        (sum, left, right)
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "∅");
        }
        write!(f, "{{{}}}", self.elems.join(","))
    }
}

/// A total function between finite sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetMap {
    domain: FinSet,
    codomain: FinSet,
    table: Vec<usize>,
}

impl SetMap {
    /// Builds a map from `(source label, target label)` pairs; every domain element must appear.
    pub fn new<'a, I>(domain: FinSet, codomain: FinSet, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut table = vec![usize::MAX; domain.len()];
        for (from, to) in pairs {
            let i = domain.index_of(from).ok_or_else(|| Error::UnknownLabel {
                label: from.to_string(),
                context: "map domain".into(),
            })?;
            let j = codomain.index_of(to).ok_or_else(|| Error::UnknownLabel {
                label: to.to_string(),
                context: "map codomain".into(),
            })?;
            table[i] = j;
        }
        if let Some(i) = table.iter().position(|&j| j == usize::MAX) {
            return Err(Error::NotTotal(domain.label(i).to_string()));
        }
        Ok(SetMap {
            domain,
            codomain,
            table,
        })
    }

    pub fn from_table(domain: FinSet, codomain: FinSet, table: Vec<usize>) -> Result<Self> {
        if table.len() != domain.len() {
            return Err(Error::NotTotal(format!(
                "table has {} entries for a domain of {}",
                table.len(),
                domain.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&j| j >= codomain.len()) {
            return Err(Error::UnknownLabel {
                label: bad.to_string(),
                context: "map codomain index".into(),
            });
        }
        Ok(SetMap {
            domain,
            codomain,
            table,
        })
    }

    pub fn identity(set: &FinSet) -> Self {
        SetMap {
            domain: set.clone(),
            codomain: set.clone(),
            table: (0..set.len()).collect(),
        }
    }

    /// The unique map out of the empty set.
    pub fn from_empty(codomain: &FinSet) -> Self {
        SetMap {
            domain: FinSet::empty(),
            codomain: codomain.clone(),
            table: Vec::new(),
        }
    }

    pub fn domain(&self) -> &FinSet {
        &self.domain
    }

    pub fn codomain(&self) -> &FinSet {
        &self.codomain
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn at(&self, i: usize) -> usize {
        self.table[i]
    }

    pub fn apply(&self, label: &str) -> Option<&str> {
        self.domain
            .index_of(label)
            .map(|i| self.codomain.label(self.table[i]))
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &SetMap) -> Result<SetMap> {
        if self.codomain != next.domain {
            return Err(Error::NotComposable {
                left: self.codomain.to_string(),
                right: next.domain.to_string(),
            });
        }
        Ok(SetMap {
            domain: self.domain.clone(),
            codomain: next.codomain.clone(),
            table: self.table.iter().map(|&j| next.table[j]).collect(),
        })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.codomain.len()];
        self.table.iter().all(|&j| !std::mem::replace(&mut seen[j], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.codomain.len()];
        for &j in &self.table {
            hit[j] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_bijective(&self) -> bool {
        self.domain.len() == self.codomain.len() && self.is_injective()
    }

    /// First map `g` (in table order) with `g ∘ self = id`: forced on the image, the smallest
    /// element elsewhere.
    pub fn left_inverse(&self) -> Option<SetMap> {
        if !self.is_injective() || (self.domain.is_empty() && !self.codomain.is_empty()) {
            return None;
        }
        let mut table = vec![0; self.codomain.len()];
        for (x, &y) in self.table.iter().enumerate() {
            table[y] = x;
        }
        Some(SetMap::from_table(self.codomain.clone(), self.domain.clone(), table).expect("in range"))
    }

    /// Indices of the codomain hit by the map, ascending.
    pub fn image(&self) -> Vec<usize> {
        let mut hit = vec![false; self.codomain.len()];
        for &j in &self.table {
            hit[j] = true;
        }
        (0..hit.len()).filter(|&j| hit[j]).collect()
    }

    pub fn fiber(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        self.table
            .iter()
            .enumerate()
            .filter(move |(_, &t)| t == j)
            .map(|(i, _)| i)
    }

    /// Fiber cardinalities, sorted descending. Two maps are isomorphic in the arrow category
    /// iff their shapes agree.
    pub fn shape(&self) -> ArrowShape {
        let mut fibers = vec![0usize; self.codomain.len()];
        for &j in &self.table {
            fibers[j] += 1;
        }
        fibers.sort_unstable_by(|a, b| b.cmp(a));
        ArrowShape {
            domain: self.domain.len(),
            codomain: self.codomain.len(),
            fibers,
        }
    }
}

impl fmt::Display for SetMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}→{}", self.domain, self.codomain)?;
        if !self.domain.is_empty() {
            let entries: Vec<String> = self
                .table
                .iter()
                .enumerate()
                .map(|(i, &j)| format!("{}↦{}", self.domain.label(i), self.codomain.label(j)))
                .collect();
            write!(f, " [{}]", entries.join(", "))?;
        }
        Ok(())
    }
}

/// Every map `domain → codomain` in lexicographic order of assignment tables.
pub fn all_maps<'a>(domain: &'a FinSet, codomain: &'a FinSet) -> impl Iterator<Item = SetMap> + 'a {
    let n = domain.len();
    let k = codomain.len();
    let mut next = if n > 0 && k == 0 {
        None
    } else {
        Some(vec![0usize; n])
    };
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut succ = current.clone();
        let mut pos = n;
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            succ[pos] += 1;
            if succ[pos] < k {
                next = Some(succ);
                break;
            }
            succ[pos] = 0;
        }
        Some(SetMap {
            domain: domain.clone(),
            codomain: codomain.clone(),
            table: current,
        })
    })
}

/// Number of maps `domain → codomain`, saturating.
pub fn hom_count(domain: &FinSet, codomain: &FinSet) -> u128 {
    (codomain.len() as u128)
        .checked_pow(domain.len() as u32)
        .unwrap_or(u128::MAX)
}

/// Pushout of a span of sets `X ← Z → Y`. Classes are labelled by their members
/// (tagged `1:` / `2:` as in [`FinSet::coproduct`]) joined with `=`.
pub fn pushout_sets(f: &SetMap, g: &SetMap) -> Result<(FinSet, SetMap, SetMap)> {
    if f.domain() != g.domain() {
        return Err(Error::NotComposable {
            left: f.domain().to_string(),
            right: g.domain().to_string(),
        });
    }
    let (sum, inl, inr) = f.codomain().coproduct(g.codomain());
    let mut uf = UnionFind::new(sum.len());
    for z in 0..f.domain().len() {
        uf.union(inl.at(f.at(z)), inr.at(g.at(z)));
    }
    quotient(&sum, &mut uf).map(|(apex, q)| {
        let left = inl.then(&q).expect("composable");
        let right = inr.then(&q).expect("composable");
        (apex, left, right)
    })
}

/// Quotient of `set` by the classes of `uf`, with the projection.
pub(crate) fn quotient(set: &FinSet, uf: &mut UnionFind) -> Result<(FinSet, SetMap)> {
    let (classes, count) = uf.classes();
    let mut members: Vec<Vec<&str>> = vec![Vec::new(); count];
    for (i, &c) in classes.iter().enumerate() {
        members[c].push(set.label(i));
    }
    let labels: Vec<String> = members.iter().map(|m| m.join("=")).collect();
    let apex = FinSet::new(labels.iter().cloned())?;
    let class_index: Vec<usize> = labels.iter().map(|l| apex.index_of(l).unwrap()).collect();
    let table = classes.iter().map(|&c| class_index[c]).collect();
    let projection = SetMap::from_table(set.clone(), apex.clone(), table)?;
    Ok((apex, projection))
}

/// The three generating maps of the classification.
pub mod named {
    use super::*;

    /// `R : {0,1} → {0}`.
    pub fn r() -> SetMap {
        SetMap::from_table(FinSet::range(2), FinSet::range(1), vec![0, 0]).unwrap()
    }

    /// `C : ∅ → {0}`.
    pub fn c() -> SetMap {
        SetMap::from_empty(&FinSet::range(1))
    }

    /// `C+ : {0} → {0,1}`, `0 ↦ 0`.
    pub fn c_plus() -> SetMap {
        SetMap::from_table(FinSet::range(1), FinSet::range(2), vec![0]).unwrap()
    }
}

#[derive(Serialize, Deserialize)]
struct SetMapDoc {
    domain: Vec<String>,
    codomain: Vec<String>,
    map: BTreeMap<String, String>,
}

impl Serialize for SetMap {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SetMapDoc {
            domain: self.domain.labels().to_vec(),
            codomain: self.codomain.labels().to_vec(),
            map: self
                .table
                .iter()
                .enumerate()
                .map(|(i, &j)| (self.domain.label(i).to_string(), self.codomain.label(j).to_string()))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SetMap {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = SetMapDoc::deserialize(deserializer)?;
        let domain = FinSet::new(doc.domain).map_err(D::Error::custom)?;
        let codomain = FinSet::new(doc.codomain).map_err(D::Error::custom)?;
        SetMap::new(domain, codomain, doc.map.iter().map(|(a, b)| (a.as_str(), b.as_str())))
            .map_err(D::Error::custom)
    }
}
