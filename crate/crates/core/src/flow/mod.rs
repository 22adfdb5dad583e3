//! Flows whose path objects are finite sets, with an associative composition of paths.
//!
//! A flow is stored with its paths sorted by `(source, target, label)`, so each path set
//! `P_{α,β}` is a contiguous range and path labels only need to be unique per pair. The
//! composition table is dense over path indices.

mod build;
mod hom;
mod morphism;
mod presentation;
mod small;

pub use build::{concat_globes, directed_segment, glob, phi, segment_pair};
pub use hom::{enumerate_morphisms, hom_estimate, DEFAULT_BUDGET};
pub use morphism::{discrete_range, FlowMorphism};
pub use presentation::{materialize, Edge, FlowPresentation, Materialized, Word};
pub use small::small_flows;

use std::collections::HashMap;
use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::finset::FinSet;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub src: usize,
    pub tgt: usize,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Flow {
    states: FinSet,
    paths: Vec<Path>,
    /// `compose[x * n + y]` is `Some(x*y)` for composable pairs.
    compose: Vec<Option<usize>>,
    truncated: bool,
}

impl Flow {
    /// The path-empty flow on a set of states: how sets sit inside flows.
    pub fn discrete(states: FinSet) -> Self {
        Flow {
            states,
            paths: Vec::new(),
            compose: Vec::new(),
            truncated: false,
        }
    }

    pub fn empty() -> Self {
        Flow::discrete(FinSet::empty())
    }

    pub fn states(&self) -> &FinSet {
        &self.states
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn path(&self, p: usize) -> &Path {
        &self.paths[p]
    }

    pub fn path_count(&self) -> usize {
        self.paths.len()
    }

    pub fn has_paths(&self) -> bool {
        !self.paths.is_empty()
    }

    /// True for flows cut off at a word-length bound; composition may then be partial.
    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn compose(&self, x: usize, y: usize) -> Option<usize> {
        self.compose[x * self.paths.len() + y]
    }

    pub fn is_composable(&self, x: usize, y: usize) -> bool {
        self.paths[x].tgt == self.paths[y].src
    }

    /// Index range of `P_{α,β}`.
    pub fn pair_range(&self, src: usize, tgt: usize) -> Range<usize> {
        let lo = self.paths.partition_point(|p| (p.src, p.tgt) < (src, tgt));
        let hi = self.paths.partition_point(|p| (p.src, p.tgt) <= (src, tgt));
        lo..hi
    }

    pub fn path_set(&self, src: usize, tgt: usize) -> FinSet {
        FinSet::new(self.paths[self.pair_range(src, tgt)].iter().map(|p| p.label.clone()))
            .expect("labels are unique per pair")
    }

    pub fn find_path(&self, src: usize, tgt: usize, label: &str) -> Option<usize> {
        let range = self.pair_range(src, tgt);
        let offset = self.paths[range.clone()]
            .binary_search_by(|p| p.label.as_str().cmp(label))
            .ok()?;
        Some(range.start + offset)
    }

    /// Ordered pairs `(α,β)` with `P_{α,β}` non-empty.
    pub fn nonempty_pairs(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self.paths.iter().map(|p| (p.src, p.tgt)).collect();
        out.dedup();
        out
    }

    pub fn composable_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.paths.len();
        (0..n).flat_map(move |x| {
            let tgt = self.paths[x].tgt;
            self.pair_ranges_from(tgt).map(move |y| (x, y))
        })
    }

    fn pair_ranges_from(&self, src: usize) -> Range<usize> {
        let lo = self.paths.partition_point(|p| p.src < src);
        let hi = self.paths.partition_point(|p| p.src <= src);
        lo..hi
    }

    /// Paths that are not a composite `x*y`.
    pub fn indecomposables(&self) -> Vec<usize> {
        let mut composite = vec![false; self.paths.len()];
        for (x, y) in self.composable_pairs() {
            if let Some(z) = self.compose(x, y) {
                composite[z] = true;
            }
        }
        (0..self.paths.len()).filter(|&p| !composite[p]).collect()
    }

    /// Exhaustive check of `(x*y)*z = x*(y*z)` over composable triples where both sides are defined.
    pub fn check_associativity(&self) -> Result<()> {
        for (x, y) in self.composable_pairs() {
            let Some(xy) = self.compose(x, y) else { continue };
            for z in self.pair_ranges_from(self.paths[y].tgt) {
                let (Some(left), Some(yz)) = (self.compose(xy, z), self.compose(y, z)) else {
                    continue;
                };
                let Some(right) = self.compose(x, yz) else { continue };
                if left != right {
                    return Err(Error::MalformedFlow(format!(
                        "composition is not associative at ({}, {}, {})",
                        self.paths[x].label, self.paths[y].label, self.paths[z].label
                    )));
                }
            }
        }
        Ok(())
    }

    /// Checks the structural invariants: endpoints of composites and totality
    /// (unless truncated), then associativity.
    pub fn validate(&self) -> Result<()> {
        for (x, y) in self.composable_pairs() {
            match self.compose(x, y) {
                Some(z) => {
                    if self.paths[z].src != self.paths[x].src || self.paths[z].tgt != self.paths[y].tgt {
                        return Err(Error::MalformedFlow(format!(
                            "composite of {} and {} has wrong endpoints",
                            self.paths[x].label, self.paths[y].label
                        )));
                    }
                }
                None if !self.truncated => {
                    return Err(Error::MalformedFlow(format!(
                        "composition undefined on composable pair ({}, {})",
                        self.paths[x].label, self.paths[y].label
                    )))
                }
                None => {}
            }
        }
        if self.truncated {
            return Ok(());
        }
        self.check_associativity()
    }

    /// Structural isomorphism: a morphism bijective on states and on every path set.
    pub fn is_isomorphic(&self, other: &Flow) -> bool {
        if self.states.len() != other.states.len() || self.paths.len() != other.paths.len() {
            return false;
        }
        let x = std::sync::Arc::new(self.clone());
        let y = std::sync::Arc::new(other.clone());
        match enumerate_morphisms(&x, &y, DEFAULT_BUDGET) {
            Ok(homs) => homs.iter().any(FlowMorphism::is_isomorphism),
            Err(_) => false,
        }
    }

    pub fn state_label(&self, s: usize) -> &str {
        self.states.label(s)
    }

    /// `α->β` key used in documents and reports.
    pub fn pair_key(&self, src: usize, tgt: usize) -> String {
        format!("{}->{}", self.states.label(src), self.states.label(tgt))
    }
}

impl fmt::Display for Flow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "states {}", self.states)?;
        for (a, b) in self.nonempty_pairs() {
            write!(f, "; P[{}] = {}", self.pair_key(a, b), self.path_set(a, b))?;
        }
        if self.truncated {
            write!(f, " (truncated)")?;
        }
        Ok(())
    }
}

/// Incremental constructor; paths are re-sorted into canonical order by [`FlowBuilder::build`].
#[derive(Debug, Clone)]
pub struct FlowBuilder {
    states: FinSet,
    paths: Vec<Path>,
    compose: Vec<(usize, usize, usize)>,
    truncated: bool,
}

impl FlowBuilder {
    pub fn new(states: FinSet) -> Self {
        FlowBuilder {
            states,
            paths: Vec::new(),
            compose: Vec::new(),
            truncated: false,
        }
    }

    fn state(&self, label: &str) -> Result<usize> {
        self.states.index_of(label).ok_or_else(|| Error::UnknownLabel {
            label: label.to_string(),
            context: "flow states".into(),
        })
    }

    /// Adds a path and returns a builder-local handle for [`FlowBuilder::compose`].
    pub fn path(&mut self, src: &str, tgt: &str, label: impl Into<String>) -> Result<usize> {
        let (src, tgt) = (self.state(src)?, self.state(tgt)?);
        self.paths.push(Path {
            src,
            tgt,
            label: label.into(),
        });
        Ok(self.paths.len() - 1)
    }

    pub fn path_by_index(&mut self, src: usize, tgt: usize, label: impl Into<String>) -> usize {
        self.paths.push(Path {
            src,
            tgt,
            label: label.into(),
        });
        self.paths.len() - 1
    }

    pub fn compose(&mut self, x: usize, y: usize, xy: usize) -> &mut Self {
        self.compose.push((x, y, xy));
        self
    }

    pub fn truncated(&mut self, truncated: bool) -> &mut Self {
        self.truncated = truncated;
        self
    }

    pub fn build(&self) -> Result<Flow> {
        let n = self.paths.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| self.paths[a].cmp(&self.paths[b]));
        let mut new_index = vec![0; n];
        for (pos, &old) in order.iter().enumerate() {
            new_index[old] = pos;
        }
        let paths: Vec<Path> = order.iter().map(|&i| self.paths[i].clone()).collect();
        for w in paths.windows(2) {
            if w[0] == w[1] {
                return Err(Error::MalformedFlow(format!(
                    "duplicate path `{}` from {} to {}",
                    w[0].label,
                    self.states.label(w[0].src),
                    self.states.label(w[0].tgt)
                )));
            }
        }

        let mut compose = vec![None; n * n];
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        for &(x, y, xy) in &self.compose {
            if x >= n || y >= n || xy >= n {
                return Err(Error::MalformedFlow("composition refers to an unknown path".into()));
            }
            let (x, y, xy) = (new_index[x], new_index[y], new_index[xy]);
            if paths[x].tgt != paths[y].src {
                return Err(Error::MalformedFlow(format!(
                    "`{}` and `{}` are not composable",
                    paths[x].label, paths[y].label
                )));
            }
            if let Some(&prev) = seen.get(&(x, y)) {
                if prev != xy {
                    return Err(Error::MalformedFlow(format!(
                        "conflicting composites for ({}, {})",
                        paths[x].label, paths[y].label
                    )));
                }
            }
            seen.insert((x, y), xy);
            compose[x * n + y] = Some(xy);
        }
        let flow = Flow {
            states: self.states.clone(),
            paths,
            compose,
            truncated: self.truncated,
        };
        flow.validate()?;
        Ok(flow)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> FlowBuilder {
        let mut b = FlowBuilder::new(FinSet::range(3));
        let u = b.path("0", "1", "u").unwrap();
        let v = b.path("1", "2", "v").unwrap();
        let w = b.path("0", "2", "w").unwrap();
        b.compose(u, v, w);
        b
    }

    #[test]
    fn builder_sorts_and_indexes() {
        let flow = triangle().build().unwrap();
        assert_eq!(flow.path_count(), 3);
        assert_eq!(flow.path_set(0, 2), FinSet::singleton("w"));
        let u = flow.find_path(0, 1, "u").unwrap();
        let v = flow.find_path(1, 2, "v").unwrap();
        assert_eq!(flow.compose(u, v), flow.find_path(0, 2, "w"));
        assert_eq!(flow.indecomposables().len(), 2);
        assert_eq!(flow.nonempty_pairs(), vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn missing_composite_is_rejected() {
        let mut b = FlowBuilder::new(FinSet::range(3));
        b.path("0", "1", "u").unwrap();
        b.path("1", "2", "v").unwrap();
        assert!(matches!(b.build(), Err(Error::MalformedFlow(_))));
        b.truncated(true);
        assert!(b.build().unwrap().is_truncated());
    }

    #[test]
    fn non_associative_table_is_rejected() {
        // P_{0,0} = {e, f}: e*e = f, f*e = f, e*f = e, f*f = f is not associative
        // ((e*e)*f = f*f = f but e*(e*f) = e*e = f; try (e*e)*e = f*e = f vs e*(e*e) = e*f = e).
        let mut b = FlowBuilder::new(FinSet::range(1));
        let e = b.path("0", "0", "e").unwrap();
        let f = b.path("0", "0", "f").unwrap();
        b.compose(e, e, f).compose(f, e, f).compose(e, f, e).compose(f, f, f);
        assert!(matches!(b.build(), Err(Error::MalformedFlow(_))));
    }

    #[test]
    fn idempotent_loop_is_a_flow() {
        let mut b = FlowBuilder::new(FinSet::range(1));
        let e = b.path("0", "0", "e").unwrap();
        b.compose(e, e, e);
        let flow = b.build().unwrap();
        assert!(flow.indecomposables().is_empty());
    }

    #[test]
    fn duplicate_labels_per_pair_rejected_but_allowed_across_pairs() {
        let mut b = FlowBuilder::new(FinSet::range(2));
        b.path("0", "1", "u").unwrap();
        b.path("0", "1", "u").unwrap();
        assert!(b.build().is_err());
        let mut b = FlowBuilder::new(FinSet::range(3));
        b.path("0", "1", "u").unwrap();
        b.path("1", "0", "u").unwrap();
        assert!(b.build().is_err(), "composites u*u are missing");
    }
}
