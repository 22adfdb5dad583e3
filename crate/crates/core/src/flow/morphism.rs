use std::fmt;
use std::sync::Arc;

use super::Flow;
use crate::error::{Error, Result};
use crate::finset::{FinSet, SetMap};

/// A state map together with path maps `P_{α,β}X → P_{f(α),f(β)}Y` preserving composition.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FlowMorphism {
    source: Arc<Flow>,
    target: Arc<Flow>,
    states: Vec<usize>,
    paths: Vec<usize>,
}

impl FlowMorphism {
    pub fn new(source: Arc<Flow>, target: Arc<Flow>, states: Vec<usize>, paths: Vec<usize>) -> Result<Self> {
        let m = FlowMorphism {
            source,
            target,
            states,
            paths,
        };
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(source: Arc<Flow>, target: Arc<Flow>, states: Vec<usize>, paths: Vec<usize>) -> Self {
        FlowMorphism {
            source,
            target,
            states,
            paths,
        }
    }

    /// Builds a morphism from label assignments: `states` maps state labels, `paths` maps
    /// `(src, tgt, label)` of the source to a path label in the image pair.
    pub fn from_labels(
        source: Arc<Flow>,
        target: Arc<Flow>,
        states: &[(&str, &str)],
        paths: &[((&str, &str, &str), &str)],
    ) -> Result<Self> {
        let state_map = SetMap::new(source.states().clone(), target.states().clone(), states.iter().copied())?;
        let mut table = vec![usize::MAX; source.path_count()];
        for &((a, b, label), image) in paths {
            let unknown = |l: &str| Error::UnknownLabel {
                label: l.to_string(),
                context: "morphism paths".into(),
            };
            let sa = source.states().index_of(a).ok_or_else(|| unknown(a))?;
            let sb = source.states().index_of(b).ok_or_else(|| unknown(b))?;
            let p = source.find_path(sa, sb, label).ok_or_else(|| unknown(label))?;
            let q = target
                .find_path(state_map.at(sa), state_map.at(sb), image)
                .ok_or_else(|| unknown(image))?;
            table[p] = q;
        }
        if let Some(p) = table.iter().position(|&q| q == usize::MAX) {
            return Err(Error::NotTotal(source.path(p).label.clone()));
        }
        FlowMorphism::new(source, target, state_map.table().to_vec(), table)
    }

    pub fn identity(flow: Arc<Flow>) -> Self {
        let states = (0..flow.states().len()).collect();
        let paths = (0..flow.path_count()).collect();
        FlowMorphism {
            source: flow.clone(),
            target: flow,
            states,
            paths,
        }
    }

    /// A set map viewed as a morphism of path-empty flows.
    pub fn from_set_map(f: &SetMap) -> Self {
        FlowMorphism {
            source: Arc::new(Flow::discrete(f.domain().clone())),
            target: Arc::new(Flow::discrete(f.codomain().clone())),
            states: f.table().to_vec(),
            paths: Vec::new(),
        }
    }

    /// `Glob(f) : Glob(Z) → Glob(T)`, identity on the states `{0,1}`.
    pub fn glob_of(f: &SetMap) -> Self {
        let source = Arc::new(super::glob(f.domain()));
        let target = Arc::new(super::glob(f.codomain()));
        FlowMorphism {
            source,
            target,
            states: vec![0, 1],
            paths: f.table().to_vec(),
        }
    }

    /// The unique morphism out of the empty flow.
    pub fn from_empty(target: Arc<Flow>) -> Self {
        FlowMorphism {
            source: Arc::new(Flow::empty()),
            target,
            states: Vec::new(),
            paths: Vec::new(),
        }
    }

    pub fn source(&self) -> &Arc<Flow> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Flow> {
        &self.target
    }

    pub fn state_table(&self) -> &[usize] {
        &self.states
    }

    pub fn path_table(&self) -> &[usize] {
        &self.paths
    }

    pub fn state(&self, s: usize) -> usize {
        self.states[s]
    }

    pub fn path(&self, p: usize) -> usize {
        self.paths[p]
    }

    /// The skeleton map `f^0`.
    pub fn f0(&self) -> SetMap {
        SetMap::from_table(
            self.source.states().clone(),
            self.target.states().clone(),
            self.states.clone(),
        )
        .expect("state table is in range")
    }

    /// `P_{α,β}X → P_{f(α),f(β)}Y` as a set map.
    pub fn path_component(&self, src: usize, tgt: usize) -> SetMap {
        let domain = self.source.path_set(src, tgt);
        let (fs, ft) = (self.states[src], self.states[tgt]);
        let codomain = self.target.path_set(fs, ft);
        let offset = self.target.pair_range(fs, ft).start;
        let table = self.source.pair_range(src, tgt).map(|p| self.paths[p] - offset).collect();
        SetMap::from_table(domain, codomain, table).expect("path images stay in their pair")
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &FlowMorphism) -> Result<FlowMorphism> {
        if *self.target != *next.source {
            return Err(Error::NotComposable {
                left: self.target.to_string(),
                right: next.source.to_string(),
            });
        }
        Ok(FlowMorphism {
            source: self.source.clone(),
            target: next.target.clone(),
            states: self.states.iter().map(|&s| next.states[s]).collect(),
            paths: self.paths.iter().map(|&p| next.paths[p]).collect(),
        })
    }

    /// Endpoint compatibility and `f(x*y) = f(x)*f(y)` by full enumeration of composable pairs.
    pub fn validate(&self) -> Result<()> {
        let (x, y) = (&*self.source, &*self.target);
        if self.states.len() != x.states().len() || self.states.iter().any(|&s| s >= y.states().len()) {
            return Err(Error::NotAMorphism("state table has the wrong shape".into()));
        }
        if self.paths.len() != x.path_count() || self.paths.iter().any(|&p| p >= y.path_count()) {
            return Err(Error::NotAMorphism("path table has the wrong shape".into()));
        }
        for (p, path) in x.paths().iter().enumerate() {
            let image = y.path(self.paths[p]);
            if image.src != self.states[path.src] || image.tgt != self.states[path.tgt] {
                return Err(Error::NotAMorphism(format!(
                    "path `{}` lands in the wrong pair",
                    path.label
                )));
            }
        }
        self.check_homomorphism()
    }

    pub fn check_homomorphism(&self) -> Result<()> {
        let (x, y) = (&*self.source, &*self.target);
        for (a, b) in x.composable_pairs() {
            let Some(ab) = x.compose(a, b) else { continue };
            let expected = y.compose(self.paths[a], self.paths[b]);
            if expected != Some(self.paths[ab]) {
                return Err(Error::NotAMorphism(format!(
                    "f({}*{}) differs from f({})*f({})",
                    x.path(a).label,
                    x.path(b).label,
                    x.path(a).label,
                    x.path(b).label
                )));
            }
        }
        Ok(())
    }

    pub fn is_isomorphism(&self) -> bool {
        let states_bij = self.f0().is_bijective();
        let paths_bij = self.source.path_count() == self.target.path_count() && {
            let mut seen = vec![false; self.target.path_count()];
            self.paths.iter().all(|&p| !std::mem::replace(&mut seen[p], true))
        };
        states_bij && paths_bij
    }

    /// Pulls the target back to a discrete flow: the morphism restricted to skeletons.
    pub fn skeleton(&self) -> FlowMorphism {
        FlowMorphism::from_set_map(&self.f0())
    }
}

impl fmt::Display for FlowMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f0 = {}", self.f0())?;
        for (p, path) in self.source.paths().iter().enumerate() {
            write!(f, "; {} ↦ {}", path.label, self.target.path(self.paths[p]).label)?;
        }
        Ok(())
    }
}

/// Convenience for tests and examples: the discrete flow on `{0..n}`.
pub fn discrete_range(n: usize) -> Arc<Flow> {
    Arc::new(Flow::discrete(FinSet::range(n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{concat_globes, glob, phi, FlowBuilder};

    #[test]
    fn wrong_pair_is_rejected() {
        let i = Arc::new(glob(&FinSet::singleton("u")));
        // swapping the endpoints sends u to a pair that has no paths
        let bad = FlowMorphism::new(i.clone(), i.clone(), vec![1, 0], vec![0]);
        assert!(matches!(bad, Err(Error::NotAMorphism(_))));
    }

    #[test]
    fn components_and_composition() {
        let p = phi();
        assert_eq!(p.f0().table(), &[0, 2]);
        let comp = p.path_component(0, 1);
        assert_eq!(comp.domain().len(), 1);
        assert_eq!(comp.codomain().len(), 1);
        let id = FlowMorphism::identity(p.target().clone());
        assert_eq!(p.then(&id).unwrap(), p);
        assert!(id.then(&p).is_err());
    }

    #[test]
    fn homomorphism_condition_is_enforced() {
        let ii = Arc::new(concat_globes(&FinSet::singleton("u"), &FinSet::singleton("v")));
        // Collapse everything onto a one-state flow with an idempotent loop: fine.
        let mut b = FlowBuilder::new(FinSet::range(1));
        let e = b.path("0", "0", "e").unwrap();
        b.compose(e, e, e);
        let lp = Arc::new(b.build().unwrap());
        assert!(FlowMorphism::new(ii.clone(), lp, vec![0, 0, 0], vec![0, 0, 0]).is_ok());
        // Two loops where e*e = f: sending u, v, u*v all to e breaks f(u*v) = f(u)*f(v).
        let mut b = FlowBuilder::new(FinSet::range(1));
        let e = b.path("0", "0", "e").unwrap();
        let f = b.path("0", "0", "f").unwrap();
        b.compose(e, e, f).compose(e, f, f).compose(f, e, f).compose(f, f, f);
        let two = Arc::new(b.build().unwrap());
        assert!(FlowMorphism::new(ii, two, vec![0, 0, 0], vec![0, 0, 0]).is_err());
    }

    #[test]
    fn discrete_helper() {
        assert_eq!(discrete_range(3).states().len(), 3);
    }
}
