use serde::Serialize;

use super::{all_maps, FinSet, SetMap};
use crate::error::{Error, Result};

pub const DEFAULT_UNIVERSE_BOUND: usize = 4;
pub const MAX_UNIVERSE_BOUND: usize = 6;

/// Isomorphism invariant of an arrow between finite sets: the sizes of its fibers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ArrowShape {
    pub domain: usize,
    pub codomain: usize,
    /// Fiber sizes, descending, one per codomain element.
    pub fibers: Vec<usize>,
}

impl ArrowShape {
    /// Canonical representative: `{0..m} → {0..k}` filling fibers in order.
    pub fn representative(&self) -> SetMap {
        let table = self
            .fibers
            .iter()
            .enumerate()
            .flat_map(|(j, &n)| std::iter::repeat_n(j, n))
            .collect();
        SetMap::from_table(FinSet::range(self.domain), FinSet::range(self.codomain), table)
            .expect("shape is consistent")
    }
}

/// One representative per isomorphism class of arrows between sets of size at most `n`.
pub fn enumerate_universe(n: usize) -> Result<Vec<SetMap>> {
    if n > MAX_UNIVERSE_BOUND {
        return Err(Error::UniverseTooLarge(n));
    }
    let mut shapes = Vec::new();
    for m in 0..=n {
        for k in 0..=n {
            for fibers in partitions(m, k) {
                shapes.push(ArrowShape {
                    domain: m,
                    codomain: k,
                    fibers,
                });
            }
        }
    }
    shapes.sort();
    Ok(shapes.iter().map(ArrowShape::representative).collect())
}

/// Every map `{0..a} → {0..b}` with `a, b ≤ n`, not quotiented.
pub fn all_maps_up_to(n: usize) -> impl Iterator<Item = SetMap> {
    let sets: Vec<FinSet> = (0..=n).map(FinSet::range).collect();
    let pairs: Vec<(FinSet, FinSet)> = sets
        .iter()
        .flat_map(|a| sets.iter().map(move |b| (a.clone(), b.clone())))
        .collect();
    pairs
        .into_iter()
        .flat_map(|(a, b)| all_maps(&a, &b).collect::<Vec<_>>())
}

/// Descending sequences of exactly `k` non-negative parts summing to `m`.
fn partitions(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(remaining: usize, slots: usize, cap: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 0 {
            if remaining == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        for part in (0..=remaining.min(cap)).rev() {
            prefix.push(part);
            go(remaining - part, slots - 1, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(m, k, m, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::ClassTag;
    use std::collections::BTreeSet;

    /// Naive oracle: every map, quotiented by brute-force arrow isomorphism
    /// (permutations of domain and codomain).
    fn count_iso_classes(n: usize) -> usize {
        fn perms(k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(k - 1) {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, k - 1);
                    out.push(q);
                }
            }
            out
        }
        let mut reps: Vec<SetMap> = Vec::new();
        for f in all_maps_up_to(n) {
            let (a, b) = (f.domain().len(), f.codomain().len());
            let iso = reps.iter().any(|g| {
                g.domain().len() == a
                    && g.codomain().len() == b
                    && perms(a).iter().any(|pa| {
                        perms(b).iter().any(|pb| (0..a).all(|i| pb[f.at(i)] == g.at(pa[i])))
                    })
            });
            if !iso {
                reps.push(f);
            }
        }
        reps.len()
    }

    #[test]
    fn small_bounds() {
        let u0 = enumerate_universe(0).unwrap();
        assert_eq!(u0, vec![SetMap::identity(&FinSet::empty())]);
        let u1 = enumerate_universe(1).unwrap();
        assert_eq!(u1.len(), 3);
        assert_eq!(u1[0], SetMap::identity(&FinSet::empty()));
        assert_eq!(u1[1], SetMap::from_empty(&FinSet::range(1)));
        assert_eq!(u1[2], SetMap::identity(&FinSet::range(1)));
    }

    #[test]
    fn counts_match_brute_force_quotient() {
        for n in 0..=3 {
            assert_eq!(enumerate_universe(n).unwrap().len(), count_iso_classes(n), "n={n}");
        }
        // frozen from the oracle above
        assert_eq!(enumerate_universe(2).unwrap().len(), 8);
        assert_eq!(enumerate_universe(3).unwrap().len(), 18);
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(enumerate_universe(7), Err(Error::UniverseTooLarge(7)));
        assert!(enumerate_universe(6).is_ok());
    }

    #[test]
    fn universe_invariants() {
        let u = enumerate_universe(DEFAULT_UNIVERSE_BOUND).unwrap();
        let shapes: BTreeSet<_> = u.iter().map(SetMap::shape).collect();
        assert_eq!(shapes.len(), u.len());
        for f in &u {
            assert!(f.domain().is_empty() || !f.codomain().is_empty());
            if ClassTag::Iso.holds(f) {
                assert!(ClassTag::Mono.holds(f) && ClassTag::Epi.holds(f));
            }
            if ClassTag::SplitMono.holds(f) {
                assert!(ClassTag::Mono.holds(f));
            }
            assert!(ClassTag::Empty.holds(f) != ClassTag::NonEmpty.holds(f));
            assert_eq!(ClassTag::Mono.holds(f) && ClassTag::Epi.holds(f), ClassTag::Iso.holds(f));
        }
    }
}
