//! Lifting properties decided by exhaustive diagonal-filler search.
//!
//! `i` has the left lifting property against `p` when every commuting square
//!
//! ```text
//!   A --top--> X
//!   |          |
//!   i          p
//!   v          v
//!   B -bottom> Y
//! ```
//!
//! admits a diagonal `g : B → X` with `g∘i = top` and `p∘g = bottom`. Both squares and
//! fillers range over finite hom-sets, so the check is a finite enumeration.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finset::{all_maps, hom_count, FinSet, SetMap};
use crate::flow::{enumerate_morphisms, Flow, FlowMorphism, DEFAULT_BUDGET};

/// Environment variable overriding the default search budget.
pub const BUDGET_ENV: &str = "FLOWCALC_BUDGET";

type FlowHomKey = (Arc<Flow>, Arc<Flow>);

/// Search budget plus a memo of flow hom-sets, keyed by the (structural) source and target.
#[derive(Debug)]
pub struct SearchContext {
    budget: u64,
    flow_homs: Mutex<HashMap<FlowHomKey, Arc<Vec<FlowMorphism>>>>,
}

impl Default for SearchContext {
    fn default() -> Self {
        SearchContext::with_budget(DEFAULT_BUDGET)
    }
}

impl SearchContext {
    pub fn with_budget(budget: u64) -> Self {
        SearchContext {
            budget,
            flow_homs: Mutex::new(HashMap::new()),
        }
    }

    /// Default budget unless `FLOWCALC_BUDGET` holds a number.
    pub fn from_env() -> Self {
        let budget = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_BUDGET);
        SearchContext::with_budget(budget)
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn flow_homs(&self, x: &Arc<Flow>, y: &Arc<Flow>) -> Result<Arc<Vec<FlowMorphism>>> {
        let key = (x.clone(), y.clone());
        if let Some(hit) = self.flow_homs.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let homs = Arc::new(enumerate_morphisms(x, y, self.budget)?);
        self.flow_homs.lock().unwrap().insert(key, homs.clone());
        Ok(homs)
    }
}

/// A morphism in a category whose hom-sets can be enumerated.
pub trait Arrow: Clone + PartialEq + fmt::Debug + fmt::Display {
    type Object: Clone + Eq + Hash + fmt::Debug;

    fn dom(&self) -> &Self::Object;
    fn cod(&self) -> &Self::Object;
    /// `next ∘ self`.
    fn then(&self, next: &Self) -> Result<Self>;
    /// All arrows `from → to` in canonical order.
    fn hom(ctx: &SearchContext, from: &Self::Object, to: &Self::Object) -> Result<Arc<Vec<Self>>>;

    /// First filler of a commuting square in canonical order.
    fn first_filler(ctx: &SearchContext, sq: &LiftingSquare<Self>) -> Result<Option<Self>> {
        filler_by_enumeration(ctx, sq)
    }

    /// A commuting square with `left = i`, `right = p` and no filler.
    fn lifting_witness(ctx: &SearchContext, i: &Self, p: &Self) -> Result<Option<LiftingSquare<Self>>> {
        witness_bottoms_first(ctx, i, p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LiftingSquare<A> {
    pub left: A,
    pub right: A,
    pub top: A,
    pub bottom: A,
}

impl<A: Arrow> LiftingSquare<A> {
    pub fn new(left: A, right: A, top: A, bottom: A) -> Self {
        LiftingSquare {
            left,
            right,
            top,
            bottom,
        }
    }

    /// `right ∘ top = bottom ∘ left`.
    pub fn commutes(&self) -> bool {
        match (self.top.then(&self.right), self.left.then(&self.bottom)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    }

    pub fn is_filler(&self, g: &A) -> bool {
        self.left.then(g).is_ok_and(|c| c == self.top) && g.then(&self.right).is_ok_and(|c| c == self.bottom)
    }
}

impl<A: Arrow> fmt::Display for LiftingSquare<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "left: {}\nright: {}\ntop: {}\nbottom: {}",
            self.left, self.right, self.top, self.bottom
        )
    }
}

/// The first diagonal filler of `sq`, or `None`.
pub fn find_filler<A: Arrow>(ctx: &SearchContext, sq: &LiftingSquare<A>) -> Result<Option<A>> {
    if !sq.commutes() {
        return Err(Error::NonCommutingSquare);
    }
    A::first_filler(ctx, sq)
}

/// Reference filler search: scan the whole hom-set `cod(left) → dom(right)`.
pub fn filler_by_enumeration<A: Arrow>(ctx: &SearchContext, sq: &LiftingSquare<A>) -> Result<Option<A>> {
    let homs = A::hom(ctx, sq.left.cod(), sq.right.dom())?;
    Ok(homs.iter().find(|g| sq.is_filler(g)).cloned())
}

fn witness_bottoms_first<A: Arrow>(ctx: &SearchContext, i: &A, p: &A) -> Result<Option<LiftingSquare<A>>> {
    let bottoms = A::hom(ctx, i.cod(), p.cod())?;
    let tops = A::hom(ctx, i.dom(), p.dom())?;
    for bottom in bottoms.iter() {
        let ib = i.then(bottom)?;
        for top in tops.iter() {
            if top.then(p)? != ib {
                continue;
            }
            let sq = LiftingSquare::new(i.clone(), p.clone(), top.clone(), bottom.clone());
            if A::first_filler(ctx, &sq)?.is_none() {
                return Ok(Some(sq));
            }
        }
    }
    Ok(None)
}

pub fn lifting_witness<A: Arrow>(ctx: &SearchContext, i: &A, p: &A) -> Result<Option<LiftingSquare<A>>> {
    A::lifting_witness(ctx, i, p)
}

/// Does `i` lift against `p`?
pub fn has_llp<A: Arrow>(ctx: &SearchContext, i: &A, p: &A) -> Result<bool> {
    Ok(lifting_witness(ctx, i, p)?.is_none())
}

/// Does `p` have the right lifting property against `i`? Scans the squares from `p`'s side
/// (tops outermost) with the generic filler search, independently of [`has_llp`].
pub fn has_rlp<A: Arrow>(ctx: &SearchContext, p: &A, i: &A) -> Result<bool> {
    let tops = A::hom(ctx, i.dom(), p.dom())?;
    let bottoms = A::hom(ctx, i.cod(), p.cod())?;
    for top in tops.iter() {
        let tp = top.then(p)?;
        for bottom in bottoms.iter() {
            if i.then(bottom)? != tp {
                continue;
            }
            let sq = LiftingSquare::new(i.clone(), p.clone(), top.clone(), bottom.clone());
            if filler_by_enumeration(ctx, &sq)?.is_none() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Arrows of `universe` with the LLP against every member of `against`.
pub fn llp_members<A: Arrow>(ctx: &SearchContext, against: &[A], universe: &[A]) -> Result<Vec<A>> {
    let mut out = Vec::new();
    'next: for u in universe {
        for m in against {
            if !has_llp(ctx, u, m)? {
                continue 'next;
            }
        }
        out.push(u.clone());
    }
    Ok(out)
}

/// Arrows of `universe` with the RLP against every member of `against`.
pub fn rlp_members<A: Arrow>(ctx: &SearchContext, against: &[A], universe: &[A]) -> Result<Vec<A>> {
    let mut out = Vec::new();
    'next: for u in universe {
        for k in against {
            if !has_llp(ctx, k, u)? {
                continue 'next;
            }
        }
        out.push(u.clone());
    }
    Ok(out)
}

impl Arrow for SetMap {
    type Object = FinSet;

    fn dom(&self) -> &FinSet {
        self.domain()
    }

    fn cod(&self) -> &FinSet {
        self.codomain()
    }

    fn then(&self, next: &Self) -> Result<Self> {
        SetMap::then(self, next)
    }

    fn hom(ctx: &SearchContext, from: &FinSet, to: &FinSet) -> Result<Arc<Vec<Self>>> {
        let needed = hom_count(from, to);
        if needed > ctx.budget() as u128 {
            return Err(Error::BudgetExceeded {
                needed,
                cap: ctx.budget(),
            });
        }
        Ok(Arc::new(all_maps(from, to).collect()))
    }

    /// Constraints on a set-level filler are pointwise: on the image of `left` it is forced
    /// by `top`, elsewhere any preimage of `bottom` under `right` works. Taking the smallest
    /// admissible value at every point gives the lexicographically first filler.
    fn first_filler(_ctx: &SearchContext, sq: &LiftingSquare<Self>) -> Result<Option<Self>> {
        let (left, right) = (&sq.left, &sq.right);
        let mut forced: Vec<Option<usize>> = vec![None; left.codomain().len()];
        for (a, &b) in left.table().iter().enumerate() {
            let value = sq.top.at(a);
            match forced[b] {
                Some(v) if v != value => return Ok(None),
                _ => forced[b] = Some(value),
            }
        }
        let mut table = Vec::with_capacity(forced.len());
        for (b, f) in forced.into_iter().enumerate() {
            let target = sq.bottom.at(b);
            let value = match f {
                Some(v) => v,
                None => match (0..right.domain().len()).find(|&x| right.at(x) == target) {
                    Some(x) => x,
                    None => return Ok(None),
                },
            };
            table.push(value);
        }
        let g = SetMap::from_table(left.codomain().clone(), right.domain().clone(), table)?;
        debug_assert!(sq.is_filler(&g));
        Ok(Some(g))
    }

    /// Bottoms enumerated in full; for each, only the tops making the square commute
    /// (products of fibers of `p`) are generated.
    fn lifting_witness(ctx: &SearchContext, i: &Self, p: &Self) -> Result<Option<LiftingSquare<Self>>> {
        let bottoms = Self::hom(ctx, i.codomain(), p.codomain())?;
        let mut fibers: Vec<Vec<usize>> = vec![Vec::new(); p.codomain().len()];
        for (x, &y) in p.table().iter().enumerate() {
            fibers[y].push(x);
        }
        let n = i.domain().len();
        for bottom in bottoms.iter() {
            let choices: Vec<&[usize]> = (0..n).map(|a| fibers[bottom.at(i.at(a))].as_slice()).collect();
            if choices.iter().any(|c| c.is_empty()) {
                continue;
            }
            let mut pick = vec![0usize; n];
            loop {
                let table = (0..n).map(|a| choices[a][pick[a]]).collect();
                let top = SetMap::from_table(i.domain().clone(), p.domain().clone(), table)?;
                let sq = LiftingSquare::new(i.clone(), p.clone(), top, bottom.clone());
                if Self::first_filler(ctx, &sq)?.is_none() {
                    return Ok(Some(sq));
                }
                let mut pos = n;
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    pick[pos] += 1;
                    if pick[pos] < choices[pos].len() {
                        break;
                    }
                    pick[pos] = 0;
                }
                if pick.iter().all(|&k| k == 0) {
                    break;
                }
            }
        }
        Ok(None)
    }
}

impl Arrow for FlowMorphism {
    type Object = Arc<Flow>;

    fn dom(&self) -> &Arc<Flow> {
        self.source()
    }

    fn cod(&self) -> &Arc<Flow> {
        self.target()
    }

    fn then(&self, next: &Self) -> Result<Self> {
        FlowMorphism::then(self, next)
    }

    fn hom(ctx: &SearchContext, from: &Arc<Flow>, to: &Arc<Flow>) -> Result<Arc<Vec<Self>>> {
        ctx.flow_homs(from, to)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::{enumerate_universe, named, ClassTag};

    fn ctx() -> SearchContext {
        SearchContext::default()
    }

    #[test]
    fn c_lifts_against_r() {
        let ctx = ctx();
        assert!(has_llp(&ctx, &named::c(), &named::r()).unwrap());
        // any commuting square with left = C and right = R has a filler
        let sq = LiftingSquare::new(
            named::c(),
            named::r(),
            SetMap::from_empty(&FinSet::range(2)),
            SetMap::identity(&FinSet::range(1)),
        );
        let g = find_filler(&ctx, &sq).unwrap().unwrap();
        assert!(sq.is_filler(&g));
    }

    #[test]
    fn r_against_c_is_vacuous() {
        assert!(has_llp(&ctx(), &named::r(), &named::c()).unwrap());
    }

    #[test]
    fn r_does_not_lift_against_itself() {
        let ctx = ctx();
        let sq = LiftingSquare::new(
            named::r(),
            named::r(),
            SetMap::identity(&FinSet::range(2)),
            SetMap::identity(&FinSet::range(1)),
        );
        assert_eq!(find_filler(&ctx, &sq).unwrap(), None);
        assert_eq!(filler_by_enumeration(&ctx, &sq).unwrap(), None);
        assert!(!has_llp(&ctx, &named::r(), &named::r()).unwrap());
        let w = lifting_witness(&ctx, &named::r(), &named::r()).unwrap().unwrap();
        assert!(w.commutes());
    }

    #[test]
    fn identity_left_filler_is_top() {
        let ctx = ctx();
        for p in enumerate_universe(2).unwrap() {
            let id = SetMap::identity(p.domain());
            let sq = LiftingSquare::new(id.clone(), p.clone(), id.clone(), p.clone());
            assert_eq!(find_filler(&ctx, &sq).unwrap(), Some(id));
        }
    }

    #[test]
    fn non_commuting_square_is_an_error() {
        let sq = LiftingSquare::new(
            named::c_plus(),
            named::r(),
            named::c_plus(),
            named::r(),
        );
        assert!(find_filler(&ctx(), &sq).is_ok());
        let bad = LiftingSquare::new(
            named::r(),
            named::c_plus(),
            SetMap::from_table(FinSet::range(2), FinSet::range(1), vec![0, 0]).unwrap(),
            SetMap::from_table(FinSet::range(1), FinSet::range(2), vec![1]).unwrap(),
        );
        assert_eq!(find_filler(&ctx(), &bad), Err(Error::NonCommutingSquare));
    }

    #[test]
    fn fast_filler_matches_enumeration() {
        let ctx = ctx();
        let u = enumerate_universe(2).unwrap();
        for i in &u {
            for p in &u {
                for top in all_maps(i.domain(), p.domain()) {
                    for bottom in all_maps(i.codomain(), p.codomain()) {
                        let sq = LiftingSquare::new(i.clone(), p.clone(), top.clone(), bottom);
                        if !sq.commutes() {
                            continue;
                        }
                        assert_eq!(
                            SetMap::first_filler(&ctx, &sq).unwrap(),
                            filler_by_enumeration(&ctx, &sq).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn llp_and_rlp_searches_agree() {
        let ctx = ctx();
        let u = enumerate_universe(3).unwrap();
        for i in &u {
            for p in &u {
                assert_eq!(has_llp(&ctx, i, p).unwrap(), has_rlp(&ctx, p, i).unwrap(), "{i} / {p}");
            }
        }
    }

    #[test]
    fn member_sweeps() {
        let ctx = ctx();
        let u = enumerate_universe(3).unwrap();
        assert_eq!(llp_members::<SetMap>(&ctx, &[], &u).unwrap(), u);
        let epis: Vec<_> = u.iter().filter(|f| ClassTag::Epi.holds(f)).cloned().collect();
        let monos: Vec<_> = u.iter().filter(|f| ClassTag::Mono.holds(f)).cloned().collect();
        assert_eq!(rlp_members(&ctx, &[named::c()], &u).unwrap(), epis);
        // llp({R}) alone is Mono; the surjections are llp(rlp({R})), i.e. cof({R})
        assert_eq!(llp_members(&ctx, &[named::r()], &u).unwrap(), monos);
        assert_eq!(rlp_members(&ctx, &[named::r()], &u).unwrap(), monos);
        assert_eq!(llp_members(&ctx, &monos, &u).unwrap(), epis);
        assert_eq!(llp_members(&ctx, &epis, &u).unwrap(), monos);
        let epi_or_empty: Vec<_> = u
            .iter()
            .filter(|f| ClassTag::Epi.holds(f) || ClassTag::Empty.holds(f))
            .cloned()
            .collect();
        assert_eq!(rlp_members(&ctx, &[named::c_plus()], &u).unwrap(), epi_or_empty);
        let iso_or_empty: Vec<_> = u
            .iter()
            .filter(|f| ClassTag::Iso.holds(f) || ClassTag::Empty.holds(f))
            .cloned()
            .collect();
        assert_eq!(rlp_members(&ctx, &[named::r(), named::c_plus()], &u).unwrap(), iso_or_empty);
    }

    #[test]
    fn flow_level_lifting_uses_memoized_homs() {
        let ctx = ctx();
        let r = FlowMorphism::from_set_map(&named::r());
        let c = FlowMorphism::from_set_map(&named::c());
        assert!(has_llp(&ctx, &c, &r).unwrap());
        assert!(!has_llp(&ctx, &r, &r).unwrap());
        assert!(!ctx.flow_homs.lock().unwrap().is_empty());
    }
}
