//! The nine candidate restrictions of a model structure to sets: a row fixes
//! `(Cof∩W, Fib)`, a column fixes `(Cof, Fib∩W)`, and each cell is either ruled out or not.

use std::collections::HashSet;

use serde::Serialize;

use super::model::two_out_of_three;
use super::{canonical_factorization, ClassPredicate, NamedWfs, TwoOutOfThreeFailure, Universe};
use crate::finset::{all_maps_up_to, ArrowShape, ClassTag, MapClass, SetMap};

pub const ROWS: [NamedWfs; 3] = [NamedWfs::IsoAll, NamedWfs::MonoEpi, NamedWfs::SplitMonoEpiEmpty];
pub const COLUMNS: [NamedWfs; 3] = [NamedWfs::EpiMono, NamedWfs::AllIso, NamedWfs::IsoNonEmptyIsoEmpty];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InclusionFailure {
    /// `"A ⊄ B"`.
    pub claim: String,
    pub witness: SetMap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CellVerdict {
    InclusionFails,
    TwoOutOfThreeFails,
    Possible,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableCell {
    pub row: NamedWfs,
    pub column: NamedWfs,
    /// `Cof∩W ⊆ Cof` and `Fib∩W ⊆ Fib`, whichever fail.
    pub inclusion_failures: Vec<InclusionFailure>,
    /// `W` forced by the cell: `f ∈ W` iff the left factor of `f` in the column lies in the row.
    pub w: String,
    pub two_out_of_three: Option<TwoOutOfThreeFailure>,
    /// Closure of `Fib∩W` under two-out-of-three.
    pub trivial_fibration_closure: String,
    /// A cofibration outside `Cof∩W` once `W` contains that closure, if any.
    pub closure_contradiction: Option<SetMap>,
    pub verdict: CellVerdict,
}

pub fn nine_possibilities_table(universe: &Universe) -> Vec<TableCell> {
    let mut cells = Vec::new();
    for row in ROWS {
        for column in COLUMNS {
            cells.push(cell(row, column, universe));
        }
    }
    cells
}

fn cell(row: NamedWfs, column: NamedWfs, universe: &Universe) -> TableCell {
    let arrows = universe.arrows();
    let (trivial_cof, fib) = (row.left(), row.right());
    let (cof, trivial_fib) = (column.left(), column.right());

    let mut inclusion_failures = Vec::new();
    for (small, big) in [(&trivial_cof, &cof), (&trivial_fib, &fib)] {
        if let Some(w) = arrows.iter().find(|a| small.contains(a) && !big.contains(a)) {
            inclusion_failures.push(InclusionFailure {
                claim: format!("{small} ⊄ {big}"),
                witness: w.clone(),
            });
        }
    }

    let w_members: Vec<SetMap> = arrows
        .iter()
        .filter(|f| trivial_cof.contains(&canonical_factorization(f, column).0))
        .cloned()
        .collect();
    let w_name = name_class(|f| w_members.iter().any(|m| m.shape() == f.shape()), arrows);
    let w = ClassPredicate::extensional(w_name.clone(), &w_members);
    let (violations, witnesses) = two_out_of_three(&w, universe.bound());

    let closure = closure_under_two_out_of_three(&trivial_fib, universe.bound());
    let closure_name = name_class(|f| closure.contains(&f.shape()), arrows);
    let closure_contradiction = arrows
        .iter()
        .find(|a| {
            let in_w = closure.contains(&a.shape());
            (cof.contains(a) && in_w) != trivial_cof.contains(a) || (fib.contains(a) && in_w) != trivial_fib.contains(a)
        })
        .cloned();

    let verdict = if !inclusion_failures.is_empty() {
        CellVerdict::InclusionFails
    } else if violations > 0 {
        CellVerdict::TwoOutOfThreeFails
    } else {
        CellVerdict::Possible
    };
    TableCell {
        row,
        column,
        inclusion_failures,
        w: w_name,
        two_out_of_three: witnesses.into_iter().next(),
        trivial_fibration_closure: closure_name,
        closure_contradiction,
        verdict,
    }
}

/// Smallest class containing `seed` (on maps of size at most `bound`) and closed under
/// two-out-of-three, as a set of arrow shapes.
fn closure_under_two_out_of_three(seed: &MapClass, bound: usize) -> HashSet<ArrowShape> {
    let maps: Vec<SetMap> = all_maps_up_to(bound).collect();
    let mut members: HashSet<ArrowShape> = maps.iter().filter(|m| seed.contains(m)).map(SetMap::shape).collect();
    let pairs: Vec<(ArrowShape, ArrowShape, ArrowShape)> = maps
        .iter()
        .flat_map(|f| maps.iter().filter_map(move |g| f.then(g).ok().map(|gf| (f.shape(), g.shape(), gf.shape()))))
        .collect();
    loop {
        let mut grew = false;
        for (f, g, gf) in &pairs {
            let present = [members.contains(f), members.contains(g), members.contains(gf)];
            if present.iter().filter(|&&b| b).count() == 2 {
                for (s, there) in [f, g, gf].into_iter().zip(present) {
                    if !there {
                        members.insert(s.clone());
                        grew = true;
                    }
                }
            }
        }
        if !grew {
            return members;
        }
    }
}

/// A tag or union of two tags with the same members as `pred` on `arrows`, else `"other"`.
fn name_class(pred: impl Fn(&SetMap) -> bool, arrows: &[SetMap]) -> String {
    let agrees = |c: &MapClass| arrows.iter().all(|a| c.contains(a) == pred(a));
    for t in ClassTag::ALL_TAGS {
        if agrees(&MapClass::Tag(t)) {
            return t.to_string();
        }
    }
    for (i, a) in ClassTag::ALL_TAGS.into_iter().enumerate() {
        for b in ClassTag::ALL_TAGS.into_iter().skip(i + 1) {
            let c = MapClass::union([a.into(), b.into()]);
            if agrees(&c) {
                return c.to_string();
            }
        }
    }
    "other".to_string()
}
